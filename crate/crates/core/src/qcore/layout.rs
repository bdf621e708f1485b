use crate::bits::BitString;
use crate::error::{Error, Result};

/// Hard cap on total register width; dense vectors above this are not supported.
pub const MAX_BITS: usize = 24;

/// Named registers laid out most-significant first.
///
/// The first listed register occupies the most significant bits of the basis
/// index, and within a register position 0 is its most significant ("left")
/// bit. A basis label therefore reads exactly like the concatenated register
/// contents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    regs: Vec<(String, usize)>,
    total: usize,
}

impl RegisterLayout {
    pub fn new(regs: &[(&str, usize)]) -> Result<Self> {
        let mut total = 0;
        for (i, (name, width)) in regs.iter().enumerate() {
            if *width == 0 {
                return Err(Error::EmptyRegister(name.to_string()));
            }
            if regs[..i].iter().any(|(n, _)| n == name) {
                return Err(Error::DuplicateRegister(name.to_string()));
            }
            total += width;
        }
        if total > MAX_BITS {
            return Err(Error::TooManyBits { requested: total, max: MAX_BITS });
        }
        Ok(RegisterLayout {
            regs: regs.iter().map(|(n, w)| (n.to_string(), *w)).collect(),
            total,
        })
    }

    pub fn total_bits(&self) -> usize {
        self.total
    }

    pub fn dimension(&self) -> usize {
        1 << self.total
    }

    pub fn registers(&self) -> impl Iterator<Item = (&str, usize)> {
        self.regs.iter().map(|(n, w)| (n.as_str(), *w))
    }

    pub fn width_of(&self, register: &str) -> Result<usize> {
        self.regs
            .iter()
            .find(|(n, _)| n == register)
            .map(|(_, w)| *w)
            .ok_or_else(|| Error::UnknownRegister(register.to_string()))
    }

    /// Offset of the register's leftmost bit, counted from the global MSB.
    pub fn offset_of(&self, register: &str) -> Result<usize> {
        let mut offset = 0;
        for (n, w) in &self.regs {
            if n == register {
                return Ok(offset);
            }
            offset += w;
        }
        Err(Error::UnknownRegister(register.to_string()))
    }

    /// Global MSB-first position of a bit within a register.
    pub fn global_position(&self, register: &str, position: usize) -> Result<usize> {
        let width = self.width_of(register)?;
        if position >= width {
            return Err(Error::BitPositionOutOfRange { position, width });
        }
        Ok(self.offset_of(register)? + position)
    }

    /// Right-shift that isolates the bit at a global MSB-first position.
    pub fn shift(&self, global_position: usize) -> usize {
        self.total - 1 - global_position
    }

    pub fn register_value(&self, index: usize, register: &str) -> Result<BitString> {
        let offset = self.offset_of(register)?;
        let width = self.width_of(register)?;
        let shifted = index >> (self.total - offset - width);
        Ok(BitString::from_index(shifted & ((1 << width) - 1), width))
    }

    /// Render a basis index in ket notation, e.g. `|01⟩_B|00⟩_A`.
    pub fn basis_label(&self, index: usize) -> String {
        let mut out = String::new();
        for (name, _) in &self.regs {
            let value = self.register_value(index, name).expect("register exists");
            out.push_str(&format!("|{}\u{27e9}_{}", value, name));
        }
        out
    }

    /// Parse a `basis_label` back into an index (inverse of `basis_label`).
    pub fn parse_label(&self, label: &str) -> Result<usize> {
        let groups: Vec<String> = label
            .split(['|', '\u{27e9}', '_'])
            .filter(|s| !s.is_empty() && s.chars().all(|c| c == '0' || c == '1'))
            .map(|s| s.to_string())
            .collect();
        let concatenated: String = groups.concat();
        if concatenated.len() != self.total {
            return Err(Error::InvalidBitString(label.to_string()));
        }
        Ok(concatenated.parse::<BitString>()?.index())
    }
}

/// The B/A layout used throughout: problem-setting register B and solution
/// register A, each `k` bits wide, B in the most significant position.
pub fn problem_layout(k: usize) -> Result<RegisterLayout> {
    RegisterLayout::new(&[("B", k), ("A", k)])
}
