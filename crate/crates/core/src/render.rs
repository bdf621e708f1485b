//! Text rendering of states and three-column evolution tables.
//!
//! Kets print with integer-scaled coefficients: stored amplitudes stay
//! normalized, but for display everything is divided by the smallest nonzero
//! magnitude so the smallest term prints with coefficient 1.

use num_complex::Complex64;

use crate::qcore::StateVector;

const DISPLAY_EPS: f64 = 1e-12;

fn format_coefficient(c: Complex64) -> (bool, String) {
    // returns (negative, magnitude text); empty text means coefficient 1
    if c.im.abs() < DISPLAY_EPS {
        let negative = c.re < 0.0;
        let mag = c.re.abs();
        if (mag - 1.0).abs() < 1e-9 {
            return (negative, String::new());
        }
        if (mag - mag.round()).abs() < 1e-9 {
            return (negative, format!("{}", mag.round() as i64));
        }
        return (negative, format!("{mag:.4}"));
    }
    (false, format!("({:.4}{:+.4}i)", c.re, c.im))
}

/// Render a state as a ket expression. When every nonzero term agrees on all
/// registers after the first, the shared tail is factored out, e.g.
/// `(|01⟩_B + |11⟩_B)|00⟩_A`.
pub fn render_state(state: &StateVector) -> String {
    let layout = state.layout();
    let terms: Vec<(usize, Complex64)> = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > DISPLAY_EPS)
        .map(|(i, a)| (i, *a))
        .collect();
    if terms.is_empty() {
        return "0".to_string();
    }
    let scale = terms
        .iter()
        .map(|(_, a)| a.norm())
        .fold(f64::INFINITY, f64::min);
    let scaled: Vec<(usize, Complex64)> = terms.iter().map(|(i, a)| (*i, a / scale)).collect();

    let registers: Vec<(String, usize)> =
        layout.registers().map(|(n, w)| (n.to_string(), w)).collect();
    let can_factor = registers.len() >= 2 && scaled.len() >= 2 && {
        let tail = |i: usize| {
            registers[1..]
                .iter()
                .map(|(n, _)| layout.register_value(i, n).expect("register exists"))
                .collect::<Vec<_>>()
        };
        let first = tail(scaled[0].0);
        scaled.iter().all(|(i, _)| tail(*i) == first)
    };

    if can_factor {
        let head = &registers[0].0;
        let body = join_terms(scaled.iter().map(|(i, c)| {
            let value = layout.register_value(*i, head).expect("register exists");
            (*c, format!("|{value}\u{27e9}_{head}"))
        }));
        let tail: String = registers[1..]
            .iter()
            .map(|(n, _)| {
                let value = layout.register_value(scaled[0].0, n).expect("register exists");
                format!("|{value}\u{27e9}_{n}")
            })
            .collect();
        format!("({body}){tail}")
    } else {
        join_terms(scaled.iter().map(|(i, c)| (*c, layout.basis_label(*i))))
    }
}

fn join_terms(terms: impl Iterator<Item = (Complex64, String)>) -> String {
    let mut out = String::new();
    for (n, (c, ket)) in terms.enumerate() {
        let (negative, mag) = format_coefficient(c);
        if n == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&mag);
        out.push_str(&ket);
    }
    out
}

/// A three-column table: time t₁ | evolution | time t₂. Rendering is
/// fixed-width and byte-deterministic for identical inputs.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: [String; 3],
    pub rows: Vec<[String; 3]>,
}

pub const ARROW_DOWN: &str = "\u{21d3}";

impl Table {
    pub fn new(headers: [&str; 3]) -> Self {
        Table {
            headers: [headers[0].into(), headers[1].into(), headers[2].into()],
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, left: &str, mid: &str, right: &str) -> &mut Self {
        self.rows.push([left.into(), mid.into(), right.into()]);
        self
    }

    /// A measurement arrow in the left or right column.
    pub fn arrow(&mut self, right_column: bool) -> &mut Self {
        if right_column {
            self.row("", "", ARROW_DOWN)
        } else {
            self.row(ARROW_DOWN, "", "")
        }
    }

    pub fn render(&self) -> String {
        let width = |col: usize| {
            self.rows
                .iter()
                .map(|r| r[col].chars().count())
                .chain(std::iter::once(self.headers[col].chars().count()))
                .max()
                .unwrap_or(0)
        };
        let widths = [width(0), width(1), width(2)];
        let center = |text: &str, w: usize| {
            let len = text.chars().count();
            let pad = w.saturating_sub(len);
            let left = pad / 2;
            format!("{}{}{}", " ".repeat(left), text, " ".repeat(pad - left))
        };
        let mut out = String::new();
        let mut emit = |cells: &[String; 3]| {
            let line = format!(
                "{}  {}  {}",
                center(&cells[0], widths[0]),
                center(&cells[1], widths[1]),
                center(&cells[2], widths[2])
            );
            out.push_str(line.trim_end());
            out.push('\n');
        };
        emit(&self.headers);
        emit(&[String::new(), String::new(), String::new()]);
        for row in &self.rows {
            emit(row);
        }
        out
    }
}

/// Render a pipeline stage table from optional states per cell.
pub fn render_table(
    headers: [&str; 3],
    stages: &[(Option<&StateVector>, &str, Option<&StateVector>)],
    arrows: &[Option<bool>],
) -> String {
    let mut table = Table::new(headers);
    for (n, (left, mid, right)) in stages.iter().enumerate() {
        let left_text = left.map(render_state).unwrap_or_default();
        let right_text = right.map(render_state).unwrap_or_default();
        table.row(&left_text, mid, &right_text);
        if let Some(Some(right_column)) = arrows.get(n) {
            table.arrow(*right_column);
        }
    }
    table.render()
}
