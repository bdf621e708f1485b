//! Scenario runner: executes a configured scenario against the library
//! modules, renders the table/text view, and builds the structured report.

use serde::{Deserialize, Serialize};

use crate::anthropic::{
    condition_instance, life_conditioned_distribution, speedup_timescale, ToyUniverse,
    YEAR_SECONDS,
};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::grover::{
    grover_success_probability, ideal_transform, ordinary_joint_distribution,
    relational_joint_distribution, total_variation, OracleProblem,
};
use crate::nonlocal::{marginal_statistics, no_signalling_gap, run_bell, BellScenario};
use crate::par;
use crate::qcore::{
    apply, problem_layout, project, states_equal, uniform_superposition, PartialObservable,
};
use crate::render::render_table;
use crate::report::{
    deviation_check, CheckEntry, QueryEntry, Report, StateEntry, WeightEntry, REPORT_VERSION,
};
use crate::timesym::{
    build_instance, enumerate_halvings, read_forward, reconstruction_deviation,
    reduced_complexity_report, Halving,
};

const FORWARD: &str = "\u{21d2} U \u{21d2}";
const BACKWARD: &str = "\u{21d0} U\u{2020} \u{21d0}";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    GroverOrdinary,
    GroverAlice,
    TimesymInstance,
    Reconstruction,
    QueryReport,
    Bell,
    Anthropic,
    Timescale,
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grover-ordinary" => Ok(Scenario::GroverOrdinary),
            "grover-alice" => Ok(Scenario::GroverAlice),
            "timesym-instance" => Ok(Scenario::TimesymInstance),
            "reconstruction" => Ok(Scenario::Reconstruction),
            "query-report" => Ok(Scenario::QueryReport),
            "bell" => Ok(Scenario::Bell),
            "anthropic" => Ok(Scenario::Anthropic),
            "timescale" => Ok(Scenario::Timescale),
            other => Err(Error::InvalidConfig(format!("unknown scenario `{other}`"))),
        }
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Scenario::GroverOrdinary => "grover-ordinary",
            Scenario::GroverAlice => "grover-alice",
            Scenario::TimesymInstance => "timesym-instance",
            Scenario::Reconstruction => "reconstruction",
            Scenario::QueryReport => "query-report",
            Scenario::Bell => "bell",
            Scenario::Anthropic => "anthropic",
            Scenario::Timescale => "timescale",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub k: Option<usize>,
    pub ball: Option<BitString>,
    pub halving: Option<Halving>,
    pub final_value: Option<BitString>,
    pub life_set: Option<Vec<BitString>>,
    pub tq_years: Option<f64>,
    pub rate: Option<f64>,
    pub seed: u64,
    pub trials: usize,
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario) -> Self {
        ScenarioConfig {
            scenario,
            k: None,
            ball: None,
            halving: None,
            final_value: None,
            life_set: None,
            tq_years: None,
            rate: None,
            seed: 0,
            trials: 10_000,
        }
    }

    fn k(&self) -> usize {
        self.k.unwrap_or(2)
    }

    fn require_ball(&self, k: usize) -> Result<&BitString> {
        let ball = self
            .ball
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("missing --ball".into()))?;
        if ball.width() != k {
            return Err(Error::InvalidConfig(format!(
                "--ball has width {}, expected {k}",
                ball.width()
            )));
        }
        Ok(ball)
    }

    fn require_halving(&self, k: usize) -> Result<&Halving> {
        let halving = self
            .halving
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("missing --halving".into()))?;
        if halving.bits() != k {
            return Err(Error::InvalidConfig(format!(
                "--halving covers {} bits, expected {k}",
                halving.bits()
            )));
        }
        Ok(halving)
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub text: String,
    pub report: Report,
}

impl RunOutput {
    pub fn checks_passed(&self) -> bool {
        self.report.all_checks_passed()
    }
}

pub fn run(config: &ScenarioConfig) -> Result<RunOutput> {
    let (text, states, weights, queries, checks) = match config.scenario {
        Scenario::GroverOrdinary => grover_ordinary(config)?,
        Scenario::GroverAlice => grover_alice(config)?,
        Scenario::TimesymInstance => timesym_instance(config)?,
        Scenario::Reconstruction => reconstruction(config)?,
        Scenario::QueryReport => query_report(config)?,
        Scenario::Bell => bell(config)?,
        Scenario::Anthropic => anthropic(config)?,
        Scenario::Timescale => timescale(config)?,
    };
    let mut text = text;
    text.push('\n');
    for check in &checks {
        text.push_str(&format!(
            "check {}: {} ({})\n",
            check.name,
            if check.passed { "PASS" } else { "FAIL" },
            check.detail
        ));
    }
    let report = Report {
        version: REPORT_VERSION,
        scenario: config.scenario.to_string(),
        config: serde_json::to_value(config).expect("config serializes"),
        seed: config.seed,
        states,
        weights,
        queries,
        checks,
    };
    Ok(RunOutput { text, report })
}

type Pieces = (String, Vec<StateEntry>, Vec<WeightEntry>, Vec<QueryEntry>, Vec<CheckEntry>);

fn boolean_check(name: &str, passed: bool, detail: String) -> CheckEntry {
    CheckEntry { name: name.to_string(), passed, detail }
}

const PIPELINE_HEADERS: [&str; 3] = ["time t1, meas. of B", "t1 -> t2", "time t2, meas. of A"];

fn grover_ordinary(config: &ScenarioConfig) -> Result<Pieces> {
    let k = config.k();
    let ball = config.require_ball(k)?;
    let layout = problem_layout(k)?;
    let psi0 = uniform_superposition(&layout, "B")?;
    let obs_b = PartialObservable::full("B", k)?;
    let (p_initial, projected) = project(&psi0, &obs_b, ball)?;
    if p_initial <= 0.0 {
        return Err(Error::ZeroWeightOutcome);
    }
    let post = projected.normalize()?;
    let u = ideal_transform(k);
    let final_state = apply(&post, &u)?;

    let obs_a = PartialObservable::full("A", k)?;
    let (p_solution, _) = project(&final_state, &obs_a, ball)?;
    let checks = vec![
        deviation_check("final measurement selects the solution", (p_solution - 1.0).abs(), 1e-10),
        deviation_check("norm preserved", (final_state.norm() - 1.0).abs(), 1e-10),
    ];

    let text = format!(
        "grover-ordinary: k={k}, ball={ball}\n\n{}",
        render_table(
            PIPELINE_HEADERS,
            &[(Some(&psi0), "", None), (Some(&post), FORWARD, Some(&final_state))],
            &[Some(false), None],
        )
    );
    Ok((
        text,
        vec![
            StateEntry::from_state("initial", &psi0),
            StateEntry::from_state("after_initial_measurement", &post),
            StateEntry::from_state("final", &final_state),
        ],
        vec![WeightEntry { name: "initial_outcome_probability".into(), value: p_initial }],
        vec![],
        checks,
    ))
}

fn grover_alice(config: &ScenarioConfig) -> Result<Pieces> {
    let k = config.k();
    let ball = config.require_ball(k)?;
    let layout = problem_layout(k)?;
    let psi0 = uniform_superposition(&layout, "B")?;
    let u = ideal_transform(k);
    let forward = apply(&psi0, &u)?;
    let obs_a = PartialObservable::full("A", k)?;
    let (p_final, projected) = project(&forward, &obs_a, ball)?;
    if p_final <= 0.0 {
        return Err(Error::ZeroWeightOutcome);
    }
    let post = projected.normalize()?;

    let tv = total_variation(
        &ordinary_joint_distribution(&u, k)?,
        &relational_joint_distribution(&u, k)?,
    );
    let expected_weight = 1.0 / (1u64 << k) as f64;
    let checks = vec![
        deviation_check("relational equivalence of measurement orders", tv, 1e-10),
        deviation_check(
            "postponed projection has Born weight 1/N",
            (p_final - expected_weight).abs(),
            1e-10,
        ),
    ];

    let text = format!(
        "grover-alice: k={k}, ball={ball}\n\n{}",
        render_table(
            PIPELINE_HEADERS,
            &[(Some(&psi0), FORWARD, Some(&forward)), (None, "", Some(&post))],
            &[Some(true), None],
        )
    );
    Ok((
        text,
        vec![
            StateEntry::from_state("initial", &psi0),
            StateEntry::from_state("evolved", &forward),
            StateEntry::from_state("after_final_measurement", &post),
        ],
        vec![WeightEntry { name: "final_outcome_probability".into(), value: p_final }],
        vec![],
        checks,
    ))
}

fn timesym_instance(config: &ScenarioConfig) -> Result<Pieces> {
    let k = config.k();
    let halving = config.require_halving(k)?;
    let final_value = config
        .final_value
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("missing --final-value".into()))?;
    let u = ideal_transform(k);
    let instance = build_instance(&u, halving, final_value)?;

    let psi0 = uniform_superposition(&problem_layout(k)?, "B")?;
    let forward = apply(&psi0, &u)?;
    let obs = PartialObservable::new("A", halving.final_half.clone())?;
    let (_, projected) = project(&forward, &obs, final_value)?;
    let projected = projected.normalize()?;
    let (input, output) = read_forward(&instance, &u)?;

    let checks = vec![
        boolean_check(
            "causal loop closes",
            states_equal(&output, &projected, 1e-10),
            "U applied to the reduced input reproduces the projected final state".into(),
        ),
        boolean_check(
            "candidate set size is sqrt(N)",
            instance.candidate_set.len() == 1 << (k / 2),
            format!("{} candidates", instance.candidate_set.len()),
        ),
        deviation_check("norm of reduced input", (instance.reduced_input.norm() - 1.0).abs(), 1e-10),
    ];

    let candidates = instance
        .candidate_set
        .iter()
        .map(|b| b.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let text = format!(
        "timesym-instance: k={k}, initial={:?}, final={:?}, final-value={final_value}\n\n{}\n\
         read forward:\n\n{}\ncandidate set: {{{candidates}}}, weight {}\n",
        halving.initial,
        halving.final_half,
        render_table(
            PIPELINE_HEADERS,
            &[
                (Some(&psi0), FORWARD, Some(&forward)),
                (Some(&instance.reduced_input), BACKWARD, Some(&projected)),
            ],
            &[Some(true), None],
        ),
        render_table(
            ["time t1", "t1 -> t2", "time t2"],
            &[(Some(&input), FORWARD, Some(&output))],
            &[None],
        ),
        instance.weight,
    );
    Ok((
        text,
        vec![
            StateEntry::from_state("initial", &psi0),
            StateEntry::from_state("evolved", &forward),
            StateEntry::from_state("projected_final", &projected),
            StateEntry::from_state("reduced_input", &instance.reduced_input),
            StateEntry::from_state("forward_output", &output),
        ],
        vec![WeightEntry { name: "instance_weight".into(), value: instance.weight }],
        vec![],
        checks,
    ))
}

fn reconstruction(config: &ScenarioConfig) -> Result<Pieces> {
    let k = config.k();
    let u = ideal_transform(k);
    let halvings = enumerate_halvings(k)?;
    let deviations: Vec<f64> = par::map_indexed(halvings.len(), |i| {
        reconstruction_deviation(&u, &halvings[i])
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
    let reconstructed = deviations.iter().filter(|d| **d < 1e-10).count();

    let checks: Vec<CheckEntry> = halvings
        .iter()
        .zip(&deviations)
        .map(|(h, d)| {
            deviation_check(
                &format!("reconstruction initial={:?} final={:?}", h.initial, h.final_half),
                *d,
                1e-10,
            )
        })
        .collect();

    let text = format!(
        "reconstruction: k={k}\n{}/{} halvings reconstructed, max deviation {max_deviation:.3e}\n",
        reconstructed,
        halvings.len(),
    );
    let weights = vec![WeightEntry { name: "max_deviation".into(), value: max_deviation }];
    Ok((text, vec![], weights, vec![], checks))
}

fn query_report(config: &ScenarioConfig) -> Result<Pieces> {
    let k = config.k();
    let report = reduced_complexity_report(k)?;
    let ball = match &config.ball {
        Some(b) => b.clone(),
        None => BitString::zeros(k),
    };
    let problem = OracleProblem::new(k, ball)?;
    let (success, grover_queries) = grover_success_probability(&problem)?;

    let mut checks = vec![boolean_check(
        "order-level query agreement",
        report.order_level_agreement,
        format!(
            "reduced classical {} vs Grover {}",
            report.reduced_classical_queries, report.grover_queries
        ),
    )];
    if k == 2 {
        checks.push(deviation_check("N=4 search is exact in one query", (success - 1.0).abs(), 1e-10));
    }
    checks.push(boolean_check(
        "reduced problem is strictly easier",
        report.reduced_classical_queries < report.original_classical_queries,
        format!(
            "{} < {}",
            report.reduced_classical_queries, report.original_classical_queries
        ),
    ));

    let text = format!(
        "query-report: k={k}\n\
         N = {} drawers, reduced problem size {} = sqrt(N)\n\
         classical worst case: {} queries; reduced: {} queries\n\
         Grover circuit: {} oracle queries, success probability {success:.10}\n\
         reduced-classical and Grover counts agree at order Theta(sqrt(N))\n",
        report.n_drawers,
        report.reduced_size,
        report.original_classical_queries,
        report.reduced_classical_queries,
        report.grover_queries,
    );
    Ok((
        text,
        vec![],
        vec![WeightEntry { name: "grover_success_probability".into(), value: success }],
        vec![
            QueryEntry { name: "classical_worst_case".into(), count: report.original_classical_queries },
            QueryEntry { name: "reduced_classical_worst_case".into(), count: report.reduced_classical_queries },
            QueryEntry { name: "grover_circuit".into(), count: grover_queries },
        ],
        checks,
    ))
}

fn bell(config: &ScenarioConfig) -> Result<Pieces> {
    let scenario = BellScenario::computational_pair();
    let stats = marginal_statistics(&scenario, config.trials, config.seed)?;
    let gap = no_signalling_gap(&scenario);
    let example = run_bell(&scenario, config.seed)?;

    let checks = vec![
        boolean_check(
            "outcomes perfectly correlated",
            stats.equal_fraction == 1.0,
            format!("equal fraction {}", stats.equal_fraction),
        ),
        // 4σ binomial bound around 1/2; 0.02 at the default 10,000 trials.
        boolean_check(
            "per-party frequencies near 1/2",
            {
                let bound = 0.02f64.max(4.0 * (0.25 / stats.trials as f64).sqrt());
                (0..2).all(|p| (stats.frequency[p][0] - 0.5).abs() < bound)
            },
            format!(
                "party 1: {:.4}, party 2: {:.4}",
                stats.frequency[0][0], stats.frequency[1][0]
            ),
        ),
        deviation_check("causal loops close forward", stats.max_forward_check_deviation, 1e-10),
        deviation_check("no-signalling", gap, 1e-10),
    ];

    let text = format!(
        "bell: {} trials, seed {}\n\
         analytic marginals: party 1 = ({:.4}, {:.4}), party 2 = ({:.4}, {:.4})\n\
         sampled frequencies: party 1 = ({:.4}, {:.4}), party 2 = ({:.4}, {:.4})\n\
         equal-outcome fraction: {}\n\
         two causal loops per run; worst forward-check deviation {:.3e}\n\
         no-signalling gap {gap:.3e}\n",
        stats.trials,
        config.seed,
        stats.analytic[0][0],
        stats.analytic[0][1],
        stats.analytic[1][0],
        stats.analytic[1][1],
        stats.frequency[0][0],
        stats.frequency[0][1],
        stats.frequency[1][0],
        stats.frequency[1][1],
        stats.equal_fraction,
        stats.max_forward_check_deviation,
    );
    Ok((
        text,
        vec![
            StateEntry::from_state("entangled_pair", &crate::nonlocal::phi_plus()),
            StateEntry::from_state("loop1_state_at_t0", &example.trace1.state_at_t0),
            StateEntry::from_state("loop2_state_at_t0", &example.trace2.state_at_t0),
        ],
        vec![
            WeightEntry { name: "party1_frequency_0".into(), value: stats.frequency[0][0] },
            WeightEntry { name: "party2_frequency_0".into(), value: stats.frequency[1][0] },
            WeightEntry { name: "equal_fraction".into(), value: stats.equal_fraction },
        ],
        vec![],
        checks,
    ))
}

fn anthropic(config: &ScenarioConfig) -> Result<Pieces> {
    let k = config.k();
    let halving = config.require_halving(k)?.clone();
    let life_set = config
        .life_set
        .clone()
        .ok_or_else(|| Error::InvalidConfig("missing --life-set".into()))?;
    let universe = ToyUniverse::new(k, life_set, halving)?;
    let analytic = life_conditioned_distribution(&universe)?;

    let outcomes = par::map_indexed(config.trials, |i| {
        condition_instance(&universe, par::derive_seed(config.seed, i as u64))
    });
    let mut counts: Vec<(BitString, u64)> =
        analytic.iter().map(|(o, _)| (o.clone(), 0)).collect();
    let mut all_in_life = true;
    let mut initial_consistent = true;
    for outcome in outcomes {
        let inst = outcome?;
        all_in_life &= universe.life_set().contains(&inst.outcome);
        initial_consistent &=
            inst.outcome.select(&universe.halving().initial) == inst.initial_value;
        if let Some(entry) = counts.iter_mut().find(|(o, _)| *o == inst.outcome) {
            entry.1 += 1;
        }
    }
    let n = config.trials as f64;

    let mut checks = vec![
        boolean_check("every outcome is life-compatible", all_in_life, String::new()),
        boolean_check(
            "initial half of the outcome matches the initial selection",
            initial_consistent,
            String::new(),
        ),
    ];
    let mut within_bounds = true;
    for ((outcome, p), (_, count)) in analytic.iter().zip(&counts) {
        let sigma = (n * p * (1.0 - p)).sqrt();
        let dev = (*count as f64 - n * p).abs();
        within_bounds &= dev <= 3.0_f64.max(3.0 * sigma);
        let _ = outcome;
    }
    checks.push(boolean_check(
        "sampled frequencies match the analytic distribution (3 sigma)",
        within_bounds,
        format!("{} trials", config.trials),
    ));

    let mut text = format!("anthropic: k={k}, {} trials, seed {}\n", config.trials, config.seed);
    let weights = analytic
        .iter()
        .zip(&counts)
        .flat_map(|((outcome, p), (_, count))| {
            let freq = *count as f64 / n;
            text.push_str(&format!(
                "outcome {outcome}: analytic {p:.6}, sampled {freq:.6}\n"
            ));
            [
                WeightEntry { name: format!("analytic_{outcome}"), value: *p },
                WeightEntry { name: format!("frequency_{outcome}"), value: freq },
            ]
        })
        .collect();
    Ok((text, vec![], weights, vec![], checks))
}

fn timescale(config: &ScenarioConfig) -> Result<Pieces> {
    let tq_years = config
        .tq_years
        .ok_or_else(|| Error::InvalidConfig("missing --tq-years".into()))?;
    let rate = config
        .rate
        .ok_or_else(|| Error::InvalidConfig("missing --rate".into()))?;
    let estimate = speedup_timescale(tq_years * YEAR_SECONDS, rate)?;

    let n_identity = estimate.problem_size == (estimate.quantum_time_s * estimate.step_rate).powi(2);
    let tc_identity = estimate.classical_time_s == estimate.problem_size / estimate.step_rate;
    let checks = vec![
        boolean_check("N = (T_q * r)^2", n_identity, format!("N = {:.6e}", estimate.problem_size)),
        boolean_check(
            "T_c = N / r",
            tc_identity,
            format!("T_c = {:.6e} s", estimate.classical_time_s),
        ),
    ];

    let text = format!(
        "timescale: T_q = {tq_years:.6e} years at {rate} steps/s\n\
         quadratic speedup implies N = {:.6e} drawers\n\
         classical (no speedup): T_c = {:.6e} s = {:.6e} years\n",
        estimate.problem_size,
        estimate.classical_time_s,
        estimate.classical_time_years(),
    );
    Ok((
        text,
        vec![],
        vec![
            WeightEntry { name: "problem_size".into(), value: estimate.problem_size },
            WeightEntry { name: "classical_time_years".into(), value: estimate.classical_time_years() },
        ],
        vec![],
        checks,
    ))
}
