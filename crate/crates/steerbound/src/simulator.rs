//! Monte Carlo simulation of the steering protocol.
//!
//! One trial: Bob draws a setting uniformly, both parties measure, Alice
//! reports +1, -1, or null, and the pair (A, B) is tallied. An honest Alice
//! shares a Werner state through a lossy detector; a cheating Alice holds no
//! entanglement at all and plays a mixture of deterministic response plans,
//! sending Bob the plan's optimal local state. Reports carry the linear and
//! variance criterion estimates with delta-method standard errors, and a
//! verdict compares them against a bound curve at the apparent efficiency.
//!
//! Trials are simulated in fixed-size chunks, each on its own counter-mode
//! RNG stream derived from the scenario seed, and chunk tallies merge
//! commutatively — so a report is bit-identical for any worker count, and a
//! sequential transcript replays exactly what the parallel run did.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    BoundCurve, Criterion, DeterministicBoundPoint, LossRegime, OptimalStates, ResponsePlan,
};
use crate::error::{Error, Result};
use crate::geometry::{build_measurement_set, BlochVector, MeasurementSet, WernerParams};

/// Trials per RNG stream; merging is commutative so worker count is
/// irrelevant to the result.
const CHUNK_TRIALS: u64 = 1 << 16;

/// Tally rows: Alice's report.
const ROW_PLUS: usize = 0;
const ROW_MINUS: usize = 1;
const ROW_NULL: usize = 2;

/// Which party model generates Alice's reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AliceKind {
    Honest,
    Cheating,
}

/// One deterministic strategy with its mixing weight: a response plan plus
/// the optimal state family to send Bob.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedStrategy {
    pub weight: f64,
    pub plan: ResponsePlan,
    pub states: OptimalStates,
}

/// A complete, reproducible experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub alice_kind: AliceKind,
    pub regime: LossRegime,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    /// Werner-state parameters; honest scenarios only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<WernerParams>,
    /// Strategy mixture; cheating scenarios only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<Vec<WeightedStrategy>>,
}

impl Scenario {
    pub fn honest(
        n: usize,
        regime: LossRegime,
        params: WernerParams,
        trials: u64,
        seed: u64,
    ) -> Result<Scenario> {
        let scenario = Scenario {
            alice_kind: AliceKind::Honest,
            regime,
            n,
            trials,
            seed,
            params: Some(params),
            strategy: None,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn cheating(
        n: usize,
        regime: LossRegime,
        strategy: Vec<WeightedStrategy>,
        trials: u64,
        seed: u64,
    ) -> Result<Scenario> {
        let scenario = Scenario {
            alice_kind: AliceKind::Cheating,
            regime,
            n,
            trials,
            seed,
            params: None,
            strategy: Some(strategy),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        build_measurement_set(self.n)?;
        if self.trials == 0 {
            return Err(Error::InvalidScenario("trials must be at least 1".into()));
        }
        match self.alice_kind {
            AliceKind::Honest => {
                if self.params.is_none() {
                    return Err(Error::InvalidScenario(
                        "honest scenarios need Werner params".into(),
                    ));
                }
                if self.strategy.is_some() {
                    return Err(Error::InvalidScenario(
                        "honest scenarios must not carry a strategy mixture".into(),
                    ));
                }
            }
            AliceKind::Cheating => {
                if self.params.is_some() {
                    return Err(Error::InvalidScenario(
                        "cheating scenarios must not carry Werner params".into(),
                    ));
                }
                let Some(mixture) = self.strategy.as_deref() else {
                    return Err(Error::InvalidScenario(
                        "cheating scenarios need a strategy mixture".into(),
                    ));
                };
                if mixture.is_empty() {
                    return Err(Error::InvalidScenario("strategy mixture is empty".into()));
                }
                let mut total = 0.0;
                for (i, ws) in mixture.iter().enumerate() {
                    if !(ws.weight >= 0.0 && ws.weight.is_finite()) {
                        return Err(Error::InvalidScenario(format!(
                            "strategy {i} has weight {}",
                            ws.weight
                        )));
                    }
                    total += ws.weight;
                    if ws.plan.n() != self.n {
                        return Err(Error::InvalidScenario(format!(
                            "strategy {i} plan is for n={} but the scenario has n={}",
                            ws.plan.n(),
                            self.n
                        )));
                    }
                    let direction = match ws.states {
                        OptimalStates::Point { orientation } => Some(orientation),
                        OptimalStates::Circle { normal } => Some(normal),
                        OptimalStates::AnySphere => None,
                    };
                    if let Some(v) = direction {
                        if (v.norm() - 1.0).abs() > 1e-6 {
                            return Err(Error::InvalidScenario(format!(
                                "strategy {i} orientation is not a unit vector"
                            )));
                        }
                    }
                }
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidScenario(format!(
                        "mixture weights sum to {total}, expected 1"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Spread a deterministic bound point's achieving plans into a uniform
/// mixture, so each symmetry-equivalent plan (and hence each setting) is
/// nulled equally often. The choice does not affect either criterion value.
pub fn uniform_mixture(point: &DeterministicBoundPoint) -> Vec<WeightedStrategy> {
    let weight = 1.0 / point.plans.len() as f64;
    point
        .plans
        .iter()
        .zip(&point.optimal_states)
        .map(|(plan, states)| WeightedStrategy {
            weight,
            plan: plan.clone(),
            states: *states,
        })
        .collect()
}

/// Build the envelope-achieving mixture from a support set: each supported
/// answer count contributes its weight, split uniformly over its achieving
/// plans. Fails if the support includes the all-null pseudo-strategy, which
/// a response plan cannot express.
pub fn support_mixture(
    points: &[DeterministicBoundPoint],
    support: &[(usize, f64)],
) -> Result<Vec<WeightedStrategy>> {
    let mut mixture = Vec::new();
    for &(m, weight) in support {
        if m == 0 {
            return Err(Error::InvalidScenario(
                "support includes the abstain strategy, which has no response plan".into(),
            ));
        }
        let point = points
            .iter()
            .find(|p| p.reported == m)
            .ok_or(Error::PlanSizeOutOfRange { m, n: points.len() })?;
        let share = weight / point.plans.len() as f64;
        for (plan, states) in point.plans.iter().zip(&point.optimal_states) {
            mixture.push(WeightedStrategy {
                weight: share,
                plan: plan.clone(),
                states: *states,
            });
        }
    }
    Ok(mixture)
}

/// Everything a run measures: tallies, criterion estimates, uncertainties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub n: usize,
    pub regime: LossRegime,
    pub trials: u64,
    pub s_n_estimate: f64,
    pub w_n_estimate: f64,
    /// Delta-method standard errors for [S_n, W_n].
    pub standard_errors: [f64; 2],
    /// Fraction of trials on which Alice reported non-null.
    pub apparent_efficiency: f64,
    /// Per setting: rows A in {+1, -1, null}, columns B in {+1, -1}.
    pub per_setting_counts: Vec<[[u64; 2]; 3]>,
}

/// Outcome of comparing a report against a bound curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    SteeringDemonstrated,
    NotDemonstrated { reason: String },
}

impl Verdict {
    pub fn demonstrated(&self) -> bool {
        matches!(self, Verdict::SteeringDemonstrated)
    }
}

// ---------------------------------------------------------------------------
// Trial generation.
// ---------------------------------------------------------------------------

struct PreparedStrategy {
    values: Vec<i8>,
    states: OptimalStates,
}

enum Model {
    Honest {
        mu: f64,
        epsilon: f64,
    },
    Cheating {
        cumulative: Vec<f64>,
        strategies: Vec<PreparedStrategy>,
    },
}

struct Prepared {
    set: MeasurementSet,
    regime: LossRegime,
    model: Model,
}

impl Prepared {
    fn new(scenario: &Scenario) -> Result<Prepared> {
        scenario.validate()?;
        let set = build_measurement_set(scenario.n)?;
        let model = match scenario.alice_kind {
            AliceKind::Honest => {
                let p = scenario.params.as_ref().expect("validated");
                Model::Honest {
                    mu: p.mu,
                    epsilon: p.epsilon,
                }
            }
            AliceKind::Cheating => {
                let mixture = scenario.strategy.as_deref().expect("validated");
                let mut cumulative = Vec::with_capacity(mixture.len());
                let mut acc = 0.0;
                for ws in mixture {
                    acc += ws.weight;
                    cumulative.push(acc);
                }
                if let Some(last) = cumulative.last_mut() {
                    *last = 1.0;
                }
                let strategies = mixture
                    .iter()
                    .map(|ws| PreparedStrategy {
                        values: ws.plan.values().to_vec(),
                        states: ws.states,
                    })
                    .collect();
                Model::Cheating {
                    cumulative,
                    strategies,
                }
            }
        };
        Ok(Prepared {
            set,
            regime: scenario.regime,
            model,
        })
    }
}

/// One simulated trial, already regime-adjusted.
#[derive(Debug, Clone, Copy)]
struct Trial {
    setting: usize,
    alice: i8,
    bob: i8,
    detected: bool,
}

fn random_sign(rng: &mut ChaCha12Rng) -> i8 {
    if rng.gen::<bool>() {
        1
    } else {
        -1
    }
}

/// Sample a unit vector orthogonal to `normal`, uniformly on its circle.
fn random_on_circle(rng: &mut ChaCha12Rng, normal: BlochVector) -> BlochVector {
    let helper = if normal.x.abs() < 0.9 {
        BlochVector::X
    } else {
        BlochVector::Y
    };
    let e1 = normal.cross(helper).unit();
    let e2 = normal.cross(e1);
    let theta = rng.gen::<f64>() * std::f64::consts::TAU;
    e1 * theta.cos() + e2 * theta.sin()
}

fn random_on_sphere(rng: &mut ChaCha12Rng) -> BlochVector {
    let z = rng.gen::<f64>() * 2.0 - 1.0;
    let phi = rng.gen::<f64>() * std::f64::consts::TAU;
    let s = (1.0 - z * z).max(0.0).sqrt();
    BlochVector::new(s * phi.cos(), s * phi.sin(), z)
}

fn simulate_trial(prepared: &Prepared, rng: &mut ChaCha12Rng) -> Trial {
    let n = prepared.set.n();
    let setting = rng.gen_range(0..n);
    match &prepared.model {
        Model::Honest { mu, epsilon } => {
            let detected = rng.gen::<f64>() < *epsilon;
            if detected {
                let alice = random_sign(rng);
                // Anti-correlation with probability (1 + mu)/2.
                let bob = if rng.gen::<f64>() < (1.0 + mu) / 2.0 {
                    -alice
                } else {
                    alice
                };
                Trial {
                    setting,
                    alice,
                    bob,
                    detected: true,
                }
            } else {
                let bob = random_sign(rng);
                let alice = match prepared.regime {
                    // Forced to answer: an uninformative coin flip.
                    LossRegime::Anger => random_sign(rng),
                    LossRegime::Depression | LossRegime::Postselect => 0,
                };
                Trial {
                    setting,
                    alice,
                    bob,
                    detected: false,
                }
            }
        }
        Model::Cheating {
            cumulative,
            strategies,
        } => {
            let which = if strategies.len() == 1 {
                0
            } else {
                let u = rng.gen::<f64>();
                cumulative
                    .partition_point(|&c| c < u)
                    .min(strategies.len() - 1)
            };
            let strategy = &strategies[which];
            // The sent state anti-aligns with the plan's signed axis sum so
            // Bob's outcomes anti-correlate with the planned answers, the
            // same convention as the honest singlet.
            let state = match strategy.states {
                OptimalStates::Point { orientation } => -orientation,
                OptimalStates::Circle { normal } => random_on_circle(rng, normal),
                OptimalStates::AnySphere => random_on_sphere(rng),
            };
            let mut alice = strategy.values[setting];
            if alice == 0 && prepared.regime == LossRegime::Anger {
                // Under forced answering a null plan entry degenerates to a
                // coin flip.
                alice = random_sign(rng);
            }
            let p_plus = (1.0 + prepared.set.axis(setting).dot(state)) / 2.0;
            let bob = if rng.gen::<f64>() < p_plus { 1 } else { -1 };
            Trial {
                setting,
                alice,
                bob,
                detected: strategy.values[setting] != 0,
            }
        }
    }
}

fn tally_row(alice: i8) -> usize {
    match alice {
        1 => ROW_PLUS,
        -1 => ROW_MINUS,
        _ => ROW_NULL,
    }
}

fn merge_tallies(mut a: Vec<[[u64; 2]; 3]>, b: &[[[u64; 2]; 3]]) -> Vec<[[u64; 2]; 3]> {
    for (ta, tb) in a.iter_mut().zip(b) {
        for r in 0..3 {
            for c in 0..2 {
                ta[r][c] += tb[r][c];
            }
        }
    }
    a
}

fn chunk_tally(prepared: &Prepared, seed: u64, chunk: u64, trials: u64) -> Vec<[[u64; 2]; 3]> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let lo = chunk * CHUNK_TRIALS;
    let hi = (lo + CHUNK_TRIALS).min(trials);
    let mut tally = vec![[[0u64; 2]; 3]; prepared.set.n()];
    for _ in lo..hi {
        let t = simulate_trial(prepared, &mut rng);
        let col = if t.bob == 1 { 0 } else { 1 };
        tally[t.setting][tally_row(t.alice)][col] += 1;
    }
    tally
}

/// Run the scenario in parallel and estimate both criteria.
///
/// Identical scenarios and seeds give bit-identical reports regardless of
/// how many worker threads execute the chunks.
pub fn run(scenario: &Scenario) -> Result<SimulationReport> {
    let prepared = Prepared::new(scenario)?;
    let chunks = scenario.trials.div_ceil(CHUNK_TRIALS);
    let tally = (0..chunks)
        .into_par_iter()
        .map(|chunk| chunk_tally(&prepared, scenario.seed, chunk, scenario.trials))
        .reduce(
            || vec![[[0u64; 2]; 3]; scenario.n],
            |a, b| merge_tallies(a, &b),
        );
    estimate(scenario, &tally)
}

/// Run the scenario sequentially, writing one CSV row per trial, and return
/// the same report `run` would have produced for the same seed.
pub fn run_with_transcript(
    scenario: &Scenario,
    sink: &mut dyn std::io::Write,
) -> Result<SimulationReport> {
    let prepared = Prepared::new(scenario)?;
    writeln!(sink, "trial,setting,alice,bob,detected")?;
    let chunks = scenario.trials.div_ceil(CHUNK_TRIALS);
    let mut tally = vec![[[0u64; 2]; 3]; scenario.n];
    let mut trial_index = 0u64;
    for chunk in 0..chunks {
        let mut rng = ChaCha12Rng::seed_from_u64(scenario.seed);
        rng.set_stream(chunk);
        let lo = chunk * CHUNK_TRIALS;
        let hi = (lo + CHUNK_TRIALS).min(scenario.trials);
        for _ in lo..hi {
            let t = simulate_trial(&prepared, &mut rng);
            let col = if t.bob == 1 { 0 } else { 1 };
            tally[t.setting][tally_row(t.alice)][col] += 1;
            writeln!(
                sink,
                "{},{},{},{},{}",
                trial_index,
                t.setting,
                t.alice,
                t.bob,
                u8::from(t.detected)
            )?;
            trial_index += 1;
        }
    }
    estimate(scenario, &tally)
}

// ---------------------------------------------------------------------------
// Estimation.
// ---------------------------------------------------------------------------

struct SettingStats {
    /// All trials on this setting.
    total: f64,
    /// Non-null trials.
    scored: f64,
    /// Sum of -A*B over scored trials.
    u: f64,
    /// Per A-sign: count and conditional mean of B.
    sign_count: [f64; 2],
    sign_mean: [f64; 2],
    /// Per A-sign: bias-corrected squared conditional mean.
    sign_square: [f64; 2],
}

fn setting_stats(counts: &[[u64; 2]; 3]) -> SettingStats {
    let cell = |r: usize, c: usize| counts[r][c] as f64;
    let total: f64 = (0..3).map(|r| cell(r, 0) + cell(r, 1)).sum();
    let scored = cell(ROW_PLUS, 0) + cell(ROW_PLUS, 1) + cell(ROW_MINUS, 0) + cell(ROW_MINUS, 1);
    // -A*B is +1 on the anti-diagonal of the scored block.
    let u = cell(ROW_PLUS, 1) + cell(ROW_MINUS, 0) - cell(ROW_PLUS, 0) - cell(ROW_MINUS, 1);
    let mut sign_count = [0.0; 2];
    let mut sign_mean = [0.0; 2];
    let mut sign_square = [0.0; 2];
    for (s, row) in [ROW_PLUS, ROW_MINUS].into_iter().enumerate() {
        let c = cell(row, 0) + cell(row, 1);
        sign_count[s] = c;
        if c > 0.0 {
            let m = (cell(row, 0) - cell(row, 1)) / c;
            sign_mean[s] = m;
            // The square of a sample mean over c trials of +-1 outcomes is
            // biased upward by (1 - m^2)/(c - 1); subtract it when defined.
            let correction = if c >= 2.0 {
                (1.0 - m * m) / (c - 1.0)
            } else {
                0.0
            };
            sign_square[s] = m * m - correction;
        }
    }
    SettingStats {
        total,
        scored,
        u,
        sign_count,
        sign_mean,
        sign_square,
    }
}

/// Plug-in multinomial variance of a statistic from its per-cell gradients:
/// Var = sum N_c d_c^2 - (sum N_c d_c)^2 / T.
struct DeltaVar {
    weighted_sq: f64,
    weighted: f64,
    total: f64,
}

impl DeltaVar {
    fn new(total: f64) -> Self {
        DeltaVar {
            weighted_sq: 0.0,
            weighted: 0.0,
            total,
        }
    }

    fn add(&mut self, count: f64, gradient: f64) {
        self.weighted_sq += count * gradient * gradient;
        self.weighted += count * gradient;
    }

    fn standard_error(&self) -> f64 {
        (self.weighted_sq - self.weighted * self.weighted / self.total)
            .max(0.0)
            .sqrt()
    }
}

fn estimate(scenario: &Scenario, tally: &[[[u64; 2]; 3]]) -> Result<SimulationReport> {
    let n = scenario.n;
    let nf = n as f64;
    let total: f64 = scenario.trials as f64;
    let stats: Vec<SettingStats> = tally.iter().map(setting_stats).collect();
    let scored_total: f64 = stats.iter().map(|s| s.scored).sum();
    let eps_hat = scored_total / total;
    for (j, s) in stats.iter().enumerate() {
        let needed = match scenario.regime {
            LossRegime::Postselect => s.scored,
            _ => s.total,
        };
        if needed == 0.0 {
            return Err(Error::NoScoredTrials { setting: j });
        }
    }

    // Linear criterion: per-setting mean of -A*B with equal 1/n weights; the
    // post-selected variant conditions each mean on Alice answering.
    let mut s_estimate = 0.0;
    let mut s_var = DeltaVar::new(total);
    for (j, s) in stats.iter().enumerate() {
        let denom = match scenario.regime {
            LossRegime::Postselect => s.scored,
            _ => s.total,
        };
        let mean = s.u / denom;
        s_estimate += mean / nf;
        for row in [ROW_PLUS, ROW_MINUS, ROW_NULL] {
            for col in 0..2 {
                let count = tally[j][row][col] as f64;
                if count == 0.0 {
                    continue;
                }
                let a = match row {
                    ROW_PLUS => 1.0,
                    ROW_MINUS => -1.0,
                    _ => 0.0,
                };
                let b = if col == 0 { 1.0 } else { -1.0 };
                let x = -a * b;
                let gradient = if scenario.regime == LossRegime::Postselect && row == ROW_NULL {
                    0.0
                } else {
                    (x - mean) / (nf * denom)
                };
                s_var.add(count, gradient);
            }
        }
    }

    // Variance criterion: squared conditional means of B given each non-null
    // answer, weighted by the answer probabilities. The post-selected
    // variant divides the whole sum by the apparent efficiency.
    let mut w_numerator = 0.0;
    let mut w_terms = Vec::with_capacity(n);
    for s in &stats {
        let w_j: f64 = (0..2)
            .map(|sign| s.sign_count[sign] / s.total * s.sign_square[sign])
            .sum();
        w_terms.push(w_j);
        w_numerator += w_j / nf;
    }
    let (w_estimate, postselect_ratio) = match scenario.regime {
        LossRegime::Postselect => (w_numerator / eps_hat, true),
        _ => (w_numerator, false),
    };
    let mut w_var = DeltaVar::new(total);
    for (j, s) in stats.iter().enumerate() {
        // Gradient of the numerator uses the uncorrected squares; the bias
        // correction is O(1/c) and does not move the leading-order variance.
        let w_plug: f64 = (0..2)
            .map(|sign| s.sign_count[sign] / s.total * s.sign_mean[sign] * s.sign_mean[sign])
            .sum();
        for row in [ROW_PLUS, ROW_MINUS, ROW_NULL] {
            for col in 0..2 {
                let count = tally[j][row][col] as f64;
                if count == 0.0 {
                    continue;
                }
                let b = if col == 0 { 1.0 } else { -1.0 };
                let du = match row {
                    ROW_NULL => -w_plug / s.total / nf,
                    _ => {
                        let m = s.sign_mean[row];
                        ((2.0 * b * m - m * m) / s.total - w_plug / s.total) / nf
                    }
                };
                let gradient = if postselect_ratio {
                    let scored_cell = row != ROW_NULL;
                    let de = ((scored_cell as u8) as f64 - eps_hat) / total;
                    du / eps_hat - w_numerator / (eps_hat * eps_hat) * de
                } else {
                    du
                };
                w_var.add(count, gradient);
            }
        }
    }

    Ok(SimulationReport {
        n,
        regime: scenario.regime,
        trials: scenario.trials,
        s_n_estimate: s_estimate,
        w_n_estimate: w_estimate.clamp(0.0, 1.0),
        standard_errors: [s_var.standard_error(), w_var.standard_error()],
        apparent_efficiency: eps_hat,
        per_setting_counts: tally.to_vec(),
    })
}

// ---------------------------------------------------------------------------
// Verdicts.
// ---------------------------------------------------------------------------

/// Compare a report against a bound curve at the report's apparent
/// efficiency: steering is demonstrated only when the criterion estimate
/// minus three standard errors strictly exceeds the interpolated bound.
pub fn verdict(report: &SimulationReport, curve: &BoundCurve) -> Verdict {
    if report.n != curve.n {
        return Verdict::NotDemonstrated {
            reason: format!(
                "report is for n={} but the curve is for n={}",
                report.n, curve.n
            ),
        };
    }
    let (estimate, se) = match curve.criterion {
        Criterion::Linear => (report.s_n_estimate, report.standard_errors[0]),
        Criterion::Variance => (report.w_n_estimate, report.standard_errors[1]),
    };
    let eps = report.apparent_efficiency;
    let mut knots: Vec<(f64, f64)> = curve
        .grid
        .iter()
        .map(|g| (g.epsilon, g.post_selected))
        .collect();
    knots.sort_by(|a, b| a.0.total_cmp(&b.0));
    if eps < knots[0].0 - 1e-12 {
        return Verdict::NotDemonstrated {
            reason: format!(
                "apparent efficiency {eps:.6} lies below the curve grid minimum {:.6}; \
                 no bound value is available there",
                knots[0].0
            ),
        };
    }
    let last = knots[knots.len() - 1].0;
    if eps > last + 1e-12 {
        return Verdict::NotDemonstrated {
            reason: format!(
                "apparent efficiency {eps:.6} lies above the curve grid maximum {last:.6}"
            ),
        };
    }
    let eps_clamped = eps.clamp(knots[0].0, last);
    let mut bound = knots[knots.len() - 1].1;
    for pair in knots.windows(2) {
        if eps_clamped <= pair[1].0 {
            let (x0, y0) = pair[0];
            let (x1, y1) = pair[1];
            let t = if x1 > x0 {
                (eps_clamped - x0) / (x1 - x0)
            } else {
                0.0
            };
            bound = y0 + t * (y1 - y0);
            break;
        }
    }
    if estimate - 3.0 * se > bound {
        Verdict::SteeringDemonstrated
    } else {
        Verdict::NotDemonstrated {
            reason: format!(
                "estimate {estimate:.6} minus 3 standard errors ({:.6}) does not exceed \
                 the bound {bound:.6} at apparent efficiency {eps:.6}",
                3.0 * se
            ),
        }
    }
}
