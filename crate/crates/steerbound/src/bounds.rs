//! Loss-dependent steering bounds.
//!
//! For a measurement set of n axes, a cheating party who declares a null
//! outcome on some settings is characterized by a deterministic
//! [`ResponsePlan`]. This module computes, for both steering criteria:
//!
//! - the perfect-efficiency bounds k_n and g_n;
//! - the deterministic bound tables D_n(m/n) and F_n(m/n) over every
//!   possible reported-setting count m;
//! - their upper concave envelopes K_n(eps) and G_n(eps), the best value a
//!   mixture of deterministic plans can reach at mean efficiency eps;
//! - the post-selected bounds k_n(eps) = K_n(eps)/eps and
//!   g_n(eps) = G_n(eps)/eps;
//! - the critical purity an honest party needs under each loss-scoring
//!   regime.

use crate::error::{Error, Result};
use crate::geometry::{BlochVector, MeasurementSet};
use crate::sym3;
use serde::{Deserialize, Serialize};

/// Which steering criterion a quantity refers to: the linear correlation
/// function S_n or the inference variance W_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Linear,
    Variance,
}

impl Criterion {
    pub const ALL: [Criterion; 2] = [Criterion::Linear, Criterion::Variance];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Linear => "linear",
            Criterion::Variance => "variance",
        }
    }
}

impl std::str::FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Criterion::Linear),
            "variance" => Ok(Criterion::Variance),
            other => Err(Error::parse(
                "criterion",
                format!("expected \"linear\" or \"variance\", got {other:?}"),
            )),
        }
    }
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// How a party treats trials where the detector fires blanks: answer at
/// random anyway, admit a null outcome that scores zero, or discard the
/// trial and report only post-selected statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossRegime {
    Anger,
    Depression,
    Postselect,
}

impl LossRegime {
    pub const ALL: [LossRegime; 3] = [
        LossRegime::Anger,
        LossRegime::Depression,
        LossRegime::Postselect,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LossRegime::Anger => "anger",
            LossRegime::Depression => "depression",
            LossRegime::Postselect => "postselect",
        }
    }
}

impl std::str::FromStr for LossRegime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "anger" => Ok(LossRegime::Anger),
            "depression" => Ok(LossRegime::Depression),
            "postselect" => Ok(LossRegime::Postselect),
            other => Err(Error::parse(
                "loss regime",
                format!("expected \"anger\", \"depression\" or \"postselect\", got {other:?}"),
            )),
        }
    }
}

impl std::fmt::Display for LossRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Alice's deterministic reporting pattern: entry j is her answer (+1 or -1)
/// when asked for setting j, or 0 for a declared null.
///
/// At least one entry must be nonzero: the all-null plan reports nothing and
/// has no defined per-plan bound value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct ResponsePlan {
    values: Vec<i8>,
}

impl ResponsePlan {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidPlan("plan has no entries".into()));
        }
        if let Some(bad) = values.iter().find(|v| !matches!(v, -1..=1)) {
            return Err(Error::InvalidPlan(format!(
                "plan entries must be -1, 0 or +1, got {bad}"
            )));
        }
        let plan = ResponsePlan { values };
        if plan.reported() == 0 {
            return Err(Error::PlanSizeOutOfRange { m: 0, n: plan.n() });
        }
        Ok(plan)
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// Number of settings, n.
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Number of non-null entries, m.
    pub fn reported(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }

    /// Apparent efficiency of the plan under uniformly drawn settings: m/n.
    pub fn epsilon_m(&self) -> f64 {
        self.reported() as f64 / self.n() as f64
    }

    /// The plan with every answer sign flipped (same nulls, same bound value).
    pub fn negated(&self) -> ResponsePlan {
        ResponsePlan {
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// Compact encoding, two bits per entry starting at the low end:
    /// `01` = +1, `10` = -1, `00` = null.
    pub fn bitmask(&self) -> u32 {
        let mut mask = 0u32;
        for (j, &v) in self.values.iter().enumerate() {
            let bits = match v {
                1 => 0b01,
                -1 => 0b10,
                _ => 0b00,
            };
            mask |= bits << (2 * j);
        }
        mask
    }

    /// Inverse of [`ResponsePlan::bitmask`] for a plan over `n` settings.
    pub fn from_bitmask(n: usize, mask: u32) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::InvalidPlan(format!(
                "bitmask decoding supports 1..=16 settings, got {n}"
            )));
        }
        if n < 16 && mask >> (2 * n) != 0 {
            return Err(Error::InvalidPlan(format!(
                "bitmask {mask:#x} has bits set beyond {n} settings"
            )));
        }
        let mut values = Vec::with_capacity(n);
        for j in 0..n {
            values.push(match (mask >> (2 * j)) & 0b11 {
                0b00 => 0,
                0b01 => 1,
                0b10 => -1,
                _ => {
                    return Err(Error::InvalidPlan(format!(
                        "bitmask {mask:#x} has invalid code 11 at entry {j}"
                    )))
                }
            });
        }
        ResponsePlan::new(values)
    }
}

impl TryFrom<Vec<i8>> for ResponsePlan {
    type Error = Error;

    fn try_from(values: Vec<i8>) -> Result<Self> {
        ResponsePlan::new(values)
    }
}

impl From<ResponsePlan> for Vec<i8> {
    fn from(plan: ResponsePlan) -> Vec<i8> {
        plan.values
    }
}

/// The set of Bloch orientations attaining a deterministic bound for one
/// plan: a single point, a great circle of equivalent states, or the whole
/// sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OptimalStates {
    Point { orientation: BlochVector },
    Circle { normal: BlochVector },
    AnySphere,
}

/// One row of a deterministic bound table: the best value any plan with
/// `reported` answers can reach, together with every achieving plan and its
/// optimal orientation set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeterministicBoundPoint {
    /// Number of non-null entries m in the achieving plans.
    pub reported: usize,
    /// Apparent efficiency m/n of those plans.
    pub epsilon_m: f64,
    /// Bound on the non-post-selected criterion.
    pub value: f64,
    /// Every plan achieving `value` (ties kept within 1e-10).
    pub plans: Vec<ResponsePlan>,
    /// Optimal orientation set for each plan, parallel to `plans`.
    pub optimal_states: Vec<OptimalStates>,
}

/// Envelope evaluation at one efficiency: the value and the mixture of
/// deterministic strategies realizing it (at most two, by the one-moment
/// structure of the constraint; `reported = 0` denotes the abstain-always
/// strategy at the origin).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeValue {
    pub epsilon: f64,
    pub value: f64,
    /// (reported count, weight) pairs with weights summing to 1.
    pub support: Vec<(usize, f64)>,
}

/// One efficiency sample of a bound curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub epsilon: f64,
    /// Envelope value K_n(eps) or G_n(eps).
    pub envelope: f64,
    /// Post-selected bound k_n(eps) = K/eps or g_n(eps) = G/eps.
    pub post_selected: f64,
    /// sqrt(g_n(eps)), populated for the variance criterion only: the
    /// comparable scale for plots against the linear bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sqrt_post_selected: Option<f64>,
    /// Whether any physical state can violate the bound at this efficiency
    /// (false at and below eps = 1/n, where the post-selected bound reaches 1).
    pub violation_possible: bool,
}

/// A full bound curve for one measurement set and criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub criterion: Criterion,
    pub n: usize,
    pub grid: Vec<GridPoint>,
    pub deterministic_points: Vec<DeterministicBoundPoint>,
}

/// Minimum purity an honest party needs to demonstrate steering, or a
/// sentinel when no physical state suffices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "mu")]
pub enum CriticalPurity {
    Achievable(f64),
    Impossible,
}

impl CriticalPurity {
    pub fn value(self) -> Option<f64> {
        match self {
            CriticalPurity::Achievable(mu) => Some(mu),
            CriticalPurity::Impossible => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Deterministic bounds.
// ---------------------------------------------------------------------------

/// Plans within this of the maximum are all retained as achieving plans.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Eigenvalues within this of the top eigenvalue count as one eigenspace.
pub const EIGENSPACE_TOL: f64 = 1e-9;
/// A required purity above 1 + this is reported as impossible.
const PURITY_SLACK: f64 = 1e-12;

fn check_reported(reported: usize, n: usize) -> Result<()> {
    if reported == 0 || reported > n {
        return Err(Error::PlanSizeOutOfRange { m: reported, n });
    }
    Ok(())
}

/// Perfect-efficiency linear bound k_n: the best mean correlation magnitude
/// over all full-answer sign patterns.
pub fn linear_bound_perfect(set: &MeasurementSet) -> f64 {
    deterministic_linear(set, set.n())
        .expect("m = n is always in range")
        .value
}

/// Perfect-efficiency variance bound g_n: the top eigenvalue of the mean
/// moment matrix (1/n) sum_j b_j b_j^T.
pub fn variance_bound_perfect(set: &MeasurementSet) -> f64 {
    deterministic_variance(set, set.n())
        .expect("m = n is always in range")
        .value
}

/// D_n(m/n): the best mean correlation magnitude over every plan answering
/// exactly `reported` settings, with all achieving plans and orientations.
///
/// Enumeration fixes the lowest answered entry to +1 and restores the global
/// sign flip afterwards, so each antipodal plan pair is evaluated once.
pub fn deterministic_linear(
    set: &MeasurementSet,
    reported: usize,
) -> Result<DeterministicBoundPoint> {
    let n = set.n();
    check_reported(reported, n)?;
    let mut best = f64::NEG_INFINITY;
    let mut candidates: Vec<(f64, Vec<i8>, BlochVector)> = Vec::new();
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != reported {
            continue;
        }
        let anchor = mask.trailing_zeros() as usize;
        let free: Vec<usize> = (anchor + 1..n).filter(|&j| mask >> j & 1 == 1).collect();
        for signs in 0u32..1 << free.len() {
            let mut values = vec![0i8; n];
            values[anchor] = 1;
            let mut sum = set.axis(anchor);
            for (t, &j) in free.iter().enumerate() {
                let a: i8 = if signs >> t & 1 == 1 { -1 } else { 1 };
                values[j] = a;
                sum = sum + set.axis(j) * a as f64;
            }
            let value = sum.norm() / n as f64;
            if value > best {
                best = value;
            }
            if value >= best - DEGENERACY_TOL {
                candidates.push((value, values, sum));
            }
        }
    }
    let mut plans = Vec::new();
    let mut optimal_states = Vec::new();
    for (value, values, sum) in candidates {
        if value < best - DEGENERACY_TOL {
            continue;
        }
        let plan = ResponsePlan::new(values).expect("enumerated plan is valid");
        let orientation = sum.unit();
        plans.push(plan.negated());
        optimal_states.push(OptimalStates::Point {
            orientation: -orientation,
        });
        plans.push(plan);
        optimal_states.push(OptimalStates::Point { orientation });
    }
    Ok(DeterministicBoundPoint {
        reported,
        epsilon_m: reported as f64 / n as f64,
        value: best,
        plans,
        optimal_states,
    })
}

/// F_n(m/n): the best top moment eigenvalue over every subset of exactly
/// `reported` axes, with achieving subsets and their optimal state families.
///
/// Answer signs do not enter the moment matrix, so each achieving subset is
/// represented by its all-positive plan. A two-dimensional top eigenspace
/// yields a great circle of optimal states; three-dimensional, the whole
/// sphere.
pub fn deterministic_variance(
    set: &MeasurementSet,
    reported: usize,
) -> Result<DeterministicBoundPoint> {
    // Value, subset mask, moment matrix, and its eigenvalues (descending).
    type Candidate = (f64, u32, [[f64; 3]; 3], [f64; 3]);
    let n = set.n();
    check_reported(reported, n)?;
    let mut best = f64::NEG_INFINITY;
    let mut candidates: Vec<Candidate> = Vec::new();
    for mask in 1u32..1 << n {
        if mask.count_ones() as usize != reported {
            continue;
        }
        let mut moment = [[0.0f64; 3]; 3];
        for j in 0..n {
            if mask >> j & 1 == 1 {
                let b = set.axis(j);
                let col = [b.x, b.y, b.z];
                for r in 0..3 {
                    for c in 0..3 {
                        moment[r][c] += col[r] * col[c];
                    }
                }
            }
        }
        let eigs = sym3::eigenvalues(&moment);
        let value = eigs[0] / n as f64;
        if value > best {
            best = value;
        }
        if value >= best - DEGENERACY_TOL {
            candidates.push((value, mask, moment, eigs));
        }
    }
    let mut plans = Vec::new();
    let mut optimal_states = Vec::new();
    for (value, mask, moment, eigs) in candidates {
        if value < best - DEGENERACY_TOL {
            continue;
        }
        let values = (0..n).map(|j| (mask >> j & 1) as i8).collect();
        plans.push(ResponsePlan::new(values).expect("enumerated plan is valid"));
        optimal_states.push(match sym3::top_multiplicity(&eigs, EIGENSPACE_TOL) {
            1 => OptimalStates::Point {
                orientation: sym3::eigenvector_for_simple(&moment, eigs[0]).canonical_hemisphere(),
            },
            2 => OptimalStates::Circle {
                normal: sym3::eigenvector_for_simple(&moment, eigs[2]).canonical_hemisphere(),
            },
            _ => OptimalStates::AnySphere,
        });
    }
    Ok(DeterministicBoundPoint {
        reported,
        epsilon_m: reported as f64 / n as f64,
        value: best,
        plans,
        optimal_states,
    })
}

/// Full deterministic table for one criterion, m = 1..=n.
pub fn deterministic_table(
    set: &MeasurementSet,
    criterion: Criterion,
) -> Vec<DeterministicBoundPoint> {
    (1..=set.n())
        .map(|m| match criterion {
            Criterion::Linear => deterministic_linear(set, m),
            Criterion::Variance => deterministic_variance(set, m),
        })
        .map(|p| p.expect("m is within range by construction"))
        .collect()
}

// ---------------------------------------------------------------------------
// Concave envelopes.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct HullVertex {
    epsilon: f64,
    value: f64,
    reported: usize,
}

/// Upper concave hull of the origin plus the deterministic points, by
/// monotone chain. Collinear interior points are dropped, so every hull
/// vertex is an extreme point and envelope support sets are minimal.
fn upper_hull(points: &[DeterministicBoundPoint]) -> Result<Vec<HullVertex>> {
    let n = points.len();
    let mut seen = vec![false; n + 1];
    for p in points {
        if p.reported == 0 || p.reported > n || seen[p.reported] {
            return Err(Error::InvalidGrid(format!(
                "deterministic points must cover each answer count once; \
                 unexpected m={}",
                p.reported
            )));
        }
        if !(p.value.is_finite() && (0.0..=1.0).contains(&p.value)) {
            return Err(Error::InvalidGrid(format!(
                "deterministic bound value {} at m={} is outside [0, 1]",
                p.value, p.reported
            )));
        }
        seen[p.reported] = true;
    }
    let mut sorted: Vec<HullVertex> = points
        .iter()
        .map(|p| HullVertex {
            epsilon: p.epsilon_m,
            value: p.value,
            reported: p.reported,
        })
        .collect();
    sorted.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon));
    let mut hull: Vec<HullVertex> = vec![HullVertex {
        epsilon: 0.0,
        value: 0.0,
        reported: 0,
    }];
    for p in sorted {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.epsilon - a.epsilon) * (p.value - a.value)
                - (b.value - a.value) * (p.epsilon - a.epsilon);
            // Exactly collinear triples land on either side of zero in
            // floating point; treat them as collinear so hull vertices are
            // genuinely extreme and support sets stay minimal.
            if cross >= -1e-14 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    Ok(hull)
}

fn hull_evaluate(hull: &[HullVertex], epsilon: f64) -> EnvelopeValue {
    debug_assert!(epsilon > 0.0 && epsilon <= hull.last().unwrap().epsilon + 1e-15);
    for pair in hull.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if epsilon <= b.epsilon + 1e-15 {
            let t = ((epsilon - a.epsilon) / (b.epsilon - a.epsilon)).clamp(0.0, 1.0);
            let value = a.value + t * (b.value - a.value);
            let support = if t <= 1e-12 {
                vec![(a.reported, 1.0)]
            } else if t >= 1.0 - 1e-12 {
                vec![(b.reported, 1.0)]
            } else {
                vec![(a.reported, 1.0 - t), (b.reported, t)]
            };
            return EnvelopeValue {
                epsilon,
                value,
                support,
            };
        }
    }
    let last = *hull.last().unwrap();
    EnvelopeValue {
        epsilon,
        value: last.value,
        support: vec![(last.reported, 1.0)],
    }
}

/// Upper concave envelope of the deterministic points (plus the
/// answer-nothing origin) at mean efficiency `epsilon`: the best value any
/// mixture of deterministic plans with that mean efficiency can reach.
pub fn envelope(points: &[DeterministicBoundPoint], epsilon: f64) -> Result<EnvelopeValue> {
    if !(epsilon > 0.0 && epsilon <= 1.0) || !epsilon.is_finite() {
        return Err(Error::ParameterRange {
            name: "epsilon",
            value: epsilon,
            requirement: "within (0, 1]",
        });
    }
    let hull = upper_hull(points)?;
    Ok(hull_evaluate(&hull, epsilon))
}

/// Full bound curve: deterministic table, envelope, and post-selected values
/// over an efficiency grid.
pub fn post_selected_curve(
    set: &MeasurementSet,
    criterion: Criterion,
    grid: &[f64],
) -> Result<BoundCurve> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("efficiency grid is empty".into()));
    }
    if let Some(&bad) = grid
        .iter()
        .find(|e| !(e.is_finite() && **e > 0.0 && **e <= 1.0))
    {
        return Err(Error::InvalidGrid(format!(
            "efficiency grid value {bad} is outside (0, 1]"
        )));
    }
    let deterministic_points = deterministic_table(set, criterion);
    let hull = upper_hull(&deterministic_points)?;
    let grid_points = grid
        .iter()
        .map(|&epsilon| {
            let env = hull_evaluate(&hull, epsilon);
            let post_selected = env.value / epsilon;
            let sqrt_post_selected = match criterion {
                Criterion::Linear => None,
                Criterion::Variance => Some(post_selected.sqrt()),
            };
            GridPoint {
                epsilon,
                envelope: env.value,
                post_selected,
                sqrt_post_selected,
                violation_possible: sqrt_post_selected.unwrap_or(post_selected)
                    < 1.0 - PURITY_SLACK,
            }
        })
        .collect();
    Ok(BoundCurve {
        criterion,
        n: set.n(),
        grid: grid_points,
        deterministic_points,
    })
}

/// The default efficiency grid used by sweeps: 0.01, 0.02, ..., 1.00.
pub fn default_grid() -> Vec<f64> {
    (1..=100).map(|k| k as f64 / 100.0).collect()
}

/// Minimum purity an honest party needs to violate the bound at detector
/// efficiency `epsilon` under the given loss-scoring regime.
pub fn critical_purity(
    regime: LossRegime,
    criterion: Criterion,
    set: &MeasurementSet,
    epsilon: f64,
) -> Result<CriticalPurity> {
    if !(epsilon > 0.0 && epsilon <= 1.0) || !epsilon.is_finite() {
        return Err(Error::ParameterRange {
            name: "epsilon",
            value: epsilon,
            requirement: "within (0, 1]",
        });
    }
    let needed = match (regime, criterion) {
        // Forced answers dilute the correlation once and the squared
        // correlation twice.
        (LossRegime::Anger, Criterion::Linear) => linear_bound_perfect(set) / epsilon,
        (LossRegime::Anger, Criterion::Variance) => variance_bound_perfect(set).sqrt() / epsilon,
        // Nulls scored as zero dilute both criteria linearly.
        (LossRegime::Depression, Criterion::Linear) => linear_bound_perfect(set) / epsilon,
        (LossRegime::Depression, Criterion::Variance) => {
            (variance_bound_perfect(set) / epsilon).sqrt()
        }
        // Post-selected comparisons face the efficiency-dependent envelope.
        (LossRegime::Postselect, criterion) => {
            let points = deterministic_table(set, criterion);
            let env = envelope(&points, epsilon)?;
            let post = env.value / epsilon;
            match criterion {
                Criterion::Linear => post,
                Criterion::Variance => post.sqrt(),
            }
        }
    };
    Ok(if needed > 1.0 + PURITY_SLACK {
        CriticalPurity::Impossible
    } else {
        CriticalPurity::Achievable(needed)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_measurement_set;

    #[test]
    fn plans_validate_and_encode() {
        assert!(ResponsePlan::new(vec![]).is_err());
        assert!(ResponsePlan::new(vec![0, 0]).is_err());
        assert!(ResponsePlan::new(vec![2, 1]).is_err());
        let plan = ResponsePlan::new(vec![1, 0, -1]).unwrap();
        assert_eq!(plan.reported(), 2);
        assert_eq!(plan.n(), 3);
        assert!((plan.epsilon_m() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(plan.negated().values(), &[-1, 0, 1]);
        let mask = plan.bitmask();
        assert_eq!(mask, 0b10_00_01);
        assert_eq!(ResponsePlan::from_bitmask(3, mask).unwrap(), plan);
        // Invalid code 11, stray high bits, and all-null all fail.
        assert!(ResponsePlan::from_bitmask(3, 0b11).is_err());
        assert!(ResponsePlan::from_bitmask(2, 0b01_00_01).is_err());
        assert!(ResponsePlan::from_bitmask(3, 0).is_err());
    }

    #[test]
    fn criterion_and_regime_parse_round_trip() {
        for c in Criterion::ALL {
            assert_eq!(c.name().parse::<Criterion>().unwrap(), c);
        }
        for r in LossRegime::ALL {
            assert_eq!(r.name().parse::<LossRegime>().unwrap(), r);
        }
        assert!("quadratic".parse::<Criterion>().is_err());
        assert!("sadness".parse::<LossRegime>().is_err());
    }

    #[test]
    fn octahedron_deterministic_points_are_exact() {
        let set = build_measurement_set(3).unwrap();
        let d2 = deterministic_linear(&set, 2).unwrap();
        assert!((d2.value - 2f64.sqrt() / 3.0).abs() < 1e-15);
        assert_eq!(d2.plans.len(), 12);
        assert_eq!(d2.plans.len(), d2.optimal_states.len());
        // Every achieving plan's orientation is parallel to its signed sum.
        for (plan, state) in d2.plans.iter().zip(&d2.optimal_states) {
            let OptimalStates::Point { orientation } = state else {
                panic!("linear optima are point-kind")
            };
            let mut sum = crate::geometry::BlochVector::ZERO;
            for (j, &a) in plan.values().iter().enumerate() {
                sum = sum + set.axis(j) * a as f64;
            }
            assert!(orientation.dot(sum.unit()) > 1.0 - 1e-12);
        }
        assert!(deterministic_linear(&set, 0).is_err());
        assert!(deterministic_linear(&set, 4).is_err());
    }

    #[test]
    fn variance_point_families_match_eigenstructure() {
        let set = build_measurement_set(3).unwrap();
        // Two orthogonal axes leave a circle of optimal states around the
        // omitted axis.
        let f2 = deterministic_variance(&set, 2).unwrap();
        assert!((f2.value - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(f2.plans.len(), 3);
        for (plan, state) in f2.plans.iter().zip(&f2.optimal_states) {
            let OptimalStates::Circle { normal } = state else {
                panic!("expected circle families")
            };
            // The normal is the omitted axis.
            let omitted = plan.values().iter().position(|&a| a == 0).unwrap();
            assert!(normal.dot(set.axis(omitted)).abs() > 1.0 - 1e-12);
        }
        // The full set is direction-free.
        let f3 = deterministic_variance(&set, 3).unwrap();
        assert_eq!(f3.optimal_states, vec![OptimalStates::AnySphere]);
        // A single axis pins the state to that axis.
        let f1 = deterministic_variance(&set, 1).unwrap();
        for (plan, state) in f1.plans.iter().zip(&f1.optimal_states) {
            let OptimalStates::Point { orientation } = state else {
                panic!("expected point families")
            };
            let answered = plan.values().iter().position(|&a| a != 0).unwrap();
            assert!(orientation.dot(set.axis(answered)).abs() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn envelope_touches_extreme_points_and_interpolates() {
        let set = build_measurement_set(3).unwrap();
        let points = deterministic_table(&set, Criterion::Linear);
        // Every deterministic point of the octahedron table is extreme.
        for p in &points {
            let env = envelope(&points, p.epsilon_m).unwrap();
            assert!((env.value - p.value).abs() < 1e-15);
            assert_eq!(env.support, vec![(p.reported, 1.0)]);
        }
        // Between vertices the envelope is the two-point mixture.
        let env = envelope(&points, 0.5).unwrap();
        assert_eq!(env.support.len(), 2);
        assert_eq!((env.support[0].0, env.support[1].0), (1, 2));
        let w: f64 = env.support.iter().map(|&(_, w)| w).sum();
        assert!((w - 1.0).abs() < 1e-12);
        let mix = env.support[0].1 * points[0].value + env.support[1].1 * points[1].value;
        assert!((env.value - mix).abs() < 1e-15);
        // Below 1/n the origin joins the support.
        let env = envelope(&points, 0.2).unwrap();
        assert_eq!(env.support[0].0, 0);
        assert!(envelope(&points, 0.0).is_err());
        assert!(envelope(&points, 1.2).is_err());
    }

    #[test]
    fn curves_flag_the_impossible_region() {
        let set = build_measurement_set(4).unwrap();
        let curve = post_selected_curve(&set, Criterion::Linear, &default_grid()).unwrap();
        assert_eq!(curve.grid.len(), 100);
        for gp in &curve.grid {
            assert_eq!(gp.violation_possible, gp.epsilon > 0.25 + 1e-12);
            assert!((gp.post_selected - gp.envelope / gp.epsilon).abs() < 1e-12);
            assert!(gp.sqrt_post_selected.is_none());
        }
        let curve = post_selected_curve(&set, Criterion::Variance, &default_grid()).unwrap();
        for gp in &curve.grid {
            let sqrt = gp.sqrt_post_selected.unwrap();
            assert!((sqrt * sqrt - gp.post_selected).abs() < 1e-12);
            assert_eq!(gp.violation_possible, gp.epsilon > 0.25 + 1e-12);
        }
        assert!(post_selected_curve(&set, Criterion::Linear, &[]).is_err());
        assert!(post_selected_curve(&set, Criterion::Linear, &[0.5, 1.5]).is_err());
    }

    #[test]
    fn critical_purity_matches_closed_forms() {
        let set = build_measurement_set(3).unwrap();
        // Nonlinear forced-answer tests need epsilon >= 1/sqrt(3).
        let below = critical_purity(LossRegime::Anger, Criterion::Variance, &set, 0.55).unwrap();
        assert_eq!(below, CriticalPurity::Impossible);
        let above = critical_purity(LossRegime::Anger, Criterion::Variance, &set, 0.99).unwrap();
        let mu = above.value().unwrap();
        assert!((mu - (1.0f64 / 3.0).sqrt() / 0.99).abs() < 1e-12);
        // Null-scored variance at full efficiency reduces to sqrt(g_n).
        let dep = critical_purity(LossRegime::Depression, Criterion::Variance, &set, 1.0).unwrap();
        assert!((dep.value().unwrap() - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        // Post-selected linear at full efficiency is k_n.
        let set10 = build_measurement_set(10).unwrap();
        let hope = critical_purity(LossRegime::Postselect, Criterion::Linear, &set10, 1.0).unwrap();
        assert!((hope.value().unwrap() - linear_bound_perfect(&set10)).abs() < 1e-12);
        assert!(critical_purity(LossRegime::Anger, Criterion::Linear, &set, 0.0).is_err());
    }
}
