//! Independent brute-force verification of the analytic results.
//!
//! Everything here deliberately re-derives its answers from first principles
//! with naive methods: quasi-uniform sphere grids instead of closed-form
//! maximization, a cyclic-Jacobi eigensolver instead of the closed-form one,
//! and explicit 4x4 density matrices instead of Bloch-vector shortcuts. The
//! module shares no numeric helper code with the bound computations it
//! checks; agreement between the two code paths is the point.

use crate::bounds::{Criterion, ResponsePlan};
use crate::error::{Error, Result};
use crate::geometry::{BlochVector, MeasurementSet};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest supported measurement-set size; sized for stack-allocated
/// per-point scratch in the grid sweeps.
const MAX_N: usize = 10;

/// Default Fibonacci-lattice resolution.
pub const DEFAULT_GRID_POINTS: usize = 100_000;

/// A deterministic quasi-uniform grid of unit vectors on the sphere.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    points: Vec<BlochVector>,
    pitch: f64,
}

impl SphereGrid {
    /// Fibonacci lattice: points wind down the sphere at the golden angle,
    /// giving near-constant area per point without randomness.
    pub fn fibonacci(count: usize) -> Result<SphereGrid> {
        if count == 0 {
            return Err(Error::InvalidGrid(
                "sphere grid needs at least one point".into(),
            ));
        }
        let golden_angle = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
        let points = (0..count)
            .map(|k| {
                let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                let rho = (1.0 - z * z).max(0.0).sqrt();
                let phi = golden_angle * k as f64;
                BlochVector::new(rho * phi.cos(), rho * phi.sin(), z)
            })
            .collect();
        Ok(SphereGrid {
            points,
            // Conservative angular spacing bound for the lattice.
            pitch: std::f64::consts::PI / (count as f64).sqrt(),
        })
    }

    pub fn points(&self) -> &[BlochVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Upper bound on the angular distance from any unit vector to the grid.
    pub fn pitch(&self) -> f64 {
        self.pitch
    }
}

/// Index-tied running maximum; ties resolve to the lowest index so parallel
/// reductions are order-independent.
#[derive(Debug, Clone, Copy)]
struct Best {
    value: f64,
    index: usize,
}

impl Best {
    const NONE: Best = Best {
        value: f64::NEG_INFINITY,
        index: usize::MAX,
    };

    fn merge(self, other: Best) -> Best {
        if other.value > self.value || (other.value == self.value && other.index < self.index) {
            other
        } else {
            self
        }
    }
}

/// Maximum over the grid of the plan's mean signed correlation
/// (1/n) sum_j A_j (b_j . r), with the maximizing grid point.
pub fn grid_max_linear(
    set: &MeasurementSet,
    plan: &ResponsePlan,
    grid: &SphereGrid,
) -> (f64, BlochVector) {
    let n = set.n() as f64;
    let mut direction = BlochVector::ZERO;
    for (j, &a) in plan.values().iter().enumerate() {
        direction = direction + set.axis(j) * a as f64;
    }
    let best = grid
        .points()
        .par_iter()
        .enumerate()
        .map(|(index, &r)| Best {
            value: direction.dot(r) / n,
            index,
        })
        .reduce(|| Best::NONE, Best::merge);
    (best.value, grid.points()[best.index])
}

/// Maximum over the grid of the plan's mean squared alignment
/// (1/n) sum over answered j of (b_j . r)^2, with the maximizing grid point.
pub fn grid_max_variance(
    set: &MeasurementSet,
    plan: &ResponsePlan,
    grid: &SphereGrid,
) -> (f64, BlochVector) {
    let n = set.n() as f64;
    let answered: Vec<BlochVector> = plan
        .values()
        .iter()
        .enumerate()
        .filter(|&(_, &a)| a != 0)
        .map(|(j, _)| set.axis(j))
        .collect();
    let best = grid
        .points()
        .par_iter()
        .enumerate()
        .map(|(index, &r)| {
            let mut s = 0.0;
            for &b in &answered {
                let d = b.dot(r);
                s += d * d;
            }
            Best {
                value: s / n,
                index,
            }
        })
        .reduce(|| Best::NONE, Best::merge);
    (best.value, grid.points()[best.index])
}

/// Per-reported-count grid maxima: entry m-1 holds the best value over every
/// plan with m answers and every grid state, with its maximizing state.
///
/// For a fixed state the best m-answer plan keeps the m strongest
/// correlations, so one pass over the grid covers the whole plan space.
pub fn grid_linear_table(set: &MeasurementSet, grid: &SphereGrid) -> Vec<(f64, BlochVector)> {
    grid_table(set, grid, |d| d.abs())
}

/// Variance analogue of [`grid_linear_table`].
pub fn grid_variance_table(set: &MeasurementSet, grid: &SphereGrid) -> Vec<(f64, BlochVector)> {
    grid_table(set, grid, |d| d * d)
}

fn grid_table(
    set: &MeasurementSet,
    grid: &SphereGrid,
    score: impl Fn(f64) -> f64 + Sync,
) -> Vec<(f64, BlochVector)> {
    let n = set.n();
    assert!(n <= MAX_N);
    let axes = set.axes();
    let table = grid
        .points()
        .par_iter()
        .enumerate()
        .map(|(index, &r)| {
            let mut scores = [0.0f64; MAX_N];
            for (j, &b) in axes.iter().enumerate() {
                scores[j] = score(b.dot(r));
            }
            scores[..n].sort_by(|a, b| b.total_cmp(a));
            let mut row = [Best::NONE; MAX_N];
            let mut acc = 0.0;
            for m in 0..n {
                acc += scores[m];
                row[m] = Best {
                    value: acc / n as f64,
                    index,
                };
            }
            row
        })
        .reduce(
            || [Best::NONE; MAX_N],
            |mut a, b| {
                for m in 0..n {
                    a[m] = a[m].merge(b[m]);
                }
                a
            },
        );
    table[..n]
        .iter()
        .map(|best| (best.value, grid.points()[best.index]))
        .collect()
}

/// Exact bound for plans with `reported` answers, by exhaustive enumeration.
pub fn exhaustive_bound(
    set: &MeasurementSet,
    criterion: Criterion,
    reported: usize,
) -> Result<f64> {
    Ok(exhaustive_bound_detail(set, criterion, reported)?.value)
}

/// An exhaustively computed bound together with every achieving plan.
#[derive(Debug, Clone)]
pub struct ExhaustiveBound {
    pub value: f64,
    /// Plans within 1e-12 of the maximum. For the variance criterion answer
    /// signs are irrelevant, so one all-positive plan represents each subset.
    pub optimal_plans: Vec<ResponsePlan>,
}

/// As [`exhaustive_bound`], also collecting the achieving plans.
pub fn exhaustive_bound_detail(
    set: &MeasurementSet,
    criterion: Criterion,
    reported: usize,
) -> Result<ExhaustiveBound> {
    let n = set.n();
    if reported == 0 || reported > n {
        return Err(Error::PlanSizeOutOfRange { m: reported, n });
    }
    match criterion {
        Criterion::Linear => Ok(exhaustive_linear(set, reported)),
        Criterion::Variance => Ok(exhaustive_variance(set, reported)),
    }
}

const TIE_TOL: f64 = 1e-12;

/// Walk all 3^n answer assignments with a ternary odometer and keep the
/// best mean correlation magnitude among those with the requested count.
fn exhaustive_linear(set: &MeasurementSet, reported: usize) -> ExhaustiveBound {
    let n = set.n();
    let mut digits = vec![0i8; n];
    let mut value = f64::NEG_INFINITY;
    let mut candidates: Vec<(f64, Vec<i8>)> = Vec::new();
    'odometer: loop {
        let mut nonzero = 0;
        let mut sum = BlochVector::ZERO;
        for (j, &d) in digits.iter().enumerate() {
            let a = [0.0, 1.0, -1.0][d as usize];
            if d != 0 {
                nonzero += 1;
                sum = sum + set.axis(j) * a;
            }
        }
        if nonzero == reported {
            let v = sum.norm() / n as f64;
            if v > value {
                value = v;
            }
            if v >= value - TIE_TOL {
                candidates.push((v, digits.iter().map(|&d| [0, 1, -1][d as usize]).collect()));
            }
        }
        for pos in 0..n {
            digits[pos] += 1;
            if digits[pos] < 3 {
                continue 'odometer;
            }
            digits[pos] = 0;
        }
        break;
    }
    let optimal_plans = candidates
        .into_iter()
        .filter(|&(v, _)| v >= value - TIE_TOL)
        .map(|(_, values)| ResponsePlan::new(values).expect("enumerated plan is valid"))
        .collect();
    ExhaustiveBound {
        value,
        optimal_plans,
    }
}

/// Walk all subsets of the requested size and keep the best top eigenvalue
/// of the summed outer products, via cyclic Jacobi rotations.
fn exhaustive_variance(set: &MeasurementSet, reported: usize) -> ExhaustiveBound {
    let n = set.n();
    let mut value = f64::NEG_INFINITY;
    let mut candidates: Vec<(f64, u32)> = Vec::new();
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
        let v = jacobi_eigenvalues(moment)[0] / n as f64;
        if v > value {
            value = v;
        }
        if v >= value - TIE_TOL {
            candidates.push((v, mask));
        }
    }
    let optimal_plans = candidates
        .into_iter()
        .filter(|&(v, _)| v >= value - TIE_TOL)
        .map(|(_, mask)| {
            let values = (0..n).map(|j| (mask >> j & 1) as i8).collect();
            ResponsePlan::new(values).expect("enumerated plan is valid")
        })
        .collect();
    ExhaustiveBound {
        value,
        optimal_plans,
    }
}

/// Eigenvalues of a symmetric 3x3 matrix by cyclic Jacobi rotations,
/// descending. Deliberately distinct from the closed-form solver used by the
/// analytic modules.
fn jacobi_eigenvalues(mut a: [[f64; 3]; 3]) -> [f64; 3] {
    let scale: f64 = a
        .iter()
        .flatten()
        .fold(0.0f64, |acc, &v| acc.max(v.abs()))
        .max(1.0);
    for _sweep in 0..64 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if off <= (1e-16 * scale) * (1e-16 * scale) {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q].abs() <= 1e-300 {
                continue;
            }
            let phi = 0.5 * (2.0 * a[p][q]).atan2(a[p][p] - a[q][q]);
            let (s, c) = phi.sin_cos();
            let (app, aqq, apq) = (a[p][p], a[q][q], a[p][q]);
            a[p][p] = c * c * app + 2.0 * s * c * apq + s * s * aqq;
            a[q][q] = s * s * app - 2.0 * s * c * apq + c * c * aqq;
            a[p][q] = 0.0;
            a[q][p] = 0.0;
            let r = 3 - p - q;
            let (arp, arq) = (a[r][p], a[r][q]);
            a[r][p] = c * arp + s * arq;
            a[p][r] = a[r][p];
            a[r][q] = -s * arp + c * arq;
            a[q][r] = a[r][q];
        }
    }
    let mut vals = [a[0][0], a[1][1], a[2][2]];
    vals.sort_by(|x, y| y.total_cmp(x));
    vals
}

// ---------------------------------------------------------------------------
// Density-matrix model of the shared state.
// ---------------------------------------------------------------------------

type C64 = Complex64;
type Mat2 = [[C64; 2]; 2];
type Mat4 = [[C64; 4]; 4];

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn pauli(k: usize) -> Mat2 {
    let i = C64::i();
    match k {
        0 => [[c(0.0), c(1.0)], [c(1.0), c(0.0)]],
        1 => [[c(0.0), -i], [i, c(0.0)]],
        _ => [[c(1.0), c(0.0)], [c(0.0), c(-1.0)]],
    }
}

/// Projector (I + outcome * axis . sigma) / 2.
fn spin_projector(axis: BlochVector, outcome: f64) -> Mat2 {
    let (x, y, z) = (axis.x, axis.y, axis.z);
    let i = C64::i();
    [
        [
            c((1.0 + outcome * z) / 2.0),
            (c(x) - i * y) * (outcome / 2.0),
        ],
        [
            (c(x) + i * y) * (outcome / 2.0),
            c((1.0 - outcome * z) / 2.0),
        ],
    ]
}

fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = [[c(0.0); 4]; 4];
    for (ra, rb, ca, cb) in itertools4() {
        out[2 * ra + rb][2 * ca + cb] = a[ra][ca] * b[rb][cb];
    }
    out
}

fn itertools4() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..2).flat_map(|ra| {
        (0..2).flat_map(move |rb| (0..2).flat_map(move |ca| (0..2).map(move |cb| (ra, rb, ca, cb))))
    })
}

fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[c(0.0); 4]; 4];
    for r in 0..4 {
        for k in 0..4 {
            let v = a[r][k];
            for s in 0..4 {
                out[r][s] += v * b[k][s];
            }
        }
    }
    out
}

fn trace4(a: &Mat4) -> C64 {
    a[0][0] + a[1][1] + a[2][2] + a[3][3]
}

/// The shared two-qubit state: singlet fraction mu plus white noise,
/// as an explicit 4x4 matrix in the product basis |a b>.
fn werner_density(mu: f64) -> Mat4 {
    let mut rho = [[c(0.0); 4]; 4];
    // Singlet (|01> - |10>)/sqrt(2) occupies indices 1 and 2.
    rho[1][1] = c(mu / 2.0);
    rho[2][2] = c(mu / 2.0);
    rho[1][2] = c(-mu / 2.0);
    rho[2][1] = c(-mu / 2.0);
    for k in 0..4 {
        rho[k][k] += c((1.0 - mu) / 4.0);
    }
    rho
}

fn check_mu(mu: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&mu) || !mu.is_finite() {
        return Err(Error::ParameterRange {
            name: "mu",
            value: mu,
            requirement: "within [0, 1]",
        });
    }
    Ok(())
}

/// Joint outcome probabilities for ideal projective measurements along
/// `axis_a` and `axis_b`; row index 0 means outcome +1, 1 means -1 (Alice),
/// likewise for the column (Bob).
pub fn werner_joint_probabilities(
    mu: f64,
    axis_a: BlochVector,
    axis_b: BlochVector,
) -> Result<[[f64; 2]; 2]> {
    check_mu(mu)?;
    let rho = werner_density(mu);
    let mut out = [[0.0f64; 2]; 2];
    for (ia, &a) in [1.0f64, -1.0].iter().enumerate() {
        for (ib, &b) in [1.0f64, -1.0].iter().enumerate() {
            let proj = kron(&spin_projector(axis_a, a), &spin_projector(axis_b, b));
            out[ia][ib] = trace4(&mat4_mul(&proj, &rho)).re;
        }
    }
    Ok(out)
}

/// Conditional probabilities of Bob's outcome relative to Alice's, for the
/// same measurement axis on both sides, given that Alice's detector fired.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WernerConditionals {
    /// P(B = -A | detection) = (1 + mu) / 2.
    pub anti_aligned: f64,
    /// P(B = +A | detection) = (1 - mu) / 2.
    pub aligned: f64,
}

/// Compute the equal-setting conditionals from the explicit density matrix.
pub fn werner_conditionals(mu: f64) -> Result<WernerConditionals> {
    // Any axis gives the same table by symmetry; use a generic one so no
    // coordinate alignment can mask an error.
    let axis = BlochVector::new(0.3, -0.4, 1.2).unit();
    let joint = werner_joint_probabilities(mu, axis, axis)?;
    let p_plus = joint[0][0] + joint[0][1];
    let p_minus = joint[1][0] + joint[1][1];
    Ok(WernerConditionals {
        anti_aligned: (joint[0][1] / p_plus + joint[1][0] / p_minus) / 2.0,
        aligned: (joint[0][0] / p_plus + joint[1][1] / p_minus) / 2.0,
    })
}

/// Bob's conditioned Bloch vector after Alice measures `axis` and announces
/// `outcome`, via projection and partial trace of the 4x4 state.
pub fn werner_conditioned_state(mu: f64, axis: BlochVector, outcome: i8) -> Result<BlochVector> {
    check_mu(mu)?;
    if outcome != 1 && outcome != -1 {
        return Err(Error::ParameterRange {
            name: "outcome",
            value: outcome as f64,
            requirement: "+1 or -1",
        });
    }
    let eye: Mat2 = [[c(1.0), c(0.0)], [c(0.0), c(1.0)]];
    let proj = kron(&spin_projector(axis, outcome as f64), &eye);
    let collapsed = mat4_mul(&proj, &mat4_mul(&werner_density(mu), &proj));
    // Partial trace over Alice's factor: rho_B[i][j] = sum_a M[2a+i][2a+j].
    let mut rho_b = [[c(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            rho_b[i][j] = collapsed[i][j] + collapsed[2 + i][2 + j];
        }
    }
    let p = (rho_b[0][0] + rho_b[1][1]).re;
    let mut bloch = [0.0f64; 3];
    for (k, v) in bloch.iter_mut().enumerate() {
        let sigma = pauli(k);
        let mut t = c(0.0);
        for i in 0..2 {
            for j in 0..2 {
                t += rho_b[i][j] * sigma[j][i];
            }
        }
        *v = t.re / p;
    }
    Ok(BlochVector::new(bloch[0], bloch[1], bloch[2]))
}

// ---------------------------------------------------------------------------
// Verification reports.
// ---------------------------------------------------------------------------

/// One named comparison between a claimed value and the oracle's own.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub claimed: f64,
    pub observed: f64,
    pub tolerance: f64,
}

/// The outcome of verifying one measurement set's bound tables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    pub grid_points: usize,
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Floating-point slack allowed on exact enumerations.
pub const ENUMERATION_TOL: f64 = 1e-12;

/// Verify claimed deterministic bound tables (entry m-1 holds the bound for
/// m reported answers) against exhaustive enumeration and the sphere grid.
///
/// Grid maxima are discretized lower bounds: they must never exceed a claim
/// beyond floating noise, and must come within a pitch-derived deficit of it.
pub fn verify_bound_tables(
    set: &MeasurementSet,
    claimed_linear: &[f64],
    claimed_variance: &[f64],
    grid: &SphereGrid,
) -> Result<VerificationReport> {
    let n = set.n();
    if claimed_linear.len() != n || claimed_variance.len() != n {
        return Err(Error::InvalidGrid(format!(
            "expected {n} claimed values per criterion, got {} linear and {} variance",
            claimed_linear.len(),
            claimed_variance.len()
        )));
    }
    let mut checks = Vec::new();
    let grid_linear = grid_linear_table(set, grid);
    let grid_variance = grid_variance_table(set, grid);
    // Worst-case discretization deficits: the linear objective loses
    // 1 - cos(theta) of its scale within one pitch of the optimum, the
    // quadratic objective loses up to twice that.
    let linear_deficit = (1.0 - grid.pitch().cos()).max(1e-9) * 2.0;
    let variance_deficit = 2.0 * grid.pitch() * grid.pitch();
    for m in 1..=n {
        let exh_lin = exhaustive_bound(set, Criterion::Linear, m)?;
        checks.push(CheckOutcome {
            name: format!("linear m={m}: exhaustive enumeration"),
            passed: (exh_lin - claimed_linear[m - 1]).abs() <= ENUMERATION_TOL,
            claimed: claimed_linear[m - 1],
            observed: exh_lin,
            tolerance: ENUMERATION_TOL,
        });
        let exh_var = exhaustive_bound(set, Criterion::Variance, m)?;
        checks.push(CheckOutcome {
            name: format!("variance m={m}: exhaustive enumeration"),
            passed: (exh_var - claimed_variance[m - 1]).abs() <= ENUMERATION_TOL,
            claimed: claimed_variance[m - 1],
            observed: exh_var,
            tolerance: ENUMERATION_TOL,
        });
        let (lin, _) = grid_linear[m - 1];
        let lin_gap = claimed_linear[m - 1] - lin;
        checks.push(CheckOutcome {
            name: format!("linear m={m}: sphere-grid maximum"),
            passed: (-ENUMERATION_TOL..=linear_deficit).contains(&lin_gap),
            claimed: claimed_linear[m - 1],
            observed: lin,
            tolerance: linear_deficit,
        });
        let (var, _) = grid_variance[m - 1];
        let var_gap = claimed_variance[m - 1] - var;
        checks.push(CheckOutcome {
            name: format!("variance m={m}: sphere-grid maximum"),
            passed: (-ENUMERATION_TOL..=variance_deficit).contains(&var_gap),
            claimed: claimed_variance[m - 1],
            observed: var,
            tolerance: variance_deficit,
        });
    }
    Ok(VerificationReport {
        n,
        grid_points: grid.len(),
        checks,
    })
}

/// Verify the Bloch-vector shortcut for the conditioned state against the
/// density-matrix computation, over both outcomes of every axis in the set.
pub fn verify_conditioned_states(
    set: &MeasurementSet,
    mu: f64,
    shortcut: impl Fn(BlochVector, i8) -> Result<BlochVector>,
) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    for (j, &axis) in set.axes().iter().enumerate() {
        for outcome in [1i8, -1] {
            let direct = werner_conditioned_state(mu, axis, outcome)?;
            let quick = shortcut(axis, outcome)?;
            let gap = (direct - quick).norm();
            checks.push(CheckOutcome {
                name: format!("conditioned state mu={mu} axis {j} outcome {outcome:+}"),
                passed: gap <= 1e-12,
                claimed: 0.0,
                observed: gap,
                tolerance: 1e-12,
            });
        }
    }
    Ok(VerificationReport {
        n: set.n(),
        grid_points: 0,
        checks,
    })
}
