//! Bloch-sphere geometry: measurement axis sets drawn from the regular solids,
//! Werner-state parameters, and the conditioned states Bob holds after Alice
//! announces a result.
//!
//! Each supported set size n picks the solid whose vertex pairs define n
//! distinct measurement axes: the square (n = 2), octahedron (3), cube (4),
//! icosahedron (6), and dodecahedron (10). One canonical representative per
//! antipodal vertex pair is kept, chosen by hemisphere rule.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Golden ratio, the edge constant of the icosahedral solids.
pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

/// Tolerance for unit-norm and spherical-design validation.
pub const AXIS_TOL: f64 = 1e-9;

/// A real three-vector on (or inside) the Bloch sphere.
///
/// Serialized as a plain `[x, y, z]` triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub const ZERO: BlochVector = BlochVector::new(0.0, 0.0, 0.0);
    pub const X: BlochVector = BlochVector::new(1.0, 0.0, 0.0);
    pub const Y: BlochVector = BlochVector::new(0.0, 1.0, 0.0);
    pub const Z: BlochVector = BlochVector::new(0.0, 0.0, 1.0);

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Directs `self` to unit length. Panics on the zero vector, which no
    /// validated caller can produce.
    pub fn unit(self) -> Self {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        self * (1.0 / n)
    }

    /// Angle in radians between two directions (not reduced modulo sign).
    pub fn angle_to(self, other: Self) -> f64 {
        let c = (self.dot(other) / (self.norm() * other.norm())).clamp(-1.0, 1.0);
        c.acos()
    }

    /// Canonical representative of the antipodal pair {v, -v}: positive z,
    /// with ties broken toward positive y and then positive x.
    pub fn canonical_hemisphere(self) -> Self {
        const TIE: f64 = 1e-9;
        let keep = if self.z.abs() > TIE {
            self.z > 0.0
        } else if self.y.abs() > TIE {
            self.y > 0.0
        } else {
            self.x >= 0.0
        };
        if keep {
            self
        } else {
            -self
        }
    }
}

impl Add for BlochVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for BlochVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for BlochVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for BlochVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl From<[f64; 3]> for BlochVector {
    fn from(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(v: BlochVector) -> Self {
        [v.x, v.y, v.z]
    }
}

/// Expectation value of the Pauli observable along `axis` for a qubit whose
/// Bloch vector is `state`.
pub fn expectation(axis: BlochVector, state: BlochVector) -> f64 {
    axis.dot(state)
}

/// The regular solid backing a measurement set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solid {
    Square,
    Octahedron,
    Cube,
    Icosahedron,
    Dodecahedron,
}

impl Solid {
    /// Number of measurement axes (antipodal vertex pairs).
    pub fn axis_count(self) -> usize {
        match self {
            Solid::Square => 2,
            Solid::Octahedron => 3,
            Solid::Cube => 4,
            Solid::Icosahedron => 6,
            Solid::Dodecahedron => 10,
        }
    }

    pub fn from_axis_count(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Solid::Square),
            3 => Ok(Solid::Octahedron),
            4 => Ok(Solid::Cube),
            6 => Ok(Solid::Icosahedron),
            10 => Ok(Solid::Dodecahedron),
            other => Err(Error::UnsupportedSetSize(other)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Solid::Square => "square",
            Solid::Octahedron => "octahedron",
            Solid::Cube => "cube",
            Solid::Icosahedron => "icosahedron",
            Solid::Dodecahedron => "dodecahedron",
        }
    }
}

/// All supported set sizes, in ascending order.
pub const SUPPORTED_SIZES: [usize; 5] = [2, 3, 4, 6, 10];

fn canonical_axes(solid: Solid) -> Vec<BlochVector> {
    let p = GOLDEN_RATIO;
    match solid {
        Solid::Square => vec![BlochVector::X, BlochVector::Y],
        Solid::Octahedron => vec![BlochVector::X, BlochVector::Y, BlochVector::Z],
        // Cube body diagonals, one per antipodal pair, all in the upper hemisphere.
        Solid::Cube => {
            let s = 3f64.sqrt().recip();
            vec![
                BlochVector::new(s, s, s),
                BlochVector::new(-s, s, s),
                BlochVector::new(s, -s, s),
                BlochVector::new(-s, -s, s),
            ]
        }
        // Icosahedron vertices (0, ±1, ±p) and cyclic images, scaled to unit length.
        Solid::Icosahedron => {
            let s = (1.0 + p * p).sqrt().recip();
            vec![
                BlochVector::new(0.0, 1.0, p) * s,
                BlochVector::new(0.0, -1.0, p) * s,
                BlochVector::new(1.0, p, 0.0) * s,
                BlochVector::new(-1.0, p, 0.0) * s,
                BlochVector::new(p, 0.0, 1.0) * s,
                BlochVector::new(-p, 0.0, 1.0) * s,
            ]
        }
        // Dodecahedron vertices: a cube inscribed at (±1, ±1, ±1) plus the
        // (0, ±1/p, ±p) cyclic family, all divided by sqrt(3).
        Solid::Dodecahedron => {
            let s = 3f64.sqrt().recip();
            let q = p.recip();
            vec![
                BlochVector::new(s, s, s),
                BlochVector::new(-s, s, s),
                BlochVector::new(s, -s, s),
                BlochVector::new(-s, -s, s),
                BlochVector::new(0.0, q * s, p * s),
                BlochVector::new(0.0, -q * s, p * s),
                BlochVector::new(q * s, p * s, 0.0),
                BlochVector::new(-q * s, p * s, 0.0),
                BlochVector::new(p * s, 0.0, q * s),
                BlochVector::new(-p * s, 0.0, q * s),
            ]
        }
    }
}

/// A validated set of n qubit measurement axes with regular-solid symmetry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasurementSetRaw")]
pub struct MeasurementSet {
    solid: Solid,
    axes: Vec<BlochVector>,
}

#[derive(Deserialize)]
struct MeasurementSetRaw {
    solid: Solid,
    axes: Vec<BlochVector>,
}

impl TryFrom<MeasurementSetRaw> for MeasurementSet {
    type Error = Error;
    fn try_from(raw: MeasurementSetRaw) -> Result<Self> {
        MeasurementSet::from_axes(raw.solid, raw.axes)
    }
}

impl MeasurementSet {
    /// Number of measurement settings.
    pub fn n(&self) -> usize {
        self.axes.len()
    }

    pub fn solid(&self) -> Solid {
        self.solid
    }

    pub fn axes(&self) -> &[BlochVector] {
        &self.axes
    }

    pub fn axis(&self, j: usize) -> BlochVector {
        self.axes[j]
    }

    /// Both hemispheres: every axis together with its antipode, axes first.
    pub fn full_vertices(&self) -> Vec<BlochVector> {
        let mut v: Vec<BlochVector> = self.axes.clone();
        v.extend(self.axes.iter().map(|&b| -b));
        v
    }

    /// Validates an explicit axis list against every set invariant: correct
    /// count, unit norms, pairwise distinct directions, and the quadratic
    /// moment of the full vertex set. Rotated copies of the canonical sets
    /// pass; irregular collections are rejected.
    pub fn from_axes(solid: Solid, axes: Vec<BlochVector>) -> Result<Self> {
        let n = solid.axis_count();
        if axes.len() != n {
            return Err(Error::InvalidAxes(format!(
                "{} requires {} axes, got {}",
                solid.name(),
                n,
                axes.len()
            )));
        }
        for (j, b) in axes.iter().enumerate() {
            if !(b.x.is_finite() && b.y.is_finite() && b.z.is_finite()) {
                return Err(Error::InvalidAxes(format!("axis {j} is not finite")));
            }
            if (b.norm() - 1.0).abs() > AXIS_TOL {
                return Err(Error::InvalidAxes(format!(
                    "axis {j} has norm {} (expected 1)",
                    b.norm()
                )));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if axes[i].dot(axes[j]).abs() > 1.0 - AXIS_TOL {
                    return Err(Error::InvalidAxes(format!(
                        "axes {i} and {j} are collinear"
                    )));
                }
            }
        }
        // Quadratic moment M = sum_j b_j b_j^T. For n >= 3 the vertex set is a
        // spherical 2-design, so M = (n/3) I; for the square M is the rank-2
        // projector onto its plane (M^2 = M, trace 2).
        let mut m = [[0.0f64; 3]; 3];
        for b in &axes {
            let c = [b.x, b.y, b.z];
            for r in 0..3 {
                for s in 0..3 {
                    m[r][s] += c[r] * c[s];
                }
            }
        }
        let tol = AXIS_TOL * n as f64;
        if n >= 3 {
            for r in 0..3 {
                for s in 0..3 {
                    let want = if r == s { n as f64 / 3.0 } else { 0.0 };
                    if (m[r][s] - want).abs() > tol {
                        return Err(Error::InvalidAxes(format!(
                            "axes do not form a spherical 2-design (moment[{r}][{s}] = {})",
                            m[r][s]
                        )));
                    }
                }
            }
        } else {
            let mut mm = [[0.0f64; 3]; 3];
            for r in 0..3 {
                for s in 0..3 {
                    for k in 0..3 {
                        mm[r][s] += m[r][k] * m[k][s];
                    }
                }
            }
            for r in 0..3 {
                for s in 0..3 {
                    if (mm[r][s] - m[r][s]).abs() > tol {
                        return Err(Error::InvalidAxes(
                            "square axes must be orthogonal unit vectors".into(),
                        ));
                    }
                }
            }
        }
        Ok(Self { solid, axes })
    }

    /// The same measurement set in a rotated frame.
    pub fn rotated(&self, r: &Rotation) -> MeasurementSet {
        let axes = self.axes.iter().map(|&b| r.apply(b)).collect();
        MeasurementSet::from_axes(self.solid, axes)
            .expect("rotation preserves measurement-set invariants")
    }
}

/// Builds the canonical measurement set for a supported size n.
pub fn build_measurement_set(n: usize) -> Result<MeasurementSet> {
    let solid = Solid::from_axis_count(n)?;
    MeasurementSet::from_axes(solid, canonical_axes(solid))
}

/// Shared-state parameters: purity `mu` of the Werner state and heralded
/// detection efficiency `epsilon` of Alice's side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WernerParamsRaw")]
pub struct WernerParams {
    pub mu: f64,
    pub epsilon: f64,
}

#[derive(Deserialize)]
struct WernerParamsRaw {
    mu: f64,
    epsilon: f64,
}

impl TryFrom<WernerParamsRaw> for WernerParams {
    type Error = Error;
    fn try_from(raw: WernerParamsRaw) -> Result<Self> {
        WernerParams::new(raw.mu, raw.epsilon)
    }
}

impl WernerParams {
    pub fn new(mu: f64, epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::ParameterRange {
                name: "mu",
                value: mu,
                requirement: "0 <= mu <= 1",
            });
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::ParameterRange {
                name: "epsilon",
                value: epsilon,
                requirement: "0 < epsilon <= 1",
            });
        }
        Ok(Self { mu, epsilon })
    }
}

/// Bob's conditioned state after Alice measures along `axis` on a Werner
/// state of purity `mu` and announces `outcome`. Returned as the Bloch vector
/// of the trace-one conditional state: -outcome * mu * axis.
pub fn conditioned_bob_state(
    params: &WernerParams,
    axis: BlochVector,
    outcome: i8,
) -> Result<BlochVector> {
    if outcome != 1 && outcome != -1 {
        return Err(Error::ParameterRange {
            name: "outcome",
            value: outcome as f64,
            requirement: "+1 or -1",
        });
    }
    Ok(axis * (-(outcome as f64) * params.mu))
}

/// A proper rotation of the Bloch sphere, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation([[f64; 3]; 3]);

impl Rotation {
    pub fn identity() -> Self {
        Rotation([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    /// Rodrigues rotation by `angle` radians about `axis`.
    pub fn about_axis(axis: BlochVector, angle: f64) -> Self {
        let u = axis.unit();
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Rotation([
            [
                c + u.x * u.x * t,
                u.x * u.y * t - u.z * s,
                u.x * u.z * t + u.y * s,
            ],
            [
                u.y * u.x * t + u.z * s,
                c + u.y * u.y * t,
                u.y * u.z * t - u.x * s,
            ],
            [
                u.z * u.x * t - u.y * s,
                u.z * u.y * t + u.x * s,
                c + u.z * u.z * t,
            ],
        ])
    }

    pub fn apply(&self, v: BlochVector) -> BlochVector {
        let m = &self.0;
        BlochVector::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    pub fn compose(&self, other: &Rotation) -> Rotation {
        let a = &self.0;
        let b = &other.0;
        let mut out = [[0.0; 3]; 3];
        for r in 0..3 {
            for s in 0..3 {
                for k in 0..3 {
                    out[r][s] += a[r][k] * b[k][s];
                }
            }
        }
        Rotation(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_sets_validate_for_every_supported_size() {
        for n in SUPPORTED_SIZES {
            let set = build_measurement_set(n).unwrap();
            assert_eq!(set.n(), n);
            assert_eq!(set.full_vertices().len(), 2 * n);
        }
    }

    #[test]
    fn unsupported_sizes_are_rejected() {
        for n in [0, 1, 5, 7, 8, 9, 11, 20] {
            assert!(matches!(
                build_measurement_set(n),
                Err(Error::UnsupportedSetSize(_))
            ));
        }
    }

    #[test]
    fn axes_obey_the_hemisphere_rule() {
        for n in SUPPORTED_SIZES {
            let set = build_measurement_set(n).unwrap();
            for &b in set.axes() {
                let c = b.canonical_hemisphere();
                assert_eq!(b, c, "axis {b:?} is not the canonical representative");
            }
        }
    }

    #[test]
    fn quadratic_moment_is_isotropic_for_n_at_least_3() {
        for n in [3usize, 4, 6, 10] {
            let set = build_measurement_set(n).unwrap();
            let mut m = [[0.0f64; 3]; 3];
            for b in set.axes() {
                let c = [b.x, b.y, b.z];
                for r in 0..3 {
                    for s in 0..3 {
                        m[r][s] += c[r] * c[s];
                    }
                }
            }
            for r in 0..3 {
                for s in 0..3 {
                    let want = if r == s { n as f64 / 3.0 } else { 0.0 };
                    assert!(
                        (m[r][s] - want).abs() < 1e-12,
                        "n={n} moment[{r}][{s}] = {}",
                        m[r][s]
                    );
                }
            }
        }
    }

    #[test]
    fn irregular_axes_are_rejected() {
        let skewed = vec![
            BlochVector::X,
            BlochVector::Y,
            BlochVector::new(0.6, 0.0, 0.8),
        ];
        assert!(MeasurementSet::from_axes(Solid::Octahedron, skewed).is_err());

        let duplicated = vec![BlochVector::X, BlochVector::X, BlochVector::Z];
        assert!(MeasurementSet::from_axes(Solid::Octahedron, duplicated).is_err());
    }

    #[test]
    fn rotated_sets_validate() {
        let rot = Rotation::about_axis(BlochVector::new(1.0, 2.0, -0.5), 1.234);
        for n in SUPPORTED_SIZES {
            let set = build_measurement_set(n).unwrap();
            let r = set.rotated(&rot);
            assert_eq!(r.n(), n);
        }
    }

    #[test]
    fn conditioned_state_anti_aligns_with_the_announced_outcome() {
        let params = WernerParams::new(0.6, 1.0).unwrap();
        let b = conditioned_bob_state(&params, BlochVector::X, -1).unwrap();
        assert!((b.x - 0.6).abs() < 1e-15 && b.y == 0.0 && b.z == 0.0);
        let b = conditioned_bob_state(&params, BlochVector::X, 1).unwrap();
        assert!((b.x + 0.6).abs() < 1e-15);
        assert!(conditioned_bob_state(&params, BlochVector::X, 0).is_err());
        // Norm equals the purity: maximally mixed at mu = 0, pure at mu = 1.
        for mu in [0.0, 0.25, 1.0] {
            let p = WernerParams::new(mu, 0.5).unwrap();
            let v = conditioned_bob_state(&p, BlochVector::Z, 1).unwrap();
            assert!((v.norm() - mu).abs() < 1e-15);
        }
    }

    #[test]
    fn expectation_is_the_dot_product() {
        let e = expectation(BlochVector::Z, BlochVector::new(0.1, 0.2, 0.3));
        assert!((e - 0.3).abs() < 1e-15);
    }

    #[test]
    fn werner_params_validate_their_domain() {
        assert!(WernerParams::new(-0.1, 0.5).is_err());
        assert!(WernerParams::new(1.1, 0.5).is_err());
        assert!(WernerParams::new(0.5, 0.0).is_err());
        assert!(WernerParams::new(0.5, 1.1).is_err());
        assert!(WernerParams::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn rotations_preserve_lengths_and_angles() {
        let r = Rotation::about_axis(BlochVector::new(0.3, -1.0, 2.0), 0.7);
        let a = BlochVector::new(0.1, 0.9, -0.4);
        let b = BlochVector::new(-1.0, 0.2, 0.2);
        assert!((r.apply(a).norm() - a.norm()).abs() < 1e-12);
        assert!((r.apply(a).dot(r.apply(b)) - a.dot(b)).abs() < 1e-12);
    }

    #[test]
    fn hemisphere_rule_breaks_ties_toward_positive_y_then_x() {
        let v = BlochVector::new(0.0, -1.0, 0.0);
        assert_eq!(v.canonical_hemisphere(), BlochVector::Y);
        let w = BlochVector::new(-1.0, 0.0, 0.0);
        assert_eq!(w.canonical_hemisphere(), BlochVector::X);
        let u = BlochVector::new(0.3, 0.4, -0.5);
        assert_eq!(u.canonical_hemisphere(), -u);
    }
}
