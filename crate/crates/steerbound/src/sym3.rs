//! Eigensolver for symmetric 3x3 matrices.
//!
//! Eigenvalues come from the trigonometric closed form of the characteristic
//! cubic; when the eigenvalue spread collapses (near-zero discriminant) the
//! solver falls back to tridiagonal QL iteration with implicit shifts, which
//! is immune to the acos conditioning loss. Eigenvectors are only ever needed
//! for well-separated eigenvalues and use the cross-product of the two most
//! independent rows of A - lambda I.

use crate::geometry::BlochVector;

/// A symmetric 3x3 matrix, row-major. Only the given entries are read; the
/// caller is trusted to supply symmetric data.
pub type SymMatrix3 = [[f64; 3]; 3];

/// Relative discriminant threshold below which the QL fallback engages.
const DEGENERATE_DISC: f64 = 1e-12;

/// Eigenvalues sorted in descending order.
pub fn eigenvalues(a: &SymMatrix3) -> [f64; 3] {
    let vals = eigenvalues_trig(a);
    let scale = frobenius(a).max(1.0);
    // Product of squared eigenvalue gaps, normalized by scale^6: the
    // discriminant of the characteristic cubic up to a positive factor.
    let disc =
        ((vals[0] - vals[1]) * (vals[1] - vals[2]) * (vals[0] - vals[2])).powi(2) / scale.powi(6);
    if disc < DEGENERATE_DISC {
        eigenvalues_ql(a)
    } else {
        vals
    }
}

/// Largest eigenvalue.
pub fn lambda_max(a: &SymMatrix3) -> f64 {
    eigenvalues(a)[0]
}

/// Number of eigenvalues within `tol` of the largest.
pub fn top_multiplicity(vals: &[f64; 3], tol: f64) -> usize {
    vals.iter().filter(|&&v| vals[0] - v <= tol).count()
}

/// Unit eigenvector for an eigenvalue that is well separated from the other
/// two. Rows of A - lambda I span the orthogonal complement of the
/// eigenvector, so the largest pairwise cross product recovers it.
pub fn eigenvector_for_simple(a: &SymMatrix3, lambda: f64) -> BlochVector {
    let rows = [
        BlochVector::new(a[0][0] - lambda, a[0][1], a[0][2]),
        BlochVector::new(a[1][0], a[1][1] - lambda, a[1][2]),
        BlochVector::new(a[2][0], a[2][1], a[2][2] - lambda),
    ];
    let candidates = [
        rows[0].cross(rows[1]),
        rows[0].cross(rows[2]),
        rows[1].cross(rows[2]),
    ];
    let mut best = candidates[0];
    for c in &candidates[1..] {
        if c.norm_sq() > best.norm_sq() {
            best = *c;
        }
    }
    best.unit()
}

fn frobenius(a: &SymMatrix3) -> f64 {
    let mut s = 0.0;
    for row in a {
        for &v in row {
            s += v * v;
        }
    }
    s.sqrt()
}

fn sort_desc(mut v: [f64; 3]) -> [f64; 3] {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Closed-form eigenvalues: shift by the mean, scale by the deviatoric norm,
/// and read the three roots off the cosine of a third of one angle.
fn eigenvalues_trig(a: &SymMatrix3) -> [f64; 3] {
    let p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if p1 == 0.0 {
        return sort_desc([a[0][0], a[1][1], a[2][2]]);
    }
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q, q, q];
    }
    let inv = p.recip();
    let mut b = [[0.0f64; 3]; 3];
    for r in 0..3 {
        for s in 0..3 {
            let shift = if r == s { q } else { 0.0 };
            b[r][s] = inv * (a[r][s] - shift);
        }
    }
    let r = (det3(&b) / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let eig1 = q + 2.0 * p * phi.cos();
    let eig3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::FRAC_PI_3 * 2.0).cos();
    let eig2 = 3.0 * q - eig1 - eig3;
    sort_desc([eig1, eig2, eig3])
}

fn det3(m: &SymMatrix3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// QL iteration with implicit shifts on the tridiagonal reduction of `a`.
fn eigenvalues_ql(a: &SymMatrix3) -> [f64; 3] {
    // One Givens rotation in the (1,2) plane zeroes a[0][2], leaving a
    // symmetric tridiagonal matrix with diagonal d and off-diagonal e.
    let (mut d, mut e);
    if a[0][2].abs() < f64::MIN_POSITIVE {
        d = [a[0][0], a[1][1], a[2][2]];
        e = [a[0][1], a[1][2], 0.0];
    } else {
        let theta = (a[0][2]).atan2(a[0][1]);
        let (s, c) = theta.sin_cos();
        // Rotate basis vectors e1' = c*e1 + s*e2 in the (y, z) coordinate pair.
        let b01 = c * a[0][1] + s * a[0][2];
        let b11 = c * c * a[1][1] + 2.0 * s * c * a[1][2] + s * s * a[2][2];
        let b22 = s * s * a[1][1] - 2.0 * s * c * a[1][2] + c * c * a[2][2];
        let b12 = s * c * (a[2][2] - a[1][1]) + (c * c - s * s) * a[1][2];
        d = [a[0][0], b11, b22];
        e = [b01, b12, 0.0];
    }

    for l in 0..2 {
        let mut iter = 0;
        loop {
            // Find the first decoupled block boundary at or after l.
            let mut m = l;
            while m < 2 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 64, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = 0.0;
                let _ = f;
            }
            if r == 0.0 && m - l > 1 {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    sort_desc(d)
}
