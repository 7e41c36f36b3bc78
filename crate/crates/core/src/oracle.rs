//! Numeric ground truth built from finite differences.
//!
//! Nothing here reads jet coefficients: every quantity is measured from point evaluations,
//! so it can be used to cross-check the closed-form and jet-based code paths.

use nalgebra::{Matrix3, Vector2, Vector3};

use crate::error::{Error, Result};

/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Below this value the curvature of a regular curve is treated as zero when torsion is
/// requested.
pub const KAPPA_FLOOR: f64 = 1e-7;

/// Central-difference estimate of the `k`-th derivative (`k ≤ 4`) with `O(h²)` error.
///
/// # Panics
/// If `k > 4`.
pub fn finite_diff(f: impl Fn(f64) -> f64, t: f64, k: usize, h: f64) -> f64 {
    let weights = central_weights(k);
    let half = (weights.len() / 2) as f64;
    let sum: f64 = weights
        .iter()
        .enumerate()
        .map(|(i, w)| w * f(t + (i as f64 - half) * h))
        .sum();
    sum / h.powi(k as i32)
}

fn central_weights(k: usize) -> &'static [f64] {
    match k {
        0 => &[1.0],
        1 => &[-0.5, 0.0, 0.5],
        2 => &[1.0, -2.0, 1.0],
        3 => &[-0.5, 1.0, 0.0, -1.0, 0.5],
        4 => &[1.0, -4.0, 6.0, -4.0, 1.0],
        _ => panic!("finite differences are provided up to order 4, got {k}"),
    }
}

/// Vector-valued central difference, same stencils as [`finite_diff`].
pub fn vector_diff(f: &impl Fn(f64) -> Vector3<f64>, t: f64, k: usize, h: f64) -> Vector3<f64> {
    let weights = central_weights(k);
    let half = (weights.len() / 2) as f64;
    let sum = weights
        .iter()
        .enumerate()
        .filter(|(_, w)| **w != 0.0)
        .fold(Vector3::zeros(), |acc, (i, w)| {
            acc + f(t + (i as f64 - half) * h) * *w
        });
    sum / h.powi(k as i32)
}

/// Derivative with one Richardson refinement (`h` and `h/2`), error `O(h⁴)`.
pub fn refined_diff(f: &impl Fn(f64) -> Vector3<f64>, t: f64, k: usize, h: f64) -> Vector3<f64> {
    let coarse = vector_diff(f, t, k, h);
    let fine = vector_diff(f, t, k, h / 2.0);
    (fine * 4.0 - coarse) / 3.0
}

/// First three derivatives of a space curve at `t`.
pub fn curve_derivatives(c: &impl Fn(f64) -> Vector3<f64>, t: f64, h: f64) -> [Vector3<f64>; 3] {
    [
        refined_diff(c, t, 1, h),
        refined_diff(c, t, 2, h),
        refined_diff(c, t, 3, h),
    ]
}

/// Curvature `|γ′×γ″|/|γ′|³` from derivative vectors.
pub fn kappa_from_derivatives(d1: &Vector3<f64>, d2: &Vector3<f64>, t: f64) -> Result<f64> {
    let speed = d1.norm();
    if speed <= crate::jets::TAU_ZERO {
        return Err(Error::SingularPoint(t));
    }
    Ok(d1.cross(d2).norm() / speed.powi(3))
}

/// Curvature and torsion from derivative vectors.
pub fn frenet_from_derivatives(
    d1: &Vector3<f64>,
    d2: &Vector3<f64>,
    d3: &Vector3<f64>,
    t: f64,
) -> Result<(f64, f64)> {
    let kappa = kappa_from_derivatives(d1, d2, t)?;
    if kappa <= KAPPA_FLOOR {
        return Err(Error::UndefinedTorsion { t, kappa });
    }
    let c = d1.cross(d2);
    let tau = c.dot(d3) / c.norm_squared();
    Ok((kappa, tau))
}

/// `dκ/dt` from the first three derivatives.
pub fn kappa_prime_from_derivatives(d1: &Vector3<f64>, d2: &Vector3<f64>, d3: &Vector3<f64>) -> f64 {
    let c = d1.cross(d2);
    let dc = d1.cross(d3);
    let s = d1.norm();
    c.dot(&dc) / c.norm() / s.powi(3) - 3.0 * c.norm() * d1.dot(d2) / s.powi(5)
}

/// Frenet curvature and torsion of a regular curve at `t`, using [`DEFAULT_STEP`].
pub fn frenet_kappa_tau(c: impl Fn(f64) -> Vector3<f64>, t: f64) -> Result<(f64, f64)> {
    frenet_kappa_tau_with_step(c, t, DEFAULT_STEP)
}

pub fn frenet_kappa_tau_with_step(
    c: impl Fn(f64) -> Vector3<f64>,
    t: f64,
    h: f64,
) -> Result<(f64, f64)> {
    let [d1, d2, d3] = curve_derivatives(&c, t, h);
    frenet_from_derivatives(&d1, &d2, &d3, t)
}

/// Sampled space curve on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    pub ts: Vec<f64>,
    pub points: Vec<Vector3<f64>>,
}

impl SampledCurve {
    pub fn new(ts: Vec<f64>, points: Vec<Vector3<f64>>) -> Result<Self> {
        if ts.len() != points.len() {
            return Err(Error::InvalidData(format!(
                "{} parameters for {} points",
                ts.len(),
                points.len()
            )));
        }
        if ts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidData("sample parameters must increase".into()));
        }
        Ok(SampledCurve { ts, points })
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    /// `k`-th derivative at sample `i` from the interpolating polynomial through the
    /// nearest `width` samples.
    pub fn derivative_at(&self, i: usize, k: usize, width: usize) -> Vector3<f64> {
        let (lo, hi) = stencil_window(self.ts.len(), i, width);
        let w = fornberg_weights(self.ts[i], &self.ts[lo..hi], k);
        self.points[lo..hi]
            .iter()
            .zip(&w)
            .fold(Vector3::zeros(), |acc, (p, c)| acc + p * *c)
    }
}

/// Index window `[lo, hi)` of `width` samples, centred on `i` when possible.
pub fn stencil_window(n: usize, i: usize, width: usize) -> (usize, usize) {
    let width = width.min(n);
    let lo = i.saturating_sub(width / 2).min(n - width);
    (lo, lo + width)
}

/// Weights of the `k`-th derivative at `x0` for arbitrary nodes (Fornberg's recursion).
pub fn fornberg_weights(x0: f64, nodes: &[f64], k: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; k + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(k);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for m in (1..=mn).rev() {
                    c[i][m] = c1 * (m as f64 * c[i - 1][m - 1] - c5 * c[i - 1][m]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for m in (1..=mn).rev() {
                c[j][m] = (c4 * c[j][m] - m as f64 * c[j][m - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[k]).collect()
}

/// Normal and geodesic curvature of `b̂ = f∘b` at `t`.
///
/// `κ_nb = ⟨b̂″, ν⟩/|b̂′|²` and `κ_gb = det(b̂′, b̂″, ν)/|b̂′|³`, with `ν` evaluated at
/// `b(t)`.
pub fn curve_on_surface_invariants(
    f: impl Fn(f64, f64) -> Vector3<f64>,
    nu: impl Fn(f64, f64) -> Vector3<f64>,
    b: impl Fn(f64) -> Vector2<f64>,
    t: f64,
) -> Result<(f64, f64)> {
    let inv = curve_on_surface_with_derivatives(f, nu, b, t, DEFAULT_STEP)?;
    Ok((inv.kappa_nb, inv.kappa_gb))
}

/// Curve-on-surface invariants of `b̂` and their derivatives along the arclength of `b̂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveOnSurface {
    pub kappa_nb: f64,
    pub kappa_gb: f64,
    pub kappa_nb_prime: f64,
    pub kappa_gb_prime: f64,
}

pub fn curve_on_surface_with_derivatives(
    f: impl Fn(f64, f64) -> Vector3<f64>,
    nu: impl Fn(f64, f64) -> Vector3<f64>,
    b: impl Fn(f64) -> Vector2<f64>,
    t: f64,
    h: f64,
) -> Result<CurveOnSurface> {
    let bhat = |s: f64| {
        let p = b(s);
        f(p.x, p.y)
    };
    let nub = |s: f64| {
        let p = b(s);
        nu(p.x, p.y)
    };
    let [d1, d2, d3] = curve_derivatives(&bhat, t, h);
    let speed = d1.norm();
    if speed <= crate::jets::TAU_ZERO {
        return Err(Error::SingularPoint(t));
    }
    let n = nub(t);
    let dn = refined_diff(&nub, t, 1, h);
    let det = |a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>| {
        Matrix3::from_columns(&[*a, *b, *c]).determinant()
    };
    let s2 = speed * speed;
    let d12 = d1.dot(&d2);

    let kappa_nb = d2.dot(&n) / s2;
    let kappa_nb_dt = (d3.dot(&n) + d2.dot(&dn)) / s2 - 2.0 * d2.dot(&n) * d12 / (s2 * s2);

    let g = det(&d1, &d2, &n);
    let kappa_gb = g / speed.powi(3);
    let kappa_gb_dt =
        (det(&d1, &d3, &n) + det(&d1, &d2, &dn)) / speed.powi(3) - 3.0 * g * d12 / speed.powi(5);

    Ok(CurveOnSurface {
        kappa_nb,
        kappa_gb,
        kappa_nb_prime: kappa_nb_dt / speed,
        kappa_gb_prime: kappa_gb_dt / speed,
    })
}
