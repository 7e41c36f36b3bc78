//! Space curve-germs with an A-type singularity at the origin: classification, cuspidal
//! curvature and torsion, half-arclength limits, normal form and reconstruction from
//! rescaled curvature data.

use nalgebra::{Matrix3, Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{integrate_frame, FramePath};
use crate::jets::{cross1, dot1, Jet1, Jet1x3, TAU_ZERO};
use crate::oracle::{fornberg_weights, frenet_from_derivatives, stencil_window};
use crate::scalar::ScalarFn;

/// Germ `γ: (ℝ, 0) → (ℝ³, 0)` given by three jets of one order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[Jet1; 3]", into = "[Jet1; 3]")]
pub struct CurveGerm {
    components: Jet1x3,
}

impl TryFrom<[Jet1; 3]> for CurveGerm {
    type Error = Error;

    fn try_from(c: [Jet1; 3]) -> Result<Self> {
        CurveGerm::new(c)
    }
}

impl From<CurveGerm> for [Jet1; 3] {
    fn from(g: CurveGerm) -> Self {
        g.components
    }
}

impl CurveGerm {
    /// Validates equal orders and vanishing constant terms.
    pub fn new(components: Jet1x3) -> Result<Self> {
        let n = components[0].order();
        if components.iter().any(|c| c.order() != n) {
            return Err(Error::InvalidData(
                "curve components must share one order".into(),
            ));
        }
        if let Some(c) = components
            .iter()
            .map(|c| c.constant_term())
            .find(|c| c.abs() > TAU_ZERO)
        {
            return Err(Error::InvalidData(format!(
                "curve germ must pass through the origin (constant term {c})"
            )));
        }
        Ok(CurveGerm { components })
    }

    /// Polynomial germ with the given coefficient lists (index = exponent), zero-extended
    /// to `order`.
    pub fn from_coeffs(x: &[f64], y: &[f64], z: &[f64], order: usize) -> Result<Self> {
        CurveGerm::new([
            Jet1::from_slice(x, order),
            Jet1::from_slice(y, order),
            Jet1::from_slice(z, order),
        ])
    }

    /// Zero-extends or truncates every component to `order`.
    pub fn with_order(&self, order: usize) -> Self {
        CurveGerm {
            components: self
                .components
                .clone()
                .map(|c| Jet1::from_slice(c.coeffs(), order)),
        }
    }

    pub fn components(&self) -> &Jet1x3 {
        &self.components
    }

    pub fn order(&self) -> usize {
        self.components[0].order()
    }

    /// `γ^{(k)}(0)`.
    pub fn derivative_vector(&self, k: usize) -> Vector3<f64> {
        Vector3::from_fn(|i, _| self.components[i].derivative_at_zero(k))
    }

    /// Value of the polynomial representative at `t`.
    pub fn eval(&self, t: f64) -> Vector3<f64> {
        Vector3::from_fn(|i, _| self.components[i].eval(t))
    }

    /// `k`-th derivative of the polynomial representative at `t`.
    pub fn eval_derivative(&self, t: f64, k: usize) -> Vector3<f64> {
        Vector3::from_fn(|i, _| {
            let mut c = self.components[i].clone();
            for _ in 0..k {
                c = c.derivative();
            }
            c.eval(t)
        })
    }

    /// `R·γ` for a linear map `R`.
    pub fn transformed(&self, r: &Matrix3<f64>) -> Self {
        let c = &self.components;
        let row = |i: usize| {
            c[0].scale(r[(i, 0)])
                .add(&c[1].scale(r[(i, 1)]))
                .add(&c[2].scale(r[(i, 2)]))
        };
        CurveGerm {
            components: [row(0), row(1), row(2)],
        }
    }

    /// `γ ∘ t(x)` for a reparametrization without constant term.
    pub fn reparametrized(&self, t_of_x: &Jet1) -> Result<Self> {
        let n = self.order();
        let c = self
            .components
            .iter()
            .map(|c| c.compose(t_of_x).map(|j| j.truncate(n)))
            .collect::<Result<Vec<_>>>()?;
        let order = c.iter().map(Jet1::order).min().unwrap();
        CurveGerm::new([c[0].truncate(order), c[1].truncate(order), c[2].truncate(order)])
    }
}

/// Singularity type of a curve-germ at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveSingularityClass {
    Regular,
    AType,
    Type23,
    Degenerate,
}

pub fn classify_curve(g: &CurveGerm) -> Result<CurveSingularityClass> {
    if g.order() < 3 {
        return Err(Error::InsufficientOrder {
            have: g.order(),
            need: 3,
        });
    }
    let d1 = g.derivative_vector(1);
    let d2 = g.derivative_vector(2);
    let d3 = g.derivative_vector(3);
    Ok(if d1.norm() > TAU_ZERO {
        CurveSingularityClass::Regular
    } else if d2.norm() <= TAU_ZERO {
        CurveSingularityClass::Degenerate
    } else if d2.cross(&d3).norm() > TAU_ZERO {
        CurveSingularityClass::Type23
    } else {
        CurveSingularityClass::AType
    })
}

fn require_singular(g: &CurveGerm) -> Result<CurveSingularityClass> {
    match classify_curve(g)? {
        CurveSingularityClass::Regular => Err(Error::NotSingular),
        CurveSingularityClass::Degenerate => Err(Error::Degenerate),
        c => Ok(c),
    }
}

fn require_type23(g: &CurveGerm) -> Result<()> {
    match classify_curve(g)? {
        CurveSingularityClass::Type23 => Ok(()),
        _ => Err(Error::Not23Type),
    }
}

/// `κ_sing = |γ″(0)×γ‴(0)| / |γ″(0)|^{5/2}`.
pub fn cuspidal_curvature(g: &CurveGerm) -> Result<f64> {
    require_singular(g)?;
    let a = g.derivative_vector(2);
    let b = g.derivative_vector(3);
    Ok(a.cross(&b).norm() / a.norm().powf(2.5))
}

/// `τ_sing = √|γ″(0)| · det(γ″, γ‴, γ⁗)(0) / |γ″(0)×γ‴(0)|²`.
pub fn cuspidal_torsion(g: &CurveGerm) -> Result<f64> {
    require_type23(g)?;
    if g.order() < 4 {
        return Err(Error::InsufficientOrder {
            have: g.order(),
            need: 4,
        });
    }
    let a = g.derivative_vector(2);
    let b = g.derivative_vector(3);
    let c = g.derivative_vector(4);
    let ab = a.cross(&b);
    Ok(a.norm().sqrt() * ab.dot(&c) / ab.norm_squared())
}

/// Parameter-independent fourth-order invariant
/// `(⟨A×B, A×C⟩ − 2|A×B|²⟨A,B⟩/⟨A,A⟩) / ⟨A,A⟩^{11/4}` with `A, B, C = γ″, γ‴, γ⁗` at 0.
pub fn sigma_sing(g: &CurveGerm) -> Result<f64> {
    require_type23(g)?;
    if g.order() < 4 {
        return Err(Error::InsufficientOrder {
            have: g.order(),
            need: 4,
        });
    }
    let a = g.derivative_vector(2);
    let b = g.derivative_vector(3);
    let c = g.derivative_vector(4);
    let ab = a.cross(&b);
    let aa = a.norm_squared();
    Ok((ab.dot(&a.cross(&c)) - 2.0 * ab.norm_squared() * a.dot(&b) / aa) / aa.powf(2.75))
}

/// Pieces shared by the half-arclength expansions: `w = |γ′/t|²` and `Q = |s_g|/t²`.
struct ArclengthParts {
    velocity_over_t: Jet1x3,
    w: Jet1,
    q: Jet1,
}

fn arclength_parts(g: &CurveGerm) -> Result<ArclengthParts> {
    let p: Jet1x3 = g
        .components
        .clone()
        .map(|c| c.derivative())
        .map(|c| c.div_exact(1))
        .into_iter()
        .collect::<Result<Vec<_>>>()
        .map_err(|_| Error::NotSingular)?
        .try_into()
        .unwrap();
    let w = dot1(&p, &p);
    let speed = w.sqrt().map_err(|_| Error::Degenerate)?;
    let q = speed.mul_monomial(1).integral().div_exact(2)?;
    Ok(ArclengthParts {
        velocity_over_t: p,
        w,
        q,
    })
}

/// Jet of `sgn(t)√|s_g(t)|`, the half-arclength parameter as a function of `t`.
pub fn half_arclength_series(g: &CurveGerm) -> Result<Jet1> {
    require_singular(g)?;
    let parts = arclength_parts(g)?;
    Ok(parts.q.sqrt()?.mul_monomial(1))
}

/// Jet of the smooth function `√|s_g(t)| κ(t)`.
pub fn rescaled_curvature_series(g: &CurveGerm) -> Result<Jet1> {
    require_type23(g)?;
    let parts = arclength_parts(g)?;
    let p = &parts.velocity_over_t;
    let dp = p.clone().map(|c| c.derivative());
    let x = cross1(p, &dp);
    let x_norm = dot1(&x, &x).sqrt()?;
    let w_inv_sqrt = parts.w.sqrt_inv()?;
    let w_pow = w_inv_sqrt.mul(&w_inv_sqrt).mul(&w_inv_sqrt);
    Ok(parts.q.sqrt()?.mul(&x_norm).mul(&w_pow))
}

/// `d/dt (√|s_g| κ)` at 0, in the parameter of the germ.
pub fn kappa_sing_prime(g: &CurveGerm) -> Result<f64> {
    if g.order() < 4 {
        return Err(Error::InsufficientOrder {
            have: g.order(),
            need: 4,
        });
    }
    let series = rescaled_curvature_series(g)?;
    if series.order() < 1 {
        return Err(Error::InsufficientOrder {
            have: g.order(),
            need: 4,
        });
    }
    Ok(series.coeff(1))
}

/// All invariants of a germ, with the ones not defined for its class left empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveInvariants {
    pub class: CurveSingularityClass,
    pub kappa_sing: Option<f64>,
    pub tau_sing: Option<f64>,
    pub sigma_sing: Option<f64>,
    pub kappa_sing_prime: Option<f64>,
}

pub fn curve_invariants(g: &CurveGerm) -> Result<CurveInvariants> {
    let class = classify_curve(g)?;
    let singular = matches!(
        class,
        CurveSingularityClass::AType | CurveSingularityClass::Type23
    );
    let type23 = class == CurveSingularityClass::Type23 && g.order() >= 4;
    Ok(CurveInvariants {
        class,
        kappa_sing: if singular { Some(cuspidal_curvature(g)?) } else { None },
        tau_sing: if type23 { Some(cuspidal_torsion(g)?) } else { None },
        sigma_sing: if type23 { Some(sigma_sing(g)?) } else { None },
        kappa_sing_prime: if type23 { Some(kappa_sing_prime(g)?) } else { None },
    })
}

// ---------------------------------------------------------------------------
// limits
// ---------------------------------------------------------------------------

/// Default smallest sample for the limit extrapolation.
pub const LIMIT_T_MIN: f64 = 1e-4;
/// Default number of geometric samples (ratio 2).
pub const LIMIT_SAMPLES: usize = 4;

const GAUSS8: [(f64, f64); 4] = [
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
];

/// `s_g(t) = ∫₀ᵗ |γ′|` by composite Gauss–Legendre quadrature.
pub fn arclength(g: &CurveGerm, t: f64) -> f64 {
    let panels = 4;
    let width = t / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * width;
        for (x, w) in GAUSS8 {
            for s in [-x, x] {
                total += w * g.eval_derivative(mid + s * width / 2.0, 1).norm();
            }
        }
    }
    total * width / 2.0
}

fn richardson_limit(samples: usize, t_min: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    if samples < 2 || !(t_min > 0.0) {
        return Err(Error::InvalidData(format!(
            "limit needs at least two samples and t_min > 0 (got {samples}, {t_min})"
        )));
    }
    let mut row: Vec<f64> = (0..samples)
        .map(|k| f(t_min * 2f64.powi(k as i32)))
        .collect::<Result<_>>()?;
    let mut previous = row[0];
    for j in 1..samples {
        previous = row[0];
        let factor = 2f64.powi(j as i32);
        row = row
            .windows(2)
            .map(|w| (factor * w[0] - w[1]) / (factor - 1.0))
            .collect();
    }
    let limit = row[0];
    if !limit.is_finite() || (limit - previous).abs() > 1e-3 * limit.abs().max(1.0) {
        return Err(Error::NumericalFailure(format!(
            "extrapolation did not settle ({previous} vs {limit})"
        )));
    }
    Ok(limit)
}

/// Extrapolated `lim_{t→0⁺} √|s_g(t)| κ(t)`.
pub fn limit_kappa(g: &CurveGerm, samples: usize, t_min: f64) -> Result<f64> {
    require_type23(g)?;
    richardson_limit(samples, t_min, |t| {
        let d1 = g.eval_derivative(t, 1);
        let d2 = g.eval_derivative(t, 2);
        let kappa = crate::oracle::kappa_from_derivatives(&d1, &d2, t)?;
        Ok(arclength(g, t).abs().sqrt() * kappa)
    })
}

/// Extrapolated `lim_{t→0⁺} sgn(t)√|s_g(t)| τ(t)`.
pub fn limit_tau(g: &CurveGerm, samples: usize, t_min: f64) -> Result<f64> {
    require_type23(g)?;
    richardson_limit(samples, t_min, |t| {
        let d1 = g.eval_derivative(t, 1);
        let d2 = g.eval_derivative(t, 2);
        let d3 = g.eval_derivative(t, 3);
        let (_, tau) = frenet_from_derivatives(&d1, &d2, &d3, t)?;
        Ok(arclength(g, t).abs().sqrt() * tau)
    })
}

// ---------------------------------------------------------------------------
// normal form
// ---------------------------------------------------------------------------

/// Coefficients of the representative `(t²/2, Σ γ₂ᵢ tⁱ/i!, Σ γ₃ᵢ tⁱ/i!)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveNormalFormCoeffs {
    pub degree: usize,
    /// `second[i] = γ₂ᵢ`; entries below `i = 3` vanish.
    pub second: Vec<f64>,
    /// `third[i] = γ₃ᵢ`; entries below `i = 4` vanish.
    pub third: Vec<f64>,
}

impl CurveNormalFormCoeffs {
    pub fn gamma2(&self, i: usize) -> f64 {
        self.second.get(i).copied().unwrap_or(0.0)
    }

    pub fn gamma3(&self, i: usize) -> f64 {
        self.third.get(i).copied().unwrap_or(0.0)
    }

    /// `κ_sing = |γ₂₃|`.
    pub fn kappa_sing(&self) -> f64 {
        self.gamma2(3).abs()
    }

    /// `τ_sing = γ₃₄/γ₂₃`.
    pub fn tau_sing(&self) -> f64 {
        self.gamma3(4) / self.gamma2(3)
    }

    /// `σ_sing = γ₂₃ γ₂₄`.
    pub fn sigma_sing(&self) -> f64 {
        self.gamma2(3) * self.gamma2(4)
    }

    /// `κ′_sing = sgn(γ₂₃) γ₂₄ / (3√2)`, derivative in the normal-form parameter.
    pub fn kappa_sing_prime(&self) -> f64 {
        self.gamma2(3).signum() * self.gamma2(4) / (3.0 * 2f64.sqrt())
    }
}

/// Rotation placing `γ″(0)` on the first axis and `γ‴(0)` in the first coordinate
/// plane (second coordinate positive), followed by the reparametrization that makes the
/// first component exactly `t²/2`.
pub fn curve_normal_form(g: &CurveGerm, degree: usize) -> Result<CurveNormalFormCoeffs> {
    require_singular(g)?;
    if degree > g.order() {
        return Err(Error::InsufficientOrder {
            have: g.order(),
            need: degree,
        });
    }
    let a = g.derivative_vector(2);
    let b = g.derivative_vector(3);
    let e1 = a.normalize();
    let b_perp = b - e1 * b.dot(&e1);
    let e2 = if b_perp.norm() > TAU_ZERO {
        b_perp.normalize()
    } else {
        // A-type without (2,3) data: any completion works for the partial output
        let axis = (0..3)
            .min_by(|&i, &j| e1[i].abs().total_cmp(&e1[j].abs()))
            .unwrap();
        let v = Vector3::ith(axis, 1.0);
        (v - e1 * v.dot(&e1)).normalize()
    };
    let e3 = e1.cross(&e2);
    let r = Matrix3::from_rows(&[e1.transpose(), e2.transpose(), e3.transpose()]);
    let rotated = g.transformed(&r);

    let lambda = 1.0 / a.norm().sqrt();
    let scale = Jet1::monomial(lambda, 1, g.order());
    let scaled = rotated.reparametrized(&scale)?;
    let c = scaled.components();

    // first component φ = x²/2 + O(x³); new parameter X = x √(2φ/x²)
    let mut first = c[0].clone();
    first.set_coeff(1, 0.0);
    first.set_coeff(2, 0.5);
    let ratio = first.scale(2.0).div_exact(2)?;
    let new_param = ratio.sqrt()?.mul_monomial(1);
    let x_of_new = new_param.inverse()?;
    let second = c[1].compose(&x_of_new)?;
    let third = c[2].compose(&x_of_new)?;
    let available = second.order().min(third.order());
    if degree > available {
        return Err(Error::InsufficientOrder {
            have: available,
            need: degree,
        });
    }
    let read = |j: &Jet1, from: usize| -> Vec<f64> {
        (0..=degree)
            .map(|i| if i < from { 0.0 } else { j.derivative_at_zero(i) })
            .collect()
    };
    Ok(CurveNormalFormCoeffs {
        degree,
        second: read(&second, 3),
        third: read(&third, 4),
    })
}

// ---------------------------------------------------------------------------
// reconstruction
// ---------------------------------------------------------------------------

/// Curve integrated from rescaled curvature and torsion, sampled on a grid containing 0.
#[derive(Debug, Clone)]
pub struct ReconstructedCurve {
    pub path: FramePath,
}

impl ReconstructedCurve {
    pub fn ts(&self) -> &[f64] {
        &self.path.ts
    }

    pub fn points(&self) -> &[Vector3<f64>] {
        &self.path.points
    }

    pub fn frames(&self) -> &[Matrix3<f64>] {
        &self.path.frames
    }

    /// `γ′(tᵢ) = 2tᵢ e(tᵢ)`.
    pub fn velocity(&self, i: usize) -> Vector3<f64> {
        self.path.frames[i].column(0) * (2.0 * self.path.ts[i])
    }

    /// Measures `(√|s_g| κ, sgn(t)√|s_g| τ)` at sample `i` from the sampled points alone,
    /// with derivative stencils of `width` samples spaced `stride` apart.
    pub fn remeasure(&self, i: usize, stride: usize, width: usize) -> Result<(f64, f64)> {
        let ts = &self.path.ts;
        let pts = &self.path.points;
        let n = ts.len();
        let sub: Vec<usize> = {
            let offset = i % stride;
            (offset..n).step_by(stride).collect()
        };
        let pos = sub.iter().position(|&j| j == i).unwrap();
        let (lo, hi) = stencil_window(sub.len(), pos, width);
        let nodes: Vec<f64> = sub[lo..hi].iter().map(|&j| ts[j]).collect();
        let deriv = |k: usize| {
            let w = fornberg_weights(ts[i], &nodes, k);
            sub[lo..hi]
                .iter()
                .zip(&w)
                .fold(Vector3::zeros(), |acc, (&j, c)| acc + pts[j] * *c)
        };
        let (d1, d2, d3) = (deriv(1), deriv(2), deriv(3));
        let (kappa, tau) = frenet_from_derivatives(&d1, &d2, &d3, ts[i])?;
        let s = self.arclength_from_samples(i);
        Ok((s.abs().sqrt() * kappa, ts[i].signum() * s.abs().sqrt() * tau))
    }

    /// Trapezoidal arclength from the anchor to sample `i`, with speeds measured from the
    /// sampled points.
    fn arclength_from_samples(&self, i: usize) -> f64 {
        let ts = &self.path.ts;
        let a = self.path.anchor_index;
        let speed = |j: usize| {
            let (lo, hi) = stencil_window(ts.len(), j, 5);
            let w = fornberg_weights(ts[j], &ts[lo..hi], 1);
            self.path.points[lo..hi]
                .iter()
                .zip(&w)
                .fold(Vector3::zeros(), |acc, (p, c)| acc + p * *c)
                .norm()
        };
        let (from, to) = if i >= a { (a, i) } else { (i, a) };
        let total: f64 = (from..to)
            .map(|j| 0.5 * (ts[j + 1] - ts[j]) * (speed(j) + speed(j + 1)))
            .sum();
        if i >= a {
            total
        } else {
            -total
        }
    }
}

/// Solves `A′ = 2A·K(α, β)` with `A(0) = initial_frame` and `γ = 2∫₀ᵗ t e(t) dt`.
pub fn reconstruct_curve(
    alpha: &ScalarFn,
    beta: &ScalarFn,
    span: (f64, f64),
    steps: usize,
    initial_frame: Option<Matrix3<f64>>,
) -> Result<ReconstructedCurve> {
    let (lo, hi) = span;
    if !(lo <= 0.0 && 0.0 <= hi && lo < hi) {
        return Err(Error::InvalidData(format!(
            "span [{lo}, {hi}] must contain 0"
        )));
    }
    // positivity checked on a grid twice as fine as the integration grid
    let probes = 2 * steps.max(1);
    for k in 0..=probes {
        let t = lo + (hi - lo) * k as f64 / probes as f64;
        let a = alpha.eval(t);
        if !(a > 0.0) {
            return Err(Error::InvalidData(format!("alpha({t}) = {a} is not positive")));
        }
    }
    let generator = |t: f64| {
        let (a, b) = (2.0 * alpha.eval(t), 2.0 * beta.eval(t));
        Matrix3::new(0.0, -a, 0.0, a, 0.0, -b, 0.0, b, 0.0)
    };
    let velocity = |t: f64, frame: &Matrix3<f64>| frame.column(0) * (2.0 * t);
    let a0 = initial_frame.unwrap_or_else(Matrix3::identity);
    let path = integrate_frame(generator, velocity, a0, span, 0.0, steps)?;
    Ok(ReconstructedCurve { path })
}

/// Uniformly distributed rotation from a unit quaternion.
pub fn rotation_from_quaternion(q: [f64; 4]) -> Matrix3<f64> {
    let q = nalgebra::UnitQuaternion::from_quaternion(nalgebra::Quaternion::new(
        q[0], q[1], q[2], q[3],
    ));
    Rotation3::from(q).into_inner()
}
