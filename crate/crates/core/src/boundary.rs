//! Boundary invariants of a cuspidal edge with boundary, as closed forms in the normal-form
//! coefficients and as independent numeric values computed from the germ itself.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::curves::{cuspidal_curvature, cuspidal_torsion, CurveGerm};
use crate::error::{Error, Result};
use crate::jets::{Jet1, Var, TAU_ZERO};
use crate::oracle::{
    curve_derivatives, curve_on_surface_with_derivatives, frenet_from_derivatives,
    kappa_from_derivatives, kappa_prime_from_derivatives, DEFAULT_STEP,
};
use crate::surface::{
    adapt_oriented, jet3_at_zero, unit_normal_jet, Adapted, BoundaryCoeffs, NormalFormData,
    PlaneCurve, SurfaceGerm,
};

/// Position of the boundary relative to the kernel of `df₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum BoundaryClass {
    /// `b′(0)` is transverse to the kernel; `γ̂′(0) = l b̂′(0)` with `γ̂` parametrized by the
    /// oriented adapted coordinate `u`.
    Case1 { l: f64 },
    /// `b′(0)` spans the kernel.
    Case2,
}

/// Which of two closed-form sets to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaVariant {
    /// Formulas re-derived and checked against the numeric oracle.
    #[default]
    Verified,
    /// Formulas in their original form, before verification; kept for comparison.
    Verbatim,
}

/// Invariants of a boundary transverse to the kernel. Derivatives are taken with respect
/// to the normal-form parameter of the boundary, which is its arclength to first order.
/// `kappa_prime0` and `tau0` are `None` when the curvature vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryInvariantsCase1 {
    pub kappa0: f64,
    pub kappa_prime0: Option<f64>,
    pub tau0: Option<f64>,
    pub kappa_nb0: f64,
    pub kappa_nb_prime0: f64,
    pub kappa_gb0: f64,
    pub kappa_gb_prime0: f64,
    pub alpha: f64,
}

/// Invariants of a boundary tangent to the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryInvariantsCase2 {
    pub beta: f64,
    pub kappa_sing_b: f64,
    pub tau_sing_b: f64,
}

/// Fixed sign relating each numeric case-1 field to its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignConvention {
    pub kappa0: f64,
    pub kappa_prime0: f64,
    pub tau0: f64,
    pub kappa_nb0: f64,
    pub kappa_nb_prime0: f64,
    pub kappa_gb0: f64,
    pub kappa_gb_prime0: f64,
    pub alpha: f64,
}

impl Default for SignConvention {
    /// The closed forms measure geodesic curvature against `ν × b̂′`, the numeric
    /// values against `b̂′ × ν`.
    fn default() -> Self {
        SignConvention {
            kappa0: 1.0,
            kappa_prime0: 1.0,
            tau0: 1.0,
            kappa_nb0: 1.0,
            kappa_nb_prime0: 1.0,
            kappa_gb0: -1.0,
            kappa_gb_prime0: -1.0,
            alpha: 1.0,
        }
    }
}

impl SignConvention {
    /// Numeric values expressed in the closed-form convention.
    pub fn apply(&self, n: &BoundaryInvariantsCase1) -> BoundaryInvariantsCase1 {
        BoundaryInvariantsCase1 {
            kappa0: self.kappa0 * n.kappa0,
            kappa_prime0: n.kappa_prime0.map(|x| self.kappa_prime0 * x),
            tau0: n.tau0.map(|x| self.tau0 * x),
            kappa_nb0: self.kappa_nb0 * n.kappa_nb0,
            kappa_nb_prime0: self.kappa_nb_prime0 * n.kappa_nb_prime0,
            kappa_gb0: self.kappa_gb0 * n.kappa_gb0,
            kappa_gb_prime0: self.kappa_gb_prime0 * n.kappa_gb_prime0,
            alpha: self.alpha * n.alpha,
        }
    }
}

/// Oriented adapted coordinates with the boundary transported into them.
struct Setup {
    germ: SurfaceGerm,
    boundary: PlaneCurve,
}

fn setup(f: &SurfaceGerm, b: &PlaneCurve) -> Result<Setup> {
    if b.velocity().norm() <= TAU_ZERO {
        return Err(Error::DegenerateBoundary);
    }
    let Adapted { germ, change } = adapt_oriented(f)?;
    let boundary = change.transport(b)?;
    Ok(Setup { germ, boundary })
}

fn class_of(b: &PlaneCurve) -> Result<BoundaryClass> {
    let vel = b.velocity();
    if vel.norm() <= TAU_ZERO {
        return Err(Error::DegenerateBoundary);
    }
    if vel.x.abs() > TAU_ZERO * vel.norm().max(1.0) {
        Ok(BoundaryClass::Case1 { l: 1.0 / vel.x })
    } else {
        Ok(BoundaryClass::Case2)
    }
}

pub fn classify_boundary(f: &SurfaceGerm, b: &PlaneCurve) -> Result<BoundaryClass> {
    class_of(&setup(f, b)?.boundary)
}

/// Approaching ratio `α = |det(γ̂′, d″, ν)(0)|^{1/2} / |γ̂′(0)|^{3/2}` of the difference
/// `d(t) = γ̂(t) − b̂(s(t))`, with `s′(0) = l`.
///
/// `s` defaults to `t ↦ l t`; `t_of_x` optionally reparametrizes the singular curve.
pub fn approaching_ratio(
    f: &SurfaceGerm,
    b: &PlaneCurve,
    s: Option<&Jet1>,
    t_of_x: Option<&Jet1>,
) -> Result<f64> {
    let Setup { germ, boundary } = setup(f, b)?;
    let l = match class_of(&boundary)? {
        BoundaryClass::Case1 { l } => l,
        BoundaryClass::Case2 => return Err(Error::NotCase1),
    };
    let n = germ.order();
    let s = match s {
        Some(s) => {
            if (s.coeff(1) - l).abs() > 1e-9 * l.abs().max(1.0) {
                return Err(Error::InvalidReparametrization(format!(
                    "s′(0) = {} but l = {l}",
                    s.coeff(1)
                )));
            }
            s.clone()
        }
        None => Jet1::monomial(l, 1, n),
    };
    let nu0 = jet3_at_zero(&unit_normal_jet(&germ)?);
    let gamma = germ.components().clone().map(|c| c.restrict_axis(Var::U));
    let bhat = germ.along(&boundary.reparametrized(&s)?)?;
    let mut d: Vec<Jet1> = gamma.iter().zip(&bhat).map(|(g, b)| g.sub(b)).collect();
    let mut gamma = gamma.to_vec();
    if let Some(t) = t_of_x {
        if t.coeff(1).abs() <= TAU_ZERO {
            return Err(Error::InvalidReparametrization("t′(0) = 0".into()));
        }
        gamma = gamma.iter().map(|c| c.compose(t)).collect::<Result<_>>()?;
        d = d.iter().map(|c| c.compose(t)).collect::<Result<_>>()?;
    }
    let g1 = Vector3::from_fn(|i, _| gamma[i].derivative_at_zero(1));
    let d2 = Vector3::from_fn(|i, _| d[i].derivative_at_zero(2));
    let det = Matrix3::from_columns(&[g1, d2, nu0]).determinant();
    Ok((det.abs() / g1.norm().powi(3)).sqrt())
}

fn case1_coeffs(nf: &NormalFormData) -> Result<(f64, f64, f64, f64)> {
    match nf.boundary {
        BoundaryCoeffs::Case1 { epsilon, c1, c2, c3 } => Ok((f64::from(epsilon), c1, c2, c3)),
        BoundaryCoeffs::Case2 { .. } => Err(Error::NotCase1),
    }
}

fn case2_coeffs(nf: &NormalFormData) -> Result<(f64, f64, f64, f64)> {
    match nf.boundary {
        BoundaryCoeffs::Case2 { epsilon, d2, d3, d4 } => Ok((f64::from(epsilon), d2, d3, d4)),
        BoundaryCoeffs::Case1 { .. } => Err(Error::NotCase2),
    }
}

pub fn case1_closed_forms(nf: &NormalFormData, variant: FormulaVariant) -> Result<BoundaryInvariantsCase1> {
    let (e, c1, c2, _) = case1_coeffs(nf)?;
    let NormalFormData { a20, a30, b20, b30, b12, b03, .. } = *nf;
    let m = c1 * c1 + a20;
    let k2 = b20 * b20 + m * m;
    let kappa0 = k2.sqrt();
    let nonzero = kappa0 > TAU_ZERO;
    let kappa_prime0 = nonzero.then(|| {
        (b20 * (b03 * c1.powi(3) + 3.0 * e * b12 * c1 * c1 + e * b30)
            + m * (3.0 * c1 * c2 + e * a30))
            / kappa0
    });
    let tau0 = nonzero.then(|| {
        (m * (e * b03 * c1.powi(3) + 3.0 * b12 * c1 * c1 + b30) - b20 * (3.0 * e * c1 * c2 + a30))
            / k2
    });
    let kappa_nb_prime0 = b03 * c1.powi(3) / 2.0 + 2.0 * e * b12 * c1 * c1 - a20 * b03 * c1 / 2.0
        + e * b30
        - e * a20 * b12;
    let kappa_gb0 = match variant {
        FormulaVariant::Verified => -e * m,
        FormulaVariant::Verbatim => -(e * c1 * c1 + a20),
    };
    let kappa_gb_prime0 = -c1 * (e * b03 * b20 / 2.0 + 3.0 * e * c2) - a30 - b12 * b20;
    Ok(BoundaryInvariantsCase1 {
        kappa0,
        kappa_prime0,
        tau0,
        kappa_nb0: b20,
        kappa_nb_prime0,
        kappa_gb0,
        kappa_gb_prime0,
        alpha: c1.abs(),
    })
}

/// Case-1 invariants by finite differences of `b̂ = f∘b` and of the unit normal along it.
pub fn case1_numeric(f: &SurfaceGerm, b: &PlaneCurve) -> Result<BoundaryInvariantsCase1> {
    case1_numeric_with_step(f, b, DEFAULT_STEP)
}

pub fn case1_numeric_with_step(f: &SurfaceGerm, b: &PlaneCurve, h: f64) -> Result<BoundaryInvariantsCase1> {
    if b.velocity().norm() <= TAU_ZERO {
        return Err(Error::DegenerateBoundary);
    }
    let Adapted { germ, change } = adapt_oriented(f)?;
    if class_of(&change.transport(b)?)? == BoundaryClass::Case2 {
        return Err(Error::NotCase1);
    }
    let nu = unit_normal_jet(&germ)?;
    let bhat = |t: f64| {
        let p = b.eval(t);
        f.eval(p.x, p.y)
    };
    let [d1, d2, d3] = curve_derivatives(&bhat, 0.0, h);
    let kappa0 = kappa_from_derivatives(&d1, &d2, 0.0)?;
    let speed = d1.norm();
    let (kappa_prime0, tau0) = match frenet_from_derivatives(&d1, &d2, &d3, 0.0) {
        Ok((_, tau)) => (Some(kappa_prime_from_derivatives(&d1, &d2, &d3) / speed), Some(tau)),
        Err(Error::UndefinedTorsion { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    // ν lives on the adapted source and is pulled back; b̂ itself comes from f and b
    let cos = curve_on_surface_with_derivatives(
        |u, v| f.eval(u, v),
        |u, v| {
            let (p, q) = (change.new_u.eval(u, v), change.new_v.eval(u, v));
            Vector3::from_fn(|i, _| nu[i].eval(p, q))
        },
        |t| b.eval(t),
        0.0,
        h,
    )?;
    Ok(BoundaryInvariantsCase1 {
        kappa0,
        kappa_prime0,
        tau0,
        kappa_nb0: cos.kappa_nb,
        kappa_nb_prime0: cos.kappa_nb_prime,
        kappa_gb0: cos.kappa_gb,
        kappa_gb_prime0: cos.kappa_gb_prime,
        alpha: approaching_ratio(f, b, None, None)?,
    })
}

/// Cosine of the angle between `b̂″(0)` and the oriented singular curve `γ̂′(0)`.
pub fn angle_beta(f: &SurfaceGerm, b: &PlaneCurve) -> Result<f64> {
    let Setup { germ, boundary } = setup(f, b)?;
    if class_of(&boundary)? != BoundaryClass::Case2 {
        return Err(Error::NotCase2);
    }
    let bhat = f.along(b)?;
    let b2 = Vector3::from_fn(|i, _| bhat[i].derivative_at_zero(2));
    let g1 = germ.derivative_at_zero(1, 0);
    if b2.norm() <= TAU_ZERO {
        return Err(Error::DegenerateContact);
    }
    Ok((b2.dot(&g1) / (b2.norm() * g1.norm())).clamp(-1.0, 1.0))
}

pub fn case2_closed_forms(nf: &NormalFormData, variant: FormulaVariant) -> Result<BoundaryInvariantsCase2> {
    let (e, d2, d3, d4) = case2_coeffs(nf)?;
    let NormalFormData { a20, b20, b12, b03, h5_00: h5, .. } = *nf;
    let q = 1.0 + d2 * d2;
    let cross2 = b03 * b03 * q + d3 * d3;
    let kappa_sing_b = cross2.sqrt() / q.powf(1.25);
    let (beta, tau_sing_b) = match variant {
        FormulaVariant::Verified => (
            d2 / q.sqrt(),
            q.powf(0.25)
                * (e * b03 * (d4 - 3.0 * a20 * d2.powi(3))
                    - 3.0 * b20 * d2 * d2 * d3
                    - 6.0 * b12 * d2 * d3
                    - 24.0 * h5 * d3)
                / cross2,
        ),
        FormulaVariant::Verbatim => (
            d2,
            (-3.0 * e * a20 * b03 * d2.powi(3) + 3.0 * b20 * d2 * d2 * d3 + 6.0 * b12 * d2 * d3
                - h5 * d3
                + e * b03 * d4)
                / cross2.powf(0.75)
                * q.sqrt(),
        ),
    };
    Ok(BoundaryInvariantsCase2 {
        beta,
        kappa_sing_b,
        tau_sing_b,
    })
}

/// Case-2 invariants from the jet of `b̂ = f∘b`.
pub fn case2_numeric(f: &SurfaceGerm, b: &PlaneCurve) -> Result<BoundaryInvariantsCase2> {
    let beta = angle_beta(f, b)?;
    let bhat = CurveGerm::new(f.along(b)?)?;
    Ok(BoundaryInvariantsCase2 {
        beta,
        kappa_sing_b: cuspidal_curvature(&bhat)?,
        tau_sing_b: cuspidal_torsion(&bhat)?,
    })
}

/// One field of a closed-form versus numeric comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDelta {
    pub field: String,
    pub closed: Option<f64>,
    pub numeric: Option<f64>,
    pub delta: Option<f64>,
}

fn delta(field: &str, closed: Option<f64>, numeric: Option<f64>) -> FieldDelta {
    FieldDelta {
        field: field.to_string(),
        closed,
        numeric,
        delta: closed.zip(numeric).map(|(c, n)| n - c),
    }
}

/// Field-by-field differences after applying `signs` to the numeric values.
pub fn compare_case1(
    closed: &BoundaryInvariantsCase1,
    numeric: &BoundaryInvariantsCase1,
    signs: &SignConvention,
) -> Vec<FieldDelta> {
    let n = signs.apply(numeric);
    vec![
        delta("kappa0", Some(closed.kappa0), Some(n.kappa0)),
        delta("kappa_prime0", closed.kappa_prime0, n.kappa_prime0),
        delta("tau0", closed.tau0, n.tau0),
        delta("kappa_nb0", Some(closed.kappa_nb0), Some(n.kappa_nb0)),
        delta("kappa_nb_prime0", Some(closed.kappa_nb_prime0), Some(n.kappa_nb_prime0)),
        delta("kappa_gb0", Some(closed.kappa_gb0), Some(n.kappa_gb0)),
        delta("kappa_gb_prime0", Some(closed.kappa_gb_prime0), Some(n.kappa_gb_prime0)),
        delta("alpha", Some(closed.alpha), Some(n.alpha)),
    ]
}

pub fn compare_case2(closed: &BoundaryInvariantsCase2, numeric: &BoundaryInvariantsCase2) -> Vec<FieldDelta> {
    vec![
        delta("beta", Some(closed.beta), Some(numeric.beta)),
        delta("kappa_sing_b", Some(closed.kappa_sing_b), Some(numeric.kappa_sing_b)),
        delta("tau_sing_b", Some(closed.tau_sing_b), Some(numeric.tau_sing_b)),
    ]
}
