//! Cuspidal-edge germs: adapted coordinates, unit normal, the cuspidal-edge test and the
//! reduction to the normal form
//! `(u, a₂₀u²/2 + a₃₀u³/6 + v²/2, b₂₀u²/2 + b₃₀u³/6 + b₁₂uv²/2 + b₀₃v³/6) + h`.

use nalgebra::{Matrix3, Matrix3x2, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::{cross2, dot2, invert_map, Jet1, Jet2, Jet2x3, Var, DEFAULT_ORDER, TAU_ZERO};

/// Relative size below which a coefficient that must vanish by construction is zeroed.
const STRUCTURAL_ZERO: f64 = 1e-8;

/// Plane curve-germ `t ↦ (u(t), v(t))` in the source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "[Jet1; 2]", into = "[Jet1; 2]")]
pub struct PlaneCurve {
    pub u: Jet1,
    pub v: Jet1,
}

impl From<[Jet1; 2]> for PlaneCurve {
    fn from([u, v]: [Jet1; 2]) -> Self {
        PlaneCurve { u, v }
    }
}

impl From<PlaneCurve> for [Jet1; 2] {
    fn from(c: PlaneCurve) -> Self {
        [c.u, c.v]
    }
}

impl PlaneCurve {
    pub fn new(u: Jet1, v: Jet1) -> Self {
        PlaneCurve { u, v }
    }

    pub fn velocity(&self) -> Vector2<f64> {
        Vector2::new(self.u.coeff(1), self.v.coeff(1))
    }

    pub fn eval(&self, t: f64) -> Vector2<f64> {
        Vector2::new(self.u.eval(t), self.v.eval(t))
    }

    pub fn order(&self) -> usize {
        self.u.order().min(self.v.order())
    }

    /// `self ∘ s(t)`.
    pub fn reparametrized(&self, s: &Jet1) -> Result<Self> {
        Ok(PlaneCurve {
            u: self.u.compose(s)?,
            v: self.v.compose(s)?,
        })
    }

    /// Zero-extends both components to `order` (polynomial curves).
    pub fn with_order(&self, order: usize) -> Self {
        PlaneCurve {
            u: Jet1::from_slice(self.u.coeffs(), order),
            v: Jet1::from_slice(self.v.coeffs(), order),
        }
    }
}

/// Map-germ `f: (ℝ², 0) → (ℝ³, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceGerm {
    components: Jet2x3,
    /// Singular set is `{v = 0}` and `∂v` spans the kernel along it.
    adapted: bool,
}

impl SurfaceGerm {
    /// Germ in arbitrary coordinates. Components are truncated to their common order.
    pub fn new(components: Jet2x3) -> Result<Self> {
        if let Some(c) = components
            .iter()
            .map(Jet2::constant_term)
            .find(|c| c.abs() > TAU_ZERO)
        {
            return Err(Error::InvalidData(format!(
                "surface germ must map the origin to the origin (constant term {c})"
            )));
        }
        let n = components.iter().map(Jet2::order).min().unwrap();
        let mut components = components.map(|c| c.truncate(n));
        components.iter_mut().for_each(|c| c.set_coeff(0, 0, 0.0));
        Ok(SurfaceGerm {
            components,
            adapted: false,
        })
    }

    /// Germ asserted to be in adapted coordinates; the assertion is checked.
    pub fn adapted(components: Jet2x3) -> Result<Self> {
        let mut g = SurfaceGerm::new(components)?;
        let fv = g.partial(Var::V);
        for c in &fv {
            c.div_exact(Var::V, 1).map_err(|_| Error::NotAdapted)?;
        }
        if g.derivative_at_zero(1, 0).norm() <= TAU_ZERO {
            return Err(Error::NotAdapted);
        }
        g.adapted = true;
        Ok(g)
    }

    /// Polynomial germ from `(i, j, c)` terms per component, at the given order.
    pub fn from_terms(terms: [&[(usize, usize, f64)]; 3], order: usize) -> Result<Self> {
        SurfaceGerm::new(terms.map(|t| Jet2::from_terms(t, order)))
    }

    pub fn components(&self) -> &Jet2x3 {
        &self.components
    }

    pub fn order(&self) -> usize {
        self.components[0].order()
    }

    pub fn is_adapted(&self) -> bool {
        self.adapted
    }

    /// Zero-extends or truncates every component to `order`.
    pub fn with_order(&self, order: usize) -> Self {
        let components = self.components.clone().map(|c| {
            let mut out = Jet2::zero(order);
            for (i, j, v) in c.terms() {
                out.set_coeff(i, j, v);
            }
            out
        });
        SurfaceGerm {
            components,
            adapted: self.adapted,
        }
    }

    pub fn eval(&self, u: f64, v: f64) -> Vector3<f64> {
        Vector3::from_fn(|i, _| self.components[i].eval(u, v))
    }

    pub fn partial(&self, var: Var) -> Jet2x3 {
        self.components.clone().map(|c| c.partial(var))
    }

    /// `∂^{i+j} f / ∂u^i ∂v^j` at the origin.
    pub fn derivative_at_zero(&self, i: usize, j: usize) -> Vector3<f64> {
        Vector3::from_fn(|k, _| self.components[k].derivative_at_zero(i, j))
    }

    /// `df₀` as a 3×2 matrix.
    pub fn differential(&self) -> Matrix3x2<f64> {
        Matrix3x2::from_columns(&[self.derivative_at_zero(1, 0), self.derivative_at_zero(0, 1)])
    }

    /// `R∘f` for a linear map `R` of the target.
    pub fn transformed(&self, r: &Matrix3<f64>) -> Self {
        SurfaceGerm {
            components: rotate(&self.components, r),
            adapted: self.adapted,
        }
    }

    /// `f(p(u, v), q(u, v))`; the result is not marked adapted.
    pub fn compose_source(&self, p: &Jet2, q: &Jet2) -> Result<Self> {
        let c = self
            .components
            .iter()
            .map(|c| c.compose(p, q))
            .collect::<Result<Vec<_>>>()?;
        let n = c.iter().map(Jet2::order).min().unwrap();
        SurfaceGerm::new([c[0].truncate(n), c[1].truncate(n), c[2].truncate(n)])
    }

    /// Image curve `f ∘ b`.
    pub fn along(&self, b: &PlaneCurve) -> Result<[Jet1; 3]> {
        let c = self
            .components
            .iter()
            .map(|c| c.compose_curve(&b.u, &b.v))
            .collect::<Result<Vec<_>>>()?;
        let n = c.iter().map(Jet1::order).min().unwrap();
        Ok([c[0].truncate(n), c[1].truncate(n), c[2].truncate(n)])
    }
}

fn rotate(c: &Jet2x3, r: &Matrix3<f64>) -> Jet2x3 {
    let row = |i: usize| {
        c[0].scale(r[(i, 0)])
            .add(&c[1].scale(r[(i, 1)]))
            .add(&c[2].scale(r[(i, 2)]))
    };
    [row(0), row(1), row(2)]
}

fn vec_at_zero(c: &Jet2x3) -> Vector3<f64> {
    Vector3::from_fn(|i, _| c[i].constant_term())
}

/// Change of source coordinates, stored as the new coordinates in terms of the old ones.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceChange {
    pub new_u: Jet2,
    pub new_v: Jet2,
}

impl SourceChange {
    pub fn identity(order: usize) -> Self {
        SourceChange {
            new_u: Jet2::u(order),
            new_v: Jet2::v(order),
        }
    }

    /// The change `self` followed by `next`.
    pub fn then(&self, next: &SourceChange) -> Result<SourceChange> {
        Ok(SourceChange {
            new_u: next.new_u.compose(&self.new_u, &self.new_v)?,
            new_v: next.new_v.compose(&self.new_u, &self.new_v)?,
        })
    }

    /// A curve expressed in the new coordinates.
    pub fn transport(&self, b: &PlaneCurve) -> Result<PlaneCurve> {
        Ok(PlaneCurve {
            u: self.new_u.compose_curve(&b.u, &b.v)?,
            v: self.new_v.compose_curve(&b.u, &b.v)?,
        })
    }
}

/// An adapted germ and the coordinate change that produced it.
#[derive(Debug, Clone)]
pub struct Adapted {
    pub germ: SurfaceGerm,
    pub change: SourceChange,
}

/// Brings a corank-one germ to adapted coordinates: the kernel of `df₀` becomes `∂v`,
/// the singular set becomes `{v = 0}` and `∂v` spans the kernel along it.
pub fn adapt(f: &SurfaceGerm) -> Result<Adapted> {
    let n = f.order();
    if n < 3 {
        return Err(Error::InsufficientOrder { have: n, need: 3 });
    }

    // linear step: kernel of df₀ to the second axis
    let svd = f.differential().svd(false, true);
    let scale = svd.singular_values.max().max(1.0);
    let rank = svd
        .singular_values
        .iter()
        .filter(|s| **s > TAU_ZERO * scale)
        .count();
    if rank != 1 {
        return Err(Error::NotCuspidalEdge);
    }
    let vt = svd.v_t.ok_or_else(|| Error::NumericalFailure("SVD failed".into()))?;
    let (i_min, _) = svd.singular_values.argmin();
    let mut k = Vector2::new(vt[(i_min, 0)], vt[(i_min, 1)]);
    if k.y < -TAU_ZERO || (k.y.abs() <= TAU_ZERO && k.x < 0.0) {
        k = -k;
    }
    let p = Vector2::new(k.y, -k.x);
    let old_u = Jet2::u(n).scale(p.x).add(&Jet2::v(n).scale(k.x));
    let old_v = Jet2::u(n).scale(p.y).add(&Jet2::v(n).scale(k.y));
    let mut f1 = f.compose_source(&old_u, &old_v)?;
    for c in f1.components.iter_mut() {
        c.set_coeff(0, 1, 0.0);
    }
    let linear = SourceChange {
        new_u: Jet2::u(n).scale(p.x).add(&Jet2::v(n).scale(p.y)),
        new_v: Jet2::u(n).scale(k.x).add(&Jet2::v(n).scale(k.y)),
    };

    // singular set to {v = 0}
    let fu = f1.partial(Var::U);
    let fv = f1.partial(Var::V);
    let m = f1.derivative_at_zero(1, 0).cross(&f1.derivative_at_zero(0, 2));
    if m.norm() <= TAU_ZERO {
        return Err(Error::NotCuspidalEdge);
    }
    let area = cross2(&fu, &fv);
    let lambda = area[0]
        .scale(m.x)
        .add(&area[1].scale(m.y))
        .add(&area[2].scale(m.z));
    let lambda_v = lambda.coeff(0, 1);
    let u1 = Jet1::variable(lambda.order());
    let mut phi = Jet1::zero(lambda.order());
    for _ in 0..=lambda.order() {
        let residual = lambda.compose_curve(&u1, &phi)?;
        phi = phi.sub(&residual.scale(1.0 / lambda_v));
        phi.set_coeff(0, 0.0);
    }
    let shifted_v = Jet2::v(n).add(&Jet2::from_univariate(&phi, Var::U));
    let f2 = f1.compose_source(&Jet2::u(n), &shifted_v)?;
    let straighten = SourceChange {
        new_u: Jet2::u(n),
        new_v: Jet2::v(n).sub(&Jet2::from_univariate(&phi, Var::U)),
    };

    // kernel along the singular set to ∂v
    let fu_axis: [Jet1; 3] = f2.partial(Var::U).map(|c| c.restrict_axis(Var::U));
    let fv_axis: [Jet1; 3] = f2.partial(Var::V).map(|c| c.restrict_axis(Var::U));
    let num = crate::jets::dot1(&fv_axis, &fu_axis);
    let den = crate::jets::dot1(&fu_axis, &fu_axis);
    let psi = num.mul(&den.recip()?).scale(-1.0);
    let sheared_u = Jet2::u(n).add(&Jet2::from_univariate(&psi, Var::U).mul_monomial(0, 1).truncate(n));
    let mut f3 = f2.compose_source(&sheared_u, &Jet2::v(f2.order()))?;
    let scale = f3.components.iter().map(Jet2::max_abs).fold(1.0, f64::max);
    for c in f3.components.iter_mut() {
        for i in 0..c.order() {
            let x = c.coeff(i, 1);
            if x.abs() > STRUCTURAL_ZERO * scale {
                return Err(Error::NumericalFailure(format!(
                    "kernel field not straightened (u^{i} v coefficient {x:e})"
                )));
            }
            c.set_coeff(i, 1, 0.0);
        }
    }
    f3.adapted = true;
    let (inv_u, inv_v) = invert_map(&sheared_u, &Jet2::v(sheared_u.order()))?;
    let shear = SourceChange {
        new_u: inv_u,
        new_v: inv_v,
    };

    let change = linear.then(&straighten)?.then(&shear)?;
    Ok(Adapted { germ: f3, change })
}

/// Adapted coordinates oriented so that `⟨f_uu(0), f_u(0) × f_vv(0)⟩ ≥ 0`; this fixes the
/// direction of the singular curve and the sign of the unit normal. Ties keep the
/// orientation produced by [`adapt`].
pub fn adapt_oriented(f: &SurfaceGerm) -> Result<Adapted> {
    let Adapted { germ, change } = adapt(f)?;
    let fu = germ.derivative_at_zero(1, 0);
    let side = germ
        .derivative_at_zero(2, 0)
        .dot(&fu.cross(&germ.derivative_at_zero(0, 2)));
    if side >= 0.0 {
        return Ok(Adapted { germ, change });
    }
    let n = germ.order();
    let flip = SourceChange {
        new_u: Jet2::u(n).scale(-1.0),
        new_v: Jet2::v(n).scale(-1.0),
    };
    let mut flipped = germ.compose_source(&flip.new_u, &flip.new_v)?;
    flipped.adapted = true;
    Ok(Adapted {
        germ: flipped,
        change: change.then(&flip)?,
    })
}

/// Jet of the unit normal `ν = w/|w|`, `w = f_u × (f_v/v)`, of an adapted germ.
pub fn unit_normal_jet(f: &SurfaceGerm) -> Result<Jet2x3> {
    if !f.adapted {
        return Err(Error::NotAdapted);
    }
    let fu = f.partial(Var::U);
    let fv_over_v: Jet2x3 = f
        .partial(Var::V)
        .into_iter()
        .map(|c| c.div_exact(Var::V, 1))
        .collect::<Result<Vec<_>>>()
        .map_err(|_| Error::NotAdapted)?
        .try_into()
        .unwrap();
    let w = cross2(&fu, &fv_over_v);
    let w2 = dot2(&w, &w);
    if w2.constant_term() <= TAU_ZERO * TAU_ZERO {
        return Err(Error::NotFront);
    }
    let inv = w2.sqrt_inv()?;
    Ok(w.map(|c| c.mul(&inv)))
}

/// `f_u(0) ≠ 0` and `det(f_u, f_vv, f_vvv)(0) ≠ 0` for an adapted germ.
pub fn is_cuspidal_edge(f: &SurfaceGerm) -> Result<bool> {
    if !f.adapted {
        return Err(Error::NotAdapted);
    }
    if f.order() < 3 {
        return Err(Error::InsufficientOrder {
            have: f.order(),
            need: 3,
        });
    }
    let fu = f.derivative_at_zero(1, 0);
    let det = Matrix3::from_columns(&[fu, f.derivative_at_zero(0, 2), f.derivative_at_zero(0, 3)])
        .determinant();
    Ok(fu.norm() > TAU_ZERO && det.abs() > TAU_ZERO)
}

/// Boundary coefficients in the normal form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum BoundaryCoeffs {
    /// `b(u) = (εu, c₁u + c₂u²/2 + c₃u³/6 + O(u⁴))`.
    Case1 { epsilon: i8, c1: f64, c2: f64, c3: f64 },
    /// `b(v) = (d₂v²/2 + d₃v³/6 + d₄v⁴/24 + O(v⁵), εv)`.
    Case2 { epsilon: i8, d2: f64, d3: f64, d4: f64 },
}

impl BoundaryCoeffs {
    pub fn epsilon(&self) -> f64 {
        match self {
            BoundaryCoeffs::Case1 { epsilon, .. } | BoundaryCoeffs::Case2 { epsilon, .. } => {
                f64::from(*epsilon)
            }
        }
    }
}

/// Coefficients of a cuspidal edge with boundary in normal form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalFormData {
    pub a20: f64,
    pub a30: f64,
    pub b20: f64,
    pub b30: f64,
    pub b12: f64,
    pub b03: f64,
    /// Coefficient of `v⁴` in the third component.
    pub h5_00: f64,
    pub boundary: BoundaryCoeffs,
}

impl NormalFormData {
    pub fn validate(&self) -> Result<()> {
        if self.b03.abs() <= TAU_ZERO {
            return Err(Error::InvalidData("b03 must be nonzero".into()));
        }
        if self.b20 < 0.0 {
            return Err(Error::InvalidData("b20 must be nonnegative".into()));
        }
        let eps = match self.boundary {
            BoundaryCoeffs::Case1 { epsilon, .. } | BoundaryCoeffs::Case2 { epsilon, .. } => epsilon,
        };
        if eps != 1 && eps != -1 {
            return Err(Error::InvalidData("epsilon must be 1 or -1".into()));
        }
        let all = [self.a20, self.a30, self.b20, self.b30, self.b12, self.b03, self.h5_00];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidData("coefficients must be finite".into()));
        }
        Ok(())
    }

    /// The normal-form germ with every remainder term zero except `h₅(0,0) v⁴`.
    pub fn germ(&self, order: usize) -> SurfaceGerm {
        let x = [(1, 0, 1.0)];
        let y = [(2, 0, self.a20 / 2.0), (3, 0, self.a30 / 6.0), (0, 2, 0.5)];
        let z = [
            (2, 0, self.b20 / 2.0),
            (3, 0, self.b30 / 6.0),
            (1, 2, self.b12 / 2.0),
            (0, 3, self.b03 / 6.0),
            (0, 4, self.h5_00),
        ];
        let mut g = SurfaceGerm::from_terms([&x, &y, &z], order).expect("normal form is a germ");
        g.adapted = true;
        g
    }

    /// The normal-form boundary with vanishing remainder.
    pub fn boundary_curve(&self, order: usize) -> PlaneCurve {
        match self.boundary {
            BoundaryCoeffs::Case1 { epsilon, c1, c2, c3 } => PlaneCurve {
                u: Jet1::monomial(f64::from(epsilon), 1, order),
                v: Jet1::from_slice(&[0.0, c1, c2 / 2.0, c3 / 6.0], order),
            },
            BoundaryCoeffs::Case2 { epsilon, d2, d3, d4 } => PlaneCurve {
                u: Jet1::from_slice(&[0.0, 0.0, d2 / 2.0, d3 / 6.0, d4 / 24.0], order),
                v: Jet1::monomial(f64::from(epsilon), 1, order),
            },
        }
    }
}

/// Singular curvature, limiting normal curvature, cuspidal curvature and cusp-directional
/// torsion at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeInvariants {
    pub kappa_s: f64,
    pub kappa_nu: f64,
    pub kappa_c: f64,
    pub kappa_t: f64,
}

pub fn edge_invariants(nf: &NormalFormData) -> EdgeInvariants {
    EdgeInvariants {
        kappa_s: nf.a20,
        kappa_nu: nf.b20,
        kappa_c: nf.b03,
        kappa_t: nf.b12,
    }
}

/// Full output of the reduction.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub data: NormalFormData,
    /// The germ in normal-form coordinates, rotated into normal position.
    pub germ: SurfaceGerm,
    /// The boundary in normal-form coordinates.
    pub boundary: PlaneCurve,
    /// Rotation of the target applied to `f`.
    pub rotation: Matrix3<f64>,
}

pub fn reduce_to_normal_form(f: &SurfaceGerm, b: &PlaneCurve) -> Result<NormalFormData> {
    reduce(f, b).map(|r| r.data)
}

/// Reduces `(f, b)` to normal form: adapted coordinates, a rotation sending `f_u(0)` to
/// `e₁` and the cusp direction to `e₂`, then the source change `U = X`,
/// `V = v √(2 (Y − g(X)) / v²)` that makes the first two components exactly `U` and
/// `g(U) + V²/2`.
pub fn reduce(f: &SurfaceGerm, b: &PlaneCurve) -> Result<Reduction> {
    if b.velocity().norm() <= TAU_ZERO {
        return Err(Error::DegenerateBoundary);
    }
    let Adapted { germ, change } = adapt_oriented(f)?;
    if !is_cuspidal_edge(&germ)? {
        return Err(Error::NotCuspidalEdge);
    }
    let fvv = germ.derivative_at_zero(0, 2);
    let e1 = germ.derivative_at_zero(1, 0).normalize();
    let e2 = (fvv - e1 * fvv.dot(&e1)).normalize();
    let e3 = e1.cross(&e2);
    let rotation = Matrix3::from_rows(&[e1.transpose(), e2.transpose(), e3.transpose()]);
    let [x, y, mut z] = rotate(germ.components(), &rotation);
    for (i, j) in [(1, 0), (0, 1), (0, 2)] {
        z.set_coeff(i, j, 0.0);
    }

    // g(U) = Y along the singular set, with U = X(u, 0)
    let x_axis = x.restrict_axis(Var::U);
    let u_of_x = x_axis.inverse()?;
    let g = y.restrict_axis(Var::U).compose(&u_of_x)?;
    let w = y.sub(&g.compose_jet2(&x)?);
    let w_over_v2 = w.div_exact(Var::V, 2)?;
    let new_v = w_over_v2.scale(2.0).sqrt()?.mul_monomial(0, 1);
    let new_u = x.truncate(new_v.order());
    let step = SourceChange {
        new_u: new_u.clone(),
        new_v: new_v.clone(),
    };
    let (psi_u, psi_v) = invert_map(&new_u, &new_v)?;
    let comps: Vec<Jet2> = [&x, &y, &z]
        .iter()
        .map(|c| c.compose(&psi_u, &psi_v))
        .collect::<Result<_>>()?;
    let order = comps.iter().map(Jet2::order).min().unwrap();
    let mut nf_germ = SurfaceGerm::new([
        comps[0].truncate(order),
        comps[1].truncate(order),
        comps[2].truncate(order),
    ])?;
    nf_germ.adapted = true;
    let zc = &nf_germ.components[2];
    if zc.order() < 4 || g.order() < 3 {
        return Err(Error::InsufficientOrder {
            have: zc.order().min(g.order() + 1),
            need: 4,
        });
    }

    let boundary = change.then(&step)?.transport(b)?;
    let coeffs = read_boundary(&boundary)?;
    let data = NormalFormData {
        a20: 2.0 * g.coeff(2),
        a30: 6.0 * g.coeff(3),
        b20: 2.0 * zc.coeff(2, 0),
        b30: 6.0 * zc.coeff(3, 0),
        b12: 2.0 * zc.coeff(1, 2),
        b03: 6.0 * zc.coeff(0, 3),
        h5_00: zc.coeff(0, 4),
        boundary: coeffs,
    };
    Ok(Reduction {
        data,
        germ: nf_germ,
        boundary,
        rotation,
    })
}

/// Reads `(ε, c₁, c₂, c₃)` or `(ε, d₂, d₃, d₄)` from a boundary in normal-form coordinates.
fn read_boundary(b: &PlaneCurve) -> Result<BoundaryCoeffs> {
    let vel = b.velocity();
    if vel.norm() <= TAU_ZERO {
        return Err(Error::DegenerateBoundary);
    }
    if vel.x.abs() > TAU_ZERO * vel.norm().max(1.0) {
        let eps = vel.x.signum();
        let param = b.u.scale(eps);
        let t_of_s = param.inverse()?;
        let v = b.v.compose(&t_of_s)?;
        if v.order() < 3 {
            return Err(Error::InsufficientOrder {
                have: v.order(),
                need: 3,
            });
        }
        Ok(BoundaryCoeffs::Case1 {
            epsilon: eps as i8,
            c1: v.derivative_at_zero(1),
            c2: v.derivative_at_zero(2),
            c3: v.derivative_at_zero(3),
        })
    } else {
        let eps = vel.y.signum();
        let param = b.v.scale(eps);
        let t_of_s = param.inverse()?;
        let u = b.u.compose(&t_of_s)?;
        if u.order() < 4 {
            return Err(Error::InsufficientOrder {
                have: u.order(),
                need: 4,
            });
        }
        Ok(BoundaryCoeffs::Case2 {
            epsilon: eps as i8,
            d2: u.derivative_at_zero(2),
            d3: u.derivative_at_zero(3),
            d4: u.derivative_at_zero(4),
        })
    }
}

/// Working order used for polynomial inputs given at a lower order.
pub fn working_order(requested: Option<usize>) -> usize {
    requested.unwrap_or(DEFAULT_ORDER)
}

/// `ν` evaluated from its jet.
pub fn eval_jet3(c: &Jet2x3, u: f64, v: f64) -> Vector3<f64> {
    Vector3::from_fn(|i, _| c[i].eval(u, v))
}

/// Value of a vector jet at the origin.
pub fn jet3_at_zero(c: &Jet2x3) -> Vector3<f64> {
    vec_at_zero(c)
}
