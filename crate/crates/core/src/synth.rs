//! Seeded random inputs: normal forms, disguising coordinate changes, (2,3)-type curves
//! and flat ruled strips. Used by the property harness and the acceptance suite.

use nalgebra::Matrix3;
use rand::Rng;

use crate::curves::{classify_curve, rotation_from_quaternion, CurveGerm, CurveSingularityClass};
use crate::error::Result;
use crate::jets::{invert_map, Jet1, Jet2};
use crate::ruled::RuledInput;
use crate::scalar::ScalarFn;
use crate::surface::{BoundaryCoeffs, NormalFormData, PlaneCurve, SurfaceGerm};

/// Smallest `|b₀₃|` drawn.
pub const MIN_B03: f64 = 0.2;

fn uniform<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(-1.0..=1.0)
}

fn sign<R: Rng>(rng: &mut R) -> i8 {
    if rng.gen_bool(0.5) {
        1
    } else {
        -1
    }
}

fn cuspidal_coeffs<R: Rng>(rng: &mut R, boundary: BoundaryCoeffs) -> NormalFormData {
    let mut b03 = uniform(rng);
    while b03.abs() < MIN_B03 {
        b03 = uniform(rng);
    }
    NormalFormData {
        a20: uniform(rng),
        a30: uniform(rng),
        b20: uniform(rng).abs(),
        b30: uniform(rng),
        b12: uniform(rng),
        b03,
        h5_00: uniform(rng),
        boundary,
    }
}

/// Case-1 normal form, all coefficients uniform in `[−1, 1]` (with `b₂₀ ≥ 0`).
pub fn normal_form_case1<R: Rng>(rng: &mut R) -> NormalFormData {
    let boundary = BoundaryCoeffs::Case1 {
        epsilon: sign(rng),
        c1: uniform(rng),
        c2: uniform(rng),
        c3: uniform(rng),
    };
    cuspidal_coeffs(rng, boundary)
}

/// Case-2 normal form with `|d₃| ≥ 0.2`, so that the boundary image is of (2,3)-type.
pub fn normal_form_case2<R: Rng>(rng: &mut R) -> NormalFormData {
    let mut d3 = uniform(rng);
    while d3.abs() < 0.2 {
        d3 = uniform(rng);
    }
    let boundary = BoundaryCoeffs::Case2 {
        epsilon: sign(rng),
        d2: uniform(rng),
        d3,
        d4: uniform(rng),
    };
    cuspidal_coeffs(rng, boundary)
}

/// Rotation drawn uniformly from SO(3).
pub fn rotation<R: Rng>(rng: &mut R) -> Matrix3<f64> {
    let q = [normal(rng), normal(rng), normal(rng), normal(rng)];
    rotation_from_quaternion(q)
}

// Box-Muller
fn normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Orientation-preserving polynomial diffeomorphism germ `(p, q)` with `det d(p, q)₀ > 0.3`
/// and nonlinear terms up to degree 3.
pub fn source_change<R: Rng>(rng: &mut R, order: usize) -> (Jet2, Jet2) {
    loop {
        let m = [uniform(rng), uniform(rng), uniform(rng), uniform(rng)];
        let det = m[0] * m[3] - m[1] * m[2];
        if det <= 0.3 {
            continue;
        }
        let mut p = Jet2::from_terms(&[(1, 0, m[0]), (0, 1, m[1])], order);
        let mut q = Jet2::from_terms(&[(1, 0, m[2]), (0, 1, m[3])], order);
        for d in 2..=3.min(order) {
            for i in 0..=d {
                p.set_coeff(i, d - i, 0.3 * uniform(rng));
                q.set_coeff(i, d - i, 0.3 * uniform(rng));
            }
        }
        return (p, q);
    }
}

/// A germ and boundary that represent the same geometry as a normal form.
#[derive(Debug, Clone)]
pub struct Disguised {
    pub germ: SurfaceGerm,
    pub boundary: PlaneCurve,
    pub rotation: Matrix3<f64>,
}

/// `R ∘ f ∘ φ` together with `φ⁻¹ ∘ b`, for a random source change `φ` and rotation `R`.
pub fn disguise<R: Rng>(rng: &mut R, f: &SurfaceGerm, b: &PlaneCurve) -> Result<Disguised> {
    let order = f.order();
    let (p, q) = source_change(rng, order);
    let (pi, qi) = invert_map(&p, &q)?;
    let r = rotation(rng);
    let germ = f.compose_source(&p, &q)?.transformed(&r);
    let b = b.with_order(order);
    let boundary = PlaneCurve::new(pi.compose_curve(&b.u, &b.v)?, qi.compose_curve(&b.u, &b.v)?);
    Ok(Disguised {
        germ,
        boundary,
        rotation: r,
    })
}

/// Reparametrization `t(x) = x + …` with `t′(0) ∈ [0.5, 1.5]`.
pub fn reparametrization<R: Rng>(rng: &mut R, order: usize) -> Jet1 {
    let mut t = Jet1::monomial(rng.gen_range(0.5..=1.5), 1, order);
    for k in 2..=order.min(4) {
        t.set_coeff(k, 0.5 * uniform(rng));
    }
    t
}

/// Random (2,3)-type curve germ with `|γ″(0) × γ‴(0)|` bounded away from zero.
pub fn type23_curve<R: Rng>(rng: &mut R, order: usize) -> CurveGerm {
    loop {
        let mut comps = [Jet1::zero(order), Jet1::zero(order), Jet1::zero(order)];
        for c in comps.iter_mut() {
            for k in 2..=order {
                c.set_coeff(k, uniform(rng));
            }
        }
        let Ok(g) = CurveGerm::new(comps) else { continue };
        let (d2, d3) = (g.derivative_vector(2), g.derivative_vector(3));
        if d2.norm() < 0.5 || d2.cross(&d3).norm() < 0.3 * d2.norm() * d3.norm() {
            continue;
        }
        if classify_curve(&g) == Ok(CurveSingularityClass::Type23) {
            return g;
        }
    }
}

/// Random polynomial ruled input on `[−1, 1]` with a regular strip `|v| ≤ ε`.
pub fn ruled_input<R: Rng>(rng: &mut R) -> RuledInput {
    let x = ScalarFn::poly(&[uniform(rng), 0.5 * uniform(rng)]);
    let y0 = 1.2 + rng.gen_range(0.0..0.5);
    let y = ScalarFn::poly(&[y0 * f64::from(sign(rng)), 0.3 * uniform(rng), 0.3 * uniform(rng)]);
    let kappa = ScalarFn::poly(&[uniform(rng), 0.5 * uniform(rng)]);
    RuledInput::new(x, y, kappa, 0.5, 3.0, (-1.0, 1.0))
}
