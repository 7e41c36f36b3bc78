//! Curvature parabola of a corank-one germ, umbilic curvature, and the vertex of the
//! parabola against the principal normal of the boundary.

use nalgebra::{Matrix3x2, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::boundary::{classify_boundary, BoundaryClass};
use crate::error::{Error, Result};
use crate::jets::TAU_ZERO;
use crate::surface::{PlaneCurve, SurfaceGerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParabolaKind {
    Parabola,
    Line,
    HalfLine,
    Point,
}

/// `Δ₀ = { A + 2sB + s²C : s ∈ ℝ }` in the normal plane `N₀f`, where `A, B, C` are the
/// normal parts of the second fundamental data on `p̂` and the kernel vector `k`, and `p̂`
/// is scaled to unit image length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureParabola {
    pub kind: ParabolaKind,
    /// Vertex for parabolas and half-lines, a point of the line for lines.
    pub basepoint: Vector3<f64>,
    pub direction: Option<Vector3<f64>>,
    /// `z = q y²` in the frame (vertex; `B⊥`, axis) for parabolas.
    pub quadratic_coeff: Option<f64>,
    pub normal_plane_basis: [Vector3<f64>; 2],
    pub coefficients: [Vector3<f64>; 3],
}

impl CurvatureParabola {
    pub fn point(&self, s: f64) -> Vector3<f64> {
        let [a, b, c] = &self.coefficients;
        a + b * (2.0 * s) + c * (s * s)
    }

    /// Coordinates of a point of `N₀f` in [`Self::normal_plane_basis`].
    pub fn plane_coords(&self, p: &Vector3<f64>) -> Vector2<f64> {
        Vector2::new(p.dot(&self.normal_plane_basis[0]), p.dot(&self.normal_plane_basis[1]))
    }
}

fn hessian(f: &SurfaceGerm, x: &Vector2<f64>, y: &Vector2<f64>) -> Vector3<f64> {
    f.derivative_at_zero(2, 0) * (x.x * y.x)
        + f.derivative_at_zero(1, 1) * (x.x * y.y + x.y * y.x)
        + f.derivative_at_zero(0, 2) * (x.y * y.y)
}

pub fn curvature_parabola(f: &SurfaceGerm) -> Result<CurvatureParabola> {
    if f.order() < 2 {
        return Err(Error::InsufficientOrder { have: f.order(), need: 2 });
    }
    let df = f.differential();
    let svd = df.svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|s| **s > TAU_ZERO * smax.max(1.0))
        .count();
    if rank != 1 {
        return Err(Error::WrongRank(rank));
    }
    let vt = svd.v_t.ok_or_else(|| Error::NumericalFailure("SVD failed".into()))?;
    let (i_min, _) = svd.singular_values.argmin();
    let k = Vector2::new(vt[(i_min, 0)], vt[(i_min, 1)]);
    let p = Vector2::new(k.y, -k.x);
    let image = df * p;
    let p_hat = p / image.norm();
    let e = image.normalize();
    let project = |w: Vector3<f64>| w - e * w.dot(&e);

    let a = project(hessian(f, &p_hat, &p_hat));
    let b = project(hessian(f, &p_hat, &k));
    let c = project(hessian(f, &k, &k));
    let normal_plane_basis = normal_basis(&e);
    let scale = a.norm().max(b.norm()).max(c.norm()).max(1.0);
    let tiny = TAU_ZERO * scale;

    let (kind, basepoint, direction, quadratic_coeff) = if c.norm() <= tiny {
        if b.norm() <= tiny {
            (ParabolaKind::Point, a, None, None)
        } else {
            (ParabolaKind::Line, a, Some(b.normalize()), None)
        }
    } else {
        let axis = c.normalize();
        let mu = b.dot(&axis) / c.norm();
        let b_perp = b - axis * b.dot(&axis);
        if b_perp.norm() <= tiny {
            (ParabolaKind::HalfLine, a - c * (mu * mu), Some(axis), None)
        } else {
            let s = -b.dot(&c) / c.norm_squared();
            let vertex = a + b * (2.0 * s) + c * (s * s);
            let q = c.norm() / (4.0 * b_perp.norm_squared());
            (ParabolaKind::Parabola, vertex, Some(axis), Some(q))
        }
    };
    Ok(CurvatureParabola {
        kind,
        basepoint,
        direction,
        quadratic_coeff,
        normal_plane_basis,
        coefficients: [a, b, c],
    })
}

/// Orthonormal basis of the plane orthogonal to the unit vector `e`.
fn normal_basis(e: &Vector3<f64>) -> [Vector3<f64>; 2] {
    let (axis, _) = e.abs().argmin();
    let mut seed = Vector3::zeros();
    seed[axis] = 1.0;
    let n1 = (seed - e * seed.dot(e)).normalize();
    [n1, e.cross(&n1)]
}

/// Distance from the origin to `Δ₀` (a point) or to the line carrying it.
pub fn umbilic_curvature(p: &CurvatureParabola) -> Result<f64> {
    match (p.kind, p.direction) {
        (ParabolaKind::Parabola, _) => Err(Error::NotDefined),
        (ParabolaKind::Point, _) | (_, None) => Ok(p.basepoint.norm()),
        (_, Some(d)) => Ok((p.basepoint - d * p.basepoint.dot(&d)).norm()),
    }
}

/// Vertex `V` of the half-line `Δ₀`, the point `P` where the line of the principal normal
/// of `b̂ = f∘b` meets the line `ℓ ⊃ Δ₀`, and `|V − P|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexIntersection {
    pub vertex: Vector3<f64>,
    pub intersection: Vector3<f64>,
    pub dist: f64,
    pub principal_normal: Vector3<f64>,
}

pub fn vertex_and_intersection(f: &SurfaceGerm, b: &PlaneCurve) -> Result<VertexIntersection> {
    let parabola = curvature_parabola(f)?;
    let direction = match (parabola.kind, parabola.direction) {
        (ParabolaKind::HalfLine, Some(d)) => d,
        _ => return Err(Error::NotCuspidalEdge),
    };
    if umbilic_curvature(&parabola)? <= TAU_ZERO {
        return Err(Error::HypothesisFailed("limiting normal curvature vanishes"));
    }
    if classify_boundary(f, b)? == BoundaryClass::Case2 {
        return Err(Error::NotCase1);
    }
    let bhat = f.along(b)?;
    let d1 = Vector3::from_fn(|i, _| bhat[i].derivative_at_zero(1));
    let d2 = Vector3::from_fn(|i, _| bhat[i].derivative_at_zero(2));
    let t = d1.normalize();
    let normal_part = d2 - t * d2.dot(&t);
    if normal_part.norm() <= TAU_ZERO {
        return Err(Error::NumericalFailure("boundary image has no principal normal".into()));
    }
    let n = normal_part.normalize();
    if n.cross(&direction).norm() <= TAU_ZERO {
        return Err(Error::NumericalFailure("principal normal is parallel to the parabola".into()));
    }
    let vertex = parabola.basepoint;
    // r n = V + s d
    let m = Matrix3x2::from_columns(&[n, -direction]);
    let sol = m
        .svd(true, true)
        .solve(&vertex, 1e-14)
        .map_err(|e| Error::NumericalFailure(e.to_string()))?;
    let intersection = n * sol.x;
    Ok(VertexIntersection {
        vertex,
        intersection,
        dist: (vertex - intersection).norm(),
        principal_normal: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::{invert_map, Jet2};
    use crate::surface::{BoundaryCoeffs, NormalFormData};

    fn nf(a20: f64, b20: f64, c1: f64) -> NormalFormData {
        NormalFormData {
            a20,
            a30: 0.2,
            b20,
            b30: -0.1,
            b12: 0.3,
            b03: 1.0,
            h5_00: 0.0,
            boundary: BoundaryCoeffs::Case1 { epsilon: 1, c1, c2: 0.4, c3: 0.0 },
        }
    }

    fn close(a: &Vector3<f64>, b: [f64; 3], tol: f64) -> bool {
        (a - Vector3::from(b)).norm() < tol
    }

    #[test]
    fn normal_form_half_line() {
        let p = curvature_parabola(&nf(0.3, 0.5, 0.0).germ(6)).unwrap();
        assert_eq!(p.kind, ParabolaKind::HalfLine);
        assert!(close(&p.basepoint, [0.0, 0.3, 0.5], 1e-15));
        assert!(close(&p.direction.unwrap(), [0.0, 1.0, 0.0], 1e-15));
        assert!((umbilic_curvature(&p).unwrap() - 0.5).abs() < 1e-15);
        for s in [-1.0, 0.3, 2.0] {
            assert!(close(&p.point(s), [0.0, 0.3 + s * s, 0.5], 1e-14));
        }
    }

    #[test]
    fn cross_cap_is_a_parabola() {
        let f = SurfaceGerm::from_terms([&[(1, 0, 1.0)], &[(1, 1, 1.0)], &[(0, 2, 1.0)]], 4).unwrap();
        let p = curvature_parabola(&f).unwrap();
        assert_eq!(p.kind, ParabolaKind::Parabola);
        assert!((p.quadratic_coeff.unwrap() - 0.5).abs() < 1e-15);
        assert!(p.basepoint.norm() < 1e-15);
        assert_eq!(umbilic_curvature(&p), Err(Error::NotDefined));
        for s in [-1.5, 0.5] {
            let q = p.point(s);
            assert!((q.z - q.y * q.y / 2.0).abs() < 1e-14 && q.x == 0.0);
        }
    }

    #[test]
    fn planar_edge_and_point() {
        let f = SurfaceGerm::from_terms([&[(1, 0, 1.0)], &[(0, 2, 0.5)], &[]], 4).unwrap();
        let p = curvature_parabola(&f).unwrap();
        assert_eq!(p.kind, ParabolaKind::HalfLine);
        assert!(close(&p.direction.unwrap(), [0.0, 1.0, 0.0], 1e-15));
        assert_eq!(umbilic_curvature(&p).unwrap(), 0.0);
        let point = CurvatureParabola {
            kind: ParabolaKind::Point,
            basepoint: Vector3::new(0.0, 0.3, 0.4),
            direction: None,
            quadratic_coeff: None,
            normal_plane_basis: [Vector3::y(), Vector3::z()],
            coefficients: [Vector3::new(0.0, 0.3, 0.4), Vector3::zeros(), Vector3::zeros()],
        };
        assert!((umbilic_curvature(&point).unwrap() - 0.5).abs() < 1e-15);
        let immersion = SurfaceGerm::from_terms([&[(1, 0, 1.0)], &[(0, 1, 1.0)], &[]], 4).unwrap();
        assert_eq!(curvature_parabola(&immersion), Err(Error::WrongRank(2)));
    }

    #[test]
    fn vertex_intersection_examples() {
        let data = nf(0.3, 0.5, 0.5);
        let vi = vertex_and_intersection(&data.germ(6), &data.boundary_curve(6)).unwrap();
        assert!(close(&vi.vertex, [0.0, 0.3, 0.5], 1e-14));
        assert!(close(&vi.intersection, [0.0, 0.55, 0.5], 1e-14));
        assert!((vi.dist - 0.25).abs() < 1e-14);

        let data = nf(0.3, 0.5, 0.0);
        let vi = vertex_and_intersection(&data.germ(6), &data.boundary_curve(6)).unwrap();
        assert!(vi.dist < 1e-14);

        let data = nf(0.3, 0.0, 0.5);
        assert!(matches!(
            vertex_and_intersection(&data.germ(6), &data.boundary_curve(6)),
            Err(Error::HypothesisFailed(_))
        ));
    }

    #[test]
    fn invariant_under_coordinates() {
        let data = nf(-0.2, 0.7, -0.6);
        let f = data.germ(6);
        let b = data.boundary_curve(6);
        let p = Jet2::from_terms(&[(1, 0, 0.7), (0, 1, -0.4), (2, 0, 0.3), (0, 2, 0.2)], 6);
        let q = Jet2::from_terms(&[(1, 0, 0.5), (0, 1, 1.1), (1, 1, 0.4)], 6);
        let (pi, qi) = invert_map(&p, &q).unwrap();
        let r = crate::curves::rotation_from_quaternion([0.1, 0.8, -0.2, 0.4]);
        let g = f.compose_source(&p, &q).unwrap().transformed(&r);
        let c = PlaneCurve::new(pi.compose_curve(&b.u, &b.v).unwrap(), qi.compose_curve(&b.u, &b.v).unwrap());
        let par = curvature_parabola(&g).unwrap();
        assert_eq!(par.kind, ParabolaKind::HalfLine);
        assert!((umbilic_curvature(&par).unwrap() - 0.7).abs() < 1e-12);
        let vi = vertex_and_intersection(&g, &c).unwrap();
        assert!((vi.dist - 0.36).abs() < 1e-12);
        // every emitted point is normal to the image of df₀
        let image = g.differential() * Vector2::new(1.0, 0.0) + g.differential() * Vector2::new(0.0, 1.0);
        for s in [-2.0, 0.0, 1.0] {
            assert!(par.point(s).dot(&image).abs() < 1e-9);
        }
    }
}
