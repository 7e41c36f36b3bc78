//! Fixed-step integration of moving orthonormal frames `A′ = A·K(t)` with `K` skew.
//!
//! After every classical Runge–Kutta step the frame is replaced by the nearest rotation,
//! so orthonormality holds to rounding error regardless of the step size.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Largest correction the projection may apply before the step is declared unstable.
const MAX_PROJECTION: f64 = 1e-3;

/// Nearest rotation matrix in the Frobenius norm (orthogonal polar factor).
pub fn nearest_rotation(m: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    let svd = m.svd(true, true);
    let (u, vt) = match (svd.u, svd.v_t) {
        (Some(u), Some(vt)) => (u, vt),
        _ => return Err(Error::NumericalFailure("SVD of frame failed".into())),
    };
    let mut r = u * vt;
    if r.determinant() < 0.0 {
        return Err(Error::NumericalFailure(
            "frame lost its orientation during integration".into(),
        ));
    }
    r.iter_mut().for_each(|x| {
        if x.abs() < 1e-300 {
            *x = 0.0
        }
    });
    Ok(r)
}

/// Orthonormality defect `‖AᵀA − I‖∞`.
pub fn orthonormality_defect(a: &Matrix3<f64>) -> f64 {
    (a.transpose() * a - Matrix3::identity()).amax()
}

/// Grid on `[lo, hi]` containing `anchor`, with roughly `steps` intervals of equal length
/// on each side of the anchor. Returns the grid and the anchor index.
pub fn anchored_grid(lo: f64, hi: f64, anchor: f64, steps: usize) -> Result<(Vec<f64>, usize)> {
    if !(lo < hi) || steps == 0 {
        return Err(Error::InvalidData(format!(
            "invalid span [{lo}, {hi}] with {steps} steps"
        )));
    }
    if anchor < lo || anchor > hi {
        return Err(Error::InvalidData(format!(
            "anchor {anchor} outside [{lo}, {hi}]"
        )));
    }
    let h = (hi - lo) / steps as f64;
    let count = |len: f64| {
        if len <= 0.0 {
            0
        } else {
            ((len / h) - 1e-9).ceil().max(1.0) as usize
        }
    };
    let n_neg = count(anchor - lo);
    let n_pos = count(hi - anchor);
    let mut ts = Vec::with_capacity(n_neg + n_pos + 1);
    for k in (1..=n_neg).rev() {
        ts.push(anchor - (anchor - lo) * k as f64 / n_neg as f64);
    }
    ts.push(anchor);
    for k in 1..=n_pos {
        ts.push(anchor + (hi - anchor) * k as f64 / n_pos as f64);
    }
    Ok((ts, n_neg))
}

/// Integrated frame together with the curve `p′ = velocity(t, A)`, `p(anchor) = 0`.
#[derive(Debug, Clone)]
pub struct FramePath {
    pub ts: Vec<f64>,
    pub frames: Vec<Matrix3<f64>>,
    pub points: Vec<Vector3<f64>>,
    pub anchor_index: usize,
}

impl FramePath {
    pub fn max_orthonormality_defect(&self) -> f64 {
        self.frames
            .iter()
            .map(orthonormality_defect)
            .fold(0.0, f64::max)
    }
}

/// Integrates `A′ = A·K(t)` and `p′ = velocity(t, A)` from `anchor` over the grid
/// `anchored_grid(lo, hi, anchor, steps)`.
pub fn integrate_frame(
    generator: impl Fn(f64) -> Matrix3<f64>,
    velocity: impl Fn(f64, &Matrix3<f64>) -> Vector3<f64>,
    a0: Matrix3<f64>,
    (lo, hi): (f64, f64),
    anchor: f64,
    steps: usize,
) -> Result<FramePath> {
    let (ts, anchor_index) = anchored_grid(lo, hi, anchor, steps)?;
    let a0 = nearest_rotation(&a0)?;
    let n = ts.len();
    let mut frames = vec![Matrix3::zeros(); n];
    let mut points = vec![Vector3::zeros(); n];
    frames[anchor_index] = a0;

    let rhs = |t: f64, a: &Matrix3<f64>| (a * generator(t), velocity(t, a));
    let step = |t: f64, h: f64, a: &Matrix3<f64>, p: &Vector3<f64>| -> Result<_> {
        let (k1a, k1p) = rhs(t, a);
        let (k2a, k2p) = rhs(t + h / 2.0, &(a + k1a * (h / 2.0)));
        let (k3a, k3p) = rhs(t + h / 2.0, &(a + k2a * (h / 2.0)));
        let (k4a, k4p) = rhs(t + h, &(a + k3a * h));
        let a_next = a + (k1a + k2a * 2.0 + k3a * 2.0 + k4a) * (h / 6.0);
        let p_next = p + (k1p + k2p * 2.0 + k3p * 2.0 + k4p) * (h / 6.0);
        if !a_next.iter().chain(p_next.iter()).all(|x| x.is_finite()) {
            return Err(Error::NumericalFailure(format!(
                "non-finite state at t = {}",
                t + h
            )));
        }
        let r = nearest_rotation(&a_next)?;
        if (r - a_next).amax() > MAX_PROJECTION {
            return Err(Error::NumericalFailure(format!(
                "step size too large near t = {t}"
            )));
        }
        Ok((r, p_next))
    };

    for i in anchor_index + 1..n {
        let (a, p) = step(ts[i - 1], ts[i] - ts[i - 1], &frames[i - 1], &points[i - 1])?;
        frames[i] = a;
        points[i] = p;
    }
    for i in (0..anchor_index).rev() {
        let (a, p) = step(ts[i + 1], ts[i] - ts[i + 1], &frames[i + 1], &points[i + 1])?;
        frames[i] = a;
        points[i] = p;
    }
    Ok(FramePath {
        ts,
        frames,
        points,
        anchor_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_about_axis() {
        // K = generator of rotation about e3: columns rotate with unit angular speed
        let k = Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let path = integrate_frame(
            |_| k,
            |_, a| a.column(0).into_owned(),
            Matrix3::identity(),
            (-1.0, 2.0),
            0.0,
            300,
        )
        .unwrap();
        for (t, a) in path.ts.iter().zip(&path.frames) {
            assert!((a[(0, 0)] - t.cos()).abs() < 1e-9);
            assert!((a[(1, 0)] - t.sin()).abs() < 1e-9);
        }
        let last = path.points.last().unwrap();
        assert!((last.x - 2.0_f64.sin()).abs() < 1e-9);
        assert!((last.y - (1.0 - 2.0_f64.cos())).abs() < 1e-9);
        assert!(path.max_orthonormality_defect() < 1e-14);
    }

    #[test]
    fn anchored_grid_contains_anchor() {
        let (ts, i) = anchored_grid(-0.3, 1.0, 0.0, 13).unwrap();
        assert_eq!(ts[i], 0.0);
        assert_eq!(ts[0], -0.3);
        assert_eq!(*ts.last().unwrap(), 1.0);
        assert!(ts.windows(2).all(|w| w[1] > w[0]));
        let (ts, i) = anchored_grid(0.0, 1.0, 0.0, 4).unwrap();
        assert_eq!((ts.len(), i), (5, 0));
        assert!(anchored_grid(0.0, 1.0, 2.0, 4).is_err());
    }

    #[test]
    fn projection_fixes_small_drift() {
        let m = Matrix3::identity() + Matrix3::from_element(1e-6);
        let r = nearest_rotation(&m).unwrap();
        assert!(orthonormality_defect(&r) < 1e-14);
    }
}
