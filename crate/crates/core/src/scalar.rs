//! Scalar functions of one variable: constants, polynomials, or interpolated samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::Jet1;

/// A smooth (or piecewise smooth) real function of `t`.
///
/// Samples are interpolated by a natural cubic spline, so derivatives up to order two
/// are continuous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScalarRepr", into = "ScalarRepr")]
pub enum ScalarFn {
    Constant(f64),
    /// Coefficients of `1, t, t², …`.
    Poly(Vec<f64>),
    Samples(Spline),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ScalarRepr {
    Constant(f64),
    Poly(Vec<f64>),
    Samples { t: Vec<f64>, values: Vec<f64> },
}

impl TryFrom<ScalarRepr> for ScalarFn {
    type Error = Error;

    fn try_from(r: ScalarRepr) -> Result<Self> {
        match r {
            ScalarRepr::Constant(c) => Ok(ScalarFn::Constant(c)),
            ScalarRepr::Poly(c) if c.is_empty() => Ok(ScalarFn::Constant(0.0)),
            ScalarRepr::Poly(c) => Ok(ScalarFn::Poly(c)),
            ScalarRepr::Samples { t, values } => Ok(ScalarFn::Samples(Spline::new(t, values)?)),
        }
    }
}

impl From<ScalarFn> for ScalarRepr {
    fn from(f: ScalarFn) -> Self {
        match f {
            ScalarFn::Constant(c) => ScalarRepr::Constant(c),
            ScalarFn::Poly(c) => ScalarRepr::Poly(c),
            ScalarFn::Samples(s) => ScalarRepr::Samples {
                t: s.ts,
                values: s.values,
            },
        }
    }
}

impl ScalarFn {
    pub fn poly(coeffs: &[f64]) -> Self {
        ScalarFn::Poly(coeffs.to_vec())
    }

    pub fn samples(ts: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(ScalarFn::Samples(Spline::new(ts, values)?))
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.derivative(t, 0)
    }

    /// `k`-th derivative at `t`.
    pub fn derivative(&self, t: f64, k: usize) -> f64 {
        match self {
            ScalarFn::Constant(c) => {
                if k == 0 {
                    *c
                } else {
                    0.0
                }
            }
            ScalarFn::Poly(c) => c
                .iter()
                .enumerate()
                .skip(k)
                .rev()
                .fold(0.0, |acc, (n, a)| acc * t + a * falling(n, k)),
            ScalarFn::Samples(s) => s.derivative(t, k),
        }
    }

    /// Taylor jet of order `order` at `t0`.
    pub fn taylor(&self, t0: f64, order: usize) -> Jet1 {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut fact = 1.0;
        for k in 0..=order {
            if k > 0 {
                fact *= k as f64;
            }
            coeffs.push(self.derivative(t0, k) / fact);
        }
        Jet1::new(coeffs)
    }

    /// Whether derivatives of every order are exact (not interpolated).
    pub fn is_exact(&self) -> bool {
        !matches!(self, ScalarFn::Samples(_))
    }

    /// Sampled domain, if any.
    pub fn domain(&self) -> Option<(f64, f64)> {
        match self {
            ScalarFn::Samples(s) => Some((s.ts[0], *s.ts.last().unwrap())),
            _ => None,
        }
    }
}

fn falling(n: usize, k: usize) -> f64 {
    (0..k).map(|j| (n - j) as f64).product()
}

/// Natural cubic spline through `(ts[i], values[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spline {
    ts: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl Spline {
    pub fn new(ts: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let n = ts.len();
        if n != values.len() {
            return Err(Error::InvalidData(format!(
                "{n} sample positions for {} values",
                values.len()
            )));
        }
        if n < 2 {
            return Err(Error::InvalidData("at least two samples are needed".into()));
        }
        if ts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidData("sample positions must increase".into()));
        }
        if ts.iter().chain(&values).any(|x| !x.is_finite()) {
            return Err(Error::InvalidData("samples must be finite".into()));
        }
        let second = natural_second_derivatives(&ts, &values);
        Ok(Spline { ts, values, second })
    }

    fn derivative(&self, t: f64, k: usize) -> f64 {
        let n = self.ts.len();
        let i = self.ts.partition_point(|x| *x <= t).clamp(1, n - 1) - 1;
        let (x0, x1) = (self.ts[i], self.ts[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let h = x1 - x0;
        let a = (x1 - t) / h;
        let b = (t - x0) / h;
        match k {
            0 => a * y0 + b * y1 + ((a.powi(3) - a) * m0 + (b.powi(3) - b) * m1) * h * h / 6.0,
            1 => {
                (y1 - y0) / h - (3.0 * a * a - 1.0) * h * m0 / 6.0
                    + (3.0 * b * b - 1.0) * h * m1 / 6.0
            }
            2 => a * m0 + b * m1,
            3 => (m1 - m0) / h,
            _ => 0.0,
        }
    }
}

fn natural_second_derivatives(ts: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = ts.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior equations
    let mut diag = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut upper = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = ts[i] - ts[i - 1];
        let h1 = ts[i + 1] - ts[i];
        let lower = h0 / 6.0;
        diag[i] = (h0 + h1) / 3.0;
        upper[i] = h1 / 6.0;
        rhs[i] = (ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0;
        if i > 1 {
            let w = lower / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
    }
    for i in (1..n - 1).rev() {
        m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives() {
        let p = ScalarFn::poly(&[1.0, 2.0, 3.0]);
        assert_eq!(p.eval(2.0), 17.0);
        assert_eq!(p.derivative(2.0, 1), 14.0);
        assert_eq!(p.derivative(2.0, 2), 6.0);
        assert_eq!(p.derivative(2.0, 3), 0.0);
        let j = p.taylor(1.0, 3);
        assert_eq!(j.coeffs(), &[6.0, 8.0, 3.0, 0.0]);
    }

    #[test]
    fn spline_reproduces_smooth_data() {
        let ts: Vec<f64> = (0..=200).map(|i| -1.0 + i as f64 * 0.01).collect();
        let vs = ts.iter().map(|t| t.sin()).collect();
        let s = ScalarFn::samples(ts, vs).unwrap();
        for t in [-0.73, 0.0, 0.41] {
            assert!((s.eval(t) - f64::sin(t)).abs() < 1e-7);
            assert!((s.derivative(t, 1) - f64::cos(t)).abs() < 1e-5);
            assert!((s.derivative(t, 2) + f64::sin(t)).abs() < 1e-3);
        }
    }

    #[test]
    fn json_forms() {
        let c: ScalarFn = serde_json::from_str(r#"{"constant": 0.5}"#).unwrap();
        assert_eq!(c.eval(3.0), 0.5);
        let p: ScalarFn = serde_json::from_str(r#"{"poly": [1.5, 0, 1]}"#).unwrap();
        assert_eq!(p.eval(2.0), 5.5);
        let s: ScalarFn =
            serde_json::from_str(r#"{"samples": {"t": [0, 1, 2], "values": [0, 1, 4]}}"#).unwrap();
        assert_eq!(s.eval(1.0), 1.0);
        let bad: std::result::Result<ScalarFn, _> =
            serde_json::from_str(r#"{"samples": {"t": [0, 0], "values": [0, 1]}}"#);
        assert!(bad.is_err());
    }
}
