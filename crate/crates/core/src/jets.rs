//! Truncated Taylor polynomials (jets) in one and two variables.
//!
//! Coefficients use the Taylor normalization: `c[k]` multiplies `t^k`, so the k-th
//! derivative at the origin is `k! * c[k]`. Every value carries its truncation order `N`.
//! Ring operations truncate to the smaller operand order. Compositions keep the order that
//! the inputs actually determine: an error beyond the order of an inner jet is damped by
//! the valuation of the outer jet's derivative, and the result records that.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for "vanishing coefficient" decisions.
pub const TAU_ZERO: f64 = 1e-9;

/// Working order used when callers do not specify one.
pub const DEFAULT_ORDER: usize = 6;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial_real(p: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (p - j as f64) / (j + 1) as f64)
}

/// Scale used by relative vanishing tests: coefficients below `tol * max(1, |c|_max)`
/// count as zero.
fn zero_threshold(coeffs: &[f64], tol: f64) -> f64 {
    let scale = coeffs.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
    tol * scale
}

// ---------------------------------------------------------------------------
// Jet1
// ---------------------------------------------------------------------------

/// Univariate jet `Σ_{k ≤ N} c_k t^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet1 {
    coeffs: Vec<f64>,
}

impl Jet1 {
    /// Jet with the given coefficients; the order is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Jet1 { coeffs }
    }

    /// Jet of order `order` whose leading coefficients are taken from `coeffs`
    /// (missing entries are zero, extra entries are dropped).
    pub fn from_slice(coeffs: &[f64], order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        for (dst, src) in c.iter_mut().zip(coeffs) {
            *dst = *src;
        }
        Jet1 { coeffs: c }
    }

    pub fn zero(order: usize) -> Self {
        Jet1 { coeffs: vec![0.0; order + 1] }
    }

    pub fn constant(c: f64, order: usize) -> Self {
        let mut j = Self::zero(order);
        j.coeffs[0] = c;
        j
    }

    /// The identity jet `t`.
    pub fn variable(order: usize) -> Self {
        Self::monomial(1.0, 1, order)
    }

    pub fn monomial(c: f64, k: usize, order: usize) -> Self {
        let mut j = Self::zero(order);
        if k <= order {
            j.coeffs[k] = c;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `t^k`; zero beyond the order.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn set_coeff(&mut self, k: usize, c: f64) {
        if k <= self.order() {
            self.coeffs[k] = c;
        }
    }

    /// `k`-th derivative at the origin.
    pub fn derivative_at_zero(&self, k: usize) -> f64 {
        factorial(k) * self.coeff(k)
    }

    pub fn constant_term(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_slice(&self.coeffs, order.min(self.order()))
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| *c != 0.0)
    }

    /// Coefficients below `tol * max(1, |c|_max)` set to exactly zero.
    pub fn cleaned(&self, tol: f64) -> Self {
        let thr = zero_threshold(&self.coeffs, tol);
        Jet1 {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| if c.abs() <= thr { 0.0 } else { *c })
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn add(&self, other: &Jet1) -> Jet1 {
        let n = self.order().min(other.order());
        Jet1 {
            coeffs: (0..=n).map(|k| self.coeffs[k] + other.coeffs[k]).collect(),
        }
    }

    pub fn sub(&self, other: &Jet1) -> Jet1 {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Jet1 {
        Jet1 {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add_constant(&self, c: f64) -> Jet1 {
        let mut j = self.clone();
        j.coeffs[0] += c;
        j
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Jet1) -> Jet1 {
        let n = self.order().min(other.order());
        let mut out = vec![0.0; n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Jet1 { coeffs: out }
    }

    /// Product with the exact monomial `t^k`; the order grows by `k`.
    pub fn mul_monomial(&self, k: usize) -> Jet1 {
        let mut c = vec![0.0; k];
        c.extend_from_slice(&self.coeffs);
        Jet1 { coeffs: c }
    }

    pub fn derivative(&self) -> Jet1 {
        if self.order() == 0 {
            return Jet1::zero(0);
        }
        Jet1 {
            coeffs: (1..=self.order())
                .map(|k| k as f64 * self.coeffs[k])
                .collect(),
        }
    }

    /// Antiderivative vanishing at the origin; the order grows by one.
    pub fn integral(&self) -> Jet1 {
        let mut c = vec![0.0];
        c.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / (k + 1) as f64),
        );
        Jet1 { coeffs: c }
    }

    /// `num / t^k`, failing when a coefficient below `t^k` exceeds `TAU_ZERO`.
    pub fn div_exact(&self, k: usize) -> Result<Jet1> {
        self.div_exact_tol(k, TAU_ZERO)
    }

    pub fn div_exact_tol(&self, k: usize, tol: f64) -> Result<Jet1> {
        if k > self.order() {
            return Err(Error::InsufficientOrder {
                have: self.order(),
                need: k,
            });
        }
        let thr = zero_threshold(&self.coeffs, tol);
        if let Some((e, c)) = self.coeffs[..k]
            .iter()
            .enumerate()
            .find(|(_, c)| c.abs() > thr)
        {
            return Err(Error::NotDivisible {
                exponent: e,
                coeff: *c,
            });
        }
        Ok(Jet1 {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// `outer ∘ inner` for an inner jet without constant term.
    pub fn compose(&self, inner: &Jet1) -> Result<Jet1> {
        if inner.constant_term().abs() > TAU_ZERO {
            return Err(Error::NonZeroConstant(inner.constant_term()));
        }
        let mut inner = inner.clone();
        inner.coeffs[0] = 0.0;
        let order = composed_order(
            self.order(),
            inner.valuation().unwrap_or(inner.order() + 1),
            &[(inner.order(), self.derivative().valuation())],
            self.order().max(inner.order()),
        );
        let inner = inner.truncate(order).pad(order);
        let mut acc = Jet1::constant(self.coeff(self.order()), order);
        for k in (0..self.order()).rev() {
            acc = acc.mul(&inner).add_constant(self.coeffs[k]);
        }
        Ok(acc)
    }

    /// `self ∘ inner` where `inner` is a bivariate jet without constant term.
    pub fn compose_jet2(&self, inner: &Jet2) -> Result<Jet2> {
        if inner.constant_term().abs() > TAU_ZERO {
            return Err(Error::NonZeroConstant(inner.constant_term()));
        }
        let mut inner = inner.clone();
        inner.coeffs[0] = 0.0;
        let order = composed_order(
            self.order(),
            inner.valuation().unwrap_or(inner.order() + 1),
            &[(inner.order(), self.derivative().valuation())],
            self.order().max(inner.order()),
        );
        let inner = inner.truncate(order).pad(order);
        let mut acc = Jet2::constant(self.coeff(self.order()), order);
        for k in (0..self.order()).rev() {
            acc = acc.mul(&inner).add_constant(self.coeffs[k]);
        }
        Ok(acc)
    }

    /// Compositional inverse of a jet with `c0 = 0`, `c1 ≠ 0`.
    pub fn inverse(&self) -> Result<Jet1> {
        let a1 = self.coeff(1);
        if self.constant_term().abs() > TAU_ZERO {
            return Err(Error::NonZeroConstant(self.constant_term()));
        }
        if a1.abs() <= TAU_ZERO {
            return Err(Error::LinearSolveFailure(
                "series inversion needs a nonzero linear coefficient".into(),
            ));
        }
        let n = self.order();
        let id = Jet1::variable(n);
        let mut inv = id.scale(1.0 / a1);
        // each pass fixes one more degree
        for _ in 1..n {
            let residual = self.compose(&inv)?.sub(&id);
            inv = inv.sub(&residual.scale(1.0 / a1));
        }
        Ok(inv.truncate(n))
    }

    /// Zero-extension to a larger order, used only where the extra coefficients are
    /// known to vanish.
    fn pad(&self, order: usize) -> Jet1 {
        if order <= self.order() {
            return self.clone();
        }
        Jet1::from_slice(&self.coeffs, order)
    }

    /// Reciprocal square root; constant term must be positive.
    pub fn sqrt_inv(&self) -> Result<Jet1> {
        self.powf(-0.5)
    }

    pub fn sqrt(&self) -> Result<Jet1> {
        self.powf(0.5)
    }

    pub fn recip(&self) -> Result<Jet1> {
        let c = self.constant_term();
        if c.abs() <= TAU_ZERO {
            return Err(Error::NonPositiveConstant(c));
        }
        Ok(pow_series(self, -1.0, c))
    }

    /// `self^p` for a jet with positive constant term.
    pub fn powf(&self, p: f64) -> Result<Jet1> {
        let c = self.constant_term();
        if c <= 0.0 {
            return Err(Error::NonPositiveConstant(c));
        }
        Ok(pow_series(self, p, c))
    }
}

/// Order of a composition `outer ∘ inner…`.
///
/// `outer_order`: order of the outer jet; `m`: valuation of the inner substitution;
/// `inner`: for each substituted jet its order and the valuation of the matching partial
/// derivative of the outer jet (`None` when that partial vanishes identically).
fn composed_order(
    outer_order: usize,
    m: usize,
    inner: &[(usize, Option<usize>)],
    cap: usize,
) -> usize {
    let m = m.max(1);
    let mut order = (outer_order + 1) * m - 1;
    for (inner_order, partial_val) in inner {
        if let Some(val) = partial_val {
            order = order.min(inner_order + m * val);
        }
    }
    order.min(cap)
}

// ---------------------------------------------------------------------------
// Jet2
// ---------------------------------------------------------------------------

#[inline]
fn tri_index(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

#[inline]
fn tri_len(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

/// Bivariate jet `Σ_{i+j ≤ N} c_{ij} u^i v^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    order: usize,
    coeffs: Vec<f64>,
}

/// Variable selector for bivariate operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    U,
    V,
}

impl Jet2 {
    pub fn zero(order: usize) -> Self {
        Jet2 {
            order,
            coeffs: vec![0.0; tri_len(order)],
        }
    }

    pub fn constant(c: f64, order: usize) -> Self {
        let mut j = Self::zero(order);
        j.coeffs[0] = c;
        j
    }

    pub fn monomial(c: f64, i: usize, j: usize, order: usize) -> Self {
        let mut jet = Self::zero(order);
        jet.set_coeff(i, j, c);
        jet
    }

    pub fn u(order: usize) -> Self {
        Self::monomial(1.0, 1, 0, order)
    }

    pub fn v(order: usize) -> Self {
        Self::monomial(1.0, 0, 1, order)
    }

    /// Builds a jet from `(i, j, c)` triples; entries above the order are ignored.
    pub fn from_terms(terms: &[(usize, usize, f64)], order: usize) -> Self {
        let mut jet = Self::zero(order);
        for &(i, j, c) in terms {
            if i + j <= order {
                jet.coeffs[tri_index(i, j)] += c;
            }
        }
        jet
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Embeds a univariate jet as a function of `var` alone.
    pub fn from_univariate(j: &Jet1, var: Var) -> Self {
        let mut out = Jet2::zero(j.order());
        for (k, c) in j.coeffs().iter().enumerate() {
            match var {
                Var::U => out.set_coeff(k, 0, *c),
                Var::V => out.set_coeff(0, k, *c),
            }
        }
        out
    }

    /// Restriction to the `var` axis (the other variable set to zero).
    pub fn restrict_axis(&self, var: Var) -> Jet1 {
        Jet1::new(
            (0..=self.order)
                .map(|k| match var {
                    Var::U => self.coeff(k, 0),
                    Var::V => self.coeff(0, k),
                })
                .collect(),
        )
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > self.order {
            0.0
        } else {
            self.coeffs[tri_index(i, j)]
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: f64) {
        if i + j <= self.order {
            self.coeffs[tri_index(i, j)] = c;
        }
    }

    /// Iterator over `(i, j, c)` for every stored coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..=self.order).flat_map(move |d| {
            (0..=d).map(move |j| (d - j, j, self.coeffs[tri_index(d - j, j)]))
        })
    }

    /// Mixed derivative `∂^{i+j} / ∂u^i ∂v^j` at the origin.
    pub fn derivative_at_zero(&self, i: usize, j: usize) -> f64 {
        factorial(i) * factorial(j) * self.coeff(i, j)
    }

    pub fn constant_term(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn eval(&self, u: f64, v: f64) -> f64 {
        self.terms()
            .map(|(i, j, c)| c * u.powi(i as i32) * v.powi(j as i32))
            .sum()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut out = Jet2::zero(order);
        out.coeffs.copy_from_slice(&self.coeffs[..tri_len(order)]);
        out
    }

    fn pad(&self, order: usize) -> Self {
        if order <= self.order {
            return self.clone();
        }
        let mut out = Jet2::zero(order);
        out.coeffs[..self.coeffs.len()].copy_from_slice(&self.coeffs);
        out
    }

    /// Lowest total degree carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .position(|c| *c != 0.0)
            .map(|idx| (0..=self.order).find(|d| tri_len(*d) > idx).unwrap())
    }

    pub fn cleaned(&self, tol: f64) -> Self {
        let thr = zero_threshold(&self.coeffs, tol);
        Jet2 {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| if c.abs() <= thr { 0.0 } else { *c })
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn add(&self, other: &Jet2) -> Jet2 {
        let n = self.order.min(other.order);
        let len = tri_len(n);
        Jet2 {
            order: n,
            coeffs: (0..len).map(|k| self.coeffs[k] + other.coeffs[k]).collect(),
        }
    }

    pub fn sub(&self, other: &Jet2) -> Jet2 {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Jet2 {
        Jet2 {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add_constant(&self, c: f64) -> Jet2 {
        let mut j = self.clone();
        j.coeffs[0] += c;
        j
    }

    pub fn mul(&self, other: &Jet2) -> Jet2 {
        let n = self.order.min(other.order);
        let mut out = Jet2::zero(n);
        for d1 in 0..=n {
            for j1 in 0..=d1 {
                let a = self.coeffs[tri_index(d1 - j1, j1)];
                if a == 0.0 {
                    continue;
                }
                for d2 in 0..=(n - d1) {
                    for j2 in 0..=d2 {
                        let b = other.coeffs[tri_index(d2 - j2, j2)];
                        out.coeffs[tri_index(d1 - j1 + d2 - j2, j1 + j2)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Product with the exact monomial `u^i v^j`; the order grows by `i + j`.
    pub fn mul_monomial(&self, i: usize, j: usize) -> Jet2 {
        let mut out = Jet2::zero(self.order + i + j);
        for (a, b, c) in self.terms() {
            out.coeffs[tri_index(a + i, b + j)] = c;
        }
        out
    }

    pub fn partial(&self, var: Var) -> Jet2 {
        let n = self.order.saturating_sub(1);
        let mut out = Jet2::zero(n);
        if self.order == 0 {
            return out;
        }
        for (i, j, c) in self.terms() {
            match var {
                Var::U if i > 0 => out.coeffs[tri_index(i - 1, j)] += i as f64 * c,
                Var::V if j > 0 => out.coeffs[tri_index(i, j - 1)] += j as f64 * c,
                _ => {}
            }
        }
        out
    }

    /// `num / var^k`; every coefficient whose `var`-exponent is below `k` must vanish.
    pub fn div_exact(&self, var: Var, k: usize) -> Result<Jet2> {
        self.div_exact_tol(var, k, TAU_ZERO)
    }

    pub fn div_exact_tol(&self, var: Var, k: usize, tol: f64) -> Result<Jet2> {
        if k > self.order {
            return Err(Error::InsufficientOrder {
                have: self.order,
                need: k,
            });
        }
        let thr = zero_threshold(&self.coeffs, tol);
        let mut out = Jet2::zero(self.order - k);
        for (i, j, c) in self.terms() {
            let e = if var == Var::U { i } else { j };
            if e < k {
                if c.abs() > thr {
                    return Err(Error::NotDivisible { exponent: e, coeff: c });
                }
                continue;
            }
            match var {
                Var::U => out.set_coeff(i - k, j, c),
                Var::V => out.set_coeff(i, j - k, c),
            }
        }
        Ok(out)
    }

    /// Restriction along the curve `(x(t), y(t))`.
    pub fn compose_curve(&self, x: &Jet1, y: &Jet1) -> Result<Jet1> {
        for c in [x.constant_term(), y.constant_term()] {
            if c.abs() > TAU_ZERO {
                return Err(Error::NonZeroConstant(c));
            }
        }
        let (mut x, mut y) = (x.clone(), y.clone());
        x.set_coeff(0, 0.0);
        y.set_coeff(0, 0.0);
        let m = x
            .valuation()
            .unwrap_or(x.order() + 1)
            .min(y.valuation().unwrap_or(y.order() + 1));
        let order = composed_order(
            self.order,
            m,
            &[
                (x.order(), self.partial(Var::U).valuation()),
                (y.order(), self.partial(Var::V).valuation()),
            ],
            self.order.max(x.order()).max(y.order()),
        );
        let x = x.truncate(order).pad(order);
        let y = y.truncate(order).pad(order);
        let xp = powers(&x, order);
        let yp = powers(&y, order);
        let mut acc = Jet1::zero(order);
        for (i, j, c) in self.terms() {
            if c != 0.0 && i + j <= order {
                acc = acc.add(&xp[i].mul(&yp[j]).scale(c));
            }
        }
        Ok(acc)
    }

    /// `self(p(u, v), q(u, v))` for substitutions without constant terms.
    pub fn compose(&self, p: &Jet2, q: &Jet2) -> Result<Jet2> {
        for c in [p.constant_term(), q.constant_term()] {
            if c.abs() > TAU_ZERO {
                return Err(Error::NonZeroConstant(c));
            }
        }
        let (mut p, mut q) = (p.clone(), q.clone());
        p.coeffs[0] = 0.0;
        q.coeffs[0] = 0.0;
        let m = p
            .valuation()
            .unwrap_or(p.order + 1)
            .min(q.valuation().unwrap_or(q.order + 1));
        let order = composed_order(
            self.order,
            m,
            &[
                (p.order, self.partial(Var::U).valuation()),
                (q.order, self.partial(Var::V).valuation()),
            ],
            self.order.max(p.order).max(q.order),
        );
        let p = p.truncate(order).pad(order);
        let q = q.truncate(order).pad(order);
        let pp = powers2(&p, order);
        let qp = powers2(&q, order);
        let mut acc = Jet2::zero(order);
        for (i, j, c) in self.terms() {
            if c != 0.0 && i + j <= order {
                acc = acc.add(&pp[i].mul(&qp[j]).scale(c));
            }
        }
        Ok(acc)
    }

    pub fn sqrt_inv(&self) -> Result<Jet2> {
        self.powf(-0.5)
    }

    pub fn sqrt(&self) -> Result<Jet2> {
        self.powf(0.5)
    }

    pub fn recip(&self) -> Result<Jet2> {
        let c = self.constant_term();
        if c.abs() <= TAU_ZERO {
            return Err(Error::NonPositiveConstant(c));
        }
        Ok(pow_series(self, -1.0, c))
    }

    pub fn powf(&self, p: f64) -> Result<Jet2> {
        let c = self.constant_term();
        if c <= 0.0 {
            return Err(Error::NonPositiveConstant(c));
        }
        Ok(pow_series(self, p, c))
    }
}

fn powers(x: &Jet1, order: usize) -> Vec<Jet1> {
    let mut out = vec![Jet1::constant(1.0, order)];
    for k in 1..=order {
        let next = out[k - 1].mul(x);
        out.push(next);
    }
    out
}

fn powers2(x: &Jet2, order: usize) -> Vec<Jet2> {
    let mut out = vec![Jet2::constant(1.0, order)];
    for k in 1..=order {
        let next = out[k - 1].mul(x);
        out.push(next);
    }
    out
}

/// Inverse of a jet map `(p, q)` of the plane fixing the origin, solved degree by
/// degree: each pass of `G ← G − L⁻¹(F∘G − id)` fixes one more total degree.
pub fn invert_map(p: &Jet2, q: &Jet2) -> Result<(Jet2, Jet2)> {
    let n = p.order().min(q.order());
    let (a, b, c, d) = (p.coeff(1, 0), p.coeff(0, 1), q.coeff(1, 0), q.coeff(0, 1));
    let det = a * d - b * c;
    let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs()).max(1.0);
    if det.abs() <= TAU_ZERO * scale * scale {
        return Err(Error::LinearSolveFailure(format!(
            "linear part of the map is singular (det = {det:e})"
        )));
    }
    let (ia, ib, ic, id) = (d / det, -b / det, -c / det, a / det);
    let u = Jet2::u(n);
    let v = Jet2::v(n);
    let mut g1 = u.scale(ia).add(&v.scale(ib));
    let mut g2 = u.scale(ic).add(&v.scale(id));
    for _ in 1..n {
        let r1 = p.compose(&g1, &g2)?.truncate(n).sub(&u);
        let r2 = q.compose(&g1, &g2)?.truncate(n).sub(&v);
        g1 = g1.sub(&r1.scale(ia).add(&r2.scale(ib)));
        g2 = g2.sub(&r1.scale(ic).add(&r2.scale(id)));
    }
    Ok((g1.truncate(n), g2.truncate(n)))
}

// ---------------------------------------------------------------------------
// generic power series
// ---------------------------------------------------------------------------

trait SeriesAlgebra: Clone {
    fn order(&self) -> usize;
    fn one(order: usize) -> Self;
    fn shifted(&self, c: f64) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn scaled(&self, s: f64) -> Self;
}

impl SeriesAlgebra for Jet1 {
    fn order(&self) -> usize {
        Jet1::order(self)
    }
    fn one(order: usize) -> Self {
        Jet1::constant(1.0, order)
    }
    fn shifted(&self, c: f64) -> Self {
        self.add_constant(c)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn plus(&self, other: &Self) -> Self {
        Jet1::add(self, other)
    }
    fn scaled(&self, s: f64) -> Self {
        self.scale(s)
    }
}

impl SeriesAlgebra for Jet2 {
    fn order(&self) -> usize {
        Jet2::order(self)
    }
    fn one(order: usize) -> Self {
        Jet2::constant(1.0, order)
    }
    fn shifted(&self, c: f64) -> Self {
        self.add_constant(c)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn plus(&self, other: &Self) -> Self {
        Jet2::add(self, other)
    }
    fn scaled(&self, s: f64) -> Self {
        self.scale(s)
    }
}

/// `a^p` as `a0^p (1 + x)^p` with the binomial series in the nilpotent part `x`.
fn pow_series<J: SeriesAlgebra>(a: &J, p: f64, a0: f64) -> J {
    let n = a.order();
    let x = a.shifted(-a0).scaled(1.0 / a0);
    let mut result = J::one(n);
    let mut term = J::one(n);
    for k in 1..=n {
        term = term.times(&x);
        result = result.plus(&term.scaled(binomial_real(p, k)));
    }
    let factor = if p == -1.0 { 1.0 / a0 } else { a0.powf(p) };
    result.scaled(factor)
}

// ---------------------------------------------------------------------------
// operators
// ---------------------------------------------------------------------------

macro_rules! jet_ops {
    ($t:ty) => {
        impl Add for &$t {
            type Output = $t;
            fn add(self, rhs: &$t) -> $t {
                <$t>::add(self, rhs)
            }
        }
        impl Sub for &$t {
            type Output = $t;
            fn sub(self, rhs: &$t) -> $t {
                <$t>::sub(self, rhs)
            }
        }
        impl Mul for &$t {
            type Output = $t;
            fn mul(self, rhs: &$t) -> $t {
                <$t>::mul(self, rhs)
            }
        }
        impl Mul<f64> for &$t {
            type Output = $t;
            fn mul(self, rhs: f64) -> $t {
                self.scale(rhs)
            }
        }
        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                self.scale(-1.0)
            }
        }
    };
}

jet_ops!(Jet1);
jet_ops!(Jet2);

// ---------------------------------------------------------------------------
// vector-valued helpers
// ---------------------------------------------------------------------------

/// A map-germ into ℝ³ given componentwise.
pub type Jet1x3 = [Jet1; 3];
pub type Jet2x3 = [Jet2; 3];

pub fn dot1(a: &Jet1x3, b: &Jet1x3) -> Jet1 {
    &(&a[0] * &b[0]) + &(&(&a[1] * &b[1]) + &(&a[2] * &b[2]))
}

pub fn cross1(a: &Jet1x3, b: &Jet1x3) -> Jet1x3 {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

pub fn dot2(a: &Jet2x3, b: &Jet2x3) -> Jet2 {
    &(&a[0] * &b[0]) + &(&(&a[1] * &b[1]) + &(&a[2] * &b[2]))
}

pub fn cross2(a: &Jet2x3, b: &Jet2x3) -> Jet2x3 {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

// ---------------------------------------------------------------------------
// JSON representation
// ---------------------------------------------------------------------------

/// Wire format `{"vars": 1|2, "order": N, "coeffs": [[i, c], …] | [[i, j, c], …]}`.
/// Omitted entries are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JetRepr {
    pub vars: usize,
    pub order: usize,
    pub coeffs: Vec<Vec<f64>>,
}

fn as_index(x: f64) -> Result<usize> {
    if x < 0.0 || x.fract() != 0.0 || x > 1e6 {
        return Err(Error::InvalidData(format!("invalid exponent {x}")));
    }
    Ok(x as usize)
}

impl TryFrom<&JetRepr> for Jet1 {
    type Error = Error;

    fn try_from(r: &JetRepr) -> Result<Jet1> {
        if r.vars != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: r.vars,
            });
        }
        let mut jet = Jet1::zero(r.order);
        for entry in &r.coeffs {
            let [i, c] = entry.as_slice() else {
                return Err(Error::InvalidData(format!(
                    "univariate coefficient entry needs [i, c], got {entry:?}"
                )));
            };
            let i = as_index(*i)?;
            if i > r.order {
                return Err(Error::InvalidData(format!(
                    "exponent {i} exceeds order {}",
                    r.order
                )));
            }
            jet.coeffs[i] += c;
        }
        Ok(jet)
    }
}

impl TryFrom<&JetRepr> for Jet2 {
    type Error = Error;

    fn try_from(r: &JetRepr) -> Result<Jet2> {
        if r.vars != 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                found: r.vars,
            });
        }
        let mut jet = Jet2::zero(r.order);
        for entry in &r.coeffs {
            let [i, j, c] = entry.as_slice() else {
                return Err(Error::InvalidData(format!(
                    "bivariate coefficient entry needs [i, j, c], got {entry:?}"
                )));
            };
            let (i, j) = (as_index(*i)?, as_index(*j)?);
            if i + j > r.order {
                return Err(Error::InvalidData(format!(
                    "monomial degree {} exceeds order {}",
                    i + j,
                    r.order
                )));
            }
            jet.coeffs[tri_index(i, j)] += c;
        }
        Ok(jet)
    }
}

impl From<&Jet1> for JetRepr {
    fn from(j: &Jet1) -> JetRepr {
        JetRepr {
            vars: 1,
            order: j.order(),
            coeffs: j
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(i, c)| vec![i as f64, *c])
                .collect(),
        }
    }
}

impl From<&Jet2> for JetRepr {
    fn from(j: &Jet2) -> JetRepr {
        JetRepr {
            vars: 2,
            order: j.order,
            coeffs: j
                .terms()
                .filter(|(_, _, c)| *c != 0.0)
                .map(|(i, k, c)| vec![i as f64, k as f64, c])
                .collect(),
        }
    }
}

impl Serialize for Jet1 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JetRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Jet1 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = JetRepr::deserialize(d)?;
        Jet1::try_from(&r).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Jet2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JetRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Jet2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = JetRepr::deserialize(d)?;
        Jet2::try_from(&r).map_err(serde::de::Error::custom)
    }
}
