//! Flat ruled surfaces `F(t, v) = γ(t) + v δ(t)` built from the data `(x, y, κ_δ)` and an
//! initial frame, their singular set, the cuspidal-edge criterion along it, and the points
//! where singularities are born when the ruling parameter is extended.

use std::fmt::Write as _;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{anchored_grid, integrate_frame};
use crate::jets::{Jet1, Jet2, DEFAULT_ORDER, TAU_ZERO};
use crate::oracle::SampledCurve;
use crate::scalar::ScalarFn;
use crate::surface::{reduce_to_normal_form, BoundaryCoeffs, PlaneCurve, SurfaceGerm};

/// Threshold on `max |det(γ′, δ, δ′)|` for flatness of sampled data.
pub const TAU_FLAT: f64 = 1e-7;

/// Default number of grid intervals for integration and scans.
pub const DEFAULT_STEPS: usize = 2000;

const STENCIL: usize = 7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuledInput {
    pub x: ScalarFn,
    pub y: ScalarFn,
    pub kappa_delta: ScalarFn,
    /// Normal component of `γ′`; absent for flat surfaces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<ScalarFn>,
    pub delta0: Vector3<f64>,
    pub delta1: Vector3<f64>,
    pub eps: f64,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "I")]
    pub interval: (f64, f64),
}

impl RuledInput {
    /// Constant-coefficient input on `[lo, hi]` with the standard initial frame.
    pub fn new(x: ScalarFn, y: ScalarFn, kappa_delta: ScalarFn, eps: f64, m: f64, interval: (f64, f64)) -> Self {
        RuledInput {
            x,
            y,
            kappa_delta,
            z: None,
            delta0: Vector3::x(),
            delta1: Vector3::y(),
            eps,
            m,
            interval,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.interval;
        if !(lo < hi) || !(lo..=hi).contains(&0.0) {
            return Err(Error::InvalidData(format!("interval [{lo}, {hi}] must contain 0")));
        }
        if (self.delta0.norm() - 1.0).abs() > 1e-9 || (self.delta1.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidData("delta0 and delta1 must be unit vectors".into()));
        }
        if self.delta0.dot(&self.delta1).abs() > 1e-9 {
            return Err(Error::InvalidData("delta0 and delta1 must be orthogonal".into()));
        }
        if !(self.eps > 0.0) || !(self.m > self.eps) {
            return Err(Error::InvalidData("need 0 < eps < M".into()));
        }
        for f in [&self.x, &self.y, &self.kappa_delta].into_iter().chain(self.z.as_ref()) {
            if let Some((a, b)) = f.domain() {
                if a > lo || b < hi {
                    return Err(Error::InvalidData(format!(
                        "samples cover [{a}, {b}], not the interval [{lo}, {hi}]"
                    )));
                }
            }
        }
        Ok(())
    }

    fn z_at(&self, t: f64, k: usize) -> f64 {
        self.z.as_ref().map_or(0.0, |z| z.derivative(t, k))
    }

    /// Whether `|y| > ε` at every grid point, i.e. the strip `|v| ≤ ε` is regular.
    pub fn strip_is_regular(&self, steps: usize) -> bool {
        grid(self.interval, steps).iter().all(|t| self.y.eval(*t).abs() > self.eps)
    }
}

fn grid((lo, hi): (f64, f64), steps: usize) -> Vec<f64> {
    (0..=steps)
        .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
        .collect()
}

fn generator(kappa: f64) -> Matrix3<f64> {
    Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, -kappa, 0.0, kappa, 0.0)
}

/// The spherical curve `δ` with its frame `(δ, δ′, δ×δ′)` stored as matrix columns.
#[derive(Debug, Clone)]
pub struct DeltaFrame {
    pub ts: Vec<f64>,
    pub frames: Vec<Matrix3<f64>>,
}

impl DeltaFrame {
    pub fn delta(&self, i: usize) -> Vector3<f64> {
        self.frames[i].column(0).into_owned()
    }

    pub fn delta_prime(&self, i: usize) -> Vector3<f64> {
        self.frames[i].column(1).into_owned()
    }
}

/// Integrates `δ″ = −δ + κ_δ δ×δ′` from `δ(0) = δ₀`, `δ′(0) = δ₁`.
pub fn build_delta(input: &RuledInput, steps: usize) -> Result<DeltaFrame> {
    input.validate()?;
    let a0 = Matrix3::from_columns(&[input.delta0, input.delta1, input.delta0.cross(&input.delta1)]);
    let path = integrate_frame(
        |t| generator(input.kappa_delta.eval(t)),
        |_, _| Vector3::zeros(),
        a0,
        input.interval,
        0.0,
        steps,
    )?;
    Ok(DeltaFrame {
        ts: path.ts,
        frames: path.frames,
    })
}

/// Integrates `γ′ = xδ + yδ′ + zδ×δ′` from `γ(0) = 0` with the corrected trapezoid rule,
/// using `γ″ = (x′ − y)δ + (x + y′ − κ_δ z)δ′ + (κ_δ y + z′)δ×δ′`.
pub fn build_gamma(input: &RuledInput, delta: &DeltaFrame) -> Result<Vec<Vector3<f64>>> {
    let (lo, hi) = input.interval;
    let n = delta.ts.len();
    if n != delta.frames.len() || n < 2 || delta.ts[0] != lo || delta.ts[n - 1] != hi {
        return Err(Error::GridMismatch);
    }
    let anchor = delta
        .ts
        .iter()
        .position(|t| *t == 0.0)
        .ok_or(Error::GridMismatch)?;
    let d1 = |i: usize| {
        let t = delta.ts[i];
        delta.frames[i] * Vector3::new(input.x.eval(t), input.y.eval(t), input.z_at(t, 0))
    };
    let d2 = |i: usize| {
        let t = delta.ts[i];
        let (x, y, z) = (input.x.eval(t), input.y.eval(t), input.z_at(t, 0));
        let k = input.kappa_delta.eval(t);
        let c = Vector3::new(
            input.x.derivative(t, 1) - y,
            x + input.y.derivative(t, 1) - k * z,
            k * y + input.z_at(t, 1),
        );
        delta.frames[i] * c
    };
    let mut gamma = vec![Vector3::zeros(); n];
    let step = |i: usize, j: usize, g: Vector3<f64>| {
        let h = delta.ts[j] - delta.ts[i];
        g + (d1(i) + d1(j)) * (h / 2.0) + (d2(i) - d2(j)) * (h * h / 12.0)
    };
    for j in anchor + 1..n {
        gamma[j] = step(j - 1, j, gamma[j - 1]);
    }
    for j in (0..anchor).rev() {
        gamma[j] = step(j + 1, j, gamma[j + 1]);
    }
    Ok(gamma)
}

/// Sampled ruled surface.
#[derive(Debug, Clone)]
pub struct RuledSurface {
    pub delta: DeltaFrame,
    pub gamma: Vec<Vector3<f64>>,
}

impl RuledSurface {
    pub fn build(input: &RuledInput, steps: usize) -> Result<Self> {
        let delta = build_delta(input, steps)?;
        let gamma = build_gamma(input, &delta)?;
        Ok(RuledSurface { delta, gamma })
    }

    pub fn ts(&self) -> &[f64] {
        &self.delta.ts
    }

    /// `F(t_i, v)`.
    pub fn point(&self, i: usize, v: f64) -> Vector3<f64> {
        self.gamma[i] + self.delta.delta(i) * v
    }

    /// `(F_t, F_v)` at `(t_i, v)`, with `γ′` differentiated from the samples.
    pub fn jacobian(&self, i: usize, v: f64) -> (Vector3<f64>, Vector3<f64>) {
        let gp = self.gamma_curve().derivative_at(i, 1, STENCIL);
        (gp + self.delta.delta_prime(i) * v, self.delta.delta(i))
    }

    fn gamma_curve(&self) -> SampledCurve {
        SampledCurve {
            ts: self.delta.ts.clone(),
            points: self.gamma.clone(),
        }
    }

    pub fn max_frame_defect(&self) -> f64 {
        self.delta
            .frames
            .iter()
            .map(crate::frame::orthonormality_defect)
            .fold(0.0, f64::max)
    }
}

/// `max_t |det(γ′, δ, δ′)| < τ_flat`, with derivatives taken from the samples.
pub fn is_flat(ts: &[f64], gamma: &[Vector3<f64>], delta: &[Vector3<f64>]) -> Result<bool> {
    Ok(flatness_defect(ts, gamma, delta)? < TAU_FLAT)
}

pub fn flatness_defect(ts: &[f64], gamma: &[Vector3<f64>], delta: &[Vector3<f64>]) -> Result<f64> {
    if ts.len() != gamma.len() || ts.len() != delta.len() {
        return Err(Error::GridMismatch);
    }
    let g = SampledCurve::new(ts.to_vec(), gamma.to_vec())?;
    let d = SampledCurve::new(ts.to_vec(), delta.to_vec())?;
    let mut worst: f64 = 0.0;
    for i in 0..ts.len() {
        let gp = g.derivative_at(i, 1, STENCIL);
        let dp = d.derivative_at(i, 1, STENCIL);
        let det = Matrix3::from_columns(&[gp, delta[i], dp]).determinant();
        worst = worst.max(det.abs());
    }
    Ok(worst)
}

/// Connected pieces of `{(t, −y(t))}` inside the extension strip `|v| ≤ M`, sampled on a
/// uniform grid.
pub fn singular_set(input: &RuledInput, steps: usize) -> Vec<Vec<(f64, f64)>> {
    let mut pieces: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut current = Vec::new();
    for t in grid(input.interval, steps) {
        let v = -input.y.eval(t);
        if v.abs() <= input.m {
            current.push((t, v));
        } else if !current.is_empty() {
            pieces.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        pieces.push(current);
    }
    pieces
}

/// Values entering the cuspidal-edge criterion at `t₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub y_prime: f64,
    pub y_second: f64,
    pub y_prime_minus_x: f64,
    pub kappa_delta: f64,
}

/// Boundary coefficients of the line `v = v₀` after reduction of the local jet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JetCheck {
    pub boundary: BoundaryCoeffs,
}

impl JetCheck {
    /// `(c₁, c₂)` when the line is transverse to the kernel.
    pub fn c1_c2(&self) -> Option<(f64, f64)> {
        match self.boundary {
            BoundaryCoeffs::Case1 { c1, c2, .. } => Some((c1, c2)),
            BoundaryCoeffs::Case2 { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirthReport {
    pub t0: f64,
    pub v0: f64,
    pub is_cuspidal_edge: bool,
    pub is_generic_birth: bool,
    pub diagnostics: Diagnostics,
    /// `|v₀| ≤ ε`: the singular point already meets the original strip.
    pub inside_strip: bool,
    /// `|v₀| > M`: the point lies beyond the extension.
    pub beyond_extension: bool,
    /// `t₀` is an endpoint of the interval.
    pub endpoint: bool,
    /// The minimum is attained on a flat stretch of `|y|` rather than at an isolated point.
    pub plateau: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jet_check: Option<JetCheck>,
}

/// Cuspidal-edge criterion `y′ − x ≠ 0`, `κ_δ ≠ 0` at `(t₀, −y(t₀))`.
pub fn classify_ruled_point(input: &RuledInput, t0: f64) -> BirthReport {
    let y = input.y.eval(t0);
    let y_prime = input.y.derivative(t0, 1);
    let y_second = input.y.derivative(t0, 2);
    let diagnostics = Diagnostics {
        y_prime,
        y_second,
        y_prime_minus_x: y_prime - input.x.eval(t0),
        kappa_delta: input.kappa_delta.eval(t0),
    };
    let is_cuspidal_edge =
        diagnostics.y_prime_minus_x.abs() > TAU_ZERO && diagnostics.kappa_delta.abs() > TAU_ZERO;
    let (lo, hi) = input.interval;
    BirthReport {
        t0,
        v0: -y,
        is_cuspidal_edge,
        is_generic_birth: is_cuspidal_edge && y_second.abs() > TAU_ZERO,
        diagnostics,
        inside_strip: y.abs() <= input.eps,
        beyond_extension: y.abs() > input.m,
        endpoint: t0 == lo || t0 == hi,
        plateau: false,
        jet_check: None,
    }
}

/// Interior local minima of `|y|` with `|y(t₀)| ≤ M`, located by a sign change of
/// `sgn(y) y′` on a grid and refined by bisection. Each report carries the jet-level
/// check when the point is a cuspidal edge.
pub fn find_births(input: &RuledInput) -> Result<Vec<BirthReport>> {
    Ok(scan_minima(input, DEFAULT_STEPS)?
        .into_iter()
        .filter(|r| !r.endpoint && !r.beyond_extension)
        .collect())
}

/// Every local minimum of `|y|` on the grid, endpoints included.
pub fn scan_minima(input: &RuledInput, steps: usize) -> Result<Vec<BirthReport>> {
    input.validate()?;
    let ts = grid(input.interval, steps);
    let slope = |t: f64| input.y.eval(t).signum() * input.y.derivative(t, 1);
    let gs: Vec<f64> = ts.iter().map(|t| slope(*t)).collect();
    let flat = |g: f64| g.abs() <= TAU_ZERO;
    let mut out = Vec::new();
    let n = ts.len();

    if gs[0] > 0.0 && !flat(gs[0]) {
        out.push(classify_ruled_point(input, ts[0]));
    }
    // walk over maximal runs of flat samples between signed samples
    let mut last_signed: Option<usize> = None;
    let mut i = 0;
    while i < n {
        if flat(gs[i]) {
            let start = i;
            while i < n && flat(gs[i]) {
                i += 1;
            }
            let end = i - 1;
            let before = last_signed.map_or(true, |k| gs[k] < 0.0);
            let after = i >= n || gs[i] > 0.0;
            if before && after && !(start == 0 && i >= n && end == start) {
                let mut r = classify_ruled_point(input, 0.5 * (ts[start] + ts[end]));
                if end > start {
                    r.plateau = true;
                    r.is_generic_birth = false;
                }
                r.endpoint = start == 0 || i >= n;
                out.push(r);
            }
            continue;
        }
        if let Some(k) = last_signed {
            if k + 1 == i && gs[k] < 0.0 && gs[i] > 0.0 {
                let t0 = bisect(&slope, ts[k], ts[i]);
                out.push(classify_ruled_point(input, t0));
            }
        }
        last_signed = Some(i);
        i += 1;
    }
    if gs[n - 1] < 0.0 && !flat(gs[n - 1]) {
        out.push(classify_ruled_point(input, ts[n - 1]));
    }
    for r in out.iter_mut() {
        if r.is_cuspidal_edge && !r.beyond_extension {
            r.jet_check = Some(birth_jet_check(input, r.t0)?);
        }
    }
    Ok(out)
}

fn bisect(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if g(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Jet at `(t₀, v₀)` of `F − F(t₀, v₀)` in local coordinates `(t − t₀, v − v₀)`, written in
/// the frame at `t₀` (the surface up to a rotation).
pub fn local_jet(input: &RuledInput, t0: f64, v0: f64, order: usize) -> Result<SurfaceGerm> {
    let n = order;
    let x = input.x.taylor(t0, n);
    let y = input.y.taylor(t0, n);
    let z = input
        .z
        .as_ref()
        .map_or_else(|| Jet1::zero(n), |z| z.taylor(t0, n));
    let kappa = input.kappa_delta.taylor(t0, n);
    // frame A(t₀ + s) = Σ A_k s^k with A_0 = I and (k+1) A_{k+1} = Σ_j A_j K_{k−j}
    let mut a = vec![Matrix3::identity()];
    for k in 0..n {
        let mut acc = Matrix3::zeros();
        for (j, aj) in a.iter().enumerate() {
            let kk = if k - j == 0 {
                generator(kappa.coeff(0))
            } else {
                generator(kappa.coeff(k - j)) - generator(0.0)
            };
            acc += aj * kk;
        }
        a.push(acc / (k + 1) as f64);
    }
    let coeff = |jet: &Jet1, k: usize| if k <= n { jet.coeff(k) } else { 0.0 };
    let mut comps = [Jet2::zero(n), Jet2::zero(n), Jet2::zero(n)];
    for (i, comp) in comps.iter_mut().enumerate() {
        // γ′ = A (x, y, z)ᵀ; γ(t₀ + s) − γ(t₀) = Σ γ′_k s^{k+1}/(k+1)
        for k in 0..n {
            let mut gk = 0.0;
            for j in 0..=k {
                let w = Vector3::new(coeff(&x, k - j), coeff(&y, k - j), coeff(&z, k - j));
                gk += (a[j] * w)[i];
            }
            comp.set_coeff(k + 1, 0, gk / (k + 1) as f64);
        }
        // v₀ (δ(s) − δ(0)) + w δ(s)
        for k in 1..=n {
            let c = comp.coeff(k, 0) + v0 * a[k][(i, 0)];
            comp.set_coeff(k, 0, c);
        }
        for k in 0..n {
            comp.set_coeff(k, 1, a[k][(i, 0)]);
        }
    }
    SurfaceGerm::new(comps)
}

/// Reduces the local jet at the birth point and reads the boundary line `v = v₀`.
pub fn birth_jet_check(input: &RuledInput, t0: f64) -> Result<JetCheck> {
    let v0 = -input.y.eval(t0);
    let f = local_jet(input, t0, v0, DEFAULT_ORDER)?;
    let line = PlaneCurve::new(Jet1::variable(DEFAULT_ORDER), Jet1::zero(DEFAULT_ORDER));
    let nf = reduce_to_normal_form(&f, &line)?;
    Ok(JetCheck { boundary: nf.boundary })
}

/// Interior births, endpoint minima and the singular set, for reporting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanReport {
    pub births: Vec<BirthReport>,
    pub endpoint_minima: Vec<BirthReport>,
    pub singular_set: Vec<Vec<(f64, f64)>>,
    pub strip_is_regular: bool,
}

pub fn scan(input: &RuledInput, steps: usize) -> Result<ScanReport> {
    let all = scan_minima(input, steps)?;
    let (endpoint_minima, births): (Vec<_>, Vec<_>) = all
        .into_iter()
        .filter(|r| !r.beyond_extension)
        .partition(|r| r.endpoint);
    Ok(ScanReport {
        births,
        endpoint_minima,
        singular_set: singular_set(input, steps),
        strip_is_regular: input.strip_is_regular(steps),
    })
}

/// Triangulated grid over `I × [−M, M]`.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub vertices: Vec<Vector3<f64>>,
    pub params: Vec<(f64, f64)>,
    /// Vertex lies in the strip `|v| ≤ ε`.
    pub in_strip: Vec<bool>,
    pub faces: Vec<[usize; 3]>,
    pub face_in_strip: Vec<bool>,
    /// Images of the pieces of the singular set.
    pub singular_polylines: Vec<Vec<Vector3<f64>>>,
}

/// Mesh over the surface samples (every `t_stride`-th) and `nv` rulings values.
pub fn mesh_export(input: &RuledInput, surface: &RuledSurface, t_stride: usize, nv: usize) -> Result<Mesh> {
    if nv < 2 || t_stride == 0 {
        return Err(Error::InvalidData("mesh needs at least two v samples".into()));
    }
    let n = surface.ts().len();
    let mut rows: Vec<usize> = (0..n).step_by(t_stride).collect();
    if *rows.last().unwrap() != n - 1 {
        rows.push(n - 1);
    }
    let vs: Vec<f64> = (0..nv)
        .map(|j| -input.m + 2.0 * input.m * j as f64 / (nv - 1) as f64)
        .collect();
    let mut vertices = Vec::with_capacity(rows.len() * nv);
    let mut params = Vec::with_capacity(rows.len() * nv);
    let mut in_strip = Vec::with_capacity(rows.len() * nv);
    for &i in &rows {
        for &v in &vs {
            vertices.push(surface.point(i, v));
            params.push((surface.ts()[i], v));
            in_strip.push(v.abs() <= input.eps);
        }
    }
    let mut faces = Vec::new();
    let mut face_in_strip = Vec::new();
    for r in 0..rows.len() - 1 {
        for j in 0..nv - 1 {
            let a = r * nv + j;
            let b = a + 1;
            let c = a + nv;
            let d = c + 1;
            for tri in [[a, c, b], [b, c, d]] {
                face_in_strip.push(tri.iter().all(|k| in_strip[*k]));
                faces.push(tri);
            }
        }
    }
    let mut singular_polylines = Vec::new();
    let mut current = Vec::new();
    for i in 0..n {
        let v = -input.y.eval(surface.ts()[i]);
        if v.abs() <= input.m {
            current.push(surface.point(i, v));
        } else if !current.is_empty() {
            singular_polylines.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        singular_polylines.push(current);
    }
    Ok(Mesh {
        vertices,
        params,
        in_strip,
        faces,
        face_in_strip,
        singular_polylines,
    })
}

impl Mesh {
    /// Wavefront OBJ: grid vertices, faces in groups `strip` and `exterior`, and one line
    /// object per singular-set piece.
    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# ruled surface mesh, {} vertices", self.vertices.len());
        for (p, (t, v)) in self.vertices.iter().zip(&self.params) {
            let _ = writeln!(s, "v {:.16e} {:.16e} {:.16e}", p.x, p.y, p.z);
            let _ = writeln!(s, "vt {:.16e} {:.16e}", t, v);
        }
        let _ = writeln!(s, "o surface");
        for (group, flag) in [("strip", true), ("exterior", false)] {
            let _ = writeln!(s, "g {group}");
            for (f, _) in self.faces.iter().zip(&self.face_in_strip).filter(|(_, s)| **s == flag) {
                let _ = writeln!(
                    s,
                    "f {0}/{0} {1}/{1} {2}/{2}",
                    f[0] + 1,
                    f[1] + 1,
                    f[2] + 1
                );
            }
        }
        let mut base = self.vertices.len();
        for (k, line) in self.singular_polylines.iter().enumerate() {
            let _ = writeln!(s, "o singular_set_{k}");
            for p in line {
                let _ = writeln!(s, "v {:.16e} {:.16e} {:.16e}", p.x, p.y, p.z);
            }
            if line.len() > 1 {
                let idx: Vec<String> = (base + 1..=base + line.len()).map(|i| i.to_string()).collect();
                let _ = writeln!(s, "l {}", idx.join(" "));
            }
            base += line.len();
        }
        s
    }
}

/// Uniform grid helper shared with callers that sample the input functions.
pub fn uniform_grid(interval: (f64, f64), steps: usize) -> Vec<f64> {
    grid(interval, steps)
}

/// Grid on `I` containing 0, as used by the integrators.
pub fn integration_grid(input: &RuledInput, steps: usize) -> Result<Vec<f64>> {
    Ok(anchored_grid(input.interval.0, input.interval.1, 0.0, steps)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example(y: ScalarFn) -> RuledInput {
        RuledInput::new(ScalarFn::Constant(0.5), y, ScalarFn::Constant(1.0), 1.0, 2.0, (-1.0, 1.0))
    }

    #[test]
    fn great_and_small_circles() {
        let mut input = example(ScalarFn::Constant(2.0));
        input.kappa_delta = ScalarFn::Constant(0.0);
        let d = build_delta(&input, 1000).unwrap();
        for (i, t) in d.ts.iter().enumerate() {
            let want = Vector3::new(t.cos(), t.sin(), 0.0);
            assert!((d.delta(i) - want).norm() < 1e-9);
        }
        input.kappa_delta = ScalarFn::Constant(0.7);
        let d = build_delta(&input, 1000).unwrap();
        for i in 0..d.ts.len() {
            assert!((d.delta(i).norm() - 1.0).abs() < 1e-7);
        }
        input.kappa_delta = ScalarFn::poly(&[0.0, 1.0]);
        let d = build_delta(&input, 1000).unwrap();
        for i in 0..d.ts.len() {
            assert!((d.delta_prime(i).norm() - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn frame_is_preserved_at_fine_steps() {
        let mut input = example(ScalarFn::poly(&[1.5, 0.0, 1.0]));
        input.kappa_delta = ScalarFn::poly(&[0.3, -1.0, 2.0]);
        let s = RuledSurface::build(&input, 10_000).unwrap();
        assert!(s.max_frame_defect() < 1e-6);
    }

    #[test]
    fn gamma_on_a_great_circle() {
        let mut input = example(ScalarFn::Constant(2.0));
        input.x = ScalarFn::Constant(1.0);
        input.kappa_delta = ScalarFn::Constant(0.0);
        let s = RuledSurface::build(&input, 1000).unwrap();
        for (i, t) in s.ts().iter().enumerate() {
            // ∫ (cos, sin) + 2(−sin, cos)
            let want = Vector3::new(t.sin() + 2.0 * (t.cos() - 1.0), 1.0 - t.cos() + 2.0 * t.sin(), 0.0);
            assert!((s.gamma[i] - want).norm() < 1e-10, "{t}");
        }
        let deltas: Vec<_> = (0..s.ts().len()).map(|i| s.delta.delta(i)).collect();
        assert!(is_flat(s.ts(), &s.gamma, &deltas).unwrap());
    }

    #[test]
    fn flatness_examples() {
        let ts: Vec<f64> = (0..=400).map(|i| -1.0 + i as f64 * 0.005).collect();
        let helix: Vec<_> = ts.iter().map(|t| Vector3::new(t.cos(), t.sin(), *t)).collect();
        let tangent: Vec<_> = ts
            .iter()
            .map(|t| Vector3::new(-t.sin(), t.cos(), 1.0) / 2f64.sqrt())
            .collect();
        assert!(is_flat(&ts, &helix, &tangent).unwrap());
        let axis: Vec<_> = ts.iter().map(|t| Vector3::new(0.0, 0.0, *t)).collect();
        let spokes: Vec<_> = ts.iter().map(|t| Vector3::new(t.cos(), t.sin(), 0.0)).collect();
        assert!(!is_flat(&ts, &axis, &spokes).unwrap());
        assert!((flatness_defect(&ts, &axis, &spokes).unwrap() - 1.0).abs() < 1e-6);
        assert_eq!(is_flat(&ts[1..], &axis, &spokes), Err(Error::GridMismatch));
    }

    #[test]
    fn singular_set_examples() {
        let input = example(ScalarFn::poly(&[1.0, 0.0, 1.0]));
        let pieces = singular_set(&input, 200);
        assert_eq!(pieces.len(), 1);
        assert!(pieces[0].iter().all(|(t, v)| (v + 1.0 + t * t).abs() < 1e-15));
        assert_eq!(pieces[0].len(), 201);
        let far = example(ScalarFn::Constant(3.0));
        assert!(singular_set(&far, 200).is_empty());
        let level = example(ScalarFn::Constant(-1.5));
        assert!(singular_set(&level, 10)[0].iter().all(|(_, v)| *v == 1.5));
    }

    #[test]
    fn singular_points_are_degenerate() {
        let mut input = example(ScalarFn::poly(&[1.2, 0.3, 0.5]));
        input.kappa_delta = ScalarFn::poly(&[0.4, 0.8]);
        let s = RuledSurface::build(&input, 2000).unwrap();
        for i in (100..1900).step_by(150) {
            let t = s.ts()[i];
            let (ft, fv) = s.jacobian(i, -input.y.eval(t));
            assert!(ft.cross(&fv).norm() < 1e-6);
            let (ft, fv) = s.jacobian(i, -input.y.eval(t) + 0.3);
            assert!(ft.cross(&fv).norm() > 0.1);
        }
    }

    #[test]
    fn cuspidal_edge_criterion() {
        let input = example(ScalarFn::poly(&[1.0, 0.0, 1.0]));
        let r = classify_ruled_point(&input, 0.0);
        assert!(r.is_cuspidal_edge);
        assert_eq!(r.diagnostics.y_prime_minus_x, -0.5);
        let mut tangent = input.clone();
        tangent.x = ScalarFn::Constant(0.0);
        assert!(!classify_ruled_point(&tangent, 0.0).is_cuspidal_edge);
        let mut geodesic = input.clone();
        geodesic.kappa_delta = ScalarFn::poly(&[0.0, 1.0]);
        assert!(!classify_ruled_point(&geodesic, 0.0).is_cuspidal_edge);
    }

    #[test]
    fn worked_birth() {
        let input = example(ScalarFn::poly(&[1.5, 0.0, 1.0]));
        let births = find_births(&input).unwrap();
        assert_eq!(births.len(), 1);
        let b = &births[0];
        assert!(b.t0.abs() < 1e-12 && (b.v0 + 1.5).abs() < 1e-12);
        assert!(b.is_generic_birth && !b.inside_strip);
        let (c1, c2) = b.jet_check.unwrap().c1_c2().unwrap();
        assert!(c1.abs() < 1e-6 && c2.abs() > 1e-3, "{c1} {c2}");
    }

    #[test]
    fn degenerate_and_missing_births() {
        let quartic = example(ScalarFn::poly(&[1.5, 0.0, 0.0, 0.0, 1.0]));
        let births = find_births(&quartic).unwrap();
        assert_eq!(births.len(), 1);
        assert!(births[0].is_cuspidal_edge && !births[0].is_generic_birth);

        let monotone = example(ScalarFn::poly(&[1.5, 0.2]));
        assert!(find_births(&monotone).unwrap().is_empty());
        let report = scan(&monotone, 400).unwrap();
        assert_eq!(report.endpoint_minima.len(), 1);
        assert_eq!(report.endpoint_minima[0].t0, -1.0);

        let level = example(ScalarFn::Constant(1.5));
        let births = scan(&level, 400).unwrap();
        assert_eq!(births.births.len() + births.endpoint_minima.len(), 1);
        let far = example(ScalarFn::poly(&[2.5, 0.0, 1.0]));
        assert!(find_births(&far).unwrap().is_empty());
    }

    #[test]
    fn sampled_input_births() {
        let ts: Vec<f64> = (0..=400).map(|i| -1.0 + i as f64 * 0.005).collect();
        let ys = ts.iter().map(|t| 1.5 + (t - 0.2) * (t - 0.2)).collect();
        let input = example(ScalarFn::samples(ts, ys).unwrap());
        let births = find_births(&input).unwrap();
        assert_eq!(births.len(), 1);
        assert!((births[0].t0 - 0.2).abs() < 1e-4);
        assert!(births[0].is_generic_birth);
        let (c1, c2) = births[0].jet_check.unwrap().c1_c2().unwrap();
        assert!(c1.abs() < 1e-6 && c2.abs() > 1e-3);
    }

    #[test]
    fn mesh_layout() {
        let input = example(ScalarFn::poly(&[1.5, 0.0, 1.0]));
        let s = RuledSurface::build(&input, 200).unwrap();
        let mesh = mesh_export(&input, &s, 10, 9).unwrap();
        assert_eq!(mesh.vertices.len(), 21 * 9);
        assert_eq!(mesh.faces.len(), 20 * 8 * 2);
        for (flag, (_, v)) in mesh.in_strip.iter().zip(&mesh.params) {
            assert_eq!(*flag, v.abs() <= 1.0);
        }
        // polyline points lie on rulings of the mesh
        let line = &mesh.singular_polylines[0];
        // y = 1.5 + t² ≤ M = 2 only for |t| ≤ 1/√2
        let first = s.ts().iter().position(|t| 1.5 + t * t <= 2.0).unwrap();
        let count = s.ts().iter().filter(|t| 1.5 + *t * *t <= 2.0).count();
        assert_eq!(mesh.singular_polylines.len(), 1);
        assert_eq!(line.len(), count);
        let i = 100;
        let p = line[i - first];
        let (a, b) = (s.point(i, -2.0), s.point(i, 2.0));
        let dist = (p - a).cross(&(b - a)).norm() / (b - a).norm();
        assert!(dist < 1e-12);
        let obj = mesh.to_obj();
        assert!(obj.contains("g strip") && obj.contains("g exterior") && obj.contains("o singular_set_0"));
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), mesh.faces.len());
    }

    #[test]
    fn json_schema() {
        let text = r#"{"x": {"constant": 0.5}, "y": {"poly": [1.5, 0, 1]},
            "kappa_delta": {"constant": 1}, "delta0": [1, 0, 0], "delta1": [0, 1, 0],
            "eps": 1, "M": 2, "I": [-1, 1]}"#;
        let input: RuledInput = serde_json::from_str(text).unwrap();
        assert!(input.validate().is_ok());
        assert_eq!(input, example(ScalarFn::poly(&[1.5, 0.0, 1.0])));
    }
}
