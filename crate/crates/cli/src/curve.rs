//! `curve invariants` and `curve reconstruct`.

use serde::Serialize;

use cuspidal::curves::{
    curve_invariants, limit_kappa, limit_tau, reconstruct_curve, CurveGerm, CurveInvariants,
    CurveSingularityClass, LIMIT_SAMPLES, LIMIT_T_MIN,
};
use cuspidal::scalar::ScalarFn;

use crate::wire::{num, schema, Outcome};

/// Extrapolated limits next to the values they should approach.
#[derive(Debug, Clone, Serialize)]
pub struct Limits {
    pub sqrt_arclength_kappa: f64,
    pub expected_kappa: f64,
    pub sqrt_arclength_tau: f64,
    pub expected_tau: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveReport {
    #[serde(flatten)]
    pub invariants: CurveInvariants,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limits: Option<Limits>,
}

pub fn report(g: &CurveGerm, with_limits: bool) -> Outcome<CurveReport> {
    let invariants = curve_invariants(g)?;
    let limits = match (with_limits, invariants.class, invariants.kappa_sing, invariants.tau_sing) {
        (true, CurveSingularityClass::Type23, Some(k), Some(t)) => Some(Limits {
            sqrt_arclength_kappa: limit_kappa(g, LIMIT_SAMPLES, LIMIT_T_MIN)?,
            expected_kappa: k / (2.0 * 2f64.sqrt()),
            sqrt_arclength_tau: limit_tau(g, LIMIT_SAMPLES, LIMIT_T_MIN)?,
            expected_tau: 2.0 * t / (3.0 * 2f64.sqrt()),
        }),
        _ => None,
    };
    Ok(CurveReport { invariants, limits })
}

/// Inline JSON scalar function, or comma-separated polynomial coefficients of `1, t, t², …`.
pub fn scalar(arg: &str, flag: &str) -> Outcome<ScalarFn> {
    let arg = arg.trim();
    if arg.starts_with('{') {
        return serde_json::from_str(arg).map_err(|e| schema(flag, "", e));
    }
    let coeffs = arg
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| schema(flag, "", format!("{e} in `{arg}`")))?;
    Ok(ScalarFn::poly(&coeffs))
}

pub fn span(arg: &str) -> Outcome<(f64, f64)> {
    let parts: Vec<&str> = arg.split(',').map(str::trim).collect();
    let bad = |msg: String| schema("--span", "", msg);
    match parts.as_slice() {
        [lo, hi] => Ok((
            lo.parse().map_err(|e| bad(format!("{e} in `{lo}`")))?,
            hi.parse().map_err(|e| bad(format!("{e} in `{hi}`")))?,
        )),
        _ => Err(bad(format!("expected `lo,hi`, got `{arg}`"))),
    }
}

pub const RECONSTRUCT_HEADER: [&str; 4] = ["t", "x", "y", "z"];

pub fn reconstruct(alpha: &ScalarFn, beta: &ScalarFn, span: (f64, f64), steps: usize) -> Outcome<Vec<Vec<String>>> {
    let c = reconstruct_curve(alpha, beta, span, steps, None)?;
    Ok(c
        .ts()
        .iter()
        .zip(c.points())
        .map(|(t, p)| vec![num(*t), num(p.x), num(p.y), num(p.z)])
        .collect())
}
