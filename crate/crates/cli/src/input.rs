//! Surface and curve inputs.
//!
//! A surface input is either a germ `{"f": [Jet2, Jet2, Jet2], "b": [Jet1, Jet1], "order": N}`
//! (`b` optional) or a normal form as printed by `reduce`. Jets are polynomials and are
//! zero-extended to the working order: `--order` when given, else the larger of `N` and
//! the default order.

use serde::Deserialize;
use serde_json::Value;

use cuspidal::curves::CurveGerm;
use cuspidal::jets::{Jet1, Jet2, DEFAULT_ORDER};
use cuspidal::surface::{NormalFormData, PlaneCurve, SurfaceGerm};

use crate::wire::{parse, schema, Outcome};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GermInput {
    f: [Jet2; 3],
    #[serde(default)]
    b: Option<[Jet1; 2]>,
    #[serde(default)]
    order: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Surface {
    pub germ: SurfaceGerm,
    pub boundary: Option<PlaneCurve>,
    /// Present when the input was a normal form.
    pub normal_form: Option<NormalFormData>,
}

impl Surface {
    pub fn boundary(&self, origin: &str) -> Outcome<&PlaneCurve> {
        self.boundary
            .as_ref()
            .ok_or_else(|| schema(origin, "b", "a boundary curve is required"))
    }
}

fn extend2(j: &Jet2, order: usize) -> Jet2 {
    let mut out = Jet2::zero(order);
    for (i, k, c) in j.terms().filter(|(i, k, _)| i + k <= order) {
        out.set_coeff(i, k, c);
    }
    out
}

pub fn is_germ(value: &Value) -> bool {
    value.get("f").is_some()
}

pub fn surface(value: Value, origin: &str, order: Option<usize>) -> Outcome<Surface> {
    if is_germ(&value) {
        let input: GermInput = parse(value, origin)?;
        let n = order.unwrap_or_else(|| input.order.unwrap_or(0).max(DEFAULT_ORDER));
        let germ = SurfaceGerm::new(input.f.each_ref().map(|c| extend2(c, n)))
            .map_err(|e| schema(origin, "f", e))?;
        let boundary = input.b.map(|[u, v]| PlaneCurve::new(u, v).with_order(n));
        if let Some(b) = &boundary {
            let p = b.eval(0.0);
            if p.norm() > cuspidal::jets::TAU_ZERO {
                return Err(schema(origin, "b", "boundary must pass through the origin"));
            }
        }
        Ok(Surface {
            germ,
            boundary,
            normal_form: None,
        })
    } else {
        let nf: NormalFormData = parse(value, origin)?;
        nf.validate()?;
        let n = order.unwrap_or(DEFAULT_ORDER);
        Ok(Surface {
            germ: nf.germ(n),
            boundary: Some(nf.boundary_curve(n)),
            normal_form: Some(nf),
        })
    }
}

/// `[Jet1, Jet1, Jet1]` or `{"gamma": [Jet1, Jet1, Jet1]}`.
pub fn curve(value: Value, origin: &str, order: Option<usize>) -> Outcome<CurveGerm> {
    let (value, at) = match value {
        Value::Object(mut m) if m.contains_key("gamma") => (m.remove("gamma").unwrap(), "gamma"),
        v => (v, ""),
    };
    let comps: [Jet1; 3] = parse(value, origin)?;
    let top = comps.iter().map(Jet1::order).max().unwrap_or(0);
    let n = order.unwrap_or_else(|| top.max(DEFAULT_ORDER));
    CurveGerm::new(comps.map(|c| Jet1::from_slice(c.coeffs(), n))).map_err(|e| schema(origin, at, e))
}
