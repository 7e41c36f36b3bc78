//! `invariants` and `reduce`.

use serde::Serialize;
use serde_json::Value;

use cuspidal::boundary::{
    case1_closed_forms, case1_numeric, case2_closed_forms, case2_numeric, classify_boundary, compare_case1,
    compare_case2, BoundaryClass, BoundaryInvariantsCase1, BoundaryInvariantsCase2, FieldDelta, FormulaVariant,
    SignConvention,
};
use cuspidal::surface::{edge_invariants, reduce_to_normal_form, BoundaryCoeffs, EdgeInvariants, NormalFormData};

use crate::input::{self, Surface};
use crate::wire::{opt, Failure, Outcome};

/// Scale floor for relative deltas, so that invariants near zero are compared absolutely.
pub const REL_FLOOR: f64 = 1e-3;
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Closed,
    Numeric,
    Both,
}

impl Mode {
    fn closed(self) -> bool {
        self != Mode::Numeric
    }

    fn numeric(self) -> bool {
        self != Mode::Closed
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Values {
    Case1(BoundaryInvariantsCase1),
    Case2(BoundaryInvariantsCase2),
}

impl Values {
    fn fields(&self) -> Vec<(&'static str, Option<f64>)> {
        match self {
            Values::Case1(v) => vec![
                ("kappa0", Some(v.kappa0)),
                ("kappa_prime0", v.kappa_prime0),
                ("tau0", v.tau0),
                ("kappa_nb0", Some(v.kappa_nb0)),
                ("kappa_nb_prime0", Some(v.kappa_nb_prime0)),
                ("kappa_gb0", Some(v.kappa_gb0)),
                ("kappa_gb_prime0", Some(v.kappa_gb_prime0)),
                ("alpha", Some(v.alpha)),
            ],
            Values::Case2(v) => vec![
                ("beta", Some(v.beta)),
                ("kappa_sing_b", Some(v.kappa_sing_b)),
                ("tau_sing_b", Some(v.tau_sing_b)),
            ],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub case: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<NormalFormData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<EdgeInvariants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<FormulaVariant>,
    /// Signs applied to the numeric values before they are reported.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_convention: Option<SignConvention>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed: Option<Values>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<Values>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub deltas: Vec<FieldDelta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_rel_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within_tol: Option<bool>,
}

impl Report {
    /// One row per field; the side that was not computed is empty.
    pub fn rows(&self) -> Vec<FieldDelta> {
        if !self.deltas.is_empty() {
            return self.deltas.clone();
        }
        let (values, closed) = match (&self.closed, &self.numeric) {
            (Some(v), _) => (v, true),
            (None, Some(v)) => (v, false),
            (None, None) => return Vec::new(),
        };
        values
            .fields()
            .into_iter()
            .map(|(field, x)| FieldDelta {
                field: field.to_string(),
                closed: if closed { x } else { None },
                numeric: if closed { None } else { x },
                delta: None,
            })
            .collect()
    }
}

fn case_name(b: &BoundaryCoeffs) -> &'static str {
    match b {
        BoundaryCoeffs::Case1 { .. } => "case1",
        BoundaryCoeffs::Case2 { .. } => "case2",
    }
}

fn rel_delta(d: &FieldDelta) -> Option<f64> {
    let (c, n) = d.closed.zip(d.numeric)?;
    Some((n - c).abs() / c.abs().max(REL_FLOOR))
}

pub fn report(s: &Surface, origin: &str, mode: Mode, variant: FormulaVariant, tol: f64) -> Outcome<Report> {
    let b = s.boundary(origin)?;
    let nf = match (&s.normal_form, mode.closed()) {
        (Some(nf), _) => Some(*nf),
        (None, true) => Some(reduce_to_normal_form(&s.germ, b)?),
        (None, false) => None,
    };
    let case = match &nf {
        Some(nf) => case_name(&nf.boundary),
        None => match classify_boundary(&s.germ, b)? {
            BoundaryClass::Case1 { .. } => "case1",
            BoundaryClass::Case2 => "case2",
        },
    };
    let signs = SignConvention::default();
    let mut out = Report {
        case,
        normal_form: nf,
        edge: nf.as_ref().map(edge_invariants),
        variant: mode.closed().then_some(variant),
        sign_convention: None,
        closed: None,
        numeric: None,
        deltas: Vec::new(),
        max_rel_delta: None,
        within_tol: None,
    };
    if case == "case1" {
        let closed = nf.map(|nf| case1_closed_forms(&nf, variant)).transpose()?;
        let numeric = if mode.numeric() {
            Some(case1_numeric(&s.germ, b)?)
        } else {
            None
        };
        if let (Some(c), Some(n)) = (&closed, &numeric) {
            out.deltas = compare_case1(c, n, &signs);
        }
        out.sign_convention = numeric.is_some().then_some(signs);
        out.closed = closed.map(Values::Case1);
        out.numeric = numeric.map(|n| Values::Case1(signs.apply(&n)));
    } else {
        let closed = nf.map(|nf| case2_closed_forms(&nf, variant)).transpose()?;
        let numeric = if mode.numeric() {
            Some(case2_numeric(&s.germ, b)?)
        } else {
            None
        };
        if let (Some(c), Some(n)) = (&closed, &numeric) {
            out.deltas = compare_case2(c, n);
        }
        out.closed = closed.map(Values::Case2);
        out.numeric = numeric.map(Values::Case2);
    }
    if mode == Mode::Both {
        let worst = out.deltas.iter().filter_map(rel_delta).fold(0.0, f64::max);
        let mismatched = out
            .deltas
            .iter()
            .any(|d| d.closed.is_some() != d.numeric.is_some());
        out.max_rel_delta = Some(worst);
        out.within_tol = Some(worst <= tol && !mismatched);
    }
    Ok(out)
}

pub const CSV_HEADER: [&str; 6] = ["index", "case", "field", "closed", "numeric", "delta"];

/// A JSON array of inputs becomes one CSV table; failing items get a row naming the error.
pub fn batch(
    items: Vec<Value>,
    origin: &str,
    order: Option<usize>,
    mode: Mode,
    variant: FormulaVariant,
    tol: f64,
) -> Outcome<Vec<Vec<String>>> {
    let mut rows = Vec::new();
    for (i, item) in items.into_iter().enumerate() {
        let at = format!("{origin}[{i}]");
        let result = input::surface(item, &at, order).and_then(|s| report(&s, &at, mode, variant, tol));
        match result {
            Ok(r) => {
                for d in r.rows() {
                    rows.push(vec![
                        i.to_string(),
                        r.case.to_string(),
                        d.field,
                        opt(d.closed),
                        opt(d.numeric),
                        opt(d.delta),
                    ]);
                }
            }
            Err(Failure::Math(e)) => {
                rows.push(vec![
                    i.to_string(),
                    "error".into(),
                    e.name().into(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
            }
            Err(other) => return Err(other),
        }
    }
    Ok(rows)
}

pub fn reduce(s: &Surface, origin: &str) -> Outcome<NormalFormData> {
    match s.normal_form {
        Some(nf) => Ok(nf),
        None => Ok(reduce_to_normal_form(&s.germ, s.boundary(origin)?)?),
    }
}
