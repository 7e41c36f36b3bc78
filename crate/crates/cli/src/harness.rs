//! `harness`: closed forms and invariances checked against the numeric oracle on seeded
//! random draws. Draw `k` uses stream `k` of a ChaCha generator seeded with `--seed`, so
//! the table does not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use cuspidal::boundary::{
    case1_closed_forms, case1_numeric, case2_closed_forms, case2_numeric, FormulaVariant, SignConvention,
};
use cuspidal::curves::{curve_invariants, limit_kappa, limit_tau, LIMIT_SAMPLES, LIMIT_T_MIN};
use cuspidal::parabola::{curvature_parabola, umbilic_curvature, vertex_and_intersection};
use cuspidal::surface::{reduce_to_normal_form, BoundaryCoeffs, NormalFormData};
use cuspidal::synth;
use cuspidal::Error;

use crate::invariants::REL_FLOOR;
use crate::wire::num;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Measure {
    Abs,
    Rel,
}

/// Row name, error measure and default tolerance.
const ROWS: &[(&str, Measure, f64)] = &[
    ("normal_form", Measure::Abs, 1e-6),
    ("kappa0", Measure::Rel, 1e-6),
    ("kappa_prime0", Measure::Rel, 1e-6),
    ("tau0", Measure::Rel, 1e-6),
    ("kappa_nb0", Measure::Rel, 1e-6),
    ("kappa_nb_prime0", Measure::Rel, 1e-6),
    ("kappa_gb0", Measure::Rel, 1e-6),
    ("kappa_gb_prime0", Measure::Rel, 1e-6),
    ("alpha", Measure::Rel, 1e-6),
    ("umbilic_curvature", Measure::Abs, 1e-9),
    ("dist_vp", Measure::Abs, 1e-7),
    ("beta", Measure::Abs, 1e-9),
    ("kappa_sing_b", Measure::Rel, 1e-6),
    ("tau_sing_b", Measure::Rel, 1e-6),
    ("kappa_sing", Measure::Rel, 1e-8),
    ("tau_sing", Measure::Rel, 1e-8),
    ("sigma_sing", Measure::Rel, 1e-8),
    ("limit_kappa", Measure::Abs, 1e-4),
    ("limit_tau", Measure::Abs, 1e-4),
];

/// Smallest `b₂₀` for which the parabola rows are sampled.
const MIN_B20: f64 = 0.2;

#[derive(Debug, Clone, Copy)]
enum Sample {
    /// `(reference, value)`.
    Pair(f64, f64),
    /// Already an error size.
    Error(f64),
    Failed(&'static str),
}

type Draw = Vec<(&'static str, Sample)>;

fn pair(out: &mut Draw, name: &'static str, r: Result<(f64, f64), Error>) {
    out.push((
        name,
        match r {
            Ok((a, b)) => Sample::Pair(a, b),
            Err(e) => Sample::Failed(e.name()),
        },
    ));
}

fn optional(out: &mut Draw, name: &'static str, a: Option<f64>, b: Option<f64>) {
    match (a, b) {
        (Some(a), Some(b)) => out.push((name, Sample::Pair(a, b))),
        (None, None) => {}
        _ => out.push((name, Sample::Failed("Undefined"))),
    }
}

fn coefficient_error(want: &NormalFormData, got: &NormalFormData) -> f64 {
    let surface = [
        (want.a20, got.a20),
        (want.a30, got.a30),
        (want.b20, got.b20),
        (want.b30, got.b30),
        (want.b12, got.b12),
        (want.b03, got.b03),
    ];
    let boundary: Vec<(f64, f64)> = match (want.boundary, got.boundary) {
        (
            BoundaryCoeffs::Case1 { epsilon: e1, c1, c2, c3 },
            BoundaryCoeffs::Case1 { epsilon: e2, c1: g1, c2: g2, c3: g3 },
        ) => vec![(f64::from(e1), f64::from(e2)), (c1, g1), (c2, g2), (c3, g3)],
        (
            BoundaryCoeffs::Case2 { epsilon: e1, d2, d3, d4 },
            BoundaryCoeffs::Case2 { epsilon: e2, d2: g2, d3: g3, d4: g4 },
        ) => vec![(f64::from(e1), f64::from(e2)), (d2, g2), (d3, g3), (d4, g4)],
        _ => return f64::INFINITY,
    };
    surface
        .iter()
        .chain(&boundary)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn reduction(out: &mut Draw, nf: &NormalFormData, d: &synth::Disguised) {
    let s = match reduce_to_normal_form(&d.germ, &d.boundary) {
        Ok(got) => Sample::Error(coefficient_error(nf, &got)),
        Err(e) => Sample::Failed(e.name()),
    };
    out.push(("normal_form", s));
}

fn draw(seed: u64, k: usize, order: usize, variant: FormulaVariant) -> Draw {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    let mut out = Draw::new();

    let nf = synth::normal_form_case1(&mut rng);
    match synth::disguise(&mut rng, &nf.germ(order), &nf.boundary_curve(order)) {
        Ok(d) => {
            reduction(&mut out, &nf, &d);
            let closed = case1_closed_forms(&nf, variant);
            let numeric = case1_numeric(&d.germ, &d.boundary).map(|n| SignConvention::default().apply(&n));
            match (closed, numeric) {
                (Ok(c), Ok(n)) => {
                    out.push(("kappa0", Sample::Pair(c.kappa0, n.kappa0)));
                    optional(&mut out, "kappa_prime0", c.kappa_prime0, n.kappa_prime0);
                    optional(&mut out, "tau0", c.tau0, n.tau0);
                    out.push(("kappa_nb0", Sample::Pair(c.kappa_nb0, n.kappa_nb0)));
                    out.push(("kappa_nb_prime0", Sample::Pair(c.kappa_nb_prime0, n.kappa_nb_prime0)));
                    out.push(("kappa_gb0", Sample::Pair(c.kappa_gb0, n.kappa_gb0)));
                    out.push(("kappa_gb_prime0", Sample::Pair(c.kappa_gb_prime0, n.kappa_gb_prime0)));
                    out.push(("alpha", Sample::Pair(c.alpha, n.alpha)));
                }
                (Err(e), _) | (_, Err(e)) => out.push(("kappa0", Sample::Failed(e.name()))),
            }
            if nf.b20 >= MIN_B20 {
                let umbilic = curvature_parabola(&d.germ).and_then(|p| umbilic_curvature(&p));
                pair(&mut out, "umbilic_curvature", umbilic.map(|u| (nf.b20, u)));
                let BoundaryCoeffs::Case1 { c1, .. } = nf.boundary else { unreachable!() };
                let vi = vertex_and_intersection(&d.germ, &d.boundary);
                pair(&mut out, "dist_vp", vi.map(|v| (c1 * c1, v.dist)));
            }
        }
        Err(e) => out.push(("normal_form", Sample::Failed(e.name()))),
    }

    let nf = synth::normal_form_case2(&mut rng);
    match synth::disguise(&mut rng, &nf.germ(order), &nf.boundary_curve(order)) {
        Ok(d) => {
            reduction(&mut out, &nf, &d);
            match (case2_closed_forms(&nf, variant), case2_numeric(&d.germ, &d.boundary)) {
                (Ok(c), Ok(n)) => {
                    out.push(("beta", Sample::Pair(c.beta, n.beta)));
                    out.push(("kappa_sing_b", Sample::Pair(c.kappa_sing_b, n.kappa_sing_b)));
                    out.push(("tau_sing_b", Sample::Pair(c.tau_sing_b, n.tau_sing_b)));
                }
                (Err(e), _) | (_, Err(e)) => out.push(("beta", Sample::Failed(e.name()))),
            }
        }
        Err(e) => out.push(("normal_form", Sample::Failed(e.name()))),
    }

    let g = synth::type23_curve(&mut rng, order);
    let r = synth::rotation(&mut rng);
    let t = synth::reparametrization(&mut rng, order);
    let moved = g.transformed(&r).reparametrized(&t);
    match (curve_invariants(&g), moved.and_then(|m| curve_invariants(&m))) {
        (Ok(a), Ok(b)) => {
            optional(&mut out, "kappa_sing", a.kappa_sing, b.kappa_sing);
            optional(&mut out, "tau_sing", a.tau_sing, b.tau_sing);
            optional(&mut out, "sigma_sing", a.sigma_sing, b.sigma_sing);
            if let (Some(k), Some(tau)) = (a.kappa_sing, a.tau_sing) {
                let lk = limit_kappa(&g, LIMIT_SAMPLES, LIMIT_T_MIN);
                pair(&mut out, "limit_kappa", lk.map(|l| (k / (2.0 * 2f64.sqrt()), l)));
                let lt = limit_tau(&g, LIMIT_SAMPLES, LIMIT_T_MIN);
                pair(&mut out, "limit_tau", lt.map(|l| (2.0 * tau / (3.0 * 2f64.sqrt()), l)));
            }
        }
        (Err(e), _) | (_, Err(e)) => out.push(("kappa_sing", Sample::Failed(e.name()))),
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: &'static str,
    pub relative: bool,
    pub samples: usize,
    pub failures: usize,
    /// First failing error name, if any.
    pub first_failure: Option<&'static str>,
    pub max_error: f64,
    pub worst_draw: Option<usize>,
    pub tol: f64,
}

impl Row {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.samples > 0 && self.max_error <= self.tol
    }
}

/// Runs `draws` draws in parallel and aggregates them in draw order.
pub fn run(seed: u64, draws: usize, order: usize, variant: FormulaVariant, tol: Option<f64>) -> Vec<Row> {
    let results: Vec<Draw> = (0..draws)
        .into_par_iter()
        .map(|k| draw(seed, k, order, variant))
        .collect();
    let mut rows: Vec<Row> = ROWS
        .iter()
        .map(|&(name, measure, default)| Row {
            name,
            relative: measure == Measure::Rel,
            samples: 0,
            failures: 0,
            first_failure: None,
            max_error: 0.0,
            worst_draw: None,
            tol: tol.unwrap_or(default),
        })
        .collect();
    for (k, d) in results.iter().enumerate() {
        for (name, sample) in d {
            let row = rows
                .iter_mut()
                .find(|r| r.name == *name)
                .expect("every sample belongs to a row");
            row.samples += 1;
            let err = match *sample {
                Sample::Pair(a, b) if row.relative => (a - b).abs() / a.abs().max(REL_FLOOR),
                Sample::Pair(a, b) => (a - b).abs(),
                Sample::Error(e) => e,
                Sample::Failed(why) => {
                    row.failures += 1;
                    row.first_failure.get_or_insert(why);
                    continue;
                }
            };
            // NaN counts as worse than anything
            if !(err <= row.max_error) {
                row.max_error = err;
                row.worst_draw = Some(k);
            }
        }
    }
    rows
}

pub const HEADER: [&str; 9] = [
    "invariant",
    "measure",
    "samples",
    "failures",
    "max_error",
    "worst_draw",
    "tol",
    "status",
    "note",
];

pub fn table(rows: &[Row]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.name.to_string(),
                if r.relative { "rel" } else { "abs" }.to_string(),
                r.samples.to_string(),
                r.failures.to_string(),
                num(r.max_error),
                r.worst_draw.map(|k| k.to_string()).unwrap_or_default(),
                num(r.tol),
                if r.passed() { "PASS" } else { "FAIL" }.to_string(),
                r.first_failure.unwrap_or_default().to_string(),
            ]
        })
        .collect()
}
