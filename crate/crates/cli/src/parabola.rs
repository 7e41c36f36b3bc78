//! `parabola`: the curvature parabola of the germ and, with a boundary, the vertex and the
//! intersection with the principal normal of the boundary image.

use std::fmt::Write;

use nalgebra::Vector3;
use serde::Serialize;

use cuspidal::parabola::{curvature_parabola, umbilic_curvature, vertex_and_intersection, ParabolaKind};
use cuspidal::Error;

use crate::input::Surface;
use crate::wire::{num, Outcome};

#[derive(Debug, Clone, Serialize)]
pub struct ParabolaReport {
    pub kind: ParabolaKind,
    pub basepoint: [f64; 3],
    pub direction: Option<[f64; 3]>,
    pub umbilic_curvature: Option<f64>,
    #[serde(rename = "V")]
    pub vertex: [f64; 3],
    #[serde(rename = "P")]
    pub intersection: Option<[f64; 3]>,
    pub dist: Option<f64>,
    /// Orthonormal basis of the normal plane, used for the plane coordinates.
    pub normal_plane_basis: [[f64; 3]; 2],
    /// `A, B, C` with `Δ₀ = {A + 2sB + s²C}`.
    pub coefficients: [[f64; 3]; 3],
}

fn arr(v: &Vector3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

pub fn report(s: &Surface) -> Outcome<ParabolaReport> {
    let p = curvature_parabola(&s.germ)?;
    let umbilic = match umbilic_curvature(&p) {
        Ok(k) => Some(k),
        Err(Error::NotDefined) => None,
        Err(e) => return Err(e.into()),
    };
    let vi = match (&s.boundary, p.kind) {
        (Some(b), ParabolaKind::HalfLine) => Some(vertex_and_intersection(&s.germ, b)?),
        _ => None,
    };
    Ok(ParabolaReport {
        kind: p.kind,
        basepoint: arr(&p.basepoint),
        direction: p.direction.as_ref().map(arr),
        umbilic_curvature: umbilic,
        vertex: arr(&p.basepoint),
        intersection: vi.as_ref().map(|v| arr(&v.intersection)),
        dist: vi.map(|v| v.dist),
        normal_plane_basis: p.normal_plane_basis.each_ref().map(arr),
        coefficients: p.coefficients.each_ref().map(arr),
    })
}

fn plane(r: &ParabolaReport, p: &[f64; 3]) -> (f64, f64) {
    let dot = |e: &[f64; 3]| e[0] * p[0] + e[1] * p[1] + e[2] * p[2];
    (dot(&r.normal_plane_basis[0]), dot(&r.normal_plane_basis[1]))
}

/// `Δ₀` drawn in the normal plane with the origin, `V` and `P` marked.
pub fn svg(r: &ParabolaReport) -> String {
    let [a, b, c] = r.coefficients;
    let at = |s: f64| -> [f64; 3] { std::array::from_fn(|i| a[i] + 2.0 * s * b[i] + s * s * c[i]) };
    let curve: Vec<(f64, f64)> = (-100..=100).map(|k| plane(r, &at(k as f64 * 0.03))).collect();
    let mut marks = vec![("O", (0.0, 0.0)), ("V", plane(r, &r.vertex))];
    if let Some(p) = &r.intersection {
        marks.push(("P", plane(r, p)));
    }
    let points = curve.iter().chain(marks.iter().map(|(_, p)| p));
    let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
    for &(x, y) in points {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-12) * 1.2;
    let (cx, cy) = ((lo.0 + hi.0) / 2.0, (lo.1 + hi.1) / 2.0);
    let size = 400.0;
    let map = |(x, y): (f64, f64)| ((x - cx) / span * size + size / 2.0, size / 2.0 - (y - cy) / span * size);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (ox, oy) = map((0.0, 0.0));
    let _ = writeln!(
        out,
        r#"<path d="M0 {oy:.3} H{size} M{ox:.3} 0 V{size}" stroke="lightgray" fill="none"/>"#
    );
    let path: Vec<String> = curve
        .iter()
        .map(|&p| {
            let (x, y) = map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline points="{}" stroke="black" stroke-width="2" fill="none"/>"#,
        path.join(" ")
    );
    for (label, p) in marks {
        let (x, y) = map(p);
        let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="crimson"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="14">{label}</text>"#,
            x + 6.0,
            y - 6.0
        );
    }
    let _ = writeln!(
        out,
        r#"<!-- {:?}; umbilic curvature {}; dist {} -->"#,
        r.kind,
        r.umbilic_curvature.map(num).unwrap_or_else(|| "undefined".into()),
        r.dist.map(num).unwrap_or_else(|| "undefined".into())
    );
    out.push_str("</svg>\n");
    out
}
