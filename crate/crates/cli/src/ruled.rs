//! `ruled scan` and `ruled mesh`.

use serde_json::Value;

use cuspidal::ruled::{mesh_export, scan, RuledInput, RuledSurface, ScanReport};

use crate::wire::{num, parse, Outcome};

pub fn load(value: Value, origin: &str) -> Outcome<RuledInput> {
    let input: RuledInput = parse(value, origin)?;
    input.validate()?;
    Ok(input)
}

pub const SINGULAR_HEADER: [&str; 3] = ["piece", "t", "v"];

pub fn singular_rows(report: &ScanReport) -> Vec<Vec<String>> {
    report
        .singular_set
        .iter()
        .enumerate()
        .flat_map(|(k, piece)| piece.iter().map(move |(t, v)| vec![k.to_string(), num(*t), num(*v)]))
        .collect()
}

/// Scan report as JSON; the singular set is left out when it goes to a separate table.
pub fn scan_json(input: &RuledInput, steps: usize, with_singular_set: bool) -> Outcome<(Value, ScanReport)> {
    let report = scan(input, steps)?;
    let mut value = serde_json::to_value(&report).expect("scan report serializes");
    if !with_singular_set {
        value.as_object_mut().map(|m| m.remove("singular_set"));
    }
    Ok((value, report))
}

/// OBJ with about `rows` ruling rows and `cols` samples along each ruling.
pub fn mesh_obj(input: &RuledInput, steps: usize, rows: usize, cols: usize) -> Outcome<String> {
    let surface = RuledSurface::build(input, steps)?;
    let stride = (steps / rows.max(1)).max(1);
    Ok(mesh_export(input, &surface, stride, cols)?.to_obj())
}
