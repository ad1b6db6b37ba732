//! Browser bindings: certify a generator list, run a small probability curve,
//! and lay out orbit points in the unit disk for drawing.

use std::f64::consts::TAU;

use hypwalk::certify::{criterion_check, orbit_points};
use hypwalk::experiments::{probability_curve, write_curve_csv, ExperimentConfig};
use hypwalk::walk::Measure;
use hypwalk::word::FreeWord;
use hypwalk::{ModelSpace, SpacePoint};
use wasm_bindgen::prelude::*;

/// Upper bound on `trials × Σn` so a click never freezes the tab.
pub const CURVE_BUDGET: usize = 2_000_000;
pub const MAX_ORBIT_LEN: usize = 6;

fn space(kind: &str, rank: u32, delta: f64) -> Result<ModelSpace, String> {
    let s = match kind {
        "tree" => ModelSpace::tree(rank as usize),
        "plane" => ModelSpace::plane(0.0),
        other => return Err(format!("unknown space {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    s.with_delta(delta).map_err(|e| e.to_string())
}

/// Report text and whether the tuple was certified.
pub fn certify_report(kind: &str, rank: u32, delta: f64, generators: &str) -> Result<(String, bool), String> {
    let space = space(kind, rank, delta)?;
    let gens = space.parse_generators(generators).map_err(|e| e.to_string())?;
    let out = criterion_check(&gens, &space, delta).map_err(|e| e.to_string())?;
    Ok((out.to_string(), out.is_certified()))
}

pub fn curve_csv(rank: u32, k: u32, n_list: &str, trials: u32, seed: u32) -> Result<String, String> {
    let n_grid = n_list
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("bad n {t:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let work = n_grid.iter().sum::<usize>() * trials as usize * k as usize;
    if work > CURVE_BUDGET {
        return Err(format!("{work} walk steps requested; the page allows {CURVE_BUDGET}"));
    }
    let cfg = ExperimentConfig {
        space: ModelSpace::tree(rank as usize).map_err(|e| e.to_string())?,
        measure: Measure::uniform_symmetric(rank as usize).map_err(|e| e.to_string())?,
        k: k as usize,
        n_grid,
        trials: trials as usize,
        master_seed: seed as u64,
    };
    let rows = probability_curve(&cfg).map_err(|e| e.to_string())?;
    let mut buf = Vec::new();
    write_curve_csv(&rows, &mut buf).map_err(|e| e.to_string())?;
    String::from_utf8(buf).map_err(|e| e.to_string())
}

/// Disk position of a tree vertex: each letter narrows the angular sector,
/// and the radius grows with word length.
pub fn tree_vertex_to_disk(w: &FreeWord) -> (f64, f64) {
    let branches = 2.0 * w.rank() as f64;
    let mut lo = 0.0;
    let mut width = TAU;
    let mut prev: Option<i8> = None;
    for l in w.letters() {
        let slot = |s: i8| -> f64 {
            let g = s.unsigned_abs() as f64 - 1.0;
            2.0 * g + if s < 0 { 1.0 } else { 0.0 }
        };
        match prev {
            None => {
                width /= branches;
                lo += slot(l.signed()) * width;
            }
            Some(p) => {
                let skip = slot(-p);
                let mut idx = slot(l.signed());
                if idx > skip {
                    idx -= 1.0;
                }
                width /= branches - 1.0;
                lo += idx * width;
            }
        }
        prev = Some(l.signed());
    }
    let angle = lo + width / 2.0;
    let r = (0.45 * w.len() as f64).tanh();
    (r * angle.cos(), r * angle.sin())
}

/// Flat `[u, v, word length, ...]` for the orbit of the base point under
/// reduced words of length at most `max_len`.
pub fn orbit_disk(kind: &str, rank: u32, generators: &str, max_len: usize) -> Result<Vec<f64>, String> {
    if max_len > MAX_ORBIT_LEN {
        return Err(format!("max_len is capped at {MAX_ORBIT_LEN}"));
    }
    let space = space(kind, rank, 0.0)?;
    let gens = space.parse_generators(generators).map_err(|e| e.to_string())?;
    if gens.is_empty() {
        return Err("no generators".into());
    }
    let pts = orbit_points(&gens, &space, max_len).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(3 * pts.len());
    for (u, p) in pts {
        let (x, y) = match p {
            SpacePoint::Vertex(w) => tree_vertex_to_disk(&w),
            SpacePoint::Plane(z) => z.to_disk(),
        };
        out.extend([x, y, u.len() as f64]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn certify(kind: &str, rank: u32, delta: f64, generators: &str) -> Result<String, JsError> {
    certify_report(kind, rank, delta, generators)
        .map(|(text, _)| text)
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn curve(rank: u32, k: u32, n_list: &str, trials: u32, seed: u32) -> Result<String, JsError> {
    curve_csv(rank, k, n_list, trials, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn orbit(kind: &str, rank: u32, generators: &str, max_len: u32) -> Result<Vec<f64>, JsError> {
    orbit_disk(kind, rank, generators, max_len as usize).map_err(|e| JsError::new(&e))
}
