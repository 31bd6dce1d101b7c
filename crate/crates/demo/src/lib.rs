//! Browser bindings: the `κ_m` weight matrix, the defect curve against its
//! bound, and a summary of a delayed graph built from pasted text.

use std::fmt::Write;

use kgraph::cp;
use kgraph::delay::required_base_depth;
use kgraph::{delay, verify_axioms, Degree, GraphSource};
use num_traits::ToPrimitive;
use wasm_bindgen::prelude::*;

/// Row-major entries of `κ_m`.
pub fn kappa_entries(m: u32) -> Result<Vec<f64>, String> {
    if m > 64 {
        return Err("m must be at most 64".into());
    }
    let k = cp::kappa(m).map_err(|e| e.to_string())?;
    Ok(k.rows().into_iter().flatten().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
}

/// `[n, defect, bound]` triples for `n = (2j, 2j)`, `j = 1..=steps`, or all
/// `n = (j, j)` when `odd` is set.
pub fn defect_points(a: &str, b: &str, steps: u32, odd: bool) -> Result<Vec<f64>, String> {
    let a: Degree = a.parse().map_err(|e: kgraph::KGraphError| e.to_string())?;
    let b: Degree = b.parse().map_err(|e: kgraph::KGraphError| e.to_string())?;
    if steps > 60 {
        return Err("at most 60 steps".into());
    }
    let mut out = Vec::new();
    for j in 1..=steps {
        let m = if odd { j } else { 2 * j };
        let r = cp::defect(&a, &b, &Degree::from([m, m])).map_err(|e| e.to_string())?;
        out.extend([m as f64, r.defect.to_f64().unwrap_or(f64::NAN), r.bound.to_f64().unwrap_or(f64::NAN)]);
    }
    Ok(out)
}

pub fn summarize_delay(text: &str, n: &str, depth: &str) -> Result<String, String> {
    let source = GraphSource::parse(text).map_err(|e| e.to_string())?;
    if let Some(p) = source.problems().first() {
        return Err(p.clone());
    }
    let n: Degree = n.parse().map_err(|e: kgraph::KGraphError| e.to_string())?;
    let depth: Degree = depth.parse().map_err(|e: kgraph::KGraphError| e.to_string())?;
    if depth.total() > 8 || n.total() > 8 {
        return Err("keep n and depth small (coordinate sum at most 8)".into());
    }
    let base = required_base_depth(&n, &depth)
        .and_then(|d| source.build(&d))
        .map_err(|e| e.to_string())?;
    let dg = delay(&base, &n, &depth).map_err(|e| e.to_string())?;
    let g = dg.realized();
    let mut s = String::new();
    let _ = writeln!(s, "base: {} morphisms up to degree {}", base.len(), base.depth());
    let _ = writeln!(s, "delay n={n}: {} vertices, {} morphisms up to degree {depth}", g.vertices().len(), g.len());
    for i in 0..n.rank() {
        let unit = Degree::new((0..n.rank()).map(|j| u32::from(i == j)).collect());
        for &e in g.of_degree(&unit) {
            let _ = writeln!(s, "  {} : {} -> {}", g.label(e), g.label(g.source(e)), g.label(g.range(e)));
        }
    }
    let rep = verify_axioms(g);
    let _ = writeln!(s, "{rep}");
    Ok(s)
}

#[wasm_bindgen]
pub fn kappa_matrix(m: u32) -> Result<Vec<f64>, JsError> {
    kappa_entries(m).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn defect_curve(a: &str, b: &str, steps: u32, odd: bool) -> Result<Vec<f64>, JsError> {
    defect_points(a, b, steps, odd).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn delay_summary(graph_text: &str, n: &str, depth: &str) -> Result<String, JsError> {
    summarize_delay(graph_text, n, depth).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_two() {
        assert_eq!(kappa_entries(2).unwrap(), vec![0.5; 4]);
        assert!(kappa_entries(0).is_err());
    }

    #[test]
    fn curve_stays_below_bound() {
        let pts = defect_points("1,0", "0,0", 10, false).unwrap();
        assert_eq!(pts.len(), 30);
        for t in pts.chunks(3) {
            assert!(t[1] <= t[2] + 1e-15);
        }
        assert_eq!(defect_points("0,0", "0,0", 5, false).unwrap()[1], 0.0);
    }

    #[test]
    fn loop_summary() {
        let s = summarize_delay("vertex v\nedge e v v\n", "3", "3").unwrap();
        assert!(s.contains("3 vertices"), "{s}");
        assert!(s.contains("PASS verify_axioms"), "{s}");
        assert!(summarize_delay("vertex v\n", "3", "3").is_err());
    }
}
