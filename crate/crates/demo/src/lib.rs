//! Browser bindings. Every export returns a JSON string; errors surface
//! as thrown JS exceptions.

use exact_rank::harness::{stream_rng, Phase};
use exact_rank::instance::{
    gap_profile, generate_instance, inner_minimizer, lower_bound_eq1, lower_bound_eq2, Family, InstanceOracle,
};
use exact_rank::pit::{build_pit, Boundary};
use exact_rank::ranking::iir;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct TreeNode {
    id: usize,
    depth: usize,
    left: String,
    right: String,
    mid: Option<String>,
    parent: Option<usize>,
    children: Option<(usize, usize)>,
    /// Position in the sorted list an item lands at if the walk ends here.
    slot: Option<usize>,
}

#[derive(Serialize)]
struct TreeLayout {
    depth: usize,
    root: usize,
    nodes: Vec<TreeNode>,
    dump: String,
}

fn label(b: Boundary) -> String {
    b.to_string()
}

/// Preference interval tree over `len` items sorted `len, len-1, ..., 1`.
pub fn pit_json(len: usize) -> Result<String, String> {
    if len > 4096 {
        return Err(format!("at most 4096 items, got {len}"));
    }
    let sorted: Vec<usize> = (1..=len).rev().collect();
    let pit = build_pit(&sorted).map_err(|e| e.to_string())?;
    let nodes = pit
        .nodes()
        .iter()
        .enumerate()
        .map(|(id, n)| TreeNode {
            id,
            depth: n.depth,
            left: label(n.left),
            right: label(n.right),
            mid: n.mid.map(label),
            parent: n.parent,
            children: n.lchild.zip(n.rchild),
            slot: n.is_leaf().then(|| pit.insertion_position(id)),
        })
        .collect();
    let layout = TreeLayout { depth: pit.depth(), root: pit.root(), nodes, dump: pit.dump() };
    serde_json::to_string(&layout).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct RankRun {
    true_ranking: Vec<usize>,
    ranking: Vec<usize>,
    correct: bool,
    comparisons: u64,
    per_item_cost: Vec<u64>,
    attempts: Vec<u32>,
    delta_tilde_i: Vec<f64>,
}

/// Draws an instance and ranks it with iterative insertion.
pub fn rank_json(family: &str, n: usize, gap: f64, confidence: f64, seed: u64) -> Result<String, String> {
    if n > 200 {
        return Err(format!("at most 200 items in the browser, got {n}"));
    }
    let family: Family = family.parse().map_err(|e: exact_rank::Error| e.to_string())?;
    let gap = family.needs_delta().then_some(gap);
    let instance = generate_instance(family, n, gap, &mut stream_rng(seed, n as u64, 0, Phase::Instance))
        .map_err(|e| e.to_string())?;
    let mut oracle = InstanceOracle::new(&instance);
    let out = iir(&mut oracle, n, confidence, &mut stream_rng(seed, n as u64, 0, Phase::Trial))
        .map_err(|e| e.to_string())?;
    let run = RankRun {
        true_ranking: instance.true_ranking().to_vec(),
        correct: out.ranking == instance.true_ranking(),
        ranking: out.ranking,
        comparisons: out.comparisons,
        per_item_cost: out.per_item_cost,
        attempts: out.attempts,
        delta_tilde_i: gap_profile(&instance).delta_tilde_i,
    };
    serde_json::to_string(&run).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Bounds {
    bound_eq1: f64,
    bound_eq2: f64,
    x_star: Vec<f64>,
}

/// Lower bounds for the given adjacent gaps, one per item.
pub fn bounds_json(gaps: &[f64], confidence: f64) -> Result<String, String> {
    if gaps.is_empty() {
        return Err("need at least one gap".into());
    }
    let b = Bounds {
        bound_eq1: lower_bound_eq1(gaps, confidence).map_err(|e| e.to_string())?,
        bound_eq2: lower_bound_eq2(gaps, gaps.len(), confidence).map_err(|e| e.to_string())?,
        x_star: inner_minimizer(gaps),
    };
    serde_json::to_string(&b).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn pit_layout(len: usize) -> Result<String, JsError> {
    pit_json(len).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn rank(family: &str, n: usize, gap: f64, confidence: f64, seed: u32) -> Result<String, JsError> {
    rank_json(family, n, gap, confidence, seed as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn lower_bounds(gaps: &[f64], confidence: f64) -> Result<String, JsError> {
    bounds_json(gaps, confidence).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn three_item_tree() {
        let v: Value = serde_json::from_str(&pit_json(3).unwrap()).unwrap();
        assert_eq!(v["depth"], 3);
        assert_eq!(v["nodes"].as_array().unwrap().len(), 7);
        assert_eq!(v["nodes"][0]["mid"], "2");
        assert_eq!(v["nodes"][2]["left"], "-inf");
        assert_eq!(v["nodes"][2]["slot"], 3);
        assert_eq!(v["nodes"][6]["slot"], 0);
    }

    #[test]
    fn rank_replays() {
        let a = rank_json("homo", 12, 0.1, 0.05, 9).unwrap();
        assert_eq!(a, rank_json("homo", 12, 0.1, 0.05, 9).unwrap());
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["correct"], true);
        assert_eq!(v["per_item_cost"][0], 0);
        assert!(rank_json("nope", 5, 0.1, 0.05, 1).is_err());
        assert!(rank_json("homo", 5, 0.6, 0.05, 1).is_err());
    }

    #[test]
    fn bounds_for_equal_gaps() {
        let v: Value = serde_json::from_str(&bounds_json(&[0.1; 10], 0.01).unwrap()).unwrap();
        assert!((v["bound_eq2"].as_f64().unwrap() - 7741.787724230093).abs() < 1e-6);
        assert!((v["x_star"][3].as_f64().unwrap() - 0.1).abs() < 1e-12);
        assert!(bounds_json(&[], 0.01).is_err());
        assert!(bounds_json(&[0.1], 1.0).is_err());
    }
}
