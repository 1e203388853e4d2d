//! Browser bindings: each export takes plain numbers and returns a JSON string
//! for the page to draw.

use listcal::greedy::{discrete_greedy_dense, discrete_value};
use listcal::oracle::exhaustive_search;
use listcal::repro::{kl_mmr_objective, KlMmrInstance};
use listcal::{Overlap, OverlapMeasure, PositionWeights};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct DiscreteDemo {
    pub weights: Vec<f64>,
    pub greedy: Vec<usize>,
    pub greedy_value: f64,
    pub gains: Vec<f64>,
    pub optimum: Vec<usize>,
    pub optimum_value: f64,
    pub ratio: f64,
}

/// Discrete greedy against the exhaustive optimum for a target over genres
/// and geometric weights with ratio `decay`.
pub fn discrete_demo(target: &[f64], decay: f64, k: usize) -> Result<DiscreteDemo, String> {
    let sum: f64 = target.iter().sum();
    if target.is_empty() || target.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || sum <= 0.0 {
        return Err("target needs at least one positive entry".into());
    }
    let target: Vec<f64> = target.iter().map(|v| v / sum).collect();
    let weights = PositionWeights::geometric(k, decay).map_err(|e| e.to_string())?;
    let w = weights.as_slice();
    let (seq, trace) = discrete_greedy_dense(&target, w).map_err(|e| e.to_string())?;
    let (best, optimum_value) =
        exhaustive_search(|s| discrete_value(&target, w, s), target.len(), k, true).map_err(|e| e.to_string())?;
    let greedy_value = discrete_value(&target, w, &seq);
    Ok(DiscreteDemo {
        weights: w.to_vec(),
        greedy: seq.0,
        greedy_value,
        gains: trace.gains(),
        optimum: best.0,
        optimum_value,
        ratio: greedy_value / optimum_value,
    })
}

#[derive(Debug, Serialize)]
pub struct Profile {
    pub measure: String,
    pub t: Vec<f64>,
    pub value: Vec<f64>,
}

/// `G(p, q_t)` for `p = (p0, 1 − p0)` and `q_t = mass · (t, 1 − t)`, `t` on a
/// uniform grid of `points` values in `[0, 1]`.
pub fn measure_profile(measure: &str, p0: f64, mass: f64, points: usize) -> Result<Profile, String> {
    if !(0.0..=1.0).contains(&p0) || !(0.0..=1.0).contains(&mass) || points < 2 {
        return Err("need p0 and mass in [0, 1] and at least two points".into());
    }
    let g = OverlapMeasure::parse(measure).map_err(|e| e.to_string())?;
    let p = [p0, 1.0 - p0];
    g.check_target(&p).map_err(|e| e.to_string())?;
    let t: Vec<f64> = (0..points).map(|i| i as f64 / (points - 1) as f64).collect();
    let value = t.iter().map(|&t| g.overlap(&p, &[mass * t, mass * (1.0 - t)])).collect();
    Ok(Profile { measure: g.to_string(), t, value })
}

#[derive(Debug, Serialize)]
pub struct KlPoint {
    pub w1: f64,
    pub i1_first: f64,
    pub i2_first: f64,
    /// `f(i1) − f(i2)`: positive means greedy opens with `i1`.
    pub first_pick_margin: f64,
}

/// The mixed-sign KL/MMR heuristic for both two-item orders as `w1` sweeps a
/// log grid over `[w_lo, w_hi]`.
pub fn kl_mmr_curve(p: &[f64], eps: f64, w_lo: f64, w_hi: f64, points: usize) -> Result<Vec<KlPoint>, String> {
    let p: [f64; 4] = p.try_into().map_err(|_| "target must have four entries".to_string())?;
    if !(w_lo > 1.0 && w_hi >= w_lo) || points < 2 {
        return Err("need 1 < w_lo <= w_hi and at least two points".into());
    }
    let step = (w_hi / w_lo).ln() / (points - 1) as f64;
    (0..points)
        .map(|i| {
            let w1 = w_lo * (step * i as f64).exp();
            let inst = KlMmrInstance::new(p, eps, w1).map_err(|e| e.to_string())?;
            Ok(KlPoint {
                w1,
                i1_first: kl_mmr_objective(&inst, &[0, 1]),
                i2_first: kl_mmr_objective(&inst, &[1, 0]),
                first_pick_margin: kl_mmr_objective(&inst, &[0]) - kl_mmr_objective(&inst, &[1]),
            })
        })
        .collect()
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = discreteDemo)]
pub fn discrete_demo_js(target: Vec<f64>, decay: f64, k: usize) -> Result<String, JsError> {
    to_js(discrete_demo(&target, decay, k))
}

#[wasm_bindgen(js_name = measureProfile)]
pub fn measure_profile_js(measure: &str, p0: f64, mass: f64, points: usize) -> Result<String, JsError> {
    to_js(measure_profile(measure, p0, mass, points))
}

#[wasm_bindgen(js_name = klMmrCurve)]
pub fn kl_mmr_curve_js(p: Vec<f64>, eps: f64, w_lo: f64, w_hi: f64, points: usize) -> Result<String, JsError> {
    to_js(kl_mmr_curve(&p, eps, w_lo, w_hi, points))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_half_half() {
        let d = discrete_demo(&[1.0, 1.0], 0.6, 3).unwrap();
        assert!(d.ratio >= 2.0 / 3.0);
        assert!(d.optimum_value >= d.greedy_value - 1e-12);
        assert_eq!(d.gains.len(), 3);
    }

    #[test]
    fn profile_peaks_at_target() {
        let pr = measure_profile("hellinger", 0.3, 1.0, 11).unwrap();
        let best = pr.value.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        assert_eq!(best, 3);
        assert!((pr.value[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bad_inputs() {
        assert!(discrete_demo(&[], 0.5, 2).is_err());
        assert!(measure_profile("nope", 0.5, 1.0, 5).is_err());
        assert!(kl_mmr_curve(&[0.5, 0.5], 1e-10, 2.0, 3.0, 4).is_err());
    }

    #[test]
    fn kl_curve_changes_sign() {
        let c = kl_mmr_curve(&[0.05, 0.9, 0.025, 0.025], 1e-10, 1.1, 100.0, 40).unwrap();
        assert!(c.first().unwrap().i1_first < 0.0);
        assert!(c.last().unwrap().i1_first > 0.0);
        assert!(c.iter().all(|pt| pt.first_pick_margin < 0.0));
    }
}
