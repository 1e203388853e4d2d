//! Exhaustive optima and randomized property checkers.
//!
//! Every checker draws trial `t` from its own generator seeded by
//! `(seed, t)`, so results do not depend on scheduling. Violations are
//! counted beyond [`VIOLATION_TOL`]; the reported counterexample is the worst
//! one (earliest trial on ties).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algorithm::{run, Solver};
use crate::error::{Error, Result};
use crate::file::InstanceFile;
use crate::instance::Instance;
use crate::matroid::{set_to_sequence, EarliestPosition, Matroid, SetFunction};
use crate::measure::{Overlap, OverlapMeasure};
use crate::objective::{induced_dense, seq_objective, ItemPositionSet, Sequence};
use crate::repro::{random_instance, GeneratorParams};

pub const SEARCH_LIMIT: f64 = 1e7;
pub const VIOLATION_TOL: f64 = 1e-9;

/// Number of length-`k` lists over `universe` elements.
pub fn search_space(universe: usize, k: usize, allow_repeats: bool) -> f64 {
    if allow_repeats {
        (universe as f64).powi(k as i32)
    } else {
        (0..k).map(|j| universe.saturating_sub(j) as f64).product()
    }
}

fn check_space(universe: usize, k: usize, allow_repeats: bool) -> Result<()> {
    if k == 0 {
        return Err(Error::ParameterOutOfRange("list length must be at least 1".into()));
    }
    if universe == 0 || (!allow_repeats && universe < k) {
        return Err(Error::UniverseExhausted { size: universe, k });
    }
    let size = search_space(universe, k, allow_repeats);
    if size > SEARCH_LIMIT {
        return Err(Error::SearchSpaceTooLarge { size, limit: SEARCH_LIMIT });
    }
    Ok(())
}

/// Best length-`k` list for an arbitrary objective, enumerated in
/// lexicographic order so ties resolve to the smallest list.
pub fn exhaustive_search<F>(objective: F, universe: usize, k: usize, allow_repeats: bool) -> Result<(Sequence, f64)>
where
    F: Fn(&[usize]) -> f64,
{
    check_space(universe, k, allow_repeats)?;
    let mut seq = Vec::with_capacity(k);
    let mut used = vec![false; universe];
    let mut best: Option<(Vec<usize>, f64)> = None;
    search(&objective, universe, k, allow_repeats, &mut seq, &mut used, &mut best);
    let (s, v) = best.expect("nonempty search space");
    Ok((Sequence(s), v))
}

fn search<F: Fn(&[usize]) -> f64>(
    f: &F,
    universe: usize,
    k: usize,
    repeats: bool,
    seq: &mut Vec<usize>,
    used: &mut [bool],
    best: &mut Option<(Vec<usize>, f64)>,
) {
    if seq.len() == k {
        let v = f(seq);
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            *best = Some((seq.clone(), v));
        }
        return;
    }
    for e in 0..universe {
        if !repeats && used[e] {
            continue;
        }
        used[e] = true;
        seq.push(e);
        search(f, universe, k, repeats, seq, used, best);
        seq.pop();
        used[e] = false;
    }
}

/// Exact optimum of `G(π)` over length-`k` lists of the instance's default
/// universe. Induced distributions are built incrementally along the search.
pub fn exhaustive_opt(inst: &Instance, measure: &OverlapMeasure, allow_repeats: bool) -> Result<(Sequence, f64)> {
    exhaustive_opt_dyn(inst, measure, allow_repeats)
}

/// [`exhaustive_opt`] for any [`Overlap`].
pub fn exhaustive_opt_dyn(inst: &Instance, measure: &dyn Overlap, allow_repeats: bool) -> Result<(Sequence, f64)> {
    let universe = inst.default_universe();
    let k = inst.k();
    check_space(universe.len(), k, allow_repeats)?;
    measure.check_target(inst.target_dense())?;
    let mut ctx = Dfs {
        measure,
        target: inst.target_dense(),
        weights: inst.weights(),
        rows: &universe.rows,
        repeats: allow_repeats,
        q: vec![vec![0.0; inst.genres().len()]; k + 1],
        seq: Vec::with_capacity(k),
        used: vec![false; universe.len()],
        best: None,
    };
    ctx.go();
    let (s, v) = ctx.best.expect("nonempty search space");
    Ok((Sequence(s), v))
}

struct Dfs<'a> {
    measure: &'a dyn Overlap,
    target: &'a [f64],
    weights: &'a [f64],
    rows: &'a [Vec<f64>],
    repeats: bool,
    q: Vec<Vec<f64>>,
    seq: Vec<usize>,
    used: Vec<bool>,
    best: Option<(Vec<usize>, f64)>,
}

impl Dfs<'_> {
    fn go(&mut self) {
        let d = self.seq.len();
        if d == self.weights.len() {
            let v = self.measure.overlap(self.target, &self.q[d]);
            if self.best.as_ref().is_none_or(|(_, b)| v > *b) {
                self.best = Some((self.seq.clone(), v));
            }
            return;
        }
        let w = self.weights[d];
        for e in 0..self.rows.len() {
            if !self.repeats && self.used[e] {
                continue;
            }
            let (lo, hi) = self.q.split_at_mut(d + 1);
            for ((n, &o), &r) in hi[0].iter_mut().zip(&lo[d]).zip(&self.rows[e]) {
                *n = o + w * r;
            }
            self.used[e] = true;
            self.seq.push(e);
            self.go();
            self.seq.pop();
            self.used[e] = false;
        }
    }
}

/// A failing configuration, replayable from the serialized instance when one
/// is involved.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub property: String,
    pub detail: String,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub trials: usize,
    pub violations: usize,
    pub worst_violation: f64,
    pub counterexample: Option<Counterexample>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn collect(name: &str, trials: usize, found: Vec<Vec<(f64, Counterexample)>>) -> Self {
        let mut report =
            CheckReport { name: name.to_string(), trials, violations: 0, worst_violation: 0.0, counterexample: None };
        for (amount, cx) in found.into_iter().flatten() {
            report.violations += 1;
            if report.counterexample.is_none() || amount > report.worst_violation {
                report.worst_violation = amount;
                report.counterexample = Some(cx);
            }
        }
        report
    }
}

pub(crate) fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(trial as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

pub(crate) fn per_trial<T, F>(trials: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..trials).map(f).collect()
    }
}

fn vec_json(v: &[f64]) -> String {
    serde_json::to_string(v).expect("finite or not, f64 slices serialize")
}

fn random_simplex(rng: &mut impl Rng, n: usize, zero_prob: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| if rng.random::<f64>() < zero_prob { 0.0 } else { rng.random::<f64>() }).collect();
    if v.iter().all(|&x| x == 0.0) {
        let i = rng.random_range(0..n);
        v[i] = 1.0;
    }
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

fn random_sub(rng: &mut impl Rng, n: usize, max_mass: f64) -> Vec<f64> {
    let mass = if rng.random::<f64>() < 0.3 { max_mass } else { rng.random::<f64>() * max_mass };
    random_simplex(rng, n, 0.2).into_iter().map(|x| x * mass).collect()
}

/// Nonnegativity and strict maximality at `q = p` on random pairs of a
/// distribution `p` and subdistribution `q`.
pub fn check_overlap_axioms(g: &dyn Overlap, trials: usize, seed: u64) -> CheckReport {
    let found = per_trial(trials, |t| {
        let mut rng = trial_rng(seed, t);
        let n = rng.random_range(2..=6);
        let p = random_simplex(&mut rng, n, 0.2);
        let q = if rng.random::<f64>() < 0.1 {
            let s = rng.random::<f64>();
            p.iter().map(|x| x * s).collect()
        } else {
            random_sub(&mut rng, n, 1.0)
        };
        let mut out = Vec::new();
        let cx = |property: &str, lhs: f64, rhs: f64| Counterexample {
            property: property.into(),
            detail: format!("p = {}, q = {}", vec_json(&p), vec_json(&q)),
            lhs,
            rhs,
            instance: None,
        };
        if let Err(e) = g.check_target(&p) {
            out.push((f64::INFINITY, cx(&format!("target rejected: {e}"), f64::NAN, f64::NAN)));
            return out;
        }
        let gq = g.overlap(&p, &q);
        let gp = g.overlap(&p, &p);
        if !(gq >= -VIOLATION_TOL) {
            out.push((if gq.is_finite() { -gq } else { f64::INFINITY }, cx("nonnegative", gq, 0.0)));
        }
        let dist: f64 = p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum();
        let limit = if dist >= 1e-3 { gp } else { gp + VIOLATION_TOL };
        if !(gq < limit) && !(dist < 1e-3 && gq <= limit) {
            out.push((gq - gp, cx("maximized only at q = p", gq, gp)));
        }
        out
    });
    CheckReport::collect(&format!("axioms[{}]", g.label()), trials, found)
}

/// Results of [`check_mdr`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MdrReport {
    pub monotone: CheckReport,
    pub submodular: CheckReport,
    pub coordinatewise: CheckReport,
}

impl MdrReport {
    pub fn mdr(&self) -> bool {
        self.monotone.passed() && self.submodular.passed()
    }

    pub fn smdr(&self) -> bool {
        self.mdr() && self.coordinatewise.passed()
    }
}

/// Samples nested `R ⊆ T` and `e ∉ T` over random instances of `shape` and
/// checks monotonicity and diminishing returns of `F_G`; separately probes
/// `G(p, q + δ·1_x) ≥ G(p, q)` by finite differences.
pub fn check_mdr(g: &dyn Overlap, shape: &GeneratorParams, trials: usize, seed: u64) -> Result<MdrReport> {
    let found = per_trial(trials, |t| -> Result<[Vec<(f64, Counterexample)>; 3]> {
        let mut rng = trial_rng(seed, t);
        let inst = random_instance(&mut rng, shape)?;
        g.check_target(inst.target_dense())?;
        let f = EarliestPosition { measure: g, target: inst.target_dense(), weights: inst.weights(), rows: inst.item_rows() };
        let n = f.items() * f.slots();
        let density = rng.random::<f64>();
        let mut t_set: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < density).collect();
        let e = rng.random_range(0..n);
        t_set[e] = false;
        let r_set: Vec<bool> = t_set.iter().map(|&m| m && rng.random::<bool>()).collect();
        let with = |s: &[bool]| {
            let mut s = s.to_vec();
            s[e] = true;
            s
        };
        let (fr, ft) = (f.value(&r_set), f.value(&t_set));
        let (fre, fte) = (f.value(&with(&r_set)), f.value(&with(&t_set)));
        let m = Matroid::laminar(f.items(), f.slots());
        let elems = |s: &[bool]| (0..n).filter(|&x| s[x]).collect::<Vec<_>>();
        let cx = |property: &str, lhs: f64, rhs: f64| Counterexample {
            property: property.into(),
            detail: format!("R = {}, T = {}, e = {:?} (items 0-based, slots 1-based)", m.to_set(&elems(&r_set)), m.to_set(&elems(&t_set)), {
                let (i, j) = m.pair(e);
                (i, j + 1)
            }),
            lhs,
            rhs,
            instance: Some(InstanceFile::from_instance(&inst)),
        };
        let mut mono = Vec::new();
        if !(fre >= fr - VIOLATION_TOL) {
            mono.push((fr - fre, cx("F(R + e) >= F(R)", fre, fr)));
        }
        if !(ft >= fr - VIOLATION_TOL) {
            mono.push((fr - ft, cx("F(T) >= F(R)", ft, fr)));
        }
        let mut sub = Vec::new();
        let (lhs, rhs) = (fre - fr, fte - ft);
        if !(lhs >= rhs - VIOLATION_TOL) {
            sub.push((rhs - lhs, cx("F(R + e) - F(R) >= F(T + e) - F(T)", lhs, rhs)));
        }

        let p = inst.target_dense();
        let delta = 1e-3 + rng.random::<f64>() * 0.1;
        let q = random_sub(&mut rng, p.len(), 1.0 - delta);
        let x = rng.random_range(0..p.len());
        let mut q2 = q.clone();
        q2[x] += delta;
        let (before, after) = (g.overlap(p, &q), g.overlap(p, &q2));
        let mut coord = Vec::new();
        if !(after >= before - VIOLATION_TOL) {
            coord.push((
                before - after,
                Counterexample {
                    property: "G(p, q + delta e_x) >= G(p, q)".into(),
                    detail: format!("p = {}, q = {}, x = {x}, delta = {delta}", vec_json(p), vec_json(&q)),
                    lhs: after,
                    rhs: before,
                    instance: None,
                },
            ));
        }
        Ok([mono, sub, coord])
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut split: [Vec<Vec<(f64, Counterexample)>>; 3] = Default::default();
    for [a, b, c] in found {
        split[0].push(a);
        split[1].push(b);
        split[2].push(c);
    }
    let [a, b, c] = split;
    let label = g.label();
    Ok(MdrReport {
        monotone: CheckReport::collect(&format!("monotone[{label}]"), trials, a),
        submodular: CheckReport::collect(&format!("submodular[{label}]"), trials, b),
        coordinatewise: CheckReport::collect(&format!("coordinatewise[{label}]"), trials, c),
    })
}

fn ordered_trial<F: Fn(&[usize]) -> f64>(f: &F, universe: usize, k: usize, rng: &mut impl Rng) -> Option<(f64, String, f64, f64)> {
    let s: Vec<usize> = (0..k).map(|_| rng.random_range(0..universe)).collect();
    let i = rng.random_range(0..k);
    let bar = rng.random_range(0..universe);
    let lhs = f(&s[..=i]) - f(&s[..i]);
    let mut swapped = s.clone();
    swapped[i] = bar;
    let rhs = f(&s) - f(&swapped);
    (!(lhs >= rhs - VIOLATION_TOL)).then(|| (rhs - lhs, format!("s = {s:?}, i = {}, replacement = {bar}", i + 1), lhs, rhs))
}

const ORDERED: &str = "f(s_1..s_i) - f(s_1..s_{i-1}) >= f(s) - f(s with s_i replaced)";

/// Samples lists `s` (repeats allowed), a position `i` and a replacement
/// element, and checks the ordered-submodular inequality.
pub fn check_ordered_submodular<F>(f: F, universe: usize, k: usize, trials: usize, seed: u64) -> Result<CheckReport>
where
    F: Fn(&[usize]) -> f64 + Sync + Send,
{
    if universe == 0 || k == 0 {
        return Err(Error::ParameterOutOfRange("universe and k must be positive".into()));
    }
    let found = per_trial(trials, |t| {
        let mut rng = trial_rng(seed, t);
        ordered_trial(&f, universe, k, &mut rng)
            .map(|(amount, detail, lhs, rhs)| {
                (amount, Counterexample { property: ORDERED.into(), detail, lhs, rhs, instance: None })
            })
            .into_iter()
            .collect()
    });
    Ok(CheckReport::collect("ordered-submodular", trials, found))
}

/// [`check_ordered_submodular`] on `G(π)` over a fresh random instance per
/// trial (default universe, repeats allowed).
pub fn check_ordered_submodular_measure(g: &dyn Overlap, shape: &GeneratorParams, trials: usize, seed: u64) -> Result<CheckReport> {
    let found = per_trial(trials, |t| -> Result<Vec<(f64, Counterexample)>> {
        let mut rng = trial_rng(seed, t);
        let inst = random_instance(&mut rng, shape)?;
        g.check_target(inst.target_dense())?;
        let universe = inst.default_universe();
        let genres = inst.genres().len();
        let f = |s: &[usize]| {
            let mut q = vec![0.0; genres];
            induced_dense(inst.weights(), &universe.rows, s, &mut q);
            g.overlap(inst.target_dense(), &q)
        };
        Ok(ordered_trial(&f, universe.len(), inst.k(), &mut rng)
            .map(|(amount, detail, lhs, rhs)| {
                let instance = Some(InstanceFile::from_instance(&inst));
                (amount, Counterexample { property: ORDERED.into(), detail, lhs, rhs, instance })
            })
            .into_iter()
            .collect())
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::collect(&format!("ordered-submodular[{}]", g.label()), trials, found))
}

/// Random laminar bases mapped through [`set_to_sequence`]: checks
/// `G(π) ≥ F_G(R) − 1e-12` and that every item of `R` lands no later than its
/// earliest slot.
pub fn check_set_to_sequence(g: &OverlapMeasure, shape: &GeneratorParams, trials: usize, seed: u64) -> Result<CheckReport> {
    let found = per_trial(trials, |t| -> Result<Vec<(f64, Counterexample)>> {
        let mut rng = trial_rng(seed, t);
        let inst = random_instance(&mut rng, shape)?;
        let (items, k) = (inst.items().len(), inst.k());
        let m = Matroid::laminar(items, k);
        let weights: Vec<f64> = (0..m.ground_size()).map(|_| rng.random::<f64>()).collect();
        let set = m.to_set(&m.max_weight_basis(&weights, None));
        let pi = set_to_sequence(&set, &inst)?;
        let fg = crate::objective::fg_set(g, &set, &inst)?;
        let value = seq_objective(g, &pi, &inst)?;
        let mut out = Vec::new();
        let cx = |property: &str, lhs: f64, rhs: f64| Counterexample {
            property: property.into(),
            detail: format!("R = {set}, pi = {:?}", pi.0),
            lhs,
            rhs,
            instance: Some(InstanceFile::from_instance(&inst)),
        };
        if !(value >= fg - 1e-12) {
            out.push((fg - value, cx("G(pi) >= F_G(R)", value, fg)));
        }
        for (i, slot) in set.earliest_slots(items).into_iter().enumerate() {
            if let Some(l) = slot {
                let pos = pi.iter().position(|&x| x == i);
                if pos.is_none_or(|p| p > l) {
                    let p = pos.map_or(f64::INFINITY, |p| p as f64);
                    out.push((p - l as f64, cx("position of i <= earliest slot of i", p, l as f64)));
                }
            }
        }
        Ok(out)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::collect(&format!("set-to-sequence[{g}]"), trials, found))
}

/// Exhaustive check that the best independent set under `F_G` is at least
/// the best repeat-free list, on one instance.
pub fn relaxation_dominates(g: &OverlapMeasure, inst: &Instance) -> Result<(f64, f64)> {
    let (items, k) = (inst.items().len(), inst.k());
    let m = Matroid::laminar(items, k);
    let n = m.ground_size();
    if n > 20 {
        return Err(Error::SearchSpaceTooLarge { size: 2f64.powi(n as i32), limit: 2f64.powi(20) });
    }
    g.check_target(inst.target_dense())?;
    let f = EarliestPosition { measure: g, target: inst.target_dense(), weights: inst.weights(), rows: inst.item_rows() };
    let mut best_set = f64::NEG_INFINITY;
    let mut member = vec![false; n];
    for mask in 0u32..(1 << n) {
        let mut set = ItemPositionSet::new();
        for (e, b) in member.iter_mut().enumerate() {
            *b = mask >> e & 1 == 1;
            if *b {
                let (i, j) = m.pair(e);
                set.insert(i, j);
            }
        }
        if m.is_independent(&set) {
            best_set = best_set.max(f.value(&member));
        }
    }
    let best_list = exhaustive_opt(inst, g, false)?.1;
    Ok((best_set, best_list))
}

/// One instance's contribution to a [`RatioReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSample {
    pub index: usize,
    pub value: f64,
    pub optimum: f64,
    pub ratio: f64,
    pub sequence: Vec<String>,
    pub optimal_sequence: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstCase {
    pub instance: InstanceFile,
    pub sample: RatioSample,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub algorithm: String,
    pub measure: String,
    pub instances: usize,
    pub min_ratio: f64,
    pub median_ratio: f64,
    pub mean_ratio: f64,
    pub worst_instance: Option<WorstCase>,
}

/// Whether the exhaustive baseline for `solver` may repeat elements.
pub fn baseline_allows_repeats(solver: &Solver) -> bool {
    match solver {
        Solver::Greedy { allow_repeats, .. } | Solver::Exhaustive { allow_repeats, .. } => *allow_repeats,
        Solver::DiscreteGreedy | Solver::WithRepeats { .. } => true,
        Solver::Distributional { .. } => false,
    }
}

fn with_seed(solver: &Solver, seed: u64) -> Solver {
    match solver {
        Solver::Distributional { measure, params } => {
            Solver::Distributional { measure: measure.clone(), params: crate::matroid::ContinuousParams { seed, ..*params } }
        }
        Solver::WithRepeats { measure, params } => {
            Solver::WithRepeats { measure: measure.clone(), params: crate::matroid::ContinuousParams { seed, ..*params } }
        }
        other => other.clone(),
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Ratio of `solver`'s value to the exhaustive optimum over `n` generated
/// instances. Randomized solvers use the median value over `seeds` runs
/// (seeds `base, base + 1, ...`).
pub fn ratio_report(solver: &Solver, params: &GeneratorParams, n: usize, seed: u64, seeds: usize) -> Result<RatioReport> {
    let instances = crate::repro::generate_instances(params, seed, n)?;
    let measure = solver.measure();
    let repeats = baseline_allows_repeats(solver);
    let randomized = matches!(solver, Solver::Distributional { .. } | Solver::WithRepeats { .. });
    let base_seed = match solver {
        Solver::Distributional { params, .. } | Solver::WithRepeats { params, .. } => params.seed,
        _ => 0,
    };
    let samples = per_trial(instances.len(), |index| -> Result<RatioSample> {
        let inst = &instances[index];
        let (opt_seq, optimum) = exhaustive_opt(inst, &measure, repeats)?;
        let runs = if randomized { seeds.max(1) } else { 1 };
        let mut outcomes = (0..runs)
            .map(|s| run(inst, &with_seed(solver, base_seed.wrapping_add(s as u64))))
            .collect::<Result<Vec<_>>>()?;
        outcomes.sort_by(|a, b| a.value.total_cmp(&b.value));
        let mid = &outcomes[(outcomes.len() - 1) / 2];
        let values: Vec<f64> = outcomes.iter().map(|o| o.value).collect();
        let value = median(&values);
        let labels = inst.default_universe();
        Ok(RatioSample {
            index,
            value,
            optimum,
            ratio: value / optimum,
            sequence: labels.labels(&mid.sequence),
            optimal_sequence: labels.labels(&opt_seq),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut ratios: Vec<f64> = samples.iter().map(|s| s.ratio).collect();
    ratios.sort_by(f64::total_cmp);
    let worst = samples.iter().min_by(|a, b| a.ratio.total_cmp(&b.ratio).then(a.index.cmp(&b.index)));
    Ok(RatioReport {
        algorithm: solver.name().to_string(),
        measure: measure.to_string(),
        instances: samples.len(),
        min_ratio: ratios.first().copied().unwrap_or(f64::NAN),
        median_ratio: median(&ratios),
        mean_ratio: ratios.iter().sum::<f64>() / ratios.len() as f64,
        worst_instance: worst.map(|s| WorstCase { instance: InstanceFile::from_instance(&instances[s.index]), sample: s.clone() }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::two_genre_example;
    use crate::repro::KlMmrPseudo;

    #[test]
    fn two_genre_optimum() {
        let inst = two_genre_example();
        let (s, v) = exhaustive_opt(&inst, &OverlapMeasure::HellingerSquared, false).unwrap();
        // i1 i3 i4 induces exactly the target.
        assert_eq!(inst.default_universe().labels(&s), vec!["i1", "i3", "i4"]);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generic_and_incremental_search_agree() {
        let inst = two_genre_example();
        let g = OverlapMeasure::power(0.3).unwrap();
        for repeats in [false, true] {
            let a = exhaustive_opt(&inst, &g, repeats).unwrap();
            let b = exhaustive_search(|s| seq_objective(&g, s, &inst).unwrap(), 4, 3, repeats).unwrap();
            assert_eq!(a.0, b.0);
            assert!((a.1 - b.1).abs() < 1e-12);
        }
    }

    #[test]
    fn ties_pick_lexicographically_smallest() {
        let (s, v) = exhaustive_search(|_| 1.0, 3, 2, false).unwrap();
        assert_eq!(s.0, vec![0, 1]);
        assert_eq!(v, 1.0);
    }

    #[test]
    fn search_limit_enforced() {
        assert!(matches!(exhaustive_search(|_| 0.0, 10, 8, true), Err(Error::SearchSpaceTooLarge { .. })));
    }

    #[test]
    fn kl_pseudo_measure_fails_axioms() {
        let r = check_overlap_axioms(&KlMmrPseudo, 200, 1);
        assert!(!r.passed());
        assert!(r.counterexample.unwrap().lhs < 0.0);
    }

    #[test]
    fn hellinger_passes_axioms_and_mdr() {
        let g = OverlapMeasure::HellingerSquared;
        assert!(check_overlap_axioms(&g, 300, 2).passed());
        let m = check_mdr(&g, &GeneratorParams::distributional(4, 4, 3), 300, 3).unwrap();
        assert!(m.smdr(), "{m:?}");
    }

    #[test]
    fn checks_are_deterministic() {
        let a = check_overlap_axioms(&KlMmrPseudo, 100, 5);
        let b = check_overlap_axioms(&KlMmrPseudo, 100, 5);
        assert_eq!(a, b);
    }
}
