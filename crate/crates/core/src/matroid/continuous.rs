//! Multilinear extension estimates and the continuous greedy ascent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FractionalPoint, Matroid};
use crate::measure::Overlap;
use crate::objective::ItemPositionSet;

/// A set function over `items × slots`, evaluated on dense membership masks
/// (index `item * slots + slot`).
pub trait SetFunction: Sync {
    fn items(&self) -> usize;
    fn slots(&self) -> usize;
    fn value(&self, member: &[bool]) -> f64;

    /// `F(R ∪ {e}) − F(R \ {e})` for every element `e`: the partial derivative
    /// of the multilinear extension at a point whose sample is `R`.
    fn marginals(&self, member: &[bool], out: &mut [f64]) {
        let base = self.value(member);
        let mut m = member.to_vec();
        for e in 0..m.len() {
            m[e] = !m[e];
            let flipped = self.value(&m);
            m[e] = !m[e];
            out[e] = if m[e] { base - flipped } else { flipped - base };
        }
    }

    fn value_of(&self, set: &ItemPositionSet) -> f64 {
        let slots = self.slots();
        let mut m = vec![false; self.items() * slots];
        for (i, j) in set.iter() {
            m[i * slots + j] = true;
        }
        self.value(&m)
    }
}

/// `F_G`: each item counted once, at its earliest slot.
pub struct EarliestPosition<'a> {
    pub measure: &'a dyn Overlap,
    pub target: &'a [f64],
    pub weights: &'a [f64],
    pub rows: &'a [Vec<f64>],
}

impl EarliestPosition<'_> {
    fn earliest(&self, member: &[bool]) -> Vec<Option<usize>> {
        let k = self.weights.len();
        (0..self.rows.len()).map(|i| (0..k).find(|&j| member[i * k + j])).collect()
    }

    fn induced(&self, earliest: &[Option<usize>]) -> Vec<f64> {
        let mut q = vec![0.0; self.target.len()];
        for (row, slot) in self.rows.iter().zip(earliest) {
            if let Some(j) = slot {
                for (o, r) in q.iter_mut().zip(row) {
                    *o += self.weights[*j] * r;
                }
            }
        }
        q
    }
}

impl SetFunction for EarliestPosition<'_> {
    fn items(&self) -> usize {
        self.rows.len()
    }

    fn slots(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, member: &[bool]) -> f64 {
        let q = self.induced(&self.earliest(member));
        self.measure.overlap(self.target, &q)
    }

    fn marginals(&self, member: &[bool], out: &mut [f64]) {
        let k = self.weights.len();
        let earliest = self.earliest(member);
        let q = self.induced(&earliest);
        let mut lo = q.clone();
        let mut hi = q.clone();
        let weight = |slot: Option<usize>| slot.map_or(0.0, |j| self.weights[j]);
        for (i, row) in self.rows.iter().enumerate() {
            let first = earliest[i];
            let second = first.and_then(|l| (l + 1..k).find(|&j| member[i * k + j]));
            for j in 0..k {
                // Earliest slot of item i without and with the pair (i, j).
                let without = if first == Some(j) { second } else { first };
                let with = Some(without.map_or(j, |l| l.min(j)));
                let e = i * k + j;
                if with == without {
                    out[e] = 0.0;
                    continue;
                }
                let (dw, dwo) = (weight(with) - weight(first), weight(without) - weight(first));
                for (((h, l), &b), &r) in hi.iter_mut().zip(lo.iter_mut()).zip(&q).zip(row) {
                    *h = b + dw * r;
                    *l = b + dwo * r;
                }
                out[e] = self.measure.overlap(self.target, &hi) - self.measure.overlap(self.target, &lo);
            }
        }
    }
}

/// `F̂_G`: every pair counts.
pub struct EveryOccurrence<'a> {
    pub measure: &'a dyn Overlap,
    pub target: &'a [f64],
    pub weights: &'a [f64],
    pub rows: &'a [Vec<f64>],
}

impl EveryOccurrence<'_> {
    fn induced(&self, member: &[bool]) -> Vec<f64> {
        let k = self.weights.len();
        let mut q = vec![0.0; self.target.len()];
        for (e, _) in member.iter().enumerate().filter(|(_, &m)| m) {
            for (o, r) in q.iter_mut().zip(&self.rows[e / k]) {
                *o += self.weights[e % k] * r;
            }
        }
        q
    }
}

impl SetFunction for EveryOccurrence<'_> {
    fn items(&self) -> usize {
        self.rows.len()
    }

    fn slots(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, member: &[bool]) -> f64 {
        self.measure.overlap(self.target, &self.induced(member))
    }

    fn marginals(&self, member: &[bool], out: &mut [f64]) {
        let k = self.weights.len();
        let q = self.induced(member);
        let base = self.measure.overlap(self.target, &q);
        let mut shifted = q.clone();
        for (e, o) in out.iter_mut().enumerate() {
            let w = if member[e] { -self.weights[e % k] } else { self.weights[e % k] };
            for ((s, &b), &r) in shifted.iter_mut().zip(&q).zip(&self.rows[e / k]) {
                *s = b + w * r;
            }
            let flipped = self.measure.overlap(self.target, &shifted);
            *o = if member[e] { base - flipped } else { flipped - base };
        }
    }
}

/// Wraps a closure over membership masks.
pub struct FnSetFunction<F> {
    pub items: usize,
    pub slots: usize,
    pub f: F,
}

impl<F: Fn(&[bool]) -> f64 + Sync> SetFunction for FnSetFunction<F> {
    fn items(&self) -> usize {
        self.items
    }

    fn slots(&self) -> usize {
        self.slots
    }

    fn value(&self, member: &[bool]) -> f64 {
        (self.f)(member)
    }
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

fn sample_into(x: &[f64], rng: &mut impl Rng, member: &mut [bool]) {
    for (m, &p) in member.iter_mut().zip(x) {
        *m = p > 0.0 && rng.random::<f64>() < p;
    }
}

/// `E[F(R(x))]` where each pair enters `R(x)` independently with probability
/// `x_e`. Deterministic for a given seed.
pub fn multilinear_estimate(f: &dyn SetFunction, x: &FractionalPoint, samples: usize, seed: u64) -> Estimate {
    let samples = samples.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut member = vec![false; x.x.len()];
    // Welford updates keep a constant sample exactly equal to its mean.
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for t in 1..=samples {
        sample_into(&x.x, &mut rng, &mut member);
        let v = f.value(&member);
        let d = v - mean;
        mean += d / t as f64;
        m2 += d * (v - mean);
    }
    let n = samples as f64;
    let var = if samples > 1 { m2 / (n - 1.0) } else { 0.0 };
    Estimate { mean, std_err: (var / n).sqrt() }
}

/// Continuous greedy: `steps` moves of size `1/steps`, each toward the basis
/// maximizing the sampled gradient of the multilinear extension.
///
/// The returned point records its basis decomposition so rounding can merge
/// the bases directly.
pub fn continuous_greedy(f: &dyn SetFunction, m: &Matroid, steps: usize, samples: usize, seed: u64) -> FractionalPoint {
    let steps = steps.max(1);
    let samples = samples.max(1);
    let n = m.ground_size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut point = FractionalPoint::zeros(m.items, m.slots);
    let mut member = vec![false; n];
    let mut grad = vec![0.0; n];
    let mut buf = vec![0.0; n];
    let mut bases: Vec<(f64, Vec<usize>)> = Vec::new();
    let dt = 1.0 / steps as f64;
    for _ in 0..steps {
        grad.iter_mut().for_each(|g| *g = 0.0);
        for _ in 0..samples {
            sample_into(&point.x, &mut rng, &mut member);
            f.marginals(&member, &mut buf);
            grad.iter_mut().zip(&buf).for_each(|(g, b)| *g += b);
        }
        let basis = m.max_weight_basis(&grad, None);
        for &e in &basis {
            point.x[e] = (point.x[e] + dt).min(1.0);
        }
        match bases.iter_mut().find(|(_, b)| *b == basis) {
            Some((w, _)) => *w += dt,
            None => bases.push((dt, basis)),
        }
    }
    point.decomposition = Some(bases);
    point
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::two_genre_example;
    use crate::measure::OverlapMeasure;

    #[test]
    fn degenerate_points_are_exact() {
        let inst = two_genre_example();
        let g = OverlapMeasure::HellingerSquared;
        let f = EarliestPosition { measure: &g, target: inst.target_dense(), weights: inst.weights(), rows: inst.item_rows() };
        let zero = FractionalPoint::zeros(4, 3);
        assert_eq!(multilinear_estimate(&f, &zero, 50, 1).mean, f.value(&[false; 12]));
        let one = FractionalPoint::from_dense(4, 3, vec![1.0; 12]).unwrap();
        assert_eq!(multilinear_estimate(&f, &one, 50, 1).mean, f.value(&[true; 12]));
    }

    #[test]
    fn fast_marginals_match_brute_force() {
        let inst = two_genre_example();
        let g = OverlapMeasure::power(0.3).unwrap();
        let fg = EarliestPosition { measure: &g, target: inst.target_dense(), weights: inst.weights(), rows: inst.item_rows() };
        let hat = EveryOccurrence { measure: &g, target: inst.target_dense(), weights: inst.weights(), rows: inst.item_rows() };
        let member: Vec<bool> = (0..12).map(|e| e % 5 == 1).collect();
        for f in [&fg as &dyn SetFunction, &hat] {
            let mut fast = vec![0.0; 12];
            f.marginals(&member, &mut fast);
            let brute = FnSetFunction { items: 4, slots: 3, f: |m: &[bool]| f.value(m) };
            let mut slow = vec![0.0; 12];
            brute.marginals(&member, &mut slow);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn single_element_ground_set_fills_up() {
        let f = FnSetFunction { items: 1, slots: 1, f: |m: &[bool]| if m[0] { 1.0 } else { 0.0 } };
        let x = continuous_greedy(&f, &Matroid::laminar(1, 1), 20, 5, 3);
        assert!((x.get(0, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn modular_objective_concentrates_on_argmax() {
        // Per-pair weights; the exact LP optimum on a partition matroid is the
        // per-slot argmax.
        let w = [0.3, 0.9, 0.2, 0.5, 0.4, 0.1];
        let f = FnSetFunction {
            items: 3,
            slots: 2,
            f: |m: &[bool]| m.iter().zip(&w).filter(|(b, _)| **b).map(|(_, v)| v).sum(),
        };
        let m = Matroid::partition(3, 2);
        let x = continuous_greedy(&f, &m, 10, 4, 0);
        let argmax: Vec<usize> = (0..2)
            .map(|j| (0..3).max_by(|&a, &b| w[a * 2 + j].total_cmp(&w[b * 2 + j])).unwrap())
            .collect();
        assert_eq!(argmax, vec![2, 0]);
        for (j, &i) in argmax.iter().enumerate() {
            assert!((x.get(i, j) - 1.0).abs() < 1e-12);
        }
        assert!(x.polytope_excess(&m) <= 1e-9);
    }
}
