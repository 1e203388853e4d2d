//! Swap rounding: a point of the base polytope is written as a convex
//! combination of bases, which are then merged pairwise by random strong
//! exchanges. The output is a basis whose expected value under any submodular
//! function is at least the multilinear value of the point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FractionalPoint, Matroid};
use crate::error::{Error, Result};
use crate::objective::ItemPositionSet;

const TOL: f64 = 1e-9;
const POLYTOPE_TOL: f64 = 1e-6;

/// Raises coordinates in element order until no constraint has slack left.
/// The result lies in the base polytope and dominates `x`.
pub fn lift_to_base(m: &Matroid, x: &FractionalPoint) -> FractionalPoint {
    let constraints = m.constraints();
    let mut load: Vec<f64> = constraints.iter().map(|c| c.members.iter().map(|&e| x.x[e]).sum()).collect();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); m.ground_size()];
    for (ci, c) in constraints.iter().enumerate() {
        for &e in &c.members {
            containing[e].push(ci);
        }
    }
    let mut out = FractionalPoint { decomposition: None, ..x.clone() };
    for e in 0..m.ground_size() {
        let slack = containing[e]
            .iter()
            .map(|&ci| constraints[ci].capacity as f64 - load[ci])
            .fold(1.0 - out.x[e], f64::min)
            .max(0.0);
        out.x[e] += slack;
        for &ci in &containing[e] {
            load[ci] += slack;
        }
    }
    out
}

/// Writes a base-polytope point as `Σ λ_t · 1_{B_t}` with `Σ λ_t = 1`.
///
/// Each round picks a basis on the minimal face containing the current point
/// and removes as much of it as keeps the remainder in the polytope, which
/// makes at least one more coordinate or constraint tight.
pub fn decompose(m: &Matroid, z: &FractionalPoint) -> Result<Vec<(f64, Vec<usize>)>> {
    let excess = z.polytope_excess(m);
    if excess > POLYTOPE_TOL {
        return Err(Error::OutsidePolytope { excess });
    }
    let rank = m.rank() as f64;
    let total: f64 = z.x.iter().sum();
    if (total - rank).abs() > POLYTOPE_TOL {
        return Err(Error::NotABasis(format!("point has mass {total}, base polytope needs {rank}")));
    }
    let constraints = m.constraints();
    let mut z = z.x.clone();
    let mut remaining = 1.0;
    let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
    let max_rounds = m.ground_size() + constraints.len() + 2;
    for round in 0..max_rounds {
        let support: Vec<bool> = z.iter().map(|&v| v > TOL).collect();
        let tight: Vec<bool> = constraints
            .iter()
            .map(|c| c.capacity as f64 - c.members.iter().map(|&e| z[e]).sum::<f64>() <= TOL)
            .collect();
        let mut weights = vec![0.0; z.len()];
        for (c, _) in constraints.iter().zip(&tight).filter(|(_, t)| **t) {
            for &e in &c.members {
                weights[e] += 1.0;
            }
        }
        let bonus = constraints.len() as f64 + 1.0;
        for (w, &v) in weights.iter_mut().zip(&z) {
            if v >= 1.0 - TOL {
                *w += bonus;
            }
        }
        let basis = m.max_weight_basis(&weights, Some(&support));
        if basis.len() != m.rank() {
            return Err(Error::NotABasis("support of the point spans no basis".into()));
        }
        let mut in_b = vec![false; z.len()];
        basis.iter().for_each(|&e| in_b[e] = true);

        let mut lambda: f64 = 1.0;
        for (e, &v) in z.iter().enumerate() {
            lambda = lambda.min(if in_b[e] { v } else { 1.0 - v });
        }
        for c in &constraints {
            let used = c.members.iter().filter(|&&e| in_b[e]).count();
            if used < c.capacity {
                let load: f64 = c.members.iter().map(|&e| z[e]).sum();
                lambda = lambda.min((c.capacity as f64 - load) / (c.capacity - used) as f64);
            }
        }
        let lambda = lambda.clamp(0.0, 1.0);
        let last = lambda >= 1.0 - TOL || round + 1 == max_rounds;
        if last {
            push_basis(&mut out, remaining, basis);
            break;
        }
        if lambda > 0.0 {
            push_basis(&mut out, remaining * lambda, basis.clone());
            for (e, v) in z.iter_mut().enumerate() {
                let b = if in_b[e] { 1.0 } else { 0.0 };
                *v = ((*v - lambda * b) / (1.0 - lambda)).clamp(0.0, 1.0);
            }
            remaining *= 1.0 - lambda;
        } else {
            // Numerically degenerate face; snap the offending coordinates.
            for (e, v) in z.iter_mut().enumerate() {
                if in_b[e] && *v <= TOL {
                    *v = 0.0;
                }
                if !in_b[e] && *v >= 1.0 - TOL {
                    *v = 1.0;
                }
            }
        }
        if remaining <= 1e-15 {
            break;
        }
    }
    let sum: f64 = out.iter().map(|(l, _)| l).sum();
    if sum > 0.0 {
        out.iter_mut().for_each(|(l, _)| *l /= sum);
    }
    Ok(out)
}

fn push_basis(out: &mut Vec<(f64, Vec<usize>)>, weight: f64, basis: Vec<usize>) {
    match out.iter_mut().find(|(_, b)| *b == basis) {
        Some((w, _)) => *w += weight,
        None => out.push((weight, basis)),
    }
}

/// Rounds `x` to a basis of `m`.
///
/// Uses the basis decomposition recorded by continuous greedy when present;
/// otherwise lifts `x` to the base polytope and decomposes it. Integral points
/// on a basis come back unchanged.
pub fn swap_round(m: &Matroid, x: &FractionalPoint, seed: u64) -> Result<ItemPositionSet> {
    let excess = x.polytope_excess(m);
    if excess > POLYTOPE_TOL {
        return Err(Error::OutsidePolytope { excess });
    }
    let bases = match &x.decomposition {
        Some(d) if !d.is_empty() => d.clone(),
        _ => decompose(m, &lift_to_base(m, x))?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut iter = bases.into_iter().filter(|(w, _)| *w > 0.0);
    let Some((mut beta, mut merged)) = iter.next() else {
        return Ok(ItemPositionSet::new());
    };
    for (lambda, mut other) in iter {
        merge_bases(m, &mut merged, &mut other, beta, lambda, &mut rng);
        beta += lambda;
    }
    Ok(m.to_set(&merged))
}

fn merge_bases(m: &Matroid, b1: &mut [usize], b2: &mut [usize], w1: f64, w2: f64, rng: &mut impl Rng) {
    while let Some(&i) = b1.iter().find(|e| !b2.contains(e)) {
        let j = b2
            .iter()
            .copied()
            .filter(|e| !b1.contains(e))
            .find(|&j| exchange_ok(m, b1, i, j) && exchange_ok(m, b2, j, i))
            .expect("strong basis exchange always exists");
        if rng.random::<f64>() * (w1 + w2) < w1 {
            replace(b2, j, i);
        } else {
            replace(b1, i, j);
        }
    }
}

fn exchange_ok(m: &Matroid, basis: &[usize], out: usize, into: usize) -> bool {
    let swapped: Vec<usize> = basis.iter().map(|&e| if e == out { into } else { e }).collect();
    m.is_independent_elements(&swapped)
}

fn replace(basis: &mut [usize], out: usize, into: usize) {
    for e in basis.iter_mut() {
        if *e == out {
            *e = into;
        }
    }
    basis.sort_unstable();
}
