//! Competing constructions: uniform sampling, sensitivity sampling and the
//! farthest-point MEB coreset.

use rand::distributions::{Distribution, WeightedIndex};

use crate::clustering::{k_clustering, nearest, ClusteringOptions, Exponent};
use crate::coreset::{Coreset, DrawCollector, Provenance};
use crate::data::{dist2, WeightedPointSet, WeightedPoints};
use crate::error::{CoresetError, Result};
use crate::problems::{meb_cost, meb_solve};
use crate::seed::rng_from_seed;

fn check(set: &WeightedPointSet, m: usize, min: usize) -> Result<()> {
    if set.is_empty() {
        return Err(CoresetError::EmptyDataset);
    }
    if m < min {
        return Err(CoresetError::Validation(format!(
            "coreset size must be at least {min}, got {m}"
        )));
    }
    Ok(())
}

fn collect(set: &WeightedPointSet, draws: &DrawCollector, provenance: Provenance) -> Coreset {
    let mut coords = Vec::new();
    let mut weights = Vec::new();
    for (i, w) in draws.entries() {
        coords.extend_from_slice(set.point(i));
        weights.push(w);
    }
    Coreset::new(set.dim(), coords, weights, provenance).expect("consistent dimensions")
}

/// Sampling with probabilities `q_p` and per-draw weight `w_p / (m q_p)`.
fn importance_sample(
    set: &WeightedPointSet,
    m: usize,
    q: &[f64],
    seed: u64,
    provenance: Provenance,
) -> Result<Coreset> {
    let total: f64 = q.iter().sum();
    let pick = WeightedIndex::new(q).map_err(|e| CoresetError::Validation(e.to_string()))?;
    let mut rng = rng_from_seed(seed);
    let mut draws = DrawCollector::default();
    for _ in 0..m {
        let i = pick.sample(&mut rng);
        draws.add(i, set.weight(i) * total / (m as f64 * q[i]));
    }
    Ok(collect(set, &draws, provenance))
}

/// `m` i.i.d. draws with probability `w_p / W`, each weighted `W / m`.
pub fn uniform_sample(set: &WeightedPointSet, m: usize, seed: u64) -> Result<Coreset> {
    check(set, m, 1)?;
    let total = set.total_weight();
    let pick =
        WeightedIndex::new(set.weights()).map_err(|e| CoresetError::Validation(e.to_string()))?;
    let mut rng = rng_from_seed(seed);
    let mut draws = DrawCollector::default();
    for _ in 0..m {
        draws.add(pick.sample(&mut rng), total / m as f64);
    }
    Ok(collect(
        set,
        &draws,
        Provenance::new("uniform", Some(seed)).with("m", m),
    ))
}

/// Sampling probabilities `s(p) = w_p d(p, B)^2 / c(P, B) + w_p / W(cell(p))`
/// for a k-means solution `B`, normalized. Both terms are standard
/// sensitivity upper bounds.
pub fn sensitivities(set: &WeightedPointSet, centers: &[Vec<f64>]) -> Vec<f64> {
    let cells: Vec<(usize, f64)> = set.iter().map(|p| nearest(p.coords, centers)).collect();
    let mut cell_weight = vec![0.0; centers.len()];
    let mut cost = 0.0;
    for (i, &(b, d2)) in cells.iter().enumerate() {
        cell_weight[b] += set.weight(i);
        cost += set.weight(i) * d2;
    }
    let mut s: Vec<f64> = cells
        .iter()
        .enumerate()
        .map(|(i, &(b, d2))| {
            let w = set.weight(i);
            let spread = if cost > 0.0 { w * d2 / cost } else { 0.0 };
            spread + w / cell_weight[b]
        })
        .collect();
    let total: f64 = s.iter().sum();
    s.iter_mut().for_each(|x| *x /= total);
    s
}

/// Importance sampling by k-means sensitivities.
pub fn sensitivity_sample(
    set: &WeightedPointSet,
    m: usize,
    k: usize,
    seed: u64,
    opts: &ClusteringOptions,
) -> Result<Coreset> {
    check(set, m, 1)?;
    if k == 0 {
        return Err(CoresetError::InvalidK { k, n: set.len() });
    }
    let bicriteria = k_clustering(set, k.min(set.len()), Exponent::Means, seed, opts)?;
    let q = sensitivities(set, &bicriteria.centers);
    importance_sample(
        set,
        m,
        &q,
        crate::seed::derive_seed(seed, "sensitivity", 0),
        Provenance::new("sensitivity", Some(seed))
            .with("m", m)
            .with("k", k),
    )
}

/// Farthest-point MEB coreset: starting from the point farthest from a
/// random point, move the center estimate a `1/(t+1)` fraction towards the
/// point farthest from it and add the farthest point not yet selected.
/// Stops at `m` distinct points. Every point is weighted `W / |S|`.
pub fn farthest_point(set: &WeightedPointSet, m: usize, seed: u64) -> Result<Coreset> {
    check(set, m, 2)?;
    let n = set.len();
    let target = m.min(set.distinct_count());
    let farthest = |c: &[f64], skip: &dyn Fn(usize) -> bool| {
        (0..n)
            .filter(|&i| !skip(i))
            .map(|i| (i, dist2(set.point(i), c)))
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
            .0
    };
    let start = rand::Rng::gen_range(&mut rng_from_seed(seed), 0..n);
    let first = farthest(set.point(start), &|_| false);
    let mut chosen = vec![first];
    let mut center = set.point(first).to_vec();
    let mut t = 1usize;
    while chosen.len() < target {
        let p = farthest(&center, &|_| false);
        let step = 1.0 / (t as f64 + 1.0);
        center
            .iter_mut()
            .zip(set.point(p))
            .for_each(|(c, x)| *c += (x - *c) * step);
        let taken = |i: usize| chosen.iter().any(|&c| set.point(c) == set.point(i));
        let q = farthest(&center, &taken);
        chosen.push(q);
        t += 1;
    }
    let w = set.total_weight() / chosen.len() as f64;
    let mut draws = DrawCollector::default();
    chosen.iter().for_each(|&i| draws.add(i, w));
    let mut coreset = collect(
        set,
        &draws,
        Provenance::new("farthest", Some(seed)).with("m", m),
    );
    let cover = coverage_eps(set, &coreset)?;
    coreset.provenance = coreset.provenance.with("coverage_eps", cover);
    Ok(coreset)
}

/// Smallest `e` such that the coreset's enclosing ball expanded by `1 + e`
/// covers `set`.
pub fn coverage_eps(set: &WeightedPointSet, coreset: &Coreset) -> Result<f64> {
    let ball = meb_solve(coreset, 1e-3)?;
    let reach = meb_cost(set, &ball.center);
    Ok(if ball.radius > 0.0 {
        (reach / ball.radius - 1.0).max(0.0)
    } else if reach == 0.0 {
        0.0
    } else {
        f64::INFINITY
    })
}
