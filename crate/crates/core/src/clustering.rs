//! Weighted k-clustering: k-median (`z = 1`) and k-means (`z = 2`).
//!
//! The engine is a Lloyd iteration whose initial centers come from a
//! recursive doubling scheme:
//!
//! * `k = 1`: the optimal 1-center (weighted mean, or Weiszfeld 1-median).
//! * `2k`: cluster into `k`, 2-cluster every resulting cluster starting from
//!   its 1-center plus its most expensive point, and start from the union.
//! * odd `k`: the `(k - 1)`-clustering centers plus one point drawn
//!   uniformly from the data.
//!
//! Each Lloyd step can only lower the cost, so the final centers are local
//! 1-center optima of their clusters, the `2k` cost never exceeds the sum of
//! the per-cluster 2-clustering costs, and the 2-clustering cost never
//! exceeds the greedy `{mu, p*}` cost.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{dist, dist2, WeightedPointSet, WeightedPoints};
use crate::error::{CoresetError, Result};
use crate::seed::rng_from_seed;

/// The clustering exponent `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Exponent {
    /// `z = 1`, k-median.
    Median,
    /// `z = 2`, k-means.
    Means,
}

impl Exponent {
    pub fn value(self) -> u8 {
        match self {
            Exponent::Median => 1,
            Exponent::Means => 2,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }

    /// `dist^z` from a squared distance.
    #[inline]
    pub fn from_dist2(self, d2: f64) -> f64 {
        match self {
            Exponent::Median => d2.sqrt(),
            Exponent::Means => d2,
        }
    }

    /// `x^(1/z)`.
    pub fn root(self, x: f64) -> f64 {
        match self {
            Exponent::Median => x,
            Exponent::Means => x.sqrt(),
        }
    }

    pub fn pow(self, x: f64) -> f64 {
        match self {
            Exponent::Median => x,
            Exponent::Means => x * x,
        }
    }
}

impl TryFrom<u8> for Exponent {
    type Error = CoresetError;

    fn try_from(z: u8) -> Result<Self> {
        match z {
            1 => Ok(Exponent::Median),
            2 => Ok(Exponent::Means),
            other => Err(CoresetError::Config(format!(
                "z must be 1 or 2, got {other}"
            ))),
        }
    }
}

impl From<Exponent> for u8 {
    fn from(z: Exponent) -> u8 {
        z.value()
    }
}

/// Index of the nearest center and the squared distance to it. Ties go to the
/// lowest center index.
#[inline]
pub fn nearest(p: &[f64], centers: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, c) in centers.iter().enumerate() {
        let d = dist2(p, c);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

/// `c(P, Q) = sum_p w_p (min_q dist(p, q))^z`. Signed weights are summed as given.
pub fn clustering_cost<S: WeightedPoints + ?Sized>(
    set: &S,
    centers: &[Vec<f64>],
    z: Exponent,
) -> Result<f64> {
    if centers.is_empty() {
        return Err(CoresetError::Validation("center set is empty".into()));
    }
    for c in centers {
        if c.len() != set.dim() {
            return Err(CoresetError::DimensionMismatch {
                expected: set.dim(),
                got: c.len(),
            });
        }
    }
    Ok((0..set.len())
        .map(|i| set.weight(i) * z.from_dist2(nearest(set.point(i), centers).1))
        .sum())
}

/// An optimal (or tolerance-optimal) 1-clustering center and its cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneClusterCenter {
    pub center: Vec<f64>,
    pub cost: f64,
}

pub fn one_mean(set: &WeightedPointSet) -> Result<OneClusterCenter> {
    if set.is_empty() {
        return Err(CoresetError::EmptyDataset);
    }
    let center = weighted_mean(set.iter().map(|p| (p.coords, p.weight)), set.dim());
    let cost = clustering_cost(set, std::slice::from_ref(&center), Exponent::Means)?;
    Ok(OneClusterCenter { center, cost })
}

/// Geometric median by Weiszfeld iteration with the Vardi-Zhang data-point
/// correction.
pub fn one_median(set: &WeightedPointSet, tol: f64) -> Result<OneClusterCenter> {
    if set.is_empty() {
        return Err(CoresetError::EmptyDataset);
    }
    let pts: Vec<(&[f64], f64)> = set.iter().map(|p| (p.coords, p.weight)).collect();
    let start = weighted_mean(pts.iter().copied(), set.dim());
    let center = weiszfeld(&pts, start, tol);
    let cost = clustering_cost(set, std::slice::from_ref(&center), Exponent::Median)?;
    Ok(OneClusterCenter { center, cost })
}

/// The optimal 1-center for exponent `z`.
pub fn one_center(set: &WeightedPointSet, z: Exponent, tol: f64) -> Result<OneClusterCenter> {
    match z {
        Exponent::Means => one_mean(set),
        Exponent::Median => one_median(set, tol),
    }
}

/// Index of `argmax_p w_p dist(p, center)^z` (lowest index on ties).
pub fn most_expensive_point(set: &WeightedPointSet, center: &[f64], z: Exponent) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, p) in set.iter().enumerate() {
        let c = p.weight * z.from_dist2(dist2(p.coords, center));
        if c > best.1 {
            best = (i, c);
        }
    }
    best.0
}

fn weighted_mean<'a>(pts: impl Iterator<Item = (&'a [f64], f64)>, dim: usize) -> Vec<f64> {
    let mut acc = vec![0.0; dim];
    let mut total = 0.0;
    for (p, w) in pts {
        total += w;
        for (a, x) in acc.iter_mut().zip(p) {
            *a += w * x;
        }
    }
    acc.iter_mut().for_each(|a| *a /= total);
    acc
}

fn median_cost(pts: &[(&[f64], f64)], y: &[f64]) -> f64 {
    pts.iter().map(|(p, w)| w * dist(p, y)).sum()
}

const WEISZFELD_MAX_ITER: usize = 10_000;

/// Weiszfeld iteration from `start`. Steps that would raise the objective
/// are rejected, so the returned center is never worse than `start`.
fn weiszfeld(pts: &[(&[f64], f64)], start: Vec<f64>, tol: f64) -> Vec<f64> {
    let dim = start.len();
    let total: f64 = pts.iter().map(|(_, w)| w).sum();
    let mut y = start;
    let mut cost = median_cost(pts, &y);
    let mut num = vec![0.0; dim];
    let mut grad = vec![0.0; dim];
    for _ in 0..WEISZFELD_MAX_ITER {
        num.iter_mut().for_each(|v| *v = 0.0);
        grad.iter_mut().for_each(|v| *v = 0.0);
        let mut den = 0.0;
        let mut eta = 0.0;
        for (p, w) in pts {
            let d = dist(p, &y);
            if d <= 1e-14 * (1.0 + norm(p)) {
                eta += w;
            } else {
                den += w / d;
                for j in 0..dim {
                    num[j] += w * p[j] / d;
                    grad[j] += w * (p[j] - y[j]) / d;
                }
            }
        }
        if den == 0.0 {
            break;
        }
        let r = norm(&grad);
        if r <= eta || r <= tol * total {
            break;
        }
        let beta = if eta > 0.0 { eta / r } else { 0.0 };
        let next: Vec<f64> = (0..dim)
            .map(|j| (1.0 - beta) * num[j] / den + beta * y[j])
            .collect();
        let next_cost = median_cost(pts, &next);
        if next_cost > cost {
            break;
        }
        let step = dist(&next, &y);
        y = next;
        cost = next_cost;
        if step <= tol * (1.0 + norm(&y)) {
            break;
        }
    }
    snap_to_optimal_data_point(pts, y, cost)
}

/// Weiszfeld crawls toward optima sitting on a data point; test the nearest
/// data point's subgradient condition and jump there when it holds.
fn snap_to_optimal_data_point(pts: &[(&[f64], f64)], y: Vec<f64>, cost: f64) -> Vec<f64> {
    let Some((q, _)) = pts
        .iter()
        .min_by(|a, b| dist2(a.0, &y).total_cmp(&dist2(b.0, &y)))
    else {
        return y;
    };
    let dim = y.len();
    let mut grad = vec![0.0; dim];
    let mut eta = 0.0;
    for (p, w) in pts {
        let d = dist(p, q);
        if d == 0.0 {
            eta += w;
        } else {
            for j in 0..dim {
                grad[j] += w * (p[j] - q[j]) / d;
            }
        }
    }
    if norm(&grad) <= eta && median_cost(pts, q) <= cost {
        q.to_vec()
    } else {
        y
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Knobs of the Lloyd engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusteringOptions {
    pub max_iter: usize,
    /// Weiszfeld tolerance for the `z = 1` recentering step.
    pub median_tol: f64,
}

impl Default for ClusteringOptions {
    fn default() -> Self {
        Self {
            max_iter: 300,
            median_tol: 1e-10,
        }
    }
}

/// Centers, induced partition and cost of a k-clustering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringResult {
    pub centers: Vec<Vec<f64>>,
    /// Center index of every point.
    pub assignment: Vec<usize>,
    pub cost: f64,
    pub z: Exponent,
    pub k: usize,
    pub iterations: usize,
    /// False when the iteration cap was hit before the assignment settled.
    pub converged: bool,
    pub seed: Option<u64>,
    /// Cost after initialization and after every Lloyd step.
    pub cost_trace: Vec<f64>,
}

impl ClusteringResult {
    /// Point indices of every cluster.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.centers.len()];
        for (i, &c) in self.assignment.iter().enumerate() {
            out[c].push(i);
        }
        out
    }

    /// Total input weight of every cluster.
    pub fn cluster_weights(&self, set: &WeightedPointSet) -> Vec<f64> {
        let mut out = vec![0.0; self.centers.len()];
        for (i, &c) in self.assignment.iter().enumerate() {
            out[c] += set.weight(i);
        }
        out
    }

    /// `max_i max_{p in P_i} dist(p, q_i)`.
    pub fn max_point_center_distance(&self, set: &WeightedPointSet) -> f64 {
        self.assignment
            .iter()
            .enumerate()
            .map(|(i, &c)| dist(set.point(i), &self.centers[c]))
            .fold(0.0, f64::max)
    }
}

fn assign(set: &WeightedPointSet, centers: &[Vec<f64>]) -> (Vec<usize>, Vec<f64>) {
    set.iter().map(|p| nearest(p.coords, centers)).unzip()
}

fn cost_of(set: &WeightedPointSet, d2: &[f64], z: Exponent) -> f64 {
    d2.iter()
        .zip(set.weights())
        .map(|(&d, &w)| w * z.from_dist2(d))
        .sum()
}

/// Lloyd iteration from the given initial centers.
fn lloyd(
    set: &WeightedPointSet,
    mut centers: Vec<Vec<f64>>,
    z: Exponent,
    opts: &ClusteringOptions,
) -> ClusteringResult {
    let k = centers.len();
    let (mut assignment, mut d2) = assign(set, &centers);
    let mut trace = vec![cost_of(set, &d2, z)];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        reseed_empty(set, &mut centers, &mut assignment, &mut d2, z);
        recenter(set, &mut centers, &assignment, z, opts);
        let (next, next_d2) = assign(set, &centers);
        d2 = next_d2;
        trace.push(cost_of(set, &d2, z));
        if next == assignment {
            converged = true;
            break;
        }
        assignment = next;
    }
    ClusteringResult {
        cost: cost_of(set, &d2, z),
        centers,
        assignment,
        z,
        k,
        iterations,
        converged,
        seed: None,
        cost_trace: trace,
    }
}

/// Move each center that owns no point onto the currently most expensive
/// point. Centers stay put when every point already costs zero.
fn reseed_empty(
    set: &WeightedPointSet,
    centers: &mut [Vec<f64>],
    assignment: &mut Vec<usize>,
    d2: &mut Vec<f64>,
    z: Exponent,
) {
    for c in 0..centers.len() {
        if assignment.contains(&c) {
            continue;
        }
        let mut best = (0, 0.0);
        for (i, &d) in d2.iter().enumerate() {
            let cost = set.weight(i) * z.from_dist2(d);
            if cost > best.1 {
                best = (i, cost);
            }
        }
        if best.1 <= 0.0 {
            return;
        }
        centers[c] = set.point(best.0).to_vec();
        let (a, d) = assign(set, centers);
        *assignment = a;
        *d2 = d;
    }
}

fn recenter(
    set: &WeightedPointSet,
    centers: &mut [Vec<f64>],
    assignment: &[usize],
    z: Exponent,
    opts: &ClusteringOptions,
) {
    let mut members: Vec<Vec<(&[f64], f64)>> = vec![Vec::new(); centers.len()];
    for (i, &c) in assignment.iter().enumerate() {
        members[c].push((set.point(i), set.weight(i)));
    }
    for (center, pts) in centers.iter_mut().zip(&members) {
        if pts.is_empty() {
            continue;
        }
        *center = match z {
            Exponent::Means => weighted_mean(pts.iter().copied(), set.dim()),
            Exponent::Median => weiszfeld(pts, std::mem::take(center), opts.median_tol),
        };
    }
}

/// Clustering whose centers are the distinct points themselves, padded with
/// copies of the first one up to `k` centers. Cost zero.
fn distinct_solution(set: &WeightedPointSet, k: usize, z: Exponent) -> ClusteringResult {
    let mut centers: Vec<Vec<f64>> = set
        .distinct_indices()
        .into_iter()
        .map(|i| set.point(i).to_vec())
        .collect();
    while centers.len() < k {
        centers.push(centers[0].clone());
    }
    let (assignment, d2) = assign(set, &centers);
    let cost = cost_of(set, &d2, z);
    ClusteringResult {
        centers,
        assignment,
        cost,
        z,
        k,
        iterations: 0,
        converged: true,
        seed: None,
        cost_trace: vec![cost],
    }
}

fn one_center_solution(
    set: &WeightedPointSet,
    z: Exponent,
    opts: &ClusteringOptions,
) -> ClusteringResult {
    let one = one_center(set, z, opts.median_tol).expect("nonempty set");
    ClusteringResult {
        centers: vec![one.center],
        assignment: vec![0; set.len()],
        cost: one.cost,
        z,
        k: 1,
        iterations: 0,
        converged: true,
        seed: None,
        cost_trace: vec![one.cost],
    }
}

/// 2-clustering started from the 1-center and the most expensive point.
/// Sets with at most two distinct points return those points.
pub fn two_clustering(
    set: &WeightedPointSet,
    z: Exponent,
    opts: &ClusteringOptions,
) -> ClusteringResult {
    if set.distinct_count() <= 2 {
        return distinct_solution(set, 2, z);
    }
    let mu = one_center(set, z, opts.median_tol).expect("nonempty set");
    let far = most_expensive_point(set, &mu.center, z);
    lloyd(set, vec![mu.center, set.point(far).to_vec()], z, opts)
}

/// Initial `2k` centers: the union of per-cluster 2-clusterings.
fn doubled_init(
    set: &WeightedPointSet,
    inner: &ClusteringResult,
    opts: &ClusteringOptions,
) -> Vec<Vec<f64>> {
    let mut init = Vec::with_capacity(2 * inner.centers.len());
    for (c, members) in inner.clusters().iter().enumerate() {
        if members.is_empty() {
            init.push(inner.centers[c].clone());
            init.push(inner.centers[c].clone());
            continue;
        }
        let two = two_clustering(&set.subset(members), inner.z, opts);
        init.extend(two.centers);
    }
    init
}

/// The `2k` run derived from a `k` run by the doubling initialization.
pub fn double_clustering(
    set: &WeightedPointSet,
    inner: &ClusteringResult,
    opts: &ClusteringOptions,
) -> ClusteringResult {
    let k2 = 2 * inner.centers.len();
    let mut out = if k2 >= set.distinct_count() {
        distinct_solution(set, k2, inner.z)
    } else {
        lloyd(set, doubled_init(set, inner, opts), inner.z, opts)
    };
    out.seed = inner.seed;
    out
}

/// Add one center (a point drawn uniformly from the data) to a `k` run and
/// re-run Lloyd.
pub(crate) fn extend_by_random(
    set: &WeightedPointSet,
    inner: &ClusteringResult,
    rng: &mut ChaCha8Rng,
    opts: &ClusteringOptions,
) -> ClusteringResult {
    let k = inner.centers.len() + 1;
    if k >= set.distinct_count() {
        return distinct_solution(set, k, inner.z);
    }
    let mut init = inner.centers.clone();
    init.push(set.point(rng.gen_range(0..set.len())).to_vec());
    lloyd(set, init, inner.z, opts)
}

/// Add one center at the currently most expensive point and re-run Lloyd.
pub(crate) fn extend_by_farthest(
    set: &WeightedPointSet,
    inner: &ClusteringResult,
    opts: &ClusteringOptions,
) -> ClusteringResult {
    let k = inner.centers.len() + 1;
    if k >= set.distinct_count() {
        return distinct_solution(set, k, inner.z);
    }
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &c) in inner.assignment.iter().enumerate() {
        let cost = set.weight(i) * inner.z.from_dist2(dist2(set.point(i), &inner.centers[c]));
        if cost > best.1 {
            best = (i, cost);
        }
    }
    let mut init = inner.centers.clone();
    init.push(set.point(best.0).to_vec());
    lloyd(set, init, inner.z, opts)
}

pub(crate) fn solve_recursive(
    set: &WeightedPointSet,
    k: usize,
    z: Exponent,
    rng: &mut ChaCha8Rng,
    opts: &ClusteringOptions,
) -> ClusteringResult {
    if k >= set.distinct_count() {
        return distinct_solution(set, k, z);
    }
    if k == 1 {
        return one_center_solution(set, z, opts);
    }
    if k.is_multiple_of(2) {
        let inner = solve_recursive(set, k / 2, z, rng, opts);
        double_clustering(set, &inner, opts)
    } else {
        let inner = solve_recursive(set, k - 1, z, rng, opts);
        extend_by_random(set, &inner, rng, opts)
    }
}

fn check_k(set: &WeightedPointSet, k: usize) -> Result<()> {
    if k == 0 || k > set.len() {
        return Err(CoresetError::InvalidK { k, n: set.len() });
    }
    Ok(())
}

/// Weighted k-clustering with the recursive doubling initialization.
pub fn k_clustering(
    set: &WeightedPointSet,
    k: usize,
    z: Exponent,
    seed: u64,
    opts: &ClusteringOptions,
) -> Result<ClusteringResult> {
    check_k(set, k)?;
    let mut rng = rng_from_seed(seed);
    let mut out = solve_recursive(set, k, z, &mut rng, opts);
    out.seed = Some(seed);
    Ok(out)
}

/// The `k` run and the `2k` run initialized from it. The `2k` run equals
/// `k_clustering(set, 2k, z, seed)`.
pub fn k_clustering_doubled(
    set: &WeightedPointSet,
    k: usize,
    z: Exponent,
    seed: u64,
    opts: &ClusteringOptions,
) -> Result<(ClusteringResult, ClusteringResult)> {
    check_k(set, k)?;
    if 2 * k > set.len() {
        return Err(CoresetError::InvalidK {
            k: 2 * k,
            n: set.len(),
        });
    }
    let inner = k_clustering(set, k, z, seed, opts)?;
    let outer = double_clustering(set, &inner, opts);
    Ok((inner, outer))
}

/// Largest instance accepted by [`brute_force_optimal`].
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// Exact `opt(P, k)` by dynamic programming over all subsets.
///
/// Every nonempty subset's 1-clustering cost is computed once (mean for
/// `z = 2`, a tight Weiszfeld run for `z = 1`); the best partition into
/// exactly `k` blocks is then found by a subset DP.
pub fn brute_force_optimal(
    set: &WeightedPointSet,
    k: usize,
    z: Exponent,
) -> Result<ClusteringResult> {
    let n = set.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(CoresetError::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    check_k(set, k)?;
    let full = (1usize << n) - 1;
    let mut block_cost = vec![0.0; full + 1];
    let mut block_center = vec![Vec::new(); full + 1];
    for mask in 1..=full {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let one = one_center(&set.subset(&idx), z, 1e-13)?;
        block_cost[mask] = one.cost;
        block_center[mask] = one.center;
    }
    // best[j][mask]: cheapest split of `mask` into exactly j + 1 blocks
    let mut best = vec![vec![f64::INFINITY; full + 1]; k];
    let mut choice = vec![vec![0usize; full + 1]; k];
    best[0].copy_from_slice(&block_cost);
    choice[0]
        .iter_mut()
        .enumerate()
        .for_each(|(mask, c)| *c = mask);
    for j in 1..k {
        for mask in 1..=full {
            if (mask.count_ones() as usize) < j + 1 {
                continue;
            }
            let low = mask & mask.wrapping_neg();
            let rest = mask ^ low;
            // blocks containing the lowest element: low | (subset of rest)
            let mut sub = rest;
            loop {
                let block = low | sub;
                if block != mask {
                    let c = block_cost[block] + best[j - 1][mask ^ block];
                    if c < best[j][mask] {
                        best[j][mask] = c;
                        choice[j][mask] = block;
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
    }
    let mut centers = Vec::with_capacity(k);
    let mut assignment = vec![0; n];
    let mut mask = full;
    for j in (0..k).rev() {
        let block = choice[j][mask];
        for (i, slot) in assignment.iter_mut().enumerate() {
            if block >> i & 1 == 1 {
                *slot = centers.len();
            }
        }
        centers.push(block_center[block].clone());
        mask ^= block;
    }
    let cost = best[k - 1][full];
    Ok(ClusteringResult {
        centers,
        assignment,
        cost,
        z,
        k,
        iterations: 0,
        converged: true,
        seed: None,
        cost_trace: vec![cost],
    })
}
