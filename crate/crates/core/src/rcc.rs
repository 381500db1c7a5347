//! Centralized robust coreset construction: k-clustering centers weighted by
//! their cluster totals, with `k` chosen by the doubling-gap threshold, plus
//! the two approximation certificates.

use serde::{Deserialize, Serialize};

use crate::clustering::{
    double_clustering, k_clustering, ClusteringOptions, ClusteringResult, Exponent,
};
use crate::coreset::{Coreset, Provenance};
use crate::data::{WeightedPointSet, WeightedPoints};
use crate::error::{CoresetError, Result};

/// Both approximation bounds for a clustering-based coreset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsCertificate {
    /// `rho * ((approx(P,k) - approx(P,2k)) / w_min)^(1/z)`.
    pub eps_corollary: f64,
    /// `rho * max_i max_{p in P_i} dist(p, mu(P_i))`.
    pub eps_maxdist: f64,
    pub rho: f64,
    pub z: Exponent,
    pub k: usize,
    /// `approx(P,k) - approx(P,2k)`, clamped at zero.
    pub gap: f64,
}

// rho = inf with a zero distance term still certifies a lossless coreset.
fn scale(rho: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        rho * x
    }
}

/// Certify the coreset given by `result`'s centers. The `2k` run is derived
/// from `result` by the doubling initialization.
pub fn certify_eps(
    set: &WeightedPointSet,
    result: &ClusteringResult,
    rho: f64,
    opts: &ClusteringOptions,
) -> EpsCertificate {
    let doubled = double_clustering(set, result, opts);
    certify_with(set, result, &doubled, rho)
}

fn certify_with(
    set: &WeightedPointSet,
    result: &ClusteringResult,
    doubled: &ClusteringResult,
    rho: f64,
) -> EpsCertificate {
    let gap = (result.cost - doubled.cost).max(0.0);
    let z = result.z;
    EpsCertificate {
        eps_corollary: scale(rho, z.root(gap / set.w_min())),
        eps_maxdist: scale(rho, result.max_point_center_distance(set)),
        rho,
        z,
        k: result.centers.len(),
        gap,
    }
}

/// Coreset of the nonempty clusters' centers, each weighted by its cluster's
/// total weight.
pub fn coreset_from_clustering(
    set: &WeightedPointSet,
    result: &ClusteringResult,
    provenance: Provenance,
) -> Coreset {
    let weights = result.cluster_weights(set);
    let mut coords = Vec::new();
    let mut kept = Vec::new();
    for (c, &w) in result.centers.iter().zip(&weights) {
        if w > 0.0 {
            coords.extend_from_slice(c);
            kept.push(w);
        }
    }
    Coreset::new(set.dim(), coords, kept, provenance).expect("consistent dimensions")
}

fn provenance_for(tag: &str, z: Exponent, k: usize, seed: u64) -> Provenance {
    Provenance::new(tag, Some(seed))
        .with("z", z.value())
        .with("k", k)
}

/// Coreset of a predetermined size `k`.
pub fn rcc_fixed_size(
    set: &WeightedPointSet,
    k: usize,
    z: Exponent,
    seed: u64,
    opts: &ClusteringOptions,
) -> Result<(Coreset, ClusteringResult)> {
    let result = k_clustering(set, k, z, seed, opts)?;
    let coreset = coreset_from_clustering(set, &result, provenance_for("rcc-fixed", z, k, seed));
    Ok((coreset, result))
}

/// Coreset for a target error `eps` under a `rho`-Lipschitz cost.
///
/// Finds the smallest `k` (on a doubling-then-bisection lattice, capped at
/// `k_max`) with `approx(P,k) - approx(P,2k) <= w_min (eps/rho)^z`; a
/// non-positive gap always passes. The bisection assumes the gap shrinks with
/// `k`, so the `k` returned is the smallest passing one found on that
/// lattice, not necessarily the globally smallest. `eps_bound` is the
/// max-distance certificate of the result.
pub fn rcc(
    set: &WeightedPointSet,
    eps: f64,
    rho: f64,
    z: Exponent,
    seed: u64,
    k_max: usize,
    opts: &ClusteringOptions,
) -> Result<(Coreset, ClusteringResult)> {
    if !(eps > 0.0) || !(rho > 0.0) {
        return Err(CoresetError::Validation(format!(
            "eps and rho must be positive, got eps={eps} rho={rho}"
        )));
    }
    if set.is_empty() {
        return Err(CoresetError::EmptyDataset);
    }
    let k_max = k_max.min(set.len()).max(1);
    let threshold = set.w_min() * z.pow(eps / rho);

    let mut best = (f64::INFINITY, 0usize);
    let mut probe = |k: usize| -> Result<Option<(ClusteringResult, ClusteringResult)>> {
        let inner = k_clustering(set, k, z, seed, opts)?;
        let outer = double_clustering(set, &inner, opts);
        let gap = inner.cost - outer.cost;
        if gap < best.0 {
            best = (gap, k);
        }
        Ok((gap <= threshold).then_some((inner, outer)))
    };

    let mut lo = 0usize;
    let mut hit = None;
    let mut k = 1usize;
    loop {
        if let Some(pair) = probe(k)? {
            hit = Some((k, pair));
            break;
        }
        lo = k;
        if k == k_max {
            break;
        }
        k = (2 * k).min(k_max);
    }
    let Some((mut hi, mut pair)) = hit else {
        return Err(CoresetError::ThresholdUnreachable {
            threshold,
            k_max,
            best_gap: best.0,
            best_k: best.1,
        });
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match probe(mid)? {
            Some(p) => {
                hi = mid;
                pair = p;
            }
            None => lo = mid,
        }
    }

    let (inner, outer) = pair;
    let cert = certify_with(set, &inner, &outer, rho);
    let mut coreset = coreset_from_clustering(
        set,
        &inner,
        provenance_for("rcc", z, hi, seed)
            .with("eps", eps)
            .with("rho", rho)
            .with("threshold", threshold),
    );
    coreset.eps_bound = Some(cert.eps_maxdist);
    coreset.certificate = Some(cert);
    Ok((coreset, inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::dist;

    fn opts() -> ClusteringOptions {
        ClusteringOptions::default()
    }

    fn duplicated_sites() -> WeightedPointSet {
        let sites = [[0.0, 0.0], [5.0, 1.0], [2.0, 7.0]];
        let rows = sites
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.to_vec(), 4))
            .collect();
        WeightedPointSet::unit(rows).unwrap()
    }

    #[test]
    fn duplicated_sites_recovered_exactly() {
        let set = duplicated_sites();
        for z in [Exponent::Median, Exponent::Means] {
            let (c, _) = rcc(&set, 1e-6, 1.0, z, 3, 12, &opts()).unwrap();
            assert_eq!(c.len(), 3);
            assert!(c.weights().iter().all(|&w| w == 4.0));
            let cert = c.certificate.as_ref().unwrap();
            assert_eq!(cert.eps_maxdist, 0.0);
            assert_eq!(cert.eps_corollary, 0.0);
        }
    }

    #[test]
    fn huge_eps_gives_single_mean() {
        let set = WeightedPointSet::new(vec![vec![0.0], vec![1.0], vec![5.0]], vec![1.0, 2.0, 1.0])
            .unwrap();
        let (c, _) = rcc(&set, f64::INFINITY, 1.0, Exponent::Means, 0, 3, &opts()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.point(0), &[7.0 / 4.0]);
        assert_eq!(c.weight(0), 4.0);
    }

    #[test]
    fn unreachable_threshold_reports_best_gap() {
        let set = WeightedPointSet::unit((0..20).map(|i| vec![(i * i) as f64]).collect()).unwrap();
        let err = rcc(&set, 1e-9, 1.0, Exponent::Means, 0, 2, &opts()).unwrap_err();
        assert!(
            matches!(err, CoresetError::ThresholdUnreachable { k_max: 2, .. }),
            "{err}"
        );
    }

    #[test]
    fn fixed_size_extremes() {
        let set = WeightedPointSet::new(
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 3.0]],
            vec![1.0, 2.0, 3.0],
        )
        .unwrap();
        let (one, _) = rcc_fixed_size(&set, 1, Exponent::Means, 0, &opts()).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.weight(0), 6.0);
        let (all, _) = rcc_fixed_size(&set, 3, Exponent::Means, 0, &opts()).unwrap();
        let mut pairs: Vec<(Vec<f64>, f64)> =
            all.rows().into_iter().zip(all.weights().to_vec()).collect();
        pairs.sort_by(|a, b| a.1.total_cmp(&b.1));
        assert_eq!(
            pairs,
            vec![
                (vec![0.0, 0.0], 1.0),
                (vec![1.0, 0.0], 2.0),
                (vec![0.0, 3.0], 3.0)
            ]
        );
    }

    #[test]
    fn maxdist_certificate_is_radius() {
        // four points at distance 1 from the origin, one cluster
        let set = WeightedPointSet::unit(vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ])
        .unwrap();
        let r = k_clustering(&set, 1, Exponent::Means, 0, &opts()).unwrap();
        let cert = certify_eps(&set, &r, 1.0, &opts());
        assert!((cert.eps_maxdist - 1.0).abs() < 1e-12);
        let r2 = certify_eps(&set, &r, 3.0, &opts());
        assert!((r2.eps_maxdist - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rcc_maxdist_within_requested_eps() {
        let rows: Vec<Vec<f64>> = (0..60)
            .map(|i| vec![((i * 37) % 61) as f64 / 61.0, ((i * 11) % 17) as f64 / 17.0])
            .collect();
        let set = WeightedPointSet::unit(rows).unwrap();
        for z in [Exponent::Median, Exponent::Means] {
            let (c, res) = rcc(&set, 0.3, 1.0, z, 1, 60, &opts()).unwrap();
            let cert = c.certificate.clone().unwrap();
            assert!(cert.eps_corollary <= 0.3 + 1e-9);
            assert!(cert.eps_maxdist <= cert.eps_corollary + 1e-6);
            let far = res
                .assignment
                .iter()
                .enumerate()
                .map(|(i, &a)| dist(set.point(i), &res.centers[a]))
                .fold(0.0, f64::max);
            assert!((far - cert.eps_maxdist).abs() < 1e-12);
            assert!((c.total_weight() - 60.0).abs() < 1e-9);
        }
    }
}
