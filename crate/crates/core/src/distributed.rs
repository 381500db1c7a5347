//! Simulated two-round distributed coreset protocol.
//!
//! Round 1: every node clusters its shard for `k = 1..K` and reports the K
//! costs. The server picks per-node center counts `k_j` and splits the
//! remaining sample budget `t = N - sum k_j` across nodes. Round 2: every node
//! returns its centers plus cost-proportional samples with inverse-probability
//! weights. Messages go through a [`ProtocolTrace`] so that the scalar counts
//! can be audited.

use rand::distributions::{Distribution, WeightedIndex};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{
    double_clustering, extend_by_farthest, extend_by_random, k_clustering, nearest,
    ClusteringOptions, ClusteringResult, Exponent,
};
use crate::coreset::{Coreset, DrawCollector, Provenance};
use crate::data::{WeightedPointSet, WeightedPoints};
use crate::error::{CoresetError, Result};
use crate::seed::{derive_seed, rng_from_seed};

/// Round-1 message: local costs `c(P_j, B_j^k)` for `k = 1..K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeReport {
    pub node_id: usize,
    pub local_costs: Vec<f64>,
}

/// Local clustering runs of one node.
#[derive(Debug, Clone)]
pub struct NodeCenters {
    /// `runs[k-1]` is `B_j^k`; shorter than K when K was clamped.
    pub runs: Vec<ClusteringResult>,
    pub report: NodeReport,
    pub clamped: bool,
}

impl NodeCenters {
    /// `B_j^k`, or the largest run computed when `k` exceeds it.
    pub fn centers(&self, k: usize) -> &ClusteringResult {
        &self.runs[k.clamp(1, self.runs.len()) - 1]
    }
}

/// Server decision broadcast in round 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServerConfig {
    pub k_alloc: Vec<usize>,
    pub t: usize,
    pub t_alloc: Vec<usize>,
    pub c_over_t: f64,
    /// `C = sum_l c(P_l, B_l^{k_l})`.
    pub normalizer: f64,
}

/// Round-2 message content of one node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalCoreset {
    pub node_id: usize,
    pub centers: Vec<Vec<f64>>,
    /// Residual weights `u_b`; may be zero or negative.
    pub center_weights: Vec<f64>,
    pub samples: Vec<Vec<f64>>,
    /// Summed `u_q` of each distinct sampled point.
    pub sample_weights: Vec<f64>,
    /// Shard indices of the distinct sampled points.
    pub sample_indices: Vec<usize>,
    /// Number of draws, counting repeats.
    pub draws: usize,
}

impl LocalCoreset {
    pub fn total_weight(&self) -> f64 {
        self.center_weights.iter().sum::<f64>() + self.sample_weights.iter().sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Server,
    Node(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKind {
    CostReport,
    Allocation,
    Coreset,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub round: u8,
    pub from: Endpoint,
    pub to: Endpoint,
    pub kind: MessageKind,
    pub scalars: usize,
}

/// Ordered record of every protocol message plus the run's decisions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTrace {
    pub seed: u64,
    pub z: Exponent,
    pub budget: usize,
    pub k_max: usize,
    pub nodes: usize,
    pub node_seeds: Vec<u64>,
    pub sample_seeds: Vec<u64>,
    pub server_seed: u64,
    pub reports: Vec<NodeReport>,
    pub config: Option<ServerConfig>,
    pub messages: Vec<Message>,
    pub warnings: Vec<String>,
    /// Coreset size counting repeated draws (equals the budget).
    pub draws: usize,
    /// Coreset size after merging repeated draws.
    pub distinct_points: usize,
}

impl ProtocolTrace {
    fn push(&mut self, round: u8, from: Endpoint, to: Endpoint, kind: MessageKind, scalars: usize) {
        self.messages.push(Message {
            round,
            from,
            to,
            kind,
            scalars,
        });
    }

    /// Scalars exchanged excluding coreset payloads.
    pub fn overhead_scalars(&self) -> usize {
        self.messages
            .iter()
            .filter(|m| m.kind != MessageKind::Coreset)
            .map(|m| m.scalars)
            .sum()
    }

    pub fn payload_scalars(&self) -> usize {
        self.messages
            .iter()
            .filter(|m| m.kind == MessageKind::Coreset)
            .map(|m| m.scalars)
            .sum()
    }

    pub fn total_scalars(&self) -> usize {
        self.overhead_scalars() + self.payload_scalars()
    }
}

/// Local runs `B_j^1..B_j^K` and the round-1 report.
///
/// Odd `k` extends `B^{k-1}` by a random data point, even `k` doubles
/// `B^{k/2}`. If that raises the cost above `c(B^{k-1})`, the run seeded at
/// the most expensive point of `B^{k-1}` is used when cheaper, which keeps
/// the reported costs non-increasing.
pub fn node_local_centers(
    set: &WeightedPointSet,
    node_id: usize,
    k_max: usize,
    z: Exponent,
    seed: u64,
    opts: &ClusteringOptions,
) -> Result<NodeCenters> {
    if set.is_empty() {
        return Err(CoresetError::EmptyDataset);
    }
    if k_max == 0 {
        return Err(CoresetError::InvalidK { k: 0, n: set.len() });
    }
    let kk = k_max.min(set.len());
    let mut rng = rng_from_seed(seed);
    let mut runs = vec![k_clustering(set, 1, z, seed, opts)?];
    for k in 2..=kk {
        let prev = &runs[k - 2];
        let mut run = if k % 2 == 0 {
            double_clustering(set, &runs[k / 2 - 1], opts)
        } else {
            extend_by_random(set, prev, &mut rng, opts)
        };
        if run.cost > prev.cost {
            let alt = extend_by_farthest(set, prev, opts);
            if alt.cost < run.cost {
                run = alt;
            }
        }
        run.seed = Some(seed);
        runs.push(run);
    }
    let mut local_costs: Vec<f64> = runs.iter().map(|r| r.cost).collect();
    local_costs.resize(k_max, *local_costs.last().expect("at least one run"));
    Ok(NodeCenters {
        runs,
        report: NodeReport {
            node_id,
            local_costs,
        },
        clamped: kk < k_max,
    })
}

fn objective(reports: &[NodeReport], k_alloc: &[usize], budget: usize) -> f64 {
    let used: usize = k_alloc.iter().sum();
    let c: f64 = reports
        .iter()
        .zip(k_alloc)
        .map(|(r, &k)| r.local_costs[k - 1])
        .sum();
    c / ((budget - used) as f64).sqrt()
}

/// Greedy center allocation: from all ones, apply the single increment that
/// most lowers `sum_j c_j(k_j) / sqrt(N - sum_j k_j)` until none does.
pub fn greedy_allocation(
    reports: &[NodeReport],
    budget: usize,
    k_max: usize,
) -> Result<Vec<usize>> {
    let n = reports.len();
    if budget <= n {
        return Err(CoresetError::Config(format!(
            "budget {budget} must exceed the number of nodes {n}"
        )));
    }
    if let Some(r) = reports.iter().find(|r| r.local_costs.len() < k_max) {
        return Err(CoresetError::Validation(format!(
            "node {} reported {} costs, expected {k_max}",
            r.node_id,
            r.local_costs.len()
        )));
    }
    let mut k_alloc = vec![1usize; n];
    let mut current = objective(reports, &k_alloc, budget);
    loop {
        if k_alloc.iter().sum::<usize>() + 1 >= budget {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if k_alloc[j] >= k_max {
                continue;
            }
            k_alloc[j] += 1;
            let f = objective(reports, &k_alloc, budget);
            k_alloc[j] -= 1;
            if f < current && best.is_none_or(|(_, b)| f < b) {
                best = Some((j, f));
            }
        }
        match best {
            Some((j, f)) => {
                k_alloc[j] += 1;
                current = f;
            }
            None => break,
        }
    }
    Ok(k_alloc)
}

/// Split the sample budget across nodes for a given center allocation.
///
/// `t_alloc` is one multinomial draw with node probabilities `c_j / C`; when
/// `C == 0` the nodes are equally likely (every shard is then reproduced
/// exactly by its centers and samples carry no weight).
pub fn allocate_samples(
    reports: &[NodeReport],
    k_alloc: Vec<usize>,
    budget: usize,
    seed: u64,
) -> Result<ServerConfig> {
    let used: usize = k_alloc.iter().sum();
    if used >= budget {
        return Err(CoresetError::Config(format!(
            "budget {budget} leaves no samples after {used} centers"
        )));
    }
    let t = budget - used;
    let costs: Vec<f64> = reports
        .iter()
        .zip(&k_alloc)
        .map(|(r, &k)| r.local_costs[k - 1])
        .collect();
    let normalizer: f64 = costs.iter().sum();
    let probs = if normalizer > 0.0 {
        costs.clone()
    } else {
        vec![1.0; costs.len()]
    };
    let dist = WeightedIndex::new(&probs).map_err(|e| CoresetError::Validation(e.to_string()))?;
    let mut rng = rng_from_seed(seed);
    let mut t_alloc = vec![0usize; reports.len()];
    for _ in 0..t {
        t_alloc[dist.sample(&mut rng)] += 1;
    }
    Ok(ServerConfig {
        k_alloc,
        t,
        t_alloc,
        c_over_t: normalizer / t as f64,
        normalizer,
    })
}

/// Greedy allocation followed by the multinomial sample split.
pub fn server_allocate(
    reports: &[NodeReport],
    budget: usize,
    k_max: usize,
    seed: u64,
) -> Result<ServerConfig> {
    let k_alloc = greedy_allocation(reports, budget, k_max)?;
    allocate_samples(reports, k_alloc, budget, seed)
}

/// Round-2 node work: draw `t_j` points i.i.d. with probability
/// `m_p / c(P_j, B)`, weight them `c_over_t * w_q / m_q`, and give every
/// center its cell weight minus the sample weight drawn from that cell.
pub fn node_sample(
    set: &WeightedPointSet,
    node_id: usize,
    centers: &[Vec<f64>],
    z: Exponent,
    t_j: usize,
    c_over_t: f64,
    seed: u64,
) -> Result<LocalCoreset> {
    if centers.is_empty() {
        return Err(CoresetError::Validation("node has no centers".into()));
    }
    let mut cell = Vec::with_capacity(set.len());
    let mut mass = Vec::with_capacity(set.len());
    for p in set.iter() {
        let (b, d2) = nearest(p.coords, centers);
        cell.push(b);
        mass.push(p.weight * z.from_dist2(d2));
    }
    let mut center_weights = vec![0.0; centers.len()];
    for (i, &b) in cell.iter().enumerate() {
        center_weights[b] += set.weight(i);
    }

    let mut draws = DrawCollector::default();
    let mut drawn = 0;
    if t_j > 0 && mass.iter().any(|&m| m > 0.0) {
        let dist =
            WeightedIndex::new(&mass).map_err(|e| CoresetError::Validation(e.to_string()))?;
        let mut rng = rng_from_seed(seed);
        for _ in 0..t_j {
            let q = dist.sample(&mut rng);
            draws.add(q, c_over_t * set.weight(q) / mass[q]);
        }
        drawn = t_j;
    }

    let mut samples = Vec::new();
    let mut sample_weights = Vec::new();
    let mut sample_indices = Vec::new();
    for (q, u) in draws.entries() {
        center_weights[cell[q]] -= u;
        samples.push(set.point(q).to_vec());
        sample_weights.push(u);
        sample_indices.push(q);
    }
    Ok(LocalCoreset {
        node_id,
        centers: centers.to_vec(),
        center_weights,
        samples,
        sample_weights,
        sample_indices,
        draws: drawn,
    })
}

/// How the server chooses the per-node center counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Allocation {
    Greedy,
    Fixed(usize),
}

/// Full protocol over in-process shards.
#[allow(clippy::too_many_arguments)]
pub fn run_protocol(
    shards: &[WeightedPointSet],
    budget: usize,
    k_max: usize,
    z: Exponent,
    seed: u64,
    allocation: Allocation,
    opts: &ClusteringOptions,
) -> Result<(Coreset, ProtocolTrace)> {
    let n = shards.len();
    if n == 0 {
        return Err(CoresetError::Config("no shards".into()));
    }
    if shards.iter().any(WeightedPointSet::is_empty) {
        return Err(CoresetError::EmptyDataset);
    }
    let dim = shards[0].dim();
    if let Some(s) = shards.iter().find(|s| s.dim() != dim) {
        return Err(CoresetError::DimensionMismatch {
            expected: dim,
            got: s.dim(),
        });
    }
    if budget <= n {
        return Err(CoresetError::Config(format!(
            "budget {budget} must exceed the number of nodes {n}"
        )));
    }
    if let Allocation::Fixed(k) = allocation {
        if k == 0 || k > k_max {
            return Err(CoresetError::Config(format!(
                "fixed allocation k={k} must lie in [1, {k_max}]"
            )));
        }
        if budget <= n * k {
            return Err(CoresetError::Config(format!(
                "budget {budget} must exceed n*k = {}",
                n * k
            )));
        }
    }

    let node_seeds: Vec<u64> = (0..n as u64)
        .map(|j| derive_seed(seed, "node", j))
        .collect();
    let sample_seeds: Vec<u64> = (0..n as u64)
        .map(|j| derive_seed(seed, "sample", j))
        .collect();
    let server_seed = derive_seed(seed, "server", 0);
    let mut trace = ProtocolTrace {
        seed,
        z,
        budget,
        k_max,
        nodes: n,
        node_seeds: node_seeds.clone(),
        sample_seeds: sample_seeds.clone(),
        server_seed,
        reports: Vec::new(),
        config: None,
        messages: Vec::new(),
        warnings: Vec::new(),
        draws: 0,
        distinct_points: 0,
    };

    let locals: Vec<NodeCenters> = shards
        .par_iter()
        .enumerate()
        .map(|(j, s)| node_local_centers(s, j, k_max, z, node_seeds[j], opts))
        .collect::<Result<_>>()?;
    for (j, l) in locals.iter().enumerate() {
        if l.clamped {
            trace.warnings.push(format!(
                "node {j}: K={k_max} exceeds shard size {}, clamped",
                shards[j].len()
            ));
        }
        trace.push(
            1,
            Endpoint::Node(j),
            Endpoint::Server,
            MessageKind::CostReport,
            k_max,
        );
        trace.reports.push(l.report.clone());
    }

    let config = match allocation {
        Allocation::Greedy => server_allocate(&trace.reports, budget, k_max, server_seed)?,
        Allocation::Fixed(k) => allocate_samples(&trace.reports, vec![k; n], budget, server_seed)?,
    };
    if config.normalizer == 0.0 {
        trace
            .warnings
            .push("all local costs are zero; samples carry no weight".into());
    }
    for j in 0..n {
        trace.push(
            1,
            Endpoint::Server,
            Endpoint::Node(j),
            MessageKind::Allocation,
            3,
        );
    }

    let parts: Vec<LocalCoreset> = (0..n)
        .into_par_iter()
        .map(|j| {
            let run = locals[j].centers(config.k_alloc[j]);
            node_sample(
                &shards[j],
                j,
                &run.centers,
                z,
                config.t_alloc[j],
                config.c_over_t,
                sample_seeds[j],
            )
        })
        .collect::<Result<_>>()?;

    let mut coords = Vec::new();
    let mut weights = Vec::new();
    for part in &parts {
        let points = part.centers.len() + part.samples.len();
        trace.push(
            2,
            Endpoint::Node(part.node_id),
            Endpoint::Server,
            MessageKind::Coreset,
            points * (dim + 1),
        );
        trace.draws += part.centers.len() + part.draws;
        trace.distinct_points += points;
        for (c, &w) in part.centers.iter().zip(&part.center_weights) {
            coords.extend_from_slice(c);
            weights.push(w);
        }
        for (q, &u) in part.samples.iter().zip(&part.sample_weights) {
            coords.extend_from_slice(q);
            weights.push(u);
        }
    }
    let tag = match allocation {
        Allocation::Greedy => "drcc",
        Allocation::Fixed(_) => "cdcc",
    };
    let mut provenance = Provenance::new(tag, Some(seed))
        .with("budget", budget)
        .with("K", k_max)
        .with("z", z.value())
        .with("nodes", n)
        .with("k_alloc", config.k_alloc.clone())
        .with("t_alloc", config.t_alloc.clone());
    if let Allocation::Fixed(k) = allocation {
        provenance = provenance.with("k", k);
    }
    trace.config = Some(config);
    let coreset = Coreset::new(dim, coords, weights, provenance)?;
    Ok((coreset, trace))
}

/// Distributed robust coreset with the greedy center allocation.
pub fn drcc(
    shards: &[WeightedPointSet],
    budget: usize,
    k_max: usize,
    z: Exponent,
    seed: u64,
    opts: &ClusteringOptions,
) -> Result<(Coreset, ProtocolTrace)> {
    run_protocol(shards, budget, k_max, z, seed, Allocation::Greedy, opts)
}

/// The fixed-count special case: every node contributes exactly `k` centers
/// and reports only `c(P_j, B_j^1..B_j^k)`.
pub fn cdcc(
    shards: &[WeightedPointSet],
    budget: usize,
    k: usize,
    z: Exponent,
    seed: u64,
    opts: &ClusteringOptions,
) -> Result<(Coreset, ProtocolTrace)> {
    run_protocol(shards, budget, k, z, seed, Allocation::Fixed(k), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::clustering_cost;
    use rand::Rng;

    fn random_set(n: usize, dim: usize, seed: u64) -> WeightedPointSet {
        let mut rng = rng_from_seed(seed);
        let rows = (0..n)
            .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
            .collect();
        let weights = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
        WeightedPointSet::new(rows, weights).unwrap()
    }

    fn report(node_id: usize, local_costs: Vec<f64>) -> NodeReport {
        NodeReport {
            node_id,
            local_costs,
        }
    }

    #[test]
    fn local_costs_non_increasing_and_recomputable() {
        let set = random_set(50, 2, 4);
        let nc = node_local_centers(&set, 0, 5, Exponent::Median, 9, &Default::default()).unwrap();
        assert_eq!(nc.report.local_costs.len(), 5);
        for w in nc.report.local_costs.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "{w:?}");
        }
        for (k, run) in nc.runs.iter().enumerate() {
            let c = clustering_cost(&set, &run.centers, Exponent::Median).unwrap();
            assert!((c - nc.report.local_costs[k]).abs() <= 1e-9 * c.max(1.0));
        }
    }

    #[test]
    fn k_equal_to_distinct_points_is_free() {
        let set = WeightedPointSet::unit(vec![vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let nc = node_local_centers(&set, 0, 3, Exponent::Means, 0, &Default::default()).unwrap();
        assert_eq!(nc.report.local_costs[2], 0.0);
        let clamped =
            node_local_centers(&set, 0, 5, Exponent::Means, 0, &Default::default()).unwrap();
        assert!(clamped.clamped);
        assert_eq!(clamped.report.local_costs.len(), 5);
    }

    #[test]
    fn flat_reports_keep_one_center_each() {
        let reports = vec![report(0, vec![5.0; 4]), report(1, vec![2.0; 4])];
        let cfg = server_allocate(&reports, 20, 4, 0).unwrap();
        assert_eq!(cfg.k_alloc, vec![1, 1]);
        assert_eq!(cfg.t, 18);
        assert_eq!(cfg.t_alloc.iter().sum::<usize>(), 18);
    }

    #[test]
    fn greedy_matches_exhaustive_on_small_grid() {
        let reports = vec![
            report(0, vec![10.0, 3.0, 2.5]),
            report(1, vec![4.0, 1.0, 0.2]),
        ];
        let budget = 8;
        let greedy = greedy_allocation(&reports, budget, 3).unwrap();
        let mut best = f64::INFINITY;
        for a in 1..=3 {
            for b in 1..=3 {
                best = best.min(objective(&reports, &[a, b], budget));
            }
        }
        let g = objective(&reports, &greedy, budget);
        assert!((g - best).abs() < 1e-12, "greedy {greedy:?} {g} vs {best}");
        assert!(g <= objective(&reports, &[1, 1], budget));
    }

    #[test]
    fn zero_cost_node_gets_no_samples() {
        let reports = vec![report(0, vec![0.0]), report(1, vec![3.0])];
        let cfg = server_allocate(&reports, 50, 1, 11).unwrap();
        assert_eq!(cfg.t_alloc, vec![0, 48]);
    }

    #[test]
    fn budget_must_exceed_nodes() {
        let reports = vec![report(0, vec![1.0]), report(1, vec![1.0])];
        assert!(matches!(
            server_allocate(&reports, 2, 1, 0),
            Err(CoresetError::Config(_))
        ));
    }

    #[test]
    fn no_samples_means_cell_weights() {
        let set = random_set(30, 2, 1);
        let centers = vec![vec![0.25, 0.25], vec![0.75, 0.75]];
        let lc = node_sample(&set, 0, &centers, Exponent::Median, 0, 1.0, 3).unwrap();
        assert!(lc.samples.is_empty());
        let mut expect = [0.0; 2];
        for p in set.iter() {
            expect[nearest(p.coords, &centers).0] += p.weight;
        }
        assert_eq!(lc.center_weights, expect.to_vec());
    }

    #[test]
    fn single_draw_telescopes() {
        let set = random_set(12, 3, 2);
        let lc = node_sample(&set, 0, &[vec![0.5; 3]], Exponent::Means, 1, 0.7, 5).unwrap();
        let total = lc.center_weights[0] + lc.sample_weights[0];
        assert!((total - set.total_weight()).abs() <= 1e-12 * set.total_weight());
    }

    #[test]
    fn draw_frequencies_follow_cost_mass() {
        let set = WeightedPointSet::new(
            vec![vec![1.0], vec![2.0], vec![3.0], vec![-1.0], vec![0.5]],
            vec![1.0, 1.0, 2.0, 1.0, 3.0],
        )
        .unwrap();
        let draws = 100_000;
        let lc = node_sample(&set, 0, &[vec![0.0]], Exponent::Median, draws, 1.0, 17).unwrap();
        let mass: Vec<f64> = set.iter().map(|p| p.weight * p.coords[0].abs()).collect();
        let total: f64 = mass.iter().sum();
        // u_q sums to count * w_q / m_q with c_over_t = 1
        let mut chi2 = 0.0;
        for (q, &u) in lc.sample_indices.iter().zip(&lc.sample_weights) {
            let count = u * mass[*q] / set.weight(*q);
            let expected = draws as f64 * mass[*q] / total;
            chi2 += (count - expected).powi(2) / expected;
        }
        // 99% quantile of chi-square with 4 degrees of freedom
        assert!(chi2 < 13.277, "chi2 = {chi2}");
        assert_eq!(lc.sample_indices.len(), 5);
    }

    #[test]
    fn protocol_conserves_weight_and_counts_messages() {
        let mut rng = rng_from_seed(3);
        let rows: Vec<Vec<f64>> = (0..4000)
            .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
            .collect();
        let all = WeightedPointSet::unit(rows).unwrap();
        let idx: Vec<Vec<usize>> = (0..4).map(|j| (j..4000).step_by(4).collect()).collect();
        let shards: Vec<_> = idx.iter().map(|i| all.subset(i)).collect();
        let (d, trace) = drcc(&shards, 400, 10, Exponent::Median, 8, &Default::default()).unwrap();
        assert_eq!(trace.draws, 400);
        assert!((d.total_weight() - 4000.0).abs() <= 1e-9 * 4000.0);
        assert_eq!(trace.overhead_scalars(), 10 * 4 + 3 * 4);
        assert_eq!(trace.payload_scalars(), d.len() * 3);
        let cfg = trace.config.as_ref().unwrap();
        assert_eq!(cfg.k_alloc.iter().sum::<usize>() + cfg.t, 400);
        assert!(serde_json::to_string(&trace)
            .unwrap()
            .contains("cost_report"));
    }

    #[test]
    fn cdcc_is_fixed_allocation_drcc() {
        let shards = vec![random_set(40, 2, 5), random_set(60, 2, 6)];
        let opts = ClusteringOptions::default();
        let (a, _) = cdcc(&shards, 30, 3, Exponent::Median, 2, &opts).unwrap();
        let (b, _) = run_protocol(
            &shards,
            30,
            6,
            Exponent::Median,
            2,
            Allocation::Fixed(3),
            &opts,
        )
        .unwrap();
        assert_eq!(a.rows(), b.rows());
        assert_eq!(a.weights(), b.weights());
        assert!(matches!(
            cdcc(&shards, 6, 3, Exponent::Median, 2, &opts),
            Err(CoresetError::Config(_))
        ));
    }

    #[test]
    fn single_node_single_center() {
        let shards = vec![random_set(25, 2, 7)];
        let (d, trace) = cdcc(&shards, 10, 1, Exponent::Median, 0, &Default::default()).unwrap();
        let cfg = trace.config.unwrap();
        assert_eq!(cfg.k_alloc, vec![1]);
        assert_eq!(cfg.t_alloc, vec![9]);
        assert_eq!(trace.draws, 10);
        assert!(d.len() <= 10);
    }
}
