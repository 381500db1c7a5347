//! Downstream learning problems evaluated on coresets: their per-point costs,
//! solvers and Lipschitz constants.
//!
//! PCA works on raw (uncentered) points: the cost of a frame `W` is
//! `sum_p w_p * |p - W W^T p|^2`, so the solver takes the top eigenvectors of
//! the weighted second-moment matrix, not of the covariance.

use rand::distributions::{Distribution, WeightedIndex};
use serde::{Deserialize, Serialize};

use crate::clustering::{k_clustering, nearest, ClusteringOptions, Exponent};
use crate::data::{dist, LabelEncoding, WeightedPointSet, WeightedPoints};
use crate::error::{CoresetError, Result};
use crate::seed::{derive_seed, rng_from_seed};

/// Maps the encoded label coordinate to `+1` (the positive class) or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmLabels {
    pub positive: usize,
    /// Spacing of encoded label values.
    pub tau: f64,
    pub num_labels: usize,
}

impl SvmLabels {
    pub fn from_encoding(encoding: &LabelEncoding, positive: usize) -> Result<Self> {
        if positive >= encoding.num_labels() {
            return Err(CoresetError::Validation(format!(
                "positive label index {positive} out of range for {} labels",
                encoding.num_labels()
            )));
        }
        Ok(Self {
            positive,
            tau: encoding.tau.max(1) as f64,
            num_labels: encoding.num_labels(),
        })
    }

    /// `+1.0` when `value` rounds to the positive label, else `-1.0`.
    pub fn sign(&self, value: f64) -> f64 {
        let idx = (value / self.tau)
            .round()
            .clamp(0.0, (self.num_labels - 1) as f64) as usize;
        if idx == self.positive {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "lowercase")]
pub enum Problem {
    Meb,
    Kmeans { k: usize },
    Kmedian { k: usize },
    Pca { l: usize },
    Svm(SvmLabels),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    Sum,
    Max,
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::Meb => "meb",
            Problem::Kmeans { .. } => "kmeans",
            Problem::Kmedian { .. } => "kmedian",
            Problem::Pca { .. } => "pca",
            Problem::Svm(_) => "svm",
        }
    }

    pub fn aggregation(&self) -> Aggregation {
        match self {
            Problem::Meb => Aggregation::Max,
            _ => Aggregation::Sum,
        }
    }

    pub fn rho(&self, delta: f64) -> f64 {
        lipschitz_rho(self, delta)
    }
}

/// Lipschitz constant of the per-point cost in `p` over a sample space of
/// diameter `delta`.
pub fn lipschitz_rho(problem: &Problem, delta: f64) -> f64 {
    match problem {
        Problem::Meb | Problem::Kmedian { .. } => 1.0,
        Problem::Kmeans { .. } => 2.0 * delta,
        Problem::Pca { l } => 2.0 * delta * (*l as f64 + 1.0),
        Problem::Svm(_) => f64::INFINITY,
    }
}

/// A trained model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Model {
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Centers {
        centers: Vec<Vec<f64>>,
    },
    /// Orthonormal columns spanning the projection subspace.
    Frame {
        columns: Vec<Vec<f64>>,
    },
    Hyperplane {
        coef: Vec<f64>,
        offset: f64,
    },
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `|p - W W^T p|^2`.
pub fn pca_residual(p: &[f64], columns: &[Vec<f64>]) -> f64 {
    let mut r = p.to_vec();
    for c in columns {
        let a = dot(p, c);
        r.iter_mut().zip(c).for_each(|(ri, ci)| *ri -= a * ci);
    }
    dot(&r, &r)
}

fn hinge(p: &[f64], labels: &SvmLabels, coef: &[f64], offset: f64) -> f64 {
    let (x, y) = p.split_at(p.len() - 1);
    (1.0 - labels.sign(y[0]) * (dot(x, coef) + offset)).max(0.0)
}

/// `cost(p, x)` for one point.
pub fn point_cost(problem: &Problem, p: &[f64], model: &Model) -> f64 {
    match (problem, model) {
        (Problem::Meb, Model::Ball { center, .. }) => dist(p, center),
        (Problem::Kmeans { .. }, Model::Centers { centers }) => nearest(p, centers).1,
        (Problem::Kmedian { .. }, Model::Centers { centers }) => nearest(p, centers).1.sqrt(),
        (Problem::Pca { .. }, Model::Frame { columns }) => pca_residual(p, columns),
        (Problem::Svm(labels), Model::Hyperplane { coef, offset }) => {
            hinge(p, labels, coef, *offset)
        }
        _ => panic!("model {model:?} does not fit problem {}", problem.name()),
    }
}

/// `cost(S, x)`: weighted sum, or a max over all points (weights ignored).
pub fn cost<S: WeightedPoints + ?Sized>(problem: &Problem, set: &S, model: &Model) -> f64 {
    match problem.aggregation() {
        Aggregation::Sum => (0..set.len())
            .map(|i| set.weight(i) * point_cost(problem, set.point(i), model))
            .sum(),
        Aggregation::Max => (0..set.len())
            .map(|i| point_cost(problem, set.point(i), model))
            .fold(0.0, f64::max),
    }
}

/// Max distance from `center`.
pub fn meb_cost<S: WeightedPoints + ?Sized>(set: &S, center: &[f64]) -> f64 {
    (0..set.len())
        .map(|i| dist(set.point(i), center))
        .fold(0.0, f64::max)
}

pub fn kmeans_cost<S: WeightedPoints + ?Sized>(set: &S, centers: &[Vec<f64>]) -> f64 {
    cost(
        &Problem::Kmeans { k: centers.len() },
        set,
        &Model::Centers {
            centers: centers.to_vec(),
        },
    )
}

pub fn kmedian_cost<S: WeightedPoints + ?Sized>(set: &S, centers: &[Vec<f64>]) -> f64 {
    cost(
        &Problem::Kmedian { k: centers.len() },
        set,
        &Model::Centers {
            centers: centers.to_vec(),
        },
    )
}

pub fn pca_cost<S: WeightedPoints + ?Sized>(set: &S, columns: &[Vec<f64>]) -> f64 {
    (0..set.len())
        .map(|i| set.weight(i) * pca_residual(set.point(i), columns))
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MebSolution {
    pub center: Vec<f64>,
    pub radius: f64,
    pub iterations: usize,
}

/// `(1 + tol)`-approximate minimum enclosing ball by Frank-Wolfe with away
/// steps on the dual; weights are ignored. `radius` is the exact max
/// distance from the returned center.
pub fn meb_solve<S: WeightedPoints + ?Sized>(set: &S, tol: f64) -> Result<MebSolution> {
    let n = set.len();
    if n == 0 {
        return Err(CoresetError::EmptyDataset);
    }
    let far = |c: &[f64]| {
        (0..n)
            .map(|i| (i, crate::data::dist2(set.point(i), c)))
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
    };
    let a = far(set.point(0)).0;
    let b = far(set.point(a)).0;
    let mut u = vec![0.0; n];
    u[a] += 0.5;
    u[b] += 0.5;
    let mut center: Vec<f64> = set
        .point(a)
        .iter()
        .zip(set.point(b))
        .map(|(x, y)| 0.5 * (x + y))
        .collect();
    let bound = (1.0 + tol) * (1.0 + tol) - 1.0;
    let max_iter = 100_000;
    let mut iterations = 0;
    while iterations < max_iter {
        let gamma: Vec<f64> = (0..n)
            .map(|i| crate::data::dist2(set.point(i), &center))
            .collect();
        let phi: f64 = u.iter().zip(&gamma).map(|(ui, g)| ui * g).sum();
        if phi <= 0.0 {
            break;
        }
        let (j, gj) =
            gamma.iter().enumerate().fold(
                (0, f64::NEG_INFINITY),
                |a, (i, &g)| if g > a.1 { (i, g) } else { a },
            );
        let (k, gk) = gamma.iter().enumerate().filter(|(i, _)| u[*i] > 0.0).fold(
            (0, f64::INFINITY),
            |a, (i, &g)| if g < a.1 { (i, g) } else { a },
        );
        let eps_plus = gj / phi - 1.0;
        let eps_minus = 1.0 - gk / phi;
        if eps_plus.max(eps_minus) <= bound {
            break;
        }
        iterations += 1;
        if eps_plus > eps_minus {
            let lambda = eps_plus / (2.0 * (1.0 + eps_plus));
            u.iter_mut().for_each(|x| *x *= 1.0 - lambda);
            u[j] += lambda;
            center
                .iter_mut()
                .zip(set.point(j))
                .for_each(|(c, p)| *c = (1.0 - lambda) * *c + lambda * p);
        } else {
            let lambda = (eps_minus / (2.0 * (1.0 - eps_minus))).min(u[k] / (1.0 - u[k]));
            u.iter_mut().for_each(|x| *x *= 1.0 + lambda);
            u[k] -= lambda;
            if u[k] < 1e-15 {
                u[k] = 0.0;
            }
            center
                .iter_mut()
                .zip(set.point(k))
                .for_each(|(c, p)| *c = (1.0 + lambda) * *c - lambda * p);
        }
    }
    let radius = meb_cost(set, &center);
    Ok(MebSolution {
        center,
        radius,
        iterations,
    })
}

/// Eigen-decomposition of a symmetric `n x n` row-major matrix by cyclic
/// Jacobi rotations. Returns eigenvalues in decreasing order with the
/// matching unit eigenvectors.
pub fn symmetric_eigen(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&i| (0..n).map(|k| v[k * n + i]).collect())
        .collect();
    (values, vectors)
}

/// Weighted second-moment matrix `sum_p w_p p p^T`, row-major.
pub fn second_moment<S: WeightedPoints + ?Sized>(set: &S) -> Vec<f64> {
    let d = set.dim();
    let mut m = vec![0.0; d * d];
    for i in 0..set.len() {
        let p = set.point(i);
        let w = set.weight(i);
        for r in 0..d {
            for c in r..d {
                m[r * d + c] += w * p[r] * p[c];
            }
        }
    }
    for r in 0..d {
        for c in 0..r {
            m[r * d + c] = m[c * d + r];
        }
    }
    m
}

/// Top-`l` principal directions of the uncentered weighted data.
pub fn pca_solve<S: WeightedPoints + ?Sized>(set: &S, l: usize) -> Result<Vec<Vec<f64>>> {
    let d = set.dim();
    if l == 0 || l >= d {
        return Err(CoresetError::Validation(format!(
            "PCA needs 1 <= l < d, got l={l} d={d}"
        )));
    }
    let (_, vectors) = symmetric_eigen(second_moment(set), d);
    Ok(vectors.into_iter().take(l).collect())
}

/// Knobs of the hinge-loss trainer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmOptions {
    pub lambda: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for SvmOptions {
    fn default() -> Self {
        Self {
            lambda: 1e-4,
            epochs: 200,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmFit {
    pub coef: Vec<f64>,
    pub offset: f64,
    /// Weighted mean hinge loss of the averaged iterate after each epoch.
    pub history: Vec<f64>,
    pub warning: Option<String>,
}

/// Stochastic subgradient descent on the L2-regularized weighted hinge loss
/// with step `1/(lambda t)`. Points are drawn with probability proportional
/// to their weights; the offset is an extra regularized coordinate; the
/// returned model averages the iterates after the first epoch.
pub fn svm_train(set: &WeightedPointSet, labels: &SvmLabels, opts: &SvmOptions) -> Result<SvmFit> {
    let n = set.len();
    let d = set.dim();
    if n == 0 {
        return Err(CoresetError::EmptyDataset);
    }
    if d < 2 {
        return Err(CoresetError::Validation(
            "SVM needs features and a label".into(),
        ));
    }
    let f = d - 1;
    let ys: Vec<f64> = set.iter().map(|p| labels.sign(p.coords[f])).collect();
    if ys.iter().all(|&y| y == ys[0]) {
        return Ok(SvmFit {
            coef: vec![0.0; f],
            offset: ys[0],
            history: Vec::new(),
            warning: Some("training data has a single class".into()),
        });
    }

    let pick =
        WeightedIndex::new(set.weights()).map_err(|e| CoresetError::Validation(e.to_string()))?;
    let mut rng = rng_from_seed(opts.seed);
    let radius = 1.0 / opts.lambda.sqrt();
    let mut w = vec![0.0; f + 1];
    let mut avg = vec![0.0; f + 1];
    let mut averaged = 0usize;
    let mut history = Vec::with_capacity(opts.epochs);
    let total = set.total_weight();
    let mut t = 0usize;
    for epoch in 0..opts.epochs {
        for _ in 0..n {
            t += 1;
            let i = pick.sample(&mut rng);
            let x = &set.point(i)[..f];
            let margin = ys[i] * (dot(x, &w[..f]) + w[f]);
            let eta = 1.0 / (opts.lambda * t as f64);
            let shrink = 1.0 - eta * opts.lambda;
            w.iter_mut().for_each(|v| *v *= shrink);
            if margin < 1.0 {
                let step = eta * ys[i];
                w[..f].iter_mut().zip(x).for_each(|(v, xi)| *v += step * xi);
                w[f] += step;
            }
            let norm = dot(&w, &w).sqrt();
            if norm > radius {
                w.iter_mut().for_each(|v| *v *= radius / norm);
            }
            if epoch > 0 || opts.epochs == 1 {
                averaged += 1;
                let r = 1.0 / averaged as f64;
                avg.iter_mut().zip(&w).for_each(|(a, v)| *a += (v - *a) * r);
            }
        }
        if averaged > 0 {
            let loss: f64 = set
                .iter()
                .map(|p| p.weight * hinge(p.coords, labels, &avg[..f], avg[f]))
                .sum();
            history.push(loss / total);
        }
    }
    Ok(SvmFit {
        offset: avg[f],
        coef: avg[..f].to_vec(),
        history,
        warning: None,
    })
}

/// Weighted fraction of points whose label sign is predicted correctly.
pub fn svm_accuracy<S: WeightedPoints + ?Sized>(
    set: &S,
    labels: &SvmLabels,
    coef: &[f64],
    offset: f64,
) -> f64 {
    let f = set.dim() - 1;
    let mut right = 0.0;
    let mut total = 0.0;
    for i in 0..set.len() {
        let p = set.point(i);
        let score = dot(&p[..f], coef) + offset;
        let pred = if score >= 0.0 { 1.0 } else { -1.0 };
        let w = set.weight(i);
        total += w;
        if pred == labels.sign(p[f]) {
            right += w;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        right / total
    }
}

/// Solver settings shared by all problems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub clustering: ClusteringOptions,
    pub meb_tol: f64,
    pub svm: SvmOptions,
    /// Independent clustering runs for k-means/k-median; the cheapest wins.
    pub restarts: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            clustering: ClusteringOptions::default(),
            meb_tol: 1e-3,
            svm: SvmOptions::default(),
            restarts: 10,
        }
    }
}

/// Train `problem` on a positively weighted set.
pub fn solve(
    problem: &Problem,
    set: &WeightedPointSet,
    seed: u64,
    opts: &SolverOptions,
) -> Result<Model> {
    if set.is_empty() {
        return Err(CoresetError::EmptyDataset);
    }
    Ok(match problem {
        Problem::Meb => {
            let s = meb_solve(set, opts.meb_tol)?;
            Model::Ball {
                center: s.center,
                radius: s.radius,
            }
        }
        Problem::Kmeans { k } | Problem::Kmedian { k } => {
            let z = if matches!(problem, Problem::Kmeans { .. }) {
                Exponent::Means
            } else {
                Exponent::Median
            };
            let k = (*k).min(set.len());
            let mut best = k_clustering(set, k, z, seed, &opts.clustering)?;
            for r in 1..opts.restarts {
                let run = k_clustering(
                    set,
                    k,
                    z,
                    derive_seed(seed, "restart", r as u64),
                    &opts.clustering,
                )?;
                if run.cost < best.cost {
                    best = run;
                }
            }
            Model::Centers {
                centers: best.centers,
            }
        }
        Problem::Pca { l } => Model::Frame {
            columns: pca_solve(set, *l)?,
        },
        Problem::Svm(labels) => {
            let fit = svm_train(set, labels, &SvmOptions { seed, ..opts.svm })?;
            Model::Hyperplane {
                coef: fit.coef,
                offset: fit.offset,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::encode_labels;
    use rand::Rng;

    #[test]
    fn two_point_ball() {
        let set = WeightedPointSet::unit(vec![vec![0.0, 0.0], vec![2.0, 0.0]]).unwrap();
        let s = meb_solve(&set, 1e-3).unwrap();
        assert!((s.center[0] - 1.0).abs() < 1e-12 && s.center[1].abs() < 1e-12);
        assert!((s.radius - 1.0).abs() < 1e-12);
        let single = WeightedPointSet::unit(vec![vec![3.0, 4.0]]).unwrap();
        assert_eq!(meb_solve(&single, 1e-3).unwrap().radius, 0.0);
    }

    #[test]
    fn square_ball_center() {
        let set = WeightedPointSet::unit(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![0.5, 0.4],
        ])
        .unwrap();
        let s = meb_solve(&set, 1e-3).unwrap();
        let exact = 0.5f64.sqrt();
        assert!(s.radius >= exact - 1e-12 && s.radius <= exact * 1.001);
    }

    #[test]
    fn rho_values() {
        assert_eq!(lipschitz_rho(&Problem::Meb, 4.5), 1.0);
        assert_eq!(lipschitz_rho(&Problem::Kmedian { k: 2 }, 4.5), 1.0);
        assert_eq!(lipschitz_rho(&Problem::Kmeans { k: 2 }, 4.5), 9.0);
        assert_eq!(lipschitz_rho(&Problem::Pca { l: 3 }, 4.5), 36.0);
        let enc = encode_labels(&["a", "b"], 3);
        let svm = Problem::Svm(SvmLabels::from_encoding(&enc, 0).unwrap());
        assert!(svm.rho(4.5).is_infinite());
    }

    #[test]
    fn pca_exact_subspace_and_zero_frame() {
        let set = WeightedPointSet::unit(vec![
            vec![1.0, 0.0, 0.0],
            vec![-2.0, 0.0, 0.0],
            vec![3.0, 0.0, 0.0],
        ])
        .unwrap();
        let w = pca_solve(&set, 1).unwrap();
        assert!(pca_cost(&set, &w) < 1e-20);
        assert_eq!(pca_cost(&set, &[]), 14.0);
    }

    #[test]
    fn jacobi_diagonalizes() {
        let a = vec![4.0, 1.0, 2.0, 1.0, 3.0, 0.5, 2.0, 0.5, 1.0];
        let (vals, vecs) = symmetric_eigen(a.clone(), 3);
        for (lam, v) in vals.iter().zip(&vecs) {
            for r in 0..3 {
                let av: f64 = (0..3).map(|c| a[r * 3 + c] * v[c]).sum();
                assert!((av - lam * v[r]).abs() < 1e-12);
            }
        }
        assert!(vals[0] >= vals[1] && vals[1] >= vals[2]);
        assert!((vals.iter().sum::<f64>() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn pca_residual_identity() {
        let mut rng = rng_from_seed(1);
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|_| (0..4).map(|_| rng.gen::<f64>()).collect())
            .collect();
        let weights = (0..40).map(|_| rng.gen_range(0.5..3.0)).collect();
        let set = WeightedPointSet::new(rows, weights).unwrap();
        let w = pca_solve(&set, 2).unwrap();
        for (i, a) in w.iter().enumerate() {
            for (j, b) in w.iter().enumerate() {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((dot(a, b) - e).abs() < 1e-9);
            }
        }
        let ident: f64 = set
            .iter()
            .map(|p| {
                p.weight
                    * (dot(p.coords, p.coords)
                        - w.iter().map(|c| dot(p.coords, c).powi(2)).sum::<f64>())
            })
            .sum();
        let c = pca_cost(&set, &w);
        assert!((c - ident).abs() <= 1e-8 * c);
    }

    fn two_class(rows: Vec<Vec<f64>>) -> (WeightedPointSet, SvmLabels) {
        let set = WeightedPointSet::unit(rows).unwrap();
        let labels = SvmLabels {
            positive: 1,
            tau: 1.0,
            num_labels: 2,
        };
        (set, labels)
    }

    #[test]
    fn separable_pair_is_learned() {
        let (set, labels) = two_class(vec![vec![1.0, 1.0], vec![-1.0, 0.0]]);
        let fit = svm_train(&set, &labels, &SvmOptions::default()).unwrap();
        assert_eq!(svm_accuracy(&set, &labels, &fit.coef, fit.offset), 1.0);
        let flipped: Vec<f64> = fit.coef.iter().map(|c| -c).collect();
        assert_eq!(svm_accuracy(&set, &labels, &flipped, -fit.offset), 0.0);
    }

    #[test]
    fn single_class_is_trivial() {
        let (set, labels) = two_class(vec![vec![0.3, 0.0], vec![0.9, 0.0]]);
        let fit = svm_train(&set, &labels, &SvmOptions::default()).unwrap();
        assert!(fit.warning.is_some());
        assert_eq!(svm_accuracy(&set, &labels, &fit.coef, fit.offset), 1.0);
        let model = Model::Hyperplane {
            coef: fit.coef,
            offset: fit.offset,
        };
        assert_eq!(cost(&Problem::Svm(labels), &set, &model), 0.0);
    }

    #[test]
    fn averaged_hinge_settles() {
        let mut rng = rng_from_seed(5);
        let rows: Vec<Vec<f64>> = (0..80)
            .map(|_| {
                let x: f64 = rng.gen();
                let y: f64 = rng.gen();
                let label = if x + 0.3 * rng.gen::<f64>() > 0.6 {
                    1.0
                } else {
                    0.0
                };
                vec![x, y, label]
            })
            .collect();
        let (set, labels) = two_class(rows);
        let fit = svm_train(
            &set,
            &labels,
            &SvmOptions {
                epochs: 50,
                ..Default::default()
            },
        )
        .unwrap();
        let h = &fit.history;
        assert!(h.last().unwrap() <= &(h[0] + 1e-12));
        let rises = h.windows(2).filter(|w| w[1] > w[0] * 1.05 + 1e-9).count();
        assert!(rises <= h.len() / 10, "{h:?}");
    }

    #[test]
    fn costs_by_aggregation() {
        let set = WeightedPointSet::new(vec![vec![0.0], vec![3.0]], vec![2.0, 1.0]).unwrap();
        let centers = vec![vec![1.0]];
        assert_eq!(kmeans_cost(&set, &centers), 2.0 + 4.0);
        assert_eq!(kmedian_cost(&set, &centers), 2.0 + 2.0);
        assert_eq!(meb_cost(&set, &[1.0]), 2.0);
        let model = Model::Ball {
            center: vec![1.0],
            radius: 2.0,
        };
        assert_eq!(cost(&Problem::Meb, &set, &model), 2.0);
    }
}
