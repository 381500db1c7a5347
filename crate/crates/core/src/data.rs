//! Weighted datasets: representation, CSV ingestion, preprocessing and
//! generation of distributed shards.

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoresetError, Result};
use crate::seed::rng_from_seed;

/// Read access to a weighted collection of points in a common dimension.
///
/// Implemented both by [`WeightedPointSet`] (strictly positive weights) and
/// by coresets, whose weights may be zero or negative.
pub trait WeightedPoints {
    fn len(&self) -> usize;
    fn dim(&self) -> usize;
    fn point(&self, i: usize) -> &[f64];
    fn weight(&self, i: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[inline]
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist2(a, b).sqrt()
}

/// A borrowed view of one point and its weight.
#[derive(Debug, Clone, Copy)]
pub struct WeightedPoint<'a> {
    pub coords: &'a [f64],
    pub weight: f64,
}

/// The dataset `P`: points in `R^d` with positive weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedPointSet {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
    w_min: f64,
    total_weight: f64,
}

impl WeightedPointSet {
    pub fn new(rows: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let dim = rows
            .first()
            .map(Vec::len)
            .ok_or(CoresetError::EmptyDataset)?;
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(CoresetError::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            coords.extend_from_slice(row);
        }
        Self::from_flat(dim, coords, weights)
    }

    /// Every point gets weight 1.
    pub fn unit(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        Self::new(rows, vec![1.0; n])
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(CoresetError::Validation(
                "dimension must be positive".into(),
            ));
        }
        if coords.len() != dim * weights.len() {
            return Err(CoresetError::Validation(format!(
                "{} coordinates do not form {} points of dimension {}",
                coords.len(),
                weights.len(),
                dim
            )));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(CoresetError::Validation(format!(
                "non-finite coordinate {bad}"
            )));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(CoresetError::Validation(format!(
                "weight of point {i} must be positive, got {w}"
            )));
        }
        let w_min = weights.iter().copied().fold(f64::INFINITY, f64::min);
        let total_weight = weights.iter().sum();
        Ok(Self {
            dim,
            coords,
            weights,
            w_min,
            total_weight,
        })
    }

    /// Minimum weight; `+inf` for an empty set.
    pub fn w_min(&self) -> f64 {
        self.w_min
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn coords_flat(&self) -> &[f64] {
        &self.coords
    }

    pub fn iter(&self) -> impl Iterator<Item = WeightedPoint<'_>> + '_ {
        self.coords
            .chunks_exact(self.dim)
            .zip(&self.weights)
            .map(|(coords, &weight)| WeightedPoint { coords, weight })
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.coords
            .chunks_exact(self.dim)
            .map(<[f64]>::to_vec)
            .collect()
    }

    /// The points at `indices`, in that order. An empty selection yields an
    /// empty set of the same dimension.
    pub fn subset(&self, indices: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        let mut weights = Vec::with_capacity(indices.len());
        for &i in indices {
            coords.extend_from_slice(self.point(i));
            weights.push(self.weights[i]);
        }
        let w_min = weights.iter().copied().fold(f64::INFINITY, f64::min);
        let total_weight = weights.iter().sum();
        Self {
            dim: self.dim,
            coords,
            weights,
            w_min,
            total_weight,
        }
    }

    pub(crate) fn map_coords(&self, f: impl Fn(usize, f64) -> f64) -> Self {
        let dim = self.dim;
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, &c)| f(i % dim, c))
            .collect();
        Self {
            coords,
            ..self.clone()
        }
    }

    /// Number of distinct coordinate vectors.
    pub fn distinct_count(&self) -> usize {
        let set: BTreeSet<Vec<u64>> = self
            .coords
            .chunks_exact(self.dim)
            .map(|c| c.iter().map(|x| canonical_bits(*x)).collect())
            .collect();
        set.len()
    }

    /// Indices of the first occurrence of each distinct point, in index order.
    pub fn distinct_indices(&self) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        (0..self.len())
            .filter(|&i| {
                seen.insert(
                    self.point(i)
                        .iter()
                        .map(|x| canonical_bits(*x))
                        .collect::<Vec<_>>(),
                )
            })
            .collect()
    }
}

fn canonical_bits(x: f64) -> u64 {
    // +0.0 and -0.0 are the same location
    if x == 0.0 {
        0
    } else {
        x.to_bits()
    }
}

impl WeightedPoints for WeightedPointSet {
    fn len(&self) -> usize {
        self.weights.len()
    }

    fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }
}

/// Mapping of raw labels to the real values `(l - 1) * tau`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelEncoding {
    /// Distinct raw labels, sorted lexicographically; label `l` is `labels[l - 1]`.
    pub labels: Vec<String>,
    pub tau: u64,
}

impl LabelEncoding {
    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, raw: &str) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_str().cmp(raw)).ok()
    }

    pub fn value_of_index(&self, index: usize) -> f64 {
        (index as u64 * self.tau) as f64
    }

    pub fn encode(&self, raw: &str) -> Option<f64> {
        self.index_of(raw).map(|i| self.value_of_index(i))
    }

    /// Label index whose encoded value is closest to `value`.
    pub fn nearest_index(&self, value: f64) -> usize {
        let tau = self.tau.max(1) as f64;
        let idx = (value / tau).round();
        idx.clamp(0.0, (self.num_labels() - 1) as f64) as usize
    }

    pub fn encoded_values(&self) -> Vec<f64> {
        (0..self.num_labels())
            .map(|i| self.value_of_index(i))
            .collect()
    }
}

/// Build the label encoding for a dataset of total dimension `d` (features
/// plus the label coordinate). `tau = ceil(sqrt(d - 1))`.
pub fn encode_labels<S: AsRef<str>>(raw_labels: &[S], d: usize) -> LabelEncoding {
    let labels: BTreeSet<String> = raw_labels.iter().map(|s| s.as_ref().to_string()).collect();
    let features = d.saturating_sub(1) as u64;
    let mut tau = (features as f64).sqrt().ceil() as u64;
    // guard against floating error on perfect squares
    while tau > 0 && (tau - 1) * (tau - 1) >= features {
        tau -= 1;
    }
    while tau * tau < features {
        tau += 1;
    }
    LabelEncoding {
        labels: labels.into_iter().collect(),
        tau,
    }
}

/// Diameter of the normalized, label-encoded sample space:
/// `sqrt((d - 1)(L^2 - 2L + 2))`.
pub fn compute_delta(d: usize, num_labels: usize) -> f64 {
    let l = num_labels as f64;
    (((d - 1) as f64) * (l * l - 2.0 * l + 2.0)).sqrt()
}

/// A point set together with column names and (optionally) its labels.
///
/// When labelled, the encoded label is the last coordinate of every point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub points: WeightedPointSet,
    /// One name per coordinate; the label column name is last when labelled.
    pub columns: Vec<String>,
    /// Label index (into `encoding.labels`) of every point.
    pub labels: Option<Vec<usize>>,
    pub encoding: Option<LabelEncoding>,
}

impl Dataset {
    pub fn unlabeled(points: WeightedPointSet) -> Self {
        let columns = (0..points.dim()).map(|i| format!("x{i}")).collect();
        Self {
            points,
            columns,
            labels: None,
            encoding: None,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_labeled(&self) -> bool {
        self.encoding.is_some()
    }

    /// Number of numerical (non-label) coordinates.
    pub fn feature_dim(&self) -> usize {
        if self.is_labeled() {
            self.points.dim() - 1
        } else {
            self.points.dim()
        }
    }

    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            points: self.points.subset(indices),
            columns: self.columns.clone(),
            labels: self
                .labels
                .as_ref()
                .map(|l| indices.iter().map(|&i| l[i]).collect()),
            encoding: self.encoding.clone(),
        }
    }

    /// The first `fraction` of the rows and the remainder, in file order.
    pub fn split_head(&self, fraction: f64) -> (Self, Self) {
        let cut = ((self.len() as f64) * fraction).round() as usize;
        let cut = cut.min(self.len());
        let head: Vec<usize> = (0..cut).collect();
        let tail: Vec<usize> = (cut..self.len()).collect();
        (self.subset(&head), self.subset(&tail))
    }
}

/// Column selection for [`load_dataset`].
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Weight column; defaults to a column named `weight` when present.
    pub weight_column: Option<String>,
    /// Label column; defaults to a column named `label`, or else the single
    /// non-numeric column if there is exactly one.
    pub label_column: Option<String>,
}

pub fn load_dataset(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    read_dataset(file, opts)
}

pub fn read_dataset<R: Read>(reader: R, opts: &LoadOptions) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let mut records = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        records.push((line, rec));
    }
    if records.is_empty() {
        return Err(CoresetError::EmptyDataset);
    }

    let find = |name: &str| headers.iter().position(|h| h == name);
    let weight_idx = match &opts.weight_column {
        Some(name) => Some(find(name).ok_or_else(|| {
            CoresetError::Validation(format!("weight column '{name}' not found"))
        })?),
        None => find("weight"),
    };
    let label_idx =
        match &opts.label_column {
            Some(name) => Some(find(name).ok_or_else(|| {
                CoresetError::Validation(format!("label column '{name}' not found"))
            })?),
            None => headers
                .iter()
                .position(|h| h.eq_ignore_ascii_case("label"))
                .or_else(|| {
                    let (_, first) = &records[0];
                    let non_numeric: Vec<usize> = (0..headers.len())
                        .filter(|&c| Some(c) != weight_idx)
                        .filter(|&c| first.get(c).is_some_and(|v| v.parse::<f64>().is_err()))
                        .collect();
                    (non_numeric.len() == 1).then(|| non_numeric[0])
                }),
        };
    if weight_idx.is_some() && weight_idx == label_idx {
        return Err(CoresetError::Validation(
            "weight and label columns must differ".into(),
        ));
    }

    let feature_cols: Vec<usize> = (0..headers.len())
        .filter(|&c| Some(c) != weight_idx && Some(c) != label_idx)
        .collect();
    if feature_cols.is_empty() {
        return Err(CoresetError::Validation("no feature columns".into()));
    }

    let mut features = Vec::with_capacity(records.len() * feature_cols.len());
    let mut weights = Vec::with_capacity(records.len());
    let mut raw_labels = Vec::new();
    for (line, rec) in &records {
        if rec.len() != headers.len() {
            return Err(CoresetError::Parse {
                line: *line,
                message: format!("expected {} fields, found {}", headers.len(), rec.len()),
            });
        }
        for &c in &feature_cols {
            let v = parse_field(rec, c, *line, &headers[c])?;
            features.push(v);
        }
        match weight_idx {
            Some(c) => {
                let w = parse_field(rec, c, *line, &headers[c])?;
                if !(w > 0.0) {
                    return Err(CoresetError::Validation(format!(
                        "line {line}: weight must be positive, got {w}"
                    )));
                }
                weights.push(w);
            }
            None => weights.push(1.0),
        }
        if let Some(c) = label_idx {
            raw_labels.push(rec[c].to_string());
        }
    }

    let fdim = feature_cols.len();
    let mut columns: Vec<String> = feature_cols.iter().map(|&c| headers[c].clone()).collect();
    match label_idx {
        None => Ok(Dataset {
            points: WeightedPointSet::from_flat(fdim, features, weights)?,
            columns,
            labels: None,
            encoding: None,
        }),
        Some(c) => {
            let dim = fdim + 1;
            let encoding = encode_labels(&raw_labels, dim);
            let mut coords = Vec::with_capacity(records.len() * dim);
            let mut labels = Vec::with_capacity(records.len());
            for (row, raw) in features.chunks_exact(fdim).zip(&raw_labels) {
                let idx = encoding.index_of(raw).expect("label collected above");
                coords.extend_from_slice(row);
                coords.push(encoding.value_of_index(idx));
                labels.push(idx);
            }
            columns.push(headers[c].clone());
            Ok(Dataset {
                points: WeightedPointSet::from_flat(dim, coords, weights)?,
                columns,
                labels: Some(labels),
                encoding: Some(encoding),
            })
        }
    }
}

fn parse_field(rec: &csv::StringRecord, c: usize, line: usize, name: &str) -> Result<f64> {
    let raw = &rec[c];
    let v: f64 = raw.parse().map_err(|_| CoresetError::Parse {
        line,
        message: format!("column '{name}': '{raw}' is not a number"),
    })?;
    if !v.is_finite() {
        return Err(CoresetError::Parse {
            line,
            message: format!("column '{name}': non-finite value"),
        });
    }
    Ok(v)
}

/// Min-max scale every numerical coordinate to `[0, 1]`. The label
/// coordinate and the weights are left untouched; constant dimensions map to 0.
pub fn normalize_features(ds: &Dataset) -> Result<Dataset> {
    if ds.is_empty() {
        return Err(CoresetError::EmptyDataset);
    }
    let nf = ds.feature_dim();
    let mut lo = vec![f64::INFINITY; nf];
    let mut hi = vec![f64::NEG_INFINITY; nf];
    for p in ds.points.iter() {
        for j in 0..nf {
            lo[j] = lo[j].min(p.coords[j]);
            hi[j] = hi[j].max(p.coords[j]);
        }
    }
    let points = ds.points.map_coords(|j, c| {
        if j >= nf {
            c
        } else if hi[j] > lo[j] {
            ((c - lo[j]) / (hi[j] - lo[j])).clamp(0.0, 1.0)
        } else {
            0.0
        }
    });
    Ok(Dataset {
        points,
        ..ds.clone()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Uniform,
    Specialized,
    Hybrid,
}

impl std::str::FromStr for Scheme {
    type Err = CoresetError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Scheme::Uniform),
            "specialized" => Ok(Scheme::Specialized),
            "hybrid" => Ok(Scheme::Hybrid),
            other => Err(CoresetError::Config(format!("unknown scheme '{other}'"))),
        }
    }
}

/// How points are distributed across nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardSpec {
    pub scheme: Scheme,
    pub n: usize,
    /// Specialized-node count for the hybrid scheme.
    pub n0: usize,
    pub seed: u64,
}

impl ShardSpec {
    pub fn uniform(n: usize, seed: u64) -> Self {
        Self {
            scheme: Scheme::Uniform,
            n,
            n0: 0,
            seed,
        }
    }

    pub fn specialized(n: usize) -> Self {
        Self {
            scheme: Scheme::Specialized,
            n,
            n0: 0,
            seed: 0,
        }
    }

    pub fn hybrid(n: usize, n0: usize, seed: u64) -> Self {
        Self {
            scheme: Scheme::Hybrid,
            n,
            n0,
            seed,
        }
    }
}

/// Split a dataset across `spec.n` nodes. Shards are disjoint and their
/// union is the input; shard row order follows the input order.
pub fn partition_dataset(ds: &Dataset, spec: &ShardSpec) -> Result<Vec<Dataset>> {
    if spec.n == 0 {
        return Err(CoresetError::Config("node count must be positive".into()));
    }
    let mut rng = rng_from_seed(spec.seed);
    let mut node_of = vec![0usize; ds.len()];
    match spec.scheme {
        Scheme::Uniform => {
            for slot in node_of.iter_mut() {
                *slot = rng.gen_range(0..spec.n);
            }
        }
        Scheme::Specialized => {
            let (labels, enc) = labels_of(ds)?;
            if spec.n != enc.num_labels() {
                return Err(CoresetError::Config(format!(
                    "specialized scheme needs one node per label: n={} but L={}",
                    spec.n,
                    enc.num_labels()
                )));
            }
            node_of.copy_from_slice(labels);
        }
        Scheme::Hybrid => {
            let (labels, enc) = labels_of(ds)?;
            if !(spec.n0 >= 1 && spec.n0 < spec.n) {
                return Err(CoresetError::Config(format!(
                    "hybrid scheme needs 1 <= n0 < n, got n0={} n={}",
                    spec.n0, spec.n
                )));
            }
            if spec.n0 >= enc.num_labels() {
                return Err(CoresetError::Config(format!(
                    "hybrid scheme needs n0 < L, got n0={} L={}",
                    spec.n0,
                    enc.num_labels()
                )));
            }
            for (slot, &label) in node_of.iter_mut().zip(labels) {
                *slot = if label < spec.n0 {
                    label
                } else {
                    rng.gen_range(spec.n0..spec.n)
                };
            }
        }
    }
    let mut members = vec![Vec::new(); spec.n];
    for (i, &j) in node_of.iter().enumerate() {
        members[j].push(i);
    }
    Ok(members.iter().map(|idx| ds.subset(idx)).collect())
}

fn labels_of(ds: &Dataset) -> Result<(&[usize], &LabelEncoding)> {
    match (&ds.labels, &ds.encoding) {
        (Some(l), Some(e)) => Ok((l, e)),
        _ => Err(CoresetError::Config(
            "this distribution scheme requires labelled data".into(),
        )),
    }
}

/// Write shards as one CSV with a leading `node` column.
pub fn write_shards_csv<W: Write>(shards: &[Dataset], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let Some(first) = shards.first() else {
        return Ok(());
    };
    let mut header = vec!["node".to_string()];
    header.extend(first.columns.iter().cloned());
    header.push("weight".into());
    w.write_record(&header)?;
    for (j, shard) in shards.iter().enumerate() {
        for (i, p) in shard.points.iter().enumerate() {
            let mut row = vec![j.to_string()];
            let nf = shard.feature_dim();
            row.extend(p.coords[..nf].iter().map(f64::to_string));
            if let (Some(labels), Some(enc)) = (&shard.labels, &shard.encoding) {
                row.push(enc.labels[labels[i]].clone());
            }
            row.push(p.weight.to_string());
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_ds(text: &str) -> Result<Dataset> {
        read_dataset(text.as_bytes(), &LoadOptions::default())
    }

    #[test]
    fn single_row_gets_unit_weight() {
        let ds = csv_ds("a,b\n0,0\n").unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.points.weight(0), 1.0);
        assert!(!ds.is_labeled());
    }

    #[test]
    fn zero_weight_is_rejected() {
        let err = csv_ds("a,weight\n1,1\n2,0\n").unwrap_err();
        assert!(matches!(err, CoresetError::Validation(_)), "{err}");
    }

    #[test]
    fn malformed_row_reports_line() {
        let err = csv_ds("a,b\n1,2\n3,x\n").unwrap_err();
        match err {
            CoresetError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn weight_column_override() {
        let opts = LoadOptions {
            weight_column: Some("w".into()),
            label_column: None,
        };
        let ds = read_dataset("a,w\n1,2\n3,4\n".as_bytes(), &opts).unwrap();
        assert_eq!(ds.points.dim(), 1);
        assert_eq!(ds.points.weights(), &[2.0, 4.0]);
        assert_eq!(ds.points.total_weight(), 6.0);
        assert_eq!(ds.points.w_min(), 2.0);
    }

    #[test]
    fn label_column_detected_and_encoded_last() {
        let ds = csv_ds("species,a,b\nb,0,1\na,1,0\nc,2,2\n").unwrap();
        assert_eq!(ds.points.dim(), 3);
        assert_eq!(ds.columns, vec!["a", "b", "species"]);
        let enc = ds.encoding.as_ref().unwrap();
        assert_eq!(enc.labels, vec!["a", "b", "c"]);
        // d = 3, tau = ceil(sqrt 2) = 2
        assert_eq!(enc.tau, 2);
        assert_eq!(ds.points.point(0), &[0.0, 1.0, 2.0]);
        assert_eq!(ds.points.point(1), &[1.0, 0.0, 0.0]);
        assert_eq!(ds.points.point(2), &[2.0, 2.0, 4.0]);
    }

    #[test]
    fn tau_examples() {
        let iris = encode_labels(&["x", "y", "z"], 5);
        assert_eq!(iris.tau, 2);
        assert_eq!(iris.encoded_values(), vec![0.0, 2.0, 4.0]);
        let digits: Vec<String> = (0..10).map(|i| i.to_string()).collect();
        let pen = encode_labels(&digits, 17);
        assert_eq!(pen.tau, 4);
        assert_eq!(pen.encoded_values().last(), Some(&36.0));
        let single = encode_labels(&["only", "only"], 5);
        assert_eq!(single.num_labels(), 1);
        assert_eq!(single.encode("only"), Some(0.0));
    }

    #[test]
    fn delta_values() {
        assert!((compute_delta(5, 3) - 4.47).abs() < 0.005);
        assert!((compute_delta(17, 10) - 36.22).abs() < 0.005);
        assert!((compute_delta(401, 10) - 181.11).abs() < 0.005);
    }

    #[test]
    fn normalize_min_max() {
        let ds = csv_ds("a,b,c\n2,0,5\n4,1,5\n6,0.5,5\n").unwrap();
        let n = normalize_features(&ds).unwrap();
        let col = |j: usize| n.points.iter().map(|p| p.coords[j]).collect::<Vec<_>>();
        assert_eq!(col(0), vec![0.0, 0.5, 1.0]);
        assert_eq!(col(1), vec![0.0, 1.0, 0.5]);
        assert_eq!(col(2), vec![0.0, 0.0, 0.0]);
        assert_eq!(normalize_features(&n).unwrap(), n);
    }

    #[test]
    fn normalize_keeps_label_coordinate() {
        let ds = csv_ds("a,label\n10,x\n20,y\n").unwrap();
        let n = normalize_features(&ds).unwrap();
        assert_eq!(n.points.point(0), &[0.0, 0.0]);
        assert_eq!(n.points.point(1), &[1.0, 1.0]);
    }

    fn labelled(n: usize, labels: usize) -> Dataset {
        let mut text = String::from("a,label\n");
        for i in 0..n {
            text.push_str(&format!("{},{}\n", i, i % labels));
        }
        let opts = LoadOptions {
            label_column: Some("label".into()),
            ..Default::default()
        };
        read_dataset(text.as_bytes(), &opts).unwrap()
    }

    #[test]
    fn specialized_requires_n_equal_l() {
        let ds = labelled(30, 3);
        let err = partition_dataset(&ds, &ShardSpec::specialized(2)).unwrap_err();
        assert!(matches!(err, CoresetError::Config(_)));
        let shards = partition_dataset(&ds, &ShardSpec::specialized(3)).unwrap();
        for (j, s) in shards.iter().enumerate() {
            assert_eq!(s.len(), 10);
            assert!(s.labels.as_ref().unwrap().iter().all(|&l| l == j));
        }
    }

    #[test]
    fn hybrid_first_nodes_single_label() {
        let ds = labelled(400, 4);
        let shards = partition_dataset(&ds, &ShardSpec::hybrid(4, 2, 9)).unwrap();
        for (j, shard) in shards.iter().enumerate().take(2) {
            assert!(shard.labels.as_ref().unwrap().iter().all(|&l| l == j));
        }
        for shard in &shards[2..4] {
            let ls: BTreeSet<usize> = shard.labels.as_ref().unwrap().iter().copied().collect();
            assert_eq!(ls, BTreeSet::from([2, 3]));
        }
        assert_eq!(shards.iter().map(Dataset::len).sum::<usize>(), 400);
    }

    #[test]
    fn uniform_split_sizes_sum() {
        let ds = Dataset::unlabeled(
            WeightedPointSet::unit((0..1000).map(|i| vec![i as f64]).collect()).unwrap(),
        );
        let shards = partition_dataset(&ds, &ShardSpec::uniform(2, 3)).unwrap();
        assert_eq!(shards[0].len() + shards[1].len(), 1000);
        assert!(shards[0].len() > 400 && shards[1].len() > 400);
    }

    #[test]
    fn shards_csv_has_node_column() {
        let ds = labelled(6, 2);
        let shards = partition_dataset(&ds, &ShardSpec::specialized(2)).unwrap();
        let mut buf = Vec::new();
        write_shards_csv(&shards, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("node,a,label,weight"));
        assert_eq!(lines.next(), Some("0,0,0,1"));
        assert_eq!(text.lines().count(), 7);
    }

    #[test]
    fn nearest_label_index() {
        let enc = encode_labels(&["a", "b", "c"], 5);
        assert_eq!(enc.nearest_index(0.9), 0);
        assert_eq!(enc.nearest_index(1.1), 1);
        assert_eq!(enc.nearest_index(9.0), 2);
    }
}
