//! The weighted summary type shared by every construction, with CSV and
//! JSON serialization.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::data::{WeightedPointSet, WeightedPoints};
use crate::error::{CoresetError, Result};

/// Which construction produced a coreset, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub algorithm: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(algorithm: impl Into<String>, seed: Option<u64>) -> Self {
        Self {
            algorithm: algorithm.into(),
            params: BTreeMap::new(),
            seed,
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }
}

/// A small weighted set standing in for a dataset.
///
/// Weights may be zero or negative (distributed residual center weights);
/// use [`Coreset::nonnegative`] before handing it to a solver that needs a
/// proper weighted set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coreset {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
    pub provenance: Provenance,
    /// Certified approximation bound, when the construction provides one.
    pub eps_bound: Option<f64>,
    pub certificate: Option<crate::rcc::EpsCertificate>,
}

impl Coreset {
    pub fn new(
        dim: usize,
        coords: Vec<f64>,
        weights: Vec<f64>,
        provenance: Provenance,
    ) -> Result<Self> {
        if coords.len() != dim * weights.len() {
            return Err(CoresetError::Validation(format!(
                "{} coordinates do not form {} points of dimension {dim}",
                coords.len(),
                weights.len()
            )));
        }
        Ok(Self {
            dim,
            coords,
            weights,
            provenance,
            eps_bound: None,
            certificate: None,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>], weights: Vec<f64>, provenance: Provenance) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        let coords = rows.iter().flatten().copied().collect();
        Self::new(dim, coords, weights, provenance)
    }

    /// The whole dataset as its own (lossless) coreset.
    pub fn identity(set: &WeightedPointSet) -> Self {
        Self {
            dim: set.dim(),
            coords: set.coords_flat().to_vec(),
            weights: set.weights().to_vec(),
            provenance: Provenance::new("identity", None),
            eps_bound: Some(0.0),
            certificate: None,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.coords
            .chunks_exact(self.dim.max(1))
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn has_nonpositive_weights(&self) -> bool {
        self.weights.iter().any(|&w| w <= 0.0)
    }

    /// The coreset as a weighted point set; fails on non-positive weights.
    pub fn to_point_set(&self) -> Result<WeightedPointSet> {
        WeightedPointSet::from_flat(self.dim, self.coords.clone(), self.weights.clone())
    }

    /// Clamp-and-renormalize adapter for solvers that need positive weights:
    /// non-positive weights are dropped and the remaining weights are scaled
    /// so the total equals the signed total (or the positive total, if the
    /// signed total is not positive).
    pub fn nonnegative(&self) -> Result<WeightedPointSet> {
        let signed_total = self.total_weight();
        let mut coords = Vec::new();
        let mut weights = Vec::new();
        for i in 0..self.len() {
            if self.weights[i] > 0.0 {
                coords.extend_from_slice(self.point(i));
                weights.push(self.weights[i]);
            }
        }
        if weights.is_empty() {
            return Err(CoresetError::Validation(
                "coreset has no positively weighted point".into(),
            ));
        }
        let positive_total: f64 = weights.iter().sum();
        if signed_total > 0.0 {
            let scale = signed_total / positive_total;
            weights.iter_mut().for_each(|w| *w *= scale);
        }
        WeightedPointSet::from_flat(self.dim, coords, weights)
    }

    /// Write `coords..., weight` rows. `columns` names the coordinates;
    /// defaults to `x0, x1, ...`.
    pub fn write_csv<W: Write>(&self, writer: W, columns: Option<&[String]>) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = match columns {
            Some(c) if c.len() == self.dim => c.to_vec(),
            Some(c) => {
                return Err(CoresetError::DimensionMismatch {
                    expected: self.dim,
                    got: c.len(),
                })
            }
            None => (0..self.dim).map(|i| format!("x{i}")).collect(),
        };
        header.push("weight".into());
        w.write_record(&header)?;
        for i in 0..self.len() {
            let mut row: Vec<String> = self.point(i).iter().map(f64::to_string).collect();
            row.push(self.weights[i].to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Read a coreset CSV: every column except `weight` is a coordinate.
    pub fn read_csv<R: Read>(reader: R) -> Result<(Self, Vec<String>)> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let wcol = headers
            .iter()
            .position(|h| h == "weight")
            .ok_or_else(|| CoresetError::Validation("coreset CSV lacks a weight column".into()))?;
        let dim = headers.len() - 1;
        let mut coords = Vec::new();
        let mut weights = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            for (c, field) in rec.iter().enumerate() {
                let v: f64 = field.parse().map_err(|_| CoresetError::Parse {
                    line,
                    message: format!("'{field}' is not a number"),
                })?;
                if c == wcol {
                    weights.push(v);
                } else {
                    coords.push(v);
                }
            }
        }
        let columns = headers
            .iter()
            .enumerate()
            .filter(|(c, _)| *c != wcol)
            .map(|(_, h)| h.clone())
            .collect();
        Ok((
            Self::new(dim, coords, weights, Provenance::new("external", None))?,
            columns,
        ))
    }

    /// JSON sidecar: provenance, bound and certificate (no points).
    pub fn sidecar_json(&self) -> serde_json::Value {
        serde_json::json!({
            "provenance": self.provenance,
            "size": self.len(),
            "dim": self.dim,
            "total_weight": self.total_weight(),
            "eps_bound": self.eps_bound,
            "certificate": self.certificate,
        })
    }
}

impl WeightedPoints for Coreset {
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

/// Accumulates weighted draws, merging repeated picks of the same source
/// index into one coreset point.
#[derive(Debug, Default)]
pub(crate) struct DrawCollector {
    order: Vec<usize>,
    weight: BTreeMap<usize, f64>,
}

impl DrawCollector {
    pub fn add(&mut self, index: usize, w: f64) {
        match self.weight.get_mut(&index) {
            Some(acc) => *acc += w,
            None => {
                self.order.push(index);
                self.weight.insert(index, w);
            }
        }
    }

    /// Source indices in first-draw order with their summed weights.
    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.order.iter().map(|i| (*i, self.weight[i]))
    }
}
