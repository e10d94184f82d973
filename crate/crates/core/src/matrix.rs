//! Pairwise coefficient matrices over a dataset.
//!
//! Each column is ranked once (two sorts: `X` and `-X`) into a
//! [`TransformCache`]; the pairwise pass then only runs the O(m) kernels.
//! Work is split into one unit per `(i, j)` cell and collected in index
//! order, so the output does not depend on the rayon schedule.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::{self, CoefficientValue, MinrelProfile, Sign};
use crate::error::{Error, Result};
use crate::ranks::{ColumnTransforms, DataColumn};

/// Named columns of identical length.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<DataColumn>,
}

impl Dataset {
    pub fn new(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::LengthMismatch {
                left: names.len(),
                right: columns.len(),
            });
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        let columns = names
            .iter()
            .zip(columns)
            .map(|(name, values)| DataColumn::named(name.clone(), values))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = columns.first() {
            for (name, col) in names.iter().zip(&columns) {
                if col.len() != first.len() {
                    return Err(Error::LengthMismatch {
                        left: first.len(),
                        right: col.len(),
                    }
                    .in_column(name));
                }
            }
        }
        Ok(Self { names, columns })
    }

    pub fn from_pairs<S: Into<String>>(pairs: Vec<(S, Vec<f64>)>) -> Result<Self> {
        let (names, columns) = pairs.into_iter().map(|(n, c)| (n.into(), c)).unzip();
        Self::new(names, columns)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn columns(&self) -> &[DataColumn] {
        &self.columns
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.columns.len()
    }

    /// Number of samples per variable (0 for an empty dataset).
    pub fn m(&self) -> usize {
        self.columns.first().map_or(0, DataColumn::len)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        Ok(self.columns[self.index_of(name)?].values())
    }

    /// A new dataset holding the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let columns = self
            .columns
            .iter()
            .map(|c| rows.iter().map(|&r| c.values()[r]).collect())
            .collect();
        Self::new(self.names.clone(), columns)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Pearson,
    Spearman,
    Iota,
    Iota2,
    MaxIotaSq,
    MinrelSimple,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Pearson,
        Metric::Spearman,
        Metric::Iota,
        Metric::Iota2,
        Metric::MaxIotaSq,
        Metric::MinrelSimple,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Pearson => "pearson",
            Metric::Spearman => "spearman",
            Metric::Iota => "iota",
            Metric::Iota2 => "iota2",
            Metric::MaxIotaSq => "max_iota_sq",
            Metric::MinrelSimple => "minrel_simple",
        }
    }

    pub fn is_symmetric(self) -> bool {
        matches!(self, Metric::Pearson | Metric::Spearman | Metric::MaxIotaSq)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown metric `{s}`")))
    }
}

/// Per-column transforms of a dataset, computed once.
#[derive(Debug, Clone)]
pub struct TransformCache {
    entries: Vec<ColumnTransforms>,
}

impl TransformCache {
    pub fn new(dataset: &Dataset) -> Result<Self> {
        let entries = dataset
            .columns
            .par_iter()
            .zip(&dataset.names)
            .map(|(col, name)| ColumnTransforms::new(col.values()).map_err(|e| e.in_column(name)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &ColumnTransforms {
        &self.entries[i]
    }
}

/// Row-major `n × n` results of one metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientMatrix {
    pub metric: Metric,
    pub names: Vec<String>,
    values: Vec<f64>,
    degenerate: Vec<bool>,
}

impl CoefficientMatrix {
    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n() + j]
    }

    pub fn is_degenerate(&self, i: usize, j: usize) -> bool {
        self.degenerate[i * self.n() + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn degenerate_mask(&self) -> &[bool] {
        &self.degenerate
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n();
        &self.values[i * n..(i + 1) * n]
    }
}

/// Evaluates one cell from cached transforms.
pub fn metric_cell(
    dataset: &Dataset,
    cache: &TransformCache,
    metric: Metric,
    i: usize,
    j: usize,
) -> CoefficientValue {
    let (ti, tj) = (cache.get(i), cache.get(j));
    match metric {
        Metric::Pearson => coeff::pearson_unchecked(dataset.columns[i].values(), dataset.columns[j].values()),
        Metric::Spearman => coeff::spearman_from_transforms(ti, tj),
        Metric::Iota => coeff::iota_from_transforms(ti, tj, Sign::Pos, Sign::Pos),
        // ι₂(X, Y) = ι(-Y, -X)
        Metric::Iota2 => coeff::iota_from_transforms(tj, ti, Sign::Neg, Sign::Neg),
        Metric::MaxIotaSq => {
            let p = MinrelProfile::from_transforms(ti, tj);
            CoefficientValue::new(p.max_iota_sq)
        }
        Metric::MinrelSimple => {
            coeff::minrel_simple_unchecked(dataset.columns[i].values(), dataset.columns[j].values())
        }
    }
}

fn check_square(dataset: &Dataset, cache: &TransformCache) -> Result<()> {
    if cache.len() != dataset.n() {
        return Err(Error::InvalidArgument(format!(
            "cache holds {} columns, dataset has {}",
            cache.len(),
            dataset.n()
        )));
    }
    Ok(())
}

/// `values[i][j] = metric(column_i, column_j)`.
pub fn pairwise_matrix(dataset: &Dataset, metric: Metric) -> Result<CoefficientMatrix> {
    let cache = TransformCache::new(dataset)?;
    pairwise_matrix_cached(dataset, &cache, metric)
}

pub fn pairwise_matrix_cached(
    dataset: &Dataset,
    cache: &TransformCache,
    metric: Metric,
) -> Result<CoefficientMatrix> {
    check_square(dataset, cache)?;
    let n = dataset.n();
    let cells: Vec<CoefficientValue> = (0..n * n)
        .into_par_iter()
        .map(|k| metric_cell(dataset, cache, metric, k / n, k % n))
        .collect();
    Ok(CoefficientMatrix {
        metric,
        names: dataset.names.clone(),
        values: cells.iter().map(|c| c.value).collect(),
        degenerate: cells.iter().map(|c| c.degenerate).collect(),
    })
}

/// Single-threaded reference for the parallel pass.
pub fn pairwise_matrix_sequential(dataset: &Dataset, metric: Metric) -> Result<CoefficientMatrix> {
    let cache = TransformCache::new(dataset)?;
    let n = dataset.n();
    let cells: Vec<CoefficientValue> = (0..n * n)
        .map(|k| metric_cell(dataset, &cache, metric, k / n, k % n))
        .collect();
    Ok(CoefficientMatrix {
        metric,
        names: dataset.names.clone(),
        values: cells.iter().map(|c| c.value).collect(),
        degenerate: cells.iter().map(|c| c.degenerate).collect(),
    })
}

/// Full four-orientation profile for every ordered pair, row-major.
pub fn minrel_profile_matrix(dataset: &Dataset) -> Result<Vec<MinrelProfile>> {
    let cache = TransformCache::new(dataset)?;
    let n = dataset.n();
    Ok((0..n * n)
        .into_par_iter()
        .map(|k| MinrelProfile::from_transforms(cache.get(k / n), cache.get(k % n)))
        .collect())
}
