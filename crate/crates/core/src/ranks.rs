//! Fractional ranks and the rank-based marginal transforms.
//!
//! Ranks run from 1 to `m`; tied values share the average of the positions
//! they span. On top of ranks this module provides the uniform transform
//! `r/m` and the two squared-rank transforms whose marginals are
//! triangular on `[-0.5, 0.5]`:
//!
//! * decreasing: `r(X)² / m² - 0.5`, mean close to `-1/6`;
//! * increasing: `0.5 - r(-X)² / m²`, mean close to `+1/6`.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

static SORTS: AtomicUsize = AtomicUsize::new(0);

/// Number of sorts performed by [`compute_ranks`] since process start.
///
/// Used to check that pairwise passes reuse cached ranks.
pub fn sort_invocations() -> usize {
    SORTS.load(Ordering::Relaxed)
}

/// Checks the shared preconditions of every column-level operation.
pub fn validate(values: &[f64]) -> Result<()> {
    if values.len() < 2 {
        return Err(Error::TooFewSamples(values.len()));
    }
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    Ok(())
}

/// One variable's samples: finite values, at least two of them.
#[derive(Debug, Clone, PartialEq)]
pub struct DataColumn {
    values: Vec<f64>,
    name: Option<String>,
}

impl DataColumn {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        validate(&values)?;
        Ok(Self { values, name: None })
    }

    pub fn named(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        validate(&values).map_err(|e| e.in_column(&name))?;
        Ok(Self {
            values,
            name: Some(name),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Fractional ranks of a column, in the original sample order.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector {
    ranks: Vec<f64>,
}

impl RankVector {
    pub fn ranks(&self) -> &[f64] {
        &self.ranks
    }

    pub fn m(&self) -> usize {
        self.ranks.len()
    }
}

/// Which triangular marginal a set of scores follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Decreasing,
    Increasing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangularScores {
    scores: Vec<f64>,
    direction: Direction,
}

impl TriangularScores {
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }
}

/// Increasing-order fractional ranks of `values`, or of `-values` when
/// `negate` is set (ranks in decreasing order).
pub fn compute_ranks(values: &[f64], negate: bool) -> Result<RankVector> {
    validate(values)?;
    let m = values.len();
    let key = |i: usize| if negate { -values[i] } else { values[i] };

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| key(a).total_cmp(&key(b)));
    SORTS.fetch_add(1, Ordering::Relaxed);

    let mut ranks = vec![0.0; m];
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        // -0.0 and 0.0 are equal values and must tie
        while end < m && key(order[end]) == key(order[start]) {
            end += 1;
        }
        // positions start+1 ..= end, averaged
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    Ok(RankVector { ranks })
}

/// `r(X)/m`, values in `(0, 1]`.
pub fn uniform_norm(values: &[f64]) -> Result<Vec<f64>> {
    let ranks = compute_ranks(values, false)?;
    let m = ranks.m() as f64;
    Ok(ranks.ranks.iter().map(|r| r / m).collect())
}

/// Decreasing triangular scores from precomputed ranks of `X`.
pub fn tri_decreasing_from_ranks(ranks: &RankVector) -> TriangularScores {
    let m2 = (ranks.m() * ranks.m()) as f64;
    TriangularScores {
        scores: ranks.ranks.iter().map(|r| r * r / m2 - 0.5).collect(),
        direction: Direction::Decreasing,
    }
}

/// Increasing triangular scores from precomputed ranks of `-X`.
pub fn tri_increasing_from_ranks(neg_ranks: &RankVector) -> TriangularScores {
    let m2 = (neg_ranks.m() * neg_ranks.m()) as f64;
    TriangularScores {
        scores: neg_ranks.ranks.iter().map(|r| 0.5 - r * r / m2).collect(),
        direction: Direction::Increasing,
    }
}

/// `r(X)²/m² - 0.5`.
pub fn tri_decreasing(values: &[f64]) -> Result<TriangularScores> {
    Ok(tri_decreasing_from_ranks(&compute_ranks(values, false)?))
}

/// `0.5 - r(-X)²/m²`.
pub fn tri_increasing(values: &[f64]) -> Result<TriangularScores> {
    Ok(tri_increasing_from_ranks(&compute_ranks(values, true)?))
}

/// Every rank-based view of one column that the coefficients need: ranks of
/// `X` and `-X` and the triangular scores of both, from exactly two sorts.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnTransforms {
    pub ranks: RankVector,
    pub neg_ranks: RankVector,
    /// `tri_decreasing(X)`
    pub dec: TriangularScores,
    /// `tri_increasing(X)`
    pub inc: TriangularScores,
    /// `tri_decreasing(-X)`
    pub dec_neg: TriangularScores,
    /// `tri_increasing(-X)`
    pub inc_neg: TriangularScores,
}

impl ColumnTransforms {
    pub fn new(values: &[f64]) -> Result<Self> {
        let ranks = compute_ranks(values, false)?;
        let neg_ranks = compute_ranks(values, true)?;
        Ok(Self {
            dec: tri_decreasing_from_ranks(&ranks),
            inc: tri_increasing_from_ranks(&neg_ranks),
            dec_neg: tri_decreasing_from_ranks(&neg_ranks),
            inc_neg: tri_increasing_from_ranks(&ranks),
            ranks,
            neg_ranks,
        })
    }

    pub fn m(&self) -> usize {
        self.ranks.m()
    }
}
