//! Variable-ranking filter and its evaluation.
//!
//! Candidates are ordered by a bivariate score against a target. Two
//! criteria are compared per target by the average 1-based position of the
//! known relevant variables: the lower average wins, equal averages draw.
//! For data without known relevant sets, [`split_half_cv_eval`] ranks on
//! one half of the rows and scores top-k subsets by cross-validated MSE on
//! the other half.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::{self, MinrelProfile, Sign};
use crate::error::{Error, Result};
use crate::matrix::{Dataset, TransformCache};
use crate::synth;

/// Ridge added to the normal equations' diagonal when they are singular.
pub const RIDGE_FALLBACK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Spearman ρ².
    Rho2,
    /// max ι² over the four orientations.
    MaxIotaSq,
    /// Signed ι(target, candidate), a single orientation.
    Iota,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::Rho2, Criterion::MaxIotaSq, Criterion::Iota];

    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::Rho2 => "rho2",
            Criterion::MaxIotaSq => "max_iota_sq",
            Criterion::Iota => "iota",
        }
    }

    /// Score of `candidate` for predicting `target`. Degenerate
    /// coefficients score 0.
    pub fn score(self, cache: &TransformCache, target: usize, candidate: usize) -> f64 {
        let (tt, tc) = (cache.get(target), cache.get(candidate));
        match self {
            Criterion::Rho2 => {
                let rho = coeff::spearman_from_transforms(tt, tc).value;
                rho * rho
            }
            Criterion::MaxIotaSq => MinrelProfile::from_transforms(tt, tc).max_iota_sq,
            Criterion::Iota => coeff::iota_from_transforms(tt, tc, Sign::Pos, Sign::Pos).value,
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown criterion `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingResult {
    pub target: String,
    pub criterion: Criterion,
    /// Candidates by descending score; equal scores keep column order.
    pub ordered: Vec<(String, f64)>,
}

impl RankingResult {
    /// Orders `(name, score)` pairs given in column order.
    pub fn from_scores(target: impl Into<String>, criterion: Criterion, scored: Vec<(String, f64)>) -> Self {
        let mut ordered = scored;
        // stable: ties stay in ascending column index
        ordered.sort_by(|a, b| b.1.total_cmp(&a.1));
        Self {
            target: target.into(),
            criterion,
            ordered,
        }
    }

    /// 1-based position of `name`.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.ordered.iter().position(|(n, _)| n == name).map(|p| p + 1)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.ordered.iter().map(|(n, _)| n.as_str())
    }
}

pub fn rank_variables(dataset: &Dataset, target: &str, criterion: Criterion) -> Result<RankingResult> {
    let cache = TransformCache::new(dataset)?;
    rank_variables_cached(dataset, &cache, target, criterion)
}

pub fn rank_variables_cached(
    dataset: &Dataset,
    cache: &TransformCache,
    target: &str,
    criterion: Criterion,
) -> Result<RankingResult> {
    let t = dataset.index_of(target)?;
    if dataset.n() < 2 {
        return Err(Error::InvalidArgument("need at least one candidate column".into()));
    }
    let scored = (0..dataset.n())
        .filter(|&j| j != t)
        .map(|j| (dataset.names()[j].clone(), criterion.score(cache, t, j)))
        .collect();
    Ok(RankingResult::from_scores(target, criterion, scored))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelevanceEval {
    pub relevant: Vec<String>,
    pub avg_position: f64,
}

/// Mean 1-based position of the relevant variables in `ranking`.
pub fn average_position<S: AsRef<str>>(ranking: &RankingResult, relevant: &[S]) -> Result<RelevanceEval> {
    if relevant.is_empty() {
        return Err(Error::InvalidArgument("relevant set is empty".into()));
    }
    let mut seen = HashSet::new();
    let mut total = 0usize;
    for name in relevant {
        let name = name.as_ref();
        if !seen.insert(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        total += ranking
            .position(name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))?;
    }
    Ok(RelevanceEval {
        relevant: relevant.iter().map(|s| s.as_ref().to_string()).collect(),
        avg_position: total as f64 / relevant.len() as f64,
    })
}

/// A target with its known relevant variables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetTask {
    pub target: String,
    pub relevant: Vec<String>,
}

impl TargetTask {
    pub fn new<S: Into<String>>(target: impl Into<String>, relevant: impl IntoIterator<Item = S>) -> Self {
        Self {
            target: target.into(),
            relevant: relevant.into_iter().map(Into::into).collect(),
        }
    }
}

impl FromStr for TargetTask {
    type Err = Error;

    /// `TARGET=REL1,REL2,...`
    fn from_str(s: &str) -> Result<Self> {
        let (target, rel) = s
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("task `{s}` is not TARGET=REL1,REL2")))?;
        let relevant: Vec<&str> = rel.split(',').map(str::trim).filter(|r| !r.is_empty()).collect();
        if target.trim().is_empty() || relevant.is_empty() {
            return Err(Error::InvalidArgument(format!("task `{s}` is not TARGET=REL1,REL2")));
        }
        Ok(TargetTask::new(target.trim(), relevant))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Win,
    Loss,
    Draw,
}

impl Outcome {
    fn swapped(self) -> Self {
        match self {
            Outcome::Win => Outcome::Loss,
            Outcome::Loss => Outcome::Win,
            Outcome::Draw => Outcome::Draw,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetOutcome {
    pub target: String,
    pub first_avg_position: f64,
    pub second_avg_position: f64,
    /// From the first criterion's point of view.
    pub outcome: Outcome,
}

/// Win/loss/draw of `first` against `second` over a set of targets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WinLossRecord {
    pub first: Criterion,
    pub second: Criterion,
    pub outcomes: Vec<TargetOutcome>,
    pub wins: usize,
    pub losses: usize,
    pub draws: usize,
    /// Targets dropped for having fewer relevant variables than required.
    pub skipped: Vec<String>,
}

impl WinLossRecord {
    fn from_outcomes(first: Criterion, second: Criterion, outcomes: Vec<TargetOutcome>, skipped: Vec<String>) -> Self {
        let count = |o: Outcome| outcomes.iter().filter(|t| t.outcome == o).count();
        Self {
            first,
            second,
            wins: count(Outcome::Win),
            losses: count(Outcome::Loss),
            draws: count(Outcome::Draw),
            outcomes,
            skipped,
        }
    }

    /// The same record seen from the second criterion.
    pub fn swapped(&self) -> Self {
        let outcomes = self
            .outcomes
            .iter()
            .map(|t| TargetOutcome {
                target: t.target.clone(),
                first_avg_position: t.second_avg_position,
                second_avg_position: t.first_avg_position,
                outcome: t.outcome.swapped(),
            })
            .collect();
        Self::from_outcomes(self.second, self.first, outcomes, self.skipped.clone())
    }

    /// Adds another record's targets (same criteria order).
    pub fn merge(mut self, other: WinLossRecord) -> Result<Self> {
        if (self.first, self.second) != (other.first, other.second) {
            return Err(Error::InvalidArgument("cannot merge records of different criteria".into()));
        }
        self.outcomes.extend(other.outcomes);
        self.skipped.extend(other.skipped);
        Ok(Self::from_outcomes(self.first, self.second, self.outcomes, self.skipped))
    }
}

/// Per target, compares the average position of its relevant variables
/// under both criteria. Targets with fewer than `min_relevant` relevant
/// variables are skipped.
pub fn compare_criteria(
    dataset: &Dataset,
    tasks: &[TargetTask],
    first: Criterion,
    second: Criterion,
    min_relevant: usize,
) -> Result<WinLossRecord> {
    let cache = TransformCache::new(dataset)?;
    let mut skipped = Vec::new();
    let mut outcomes = Vec::new();
    for task in tasks {
        if task.relevant.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "target `{}` has no relevant variables",
                task.target
            )));
        }
        if task.relevant.len() < min_relevant {
            skipped.push(task.target.clone());
            continue;
        }
        let a = average_position(
            &rank_variables_cached(dataset, &cache, &task.target, first)?,
            &task.relevant,
        )?;
        let b = average_position(
            &rank_variables_cached(dataset, &cache, &task.target, second)?,
            &task.relevant,
        )?;
        let outcome = if a.avg_position < b.avg_position {
            Outcome::Win
        } else if a.avg_position > b.avg_position {
            Outcome::Loss
        } else {
            Outcome::Draw
        };
        outcomes.push(TargetOutcome {
            target: task.target.clone(),
            first_avg_position: a.avg_position,
            second_avg_position: b.avg_position,
            outcome,
        });
    }
    Ok(WinLossRecord::from_outcomes(first, second, outcomes, skipped))
}

/// Number of variables in a [`synthetic_ranking_task`] dataset.
pub const SYNTHETIC_VARIABLES: usize = 20;

/// A network-like dataset with one target `T` whose known predictors are
/// three uniform parents `P1..P3` (`T = P1·P2·P3`). Two noisy children
/// `K1, K2 = T + N(0, 0.15²)` correlate with `T` without being predictors;
/// the remaining variables are independent uniforms `N1..`.
pub fn synthetic_ranking_task(m: usize, seed: u64) -> Result<(Dataset, TargetTask)> {
    use rand_distr::{Distribution, Normal};

    if m < 2 {
        return Err(Error::TooFewSamples(m));
    }
    let mut rng = synth::rng(seed);
    let parents: Vec<Vec<f64>> = (0..3).map(|_| synth::uniform_column(&mut rng, m)).collect();
    let target: Vec<f64> = (0..m).map(|i| parents.iter().map(|p| p[i]).product()).collect();
    let noise = Normal::new(0.0, synth::COMBINED_NOISE_SD).expect("valid sd");
    let children: Vec<Vec<f64>> = (0..2)
        .map(|_| target.iter().map(|t| t + noise.sample(&mut rng)).collect())
        .collect();

    let mut pairs = vec![("T".to_string(), target)];
    pairs.extend(parents.into_iter().enumerate().map(|(k, p)| (format!("P{}", k + 1), p)));
    pairs.extend(children.into_iter().enumerate().map(|(k, c)| (format!("K{}", k + 1), c)));
    let used = pairs.len();
    for k in 0..SYNTHETIC_VARIABLES - used {
        pairs.push((format!("N{}", k + 1), synth::uniform_column(&mut rng, m)));
    }
    let task = TargetTask::new("T", ["P1", "P2", "P3"]);
    Ok((Dataset::from_pairs(pairs)?, task))
}

/// Runs [`compare_criteria`] on `datasets` synthetic tasks with seeds
/// `seed, seed + 1, ...` and merges the records.
pub fn synthetic_comparison(
    datasets: usize,
    m: usize,
    seed: u64,
    first: Criterion,
    second: Criterion,
) -> Result<WinLossRecord> {
    let records = (0..datasets as u64)
        .into_par_iter()
        .map(|k| {
            let (ds, task) = synthetic_ranking_task(m, synth::rep_seed(seed, k))?;
            compare_criteria(&ds, &[task], first, second, 1)
        })
        .collect::<Result<Vec<_>>>()?;
    let empty = WinLossRecord::from_outcomes(first, second, Vec::new(), Vec::new());
    records.into_iter().try_fold(empty, WinLossRecord::merge)
}

// ---------------------------------------------------------------------------
// Regression harness
// ---------------------------------------------------------------------------

pub trait Model {
    fn predict(&self, row: &[f64]) -> f64;

    /// Whether fitting needed a regularization fallback.
    fn regularized(&self) -> bool {
        false
    }
}

pub trait Regressor: Sync {
    fn name(&self) -> &str;

    /// Fits on `rows` (one feature vector per sample).
    fn fit(&self, rows: &[Vec<f64>], target: &[f64]) -> Result<Box<dyn Model>>;
}

/// Ordinary least squares with an intercept, solved through the normal
/// equations. Singular systems get [`RIDGE_FALLBACK`] on the diagonal.
#[derive(Debug, Clone, Copy, Default)]
pub struct LeastSquares;

#[derive(Debug, Clone)]
pub struct LinearModel {
    pub intercept: f64,
    pub weights: Vec<f64>,
    pub ridge: bool,
}

impl Model for LinearModel {
    fn predict(&self, row: &[f64]) -> f64 {
        self.intercept + self.weights.iter().zip(row).map(|(w, x)| w * x).sum::<f64>()
    }

    fn regularized(&self) -> bool {
        self.ridge
    }
}

impl Regressor for LeastSquares {
    fn name(&self) -> &str {
        "least_squares"
    }

    fn fit(&self, rows: &[Vec<f64>], target: &[f64]) -> Result<Box<dyn Model>> {
        if rows.len() != target.len() {
            return Err(Error::LengthMismatch {
                left: rows.len(),
                right: target.len(),
            });
        }
        if rows.is_empty() {
            return Err(Error::TooFewSamples(0));
        }
        let k = rows[0].len();
        let design = DMatrix::from_fn(rows.len(), k + 1, |i, j| if j == 0 { 1.0 } else { rows[i][j - 1] });
        let y = DVector::from_column_slice(target);
        let gram = design.transpose() * &design;
        let rhs = design.transpose() * y;

        // a pivot that keeps almost none of its column's own energy means
        // the column is (numerically) a combination of earlier ones
        let well_posed = |l: &DMatrix<f64>| (0..=k).all(|i| l[(i, i)] * l[(i, i)] > 1e-12 * gram[(i, i)]);
        let (beta, ridge) = match gram.clone().cholesky() {
            Some(chol) if well_posed(&chol.l()) => (chol.solve(&rhs), false),
            _ => {
                let mut reg = gram;
                for i in 0..=k {
                    reg[(i, i)] += RIDGE_FALLBACK;
                }
                let beta = match reg.clone().cholesky() {
                    Some(chol) => chol.solve(&rhs),
                    None => reg
                        .lu()
                        .solve(&rhs)
                        .ok_or_else(|| Error::InvalidArgument("least-squares system is singular".into()))?,
                };
                (beta, true)
            }
        };
        Ok(Box::new(LinearModel {
            intercept: beta[0],
            weights: beta.iter().skip(1).copied().collect(),
            ridge,
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeMse {
    pub size: usize,
    pub features: Vec<String>,
    pub mse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvSummary {
    pub target: String,
    pub criterion: Criterion,
    pub regressor: String,
    pub folds: usize,
    pub seed: u64,
    pub ranking_rows: usize,
    pub evaluation_rows: usize,
    pub per_size: Vec<SizeMse>,
    pub mean_mse: f64,
    /// True when any fit fell back to the ridge term.
    pub ridge_used: bool,
}

/// Ranks variables on one half of the rows and evaluates top-k subsets by
/// k-fold cross-validated MSE on the other half.
///
/// Rows `0..m` are shuffled with `seed`; the first `⌈m/2⌉` shuffled rows
/// rank, the rest evaluate. Evaluation row `j` (in shuffled order) belongs
/// to fold `j % folds`.
pub fn split_half_cv_eval(
    dataset: &Dataset,
    target: &str,
    criterion: Criterion,
    sizes: &[usize],
    folds: usize,
    seed: u64,
    regressor: &dyn Regressor,
) -> Result<CvSummary> {
    let m = dataset.m();
    let n = dataset.n();
    let t = dataset.index_of(target)?;
    if folds < 2 {
        return Err(Error::InvalidArgument("need at least 2 folds".into()));
    }
    if m < 2 * folds {
        return Err(Error::InvalidArgument(format!(
            "{m} rows are not enough for split-half {folds}-fold evaluation"
        )));
    }
    if sizes.is_empty() {
        return Err(Error::InvalidArgument("no subset sizes given".into()));
    }
    if let Some(&bad) = sizes.iter().find(|&&k| k == 0 || k > n - 1) {
        return Err(Error::InvalidArgument(format!(
            "subset size {bad} outside 1..={}",
            n - 1
        )));
    }

    let mut rows: Vec<usize> = (0..m).collect();
    rows.shuffle(&mut synth::rng(seed));
    let half = m.div_ceil(2);
    let (rank_rows, eval_rows) = rows.split_at(half);

    let ranking = rank_variables(&dataset.select_rows(rank_rows)?, target, criterion)?;
    let ordered: Vec<usize> = ranking
        .names()
        .map(|name| dataset.index_of(name))
        .collect::<Result<_>>()?;

    let columns = dataset.columns();
    let y: Vec<f64> = eval_rows.iter().map(|&r| columns[t].values()[r]).collect();

    let mut per_size = Vec::with_capacity(sizes.len());
    let mut ridge_used = false;
    for &k in sizes {
        let chosen = &ordered[..k];
        let features: Vec<Vec<f64>> = eval_rows
            .iter()
            .map(|&r| chosen.iter().map(|&c| columns[c].values()[r]).collect())
            .collect();
        let mut sse = 0.0;
        for fold in 0..folds {
            let (mut train_x, mut train_y) = (Vec::new(), Vec::new());
            for (j, row) in features.iter().enumerate() {
                if j % folds != fold {
                    train_x.push(row.clone());
                    train_y.push(y[j]);
                }
            }
            let model = regressor.fit(&train_x, &train_y)?;
            ridge_used |= model.regularized();
            for (j, row) in features.iter().enumerate() {
                if j % folds == fold {
                    let err = model.predict(row) - y[j];
                    sse += err * err;
                }
            }
        }
        per_size.push(SizeMse {
            size: k,
            features: chosen.iter().map(|&c| dataset.names()[c].clone()).collect(),
            mse: sse / eval_rows.len() as f64,
        });
    }
    let mean_mse = per_size.iter().map(|s| s.mse).sum::<f64>() / per_size.len() as f64;
    Ok(CvSummary {
        target: target.to_string(),
        criterion,
        regressor: regressor.name().to_string(),
        folds,
        seed,
        ranking_rows: rank_rows.len(),
        evaluation_rows: eval_rows.len(),
        per_size,
        mean_mse,
        ridge_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ranking(names: &[&str]) -> RankingResult {
        RankingResult {
            target: "t".into(),
            criterion: Criterion::Rho2,
            ordered: names.iter().map(|n| (n.to_string(), 0.0)).collect(),
        }
    }

    #[test]
    fn average_position_examples() {
        let r = ranking(&["v3", "v1", "v2"]);
        assert_eq!(average_position(&r, &["v1", "v2"]).unwrap().avg_position, 2.5);
        assert_eq!(average_position(&r, &["v2", "v3", "v1"]).unwrap().avg_position, 2.0);
        assert_eq!(average_position(&r, &["v3"]).unwrap().avg_position, 1.0);
        assert_eq!(average_position(&r, &["v3", "v1"]).unwrap().avg_position, 1.5);
    }

    #[test]
    fn average_position_errors() {
        let r = ranking(&["a", "b"]);
        let empty: [&str; 0] = [];
        assert!(average_position(&r, &empty).is_err());
        assert_eq!(average_position(&r, &["t"]), Err(Error::UnknownColumn("t".into())));
        assert_eq!(average_position(&r, &["a", "a"]), Err(Error::DuplicateName("a".into())));
    }

    #[test]
    fn ties_keep_column_order() {
        let r = RankingResult::from_scores(
            "t",
            Criterion::Rho2,
            vec![("a".into(), 0.5), ("b".into(), 0.9), ("c".into(), 0.5), ("d".into(), 0.9)],
        );
        assert_eq!(r.names().collect::<Vec<_>>(), ["b", "d", "a", "c"]);
        assert_eq!(r.position("a"), Some(3));
    }

    #[test]
    fn rank_excludes_target_and_scores_match_coeff() {
        let ds = synth::gen_combined(300, 1).unwrap().dataset;
        for criterion in Criterion::ALL {
            let r = rank_variables(&ds, "A", criterion).unwrap();
            assert_eq!(r.ordered.len(), 5);
            assert!(r.position("A").is_none());
            assert!(r.ordered.windows(2).all(|w| w[0].1 >= w[1].1));
            for (name, score) in &r.ordered {
                let (a, y) = (ds.column("A").unwrap(), ds.column(name).unwrap());
                let want = match criterion {
                    Criterion::Rho2 => coeff::spearman(a, y).unwrap().value.powi(2),
                    Criterion::MaxIotaSq => coeff::max_iota_sq(a, y).unwrap(),
                    Criterion::Iota => coeff::rank_minrelation(a, y).unwrap().value,
                };
                assert_eq!(*score, want);
            }
        }
        assert_eq!(
            rank_variables(&ds, "Z", Criterion::Rho2),
            Err(Error::UnknownColumn("Z".into()))
        );
    }

    #[test]
    fn parse_criterion_and_task() {
        assert_eq!("max_iota_sq".parse::<Criterion>().unwrap(), Criterion::MaxIotaSq);
        assert!("bogus".parse::<Criterion>().is_err());
        let t: TargetTask = "A=B, C,D".parse().unwrap();
        assert_eq!(t, TargetTask::new("A", ["B", "C", "D"]));
        assert!("A".parse::<TargetTask>().is_err());
        assert!("A=".parse::<TargetTask>().is_err());
    }

    #[test]
    fn identical_criteria_draw_and_swap_is_antisymmetric() {
        let ds = synth::gen_combined(200, 2).unwrap().dataset;
        let tasks = [TargetTask::new("A", ["B", "C", "D"]), TargetTask::new("G", ["A"])];
        let same = compare_criteria(&ds, &tasks, Criterion::Rho2, Criterion::Rho2, 1).unwrap();
        assert_eq!((same.wins, same.losses, same.draws), (0, 0, 2));

        let rec = compare_criteria(&ds, &tasks, Criterion::MaxIotaSq, Criterion::Rho2, 1).unwrap();
        let rev = compare_criteria(&ds, &tasks, Criterion::Rho2, Criterion::MaxIotaSq, 1).unwrap();
        assert_eq!((rec.wins, rec.losses), (rev.losses, rev.wins));
        assert_eq!(rec.swapped(), rev);
        assert_eq!(rec.wins + rec.losses + rec.draws, 2);
    }

    #[test]
    fn min_relevant_threshold_skips_targets() {
        let ds = synth::gen_combined(100, 3).unwrap().dataset;
        let tasks = [TargetTask::new("A", ["B", "C", "D"]), TargetTask::new("G", ["A"])];
        let rec = compare_criteria(&ds, &tasks, Criterion::MaxIotaSq, Criterion::Rho2, 2).unwrap();
        assert_eq!(rec.outcomes.len(), 1);
        assert_eq!(rec.skipped, vec!["G".to_string()]);
    }

    #[test]
    fn best_rho_variable_gives_rho_the_win() {
        // G is ρ²'s first pick but not max ι²'s
        let ds = synth::gen_combined(1000, 11).unwrap().dataset;
        let rho = rank_variables(&ds, "A", Criterion::Rho2).unwrap();
        let iota = rank_variables(&ds, "A", Criterion::MaxIotaSq).unwrap();
        let best = rho.ordered[0].0.clone();
        assert_eq!(best, "G");
        assert!(iota.position(&best).unwrap() > 1);
        let rec = compare_criteria(&ds, &[TargetTask::new("A", [best])], Criterion::Rho2, Criterion::MaxIotaSq, 1)
            .unwrap();
        assert_eq!(rec.outcomes[0].outcome, Outcome::Win);
    }

    #[test]
    fn least_squares_recovers_exact_plane() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64, ((i * 7) % 5) as f64]).collect();
        let y: Vec<f64> = rows.iter().map(|r| 1.5 + 2.0 * r[0] - 3.0 * r[1]).collect();
        let model = LeastSquares.fit(&rows, &y).unwrap();
        assert!(!model.regularized());
        for (r, t) in rows.iter().zip(&y) {
            assert!((model.predict(r) - t).abs() < 1e-9);
        }
    }

    #[test]
    fn least_squares_ridge_fallback_on_collinear_columns() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, 2.0 * i as f64]).collect();
        let y: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let model = LeastSquares.fit(&rows, &y).unwrap();
        assert!(model.regularized());
        for (r, t) in rows.iter().zip(&y) {
            assert!((model.predict(r) - t).abs() < 1e-4);
        }
    }

    fn exact_linear_dataset(m: usize) -> Dataset {
        let mut rng = synth::rng(42);
        let b = synth::uniform_column(&mut rng, m);
        let c = synth::uniform_column(&mut rng, m);
        let noise: Vec<Vec<f64>> = (0..3).map(|_| synth::uniform_column(&mut rng, m)).collect();
        let a = (0..m).map(|i| 2.0 * b[i] - c[i] + 0.5).collect();
        let mut pairs = vec![("A".to_string(), a), ("B".into(), b), ("C".into(), c)];
        pairs.extend(noise.into_iter().enumerate().map(|(k, v)| (format!("N{k}"), v)));
        Dataset::from_pairs(pairs).unwrap()
    }

    #[test]
    fn cv_exact_linear_target_has_zero_error() {
        let ds = exact_linear_dataset(200);
        let s = split_half_cv_eval(&ds, "A", Criterion::Rho2, &[2, 3], 10, 7, &LeastSquares).unwrap();
        assert_eq!(s.per_size[0].features, ["B", "C"]);
        assert!(s.mean_mse <= 1e-10, "{}", s.mean_mse);
        assert_eq!((s.ranking_rows, s.evaluation_rows), (100, 100));
        assert!(!s.ridge_used);
    }

    #[test]
    fn cv_is_deterministic_and_row_order_robust_for_exact_targets() {
        let ds = exact_linear_dataset(101);
        let a = split_half_cv_eval(&ds, "A", Criterion::MaxIotaSq, &[2, 4], 5, 3, &LeastSquares).unwrap();
        let b = split_half_cv_eval(&ds, "A", Criterion::MaxIotaSq, &[2, 4], 5, 3, &LeastSquares).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.ranking_rows, 51);
        let reversed: Vec<usize> = (0..101).rev().collect();
        let permuted = ds.select_rows(&reversed).unwrap();
        let c = split_half_cv_eval(&permuted, "A", Criterion::Rho2, &[2, 4], 5, 3, &LeastSquares).unwrap();
        assert!(c.mean_mse <= 1e-10);
    }

    #[test]
    fn cv_on_linear_family_prefers_three_features() {
        let ds = synth::gen_linear(1000, 5).unwrap().dataset;
        let s = split_half_cv_eval(&ds, "A", Criterion::Rho2, &[2, 3], 10, 1, &LeastSquares).unwrap();
        assert_eq!(s.per_size[1].features, ["B", "C", "D"]);
        // residual variance: Var(D) = 1 with two features, 0 with three
        assert!((s.per_size[0].mse - 1.0).abs() < 0.2, "{}", s.per_size[0].mse);
        assert!(s.per_size[1].mse < 1e-12);
    }

    #[test]
    fn cv_argument_errors() {
        let ds = exact_linear_dataset(30);
        assert!(split_half_cv_eval(&ds, "A", Criterion::Rho2, &[2], 20, 0, &LeastSquares).is_err());
        assert!(split_half_cv_eval(&ds, "A", Criterion::Rho2, &[6], 5, 0, &LeastSquares).is_err());
        assert!(split_half_cv_eval(&ds, "A", Criterion::Rho2, &[], 5, 0, &LeastSquares).is_err());
        assert!(split_half_cv_eval(&ds, "Q", Criterion::Rho2, &[2], 5, 0, &LeastSquares).is_err());
    }

    #[test]
    fn synthetic_task_shape() {
        let (ds, task) = synthetic_ranking_task(50, 1).unwrap();
        assert_eq!(ds.n(), SYNTHETIC_VARIABLES);
        assert_eq!(task.relevant, ["P1", "P2", "P3"]);
        let t = ds.column("T").unwrap();
        let p: Vec<&[f64]> = ["P1", "P2", "P3"].iter().map(|n| ds.column(n).unwrap()).collect();
        for i in 0..50 {
            assert_eq!(t[i], p[0][i] * p[1][i] * p[2][i]);
        }
    }
}
