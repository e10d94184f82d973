//! Rank minrelation coefficient.
//!
//! A minrelation of `X` to `Y` is an asymmetric dependence where `p(X <= Y)`
//! is high: when `X` rises, `Y` is likely to rise too, but a low `X` says
//! little about `Y`. The coefficient [`coeff::rank_minrelation`] (written ι)
//! estimates it on squared-rank ("triangular") transforms of both variables
//! and lies in `[-1, 1]`.
//!
//! Modules:
//!
//! * [`ranks`]: fractional ranks and the uniform/triangular transforms.
//! * [`coeff`]: raw minrelation forms, ι and its orientations, ι₂, max ι²,
//!   Pearson and Spearman.
//! * [`matrix`]: datasets, per-column transform caching and parallel
//!   pairwise matrices.
//! * [`synth`]: seeded generators for the toy experiment families.
//! * [`ranking`]: variable-ranking filter, average-position win/loss
//!   evaluation and a split-half cross-validation harness.
//! * [`experiment`]: Monte-Carlo reproduction of the toy-experiment tables.
//! * [`cli`]: the `minrel` command-line front end.
//!
//! ```
//! use minrel::coeff::{rank_minrelation, spearman};
//!
//! let x = [1.0, 2.0, 3.0];
//! let y = [1.0, 2.0, 3.0];
//! let iota = rank_minrelation(&x, &y).unwrap();
//! assert!((iota.value - 0.951_807).abs() < 1e-6);
//! assert!((spearman(&x, &y).unwrap().value - 1.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod coeff;
pub mod error;
pub mod experiment;
pub mod matrix;
pub mod ranking;
pub mod ranks;
pub mod synth;

pub use error::{Error, Result};
