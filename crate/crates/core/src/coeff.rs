//! Bivariate coefficients.
//!
//! The raw minrelation forms work on caller-normalized values. The rank
//! minrelation coefficient ι works on triangular squared-rank transforms:
//!
//! ```text
//!        Σ I(x̃ᵢ > -ỹᵢ)(x̃ᵢ + ỹᵢ)² - Σ I(x̃ᵢ > y̌ᵢ)(x̃ᵢ - y̌ᵢ)²
//! ι  =  ----------------------------------------------------
//!        Σ I(x̃ᵢ > -ỹᵢ)(x̃ᵢ + ỹᵢ)² + Σ I(x̃ᵢ > y̌ᵢ)(x̃ᵢ - y̌ᵢ)²
//! ```
//!
//! with `x̃ = tri_decreasing(x)`, `ỹ = tri_decreasing(y)` and
//! `y̌ = tri_increasing(y)`. The first sum collects violations of
//! `x <= -y`, the second violations of `x <= y`.
//!
//! Both indicators are strict. Points on a diagonal add zero either way,
//! and strictness makes `ι(x, -y) = -ι(x, y)` hold to the last bit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ranks::{self, ColumnTransforms};

/// A coefficient in `[-1, 1]`. `degenerate` marks a zero denominator, in
/// which case `value` is 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientValue {
    pub value: f64,
    pub degenerate: bool,
}

impl CoefficientValue {
    pub fn new(value: f64) -> Self {
        Self {
            value,
            degenerate: false,
        }
    }

    pub fn degenerate() -> Self {
        Self {
            value: 0.0,
            degenerate: true,
        }
    }

    /// `(a - b) / (a + b)` for non-negative sums.
    fn ratio(a: f64, b: f64) -> Self {
        let total = a + b;
        if total == 0.0 {
            Self::degenerate()
        } else {
            Self::new((a - b) / total)
        }
    }
}

/// Orientation of one variable: use it as is or negated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "+1" | "1" | "pos" => Ok(Sign::Pos),
            "-" | "-1" | "neg" => Ok(Sign::Neg),
            other => Err(Error::InvalidArgument(format!("bad sign `{other}`"))),
        }
    }
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    ranks::validate(x)?;
    ranks::validate(y)
}

fn negated(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| -x).collect()
}

/// Fraction of samples with `xᵢ <= yᵢ`.
pub fn p_leq_hat(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let concordant = x.iter().zip(y).filter(|(a, b)| a <= b).count();
    Ok(concordant as f64 / x.len() as f64)
}

/// `(C - D) / (C + D)` with `C = #{xᵢ <= yᵢ}` and `D = #{xᵢ > yᵢ}`.
pub fn minrel_simple(x: &[f64], y: &[f64]) -> Result<CoefficientValue> {
    check_pair(x, y)?;
    Ok(minrel_simple_unchecked(x, y))
}

pub(crate) fn minrel_simple_unchecked(x: &[f64], y: &[f64]) -> CoefficientValue {
    let concordant = x.iter().zip(y).filter(|(a, b)| a <= b).count();
    let discordant = x.len() - concordant;
    CoefficientValue::ratio(concordant as f64, discordant as f64)
}

/// Indicator form of ι on already centered values:
/// `A = #{xᵢ > -yᵢ}`, `B = #{xᵢ > yᵢ}`, returns `(A - B) / (A + B)`.
pub fn iota_raw_indicator(x: &[f64], y: &[f64]) -> Result<CoefficientValue> {
    check_pair(x, y)?;
    let (mut a, mut b) = (0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        if xi > -yi {
            a += 1.0;
        }
        if xi > yi {
            b += 1.0;
        }
    }
    Ok(CoefficientValue::ratio(a, b))
}

/// Squared-distance form of ι on already centered values.
pub fn iota_raw_squared(x: &[f64], y: &[f64]) -> Result<CoefficientValue> {
    check_pair(x, y)?;
    Ok(minrel_kernel(x, y, y))
}

/// The shared ι kernel. `x` is compared against `y_minus` for violations of
/// `x <= -y` and against `y_plus` for violations of `x <= y`.
fn minrel_kernel(x: &[f64], y_minus: &[f64], y_plus: &[f64]) -> CoefficientValue {
    let (mut a, mut b) = (0.0, 0.0);
    for ((&xi, &ym), &yp) in x.iter().zip(y_minus).zip(y_plus) {
        if xi > -ym {
            let d = xi + ym;
            a += d * d;
        }
        if xi > yp {
            let d = xi - yp;
            b += d * d;
        }
    }
    CoefficientValue::ratio(a, b)
}

/// ι for cached transforms with the given orientations. Negating a variable
/// before ranking swaps which cached scores are used.
pub fn iota_from_transforms(
    tx: &ColumnTransforms,
    ty: &ColumnTransforms,
    sign_x: Sign,
    sign_y: Sign,
) -> CoefficientValue {
    let x = match sign_x {
        Sign::Pos => &tx.dec,
        Sign::Neg => &tx.dec_neg,
    };
    let (y_dec, y_inc) = match sign_y {
        Sign::Pos => (&ty.dec, &ty.inc),
        Sign::Neg => (&ty.dec_neg, &ty.inc_neg),
    };
    minrel_kernel(x.scores(), y_dec.scores(), y_inc.scores())
}

/// The rank minrelation coefficient ι(X, Y).
pub fn rank_minrelation(x: &[f64], y: &[f64]) -> Result<CoefficientValue> {
    check_pair(x, y)?;
    let x_dec = ranks::tri_decreasing(x)?;
    let y_dec = ranks::tri_decreasing(y)?;
    let y_inc = ranks::tri_increasing(y)?;
    Ok(minrel_kernel(x_dec.scores(), y_dec.scores(), y_inc.scores()))
}

/// ι on `(sign_x · x, sign_y · y)`, negation applied before ranking.
pub fn iota_oriented(x: &[f64], y: &[f64], sign_x: Sign, sign_y: Sign) -> Result<CoefficientValue> {
    check_pair(x, y)?;
    let x = match sign_x {
        Sign::Pos => x.to_vec(),
        Sign::Neg => negated(x),
    };
    let y = match sign_y {
        Sign::Pos => y.to_vec(),
        Sign::Neg => negated(y),
    };
    rank_minrelation(&x, &y)
}

/// ι₂(X, Y), the trade-off between `p(X <= Y)` and `p(-X <= Y)`, computed
/// as ι(-Y, -X).
pub fn iota2(x: &[f64], y: &[f64]) -> Result<CoefficientValue> {
    check_pair(x, y)?;
    rank_minrelation(&negated(y), &negated(x))
}

/// ι for the four tabulated orientations of a pair, plus the largest square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinrelProfile {
    /// ι(X, Y)
    pub iota_xy: CoefficientValue,
    /// ι(Y, X)
    pub iota_yx: CoefficientValue,
    /// ι(-X, Y)
    pub iota_negx_y: CoefficientValue,
    /// ι(-Y, X)
    pub iota_negy_x: CoefficientValue,
    pub max_iota_sq: f64,
}

impl MinrelProfile {
    pub fn from_transforms(tx: &ColumnTransforms, ty: &ColumnTransforms) -> Self {
        let iota_xy = iota_from_transforms(tx, ty, Sign::Pos, Sign::Pos);
        let iota_yx = iota_from_transforms(ty, tx, Sign::Pos, Sign::Pos);
        let iota_negx_y = iota_from_transforms(tx, ty, Sign::Neg, Sign::Pos);
        let iota_negy_x = iota_from_transforms(ty, tx, Sign::Neg, Sign::Pos);
        let max_iota_sq = [iota_xy, iota_yx, iota_negx_y, iota_negy_x]
            .iter()
            .map(|c| c.value * c.value)
            .fold(0.0, f64::max);
        Self {
            iota_xy,
            iota_yx,
            iota_negx_y,
            iota_negy_x,
            max_iota_sq,
        }
    }

    pub fn values(&self) -> [f64; 4] {
        [
            self.iota_xy.value,
            self.iota_yx.value,
            self.iota_negx_y.value,
            self.iota_negy_x.value,
        ]
    }
}

pub fn minrel_profile(x: &[f64], y: &[f64]) -> Result<MinrelProfile> {
    check_pair(x, y)?;
    let tx = ColumnTransforms::new(x)?;
    let ty = ColumnTransforms::new(y)?;
    Ok(MinrelProfile::from_transforms(&tx, &ty))
}

/// Largest ι² over ι(X,Y), ι(Y,X), ι(-X,Y) and ι(-Y,X). The remaining sign
/// combinations only flip signs.
pub fn max_iota_sq(x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(minrel_profile(x, y)?.max_iota_sq)
}

/// Product-moment correlation. A constant column gives a degenerate 0.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<CoefficientValue> {
    check_pair(x, y)?;
    Ok(pearson_unchecked(x, y))
}

pub(crate) fn pearson_unchecked(x: &[f64], y: &[f64]) -> CoefficientValue {
    // scaling to [-1, 1] keeps the sums of squares finite for huge inputs
    let scale = |v: &[f64]| v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let (kx, ky) = (scale(x), scale(y));
    if kx == 0.0 || ky == 0.0 {
        return CoefficientValue::degenerate();
    }
    let n = x.len() as f64;
    let mx = x.iter().map(|a| a / kx).sum::<f64>() / n;
    let my = y.iter().map(|b| b / ky).sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a / kx - mx, b / ky - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return CoefficientValue::degenerate();
    }
    CoefficientValue::new((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Pearson correlation of the fractional ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<CoefficientValue> {
    check_pair(x, y)?;
    let rx = ranks::compute_ranks(x, false)?;
    let ry = ranks::compute_ranks(y, false)?;
    Ok(pearson_unchecked(rx.ranks(), ry.ranks()))
}

pub(crate) fn spearman_from_transforms(tx: &ColumnTransforms, ty: &ColumnTransforms) -> CoefficientValue {
    pearson_unchecked(tx.ranks.ranks(), ty.ranks.ranks())
}
