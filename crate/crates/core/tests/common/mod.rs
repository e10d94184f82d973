//! Brute-force reference implementations, written without any of the
//! library's ranking or transform code.

#![allow(dead_code)]

use minrel::synth;
use rand::Rng;

/// Average rank by counting: `#less + (#equal + 1) / 2`.
pub fn naive_rank(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&a| {
            let less = v.iter().filter(|&&b| b < a).count() as f64;
            let equal = v.iter().filter(|&&b| b == a).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn neg(v: &[f64]) -> Vec<f64> {
    v.iter().map(|a| -a).collect()
}

/// ι(x, y) from the defining formula with explicit loops.
pub fn naive_iota(x: &[f64], y: &[f64]) -> f64 {
    let m = x.len() as f64;
    let rx = naive_rank(x);
    let ry = naive_rank(y);
    let ry_desc = naive_rank(&neg(y));
    let mut above_anti = 0.0;
    let mut above_diag = 0.0;
    for i in 0..x.len() {
        let xt = rx[i] * rx[i] / (m * m) - 0.5;
        let yd = ry[i] * ry[i] / (m * m) - 0.5;
        let yi = 0.5 - ry_desc[i] * ry_desc[i] / (m * m);
        if xt + yd > 0.0 {
            above_anti += (xt + yd).powi(2);
        }
        if xt - yi > 0.0 {
            above_diag += (xt - yi).powi(2);
        }
    }
    if above_anti + above_diag == 0.0 {
        0.0
    } else {
        (above_anti - above_diag) / (above_anti + above_diag)
    }
}

pub fn naive_max_iota_sq(x: &[f64], y: &[f64]) -> f64 {
    [
        naive_iota(x, y),
        naive_iota(y, x),
        naive_iota(&neg(x), y),
        naive_iota(&neg(y), x),
    ]
    .iter()
    .map(|v| v * v)
    .fold(0.0, f64::max)
}

/// Random column of length `m`; with `distinct` all values differ,
/// otherwise values come from a small grid so ties are common.
pub fn random_column(rng: &mut impl Rng, m: usize, distinct: bool) -> Vec<f64> {
    if distinct {
        loop {
            let v: Vec<f64> = (0..m).map(|_| rng.random_range(-10.0..10.0)).collect();
            let mut s = v.clone();
            s.sort_by(f64::total_cmp);
            if s.windows(2).all(|w| w[0] != w[1]) {
                return v;
            }
        }
    } else {
        (0..m).map(|_| rng.random_range(0..7) as f64 * 0.5).collect()
    }
}

pub fn instance_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    synth::rng(seed)
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}
