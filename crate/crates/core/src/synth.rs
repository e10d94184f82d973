//! Seeded generators for the toy experiment families.
//!
//! All generators draw from `ChaCha8Rng::seed_from_u64(seed)`, uniforms via
//! `Rng::random::<f64>()` on `[0, 1)` and normals via `rand_distr`'s
//! ziggurat sampler. Columns are filled one after another in the order they
//! are listed. The same `(m, seed)` always gives the same dataset.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::Dataset;

/// Standard deviation of the additive noise in the combined family.
pub const COMBINED_NOISE_SD: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `A = B·C`, `B, C ~ U(0,1)`.
    Multiplication,
    /// `A = 3B + 2C + D`, `B, C, D ~ N(0,1)`.
    Linear,
    /// `A = B·C·D`, `G = A + E`, `B, C, D ~ U(0,1)`, `E ~ N(0, 0.15²)`.
    Combined,
    /// `(X, Y)` uniform on `{-0.5 <= x <= y <= 0.5}`.
    Triangle,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Multiplication,
        Family::Linear,
        Family::Combined,
        Family::Triangle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Multiplication => "multiplication",
            Family::Linear => "linear",
            Family::Combined => "combined",
            Family::Triangle => "triangle",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedDataset {
    pub family: Family,
    pub m: usize,
    pub seed: u64,
    pub dataset: Dataset,
}

/// Seed of repetition `rep` in a run started from `seed`.
pub fn rep_seed(seed: u64, rep: u64) -> u64 {
    seed.wrapping_add(rep)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::TooFewSamples(m));
    }
    Ok(())
}

/// `m` draws from U(0,1).
pub fn uniform_column(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.random::<f64>()).collect()
}

fn normal_column(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| StandardNormal.sample(rng)).collect()
}

fn build(family: Family, m: usize, seed: u64, pairs: Vec<(&str, Vec<f64>)>) -> Result<GeneratedDataset> {
    Ok(GeneratedDataset {
        family,
        m,
        seed,
        dataset: Dataset::from_pairs(pairs)?,
    })
}

pub fn gen_multiplication(m: usize, seed: u64) -> Result<GeneratedDataset> {
    check_m(m)?;
    let mut rng = rng(seed);
    let b = uniform_column(&mut rng, m);
    let c = uniform_column(&mut rng, m);
    let a = b.iter().zip(&c).map(|(b, c)| b * c).collect();
    build(Family::Multiplication, m, seed, vec![("A", a), ("B", b), ("C", c)])
}

pub fn gen_linear(m: usize, seed: u64) -> Result<GeneratedDataset> {
    check_m(m)?;
    let mut rng = rng(seed);
    let b = normal_column(&mut rng, m);
    let c = normal_column(&mut rng, m);
    let d = normal_column(&mut rng, m);
    let a = (0..m).map(|i| 3.0 * b[i] + 2.0 * c[i] + d[i]).collect();
    build(Family::Linear, m, seed, vec![("A", a), ("B", b), ("C", c), ("D", d)])
}

pub fn gen_combined(m: usize, seed: u64) -> Result<GeneratedDataset> {
    check_m(m)?;
    let mut rng = rng(seed);
    let b = uniform_column(&mut rng, m);
    let c = uniform_column(&mut rng, m);
    let d = uniform_column(&mut rng, m);
    let noise = Normal::new(0.0, COMBINED_NOISE_SD).expect("valid sd");
    let e: Vec<f64> = (0..m).map(|_| noise.sample(&mut rng)).collect();
    let a: Vec<f64> = (0..m).map(|i| b[i] * c[i] * d[i]).collect();
    let g = a.iter().zip(&e).map(|(a, e)| a + e).collect();
    build(
        Family::Combined,
        m,
        seed,
        vec![("A", a), ("B", b), ("C", c), ("D", d), ("E", e), ("G", g)],
    )
}

/// Two uniforms on the square, sorted: uniform on the upper triangle.
pub fn gen_triangle_pair(m: usize, seed: u64) -> Result<GeneratedDataset> {
    check_m(m)?;
    let mut rng = rng(seed);
    let (mut x, mut y) = (Vec::with_capacity(m), Vec::with_capacity(m));
    for _ in 0..m {
        let u = rng.random::<f64>() - 0.5;
        let v = rng.random::<f64>() - 0.5;
        x.push(u.min(v));
        y.push(u.max(v));
    }
    build(Family::Triangle, m, seed, vec![("X", x), ("Y", y)])
}

pub fn generate(family: Family, m: usize, seed: u64) -> Result<GeneratedDataset> {
    match family {
        Family::Multiplication => gen_multiplication(m, seed),
        Family::Linear => gen_linear(m, seed),
        Family::Combined => gen_combined(m, seed),
        Family::Triangle => gen_triangle_pair(m, seed),
    }
}
