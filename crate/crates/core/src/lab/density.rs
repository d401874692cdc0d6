//! Nontrivial solution counts inside random dense subsets of `[N]`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::counting::{biguint_string, count_solutions, DiagonalSystem};
use crate::error::{Error, Result};
use crate::linalg::{rational_serde, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(with = "rational_serde")]
    pub delta: Rational,
    /// `ceil(delta N)`
    #[serde(rename = "setSize")]
    pub set_size: u64,
    pub trials: usize,
    pub seed: u64,
    #[serde(with = "biguint_string")]
    pub min: BigUint,
    #[serde(with = "biguint_string")]
    pub max: BigUint,
    #[serde(with = "rational_serde")]
    pub mean: Rational,
    /// Count for the initial segment `[ceil(delta N)]`.
    #[serde(rename = "prefixCount", with = "biguint_string")]
    pub prefix_count: BigUint,
}

pub fn dense_set_size(n: u64, delta: &Rational) -> u64 {
    let v = (delta * Rational::from_integer(BigInt::from(n))).ceil().to_integer();
    v.to_u64().unwrap_or(n).min(n)
}

fn nontrivial_in(sys: &DiagonalSystem, n: u64, set: &[u64]) -> Result<BigUint> {
    let doms = vec![set.to_vec(); sys.vars()];
    Ok(count_solutions(sys, n, Some(&doms))?.counts.nontrivial)
}

/// Samples `trials` subsets of `[N]` of size `ceil(delta N)` and records the
/// spread of nontrivial counts.
pub fn density_experiment(sys: &DiagonalSystem, n: u64, delta: &Rational, trials: usize, seed: u64) -> Result<DensityReport> {
    if !(delta > &Rational::zero() && delta <= &Rational::one()) {
        return Err(Error::InvalidArgument("delta must lie in (0, 1]".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let size = dense_set_size(n, delta);
    let prefix: Vec<u64> = (1..=size).collect();
    let prefix_count = nontrivial_in(sys, n, &prefix)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = Vec::with_capacity(trials);
    for _ in 0..trials {
        let mut set: Vec<u64> = rand::seq::index::sample(&mut rng, n as usize, size as usize)
            .into_iter()
            .map(|i| i as u64 + 1)
            .collect();
        set.sort_unstable();
        counts.push(nontrivial_in(sys, n, &set)?);
    }
    let all: Vec<&BigUint> = counts.iter().chain(std::iter::once(&prefix_count)).collect();
    let min = all.iter().min().map(|v| (*v).clone()).unwrap_or_default();
    let max = all.iter().max().map(|v| (*v).clone()).unwrap_or_default();
    let mean = if counts.is_empty() {
        Rational::from_integer(BigInt::from(prefix_count.clone()))
    } else {
        let sum: BigUint = counts.iter().sum();
        Rational::new(BigInt::from(sum), BigInt::from(counts.len()))
    };
    Ok(DensityReport { n, delta: delta.clone(), set_size: size, trials, seed, min, max, mean, prefix_count })
}
