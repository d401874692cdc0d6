//! Multiplicatively syndetic sets: generators, the exhaustive syndeticity
//! test and the density lower bound.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{rational_serde, Rational};

/// Generators of multiplicatively syndetic sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "camelCase")]
pub enum SyndeticFamily {
    /// `{n : m | n}`, `[m]`-syndetic.
    MultiplesOf { m: u64 },
    /// `{n : floor(log2 n) = c mod m}`, `[2^(m-1)]`-syndetic.
    GeometricBlocks { m: u32, c: u32 },
    /// `{n : Omega(n) = c mod m}` with `Omega` counting prime factors with
    /// multiplicity, `[2^(m-1)]`-syndetic.
    OmegaResidue { m: u32, c: u32 },
    /// Built greedily: whenever `{x, ..., Mx}` misses the set, add a random
    /// multiple `jx` with `j` in `1..=M`.
    GreedyRandom { m: u64, seed: u64 },
}

impl SyndeticFamily {
    /// The syndeticity constant the construction guarantees.
    pub fn constant(&self) -> u64 {
        match *self {
            SyndeticFamily::MultiplesOf { m } => m,
            SyndeticFamily::GeometricBlocks { m, .. } | SyndeticFamily::OmegaResidue { m, .. } => 1 << (m - 1),
            SyndeticFamily::GreedyRandom { m, .. } => m,
        }
    }

    /// Membership table for `0..=limit` (index 0 unused).
    pub fn members(&self, limit: u64) -> Vec<bool> {
        let len = limit as usize + 1;
        match *self {
            SyndeticFamily::MultiplesOf { m } => (0..len).map(|n| n > 0 && (n as u64).is_multiple_of(m)).collect(),
            SyndeticFamily::GeometricBlocks { m, c } => (0..len)
                .map(|n| n > 0 && (63 - (n as u64).leading_zeros()) % m == c % m)
                .collect(),
            SyndeticFamily::OmegaResidue { m, c } => {
                let omega = big_omega_table(limit);
                (0..len).map(|n| n > 0 && omega[n] % m == c % m).collect()
            }
            SyndeticFamily::GreedyRandom { m, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut set = vec![false; len];
                for x in 1..=limit / m {
                    if !(1..=m).any(|j| set[(j * x) as usize]) {
                        let j = rng.gen_range(1..=m);
                        set[(j * x) as usize] = true;
                    }
                }
                set
            }
        }
    }
}

/// `Omega(n)` for `n <= limit`.
pub fn big_omega_table(limit: u64) -> Vec<u32> {
    let len = limit as usize + 1;
    let mut rest: Vec<u64> = (0..len as u64).collect();
    let mut omega = vec![0u32; len];
    for p in 2..len {
        if rest[p] == p as u64 && omega[p] == 0 {
            // p is prime
            let mut q = p;
            while q < len {
                for n in (q..len).step_by(q) {
                    omega[n] += 1;
                    rest[n] /= p as u64;
                }
                match q.checked_mul(p) {
                    Some(v) => q = v,
                    None => break,
                }
            }
        }
    }
    omega
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyndeticityReport {
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "witnessFailures")]
    pub witness_failures: Vec<u64>,
}

impl SyndeticityReport {
    pub fn syndetic(&self) -> bool {
        self.witness_failures.is_empty()
    }
}

/// Every `x <= N` with `S` missing `{x, 2x, ..., Mx}`. The predicate is
/// queried on `[N M]`.
pub fn check_mult_syndetic(s: impl Fn(u64) -> bool, m: u64, n: u64) -> SyndeticityReport {
    let witness_failures = (1..=n).filter(|&x| !(1..=m).any(|j| s(j * x))).collect();
    SyndeticityReport { m, n, witness_failures }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyndeticDensityCheck {
    pub count: u64,
    /// `floor(N/M) / M`
    #[serde(with = "rational_serde")]
    pub bound: Rational,
    pub pass: bool,
}

/// Compares `|S cap [N]|` with `floor(N/M)/M`.
pub fn syndetic_density_check(s: impl Fn(u64) -> bool, m: u64, n: u64) -> SyndeticDensityCheck {
    let count = (1..=n).filter(|&x| s(x)).count() as u64;
    let bound = Rational::new(BigInt::from(n / m), BigInt::from(m));
    SyndeticDensityCheck { count, pass: Rational::from_integer(BigInt::from(count)) >= bound, bound }
}
