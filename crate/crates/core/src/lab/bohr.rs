//! Polynomial Bohr sets `{n : ||n^h a_i|| < rho for all i}` with rational
//! phases, decided exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rational_serde, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BohrSpec {
    pub h: u32,
    #[serde(with = "rational_vec")]
    pub phases: Vec<Rational>,
    #[serde(with = "rational_serde")]
    pub rho: Rational,
}

mod rational_vec {
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    use crate::linalg::{rational_from_json, rational_to_json, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(rational_to_json).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<serde_json::Value>::deserialize(d)?
            .iter()
            .map(|v| rational_from_json(v).map_err(de::Error::custom))
            .collect()
    }
}

/// Distance from `x` to the nearest integer.
pub fn dist_to_integer(x: &Rational) -> Rational {
    let f = x - x.floor();
    let g = Rational::one() - &f;
    if f < g {
        f
    } else {
        g
    }
}

impl BohrSpec {
    pub fn new(h: u32, phases: Vec<Rational>, rho: Rational) -> Result<Self> {
        let spec = BohrSpec { h, phases, rho };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.phases.iter().any(|a| a.is_negative() || a >= &Rational::one()) {
            return Err(Error::InvalidArgument("phases must lie in [0, 1)".into()));
        }
        if !(self.rho > Rational::zero() && self.rho <= Rational::one()) {
            return Err(Error::InvalidArgument("rho must lie in (0, 1]".into()));
        }
        Ok(())
    }

    /// `||n^h a|| < rho` for every phase, via residues: with `a = p/q` and
    /// `r = n^h p mod q`, the distance is `min(r, q - r)/q`.
    pub fn contains(&self, n: u64) -> bool {
        let nn = BigInt::from(n);
        self.phases.iter().all(|a| {
            let q = a.denom();
            let r = (nn.modpow(&BigInt::from(self.h), q) * a.numer()).mod_floor(q);
            let d = r.clone().min(q - &r);
            d * self.rho.denom() < self.rho.numer() * q
        })
    }

    /// `lcm` of the phase denominators; membership is periodic with it.
    pub fn period(&self) -> BigInt {
        self.phases.iter().fold(BigInt::one(), |l, a| l.lcm(a.denom()))
    }
}

pub fn bohr_set(spec: &BohrSpec, n: u64) -> Vec<u64> {
    (1..=n).filter(|&x| spec.contains(x)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceReport {
    #[serde(rename = "minNorm", with = "rational_serde")]
    pub min_norm: Rational,
    pub argmin: u64,
    /// `C N^(-2^(-h))`
    pub budget: f64,
    pub c: f64,
    pub pass: bool,
}

/// Smallest `||n^h alpha||` over `1 <= n <= N`, compared with
/// `C N^(-2^(-h))`.
pub fn bohr_recurrence_check(h: u32, alpha: &Rational, n: u64, c: f64) -> Result<RecurrenceReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let q = alpha.denom();
    let p = alpha.numer().mod_floor(q);
    let hh = BigInt::from(h);
    let mut best: Option<(BigInt, u64)> = None;
    for x in 1..=n {
        let r = (BigInt::from(x).modpow(&hh, q) * &p).mod_floor(q);
        let d = r.clone().min(q - &r);
        if best.as_ref().is_none_or(|(b, _)| &d < b) {
            let zero = d.is_zero();
            best = Some((d, x));
            if zero {
                break;
            }
        }
    }
    let (d, argmin) = best.expect("n >= 1");
    let min_norm = Rational::new(d, q.clone());
    let budget = c * (n as f64).powf(-(0.5f64).powi(h as i32));
    let pass = min_norm.to_f64().unwrap_or(f64::INFINITY) <= budget;
    Ok(RecurrenceReport { min_norm, argmin, budget, c, pass })
}

/// Least `M0 <= cap` such that `{x, 2x, ..., M0 x}` meets the Bohr set for
/// every `x`. Membership of `jx` depends on `x` modulo the period, so
/// testing `x` up to the period is exhaustive.
pub fn bohr_syndetic_constant(spec: &BohrSpec, cap: u64) -> Result<u64> {
    spec.validate()?;
    let period = spec
        .period()
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("period exceeds 64 bits".into()))?;
    let mut m0 = 1;
    for x in 1..=period {
        let j = (1..=cap).find(|&j| spec.contains(j * x)).ok_or(Error::CapExceeded(cap))?;
        m0 = m0.max(j);
    }
    Ok(m0)
}
