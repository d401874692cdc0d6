//! The `W`-trick: parameters `W(k, w)`, progression selection, the weight
//! `nu`, and the crude transfer of solution counts from a degree `k`
//! system to its linearised form.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::counting::{biguint_string, count_mixed_degree, list_mixed_degree};
use crate::error::{Error, Result};
use crate::linalg::{rational_serde, Rational, RationalMatrix};
use crate::structure::{assemble_blocks, b_divisible_by_a};

pub fn primes_up_to(w: u64) -> Vec<u64> {
    (2..=w).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

/// `W(k, w) = k^(k-1) prod_{p <= w} p^k`.
pub fn w_of(k: u32, w: u64) -> BigUint {
    primes_up_to(w)
        .into_iter()
        .fold(num_traits::pow(BigUint::from(k), (k - 1) as usize), |acc, p| {
            acc * num_traits::pow(BigUint::from(p), k as usize)
        })
}

/// `(kW)^(1/k) = k prod_{p <= w} p`.
pub fn kw_root(k: u32, w: u64) -> BigUint {
    primes_up_to(w).into_iter().fold(BigUint::from(k), |acc, p| acc * p)
}

pub fn is_smooth(mut z: u64, w: u64) -> bool {
    if z == 0 {
        return false;
    }
    for p in primes_up_to(w) {
        while z.is_multiple_of(p) {
            z /= p;
        }
    }
    z == 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WTrickParams {
    pub k: u32,
    pub w: u64,
    #[serde(rename = "W", with = "biguint_string")]
    pub big_w: BigUint,
    pub xi: u64,
    pub zeta: u64,
    #[serde(rename = "N")]
    pub n: u64,
    /// `N^k / (k W zeta^k)`
    #[serde(rename = "X", with = "rational_serde")]
    pub x: Rational,
    /// `(kW)^(1/k)`
    #[serde(with = "biguint_string")]
    pub root: BigUint,
}

pub fn w_params(k: u32, w: u64, n: u64, zeta: u64, xi: u64) -> Result<WTrickParams> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let big_w = w_of(k, w);
    if xi == 0 || BigUint::from(xi) > big_w || !BigUint::from(xi).gcd(&big_w).is_one() {
        return Err(Error::InvalidXi { xi: xi.to_string(), w: big_w.to_string() });
    }
    if !is_smooth(zeta, w) {
        return Err(Error::NonSmoothZeta(zeta));
    }
    let root = kw_root(k, w);
    let kw = BigUint::from(k) * &big_w;
    if num_traits::pow(root.clone(), k as usize) != kw {
        return Err(Error::Invariant("(kW)^(1/k) is not an integer".into()));
    }
    let x = Rational::new(
        num_traits::pow(BigInt::from(n), k as usize),
        BigInt::from(kw) * num_traits::pow(BigInt::from(zeta), k as usize),
    );
    Ok(WTrickParams { k, w, big_w, xi, zeta, n, x, root })
}

impl WTrickParams {
    fn w_u64(&self) -> Result<u64> {
        self.big_w
            .to_u64()
            .ok_or_else(|| Error::InvalidArgument("W exceeds 64 bits".into()))
    }

    /// `m` with `m = xi mod W` and `zeta m <= N`, ascending.
    pub fn progression(&self) -> Vec<u64> {
        let Ok(w) = self.w_u64() else {
            return Vec::new();
        };
        let top = self.n / self.zeta;
        (0..).map(|z| self.xi + w * z).take_while(|&m| m <= top).collect()
    }

    /// `nu(n) = x^(k-1)` when `n = (x^k - xi^k)/(kW)` for some `x = xi mod W`
    /// with `zeta x <= N`, else 0.
    pub fn weight_nu(&self, n: &BigInt) -> BigUint {
        if n <= &BigInt::zero() {
            return BigUint::zero();
        }
        let k = self.k;
        let kw = BigInt::from(k) * BigInt::from(self.big_w.clone());
        let v = kw * n + num_traits::pow(BigInt::from(self.xi), k as usize);
        let x = v.nth_root(k);
        if num_traits::pow(x.clone(), k as usize) != v {
            return BigUint::zero();
        }
        let w = BigInt::from(self.big_w.clone());
        if x.mod_floor(&w) != BigInt::from(self.xi).mod_floor(&w) || x.clone() * self.zeta > BigInt::from(self.n) {
            return BigUint::zero();
        }
        num_traits::pow(x, (k - 1) as usize).to_biguint().expect("positive")
    }

    /// `n` for the progression element `x`, or `None` if `x = xi`.
    pub fn linearised(&self, x: u64) -> Option<BigInt> {
        if x <= self.xi {
            return None;
        }
        let k = self.k as usize;
        let num = num_traits::pow(BigInt::from(x), k) - num_traits::pow(BigInt::from(self.xi), k);
        let den = BigInt::from(self.k) * BigInt::from(self.big_w.clone());
        debug_assert!(num.is_multiple_of(&den));
        Some(num / den)
    }

    /// `sum nu` together with `X`.
    pub fn nu_mass(&self) -> NuMass {
        let mass: BigUint = self
            .progression()
            .into_iter()
            .filter(|&x| x > self.xi)
            .map(|x| num_traits::pow(BigUint::from(x), (self.k - 1) as usize))
            .sum();
        let ratio = Rational::new(BigInt::from(mass.clone()), BigInt::one()) / &self.x;
        NuMass { mass, x: self.x.clone(), ratio: ratio.to_f64().unwrap_or(f64::NAN) }
    }
}

/// Sums `nu(n)` pointwise over its whole support and compares with
/// [`WTrickParams::nu_mass`].
pub fn weight_sum_check(p: &WTrickParams, limit: u64) -> Result<bool> {
    let top = p
        .progression()
        .last()
        .and_then(|&x| p.linearised(x))
        .unwrap_or_default();
    let top = top.to_u64().unwrap_or(u64::MAX);
    if top > limit {
        return Err(Error::SizeLimitExceeded { what: "weight support", actual: top as u128, limit: limit as u128 });
    }
    let direct: BigUint = (1..=top).map(|n| p.weight_nu(&BigInt::from(n))).sum();
    Ok(direct == p.nu_mass().mass)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuMass {
    #[serde(with = "biguint_string")]
    pub mass: BigUint,
    #[serde(rename = "X", with = "rational_serde")]
    pub x: Rational,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionChoice {
    pub xi: u64,
    pub zeta: u64,
    /// `|{m in P : zeta m in A}|`
    pub captured: u64,
    /// `|P|` for the progression `P = {m = xi mod W : zeta m <= N}`
    #[serde(rename = "progressionSize")]
    pub progression_size: u64,
    /// `captured / progressionSize`
    #[serde(with = "rational_serde")]
    pub ratio: Rational,
    /// `|A| / N`
    #[serde(with = "rational_serde")]
    pub delta: Rational,
}

/// Searches `zeta` (w-smooth, ascending, up to `zeta_cap`) and then `xi`
/// (coprime to `W`, ascending) for a nonempty progression on which `A`
/// has relative density at least `delta/2`.
pub fn select_progression(a: &[u64], n: u64, k: u32, w: u64, zeta_cap: u64) -> Result<ProgressionChoice> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let set: HashSet<u64> = a.iter().copied().filter(|&x| x >= 1 && x <= n).collect();
    let delta = Rational::new(BigInt::from(set.len()), BigInt::from(n));
    let big_w = w_of(k, w);
    let wu = big_w.to_u64().ok_or_else(|| Error::InvalidArgument("W exceeds 64 bits".into()))?;
    for zeta in (1..=zeta_cap.min(n)).filter(|&z| is_smooth(z, w)) {
        let top = n / zeta;
        for xi in (1..=wu.min(top)).filter(|&x| x.gcd(&wu) == 1) {
            let (mut size, mut captured) = (0u64, 0u64);
            let mut m = xi;
            while m <= top {
                size += 1;
                if set.contains(&(zeta * m)) {
                    captured += 1;
                }
                m += wu;
            }
            let ratio = Rational::new(BigInt::from(captured), BigInt::from(size));
            if captured > 0 && ratio >= &delta / Rational::from_integer(2.into()) {
                return Ok(ProgressionChoice { xi, zeta, captured, progression_size: size, ratio, delta });
            }
        }
    }
    Err(Error::SearchExhausted(zeta_cap))
}

/// A split system `A x = B y`, `C y = 0` with `A` of zero column sum, and
/// explicit sets to count over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferInstance {
    #[serde(rename = "A")]
    pub a: RationalMatrix,
    #[serde(rename = "B")]
    pub b: RationalMatrix,
    #[serde(rename = "C")]
    pub c: RationalMatrix,
    #[serde(rename = "aSet")]
    pub a_set: Vec<u64>,
    /// `S cap [N]`
    #[serde(rename = "sSet")]
    pub s_set: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    #[serde(rename = "A1")]
    pub a1: Vec<u64>,
    #[serde(rename = "S1")]
    pub s1: Vec<u64>,
    #[serde(with = "biguint_string")]
    pub lhs: BigUint,
    #[serde(with = "biguint_string")]
    pub rhs: BigUint,
    pub injective: bool,
    pub pass: bool,
}

/// Counts both sides of `Lambda_1(A1; S1) <= Lambda_k(A; S cap [N])` and
/// checks that `(x, y) -> (zeta(W z + xi), zeta R y)` maps left solutions
/// injectively to right solutions.
///
/// `A1 = {((Wz+xi)^k - xi^k)/(kW) : z >= 1, zeta(Wz+xi) in A}` and
/// `S1 = {y : zeta R y in S, zeta R y <= N}` where `R = (kW)^(1/k)`; the
/// cutoff coincides with `y <= X^(1/k)`.
pub fn crude_transfer_check(inst: &TransferInstance, params: &WTrickParams, solution_limit: usize) -> Result<TransferReport> {
    let (a, b, c) = (&inst.a, &inst.b, &inst.c);
    if b.rows() != a.rows() || c.cols() != b.cols() {
        return Err(Error::ShapeMismatch("A, B, C do not form a split system".into()));
    }
    if !a.columns_sum_to_zero() {
        return Err(Error::InvalidArgument("columns of A must sum to zero".into()));
    }
    if !b_divisible_by_a(a, b) {
        return Err(Error::PreprocessingMissing("entries of B are not divisible by the entries of A".into()));
    }
    if !c.is_integral() {
        return Err(Error::NotInteger("C".into()));
    }
    let (s, t) = (a.cols(), b.cols());
    let k = params.k;
    let n = params.n;
    let a_set: HashSet<u64> = inst.a_set.iter().copied().filter(|&x| x >= 1 && x <= n).collect();
    let s_set: HashSet<u64> = inst.s_set.iter().copied().filter(|&x| x >= 1 && x <= n).collect();

    let mut to_u = std::collections::HashMap::new();
    let mut a1 = Vec::new();
    for m in params.progression() {
        if m > params.xi && a_set.contains(&(params.zeta * m)) {
            let lin = params.linearised(m).expect("m > xi");
            let lin = lin.to_u64().ok_or_else(|| Error::InvalidArgument("A1 element exceeds 64 bits".into()))?;
            a1.push(lin);
            to_u.insert(lin, params.zeta * m);
        }
    }
    let root = params.root.to_u64().ok_or_else(|| Error::InvalidArgument("root exceeds 64 bits".into()))?;
    let step = params.zeta * root;
    let s1: Vec<u64> = (1..=n / step).filter(|y| s_set.contains(&(y * step))).collect();

    // rows: [A | -B] over [0 | C]
    let mut neg_b = b.clone();
    for i in 0..b.rows() {
        for j in 0..t {
            let v = -b.get(i, j).clone();
            neg_b.set(i, j, v);
        }
    }
    let system = assemble_blocks(a, &neg_b, c);
    let mut a_sorted: Vec<u64> = a_set.into_iter().collect();
    a_sorted.sort_unstable();
    let mut s_sorted: Vec<u64> = s_set.into_iter().collect();
    s_sorted.sort_unstable();

    let left_degrees: Vec<u32> = (0..s).map(|_| 1).chain((0..t).map(|_| k)).collect();
    let left_domains: Vec<Vec<u64>> = (0..s).map(|_| a1.clone()).chain((0..t).map(|_| s1.clone())).collect();
    let right_degrees = vec![k; s + t];
    let right_domains: Vec<Vec<u64>> = (0..s).map(|_| a_sorted.clone()).chain((0..t).map(|_| s_sorted.clone())).collect();

    let left = list_mixed_degree(&system, &left_degrees, &left_domains, solution_limit)?;
    let rhs = count_mixed_degree(&system, &right_degrees, &right_domains)?;
    let mut images = HashSet::new();
    let mut all_solve = true;
    for sol in &left {
        let img: Vec<u64> = sol[..s]
            .iter()
            .map(|x| to_u[x])
            .chain(sol[s..].iter().map(|y| y * step))
            .collect();
        all_solve &= is_zero_mixed(&system, &right_degrees, &img);
        images.insert(img);
    }
    let lhs = BigUint::from(left.len());
    let injective = images.len() == left.len();
    let pass = injective && all_solve && lhs <= rhs;
    Ok(TransferReport { a1, s1, lhs, rhs, injective, pass })
}

fn is_zero_mixed(m: &RationalMatrix, degrees: &[u32], x: &[u64]) -> bool {
    (0..m.rows()).all(|i| {
        x.iter()
            .enumerate()
            .map(|(j, &v)| m.get(i, j).numer() * num_traits::pow(BigInt::from(v), degrees[j] as usize))
            .sum::<BigInt>()
            .is_zero()
    })
}
