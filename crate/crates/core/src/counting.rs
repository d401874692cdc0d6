//! Exact solution counts for diagonal systems `M x^k = 0` over boxes of
//! positive integers, mean values of `k`-th power sums, and the analytic
//! constants attached to a pair `(k, n)`.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rational_serde, Rational, RationalMatrix};

/// Default memory budget for the left half table, in bytes.
pub const DEFAULT_MEMORY_BUDGET: u128 = 2 << 30;
/// Largest variable count for which nontrivial counts are computed.
pub const NONTRIVIAL_VARIABLE_CAP: usize = 12;

/// A system `M x^k = 0` with integral `M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalSystem {
    #[serde(rename = "M")]
    pub m: RationalMatrix,
    pub k: u32,
}

impl DiagonalSystem {
    pub fn new(m: RationalMatrix, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("degree k must be at least 1".into()));
        }
        if !m.is_integral() {
            return Err(Error::NotInteger("system matrix".into()));
        }
        Ok(DiagonalSystem { m, k })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R], k: u32) -> Self {
        Self::new(RationalMatrix::from_rows(rows), k).expect("integral rows")
    }

    pub fn vars(&self) -> usize {
        self.m.cols()
    }

    fn columns_i128(&self) -> Result<Vec<Vec<i128>>> {
        (0..self.m.cols())
            .map(|j| {
                (0..self.m.rows())
                    .map(|i| {
                        self.m.get(i, j).numer().to_i128().ok_or_else(|| {
                            Error::InvalidArgument("coefficient does not fit in 128 bits".into())
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// Evaluates `M x^k` exactly.
    pub fn evaluate(&self, x: &[u64]) -> Vec<BigInt> {
        (0..self.m.rows())
            .map(|i| {
                x.iter()
                    .enumerate()
                    .map(|(j, &v)| self.m.get(i, j).numer() * num_traits::pow(BigInt::from(v), self.k as usize))
                    .sum()
            })
            .collect()
    }

    pub fn is_solution(&self, x: &[u64]) -> bool {
        self.evaluate(x).iter().all(Zero::is_zero)
    }
}

pub fn is_pairwise_distinct(x: &[u64]) -> bool {
    let mut v = x.to_vec();
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}

/// One variable of the split-join engine: admissible points and their
/// contribution vectors.
#[derive(Debug, Clone)]
pub(crate) struct Variable {
    pub points: Vec<u64>,
    pub contributions: Vec<Vec<i128>>,
}

fn add_into(acc: &mut [i128], v: &[i128]) -> Result<()> {
    for (a, b) in acc.iter_mut().zip(v) {
        *a = a
            .checked_add(*b)
            .ok_or_else(|| Error::InvalidArgument("partial sums overflow 128 bits".into()))?;
    }
    Ok(())
}

fn power_i128(x: u64, k: u32) -> Result<i128> {
    (x as i128)
        .checked_pow(k)
        .ok_or_else(|| Error::InvalidArgument(format!("{x}^{k} overflows 128 bits")))
}

/// Builds a variable with domain `points` and coefficient column `col`.
pub(crate) fn make_variable(points: Vec<u64>, col: &[i128], k: u32) -> Result<Variable> {
    let contributions = points
        .iter()
        .map(|&x| {
            let p = power_i128(x, k)?;
            col.iter()
                .map(|c| c.checked_mul(p).ok_or_else(|| Error::InvalidArgument("contribution overflows".into())))
                .collect()
        })
        .collect::<Result<Vec<Vec<i128>>>>()?;
    Ok(Variable { points, contributions })
}

/// Index splitting the variables into two halves of nearly equal
/// enumeration size; the left half is never the larger one.
fn split_point(vars: &[Variable]) -> usize {
    let logs: Vec<f64> = vars.iter().map(|v| (v.points.len().max(1) as f64).ln()).collect();
    let total: f64 = logs.iter().sum();
    let mut best = (f64::INFINITY, 0);
    let mut acc = 0.0;
    for (i, l) in logs.iter().enumerate() {
        acc += l;
        if acc <= total - acc + 1e-9 {
            let gap = (total - 2.0 * acc).abs();
            if gap < best.0 {
                best = (gap, i + 1);
            }
        }
    }
    best.1
}

fn enumerate_half<F: FnMut(&[usize], &[i128]) -> Result<()>>(
    vars: &[Variable],
    rows: usize,
    mut f: F,
) -> Result<()> {
    fn rec<F: FnMut(&[usize], &[i128]) -> Result<()>>(
        vars: &[Variable],
        depth: usize,
        idx: &mut Vec<usize>,
        sum: &mut Vec<i128>,
        f: &mut F,
    ) -> Result<()> {
        if depth == vars.len() {
            return f(idx, sum);
        }
        let v = &vars[depth];
        for (p, c) in v.contributions.iter().enumerate() {
            add_into(sum, c)?;
            idx.push(p);
            rec(vars, depth + 1, idx, sum, f)?;
            idx.pop();
            for (a, b) in sum.iter_mut().zip(c) {
                *a -= b;
            }
        }
        Ok(())
    }
    rec(vars, 0, &mut Vec::new(), &mut vec![0; rows], &mut f)
}

fn check_budget(vars: &[Variable], split: usize, rows: usize, budget: u128) -> Result<()> {
    let entries = vars[..split]
        .iter()
        .fold(1u128, |p, v| p.saturating_mul(v.points.len() as u128));
    let bytes = entries.saturating_mul(16 * rows as u128 + 48);
    if bytes > budget {
        return Err(Error::SizeLimitExceeded { what: "split-join table bytes", actual: bytes, limit: budget });
    }
    Ok(())
}

/// Number of tuples with `sum of contributions = 0`.
pub(crate) fn count_zero_sums(vars: &[Variable], rows: usize, budget: u128) -> Result<u128> {
    if vars.iter().any(|v| v.points.is_empty()) {
        return Ok(0);
    }
    if rows == 0 || vars.is_empty() {
        return Ok(vars.iter().map(|v| v.points.len() as u128).product());
    }
    let split = split_point(vars);
    check_budget(vars, split, rows, budget)?;
    let (left, right) = vars.split_at(split);
    let mut table: HashMap<Vec<i128>, u64> = HashMap::new();
    enumerate_half(left, rows, |_, s| {
        *table.entry(s.to_vec()).or_insert(0) += 1;
        Ok(())
    })?;
    if right.is_empty() {
        return Ok(table.get(&vec![0; rows]).copied().unwrap_or(0) as u128);
    }
    // parallel over the first right variable
    let (first, rest) = right.split_first().expect("nonempty");
    first
        .contributions
        .par_iter()
        .map(|c| -> Result<u128> {
            let mut total = 0u128;
            let mut start = c.clone();
            for v in start.iter_mut() {
                *v = -*v;
            }
            enumerate_half(rest, rows, |_, s| {
                let key: Vec<i128> = start.iter().zip(s).map(|(a, b)| a - b).collect();
                total += table.get(&key).copied().unwrap_or(0) as u128;
                Ok(())
            })?;
            Ok(total)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// All zero-sum tuples, as point vectors in variable order, sorted.
pub(crate) fn list_zero_sums(vars: &[Variable], rows: usize, budget: u128, limit: usize) -> Result<Vec<Vec<u64>>> {
    if vars.iter().any(|v| v.points.is_empty()) {
        return Ok(Vec::new());
    }
    let split = split_point(vars);
    check_budget(vars, split, rows, budget)?;
    let (left, right) = vars.split_at(split);
    let mut table: HashMap<Vec<i128>, Vec<Vec<usize>>> = HashMap::new();
    enumerate_half(left, rows, |idx, s| {
        table.entry(s.to_vec()).or_default().push(idx.to_vec());
        Ok(())
    })?;
    let mut out = Vec::new();
    enumerate_half(right, rows, |ridx, s| {
        let key: Vec<i128> = s.iter().map(|v| -v).collect();
        if let Some(lefts) = table.get(&key) {
            for lidx in lefts {
                if out.len() >= limit {
                    return Err(Error::SizeLimitExceeded {
                        what: "solution list length",
                        actual: limit as u128 + 1,
                        limit: limit as u128,
                    });
                }
                let sol: Vec<u64> = lidx
                    .iter()
                    .chain(ridx)
                    .enumerate()
                    .map(|(j, &p)| vars[j].points[p])
                    .collect();
                out.push(sol);
            }
        }
        Ok(())
    })?;
    out.sort_unstable();
    Ok(out)
}

fn domains_or_default(sys: &DiagonalSystem, n: u64, domains: Option<&[Vec<u64>]>) -> Result<Vec<Vec<u64>>> {
    match domains {
        None => Ok(vec![(1..=n).collect(); sys.vars()]),
        Some(d) => {
            if d.len() != sys.vars() {
                return Err(Error::ShapeMismatch(format!(
                    "{} domains for {} variables",
                    d.len(),
                    sys.vars()
                )));
            }
            d.iter()
                .map(|dom| {
                    if let Some(&x) = dom.iter().find(|&&x| x == 0 || x > n) {
                        return Err(Error::InvalidArgument(format!("domain element {x} is outside [1, {n}]")));
                    }
                    let mut v = dom.clone();
                    v.sort_unstable();
                    v.dedup();
                    Ok(v)
                })
                .collect()
        }
    }
}

fn intersect(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

/// Counts solutions in which the variables of each block are forced equal.
fn count_merged(
    sys: &DiagonalSystem,
    cols: &[Vec<i128>],
    domains: &[Vec<u64>],
    blocks: &[Vec<usize>],
    budget: u128,
) -> Result<u128> {
    let vars = blocks
        .iter()
        .map(|b| {
            let mut dom = domains[b[0]].clone();
            let mut col = vec![0i128; sys.m.rows()];
            for &j in b {
                dom = intersect(&dom, &domains[j]);
                add_into(&mut col, &cols[j])?;
            }
            make_variable(dom, &col, sys.k)
        })
        .collect::<Result<Vec<_>>>()?;
    count_zero_sums(&vars, sys.m.rows(), budget)
}

/// Calls `f` on every set partition of `0..n` (blocks in order of least
/// element).
pub(crate) fn for_each_set_partition<F: FnMut(&[Vec<usize>]) -> Result<()>>(n: usize, mut f: F) -> Result<()> {
    fn rec<F: FnMut(&[Vec<usize>]) -> Result<()>>(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, f: &mut F) -> Result<()> {
        if i == n {
            return f(blocks);
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, n, blocks, f)?;
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, n, blocks, f)?;
        blocks.pop();
        Ok(())
    }
    rec(0, n, &mut Vec::new(), &mut f)
}

fn mobius_weight(blocks: &[Vec<usize>]) -> BigInt {
    blocks.iter().fold(BigInt::from(1), |acc, b| {
        let m = b.len() - 1;
        let fact: BigInt = (1..=m as u64).map(BigInt::from).product();
        if m % 2 == 1 {
            acc * -fact
        } else {
            acc * fact
        }
    })
}

/// Exact totals over a box; nontrivial means pairwise distinct coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionCount {
    pub system: DiagonalSystem,
    #[serde(rename = "N")]
    pub n: u64,
    pub counts: Counts,
    #[serde(rename = "perVariableDomains", default, skip_serializing_if = "Option::is_none")]
    pub per_variable_domains: Option<Vec<Vec<u64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    #[serde(with = "biguint_string")]
    pub total: BigUint,
    #[serde(with = "biguint_string")]
    pub trivial: BigUint,
    #[serde(with = "biguint_string")]
    pub nontrivial: BigUint,
}

pub mod biguint_string {
    use num_bigint::BigUint;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CountOptions {
    pub memory_budget: u128,
    /// Skip the partition-lattice pass and report only the total.
    pub total_only: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { memory_budget: DEFAULT_MEMORY_BUDGET, total_only: false }
    }
}

/// Total solution count over `prod domains` (default `[N]^s`).
pub fn count_total(sys: &DiagonalSystem, n: u64, domains: Option<&[Vec<u64>]>, budget: u128) -> Result<BigUint> {
    let doms = domains_or_default(sys, n, domains)?;
    let cols = sys.columns_i128()?;
    let vars = doms
        .into_iter()
        .zip(&cols)
        .map(|(d, c)| make_variable(d, c, sys.k))
        .collect::<Result<Vec<_>>>()?;
    Ok(BigUint::from(count_zero_sums(&vars, sys.m.rows(), budget)?))
}

/// Total, trivial and nontrivial counts. The nontrivial count is obtained
/// by Moebius inversion over the lattice of set partitions of the
/// variables, each term being a count with the variables of every block
/// merged.
pub fn count_solutions_with(
    sys: &DiagonalSystem,
    n: u64,
    domains: Option<&[Vec<u64>]>,
    opts: CountOptions,
) -> Result<SolutionCount> {
    let doms = domains_or_default(sys, n, domains)?;
    let s = sys.vars();
    if s > NONTRIVIAL_VARIABLE_CAP && !opts.total_only {
        return Err(Error::SizeLimitExceeded {
            what: "variable count for nontrivial counting",
            actual: s as u128,
            limit: NONTRIVIAL_VARIABLE_CAP as u128,
        });
    }
    let cols = sys.columns_i128()?;
    let singletons: Vec<Vec<usize>> = (0..s).map(|j| vec![j]).collect();
    let total = BigInt::from(count_merged(sys, &cols, &doms, &singletons, opts.memory_budget)?);
    let nontrivial = if opts.total_only {
        BigInt::zero()
    } else {
        let mut acc = BigInt::zero();
        for_each_set_partition(s, |blocks| {
            let c = count_merged(sys, &cols, &doms, blocks, opts.memory_budget)?;
            if c != 0 {
                acc += mobius_weight(blocks) * BigInt::from(c);
            }
            Ok(())
        })?;
        acc
    };
    if nontrivial.sign() == num_bigint::Sign::Minus || nontrivial > total {
        return Err(Error::Invariant("nontrivial count outside [0, total]".into()));
    }
    let total = total.to_biguint().expect("nonnegative");
    let nontrivial = nontrivial.to_biguint().expect("nonnegative");
    Ok(SolutionCount {
        system: sys.clone(),
        n,
        counts: Counts { trivial: &total - &nontrivial, total, nontrivial },
        per_variable_domains: domains.map(|d| d.to_vec()),
    })
}

pub fn count_solutions(sys: &DiagonalSystem, n: u64, domains: Option<&[Vec<u64>]>) -> Result<SolutionCount> {
    count_solutions_with(sys, n, domains, CountOptions::default())
}

/// Solutions over `[N]^s` with coordinates `u` and `v` (0-based) equal.
pub fn count_trivial_pair(sys: &DiagonalSystem, n: u64, u: usize, v: usize) -> Result<BigUint> {
    let s = sys.vars();
    for idx in [u, v] {
        if idx >= s {
            return Err(Error::IndexOutOfRange { index: idx, cols: s });
        }
    }
    if u >= v {
        return Err(Error::InvalidArgument(format!("need u < v, got u={u}, v={v}")));
    }
    if n == 0 {
        return Ok(BigUint::zero());
    }
    let cols = sys.columns_i128()?;
    let doms = vec![(1..=n).collect::<Vec<u64>>(); s];
    let mut blocks: Vec<Vec<usize>> = (0..s).filter(|&j| j != v).map(|j| vec![j]).collect();
    blocks.iter_mut().find(|b| b[0] == u).expect("u present").push(v);
    Ok(BigUint::from(count_merged(sys, &cols, &doms, &blocks, DEFAULT_MEMORY_BUDGET)?))
}

/// Every solution over the given domains, sorted lexicographically.
pub fn enumerate_solutions(
    sys: &DiagonalSystem,
    n: u64,
    domains: Option<&[Vec<u64>]>,
    limit: usize,
) -> Result<Vec<Vec<u64>>> {
    let doms = domains_or_default(sys, n, domains)?;
    let cols = sys.columns_i128()?;
    let vars = doms
        .into_iter()
        .zip(&cols)
        .map(|(d, c)| make_variable(d, c, sys.k))
        .collect::<Result<Vec<_>>>()?;
    list_zero_sums(&vars, sys.m.rows(), DEFAULT_MEMORY_BUDGET, limit)
}

fn mixed_variables(m: &RationalMatrix, degrees: &[u32], domains: &[Vec<u64>]) -> Result<Vec<Variable>> {
    if degrees.len() != m.cols() || domains.len() != m.cols() {
        return Err(Error::ShapeMismatch(format!(
            "{} columns, {} degrees, {} domains",
            m.cols(),
            degrees.len(),
            domains.len()
        )));
    }
    let sys = DiagonalSystem::new(m.clone(), 1)?;
    let cols = sys.columns_i128()?;
    domains
        .iter()
        .zip(&cols)
        .zip(degrees)
        .map(|((d, c), &k)| {
            let mut d = d.clone();
            d.sort_unstable();
            d.dedup();
            make_variable(d, c, k)
        })
        .collect()
}

/// Counts `x` in `prod domains` with `sum_j M[.][j] x_j^(degrees[j]) = 0`.
pub fn count_mixed_degree(m: &RationalMatrix, degrees: &[u32], domains: &[Vec<u64>]) -> Result<BigUint> {
    let vars = mixed_variables(m, degrees, domains)?;
    Ok(BigUint::from(count_zero_sums(&vars, m.rows(), DEFAULT_MEMORY_BUDGET)?))
}

/// Lists the solutions counted by [`count_mixed_degree`].
pub fn list_mixed_degree(
    m: &RationalMatrix,
    degrees: &[u32],
    domains: &[Vec<u64>],
    limit: usize,
) -> Result<Vec<Vec<u64>>> {
    let vars = mixed_variables(m, degrees, domains)?;
    list_zero_sums(&vars, m.rows(), DEFAULT_MEMORY_BUDGET, limit)
}

/// `N(k, t, N)`: solutions in `[N]^(2t)` of equal sums of `t` `k`-th powers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentRecord {
    pub k: u32,
    pub t: u32,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(with = "biguint_string")]
    pub value: BigUint,
}

/// Maximum length of the convolution array.
pub const MEAN_VALUE_ARRAY_CAP: u128 = 1 << 28;

/// Mean value by `t`-fold convolution of the representation array of
/// `{x^k : x in [N]}`, then the sum of squares.
pub fn mean_value(k: u32, t: u32, n: u64) -> Result<MomentRecord> {
    if k == 0 || t == 0 || n == 0 {
        return Err(Error::InvalidArgument("k, t and N must be at least 1".into()));
    }
    let top = (n as u128)
        .checked_pow(k)
        .and_then(|p| p.checked_mul(t as u128))
        .unwrap_or(u128::MAX);
    if top >= MEAN_VALUE_ARRAY_CAP {
        return Err(Error::SizeLimitExceeded { what: "convolution array length", actual: top, limit: MEAN_VALUE_ARRAY_CAP });
    }
    if (n as u128).checked_pow(t).is_none_or(|v| v > u64::MAX as u128) {
        return Err(Error::SizeLimitExceeded { what: "representation counts", actual: u128::MAX, limit: u64::MAX as u128 });
    }
    let powers: Vec<usize> = (1..=n).map(|x| (x as usize).pow(k)).collect();
    let mut cur = vec![0u64; powers[powers.len() - 1] + 1];
    for &p in &powers {
        cur[p] += 1;
    }
    for _ in 1..t {
        let len = cur.len() + powers[powers.len() - 1];
        let prev = &cur;
        let next: Vec<u64> = (0..len)
            .into_par_iter()
            .map(|m| powers.iter().filter(|&&p| p <= m && m - p < prev.len()).map(|&p| prev[m - p]).sum())
            .collect();
        cur = next;
    }
    let value: u128 = cur.par_iter().map(|&c| (c as u128) * (c as u128)).sum();
    Ok(MomentRecord { k, t, n, value: BigUint::from(value) })
}

/// Cap on `N^(2t)` for the direct pairing count.
pub const PAIRING_CAP: u128 = 1 << 26;

/// Direct count of pairs `(x, y) in [N]^t x [N]^t` with equal power sums.
pub fn moment_by_pairing(k: u32, t: u32, n: u64) -> Result<BigUint> {
    let size = (n as u128).checked_pow(2 * t).unwrap_or(u128::MAX);
    if size > PAIRING_CAP {
        return Err(Error::SizeLimitExceeded { what: "pairing enumeration", actual: size, limit: PAIRING_CAP });
    }
    let tuples: Vec<u128> = {
        let mut sums = vec![0u128];
        for _ in 0..t {
            sums = sums
                .iter()
                .flat_map(|&s| (1..=n).map(move |x| s + (x as u128).pow(k)))
                .collect();
        }
        sums
    };
    let mut count = 0u128;
    for a in &tuples {
        for b in &tuples {
            if a == b {
                count += 1;
            }
        }
    }
    Ok(BigUint::from(count))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenMomentCheck {
    pub record: MomentRecord,
    #[serde(with = "biguint_string")]
    pub pairing: BigUint,
    pub equal: bool,
}

pub fn even_moment_check(k: u32, t: u32, n: u64) -> Result<EvenMomentCheck> {
    let record = mean_value(k, t, n)?;
    let pairing = moment_by_pairing(k, t, n)?;
    Ok(EvenMomentCheck { equal: record.value == pairing, record, pairing })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    #[serde(rename = "maxResidual")]
    pub max_residual: f64,
    pub points: usize,
}

/// Least squares line through `(ln N, ln value)`.
pub fn exponent_fit(series: &[(f64, f64)]) -> Result<ExponentFit> {
    if series.len() < 3 {
        return Err(Error::DegenerateSeries(format!("need at least 3 points, got {}", series.len())));
    }
    if let Some(p) = series.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(Error::DegenerateSeries(format!("non-positive point ({}, {})", p.0, p.1)));
    }
    let pts: Vec<(f64, f64)> = series.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx < 1e-12 {
        return Err(Error::DegenerateSeries("all abscissae coincide".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).abs())
        .fold(0.0, f64::max);
    Ok(ExponentFit { slope, intercept, max_residual, points: series.len() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyticConstants {
    pub k: u32,
    pub n: u32,
    #[serde(with = "rational_serde")]
    pub p: Rational,
    #[serde(with = "rational_serde")]
    pub eta: Rational,
    #[serde(rename = "deltaTriv", with = "rational_serde")]
    pub delta_triv: Rational,
    #[serde(rename = "tK")]
    pub t_k: u32,
}

/// `p = k^2 + 1/(2n)`, `eta = 1/(2k^2 n + 2)`, `delta = 2kn/(k^2 n + 1)`,
/// `t_k = floor(k^2/2)`.
pub fn analytic_constants(k: u32, n: u32) -> Result<AnalyticConstants> {
    if k < 2 || n < 1 {
        return Err(Error::InvalidArgument("need k >= 2 and n >= 1".into()));
    }
    let (kk, nn) = (BigInt::from(k), BigInt::from(n));
    let k2 = &kk * &kk;
    let r = |a: BigInt, b: BigInt| Rational::new(a, b);
    Ok(AnalyticConstants {
        k,
        n,
        p: Rational::from_integer(k2.clone()) + r(1.into(), 2 * &nn),
        eta: r(1.into(), 2 * &k2 * &nn + 2),
        delta_triv: r(2 * &kk * &nn, &k2 * &nn + 1),
        t_k: k * k / 2,
    })
}
