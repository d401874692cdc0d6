//! The column vector matroid of a rational matrix: the `mu` and `q`
//! profiles, the support non-singularity condition, and (quasi-)
//! partitionability.

use std::collections::VecDeque;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Rational, RationalMatrix, SpanBasis};

/// Largest column count accepted by the subset enumerations in this module.
pub const DEFAULT_SUBSET_CAP: usize = 24;

/// Rank oracle for subsets of the columns of a fixed matrix.
#[derive(Debug, Clone)]
pub struct ColumnMatroid {
    columns: Vec<Vec<Rational>>,
    rank: usize,
}

impl ColumnMatroid {
    pub fn new(m: &RationalMatrix) -> Self {
        ColumnMatroid {
            columns: (0..m.cols()).map(|j| m.column(j)).collect(),
            rank: linalg::rank(m),
        }
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rank_of(&self, subset: &[usize]) -> usize {
        let mut b = SpanBasis::default();
        for &c in subset {
            b.insert(&self.columns[c]);
        }
        b.dim()
    }

    pub fn is_independent(&self, subset: &[usize]) -> bool {
        let mut b = SpanBasis::default();
        subset.iter().all(|&c| b.insert(&self.columns[c]))
    }

    fn is_loop(&self, c: usize) -> bool {
        self.columns[c].iter().all(Zero::is_zero)
    }

    /// All columns in the span of `subset`, ascending.
    pub fn closure(&self, subset: &[usize]) -> Vec<usize> {
        let mut b = SpanBasis::default();
        for &c in subset {
            b.insert(&self.columns[c]);
        }
        (0..self.len()).filter(|&c| b.contains(&self.columns[c])).collect()
    }

    /// A largest flat of rank at most `d`; among those of maximum size, the
    /// lexicographically least one.
    pub fn max_flat(&self, d: usize) -> Vec<usize> {
        if d >= self.rank {
            return (0..self.len()).collect();
        }
        if d == 0 {
            return (0..self.len()).filter(|&c| self.is_loop(c)).collect();
        }
        let mut best: Option<Vec<usize>> = None;
        for_each_combination(self.len(), d, |subset| {
            if !self.is_independent(subset) {
                return;
            }
            let flat = self.closure(subset);
            let better = match &best {
                None => true,
                Some(b) => flat.len() > b.len() || (flat.len() == b.len() && flat < *b),
            };
            if better {
                best = Some(flat);
            }
        });
        best.unwrap_or_default()
    }

    /// `mu(d)`: the largest number of columns spanning dimension at most `d`.
    pub fn mu(&self, d: usize) -> usize {
        self.max_flat(d).len()
    }
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn check_cap(cols: usize) -> Result<()> {
    if cols > DEFAULT_SUBSET_CAP {
        return Err(Error::SizeLimitExceeded {
            what: "column count",
            actual: cols as u128,
            limit: DEFAULT_SUBSET_CAP as u128,
        });
    }
    Ok(())
}

/// `mu(0), ..., mu(rank)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuProfile {
    pub values: Vec<usize>,
}

/// `q(0), ..., q(rank)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QProfile {
    pub values: Vec<usize>,
}

pub fn mu(m: &RationalMatrix, d: usize) -> Result<usize> {
    check_cap(m.cols())?;
    let cm = ColumnMatroid::new(m);
    if d > cm.rank() {
        return Err(Error::InvalidArgument(format!("d = {d} exceeds rank {}", cm.rank())));
    }
    Ok(cm.mu(d))
}

pub fn mu_profile(m: &RationalMatrix) -> Result<MuProfile> {
    check_cap(m.cols())?;
    let cm = ColumnMatroid::new(m);
    Ok(MuProfile { values: (0..=cm.rank()).map(|d| cm.mu(d)).collect() })
}

fn require_full_row_rank(m: &RationalMatrix) -> Result<usize> {
    let r = linalg::rank(m);
    if r != m.rows() {
        return Err(Error::NotFullRowRank { rank: r, rows: m.rows() });
    }
    Ok(r)
}

/// `q(d)` for `d = 0..=rows`.
///
/// A row-space vector `lambda^T M` is supported inside `T` exactly when
/// `lambda` annihilates the columns outside `T`, so for a full row rank
/// matrix the row-space vectors supported in `T` form a space of dimension
/// `n - rank(M restricted to the complement of T)`. Minimising `|T|` is
/// maximising the complement subject to a rank bound, hence
/// `q(d) = s - mu(n - d)`.
pub fn q_profile(m: &RationalMatrix) -> Result<QProfile> {
    check_cap(m.cols())?;
    let n = require_full_row_rank(m)?;
    let cm = ColumnMatroid::new(m);
    let s = m.cols();
    Ok(QProfile { values: (0..=n).map(|d| s - cm.mu(n - d)).collect() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionIFailure {
    pub d: usize,
    pub q: usize,
    pub threshold: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionIReport {
    pub holds: bool,
    pub k: u32,
    pub failures: Vec<ConditionIFailure>,
}

/// Checks `q(d) >= d k^2 + 1` for every `1 <= d <= rank`.
pub fn check_condition_i(m: &RationalMatrix, k: u32) -> Result<ConditionIReport> {
    let q = q_profile(m)?;
    let k2 = (k as usize) * (k as usize);
    let failures: Vec<_> = q
        .values
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(d, &qd)| qd < d * k2 + 1)
        .map(|(d, &qd)| ConditionIFailure { d, q: qd, threshold: d * k2 + 1 })
        .collect();
    Ok(ConditionIReport { holds: failures.is_empty(), k, failures })
}

/// `k` disjoint column blocks, each a nonsingular `n x n` submatrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCertificate {
    pub blocks: Vec<Vec<usize>>,
}

impl PartitionCertificate {
    pub fn validate(&self, m: &RationalMatrix) -> bool {
        let mut seen = vec![false; m.cols()];
        for b in &self.blocks {
            if b.len() != m.rows() {
                return false;
            }
            for &c in b {
                if c >= m.cols() || seen[c] {
                    return false;
                }
                seen[c] = true;
            }
            match m.select_columns(b) {
                Ok(sub) if linalg::rank(&sub) == m.rows() => {}
                _ => return false,
            }
        }
        seen.into_iter().all(|x| x)
    }
}

/// Aigner's criterion: `mu(d) <= d k` for all `0 <= d <= n`.
pub fn aigner_criterion(m: &RationalMatrix, k: usize) -> Result<bool> {
    check_cap(m.cols())?;
    let cm = ColumnMatroid::new(m);
    let n = m.rows();
    Ok((0..=n).all(|d| {
        let mu = if d >= cm.rank() { m.cols() } else { cm.mu(d) };
        mu <= d * k
    }))
}

/// Edmonds-style matroid partitioning of `ground` into `k` independent
/// sets. Elements are inserted in increasing order; the exchange graph is
/// searched breadth first with sets and elements visited in increasing
/// order, so the output is deterministic.
fn matroid_partition(cm: &ColumnMatroid, ground: &[usize], k: usize) -> Option<Vec<Vec<usize>>> {
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut owner: Vec<Option<usize>> = vec![None; cm.len()];
    let with = |set: &[usize], add: usize, drop: Option<usize>| -> Vec<usize> {
        let mut v: Vec<usize> = set.iter().copied().filter(|&e| Some(e) != drop).collect();
        v.push(add);
        v
    };
    for &x in ground {
        // parent[z] = (y, i): y enters set i, displacing z.
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; cm.len()];
        let mut visited = vec![false; cm.len()];
        visited[x] = true;
        let mut queue = VecDeque::from([x]);
        let mut sink: Option<(usize, usize)> = None;
        'bfs: while let Some(y) = queue.pop_front() {
            for i in 0..k {
                if owner[y] == Some(i) {
                    continue;
                }
                if cm.is_independent(&with(&sets[i], y, None)) {
                    sink = Some((y, i));
                    break 'bfs;
                }
                let mut members = sets[i].clone();
                members.sort_unstable();
                for z in members {
                    if !visited[z] && cm.is_independent(&with(&sets[i], y, Some(z))) {
                        visited[z] = true;
                        parent[z] = Some((y, i));
                        queue.push_back(z);
                    }
                }
            }
        }
        let (mut y, mut i) = sink?;
        loop {
            if let Some(old) = owner[y] {
                sets[old].retain(|&e| e != y);
            }
            sets[i].push(y);
            owner[y] = Some(i);
            match parent[y] {
                Some(_) if y == x => break,
                None => break,
                Some((prev, set)) => {
                    // `y` was displaced from `set` by `prev`; it has already
                    // been moved to its new set above.
                    y = prev;
                    i = set;
                }
            }
        }
    }
    for s in &mut sets {
        s.sort_unstable();
    }
    Some(sets)
}

fn partitionable_into_bases(cm: &ColumnMatroid, ground: &[usize], k: usize, n: usize) -> bool {
    if ground.len() != k * n {
        return false;
    }
    if k == 0 {
        return true;
    }
    matroid_partition(cm, ground, k).is_some_and(|sets| sets.iter().all(|s| s.len() == n))
}

/// Lexicographically least certificate, built block by block; each choice
/// is confirmed feasible with the constructive partition routine.
fn canonical_certificate(cm: &ColumnMatroid, k: usize, n: usize) -> Option<PartitionCertificate> {
    let mut remaining: Vec<usize> = (0..cm.len()).collect();
    let mut blocks = Vec::with_capacity(k);
    for left in (1..=k).rev() {
        let first = *remaining.first()?;
        let rest: Vec<usize> = remaining[1..].to_vec();
        let mut chosen: Option<Vec<usize>> = None;
        let mut stop = false;
        for_each_combination(rest.len(), n - 1, |idx| {
            if stop {
                return;
            }
            let mut block = vec![first];
            block.extend(idx.iter().map(|&i| rest[i]));
            if !cm.is_independent(&block) {
                return;
            }
            let others: Vec<usize> = remaining.iter().copied().filter(|c| !block.contains(c)).collect();
            if partitionable_into_bases(cm, &others, left - 1, n) {
                chosen = Some(block);
                stop = true;
            }
        });
        let block = chosen?;
        remaining.retain(|c| !block.contains(c));
        blocks.push(block);
    }
    Some(PartitionCertificate { blocks })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub k: usize,
    #[serde(rename = "aignerCriterion")]
    pub aigner_criterion: bool,
    pub blocks: Option<Vec<Vec<usize>>>,
}

/// Decides `k`-partitionability by Aigner's criterion and by constructive
/// matroid partitioning; the two routes must agree.
pub fn is_k_partitionable(m: &RationalMatrix, k: usize) -> Result<Option<PartitionCertificate>> {
    Ok(partition_report(m, k)?.blocks.map(|blocks| PartitionCertificate { blocks }))
}

pub fn partition_report(m: &RationalMatrix, k: usize) -> Result<PartitionReport> {
    if k == 0 || m.cols() != k * m.rows() {
        return Err(Error::ShapeMismatch(format!(
            "{} columns is not k * rows = {} * {}",
            m.cols(),
            k,
            m.rows()
        )));
    }
    let aigner = aigner_criterion(m, k)?;
    let cm = ColumnMatroid::new(m);
    let n = m.rows();
    let ground: Vec<usize> = (0..m.cols()).collect();
    let constructive = partitionable_into_bases(&cm, &ground, k, n);
    if aigner != constructive {
        return Err(Error::Invariant(format!(
            "Aigner criterion says {aigner} but matroid partitioning says {constructive}"
        )));
    }
    let blocks = if constructive {
        let cert = canonical_certificate(&cm, k, n)
            .ok_or_else(|| Error::Invariant("feasible partition lost during canonicalisation".into()))?;
        if !cert.validate(m) {
            return Err(Error::Invariant("emitted partition certificate is invalid".into()));
        }
        Some(cert.blocks)
    } else {
        None
    };
    Ok(PartitionReport { k, aigner_criterion: aigner, blocks })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiReport {
    pub q: usize,
    pub holds: bool,
    /// `s >= n q`
    #[serde(rename = "sizeClause")]
    pub size_clause: bool,
    /// Smallest `d < n` with `mu(d) > d q`.
    #[serde(rename = "firstViolation")]
    pub first_violation: Option<usize>,
}

/// Quasi-`q`-partitionability: `s >= n q` and `mu(d) <= d q` for `0 <= d < n`.
pub fn is_quasi_partitionable(m: &RationalMatrix, q: usize) -> Result<QuasiReport> {
    check_cap(m.cols())?;
    let (n, s) = (m.rows(), m.cols());
    let size_clause = n > 0 && s > 0 && s >= n * q;
    let cm = ColumnMatroid::new(m);
    let first_violation = (0..n).find(|&d| {
        let mu = if d >= cm.rank() { s } else { cm.mu(d) };
        mu > d * q
    });
    Ok(QuasiReport {
        q,
        holds: size_clause && first_violation.is_none(),
        size_clause,
        first_violation,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionSection {
    pub k: usize,
    pub blocks: Option<Vec<Vec<usize>>>,
}

/// Combined report in the `mu-q` output layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatroidReport {
    pub mu: Vec<usize>,
    pub q: Vec<usize>,
    #[serde(rename = "conditionI")]
    pub condition_i: ConditionIReport,
    pub partition: PartitionSection,
}

pub fn matroid_report(m: &RationalMatrix, k: u32) -> Result<MatroidReport> {
    let mu = mu_profile(m)?.values;
    let q = q_profile(m)?.values;
    let condition_i = check_condition_i(m, k)?;
    let kk = k as usize;
    let blocks = if kk > 0 && m.cols() == kk * m.rows() {
        is_k_partitionable(m, kk)?.map(|c| c.blocks)
    } else {
        None
    };
    Ok(MatroidReport { mu, q, condition_i, partition: PartitionSection { k: kk, blocks } })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fermat() -> RationalMatrix {
        RationalMatrix::from_rows(&[[1, -2, 1, 0], [1, -1, 0, 1]])
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu(&RationalMatrix::identity(3), 2).unwrap(), 2);
        assert_eq!(mu(&fermat(), 1).unwrap(), 1);
        let dup = RationalMatrix::from_rows(&[[1, 0, 1, 0], [0, 1, 0, 1]]);
        assert_eq!(mu(&dup, 1).unwrap(), 2);
    }

    #[test]
    fn mu_zero_counts_zero_columns() {
        let m = RationalMatrix::from_rows(&[[0, 1, 0], [0, 2, 0]]);
        assert_eq!(mu_profile(&m).unwrap().values, vec![2, 3]);
    }

    #[test]
    fn q_examples() {
        assert_eq!(q_profile(&RationalMatrix::identity(3)).unwrap().values, vec![0, 1, 2, 3]);
        assert_eq!(q_profile(&fermat()).unwrap().values, vec![0, 3, 4]);
        let row = RationalMatrix::from_rows(&[[1, 1, 1, 1, -4]]);
        assert_eq!(q_profile(&row).unwrap().values, vec![0, 5]);
    }

    #[test]
    fn q_rejects_dependent_rows() {
        let m = RationalMatrix::from_rows(&[[1, 2], [2, 4]]);
        assert!(matches!(q_profile(&m), Err(Error::NotFullRowRank { rank: 1, rows: 2 })));
    }

    #[test]
    fn condition_i_examples() {
        let r = check_condition_i(&RationalMatrix::from_rows(&[[1, 1, 1, 1, -4]]), 2).unwrap();
        assert!(r.holds);
        let r = check_condition_i(&fermat(), 2).unwrap();
        assert!(!r.holds);
        assert_eq!(
            r.failures,
            vec![
                ConditionIFailure { d: 1, q: 3, threshold: 5 },
                ConditionIFailure { d: 2, q: 4, threshold: 9 },
            ]
        );
    }

    #[test]
    fn two_by_nine_condition_i_matches_support_count() {
        // Every nonzero row-space vector has at least 5 nonzero entries.
        let m = RationalMatrix::from_rows(&[
            [1, 1, 1, 1, 1, 0, 0, 0, -1],
            [0, 0, 0, 0, 1, 1, 1, 1, 1],
        ]);
        let q = q_profile(&m).unwrap().values;
        let r = check_condition_i(&m, 2).unwrap();
        assert_eq!(r.holds, q[1] >= 5 && q[2] == 9);
        assert!(r.holds);
    }

    #[test]
    fn partition_examples() {
        let dup = RationalMatrix::from_rows(&[[1, 0, 1, 0], [0, 1, 0, 1]]);
        let cert = is_k_partitionable(&dup, 2).unwrap().unwrap();
        assert_eq!(cert.blocks, vec![vec![0, 1], vec![2, 3]]);

        let singular = RationalMatrix::from_rows(&[[1, 1, 1, 1], [0, 0, 0, 0]]);
        assert!(is_k_partitionable(&singular, 2).unwrap().is_none());

        assert!(matches!(is_k_partitionable(&dup, 3), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn canonical_certificate_is_lexicographically_least() {
        // columns 0 and 1 are parallel, so {0,1} cannot be a block
        let m = RationalMatrix::from_rows(&[[1, 2, 0, 1], [0, 0, 1, 1]]);
        let cert = is_k_partitionable(&m, 2).unwrap().unwrap();
        assert_eq!(cert.blocks, vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn quasi_examples() {
        let m = RationalMatrix::from_rows(&[[1, 1, -2, 0], [0, 1, 1, -2]]);
        assert!(is_quasi_partitionable(&m, 1).unwrap().holds);
        let m = RationalMatrix::from_rows(&[[1, -1, 0, 0], [0, 0, 1, -1]]);
        let r = is_quasi_partitionable(&m, 1).unwrap();
        assert!(!r.holds);
        assert_eq!(r.first_violation, Some(1));
        let r = is_quasi_partitionable(&RationalMatrix::identity(2), 2).unwrap();
        assert!(!r.size_clause && !r.holds);
    }

    #[test]
    fn combinations_in_lex_order() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| seen.push(c.to_vec()));
        assert_eq!(seen, vec![[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]);
        let mut count = 0;
        for_each_combination(3, 0, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn cap_is_enforced() {
        let m = RationalMatrix::zeros(1, 25);
        assert!(matches!(mu_profile(&m), Err(Error::SizeLimitExceeded { .. })));
    }
}
