//! Exact rational linear algebra.
//!
//! Everything here works over `BigRational`, so results are bit-exact and can
//! be replayed by third parties. Row reduction records a transcript of the
//! elementary operations it performs, which is what the structural
//! certificates elsewhere in the crate are built from.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"n"`, `"n/d"` or a decimal integer into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidMatrix(format!("cannot parse rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => parse_pair(n, d),
        None => s.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
    }
}

fn parse_pair(n: &str, d: &str) -> Result<Rational> {
    let bad = || Error::InvalidMatrix(format!("cannot parse rational {n:?}/{d:?}"));
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::InvalidMatrix("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

/// Serialises a rational as `"n"` when integral and `["n","d"]` otherwise.
pub fn rational_to_json(r: &Rational) -> serde_json::Value {
    if r.is_integer() {
        serde_json::Value::String(r.numer().to_string())
    } else {
        serde_json::json!([r.numer().to_string(), r.denom().to_string()])
    }
}

pub fn rational_from_json(v: &serde_json::Value) -> Result<Rational> {
    use serde_json::Value;
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::Array(parts) if parts.len() == 2 => {
            let text = |p: &Value| match p {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(Error::InvalidMatrix(format!("bad rational component {p}"))),
            };
            parse_pair(&text(&parts[0])?, &text(&parts[1])?)
        }
        _ => Err(Error::InvalidMatrix(format!("bad rational {v}"))),
    }
}

/// Serde adapter for fields holding a single [`Rational`].
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational_to_json(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        rational_from_json(&v).map_err(de::Error::custom)
    }
}

/// Dense row-major matrix of exact rationals. Empty shapes are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from integer rows. Panics on ragged input; use
    /// [`RationalMatrix::new`] for untrusted data.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            entries.extend(r.as_ref().iter().map(|&x| int(x)));
        }
        RationalMatrix { rows: rows.len(), cols, entries }
    }

    /// Like [`RationalMatrix::from_rows`] but with an explicit column count, so
    /// that `0 x cols` matrices can be built.
    pub fn from_rows_with_cols<R: AsRef<[i64]>>(rows: &[R], cols: usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.as_ref().len() != cols {
                return Err(Error::InvalidMatrix("ragged rows".into()));
            }
            entries.extend(r.as_ref().iter().map(|&x| int(x)));
        }
        Self::new(rows.len(), cols, entries)
    }

    pub fn from_rational_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::InvalidMatrix("ragged rows".into()));
            }
            entries.extend(r);
        }
        Self::new(n, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Submatrix on the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        for &c in cols {
            if c >= self.cols {
                return Err(Error::IndexOutOfRange { index: c, cols: self.cols });
            }
        }
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            entries.extend(cols.iter().map(|&c| self.get(i, c).clone()));
        }
        Self::new(self.rows, cols.len(), entries)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            entries.extend_from_slice(self.row(r));
        }
        RationalMatrix { rows: rows.len(), cols: self.cols, entries }
    }

    /// The block `rows[r0..r1] x cols[c0..c1]`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut entries = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            entries.extend_from_slice(&self.row(i)[c0..c1]);
        }
        RationalMatrix { rows: r1 - r0, cols: c1 - c0, entries }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn column_sum(&self, cols: impl IntoIterator<Item = usize>) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); self.rows];
        for j in cols {
            for (i, a) in acc.iter_mut().enumerate() {
                *a += self.get(i, j);
            }
        }
        acc
    }

    pub fn columns_sum_to_zero(&self) -> bool {
        self.column_sum(0..self.cols).iter().all(Zero::is_zero)
    }

    pub fn is_zero_column(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.get(i, j).is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| e.is_integer())
    }

    /// Integer entries, row by row. Fails if any entry is not integral.
    pub fn to_integer_rows(&self) -> Result<Vec<Vec<BigInt>>> {
        if !self.is_integral() {
            return Err(Error::NotInteger("matrix has non-integral entries".into()));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.numer().clone()).collect())
            .collect())
    }

    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        self.to_integer_rows()?
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|e| {
                        e.to_i64()
                            .ok_or_else(|| Error::InvalidMatrix(format!("entry {e} exceeds 64 bits")))
                    })
                    .collect()
            })
            .collect()
    }

    /// Each row multiplied by the lcm of its denominators. Row space and
    /// column matroid are unchanged.
    pub fn row_scaled_integers(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |l, e| l.lcm(e.denom()));
                row.iter().map(|e| (e * Rational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect()
    }

    pub(crate) fn apply_row_op(&mut self, op: &RowOp) {
        let c = self.cols;
        match op {
            RowOp::Swap { i, j } => {
                for k in 0..c {
                    self.entries.swap(i * c + k, j * c + k);
                }
            }
            RowOp::Scale { i, by } => {
                for k in 0..c {
                    self.entries[i * c + k] *= by;
                }
            }
            RowOp::Add { from, to, factor } => {
                for k in 0..c {
                    let add = &self.entries[from * c + k] * factor;
                    self.entries[to * c + k] += add;
                }
            }
        }
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{e}")?;
            }
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_json::json!({
            "rows": self.rows,
            "cols": self.cols,
            "entries": self.entries.iter().map(rational_to_json).collect::<Vec<_>>(),
        })
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            rows: usize,
            cols: usize,
            entries: Vec<serde_json::Value>,
        }
        let raw = Raw::deserialize(d)?;
        let entries = raw
            .entries
            .iter()
            .map(rational_from_json)
            .collect::<Result<Vec<_>>>()
            .map_err(de::Error::custom)?;
        RationalMatrix::new(raw.rows, raw.cols, entries).map_err(de::Error::custom)
    }
}

/// Elementary row operation. `Add` performs `row[to] += factor * row[from]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum RowOp {
    Swap { i: usize, j: usize },
    Scale {
        i: usize,
        #[serde(with = "rational_serde")]
        by: Rational,
    },
    Add {
        from: usize,
        to: usize,
        #[serde(with = "rational_serde")]
        factor: Rational,
    },
}

/// Column permutation followed by a sequence of row operations.
///
/// Column `j` of the transformed matrix is column `col_perm[j]` of the input.
/// Row operations commute with column permutations, so the order in which
/// the two parts are applied does not matter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transform {
    #[serde(rename = "rowOps")]
    pub row_ops: Vec<RowOp>,
    #[serde(rename = "colPerm")]
    pub col_perm: Vec<usize>,
}

impl Transform {
    pub fn identity(cols: usize) -> Self {
        Transform { row_ops: Vec::new(), col_perm: (0..cols).collect() }
    }

    pub fn with_perm(col_perm: Vec<usize>) -> Self {
        Transform { row_ops: Vec::new(), col_perm }
    }

    pub fn is_valid_for(&self, m: &RationalMatrix) -> bool {
        let mut seen = vec![false; m.cols()];
        if self.col_perm.len() != m.cols() {
            return false;
        }
        for &c in &self.col_perm {
            if c >= m.cols() || seen[c] {
                return false;
            }
            seen[c] = true;
        }
        self.row_ops.iter().all(|op| match op {
            RowOp::Swap { i, j } => *i < m.rows() && *j < m.rows(),
            RowOp::Scale { i, by } => *i < m.rows() && !by.is_zero(),
            RowOp::Add { from, to, .. } => *from < m.rows() && *to < m.rows() && from != to,
        })
    }

    pub fn apply(&self, m: &RationalMatrix) -> Result<RationalMatrix> {
        if !self.is_valid_for(m) {
            return Err(Error::ShapeMismatch("transform does not fit the matrix".into()));
        }
        let mut out = m.select_columns(&self.col_perm)?;
        for op in &self.row_ops {
            out.apply_row_op(op);
        }
        Ok(out)
    }

    /// `self` followed by `next`, where `next` acts on the output of `self`.
    pub fn then(&self, next: &Transform) -> Transform {
        let col_perm = next.col_perm.iter().map(|&j| self.col_perm[j]).collect();
        let mut row_ops = self.row_ops.clone();
        row_ops.extend(next.row_ops.iter().cloned());
        Transform { row_ops, col_perm }
    }

    /// Maps a vector in the coordinates of the input matrix to the
    /// coordinates of the transformed matrix.
    pub fn permute_vector<T: Clone>(&self, v: &[T]) -> Vec<T> {
        self.col_perm.iter().map(|&j| v[j].clone()).collect()
    }
}

/// Offsets every row index in `ops` by `by`.
pub(crate) fn shift_row_ops(ops: &[RowOp], by: usize) -> Vec<RowOp> {
    ops.iter()
        .map(|op| match op {
            RowOp::Swap { i, j } => RowOp::Swap { i: i + by, j: j + by },
            RowOp::Scale { i, by: f } => RowOp::Scale { i: i + by, by: f.clone() },
            RowOp::Add { from, to, factor } => RowOp::Add {
                from: from + by,
                to: to + by,
                factor: factor.clone(),
            },
        })
        .collect()
}

/// Result of Gauss-Jordan elimination.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: RationalMatrix,
    pub transform: Transform,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduced row echelon form with the transcript of row operations used.
/// Pivots are taken from the lowest available row, columns left to right.
pub fn rref(m: &RationalMatrix) -> Rref {
    let mut a = m.clone();
    let mut ops = Vec::new();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..a.cols() {
        if pr == a.rows() {
            break;
        }
        let Some(r) = (pr..a.rows()).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        if r != pr {
            let op = RowOp::Swap { i: r, j: pr };
            a.apply_row_op(&op);
            ops.push(op);
        }
        let p = a.get(pr, col).clone();
        if !p.is_one() {
            let op = RowOp::Scale { i: pr, by: p.recip() };
            a.apply_row_op(&op);
            ops.push(op);
        }
        for i in 0..a.rows() {
            if i != pr && !a.get(i, col).is_zero() {
                let op = RowOp::Add { from: pr, to: i, factor: -a.get(i, col).clone() };
                a.apply_row_op(&op);
                ops.push(op);
            }
        }
        pivots.push(col);
        pr += 1;
    }
    Rref {
        transform: Transform { row_ops: ops, col_perm: (0..m.cols()).collect() },
        matrix: a,
        pivots,
    }
}

pub fn rank(m: &RationalMatrix) -> usize {
    if m.is_empty() {
        return 0;
    }
    integer_rank(m.row_scaled_integers())
}

/// Rank of the submatrix on the given columns.
pub fn column_span_dim(m: &RationalMatrix, subset: &[usize]) -> Result<usize> {
    if let Some(&bad) = subset.iter().find(|&&c| c >= m.cols()) {
        return Err(Error::IndexOutOfRange { index: bad, cols: m.cols() });
    }
    Ok(rank(&m.select_columns(subset)?))
}

/// Fraction-free (Bareiss) rank of an integer matrix. Runs in `i128` and
/// falls back to big integers if an intermediate value overflows.
pub(crate) fn integer_rank(rows: Vec<Vec<BigInt>>) -> usize {
    use num_traits::ToPrimitive;
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|e| e.to_i128().filter(|v| v.abs() < 1 << 62)).collect())
        .collect();
    if let Some(small) = small {
        if let Some(r) = bareiss_rank_i128(small) {
            return r;
        }
    }
    bareiss_rank_big(rows)
}

fn bareiss_rank_i128(mut a: Vec<Vec<i128>>) -> Option<usize> {
    let n = a.len();
    let m = a.first().map_or(0, Vec::len);
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..m {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..n {
            for j in c + 1..m {
                let v = a[r][c]
                    .checked_mul(a[i][j])?
                    .checked_sub(a[i][c].checked_mul(a[r][j])?)?;
                a[i][j] = v / prev;
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        r += 1;
    }
    Some(r)
}

fn bareiss_rank_big(mut a: Vec<Vec<BigInt>>) -> usize {
    let n = a.len();
    let m = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..m {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..n {
            for j in c + 1..m {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// A basis of the right null space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelBasis {
    pub vectors: Vec<Vec<Rational>>,
    /// True when the first vector is the all-ones vector and every later
    /// vector has first coordinate zero.
    pub all_ones_first: bool,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Each vector scaled to a primitive integer vector whose first nonzero
    /// entry is positive. Supports and the all-ones normalisation survive.
    pub fn integral(&self) -> Vec<Vec<BigInt>> {
        self.vectors.iter().map(|v| primitive_integer_vector(v)).collect()
    }
}

pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, e| l.lcm(e.denom()));
    let mut out: Vec<BigInt> = v
        .iter()
        .map(|e| (e * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = out.iter().fold(BigInt::zero(), |g, e| g.gcd(e));
    if !g.is_zero() {
        let sign_neg = out.iter().find(|e| !e.is_zero()).is_some_and(|e| e.is_negative());
        let g = if sign_neg { -g } else { g };
        for e in &mut out {
            *e = &*e / &g;
        }
    }
    out
}

fn standard_kernel(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let r = rref(m);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !r.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in r.pivots.iter().enumerate() {
                v[p] = -r.matrix.get(row, f).clone();
            }
            v
        })
        .collect()
}

/// Kernel basis. When the columns of `m` sum to zero the basis is put in
/// the all-ones normal form (see [`kernel_basis_all_ones`]).
pub fn kernel_basis(m: &RationalMatrix) -> KernelBasis {
    if m.cols() > 0 && m.columns_sum_to_zero() {
        if let Ok(b) = kernel_basis_all_ones(m) {
            return b;
        }
    }
    KernelBasis { vectors: standard_kernel(m), all_ones_first: false }
}

/// Kernel basis whose first vector is `(1,...,1)` and whose remaining
/// vectors all have first coordinate zero.
pub fn kernel_basis_all_ones(m: &RationalMatrix) -> Result<KernelBasis> {
    if m.cols() == 0 || !m.columns_sum_to_zero() {
        return Err(Error::NormalizationUnavailable);
    }
    let cols = m.cols();
    let ones = vec![Rational::one(); cols];
    let mut chosen = vec![ones.clone()];
    let target = cols - rank(m);
    for v in standard_kernel(m) {
        if chosen.len() == target {
            break;
        }
        let shift = v[0].clone();
        let w: Vec<Rational> = v.iter().zip(&ones).map(|(a, o)| a - &shift * o).collect();
        let mut candidate = chosen.clone();
        candidate.push(w.clone());
        let as_matrix = RationalMatrix::from_rational_rows(candidate, cols)?;
        if rank(&as_matrix) == chosen.len() + 1 {
            chosen.push(w);
        }
    }
    if chosen.len() != target {
        return Err(Error::Invariant("all-ones kernel basis has the wrong dimension".into()));
    }
    Ok(KernelBasis { vectors: chosen, all_ones_first: true })
}

/// Incrementally maintained echelon basis for span-membership tests.
#[derive(Debug, Clone, Default)]
pub(crate) struct SpanBasis {
    /// (pivot index, vector normalised so the pivot entry is 1)
    rows: Vec<(usize, Vec<Rational>)>,
}

impl SpanBasis {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if !w[*p].is_zero() {
                let f = w[*p].clone();
                for (a, b) in w.iter_mut().zip(row) {
                    *a -= &f * b;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        let w: Vec<Rational> = w.iter().map(|e| e * &inv).collect();
        for (_, row) in &mut self.rows {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (a, b) in row.iter_mut().zip(&w) {
                    *a -= &f * b;
                }
            }
        }
        self.rows.push((p, w));
        true
    }
}

/// Solves `sum_j coeffs[j] * columns[j] = target` with free coefficients set
/// to zero. Returns `None` when the target is outside the span.
pub fn solve_in_span(columns: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let rows = target.len();
    let k = columns.len();
    let mut aug = RationalMatrix::zeros(rows, k + 1);
    for (j, c) in columns.iter().enumerate() {
        for i in 0..rows {
            aug.set(i, j, c[i].clone());
        }
    }
    for i in 0..rows {
        aug.set(i, k, target[i].clone());
    }
    let r = rref(&aug);
    if r.pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (row, &p) in r.pivots.iter().enumerate() {
        x[p] = r.matrix.get(row, k).clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fermat() -> RationalMatrix {
        RationalMatrix::from_rows(&[[1, -2, 1, 0], [1, -1, 0, 1]])
    }

    #[test]
    fn rref_of_proportional_rows() {
        let m = RationalMatrix::from_rows(&[[2, 4], [1, 2]]);
        let r = rref(&m);
        assert_eq!(r.matrix, RationalMatrix::from_rows(&[[1, 2], [0, 0]]));
        assert_eq!(r.rank(), 1);
        assert_eq!(r.transform.apply(&m).unwrap(), r.matrix);
    }

    #[test]
    fn rref_of_identity_has_no_ops() {
        let id = RationalMatrix::identity(3);
        let r = rref(&id);
        assert_eq!(r.matrix, id);
        assert!(r.transform.row_ops.is_empty());
    }

    #[test]
    fn fermat_rank() {
        assert_eq!(rank(&fermat()), 2);
        assert_eq!(rref(&fermat()).rank(), 2);
    }

    #[test]
    fn rank_edge_cases() {
        assert_eq!(rank(&RationalMatrix::zeros(2, 3)), 0);
        assert_eq!(rank(&RationalMatrix::zeros(0, 4)), 0);
        assert_eq!(rank(&RationalMatrix::zeros(3, 0)), 0);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&RationalMatrix::from_rows(&[[1, -1]]));
        assert_eq!(k.vectors, vec![vec![int(1), int(1)]]);
        assert!(k.all_ones_first);

        let m = RationalMatrix::from_rows(&[[1, 1, -2]]);
        let k = kernel_basis(&m);
        assert_eq!(k.vectors, vec![vec![int(1), int(1), int(1)], vec![int(0), int(2), int(1)]]);
        for v in &k.vectors {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }

        assert_eq!(kernel_basis(&RationalMatrix::identity(2)).dim(), 0);
    }

    #[test]
    fn all_ones_requires_zero_column_sums() {
        let m = RationalMatrix::from_rows(&[[1, 2, 3]]);
        assert!(matches!(kernel_basis_all_ones(&m), Err(Error::NormalizationUnavailable)));
        assert!(!kernel_basis(&m).all_ones_first);
    }

    #[test]
    fn span_dims() {
        let m = fermat();
        assert_eq!(column_span_dim(&m, &[]).unwrap(), 0);
        assert_eq!(column_span_dim(&m, &[0, 1]).unwrap(), 2);
        let dup = RationalMatrix::from_rows(&[[1, 0, 1, 0], [0, 1, 0, 1]]);
        assert_eq!(column_span_dim(&dup, &[0, 2]).unwrap(), 1);
        assert!(matches!(column_span_dim(&m, &[4]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn json_round_trip_and_bare_integers() {
        let text = r#"{"rows":1,"cols":3,"entries":["1",["-1","2"],"3/4"]}"#;
        let m: RationalMatrix = serde_json::from_str(text).unwrap();
        assert_eq!(m.get(0, 1), &ratio(-1, 2));
        assert_eq!(m.get(0, 2), &ratio(3, 4));
        let back: RationalMatrix = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<RationalMatrix>(r#"{"rows":1,"cols":2,"entries":["1"]}"#).is_err());
    }

    #[test]
    fn span_basis_membership() {
        let mut b = SpanBasis::default();
        assert!(b.insert(&[int(1), int(1), int(0)]));
        assert!(!b.insert(&[int(2), int(2), int(0)]));
        assert!(b.contains(&[int(-3), int(-3), int(0)]));
        assert!(!b.contains(&[int(0), int(0), int(1)]));
    }

    #[test]
    fn solve_in_span_reproduces_target() {
        let cols = vec![vec![int(1), int(1)], vec![int(-2), int(-1)]];
        let target = vec![int(0), int(1)];
        let x = solve_in_span(&cols, &target).unwrap();
        let combo: Vec<Rational> =
            (0..2).map(|i| &x[0] * &cols[0][i] + &x[1] * &cols[1][i]).collect();
        assert_eq!(combo, target);
        assert!(solve_in_span(&[vec![int(1), int(0)]], &[int(0), int(1)]).is_none());
    }
}
