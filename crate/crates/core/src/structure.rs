//! Columns condition certificates, the `(A B; 0 C)` normal form, the
//! quasi-partitionable block decomposition and the integrality
//! preprocessing applied to split systems `A x^k = B y^k, C y^k = 0`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, primitive_integer_vector, rational_serde, rref, shift_row_ops, Rational, RationalMatrix,
    RowOp, SpanBasis, Transform,
};
use crate::matroid::{self, ColumnMatroid};

/// Largest column count for the exhaustive columns-condition search.
pub const COLUMNS_CONDITION_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTerm {
    pub column: usize,
    #[serde(with = "rational_serde")]
    pub coefficient: Rational,
}

/// Expresses the column sum of `blocks[block]` as a combination of columns
/// from earlier blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub block: usize,
    pub terms: Vec<WitnessTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnsCertificate {
    pub blocks: Vec<Vec<usize>>,
    pub witnesses: Vec<Witness>,
}

impl ColumnsCertificate {
    /// Independent check of the certificate against `m`.
    pub fn validate(&self, m: &RationalMatrix) -> bool {
        let mut seen = vec![false; m.cols()];
        for b in &self.blocks {
            if b.is_empty() {
                return false;
            }
            for &c in b {
                if c >= m.cols() || seen[c] {
                    return false;
                }
                seen[c] = true;
            }
        }
        if !seen.iter().all(|&x| x) || self.blocks.is_empty() {
            return false;
        }
        if !m.column_sum(self.blocks[0].iter().copied()).iter().all(Zero::is_zero) {
            return false;
        }
        if self.witnesses.len() != self.blocks.len() - 1 {
            return false;
        }
        for (t, w) in self.witnesses.iter().enumerate() {
            let t = t + 1;
            if w.block != t {
                return false;
            }
            let earlier: HashSet<usize> = self.blocks[..t].iter().flatten().copied().collect();
            let mut combo = vec![Rational::zero(); m.rows()];
            for term in &w.terms {
                if !earlier.contains(&term.column) {
                    return false;
                }
                for (i, acc) in combo.iter_mut().enumerate() {
                    *acc += &term.coefficient * m.get(i, term.column);
                }
            }
            if combo != m.column_sum(self.blocks[t].iter().copied()) {
                return false;
            }
        }
        true
    }
}

/// Lexicographically least nonempty subset of `pool` whose column sum lies
/// in `span`, found by a preorder walk of the subset tree.
fn least_valid_block(m: &RationalMatrix, pool: &[usize], span: &SpanBasis) -> Option<Vec<usize>> {
    fn walk(
        m: &RationalMatrix,
        pool: &[usize],
        span: &SpanBasis,
        start: usize,
        chosen: &mut Vec<usize>,
        sum: &mut Vec<Rational>,
    ) -> bool {
        for p in start..pool.len() {
            let c = pool[p];
            chosen.push(c);
            for (i, s) in sum.iter_mut().enumerate() {
                *s += m.get(i, c);
            }
            if span.contains(sum) || walk(m, pool, span, p + 1, chosen, sum) {
                return true;
            }
            for (i, s) in sum.iter_mut().enumerate() {
                *s -= m.get(i, c);
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    let mut sum = vec![Rational::zero(); m.rows()];
    walk(m, pool, span, 0, &mut chosen, &mut sum).then_some(chosen)
}

/// Decides the columns condition and returns the lexicographically least
/// certificate.
///
/// Adding a valid block never destroys the existence of a completion (a
/// completion from the smaller span restricts to one from the larger), so
/// taking the least valid block at every step is both complete and yields
/// the least ordered partition.
pub fn check_columns_condition(m: &RationalMatrix) -> Result<Option<ColumnsCertificate>> {
    if m.cols() == 0 {
        return Err(Error::InvalidArgument("the columns condition needs at least one column".into()));
    }
    if m.cols() > COLUMNS_CONDITION_CAP {
        return Err(Error::SizeLimitExceeded {
            what: "column count",
            actual: m.cols() as u128,
            limit: COLUMNS_CONDITION_CAP as u128,
        });
    }
    let mut remaining: Vec<usize> = (0..m.cols()).collect();
    let mut span = SpanBasis::default();
    let mut used: Vec<usize> = Vec::new();
    let mut blocks = Vec::new();
    let mut witnesses = Vec::new();
    while !remaining.is_empty() {
        let Some(block) = least_valid_block(m, &remaining, &span) else {
            return Ok(None);
        };
        if !blocks.is_empty() {
            let cols: Vec<Vec<Rational>> = used.iter().map(|&c| m.column(c)).collect();
            let target = m.column_sum(block.iter().copied());
            let coeffs = linalg::solve_in_span(&cols, &target)
                .ok_or_else(|| Error::Invariant("block sum left the span".into()))?;
            witnesses.push(Witness {
                block: blocks.len(),
                terms: used
                    .iter()
                    .zip(coeffs)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(&column, coefficient)| WitnessTerm { column, coefficient })
                    .collect(),
            });
        }
        for &c in &block {
            span.insert(&m.column(c));
            used.push(c);
        }
        remaining.retain(|c| !block.contains(c));
        blocks.push(block);
    }
    let cert = ColumnsCertificate { blocks, witnesses };
    if !cert.validate(m) {
        return Err(Error::Invariant("columns certificate failed validation".into()));
    }
    Ok(Some(cert))
}

fn has_zero_sum_subset(values: &[BigInt]) -> bool {
    let mut sums: HashSet<BigInt> = HashSet::new();
    for v in values {
        if v.is_zero() {
            return true;
        }
        let mut next: Vec<BigInt> = sums.iter().map(|s| s + v).collect();
        next.push(v.clone());
        if next.iter().any(Zero::is_zero) {
            return true;
        }
        sums.extend(next);
    }
    false
}

/// Samples random row-space vectors looking for one whose nonzero entries
/// have no zero-sum subcollection. Such a vector proves the columns
/// condition fails; finding none proves nothing.
pub fn falsify_columns_condition(m: &RationalMatrix, samples: usize, seed: u64) -> Option<Vec<BigInt>> {
    if m.rows() == 0 || m.cols() == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let lambda: Vec<i64> = (0..m.rows()).map(|_| rng.gen_range(-6..=6)).collect();
        let v: Vec<Rational> = (0..m.cols())
            .map(|j| {
                lambda
                    .iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (i, &l)| acc + m.get(i, j) * linalg::int(l))
            })
            .collect();
        if v.iter().all(Zero::is_zero) {
            continue;
        }
        let w = primitive_integer_vector(&v);
        let nonzero: Vec<BigInt> = w.iter().filter(|e| !e.is_zero()).cloned().collect();
        if !has_zero_sum_subset(&nonzero) {
            return Some(w);
        }
    }
    None
}

/// Row scalings that make every row of `m` a primitive integer vector.
fn integralise_rows(m: &mut RationalMatrix) -> Vec<RowOp> {
    let mut ops = Vec::new();
    for i in 0..m.rows() {
        let row = m.row(i).to_vec();
        let Some(j) = row.iter().position(|e| !e.is_zero()) else {
            continue;
        };
        let prim = primitive_integer_vector(&row);
        let factor = Rational::from_integer(prim[j].clone()) / &row[j];
        if !factor.is_one() {
            let op = RowOp::Scale { i, by: factor };
            m.apply_row_op(&op);
            ops.push(op);
        }
    }
    ops
}

/// The block form `(A B; 0 C)` with `A` of full row rank and zero column sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    pub transform: Transform,
    pub n: usize,
    pub s: usize,
    pub m: usize,
    pub t: usize,
    pub a: RationalMatrix,
    pub b: RationalMatrix,
    pub c: RationalMatrix,
    /// Columns condition certificate for `C` when `m, t > 0`.
    #[serde(rename = "cCertificate")]
    pub c_certificate: Option<ColumnsCertificate>,
}

impl NormalForm {
    pub fn assembled(&self) -> RationalMatrix {
        assemble_blocks(&self.a, &self.b, &self.c)
    }

    /// Replays the transcript on `input` and compares with the claimed blocks.
    pub fn replays(&self, input: &RationalMatrix) -> bool {
        self.transform.apply(input).is_ok_and(|out| out == self.assembled())
    }
}

/// `(A B; 0 C)`.
pub fn assemble_blocks(a: &RationalMatrix, b: &RationalMatrix, c: &RationalMatrix) -> RationalMatrix {
    let (n, s, m, t) = (a.rows(), a.cols(), c.rows(), b.cols());
    let mut out = RationalMatrix::zeros(n + m, s + t);
    for i in 0..n {
        for j in 0..s {
            out.set(i, j, a.get(i, j).clone());
        }
        for j in 0..t {
            out.set(i, s + j, b.get(i, j).clone());
        }
    }
    for i in 0..m {
        for j in 0..t {
            out.set(n + i, s + j, c.get(i, j).clone());
        }
    }
    out
}

fn require_full_row_rank(m: &RationalMatrix) -> Result<()> {
    let r = linalg::rank(m);
    if r != m.rows() {
        return Err(Error::NotFullRowRank { rank: r, rows: m.rows() });
    }
    Ok(())
}

/// Moves the first block of the canonical columns certificate to the front
/// and clears the rows below it.
pub fn to_normal_form(m: &RationalMatrix) -> Result<NormalForm> {
    require_full_row_rank(m)?;
    let cert = check_columns_condition(m)?.ok_or(Error::ColumnsConditionFails)?;
    let lead = &cert.blocks[0];
    let s = lead.len();
    let mut perm = lead.clone();
    perm.extend((0..m.cols()).filter(|c| !lead.contains(c)));
    let mut work = m.select_columns(&perm)?;
    let r = rref(&work.block(0, work.rows(), 0, s));
    for op in &r.transform.row_ops {
        work.apply_row_op(op);
    }
    let mut row_ops = r.transform.row_ops.clone();
    row_ops.extend(integralise_rows(&mut work));
    let n = r.rank();
    let (rows, cols) = (work.rows(), work.cols());
    let a = work.block(0, n, 0, s);
    let b = work.block(0, n, s, cols);
    let c = work.block(n, rows, s, cols);
    let (mm, t) = (rows - n, cols - s);
    let c_certificate = if mm > 0 && t > 0 {
        Some(check_columns_condition(&c)?.ok_or_else(|| {
            Error::Invariant("lower block of the normal form violates the columns condition".into())
        })?)
    } else {
        None
    };
    let nf = NormalForm {
        transform: Transform { row_ops, col_perm: perm },
        n,
        s,
        m: mm,
        t,
        a,
        b,
        c,
        c_certificate,
    };
    if !nf.replays(m) || linalg::rank(&nf.a) != n || !nf.a.columns_sum_to_zero() {
        return Err(Error::Invariant("normal form failed its own checks".into()));
    }
    Ok(nf)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub transform: Transform,
    pub q: usize,
    /// `(n_i, s_i)` for each diagonal block.
    pub shapes: Vec<(usize, usize)>,
    pub diagonal: Vec<RationalMatrix>,
    pub transformed: RationalMatrix,
}

impl DecompositionResult {
    /// Replays the transcript and checks the block upper triangular shape
    /// with the recorded diagonal.
    pub fn replays(&self, input: &RationalMatrix) -> bool {
        let Ok(out) = self.transform.apply(input) else {
            return false;
        };
        if out != self.transformed {
            return false;
        }
        let (mut r0, mut c0) = (0, 0);
        for ((ni, si), block) in self.shapes.iter().zip(&self.diagonal) {
            if out.block(r0, r0 + ni, c0, c0 + si) != *block {
                return false;
            }
            // everything below the diagonal block must vanish
            for i in r0 + ni..out.rows() {
                for j in c0..c0 + si {
                    if !out.get(i, j).is_zero() {
                        return false;
                    }
                }
            }
            r0 += ni;
            c0 += si;
        }
        r0 == out.rows() && c0 == out.cols()
    }
}

fn decompose_rec(m: &RationalMatrix, q: usize) -> Result<(Transform, Vec<(usize, usize)>)> {
    let (n, s) = (m.rows(), m.cols());
    if matroid::is_quasi_partitionable(m, q)?.holds {
        return Ok((Transform::identity(s), vec![(n, s)]));
    }
    let cm = ColumnMatroid::new(m);
    let d0 = (1..n)
        .find(|&d| cm.mu(d) > d * q)
        .ok_or_else(|| Error::Invariant("no splitting dimension although not quasi-partitionable".into()))?;
    let flat = cm.max_flat(d0);
    let s0 = flat.len();
    let mut perm = flat.clone();
    perm.extend((0..s).filter(|c| !flat.contains(c)));
    let mut work = m.select_columns(&perm)?;
    let r = rref(&work.block(0, n, 0, s0));
    for op in &r.transform.row_ops {
        work.apply_row_op(op);
    }
    let head = Transform { row_ops: r.transform.row_ops.clone(), col_perm: perm };
    let rest = work.block(d0, n, s0, s);
    let (sub, mut shapes) = decompose_rec(&rest, q)?;
    let mut lifted_perm: Vec<usize> = (0..s0).collect();
    lifted_perm.extend(sub.col_perm.iter().map(|&j| s0 + j));
    let lifted = Transform { row_ops: shift_row_ops(&sub.row_ops, d0), col_perm: lifted_perm };
    shapes.insert(0, (d0, s0));
    Ok((head.then(&lifted), shapes))
}

/// Splits `m` into a block upper triangular matrix whose diagonal blocks
/// are quasi-`q`-partitionable with `s_i > n_i q`.
pub fn decompose_quasi(m: &RationalMatrix, q: usize) -> Result<DecompositionResult> {
    require_full_row_rank(m)?;
    if let Some(j) = (0..m.cols()).find(|&j| m.is_zero_column(j)) {
        return Err(Error::InvalidArgument(format!("column {j} is zero")));
    }
    let qp = matroid::q_profile(m)?;
    if let Some((d, &qd)) = qp.values.iter().enumerate().skip(1).find(|&(d, &qd)| qd <= d * q) {
        return Err(Error::HypothesisFails { d, q_d: qd });
    }
    let (mut transform, shapes) = decompose_rec(m, q)?;
    let mut transformed = transform.apply(m)?;
    transform.row_ops.extend(integralise_rows(&mut transformed));
    let mut diagonal = Vec::with_capacity(shapes.len());
    let (mut r0, mut c0) = (0, 0);
    for &(ni, si) in &shapes {
        diagonal.push(transformed.block(r0, r0 + ni, c0, c0 + si));
        r0 += ni;
        c0 += si;
    }
    let result = DecompositionResult { transform, q, shapes, diagonal, transformed };
    if !result.replays(m) {
        return Err(Error::Invariant("decomposition transcript does not replay".into()));
    }
    for (block, &(ni, si)) in result.diagonal.iter().zip(&result.shapes) {
        if si <= ni * q || !matroid::is_quasi_partitionable(block, q)?.holds {
            return Err(Error::Invariant("diagonal block is not quasi-partitionable".into()));
        }
    }
    Ok(result)
}

/// For each row, a column whose only nonzero entry sits in that row.
/// These columns form a nonsingular diagonal submatrix.
pub fn diagonal_columns(a: &RationalMatrix) -> Option<Vec<usize>> {
    (0..a.rows())
        .map(|i| {
            (0..a.cols()).find(|&j| {
                !a.get(i, j).is_zero() && (0..a.rows()).all(|r| r == i || a.get(r, j).is_zero())
            })
        })
        .collect()
}

pub fn rows_coprime(a: &RationalMatrix) -> bool {
    a.is_integral()
        && (0..a.rows()).all(|i| {
            a.row(i).iter().fold(BigInt::zero(), |g, e| g.gcd(e.numer())).is_one()
        })
}

/// Every entry of `b` is divisible by every nonzero entry of `a`.
pub fn b_divisible_by_a(a: &RationalMatrix, b: &RationalMatrix) -> bool {
    if !a.is_integral() || !b.is_integral() {
        return false;
    }
    let l = a
        .entries()
        .iter()
        .filter(|e| !e.is_zero())
        .fold(BigInt::one(), |l, e| l.lcm(e.numer()));
    b.entries().iter().all(|e| e.numer().is_multiple_of(&l))
}

/// Integral split system satisfying the diagonal, coprime-row and
/// divisibility conditions, with the rescaling back to the input system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessedSystem {
    pub a: RationalMatrix,
    pub b: RationalMatrix,
    pub c: RationalMatrix,
    /// `|product of the nonzero entries of A|`
    #[serde(rename = "K", with = "bigint_string")]
    pub k_const: BigInt,
    pub degree: u32,
    /// Row operations applied to the top block `[A | B]`.
    #[serde(rename = "rowOps")]
    pub row_ops: Vec<RowOp>,
    /// `K^(k^2)`, the factor applied to the columns of `B` and `C`.
    #[serde(rename = "columnScale", with = "bigint_string")]
    pub column_scale: BigInt,
    /// `K^k`: a solution `(x, y)` of the output maps to `(x, K^k y)`.
    #[serde(rename = "yRescale", with = "bigint_string")]
    pub y_rescale: BigInt,
    #[serde(rename = "diagonalColumns")]
    pub diagonal_columns: Vec<usize>,
}

pub mod bigint_string {
    use num_bigint::BigInt;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl PreprocessedSystem {
    pub fn combined(&self) -> RationalMatrix {
        assemble_blocks(&self.a, &self.b, &self.c)
    }

    /// Maps a solution of the preprocessed system to one of the input.
    pub fn lift_solution(&self, x: &[BigInt], y: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
        (x.to_vec(), y.iter().map(|v| v * &self.y_rescale).collect())
    }

    pub fn conditions_hold(&self) -> bool {
        diagonal_columns(&self.a).is_some() && rows_coprime(&self.a) && b_divisible_by_a(&self.a, &self.b)
    }
}

/// Rescales `(A, B, C)` so that `A` has a nonsingular diagonal submatrix,
/// coprime rows, and divides every entry of `B`.
///
/// Row operations are only used when `A` lacks a diagonal submatrix. Then
/// `K = |prod of nonzero entries of A|`, the columns of `B` and `C` are
/// multiplied by `K^(k^2)`, and each top row is divided by the gcd of its
/// `A` part.
pub fn preprocess_system(
    a: &RationalMatrix,
    b: &RationalMatrix,
    c: &RationalMatrix,
    k: u32,
) -> Result<PreprocessedSystem> {
    if b.rows() != a.rows() || c.cols() != b.cols() {
        return Err(Error::ShapeMismatch(format!(
            "A is {}x{}, B is {}x{}, C is {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    for (name, mat) in [("A", a), ("B", b), ("C", c)] {
        if !mat.is_integral() {
            return Err(Error::NotInteger(format!("{name} has non-integral entries")));
        }
    }
    let r = linalg::rank(a);
    if r != a.rows() || a.rows() == 0 {
        return Err(Error::RankDeficient { rank: r, rows: a.rows() });
    }
    if !a.columns_sum_to_zero() {
        return Err(Error::InvalidArgument("columns of A must sum to zero".into()));
    }
    let (n, s) = (a.rows(), a.cols());
    let mut top = assemble_blocks(a, b, &RationalMatrix::zeros(0, b.cols()));
    let mut row_ops = Vec::new();
    if diagonal_columns(a).is_none() {
        let red = rref(a);
        for op in &red.transform.row_ops {
            top.apply_row_op(op);
        }
        row_ops.extend(red.transform.row_ops);
        for i in 0..n {
            let l = top.row(i).iter().fold(BigInt::one(), |l, e| l.lcm(e.denom()));
            if !l.is_one() {
                let op = RowOp::Scale { i, by: Rational::from_integer(l) };
                top.apply_row_op(&op);
                row_ops.push(op);
            }
        }
    }
    let a1 = top.block(0, n, 0, s);
    let k_const = a1
        .entries()
        .iter()
        .filter(|e| !e.is_zero())
        .fold(BigInt::one(), |p, e| p * e.numer())
        .abs();
    let column_scale = num_traits::pow(k_const.clone(), (k * k) as usize);
    let y_rescale = num_traits::pow(k_const.clone(), k as usize);
    let scale = Rational::from_integer(column_scale.clone());
    for i in 0..n {
        for j in s..top.cols() {
            let v = top.get(i, j) * &scale;
            top.set(i, j, v);
        }
    }
    let mut c_out = c.clone();
    for i in 0..c.rows() {
        for j in 0..c.cols() {
            let v = c.get(i, j) * &scale;
            c_out.set(i, j, v);
        }
    }
    for i in 0..n {
        let g = top.row(i)[..s].iter().fold(BigInt::zero(), |g, e| g.gcd(e.numer()));
        if !g.is_one() {
            let op = RowOp::Scale { i, by: Rational::new(BigInt::one(), g) };
            top.apply_row_op(&op);
            row_ops.push(op);
        }
    }
    let a_out = top.block(0, n, 0, s);
    let b_out = top.block(0, n, s, top.cols());
    let diag = diagonal_columns(&a_out)
        .ok_or_else(|| Error::Invariant("preprocessed A lost its diagonal submatrix".into()))?;
    let out = PreprocessedSystem {
        a: a_out,
        b: b_out,
        c: c_out,
        k_const,
        degree: k,
        row_ops,
        column_scale,
        y_rescale,
        diagonal_columns: diag,
    };
    if !out.conditions_hold() || !out.b.is_integral() || !out.c.is_integral() {
        return Err(Error::Invariant("preprocessing conditions failed on output".into()));
    }
    Ok(out)
}
