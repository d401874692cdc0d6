//! The auxiliary operator
//! `Psi_{B,y}(f_1, ..., f_s) = sum_x sum_{d in B^q} prod_j f_j(x + Q_j(d, y))`
//! with `Q_j(d, y) = sum_i u_{i,j} d_i + P_j(y)`, where `u^(1..q)` complete
//! the all-ones vector to an integral kernel basis of `A` and `P` puts
//! `(B y^k)_i / A[i][c_i]` on the diagonal column `c_i` of row `i`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis_all_ones, Rational, RationalMatrix};
use crate::structure::diagonal_columns;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxOperatorSpec {
    #[serde(rename = "A")]
    pub a: RationalMatrix,
    #[serde(rename = "B")]
    pub b: RationalMatrix,
    pub k: u32,
    #[serde(rename = "bSet")]
    pub b_set: Vec<i64>,
    pub y: Vec<i64>,
}

/// Finitely supported weight on the integers.
pub type Weight = HashMap<i64, Rational>;

pub fn indicator(set: impl IntoIterator<Item = i64>) -> Weight {
    set.into_iter().map(|x| (x, Rational::from_integer(1.into()))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxOperator {
    pub spec: AuxOperatorSpec,
    /// `u^(1), ..., u^(q)`, each with first coordinate 0.
    pub kernel: Vec<Vec<i64>>,
    pub shifts: Vec<i64>,
    #[serde(rename = "diagonalColumns")]
    pub diagonal_columns: Vec<usize>,
}

fn to_i64(v: &BigInt, what: &str) -> Result<i64> {
    v.to_i64().ok_or_else(|| Error::InvalidArgument(format!("{what} exceeds 64 bits")))
}

impl AuxOperator {
    pub fn new(spec: AuxOperatorSpec) -> Result<Self> {
        let (a, b) = (&spec.a, &spec.b);
        if b.rows() != a.rows() || spec.y.len() != b.cols() {
            return Err(Error::ShapeMismatch("A, B and y are incompatible".into()));
        }
        if !a.is_integral() || !b.is_integral() {
            return Err(Error::NotInteger("A and B".into()));
        }
        if spec.k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let diag = diagonal_columns(a)
            .ok_or_else(|| Error::PreprocessingMissing("A has no diagonal submatrix".into()))?;
        let basis = kernel_basis_all_ones(a)?;
        let kernel: Vec<Vec<i64>> = basis
            .integral()
            .iter()
            .skip(1)
            .map(|v| v.iter().map(|e| to_i64(e, "kernel entry")).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        if kernel.iter().any(|v| v[0] != 0) {
            return Err(Error::Invariant("kernel vectors must vanish in the first coordinate".into()));
        }
        let mut shifts = vec![0i64; a.cols()];
        for (i, &c) in diag.iter().enumerate() {
            let by: BigInt = (0..b.cols())
                .map(|j| b.get(i, j).numer() * num_traits::pow(BigInt::from(spec.y[j]), spec.k as usize))
                .sum();
            let aic = a.get(i, c).numer().clone();
            if !by.is_multiple_of(&aic) {
                return Err(Error::PreprocessingMissing(format!(
                    "(B y^k)_{i} = {by} is not divisible by A[{i}][{c}] = {aic}"
                )));
            }
            shifts[c] = to_i64(&(by / aic), "shift")?;
        }
        Ok(AuxOperator { spec, kernel, shifts, diagonal_columns: diag })
    }

    pub fn q(&self) -> usize {
        self.kernel.len()
    }

    pub fn s(&self) -> usize {
        self.spec.a.cols()
    }

    /// Offsets `Q_j(d, y)` for every `d in B^q`.
    pub fn offset_rows(&self) -> Vec<Vec<i64>> {
        let q = self.q();
        let mut out = Vec::new();
        let mut d = vec![0usize; q];
        if q > 0 && self.spec.b_set.is_empty() {
            return out;
        }
        loop {
            let row: Vec<i64> = (0..self.s())
                .map(|j| self.shifts[j] + (0..q).map(|i| self.kernel[i][j] * self.spec.b_set[d[i]]).sum::<i64>())
                .collect();
            out.push(row);
            let mut i = 0;
            loop {
                if i == q {
                    return out;
                }
                d[i] += 1;
                if d[i] < self.spec.b_set.len() {
                    break;
                }
                d[i] = 0;
                i += 1;
            }
        }
    }

    /// Exact value of `Psi` on the weights `f_1, ..., f_s`.
    pub fn psi(&self, f: &[Weight]) -> Result<Rational> {
        if f.len() != self.s() {
            return Err(Error::ShapeMismatch(format!("{} weights for {} variables", f.len(), self.s())));
        }
        let mut total = Rational::zero();
        for row in self.offset_rows() {
            for (z, w0) in &f[0] {
                let x = z - row[0];
                let mut prod = w0.clone();
                for (j, fj) in f.iter().enumerate().skip(1) {
                    match fj.get(&(x + row[j])) {
                        Some(v) if !v.is_zero() => prod *= v,
                        _ => {
                            prod = Rational::zero();
                            break;
                        }
                    }
                }
                total += prod;
            }
        }
        Ok(total)
    }

    /// Every `x + Q(d, y)` with all coordinates in the matching supports.
    pub fn points(&self, f: &[Weight]) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for row in self.offset_rows() {
            for z in f[0].keys() {
                let x = z - row[0];
                let pt: Vec<i64> = row.iter().map(|r| x + r).collect();
                if pt.iter().zip(f).all(|(v, fj)| fj.contains_key(v)) {
                    out.push(pt);
                }
            }
        }
        out.sort();
        out
    }
}

/// Squared sides of the explicit von Neumann bound
/// `|Psi(f) - Psi(g)| <= s |B|^q N^(1/2) ||f - g||_2` for `f = (f, ..., f)`
/// and `g = (g, ..., g)` supported on `[N]`.
pub fn von_neumann_sides(op: &AuxOperator, f: &Weight, g: &Weight, n: u64) -> Result<(Rational, Rational)> {
    let s = op.s();
    let lhs = op.psi(&vec![f.clone(); s])? - op.psi(&vec![g.clone(); s])?;
    let l2: Rational = (1..=n as i64)
        .map(|x| {
            let d = f.get(&x).cloned().unwrap_or_default() - g.get(&x).cloned().unwrap_or_default();
            &d * &d
        })
        .sum();
    let b = BigInt::from(op.spec.b_set.len());
    let factor = BigInt::from(s * s) * num_traits::pow(b, 2 * op.q()) * BigInt::from(n);
    Ok((&lhs * &lhs, Rational::from_integer(factor) * l2))
}
