//! New simple roots from reflecting in `α_k`: `α_k ↦ -α_k` and, for `j ≠ k`,
//! `α_j ↦ α_j + B_kj·α_k`.
//!
//! Only the new tuple of simple roots is produced. The Cartan matrix of the
//! reflected system is not derived here, so reflections cannot be chained.

use std::fmt;

use crate::cartan::{b_closed, BValue, CartanDatum};
use crate::error::Error;
use crate::Result;

/// Integer coordinates in the basis `α_1, …, α_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn simple(n: usize, i: usize) -> Self {
        let mut coords = vec![0; n];
        coords[i] = 1;
        RootVector(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionResult {
    pub k: usize,
    /// `B_kj` for each `j`; `None` at `j = k`.
    pub b_row: Vec<Option<u64>>,
    /// The new simple roots `σ_1, …, σ_n`.
    pub sigma: Vec<RootVector>,
    /// Column `j` is `σ_j`.
    pub basis_matrix: Vec<Vec<i64>>,
}

pub fn reflect(datum: &CartanDatum, k: usize) -> Result<ReflectionResult> {
    let n = datum.rank();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    let mut b_row = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    for j in 0..n {
        if j == k {
            b_row.push(None);
            sigma.push(RootVector(
                (0..n).map(|i| if i == k { -1 } else { 0 }).collect(),
            ));
            continue;
        }
        let b = match b_closed(datum, k, j)? {
            BValue::Finite(b) => b,
            BValue::Infinite => return Err(Error::InfiniteB { k, j }),
        };
        let shift = i64::try_from(b).map_err(|_| Error::Overflow)?;
        let mut root = RootVector::simple(n, j);
        root.0[k] = shift;
        b_row.push(Some(b));
        sigma.push(root);
    }
    let basis_matrix = (0..n)
        .map(|row| sigma.iter().map(|s| s.0[row]).collect())
        .collect();
    Ok(ReflectionResult {
        k,
        b_row,
        sigma,
        basis_matrix,
    })
}

/// True iff the basis matrix is square with determinant `-1`.
pub fn unimodularity_check(result: &ReflectionResult) -> bool {
    let m = &result.basis_matrix;
    m.iter().all(|row| row.len() == m.len()) && determinant(m) == Some(-1)
}

/// Exact determinant by fraction-free (Bareiss) elimination. `None` for a
/// non-square matrix or on `i128` overflow.
pub fn determinant(matrix: &[Vec<i64>]) -> Option<i128> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return None;
    }
    if n == 0 {
        return Some(1);
    }
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for c in 0..n - 1 {
        if a[c][c] == 0 {
            let Some(pivot) = (c + 1..n).find(|&r| a[r][c] != 0) else {
                return Some(0);
            };
            a.swap(c, pivot);
            sign = -sign;
        }
        for r in c + 1..n {
            for col in c + 1..n {
                let v = a[r][col]
                    .checked_mul(a[c][c])?
                    .checked_sub(a[r][c].checked_mul(a[c][col])?)?;
                a[r][col] = v / prev;
            }
            a[r][c] = 0;
        }
        prev = a[c][c];
    }
    Some(sign * a[n - 1][n - 1])
}
