//! Cartan data `(A, I)` and the root-string bound `B_kj`.

use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::error::Error;
use crate::field::{lift, non_negative_integer, FieldElement, FieldSpec};
use crate::Result;

/// Default scan length for the recursion in characteristic 0.
pub const DEFAULT_RATIONAL_SCAN: u64 = 1000;

/// Parity of a Chevalley generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub const ALL: [Parity; 2] = [Parity::Even, Parity::Odd];

    /// `(-1)^parity`.
    pub fn sign(self) -> i128 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    /// Short token used by the file formats.
    pub fn token(self) -> &'static str {
        match self {
            Parity::Even => "ev",
            Parity::Odd => "od",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "ev" => Some(Parity::Even),
            "od" => Some(Parity::Odd),
            _ => None,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// An element of `ℤ_{>=0} ∪ {+∞}`. Infinity only arises in characteristic 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BValue {
    Finite(u64),
    Infinite,
}

impl BValue {
    pub fn finite(self) -> Option<u64> {
        match self {
            BValue::Finite(m) => Some(m),
            BValue::Infinite => None,
        }
    }
}

impl fmt::Display for BValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BValue::Finite(m) => write!(f, "{m}"),
            BValue::Infinite => f.write_str("inf"),
        }
    }
}

/// A Cartan matrix `A` over one field together with the parity vector `I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanDatum {
    spec: Arc<FieldSpec>,
    entries: Vec<Vec<FieldElement>>,
    parities: Vec<Parity>,
}

impl CartanDatum {
    pub fn new(
        spec: Arc<FieldSpec>,
        entries: Vec<Vec<FieldElement>>,
        parities: Vec<Parity>,
    ) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidDatum("rank must be positive".into()));
        }
        if let Some((i, row)) = entries.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidDatum(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            )));
        }
        if parities.len() != n {
            return Err(Error::InvalidDatum(format!(
                "{} parities given for rank {n}",
                parities.len()
            )));
        }
        if entries.iter().flatten().any(|e| **e.spec() != *spec) {
            return Err(Error::InvalidDatum(
                "entries belong to different fields".into(),
            ));
        }
        Ok(CartanDatum {
            spec,
            entries,
            parities,
        })
    }

    /// Builds a datum over a prime field (or ℚ when `p == 0`) from integer
    /// entries, reducing them into the field.
    pub fn from_ints(p: u64, matrix: &[Vec<i64>], parities: &[Parity]) -> Result<Self> {
        let spec = if p == 0 {
            FieldSpec::rationals()
        } else {
            FieldSpec::prime(p)?
        };
        let entries = matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&a| FieldElement::from_int(&spec, a as i128))
                    .collect()
            })
            .collect();
        Self::new(spec, entries, parities.to_vec())
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn entries(&self) -> &[Vec<FieldElement>] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> &FieldElement {
        &self.entries[row][col]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn parity(&self, k: usize) -> Parity {
        self.parities[k]
    }

    fn check_pair(&self, k: usize, j: usize) -> Result<()> {
        let n = self.rank();
        for index in [k, j] {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, n });
            }
        }
        if k == j {
            return Err(Error::EqualIndices(k));
        }
        Ok(())
    }

    /// `(A_kj, A_kk, i_k)` for a valid off-diagonal pair.
    fn pair(&self, k: usize, j: usize) -> Result<(&FieldElement, &FieldElement, Parity)> {
        self.check_pair(k, j)?;
        Ok((&self.entries[k][j], &self.entries[k][k], self.parities[k]))
    }
}

/// The prefix `d_{-1}, d_0, …, d_M` of the recursion for a pair `(k, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSequence {
    pub k: usize,
    pub j: usize,
    values: Vec<FieldElement>,
}

impl DSequence {
    /// Largest stored index `M`.
    pub fn max_m(&self) -> i64 {
        self.values.len() as i64 - 2
    }

    /// `d_m` for `-1 <= m <= M`.
    pub fn get(&self, m: i64) -> Option<&FieldElement> {
        usize::try_from(m + 1).ok().and_then(|i| self.values.get(i))
    }

    /// `(m, d_m)` pairs starting at `m = -1`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &FieldElement)> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (i as i64 - 1, v))
    }

    /// Smallest `m >= 0` with `d_m = 0`, if one is stored.
    pub fn first_zero(&self) -> Option<u64> {
        self.iter()
            .find(|(m, v)| *m >= 0 && v.is_zero())
            .map(|(m, _)| m as u64)
    }
}

/// One step of the recursion: `(-1)^{i_k} (d_{m-1} - A_kj - m·A_kk)`.
pub fn d_next(
    d_prev: &FieldElement,
    a_kj: &FieldElement,
    a_kk: &FieldElement,
    m: u64,
    parity: Parity,
) -> Result<FieldElement> {
    let inner = d_prev.sub(a_kj)?.sub(&a_kk.scale(m as i128))?;
    Ok(match parity {
        Parity::Even => inner,
        Parity::Odd => inner.neg(),
    })
}

pub fn d_sequence(datum: &CartanDatum, k: usize, j: usize, max_m: i64) -> Result<DSequence> {
    let (a_kj, a_kk, parity) = datum.pair(k, j)?;
    if max_m < -1 {
        return Err(Error::InvalidRequest(format!(
            "M must be at least -1, got {max_m}"
        )));
    }
    let mut values = Vec::with_capacity((max_m + 2) as usize);
    values.push(FieldElement::zero(datum.spec()));
    for m in 0..=max_m {
        let next = d_next(
            values.last().expect("nonempty"),
            a_kj,
            a_kk,
            m as u64,
            parity,
        )?;
        values.push(next);
    }
    Ok(DSequence { k, j, values })
}

/// `d_m = -(m+1)·A_kj - C(m+1, 2)·A_kk`, the solved recursion for even `i_k`.
pub fn d_closed_even(a_kj: &FieldElement, a_kk: &FieldElement, m: i64) -> Result<FieldElement> {
    let m = m as i128;
    let binom = (m + 1) * m / 2;
    Ok(a_kj.scale(-(m + 1)).sub(&a_kk.scale(binom))?)
}

/// Solved recursion for odd `i_k`: `A_kj + l·A_kk` when `m = 2l`, and
/// `l·A_kk` when `m = 2l - 1`.
pub fn d_closed_odd(a_kj: &FieldElement, a_kk: &FieldElement, m: i64) -> Result<FieldElement> {
    if m.rem_euclid(2) == 0 {
        Ok(a_kj.add(&a_kk.scale((m / 2) as i128))?)
    } else {
        Ok(a_kk.scale(((m + 1) / 2) as i128))
    }
}

/// First zero of the recursion. For `p > 0` the scan stops at `2p - 1`, where a
/// zero always exists; in characteristic 0 it stops at `rational_cap`, and an
/// unsuccessful scan yields infinity only when the closed form agrees.
pub fn b_recursive_pair(
    a_kj: &FieldElement,
    a_kk: &FieldElement,
    parity: Parity,
    rational_cap: u64,
) -> Result<BValue> {
    let p = a_kk.spec().characteristic();
    let bound = if p == 0 { rational_cap } else { 2 * p - 1 };
    let mut d = FieldElement::zero(a_kk.spec());
    for m in 0..=bound {
        d = d_next(&d, a_kj, a_kk, m, parity)?;
        if d.is_zero() {
            return Ok(BValue::Finite(m));
        }
    }
    if p > 0 {
        return Err(Error::Inconsistency(format!(
            "no zero of d_m for m <= {bound} (A_kj = {a_kj}, A_kk = {a_kk}, {parity})"
        )));
    }
    match b_closed_pair(a_kj, a_kk, parity)? {
        BValue::Infinite => Ok(BValue::Infinite),
        closed => Err(Error::ScanCapExceeded {
            cap: rational_cap,
            closed,
        }),
    }
}

pub fn b_recursive(datum: &CartanDatum, k: usize, j: usize) -> Result<BValue> {
    b_recursive_with_cap(datum, k, j, DEFAULT_RATIONAL_SCAN)
}

pub fn b_recursive_with_cap(
    datum: &CartanDatum,
    k: usize,
    j: usize,
    rational_cap: u64,
) -> Result<BValue> {
    let (a_kj, a_kk, parity) = datum.pair(k, j)?;
    b_recursive_pair(a_kj, a_kk, parity, rational_cap)
}

/// Closed-form value of `B_kj` from `A_kj`, `A_kk` and `i_k`.
pub fn b_closed_pair(a_kj: &FieldElement, a_kk: &FieldElement, parity: Parity) -> Result<BValue> {
    if a_kj.is_zero() {
        return Ok(BValue::Finite(0));
    }
    let p = a_kk.spec().characteristic();
    if p == 0 {
        return b_closed_rational(a_kj, a_kk, parity);
    }
    let value = match parity {
        Parity::Even if a_kk.is_zero() => p - 1,
        Parity::Even if p == 2 => {
            if a_kj == a_kk {
                2
            } else {
                3
            }
        }
        Parity::Even => match a_kj.div(a_kk)?.in_prime_subfield()? {
            Some(r) => lift(-2 * r as i128, p),
            None => p - 1,
        },
        Parity::Odd if a_kk.is_zero() => 1,
        Parity::Odd => match a_kj.div(a_kk)?.in_prime_subfield()? {
            Some(r) => 2 * lift(-(r as i128), p),
            None => 2 * p - 1,
        },
    };
    Ok(BValue::Finite(value))
}

// Characteristic 0. Even: d_m = -(m+1)(2A_kj + m·A_kk)/2 vanishes at
// m = -2·A_kj/A_kk. Odd: d_{2l} = A_kj + l·A_kk, d_{2l-1} = l·A_kk.
fn b_closed_rational(a_kj: &FieldElement, a_kk: &FieldElement, parity: Parity) -> Result<BValue> {
    let to_b = |m: Option<num_bigint::BigInt>| -> Result<BValue> {
        match m {
            Some(m) => m.to_u64().map(BValue::Finite).ok_or(Error::Overflow),
            None => Ok(BValue::Infinite),
        }
    };
    match parity {
        Parity::Even if a_kk.is_zero() => Ok(BValue::Infinite),
        Parity::Odd if a_kk.is_zero() => Ok(BValue::Finite(1)),
        Parity::Even => {
            let ratio = a_kj.div(a_kk)?;
            let m = -(ratio.rational().expect("rational field") * num_bigint::BigInt::from(2));
            to_b(non_negative_integer(&m))
        }
        Parity::Odd => {
            let ratio = a_kj.div(a_kk)?;
            let l = -ratio.rational().expect("rational field");
            to_b(non_negative_integer(&l).map(|l| l * 2))
        }
    }
}

pub fn b_closed(datum: &CartanDatum, k: usize, j: usize) -> Result<BValue> {
    let (a_kj, a_kk, parity) = datum.pair(k, j)?;
    b_closed_pair(a_kj, a_kk, parity)
}

/// `B_kj` for every off-diagonal pair; the diagonal is `None`.
pub fn b_table(datum: &CartanDatum) -> Result<Vec<Vec<Option<BValue>>>> {
    let n = datum.rank();
    (0..n)
        .map(|k| {
            (0..n)
                .map(|j| (k != j).then(|| b_closed(datum, k, j)).transpose())
                .collect()
        })
        .collect()
}
