//! Machine-readable reports for the command-line tool, and the exhaustive
//! closed-form-versus-recursion self-check.
//!
//! Reports serialise to pretty-printed JSON with a fixed key order, so the
//! same input always yields byte-identical output. Indices in reports are
//! 1-based.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cartan::{
    b_closed, b_closed_pair, b_recursive_pair, b_recursive_with_cap, b_table, d_next, d_sequence,
    BValue, CartanDatum, Parity,
};
use crate::error::Error;
use crate::field::{is_prime, FieldElement, FieldSpec, MAX_DEGREE};
use crate::format::Entry;
use crate::reflection::{determinant, reflect, unimodularity_check};
use crate::Result;

/// Largest field enumerated by the self-check; each field costs `2·q²` cases.
pub const SELFCHECK_MAX_ORDER: u64 = 1024;

/// Process exit codes of the command-line tool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Validation = 1,
    Inconsistency = 2,
    ReflectionUndefined = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

impl From<&Error> for ExitStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Inconsistency(_) => ExitStatus::Inconsistency,
            Error::InfiniteB { .. } => ExitStatus::ReflectionUndefined,
            _ => ExitStatus::Validation,
        }
    }
}

impl Serialize for BValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BValue::Finite(m) => s.serialize_u64(*m),
            BValue::Infinite => s.serialize_str("inf"),
        }
    }
}

impl Serialize for Parity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldInfo {
    pub characteristic: u64,
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

impl From<&FieldSpec> for FieldInfo {
    fn from(spec: &FieldSpec) -> Self {
        FieldInfo {
            characteristic: spec.characteristic(),
            degree: spec.degree(),
            modulus: (spec.degree() > 1).then(|| spec.modulus().to_vec()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BkjReport {
    pub field: FieldInfo,
    pub k: usize,
    pub j: usize,
    pub parity: Parity,
    pub a_kk: Entry,
    pub a_kj: Entry,
    pub closed: BValue,
    pub recursive: BValue,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DTerm {
    pub m: i64,
    pub value: Entry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DseqReport {
    pub field: FieldInfo,
    pub k: usize,
    pub j: usize,
    pub parity: Parity,
    pub max_m: i64,
    pub values: Vec<DTerm>,
    pub first_zero: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub field: FieldInfo,
    pub n: usize,
    pub parities: Vec<Parity>,
    /// Row `k`, column `j` holds `B_kj`; the diagonal is `null`.
    pub table: Vec<Vec<Option<BValue>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReflectReport {
    pub field: FieldInfo,
    pub k: usize,
    pub b_row: Vec<Option<u64>>,
    pub sigma: Vec<Vec<i64>>,
    pub basis_matrix: Vec<Vec<i64>>,
    pub determinant: i64,
    pub unimodular: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldCheck {
    pub field: FieldInfo,
    pub cases: u64,
    pub mismatches: u64,
    pub bound_violations: u64,
    /// Distinct values of `B` observed, ascending.
    pub b_values: Vec<u64>,
    /// The first few failing cases, if any.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelfcheckReport {
    pub fields: Vec<FieldCheck>,
    pub cases: u64,
    pub mismatches: u64,
    pub bound_violations: u64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum ReportDocument {
    Bkj(BkjReport),
    Dseq(DseqReport),
    Table(TableReport),
    Reflect(ReflectReport),
    Selfcheck(SelfcheckReport),
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    /// Exit status implied by the report contents (not by how it was produced).
    pub fn status(&self) -> ExitStatus {
        match self {
            ReportDocument::Selfcheck(r) if !r.passed => ExitStatus::Inconsistency,
            _ => ExitStatus::Success,
        }
    }
}

/// Converts a 1-based user index.
fn index(one_based: usize, n: usize) -> Result<usize> {
    one_based
        .checked_sub(1)
        .filter(|&i| i < n)
        .ok_or_else(|| Error::InvalidRequest(format!("index {one_based} outside 1..={n}")))
}

/// Both routes to `B_kj`; any disagreement is an error.
pub fn cmd_bkj(
    datum: &CartanDatum,
    k: usize,
    j: usize,
    rational_cap: u64,
) -> Result<ReportDocument> {
    let n = datum.rank();
    let (k0, j0) = (index(k, n)?, index(j, n)?);
    let closed = b_closed(datum, k0, j0)?;
    let recursive = b_recursive_with_cap(datum, k0, j0, rational_cap)?;
    if closed != recursive {
        return Err(Error::Inconsistency(format!(
            "B_{k}{j}: closed form gives {closed}, recursion gives {recursive}"
        )));
    }
    Ok(ReportDocument::Bkj(BkjReport {
        field: datum.spec().as_ref().into(),
        k,
        j,
        parity: datum.parity(k0),
        a_kk: Entry::from_element(datum.entry(k0, k0)),
        a_kj: Entry::from_element(datum.entry(k0, j0)),
        closed,
        recursive,
        agree: true,
    }))
}

pub fn cmd_dseq(datum: &CartanDatum, k: usize, j: usize, max_m: i64) -> Result<ReportDocument> {
    let n = datum.rank();
    let (k0, j0) = (index(k, n)?, index(j, n)?);
    let seq = d_sequence(datum, k0, j0, max_m)?;
    Ok(ReportDocument::Dseq(DseqReport {
        field: datum.spec().as_ref().into(),
        k,
        j,
        parity: datum.parity(k0),
        max_m,
        values: seq
            .iter()
            .map(|(m, v)| DTerm {
                m,
                value: Entry::from_element(v),
            })
            .collect(),
        first_zero: seq.first_zero(),
    }))
}

pub fn cmd_table(datum: &CartanDatum) -> Result<ReportDocument> {
    Ok(ReportDocument::Table(TableReport {
        field: datum.spec().as_ref().into(),
        n: datum.rank(),
        parities: datum.parities().to_vec(),
        table: b_table(datum)?,
    }))
}

pub fn cmd_reflect(datum: &CartanDatum, k: usize) -> Result<ReportDocument> {
    let k0 = index(k, datum.rank())?;
    let result = reflect(datum, k0)?;
    let det = determinant(&result.basis_matrix)
        .and_then(|d| i64::try_from(d).ok())
        .ok_or(Error::Overflow)?;
    let unimodular = unimodularity_check(&result);
    if !unimodular {
        return Err(Error::Inconsistency(format!(
            "reflected basis has determinant {det}, expected -1"
        )));
    }
    Ok(ReportDocument::Reflect(ReflectReport {
        field: datum.spec().as_ref().into(),
        k,
        b_row: result.b_row,
        sigma: result.sigma.into_iter().map(|s| s.0).collect(),
        basis_matrix: result.basis_matrix,
        determinant: det,
        unimodular,
    }))
}

/// Enumerates every `(parity, A_kk, A_kj)` over `𝔽_{p^d}` for each requested
/// prime `p` and degree `d`, comparing the closed form with the recursion and
/// checking the upper bounds on `B` and the positions of guaranteed zeros.
pub fn cmd_selfcheck(primes: &[u64], degrees: &[usize]) -> Result<ReportDocument> {
    if primes.is_empty() || degrees.is_empty() {
        return Err(Error::InvalidRequest("no primes or degrees given".into()));
    }
    let mut fields = Vec::new();
    for &p in primes {
        if !is_prime(p) {
            return Err(Error::InvalidRequest(format!("{p} is not prime")));
        }
        for &d in degrees {
            if !(1..=MAX_DEGREE).contains(&d) {
                return Err(Error::InvalidRequest(format!(
                    "degree {d} outside the supported range 1..={MAX_DEGREE}"
                )));
            }
            let order = p
                .checked_pow(d as u32)
                .filter(|&q| q <= SELFCHECK_MAX_ORDER);
            if order.is_none() {
                return Err(Error::InvalidRequest(format!(
                    "F_{p}^{d} has more than {SELFCHECK_MAX_ORDER} elements"
                )));
            }
            fields.push(FieldSpec::first_extension(p, d)?);
        }
    }
    let checks = fields
        .par_iter()
        .map(check_field)
        .collect::<Result<Vec<_>>>()?;
    let cases = checks.iter().map(|c| c.cases).sum();
    let mismatches = checks.iter().map(|c| c.mismatches).sum();
    let bound_violations = checks.iter().map(|c| c.bound_violations).sum();
    Ok(ReportDocument::Selfcheck(SelfcheckReport {
        fields: checks,
        cases,
        mismatches,
        bound_violations,
        passed: mismatches == 0 && bound_violations == 0,
    }))
}

const MAX_LISTED_FAILURES: usize = 10;

/// Exhaustive comparison over one field.
pub fn check_field(spec: &Arc<FieldSpec>) -> Result<FieldCheck> {
    let elements = spec
        .elements(SELFCHECK_MAX_ORDER)
        .ok_or_else(|| Error::InvalidRequest(format!("{spec} is too large to enumerate")))?;
    let mut check = FieldCheck {
        field: spec.as_ref().into(),
        cases: 0,
        mismatches: 0,
        bound_violations: 0,
        b_values: Vec::new(),
        failures: Vec::new(),
    };
    let mut seen = BTreeSet::new();
    for parity in Parity::ALL {
        for a_kk in &elements {
            for a_kj in &elements {
                check.cases += 1;
                let describe = || format!("{parity} A_kk={a_kk} A_kj={a_kj}");
                let closed = b_closed_pair(a_kj, a_kk, parity)?;
                let recursive = b_recursive_pair(a_kj, a_kk, parity, 0);
                let mut failure = None;
                match &recursive {
                    Ok(r) if *r == closed => {}
                    Ok(r) => {
                        failure = Some(format!("{}: closed {closed}, recursive {r}", describe()))
                    }
                    Err(e) => failure = Some(format!("{}: {e}", describe())),
                }
                if let Some(f) = failure {
                    check.mismatches += 1;
                    if check.failures.len() < MAX_LISTED_FAILURES {
                        check.failures.push(f);
                    }
                }
                let b = closed.finite();
                if let Some(b) = b {
                    seen.insert(b);
                }
                if let Some(violation) = bound_violation(a_kj, a_kk, parity, b)? {
                    check.bound_violations += 1;
                    if check.failures.len() < MAX_LISTED_FAILURES {
                        check.failures.push(format!("{}: {violation}", describe()));
                    }
                }
            }
        }
    }
    check.b_values = seen.into_iter().collect();
    debug_assert_eq!(check.cases, 2 * (elements.len() as u64).pow(2));
    Ok(check)
}

/// Upper bounds on `B` and the guaranteed zeros of the recursion.
fn bound_violation(
    a_kj: &FieldElement,
    a_kk: &FieldElement,
    parity: Parity,
    b: Option<u64>,
) -> Result<Option<String>> {
    let p = a_kk.spec().characteristic();
    let Some(b) = b else {
        return Ok(Some("B is infinite in positive characteristic".into()));
    };
    let limit = match parity {
        Parity::Even if p == 2 => 3,
        Parity::Even => p - 1,
        Parity::Odd => 2 * p - 1,
    };
    if b > limit {
        return Ok(Some(format!("B = {b} exceeds {limit}")));
    }
    if !a_kk.is_zero() {
        let zero_at = match parity {
            Parity::Even if p == 2 => 3,
            Parity::Even => p - 1,
            Parity::Odd => 2 * p - 1,
        };
        let mut d = FieldElement::zero(a_kk.spec());
        for m in 0..=zero_at {
            d = d_next(&d, a_kj, a_kk, m, parity)?;
        }
        if !d.is_zero() {
            return Ok(Some(format!("d_{zero_at} = {d} is not zero")));
        }
    }
    Ok(None)
}
