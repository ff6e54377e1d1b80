//! Exact arithmetic in 𝔽_p, in small extensions 𝔽_p[t]/(f) and in ℚ.
//!
//! A [`FieldSpec`] describes the ground field and is shared between all of its
//! elements through an [`Arc`]. Extension fields use the power basis
//! `1, t, …, t^(k-1)` modulo a monic irreducible `f` supplied by the caller, so
//! an element lies in the prime subfield exactly when its non-constant
//! coordinates vanish.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 8;

/// Characteristics must stay below this bound so residue products fit in `u64`.
pub const MAX_CHARACTERISTIC: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic must be 0 or prime, got {0}")]
    NotPrime(u64),
    #[error("characteristic {0} is too large (must be below 2^32)")]
    CharacteristicTooLarge(u64),
    #[error("extension degree must lie in 2..={max}, got {got}", max = MAX_DEGREE)]
    DegreeOutOfRange { got: usize },
    #[error("modulus must have {expected} coefficients, got {got}")]
    ModulusLength { expected: usize, got: usize },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus is reducible over F_{0}")]
    Reducible(u64),
    #[error("coefficient {value} is not reduced modulo {p}")]
    CoefficientOutOfRange { value: u64, p: u64 },
    #[error("element has {got} coordinates but the field has degree {degree}")]
    TooManyCoordinates { got: usize, degree: usize },
    #[error("operands belong to different fields")]
    SpecMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),
}

/// The ground field: ℚ (characteristic 0), 𝔽_p, or 𝔽_p[t]/(modulus).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    characteristic: u64,
    degree: usize,
    /// Low degree first, monic, length `degree + 1`. Empty when `degree == 1`.
    modulus: Vec<u64>,
}

impl FieldSpec {
    pub fn rationals() -> Arc<Self> {
        Arc::new(FieldSpec {
            characteristic: 0,
            degree: 1,
            modulus: Vec::new(),
        })
    }

    pub fn prime(p: u64) -> Result<Arc<Self>, FieldError> {
        check_characteristic(p)?;
        Ok(Arc::new(FieldSpec {
            characteristic: p,
            degree: 1,
            modulus: Vec::new(),
        }))
    }

    /// `modulus` lists the coefficients of a monic irreducible polynomial,
    /// constant term first.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Arc<Self>, FieldError> {
        check_characteristic(p)?;
        let degree = modulus.len().saturating_sub(1);
        if !(2..=MAX_DEGREE).contains(&degree) {
            return Err(FieldError::DegreeOutOfRange { got: degree });
        }
        if let Some(&value) = modulus.iter().find(|&&c| c >= p) {
            return Err(FieldError::CoefficientOutOfRange { value, p });
        }
        if !check_irreducible(&modulus, p)? {
            return Err(FieldError::Reducible(p));
        }
        Ok(Arc::new(FieldSpec {
            characteristic: p,
            degree,
            modulus,
        }))
    }

    /// Smallest monic irreducible of the given degree, ordering candidates by
    /// their lower coefficients read as a base-`p` number (constant term least
    /// significant). Gives t²+t+1 over 𝔽_2 and t²+1 over 𝔽_3.
    pub fn first_extension(p: u64, degree: usize) -> Result<Arc<Self>, FieldError> {
        if degree == 1 {
            return Self::prime(p);
        }
        check_characteristic(p)?;
        if !(2..=MAX_DEGREE).contains(&degree) {
            return Err(FieldError::DegreeOutOfRange { got: degree });
        }
        let mut lower = vec![0u64; degree];
        loop {
            let mut modulus = lower.clone();
            modulus.push(1);
            if check_irreducible(&modulus, p)? {
                return Self::extension(p, modulus);
            }
            // An irreducible of every degree exists, so this terminates.
            for c in lower.iter_mut() {
                *c += 1;
                if *c < p {
                    break;
                }
                *c = 0;
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Modulus coefficients, constant term first; empty for prime fields and ℚ.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn is_rational(&self) -> bool {
        self.characteristic == 0
    }

    /// Number of elements, or `None` for ℚ or when it overflows `u64`.
    pub fn order(&self) -> Option<u64> {
        if self.is_rational() {
            return None;
        }
        self.characteristic.checked_pow(self.degree as u32)
    }

    /// All elements in a fixed order (residue tuples counted in base `p`,
    /// constant coordinate least significant). `None` for ℚ or when the field
    /// has more than `limit` elements.
    pub fn elements(self: &Arc<Self>, limit: u64) -> Option<Vec<FieldElement>> {
        let q = self.order().filter(|&q| q <= limit)?;
        let p = self.characteristic;
        let elements = (0..q)
            .map(|mut index| {
                let coeffs = (0..self.degree)
                    .map(|_| {
                        let c = index % p;
                        index /= p;
                        c
                    })
                    .collect();
                FieldElement {
                    spec: Arc::clone(self),
                    value: Value::Residues(coeffs),
                }
            })
            .collect();
        Some(elements)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.characteristic, self.degree) {
            (0, _) => write!(f, "Q"),
            (p, 1) => write!(f, "F_{p}"),
            (p, k) => {
                write!(f, "F_{p}^{k} = F_{p}[t]/(")?;
                fmt_poly(f, &self.modulus)?;
                write!(f, ")")
            }
        }
    }
}

fn check_characteristic(p: u64) -> Result<(), FieldError> {
    if p >= MAX_CHARACTERISTIC {
        return Err(FieldError::CharacteristicTooLarge(p));
    }
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    Ok(())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The minimal non-negative integer congruent to `x` modulo `p`.
pub fn lift(x: i128, p: u64) -> u64 {
    x.rem_euclid(p as i128) as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Value {
    /// Power-basis coordinates, each in `0..p`, exactly `degree` of them.
    Residues(Vec<u64>),
    /// Always in lowest terms with positive denominator (maintained by `Ratio`).
    Rational(BigRational),
}

/// An element of a [`FieldSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: Arc<FieldSpec>,
    value: Value,
}

impl FieldElement {
    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        Self::from_int(spec, 0)
    }

    pub fn one(spec: &Arc<FieldSpec>) -> Self {
        Self::from_int(spec, 1)
    }

    /// Canonical image of an integer, `n · 1`.
    pub fn from_int(spec: &Arc<FieldSpec>, n: i128) -> Self {
        Self::from_bigint(spec, &BigInt::from(n))
    }

    pub fn from_bigint(spec: &Arc<FieldSpec>, n: &BigInt) -> Self {
        let value = if spec.is_rational() {
            Value::Rational(BigRational::from_integer(n.clone()))
        } else {
            let p = BigInt::from(spec.characteristic);
            let r: u64 = ((n % &p + &p) % &p).try_into().expect("residue below p");
            let mut coeffs = vec![0; spec.degree];
            coeffs[0] = r;
            Value::Residues(coeffs)
        };
        FieldElement {
            spec: Arc::clone(spec),
            value,
        }
    }

    /// Builds an element from power-basis coordinates (constant first). Shorter
    /// vectors are padded with zeros.
    pub fn from_residues(spec: &Arc<FieldSpec>, coeffs: &[u64]) -> Result<Self, FieldError> {
        if spec.is_rational() {
            return Err(FieldError::Unsupported("residue coordinates over Q"));
        }
        if coeffs.len() > spec.degree {
            return Err(FieldError::TooManyCoordinates {
                got: coeffs.len(),
                degree: spec.degree,
            });
        }
        let p = spec.characteristic;
        if let Some(&value) = coeffs.iter().find(|&&c| c >= p) {
            return Err(FieldError::CoefficientOutOfRange { value, p });
        }
        let mut padded = coeffs.to_vec();
        padded.resize(spec.degree, 0);
        Ok(FieldElement {
            spec: Arc::clone(spec),
            value: Value::Residues(padded),
        })
    }

    pub fn from_rational(spec: &Arc<FieldSpec>, q: BigRational) -> Result<Self, FieldError> {
        if !spec.is_rational() {
            return Err(FieldError::Unsupported(
                "rational value in positive characteristic",
            ));
        }
        Ok(FieldElement {
            spec: Arc::clone(spec),
            value: Value::Rational(q),
        })
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    /// Power-basis coordinates, or `None` over ℚ.
    pub fn residues(&self) -> Option<&[u64]> {
        match &self.value {
            Value::Residues(c) => Some(c),
            Value::Rational(_) => None,
        }
    }

    /// The rational value, or `None` in positive characteristic.
    pub fn rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(q) => Some(q),
            Value::Residues(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Residues(c) => c.iter().all(|&x| x == 0),
            Value::Rational(q) => q.is_zero(),
        }
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        if Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec {
            Ok(())
        } else {
            Err(FieldError::SpecMismatch)
        }
    }

    fn with_value(&self, value: Value) -> Self {
        FieldElement {
            spec: Arc::clone(&self.spec),
            value,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        let p = self.spec.characteristic;
        let value = match (&self.value, &other.value) {
            (Value::Residues(a), Value::Residues(b)) => {
                Value::Residues(a.iter().zip(b).map(|(&x, &y)| (x + y) % p).collect())
            }
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a + b),
            _ => return Err(FieldError::SpecMismatch),
        };
        Ok(self.with_value(value))
    }

    pub fn neg(&self) -> Self {
        let p = self.spec.characteristic;
        let value = match &self.value {
            Value::Residues(a) => Value::Residues(a.iter().map(|&x| (p - x) % p).collect()),
            Value::Rational(a) => Value::Rational(-a),
        };
        self.with_value(value)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        let p = self.spec.characteristic;
        let value = match (&self.value, &other.value) {
            (Value::Residues(a), Value::Residues(b)) => {
                if self.spec.degree == 1 {
                    Value::Residues(vec![mul_mod(a[0], b[0], p)])
                } else {
                    let mut c = poly_mul(a, b, p);
                    poly_reduce_monic(&mut c, &self.spec.modulus, p);
                    c.resize(self.spec.degree, 0);
                    Value::Residues(c)
                }
            }
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a * b),
            _ => return Err(FieldError::SpecMismatch),
        };
        Ok(self.with_value(value))
    }

    /// `n · self` for an integer `n`, through the canonical image of `n`.
    pub fn scale(&self, n: i128) -> Self {
        self.mul(&Self::from_int(&self.spec, n))
            .expect("scalar shares the field")
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let p = self.spec.characteristic;
        let value = match &self.value {
            Value::Residues(a) if self.spec.degree == 1 => Value::Residues(vec![inv_mod(a[0], p)]),
            Value::Residues(a) => {
                let mut inv = poly_inv_mod(a, &self.spec.modulus, p);
                inv.resize(self.spec.degree, 0);
                Value::Residues(inv)
            }
            Value::Rational(a) => Value::Rational(a.recip()),
        };
        Ok(self.with_value(value))
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.spec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            e >>= 1;
        }
        acc
    }

    /// The residue when `self` lies in the prime subfield 𝔽_p, else `None`.
    pub fn in_prime_subfield(&self) -> Result<Option<u64>, FieldError> {
        match &self.value {
            Value::Residues(c) => Ok(c[1..].iter().all(|&x| x == 0).then_some(c[0])),
            Value::Rational(_) => Err(FieldError::Unsupported(
                "prime subfield membership in characteristic 0",
            )),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rational(q) => write!(f, "{q}"),
            Value::Residues(c) if c.len() == 1 => write!(f, "{}", c[0]),
            Value::Residues(c) => fmt_poly(f, c),
        }
    }
}

fn fmt_poly(f: &mut fmt::Formatter<'_>, coeffs: &[u64]) -> fmt::Result {
    let mut first = true;
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        match (i, c) {
            (0, c) => write!(f, "{c}")?,
            (1, 1) => write!(f, "t")?,
            (1, c) => write!(f, "{c}t")?,
            (i, 1) => write!(f, "t^{i}")?,
            (i, c) => write!(f, "{c}t^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Rational numbers print as `n` or `n/d`; used by the file formats too.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// True when the rational is a non-negative integer.
pub(crate) fn non_negative_integer(q: &BigRational) -> Option<BigInt> {
    (q.is_integer() && !q.is_negative()).then(|| q.to_integer())
}

// Polynomials over F_p: coefficient vectors, constant term first.

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(&mut c);
    c
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut c: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut c);
    c
}

/// Quotient and remainder of `a` by nonzero `b`.
fn poly_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut b = b.to_vec();
    trim(&mut b);
    let mut r = a.to_vec();
    trim(&mut r);
    assert!(!b.is_empty(), "polynomial division by zero");
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let factor = mul_mod(r[dr], lead_inv, p);
        q[dr - db] = factor;
        for (i, &bc) in b.iter().enumerate() {
            let idx = dr - db + i;
            r[idx] = (r[idx] + p - mul_mod(factor, bc, p)) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// In-place reduction modulo a monic polynomial.
fn poly_reduce_monic(a: &mut Vec<u64>, modulus: &[u64], p: u64) {
    let (_, r) = poly_divrem(a, modulus, p);
    *a = r;
}

fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let mut c = poly_mul(a, b, p);
    poly_reduce_monic(&mut c, modulus, p);
    c
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = poly_divrem(&a, &b, p);
        a = std::mem::replace(&mut b, r);
    }
    a
}

/// Inverse of nonzero `a` modulo irreducible `modulus`, via extended Euclid.
fn poly_inv_mod(a: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let (mut r0, mut r1) = (modulus.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut s0, mut s1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1, p);
        let s = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant since the modulus is irreducible.
    debug_assert_eq!(r0.len(), 1);
    let c = inv_mod(r0[0], p);
    let mut inv: Vec<u64> = s0.iter().map(|&x| mul_mod(x, c, p)).collect();
    poly_reduce_monic(&mut inv, modulus, p);
    inv
}

/// Irreducibility of a monic polynomial over 𝔽_p (coefficients constant
/// first). A degree-`d` polynomial is irreducible iff
/// `gcd(f, t^(p^i) - t) = 1` for every `1 <= i <= d/2`.
pub fn check_irreducible(modulus: &[u64], p: u64) -> Result<bool, FieldError> {
    check_characteristic(p)?;
    let mut f = modulus.to_vec();
    if let Some(&value) = f.iter().find(|&&c| c >= p) {
        return Err(FieldError::CoefficientOutOfRange { value, p });
    }
    if f.last() != Some(&1) {
        return Err(FieldError::NotMonic);
    }
    trim(&mut f);
    let degree = f.len() - 1;
    if degree == 0 {
        return Err(FieldError::DegreeOutOfRange { got: 0 });
    }
    let t = vec![0, 1];
    let mut h = t.clone();
    for _ in 0..degree / 2 {
        // h <- h^p mod f
        let mut acc = vec![1u64];
        let mut base = h.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, &f, p);
            }
            base = poly_mulmod(&base, &base, &f, p);
            e >>= 1;
        }
        h = acc;
        let g = poly_gcd(&f, &poly_sub(&h, &t, p), p);
        if g.len() != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial division by every monic polynomial of degree 1..=deg/2.
    fn irreducible_by_trial_division(f: &[u64], p: u64) -> bool {
        let degree = f.len() - 1;
        for d in 1..=degree / 2 {
            let count = p.pow(d as u32);
            for mut index in 0..count {
                let mut g: Vec<u64> = (0..d)
                    .map(|_| {
                        let c = index % p;
                        index /= p;
                        c
                    })
                    .collect();
                g.push(1);
                let (_, r) = poly_divrem(f, &g, p);
                if r.is_empty() {
                    return false;
                }
            }
        }
        true
    }

    fn el(spec: &Arc<FieldSpec>, c: &[u64]) -> FieldElement {
        FieldElement::from_residues(spec, c).unwrap()
    }

    fn f9() -> Arc<FieldSpec> {
        FieldSpec::extension(3, vec![1, 0, 1]).unwrap()
    }

    fn f4() -> Arc<FieldSpec> {
        FieldSpec::extension(2, vec![1, 1, 1]).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn add_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(el(&f5, &[3]).add(&el(&f5, &[4])).unwrap(), el(&f5, &[2]));

        let f9 = f9();
        let sum = el(&f9, &[1, 1]).add(&el(&f9, &[2, 2])).unwrap();
        assert!(sum.is_zero());

        let qq = FieldSpec::rationals();
        let a = FieldElement::from_rational(&qq, q(1, 2)).unwrap();
        let b = FieldElement::from_rational(&qq, q(1, 3)).unwrap();
        assert_eq!(a.add(&b).unwrap().rational().unwrap(), &q(5, 6));
    }

    #[test]
    fn mul_neg_inv_examples() {
        let f9 = f9();
        let t = el(&f9, &[0, 1]);
        assert_eq!(t.mul(&t).unwrap(), el(&f9, &[2]));

        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(el(&f7, &[3]).inv().unwrap(), el(&f7, &[5]));

        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(el(&f5, &[2]).neg(), el(&f5, &[3]));
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(
            FieldElement::zero(&f7).inv(),
            Err(FieldError::DivisionByZero)
        );
        assert_eq!(
            FieldElement::zero(&f9()).inv(),
            Err(FieldError::DivisionByZero)
        );
        let qq = FieldSpec::rationals();
        assert_eq!(
            FieldElement::zero(&qq).inv(),
            Err(FieldError::DivisionByZero)
        );
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let f5 = FieldSpec::prime(5).unwrap();
        let f7 = FieldSpec::prime(7).unwrap();
        let a = FieldElement::one(&f5);
        let b = FieldElement::one(&f7);
        assert_eq!(a.add(&b), Err(FieldError::SpecMismatch));
        assert_eq!(a.mul(&b), Err(FieldError::SpecMismatch));
        assert_eq!(a.div(&b), Err(FieldError::SpecMismatch));
        // Equal specs built separately are the same field.
        let f5b = FieldSpec::prime(5).unwrap();
        assert!(a.add(&FieldElement::one(&f5b)).is_ok());
    }

    #[test]
    fn prime_subfield_examples() {
        let f9 = f9();
        assert_eq!(el(&f9, &[2]).in_prime_subfield(), Ok(Some(2)));
        assert_eq!(el(&f9, &[0, 1]).in_prime_subfield(), Ok(None));
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(el(&f5, &[4]).in_prime_subfield(), Ok(Some(4)));
        let qq = FieldSpec::rationals();
        assert!(matches!(
            FieldElement::one(&qq).in_prime_subfield(),
            Err(FieldError::Unsupported(_))
        ));
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift(-1, 5), 4);
        assert_eq!(lift(0, 3), 0);
        assert_eq!(lift(10, 7), 3);
    }

    #[test]
    fn lift_is_a_bijection_onto_representatives() {
        for p in [2u64, 3, 5, 7, 11] {
            let mut seen: Vec<u64> = (0..p as i128).map(|x| lift(x - 3 * p as i128, p)).collect();
            for (x, &l) in seen.iter().enumerate() {
                assert_eq!(l, x as u64);
            }
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len() as u64, p);
        }
    }

    #[test]
    fn irreducibility_examples() {
        assert_eq!(check_irreducible(&[1, 0, 1], 3), Ok(true));
        assert_eq!(check_irreducible(&[1, 0, 1], 2), Ok(false));
        assert_eq!(check_irreducible(&[1, 1, 1], 2), Ok(true));
        assert_eq!(check_irreducible(&[1, 0, 2], 3), Err(FieldError::NotMonic));
    }

    #[test]
    fn irreducibility_agrees_with_trial_division() {
        for (p, max_degree) in [(2u64, 8usize), (3, 6), (5, 4), (7, 3)] {
            for degree in 2..=max_degree {
                let count = p.pow(degree as u32);
                for mut index in 0..count {
                    let mut f: Vec<u64> = (0..degree)
                        .map(|_| {
                            let c = index % p;
                            index /= p;
                            c
                        })
                        .collect();
                    f.push(1);
                    assert_eq!(
                        check_irreducible(&f, p).unwrap(),
                        irreducible_by_trial_division(&f, p),
                        "p={p} f={f:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert_eq!(FieldSpec::prime(4), Err(FieldError::NotPrime(4)));
        assert_eq!(FieldSpec::prime(1), Err(FieldError::NotPrime(1)));
        assert_eq!(
            FieldSpec::extension(2, vec![1, 0, 1]),
            Err(FieldError::Reducible(2))
        );
        assert_eq!(
            FieldSpec::extension(3, vec![1, 0, 2]),
            Err(FieldError::NotMonic)
        );
        assert!(matches!(
            FieldSpec::extension(2, vec![1; 10]),
            Err(FieldError::DegreeOutOfRange { got: 9 })
        ));
        assert!(FieldSpec::prime(MAX_CHARACTERISTIC + 15).is_err());
    }

    #[test]
    fn first_extensions_match_conventional_moduli() {
        assert_eq!(FieldSpec::first_extension(2, 2).unwrap(), f4());
        assert_eq!(FieldSpec::first_extension(3, 2).unwrap(), f9());
        assert_eq!(
            FieldSpec::first_extension(2, 3).unwrap().modulus(),
            &[1, 1, 0, 1]
        );
    }

    fn small_fields() -> Vec<Arc<FieldSpec>> {
        let mut fields: Vec<_> = [2, 3, 5, 7]
            .into_iter()
            .map(|p| FieldSpec::prime(p).unwrap())
            .collect();
        fields.push(f4());
        fields.push(f9());
        fields
    }

    #[test]
    fn field_axioms_exhaustive() {
        for spec in small_fields() {
            let elements = spec.elements(100).unwrap();
            let zero = FieldElement::zero(&spec);
            let one = FieldElement::one(&spec);
            for a in &elements {
                assert_eq!(a.add(&a.neg()).unwrap(), zero);
                if !a.is_zero() {
                    assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), one, "{spec}: {a}");
                }
                for b in &elements {
                    assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
                    assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
                    for c in &elements {
                        let ab_c = a.mul(b).unwrap().mul(c).unwrap();
                        let a_bc = a.mul(&b.mul(c).unwrap()).unwrap();
                        assert_eq!(ab_c, a_bc);
                        assert_eq!(
                            a.add(b).unwrap().add(c).unwrap(),
                            a.add(&b.add(c).unwrap()).unwrap()
                        );
                        let lhs = a.mul(&b.add(c).unwrap()).unwrap();
                        let rhs = a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn prime_subfield_is_frobenius_fixed() {
        for spec in [f4(), f9()] {
            let p = spec.characteristic();
            for a in spec.elements(100).unwrap() {
                let fixed = a.pow(p) == a;
                assert_eq!(a.in_prime_subfield().unwrap().is_some(), fixed, "{a}");
            }
        }
    }

    #[test]
    fn display() {
        let f9 = f9();
        assert_eq!(el(&f9, &[1, 2]).to_string(), "2t + 1");
        assert_eq!(el(&f9, &[0, 1]).to_string(), "t");
        assert_eq!(FieldElement::zero(&f9).to_string(), "0");
        assert_eq!(f9.to_string(), "F_3^2 = F_3[t]/(t^2 + 1)");
        let qq = FieldSpec::rationals();
        assert_eq!(
            FieldElement::from_rational(&qq, q(-3, 6))
                .unwrap()
                .to_string(),
            "-1/2"
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn extension_field_axioms(
                p in prop::sample::select(vec![101u64, 65521]),
                a in prop::collection::vec(any::<u64>(), 3),
                b in prop::collection::vec(any::<u64>(), 3),
            ) {
                let spec = FieldSpec::first_extension(p, 3).unwrap();
                let a: Vec<u64> = a.iter().map(|x| x % p).collect();
                let b: Vec<u64> = b.iter().map(|x| x % p).collect();
                let a = el(&spec, &a);
                let b = el(&spec, &b);
                if !b.is_zero() {
                    prop_assert_eq!(a.div(&b).unwrap().mul(&b).unwrap(), a.clone());
                }
                prop_assert_eq!(a.sub(&b).unwrap().add(&b).unwrap(), a);
            }

            #[test]
            fn scalars_match_repeated_addition(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]), n in 0i128..60) {
                let spec = FieldSpec::prime(p).unwrap();
                let one = FieldElement::one(&spec);
                let mut acc = FieldElement::zero(&spec);
                for _ in 0..n {
                    acc = acc.add(&one).unwrap();
                }
                prop_assert_eq!(FieldElement::from_int(&spec, n), acc.clone());
                prop_assert_eq!(FieldElement::from_int(&spec, -n), acc.neg());
            }
        }
    }
}
