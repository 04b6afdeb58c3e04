//! Exact scalars: arbitrary-precision rationals and residues modulo a prime.
//!
//! Every [`FieldValue`] carries the field it lives in. Values are kept in
//! canonical form (reduced fraction with positive denominator, or a residue in
//! `0..p`), so structural equality is mathematical equality.
//!
//! The `std::ops` impls panic when the operands belong to different fields or
//! on division by zero, the same way integer division panics. Matrices and
//! algebras validate their entries once at construction, so internal code uses
//! the operators; untrusted combinations go through [`field_arith`] or the
//! `checked_*` methods.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Largest prime accepted for a prime field.
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported maximum {MAX_PRIME}")]
    PrimeTooLarge(u64),
    #[error("malformed scalar literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("non-integer literal {literal:?} is not allowed over GF({prime})")]
    NonIntegerLiteral { literal: String, prime: u64 },
    #[error("denominator of {value} is not invertible modulo {prime}")]
    NotInvertibleModP { value: String, prime: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(FieldSpec, FieldSpec),
    #[error("the rationals cannot be enumerated")]
    InfiniteField,
}

/// A prime `p` with `2 <= p <= MAX_PRIME`, verified by trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p > MAX_PRIME {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The ground field: either ℚ or GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    PrimeField(Prime),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Prime::new(p).map(FieldSpec::PrimeField)
    }

    /// The characteristic's prime, if finite.
    pub fn modulus(self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField(p) => Some(p.get()),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, FieldSpec::PrimeField(_))
    }

    pub fn zero(self) -> FieldValue {
        FieldValue::from_i64(0, self)
    }

    pub fn one(self) -> FieldValue {
        FieldValue::from_i64(1, self)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "GF({p})"),
        }
    }
}

/// An element of a [`FieldSpec`], always canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum FieldValue {
    Rational(BigRational),
    Residue { value: u64, prime: Prime },
}

impl FieldValue {
    pub fn from_i64(n: i64, spec: FieldSpec) -> FieldValue {
        match spec {
            FieldSpec::Rationals => FieldValue::Rational(BigRational::from_integer(n.into())),
            FieldSpec::PrimeField(prime) => {
                let value = n.rem_euclid(prime.get() as i64) as u64;
                FieldValue::Residue { value, prime }
            }
        }
    }

    pub fn from_bigint(n: &BigInt, spec: FieldSpec) -> FieldValue {
        match spec {
            FieldSpec::Rationals => FieldValue::Rational(BigRational::from_integer(n.clone())),
            FieldSpec::PrimeField(prime) => FieldValue::Residue {
                value: reduce_bigint(n, prime.get()),
                prime,
            },
        }
    }

    /// A residue; `value` is reduced modulo `p`.
    pub fn residue(value: u64, prime: Prime) -> FieldValue {
        FieldValue::Residue {
            value: value % prime.get(),
            prime,
        }
    }

    /// Maps a rational into `spec`, failing over GF(p) when p divides the denominator.
    pub fn from_rational(q: &BigRational, spec: FieldSpec) -> Result<FieldValue, FieldError> {
        match spec {
            FieldSpec::Rationals => Ok(FieldValue::Rational(q.clone())),
            FieldSpec::PrimeField(prime) => {
                let num = FieldValue::from_bigint(q.numer(), spec);
                let den = FieldValue::from_bigint(q.denom(), spec);
                num.checked_div(&den).map_err(|_| FieldError::NotInvertibleModP {
                    value: q.to_string(),
                    prime: prime.get(),
                })
            }
        }
    }

    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldValue::Rational(_) => FieldSpec::Rationals,
            FieldValue::Residue { prime, .. } => FieldSpec::PrimeField(*prime),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldValue::Rational(q) => q.is_zero(),
            FieldValue::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldValue::Rational(q) => q.is_one(),
            FieldValue::Residue { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldValue::Rational(q) => Some(q),
            FieldValue::Residue { .. } => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match self {
            FieldValue::Residue { value, .. } => Some(*value),
            FieldValue::Rational(_) => None,
        }
    }

    fn check_same(&self, other: &FieldValue) -> Result<(), FieldError> {
        if self.spec() == other.spec() {
            Ok(())
        } else {
            Err(FieldError::Mismatch(self.spec(), other.spec()))
        }
    }

    pub fn checked_add(&self, other: &FieldValue) -> Result<FieldValue, FieldError> {
        self.check_same(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &FieldValue) -> Result<FieldValue, FieldError> {
        self.check_same(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn checked_mul(&self, other: &FieldValue) -> Result<FieldValue, FieldError> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &FieldValue) -> Result<FieldValue, FieldError> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    pub fn inv(&self) -> Result<FieldValue, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            FieldValue::Rational(q) => FieldValue::Rational(q.recip()),
            FieldValue::Residue { value, prime } => FieldValue::Residue {
                value: mod_pow(*value, prime.get() - 2, prime.get()),
                prime: *prime,
            },
        })
    }

    pub fn pow(&self, mut exp: u32) -> FieldValue {
        let mut base = self.clone();
        let mut acc = self.spec().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    fn add_unchecked(&self, other: &FieldValue) -> FieldValue {
        match (self, other) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a + b),
            (FieldValue::Residue { value: a, prime }, FieldValue::Residue { value: b, .. }) => {
                let p = prime.get();
                FieldValue::Residue {
                    value: (a + b) % p,
                    prime: *prime,
                }
            }
            _ => unreachable!("field mismatch"),
        }
    }

    fn mul_unchecked(&self, other: &FieldValue) -> FieldValue {
        match (self, other) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a * b),
            (FieldValue::Residue { value: a, prime }, FieldValue::Residue { value: b, .. }) => {
                let p = prime.get() as u128;
                FieldValue::Residue {
                    value: ((*a as u128 * *b as u128) % p) as u64,
                    prime: *prime,
                }
            }
            _ => unreachable!("field mismatch"),
        }
    }

    fn neg_ref(&self) -> FieldValue {
        match self {
            FieldValue::Rational(q) => FieldValue::Rational(-q),
            FieldValue::Residue { value, prime } => FieldValue::Residue {
                value: (prime.get() - value) % prime.get(),
                prime: *prime,
            },
        }
    }
}

fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

fn mod_pow(base: u64, mut exp: u64, p: u64) -> u64 {
    let p128 = p as u128;
    let mut acc: u128 = 1;
    let mut b = base as u128 % p128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p128;
        }
        b = b * b % p128;
        exp >>= 1;
    }
    acc as u64
}

fn expect_same(a: &FieldValue, b: &FieldValue) {
    if let Err(e) = a.check_same(b) {
        panic!("{e}");
    }
}

impl Add for &FieldValue {
    type Output = FieldValue;
    fn add(self, rhs: &FieldValue) -> FieldValue {
        expect_same(self, rhs);
        self.add_unchecked(rhs)
    }
}

impl Sub for &FieldValue {
    type Output = FieldValue;
    fn sub(self, rhs: &FieldValue) -> FieldValue {
        expect_same(self, rhs);
        self.add_unchecked(&rhs.neg_ref())
    }
}

impl Mul for &FieldValue {
    type Output = FieldValue;
    fn mul(self, rhs: &FieldValue) -> FieldValue {
        expect_same(self, rhs);
        self.mul_unchecked(rhs)
    }
}

impl Div for &FieldValue {
    type Output = FieldValue;
    fn div(self, rhs: &FieldValue) -> FieldValue {
        match self.checked_div(rhs) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }
}

impl Neg for &FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.neg_ref()
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for FieldValue {
            type Output = FieldValue;
            fn $method(self, rhs: FieldValue) -> FieldValue {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FieldValue> for FieldValue {
            type Output = FieldValue;
            fn $method(self, rhs: &FieldValue) -> FieldValue {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.neg_ref()
    }
}

impl PartialOrd for FieldValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Numeric order on ℚ, residue order on GF(p). Used only for deterministic
/// output ordering; values from different fields order ℚ first.
impl Ord for FieldValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => a.cmp(b),
            (
                FieldValue::Residue { value: a, prime: p },
                FieldValue::Residue { value: b, prime: q },
            ) => p.cmp(q).then(a.cmp(b)),
            (FieldValue::Rational(_), FieldValue::Residue { .. }) => Ordering::Less,
            (FieldValue::Residue { .. }, FieldValue::Rational(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldValue::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldValue::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl fmt::Debug for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldValue::Rational(_) => write!(f, "{self}"),
            FieldValue::Residue { prime, .. } => write!(f, "{self} (mod {prime})"),
        }
    }
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Parses `[-]?digits` or `[-]?digits/digits` into a canonical value.
///
/// Over GF(p) only integer literals are accepted; they are reduced mod p.
pub fn parse_value(text: &str, spec: FieldSpec) -> Result<FieldValue, FieldError> {
    let malformed = || FieldError::Malformed(text.to_string());
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (num_str, den_str) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    if !is_digits(num_str) || den_str.is_some_and(|d| !is_digits(d)) {
        return Err(malformed());
    }
    let mut num: BigInt = num_str.parse().map_err(|_| malformed())?;
    if negative {
        num = -num;
    }
    match (den_str, spec) {
        (Some(_), FieldSpec::PrimeField(p)) => Err(FieldError::NonIntegerLiteral {
            literal: text.to_string(),
            prime: p.get(),
        }),
        (Some(d), FieldSpec::Rationals) => {
            let den: BigInt = d.parse().map_err(|_| malformed())?;
            if den.is_zero() {
                return Err(FieldError::ZeroDenominator(text.to_string()));
            }
            Ok(FieldValue::Rational(BigRational::new(num, den)))
        }
        (None, _) => Ok(FieldValue::from_bigint(&num, spec)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact arithmetic on two values of the same field.
pub fn field_arith(a: &FieldValue, b: &FieldValue, op: ArithOp) -> Result<FieldValue, FieldError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

/// All elements of GF(p) in the order `0, 1, ..., p-1`.
pub fn enumerate_field(spec: FieldSpec) -> Result<impl Iterator<Item = FieldValue>, FieldError> {
    match spec {
        FieldSpec::Rationals => Err(FieldError::InfiniteField),
        FieldSpec::PrimeField(prime) => {
            Ok((0..prime.get()).map(move |value| FieldValue::Residue { value, prime }))
        }
    }
}
