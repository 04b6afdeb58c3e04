use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::LinalgError;
use crate::fields::{enumerate_field, FieldSpec, FieldValue};

/// Trial-divisor budget for factoring the constant and leading coefficients
/// during the rational root search.
pub const MAX_DIVISOR_CANDIDATES: u64 = 1_000_000;

/// Univariate polynomial, coefficients lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: FieldSpec,
    coeffs: Vec<FieldValue>,
}

impl Polynomial {
    /// Trailing zero coefficients are trimmed.
    pub fn new(field: FieldSpec, mut coeffs: Vec<FieldValue>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.spec() == field));
        while coeffs.last().is_some_and(FieldValue::is_zero) {
            coeffs.pop();
        }
        Polynomial { field, coeffs }
    }

    pub fn from_i64s(field: FieldSpec, coeffs: &[i64]) -> Self {
        Polynomial::new(
            field,
            coeffs.iter().map(|&c| FieldValue::from_i64(c, field)).collect(),
        )
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldValue] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FieldValue {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &FieldValue) -> FieldValue {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    /// The distinct roots lying in the coefficient field, in ascending order.
    ///
    /// Over GF(p) every residue is tried. Over ℚ the polynomial is scaled to
    /// integer coefficients, factors of `λ` are split off, and the candidates
    /// `±a/b` with `a | constant` and `b | leading` are tested exactly.
    pub fn roots_in_field(&self) -> Result<BTreeSet<FieldValue>, LinalgError> {
        if self.is_zero() {
            return Err(LinalgError::ZeroPolynomial);
        }
        match self.field {
            FieldSpec::PrimeField(_) => Ok(enumerate_field(self.field)?
                .filter(|x| self.eval(x).is_zero())
                .collect()),
            FieldSpec::Rationals => self.rational_roots(),
        }
    }

    fn rational_roots(&self) -> Result<BTreeSet<FieldValue>, LinalgError> {
        let rationals: Vec<&BigRational> = self
            .coeffs
            .iter()
            .map(|c| c.as_rational().expect("rational coefficient"))
            .collect();
        let l = rationals.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<BigInt> = rationals.iter().map(|q| q.numer() * (&l / q.denom())).collect();

        let mut roots = BTreeSet::new();
        let shift = ints.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
        if shift > 0 {
            roots.insert(self.field.zero());
        }
        let ints = &ints[shift..];
        if ints.len() == 1 {
            return Ok(roots);
        }
        let constant = ints[0].abs();
        let leading = ints[ints.len() - 1].abs();
        let mut budget = MAX_DIVISOR_CANDIDATES;
        let nums = divisors(&constant, &mut budget)?;
        let dens = divisors(&leading, &mut budget)?;
        for a in &nums {
            for b in &dens {
                if !a.gcd(b).is_one() {
                    continue;
                }
                for sign in [1, -1] {
                    let cand = BigRational::new(a * sign, b.clone());
                    let value = FieldValue::Rational(cand);
                    if self.eval(&value).is_zero() {
                        roots.insert(value);
                    }
                }
            }
        }
        Ok(roots)
    }
}

/// Positive divisors of `n > 0` by trial division up to √n, charging each
/// trial divisor against `budget`.
fn divisors(n: &BigInt, budget: &mut u64) -> Result<Vec<BigInt>, LinalgError> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    if let Some(n64) = n.to_u64() {
        let mut d = 1u64;
        while d.saturating_mul(d) <= n64 {
            if *budget == 0 {
                return Err(too_large(n));
            }
            *budget -= 1;
            if n64 % d == 0 {
                small.push(BigInt::from(d));
                if d != n64 / d {
                    large.push(BigInt::from(n64 / d));
                }
            }
            d += 1;
        }
    } else {
        // √n exceeds 2^32 > budget; the search would blow the budget anyway.
        return Err(too_large(n));
    }
    large.reverse();
    small.extend(large);
    Ok(small)
}

fn too_large(n: &BigInt) -> LinalgError {
    LinalgError::RootSearchTooLarge {
        value: n.to_string(),
        limit: MAX_DIVISOR_CANDIDATES,
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let (negative, mag) = match text.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, text),
            };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag == "1";
            match deg {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "x")?;
                    if deg > 1 {
                        write!(f, "^{deg}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.field)
    }
}
