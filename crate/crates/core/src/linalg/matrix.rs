use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::Polynomial;
use super::LinalgError;
use crate::fields::{FieldSpec, FieldValue};

/// A column of field values, all from one field.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    field: FieldSpec,
    entries: Vec<FieldValue>,
}

impl Vector {
    pub fn new(field: FieldSpec, entries: Vec<FieldValue>) -> Result<Self, LinalgError> {
        if entries.is_empty() {
            return Err(LinalgError::Empty);
        }
        check_fields(field, &entries)?;
        Ok(Vector { field, entries })
    }

    pub fn from_i64s(field: FieldSpec, entries: &[i64]) -> Result<Self, LinalgError> {
        Vector::new(
            field,
            entries.iter().map(|&x| FieldValue::from_i64(x, field)).collect(),
        )
    }

    pub fn zeros(field: FieldSpec, len: usize) -> Self {
        Vector {
            field,
            entries: vec![field.zero(); len],
        }
    }

    pub fn constant(field: FieldSpec, len: usize, value: FieldValue) -> Self {
        assert_eq!(value.spec(), field);
        Vector {
            field,
            entries: vec![value; len],
        }
    }

    /// The i-th standard basis vector.
    pub fn unit(field: FieldSpec, len: usize, i: usize) -> Self {
        let mut v = Vector::zeros(field, len);
        v.entries[i] = field.one();
        v
    }

    pub(crate) fn from_parts(field: FieldSpec, entries: Vec<FieldValue>) -> Self {
        debug_assert!(entries.iter().all(|x| x.spec() == field));
        Vector { field, entries }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[FieldValue] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<FieldValue> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldValue::is_zero)
    }

    pub fn dot(&self, other: &Vector) -> FieldValue {
        assert_eq!(self.len(), other.len());
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
    }

    pub fn scale(&self, c: &FieldValue) -> Vector {
        Vector::from_parts(self.field, self.entries.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len());
        Vector::from_parts(
            self.field,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Sum of the entries.
    pub fn sum(&self) -> FieldValue {
        self.entries
            .iter()
            .fold(self.field.zero(), |acc, x| &acc + x)
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = FieldValue;
    fn index(&self, i: usize) -> &FieldValue {
        &self.entries[i]
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.field)
    }
}

fn check_fields(field: FieldSpec, entries: &[FieldValue]) -> Result<(), LinalgError> {
    match entries.iter().find(|x| x.spec() != field) {
        Some(x) => Err(LinalgError::MixedFields {
            expected: field,
            found: x.spec(),
        }),
        None => Ok(()),
    }
}

/// Dense row-major matrix over a single field.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldValue>,
}

impl Matrix {
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<FieldValue>>) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 {
            return Err(LinalgError::Empty);
        }
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(LinalgError::Dimension("ragged rows".into()));
        }
        let data: Vec<FieldValue> = rows.into_iter().flatten().collect();
        check_fields(field, &data)?;
        Ok(Matrix {
            field,
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[&[i64]]) -> Result<Self, LinalgError> {
        Matrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&x| FieldValue::from_i64(x, field)).collect())
                .collect(),
        )
    }

    pub(crate) fn from_flat(field: FieldSpec, rows: usize, cols: usize, data: Vec<FieldValue>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix::from_flat(field, rows, cols, vec![field.zero(); rows * cols])
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn diagonal(v: &Vector) -> Self {
        let n = v.len();
        let mut m = Matrix::zeros(v.field(), n, n);
        for i in 0..n {
            m.data[i * n + i] = v[i].clone();
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldValue {
        &self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, value: FieldValue) {
        debug_assert_eq!(value.spec(), self.field);
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[FieldValue] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> Vector {
        Vector::from_parts(self.field, self.row(i).to_vec())
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldValue>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[FieldValue] {
        &self.data
    }

    fn require_square(&self) -> Result<usize, LinalgError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix::from_flat(self.field, self.cols, self.rows, data)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::MixedFields {
                expected: self.field,
                found: other.field,
            });
        }
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.field.zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc = &acc + &(a * other.get(k, j));
                    }
                }
                data.push(acc);
            }
        }
        Ok(Matrix::from_flat(self.field, self.rows, other.cols, data))
    }

    pub fn mul_vec(&self, v: &Vector) -> Result<Vector, LinalgError> {
        if v.len() != self.cols || v.field() != self.field {
            return Err(LinalgError::Dimension(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok(Vector::from_parts(
            self.field,
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(v.entries())
                        .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
                })
                .collect(),
        ))
    }

    /// Determinant: fraction-free Bareiss elimination over ℚ (after clearing
    /// row denominators), plain Gaussian elimination over GF(p).
    pub fn determinant(&self) -> Result<FieldValue, LinalgError> {
        self.require_square()?;
        Ok(match self.field {
            FieldSpec::Rationals => self.det_bareiss(),
            FieldSpec::PrimeField(_) => self.det_gauss(),
        })
    }

    fn det_gauss(&self) -> FieldValue {
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = self.field.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return self.field.zero();
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            let pivot = a[col * n + col].clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let factor = &a[r * n + col] * &inv;
                for j in col..n {
                    let t = &a[col * n + j] * &factor;
                    a[r * n + j] = &a[r * n + j] - &t;
                }
            }
        }
        det
    }

    fn det_bareiss(&self) -> FieldValue {
        let n = self.rows;
        // Scale each row to integers; det(A) = det(B) / prod(scale).
        let mut scale = BigInt::one();
        let mut a: Vec<BigInt> = Vec::with_capacity(n * n);
        for i in 0..n {
            let row: Vec<&BigRational> = self
                .row(i)
                .iter()
                .map(|x| x.as_rational().expect("rational entry"))
                .collect();
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            for q in row {
                a.push(q.numer() * (&l / q.denom()));
            }
            scale *= l;
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                let Some(piv) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return self.field.zero();
                };
                for j in 0..n {
                    a.swap(piv * n + j, k * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        let det = sign * &a[n * n - 1];
        FieldValue::Rational(BigRational::new(det, scale))
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        let n = self.require_square()?;
        let mut a = self.data.clone();
        let mut inv = Matrix::identity(self.field, n).data;
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r * n + col].is_zero())
                .ok_or(LinalgError::Singular)?;
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                    inv.swap(piv * n + j, col * n + j);
                }
            }
            let pinv = a[col * n + col].inv()?;
            for j in 0..n {
                a[col * n + j] = &a[col * n + j] * &pinv;
                inv[col * n + j] = &inv[col * n + j] * &pinv;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let factor = a[r * n + col].clone();
                for j in 0..n {
                    let t = &a[col * n + j] * &factor;
                    a[r * n + j] = &a[r * n + j] - &t;
                    let t = &inv[col * n + j] * &factor;
                    inv[r * n + j] = &inv[r * n + j] - &t;
                }
            }
        }
        Ok(Matrix::from_flat(self.field, n, n, inv))
    }

    pub fn is_nonsingular(&self) -> bool {
        self.determinant().is_ok_and(|d| !d.is_zero())
    }

    /// Coefficients of det(λI − M), computed with Berkowitz's division-free
    /// recurrence so it is valid in every characteristic.
    pub fn char_poly(&self) -> Result<Polynomial, LinalgError> {
        let n = self.require_square()?;
        let field = self.field;
        // Highest degree first while accumulating.
        let mut v = vec![field.one()];
        for r in 0..n {
            // Leading principal block is r x r; row/col r border it.
            let mut toeplitz = Vec::with_capacity(r + 2);
            toeplitz.push(field.one());
            toeplitz.push(-self.get(r, r));
            // c_k = A_r^k * C, starting from C = column r above the diagonal.
            let mut c: Vec<FieldValue> = (0..r).map(|i| self.get(i, r).clone()).collect();
            for _ in 0..r {
                let rc = (0..r).fold(field.zero(), |acc, j| &acc + &(self.get(r, j) * &c[j]));
                toeplitz.push(-rc);
                c = (0..r)
                    .map(|i| (0..r).fold(field.zero(), |acc, j| &acc + &(self.get(i, j) * &c[j])))
                    .collect();
            }
            let mut next = Vec::with_capacity(r + 2);
            for i in 0..r + 2 {
                let mut acc = field.zero();
                for (j, vj) in v.iter().enumerate().take(i + 1) {
                    acc = &acc + &(&toeplitz[i - j] * vj);
                }
                next.push(acc);
            }
            v = next;
        }
        v.reverse();
        Ok(Polynomial::new(field, v))
    }

    pub fn row_sums(&self) -> Vector {
        Vector::from_parts(
            self.field,
            (0..self.rows)
                .map(|i| self.row(i).iter().fold(self.field.zero(), |acc, x| &acc + x))
                .collect(),
        )
    }

    pub fn column_sums(&self) -> Vector {
        Vector::from_parts(
            self.field,
            (0..self.cols)
                .map(|j| (0..self.rows).fold(self.field.zero(), |acc, i| &acc + self.get(i, j)))
                .collect(),
        )
    }

    /// Every row sums to 1.
    pub fn is_row_stochastic(&self) -> bool {
        (0..self.rows).all(|i| {
            self.row(i)
                .iter()
                .fold(self.field.zero(), |acc, x| &acc + x)
                .is_one()
        })
    }

    /// Every column sums to 1.
    pub fn is_column_stochastic(&self) -> bool {
        self.column_sums().entries().iter().all(FieldValue::is_one)
    }

    /// The matrix with every entry mapped into `field` (ℚ → GF(p) reduction).
    pub fn map_field(&self, field: FieldSpec) -> Result<Matrix, LinalgError> {
        let data = self
            .data
            .iter()
            .map(|x| match x {
                FieldValue::Rational(q) => FieldValue::from_rational(q, field),
                FieldValue::Residue { value, .. } => {
                    Ok(FieldValue::from_bigint(&BigInt::from(*value), field))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_flat(field, self.rows, self.cols, data))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "] over {}", self.field)
    }
}

/// A nonsingular square matrix whose row sums are `alpha`.
///
/// With `k` the first index where `alpha[k] != 0`: row `k` is `alpha[k]·e_k`
/// and every other row `i` is `e_i + (alpha[i] − 1)·e_k`. The result is the
/// identity with column `k` replaced, so its determinant is `alpha[k]`.
pub fn matrix_with_row_sums(alpha: &Vector) -> Result<Matrix, LinalgError> {
    let field = alpha.field();
    let n = alpha.len();
    let k = (0..n)
        .find(|&i| !alpha[i].is_zero())
        .ok_or(LinalgError::ZeroRowSums)?;
    let mut m = Matrix::identity(field, n);
    for i in 0..n {
        if i == k {
            m.set(k, k, alpha[k].clone());
        } else {
            m.set(i, k, &alpha[i] - &field.one());
        }
    }
    debug_assert!(!m.determinant().expect("square").is_zero());
    Ok(m)
}
