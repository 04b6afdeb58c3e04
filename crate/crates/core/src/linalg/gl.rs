use std::ops::Range;

use num_bigint::BigUint;

use super::matrix::Matrix;
use super::LinalgError;
use crate::fields::{FieldSpec, FieldValue, Prime};

/// Default cap on `p^(n²)`, the number of matrices a GL scan visits.
pub const DEFAULT_MAX_CELLS: u64 = 10_000_000;

/// |GL_n(F_p)| = ∏_{i<n} (p^n − p^i).
pub fn gl_order(n: usize, p: u64) -> BigUint {
    let pn = BigUint::from(p).pow(n as u32);
    (0..n)
        .map(|i| &pn - BigUint::from(p).pow(i as u32))
        .product()
}

/// Exhaustive scan of GL_n(GF(p)).
///
/// Matrices are indexed `0..p^(n²)` by reading the row-major entries as base-p
/// digits, first entry most significant; the scan yields the nonsingular ones
/// in index order. Index ranges can be scanned independently.
#[derive(Clone, Copy, Debug)]
pub struct GlScan {
    n: usize,
    prime: Prime,
    cells: u64,
}

impl GlScan {
    pub fn new(n: usize, field: FieldSpec, max_cells: u64) -> Result<Self, LinalgError> {
        let FieldSpec::PrimeField(prime) = field else {
            return Err(crate::fields::FieldError::InfiniteField.into());
        };
        if n == 0 {
            return Err(LinalgError::Empty);
        }
        let cells = BigUint::from(prime.get()).pow((n * n) as u32);
        match u64::try_from(&cells) {
            Ok(c) if c <= max_cells => Ok(GlScan { n, prime, cells: c }),
            _ => Err(LinalgError::ScanTooLarge {
                n,
                p: prime.get(),
                cells: cells.to_string(),
                cap: max_cells,
            }),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        FieldSpec::PrimeField(self.prime)
    }

    /// Number of candidate matrices, `p^(n²)`.
    pub fn cells(&self) -> u64 {
        self.cells
    }

    pub fn matrix_at(&self, mut index: u64) -> Matrix {
        let p = self.prime.get();
        let len = self.n * self.n;
        let mut data = vec![FieldValue::residue(0, self.prime); len];
        for slot in data.iter_mut().rev() {
            *slot = FieldValue::residue(index % p, self.prime);
            index /= p;
        }
        Matrix::from_flat(self.field(), self.n, self.n, data)
    }

    /// Nonsingular matrices with index in `range`.
    pub fn scan_range(&self, range: Range<u64>) -> impl Iterator<Item = Matrix> + '_ {
        let end = range.end.min(self.cells);
        (range.start..end)
            .map(|i| self.matrix_at(i))
            .filter(Matrix::is_nonsingular)
    }

    pub fn iter(&self) -> impl Iterator<Item = Matrix> + '_ {
        self.scan_range(0..self.cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn group_orders() {
        for (n, p, expected) in [(2, 2, 6u64), (2, 3, 48), (3, 2, 168)] {
            // (p^n - 1)(p^n - p)... by hand
            assert_eq!(gl_order(n, p), BigUint::from(expected));
            let scan = GlScan::new(n, gf(p), DEFAULT_MAX_CELLS).unwrap();
            assert_eq!(scan.iter().count() as u64, expected);
        }
    }

    #[test]
    fn scan_is_ordered_and_distinct() {
        let scan = GlScan::new(2, gf(3), DEFAULT_MAX_CELLS).unwrap();
        let all: Vec<Matrix> = scan.iter().collect();
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(all, sorted);
        assert_eq!(all[0], Matrix::from_i64_rows(gf(3), &[&[0, 1], &[1, 0]]).unwrap());
    }

    #[test]
    fn chunks_reassemble() {
        let scan = GlScan::new(3, gf(2), DEFAULT_MAX_CELLS).unwrap();
        let whole: Vec<Matrix> = scan.iter().collect();
        let mut pieces = Vec::new();
        for start in (0..scan.cells()).step_by(100) {
            pieces.extend(scan.scan_range(start..start + 100));
        }
        assert_eq!(whole, pieces);
    }

    #[test]
    fn caps() {
        assert!(matches!(
            GlScan::new(3, gf(7), DEFAULT_MAX_CELLS),
            Err(LinalgError::ScanTooLarge { .. })
        ));
        assert!(GlScan::new(2, FieldSpec::Rationals, DEFAULT_MAX_CELLS).is_err());
        assert!(GlScan::new(3, gf(7), 50_000_000).is_ok());
    }
}
