use super::matrix::{Matrix, Vector};
use super::LinalgError;
use crate::fields::{FieldSpec, FieldValue};

/// Solution set `{x : Ax = b}` of a consistent linear system: one particular
/// point plus a basis of the homogeneous kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub particular: Vector,
    pub basis: Vec<Vector>,
}

impl AffineSubspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn is_point(&self) -> bool {
        self.basis.is_empty()
    }
}

/// A linear system in `n` unknowns kept in reduced row echelon form, so that
/// equations can be added one at a time and the state cloned for branching.
#[derive(Clone, Debug)]
pub struct EchelonSystem {
    field: FieldSpec,
    n: usize,
    // Each row: pivot column, coefficients (length n, 1 at pivot, 0 at other pivots), rhs.
    rows: Vec<(usize, Vec<FieldValue>, FieldValue)>,
}

impl EchelonSystem {
    pub fn new(field: FieldSpec, n: usize) -> Self {
        EchelonSystem {
            field,
            n,
            rows: Vec::new(),
        }
    }

    pub fn unknowns(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `coeffs · x = rhs`. Returns `false` if the system became
    /// inconsistent; the system is then left unchanged and should be dropped.
    pub fn add_equation(&mut self, coeffs: &[FieldValue], rhs: &FieldValue) -> bool {
        debug_assert_eq!(coeffs.len(), self.n);
        let mut c = coeffs.to_vec();
        let mut r = rhs.clone();
        for (pivot, row, row_rhs) in &self.rows {
            let factor = c[*pivot].clone();
            if factor.is_zero() {
                continue;
            }
            for (cj, rj) in c.iter_mut().zip(row) {
                if !rj.is_zero() {
                    *cj = &*cj - &(rj * &factor);
                }
            }
            r = &r - &(row_rhs * &factor);
        }
        let Some(pivot) = c.iter().position(|x| !x.is_zero()) else {
            return r.is_zero();
        };
        let inv = c[pivot].inv().expect("nonzero pivot");
        for cj in c.iter_mut() {
            *cj = &*cj * &inv;
        }
        r = &r * &inv;
        for (_, row, row_rhs) in &mut self.rows {
            let factor = row[pivot].clone();
            if factor.is_zero() {
                continue;
            }
            for (rj, cj) in row.iter_mut().zip(&c) {
                if !cj.is_zero() {
                    *rj = &*rj - &(cj * &factor);
                }
            }
            *row_rhs = &*row_rhs - &(&r * &factor);
        }
        self.rows.push((pivot, c, r));
        true
    }

    /// The current solution set; free variables are set to zero in the particular point.
    pub fn solution(&self) -> AffineSubspace {
        let zero = self.field.zero();
        let mut pivot_of = vec![None; self.n];
        for (idx, (pivot, _, _)) in self.rows.iter().enumerate() {
            pivot_of[*pivot] = Some(idx);
        }
        let mut particular = vec![zero.clone(); self.n];
        for (pivot, _, rhs) in &self.rows {
            particular[*pivot] = rhs.clone();
        }
        let mut basis = Vec::new();
        for free in (0..self.n).filter(|&j| pivot_of[j].is_none()) {
            let mut v = vec![zero.clone(); self.n];
            v[free] = self.field.one();
            for (pivot, row, _) in &self.rows {
                v[*pivot] = -&row[free];
            }
            basis.push(Vector::from_parts(self.field, v));
        }
        AffineSubspace {
            particular: Vector::from_parts(self.field, particular),
            basis,
        }
    }
}

/// Full solution set of `Ax = b`, or `None` when inconsistent.
pub fn solve_affine(a: &Matrix, b: &Vector) -> Result<Option<AffineSubspace>, LinalgError> {
    if a.rows() != b.len() {
        return Err(LinalgError::Dimension(format!(
            "{} equations but right-hand side of length {}",
            a.rows(),
            b.len()
        )));
    }
    if a.field() != b.field() {
        return Err(LinalgError::MixedFields {
            expected: a.field(),
            found: b.field(),
        });
    }
    let mut system = EchelonSystem::new(a.field(), a.cols());
    for i in 0..a.rows() {
        if !system.add_equation(a.row(i), &b[i]) {
            return Ok(None);
        }
    }
    Ok(Some(system.solution()))
}
