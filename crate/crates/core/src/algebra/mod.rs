//! Finite-dimensional algebras presented by structure constants.
//!
//! Indices are 0-based in the API; file formats and printed output use
//! 1-based indices.

pub mod catalog;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use num_rational::BigRational;
use thiserror::Error;

use crate::fields::{FieldError, FieldSpec, FieldValue};
use crate::linalg::{solve_affine, LinalgError, Matrix, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("algebra dimension must be at least 1")]
    ZeroDimension,
    #[error("expected {expected} structure constants, got {got}")]
    TensorSize { expected: usize, got: usize },
    #[error("vector of length {got} does not fit an algebra of dimension {dim}")]
    Dimension { dim: usize, got: usize },
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("not a weight homomorphism: equation ({i},{j}) fails")]
    NotAWeightHomomorphism { i: usize, j: usize },
    #[error("the zero vector is not a weight homomorphism")]
    TrivialHomomorphism,
}

/// An `n`-dimensional algebra with structure constants `γ[i][j][k]`:
/// `e_i·e_j = Σ_k γ[i][j][k]·e_k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Algebra {
    field: FieldSpec,
    n: usize,
    gamma: Vec<FieldValue>,
}

impl Algebra {
    /// `gamma` is the flattened tensor, index `(i·n + j)·n + k`.
    pub fn new(field: FieldSpec, n: usize, gamma: Vec<FieldValue>) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        if gamma.len() != n * n * n {
            return Err(AlgebraError::TensorSize {
                expected: n * n * n,
                got: gamma.len(),
            });
        }
        if let Some(bad) = gamma.iter().find(|g| g.spec() != field) {
            return Err(AlgebraError::FieldMismatch(field, bad.spec()));
        }
        Ok(Algebra { field, n, gamma })
    }

    pub fn zero(field: FieldSpec, n: usize) -> Self {
        assert!(n > 0, "algebra dimension must be at least 1");
        Algebra {
            field,
            n,
            gamma: vec![field.zero(); n * n * n],
        }
    }

    pub fn from_fn(
        field: FieldSpec,
        n: usize,
        mut f: impl FnMut(usize, usize, usize) -> FieldValue,
    ) -> Result<Self, AlgebraError> {
        let mut gamma = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    gamma.push(f(i, j, k));
                }
            }
        }
        Algebra::new(field, n, gamma)
    }

    /// Sparse construction from `(i, j, k, γ)` triples, 0-based, integer constants.
    pub fn from_triples(field: FieldSpec, n: usize, triples: &[(usize, usize, usize, i64)]) -> Self {
        let mut a = Algebra::zero(field, n);
        for &(i, j, k, c) in triples {
            a.gamma[(i * n + j) * n + k] = FieldValue::from_i64(c, field);
        }
        a
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[inline]
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &FieldValue {
        &self.gamma[(i * self.n + j) * self.n + k]
    }

    pub fn gamma_flat(&self) -> &[FieldValue] {
        &self.gamma
    }

    /// Coordinates of `e_i·e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> Vector {
        let start = (i * self.n + j) * self.n;
        Vector::from_parts(self.field, self.gamma[start..start + self.n].to_vec())
    }

    /// The matrix `A_i` with `A_i[j][k] = γ[i][j][k]`. Etherington solutions
    /// are the vectors `v` with `A_i·v = v_i·v` for every `i`.
    pub fn slice_matrix(&self, i: usize) -> Matrix {
        let n = self.n;
        let start = i * n * n;
        Matrix::from_flat(self.field, n, n, self.gamma[start..start + n * n].to_vec())
    }

    fn check_vector(&self, x: &Vector) -> Result<(), AlgebraError> {
        if x.len() != self.n {
            return Err(AlgebraError::Dimension {
                dim: self.n,
                got: x.len(),
            });
        }
        if x.field() != self.field {
            return Err(AlgebraError::FieldMismatch(self.field, x.field()));
        }
        Ok(())
    }

    /// `z_k = Σ_{i,j} x_i·y_j·γ[i][j][k]`.
    pub fn multiply(&self, x: &Vector, y: &Vector) -> Result<Vector, AlgebraError> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(self.multiply_unchecked(x, y))
    }

    pub(crate) fn multiply_unchecked(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.n;
        let mut z = vec![self.field.zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for (k, zk) in z.iter_mut().enumerate() {
                    let g = self.gamma(i, j, k);
                    if !g.is_zero() {
                        *zk = &*zk + &(&c * g);
                    }
                }
            }
        }
        Vector::from_parts(self.field, z)
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (i + 1..n).all(|j| (0..n).all(|k| self.gamma(i, j, k) == self.gamma(j, i, k))))
    }

    fn slice_sum(&self, i: usize, j: usize) -> FieldValue {
        let start = (i * self.n + j) * self.n;
        self.gamma[start..start + self.n]
            .iter()
            .fold(self.field.zero(), |acc, g| &acc + g)
    }

    /// Every product `e_i·e_j` has coefficient sum 1.
    pub fn is_semi_natural(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.slice_sum(i, j).is_one()))
    }

    /// The common coefficient sum `α` of all products `e_i·e_j`, if there is one.
    /// For `α ≠ 0` this is exactly the condition that `(α, …, α)` solves the
    /// Etherington system.
    pub fn constant_structure_sum(&self) -> Option<FieldValue> {
        let first = self.slice_sum(0, 0);
        (0..self.n)
            .all(|i| (0..self.n).all(|j| self.slice_sum(i, j) == first))
            .then_some(first)
    }

    /// `γ[i][j][k] == γ[i][j'][k]` for all indices: the product `e_i·e_j`
    /// does not depend on `j`.
    pub fn has_constant_right_factor_products(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (1..n).all(|j| (0..n).all(|k| self.gamma(i, j, k) == self.gamma(i, 0, k))))
    }

    /// Structure constants in a new basis.
    ///
    /// Row `i` of `change.new_in_old()` holds the coordinates of the new basis
    /// vector `g_i` in the current basis. With `P` that matrix,
    /// `ξ[i][j][q] = Σ_{k,l,m} P[i][k]·P[j][l]·γ[k][l][m]·P⁻¹[m][q]`.
    pub fn change_basis(&self, change: &BasisChange) -> Result<Algebra, AlgebraError> {
        let p = change.new_in_old();
        if p.rows() != self.n {
            return Err(AlgebraError::Dimension {
                dim: self.n,
                got: p.rows(),
            });
        }
        if p.field() != self.field {
            return Err(AlgebraError::FieldMismatch(self.field, p.field()));
        }
        let p_inv = change.old_in_new();
        let n = self.n;
        let mut gamma = Vec::with_capacity(n * n * n);
        for i in 0..n {
            let gi = p.row_vector(i);
            for j in 0..n {
                let gj = p.row_vector(j);
                let prod = self.multiply_unchecked(&gi, &gj);
                for q in 0..n {
                    let c = (0..n).fold(self.field.zero(), |acc, m| &acc + &(&prod[m] * p_inv.get(m, q)));
                    gamma.push(c);
                }
            }
        }
        Algebra::new(self.field, n, gamma)
    }

    /// First `(i, j)` (0-based) where `Σ_k γ[i][j][k]·w_k ≠ w_i·w_j`.
    pub fn etherington_violation(&self, w: &Vector) -> Option<(usize, usize)> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let lhs = (0..n).fold(self.field.zero(), |acc, k| {
                    let g = self.gamma(i, j, k);
                    if g.is_zero() {
                        acc
                    } else {
                        &acc + &(g * &w[k])
                    }
                });
                if lhs != &w[i] * &w[j] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// `w ≠ 0` and `w` satisfies the Etherington system, i.e. `e_i ↦ w_i`
    /// extends to a nonzero algebra homomorphism.
    pub fn is_weight_homomorphism(&self, w: &Vector) -> bool {
        w.len() == self.n
            && w.field() == self.field
            && !w.is_zero()
            && self.etherington_violation(w).is_none()
    }

    /// Every product of two kernel basis vectors vanishes, so the kernel
    /// squares to zero.
    pub fn kernel_square_zero(&self, w: &WeightHomomorphism) -> bool {
        let basis = w.kernel_basis();
        basis.iter().all(|a| basis.iter().all(|b| self.multiply_unchecked(a, b).is_zero()))
    }

    /// A kernel vector `u ≠ 0` with `u·u = u`, if one is found.
    ///
    /// Kernel basis vectors are tried first. Over GF(p) with at most
    /// `max_scan` kernel vectors, the whole kernel is then scanned, which makes
    /// the answer definitive. Over ℚ an absent result only means no witness
    /// was found among the basis vectors.
    pub fn kernel_idempotent_witness(&self, w: &WeightHomomorphism, max_scan: u64) -> Option<Vector> {
        let is_idempotent = |u: &Vector| !u.is_zero() && &self.multiply_unchecked(u, u) == u;
        let basis = w.kernel_basis();
        if let Some(u) = basis.iter().find(|u| is_idempotent(u)) {
            return Some(u.clone());
        }
        let p = self.field.modulus()?;
        let dim = basis.len() as u32;
        let count = p.checked_pow(dim).filter(|&c| c <= max_scan)?;
        let digits: Vec<FieldValue> = (0..p as i64).map(|x| FieldValue::from_i64(x, self.field)).collect();
        (1..count).find_map(|mut index| {
            let mut u = Vector::zeros(self.field, self.n);
            for b in basis.iter().rev() {
                let c = &digits[(index % p) as usize];
                index /= p;
                if !c.is_zero() {
                    u = u.add(&b.scale(c));
                }
            }
            is_idempotent(&u).then_some(u)
        })
    }

    /// `A × B`: basis `(e_i, 0)` followed by `(0, f_j)`, cross products zero.
    pub fn direct_product(&self, other: &Algebra) -> Result<Algebra, AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch(self.field, other.field));
        }
        let (na, nb) = (self.n, other.n);
        let zero = self.field.zero();
        Algebra::from_fn(self.field, na + nb, |i, j, k| {
            if i < na && j < na && k < na {
                self.gamma(i, j, k).clone()
            } else if i >= na && j >= na && k >= na {
                other.gamma(i - na, j - na, k - na).clone()
            } else {
                zero.clone()
            }
        })
    }

    /// The same structure constants read in another field (ℚ → GF(p) reduces
    /// numerators and inverts denominators).
    pub fn map_field(&self, field: FieldSpec) -> Result<Algebra, AlgebraError> {
        let gamma = self
            .gamma
            .iter()
            .map(|g| match g {
                FieldValue::Rational(q) => FieldValue::from_rational(q, field),
                FieldValue::Residue { value, .. } => Ok(FieldValue::from_i64(*value as i64, field)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Algebra::new(field, self.n, gamma)
    }

    /// Seeded random algebra.
    ///
    /// With `baric` set, each product `e_i·e_j` gets `n − 1` random
    /// coefficients and a last one chosen so the coefficients sum to 1; the
    /// result is semi-natural and therefore has the weight homomorphism
    /// `(1, …, 1)`.
    pub fn random(n: usize, field: FieldSpec, seed: u64, baric: bool) -> Algebra {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Algebra::random_with(&mut rng, n, field, baric)
    }

    pub fn random_with<R: Rng>(rng: &mut R, n: usize, field: FieldSpec, baric: bool) -> Algebra {
        assert!(n > 0, "algebra dimension must be at least 1");
        let mut gamma = Vec::with_capacity(n * n * n);
        for _ in 0..n * n {
            let mut sum = field.zero();
            for k in 0..n {
                let g = if baric && k == n - 1 {
                    &field.one() - &sum
                } else {
                    random_scalar(rng, field)
                };
                sum = &sum + &g;
                gamma.push(g);
            }
        }
        Algebra { field, n, gamma }
    }
}

/// Small random scalar: residues are uniform, rationals are `a/b` with
/// `|a| ≤ 2`, `b ∈ {1, 2}` and biased towards integers.
pub fn random_scalar<R: Rng>(rng: &mut R, field: FieldSpec) -> FieldValue {
    match field {
        FieldSpec::PrimeField(p) => FieldValue::residue(rng.random_range(0..p.get()), p),
        FieldSpec::Rationals => {
            let num = rng.random_range(-2i64..=2);
            let den = if rng.random_bool(0.25) { 2 } else { 1 };
            FieldValue::Rational(BigRational::new(num.into(), den.into()))
        }
    }
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Algebra(dim {}, {}; ", self.n, self.field)?;
        let mut first = true;
        for i in 0..self.n {
            for j in 0..self.n {
                let prod = self.basis_product(i, j);
                if prod.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "e{}e{}={}", i + 1, j + 1, prod)?;
            }
        }
        write!(f, ")")
    }
}

/// A nonzero `w` with `Σ_k γ[i][j][k]·w_k = w_i·w_j`, stored by its values
/// `w(e_i)` on the basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightHomomorphism {
    coords: Vector,
}

impl WeightHomomorphism {
    pub fn new(algebra: &Algebra, coords: Vector) -> Result<Self, AlgebraError> {
        algebra.check_vector(&coords)?;
        if coords.is_zero() {
            return Err(AlgebraError::TrivialHomomorphism);
        }
        if let Some((i, j)) = algebra.etherington_violation(&coords) {
            return Err(AlgebraError::NotAWeightHomomorphism { i: i + 1, j: j + 1 });
        }
        Ok(WeightHomomorphism { coords })
    }

    pub(crate) fn new_unchecked(coords: Vector) -> Self {
        WeightHomomorphism { coords }
    }

    pub fn coords(&self) -> &Vector {
        &self.coords
    }

    pub fn into_coords(self) -> Vector {
        self.coords
    }

    pub fn apply(&self, x: &Vector) -> FieldValue {
        self.coords.dot(x)
    }

    /// A basis (`n − 1` vectors) of `{x : Σ w_i·x_i = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let field = self.coords.field();
        let row = Matrix::from_flat(field, 1, self.coords.len(), self.coords.entries().to_vec());
        solve_affine(&row, &Vector::zeros(field, 1))
            .expect("dimensions agree")
            .expect("homogeneous system is consistent")
            .basis
    }
}

/// A change of basis. Row `i` of the stored matrix gives the coordinates of
/// the `i`-th new basis vector in the current basis (the "transition matrix
/// from the current basis to the new one"). The inverse is cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange {
    new_in_old: Matrix,
    old_in_new: Matrix,
}

impl BasisChange {
    pub fn new(new_in_old: Matrix) -> Result<Self, AlgebraError> {
        let old_in_new = new_in_old.inverse()?;
        Ok(BasisChange {
            new_in_old,
            old_in_new,
        })
    }

    pub fn new_in_old(&self) -> &Matrix {
        &self.new_in_old
    }

    pub fn old_in_new(&self) -> &Matrix {
        &self.old_in_new
    }

    /// The change that undoes this one, expressed in the new frame.
    pub fn inverse(&self) -> BasisChange {
        BasisChange {
            new_in_old: self.old_in_new.clone(),
            old_in_new: self.new_in_old.clone(),
        }
    }
}
