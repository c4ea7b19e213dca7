//! Dense state vectors over composite qudit registers.
//!
//! A register is a list of subsystem dimensions. Composite indices are
//! mixed-radix with subsystem 0 as the most significant digit, so a register
//! `[8, 2]` stores `|m⟩|n⟩` at index `2*m + n`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;

use num_complex::Complex64;
use num_traits::Zero;

use crate::TOLERANCE;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StateError {
    #[error("register has no subsystems")]
    EmptyRegister,
    #[error("subsystem dimension must be at least 1")]
    ZeroDimension,
    #[error("amplitude count {found} does not match register size {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subsystem {index} out of range for a register of {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },
    #[error("subsystem {0} listed more than once")]
    DuplicateSubsystem(usize),
    #[error("basis digit {digit} out of range for a subsystem of dimension {dim}")]
    DigitOutOfRange { digit: usize, dim: usize },
    #[error("matrix entries do not form a square matrix")]
    NotSquare,
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("fixed vectors are linearly dependent")]
    LinearlyDependent,
    #[error("fixed vectors are not orthonormal (max Gram deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("{count} fixed vectors exceed dimension {dim}")]
    TooManyVectors { count: usize, dim: usize },
    #[error("weight {weight:e} lies outside the retained levels of subsystem {subsystem}")]
    Leakage { subsystem: usize, weight: f64 },
    #[error("state does not factor across subsystem {0}")]
    NotProduct(usize),
}

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    order: usize,
    entries: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            entries: vec![ZERO; order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_diagonal(&vec![ONE; order])
    }

    pub fn from_diagonal(diagonal: &[Complex64]) -> Self {
        let mut m = Self::zeros(diagonal.len());
        for (i, &v) in diagonal.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Builds a matrix from row-major entries; the length must be a perfect square.
    pub fn from_rows(entries: Vec<Complex64>) -> Result<Self, StateError> {
        let order = isqrt(entries.len());
        if order * order != entries.len() {
            return Err(StateError::NotSquare);
        }
        Ok(Self { order, entries })
    }

    /// Matrix whose rows are the complex conjugates of `rows`, i.e. `Σ_j |j⟩⟨rows[j]|`.
    pub fn from_bras(rows: &[&[Complex64]]) -> Result<Self, StateError> {
        let order = rows.len();
        let mut m = Self::zeros(order);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(StateError::DimensionMismatch {
                    expected: order,
                    found: row.len(),
                });
            }
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, v.conj());
            }
        }
        Ok(m)
    }

    /// Permutation matrix sending basis state `i` to `image[i]`.
    pub fn permutation(image: &[usize]) -> Result<Self, StateError> {
        let n = image.len();
        let mut m = Self::zeros(n);
        let mut seen = vec![false; n];
        for (i, &j) in image.iter().enumerate() {
            if j >= n || seen[j] {
                return Err(StateError::NotUnitary(1.0));
            }
            seen[j] = true;
            m.set(j, i, ONE);
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.order + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.order + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.order).map(|r| self.get(r, col)).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.order).map(|i| self.get(i, i)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.order);
        for r in 0..self.order {
            for c in 0..self.order {
                m.set(c, r, self.get(r, c).conj());
            }
        }
        m
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Self {
        let n = self.order * other.order;
        let mut m = Self::zeros(n);
        for r1 in 0..self.order {
            for c1 in 0..self.order {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.order {
                    for c2 in 0..other.order {
                        m.set(
                            r1 * other.order + r2,
                            c1 * other.order + c2,
                            a * other.get(r2, c2),
                        );
                    }
                }
            }
        }
        m
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_deviation(&self, other: &Matrix) -> f64 {
        assert_eq!(self.order, other.order, "matrix orders differ");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation of `M·M†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        (self * &self.adjoint()).max_deviation(&Self::identity(self.order))
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        self.max_deviation(&self.adjoint()) <= tolerance
    }

    pub fn is_diagonal(&self, tolerance: f64) -> bool {
        (0..self.order)
            .all(|r| (0..self.order).all(|c| r == c || self.get(r, c).norm() <= tolerance))
    }

    pub fn apply_to_vector(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(
            v.len(),
            self.order,
            "vector length differs from matrix order"
        );
        (0..self.order)
            .map(|r| (0..self.order).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    fn nonzeros(&self) -> Vec<(usize, usize, Complex64)> {
        let mut out = Vec::new();
        for r in 0..self.order {
            for c in 0..self.order {
                let v = self.get(r, c);
                if !v.is_zero() {
                    out.push((r, c, v));
                }
            }
        }
        out
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.order, rhs.order, "matrix orders differ");
        let n = self.order;
        let mut m = Matrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    m.entries[r * n + c] += a * rhs.get(k, c);
                }
            }
        }
        m
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{})", self.order, self.order)?;
        for r in 0..self.order {
            for c in 0..self.order {
                let v = self.get(r, c);
                write!(f, " {:+.4}{:+.4}i", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A unitary matrix, optionally bound to the register subsystems it acts on.
///
/// Without a target the matrix acts on the whole register.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    matrix: Matrix,
    target: Option<Vec<usize>>,
}

impl Unitary {
    pub fn new(matrix: Matrix) -> Result<Self, StateError> {
        let defect = matrix.unitarity_defect();
        if defect > TOLERANCE {
            return Err(StateError::NotUnitary(defect));
        }
        Ok(Self {
            matrix,
            target: None,
        })
    }

    /// Wraps a matrix that is unitary by construction.
    pub(crate) fn from_matrix_unchecked(matrix: Matrix) -> Self {
        debug_assert!(matrix.unitarity_defect() <= TOLERANCE);
        Self {
            matrix,
            target: None,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_matrix_unchecked(Matrix::identity(dim))
    }

    /// Binds the unitary to the given subsystems (first listed = most significant).
    pub fn on(mut self, target: impl Into<Vec<usize>>) -> Self {
        self.target = Some(target.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.matrix.order()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn target(&self) -> Option<&[usize]> {
        self.target.as_deref()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            target: self.target.clone(),
        }
    }

    /// `self ⊗ other`, unbound.
    pub fn kron(&self, other: &Unitary) -> Self {
        Self::from_matrix_unchecked(self.matrix.kron(&other.matrix))
    }

    /// The product `self · first` (apply `first`, then `self`), unbound.
    pub fn after(&self, first: &Unitary) -> Self {
        Self::from_matrix_unchecked(&self.matrix * &first.matrix)
    }

    pub fn apply(&self, state: &PureState) -> Result<PureState, StateError> {
        apply(self, state)
    }
}

/// Applies `u` to `s`, embedding it as the identity on untouched subsystems.
pub fn apply(u: &Unitary, s: &PureState) -> Result<PureState, StateError> {
    match u.target() {
        Some(target) => apply_matrix(s, u.matrix(), target),
        None => {
            if u.dim() != s.len() {
                return Err(StateError::DimensionMismatch {
                    expected: s.len(),
                    found: u.dim(),
                });
            }
            Ok(PureState {
                dims: s.dims.clone(),
                amps: u.matrix().apply_to_vector(&s.amps),
            })
        }
    }
}

/// Applies an arbitrary (not necessarily unitary) matrix to the listed subsystems.
///
/// The result is not renormalized; see [`PureState::normalized`].
pub fn apply_matrix(
    s: &PureState,
    matrix: &Matrix,
    target: &[usize],
) -> Result<PureState, StateError> {
    s.check_subsystems(target)?;
    let target_dim: usize = target.iter().map(|&t| s.dims[t]).product();
    if target_dim != matrix.order() {
        return Err(StateError::DimensionMismatch {
            expected: target_dim,
            found: matrix.order(),
        });
    }
    let rest: Vec<usize> = (0..s.dims.len()).filter(|i| !target.contains(i)).collect();
    let strides = s.strides();
    let offsets = composite_offsets(&s.dims, &strides, target);
    let bases = composite_offsets(&s.dims, &strides, &rest);
    let nonzeros = matrix.nonzeros();

    let mut out = vec![ZERO; s.amps.len()];
    for &base in &bases {
        for &(r, c, v) in &nonzeros {
            out[base + offsets[r]] += v * s.amps[base + offsets[c]];
        }
    }
    Ok(PureState {
        dims: s.dims.clone(),
        amps: out,
    })
}

/// Complex amplitude vector over a composite register.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Wraps amplitudes without normalizing them.
    pub fn new(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self, StateError> {
        if dims.is_empty() {
            return Err(StateError::EmptyRegister);
        }
        if dims.contains(&0) {
            return Err(StateError::ZeroDimension);
        }
        let expected: usize = dims.iter().product();
        if amps.len() != expected {
            return Err(StateError::LengthMismatch {
                expected,
                found: amps.len(),
            });
        }
        Ok(Self { dims, amps })
    }

    /// Wraps and normalizes amplitudes.
    pub fn from_amplitudes(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self, StateError> {
        let (state, _) = Self::new(dims, amps)?.normalized()?;
        Ok(state)
    }

    /// A normalized single-qudit state.
    pub fn qudit(amps: Vec<Complex64>) -> Result<Self, StateError> {
        Self::from_amplitudes(vec![amps.len()], amps)
    }

    /// Single-qudit state from real amplitudes, normalized.
    pub fn qudit_real(amps: &[f64]) -> Result<Self, StateError> {
        Self::qudit(amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// The computational basis state with the given digit per subsystem.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self, StateError> {
        if digits.len() != dims.len() {
            return Err(StateError::DimensionMismatch {
                expected: dims.len(),
                found: digits.len(),
            });
        }
        let mut index = 0;
        for (&digit, &dim) in digits.iter().zip(&dims) {
            if digit >= dim {
                return Err(StateError::DigitOutOfRange { digit, dim });
            }
            index = index * dim + digit;
        }
        Self::basis_index(dims, index)
    }

    /// The computational basis state at a composite index.
    pub fn basis_index(dims: Vec<usize>, index: usize) -> Result<Self, StateError> {
        let len: usize = dims.iter().product();
        if index >= len {
            return Err(StateError::DigitOutOfRange {
                digit: index,
                dim: len,
            });
        }
        let mut amps = vec![ZERO; len];
        amps[index] = ONE;
        Self::new(dims, amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, digits: &[usize]) -> Complex64 {
        let index = digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&d, &dim)| acc * dim + d);
        self.amps[index]
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn subsystem_count(&self) -> usize {
        self.dims.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Scales the state to unit norm and returns the squared norm it had.
    pub fn normalize(&mut self) -> Result<f64, StateError> {
        let norm_sqr = self.norm_sqr();
        if norm_sqr <= f64::MIN_POSITIVE {
            return Err(StateError::ZeroNorm);
        }
        let scale = 1.0 / libm::sqrt(norm_sqr);
        for a in &mut self.amps {
            *a *= scale;
        }
        Ok(norm_sqr)
    }

    pub fn normalized(mut self) -> Result<(Self, f64), StateError> {
        let norm_sqr = self.normalize()?;
        Ok((self, norm_sqr))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        tensor(self, other)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64, StateError> {
        if self.dims != other.dims {
            return Err(StateError::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Reinterprets the amplitudes under a different register shape of the same size.
    pub fn reshape(&self, dims: Vec<usize>) -> Result<Self, StateError> {
        Self::new(dims, self.amps.clone())
    }

    /// Reorders subsystems: subsystem `i` of the result is subsystem `order[i]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Result<Self, StateError> {
        if order.len() != self.dims.len() {
            return Err(StateError::DimensionMismatch {
                expected: self.dims.len(),
                found: order.len(),
            });
        }
        self.check_subsystems(order)?;
        let new_dims: Vec<usize> = order.iter().map(|&o| self.dims[o]).collect();
        let old_strides = self.strides();
        let mut amps = vec![ZERO; self.amps.len()];
        let mut digits = vec![0usize; new_dims.len()];
        for slot in amps.iter_mut() {
            let old_index: usize = digits
                .iter()
                .zip(order)
                .map(|(&d, &o)| d * old_strides[o])
                .sum();
            *slot = self.amps[old_index];
            increment(&mut digits, &new_dims);
        }
        Self::new(new_dims, amps)
    }

    /// Contracts the listed subsystems with `⟨vector|`, leaving an unnormalized
    /// state on the remaining subsystems in their original order.
    pub fn project(&self, subsystems: &[usize], vector: &PureState) -> Result<Self, StateError> {
        self.check_subsystems(subsystems)?;
        let sub_dim: usize = subsystems.iter().map(|&t| self.dims[t]).product();
        if vector.len() != sub_dim {
            return Err(StateError::DimensionMismatch {
                expected: sub_dim,
                found: vector.len(),
            });
        }
        let rest: Vec<usize> = (0..self.dims.len())
            .filter(|i| !subsystems.contains(i))
            .collect();
        if rest.is_empty() {
            return Err(StateError::EmptyRegister);
        }
        let strides = self.strides();
        let offsets = composite_offsets(&self.dims, &strides, subsystems);
        let bases = composite_offsets(&self.dims, &strides, &rest);
        let amps = bases
            .iter()
            .map(|&base| {
                offsets
                    .iter()
                    .zip(&vector.amps)
                    .map(|(&off, v)| v.conj() * self.amps[base + off])
                    .sum()
            })
            .collect();
        Self::new(rest.iter().map(|&r| self.dims[r]).collect(), amps)
    }

    /// Drops all levels `>= levels` of one subsystem.
    ///
    /// Fails if the dropped levels carry more than [`TOLERANCE`] of weight.
    pub fn restrict(&self, subsystem: usize, levels: usize) -> Result<Self, StateError> {
        self.check_subsystems(&[subsystem])?;
        let dim = self.dims[subsystem];
        if levels == 0 || levels > dim {
            return Err(StateError::DimensionMismatch {
                expected: dim,
                found: levels,
            });
        }
        let stride = self.strides()[subsystem];
        let mut leaked = 0.0;
        let mut amps = Vec::with_capacity(self.amps.len() / dim * levels);
        for (index, a) in self.amps.iter().enumerate() {
            if (index / stride) % dim < levels {
                amps.push(*a);
            } else {
                leaked += a.norm_sqr();
            }
        }
        if leaked > TOLERANCE {
            return Err(StateError::Leakage {
                subsystem,
                weight: leaked,
            });
        }
        let mut dims = self.dims.clone();
        dims[subsystem] = levels;
        Self::new(dims, amps)
    }

    /// Splits the state as `factor ⊗ rest` across one subsystem.
    ///
    /// `factor` is normalized and `rest` keeps the remaining subsystems in order
    /// with the original norm. Fails if the state is entangled across the cut.
    pub fn factor(&self, subsystem: usize) -> Result<(Self, Self), StateError> {
        self.check_subsystems(&[subsystem])?;
        if self.dims.len() < 2 {
            return Err(StateError::EmptyRegister);
        }
        let mut order = vec![subsystem];
        order.extend((0..self.dims.len()).filter(|&i| i != subsystem));
        let moved = self.permute(&order)?;
        let dim = self.dims[subsystem];
        let rest_len = self.amps.len() / dim;

        // pivot on the rest-index column of largest weight
        let column_weight = |j: usize| -> f64 {
            (0..dim)
                .map(|i| moved.amps[i * rest_len + j].norm_sqr())
                .sum()
        };
        let pivot = (0..rest_len)
            .max_by(|&a, &b| column_weight(a).total_cmp(&column_weight(b)))
            .ok_or(StateError::EmptyRegister)?;
        let factor_amps: Vec<Complex64> =
            (0..dim).map(|i| moved.amps[i * rest_len + pivot]).collect();
        let (factor, _) = Self::new(vec![dim], factor_amps)?.normalized()?;

        let rest_amps: Vec<Complex64> = (0..rest_len)
            .map(|j| {
                (0..dim)
                    .map(|i| factor.amps[i].conj() * moved.amps[i * rest_len + j])
                    .sum()
            })
            .collect();
        let mut residual = 0.0;
        for (i, f) in factor.amps.iter().enumerate() {
            for (j, r) in rest_amps.iter().enumerate() {
                residual += (moved.amps[i * rest_len + j] - f * r).norm_sqr();
            }
        }
        if residual > TOLERANCE {
            return Err(StateError::NotProduct(subsystem));
        }
        let rest = Self::new(moved.dims[1..].to_vec(), rest_amps)?;
        Ok((factor, rest))
    }

    /// Index of a computational basis state carrying weight at least `1 - tolerance`.
    pub fn dominant_basis_index(&self, tolerance: f64) -> Option<usize> {
        self.amps
            .iter()
            .position(|a| a.norm_sqr() >= 1.0 - tolerance)
    }

    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    fn check_subsystems(&self, subsystems: &[usize]) -> Result<(), StateError> {
        for (pos, &s) in subsystems.iter().enumerate() {
            if s >= self.dims.len() {
                return Err(StateError::SubsystemOutOfRange {
                    index: s,
                    count: self.dims.len(),
                });
            }
            if subsystems[..pos].contains(&s) {
                return Err(StateError::DuplicateSubsystem(s));
            }
        }
        Ok(())
    }
}

/// `a ⊗ b`, with `a`'s subsystems first.
pub fn tensor(a: &PureState, b: &PureState) -> PureState {
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    let mut amps = Vec::with_capacity(a.len() * b.len());
    for x in &a.amps {
        for y in &b.amps {
            amps.push(x * y);
        }
    }
    PureState { dims, amps }
}

/// `|⟨a|b⟩|²`, insensitive to global phase.
pub fn fidelity_up_to_phase(a: &PureState, b: &PureState) -> Result<f64, StateError> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Completes `fixed` to an orthonormal basis of `C^dim`.
///
/// Returns the `dim - fixed.len()` completing vectors, built by Gram–Schmidt
/// over the computational basis, taking at each step the basis vector with the
/// largest residual.
pub fn gram_schmidt_complement(
    fixed: &[PureState],
    dim: usize,
) -> Result<Vec<PureState>, StateError> {
    if fixed.len() > dim {
        return Err(StateError::TooManyVectors {
            count: fixed.len(),
            dim,
        });
    }
    for v in fixed {
        if v.len() != dim {
            return Err(StateError::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
    }
    check_orthonormal(fixed)?;

    let mut basis: Vec<Vec<Complex64>> = fixed.iter().map(|v| v.amps.clone()).collect();
    let mut added = Vec::with_capacity(dim - fixed.len());
    while basis.len() < dim {
        let (residual, norm_sqr) = (0..dim)
            .map(|e| {
                let mut v = vec![ZERO; dim];
                v[e] = ONE;
                orthogonalize(&mut v, &basis);
                let n = vec_norm_sqr(&v);
                (v, n)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or(StateError::LinearlyDependent)?;
        let scale = 1.0 / libm::sqrt(norm_sqr);
        let v: Vec<Complex64> = residual.iter().map(|a| a * scale).collect();
        added.push(PureState::new(vec![dim], v.clone())?);
        basis.push(v);
    }
    Ok(added)
}

fn check_orthonormal(fixed: &[PureState]) -> Result<(), StateError> {
    let mut deviation: f64 = 0.0;
    for (i, a) in fixed.iter().enumerate() {
        for (j, b) in fixed.iter().enumerate() {
            let g = a.inner(b)?;
            let target = if i == j { ONE } else { ZERO };
            deviation = deviation.max((g - target).norm());
        }
    }
    if deviation <= TOLERANCE {
        return Ok(());
    }
    // Tell singular Gram matrices apart from merely non-orthonormal ones.
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in fixed {
        let mut w = v.amps.clone();
        let before = vec_norm_sqr(&w);
        orthogonalize(&mut w, &basis);
        let after = vec_norm_sqr(&w);
        if before <= f64::MIN_POSITIVE || after / before < 1e-8 {
            return Err(StateError::LinearlyDependent);
        }
        let scale = 1.0 / libm::sqrt(after);
        basis.push(w.iter().map(|a| a * scale).collect());
    }
    Err(StateError::NotOrthonormal(deviation))
}

/// Two passes of modified Gram–Schmidt against an orthonormal set.
fn orthogonalize(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for b in basis {
            let overlap: Complex64 = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= overlap * y;
            }
        }
    }
}

fn vec_norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// All composite-index offsets spanned by the listed subsystems, enumerated
/// big-endian over the list.
fn composite_offsets(dims: &[usize], strides: &[usize], subsystems: &[usize]) -> Vec<usize> {
    let sub_dims: Vec<usize> = subsystems.iter().map(|&s| dims[s]).collect();
    let count: usize = sub_dims.iter().product();
    let mut digits = vec![0usize; subsystems.len()];
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(
            digits
                .iter()
                .zip(subsystems)
                .map(|(&d, &s)| d * strides[s])
                .sum(),
        );
        increment(&mut digits, &sub_dims);
    }
    out
}

fn increment(digits: &mut [usize], dims: &[usize]) {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < dims[i] {
            return;
        }
        digits[i] = 0;
    }
}

fn isqrt(n: usize) -> usize {
    let mut r = libm::sqrt(n as f64) as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// The 2×2 Hadamard gate.
pub fn hadamard() -> Unitary {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    Unitary::from_matrix_unchecked(Matrix {
        order: 2,
        entries: vec![
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_tensor_product() {
        let a = PureState::basis(vec![2], &[0]).unwrap();
        let b = PureState::basis(vec![2], &[1]).unwrap();
        let ab = tensor(&a, &b);
        assert_eq!(ab.dims(), &[2, 2]);
        assert_eq!(ab.amplitude(&[0, 1]), ONE);
        assert!((ab.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tensor_is_linear() {
        let plus = PureState::qudit_real(&[1.0, 1.0]).unwrap();
        let zero = PureState::basis(vec![2], &[0]).unwrap();
        let out = tensor(&plus, &zero);
        let expected = PureState::from_amplitudes(vec![2, 2], vec![ONE, ZERO, ONE, ZERO]).unwrap();
        assert!(fidelity_up_to_phase(&out, &expected).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn hadamard_on_zero() {
        let zero = PureState::basis(vec![2], &[0]).unwrap();
        let out = apply(&hadamard(), &zero).unwrap();
        assert!((out.amps()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((out.amps()[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn identity_leaves_state() {
        let s = PureState::from_amplitudes(vec![3, 2], (0..6).map(|i| c(i as f64, 1.0)).collect())
            .unwrap();
        let out = apply(&Unitary::identity(2).on([1]), &s).unwrap();
        assert_eq!(out, s);
        let out = apply(&Unitary::identity(6), &s).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn embedded_application_respects_target_order() {
        // X on subsystem 1 of |0,0,1⟩ over [2,3,2] with a 3-level cyclic shift
        let shift = Matrix::permutation(&[1, 2, 0]).unwrap();
        let u = Unitary::new(shift).unwrap().on([1]);
        let s = PureState::basis(vec![2, 3, 2], &[0, 0, 1]).unwrap();
        let out = apply(&u, &s).unwrap();
        assert_eq!(out.amplitude(&[0, 1, 1]), ONE);

        // a two-subsystem target listed in reverse order
        let cx = Matrix::permutation(&[0, 1, 3, 2]).unwrap(); // control = first listed
        let u = Unitary::new(cx).unwrap().on([2, 0]);
        let s = PureState::basis(vec![2, 3, 2], &[0, 2, 1]).unwrap();
        let out = apply(&u, &s).unwrap();
        assert_eq!(out.amplitude(&[1, 2, 1]), ONE);
    }

    #[test]
    fn apply_rejects_bad_targets() {
        let s = PureState::basis(vec![2, 2], &[0, 0]).unwrap();
        let h = hadamard();
        assert!(matches!(
            apply(&h.clone().on([2]), &s),
            Err(StateError::SubsystemOutOfRange { .. })
        ));
        assert!(matches!(
            apply(&h.clone().on([0, 0]), &s),
            Err(StateError::DuplicateSubsystem(0))
        ));
        assert!(matches!(
            apply(&h.clone().on([0, 1]), &s),
            Err(StateError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            apply(&h, &s),
            Err(StateError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn fidelity_examples() {
        let a = PureState::qudit(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        assert!((fidelity_up_to_phase(&a, &a).unwrap() - 1.0).abs() < 1e-15);
        let b = PureState::qudit(vec![c(0.0, 0.8), c(0.6, 0.0)]).unwrap();
        // ⟨a|b⟩ = 0.6·0.8i + (-0.8i)(0.6) = 0
        assert!(fidelity_up_to_phase(&a, &b).unwrap() < 1e-15);
        let phased = a.scaled(Complex64::from_polar(1.0, PI / 3.0));
        assert!((fidelity_up_to_phase(&a, &phased).unwrap() - 1.0).abs() < 1e-12);
        let other = PureState::basis(vec![3], &[0]).unwrap();
        assert!(fidelity_up_to_phase(&a, &other).is_err());
    }

    #[test]
    fn new_validates_shape() {
        assert_eq!(
            PureState::new(vec![2, 2], vec![ONE; 3]),
            Err(StateError::LengthMismatch {
                expected: 4,
                found: 3
            })
        );
        assert_eq!(
            PureState::new(vec![], vec![]),
            Err(StateError::EmptyRegister)
        );
        assert_eq!(
            PureState::from_amplitudes(vec![2], vec![ZERO, ZERO]),
            Err(StateError::ZeroNorm)
        );
    }

    #[test]
    fn gram_schmidt_single_basis_vector() {
        let zero = PureState::basis(vec![2], &[0]).unwrap();
        let out = gram_schmidt_complement(&[zero], 2).unwrap();
        assert_eq!(out.len(), 1);
        let one = PureState::basis(vec![2], &[1]).unwrap();
        assert!((fidelity_up_to_phase(&out[0], &one).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gram_schmidt_plus_state() {
        let plus = PureState::qudit_real(&[1.0, 1.0]).unwrap();
        let out = gram_schmidt_complement(core::slice::from_ref(&plus), 2).unwrap();
        assert_eq!(out.len(), 1);
        assert!(plus.inner(&out[0]).unwrap().norm() < 1e-12);
        assert!((out[0].norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gram_schmidt_completes_ancilla_pair() {
        // |k⟩ = |2⟩ and ξ = (|0⟩ + i|1⟩)/√2 in dimension 3
        let k = PureState::basis(vec![3], &[2]).unwrap();
        let xi = PureState::qudit(vec![ONE, c(0.0, 1.0), ZERO]).unwrap();
        let out = gram_schmidt_complement(&[k.clone(), xi.clone()], 3).unwrap();
        assert_eq!(out.len(), 1);
        let all = [k, xi, out[0].clone()];
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let g = a.inner(b).unwrap();
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((g - c(target, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn gram_schmidt_errors() {
        let a = PureState::qudit_real(&[1.0, 0.0]).unwrap();
        assert_eq!(
            gram_schmidt_complement(&[a.clone(), a.clone()], 2),
            Err(StateError::LinearlyDependent)
        );
        let b = PureState::qudit_real(&[1.0, 1.0]).unwrap();
        assert!(matches!(
            gram_schmidt_complement(&[a.clone(), b], 2),
            Err(StateError::NotOrthonormal(_))
        ));
        assert!(matches!(
            gram_schmidt_complement(&[a.clone(), a.clone(), a], 2),
            Err(StateError::TooManyVectors { .. })
        ));
    }

    #[test]
    fn permute_and_project() {
        let s = PureState::basis(vec![2, 3, 4], &[1, 2, 3]).unwrap();
        let p = s.permute(&[2, 0, 1]).unwrap();
        assert_eq!(p.dims(), &[4, 2, 3]);
        assert_eq!(p.amplitude(&[3, 1, 2]), ONE);

        let v = PureState::basis(vec![2], &[1]).unwrap();
        let rest = s.project(&[0], &v).unwrap();
        assert_eq!(rest.dims(), &[3, 4]);
        assert_eq!(rest.amplitude(&[2, 3]), ONE);
        let w = PureState::basis(vec![2], &[0]).unwrap();
        assert!(s.project(&[0], &w).unwrap().norm_sqr() < 1e-30);
    }

    #[test]
    fn restrict_detects_leakage() {
        let s = PureState::qudit_real(&[1.0, 1.0, 0.0]).unwrap();
        let r = s.restrict(0, 2).unwrap();
        assert_eq!(r.dims(), &[2]);
        let leaky = PureState::qudit_real(&[1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            leaky.restrict(0, 2),
            Err(StateError::Leakage { .. })
        ));
    }

    #[test]
    fn factor_product_and_entangled() {
        let a = PureState::qudit(vec![c(0.3, 0.1), c(-0.2, 0.5), c(0.0, 0.4)]).unwrap();
        let b = PureState::qudit(vec![c(0.7, 0.0), c(0.1, -0.3)]).unwrap();
        let ab = tensor(&a, &b);
        let (fb, ra) = ab.factor(1).unwrap();
        assert!((fidelity_up_to_phase(&fb, &b).unwrap() - 1.0).abs() < 1e-12);
        assert!((fidelity_up_to_phase(&ra, &a).unwrap() - 1.0).abs() < 1e-12);
        assert!(
            (tensor(&fb, &ra)
                .permute(&[1, 0])
                .unwrap()
                .inner(&ab)
                .unwrap()
                .norm()
                - 1.0)
                .abs()
                < 1e-12
        );

        let bell = PureState::from_amplitudes(vec![2, 2], vec![ONE, ZERO, ZERO, ONE]).unwrap();
        assert_eq!(bell.factor(0), Err(StateError::NotProduct(0)));
    }

    #[test]
    fn matrix_helpers() {
        let h = hadamard();
        assert!(h.matrix().unitarity_defect() < 1e-15);
        assert!(h.matrix().is_hermitian(1e-15));
        let hh = h.after(&h);
        assert!(hh.matrix().max_deviation(&Matrix::identity(2)) < 1e-15);
        assert_eq!(Matrix::from_rows(vec![ONE; 3]), Err(StateError::NotSquare));
        assert!(matches!(
            Unitary::new(Matrix::from_rows(vec![ONE; 4]).unwrap()),
            Err(StateError::NotUnitary(_))
        ));
        let k = h.kron(&Unitary::identity(3));
        assert_eq!(k.dim(), 6);
        assert!(k.matrix().unitarity_defect() < 1e-15);
    }
}
