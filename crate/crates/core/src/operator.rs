//! Dense operators, pure states and density operators over a Fock basis.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, Dyn, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A dense complex square matrix acting on a basis of dimension `dim()`.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator(DMatrix<Complex64>);

impl Operator {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        Ok(Self(matrix))
    }

    /// Builds an operator from row-major entries.
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Ok(Self(DMatrix::from_row_slice(dim, dim, entries)))
    }

    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_rows(dim, &c)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                ZERO
            }
        }))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    /// |ψ⟩⟨φ|
    pub fn outer(ket: &PureState, bra: &PureState) -> Self {
        Self(ket.vector() * bra.vector().adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 + &other.0 * &self.0)
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..exponent {
            out = &out * self;
        }
        out
    }

    /// Kronecker product `self ⊗ other` with `self` on the slow index.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    /// ‖A − A†‖_F
    pub fn hermiticity_residual(&self) -> f64 {
        (&self.0 - self.0.adjoint())
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    pub fn off_diagonal_norm(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += self.0[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    /// Diagonal entries, real parts only.
    pub fn real_diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn apply(&self, state: &PureState) -> DVector<Complex64> {
        &self.0 * state.vector()
    }

    /// ‖self − other‖_F
    pub fn distance(&self, other: &Self) -> f64 {
        (&self.0 - &other.0)
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.0 - &other.0)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Hermitian part (A + A†)/2.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }

    /// Tr(self · ρ)
    pub fn expectation(&self, rho: &DensityOperator) -> Complex64 {
        trace_of_product(&self.0, rho.matrix())
    }
}

/// Tr(A·B) without forming the product.
pub(crate) fn trace_of_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn mul(self, rhs: &'a Operator) -> Operator {
        Operator(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn add(self, rhs: &'a Operator) -> Operator {
        Operator(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn sub(self, rhs: &'a Operator) -> Operator {
        Operator(&self.0 - &rhs.0)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator(-&self.0)
    }
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState(DVector<Complex64>);

impl PureState {
    /// Wraps `amplitudes`, requiring unit norm within 1e-12.
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self(amplitudes))
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amplitudes))
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self(amplitudes / Complex64::new(norm, 0.0)))
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: index,
            });
        }
        let mut v = DVector::zeros(dim);
        v[index] = ONE;
        Ok(Self(v))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn vector(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.0[index]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.0.dotc(&other.0)
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator(self.0.clone() * self.0.adjoint())
    }

    /// ⟨ψ|Ω|ψ⟩
    pub fn expectation(&self, op: &Operator) -> Complex64 {
        self.0.dotc(&(op.matrix() * &self.0))
    }

    /// Applies a unitary, renormalizing away roundoff.
    pub fn transform(&self, unitary: &Operator) -> Result<Self> {
        Self::normalized(unitary.matrix() * &self.0)
    }

    /// Tensor product with `self` on the slow index.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }
}

/// A validated density operator: Hermitian, unit trace, positive
/// semidefinite, purity at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator(DMatrix<Complex64>);

impl DensityOperator {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        let rho = Self(matrix);
        rho.validate()?;
        Ok(rho)
    }

    pub fn from_operator(op: Operator) -> Result<Self> {
        Self::new(op.0)
    }

    /// Σ p_k ρ_k; the weights must be non-negative and sum to one.
    pub fn mixture(terms: &[(f64, &DensityOperator)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidProbabilities("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut total = 0.0;
        let mut acc = DMatrix::zeros(dim, dim);
        for (p, rho) in terms {
            if *p < 0.0 || !p.is_finite() {
                return Err(Error::InvalidProbabilities(format!("weight {p}")));
            }
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: rho.dim(),
                });
            }
            total += p;
            acc += rho.matrix() * Complex64::new(*p, 0.0);
        }
        if (total - 1.0).abs() > tol::TRACE {
            return Err(Error::InvalidProbabilities(format!(
                "weights sum to {total}"
            )));
        }
        Self::new(acc)
    }

    /// Maximally mixed state of dimension `dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0))
    }

    fn validate(&self) -> Result<()> {
        let herm = Operator(self.0.clone()).hermiticity_residual();
        if herm > tol::HERMITIAN {
            return Err(Error::NotHermitian(herm));
        }
        let tr = self.0.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -tol::PSD {
            return Err(Error::NotPositive(min));
        }
        let purity = self.purity();
        if purity > 1.0 + tol::PURITY {
            return Err(Error::PurityAboveOne(purity));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn to_operator(&self) -> Operator {
        Operator(self.0.clone())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Tr ρ²
    pub fn purity(&self) -> f64 {
        trace_of_product(&self.0, &self.0).re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = hermitian_eigen(&self.0);
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        vals
    }

    /// Von Neumann entropy −Tr ρ ln ρ with 0 ln 0 = 0.
    pub fn entropy(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.ln())
            .sum()
    }

    /// Tr(Ω ρ)
    pub fn expectation(&self, op: &Operator) -> Complex64 {
        trace_of_product(op.matrix(), &self.0)
    }

    /// U ρ U†
    pub fn transform(&self, unitary: &Operator) -> Result<Self> {
        let m = unitary.matrix() * &self.0 * unitary.matrix().adjoint();
        Self::new(hermitize(&m))
    }

    pub fn distance(&self, other: &Self) -> f64 {
        Operator(self.0.clone()).distance(&Operator(other.0.clone()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.0 - &other.0)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }
}

pub(crate) fn hermitize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Hermitian eigendecomposition. The QR sweep can fail to deflate tiny
/// off-diagonal couplings between zero diagonal entries and overflow to ±inf;
/// in that case it is rerun on H + cI with c = 2‖H‖_F, which keeps every
/// diagonal entry of the tridiagonal form positive, and the shift is removed.
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> SymmetricEigen<Complex64, Dyn> {
    let h = hermitize(m);
    let finite = |e: &SymmetricEigen<Complex64, Dyn>| {
        e.eigenvalues.iter().all(|v| v.is_finite())
            && e.eigenvectors
                .iter()
                .all(|z| z.re.is_finite() && z.im.is_finite())
    };
    let plain = SymmetricEigen::new(h.clone());
    if finite(&plain) {
        return plain;
    }
    let c = 2.0 * h.norm();
    let n = h.nrows();
    let mut shifted = SymmetricEigen::new(h + DMatrix::identity(n, n) * Complex64::new(c, 0.0));
    shifted.eigenvalues.iter_mut().for_each(|v| *v -= c);
    shifted
}

/// Eigendecomposition of a Hermitian operator, used to build propagators.
#[derive(Debug, Clone)]
pub struct Spectrum {
    values: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

impl Spectrum {
    pub fn of(op: &Operator) -> Result<Self> {
        let residual = op.hermiticity_residual();
        if residual > tol::OPERATOR_HERMITIAN {
            return Err(Error::NotHermitian(residual));
        }
        if op.off_diagonal_norm() == 0.0 {
            return Ok(Self {
                values: op.real_diagonal(),
                vectors: DMatrix::identity(op.dim(), op.dim()),
            });
        }
        let eig = hermitian_eigen(op.matrix());
        Ok(Self {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column `k` is the eigenvector for `values()[k]`.
    pub fn vectors(&self) -> &DMatrix<Complex64> {
        &self.vectors
    }

    /// e^{−iHt} = Σ e^{−iλt} |v⟩⟨v|
    pub fn propagator(&self, t: f64) -> Operator {
        let phases = DVector::from_iterator(
            self.values.len(),
            self.values
                .iter()
                .map(|&l| Complex64::from_polar(1.0, -l * t)),
        );
        let scaled = DMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |i, k| {
            self.vectors[(i, k)] * phases[k]
        });
        Operator(scaled * self.vectors.adjoint())
    }

    /// e^{−iHt}|ψ⟩ without forming the propagator.
    pub fn evolve(&self, t: f64, state: &PureState) -> Result<PureState> {
        if state.dim() != self.values.len() {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                actual: state.dim(),
            });
        }
        let mut coeffs = self.vectors.adjoint() * state.vector();
        for (c, &l) in coeffs.iter_mut().zip(&self.values) {
            *c *= Complex64::from_polar(1.0, -l * t);
        }
        PureState::new(&self.vectors * coeffs)
    }

    /// Largest |λ|.
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// States that can be pushed through a unitary.
pub trait Evolve: Sized {
    fn evolve_with(&self, unitary: &Operator) -> Result<Self>;
}

impl Evolve for PureState {
    fn evolve_with(&self, unitary: &Operator) -> Result<Self> {
        self.transform(unitary)
    }
}

impl Evolve for DensityOperator {
    fn evolve_with(&self, unitary: &Operator) -> Result<Self> {
        self.transform(unitary)
    }
}

/// Evolves `state` for time `t` under the Hermitian Hamiltonian `h`.
pub fn unitary_evolve<S: Evolve>(h: &Operator, t: f64, state: &S) -> Result<S> {
    let u = Spectrum::of(h)?.propagator(t);
    state.evolve_with(&u)
}

/// ‖U†U − 1‖_F
pub fn unitarity_residual(u: &Operator) -> f64 {
    (&u.adjoint() * u).distance(&Operator::identity(u.dim()))
}
