//! Truncated Fock-space linear algebra.
//!
//! Everything is dense: at truncation `N` the basis is `|0⟩ … |N⟩` and every
//! operator is an `(N+1) × (N+1)` complex matrix with entry `(m, n) = ⟨m|Ô|n⟩`.
//! Products of truncated operators are only exact on the leading block; the
//! last row and column pick up truncation artifacts (see [`ladder_matrices`]).

use std::ops::{Add, Mul, Sub};

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::{Error, Result};

pub type ComplexScalar = Complex64;

/// Norm tolerance accepted by [`expectation`].
pub const EXPECTATION_NORM_TOL: f64 = 1e-10;

/// Tolerance on `|Im⟨Ô⟩|` for a Hermitian `Ô` in a unit state.
pub const HERMITIAN_IMAG_TOL: f64 = 1e-10;

fn check_finite(z: &Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// A state in the truncated number basis. Index `n` is the occupation number.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector(Array1<Complex64>);

impl FockVector {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::NonPositive {
                name: "dimension",
                value: 0.0,
            });
        }
        if !amps.iter().all(check_finite) {
            return Err(Error::NonFiniteEntry("amplitude"));
        }
        Ok(Self(Array1::from(amps)))
    }

    /// Number state `|n⟩` in a space of dimension `dim`.
    pub fn basis(dim: usize, n: usize) -> Self {
        assert!(n < dim, "basis index {n} outside dimension {dim}");
        let mut v = Array1::zeros(dim);
        v[n] = Complex64::new(1.0, 0.0);
        Self(v)
    }

    pub(crate) fn from_array(amps: Array1<Complex64>) -> Self {
        Self(amps)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Truncation level `N = dim - 1`.
    pub fn truncation(&self) -> usize {
        self.0.len() - 1
    }

    pub fn amps(&self) -> &Array1<Complex64> {
        &self.0
    }

    pub fn amp(&self, n: usize) -> Complex64 {
        self.0[n]
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// The same state embedded in a space `extra` levels larger.
    pub fn padded(&self, extra: usize) -> FockVector {
        let mut out = Array1::zeros(self.dim() + extra);
        out.slice_mut(ndarray::s![..self.dim()]).assign(&self.0);
        FockVector(out)
    }

    /// Tensor product `self ⊗ other`, `self` being the slow index.
    pub fn kron(&self, other: &FockVector) -> FockVector {
        let mut out = Array1::zeros(self.dim() * other.dim());
        for (i, a) in self.0.iter().enumerate() {
            for (k, b) in other.0.iter().enumerate() {
                out[i * other.dim() + k] = a * b;
            }
        }
        FockVector(out)
    }
}

/// A dense square operator in the truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix(Array2<Complex64>);

impl OperatorMatrix {
    pub fn from_array(entries: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::DimensionMismatch { state: rows, op: cols });
        }
        if rows == 0 {
            return Err(Error::NonPositive {
                name: "dimension",
                value: 0.0,
            });
        }
        if !entries.iter().all(check_finite) {
            return Err(Error::NonFiniteEntry("operator entry"));
        }
        Ok(Self(entries))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(Array2::zeros((dim, dim)))
    }

    pub fn identity(dim: usize) -> Self {
        Self(Array2::eye(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.0
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.0[[m, n]]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.t().mapv(|z| z.conj()))
    }

    pub fn dot(&self, other: &OperatorMatrix) -> Self {
        Self(self.0.dot(&other.0))
    }

    pub fn apply(&self, state: &FockVector) -> FockVector {
        FockVector(self.0.dot(&state.0))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(self.0.mapv(|z| z * c))
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &OperatorMatrix) -> Self {
        &self.dot(other) - &other.dot(self)
    }

    /// Largest entry modulus of `self − self†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for m in 0..n {
            for k in 0..n {
                worst = worst.max((self.0[[m, k]] - self.0[[k, m]].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Kronecker product `self ⊗ other`, matching [`FockVector::kron`].
    pub fn kron(&self, other: &OperatorMatrix) -> Self {
        let (da, db) = (self.dim(), other.dim());
        let mut out = Array2::zeros((da * db, da * db));
        for i in 0..da {
            for j in 0..da {
                let a = self.0[[i, j]];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..db {
                    for l in 0..db {
                        out[[i * db + k, j * db + l]] = a * other.0[[k, l]];
                    }
                }
            }
        }
        Self(out)
    }

    /// Largest entry modulus over the leading `block × block` submatrix.
    pub fn max_abs_leading(&self, block: usize) -> f64 {
        let b = block.min(self.dim());
        let mut worst = 0.0_f64;
        for m in 0..b {
            for n in 0..b {
                worst = worst.max(self.0[[m, n]].norm());
            }
        }
        worst
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.dot(rhs)
    }
}

/// Annihilation and creation matrices at truncation `n_max`.
///
/// `a` has `√n` on the superdiagonal at `(n−1, n)`; `a†` is its conjugate
/// transpose. Because `a†|N⟩` is cut off, `[a, a†]` equals the identity except
/// for the `(N, N)` entry, which is `−N`.
pub fn ladder_matrices(n_max: usize) -> (OperatorMatrix, OperatorMatrix) {
    let dim = n_max + 1;
    let mut a = Array2::zeros((dim, dim));
    for n in 1..dim {
        a[[n - 1, n]] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let a = OperatorMatrix(a);
    let ad = a.adjoint();
    (a, ad)
}

/// `a†a`, diagonal `0, 1, …, N`.
pub fn number_operator(n_max: usize) -> OperatorMatrix {
    let dim = n_max + 1;
    let mut m = Array2::zeros((dim, dim));
    for n in 0..dim {
        m[[n, n]] = Complex64::new(n as f64, 0.0);
    }
    OperatorMatrix(m)
}

/// Position and momentum for an oscillator of the given mass and angular
/// frequency: `x = (a + a†)/√(2mω)`, `p = −i√(mω/2)(a − a†)`.
pub fn position_momentum(mass: f64, freq: f64, n_max: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::NonPositive {
            name: "mass",
            value: mass,
        });
    }
    if !(freq > 0.0 && freq.is_finite()) {
        return Err(Error::NonPositive {
            name: "frequency",
            value: freq,
        });
    }
    let (a, ad) = ladder_matrices(n_max);
    let pos = (&a + &ad).scale(Complex64::new(1.0 / (2.0 * mass * freq).sqrt(), 0.0));
    let mom = (&a - &ad).scale(Complex64::new(0.0, -(mass * freq / 2.0).sqrt()));
    Ok((pos, mom))
}

/// `⟨ψ|Ô|ψ⟩` for a normalized `ψ`.
pub fn expectation(state: &FockVector, op: &OperatorMatrix) -> Result<ComplexScalar> {
    if state.dim() != op.dim() {
        return Err(Error::DimensionMismatch {
            state: state.dim(),
            op: op.dim(),
        });
    }
    let norm_sq = state.norm_sq();
    if (norm_sq - 1.0).abs() > EXPECTATION_NORM_TOL {
        return Err(Error::NotNormalized {
            norm_sq,
            tol: EXPECTATION_NORM_TOL,
        });
    }
    Ok(state.inner(&op.apply(state)))
}

/// Scales `state` to unit norm and returns the original Euclidean norm.
pub fn normalize(state: &FockVector) -> Result<(FockVector, f64)> {
    let norm = state.norm_sq().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((FockVector(state.0.mapv(|a| a / norm)), norm))
}
