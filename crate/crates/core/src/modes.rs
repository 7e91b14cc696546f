//! The linear canonical map between the oscillator's phase space
//! `(z, p_z, q, p_q)` and the decoupled normal modes `(X, P, x, p)`.
//!
//! With `s = √(Ω² − ω²)`:
//!
//! ```text
//! X = (p_z + Ω²q)/(Ωs)    x = (p_q + Ω²z)/s
//! P = Ω(p_q + ω²z)/s      p = (p_z + ω²q)/s
//! ```
//!
//! and the Hamiltonian `½[p_q² + 2q p_z + (Ω²+ω²)q² − Ω²ω²z²]` becomes
//! `½(P² + Ω²X²) − ½(p² + ω²x²)`.
//!
//! Vectors are ordered `(z, p_z, q, p_q)` on the oscillator side and
//! `(X, P, x, p)` on the mode side, so both use the same block symplectic form.

use crate::{Error, Result};

pub type Matrix4 = [[f64; 4]; 4];

/// Frequencies of the non-degenerate oscillator, `Ω > ω > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuoParams {
    big_freq: f64,
    small_freq: f64,
}

impl PuoParams {
    pub fn new(big_freq: f64, small_freq: f64) -> Result<Self> {
        let ok = small_freq > 0.0 && big_freq > small_freq && big_freq.is_finite();
        if !ok {
            return Err(Error::NotNonDegenerate {
                big: big_freq,
                small: small_freq,
            });
        }
        Ok(Self { big_freq, small_freq })
    }

    /// `Ω`.
    pub fn big_freq(&self) -> f64 {
        self.big_freq
    }

    /// `ω`.
    pub fn small_freq(&self) -> f64 {
        self.small_freq
    }

    /// `s = √(Ω² − ω²)`.
    pub fn splitting(&self) -> f64 {
        ((self.big_freq - self.small_freq) * (self.big_freq + self.small_freq)).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PuoPhasePoint {
    pub z: f64,
    pub p_z: f64,
    pub q: f64,
    pub p_q: f64,
}

impl PuoPhasePoint {
    pub fn new(z: f64, p_z: f64, q: f64, p_q: f64) -> Self {
        Self { z, p_z, q, p_q }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.z, self.p_z, self.q, self.p_q]
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModePhasePoint {
    pub X: f64,
    pub P: f64,
    pub x: f64,
    pub p: f64,
}

impl ModePhasePoint {
    #[allow(non_snake_case)]
    pub fn new(X: f64, P: f64, x: f64, p: f64) -> Self {
        Self { X, P, x, p }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.X, self.P, self.x, self.p]
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

/// Which inverse map to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InverseForm {
    /// The algebraic inverse of [`forward`].
    #[default]
    Exact,
    /// A commonly printed variant with `x` in place of `X` in the `p_z` row and
    /// `ω` in place of `Ω` in front of `P` in the `p_q` row. It is not an
    /// inverse and not symplectic; kept so the verification suites can prove
    /// they detect it.
    Misprinted,
}

/// Jacobian of [`forward`]: rows `(X, P, x, p)`, columns `(z, p_z, q, p_q)`.
pub fn forward_matrix(params: &PuoParams) -> Matrix4 {
    let (w_big, w) = (params.big_freq, params.small_freq);
    let s = params.splitting();
    let (b2, w2) = (w_big * w_big, w * w);
    [
        [0.0, 1.0 / (w_big * s), b2 / (w_big * s), 0.0],
        [w_big * w2 / s, 0.0, 0.0, w_big / s],
        [b2 / s, 0.0, 0.0, 1.0 / s],
        [0.0, 1.0 / s, w2 / s, 0.0],
    ]
}

/// Matrix of the inverse map: rows `(z, p_z, q, p_q)`, columns `(X, P, x, p)`.
pub fn inverse_matrix(params: &PuoParams, form: InverseForm) -> Matrix4 {
    let (w_big, w) = (params.big_freq, params.small_freq);
    let s = params.splitting();
    let (b2, w2) = (w_big * w_big, w * w);
    match form {
        InverseForm::Exact => [
            [0.0, -1.0 / (w_big * s), 1.0 / s, 0.0],
            [-w_big * w2 / s, 0.0, 0.0, b2 / s],
            [w_big / s, 0.0, 0.0, -1.0 / s],
            [0.0, w_big / s, -w2 / s, 0.0],
        ],
        InverseForm::Misprinted => [
            [0.0, -1.0 / (w_big * s), 1.0 / s, 0.0],
            [0.0, 0.0, -w_big * w2 / s, b2 / s],
            [w_big / s, 0.0, 0.0, -1.0 / s],
            [0.0, w / s, -w2 / s, 0.0],
        ],
    }
}

pub(crate) fn mat_vec(m: &Matrix4, v: [f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row.iter().zip(&v).map(|(a, b)| a * b).sum();
    }
    out
}

pub(crate) fn mat_mul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub(crate) fn transpose(a: &Matrix4) -> Matrix4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i];
        }
    }
    out
}

/// Block antisymmetric form pairing slots (0,1) and (2,3).
pub fn symplectic_form() -> Matrix4 {
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
}

/// `max |TᵀΣT − Σ|` for an arbitrary 4×4 linear map.
pub fn symplectic_defect(t: &Matrix4) -> f64 {
    let sigma = symplectic_form();
    let pulled = mat_mul(&transpose(t), &mat_mul(&sigma, t));
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((pulled[i][j] - sigma[i][j]).abs());
        }
    }
    worst
}

pub fn forward(params: &PuoParams, pt: &PuoPhasePoint) -> ModePhasePoint {
    let (w_big, w) = (params.big_freq, params.small_freq);
    let s = params.splitting();
    let (b2, w2) = (w_big * w_big, w * w);
    ModePhasePoint {
        X: (pt.p_z + b2 * pt.q) / (w_big * s),
        P: w_big * (pt.p_q + w2 * pt.z) / s,
        x: (pt.p_q + b2 * pt.z) / s,
        p: (pt.p_z + w2 * pt.q) / s,
    }
}

pub fn inverse(params: &PuoParams, pt: &ModePhasePoint) -> PuoPhasePoint {
    inverse_with(params, pt, InverseForm::Exact)
}

pub fn inverse_with(params: &PuoParams, pt: &ModePhasePoint, form: InverseForm) -> PuoPhasePoint {
    let (w_big, w) = (params.big_freq, params.small_freq);
    let s = params.splitting();
    let (b2, w2) = (w_big * w_big, w * w);
    let z = (pt.x - pt.P / w_big) / s;
    let q = (w_big * pt.X - pt.p) / s;
    let (p_z, p_q) = match form {
        InverseForm::Exact => ((b2 * pt.p - w_big * w2 * pt.X) / s, (w_big * pt.P - w2 * pt.x) / s),
        InverseForm::Misprinted => ((b2 * pt.p - w_big * w2 * pt.x) / s, (w * pt.P - w2 * pt.x) / s),
    };
    PuoPhasePoint { z, p_z, q, p_q }
}

/// Symplectic defect of the forward Jacobian.
pub fn symplectic_residual(params: &PuoParams) -> f64 {
    symplectic_defect(&forward_matrix(params))
}

/// Symplectic defect of the chosen inverse matrix.
pub fn inverse_symplectic_residual(params: &PuoParams, form: InverseForm) -> f64 {
    symplectic_defect(&inverse_matrix(params, form))
}

/// `½[p_q² + 2q p_z + (Ω²+ω²)q² − ω²Ω²z²]`.
pub fn hamiltonian_puo(params: &PuoParams, pt: &PuoPhasePoint) -> f64 {
    let (b2, w2) = (params.big_freq.powi(2), params.small_freq.powi(2));
    0.5 * (pt.p_q * pt.p_q + 2.0 * pt.q * pt.p_z + (b2 + w2) * pt.q * pt.q - w2 * b2 * pt.z * pt.z)
}

/// `½(P² + Ω²X²) − ½(p² + ω²x²)`.
pub fn hamiltonian_modes(params: &PuoParams, pt: &ModePhasePoint) -> f64 {
    let (b2, w2) = (params.big_freq.powi(2), params.small_freq.powi(2));
    0.5 * (pt.P * pt.P + b2 * pt.X * pt.X) - 0.5 * (pt.p * pt.p + w2 * pt.x * pt.x)
}

/// Symmetric matrix `K` with `hamiltonian_puo(u) = ½ uᵀKu`, `u = (z, p_z, q, p_q)`.
pub fn puo_quadratic_form(params: &PuoParams) -> Matrix4 {
    let (b2, w2) = (params.big_freq.powi(2), params.small_freq.powi(2));
    [
        [-b2 * w2, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, b2 + w2, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
}
