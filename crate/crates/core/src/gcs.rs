//! Coherent states of a single oscillator with either energy sign.
//!
//! The normal oscillator `H = P²/2M + MΩ²X²/2` has levels `Ω(n + ½)`; the ghost
//! `h = −(p²/2m + mω²x²/2)` has levels `−ω(n + ½)` but lives in the same
//! positive-norm number basis. For both, the state labelled by a strength `J`
//! and a phase `Γ` is the Poisson-weighted superposition
//!
//! ```text
//! |J, Γ⟩ = e^{−|α|²/2} Σₙ αⁿ/√(n!) |n⟩,   |α|² = J
//! ```
//!
//! with `α = √J e^{−iΓ}` for the normal sign and `α = −i√j e^{+iγ}` for the
//! ghost. Both choices make a shift of the phase label by `freq·t` equal to
//! Schrödinger evolution for time `t` (see [`evolve`]).

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::fock::{self, ComplexScalar, FockVector};
use crate::{Error, Result};

/// Largest strength accepted by [`GcsLabel::new`].
pub const MAX_STRENGTH: f64 = 50.0;

/// Default Poisson tail tolerance for truncation.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Sign of the energy spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnergySign {
    /// Levels `+freq (n + ½)`.
    Normal,
    /// Levels `−freq (n + ½)`.
    Ghost,
}

impl EnergySign {
    pub fn value(self) -> f64 {
        match self {
            EnergySign::Normal => 1.0,
            EnergySign::Ghost => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorSpec {
    mass: f64,
    freq: f64,
    sign: EnergySign,
}

impl OscillatorSpec {
    pub fn new(mass: f64, freq: f64, sign: EnergySign) -> Result<Self> {
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
        Ok(Self { mass, freq, sign })
    }

    pub fn normal(mass: f64, freq: f64) -> Result<Self> {
        Self::new(mass, freq, EnergySign::Normal)
    }

    pub fn ghost(mass: f64, freq: f64) -> Result<Self> {
        Self::new(mass, freq, EnergySign::Ghost)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn freq(&self) -> f64 {
        self.freq
    }

    pub fn sign(&self) -> EnergySign {
        self.sign
    }

    /// Energy of level `n`.
    pub fn level(&self, n: usize) -> f64 {
        self.sign.value() * self.freq * (n as f64 + 0.5)
    }
}

/// Strength (`J` or `j`) and phase (`Γ` or `γ`) of a coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcsLabel {
    strength: f64,
    phase: f64,
}

impl GcsLabel {
    pub fn new(strength: f64, phase: f64) -> Result<Self> {
        if !(0.0..=MAX_STRENGTH).contains(&strength) {
            return Err(Error::StrengthOutOfRange {
                value: strength,
                max: MAX_STRENGTH,
            });
        }
        if !phase.is_finite() {
            return Err(Error::NonFinitePhase(phase));
        }
        Ok(Self { strength, phase })
    }

    pub fn vacuum() -> Self {
        Self {
            strength: 0.0,
            phase: 0.0,
        }
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// The label after time `t`: phase advanced by `freq·t`.
    pub fn advanced(&self, freq: f64, t: f64) -> Self {
        Self {
            strength: self.strength,
            phase: self.phase + freq * t,
        }
    }
}

/// First and second moments of position and momentum, plus the energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub mean_pos: f64,
    pub mean_mom: f64,
    pub mean_pos_sq: f64,
    pub mean_mom_sq: f64,
    pub var_pos: f64,
    pub var_mom: f64,
    pub uncertainty_product: f64,
    pub energy: f64,
}

/// `⟨a⟩` in the coherent state: `√J e^{−iΓ}` (normal) or `−i√j e^{iγ}` (ghost).
pub fn coherent_parameter(spec: &OscillatorSpec, label: &GcsLabel) -> ComplexScalar {
    let r = label.strength.sqrt();
    match spec.sign {
        EnergySign::Normal => Complex64::from_polar(r, -label.phase),
        EnergySign::Ghost => Complex64::from_polar(r, label.phase - FRAC_PI_2),
    }
}

/// Smallest `N` whose Poisson(`strength`) tail `Σ_{n>N} pₙ` is at most `tail_tol`.
///
/// Probabilities are accumulated in log space and the tail is summed from the
/// far end so that no `1 − cdf` cancellation occurs.
///
/// # Panics
///
/// If `tail_tol` is not positive or `strength` is negative or non-finite.
pub fn truncation_for(strength: f64, tail_tol: f64) -> usize {
    assert!(tail_tol > 0.0, "tail tolerance must be positive");
    assert!(
        strength >= 0.0 && strength.is_finite(),
        "strength must be finite and nonnegative"
    );
    if strength == 0.0 || tail_tol >= 1.0 {
        return 0;
    }
    let ln_l = strength.ln();
    let floor = tail_tol * 1e-6;
    let mut probs = Vec::new();
    let mut ln_p = -strength;
    let mut n = 0usize;
    loop {
        if n > 0 {
            ln_p += ln_l - (n as f64).ln();
        }
        let p = ln_p.exp();
        probs.push(p);
        if n as f64 > strength && p < floor {
            break;
        }
        n += 1;
    }
    // tail[k] = sum_{n >= k} p_n
    let mut tail = vec![0.0; probs.len() + 1];
    for k in (0..probs.len()).rev() {
        tail[k] = tail[k + 1] + probs[k];
    }
    (0..probs.len())
        .find(|&cut| tail[cut + 1] <= tail_tol)
        .expect("tail sequence reaches the tolerance before the cutoff")
}

/// Coherent state at truncation `n_max`, rejecting `n_max` below
/// `truncation_for(strength, 1e-12)`.
pub fn build_state(spec: &OscillatorSpec, label: &GcsLabel, n_max: usize) -> Result<FockVector> {
    let required = truncation_for(label.strength, DEFAULT_TAIL_TOL);
    if n_max < required {
        return Err(Error::TruncationTooSmall {
            given: n_max,
            required,
            tol: DEFAULT_TAIL_TOL,
        });
    }
    Ok(build_state_unchecked(spec, label, n_max))
}

/// Coherent state at an arbitrary truncation; the amplitudes are the exact
/// untruncated ones, so the norm falls short by the discarded Poisson tail.
pub fn build_state_unchecked(spec: &OscillatorSpec, label: &GcsLabel, n_max: usize) -> FockVector {
    let alpha = coherent_parameter(spec, label);
    let lambda = label.strength;
    let mut amps = ndarray::Array1::zeros(n_max + 1);
    if lambda == 0.0 {
        amps[0] = Complex64::new(1.0, 0.0);
        return FockVector::from_array(amps);
    }
    let arg = alpha.arg();
    let half_ln_l = 0.5 * lambda.ln();
    // ln|amp_n| = -λ/2 + n ln√λ - ½ ln n!
    let mut ln_mag = -0.5 * lambda;
    for (n, slot) in amps.iter_mut().enumerate() {
        if n > 0 {
            ln_mag += half_ln_l - 0.5 * (n as f64).ln();
        }
        *slot = Complex64::from_polar(ln_mag.exp(), n as f64 * arg);
    }
    FockVector::from_array(amps)
}

/// Schrödinger evolution of `state` for time `t`: `cₙ → e^{−iEₙt} cₙ`.
pub fn evolve(spec: &OscillatorSpec, state: &FockVector, t: f64) -> FockVector {
    let amps = state
        .amps()
        .iter()
        .enumerate()
        .map(|(n, c)| c * Complex64::from_polar(1.0, -spec.level(n) * t))
        .collect();
    FockVector::from_array(amps)
}

/// Closed-form `(⟨pos⟩, ⟨mom⟩)`.
pub fn first_moments(spec: &OscillatorSpec, label: &GcsLabel) -> (f64, f64) {
    let mf = spec.mass * spec.freq;
    let (s, c) = label.phase.sin_cos();
    let x_amp = (2.0 * label.strength / mf).sqrt();
    let p_amp = (2.0 * mf * label.strength).sqrt();
    match spec.sign {
        EnergySign::Normal => (x_amp * c, -p_amp * s),
        EnergySign::Ghost => (x_amp * s, -p_amp * c),
    }
}

/// Closed-form energy: `Ω(1 + 2J)/2` or `−ω(1 + 2j)/2`.
pub fn gcs_energy(spec: &OscillatorSpec, label: &GcsLabel) -> f64 {
    spec.sign.value() * spec.freq * (1.0 + 2.0 * label.strength) / 2.0
}

/// Closed-form moments. The dispersions are the label-independent symbols
/// `1/(2 m f)` and `m f/2`, so the uncertainty product is exactly `1/4`.
pub fn second_moments_and_dispersions(spec: &OscillatorSpec, label: &GcsLabel) -> MomentSet {
    let mf = spec.mass * spec.freq;
    let (mean_pos, mean_mom) = first_moments(spec, label);
    let (s, c) = label.phase.sin_cos();
    let j4 = 4.0 * label.strength;
    let (pos_trig, mom_trig) = match spec.sign {
        EnergySign::Normal => (c * c, s * s),
        EnergySign::Ghost => (s * s, c * c),
    };
    let var_pos = 1.0 / (2.0 * mf);
    let var_mom = mf / 2.0;
    MomentSet {
        mean_pos,
        mean_mom,
        mean_pos_sq: (1.0 + j4 * pos_trig) / (2.0 * mf),
        mean_mom_sq: mf * (1.0 + j4 * mom_trig) / 2.0,
        var_pos,
        var_mom,
        uncertainty_product: var_pos * var_mom,
        energy: gcs_energy(spec, label),
    }
}

/// The same moments evaluated by brute force on [`build_state`] output.
///
/// Expectations come from dense truncated matrices one level larger than the
/// state; dispersions are formed as `⟨O²⟩ − ⟨O⟩²`.
pub fn numeric_moments(spec: &OscillatorSpec, label: &GcsLabel, n_max: usize) -> Result<MomentSet> {
    let state = build_state(spec, label, n_max)?;
    numeric_moments_of(spec, &state)
}

/// Quadratic expectations need one level above the state's support: with
/// `x` cut off at the support edge, `⟨x²⟩ = Σₖ |⟨k|x|ψ⟩|²` would lose `k = N+1`.
pub(crate) const QUADRATIC_PADDING: usize = 1;

pub(crate) fn numeric_moments_of(spec: &OscillatorSpec, state: &FockVector) -> Result<MomentSet> {
    let state = state.padded(QUADRATIC_PADDING);
    let state = &state;
    let (pos, mom) = fock::position_momentum(spec.mass, spec.freq, state.truncation())?;
    let mean_pos = fock::expectation(state, &pos)?.re;
    let mean_mom = fock::expectation(state, &mom)?.re;
    let mean_pos_sq = fock::expectation(state, &pos.dot(&pos))?.re;
    let mean_mom_sq = fock::expectation(state, &mom.dot(&mom))?.re;
    let var_pos = mean_pos_sq - mean_pos * mean_pos;
    let var_mom = mean_mom_sq - mean_mom * mean_mom;
    let f2 = spec.freq * spec.freq;
    let energy = spec.sign.value() * (mean_mom_sq / (2.0 * spec.mass) + spec.mass * f2 * mean_pos_sq / 2.0);
    Ok(MomentSet {
        mean_pos,
        mean_mom,
        mean_pos_sq,
        mean_mom_sq,
        var_pos,
        var_mom,
        uncertainty_product: var_pos * var_mom,
        energy,
    })
}
