//! Coherent states of the full oscillator: the product `|J, Γ⟩ ⊗ |j, γ⟩` of a
//! normal-mode state at `Ω` and a ghost-mode state at `ω`, both with unit mass.
//!
//! [`closed_moments`] evaluates the physical `z, p_z` moments from their closed
//! forms. [`numeric_moments`] rebuilds every field by brute force: single-mode
//! moments from truncated Fock matrices, pushed through the inverse canonical
//! map. Because the state is a product and all observables are at most
//! quadratic, cross-mode second moments factorize into products of means.

use crate::fock;
use crate::gcs::{self, GcsLabel, OscillatorSpec, DEFAULT_TAIL_TOL};
use crate::modes::{self, InverseForm, Matrix4, PuoParams};
use crate::Result;

/// Labels of the product state and the evaluation time.
///
/// The effective phases are `Γ = Γ₀ + Ωt` and `γ = γ₀ + ωt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuoStateLabel {
    normal: GcsLabel,
    ghost: GcsLabel,
    t: f64,
}

impl PuoStateLabel {
    #[allow(non_snake_case)]
    pub fn new(J: f64, Gamma0: f64, j: f64, gamma0: f64, t: f64) -> Result<Self> {
        let normal = GcsLabel::new(J, Gamma0)?;
        let ghost = GcsLabel::new(j, gamma0)?;
        if !t.is_finite() {
            return Err(crate::Error::NonFiniteEntry("time"));
        }
        Ok(Self { normal, ghost, t })
    }

    pub fn vacuum() -> Self {
        Self {
            normal: GcsLabel::vacuum(),
            ghost: GcsLabel::vacuum(),
            t: 0.0,
        }
    }

    /// Same initial labels at another time.
    pub fn at_time(&self, t: f64) -> Self {
        Self { t, ..*self }
    }

    pub fn big_strength(&self) -> f64 {
        self.normal.strength()
    }

    pub fn small_strength(&self) -> f64 {
        self.ghost.strength()
    }

    pub fn big_phase0(&self) -> f64 {
        self.normal.phase()
    }

    pub fn small_phase0(&self) -> f64 {
        self.ghost.phase()
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `|J, Γ₀ + Ωt⟩` label for the normal mode.
    pub fn normal_label(&self, params: &PuoParams) -> GcsLabel {
        self.normal.advanced(params.big_freq(), self.t)
    }

    /// `|j, γ₀ + ωt⟩` label for the ghost mode.
    pub fn ghost_label(&self, params: &PuoParams) -> GcsLabel {
        self.ghost.advanced(params.small_freq(), self.t)
    }
}

/// All `z, p_z` moments of one product state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub mean_z: f64,
    pub mean_q: f64,
    pub mean_pz: f64,
    pub mean_zdot: f64,
    pub mean_z_sq: f64,
    pub mean_pz_sq: f64,
    pub var_z: f64,
    pub var_pz: f64,
    pub uncertainty_product: f64,
    pub energy: f64,
    pub constraint_residual: f64,
}

impl MomentReport {
    pub const FIELD_NAMES: [&'static str; 11] = [
        "mean_z",
        "mean_q",
        "mean_pz",
        "mean_zdot",
        "mean_z_sq",
        "mean_pz_sq",
        "var_z",
        "var_pz",
        "uncertainty_product",
        "energy",
        "constraint_residual",
    ];

    /// Field values in [`Self::FIELD_NAMES`] order.
    pub fn values(&self) -> [f64; 11] {
        [
            self.mean_z,
            self.mean_q,
            self.mean_pz,
            self.mean_zdot,
            self.mean_z_sq,
            self.mean_pz_sq,
            self.var_z,
            self.var_pz,
            self.uncertainty_product,
            self.energy,
            self.constraint_residual,
        ]
    }
}

/// How the Fock basis is cut off in [`numeric_moments`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Truncation {
    /// `truncation_for(max(J, j), 1e-12)`.
    #[default]
    Auto,
    Fixed(usize),
}

impl Truncation {
    pub fn resolve(self, label: &PuoStateLabel) -> usize {
        match self {
            Truncation::Auto => gcs::truncation_for(label.big_strength().max(label.small_strength()), DEFAULT_TAIL_TOL),
            Truncation::Fixed(n) => n,
        }
    }
}

/// `(Δz²Δp_z²)` exact, its large-`Ω/ω` leading form `¼(1 + ω/Ω)`, and the gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticProduct {
    pub exact: f64,
    pub leading: f64,
    pub gap: f64,
}

/// `Δz² = 1/(2Ωω(Ω−ω))`.
pub fn var_z_exact(params: &PuoParams) -> f64 {
    let (b, w) = (params.big_freq(), params.small_freq());
    1.0 / (2.0 * b * w * (b - w))
}

/// `Δp_z² = Ωω(ω² + Ω² − ωΩ)/(2(Ω−ω))`.
pub fn var_pz_exact(params: &PuoParams) -> f64 {
    let (b, w) = (params.big_freq(), params.small_freq());
    b * w * (w * w + b * b - w * b) / (2.0 * (b - w))
}

/// `(ω² + Ω² − ωΩ)/(4(Ω−ω)²)`.
pub fn uncertainty_product_exact(params: &PuoParams) -> f64 {
    let (b, w) = (params.big_freq(), params.small_freq());
    (w * w + b * b - w * b) / (4.0 * (b - w) * (b - w))
}

pub fn closed_moments(params: &PuoParams, label: &PuoStateLabel) -> MomentReport {
    let (b, w) = (params.big_freq(), params.small_freq());
    let s = params.splitting();
    let s2 = s * s;
    let big_j = label.big_strength();
    let small_j = label.small_strength();
    let (sin_g, cos_g) = label.normal_label(params).phase().sin_cos();
    let (sin_w, cos_w) = label.ghost_label(params).phase().sin_cos();

    let mean_z = ((2.0 * big_j / b).sqrt() * sin_g + (2.0 * small_j / w).sqrt() * sin_w) / s;
    let mean_q = ((2.0 * w * small_j).sqrt() * cos_w + (2.0 * b * big_j).sqrt() * cos_g) / s;
    let mean_pz = -(b * b * (2.0 * w * small_j).sqrt() * cos_w + w * w * (2.0 * b * big_j).sqrt() * cos_g) / s;
    let z_osc = (small_j / w).sqrt() * sin_w + (big_j / b).sqrt() * sin_g;
    let mean_z_sq = (0.5 * (1.0 / w + 1.0 / b) + 2.0 * z_osc * z_osc) / s2;
    let pz_osc = w * w * (b * big_j).sqrt() * cos_g + b * b * (w * small_j).sqrt() * cos_w;
    let mean_pz_sq = (0.5 * b * w * (w.powi(3) + b.powi(3)) + 2.0 * pz_osc * pz_osc) / s2;

    MomentReport {
        mean_z,
        mean_q,
        mean_pz,
        mean_zdot: mean_q,
        mean_z_sq,
        mean_pz_sq,
        var_z: var_z_exact(params),
        var_pz: var_pz_exact(params),
        uncertainty_product: uncertainty_product_exact(params),
        energy: b * (1.0 + 2.0 * big_j) / 2.0 - w * (1.0 + 2.0 * small_j) / 2.0,
        constraint_residual: 0.0,
    }
}

/// Means and symmetrized second moments of `(X, P, x, p)` in the product state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMoments {
    pub mean: [f64; 4],
    /// `second[i][k] = ⟨(uᵢuₖ + uₖuᵢ)/2⟩`.
    pub second: Matrix4,
    pub truncation: usize,
}

/// Single-mode moments from the truncated Fock oracle.
pub fn mode_moments(params: &PuoParams, label: &PuoStateLabel, truncation: Truncation) -> Result<ModeMoments> {
    let n_max = truncation.resolve(label);
    let normal = OscillatorSpec::normal(1.0, params.big_freq())?;
    let ghost = OscillatorSpec::ghost(1.0, params.small_freq())?;
    let mode_a = single_mode(&normal, &label.normal_label(params), n_max)?;
    let mode_b = single_mode(&ghost, &label.ghost_label(params), n_max)?;

    let mean = [mode_a.0[0], mode_a.0[1], mode_b.0[0], mode_b.0[1]];
    let mut second = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            second[i][k] = mean[i] * mean[k];
        }
    }
    for (offset, block) in [(0usize, mode_a.1), (2, mode_b.1)] {
        for i in 0..2 {
            for k in 0..2 {
                second[offset + i][offset + k] = block[i][k];
            }
        }
    }
    Ok(ModeMoments {
        mean,
        second,
        truncation: n_max,
    })
}

/// `([⟨pos⟩, ⟨mom⟩], [[⟨pos²⟩, ⟨{pos,mom}⟩/2], [.., ⟨mom²⟩]])`.
fn single_mode(spec: &OscillatorSpec, label: &GcsLabel, n_max: usize) -> Result<([f64; 2], [[f64; 2]; 2])> {
    let state = gcs::build_state(spec, label, n_max)?.padded(gcs::QUADRATIC_PADDING);
    let (pos, mom) = fock::position_momentum(spec.mass(), spec.freq(), state.truncation())?;
    let mean_pos = fock::expectation(&state, &pos)?.re;
    let mean_mom = fock::expectation(&state, &mom)?.re;
    let pos_sq = fock::expectation(&state, &pos.dot(&pos))?.re;
    let mom_sq = fock::expectation(&state, &mom.dot(&mom))?.re;
    let sym = fock::expectation(&state, &pos.dot(&mom))?.re;
    Ok(([mean_pos, mean_mom], [[pos_sq, sym], [sym, mom_sq]]))
}

/// Mode moments mapped to `(z, p_z, q, p_q)`: `μ' = Lμ`, `S' = LSLᵀ`.
fn transform(moments: &ModeMoments, l: &Matrix4) -> ([f64; 4], Matrix4) {
    let mean = modes::mat_vec(l, moments.mean);
    let second = modes::mat_mul(l, &modes::mat_mul(&moments.second, &modes::transpose(l)));
    (mean, second)
}

fn report_from_modes(params: &PuoParams, m: &ModeMoments, form: InverseForm) -> MomentReport {
    let (b, w) = (params.big_freq(), params.small_freq());
    let s = params.splitting();
    let (mean, second) = transform(m, &modes::inverse_matrix(params, form));
    let [mean_z, mean_pz, mean_q, _] = mean;
    // ż = (ΩX − p)/s as an operator identity
    let mean_zdot = (b * m.mean[0] - m.mean[3]) / s;
    let var_z = second[0][0] - mean_z * mean_z;
    let var_pz = second[1][1] - mean_pz * mean_pz;
    let energy = 0.5 * (m.second[1][1] + b * b * m.second[0][0]) - 0.5 * (m.second[3][3] + w * w * m.second[2][2]);
    MomentReport {
        mean_z,
        mean_q,
        mean_pz,
        mean_zdot,
        mean_z_sq: second[0][0],
        mean_pz_sq: second[1][1],
        var_z,
        var_pz,
        uncertainty_product: var_z * var_pz,
        energy,
        constraint_residual: (mean_zdot - mean_q).abs(),
    }
}

/// Brute-force report from the truncated Fock oracle.
pub fn numeric_moments(params: &PuoParams, label: &PuoStateLabel, truncation: Truncation) -> Result<MomentReport> {
    numeric_moments_with(params, label, truncation, InverseForm::Exact)
}

/// [`numeric_moments`] with a selectable inverse map.
pub fn numeric_moments_with(
    params: &PuoParams,
    label: &PuoStateLabel,
    truncation: Truncation,
    form: InverseForm,
) -> Result<MomentReport> {
    let m = mode_moments(params, label, truncation)?;
    Ok(report_from_modes(params, &m, form))
}

/// `|⟨ż⟩ − ⟨q⟩|` from numeric single-mode moments.
pub fn constraint_residual(params: &PuoParams, label: &PuoStateLabel, truncation: Truncation) -> Result<f64> {
    Ok(numeric_moments(params, label, truncation)?.constraint_residual)
}

/// Energy two ways: the decoupled mode Hamiltonian, and the original quadratic
/// form evaluated on moments transformed back to `(z, p_z, q, p_q)`.
pub fn numeric_energy_cross_check(
    params: &PuoParams,
    label: &PuoStateLabel,
    truncation: Truncation,
) -> Result<(f64, f64)> {
    let m = mode_moments(params, label, truncation)?;
    let modes_energy = report_from_modes(params, &m, InverseForm::Exact).energy;
    let (_, second) = transform(&m, &modes::inverse_matrix(params, InverseForm::Exact));
    let k = modes::puo_quadratic_form(params);
    let mut trace = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            trace += k[i][j] * second[j][i];
        }
    }
    Ok((modes_energy, 0.5 * trace))
}

pub fn asymptotic_product(params: &PuoParams) -> AsymptoticProduct {
    let exact = uncertainty_product_exact(params);
    let leading = 0.25 * (1.0 + params.small_freq() / params.big_freq());
    AsymptoticProduct {
        exact,
        leading,
        gap: (exact - leading).abs(),
    }
}

/// Energy `(Ω − ω)(1 + 2J)/2` of the state with equal strengths `J = j`.
pub fn energy_positivity(params: &PuoParams, strength: f64) -> (f64, bool) {
    let energy = (params.big_freq() - params.small_freq()) * (1.0 + 2.0 * strength) / 2.0;
    (energy, energy > 0.0)
}
