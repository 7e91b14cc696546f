//! Invariant suites for every module, run by `puo validate`.
//!
//! Each check evaluates a residual over a set of cases and compares the worst
//! one against a fixed bound. Grids are evaluated in parallel; results are
//! collected in input order so the report is identical from run to run.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::classical::{self, TwoModeSolution};
use crate::fock::{self, FockVector, OperatorMatrix};
use crate::gcs::{self, EnergySign, GcsLabel, OscillatorSpec, DEFAULT_TAIL_TOL};
use crate::modes::{self, InverseForm, ModePhasePoint, PuoParams, PuoPhasePoint};
use crate::puo::{self, MomentReport, PuoStateLabel, Truncation};

/// Relative tolerance for closed-form vs Fock-oracle agreement.
pub const ORACLE_REL_TOL: f64 = 1e-8;
/// Absolute floor used near zeros.
pub const ORACLE_ABS_TOL: f64 = 1e-10;
pub const CANONICAL_TOL: f64 = 1e-12;
pub const CONSTRAINT_TOL: f64 = 1e-9;
pub const TIME_INVARIANCE_TOL: f64 = 1e-8;
/// Poisson tail for the time sweeps. At the default `1e-12` the cutoff alone
/// moves `var_pz` by ~4e-8 when `Ω/ω = 20`, `j = 2`.
pub const SWEEP_TAIL_TOL: f64 = 1e-16;
pub const CORRESPONDENCE_TOL: f64 = 1e-6;
pub const RK4_ANALYTIC_TOL: f64 = 1e-8;
pub const MIN_RK4_ORDER: f64 = 3.8;
pub const EOM_RESIDUAL_TOL: f64 = 1e-5;
pub const EHRENFEST_TOL: f64 = 1e-6;
pub const PHASE_RELATION_TOL: f64 = 1e-12;

/// `|a − b|` scaled so that `≤ 1` means agreement to `1e-8` relative or
/// `1e-10` absolute, whichever is looser.
pub fn oracle_score(a: f64, b: f64) -> f64 {
    (a - b).abs() / (ORACLE_REL_TOL * a.abs().max(b.abs())).max(ORACLE_ABS_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GridSize {
    Small,
    #[default]
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ValidateOptions {
    pub grid: GridSize,
    /// Inverse map used by the canonical-map and moment suites.
    pub inverse_form: InverseForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
    Above(f64),
}

impl Bound {
    fn accepts(self, v: f64) -> bool {
        match self {
            Bound::AtMost(tol) => v <= tol,
            Bound::AtLeast(min) => v >= min,
            Bound::Above(min) => v > min,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub bound: Bound,
    pub cases: usize,
    pub failures: usize,
    /// Largest value for `AtMost`, smallest otherwise. NaN counts as a failure.
    pub worst: f64,
}

impl Check {
    pub fn new(name: &'static str, bound: Bound, values: &[f64]) -> Self {
        let failures = values.iter().filter(|&&v| !bound.accepts(v)).count();
        let worst = match bound {
            Bound::AtMost(_) => values.iter().copied().fold(f64::NEG_INFINITY, |a, b| {
                if b.is_nan() || a.is_nan() {
                    f64::NAN
                } else {
                    a.max(b)
                }
            }),
            Bound::AtLeast(_) | Bound::Above(_) => values.iter().copied().fold(f64::INFINITY, |a, b| {
                if b.is_nan() || a.is_nan() {
                    f64::NAN
                } else {
                    a.min(b)
                }
            }),
        };
        Self {
            name,
            bound,
            cases: values.len(),
            failures,
            worst,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suite {
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl Suite {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn passed_count(&self) -> usize {
        self.checks.iter().filter(|c| c.passed()).count()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub suites: Vec<Suite>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(Suite::passed)
    }

    pub fn suite(&self, name: &str) -> Option<&Suite> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn failing_checks(&self) -> Vec<(&'static str, &'static str)> {
        self.suites
            .iter()
            .flat_map(|s| s.checks.iter().filter(|c| !c.passed()).map(move |c| (s.name, c.name)))
            .collect()
    }
}

/// The label grid for the moment suites.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub ratios: Vec<f64>,
    pub strengths: Vec<f64>,
    pub phases: Vec<f64>,
    pub times: Vec<f64>,
}

impl Grid {
    pub fn new(size: GridSize) -> Self {
        match size {
            GridSize::Full => Self {
                ratios: vec![1.1, 2.0, 5.0, 20.0],
                strengths: vec![0.0, 0.5, 2.0],
                phases: vec![0.0, FRAC_PI_4, FRAC_PI_2, PI],
                times: vec![0.0, 1.0, 3.0],
            },
            GridSize::Small => Self {
                ratios: vec![1.1, 20.0],
                strengths: vec![0.0, 2.0],
                phases: vec![0.0, FRAC_PI_2],
                times: vec![0.0, 3.0],
            },
        }
    }

    /// Every `(params, label)` pair, ω = 1.
    pub fn points(&self) -> Vec<(PuoParams, PuoStateLabel)> {
        let mut out = Vec::new();
        for &ratio in &self.ratios {
            let params = PuoParams::new(ratio, 1.0).expect("grid ratios exceed one");
            for &big_j in &self.strengths {
                for &small_j in &self.strengths {
                    for &g0 in &self.phases {
                        for &w0 in &self.phases {
                            for &t in &self.times {
                                let label =
                                    PuoStateLabel::new(big_j, g0, small_j, w0, t).expect("grid labels are valid");
                                out.push((params, label));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Points with `t = 0` only.
    pub fn initial_points(&self) -> Vec<(PuoParams, PuoStateLabel)> {
        self.points().into_iter().filter(|(_, l)| l.t() == 0.0).collect()
    }
}

/// Frequency pairs with `Ω/ω` from 1.01 to 1000.
pub fn ratio_sweep() -> Vec<PuoParams> {
    let mut out = Vec::new();
    for &small in &[0.1, 1.0, 3.0] {
        for &ratio in &[1.01, 1.1, 1.5, 2.0, 5.0, 10.0, 50.0, 100.0, 1000.0] {
            out.push(PuoParams::new(ratio * small, small).unwrap());
        }
    }
    out
}

/// Deterministic points spread over `[-2, 2]⁴` (additive recurrence).
pub fn sample_points(count: usize) -> Vec<[f64; 4]> {
    let steps = [
        0.618_033_988_749_895,
        0.414_213_562_373_095,
        0.732_050_807_568_877,
        0.236_067_977_499_79,
    ];
    (1..=count)
        .map(|k| {
            let mut v = [0.0; 4];
            for (slot, step) in v.iter_mut().zip(steps) {
                *slot = 4.0 * (k as f64 * step).fract() - 2.0;
            }
            v
        })
        .collect()
}

pub fn run(opts: &ValidateOptions) -> ValidationReport {
    let grid = Grid::new(opts.grid);
    ValidationReport {
        suites: vec![
            fock_suite(),
            gcs_suite(opts.grid),
            modes_suite(opts.inverse_form),
            puo_suite(&grid, opts.inverse_form),
            classical_suite(&grid),
        ],
    }
}

pub fn fock_suite() -> Suite {
    let truncations = [0usize, 1, 2, 5, 20, 60];
    let adjoint: Vec<f64> = truncations
        .iter()
        .map(|&n| {
            let (a, ad) = fock::ladder_matrices(n);
            if ad == a.adjoint() {
                0.0
            } else {
                1.0
            }
        })
        .collect();

    let commutator: Vec<f64> = truncations
        .iter()
        .map(|&n| {
            let (a, ad) = fock::ladder_matrices(n);
            let mut expected = OperatorMatrix::identity(n + 1);
            if n > 0 {
                let mut e = expected.entries().clone();
                e[[n, n]] = Complex64::new(-(n as f64), 0.0);
                expected = OperatorMatrix::from_array(e).unwrap();
            } else {
                expected = OperatorMatrix::zeros(1);
            }
            (&a.commutator(&ad) - &expected).max_abs_leading(n + 1)
        })
        .collect();

    let canonical: Vec<f64> = [(1.0, 1.0, 10usize), (1.0, 2.0, 10), (0.3, 5.0, 30)]
        .iter()
        .map(|&(m, f, n)| {
            let (x, p) = fock::position_momentum(m, f, n).unwrap();
            let diff = &x.commutator(&p) - &OperatorMatrix::identity(n + 1).scale(Complex64::i());
            diff.max_abs_leading(n.saturating_sub(2))
        })
        .collect();

    let mut realness = Vec::new();
    for sign in [EnergySign::Normal, EnergySign::Ghost] {
        for &(strength, phase) in &[(0.5, 0.3), (2.0, 2.0), (4.0, -1.0)] {
            let spec = OscillatorSpec::new(1.0, 1.5, sign).unwrap();
            let n = gcs::truncation_for(strength, DEFAULT_TAIL_TOL);
            let psi = gcs::build_state(&spec, &GcsLabel::new(strength, phase).unwrap(), n).unwrap();
            let (x, p) = fock::position_momentum(1.0, 1.5, n).unwrap();
            for op in [x.dot(&x), p.dot(&p), fock::number_operator(n), &x + &p] {
                realness.push(fock::expectation(&psi, &op).unwrap().im.abs());
            }
        }
    }

    let dim = 8;
    let mut ortho = Vec::new();
    for m in 0..dim {
        for n in 0..dim {
            let ip = FockVector::basis(dim, m).inner(&FockVector::basis(dim, n));
            let want = if m == n { 1.0 } else { 0.0 };
            ortho.push((ip - Complex64::new(want, 0.0)).norm());
        }
    }

    Suite {
        name: "fock",
        checks: vec![
            Check::new("ladder adjointness (exact)", Bound::AtMost(0.0), &adjoint),
            Check::new("truncated [a, a+] = I - (N+1) e_NN", Bound::AtMost(1e-12), &commutator),
            Check::new("[x, p] = i on leading block", Bound::AtMost(1e-12), &canonical),
            Check::new(
                "Hermitian expectations are real",
                Bound::AtMost(fock::HERMITIAN_IMAG_TOL),
                &realness,
            ),
            Check::new("number basis orthonormal (exact)", Bound::AtMost(0.0), &ortho),
        ],
    }
}

fn gcs_cases(grid: GridSize) -> Vec<(OscillatorSpec, GcsLabel)> {
    let (mass_freq, strengths, phases): (&[(f64, f64)], &[f64], &[f64]) = match grid {
        GridSize::Full => (
            &[(1.0, 1.0), (1.0, 2.0), (0.5, 3.0), (2.0, 0.7)],
            &[0.0, 0.5, 1.0, 2.0, 4.0],
            &[0.0, 0.4, FRAC_PI_2, 2.5, PI, -1.3],
        ),
        GridSize::Small => (&[(1.0, 2.0), (0.5, 3.0)], &[0.0, 1.0, 4.0], &[0.0, 2.5]),
    };
    let mut out = Vec::new();
    for sign in [EnergySign::Normal, EnergySign::Ghost] {
        for &(m, f) in mass_freq {
            for &s in strengths {
                for &ph in phases {
                    out.push((OscillatorSpec::new(m, f, sign).unwrap(), GcsLabel::new(s, ph).unwrap()));
                }
            }
        }
    }
    out
}

pub fn gcs_suite(grid: GridSize) -> Suite {
    let cases = gcs_cases(grid);
    struct Row {
        oracle: f64,
        alpha: f64,
        closed_disp: f64,
        numeric_disp: f64,
        evolution: f64,
        ehrenfest: f64,
        quarter: f64,
    }
    let times: Vec<f64> = (0..20).map(|i| 0.37 * i as f64).collect();
    let rows: Vec<Row> = cases
        .par_iter()
        .map(|(spec, label)| {
            let n = gcs::truncation_for(label.strength(), DEFAULT_TAIL_TOL);
            let cf = gcs::second_moments_and_dispersions(spec, label);
            let num = gcs::numeric_moments(spec, label, n).expect("grid truncation is sufficient");
            let pairs = [
                (cf.mean_pos, num.mean_pos),
                (cf.mean_mom, num.mean_mom),
                (cf.mean_pos_sq, num.mean_pos_sq),
                (cf.mean_mom_sq, num.mean_mom_sq),
                (cf.var_pos, num.var_pos),
                (cf.var_mom, num.var_mom),
                (cf.uncertainty_product, num.uncertainty_product),
                (cf.energy, num.energy),
            ];
            let oracle = pairs.iter().map(|&(a, b)| oracle_score(a, b)).fold(0.0, f64::max);

            let psi = gcs::build_state(spec, label, n).unwrap();
            let (a, _) = fock::ladder_matrices(n);
            let alpha = (fock::expectation(&psi, &a).unwrap() - gcs::coherent_parameter(spec, label)).norm();

            let mf = spec.mass() * spec.freq();
            let exact = cf.var_pos == 1.0 / (2.0 * mf) && cf.var_mom == mf / 2.0 && cf.uncertainty_product == 0.25;
            let closed_disp = if exact { 0.0 } else { 1.0 };
            let numeric_disp = (num.var_pos - 1.0 / (2.0 * mf))
                .abs()
                .max((num.var_mom - mf / 2.0).abs())
                .max((num.uncertainty_product - 0.25).abs());

            let n_ev = gcs::truncation_for(label.strength(), 1e-14) + 4;
            let evolution = [0.37, 1.9, 6.0]
                .iter()
                .map(|&t| {
                    let evolved = gcs::evolve(spec, &gcs::build_state_unchecked(spec, label, n_ev), t);
                    let shifted = gcs::build_state_unchecked(spec, &label.advanced(spec.freq(), t), n_ev);
                    (evolved.inner(&shifted).norm() - 1.0).abs()
                })
                .fold(0.0, f64::max);

            let ehrenfest = classical::ehrenfest_residual(spec, label, &times);

            let quarter = if spec.sign() == EnergySign::Ghost {
                let normal = OscillatorSpec::normal(spec.mass(), spec.freq()).unwrap();
                let (xg, pg) = gcs::first_moments(spec, label);
                let shifted = GcsLabel::new(label.strength(), label.phase() - FRAC_PI_2).unwrap();
                let (xn, pn) = gcs::first_moments(&normal, &shifted);
                (xg - xn).abs().max((pg + pn).abs())
            } else {
                0.0
            };
            Row {
                oracle,
                alpha,
                closed_disp,
                numeric_disp,
                evolution,
                ehrenfest,
                quarter,
            }
        })
        .collect();

    let col = |f: fn(&Row) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    Suite {
        name: "gcs",
        checks: vec![
            Check::new(
                "closed vs Fock moments (scaled, pass <= 1)",
                Bound::AtMost(1.0),
                &col(|r| r.oracle),
            ),
            Check::new("<a> equals coherent parameter", Bound::AtMost(1e-10), &col(|r| r.alpha)),
            Check::new(
                "closed dispersions exactly 1/(2mf), mf/2, 1/4",
                Bound::AtMost(0.0),
                &col(|r| r.closed_disp),
            ),
            Check::new(
                "numeric dispersions label-independent",
                Bound::AtMost(1e-8),
                &col(|r| r.numeric_disp),
            ),
            Check::new(
                "time evolution equals phase shift",
                Bound::AtMost(1e-10),
                &col(|r| r.evolution),
            ),
            Check::new(
                "Ehrenfest d2<pos>/dt2 = -f^2 <pos>",
                Bound::AtMost(EHRENFEST_TOL),
                &col(|r| r.ehrenfest),
            ),
            Check::new(
                "ghost/normal quarter-period relation",
                Bound::AtMost(PHASE_RELATION_TOL),
                &col(|r| r.quarter),
            ),
        ],
    }
}

pub fn modes_suite(form: InverseForm) -> Suite {
    let sweep = ratio_sweep();
    let points = sample_points(64);

    let forward_sym: Vec<f64> = sweep.iter().map(modes::symplectic_residual).collect();
    let inverse_sym: Vec<f64> = sweep
        .iter()
        .map(|p| modes::inverse_symplectic_residual(p, form))
        .collect();

    let mut round_trip = Vec::new();
    let mut energy = Vec::new();
    let mut linearity = Vec::new();
    for params in &sweep {
        let (puo_unit, mode_unit) = natural_units(params);
        for v in &points {
            let v_puo = scaled(*v, puo_unit);
            let v_mode = scaled(*v, mode_unit);
            let scale = v.iter().fold(1.0_f64, |a, b| a.max(b.abs()));
            let pt = PuoPhasePoint::from_array(v_puo);
            let back = modes::inverse_with(params, &modes::forward(params, &pt), form);
            let err_a = max_diff(unscaled(back.to_array(), puo_unit), *v) / scale;
            let mp = ModePhasePoint::from_array(v_mode);
            let fwd = modes::forward(params, &modes::inverse_with(params, &mp, form));
            let err_b = max_diff(unscaled(fwd.to_array(), mode_unit), *v) / scale;
            round_trip.push(err_a.max(err_b));

            let h_puo = modes::hamiltonian_puo(params, &pt);
            let h_modes = modes::hamiltonian_modes(params, &modes::forward(params, &pt));
            let mag = quadratic_magnitude(params, &pt);
            energy.push((h_puo - h_modes).abs() / mag);
        }
        for pair in points.windows(2) {
            let (a, b) = (2.5, -0.75);
            let combo: Vec<f64> = pair[0].iter().zip(pair[1]).map(|(x, y)| a * x + b * y).collect();
            let lhs = modes::forward(params, &PuoPhasePoint::new(combo[0], combo[1], combo[2], combo[3])).to_array();
            let f0 = modes::forward(params, &PuoPhasePoint::from_array(pair[0])).to_array();
            let f1 = modes::forward(params, &PuoPhasePoint::from_array(pair[1])).to_array();
            let rhs: Vec<f64> = f0.iter().zip(f1).map(|(x, y)| a * x + b * y).collect();
            let scale = lhs.iter().chain(&rhs).fold(1.0_f64, |m, v| m.max(v.abs()));
            let err = lhs.iter().zip(&rhs).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            linearity.push(err / scale);
        }
    }

    Suite {
        name: "modes",
        checks: vec![
            Check::new("forward map symplectic", Bound::AtMost(CANONICAL_TOL), &forward_sym),
            Check::new("inverse map symplectic", Bound::AtMost(CANONICAL_TOL), &inverse_sym),
            Check::new("round trip identity", Bound::AtMost(CANONICAL_TOL), &round_trip),
            Check::new(
                "H_puo = H_modes o forward (relative)",
                Bound::AtMost(CANONICAL_TOL),
                &energy,
            ),
            Check::new("forward map linear", Bound::AtMost(CANONICAL_TOL), &linearity),
        ],
    }
}

/// Component units set by the smaller frequency `f`: `(z, p_z, q, p_q)` carry
/// `(1, f³, f, f²)` and `(X, P, x, p)` carry `(f, f², f, f²)`, so only `Ω/ω`
/// is left free.
fn natural_units(params: &PuoParams) -> ([f64; 4], [f64; 4]) {
    let f = params.small_freq();
    ([1.0, f.powi(3), f, f * f], [f, f * f, f, f * f])
}

fn scaled(v: [f64; 4], unit: [f64; 4]) -> [f64; 4] {
    std::array::from_fn(|i| v[i] * unit[i])
}

fn unscaled(v: [f64; 4], unit: [f64; 4]) -> [f64; 4] {
    std::array::from_fn(|i| v[i] / unit[i])
}

fn max_diff(a: [f64; 4], b: [f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Sum of the magnitudes of the terms in the oscillator Hamiltonian, used as
/// the scale for relative energy comparisons (the Hamiltonian is indefinite).
fn quadratic_magnitude(params: &PuoParams, pt: &PuoPhasePoint) -> f64 {
    let (b2, w2) = (params.big_freq().powi(2), params.small_freq().powi(2));
    let m = 0.5 * (pt.p_q * pt.p_q + (2.0 * pt.q * pt.p_z).abs() + (b2 + w2) * pt.q * pt.q + b2 * w2 * pt.z * pt.z);
    m.max(f64::MIN_POSITIVE)
}

/// Cutoff for time sweeps: the tail rule at [`SWEEP_TAIL_TOL`].
pub fn sweep_truncation(label: &PuoStateLabel) -> Truncation {
    Truncation::Fixed(gcs::truncation_for(
        label.big_strength().max(label.small_strength()),
        SWEEP_TAIL_TOL,
    ))
}

/// Log-spaced `Ω/ω` values for the asymptotic scan.
pub fn asymptotic_ratios() -> Vec<f64> {
    (0..=12).map(|k| 10f64.powf(2.0 + 0.25 * k as f64)).collect()
}

pub fn puo_suite(grid: &Grid, form: InverseForm) -> Suite {
    let points = grid.points();
    let rows: Vec<(f64, f64, f64)> = points
        .par_iter()
        .map(|(params, label)| {
            let cf = puo::closed_moments(params, label);
            match puo::numeric_moments_with(params, label, Truncation::Auto, form) {
                Ok(num) => {
                    let score = cf
                        .values()
                        .iter()
                        .zip(num.values())
                        .map(|(a, b)| oracle_score(*a, b))
                        .fold(0.0, f64::max);
                    let (e_modes, e_form) = puo::numeric_energy_cross_check(params, label, Truncation::Auto).unwrap();
                    (score, num.constraint_residual, oracle_score(e_modes, e_form))
                }
                Err(_) => (f64::INFINITY, f64::INFINITY, f64::INFINITY),
            }
        })
        .collect();

    // time sweeps over [0, 10] at each grid label
    let sweep_times: Vec<f64> = (0..=20).map(|i| 0.5 * i as f64).collect();
    let invariance: Vec<f64> = grid
        .initial_points()
        .par_iter()
        .map(|(params, label)| {
            let truncation = sweep_truncation(label);
            let reports: Vec<MomentReport> = sweep_times
                .iter()
                .map(|&t| puo::numeric_moments_with(params, &label.at_time(t), truncation, form).unwrap())
                .collect();
            let spread = |f: fn(&MomentReport) -> f64| {
                let (lo, hi) = reports
                    .iter()
                    .map(f)
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
                hi - lo
            };
            spread(|r| r.var_z)
                .max(spread(|r| r.var_pz))
                .max(spread(|r| r.uncertainty_product))
        })
        .collect();

    let mut energy_margin = Vec::new();
    let mut product_margin = Vec::new();
    for &ratio in grid.ratios.iter().chain(&[1.0001, 1.01, 100.0, 1e4]) {
        let params = PuoParams::new(ratio, 1.0).unwrap();
        for &s in grid.strengths.iter().chain(&[10.0, 50.0]) {
            energy_margin.push(puo::energy_positivity(&params, s).0);
        }
        product_margin.push(puo::uncertainty_product_exact(&params) - 0.25);
    }

    let spot = {
        let params = PuoParams::new(100.0, 1.0).unwrap();
        vec![(puo::asymptotic_product(&params).exact - 0.252_550_8).abs()]
    };
    let ratios = asymptotic_ratios();
    let gaps: Vec<f64> = ratios
        .iter()
        .map(|&r| puo::asymptotic_product(&PuoParams::new(r, 1.0).unwrap()).gap)
        .collect();
    // local slope of log(gap) against log(ω/Ω)
    let slopes: Vec<f64> = ratios
        .windows(2)
        .zip(gaps.windows(2))
        .map(|(r, g)| (g[0] / g[1]).ln() / (r[1] / r[0]).ln())
        .collect();
    let slope_dev: Vec<f64> = slopes.iter().map(|s| (s - 2.0).abs()).collect();

    let eom: Vec<f64> = grid
        .initial_points()
        .par_iter()
        .map(|(params, label)| {
            let f = |t: f64| puo::closed_moments(params, &label.at_time(t)).mean_z;
            let times: Vec<f64> = (0..16).map(|i| 0.6 * i as f64).collect();
            classical::equation_of_motion_residual(params, f, &times)
        })
        .collect();

    let tensor = {
        let params = PuoParams::new(2.0, 1.0).unwrap();
        let label = PuoStateLabel::new(0.5, 0.3, 0.5, 1.1, 0.4).unwrap();
        tensor_product_spot_check(&params, &label, 12, form)
    };

    Suite {
        name: "puo",
        checks: vec![
            Check::new(
                "closed vs Fock report fields (scaled, pass <= 1)",
                Bound::AtMost(1.0),
                &rows.iter().map(|r| r.0).collect::<Vec<_>>(),
            ),
            Check::new(
                "constraint |<zdot> - <q>|",
                Bound::AtMost(CONSTRAINT_TOL),
                &rows.iter().map(|r| r.1).collect::<Vec<_>>(),
            ),
            Check::new(
                "energy: mode form vs original form (scaled)",
                Bound::AtMost(1.0),
                &rows.iter().map(|r| r.2).collect::<Vec<_>>(),
            ),
            Check::new(
                "dispersions time invariant over t in [0, 10]",
                Bound::AtMost(TIME_INVARIANCE_TOL),
                &invariance,
            ),
            Check::new("energy > 0 when J = j", Bound::Above(0.0), &energy_margin),
            Check::new("uncertainty product - 1/4 > 0", Bound::Above(0.0), &product_margin),
            Check::new("product at ratio 100 vs 0.2525508", Bound::AtMost(1e-6), &spot),
            Check::new(
                "asymptotic gap slope vs (w/W)^2 (|slope - 2|)",
                Bound::AtMost(0.1),
                &slope_dev,
            ),
            Check::new(
                "<z>(t) solves the 4th-order equation",
                Bound::AtMost(EOM_RESIDUAL_TOL),
                &eom,
            ),
            Check::new(
                "factorized vs tensor-product moments at N=12 (scaled)",
                Bound::AtMost(1.0),
                &[tensor],
            ),
        ],
    }
}

/// Builds the full product state and Kronecker-product operators for `z` and
/// `p_z`, and scores their moments against the factorized numeric path.
pub fn tensor_product_spot_check(params: &PuoParams, label: &PuoStateLabel, n_max: usize, form: InverseForm) -> f64 {
    let (b, w) = (params.big_freq(), params.small_freq());
    let s = params.splitting();
    let normal = OscillatorSpec::normal(1.0, b).unwrap();
    let ghost = OscillatorSpec::ghost(1.0, w).unwrap();
    let psi = gcs::build_state(&normal, &label.normal_label(params), n_max).unwrap();
    let phi = gcs::build_state(&ghost, &label.ghost_label(params), n_max).unwrap();
    let joint = psi.kron(&phi);
    let (big_x, big_p) = fock::position_momentum(1.0, b, n_max).unwrap();
    let (x, p) = fock::position_momentum(1.0, w, n_max).unwrap();
    let id = OperatorMatrix::identity(n_max + 1);
    let re = |c: f64| Complex64::new(c, 0.0);
    let z_op = (&id.kron(&x) - &big_p.kron(&id).scale(re(1.0 / b))).scale(re(1.0 / s));
    let pz_op = (&id.kron(&p).scale(re(b * b)) - &big_x.kron(&id).scale(re(b * w * w))).scale(re(1.0 / s));
    let ev = |op: &OperatorMatrix| fock::expectation(&joint, op).unwrap().re;
    let num = match puo::numeric_moments_with(params, label, Truncation::Fixed(n_max), form) {
        Ok(r) => r,
        Err(_) => return f64::INFINITY,
    };
    [
        (ev(&z_op), num.mean_z),
        (ev(&z_op.dot(&z_op)), num.mean_z_sq),
        (ev(&pz_op), num.mean_pz),
        (ev(&pz_op.dot(&pz_op)), num.mean_pz_sq),
    ]
    .iter()
    .map(|&(a, b)| oracle_score(a, b))
    .fold(0.0, f64::max)
}

pub fn classical_suite(grid: &Grid) -> Suite {
    let params = PuoParams::new(2.0, 1.0).unwrap();
    let solutions = [
        TwoModeSolution {
            amp_big: 1.0,
            phase_big: 0.0,
            amp_small: 1.0,
            phase_small: 0.0,
        },
        TwoModeSolution {
            amp_big: 0.3,
            phase_big: 1.2,
            amp_small: 2.0,
            phase_small: -0.4,
        },
    ];
    let times: Vec<f64> = (0..40).map(|i| 0.25 * i as f64).collect();
    let mut eom = Vec::new();
    for sweep_params in [
        params,
        PuoParams::new(5.0, 1.0).unwrap(),
        PuoParams::new(1.1, 1.0).unwrap(),
    ] {
        for sol in &solutions {
            eom.push(classical::equation_of_motion_residual(
                &sweep_params,
                |t| sol.value(&sweep_params, t),
                &times,
            ));
        }
    }
    let analytic: Vec<f64> = solutions
        .iter()
        .map(|s| classical::max_error_vs_analytic(&params, s, 10.0, 1e-3).unwrap())
        .collect();
    let order: Vec<f64> = solutions
        .iter()
        .map(|s| classical::convergence_order(&params, s, 10.0, 0.05).unwrap())
        .collect();

    let correspondence: Vec<f64> = grid
        .initial_points()
        .par_iter()
        .map(|(p, label)| classical::match_expectation(p, label, 10.0, 1e-3).unwrap_or(f64::INFINITY))
        .collect();

    let mut ehrenfest = Vec::new();
    for &ratio in &grid.ratios {
        let p = PuoParams::new(ratio, 1.0).unwrap();
        for &strength in &grid.strengths {
            for &phase in &grid.phases {
                let label = GcsLabel::new(strength, phase).unwrap();
                let normal = OscillatorSpec::normal(1.0, p.big_freq()).unwrap();
                let ghost = OscillatorSpec::ghost(1.0, p.small_freq()).unwrap();
                ehrenfest.push(classical::ehrenfest_residual(&normal, &label, &times));
                ehrenfest.push(classical::ehrenfest_residual(&ghost, &label, &times));
            }
        }
    }

    Suite {
        name: "classical",
        checks: vec![
            Check::new(
                "two-mode solutions annihilate the operator",
                Bound::AtMost(EOM_RESIDUAL_TOL),
                &eom,
            ),
            Check::new(
                "RK4 vs analytic, dt = 1e-3, t <= 10",
                Bound::AtMost(RK4_ANALYTIC_TOL),
                &analytic,
            ),
            Check::new("RK4 empirical order", Bound::AtLeast(MIN_RK4_ORDER), &order),
            Check::new(
                "max |<z>(t) - z_classical(t)|, t <= 10",
                Bound::AtMost(CORRESPONDENCE_TOL),
                &correspondence,
            ),
            Check::new("single-mode Ehrenfest", Bound::AtMost(EHRENFEST_TOL), &ehrenfest),
        ],
    }
}
