//! Generalized coherent states for the Pais-Uhlenbeck oscillator.
//!
//! The fourth-order oscillator `z'''' + (Ω² + ω²) z'' + Ω² ω² z = 0` with
//! `Ω > ω` decouples into a normal oscillator of frequency `Ω` and a ghost
//! oscillator of frequency `ω` whose energy levels are all negative. This crate
//! builds coherent states for both, forms their product, and evaluates the
//! physical `z, p_z` moments two ways: from closed-form expressions and by brute
//! force in a truncated number basis. A classical integrator of the equation of
//! motion provides a third, independent route for `⟨z⟩(t)`.
//!
//! Units: `ħ = 1`. Oscillator masses are general in [`gcs`] and fixed to one in
//! [`puo`].
//!
//! Modules, bottom up:
//!
//! - [`fock`]: dense ladder, position and momentum matrices at truncation `N`.
//! - [`gcs`]: single-oscillator coherent states for either energy sign.
//! - [`modes`]: the linear canonical map between `(z, p_z, q, p_q)` and the
//!   decoupled `(X, P, x, p)`.
//! - [`puo`]: product states, moment reports, uncertainty asymptotics.
//! - [`classical`]: analytic solutions, an RK4 integrator, finite differences.
//! - [`validate`]: the invariant suites behind `puo validate`.

pub mod classical;
mod error;
pub mod fock;
pub mod gcs;
pub mod modes;
pub mod puo;
pub mod validate;

pub use error::{Error, Result};
pub use num_complex::Complex64;
