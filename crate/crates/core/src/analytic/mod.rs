//! High-precision analytic verification: complex balls, eta/theta/`j`, the
//! level-47 Hauptmodul, Borcherds products, conjugate Heegner values, class
//! polynomials and the norm cross-check.
//!
//! Evaluation is by direct q-series at the given point; no modular argument
//! reduction is attempted, so points must satisfy `Im z ≥ 10⁻³`.

mod ball;
mod borcherds;
mod classpoly;
mod modular;

pub use ball::{BigComplex, PrecisionContext};
pub use borcherds::{borcherds_eval, BorcherdsInput};
pub use classpoly::{
    class_polynomial, class_polynomial_verified, conjugate_values, conjugate_values_with,
    conjugation_fixed_classes, gz_log_norm, heegner_point, norm_crosscheck, precision_policy,
    ClassPolynomial, ConjugateValue, IntPoly, Model, NormCheck, PrimeNorm, MAX_RESIDUAL,
};
pub use modular::{e4, eta, hauptmodul47, j_invariant, theta_form, MIN_IMAG};
