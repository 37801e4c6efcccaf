//! Regularised improper integrals `∫_a^∞ f` defined through termination
//! functions.
//!
//! A termination function `z` tapers the integrand past a cut-off `b`. With
//! an antiderivative `F`, the value is
//!
//! ```text
//! Z∫_a^∞ f(x) dx = -F(a) - lim_{b→∞} ∫_0^c F(x+b) z′(x) dx
//! ```
//!
//! which agrees with the conventional integral whenever that exists and
//! assigns finite values to many oscillatory integrals that do not converge.

pub mod calculus;
pub mod error;
pub mod evaluator;
pub mod integrand;
pub mod plane2d;
mod poly;
pub mod quadrature;
pub mod termination;

pub use error::{Error, Result};
pub use evaluator::{
    detect_limit, evaluate, evaluate_with, linearity_check, tail, uniqueness_report,
    IntegralResult, LimitPolicy, LimitReport, LimitStatus, TailSample,
};
pub use integrand::{catalog, catalog_get, Antiderivative, Integrand, NumericAntiderivative};
pub use termination::{Atom, DensitySegment, TerminationDerivative, ValidationReport};
