//! Fixtures shared by the criterion benches in `benches/`.

use std::f64::consts::PI;

use termint::integrand::{catalog, Integrand};
use termint::TerminationDerivative;

/// Integrands with a termination under which they converge.
pub fn one_dimensional_cases() -> Vec<(&'static str, Integrand, TerminationDerivative)> {
    vec![
        (
            "sin_pair",
            catalog("sin_ax", &[("alpha", 1.0)]).unwrap(),
            TerminationDerivative::pair(PI).unwrap(),
        ),
        (
            "x_cos_triple",
            catalog("x_cos_ax", &[("alpha", 2.5)]).unwrap(),
            TerminationDerivative::triple(PI / 2.5).unwrap(),
        ),
        (
            "sin_box",
            catalog("sin_ax", &[("alpha", 1.0)]).unwrap(),
            TerminationDerivative::make_box(2.0 * PI).unwrap(),
        ),
        (
            "cos_over_x_comb",
            catalog("cos_xy_over_x", &[("y", 1.0)]).unwrap(),
            TerminationDerivative::binomial_comb(PI, 10).unwrap(),
        ),
    ]
}
