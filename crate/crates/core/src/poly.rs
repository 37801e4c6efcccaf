//! Dense polynomials in a single variable, coefficients lowest degree first.

pub(crate) fn eval(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

/// ∫₀ᵗ p(s) ds.
pub(crate) fn integral_from_zero(coeffs: &[f64], t: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .rev()
        .fold(0.0, |acc, (k, &c)| acc * t + c / (k as f64 + 1.0))
        * t
}

pub(crate) fn add_into(acc: &mut Vec<f64>, other: &[f64], scale: f64) {
    if acc.len() < other.len() {
        acc.resize(other.len(), 0.0);
    }
    for (a, &b) in acc.iter_mut().zip(other) {
        *a += scale * b;
    }
}

pub(crate) fn mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

pub(crate) fn pow(p: &[f64], n: usize) -> Vec<f64> {
    (0..n).fold(vec![1.0], |acc, _| mul(&acc, p))
}

/// Coefficients of q(τ) = p(τ + shift).
pub(crate) fn taylor_shift(coeffs: &[f64], shift: f64) -> Vec<f64> {
    let mut out = coeffs.to_vec();
    let n = out.len();
    // Repeated synthetic division (Horner's scheme for the shift).
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            out[j] += shift * out[j + 1];
        }
    }
    out
}

/// Coefficients of q(τ) = p(s·τ).
pub(crate) fn scale_argument(coeffs: &[f64], s: f64) -> Vec<f64> {
    let mut factor = 1.0;
    coeffs
        .iter()
        .map(|&c| {
            let v = c * factor;
            factor *= s;
            v
        })
        .collect()
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
