//! One-dimensional quadrature rules.
//!
//! * [`integrate`] / [`integrate_with_breaks`]: globally adaptive
//!   Gauss–Kronrod (7/15 point) with bisection of the worst interval.
//! * [`gauss_legendre`]: nodes and weights of the n-point Gauss–Legendre rule.
//! * [`periodic_trapezoid`]: equal-weight rule over a full period, spectrally
//!   accurate for smooth periodic integrands.
//!
//! Integrands are fallible (`FnMut(f64) -> Result<f64>`) so that errors raised
//! while evaluating an antiderivative reach the caller with the offending
//! abscissa instead of being folded into a NaN.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Weights of the embedded 7-point Gauss rule (nodes XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Stopping rule for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

impl QuadOptions {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    resabs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod_panel<F>(f: &mut F, lo: f64, hi: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut resabs = WGK[7] * fc.abs();
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        kronrod += w * (f1 + f2);
        resabs += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let resabs = resabs * half.abs();
    let error = ((kronrod - gauss) * half)
        .abs()
        .max(50.0 * f64::EPSILON * resabs);
    Ok(Panel {
        lo,
        hi,
        value,
        error,
        resabs,
    })
}

/// Adaptive Gauss–Kronrod integral of `f` over `[lo, hi]`.
pub fn integrate<F>(f: F, lo: f64, hi: f64, opts: QuadOptions) -> Result<QuadEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_with_breaks(f, &[lo, hi], opts)
}

/// Adaptive integral over `[points[0], points[last]]`, starting from the
/// subdivision given by `points` (which must be sorted). Interior points are
/// where the integrand has kinks or jumps.
pub fn integrate_with_breaks<F>(mut f: F, points: &[f64], opts: QuadOptions) -> Result<QuadEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "quadrature needs at least two break points".into(),
        ));
    }
    let (lo, hi) = (points[0], points[points.len() - 1]);
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "quadrature bounds must be finite, got [{lo}, {hi}]"
        )));
    }
    if lo > hi {
        let reversed: Vec<f64> = points.iter().rev().copied().collect();
        let est = integrate_with_breaks(f, &reversed_sorted(&reversed), opts)?;
        return Ok(QuadEstimate {
            value: -est.value,
            ..est
        });
    }

    let mut heap = BinaryHeap::new();
    for pair in points.windows(2) {
        if pair[1] > pair[0] {
            heap.push(kronrod_panel(&mut f, pair[0], pair[1])?);
        }
    }
    if heap.is_empty() {
        return Ok(QuadEstimate {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }

    loop {
        let (value, error, resabs) = heap.iter().fold((0.0, 0.0, 0.0), |acc, p| {
            (acc.0 + p.value, acc.1 + p.error, acc.2 + p.resabs)
        });
        let target = opts
            .abs_tol
            .max(opts.rel_tol * value.abs())
            .max(50.0 * f64::EPSILON * resabs);
        if error <= target {
            return Ok(QuadEstimate {
                value,
                error,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        let exhausted = heap.len() + 2 > opts.max_intervals;
        if exhausted || mid <= worst.lo || mid >= worst.hi {
            return Err(Error::Quadrature {
                lo: worst.lo,
                hi: worst.hi,
                estimate: error,
            });
        }
        heap.push(kronrod_panel(&mut f, worst.lo, mid)?);
        heap.push(kronrod_panel(&mut f, mid, worst.hi)?);
    }
}

fn reversed_sorted(points: &[f64]) -> Vec<f64> {
    let mut v = points.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Convenience wrapper for infallible integrands; non-finite values are
/// reported as [`Error::NonFinite`].
pub fn integrate_plain<F>(mut f: F, lo: f64, hi: f64, opts: QuadOptions) -> Result<QuadEstimate>
where
    F: FnMut(f64) -> f64,
{
    integrate(
        |x| {
            let y = f(x);
            crate::error::finite_at(x, y)
        },
        lo,
        hi,
        opts,
    )
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// nodes in increasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss–Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi's initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre nodes and weights mapped onto `[lo, hi]`.
pub fn gauss_legendre_on(n: usize, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let (nodes, weights) = gauss_legendre(n);
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    nodes
        .into_iter()
        .zip(weights)
        .map(|(x, w)| (mid + half * x, half * w))
        .collect()
}

/// Integral of a 2π-periodic function over one period with `n` equally
/// spaced nodes.
pub fn periodic_trapezoid<F>(mut f: F, n: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let h = std::f64::consts::TAU / n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        sum += f(k as f64 * h)?;
    }
    Ok(sum * h)
}
