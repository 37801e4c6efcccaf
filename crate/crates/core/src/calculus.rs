//! Numerical checks of differentiation under the integral sign, interchange
//! of iterated integrals, and change of variable.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{finite_at, Error, Result};
use crate::evaluator::{evaluate, evaluate_with, LimitPolicy, LimitStatus};
use crate::integrand::{catalog, square_wave, Antiderivative, Integrand};
use crate::quadrature::{self, QuadOptions};
use crate::termination::TerminationDerivative;

pub type Real2Fn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type TerminationMaker = Arc<dyn Fn(f64) -> Result<TerminationDerivative> + Send + Sync>;

/// `f(x, y)` together with its `y`-partial, antiderivatives in `x`, and the
/// termination functions to use for each at a given `y`.
#[derive(Clone)]
pub struct ParametricIntegrand {
    pub label: String,
    pub f: Real2Fn,
    pub f_y: Real2Fn,
    /// Antiderivative of `f` in `x`; numeric from the lower bound when absent.
    pub big_f: Option<Real2Fn>,
    /// Antiderivative of `f_y` in `x`.
    pub big_f_y: Option<Real2Fn>,
    pub termination_maker: TerminationMaker,
    pub termination_maker_deriv: TerminationMaker,
    /// Period in `x` at a given `y`, if any.
    pub period: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
}

impl fmt::Debug for ParametricIntegrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametricIntegrand")
            .field("label", &self.label)
            .field("has_big_f", &self.big_f.is_some())
            .field("has_big_f_y", &self.big_f_y.is_some())
            .finish()
    }
}

fn pair_maker() -> TerminationMaker {
    Arc::new(|y: f64| TerminationDerivative::pair(PI / y.abs()))
}

fn angular_period() -> Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>> {
    Some(Arc::new(|y: f64| 2.0 * PI / y.abs()))
}

/// Order of the binomial comb used for `cos(xy)/x`.
pub const COMB_ORDER: usize = 10;

impl ParametricIntegrand {
    /// `sin(xy)`, whose `y`-derivative `x·cos(xy)` needs the triple
    /// termination.
    pub fn sin_xy() -> Self {
        Self {
            label: "sin_xy".into(),
            f: Arc::new(|x, y| (x * y).sin()),
            f_y: Arc::new(|x, y| x * (x * y).cos()),
            big_f: Some(Arc::new(|x, y| -(x * y).cos() / y)),
            big_f_y: Some(Arc::new(|x, y| x * (x * y).sin() / y + (x * y).cos() / (y * y))),
            termination_maker: pair_maker(),
            termination_maker_deriv: Arc::new(|y: f64| TerminationDerivative::triple(PI / y.abs())),
            period: angular_period(),
        }
    }

    /// `cos(xy)/x`, conventionally convergent for a lower bound `a > 0`.
    /// A high-order binomial comb stands in for the plain cut-off so that
    /// the tail settles to roughly 1e-11 at moderate `b`, which the finite
    /// differences in `y` need.
    pub fn cos_xy_over_x() -> Self {
        Self {
            label: "cos_xy_over_x".into(),
            f: Arc::new(|x, y| (x * y).cos() / x),
            f_y: Arc::new(|x, y| -(x * y).sin()),
            big_f: None,
            big_f_y: Some(Arc::new(|x, y| (x * y).cos() / y)),
            termination_maker: Arc::new(|y: f64| {
                TerminationDerivative::binomial_comb(PI / y.abs(), COMB_ORDER)
            }),
            termination_maker_deriv: pair_maker(),
            period: angular_period(),
        }
    }

    fn slice(&self, label: &str, f: &Real2Fn, big_f: &Option<Real2Fn>, y: f64) -> Result<Integrand> {
        if !y.is_finite() {
            return Err(Error::InvalidArgument(format!("parameter y must be finite, got {y}")));
        }
        let f = f.clone();
        let mut g = Integrand::new(label, move |x| f(x, y)).with_param("y", y);
        if let Some(big_f) = big_f {
            let big_f = big_f.clone();
            g = g.with_antiderivative(move |x| big_f(x, y));
        }
        g.period_hint = self.period.as_ref().map(|p| p(y));
        Ok(g)
    }

    /// `x ↦ f(x, y)`.
    pub fn at(&self, y: f64) -> Result<Integrand> {
        self.slice(&self.label, &self.f, &self.big_f, y)
    }

    /// `x ↦ ∂f/∂y (x, y)`.
    pub fn derivative_at(&self, y: f64) -> Result<Integrand> {
        self.slice(&format!("d/dy {}", self.label), &self.f_y, &self.big_f_y, y)
    }
}

fn value_at(g: &Integrand, a: f64, zd: &TerminationDerivative, policy: &LimitPolicy) -> Result<f64> {
    evaluate(g, a, zd, policy)?.require_value()
}

/// Central difference in `y` of `Z∫_a^∞ f(x, y) dx`. Every stencil point uses
/// the grid scaled for the period at `y`.
pub fn leibniz_lhs(p: &ParametricIntegrand, a: f64, y: f64, h: f64, policy: &LimitPolicy) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step h must be positive, got {h}")));
    }
    let policy = policy.scaled_for(&p.at(y)?);
    let at = |yy: f64| -> Result<f64> {
        value_at(&p.at(yy)?, a, &(p.termination_maker)(yy)?, &policy)
    };
    Ok((at(y + h)? - at(y - h)?) / (2.0 * h))
}

/// `Z∫_a^∞ ∂f/∂y dx` under the derivative termination.
pub fn leibniz_rhs(p: &ParametricIntegrand, a: f64, y: f64, policy: &LimitPolicy) -> Result<f64> {
    let g = p.derivative_at(y)?;
    let policy = policy.scaled_for(&g);
    value_at(&g, a, &(p.termination_maker_deriv)(y)?, &policy)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeibnizReport {
    pub label: String,
    pub a: f64,
    pub y: f64,
    pub h: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub difference: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Smallest tolerance a Leibniz check uses, whatever `h` and the policy.
pub const LEIBNIZ_TOL_FLOOR: f64 = 1e-6;

/// Passes when `|lhs − rhs| ≤ max(10·h², LEIBNIZ_TOL_FLOOR, policy.tol)`.
pub fn leibniz_check(
    p: &ParametricIntegrand,
    a: f64,
    y: f64,
    h: f64,
    policy: &LimitPolicy,
) -> Result<LeibnizReport> {
    let lhs = leibniz_lhs(p, a, y, h, policy)?;
    let rhs = leibniz_rhs(p, a, y, policy)?;
    let tol = (10.0 * h * h).max(LEIBNIZ_TOL_FLOOR).max(policy.tol);
    let difference = (lhs - rhs).abs();
    Ok(LeibnizReport {
        label: p.label.clone(),
        a,
        y,
        h,
        lhs,
        rhs,
        difference,
        tol,
        passed: difference <= tol,
    })
}

/// `∫_{y_lo}^{y_hi} w(y) Z∫_a^∞ f(x, y) dx dy` against the other order.
#[derive(Clone)]
pub struct WeightedInterchangeProblem {
    pub w: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub f: ParametricIntegrand,
    pub y_lo: f64,
    pub y_hi: f64,
    pub a: f64,
    /// Gauss–Legendre nodes for the outer `y` integral.
    pub partition_count: usize,
    /// Number of times the combined end-point termination is self-combined
    /// for the swapped order.
    pub rhs_order: usize,
}

impl fmt::Debug for WeightedInterchangeProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedInterchangeProblem")
            .field("f", &self.f.label)
            .field("y_lo", &self.y_lo)
            .field("y_hi", &self.y_hi)
            .field("a", &self.a)
            .field("partition_count", &self.partition_count)
            .field("rhs_order", &self.rhs_order)
            .finish()
    }
}

impl WeightedInterchangeProblem {
    pub fn new<W>(w: W, f: ParametricIntegrand, y_lo: f64, y_hi: f64, a: f64, partition_count: usize) -> Self
    where
        W: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            w: Arc::new(w),
            f,
            y_lo,
            y_hi,
            a,
            partition_count,
            rhs_order: 4,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.y_lo.is_finite() && self.y_hi.is_finite() && self.y_lo <= self.y_hi) {
            return Err(Error::InvalidArgument(format!(
                "need finite y_lo <= y_hi, got [{}, {}]",
                self.y_lo, self.y_hi
            )));
        }
        if self.partition_count == 0 {
            return Err(Error::InvalidArgument("partition_count must be positive".into()));
        }
        Ok(())
    }

    /// The termination for the swapped order: the end-point terminations
    /// combined, then self-combined `rhs_order` times.
    pub fn rhs_termination(&self) -> Result<TerminationDerivative> {
        let lo = (self.f.termination_maker)(self.y_lo)?;
        let hi = (self.f.termination_maker)(self.y_hi)?;
        let base = lo.combine(&hi)?;
        let mut zd = base.clone();
        for _ in 1..self.rhs_order.max(1) {
            zd = zd.combine(&base)?;
        }
        Ok(zd)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterchangeReport {
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub difference: Option<f64>,
    pub partition_count: usize,
    /// Outer nodes whose inner integral did not converge.
    pub failed_nodes: Vec<f64>,
    pub rhs_status: LimitStatus,
    pub tol: f64,
    pub passed: bool,
}

const INNER_Y_QUAD: QuadOptions = QuadOptions {
    abs_tol: 1e-14,
    rel_tol: 1e-13,
    max_intervals: 4000,
};

/// Left: Gauss–Legendre over `y` of `w(y)·Z∫f(·, y)`. Right: the
/// Z-integral in `x` of `∫ w(y) f(x, y) dy`, with antiderivative
/// `∫ w(y) F(x, y) dy`, under [`WeightedInterchangeProblem::rhs_termination`].
pub fn interchange_check(p: &WeightedInterchangeProblem, policy: &LimitPolicy) -> Result<InterchangeReport> {
    p.validate()?;
    let big_f = p.f.big_f.clone().ok_or_else(|| {
        Error::Unsupported(format!("`{}` needs a closed-form F(x, y) for the swapped order", p.f.label))
    })?;
    let nodes = quadrature::gauss_legendre_on(p.partition_count, p.y_lo, p.y_hi);
    let inner: Vec<(f64, f64, Option<f64>)> = nodes
        .par_iter()
        .map(|&(y, weight)| {
            let g = p.f.at(y)?;
            let zd = (p.f.termination_maker)(y)?;
            let r = evaluate(&g, p.a, &zd, &policy.scaled_for(&g))?;
            Ok((y, weight, r.value))
        })
        .collect::<Result<_>>()?;
    let failed_nodes: Vec<f64> = inner.iter().filter(|n| n.2.is_none()).map(|n| n.0).collect();
    let lhs = failed_nodes
        .is_empty()
        .then(|| inner.iter().map(|&(y, wt, v)| wt * (p.w)(y) * v.unwrap_or(0.0)).sum::<f64>());

    let (w, f, lo, hi) = (p.w.clone(), p.f.f.clone(), p.y_lo, p.y_hi);
    let swapped = Integrand::new(format!("int w(y) {}(x, y) dy", p.f.label), move |x| {
        quadrature::integrate(|y| finite_at(y, w(y) * f(x, y)), lo, hi, INNER_Y_QUAD)
            .map_or(f64::NAN, |e| e.value)
    });
    let w = p.w.clone();
    let swapped_big_f = Antiderivative::from_fallible(move |x| {
        Ok(quadrature::integrate(|y| finite_at(y, w(y) * big_f(x, y)), lo, hi, INNER_Y_QUAD)?.value)
    });
    let rhs_zd = p.rhs_termination()?;
    let rhs_policy = policy.scaled_for(&p.f.at(p.y_lo)?);
    let rhs_result = evaluate_with(&swapped, &swapped_big_f, p.a, &rhs_zd, &rhs_policy)?;
    let rhs = rhs_result.value;
    let difference = lhs.zip(rhs).map(|(l, r)| (l - r).abs());
    Ok(InterchangeReport {
        lhs,
        rhs,
        difference,
        partition_count: p.partition_count,
        failed_nodes,
        rhs_status: rhs_result.status(),
        tol: policy.tol,
        passed: difference.is_some_and(|d| d <= policy.tol),
    })
}

/// Outcome of substituting `u = r + s·x` in `Z∫_{lower}^∞ f(u) du`.
#[derive(Debug, Clone)]
pub struct LinearSubstitution {
    /// `x ↦ f(r + s·x)` with antiderivative `F(r + s·x)/s`.
    pub integrand: Integrand,
    /// `z′` of `x ↦ ζ(s·x)`.
    pub termination: TerminationDerivative,
    /// `(lower − r)/s`.
    pub lower_bound: f64,
    /// Multiply the transformed value by this to recover the original.
    pub factor: f64,
}

/// Linear change of variable `u = r + s·x`, `s > 0`. The original value
/// equals `factor · Z∫_{lower_bound}^∞ integrand` under `termination`.
pub fn linear_change_of_variable(
    g: &Integrand,
    zeta: &TerminationDerivative,
    lower: f64,
    r: f64,
    s: f64,
) -> Result<LinearSubstitution> {
    if !(s > 0.0 && s.is_finite()) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "need finite r and s > 0, got r = {r}, s = {s}"
        )));
    }
    let f = g.f.clone();
    let mut t = Integrand::new(format!("{}(r + s x)", g.label), move |x| f(r + s * x));
    t.params = g.params.clone();
    t.params.insert("r".into(), r);
    t.params.insert("s".into(), s);
    if let Some(big_f) = g.antiderivative.clone() {
        t.antiderivative = Some(Antiderivative::from_fallible(move |x| Ok(big_f.eval(r + s * x)? / s)));
    }
    t.period_hint = g.period_hint.map(|p| p / s);
    t.growth_rate = g.growth_rate.map(|rate| rate * s);
    Ok(LinearSubstitution {
        integrand: t,
        termination: zeta.rescaled(s)?,
        lower_bound: (lower - r) / s,
        factor: s,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub alpha: f64,
    /// `Z∫_0^∞` of the square wave.
    pub base: f64,
    /// `Z∫_0^∞ απ·f(u)·cos(πu) du` under `z(u) = 1 − u` on `[0, 1]`.
    pub second_term: f64,
    /// `base + second_term`.
    pub substituted: f64,
    /// The substituted integrand evaluated directly under a two-unit box.
    pub direct_warped: f64,
    pub difference: f64,
    /// The difference asserted for this construction, `2α`.
    pub stated_difference: f64,
    pub tol: f64,
    pub passed: bool,
}

/// The square-wave substitution `x = u + α·sin(πu)`.
///
/// The substituted integral splits into the original plus
/// `Z∫ απ f(u) cos(πu) du`. That second integrand has the period-1
/// antiderivative `α·sin(π·frac(u))`, so under the unit box it evaluates to
/// `2α/π`. The report compares the resulting difference with `2α`.
pub fn substitution_counterexample(alpha: f64, policy: &LimitPolicy) -> Result<CounterexampleReport> {
    if !(alpha.abs() <= 1.0 / PI) {
        return Err(Error::InvalidArgument(format!("|alpha| must not exceed 1/pi, got {alpha}")));
    }
    let square = catalog("square_wave", &[])?;
    let pair = TerminationDerivative::make_atoms(&[(0.0, -0.5), (1.0, -0.5)])?;
    let base = value_at(&square, 0.0, &pair, &policy.scaled_for(&square))?;

    let second = Integrand::new("alpha pi f(u) cos(pi u)", move |u| {
        alpha * PI * square_wave(u) * (PI * u).cos()
    })
    .with_antiderivative(move |u| alpha * (PI * (u - u.floor())).sin())
    .with_param("alpha", alpha)
    .with_period_hint(2.0);
    let unit_box = TerminationDerivative::make_box(1.0)?;
    let second_term = value_at(&second, 0.0, &unit_box, &policy.scaled_for(&second))?;

    let warped = catalog("square_wave_warped", &[("alpha", alpha)])?;
    let two_box = pair.combine(&unit_box)?;
    let direct_warped = value_at(&warped, 0.0, &two_box, &policy.scaled_for(&warped))?;

    let substituted = base + second_term;
    let difference = substituted - base;
    let stated_difference = 2.0 * alpha;
    Ok(CounterexampleReport {
        alpha,
        base,
        second_term,
        substituted,
        direct_warped,
        difference,
        stated_difference,
        tol: policy.tol,
        passed: (difference - stated_difference).abs() <= policy.tol,
    })
}
