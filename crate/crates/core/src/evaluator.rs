//! Evaluation of `Z∫_a^∞ f = -F(a) - lim_{b→∞} ∫_0^c F(x+b) z′(x) dx`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrand::{linear_combination, Antiderivative, Integrand, DEFAULT_ANTIDERIVATIVE_TOL};
use crate::quadrature::{self, QuadOptions};
use crate::termination::TerminationDerivative;

/// 1/φ, the step ratio least prone to aliasing with a periodic tail.
pub const GOLDEN_STEP: f64 = 0.618_033_988_749_894_9;

/// Largest `rate·b` allowed on the grid for exponentially growing `F`.
pub const GROWTH_EXPONENT_CAP: f64 = 12.0;

const TAIL_QUAD: QuadOptions = QuadOptions {
    abs_tol: 1e-13,
    rel_tol: 1e-12,
    max_intervals: 2000,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LimitPolicy {
    /// First cut-off, measured from the lower bound `a`.
    pub b_start: f64,
    pub b_count: usize,
    pub b_step: f64,
    pub window: usize,
    pub tol: f64,
    /// Report the Cesàro mean of the samples as a diagnostic.
    pub averaging: bool,
}

impl Default for LimitPolicy {
    fn default() -> Self {
        Self {
            b_start: 50.0,
            b_count: 32,
            b_step: GOLDEN_STEP,
            window: 8,
            tol: 1e-8,
            averaging: false,
        }
    }
}

impl LimitPolicy {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidPolicy(msg));
        if !self.b_start.is_finite() {
            return bad(format!("b_start must be finite, got {}", self.b_start));
        }
        if self.b_count < 8 {
            return bad(format!("b_count must be at least 8, got {}", self.b_count));
        }
        if !(self.b_step > 0.0 && self.b_step.is_finite()) {
            return bad(format!("b_step must be positive, got {}", self.b_step));
        }
        if self.window < 4 || self.window > self.b_count {
            return bad(format!(
                "window must lie in [4, b_count = {}], got {}",
                self.b_count, self.window
            ));
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        Ok(())
    }

    /// Rejects a step that is a rational multiple `p/q` (`q ≤ 12`) of
    /// `period`, which would sample an oscillating tail at a fixed phase.
    pub fn check_period(&self, period: f64) -> Result<()> {
        let ratio = self.b_step / period;
        match rational_alias(ratio) {
            Some((p, q)) => Err(Error::InvalidPolicy(format!(
                "b_step {} is {p}/{q} of the period {period}; choose an irrational multiple",
                self.b_step
            ))),
            None => Ok(()),
        }
    }

    /// Policy adapted to `g`: the step is scaled by the period hint, and the
    /// grid is pulled in for exponentially growing antiderivatives so that
    /// `rate·b` stays below [`GROWTH_EXPONENT_CAP`].
    pub fn scaled_for(&self, g: &Integrand) -> Self {
        let mut p = *self;
        let period = g.period_hint;
        if let Some(period) = period {
            p.b_step *= period.max(1.0);
        }
        if let Some(rate) = g.growth_rate.filter(|&r| r > 0.0) {
            let cap = GROWTH_EXPONENT_CAP / rate;
            if p.b_end() > cap {
                p.b_start = p.b_start.min(0.5 * cap);
                p.b_step = (cap - p.b_start) / (p.b_count - 1) as f64;
                if let Some(period) = period {
                    while p.check_period(period).is_err() {
                        p.b_step /= 1.0 + 1e-3;
                    }
                }
            }
        }
        p
    }

    /// Last cut-off relative to `a`.
    pub fn b_end(&self) -> f64 {
        self.b_start + (self.b_count - 1) as f64 * self.b_step
    }

    pub fn grid(&self, a: f64) -> Vec<f64> {
        (0..self.b_count)
            .map(|k| a + self.b_start + k as f64 * self.b_step)
            .collect()
    }
}

fn rational_alias(ratio: f64) -> Option<(i64, i64)> {
    (1..=12i64).find_map(|q| {
        let p = (ratio * q as f64).round();
        ((ratio - p / q as f64).abs() < 1e-6).then_some((p as i64, q))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailSample {
    pub b: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitStatus {
    Converged,
    Oscillating,
    Drifting,
}

impl LimitStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Converged => "converged",
            Self::Oscillating => "oscillating",
            Self::Drifting => "drifting",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub samples: Vec<TailSample>,
    pub limit: Option<f64>,
    pub status: LimitStatus,
    /// max − min over the final window.
    pub spread: f64,
    /// Change of the least-squares line across the final window.
    pub trend: f64,
    pub cesaro_mean: Option<f64>,
}

impl LimitReport {
    pub fn converged(&self) -> bool {
        self.status == LimitStatus::Converged
    }
}

/// `∫_0^c F(x+b) z′(x) dx`: atoms exactly, density segments by adaptive
/// Gauss–Kronrod.
pub fn tail(big_f: &Antiderivative, zd: &TerminationDerivative, b: f64) -> Result<f64> {
    let mut sum = 0.0;
    for atom in zd.atoms() {
        sum += atom.weight * big_f.eval(atom.position + b)?;
    }
    for seg in zd.segments() {
        let est = quadrature::integrate(
            |x| Ok(seg.density(x) * big_f.eval(x + b)?),
            seg.lo,
            seg.hi,
            TAIL_QUAD,
        )?;
        sum += est.value;
    }
    Ok(sum)
}

/// Tails on a grid of cut-offs, computed in parallel, returned in grid order.
pub fn tail_samples(
    big_f: &Antiderivative,
    zd: &TerminationDerivative,
    grid: &[f64],
) -> Result<Vec<TailSample>> {
    grid.par_iter()
        .map(|&b| Ok(TailSample { b, value: tail(big_f, zd, b)? }))
        .collect()
}

fn line_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

fn range(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    let min = values.fold(f64::INFINITY, f64::min);
    max - min
}

fn amplitude(values: &[f64]) -> f64 {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max)
}

/// Classifies the final window of `samples`.
///
/// Converged when its spread is within `tol`. Otherwise drifting when the
/// least-squares trend across the window exceeds `tol` per step and either
/// dominates the residual spread or the oscillation envelope has grown by
/// more than half since the first window; oscillating otherwise.
pub fn detect_limit(samples: &[TailSample], policy: &LimitPolicy) -> Result<LimitReport> {
    let w = policy.window;
    if samples.len() < w || w < 2 {
        return Err(Error::TooFewSamples {
            need: w.max(2),
            got: samples.len(),
        });
    }
    let last = &samples[samples.len() - w..];
    let bs: Vec<f64> = last.iter().map(|s| s.b).collect();
    let ys: Vec<f64> = last.iter().map(|s| s.value).collect();
    let spread = range(ys.iter().copied());
    let (slope, intercept) = line_fit(&bs, &ys);
    let trend = (slope * (bs[w - 1] - bs[0])).abs();
    let cesaro_mean = policy
        .averaging
        .then(|| samples.iter().map(|s| s.value).sum::<f64>() / samples.len() as f64);

    let (status, limit) = if spread <= policy.tol {
        (LimitStatus::Converged, Some(ys.iter().sum::<f64>() / w as f64))
    } else {
        let residual = range(bs.iter().zip(&ys).map(|(b, y)| y - (slope * b + intercept)));
        let first: Vec<f64> = samples[..w].iter().map(|s| s.value).collect();
        let (first_amp, last_amp) = (amplitude(&first), amplitude(&ys));
        let growing = last_amp > 1.5 * first_amp;
        let drifting = trend > policy.tol * (w - 1) as f64 && (trend >= residual || growing);
        if drifting {
            (LimitStatus::Drifting, None)
        } else {
            (LimitStatus::Oscillating, None)
        }
    };
    Ok(LimitReport {
        samples: samples.to_vec(),
        limit,
        status,
        spread,
        trend,
        cesaro_mean,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    /// `-F(a) - limit`, present only when the limit converged.
    pub value: Option<f64>,
    pub a: f64,
    pub antiderivative_at_a: f64,
    pub limit_report: LimitReport,
    pub termination_used: TerminationDerivative,
    pub f_label: String,
}

impl IntegralResult {
    pub fn status(&self) -> LimitStatus {
        self.limit_report.status
    }

    pub fn converged(&self) -> bool {
        self.limit_report.converged()
    }

    pub fn require_value(&self) -> Result<f64> {
        self.value.ok_or_else(|| {
            Error::NotConverged(format!(
                "`{}` from a = {}: tail is {} (spread {:e})",
                self.f_label,
                self.a,
                self.status().as_str(),
                self.limit_report.spread
            ))
        })
    }
}

/// Evaluates `Z∫_a^∞ g` under `zd`. The policy is used as given; see
/// [`LimitPolicy::scaled_for`] for one adapted to the integrand.
pub fn evaluate(
    g: &Integrand,
    a: f64,
    zd: &TerminationDerivative,
    policy: &LimitPolicy,
) -> Result<IntegralResult> {
    let big_f = g.antiderivative_or_numeric(a, DEFAULT_ANTIDERIVATIVE_TOL);
    evaluate_with(g, &big_f, a, zd, policy)
}

/// [`evaluate`] with an explicit antiderivative.
pub fn evaluate_with(
    g: &Integrand,
    big_f: &Antiderivative,
    a: f64,
    zd: &TerminationDerivative,
    policy: &LimitPolicy,
) -> Result<IntegralResult> {
    if !a.is_finite() {
        return Err(Error::InvalidArgument(format!("lower bound must be finite, got {a}")));
    }
    let report = zd.validate();
    if !report.passed() {
        return Err(Error::InvalidTermination(report.failures.join("; ")));
    }
    policy.validate()?;
    if let Some(period) = g.period_hint {
        policy.check_period(period)?;
    }
    let f_a = big_f.eval(a)?;
    let samples = tail_samples(big_f, zd, &policy.grid(a))?;
    let limit_report = detect_limit(&samples, policy)?;
    Ok(IntegralResult {
        value: limit_report.limit.map(|l| -f_a - l),
        a,
        antiderivative_at_a: f_a,
        limit_report,
        termination_used: zd.clone(),
        f_label: g.label.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberOutcome {
    pub label: String,
    pub value: Option<f64>,
    pub status: LimitStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub members: Vec<MemberOutcome>,
    /// Evaluations under every pairwise combination.
    pub combinations: Vec<MemberOutcome>,
    /// max − min over all converged values.
    pub discrepancy: f64,
    pub tol: f64,
    pub passed: bool,
}

pub fn uniqueness_report(
    g: &Integrand,
    a: f64,
    zds: &[TerminationDerivative],
    policy: &LimitPolicy,
) -> Result<UniquenessReport> {
    let labeled: Vec<(String, TerminationDerivative)> = zds
        .iter()
        .enumerate()
        .map(|(i, z)| (format!("z{}", i + 1), z.clone()))
        .collect();
    uniqueness_report_labeled(g, a, &labeled, policy)
}

/// Evaluates `g` under each termination and each pairwise combination.
/// Passes when all of them converge and agree within `policy.tol`.
pub fn uniqueness_report_labeled(
    g: &Integrand,
    a: f64,
    zds: &[(String, TerminationDerivative)],
    policy: &LimitPolicy,
) -> Result<UniquenessReport> {
    if zds.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least two terminations, got {}",
            zds.len()
        )));
    }
    let big_f = g.antiderivative_or_numeric(a, DEFAULT_ANTIDERIVATIVE_TOL);
    let outcome = |label: String, zd: &TerminationDerivative| -> Result<MemberOutcome> {
        let r = evaluate_with(g, &big_f, a, zd, policy)?;
        Ok(MemberOutcome {
            label,
            value: r.value,
            status: r.status(),
        })
    };
    let members = zds
        .iter()
        .map(|(label, zd)| outcome(label.clone(), zd))
        .collect::<Result<Vec<_>>>()?;
    let mut combinations = Vec::new();
    for i in 0..zds.len() {
        for j in i + 1..zds.len() {
            let zd = zds[i].1.combine(&zds[j].1)?;
            combinations.push(outcome(format!("combine({},{})", zds[i].0, zds[j].0), &zd)?);
        }
    }
    let values: Vec<f64> = members
        .iter()
        .chain(&combinations)
        .filter_map(|m| m.value)
        .collect();
    let discrepancy = if values.is_empty() {
        f64::NAN
    } else {
        range(values.iter().copied())
    };
    let all_converged = members.iter().chain(&combinations).all(|m| m.value.is_some());
    Ok(UniquenessReport {
        passed: all_converged && discrepancy <= policy.tol,
        members,
        combinations,
        discrepancy,
        tol: policy.tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearityReport {
    pub weights: (f64, f64),
    pub first: Option<f64>,
    pub second: Option<f64>,
    /// `c1·Z∫g1 + c2·Z∫g2`.
    pub lhs: Option<f64>,
    /// `Z∫(c1·g1 + c2·g2)` under the combined termination.
    pub rhs: Option<f64>,
    pub difference: Option<f64>,
    pub tol: f64,
    pub passed: bool,
}

/// Compares `c1·Z∫g1 + c2·Z∫g2` with `Z∫(c1·g1 + c2·g2)` evaluated under
/// `combine(zd1, zd2)`. A term with weight zero is not evaluated.
#[allow(clippy::too_many_arguments)]
pub fn linearity_check(
    g1: &Integrand,
    g2: &Integrand,
    c1: f64,
    c2: f64,
    a: f64,
    zd1: &TerminationDerivative,
    zd2: &TerminationDerivative,
    policy: &LimitPolicy,
) -> Result<LinearityReport> {
    let part = |c: f64, g: &Integrand, zd: &TerminationDerivative| -> Result<Option<f64>> {
        if c == 0.0 {
            Ok(Some(0.0))
        } else {
            Ok(evaluate(g, a, zd, policy)?.value)
        }
    };
    let first = part(c1, g1, zd1)?;
    let second = part(c2, g2, zd2)?;
    let lhs = first.zip(second).map(|(v1, v2)| c1 * v1 + c2 * v2);
    let combined = linear_combination(c1, g1, c2, g2);
    let rhs = evaluate(&combined, a, &zd1.combine(zd2)?, policy)?.value;
    let difference = lhs.zip(rhs).map(|(l, r)| (l - r).abs());
    Ok(LinearityReport {
        weights: (c1, c2),
        first,
        second,
        lhs,
        rhs,
        difference,
        tol: policy.tol,
        passed: difference.is_some_and(|d| d <= policy.tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrand::catalog;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn samples(values: &[f64]) -> Vec<TailSample> {
        values
            .iter()
            .enumerate()
            .map(|(k, &value)| TailSample { b: 50.0 + k as f64 * GOLDEN_STEP, value })
            .collect()
    }

    #[test]
    fn tail_examples() {
        let sin = catalog("sin_ax", &[("alpha", 1.0)]).unwrap();
        let big_f = sin.antiderivative.clone().unwrap();
        let t = tail(&big_f, &TerminationDerivative::pair(PI).unwrap(), 7.3).unwrap();
        close(t, 0.0, 1e-15);

        let xcos = catalog("x_cos_ax", &[("alpha", 1.0)]).unwrap();
        let big_f = xcos.antiderivative.clone().unwrap();
        let t = tail(&big_f, &TerminationDerivative::triple(PI).unwrap(), 5.0).unwrap();
        close(t, 0.0, 1e-9);

        let t = tail(&big_f, &TerminationDerivative::step(), 5.0).unwrap();
        assert_eq!(t, -big_f.eval(5.0).unwrap());

        let sin_box = tail(
            &sin.antiderivative.clone().unwrap(),
            &TerminationDerivative::make_box(2.0 * PI).unwrap(),
            3.1,
        )
        .unwrap();
        close(sin_box, 0.0, 1e-13);
    }

    #[test]
    fn detect_limit_examples() {
        let p = LimitPolicy::default();
        let r = detect_limit(&samples(&[0.25; 16]), &p).unwrap();
        assert_eq!(r.status, LimitStatus::Converged);
        assert_eq!(r.limit, Some(0.25));

        let alt: Vec<f64> = (0..16).map(|k| if k % 2 == 0 { 0.5 } else { -0.5 }).collect();
        let r = detect_limit(&samples(&alt), &p).unwrap();
        assert_eq!(r.status, LimitStatus::Oscillating);
        assert_eq!(r.limit, None);

        let ramp: Vec<TailSample> = (0..16)
            .map(|k| {
                let b = 50.0 + k as f64;
                TailSample { b, value: 0.1 * b }
            })
            .collect();
        assert_eq!(detect_limit(&ramp, &p).unwrap().status, LimitStatus::Drifting);

        assert!(matches!(
            detect_limit(&samples(&[1.0; 3]), &p),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn growing_oscillation_is_drifting_and_bounded_one_is_not() {
        let p = LimitPolicy::default();
        let step = TerminationDerivative::step();
        let xcos = catalog("x_cos_ax", &[("alpha", 1.0)]).unwrap();
        let r = evaluate(&xcos, 0.0, &step, &p.scaled_for(&xcos)).unwrap();
        assert_eq!(r.status(), LimitStatus::Drifting);
        assert_eq!(r.value, None);

        let sin = catalog("sin_ax", &[("alpha", 1.0)]).unwrap();
        let r = evaluate(&sin, 0.0, &step, &p.scaled_for(&sin)).unwrap();
        assert_eq!(r.status(), LimitStatus::Oscillating);
    }

    #[test]
    fn detect_limit_is_idempotent_on_converged_reports() {
        let p = LimitPolicy::default();
        let values: Vec<f64> = (0..32).map(|k| 0.3 + 1e-10 * (k as f64).sin()).collect();
        let r = detect_limit(&samples(&values), &p).unwrap();
        let limit = r.limit.unwrap();
        let again = detect_limit(&samples(&[limit; 32]), &p).unwrap();
        assert_eq!(again.status, LimitStatus::Converged);
        close(again.limit.unwrap(), limit, 4.0 * f64::EPSILON * limit.abs());
    }

    #[test]
    fn evaluate_examples() {
        let p = LimitPolicy::default();
        let sin = catalog("sin_ax", &[("alpha", 1.0)]).unwrap();
        let r = evaluate(&sin, 0.0, &TerminationDerivative::pair(PI).unwrap(), &p.scaled_for(&sin))
            .unwrap();
        close(r.value.unwrap(), 1.0, 1e-12);

        let xcos = catalog("x_cos_ax", &[("alpha", 1.0)]).unwrap();
        let r = evaluate(&xcos, 0.0, &TerminationDerivative::triple(PI).unwrap(), &p.scaled_for(&xcos))
            .unwrap();
        close(r.value.unwrap(), -1.0, 1e-9);

        let es = catalog("exp_sin", &[("alpha", 1.0), ("beta", -0.5)]).unwrap();
        let zd = TerminationDerivative::make_exp_pair(PI, -0.5).unwrap();
        let r = evaluate(&es, 0.0, &zd, &p.scaled_for(&es)).unwrap();
        close(r.value.unwrap(), 0.8, 1e-12);
    }

    #[test]
    fn numeric_antiderivative_path_matches_closed_form() {
        let p = LimitPolicy::default();
        let sin = catalog("sin_ax", &[("alpha", 1.0)]).unwrap();
        let mut bare = sin.clone();
        bare.antiderivative = None;
        let zd = TerminationDerivative::pair(PI).unwrap();
        let r = evaluate(&bare, 0.5, &zd, &p.scaled_for(&bare)).unwrap();
        close(r.value.unwrap(), 0.5f64.cos(), 1e-9);
    }

    #[test]
    fn rational_step_is_rejected() {
        let sin = catalog("sin_ax", &[("alpha", 1.0)]).unwrap();
        let p = LimitPolicy {
            b_step: PI / 2.0,
            ..LimitPolicy::default()
        };
        let err = evaluate(&sin, 0.0, &TerminationDerivative::pair(PI).unwrap(), &p).unwrap_err();
        assert!(matches!(err, Error::InvalidPolicy(_)));
    }

    #[test]
    fn growth_cap_limits_the_grid() {
        let es = catalog("exp_sin", &[("alpha", 1.0), ("beta", 0.1)]).unwrap();
        let p = LimitPolicy::default().scaled_for(&es);
        assert!(0.1 * p.b_end() <= GROWTH_EXPONENT_CAP + 1e-9);
        assert!(p.check_period(2.0 * PI).is_ok());
        assert!(p.b_end() <= 25.0 / 0.1);
    }

    #[test]
    fn uniqueness_examples() {
        let p = LimitPolicy::default();
        let sin = catalog("sin_ax", &[("alpha", 1.0)]).unwrap();
        let policy = p.scaled_for(&sin);
        let pair = TerminationDerivative::pair(PI).unwrap();
        let boxed = TerminationDerivative::make_box(2.0 * PI).unwrap();
        let r = uniqueness_report(&sin, 0.0, &[pair.clone(), boxed.clone(), pair.combine(&boxed).unwrap()], &policy)
            .unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.discrepancy < 1e-8);
        for m in r.members.iter().chain(&r.combinations) {
            close(m.value.unwrap(), 1.0, 1e-8);
        }

        let r = uniqueness_report(&sin, 0.0, &[pair.clone(), TerminationDerivative::step()], &policy).unwrap();
        assert_eq!(r.members[0].status, LimitStatus::Converged);
        assert_eq!(r.members[1].status, LimitStatus::Oscillating);
        assert!(!r.passed);

        let r = uniqueness_report(&sin, 0.0, &[pair.clone(), pair], &policy).unwrap();
        assert_eq!(r.discrepancy, 0.0);
    }

    #[test]
    fn linearity_examples() {
        let p = LimitPolicy::default();
        let s1 = catalog("sin_ax", &[("alpha", 1.0)]).unwrap();
        let s2 = catalog("sin_ax", &[("alpha", 2.0)]).unwrap();
        let z1 = TerminationDerivative::pair(PI).unwrap();
        let z2 = TerminationDerivative::pair(PI / 2.0).unwrap();
        let policy = p.scaled_for(&s1);
        let r = linearity_check(&s1, &s2, 2.0, 3.0, 0.0, &z1, &z2, &policy).unwrap();
        assert!(r.passed, "{r:?}");
        close(r.lhs.unwrap(), 3.5, 1e-10);
        close(r.rhs.unwrap(), 3.5, 1e-8);

        let r = linearity_check(&s1, &s2, 1.0, 0.0, 0.0, &z1, &z2, &policy).unwrap();
        close(r.lhs.unwrap(), 1.0, 1e-12);
        assert!(r.passed);

        let e = catalog("exp_decay", &[("lambda", 1.0)]).unwrap();
        let a = 0.7;
        let r = linearity_check(&s1, &e, 1.0, 1.0, a, &z1, &TerminationDerivative::step(), &policy).unwrap();
        assert!(r.passed, "{r:?}");
        close(r.rhs.unwrap(), a.cos() + (-a).exp(), 1e-8);
    }
}
