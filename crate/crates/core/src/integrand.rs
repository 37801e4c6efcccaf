//! Integrands with (optional) antiderivatives, and the named catalog.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{finite_at, Error, Result};
use crate::quadrature::{self, QuadOptions};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// An antiderivative `F` with `F′ = f`, fixed only up to an additive
/// constant. Evaluation is fallible because numeric antiderivatives run
/// quadrature.
#[derive(Clone)]
pub struct Antiderivative(Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>);

impl Antiderivative {
    pub fn closed_form<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self(Arc::new(move |x| finite_at(x, f(x))))
    }

    pub fn numeric(n: NumericAntiderivative) -> Self {
        let n = Arc::new(n);
        Self(Arc::new(move |x| n.value(x)))
    }

    pub fn from_fallible<F>(f: F) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        Self(Arc::new(f))
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        (self.0)(x)
    }

    /// `x ↦ F(x) + constant`.
    pub fn shifted(&self, constant: f64) -> Self {
        let inner = self.0.clone();
        Self(Arc::new(move |x| Ok(inner(x)? + constant)))
    }
}

impl fmt::Debug for Antiderivative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Antiderivative(..)")
    }
}

/// `x ↦ F(x) + constant` for a plain callback.
pub fn shift_antiderivative(f: RealFn, constant: f64) -> RealFn {
    Arc::new(move |x| f(x) + constant)
}

#[derive(Clone)]
pub struct Integrand {
    pub label: String,
    pub params: BTreeMap<String, f64>,
    pub f: RealFn,
    pub antiderivative: Option<Antiderivative>,
    pub period_hint: Option<f64>,
    /// Exponential growth rate of `F`, when it grows like `e^{rate·x}`.
    pub growth_rate: Option<f64>,
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand")
            .field("label", &self.label)
            .field("params", &self.params)
            .field("has_antiderivative", &self.antiderivative.is_some())
            .field("period_hint", &self.period_hint)
            .field("growth_rate", &self.growth_rate)
            .finish()
    }
}

impl Integrand {
    pub fn new<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            params: BTreeMap::new(),
            f: Arc::new(f),
            antiderivative: None,
            period_hint: None,
            growth_rate: None,
        }
    }

    pub fn with_antiderivative<F>(mut self, big_f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.antiderivative = Some(Antiderivative::closed_form(big_f));
        self
    }

    pub fn with_period_hint(mut self, period: f64) -> Self {
        self.period_hint = Some(period);
        self
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// The closed-form antiderivative, or a numeric one based at `base`.
    pub fn antiderivative_or_numeric(&self, base: f64, tol: f64) -> Antiderivative {
        self.antiderivative.clone().unwrap_or_else(|| {
            Antiderivative::numeric(NumericAntiderivative::new(self.f.clone(), base, tol))
        })
    }

    /// Same integrand with its antiderivative moved by `constant`.
    pub fn with_shifted_antiderivative(&self, constant: f64) -> Result<Self> {
        let big_f = self.antiderivative.as_ref().ok_or_else(|| {
            Error::Unsupported(format!("`{}` has no closed-form antiderivative to shift", self.label))
        })?;
        Ok(Self {
            antiderivative: Some(big_f.shifted(constant)),
            ..self.clone()
        })
    }
}

/// `c1·g1 + c2·g2`. The antiderivative is combined when both are present.
pub fn linear_combination(c1: f64, g1: &Integrand, c2: f64, g2: &Integrand) -> Integrand {
    let (f1, f2) = (g1.f.clone(), g2.f.clone());
    let antiderivative = match (&g1.antiderivative, &g2.antiderivative) {
        (Some(a1), Some(a2)) => {
            let (a1, a2) = (a1.clone(), a2.clone());
            Some(Antiderivative::from_fallible(move |x| {
                let v1 = if c1 == 0.0 { 0.0 } else { c1 * a1.eval(x)? };
                let v2 = if c2 == 0.0 { 0.0 } else { c2 * a2.eval(x)? };
                Ok(v1 + v2)
            }))
        }
        _ => None,
    };
    let period_hint = match (g1.period_hint, g2.period_hint) {
        (Some(p), Some(q)) if p == q => Some(p),
        (Some(p), None) if c2 == 0.0 => Some(p),
        (None, Some(q)) if c1 == 0.0 => Some(q),
        _ => None,
    };
    let growth_rate = match (g1.growth_rate, g2.growth_rate) {
        (Some(p), Some(q)) => Some(p.max(q)),
        (p, q) => p.or(q),
    };
    let mut params = BTreeMap::new();
    for (k, v) in &g1.params {
        params.insert(format!("g1.{k}"), *v);
    }
    for (k, v) in &g2.params {
        params.insert(format!("g2.{k}"), *v);
    }
    Integrand {
        label: format!("{c1}*{} + {c2}*{}", g1.label, g2.label),
        params,
        f: Arc::new(move |x| {
            let v1 = if c1 == 0.0 { 0.0 } else { c1 * f1(x) };
            let v2 = if c2 == 0.0 { 0.0 } else { c2 * f2(x) };
            v1 + v2
        }),
        antiderivative,
        period_hint,
        growth_rate,
    }
}

/// Antiderivative by cached cumulative quadrature over unit panels starting
/// at the base point.
pub struct NumericAntiderivative {
    f: RealFn,
    base_point: f64,
    tol: f64,
    /// `checkpoints[k]` is the integral from the base point to `base + k`.
    checkpoints: RwLock<Vec<f64>>,
}

impl fmt::Debug for NumericAntiderivative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumericAntiderivative")
            .field("base_point", &self.base_point)
            .field("tol", &self.tol)
            .field("checkpoints", &self.checkpoints.read().map(|c| c.len()).unwrap_or(0))
            .finish()
    }
}

pub const DEFAULT_ANTIDERIVATIVE_TOL: f64 = 1e-13;

impl NumericAntiderivative {
    pub fn new(f: RealFn, base_point: f64, tol: f64) -> Self {
        Self {
            f,
            base_point,
            tol,
            checkpoints: RwLock::new(vec![0.0]),
        }
    }

    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    fn panel(&self, lo: f64, hi: f64) -> Result<f64> {
        let f = &self.f;
        let opts = QuadOptions {
            abs_tol: self.tol,
            rel_tol: self.tol,
            max_intervals: 4000,
        };
        quadrature::integrate(|x| finite_at(x, f(x)), lo, hi, opts).map(|e| e.value)
    }

    fn checkpoint(&self, k: usize) -> Result<f64> {
        if let Some(&v) = self.checkpoints.read().expect("cache lock").get(k) {
            return Ok(v);
        }
        let mut cache = self.checkpoints.write().expect("cache lock");
        while cache.len() <= k {
            let j = cache.len() - 1;
            let lo = self.base_point + j as f64;
            let v = cache[j] + self.panel(lo, lo + 1.0)?;
            cache.push(v);
        }
        Ok(cache[k])
    }

    /// `∫_{base}^{x} f`. Points below the base are integrated directly.
    pub fn value(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!("cannot evaluate antiderivative at {x}")));
        }
        if x <= self.base_point {
            return Ok(-self.panel(x, self.base_point)?);
        }
        let k = (x - self.base_point).floor() as usize;
        let start = self.base_point + k as f64;
        let head = self.checkpoint(k)?;
        if x == start {
            return Ok(head);
        }
        Ok(head + self.panel(start, x)?)
    }
}

pub fn numeric_antiderivative(f: RealFn, base_point: f64, tol: f64) -> NumericAntiderivative {
    NumericAntiderivative::new(f, base_point, tol)
}

pub const CATALOG_NAMES: [&str; 10] = [
    "sin_ax",
    "x_cos_ax",
    "exp_sin",
    "square_wave",
    "sin_xy",
    "x_cos_xy",
    "cos_xy_over_x",
    "square_wave_warped",
    "gaussian",
    "exp_decay",
];

/// Parameter keys accepted by a catalog entry.
pub fn catalog_params(name: &str) -> Result<&'static [&'static str]> {
    Ok(match name {
        "sin_ax" | "x_cos_ax" | "square_wave_warped" => &["alpha"],
        "exp_sin" => &["alpha", "beta"],
        "sin_xy" | "x_cos_xy" | "cos_xy_over_x" => &["y"],
        "exp_decay" => &["lambda"],
        "square_wave" | "gaussian" => &[],
        _ => return Err(Error::UnknownIntegrand(name.to_string())),
    })
}

/// Square wave alternating ±1 on unit intervals.
pub fn square_wave(x: f64) -> f64 {
    if x.floor().rem_euclid(2.0) == 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Triangle wave antiderivative of [`square_wave`], zero at even integers.
pub fn square_wave_antiderivative(x: f64) -> f64 {
    let frac = x - x.floor();
    if x.floor().rem_euclid(2.0) == 0.0 {
        frac
    } else {
        1.0 - frac
    }
}

/// `u + α·sin(πu)`: monotone for `|α| ≤ 1/π` and fixes every integer.
pub fn warp(alpha: f64, u: f64) -> f64 {
    u + alpha * (PI * u).sin()
}

fn nonzero(name: &str, v: f64) -> Result<f64> {
    if v == 0.0 {
        Err(Error::InvalidParam {
            name: name.into(),
            reason: "must be non-zero".into(),
        })
    } else {
        Ok(v)
    }
}

pub fn catalog_get(name: &str, params: &BTreeMap<String, f64>) -> Result<Integrand> {
    let allowed = catalog_params(name)?;
    for (k, v) in params {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::InvalidParam {
                name: k.clone(),
                reason: format!("not a parameter of `{name}` (expected {allowed:?})"),
            });
        }
        if !v.is_finite() {
            return Err(Error::InvalidParam {
                name: k.clone(),
                reason: format!("must be finite, got {v}"),
            });
        }
    }
    let get = |key: &str| {
        params
            .get(key)
            .copied()
            .ok_or_else(|| Error::MissingParam(key.to_string()))
    };
    let mut g = match name {
        "sin_ax" | "sin_xy" => {
            let key = if name == "sin_ax" { "alpha" } else { "y" };
            let a = nonzero(key, get(key)?)?;
            Integrand::new(name, move |x| (a * x).sin())
                .with_antiderivative(move |x| -(a * x).cos() / a)
                .with_period_hint(2.0 * PI / a.abs())
        }
        "x_cos_ax" | "x_cos_xy" => {
            let key = if name == "x_cos_ax" { "alpha" } else { "y" };
            let a = nonzero(key, get(key)?)?;
            Integrand::new(name, move |x| x * (a * x).cos())
                .with_antiderivative(move |x| (a * x).cos() / (a * a) + x * (a * x).sin() / a)
                .with_period_hint(2.0 * PI / a.abs())
        }
        "exp_sin" => {
            let a = nonzero("alpha", get("alpha")?)?;
            let b = get("beta")?;
            let norm = a * a + b * b;
            let mut g = Integrand::new(name, move |x| (b * x).exp() * (a * x).sin())
                .with_antiderivative(move |x| {
                    (b * x).exp() * (b * (a * x).sin() - a * (a * x).cos()) / norm
                })
                .with_period_hint(2.0 * PI / a.abs());
            g.growth_rate = Some(b);
            g
        }
        "square_wave" => Integrand::new(name, square_wave)
            .with_antiderivative(square_wave_antiderivative)
            .with_period_hint(2.0),
        "cos_xy_over_x" => {
            let y = nonzero("y", get("y")?)?;
            Integrand::new(name, move |x| (x * y).cos() / x).with_period_hint(2.0 * PI / y.abs())
        }
        "square_wave_warped" => {
            let a = get("alpha")?;
            if a.abs() > 1.0 / PI {
                return Err(Error::InvalidParam {
                    name: "alpha".into(),
                    reason: format!("|alpha| must not exceed 1/pi, got {a}"),
                });
            }
            Integrand::new(name, move |u| square_wave(warp(a, u)) * (1.0 + a * PI * (PI * u).cos()))
                .with_antiderivative(move |u| square_wave_antiderivative(warp(a, u)))
                .with_period_hint(2.0)
        }
        "gaussian" => Integrand::new(name, |x| (-x * x).exp())
            .with_antiderivative(|x| 0.5 * PI.sqrt() * libm::erf(x)),
        "exp_decay" => {
            let l = get("lambda")?;
            if l <= 0.0 {
                return Err(Error::InvalidParam {
                    name: "lambda".into(),
                    reason: format!("must be positive, got {l}"),
                });
            }
            Integrand::new(name, move |x| (-l * x).exp()).with_antiderivative(move |x| -(-l * x).exp() / l)
        }
        _ => unreachable!("catalog_params rejects unknown names"),
    };
    g.params = params.clone();
    Ok(g)
}

/// Convenience wrapper taking `(key, value)` pairs.
pub fn catalog(name: &str, params: &[(&str, f64)]) -> Result<Integrand> {
    let map = params.iter().map(|&(k, v)| (k.to_string(), v)).collect();
    catalog_get(name, &map)
}
