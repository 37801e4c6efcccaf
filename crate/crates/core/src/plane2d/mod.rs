//! Integrals over the whole plane, regularised by a kernel `z′(r)` that
//! smooths the indicator of a growing family of regions.
//!
//! The value is `lim_{b→∞} ∫∫ f(r) w(r, b) d²r` with
//! `w = −z′ ⊗ Γ(·, b)`. It is only meaningful when every family of regions
//! gives the same limit, so evaluation always runs several families and
//! reports their agreement. A finite set of families is a sample of that
//! condition, not a proof of it.

mod family;
mod geometry;
mod kernel;
mod quad;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use family::{CurveFamily, FamilyKind};
pub use geometry::{disk_rect_area, lens_area};
pub use kernel::{combine2d, Disk, Kernel2D, KernelAtom, KERNEL_MASS_TOL};
pub use quad::{tail2d, w_field, QuadConfig2D};

use crate::error::{Error, Result};
use crate::evaluator::{detect_limit, LimitPolicy, LimitReport, LimitStatus, TailSample, GOLDEN_STEP};

pub type PlaneFn = Arc<dyn Fn([f64; 2]) -> f64 + Send + Sync>;
pub type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `f(r)` on the plane. `radial`, when present, gives `f` as a function of
/// `|r|` and enables one-dimensional quadrature for origin-centered circles.
#[derive(Clone)]
pub struct Integrand2D {
    pub label: String,
    pub f: PlaneFn,
    pub radial: Option<RadialFn>,
}

impl fmt::Debug for Integrand2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand2D")
            .field("label", &self.label)
            .field("radial", &self.radial.is_some())
            .finish()
    }
}

impl Integrand2D {
    pub fn new<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn([f64; 2]) -> f64 + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            f: Arc::new(f),
            radial: None,
        }
    }

    /// A function of `|r|` only.
    pub fn radial<F>(label: impl Into<String>, profile: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let profile: RadialFn = Arc::new(profile);
        let p = profile.clone();
        Self {
            label: label.into(),
            f: Arc::new(move |r: [f64; 2]| p(r[0].hypot(r[1]))),
            radial: Some(profile),
        }
    }

    /// `e^{−(x²+y²)}`.
    pub fn gaussian() -> Self {
        Self::radial("gaussian", |s| (-s * s).exp())
    }

    /// `sin(x²+y²)`.
    pub fn sin_r2() -> Self {
        Self::radial("sin_r2", |s| (s * s).sin())
    }

    pub fn constant(c: f64) -> Self {
        Self::radial("constant", move |_| c)
    }

    pub fn linear_combination(c1: f64, g1: &Self, c2: f64, g2: &Self) -> Self {
        let (f1, f2) = (g1.f.clone(), g2.f.clone());
        let radial = match (&g1.radial, &g2.radial) {
            (Some(p1), Some(p2)) => {
                let (p1, p2) = (p1.clone(), p2.clone());
                Some(Arc::new(move |s: f64| c1 * p1(s) + c2 * p2(s)) as RadialFn)
            }
            _ => None,
        };
        Self {
            label: format!("{c1}*{} + {c2}*{}", g1.label, g2.label),
            f: Arc::new(move |r| c1 * f1(r) + c2 * f2(r)),
            radial,
        }
    }
}

/// Grid of 16 cut-offs in `[20, 40)` with an irrational step.
pub fn default_policy() -> LimitPolicy {
    LimitPolicy {
        b_start: 20.0,
        b_count: 16,
        b_step: GOLDEN_STEP * 2.1,
        window: 8,
        tol: 1e-6,
        averaging: false,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status2D {
    /// Every family converged and the limits agree within tolerance.
    Agreed,
    FamilyNotConverged { family: String, status: LimitStatus },
    /// All families converged; `family` lies farthest from their mean.
    FamiliesDisagree { family: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Result2D {
    pub value: Option<f64>,
    pub per_family: BTreeMap<String, LimitReport>,
    /// max − min of the family limits, when all converged.
    pub agreement_spread: Option<f64>,
    pub status: Status2D,
    pub tol: f64,
}

impl Result2D {
    pub fn agreed(&self) -> bool {
        self.status == Status2D::Agreed
    }
}

fn check_families(fams: &[CurveFamily]) -> Result<Vec<String>> {
    if fams.len() < 2 {
        return Err(Error::InvalidArgument(format!("need at least two families, got {}", fams.len())));
    }
    let has_circle = fams.iter().any(|f| f.kind == FamilyKind::Circle);
    let has_other = fams.iter().any(|f| f.kind != FamilyKind::Circle);
    if !(has_circle && has_other) {
        return Err(Error::InvalidArgument(
            "families must include a circle and a square or offset circle".into(),
        ));
    }
    let mut labels = Vec::with_capacity(fams.len());
    for f in fams {
        f.check()?;
        let label = f.label();
        if labels.contains(&label) {
            return Err(Error::InvalidArgument(format!("family `{label}` given twice")));
        }
        labels.push(label);
    }
    Ok(labels)
}

/// Tails for every family on the policy's grid of `b`, then limit detection
/// per family and the cross-family comparison.
pub fn evaluate2d(
    g: &Integrand2D,
    k: &Kernel2D,
    fams: &[CurveFamily],
    policy: &LimitPolicy,
    cfg: &QuadConfig2D,
) -> Result<Result2D> {
    let labels = check_families(fams)?;
    k.check()?;
    policy.validate()?;
    let grid = policy.grid(0.0);
    let jobs: Vec<(usize, f64)> = (0..fams.len())
        .flat_map(|i| grid.iter().map(move |&b| (i, b)))
        .collect();
    let values: Vec<f64> = jobs
        .par_iter()
        .map(|&(i, b)| tail2d(g, k, &fams[i], b, cfg))
        .collect::<Result<_>>()?;

    let mut per_family = BTreeMap::new();
    let mut limits = Vec::with_capacity(fams.len());
    let mut failure = None;
    for (i, label) in labels.iter().enumerate() {
        let samples: Vec<TailSample> = grid
            .iter()
            .zip(&values[i * grid.len()..(i + 1) * grid.len()])
            .map(|(&b, &value)| TailSample { b, value })
            .collect();
        let report = detect_limit(&samples, policy)?;
        match report.limit {
            Some(l) => limits.push((label.clone(), l)),
            None if failure.is_none() => {
                failure = Some(Status2D::FamilyNotConverged {
                    family: label.clone(),
                    status: report.status,
                })
            }
            None => {}
        }
        per_family.insert(label.clone(), report);
    }
    if let Some(status) = failure {
        return Ok(Result2D {
            value: None,
            per_family,
            agreement_spread: None,
            status,
            tol: policy.tol,
        });
    }
    let mean = limits.iter().map(|l| l.1).sum::<f64>() / limits.len() as f64;
    let max = limits.iter().map(|l| l.1).fold(f64::NEG_INFINITY, f64::max);
    let min = limits.iter().map(|l| l.1).fold(f64::INFINITY, f64::min);
    let spread = max - min;
    let (value, status) = if spread <= policy.tol {
        (Some(mean), Status2D::Agreed)
    } else {
        let worst = limits
            .iter()
            .max_by(|a, b| (a.1 - mean).abs().total_cmp(&(b.1 - mean).abs()))
            .map(|l| l.0.clone())
            .unwrap_or_default();
        (None, Status2D::FamiliesDisagree { family: worst })
    };
    Ok(Result2D {
        value,
        per_family,
        agreement_spread: Some(spread),
        status,
        tol: policy.tol,
    })
}
