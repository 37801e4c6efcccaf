//! The smoothed indicator `w(r, b)` and the 2-D tail `∫∫ f w`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::family::CurveFamily;
use super::geometry::{disk_rect_area, lens_area};
use super::kernel::Kernel2D;
use super::Integrand2D;
use crate::error::{finite_at, Result};
use crate::quadrature::{self, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadConfig2D {
    /// Width of the initial panels along a radius or a Cartesian axis.
    pub radial_panel: f64,
    /// Trapezoid nodes around a circle.
    pub angular_nodes: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Subdivisions allowed beyond the initial panels.
    pub max_extra_intervals: usize,
}

impl Default for QuadConfig2D {
    fn default() -> Self {
        Self {
            radial_panel: 0.5,
            angular_nodes: 256,
            abs_tol: 1e-11,
            rel_tol: 1e-11,
            max_extra_intervals: 20_000,
        }
    }
}

impl QuadConfig2D {
    /// Quadrature tolerances three orders below the limit tolerance `tol`,
    /// clamped to `[default, 1e-7]`.
    pub fn matched_to(mut self, tol: f64) -> Self {
        let floor = Self::default().abs_tol;
        let t = (1e-3 * tol).clamp(floor, 1e-7);
        self.abs_tol = t;
        self.rel_tol = t;
        self
    }
}

/// `w(r, b) = −(z′ ⊗ Γ)(r, b)`.
pub fn w_field(k: &Kernel2D, fam: &CurveFamily, b: f64, r: [f64; 2]) -> f64 {
    let mut w = 0.0;
    for a in &k.atoms {
        if fam.contains([r[0] - a.offset[0], r[1] - a.offset[1]], b) {
            w -= a.weight;
        }
    }
    for d in &k.disks {
        let p = [r[0] - d.center[0], r[1] - d.center[1]];
        w -= d.density * smoothed_area(fam, b, p, d.radius);
    }
    w
}

/// Area of the disk of radius `rho` about `p` inside the region at `b`.
fn smoothed_area(fam: &CurveFamily, b: f64, p: [f64; 2], rho: f64) -> f64 {
    let s = fam.size(b);
    if fam.is_round() {
        let c = fam.center();
        lens_area((p[0] - c[0]).hypot(p[1] - c[1]), s, rho)
    } else {
        disk_rect_area(p, rho, -s, s, -s, s)
    }
}

fn sorted_points(mut points: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    points.retain(|p| *p >= lo && *p <= hi);
    points.push(lo);
    points.push(hi);
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * hi.abs().max(1.0));
    points
}

fn panels(lo: f64, hi: f64, width: f64, extra: &[f64]) -> Vec<f64> {
    let n = ((hi - lo) / width).ceil().max(1.0) as usize;
    let mut points: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    points.extend_from_slice(extra);
    sorted_points(points, lo, hi)
}

/// `∫∫ f(r) P(r) d²r` where `P` is the region indicator shifted by `shift`
/// or, with `smoothing = Some(ρ)`, the area of the disk of radius `ρ` about
/// `r − shift` inside the region.
fn region_integral(
    g: &Integrand2D,
    fam: &CurveFamily,
    b: f64,
    shift: [f64; 2],
    smoothing: Option<f64>,
    cfg: &QuadConfig2D,
) -> Result<f64> {
    let rho = smoothing.unwrap_or(0.0);
    let size = fam.size(b);
    if fam.is_round() {
        let c = fam.center();
        let center = [c[0] + shift[0], c[1] + shift[1]];
        let profile = |s: f64| if rho > 0.0 { lens_area(s, size, rho) } else { 1.0 };
        let upper = size + rho;
        let points = panels(0.0, upper, cfg.radial_panel, &[size - rho, size]);
        let opts = QuadOptions {
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
            max_intervals: points.len() + cfg.max_extra_intervals,
        };
        let radial = g.radial.as_ref().filter(|_| center == [0.0, 0.0]);
        if let Some(fr) = radial {
            return Ok(quadrature::integrate_with_breaks(
                |s| Ok(2.0 * PI * finite_at(s, fr(s))? * profile(s) * s),
                &points,
                opts,
            )?
            .value);
        }
        let n = cfg.angular_nodes.max(8);
        let table: Vec<(f64, f64)> = (0..n)
            .map(|j| (2.0 * PI * j as f64 / n as f64).sin_cos())
            .map(|(sn, cs)| (cs, sn))
            .collect();
        let ring = |s: f64| -> Result<f64> {
            let mut sum = 0.0;
            for &(cs, sn) in &table {
                let r = [center[0] + s * cs, center[1] + s * sn];
                sum += finite_at(s, (g.f)(r))?;
            }
            Ok(sum * 2.0 * PI / n as f64)
        };
        Ok(quadrature::integrate_with_breaks(|s| Ok(ring(s)? * profile(s) * s), &points, opts)?.value)
    } else {
        let half = size + rho;
        let axis = |c: f64| {
            let extra = [c - size + rho, c - size, c + size - rho, c + size, c - half, c + half];
            panels(c - half, c + half, cfg.radial_panel, &extra)
        };
        let (xs, ys) = (axis(shift[0]), axis(shift[1]));
        let outer = QuadOptions {
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
            max_intervals: xs.len() + cfg.max_extra_intervals,
        };
        let inner = QuadOptions {
            abs_tol: 0.01 * cfg.abs_tol,
            rel_tol: 0.01 * cfg.rel_tol,
            max_intervals: ys.len() + cfg.max_extra_intervals,
        };
        let weight = |x: f64, y: f64| {
            if rho > 0.0 {
                disk_rect_area([x - shift[0], y - shift[1]], rho, -size, size, -size, size)
            } else {
                1.0
            }
        };
        Ok(quadrature::integrate_with_breaks(
            |x| {
                Ok(quadrature::integrate_with_breaks(
                    |y| Ok(finite_at(y, (g.f)([x, y]))? * weight(x, y)),
                    &ys,
                    inner,
                )?
                .value)
            },
            &xs,
            outer,
        )?
        .value)
    }
}

/// `∫∫ f(r) w(r, b) d²r`, one region integral per kernel element.
pub fn tail2d(g: &Integrand2D, k: &Kernel2D, fam: &CurveFamily, b: f64, cfg: &QuadConfig2D) -> Result<f64> {
    let mut total = 0.0;
    for a in &k.atoms {
        total -= a.weight * region_integral(g, fam, b, a.offset, None, cfg)?;
    }
    for d in &k.disks {
        total -= d.density * region_integral(g, fam, b, d.center, Some(d.radius), cfg)?;
    }
    Ok(total)
}
