//! Intersection areas of a disk with a disk or an axis-aligned rectangle.

use std::f64::consts::PI;

/// Area of the intersection of disks with radii `r1`, `r2` whose centers are
/// `d` apart.
pub fn lens_area(d: f64, r1: f64, r2: f64) -> f64 {
    let d = d.abs();
    if r1 <= 0.0 || r2 <= 0.0 || d >= r1 + r2 {
        return 0.0;
    }
    if d <= (r1 - r2).abs() {
        let r = r1.min(r2);
        return PI * r * r;
    }
    let c1 = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).clamp(-1.0, 1.0);
    let c2 = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).clamp(-1.0, 1.0);
    let k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    r1 * r1 * c1.acos() + r2 * r2 * c2.acos() - 0.5 * k.max(0.0).sqrt()
}

/// `∫_0^x √(ρ² − t²) dt`.
fn half_chord_primitive(x: f64, rho: f64) -> f64 {
    let s = (rho * rho - x * x).max(0.0).sqrt();
    0.5 * (x * s + rho * rho * (x / rho).clamp(-1.0, 1.0).asin())
}

fn half_chord_integral(lo: f64, hi: f64, rho: f64) -> f64 {
    if hi <= lo {
        0.0
    } else {
        half_chord_primitive(hi, rho) - half_chord_primitive(lo, rho)
    }
}

/// Area of `{x ≤ qx, y ≤ qy}` inside the disk of radius `rho` at the origin.
fn quadrant_area(qx: f64, qy: f64, rho: f64) -> f64 {
    if qx <= -rho || qy <= -rho {
        return 0.0;
    }
    let qx = qx.min(rho);
    if qy >= rho {
        return 2.0 * half_chord_integral(-rho, qx, rho);
    }
    // Columns with |x| < t cross the line y = qy; the others lie wholly
    // above it (qy < 0) or below it (qy ≥ 0).
    let t = (rho * rho - qy * qy).sqrt();
    let (lo, hi) = (-t, t.min(qx));
    let mut area = 0.0;
    if hi > lo {
        area += qy * (hi - lo) + half_chord_integral(lo, hi, rho);
    }
    if qy >= 0.0 {
        area += 2.0 * half_chord_integral(-rho, qx.min(-t), rho);
        area += 2.0 * half_chord_integral(t, qx, rho);
    }
    area
}

/// Area of the disk of radius `rho` centered at `p` inside
/// `[x0, x1] × [y0, y1]`.
pub fn disk_rect_area(p: [f64; 2], rho: f64, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    if rho <= 0.0 || x1 <= x0 || y1 <= y0 {
        return 0.0;
    }
    let (ax0, ax1, ay0, ay1) = (x0 - p[0], x1 - p[0], y0 - p[1], y1 - p[1]);
    let area = quadrant_area(ax1, ay1, rho) - quadrant_area(ax0, ay1, rho) - quadrant_area(ax1, ay0, rho)
        + quadrant_area(ax0, ay0, rho);
    area.clamp(0.0, PI * rho * rho)
}
