//! Termination functions, stored through their derivative.
//!
//! A termination function `z` equals 1 for `x ≤ 0`, 0 for `x ≥ c`, and its
//! derivative `z′` carries total mass −1 on `[0, c]`. The derivative is kept as
//! a measure: finitely many point atoms plus a piecewise-polynomial density.
//! That class contains every Dirac comb and box used in practice and is closed
//! under convolution, so combining two termination functions is exact.
//!
//! `z` itself is recovered on demand as `1 + ∫_{-∞}^{x} z′`, with atoms acting
//! at their own position (an atom at 0 already counts at `x = 0`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;

/// Tolerance on the total mass for the closed-form constructors.
pub const EXACT_MASS_TOL: f64 = 1e-12;
/// Tolerance on the total mass once convolutions are involved.
pub const COMBINED_MASS_TOL: f64 = 1e-9;

/// Point mass of `z′`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(rename = "pos")]
    pub position: f64,
    #[serde(rename = "w")]
    pub weight: f64,
}

impl Atom {
    pub fn new(position: f64, weight: f64) -> Self {
        Self { position, weight }
    }
}

/// Polynomial density on `[lo, hi]`, in the local coordinate `x - lo`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensitySegment {
    pub lo: f64,
    pub hi: f64,
    #[serde(rename = "coeffs")]
    pub coefficients: Vec<f64>,
}

impl DensitySegment {
    pub fn new(lo: f64, hi: f64, coefficients: Vec<f64>) -> Self {
        Self {
            lo,
            hi,
            coefficients,
        }
    }

    pub fn constant(lo: f64, hi: f64, density: f64) -> Self {
        Self::new(lo, hi, vec![density])
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mass(&self) -> f64 {
        poly::integral_from_zero(&self.coefficients, self.width())
    }

    /// Density at `x`, which must lie in `[lo, hi]`.
    pub fn density(&self, x: f64) -> f64 {
        poly::eval(&self.coefficients, x - self.lo)
    }

    /// Mass on `[lo, min(x, hi)]`.
    pub fn mass_below(&self, x: f64) -> f64 {
        if x <= self.lo {
            0.0
        } else {
            poly::integral_from_zero(&self.coefficients, x.min(self.hi) - self.lo)
        }
    }

    fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }
}

/// Derivative `z′` of a termination function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminationDerivative {
    support: f64,
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    segments: Vec<DensitySegment>,
}

/// Per-condition outcome of [`TerminationDerivative::validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub mass: f64,
    pub support: f64,
    pub tolerance: f64,
    pub nonempty: bool,
    pub finite: bool,
    pub within_support: bool,
    pub segments_ordered: bool,
    pub unit_negative_mass: bool,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl TerminationDerivative {
    /// Assembles a derivative without checking it; see [`Self::validate`].
    /// Atoms are sorted by position and segments by their lower end.
    pub fn from_parts(support: f64, mut atoms: Vec<Atom>, mut segments: Vec<DensitySegment>) -> Self {
        atoms.sort_by(|a, b| a.position.total_cmp(&b.position));
        segments.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        Self {
            support,
            atoms,
            segments,
        }
    }

    /// Dirac atoms given as `(position, weight)`; the support is the largest
    /// position, or 1 when every atom sits at the origin.
    pub fn make_atoms(entries: &[(f64, f64)]) -> Result<Self> {
        let max_pos = entries.iter().map(|e| e.0).fold(0.0, f64::max);
        let support = if max_pos > 0.0 { max_pos } else { 1.0 };
        Self::make_atoms_with_support(entries, support)
    }

    pub fn make_atoms_with_support(entries: &[(f64, f64)], support: f64) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidTermination("no atoms given".into()));
        }
        for &(pos, w) in entries {
            if !pos.is_finite() || !w.is_finite() {
                return Err(Error::InvalidTermination(format!(
                    "non-finite atom ({pos}, {w})"
                )));
            }
            if pos < 0.0 {
                return Err(Error::InvalidTermination(format!(
                    "atom position {pos} is negative"
                )));
            }
            if pos > support {
                return Err(Error::InvalidTermination(format!(
                    "atom position {pos} exceeds support {support}"
                )));
            }
        }
        if !(support > 0.0 && support.is_finite()) {
            return Err(Error::InvalidTermination(format!(
                "support must be positive, got {support}"
            )));
        }
        let mass: f64 = entries.iter().map(|e| e.1).sum();
        if (mass + 1.0).abs() > EXACT_MASS_TOL {
            return Err(Error::InvalidTermination(format!(
                "atom weights sum to {mass}, expected -1"
            )));
        }
        let atoms = entries.iter().map(|&(p, w)| Atom::new(p, w)).collect();
        Ok(Self::from_parts(support, atoms, Vec::new()))
    }

    /// The sharp cut-off of the conventional improper integral.
    pub fn step() -> Self {
        Self::from_parts(1.0, vec![Atom::new(0.0, -1.0)], Vec::new())
    }

    /// Two half-weight atoms `spacing` apart.
    pub fn pair(spacing: f64) -> Result<Self> {
        check_spacing(spacing)?;
        Self::make_atoms(&[(0.0, -0.5), (spacing, -0.5)])
    }

    /// Weights ¼, ½, ¼ at 0, `spacing`, 2·`spacing`.
    pub fn triple(spacing: f64) -> Result<Self> {
        check_spacing(spacing)?;
        Self::make_atoms(&[(0.0, -0.25), (spacing, -0.5), (2.0 * spacing, -0.25)])
    }

    /// `order`-fold self-combination of [`Self::pair`]: binomial weights
    /// `-C(order, k) / 2^order` at `k·spacing`.
    pub fn binomial_comb(spacing: f64, order: usize) -> Result<Self> {
        check_spacing(spacing)?;
        if order == 0 {
            return Ok(Self::step());
        }
        let scale = 0.5f64.powi(order as i32);
        let entries: Vec<(f64, f64)> = (0..=order)
            .map(|k| (k as f64 * spacing, -poly::binomial(order, k) * scale))
            .collect();
        Self::make_atoms(&entries)
    }

    /// Uniform density `-1/width` on `[0, width]`.
    pub fn make_box(width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidTermination(format!(
                "box width must be positive, got {width}"
            )));
        }
        Ok(Self::from_parts(
            width,
            Vec::new(),
            vec![DensitySegment::constant(0.0, width, -1.0 / width)],
        ))
    }

    /// Atoms at 0 and `spacing` weighted so that `e^{β x}`-growth cancels
    /// between them: `-e^{βs}/(1+e^{βs})` and `-1/(1+e^{βs})`.
    pub fn make_exp_pair(spacing: f64, beta: f64) -> Result<Self> {
        check_spacing(spacing)?;
        if !beta.is_finite() {
            return Err(Error::InvalidTermination(format!("beta must be finite, got {beta}")));
        }
        let t = beta * spacing;
        // Logistic form avoids overflow of e^{βs}.
        let w0 = -1.0 / (1.0 + (-t).exp());
        let w1 = -1.0 / (1.0 + t.exp());
        Self::make_atoms_with_support(&[(0.0, w0), (spacing, w1)], spacing)
    }

    pub fn support(&self) -> f64 {
        self.support
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn segments(&self) -> &[DensitySegment] {
        &self.segments
    }

    pub fn mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum::<f64>()
            + self.segments.iter().map(DensitySegment::mass).sum::<f64>()
    }

    /// True for a single atom at the origin (the conventional cut-off).
    pub fn is_step(&self) -> bool {
        self.segments.is_empty() && self.atoms.len() == 1 && self.atoms[0].position == 0.0
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(COMBINED_MASS_TOL)
    }

    pub fn validate_with(&self, tolerance: f64) -> ValidationReport {
        let mass = self.mass();
        let mut failures = Vec::new();
        let nonempty = !(self.atoms.is_empty() && self.segments.is_empty());
        if !nonempty {
            failures.push("no atoms and no density segments (mass 0)".to_string());
        }
        let finite = self.support.is_finite()
            && self
                .atoms
                .iter()
                .all(|a| a.position.is_finite() && a.weight.is_finite())
            && self.segments.iter().all(|s| {
                s.lo.is_finite() && s.hi.is_finite() && s.coefficients.iter().all(|c| c.is_finite())
            });
        if !finite {
            failures.push("non-finite support, position, weight or coefficient".to_string());
        }
        if !(self.support > 0.0) {
            failures.push(format!("support {} is not positive", self.support));
        }
        let slack = 1e-12 * self.support.abs().max(1.0);
        let mut within_support = true;
        for a in &self.atoms {
            if a.position < -slack || a.position > self.support + slack {
                within_support = false;
                failures.push(format!(
                    "atom at {} lies outside [0, {}]",
                    a.position, self.support
                ));
            }
        }
        for s in &self.segments {
            if s.lo < -slack || s.hi > self.support + slack {
                within_support = false;
                failures.push(format!(
                    "segment [{}, {}] lies outside [0, {}]",
                    s.lo, s.hi, self.support
                ));
            }
        }
        let mut segments_ordered = self.segments.iter().all(|s| s.lo < s.hi);
        segments_ordered &= self
            .segments
            .windows(2)
            .all(|w| w[0].hi <= w[1].lo + slack);
        if !segments_ordered {
            failures.push("density segments are empty, overlapping or unsorted".to_string());
        }
        let unit_negative_mass = (mass + 1.0).abs() <= tolerance;
        if !unit_negative_mass {
            failures.push(format!("total mass {mass} differs from -1"));
        }
        ValidationReport {
            mass,
            support: self.support,
            tolerance,
            nonempty,
            finite,
            within_support,
            segments_ordered,
            unit_negative_mass,
            failures,
        }
    }

    fn ensure_valid(&self, what: &str) -> Result<()> {
        let report = self.validate();
        if report.passed() {
            Ok(())
        } else {
            Err(Error::InvalidTermination(format!(
                "{what}: {}",
                report.failures.join("; ")
            )))
        }
    }

    /// `z(x) = 1 + ∫_{-∞}^{x} z′`.
    pub fn reconstruct_z(&self, x: f64) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .take_while(|a| a.position <= x)
            .map(|a| a.weight)
            .sum();
        let density: f64 = self.segments.iter().map(|s| s.mass_below(x)).sum();
        1.0 + atoms + density
    }

    /// Value of the density part at `x` (atoms excluded). Segments are
    /// half-open `[lo, hi)`.
    pub fn density_at(&self, x: f64) -> f64 {
        self.segments
            .iter()
            .find(|s| s.lo <= x && x < s.hi)
            .map_or(0.0, |s| s.density(x))
    }

    /// The combined termination derivative `-(z1′ ⊗ z2′)`, supported on
    /// `[0, c1 + c2]`.
    pub fn combine(&self, other: &Self) -> Result<Self> {
        self.ensure_valid("first component")?;
        other.ensure_valid("second component")?;
        let support = self.support + other.support;
        let merge_eps = 1e-12 * support.max(1.0);

        let mut atoms: Vec<Atom> = Vec::with_capacity(self.atoms.len() * other.atoms.len());
        for a in &self.atoms {
            for b in &other.atoms {
                atoms.push(Atom::new(a.position + b.position, -a.weight * b.weight));
            }
        }
        let atoms = merge_atoms(atoms, merge_eps);

        let mut pieces: Vec<DensitySegment> = Vec::new();
        for a in &self.atoms {
            pieces.extend(other.segments.iter().map(|s| shifted_segment(s, a)));
        }
        for b in &other.atoms {
            pieces.extend(self.segments.iter().map(|s| shifted_segment(s, b)));
        }
        for s in &self.segments {
            for t in &other.segments {
                pieces.extend(convolve_segments(s, t));
            }
        }
        let segments = partition_pieces(&pieces, merge_eps);
        Ok(Self::from_parts(support, atoms, segments))
    }

    /// `z′` of `x ↦ ζ(s·x)` for this `ζ′`: atoms move to `p/s`, densities are
    /// multiplied by `s`, the support shrinks to `c/s`. Mass is unchanged.
    pub fn rescaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "scale factor must be positive, got {s}"
            )));
        }
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom::new(a.position / s, a.weight))
            .collect();
        let segments = self
            .segments
            .iter()
            .map(|seg| {
                let coefficients = poly::scale_argument(&seg.coefficients, s)
                    .into_iter()
                    .map(|c| c * s)
                    .collect();
                DensitySegment::new(seg.lo / s, seg.hi / s, coefficients)
            })
            .collect();
        Ok(Self::from_parts(self.support / s, atoms, segments))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("termination derivative serialises")
    }

    /// Parses the JSON form and validates it.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Self = serde_json::from_str(text)
            .map_err(|e| Error::InvalidTermination(format!("malformed JSON: {e}")))?;
        let zd = Self::from_parts(raw.support, raw.atoms, raw.segments);
        zd.ensure_valid("parsed termination")?;
        Ok(zd)
    }
}

fn check_spacing(spacing: f64) -> Result<()> {
    if spacing > 0.0 && spacing.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTermination(format!(
            "spacing must be positive, got {spacing}"
        )))
    }
}

fn merge_atoms(mut atoms: Vec<Atom>, eps: f64) -> Vec<Atom> {
    atoms.sort_by(|a, b| a.position.total_cmp(&b.position));
    let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match merged.last_mut() {
            Some(last) if (a.position - last.position).abs() <= eps => last.weight += a.weight,
            _ => merged.push(a),
        }
    }
    merged
}

fn shifted_segment(seg: &DensitySegment, atom: &Atom) -> DensitySegment {
    DensitySegment::new(
        seg.lo + atom.position,
        seg.hi + atom.position,
        seg.coefficients.iter().map(|c| -atom.weight * c).collect(),
    )
}

/// Pieces of `-(p ⊗ q)` for two polynomial segments.
///
/// In the result's local coordinate `t = x - p.lo - q.lo`,
/// `(p ⊗ q)(t) = ∫ p(u) q(t - u) du` over `u ∈ [max(0, t - L₂), min(L₁, t)]`,
/// which is a polynomial in `t` between the breakpoints
/// `0, min(L₁, L₂), max(L₁, L₂), L₁ + L₂`.
fn convolve_segments(p: &DensitySegment, q: &DensitySegment) -> Vec<DensitySegment> {
    let (l1, l2) = (p.width(), q.width());
    let origin = p.lo + q.lo;
    let mut breaks = [0.0, l1.min(l2), l1.max(l2), l1 + l2];
    breaks.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    for w in breaks.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        if t1 - t0 <= 0.0 {
            continue;
        }
        let mid = 0.5 * (t0 + t1);
        let lower: Vec<f64> = if mid <= l2 { vec![0.0] } else { vec![-l2, 1.0] };
        let upper: Vec<f64> = if mid <= l1 { vec![0.0, 1.0] } else { vec![l1] };
        let mut acc: Vec<f64> = Vec::new();
        for (i, &pi) in p.coefficients.iter().enumerate() {
            for (j, &qj) in q.coefficients.iter().enumerate() {
                // q(t-u) = Σ_k C(j,k) t^{j-k} (-u)^k
                for k in 0..=j {
                    let n = i + k + 1;
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let coef = pi * qj * poly::binomial(j, k) * sign / n as f64;
                    let mut bracket = poly::pow(&upper, n);
                    poly::add_into(&mut bracket, &poly::pow(&lower, n), -1.0);
                    let mut t_power = vec![0.0; j - k + 1];
                    t_power[j - k] = 1.0;
                    poly::add_into(&mut acc, &poly::mul(&t_power, &bracket), coef);
                }
            }
        }
        let max_len = p.degree() + q.degree() + 2;
        acc.truncate(max_len);
        let local = poly::taylor_shift(&acc, t0);
        out.push(DensitySegment::new(
            origin + t0,
            origin + t1,
            local.into_iter().map(|c| -c).collect(),
        ));
    }
    out
}

/// Sums possibly overlapping polynomial pieces into sorted, disjoint
/// segments.
fn partition_pieces(pieces: &[DensitySegment], eps: f64) -> Vec<DensitySegment> {
    if pieces.is_empty() {
        return Vec::new();
    }
    let mut points: Vec<f64> = pieces.iter().flat_map(|p| [p.lo, p.hi]).collect();
    points.sort_by(f64::total_cmp);
    let mut breaks: Vec<f64> = Vec::with_capacity(points.len());
    for x in points {
        match breaks.last() {
            Some(&last) if x - last <= eps => {}
            _ => breaks.push(x),
        }
    }
    let mut out = Vec::new();
    for w in breaks.windows(2) {
        let (u, v) = (w[0], w[1]);
        let mut coeffs: Vec<f64> = Vec::new();
        let mut covered = false;
        for p in pieces {
            if p.lo <= u + eps && p.hi >= v - eps {
                covered = true;
                poly::add_into(&mut coeffs, &poly::taylor_shift(&p.coefficients, u - p.lo), 1.0);
            }
        }
        if covered {
            out.push(DensitySegment::new(u, v, coeffs));
        }
    }
    out
}
