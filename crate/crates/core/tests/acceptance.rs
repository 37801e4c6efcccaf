//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line to stderr
//! (bypassing the harness capture) and then asserts.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use termint::calculus::{
    interchange_check, leibniz_check, linear_change_of_variable, substitution_counterexample,
    ParametricIntegrand, WeightedInterchangeProblem,
};
use termint::integrand::{catalog, Integrand};
use termint::plane2d::{self, evaluate2d, CurveFamily, Integrand2D, Kernel2D, QuadConfig2D, Status2D};
use termint::quadrature::{self, QuadOptions};
use termint::{
    evaluate, linearity_check, uniqueness_report, LimitPolicy, LimitStatus, TerminationDerivative,
};

const SEED: u64 = 20_240_601;

fn report(id: &str, passed: bool, detail: &str) {
    let line = format!(
        "acceptance {id:<4} {}  {detail}\n",
        if passed { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
}

fn value(g: &Integrand, a: f64, zd: &TerminationDerivative) -> (f64, Duration) {
    let start = Instant::now();
    let r = evaluate(g, a, zd, &LimitPolicy::default().scaled_for(g)).unwrap();
    let v = r.value.unwrap_or(f64::NAN);
    (v, start.elapsed())
}

const ALPHAS: [f64; 2] = [1.0, 2.5];
const LOWER: [f64; 2] = [0.0, 1.0];

#[test]
fn criterion_01_sin_under_pair() {
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for alpha in ALPHAS {
        for a in LOWER {
            let g = catalog("sin_ax", &[("alpha", alpha)]).unwrap();
            let (v, t) = value(&g, a, &TerminationDerivative::pair(PI / alpha).unwrap());
            worst = worst.max((v - (alpha * a).cos() / alpha).abs());
            slowest = slowest.max(t);
        }
    }
    let passed = worst <= 1e-8 && slowest < Duration::from_secs(1);
    report("1", passed, &format!("sin(ax) under pair(pi/a): max error {worst:.2e} (tol 1e-8), slowest {slowest:?} (< 1 s)"));
    assert!(passed);
}

#[test]
fn criterion_02_x_cos_under_triple() {
    let mut worst: f64 = 0.0;
    for alpha in ALPHAS {
        for a in LOWER {
            let g = catalog("x_cos_ax", &[("alpha", alpha)]).unwrap();
            let (v, _) = value(&g, a, &TerminationDerivative::triple(PI / alpha).unwrap());
            let exact = -(alpha * a).cos() / (alpha * alpha) - a * (alpha * a).sin() / alpha;
            worst = worst.max((v - exact).abs());
        }
    }
    let passed = worst <= 1e-8;
    report("2", passed, &format!("x cos(ax) under triple(pi/a): max error {worst:.2e} (tol 1e-8)"));
    assert!(passed);
}

fn exp_sin_exact(alpha: f64, beta: f64, a: f64) -> f64 {
    (beta * a).exp() * (alpha * (alpha * a).cos() - beta * (alpha * a).sin()) / (alpha * alpha + beta * beta)
}

#[test]
fn criterion_03_exp_sin_under_exp_pair() {
    let mut abs_neg: f64 = 0.0;
    let mut rel_pos: f64 = 0.0;
    let mut zero_vs_pair: f64 = 0.0;
    for alpha in ALPHAS {
        for a in LOWER {
            let run = |beta: f64| {
                let g = catalog("exp_sin", &[("alpha", alpha), ("beta", beta)]).unwrap();
                value(&g, a, &TerminationDerivative::make_exp_pair(PI / alpha, beta).unwrap()).0
            };
            abs_neg = abs_neg.max((run(-0.5) - exp_sin_exact(alpha, -0.5, a)).abs());
            let exact = exp_sin_exact(alpha, 0.1, a);
            rel_pos = rel_pos.max(((run(0.1) - exact) / exact).abs());
            let sin = catalog("sin_ax", &[("alpha", alpha)]).unwrap();
            let (pair_value, _) = value(&sin, a, &TerminationDerivative::pair(PI / alpha).unwrap());
            zero_vs_pair = zero_vs_pair
                .max((run(0.0) - pair_value).abs())
                .max((pair_value - (alpha * a).cos() / alpha).abs());
        }
    }
    let passed = abs_neg <= 1e-8 && rel_pos <= 1e-6 && zero_vs_pair <= 1e-8;
    report(
        "3",
        passed,
        &format!(
            "exp(bx) sin(ax): beta=-0.5 abs error {abs_neg:.2e} (1e-8), beta=0.1 rel error {rel_pos:.2e} (1e-6, capped grid), beta=0 vs criterion 1 {zero_vs_pair:.2e} (1e-8)"
        ),
    );
    assert!(passed);
}

#[test]
fn criterion_04_conventional_special_case() {
    let g = catalog("exp_decay", &[("lambda", 1.0)]).unwrap();
    let terminations = [
        ("step", TerminationDerivative::step()),
        ("pair(pi)", TerminationDerivative::pair(PI).unwrap()),
        ("pair(1)", TerminationDerivative::pair(1.0).unwrap()),
        ("box(1)", TerminationDerivative::make_box(1.0).unwrap()),
        ("box(2pi)", TerminationDerivative::make_box(2.0 * PI).unwrap()),
    ];
    let mut worst: f64 = 0.0;
    for (_, zd) in &terminations {
        worst = worst.max((value(&g, 0.0, zd).0 - 1.0).abs());
    }
    let passed = worst <= 1e-9;
    report("4", passed, &format!("exp(-x) from 0 under step/pair/box: max error {worst:.2e} (tol 1e-9)"));
    assert!(passed);
}

#[test]
fn criterion_05_uniqueness() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    let mut all_passed = true;
    for _ in 0..10 {
        let alpha: f64 = rng.random_range(0.3..4.0);
        let g = catalog("sin_ax", &[("alpha", alpha)]).unwrap();
        let pair = TerminationDerivative::pair(PI / alpha).unwrap();
        let boxed = TerminationDerivative::make_box(2.0 * PI / alpha).unwrap();
        let both = pair.combine(&boxed).unwrap();
        let r = uniqueness_report(&g, 0.0, &[pair, boxed, both], &LimitPolicy::default().scaled_for(&g)).unwrap();
        worst = worst.max(r.discrepancy);
        all_passed &= r.passed;
    }
    let passed = all_passed && worst < 1e-8;
    report("5", passed, &format!("sin(ax), 10 random alpha, pair/box/combined: max spread {worst:.2e} (tol 1e-8)"));
    assert!(passed);
}

fn random_member(rng: &mut ChaCha8Rng) -> (Integrand, TerminationDerivative) {
    match rng.random_range(0..5) {
        0 => {
            let alpha = rng.random_range(0.3..4.0);
            (catalog("sin_ax", &[("alpha", alpha)]).unwrap(), TerminationDerivative::pair(PI / alpha).unwrap())
        }
        1 => {
            let alpha = rng.random_range(0.5..3.0);
            (catalog("x_cos_ax", &[("alpha", alpha)]).unwrap(), TerminationDerivative::triple(PI / alpha).unwrap())
        }
        2 => {
            let alpha = rng.random_range(0.5..3.0);
            let beta = rng.random_range(-1.0..-0.2);
            (
                catalog("exp_sin", &[("alpha", alpha), ("beta", beta)]).unwrap(),
                TerminationDerivative::make_exp_pair(PI / alpha, beta).unwrap(),
            )
        }
        3 => {
            let lambda = rng.random_range(0.5..2.0);
            (catalog("exp_decay", &[("lambda", lambda)]).unwrap(), TerminationDerivative::step())
        }
        _ => (
            catalog("square_wave", &[]).unwrap(),
            TerminationDerivative::make_atoms(&[(0.0, -0.5), (1.0, -0.5)]).unwrap(),
        ),
    }
}

#[test]
fn criterion_06_linearity() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut worst: f64 = 0.0;
    let mut all_passed = true;
    for _ in 0..20 {
        let (g1, z1) = random_member(&mut rng);
        let (g2, z2) = random_member(&mut rng);
        let c1 = rng.random_range(-3.0..3.0);
        let c2 = rng.random_range(-3.0..3.0);
        let a = rng.random_range(0.0..2.0);
        let r = linearity_check(&g1, &g2, c1, c2, a, &z1, &z2, &LimitPolicy::default()).unwrap();
        worst = worst.max(r.difference.unwrap_or(f64::INFINITY));
        all_passed &= r.passed;
    }
    let passed = all_passed && worst <= 1e-8;
    report("6", passed, &format!("20 random weighted pairs: max |lhs - rhs| {worst:.2e} (tol 1e-8)"));
    assert!(passed);
}

#[test]
fn criterion_07_leibniz() {
    let h: f64 = 1e-4;
    let bound = (10.0 * h * h).max(1e-6);
    let policy = LimitPolicy::default();
    let mut worst: f64 = 0.0;
    let mut worst_closed: f64 = 0.0;
    for (p, d_exact) in [
        (
            ParametricIntegrand::sin_xy(),
            (|a: f64, y: f64| -a * (a * y).sin() / y - (a * y).cos() / (y * y)) as fn(f64, f64) -> f64,
        ),
        (ParametricIntegrand::cos_xy_over_x(), |a: f64, y: f64| -(a * y).cos() / y),
    ] {
        for y in [0.5, 1.0, 2.0] {
            for a in [1.0, 2.0] {
                let r = leibniz_check(&p, a, y, h, &policy).unwrap();
                worst = worst.max((r.lhs - r.rhs).abs());
                worst_closed = worst_closed.max((r.rhs - d_exact(a, y)).abs());
            }
        }
    }
    let passed = worst <= bound && worst_closed <= 1e-8;
    report(
        "7",
        passed,
        &format!("sin(xy) and cos(xy)/x, y in {{0.5,1,2}}, a in {{1,2}}: max |lhs - rhs| {worst:.2e} (tol {bound:.0e}); rhs vs closed form {worst_closed:.2e}"),
    );
    assert!(passed);
}

#[test]
fn criterion_08_interchange() {
    let oracle = quadrature::integrate_plain(|y: f64| y.cos() / y, 1.0, 2.0, QuadOptions::default())
        .unwrap()
        .value;
    let policy = LimitPolicy::default();
    let run = |n: usize| {
        let p = WeightedInterchangeProblem::new(|_| 1.0, ParametricIntegrand::sin_xy(), 1.0, 2.0, 1.0, n);
        interchange_check(&p, &policy).unwrap()
    };
    let (r33, r65) = (run(33), run(65));
    let nan = f64::NAN;
    let (l33, l65, rhs) = (r33.lhs.unwrap_or(nan), r65.lhs.unwrap_or(nan), r33.rhs.unwrap_or(nan));
    let agreement = (l33 - rhs).abs().max((l65 - rhs).abs());
    let vs_oracle = (l65 - oracle).abs().max((rhs - oracle).abs());
    let doubling = (l33 - l65).abs();
    let passed = agreement <= 1e-6 && vs_oracle <= 1e-6 && doubling < 1e-7;
    report(
        "8",
        passed,
        &format!("w=1, sin(xy), y in [1,2]: |lhs - rhs| {agreement:.2e}, vs oracle {vs_oracle:.2e} (tol 1e-6); N 33->65 change {doubling:.2e} (< 1e-7)"),
    );
    assert!(passed);
}

#[test]
fn criterion_09a_linear_change_of_variable() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let g = catalog("sin_ax", &[("alpha", 1.0)]).unwrap();
    let zeta = TerminationDerivative::pair(PI).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let r = rng.random_range(-3.0..3.0);
        let s = rng.random_range(0.5..4.0);
        let lower = rng.random_range(0.0..3.0);
        let original = value(&g, lower, &zeta).0;
        let t = linear_change_of_variable(&g, &zeta, lower, r, s).unwrap();
        let transformed = value(&t.integrand, t.lower_bound, &t.termination).0;
        worst = worst.max((original - t.factor * transformed).abs());
    }
    let passed = worst <= 1e-8;
    report("9a", passed, &format!("u = r + s x, 20 random (r, s): max |orig - s * transformed| {worst:.2e} (tol 1e-8)"));
    assert!(passed);
}

#[test]
fn criterion_09b_substitution_counterexample() {
    let policy = LimitPolicy::default();
    let mut passed = true;
    let mut detail = Vec::new();
    for alpha in [0.25, -0.25] {
        let r = substitution_counterexample(alpha, &policy).unwrap();
        passed &= (r.difference - 2.0 * alpha).abs() <= 1e-8;
        detail.push(format!(
            "alpha {alpha}: base {:.6}, substituted {:.6}, difference {:.6} vs stated 2*alpha {:.6}",
            r.base, r.substituted, r.difference, r.stated_difference
        ));
    }
    report("9b", passed, &format!("{} (tol 1e-8)", detail.join("; ")));
    assert!(passed, "substituted value differs from base by 2*alpha/pi, not 2*alpha");
}

#[test]
fn criterion_10_plane() {
    let quad = QuadConfig2D::default();
    let gaussian = evaluate2d(
        &Integrand2D::gaussian(),
        &Kernel2D::point(),
        &[CurveFamily::circle(), CurveFamily::square()],
        &plane2d::default_policy(),
        &quad,
    )
    .unwrap();
    let gauss_err = gaussian
        .per_family
        .values()
        .map(|r| r.limit.map_or(f64::INFINITY, |l| (l - PI).abs()))
        .fold(0.0, f64::max);

    let sin_policy = LimitPolicy {
        tol: 1e-2,
        ..plane2d::default_policy()
    };
    let sin_quad = QuadConfig2D {
        radial_panel: 0.02,
        abs_tol: 1e-9,
        rel_tol: 1e-9,
        ..quad
    };
    let sin = evaluate2d(
        &Integrand2D::sin_r2(),
        &Kernel2D::uniform_disk(2.0).unwrap(),
        &[CurveFamily::circle(), CurveFamily::offset_circle([1.0, 0.0])],
        &sin_policy,
        &sin_quad,
    )
    .unwrap();
    let b_max = sin_policy.b_end();
    let sin_err = sin
        .per_family
        .values()
        .map(|r| r.limit.map_or(f64::INFINITY, |l| (l - PI).abs()))
        .fold(0.0, f64::max);

    let constant = evaluate2d(
        &Integrand2D::constant(1.0),
        &Kernel2D::point(),
        &[CurveFamily::circle(), CurveFamily::square()],
        &plane2d::default_policy(),
        &quad,
    )
    .unwrap();
    let drifting = constant.value.is_none()
        && constant.per_family.values().all(|r| r.status == LimitStatus::Drifting)
        && matches!(constant.status, Status2D::FamilyNotConverged { .. });

    let passed = gaussian.agreed()
        && gauss_err <= 1e-6
        && sin.agreed()
        && sin_err <= 1e-2
        && b_max <= 40.0
        && drifting;
    report(
        "10",
        passed,
        &format!(
            "gaussian circle/square error {gauss_err:.2e} (1e-6); sin(r^2) disk-smoothed circle/offset error {sin_err:.2e}, spread {:.2e} (1e-2, b <= {b_max:.1}); constant drifting: {drifting}",
            sin.agreement_spread.unwrap_or(f64::NAN)
        ),
    );
    assert!(passed);
}

#[test]
fn criterion_11_property_suites() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 11);
    let policy = LimitPolicy::default();

    // antiderivative-shift invariance
    let mut shift_ok = true;
    for _ in 0..100 {
        let (g, zd) = random_member(&mut rng);
        let a = rng.random_range(0.0..2.0);
        let p = policy.scaled_for(&g);
        let base = evaluate(&g, a, &zd, &p).unwrap().value.unwrap();
        let c = 1e3;
        let shifted = evaluate(&g.with_shifted_antiderivative(c).unwrap(), a, &zd, &p)
            .unwrap()
            .value
            .unwrap();
        shift_ok &= (base - shifted).abs() < 1e-9 * (1.0 + c);
    }

    // combine commutativity, mass, support
    let mut combine_ok = true;
    for _ in 0..100 {
        let z1 = random_termination(&mut rng);
        let z2 = random_termination(&mut rng);
        let (a, b) = (z1.combine(&z2).unwrap(), z2.combine(&z1).unwrap());
        combine_ok &= (a.mass() + 1.0).abs() <= 1e-12 && a.support() == z1.support() + z2.support();
        combine_ok &= a.atoms().len() == b.atoms().len()
            && a
                .atoms()
                .iter()
                .zip(b.atoms())
                .all(|(x, y)| (x.position - y.position).abs() <= 1e-12 && (x.weight - y.weight).abs() <= 1e-12);
        let c = a.support();
        combine_ok &= (0..1000).all(|i| {
            let x = c * (i as f64 + 0.5) / 1000.0;
            (a.density_at(x) - b.density_at(x)).abs() <= 1e-12
        });
    }

    // w_field bounds
    let mut w_ok = true;
    for _ in 0..100 {
        let k = random_kernel(&mut rng);
        let fam = match rng.random_range(0..3) {
            0 => CurveFamily::circle(),
            1 => CurveFamily::square(),
            _ => CurveFamily::offset_circle([rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]),
        };
        let b = rng.random_range(5.0..30.0);
        for _ in 0..50 {
            let radius = rng.random_range(0.0..fam.outer_radius(b) + k.support_radius + 2.0);
            let angle = rng.random_range(0.0..2.0 * PI);
            let r = [radius * angle.cos(), radius * angle.sin()];
            let w = plane2d::w_field(&k, &fam, b, r);
            w_ok &= (-1e-12..=1.0 + 1e-12).contains(&w);
            if radius <= fam.inscribed_radius(b) - k.support_radius {
                w_ok &= (w - 1.0).abs() <= 1e-12;
            }
            if radius >= fam.outer_radius(b) + k.support_radius {
                w_ok &= w.abs() <= 1e-12;
            }
        }
    }

    let elapsed = start.elapsed();
    let passed = shift_ok && combine_ok && w_ok && elapsed < Duration::from_secs(300);
    report(
        "11",
        passed,
        &format!(
            "100-case seeded runs: shift invariance {shift_ok}, combine commutativity/mass/support {combine_ok}, w_field bounds {w_ok}; {elapsed:.1?}"
        ),
    );
    assert!(passed);
}

fn random_termination(rng: &mut ChaCha8Rng) -> TerminationDerivative {
    let component = |rng: &mut ChaCha8Rng| match rng.random_range(0..5) {
        0 => TerminationDerivative::pair(rng.random_range(0.1..5.0)).unwrap(),
        1 => TerminationDerivative::triple(rng.random_range(0.1..5.0)).unwrap(),
        2 => TerminationDerivative::make_box(rng.random_range(0.1..5.0)).unwrap(),
        3 => TerminationDerivative::make_exp_pair(rng.random_range(0.1..3.0), rng.random_range(-1.0..1.0)).unwrap(),
        _ => {
            // signed atoms normalised to mass -1
            let n = rng.random_range(1..5);
            let raw: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.random_range(0.0..4.0), rng.random_range(-2.0..2.0)))
                .collect();
            let m: f64 = raw.iter().map(|e| e.1).sum();
            let m = if m.abs() < 0.2 { m.signum() * 0.2 + m } else { m };
            let mut entries: Vec<(f64, f64)> = raw.iter().map(|&(p, w)| (p, -w / m)).collect();
            let total: f64 = entries.iter().map(|e| e.1).sum();
            entries[0].1 -= total + 1.0;
            TerminationDerivative::make_atoms_with_support(&entries, 4.0).unwrap()
        }
    };
    let first = component(rng);
    if rng.random_bool(0.5) {
        first.combine(&component(rng)).unwrap()
    } else {
        first
    }
}

fn random_kernel(rng: &mut ChaCha8Rng) -> Kernel2D {
    let mut point = || [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
    let pair = Kernel2D::pair(point()).unwrap();
    match rng.random_range(0..3) {
        0 => pair,
        1 => plane2d::combine2d(&pair, &Kernel2D::pair([rng.random_range(-1.0..1.0), 0.5]).unwrap()).unwrap(),
        _ => plane2d::combine2d(&pair, &Kernel2D::uniform_disk(rng.random_range(0.1..2.0)).unwrap()).unwrap(),
    }
}
