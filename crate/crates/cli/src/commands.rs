use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use termint::calculus::{
    interchange_check, leibniz_check, linear_change_of_variable, substitution_counterexample,
    ParametricIntegrand, WeightedInterchangeProblem,
};
use termint::evaluator::uniqueness_report_labeled;
use termint::plane2d::{self, evaluate2d, QuadConfig2D};
use termint::{catalog, evaluate, linearity_check, LimitPolicy, TerminationDerivative};

use crate::spec::{parse_family, parse_integrand, parse_integrand2d, parse_kernel, parse_termination};
use crate::{Cli, CliError, Command, ParametricExample};

/// What a subcommand produced, before it is wrapped in a record.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: String,
    pub passed: bool,
    pub result: Value,
    /// Human-readable summary for `--format text`.
    pub text: Vec<String>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialise")
}

fn pass_fail(passed: bool) -> String {
    if passed { "pass" } else { "fail" }.to_string()
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".to_string(), |v| format!("{v:.12}"))
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let policy_args = &cli.policy;
    match &cli.command {
        Command::Eval { integrand, termination } => {
            let g = integrand.build()?;
            let zd = parse_termination(termination)?;
            let policy = policy_args.resolve(LimitPolicy::default(), Some(&g))?;
            let r = evaluate(&g, integrand.a, &zd, &policy)?;
            let rep = &r.limit_report;
            let mut text = vec![
                format!("integrand   {}", g.label),
                format!("lower bound {}", integrand.a),
                format!("termination {termination}"),
                format!("status      {}", rep.status.as_str()),
                format!("value       {}", opt(r.value)),
                format!("spread      {:.3e}", rep.spread),
            ];
            if let Some(m) = rep.cesaro_mean {
                text.push(format!("cesaro mean of tail {m:.12}"));
            }
            Ok(Outcome {
                status: rep.status.as_str().to_string(),
                passed: r.converged(),
                result: to_value(&r),
                text,
            })
        }
        Command::Compare {
            integrand,
            termination,
            random_extra,
            seed,
        } => {
            let g = integrand.build()?;
            let mut members = termination
                .iter()
                .map(|t| Ok((t.clone(), parse_termination(t)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let first = members[0].clone();
            for k in 0..*random_extra {
                let extra = random_termination(&mut rng)?;
                members.push((format!("combine({},random{})", first.0, k + 1), first.1.combine(&extra)?));
            }
            if members.len() < 2 {
                return Err(CliError::Usage(
                    "compare needs two terminations, or --random-extra".into(),
                ));
            }
            let policy = policy_args.resolve(LimitPolicy::default(), Some(&g))?;
            let r = uniqueness_report_labeled(&g, integrand.a, &members, &policy)?;
            let mut text: Vec<String> = r
                .members
                .iter()
                .chain(&r.combinations)
                .map(|m| format!("{:<40} {:<12} {}", m.label, m.status.as_str(), opt(m.value)))
                .collect();
            text.push(format!("discrepancy {:.3e} (tol {:.0e}): {}", r.discrepancy, r.tol, pass_fail(r.passed)));
            Ok(Outcome {
                status: pass_fail(r.passed),
                passed: r.passed,
                result: to_value(&r),
                text,
            })
        }
        Command::Linearity { g1, g2, z1, z2, c1, c2, a } => {
            let (f1, f2) = (parse_integrand(g1)?, parse_integrand(g2)?);
            let (zd1, zd2) = (parse_termination(z1)?, parse_termination(z2)?);
            // one grid serves both integrands and their sum, so it is not period-scaled
            let policy = policy_args.resolve(LimitPolicy::default(), None)?;
            let r = linearity_check(&f1, &f2, *c1, *c2, *a, &zd1, &zd2, &policy)?;
            let text = vec![
                format!("c1*I(g1) + c2*I(g2) = {}", opt(r.lhs)),
                format!("I(c1*g1 + c2*g2)    = {}", opt(r.rhs)),
                format!("difference {} (tol {:.0e}): {}", opt(r.difference), r.tol, pass_fail(r.passed)),
            ];
            Ok(Outcome {
                status: pass_fail(r.passed),
                passed: r.passed,
                result: to_value(&r),
                text,
            })
        }
        Command::Leibniz { example, y, a, h } => {
            let p = parametric(*example);
            let policy = policy_args.resolve(LimitPolicy::default(), None)?;
            let r = leibniz_check(&p, *a, *y, *h, &policy)?;
            let text = vec![
                format!("{} at y = {y}, a = {a}", p.label),
                format!("finite difference   {:.12}", r.lhs),
                format!("integral of d/dy    {:.12}", r.rhs),
                format!("difference {:.3e} (tol {:.0e}): {}", r.difference, r.tol, pass_fail(r.passed)),
            ];
            Ok(Outcome {
                status: pass_fail(r.passed),
                passed: r.passed,
                result: to_value(&r),
                text,
            })
        }
        Command::Interchange { y_lo, y_hi, a, nodes } => {
            let problem =
                WeightedInterchangeProblem::new(|_| 1.0, ParametricIntegrand::sin_xy(), *y_lo, *y_hi, *a, *nodes);
            let policy = policy_args.resolve(LimitPolicy::default(), None)?;
            let r = interchange_check(&problem, &policy)?;
            let text = vec![
                format!("integral over y first  {}", opt(r.lhs)),
                format!("integral over x first  {}", opt(r.rhs)),
                format!("difference {} (tol {:.0e}): {}", opt(r.difference), r.tol, pass_fail(r.passed)),
            ];
            Ok(Outcome {
                status: pass_fail(r.passed),
                passed: r.passed,
                result: to_value(&r),
                text,
            })
        }
        Command::CovLinear {
            integrand,
            termination,
            r,
            s,
        } => {
            let g = integrand.build()?;
            let zeta = parse_termination(termination)?;
            let t = linear_change_of_variable(&g, &zeta, integrand.a, *r, *s)?;
            let p_orig = policy_args.resolve(LimitPolicy::default(), Some(&g))?;
            let p_new = policy_args.resolve(LimitPolicy::default(), Some(&t.integrand))?;
            let original = evaluate(&g, integrand.a, &zeta, &p_orig)?;
            let transformed = evaluate(&t.integrand, t.lower_bound, &t.termination, &p_new)?;
            let scaled = transformed.value.map(|v| t.factor * v);
            let difference = original.value.zip(scaled).map(|(u, v)| (u - v).abs());
            let tol = p_orig.tol.max(p_new.tol);
            let passed = difference.is_some_and(|d| d <= tol);
            let text = vec![
                format!("original               {}", opt(original.value)),
                format!("s * transformed        {}", opt(scaled)),
                format!("difference {} (tol {:.0e}): {}", opt(difference), tol, pass_fail(passed)),
            ];
            Ok(Outcome {
                status: pass_fail(passed),
                passed,
                result: json!({
                    "r": r,
                    "s": s,
                    "original": original.value,
                    "original_status": original.status(),
                    "transformed": transformed.value,
                    "transformed_status": transformed.status(),
                    "transformed_lower_bound": t.lower_bound,
                    "transformed_termination": t.termination,
                    "factor": t.factor,
                    "difference": difference,
                    "tol": tol,
                    "passed": passed,
                }),
                text,
            })
        }
        Command::CovCounterexample { alpha } => {
            let policy = policy_args.resolve(LimitPolicy::default(), None)?;
            let r = substitution_counterexample(*alpha, &policy)?;
            let text = vec![
                format!("base value          {:.12}", r.base),
                format!("substituted value   {:.12}", r.substituted),
                format!("direct (warped)     {:.12}", r.direct_warped),
                format!(
                    "difference {:.12} vs 2*alpha {:.12}: {}",
                    r.difference,
                    r.stated_difference,
                    pass_fail(r.passed)
                ),
            ];
            Ok(Outcome {
                status: pass_fail(r.passed),
                passed: r.passed,
                result: to_value(&r),
                text,
            })
        }
        Command::Eval2d {
            integrand,
            constant,
            kernel,
            families,
            radial_panel,
        } => {
            let g = parse_integrand2d(integrand, *constant)?;
            let k = parse_kernel(kernel)?;
            let fams = families.iter().map(|f| parse_family(f)).collect::<Result<Vec<_>, _>>()?;
            let policy = policy_args.resolve(plane2d::default_policy(), None)?;
            let mut cfg = QuadConfig2D::default().matched_to(policy.tol);
            if let Some(w) = radial_panel {
                if !(*w > 0.0 && w.is_finite()) {
                    return Err(CliError::Usage(format!("--radial-panel must be positive, got {w}")));
                }
                cfg.radial_panel = *w;
            }
            let r = evaluate2d(&g, &k, &fams, &policy, &cfg)?;
            let status = match &r.status {
                plane2d::Status2D::Agreed => "agreed".to_string(),
                plane2d::Status2D::FamilyNotConverged { status, .. } => status.as_str().to_string(),
                plane2d::Status2D::FamiliesDisagree { .. } => "families_disagree".to_string(),
            };
            let mut text: Vec<String> = r
                .per_family
                .iter()
                .map(|(f, rep)| format!("{f:<24} {:<12} {}", rep.status.as_str(), opt(rep.limit)))
                .collect();
            text.push(format!("status {status}, value {}", opt(r.value)));
            Ok(Outcome {
                status,
                passed: r.agreed(),
                result: to_value(&r),
                text,
            })
        }
        Command::Demo => demo(),
    }
}

fn parametric(example: ParametricExample) -> ParametricIntegrand {
    match example {
        ParametricExample::SinXy => ParametricIntegrand::sin_xy(),
        ParametricExample::CosXyOverX => ParametricIntegrand::cos_xy_over_x(),
    }
}

/// A box, or a few signed atoms with total weight −1.
fn random_termination(rng: &mut ChaCha8Rng) -> Result<TerminationDerivative, CliError> {
    if rng.random_bool(0.5) {
        return Ok(TerminationDerivative::make_box(rng.random_range(0.2..4.0))?);
    }
    let n = rng.random_range(1..5);
    let mut entries: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.random_range(0.0..3.0), rng.random_range(-1.5..0.5)))
        .collect();
    let total: f64 = entries.iter().map(|e| e.1).sum();
    entries[0].1 -= total + 1.0;
    Ok(TerminationDerivative::make_atoms_with_support(&entries, 3.0)?)
}

#[derive(Debug, Serialize)]
struct DemoRow {
    example: u32,
    description: String,
    expected: f64,
    computed: Option<f64>,
    difference: Option<f64>,
    tol: f64,
    passed: bool,
    detail: Value,
}

impl DemoRow {
    fn new(example: u32, description: &str, expected: f64, computed: Option<f64>, tol: f64, detail: Value) -> Self {
        let difference = computed.map(|c| (c - expected).abs());
        Self {
            example,
            description: description.to_string(),
            expected,
            computed,
            difference,
            tol,
            passed: difference.is_some_and(|d| d <= tol),
            detail,
        }
    }
}

fn demo() -> Result<Outcome, CliError> {
    let policy = LimitPolicy::default();
    let value = |name: &str, params: &[(&str, f64)], zd: TerminationDerivative| -> Result<Option<f64>, CliError> {
        let g = catalog(name, params)?;
        Ok(evaluate(&g, 0.0, &zd, &policy.scaled_for(&g))?.value)
    };
    let mut rows = vec![
        DemoRow::new(
            1,
            "sin(x) from 0 under pair(pi)",
            1.0,
            value("sin_ax", &[("alpha", 1.0)], TerminationDerivative::pair(PI)?)?,
            1e-8,
            Value::Null,
        ),
        DemoRow::new(
            2,
            "x cos(x) from 0 under triple(pi)",
            -1.0,
            value("x_cos_ax", &[("alpha", 1.0)], TerminationDerivative::triple(PI)?)?,
            1e-8,
            Value::Null,
        ),
        DemoRow::new(
            3,
            "exp(-x/2) sin(x) from 0 under exppair(pi,-0.5)",
            0.8,
            value(
                "exp_sin",
                &[("alpha", 1.0), ("beta", -0.5)],
                TerminationDerivative::make_exp_pair(PI, -0.5)?,
            )?,
            1e-8,
            Value::Null,
        ),
    ];
    let (a, y, h): (f64, f64, f64) = (1.0, 1.0, 1e-4);
    for (example, p, exact, description) in [
        (
            4,
            ParametricIntegrand::cos_xy_over_x(),
            -(a * y).cos() / y,
            "d/dy of cos(xy)/x from 1 at y = 1",
        ),
        (
            5,
            ParametricIntegrand::sin_xy(),
            -a * (a * y).sin() / y - (a * y).cos() / (y * y),
            "d/dy of sin(xy) from 1 at y = 1",
        ),
    ] {
        let r = leibniz_check(&p, a, y, h, &policy)?;
        let mut row = DemoRow::new(example, description, exact, Some(r.lhs), r.tol, to_value(&r));
        row.passed &= r.passed;
        rows.push(row);
    }
    let alpha = 0.25;
    let c = substitution_counterexample(alpha, &policy)?;
    rows.push(DemoRow {
        example: 6,
        description: format!(
            "square wave, x = u + {alpha} sin(pi u): base {:.4} vs substituted {:.4}; difference should be 2*alpha",
            c.base, c.substituted
        ),
        expected: c.stated_difference,
        computed: Some(c.difference),
        difference: Some((c.difference - c.stated_difference).abs()),
        tol: c.tol,
        passed: c.passed,
        detail: to_value(&c),
    });

    let passed = rows.iter().all(|r| r.passed);
    let text = rows
        .iter()
        .map(|r| {
            format!(
                "Example {}  {:<4}  expected {:>15.12}  computed {:>15}  {}",
                r.example,
                if r.passed { "PASS" } else { "FAIL" },
                r.expected,
                r.computed.map_or("none".to_string(), |v| format!("{v:.12}")),
                r.description
            )
        })
        .collect();
    Ok(Outcome {
        status: pass_fail(passed),
        passed,
        result: json!({ "rows": to_value(&rows) }),
        text,
    })
}
