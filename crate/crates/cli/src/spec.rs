//! Parsers for the small textual languages accepted on the command line.
//!
//! Terminations: `step`, `pair:<s>`, `triple:<s>`, `box:<w>`,
//! `exppair:<s>,<beta>`, `comb:<s>,<order>`, `combine(<spec>,<spec>)`, or an
//! inline JSON object. Numbers may be written as `pi`, `2pi`, `pi/3` or
//! `2*pi/3` as well as plain decimals.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use termint::integrand::{catalog_get, Integrand};
use termint::plane2d::{combine2d, CurveFamily, Integrand2D, Kernel2D};
use termint::TerminationDerivative;

use crate::CliError;

fn spec_err(token: &str, reason: impl Into<String>) -> CliError {
    CliError::Spec {
        token: token.to_string(),
        reason: reason.into(),
    }
}

/// A decimal, or a multiple / fraction of `pi`.
pub fn parse_number(text: &str) -> Result<f64, CliError> {
    let t = text.trim();
    if let Ok(v) = t.parse::<f64>() {
        return if v.is_finite() { Ok(v) } else { Err(spec_err(text, "number must be finite")) };
    }
    let bad = || spec_err(text, "expected a number such as 1.5, pi, 2pi or pi/4");
    let (head, divisor) = match t.split_once('/') {
        Some((h, d)) => (h.trim(), d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t, 1.0),
    };
    let coef = match head.strip_suffix("pi") {
        Some("") => 1.0,
        Some("-") => -1.0,
        Some(c) => c.trim_end_matches('*').trim().parse::<f64>().map_err(|_| bad())?,
        None => return Err(bad()),
    };
    let v = coef * PI / divisor;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn numbers(token: &str, body: &str, count: usize) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = body.split(',').collect();
    if parts.len() != count {
        return Err(spec_err(token, format!("expected {count} comma-separated numbers")));
    }
    parts.into_iter().map(parse_number).collect()
}

/// For `name(a,b)`, every way of splitting the arguments at a top-level
/// comma. Constructor arguments contain commas too, so callers try each.
fn call_splits<'a>(token: &'a str, name: &str) -> Option<Vec<(&'a str, &'a str)>> {
    let inner = token.strip_prefix(name)?.trim_start().strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0i32;
    let mut out = Vec::new();
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' | '{' | '[' => depth += 1,
            ')' | '}' | ']' => depth -= 1,
            ',' if depth == 0 => out.push((inner[..i].trim(), inner[i + 1..].trim())),
            _ => {}
        }
    }
    Some(out)
}

fn parse_call<T>(
    token: &str,
    splits: Vec<(&str, &str)>,
    parse: impl Fn(&str) -> Result<T, CliError>,
    join: impl Fn(&T, &T) -> termint::Result<T>,
) -> Result<T, CliError> {
    let mut last = spec_err(token, "combine(...) takes two arguments");
    for (a, b) in splits {
        match (parse(a), parse(b)) {
            (Ok(a), Ok(b)) => return join(&a, &b).map_err(|e| spec_err(token, e.to_string())),
            (Err(e), _) | (_, Err(e)) => last = e,
        }
    }
    Err(last)
}

pub fn parse_termination(spec: &str) -> Result<TerminationDerivative, CliError> {
    let token = spec.trim();
    if token.starts_with('{') {
        return TerminationDerivative::from_json(token).map_err(|e| spec_err(token, e.to_string()));
    }
    if let Some(splits) = call_splits(token, "combine") {
        return parse_call(token, splits, parse_termination, |a, b| a.combine(b));
    }
    let (name, body) = token.split_once(':').unwrap_or((token, ""));
    let built = match name {
        "step" if body.is_empty() => Ok(TerminationDerivative::step()),
        "pair" => TerminationDerivative::pair(numbers(token, body, 1)?[0]),
        "triple" => TerminationDerivative::triple(numbers(token, body, 1)?[0]),
        "box" => TerminationDerivative::make_box(numbers(token, body, 1)?[0]),
        "exppair" => {
            let v = numbers(token, body, 2)?;
            TerminationDerivative::make_exp_pair(v[0], v[1])
        }
        "comb" => {
            let v = numbers(token, body, 2)?;
            if v[1] < 1.0 || v[1].fract() != 0.0 {
                return Err(spec_err(token, "comb order must be a positive integer"));
            }
            TerminationDerivative::binomial_comb(v[0], v[1] as usize)
        }
        _ => return Err(spec_err(token, "unknown termination (step, pair:, triple:, box:, exppair:, comb:, combine(,), or JSON)")),
    };
    built.map_err(|e| spec_err(token, e.to_string()))
}

/// `name` or `name:key=value,key=value`.
pub fn parse_integrand(spec: &str) -> Result<Integrand, CliError> {
    let token = spec.trim();
    let (name, body) = token.split_once(':').unwrap_or((token, ""));
    let mut params = BTreeMap::new();
    for pair in body.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| spec_err(token, format!("parameter `{pair}` is not key=value")))?;
        params.insert(k.trim().to_string(), parse_number(v)?);
    }
    catalog_get(name, &params).map_err(|e| spec_err(token, e.to_string()))
}

/// `point`, `pair:<x>,<y>`, `disk:<radius>`, `combine(<k>,<k>)` or JSON.
pub fn parse_kernel(spec: &str) -> Result<Kernel2D, CliError> {
    let token = spec.trim();
    if token.starts_with('{') {
        return Kernel2D::from_json(token).map_err(|e| spec_err(token, e.to_string()));
    }
    if let Some(splits) = call_splits(token, "combine") {
        return parse_call(token, splits, parse_kernel, combine2d);
    }
    let (name, body) = token.split_once(':').unwrap_or((token, ""));
    let built = match name {
        "point" if body.is_empty() => Ok(Kernel2D::point()),
        "pair" => {
            let v = numbers(token, body, 2)?;
            Kernel2D::pair([v[0], v[1]])
        }
        "disk" => Kernel2D::uniform_disk(numbers(token, body, 1)?[0]),
        _ => return Err(spec_err(token, "unknown kernel (point, pair:x,y, disk:r, combine(,), or JSON)")),
    };
    built.map_err(|e| spec_err(token, e.to_string()))
}

/// `circle`, `square`, `offset_circle:<x>,<y>` or JSON.
pub fn parse_family(spec: &str) -> Result<CurveFamily, CliError> {
    let token = spec.trim();
    let fam = if token.starts_with('{') {
        serde_json::from_str(token).map_err(|e| spec_err(token, e.to_string()))?
    } else {
        let (name, body) = token.split_once(':').unwrap_or((token, ""));
        match name {
            "circle" if body.is_empty() => CurveFamily::circle(),
            "square" if body.is_empty() => CurveFamily::square(),
            "offset_circle" => {
                let v = numbers(token, body, 2)?;
                CurveFamily::offset_circle([v[0], v[1]])
            }
            _ => return Err(spec_err(token, "unknown family (circle, square, offset_circle:x,y, or JSON)")),
        }
    };
    fam.check().map_err(|e| spec_err(token, e.to_string()))?;
    Ok(fam)
}

pub fn parse_integrand2d(name: &str, constant: f64) -> Result<Integrand2D, CliError> {
    match name {
        "gaussian" => Ok(Integrand2D::gaussian()),
        "sin_r2" => Ok(Integrand2D::sin_r2()),
        "constant" => Ok(Integrand2D::constant(constant)),
        _ => Err(spec_err(name, "unknown plane integrand (gaussian, sin_r2, constant)")),
    }
}
