//! Symmetrized-KL upper bound for Gaussian noise: the per-input covariance
//! form, the two-point covariance maximizer behind it, and the worst-case
//! closed form on [0, u].

use std::collections::BTreeMap;

use crate::bounds::{BoundKind, BoundReport, HypothesisResult};
use crate::channel::{ChannelSpec, Constraint, Endpoint, InputDist, NoiseModel};
use crate::error::{Error, Result};
use crate::quad::QuadratureConfig;

/// The covariance-maximizing two-point distribution of the covariance lemma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointSolution {
    pub x1: f64,
    pub x2: f64,
    /// Pr{X = x1}.
    pub p: f64,
    /// Covariance achieved by this two-point law.
    pub value: f64,
}

/// Per-input symmetrized-KL bound for Gaussian noise:
/// `-1/2 Cov(X^2 + sigma^2(X), 1/sigma^2(X)) + Cov(X, X/sigma^2(X))`.
pub fn symkl_bound_at(spec: &ChannelSpec, input: &InputDist, cfg: &QuadratureConfig) -> Result<f64> {
    if !matches!(spec.noise(), NoiseModel::StandardGaussian) {
        return Err(Error::Domain(
            "the symmetrized-KL bound requires standard Gaussian noise".into(),
        ));
    }
    let sig2 = |x: f64| -> f64 {
        let s = spec.sigma().value(x).unwrap_or(f64::NAN);
        s * s
    };
    let a = |x: f64| x * x + sig2(x);
    let b = |x: f64| 1.0 / sig2(x);
    let d = |x: f64| x / sig2(x);

    let e_a = input.expect(a, cfg)?;
    let e_b = input.expect(b, cfg)?;
    let e_ab = input.expect(|x| a(x) * b(x), cfg)?;
    let e_c = input.expect(|x| x, cfg)?;
    let e_d = input.expect(d, cfg)?;
    let e_cd = input.expect(|x| x * d(x), cfg)?;

    for v in [e_a, e_b, e_ab, e_c, e_d, e_cd] {
        if !v.is_finite() {
            return Err(Error::NonFinite("covariance moment diverged".into()));
        }
    }
    Ok(-0.5 * (e_ab - e_a * e_b) + (e_cd - e_c * e_d))
}

fn check_increasing<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize, name: &str) -> Result<()> {
    let mut prev = f(lo);
    let scale = prev.abs().max(1.0);
    for i in 1..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        let v = f(x);
        if v < prev - 1e-9 * scale.max(v.abs()) {
            return Err(Error::NotIncreasing(format!("{name} decreases near x = {x}")));
        }
        prev = v;
    }
    Ok(())
}

fn check_convex<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize, name: &str) -> Result<()> {
    let h = (hi - lo) / n as f64;
    for i in 1..n {
        let x = lo + h * i as f64;
        let second = f(x - h) - 2.0 * f(x) + f(x + h);
        let scale = f(x).abs().max(1.0);
        if second < -1e-7 * scale {
            return Err(Error::NotConvex(format!("{name} is concave near x = {x}")));
        }
    }
    Ok(())
}

/// Maximize Cov(w(X), v(X)) over laws on [lo, hi] with an optional mean cap
/// E[X] <= alpha, for w, v increasing and v convex (checked by sampling).
///
/// Returns the lemma's two-point maximizer: mass at the interval endpoints
/// with p = 1/2 when the mean cap is slack (alpha >= midpoint or absent),
/// else p = (u - alpha)/(u - l), where the achieved value is the exact
/// maximum whenever v is linear.
pub fn maximize_covariance<W, V>(
    w: W,
    v: V,
    lo: f64,
    hi: f64,
    mean_cap: Option<f64>,
) -> Result<TwoPointSolution>
where
    W: Fn(f64) -> f64,
    V: Fn(f64) -> f64,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain(format!("need a finite interval, got ({lo}, {hi})")));
    }
    check_increasing(&w, lo, hi, 100, "w")?;
    check_increasing(&v, lo, hi, 100, "v")?;
    check_convex(&v, lo, hi, 100, "v")?;

    let p = match mean_cap {
        Some(alpha) if alpha < 0.5 * (lo + hi) => {
            if alpha <= lo {
                return Err(Error::Domain(format!(
                    "mean cap {alpha} leaves no feasible law on [{lo}, {hi}]"
                )));
            }
            (hi - alpha) / (hi - lo)
        }
        _ => 0.5,
    };
    let value = p * (1.0 - p) * (w(hi) - w(lo)) * (v(hi) - v(lo));
    Ok(TwoPointSolution { x1: lo, x2: hi, p, value })
}

/// Worst-case closed form of the symmetrized-KL bound on [0, u] with an
/// optional mean constraint: `F/8` when the mean cap is slack, else
/// `(1/2)(1 - alpha/u)(alpha/u) F`, with
/// `F = u^2/sigma^2(u) + u^2/sigma^2(0) + sigma^2(0)/sigma^2(u) + sigma^2(u)/sigma^2(0) - 2`.
///
/// The monotonicity/convexity premises are checked by dense sampling; a
/// failed check downgrades the report rather than suppressing the value.
pub fn upper_bound_closed_form(spec: &ChannelSpec, _cfg: &QuadratureConfig) -> Result<BoundReport> {
    if !matches!(spec.noise(), NoiseModel::StandardGaussian) {
        return Err(Error::Domain(
            "the symmetrized-KL bound requires standard Gaussian noise".into(),
        ));
    }
    let (l, u) = spec.effective_support();
    if l != 0.0 || !u.is_finite() {
        return Err(Error::Domain(format!(
            "closed form needs support [0, u] with finite u, got ({l}, {u})"
        )));
    }
    let restricted = spec.sigma().restrict((l, u))?;
    let sigma = |x: f64| restricted.value(x).unwrap_or(f64::NAN);

    let mut hypotheses = Vec::new();
    let probe_lo = l + (u - l) * 1e-9;
    match check_increasing(sigma, probe_lo, u, 1000, "sigma") {
        Ok(()) => hypotheses.push(HypothesisResult::verified("sigma_increasing")),
        Err(e) => hypotheses.push(HypothesisResult::failed("sigma_increasing", e.to_string())),
    }
    match check_increasing(|x| x / (sigma(x) * sigma(x)), probe_lo, u, 1000, "x/sigma^2") {
        Ok(()) => hypotheses.push(HypothesisResult::verified("x_over_sigma_sq_increasing")),
        Err(e) => {
            hypotheses.push(HypothesisResult::failed("x_over_sigma_sq_increasing", e.to_string()))
        }
    }
    // the premise reads "x^2 + sigma(x) convex"; it is ambiguous whether
    // sigma or sigma^2 is meant, so check both and record which held
    let conv_sigma = check_convex(|x| x * x + sigma(x), probe_lo, u, 1000, "x^2+sigma");
    let conv_sigma_sq = check_convex(|x| x * x + sigma(x) * sigma(x), probe_lo, u, 1000, "x^2+sigma^2");
    match (&conv_sigma, &conv_sigma_sq) {
        (Ok(()), Ok(())) => hypotheses.push(HypothesisResult {
            detail: Some("both x^2+sigma and x^2+sigma^2 convex".into()),
            ..HypothesisResult::verified("x_sq_plus_sigma_convex")
        }),
        (Ok(()), Err(_)) => hypotheses.push(HypothesisResult {
            detail: Some("x^2+sigma convex; x^2+sigma^2 not".into()),
            ..HypothesisResult::verified("x_sq_plus_sigma_convex")
        }),
        (Err(_), Ok(())) => hypotheses.push(HypothesisResult {
            detail: Some("x^2+sigma^2 convex; x^2+sigma not".into()),
            ..HypothesisResult::verified("x_sq_plus_sigma_convex")
        }),
        (Err(e), Err(_)) => {
            hypotheses.push(HypothesisResult::failed("x_sq_plus_sigma_convex", e.to_string()))
        }
    }

    let s0 = restricted.endpoint_limit(Endpoint::Lower);
    let su = restricted.endpoint_limit(Endpoint::Upper);
    if s0 > 0.0 {
        hypotheses.push(HypothesisResult::verified("sigma_at_zero_positive"));
    } else {
        hypotheses.push(HypothesisResult {
            detail: Some("sigma(0) = 0; F and the bound are +inf".into()),
            ..HypothesisResult::verified("sigma_at_zero_positive")
        });
    }

    let (s0_sq, su_sq) = (s0 * s0, su * su);
    let f_value = if s0 > 0.0 {
        u * u / su_sq + u * u / s0_sq + s0_sq / su_sq + su_sq / s0_sq - 2.0
    } else {
        f64::INFINITY
    };

    let mean_cap = spec.expectation_constraints().iter().find_map(|c| match c {
        Constraint::Mean(a) => Some(*a),
        _ => None,
    });
    let value = match mean_cap {
        Some(alpha) if alpha < 0.5 * u => 0.5 * (1.0 - alpha / u) * (alpha / u) * f_value,
        _ => 0.125 * f_value,
    };

    let mut params = BTreeMap::new();
    params.insert("u".into(), u);
    params.insert("sigma_0".into(), s0);
    params.insert("sigma_u".into(), su);
    if f_value.is_finite() {
        params.insert("f".into(), f_value);
    }
    if let Some(a) = mean_cap {
        params.insert("alpha".into(), a);
    }
    Ok(BoundReport::new(BoundKind::UpperSymKl, value, params, hypotheses, spec.fingerprint()))
}
