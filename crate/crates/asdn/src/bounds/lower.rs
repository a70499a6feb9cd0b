//! Lower bounds: the majorization bound log|phi(X)| - h(Z) with its
//! closed-form constrained cases, and the tail-conditioned psi bound
//! alpha h(psi(X)) - beta with the threshold delta optimized.

use std::collections::BTreeMap;

use crate::bounds::{BoundKind, BoundReport, HypothesisResult};
use crate::channel::{ChannelSpec, Constraint, Endpoint, Monotonicity, SigmaFamily, SigmaProfile};
use crate::error::{Error, Result};
use crate::quad::{self, QuadratureConfig, TailSide};
use crate::transform::{self, MonotoneTransform};

/// Search interval for the psi threshold delta: beyond 10 the Gaussian tail
/// probability vanishes, below 1e-3 the bound degenerates.
pub const DELTA_SEARCH_RANGE: (f64, f64) = (1e-3, 10.0);

/// The integral over x of f_{Y|X}(y|x) at a fixed y.
pub fn majorization_integral(spec: &ChannelSpec, y: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let (l, u) = spec.effective_support();
    let q = quad::integrate(|x| spec.conditional_density(x, y).unwrap_or(0.0), l, u, cfg)?;
    Ok(q.value)
}

/// Check the condition `int f_{Y|X}(y|x) dx <= 1 for all y` on a y-grid
/// covering the output range. Verified means grid-verified: the maximum over
/// the grid stayed below 1 + 1e-6.
pub fn verify_majorization_condition(
    spec: &ChannelSpec,
    y_grid_size: usize,
    cfg: &QuadratureConfig,
) -> HypothesisResult {
    let name = "majorization_integral_le_1";
    let (l, u) = spec.effective_support();
    let lo = if l.is_finite() { l } else { -100.0 };
    let hi = if u.is_finite() { u } else { 100.0 };
    let sigma_max = match spec.sigma().restrict((l.max(lo), u.min(hi))) {
        Ok(p) => p.max_on(lo, hi, 1024).min(1e6),
        Err(_) => 1.0,
    };
    let (y_lo, y_hi) = (lo - 10.0 * sigma_max, hi + 10.0 * sigma_max);

    let mut worst_y = f64::NAN;
    let mut worst = f64::NEG_INFINITY;
    for j in 0..y_grid_size {
        let y = y_lo + (y_hi - y_lo) * j as f64 / (y_grid_size - 1) as f64;
        match majorization_integral(spec, y, cfg) {
            Ok(v) => {
                if v > worst {
                    worst = v;
                    worst_y = y;
                }
            }
            Err(e) => {
                return HypothesisResult::assumed(
                    name,
                    format!("quadrature failed at y = {y}: {e}"),
                );
            }
        }
    }
    if worst <= 1.0 + 1e-6 {
        HypothesisResult {
            detail: Some(format!("max integral {worst:.9} at y = {worst_y:.6}")),
            ..HypothesisResult::verified(name)
        }
    } else {
        HypothesisResult::failed(name, format!("integral {worst:.9} > 1 at y = {worst_y:.6}"))
    }
}

fn restricted_profile(spec: &ChannelSpec) -> Result<SigmaProfile> {
    spec.sigma().restrict(spec.effective_support())
}

/// phi(x) must be finite at interior points for 1/sigma to be Riemann
/// integrable in the sense both bounds need.
fn check_inv_sigma_integrable(phi: &MonotoneTransform, cfg: &QuadratureConfig) -> HypothesisResult {
    let name = "inv_sigma_riemann_integrable";
    let (l, u) = phi.profile().domain();
    let lo = if l.is_finite() { l } else { -1e3 };
    let hi = if u.is_finite() { u } else { 1e3 };
    for i in 1..8 {
        let x = lo + (hi - lo) * i as f64 / 8.0;
        match phi.forward(x, cfg) {
            Ok(v) if v.is_finite() => {}
            Ok(v) => {
                return HypothesisResult::failed(name, format!("phi({x}) = {v}"));
            }
            Err(e) => {
                return HypothesisResult::assumed(name, format!("phi({x}) failed: {e}"));
            }
        }
    }
    HypothesisResult::verified(name)
}

fn support_only_hypothesis(spec: &ChannelSpec) -> Option<HypothesisResult> {
    let extra = spec.expectation_constraints();
    if extra.is_empty() {
        None
    } else {
        Some(HypothesisResult::assumed(
            "support_only_constraints",
            format!("{} expectation constraint(s) ignored by this bound", extra.len()),
        ))
    }
}

/// Lower bound 1 for support-only constraints:
/// `log(int 1/sigma) - h(Z)`, the uniform-in-phi(X) choice. The value is
/// `+inf` when the phi image has infinite length.
pub fn lower_bound_maj(spec: &ChannelSpec, cfg: &QuadratureConfig) -> Result<BoundReport> {
    let support = spec.effective_support();
    let restricted = restricted_profile(spec)?;
    let phi = MonotoneTransform::phi(restricted, transform::default_base(support))?;

    let mut hypotheses = vec![verify_majorization_condition(spec, 512, cfg)];
    hypotheses.push(check_inv_sigma_integrable(&phi, cfg));
    hypotheses.extend(support_only_hypothesis(spec));

    let image_length = phi.image_length(cfg)?;
    let h_z = spec.noise().entropy(cfg)?;
    let value = if image_length.is_infinite() {
        f64::INFINITY
    } else {
        image_length.ln() - h_z
    };

    let mut params = BTreeMap::new();
    params.insert("h_z".into(), h_z);
    if image_length.is_finite() {
        params.insert("phi_image_length".into(), image_length);
    }
    Ok(BoundReport::new(BoundKind::LowerMaj, value, params, hypotheses, spec.fingerprint()))
}

/// Lower bound 1 under the closed-form constrained cases:
/// power-limited AWGN on the real line, and mean-limited nonnegative AWGN.
/// Any other single expectation constraint falls back to the unconstrained
/// value with an `Assumed` flag; several constraints at once are unsupported.
pub fn lower_bound_maj_constrained(spec: &ChannelSpec, cfg: &QuadratureConfig) -> Result<BoundReport> {
    let extra = spec.expectation_constraints();
    if extra.is_empty() {
        return lower_bound_maj(spec, cfg);
    }
    if extra.len() > 1 {
        return Err(Error::UnsupportedConstraintCombination(format!(
            "{} expectation constraints; closed forms cover a single one",
            extra.len()
        )));
    }

    let support = spec.effective_support();
    let sigma0 = match spec.sigma().family() {
        SigmaFamily::Constant { c } if *c > 0.0 => Some(*c),
        SigmaFamily::SqrtAffine { c0_sq, c1_sq } if *c1_sq == 0.0 && *c0_sq > 0.0 => {
            Some(c0_sq.sqrt())
        }
        _ => None,
    };

    match (extra[0], sigma0) {
        (Constraint::Power(p), Some(s0))
            if support == (f64::NEG_INFINITY, f64::INFINITY) =>
        {
            // Gaussian maximizer: (1/2) log(P / sigma0^2)
            let value = 0.5 * (p / (s0 * s0)).ln();
            let mut params = BTreeMap::new();
            params.insert("power".into(), p);
            params.insert("sigma0".into(), s0);
            let hyp = vec![
                HypothesisResult::verified("majorization_integral_le_1"),
                HypothesisResult::verified("constant_sigma_closed_form"),
            ];
            Ok(BoundReport::new(BoundKind::LowerMaj, value, params, hyp, spec.fingerprint()))
        }
        (Constraint::Mean(a), Some(s0)) if support.0 == 0.0 && support.1 == f64::INFINITY => {
            if a <= 0.0 {
                return Err(Error::Domain(format!("mean bound must be positive, got {a}")));
            }
            // exponential maximizer: (1/2) log(alpha^2 e / (2 pi sigma0^2))
            let value = 0.5
                * (a * a * std::f64::consts::E / (2.0 * std::f64::consts::PI * s0 * s0)).ln();
            let mut params = BTreeMap::new();
            params.insert("mean".into(), a);
            params.insert("sigma0".into(), s0);
            let hyp = vec![
                HypothesisResult::verified("majorization_integral_le_1"),
                HypothesisResult::verified("constant_sigma_closed_form"),
            ];
            Ok(BoundReport::new(BoundKind::LowerMaj, value, params, hyp, spec.fingerprint()))
        }
        _ => {
            let mut report = lower_bound_maj(spec, cfg)?;
            report.hypotheses.push(HypothesisResult::assumed(
                "constrained_max_entropy",
                "no closed form for this constraint set; unconstrained value reported",
            ));
            Ok(report)
        }
    }
}

struct PsiPieces {
    side: TailSide,
    log_ratio_abs: f64,
    inv_sigma_integral: f64,
}

fn psi_pieces(spec: &ChannelSpec, cfg: &QuadratureConfig) -> Result<(SigmaProfile, PsiPieces)> {
    let support = spec.effective_support();
    let restricted = restricted_profile(spec)?;
    let side = match restricted.monotonicity() {
        Monotonicity::Increasing => TailSide::Ge,
        Monotonicity::Decreasing => TailSide::Le,
        Monotonicity::NonMonotone => return Err(Error::NonMonotoneSigma),
    };
    let s_lo = restricted.endpoint_limit(Endpoint::Lower);
    let s_hi = restricted.endpoint_limit(Endpoint::Upper);
    let log_ratio_abs = if s_lo == s_hi {
        0.0
    } else {
        (s_hi / s_lo).ln().abs()
    };
    let phi = MonotoneTransform::phi(restricted.clone(), transform::default_base(support))?;
    let inv_sigma_integral = phi.image_length(cfg)?;
    Ok((restricted, PsiPieces { side, log_ratio_abs, inv_sigma_integral }))
}

/// Lower bound 2: `alpha log(delta |log sigma(u)/sigma(l)| + int 1/sigma) - beta`
/// with `alpha = Pr{Z >= delta}` (increasing sigma) or `Pr{Z <= -delta}`
/// (decreasing), `beta = alpha h(Z|tail) + H2(alpha)`. When `delta` is `None`
/// the threshold is maximized over [`DELTA_SEARCH_RANGE`].
pub fn lower_bound_psi(
    spec: &ChannelSpec,
    delta: Option<f64>,
    cfg: &QuadratureConfig,
) -> Result<BoundReport> {
    let (restricted, pieces) = psi_pieces(spec, cfg)?;
    let noise = spec.noise();

    let psi_len_infinite = pieces.log_ratio_abs.is_infinite() || pieces.inv_sigma_integral.is_infinite();

    let value_at = |d: f64| -> Result<(f64, f64, f64)> {
        let alpha = quad::tail_prob(noise, d, pieces.side);
        if alpha <= 0.0 {
            return Err(Error::EmptyTail);
        }
        let h_tail = quad::truncated_entropy(noise, d, pieces.side, cfg)?;
        let beta = alpha * h_tail + quad::binary_entropy(alpha)?;
        if psi_len_infinite {
            return Ok((f64::INFINITY, alpha, beta));
        }
        let len = d * pieces.log_ratio_abs + pieces.inv_sigma_integral;
        Ok((alpha * len.ln() - beta, alpha, beta))
    };

    let (d_star, value, alpha, beta) = match delta {
        Some(d) => {
            if !(d > 0.0) {
                return Err(Error::Domain(format!("delta must be positive, got {d}")));
            }
            let (v, a, b) = value_at(d)?;
            (d, v, a, b)
        }
        None => {
            if quad::tail_prob(noise, DELTA_SEARCH_RANGE.0, pieces.side) <= 0.0 {
                return Err(Error::EmptyTail);
            }
            let (d, _) = quad::maximize_scalar(
                |d| value_at(d).map(|(v, _, _)| v).unwrap_or(f64::NEG_INFINITY),
                DELTA_SEARCH_RANGE.0,
                DELTA_SEARCH_RANGE.1,
            );
            let (v, a, b) = value_at(d)?;
            (d, v, a, b)
        }
    };

    let mut hypotheses = vec![
        HypothesisResult::verified("sigma_monotone_continuous"),
        check_inv_sigma_integrable(
            &MonotoneTransform::phi(
                restricted.clone(),
                transform::default_base(restricted.domain()),
            )?,
            cfg,
        ),
    ];
    if psi_len_infinite {
        hypotheses.push(HypothesisResult {
            detail: Some("psi image has infinite length; bound is +inf".into()),
            ..HypothesisResult::verified("psi_image_infinite")
        });
    }
    hypotheses.extend(support_only_hypothesis(spec));

    let mut params = BTreeMap::new();
    params.insert("delta".into(), d_star);
    params.insert("alpha".into(), alpha);
    params.insert("beta".into(), beta);
    if pieces.inv_sigma_integral.is_finite() {
        params.insert("inv_sigma_integral".into(), pieces.inv_sigma_integral);
    }
    if pieces.log_ratio_abs.is_finite() {
        params.insert("abs_log_sigma_ratio".into(), pieces.log_ratio_abs);
    }
    Ok(BoundReport::new(BoundKind::LowerPsi, value, params, hypotheses, spec.fingerprint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{NoiseModel, SigmaFamily, SigmaProfile};
    use approx::assert_abs_diff_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn gauss_spec(family: SigmaFamily, support: (f64, f64), constraints: Vec<Constraint>) -> ChannelSpec {
        let sigma = SigmaProfile::new(family, support, None).unwrap();
        ChannelSpec::new(sigma, NoiseModel::StandardGaussian, support, constraints).unwrap()
    }

    #[test]
    fn majorization_constant_sigma_is_one() {
        // AWGN on the whole line: the integral is exactly 1 for every y
        let spec = gauss_spec(
            SigmaFamily::Constant { c: 1.0 },
            (f64::NEG_INFINITY, f64::INFINITY),
            vec![],
        );
        let v = majorization_integral(&spec, 0.7, &cfg()).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-7);
        let h = verify_majorization_condition(&spec, 64, &cfg());
        assert!(h.is_verified(), "{h:?}");
    }

    #[test]
    fn majorization_sqrt_profile_negative_y() {
        // sigma = c sqrt(x) on (0, inf): the integral is e^{2y/c^2} for y < 0
        let spec = gauss_spec(
            SigmaFamily::SqrtAffine { c0_sq: 0.0, c1_sq: 1.0 },
            (0.0, f64::INFINITY),
            vec![],
        );
        let v = majorization_integral(&spec, -0.5, &cfg()).unwrap();
        assert_abs_diff_eq!(v, (-1.0f64).exp(), epsilon = 1e-5);
    }

    #[test]
    fn majorization_short_domain_small_integral() {
        let spec = gauss_spec(SigmaFamily::Constant { c: 10.0 }, (0.0, 0.1), vec![]);
        let v = majorization_integral(&spec, 0.05, &cfg()).unwrap();
        assert_abs_diff_eq!(v, 0.004, epsilon = 2e-4);
        assert!(verify_majorization_condition(&spec, 128, &cfg()).is_verified());
    }

    #[test]
    fn maj_bound_fig3_value() {
        let spec = gauss_spec(SigmaFamily::SqrtAffine { c0_sq: 1.0, c1_sq: 1.0 }, (0.0, 5.0), vec![]);
        let r = lower_bound_maj(&spec, &cfg()).unwrap();
        let expect = (2.0 * 6.0f64.sqrt() - 2.0).ln()
            - 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln();
        assert_abs_diff_eq!(r.value(), expect, epsilon = 1e-9);
        assert_abs_diff_eq!(r.value(), -0.354_579_759_673, epsilon = 1e-9);
        assert!(r.is_valid_bound());
    }

    #[test]
    fn maj_bound_constant_sigma() {
        let spec = gauss_spec(SigmaFamily::Constant { c: 0.5 }, (0.0, 4.0), vec![]);
        let r = lower_bound_maj(&spec, &cfg()).unwrap();
        let expect = (4.0f64 / 0.5).ln() - 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln();
        assert_abs_diff_eq!(r.value(), expect, epsilon = 1e-9);
    }

    #[test]
    fn maj_bound_infinite_for_vanishing_sigma() {
        let spec = gauss_spec(SigmaFamily::PowerLaw { alpha: 1.0 }, (0.0, 1.0), vec![]);
        let r = lower_bound_maj(&spec, &cfg()).unwrap();
        assert_eq!(r.value(), f64::INFINITY);
    }

    #[test]
    fn constrained_closed_forms() {
        // power-limited AWGN
        let spec = gauss_spec(
            SigmaFamily::Constant { c: 1.0 },
            (f64::NEG_INFINITY, f64::INFINITY),
            vec![Constraint::Power(100.0)],
        );
        let r = lower_bound_maj_constrained(&spec, &cfg()).unwrap();
        assert_abs_diff_eq!(r.value(), 0.5 * 100.0f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.value(), 2.302_585, epsilon = 1e-6);

        // mean-limited nonnegative input: (1/2) log(alpha^2 e / (2 pi sigma0^2))
        let spec = gauss_spec(
            SigmaFamily::Constant { c: 1.0 },
            (0.0, f64::INFINITY),
            vec![Constraint::Mean(1.0)],
        );
        let r = lower_bound_maj_constrained(&spec, &cfg()).unwrap();
        let expect = 0.5 * (std::f64::consts::E / (2.0 * std::f64::consts::PI)).ln();
        assert_abs_diff_eq!(r.value(), expect, epsilon = 1e-12);

        // SNR = 1 gives a zero bound
        let spec = gauss_spec(
            SigmaFamily::Constant { c: 2.0 },
            (f64::NEG_INFINITY, f64::INFINITY),
            vec![Constraint::Power(4.0)],
        );
        let r = lower_bound_maj_constrained(&spec, &cfg()).unwrap();
        assert_abs_diff_eq!(r.value(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn constrained_fallback_keeps_assumed_flag() {
        let spec = gauss_spec(
            SigmaFamily::SqrtAffine { c0_sq: 1.0, c1_sq: 1.0 },
            (0.0, 5.0),
            vec![Constraint::Mean(2.5)],
        );
        let r = lower_bound_maj_constrained(&spec, &cfg()).unwrap();
        assert!(r.hypothesis("constrained_max_entropy").is_some());
        assert!(r.is_valid_bound());
    }

    #[test]
    fn psi_bound_dominated_by_maj_for_constant_sigma() {
        let spec = gauss_spec(SigmaFamily::Constant { c: 1.0 }, (0.0, 5.0), vec![]);
        let maj = lower_bound_maj(&spec, &cfg()).unwrap();
        let psi = lower_bound_psi(&spec, None, &cfg()).unwrap();
        // |log ratio| = 0, so the psi bound is alpha log(u - l) - beta
        assert!(psi.value() <= maj.value() + 1e-9, "psi {} maj {}", psi.value(), maj.value());
        let alpha = psi.params["alpha"];
        let beta = psi.params["beta"];
        assert_abs_diff_eq!(psi.value(), alpha * 5.0f64.ln() - beta, epsilon = 1e-9);
    }

    #[test]
    fn psi_fixed_delta_never_beats_optimized() {
        let spec = gauss_spec(SigmaFamily::SqrtAffine { c0_sq: 1.0, c1_sq: 1.0 }, (0.0, 5.0), vec![]);
        let best = lower_bound_psi(&spec, None, &cfg()).unwrap();
        for d in [0.01, 0.1, 0.3, 0.7, 1.0, 1.5, 2.0, 3.0, 5.0] {
            let fixed = lower_bound_psi(&spec, Some(d), &cfg()).unwrap();
            assert!(fixed.value() <= best.value() + 1e-9, "delta {d}");
        }
    }

    #[test]
    fn psi_matches_closed_form_at_fixed_delta() {
        // directly evaluate alpha log(delta |log ratio| + J) - beta
        let spec = gauss_spec(SigmaFamily::SqrtAffine { c0_sq: 1.0, c1_sq: 1.0 }, (0.0, 5.0), vec![]);
        let d = 0.8;
        let r = lower_bound_psi(&spec, Some(d), &cfg()).unwrap();
        let alpha = quad::tail_prob(spec.noise(), d, TailSide::Ge);
        let h_tail = quad::truncated_entropy(spec.noise(), d, TailSide::Ge, &cfg()).unwrap();
        let beta = alpha * h_tail + quad::binary_entropy(alpha).unwrap();
        let len = d * (6.0f64.sqrt().ln() - 0.0) + (2.0 * 6.0f64.sqrt() - 2.0);
        assert_abs_diff_eq!(r.value(), alpha * len.ln() - beta, epsilon = 1e-9);
    }

    #[test]
    fn psi_infinite_when_sigma_vanishes_at_endpoint() {
        let spec = gauss_spec(SigmaFamily::PowerLaw { alpha: 1.0 }, (0.0, 1.0), vec![]);
        let r = lower_bound_psi(&spec, None, &cfg()).unwrap();
        assert_eq!(r.value(), f64::INFINITY);
        assert!(r.hypothesis("psi_image_infinite").is_some());
    }

    #[test]
    fn psi_gaussian_alpha_below_half() {
        let spec = gauss_spec(SigmaFamily::SqrtAffine { c0_sq: 1.0, c1_sq: 1.0 }, (0.0, 5.0), vec![]);
        let r = lower_bound_psi(&spec, None, &cfg()).unwrap();
        assert!(r.params["alpha"] < 0.5);
    }

    #[test]
    fn psi_empty_tail_for_one_sided_noise() {
        // noise supported on [-3, -1]: Pr{Z >= delta} = 0 for delta > 0
        let sigma = SigmaProfile::new(SigmaFamily::SqrtAffine { c0_sq: 1.0, c1_sq: 1.0 }, (0.0, 5.0), None)
            .unwrap();
        let noise = NoiseModel::truncated_gaussian(-3.0, -1.0).unwrap();
        let spec = ChannelSpec::new(sigma, noise, (0.0, 5.0), vec![]).unwrap();
        assert!(matches!(lower_bound_psi(&spec, None, &cfg()), Err(Error::EmptyTail)));
    }

    #[test]
    fn psi_rejects_non_monotone() {
        let sigma =
            SigmaProfile::new(SigmaFamily::FadingAffine { c0: 1.0, c1: 1.0 }, (-2.0, 2.0), None).unwrap();
        let spec =
            ChannelSpec::new(sigma, NoiseModel::StandardGaussian, (-2.0, 2.0), vec![]).unwrap();
        assert!(matches!(lower_bound_psi(&spec, None, &cfg()), Err(Error::NonMonotoneSigma)));
    }
}
