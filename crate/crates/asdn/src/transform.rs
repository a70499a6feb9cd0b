//! The phi and psi transforms behind both lower bounds, and the
//! entropy-change identity h(X) + E[log g(X)] = h(T(X)) used as a self-test.

use crate::channel::{Endpoint, Monotonicity, SigmaProfile};
use crate::error::{Error, Result};
use crate::quad::{self, QuadratureConfig};

/// Which transform: phi(x) = int_c^x dt/sigma(t), or
/// psi(x) = +/- delta log sigma(x) + int_c^x dt/sigma(t) with the sign chosen
/// by the declared monotonicity of sigma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransformKind {
    Phi,
    Psi { delta: f64 },
}

/// A strictly increasing reparametrization of the input interval.
#[derive(Debug, Clone)]
pub struct MonotoneTransform {
    profile: SigmaProfile,
    kind: TransformKind,
    base: f64,
}

/// Default base point: the midpoint of the domain, nudged inward when an
/// endpoint is infinite. The transforms are invariant to this choice up to an
/// additive constant.
pub fn default_base(domain: (f64, f64)) -> f64 {
    let (l, u) = domain;
    match (l.is_finite(), u.is_finite()) {
        (true, true) => 0.5 * (l + u),
        (true, false) => l + 1.0,
        (false, true) => u - 1.0,
        (false, false) => 0.0,
    }
}

impl MonotoneTransform {
    pub fn phi(profile: SigmaProfile, base: f64) -> Result<Self> {
        check_base(&profile, base)?;
        Ok(Self { profile, kind: TransformKind::Phi, base })
    }

    /// The psi transform needs sigma monotone (and continuous) on its domain;
    /// constants follow the increasing convention.
    pub fn psi(profile: SigmaProfile, delta: f64, base: f64) -> Result<Self> {
        check_base(&profile, base)?;
        if !(delta > 0.0) {
            return Err(Error::Domain(format!("psi needs delta > 0, got {delta}")));
        }
        if profile.monotonicity() == Monotonicity::NonMonotone {
            return Err(Error::NonMonotoneSigma);
        }
        Ok(Self { profile, kind: TransformKind::Psi { delta }, base })
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn profile(&self) -> &SigmaProfile {
        &self.profile
    }

    /// int_base^x dt/sigma(t), analytic when the family permits.
    fn phi_part(&self, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        if let Some(anti) = self.profile.inv_sigma_antiderivative(x) {
            let at_base = self
                .profile
                .inv_sigma_antiderivative(self.base)
                .expect("antiderivative available at base when available at x");
            return Ok(anti - at_base);
        }
        let prof = &self.profile;
        quad::integrate(|t| 1.0 / prof.value(t).unwrap_or(f64::NAN), self.base, x, cfg)
            .map(|q| q.value)
    }

    /// Signed log-sigma term of psi; zero for phi.
    fn log_term(&self, sigma_val: f64) -> f64 {
        match self.kind {
            TransformKind::Phi => 0.0,
            TransformKind::Psi { delta } => {
                let sign = match self.profile.monotonicity() {
                    Monotonicity::Decreasing => -1.0,
                    _ => 1.0,
                };
                sign * delta * sigma_val.ln()
            }
        }
    }

    pub fn forward(&self, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        let (l, u) = self.profile.domain();
        if !(x >= l && x <= u) {
            return Err(Error::Domain(format!("x = {x} outside ({l}, {u})")));
        }
        let s = self.profile.value(x)?;
        Ok(self.log_term(s) + self.phi_part(x, cfg)?)
    }

    /// Numerical inverse by bisection on the strictly increasing forward map.
    pub fn inverse(&self, v: f64, cfg: &QuadratureConfig) -> Result<f64> {
        let (l, u) = self.profile.domain();
        // establish a finite bracket
        let mut lo = if l.is_finite() { l } else { self.base - 1.0 };
        let mut hi = if u.is_finite() { u } else { self.base + 1.0 };
        for _ in 0..200 {
            if l.is_infinite() && self.forward(lo, cfg)? > v {
                lo = self.base + 2.0 * (lo - self.base);
            } else {
                break;
            }
        }
        for _ in 0..200 {
            if u.is_infinite() && self.forward(hi, cfg)? < v {
                hi = self.base + 2.0 * (hi - self.base);
            } else {
                break;
            }
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.forward(mid, cfg)? < v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Transform values at the open endpoints, as extended reals.
    pub fn image(&self, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
        let lo = self.endpoint_value(Endpoint::Lower, cfg)?;
        let hi = self.endpoint_value(Endpoint::Upper, cfg)?;
        Ok((lo, hi))
    }

    fn endpoint_value(&self, side: Endpoint, cfg: &QuadratureConfig) -> Result<f64> {
        let (l, u) = self.profile.domain();
        let target = match side {
            Endpoint::Lower => l,
            Endpoint::Upper => u,
        };
        let sigma_lim = self.profile.endpoint_limit(side);

        let phi_lim = match self.profile.inv_sigma_antiderivative(target) {
            // antiderivative limits extend to 0 and +/- infinity through
            // plain f64 arithmetic (ln 0 = -inf, etc.)
            Some(at) => at - self.profile.inv_sigma_antiderivative(self.base).unwrap(),
            None => {
                let prof = &self.profile;
                quad::integrate_allow_divergence(
                    |t| 1.0 / prof.value(t).unwrap_or(f64::NAN),
                    self.base,
                    target,
                    cfg,
                )?
            }
        };

        let log_lim = match self.kind {
            TransformKind::Phi => 0.0,
            TransformKind::Psi { .. } => self.log_term(sigma_lim),
        };
        let v = log_lim + phi_lim;
        if v.is_nan() {
            return Err(Error::NonFinite(format!(
                "transform endpoint value indeterminate at {target}"
            )));
        }
        Ok(v)
    }

    /// Length of the image interval, possibly +inf.
    pub fn image_length(&self, cfg: &QuadratureConfig) -> Result<f64> {
        let (lo, hi) = self.image(cfg)?;
        let len = hi - lo;
        if len.is_nan() {
            return Err(Error::NonFinite("image length indeterminate".into()));
        }
        Ok(len)
    }
}

fn check_base(profile: &SigmaProfile, base: f64) -> Result<()> {
    let (l, u) = profile.domain();
    if !(base > l && base < u) {
        return Err(Error::Domain(format!("base point {base} outside ({l}, {u})")));
    }
    Ok(())
}

/// Which function g the entropy-change identity is applied with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GKind {
    /// g = sigma (the identity's original form).
    Sigma,
    /// g = 1/sigma (the form both lower bounds use).
    InvSigma,
}

/// Evaluate both sides of h(X) + E[log g(X)] = h(T(X)) with
/// T(x) = int_c^x g(t) dt, for g = sigma or 1/sigma. Returns (lhs, rhs).
///
/// The right side is computed through the change-of-variables density
/// f_V(v) = f_X(T^{-1}(v)) / g(T^{-1}(v)), so the two sides exercise
/// independent code paths.
pub fn entropy_transform_check<F>(
    profile: &SigmaProfile,
    pdf: F,
    support: (f64, f64),
    base: f64,
    g_kind: GKind,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64 + Copy,
{
    check_base(profile, base)?;
    let (a, b) = support;
    let g = |x: f64| -> f64 {
        let s = profile.value(x).unwrap_or(f64::NAN);
        match g_kind {
            GKind::Sigma => s,
            GKind::InvSigma => 1.0 / s,
        }
    };
    let t_fwd = |x: f64| -> Result<f64> {
        let anti = |p: f64| match g_kind {
            GKind::Sigma => profile.sigma_antiderivative(p),
            GKind::InvSigma => profile.inv_sigma_antiderivative(p),
        };
        match (anti(x), anti(base)) {
            (Some(ax), Some(ab)) => Ok(ax - ab),
            _ => quad::integrate(g, base, x, cfg).map(|q| q.value),
        }
    };

    let hx = quad::differential_entropy(pdf, support, cfg)?;
    let e_log_g = quad::integrate(|x| pdf(x) * g(x).ln(), a, b, cfg)?.value;
    let lhs = hx + e_log_g;

    let (va, vb) = (t_fwd(a)?, t_fwd(b)?);
    // numerical inverse of T on [a, b]
    let t_inv = |v: f64| -> f64 {
        let (mut lo, mut hi) = (a, b);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if t_fwd(mid).unwrap_or(f64::NAN) < v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let v_pdf = move |v: f64| -> f64 {
        if v <= va || v >= vb {
            return 0.0;
        }
        let x = t_inv(v);
        let gx = g(x);
        if gx > 0.0 {
            pdf(x) / gx
        } else {
            0.0
        }
    };
    let rhs = quad::differential_entropy(v_pdf, (va, vb), cfg)?;
    Ok((lhs, rhs))
}
