//! The noise-scaling function sigma(x) with its domain and monotonicity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;

/// Which endpoint of an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Endpoint {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    NonMonotone,
}

/// Parametric families for sigma(x). `SqrtAffine` stores the squared
/// coefficients of sigma(x) = sqrt(c0^2 + c1^2 x) so sweeps can address
/// `c0_sq` directly; `FadingAffine` is sigma(x) = sqrt(c1 x^2 + c0).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum SigmaFamily {
    Constant { c: f64 },
    SqrtAffine { c0_sq: f64, c1_sq: f64 },
    PowerLaw { alpha: f64 },
    FadingAffine { c0: f64, c1: f64 },
    Tabulated { x: Vec<f64>, sigma: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct SigmaProfile {
    family: SigmaFamily,
    domain: (f64, f64),
    monotonicity: Monotonicity,
    table: Option<MonotoneCubic>,
}

impl SigmaProfile {
    pub fn new(family: SigmaFamily, domain: (f64, f64), declared: Option<Monotonicity>) -> Result<Self> {
        let (l, u) = domain;
        if !(l < u) || l.is_nan() || u.is_nan() {
            return Err(Error::InvalidSpec(format!("sigma domain ({l}, {u}) is empty")));
        }

        let table = match &family {
            SigmaFamily::Tabulated { x, sigma } => {
                let t = MonotoneCubic::new(x, sigma)?;
                if sigma.iter().any(|s| *s < 0.0) {
                    return Err(Error::InvalidSpec("tabulated sigma must be nonnegative".into()));
                }
                Some(t)
            }
            _ => None,
        };

        match &family {
            SigmaFamily::Constant { c } => {
                if !(*c >= 0.0) || !c.is_finite() {
                    return Err(Error::InvalidSpec(format!("constant sigma must be >= 0, got {c}")));
                }
            }
            SigmaFamily::SqrtAffine { c0_sq, c1_sq } => {
                if *c0_sq < 0.0 || *c1_sq < 0.0 {
                    return Err(Error::InvalidSpec("SqrtAffine coefficients must be nonnegative".into()));
                }
                // c0^2 + c1^2 x must stay positive on the open domain
                if l.is_finite() && c0_sq + c1_sq * l < 0.0 {
                    return Err(Error::InvalidSpec(
                        "SqrtAffine argument c0_sq + c1_sq*x is negative at the lower endpoint".into(),
                    ));
                }
                if l.is_infinite() && *c1_sq > 0.0 {
                    return Err(Error::InvalidSpec(
                        "SqrtAffine with c1_sq > 0 needs a finite lower endpoint".into(),
                    ));
                }
            }
            SigmaFamily::PowerLaw { alpha } => {
                if !alpha.is_finite() {
                    return Err(Error::InvalidSpec("PowerLaw exponent must be finite".into()));
                }
                if l < 0.0 {
                    return Err(Error::InvalidSpec("PowerLaw needs a nonnegative domain".into()));
                }
            }
            SigmaFamily::FadingAffine { c0, c1 } => {
                if *c0 < 0.0 || *c1 < 0.0 {
                    return Err(Error::InvalidSpec("FadingAffine coefficients must be nonnegative".into()));
                }
            }
            SigmaFamily::Tabulated { .. } => {}
        }

        let detected = detect_monotonicity(&family, domain, table.as_ref());
        let monotonicity = match declared {
            None => detected,
            Some(m) => {
                if m != detected {
                    return Err(Error::InvalidSpec(format!(
                        "declared monotonicity {m:?} does not match detected {detected:?}"
                    )));
                }
                m
            }
        };

        let profile = Self { family, domain, monotonicity, table };
        profile.validate_positive()?;
        Ok(profile)
    }

    /// sigma(x) = 0 is only allowed as a limit at the endpoints; interior
    /// zeros break the conditional density and are rejected here. The one
    /// exception is the explicitly degenerate noiseless channel sigma == 0.
    fn validate_positive(&self) -> Result<()> {
        if matches!(self.family, SigmaFamily::Constant { c } if c == 0.0) {
            return Ok(());
        }
        for x in self.interior_probes(257) {
            let s = self.value_unchecked(x);
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "sigma({x}) = {s}; sigma must be positive and finite on the interior"
                )));
            }
        }
        Ok(())
    }

    /// Probe points strictly inside the domain, clamped to a finite window
    /// when the domain is unbounded.
    pub(crate) fn interior_probes(&self, n: usize) -> Vec<f64> {
        let (l, u) = self.domain;
        let lo = if l.is_finite() { l } else { u.min(0.0).min(1e6) - 1e6 };
        let hi = if u.is_finite() { u } else { l.max(0.0).max(-1e6) + 1e6 };
        let w = hi - lo;
        (1..=n).map(|i| lo + w * i as f64 / (n as f64 + 1.0)).collect()
    }

    pub fn family(&self) -> &SigmaFamily {
        &self.family
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }

    fn value_unchecked(&self, x: f64) -> f64 {
        match &self.family {
            SigmaFamily::Constant { c } => *c,
            SigmaFamily::SqrtAffine { c0_sq, c1_sq } => (c0_sq + c1_sq * x).max(0.0).sqrt(),
            SigmaFamily::PowerLaw { alpha } => x.powf(*alpha),
            SigmaFamily::FadingAffine { c0, c1 } => (c1 * x * x + c0).sqrt(),
            SigmaFamily::Tabulated { .. } => self.table.as_ref().unwrap().eval_clamped(x),
        }
    }

    /// sigma(x) for x inside the (closure of the) domain.
    pub fn value(&self, x: f64) -> Result<f64> {
        let (l, u) = self.domain;
        if !(x >= l && x <= u) {
            return Err(Error::Domain(format!("x = {x} outside sigma domain ({l}, {u})")));
        }
        Ok(self.value_unchecked(x))
    }

    /// One-sided limit of sigma at a domain endpoint; may be 0 or infinite.
    pub fn endpoint_limit(&self, side: Endpoint) -> f64 {
        let (l, u) = self.domain;
        let target = match side {
            Endpoint::Lower => l,
            Endpoint::Upper => u,
        };
        match &self.family {
            SigmaFamily::Constant { c } => *c,
            SigmaFamily::SqrtAffine { c0_sq, c1_sq } => {
                if target.is_infinite() {
                    if *c1_sq == 0.0 {
                        c0_sq.sqrt()
                    } else {
                        f64::INFINITY
                    }
                } else {
                    (c0_sq + c1_sq * target).max(0.0).sqrt()
                }
            }
            SigmaFamily::PowerLaw { alpha } => {
                if target == 0.0 {
                    if *alpha > 0.0 {
                        0.0
                    } else if *alpha < 0.0 {
                        f64::INFINITY
                    } else {
                        1.0
                    }
                } else if target.is_infinite() {
                    if *alpha > 0.0 {
                        f64::INFINITY
                    } else if *alpha < 0.0 {
                        0.0
                    } else {
                        1.0
                    }
                } else {
                    target.powf(*alpha)
                }
            }
            SigmaFamily::FadingAffine { c0, c1 } => {
                if target.is_infinite() {
                    if *c1 == 0.0 {
                        c0.sqrt()
                    } else {
                        f64::INFINITY
                    }
                } else {
                    (c1 * target * target + c0).sqrt()
                }
            }
            SigmaFamily::Tabulated { .. } => {
                let t = self.table.as_ref().unwrap();
                match side {
                    Endpoint::Lower => t.knot_values()[0],
                    Endpoint::Upper => *t.knot_values().last().unwrap(),
                }
            }
        }
    }

    /// Analytic antiderivative of 1/sigma when the family has one
    /// (an arbitrary integration constant is fine).
    pub fn inv_sigma_antiderivative(&self, x: f64) -> Option<f64> {
        match &self.family {
            SigmaFamily::Constant { c } => Some(x / c),
            SigmaFamily::SqrtAffine { c0_sq, c1_sq } => {
                if *c1_sq == 0.0 {
                    Some(x / c0_sq.sqrt())
                } else {
                    Some(2.0 * (c0_sq + c1_sq * x).max(0.0).sqrt() / c1_sq)
                }
            }
            SigmaFamily::PowerLaw { alpha } => {
                if (alpha - 1.0).abs() < 1e-14 {
                    Some(x.ln())
                } else {
                    Some(x.powf(1.0 - alpha) / (1.0 - alpha))
                }
            }
            SigmaFamily::FadingAffine { c0, c1 } => {
                if *c1 == 0.0 {
                    Some(x / c0.sqrt())
                } else if *c0 == 0.0 {
                    Some(x.ln() / c1.sqrt())
                } else {
                    Some((x * (c1 / c0).sqrt()).asinh() / c1.sqrt())
                }
            }
            SigmaFamily::Tabulated { .. } => None,
        }
    }

    /// Analytic antiderivative of sigma itself, when available.
    pub fn sigma_antiderivative(&self, x: f64) -> Option<f64> {
        match &self.family {
            SigmaFamily::Constant { c } => Some(c * x),
            SigmaFamily::SqrtAffine { c0_sq, c1_sq } => {
                if *c1_sq == 0.0 {
                    Some(c0_sq.sqrt() * x)
                } else {
                    Some(2.0 / 3.0 * (c0_sq + c1_sq * x).max(0.0).powf(1.5) / c1_sq)
                }
            }
            SigmaFamily::PowerLaw { alpha } => {
                if (alpha + 1.0).abs() < 1e-14 {
                    Some(x.ln())
                } else {
                    Some(x.powf(alpha + 1.0) / (alpha + 1.0))
                }
            }
            _ => None,
        }
    }

    /// The same profile on a sub-domain. Monotonicity is re-detected, so a
    /// profile that is non-monotone globally may become monotone here.
    pub fn restrict(&self, domain: (f64, f64)) -> Result<Self> {
        let (l, u) = domain;
        let (dl, du) = self.domain;
        if l < dl || u > du {
            return Err(Error::Domain(format!(
                "restriction ({l}, {u}) exceeds domain ({dl}, {du})"
            )));
        }
        Self::new(self.family.clone(), domain, None)
    }

    /// Maximum of sigma over a closed subinterval, by dense sampling plus the
    /// endpoint limits.
    pub fn max_on(&self, lo: f64, hi: f64, n: usize) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..=n {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            if let Ok(s) = self.value(x) {
                best = best.max(s);
            }
        }
        best
    }
}

fn detect_monotonicity(
    family: &SigmaFamily,
    domain: (f64, f64),
    table: Option<&MonotoneCubic>,
) -> Monotonicity {
    match family {
        // constants adopt the increasing convention used by the psi transform
        SigmaFamily::Constant { .. } => Monotonicity::Increasing,
        SigmaFamily::SqrtAffine { .. } => Monotonicity::Increasing,
        SigmaFamily::PowerLaw { alpha } => {
            if *alpha >= 0.0 {
                Monotonicity::Increasing
            } else {
                Monotonicity::Decreasing
            }
        }
        SigmaFamily::FadingAffine { c1, .. } => {
            if *c1 == 0.0 {
                Monotonicity::Increasing
            } else if domain.0 >= 0.0 {
                Monotonicity::Increasing
            } else if domain.1 <= 0.0 {
                Monotonicity::Decreasing
            } else {
                Monotonicity::NonMonotone
            }
        }
        SigmaFamily::Tabulated { .. } => {
            let ys = table.unwrap().knot_values();
            let tol = 1e-12 * ys.iter().fold(1.0f64, |a, b| a.max(b.abs()));
            let inc = ys.windows(2).all(|w| w[1] >= w[0] - tol);
            let dec = ys.windows(2).all(|w| w[1] <= w[0] + tol);
            if inc {
                Monotonicity::Increasing
            } else if dec {
                Monotonicity::Decreasing
            } else {
                Monotonicity::NonMonotone
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sqrt_affine_values_and_limits() {
        let s = SigmaProfile::new(
            SigmaFamily::SqrtAffine { c0_sq: 1.0, c1_sq: 1.0 },
            (0.0, 5.0),
            None,
        )
        .unwrap();
        assert_abs_diff_eq!(s.value(0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(s.value(5.0).unwrap(), 6.0f64.sqrt());
        assert_eq!(s.monotonicity(), Monotonicity::Increasing);
        assert_abs_diff_eq!(s.endpoint_limit(Endpoint::Lower), 1.0);
        // antiderivative of 1/sigma: 2 sqrt(1 + x)
        let phi5 = s.inv_sigma_antiderivative(5.0).unwrap() - s.inv_sigma_antiderivative(0.0).unwrap();
        assert_abs_diff_eq!(phi5, 2.0 * 6.0f64.sqrt() - 2.0, epsilon = 1e-12);
    }

    #[test]
    fn power_law_limits() {
        let s = SigmaProfile::new(SigmaFamily::PowerLaw { alpha: 1.0 }, (0.0, 1.0), None).unwrap();
        assert_eq!(s.endpoint_limit(Endpoint::Lower), 0.0);
        assert_eq!(s.monotonicity(), Monotonicity::Increasing);
        let inv = SigmaProfile::new(SigmaFamily::PowerLaw { alpha: -1.0 }, (0.0, 1.0), None).unwrap();
        assert_eq!(inv.endpoint_limit(Endpoint::Lower), f64::INFINITY);
        assert_eq!(inv.monotonicity(), Monotonicity::Decreasing);
    }

    #[test]
    fn interior_zero_is_rejected() {
        // sigma(x) = x on (-1, 1) hits zero at an interior point
        let err = SigmaProfile::new(
            SigmaFamily::Tabulated {
                x: vec![-1.0, 0.0, 1.0],
                sigma: vec![1.0, 0.0, 1.0],
            },
            (-1.0, 1.0),
            None,
        );
        assert!(err.is_err());
    }

    #[test]
    fn declared_monotonicity_must_match() {
        let r = SigmaProfile::new(
            SigmaFamily::PowerLaw { alpha: 1.0 },
            (0.0, 1.0),
            Some(Monotonicity::Decreasing),
        );
        assert!(r.is_err());
    }

    #[test]
    fn tabulated_clamps_outside_range() {
        let s = SigmaProfile::new(
            SigmaFamily::Tabulated { x: vec![0.0, 1.0, 2.0], sigma: vec![1.0, 1.5, 2.0] },
            (0.0, 2.0),
            None,
        )
        .unwrap();
        assert_abs_diff_eq!(s.value(2.0).unwrap(), 2.0);
        assert_eq!(s.monotonicity(), Monotonicity::Increasing);
    }

    #[test]
    fn fading_with_zero_floor_vanishes_at_origin() {
        let s = SigmaProfile::new(SigmaFamily::FadingAffine { c0: 0.0, c1: 1.0 }, (0.0, 1.0), None)
            .unwrap();
        assert_eq!(s.endpoint_limit(Endpoint::Lower), 0.0);
        assert_abs_diff_eq!(s.value(0.5).unwrap(), 0.5);
    }
}
