//! The channel model Y = X + sigma(X) Z: domain types, the conditional
//! density and entropy, and forward simulation.

mod input;
mod noise;
mod sigma;

pub use input::{InputDist, InputSampler};
pub use noise::{std_normal_cdf, std_normal_pdf, std_normal_quantile, uniform_noise, NoiseModel};
pub use sigma::{Endpoint, Monotonicity, SigmaFamily, SigmaProfile};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::QuadratureConfig;

/// An input cost constraint in the form g(X) <= 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum Constraint {
    /// |X| <= value.
    Peak(f64),
    /// E[X] <= value.
    Mean(f64),
    /// E[X^2] <= value.
    Power(f64),
}

impl Constraint {
    /// The cost function g with the convention E[g(X)] <= 0.
    pub fn g(&self, x: f64) -> f64 {
        match self {
            Constraint::Peak(u) => x.abs() - u,
            Constraint::Mean(a) => x - a,
            Constraint::Power(p) => x * x - p,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Constraint::Peak(u) => u.is_finite() && *u > 0.0,
            Constraint::Mean(a) => a.is_finite(),
            Constraint::Power(p) => p.is_finite() && *p > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!("constraint bound invalid: {self:?}")))
        }
    }
}

/// A fully specified ASDN channel: sigma profile, noise law, input support,
/// and cost constraints.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ChannelSpecRepr", into = "ChannelSpecRepr")]
pub struct ChannelSpec {
    sigma: SigmaProfile,
    noise: NoiseModel,
    support: (f64, f64),
    constraints: Vec<Constraint>,
}

impl ChannelSpec {
    pub fn new(
        sigma: SigmaProfile,
        noise: NoiseModel,
        support: (f64, f64),
        constraints: Vec<Constraint>,
    ) -> Result<Self> {
        let (l, u) = support;
        if !(l < u) || l.is_nan() || u.is_nan() {
            return Err(Error::InvalidSpec(format!("support ({l}, {u}) is empty")));
        }
        let (dl, du) = sigma.domain();
        if l < dl || u > du {
            return Err(Error::InvalidSpec(format!(
                "support ({l}, {u}) exceeds sigma domain ({dl}, {du})"
            )));
        }
        for c in &constraints {
            c.validate()?;
        }
        Ok(Self { sigma, noise, support, constraints })
    }

    pub fn sigma(&self) -> &SigmaProfile {
        &self.sigma
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// The support intersected with any peak constraints.
    pub fn effective_support(&self) -> (f64, f64) {
        let (mut l, mut u) = self.support;
        for c in &self.constraints {
            if let Constraint::Peak(p) = c {
                l = l.max(-p);
                u = u.min(*p);
            }
        }
        (l, u)
    }

    /// Constraints other than peak (those that act through expectations).
    pub fn expectation_constraints(&self) -> Vec<Constraint> {
        self.constraints
            .iter()
            .filter(|c| !matches!(c, Constraint::Peak(_)))
            .cloned()
            .collect()
    }

    /// f_{Y|X}(y|x) = (1/sigma(x)) f_Z((y - x)/sigma(x)).
    pub fn conditional_density(&self, x: f64, y: f64) -> Result<f64> {
        let (l, u) = self.support;
        if !(x >= l && x <= u) {
            return Err(Error::Domain(format!("x = {x} outside support ({l}, {u})")));
        }
        let s = self.sigma.value(x)?;
        if !(s > 0.0) {
            return Err(Error::Domain(format!("sigma({x}) = {s} is not positive")));
        }
        Ok(self.noise.pdf((y - x) / s) / s)
    }

    /// h(Y|X) = E[log sigma(X)] + h(Z), in nats.
    pub fn conditional_entropy(&self, input: &InputDist, cfg: &QuadratureConfig) -> Result<f64> {
        let hz = self.noise.entropy(cfg)?;
        let e_log_sigma = input.expect(
            |x| match self.sigma.value(x) {
                Ok(s) if s > 0.0 => s.ln(),
                _ => f64::NAN,
            },
            cfg,
        )?;
        let h = e_log_sigma + hz;
        if !h.is_finite() {
            return Err(Error::NonFinite(format!("h(Y|X) = {h}")));
        }
        Ok(h)
    }

    /// Forward-simulate one channel use at input x.
    pub fn sample<R: Rng + ?Sized>(&self, x: f64, rng: &mut R) -> Result<f64> {
        let (l, u) = self.support;
        if !(x >= l && x <= u) {
            return Err(Error::Domain(format!("x = {x} outside support ({l}, {u})")));
        }
        let s = self.sigma.value(x)?;
        Ok(x + s * self.noise.sample(rng))
    }

    /// This spec with its mean constraint replaced (or added).
    pub fn with_mean_constraint(&self, alpha: f64) -> Result<Self> {
        let mut cs: Vec<Constraint> = self
            .constraints
            .iter()
            .filter(|c| !matches!(c, Constraint::Mean(_)))
            .cloned()
            .collect();
        cs.push(Constraint::Mean(alpha));
        Self::new(self.sigma.clone(), self.noise.clone(), self.support, cs)
    }

    /// Short stable identifier derived from the canonical JSON encoding.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_string(self).unwrap_or_default();
        format!("{:016x}", fnv1a64(json.as_bytes()))
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Extended real serialized as a number or the strings "inf" / "-inf".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtReal(pub f64);

impl Serialize for ExtReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) if !v.is_nan() => Ok(ExtReal(v)),
            Raw::Num(_) => Err(DeError::custom("NaN is not a valid extended real")),
            Raw::Str(s) => match s.as_str() {
                "inf" | "+inf" => Ok(ExtReal(f64::INFINITY)),
                "-inf" => Ok(ExtReal(f64::NEG_INFINITY)),
                other => Err(DeError::custom(format!("expected a number, \"inf\" or \"-inf\", got {other:?}"))),
            },
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SigmaRepr {
    #[serde(flatten)]
    family: SigmaFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<[ExtReal; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    monotonicity: Option<Monotonicity>,
}

#[derive(Serialize, Deserialize)]
struct ChannelSpecRepr {
    sigma: SigmaRepr,
    noise: NoiseModel,
    support: [ExtReal; 2],
    #[serde(default)]
    constraints: Vec<Constraint>,
}

impl TryFrom<ChannelSpecRepr> for ChannelSpec {
    type Error = Error;
    fn try_from(r: ChannelSpecRepr) -> Result<Self> {
        let support = (r.support[0].0, r.support[1].0);
        let domain = match r.sigma.domain {
            Some([l, u]) => (l.0, u.0),
            None => support,
        };
        let sigma = SigmaProfile::new(r.sigma.family, domain, r.sigma.monotonicity)?;
        ChannelSpec::new(sigma, r.noise, support, r.constraints)
    }
}

impl From<ChannelSpec> for ChannelSpecRepr {
    fn from(s: ChannelSpec) -> Self {
        let (dl, du) = s.sigma.domain();
        ChannelSpecRepr {
            sigma: SigmaRepr {
                family: s.sigma.family().clone(),
                domain: Some([ExtReal(dl), ExtReal(du)]),
                monotonicity: Some(s.sigma.monotonicity()),
            },
            noise: s.noise,
            support: [ExtReal(s.support.0), ExtReal(s.support.1)],
            constraints: s.constraints,
        }
    }
}

impl ChannelSpec {
    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn gauss_channel(sigma: SigmaProfile, support: (f64, f64)) -> ChannelSpec {
        ChannelSpec::new(sigma, NoiseModel::StandardGaussian, support, vec![]).unwrap()
    }

    fn sqrt_affine(c0_sq: f64, c1_sq: f64, domain: (f64, f64)) -> SigmaProfile {
        SigmaProfile::new(SigmaFamily::SqrtAffine { c0_sq, c1_sq }, domain, None).unwrap()
    }

    fn constant(c: f64, domain: (f64, f64)) -> SigmaProfile {
        SigmaProfile::new(SigmaFamily::Constant { c }, domain, None).unwrap()
    }

    #[test]
    fn conditional_density_standard_peak() {
        let ch = gauss_channel(constant(1.0, (-10.0, 10.0)), (-10.0, 10.0));
        let v = ch.conditional_density(0.0, 0.0).unwrap();
        assert_abs_diff_eq!(v, 1.0 / (2.0 * std::f64::consts::PI).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(v, 0.398_94, epsilon = 1e-5);
    }

    #[test]
    fn conditional_density_sqrt_profile_unit_scale() {
        // sigma(x) = sqrt(x), so sigma(1) = 1 and the density at y = x is the
        // standard normal peak
        let ch = gauss_channel(sqrt_affine(0.0, 1.0, (0.0, 10.0)), (0.0, 10.0));
        assert_abs_diff_eq!(ch.conditional_density(1.0, 1.0).unwrap(), 0.398_94, epsilon = 1e-5);
    }

    #[test]
    fn conditional_density_scaled() {
        let ch = gauss_channel(constant(2.0, (-10.0, 10.0)), (-10.0, 10.0));
        // (1/2) phi(1); phi(1) evaluated independently
        let phi1 = (-0.5f64).exp() / (2.0 * std::f64::consts::PI).sqrt();
        assert_abs_diff_eq!(ch.conditional_density(0.0, 2.0).unwrap(), 0.5 * phi1, epsilon = 1e-12);
        assert_abs_diff_eq!(0.5 * phi1, 0.120_99, epsilon = 1e-5);
    }

    #[test]
    fn conditional_density_rejects_outside_support() {
        let ch = gauss_channel(constant(1.0, (0.0, 1.0)), (0.0, 1.0));
        assert!(ch.conditional_density(2.0, 0.0).is_err());
    }

    #[test]
    fn conditional_density_normalizes_in_y() {
        let cases = vec![
            gauss_channel(sqrt_affine(1.0, 1.0, (0.0, 5.0)), (0.0, 5.0)),
            gauss_channel(constant(0.5, (-3.0, 3.0)), (-3.0, 3.0)),
            ChannelSpec::new(
                constant(1.0, (0.0, 2.0)),
                uniform_noise(-1.0, 1.0),
                (0.0, 2.0),
                vec![],
            )
            .unwrap(),
        ];
        for ch in cases {
            for x in [ch.support().0 + 0.3, 0.5 * (ch.support().0 + ch.support().1)] {
                let s = ch.sigma().value(x).unwrap();
                let (zl, zh) = ch.noise().truncation_range(10.0);
                let (ylo, yhi) = (x + s * zl, x + s * zh);
                let mass = quad::integrate(
                    |y| ch.conditional_density(x, y).unwrap_or(0.0),
                    ylo,
                    yhi,
                    &cfg(),
                )
                .unwrap()
                .value;
                assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn conditional_entropy_constant_sigma() {
        let ch = gauss_channel(constant(2.0, (0.0, 1.0)), (0.0, 1.0));
        let h = ch.conditional_entropy(&InputDist::uniform(0.0, 1.0), &cfg()).unwrap();
        let expect = 2.0f64.ln() + 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln();
        assert_abs_diff_eq!(h, expect, epsilon = 1e-9);
    }

    #[test]
    fn conditional_entropy_sqrt_profile_uniform_input() {
        // sigma = sqrt(1+x), X ~ U(0,5): E[ln(1+X)] = (6 ln 6 - 5)/5
        let ch = gauss_channel(sqrt_affine(1.0, 1.0, (0.0, 5.0)), (0.0, 5.0));
        let h = ch.conditional_entropy(&InputDist::uniform(0.0, 5.0), &cfg()).unwrap();
        let e_log = (6.0 * 6.0f64.ln() - 5.0) / 5.0;
        assert_abs_diff_eq!(e_log, 1.15011, epsilon = 1e-5);
        let expect = 0.5 * e_log + 1.418_938_533_204_672_7;
        assert_abs_diff_eq!(h, expect, epsilon = 1e-7);
        assert_abs_diff_eq!(h, 1.993_99, epsilon = 1e-4);
    }

    #[test]
    fn conditional_entropy_power_sigma_triangular_input() {
        // sigma(x) = x on (0,1), X with density 2x: E[ln X] = -1/2
        let ch = gauss_channel(
            SigmaProfile::new(SigmaFamily::PowerLaw { alpha: 1.0 }, (0.0, 1.0), None).unwrap(),
            (0.0, 1.0),
        );
        let input = InputDist::from_pdf(|x| if (0.0..=1.0).contains(&x) { 2.0 * x } else { 0.0 }, (0.0, 1.0));
        let h = ch.conditional_entropy(&input, &cfg()).unwrap();
        assert_abs_diff_eq!(h, 1.418_938_533_204_672_7 - 0.5, epsilon = 1e-6);
    }

    #[test]
    fn conditional_entropy_matches_direct_quadrature() {
        // h(Y|X) identity against the direct double integral on several specs
        let specs: Vec<(ChannelSpec, InputDist)> = vec![
            (gauss_channel(sqrt_affine(1.0, 1.0, (0.0, 5.0)), (0.0, 5.0)), InputDist::uniform(0.5, 4.5)),
            (gauss_channel(constant(0.7, (-2.0, 2.0)), (-2.0, 2.0)), InputDist::uniform(-1.5, 1.5)),
            (gauss_channel(sqrt_affine(2.0, 0.5, (0.0, 8.0)), (0.0, 8.0)), InputDist::uniform(1.0, 7.0)),
            (
                gauss_channel(
                    SigmaProfile::new(SigmaFamily::FadingAffine { c0: 1.0, c1: 0.3 }, (0.0, 4.0), None)
                        .unwrap(),
                    (0.0, 4.0),
                ),
                InputDist::uniform(0.2, 3.8),
            ),
            (
                ChannelSpec::new(constant(1.2, (0.0, 3.0)), uniform_noise(-1.0, 1.0), (0.0, 3.0), vec![])
                    .unwrap(),
                InputDist::uniform(0.3, 2.7),
            ),
        ];
        for (ch, input) in specs {
            let fast = ch.conditional_entropy(&input, &cfg()).unwrap();
            let direct = input
                .expect(
                    |x| {
                        let s = ch.sigma().value(x).unwrap();
                        let (zl, zh) = ch.noise().truncation_range(10.0);
                        quad::integrate(
                            |y| {
                                let f = ch.conditional_density(x, y).unwrap_or(0.0);
                                if f > 0.0 {
                                    -f * f.ln()
                                } else {
                                    0.0
                                }
                            },
                            x + s * zl,
                            x + s * zh,
                            &cfg(),
                        )
                        .map(|q| q.value)
                        .unwrap_or(f64::NAN)
                    },
                    &cfg(),
                )
                .unwrap();
            assert_abs_diff_eq!(fast, direct, epsilon = 1e-4);
        }
    }

    #[test]
    fn sampler_is_deterministic_and_degenerate_sigma_noiseless() {
        let ch = gauss_channel(constant(0.0, (0.0, 10.0)), (0.0, 10.0));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        assert_eq!(ch.sample(3.0, &mut rng).unwrap(), 3.0);

        let ch = gauss_channel(constant(1.0, (-5.0, 5.0)), (-5.0, 5.0));
        let mut r1 = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let mut r2 = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        assert_eq!(ch.sample(0.0, &mut r1).unwrap(), ch.sample(0.0, &mut r2).unwrap());
    }

    #[test]
    fn sample_variance_tracks_sigma() {
        // sigma(x) = sqrt(x) at x = 4: Var(Y) = 4
        let ch = gauss_channel(sqrt_affine(0.0, 1.0, (0.0, 10.0)), (0.0, 10.0));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let n = 1_000_000usize;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let y = ch.sample(4.0, &mut rng).unwrap();
            sum += y;
            sumsq += y * y;
        }
        let mean = sum / n as f64;
        let var = sumsq / n as f64 - mean * mean;
        // MC error of the variance estimate: sd ~ var * sqrt(2/n)
        let three_sigma = 3.0 * 4.0 * (2.0 / n as f64).sqrt();
        assert_abs_diff_eq!(mean, 4.0, epsilon = 3.0 * 2.0 / (n as f64).sqrt());
        assert_abs_diff_eq!(var, 4.0, epsilon = three_sigma);
    }

    #[test]
    fn json_round_trip_with_infinities() {
        let json = r#"{
            "sigma": {"family": "Constant", "c": 1.0},
            "noise": {"family": "StandardGaussian"},
            "support": ["-inf", "inf"],
            "constraints": [{"kind": "Power", "value": 100.0}]
        }"#;
        let ch = ChannelSpec::from_json(json).unwrap();
        assert_eq!(ch.support(), (f64::NEG_INFINITY, f64::INFINITY));
        assert_eq!(ch.constraints(), &[Constraint::Power(100.0)]);
        let again = ChannelSpec::from_json(&ch.to_json().unwrap()).unwrap();
        assert_eq!(again.support(), ch.support());
        assert_eq!(again.fingerprint(), ch.fingerprint());
    }

    #[test]
    fn json_field_names_are_stable() {
        let ch = ChannelSpec::new(
            sqrt_affine(1.0, 1.0, (0.0, 5.0)),
            NoiseModel::StandardGaussian,
            (0.0, 5.0),
            vec![Constraint::Mean(2.5)],
        )
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&ch.to_json().unwrap()).unwrap();
        assert_eq!(v["sigma"]["family"], "SqrtAffine");
        assert_eq!(v["sigma"]["c0_sq"], 1.0);
        assert_eq!(v["noise"]["family"], "StandardGaussian");
        assert_eq!(v["support"][1], 5.0);
        assert_eq!(v["constraints"][0]["kind"], "Mean");
        assert_eq!(v["constraints"][0]["value"], 2.5);
    }

    #[test]
    fn support_must_fit_domain() {
        let r = ChannelSpec::new(
            sqrt_affine(1.0, 1.0, (0.0, 5.0)),
            NoiseModel::StandardGaussian,
            (-1.0, 5.0),
            vec![],
        );
        assert!(r.is_err());
    }
}
