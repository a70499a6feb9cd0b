//! Noise densities f_Z: standard Gaussian, truncated Gaussian, and tabulated.

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::erf::{erfc, erfc_inv};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;
use crate::quad::{self, QuadratureConfig};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

pub fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / SQRT_2PI
}

pub fn std_normal_cdf(z: f64) -> f64 {
    if z.is_infinite() {
        return if z > 0.0 { 1.0 } else { 0.0 };
    }
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

pub fn std_normal_quantile(p: f64) -> f64 {
    -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p)
}

/// A density supplied as samples on a grid; evaluated through the monotone
/// cubic interpolant, zero outside the grid range.
#[derive(Debug, Clone)]
pub struct TabulatedNoise {
    z: Vec<f64>,
    pdf: Vec<f64>,
    interp: MonotoneCubic,
    sup: f64,
}

impl TabulatedNoise {
    fn new(z: Vec<f64>, pdf: Vec<f64>) -> Result<Self> {
        if pdf.iter().any(|p| *p < 0.0) {
            return Err(Error::InvalidSpec("tabulated pdf must be nonnegative".into()));
        }
        let interp = MonotoneCubic::new(&z, &pdf)?;
        let mass = interp.total_integral();
        if (mass - 1.0).abs() > 1e-8 {
            return Err(Error::NotADensity { integral: mass });
        }
        let sup = pdf.iter().cloned().fold(0.0f64, f64::max);
        Ok(Self { z, pdf, interp, sup })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "NoiseRepr", into = "NoiseRepr")]
pub enum NoiseModel {
    StandardGaussian,
    /// Standard Gaussian conditioned on `lo <= Z <= hi`, renormalized.
    TruncatedGaussian { lo: f64, hi: f64 },
    Tabulated(TabulatedNoise),
}

impl NoiseModel {
    pub fn truncated_gaussian(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidSpec(format!("truncation bounds ({lo}, {hi}) are empty")));
        }
        let theta = std_normal_cdf(hi) - std_normal_cdf(lo);
        if theta <= 0.0 {
            return Err(Error::InvalidSpec("truncation interval has no Gaussian mass".into()));
        }
        Ok(Self::TruncatedGaussian { lo, hi })
    }

    pub fn tabulated(z: Vec<f64>, pdf: Vec<f64>) -> Result<Self> {
        Ok(Self::Tabulated(TabulatedNoise::new(z, pdf)?))
    }

    pub fn pdf(&self, z: f64) -> f64 {
        match self {
            Self::StandardGaussian => std_normal_pdf(z),
            Self::TruncatedGaussian { lo, hi } => {
                if z < *lo || z > *hi {
                    0.0
                } else {
                    std_normal_pdf(z) / (std_normal_cdf(*hi) - std_normal_cdf(*lo))
                }
            }
            Self::Tabulated(t) => t.interp.eval_or_zero(z).max(0.0),
        }
    }

    pub fn cdf(&self, z: f64) -> f64 {
        match self {
            Self::StandardGaussian => std_normal_cdf(z),
            Self::TruncatedGaussian { lo, hi } => {
                let theta = std_normal_cdf(*hi) - std_normal_cdf(*lo);
                ((std_normal_cdf(z.clamp(*lo, *hi)) - std_normal_cdf(*lo)) / theta).clamp(0.0, 1.0)
            }
            Self::Tabulated(t) => t.interp.integral_from_start(z).clamp(0.0, 1.0),
        }
    }

    /// Differential entropy h(Z) in nats. Closed form for the Gaussian
    /// families, quadrature for tabulated densities.
    pub fn entropy(&self, cfg: &QuadratureConfig) -> Result<f64> {
        match self {
            Self::StandardGaussian => {
                Ok(0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln())
            }
            Self::TruncatedGaussian { lo, hi } => Ok(quad::gaussian_truncated_entropy(*lo, *hi)),
            Self::Tabulated(t) => {
                let (lo, hi) = t.interp.range();
                let q = quad::integrate(
                    |z| {
                        let f = self.pdf(z);
                        if f > 0.0 {
                            -f * f.ln()
                        } else {
                            0.0
                        }
                    },
                    lo,
                    hi,
                    cfg,
                )?;
                Ok(q.value)
            }
        }
    }

    /// Essential supremum of the density.
    pub fn sup_density(&self) -> f64 {
        match self {
            Self::StandardGaussian => std_normal_pdf(0.0),
            Self::TruncatedGaussian { lo, hi } => {
                let theta = std_normal_cdf(*hi) - std_normal_cdf(*lo);
                std_normal_pdf(0.0f64.clamp(*lo, *hi)) / theta
            }
            Self::Tabulated(t) => t.sup,
        }
    }

    /// Absolute moment E|Z|^gamma.
    pub fn moment_abs(&self, gamma_exp: f64, cfg: &QuadratureConfig) -> Result<f64> {
        if gamma_exp <= 0.0 {
            return Err(Error::Domain("moment exponent must be positive".into()));
        }
        match self {
            Self::StandardGaussian => {
                Ok(2.0f64.powf(gamma_exp / 2.0) * gamma((gamma_exp + 1.0) / 2.0)
                    / std::f64::consts::PI.sqrt())
            }
            _ => {
                let (lo, hi) = self.support();
                let q = quad::integrate(|z| z.abs().powf(gamma_exp) * self.pdf(z), lo, hi, cfg)?;
                Ok(q.value)
            }
        }
    }

    /// The interval outside which the density is zero (infinite for the
    /// untruncated Gaussian).
    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::StandardGaussian => (f64::NEG_INFINITY, f64::INFINITY),
            Self::TruncatedGaussian { lo, hi } => (*lo, *hi),
            Self::Tabulated(t) => t.interp.range(),
        }
    }

    /// Range of noise values kept when discretizing: `k` standard deviations
    /// for the Gaussian, the exact support otherwise.
    pub fn truncation_range(&self, k: f64) -> (f64, f64) {
        match self {
            Self::StandardGaussian => (-k, k),
            _ => self.support(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::StandardGaussian => {
                // Box-Muller; u1 shifted into (0, 1]
                let u1: f64 = 1.0 - rng.gen::<f64>();
                let u2: f64 = rng.gen();
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            }
            Self::TruncatedGaussian { lo, hi } => {
                let (plo, phi) = (std_normal_cdf(*lo), std_normal_cdf(*hi));
                let u: f64 = rng.gen();
                std_normal_quantile(plo + u * (phi - plo)).clamp(*lo, *hi)
            }
            Self::Tabulated(t) => {
                let u: f64 = rng.gen();
                let (mut lo, mut hi) = t.interp.range();
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if t.interp.integral_from_start(mid) < u {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "family")]
enum NoiseRepr {
    StandardGaussian,
    TruncatedGaussian { lo: f64, hi: f64 },
    Tabulated { z: Vec<f64>, pdf: Vec<f64> },
}

impl TryFrom<NoiseRepr> for NoiseModel {
    type Error = Error;
    fn try_from(r: NoiseRepr) -> Result<Self> {
        match r {
            NoiseRepr::StandardGaussian => Ok(Self::StandardGaussian),
            NoiseRepr::TruncatedGaussian { lo, hi } => Self::truncated_gaussian(lo, hi),
            NoiseRepr::Tabulated { z, pdf } => Self::tabulated(z, pdf),
        }
    }
}

impl From<NoiseModel> for NoiseRepr {
    fn from(n: NoiseModel) -> Self {
        match n {
            NoiseModel::StandardGaussian => Self::StandardGaussian,
            NoiseModel::TruncatedGaussian { lo, hi } => Self::TruncatedGaussian { lo, hi },
            NoiseModel::Tabulated(t) => Self::Tabulated { z: t.z, pdf: t.pdf },
        }
    }
}

/// A tabulated uniform density on (lo, hi); handy as a non-Gaussian noise.
pub fn uniform_noise(lo: f64, hi: f64) -> NoiseModel {
    let h = 1.0 / (hi - lo);
    NoiseModel::tabulated(vec![lo, 0.5 * (lo + hi), hi], vec![h, h, h]).expect("uniform table")
}
