//! Channel inputs: discrete pmfs or continuous densities.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::quad::{self, QuadratureConfig};

/// An input law for the channel, either a pmf on finitely many points or a
/// density on an interval.
#[derive(Clone)]
pub enum InputDist {
    Discrete {
        points: Vec<f64>,
        probs: Vec<f64>,
    },
    Density {
        pdf: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        support: (f64, f64),
    },
}

impl std::fmt::Debug for InputDist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Discrete { points, .. } => write!(f, "InputDist::Discrete({} points)", points.len()),
            Self::Density { support, .. } => write!(f, "InputDist::Density on {support:?}"),
        }
    }
}

impl InputDist {
    pub fn discrete(points: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if points.len() != probs.len() || points.is_empty() {
            return Err(Error::Domain("pmf needs matching nonempty points and probs".into()));
        }
        if probs.iter().any(|p| *p < 0.0 || !p.is_finite()) {
            return Err(Error::Domain("pmf probabilities must be nonnegative".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::NotADensity { integral: total });
        }
        Ok(Self::Discrete { points, probs })
    }

    pub fn point_mass(x: f64) -> Self {
        Self::Discrete { points: vec![x], probs: vec![1.0] }
    }

    pub fn two_point(x1: f64, x2: f64, p: f64) -> Result<Self> {
        Self::discrete(vec![x1, x2], vec![p, 1.0 - p])
    }

    pub fn from_pdf<F>(pdf: F, support: (f64, f64)) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::Density { pdf: Arc::new(pdf), support }
    }

    pub fn uniform(a: f64, b: f64) -> Self {
        let h = 1.0 / (b - a);
        Self::from_pdf(
            move |x| if x >= a && x <= b { h } else { 0.0 },
            (a, b),
        )
    }

    /// E[g(X)] under this input.
    pub fn expect<G: Fn(f64) -> f64>(&self, g: G, cfg: &QuadratureConfig) -> Result<f64> {
        let v = match self {
            Self::Discrete { points, probs } => points
                .iter()
                .zip(probs)
                .map(|(x, p)| if *p > 0.0 { p * g(*x) } else { 0.0 })
                .sum(),
            Self::Density { pdf, support } => {
                quad::integrate(|x| pdf(x) * g(x), support.0, support.1, cfg)?.value
            }
        };
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("expectation evaluated to {v}")));
        }
        Ok(v)
    }

    /// Precompute a sampler (inverse-cdf table for densities).
    pub fn sampler(&self) -> Result<InputSampler> {
        match self {
            Self::Discrete { points, probs } => {
                let mut cum = Vec::with_capacity(probs.len());
                let mut acc = 0.0;
                for p in probs {
                    acc += p;
                    cum.push(acc);
                }
                Ok(InputSampler::Discrete { points: points.clone(), cum })
            }
            Self::Density { pdf, support } => {
                let (a, b) = *support;
                if !(a.is_finite() && b.is_finite()) {
                    return Err(Error::UnboundedSupport);
                }
                const CELLS: usize = 8192;
                let dx = (b - a) / CELLS as f64;
                let mut xs = Vec::with_capacity(CELLS + 1);
                let mut cdf = Vec::with_capacity(CELLS + 1);
                let mut acc = 0.0;
                let mut prev = pdf(a).max(0.0);
                xs.push(a);
                cdf.push(0.0);
                for i in 1..=CELLS {
                    let x = a + dx * i as f64;
                    let cur = pdf(x).max(0.0);
                    acc += 0.5 * (prev + cur) * dx;
                    xs.push(x);
                    cdf.push(acc);
                    prev = cur;
                }
                let total = acc;
                if !(total > 0.0) {
                    return Err(Error::NotADensity { integral: total });
                }
                for c in cdf.iter_mut() {
                    *c /= total;
                }
                Ok(InputSampler::Table { xs, cdf })
            }
        }
    }
}

/// Sampler state built by [`InputDist::sampler`].
#[derive(Debug, Clone)]
pub enum InputSampler {
    Discrete { points: Vec<f64>, cum: Vec<f64> },
    Table { xs: Vec<f64>, cdf: Vec<f64> },
}

impl InputSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        match self {
            Self::Discrete { points, cum } => {
                let i = cum.partition_point(|c| *c < u).min(points.len() - 1);
                points[i]
            }
            Self::Table { xs, cdf } => {
                let i = cdf.partition_point(|c| *c < u).clamp(1, cdf.len() - 1);
                let (c0, c1) = (cdf[i - 1], cdf[i]);
                let t = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
                xs[i - 1] + t * (xs[i] - xs[i - 1])
            }
        }
    }
}
