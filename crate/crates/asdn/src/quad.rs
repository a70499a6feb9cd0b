//! Shared numerical engine: adaptive Gauss-Kronrod quadrature on finite and
//! improper intervals, differential entropy with divergence detection, tail
//! probabilities and truncated entropies of noise models, binary entropy, and
//! one-dimensional scalar maximization.

use std::collections::BinaryHeap;

use crate::channel::NoiseModel;
use crate::error::{Error, Result};

/// Tolerances and budgets for the adaptive integrator.
#[derive(Debug, Clone)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Mass below which an infinite tail is treated as negligible when a cdf
    /// is available (truncated entropies, moments).
    pub improper_truncation_mass: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-7,
            max_subdivisions: 2000,
            improper_truncation_mass: 1e-12,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.improper_truncation_mass > 0.0) {
            return Err(Error::Domain("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions < 10 {
            return Err(Error::Domain("max_subdivisions must be at least 10".into()));
        }
        Ok(())
    }
}

/// Result of an adaptive quadrature.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub subdivisions: usize,
}

// 10-point Gauss / 21-point Kronrod pair (QUADPACK dqk21 constants).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One Gauss-Kronrod panel on [a, b]. Non-finite integrand samples are
/// treated as 0 so removable endpoint singularities do not poison the sum.
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };

    let fc = eval(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut res_abs = kronrod.abs();

    let mut fv = [0.0f64; 21];
    fv[10] = fc;
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx);
        let f2 = eval(center + dx);
        fv[j] = f1;
        fv[20 - j] = f2;
        let sum = f1 + f2;
        kronrod += WGK[j] * sum;
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }

    let mean = kronrod * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[20 - j] - mean).abs());
    }

    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

#[derive(PartialEq)]
struct Segment {
    err: f64,
    a: f64,
    b: f64,
    value: f64,
}

impl Eq for Segment {}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(std::cmp::Ordering::Equal)
    }
}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Globally adaptive quadrature on a finite interval.
fn adaptive_finite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, abs_error: 0.0, subdivisions: 0 });
    }
    let mut heap = BinaryHeap::new();
    let (v, e) = gk21(f, a, b);
    heap.push(Segment { err: e, a, b, value: v });
    let mut total = v;
    let mut total_err = e;
    let mut used = 1usize;

    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= tol {
            return Ok(Quadrature { value: total, abs_error: total_err, subdivisions: used });
        }
        if used >= cfg.max_subdivisions {
            return Err(Error::NoConvergence { estimate: total, error: total_err, subdivisions: used });
        }
        let worst = heap.pop().expect("heap nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at floating-point resolution; accept its estimate
            total_err = (total_err - worst.err).max(0.0);
            if heap.is_empty() {
                return Ok(Quadrature { value: total, abs_error: total_err, subdivisions: used });
            }
            heap.push(Segment { err: 0.0, ..worst });
            continue;
        }
        let (v1, e1) = gk21(f, worst.a, mid);
        let (v2, e2) = gk21(f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Segment { err: e1, a: worst.a, b: mid, value: v1 });
        heap.push(Segment { err: e2, a: mid, b: worst.b, value: v2 });
        used += 1;
    }
}

/// Outcome of summing shell integrals toward an improper or singular endpoint.
#[derive(Debug, Clone, Copy)]
struct TailSum {
    value: f64,
    /// Sign of the divergence when the shell series does not decay.
    divergent: Option<f64>,
    /// True when a geometric tail extrapolation was applied.
    extrapolated: f64,
}

/// Classify a sequence of shell integrals: converged, geometric (extrapolate),
/// or divergent with a definite sign.
fn classify_shells(shells: &[f64], tiny: f64) -> TailSum {
    let mut sum = 0.0;
    for (k, s) in shells.iter().enumerate() {
        sum += s;
        // two consecutive negligible shells: treat the remainder as zero
        if k >= 1 && s.abs() < tiny && shells[k - 1].abs() < tiny {
            return TailSum { value: sum, divergent: None, extrapolated: 0.0 };
        }
    }
    let n = shells.len();
    if n < 3 {
        return TailSum { value: sum, divergent: None, extrapolated: 0.0 };
    }
    let last = &shells[n - 3..];
    if last.iter().all(|s| s.abs() < tiny) {
        return TailSum { value: sum, divergent: None, extrapolated: 0.0 };
    }
    let same_sign = last.iter().all(|s| *s > 0.0) || last.iter().all(|s| *s < 0.0);
    if !same_sign {
        // alternating tails: treat the (small) remainder as converged
        return TailSum { value: sum, divergent: None, extrapolated: 0.0 };
    }
    let r1 = (last[1] / last[0]).abs();
    let r2 = (last[2] / last[1]).abs();
    if r1 >= 0.92 || r2 >= 0.92 {
        return TailSum { value: sum, divergent: Some(last[2].signum()), extrapolated: 0.0 };
    }
    // geometric decay: extrapolate the remaining tail
    let r = r2.max(r1).min(0.9);
    let extra = last[2] * r / (1.0 - r);
    TailSum { value: sum + extra, divergent: None, extrapolated: extra.abs() }
}

/// Shell boundaries marching to +infinity from `start` by squaring.
fn shells_to_infinity(start: f64) -> Vec<f64> {
    let mut bounds = vec![start];
    let mut t = start.abs().max(2.0);
    if t > start {
        bounds.push(t);
    }
    while t < 1e150 {
        t *= t;
        bounds.push(t.min(1e300));
    }
    bounds
}

/// Shell boundaries collapsing onto a finite endpoint `e` from `inner`.
fn shells_to_point(e: f64, inner: f64) -> Vec<f64> {
    let mut bounds = vec![inner];
    let mut w = inner - e;
    for _ in 0..80 {
        w *= 0.5;
        let next = e + w;
        if next == *bounds.last().unwrap() || next <= e {
            break;
        }
        bounds.push(next);
    }
    bounds
}

fn sum_shell_bounds<F: Fn(f64) -> f64>(
    f: &F,
    bounds: &[f64],
    cfg: &QuadratureConfig,
) -> Result<TailSum> {
    let shell_cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol * 0.25,
        max_subdivisions: cfg.max_subdivisions.max(200),
        ..cfg.clone()
    };
    let mut shells = Vec::with_capacity(bounds.len());
    for w in bounds.windows(2) {
        let (lo, hi) = if w[0] <= w[1] { (w[0], w[1]) } else { (w[1], w[0]) };
        let q = adaptive_finite(f, lo, hi, &shell_cfg)?;
        shells.push(q.value);
        // early exit once shells are clearly negligible
        if shells.len() >= 2 {
            let k = shells.len();
            if shells[k - 1].abs() < cfg.abs_tol * 0.125 && shells[k - 2].abs() < cfg.abs_tol * 0.125 {
                break;
            }
        }
    }
    Ok(classify_shells(&shells, cfg.abs_tol * 0.125))
}

/// Full-interval integral with shell handling for improper endpoints and, on
/// demand, for non-convergent finite endpoints. Internal to the entropy and
/// mass computations; `integrate` wraps it.
fn adaptive_full<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<TailSum> {
    if !(a < b) {
        return Err(Error::Domain(format!("invalid interval ({a}, {b})")));
    }

    let a_inf = a.is_infinite();
    let b_inf = b.is_infinite();

    // choose a finite core
    let (core_a, core_b) = match (a_inf, b_inf) {
        (false, false) => (a, b),
        (false, true) => (a, (a.abs().max(1.0)) * 2.0 + 2.0),
        (true, false) => (-(b.abs().max(1.0)) * 2.0 - 2.0, b),
        (true, true) => (-2.0, 2.0),
    };

    let mut value = 0.0;
    let mut extrap = 0.0;
    let mut divergent: Option<f64> = None;

    // upper tail
    if b_inf {
        let t = sum_shell_bounds(f, &shells_to_infinity(core_b), cfg)?;
        value += t.value;
        extrap += t.extrapolated;
        if t.divergent.is_some() {
            divergent = t.divergent;
        }
    }
    // lower tail (mirror through negation of the variable)
    if a_inf {
        let g = |x: f64| f(-x);
        let t = sum_shell_bounds(&g, &shells_to_infinity(-core_a), cfg)?;
        value += t.value;
        extrap += t.extrapolated;
        if let Some(s) = t.divergent {
            match divergent {
                Some(prev) if prev != s => {
                    return Err(Error::NonFinite(
                        "integral diverges with opposite signs at both endpoints".into(),
                    ))
                }
                _ => divergent = Some(s),
            }
        }
    }

    // finite core, with singular-endpoint fallback
    match adaptive_finite(f, core_a, core_b, cfg) {
        Ok(q) => value += q.value,
        Err(Error::NoConvergence { .. }) => {
            let w = (core_b - core_a) * 0.25;
            let (ia, ib) = (core_a + w, core_b - w);
            let q = adaptive_finite(f, ia, ib, cfg)?;
            value += q.value;
            let lo = sum_shell_bounds(f, &shells_to_point(core_a, ia), cfg)?;
            let hi = sum_shell_bounds(f, &shells_to_point(core_b, ib), cfg)?;
            for t in [lo, hi] {
                value += t.value;
                extrap += t.extrapolated;
                if let Some(s) = t.divergent {
                    match divergent {
                        Some(prev) if prev != s => {
                            return Err(Error::NonFinite(
                                "integral diverges with opposite signs".into(),
                            ))
                        }
                        _ => divergent = Some(s),
                    }
                }
            }
        }
        Err(e) => return Err(e),
    }

    Ok(TailSum { value, divergent, extrapolated: extrap })
}

/// Like [`integrate`] but reports a detected divergence as `+inf`/`-inf`
/// instead of failing. Serves the transform image computations, where an
/// infinite integral is an answer rather than an error.
pub(crate) fn integrate_allow_divergence<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
    if !(lo < hi) {
        return Ok(0.0);
    }
    let t = adaptive_full(&f, lo, hi, cfg)?;
    match t.divergent {
        Some(s) => Ok(sign * s * f64::INFINITY),
        None => Ok(sign * t.value),
    }
}

/// Adaptive Gauss-Kronrod integral of `f` over `(a, b)`; either endpoint may
/// be infinite. Improper tails are summed over geometrically growing shells
/// with a geometric-tail extrapolation when the decay is slow.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Quadrature> {
    cfg.validate()?;
    let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
    if !lo.is_infinite() && !hi.is_infinite() {
        let q = adaptive_finite(&f, lo, hi, cfg)?;
        return Ok(Quadrature { value: sign * q.value, ..q });
    }
    let t = adaptive_full(&f, lo, hi, cfg)?;
    if t.divergent.is_some() {
        return Err(Error::NoConvergence {
            estimate: t.value,
            error: f64::INFINITY,
            subdivisions: cfg.max_subdivisions,
        });
    }
    Ok(Quadrature {
        value: sign * t.value,
        abs_error: cfg.abs_tol.max(cfg.rel_tol * t.value.abs()) + t.extrapolated * 0.5,
        subdivisions: cfg.max_subdivisions,
    })
}

/// Threshold (in nats) beyond which the entropy integral is reported as
/// infinite rather than as a finite value.
pub const ENTROPY_DIVERGENCE_THRESHOLD: f64 = 1e6;

/// Differential entropy -int f log f over `support`, with 0 log 0 := 0.
///
/// Returns `+inf`/`-inf` when the split positive/negative parts of the
/// integral are detected as divergent (slowly decaying shells toward an
/// endpoint, or an accumulated value beyond [`ENTROPY_DIVERGENCE_THRESHOLD`]).
pub fn differential_entropy<F: Fn(f64) -> f64>(
    pdf: F,
    support: (f64, f64),
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    let (a, b) = support;
    if !(a < b) {
        return Err(Error::Domain(format!("invalid support ({a}, {b})")));
    }

    let mass = adaptive_full(&|x| pdf(x).max(0.0), a, b, cfg)?;
    if mass.divergent.is_some() {
        return Err(Error::NotADensity { integral: f64::INFINITY });
    }
    // heavy-tail mass needs the geometric extrapolation; give it more slack
    let mass_tol = if mass.extrapolated > 0.0 { 1e-3 } else { 1e-6 };
    if (mass.value - 1.0).abs() > mass_tol {
        return Err(Error::NotADensity { integral: mass.value });
    }

    let integrand = |x: f64| {
        let f = pdf(x);
        if f > 0.0 {
            -f * f.ln()
        } else {
            0.0
        }
    };
    let h = adaptive_full(&integrand, a, b, cfg)?;
    if let Some(sign) = h.divergent {
        return Ok(sign * f64::INFINITY);
    }
    if h.value.abs() > ENTROPY_DIVERGENCE_THRESHOLD {
        return Ok(h.value.signum() * f64::INFINITY);
    }
    Ok(h.value)
}

/// Which noise tail an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    /// `Pr{Z >= delta}` and the matching conditional law.
    Ge,
    /// `Pr{Z <= -delta}` and the matching conditional law.
    Le,
}

/// Tail probability of the noise: `Pr{Z >= delta}` or `Pr{Z <= -delta}`.
pub fn tail_prob(noise: &NoiseModel, delta: f64, side: TailSide) -> f64 {
    match side {
        TailSide::Ge => (1.0 - noise.cdf(delta)).clamp(0.0, 1.0),
        TailSide::Le => noise.cdf(-delta).clamp(0.0, 1.0),
    }
}

/// Entropy of the doubly truncated standard Gaussian on [a, b].
pub(crate) fn gaussian_truncated_entropy(a: f64, b: f64) -> f64 {
    let phi = |z: f64| (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let cdf = crate::channel::std_normal_cdf;
    let theta = cdf(b) - cdf(a);
    let lo_term = if a.is_finite() { a * phi(a) } else { 0.0 };
    let hi_term = if b.is_finite() { b * phi(b) } else { 0.0 };
    theta.ln() + 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln()
        + (lo_term - hi_term) / (2.0 * theta)
}

/// Differential entropy of the noise conditioned on its tail event:
/// `h(Z | Z >= delta)` or `h(Z | Z <= -delta)`.
pub fn truncated_entropy(
    noise: &NoiseModel,
    delta: f64,
    side: TailSide,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let theta = tail_prob(noise, delta, side);
    if theta <= 0.0 {
        return Err(Error::EmptyTail);
    }

    let (z_lo, z_hi) = noise.support();
    let (lo, hi) = match side {
        TailSide::Ge => (delta.max(z_lo), z_hi),
        TailSide::Le => (z_lo, (-delta).min(z_hi)),
    };
    if !(lo < hi) {
        return Err(Error::EmptyTail);
    }

    if let NoiseModel::StandardGaussian = noise {
        return Ok(match side {
            TailSide::Ge => gaussian_truncated_entropy(lo, f64::INFINITY),
            TailSide::Le => gaussian_truncated_entropy(f64::NEG_INFINITY, hi),
        });
    }
    if let NoiseModel::TruncatedGaussian { .. } = noise {
        // renormalized restriction of a Gaussian is again a truncated Gaussian
        let theta0 = crate::channel::std_normal_cdf(hi) - crate::channel::std_normal_cdf(lo);
        if theta0 <= 0.0 {
            return Err(Error::EmptyTail);
        }
        return Ok(gaussian_truncated_entropy(lo, hi));
    }

    let integrand = |z: f64| {
        let f = noise.pdf(z) / theta;
        if f > 0.0 {
            -f * f.ln()
        } else {
            0.0
        }
    };
    let q = integrate(integrand, lo, hi, cfg)?;
    Ok(q.value)
}

/// Binary entropy in nats; endpoints evaluate to 0.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("binary entropy needs p in [0,1], got {p}")));
    }
    let term = |q: f64| if q > 0.0 { -q * q.ln() } else { 0.0 };
    Ok(term(p) + term(1.0 - p))
}

const GOLDEN_INV: f64 = 0.618_033_988_749_894_9;

/// Best-effort scalar maximization on [lo, hi]: a 64-point coarse scan
/// (log-spaced when the interval is positive) followed by golden-section
/// refinement to width `1e-6 * (hi - lo)` around the best cell.
pub fn maximize_scalar<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> (f64, f64) {
    assert!(lo < hi, "maximize_scalar needs lo < hi");
    const COARSE: usize = 64;

    let grid: Vec<f64> = if lo > 0.0 {
        let (la, lb) = (lo.ln(), hi.ln());
        (0..COARSE)
            .map(|i| (la + (lb - la) * i as f64 / (COARSE - 1) as f64).exp())
            .collect()
    } else {
        (0..COARSE)
            .map(|i| lo + (hi - lo) * i as f64 / (COARSE - 1) as f64)
            .collect()
    };

    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, &x) in grid.iter().enumerate() {
        let v = f(x);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }

    let mut a = grid[best_i.saturating_sub(1)];
    let mut b = grid[(best_i + 1).min(COARSE - 1)];
    if a >= b {
        return (grid[best_i], best_v);
    }

    let width_goal = 1e-6 * (hi - lo);
    let mut x1 = b - GOLDEN_INV * (b - a);
    let mut x2 = a + GOLDEN_INV * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > width_goal {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN_INV * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN_INV * (b - a);
            f1 = f(x1);
        }
    }
    let xm = 0.5 * (a + b);
    let fm = f(xm);
    if fm >= best_v {
        (xm, fm)
    } else {
        (grid[best_i], best_v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn integrates_linear() {
        let q = integrate(|x| x, 0.0, 1.0, &cfg()).unwrap();
        assert_abs_diff_eq!(q.value, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn integrates_improper_exponential() {
        let q = integrate(|x| (-x).exp(), 0.0, f64::INFINITY, &cfg()).unwrap();
        assert_abs_diff_eq!(q.value, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn integrates_appendix_identity_negative_y() {
        // int_0^inf sqrt(2/pi) exp(-(y - v^2)^2 / (2 v^2)) dv = e^{2y} for y < 0
        let y = -0.5f64;
        let f = move |v: f64| {
            if v <= 0.0 {
                return 0.0;
            }
            let e = -(y - v * v).powi(2) / (2.0 * v * v);
            (2.0 / std::f64::consts::PI).sqrt() * e.exp()
        };
        let q = integrate(f, 0.0, f64::INFINITY, &cfg()).unwrap();
        assert_abs_diff_eq!(q.value, (-1.0f64).exp(), epsilon = 1e-6);
    }

    #[test]
    fn reversed_bounds_negate() {
        let q = integrate(|x| x * x, 1.0, 0.0, &cfg()).unwrap();
        assert_abs_diff_eq!(q.value, -1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn entropy_uniform_is_zero() {
        let h = differential_entropy(
            |x| if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 },
            (0.0, 1.0),
            &cfg(),
        )
        .unwrap();
        assert_abs_diff_eq!(h, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn entropy_standard_gaussian() {
        let f = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let h = differential_entropy(f, (f64::NEG_INFINITY, f64::INFINITY), &cfg()).unwrap();
        let expect = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln();
        assert_abs_diff_eq!(h, expect, epsilon = 1e-7);
        assert_abs_diff_eq!(expect, 1.418_938_533_204_672_7, epsilon = 1e-12);
    }

    #[test]
    fn entropy_heavy_tail_flags_plus_infinity() {
        // f(x) = 1/(x ln^2 x) on (e, inf) has infinite differential entropy
        let f = |x: f64| {
            if x > std::f64::consts::E {
                1.0 / (x * x.ln() * x.ln())
            } else {
                0.0
            }
        };
        let h = differential_entropy(f, (std::f64::consts::E, f64::INFINITY), &cfg()).unwrap();
        assert!(h.is_infinite() && h > 0.0, "expected +inf, got {h}");
    }

    #[test]
    fn entropy_rejects_non_density() {
        let err = differential_entropy(|_| 2.0, (0.0, 1.0), &cfg()).unwrap_err();
        assert!(matches!(err, Error::NotADensity { .. }));
    }

    #[test]
    fn binary_entropy_values() {
        assert_abs_diff_eq!(binary_entropy(0.5).unwrap(), std::f64::consts::LN_2, epsilon = 1e-15);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(binary_entropy(0.1).unwrap(), 0.325_082_973_391_448_3, epsilon = 1e-9);
        assert!(binary_entropy(1.5).is_err());
    }

    #[test]
    fn maximize_quadratic_and_sine() {
        let (x, _) = maximize_scalar(|x| -(x - 2.0) * (x - 2.0), 0.0, 5.0);
        assert_abs_diff_eq!(x, 2.0, epsilon = 1e-5);
        let (x, v) = maximize_scalar(|x| x.sin(), 0.0, std::f64::consts::PI);
        assert_abs_diff_eq!(x, std::f64::consts::FRAC_PI_2, epsilon = 1e-5);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn maximizer_beats_random_probes() {
        use rand::{Rng, SeedableRng};
        let f = |x: f64| (x * 1.7).sin() + 0.3 * (x * 0.31).cos() - 0.01 * x * x;
        let (_, fmax) = maximize_scalar(f, -4.0, 9.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let x = rng.gen_range(-4.0..9.0);
            assert!(fmax >= f(x) - 1e-9);
        }
    }

    proptest::proptest! {
        // dyadic p keeps 1 - p exactly representable, so symmetry is bitwise
        #[test]
        fn binary_entropy_symmetric(k in 0u32..=4096) {
            let p = k as f64 / 4096.0;
            let a = binary_entropy(p).unwrap();
            let b = binary_entropy(1.0 - p).unwrap();
            proptest::prop_assert_eq!(a, b);
        }

        #[test]
        fn integrate_is_linear(
            c0 in -3.0f64..3.0, c1 in -3.0f64..3.0, c2 in -3.0f64..3.0,
            d0 in -3.0f64..3.0, d1 in -3.0f64..3.0,
            a in -2.0f64..2.0, b in -2.0f64..2.0,
        ) {
            let cfg = QuadratureConfig::default();
            let f = move |x: f64| c0 + c1 * x + c2 * x * x;
            let g = move |x: f64| d0 + d1 * x;
            let fa = integrate(f, 0.0, 1.0, &cfg).unwrap().value;
            let ga = integrate(g, 0.0, 1.0, &cfg).unwrap().value;
            let combined = integrate(move |x| a * f(x) + b * g(x), 0.0, 1.0, &cfg).unwrap().value;
            proptest::prop_assert!((combined - (a * fa + b * ga)).abs() <= 3.0 * cfg.abs_tol);
        }
    }
}
