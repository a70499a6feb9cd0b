//! Ground-truth numerical capacity of a discretized channel via constrained
//! Blahut-Arimoto, plus a Monte Carlo plug-in mutual-information cross-check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{ChannelSpec, Constraint, InputDist};
use crate::error::{Error, Result};
use crate::quad::QuadratureConfig;

/// Output-range truncation in noise standard deviations: the Gaussian tail
/// mass beyond 8 sigma is below 1e-15 per row.
pub const DEFAULT_TRUNCATION_SIGMAS: f64 = 8.0;

/// Input/output grids with a row-stochastic transition matrix.
#[derive(Debug, Clone)]
pub struct DiscretizedChannel {
    pub x_grid: Vec<f64>,
    pub y_grid: Vec<f64>,
    /// Row-major n x m transition probabilities; every row sums to 1.
    w: Vec<f64>,
}

impl DiscretizedChannel {
    /// Uniform n-point input grid on the (bounded) support, m-point output
    /// grid covering every input's `k`-sigma noise range.
    pub fn discretize(spec: &ChannelSpec, n: usize, m: usize, k: f64) -> Result<Self> {
        let (l, u) = spec.effective_support();
        if !(l.is_finite() && u.is_finite()) {
            return Err(Error::UnboundedSupport);
        }
        if n < 2 {
            return Err(Error::Domain("need at least 2 input points".into()));
        }
        let xs: Vec<f64> = (0..n).map(|i| l + (u - l) * i as f64 / (n - 1) as f64).collect();
        Self::from_points(spec, &xs, m, k)
    }

    /// Same construction on caller-chosen input points (used to evaluate
    /// exact mutual information of specific discrete inputs).
    pub fn from_points(spec: &ChannelSpec, xs: &[f64], m: usize, k: f64) -> Result<Self> {
        if xs.len() < 2 || m < 2 {
            return Err(Error::Domain("need n, m >= 2".into()));
        }
        let (z_lo, z_hi) = spec.noise().truncation_range(k);
        let mut y_lo = f64::INFINITY;
        let mut y_hi = f64::NEG_INFINITY;
        for &x in xs {
            let s = spec.sigma().value(x)?;
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::Domain(format!(
                    "sigma({x}) = {s}; choose grid points where sigma is positive"
                )));
            }
            y_lo = y_lo.min(x + s * z_lo);
            y_hi = y_hi.max(x + s * z_hi);
        }
        let ys: Vec<f64> =
            (0..m).map(|j| y_lo + (y_hi - y_lo) * j as f64 / (m - 1) as f64).collect();

        let mut w = vec![0.0; xs.len() * m];
        for (i, &x) in xs.iter().enumerate() {
            let row = &mut w[i * m..(i + 1) * m];
            let mut total = 0.0;
            for (j, &y) in ys.iter().enumerate() {
                let f = spec.conditional_density(x, y)?;
                row[j] = f;
                total += f;
            }
            if !(total > 0.0) {
                return Err(Error::Domain(format!("transition row at x = {x} has no mass")));
            }
            for v in row.iter_mut() {
                *v /= total;
            }
        }
        Ok(Self { x_grid: xs.to_vec(), y_grid: ys, w })
    }

    pub fn n(&self) -> usize {
        self.x_grid.len()
    }

    pub fn m(&self) -> usize {
        self.y_grid.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.w[i * self.m()..(i + 1) * self.m()]
    }
}

/// Capacity estimate with the Blahut-Arimoto duality-gap certificate.
#[derive(Debug, Clone, Serialize)]
pub struct CapacityEstimate {
    /// Mutual information at the returned input pmf, in nats.
    pub value: f64,
    pub pmf: Vec<f64>,
    pub iterations: usize,
    /// max_i D(W_i || q) - I at termination (Lagrangian-adjusted when a
    /// constraint multiplier is active); a valid upper-minus-lower
    /// certificate for the discretized problem.
    pub gap: f64,
    /// Lagrange multiplier of the active expectation constraint, if any.
    pub multiplier: Option<f64>,
    /// E[g(X)] at the returned pmf for the active constraint, if any.
    pub constraint_slack: Option<f64>,
}

struct BaRun {
    info: f64,
    gap: f64,
    iterations: usize,
    converged: bool,
}

/// One full alphabet pass: output law q, per-letter divergences D_i, mutual
/// information, and the duality gap of the (Lagrangian-adjusted) problem.
/// The gap is a valid optimality certificate for any pmf.
struct Pass {
    d: Vec<f64>,
    q: Vec<f64>,
    info: f64,
    gap: f64,
    max_adj: f64,
}

fn full_pass(ch: &DiscretizedChannel, cost: Option<&[f64]>, multiplier: f64, pmf: &[f64]) -> Pass {
    let n = ch.n();
    let m = ch.m();
    let mut q = vec![0.0; m];
    for i in 0..n {
        let p = pmf[i];
        if p > 0.0 {
            for (j, &wij) in ch.row(i).iter().enumerate() {
                q[j] += p * wij;
            }
        }
    }
    let mut d = vec![0.0; n];
    for (i, di) in d.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, &wij) in ch.row(i).iter().enumerate() {
            if wij > 0.0 && q[j] > 0.0 {
                acc += wij * (wij / q[j]).ln();
            }
        }
        *di = acc;
    }
    let adj = |i: usize| d[i] - multiplier * cost.map_or(0.0, |c| c[i]);
    let mut max_adj = f64::NEG_INFINITY;
    let mut mean_adj = 0.0;
    let mut info = 0.0;
    for i in 0..n {
        let a = adj(i);
        max_adj = max_adj.max(a);
        if pmf[i] > 0.0 {
            mean_adj += pmf[i] * a;
            info += pmf[i] * d[i];
        }
    }
    Pass { d, q, info, gap: max_adj - mean_adj, max_adj }
}

/// Plain multiplicative Blahut-Arimoto iterations with a mild adaptive
/// overrelaxation; runs until the gap certificate meets `tol` or the budget
/// is spent, returning the last state either way.
fn ba_iterate(
    ch: &DiscretizedChannel,
    cost: Option<&[f64]>,
    multiplier: f64,
    tol: f64,
    budget: usize,
    pmf: &mut [f64],
) -> BaRun {
    let n = ch.n();
    let mut gamma = 1.0f64;
    let mut prev_gap = f64::INFINITY;
    let mut last = BaRun { info: 0.0, gap: f64::INFINITY, iterations: 0, converged: false };

    for iter in 1..=budget {
        let pass = full_pass(ch, cost, multiplier, pmf);
        last = BaRun { info: pass.info, gap: pass.gap, iterations: iter, converged: pass.gap <= tol };
        if last.converged {
            return last;
        }
        if pass.gap <= prev_gap {
            gamma = (gamma * 1.15).min(64.0);
        } else {
            gamma = (gamma * 0.5).max(1.0);
        }
        prev_gap = pass.gap;

        // p_i <- p_i exp(gamma (D_i - s g_i)), normalized; the floor keeps
        // letters revivable after being squeezed out under another
        // multiplier and biases the result by well under 1e-14
        let adj = |i: usize| pass.d[i] - multiplier * cost.map_or(0.0, |c| c[i]);
        let mut z = 0.0;
        for i in 0..n {
            pmf[i] = (pmf[i] * (gamma * (adj(i) - pass.max_adj)).exp()).max(1e-18);
            z += pmf[i];
        }
        for p in pmf.iter_mut() {
            *p /= z;
        }
    }
    last
}

/// Solve the dense symmetric-ish linear system by Gaussian elimination with
/// partial pivoting; returns None when effectively singular.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let (piv, max) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if !(max > 1e-13) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in (col + 1)..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in (r + 1)..n {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    Some(x)
}

/// Newton polish of the KKT system on the current support: equalize the
/// adjusted divergences D_i - s g_i over the letters carrying mass, subject
/// to normalization. Quadratically sharpens what the multiplicative update
/// equalizes at a crawl when adjacent grid letters are nearly tied.
/// Returns the number of full-pass-equivalent evaluations spent.
fn newton_polish(
    ch: &DiscretizedChannel,
    cost: Option<&[f64]>,
    multiplier: f64,
    pmf: &mut [f64],
) -> usize {
    const MAX_SUPPORT: usize = 300;
    const ROUNDS: usize = 40;
    let n = ch.n();
    let m = ch.m();
    let mut spent = 0;

    for _ in 0..ROUNDS {
        let support: Vec<usize> = (0..n).filter(|&i| pmf[i] > 1e-12).collect();
        let k = support.len();
        if k < 1 || k > MAX_SUPPORT {
            return spent;
        }

        let pass = full_pass(ch, cost, multiplier, pmf);
        spent += 1;
        let adj = |i: usize| pass.d[i] - multiplier * cost.map_or(0.0, |c| c[i]);
        let nu: f64 = support.iter().map(|&i| pmf[i] * adj(i)).sum::<f64>()
            / support.iter().map(|&i| pmf[i]).sum::<f64>();

        // residuals and the bordered Jacobian A_ik = sum_j W_ij W_kj / q_j
        let mut mat = vec![vec![0.0; k + 1]; k + 1];
        let mut rhs = vec![0.0; k + 1];
        for (r, &i) in support.iter().enumerate() {
            rhs[r] = adj(i) - nu;
            mat[r][k] = 1.0;
        }
        for (r, &i) in support.iter().enumerate() {
            for (c, &kk) in support.iter().enumerate().skip(r) {
                let mut acc = 0.0;
                let row_i = ch.row(i);
                let row_k = ch.row(kk);
                for j in 0..m {
                    let qj = pass.q[j];
                    if qj > 0.0 {
                        acc += row_i[j] * row_k[j] / qj;
                    }
                }
                mat[r][c] = acc;
                mat[c][r] = acc;
            }
            mat[r][r] += 1e-12;
        }
        spent += (k * k) / n.max(1) + 1;
        let total: f64 = support.iter().map(|&i| pmf[i]).sum();
        rhs[k] = 1.0 - total;
        for (c, _) in support.iter().enumerate() {
            mat[k][c] = 1.0;
        }

        let Some(delta) = solve_dense(mat, rhs) else { return spent };

        // pre-step residual; a full step from tiny residuals means done
        let resid = support.iter().map(|&i| (adj(i) - nu).abs()).fold(0.0f64, f64::max);

        // keep the step inside the positive orthant
        let mut lambda: f64 = 1.0;
        for (r, &i) in support.iter().enumerate() {
            if delta[r] < 0.0 {
                lambda = lambda.min(-0.95 * pmf[i] / delta[r]);
            }
        }
        for (r, &i) in support.iter().enumerate() {
            pmf[i] = (pmf[i] + lambda * delta[r]).max(0.0);
        }
        // prune letters the step extinguished
        for &i in &support {
            if pmf[i] < 1e-14 {
                pmf[i] = 0.0;
            }
        }
        let z: f64 = pmf.iter().sum();
        for p in pmf.iter_mut() {
            *p /= z;
        }
        if lambda >= 1.0 && resid < 1e-12 {
            return spent;
        }
    }
    spent
}

/// Fixed-multiplier capacity solve: multiplicative warmup, then active-set
/// Newton rounds with certificate passes, growing the support whenever an
/// off-support letter violates optimality; falls back to plain iterations if
/// the polish stalls.
fn solve_fixed(
    ch: &DiscretizedChannel,
    cost: Option<&[f64]>,
    multiplier: f64,
    tol: f64,
    max_iter: usize,
    pmf: &mut [f64],
) -> Result<BaRun> {
    let n = ch.n();
    let warmup = 400.min(max_iter);
    let mut run = ba_iterate(ch, cost, multiplier, tol, warmup, pmf);
    let mut used = run.iterations;
    if run.converged {
        return Ok(run);
    }

    for _ in 0..60 {
        if used >= max_iter {
            break;
        }
        used += newton_polish(ch, cost, multiplier, pmf);

        let pass = full_pass(ch, cost, multiplier, pmf);
        used += 1;
        run = BaRun { info: pass.info, gap: pass.gap, iterations: used, converged: pass.gap <= tol };
        if run.converged {
            return Ok(run);
        }

        // admit every letter that beats the supported level, then re-smooth
        let adj = |i: usize| pass.d[i] - multiplier * cost.map_or(0.0, |c| c[i]);
        let mut z = 0.0;
        for i in 0..n {
            if adj(i) > pass.max_adj - 0.1 * tol && pmf[i] < 1e-9 {
                pmf[i] = 1e-9;
            }
            z += pmf[i];
        }
        for p in pmf.iter_mut() {
            *p /= z;
        }
        let smooth = ba_iterate(ch, cost, multiplier, tol, 50.min(max_iter - used.min(max_iter)), pmf);
        used += smooth.iterations;
        if smooth.converged {
            return Ok(BaRun { iterations: used, ..smooth });
        }
    }

    // correctness net: plain iterations with whatever budget remains
    if used < max_iter {
        let rest = ba_iterate(ch, cost, multiplier, tol, max_iter - used, pmf);
        used += rest.iterations;
        run = BaRun { iterations: used, ..rest };
    }
    Ok(run)
}

/// Capacity of the discretized channel by Blahut-Arimoto, optionally under a
/// single expectation constraint (mean or power) enforced through bisection
/// on its Lagrange multiplier.
pub fn blahut_arimoto(
    ch: &DiscretizedChannel,
    constraints: &[Constraint],
    tol: f64,
    max_iter: usize,
) -> Result<CapacityEstimate> {
    let active: Vec<&Constraint> =
        constraints.iter().filter(|c| !matches!(c, Constraint::Peak(_))).collect();
    if active.len() > 1 {
        return Err(Error::UnsupportedConstraintCombination(
            "blahut-arimoto supports at most one expectation constraint".into(),
        ));
    }

    let n = ch.n();
    let uniform = vec![1.0 / n as f64; n];

    let cost: Option<Vec<f64>> =
        active.first().map(|c| ch.x_grid.iter().map(|&x| c.g(x)).collect());

    let mut pmf = uniform.clone();
    let run = solve_fixed(ch, cost.as_deref(), 0.0, tol, max_iter, &mut pmf)?;
    if !run.converged {
        return Err(Error::BaNoConvergence { max_iter });
    }

    let slack = |p: &[f64]| -> f64 {
        cost.as_ref().map(|c| p.iter().zip(c).map(|(pi, gi)| pi * gi).sum()).unwrap_or(0.0)
    };

    let Some(cost_vec) = cost.as_deref() else {
        return Ok(CapacityEstimate {
            value: run.info,
            pmf,
            iterations: run.iterations,
            gap: run.gap,
            multiplier: None,
            constraint_slack: None,
        });
    };

    // constraint slack at the unconstrained optimum: done if already feasible
    const SLACK_TOL: f64 = 1e-4;
    let s0 = slack(&pmf);
    if s0 <= SLACK_TOL {
        return Ok(CapacityEstimate {
            value: run.info,
            pmf,
            iterations: run.iterations,
            gap: run.gap,
            multiplier: Some(0.0),
            constraint_slack: Some(s0),
        });
    }
    let mut total_iters = run.iterations;

    // cheap cold probe of the constraint slack at a trial multiplier; only
    // the sign matters here, so a capped run is enough
    let probe_cap = 4000.min(max_iter);
    let probe = |s: f64, iters: &mut usize| -> Result<f64> {
        let mut p = uniform.clone();
        let r = solve_fixed(ch, Some(cost_vec), s, tol.max(1e-5), probe_cap, &mut p)?;
        *iters += r.iterations;
        Ok(slack(&p))
    };

    // bracket the critical multiplier with capped probes
    let mut lo = 0.0;
    let mut hi = 1.0;
    for _ in 0..60 {
        if probe(hi, &mut total_iters)? <= 0.0 {
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if probe(mid, &mut total_iters)? <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo) < 1e-9 * hi.max(1.0) {
            break;
        }
    }

    // full-tolerance solves from the feasible side; keep the last feasible
    // solution and tighten toward the critical multiplier until the
    // constraint is tight to within SLACK_TOL (or the bracket collapses)
    let mut feasible: Option<(Vec<f64>, BaRun, f64)> = None;
    let mut s = hi;
    for _ in 0..30 {
        let mut p = uniform.clone();
        let r = solve_fixed(ch, Some(cost_vec), s, tol, max_iter, &mut p)?;
        total_iters += r.iterations;
        let sl = slack(&p);
        if r.converged && sl <= 0.0 {
            let tight = sl.abs() <= SLACK_TOL;
            hi = s;
            feasible = Some((p, r, s));
            if tight {
                break;
            }
        } else {
            lo = s;
        }
        if (hi - lo) < 1e-12 * hi.max(1.0) {
            break;
        }
        s = 0.5 * (lo + hi);
    }

    let Some((best, run, s_star)) = feasible else {
        return Err(Error::BaNoConvergence { max_iter });
    };
    Ok(CapacityEstimate {
        value: run.info,
        pmf: best.clone(),
        iterations: total_iters,
        gap: run.gap,
        multiplier: Some(s_star),
        constraint_slack: Some(slack(&best)),
    })
}

/// I(X;Y) of the discretized channel at a given input pmf.
pub fn mutual_information(ch: &DiscretizedChannel, pmf: &[f64]) -> f64 {
    let m = ch.m();
    let mut q = vec![0.0; m];
    for (i, &p) in pmf.iter().enumerate() {
        if p > 0.0 {
            for (j, &wij) in ch.row(i).iter().enumerate() {
                q[j] += p * wij;
            }
        }
    }
    let mut info = 0.0;
    for (i, &p) in pmf.iter().enumerate() {
        if p > 0.0 {
            for (j, &wij) in ch.row(i).iter().enumerate() {
                if wij > 0.0 && q[j] > 0.0 {
                    info += p * wij * (wij / q[j]).ln();
                }
            }
        }
    }
    info
}

/// Plug-in Monte Carlo mutual information: sample (X, Y) pairs through the
/// channel, estimate f_Y as a mixture over a reference input sample, and
/// average log f_{Y|X}/f_Y. Returns (estimate, standard error) with the
/// standard error taken over batches.
pub fn mc_mutual_information(
    spec: &ChannelSpec,
    input: &InputDist,
    n_samples: usize,
    seed: u64,
    _cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    if n_samples < 100 {
        return Err(Error::Domain("need at least 100 samples".into()));
    }
    let sampler = input.sampler()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // reference sample for the mixture estimate of f_Y
    let mix_size = n_samples.min(4000);
    let mix: Vec<f64> = (0..mix_size).map(|_| sampler.sample(&mut rng)).collect();

    const BATCHES: usize = 20;
    let per_batch = n_samples / BATCHES;
    let mut batch_means = Vec::with_capacity(BATCHES);
    for _ in 0..BATCHES {
        let mut acc = 0.0;
        for _ in 0..per_batch {
            let x = sampler.sample(&mut rng);
            let y = spec.sample(x, &mut rng)?;
            let f_cond = spec.conditional_density(x, y)?;
            let mut f_y = 0.0;
            for &xm in &mix {
                f_y += spec.conditional_density(xm, y).unwrap_or(0.0);
            }
            f_y /= mix.len() as f64;
            if f_cond > 0.0 && f_y > 0.0 {
                acc += (f_cond / f_y).ln();
            }
        }
        batch_means.push(acc / per_batch as f64);
    }
    let mean = batch_means.iter().sum::<f64>() / BATCHES as f64;
    let var =
        batch_means.iter().map(|b| (b - mean) * (b - mean)).sum::<f64>() / (BATCHES as f64 - 1.0);
    let stderr = (var / BATCHES as f64).sqrt();
    Ok((mean, stderr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{NoiseModel, SigmaFamily, SigmaProfile};
    use approx::assert_abs_diff_eq;

    fn gauss_spec(family: SigmaFamily, support: (f64, f64), constraints: Vec<Constraint>) -> ChannelSpec {
        let sigma = SigmaProfile::new(family, support, None).unwrap();
        ChannelSpec::new(sigma, NoiseModel::StandardGaussian, support, constraints).unwrap()
    }

    /// Hand-built channel matrix for oracle self-tests.
    fn synthetic(w: Vec<f64>, n: usize, m: usize) -> DiscretizedChannel {
        DiscretizedChannel {
            x_grid: (0..n).map(|i| i as f64).collect(),
            y_grid: (0..m).map(|j| j as f64).collect(),
            w,
        }
    }

    #[test]
    fn rows_are_normalized_and_centered() {
        let spec = gauss_spec(SigmaFamily::SqrtAffine { c0_sq: 1.0, c1_sq: 1.0 }, (0.0, 5.0), vec![]);
        let ch = DiscretizedChannel::discretize(&spec, 64, 512, 8.0).unwrap();
        for i in 0..ch.n() {
            let sum: f64 = ch.row(i).iter().sum();
            assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-9);
            assert!(ch.row(i).iter().all(|v| *v >= 0.0));
            // row mean tracks the input point
            let mean: f64 = ch.row(i).iter().zip(&ch.y_grid).map(|(w, y)| w * y).sum();
            assert_abs_diff_eq!(mean, ch.x_grid[i], epsilon = 1e-2);
        }
    }

    #[test]
    fn near_noiseless_rows_are_concentrated() {
        let spec = gauss_spec(SigmaFamily::Constant { c: 1e-3 }, (0.0, 1.0), vec![]);
        let ch = DiscretizedChannel::discretize(&spec, 16, 1024, 8.0).unwrap();
        for i in 0..ch.n() {
            let peak = ch.row(i).iter().cloned().fold(0.0f64, f64::max);
            assert!(peak > 0.2, "row {i} not concentrated");
        }
    }

    #[test]
    fn unbounded_support_is_rejected() {
        let spec = gauss_spec(
            SigmaFamily::Constant { c: 1.0 },
            (f64::NEG_INFINITY, f64::INFINITY),
            vec![],
        );
        assert!(matches!(
            DiscretizedChannel::discretize(&spec, 8, 64, 8.0),
            Err(Error::UnboundedSupport)
        ));
    }

    #[test]
    fn identity_channel_capacity_log_n() {
        for n in [2usize, 4, 7] {
            let mut w = vec![0.0; n * n];
            for i in 0..n {
                w[i * n + i] = 1.0;
            }
            let ch = synthetic(w, n, n);
            let est = blahut_arimoto(&ch, &[], 1e-10, 100_000).unwrap();
            assert_abs_diff_eq!(est.value, (n as f64).ln(), epsilon = 1e-9);
            assert!(est.gap <= 1e-10);
        }
    }

    #[test]
    fn bsc_capacity_closed_form() {
        let eps = 0.1;
        let ch = synthetic(vec![1.0 - eps, eps, eps, 1.0 - eps], 2, 2);
        let est = blahut_arimoto(&ch, &[], 1e-9, 100_000).unwrap();
        let expect = std::f64::consts::LN_2 - crate::quad::binary_entropy(eps).unwrap();
        assert_abs_diff_eq!(expect, 0.368_064, epsilon = 1e-6);
        assert_abs_diff_eq!(est.value, expect, epsilon = 1e-9);
    }

    #[test]
    fn ba_value_nondecreasing_in_input_grid() {
        let spec = gauss_spec(SigmaFamily::SqrtAffine { c0_sq: 1.0, c1_sq: 1.0 }, (0.0, 5.0), vec![]);
        let mut prev = 0.0;
        for n in [16, 32, 64, 128] {
            let ch = DiscretizedChannel::discretize(&spec, n, 512, 8.0).unwrap();
            let est = blahut_arimoto(&ch, &[], 1e-7, 100_000).unwrap();
            assert!(
                est.value >= prev - 1e-6,
                "BA value decreased: {} -> {} at n = {n}",
                prev,
                est.value
            );
            prev = est.value;
        }
    }

    #[test]
    fn mean_constraint_binds() {
        let spec = gauss_spec(
            SigmaFamily::SqrtAffine { c0_sq: 1.0, c1_sq: 1.0 },
            (0.0, 5.0),
            vec![Constraint::Mean(1.0)],
        );
        let ch = DiscretizedChannel::discretize(&spec, 64, 512, 8.0).unwrap();
        let free = blahut_arimoto(&ch, &[], 1e-7, 100_000).unwrap();
        let capped = blahut_arimoto(&ch, spec.constraints(), 1e-7, 100_000).unwrap();
        let mean: f64 = capped.pmf.iter().zip(&ch.x_grid).map(|(p, x)| p * x).sum();
        assert!(mean <= 1.0 + 1e-4, "mean {mean}");
        assert!(capped.value <= free.value + 1e-9);
        assert!(capped.value > 0.0);
        assert!(capped.gap <= 1e-7);
    }

    #[test]
    fn point_mass_mutual_information_zero() {
        let spec = gauss_spec(SigmaFamily::Constant { c: 1.0 }, (0.0, 1.0), vec![]);
        let ch = DiscretizedChannel::discretize(&spec, 8, 128, 8.0).unwrap();
        let mut pmf = vec![0.0; 8];
        pmf[3] = 1.0;
        assert_abs_diff_eq!(mutual_information(&ch, &pmf), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn uniform_on_identity_gives_log_n() {
        let n = 4;
        let mut w = vec![0.0; n * n];
        for i in 0..n {
            w[i * n + i] = 1.0;
        }
        let ch = synthetic(w, n, n);
        let pmf = vec![0.25; 4];
        assert_abs_diff_eq!(mutual_information(&ch, &pmf), 4.0f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn suboptimal_input_below_capacity() {
        let spec = gauss_spec(SigmaFamily::SqrtAffine { c0_sq: 1.0, c1_sq: 1.0 }, (0.0, 5.0), vec![]);
        let ch = DiscretizedChannel::discretize(&spec, 64, 512, 8.0).unwrap();
        let est = blahut_arimoto(&ch, &[], 1e-7, 100_000).unwrap();
        // two-point input on the grid endpoints
        let mut pmf = vec![0.0; 64];
        pmf[0] = 0.5;
        pmf[63] = 0.5;
        let mi = mutual_information(&ch, &pmf);
        assert!(mi <= est.value + 1e-9);
    }

    #[test]
    fn mc_mutual_information_point_mass_is_zero() {
        let spec = gauss_spec(SigmaFamily::Constant { c: 1.0 }, (0.0, 1.0), vec![]);
        let (mi, se) = mc_mutual_information(
            &spec,
            &InputDist::point_mass(0.5),
            2000,
            7,
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(mi, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(se, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn mc_matches_awgn_closed_form() {
        // AWGN with a truncated Gaussian input of variance 100:
        // I approx (1/2) log(101) up to truncation and estimator bias
        let spec = gauss_spec(SigmaFamily::Constant { c: 1.0 }, (-30.0, 30.0), vec![]);
        let sd = 10.0;
        let input = InputDist::from_pdf(
            move |x: f64| {
                if (-30.0..=30.0).contains(&x) {
                    (-0.5 * (x / sd) * (x / sd)).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
                } else {
                    0.0
                }
            },
            (-30.0, 30.0),
        );
        let (mi, se) =
            mc_mutual_information(&spec, &input, 30_000, 11, &QuadratureConfig::default()).unwrap();
        let expect = 0.5 * 101.0f64.ln();
        assert!((mi - expect).abs() <= 3.0 * se + 0.03, "mi {mi} expect {expect} se {se}");
    }
}
