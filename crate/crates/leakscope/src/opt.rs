//! Internal numeric building blocks: log-domain accumulation, projection
//! onto box-constrained simplices, and a small projected-gradient ascent
//! loop for maximizing black-box objectives over the probability simplex.
//!
//! Nothing here is exported; the public modules wrap these with their own
//! contracts and tolerances.

/// log(sum(exp(v))) with the usual max-shift stabilization. Empty input and
/// all-(-inf) input give -inf; a +inf entry gives +inf.
pub(crate) fn log_sum_exp(vals: &[f64]) -> f64 {
    let m = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m.is_infinite() {
        return m;
    }
    let sum: f64 = vals.iter().map(|v| (v - m).exp()).sum();
    m + sum.ln()
}

/// Euclidean projection onto { x : 0 <= x_i <= cap, sum x_i = total }.
///
/// The projection is clamp(v - shift, 0, cap) for the unique shift making
/// the total come out right; the shift is located by bisection to an
/// absolute tolerance of 1e-14. Requires 0 <= total <= n * cap.
pub(crate) fn project_capped_simplex(v: &[f64], cap: f64, total: f64) -> Vec<f64> {
    debug_assert!(total >= 0.0 && total <= cap * v.len() as f64 + 1e-9);
    let sum_at = |shift: f64| -> f64 { v.iter().map(|&vi| (vi - shift).clamp(0.0, cap)).sum() };
    // sum_at is nonincreasing in the shift; these bounds bracket `total`.
    let mut lo = v.iter().cloned().fold(f64::INFINITY, f64::min) - cap;
    let mut hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        hi = lo + 1.0;
    }
    let mut iters = 0;
    while hi - lo > 1e-14 && iters < 200 {
        let mid = 0.5 * (lo + hi);
        if sum_at(mid) > total {
            lo = mid;
        } else {
            hi = mid;
        }
        iters += 1;
    }
    let shift = 0.5 * (lo + hi);
    v.iter().map(|&vi| (vi - shift).clamp(0.0, cap)).collect()
}

/// Central-difference gradient. The objective must tolerate probes slightly
/// outside the feasible set (callers clamp inside their closures).
pub(crate) fn numeric_gradient(obj: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        let h = 1e-7 * (1.0 + x[i].abs());
        probe[i] = x[i] + h;
        let up = obj(&probe);
        probe[i] = x[i] - h;
        let down = obj(&probe);
        probe[i] = x[i];
        g[i] = (up - down) / (2.0 * h);
    }
    g
}

/// First-order optimality residual for maximizing over the simplex: on the
/// active set the gradient must be constant, off it no larger. Returns the
/// worst violation.
pub(crate) fn simplex_stationarity_residual(x: &[f64], grad: &[f64]) -> f64 {
    let active: Vec<usize> = (0..x.len()).filter(|&i| x[i] > 1e-9).collect();
    if active.is_empty() {
        return f64::INFINITY;
    }
    let lambda: f64 = active.iter().map(|&i| grad[i]).sum::<f64>() / active.len() as f64;
    let mut residual: f64 = 0.0;
    for i in 0..x.len() {
        if x[i] > 1e-9 {
            residual = residual.max((grad[i] - lambda).abs());
        } else {
            residual = residual.max((grad[i] - lambda).max(0.0));
        }
    }
    residual
}

pub(crate) struct AscentResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub stationarity_residual: f64,
}

/// Projected-gradient ascent of `obj` over the probability simplex from a
/// single start. Backtracking line search; stops when the relative objective
/// improvement falls below `tol` twice in a row or after `max_iter` rounds.
pub(crate) fn ascend_on_simplex(
    obj: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    tol: f64,
    max_iter: usize,
) -> AscentResult {
    let mut x = project_capped_simplex(start, 1.0, 1.0);
    let mut fx = obj(&x);
    let mut step = 0.5;
    let mut small_steps = 0;
    let mut grad = numeric_gradient(obj, &x);
    for _ in 0..max_iter {
        let mut improved = false;
        let mut trial_step = step;
        for _ in 0..40 {
            let proposal: Vec<f64> = x
                .iter()
                .zip(&grad)
                .map(|(&xi, &gi)| xi + trial_step * gi)
                .collect();
            let candidate = project_capped_simplex(&proposal, 1.0, 1.0);
            let fc = obj(&candidate);
            if fc > fx {
                let gain = fc - fx;
                x = candidate;
                fx = fc;
                // Grow the step after an easy success, keep it otherwise.
                step = (trial_step * 1.5).min(10.0);
                improved = true;
                if gain < tol * (1.0 + fx.abs()) {
                    small_steps += 1;
                } else {
                    small_steps = 0;
                }
                break;
            }
            trial_step *= 0.5;
            if trial_step < 1e-16 {
                break;
            }
        }
        if !improved {
            break;
        }
        if small_steps >= 2 {
            break;
        }
        grad = numeric_gradient(obj, &x);
    }
    grad = numeric_gradient(obj, &x);
    let stationarity_residual = simplex_stationarity_residual(&x, &grad);
    AscentResult {
        x,
        value: fx,
        stationarity_residual,
    }
}
