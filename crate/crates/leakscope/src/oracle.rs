//! Independent cross-check oracles.
//!
//! Everything here recomputes a quantity the main modules obtain in closed
//! form, by a deliberately different route: explicit channel constructions,
//! brute-force grids, projected gradient descent on the raw objective, and a
//! phase-1 simplex feasibility solve. Oracles never call the closed forms
//! they exist to certify, so an agreement between the two routes is evidence
//! rather than tautology.

use crate::error::Error;
use crate::gain::{validate_hypotheses, ConditionSet, GainFamily};
use crate::info::{arimoto_mi, shannon_entropy, Nats};
use crate::opt::{ascend_on_simplex, project_capped_simplex};
use crate::prob::{joint_from, Alphabet, Channel, OrderAlpha, Pmf};
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Hard cap on materialized auxiliary alphabets (total blocks).
pub const MAX_BLOCKS: usize = 10_000;

/// Per-letter block counts for splitting an input alphabet into an auxiliary
/// one. Letter x is replaced by `blocks[x]` copies that share its mass
/// uniformly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShatterConfig {
    blocks: Vec<usize>,
}

impl ShatterConfig {
    /// Every count must be at least 1 and the total may not exceed
    /// [`MAX_BLOCKS`] (these configs get materialized as channels).
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if blocks.contains(&0) {
            return Err(Error::InvalidSplit(
                "every letter needs at least one block".into(),
            ));
        }
        let total: usize = blocks.iter().sum();
        if total > MAX_BLOCKS {
            return Err(Error::OracleTooLarge(format!(
                "{total} blocks requested; materialization cap is {MAX_BLOCKS}"
            )));
        }
        Ok(ShatterConfig { blocks })
    }

    /// m blocks for every letter.
    pub fn uniform(n: usize, m: usize) -> Result<Self> {
        ShatterConfig::new(vec![m; n])
    }

    /// One block for the distinguished letter, m for every other.
    pub fn distinguished_rest(n: usize, star: usize, m: usize) -> Result<Self> {
        if star >= n {
            return Err(Error::InvalidSplit(format!(
                "distinguished index {star} out of range for {n} letters"
            )));
        }
        let mut blocks = vec![m; n];
        blocks[star] = 1;
        ShatterConfig::new(blocks)
    }

    /// m blocks for the distinguished letter, one for every other.
    pub fn distinguished_only(n: usize, star: usize, m: usize) -> Result<Self> {
        if star >= n {
            return Err(Error::InvalidSplit(format!(
                "distinguished index {star} out of range for {n} letters"
            )));
        }
        let mut blocks = vec![1; n];
        blocks[star] = m;
        ShatterConfig::new(blocks)
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn total(&self) -> usize {
        self.blocks.iter().sum()
    }
}

/// Channel from X to the auxiliary alphabet U that splits letter x uniformly
/// over its `blocks[x]` copies. With all counts 1 this is the identity up to
/// symbol renaming; pushing a pmf through it divides each mass by its block
/// count.
pub fn shattered_channel(x: &Alphabet, cfg: &ShatterConfig) -> Result<Channel> {
    if cfg.blocks.len() != x.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: cfg.blocks.len(),
        });
    }
    let total = cfg.total();
    let mut symbols = Vec::with_capacity(total);
    for (i, &b) in cfg.blocks.iter().enumerate() {
        for j in 0..b {
            symbols.push(format!("{}:{j}", x.symbol(i)));
        }
    }
    let u = Alphabet::new(symbols)?;
    let mut rows = Vec::with_capacity(x.len());
    let mut offset = 0;
    for &b in &cfg.blocks {
        let mut row = vec![0.0; total];
        for j in 0..b {
            row[offset + j] = 1.0 / b as f64;
        }
        rows.push(row);
        offset += b;
    }
    Channel::new(x.clone(), u, rows)
}

/// Index maximizing p(x)/q(x), with p-mass on a q-null letter counting as an
/// infinite ratio. Letters outside both supports are ignored. Ties go to the
/// smallest index.
fn argmax_ratio(p: &Pmf, q: &Pmf) -> usize {
    let mut best = 0;
    let mut best_ratio = f64::NEG_INFINITY;
    for i in 0..p.len() {
        let (pi, qi) = (p.prob(i), q.prob(i));
        let ratio = if qi > 0.0 {
            pi / qi
        } else if pi > 0.0 {
            f64::INFINITY
        } else {
            continue;
        };
        if ratio > best_ratio {
            best_ratio = ratio;
            best = i;
        }
    }
    best
}

/// Lower bound on D_inf(p || q) realized by an explicit auxiliary variable
/// of split size m.
///
/// The construction keeps the max-ratio letter x* whole and splits every
/// other letter into m blocks (for LogGain the roles flip: x* is split, the
/// rest stay whole). The bound is the log-ratio of the maximal expected
/// gains of the two lifted distributions, evaluated analytically so no
/// auxiliary alphabet is materialized and m is unbounded. Values are clamped
/// at 0: a constant auxiliary always achieves 0, so the clamp reports the
/// better of the two constructions, keeping the result a valid bound and
/// monotone in m.
///
/// Gains must satisfy the variational hypothesis set (non-negative, zero and
/// continuous at zero, finite positive sup); LogGain is admitted separately
/// with its own construction. Custom gains additionally need concavity so
/// the per-block reduction applies; anything else is rejected.
pub fn variational_dinf_lower(p: &Pmf, q: &Pmf, g: &GainFamily, m: usize) -> Result<Nats> {
    if p.alphabet() != q.alphabet() {
        return Err(Error::AlphabetMismatch(
            "both distributions must share one alphabet".into(),
        ));
    }
    if m == 0 {
        return Err(Error::InvalidSplit("split size must be at least 1".into()));
    }
    if !g.is_log() && !validate_hypotheses(g, ConditionSet::Variational).passed {
        return Err(Error::InvalidGain(format!(
            "{} fails the variational hypothesis set",
            g.label()
        )));
    }
    let star = argmax_ratio(p, q);
    let (ps, qs) = (p.prob(star), q.prob(star));
    let mf = m as f64;
    let raw = match g {
        GainFamily::Identity => {
            // Lifted masses: p* whole, p_x/m for the split letters. The
            // maximal expected gain of a lifted pmf is its largest atom.
            let a_rest = rest_max(p, star);
            let b_rest = rest_max(q, star);
            let num = ps.max(a_rest / mf);
            let den = qs.max(b_rest / mf);
            ratio_log(num, den)
        }
        GainFamily::AlphaGain(a) => {
            // Gain ratio = (sum of lifted p^a / sum of lifted q^a)^(1/a);
            // each split letter contributes m * (p_x/m)^a = m^(1-a) p_x^a.
            let sp = rest_power_sum(p, star, *a);
            let sq = rest_power_sum(q, star, *a);
            let scale = mf.powf(1.0 - a);
            let num = ps.powf(*a) + scale * sp;
            let den = qs.powf(*a) + scale * sq;
            ratio_log(num, den) / a
        }
        GainFamily::LogGain => {
            // Both maximal expected gains are negative entropies; splitting
            // x* into m blocks adds p* log m, and the log base cancels in
            // the ratio.
            let num = shannon_entropy(p).value() + ps * mf.ln();
            let den = shannon_entropy(q).value() + qs * mf.ln();
            ratio_log(num, den)
        }
        GainFamily::Custom(gf) => {
            if !gf.flags().concave {
                return Err(Error::InvalidGain(
                    "custom gains need declared concavity for the per-block reduction".into(),
                ));
            }
            let num = block_reduced_gain(p, star, mf, &|t| gf.eval(t));
            let den = block_reduced_gain(q, star, mf, &|t| gf.eval(t));
            ratio_log(num, den)
        }
    };
    Ok(Nats::new(raw.max(0.0)))
}

/// log(num/den) with the degenerate cases pinned: a vanishing denominator
/// means the reference gain is zero, so the ratio is infinite unless the
/// numerator vanishes too (both distributions degenerate), which is 0.
fn ratio_log(num: f64, den: f64) -> f64 {
    if den <= 0.0 {
        if num <= 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (num / den).ln()
    }
}

fn rest_max(p: &Pmf, star: usize) -> f64 {
    p.probs()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != star)
        .map(|(_, &v)| v)
        .fold(0.0, f64::max)
}

fn rest_power_sum(p: &Pmf, star: usize, a: f64) -> f64 {
    p.probs()
        .iter()
        .enumerate()
        .filter(|&(i, &v)| i != star && v > 0.0)
        .map(|(_, &v)| v.powf(a))
        .sum()
}

/// Maximal expected gain of the lifted distribution for a concave gain,
/// reduced to one strategy variable per original letter: within a block of
/// equal masses, concavity makes the uniform allocation optimal, so the
/// lifted problem collapses to max over the simplex of
/// w_star g(s_star) + sum_{x != star} w_x g(s_x / m).
fn block_reduced_gain(w: &Pmf, star: usize, m: f64, g: &dyn Fn(f64) -> f64) -> f64 {
    let n = w.len();
    let weights = w.probs().to_vec();
    let obj = move |s: &[f64]| -> f64 {
        s.iter()
            .enumerate()
            .map(|(i, &si)| {
                if weights[i] == 0.0 {
                    0.0
                } else if i == star {
                    weights[i] * g(si)
                } else {
                    weights[i] * g(si / m)
                }
            })
            .sum()
    };
    let mut starts: Vec<Vec<f64>> = vec![vec![1.0 / n as f64; n], w.probs().to_vec()];
    for i in 0..n.min(6) {
        let mut corner = vec![0.0; n];
        corner[i] = 1.0;
        starts.push(corner);
    }
    let mut best = f64::NEG_INFINITY;
    for start in &starts {
        let result = ascend_on_simplex(&obj, start, 1e-10, 4000);
        best = best.max(result.value);
    }
    best
}

/// The three equivalent expressions for D_inf, each evaluated by its own
/// route.
#[derive(Debug, Clone)]
pub struct DinfForms {
    /// D(r || q) - D(r || p) at the point mass r on the max-ratio letter.
    pub divergence_gap: Nats,
    /// log of the expectation ratio E_p[f] / E_q[f] for the indicator f of
    /// the max-ratio letter.
    pub indicator_log_ratio: Nats,
    /// The defining form: max over supp(p) of log(p/q).
    pub max_log_ratio: Nats,
}

/// Evaluates D_inf(p || q) three ways. The witness point for the first two
/// forms is the max-ratio letter; when p escapes q's support all three are
/// infinite.
pub fn variational_dinf_forms(p: &Pmf, q: &Pmf) -> Result<DinfForms> {
    if p.alphabet() != q.alphabet() {
        return Err(Error::AlphabetMismatch(
            "both distributions must share one alphabet".into(),
        ));
    }
    let star = argmax_ratio(p, q);
    let witness = Pmf::point_mass(p.alphabet().clone(), star);
    let to_q = crate::info::renyi_divergence(&witness, q, OrderAlpha::One)?;
    let to_p = crate::info::renyi_divergence(&witness, p, OrderAlpha::One)?;
    let divergence_gap = Nats::new(to_q.value() - to_p.value());
    let (ps, qs) = (p.prob(star), q.prob(star));
    let indicator_log_ratio = Nats::new(ratio_log(ps, qs));
    let max_log_ratio = crate::info::renyi_divergence(p, q, OrderAlpha::Infinity)?;
    Ok(DinfForms {
        divergence_gap,
        indicator_log_ratio,
        max_log_ratio,
    })
}

/// Cap on the alphabet size for the brute-force loss minimizer.
const BRUTE_FORCE_MAX_N: usize = 8;
/// Number of seeded random restarts for the brute-force minimizer.
const BRUTE_FORCE_STARTS: usize = 64;

/// Brute-force minimum expected alpha-loss over coverage vectors, by seeded
/// multistart projected gradient descent on the raw objective
/// sum_i p_i loss(t_i) subject to 0 <= t <= 1, sum t = k.
///
/// This deliberately re-derives nothing: the loss and its gradient are
/// inlined, the feasible set is handled by Euclidean projection, and the
/// answer is the best of 64 descents plus a few deterministic starts.
/// Restricted to alphabets of at most 8 letters and k below the support
/// size (at or above it the minimum is trivially attained by covering the
/// support).
pub fn brute_force_min_alpha_loss(
    p: &Pmf,
    k: usize,
    alpha: OrderAlpha,
    seed: u64,
) -> Result<(f64, Vec<f64>)> {
    let n = p.len();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::OracleTooLarge(format!(
            "brute-force minimizer handles up to {BRUTE_FORCE_MAX_N} letters, got {n}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidGuessCount(
            "guess count must be at least 1".into(),
        ));
    }
    if k >= p.support_size() {
        return Err(Error::InvalidGuessCount(format!(
            "brute-force minimizer needs k below the support size {}",
            p.support_size()
        )));
    }
    let probs = p.probs().to_vec();
    let loss = |t: f64| -> f64 {
        match alpha {
            OrderAlpha::One => -t.ln(),
            OrderAlpha::Infinity => 1.0 - t,
            OrderAlpha::Finite(a) => {
                let f = (a - 1.0) / a;
                if t <= 0.0 && f < 0.0 {
                    f64::INFINITY
                } else {
                    a / (a - 1.0) * (1.0 - t.powf(f))
                }
            }
        }
    };
    let objective = |t: &[f64]| -> f64 {
        probs
            .iter()
            .zip(t)
            .filter(|(&pi, _)| pi > 0.0)
            .map(|(&pi, &ti)| pi * loss(ti))
            .sum()
    };
    let gradient = |t: &[f64]| -> Vec<f64> {
        probs
            .iter()
            .zip(t)
            .map(|(&pi, &ti)| {
                if pi == 0.0 {
                    return 0.0;
                }
                // Floor keeps the a < 1 gradient finite next to the t = 0
                // face without moving any optimizer coordinate: optimal
                // entries live far above it (tilted ratios are p-ratios to
                // the power 1/a). Acceptance is decided by the exact
                // objective either way.
                let tc = ti.max(1e-9);
                match alpha {
                    OrderAlpha::One => -pi / tc,
                    OrderAlpha::Infinity => -pi,
                    OrderAlpha::Finite(a) => -pi * tc.powf(-1.0 / a),
                }
            })
            .collect()
    };

    let kf = k as f64;
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(BRUTE_FORCE_STARTS + 3);
    starts.push(vec![kf / n as f64; n]);
    starts.push(probs.iter().map(|&v| v * kf).collect());
    starts.push({
        // Indicator of the k heaviest letters, before projection.
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&i, &j| probs[j].partial_cmp(&probs[i]).unwrap());
        let mut t = vec![0.0; n];
        for &i in idx.iter().take(k) {
            t[i] = 1.0;
        }
        t
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while starts.len() < BRUTE_FORCE_STARTS + 3 {
        starts.push((0..n).map(|_| rng.gen_range(0.0..1.0)).collect());
    }

    let mut best_t: Option<Vec<f64>> = None;
    let mut best_val = f64::INFINITY;
    let uniform = kf / n as f64;
    for start in &starts {
        // Nudge into the interior: for a < 1 the loss is infinite on the
        // t_i = 0 face and its gradient blows up next to it, which starves
        // the line search when a start sits exactly on the boundary.
        let mut t: Vec<f64> = project_capped_simplex(start, 1.0, kf)
            .iter()
            .map(|&v| 0.98 * v + 0.02 * uniform)
            .collect();
        let mut ft = objective(&t);
        let mut prev_t: Option<Vec<f64>> = None;
        let mut prev_grad: Option<Vec<f64>> = None;
        let mut step = 0.25_f64;
        let mut small = 0;
        for _ in 0..20_000 {
            let grad = gradient(&t);
            // Barzilai-Borwein step from the last displacement/gradient
            // pair; scales the step to the local curvature, which spans
            // many orders of magnitude across coordinates here.
            if let (Some(pt), Some(pg)) = (&prev_t, &prev_grad) {
                let mut ss = 0.0;
                let mut sy = 0.0;
                for i in 0..n {
                    let ds = t[i] - pt[i];
                    let dg = grad[i] - pg[i];
                    ss += ds * ds;
                    sy += ds * dg;
                }
                if sy > 0.0 && ss > 0.0 {
                    step = (ss / sy).clamp(1e-10, 1e4);
                }
            }
            prev_t = Some(t.clone());
            prev_grad = Some(grad.clone());
            let mut improved = false;
            let mut trial = step;
            for _ in 0..70 {
                let proposal: Vec<f64> = t
                    .iter()
                    .zip(&grad)
                    .map(|(&ti, &gi)| ti - trial * gi)
                    .collect();
                let candidate = project_capped_simplex(&proposal, 1.0, kf);
                let fc = objective(&candidate);
                if fc < ft {
                    let gain = ft - fc;
                    t = candidate;
                    ft = fc;
                    step = (trial * 2.0).min(1e4);
                    improved = true;
                    if gain < 1e-12 * (1.0 + ft.abs()) {
                        small += 1;
                    } else {
                        small = 0;
                    }
                    break;
                }
                trial *= 0.5;
                if trial < 1e-20 {
                    break;
                }
            }
            if !improved || small >= 3 {
                break;
            }
        }
        if ft < best_val {
            best_val = ft;
            best_t = Some(t);
        }
    }
    let best_t = best_t.expect("at least one start ran");
    Ok((best_val, best_t))
}

/// Cap on the alphabet size for the LP feasibility oracle: the column count
/// is n choose k.
const LP_MAX_N: usize = 8;

/// Whether a coverage vector is a mixture of k-subset indicators, decided by
/// a phase-1 simplex feasibility solve over all n-choose-k subset columns
/// plus a normalization row. Returns true when the artificial optimum is
/// within 1e-8 of zero.
pub fn lp_feasibility_admissible(t: &[f64], k: usize) -> Result<bool> {
    let n = t.len();
    if n == 0 {
        return Err(Error::EmptyAlphabet);
    }
    if n > LP_MAX_N {
        return Err(Error::OracleTooLarge(format!(
            "LP oracle handles up to {LP_MAX_N} letters, got {n}"
        )));
    }
    if t.iter().any(|v| !v.is_finite()) {
        return Err(Error::DomainError("coverage entries must be finite".into()));
    }

    // Columns: one per k-subset (its indicator, plus a 1 in the
    // normalization row).
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut subset = Vec::with_capacity(k);
    enumerate_subsets(n, k, 0, &mut subset, &mut |s| {
        let mut col = vec![0.0; n + 1];
        for &i in s {
            col[i] = 1.0;
        }
        col[n] = 1.0;
        columns.push(col);
    });

    let rows = n + 1;
    let mut b: Vec<f64> = t.to_vec();
    b.push(1.0);
    // Phase-1 needs b >= 0; flipping a row keeps the system equivalent.
    let mut row_sign = vec![1.0; rows];
    for (i, bi) in b.iter_mut().enumerate() {
        if *bi < 0.0 {
            *bi = -*bi;
            row_sign[i] = -1.0;
        }
    }

    let ncols = columns.len();
    // Tableau rows over [structural columns | artificials | rhs].
    let width = ncols + rows + 1;
    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut row = vec![0.0; width];
        for (j, col) in columns.iter().enumerate() {
            row[j] = row_sign[i] * col[i];
        }
        row[ncols + i] = 1.0;
        row[width - 1] = b[i];
        tab.push(row);
    }
    let mut basis: Vec<usize> = (ncols..ncols + rows).collect();
    let cost = |j: usize| -> f64 {
        if j >= ncols {
            1.0
        } else {
            0.0
        }
    };

    for _round in 0..100_000 {
        // Reduced costs under the phase-1 objective (sum of artificials).
        // tab is row-major, so the column scan stays index-based.
        let mut entering = None;
        #[allow(clippy::needless_range_loop)]
        for j in 0..ncols + rows {
            let cbar = cost(j) - (0..rows).map(|i| cost(basis[i]) * tab[i][j]).sum::<f64>();
            if cbar < -1e-12 {
                entering = Some(j);
                break; // Bland: smallest eligible index, so no cycling.
            }
        }
        let Some(j) = entering else { break };
        let mut leaving: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..rows {
            if tab[i][j] > 1e-12 {
                let ratio = tab[i][width - 1] / tab[i][j];
                let better = ratio < best_ratio - 1e-15
                    || ((ratio - best_ratio).abs() <= 1e-15
                        && leaving.map(|l| basis[i] < basis[l]).unwrap_or(false));
                if leaving.is_none() || better {
                    best_ratio = ratio;
                    leaving = Some(i);
                }
            }
        }
        let Some(r) = leaving else {
            // Unbounded phase-1 cannot happen (objective bounded below by
            // 0); treat as a solver bug.
            return Err(Error::Internal(
                "phase-1 simplex found an unbounded direction".into(),
            ));
        };
        let pivot = tab[r][j];
        for v in tab[r].iter_mut() {
            *v /= pivot;
        }
        for i in 0..rows {
            if i != r && tab[i][j].abs() > 0.0 {
                let factor = tab[i][j];
                let (pivot_row, rest) = {
                    let row = tab[r].clone();
                    (row, &mut tab[i])
                };
                for (v, pv) in rest.iter_mut().zip(&pivot_row) {
                    *v -= factor * pv;
                }
            }
        }
        basis[r] = j;
    }

    let objective: f64 = (0..rows).map(|i| cost(basis[i]) * tab[i][width - 1]).sum();
    Ok(objective <= 1e-8)
}

fn enumerate_subsets(
    n: usize,
    k: usize,
    from: usize,
    current: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if current.len() == k {
        emit(current);
        return;
    }
    let needed = k - current.len();
    for i in from..n {
        if n - i < needed {
            break;
        }
        current.push(i);
        enumerate_subsets(n, k, i + 1, current, emit);
        current.pop();
    }
}

/// Constructive lower-bound demo for gain-function leakage: splits each
/// positive-mass letter into roughly m * p(x) blocks and reports the
/// log-ratio of expected posterior to prior maximal gains of the lifted
/// secret.
///
/// The gain must satisfy the collapse hypothesis set (concave, zero at zero,
/// finite positive slope at zero); the demo value then climbs to the
/// support-only leakage as m grows. Identity gains make the block sizes
/// cancel exactly (real-valued blocks proportional to the prior), so their
/// demo value equals the column-max sum at every m; concave customs use
/// integer blocks and the per-block reduction.
pub fn maxgleakage_lower_demo(px: &Pmf, ch: &Channel, g: &GainFamily, m: usize) -> Result<Nats> {
    if ch.input() != px.alphabet() {
        return Err(Error::AlphabetMismatch(
            "channel input alphabet differs from prior alphabet".into(),
        ));
    }
    if m == 0 {
        return Err(Error::InvalidSplit("split size must be at least 1".into()));
    }
    if !validate_hypotheses(g, ConditionSet::Collapse).passed {
        return Err(Error::InvalidGain(format!(
            "{} fails the collapse hypothesis set",
            g.label()
        )));
    }
    let support = px.support();
    let joint = joint_from(px, ch)?;
    let py = joint.y_marginal();

    let raw = match g {
        GainFamily::Identity => {
            let mut total = 0.0;
            for j in 0..py.len() {
                let best = support
                    .iter()
                    .map(|&i| ch.prob(i, j))
                    .fold(f64::NEG_INFINITY, f64::max);
                total += best;
            }
            total.ln()
        }
        GainFamily::Custom(gf) => {
            if !gf.flags().concave {
                return Err(Error::InvalidGain(
                    "custom gains need declared concavity for the per-block reduction".into(),
                ));
            }
            let blocks: Vec<usize> = support
                .iter()
                .map(|&i| ((m as f64 * px.prob(i)).round() as usize).max(1))
                .collect();
            let total_blocks: usize = blocks.iter().sum();
            if total_blocks > MAX_BLOCKS {
                return Err(Error::OracleTooLarge(format!(
                    "{total_blocks} blocks requested; cap is {MAX_BLOCKS}"
                )));
            }
            let eval = |w: &[f64]| block_gain_on_support(w, &blocks, &|t| gf.eval(t));
            let prior_w: Vec<f64> = support.iter().map(|&i| px.prob(i)).collect();
            let m0 = eval(&prior_w);
            if m0 <= 0.0 {
                return Err(Error::Internal(
                    "prior maximal gain vanished for an admissible gain".into(),
                ));
            }
            let mut acc = 0.0;
            for (j, &pj) in py.probs().iter().enumerate() {
                if pj == 0.0 {
                    continue;
                }
                let post = joint.posterior_at(j)?;
                let post_w: Vec<f64> = support.iter().map(|&i| post.prob(i)).collect();
                acc += pj * eval(&post_w);
            }
            (acc / m0).ln()
        }
        // Alpha gains have an infinite slope at zero and the log gain is
        // unbounded below; both fail the hypothesis gate above.
        GainFamily::AlphaGain(_) | GainFamily::LogGain => unreachable!("gated above"),
    };
    Ok(Nats::new(raw.max(0.0)))
}

/// Maximal expected gain of a weight vector lifted over integer blocks, for
/// a concave gain, via the per-block reduction (one strategy variable per
/// letter, uniform within a block).
fn block_gain_on_support(w: &[f64], blocks: &[usize], g: &dyn Fn(f64) -> f64) -> f64 {
    let n = w.len();
    let weights = w.to_vec();
    let counts: Vec<f64> = blocks.iter().map(|&b| b as f64).collect();
    let obj = move |s: &[f64]| -> f64 {
        s.iter()
            .enumerate()
            .map(|(i, &si)| {
                if weights[i] == 0.0 {
                    0.0
                } else {
                    weights[i] * g(si / counts[i])
                }
            })
            .sum()
    };
    let mut starts: Vec<Vec<f64>> = vec![vec![1.0 / n as f64; n], w.to_vec()];
    for i in 0..n.min(6) {
        let mut corner = vec![0.0; n];
        corner[i] = 1.0;
        starts.push(corner);
    }
    let mut best = f64::NEG_INFINITY;
    for start in &starts {
        let result = ascend_on_simplex(&obj, start, 1e-10, 4000);
        best = best.max(result.value);
    }
    best
}

/// Cap on the number of grid points for the prior-grid oracle.
const GRID_MAX_POINTS: usize = 2_000_000;

/// Grid search for the supremum of order-alpha mutual information over
/// priors supported on `support`: enumerates all priors whose masses are
/// multiples of `step` and returns the best objective value found.
pub fn grid_max_order_mi(
    ch: &Channel,
    support: &[usize],
    alpha: OrderAlpha,
    step: f64,
) -> Result<Nats> {
    if support.is_empty() {
        return Err(Error::DomainError("support must be non-empty".into()));
    }
    if support.iter().any(|&i| i >= ch.input().len()) {
        return Err(Error::DomainError(
            "support index out of range for the channel input".into(),
        ));
    }
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::DomainError(format!("bad grid step {step}")));
    }
    let units = (1.0 / step).round() as usize;
    let s = support.len();
    // Lattice size is C(units + s - 1, s - 1).
    let mut points: f64 = 1.0;
    for i in 0..s - 1 {
        points = points * (units + s - 1 - i) as f64 / (i + 1) as f64;
    }
    if points > GRID_MAX_POINTS as f64 {
        return Err(Error::OracleTooLarge(format!(
            "grid would have ~{points:.0} points; cap is {GRID_MAX_POINTS}"
        )));
    }

    let n = ch.input().len();
    let mut best = f64::NEG_INFINITY;
    let mut masses = vec![0usize; s];
    grid_recurse(&mut masses, 0, units, &mut |alloc| {
        let mut probs = vec![0.0; n];
        for (slot, &i) in support.iter().enumerate() {
            probs[i] = alloc[slot] as f64 * step;
        }
        if let Ok(pmf) = Pmf::from_weights(ch.input().clone(), probs) {
            if let Ok(v) = arimoto_mi(&pmf, ch, alpha) {
                best = best.max(v.value());
            }
        }
    });
    Ok(Nats::new(best))
}

fn grid_recurse(
    masses: &mut Vec<usize>,
    slot: usize,
    remaining: usize,
    visit: &mut dyn FnMut(&[usize]),
) {
    if slot == masses.len() - 1 {
        masses[slot] = remaining;
        visit(masses);
        return;
    }
    for take in 0..=remaining {
        masses[slot] = take;
        grid_recurse(masses, slot + 1, remaining - take, visit);
    }
}

/// First-order optimality residual for a claimed optimal coverage vector:
/// the water-filling conditions say every unpinned positive-mass letter sits
/// at (p_i / lambda)^alpha with one shared level lambda set by the leftover
/// budget, pinned letters sit at 1, and zero-mass letters at 0. Returns the
/// max componentwise deviation from that shape.
pub fn kkt_stationarity_residual(p: &Pmf, t: &[f64], k: usize, alpha: f64) -> f64 {
    if t.len() != p.len() || k == 0 || !alpha.is_finite() || alpha <= 0.0 {
        return f64::INFINITY;
    }
    let pinned: Vec<bool> = t.iter().map(|&ti| ti >= 1.0 - 1e-9).collect();
    let pinned_count = pinned.iter().filter(|&&b| b).count();
    if pinned_count > k {
        return f64::INFINITY;
    }
    let budget = k - pinned_count;
    let unpinned_power: f64 = p
        .probs()
        .iter()
        .zip(&pinned)
        .filter(|(&pi, &pin)| pi > 0.0 && !pin)
        .map(|(&pi, _)| pi.powf(alpha))
        .sum();
    let mut residual = 0.0_f64;
    for i in 0..t.len() {
        let expected = if p.prob(i) == 0.0 {
            0.0
        } else if pinned[i] {
            1.0
        } else if budget == 0 {
            0.0
        } else {
            // lambda^alpha = unpinned power mass / leftover budget.
            let level = unpinned_power / budget as f64;
            (p.prob(i).powf(alpha) / level).min(1.0)
        };
        residual = residual.max((t[i] - expected).abs());
    }
    residual
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gain::max_expected_gain;
    use crate::guess::{min_expected_alpha_loss, optimal_guess_vector};
    use crate::leakage::{maximal_alpha_leakage, maximal_leakage};
    use approx::assert_abs_diff_eq;

    fn pmf(probs: &[f64]) -> Pmf {
        Pmf::new(Alphabet::indexed("x", probs.len()).unwrap(), probs.to_vec()).unwrap()
    }

    fn pair(p: &[f64], q: &[f64]) -> (Pmf, Pmf) {
        let a = Alphabet::indexed("x", p.len()).unwrap();
        (
            Pmf::new(a.clone(), p.to_vec()).unwrap(),
            Pmf::new(a, q.to_vec()).unwrap(),
        )
    }

    #[test]
    fn shatter_with_unit_blocks_is_the_identity() {
        let x = Alphabet::indexed("x", 3).unwrap();
        let cfg = ShatterConfig::uniform(3, 1).unwrap();
        let ch = shattered_channel(&x, &cfg).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_eq!(ch.prob(i, j), expected);
            }
        }
    }

    #[test]
    fn shatter_splits_rows_uniformly() {
        let x = Alphabet::indexed("x", 2).unwrap();
        let cfg = ShatterConfig::new(vec![2, 1]).unwrap();
        let ch = shattered_channel(&x, &cfg).unwrap();
        assert_eq!(ch.row(0), &[0.5, 0.5, 0.0]);
        assert_eq!(ch.row(1), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn shatter_respects_block_cap() {
        assert!(matches!(
            ShatterConfig::uniform(3, 4000),
            Err(Error::OracleTooLarge(_))
        ));
        assert!(matches!(
            ShatterConfig::new(vec![0, 2]),
            Err(Error::InvalidSplit(_))
        ));
    }

    #[test]
    fn variational_identity_on_disjointish_pair_hits_log_two() {
        let (p, q) = pair(&[1.0, 0.0], &[0.5, 0.5]);
        let v = variational_dinf_lower(&p, &q, &GainFamily::Identity, 10_000).unwrap();
        assert_abs_diff_eq!(v.value(), 2.0_f64.ln(), epsilon = 1e-3);
    }

    #[test]
    fn variational_closed_forms_match_materialized_construction() {
        let (p, q) = pair(&[0.5, 0.3, 0.2], &[0.2, 0.3, 0.5]);
        let star = argmax_ratio(&p, &q);
        assert_eq!(star, 0);
        let m = 5;

        // Identity and AlphaGain split every letter but the witness.
        let cfg = ShatterConfig::distinguished_rest(3, star, m).unwrap();
        let ch = shattered_channel(p.alphabet(), &cfg).unwrap();
        let lifted_p = joint_from(&p, &ch).unwrap().y_marginal();
        let lifted_q = joint_from(&q, &ch).unwrap().y_marginal();
        for g in [GainFamily::Identity, GainFamily::AlphaGain(2.0)] {
            let closed = variational_dinf_lower(&p, &q, &g, m).unwrap();
            let num = max_expected_gain(&lifted_p, &g).value;
            let den = max_expected_gain(&lifted_q, &g).value;
            let direct = (num / den).ln().max(0.0);
            assert_abs_diff_eq!(closed.value(), direct, epsilon = 1e-12);
        }

        // The log gain splits the witness letter instead.
        let cfg = ShatterConfig::distinguished_only(3, star, m).unwrap();
        let ch = shattered_channel(p.alphabet(), &cfg).unwrap();
        let lifted_p = joint_from(&p, &ch).unwrap().y_marginal();
        let lifted_q = joint_from(&q, &ch).unwrap().y_marginal();
        let closed = variational_dinf_lower(&p, &q, &GainFamily::LogGain, m).unwrap();
        let num = max_expected_gain(&lifted_p, &GainFamily::LogGain).value;
        let den = max_expected_gain(&lifted_q, &GainFamily::LogGain).value;
        let direct = (num / den).ln().max(0.0);
        assert_abs_diff_eq!(closed.value(), direct, epsilon = 1e-12);
    }

    #[test]
    fn variational_clamps_small_split_values_at_zero() {
        // Raw construction value at m = 1 is log(0.5/0.9) < 0; the reported
        // bound stays a valid non-negative lower bound.
        let (p, q) = pair(&[0.5, 0.5], &[0.9, 0.1]);
        let v = variational_dinf_lower(&p, &q, &GainFamily::Identity, 1).unwrap();
        assert_eq!(v.value(), 0.0);
    }

    #[test]
    fn variational_is_monotone_and_sandwiched() {
        let (p, q) = pair(&[0.6, 0.4], &[0.4, 0.6]);
        let dinf = crate::info::renyi_divergence(&p, &q, OrderAlpha::Infinity)
            .unwrap()
            .value();
        for g in [
            GainFamily::Identity,
            GainFamily::AlphaGain(2.0),
            GainFamily::LogGain,
        ] {
            let mut prev = f64::NEG_INFINITY;
            for m in [1usize, 10, 100, 1000, 10_000] {
                let v = variational_dinf_lower(&p, &q, &g, m).unwrap().value();
                assert!(v >= prev - 1e-12, "{}: value dropped at m={m}", g.label());
                assert!(v <= dinf + 1e-12, "{}: bound exceeded D_inf", g.label());
                prev = v;
            }
        }
    }

    #[test]
    fn variational_rejects_gains_outside_the_hypothesis_set() {
        let (p, q) = pair(&[0.6, 0.4], &[0.4, 0.6]);
        // Order below 1 has a non-positive sup on [0,1].
        assert!(matches!(
            variational_dinf_lower(&p, &q, &GainFamily::AlphaGain(0.5), 10),
            Err(Error::InvalidGain(_))
        ));
    }

    #[test]
    fn dinf_forms_agree_and_blow_up_together() {
        let (p, q) = pair(&[0.5, 0.3, 0.2], &[0.25, 0.25, 0.5]);
        let forms = variational_dinf_forms(&p, &q).unwrap();
        assert_abs_diff_eq!(
            forms.divergence_gap.value(),
            forms.max_log_ratio.value(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            forms.indicator_log_ratio.value(),
            forms.max_log_ratio.value(),
            epsilon = 1e-12
        );

        let (p, q) = pair(&[0.5, 0.5], &[1.0, 0.0]);
        let forms = variational_dinf_forms(&p, &q).unwrap();
        assert!(forms.divergence_gap.is_infinite());
        assert!(forms.indicator_log_ratio.is_infinite());
        assert!(forms.max_log_ratio.is_infinite());
    }

    #[test]
    fn brute_force_matches_closed_form_minimum() {
        let cases: Vec<(Vec<f64>, usize, OrderAlpha)> = vec![
            (vec![0.25; 4], 2, OrderAlpha::Finite(2.0)),
            (
                vec![2.0 / 3.0, 0.25, 1.0 / 12.0],
                2,
                OrderAlpha::Finite(2.0),
            ),
            (vec![0.4, 0.3, 0.2, 0.1], 2, OrderAlpha::Infinity),
            (vec![0.4, 0.3, 0.2, 0.1], 2, OrderAlpha::One),
            (vec![0.5, 0.25, 0.15, 0.1], 3, OrderAlpha::Finite(0.5)),
        ];
        for (probs, k, alpha) in cases {
            let p = pmf(&probs);
            let closed = min_expected_alpha_loss(&p, k, alpha).unwrap().value();
            let (brute, t) = brute_force_min_alpha_loss(&p, k, alpha, 7).unwrap();
            assert_abs_diff_eq!(brute, closed, epsilon = 1e-6);
            let total: f64 = t.iter().sum();
            assert_abs_diff_eq!(total, k as f64, epsilon = 1e-9);
        }
    }

    #[test]
    fn brute_force_uniform_four_choose_two_covers_evenly() {
        let p = pmf(&[0.25; 4]);
        let (_, t) = brute_force_min_alpha_loss(&p, 2, OrderAlpha::Finite(2.0), 11).unwrap();
        for v in t {
            assert_abs_diff_eq!(v, 0.5, epsilon = 1e-5);
        }
    }

    #[test]
    fn brute_force_rejects_oversized_and_trivial_instances() {
        let p = pmf(&[1.0 / 9.0; 9]);
        assert!(matches!(
            brute_force_min_alpha_loss(&p, 2, OrderAlpha::Finite(2.0), 1),
            Err(Error::OracleTooLarge(_))
        ));
        let p = pmf(&[0.5, 0.5]);
        assert!(matches!(
            brute_force_min_alpha_loss(&p, 2, OrderAlpha::Finite(2.0), 1),
            Err(Error::InvalidGuessCount(_))
        ));
    }

    #[test]
    fn lp_oracle_accepts_known_mixtures() {
        assert!(lp_feasibility_admissible(&[1.0, 1.0, 0.0], 2).unwrap());
        assert!(lp_feasibility_admissible(&[0.5, 0.5, 0.5, 0.5], 2).unwrap());
        assert!(lp_feasibility_admissible(&[0.9, 0.9, 0.2], 2).unwrap());
        assert!(lp_feasibility_admissible(&[1.0], 1).unwrap());
    }

    #[test]
    fn lp_oracle_rejects_known_non_mixtures() {
        // Twice a pmf whose top mass exceeds 1/2 cannot be a 2-subset mixture.
        assert!(!lp_feasibility_admissible(&[1.4, 0.4, 0.2], 2).unwrap());
        // Sum differs from k.
        assert!(!lp_feasibility_admissible(&[0.5, 0.5, 0.5], 2).unwrap());
        // Negative coverage.
        assert!(!lp_feasibility_admissible(&[1.0, 1.2, -0.2], 2).unwrap());
        // Entry above 1.
        assert!(!lp_feasibility_admissible(&[1.2, 0.5, 0.3], 2).unwrap());
    }

    #[test]
    fn demo_identity_equals_support_leakage_for_any_split() {
        let x = Alphabet::new(["0", "1"]).unwrap();
        let px = Pmf::new(x.clone(), vec![0.6, 0.4]).unwrap();
        let ch = Channel::new(x.clone(), x.clone(), vec![vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
        let reference = maximal_leakage(&px, &ch).unwrap().value();
        for m in [1usize, 7, 100] {
            let demo = maxgleakage_lower_demo(&px, &ch, &GainFamily::Identity, m).unwrap();
            assert_abs_diff_eq!(demo.value(), reference, epsilon = 1e-12);
        }
    }

    #[test]
    fn demo_concave_custom_approaches_identity_channel_leakage() {
        let g = crate::gain::parse_gain_spec("custom:1 - (1-t)^2").unwrap();
        let x = Alphabet::indexed("x", 3).unwrap();
        let px = Pmf::uniform(x.clone());
        let ch = Channel::identity(x);
        let demo = maxgleakage_lower_demo(&px, &ch, &g, 1000).unwrap();
        assert!(
            demo.value() >= 3.0_f64.ln() - 0.05,
            "demo value {} too far below log 3",
            demo.value()
        );
        assert!(demo.value() <= 3.0_f64.ln() + 1e-9);
    }

    #[test]
    fn demo_is_zero_for_independent_channels() {
        let x = Alphabet::indexed("x", 3).unwrap();
        let px = Pmf::new(x.clone(), vec![0.5, 0.3, 0.2]).unwrap();
        let y = Alphabet::indexed("y", 2).unwrap();
        let ch = Channel::new(x, y, vec![vec![0.7, 0.3]; 3]).unwrap();
        for m in [1usize, 10] {
            let demo = maxgleakage_lower_demo(&px, &ch, &GainFamily::Identity, m).unwrap();
            assert_abs_diff_eq!(demo.value(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn demo_rejects_gains_without_a_finite_slope() {
        let x = Alphabet::indexed("x", 2).unwrap();
        let px = Pmf::uniform(x.clone());
        let ch = Channel::identity(x);
        assert!(matches!(
            maxgleakage_lower_demo(&px, &ch, &GainFamily::AlphaGain(2.0), 10),
            Err(Error::InvalidGain(_))
        ));
        assert!(matches!(
            maxgleakage_lower_demo(&px, &ch, &GainFamily::LogGain, 10),
            Err(Error::InvalidGain(_))
        ));
    }

    #[test]
    fn grid_oracle_tracks_the_ascent_on_a_binary_symmetric_channel() {
        let x = Alphabet::new(["0", "1"]).unwrap();
        let px = Pmf::uniform(x.clone());
        let ch = Channel::new(x.clone(), x, vec![vec![0.85, 0.15], vec![0.15, 0.85]]).unwrap();
        let alpha = OrderAlpha::Finite(2.0);
        let ascent = maximal_alpha_leakage(&px, &ch, alpha).unwrap().value();
        let grid = grid_max_order_mi(&ch, &[0, 1], alpha, 1e-3)
            .unwrap()
            .value();
        assert_abs_diff_eq!(ascent, grid, epsilon = 1e-4);
    }

    #[test]
    fn grid_oracle_rejects_blowups() {
        let x = Alphabet::indexed("x", 6).unwrap();
        let ch = Channel::identity(x);
        assert!(matches!(
            grid_max_order_mi(&ch, &[0, 1, 2, 3, 4, 5], OrderAlpha::Finite(2.0), 1e-3),
            Err(Error::OracleTooLarge(_))
        ));
    }

    #[test]
    fn kkt_residual_vanishes_at_the_optimum_and_flags_perturbations() {
        let p = pmf(&[2.0 / 3.0, 0.25, 1.0 / 12.0]);
        let t = optimal_guess_vector(&p, 2, OrderAlpha::Finite(2.0)).unwrap();
        let residual = kkt_stationarity_residual(&p, t.values(), 2, 2.0);
        assert!(residual < 1e-9, "residual {residual} at the optimum");

        let worse = vec![0.9, 0.7, 0.4];
        let residual = kkt_stationarity_residual(&p, &worse, 2, 2.0);
        assert!(residual > 1e-2, "perturbed residual {residual} too small");
    }
}
