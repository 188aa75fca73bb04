//! Seeded end-to-end verification suites.
//!
//! Each suite pits a fast closed-form path against an independent reference
//! implementation from [`crate::oracle`] on randomized instances, then
//! reports one outcome per property. The CLI exposes them through
//! `verify --suite <name>`; the acceptance tests call [`run_suite`] directly.
//! All randomness flows from the caller's seed, so a failing run can be
//! replayed exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::gain::GainFamily;
use crate::guess::{
    check_robustness, is_admissible, maximal_alpha_leakage_k_lower_bound, min_expected_alpha_loss,
    optimal_guess_vector, s_star,
};
use crate::info::{bregman_f, bregman_f_divergence_form, renyi_divergence};
use crate::oracle::{
    brute_force_min_alpha_loss, kkt_stationarity_residual, lp_feasibility_admissible,
    variational_dinf_forms, variational_dinf_lower,
};
use crate::prob::{Alphabet, JointDist, OrderAlpha, Pmf};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SuiteKind {
    /// Block-construction lower bounds on the order-infinity divergence.
    Variational,
    /// Closed-form k-guess strategies against projected-gradient search.
    Kkt,
    /// LP feasibility against the closed-form admissibility test.
    Admissibility,
    /// Bregman-generator identities and the order-1 limit.
    Bregman,
    /// Multi-guess collapse under the tilted-mass hypotheses.
    Robustness,
}

impl SuiteKind {
    pub fn all() -> [SuiteKind; 5] {
        [
            SuiteKind::Variational,
            SuiteKind::Kkt,
            SuiteKind::Admissibility,
            SuiteKind::Bregman,
            SuiteKind::Robustness,
        ]
    }

    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Variational => "variational",
            SuiteKind::Kkt => "kkt",
            SuiteKind::Admissibility => "admissibility",
            SuiteKind::Bregman => "bregman",
            SuiteKind::Robustness => "robustness",
        }
    }
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "variational" => Ok(SuiteKind::Variational),
            "kkt" => Ok(SuiteKind::Kkt),
            "admissibility" => Ok(SuiteKind::Admissibility),
            "bregman" => Ok(SuiteKind::Bregman),
            "robustness" => Ok(SuiteKind::Robustness),
            other => Err(Error::ParseError(format!(
                "unknown suite '{other}' (expected variational|kkt|admissibility|bregman|robustness)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: SuiteKind,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs one suite with every random draw derived from `seed`.
pub fn run_suite(kind: SuiteKind, seed: u64) -> Result<SuiteReport> {
    let checks = match kind {
        SuiteKind::Variational => suite_variational(seed)?,
        SuiteKind::Kkt => suite_kkt(seed)?,
        SuiteKind::Admissibility => suite_admissibility(seed)?,
        SuiteKind::Bregman => suite_bregman(seed)?,
        SuiteKind::Robustness => suite_robustness(seed)?,
    };
    Ok(SuiteReport {
        suite: kind,
        seed,
        checks,
    })
}

/// Runs every suite with the same seed.
pub fn run_all(seed: u64) -> Result<Vec<SuiteReport>> {
    SuiteKind::all()
        .into_iter()
        .map(|kind| run_suite(kind, seed))
        .collect()
}

fn check(name: impl Into<String>, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        passed,
        detail,
    }
}

/// Random pmf with every mass at least `floor` (requires floor * n < 1):
/// normalized positives mixed toward uniform.
fn rand_pmf(rng: &mut ChaCha8Rng, n: usize, floor: f64) -> Result<Pmf> {
    let mut w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = w.iter().sum();
    for v in &mut w {
        *v /= total;
    }
    let lambda = floor * n as f64;
    debug_assert!(lambda < 1.0);
    let probs: Vec<f64> = w
        .iter()
        .map(|v| (1.0 - lambda) * v + lambda / n as f64)
        .collect();
    Pmf::new(Alphabet::indexed("x", n)?, probs)
}

// ---------------------------------------------------------------------------
// variational: block-construction lower bounds and the three closed forms
// ---------------------------------------------------------------------------

const BLOCK_SCHEDULE: [usize; 5] = [1, 10, 100, 1_000, 10_000];

fn suite_variational(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5641_5249);
    let gains = [
        ("identity gain", GainFamily::Identity),
        ("order-2 gain", GainFamily::AlphaGain(2.0)),
    ];
    let mut monotone_ok = [true; 2];
    let mut sandwich_ok = [true; 2];
    let mut worst_gap = [0.0f64; 2];
    let mut log_monotone_ok = true;
    let mut log_sandwich_ok = true;
    let mut log_worst_gap = 0.0f64;

    for i in 0..20 {
        let n = 2 + i % 3;
        // masses >= 0.1 keep the target divergence finite and let 1e4 blocks
        // resolve every letter.
        let p = rand_pmf(&mut rng, n, 0.1)?;
        let q = rand_pmf(&mut rng, n, 0.1)?;
        let dinf = renyi_divergence(&p, &q, OrderAlpha::Infinity)?.value();
        for (gi, (_, g)) in gains.iter().enumerate() {
            let mut prev = f64::NEG_INFINITY;
            let mut last = 0.0;
            for &m in &BLOCK_SCHEDULE {
                let v = variational_dinf_lower(&p, &q, g, m)?.value();
                if v < prev - 1e-12 {
                    monotone_ok[gi] = false;
                }
                if v > dinf + 1e-12 {
                    sandwich_ok[gi] = false;
                }
                prev = v;
                last = v;
            }
            worst_gap[gi] = worst_gap[gi].max(dinf - last);
        }
        // The log-score gain is sandwiched and monotone like the others, but
        // its convergence rate is only 1/log(blocks), so no closeness demand.
        let mut prev = f64::NEG_INFINITY;
        let mut last = 0.0;
        for &m in &BLOCK_SCHEDULE {
            let v = variational_dinf_lower(&p, &q, &GainFamily::LogGain, m)?.value();
            if v < prev - 1e-12 {
                log_monotone_ok = false;
            }
            if v > dinf + 1e-12 {
                log_sandwich_ok = false;
            }
            prev = v;
            last = v;
        }
        log_worst_gap = log_worst_gap.max(dinf - last);
    }

    let mut worst_spread = 0.0f64;
    for i in 0..100 {
        let n = 2 + i % 4;
        let p = rand_pmf(&mut rng, n, 0.02)?;
        let q = rand_pmf(&mut rng, n, 0.02)?;
        let forms = variational_dinf_forms(&p, &q)?;
        let vals = [
            forms.divergence_gap.value(),
            forms.indicator_log_ratio.value(),
            forms.max_log_ratio.value(),
        ];
        for a in 0..3 {
            for b in a + 1..3 {
                worst_spread = worst_spread.max((vals[a] - vals[b]).abs());
            }
        }
    }

    let mut checks = Vec::new();
    for (gi, (label, _)) in gains.iter().enumerate() {
        checks.push(check(
            format!("{label}: lower bound is monotone in the block count"),
            monotone_ok[gi],
            "schedule 1, 10, 1e2, 1e3, 1e4 blocks on 20 pairs".into(),
        ));
        checks.push(check(
            format!("{label}: lower bound never exceeds the divergence"),
            sandwich_ok[gi],
            "slack 1e-12".into(),
        ));
        checks.push(check(
            format!("{label}: within 1e-2 of the divergence at 1e4 blocks"),
            worst_gap[gi] <= 1e-2,
            format!("worst final gap {:.3e}", worst_gap[gi]),
        ));
    }
    checks.push(check(
        "log-score gain: lower bound is monotone in the block count",
        log_monotone_ok,
        "schedule 1, 10, 1e2, 1e3, 1e4 blocks on 20 pairs".into(),
    ));
    checks.push(check(
        "log-score gain: lower bound never exceeds the divergence",
        log_sandwich_ok,
        "slack 1e-12".into(),
    ));
    checks.push(check(
        "log-score gain: residual gap at 1e4 blocks (informational)",
        true,
        format!(
            "worst final gap {log_worst_gap:.3e}; closes only as 1/log(blocks), no bound asserted"
        ),
    ));
    checks.push(check(
        "three closed forms of the order-infinity divergence agree",
        worst_spread <= 1e-12,
        format!("worst pairwise spread {worst_spread:.3e} over 100 pairs"),
    ));
    Ok(checks)
}

// ---------------------------------------------------------------------------
// kkt: closed-form k-guess strategies against projected-gradient search
// ---------------------------------------------------------------------------

/// Prior engineered so the descending scan stops at `target_s`: the first
/// target_s - 1 tilted weights fall off by factors of 100, the rest are
/// flat with jitter. Verified against the actual scan by the caller.
fn constructed_prior(rng: &mut ChaCha8Rng, k: usize, target_s: usize, alpha: f64) -> Result<Pmf> {
    let n = k + rng.gen_range(2..=3);
    let mut w = Vec::with_capacity(n);
    for i in 0..target_s - 1 {
        w.push(100f64.powi((target_s - 1 - i) as i32));
    }
    while w.len() < n {
        w.push(rng.gen_range(0.9..1.1));
    }
    let weights: Vec<f64> = w.iter().map(|v| v.powf(1.0 / alpha)).collect();
    Pmf::from_weights(Alphabet::indexed("x", n)?, weights)
}

fn suite_kkt(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6b6b_7400);
    let alphas = [0.5, 2.0, 5.0];

    let mut instances: Vec<(Pmf, usize, f64)> = Vec::new();
    for &alpha in &alphas {
        for k in 2..=3usize {
            for target_s in 1..=k {
                for _ in 0..5 {
                    instances.push((constructed_prior(&mut rng, k, target_s, alpha)?, k, alpha));
                }
            }
        }
    }
    let mut ai = 0;
    while instances.len() < 200 {
        let n = rng.gen_range(3..=6usize);
        let k = if n == 3 { 2 } else { rng.gen_range(2..=3usize) };
        let alpha = alphas[ai % alphas.len()];
        ai += 1;
        instances.push((rand_pmf(&mut rng, n, 0.02)?, k, alpha));
    }

    let mut coverage: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut worst_loss_gap = 0.0f64;
    let mut worst_residual = 0.0f64;
    for (p, k, alpha) in &instances {
        let order = OrderAlpha::Finite(*alpha);
        let boundary = s_star(p, *k, order)?;
        *coverage.entry((*k, boundary.s_star)).or_insert(0) += 1;

        let closed = min_expected_alpha_loss(p, *k, order)?.value();
        let bseed = rng.gen::<u64>();
        let (reference, _) = brute_force_min_alpha_loss(p, *k, order, bseed)?;
        worst_loss_gap = worst_loss_gap.max((closed - reference).abs());

        let gv = optimal_guess_vector(p, *k, order)?;
        worst_residual = worst_residual.max(kkt_stationarity_residual(p, gv.values(), *k, *alpha));
    }

    let mut coverage_ok = true;
    let mut coverage_desc = Vec::new();
    for k in 2..=3usize {
        for s in 1..=k {
            let count = coverage.get(&(k, s)).copied().unwrap_or(0);
            if count < 5 {
                coverage_ok = false;
            }
            coverage_desc.push(format!("k={k} s={s}: {count}"));
        }
    }

    Ok(vec![
        check(
            "closed-form minimum matches projected-gradient reference within 1e-6",
            worst_loss_gap <= 1e-6,
            format!(
                "worst |closed - reference| = {:.3e} over {} instances",
                worst_loss_gap,
                instances.len()
            ),
        ),
        check(
            "closed-form coverage vector is stationary",
            worst_residual <= 1e-8,
            format!("worst KKT residual {worst_residual:.3e} (tolerance 1e-8)"),
        ),
        check(
            "every boundary index is exercised at least 5 times",
            coverage_ok,
            coverage_desc.join(", "),
        ),
    ])
}

// ---------------------------------------------------------------------------
// admissibility: LP feasibility against the closed-form membership test
// ---------------------------------------------------------------------------

/// True when the vector sits so close to the feasibility boundary that the
/// LP threshold (1e-8) and the closed-form tolerance (1e-9) could disagree
/// for spurious reasons. Exact boundary values (distance <= 1e-12) stay in.
fn knife_edge(t: &[f64], k: usize) -> bool {
    let band = |d: f64| d > 1e-12 && d < 1e-6;
    if t.iter().any(|&v| band(v.abs()) || band((v - 1.0).abs())) {
        return true;
    }
    let sum: f64 = t.iter().sum();
    band((sum - k as f64).abs())
}

fn raw_unit_column(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut col: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = col.iter().sum();
    for v in &mut col {
        *v /= total;
    }
    col
}

/// Coverage vector in [0,1]^n with sum exactly k (up to rounding): sum of k
/// unit columns, with any per-coordinate overflow pushed to the slack.
fn feasible_base(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<f64> {
    let mut t = vec![0.0; n];
    for _ in 0..k {
        for (ti, c) in t.iter_mut().zip(raw_unit_column(rng, n)) {
            *ti += c;
        }
    }
    loop {
        let mut excess = 0.0;
        for v in t.iter_mut() {
            if *v > 1.0 {
                excess += *v - 1.0;
                *v = 1.0;
            }
        }
        if excess <= 0.0 {
            return t;
        }
        // total room is n - k >= 1, so one proportional spread absorbs it
        let room: f64 = t.iter().map(|v| 1.0 - v).sum();
        for v in t.iter_mut() {
            *v += excess * (1.0 - *v) / room;
        }
    }
}

fn suite_admissibility(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4144_4d49);
    let mut vectors: Vec<(Vec<f64>, usize)> = Vec::new();

    // pinned cases, including an exact {0,1} boundary vector
    vectors.push((vec![1.0, 1.0, 0.0], 2));
    vectors.push((vec![1.4, 0.4, 0.2], 2));
    vectors.push((vec![0.9, 0.7, 0.4], 2));

    // sums of k unit columns: total is k by construction, single entries may
    // exceed 1, so both verdicts occur
    let mut made = 0;
    while made < 400 {
        let n = 3 + made % 4;
        let k = 2 + made % 2;
        let mut t = vec![0.0; n];
        for _ in 0..k {
            for (ti, c) in t.iter_mut().zip(raw_unit_column(&mut rng, n)) {
                *ti += c;
            }
        }
        if knife_edge(&t, k) {
            continue;
        }
        vectors.push((t, k));
        made += 1;
    }

    // feasible bases nudged by a magnitude well clear of both tolerances,
    // either breaking the total or transferring mass between coordinates
    let deltas = [1e-4, 1e-3, 1e-2, 0.1];
    let mut made = 0;
    while made < 300 {
        let n = 3 + made % 4;
        let k = 2 + made % 2;
        let mut t = feasible_base(&mut rng, n, k);
        let delta = deltas[made % deltas.len()];
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let i = rng.gen_range(0..n);
        if made % 2 == 0 {
            t[i] += sign * delta;
        } else {
            let j = (i + 1 + rng.gen_range(0..n - 1)) % n;
            t[i] += sign * delta;
            t[j] -= sign * delta;
        }
        if knife_edge(&t, k) {
            continue;
        }
        vectors.push((t, k));
        made += 1;
    }

    // doubled-prior family: t = 2p with the top mass sweeping 0.2..0.8, so
    // feasibility flips exactly where the largest mass crosses 1/2
    let mut family: Vec<(Vec<f64>, bool)> = Vec::new();
    for i in 0..100 {
        let pm = if i == 50 {
            0.5
        } else {
            0.2 + 0.6 * (i as f64) / 99.0
        };
        let w: Vec<f64> = (0..3).map(|_| rng.gen_range(0.8..1.2)).collect();
        let wsum: f64 = w.iter().sum();
        let r0 = (1.0 - pm) * w[0] / wsum;
        let r1 = (1.0 - pm) * w[1] / wsum;
        let p = [pm, r0, r1, 1.0 - pm - r0 - r1];
        let t: Vec<f64> = p.iter().map(|v| 2.0 * v).collect();
        let feasible = t.iter().cloned().fold(0.0, f64::max) <= 1.0;
        family.push((t, feasible));
    }

    // unconstrained noise, half rescaled onto the sum-k plane
    let mut made = 0;
    while made < 200 {
        let n = 3 + made % 4;
        let k = 2 + made % 2;
        let mut t: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.05..1.05)).collect();
        if rng.gen::<bool>() {
            let sum: f64 = t.iter().sum();
            if sum.abs() > 1e-6 {
                for v in &mut t {
                    *v *= k as f64 / sum;
                }
            }
        }
        if knife_edge(&t, k) {
            continue;
        }
        vectors.push((t, k));
        made += 1;
    }

    let mut disagreements = 0usize;
    let mut feasible_count = 0usize;
    let mut first_disagreement = String::new();
    for (t, k) in &vectors {
        let reference = lp_feasibility_admissible(t, *k)?;
        let fast = is_admissible(t, *k);
        if reference != fast {
            disagreements += 1;
            if first_disagreement.is_empty() {
                first_disagreement = format!("; first at k={k}, t={t:?}");
            }
        }
        if reference {
            feasible_count += 1;
        }
    }

    let mut family_bad = 0usize;
    for (t, expected) in &family {
        let reference = lp_feasibility_admissible(t, 2)?;
        let fast = is_admissible(t, 2);
        if reference != *expected || fast != *expected {
            family_bad += 1;
        }
    }

    Ok(vec![
        check(
            "LP feasibility and the closed-form test agree on every vector",
            disagreements == 0,
            format!(
                "{} vectors, {} feasible, {} disagreements{}",
                vectors.len(),
                feasible_count,
                disagreements,
                first_disagreement
            ),
        ),
        check(
            "doubled-prior family flips feasibility exactly at top mass 1/2",
            family_bad == 0,
            format!("100 vectors including the exact boundary, {family_bad} mismatches"),
        ),
    ])
}

// ---------------------------------------------------------------------------
// bregman: generator identities and the order-1 limit
// ---------------------------------------------------------------------------

fn linf(p: &Pmf, q: &Pmf) -> f64 {
    p.probs()
        .iter()
        .zip(q.probs())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn suite_bregman(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4252_4547);
    let alphas = [0.5, 1.5, 2.0, 4.0, 8.0];
    let mut worst_dual = 0.0f64;
    let mut worst_self = 0.0f64;
    let mut min_separated = f64::INFINITY;
    let mut worst_limit = 0.0f64;

    for i in 0..100 {
        let n = 2 + i % 3;
        let p = rand_pmf(&mut rng, n, 0.02)?;
        let mut q = rand_pmf(&mut rng, n, 0.02)?;
        let mut guard = 0;
        while linf(&p, &q) < 0.01 {
            q = rand_pmf(&mut rng, n, 0.02)?;
            guard += 1;
            if guard > 100 {
                return Err(Error::Internal("pair separation stalled".into()));
            }
        }
        let alpha = alphas[i % alphas.len()];
        let order = OrderAlpha::Finite(alpha);

        let direct = bregman_f(&p, &q, order)?.value();
        let via_divergence = bregman_f_divergence_form(&p, &q, order)?.value();
        worst_dual = worst_dual.max((direct - via_divergence).abs());
        worst_self = worst_self.max(bregman_f(&p, &p, order)?.value());
        min_separated = min_separated.min(direct);

        // the generator gap is linear in (alpha - 1) near 1, so a symmetric
        // two-sided probe cancels the first-order term
        let eps = 1e-4;
        let hi = bregman_f(&p, &q, OrderAlpha::Finite(1.0 + eps))?.value();
        let lo = bregman_f(&p, &q, OrderAlpha::Finite(1.0 - eps))?.value();
        let kl = renyi_divergence(&p, &q, OrderAlpha::One)?.value();
        worst_limit = worst_limit.max((0.5 * (hi + lo) - kl).abs());
    }

    Ok(vec![
        check(
            "direct and divergence-form evaluations agree within 1e-9",
            worst_dual <= 1e-9,
            format!("worst gap {worst_dual:.3e} over 100 triples"),
        ),
        check(
            "nonnegative, zero exactly on identical pairs",
            worst_self <= 1e-12 && min_separated > 1e-9,
            format!(
                "max self-value {worst_self:.3e}; min value on separated pairs {min_separated:.3e}"
            ),
        ),
        check(
            "two-sided probe at order 1 recovers relative entropy within 1e-5",
            worst_limit <= 1e-5,
            format!("worst |midpoint - KL| = {worst_limit:.3e} at offset 1e-4"),
        ),
    ])
}

// ---------------------------------------------------------------------------
// robustness: k-guess collapse under the tilted-mass hypotheses
// ---------------------------------------------------------------------------

/// Joint with all cells in [1, 1.15] before normalization: tilted masses
/// stay far below 1/k for every order used by the suite.
fn narrow_joint(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> Result<JointDist> {
    let mut mass = vec![vec![0.0; ny]; nx];
    let mut total = 0.0;
    for row in &mut mass {
        for cell in row.iter_mut() {
            *cell = rng.gen_range(1.0..1.15);
            total += *cell;
        }
    }
    for row in &mut mass {
        for cell in row.iter_mut() {
            *cell /= total;
        }
    }
    JointDist::new(
        Alphabet::indexed("x", nx)?,
        Alphabet::indexed("y", ny)?,
        mass,
    )
}

fn suite_robustness(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x524f_4255);
    let alphas = [0.5, 2.0, 5.0];
    let mut hypotheses_ok = true;
    let mut worst_collapse = 0.0f64;
    let mut worst_preserve = 0.0f64;
    let mut dominates = true;
    let mut worst_shard_collapse = 0.0f64;

    for i in 0..50 {
        let k = 2 + i % 2;
        let alpha = alphas[i % alphas.len()];
        let nx = 6 * k;
        let ny = 2 + i % 2;
        let joint = narrow_joint(&mut rng, nx, ny)?;
        let order = OrderAlpha::Finite(alpha);

        let report = check_robustness(&joint, k, order)?;
        if !report.hypotheses_hold {
            hypotheses_ok = false;
        }
        worst_collapse =
            worst_collapse.max((report.k_guess.value() - report.one_guess.value()).abs());

        let m = k + (i / 2) % 2;
        let split = maximal_alpha_leakage_k_lower_bound(&joint, k, order, m)?;
        worst_preserve = worst_preserve
            .max((split.split_one_guess.value() - split.one_guess_value.value()).abs());
        if split.split_value.value() < split.one_guess_value.value() - 1e-9 {
            dominates = false;
        }
        worst_shard_collapse = worst_shard_collapse
            .max((split.split_value.value() - split.one_guess_value.value()).abs());
    }

    Ok(vec![
        check(
            "tilted masses stay below 1/k on every sampled joint",
            hypotheses_ok,
            "50 joints, k in {2,3}, orders {0.5, 2, 5}".into(),
        ),
        check(
            "k-guess leakage collapses to the single-guess value within 1e-9",
            worst_collapse <= 1e-9,
            format!("worst |k-guess - single-guess| = {worst_collapse:.3e}"),
        ),
        check(
            "uniform sharding preserves single-guess leakage within 1e-9",
            worst_preserve <= 1e-9,
            format!("worst shard deviation {worst_preserve:.3e}"),
        ),
        check(
            "shard witness is at least the single-guess leakage",
            dominates,
            "slack 1e-9".into(),
        ),
        check(
            "shard k-guess collapses to the single-guess value within 1e-9",
            worst_shard_collapse <= 1e-9,
            format!("worst gap {worst_shard_collapse:.3e}"),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_suite_passes(kind: SuiteKind) {
        let report = run_suite(kind, 0).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{} / {}: {}", report.suite, c.name, c.detail);
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for kind in SuiteKind::all() {
            assert_eq!(kind.name().parse::<SuiteKind>().unwrap(), kind);
        }
        assert!("entropy".parse::<SuiteKind>().is_err());
    }

    #[test]
    fn variational_suite_passes() {
        assert_suite_passes(SuiteKind::Variational);
    }

    #[test]
    fn admissibility_suite_passes() {
        assert_suite_passes(SuiteKind::Admissibility);
    }

    #[test]
    fn bregman_suite_passes() {
        assert_suite_passes(SuiteKind::Bregman);
    }

    #[test]
    fn robustness_suite_passes() {
        assert_suite_passes(SuiteKind::Robustness);
    }
}
