//! Leakage measures with closed forms: maximal leakage, its order-alpha
//! generalization, the gain-function variant for the concave class, and the
//! pointwise / opportunistic / realizable per-outcome measures.
//!
//! The closed forms do all the work here; the suprema over auxiliary
//! randomized functions that define these quantities are never searched
//! directly. The `oracle` module carries the constructive side: shattered
//! channels that approach the suprema and certify the closed forms from
//! below.

use crate::error::Error;
use crate::gain::{validate_hypotheses, ConditionSet, GainFamily};
use crate::info::{renyi_divergence, sibson_mi, Nats};
use crate::opt::log_sum_exp;
use crate::prob::{tilt, Channel, JointDist, OrderAlpha, Pmf};
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// How per-outcome values recombine into a headline value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerYCombine {
    /// log of the weighted average of exponentials (opportunistic).
    LogAvgExp,
    /// plain maximum (realizable).
    Max,
}

#[derive(Debug, Clone)]
pub struct PerOutcome {
    pub symbol: String,
    /// P_Y(y) for this outcome.
    pub weight: f64,
    pub value: Nats,
}

/// A leakage measurement plus the context needed to audit it.
#[derive(Debug, Clone)]
pub struct LeakageReport {
    pub measure: String,
    pub order: Option<OrderAlpha>,
    pub gain: Option<String>,
    pub value: Nats,
    pub combine: Option<PerYCombine>,
    pub per_y: Option<Vec<PerOutcome>>,
    /// Set when the gain fails the exactness hypotheses and the value is
    /// only an upper bound.
    pub upper_bound_only: bool,
    pub notes: Vec<String>,
}

impl LeakageReport {
    fn bare(measure: &str, value: Nats) -> Self {
        LeakageReport {
            measure: measure.to_string(),
            order: None,
            gain: None,
            value,
            combine: None,
            per_y: None,
            upper_bound_only: false,
            notes: Vec::new(),
        }
    }

    /// Checks that the per-outcome breakdown recombines to the headline
    /// value within tol (and that the value is a legal leakage).
    pub fn consistent(&self, tol: f64) -> bool {
        if !(self.value.is_infinite() || self.value.value() >= 0.0) {
            return false;
        }
        let (combine, per_y) = match (&self.combine, &self.per_y) {
            (Some(c), Some(p)) => (c, p),
            _ => return true,
        };
        let recombined = match combine {
            PerYCombine::LogAvgExp => {
                let terms: Vec<f64> = per_y
                    .iter()
                    .map(|o| o.weight.ln() + o.value.value())
                    .collect();
                log_sum_exp(&terms)
            }
            PerYCombine::Max => per_y
                .iter()
                .map(|o| o.value.value())
                .fold(f64::NEG_INFINITY, f64::max),
        };
        if self.value.is_infinite() {
            return recombined.is_infinite();
        }
        (recombined - self.value.value()).abs() <= tol
    }
}

/// Maximal leakage: the log worst-case multiplicative boost the observation
/// gives to guessing any randomized function of X. Equals the order-infinity
/// Sibson mutual information, and depends on the prior only through its
/// support.
pub fn maximal_leakage(px: &Pmf, ch: &Channel) -> Result<Nats> {
    sibson_mi(px, ch, OrderAlpha::Infinity)
}

/// Fixed seed for the alternating-maximization multistarts; results must be
/// reproducible run to run.
const CAPACITY_SEED: u64 = 0xCA9A_C17F;
const CAPACITY_STARTS: usize = 8;
const CAPACITY_VALUE_TOL: f64 = 1e-10;
const CAPACITY_MAX_ITERS: usize = 5000;

/// Maximal alpha-leakage: the supremum over priors supported inside
/// supp(px) of the order-alpha mutual information. Computed for finite
/// alpha by multistart alternating maximization of the concave
/// Sibson-capacity objective; order infinity collapses to maximal leakage.
pub fn maximal_alpha_leakage(px: &Pmf, ch: &Channel, alpha: OrderAlpha) -> Result<Nats> {
    if px.alphabet() != ch.input() {
        return Err(Error::AlphabetMismatch(
            "prior and channel input alphabets differ".into(),
        ));
    }
    match alpha {
        OrderAlpha::Infinity => maximal_leakage(px, ch),
        OrderAlpha::One => Err(Error::UnsupportedOrder(
            "order-1 maximal leakage depends on the order of limits; orders in (1, inf] only"
                .into(),
        )),
        OrderAlpha::Finite(a) if a <= 1.0 => Err(Error::UnsupportedOrder(format!(
            "maximal alpha-leakage requires order > 1, got {a}"
        ))),
        OrderAlpha::Finite(a) => Ok(sibson_capacity(px, ch, a)),
    }
}

/// Multistart alternating maximization of
///   J(q) = sum_y (sum_x q_x W(y|x)^alpha)^(1/alpha)
/// over priors q on supp(px). J is concave; the multiplicative fixed-point
/// update q_x <- q_x (dJ/dq_x)^(alpha/(alpha-1)) / Z is monotone in J, and
/// the leakage is alpha/(alpha-1) log J at the optimum.
fn sibson_capacity(px: &Pmf, ch: &Channel, a: f64) -> Nats {
    let support = px.support();
    let ny = ch.output().len();
    let c = a / (a - 1.0);
    // log W(y|x)^alpha for the supported rows
    let lw: Vec<Vec<f64>> = support
        .iter()
        .map(|&i| (0..ny).map(|j| a * ch.prob(i, j).ln()).collect())
        .collect();
    let s = support.len();

    let value_of = |ln_q: &[f64]| -> f64 {
        let per_y: Vec<f64> = (0..ny)
            .map(|j| {
                let terms: Vec<f64> = (0..s).map(|i| ln_q[i] + lw[i][j]).collect();
                log_sum_exp(&terms) / a
            })
            .collect();
        c * log_sum_exp(&per_y)
    };

    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(CAPACITY_STARTS);
    starts.push(vec![1.0 / s as f64; s]);
    starts.push(support.iter().map(|&i| px.prob(i)).collect());
    {
        let tilted = tilt(px, OrderAlpha::Finite(a));
        starts.push(support.iter().map(|&i| tilted.prob(i)).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CAPACITY_SEED);
    while starts.len() < CAPACITY_STARTS {
        starts.push((0..s).map(|_| rng.gen_range(0.1..1.0)).collect());
    }

    let mut best = f64::NEG_INFINITY;
    for start in starts {
        let total: f64 = start.iter().sum();
        let mut ln_q: Vec<f64> = start.iter().map(|&v| (v / total).ln()).collect();
        let mut value = value_of(&ln_q);
        for _ in 0..CAPACITY_MAX_ITERS {
            // ln B(y) = lse_x (ln q_x + alpha ln W)
            let ln_b: Vec<f64> = (0..ny)
                .map(|j| {
                    let terms: Vec<f64> = (0..s).map(|i| ln_q[i] + lw[i][j]).collect();
                    log_sum_exp(&terms)
                })
                .collect();
            // ln (dJ/dq_x * alpha) = lse_y (alpha ln W + (1-alpha)/alpha ln B)
            let mut ln_next: Vec<f64> = (0..s)
                .map(|i| {
                    let terms: Vec<f64> = (0..ny)
                        .filter(|&j| lw[i][j] > f64::NEG_INFINITY)
                        .map(|j| lw[i][j] + (1.0 - a) / a * ln_b[j])
                        .collect();
                    ln_q[i] + c * log_sum_exp(&terms)
                })
                .collect();
            let z = log_sum_exp(&ln_next);
            for v in ln_next.iter_mut() {
                *v -= z;
            }
            let next_value = value_of(&ln_next);
            ln_q = ln_next;
            let done = (next_value - value).abs() < CAPACITY_VALUE_TOL;
            value = next_value;
            if done {
                break;
            }
        }
        best = best.max(value);
    }
    Nats::new(best)
}

/// Gain-function leakage for the well-behaved concave class. When the gain
/// is concave with g(0) = 0 and a finite positive slope at 0, the value
/// equals maximal leakage exactly; otherwise the same number is reported
/// as an upper bound only (it always upper-bounds the gain-function
/// leakage).
pub fn maximal_g_leakage(px: &Pmf, ch: &Channel, g: &GainFamily) -> Result<LeakageReport> {
    let base = maximal_leakage(px, ch)?;
    let hypotheses = validate_hypotheses(g, ConditionSet::Collapse);
    let mut report = LeakageReport::bare("maximal_g_leakage", base);
    report.gain = Some(g.label());
    if hypotheses.passed {
        report.notes.push(
            "gain is concave, zero at zero, with finite positive initial slope: value is exact"
                .into(),
        );
    } else {
        let failed: Vec<&str> = hypotheses
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        report.upper_bound_only = true;
        report.notes.push(format!(
            "gain fails the exactness conditions ({}); value is an upper bound only",
            failed.join(", ")
        ));
    }
    Ok(report)
}

/// Checks the per-outcome hypotheses: the general variational conditions,
/// with the identity and log gains admitted by their dedicated analyses.
fn require_per_outcome_gain(g: &GainFamily) -> Result<()> {
    if g.is_log() || matches!(g, GainFamily::Identity) {
        return Ok(());
    }
    let report = validate_hypotheses(g, ConditionSet::Variational);
    if report.passed {
        return Ok(());
    }
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    Err(Error::InvalidGain(format!(
        "gain does not qualify for per-outcome leakage (failed: {})",
        failed.join(", ")
    )))
}

/// As `require_per_outcome_gain` but without the log-gain admission: the
/// averaged (opportunistic) and worst-case (realizable) measures need the
/// bounded variational class.
fn require_variational_gain(g: &GainFamily) -> Result<()> {
    let report = validate_hypotheses(g, ConditionSet::Variational);
    if report.passed {
        return Ok(());
    }
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    Err(Error::InvalidGain(format!(
        "gain does not qualify for this measure (failed: {})",
        failed.join(", ")
    )))
}

/// Leakage of the single outcome Y = y: the worst-case log posterior-to-
/// prior ratio, i.e. the order-infinity divergence of the posterior from
/// the prior. Independent of which qualifying gain is supplied.
pub fn pointwise_maximal_leakage(joint: &JointDist, y: &str, g: &GainFamily) -> Result<Nats> {
    require_per_outcome_gain(g)?;
    let post = joint.posterior(y)?;
    renyi_divergence(&post, &joint.x_marginal(), OrderAlpha::Infinity)
}

/// Per-outcome leakage profile over supp(P_Y): (output index, P_Y(y), value).
fn pointwise_profile(joint: &JointDist) -> Result<Vec<(usize, f64, Nats)>> {
    let prior = joint.x_marginal();
    let py = joint.y_marginal();
    let mut out = Vec::new();
    for (j, &pj) in py.probs().iter().enumerate() {
        if pj == 0.0 {
            continue;
        }
        let post = joint.posterior_at(j)?;
        out.push((
            j,
            pj,
            renyi_divergence(&post, &prior, OrderAlpha::Infinity)?,
        ));
    }
    Ok(out)
}

/// Opportunistic leakage: the adversary re-optimizes per outcome and the
/// boosts are averaged in the exponential domain,
///   log sum_y P_Y(y) exp(pointwise(y)),
/// which collapses to maximal leakage.
pub fn opportunistic_maximal_g_leakage(joint: &JointDist, g: &GainFamily) -> Result<Nats> {
    require_variational_gain(g)?;
    let profile = pointwise_profile(joint)?;
    let terms: Vec<f64> = profile.iter().map(|(_, w, v)| w.ln() + v.value()).collect();
    Ok(Nats::new(log_sum_exp(&terms)))
}

/// Realizable leakage: the worst single outcome,
///   max_y pointwise(y) = D_inf(P_XY || P_X x P_Y).
pub fn maximal_realizable_g_leakage(joint: &JointDist, g: &GainFamily) -> Result<Nats> {
    require_variational_gain(g)?;
    let profile = pointwise_profile(joint)?;
    let best = profile
        .iter()
        .map(|(_, _, v)| v.value())
        .fold(0.0_f64, f64::max);
    Ok(Nats::new(best))
}

pub const ALPHA1_VARIANT_NOTE: &str = "the order-1 opportunistic and realizable measures are \
infinite for every joint distribution (including degenerate single-symbol ones, by convention): \
per-outcome re-optimization of an unbounded log-gain admits arbitrarily large boosts";

/// The order-1 (log-gain limit) opportunistic/realizable variants diverge
/// for every joint; callers receive +infinity together with
/// ALPHA1_VARIANT_NOTE.
pub fn alpha1_variant_value() -> Nats {
    Nats::INFINITY
}

/// Report builders: the same values with the per-outcome breakdown and
/// hypothesis notes attached, for presentation layers.
pub fn opportunistic_report(joint: &JointDist, g: &GainFamily) -> Result<LeakageReport> {
    let value = opportunistic_maximal_g_leakage(joint, g)?;
    let mut report = LeakageReport::bare("opportunistic_maximal_g_leakage", value);
    report.gain = Some(g.label());
    report.combine = Some(PerYCombine::LogAvgExp);
    report.per_y = Some(per_outcome_entries(joint)?);
    report
        .notes
        .push("per-outcome values average exponentially to the headline value".into());
    debug_assert!(report.consistent(1e-9));
    Ok(report)
}

pub fn realizable_report(joint: &JointDist, g: &GainFamily) -> Result<LeakageReport> {
    let value = maximal_realizable_g_leakage(joint, g)?;
    let mut report = LeakageReport::bare("maximal_realizable_g_leakage", value);
    report.gain = Some(g.label());
    report.combine = Some(PerYCombine::Max);
    report.per_y = Some(per_outcome_entries(joint)?);
    report
        .notes
        .push("headline value is the worst per-outcome value".into());
    debug_assert!(report.consistent(1e-9));
    Ok(report)
}

fn per_outcome_entries(joint: &JointDist) -> Result<Vec<PerOutcome>> {
    Ok(pointwise_profile(joint)?
        .into_iter()
        .map(|(j, w, v)| PerOutcome {
            symbol: joint.y_alphabet().symbol(j).to_string(),
            weight: w,
            value: v,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gain::parse_gain_spec;
    use crate::prob::{joint_from, Alphabet};
    use approx::assert_abs_diff_eq;

    fn pmf(probs: &[f64]) -> Pmf {
        Pmf::new(Alphabet::indexed("x", probs.len()).unwrap(), probs.to_vec()).unwrap()
    }

    fn bsc(flip: f64) -> (Pmf, Channel) {
        let x = Alphabet::indexed("x", 2).unwrap();
        let y = Alphabet::indexed("y", 2).unwrap();
        let ch = Channel::new(
            x.clone(),
            y,
            vec![vec![1.0 - flip, flip], vec![flip, 1.0 - flip]],
        )
        .unwrap();
        (Pmf::new(x, vec![0.5, 0.5]).unwrap(), ch)
    }

    fn independent(n: usize, m: usize) -> (Pmf, Channel) {
        let x = Alphabet::indexed("x", n).unwrap();
        let y = Alphabet::indexed("y", m).unwrap();
        let row = vec![1.0 / m as f64; m];
        let ch = Channel::new(x.clone(), y, vec![row; n]).unwrap();
        (Pmf::uniform(x), ch)
    }

    #[test]
    fn maximal_leakage_known_values() {
        let (px, ch) = bsc(0.1);
        assert_abs_diff_eq!(
            maximal_leakage(&px, &ch).unwrap().value(),
            1.8_f64.ln(),
            epsilon = 1e-12
        );
        let (px, ch) = independent(3, 2);
        assert_eq!(maximal_leakage(&px, &ch).unwrap().value(), 0.0);
        let x = Alphabet::indexed("x", 4).unwrap();
        let ch = Channel::identity(x.clone());
        let px = Pmf::uniform(x);
        assert_abs_diff_eq!(
            maximal_leakage(&px, &ch).unwrap().value(),
            4.0_f64.ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn maximal_leakage_sees_only_the_support() {
        let (_, ch) = bsc(0.2);
        let p1 = pmf(&[0.5, 0.5]);
        let p2 = pmf(&[0.99, 0.01]);
        assert_eq!(
            maximal_leakage(&p1, &ch).unwrap().value(),
            maximal_leakage(&p2, &ch).unwrap().value()
        );
    }

    #[test]
    fn alpha_leakage_of_noiseless_channel_is_log_n() {
        let x = Alphabet::indexed("x", 3).unwrap();
        let ch = Channel::identity(x.clone());
        let px = Pmf::new(x, vec![0.6, 0.3, 0.1]).unwrap();
        for a in [1.5, 2.0, 4.0] {
            let v = maximal_alpha_leakage(&px, &ch, OrderAlpha::Finite(a)).unwrap();
            assert_abs_diff_eq!(v.value(), 3.0_f64.ln(), epsilon = 1e-6);
        }
    }

    #[test]
    fn alpha_leakage_of_symmetric_channel_peaks_at_uniform() {
        // By symmetry the optimal prior is uniform, so the supremum equals
        // the order-alpha Sibson value at the uniform prior.
        let (px, ch) = bsc(0.1);
        let a = OrderAlpha::Finite(2.0);
        let direct = sibson_mi(&px, &ch, a).unwrap();
        let skewed = pmf(&[0.9, 0.1]);
        let v = maximal_alpha_leakage(&skewed, &ch, a).unwrap();
        assert_abs_diff_eq!(v.value(), direct.value(), epsilon = 1e-8);
    }

    #[test]
    fn alpha_leakage_rejects_small_orders_and_matches_inf() {
        let (px, ch) = bsc(0.1);
        assert!(maximal_alpha_leakage(&px, &ch, OrderAlpha::One).is_err());
        assert!(maximal_alpha_leakage(&px, &ch, OrderAlpha::Finite(0.5)).is_err());
        let inf = maximal_alpha_leakage(&px, &ch, OrderAlpha::Infinity).unwrap();
        assert_eq!(inf.value(), maximal_leakage(&px, &ch).unwrap().value());
    }

    #[test]
    fn alpha_leakage_is_monotone_in_the_order() {
        let (px, ch) = bsc(0.1);
        let mut prev = 0.0;
        for a in [1.2, 1.5, 2.0, 4.0, 16.0] {
            let v = maximal_alpha_leakage(&px, &ch, OrderAlpha::Finite(a))
                .unwrap()
                .value();
            assert!(v >= prev - 1e-9, "order {a}: {v} < {prev}");
            prev = v;
        }
        let inf = maximal_leakage(&px, &ch).unwrap().value();
        assert!(inf >= prev - 1e-9);
    }

    #[test]
    fn g_leakage_is_exact_for_the_concave_class_and_a_bound_otherwise() {
        let x = Alphabet::indexed("x", 3).unwrap();
        let ch = Channel::identity(x.clone());
        let px = Pmf::uniform(x);
        let exact = maximal_g_leakage(&px, &ch, &GainFamily::Identity).unwrap();
        assert!(!exact.upper_bound_only);
        assert_abs_diff_eq!(exact.value.value(), 3.0_f64.ln(), epsilon = 1e-12);

        let smooth = parse_gain_spec("custom:1-(1-t)^2").unwrap();
        let r = maximal_g_leakage(&px, &ch, &smooth).unwrap();
        assert!(!r.upper_bound_only, "notes: {:?}", r.notes);
        assert_abs_diff_eq!(r.value.value(), 3.0_f64.ln(), epsilon = 1e-12);

        // infinite initial slope: only the upper bound applies
        let bound = maximal_g_leakage(&px, &ch, &GainFamily::AlphaGain(2.0)).unwrap();
        assert!(bound.upper_bound_only);
        assert_abs_diff_eq!(bound.value.value(), 3.0_f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn pointwise_leakage_is_the_posterior_prior_log_ratio() {
        let x = Alphabet::indexed("x", 2).unwrap();
        let y = Alphabet::indexed("y", 2).unwrap();
        let joint = JointDist::new(x, y, vec![vec![0.54, 0.06], vec![0.04, 0.36]]).unwrap();
        let v = pointwise_maximal_leakage(&joint, "y0", &GainFamily::Identity).unwrap();
        assert_abs_diff_eq!(v.value(), ((0.54_f64 / 0.58) / 0.6).ln(), epsilon = 1e-12);
        assert!(matches!(
            pointwise_maximal_leakage(&joint, "nope", &GainFamily::Identity),
            Err(Error::UnknownSymbol(_))
        ));
    }

    #[test]
    fn per_outcome_values_do_not_depend_on_the_qualifying_gain() {
        let x = Alphabet::indexed("x", 3).unwrap();
        let y = Alphabet::indexed("y", 3).unwrap();
        let px = Pmf::new(x.clone(), vec![0.5, 0.3, 0.2]).unwrap();
        let ch = Channel::new(
            x,
            y,
            vec![
                vec![0.7, 0.2, 0.1],
                vec![0.1, 0.8, 0.1],
                vec![0.2, 0.3, 0.5],
            ],
        )
        .unwrap();
        let joint = joint_from(&px, &ch).unwrap();
        let gains = [
            GainFamily::Identity,
            GainFamily::AlphaGain(2.0),
            parse_gain_spec("custom:min(3*t, 0.5)").unwrap(),
        ];
        let opp: Vec<f64> = gains
            .iter()
            .map(|g| opportunistic_maximal_g_leakage(&joint, g).unwrap().value())
            .collect();
        assert!(opp.iter().all(|&v| v == opp[0]));
        let real: Vec<f64> = gains
            .iter()
            .map(|g| maximal_realizable_g_leakage(&joint, g).unwrap().value())
            .collect();
        assert!(real.iter().all(|&v| v == real[0]));
        // the log gain qualifies pointwise but not for the averaged variants
        assert!(pointwise_maximal_leakage(&joint, "y0", &GainFamily::LogGain).is_ok());
        assert!(matches!(
            opportunistic_maximal_g_leakage(&joint, &GainFamily::LogGain),
            Err(Error::InvalidGain(_))
        ));
    }

    #[test]
    fn opportunistic_collapses_to_maximal_leakage() {
        let x = Alphabet::indexed("x", 3).unwrap();
        let y = Alphabet::indexed("y", 2).unwrap();
        let px = Pmf::new(x.clone(), vec![0.5, 0.25, 0.25]).unwrap();
        let ch = Channel::new(x, y, vec![vec![0.9, 0.1], vec![0.4, 0.6], vec![0.2, 0.8]]).unwrap();
        let joint = joint_from(&px, &ch).unwrap();
        let opp = opportunistic_maximal_g_leakage(&joint, &GainFamily::Identity).unwrap();
        let ml = maximal_leakage(&px, &ch).unwrap();
        assert_abs_diff_eq!(opp.value(), ml.value(), epsilon = 1e-12);
        // worst outcome dominates the exponential average
        let real = maximal_realizable_g_leakage(&joint, &GainFamily::Identity).unwrap();
        assert!(real.value() >= opp.value() - 1e-12);
    }

    #[test]
    fn reports_recombine_their_breakdowns() {
        let x = Alphabet::indexed("x", 2).unwrap();
        let y = Alphabet::indexed("y", 2).unwrap();
        let joint = JointDist::new(x, y, vec![vec![0.54, 0.06], vec![0.04, 0.36]]).unwrap();
        let opp = opportunistic_report(&joint, &GainFamily::Identity).unwrap();
        assert!(opp.consistent(1e-9));
        assert_eq!(opp.per_y.as_ref().unwrap().len(), 2);
        let real = realizable_report(&joint, &GainFamily::Identity).unwrap();
        assert!(real.consistent(1e-9));
        let per_y_max = real
            .per_y
            .as_ref()
            .unwrap()
            .iter()
            .map(|o| o.value.value())
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(real.value.value(), per_y_max);
    }

    #[test]
    fn order_one_variants_are_infinite() {
        assert!(alpha1_variant_value().is_infinite());
        assert!(!ALPHA1_VARIANT_NOTE.is_empty());
    }

    #[test]
    fn leakage_never_exceeds_the_column_max_bound() {
        // log sum_y max_x W(y|x) upper-bounds every gain-function leakage.
        let x = Alphabet::indexed("x", 3).unwrap();
        let y = Alphabet::indexed("y", 3).unwrap();
        let px = Pmf::new(x.clone(), vec![0.2, 0.5, 0.3]).unwrap();
        let ch = Channel::new(
            x,
            y,
            vec![
                vec![0.6, 0.3, 0.1],
                vec![0.25, 0.5, 0.25],
                vec![0.1, 0.1, 0.8],
            ],
        )
        .unwrap();
        let bound: f64 = (0..3)
            .map(|j| (0..3).map(|i| ch.prob(i, j)).fold(0.0_f64, f64::max))
            .sum::<f64>()
            .ln();
        let r = maximal_g_leakage(&px, &ch, &GainFamily::AlphaGain(2.0)).unwrap();
        assert!(r.value.value() <= bound + 1e-12);
        let exact = maximal_leakage(&px, &ch).unwrap();
        assert!(exact.value() <= bound + 1e-12);
    }
}
