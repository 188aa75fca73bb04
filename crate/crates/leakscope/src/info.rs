//! Entropies, divergences, and mutual informations of arbitrary order.
//!
//! All quantities are in nats. Conventions throughout:
//! - 0 log 0 = 0 and 0^alpha = 0;
//! - a positive p-mass on a zero q-mass makes divergences of order > 1
//!   (including infinity) equal +inf;
//! - order 1 and order infinity are dispatched to their own closed forms,
//!   never approximated by a nearby finite order.
//!
//! Accumulations run in the log domain (log-sum-exp) so large orders neither
//! overflow nor flush to zero.

use crate::error::Error;
use crate::opt::log_sum_exp;
use crate::prob::{joint_from, tilt, Channel, JointDist, OrderAlpha, Pmf};
use crate::Result;

/// Non-negative information value in nats. +inf is representable; NaN is
/// not: constructing from NaN (or from a significantly negative value)
/// indicates a bug upstream and panics.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Nats(f64);

impl Nats {
    pub const ZERO: Nats = Nats(0.0);
    pub const INFINITY: Nats = Nats(f64::INFINITY);

    /// Negative floating dust below this magnitude is clamped to zero;
    /// anything more negative is treated as an internal error.
    const DUST: f64 = 1e-9;

    pub fn new(value: f64) -> Nats {
        assert!(
            !value.is_nan(),
            "internal invariant violated: NaN information value"
        );
        assert!(
            value > -Self::DUST,
            "internal invariant violated: negative information value {value}"
        );
        Nats(value.max(0.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

impl std::fmt::Display for Nats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Shannon entropy H(p) = -sum p log p.
pub fn shannon_entropy(p: &Pmf) -> Nats {
    let h: f64 = p
        .probs()
        .iter()
        .filter(|&&pi| pi > 0.0)
        .map(|&pi| -pi * pi.ln())
        .sum();
    Nats::new(h)
}

/// Renyi entropy of order alpha:
/// H_alpha(p) = log(sum p^alpha) / (1 - alpha), with H_1 the Shannon entropy
/// and H_inf = -log max p.
pub fn renyi_entropy(p: &Pmf, alpha: OrderAlpha) -> Nats {
    match alpha {
        OrderAlpha::One => shannon_entropy(p),
        OrderAlpha::Infinity => Nats::new(-p.max_prob().ln()),
        OrderAlpha::Finite(a) => {
            let log_power_sum = log_power_sum(p.probs(), a);
            Nats::new(log_power_sum / (1.0 - a))
        }
    }
}

/// log(sum_i v_i^a) over the positive entries, computed in the log domain.
pub(crate) fn log_power_sum(values: &[f64], a: f64) -> f64 {
    let terms: Vec<f64> = values
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| a * v.ln())
        .collect();
    log_sum_exp(&terms)
}

/// Renyi divergence D_alpha(p || q) between pmfs on the same alphabet.
///
/// Order 1 is the KL divergence; order infinity is max over supp(p) of
/// log(p/q). For any order above 1 the value is +inf as soon as p puts mass
/// where q does not.
pub fn renyi_divergence(p: &Pmf, q: &Pmf, alpha: OrderAlpha) -> Result<Nats> {
    require_same_alphabet(p, q)?;
    let escapes_support = p
        .probs()
        .iter()
        .zip(q.probs())
        .any(|(&pi, &qi)| pi > 0.0 && qi == 0.0);
    match alpha {
        OrderAlpha::One => {
            if escapes_support {
                return Ok(Nats::INFINITY);
            }
            let kl: f64 = p
                .probs()
                .iter()
                .zip(q.probs())
                .filter(|(&pi, _)| pi > 0.0)
                .map(|(&pi, &qi)| pi * (pi / qi).ln())
                .sum();
            Ok(Nats::new(kl))
        }
        OrderAlpha::Infinity => {
            if escapes_support {
                return Ok(Nats::INFINITY);
            }
            let max_ratio = p
                .probs()
                .iter()
                .zip(q.probs())
                .filter(|(&pi, _)| pi > 0.0)
                .map(|(&pi, &qi)| (pi / qi).ln())
                .fold(f64::NEG_INFINITY, f64::max);
            Ok(Nats::new(max_ratio))
        }
        OrderAlpha::Finite(a) => {
            if a > 1.0 && escapes_support {
                return Ok(Nats::INFINITY);
            }
            // sum over indices where both are positive; for a < 1 the terms
            // with q = 0 vanish via p^a q^(1-a) -> weight 0 in the formula's
            // continuous extension, matching the conventional definition.
            let terms: Vec<f64> = p
                .probs()
                .iter()
                .zip(q.probs())
                .filter(|(&pi, &qi)| pi > 0.0 && qi > 0.0)
                .map(|(&pi, &qi)| a * pi.ln() + (1.0 - a) * qi.ln())
                .collect();
            let log_sum = log_sum_exp(&terms);
            // Disjoint supports with a < 1: log_sum = -inf and the prefactor
            // is negative, so the value is +inf as it should be.
            Ok(Nats::new(log_sum / (a - 1.0)))
        }
    }
}

/// Sibson mutual information of order alpha for a prior and a channel:
/// I_alpha(p, W) = alpha/(alpha-1) * log sum_y (sum_x p(x) W(y|x)^alpha)^(1/alpha).
///
/// Order 1 is Shannon mutual information. Order infinity is
/// log sum_y max over supp(p) of W(y|x), which depends on the prior only
/// through its support.
pub fn sibson_mi(px: &Pmf, ch: &Channel, alpha: OrderAlpha) -> Result<Nats> {
    if ch.input() != px.alphabet() {
        return Err(Error::AlphabetMismatch(
            "channel input alphabet differs from prior alphabet".into(),
        ));
    }
    match alpha {
        OrderAlpha::One => {
            let joint = joint_from(px, ch)?;
            Ok(shannon_mi(&joint))
        }
        OrderAlpha::Infinity => {
            let support = px.support();
            let mut total_ln = Vec::with_capacity(ch.output().len());
            for j in 0..ch.output().len() {
                let best = support
                    .iter()
                    .map(|&i| ch.prob(i, j))
                    .fold(f64::NEG_INFINITY, f64::max);
                total_ln.push(best.ln());
            }
            Ok(Nats::new(log_sum_exp(&total_ln)))
        }
        OrderAlpha::Finite(a) => {
            let mut outer = Vec::with_capacity(ch.output().len());
            for j in 0..ch.output().len() {
                let inner: Vec<f64> = px
                    .probs()
                    .iter()
                    .enumerate()
                    .filter(|(_, &pi)| pi > 0.0)
                    .map(|(i, &pi)| {
                        let w = ch.prob(i, j);
                        if w > 0.0 {
                            pi.ln() + a * w.ln()
                        } else {
                            f64::NEG_INFINITY
                        }
                    })
                    .collect();
                outer.push(log_sum_exp(&inner) / a);
            }
            Ok(Nats::new(a / (a - 1.0) * log_sum_exp(&outer)))
        }
    }
}

/// Shannon mutual information of a joint distribution.
pub fn shannon_mi(joint: &JointDist) -> Nats {
    let px = joint.x_marginal();
    let py = joint.y_marginal();
    let mut mi = 0.0;
    for i in 0..px.len() {
        for j in 0..py.len() {
            let m = joint.mass(i, j);
            if m > 0.0 {
                mi += m * (m / (px.prob(i) * py.prob(j))).ln();
            }
        }
    }
    Nats::new(mi)
}

/// Arimoto conditional entropy of order alpha of X given Y for a joint:
/// H_alpha(X|Y) = alpha/(1-alpha) * log sum_y (sum_x P(x,y)^alpha)^(1/alpha),
/// with the order-1 case the usual conditional entropy and order infinity
/// -log sum_y max_x P(x,y).
pub fn arimoto_cond_entropy(joint: &JointDist, alpha: OrderAlpha) -> Nats {
    match alpha {
        OrderAlpha::One => {
            let hy = shannon_entropy(&joint.y_marginal());
            let mut hxy = 0.0;
            for row in joint.rows() {
                for &m in row {
                    if m > 0.0 {
                        hxy -= m * m.ln();
                    }
                }
            }
            Nats::new(hxy - hy.value())
        }
        OrderAlpha::Infinity => {
            let ny = joint.y_alphabet().len();
            let mut col_max_ln = Vec::with_capacity(ny);
            for j in 0..ny {
                let best = joint
                    .rows()
                    .iter()
                    .map(|row| row[j])
                    .fold(f64::NEG_INFINITY, f64::max);
                col_max_ln.push(best.ln());
            }
            Nats::new(-log_sum_exp(&col_max_ln))
        }
        OrderAlpha::Finite(a) => {
            let ny = joint.y_alphabet().len();
            let mut outer = Vec::with_capacity(ny);
            for j in 0..ny {
                let inner: Vec<f64> = joint
                    .rows()
                    .iter()
                    .map(|row| row[j])
                    .filter(|&m| m > 0.0)
                    .map(|m| a * m.ln())
                    .collect();
                outer.push(log_sum_exp(&inner) / a);
            }
            Nats::new(a / (1.0 - a) * log_sum_exp(&outer))
        }
    }
}

/// Arimoto mutual information of order alpha of a joint:
/// I_alpha(X;Y) = H_alpha(X) - H_alpha(X|Y). Non-negative for every order.
pub fn arimoto_mi_joint(joint: &JointDist, alpha: OrderAlpha) -> Nats {
    let hx = renyi_entropy(&joint.x_marginal(), alpha);
    let hxy = arimoto_cond_entropy(joint, alpha);
    Nats::new(hx.value() - hxy.value())
}

/// Arimoto mutual information for a prior and a channel.
pub fn arimoto_mi(px: &Pmf, ch: &Channel, alpha: OrderAlpha) -> Result<Nats> {
    let joint = joint_from(px, ch)?;
    Ok(arimoto_mi_joint(&joint, alpha))
}

/// Convexity generator used by the multi-guess regret analysis:
/// F(p) = alpha/(alpha-1) * ((sum p^alpha)^(1/alpha) - 1), convex on the
/// simplex for every finite alpha != 1.
///
/// `bregman_f` evaluates the associated Bregman divergence
/// B_F(p, q) = F(p) - F(q) - <grad F(q), p - q> directly;
/// [`bregman_f_divergence_form`] evaluates the same quantity through its
/// closed form in terms of a Renyi divergence between tilted distributions.
/// The two routes agree to high accuracy and are kept separate deliberately
/// as a cross-check.
///
/// Requires finite alpha != 1 and supp(p) contained in supp(q).
pub fn bregman_f(p: &Pmf, q: &Pmf, alpha: OrderAlpha) -> Result<Nats> {
    let a = bregman_order(alpha)?;
    require_same_alphabet(p, q)?;
    require_support_dominates(p, q)?;
    let c = a / (a - 1.0);
    let norm = |v: &[f64]| -> f64 { (log_power_sum(v, a) / a).exp() };
    let f_p = c * (norm(p.probs()) - 1.0);
    let norm_q = norm(q.probs());
    let f_q = c * (norm_q - 1.0);
    // grad F(q)_i = c * norm_q^(1-a) * q_i^(a-1); terms with q_i = 0 also
    // have p_i = 0 (support check) and drop out.
    let mut inner = 0.0;
    for (&pi, &qi) in p.probs().iter().zip(q.probs()) {
        if qi > 0.0 {
            inner += c * norm_q.powf(1.0 - a) * qi.powf(a - 1.0) * (pi - qi);
        }
    }
    Ok(Nats::new(f_p - f_q - inner))
}

/// Same quantity as [`bregman_f`], computed through the identity
/// B_F(p, q) = alpha/(alpha-1) * (sum p^alpha)^(1/alpha)
///             * (1 - exp((1-alpha)/alpha * D_{1/alpha}(p^(alpha) || q^(alpha)))).
pub fn bregman_f_divergence_form(p: &Pmf, q: &Pmf, alpha: OrderAlpha) -> Result<Nats> {
    let a = bregman_order(alpha)?;
    require_same_alphabet(p, q)?;
    require_support_dominates(p, q)?;
    let c = a / (a - 1.0);
    let norm_p = (log_power_sum(p.probs(), a) / a).exp();
    let alpha_obj = OrderAlpha::Finite(a);
    let inv_obj = OrderAlpha::new(1.0 / a)?;
    let div = renyi_divergence(&tilt(p, alpha_obj), &tilt(q, alpha_obj), inv_obj)?;
    let val = c * norm_p * (1.0 - ((1.0 - a) / a * div.value()).exp());
    Ok(Nats::new(val))
}

fn bregman_order(alpha: OrderAlpha) -> Result<f64> {
    match alpha {
        OrderAlpha::Finite(a) => Ok(a),
        other => Err(Error::UnsupportedOrder(format!(
            "Bregman generator is defined for finite orders != 1, got {other}"
        ))),
    }
}

/// Relative entropy of p against a subnormalized mass vector q
/// (sum q <= 1): sum over supp(p) of p log(p/q). Always non-negative, which
/// several leakage bounds rely on.
pub fn relative_entropy_subnormalized(p: &Pmf, q: &[f64]) -> Result<Nats> {
    if q.len() != p.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    let mut total = 0.0;
    for (index, &value) in q.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::NegativeMass { index, value });
        }
        total += value;
    }
    if total > 1.0 + 1e-12 {
        return Err(Error::DomainError(format!(
            "mass vector must be subnormalized, total {total}"
        )));
    }
    let mut val = 0.0;
    for (&pi, &qi) in p.probs().iter().zip(q) {
        if pi > 0.0 {
            if qi == 0.0 {
                return Ok(Nats::INFINITY);
            }
            val += pi * (pi / qi).ln();
        }
    }
    Ok(Nats::new(val))
}

fn require_same_alphabet(p: &Pmf, q: &Pmf) -> Result<()> {
    if p.alphabet() != q.alphabet() {
        return Err(Error::AlphabetMismatch(
            "distributions live on different alphabets".into(),
        ));
    }
    Ok(())
}

fn require_support_dominates(p: &Pmf, q: &Pmf) -> Result<()> {
    for (i, (&pi, &qi)) in p.probs().iter().zip(q.probs()).enumerate() {
        if pi > 0.0 && qi == 0.0 {
            return Err(Error::DomainError(format!(
                "q has zero mass at index {i} where p is positive"
            )));
        }
    }
    Ok(())
}
