//! Rational-arithmetic replay of the guess-vector construction.
//!
//! The float pipeline in [`crate::guess`] answers the same question with
//! tolerances; this module re-runs the boundary scan and the proportional
//! fill in `Ratio<i128>` so the built-in worked cases can be pinned to
//! literal fractions and compared for equality rather than closeness.

use num_rational::Ratio;

use crate::error::Error;
use crate::Result;

/// Exact rational scalar used throughout this module.
pub type Q = Ratio<i128>;

fn q(numer: i128, denom: i128) -> Q {
    Ratio::new(numer, denom)
}

/// Lossy conversion for comparing the exact route against the float route.
pub fn q_to_f64(v: &Q) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

/// Exact counterpart of the descending boundary scan: the smallest s with
/// (k - s + 1) * w_s <= sum_{i >= s} w_i, followed by pinning the first
/// s - 1 coordinates to 1 and filling the tail proportionally to its
/// weights. `weights` must be positive and sorted descending.
///
/// Arithmetic is plain `Ratio<i128>` with no overflow protection; this is
/// meant for small hand-checked instances, not adversarial input.
pub fn exact_guess_vector(weights: &[Q], k: usize) -> Result<(usize, Vec<Q>)> {
    let n = weights.len();
    if n == 0 {
        return Err(Error::DomainError("empty weight vector".into()));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidGuessCount(format!(
            "guess count must lie in [1, {n}], got {k}"
        )));
    }
    let zero = Q::from_integer(0);
    for w in weights {
        if *w <= zero {
            return Err(Error::DomainError(format!(
                "weights must be positive, got {w}"
            )));
        }
    }
    if weights.windows(2).any(|pair| pair[1] > pair[0]) {
        return Err(Error::DomainError(
            "weights must be sorted descending; use the unsorted entry point".into(),
        ));
    }

    // tail[i] = sum_{j >= i} w_j.
    let mut tail = vec![zero; n + 1];
    for i in (0..n).rev() {
        tail[i] = tail[i + 1] + weights[i];
    }

    // s = k always satisfies the test (w_k is a term of its own tail), so
    // the scan cannot fall through.
    let mut s_star = k;
    for s in 1..=k {
        let budget = Q::from_integer((k - s + 1) as i128);
        if budget * weights[s - 1] <= tail[s - 1] {
            s_star = s;
            break;
        }
    }

    let budget = Q::from_integer((k - s_star + 1) as i128);
    let one = Q::from_integer(1);
    let mut t = Vec::with_capacity(n);
    for (i, w) in weights.iter().enumerate() {
        if i < s_star - 1 {
            t.push(one);
        } else {
            t.push(budget * *w / tail[s_star - 1]);
        }
    }
    Ok((s_star, t))
}

/// Same construction for weights in arbitrary order: stable-sorts
/// descending (ties keep input order), scans, and maps the coverage back
/// to input positions. The returned boundary refers to sorted positions.
pub fn exact_guess_vector_unsorted(weights: &[Q], k: usize) -> Result<(usize, Vec<Q>)> {
    let n = weights.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by(|&i, &j| weights[j].cmp(&weights[i]));
    let sorted: Vec<Q> = perm.iter().map(|&i| weights[i]).collect();
    let (s_star, t_sorted) = exact_guess_vector(&sorted, k)?;
    let mut t = vec![Q::from_integer(0); n];
    for (pos, &orig) in perm.iter().enumerate() {
        t[orig] = t_sorted[pos];
    }
    Ok((s_star, t))
}

/// A pinned instance of the construction with hand-reduced fractions.
#[derive(Debug, Clone)]
pub struct WorkedCase {
    pub label: &'static str,
    /// Number of simultaneous guesses.
    pub k: usize,
    /// Order handed to the float route.
    pub order: f64,
    /// Prior whose tilt of the given order reproduces `weights` up to scale.
    pub prior: Vec<f64>,
    /// Weights handed to the exact scan, in input order (not sorted).
    pub weights: Vec<Q>,
    pub expected_s_star: usize,
    pub expected_t: Vec<Q>,
}

/// Prior whose order-2 tilt is proportional to `weights`.
fn sqrt_prior(weights: &[Q]) -> Vec<f64> {
    let roots: Vec<f64> = weights.iter().map(|w| q_to_f64(w).sqrt()).collect();
    let total: f64 = roots.iter().sum();
    roots.iter().map(|r| r / total).collect()
}

/// The five built-in reference cases. Every fraction below was reduced by
/// hand from the scan and fill formulas; tests treat them as ground truth
/// for both the rational and the float routes.
pub fn worked_cases() -> Vec<WorkedCase> {
    let tilted_flat = vec![q(1, 4), q(1, 4), q(1, 5), q(3, 10)];
    let tilted_pin1 = vec![q(3, 8), q(1, 4), q(3, 16), q(3, 16)];
    let tilted_pin2 = vec![q(2, 3), q(1, 4), q(1, 24), q(1, 24)];
    vec![
        WorkedCase {
            label: "two guesses, scan stops immediately",
            k: 2,
            order: 2.0,
            prior: vec![3.0 / 8.0, 3.0 / 8.0, 1.0 / 4.0],
            weights: vec![q(9, 64), q(9, 64), q(1, 16)],
            expected_s_star: 1,
            expected_t: vec![q(9, 11), q(9, 11), q(4, 11)],
        },
        WorkedCase {
            label: "two guesses, heavy symbol pinned",
            k: 2,
            order: 2.0,
            prior: vec![2.0 / 3.0, 1.0 / 4.0, 1.0 / 12.0],
            weights: vec![q(4, 9), q(1, 16), q(1, 144)],
            expected_s_star: 2,
            expected_t: vec![q(1, 1), q(9, 10), q(1, 10)],
        },
        WorkedCase {
            label: "three guesses, proportional fill on unsorted input",
            k: 3,
            order: 2.0,
            prior: sqrt_prior(&tilted_flat),
            weights: tilted_flat,
            expected_s_star: 1,
            expected_t: vec![q(3, 4), q(3, 4), q(3, 5), q(9, 10)],
        },
        WorkedCase {
            label: "three guesses, one symbol pinned",
            k: 3,
            order: 2.0,
            prior: sqrt_prior(&tilted_pin1),
            weights: tilted_pin1,
            expected_s_star: 2,
            expected_t: vec![q(1, 1), q(4, 5), q(3, 5), q(3, 5)],
        },
        WorkedCase {
            label: "three guesses, two symbols pinned",
            k: 3,
            order: 2.0,
            prior: sqrt_prior(&tilted_pin2),
            weights: tilted_pin2,
            expected_s_star: 3,
            expected_t: vec![q(1, 1), q(1, 1), q(1, 2), q(1, 2)],
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guess::optimal_guess_vector;
    use crate::prob::{Alphabet, OrderAlpha, Pmf};

    #[test]
    fn pinned_cases_reproduce_exact_fractions() {
        for case in worked_cases() {
            let (s, t) = exact_guess_vector_unsorted(&case.weights, case.k).unwrap();
            assert_eq!(s, case.expected_s_star, "{}", case.label);
            assert_eq!(t, case.expected_t, "{}", case.label);
            let total = t.iter().fold(Q::from_integer(0), |acc, v| acc + v);
            assert_eq!(total, Q::from_integer(case.k as i128), "{}", case.label);
        }
    }

    #[test]
    fn float_route_agrees_with_fractions() {
        for case in worked_cases() {
            let alphabet = Alphabet::indexed("x", case.prior.len()).unwrap();
            let prior = Pmf::new(alphabet, case.prior.clone()).unwrap();
            let order = OrderAlpha::new(case.order).unwrap();
            let gv = optimal_guess_vector(&prior, case.k, order).unwrap();
            for (got, want) in gv.values().iter().zip(case.expected_t.iter()) {
                assert!(
                    (got - q_to_f64(want)).abs() <= 1e-12,
                    "{}: {got} vs {want}",
                    case.label
                );
            }
        }
    }

    #[test]
    fn scan_accepts_exact_equality_at_the_last_slot() {
        // (2, 2/3) fails at s=1; s=2 holds with equality, filling to all ones.
        let (s, t) = exact_guess_vector(&[q(2, 3), q(1, 3)], 2).unwrap();
        assert_eq!(s, 2);
        assert_eq!(t, vec![q(1, 1), q(1, 1)]);
    }

    #[test]
    fn strict_entry_point_rejects_unsorted_weights() {
        let err = exact_guess_vector(&[q(1, 4), q(1, 2)], 1).unwrap_err();
        assert!(matches!(err, Error::DomainError(_)));
    }

    #[test]
    fn rejects_empty_nonpositive_and_bad_counts() {
        assert!(matches!(
            exact_guess_vector(&[], 1),
            Err(Error::DomainError(_))
        ));
        assert!(matches!(
            exact_guess_vector(&[q(1, 2), q(0, 1)], 1),
            Err(Error::DomainError(_))
        ));
        assert!(matches!(
            exact_guess_vector(&[q(1, 1)], 0),
            Err(Error::InvalidGuessCount(_))
        ));
        assert!(matches!(
            exact_guess_vector(&[q(1, 1)], 2),
            Err(Error::InvalidGuessCount(_))
        ));
    }
}
