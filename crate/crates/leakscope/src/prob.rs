//! Finite probability primitives: alphabets, pmfs, channels, joints.
//!
//! Everything downstream works over finite alphabets of named symbols.
//! Distributions are dense `f64` vectors aligned with their alphabet;
//! zero-probability symbols are kept in place (support sets are computed on
//! demand) so that indices stay meaningful across marginalization,
//! conditioning, and sorting.
//!
//! Construction is strict: masses must be non-negative and sum to 1 within
//! [`NORMALIZATION_TOL`], after which the vector is renormalized by exact
//! division so downstream code can rely on the total being 1 up to a few ulp.

use crate::error::Error;
use crate::Result;

/// Absolute slack allowed on input mass totals before renormalization.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Ordered set of distinct symbol labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Alphabet `{prefix}0, {prefix}1, ...` of size `n`.
    pub fn indexed(prefix: &str, n: usize) -> Result<Self> {
        Alphabet::new((0..n).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        // Constructors reject empty alphabets; kept for trait-like completeness.
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    /// Alphabet with symbols reordered by `perm` (new position i takes old
    /// symbol perm[i]). `perm` must be a permutation of 0..len.
    fn permuted(&self, perm: &[usize]) -> Alphabet {
        Alphabet {
            symbols: perm.iter().map(|&i| self.symbols[i].clone()).collect(),
        }
    }
}

/// Probability mass function over an [`Alphabet`].
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    alphabet: Alphabet,
    probs: Vec<f64>,
}

impl Pmf {
    /// Validates non-negativity and total mass within [`NORMALIZATION_TOL`]
    /// of 1, then renormalizes by exact division.
    pub fn new(alphabet: Alphabet, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != alphabet.len() {
            return Err(Error::LengthMismatch {
                expected: alphabet.len(),
                got: probs.len(),
            });
        }
        let sum = validate_mass(&probs)?;
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized {
                sum,
                tol: NORMALIZATION_TOL,
            });
        }
        Ok(Pmf {
            alphabet,
            probs: probs.iter().map(|p| p / sum).collect(),
        })
    }

    /// Normalizes arbitrary non-negative weights with positive total.
    /// Used wherever a distribution arises from unnormalized quantities
    /// (posteriors, tilts, optimizer iterates).
    pub fn from_weights(alphabet: Alphabet, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != alphabet.len() {
            return Err(Error::LengthMismatch {
                expected: alphabet.len(),
                got: weights.len(),
            });
        }
        let sum = validate_mass(&weights)?;
        if sum <= 0.0 || !sum.is_finite() {
            return Err(Error::DomainError(format!(
                "weights must have positive finite total, got {sum}"
            )));
        }
        Ok(Pmf {
            alphabet,
            probs: weights.iter().map(|w| w / sum).collect(),
        })
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let n = alphabet.len();
        Pmf {
            alphabet,
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn point_mass(alphabet: Alphabet, index: usize) -> Self {
        let mut probs = vec![0.0; alphabet.len()];
        probs[index] = 1.0;
        Pmf { alphabet, probs }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// Indices with strictly positive mass, in alphabet order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.probs.len())
            .filter(|&i| self.probs[i] > 0.0)
            .collect()
    }

    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|&&p| p > 0.0).count()
    }

    pub fn max_prob(&self) -> f64 {
        self.probs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

fn validate_mass(values: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::NegativeMass { index, value });
        }
        sum += value;
    }
    Ok(sum)
}

/// Renyi order parameter. `One` and `Infinity` are explicit variants so the
/// corresponding closed forms are dispatched exactly, never via limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderAlpha {
    One,
    /// Strictly positive, finite, and not 1. Use [`OrderAlpha::new`] to
    /// construct from raw floats.
    Finite(f64),
    Infinity,
}

impl OrderAlpha {
    /// Classifies a raw float: 1 maps to `One`, +inf to `Infinity`, other
    /// positive finite values to `Finite`.
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha <= 0.0 {
            return Err(Error::UnsupportedOrder(format!(
                "order must be positive, got {alpha}"
            )));
        }
        if alpha == 1.0 {
            Ok(OrderAlpha::One)
        } else if alpha.is_infinite() {
            Ok(OrderAlpha::Infinity)
        } else {
            Ok(OrderAlpha::Finite(alpha))
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, OrderAlpha::One)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, OrderAlpha::Infinity)
    }

    pub fn as_finite(&self) -> Option<f64> {
        match self {
            OrderAlpha::Finite(a) => Some(*a),
            _ => None,
        }
    }
}

impl std::fmt::Display for OrderAlpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrderAlpha::One => write!(f, "1"),
            OrderAlpha::Finite(a) => write!(f, "{a}"),
            OrderAlpha::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for OrderAlpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" => Ok(OrderAlpha::Infinity),
            other => {
                let a: f64 = other
                    .parse()
                    .map_err(|_| Error::ParseError(format!("bad order {s:?}")))?;
                OrderAlpha::new(a)
            }
        }
    }
}

/// Tilted distribution: reweights p by the power alpha and renormalizes.
///
/// - alpha = 1 returns p unchanged.
/// - alpha = inf returns the uniform distribution over the argmax set.
/// - zero entries stay zero for every order.
///
/// Tilting by alpha then by 1/alpha recovers p on its support.
pub fn tilt(p: &Pmf, alpha: OrderAlpha) -> Pmf {
    match alpha {
        OrderAlpha::One => p.clone(),
        OrderAlpha::Infinity => {
            let m = p.max_prob();
            let weights: Vec<f64> = p
                .probs()
                .iter()
                .map(|&pi| if pi == m { 1.0 } else { 0.0 })
                .collect();
            Pmf::from_weights(p.alphabet().clone(), weights).expect("argmax set is non-empty")
        }
        OrderAlpha::Finite(a) => {
            // Scale by the max before exponentiating so large orders cannot
            // overflow or flush the whole vector to zero.
            let m = p.max_prob();
            let weights: Vec<f64> = p
                .probs()
                .iter()
                .map(|&pi| if pi > 0.0 { (pi / m).powf(a) } else { 0.0 })
                .collect();
            Pmf::from_weights(p.alphabet().clone(), weights)
                .expect("tilted weights of a pmf have positive total")
        }
    }
}

/// Stable descending sort. Returns the sorted pmf (alphabet permuted along
/// with the masses) and the permutation `perm` with `sorted[i] = p[perm[i]]`.
/// Ties keep their original relative order.
pub fn sort_descending(p: &Pmf) -> (Pmf, Vec<usize>) {
    let mut perm: Vec<usize> = (0..p.len()).collect();
    // sort_by is stable; comparing only on probability keeps ties in
    // original index order.
    perm.sort_by(|&i, &j| {
        p.prob(j)
            .partial_cmp(&p.prob(i))
            .expect("pmf entries are never NaN")
    });
    let sorted = Pmf {
        alphabet: p.alphabet.permuted(&perm),
        probs: perm.iter().map(|&i| p.probs[i]).collect(),
    };
    (sorted, perm)
}

/// Row-stochastic channel from an input alphabet to an output alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    input: Alphabet,
    output: Alphabet,
    rows: Vec<Vec<f64>>,
}

impl Channel {
    /// Each row must be a valid pmf over the output alphabet; rows are
    /// renormalized exactly like [`Pmf::new`].
    pub fn new(input: Alphabet, output: Alphabet, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != input.len() {
            return Err(Error::LengthMismatch {
                expected: input.len(),
                got: rows.len(),
            });
        }
        let mut normalized = Vec::with_capacity(rows.len());
        for row in rows {
            let pmf = Pmf::new(output.clone(), row)?;
            normalized.push(pmf.probs);
        }
        Ok(Channel {
            input,
            output,
            rows: normalized,
        })
    }

    /// Identity channel over `alphabet`.
    pub fn identity(alphabet: Alphabet) -> Self {
        let n = alphabet.len();
        let rows = (0..n)
            .map(|i| {
                let mut row = vec![0.0; n];
                row[i] = 1.0;
                row
            })
            .collect();
        Channel {
            input: alphabet.clone(),
            output: alphabet,
            rows,
        }
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    /// P(output j | input i).
    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    /// Cascade: the output of `self` feeds `next`. Requires `next`'s input
    /// alphabet to equal `self`'s output alphabet.
    pub fn compose(&self, next: &Channel) -> Result<Channel> {
        if next.input != self.output {
            return Err(Error::AlphabetMismatch(
                "cascade requires inner output alphabet = outer input alphabet".into(),
            ));
        }
        let rows: Vec<Vec<f64>> = self
            .rows
            .iter()
            .map(|row| {
                (0..next.output.len())
                    .map(|z| {
                        row.iter()
                            .zip(&next.rows)
                            .map(|(w, vrow)| w * vrow[z])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Channel::new(self.input.clone(), next.output.clone(), rows)
    }
}

/// Joint distribution over an input and an output alphabet.
/// `mass[i][j]` is P(X = x_i, Y = y_j).
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist {
    x: Alphabet,
    y: Alphabet,
    mass: Vec<Vec<f64>>,
}

impl JointDist {
    pub fn new(x: Alphabet, y: Alphabet, mass: Vec<Vec<f64>>) -> Result<Self> {
        if mass.len() != x.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                got: mass.len(),
            });
        }
        let mut total = 0.0;
        for row in &mass {
            if row.len() != y.len() {
                return Err(Error::LengthMismatch {
                    expected: y.len(),
                    got: row.len(),
                });
            }
            total += validate_mass(row)?;
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized {
                sum: total,
                tol: NORMALIZATION_TOL,
            });
        }
        let mass = mass
            .into_iter()
            .map(|row| row.into_iter().map(|m| m / total).collect())
            .collect();
        Ok(JointDist { x, y, mass })
    }

    pub fn x_alphabet(&self) -> &Alphabet {
        &self.x
    }

    pub fn y_alphabet(&self) -> &Alphabet {
        &self.y
    }

    pub fn mass(&self, i: usize, j: usize) -> f64 {
        self.mass[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.mass
    }

    pub fn x_marginal(&self) -> Pmf {
        let probs: Vec<f64> = self.mass.iter().map(|row| row.iter().sum()).collect();
        Pmf::from_weights(self.x.clone(), probs).expect("joint rows sum to 1")
    }

    pub fn y_marginal(&self) -> Pmf {
        let probs: Vec<f64> = (0..self.y.len())
            .map(|j| self.mass.iter().map(|row| row[j]).sum())
            .collect();
        Pmf::from_weights(self.y.clone(), probs).expect("joint columns sum to 1")
    }

    /// Posterior P(X | Y = y) for the column with symbol `y`.
    pub fn posterior(&self, y: &str) -> Result<Pmf> {
        let j = self
            .y
            .index_of(y)
            .ok_or_else(|| Error::UnknownSymbol(y.to_string()))?;
        self.posterior_at(j)
    }

    /// Posterior P(X | Y = y_j) by column index.
    pub fn posterior_at(&self, j: usize) -> Result<Pmf> {
        let col: Vec<f64> = self.mass.iter().map(|row| row[j]).collect();
        let total: f64 = col.iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroMarginal(self.y.symbol(j).to_string()));
        }
        Pmf::from_weights(self.x.clone(), col)
    }

    /// Splits the joint into its X-marginal and the conditional channel
    /// P(Y|X). Rows with zero marginal mass get a uniform conditional; they
    /// carry no mass, so recomposition is unaffected.
    pub fn to_prior_channel(&self) -> (Pmf, Channel) {
        let px = self.x_marginal();
        let ny = self.y.len();
        let rows: Vec<Vec<f64>> = self
            .mass
            .iter()
            .zip(px.probs())
            .map(|(row, &pxi)| {
                if pxi > 0.0 {
                    row.iter().map(|m| m / pxi).collect()
                } else {
                    vec![1.0 / ny as f64; ny]
                }
            })
            .collect();
        let channel = Channel {
            input: self.x.clone(),
            output: self.y.clone(),
            rows,
        };
        (px, channel)
    }
}

/// Joint distribution induced by a prior and a channel:
/// P(x, y) = px(x) * ch(y|x). The channel's input alphabet must equal the
/// prior's alphabet.
pub fn joint_from(px: &Pmf, ch: &Channel) -> Result<JointDist> {
    if ch.input() != px.alphabet() {
        return Err(Error::AlphabetMismatch(
            "channel input alphabet differs from prior alphabet".into(),
        ));
    }
    let mass: Vec<Vec<f64>> = px
        .probs()
        .iter()
        .enumerate()
        .map(|(i, &p)| ch.row(i).iter().map(|&w| p * w).collect())
        .collect();
    JointDist::new(px.alphabet().clone(), ch.output().clone(), mass)
}

/// Posterior P(X | Y = y) of the joint. Thin named wrapper kept for
/// discoverability next to [`joint_from`].
pub fn posterior(joint: &JointDist, y: &str) -> Result<Pmf> {
    joint.posterior(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn abc() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    fn pmf(probs: &[f64]) -> Pmf {
        let alphabet = Alphabet::indexed("x", probs.len()).unwrap();
        Pmf::new(alphabet, probs.to_vec()).unwrap()
    }

    #[test]
    fn alphabet_rejects_duplicates_and_empty() {
        assert!(matches!(
            Alphabet::new(["a", "a"]),
            Err(Error::DuplicateSymbol(_))
        ));
        assert!(matches!(
            Alphabet::new(Vec::<String>::new()),
            Err(Error::EmptyAlphabet)
        ));
    }

    #[test]
    fn pmf_validates_and_renormalizes() {
        let p = Pmf::new(abc(), vec![0.5, 0.3, 0.2 + 5e-10]).unwrap();
        let total: f64 = p.probs().iter().sum();
        assert!((total - 1.0).abs() < 1e-15);

        assert!(matches!(
            Pmf::new(abc(), vec![0.5, 0.6, 0.2]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            Pmf::new(abc(), vec![0.5, -0.1, 0.6]),
            Err(Error::NegativeMass { .. })
        ));
        assert!(matches!(
            Pmf::new(abc(), vec![0.5, 0.5]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn tilt_order_two_matches_hand_computed_fractions() {
        // (3/8, 3/8, 1/4) squared and renormalized is (9/22, 9/22, 2/11).
        let p = pmf(&[3.0 / 8.0, 3.0 / 8.0, 1.0 / 4.0]);
        let t = tilt(&p, OrderAlpha::Finite(2.0));
        assert_abs_diff_eq!(t.prob(0), 9.0 / 22.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.prob(1), 9.0 / 22.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.prob(2), 2.0 / 11.0, epsilon = 1e-15);

        // (2/3, 1/4, 1/12) squared and renormalized is (32/37, 9/74, 1/74).
        let p = pmf(&[2.0 / 3.0, 1.0 / 4.0, 1.0 / 12.0]);
        let t = tilt(&p, OrderAlpha::Finite(2.0));
        assert_abs_diff_eq!(t.prob(0), 32.0 / 37.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.prob(1), 9.0 / 74.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.prob(2), 1.0 / 74.0, epsilon = 1e-15);
    }

    #[test]
    fn tilt_one_is_identity_and_zero_entries_stay_zero() {
        let p = pmf(&[0.7, 0.0, 0.3]);
        let t1 = tilt(&p, OrderAlpha::One);
        assert_eq!(t1.probs(), p.probs());
        let t2 = tilt(&p, OrderAlpha::Finite(3.5));
        assert_eq!(t2.prob(1), 0.0);
    }

    #[test]
    fn tilt_infinity_is_uniform_over_argmax() {
        let p = pmf(&[0.4, 0.4, 0.2]);
        let t = tilt(&p, OrderAlpha::Infinity);
        assert_eq!(t.probs(), &[0.5, 0.5, 0.0]);
    }

    #[test]
    fn tilt_round_trip_recovers_on_support() {
        let p = pmf(&[0.5, 0.0, 0.2, 0.3]);
        for a in [0.25, 0.5, 2.0, 7.0] {
            let back = tilt(
                &tilt(&p, OrderAlpha::Finite(a)),
                OrderAlpha::Finite(1.0 / a),
            );
            for i in 0..p.len() {
                assert_abs_diff_eq!(back.prob(i), p.prob(i), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn sort_descending_is_stable_on_ties() {
        let p = pmf(&[0.2, 0.4, 0.4]);
        let (sorted, perm) = sort_descending(&p);
        // The two 0.4 entries keep original order: index 1 before index 2.
        assert_eq!(perm, vec![1, 2, 0]);
        assert_eq!(sorted.probs(), &[0.4, 0.4, 0.2]);
        assert_eq!(sorted.alphabet().symbols(), &["x1", "x2", "x0"]);
    }

    #[test]
    fn joint_from_binary_symmetric_channel() {
        let x = Alphabet::new(["0", "1"]).unwrap();
        let y = x.clone();
        let px = Pmf::new(x.clone(), vec![0.6, 0.4]).unwrap();
        let ch = Channel::new(x, y, vec![vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
        let joint = joint_from(&px, &ch).unwrap();
        assert_abs_diff_eq!(joint.mass(0, 0), 0.54, epsilon = 1e-15);
        assert_abs_diff_eq!(joint.mass(0, 1), 0.06, epsilon = 1e-15);
        assert_abs_diff_eq!(joint.mass(1, 0), 0.04, epsilon = 1e-15);
        assert_abs_diff_eq!(joint.mass(1, 1), 0.36, epsilon = 1e-15);

        let post = joint.posterior("0").unwrap();
        assert_abs_diff_eq!(post.prob(0), 0.54 / 0.58, epsilon = 1e-15);
        assert_abs_diff_eq!(post.prob(1), 0.04 / 0.58, epsilon = 1e-15);
    }

    #[test]
    fn joint_from_rejects_alphabet_mismatch() {
        let px = Pmf::new(Alphabet::new(["0", "1"]).unwrap(), vec![0.5, 0.5]).unwrap();
        let ch = Channel::identity(abc());
        assert!(matches!(
            joint_from(&px, &ch),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn posterior_on_zero_marginal_fails() {
        let x = Alphabet::new(["0", "1"]).unwrap();
        let y = abc();
        let joint = JointDist::new(x, y, vec![vec![0.5, 0.0, 0.1], vec![0.3, 0.0, 0.1]]).unwrap();
        assert!(matches!(joint.posterior("b"), Err(Error::ZeroMarginal(_))));
        assert!(matches!(joint.posterior("z"), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn marginalize_then_recompose_reproduces_mass() {
        let x = Alphabet::indexed("x", 3).unwrap();
        let y = Alphabet::indexed("y", 4).unwrap();
        let joint = JointDist::new(
            x,
            y,
            vec![
                vec![0.10, 0.05, 0.00, 0.05],
                vec![0.00, 0.00, 0.00, 0.00],
                vec![0.25, 0.15, 0.30, 0.10],
            ],
        )
        .unwrap();
        let (px, ch) = joint.to_prior_channel();
        let rebuilt = joint_from(&px, &ch).unwrap();
        for i in 0..3 {
            for j in 0..4 {
                assert_abs_diff_eq!(rebuilt.mass(i, j), joint.mass(i, j), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn channel_compose_matches_matrix_product() {
        let a = Alphabet::indexed("a", 2).unwrap();
        let b = Alphabet::indexed("b", 2).unwrap();
        let c = Alphabet::indexed("c", 2).unwrap();
        let w = Channel::new(a, b.clone(), vec![vec![0.8, 0.2], vec![0.3, 0.7]]).unwrap();
        let v = Channel::new(b, c, vec![vec![0.5, 0.5], vec![0.1, 0.9]]).unwrap();
        let wv = w.compose(&v).unwrap();
        assert_abs_diff_eq!(wv.prob(0, 0), 0.8 * 0.5 + 0.2 * 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(wv.prob(1, 1), 0.3 * 0.5 + 0.7 * 0.9, epsilon = 1e-15);
    }

    #[test]
    fn order_alpha_classification() {
        assert!(OrderAlpha::new(1.0).unwrap().is_one());
        assert!(OrderAlpha::new(f64::INFINITY).unwrap().is_infinite());
        assert_eq!(OrderAlpha::new(2.5).unwrap().as_finite(), Some(2.5));
        assert!(OrderAlpha::new(0.0).is_err());
        assert!(OrderAlpha::new(-3.0).is_err());
        assert!(OrderAlpha::new(f64::NAN).is_err());
        assert_eq!("inf".parse::<OrderAlpha>().unwrap(), OrderAlpha::Infinity);
        assert_eq!("2".parse::<OrderAlpha>().unwrap(), OrderAlpha::Finite(2.0));
    }
}
