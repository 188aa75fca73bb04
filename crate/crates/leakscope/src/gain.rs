//! Gain functions on [0,1] and single-guess maximal expected gain.
//!
//! A gain function g scores the probability an adversary's guess assigns to
//! the true value; the adversary picks a guessing distribution maximizing
//! E[g(P_guess(X))]. Structural properties of g (non-negativity, value at 0,
//! continuity at 0, boundedness, concavity, slope at 0) decide which leakage
//! results apply, so they are carried as explicit flags and validated
//! empirically against the function on a fine grid: declaring a property the
//! function visibly violates is a construction error. Undeclared properties
//! are simply not relied on.
//!
//! Two hypothesis sets gate the leakage layer:
//! - collapse conditions (concave, g(0) = 0, finite positive slope at 0):
//!   the gain-function leakage collapses to plain maximal leakage;
//! - variational conditions (non-negative, g(0) = 0, continuous at 0,
//!   finite positive supremum): the divergence characterization and the
//!   outcome-wise measures apply.

use std::sync::Arc;

use crate::error::Error;
use crate::info::{log_power_sum, shannon_entropy};
use crate::opt::{ascend_on_simplex, AscentResult};
use crate::prob::{tilt, OrderAlpha, Pmf};
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Declared structural properties of a gain function.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GainFlags {
    pub nonneg: bool,
    pub zero_at_zero: bool,
    pub continuous_at_zero: bool,
    /// Finite supremum of g over [0,1], when one is declared.
    pub bounded_sup: Option<f64>,
    pub concave: bool,
    /// Finite positive right derivative at 0, when one is declared.
    pub derivative_at_zero: Option<f64>,
}

/// User-supplied gain function with declared, empirically checked flags.
#[derive(Clone)]
pub struct GainFunction {
    label: String,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    flags: GainFlags,
}

impl std::fmt::Debug for GainFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GainFunction")
            .field("label", &self.label)
            .field("flags", &self.flags)
            .finish()
    }
}

/// Grid pitch for empirical flag validation.
const CHECK_GRID_STEP: f64 = 1e-3;
/// Slack for empirical property checks on the grid.
const CHECK_TOL: f64 = 1e-9;

impl GainFunction {
    /// Builds a custom gain function, rejecting declarations the function
    /// visibly violates on a grid of pitch 1e-3 (plus probes near 0).
    pub fn new<F>(label: impl Into<String>, eval: F, flags: GainFlags) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let label = label.into();
        let eval: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(eval);
        check_flags(&label, eval.as_ref(), &flags)?;
        Ok(GainFunction { label, eval, flags })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn flags(&self) -> GainFlags {
        self.flags
    }

    /// Evaluates g, clamping the argument into [0,1] so optimizer probes a
    /// hair outside the simplex stay in-domain.
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t.clamp(0.0, 1.0))
    }
}

fn check_flags(label: &str, eval: &dyn Fn(f64) -> f64, flags: &GainFlags) -> Result<()> {
    let n = (1.0 / CHECK_GRID_STEP) as usize;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 * CHECK_GRID_STEP).collect();
    let values: Vec<f64> = grid.iter().map(|&t| eval(t)).collect();
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidGain(format!(
            "{label}: evaluates to NaN on [0,1]"
        )));
    }
    let g0 = values[0];
    if flags.nonneg {
        if let Some((i, v)) = values.iter().enumerate().find(|(_, &v)| v < -CHECK_TOL) {
            return Err(Error::InvalidGain(format!(
                "{label}: declared non-negative but g({}) = {v}",
                grid[i]
            )));
        }
    }
    if flags.zero_at_zero && !(g0.is_finite() && g0.abs() <= CHECK_TOL) {
        return Err(Error::InvalidGain(format!(
            "{label}: declared zero at zero but g(0) = {g0}"
        )));
    }
    if flags.continuous_at_zero {
        let probe = eval(1e-9);
        if !g0.is_finite() || (probe - g0).abs() > 1e-2 * (1.0 + g0.abs()) {
            return Err(Error::InvalidGain(format!(
                "{label}: declared continuous at zero but g(1e-9) = {probe}, g(0) = {g0}"
            )));
        }
    }
    if let Some(sup) = flags.bounded_sup {
        if !sup.is_finite() {
            return Err(Error::InvalidGain(format!(
                "{label}: declared supremum must be finite, got {sup}"
            )));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, &v)| v > sup + CHECK_TOL)
        {
            return Err(Error::InvalidGain(format!(
                "{label}: declared sup {sup} but g({}) = {v}",
                grid[i]
            )));
        }
    }
    if flags.concave {
        // Discrete concavity: second differences must not be positive.
        for w in values.windows(3).enumerate() {
            let (i, w) = w;
            let second = w[2] - 2.0 * w[1] + w[0];
            if second > CHECK_TOL {
                return Err(Error::InvalidGain(format!(
                    "{label}: declared concave but second difference at t = {} is {second:e}",
                    grid[i + 1]
                )));
            }
        }
    }
    if let Some(d) = flags.derivative_at_zero {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidGain(format!(
                "{label}: declared slope at zero must be finite and positive, got {d}"
            )));
        }
        if !g0.is_finite() {
            return Err(Error::InvalidGain(format!(
                "{label}: declared slope at zero but g(0) = {g0}"
            )));
        }
        for h in [1e-5, 1e-6] {
            let slope = (eval(h) - g0) / h;
            if (slope - d).abs() > 1e-2 * (1.0 + d.abs()) {
                return Err(Error::InvalidGain(format!(
                    "{label}: declared slope {d} at zero but measured {slope} at h = {h:e}"
                )));
            }
        }
    }
    Ok(())
}

/// Gain families with closed-form treatment, plus arbitrary custom gains.
#[derive(Debug, Clone)]
pub enum GainFamily {
    /// g(t) = t.
    Identity,
    /// g(t) = alpha/(alpha-1) * t^((alpha-1)/alpha), alpha in (0,1) or (1,inf).
    AlphaGain(f64),
    /// g(t) = log t.
    LogGain,
    Custom(GainFunction),
}

impl GainFamily {
    /// Evaluates the gain at t (clamped into [0,1]).
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        match self {
            GainFamily::Identity => t,
            GainFamily::AlphaGain(a) => {
                let f = (a - 1.0) / a;
                a / (a - 1.0) * t.powf(f)
            }
            GainFamily::LogGain => t.ln(),
            GainFamily::Custom(g) => g.eval(t),
        }
    }

    /// Structural flags: exact for the built-in families, declared (and
    /// construction-checked) for custom gains.
    pub fn flags(&self) -> GainFlags {
        match self {
            GainFamily::Identity => GainFlags {
                nonneg: true,
                zero_at_zero: true,
                continuous_at_zero: true,
                bounded_sup: Some(1.0),
                concave: true,
                derivative_at_zero: Some(1.0),
            },
            GainFamily::AlphaGain(a) if *a > 1.0 => GainFlags {
                nonneg: true,
                zero_at_zero: true,
                continuous_at_zero: true,
                bounded_sup: Some(a / (a - 1.0)),
                concave: true,
                // slope at zero is infinite
                derivative_at_zero: None,
            },
            GainFamily::AlphaGain(a) => GainFlags {
                // below order 1 the gain is negative and diverges at 0
                nonneg: false,
                zero_at_zero: false,
                continuous_at_zero: false,
                bounded_sup: Some(a / (a - 1.0)),
                concave: true,
                derivative_at_zero: None,
            },
            GainFamily::LogGain => GainFlags {
                nonneg: false,
                zero_at_zero: false,
                continuous_at_zero: false,
                // sup over (0,1] is 0, attained at t = 1
                bounded_sup: Some(0.0),
                concave: true,
                derivative_at_zero: None,
            },
            GainFamily::Custom(g) => g.flags(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            GainFamily::Identity => "identity".into(),
            GainFamily::AlphaGain(a) => format!("alpha:{a}"),
            GainFamily::LogGain => "log".into(),
            GainFamily::Custom(g) => format!("custom:{}", g.label()),
        }
    }

    pub fn is_log(&self) -> bool {
        matches!(self, GainFamily::LogGain)
    }
}

/// The two hypothesis sets the leakage layer conditions on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionSet {
    /// Concave, zero at zero, finite positive slope at zero: gain-function
    /// leakage collapses to maximal leakage.
    Collapse,
    /// Non-negative, zero at zero, continuous at zero, finite positive sup:
    /// the variational divergence characterization applies.
    Variational,
}

impl std::fmt::Display for ConditionSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConditionSet::Collapse => write!(f, "collapse"),
            ConditionSet::Variational => write!(f, "variational"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct HypothesisReport {
    pub set: ConditionSet,
    pub passed: bool,
    pub checks: Vec<ConditionCheck>,
}

/// Checks a gain against one of the hypothesis sets, using exact flags for
/// built-ins and declared flags for custom gains.
pub fn validate_hypotheses(g: &GainFamily, set: ConditionSet) -> HypothesisReport {
    let flags = g.flags();
    let mut checks = Vec::new();
    match set {
        ConditionSet::Collapse => {
            checks.push(ConditionCheck {
                name: "concave",
                passed: flags.concave,
                detail: format!("declared concave = {}", flags.concave),
            });
            checks.push(ConditionCheck {
                name: "zero_at_zero",
                passed: flags.zero_at_zero,
                detail: format!("declared g(0) = 0: {}", flags.zero_at_zero),
            });
            let slope_ok = flags
                .derivative_at_zero
                .map(|d| d.is_finite() && d > 0.0)
                .unwrap_or(false);
            checks.push(ConditionCheck {
                name: "finite_positive_slope_at_zero",
                passed: slope_ok,
                detail: match flags.derivative_at_zero {
                    Some(d) => format!("declared slope {d}"),
                    None => "no finite slope declared".into(),
                },
            });
        }
        ConditionSet::Variational => {
            checks.push(ConditionCheck {
                name: "nonneg",
                passed: flags.nonneg,
                detail: format!("declared non-negative = {}", flags.nonneg),
            });
            checks.push(ConditionCheck {
                name: "zero_at_zero",
                passed: flags.zero_at_zero,
                detail: format!("declared g(0) = 0: {}", flags.zero_at_zero),
            });
            checks.push(ConditionCheck {
                name: "continuous_at_zero",
                passed: flags.continuous_at_zero,
                detail: format!("declared continuous at 0 = {}", flags.continuous_at_zero),
            });
            let sup_ok = flags
                .bounded_sup
                .map(|s| s.is_finite() && s > 0.0)
                .unwrap_or(false);
            checks.push(ConditionCheck {
                name: "finite_positive_sup",
                passed: sup_ok,
                detail: match flags.bounded_sup {
                    Some(s) => format!("declared sup {s}"),
                    None => "no finite sup declared".into(),
                },
            });
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    HypothesisReport {
        set,
        passed,
        checks,
    }
}

/// Result of maximizing E[g(P_guess(X))] over guessing distributions.
#[derive(Debug, Clone)]
pub struct MaxExpectedGain {
    pub value: f64,
    /// A maximizing (or, for custom gains, best-found) guessing distribution.
    pub strategy: Pmf,
    /// True when the value comes from the numeric path rather than a closed
    /// form; no global-optimality claim is made for non-concave gains.
    pub approximate: bool,
    /// First-order optimality residual at the returned strategy, for the
    /// numeric path.
    pub stationarity_residual: Option<f64>,
}

/// Number of starts for the numeric path.
const MULTISTARTS: usize = 16;
/// Objective tolerance for the numeric path.
const NUMERIC_TOL: f64 = 1e-6;
/// Fixed seed: the numeric path must be deterministic.
const NUMERIC_SEED: u64 = 0x6a1f_5eed;

/// Maximal expected gain max over q of sum_x p(x) g(q(x)).
///
/// Closed forms: Identity gives (max p, a point mass on an argmax);
/// AlphaGain(a) gives (a/(a-1) (sum p^a)^(1/a), the order-a tilt of p);
/// LogGain gives (-H(p), p itself). Custom gains run seeded multistart
/// projected-gradient ascent with grid-style corner starts.
pub fn max_expected_gain(p: &Pmf, g: &GainFamily) -> MaxExpectedGain {
    match g {
        GainFamily::Identity => {
            let best = p.max_prob();
            let argmax = p
                .probs()
                .iter()
                .position(|&v| v == best)
                .expect("pmf has a maximum");
            MaxExpectedGain {
                value: best,
                strategy: Pmf::point_mass(p.alphabet().clone(), argmax),
                approximate: false,
                stationarity_residual: None,
            }
        }
        GainFamily::AlphaGain(a) => {
            let value = a / (a - 1.0) * (log_power_sum(p.probs(), *a) / a).exp();
            MaxExpectedGain {
                value,
                strategy: tilt(p, OrderAlpha::Finite(*a)),
                approximate: false,
                stationarity_residual: None,
            }
        }
        GainFamily::LogGain => MaxExpectedGain {
            value: -shannon_entropy(p).value(),
            strategy: p.clone(),
            approximate: false,
            stationarity_residual: None,
        },
        GainFamily::Custom(gf) => {
            let n = p.len();
            let probs = p.probs().to_vec();
            let obj = move |s: &[f64]| -> f64 {
                probs
                    .iter()
                    .zip(s)
                    .map(|(&pi, &si)| if pi > 0.0 { pi * gf.eval(si) } else { 0.0 })
                    .sum()
            };
            let mut starts: Vec<Vec<f64>> = Vec::with_capacity(MULTISTARTS);
            for i in 0..n.min(8) {
                let mut corner = vec![0.0; n];
                corner[i] = 1.0;
                starts.push(corner);
            }
            starts.push(vec![1.0 / n as f64; n]);
            starts.push(p.probs().to_vec());
            starts.push(tilt(p, OrderAlpha::Finite(2.0)).probs().to_vec());
            starts.push(tilt(p, OrderAlpha::Finite(0.5)).probs().to_vec());
            let mut rng = ChaCha8Rng::seed_from_u64(NUMERIC_SEED);
            while starts.len() < MULTISTARTS {
                let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
                starts.push(raw);
            }
            let mut best: Option<AscentResult> = None;
            for start in &starts {
                let result = ascend_on_simplex(&obj, start, NUMERIC_TOL, 2000);
                if best
                    .as_ref()
                    .map(|b| result.value > b.value)
                    .unwrap_or(true)
                {
                    best = Some(result);
                }
            }
            let best = best.expect("at least one start");
            MaxExpectedGain {
                value: best.value,
                strategy: Pmf::from_weights(p.alphabet().clone(), best.x)
                    .expect("projected iterate is a distribution"),
                approximate: true,
                stationarity_residual: Some(best.stationarity_residual),
            }
        }
    }
}

/// Parses a gain spec: "identity", "alpha:<a>", "log", or
/// "custom:<expression in t>" (operators + - * / ^, functions min, max,
/// sin, log). Custom gains get empirically inferred flags.
pub fn parse_gain_spec(spec: &str) -> Result<GainFamily> {
    let spec = spec.trim();
    match spec {
        "identity" => return Ok(GainFamily::Identity),
        "log" => return Ok(GainFamily::LogGain),
        _ => {}
    }
    if let Some(rest) = spec.strip_prefix("alpha:") {
        let a: f64 = rest
            .trim()
            .parse()
            .map_err(|_| Error::ParseError(format!("bad alpha in gain spec {spec:?}")))?;
        if !(a.is_finite() && a > 0.0 && a != 1.0) {
            return Err(Error::InvalidGain(format!(
                "alpha gain requires alpha in (0,1) or (1,inf), got {a}"
            )));
        }
        return Ok(GainFamily::AlphaGain(a));
    }
    if let Some(rest) = spec.strip_prefix("custom:") {
        let expr = expr::parse(rest)?;
        let eval = move |t: f64| expr.eval(t);
        let flags = infer_flags(&eval);
        let gf = GainFunction::new(rest.trim().to_string(), eval, flags)?;
        return Ok(GainFamily::Custom(gf));
    }
    Err(Error::ParseError(format!(
        "unknown gain spec {spec:?}; expected identity | alpha:<a> | log | custom:<expr>"
    )))
}

/// Empirically infers flags for a black-box gain, using the same grid and
/// probes as the construction check so the result is self-consistent.
pub fn infer_flags(eval: &(dyn Fn(f64) -> f64 + '_)) -> GainFlags {
    let n = (1.0 / CHECK_GRID_STEP) as usize;
    let values: Vec<f64> = (0..=n).map(|i| eval(i as f64 * CHECK_GRID_STEP)).collect();
    let g0 = values[0];
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let nonneg = min >= -1e-12;
    let zero_at_zero = g0.is_finite() && g0.abs() <= 1e-12;
    let continuous_at_zero = g0.is_finite() && (eval(1e-9) - g0).abs() <= 1e-2 * (1.0 + g0.abs());
    let bounded_sup = if max.is_finite() { Some(max) } else { None };
    let concave = values
        .windows(3)
        .all(|w| w[2] - 2.0 * w[1] + w[0] <= CHECK_TOL)
        && !values.iter().any(|v| v.is_nan());
    let derivative_at_zero = if g0.is_finite() {
        let s1 = (eval(1e-5) - g0) / 1e-5;
        let s2 = (eval(1e-6) - g0) / 1e-6;
        if s1.is_finite()
            && s2.is_finite()
            && s2 > 0.0
            && (s1 - s2).abs() <= 1e-2 * (1.0 + s2.abs())
        {
            Some(s2)
        } else {
            None
        }
    } else {
        None
    };
    GainFlags {
        nonneg,
        zero_at_zero,
        continuous_at_zero,
        bounded_sup,
        concave,
        derivative_at_zero,
    }
}

/// Tiny recursive-descent parser for gain expressions in the variable t.
mod expr {
    use crate::error::Error;
    use crate::Result;

    #[derive(Debug, Clone)]
    pub(super) enum Expr {
        Const(f64),
        Var,
        Add(Box<Expr>, Box<Expr>),
        Sub(Box<Expr>, Box<Expr>),
        Mul(Box<Expr>, Box<Expr>),
        Div(Box<Expr>, Box<Expr>),
        Pow(Box<Expr>, Box<Expr>),
        Neg(Box<Expr>),
        Min(Box<Expr>, Box<Expr>),
        Max(Box<Expr>, Box<Expr>),
        Sin(Box<Expr>),
        Log(Box<Expr>),
    }

    impl Expr {
        pub(super) fn eval(&self, t: f64) -> f64 {
            match self {
                Expr::Const(c) => *c,
                Expr::Var => t,
                Expr::Add(a, b) => a.eval(t) + b.eval(t),
                Expr::Sub(a, b) => a.eval(t) - b.eval(t),
                Expr::Mul(a, b) => a.eval(t) * b.eval(t),
                Expr::Div(a, b) => a.eval(t) / b.eval(t),
                Expr::Pow(a, b) => a.eval(t).powf(b.eval(t)),
                Expr::Neg(a) => -a.eval(t),
                Expr::Min(a, b) => a.eval(t).min(b.eval(t)),
                Expr::Max(a, b) => a.eval(t).max(b.eval(t)),
                Expr::Sin(a) => a.eval(t).sin(),
                Expr::Log(a) => a.eval(t).ln(),
            }
        }
    }

    pub(super) fn parse(input: &str) -> Result<Expr> {
        let mut p = Parser {
            chars: input.chars().collect(),
            pos: 0,
            input,
        };
        let e = p.expression()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }

    struct Parser<'a> {
        chars: Vec<char>,
        pos: usize,
        input: &'a str,
    }

    impl Parser<'_> {
        fn error(&self, msg: &str) -> Error {
            Error::ParseError(format!(
                "gain expression {:?}: {msg} at offset {}",
                self.input, self.pos
            ))
        }

        fn skip_ws(&mut self) {
            while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
                self.pos += 1;
            }
        }

        fn peek(&mut self) -> Option<char> {
            self.skip_ws();
            self.chars.get(self.pos).copied()
        }

        fn eat(&mut self, c: char) -> bool {
            if self.peek() == Some(c) {
                self.pos += 1;
                true
            } else {
                false
            }
        }

        fn expression(&mut self) -> Result<Expr> {
            let mut lhs = self.term()?;
            loop {
                if self.eat('+') {
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                } else if self.eat('-') {
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                } else {
                    return Ok(lhs);
                }
            }
        }

        fn term(&mut self) -> Result<Expr> {
            let mut lhs = self.factor()?;
            loop {
                if self.eat('*') {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                } else if self.eat('/') {
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                } else {
                    return Ok(lhs);
                }
            }
        }

        // right-associative power binds tighter than * and /
        fn factor(&mut self) -> Result<Expr> {
            let base = self.unary()?;
            if self.eat('^') {
                let exp = self.factor()?;
                return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
            }
            Ok(base)
        }

        fn unary(&mut self) -> Result<Expr> {
            if self.eat('-') {
                return Ok(Expr::Neg(Box::new(self.unary()?)));
            }
            self.primary()
        }

        fn primary(&mut self) -> Result<Expr> {
            match self.peek() {
                Some('(') => {
                    self.pos += 1;
                    let e = self.expression()?;
                    if !self.eat(')') {
                        return Err(self.error("expected ')'"));
                    }
                    Ok(e)
                }
                Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
                Some(c) if c.is_ascii_alphabetic() => self.ident(),
                _ => Err(self.error("expected a term")),
            }
        }

        fn number(&mut self) -> Result<Expr> {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() {
                let c = self.chars[self.pos];
                if c.is_ascii_digit() || c == '.' {
                    self.pos += 1;
                } else if (c == 'e' || c == 'E')
                    && self.pos > start
                    && self
                        .chars
                        .get(self.pos + 1)
                        .map(|n| n.is_ascii_digit() || *n == '-' || *n == '+')
                        .unwrap_or(false)
                {
                    self.pos += 2;
                } else {
                    break;
                }
            }
            let text: String = self.chars[start..self.pos].iter().collect();
            text.parse::<f64>()
                .map(Expr::Const)
                .map_err(|_| self.error("bad number"))
        }

        fn ident(&mut self) -> Result<Expr> {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphabetic() {
                self.pos += 1;
            }
            let name: String = self.chars[start..self.pos].iter().collect();
            match name.as_str() {
                "t" => Ok(Expr::Var),
                "min" | "max" => {
                    if !self.eat('(') {
                        return Err(self.error("expected '('"));
                    }
                    let a = self.expression()?;
                    if !self.eat(',') {
                        return Err(self.error("expected ','"));
                    }
                    let b = self.expression()?;
                    if !self.eat(')') {
                        return Err(self.error("expected ')'"));
                    }
                    if name == "min" {
                        Ok(Expr::Min(Box::new(a), Box::new(b)))
                    } else {
                        Ok(Expr::Max(Box::new(a), Box::new(b)))
                    }
                }
                "sin" | "log" => {
                    if !self.eat('(') {
                        return Err(self.error("expected '('"));
                    }
                    let a = self.expression()?;
                    if !self.eat(')') {
                        return Err(self.error("expected ')'"));
                    }
                    if name == "sin" {
                        Ok(Expr::Sin(Box::new(a)))
                    } else {
                        Ok(Expr::Log(Box::new(a)))
                    }
                }
                other => Err(self.error(&format!("unknown identifier {other:?}"))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Alphabet;
    use approx::assert_abs_diff_eq;

    fn pmf(probs: &[f64]) -> Pmf {
        Pmf::new(Alphabet::indexed("x", probs.len()).unwrap(), probs.to_vec()).unwrap()
    }

    #[test]
    fn identity_gain_maximum_is_max_probability() {
        let p = pmf(&[0.2, 0.5, 0.3]);
        let r = max_expected_gain(&p, &GainFamily::Identity);
        assert_eq!(r.value, 0.5);
        assert_eq!(r.strategy.probs(), &[0.0, 1.0, 0.0]);
        assert!(!r.approximate);
    }

    #[test]
    fn alpha_gain_maximum_matches_power_sum_closed_form() {
        let p = pmf(&[0.5, 0.3, 0.2]);
        let a = 2.0;
        let r = max_expected_gain(&p, &GainFamily::AlphaGain(a));
        let expected = 2.0 * (0.25_f64 + 0.09 + 0.04).sqrt();
        assert_abs_diff_eq!(r.value, expected, epsilon = 1e-14);
        let t = tilt(&p, OrderAlpha::Finite(a));
        assert_eq!(r.strategy.probs(), t.probs());
    }

    #[test]
    fn log_gain_maximum_is_negative_entropy_at_p() {
        let p = pmf(&[0.7, 0.3]);
        let r = max_expected_gain(&p, &GainFamily::LogGain);
        assert_abs_diff_eq!(
            r.value,
            0.7 * 0.7_f64.ln() + 0.3 * 0.3_f64.ln(),
            epsilon = 1e-14
        );
        assert_eq!(r.strategy.probs(), p.probs());
    }

    #[test]
    fn custom_numeric_path_matches_alpha_closed_form() {
        // Same function as AlphaGain(2) fed through the numeric path.
        let gf = GainFunction::new(
            "2*sqrtish",
            |t: f64| 2.0 * t.sqrt(),
            GainFlags {
                nonneg: true,
                zero_at_zero: true,
                continuous_at_zero: true,
                bounded_sup: Some(2.0),
                concave: true,
                derivative_at_zero: None,
            },
        )
        .unwrap();
        let p = pmf(&[0.6, 0.3, 0.1]);
        let numeric = max_expected_gain(&p, &GainFamily::Custom(gf));
        let closed = max_expected_gain(&p, &GainFamily::AlphaGain(2.0));
        assert!(numeric.approximate);
        assert_abs_diff_eq!(numeric.value, closed.value, epsilon = 1e-4);
        assert!(numeric.stationarity_residual.unwrap() < 1e-3);
    }

    #[test]
    fn inconsistent_declarations_are_rejected() {
        // t^2 is convex; declaring it concave must fail.
        let r = GainFunction::new(
            "square",
            |t: f64| t * t,
            GainFlags {
                concave: true,
                ..GainFlags::default()
            },
        );
        assert!(matches!(r, Err(Error::InvalidGain(_))));

        // Declaring zero_at_zero for a function with g(0) = 1 must fail.
        let r = GainFunction::new(
            "shifted",
            |_t: f64| 1.0,
            GainFlags {
                zero_at_zero: true,
                ..GainFlags::default()
            },
        );
        assert!(matches!(r, Err(Error::InvalidGain(_))));
    }

    #[test]
    fn hypothesis_sets_classify_builtins() {
        assert!(validate_hypotheses(&GainFamily::Identity, ConditionSet::Collapse).passed);
        assert!(validate_hypotheses(&GainFamily::Identity, ConditionSet::Variational).passed);
        // Infinite slope at zero: fails collapse, passes variational.
        let a2 = GainFamily::AlphaGain(2.0);
        assert!(!validate_hypotheses(&a2, ConditionSet::Collapse).passed);
        assert!(validate_hypotheses(&a2, ConditionSet::Variational).passed);
        // Log gain fails both.
        assert!(!validate_hypotheses(&GainFamily::LogGain, ConditionSet::Collapse).passed);
        assert!(!validate_hypotheses(&GainFamily::LogGain, ConditionSet::Variational).passed);
    }

    #[test]
    fn parsed_piecewise_linear_gain_passes_collapse() {
        let g = parse_gain_spec("custom:min(3*t, 0.5)").unwrap();
        let report = validate_hypotheses(&g, ConditionSet::Collapse);
        assert!(report.passed, "checks: {:?}", report.checks);
        assert!(validate_hypotheses(&g, ConditionSet::Variational).passed);
        assert_abs_diff_eq!(g.eval(0.1), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(g.eval(0.9), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn gain_spec_parser_accepts_grammar_and_rejects_junk() {
        assert!(matches!(
            parse_gain_spec("identity"),
            Ok(GainFamily::Identity)
        ));
        assert!(matches!(
            parse_gain_spec("alpha:2.0"),
            Ok(GainFamily::AlphaGain(a)) if a == 2.0
        ));
        assert!(matches!(parse_gain_spec("log"), Ok(GainFamily::LogGain)));
        let g = parse_gain_spec("custom:1 - (1 - t)^2").unwrap();
        assert_abs_diff_eq!(g.eval(0.25), 1.0 - 0.75 * 0.75, epsilon = 1e-15);
        assert!(parse_gain_spec("alpha:1.0").is_err());
        assert!(parse_gain_spec("custom:q + 1").is_err());
        assert!(parse_gain_spec("custom:min(t").is_err());
        assert!(parse_gain_spec("bogus").is_err());
    }

    #[test]
    fn relabeling_the_alphabet_does_not_change_the_value() {
        let g = parse_gain_spec("custom:sin(t)").unwrap();
        let p1 = pmf(&[0.5, 0.3, 0.2]);
        let p2 = Pmf::new(Alphabet::new(["u", "v", "w"]).unwrap(), vec![0.5, 0.3, 0.2]).unwrap();
        let r1 = max_expected_gain(&p1, &g);
        let r2 = max_expected_gain(&p2, &g);
        assert_eq!(r1.value, r2.value);
    }
}
