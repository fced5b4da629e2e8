//! Depth-bounded inference of u-equivalence judgments.
//!
//! Judgments relate tuples of hypernatural terms. The rules are:
//!
//! | rule           | premises            | conclusion                          |
//! |----------------|---------------------|-------------------------------------|
//! | reflexivity    |                     | `x ~ x`                             |
//! | axiom          |                     | a listed fact                       |
//! | scheme         |                     | `s^j(a) + p * s^j(b) ~ s^j(c)`, `level(p) <= j` |
//! | symmetry       | `x ~ y`             | `y ~ x`                             |
//! | transitivity   | `x ~ z`, `z ~ y`    | `x ~ y`                             |
//! | star lift      |                     | `x ~ s^n(x)`                        |
//! | shift          | `x ~ y`             | `s^n(x) ~ s^n(y)`                   |
//! | congruence     | `x ~ y`             | `f(x) ~ f(y)`, `f` standard arithmetic |
//! | projection     | `(.., x, ..) ~ (.., y, ..)` | `x ~ y`                     |
//! | tensor         | `x_i ~ y_i`, levels `<= l` | `(s^n_i(x_i)) ~ (s^m_i(y_i))`, gaps `>= l` |
//!
//! Facts are symmetric: every conclusion is accepted in either orientation.
//! A scheme `a ~ b + l * c` is read as holding for every standard `l`;
//! instances with `l` up to a bound are listed as facts, and shifting the
//! whole scheme by `s^j` admits any parameter of level at most `j`.
//!
//! The prover answers `Unknown` when it runs out of depth. It never
//! claims that two terms are not u-equivalent.

mod antiunify;
mod check;
mod file;
mod prover;

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::arith::{ArithError, Poly};
use crate::hypernat::{format_term, HTerm};

pub use check::{check_derivation, CheckError};
pub use file::{parse_axiom_file, parse_judgment, AxiomFileError};
pub use prover::{derive, DeriveOutcome, Prover};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UequivError {
    #[error("tuples of different arity ({0} and {1})")]
    ArityMismatch(usize, usize),
    #[error("empty tuple")]
    EmptyTuple,
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("tensor side condition violated: {0}")]
    SideConditionViolated(String),
    #[error("scheme is not linear in its parameter")]
    NotLinear,
}

/// `lhs ~u rhs` over canonical terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UFact {
    lhs: Vec<HTerm>,
    rhs: Vec<HTerm>,
}

impl UFact {
    pub fn new(lhs: Vec<HTerm>, rhs: Vec<HTerm>) -> Result<Self, UequivError> {
        if lhs.len() != rhs.len() {
            return Err(UequivError::ArityMismatch(lhs.len(), rhs.len()));
        }
        if lhs.is_empty() {
            return Err(UequivError::EmptyTuple);
        }
        Ok(UFact {
            lhs: canonical_tuple(&lhs)?,
            rhs: canonical_tuple(&rhs)?,
        })
    }

    pub fn single(lhs: HTerm, rhs: HTerm) -> Result<Self, UequivError> {
        UFact::new(vec![lhs], vec![rhs])
    }

    pub fn lhs(&self) -> &[HTerm] {
        &self.lhs
    }

    pub fn rhs(&self) -> &[HTerm] {
        &self.rhs
    }

    pub fn arity(&self) -> usize {
        self.lhs.len()
    }

    pub fn swapped(&self) -> UFact {
        UFact {
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
        }
    }

    pub fn matches(&self, other: &UFact) -> bool {
        self == other || (self.lhs == other.rhs && self.rhs == other.lhs)
    }

    /// Applies `s^n` to both sides.
    pub fn star_power(&self, n: u32) -> Result<UFact, UequivError> {
        UFact::new(star_tuple(&self.lhs, n), star_tuple(&self.rhs, n))
    }
}

fn canonical_tuple(t: &[HTerm]) -> Result<Vec<HTerm>, ArithError> {
    t.iter().map(HTerm::canonical).collect()
}

pub(crate) fn star_tuple(t: &[HTerm], n: u32) -> Vec<HTerm> {
    t.iter().map(|x| x.star_power(n)).collect()
}

pub(crate) fn tuple_level(t: &[HTerm]) -> u32 {
    t.iter().map(HTerm::level).max().unwrap_or(0)
}

fn write_tuple(t: &[HTerm], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if t.len() == 1 {
        return f.write_str(&format_term(&t[0]));
    }
    f.write_str("(")?;
    for (i, x) in t.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        f.write_str(&format_term(x))?;
    }
    f.write_str(")")
}

impl fmt::Display for UFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(&self.lhs, f)?;
        f.write_str(" ~u ")?;
        write_tuple(&self.rhs, f)
    }
}

/// A standard arithmetic function of the hole variables `?0, ?1, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Context {
    Hole(usize),
    Const(BigUint),
    Add(Box<Context>, Box<Context>),
    Mul(Box<Context>, Box<Context>),
    Pow(Box<Context>, Box<Context>),
}

impl Context {
    pub fn substitute(&self, args: &[HTerm]) -> Option<HTerm> {
        Some(match self {
            Context::Hole(i) => args.get(*i)?.clone(),
            Context::Const(c) => HTerm::Std(c.clone()),
            Context::Add(a, b) => HTerm::add(a.substitute(args)?, b.substitute(args)?),
            Context::Mul(a, b) => HTerm::mul(a.substitute(args)?, b.substitute(args)?),
            Context::Pow(a, b) => HTerm::pow(a.substitute(args)?, b.substitute(args)?),
        })
    }

    pub fn is_hole(&self) -> bool {
        matches!(self, Context::Hole(_))
    }

    fn precedence(&self) -> u8 {
        match self {
            Context::Add(..) => 1,
            Context::Mul(..) => 2,
            Context::Pow(..) => 3,
            _ => 4,
        }
    }

    fn write_wrapped(&self, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Context::Hole(i) => write!(f, "?{i}"),
            Context::Const(c) => write!(f, "{c}"),
            Context::Add(a, b) => {
                a.write_wrapped(1, f)?;
                f.write_str(" + ")?;
                b.write_wrapped(2, f)
            }
            Context::Mul(a, b) => {
                a.write_wrapped(2, f)?;
                f.write_str(" * ")?;
                b.write_wrapped(3, f)
            }
            Context::Pow(a, b) => {
                a.write_wrapped(4, f)?;
                f.write_str("^")?;
                b.write_wrapped(3, f)
            }
        }
    }
}

/// One side of a scheme: `base + l * slope`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct SchemeSide {
    base: HTerm,
    slope: HTerm,
}

impl SchemeSide {
    fn from_samples(
        at0: &HTerm,
        at1: &HTerm,
        at2: &HTerm,
        at3: &HTerm,
    ) -> Result<Self, UequivError> {
        let p0 = Poly::from_hterm(at0)?;
        let p1 = Poly::from_hterm(at1)?;
        let slope = p1.checked_sub(&p0).ok_or(UequivError::NotLinear)?;
        for (k, sample) in [(2u32, at2), (3, at3)] {
            let expected = p0.add(&slope.mul(&Poly::constant(BigUint::from(k)))?);
            if Poly::from_hterm(sample)? != expected {
                return Err(UequivError::NotLinear);
            }
        }
        Ok(SchemeSide {
            base: p0.to_hterm(),
            slope: slope.to_hterm(),
        })
    }

    fn at(&self, shift: u32, parameter: &HTerm) -> HTerm {
        HTerm::add(
            self.base.star_power(shift),
            HTerm::mul(parameter.clone(), self.slope.star_power(shift)),
        )
    }

    /// Solves `target = s^shift(base) + p * s^shift(slope)` for `p`.
    fn solve(&self, shift: u32, target: &HTerm) -> Option<Option<HTerm>> {
        let base = Poly::from_hterm(&self.base.star_power(shift)).ok()?;
        let slope = Poly::from_hterm(&self.slope.star_power(shift)).ok()?;
        let target = Poly::from_hterm(target).ok()?;
        let rest = target.checked_sub(&base)?;
        if slope.is_zero() {
            return rest.is_zero().then_some(None);
        }
        Some(Some(rest.checked_div_monomial(&slope)?.to_hterm()))
    }
}

/// `lhs(l) ~u rhs(l)` for every standard `l`, both sides linear in `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    parameter: String,
    lhs: SchemeSide,
    rhs: SchemeSide,
}

impl Scheme {
    /// Builds a scheme from a side evaluator `sample(l) -> (lhs, rhs)`,
    /// checking linearity on `l = 0..=3`.
    pub fn from_samples<F>(parameter: &str, mut sample: F) -> Result<Self, UequivError>
    where
        F: FnMut(u64) -> Result<(HTerm, HTerm), UequivError>,
    {
        let s: Vec<(HTerm, HTerm)> = (0..4).map(&mut sample).collect::<Result<_, _>>()?;
        Ok(Scheme {
            parameter: parameter.to_string(),
            lhs: SchemeSide::from_samples(&s[0].0, &s[1].0, &s[2].0, &s[3].0)?,
            rhs: SchemeSide::from_samples(&s[0].1, &s[1].1, &s[2].1, &s[3].1)?,
        })
    }

    pub fn parameter(&self) -> &str {
        &self.parameter
    }

    /// The scheme shifted by `s^shift` and instantiated at `parameter`.
    pub fn at(&self, shift: u32, parameter: &HTerm) -> Result<UFact, UequivError> {
        UFact::single(self.lhs.at(shift, parameter), self.rhs.at(shift, parameter))
    }

    /// Parameters `p` for which `self.at(shift, p)` matches `goal`.
    fn solve(&self, shift: u32, goal: &UFact) -> Vec<HTerm> {
        if goal.arity() != 1 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (x, y) in [(&goal.lhs[0], &goal.rhs[0]), (&goal.rhs[0], &goal.lhs[0])] {
            let from_lhs = self.lhs.solve(shift, x);
            let from_rhs = self.rhs.solve(shift, y);
            let p = match (from_lhs, from_rhs) {
                (Some(Some(p)), _) | (_, Some(Some(p))) => p,
                _ => continue,
            };
            if let Ok(fact) = self.at(shift, &p) {
                if fact.matches(goal) && !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |side: &SchemeSide| {
            if side.slope == HTerm::std(0) {
                format_term(&side.base)
            } else {
                format!(
                    "{} + {} * {}",
                    format_term(&side.base),
                    self.parameter,
                    format_term(&side.slope)
                )
            }
        };
        write!(
            f,
            "scheme {}: {} ~u {}",
            self.parameter,
            show(&self.lhs),
            show(&self.rhs)
        )
    }
}

/// Listed facts plus schemes. Scheme instances with standard parameters
/// `0..=scheme_bound` are available as facts.
#[derive(Debug, Clone, Default)]
pub struct AxiomSet {
    pub facts: Vec<UFact>,
    pub schemes: Vec<Scheme>,
    pub scheme_bound: u64,
}

pub const DEFAULT_SCHEME_BOUND: u64 = 8;

impl AxiomSet {
    pub fn new() -> Self {
        AxiomSet {
            facts: Vec::new(),
            schemes: Vec::new(),
            scheme_bound: DEFAULT_SCHEME_BOUND,
        }
    }

    pub fn with_fact(mut self, fact: UFact) -> Self {
        self.facts.push(fact);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Reflexivity,
    Axiom {
        index: usize,
    },
    Scheme {
        scheme: usize,
        shift: u32,
        parameter: HTerm,
    },
    Symmetry,
    Transitivity,
    StarLift {
        power: u32,
    },
    Shift {
        power: u32,
    },
    Congruence {
        contexts: Vec<Context>,
    },
    Projection {
        index: usize,
    },
    Tensor {
        level: u32,
        lhs_shifts: Vec<u32>,
        rhs_shifts: Vec<u32>,
    },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Reflexivity => "reflexivity",
            Rule::Axiom { .. } => "axiom",
            Rule::Scheme { .. } => "scheme",
            Rule::Symmetry => "symmetry",
            Rule::Transitivity => "transitivity",
            Rule::StarLift { .. } => "star-lift",
            Rule::Shift { .. } => "shift",
            Rule::Congruence { .. } => "congruence",
            Rule::Projection { .. } => "projection",
            Rule::Tensor { .. } => "tensor",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Axiom { index } => write!(f, "axiom #{index}"),
            Rule::Scheme {
                scheme,
                shift,
                parameter,
            } => {
                write!(
                    f,
                    "scheme #{scheme} shift {shift} at {}",
                    format_term(parameter)
                )
            }
            Rule::StarLift { power } => write!(f, "star-lift s^{power}"),
            Rule::Shift { power } => write!(f, "shift s^{power}"),
            Rule::Congruence { contexts } => {
                let parts: Vec<_> = contexts.iter().map(ToString::to_string).collect();
                write!(f, "congruence ({})", parts.join(", "))
            }
            Rule::Projection { index } => write!(f, "projection {index}"),
            Rule::Tensor {
                level,
                lhs_shifts,
                rhs_shifts,
            } => {
                write!(
                    f,
                    "tensor level {level} shifts {lhs_shifts:?} / {rhs_shifts:?}"
                )
            }
            other => f.write_str(other.name()),
        }
    }
}

/// One inference. `premises` index earlier steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub premises: Vec<usize>,
    pub conclusion: UFact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub goal: UFact,
    pub steps: Vec<Step>,
}

impl Derivation {
    /// Appends a projection onto component `index` of the final conclusion.
    pub fn project(&self, index: usize) -> Result<Derivation, UequivError> {
        let last = self.steps.last().ok_or(UequivError::EmptyTuple)?;
        let c = &last.conclusion;
        if index >= c.arity() {
            return Err(UequivError::ArityMismatch(index, c.arity()));
        }
        let fact = UFact::single(c.lhs[index].clone(), c.rhs[index].clone())?;
        let mut steps = self.steps.clone();
        steps.push(Step {
            rule: Rule::Projection { index },
            premises: vec![steps.len() - 1],
            conclusion: fact.clone(),
        });
        Ok(Derivation { goal: fact, steps })
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "goal: {}", self.goal)?;
        for (i, step) in self.steps.iter().enumerate() {
            let premises: Vec<_> = step.premises.iter().map(|p| format!("[{p}]")).collect();
            write!(f, "[{i}] {}  by {}", step.conclusion, step.rule)?;
            if !premises.is_empty() {
                write!(f, " from {}", premises.join(" "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Combines single-term facts `x_i ~ y_i`, all of level at most `level`,
/// into `(s^n_1(x_1), ...) ~ (s^m_1(y_1), ...)`.
///
/// Both shift sequences must be strictly increasing with consecutive gaps
/// of at least `level`.
pub fn tensor_pair(
    facts: &[UFact],
    level: u32,
    lhs_shifts: &[u32],
    rhs_shifts: &[u32],
) -> Result<UFact, UequivError> {
    let k = facts.len();
    if k == 0 {
        return Err(UequivError::EmptyTuple);
    }
    if lhs_shifts.len() != k || rhs_shifts.len() != k {
        return Err(UequivError::SideConditionViolated(format!(
            "{k} facts need {k} shifts on each side"
        )));
    }
    for f in facts {
        if f.arity() != 1 {
            return Err(UequivError::SideConditionViolated(
                "premises must be single terms".into(),
            ));
        }
        let l = f.lhs[0].level().max(f.rhs[0].level());
        if l > level {
            return Err(UequivError::SideConditionViolated(format!(
                "premise {f} has level {l} above {level}"
            )));
        }
    }
    for shifts in [lhs_shifts, rhs_shifts] {
        for w in shifts.windows(2) {
            if w[1] <= w[0] || w[1] < w[0] + level {
                return Err(UequivError::SideConditionViolated(format!(
                    "shifts {} and {} are closer than level {level}",
                    w[0], w[1]
                )));
            }
        }
    }
    let lhs = facts
        .iter()
        .zip(lhs_shifts)
        .map(|(f, &n)| f.lhs[0].star_power(n))
        .collect();
    let rhs = facts
        .iter()
        .zip(rhs_shifts)
        .map(|(f, &m)| f.rhs[0].star_power(m))
        .collect();
    UFact::new(lhs, rhs)
}
