//! A symbolic model of the hypernatural levels `N_0 ⊂ N_1 ⊂ N_2 ⊂ ...`.
//!
//! Elements are standard naturals, images of fresh generators under a
//! reduced normal-form map, or arithmetic over these. A generator born at
//! level `p` stands for an element of `N_p \ N_(p-1)`.

mod env;
mod syntax;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::arith::{ArithError, Poly};
use crate::composition::{Composition, MapAtom, NormalForm};

pub use env::{EnvError, GeneratorEnv};
pub use syntax::{format_term, parse_term, TermParser, TermSyntaxError};

/// A fresh element of `N_birth_level \ N_(birth_level - 1)`.
///
/// `base_rank` orders generators born at the same level.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    birth_level: u32,
    base_rank: u32,
    name: Arc<str>,
}

impl Generator {
    /// Creates a generator outside any registry. Use [`GeneratorEnv`] to
    /// enforce unique `(birth_level, base_rank)` pairs.
    pub fn new(name: &str, birth_level: u32, base_rank: u32) -> Self {
        assert!(birth_level >= 1, "generators are born at level 1 or above");
        Generator {
            birth_level,
            base_rank,
            name: Arc::from(name),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn birth_level(&self) -> u32 {
        self.birth_level
    }

    pub fn base_rank(&self) -> u32 {
        self.base_rank
    }
}

/// A reduced map image `Ψ(g)`: every factor of `Ψ` raises the running level.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ImgAtom {
    map: NormalForm,
    generator: Generator,
}

impl ImgAtom {
    pub fn new(map: &NormalForm, generator: Generator) -> Self {
        ImgAtom {
            map: map.reduce_at(generator.birth_level),
            generator,
        }
    }

    pub fn map(&self) -> &NormalForm {
        &self.map
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn level(&self) -> u32 {
        self.map.level_transport(self.generator.birth_level)
    }

    pub fn apply(&self, m: MapAtom) -> ImgAtom {
        if self.level() <= m.index() {
            return self.clone();
        }
        let mut factors = vec![m];
        factors.extend_from_slice(self.map.to_composition().factors());
        ImgAtom::new(
            &Composition::new(factors).normalize(),
            self.generator.clone(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HTerm {
    Std(BigUint),
    Img(ImgAtom),
    Add(Box<HTerm>, Box<HTerm>),
    Mul(Box<HTerm>, Box<HTerm>),
    Pow(Box<HTerm>, Box<HTerm>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderResult {
    Lt,
    Gt,
    Eq,
    Incomparable,
}

impl OrderResult {
    pub fn reverse(self) -> Self {
        match self {
            OrderResult::Lt => OrderResult::Gt,
            OrderResult::Gt => OrderResult::Lt,
            other => other,
        }
    }
}

impl fmt::Display for OrderResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderResult::Lt => "LT",
            OrderResult::Gt => "GT",
            OrderResult::Eq => "EQ",
            OrderResult::Incomparable => "INCOMPARABLE",
        })
    }
}

impl From<Ordering> for OrderResult {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => OrderResult::Lt,
            Ordering::Equal => OrderResult::Eq,
            Ordering::Greater => OrderResult::Gt,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypernatError {
    #[error("ordering of arithmetic terms is not decided by the model")]
    Unsupported,
}

/// Refines same-level comparisons the model leaves open.
pub trait OrderOracle {
    fn refine(&self, a: &ImgAtom, b: &ImgAtom) -> Option<Ordering>;
}

impl HTerm {
    pub fn std(n: u64) -> Self {
        HTerm::Std(BigUint::from(n))
    }

    pub fn gen(g: &Generator) -> Self {
        HTerm::Img(ImgAtom::new(&NormalForm::IDENTITY, g.clone()))
    }

    /// `Ψ(g)`, reduced.
    pub fn img(map: &NormalForm, g: &Generator) -> Self {
        HTerm::Img(ImgAtom::new(map, g.clone()))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: HTerm, b: HTerm) -> Self {
        HTerm::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: HTerm, b: HTerm) -> Self {
        HTerm::Mul(Box::new(a), Box::new(b))
    }

    pub fn pow(a: HTerm, b: HTerm) -> Self {
        HTerm::Pow(Box::new(a), Box::new(b))
    }

    pub fn is_arithmetic(&self) -> bool {
        matches!(self, HTerm::Add(..) | HTerm::Mul(..) | HTerm::Pow(..))
    }

    pub fn level(&self) -> u32 {
        match self {
            HTerm::Std(_) => 0,
            HTerm::Img(a) => a.level(),
            HTerm::Add(a, b) | HTerm::Mul(a, b) | HTerm::Pow(a, b) => a.level().max(b.level()),
        }
    }

    /// Applies one map. Standard values are fixed, arithmetic is transferred.
    pub fn apply_map(&self, m: MapAtom) -> HTerm {
        match self {
            HTerm::Std(_) => self.clone(),
            HTerm::Img(a) => HTerm::Img(a.apply(m)),
            HTerm::Add(a, b) => HTerm::add(a.apply_map(m), b.apply_map(m)),
            HTerm::Mul(a, b) => HTerm::mul(a.apply_map(m), b.apply_map(m)),
            HTerm::Pow(a, b) => HTerm::pow(a.apply_map(m), b.apply_map(m)),
        }
    }

    /// Applies a whole composition, innermost factor first.
    pub fn apply_composition(&self, c: &Composition) -> HTerm {
        c.factors()
            .iter()
            .rev()
            .fold(self.clone(), |t, &m| t.apply_map(m))
    }

    pub fn star_power(&self, n: u32) -> HTerm {
        (0..n).fold(self.clone(), |t, _| t.apply_map(MapAtom::STAR))
    }

    /// Inverse of [`HTerm::star_power`]: strips `n` leading stars from every
    /// map image, or `None` when some image does not start with `s^n`.
    pub fn unstar(&self, n: u32) -> Option<HTerm> {
        Some(match self {
            HTerm::Std(_) => self.clone(),
            HTerm::Img(a) => {
                let map = a.map.strip_star(n)?;
                HTerm::Img(ImgAtom::new(&map, a.generator.clone()))
            }
            HTerm::Add(a, b) => HTerm::add(a.unstar(n)?, b.unstar(n)?),
            HTerm::Mul(a, b) => HTerm::mul(a.unstar(n)?, b.unstar(n)?),
            HTerm::Pow(a, b) => HTerm::pow(a.unstar(n)?, b.unstar(n)?),
        })
    }

    /// Largest `n` for which [`HTerm::unstar`] succeeds, `None` for
    /// terms without map images.
    pub fn max_unstar(&self) -> Option<u32> {
        match self {
            HTerm::Std(_) => None,
            HTerm::Img(a) => Some(a.map.star_power()),
            HTerm::Add(a, b) | HTerm::Mul(a, b) | HTerm::Pow(a, b) => {
                match (a.max_unstar(), b.max_unstar()) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                }
            }
        }
    }

    pub fn atoms(&self) -> Vec<&ImgAtom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a ImgAtom>) {
        match self {
            HTerm::Std(_) => {}
            HTerm::Img(a) => out.push(a),
            HTerm::Add(a, b) | HTerm::Mul(a, b) | HTerm::Pow(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Arithmetic normal form: equal for terms that agree under the
    /// commutative semiring laws and the laws of exponents.
    pub fn canonical(&self) -> Result<HTerm, ArithError> {
        Ok(Poly::from_hterm(self)?.to_hterm())
    }

    pub fn compare(&self, other: &HTerm) -> Result<OrderResult, HypernatError> {
        self.compare_with(other, None)
    }

    /// Ordering in the model. Levels decide first (end-extension); equal
    /// levels are ordered only through identical maps on distinct
    /// generators. Everything else is left to `oracle`, if any.
    pub fn compare_with(
        &self,
        other: &HTerm,
        oracle: Option<&dyn OrderOracle>,
    ) -> Result<OrderResult, HypernatError> {
        match (self, other) {
            (HTerm::Std(a), HTerm::Std(b)) => Ok(a.cmp(b).into()),
            (HTerm::Std(_), HTerm::Img(_)) => Ok(OrderResult::Lt),
            (HTerm::Img(_), HTerm::Std(_)) => Ok(OrderResult::Gt),
            (HTerm::Img(a), HTerm::Img(b)) => {
                let (la, lb) = (a.level(), b.level());
                if la != lb {
                    return Ok(la.cmp(&lb).into());
                }
                if a == b {
                    return Ok(OrderResult::Eq);
                }
                if a.map == b.map && a.generator.birth_level == b.generator.birth_level {
                    return Ok(a.generator.base_rank.cmp(&b.generator.base_rank).into());
                }
                Ok(oracle
                    .and_then(|o| o.refine(a, b))
                    .map_or(OrderResult::Incomparable, OrderResult::from))
            }
            _ => Err(HypernatError::Unsupported),
        }
    }
}

/// If `i_(n+1)(xi) = i_n(eta)`, returns the common source `x` with
/// `xi = eta = i_n(x)`; otherwise `None`.
pub fn pullback_check(n: u32, xi: &HTerm, eta: &HTerm) -> Option<HTerm> {
    if xi.apply_map(MapAtom::new(n + 1)) != eta.apply_map(MapAtom::new(n)) {
        return None;
    }
    if xi != eta {
        return None;
    }
    preimage(MapAtom::new(n), xi)
}

/// The unique `x` with `m(x) = t`, when it exists.
pub fn preimage(m: MapAtom, t: &HTerm) -> Option<HTerm> {
    match t {
        HTerm::Std(_) => Some(t.clone()),
        HTerm::Img(a) => {
            if a.level() <= m.index() {
                return Some(t.clone());
            }
            // m raises the level of its argument by one, so the source has
            // level a.level() - 1 and a map one factor shorter.
            let target_len = a.map.total_shift().checked_sub(1)?;
            let max_index = a.map.max_index() + 1;
            crate::composition::enumerate_compositions(max_index, target_len as usize)
                .filter(|c| c.len() as u32 == target_len)
                .map(|c| ImgAtom::new(&c.normalize(), a.generator.clone()))
                .find(|cand| cand.level() + 1 == a.level() && cand.apply(m) == *a)
                .map(HTerm::Img)
        }
        HTerm::Add(x, y) => Some(HTerm::add(preimage(m, x)?, preimage(m, y)?)),
        HTerm::Mul(x, y) => Some(HTerm::mul(preimage(m, x)?, preimage(m, y)?)),
        HTerm::Pow(x, y) => Some(HTerm::pow(preimage(m, x)?, preimage(m, y)?)),
    }
}

impl fmt::Display for HTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_term(self))
    }
}
