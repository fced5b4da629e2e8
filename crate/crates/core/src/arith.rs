//! Canonical forms for arithmetic over hypernatural terms.
//!
//! A [`Poly`] is a sum of monomials with positive integer coefficients. A
//! monomial is a product of bases raised to (polynomial) exponents, where a
//! base is a prime, a map image, or an opaque sum that cannot be expanded.
//! Normalization applies the commutative semiring laws and
//! `b^x * b^y = b^(x+y)`, `(b^x)^y = b^(x*y)`, `(a*b)^x = a^x * b^x`.
//!
//! Exponents attached to primes never carry a constant part: `2^(x+3)` is
//! stored as `8 * 2^x`.
//!
//! Every map image is a positive infinite element, so a non-constant
//! exponent is at least 1 and `0^x = 0`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::hypernat::{HTerm, ImgAtom};

/// Bit length beyond which constant folding gives up.
pub const MAX_CONSTANT_BITS: u64 = 1 << 16;
/// Monomial count beyond which expansion gives up.
pub const MAX_TERMS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("constant exceeds {MAX_CONSTANT_BITS} bits")]
    ConstantTooLarge,
    #[error("expansion exceeds {MAX_TERMS} monomials")]
    TooManyTerms,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    Prime(BigUint),
    Atom(ImgAtom),
    Opaque(Poly),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    factors: BTreeMap<Base, Poly>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigUint>,
}

impl Monomial {
    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Base, &Poly)> {
        self.factors.iter()
    }

    fn single(base: Base, exp: Poly) -> Self {
        let mut factors = BTreeMap::new();
        factors.insert(base, exp);
        Monomial { factors }
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = self.factors.clone();
        for (b, e) in &other.factors {
            match factors.get_mut(b) {
                Some(existing) => *existing = existing.add(e),
                None => {
                    factors.insert(b.clone(), e.clone());
                }
            }
        }
        Monomial { factors }
    }

    fn pow_poly(&self, exp: &Poly) -> Result<Monomial, ArithError> {
        let mut factors = BTreeMap::new();
        for (b, e) in &self.factors {
            factors.insert(b.clone(), e.mul(exp)?);
        }
        Ok(Monomial { factors })
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigUint::one())
    }

    pub fn constant(c: BigUint) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::default(), c);
        }
        Poly { terms }
    }

    fn monomial(m: Monomial, c: BigUint) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn atom(a: &ImgAtom) -> Self {
        Poly::monomial(
            Monomial::single(Base::Atom(a.clone()), Poly::one()),
            BigUint::one(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigUint> {
        match self.terms.len() {
            0 => Some(BigUint::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_unit())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigUint)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Splits off the constant term.
    pub fn split_constant(&self) -> (Poly, BigUint) {
        let mut rest = self.clone();
        let c = rest.terms.remove(&Monomial::default()).unwrap_or_default();
        (rest, c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(m.clone()).or_default() += c;
        }
        Poly { terms }
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly, ArithError> {
        if self.terms.len().saturating_mul(other.terms.len()) > MAX_TERMS * 4 {
            return Err(ArithError::TooManyTerms);
        }
        let mut terms: BTreeMap<Monomial, BigUint> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = c1 * c2;
                check_bits(&c)?;
                *terms.entry(m1.mul(m2)).or_default() += c;
            }
        }
        if terms.len() > MAX_TERMS {
            return Err(ArithError::TooManyTerms);
        }
        Ok(Poly { terms })
    }

    /// Exact difference `self - other`, when every monomial of `other`
    /// appears in `self` with at least the same coefficient.
    pub fn checked_sub(&self, other: &Poly) -> Option<Poly> {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let have = terms.get_mut(m)?;
            if *have < *c {
                return None;
            }
            *have -= c;
            if have.is_zero() {
                terms.remove(m);
            }
        }
        Some(Poly { terms })
    }

    /// Exact quotient by a single-monomial polynomial.
    pub fn checked_div_monomial(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.terms.len() != 1 {
            return None;
        }
        let (dm, dc) = divisor.terms.iter().next()?;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if !(c % dc).is_zero() {
                return None;
            }
            let mut factors = m.factors.clone();
            for (b, e) in &dm.factors {
                let have = factors.get(b)?;
                let rest = have.checked_sub(e)?;
                if rest.is_zero() {
                    factors.remove(b);
                } else {
                    if matches!(b, Base::Prime(_)) && rest.as_constant().is_some() {
                        return None;
                    }
                    factors.insert(b.clone(), rest);
                }
            }
            *terms.entry(Monomial { factors }).or_default() += c / dc;
        }
        Some(Poly { terms })
    }

    pub fn pow(&self, exp: &Poly) -> Result<Poly, ArithError> {
        let (variable, k) = exp.split_constant();
        let fixed = self.pow_constant(&k)?;
        if variable.is_zero() {
            return Ok(fixed);
        }
        let varying = self.pow_variable(&variable)?;
        fixed.mul(&varying)
    }

    fn pow_constant(&self, k: &BigUint) -> Result<Poly, ArithError> {
        if k.is_zero() {
            return Ok(Poly::one());
        }
        if let Some(c) = self.as_constant() {
            if c.is_zero() || c.is_one() {
                return Ok(Poly::constant(c));
            }
            let k = k.to_u64().ok_or(ArithError::ConstantTooLarge)?;
            if c.bits().saturating_mul(k) > MAX_CONSTANT_BITS {
                return Err(ArithError::ConstantTooLarge);
            }
            return Ok(Poly::constant(c.pow(k as u32)));
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().expect("one term");
            let coeff = Poly::constant(c.clone()).pow_constant(k)?;
            let kp = Poly::constant(k.clone());
            return coeff.mul(&Poly::monomial(m.pow_poly(&kp)?, BigUint::one()));
        }
        let k = k
            .to_usize()
            .filter(|&k| k <= 64)
            .ok_or(ArithError::TooManyTerms)?;
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    // `exp` is non-zero with no constant term.
    fn pow_variable(&self, exp: &Poly) -> Result<Poly, ArithError> {
        if let Some(c) = self.as_constant() {
            if c.is_zero() || c.is_one() {
                return Ok(Poly::constant(c));
            }
            return constant_pow(&c, exp);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().expect("one term");
            let coeff = if c.is_one() {
                Poly::one()
            } else {
                constant_pow(c, exp)?
            };
            let powered = Poly::monomial(m.pow_poly(exp)?, BigUint::one());
            return coeff.mul(&powered);
        }
        Ok(Poly::monomial(
            Monomial::single(Base::Opaque(self.clone()), exp.clone()),
            BigUint::one(),
        ))
    }

    pub fn from_hterm(t: &HTerm) -> Result<Poly, ArithError> {
        match t {
            HTerm::Std(n) => Ok(Poly::constant(n.clone())),
            HTerm::Img(a) => Ok(Poly::atom(a)),
            HTerm::Add(a, b) => Ok(Poly::from_hterm(a)?.add(&Poly::from_hterm(b)?)),
            HTerm::Mul(a, b) => Poly::from_hterm(a)?.mul(&Poly::from_hterm(b)?),
            HTerm::Pow(a, b) => Poly::from_hterm(a)?.pow(&Poly::from_hterm(b)?),
        }
    }

    /// Rebuilds a term: monomials in canonical order joined by `+`, each a
    /// coefficient (omitted when 1) times its factors, left-associated.
    pub fn to_hterm(&self) -> HTerm {
        let mut sum: Option<HTerm> = None;
        for (m, c) in &self.terms {
            let term = monomial_to_hterm(m, c);
            sum = Some(match sum {
                None => term,
                Some(acc) => HTerm::add(acc, term),
            });
        }
        sum.unwrap_or_else(|| HTerm::Std(BigUint::zero()))
    }
}

pub(crate) fn base_to_hterm(b: &Base) -> HTerm {
    match b {
        Base::Prime(p) => HTerm::Std(p.clone()),
        Base::Atom(a) => HTerm::Img(a.clone()),
        Base::Opaque(p) => p.to_hterm(),
    }
}

pub(crate) fn factor_to_hterm(b: &Base, e: &Poly) -> HTerm {
    let base = base_to_hterm(b);
    if e.as_constant().is_some_and(|k| k.is_one()) {
        base
    } else {
        HTerm::pow(base, e.to_hterm())
    }
}

fn monomial_to_hterm(m: &Monomial, c: &BigUint) -> HTerm {
    let mut prod: Option<HTerm> = if m.is_unit() || !c.is_one() {
        Some(HTerm::Std(c.clone()))
    } else {
        None
    };
    for (b, e) in &m.factors {
        let f = factor_to_hterm(b, e);
        prod = Some(match prod {
            None => f,
            Some(acc) => HTerm::mul(acc, f),
        });
    }
    prod.expect("monomial has a coefficient or a factor")
}

fn check_bits(c: &BigUint) -> Result<(), ArithError> {
    if c.bits() > MAX_CONSTANT_BITS {
        Err(ArithError::ConstantTooLarge)
    } else {
        Ok(())
    }
}

/// `c^exp` for a constant `c >= 2` and an exponent without constant term,
/// written over the prime factors of `c`.
fn constant_pow(c: &BigUint, exp: &Poly) -> Result<Poly, ArithError> {
    let mut factors = BTreeMap::new();
    for (p, mult) in factorize(c) {
        let e = exp.mul(&Poly::constant(BigUint::from(mult)))?;
        factors.insert(Base::Prime(p), e);
    }
    Ok(Poly::monomial(Monomial { factors }, BigUint::one()))
}

/// Trial division by small divisors; a cofactor left after the bound is
/// kept whole.
fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    const BOUND: u64 = 1 << 20;
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d: u64 = 2;
    while d <= BOUND {
        let dd = BigUint::from(d);
        if &dd * &dd > n {
            break;
        }
        let mut mult = 0;
        while (&n % &dd).is_zero() {
            n /= &dd;
            mult += 1;
        }
        if mult > 0 {
            out.push((dd, mult));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigUint::one() {
        match out.iter_mut().find(|(p, _)| *p == n) {
            Some(entry) => entry.1 += 1,
            None => out.push((n, 1)),
        }
    }
    out
}
