//! Least-general standard context shared by two tuples of canonical terms.

use num_bigint::BigUint;
use num_traits::One;

use super::Context;
use crate::arith::{factor_to_hterm, Base, Monomial, Poly};
use crate::hypernat::HTerm;

/// Hole assignments: hole `i` stands for `pairs[i].0` on the left and
/// `pairs[i].1` on the right.
#[derive(Default)]
struct AntiUnifier {
    pairs: Vec<(HTerm, HTerm)>,
}

impl AntiUnifier {
    fn hole(&mut self, a: HTerm, b: HTerm) -> Context {
        if let Some(i) = self.pairs.iter().position(|(x, y)| *x == a && *y == b) {
            return Context::Hole(i);
        }
        self.pairs.push((a, b));
        Context::Hole(self.pairs.len() - 1)
    }

    fn poly(&mut self, p: &Poly, q: &Poly) -> Context {
        if p == q {
            if let Some(c) = p.as_constant() {
                return Context::Const(c);
            }
        }
        let mark = self.pairs.len();
        if let Some(ctx) = self.poly_terms(p, q) {
            return ctx;
        }
        self.pairs.truncate(mark);
        self.hole(p.to_hterm(), q.to_hterm())
    }

    fn poly_terms(&mut self, p: &Poly, q: &Poly) -> Option<Context> {
        if p.term_count() != q.term_count() || p.term_count() == 0 {
            return None;
        }
        let mut sum: Option<Context> = None;
        for ((m1, c1), (m2, c2)) in p.terms().zip(q.terms()) {
            if c1 != c2 {
                return None;
            }
            let term = if m1.is_unit() && m2.is_unit() {
                Context::Const(c1.clone())
            } else {
                let m = self.monomial(m1, m2)?;
                if c1.is_one() {
                    m
                } else {
                    Context::Mul(Box::new(Context::Const(c1.clone())), Box::new(m))
                }
            };
            sum = Some(match sum {
                None => term,
                Some(acc) => Context::Add(Box::new(acc), Box::new(term)),
            });
        }
        sum
    }

    fn monomial(&mut self, m1: &Monomial, m2: &Monomial) -> Option<Context> {
        let split = |m: &Monomial| {
            let mut primes = Vec::new();
            let mut rest = Vec::new();
            for (b, e) in m.factors() {
                match b {
                    Base::Prime(p) => primes.push((p.clone(), e.clone())),
                    _ => rest.push(factor_to_hterm(b, e)),
                }
            }
            (primes, rest)
        };
        let (p1, r1) = split(m1);
        let (p2, r2) = split(m2);
        if p1.len() != p2.len() || p1.iter().zip(&p2).any(|(a, b)| a.0 != b.0) {
            return None;
        }
        if r1.is_empty() != r2.is_empty() {
            return None;
        }
        let mut factors: Vec<Context> = Vec::new();
        for ((prime, e1), (_, e2)) in p1.iter().zip(&p2) {
            let exp = self.poly(e1, e2);
            factors.push(Context::Pow(
                Box::new(Context::Const(prime.clone())),
                Box::new(exp),
            ));
        }
        if !r1.is_empty() {
            factors.push(self.hole(product(r1), product(r2)));
        }
        factors
            .into_iter()
            .reduce(|acc, f| Context::Mul(Box::new(acc), Box::new(f)))
            .or(Some(Context::Const(BigUint::one())))
    }
}

fn product(parts: Vec<HTerm>) -> HTerm {
    parts
        .into_iter()
        .reduce(HTerm::mul)
        .expect("non-empty product")
}

/// Contexts `C_i` and hole tuples `x`, `y` with `C_i(x) = lhs_i` and
/// `C_i(y) = rhs_i` up to arithmetic normalization.
pub(crate) fn anti_unify(
    lhs: &[HTerm],
    rhs: &[HTerm],
) -> Option<(Vec<Context>, Vec<HTerm>, Vec<HTerm>)> {
    let mut au = AntiUnifier::default();
    let mut contexts = Vec::with_capacity(lhs.len());
    for (a, b) in lhs.iter().zip(rhs) {
        let pa = Poly::from_hterm(a).ok()?;
        let pb = Poly::from_hterm(b).ok()?;
        contexts.push(au.poly(&pa, &pb));
    }
    let (xs, ys) = au.pairs.into_iter().unzip();
    Some((contexts, xs, ys))
}
