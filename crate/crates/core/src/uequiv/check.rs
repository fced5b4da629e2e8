use thiserror::Error;

use super::{star_tuple, tensor_pair, AxiomSet, Derivation, Rule, UFact};
use crate::hypernat::HTerm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {reason}")]
pub struct CheckError {
    pub step: usize,
    pub reason: String,
}

/// Re-checks every step of `d` against `axioms` and confirms that the last
/// conclusion is the goal. Shares no code with the search.
pub fn check_derivation(axioms: &AxiomSet, d: &Derivation) -> Result<(), CheckError> {
    for (i, step) in d.steps.iter().enumerate() {
        let fail = |reason: String| CheckError { step: i, reason };
        let mut premises = Vec::with_capacity(step.premises.len());
        for &p in &step.premises {
            if p >= i {
                return Err(fail(format!("premise {p} is not an earlier step")));
            }
            premises.push(&d.steps[p].conclusion);
        }
        check_step(axioms, &step.rule, &premises, &step.conclusion).map_err(fail)?;
    }
    match d.steps.last() {
        Some(last) if last.conclusion.matches(&d.goal) => Ok(()),
        Some(_) => Err(CheckError {
            step: d.steps.len() - 1,
            reason: "last conclusion is not the goal".into(),
        }),
        None => Err(CheckError {
            step: 0,
            reason: "empty derivation".into(),
        }),
    }
}

fn expect_premises(premises: &[&UFact], n: usize) -> Result<(), String> {
    if premises.len() == n {
        Ok(())
    } else {
        Err(format!("expected {n} premises, found {}", premises.len()))
    }
}

fn both_ways(f: &UFact) -> [UFact; 2] {
    [f.clone(), f.swapped()]
}

fn require(ok: bool, what: &str) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn canon(t: &HTerm) -> Option<HTerm> {
    t.canonical().ok()
}

fn check_step(
    axioms: &AxiomSet,
    rule: &Rule,
    premises: &[&UFact],
    c: &UFact,
) -> Result<(), String> {
    match rule {
        Rule::Reflexivity => {
            expect_premises(premises, 0)?;
            require(c.lhs == c.rhs, "sides differ")
        }
        Rule::Axiom { index } => {
            expect_premises(premises, 0)?;
            let fact = axioms.facts.get(*index).ok_or("no such axiom")?;
            require(fact.matches(c), "conclusion is not the axiom")
        }
        Rule::Scheme {
            scheme,
            shift,
            parameter,
        } => {
            expect_premises(premises, 0)?;
            let sch = axioms.schemes.get(*scheme).ok_or("no such scheme")?;
            if *shift == 0 {
                let within = match parameter {
                    HTerm::Std(v) => *v <= axioms.scheme_bound.into(),
                    _ => false,
                };
                require(
                    within,
                    "unshifted scheme needs a standard parameter within the bound",
                )?;
            } else {
                require(
                    parameter.level() <= *shift,
                    "parameter level exceeds the shift",
                )?;
            }
            let inst = sch.at(*shift, parameter).map_err(|e| e.to_string())?;
            require(inst.matches(c), "conclusion is not the scheme instance")
        }
        Rule::Symmetry => {
            expect_premises(premises, 1)?;
            require(
                premises[0].matches(c),
                "conclusion is not the swapped premise",
            )
        }
        Rule::Transitivity => {
            expect_premises(premises, 2)?;
            let ok = both_ways(premises[0]).iter().any(|p| {
                both_ways(premises[1]).iter().any(|q| {
                    p.rhs == q.lhs
                        && UFact {
                            lhs: p.lhs.clone(),
                            rhs: q.rhs.clone(),
                        }
                        .matches(c)
                })
            });
            require(ok, "premises do not chain to the conclusion")
        }
        Rule::StarLift { power } => {
            expect_premises(premises, 0)?;
            let lifted = |t: &[HTerm]| -> Option<Vec<HTerm>> {
                star_tuple(t, *power).iter().map(canon).collect()
            };
            let ok = lifted(&c.lhs).as_deref() == Some(&c.rhs[..])
                || lifted(&c.rhs).as_deref() == Some(&c.lhs[..]);
            require(ok, "sides are not related by the star power")
        }
        Rule::Shift { power } => {
            expect_premises(premises, 1)?;
            let shifted = premises[0].star_power(*power).map_err(|e| e.to_string())?;
            require(shifted.matches(c), "conclusion is not the shifted premise")
        }
        Rule::Congruence { contexts } => {
            expect_premises(premises, 1)?;
            require(
                contexts.len() == c.arity(),
                "context count differs from conclusion arity",
            )?;
            let p = premises[0];
            let apply = |args: &[HTerm]| -> Option<Vec<HTerm>> {
                contexts.iter().map(|ctx| ctx.substitute(args)).collect()
            };
            let (l, r) = match (apply(&p.lhs), apply(&p.rhs)) {
                (Some(l), Some(r)) => (l, r),
                _ => return Err("context refers to a missing hole".into()),
            };
            let fact = UFact::new(l, r).map_err(|e| e.to_string())?;
            require(fact.matches(c), "conclusion is not the context image")
        }
        Rule::Projection { index } => {
            expect_premises(premises, 1)?;
            let p = premises[0];
            require(*index < p.arity(), "projection index out of range")?;
            let fact = UFact::single(p.lhs[*index].clone(), p.rhs[*index].clone())
                .map_err(|e| e.to_string())?;
            require(fact.matches(c), "conclusion is not the projection")
        }
        Rule::Tensor {
            level,
            lhs_shifts,
            rhs_shifts,
        } => {
            expect_premises(premises, c.arity())?;
            for target in both_ways(c) {
                let mut oriented = Vec::with_capacity(premises.len());
                for (i, p) in premises.iter().enumerate() {
                    let (Some(&n), Some(&m)) = (lhs_shifts.get(i), rhs_shifts.get(i)) else {
                        return Err("shift lists are too short".into());
                    };
                    let fits = |f: &UFact| {
                        f.arity() == 1
                            && canon(&f.lhs[0].star_power(n)).as_ref() == Some(&target.lhs[i])
                            && canon(&f.rhs[0].star_power(m)).as_ref() == Some(&target.rhs[i])
                    };
                    match both_ways(p).into_iter().find(fits) {
                        Some(f) => oriented.push(f),
                        None => break,
                    }
                }
                if oriented.len() == premises.len() {
                    let out = tensor_pair(&oriented, *level, lhs_shifts, rhs_shifts)
                        .map_err(|e| e.to_string())?;
                    return require(out == target, "conclusion is not the tensor image");
                }
            }
            Err("premises do not shift onto the conclusion".into())
        }
    }
}
