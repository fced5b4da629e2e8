use std::collections::HashMap;

use super::antiunify::anti_unify;
use super::{star_tuple, tensor_pair, tuple_level, AxiomSet, Derivation, Rule, Step, UFact};
use crate::hypernat::HTerm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeriveOutcome {
    Proven(Derivation),
    /// No derivation within the depth bound. Not a refutation.
    Unknown,
}

impl DeriveOutcome {
    pub fn is_proven(&self) -> bool {
        matches!(self, DeriveOutcome::Proven(_))
    }
}

struct Node {
    rule: Rule,
    premises: Vec<Node>,
    conclusion: UFact,
}

impl Node {
    fn leaf(rule: Rule, conclusion: UFact) -> Node {
        Node {
            rule,
            premises: Vec::new(),
            conclusion,
        }
    }

    fn flatten(self, steps: &mut Vec<Step>) -> usize {
        let premises = self
            .premises
            .into_iter()
            .map(|p| p.flatten(steps))
            .collect();
        steps.push(Step {
            rule: self.rule,
            premises,
            conclusion: self.conclusion,
        });
        steps.len() - 1
    }
}

/// Backward search by iterative deepening. Failures are memoized per goal
/// with the largest depth at which they failed; a search at depth `d` is a
/// function of the goal and `d` alone, so the memo stays valid across calls.
pub struct Prover<'a> {
    axioms: &'a AxiomSet,
    known: Vec<(UFact, Rule)>,
    failed: HashMap<UFact, u32>,
}

impl<'a> Prover<'a> {
    pub fn new(axioms: &'a AxiomSet) -> Self {
        let mut known: Vec<(UFact, Rule)> = axioms
            .facts
            .iter()
            .enumerate()
            .map(|(index, f)| (f.clone(), Rule::Axiom { index }))
            .collect();
        for (si, scheme) in axioms.schemes.iter().enumerate() {
            for l in 0..=axioms.scheme_bound {
                let parameter = HTerm::std(l);
                if let Ok(fact) = scheme.at(0, &parameter) {
                    known.push((
                        fact,
                        Rule::Scheme {
                            scheme: si,
                            shift: 0,
                            parameter,
                        },
                    ));
                }
            }
        }
        Prover {
            axioms,
            known,
            failed: HashMap::new(),
        }
    }

    pub fn prove(&mut self, goal: &UFact, depth: u32) -> DeriveOutcome {
        for d in 1..=depth {
            if let Some(node) = self.search(goal, d) {
                let mut steps = Vec::new();
                node.flatten(&mut steps);
                return DeriveOutcome::Proven(Derivation {
                    goal: goal.clone(),
                    steps,
                });
            }
        }
        DeriveOutcome::Unknown
    }

    fn search(&mut self, goal: &UFact, d: u32) -> Option<Node> {
        if d == 0 || self.failed.get(goal).is_some_and(|&f| f >= d) {
            return None;
        }
        let found = self.try_rules(goal, d);
        if found.is_none() {
            let entry = self.failed.entry(goal.clone()).or_insert(0);
            *entry = (*entry).max(d);
        }
        found
    }

    fn try_rules(&mut self, goal: &UFact, d: u32) -> Option<Node> {
        if goal.lhs == goal.rhs {
            return Some(Node::leaf(Rule::Reflexivity, goal.clone()));
        }
        if let Some((_, rule)) = self.known.iter().find(|(f, _)| f.matches(goal)) {
            return Some(Node::leaf(rule.clone(), goal.clone()));
        }
        if let Some(n) = self.star_lift(goal) {
            return Some(n);
        }
        if let Some(n) = self.scheme_transfer(goal) {
            return Some(n);
        }
        if let Some(n) = self.projection(goal) {
            return Some(n);
        }
        if d < 2 {
            return None;
        }
        self.shift(goal, d)
            .or_else(|| self.congruence(goal, d))
            .or_else(|| self.tensor(goal, d))
            .or_else(|| self.transitivity(goal, d))
    }

    fn star_lift(&self, goal: &UFact) -> Option<Node> {
        let (ll, rl) = (tuple_level(&goal.lhs), tuple_level(&goal.rhs));
        let (low, high) = if ll < rl {
            (&goal.lhs, &goal.rhs)
        } else {
            (&goal.rhs, &goal.lhs)
        };
        let power = ll.abs_diff(rl);
        if power == 0 {
            return None;
        }
        let lifted = UFact::new(low.clone(), star_tuple(low, power)).ok()?;
        (lifted.rhs == *high).then(|| Node::leaf(Rule::StarLift { power }, goal.clone()))
    }

    fn scheme_transfer(&self, goal: &UFact) -> Option<Node> {
        let top = tuple_level(&goal.lhs).max(tuple_level(&goal.rhs));
        for (si, scheme) in self.axioms.schemes.iter().enumerate() {
            for shift in 1..=top {
                if let Some(parameter) = scheme
                    .solve(shift, goal)
                    .into_iter()
                    .find(|p| p.level() <= shift)
                {
                    return Some(Node::leaf(
                        Rule::Scheme {
                            scheme: si,
                            shift,
                            parameter,
                        },
                        goal.clone(),
                    ));
                }
            }
        }
        None
    }

    fn projection(&self, goal: &UFact) -> Option<Node> {
        if goal.arity() != 1 {
            return None;
        }
        for (fact, rule) in &self.known {
            for index in 0..fact.arity() {
                if fact.arity() < 2 {
                    break;
                }
                let Ok(p) = UFact::single(fact.lhs[index].clone(), fact.rhs[index].clone()) else {
                    continue;
                };
                if p.matches(goal) {
                    return Some(Node {
                        rule: Rule::Projection { index },
                        premises: vec![Node::leaf(rule.clone(), fact.clone())],
                        conclusion: goal.clone(),
                    });
                }
            }
        }
        None
    }

    fn shift(&mut self, goal: &UFact, d: u32) -> Option<Node> {
        let top = goal
            .lhs
            .iter()
            .chain(&goal.rhs)
            .filter_map(HTerm::max_unstar)
            .min()?;
        for power in (1..=top).rev() {
            let down = |t: &[HTerm]| {
                t.iter()
                    .map(|x| x.unstar(power))
                    .collect::<Option<Vec<_>>>()
            };
            let (Some(l), Some(r)) = (down(&goal.lhs), down(&goal.rhs)) else {
                continue;
            };
            let Ok(sub) = UFact::new(l, r) else { continue };
            if !sub.star_power(power).is_ok_and(|f| f.matches(goal)) {
                continue;
            }
            if let Some(p) = self.search(&sub, d - 1) {
                return Some(Node {
                    rule: Rule::Shift { power },
                    premises: vec![p],
                    conclusion: goal.clone(),
                });
            }
        }
        None
    }

    fn congruence(&mut self, goal: &UFact, d: u32) -> Option<Node> {
        let (contexts, xs, ys) = anti_unify(&goal.lhs, &goal.rhs)?;
        if contexts.iter().all(|c| c.is_hole()) && xs.len() >= goal.arity() {
            return None;
        }
        let sub = UFact::new(xs, ys).ok()?;
        let image = |args: &[HTerm]| {
            contexts
                .iter()
                .map(|c| c.substitute(args))
                .collect::<Option<Vec<_>>>()
        };
        let back = UFact::new(image(&sub.lhs)?, image(&sub.rhs)?).ok()?;
        if !back.matches(goal) {
            return None;
        }
        let p = self.search(&sub, d - 1)?;
        Some(Node {
            rule: Rule::Congruence { contexts },
            premises: vec![p],
            conclusion: goal.clone(),
        })
    }

    fn tensor(&mut self, goal: &UFact, d: u32) -> Option<Node> {
        let top = tuple_level(&goal.lhs).max(tuple_level(&goal.rhs));
        for level in 1..=top {
            let lhs_plans = shift_plans(&goal.lhs, level, top);
            if lhs_plans.is_empty() {
                continue;
            }
            let rhs_plans = shift_plans(&goal.rhs, level, top);
            for (n, xs) in &lhs_plans {
                for (m, ys) in &rhs_plans {
                    if goal.arity() == 1 && n == m {
                        continue;
                    }
                    if let Some(node) = self.tensor_with(goal, d, level, (n, xs), (m, ys)) {
                        return Some(node);
                    }
                }
            }
        }
        None
    }

    fn tensor_with(
        &mut self,
        goal: &UFact,
        d: u32,
        level: u32,
        (n, xs): (&Vec<u32>, &Vec<HTerm>),
        (m, ys): (&Vec<u32>, &Vec<HTerm>),
    ) -> Option<Node> {
        let subs: Vec<UFact> = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| UFact::single(x.clone(), y.clone()))
            .collect::<Result<_, _>>()
            .ok()?;
        if !tensor_pair(&subs, level, n, m).is_ok_and(|f| f.matches(goal)) {
            return None;
        }
        let mut premises = Vec::with_capacity(subs.len());
        for sub in &subs {
            premises.push(self.search(sub, d - 1)?);
        }
        Some(Node {
            rule: Rule::Tensor {
                level,
                lhs_shifts: n.clone(),
                rhs_shifts: m.clone(),
            },
            premises,
            conclusion: goal.clone(),
        })
    }

    fn transitivity(&mut self, goal: &UFact, d: u32) -> Option<Node> {
        let known = self.known.clone();
        for (fact, rule) in &known {
            for oriented in [fact.clone(), fact.swapped()] {
                let leaf = || Node::leaf(rule.clone(), oriented.clone());
                if oriented.lhs == goal.lhs && oriented.rhs != goal.rhs {
                    let Ok(rest) = UFact::new(oriented.rhs.clone(), goal.rhs.clone()) else {
                        continue;
                    };
                    if let Some(p) = self.search(&rest, d - 1) {
                        return Some(Node {
                            rule: Rule::Transitivity,
                            premises: vec![leaf(), p],
                            conclusion: goal.clone(),
                        });
                    }
                }
                if oriented.rhs == goal.rhs && oriented.lhs != goal.lhs {
                    let Ok(rest) = UFact::new(goal.lhs.clone(), oriented.lhs.clone()) else {
                        continue;
                    };
                    if let Some(p) = self.search(&rest, d - 1) {
                        return Some(Node {
                            rule: Rule::Transitivity,
                            premises: vec![p, leaf()],
                            conclusion: goal.clone(),
                        });
                    }
                }
            }
        }
        None
    }
}

/// Shift sequences `n` and unshifted components `x` with `s^n_i(x_i) = t_i`,
/// every `x_i` of level at most `level`, and `n` increasing by at least
/// `level` per step. Standard components take the least admissible shift.
fn shift_plans(t: &[HTerm], level: u32, cap: u32) -> Vec<(Vec<u32>, Vec<HTerm>)> {
    const MAX_PLANS: usize = 64;
    let options: Vec<Vec<(u32, HTerm)>> = t
        .iter()
        .map(|x| match x.max_unstar() {
            None => vec![(u32::MAX, x.clone())],
            Some(top) => (0..=top)
                .filter_map(|n| x.unstar(n).and_then(|y| y.canonical().ok()).map(|y| (n, y)))
                .filter(|(_, y)| y.level() <= level)
                .collect(),
        })
        .collect();
    let mut out = Vec::new();
    let mut shifts = Vec::new();
    let mut terms = Vec::new();
    plan_rec(
        &options,
        level,
        cap + level * t.len() as u32,
        &mut shifts,
        &mut terms,
        &mut out,
        MAX_PLANS,
    );
    out
}

fn plan_rec(
    options: &[Vec<(u32, HTerm)>],
    level: u32,
    cap: u32,
    shifts: &mut Vec<u32>,
    terms: &mut Vec<HTerm>,
    out: &mut Vec<(Vec<u32>, Vec<HTerm>)>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    let i = shifts.len();
    if i == options.len() {
        out.push((shifts.clone(), terms.clone()));
        return;
    }
    let min = shifts.last().map_or(0, |&p| p + level.max(1));
    for (n, x) in &options[i] {
        let n = if *n == u32::MAX { min } else { *n };
        if n < min || n > cap {
            continue;
        }
        shifts.push(n);
        terms.push(x.clone());
        plan_rec(options, level, cap, shifts, terms, out, limit);
        shifts.pop();
        terms.pop();
    }
}

/// Searches for a derivation of `goal` of depth at most `depth`.
pub fn derive(axioms: &AxiomSet, goal: &UFact, depth: u32) -> DeriveOutcome {
    Prover::new(axioms).prove(goal, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypernat::{GeneratorEnv, TermParser};
    use crate::uequiv::{check_derivation, parse_axiom_file, Context};

    const BRAUER: &str = "\
gen gamma@1
gen delta@1
gamma ~u delta
scheme l: gamma ~u gamma + l * delta
";

    fn setup() -> (GeneratorEnv, AxiomSet) {
        let env = GeneratorEnv::new();
        let set = parse_axiom_file(BRAUER, &env).unwrap();
        (env, set)
    }

    fn fact(env: &GeneratorEnv, lhs: &str, rhs: &str) -> UFact {
        let mut p = TermParser::new(env);
        let alpha = p.parse("2^gamma * [s](delta)").unwrap();
        let beta = alpha.star_power(1);
        p.bind("alpha", alpha.clone()).bind("beta", beta.clone());
        p.bind("xi", HTerm::pow(HTerm::std(2), alpha));
        p.bind("eta", HTerm::pow(HTerm::std(2), beta));
        UFact::single(p.parse(lhs).unwrap(), p.parse(rhs).unwrap()).unwrap()
    }

    fn proven(axioms: &AxiomSet, goal: &UFact, depth: u32) -> Derivation {
        match derive(axioms, goal, depth) {
            DeriveOutcome::Proven(d) => {
                check_derivation(axioms, &d).unwrap();
                d
            }
            DeriveOutcome::Unknown => panic!("no derivation of {goal}"),
        }
    }

    #[test]
    fn reflexivity_and_shift_examples() {
        let env = GeneratorEnv::new();
        env.register("a", 1, None).unwrap();
        env.register("b", 1, None).unwrap();
        let p = TermParser::new(&env);
        let a = p.parse("a").unwrap();
        let d = proven(
            &AxiomSet::new(),
            &UFact::single(a.clone(), a.clone()).unwrap(),
            1,
        );
        assert_eq!(d.steps.len(), 1);
        assert_eq!(d.steps[0].rule, Rule::Reflexivity);

        let ab = UFact::single(a.clone(), p.parse("b").unwrap()).unwrap();
        let axioms = AxiomSet::new().with_fact(ab.clone());
        let d = proven(&axioms, &ab.star_power(1).unwrap(), 2);
        assert_eq!(d.steps.last().unwrap().rule, Rule::Shift { power: 1 });
        assert_eq!(derive(&AxiomSet::new(), &ab, 4), DeriveOutcome::Unknown);
    }

    #[test]
    fn exponential_triple_chain() {
        let (env, axioms) = setup();
        for (l, r) in [
            ("alpha", "beta"),
            ("2^alpha * beta", "beta"),
            ("eta", "eta^xi"),
        ] {
            let d = proven(&axioms, &fact(&env, l, r), 12);
            assert!(d.steps.len() <= 12, "{d}");
        }
        let d = proven(&axioms, &fact(&env, "2^alpha * beta", "beta"), 12);
        let rules: Vec<_> = d.steps.iter().map(|s| s.rule.name()).collect();
        assert_eq!(rules, ["scheme", "reflexivity", "tensor", "congruence"]);
    }

    #[test]
    fn xi_eta_follow_from_alpha_beta() {
        let (env, axioms) = setup();
        proven(&axioms, &fact(&env, "xi", "eta"), 12);
    }

    #[test]
    fn mutated_derivations_are_rejected() {
        let (env, axioms) = setup();
        let d = proven(&axioms, &fact(&env, "2^alpha * beta", "beta"), 12);

        let mut dropped = d.clone();
        let last = dropped.steps.len() - 1;
        dropped.steps[last].premises.clear();
        assert!(check_derivation(&axioms, &dropped).is_err());

        let mut bad_ctx = d.clone();
        if let Rule::Congruence { contexts } = &mut bad_ctx.steps[last].rule {
            contexts[0] = Context::Mul(Box::new(Context::Hole(1)), Box::new(Context::Hole(1)));
        } else {
            panic!("expected congruence last");
        }
        assert!(check_derivation(&axioms, &bad_ctx).is_err());

        let mut bad_shift = d.clone();
        if let Rule::Tensor { lhs_shifts, .. } = &mut bad_shift.steps[2].rule {
            lhs_shifts[1] = 1;
        }
        assert!(check_derivation(&axioms, &bad_shift).is_err());

        let mut forward = d.clone();
        forward.steps[2].premises = vec![2, 1];
        assert!(check_derivation(&axioms, &forward).is_err());

        let mut wrong_goal = d;
        wrong_goal.goal = fact(&env, "alpha", "2^alpha * beta");
        assert!(check_derivation(&axioms, &wrong_goal).is_err());
    }

    #[test]
    fn scheme_parameters_respect_levels() {
        let (env, axioms) = setup();
        let p = TermParser::new(&env);
        // parameter of level 1 needs a shift of at least 1
        let unshifted = UFact::single(
            p.parse("gamma").unwrap(),
            p.parse("gamma + gamma * delta").unwrap(),
        )
        .unwrap();
        assert_eq!(derive(&axioms, &unshifted, 6), DeriveOutcome::Unknown);
        let within = UFact::single(
            p.parse("gamma").unwrap(),
            p.parse("gamma + 8 * delta").unwrap(),
        )
        .unwrap();
        proven(&axioms, &within, 1);
        let beyond = UFact::single(
            p.parse("gamma").unwrap(),
            p.parse("gamma + 9 * delta").unwrap(),
        )
        .unwrap();
        assert_eq!(derive(&axioms, &beyond, 6), DeriveOutcome::Unknown);
    }

    #[test]
    fn projection_from_tuple_axiom() {
        let env = GeneratorEnv::new();
        let axioms =
            parse_axiom_file("gen a@1\ngen b@1\ngen c@1\n(a, b) ~u (c, b)\n", &env).unwrap();
        let p = TermParser::new(&env);
        let goal = UFact::single(p.parse("c").unwrap(), p.parse("a").unwrap()).unwrap();
        let d = proven(&axioms, &goal, 1);
        assert_eq!(d.steps.last().unwrap().rule, Rule::Projection { index: 0 });
    }
}
