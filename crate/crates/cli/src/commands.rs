use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use starmap::hypernat::{format_term, GeneratorEnv, HTerm, TermParser, TermSyntaxError};
use starmap::ramsey::{
    check_certificate, check_extraction, find_brauer, find_exp_witness, find_homothetic,
    find_mono_ramsey, find_schur, half_grid_certificate, pattern4_certificate, Builtin,
    Certificate, ColoringSpec, ExpKind, HorizonOracle, PredicateFamily, RamseyError, Threads,
    Witness,
};
use starmap::uequiv::{
    check_derivation, derive, parse_axiom_file, parse_judgment, Derivation, DeriveOutcome,
};
use starmap::{enumerate_compositions, parse, pretty, Composition, DomainMode, ParseError};

use crate::report::{Failure, Report};
use crate::{ColoringArgs, Command, ExpKindArg, Globals, Outcome, SearchArgs, SearchKind};

pub fn run(command: &Command, g: &Globals) -> Outcome {
    match command {
        Command::Norm { expr } => {
            let nf = composition(expr, g)?.normalize();
            Ok(Report::positive(
                json!({ "expr": expr }),
                json!(nf.to_string()),
                nf.to_string(),
            ))
        }
        Command::Eq { lhs, rhs } => {
            let (a, b) = (
                composition(lhs, g)?.normalize(),
                composition(rhs, g)?.normalize(),
            );
            let input = json!({ "lhs": lhs, "rhs": rhs });
            let result = json!({ "equal": a == b, "lhs": a.to_string(), "rhs": b.to_string() });
            Ok(if a == b {
                Report::positive(input, result, "equal")
            } else {
                Report::negative(input, result, format!("not equal: {a} vs {b}"))
            })
        }
        Command::Dom { expr } => {
            let d = composition(expr, g)?.natural_domain();
            Ok(Report::positive(
                json!({ "expr": expr }),
                json!(d),
                d.to_string(),
            ))
        }
        Command::Transport { expr, p } => {
            let level = composition(expr, g)?.level_transport(*p);
            Ok(Report::positive(
                json!({ "expr": expr, "p": p }),
                json!(level),
                level.to_string(),
            ))
        }
        Command::Enum { max_index, max_len } => enumerate(*max_index, *max_len),
        Command::HnatApply { map, term } => {
            let c = composition(map, g)?;
            let env = GeneratorEnv::new();
            let t = hterm(&TermParser::new(&env), term)?;
            let image = t.apply_composition(&c);
            let text = format_term(&image);
            let result = json!({ "term": text, "level": image.level() });
            Ok(Report::positive(
                json!({ "map": map, "term": term }),
                result,
                text,
            ))
        }
        Command::HnatCmp { lhs, rhs } => {
            let env = GeneratorEnv::new();
            let parser = TermParser::new(&env);
            let (a, b) = (hterm(&parser, lhs)?, hterm(&parser, rhs)?);
            let order = a.compare(&b)?;
            let input = json!({ "lhs": lhs, "rhs": rhs });
            Ok(Report::positive(
                input,
                json!(order.to_string()),
                order.to_string(),
            ))
        }
        Command::UeqDerive {
            axioms,
            goal,
            scheme_bound,
        } => ueq_derive(axioms, goal, *scheme_bound, g),
        Command::Search(args) => search(args, g),
        Command::Verify {
            certificate,
            coloring,
            shape,
            predicate,
        } => verify(
            certificate,
            coloring,
            shape.as_deref(),
            predicate.as_deref(),
        ),
    }
}

fn expr_failure(text: &str, e: ParseError) -> Failure {
    Failure::at(e.to_string(), text, e.position)
}

/// Parses an expression; in strict mode every factor must be defined on
/// what the factors inside it can reach.
fn composition(text: &str, g: &Globals) -> Result<Composition, Failure> {
    let c = parse(text).map_err(|e| expr_failure(text, e))?;
    if !g.strict_domains {
        return Ok(c);
    }
    let Some((innermost, rest)) = c.factors().split_last() else {
        return Ok(c);
    };
    let mut acc = Composition::new(vec![*innermost]);
    for f in rest.iter().rev() {
        acc = Composition::new(vec![*f])
            .compose(&acc, DomainMode::Strict)
            .map_err(|e| Failure::new(format!("{e} (at factor {f})")))?;
    }
    Ok(acc)
}

fn hterm(parser: &TermParser, text: &str) -> Result<HTerm, Failure> {
    parser
        .parse(text)
        .map_err(|e: TermSyntaxError| Failure::at(e.to_string(), text, e.position))
}

fn enumerate(max_index: u32, max_len: usize) -> Outcome {
    if max_len > 8 {
        return Err(Failure::new("max length above 8 is not enumerated"));
    }
    let mut rows = Vec::new();
    let mut text = String::new();
    for c in enumerate_compositions(max_index, max_len) {
        let (expr, normal) = (pretty(&c), c.normalize().to_string());
        text.push_str(&format!("{expr}\t{normal}\n"));
        rows.push(json!({ "expr": expr, "normal": normal }));
    }
    Ok(Report::positive(
        json!({ "maxIndex": max_index, "maxLen": max_len }),
        Value::Array(rows),
        text,
    ))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(format!("{}: {e}", path.display())))
}

fn derivation_json(d: &Derivation) -> Value {
    let steps: Vec<Value> = d
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            json!({
                "index": i,
                "conclusion": s.conclusion.to_string(),
                "rule": s.rule.name(),
                "detail": s.rule.to_string(),
                "premises": s.premises,
            })
        })
        .collect();
    json!({ "status": "proven", "goal": d.goal.to_string(), "steps": steps })
}

fn ueq_derive(path: &Path, goal: &str, bound: Option<u64>, g: &Globals) -> Outcome {
    let env = GeneratorEnv::new();
    let text = read(path)?;
    let mut axioms = parse_axiom_file(&text, &env)
        .map_err(|e| Failure::new(format!("{}: {e}", path.display())))?;
    if let Some(b) = bound {
        axioms.scheme_bound = b;
    }
    let fact = parse_judgment(goal, &env)
        .map_err(|e| Failure::at(e.message.clone(), goal, e.column.saturating_sub(1)))?;
    let input = json!({ "axioms": path.display().to_string(), "goal": goal, "depth": g.depth });
    match derive(&axioms, &fact, g.depth) {
        DeriveOutcome::Proven(d) => {
            check_derivation(&axioms, &d)
                .map_err(|e| Failure::new(format!("derivation failed its check: {e}")))?;
            Ok(Report::positive(
                input,
                derivation_json(&d),
                format!("{d}proven"),
            ))
        }
        DeriveOutcome::Unknown => Ok(Report::negative(
            input,
            json!({ "status": "unknown", "goal": fact.to_string() }),
            format!("unknown: no derivation of {fact} within depth {}", g.depth),
        )),
    }
}

fn threads(g: &Globals) -> Threads {
    let n = g
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    Threads(n.max(1))
}

fn coloring(args: &ColoringArgs) -> Result<Option<ColoringSpec>, Failure> {
    if let Some(path) = &args.table {
        let text = read(path)?;
        let spec = ColoringSpec::parse_table(&text)
            .map_err(|e| Failure::new(format!("{}: {e}", path.display())))?;
        return Ok(Some(spec));
    }
    let Some(name) = &args.builtin else {
        return Ok(None);
    };
    let builtin = Builtin::parse(name, args.modulus)?;
    let needed = match builtin {
        Builtin::Constant => 1,
        Builtin::BitLengthParity => 2,
        Builtin::Residue(m) => u32::try_from(m).unwrap_or(u32::MAX),
    };
    Ok(Some(ColoringSpec::builtin(
        builtin,
        args.arity,
        args.dim,
        args.colors.unwrap_or(needed),
    )?))
}

fn describe(args: &ColoringArgs) -> Value {
    match (&args.table, &args.builtin) {
        (Some(path), _) => json!({ "table": path.display().to_string() }),
        (None, Some(name)) => json!({
            "builtin": name,
            "modulus": args.modulus,
            "arity": args.arity,
            "dim": args.dim,
            "r": args.colors,
        }),
        (None, None) => Value::Null,
    }
}

fn parse_shape(text: &str) -> Result<Vec<Vec<u64>>, Failure> {
    text.split(';')
        .map(|point| {
            point
                .split(',')
                .map(|x| x.trim().parse::<u64>())
                .collect::<Result<Vec<u64>, _>>()
                .map_err(|_| Failure::at("shape points are `x,y;...` of naturals", text, 0))
        })
        .collect()
}

fn predicate(name: &str) -> Result<PredicateFamily, Failure> {
    PredicateFamily::parse(name).ok_or_else(|| {
        let known: Vec<_> = PredicateFamily::ALL.iter().map(|p| p.name()).collect();
        Failure::new(format!(
            "unknown predicate `{name}`; expected one of {}",
            known.join(", ")
        ))
    })
}

fn search(args: &SearchArgs, g: &Globals) -> Outcome {
    let mut input = json!({
        "kind": format!("{:?}", args.kind).to_lowercase(),
        "coloring": describe(&args.coloring),
        "N": args.n,
    });
    let found = match args.kind {
        SearchKind::HalfGrid | SearchKind::Pattern4 => {
            let family = predicate(&args.predicate)?;
            input["predicate"] = json!(family.name());
            input["m"] = json!(args.m);
            input["horizon"] = json!(g.horizon);
            let oracle = HorizonOracle { horizon: g.horizon };
            let run = if args.kind == SearchKind::HalfGrid {
                half_grid_certificate(family, &oracle, args.m)
            } else {
                pattern4_certificate(family, &oracle, args.m)
            };
            match run {
                Ok(cert) => Some(cert),
                Err(RamseyError::OracleExhausted { depth }) => {
                    let result = json!({ "exhausted": { "depth": depth } });
                    let text = format!("oracle exhausted at depth {depth} (horizon {})", g.horizon);
                    return Ok(Report::negative(input, result, text));
                }
                Err(e) => return Err(e.into()),
            }
        }
        kind => {
            let c = coloring(&args.coloring)?
                .ok_or_else(|| Failure::new("search needs --builtin or --table"))?;
            let t = threads(g);
            let box_size = |offset: u64| {
                args.n
                    .or_else(|| c.size().map(|s| s.saturating_sub(offset)))
                    .ok_or_else(|| Failure::new("builtin colorings need --N"))
            };
            match kind {
                SearchKind::Schur => {
                    input["relaxed"] = json!(args.relaxed);
                    find_schur(&c, box_size(1)?, !args.relaxed, t)?
                }
                SearchKind::Brauer => {
                    input["l"] = json!(args.l);
                    find_brauer(&c, box_size(1)?, args.l, t)?
                }
                SearchKind::Ramsey => {
                    input["h"] = json!(args.h);
                    find_mono_ramsey(&c, box_size(0)?, args.h, t)?
                }
                SearchKind::Homothetic => {
                    let shape = parse_shape(&args.shape)?;
                    input["shape"] = json!(shape);
                    find_homothetic(&shape, &c, box_size(0)?, t)?
                }
                SearchKind::Exp => {
                    let exp = match args.exp_kind {
                        ExpKindArg::Mul2 => ExpKind::Mul2,
                        ExpKindArg::Exp => ExpKind::Exp,
                    };
                    input["bound"] = json!(args.bound);
                    input["expKind"] = json!(exp);
                    find_exp_witness(&c, args.bound, exp, t)?
                }
                SearchKind::HalfGrid | SearchKind::Pattern4 => unreachable!("handled above"),
            }
        }
    };
    Ok(match found {
        Some(cert) => {
            let value: Value =
                serde_json::from_str(&cert.to_json()).expect("certificates are JSON");
            Report::positive(input, value, cert.to_json())
        }
        None => Report::negative(input, Value::Null, "none"),
    })
}

fn verify(path: &Path, args: &ColoringArgs, shape: Option<&str>, family: Option<&str>) -> Outcome {
    let text = read(path)?;
    let mut value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::new(format!("{}: {e}", path.display())))?;
    // accept the `--json` envelope of `search` as well as a bare certificate
    if let Some(inner) = value.get_mut("result") {
        value = inner.take();
    }
    let cert = Certificate::from_json(&value.to_string())?;
    let input = json!({ "certificate": path.display().to_string(), "coloring": describe(args), "predicate": family });
    let checked = match &cert.witness {
        Witness::HalfGrid { .. } | Witness::Pattern4 { .. } => {
            let family = predicate(
                family.ok_or_else(|| Failure::new("extraction certificates need --predicate"))?,
            )?;
            check_extraction(&cert, family)
        }
        _ => {
            let c =
                coloring(args)?.ok_or_else(|| Failure::new("verify needs --builtin or --table"))?;
            let shape = shape.map(parse_shape).transpose()?;
            check_certificate(&cert, &c, shape.as_deref())
        }
    };
    Ok(match checked {
        Ok(()) => Report::positive(input, json!({ "valid": true }), "valid"),
        Err(e) => Report::negative(
            input,
            json!({ "valid": false, "reason": e.to_string() }),
            format!("invalid: {e}"),
        ),
    })
}
