use std::ops::Range;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Certificate, ColoringSpec, RamseyError, Witness};

/// Bit length above which exponential triples are not materialized.
pub const MAX_EXP_BITS: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExpKind {
    /// `a, b, 2^a * b`
    Mul2,
    /// `a, b, b^a`
    Exp,
}

/// The triple for `(a, b)`, or `None` when its values are not pairwise
/// distinct or the third value would exceed [`MAX_EXP_BITS`].
pub fn exp_triple(kind: ExpKind, a: &BigUint, b: &BigUint) -> Option<[BigUint; 3]> {
    let zero = BigUint::from(0u32);
    if a == b || *a == zero || *b == zero {
        return None;
    }
    let e = u64::try_from(a).ok()?;
    let third = match kind {
        ExpKind::Mul2 => {
            if e.checked_add(b.bits())? > MAX_EXP_BITS {
                return None;
            }
            b << e
        }
        ExpKind::Exp => {
            let one = BigUint::from(1u32);
            if *a == one || *b == one || e.checked_mul(b.bits())? > MAX_EXP_BITS {
                return None;
            }
            b.pow(u32::try_from(e).ok()?)
        }
    };
    Some([a.clone(), b.clone(), third])
}

/// Worker count for a search; `1` runs on the calling thread.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threads(pub usize);

impl Default for Threads {
    fn default() -> Self {
        Threads(1)
    }
}

/// First `Some` of `f` over `range` in range order.
fn first_in<T, F>(range: Range<u64>, threads: Threads, f: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    if threads.0 <= 1 {
        return range.into_iter().find_map(f);
    }
    match rayon::ThreadPoolBuilder::new()
        .num_threads(threads.0)
        .build()
    {
        Ok(pool) => pool.install(|| range.into_par_iter().find_map_first(f)),
        Err(_) => range.into_iter().find_map(f),
    }
}

fn need_cover(c: &ColoringSpec, n: u64) -> Result<(), RamseyError> {
    if c.covers(n) {
        Ok(())
    } else {
        Err(RamseyError::InvalidParameter(format!(
            "coloring box {} does not cover {n}",
            c.size().unwrap_or(0)
        )))
    }
}

fn need_points(c: &ColoringSpec) -> Result<(), RamseyError> {
    if c.arity() == 1 && c.dim() == 1 {
        Ok(())
    } else {
        Err(RamseyError::InvalidParameter(
            "coloring must be of single naturals".into(),
        ))
    }
}

/// Lexicographically least `h`-subset of `[0, n)` whose `k`-subsets share
/// one color.
pub fn find_mono_ramsey(
    c: &ColoringSpec,
    n: u64,
    h: usize,
    threads: Threads,
) -> Result<Option<Certificate>, RamseyError> {
    let k = c.arity() as usize;
    if c.dim() != 1 {
        return Err(RamseyError::InvalidParameter(
            "Ramsey search needs dimension 1".into(),
        ));
    }
    if h < k {
        return Err(RamseyError::InvalidParameter(format!(
            "h = {h} is below the arity {k}"
        )));
    }
    if h as u64 > n {
        return Err(RamseyError::BoxTooSmall { h: h as u64, n });
    }
    need_cover(c, n)?;
    let found = first_in(0..n, threads, |first| {
        let mut set = vec![first];
        // singletons are the 1-subsets, so the seed is already colored
        let mut color = if k == 1 { c.color(&[first]) } else { None };
        mono_dfs(c, n, h, k, &mut set, &mut color)
            .then(|| (set, color.expect("h >= k fixes a color")))
    });
    Ok(found.map(|(set, color)| Certificate::for_coloring(Witness::MonoSet { set }, color, c)))
}

fn mono_dfs(
    c: &ColoringSpec,
    n: u64,
    h: usize,
    k: usize,
    set: &mut Vec<u64>,
    color: &mut Option<u32>,
) -> bool {
    if set.len() == h {
        return true;
    }
    let remaining = (h - set.len()) as u64;
    let last = *set.last().expect("seeded");
    for x in last + 1..n {
        if n - x < remaining {
            break;
        }
        let saved = *color;
        if extends(c, set, x, k, color) {
            set.push(x);
            if mono_dfs(c, n, h, k, set, color) {
                return true;
            }
            set.pop();
        }
        *color = saved;
    }
    false
}

/// Checks every `k`-subset of `set + {x}` that contains `x`.
fn extends(c: &ColoringSpec, set: &[u64], x: u64, k: usize, color: &mut Option<u32>) -> bool {
    if k == 1 {
        return agree(c.color(&[x]), color);
    }
    if set.len() + 1 < k {
        return true;
    }
    let mut idx: Vec<usize> = (0..k - 1).collect();
    let mut tuple = vec![0; k];
    loop {
        for (slot, &i) in idx.iter().enumerate() {
            tuple[slot] = set[i];
        }
        tuple[k - 1] = x;
        if !agree(c.color(&tuple), color) {
            return false;
        }
        // next (k-1)-combination of set indices
        let mut j = k - 1;
        loop {
            if j == 0 {
                return true;
            }
            j -= 1;
            if idx[j] < set.len() - (k - 1 - j) {
                idx[j] += 1;
                for t in j + 1..k - 1 {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
    }
}

fn agree(got: Option<u32>, color: &mut Option<u32>) -> bool {
    match (got, *color) {
        (None, _) => false,
        (Some(g), None) => {
            *color = Some(g);
            true
        }
        (Some(g), Some(want)) => g == want,
    }
}

fn mono_points(c: &ColoringSpec, points: impl IntoIterator<Item = Vec<u64>>) -> Option<u32> {
    let mut color = None;
    for p in points {
        if !agree(c.color(&p), &mut color) {
            return None;
        }
    }
    color
}

/// Least `(d, a)`, `d` first, with `a + d * S` monochromatic inside
/// `[0, n)^s`.
pub fn find_homothetic(
    shape: &[Vec<u64>],
    c: &ColoringSpec,
    n: u64,
    threads: Threads,
) -> Result<Option<Certificate>, RamseyError> {
    let s = c.dim() as usize;
    if shape.is_empty() || shape.iter().any(|x| x.len() != s) {
        return Err(RamseyError::InvalidParameter(format!(
            "S must be a nonempty set of points of dimension {s}"
        )));
    }
    if c.arity() != 1 {
        return Err(RamseyError::InvalidParameter(
            "homothetic search colors points".into(),
        ));
    }
    need_cover(c, n)?;
    let reach: Vec<u64> = (0..s)
        .map(|i| shape.iter().map(|x| x[i]).max().unwrap_or(0))
        .collect();
    let top = reach.iter().copied().max().unwrap_or(0);
    let max_d = n.saturating_sub(1).checked_div(top).unwrap_or(n.min(1));
    let found = first_in(1..max_d + 1, threads, |d| {
        // each coordinate of a ranges over [0, n - d * reach_i)
        let limits: Vec<u64> = reach.iter().map(|&r| n - d * r).collect();
        if limits.contains(&0) {
            return None;
        }
        let mut a = vec![0u64; s];
        loop {
            let points = shape
                .iter()
                .map(|x| a.iter().zip(x).map(|(&ai, &xi)| ai + d * xi).collect());
            if let Some(color) = mono_points(c, points) {
                return Some((a, d, color));
            }
            // lexicographic successor, last coordinate fastest
            let mut i = s;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                a[i] += 1;
                if a[i] < limits[i] {
                    break;
                }
                a[i] = 0;
            }
        }
    });
    Ok(
        found
            .map(|(a, d, color)| Certificate::for_coloring(Witness::Homothetic { a, d }, color, c)),
    )
}

/// Least `(a, b)` with `a, b, a + b` in `[1, n]` monochromatic; `a < b`
/// when `strict`, else `a <= b`.
pub fn find_schur(
    c: &ColoringSpec,
    n: u64,
    strict: bool,
    threads: Threads,
) -> Result<Option<Certificate>, RamseyError> {
    need_points(c)?;
    need_cover(c, n.saturating_add(1))?;
    let found = first_in(1..n / 2 + 1, threads, |a| {
        let from = if strict { a + 1 } else { a };
        (from..=n - a)
            .find_map(|b| mono_points(c, [vec![a], vec![b], vec![a + b]]).map(|col| (a, b, col)))
    });
    Ok(found
        .map(|(a, b, color)| Certificate::for_coloring(Witness::SchurTriple { a, b }, color, c)))
}

/// Least `(a, d)` with `d, a, a + d, ..., a + l d` in `[1, n]` monochromatic.
pub fn find_brauer(
    c: &ColoringSpec,
    n: u64,
    l: u64,
    threads: Threads,
) -> Result<Option<Certificate>, RamseyError> {
    if l == 0 {
        return Err(RamseyError::InvalidParameter("l must be at least 1".into()));
    }
    need_points(c)?;
    need_cover(c, n.saturating_add(1))?;
    let found = first_in(1..n + 1, threads, |a| {
        (1..=(n - a) / l).find_map(|d| {
            let points = std::iter::once(vec![d]).chain((0..=l).map(|i| vec![a + i * d]));
            mono_points(c, points).map(|col| (a, d, col))
        })
    });
    Ok(found
        .map(|(a, d, color)| Certificate::for_coloring(Witness::BrauerTuple { a, d, l }, color, c)))
}

/// Least `(a, b)` in `[1, bound]^2` whose triple (see [`exp_triple`]) is
/// monochromatic. Table colorings cannot color the triple and are refused.
pub fn find_exp_witness(
    c: &ColoringSpec,
    bound: u64,
    kind: ExpKind,
    threads: Threads,
) -> Result<Option<Certificate>, RamseyError> {
    let builtin = c.as_builtin().ok_or_else(|| {
        RamseyError::Unsupported("exponential search needs a builtin coloring".into())
    })?;
    need_points(c)?;
    let found = first_in(1..bound + 1, threads, |a| {
        let big_a = BigUint::from(a);
        (1..=bound).find_map(|b| {
            let big_b = BigUint::from(b);
            let triple = exp_triple(kind, &big_a, &big_b)?;
            let color = builtin.color_big(&triple[0]);
            triple[1..]
                .iter()
                .all(|v| builtin.color_big(v) == color)
                .then_some((a, b, color))
        })
    });
    Ok(found.map(|(a, b, color)| {
        Certificate::for_coloring(
            Witness::ExpWitness {
                kind,
                a: a.into(),
                b: b.into(),
            },
            color,
            c,
        )
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ramsey::{verify_certificate, Builtin};

    fn constant(arity: u32, dim: u32) -> ColoringSpec {
        ColoringSpec::builtin(Builtin::Constant, arity, dim, 2).unwrap()
    }

    #[test]
    fn constant_coloring_examples() {
        let c = constant(2, 1);
        let cert = find_mono_ramsey(&c, 6, 3, Threads(1)).unwrap().unwrap();
        assert_eq!(cert.witness, Witness::MonoSet { set: vec![0, 1, 2] });
        assert!(matches!(
            find_mono_ramsey(&c, 2, 3, Threads(1)),
            Err(RamseyError::BoxTooSmall { h: 3, n: 2 })
        ));

        let p = constant(1, 1);
        let s = find_schur(&p, 5, true, Threads(1)).unwrap().unwrap();
        assert_eq!(s.witness, Witness::SchurTriple { a: 1, b: 2 });
        let b = find_brauer(&p, 5, 2, Threads(1)).unwrap().unwrap();
        assert_eq!(b.witness, Witness::BrauerTuple { a: 1, d: 1, l: 2 });
        let e = find_exp_witness(&p, 4, ExpKind::Mul2, Threads(1))
            .unwrap()
            .unwrap();
        assert_eq!(
            e.witness,
            Witness::ExpWitness {
                kind: ExpKind::Mul2,
                a: 1u32.into(),
                b: 2u32.into()
            }
        );

        let plane = constant(1, 2);
        let shape = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
        let h = find_homothetic(&shape, &plane, 4, Threads(1))
            .unwrap()
            .unwrap();
        assert_eq!(
            h.witness,
            Witness::Homothetic {
                a: vec![0, 0],
                d: 1
            }
        );
        assert!(verify_certificate(&h, &plane, Some(&shape)));
    }

    #[test]
    fn hand_evaluated_schur_coloring() {
        // 1, 4 red (0); 2, 3, 5 blue (1)
        let c =
            ColoringSpec::table_from_fn(1, 1, 2, 6, |t| u32::from(!matches!(t[0], 1 | 4))).unwrap();
        // strict: red sums 1+4=5 blue; blue 2+3=5 blue
        let s = find_schur(&c, 5, true, Threads(1)).unwrap().unwrap();
        assert_eq!(s.witness, Witness::SchurTriple { a: 2, b: 3 });
        assert_eq!(s.color, Some(1));
        // relaxed: 1+1=2 mixed, 2+2=4 mixed, so still (2, 3)
        let r = find_schur(&c, 5, false, Threads(1)).unwrap().unwrap();
        assert_eq!(r.witness, Witness::SchurTriple { a: 2, b: 3 });
    }

    #[test]
    fn exp_search_rejects_tables_and_guards_size() {
        let t = ColoringSpec::table_from_fn(1, 1, 2, 4, |_| 0).unwrap();
        assert!(matches!(
            find_exp_witness(&t, 4, ExpKind::Exp, Threads(1)),
            Err(RamseyError::Unsupported(_))
        ));
        let huge = BigUint::from(1u64 << 40);
        assert!(exp_triple(ExpKind::Mul2, &huge, &BigUint::from(3u32)).is_none());
        assert!(exp_triple(ExpKind::Exp, &BigUint::from(2u32), &BigUint::from(1u32)).is_none());
        assert_eq!(
            exp_triple(ExpKind::Exp, &BigUint::from(3u32), &BigUint::from(2u32)).unwrap()[2],
            BigUint::from(8u32)
        );
    }

    #[test]
    fn parity_mul2_witness_verifies() {
        let c = ColoringSpec::builtin(Builtin::BitLengthParity, 1, 1, 2).unwrap();
        let cert = find_exp_witness(&c, 64, ExpKind::Mul2, Threads(1))
            .unwrap()
            .unwrap();
        assert!(verify_certificate(&cert, &c, None));
        let par = find_exp_witness(&c, 64, ExpKind::Mul2, Threads(4))
            .unwrap()
            .unwrap();
        assert_eq!(par, cert);
    }
}
