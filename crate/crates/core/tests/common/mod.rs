//! Brute-force oracles shared by the integration tests. None of them call
//! into the library's search or rewriting code.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

/// One rewrite step at `pos` on an outermost-first index sequence
/// (`0` is `s`): `(a, b)` with `a > b` becomes `(b, a - 1)`.
pub fn rewrite_at(word: &[u32], pos: usize) -> Option<Vec<u32>> {
    let (a, b) = (*word.get(pos)?, *word.get(pos + 1)?);
    if a <= b {
        return None;
    }
    let mut out = word.to_vec();
    out[pos] = b;
    out[pos + 1] = a - 1;
    Some(out)
}

/// Every word reachable from `start` by any sequence of rewrite steps.
pub fn rewrite_closure(start: &[u32]) -> HashSet<Vec<u32>> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([start.to_vec()]);
    seen.insert(start.to_vec());
    while let Some(w) = queue.pop_front() {
        for pos in 0..w.len().saturating_sub(1) {
            if let Some(next) = rewrite_at(&w, pos) {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen
}

/// Closure elements with no redex.
pub fn sinks(start: &[u32]) -> BTreeSet<Vec<u32>> {
    rewrite_closure(start)
        .into_iter()
        .filter(|w| w.windows(2).all(|p| p[0] <= p[1]))
        .collect()
}

/// Level reached from `p` by an outermost-first word: `s` raises every
/// nonstandard level, `i_n` raises levels above `n` and fixes the rest.
pub fn transport(word: &[u32], p: u32) -> u32 {
    word.iter().rev().fold(p, |lvl, &a| {
        if lvl == 0 || (a > 0 && lvl <= a) {
            lvl
        } else {
            lvl + 1
        }
    })
}

/// Whether `coloring` (one bit per edge of `K_n`, lexicographic edge order)
/// has a monochromatic triangle.
pub fn has_mono_triangle(n: usize, coloring: u32) -> bool {
    let edge = edge_indexer(n);
    let color = |a: usize, b: usize| (coloring >> edge(a, b)) & 1;
    (0..n).any(|a| {
        (a + 1..n)
            .any(|b| (b + 1..n).any(|c| color(a, b) == color(a, c) && color(a, c) == color(b, c)))
    })
}

/// Position of edge `{a, b}`, `a < b`, among the edges of `K_n`.
pub fn edge_indexer(n: usize) -> impl Fn(usize, usize) -> usize {
    move |a, b| {
        let mut i = 0;
        for x in 0..n {
            for y in x + 1..n {
                if (x, y) == (a, b) {
                    return i;
                }
                i += 1;
            }
        }
        unreachable!("edge outside K_n")
    }
}

/// Three-term progression `a, a + d, a + 2d` with `d >= 1` inside `[0, n)`
/// on which the bit coloring is constant.
pub fn has_mono_ap3(n: u64, coloring: u32) -> bool {
    let color = |x: u64| (coloring >> x) & 1;
    (1..n).any(|d| {
        (0..n)
            .filter(|a| a + 2 * d < n)
            .any(|a| color(a) == color(a + d) && color(a) == color(a + 2 * d))
    })
}

/// Schur triple in `[1, n]`, bit `x - 1` coloring `x`.
pub fn has_schur(n: u64, coloring: u32, strict: bool) -> bool {
    let color = |x: u64| (coloring >> (x - 1)) & 1;
    (1..=n).any(|a| {
        (1..=n)
            .filter(|&b| if strict { a < b } else { a <= b })
            .filter(|&b| a + b <= n)
            .any(|b| color(a) == color(b) && color(b) == color(a + b))
    })
}

/// Least `n` such that every 2-coloring of `[1, n]` has a Schur triple,
/// searched up to `max_n`.
pub fn schur_threshold(max_n: u64, strict: bool) -> Option<u64> {
    (1..=max_n).find(|&n| (0..1u32 << n).all(|c| has_schur(n, c, strict)))
}

/// Brauer configuration `d, a, a + d, ..., a + l d` in `[1, n]`.
pub fn has_brauer(n: u64, l: u64, coloring: u32) -> bool {
    let color = |x: u64| (coloring >> (x - 1)) & 1;
    (1..=n)
        .any(|a| (1..=n).any(|d| a + l * d <= n && (0..=l).all(|i| color(a + i * d) == color(d))))
}

/// Least `(a, b)` in lexicographic order forming a Schur triple in `[1, n]`.
pub fn least_schur(n: u64, coloring: u32, strict: bool) -> Option<(u64, u64)> {
    let color = |x: u64| (coloring >> (x - 1)) & 1;
    (1..=n)
        .flat_map(|a| (1..=n).map(move |b| (a, b)))
        .filter(|&(a, b)| if strict { a < b } else { a <= b })
        .find(|&(a, b)| a + b <= n && color(a) == color(b) && color(b) == color(a + b))
}

/// Corner `(x, y), (x + d, y), (x, y + d)` inside `[0, n)^2`, bit `x * n + y`
/// coloring `(x, y)`.
pub fn has_mono_corner(n: u64, coloring: u64) -> bool {
    let color = |x: u64, y: u64| (coloring >> (x * n + y)) & 1;
    (1..n).any(|d| {
        (0..n - d).any(|x| {
            (0..n - d).any(|y| color(x, y) == color(x + d, y) && color(x, y) == color(x, y + d))
        })
    })
}
