//! Compositions of the star map `s` and the internal star maps `i_n`.
//!
//! A [`Composition`] is written outermost-first, the way `f . g` is read:
//! the last factor is applied first. The star map is treated as the
//! internal map of index 0, so every factor is a [`MapAtom`] carrying a
//! single index.
//!
//! The interchange rule `i_a . i_b -> i_b . i_(a-1)` (for `a > b`) keeps the
//! length and every index below the original maximum, and makes the index
//! word lexicographically smaller, so rewriting terminates. The rank (sum
//! of [`sigma`] over adjacent pairs) is zero exactly on words whose indices
//! never decrease; a single step may raise it, as in
//! `i_3 . i_2 . s . s -> i_3 . s . i_1 . s`. Grouping equal adjacent indices
//! of a rank-zero composition gives the [`NormalForm`].

use std::fmt;

use thiserror::Error;

/// A single embedding symbol: `s` when the index is 0, `i_n` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MapAtom(u32);

impl MapAtom {
    /// The star map.
    pub const STAR: MapAtom = MapAtom(0);

    pub const fn new(index: u32) -> Self {
        MapAtom(index)
    }

    pub const fn internal(n: u32) -> Self {
        MapAtom(n)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub const fn is_star(self) -> bool {
        self.0 == 0
    }

    /// Level reached by a fresh element of level `p` under this map.
    ///
    /// Level 0 is fixed by every map. `i_n` fixes levels up to `n` and
    /// raises every higher level by one.
    pub const fn transport(self, p: u32) -> u32 {
        if p <= self.0 {
            p
        } else {
            p + 1
        }
    }
}

impl fmt::Display for MapAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_star() {
            f.write_str("s")
        } else {
            write!(f, "i_{}", self.0)
        }
    }
}

/// The interchange weight of an adjacent pair: `a - b` when `a > b`, else 0.
pub fn sigma(a: MapAtom, b: MapAtom) -> u32 {
    a.0.saturating_sub(b.0)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositionError {
    #[error("no interchange applies at position {pos}: the pair is already ordered")]
    NotApplicable { pos: usize },
    #[error("position {pos} has no right neighbour in a composition of length {len}")]
    OutOfRange { pos: usize, len: usize },
    #[error(
        "outer map needs the universe V_{outer_domain}, but the inner map only reaches V_{inner_reach}"
    )]
    DomainMismatch { outer_domain: u32, inner_reach: u32 },
}

/// A finite composition of maps, outermost factor first. Empty is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    factors: Vec<MapAtom>,
}

impl Composition {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(factors: Vec<MapAtom>) -> Self {
        Composition { factors }
    }

    /// Builds a composition from raw indices (0 for `s`).
    pub fn from_indices<I: IntoIterator<Item = u32>>(indices: I) -> Self {
        Composition {
            factors: indices.into_iter().map(MapAtom).collect(),
        }
    }

    pub fn factors(&self) -> &[MapAtom] {
        &self.factors
    }

    pub fn indices(&self) -> Vec<u32> {
        self.factors.iter().map(|a| a.0).collect()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Every factor shifts fresh levels by at most one, and the interchange
    /// rule preserves length, so the total shift is the number of factors.
    pub fn total_shift(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn max_index(&self) -> u32 {
        self.factors.iter().map(|a| a.0).max().unwrap_or(0)
    }

    pub fn rank(&self) -> u64 {
        self.factors
            .windows(2)
            .map(|w| u64::from(sigma(w[0], w[1])))
            .sum()
    }

    /// Applies the interchange rule to the pair starting at `pos`.
    pub fn rewrite_step(&self, pos: usize) -> Result<Composition, CompositionError> {
        if pos + 1 >= self.factors.len() {
            return Err(CompositionError::OutOfRange {
                pos,
                len: self.factors.len(),
            });
        }
        let (a, b) = (self.factors[pos], self.factors[pos + 1]);
        if sigma(a, b) == 0 {
            return Err(CompositionError::NotApplicable { pos });
        }
        let mut factors = self.factors.clone();
        factors[pos] = b;
        factors[pos + 1] = MapAtom(a.0 - 1);
        Ok(Composition { factors })
    }

    /// Leftmost position where the interchange rule applies.
    pub fn leftmost_redex(&self) -> Option<usize> {
        self.factors.windows(2).position(|w| sigma(w[0], w[1]) > 0)
    }

    /// Positions of every applicable interchange, left to right.
    pub fn redexes(&self) -> Vec<usize> {
        self.factors
            .windows(2)
            .enumerate()
            .filter(|(_, w)| sigma(w[0], w[1]) > 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// The sequence of compositions visited by leftmost rewriting, starting
    /// with `self` and ending at a rank-zero composition.
    pub fn leftmost_trace(&self) -> Vec<Composition> {
        let mut trace = vec![self.clone()];
        let mut current = self.clone();
        while let Some(pos) = current.leftmost_redex() {
            current = current
                .rewrite_step(pos)
                .expect("leftmost redex is applicable");
            trace.push(current.clone());
        }
        trace
    }

    /// Normalizes by leftmost rewriting; see [`Composition::normalize`] for
    /// the linear-time route.
    pub fn normalize_by_rewriting(&self) -> NormalForm {
        let mut current = self.clone();
        while let Some(pos) = current.leftmost_redex() {
            current = current
                .rewrite_step(pos)
                .expect("leftmost redex is applicable");
        }
        NormalForm::from_sorted(&current.factors)
    }

    /// Computes the normal form by inserting factors innermost-first.
    ///
    /// Prepending `i_a` to a normal form moves it right past every block of
    /// smaller index, losing one from its index per factor crossed, until it
    /// meets an index it does not exceed. This is exactly the interchange
    /// rule applied block by block.
    pub fn normalize(&self) -> NormalForm {
        // blocks kept as (index, power) with increasing index, index 0 = s
        let mut blocks: Vec<(u32, u32)> = Vec::new();
        for atom in self.factors.iter().rev() {
            let mut a = atom.0;
            let mut at = 0;
            loop {
                match blocks.get(at) {
                    Some(&(b, power)) if a > b => {
                        let room = a - b;
                        if room > power {
                            a -= power;
                            at += 1;
                        } else {
                            // lands on index b inside this block
                            a = b;
                            break;
                        }
                    }
                    _ => break,
                }
            }
            match blocks.get_mut(at) {
                Some(block) if block.0 == a => block.1 += 1,
                _ => blocks.insert(at, (a, 1)),
            }
        }
        let (star_power, rest) = match blocks.first() {
            Some(&(0, p)) => (p, &blocks[1..]),
            _ => (0, &blocks[..]),
        };
        NormalForm {
            star_power,
            blocks: rest.to_vec(),
        }
    }

    /// The largest block index of the normal form, 0 for pure star powers.
    pub fn natural_domain(&self) -> u32 {
        self.normalize().natural_domain()
    }

    /// Applies the atomic level rules rightmost-first.
    pub fn level_transport(&self, p: u32) -> u32 {
        self.factors
            .iter()
            .rev()
            .fold(p, |level, a| a.transport(level))
    }

    /// Transport values on probes `0..=max_probe`.
    pub fn level_profile(&self, max_probe: u32) -> Vec<u32> {
        (0..=max_probe).map(|p| self.level_transport(p)).collect()
    }

    /// `self . inner`: `inner` is applied first.
    pub fn compose(
        &self,
        inner: &Composition,
        mode: DomainMode,
    ) -> Result<Composition, CompositionError> {
        if mode == DomainMode::Strict && !self.is_identity() {
            let outer_domain = self.natural_domain();
            let inner_reach = inner.natural_domain() + inner.total_shift();
            if outer_domain > inner_reach {
                return Err(CompositionError::DomainMismatch {
                    outer_domain,
                    inner_reach,
                });
            }
        }
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&inner.factors);
        Ok(Composition { factors })
    }

    pub fn comp_equal(&self, other: &Composition) -> bool {
        self.normalize() == other.normalize()
    }

    /// Repeats the composition `times` times.
    pub fn pow(&self, times: usize) -> Composition {
        Composition {
            factors: self.factors.repeat(times),
        }
    }
}

impl From<&NormalForm> for Composition {
    fn from(nf: &NormalForm) -> Self {
        nf.to_composition()
    }
}

/// How `compose` treats compositions that are only defined on a smaller universe.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DomainMode {
    /// Restrict to the natural domain silently.
    #[default]
    Natural,
    /// Reject compositions whose inner range misses the outer domain.
    Strict,
}

/// `s^l0 . (i_n1)^l1 . ... . (i_nk)^lk` with `0 < n1 < ... < nk` and every `li >= 1`.
///
/// `star_power == 0` with no blocks is the identity map.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalForm {
    star_power: u32,
    blocks: Vec<(u32, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("block indices must be positive and strictly increasing")]
    UnorderedBlocks,
    #[error("block powers must be at least 1")]
    ZeroPower,
}

impl NormalForm {
    pub const IDENTITY: NormalForm = NormalForm {
        star_power: 0,
        blocks: Vec::new(),
    };

    pub fn new(star_power: u32, blocks: Vec<(u32, u32)>) -> Result<Self, NormalFormError> {
        if blocks.iter().any(|&(_, l)| l == 0) {
            return Err(NormalFormError::ZeroPower);
        }
        let mut prev = 0;
        for &(n, _) in &blocks {
            if n <= prev {
                return Err(NormalFormError::UnorderedBlocks);
            }
            prev = n;
        }
        Ok(NormalForm { star_power, blocks })
    }

    pub fn star_power_of(l: u32) -> Self {
        NormalForm {
            star_power: l,
            blocks: Vec::new(),
        }
    }

    // `sorted` must have non-decreasing indices.
    fn from_sorted(sorted: &[MapAtom]) -> Self {
        let mut star_power = 0;
        let mut blocks: Vec<(u32, u32)> = Vec::new();
        for a in sorted {
            if a.0 == 0 {
                star_power += 1;
            } else {
                match blocks.last_mut() {
                    Some(last) if last.0 == a.0 => last.1 += 1,
                    _ => blocks.push((a.0, 1)),
                }
            }
        }
        NormalForm { star_power, blocks }
    }

    pub fn star_power(&self) -> u32 {
        self.star_power
    }

    pub fn blocks(&self) -> &[(u32, u32)] {
        &self.blocks
    }

    pub fn is_identity(&self) -> bool {
        self.star_power == 0 && self.blocks.is_empty()
    }

    /// `n_k`, or 0 when there are no internal blocks.
    pub fn natural_domain(&self) -> u32 {
        self.blocks.last().map_or(0, |&(n, _)| n)
    }

    /// `L = l0 + l1 + ... + lk`.
    pub fn total_shift(&self) -> u32 {
        self.star_power + self.blocks.iter().map(|&(_, l)| l).sum::<u32>()
    }

    /// The largest index appearing, 0 for pure star powers.
    pub fn max_index(&self) -> u32 {
        self.natural_domain()
    }

    pub fn to_composition(&self) -> Composition {
        let mut factors = vec![MapAtom::STAR; self.star_power as usize];
        for &(n, l) in &self.blocks {
            factors.extend(std::iter::repeat_n(MapAtom(n), l as usize));
        }
        Composition { factors }
    }

    pub fn level_transport(&self, p: u32) -> u32 {
        self.to_composition().level_transport(p)
    }

    /// Probe bound used for equality checks: largest index + total shift + 2.
    pub fn probe_bound(&self) -> u32 {
        self.max_index() + self.total_shift() + 2
    }

    /// Drops the innermost blocks that act as the identity on a fresh
    /// element of level `p`, i.e. every trailing block with index `>= p`.
    pub fn reduce_at(&self, p: u32) -> NormalForm {
        if p == 0 {
            return NormalForm::IDENTITY;
        }
        let keep = self.blocks.iter().take_while(|&&(n, _)| n < p).count();
        NormalForm {
            star_power: self.star_power,
            blocks: self.blocks[..keep].to_vec(),
        }
    }

    /// Removes `n` leading star factors, if present.
    pub fn strip_star(&self, n: u32) -> Option<NormalForm> {
        (self.star_power >= n).then(|| NormalForm {
            star_power: self.star_power - n,
            blocks: self.blocks.clone(),
        })
    }
}

/// Every composition with indices `<= max_index` and length `<= max_length`.
///
/// Order: by length, then lexicographically on the outermost-first index
/// sequence. The identity comes first.
pub fn enumerate_compositions(max_index: u32, max_length: usize) -> Enumerate {
    Enumerate {
        max_index,
        max_length,
        current: Some(Vec::new()),
    }
}

#[derive(Debug, Clone)]
pub struct Enumerate {
    max_index: u32,
    max_length: usize,
    current: Option<Vec<u32>>,
}

impl Iterator for Enumerate {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let out = self.current.take()?;
        let mut next = out.clone();
        // odometer increment, growing the length when it wraps
        let mut i = next.len();
        loop {
            if i == 0 {
                if next.len() < self.max_length {
                    next = vec![0; next.len() + 1];
                    self.current = Some(next);
                }
                break;
            }
            i -= 1;
            if next[i] < self.max_index {
                next[i] += 1;
                for x in &mut next[i + 1..] {
                    *x = 0;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(Composition::from_indices(out))
    }
}
