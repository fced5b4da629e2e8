use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use sha2::{Digest, Sha256};

use super::RamseyError;

/// Cells beyond which a table is refused.
pub const MAX_TABLE_CELLS: u64 = 1 << 24;

const UNSET: u32 = u32::MAX;

/// Colorings computable on arbitrary naturals. On tuples they see the sum
/// of all coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// Everything gets color 0.
    Constant,
    /// Parity of the binary length (`0` has length 0).
    BitLengthParity,
    /// Residue modulo `m >= 1`.
    Residue(u64),
}

impl Builtin {
    pub fn parse(name: &str, modulus: Option<u64>) -> Result<Builtin, RamseyError> {
        match name {
            "constant" => Ok(Builtin::Constant),
            "bitlen-parity" | "parity-of-bit-length" => Ok(Builtin::BitLengthParity),
            "residue" | "residue-mod" => match modulus {
                Some(m) if m >= 1 => Ok(Builtin::Residue(m)),
                _ => Err(RamseyError::InvalidParameter(
                    "residue needs a modulus >= 1".into(),
                )),
            },
            other => Err(RamseyError::InvalidParameter(format!(
                "unknown builtin coloring `{other}`"
            ))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Builtin::Constant => "constant".into(),
            Builtin::BitLengthParity => "bitlen-parity".into(),
            Builtin::Residue(m) => format!("residue-{m}"),
        }
    }

    pub fn color_u64(&self, v: u64) -> u32 {
        match self {
            Builtin::Constant => 0,
            Builtin::BitLengthParity => (64 - v.leading_zeros()) % 2,
            Builtin::Residue(m) => (v % m) as u32,
        }
    }

    pub fn color_big(&self, v: &BigUint) -> u32 {
        match self {
            Builtin::Constant => 0,
            Builtin::BitLengthParity => (v.bits() % 2) as u32,
            Builtin::Residue(m) => (v % m).to_u32().expect("residue below modulus"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Source {
    /// Dense cells in mixed radix `size`; `UNSET` marks tuples outside the
    /// domain (non-increasing tuples when `arity >= 2`).
    Table {
        size: u64,
        cells: Vec<u32>,
    },
    Builtin(Builtin),
}

/// A coloring of `k`-tuples of points of `N^s` with colors `0..r`.
/// For `k >= 2` only `s = 1` is supported and tuples are strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringSpec {
    arity: u32,
    dim: u32,
    colors: u32,
    source: Source,
}

fn check_shape(arity: u32, dim: u32) -> Result<(), RamseyError> {
    if arity == 0 || dim == 0 {
        return Err(RamseyError::InvalidParameter(
            "arity and dimension must be positive".into(),
        ));
    }
    if arity >= 2 && dim != 1 {
        return Err(RamseyError::Unsupported(
            "tuples of points need dimension 1".into(),
        ));
    }
    Ok(())
}

impl ColoringSpec {
    pub fn builtin(
        builtin: Builtin,
        arity: u32,
        dim: u32,
        colors: u32,
    ) -> Result<Self, RamseyError> {
        check_shape(arity, dim)?;
        let needed = match builtin {
            Builtin::Constant => 1,
            Builtin::BitLengthParity => 2,
            Builtin::Residue(m) => u32::try_from(m)
                .map_err(|_| RamseyError::InvalidParameter("modulus too large".into()))?,
        };
        if colors < needed {
            return Err(RamseyError::InvalidParameter(format!(
                "{} needs at least {needed} colors",
                builtin.name()
            )));
        }
        Ok(ColoringSpec {
            arity,
            dim,
            colors,
            source: Source::Builtin(builtin),
        })
    }

    /// Table over the box `[0, size)` filled by `f` on every domain tuple.
    pub fn table_from_fn<F>(
        arity: u32,
        dim: u32,
        colors: u32,
        size: u64,
        mut f: F,
    ) -> Result<Self, RamseyError>
    where
        F: FnMut(&[u64]) -> u32,
    {
        check_shape(arity, dim)?;
        if colors == 0 {
            return Err(RamseyError::InvalidParameter("at least one color".into()));
        }
        let width = arity * dim;
        let cells = size
            .checked_pow(width)
            .filter(|&c| c <= MAX_TABLE_CELLS)
            .ok_or_else(|| {
                RamseyError::InvalidParameter(format!("table box {size}^{width} is too large"))
            })?;
        let mut spec = ColoringSpec {
            arity,
            dim,
            colors,
            source: Source::Table {
                size,
                cells: vec![UNSET; cells as usize],
            },
        };
        for t in spec.domain_tuples() {
            let c = f(&t);
            if c >= colors {
                return Err(RamseyError::InvalidParameter(format!(
                    "color {c} outside 0..{colors}"
                )));
            }
            let i = spec.cell_index(&t).expect("domain tuple is in the box");
            if let Source::Table { cells, .. } = &mut spec.source {
                cells[i] = c;
            }
        }
        Ok(spec)
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn is_table(&self) -> bool {
        matches!(self.source, Source::Table { .. })
    }

    pub fn as_builtin(&self) -> Option<Builtin> {
        match self.source {
            Source::Builtin(b) => Some(b),
            Source::Table { .. } => None,
        }
    }

    /// Side of the box for tables, `None` for builtins.
    pub fn size(&self) -> Option<u64> {
        match self.source {
            Source::Table { size, .. } => Some(size),
            Source::Builtin(_) => None,
        }
    }

    /// True when every coordinate in `[0, n)` is colored.
    pub fn covers(&self, n: u64) -> bool {
        self.size().is_none_or(|s| n <= s)
    }

    fn domain_tuples(&self) -> Vec<Vec<u64>> {
        let Some(size) = self.size() else {
            return Vec::new();
        };
        let width = (self.arity * self.dim) as usize;
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(width);
        let increasing = self.arity >= 2;
        fn rec(
            cur: &mut Vec<u64>,
            width: usize,
            size: u64,
            increasing: bool,
            out: &mut Vec<Vec<u64>>,
        ) {
            if cur.len() == width {
                out.push(cur.clone());
                return;
            }
            let from = if increasing {
                cur.last().map_or(0, |&x| x + 1)
            } else {
                0
            };
            for x in from..size {
                cur.push(x);
                rec(cur, width, size, increasing, out);
                cur.pop();
            }
        }
        rec(&mut cur, width, size, increasing, &mut out);
        out
    }

    fn cell_index(&self, t: &[u64]) -> Option<usize> {
        let Source::Table { size, .. } = &self.source else {
            return None;
        };
        let mut idx: u64 = 0;
        for &x in t.iter().rev() {
            if x >= *size {
                return None;
            }
            idx = idx * size + x;
        }
        Some(idx as usize)
    }

    /// Color of a tuple of `arity * dim` coordinates, `None` outside the
    /// domain.
    pub fn color(&self, t: &[u64]) -> Option<u32> {
        if t.len() != (self.arity * self.dim) as usize {
            return None;
        }
        if self.arity >= 2 && t.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        match &self.source {
            Source::Table { cells, .. } => {
                let c = cells[self.cell_index(t)?];
                (c != UNSET).then_some(c)
            }
            Source::Builtin(b) => {
                let sum = t.iter().try_fold(0u64, |acc, &x| acc.checked_add(x));
                Some(match sum {
                    Some(s) => b.color_u64(s),
                    None => b.color_big(&t.iter().map(|&x| BigUint::from(x)).sum()),
                })
            }
        }
    }

    /// Color of a single natural number.
    pub fn color_of(&self, v: u64) -> Option<u32> {
        self.color(&[v])
    }

    /// Canonical text: the table file format, or one descriptor line for
    /// builtins.
    pub fn canonical_text(&self) -> String {
        match &self.source {
            Source::Builtin(b) => {
                format!(
                    "builtin {} {} {} {}\n",
                    b.name(),
                    self.arity,
                    self.dim,
                    self.colors
                )
            }
            Source::Table { size, .. } => {
                let mut out = format!("{} {} {} {}\n", self.arity, self.dim, self.colors, size);
                for t in self.domain_tuples() {
                    let c = self.color(&t).expect("table covers its domain");
                    for x in &t {
                        let _ = write!(out, "{x} ");
                    }
                    let _ = writeln!(out, "{c}");
                }
                out
            }
        }
    }

    /// Hex SHA-256 of [`ColoringSpec::canonical_text`].
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }

    /// Parses the table format: a header `k s r N`, then one line
    /// `x_1 ... x_{k*s} color` per domain tuple. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn parse_table(text: &str) -> Result<Self, RamseyError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let bad = |line: usize, message: String| RamseyError::TableFormat { line, message };
        let (hline, header) = lines
            .next()
            .ok_or_else(|| bad(1, "missing header `k s r N`".into()))?;
        let nums = |line: usize, l: &str| -> Result<Vec<u64>, RamseyError> {
            l.split_whitespace()
                .map(|w| {
                    w.parse::<u64>()
                        .map_err(|_| bad(line, format!("`{w}` is not a natural number")))
                })
                .collect()
        };
        let h = nums(hline, header)?;
        let [k, s, r, n] = h[..] else {
            return Err(bad(hline, "header must be `k s r N`".into()));
        };
        let small = |v: u64, what: &str| {
            u32::try_from(v).map_err(|_| bad(hline, format!("{what} too large")))
        };
        let (k, s, r) = (
            small(k, "arity")?,
            small(s, "dimension")?,
            small(r, "color count")?,
        );
        let mut entries = Vec::new();
        for (line, l) in lines {
            let v = nums(line, l)?;
            if v.len() != (k * s) as usize + 1 {
                return Err(bad(
                    line,
                    format!("expected {} coordinates and a color", k * s),
                ));
            }
            if v[v.len() - 1] >= u64::from(r) {
                return Err(bad(
                    line,
                    format!("color {} outside 0..{r}", v[v.len() - 1]),
                ));
            }
            entries.push((line, v));
        }
        let mut seen = std::collections::HashMap::new();
        for (line, v) in &entries {
            let (t, c) = v.split_at(v.len() - 1);
            if seen.insert(t.to_vec(), (c[0], *line)).is_some() {
                return Err(bad(*line, "tuple listed twice".into()));
            }
        }
        let mut missing = None;
        let spec = ColoringSpec::table_from_fn(k, s, r, n, |t| match seen.remove(t) {
            Some((c, _)) => c as u32,
            None => {
                missing.get_or_insert_with(|| t.to_vec());
                0
            }
        })
        .map_err(|e| match e {
            RamseyError::InvalidParameter(m) => bad(hline, m),
            other => other,
        })?;
        if let Some(t) = missing {
            return Err(bad(hline, format!("tuple {t:?} has no color")));
        }
        if let Some((t, (_, line))) = seen.into_iter().min_by_key(|(_, (_, line))| *line) {
            return Err(bad(
                line,
                format!("tuple {t:?} is outside the box or not increasing"),
            ));
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_round_trips_through_text() {
        let c = ColoringSpec::table_from_fn(2, 1, 2, 4, |t| ((t[0] + t[1]) % 2) as u32).unwrap();
        let text = c.canonical_text();
        assert!(text.starts_with("2 1 2 4\n0 1 1\n"));
        let back = ColoringSpec::parse_table(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.digest(), c.digest());
        assert_eq!(c.color(&[1, 3]), Some(0));
        assert_eq!(c.color(&[3, 1]), None);
        assert_eq!(c.color(&[1, 4]), None);
    }

    #[test]
    fn table_errors_name_lines() {
        let e = ColoringSpec::parse_table("1 1 2 3\n0 0\n1 1\n").unwrap_err();
        assert!(e.to_string().contains("no color"), "{e}");
        let e = ColoringSpec::parse_table("1 1 2 2\n0 0\n1 2\n").unwrap_err();
        assert!(matches!(e, RamseyError::TableFormat { line: 3, .. }), "{e}");
        let e = ColoringSpec::parse_table("1 1 2 2\n0 0\n1 1\n5 0\n").unwrap_err();
        assert!(matches!(e, RamseyError::TableFormat { line: 4, .. }), "{e}");
        let e = ColoringSpec::parse_table("1 1 2 2\n0 0\n0 1\n").unwrap_err();
        assert!(matches!(e, RamseyError::TableFormat { line: 3, .. }), "{e}");
        assert!(ColoringSpec::parse_table("").is_err());
        assert!(ColoringSpec::parse_table("2 2 2 3\n").is_err());
    }

    #[test]
    fn builtins_agree_on_small_and_big_values() {
        for b in [
            Builtin::Constant,
            Builtin::BitLengthParity,
            Builtin::Residue(3),
        ] {
            for v in 0..200u64 {
                assert_eq!(b.color_u64(v), b.color_big(&BigUint::from(v)));
            }
        }
        assert_eq!(Builtin::BitLengthParity.color_u64(0), 0);
        assert_eq!(Builtin::BitLengthParity.color_u64(1), 1);
        assert_eq!(Builtin::BitLengthParity.color_u64(2), 0);
        let c = ColoringSpec::builtin(Builtin::Residue(3), 1, 2, 3).unwrap();
        assert_eq!(c.color(&[1, 1]), Some(2));
        assert!(ColoringSpec::builtin(Builtin::Residue(3), 1, 1, 2).is_err());
        assert_eq!(
            Builtin::parse("residue", Some(5)).unwrap(),
            Builtin::Residue(5)
        );
        assert!(Builtin::parse("residue", None).is_err());
    }
}
