//! Finite windows of the spacetime of a block code.
//!
//! The spacetime of `φ` over `x` is `η(i, j) = φʲ(x)[i]`. An `n×k` patch
//! holds rows `j = 0..k`, each the central `n` columns of `φʲ(w)` for a
//! legal word `w` of length `n + 2(k−1)r`, where `r` is the minimal range
//! of `φ`. Cell coordinates in a [`CellSet`] are `(column, row)` with the
//! column measured from the centre column `(n−1)/2`.

use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::blockcode::{BlockCode, TableBudget};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::shiftlang::{Alphabet, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpacetimePatch {
    /// Row-major, `height` rows of `width` cells.
    cells: Vec<Symbol>,
    /// Least generating word, or empty for synthetic patches.
    pub word: Word,
}

impl SpacetimePatch {
    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }
}

/// The deduplicated `n×k` patches of one spacetime, sorted by content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchSet {
    width: usize,
    height: usize,
    patches: Vec<SpacetimePatch>,
}

impl PatchSet {
    /// Builds a patch family from explicit grids (rows of equal width).
    pub fn from_grids(grids: &[Vec<Word>]) -> Result<Self> {
        let first = grids
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty patch family".into()))?;
        let height = first.len();
        let width = first.first().map_or(0, Vec::len);
        if height == 0 || width == 0 {
            return Err(Error::InvalidArgument("patches must be nonempty".into()));
        }
        let mut patches = Vec::with_capacity(grids.len());
        for g in grids {
            if g.len() != height || g.iter().any(|row| row.len() != width) {
                return Err(Error::InvalidArgument(format!(
                    "every patch must be {width}x{height}"
                )));
            }
            patches.push(SpacetimePatch {
                cells: g.concat(),
                word: Word::new(),
            });
        }
        Ok(Self::dedup(width, height, patches))
    }

    fn dedup(width: usize, height: usize, mut patches: Vec<SpacetimePatch>) -> Self {
        // stable, so the least generating word survives
        patches.sort_by(|a, b| a.cells.cmp(&b.cells));
        patches.dedup_by(|a, b| a.cells == b.cells);
        PatchSet {
            width,
            height,
            patches,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    pub fn patches(&self) -> &[SpacetimePatch] {
        &self.patches
    }

    fn at(&self, p: &SpacetimePatch, col: usize, row: usize) -> Symbol {
        p.cells[row * self.width + col]
    }

    /// Absolute column index of a centred column, if in bounds.
    fn locate(&self, col: i64, row: i64) -> Result<(usize, usize)> {
        let c = col + ((self.width as i64 - 1) / 2);
        if c < 0 || c >= self.width as i64 || row < 0 || row >= self.height as i64 {
            return Err(Error::CellOutOfBounds {
                col,
                row,
                width: self.width,
                height: self.height,
            });
        }
        Ok((c as usize, row as usize))
    }

    fn column(&self, p: &SpacetimePatch, col: usize) -> Word {
        (0..self.height).map(|r| self.at(p, col, r)).collect()
    }

    /// One row per line, patches separated by blank lines.
    pub fn to_grid_text(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        for (i, p) in self.patches.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            for row in p.cells.chunks(self.width) {
                out.push_str(&alphabet.render(row));
                out.push('\n');
            }
        }
        out
    }
}

/// All `n×k` patches of the spacetime of `phi` over its domain.
pub fn build_patches(phi: &BlockCode, n: usize, k: usize, budget: TableBudget, exec: Exec) -> Result<PatchSet> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("patch width and height must be positive".into()));
    }
    let code = phi.minimized();
    let r = code.declared_range();
    let words = budget.windows(phi.domain(), n + 2 * (k - 1) * r)?;
    let patches = exec.try_map(&words, |w| {
        let mut cells = Vec::with_capacity(n * k);
        let mut cur = w.clone();
        for j in 0..k {
            let off = (k - 1 - j) * r;
            cells.extend_from_slice(&cur[off..off + n]);
            if j + 1 < k {
                cur = code.apply_to_word(&cur)?;
            }
        }
        Ok(SpacetimePatch {
            cells,
            word: w.clone(),
        })
    })?;
    Ok(PatchSet::dedup(n, k, patches))
}

/// Number of distinct `n×k` patches.
pub fn rectangle_complexity(phi: &BlockCode, n: usize, k: usize, budget: TableBudget, exec: Exec) -> Result<usize> {
    build_patches(phi, n, k, budget, exec).map(|p| p.len())
}

/// One entry of a complexity surface; `count` is `None` when the budget
/// was exceeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceEntry {
    pub n: usize,
    pub k: usize,
    pub count: Option<usize>,
}

/// Rectangle complexity over `1..=max_n × 1..=max_k`.
pub fn complexity_surface(
    phi: &BlockCode,
    max_n: usize,
    max_k: usize,
    budget: TableBudget,
    exec: Exec,
) -> Result<Vec<SurfaceEntry>> {
    let mut out = Vec::with_capacity(max_n * max_k);
    for n in 1..=max_n {
        for k in 1..=max_k {
            let count = match rectangle_complexity(phi, n, k, budget, exec) {
                Ok(c) => Some(c),
                Err(Error::TableBudget { .. }) => None,
                Err(e) => return Err(e),
            };
            out.push(SurfaceEntry { n, k, count });
        }
    }
    Ok(out)
}

pub fn surface_csv(entries: &[SurfaceEntry]) -> String {
    let mut out = String::from("n,k,count\n");
    for e in entries {
        match e.count {
            Some(c) => out.push_str(&format!("{},{},{}\n", e.n, e.k, c)),
            None => out.push_str(&format!("{},{},truncated\n", e.n, e.k)),
        }
    }
    out
}

/// Finite set of `(column, row)` cells, columns centred.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSet(pub BTreeSet<(i64, i64)>);

impl CellSet {
    pub fn new(cells: impl IntoIterator<Item = (i64, i64)>) -> Self {
        CellSet(cells.into_iter().collect())
    }

    /// `{lo..=hi} × {row}`.
    pub fn segment(lo: i64, hi: i64, row: i64) -> Self {
        Self::new((lo..=hi).map(|c| (c, row)))
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        CellSet(self.0.union(&other.0).copied().collect())
    }
}

/// Whether any two patches that agree on `a` also agree on `b`.
pub fn coding_check(patches: &PatchSet, a: &CellSet, b: &CellSet) -> Result<bool> {
    let a_idx = a
        .0
        .iter()
        .map(|&(c, r)| patches.locate(c, r))
        .collect::<Result<Vec<_>>>()?;
    let b_idx = b
        .0
        .iter()
        .map(|&(c, r)| patches.locate(c, r))
        .collect::<Result<Vec<_>>>()?;
    let mut seen: HashMap<Word, Word> = HashMap::new();
    for p in &patches.patches {
        let ka: Word = a_idx.iter().map(|&(c, r)| patches.at(p, c, r)).collect();
        let kb: Word = b_idx.iter().map(|&(c, r)| patches.at(p, c, r)).collect();
        match seen.get(&ka) {
            Some(prev) if *prev != kb => return Ok(false),
            Some(_) => {}
            None => {
                seen.insert(ka, kb);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CyrKra {
    /// A translation `(i, j)` under which every patch is self-consistent.
    BelowThreshold { vector: (i64, i64) },
    BelowThresholdNoVectorFound,
    AboveThreshold { count: usize },
}

/// Vectors `(i, j) ≠ 0` with `|i| < n`, `|j| < k`, one per ± pair
/// (`j > 0`, or `j = 0` and `i > 0`), in order of `|i| + |j|`, then `j`,
/// then `i`.
fn candidate_vectors(n: usize, k: usize) -> Vec<(i64, i64)> {
    let (n, k) = (n as i64, k as i64);
    let mut v: Vec<(i64, i64)> = (0..k)
        .flat_map(|j| (1 - n..n).map(move |i| (i, j)))
        .filter(|&(i, j)| j > 0 || i > 0)
        .collect();
    v.sort_by_key(|&(i, j)| (i.abs() + j, j, i));
    v
}

impl PatchSet {
    /// Every patch agrees with its own translate by `(i, j)` on the
    /// overlap, and the patterns seen on the overlap and on its translate
    /// are the same family.
    pub fn translation_consistent(&self, i: i64, j: i64) -> bool {
        let (w, h) = (self.width as i64, self.height as i64);
        let cols: Vec<i64> = (0..w).filter(|c| (0..w).contains(&(c + i))).collect();
        let rows: Vec<i64> = (0..h).filter(|r| (0..h).contains(&(r + j))).collect();
        if cols.is_empty() || rows.is_empty() {
            return false;
        }
        let restrict = |p: &SpacetimePatch, di: i64, dj: i64| -> Word {
            rows.iter()
                .flat_map(|&r| cols.iter().map(move |&c| (c + di, r + dj)))
                .map(|(c, r)| self.at(p, c as usize, r as usize))
                .collect()
        };
        let mut base = BTreeSet::new();
        let mut moved = BTreeSet::new();
        for p in &self.patches {
            let (u, v) = (restrict(p, 0, 0), restrict(p, i, j));
            if u != v {
                return false;
            }
            base.insert(u);
            moved.insert(v);
        }
        base == moved
    }
}

/// Low-complexity periodicity audit on one patch family.
///
/// A found vector is finite-scale evidence, not a proof of periodicity.
pub fn cyr_kra_audit(patches: &PatchSet) -> CyrKra {
    let (n, k) = (patches.width, patches.height);
    let count = patches.len();
    if 2 * count > n * k {
        return CyrKra::AboveThreshold { count };
    }
    candidate_vectors(n, k)
        .into_iter()
        .find(|&(i, j)| patches.translation_consistent(i, j))
        .map_or(CyrKra::BelowThresholdNoVectorFound, |vector| {
            CyrKra::BelowThreshold { vector }
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerticalPeriod {
    Period(u64),
    NotEventuallyConcluded,
}

fn least_period(col: &[Symbol]) -> usize {
    (1..=col.len())
        .find(|&p| (p..col.len()).all(|t| col[t] == col[t - p]))
        .unwrap_or(col.len())
}

/// lcm of the column periods, when every column has a period `p` with
/// `2p ≤ k`.
pub fn uniform_vertical_period(patches: &PatchSet) -> VerticalPeriod {
    let mut columns = BTreeSet::new();
    for p in &patches.patches {
        for c in 0..patches.width {
            columns.insert(patches.column(p, c));
        }
    }
    let mut t: u64 = 1;
    for col in &columns {
        let p = least_period(col);
        if 2 * p > patches.height {
            return VerticalPeriod::NotEventuallyConcluded;
        }
        t = t.lcm(&(p as u64));
    }
    VerticalPeriod::Period(t)
}
