//! Sliding block codes on a presented subshift, stored extensionally.
//!
//! A code of radius `R` is a table from the legal `(2R+1)`-words of its
//! domain to symbols. The table is aligned with
//! [`ShiftPresentation::words_of_length`], so every row is a legal window
//! and lookups are a binary search.
//!
//! Composition order: `compose(φ, ψ)` applies `ψ` first.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grouplab::Group;
use crate::par::Exec;
use crate::shiftlang::{ShiftPresentation, Symbol, Word};
use crate::trend::{self, Trend};

/// Default cap on table rows for a single code.
pub const DEFAULT_TABLE_ROWS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TableBudget {
    pub max_rows: usize,
}

impl Default for TableBudget {
    fn default() -> Self {
        TableBudget {
            max_rows: DEFAULT_TABLE_ROWS,
        }
    }
}

impl TableBudget {
    /// The legal words of length `len`, or a budget error if there are too many.
    pub fn windows(&self, domain: &ShiftPresentation, len: usize) -> Result<Arc<[Word]>> {
        let rows = domain.complexity(len);
        if rows > self.max_rows as u128 {
            return Err(Error::TableBudget {
                rows: usize::try_from(rows).unwrap_or(usize::MAX),
                cap: self.max_rows,
            });
        }
        Ok(domain.words_of_length(len))
    }
}

/// A total local rule on the legal windows of radius `radius`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalRule {
    radius: usize,
    windows: Arc<[Word]>,
    outputs: Vec<Symbol>,
}

impl LocalRule {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.is_empty()
    }

    pub fn lookup(&self, window: &[Symbol]) -> Option<Symbol> {
        self.windows
            .binary_search_by(|w| w.as_slice().cmp(window))
            .ok()
            .map(|i| self.outputs[i])
    }

    /// Rows `(window, output)` in lexicographic window order.
    pub fn rows(&self) -> impl Iterator<Item = (&Word, Symbol)> {
        self.windows.iter().zip(self.outputs.iter().copied())
    }
}

#[derive(Debug, Clone)]
pub struct BlockCode {
    domain: Arc<ShiftPresentation>,
    rule: LocalRule,
}

impl PartialEq for BlockCode {
    /// Equality of tables at the declared radius; use [`BlockCode::same_map`]
    /// to compare the maps themselves.
    fn eq(&self, other: &Self) -> bool {
        *self.domain == *other.domain && self.rule == other.rule
    }
}

impl Eq for BlockCode {}

impl BlockCode {
    /// Tabulates `f` on every legal window of radius `radius`.
    pub fn from_fn(
        domain: Arc<ShiftPresentation>,
        radius: usize,
        budget: TableBudget,
        exec: Exec,
        f: impl Fn(&[Symbol]) -> Symbol + Sync + Send,
    ) -> Result<Self> {
        let windows = budget.windows(&domain, 2 * radius + 1)?;
        let k = domain.alphabet().len();
        let outputs = exec.map(&windows, |w| f(w));
        if let Some(i) = outputs.iter().position(|&s| usize::from(s) >= k) {
            return Err(Error::MalformedTable(format!(
                "output for window {} is outside the alphabet",
                domain.alphabet().render(&windows[i])
            )));
        }
        Ok(BlockCode {
            rule: LocalRule {
                radius,
                windows,
                outputs,
            },
            domain,
        })
    }

    /// Builds a code from explicit rows; the rows must cover exactly the
    /// legal windows of radius `radius`.
    pub fn from_table(
        domain: Arc<ShiftPresentation>,
        radius: usize,
        rows: impl IntoIterator<Item = (Word, Symbol)>,
    ) -> Result<Self> {
        let windows = domain.words_of_length(2 * radius + 1);
        let alphabet = domain.alphabet().clone();
        let mut outputs: Vec<Option<Symbol>> = vec![None; windows.len()];
        for (window, out) in rows {
            if usize::from(out) >= alphabet.len() {
                return Err(Error::MalformedTable(format!(
                    "row {}: output symbol outside the alphabet",
                    alphabet.render(&window)
                )));
            }
            let idx = windows
                .binary_search_by(|w| w.as_slice().cmp(&window))
                .map_err(|_| {
                    Error::MalformedTable(format!(
                        "row {}: not a legal window of length {}",
                        alphabet.render(&window),
                        2 * radius + 1
                    ))
                })?;
            if outputs[idx].replace(out).is_some() {
                return Err(Error::MalformedTable(format!(
                    "row {}: duplicate window",
                    alphabet.render(&window)
                )));
            }
        }
        let outputs = outputs
            .iter()
            .enumerate()
            .map(|(i, o)| {
                o.ok_or_else(|| {
                    Error::MalformedTable(format!(
                        "missing row for window {}",
                        alphabet.render(&windows[i])
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockCode {
            domain,
            rule: LocalRule {
                radius,
                windows,
                outputs,
            },
        })
    }

    pub fn identity(domain: Arc<ShiftPresentation>) -> Self {
        Self::from_fn(domain, 0, TableBudget::default(), Exec::Sequential, |w| w[0])
            .expect("radius-0 tables are tiny")
    }

    /// σʲ with (σx)[i] = x[i+1]; radius |j|.
    pub fn shift_power(domain: Arc<ShiftPresentation>, j: i64, budget: TableBudget) -> Result<Self> {
        let r = j.unsigned_abs() as usize;
        Self::from_fn(domain, r, budget, Exec::default(), move |w| {
            w[(r as i64 + j) as usize]
        })
    }

    /// Radius-0 code applying `map` letterwise.
    pub fn symbol_map(domain: Arc<ShiftPresentation>, map: &[Symbol]) -> Result<Self> {
        if map.len() != domain.alphabet().len() {
            return Err(Error::MalformedTable(format!(
                "symbol map has {} entries for {} symbols",
                map.len(),
                domain.alphabet().len()
            )));
        }
        let map = map.to_vec();
        Self::from_fn(domain, 0, TableBudget::default(), Exec::Sequential, move |w| {
            map[usize::from(w[0])]
        })
    }

    pub fn domain(&self) -> &Arc<ShiftPresentation> {
        &self.domain
    }

    pub fn rule(&self) -> &LocalRule {
        &self.rule
    }

    pub fn declared_range(&self) -> usize {
        self.rule.radius
    }

    /// Applies the local rule to every window of `word`.
    pub fn apply_to_word(&self, word: &[Symbol]) -> Result<Word> {
        let span = 2 * self.rule.radius + 1;
        if word.len() < span {
            return Err(Error::WordTooShort {
                len: word.len(),
                window: span,
            });
        }
        word.windows(span)
            .enumerate()
            .map(|(offset, w)| {
                self.rule.lookup(w).ok_or_else(|| Error::IllegalWindow {
                    offset,
                    window: self.domain.alphabet().render(w),
                })
            })
            .collect()
    }

    /// `self ∘ inner` (apply `inner` first) with radius `r_self + r_inner`.
    pub fn compose(&self, inner: &BlockCode, budget: TableBudget, exec: Exec) -> Result<BlockCode> {
        if *self.domain != *inner.domain {
            return Err(Error::DomainMismatch);
        }
        let radius = self.rule.radius + inner.rule.radius;
        let windows = budget.windows(&self.domain, 2 * radius + 1)?;
        let outputs = exec.try_map(&windows, |w| {
            let mid = inner.apply_to_word(w)?;
            self.rule.lookup(&mid).ok_or_else(|| Error::IllegalWindow {
                offset: 0,
                window: self.domain.alphabet().render(&mid),
            })
        })?;
        Ok(BlockCode {
            domain: Arc::clone(&self.domain),
            rule: LocalRule {
                radius,
                windows,
                outputs,
            },
        })
    }

    /// n-fold composition, reduced to minimal range after every step.
    pub fn power(&self, n: usize, budget: TableBudget, exec: Exec) -> Result<BlockCode> {
        if n == 0 {
            return Err(Error::InvalidArgument("power needs n >= 1".into()));
        }
        let base = self.minimized();
        let mut acc = base.clone();
        for _ in 1..n {
            acc = base.compose(&acc, budget, exec)?.minimized();
        }
        Ok(acc)
    }

    /// Least `R' ≤ R` such that the output depends only on the central
    /// `(2R'+1)`-window.
    pub fn minimal_range(&self) -> usize {
        (0..self.rule.radius)
            .find(|&r| self.central_map(r).is_some())
            .unwrap_or(self.rule.radius)
    }

    fn central_map(&self, r: usize) -> Option<HashMap<&[Symbol], Symbol>> {
        let cut = self.rule.radius - r;
        let mut map: HashMap<&[Symbol], Symbol> = HashMap::new();
        for (w, out) in self.rule.rows() {
            let core = &w[cut..w.len() - cut];
            match map.insert(core, out) {
                Some(prev) if prev != out => return None,
                _ => {}
            }
        }
        Some(map)
    }

    /// The same map, tabulated at its minimal range.
    pub fn minimized(&self) -> BlockCode {
        let r = self.minimal_range();
        if r == self.rule.radius {
            return self.clone();
        }
        let map = self.central_map(r).expect("minimal radius is consistent");
        let windows = self.domain.words_of_length(2 * r + 1);
        let outputs = windows
            .iter()
            .map(|w| *map.get(w.as_slice()).expect("every legal window extends"))
            .collect();
        BlockCode {
            domain: Arc::clone(&self.domain),
            rule: LocalRule {
                radius: r,
                windows,
                outputs,
            },
        }
    }

    /// Whether both codes define the same map on the domain.
    pub fn same_map(&self, other: &BlockCode) -> bool {
        *self.domain == *other.domain && self.minimized().rule == other.minimized().rule
    }

    pub fn is_identity(&self) -> bool {
        let m = self.minimized();
        m.rule.radius == 0 && m.rule.rows().all(|(w, out)| w[0] == out)
    }

    /// Searches for a two-sided inverse of radius at most `max_radius`.
    ///
    /// `None` means no inverse exists within that radius; it does not prove
    /// the code is not invertible.
    pub fn inverse_search(&self, max_radius: usize, budget: TableBudget, exec: Exec) -> Result<Option<BlockCode>> {
        let phi = self.minimized();
        let rp = phi.rule.radius;
        for r in 0..=max_radius {
            let preimages = budget.windows(&self.domain, 2 * (rp + r) + 1)?;
            // ψ(φ(w)) must be the centre letter of w.
            let mut table: HashMap<Word, Symbol> = HashMap::new();
            let mut consistent = true;
            for w in preimages.iter() {
                let image = phi.apply_to_word(w)?;
                let centre = w[rp + r];
                if *table.entry(image).or_insert(centre) != centre {
                    consistent = false;
                    break;
                }
            }
            if !consistent {
                continue;
            }
            let windows = self.domain.words_of_length(2 * r + 1);
            let Some(outputs) = windows
                .iter()
                .map(|w| table.get(w).copied())
                .collect::<Option<Vec<Symbol>>>()
            else {
                continue;
            };
            let psi = BlockCode {
                domain: Arc::clone(&self.domain),
                rule: LocalRule {
                    radius: r,
                    windows,
                    outputs,
                },
            };
            let left = psi.compose(&phi, budget, exec)?;
            let right = match phi.compose(&psi, budget, exec) {
                Ok(c) => c,
                Err(Error::IllegalWindow { .. }) => continue,
                Err(e) => return Err(e),
            };
            if left.is_identity() && right.is_identity() {
                return Ok(Some(psi.minimized()));
            }
        }
        Ok(None)
    }

    /// Least `p ≤ max_p` with φᵖ = id, if any.
    pub fn finite_order(&self, max_p: usize, budget: TableBudget, exec: Exec) -> Result<Option<usize>> {
        let base = self.minimized();
        let mut acc = base.clone();
        for p in 1..=max_p {
            if acc.is_identity() {
                return Ok(Some(p));
            }
            if p < max_p {
                acc = base.compose(&acc, budget, exec)?.minimized();
            }
        }
        Ok(None)
    }

    /// First legal word of length `2R + 1 + extra` (for `extra` up to
    /// `max_extra`) whose image is not legal. `None` is evidence, not proof,
    /// that the code maps the shift into itself.
    pub fn illegal_image(&self, max_extra: usize, budget: TableBudget) -> Result<Option<Word>> {
        let span = 2 * self.rule.radius + 1;
        for extra in 0..=max_extra {
            for w in budget.windows(&self.domain, span + extra)?.iter() {
                if !self.domain.is_legal(&self.apply_to_word(w)?) {
                    return Ok(Some(w.clone()));
                }
            }
        }
        Ok(None)
    }

    /// Canonical key of the map (the minimized table), used to treat codes
    /// as group elements.
    pub fn key(&self) -> CodeKey {
        let m = self.minimized();
        CodeKey {
            radius: m.rule.radius,
            outputs: m.rule.outputs,
        }
    }

    /// Rebuilds a code from its canonical key.
    pub fn from_key(domain: Arc<ShiftPresentation>, key: &CodeKey) -> BlockCode {
        let windows = domain.words_of_length(2 * key.radius + 1);
        BlockCode {
            domain,
            rule: LocalRule {
                radius: key.radius,
                windows,
                outputs: key.outputs.clone(),
            },
        }
    }

    /// Rows rendered as `window symbol` lines.
    pub fn to_table_text(&self) -> String {
        let a = self.domain.alphabet();
        self.rule
            .rows()
            .map(|(w, s)| format!("{} {}\n", a.render(w), a.symbol(s)))
            .collect()
    }
}

/// Canonical form of a block code on a fixed domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeKey {
    pub radius: usize,
    pub outputs: Vec<Symbol>,
}

/// The group generated by automorphisms of one shift, for word-metric
/// searches over actual block codes.
#[derive(Debug, Clone)]
pub struct CodeGroup {
    domain: Arc<ShiftPresentation>,
    budget: TableBudget,
    /// Inverses of the generators, keyed by canonical form.
    inverses: HashMap<CodeKey, CodeKey>,
}

impl CodeGroup {
    /// `generators` must all be automorphisms with inverses of radius at
    /// most `max_inverse_radius`.
    pub fn new(
        domain: Arc<ShiftPresentation>,
        generators: &[BlockCode],
        max_inverse_radius: usize,
        budget: TableBudget,
    ) -> Result<(Self, Vec<CodeKey>)> {
        let mut inverses = HashMap::new();
        let mut steps = Vec::new();
        for g in generators {
            if *g.domain != *domain {
                return Err(Error::DomainMismatch);
            }
            let inv = g
                .inverse_search(max_inverse_radius, budget, Exec::default())?
                .ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "generator has no inverse of radius <= {max_inverse_radius}"
                    ))
                })?;
            let (gk, ik) = (g.key(), inv.key());
            inverses.insert(gk.clone(), ik.clone());
            inverses.insert(ik.clone(), gk.clone());
            steps.push(gk);
            steps.push(ik);
        }
        Ok((
            CodeGroup {
                domain,
                budget,
                inverses,
            },
            steps,
        ))
    }

    pub fn code(&self, key: &CodeKey) -> BlockCode {
        BlockCode::from_key(Arc::clone(&self.domain), key)
    }
}

impl Group for CodeGroup {
    type Elem = CodeKey;

    fn identity(&self) -> CodeKey {
        BlockCode::identity(Arc::clone(&self.domain)).key()
    }

    /// `a·b` is `a ∘ b`.
    fn multiply(&self, a: &CodeKey, b: &CodeKey) -> CodeKey {
        self.code(a)
            .compose(&self.code(b), self.budget, Exec::Sequential)
            .expect("generated codes stay within the table budget")
            .key()
    }

    /// Only generator inverses are known; other inverses are found by search.
    fn inverse(&self, a: &CodeKey) -> CodeKey {
        if let Some(inv) = self.inverses.get(a) {
            return inv.clone();
        }
        self.code(a)
            .inverse_search(a.radius * 4 + 4, self.budget, Exec::Sequential)
            .ok()
            .flatten()
            .expect("element of an automorphism group has an inverse")
            .key()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RangeTrend {
    /// r(φⁿ) ≥ c·n on the measured tail with c > 0.
    LinearLowerBounded { slope: f64 },
    SublinearTrend,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    /// First power that could not be built.
    pub at: usize,
    pub rows: usize,
    pub cap: usize,
}

/// `n ↦ r(φⁿ)` for `n = 1..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeProfile {
    pub entries: Vec<usize>,
    /// min_n r(φⁿ)/n, an upper bound for the asymptotic range.
    pub asymptotic_upper: f64,
    pub trend: RangeTrend,
    pub fit: trend::TrendFit,
    /// Least p with φᵖ = id among the computed powers.
    pub finite_order: Option<usize>,
    pub truncated: Option<Truncation>,
}

impl RangeProfile {
    /// Builds a profile from measured or synthetic entries r(φ¹), r(φ²), ….
    pub fn from_entries(entries: Vec<usize>, finite_order: Option<usize>, truncated: Option<Truncation>) -> Self {
        let asymptotic_upper = entries
            .iter()
            .enumerate()
            .map(|(i, &r)| r as f64 / (i + 1) as f64)
            .fold(f64::INFINITY, f64::min);
        let points: Vec<(u64, f64)> = entries
            .iter()
            .enumerate()
            .map(|(i, &r)| (i as u64 + 1, r as f64))
            .collect();
        let fit = trend::classify(&points);
        let trend = match fit.trend {
            Trend::Linear => RangeTrend::LinearLowerBounded {
                slope: fit.liminf_slope,
            },
            _ => RangeTrend::SublinearTrend,
        };
        RangeProfile {
            entries,
            asymptotic_upper: if asymptotic_upper.is_finite() { asymptotic_upper } else { 0.0 },
            trend,
            fit,
            finite_order,
            truncated,
        }
    }

    pub fn points(&self) -> Vec<(u64, f64)> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, &r)| (i as u64 + 1, r as f64))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,min_range,ratio\n");
        for (i, r) in self.entries.iter().enumerate() {
            let n = i + 1;
            out.push_str(&format!("{},{},{}\n", n, r, *r as f64 / n as f64));
        }
        if let Some(t) = self.truncated {
            out.push_str(&format!("# truncated at n={} ({} rows > cap {})\n", t.at, t.rows, t.cap));
        }
        out
    }
}

/// Minimal ranges of φ, φ², …, φᴺ. A table budget overrun ends the profile
/// early with a truncation marker instead of failing.
pub fn range_profile(phi: &BlockCode, max_n: usize, budget: TableBudget, exec: Exec) -> Result<RangeProfile> {
    if max_n == 0 {
        return Err(Error::InvalidArgument("range profile needs N >= 1".into()));
    }
    let base = phi.minimized();
    let mut entries = vec![base.declared_range()];
    let mut finite_order = base.is_identity().then_some(1);
    let mut truncated = None;
    let mut acc = base.clone();
    for n in 2..=max_n {
        match base.compose(&acc, budget, exec) {
            Ok(c) => acc = c.minimized(),
            Err(Error::TableBudget { rows, cap }) => {
                truncated = Some(Truncation { at: n, rows, cap });
                break;
            }
            Err(e) => return Err(e),
        }
        entries.push(acc.declared_range());
        if finite_order.is_none() && acc.is_identity() {
            finite_order = Some(n);
        }
    }
    Ok(RangeProfile::from_entries(entries, finite_order, truncated))
}

/// Names of the built-in codes, in catalogue order.
pub const BUILTIN_CODES: [&str; 5] = ["shift", "shift-inverse", "shift-squared", "flip", "shift-flip"];

/// Word lengths up to which `flip` is checked to preserve the language.
const FLIP_CHECK_LEN: usize = 10;

/// Builds a built-in code on `domain`. `flip` exchanges the first two
/// symbols and only makes sense on binary shifts closed under that swap.
pub fn builtin_code(name: &str, domain: Arc<ShiftPresentation>, budget: TableBudget) -> Option<Result<BlockCode>> {
    let flip = |d: Arc<ShiftPresentation>| -> Result<BlockCode> {
        let k = d.alphabet().len();
        if k != 2 {
            return Err(Error::InvalidArgument("flip needs a binary alphabet".into()));
        }
        let f = BlockCode::symbol_map(d, &[1, 0])?;
        if let Some(w) = f.illegal_image(FLIP_CHECK_LEN, budget)? {
            return Err(Error::InvalidArgument(format!(
                "flip does not preserve the shift: {} maps outside it",
                f.domain.alphabet().render(&w)
            )));
        }
        Ok(f)
    };
    let code = match name {
        "shift" => BlockCode::shift_power(domain, 1, budget),
        "shift-inverse" => BlockCode::shift_power(domain, -1, budget),
        "shift-squared" => BlockCode::shift_power(domain, 2, budget),
        "flip" => flip(domain),
        "shift-flip" => flip(Arc::clone(&domain)).and_then(|f| {
            BlockCode::shift_power(domain, 1, budget)?.compose(&f, budget, Exec::default())
        }),
        _ => return None,
    };
    Some(code)
}
