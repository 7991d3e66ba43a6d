//! Finite presentations of one-dimensional subshifts and their languages.
//!
//! A [`ShiftPresentation`] is one of: a full shift, a shift of finite type
//! given by forbidden words, the shift of a primitive substitution, or a
//! single periodic orbit. All of them answer "which words of length `n`
//! occur in some bi-infinite point?" exactly, with words listed in
//! lexicographic order of the alphabet.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a letter in its [`Alphabet`].
pub type Symbol = u8;

/// A finite word, stored as alphabet indices.
pub type Word = Vec<Symbol>;

/// Largest vertex set we are willing to build for a forbidden-word SFT.
const MAX_SFT_BLOCKS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::InvalidPresentation("empty alphabet".into()));
        }
        if symbols.len() > usize::from(Symbol::MAX) + 1 {
            return Err(Error::InvalidPresentation(format!(
                "alphabet of {} symbols is too large",
                symbols.len()
            )));
        }
        let distinct: BTreeSet<char> = symbols.iter().copied().collect();
        if distinct.len() != symbols.len() {
            return Err(Error::InvalidPresentation(
                "alphabet symbols must be distinct".into(),
            ));
        }
        Ok(Alphabet { symbols })
    }

    /// The alphabet `{0, 1, ..., k-1}` written with decimal digits.
    pub fn digits(k: usize) -> Result<Self> {
        if k > 10 {
            return Err(Error::InvalidPresentation(format!(
                "digit alphabets have at most 10 symbols, got {k}"
            )));
        }
        Alphabet::new((0..k).map(|d| char::from(b'0' + d as u8)))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn index_of(&self, c: char) -> Option<Symbol> {
        self.symbols.iter().position(|&s| s == c).map(|i| i as Symbol)
    }

    pub fn symbol(&self, s: Symbol) -> char {
        self.symbols[usize::from(s)]
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.chars()
            .map(|c| self.index_of(c).ok_or(Error::UnknownSymbol(c)))
            .collect()
    }

    pub fn render(&self, word: &[Symbol]) -> String {
        word.iter().map(|&s| self.symbol(s)).collect()
    }
}

/// Which side of a word is being extended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PresentationKind {
    FullShift,
    SftForbidden { forbidden: BTreeSet<Word> },
    Substitution { rule: Vec<Word> },
    PeriodicOrbit { seed: Word },
}

/// De Bruijn-style transition graph of an SFT, trimmed to its bi-essential
/// part so every vertex lies on a bi-infinite path.
#[derive(Debug, Clone)]
struct SftGraph {
    block_len: usize,
    vertices: Vec<Word>,
    successors: Vec<Vec<usize>>,
}

impl SftGraph {
    fn build(k: usize, forbidden: &BTreeSet<Word>) -> Result<Self> {
        let longest = forbidden.iter().map(Vec::len).max().unwrap_or(1);
        let block_len = longest.saturating_sub(1).max(1);
        let total = (k as f64).powi(block_len as i32);
        if total > MAX_SFT_BLOCKS as f64 {
            return Err(Error::InvalidPresentation(format!(
                "SFT needs {total} blocks of length {block_len}, cap is {MAX_SFT_BLOCKS}"
            )));
        }
        let avoids = |w: &[Symbol]| {
            forbidden
                .iter()
                .all(|f| f.len() > w.len() || !w.windows(f.len()).any(|win| win == f.as_slice()))
        };

        let all_blocks: Vec<Word> = lexicographic_words(k, block_len)
            .filter(|w| avoids(w))
            .collect();
        let index: BTreeMap<&[Symbol], usize> = all_blocks
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_slice(), i))
            .collect();

        let mut successors = vec![Vec::new(); all_blocks.len()];
        let mut extended = Vec::with_capacity(block_len + 1);
        for (i, block) in all_blocks.iter().enumerate() {
            for s in 0..k as Symbol {
                extended.clear();
                extended.extend_from_slice(block);
                extended.push(s);
                if !avoids(&extended) {
                    continue;
                }
                if let Some(&j) = index.get(&extended[1..]) {
                    successors[i].push(j);
                }
            }
        }

        // Trim vertices without predecessors or successors until stable.
        let n = all_blocks.len();
        let mut alive = vec![true; n];
        loop {
            let mut indeg = vec![0usize; n];
            let mut outdeg = vec![0usize; n];
            for (i, succ) in successors.iter().enumerate() {
                if !alive[i] {
                    continue;
                }
                for &j in succ {
                    if alive[j] {
                        outdeg[i] += 1;
                        indeg[j] += 1;
                    }
                }
            }
            let mut changed = false;
            for i in 0..n {
                if alive[i] && (indeg[i] == 0 || outdeg[i] == 0) {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        let mut remap = vec![usize::MAX; n];
        let mut vertices = Vec::new();
        for i in 0..n {
            if alive[i] {
                remap[i] = vertices.len();
                vertices.push(all_blocks[i].clone());
            }
        }
        if vertices.is_empty() {
            return Err(Error::InvalidPresentation(
                "forbidden words leave no bi-infinite point (empty shift)".into(),
            ));
        }
        let successors = (0..n)
            .filter(|&i| alive[i])
            .map(|i| {
                successors[i]
                    .iter()
                    .filter(|&&j| alive[j])
                    .map(|&j| remap[j])
                    .collect()
            })
            .collect();
        Ok(SftGraph {
            block_len,
            vertices,
            successors,
        })
    }

    fn words(&self, n: usize) -> Vec<Word> {
        if n <= self.block_len {
            let prefixes: BTreeSet<Word> = self.vertices.iter().map(|v| v[..n].to_vec()).collect();
            return prefixes.into_iter().collect();
        }
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(n);
        for (v, block) in self.vertices.iter().enumerate() {
            word.clear();
            word.extend_from_slice(block);
            self.extend_paths(v, n, &mut word, &mut out);
        }
        out
    }

    fn extend_paths(&self, v: usize, n: usize, word: &mut Word, out: &mut Vec<Word>) {
        if word.len() == n {
            out.push(word.clone());
            return;
        }
        for &w in &self.successors[v] {
            word.push(*self.vertices[w].last().expect("blocks are nonempty"));
            self.extend_paths(w, n, word, out);
            word.pop();
        }
    }

    /// Number of paths spelling words of length `n` (saturating).
    fn count(&self, n: usize) -> u128 {
        if n <= self.block_len {
            return self.words(n).len() as u128;
        }
        let mut counts = vec![1u128; self.vertices.len()];
        for _ in self.block_len..n {
            let mut next = vec![0u128; self.vertices.len()];
            for (v, succ) in self.successors.iter().enumerate() {
                for &w in succ {
                    next[w] = next[w].saturating_add(counts[v]);
                }
            }
            counts = next;
        }
        counts.into_iter().fold(0u128, u128::saturating_add)
    }
}

/// A validated finite description of a subshift.
///
/// Presentations are immutable; computed languages are memoised internally
/// so repeated queries are cheap. The value is `Send + Sync`.
pub struct ShiftPresentation {
    alphabet: Alphabet,
    kind: PresentationKind,
    sft: Option<SftGraph>,
    two_factors: BTreeSet<[Symbol; 2]>,
    cache: RwLock<BTreeMap<usize, Arc<[Word]>>>,
}

impl fmt::Debug for ShiftPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ShiftPresentation")
            .field("alphabet", &self.alphabet)
            .field("kind", &self.kind)
            .finish()
    }
}

impl Clone for ShiftPresentation {
    fn clone(&self) -> Self {
        ShiftPresentation {
            alphabet: self.alphabet.clone(),
            kind: self.kind.clone(),
            sft: self.sft.clone(),
            two_factors: self.two_factors.clone(),
            cache: RwLock::new(self.cache.read().expect("cache poisoned").clone()),
        }
    }
}

impl PartialEq for ShiftPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.kind == other.kind
    }
}

impl Eq for ShiftPresentation {}

impl ShiftPresentation {
    fn from_parts(alphabet: Alphabet, kind: PresentationKind) -> Self {
        ShiftPresentation {
            alphabet,
            kind,
            sft: None,
            two_factors: BTreeSet::new(),
            cache: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn full(alphabet: Alphabet) -> Self {
        Self::from_parts(alphabet, PresentationKind::FullShift)
    }

    pub fn sft(alphabet: Alphabet, forbidden: impl IntoIterator<Item = Word>) -> Result<Self> {
        let forbidden: BTreeSet<Word> = forbidden.into_iter().collect();
        let k = alphabet.len();
        for f in &forbidden {
            if f.is_empty() {
                return Err(Error::InvalidPresentation("forbidden words must be nonempty".into()));
            }
            if f.iter().any(|&s| usize::from(s) >= k) {
                return Err(Error::InvalidPresentation(
                    "forbidden word uses a symbol outside the alphabet".into(),
                ));
            }
        }
        let graph = SftGraph::build(k, &forbidden)?;
        let mut p = Self::from_parts(alphabet, PresentationKind::SftForbidden { forbidden });
        p.sft = Some(graph);
        Ok(p)
    }

    /// Shift of a primitive substitution; `rule[a]` is the image of symbol `a`.
    pub fn substitution(alphabet: Alphabet, rule: Vec<Word>) -> Result<Self> {
        let k = alphabet.len();
        if rule.len() != k {
            return Err(Error::InvalidPresentation(format!(
                "substitution rule has {} images for {k} symbols",
                rule.len()
            )));
        }
        for (a, image) in rule.iter().enumerate() {
            if image.is_empty() {
                return Err(Error::InvalidPresentation(format!(
                    "image of symbol {} is empty",
                    alphabet.symbol(a as Symbol)
                )));
            }
            if image.iter().any(|&s| usize::from(s) >= k) {
                return Err(Error::InvalidPresentation(
                    "substitution image uses a symbol outside the alphabet".into(),
                ));
            }
        }
        if !is_primitive(&rule, k) {
            return Err(Error::InvalidPresentation("substitution is not primitive".into()));
        }
        if rule.iter().all(|img| img.len() == 1) {
            return Err(Error::InvalidPresentation(
                "substitution does not grow (every image has length 1)".into(),
            ));
        }
        let two_factors = substitution_two_factors(&rule);
        let mut p = Self::from_parts(alphabet, PresentationKind::Substitution { rule });
        p.two_factors = two_factors;
        Ok(p)
    }

    /// The orbit of the periodic point `...seed seed seed...`. The seed is
    /// reduced to its primitive root.
    pub fn periodic(alphabet: Alphabet, seed: Word) -> Result<Self> {
        if seed.is_empty() {
            return Err(Error::InvalidPresentation("periodic seed is empty".into()));
        }
        if seed.iter().any(|&s| usize::from(s) >= alphabet.len()) {
            return Err(Error::InvalidPresentation(
                "periodic seed uses a symbol outside the alphabet".into(),
            ));
        }
        let seed = primitive_root(&seed).to_vec();
        Ok(Self::from_parts(alphabet, PresentationKind::PeriodicOrbit { seed }))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn kind(&self) -> &PresentationKind {
        &self.kind
    }

    /// Metadata flag only: substitution shifts with primitive rules and
    /// periodic orbits are minimal; nothing is verified here.
    pub fn believed_minimal(&self) -> bool {
        matches!(
            self.kind,
            PresentationKind::Substitution { .. } | PresentationKind::PeriodicOrbit { .. }
        )
    }

    /// Whether the shift is known to be a finite set of points.
    pub fn is_finite(&self) -> bool {
        match &self.kind {
            PresentationKind::PeriodicOrbit { .. } => true,
            PresentationKind::FullShift => self.alphabet.len() == 1,
            _ => matches!(
                self.morse_hedlund_test(2 * self.alphabet.len().max(8)),
                MorseHedlund::PeriodicWitness(_)
            ),
        }
    }

    /// The length-`n` words occurring in points of the shift, sorted.
    /// `n = 0` yields the single empty word.
    pub fn words_of_length(&self, n: usize) -> Arc<[Word]> {
        if let Some(hit) = self.cache.read().expect("cache poisoned").get(&n) {
            return Arc::clone(hit);
        }
        let words: Arc<[Word]> = self.enumerate(n).into();
        self.cache
            .write()
            .expect("cache poisoned")
            .entry(n)
            .or_insert_with(|| Arc::clone(&words));
        words
    }

    fn enumerate(&self, n: usize) -> Vec<Word> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let k = self.alphabet.len();
        match &self.kind {
            PresentationKind::FullShift => lexicographic_words(k, n).collect(),
            PresentationKind::SftForbidden { .. } => {
                self.sft.as_ref().expect("SFT graph built at construction").words(n)
            }
            PresentationKind::Substitution { rule } => {
                substitution_factors(rule, &self.two_factors, n)
            }
            PresentationKind::PeriodicOrbit { seed } => {
                let p = seed.len();
                let set: BTreeSet<Word> = (0..p)
                    .map(|i| (0..n).map(|j| seed[(i + j) % p]).collect())
                    .collect();
                set.into_iter().collect()
            }
        }
    }

    pub fn is_legal(&self, word: &[Symbol]) -> bool {
        self.words_of_length(word.len())
            .binary_search_by(|w| w.as_slice().cmp(word))
            .is_ok()
    }

    /// Position of `word` in [`Self::words_of_length`], if legal.
    pub fn index_of_word(&self, word: &[Symbol]) -> Option<usize> {
        self.words_of_length(word.len())
            .binary_search_by(|w| w.as_slice().cmp(word))
            .ok()
    }

    /// P_X(n) without materialising the language where a closed form or a
    /// transfer-matrix count exists. Saturates at `u128::MAX`.
    pub fn complexity(&self, n: usize) -> u128 {
        if n == 0 {
            return 1;
        }
        match &self.kind {
            PresentationKind::FullShift => {
                (self.alphabet.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX)
            }
            PresentationKind::SftForbidden { .. } => self.sft.as_ref().expect("graph").count(n),
            _ => self.words_of_length(n).len() as u128,
        }
    }

    /// Words of length `n` with at least two one-letter extensions on `side`.
    pub fn special_words(&self, n: usize, side: Side) -> Vec<Word> {
        let longer = self.words_of_length(n + 1);
        let mut counts: BTreeMap<&[Symbol], usize> = BTreeMap::new();
        for w in longer.iter() {
            let core = match side {
                Side::Right => &w[..n],
                Side::Left => &w[1..],
            };
            *counts.entry(core).or_default() += 1;
        }
        counts
            .into_iter()
            .filter(|&(_, c)| c >= 2)
            .map(|(w, _)| w.to_vec())
            .collect()
    }

    pub fn entropy_profile(&self, max_n: usize) -> ComplexityProfile {
        let values: Vec<u128> = (1..=max_n).map(|n| self.complexity(n)).collect();
        ComplexityProfile::from_values(values)
    }

    pub fn morse_hedlund_test(&self, max_n: usize) -> MorseHedlund {
        (1..=max_n)
            .find(|&n| self.complexity(n) <= n as u128)
            .map_or(MorseHedlund::NoWitnessUpTo(max_n), MorseHedlund::PeriodicWitness)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MorseHedlund {
    /// Least `n` with P_X(n) ≤ n: the shift is finite (a union of periodic orbits).
    PeriodicWitness(usize),
    NoWitnessUpTo(usize),
}

/// Complexity values P_X(1..=N) with the entropy estimates log P_X(n)/n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityProfile {
    pub values: Vec<u128>,
    pub entropy_estimates: Vec<f64>,
    /// inf_n log P_X(n)/n, an upper bound for the entropy by Fekete's lemma.
    pub inf_estimate: f64,
    /// The `n` attaining `inf_estimate`.
    pub inf_at: usize,
}

impl ComplexityProfile {
    /// Builds a profile from P(1), P(2), ...; values need not come from a
    /// presentation (synthetic profiles are used to exercise the audits).
    pub fn from_values(values: Vec<u128>) -> Self {
        let entropy_estimates: Vec<f64> = values
            .iter()
            .enumerate()
            .map(|(i, &p)| (p as f64).ln() / (i + 1) as f64)
            .collect();
        let (inf_at, inf_estimate) = entropy_estimates
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| {
                if v < bv {
                    (i + 1, v)
                } else {
                    (bi, bv)
                }
            });
        ComplexityProfile {
            values,
            entropy_estimates,
            inf_estimate,
            inf_at,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// P(n), 1-based.
    pub fn at(&self, n: usize) -> u128 {
        self.values[n - 1]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,P,entropy_estimate\n");
        for (i, (p, h)) in self.values.iter().zip(&self.entropy_estimates).enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, p, h));
        }
        out
    }
}

/// All words of length `n` over `0..k` in lexicographic order.
pub fn lexicographic_words(k: usize, n: usize) -> impl Iterator<Item = Word> {
    let total = if k == 0 { 0 } else { (k as u128).saturating_pow(n as u32) };
    let mut current: Option<Word> = if total == 0 { None } else { Some(vec![0; n]) };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = n;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if usize::from(next[i]) + 1 < k {
                next[i] += 1;
                current = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    })
}

/// Shortest `r` with `word` equal to a power of `word[..r]`.
pub fn primitive_root(word: &[Symbol]) -> &[Symbol] {
    let n = word.len();
    (1..=n)
        .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| word[i] == word[i - p]))
        .map_or(word, |p| &word[..p])
}

fn is_primitive(rule: &[Word], k: usize) -> bool {
    let base: Vec<Vec<bool>> = (0..k)
        .map(|a| (0..k).map(|b| rule[a].contains(&(b as Symbol))).collect())
        .collect();
    let mut power = base.clone();
    for _ in 0..k * k {
        if power.iter().all(|row| row.iter().all(|&x| x)) {
            return true;
        }
        power = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| (0..k).any(|m| power[i][m] && base[m][j]))
                    .collect()
            })
            .collect();
    }
    power.iter().all(|row| row.iter().all(|&x| x))
}

fn apply_substitution(rule: &[Word], word: &[Symbol]) -> Word {
    word.iter().flat_map(|&s| rule[usize::from(s)].iter().copied()).collect()
}

/// Closure of the two-letter factors under the substitution: exactly L_2(X).
fn substitution_two_factors(rule: &[Word]) -> BTreeSet<[Symbol; 2]> {
    let mut set: BTreeSet<[Symbol; 2]> = rule
        .iter()
        .flat_map(|img| img.windows(2).map(|w| [w[0], w[1]]))
        .collect();
    loop {
        let mut grown = set.clone();
        for pair in &set {
            let image = apply_substitution(rule, pair);
            grown.extend(image.windows(2).map(|w| [w[0], w[1]]));
        }
        if grown.len() == set.len() {
            return set;
        }
        set = grown;
    }
}

/// L_n(X) for a primitive substitution: the length-`n` factors of σ^k(ab)
/// over legal pairs `ab`, once every σ^k(c) has length at least `n - 1`.
fn substitution_factors(rule: &[Word], two: &BTreeSet<[Symbol; 2]>, n: usize) -> Vec<Word> {
    if n == 1 {
        return (0..rule.len() as Symbol).map(|s| vec![s]).collect();
    }
    let mut images: Vec<Word> = (0..rule.len() as Symbol).map(|s| vec![s]).collect();
    while images.iter().map(Vec::len).min().unwrap_or(0) + 1 < n {
        images = images.iter().map(|w| apply_substitution(rule, w)).collect();
    }
    let mut out = BTreeSet::new();
    for &[a, b] in two {
        let mut joined = images[usize::from(a)].clone();
        joined.extend_from_slice(&images[usize::from(b)]);
        for w in joined.windows(n) {
            out.insert(w.to_vec());
        }
    }
    out.into_iter().collect()
}

/// Names of the built-in shifts, in catalogue order.
pub const BUILTIN_SHIFTS: [&str; 5] = ["full-2", "golden-mean", "fibonacci", "thue-morse", "periodic-01"];

/// Looks up a built-in shift by name.
pub fn builtin_shift(name: &str) -> Option<ShiftPresentation> {
    let binary = Alphabet::digits(2).expect("binary alphabet");
    let shift = match name {
        "full-2" => ShiftPresentation::full(binary),
        "golden-mean" => ShiftPresentation::sft(binary, [vec![1, 1]]).expect("golden mean"),
        "fibonacci" => {
            ShiftPresentation::substitution(binary, vec![vec![0, 1], vec![0]]).expect("fibonacci")
        }
        "thue-morse" => ShiftPresentation::substitution(binary, vec![vec![0, 1], vec![1, 0]])
            .expect("thue-morse"),
        "periodic-01" => ShiftPresentation::periodic(binary, vec![0, 1]).expect("periodic"),
        _ => return None,
    };
    Some(shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin() -> Alphabet {
        Alphabet::digits(2).unwrap()
    }

    fn strs(shift: &ShiftPresentation, words: &[Word]) -> Vec<String> {
        words.iter().map(|w| shift.alphabet().render(w)).collect()
    }

    #[test]
    fn full_shift_words() {
        let x = builtin_shift("full-2").unwrap();
        let w = x.words_of_length(3);
        assert_eq!(w.len(), 8);
        assert_eq!(strs(&x, &w)[..3], ["000", "001", "010"]);
        assert_eq!(x.complexity(3), 8);
    }

    #[test]
    fn golden_mean_words() {
        let x = builtin_shift("golden-mean").unwrap();
        assert_eq!(
            strs(&x, &x.words_of_length(3)),
            ["000", "001", "010", "100", "101"]
        );
        let counts: Vec<u128> = (1..=5).map(|n| x.complexity(n)).collect();
        assert_eq!(counts, [2, 3, 5, 8, 13]);
    }

    #[test]
    fn sft_trims_dead_ends() {
        // 'c' has no successor, so it never occurs in a bi-infinite point.
        let abc = Alphabet::new("abc".chars()).unwrap();
        let forbidden = ["ca", "cb", "cc"].map(|f| abc.parse_word(f).unwrap());
        let x = ShiftPresentation::sft(abc.clone(), forbidden).unwrap();
        assert_eq!(x.complexity(1), 2);
        assert!(!x.is_legal(&abc.parse_word("ac").unwrap()));
        assert_eq!(x.complexity(4), 16);
    }

    #[test]
    fn empty_sft_rejected() {
        let r = ShiftPresentation::sft(bin(), [vec![0], vec![1]]);
        assert!(matches!(r, Err(Error::InvalidPresentation(_))));
        let r = ShiftPresentation::sft(bin(), [vec![]]);
        assert!(matches!(r, Err(Error::InvalidPresentation(_))));
    }

    #[test]
    fn non_primitive_substitution_rejected() {
        // 0 -> 00, 1 -> 11 never mixes the symbols.
        let r = ShiftPresentation::substitution(bin(), vec![vec![0, 0], vec![1, 1]]);
        assert!(matches!(r, Err(Error::InvalidPresentation(_))));
        let one = Alphabet::new(['a']).unwrap();
        assert!(ShiftPresentation::substitution(one, vec![vec![0]]).is_err());
        assert!(ShiftPresentation::substitution(bin(), vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn empty_alphabet_rejected() {
        assert!(Alphabet::new(std::iter::empty()).is_err());
        assert!(Alphabet::new("aa".chars()).is_err());
    }

    #[test]
    fn fibonacci_words() {
        let x = builtin_shift("fibonacci").unwrap();
        assert_eq!(x.words_of_length(4).len(), 5);
        for n in 1..=10 {
            assert_eq!(x.complexity(n), n as u128 + 1, "n = {n}");
        }
    }

    #[test]
    fn periodic_words_and_normalisation() {
        let x = ShiftPresentation::periodic(bin(), vec![0, 1, 0, 1, 0, 1]).unwrap();
        assert_eq!(x.kind(), &PresentationKind::PeriodicOrbit { seed: vec![0, 1] });
        assert_eq!(strs(&x, &x.words_of_length(5)), ["01010", "10101"]);
        assert!(x.is_finite());
        assert!(!builtin_shift("fibonacci").unwrap().is_finite());
    }

    #[test]
    fn special_words_examples() {
        let fib = builtin_shift("fibonacci").unwrap();
        for n in 1..=8 {
            assert_eq!(fib.special_words(n, Side::Right).len(), 1, "n = {n}");
            assert_eq!(fib.special_words(n, Side::Left).len(), 1, "n = {n}");
        }
        let full = builtin_shift("full-2").unwrap();
        assert_eq!(full.special_words(2, Side::Right).len(), 4);
        let per = builtin_shift("periodic-01").unwrap();
        assert!(per.special_words(3, Side::Right).is_empty());
    }

    #[test]
    fn entropy_profiles() {
        let full = builtin_shift("full-2").unwrap().entropy_profile(16);
        for h in &full.entropy_estimates {
            assert!((h - 2f64.ln()).abs() <= 4.0 * f64::EPSILON);
        }
        let fib = builtin_shift("fibonacci").unwrap().entropy_profile(12);
        for (i, h) in fib.entropy_estimates.iter().enumerate() {
            let n = (i + 1) as f64;
            assert!((h - (n + 1.0).ln() / n).abs() < 1e-12);
        }
        assert!(fib.entropy_estimates.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(fib.inf_at, 12);
        assert!(fib.to_csv().starts_with("n,P,entropy_estimate\n1,2,"));
    }

    #[test]
    fn morse_hedlund_examples() {
        let per = builtin_shift("periodic-01").unwrap();
        assert_eq!(per.morse_hedlund_test(10), MorseHedlund::PeriodicWitness(2));
        let fib = builtin_shift("fibonacci").unwrap();
        assert_eq!(fib.morse_hedlund_test(10), MorseHedlund::NoWitnessUpTo(10));
        let full = builtin_shift("full-2").unwrap();
        assert_eq!(full.morse_hedlund_test(5), MorseHedlund::NoWitnessUpTo(5));
    }

    #[test]
    fn zero_length_is_degenerate() {
        let fib = builtin_shift("fibonacci").unwrap();
        assert_eq!(fib.complexity(0), 1);
        assert_eq!(fib.words_of_length(0).len(), 1);
    }

    #[test]
    fn alphabet_round_trip() {
        let a = Alphabet::new("xyz".chars()).unwrap();
        let w = a.parse_word("zyx").unwrap();
        assert_eq!(w, vec![2, 1, 0]);
        assert_eq!(a.render(&w), "zyx");
        assert_eq!(a.parse_word("xq"), Err(Error::UnknownSymbol('q')));
    }
}
