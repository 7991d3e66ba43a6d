//! Exactly evaluable groups, Cayley-ball searches and distortion certificates.
//!
//! Three concrete models are provided by [`GroupModel`]:
//!
//! * ℤᵈ with integer vectors;
//! * the discrete Heisenberg group on triples `(x, y, z)` with
//!   `(x,y,z)·(x',y',z') = (x+x', y+y', z+z'+x·y')`;
//! * BS(1,n) as affine maps `t ↦ nᵏ·t + m` with `m ∈ ℤ[1/n]`, multiplied by
//!   composition (`g·h` applies `h` first), so `b a b⁻¹ = aⁿ` for
//!   `a = t ↦ t+1`, `b = t ↦ n·t`.
//!
//! Elements are kept in canonical form, so structural equality and hashing
//! are the group's equality. Ball searches are generic over [`Group`] and
//! are also used on groups of block codes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::Exec;
use crate::trend::{self, TrendFit};

/// Default radius cap for exact ball searches.
pub const DEFAULT_RADIUS_CAP: usize = 14;
/// Default cap on the number of stored ball elements.
pub const DEFAULT_STATE_CAP: usize = 5_000_000;

/// A group with exactly computable multiplication and canonical elements.
pub trait Group: Sync {
    type Elem: Clone + Eq + Hash + Send + Sync + fmt::Debug;

    fn identity(&self) -> Self::Elem;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;

    fn power(&self, g: &Self::Elem, n: i64) -> Self::Elem {
        let base = if n < 0 { self.inverse(g) } else { g.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.multiply(&sq, &sq);
            }
        }
        acc
    }

    /// `a b a⁻¹ b⁻¹`.
    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.multiply(a, b);
        let ab_ai = self.multiply(&ab, &self.inverse(a));
        self.multiply(&ab_ai, &self.inverse(b))
    }
}

/// An element of ℤ[1/n] in lowest terms: `num / nᵉˣᵖ` with `n ∤ num` when
/// `exp > 0`, and `exp = 0` for zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NAdic {
    pub num: BigInt,
    pub exp: u32,
}

impl NAdic {
    pub fn integer(v: impl Into<BigInt>) -> Self {
        NAdic { num: v.into(), exp: 0 }
    }

    fn normalized(mut num: BigInt, mut exp: u32, base: u32) -> Self {
        if num.is_zero() {
            return NAdic { num, exp: 0 };
        }
        let b = BigInt::from(base);
        while exp > 0 {
            let (q, r) = num.div_rem(&b);
            if !r.is_zero() {
                break;
            }
            num = q;
            exp -= 1;
        }
        NAdic { num, exp }
    }

    /// `self · base^shift`.
    fn scale(&self, shift: i64, base: u32) -> Self {
        if shift >= 0 {
            let s = shift as u64;
            if u64::from(self.exp) >= s {
                NAdic::normalized(self.num.clone(), self.exp - s as u32, base)
            } else {
                let up = BigInt::from(base).pow((s - u64::from(self.exp)) as u32);
                NAdic { num: &self.num * up, exp: 0 }
            }
        } else {
            let exp = self.exp + shift.unsigned_abs() as u32;
            NAdic::normalized(self.num.clone(), exp, base)
        }
    }

    fn add(&self, other: &Self, base: u32) -> Self {
        let exp = self.exp.max(other.exp);
        let b = BigInt::from(base);
        let lhs = &self.num * b.pow(exp - self.exp);
        let rhs = &other.num * b.pow(exp - other.exp);
        NAdic::normalized(lhs + rhs, exp, base)
    }

    fn neg(&self) -> Self {
        NAdic { num: -&self.num, exp: self.exp }
    }
}

impl fmt::Display for NAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/n^{}", self.num, self.exp)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Element {
    Zd(Vec<i64>),
    Heisenberg([i64; 3]),
    /// `t ↦ nᵏ·t + m`.
    Affine { k: i64, m: NAdic },
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Zd(v) => write!(f, "{v:?}"),
            Element::Heisenberg([x, y, z]) => write!(f, "({x},{y},{z})"),
            Element::Affine { k, m } => write!(f, "(k={k}, m={m})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupModel {
    Zd { dim: usize },
    Heisenberg,
    /// BS(1,n), n ≥ 2.
    BaumslagSolitar { n: u32 },
}

impl GroupModel {
    pub fn zd(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGroup("Z^d needs d >= 1".into()));
        }
        Ok(GroupModel::Zd { dim })
    }

    pub fn bs(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGroup(format!("BS(1,n) needs n >= 2, got {n}")));
        }
        Ok(GroupModel::BaumslagSolitar { n })
    }

    pub fn name(&self) -> String {
        match self {
            GroupModel::Zd { dim } => format!("Z^{dim}"),
            GroupModel::Heisenberg => "Heisenberg".into(),
            GroupModel::BaumslagSolitar { n } => format!("BS(1,{n})"),
        }
    }

    pub fn contains(&self, e: &Element) -> bool {
        match (self, e) {
            (GroupModel::Zd { dim }, Element::Zd(v)) => v.len() == *dim,
            (GroupModel::Heisenberg, Element::Heisenberg(_)) => true,
            (GroupModel::BaumslagSolitar { n }, Element::Affine { m, .. }) => {
                let canon = NAdic::normalized(m.num.clone(), m.exp, *n);
                &canon == m
            }
            _ => false,
        }
    }

    /// Builds the BS element `t ↦ nᵏ·t + p/q`; `q` must be a power of `n`.
    pub fn affine(&self, k: i64, p: BigInt, q: BigInt) -> Result<Element> {
        let GroupModel::BaumslagSolitar { n } = *self else {
            return Err(Error::InvalidGroup("affine elements live in BS(1,n)".into()));
        };
        if !q.is_positive() {
            return Err(Error::InvalidGroup("denominator must be positive".into()));
        }
        let b = BigInt::from(n);
        let mut exp = 0u32;
        let mut rest = q;
        while rest > BigInt::one() {
            let (qq, r) = rest.div_rem(&b);
            if !r.is_zero() {
                return Err(Error::InvalidGroup(format!(
                    "denominator is not a power of {n}"
                )));
            }
            rest = qq;
            exp += 1;
        }
        Ok(Element::Affine {
            k,
            m: NAdic::normalized(p, exp, n),
        })
    }

    /// The standard generators: unit vectors for ℤᵈ, `u, t, s` for
    /// Heisenberg, `a, b` for BS(1,n).
    pub fn standard_generators(&self) -> GeneratingSet {
        let gens: Vec<(String, Element)> = match *self {
            GroupModel::Zd { dim } => (0..dim)
                .map(|i| {
                    let mut v = vec![0; dim];
                    v[i] = 1;
                    (format!("e{}", i + 1), Element::Zd(v))
                })
                .collect(),
            GroupModel::Heisenberg => vec![
                ("u".into(), Element::Heisenberg([1, 0, 0])),
                ("t".into(), Element::Heisenberg([0, 1, 0])),
                ("s".into(), Element::Heisenberg([0, 0, 1])),
            ],
            GroupModel::BaumslagSolitar { .. } => vec![
                ("a".into(), Element::Affine { k: 0, m: NAdic::integer(1) }),
                ("b".into(), Element::Affine { k: 1, m: NAdic::integer(0) }),
            ],
        };
        GeneratingSet::symmetric(self, gens).expect("standard generators are valid")
    }
}

impl Group for GroupModel {
    type Elem = Element;

    fn identity(&self) -> Element {
        match *self {
            GroupModel::Zd { dim } => Element::Zd(vec![0; dim]),
            GroupModel::Heisenberg => Element::Heisenberg([0, 0, 0]),
            GroupModel::BaumslagSolitar { .. } => Element::Affine {
                k: 0,
                m: NAdic::integer(0),
            },
        }
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (GroupModel::Zd { .. }, Element::Zd(x), Element::Zd(y)) => {
                Element::Zd(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (GroupModel::Heisenberg, Element::Heisenberg(p), Element::Heisenberg(q)) => {
                Element::Heisenberg([p[0] + q[0], p[1] + q[1], p[2] + q[2] + p[0] * q[1]])
            }
            (
                GroupModel::BaumslagSolitar { n },
                Element::Affine { k: k1, m: m1 },
                Element::Affine { k: k2, m: m2 },
            ) => Element::Affine {
                k: k1 + k2,
                m: m1.add(&m2.scale(*k1, *n), *n),
            },
            _ => panic!("element does not belong to {}", self.name()),
        }
    }

    fn inverse(&self, a: &Element) -> Element {
        match (self, a) {
            (GroupModel::Zd { .. }, Element::Zd(x)) => Element::Zd(x.iter().map(|v| -v).collect()),
            (GroupModel::Heisenberg, Element::Heisenberg([x, y, z])) => {
                Element::Heisenberg([-x, -y, -z + x * y])
            }
            (GroupModel::BaumslagSolitar { n }, Element::Affine { k, m }) => Element::Affine {
                k: -k,
                m: m.scale(-k, *n).neg(),
            },
            _ => panic!("element does not belong to {}", self.name()),
        }
    }
}

/// Named generators. When `symmetric` is set, every generator may also be
/// used inverted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratingSet {
    generators: Vec<(String, Element)>,
    symmetric: bool,
}

impl GeneratingSet {
    pub fn new(model: &GroupModel, generators: Vec<(String, Element)>, symmetric: bool) -> Result<Self> {
        let id = model.identity();
        let mut seen = std::collections::BTreeSet::new();
        for (name, e) in &generators {
            if !seen.insert(name.clone()) {
                return Err(Error::InvalidGroup(format!("duplicate generator name {name:?}")));
            }
            if name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == '^') {
                return Err(Error::InvalidGroup(format!("bad generator name {name:?}")));
            }
            if !model.contains(e) {
                return Err(Error::InvalidGroup(format!(
                    "generator {name} is not a canonical element of {}",
                    model.name()
                )));
            }
            if *e == id {
                return Err(Error::InvalidGroup(format!("generator {name} is the identity")));
            }
        }
        if generators.is_empty() {
            return Err(Error::InvalidGroup("empty generating set".into()));
        }
        Ok(GeneratingSet {
            generators,
            symmetric,
        })
    }

    pub fn symmetric(model: &GroupModel, generators: Vec<(String, Element)>) -> Result<Self> {
        Self::new(model, generators, true)
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn generators(&self) -> &[(String, Element)] {
        &self.generators
    }

    pub fn binding(&self) -> BTreeMap<String, Element> {
        self.generators.iter().cloned().collect()
    }

    /// Elements one Cayley-graph step away from the identity.
    pub fn steps<G: Group<Elem = Element>>(&self, group: &G) -> Vec<Element> {
        let mut out = Vec::new();
        for (_, g) in &self.generators {
            out.push(g.clone());
            if self.symmetric {
                out.push(group.inverse(g));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Token {
    pub name: String,
    pub inverse: bool,
}

/// A word in named generators, evaluated left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WordExpr {
    pub tokens: Vec<Token>,
}

impl WordExpr {
    pub fn empty() -> Self {
        WordExpr::default()
    }

    /// Number of letters, counting multiplicity.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Appends `name^exp`.
    pub fn push_power(&mut self, name: &str, exp: i64) {
        for _ in 0..exp.unsigned_abs() {
            self.tokens.push(Token {
                name: name.to_string(),
                inverse: exp < 0,
            });
        }
    }

    pub fn power(name: &str, exp: i64) -> Self {
        let mut w = WordExpr::empty();
        w.push_power(name, exp);
        w
    }

    pub fn concat(mut self, other: &WordExpr) -> Self {
        self.tokens.extend(other.tokens.iter().cloned());
        self
    }

    pub fn inverse(&self) -> Self {
        WordExpr {
            tokens: self
                .tokens
                .iter()
                .rev()
                .map(|t| Token {
                    name: t.name.clone(),
                    inverse: !t.inverse,
                })
                .collect(),
        }
    }

    /// `x y x⁻¹ y⁻¹`.
    pub fn commutator(x: &WordExpr, y: &WordExpr) -> Self {
        x.clone().concat(y).concat(&x.inverse()).concat(&y.inverse())
    }
}

impl fmt::Display for WordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tokens.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.tokens.len() {
            let t = &self.tokens[i];
            let mut j = i;
            while j < self.tokens.len() && self.tokens[j] == *t {
                j += 1;
            }
            let run = (j - i) as i64;
            let exp = if t.inverse { -run } else { run };
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if exp == 1 {
                write!(f, "{}", t.name)?;
            } else {
                write!(f, "{}^{}", t.name, exp)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl FromStr for WordExpr {
    type Err = Error;

    /// Parses whitespace-separated factors `name` or `name^k` (k may be
    /// negative); `1` or the empty string is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let mut w = WordExpr::empty();
        for part in s.split_whitespace() {
            if part == "1" {
                continue;
            }
            let (name, exp) = match part.split_once('^') {
                Some((n, e)) => {
                    let exp: i64 = e.parse().map_err(|_| {
                        Error::InvalidArgument(format!("bad exponent in {part:?}"))
                    })?;
                    (n, exp)
                }
                None => (part, 1),
            };
            if name.is_empty() {
                return Err(Error::InvalidArgument(format!("missing generator in {part:?}")));
            }
            w.push_power(name, exp);
        }
        Ok(w)
    }
}

/// Left-to-right product of `word` under `binding`.
pub fn evaluate<G: Group>(
    word: &WordExpr,
    group: &G,
    binding: &BTreeMap<String, G::Elem>,
) -> Result<G::Elem> {
    let mut acc = group.identity();
    for t in &word.tokens {
        let g = binding
            .get(&t.name)
            .ok_or_else(|| Error::UnboundToken(t.name.clone()))?;
        acc = if t.inverse {
            group.multiply(&acc, &group.inverse(g))
        } else {
            group.multiply(&acc, g)
        };
    }
    Ok(acc)
}

/// Result of a level-synchronous breadth-first search of a Cayley graph.
#[derive(Debug, Clone)]
pub struct Ball<E: Eq + Hash> {
    dist: HashMap<E, u32>,
    /// `sizes[r] = |B(r)|` for every completed radius.
    pub sizes: Vec<usize>,
    /// Set when the state budget stopped the search early.
    pub budget_hit: Option<Error>,
    /// Distance of the requested stop target, when it was reached.
    pub found: Option<u32>,
}

impl<E: Eq + Hash> Ball<E> {
    /// Largest radius whose ball is completely known.
    pub fn radius(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn distance(&self, e: &E) -> Option<u32> {
        self.dist.get(e).copied()
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }
}

/// Explores the ball of radius `radius` around the identity.
///
/// Frontier expansion fans out under `exec`; new elements are merged in
/// frontier order, so results never depend on scheduling. If `stop_at` is
/// reached the search ends after that level. When more than `state_cap`
/// elements would be stored, the ball is returned up to the last completed
/// radius with `budget_hit` set.
pub fn explore_ball<G: Group>(
    group: &G,
    steps: &[G::Elem],
    radius: usize,
    state_cap: usize,
    stop_at: Option<&G::Elem>,
    exec: Exec,
) -> Ball<G::Elem> {
    let id = group.identity();
    let mut dist = HashMap::new();
    dist.insert(id.clone(), 0u32);
    let mut sizes = vec![1usize];
    let mut found = stop_at.filter(|t| **t == id).map(|_| 0);
    let mut frontier = vec![id];
    let mut budget_hit = None;

    for r in 1..=radius {
        if found.is_some() || frontier.is_empty() {
            break;
        }
        let candidates: Vec<Vec<G::Elem>> = exec.map(&frontier, |f| {
            steps.iter().map(|s| group.multiply(f, s)).collect()
        });
        let mut next = Vec::new();
        let mut overflow = false;
        for c in candidates.into_iter().flatten() {
            if dist.contains_key(&c) {
                continue;
            }
            if dist.len() >= state_cap {
                overflow = true;
                break;
            }
            if stop_at == Some(&c) {
                found = Some(r as u32);
            }
            dist.insert(c.clone(), r as u32);
            next.push(c);
        }
        if overflow {
            budget_hit = Some(Error::StateBudget {
                radius_reached: r - 1,
                states: dist.len(),
                cap: state_cap,
            });
            // Drop the partial level so every stored distance is exact and
            // the ball is complete up to `r - 1`.
            dist.retain(|_, d| (*d as usize) < r);
            break;
        }
        sizes.push(dist.len());
        frontier = next;
    }
    Ball {
        dist,
        sizes,
        budget_hit,
        found,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WordLength {
    Exact(u32),
    ExceedsRadius,
}

/// Exact word length ℓ_S(g) by breadth-first search, up to `radius_max`.
pub fn bfs_word_length<G: Group>(
    group: &G,
    steps: &[G::Elem],
    target: &G::Elem,
    radius_max: usize,
    state_cap: usize,
    exec: Exec,
) -> Result<WordLength> {
    let ball = explore_ball(group, steps, radius_max, state_cap, Some(target), exec);
    match (ball.found, ball.budget_hit) {
        (Some(d), _) => Ok(WordLength::Exact(d)),
        (None, Some(e)) => Err(e),
        (None, None) => Ok(WordLength::ExceedsRadius),
    }
}

/// Sources of explicit short words for powers of distorted elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateSource {
    /// Base-`n` Hörner words in BS(1,n) for powers of the generator `a`.
    Horner { a: String, b: String },
    /// Commutator words for powers of `[u, t]` in the Heisenberg group: the
    /// smaller of the square certificate (perfect squares) and the base-q one.
    HeisenbergCenter { u: String, t: String },
}

impl CertificateSource {
    /// A word for `gⁿ`, if this source applies; the caller verifies it.
    fn word_for(&self, model: &GroupModel, binding: &BTreeMap<String, Element>, g: &Element, n: u64) -> Option<WordExpr> {
        match (self, model) {
            (CertificateSource::Horner { a, b }, GroupModel::BaumslagSolitar { n: base }) => {
                let a_elem = binding.get(a)?;
                let p = integer_ratio_affine(g, a_elem)?;
                let total = p.checked_mul(n as i64)?;
                let word = bs_horner_certificate(total.unsigned_abs(), *base).ok()?;
                let word = rename(&word, &[("a", a), ("b", b)]);
                Some(if total < 0 { word.inverse() } else { word })
            }
            (CertificateSource::HeisenbergCenter { u, t }, GroupModel::Heisenberg) => {
                let s = model.commutator(binding.get(u)?, binding.get(t)?);
                let p = integer_ratio_center(g, &s)?;
                let total = p.checked_mul(n as i64)?.unsigned_abs();
                let mut word = base_q_certificate(total);
                let root = integer_sqrt(total);
                if root * root == total {
                    let sq = heisenberg_square_certificate(root);
                    if sq.len() < word.len() {
                        word = sq;
                    }
                }
                let word = rename(&word, &[("u", u), ("t", t)]);
                Some(if p < 0 { word.inverse() } else { word })
            }
            _ => None,
        }
    }
}

fn rename(word: &WordExpr, map: &[(&str, &String)]) -> WordExpr {
    WordExpr {
        tokens: word
            .tokens
            .iter()
            .map(|t| Token {
                name: map
                    .iter()
                    .find(|(from, _)| *from == t.name)
                    .map_or_else(|| t.name.clone(), |(_, to)| (*to).clone()),
                inverse: t.inverse,
            })
            .collect(),
    }
}

/// `p` with `g = aᵖ` when `a` is a translation `t ↦ t + m₀`.
fn integer_ratio_affine(g: &Element, a: &Element) -> Option<i64> {
    let (Element::Affine { k: 0, m: mg }, Element::Affine { k: 0, m: ma }) = (g, a) else {
        return None;
    };
    if mg.exp != ma.exp || ma.num.is_zero() {
        return None;
    }
    let (q, r) = mg.num.div_rem(&ma.num);
    if !r.is_zero() {
        return None;
    }
    i64::try_from(q).ok().filter(|&p| p != 0)
}

/// `p` with `g = sᵖ` for central `s = (0, 0, c)`.
fn integer_ratio_center(g: &Element, s: &Element) -> Option<i64> {
    let (Element::Heisenberg([0, 0, zg]), Element::Heisenberg([0, 0, zs])) = (g, s) else {
        return None;
    };
    if *zs == 0 || zg % zs != 0 {
        return None;
    }
    Some(zg / zs).filter(|&p| p != 0)
}

fn integer_sqrt(v: u64) -> u64 {
    let mut r = (v as f64).sqrt() as u64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// One entry `ℓ_S(gⁿ)` of a distortion profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthEntry {
    pub n: u64,
    /// Exact length, or an upper bound when `exact` is false.
    pub length: u64,
    pub exact: bool,
    /// When the search was complete to a radius without finding `gⁿ`, the
    /// length is known to exceed that radius.
    pub exceeds: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionProfile {
    pub entries: Vec<LengthEntry>,
    pub fit: TrendFit,
    /// Radius to which the Cayley ball was searched exhaustively.
    pub radius_searched: usize,
    pub budget_hit: bool,
}

impl DistortionProfile {
    pub fn lengths(&self) -> Vec<(u64, f64)> {
        self.entries.iter().map(|e| (e.n, e.length as f64)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,length,exact_or_bound\n");
        for e in &self.entries {
            let tag = if e.exact { "exact" } else { "bound" };
            out.push_str(&format!("{},{},{}\n", e.n, e.length, tag));
        }
        out
    }
}

/// Measures `n ↦ ℓ_S(gⁿ)` for `n = 1..=max_n`.
///
/// Lengths are exact where `gⁿ` lies in the searched ball; elsewhere they
/// are the best verified upper bound from the supplied certificates and
/// from subadditivity `ℓ(g^{a+b}) ≤ ℓ(gᵃ) + ℓ(gᵇ)`.
#[allow(clippy::too_many_arguments)]
pub fn distortion_profile(
    model: &GroupModel,
    gens: &GeneratingSet,
    g: &Element,
    max_n: u64,
    radius_max: usize,
    state_cap: usize,
    certificates: &[CertificateSource],
    exec: Exec,
) -> Result<DistortionProfile> {
    if !gens.is_symmetric() {
        return Err(Error::InvalidGroup("word metrics need a symmetric generating set".into()));
    }
    if !model.contains(g) {
        return Err(Error::InvalidGroup("target is not an element of the model".into()));
    }
    let powers: Vec<Element> = {
        let mut acc = model.identity();
        (0..max_n)
            .map(|_| {
                acc = model.multiply(&acc, g);
                acc.clone()
            })
            .collect()
    };
    let mut distinct = std::collections::HashSet::new();
    distinct.insert(model.identity());
    if !powers.iter().all(|p| distinct.insert(p.clone())) {
        return Err(Error::InvalidGroup(format!(
            "element has finite order (a power up to {max_n} repeats)"
        )));
    }

    let steps = gens.steps(model);
    let ball = explore_ball(model, &steps, radius_max, state_cap, None, exec);
    let complete_radius = ball.radius() as u64;
    let binding = gens.binding();

    let cert_lengths: Vec<Option<u64>> = exec.map(&powers, |p| {
        let n = powers.iter().position(|q| q == p).expect("present") as u64 + 1;
        certificates
            .iter()
            .filter_map(|c| c.word_for(model, &binding, g, n))
            .filter(|w| evaluate(w, model, &binding).as_ref() == Ok(p))
            .map(|w| w.len() as u64)
            .min()
    });

    let mut entries: Vec<LengthEntry> = Vec::with_capacity(powers.len());
    for (i, p) in powers.iter().enumerate() {
        let n = i as u64 + 1;
        if let Some(d) = ball.distance(p) {
            entries.push(LengthEntry {
                n,
                length: u64::from(d),
                exact: true,
                exceeds: None,
            });
            continue;
        }
        let mut bound = cert_lengths[i].unwrap_or(u64::MAX);
        for a in 1..n {
            let b = n - a;
            let s = entries[(a - 1) as usize].length + entries[(b - 1) as usize].length;
            bound = bound.min(s);
        }
        entries.push(LengthEntry {
            n,
            length: bound,
            exact: false,
            exceeds: Some(complete_radius),
        });
    }
    let fit = trend::classify(
        &entries
            .iter()
            .map(|e| (e.n, e.length as f64))
            .collect::<Vec<_>>(),
    );
    Ok(DistortionProfile {
        entries,
        fit,
        radius_searched: ball.radius(),
        budget_hit: ball.budget_hit.is_some(),
    })
}

/// `n ↦ ℓ_S(gⁿ)` in any group, from one ball search plus subadditivity;
/// no certificates and no finite-order check.
pub fn power_length_profile<G: Group>(
    group: &G,
    steps: &[G::Elem],
    g: &G::Elem,
    max_n: u64,
    radius_max: usize,
    state_cap: usize,
    exec: Exec,
) -> DistortionProfile {
    let ball = explore_ball(group, steps, radius_max, state_cap, None, exec);
    let complete_radius = ball.radius() as u64;
    let mut entries: Vec<LengthEntry> = Vec::with_capacity(max_n as usize);
    let mut acc = group.identity();
    for n in 1..=max_n {
        acc = group.multiply(&acc, g);
        if let Some(d) = ball.distance(&acc) {
            entries.push(LengthEntry {
                n,
                length: u64::from(d),
                exact: true,
                exceeds: None,
            });
            continue;
        }
        let bound = (1..n)
            .map(|a| entries[(a - 1) as usize].length.saturating_add(entries[(n - a - 1) as usize].length))
            .min()
            .unwrap_or(u64::MAX);
        entries.push(LengthEntry {
            n,
            length: bound,
            exact: false,
            exceeds: Some(complete_radius),
        });
    }
    let fit = trend::classify(
        &entries
            .iter()
            .filter(|e| e.length != u64::MAX)
            .map(|e| (e.n, e.length as f64))
            .collect::<Vec<_>>(),
    );
    DistortionProfile {
        entries,
        fit,
        radius_searched: ball.radius(),
        budget_hit: ball.budget_hit.is_some(),
    }
}

/// Hörner word `bᵏ a^{α_k} b⁻¹ a^{α_{k−1}} ⋯ b⁻¹ a^{α_0}` for `aᵐ` in BS(1,n),
/// where `m = Σ αᵢ nⁱ` in base `n`. Its length is at most `k + n(k+1) + k`.
pub fn bs_horner_certificate(m: u64, n: u32) -> Result<WordExpr> {
    if m == 0 {
        return Err(Error::InvalidArgument("Hörner certificates need m >= 1".into()));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("base must be >= 2, got {n}")));
    }
    let digits = base_digits(m, u64::from(n));
    let k = digits.len() as i64 - 1;
    let mut w = WordExpr::power("b", k);
    for (i, &alpha) in digits.iter().rev().enumerate() {
        if i > 0 {
            w.push_power("b", -1);
        }
        w.push_power("a", alpha as i64);
    }
    Ok(w)
}

/// Base-`base` digits of `m`, least significant first.
pub fn base_digits(mut m: u64, base: u64) -> Vec<u64> {
    let mut digits = Vec::new();
    while m > 0 {
        digits.push(m % base);
        m /= base;
    }
    if digits.is_empty() {
        digits.push(0);
    }
    digits
}

/// `uⁿ tⁿ u⁻ⁿ t⁻ⁿ`, which equals `s^{n²}` in the Heisenberg group.
pub fn heisenberg_square_certificate(n: u64) -> WordExpr {
    let n = n as i64;
    WordExpr::commutator(&WordExpr::power("u", n), &WordExpr::power("t", n))
}

/// `[u^{α₀}, t]·[u^q, t^{α₁}]` for `sⁿ`, with `q` the least integer above
/// `√n` and `n = α₀ + α₁ q`; a factor whose digit is zero is omitted. Its
/// length is `2α₀ + 2 + 2q + 2α₁` at most, below `16(√n + 1)`. `n = 0`
/// gives the empty word.
pub fn base_q_certificate(n: u64) -> WordExpr {
    let q = integer_sqrt(n) + 1;
    let (a0, a1) = (n % q, n / q);
    debug_assert!(a1 < q);
    let mut word = WordExpr::empty();
    if a0 > 0 {
        word = word.concat(&WordExpr::commutator(
            &WordExpr::power("u", a0 as i64),
            &WordExpr::power("t", 1),
        ));
    }
    if a1 > 0 {
        word = word.concat(&WordExpr::commutator(
            &WordExpr::power("u", q as i64),
            &WordExpr::power("t", a1 as i64),
        ));
    }
    word
}

/// Checks `[u^{m₁}, t^{m₂}] = s^{m₁m₂}` in the Heisenberg group.
pub fn commutator_power_check(m1: i64, m2: i64) -> bool {
    let h = GroupModel::Heisenberg;
    let u = Element::Heisenberg([1, 0, 0]);
    let t = Element::Heisenberg([0, 1, 0]);
    let s = Element::Heisenberg([0, 0, 1]);
    let lhs = h.commutator(&h.power(&u, m1), &h.power(&t, m2));
    let base = h.commutator(&u, &t);
    lhs == h.power(&base, m1 * m2) && lhs == h.power(&s, m1 * m2)
}

/// Bass–Guivarc'h degree Σ k·rank(G_k/G_{k+1}); `ranks[0]` is the rank of
/// G₁/G₂.
pub fn bass_guivarch_degree(ranks: &[u64]) -> u64 {
    ranks
        .iter()
        .enumerate()
        .map(|(i, r)| (i as u64 + 1) * r)
        .sum()
}

/// Least growth degree of a torsion-free `d`-step nilpotent group: d(d+1)/2 + 1.
pub fn min_growth_degree(d: u64) -> Result<u64> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("step must be >= 2, got {d}")));
    }
    Ok(d * (d + 1) / 2 + 1)
}

/// Least `d ≥ 1` with `c ≤ (d+1)(d+2)/2 + 2`: complexity `o(n^c)` forces
/// torsion-free subgroups to be virtually `d`-step nilpotent.
pub fn embedding_step_bound(c: f64) -> Result<u64> {
    if c.is_nan() || c <= 0.0 || !c.is_finite() {
        return Err(Error::InvalidArgument(format!("exponent must be positive, got {c}")));
    }
    Ok((1u64..)
        .find(|&d| c <= ((d + 1) * (d + 2) / 2 + 2) as f64)
        .expect("bound grows without limit"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallGrowth {
    /// `|B(r)|` for `r = 0..=radius` (possibly fewer under a budget).
    pub sizes: Vec<usize>,
    /// Least-squares slope of log|B(r)| against log r over the upper half.
    pub degree: f64,
    /// Least-squares slope of log|B(r)| against r over the upper half.
    pub exponential_rate: f64,
    /// Exponential growth fits the tail better than polynomial growth.
    pub superpolynomial: bool,
    pub budget_hit: bool,
}

pub fn ball_growth(
    model: &GroupModel,
    gens: &GeneratingSet,
    radius: usize,
    state_cap: usize,
    exec: Exec,
) -> Result<BallGrowth> {
    if !gens.is_symmetric() {
        return Err(Error::InvalidGroup("ball growth needs a symmetric generating set".into()));
    }
    let ball = explore_ball(model, &gens.steps(model), radius, state_cap, None, exec);
    let sizes = ball.sizes.clone();
    let top = sizes.len() - 1;
    let tail: Vec<usize> = (1..=top).filter(|&r| 2 * r >= top).collect();
    if tail.len() < 2 {
        return Err(ball.budget_hit.unwrap_or_else(|| {
            Error::InvalidArgument("ball growth needs a radius of at least 2".into())
        }));
    }
    let log_r: Vec<f64> = tail.iter().map(|&r| (r as f64).ln()).collect();
    let lin_r: Vec<f64> = tail.iter().map(|&r| r as f64).collect();
    let log_b: Vec<f64> = tail.iter().map(|&r| (sizes[r] as f64).ln()).collect();
    let degree = trend::slope(&log_r, &log_b);
    let exponential_rate = trend::slope(&lin_r, &log_b);
    let superpolynomial = trend::line_residual(&lin_r, &log_b) < trend::line_residual(&log_r, &log_b);
    Ok(BallGrowth {
        sizes,
        degree,
        exponential_rate,
        superpolynomial,
        budget_hit: ball.budget_hit.is_some(),
    })
}

/// Names of the built-in groups, in catalogue order.
pub const BUILTIN_GROUPS: [&str; 5] = ["Z1", "Z2", "heisenberg", "bs12", "bs13"];

pub fn builtin_group(name: &str) -> Option<GroupModel> {
    match name {
        "Z1" => Some(GroupModel::Zd { dim: 1 }),
        "Z2" => Some(GroupModel::Zd { dim: 2 }),
        "heisenberg" => Some(GroupModel::Heisenberg),
        "bs12" => Some(GroupModel::BaumslagSolitar { n: 2 }),
        "bs13" => Some(GroupModel::BaumslagSolitar { n: 3 }),
        _ => None,
    }
}
