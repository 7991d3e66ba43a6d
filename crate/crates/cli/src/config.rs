//! Experiment configuration: a JSON document naming shifts, codes and
//! groups, plus a list of runs over them.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use autlab::blockcode::{self, BlockCode, TableBudget};
use autlab::grouplab::{self, GeneratingSet, GroupModel};
use autlab::par::Exec;
use autlab::shiftlang::{self, Alphabet, ShiftPresentation, Side, Symbol};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub shifts: BTreeMap<String, ShiftSpec>,
    #[serde(default)]
    pub codes: BTreeMap<String, CodeSpec>,
    #[serde(default)]
    pub groups: BTreeMap<String, GroupSpec>,
    #[serde(default)]
    pub runs: Vec<RunSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budgets {
    #[serde(default = "default_table_rows")]
    pub table_rows: usize,
    #[serde(default = "default_bfs_states")]
    pub bfs_states: usize,
    #[serde(default = "default_radius_cap")]
    pub radius_cap: usize,
}

fn default_table_rows() -> usize {
    blockcode::DEFAULT_TABLE_ROWS
}

fn default_bfs_states() -> usize {
    grouplab::DEFAULT_STATE_CAP
}

fn default_radius_cap() -> usize {
    grouplab::DEFAULT_RADIUS_CAP
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            table_rows: default_table_rows(),
            bfs_states: default_bfs_states(),
            radius_cap: default_radius_cap(),
        }
    }
}

impl Budgets {
    pub fn tables(&self) -> TableBudget {
        TableBudget {
            max_rows: self.table_rows,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShiftSpec {
    Builtin { name: String },
    Full { alphabet: String },
    Sft { alphabet: String, forbidden: Vec<String> },
    Substitution { alphabet: String, rule: Vec<String> },
    Periodic { alphabet: String, seed: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CodeSpec {
    Builtin { name: String, shift: String },
    ShiftPower { shift: String, j: i64 },
    /// Image of each alphabet symbol, in alphabet order.
    SymbolMap { shift: String, map: String },
    /// `outer ∘ inner`, inner applied first.
    Compose { outer: String, inner: String },
    Power { code: String, n: usize },
    /// Rows `window -> symbol`.
    Table { shift: String, radius: usize, rows: BTreeMap<String, String> },
    /// Plain-text rows `window symbol`, path relative to the config file.
    TableFile { shift: String, radius: usize, path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Builtin {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<String>>,
    },
    Zd {
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<String>>,
    },
    Heisenberg {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<String>>,
    },
    BaumslagSolitar {
        n: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<String>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub name: String,
    /// Marks deliberately corrupted inputs; their violations do not fail the batch.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub fabricated: bool,
    #[serde(flatten)]
    pub op: Operation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificates {
    None,
    Horner,
    HeisenbergCenter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeisenbergCertificate {
    Square,
    BaseQ,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum RangeSource {
    Code { code: String, max_n: usize },
    Synthetic { entries: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum ComplexitySource {
    Shift { shift: String, max_n: usize },
    Synthetic { values: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Operation {
    Complexity { shift: String, max_n: usize },
    SpecialWords { shift: String, n: usize, side: Side },
    MorseHedlund { shift: String, max_n: usize },
    ApplyToWord { code: String, word: String },
    RangeProfile { code: String, max_n: usize },
    InverseSearch { code: String, max_radius: usize },
    Patches { code: String, n: usize, k: usize },
    ComplexitySurface { code: String, max_n: usize, max_k: usize },
    CodingCheck { code: String, n: usize, k: usize, a: Vec<(i64, i64)>, b: Vec<(i64, i64)> },
    CyrKra { code: String, n: usize, k: usize },
    VerticalPeriod { code: String, n: usize, k: usize },
    WordLength { group: String, word: String },
    DistortionProfile { group: String, element: String, max_n: u64, certificates: Certificates },
    BallGrowth { group: String, radius: usize },
    HornerCertificate { m: u64, n: u32 },
    HeisenbergCertificate { n: u64, form: HeisenbergCertificate },
    BassGuivarchDegree { ranks: Vec<u64> },
    MinGrowthDegree { d: u64 },
    EmbeddingStepBound { c: f64 },
    RangeVsWordlengthAudit { generators: Vec<String>, element: String, max_m: usize },
    EntropyBoundAudit { range: RangeSource, complexity: ComplexitySource },
    PolynomialBoundAudit { range: RangeSource, complexity: ComplexitySource, d: u32, epsilon: f64 },
    SigmaPowerRangeAudit { shift: String, j: i64, max_m: usize },
}

impl Operation {
    pub fn name(&self) -> &'static str {
        match self {
            Operation::Complexity { .. } => "complexity",
            Operation::SpecialWords { .. } => "special_words",
            Operation::MorseHedlund { .. } => "morse_hedlund",
            Operation::ApplyToWord { .. } => "apply_to_word",
            Operation::RangeProfile { .. } => "range_profile",
            Operation::InverseSearch { .. } => "inverse_search",
            Operation::Patches { .. } => "patches",
            Operation::ComplexitySurface { .. } => "complexity_surface",
            Operation::CodingCheck { .. } => "coding_check",
            Operation::CyrKra { .. } => "cyr_kra",
            Operation::VerticalPeriod { .. } => "vertical_period",
            Operation::WordLength { .. } => "word_length",
            Operation::DistortionProfile { .. } => "distortion_profile",
            Operation::BallGrowth { .. } => "ball_growth",
            Operation::HornerCertificate { .. } => "horner_certificate",
            Operation::HeisenbergCertificate { .. } => "heisenberg_certificate",
            Operation::BassGuivarchDegree { .. } => "bass_guivarch_degree",
            Operation::MinGrowthDegree { .. } => "min_growth_degree",
            Operation::EmbeddingStepBound { .. } => "embedding_step_bound",
            Operation::RangeVsWordlengthAudit { .. } => "range_vs_wordlength_audit",
            Operation::EntropyBoundAudit { .. } => "entropy_bound_audit",
            Operation::PolynomialBoundAudit { .. } => "polynomial_bound_audit",
            Operation::SigmaPowerRangeAudit { .. } => "sigma_power_range_audit",
        }
    }

    fn references(&self) -> (Vec<&str>, Vec<&str>, Vec<&str>) {
        let (mut shifts, mut codes, mut groups) = (Vec::new(), Vec::new(), Vec::new());
        match self {
            Operation::Complexity { shift, .. }
            | Operation::SpecialWords { shift, .. }
            | Operation::MorseHedlund { shift, .. }
            | Operation::SigmaPowerRangeAudit { shift, .. } => shifts.push(shift.as_str()),
            Operation::ApplyToWord { code, .. }
            | Operation::RangeProfile { code, .. }
            | Operation::InverseSearch { code, .. }
            | Operation::Patches { code, .. }
            | Operation::ComplexitySurface { code, .. }
            | Operation::CodingCheck { code, .. }
            | Operation::CyrKra { code, .. }
            | Operation::VerticalPeriod { code, .. } => codes.push(code.as_str()),
            Operation::WordLength { group, .. }
            | Operation::DistortionProfile { group, .. }
            | Operation::BallGrowth { group, .. } => groups.push(group.as_str()),
            Operation::RangeVsWordlengthAudit {
                generators, element, ..
            } => {
                codes.extend(generators.iter().map(String::as_str));
                codes.push(element.as_str());
            }
            Operation::EntropyBoundAudit { range, complexity }
            | Operation::PolynomialBoundAudit {
                range, complexity, ..
            } => {
                if let RangeSource::Code { code, .. } = range {
                    codes.push(code.as_str());
                }
                if let ComplexitySource::Shift { shift, .. } = complexity {
                    shifts.push(shift.as_str());
                }
            }
            Operation::HornerCertificate { .. }
            | Operation::HeisenbergCertificate { .. }
            | Operation::BassGuivarchDegree { .. }
            | Operation::MinGrowthDegree { .. }
            | Operation::EmbeddingStepBound { .. } => {}
        }
        (shifts, codes, groups)
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("malformed config")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks names, budgets and every definition, naming the offending element.
    pub fn validate(&self, base_dir: &Path) -> Result<()> {
        let b = &self.budgets;
        if b.table_rows == 0 || b.bfs_states == 0 || b.radius_cap == 0 {
            bail!("budgets: every budget must be positive");
        }
        let mut names = BTreeSet::new();
        for (i, run) in self.runs.iter().enumerate() {
            let ok = !run.name.is_empty()
                && run
                    .name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
            if !ok {
                bail!("runs[{i}]: name {:?} must be nonempty ASCII letters, digits, '-' or '_'", run.name);
            }
            if run.name == "summary" {
                bail!("runs[{i}]: name \"summary\" is reserved");
            }
            if !names.insert(run.name.as_str()) {
                bail!("runs[{i}]: duplicate run name {:?}", run.name);
            }
            let (shifts, codes, groups) = run.op.references();
            for s in shifts {
                if !self.shifts.contains_key(s) {
                    bail!("runs[{i}] ({}): unknown shift {s:?}", run.name);
                }
            }
            for c in codes {
                if !self.codes.contains_key(c) {
                    bail!("runs[{i}] ({}): unknown code {c:?}", run.name);
                }
            }
            for g in groups {
                if !self.groups.contains_key(g) {
                    bail!("runs[{i}] ({}): unknown group {g:?}", run.name);
                }
            }
        }
        let ws = Workspace::new(self, base_dir);
        for name in self.shifts.keys() {
            ws.shift(name)?;
        }
        for name in self.codes.keys() {
            ws.code(name)?;
        }
        for name in self.groups.keys() {
            ws.group(name)?;
        }
        Ok(())
    }
}

fn alphabet(text: &str) -> Result<Alphabet> {
    Ok(Alphabet::new(text.chars())?)
}

/// Resolves names in a config to built objects.
pub struct Workspace<'a> {
    config: &'a ExperimentConfig,
    base_dir: PathBuf,
}

impl<'a> Workspace<'a> {
    pub fn new(config: &'a ExperimentConfig, base_dir: &Path) -> Self {
        Workspace {
            config,
            base_dir: base_dir.to_path_buf(),
        }
    }

    pub fn budgets(&self) -> Budgets {
        self.config.budgets
    }

    pub fn shift(&self, name: &str) -> Result<Arc<ShiftPresentation>> {
        let spec = self
            .config
            .shifts
            .get(name)
            .ok_or_else(|| anyhow!("unknown shift {name:?}"))?;
        let build = || -> Result<ShiftPresentation> {
            Ok(match spec {
                ShiftSpec::Builtin { name } => shiftlang::builtin_shift(name)
                    .ok_or_else(|| anyhow!("no built-in shift {name:?}"))?,
                ShiftSpec::Full { alphabet: a } => ShiftPresentation::full(alphabet(a)?),
                ShiftSpec::Sft { alphabet: a, forbidden } => {
                    let a = alphabet(a)?;
                    let words = forbidden
                        .iter()
                        .map(|w| a.parse_word(w))
                        .collect::<Result<Vec<_>, _>>()?;
                    ShiftPresentation::sft(a, words)?
                }
                ShiftSpec::Substitution { alphabet: a, rule } => {
                    let a = alphabet(a)?;
                    let rule = rule
                        .iter()
                        .map(|w| a.parse_word(w))
                        .collect::<Result<Vec<_>, _>>()?;
                    ShiftPresentation::substitution(a, rule)?
                }
                ShiftSpec::Periodic { alphabet: a, seed } => {
                    let a = alphabet(a)?;
                    let seed = a.parse_word(seed)?;
                    ShiftPresentation::periodic(a, seed)?
                }
            })
        };
        build()
            .map(Arc::new)
            .with_context(|| format!("shift {name:?}"))
    }

    pub fn code(&self, name: &str) -> Result<BlockCode> {
        self.code_inner(name, &mut Vec::new())
    }

    fn code_inner(&self, name: &str, stack: &mut Vec<String>) -> Result<BlockCode> {
        if stack.iter().any(|s| s == name) {
            bail!("code {name:?} is defined in terms of itself");
        }
        let spec = self
            .config
            .codes
            .get(name)
            .ok_or_else(|| anyhow!("unknown code {name:?}"))?;
        stack.push(name.to_string());
        let budget = self.config.budgets.tables();
        let exec = Exec::default();
        let result = (|| -> Result<BlockCode> {
            Ok(match spec {
                CodeSpec::Builtin { name, shift } => blockcode::builtin_code(name, self.shift(shift)?, budget)
                    .ok_or_else(|| anyhow!("no built-in code {name:?}"))??,
                CodeSpec::ShiftPower { shift, j } => BlockCode::shift_power(self.shift(shift)?, *j, budget)?,
                CodeSpec::SymbolMap { shift, map } => {
                    let x = self.shift(shift)?;
                    let map = x.alphabet().parse_word(map)?;
                    BlockCode::symbol_map(x, &map)?
                }
                CodeSpec::Compose { outer, inner } => {
                    let o = self.code_inner(outer, stack)?;
                    let i = self.code_inner(inner, stack)?;
                    o.compose(&i, budget, exec)?
                }
                CodeSpec::Power { code, n } => self.code_inner(code, stack)?.power(*n, budget, exec)?,
                CodeSpec::Table { shift, radius, rows } => {
                    let x = self.shift(shift)?;
                    let rows = rows
                        .iter()
                        .map(|(w, s)| parse_row(x.alphabet(), w, s))
                        .collect::<Result<Vec<_>>>()?;
                    BlockCode::from_table(x, *radius, rows)?
                }
                CodeSpec::TableFile { shift, radius, path } => {
                    let x = self.shift(shift)?;
                    let full = self.base_dir.join(path);
                    let text = std::fs::read_to_string(&full)
                        .with_context(|| format!("reading {}", full.display()))?;
                    let mut rows = Vec::new();
                    for (line_no, line) in text.lines().enumerate() {
                        let line = line.trim();
                        if line.is_empty() || line.starts_with('#') {
                            continue;
                        }
                        let mut parts = line.split_whitespace();
                        let (Some(w), Some(s), None) = (parts.next(), parts.next(), parts.next()) else {
                            bail!("{}:{}: expected `window symbol`", full.display(), line_no + 1);
                        };
                        rows.push(
                            parse_row(x.alphabet(), w, s)
                                .with_context(|| format!("{}:{}", full.display(), line_no + 1))?,
                        );
                    }
                    BlockCode::from_table(x, *radius, rows)?
                }
            })
        })();
        stack.pop();
        result.with_context(|| format!("code {name:?}"))
    }

    pub fn group(&self, name: &str) -> Result<(GroupModel, GeneratingSet)> {
        let spec = self
            .config
            .groups
            .get(name)
            .ok_or_else(|| anyhow!("unknown group {name:?}"))?;
        let build = || -> Result<(GroupModel, GeneratingSet)> {
            let (model, gens) = match spec {
                GroupSpec::Builtin { name, generators } => (
                    grouplab::builtin_group(name).ok_or_else(|| anyhow!("no built-in group {name:?}"))?,
                    generators,
                ),
                GroupSpec::Zd { dim, generators } => (GroupModel::zd(*dim)?, generators),
                GroupSpec::Heisenberg { generators } => (GroupModel::Heisenberg, generators),
                GroupSpec::BaumslagSolitar { n, generators } => (GroupModel::bs(*n)?, generators),
            };
            let standard = model.standard_generators();
            let set = match gens {
                None => standard,
                Some(names) => {
                    let chosen = names
                        .iter()
                        .map(|n| {
                            standard
                                .generators()
                                .iter()
                                .find(|(g, _)| g == n)
                                .cloned()
                                .ok_or_else(|| anyhow!("no standard generator {n:?} in {}", model.name()))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    GeneratingSet::symmetric(&model, chosen)?
                }
            };
            Ok((model, set))
        };
        build().with_context(|| format!("group {name:?}"))
    }
}

fn parse_row(alphabet: &Alphabet, window: &str, symbol: &str) -> Result<(Vec<Symbol>, Symbol)> {
    let w = alphabet.parse_word(window)?;
    let mut chars = symbol.chars();
    let (Some(c), None) = (chars.next(), chars.next()) else {
        bail!("row {window}: output {symbol:?} must be a single symbol");
    };
    let s = alphabet
        .index_of(c)
        .ok_or_else(|| anyhow!("row {window}: unknown output symbol {c:?}"))?;
    Ok((w, s))
}
