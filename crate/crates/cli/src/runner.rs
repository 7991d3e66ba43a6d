//! Executes configured runs and writes their artifacts.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::json;

use autlab::audit::{self, AuditReport, Verdict};
use autlab::blockcode::{self, BlockCode, CodeGroup, RangeProfile};
use autlab::grouplab::{self, CertificateSource, Group, WordExpr};
use autlab::par::Exec;
use autlab::shiftlang::ComplexityProfile;
use autlab::spacetime::{self, CellSet};

use crate::config::{
    Certificates, ComplexitySource, ExperimentConfig, HeisenbergCertificate, Operation, RangeSource,
    RunSpec, Workspace,
};

/// What one run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub name: String,
    pub operation: &'static str,
    /// File name inside the output directory, if the run wrote one.
    pub file: Option<String>,
    pub contents: String,
    /// Key scalar result for the summary.
    pub result: String,
    pub verdict: String,
    /// Counts against the exit status.
    pub failed: bool,
}

struct Produced {
    ext: &'static str,
    contents: String,
    result: String,
    verdict: Option<Verdict>,
    truncated: bool,
}

impl Produced {
    fn new(ext: &'static str, contents: String, result: impl Into<String>) -> Self {
        Produced {
            ext,
            contents,
            result: result.into(),
            verdict: None,
            truncated: false,
        }
    }

    fn json(value: &impl Serialize, result: impl Into<String>) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("results serialize");
        text.push('\n');
        Self::new("json", text, result)
    }
}

fn audit_output(report: AuditReport) -> Produced {
    let result = match &report.verdict {
        Verdict::Violation { index, .. } => format!("first violation at {index}"),
        Verdict::Consistent => format!("{} points checked", report.indices.len()),
        Verdict::NotApplicable { reason } => reason.clone(),
    };
    let mut p = Produced::json(&report, result);
    p.verdict = Some(report.verdict);
    p
}

fn range_source(ws: &Workspace, src: &RangeSource, exec: Exec) -> Result<RangeProfile> {
    match src {
        RangeSource::Code { code, max_n } => {
            let c = ws.code(code)?;
            Ok(blockcode::range_profile(&c, *max_n, ws.budgets().tables(), exec)?)
        }
        RangeSource::Synthetic { entries } => Ok(RangeProfile::from_entries(entries.clone(), None, None)),
    }
}

fn complexity_source(ws: &Workspace, src: &ComplexitySource) -> Result<ComplexityProfile> {
    match src {
        ComplexitySource::Shift { shift, max_n } => Ok(ws.shift(shift)?.entropy_profile(*max_n)),
        ComplexitySource::Synthetic { values } => {
            Ok(ComplexityProfile::from_values(values.iter().map(|&v| u128::from(v)).collect()))
        }
    }
}

fn execute(ws: &Workspace, op: &Operation) -> Result<Produced> {
    let exec = Exec::default();
    let budgets = ws.budgets();
    let tables = budgets.tables();
    let radius_cap = budgets.radius_cap;
    let states = budgets.bfs_states;
    Ok(match op {
        Operation::Complexity { shift, max_n } => {
            let profile = ws.shift(shift)?.entropy_profile(*max_n);
            let last = profile.values.last().copied().unwrap_or(1);
            Produced::new("csv", profile.to_csv(), format!("P({max_n})={last}"))
        }
        Operation::SpecialWords { shift, n, side } => {
            let x = ws.shift(shift)?;
            let words = x.special_words(*n, *side);
            let text: String = words.iter().map(|w| x.alphabet().render(w) + "\n").collect();
            Produced::new("txt", text, format!("{} special words", words.len()))
        }
        Operation::MorseHedlund { shift, max_n } => {
            let r = ws.shift(shift)?.morse_hedlund_test(*max_n);
            Produced::json(&r, format!("{r:?}"))
        }
        Operation::ApplyToWord { code, word } => {
            let c = ws.code(code)?;
            let a = c.domain().alphabet().clone();
            let image = a.render(&c.apply_to_word(&a.parse_word(word)?)?);
            Produced::new("txt", format!("{image}\n"), image)
        }
        Operation::RangeProfile { code, max_n } => {
            let c = ws.code(code)?;
            let p = blockcode::range_profile(&c, *max_n, tables, exec)?;
            let result = format!("asymptotic_upper={} trend={:?}", p.asymptotic_upper, p.fit.trend);
            let mut out = Produced::new("csv", p.to_csv(), result);
            out.truncated = p.truncated.is_some();
            out
        }
        Operation::InverseSearch { code, max_radius } => {
            let c = ws.code(code)?;
            match c.inverse_search(*max_radius, tables, exec)? {
                Some(inv) => Produced::new(
                    "txt",
                    inv.to_table_text(),
                    format!("inverse of range {}", inv.declared_range()),
                ),
                None => Produced::new(
                    "txt",
                    String::new(),
                    format!("no inverse of range <= {max_radius}"),
                ),
            }
        }
        Operation::Patches { code, n, k } => {
            let c = ws.code(code)?;
            let p = spacetime::build_patches(&c, *n, *k, tables, exec)?;
            Produced::new("txt", p.to_grid_text(c.domain().alphabet()), format!("{} patches", p.len()))
        }
        Operation::ComplexitySurface { code, max_n, max_k } => {
            let c = ws.code(code)?;
            let s = spacetime::complexity_surface(&c, *max_n, *max_k, tables, exec)?;
            let truncated = s.iter().any(|e| e.count.is_none());
            let last = s.last().and_then(|e| e.count);
            let result = match last {
                Some(v) => format!("P({max_n},{max_k})={v}"),
                None => format!("P({max_n},{max_k}) truncated"),
            };
            let mut out = Produced::new("csv", spacetime::surface_csv(&s), result);
            out.truncated = truncated;
            out
        }
        Operation::CodingCheck { code, n, k, a, b } => {
            let c = ws.code(code)?;
            let p = spacetime::build_patches(&c, *n, *k, tables, exec)?;
            let (a, b) = (CellSet::new(a.iter().copied()), CellSet::new(b.iter().copied()));
            let codes = spacetime::coding_check(&p, &a, &b)?;
            Produced::json(
                &json!({ "patches": p.len(), "a": a, "b": b, "codes": codes }),
                codes.to_string(),
            )
        }
        Operation::CyrKra { code, n, k } => {
            let c = ws.code(code)?;
            let p = spacetime::build_patches(&c, *n, *k, tables, exec)?;
            let r = spacetime::cyr_kra_audit(&p);
            Produced::json(&json!({ "patches": p.len(), "n": n, "k": k, "result": r }), format!("{r:?}"))
        }
        Operation::VerticalPeriod { code, n, k } => {
            let c = ws.code(code)?;
            let p = spacetime::build_patches(&c, *n, *k, tables, exec)?;
            let r = spacetime::uniform_vertical_period(&p);
            Produced::json(&r, format!("{r:?}"))
        }
        Operation::WordLength { group, word } => {
            let (model, gens) = ws.group(group)?;
            let w: WordExpr = word.parse()?;
            let target = grouplab::evaluate(&w, &model, &gens.binding())?;
            let steps = gens.steps(&model);
            let len = grouplab::bfs_word_length(&model, &steps, &target, radius_cap, states, exec)?;
            Produced::json(
                &json!({ "word": w.to_string(), "element": target.to_string(), "length": len }),
                format!("{len:?}"),
            )
        }
        Operation::DistortionProfile {
            group,
            element,
            max_n,
            certificates,
        } => {
            let (model, gens) = ws.group(group)?;
            let w: WordExpr = element.parse()?;
            let g = grouplab::evaluate(&w, &model, &gens.binding())?;
            let certs = match certificates {
                Certificates::None => vec![],
                Certificates::Horner => vec![CertificateSource::Horner {
                    a: "a".into(),
                    b: "b".into(),
                }],
                Certificates::HeisenbergCenter => vec![CertificateSource::HeisenbergCenter {
                    u: "u".into(),
                    t: "t".into(),
                }],
            };
            let p = grouplab::distortion_profile(&model, &gens, &g, *max_n, radius_cap, states, &certs, exec)?;
            let mut out = Produced::new("csv", p.to_csv(), format!("trend={:?}", p.fit.trend));
            out.truncated = p.budget_hit;
            out
        }
        Operation::BallGrowth { group, radius } => {
            let (model, gens) = ws.group(group)?;
            let g = grouplab::ball_growth(&model, &gens, *radius, states, exec)?;
            let mut out = Produced::json(
                &g,
                format!("degree={:.4} superpolynomial={}", g.degree, g.superpolynomial),
            );
            out.truncated = g.budget_hit;
            out
        }
        Operation::HornerCertificate { m, n } => {
            let model = grouplab::GroupModel::bs(*n)?;
            let w = grouplab::bs_horner_certificate(*m, *n)?;
            let value = grouplab::evaluate(&w, &model, &model.standard_generators().binding())?;
            let a = model.standard_generators().binding()["a"].clone();
            let expected = model.power(&a, *m as i64);
            Produced::json(
                &json!({
                    "word": w.to_string(),
                    "length": w.len(),
                    "value": value.to_string(),
                    "equals_a_pow_m": value == expected,
                }),
                format!("length {}", w.len()),
            )
        }
        Operation::HeisenbergCertificate { n, form } => {
            let model = grouplab::GroupModel::Heisenberg;
            let w = match form {
                HeisenbergCertificate::Square => grouplab::heisenberg_square_certificate(*n),
                HeisenbergCertificate::BaseQ => grouplab::base_q_certificate(*n),
            };
            let value = grouplab::evaluate(&w, &model, &model.standard_generators().binding())?;
            Produced::json(
                &json!({ "word": w.to_string(), "length": w.len(), "value": value.to_string() }),
                format!("length {}", w.len()),
            )
        }
        Operation::BassGuivarchDegree { ranks } => {
            let d = grouplab::bass_guivarch_degree(ranks);
            Produced::json(&json!({ "ranks": ranks, "degree": d }), d.to_string())
        }
        Operation::MinGrowthDegree { d } => {
            let v = grouplab::min_growth_degree(*d)?;
            Produced::json(&json!({ "d": d, "min_growth_degree": v }), v.to_string())
        }
        Operation::EmbeddingStepBound { c } => {
            let v = grouplab::embedding_step_bound(*c)?;
            Produced::json(&json!({ "c": c, "step_bound": v }), v.to_string())
        }
        Operation::RangeVsWordlengthAudit {
            generators,
            element,
            max_m,
        } => {
            let gens = generators
                .iter()
                .map(|g| ws.code(g))
                .collect::<Result<Vec<BlockCode>>>()?;
            let target = ws.code(element)?;
            let domain = Arc::clone(target.domain());
            let ranges: Vec<(String, usize)> = generators
                .iter()
                .zip(&gens)
                .map(|(n, c)| (n.clone(), c.minimal_range()))
                .collect();
            let max_r = ranges.iter().map(|r| r.1).max().unwrap_or(0);
            let (group, steps) = CodeGroup::new(Arc::clone(&domain), &gens, 2 * max_r + 1, tables)?;
            // Products at ball radius r have radius up to r·s; keep their
            // tables inside the budget.
            let s = steps.iter().map(|k| k.radius).max().unwrap_or(0);
            let mut radius = radius_cap.min(*max_m);
            while radius > 0 && domain.complexity(2 * radius * s + 1) > tables.max_rows as u128 {
                radius -= 1;
            }
            let word = grouplab::power_length_profile(
                &group,
                &steps,
                &target.key(),
                *max_m as u64,
                radius,
                states,
                exec,
            );
            let range = blockcode::range_profile(&target, *max_m, tables, exec)?;
            audit_output(audit::range_vs_wordlength_audit(&ranges, &range, &word)?)
        }
        Operation::EntropyBoundAudit { range, complexity } => {
            let r = range_source(ws, range, exec)?;
            let c = complexity_source(ws, complexity)?;
            audit_output(audit::entropy_bound_audit(&r, &c))
        }
        Operation::PolynomialBoundAudit {
            range,
            complexity,
            d,
            epsilon,
        } => {
            let r = range_source(ws, range, exec)?;
            let c = complexity_source(ws, complexity)?;
            audit_output(audit::polynomial_bound_audit(&r, &c, *d, *epsilon))
        }
        Operation::SigmaPowerRangeAudit { shift, j, max_m } => {
            let x = ws.shift(shift)?;
            audit_output(audit::sigma_power_range_audit(*j, x, *max_m, tables, exec)?)
        }
    })
}

/// Runs one configured operation; errors become a failed summary row.
pub fn run_one(ws: &Workspace, run: &RunSpec) -> RunOutput {
    log::info!("run {} ({})", run.name, run.op.name());
    let operation = run.op.name();
    match execute(ws, &run.op) {
        Ok(p) => {
            let (verdict, failed) = match &p.verdict {
                Some(v) => {
                    let label = v.label().to_string();
                    if run.fabricated {
                        (format!("{label} (fabricated)"), false)
                    } else {
                        (label, v.is_violation())
                    }
                }
                None if p.truncated => ("truncated".to_string(), false),
                None => ("ok".to_string(), false),
            };
            RunOutput {
                name: run.name.clone(),
                operation,
                file: Some(format!("{}.{}", run.name, p.ext)),
                contents: p.contents,
                result: p.result,
                verdict,
                failed,
            }
        }
        Err(e) => {
            let msg = format!("{e:#}");
            log::error!("run {}: {msg}", run.name);
            RunOutput {
                name: run.name.clone(),
                operation,
                file: None,
                contents: String::new(),
                result: msg,
                verdict: "error".into(),
                failed: true,
            }
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn summary_csv(outputs: &[RunOutput]) -> String {
    let mut out = String::from("name,operation,result,verdict\n");
    for o in outputs {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            csv_field(&o.name),
            o.operation,
            csv_field(&o.result),
            csv_field(&o.verdict)
        );
    }
    out
}

/// Executes every run, in order or in parallel; the outputs are the same.
pub fn run_all(config: &ExperimentConfig, base_dir: &Path, parallel: bool) -> Vec<RunOutput> {
    let ws = Workspace::new(config, base_dir);
    let exec = if parallel { Exec::Parallel } else { Exec::Sequential };
    exec.map(&config.runs, |r| run_one(&ws, r))
}

/// Writes run artifacts and `summary.csv` into `out_dir`.
pub fn write_outputs(out_dir: &Path, outputs: &[RunOutput]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let mut written = Vec::new();
    for o in outputs {
        if let Some(file) = &o.file {
            let path = out_dir.join(file);
            std::fs::write(&path, &o.contents).with_context(|| format!("writing {}", path.display()))?;
            written.push(path);
        }
    }
    let path = out_dir.join("summary.csv");
    std::fs::write(&path, summary_csv(outputs)).with_context(|| format!("writing {}", path.display()))?;
    written.push(path);
    Ok(written)
}
