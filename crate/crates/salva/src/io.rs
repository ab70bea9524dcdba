//! Serialization: language files, machine-readable reports, CSV curves.
//! Oracle backends are deliberately not serializable; the named builtins
//! cover reproducible demos.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::checkers::{CheckReport, IcWitnessKind, SstKind, Violation};
use crate::congruence::{ClosureOutcome, DerivationStep, SynonymyClasses};
use crate::error::Error;
use crate::expressivity::{Assumptions, CertifyOutcome, ExpressivityCurve};
use crate::harness::{GenSpec, StressFinding, SuiteReport};
use crate::model::{mk_explicit, mk_transform_semantics, Alphabet, Language, MeaningId, Str};

pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LangEntry {
    pub s: String,
    pub m: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformSection {
    pub states: usize,
    pub actions: BTreeMap<String, Vec<usize>>,
}

/// On-disk language presentation. `kind` is `"explicit"` or `"transform"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LanguageFile {
    pub version: String,
    pub alphabet: Vec<String>,
    pub kind: String,
    pub horizon: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strings: Option<Vec<LangEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformSection>,
}

fn parse_alphabet(symbols: &[String]) -> Result<Alphabet, Error> {
    let mut chars = Vec::with_capacity(symbols.len());
    for s in symbols {
        let mut it = s.chars();
        match (it.next(), it.next()) {
            (Some(c), None) => chars.push(c),
            _ => {
                return Err(Error::Parse(format!(
                    "alphabet symbols must be single characters, got \"{s}\""
                )))
            }
        }
    }
    Alphabet::new(chars)
}

pub fn language_from_file(file: &LanguageFile) -> Result<Language, Error> {
    if file.version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported language file version \"{}\"",
            file.version
        )));
    }
    let alphabet = parse_alphabet(&file.alphabet)?;
    match file.kind.as_str() {
        "explicit" => {
            let entries = file
                .strings
                .as_ref()
                .ok_or_else(|| Error::Parse("explicit kind requires \"strings\"".into()))?;
            let mut parsed = Vec::with_capacity(entries.len());
            for e in entries {
                parsed.push((alphabet.parse(&e.s)?, MeaningId::new(e.m.clone())));
            }
            mk_explicit(alphabet, parsed, file.horizon)
        }
        "transform" => {
            let t = file
                .transform
                .as_ref()
                .ok_or_else(|| Error::Parse("transform kind requires \"transform\"".into()))?;
            let mut actions = Vec::with_capacity(alphabet.len());
            for &c in alphabet.symbols() {
                let key = c.to_string();
                let a = t.actions.get(&key).ok_or_else(|| {
                    Error::Parse(format!("missing action for symbol \"{key}\""))
                })?;
                actions.push(a.clone());
            }
            mk_transform_semantics(alphabet, t.states, actions, file.horizon)
        }
        other => Err(Error::Parse(format!(
            "unknown language kind \"{other}\" (expected \"explicit\" or \"transform\")"
        ))),
    }
}

pub fn language_to_file(lang: &Language) -> Result<LanguageFile, Error> {
    let alphabet: Vec<String> = lang.alphabet().symbols().iter().map(|c| c.to_string()).collect();
    if let Some(table) = lang.explicit_entries() {
        return Ok(LanguageFile {
            version: FORMAT_VERSION.to_string(),
            alphabet,
            kind: "explicit".to_string(),
            horizon: lang.horizon(),
            strings: Some(
                table
                    .iter()
                    .map(|(s, m)| LangEntry {
                        s: lang.render(s),
                        m: m.to_string(),
                    })
                    .collect(),
            ),
            transform: None,
        });
    }
    if let Some((states, actions)) = lang.transform_parts() {
        let actions: BTreeMap<String, Vec<usize>> = lang
            .alphabet()
            .symbols()
            .iter()
            .enumerate()
            .map(|(i, c)| (c.to_string(), actions[i].clone()))
            .collect();
        return Ok(LanguageFile {
            version: FORMAT_VERSION.to_string(),
            alphabet,
            kind: "transform".to_string(),
            horizon: lang.horizon(),
            strings: None,
            transform: Some(TransformSection { states, actions }),
        });
    }
    Err(Error::Parse(
        "oracle-backed languages are not serializable; use a named builtin".into(),
    ))
}

pub fn load_language(path: &Path) -> Result<Language, Error> {
    let text = fs::read_to_string(path)?;
    let file: LanguageFile = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    language_from_file(&file)
}

pub fn save_language(lang: &Language, path: &Path) -> Result<(), Error> {
    let file = language_to_file(lang)?;
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// CSV rendering of a curve. Header is exactly
/// `n,distinct_meanings,new_meanings`, one row per length.
pub fn curve_to_csv(curve: &ExpressivityCurve) -> String {
    let mut out = String::from("n,distinct_meanings,new_meanings\n");
    for n in 1..=curve.horizon {
        out.push_str(&format!(
            "{},{},{}\n",
            n,
            curve.distinct_meanings[n - 1],
            curve.new_meanings[n - 1]
        ));
    }
    out
}

pub fn write_curve_csv(curve: &ExpressivityCurve, path: &Path) -> Result<(), Error> {
    fs::write(path, curve_to_csv(curve))?;
    Ok(())
}

// ---- report structures -------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct WitnessJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub context: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub context_meaning: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result_meaning: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

pub fn witness_json(lang: &Language, witness: &Violation) -> WitnessJson {
    match witness {
        Violation::Sst(v) => WitnessJson {
            kind: match v.kind {
                SstKind::IllFormed => "sst-ill-formed".to_string(),
                SstKind::MeaningChanged => "sst-meaning-changed".to_string(),
            },
            u: Some(lang.render(&v.u)),
            v: Some(lang.render(&v.v)),
            alpha: Some(lang.render(&v.alpha)),
            beta: Some(lang.render(&v.beta)),
            context: Some(lang.render(&v.context)),
            result: Some(lang.render(&v.result)),
            context_meaning: Some(v.context_meaning.to_string()),
            result_meaning: v.result_meaning.as_ref().map(|m| m.to_string()),
            w: None,
            position: None,
        },
        Violation::Ic(v) => WitnessJson {
            kind: match v.kind {
                IcWitnessKind::Exists => "ic-no-split".to_string(),
                IcWitnessKind::AtPosition(_) => "ic-split-fails-at-position".to_string(),
                IcWitnessKind::RightExtension => "ic-no-right-extension".to_string(),
            },
            u: None,
            v: None,
            alpha: None,
            beta: None,
            context: None,
            result: None,
            context_meaning: None,
            result_meaning: None,
            w: Some(lang.render(&v.w)),
            position: match v.kind {
                IcWitnessKind::AtPosition(j) => Some(j),
                _ => None,
            },
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckJson {
    pub property: String,
    pub holds: bool,
    pub horizon: usize,
    pub pairs_examined: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
}

pub fn check_json(lang: &Language, report: &CheckReport) -> CheckJson {
    CheckJson {
        property: report.property.clone(),
        holds: report.holds,
        horizon: report.horizon,
        pairs_examined: report.pairs_examined,
        witness: report.witness.as_ref().map(|w| witness_json(lang, w)),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveJson {
    pub horizon: usize,
    pub distinct_meanings: Vec<usize>,
    pub new_meanings: Vec<usize>,
    pub strictly_growing: bool,
    pub first_plateau: Option<usize>,
}

pub fn curve_json(curve: &ExpressivityCurve) -> CurveJson {
    CurveJson {
        horizon: curve.horizon,
        distinct_meanings: curve.distinct_meanings.clone(),
        new_meanings: curve.new_meanings.clone(),
        strictly_growing: curve.strictly_growing,
        first_plateau: curve.first_plateau,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifyJson {
    pub status: String,
    pub horizon: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plateau: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inventory: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending_meaning: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assumptions: Option<Assumptions>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

pub fn certify_json(lang: &Language, outcome: &CertifyOutcome) -> CertifyJson {
    match outcome {
        CertifyOutcome::Certified(c) => CertifyJson {
            status: "certified".to_string(),
            horizon: c.horizon,
            plateau: Some(c.plateau),
            inventory: Some(c.inventory.iter().map(|m| m.to_string()).collect()),
            offending: None,
            offending_meaning: None,
            assumptions: Some(c.assumptions.clone()),
            message: None,
        },
        CertifyOutcome::NoPlateau { horizon, assumptions } => CertifyJson {
            status: "no-plateau".to_string(),
            horizon: *horizon,
            plateau: None,
            inventory: None,
            offending: None,
            offending_meaning: None,
            assumptions: Some(assumptions.clone()),
            message: Some(format!(
                "no finite-expressivity certificate at horizon {horizon}"
            )),
        },
        CertifyOutcome::Refused(r) => CertifyJson {
            status: "refused".to_string(),
            horizon: r.horizon,
            plateau: Some(r.plateau),
            inventory: None,
            offending: Some(lang.render(&r.offending)),
            offending_meaning: Some(r.offending_meaning.to_string()),
            assumptions: Some(r.assumptions.clone()),
            message: Some(
                "a longer string reaches a meaning outside the plateau inventory".to_string(),
            ),
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassJson {
    pub meaning: String,
    pub representative: String,
    pub members: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassesJson {
    pub horizon: usize,
    pub classes: Vec<ClassJson>,
}

pub fn classes_json(lang: &Language, classes: &SynonymyClasses) -> ClassesJson {
    ClassesJson {
        horizon: classes.horizon,
        classes: classes
            .classes
            .iter()
            .map(|c| ClassJson {
                meaning: c.meaning.to_string(),
                representative: lang.render(&c.representative),
                members: c.members.iter().map(|w| lang.render(w)).collect(),
            })
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StepJson {
    pub source: String,
    pub alpha: String,
    pub u: String,
    pub v: String,
    pub beta: String,
    pub derived: String,
}

fn step_json(lang: &Language, step: &DerivationStep) -> StepJson {
    StepJson {
        source: lang.render(&step.source),
        alpha: lang.render(&step.alpha),
        u: lang.render(&step.u),
        v: lang.render(&step.v),
        beta: lang.render(&step.beta),
        derived: lang.render(&step.derived),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConflictJson {
    pub string: String,
    pub meanings: Vec<String>,
    pub chains: Vec<Vec<StepJson>>,
    pub all_conflicts: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureJson {
    pub status: String,
    pub horizon: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub added: Option<Vec<LangEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conflict: Option<ConflictJson>,
}

pub fn closure_json(lang: &Language, horizon: usize, outcome: &ClosureOutcome) -> ClosureJson {
    match outcome {
        ClosureOutcome::Completed { added, .. } => ClosureJson {
            status: "completed".to_string(),
            horizon,
            added: Some(
                added
                    .iter()
                    .map(|(s, m)| LangEntry {
                        s: lang.render(s),
                        m: m.to_string(),
                    })
                    .collect(),
            ),
            conflict: None,
        },
        ClosureOutcome::Conflict(c) => ClosureJson {
            status: "conflict".to_string(),
            horizon,
            added: None,
            conflict: Some(ConflictJson {
                string: lang.render(&c.string),
                meanings: vec![c.meanings.0.to_string(), c.meanings.1.to_string()],
                chains: vec![
                    c.chains.0.iter().map(|s| step_json(lang, s)).collect(),
                    c.chains.1.iter().map(|s| step_json(lang, s)).collect(),
                ],
                all_conflicts: c.all_conflicts.iter().map(|s| lang.render(s)).collect(),
            }),
        },
    }
}

/// Top-level machine-readable report emitted by every CLI command. Field
/// order is fixed by this struct; deterministic commands produce
/// byte-identical reports.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub input_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertifyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalized: Option<NormalizeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<ClassesJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure: Option<ClosureJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReduceJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<SuiteReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub findings: Option<Vec<StressFinding>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated: Option<GeneratedJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizeJson {
    pub input: String,
    pub output: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReduceJson {
    pub input: String,
    pub target_generation: usize,
    pub output: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratedJson {
    pub spec: GenSpec,
    pub out: String,
}

impl Report {
    pub fn new(command: String, input_digest: String) -> Self {
        Report {
            version: FORMAT_VERSION.to_string(),
            command,
            input_digest,
            check: None,
            curve: None,
            certificate: None,
            normalized: None,
            classes: None,
            closure: None,
            reduction: None,
            suite: None,
            findings: None,
            generated: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        text.push('\n');
        text
    }
}

pub fn save_report(report: &Report, path: &Path) -> Result<(), Error> {
    fs::write(path, report.to_json())?;
    Ok(())
}

/// Canonical string of a [`Str`] for use outside rendering contexts.
pub fn render_str(lang: &Language, w: &Str) -> String {
    lang.render(w)
}
