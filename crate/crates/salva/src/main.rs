//! Command-line front end. Exit codes: 0 on success, 1 when a property fails
//! with a witness (or findings/conflicts are reported), 2 on usage, parse, or
//! IO errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use salva::builtins;
use salva::checkers::{check_ic, check_sst, IcVariant};
use salva::congruence::{normalize, sst_closure, synonym_classes, ClosureOutcome};
use salva::error::Error;
use salva::expressivity::{certify_saturation, expressivity_curve, reduce_to_generation, CertifyOutcome};
use salva::harness::{
    derive_seed, generate, run_property_suite, search_counterexample, GenKind, GenSpec, SuiteCheck,
};
use salva::io::{
    certify_json, check_json, classes_json, closure_json, curve_json, curve_to_csv, load_language,
    save_language, GeneratedJson, NormalizeJson, ReduceJson, Report,
};
use salva::Language;

#[derive(Parser)]
#[command(name = "salva", version, about = "Interpreted-language analysis toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct InputArgs {
    /// Language file (JSON)
    #[arg(long, conflicts_with = "builtin")]
    lang: Option<PathBuf>,
    /// Named builtin language (mod3, unary, t1, e1, tr1)
    #[arg(long)]
    builtin: Option<String>,
}

impl InputArgs {
    fn load(&self) -> Result<(Language, String), Error> {
        match (&self.lang, &self.builtin) {
            (Some(path), None) => {
                let lang = load_language(path)?;
                let bytes = std::fs::read(path)?;
                let digest = format!("sha256:{:x}", Sha256::digest(&bytes));
                Ok((lang, digest))
            }
            (None, Some(name)) => Ok((builtins::builtin(name)?, format!("builtin:{name}"))),
            _ => Err(Error::Parse(
                "exactly one of --lang or --builtin is required".into(),
            )),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    Sst,
    Ic,
    IcAll,
    RightExt,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FuzzMode {
    OracleEquiv,
    TheoremStress,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Explicit,
    Transform,
    ClosureSeeded,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a structural property over a horizon
    Check {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        property: PropertyArg,
        /// Checking horizon (defaults to the language horizon)
        #[arg(long)]
        horizon: Option<usize>,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expressive-power curve per generation
    Curve {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long = "max-len")]
        max_len: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the first plateau of the meaning sets, if any
    Plateau {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long = "max-len")]
        max_len: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify finite expressivity via plateau saturation
    Certify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shortest synonym of a string
    Normalize {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        string: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synonymy classes with canonical representatives
    Classes {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complete an explicit language under the substitution rule
    Close {
        #[command(flatten)]
        input: InputArgs,
        /// Where to write the completed language
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        report_out: Option<PathBuf>,
    },
    /// Shrink a string using shorter synonyms from a target generation
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        string: String,
        #[arg(long = "target-gen")]
        target_gen: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized testing: checker-vs-oracle equivalence or theorem stress
    Fuzz {
        #[arg(long, value_enum)]
        mode: FuzzMode,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random language and write it to a file
    GenLang {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2)]
        alphabet_size: usize,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 3)]
        meanings: usize,
        #[arg(long, default_value_t = 2)]
        states: usize,
        #[arg(long, default_value_t = 4)]
        seed_entries: usize,
        #[arg(long)]
        report_out: Option<PathBuf>,
    },
}

fn emit(report: &Report, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => salva::io::save_report(report, path),
        None => {
            print!("{}", report.to_json());
            Ok(())
        }
    }
}

fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::Check { input, property, horizon, out } => {
            let (lang, digest) = input.load()?;
            let h = horizon.unwrap_or_else(|| lang.horizon());
            let check = match property {
                PropertyArg::Sst => check_sst(&lang, h)?,
                PropertyArg::Ic => check_ic(&lang, h, IcVariant::Exists)?,
                PropertyArg::IcAll => check_ic(&lang, h, IcVariant::AllPositions)?,
                PropertyArg::RightExt => check_ic(&lang, h, IcVariant::RightExtension)?,
            };
            let holds = check.holds;
            let mut report = Report::new(command_echo(), digest);
            report.check = Some(check_json(&lang, &check));
            emit(&report, out.as_deref())?;
            Ok(if holds { 0 } else { 1 })
        }
        Cmd::Curve { input, max_len, format, out } => {
            let (lang, digest) = input.load()?;
            let curve = expressivity_curve(&lang, max_len)?;
            match format {
                FormatArg::Csv => {
                    let csv = curve_to_csv(&curve);
                    match out {
                        Some(path) => std::fs::write(path, csv)?,
                        None => print!("{csv}"),
                    }
                }
                FormatArg::Json => {
                    let mut report = Report::new(command_echo(), digest);
                    report.curve = Some(curve_json(&curve));
                    emit(&report, out.as_deref())?;
                }
            }
            Ok(0)
        }
        Cmd::Plateau { input, max_len, out } => {
            let (lang, digest) = input.load()?;
            let h = max_len.unwrap_or_else(|| lang.horizon());
            let curve = expressivity_curve(&lang, h)?;
            let mut report = Report::new(command_echo(), digest);
            report.curve = Some(curve_json(&curve));
            emit(&report, out.as_deref())?;
            Ok(0)
        }
        Cmd::Certify { input, horizon, out } => {
            let (lang, digest) = input.load()?;
            let h = horizon.unwrap_or_else(|| lang.horizon());
            let mut report = Report::new(command_echo(), digest);
            match certify_saturation(&lang, h) {
                Ok(outcome) => {
                    report.certificate = Some(certify_json(&lang, &outcome));
                    emit(&report, out.as_deref())?;
                    Ok(match outcome {
                        CertifyOutcome::Certified(_) | CertifyOutcome::NoPlateau { .. } => 0,
                        CertifyOutcome::Refused(_) => 1,
                    })
                }
                Err(Error::PreconditionNotMet { property, report: Some(check) }) => {
                    report.check = Some(check_json(&lang, &check));
                    report.certificate = Some(salva::io::CertifyJson {
                        status: "precondition-failed".to_string(),
                        horizon: h,
                        plateau: None,
                        inventory: None,
                        offending: None,
                        offending_meaning: None,
                        assumptions: None,
                        message: Some(format!("required property \"{property}\" does not hold")),
                    });
                    emit(&report, out.as_deref())?;
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
        Cmd::Normalize { input, string, out } => {
            let (lang, digest) = input.load()?;
            let w = lang.parse(&string)?;
            let normalized = normalize(&lang, &w)?;
            let mut report = Report::new(command_echo(), digest);
            report.normalized = Some(NormalizeJson {
                input: string,
                output: lang.render(&normalized),
            });
            emit(&report, out.as_deref())?;
            Ok(0)
        }
        Cmd::Classes { input, horizon, out } => {
            let (lang, digest) = input.load()?;
            let h = horizon.unwrap_or_else(|| lang.horizon());
            let classes = synonym_classes(&lang, h)?;
            let mut report = Report::new(command_echo(), digest);
            report.classes = Some(classes_json(&lang, &classes));
            emit(&report, out.as_deref())?;
            Ok(0)
        }
        Cmd::Close { input, out, horizon, report_out } => {
            let (lang, digest) = input.load()?;
            let h = horizon.unwrap_or_else(|| lang.horizon());
            let outcome = sst_closure(&lang, h)?;
            let mut report = Report::new(command_echo(), digest);
            report.closure = Some(closure_json(&lang, h, &outcome));
            match &outcome {
                ClosureOutcome::Completed { language, .. } => {
                    save_language(language, &out)?;
                    emit(&report, report_out.as_deref())?;
                    Ok(0)
                }
                ClosureOutcome::Conflict(_) => {
                    emit(&report, report_out.as_deref())?;
                    Ok(1)
                }
            }
        }
        Cmd::Reduce { input, string, target_gen, out } => {
            let (lang, digest) = input.load()?;
            let w = lang.parse(&string)?;
            let reduced = reduce_to_generation(&lang, &w, target_gen)?;
            let mut report = Report::new(command_echo(), digest);
            report.reduction = Some(ReduceJson {
                input: string,
                target_generation: target_gen,
                output: lang.render(&reduced),
            });
            emit(&report, out.as_deref())?;
            Ok(0)
        }
        Cmd::Fuzz { mode, samples, seed, out } => {
            let mut report = Report::new(command_echo(), format!("seed:{seed}"));
            match mode {
                FuzzMode::OracleEquiv => {
                    let family: Vec<GenSpec> = (0..samples)
                        .map(|i| GenSpec {
                            kind: GenKind::ExplicitRandom {
                                alphabet_size: 1 + i % 3,
                                horizon: 2 + i % 4,
                                density: 0.5,
                                meaning_count: 1 + i % 5,
                            },
                            rng_seed: derive_seed(seed, i as u64),
                        })
                        .collect();
                    let suite = run_property_suite(&family, &[SuiteCheck::OracleAgreement])?;
                    let failed = suite.checks_failed > 0;
                    report.suite = Some(suite);
                    emit(&report, out.as_deref())?;
                    Ok(if failed { 1 } else { 0 })
                }
                FuzzMode::TheoremStress => {
                    let template = GenSpec {
                        kind: GenKind::ClosureSeeded {
                            alphabet_size: 2,
                            horizon: 5,
                            seed_entries: 4,
                            meaning_count: 2,
                        },
                        rng_seed: seed,
                    };
                    let findings = search_counterexample(&template, samples)?;
                    let found = !findings.is_empty();
                    report.findings = Some(findings);
                    emit(&report, out.as_deref())?;
                    Ok(if found { 1 } else { 0 })
                }
            }
        }
        Cmd::GenLang {
            kind,
            seed,
            out,
            alphabet_size,
            horizon,
            density,
            meanings,
            states,
            seed_entries,
            report_out,
        } => {
            let spec = GenSpec {
                kind: match kind {
                    KindArg::Explicit => GenKind::ExplicitRandom {
                        alphabet_size,
                        horizon: horizon.unwrap_or(4),
                        density,
                        meaning_count: meanings,
                    },
                    KindArg::Transform => GenKind::TransformRandom {
                        alphabet_size,
                        state_count: states,
                        horizon: horizon.unwrap_or(6),
                    },
                    KindArg::ClosureSeeded => GenKind::ClosureSeeded {
                        alphabet_size,
                        horizon: horizon.unwrap_or(4),
                        seed_entries,
                        meaning_count: meanings,
                    },
                },
                rng_seed: seed,
            };
            let lang = generate(&spec)?;
            save_language(&lang, &out)?;
            let mut report = Report::new(command_echo(), format!("seed:{seed}"));
            report.generated = Some(GeneratedJson {
                spec,
                out: out.display().to_string(),
            });
            emit(&report, report_out.as_deref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
