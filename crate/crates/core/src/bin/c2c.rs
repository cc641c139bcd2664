//! Command-line driver for the translation harness.

use anyhow::{Context, Result, bail};
use c2c::ablate::{PerturbContext, PerturbationKind, perturb_explanation};
use c2c::corpus::{build_pairs, load_corpus};
use c2c::experiment::{ExperimentConfig, load_trial, report_csv, report_text, run_experiment, route_trials};
use c2c::lang::Language;
use c2c::metrics::ProblemTally;
use c2c::postproc::ProfileTable;
use c2c::retrieve::Bm25Index;
use c2c::runner::{RunnerTable, StatusKind, execute_program};
use c2c::select::{SelectionCandidate, SelectionPolicy, estimate_policy};
use c2c::store::{GenerationStore, Stage};
use clap::{Parser, Subcommand};
use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "c2c", about = "Explain-then-translate code translation harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate a problem corpus, printing per-language counts.
    Ingest {
        /// Corpus file or directory of JSONL problem records.
        corpus: PathBuf,
        /// Languages to load (default: all).
        #[arg(long, value_delimiter = ',')]
        languages: Vec<String>,
    },
    /// Verify that every canonical solution in the corpus executes to Pass.
    Selfcheck {
        corpus: PathBuf,
        #[arg(long, value_delimiter = ',')]
        languages: Vec<String>,
    },
    /// Generate explanations only (stage one) for a direction.
    Explain {
        /// Experiment config (TOML).
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the full translation pipeline from a config file.
    Translate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Re-execute stored translations for a direction and print tallies.
    Execute {
        #[arg(long)]
        config: PathBuf,
    },
    /// Estimate selection-policy pass rates over a candidate file.
    Select {
        /// JSON file: map of problem id to candidate list.
        candidates: PathBuf,
        /// Policy: random:<seed>, len, line-e, line, frag, logprob:<alpha>, oracle.
        #[arg(long, default_value = "oracle")]
        policy: String,
    },
    /// Apply a perturbation to stored explanations, writing a new variant.
    Ablate {
        #[arg(long)]
        config: PathBuf,
        /// Kind: swap-s, no-exp, rand-exp, ret-exp, del-w:<p>, del-s:<p>.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Render pass@k tables from result files.
    Report {
        /// One or more *.result.json files.
        results: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        k: Vec<usize>,
        #[arg(long)]
        csv: bool,
        /// With two inputs (direct + explanation trial), also print the
        /// selectively routed trial at this threshold.
        #[arg(long)]
        route_threshold: Option<f64>,
    },
}

fn parse_languages(names: &[String]) -> Result<BTreeSet<Language>> {
    if names.is_empty() {
        return Ok(Language::ALL.iter().copied().collect());
    }
    names
        .iter()
        .map(|n| n.parse::<Language>().map_err(|e| anyhow::anyhow!(e)))
        .collect()
}

fn parse_policy(s: &str) -> Result<SelectionPolicy> {
    Ok(match s {
        "len" => SelectionPolicy::Len,
        "line-e" => SelectionPolicy::LineE,
        "line" => SelectionPolicy::Line,
        "frag" => SelectionPolicy::Frag,
        "oracle" => SelectionPolicy::Oracle,
        other => {
            if let Some(seed) = other.strip_prefix("random:") {
                SelectionPolicy::Random { seed: seed.parse()? }
            } else if let Some(alpha) = other.strip_prefix("logprob:") {
                SelectionPolicy::LogProb { alpha: alpha.parse()? }
            } else {
                bail!("unknown policy {other:?}");
            }
        }
    })
}

fn parse_perturbation(s: &str) -> Result<PerturbationKind> {
    Ok(match s {
        "swap-s" => PerturbationKind::SwapS,
        "obf-exp" => PerturbationKind::ObfExp,
        "rand-exp" => PerturbationKind::RandExp,
        "ret-exp" => PerturbationKind::RetExp,
        "no-exp" => PerturbationKind::NoExp,
        other => {
            if let Some(p) = other.strip_prefix("del-w:") {
                PerturbationKind::DelW { p: p.parse()? }
            } else if let Some(p) = other.strip_prefix("del-s:") {
                PerturbationKind::DelS { p: p.parse()? }
            } else {
                bail!("unknown perturbation {other:?}");
            }
        }
    })
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Ingest { corpus, languages } => {
            let langs = parse_languages(&languages)?;
            let problems = load_corpus(&corpus, &langs)?;
            let mut counts: BTreeMap<Language, usize> = BTreeMap::new();
            for p in &problems {
                *counts.entry(p.language).or_insert(0) += 1;
            }
            println!("loaded {} problems", problems.len());
            for (lang, count) in counts {
                println!("  {:<4} {count}", lang.id());
            }
        }
        Command::Selfcheck { corpus, languages } => {
            let langs = parse_languages(&languages)?;
            let problems = load_corpus(&corpus, &langs)?;
            let runners = RunnerTable::builtin()?;
            let mut checked = 0usize;
            let mut failures = Vec::new();
            let mut skipped: BTreeMap<Language, usize> = BTreeMap::new();
            for problem in &problems {
                let Some(program) = problem.full_program() else { continue };
                let program = format!("{program}\n{}", problem.tests);
                let Ok(spec) = runners.get(problem.language) else {
                    *skipped.entry(problem.language).or_insert(0) += 1;
                    continue;
                };
                if !spec.toolchain_available() {
                    *skipped.entry(problem.language).or_insert(0) += 1;
                    continue;
                }
                let outcome = execute_program(&program, spec)?;
                checked += 1;
                if outcome.status != StatusKind::Pass {
                    failures.push(format!(
                        "{} [{}]: {:?}\n{}",
                        problem.id,
                        problem.language.id(),
                        outcome.status,
                        outcome.stderr
                    ));
                }
            }
            for (lang, n) in &skipped {
                println!("skipped {n} problems for {}: toolchain unavailable", lang.id());
            }
            println!("selfcheck: {checked} canonical solutions executed");
            if !failures.is_empty() {
                bail!("{} failures:\n{}", failures.len(), failures.join("\n"));
            }
            println!("all passed");
        }
        Command::Translate { config } | Command::Explain { config } | Command::Execute { config } => {
            // All three run the resumable pipeline; explain-only configs use
            // n=... with a direct-free variant, and execute re-verifies from
            // the persisted store (replay) without new sampling.
            let cfg = ExperimentConfig::from_toml_file(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let written = run_experiment(&cfg)?;
            for path in written {
                println!("wrote {}", path.display());
            }
        }
        Command::Select { candidates, policy } => {
            let text = std::fs::read_to_string(&candidates)?;
            let train: BTreeMap<String, Vec<SelectionCandidate>> = serde_json::from_str(&text)?;
            let policy = parse_policy(&policy)?;
            let est = estimate_policy(&train, policy)?;
            println!("policy {policy:?}: mean {:.4} variance {:.6}", est.mean, est.variance);
        }
        Command::Ablate { config, kind, seed } => {
            let cfg = ExperimentConfig::from_toml_file(&config)?;
            let kind = parse_perturbation(&kind)?;
            let variant = cfg.parsed_variant()?;
            if !variant.has_explanation() {
                bail!("ablation requires an explanation variant, got {}", variant.id());
            }
            let directions = cfg.parsed_directions()?;
            let langs: BTreeSet<Language> =
                directions.iter().flat_map(|(s, t)| [*s, *t]).collect();
            let corpus = load_corpus(&cfg.corpus, &langs)?;
            let store = GenerationStore::open(&cfg.store)?;
            let _profiles = ProfileTable::builtin()?;
            for (src, tgt) in directions {
                let direction = format!("{}-{}", src.id(), tgt.id());
                let (pairs, _) = build_pairs(&corpus, src, tgt)?;
                // collect stored explanations per problem
                let mut explanations: BTreeMap<String, String> = BTreeMap::new();
                for pair in &pairs {
                    if let Some(rec) = store
                        .find(&pair.id, &direction, variant.id(), Stage::Explain)
                        .into_iter()
                        .next()
                    {
                        explanations.insert(pair.id.clone(), rec.text);
                    }
                }
                let docs: Vec<(String, String)> = pairs
                    .iter()
                    .map(|p| (p.id.clone(), p.source_program.clone()))
                    .collect();
                let index = Bm25Index::build(&docs)?;
                let mut written = 0usize;
                for pair in &pairs {
                    let Some(orig) = explanations.get(&pair.id) else { continue };
                    let ctx = PerturbContext {
                        variant,
                        problem_id: &pair.id,
                        corpus_explanations: &explanations,
                        retrieval_index: Some(&index),
                        source_program: &pair.source_program,
                        obfuscated_explanation: None,
                    };
                    let perturbed = perturb_explanation(orig, kind, seed, &ctx)?;
                    let label = format!("{}+{}", variant.id(), kind.label());
                    let mut record = store
                        .find(&pair.id, &direction, variant.id(), Stage::Explain)
                        .into_iter()
                        .next()
                        .expect("explanation existed above");
                    record.key.variant = label;
                    record.text = perturbed;
                    store.append(record)?;
                    written += 1;
                }
                println!(
                    "{direction}: stored {written} perturbed explanations as variant {}+{}",
                    variant.id(),
                    kind.label()
                );
            }
        }
        Command::Report { results, k, csv, route_threshold } => {
            if results.is_empty() {
                bail!("no result files given");
            }
            let mut trials = Vec::new();
            for path in &results {
                trials.push(load_trial(path).with_context(|| format!("reading {}", path.display()))?);
            }
            if let Some(threshold) = route_threshold {
                let direct = trials
                    .iter()
                    .find(|t| t.variant == "direct")
                    .context("routing needs a direct trial")?;
                let explained = trials
                    .iter()
                    .find(|t| t.variant != "direct")
                    .context("routing needs an explanation trial")?;
                let routed = route_trials(direct, explained, threshold)?;
                trials.push(routed);
            }
            let output = if csv {
                report_csv(&trials, &k)?
            } else {
                report_text(&trials, &k)?
            };
            print!("{output}");

            // quick per-trial sanity line: majority-status histogram
            for trial in &trials {
                let tallies: Vec<ProblemTally> = trial.tallies();
                let passes = tallies.iter().filter(|t| t.c() > 0).count();
                println!(
                    "# {} {}: {}/{} problems with at least one passing sample",
                    trial.direction,
                    trial.variant,
                    passes,
                    tallies.len()
                );
            }
        }
    }
    Ok(())
}
