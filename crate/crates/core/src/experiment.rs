//! Experiment orchestration: TOML configuration, a resumable run manifest
//! keyed by config hash, the explain → sanitize → translate → truncate →
//! execute pipeline, and report emitters.

use crate::corpus::{TranslationPair, build_pairs, load_corpus};
use crate::error::{Error, Result};
use crate::gateway::{EndpointConfig, Gateway, SamplingConfig};
use crate::lang::Language;
use crate::metrics::{ProblemTally, aggregate};
use crate::postproc::{ProfileTable, truncate_completion};
use crate::prompt::{
    PromptVariant, ShotExample, render_explanation_prompt, render_translation_prompt,
    sanitize_explanation,
};
use crate::runner::{RunnerTable, StatusKind, execute_candidate};
use crate::select::{Route, selective_route};
use crate::store::{GenKey, GenerationStore, Stage, prompt_hash};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Corpus file or directory of problem record files.
    pub corpus: PathBuf,
    /// Directions as "src-tgt" language pairs, e.g. ["py-js", "py-pl"].
    pub directions: Vec<String>,
    pub variant: String,
    /// Paths to shot fixture files (may be empty for zero-shot).
    #[serde(default)]
    pub shots: Vec<PathBuf>,
    #[serde(default)]
    pub sampling: SamplingConfig,
    pub endpoint: EndpointConfig,
    /// Generation store path (append-only JSONL).
    pub store: PathBuf,
    /// Run artifacts directory; results land in a config-hash subdirectory.
    pub run_root: PathBuf,
    /// Route problems between direct and explanation variants using cached
    /// direct pass@1 (strictly-below-threshold problems get explanations).
    #[serde(default)]
    pub selective_threshold: Option<f64>,
    /// Master seed recorded in the manifest.
    #[serde(default)]
    pub seed: u64,
    /// Process at most this many pending problems, then stop (testing aid
    /// for resumability; None means run to completion).
    #[serde(default)]
    pub max_problems: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_toml_file(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
        let text = fs::read_to_string(path.as_ref())?;
        toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn parsed_directions(&self) -> Result<Vec<(Language, Language)>> {
        self.directions
            .iter()
            .map(|d| {
                let (src, tgt) = d
                    .split_once('-')
                    .ok_or_else(|| Error::Config(format!("bad direction {d:?}")))?;
                Ok((
                    src.parse().map_err(Error::Config)?,
                    tgt.parse().map_err(Error::Config)?,
                ))
            })
            .collect()
    }

    pub fn parsed_variant(&self) -> Result<PromptVariant> {
        self.variant.parse()
    }

    /// Hash over the semantically relevant configuration (resume-safety knobs
    /// like max_problems excluded).
    pub fn config_hash(&self) -> String {
        let mut hashed = self.clone();
        hashed.max_problems = None;
        let canonical = serde_json::to_string(&hashed).expect("config serializes");
        prompt_hash(&canonical)[..16].to_string()
    }

    pub fn run_dir(&self) -> PathBuf {
        self.run_root.join(self.config_hash())
    }

    pub fn load_shots(&self, variant: PromptVariant) -> Result<Vec<ShotExample>> {
        let mut shots = Vec::new();
        for path in &self.shots {
            let text = fs::read_to_string(path)?;
            let mut shot: ShotExample =
                serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
            if !variant.has_explanation() {
                shot.explanation = None;
            }
            shots.push(shot);
        }
        Ok(shots)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProgressState {
    Pending,
    Explained,
    Translated,
    Executed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub seed: u64,
    pub states: BTreeMap<String, ProgressState>,
}

impl RunManifest {
    fn path(run_dir: &Path) -> PathBuf {
        run_dir.join("manifest.json")
    }

    pub fn load_or_create(run_dir: &Path, config_hash: &str, seed: u64) -> Result<RunManifest> {
        let path = Self::path(run_dir);
        if path.exists() {
            let manifest: RunManifest = serde_json::from_str(&fs::read_to_string(&path)?)?;
            if manifest.config_hash != config_hash {
                return Err(Error::ManifestMismatch {
                    manifest: manifest.config_hash,
                    config: config_hash.to_string(),
                });
            }
            Ok(manifest)
        } else {
            Ok(RunManifest {
                config_hash: config_hash.to_string(),
                seed,
                states: BTreeMap::new(),
            })
        }
    }

    pub fn save(&self, run_dir: &Path) -> Result<()> {
        let tmp = run_dir.join("manifest.json.tmp");
        fs::write(&tmp, serde_json::to_string_pretty(self)?)?;
        fs::rename(&tmp, Self::path(run_dir))?;
        Ok(())
    }

    fn advance(&mut self, key: &str, state: ProgressState) {
        let entry = self.states.entry(key.to_string()).or_insert(ProgressState::Pending);
        // states only move forward
        let rank = |s: ProgressState| match s {
            ProgressState::Pending => 0,
            ProgressState::Explained => 1,
            ProgressState::Translated => 2,
            ProgressState::Executed => 3,
        };
        if rank(state) > rank(*entry) {
            *entry = state;
        }
    }
}

/// Per-problem execution record persisted as the run progresses.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemResult {
    pub id: String,
    pub direction: String,
    pub variant: String,
    pub statuses: Vec<StatusKind>,
}

/// Final result file for a (direction, variant) trial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialResult {
    pub direction: String,
    pub variant: String,
    pub n: usize,
    pub problems: Vec<ProblemResult>,
    pub pass_at_1: f64,
}

impl TrialResult {
    pub fn tallies(&self) -> Vec<ProblemTally> {
        self.problems
            .iter()
            .map(|p| ProblemTally::new(p.id.clone(), p.statuses.clone()))
            .collect()
    }

    pub fn tally_map(&self) -> BTreeMap<String, ProblemTally> {
        self.problems
            .iter()
            .map(|p| (p.id.clone(), ProblemTally::new(p.id.clone(), p.statuses.clone())))
            .collect()
    }
}

fn progress_path(run_dir: &Path, direction: &str, variant: &str) -> PathBuf {
    run_dir.join(format!("{direction}_{variant}.progress.jsonl"))
}

fn result_path(run_dir: &Path, direction: &str, variant: &str) -> PathBuf {
    run_dir.join(format!("{direction}_{variant}.result.json"))
}

fn load_progress(path: &Path) -> Result<BTreeMap<String, ProblemResult>> {
    let mut out = BTreeMap::new();
    if path.exists() {
        for (lineno, line) in fs::read_to_string(path)?.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let record: ProblemResult = serde_json::from_str(line).map_err(|e| Error::Parse {
                file: path.display().to_string(),
                line: lineno + 1,
                message: e.to_string(),
            })?;
            out.insert(record.id.clone(), record);
        }
    }
    Ok(out)
}

fn append_progress(path: &Path, record: &ProblemResult) -> Result<()> {
    let mut file = fs::OpenOptions::new().create(true).append(true).open(path)?;
    writeln!(file, "{}", serde_json::to_string(record)?)?;
    Ok(())
}

pub struct Pipeline<'a> {
    pub gateway: &'a Gateway,
    pub store: &'a GenerationStore,
    pub profiles: &'a ProfileTable,
    pub runners: &'a RunnerTable,
}

impl Pipeline<'_> {
    /// Runs the full staged pipeline for one problem and returns its sampled
    /// statuses. All generations and verdicts are persisted in the store.
    pub fn run_problem(
        &self,
        pair: &TranslationPair,
        variant: PromptVariant,
        shots: &[ShotExample],
        sampling: &SamplingConfig,
    ) -> Result<Vec<StatusKind>> {
        let direction = format!(
            "{}-{}",
            pair.source_language.id(),
            pair.target_language.id()
        );
        let explanation = if variant.has_explanation() {
            let prompt = render_explanation_prompt(pair, variant, shots)?;
            let explain_cfg = SamplingConfig {
                n: 1,
                stop: prompt.stop_sequences.clone(),
                ..sampling.clone()
            };
            let results = self.gateway.complete(
                &prompt,
                &explain_cfg,
                self.store,
                &pair.id,
                &direction,
                variant.id(),
            )?;
            Some(sanitize_explanation(&results[0].text, pair.target_language))
        } else {
            None
        };

        let prompt = render_translation_prompt(
            pair,
            variant,
            shots,
            explanation.as_deref(),
            self.profiles,
        )?;
        let translate_cfg = SamplingConfig {
            stop: prompt.stop_sequences.clone(),
            ..sampling.clone()
        };
        let completions = self.gateway.complete(
            &prompt,
            &translate_cfg,
            self.store,
            &pair.id,
            &direction,
            variant.id(),
        )?;

        let profile = self.profiles.get(pair.target_language)?;
        let spec = self.runners.get(pair.target_language)?;
        let mut statuses = Vec::with_capacity(completions.len());
        for (sample_index, completion) in completions.iter().enumerate() {
            let body = truncate_completion(&completion.text, profile, &pair.target_scaffold);
            let outcome = execute_candidate(pair, &body, spec, Some(profile))?;
            let key = GenKey {
                id: pair.id.clone(),
                direction: direction.clone(),
                variant: variant.id().to_string(),
                stage: Stage::Translate,
                sample_index,
            };
            self.store
                .set_pass_status(&key, outcome.status == StatusKind::Pass)?;
            statuses.push(outcome.status);
        }
        Ok(statuses)
    }
}

/// Runs every (direction × problem) in the config, resuming from persisted
/// progress, and returns the paths of the result files written.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let variant = cfg.parsed_variant()?;
    let directions = cfg.parsed_directions()?;
    let run_dir = cfg.run_dir();
    fs::create_dir_all(&run_dir)?;
    let mut manifest = RunManifest::load_or_create(&run_dir, &cfg.config_hash(), cfg.seed)?;

    let languages: BTreeSet<Language> = directions
        .iter()
        .flat_map(|(s, t)| [*s, *t])
        .collect();
    let corpus = load_corpus(&cfg.corpus, &languages)?;
    let store = GenerationStore::open(&cfg.store)?;
    let gateway = Gateway::new(cfg.endpoint.clone())?;
    let profiles = ProfileTable::builtin()?;
    let runners = RunnerTable::builtin()?;
    let shots = cfg.load_shots(variant)?;
    let pipeline = Pipeline {
        gateway: &gateway,
        store: &store,
        profiles: &profiles,
        runners: &runners,
    };

    let mut written = Vec::new();
    let mut budget = cfg.max_problems;
    for (src, tgt) in &directions {
        let direction = format!("{}-{}", src.id(), tgt.id());
        let (pairs, _skips) = build_pairs(&corpus, *src, *tgt)?;
        let progress_file = progress_path(&run_dir, &direction, variant.id());
        let mut done = load_progress(&progress_file)?;

        for pair in &pairs {
            let key = format!("{direction}/{}", pair.id);
            if done.contains_key(&pair.id) {
                manifest.advance(&key, ProgressState::Executed);
                continue;
            }
            if let Some(b) = budget {
                if b == 0 {
                    break;
                }
            }
            let statuses = pipeline.run_problem(pair, variant, &shots, &cfg.sampling)?;
            let record = ProblemResult {
                id: pair.id.clone(),
                direction: direction.clone(),
                variant: variant.id().to_string(),
                statuses,
            };
            append_progress(&progress_file, &record)?;
            done.insert(pair.id.clone(), record);
            manifest.advance(&key, ProgressState::Executed);
            manifest.save(&run_dir)?;
            if let Some(b) = budget.as_mut() {
                *b -= 1;
            }
        }

        if done.len() == pairs.len() {
            let tallies: Vec<ProblemTally> = done
                .values()
                .map(|p| ProblemTally::new(p.id.clone(), p.statuses.clone()))
                .collect();
            let trial = TrialResult {
                direction: direction.clone(),
                variant: variant.id().to_string(),
                n: cfg.sampling.n,
                problems: done.values().cloned().collect(),
                pass_at_1: aggregate(&tallies, 1)?,
            };
            let path = result_path(&run_dir, &direction, variant.id());
            fs::write(&path, serde_json::to_string_pretty(&trial)?)?;
            written.push(path);
        }
    }
    manifest.save(&run_dir)?;
    Ok(written)
}

/// Per-problem routed tally: explanation-variant statuses where direct pass@1
/// falls strictly below the threshold, direct statuses otherwise.
pub fn route_trials(
    direct: &TrialResult,
    explained: &TrialResult,
    threshold: f64,
) -> Result<TrialResult> {
    if direct.direction != explained.direction {
        return Err(Error::Contract("routing requires matching directions".into()));
    }
    let exp_map = explained.tally_map();
    let mut problems = Vec::new();
    for p in &direct.problems {
        let tally = ProblemTally::new(p.id.clone(), p.statuses.clone());
        let direct_pass1 = tally.c() as f64 / tally.n().max(1) as f64;
        let routed = match selective_route(direct_pass1, threshold)? {
            Route::UseDirect => p.clone(),
            Route::UseExplanation => {
                let exp_tally = exp_map.get(&p.id).ok_or_else(|| {
                    Error::Contract(format!("no explanation trial for problem {}", p.id))
                })?;
                ProblemResult {
                    id: p.id.clone(),
                    direction: direct.direction.clone(),
                    variant: format!("routed({})", explained.variant),
                    statuses: exp_tally.statuses.clone(),
                }
            }
        };
        problems.push(routed);
    }
    let tallies: Vec<ProblemTally> = problems
        .iter()
        .map(|p| ProblemTally::new(p.id.clone(), p.statuses.clone()))
        .collect();
    Ok(TrialResult {
        direction: direct.direction.clone(),
        variant: format!("routed({})", explained.variant),
        n: direct.n,
        pass_at_1: aggregate(&tallies, 1)?,
        problems,
    })
}

pub fn load_trial(path: impl AsRef<Path>) -> Result<TrialResult> {
    let text = fs::read_to_string(path.as_ref())?;
    Ok(serde_json::from_str(&text)?)
}

/// Aligned-text table: one row per trial, one pass@k column per requested k.
pub fn report_text(trials: &[TrialResult], ks: &[usize]) -> Result<String> {
    if trials.is_empty() {
        return Err(Error::Contract("report over empty trial list".into()));
    }
    let mut out = String::new();
    out.push_str(&format!("{:<10} {:<18}", "direction", "variant"));
    for k in ks {
        out.push_str(&format!(" {:>9}", format!("pass@{k}")));
    }
    out.push('\n');
    for trial in trials {
        let tallies = trial.tallies();
        out.push_str(&format!("{:<10} {:<18}", trial.direction, trial.variant));
        for k in ks {
            let value = aggregate(&tallies, *k)?;
            out.push_str(&format!(" {:>9.3}", value));
        }
        out.push('\n');
    }
    Ok(out)
}

/// CSV with the same content as [`report_text`].
pub fn report_csv(trials: &[TrialResult], ks: &[usize]) -> Result<String> {
    if trials.is_empty() {
        return Err(Error::Contract("report over empty trial list".into()));
    }
    let mut out = String::from("direction,variant");
    for k in ks {
        out.push_str(&format!(",pass@{k}"));
    }
    out.push('\n');
    for trial in trials {
        let tallies = trial.tallies();
        out.push_str(&format!("{},{}", trial.direction, trial.variant));
        for k in ks {
            out.push_str(&format!(",{:.6}", aggregate(&tallies, *k)?));
        }
        out.push('\n');
    }
    Ok(out)
}
