//! Explanation re-ranking heuristics, coder-reviewer logprob scoring, and the
//! difficulty-based routing rule that decides when the explanation stage is
//! worth its cost.

use crate::error::{Error, Result};
use crate::metrics::{mean_std, strip_code};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::collections::BTreeSet;

/// Surface features of one explanation, used by the cheap heuristics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Features {
    /// Characters after stripping fenced blocks and inline code spans.
    pub len_chars_excl_code: usize,
    /// Distinct nonempty source lines quoted verbatim in the explanation.
    pub lines_explained: usize,
    /// Nonempty lines of explanation text.
    pub line_count: usize,
    /// Complete inline-backtick pairs outside fenced blocks.
    pub frag_count: usize,
}

/// One sampled explanation plus whatever scores have been attached so far.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelectionCandidate {
    pub explanation: String,
    pub sample_index: usize,
    pub features: Features,
    /// (total logprob, token count) of the code given the explanation.
    pub logp_code_given_exp: Option<(f64, usize)>,
    /// (total logprob, token count) of the explanation given the code.
    pub logp_exp_given_code: Option<(f64, usize)>,
    /// Fraction of translations sampled from this explanation that passed.
    pub pass_estimate: Option<f64>,
}

impl SelectionCandidate {
    pub fn new(explanation: impl Into<String>, sample_index: usize, source: &str) -> Self {
        let explanation = explanation.into();
        let features = compute_features(&explanation, source);
        SelectionCandidate {
            explanation,
            sample_index,
            features,
            logp_code_given_exp: None,
            logp_exp_given_code: None,
            pass_estimate: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RerankWeights {
    pub alpha: f64,
}

impl RerankWeights {
    pub fn new(alpha: f64) -> Result<RerankWeights> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Contract(format!("alpha must be in [0,1], got {alpha}")));
        }
        Ok(RerankWeights { alpha })
    }

    /// The sweep grid used when tuning alpha: 0.0 to 1.0 in steps of 0.1.
    pub fn grid() -> Vec<RerankWeights> {
        (0..=10)
            .map(|i| RerankWeights { alpha: i as f64 / 10.0 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SelectionPolicy {
    Random { seed: u64 },
    Len,
    LineE,
    Line,
    Frag,
    LogProb { alpha: f64 },
    Oracle,
}

/// Splits the candidate text into fenced blocks and the prose between them.
/// Returns (prose, fenced-removed) — we only need prose here.
fn prose_outside_fences(text: &str) -> String {
    let mut prose = String::new();
    let mut rest = text;
    loop {
        match rest.find("```") {
            Some(start) => {
                prose.push_str(&rest[..start]);
                match rest[start + 3..].find("```") {
                    Some(end) => rest = &rest[start + 3 + end + 3..],
                    None => break,
                }
            }
            None => {
                prose.push_str(rest);
                break;
            }
        }
    }
    prose
}

pub fn compute_features(explanation: &str, source_program: &str) -> Features {
    let stripped = strip_code(explanation);
    let len_chars_excl_code = stripped.chars().count();
    let line_count = explanation.lines().filter(|l| !l.trim().is_empty()).count();

    let source_lines: BTreeSet<&str> = source_program
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    let explained: BTreeSet<&str> = explanation
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && source_lines.contains(l))
        .collect();

    let prose = prose_outside_fences(explanation);
    let frag_count = prose.matches('`').count() / 2;

    Features {
        len_chars_excl_code,
        lines_explained: explained.len(),
        line_count,
        frag_count,
    }
}

/// alpha * logp(code|exp)/|code| + (1-alpha) * logp(exp|code)/|exp|.
pub fn coder_reviewer_score(c: &SelectionCandidate, w: RerankWeights) -> Result<f64> {
    let (lp_code, n_code) = c
        .logp_code_given_exp
        .ok_or_else(|| Error::Capability("candidate lacks code-given-explanation logprob".into()))?;
    let (lp_exp, n_exp) = c
        .logp_exp_given_code
        .ok_or_else(|| Error::Capability("candidate lacks explanation-given-code logprob".into()))?;
    if n_code == 0 || n_exp == 0 {
        return Err(Error::Contract("logprob token counts must be positive".into()));
    }
    Ok(w.alpha * lp_code / n_code as f64 + (1.0 - w.alpha) * lp_exp / n_exp as f64)
}

fn policy_score(c: &SelectionCandidate, policy: SelectionPolicy) -> Result<f64> {
    Ok(match policy {
        SelectionPolicy::Random { .. } => unreachable!("random handled separately"),
        SelectionPolicy::Len => c.features.len_chars_excl_code as f64,
        SelectionPolicy::LineE => c.features.lines_explained as f64,
        SelectionPolicy::Line => c.features.line_count as f64,
        SelectionPolicy::Frag => c.features.frag_count as f64,
        SelectionPolicy::LogProb { alpha } => {
            coder_reviewer_score(c, RerankWeights::new(alpha)?)?
        }
        SelectionPolicy::Oracle => c
            .pass_estimate
            .ok_or_else(|| Error::Contract("oracle policy requires pass estimates".into()))?,
    })
}

/// Argmax of the policy's scalar over candidates; ties resolve to the lowest
/// sample_index. Random draws uniformly under its seed.
pub fn select_explanation<'a>(
    candidates: &'a [SelectionCandidate],
    policy: SelectionPolicy,
) -> Result<&'a SelectionCandidate> {
    if candidates.is_empty() {
        return Err(Error::Contract("select_explanation over empty candidate list".into()));
    }
    if let SelectionPolicy::Random { seed } = policy {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let idx = rng.gen_range(0..candidates.len());
        return Ok(&candidates[idx]);
    }
    let mut best: Option<(&SelectionCandidate, f64)> = None;
    for c in candidates {
        let score = policy_score(c, policy)?;
        let better = match best {
            None => true,
            Some((b, s)) => score > s || (score == s && c.sample_index < b.sample_index),
        };
        if better {
            best = Some((c, score));
        }
    }
    Ok(best.unwrap().0)
}

/// Mean and variance of a policy's estimated pass rate over a train set.
/// Deterministic policies have variance 0; Random repeats its draw 100 times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyEstimate {
    pub mean: f64,
    pub variance: f64,
}

pub const RANDOM_REPEATS: usize = 100;

pub fn estimate_policy(
    train: &BTreeMap<String, Vec<SelectionCandidate>>,
    policy: SelectionPolicy,
) -> Result<PolicyEstimate> {
    if train.is_empty() {
        return Err(Error::Contract("estimate_policy over empty train set".into()));
    }
    for (id, cands) in train {
        if cands.is_empty() {
            return Err(Error::Contract(format!("problem {id} has no candidates")));
        }
        if cands.iter().any(|c| c.pass_estimate.is_none()) {
            return Err(Error::Contract(format!(
                "problem {id} has candidates without pass estimates"
            )));
        }
    }

    if let SelectionPolicy::Random { seed } = policy {
        let mut means = Vec::with_capacity(RANDOM_REPEATS);
        for rep in 0..RANDOM_REPEATS {
            let mut sum = 0.0;
            for (i, cands) in train.values().enumerate() {
                // independent draw per (repeat, problem), fully seed-determined
                let mut rng =
                    ChaCha8Rng::seed_from_u64(seed ^ (rep as u64) << 32 ^ i as u64);
                let idx = rng.gen_range(0..cands.len());
                sum += cands[idx].pass_estimate.unwrap();
            }
            means.push(sum / train.len() as f64);
        }
        let (mean, std) = mean_std(&means);
        return Ok(PolicyEstimate {
            mean,
            variance: std * std,
        });
    }

    let mut sum = 0.0;
    for cands in train.values() {
        let chosen = select_explanation(cands, policy)?;
        sum += chosen.pass_estimate.unwrap();
    }
    Ok(PolicyEstimate {
        mean: sum / train.len() as f64,
        variance: 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    UseDirect,
    UseExplanation,
}

/// Apply the explanation stage only when the direct pass@1 falls strictly
/// below the difficulty threshold.
pub fn selective_route(direct_pass1: f64, threshold: f64) -> Result<Route> {
    if !(0.0..=1.0).contains(&direct_pass1) {
        return Err(Error::Contract(format!(
            "direct pass@1 must be in [0,1], got {direct_pass1}"
        )));
    }
    Ok(if direct_pass1 < threshold {
        Route::UseExplanation
    } else {
        Route::UseDirect
    })
}
