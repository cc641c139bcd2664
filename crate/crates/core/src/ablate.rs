//! Explanation perturbations (sentence shuffling, word/sentence deletion,
//! substitution with random or retrieved explanations) and the two-stage
//! pivot-language translation plan.

use crate::error::{Error, Result};
use crate::lang::Language;
use crate::prompt::PromptVariant;
use crate::retrieve::Bm25Index;
use crate::store::{GenerationStore, Quality, draw_from_pool};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationKind {
    /// Shuffle sentence (exp) or code+prose segment (exp-lbl) order.
    SwapS,
    /// Use the explanation generated from the obfuscated source instead.
    ObfExp,
    /// Substitute a uniformly drawn other problem's explanation.
    RandExp,
    /// Substitute the BM25-nearest other problem's explanation.
    RetExp,
    /// Drop the explanation entirely.
    NoExp,
    /// Delete ceil(p * word count) whitespace-delimited words.
    DelW { p: f64 },
    /// Delete ceil(p * count) sentences/segments.
    DelS { p: f64 },
}

impl PerturbationKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            PerturbationKind::DelW { p } | PerturbationKind::DelS { p } => {
                if !(*p > 0.0 && *p < 1.0) {
                    return Err(Error::Contract(format!(
                        "deletion fraction must be strictly inside (0,1), got {p}"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match self {
            PerturbationKind::SwapS => "swap-s".to_string(),
            PerturbationKind::ObfExp => "obf-exp".to_string(),
            PerturbationKind::RandExp => "rand-exp".to_string(),
            PerturbationKind::RetExp => "ret-exp".to_string(),
            PerturbationKind::NoExp => "no-exp".to_string(),
            PerturbationKind::DelW { p } => format!("del-w({p})"),
            PerturbationKind::DelS { p } => format!("del-s({p})"),
        }
    }
}

/// Everything the substitution-style perturbations may need.
pub struct PerturbContext<'a> {
    pub variant: PromptVariant,
    /// Problem id whose explanation is being perturbed.
    pub problem_id: &'a str,
    /// All stored explanations by problem id (for rand-exp / ret-exp).
    pub corpus_explanations: &'a BTreeMap<String, String>,
    /// Source programs index for ret-exp (built over the same ids).
    pub retrieval_index: Option<&'a Bm25Index>,
    /// This problem's source program, as the retrieval query.
    pub source_program: &'a str,
    /// Explanation regenerated from the obfuscated source (for obf-exp).
    pub obfuscated_explanation: Option<&'a str>,
}

/// Sentence units for exp: the sanitizer's sentence boundaries. Segment units
/// for exp-lbl: blank-line-delimited code+prose paragraphs.
pub fn split_units(explanation: &str, variant: PromptVariant) -> Vec<String> {
    match variant {
        PromptVariant::ExpLbl | PromptVariant::ExpLblD => explanation
            .split("\n\n")
            .filter(|s| !s.trim().is_empty())
            .map(str::to_string)
            .collect(),
        _ => split_sentences(explanation),
    }
}

fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        current.push(c);
        let boundary = matches!(c, '.' | '!' | '?')
            && chars.peek().map_or(true, |n| n.is_whitespace());
        if boundary {
            let trimmed = current.trim();
            if !trimmed.is_empty() {
                out.push(trimmed.to_string());
            }
            current.clear();
            while chars.peek().is_some_and(|n| n.is_whitespace()) {
                chars.next();
            }
        }
    }
    let trimmed = current.trim();
    if !trimmed.is_empty() {
        out.push(trimmed.to_string());
    }
    out
}

fn join_units(units: &[String], variant: PromptVariant) -> String {
    match variant {
        PromptVariant::ExpLbl | PromptVariant::ExpLblD => units.join("\n\n"),
        _ => units.join(" "),
    }
}

/// Indices to delete: exactly ceil(p * count) distinct positions, uniform
/// under the seed. Survivors keep their original order.
fn deletion_indices(count: usize, p: f64, rng: &mut ChaCha8Rng) -> BTreeSet<usize> {
    let k = ((p * count as f64).ceil() as usize).min(count);
    let mut indices: Vec<usize> = (0..count).collect();
    indices.shuffle(rng);
    indices.into_iter().take(k).collect()
}

pub fn perturb_explanation(
    explanation: &str,
    kind: PerturbationKind,
    seed: u64,
    ctx: &PerturbContext,
) -> Result<String> {
    kind.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        PerturbationKind::NoExp => Ok(String::new()),
        PerturbationKind::SwapS => {
            let mut units = split_units(explanation, ctx.variant);
            units.shuffle(&mut rng);
            Ok(join_units(&units, ctx.variant))
        }
        PerturbationKind::DelS { p } => {
            let units = split_units(explanation, ctx.variant);
            let dropped = deletion_indices(units.len(), p, &mut rng);
            let kept: Vec<String> = units
                .into_iter()
                .enumerate()
                .filter(|(i, _)| !dropped.contains(i))
                .map(|(_, u)| u)
                .collect();
            Ok(join_units(&kept, ctx.variant))
        }
        PerturbationKind::DelW { p } => {
            let words: Vec<String> =
                explanation.split_whitespace().map(str::to_string).collect();
            let dropped = deletion_indices(words.len(), p, &mut rng);
            let kept: Vec<String> = words
                .into_iter()
                .enumerate()
                .filter(|(i, _)| !dropped.contains(i))
                .map(|(_, w)| w)
                .collect();
            Ok(kept.join(" "))
        }
        PerturbationKind::RandExp => {
            let others: Vec<(&String, &String)> = ctx
                .corpus_explanations
                .iter()
                .filter(|(id, _)| id.as_str() != ctx.problem_id)
                .collect();
            if others.is_empty() {
                return Err(Error::Contract(
                    "rand-exp requires explanations from at least one other problem".into(),
                ));
            }
            let (_, text) = others[rng.gen_range(0..others.len())];
            Ok(text.clone())
        }
        PerturbationKind::RetExp => {
            let index = ctx.retrieval_index.ok_or_else(|| {
                Error::Contract("ret-exp requires a retrieval index".into())
            })?;
            let (neighbor, _) = index
                .nearest(ctx.source_program, ctx.problem_id)
                .ok_or_else(|| {
                    Error::Contract("ret-exp found no other document in the index".into())
                })?;
            ctx.corpus_explanations
                .get(&neighbor)
                .cloned()
                .ok_or_else(|| {
                    Error::Contract(format!("no stored explanation for neighbor {neighbor}"))
                })
        }
        PerturbationKind::ObfExp => ctx
            .obfuscated_explanation
            .map(str::to_string)
            .ok_or_else(|| {
                Error::Contract(
                    "obf-exp requires the explanation regenerated from the obfuscated source"
                        .into(),
                )
            }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PivotQuality {
    Gold,
    Unk,
    Bad,
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PivotPlan {
    pub source_language: Language,
    pub pivot_language: Language,
    pub target_language: Language,
    pub pivot_quality: PivotQuality,
}

impl PivotPlan {
    pub fn validate(&self) -> Result<()> {
        if self.source_language == self.pivot_language
            || self.pivot_language == self.target_language
            || self.source_language == self.target_language
        {
            return Err(Error::Contract(
                "pivot plan requires three distinct languages".into(),
            ));
        }
        Ok(())
    }
}

/// One stage of a pivot run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PivotStage {
    /// Translate source -> pivot from scratch.
    Translate { src: Language, tgt: Language },
    /// Reuse a stored pivot program of the requested quality, then translate
    /// pivot -> target with the pivot program in the explanation slot.
    UseStored {
        src: Language,
        tgt: Language,
        pivot_program: String,
    },
}

/// Expands a pivot plan into its two stages for one problem. Quality pools
/// other than Any draw from previously stored, execution-verified pivot
/// translations; an unsatisfiable pool is a skip (the problem is dropped and
/// reported, mirroring unequal per-direction problem counts).
pub fn plan_pivot(
    problem_id: &str,
    plan: PivotPlan,
    store: &GenerationStore,
) -> Result<Vec<PivotStage>> {
    plan.validate()?;
    let stage1_direction = format!(
        "{}-{}",
        plan.source_language.id(),
        plan.pivot_language.id()
    );
    match plan.pivot_quality {
        PivotQuality::Any => {
            // fresh two-stage run: translate to pivot, then pivot to target
            Ok(vec![
                PivotStage::Translate {
                    src: plan.source_language,
                    tgt: plan.pivot_language,
                },
                PivotStage::Translate {
                    src: plan.pivot_language,
                    tgt: plan.target_language,
                },
            ])
        }
        q => {
            let quality = match q {
                PivotQuality::Gold => Quality::Gold,
                PivotQuality::Bad => Quality::Bad,
                _ => Quality::Unk,
            };
            let record =
                draw_from_pool(store, problem_id, &stage1_direction, "direct", quality)?;
            Ok(vec![PivotStage::UseStored {
                src: plan.pivot_language,
                tgt: plan.target_language,
                pivot_program: record.text,
            }])
        }
    }
}
