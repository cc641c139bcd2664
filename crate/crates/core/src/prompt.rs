//! Prompt rendering for the four translation variants and both pipeline
//! stages, plus explanation sanitization (removal of target-language-specific
//! content) and cross-direction explanation reuse.

use crate::corpus::TranslationPair;
use crate::error::{Error, Result};
use crate::lang::Language;
use crate::postproc::ProfileTable;
use crate::store::{GenerationStore, Stage};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PromptVariant {
    Direct,
    Exp,
    ExpLbl,
    ExpLblD,
}

impl PromptVariant {
    pub fn id(self) -> &'static str {
        match self {
            PromptVariant::Direct => "direct",
            PromptVariant::Exp => "exp",
            PromptVariant::ExpLbl => "exp-lbl",
            PromptVariant::ExpLblD => "exp-lbl-d",
        }
    }

    pub fn has_explanation(self) -> bool {
        self != PromptVariant::Direct
    }

    /// Seeded text the model continues from at the explain stage; it is
    /// re-attached to the completion before storage.
    pub fn continuation_prefix(self) -> Option<&'static str> {
        match self {
            PromptVariant::Direct => None,
            PromptVariant::Exp => Some("This"),
            PromptVariant::ExpLbl | PromptVariant::ExpLblD => {
                Some("The code is an implementation of")
            }
        }
    }

    fn template(self, stage: Stage) -> Result<&'static str> {
        Ok(match (self, stage) {
            (PromptVariant::Direct, Stage::Translate) => {
                include_str!("../data/templates/direct_translate.txt")
            }
            (PromptVariant::Direct, Stage::Explain) => {
                return Err(Error::Contract(
                    "direct variant has no explanation stage".into(),
                ))
            }
            (PromptVariant::Exp, Stage::Explain) => {
                include_str!("../data/templates/exp_explain.txt")
            }
            (PromptVariant::Exp, Stage::Translate) => {
                include_str!("../data/templates/exp_translate.txt")
            }
            (PromptVariant::ExpLbl, Stage::Explain) => {
                include_str!("../data/templates/exp_lbl_explain.txt")
            }
            (PromptVariant::ExpLbl, Stage::Translate) => {
                include_str!("../data/templates/exp_lbl_translate.txt")
            }
            (PromptVariant::ExpLblD, Stage::Explain) => {
                include_str!("../data/templates/exp_lbl_d_explain.txt")
            }
            (PromptVariant::ExpLblD, Stage::Translate) => {
                include_str!("../data/templates/exp_lbl_d_translate.txt")
            }
        })
    }
}

impl std::str::FromStr for PromptVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<PromptVariant> {
        Ok(match s {
            "direct" => PromptVariant::Direct,
            "exp" => PromptVariant::Exp,
            "exp-lbl" => PromptVariant::ExpLbl,
            "exp-lbl-d" => PromptVariant::ExpLblD,
            other => return Err(Error::Config(format!("unknown prompt variant {other:?}"))),
        })
    }
}

/// One in-context example.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShotExample {
    pub source_program: String,
    #[serde(default)]
    pub explanation: Option<String>,
    pub target_solution: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderedPrompt {
    pub text: String,
    pub stop_sequences: Vec<String>,
    pub stage: Stage,
    pub continuation_prefix: Option<String>,
}

/// The explain stage stops when the model starts the next "### …" header.
pub const EXPLAIN_STOP: &str = "\n#";

fn header(lang: Language) -> String {
    format!("### {} version", lang.display_name())
}

fn render_shots(
    shots: &[ShotExample],
    variant: PromptVariant,
    src: Language,
    tgt: Language,
) -> Result<String> {
    let mut out = String::new();
    for (i, shot) in shots.iter().enumerate() {
        out.push_str(&header(src));
        out.push_str("\n\n");
        out.push_str(shot.source_program.trim_end());
        out.push_str("\n\n");
        if variant.has_explanation() {
            let explanation = shot.explanation.as_deref().ok_or_else(|| {
                Error::Contract(format!("shot {i} lacks an explanation for {}", variant.id()))
            })?;
            out.push_str("### Explanation\n\n");
            out.push_str(explanation.trim_end());
            out.push_str("\n\n");
        } else if shot.explanation.is_some() {
            return Err(Error::Contract(format!(
                "shot {i} carries an explanation but variant is direct"
            )));
        }
        out.push_str(&header(tgt));
        out.push_str("\n\n");
        out.push_str(shot.target_solution.trim_end());
        out.push_str("\n\n");
    }
    Ok(out)
}

fn fill(template: &str, substitutions: &[(&str, &str)]) -> String {
    let mut text = template.to_string();
    for (key, value) in substitutions {
        text = text.replace(key, value);
    }
    text
}

/// Stage-one prompt: instruct, show shots, present the test source, and end
/// at "### Explanation" plus the variant's continuation prefix.
pub fn render_explanation_prompt(
    pair: &TranslationPair,
    variant: PromptVariant,
    shots: &[ShotExample],
) -> Result<RenderedPrompt> {
    let template = variant.template(Stage::Explain)?;
    let shots_text = render_shots(shots, variant, pair.source_language, pair.target_language)?;
    let text = fill(
        template,
        &[
            ("{src_lang}", pair.source_language.display_name()),
            ("{tgt_lang}", pair.target_language.display_name()),
            ("{shots}", &shots_text),
            ("{source_program}", pair.source_program.trim_end()),
        ],
    );
    Ok(RenderedPrompt {
        text,
        stop_sequences: vec![EXPLAIN_STOP.to_string()],
        stage: Stage::Explain,
        continuation_prefix: variant.continuation_prefix().map(String::from),
    })
}

/// Stage-two prompt: same context plus the (sanitized) explanation, ending
/// with the target header and scaffold. Stop sequences come from the target
/// language profile.
pub fn render_translation_prompt(
    pair: &TranslationPair,
    variant: PromptVariant,
    shots: &[ShotExample],
    explanation: Option<&str>,
    profiles: &ProfileTable,
) -> Result<RenderedPrompt> {
    if variant.has_explanation() && explanation.is_none() {
        return Err(Error::Contract(format!(
            "variant {} requires an explanation",
            variant.id()
        )));
    }
    let template = variant.template(Stage::Translate)?;
    let shots_text = render_shots(shots, variant, pair.source_language, pair.target_language)?;
    let text = fill(
        template,
        &[
            ("{src_lang}", pair.source_language.display_name()),
            ("{tgt_lang}", pair.target_language.display_name()),
            ("{shots}", &shots_text),
            ("{source_program}", pair.source_program.trim_end()),
            ("{explanation}", explanation.unwrap_or("").trim_end()),
            ("{scaffold}", &pair.target_scaffold),
        ],
    );
    let profile = profiles.get(pair.target_language)?;
    Ok(RenderedPrompt {
        text,
        stop_sequences: profile.api_stop_tokens.clone(),
        stage: Stage::Translate,
        continuation_prefix: None,
    })
}

/// Byte spans of sentences: split after ./!/? followed by whitespace, and at
/// paragraph breaks.
fn sentence_starts(text: &str) -> Vec<usize> {
    let bytes = text.as_bytes();
    let mut starts = vec![0usize];
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if matches!(c, b'.' | b'!' | b'?')
            && i + 1 < bytes.len()
            && bytes[i + 1].is_ascii_whitespace()
        {
            // the next sentence starts at the first non-whitespace byte
            let mut j = i + 1;
            while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            if j < bytes.len() {
                starts.push(j);
            }
            i = j;
            continue;
        }
        if c == b'\n' && i + 1 < bytes.len() && bytes[i + 1] == b'\n' {
            let mut j = i + 1;
            while j < bytes.len() && bytes[j] == b'\n' {
                j += 1;
            }
            if j < bytes.len() {
                starts.push(j);
            }
            i = j;
            continue;
        }
        i += 1;
    }
    starts.dedup();
    starts
}

/// Case-insensitive whole-word search (alphanumeric boundaries), so "Java"
/// does not match inside "JavaScript".
fn mentions_word(haystack: &str, word: &str) -> bool {
    let hay = haystack.to_lowercase();
    let needle = word.to_lowercase();
    let mut from = 0;
    while let Some(pos) = hay[from..].find(&needle) {
        let start = from + pos;
        let end = start + needle.len();
        let before_ok = start == 0
            || !hay[..start].chars().next_back().unwrap().is_alphanumeric();
        let after_ok =
            end == hay.len() || !hay[end..].chars().next().unwrap().is_alphanumeric();
        if before_ok && after_ok {
            return true;
        }
        from = end;
    }
    false
}

/// Truncates the explanation at the start of the first sentence that names
/// the target language, or at the first fenced code block tagged with the
/// target language. Idempotent; a no-mention input is returned unchanged.
pub fn sanitize_explanation(explanation: &str, target: Language) -> String {
    let display = target.display_name();
    let fence = format!("```{}", target.fence_tag());

    let mut cut = explanation.len();
    if let Some(pos) = explanation.to_lowercase().find(&fence.to_lowercase()) {
        cut = pos;
    }
    let starts = sentence_starts(explanation);
    for (i, &start) in starts.iter().enumerate() {
        let end = starts.get(i + 1).copied().unwrap_or(explanation.len());
        if mentions_word(&explanation[start..end], display) {
            cut = cut.min(start);
            break;
        }
    }
    explanation[..cut].trim_end().to_string()
}

/// Fetches a previously generated explanation for the same (problem, source
/// language, variant) regardless of which target direction produced it, and
/// sanitizes it for the new target. Lowest sample index wins.
pub fn reuse_explanations(
    store: &GenerationStore,
    pair: &TranslationPair,
    variant: PromptVariant,
) -> Option<String> {
    let mut records = store.find_explanations_any_target(
        &pair.id,
        pair.source_language.id(),
        variant.id(),
    );
    records.sort_by(|a, b| {
        a.key
            .sample_index
            .cmp(&b.key.sample_index)
            .then(a.key.direction.cmp(&b.key.direction))
    });
    records
        .into_iter()
        .next()
        .map(|r| sanitize_explanation(&r.text, pair.target_language))
}
