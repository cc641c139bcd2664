//! Benchmark problem loading and source/target pairing.
//!
//! Problems are stored one JSON object per line. A translation pair joins the
//! source language's canonical solution with the target language's scaffold
//! and unit tests for the same problem id.

use crate::error::{Error, Result};
use crate::lang::Language;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

/// One benchmark program in one language.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub id: String,
    pub language: Language,
    /// Target-language signature/imports prepended to completions.
    pub scaffold: String,
    #[serde(default)]
    pub canonical_solution: Option<String>,
    /// Unit-test block appended after the candidate body.
    pub tests: String,
    #[serde(default)]
    pub doc_comment: Option<String>,
    #[serde(default)]
    pub stop_tokens: Option<Vec<String>>,
}

impl Problem {
    /// Full source program (signature plus body), as shown in prompts.
    pub fn full_program(&self) -> Option<String> {
        self.canonical_solution
            .as_ref()
            .map(|body| format!("{}{}", self.scaffold, body))
    }
}

/// A (source solution, target scaffold, target tests) pairing for one id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationPair {
    pub id: String,
    pub source_language: Language,
    pub target_language: Language,
    /// Source canonical solution including its signature.
    pub source_program: String,
    pub target_scaffold: String,
    pub target_tests: String,
}

/// Problems skipped by `build_pairs`, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkipReport {
    pub id: String,
    pub reason: String,
}

/// Loads all problems for the requested languages from a directory of
/// `.jsonl` files or a single record file.
pub fn load_corpus(path: &Path, languages: &BTreeSet<Language>) -> Result<Vec<Problem>> {
    let mut files = Vec::new();
    if path.is_dir() {
        for entry in fs::read_dir(path)? {
            let p = entry?.path();
            if p.extension().and_then(|e| e.to_str()) == Some("jsonl") {
                files.push(p);
            }
        }
        files.sort();
    } else {
        files.push(path.to_path_buf());
    }

    let mut problems = Vec::new();
    let mut seen = BTreeSet::new();
    for file in &files {
        let text = fs::read_to_string(file)?;
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let problem: Problem =
                serde_json::from_str(line).map_err(|e| Error::Parse {
                    file: file.display().to_string(),
                    line: lineno + 1,
                    message: e.to_string(),
                })?;
            if problem.id.is_empty() {
                return Err(Error::Parse {
                    file: file.display().to_string(),
                    line: lineno + 1,
                    message: "empty problem id".to_string(),
                });
            }
            if !languages.is_empty() && !languages.contains(&problem.language) {
                continue;
            }
            if !seen.insert((problem.id.clone(), problem.language)) {
                return Err(Error::DuplicateProblem {
                    id: problem.id,
                    language: problem.language.id().to_string(),
                });
            }
            problems.push(problem);
        }
    }
    Ok(problems)
}

/// Builds one pair per id present in both languages with a source canonical
/// solution. Ids lacking either side are skipped and reported.
pub fn build_pairs(
    corpus: &[Problem],
    src: Language,
    tgt: Language,
) -> Result<(Vec<TranslationPair>, Vec<SkipReport>)> {
    if src == tgt {
        return Err(Error::Contract(format!(
            "source and target language are both {src}"
        )));
    }
    let sources: BTreeMap<&str, &Problem> = corpus
        .iter()
        .filter(|p| p.language == src)
        .map(|p| (p.id.as_str(), p))
        .collect();
    let targets: BTreeMap<&str, &Problem> = corpus
        .iter()
        .filter(|p| p.language == tgt)
        .map(|p| (p.id.as_str(), p))
        .collect();

    let all_ids: BTreeSet<&str> = sources.keys().chain(targets.keys()).copied().collect();
    let mut pairs = Vec::new();
    let mut skipped = Vec::new();
    for id in all_ids {
        match (sources.get(id), targets.get(id)) {
            (Some(s), Some(t)) => match s.full_program() {
                Some(source_program) => pairs.push(TranslationPair {
                    id: id.to_string(),
                    source_language: src,
                    target_language: tgt,
                    source_program,
                    target_scaffold: t.scaffold.clone(),
                    target_tests: t.tests.clone(),
                }),
                None => skipped.push(SkipReport {
                    id: id.to_string(),
                    reason: format!("no canonical solution in {src}"),
                }),
            },
            (Some(_), None) => skipped.push(SkipReport {
                id: id.to_string(),
                reason: format!("missing in target {tgt}"),
            }),
            (None, Some(_)) => skipped.push(SkipReport {
                id: id.to_string(),
                reason: format!("missing in source {src}"),
            }),
            (None, None) => unreachable!(),
        }
    }
    if pairs.is_empty() {
        return Err(Error::EmptyDirection {
            src: src.id().to_string(),
            tgt: tgt.id().to_string(),
        });
    }
    Ok((pairs, skipped))
}
