//! Per-target-language completion truncation.
//!
//! Providers usually stop at the configured stop sequences, but some include
//! the stop string itself, so the cut is replicated locally. On top of the
//! stop cut, two line-level strategies remove trailing junk: a greedy
//! function-end scan (Ruby, Bash) and an additional-stop cut that also
//! catches top-level self-calls of the entry function (Racket).

use crate::error::{Error, Result};
use crate::lang::Language;
use regex::Regex;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

const PROFILE_DATA: &str = include_str!("../data/profiles.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationStrategy {
    None,
    AfterFunctionEnds,
    AfterAdditionalStops,
}

#[derive(Debug, Clone, Deserialize)]
struct ProfileRecord {
    language: Language,
    api_stop_tokens: Vec<String>,
    additional_stops: Vec<String>,
    truncation: TruncationStrategy,
    closer: Option<String>,
    #[serde(default)]
    end_of_function: Option<String>,
    #[serde(default)]
    signature: Option<String>,
    #[serde(default)]
    alphabet_stops: bool,
    #[serde(default)]
    entry_pattern: Option<String>,
}

/// Stop tokens, truncation strategy, and matchers for one target language.
#[derive(Debug, Clone)]
pub struct LanguageProfile {
    pub language: Language,
    /// Stop sequences passed to the provider (OpenAI caps these at 4).
    pub api_stop_tokens: Vec<String>,
    /// Extra stops applied locally only (after_additional_stops strategy).
    pub additional_stops: Vec<String>,
    pub truncation: TruncationStrategy,
    /// Text re-appended before execution when the stop cut removed a closer.
    pub closer: Option<String>,
    end_of_function: Option<Regex>,
    signature: Option<Regex>,
    entry_pattern: Option<Regex>,
}

impl LanguageProfile {
    pub fn display_name(&self) -> &'static str {
        self.language.display_name()
    }

    fn is_end_of_function(&self, line: &str) -> bool {
        self.end_of_function
            .as_ref()
            .map(|re| re.is_match(line))
            .unwrap_or(false)
    }

    fn is_function_signature(&self, line: &str) -> bool {
        self.signature
            .as_ref()
            .map(|re| re.is_match(line))
            .unwrap_or(false)
    }

    /// Reads the main completion function's name from the target scaffold.
    pub fn entry_name(&self, scaffold: &str) -> Option<String> {
        let re = self.entry_pattern.as_ref()?;
        re.captures(scaffold)
            .and_then(|c| c.get(1))
            .map(|m| m.as_str().to_string())
    }
}

/// The full profile table, keyed by language.
#[derive(Debug, Clone)]
pub struct ProfileTable {
    profiles: BTreeMap<Language, LanguageProfile>,
}

impl ProfileTable {
    /// Loads the built-in table (populated from the per-language stop-token
    /// and post-processing notes).
    pub fn builtin() -> Result<ProfileTable> {
        Self::from_json(PROFILE_DATA)
    }

    pub fn from_json(json: &str) -> Result<ProfileTable> {
        let records: Vec<ProfileRecord> = serde_json::from_str(json)?;
        let mut profiles = BTreeMap::new();
        for r in records {
            if r.api_stop_tokens.len() > 4 {
                return Err(Error::Config(format!(
                    "{}: more than 4 api stop tokens",
                    r.language
                )));
            }
            let compile = |p: &Option<String>| -> Result<Option<Regex>> {
                match p {
                    Some(p) => Ok(Some(
                        Regex::new(p).map_err(|e| Error::Config(e.to_string()))?,
                    )),
                    None => Ok(None),
                }
            };
            let mut additional_stops = r.additional_stops.clone();
            if r.alphabet_stops {
                for c in ('a'..='z').chain('A'..='Z') {
                    additional_stops.push(format!("\n{c}"));
                }
            }
            if r.truncation == TruncationStrategy::AfterFunctionEnds
                && (r.end_of_function.is_none() || r.signature.is_none())
            {
                return Err(Error::Config(format!(
                    "{}: after_function_ends requires both matchers",
                    r.language
                )));
            }
            if r.truncation == TruncationStrategy::AfterAdditionalStops
                && r.entry_pattern.is_none()
            {
                return Err(Error::Config(format!(
                    "{}: after_additional_stops requires an entry pattern",
                    r.language
                )));
            }
            profiles.insert(
                r.language,
                LanguageProfile {
                    language: r.language,
                    api_stop_tokens: r.api_stop_tokens,
                    additional_stops,
                    truncation: r.truncation,
                    closer: r.closer,
                    end_of_function: compile(&r.end_of_function)?,
                    signature: compile(&r.signature)?,
                    entry_pattern: compile(&r.entry_pattern)?,
                },
            );
        }
        Ok(ProfileTable { profiles })
    }

    pub fn get(&self, language: Language) -> Result<&LanguageProfile> {
        self.profiles
            .get(&language)
            .ok_or_else(|| Error::Config(format!("no profile for language {language}")))
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn languages(&self) -> impl Iterator<Item = Language> + '_ {
        self.profiles.keys().copied()
    }
}

/// Cuts `text` at the leftmost occurrence of any stop string. Ties at the
/// same position are broken by the longer stop.
pub fn cut_at_stops(text: &str, stops: &[String]) -> usize {
    let mut best: Option<(usize, usize)> = None; // (position, length)
    for stop in stops {
        if stop.is_empty() {
            continue;
        }
        if let Some(pos) = text.find(stop.as_str()) {
            let replace = match best {
                None => true,
                Some((bp, bl)) => pos < bp || (pos == bp && stop.len() > bl),
            };
            if replace {
                best = Some((pos, stop.len()));
            }
        }
    }
    best.map(|(p, _)| p).unwrap_or(text.len())
}

/// Full truncation for a completion: local stop cut, then the profile's
/// line-level strategy. `scaffold` is needed only for the additional-stops
/// strategy (entry-name extraction).
pub fn truncate_completion(
    completion: &str,
    profile: &LanguageProfile,
    scaffold: &str,
) -> String {
    let cut = cut_at_stops(completion, &profile.api_stop_tokens);
    let stopped = &completion[..cut];
    match profile.truncation {
        TruncationStrategy::None => stopped.to_string(),
        TruncationStrategy::AfterFunctionEnds => truncate_after_function_ends(stopped, profile),
        TruncationStrategy::AfterAdditionalStops => {
            truncate_after_additional_stops(stopped, profile, scaffold)
        }
    }
}

/// Greedy line scan: once a function end is seen, the next non-empty line is
/// kept only if it is a function signature; otherwise the rest is dropped.
pub fn truncate_after_function_ends(completion: &str, profile: &LanguageProfile) -> String {
    let mut lines: Vec<&str> = completion.split('\n').collect();
    let mut in_function = true;
    for i in 0..lines.len() {
        let line = lines[i];
        if in_function {
            if profile.is_end_of_function(line) {
                in_function = false;
            }
        } else if !line.trim().is_empty() {
            if profile.is_function_signature(line) {
                in_function = true;
            } else {
                lines.truncate(i);
                break;
            }
        }
    }
    lines.join("\n")
}

/// Cuts at the earliest additional stop or top-level self-call of the entry
/// function. When the entry name cannot be read from the scaffold, only the
/// additional stops apply.
pub fn truncate_after_additional_stops(
    completion: &str,
    profile: &LanguageProfile,
    scaffold: &str,
) -> String {
    let mut stops = profile.additional_stops.clone();
    match profile.entry_name(scaffold) {
        Some(name) => stops.push(format!("\n({name}")),
        None => {
            eprintln!(
                "warning: entry name not found in {} scaffold; using additional stops only",
                profile.language
            );
        }
    }
    let cut = cut_at_stops(completion, &stops);
    completion[..cut].to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> ProfileTable {
        ProfileTable::builtin().unwrap()
    }

    #[test]
    fn builtin_covers_all_languages() {
        assert_eq!(table().len(), Language::ALL.len());
    }

    #[test]
    fn typescript_console_log_cut() {
        let p = table();
        let ts = p.get(Language::Ts).unwrap();
        let completion = "    return x + 1;\n}\nconsole.log(f(1));";
        assert_eq!(
            truncate_completion(completion, ts, ""),
            "    return x + 1;"
        );
    }

    #[test]
    fn java_main_cut() {
        let p = table();
        let jv = p.get(Language::Jv).unwrap();
        let completion =
            "        return n + 1;\n    }\npublic static void main(String[] args) {}";
        assert_eq!(
            truncate_completion(completion, jv, ""),
            "        return n + 1;\n    }\n"
        );
    }

    #[test]
    fn empty_completion() {
        let p = table();
        for lang in Language::ALL {
            let profile = p.get(lang).unwrap();
            assert_eq!(truncate_completion("", profile, ""), "");
        }
    }

    #[test]
    fn ruby_self_call_dropped() {
        let p = table();
        let rb = p.get(Language::Rb).unwrap();
        let completion = "def f\n  1\nend\nx = f(1)";
        assert_eq!(truncate_after_function_ends(completion, rb), "def f\n  1\nend");
    }

    #[test]
    fn ruby_second_function_kept() {
        let p = table();
        let rb = p.get(Language::Rb).unwrap();
        let completion = "def f\n  1\nend\ndef g\n  2\nend";
        assert_eq!(truncate_after_function_ends(completion, rb), completion);
    }

    #[test]
    fn no_end_of_function_unchanged() {
        let p = table();
        let rb = p.get(Language::Rb).unwrap();
        let completion = "  x = 1\n  x + 1";
        assert_eq!(truncate_after_function_ends(completion, rb), completion);
    }

    #[test]
    fn racket_self_call_cut() {
        let p = table();
        let rkt = p.get(Language::Rkt).unwrap();
        let scaffold = "(define (candidate n)\n";
        let completion = "  (+ n 1))\n(candidate 1 2)";
        assert_eq!(
            truncate_after_additional_stops(completion, rkt, scaffold),
            "  (+ n 1))"
        );
    }

    #[test]
    fn racket_fence_cut() {
        let p = table();
        let rkt = p.get(Language::Rkt).unwrap();
        let completion = "  (+ n 1))\n```";
        assert_eq!(
            truncate_after_additional_stops(completion, rkt, "(define (candidate n)"),
            "  (+ n 1))"
        );
    }

    #[test]
    fn no_stops_unchanged() {
        let p = table();
        let rkt = p.get(Language::Rkt).unwrap();
        let completion = "  (+ n 1))";
        assert_eq!(
            truncate_after_additional_stops(completion, rkt, "(define (candidate n)"),
            completion
        );
    }

    #[test]
    fn stop_tie_prefers_longer() {
        let stops = vec!["\n(".to_string(), "\n(define ".to_string()];
        let text = "x\n(define (g))";
        assert_eq!(cut_at_stops(text, &stops), 1);
    }

    #[test]
    fn truncation_idempotent_and_prefix() {
        let p = table();
        let samples = [
            "    return x;\n}\nextra",
            "def f\n  1\nend\nputs f",
            "  (display 1)\n```junk",
            "",
            "no stops here at all",
        ];
        for lang in Language::ALL {
            let profile = p.get(lang).unwrap();
            for s in samples {
                let once = truncate_completion(s, profile, "(define (candidate x)");
                let twice = truncate_completion(&once, profile, "(define (candidate x)");
                assert_eq!(once, twice, "{lang}: not idempotent on {s:?}");
                assert!(s.starts_with(&once), "{lang}: not a prefix on {s:?}");
            }
        }
    }
}
