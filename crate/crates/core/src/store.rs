//! Append-only generation store: every model completion is persisted as one
//! JSON line keyed by (problem, direction, variant, stage, sample index) plus
//! a hash of the exact prompt, enabling deterministic replay and resumable
//! runs.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Explain,
    Translate,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GenKey {
    pub id: String,
    /// "src-tgt" language pair, e.g. "py-js".
    pub direction: String,
    pub variant: String,
    pub stage: Stage,
    pub sample_index: usize,
}

impl Stage {
    fn rank(self) -> u8 {
        match self {
            Stage::Explain => 0,
            Stage::Translate => 1,
        }
    }
}

impl PartialOrd for Stage {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Stage {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rank().cmp(&other.rank())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenRecord {
    #[serde(flatten)]
    pub key: GenKey,
    pub prompt_hash: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub token_logprobs: Option<Vec<(String, f64)>>,
    pub finish_reason: String,
    pub model: String,
    pub timestamp: String,
    /// Execution verdict once known: Some(true) = passed unit tests.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass_status: Option<bool>,
}

/// Hex SHA-256 of the exact prompt text.
pub fn prompt_hash(prompt_text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(prompt_text.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// JSONL-backed append-only store. Later records with the same key supersede
/// earlier ones in memory (e.g. a pass_status update re-append), but nothing
/// is ever rewritten on disk.
#[derive(Debug)]
pub struct GenerationStore {
    path: PathBuf,
    inner: Mutex<StoreInner>,
}

#[derive(Debug, Default)]
struct StoreInner {
    records: BTreeMap<GenKey, GenRecord>,
}

impl GenerationStore {
    /// Opens (or creates) the store file and loads all existing records.
    pub fn open(path: impl AsRef<Path>) -> Result<GenerationStore> {
        let path = path.as_ref().to_path_buf();
        let mut inner = StoreInner::default();
        if path.exists() {
            let file = File::open(&path)?;
            for (lineno, line) in BufReader::new(file).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let record: GenRecord = serde_json::from_str(&line).map_err(|e| {
                    Error::Parse {
                        file: path.display().to_string(),
                        line: lineno + 1,
                        message: e.to_string(),
                    }
                })?;
                inner.records.insert(record.key.clone(), record);
            }
        }
        Ok(GenerationStore {
            path,
            inner: Mutex::new(inner),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap().records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Appends one record to disk and memory.
    pub fn append(&self, record: GenRecord) -> Result<()> {
        let line = serde_json::to_string(&record)?;
        let mut inner = self.inner.lock().unwrap();
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        writeln!(file, "{line}")?;
        inner.records.insert(record.key.clone(), record);
        Ok(())
    }

    /// Re-appends a record with its execution verdict attached.
    pub fn set_pass_status(&self, key: &GenKey, passed: bool) -> Result<()> {
        let record = {
            let inner = self.inner.lock().unwrap();
            inner
                .records
                .get(key)
                .cloned()
                .ok_or_else(|| Error::CacheMiss(format!("{key:?}")))?
        };
        let mut updated = record;
        updated.pass_status = Some(passed);
        self.append(updated)
    }

    pub fn get(&self, key: &GenKey) -> Option<GenRecord> {
        self.inner.lock().unwrap().records.get(key).cloned()
    }

    /// Replay lookup: record must exist and its prompt hash must match the
    /// prompt being replayed.
    pub fn replay(&self, key: &GenKey, prompt_text: &str) -> Result<GenRecord> {
        let record = self
            .get(key)
            .ok_or_else(|| Error::CacheMiss(format!("{key:?}")))?;
        let expected = prompt_hash(prompt_text);
        if record.prompt_hash != expected {
            return Err(Error::PromptHashMismatch {
                stored: record.prompt_hash,
                requested: expected,
            });
        }
        Ok(record)
    }

    /// All records matching a key prefix, sorted by sample index.
    pub fn find(
        &self,
        id: &str,
        direction: &str,
        variant: &str,
        stage: Stage,
    ) -> Vec<GenRecord> {
        let inner = self.inner.lock().unwrap();
        let mut out: Vec<GenRecord> = inner
            .records
            .values()
            .filter(|r| {
                r.key.id == id
                    && r.key.direction == direction
                    && r.key.variant == variant
                    && r.key.stage == stage
            })
            .cloned()
            .collect();
        out.sort_by_key(|r| r.key.sample_index);
        out
    }

    /// Explanations stored for (id, source-language, variant) regardless of
    /// the target language of the direction they were generated under; the
    /// lowest (direction, sample_index) wins for determinism.
    pub fn find_explanations_any_target(
        &self,
        id: &str,
        source_language: &str,
        variant: &str,
    ) -> Vec<GenRecord> {
        let prefix = format!("{source_language}-");
        let inner = self.inner.lock().unwrap();
        let mut out: Vec<GenRecord> = inner
            .records
            .values()
            .filter(|r| {
                r.key.id == id
                    && r.key.stage == Stage::Explain
                    && r.key.variant == variant
                    && r.key.direction.starts_with(&prefix)
            })
            .cloned()
            .collect();
        out.sort_by(|a, b| {
            a.key
                .direction
                .cmp(&b.key.direction)
                .then(a.key.sample_index.cmp(&b.key.sample_index))
        });
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quality {
    Gold,
    Unk,
    Bad,
}

/// Deterministic draw from previously stored generations: Gold requires a
/// verified pass, Bad a verified failure, Unk accepts anything. Lowest sample
/// index among qualifying records wins.
pub fn draw_from_pool(
    store: &GenerationStore,
    id: &str,
    direction: &str,
    variant: &str,
    quality: Quality,
) -> Result<GenRecord> {
    let records = store.find(id, direction, variant, Stage::Translate);
    let qualifying = records.into_iter().find(|r| match quality {
        Quality::Gold => r.pass_status == Some(true),
        Quality::Bad => r.pass_status == Some(false),
        Quality::Unk => true,
    });
    qualifying.ok_or_else(|| Error::PoolEmpty {
        quality: format!("{quality:?}"),
        key: format!("{id} {direction} {variant}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn record(id: &str, idx: usize, stage: Stage, pass: Option<bool>) -> GenRecord {
        GenRecord {
            key: GenKey {
                id: id.to_string(),
                direction: "py-js".to_string(),
                variant: "direct".to_string(),
                stage,
                sample_index: idx,
            },
            prompt_hash: prompt_hash("prompt"),
            text: format!("body {idx}"),
            token_logprobs: None,
            finish_reason: "stop".to_string(),
            model: "test".to_string(),
            timestamp: "2026-01-01T00:00:00Z".to_string(),
            pass_status: pass,
        }
    }

    #[test]
    fn round_trip_and_replay() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("store.jsonl");
        let store = GenerationStore::open(&path).unwrap();
        let r = record("p1", 0, Stage::Translate, Some(true));
        store.append(r.clone()).unwrap();

        let reopened = GenerationStore::open(&path).unwrap();
        assert_eq!(reopened.len(), 1);
        let replayed = reopened.replay(&r.key, "prompt").unwrap();
        assert_eq!(replayed.text, "body 0");

        let miss = reopened.replay(&r.key, "different prompt");
        assert!(matches!(miss, Err(Error::PromptHashMismatch { .. })));

        let mut other_key = r.key.clone();
        other_key.sample_index = 99;
        assert!(matches!(
            reopened.replay(&other_key, "prompt"),
            Err(Error::CacheMiss(_))
        ));
    }

    #[test]
    fn pass_status_update_appends() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("store.jsonl");
        let store = GenerationStore::open(&path).unwrap();
        let r = record("p1", 0, Stage::Translate, None);
        store.append(r.clone()).unwrap();
        store.set_pass_status(&r.key, true).unwrap();

        let lines = std::fs::read_to_string(&path).unwrap();
        assert_eq!(lines.lines().count(), 2, "append-only: r + updated r");
        let reopened = GenerationStore::open(&path).unwrap();
        assert_eq!(reopened.get(&r.key).unwrap().pass_status, Some(true));
    }

    #[test]
    fn pool_draws_are_deterministic_and_quality_filtered() {
        let dir = tempdir().unwrap();
        let store = GenerationStore::open(dir.path().join("s.jsonl")).unwrap();
        store.append(record("p1", 2, Stage::Translate, Some(true))).unwrap();
        store.append(record("p1", 0, Stage::Translate, Some(false))).unwrap();
        store.append(record("p1", 1, Stage::Translate, Some(true))).unwrap();

        let gold = draw_from_pool(&store, "p1", "py-js", "direct", Quality::Gold).unwrap();
        assert_eq!(gold.key.sample_index, 1);
        let bad = draw_from_pool(&store, "p1", "py-js", "direct", Quality::Bad).unwrap();
        assert_eq!(bad.key.sample_index, 0);
        let unk = draw_from_pool(&store, "p1", "py-js", "direct", Quality::Unk).unwrap();
        assert_eq!(unk.key.sample_index, 0);
    }

    #[test]
    fn pool_empty_when_no_qualifying_record() {
        let dir = tempdir().unwrap();
        let store = GenerationStore::open(dir.path().join("s.jsonl")).unwrap();
        store.append(record("p1", 0, Stage::Translate, Some(true))).unwrap();
        let bad = draw_from_pool(&store, "p1", "py-js", "direct", Quality::Bad);
        assert!(matches!(bad, Err(Error::PoolEmpty { .. })));
        let missing = draw_from_pool(&store, "p2", "py-js", "direct", Quality::Unk);
        assert!(matches!(missing, Err(Error::PoolEmpty { .. })));
    }

    #[test]
    fn cross_target_explanation_lookup() {
        let dir = tempdir().unwrap();
        let store = GenerationStore::open(dir.path().join("s.jsonl")).unwrap();
        let mut r = record("p1", 0, Stage::Explain, None);
        r.key.direction = "py-jv".to_string();
        r.key.variant = "exp".to_string();
        store.append(r).unwrap();

        let found = store.find_explanations_any_target("p1", "py", "exp");
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].key.direction, "py-jv");
        assert!(store.find_explanations_any_target("p1", "js", "exp").is_empty());
    }

    #[test]
    fn prompt_hash_is_stable_sha256() {
        assert_eq!(
            prompt_hash(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
        assert_eq!(prompt_hash("abc").len(), 64);
    }
}
