//! Gateway to completion providers: a live OpenAI-compatible HTTP endpoint
//! with retries and bounded parallelism, and a deterministic replay mode that
//! serves completions from a [`GenerationStore`].

use crate::error::{Error, Result};
use crate::prompt::RenderedPrompt;
use crate::store::{GenKey, GenRecord, GenerationStore, prompt_hash};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::time::Duration;

pub const MAX_STOP_SEQUENCES: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub temperature: f64,
    pub top_p: f64,
    /// Samples per prompt.
    pub n: usize,
    pub max_tokens: usize,
    pub stop: Vec<String>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl Default for SamplingConfig {
    fn default() -> SamplingConfig {
        SamplingConfig {
            temperature: 0.2,
            top_p: 0.95,
            n: 20,
            max_tokens: 1024,
            stop: Vec::new(),
            seed: None,
        }
    }
}

impl SamplingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.temperature < 0.0 {
            return Err(Error::Config("temperature must be >= 0".into()));
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return Err(Error::Config("top_p must be in (0, 1]".into()));
        }
        if self.n == 0 || self.max_tokens == 0 {
            return Err(Error::Config("n and max_tokens must be positive".into()));
        }
        if self.stop.len() > MAX_STOP_SEQUENCES {
            return Err(Error::Config(format!(
                "at most {MAX_STOP_SEQUENCES} stop sequences supported, got {}",
                self.stop.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinishReason {
    Stop,
    Length,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionResult {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub token_logprobs: Option<Vec<(String, f64)>>,
    pub finish_reason: FinishReason,
}

/// Cuts the text at the earliest occurrence of any stop sequence. Providers
/// differ on whether the stop string is included, so this is always applied
/// locally as well.
pub fn enforce_stops(text: &str, stops: &[String]) -> String {
    let mut cut = text.len();
    for stop in stops {
        if stop.is_empty() {
            continue;
        }
        if let Some(pos) = text.find(stop.as_str()) {
            cut = cut.min(pos);
        }
    }
    text[..cut].to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointKind {
    Live,
    Replay,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndpointConfig {
    pub kind: EndpointKind,
    #[serde(default)]
    pub url: Option<String>,
    #[serde(default)]
    pub model: Option<String>,
    /// Name of the environment variable holding the API key.
    #[serde(default = "default_api_key_env")]
    pub api_key_env: String,
    #[serde(default = "default_max_parallel")]
    pub max_parallel: usize,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: usize,
}

fn default_api_key_env() -> String {
    "C2C_API_KEY".to_string()
}

fn default_max_parallel() -> usize {
    8
}

fn default_max_attempts() -> usize {
    5
}

pub const BACKOFF_BASE_S: f64 = 1.0;
pub const BACKOFF_CAP_S: f64 = 60.0;

/// Jittered exponential backoff delay before retry `attempt` (0-based).
pub fn backoff_delay(attempt: usize, rng: &mut impl Rng) -> Duration {
    let exp = BACKOFF_BASE_S * 2f64.powi(attempt as i32);
    let capped = exp.min(BACKOFF_CAP_S);
    let jittered = capped * rng.gen_range(0.5..1.0);
    Duration::from_secs_f64(jittered)
}

pub struct Gateway {
    config: EndpointConfig,
    client: Option<reqwest::blocking::Client>,
}

impl Gateway {
    pub fn new(config: EndpointConfig) -> Result<Gateway> {
        let client = match config.kind {
            EndpointKind::Live => {
                if config.url.is_none() || config.model.is_none() {
                    return Err(Error::Config(
                        "live endpoint requires url and model".into(),
                    ));
                }
                Some(
                    reqwest::blocking::Client::builder()
                        .timeout(Duration::from_secs(120))
                        .build()
                        .map_err(|e| Error::Config(e.to_string()))?,
                )
            }
            EndpointKind::Replay => None,
        };
        Ok(Gateway { config, client })
    }

    pub fn kind(&self) -> &EndpointKind {
        &self.config.kind
    }

    pub fn max_parallel(&self) -> usize {
        self.config.max_parallel.max(1)
    }

    pub fn model_name(&self) -> &str {
        self.config.model.as_deref().unwrap_or("replay")
    }

    /// Returns exactly cfg.n completions for the prompt. In replay mode every
    /// (key, sample index) must be present in the store with a matching
    /// prompt hash; in live mode missing samples are requested from the
    /// endpoint and appended to the store.
    pub fn complete(
        &self,
        prompt: &RenderedPrompt,
        cfg: &SamplingConfig,
        store: &GenerationStore,
        id: &str,
        direction: &str,
        variant: &str,
    ) -> Result<Vec<CompletionResult>> {
        cfg.validate()?;
        let mut results = Vec::with_capacity(cfg.n);
        for sample_index in 0..cfg.n {
            let key = GenKey {
                id: id.to_string(),
                direction: direction.to_string(),
                variant: variant.to_string(),
                stage: prompt.stage,
                sample_index,
            };
            let record = match store.replay(&key, &prompt.text) {
                Ok(r) => r,
                Err(Error::CacheMiss(msg)) => match self.config.kind {
                    EndpointKind::Replay => return Err(Error::CacheMiss(msg)),
                    EndpointKind::Live => {
                        let completion = self.request_with_retries(&prompt.text, cfg)?;
                        let record = GenRecord {
                            key: key.clone(),
                            prompt_hash: prompt_hash(&prompt.text),
                            text: completion.text.clone(),
                            token_logprobs: completion.token_logprobs.clone(),
                            finish_reason: match completion.finish_reason {
                                FinishReason::Stop => "stop",
                                FinishReason::Length => "length",
                                FinishReason::Error => "error",
                            }
                            .to_string(),
                            model: self.model_name().to_string(),
                            timestamp: now_utc(),
                            pass_status: None,
                        };
                        store.append(record.clone())?;
                        record
                    }
                },
                Err(e) => return Err(e),
            };
            let mut text = enforce_stops(&record.text, &cfg.stop);
            if let Some(prefix) = &prompt.continuation_prefix {
                if !text.starts_with(prefix.as_str()) {
                    text = format!("{prefix}{text}");
                }
            }
            results.push(CompletionResult {
                text,
                token_logprobs: record.token_logprobs.clone(),
                finish_reason: match record.finish_reason.as_str() {
                    "length" => FinishReason::Length,
                    "error" => FinishReason::Error,
                    _ => FinishReason::Stop,
                },
            });
        }
        Ok(results)
    }

    fn request_with_retries(
        &self,
        prompt_text: &str,
        cfg: &SamplingConfig,
    ) -> Result<CompletionResult> {
        let mut rng = rand::thread_rng();
        let mut last_error = String::new();
        for attempt in 0..self.config.max_attempts {
            if attempt > 0 {
                std::thread::sleep(backoff_delay(attempt - 1, &mut rng));
            }
            match self.request_once(prompt_text, cfg) {
                Ok(r) => return Ok(r),
                Err(e) => last_error = e.to_string(),
            }
        }
        Err(Error::Transport {
            attempts: self.config.max_attempts as u32,
            message: last_error,
        })
    }

    fn request_once(&self, prompt_text: &str, cfg: &SamplingConfig) -> Result<CompletionResult> {
        let client = self.client.as_ref().ok_or_else(|| {
            Error::Capability("replay endpoint cannot issue live requests".into())
        })?;
        let url = self.config.url.as_deref().unwrap();
        let api_key = std::env::var(&self.config.api_key_env).map_err(|_| {
            Error::Config(format!("missing API key env var {}", self.config.api_key_env))
        })?;
        let body = json!({
            "model": self.config.model,
            "prompt": prompt_text,
            "temperature": cfg.temperature,
            "top_p": cfg.top_p,
            "n": 1,
            "max_tokens": cfg.max_tokens,
            "stop": if cfg.stop.is_empty() { serde_json::Value::Null } else { json!(cfg.stop) },
        });
        let response = client
            .post(url)
            .bearer_auth(api_key)
            .json(&body)
            .send()
            .map_err(|e| Error::Transport {
                attempts: 1,
                message: e.to_string(),
            })?;
        let status = response.status();
        let payload: serde_json::Value = response.json().map_err(|e| Error::Transport {
            attempts: 1,
            message: e.to_string(),
        })?;
        if !status.is_success() {
            return Err(Error::Transport {
                attempts: 1,
                message: format!("HTTP {status}: {payload}"),
            });
        }
        let choice = payload["choices"]
            .get(0)
            .ok_or_else(|| Error::Transport {
                attempts: 1,
                message: format!("no choices in response: {payload}"),
            })?;
        let text = choice["text"].as_str().unwrap_or_default().to_string();
        let finish_reason = match choice["finish_reason"].as_str() {
            Some("length") => FinishReason::Length,
            Some("stop") => FinishReason::Stop,
            _ => FinishReason::Stop,
        };
        let token_logprobs = choice["logprobs"]["tokens"].as_array().and_then(|tokens| {
            let lps = choice["logprobs"]["token_logprobs"].as_array()?;
            Some(
                tokens
                    .iter()
                    .zip(lps)
                    .map(|(t, lp)| {
                        (
                            t.as_str().unwrap_or_default().to_string(),
                            lp.as_f64().unwrap_or(f64::NEG_INFINITY),
                        )
                    })
                    .collect::<Vec<_>>(),
            )
        });
        Ok(CompletionResult {
            text,
            token_logprobs,
            finish_reason,
        })
    }

    /// Scores a forced continuation: total logprob over continuation tokens
    /// and the continuation token count. Requires an echo/logprob-capable
    /// endpoint.
    pub fn score_logprob(&self, context: &str, continuation: &str) -> Result<(f64, usize)> {
        if continuation.is_empty() {
            return Err(Error::Contract("cannot score an empty continuation".into()));
        }
        match self.config.kind {
            EndpointKind::Replay => Err(Error::Capability(
                "replay endpoint does not support logprob scoring".into(),
            )),
            EndpointKind::Live => {
                let client = self.client.as_ref().unwrap();
                let url = self.config.url.as_deref().unwrap();
                let api_key = std::env::var(&self.config.api_key_env).map_err(|_| {
                    Error::Config(format!(
                        "missing API key env var {}",
                        self.config.api_key_env
                    ))
                })?;
                let full = format!("{context}{continuation}");
                let body = json!({
                    "model": self.config.model,
                    "prompt": full,
                    "max_tokens": 0,
                    "echo": true,
                    "logprobs": 0,
                });
                let payload: serde_json::Value = client
                    .post(url)
                    .bearer_auth(api_key)
                    .json(&body)
                    .send()
                    .and_then(|r| r.json())
                    .map_err(|e| Error::Transport {
                        attempts: 1,
                        message: e.to_string(),
                    })?;
                let logprobs = &payload["choices"][0]["logprobs"];
                let offsets = logprobs["text_offset"].as_array().ok_or_else(|| {
                    Error::Capability("endpoint does not return text offsets".into())
                })?;
                let token_lps = logprobs["token_logprobs"].as_array().ok_or_else(|| {
                    Error::Capability("endpoint does not return token logprobs".into())
                })?;
                let boundary = context.len();
                let mut total = 0.0;
                let mut count = 0usize;
                for (off, lp) in offsets.iter().zip(token_lps) {
                    let off = off.as_u64().unwrap_or(0) as usize;
                    if off >= boundary {
                        total += lp.as_f64().unwrap_or(0.0);
                        count += 1;
                    }
                }
                if count == 0 {
                    return Err(Error::Contract(
                        "no continuation tokens were scored".into(),
                    ));
                }
                Ok((total, count))
            }
        }
    }
}

fn now_utc() -> String {
    // seconds since the epoch; good enough for provenance metadata
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("epoch:{secs}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::{GenKey, GenRecord, Stage};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use tempfile::tempdir;

    #[test]
    fn defaults_match_evaluation_protocol() {
        let cfg = SamplingConfig::default();
        assert_eq!(cfg.temperature, 0.2);
        assert_eq!(cfg.top_p, 0.95);
        assert_eq!(cfg.n, 20);
        cfg.validate().unwrap();
    }

    #[test]
    fn stop_list_bounded() {
        let cfg = SamplingConfig {
            stop: vec!["a".into(), "b".into(), "c".into(), "d".into(), "e".into()],
            ..SamplingConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn local_stop_enforcement() {
        let stops = vec!["\n#".to_string(), "\n```".to_string()];
        assert_eq!(
            enforce_stops("returns 1.\n### R version", &stops),
            "returns 1."
        );
        assert_eq!(enforce_stops("no stops here", &stops), "no stops here");
        assert_eq!(enforce_stops("", &stops), "");
    }

    #[test]
    fn backoff_grows_and_caps() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d0 = backoff_delay(0, &mut rng);
        assert!(d0 >= Duration::from_millis(500) && d0 <= Duration::from_secs(1));
        let d10 = backoff_delay(10, &mut rng);
        assert!(d10 <= Duration::from_secs(60));
        assert!(d10 >= Duration::from_secs(30));
    }

    fn seeded_store(dir: &std::path::Path, prompt: &RenderedPrompt, n: usize) -> GenerationStore {
        let store = GenerationStore::open(dir.join("s.jsonl")).unwrap();
        for i in 0..n {
            store
                .append(GenRecord {
                    key: GenKey {
                        id: "p1".to_string(),
                        direction: "py-js".to_string(),
                        variant: "direct".to_string(),
                        stage: Stage::Translate,
                        sample_index: i,
                    },
                    prompt_hash: prompt_hash(&prompt.text),
                    text: format!("    return {i};\n}}\nconsole.log(1)"),
                    token_logprobs: None,
                    finish_reason: "stop".to_string(),
                    model: "test".to_string(),
                    timestamp: "t".to_string(),
                    pass_status: None,
                })
                .unwrap();
        }
        store
    }

    #[test]
    fn replay_returns_exactly_n_and_is_deterministic() {
        let dir = tempdir().unwrap();
        let prompt = RenderedPrompt {
            text: "PROMPT".to_string(),
            stop_sequences: vec![],
            stage: Stage::Translate,
            continuation_prefix: None,
        };
        let store = seeded_store(dir.path(), &prompt, 3);
        let gw = Gateway::new(EndpointConfig {
            kind: EndpointKind::Replay,
            url: None,
            model: None,
            api_key_env: default_api_key_env(),
            max_parallel: 8,
            max_attempts: 5,
        })
        .unwrap();
        let cfg = SamplingConfig { n: 3, ..SamplingConfig::default() };
        let a = gw.complete(&prompt, &cfg, &store, "p1", "py-js", "direct").unwrap();
        let b = gw.complete(&prompt, &cfg, &store, "p1", "py-js", "direct").unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a, b);

        // a missing sample index is a cache miss, not a silent short read
        let cfg4 = SamplingConfig { n: 4, ..SamplingConfig::default() };
        assert!(matches!(
            gw.complete(&prompt, &cfg4, &store, "p1", "py-js", "direct"),
            Err(Error::CacheMiss(_))
        ));
    }

    #[test]
    fn replay_applies_local_stops_and_prefix() {
        let dir = tempdir().unwrap();
        let prompt = RenderedPrompt {
            text: "PROMPT".to_string(),
            stop_sequences: vec![],
            stage: Stage::Translate,
            continuation_prefix: Some("This".to_string()),
        };
        let store = seeded_store(dir.path(), &prompt, 1);
        let gw = Gateway::new(EndpointConfig {
            kind: EndpointKind::Replay,
            url: None,
            model: None,
            api_key_env: default_api_key_env(),
            max_parallel: 8,
            max_attempts: 5,
        })
        .unwrap();
        let cfg = SamplingConfig {
            n: 1,
            stop: vec!["\nconsole.log".to_string()],
            ..SamplingConfig::default()
        };
        let out = gw.complete(&prompt, &cfg, &store, "p1", "py-js", "direct").unwrap();
        assert_eq!(out[0].text, "This    return 0;\n}");
    }

    #[test]
    fn live_endpoint_requires_url_and_model() {
        let bad = Gateway::new(EndpointConfig {
            kind: EndpointKind::Live,
            url: None,
            model: None,
            api_key_env: default_api_key_env(),
            max_parallel: 8,
            max_attempts: 5,
        });
        assert!(bad.is_err());
    }

    #[test]
    fn scoring_unsupported_on_replay() {
        let gw = Gateway::new(EndpointConfig {
            kind: EndpointKind::Replay,
            url: None,
            model: None,
            api_key_env: default_api_key_env(),
            max_parallel: 8,
            max_attempts: 5,
        })
        .unwrap();
        assert!(matches!(
            gw.score_logprob("ctx", "cont"),
            Err(Error::Capability(_))
        ));
        assert!(matches!(
            gw.score_logprob("ctx", ""),
            Err(Error::Contract(_))
        ));
    }
}
