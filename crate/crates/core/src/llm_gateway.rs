//! Chat-completion providers.
//!
//! Real providers are reached through the OpenAI-compatible
//! `chat/completions` JSON shape. Only the model id and one user message are
//! sent, so every provider runs with its default sampling parameters. The mock
//! provider is a pure function of the prompt text and is what the tests and
//! offline runs use.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use chrono::{DateTime, Utc};
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::ArtifactKind;
use crate::encoder::tokenize;
use crate::promptgen::{extract_basis, extract_lang, PromptInstance};

pub const DEFAULT_AUTH_ENV: &str = "TRACE_LLM_API_KEY";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GatewayError {
    #[error("provider `{provider}`: environment variable {var} is not set")]
    MissingAuth { provider: String, var: String },
    #[error("provider `{provider}` rejected the request (HTTP {status}): {message}")]
    Provider {
        provider: String,
        status: u16,
        message: String,
    },
    #[error("provider `{provider}`: gave up after {attempts} attempts: {last}")]
    RetriesExhausted {
        provider: String,
        attempts: u32,
        last: String,
    },
    #[error("provider `{provider}`: malformed response: {message}")]
    Malformed { provider: String, message: String },
    #[error("invalid provider config: {0}")]
    Config(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    /// First backoff delay; doubles on every retry.
    pub backoff_base_secs: f64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_attempts: 5,
            backoff_base_secs: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ProviderKind {
    Mock {
        /// Prompts containing this string fail with a non-retryable error.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        fail_marker: Option<String>,
        /// Artificial latency, used to observe the in-flight window.
        #[serde(default)]
        latency_ms: u64,
    },
    OpenAiCompatible {
        endpoint: String,
        model: String,
        #[serde(default = "default_auth_env")]
        auth_env: String,
    },
}

fn default_auth_env() -> String {
    DEFAULT_AUTH_ENV.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderConfig {
    pub name: String,
    pub kind: ProviderKind,
    #[serde(default = "default_parallel")]
    pub max_parallel: usize,
    #[serde(default)]
    pub retry: RetryPolicy,
}

fn default_parallel() -> usize {
    4
}

impl ProviderConfig {
    pub fn mock() -> Self {
        Self {
            name: "mock".to_string(),
            kind: ProviderKind::Mock {
                fail_marker: None,
                latency_ms: 0,
            },
            max_parallel: default_parallel(),
            retry: RetryPolicy::default(),
        }
    }

    pub fn openai_compatible(name: &str, endpoint: &str, model: &str) -> Self {
        Self {
            name: name.to_string(),
            kind: ProviderKind::OpenAiCompatible {
                endpoint: endpoint.to_string(),
                model: model.to_string(),
                auth_env: default_auth_env(),
            },
            max_parallel: default_parallel(),
            retry: RetryPolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<(), GatewayError> {
        if self.name.trim().is_empty() {
            return Err(GatewayError::Config("provider name is empty".into()));
        }
        if self.max_parallel == 0 {
            return Err(GatewayError::Config("max_parallel must be at least 1".into()));
        }
        if self.retry.max_attempts == 0 {
            return Err(GatewayError::Config("retry.max_attempts must be at least 1".into()));
        }
        if !(self.retry.backoff_base_secs >= 0.0 && self.retry.backoff_base_secs.is_finite()) {
            return Err(GatewayError::Config("retry.backoff_base_secs must be >= 0".into()));
        }
        Ok(())
    }
}

/// One raw generation, recorded before any cleaning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub request_id: String,
    pub prompt: PromptInstance,
    pub provider: String,
    pub raw_output: String,
    pub created_at: DateTime<Utc>,
    pub attempts: u32,
}

fn short_digest(input: &str, bytes: usize) -> String {
    let digest = Sha256::digest(input.as_bytes());
    hex::encode(&digest[..bytes])
}

fn request_id(provider: &str, prompt: &PromptInstance) -> String {
    format!(
        "{}-{}",
        provider,
        short_digest(&format!("{}\u{0}{}", prompt.kind, prompt.text), 8)
    )
}

/// Requests exactly one completion for `prompt`.
pub fn generate(cfg: &ProviderConfig, prompt: &PromptInstance) -> Result<GenerationRecord, GatewayError> {
    cfg.validate()?;
    let (raw_output, attempts) = match &cfg.kind {
        ProviderKind::Mock {
            fail_marker,
            latency_ms,
        } => {
            if *latency_ms > 0 {
                std::thread::sleep(Duration::from_millis(*latency_ms));
            }
            if let Some(marker) = fail_marker {
                if prompt.text.contains(marker.as_str()) {
                    return Err(GatewayError::Provider {
                        provider: cfg.name.clone(),
                        status: 400,
                        message: format!("mock failure injected by marker `{marker}`"),
                    });
                }
            }
            (mock_completion(prompt), 1)
        }
        ProviderKind::OpenAiCompatible {
            endpoint,
            model,
            auth_env,
        } => {
            let key = std::env::var(auth_env)
                .ok()
                .filter(|k| !k.is_empty())
                .ok_or_else(|| GatewayError::MissingAuth {
                    provider: cfg.name.clone(),
                    var: auth_env.clone(),
                })?;
            chat_completion(cfg, endpoint, model, &key, &prompt.text)?
        }
    };
    Ok(GenerationRecord {
        request_id: request_id(&cfg.name, prompt),
        prompt: prompt.clone(),
        provider: cfg.name.clone(),
        raw_output,
        created_at: Utc::now(),
        attempts,
    })
}

/// Deterministic stand-in for an LLM.
///
/// Code prompts get a fenced stub whose class name carries an 8-hex digest of
/// the basis tokens, wrapped in filler prose. Requirement prompts get a
/// preamble line plus one sentence listing the distinct identifiers of the
/// basis code.
pub fn mock_completion(prompt: &PromptInstance) -> String {
    let basis = extract_basis(prompt.kind, &prompt.text).unwrap_or(&prompt.text);
    if prompt.kind.generates_code() {
        let tokens = tokenize(basis, ArtifactKind::Nl);
        let joined = tokens.join(" ");
        let digest = short_digest(&joined, 4);
        let lang = extract_lang(&prompt.text).unwrap_or("text").to_lowercase();
        format!(
            "Here is the implementation you asked for:\n\
             ```{lang}\n\
             public class Generated{digest} {{\n    \
                 // {joined}\n    \
                 public void execute() {{\n    \
                 }}\n\
             }}\n\
             ```\n\
             This code follows the requirement above."
        )
    } else {
        let mut seen = std::collections::HashSet::new();
        let idents: Vec<&str> = identifier_tokens(basis)
            .filter(|t| seen.insert(*t))
            .collect();
        format!(
            "Sure! Here are the requirements:\nThe system shall support {}.",
            idents.join(", ")
        )
    }
}

fn identifier_tokens(code: &str) -> impl Iterator<Item = &str> {
    code.split(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .filter(|t| t.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_'))
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: [ChatMessage<'a>; 1],
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatResponseMessage,
}

#[derive(Deserialize)]
struct ChatResponseMessage {
    #[serde(default)]
    content: Option<String>,
}

enum Attempt {
    Done(String),
    Retry(String),
    Fatal(GatewayError),
}

fn chat_completion(
    cfg: &ProviderConfig,
    endpoint: &str,
    model: &str,
    key: &str,
    prompt: &str,
) -> Result<(String, u32), GatewayError> {
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .http_status_as_error(false)
        .timeout_global(Some(Duration::from_secs(300)))
        .build()
        .into();
    let body = ChatRequest {
        model,
        messages: [ChatMessage {
            role: "user",
            content: prompt,
        }],
    };

    let mut last = String::new();
    for attempt in 1..=cfg.retry.max_attempts {
        if attempt > 1 {
            std::thread::sleep(backoff(&cfg.retry, attempt - 1));
        }
        match chat_once(&agent, cfg, endpoint, key, &body) {
            Attempt::Done(text) => return Ok((text, attempt)),
            Attempt::Fatal(e) => return Err(e),
            Attempt::Retry(why) => last = why,
        }
    }
    Err(GatewayError::RetriesExhausted {
        provider: cfg.name.clone(),
        attempts: cfg.retry.max_attempts,
        last,
    })
}

fn chat_once(agent: &ureq::Agent, cfg: &ProviderConfig, endpoint: &str, key: &str, body: &ChatRequest) -> Attempt {
    let response = agent
        .post(endpoint)
        .header("Authorization", &format!("Bearer {key}"))
        .send_json(body);
    let mut response = match response {
        Ok(r) => r,
        Err(e) => return Attempt::Retry(format!("transport error: {e}")),
    };
    let status = response.status().as_u16();
    let text = match response.body_mut().read_to_string() {
        Ok(t) => t,
        Err(e) => return Attempt::Retry(format!("reading body: {e}")),
    };
    if status == 429 || status >= 500 {
        return Attempt::Retry(format!("HTTP {status}: {}", provider_message(&text)));
    }
    if !(200..300).contains(&status) {
        return Attempt::Fatal(GatewayError::Provider {
            provider: cfg.name.clone(),
            status,
            message: provider_message(&text),
        });
    }
    let malformed = |message: String| {
        Attempt::Fatal(GatewayError::Malformed {
            provider: cfg.name.clone(),
            message,
        })
    };
    match serde_json::from_str::<ChatResponse>(&text) {
        Ok(parsed) => match parsed.choices.into_iter().next().and_then(|c| c.message.content) {
            Some(content) => Attempt::Done(content),
            None => malformed("no message content in choices".into()),
        },
        Err(e) => malformed(e.to_string()),
    }
}

/// Pulls `error.message` out of an error body when present.
fn provider_message(body: &str) -> String {
    serde_json::from_str::<serde_json::Value>(body)
        .ok()
        .and_then(|v| v.pointer("/error/message").and_then(|m| m.as_str()).map(str::to_string))
        .unwrap_or_else(|| body.trim().to_string())
}

/// Exponential backoff with full jitter on the upper half of the window.
fn backoff(policy: &RetryPolicy, retry: u32) -> Duration {
    let window = policy.backoff_base_secs * 2f64.powi(retry.saturating_sub(1) as i32);
    if window <= 0.0 {
        return Duration::ZERO;
    }
    let jitter: f64 = rand::thread_rng().gen_range(0.5..=1.0);
    Duration::from_secs_f64(window * jitter)
}

/// Outcome of a batch: successes in input order plus the failures.
#[derive(Debug, Default)]
pub struct BatchOutcome {
    pub records: Vec<GenerationRecord>,
    /// `(input index, error)` pairs, ordered by index.
    pub errors: Vec<(usize, GatewayError)>,
}

/// Runs `f` over `items` with at most `max_parallel` calls in flight and
/// returns the results in input order.
pub fn run_bounded<T, R, F>(items: &[T], max_parallel: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = max_parallel.max(1).min(items.len());
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<R>>> = items.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                *slots[i].lock().unwrap() = Some(r);
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.into_inner().unwrap().expect("every slot is filled"))
        .collect()
}

pub fn generate_batch(cfg: &ProviderConfig, prompts: &[PromptInstance]) -> Result<BatchOutcome, GatewayError> {
    cfg.validate()?;
    if let ProviderKind::OpenAiCompatible { auth_env, .. } = &cfg.kind {
        if std::env::var(auth_env).map(|k| k.is_empty()).unwrap_or(true) {
            return Err(GatewayError::MissingAuth {
                provider: cfg.name.clone(),
                var: auth_env.clone(),
            });
        }
    }
    let results = run_bounded(prompts, cfg.max_parallel, |p| generate(cfg, p));
    let mut out = BatchOutcome::default();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(rec) => out.records.push(rec),
            Err(e) => out.errors.push((i, e)),
        }
    }
    Ok(out)
}

/// Append-only JSONL log of generations. Writes go through one lock so
/// concurrent producers never interleave lines.
pub struct GenerationLog {
    writer: Mutex<BufWriter<File>>,
}

impl GenerationLog {
    pub fn open(path: &Path) -> std::io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self {
            writer: Mutex::new(BufWriter::new(file)),
        })
    }

    pub fn append(&self, record: &GenerationRecord) -> std::io::Result<()> {
        let line = serde_json::to_string(record).map_err(std::io::Error::other)?;
        let mut w = self.writer.lock().unwrap();
        w.write_all(line.as_bytes())?;
        w.write_all(b"\n")?;
        w.flush()
    }

    pub fn read_all(path: &Path) -> std::io::Result<Vec<GenerationRecord>> {
        let content = std::fs::read_to_string(path)?;
        content
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).map_err(std::io::Error::other))
            .collect()
    }
}
