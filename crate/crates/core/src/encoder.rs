//! Pair encoder: tokenize both sides, join them with `[SEP]`, truncate to the
//! maximum sequence length, embed and mean-pool into one feature vector.
//!
//! The trainable backend is an embedding bag. A remote backend can stand in
//! for a pre-trained encoder; its vectors are used as frozen features.

use std::collections::HashMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::ArtifactKind;
use crate::matrix::Matrix;

pub const PAD: u32 = 0;
pub const UNK: u32 = 1;
pub const SEP: u32 = 2;
pub const SEP_TOKEN: &str = "[SEP]";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncoderError {
    #[error("cannot encode an empty sequence")]
    EncodingEmpty,
    #[error("invalid encoder config: {0}")]
    Config(String),
    #[error("remote encoder {endpoint}: {message}")]
    Remote { endpoint: String, message: String },
    #[error("remote encoder returned {got} dimensions, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("token index {0} is outside the embedding matrix")]
    IndexOutOfRange(u32),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Backend {
    DeskTrainable,
    Remote { endpoint: String, dimension: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EncoderConfig {
    pub max_seq_len: usize,
    pub embed_dim: usize,
    pub backend: Backend,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        Self {
            max_seq_len: 512,
            embed_dim: 64,
            backend: Backend::DeskTrainable,
        }
    }
}

impl EncoderConfig {
    pub fn validate(&self) -> Result<(), EncoderError> {
        if self.max_seq_len < 8 {
            return Err(EncoderError::Config(format!(
                "max_seq_len must be >= 8, got {}",
                self.max_seq_len
            )));
        }
        if self.embed_dim < 2 {
            return Err(EncoderError::Config(format!(
                "embed_dim must be >= 2, got {}",
                self.embed_dim
            )));
        }
        if let Backend::Remote { dimension, .. } = self.backend {
            if dimension == 0 {
                return Err(EncoderError::Config("remote dimension must be >= 1".into()));
            }
        }
        Ok(())
    }

    /// Width of the pooled feature vector.
    pub fn feature_dim(&self) -> usize {
        match self.backend {
            Backend::DeskTrainable => self.embed_dim,
            Backend::Remote { dimension, .. } => dimension,
        }
    }

    pub fn label(&self) -> String {
        match &self.backend {
            Backend::DeskTrainable => format!("desk-{}", self.embed_dim),
            Backend::Remote { dimension, .. } => format!("remote-{dimension}"),
        }
    }
}

fn split_identifier(word: &str, out: &mut Vec<String>) {
    let chars: Vec<char> = word.chars().collect();
    let mut start = 0;
    for i in 1..chars.len() {
        let (prev, cur) = (chars[i - 1], chars[i]);
        let next_lower = chars.get(i + 1).is_some_and(|c| c.is_lowercase());
        let boundary = ((prev.is_lowercase() || prev.is_numeric()) && cur.is_uppercase())
            || (prev.is_uppercase() && cur.is_uppercase() && next_lower);
        if boundary {
            out.push(chars[start..i].iter().collect::<String>().to_lowercase());
            start = i;
        }
    }
    if start < chars.len() {
        out.push(chars[start..].iter().collect::<String>().to_lowercase());
    }
}

/// Lowercased alphanumeric runs. Code additionally splits camelCase and
/// snake_case identifiers.
pub fn tokenize(text: &str, kind: ArtifactKind) -> Vec<String> {
    let mut out = Vec::new();
    for word in text.split(|c: char| !c.is_alphanumeric()).filter(|w| !w.is_empty()) {
        match kind {
            ArtifactKind::Nl => out.push(word.to_lowercase()),
            ArtifactKind::Pl => split_identifier(word, &mut out),
        }
    }
    out
}

/// Token to index map with `PAD`, `UNK` and `SEP` reserved at 0, 1, 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
}

impl From<Vec<String>> for Vocabulary {
    fn from(tokens: Vec<String>) -> Self {
        let index = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32 + 3))
            .collect();
        Self { tokens, index }
    }
}

impl From<Vocabulary> for Vec<String> {
    fn from(v: Vocabulary) -> Self {
        v.tokens
    }
}

impl Vocabulary {
    /// Builds the vocabulary in first-seen order.
    pub fn build<'a, I, S>(docs: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = &'a String>,
    {
        let mut tokens = Vec::new();
        let mut index = HashMap::new();
        for doc in docs {
            for tok in doc {
                if !index.contains_key(tok) {
                    index.insert(tok.clone(), tokens.len() as u32 + 3);
                    tokens.push(tok.clone());
                }
            }
        }
        Self { tokens, index }
    }

    /// Number of rows an embedding matrix needs, reserved indices included.
    pub fn len(&self) -> usize {
        self.tokens.len() + 3
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn index_of(&self, token: &str) -> u32 {
        self.index.get(token).copied().unwrap_or(UNK)
    }

    pub fn token(&self, index: u32) -> Option<&str> {
        match index {
            PAD => Some("[PAD]"),
            UNK => Some("[UNK]"),
            SEP => Some(SEP_TOKEN),
            i => self.tokens.get(i as usize - 3).map(String::as_str),
        }
    }
}

/// `nl ++ [SEP] ++ pl`, mapped through the vocabulary and cut at
/// `max_seq_len` from the tail.
pub fn join_and_truncate(nl_tokens: &[String], pl_tokens: &[String], vocab: &Vocabulary, max_seq_len: usize) -> Vec<u32> {
    nl_tokens
        .iter()
        .map(|t| vocab.index_of(t))
        .chain(std::iter::once(SEP))
        .chain(pl_tokens.iter().map(|t| vocab.index_of(t)))
        .take(max_seq_len)
        .collect()
}

/// Mean of the embedding rows of all non-PAD positions.
pub fn encode(sequence: &[u32], embedding: &Matrix) -> Result<Vec<f64>, EncoderError> {
    let mut out = vec![0.0; embedding.cols];
    let mut count = 0usize;
    for &idx in sequence.iter().filter(|&&i| i != PAD) {
        if idx as usize >= embedding.rows {
            return Err(EncoderError::IndexOutOfRange(idx));
        }
        for (o, e) in out.iter_mut().zip(embedding.row(idx as usize)) {
            *o += e;
        }
        count += 1;
    }
    if count == 0 {
        return Err(EncoderError::EncodingEmpty);
    }
    let inv = 1.0 / count as f64;
    out.iter_mut().for_each(|o| *o *= inv);
    Ok(out)
}

/// Accumulates `d loss / d embedding` given `d loss / d feature`.
pub fn encode_backward(sequence: &[u32], grad_feature: &[f64], grad_embedding: &mut Matrix) {
    let count = sequence.iter().filter(|&&i| i != PAD).count();
    if count == 0 {
        return;
    }
    let inv = 1.0 / count as f64;
    for &idx in sequence.iter().filter(|&&i| i != PAD) {
        for (g, df) in grad_embedding.row_mut(idx as usize).iter_mut().zip(grad_feature) {
            *g += df * inv;
        }
    }
}

/// The text sent to a remote encoder: both token streams joined by `[SEP]`
/// and truncated exactly like the local sequence.
pub fn joined_text(nl_text: &str, pl_text: &str, max_seq_len: usize) -> String {
    let nl = tokenize(nl_text, ArtifactKind::Nl);
    let pl = tokenize(pl_text, ArtifactKind::Pl);
    nl.iter()
        .map(String::as_str)
        .chain(std::iter::once(SEP_TOKEN))
        .chain(pl.iter().map(String::as_str))
        .take(max_seq_len)
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize)]
struct EmbedRequest<'a> {
    text: &'a str,
}

#[derive(Deserialize)]
struct EmbedResponse {
    embedding: Vec<f64>,
}

/// Client for an embedding endpoint speaking `{"text"} -> {"embedding"}`.
pub struct RemoteEncoder {
    endpoint: String,
    dimension: usize,
    max_seq_len: usize,
    agent: ureq::Agent,
}

impl RemoteEncoder {
    pub fn new(cfg: &EncoderConfig) -> Result<Self, EncoderError> {
        cfg.validate()?;
        let Backend::Remote { endpoint, dimension } = &cfg.backend else {
            return Err(EncoderError::Config("backend is not remote".into()));
        };
        let agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(Duration::from_secs(60)))
            .build()
            .into();
        Ok(Self {
            endpoint: endpoint.clone(),
            dimension: *dimension,
            max_seq_len: cfg.max_seq_len,
            agent,
        })
    }

    pub fn encode(&self, nl_text: &str, pl_text: &str) -> Result<Vec<f64>, EncoderError> {
        let text = joined_text(nl_text, pl_text, self.max_seq_len);
        let remote = |message: String| EncoderError::Remote {
            endpoint: self.endpoint.clone(),
            message,
        };
        let mut resp = self
            .agent
            .post(&self.endpoint)
            .send_json(EmbedRequest { text: &text })
            .map_err(|e| remote(e.to_string()))?;
        let status = resp.status().as_u16();
        let body = resp.body_mut().read_to_string().map_err(|e| remote(e.to_string()))?;
        if !(200..300).contains(&status) {
            return Err(remote(format!("HTTP {status}: {}", body.trim())));
        }
        let parsed: EmbedResponse = serde_json::from_str(&body).map_err(|e| remote(e.to_string()))?;
        if parsed.embedding.len() != self.dimension {
            return Err(EncoderError::DimensionMismatch {
                expected: self.dimension,
                got: parsed.embedding.len(),
            });
        }
        Ok(parsed.embedding)
    }
}

pub fn encode_remote(nl_text: &str, pl_text: &str, cfg: &EncoderConfig) -> Result<Vec<f64>, EncoderError> {
    RemoteEncoder::new(cfg)?.encode(nl_text, pl_text)
}
