//! The single-encoder pair classifier.
//!
//! An `(nl, pl)` pair is encoded as one `[SEP]`-joined sequence, mean-pooled
//! into a feature vector and scored by an affine two-class head. Training
//! minimizes cross-entropy with Adam; the checkpoint with the best
//! validation F1 is kept.

use std::collections::HashMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::ArtifactKind;
use crate::dataset_ops::{DatasetSplit, LabeledPair};
use crate::encoder::{self, Backend, EncoderConfig, EncoderError, RemoteEncoder, Vocabulary};
use crate::evalstats::compute_metrics;
use crate::matrix::Matrix;

/// Step size suited to fine-tuning a large pre-trained encoder rather than
/// the small embedding bag trained by default.
pub const FINE_TUNE_LEARNING_RATE: f64 = 1e-5;
const CHECKPOINT_FORMAT: &str = "tracelink-model/1";
const INIT_RANGE: f64 = 0.05;

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("invalid training config: {0}")]
    Config(String),
    #[error(transparent)]
    Encoder(#[from] EncoderError),
    #[error("non-finite gradient in parameter `{0}`")]
    NonFiniteGradient(&'static str),
    #[error("training diverged at epoch {epoch}, batch {batch} (loss {loss})")]
    Divergence { epoch: usize, batch: usize, loss: f64 },
    #[error("the {0} split is empty")]
    EmptySplit(&'static str),
    #[error("checkpoint {path}: {message}")]
    Checkpoint { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-2,
            batch_size: 8,
            epochs: 20,
            seed: 2014,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), TrainError> {
        let bad = |m: &str| Err(TrainError::Config(m.to_string()));
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be > 0");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be >= 1");
        }
        if self.epochs == 0 {
            return bad("epochs must be >= 1");
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return bad("adam betas must lie in [0, 1)");
        }
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be > 0");
        }
        Ok(())
    }
}

/// Trainable parameters. The embedding is absent for frozen remote features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub embedding: Option<Matrix>,
    pub head_w: Matrix,
    pub head_b: [f64; 2],
}

impl ModelParams {
    pub fn zeros_like(&self) -> Self {
        Self {
            embedding: self.embedding.as_ref().map(|e| Matrix::zeros(e.rows, e.cols)),
            head_w: Matrix::zeros(self.head_w.rows, self.head_w.cols),
            head_b: [0.0; 2],
        }
    }

    fn tensors(&self) -> Vec<(&'static str, &[f64])> {
        let mut out = Vec::with_capacity(3);
        if let Some(e) = &self.embedding {
            out.push(("embedding", e.data.as_slice()));
        }
        out.push(("head_w", self.head_w.data.as_slice()));
        out.push(("head_b", self.head_b.as_slice()));
        out
    }

    fn tensors_mut(&mut self) -> Vec<(&'static str, &mut [f64])> {
        let mut out = Vec::with_capacity(3);
        if let Some(e) = &mut self.embedding {
            out.push(("embedding", e.data.as_mut_slice()));
        }
        out.push(("head_w", self.head_w.data.as_mut_slice()));
        out.push(("head_b", self.head_b.as_mut_slice()));
        out
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|(_, t)| t.iter().all(|v| v.is_finite()))
    }
}

/// Encoded model input.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    /// Token indices for the trainable embedding.
    Sequence(Vec<u32>),
    /// A frozen feature vector.
    Features(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub input: Input,
    pub label: u8,
}

pub fn head_logits(params: &ModelParams, feature: &[f64]) -> [f64; 2] {
    let wx = params.head_w.mul_vec(feature);
    [wx[0] + params.head_b[0], wx[1] + params.head_b[1]]
}

pub fn softmax(logits: [f64; 2]) -> [f64; 2] {
    let m = logits[0].max(logits[1]);
    let e0 = (logits[0] - m).exp();
    let e1 = (logits[1] - m).exp();
    let s = e0 + e1;
    [e0 / s, e1 / s]
}

/// `-ln softmax(logits)[label]` evaluated as `logsumexp - logit`.
pub fn cross_entropy(logits: [f64; 2], label: u8) -> f64 {
    let m = logits[0].max(logits[1]);
    let lse = m + ((logits[0] - m).exp() + (logits[1] - m).exp()).ln();
    lse - logits[label as usize]
}

/// `-ln probs[label]` for an already normalized distribution.
pub fn loss_from_probs(probs: [f64; 2], label: u8) -> f64 {
    -probs[label as usize].ln()
}

fn feature_of(params: &ModelParams, input: &Input) -> Result<Vec<f64>, EncoderError> {
    match input {
        Input::Sequence(seq) => {
            let emb = params
                .embedding
                .as_ref()
                .ok_or_else(|| EncoderError::Config("sequence input needs an embedding matrix".into()))?;
            encoder::encode(seq, emb)
        }
        Input::Features(f) => Ok(f.clone()),
    }
}

pub fn example_loss(params: &ModelParams, ex: &Example) -> Result<f64, EncoderError> {
    let f = feature_of(params, &ex.input)?;
    Ok(cross_entropy(head_logits(params, &f), ex.label))
}

/// Mean cross-entropy over `examples`.
pub fn mean_loss(params: &ModelParams, examples: &[Example]) -> Result<f64, EncoderError> {
    let mut total = 0.0;
    for ex in examples {
        total += example_loss(params, ex)?;
    }
    Ok(total / examples.len().max(1) as f64)
}

/// Mean loss over `batch` and its gradient with respect to every parameter.
pub fn batch_gradients(params: &ModelParams, batch: &[&Example]) -> Result<(f64, ModelParams), EncoderError> {
    let mut grads = params.zeros_like();
    let scale = 1.0 / batch.len().max(1) as f64;
    let mut total = 0.0;
    for ex in batch {
        let f = feature_of(params, &ex.input)?;
        let logits = head_logits(params, &f);
        total += cross_entropy(logits, ex.label);
        let p = softmax(logits);
        // d loss / d logits = p - onehot(label)
        let dl = [
            (p[0] - f64::from(ex.label == 0)) * scale,
            (p[1] - f64::from(ex.label == 1)) * scale,
        ];
        for (k, dk) in dl.iter().enumerate() {
            for (g, x) in grads.head_w.row_mut(k).iter_mut().zip(&f) {
                *g += dk * x;
            }
            grads.head_b[k] += dk;
        }
        if let (Input::Sequence(seq), Some(ge)) = (&ex.input, grads.embedding.as_mut()) {
            let df: Vec<f64> = (0..f.len())
                .map(|j| dl[0] * params.head_w.get(0, j) + dl[1] * params.head_w.get(1, j))
                .collect();
            encoder::encode_backward(seq, &df, ge);
        }
    }
    Ok((total * scale, grads))
}

/// One Adam update of a flat tensor; `t` is the 1-based step index.
#[allow(clippy::too_many_arguments)]
pub fn adam_update(theta: &mut [f64], grad: &[f64], m: &mut [f64], v: &mut [f64], lr: f64, beta1: f64, beta2: f64, eps: f64, t: u64) {
    let bc1 = 1.0 - beta1.powi(t as i32);
    let bc2 = 1.0 - beta2.powi(t as i32);
    for i in 0..theta.len() {
        let g = grad[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * g;
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
        let m_hat = m[i] / bc1;
        let v_hat = v[i] / bc2;
        theta[i] -= lr * m_hat / (v_hat.sqrt() + eps);
    }
}

/// First and second moment accumulators for every tensor of a [`ModelParams`].
#[derive(Debug, Clone)]
pub struct AdamState {
    m: ModelParams,
    v: ModelParams,
    t: u64,
}

impl AdamState {
    pub fn new(params: &ModelParams) -> Self {
        Self {
            m: params.zeros_like(),
            v: params.zeros_like(),
            t: 0,
        }
    }

    pub fn steps(&self) -> u64 {
        self.t
    }

    pub fn step(&mut self, params: &mut ModelParams, grads: &ModelParams, cfg: &TrainConfig) -> Result<(), TrainError> {
        for (name, g) in grads.tensors() {
            if g.iter().any(|x| !x.is_finite()) {
                return Err(TrainError::NonFiniteGradient(name));
            }
        }
        self.t += 1;
        let grads = grads.tensors();
        let ms = self.m.tensors_mut();
        let vs = self.v.tensors_mut();
        for ((((_, theta), (_, g)), (_, m)), (_, v)) in params.tensors_mut().into_iter().zip(grads).zip(ms).zip(vs) {
            adam_update(theta, g, m, v, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon, self.t);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochLog {
    pub epoch: usize,
    /// Mean of the per-batch losses seen while training this epoch.
    pub batch_loss: f64,
    /// Loss over the whole training split after the epoch.
    pub train_loss: f64,
    pub val_loss: f64,
    pub val_accuracy: f64,
    pub val_f1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Forward {
    pub logits: [f64; 2],
    pub probs: [f64; 2],
}

/// A trained (or freshly initialized) classifier with its encoder state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleModel {
    pub format: String,
    pub encoder: EncoderConfig,
    pub vocab: Option<Vocabulary>,
    pub params: ModelParams,
}

pub struct TrainOutcome {
    pub model: SingleModel,
    pub log: Vec<EpochLog>,
    /// 1-based epoch whose parameters were kept.
    pub best_epoch: usize,
    pub initial_train_loss: f64,
}

fn pair_tokens(pair: &LabeledPair) -> (Vec<String>, Vec<String>) {
    (
        encoder::tokenize(&pair.nl_text, ArtifactKind::Nl),
        encoder::tokenize(&pair.pl_text, ArtifactKind::Pl),
    )
}

/// Resolves pair texts into model inputs, memoizing remote lookups.
enum Featurizer {
    Desk { vocab: Vocabulary, max_seq_len: usize },
    Remote { client: RemoteEncoder, cache: HashMap<(String, String), Vec<f64>> },
}

impl Featurizer {
    fn for_model(model: &SingleModel) -> Result<Self, EncoderError> {
        match &model.encoder.backend {
            Backend::DeskTrainable => Ok(Featurizer::Desk {
                vocab: model
                    .vocab
                    .clone()
                    .ok_or_else(|| EncoderError::Config("desk model without vocabulary".into()))?,
                max_seq_len: model.encoder.max_seq_len,
            }),
            Backend::Remote { .. } => Ok(Featurizer::Remote {
                client: RemoteEncoder::new(&model.encoder)?,
                cache: HashMap::new(),
            }),
        }
    }

    fn input(&mut self, pair: &LabeledPair) -> Result<Input, EncoderError> {
        match self {
            Featurizer::Desk { vocab, max_seq_len } => {
                let (nl, pl) = pair_tokens(pair);
                Ok(Input::Sequence(encoder::join_and_truncate(&nl, &pl, vocab, *max_seq_len)))
            }
            Featurizer::Remote { client, cache } => {
                let key = (pair.nl_text.clone(), pair.pl_text.clone());
                if let Some(f) = cache.get(&key) {
                    return Ok(Input::Features(f.clone()));
                }
                let f = client.encode(&pair.nl_text, &pair.pl_text)?;
                cache.insert(key, f.clone());
                Ok(Input::Features(f))
            }
        }
    }

    fn examples(&mut self, pairs: &[LabeledPair]) -> Result<Vec<Example>, EncoderError> {
        pairs
            .iter()
            .map(|p| Ok(Example { input: self.input(p)?, label: p.label }))
            .collect()
    }
}

impl SingleModel {
    /// Fresh parameters: the vocabulary comes from the training split only and
    /// embeddings are drawn uniformly from `[-0.05, 0.05]`.
    pub fn initialize(train: &[LabeledPair], enc_cfg: &EncoderConfig, seed: u64) -> Result<Self, TrainError> {
        enc_cfg.validate()?;
        let dim = enc_cfg.feature_dim();
        let (vocab, embedding) = match enc_cfg.backend {
            Backend::DeskTrainable => {
                let token_lists: Vec<Vec<String>> = train
                    .iter()
                    .flat_map(|p| {
                        let (nl, pl) = pair_tokens(p);
                        [nl, pl]
                    })
                    .collect();
                let vocab = Vocabulary::build(token_lists.iter());
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(1);
                let emb = Matrix::from_fn(vocab.len(), dim, |_, _| rng.gen_range(-INIT_RANGE..=INIT_RANGE));
                (Some(vocab), Some(emb))
            }
            Backend::Remote { .. } => (None, None),
        };
        Ok(Self {
            format: CHECKPOINT_FORMAT.to_string(),
            encoder: enc_cfg.clone(),
            vocab,
            params: ModelParams {
                embedding,
                head_w: Matrix::zeros(2, dim),
                head_b: [0.0; 2],
            },
        })
    }

    pub fn input(&self, pair: &LabeledPair) -> Result<Input, EncoderError> {
        Featurizer::for_model(self)?.input(pair)
    }

    pub fn forward(&self, pair: &LabeledPair) -> Result<Forward, EncoderError> {
        let f = feature_of(&self.params, &self.input(pair)?)?;
        let logits = head_logits(&self.params, &f);
        Ok(Forward {
            logits,
            probs: softmax(logits),
        })
    }

    /// Label 1 only when its probability is strictly larger.
    pub fn predict(&self, pair: &LabeledPair) -> Result<u8, EncoderError> {
        Ok(predict_from_probs(self.forward(pair)?.probs))
    }

    pub fn predict_all(&self, pairs: &[LabeledPair]) -> Result<Vec<u8>, EncoderError> {
        let mut feat = Featurizer::for_model(self)?;
        pairs
            .iter()
            .map(|p| {
                let f = feature_of(&self.params, &feat.input(p)?)?;
                Ok(predict_from_probs(softmax(head_logits(&self.params, &f))))
            })
            .collect()
    }

    pub fn save(&self, path: &Path) -> Result<(), TrainError> {
        let json = serde_json::to_string(self).map_err(|e| TrainError::Checkpoint {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        std::fs::write(path, json).map_err(|e| TrainError::Checkpoint {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, TrainError> {
        let err = |message: String| TrainError::Checkpoint {
            path: path.display().to_string(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
        let model: SingleModel = serde_json::from_str(&text).map_err(|e| err(e.to_string()))?;
        if model.format != CHECKPOINT_FORMAT {
            return Err(err(format!("unsupported format `{}`", model.format)));
        }
        if !model.params.is_finite() {
            return Err(err("non-finite parameters".into()));
        }
        Ok(model)
    }
}

pub fn predict_from_probs(probs: [f64; 2]) -> u8 {
    u8::from(probs[1] > probs[0])
}

fn evaluate(params: &ModelParams, examples: &[Example]) -> Result<(f64, f64, f64), EncoderError> {
    let mut preds = Vec::with_capacity(examples.len());
    let mut labels = Vec::with_capacity(examples.len());
    let mut loss = 0.0;
    for ex in examples {
        let f = feature_of(params, &ex.input)?;
        let logits = head_logits(params, &f);
        loss += cross_entropy(logits, ex.label);
        preds.push(predict_from_probs(softmax(logits)));
        labels.push(ex.label);
    }
    let m = compute_metrics(&preds, &labels).expect("equal, non-empty lengths");
    Ok((loss / examples.len() as f64, m.metrics.accuracy, m.metrics.f1))
}

/// Trains on `split.train`, selecting the epoch with the highest validation
/// F1 (earliest on ties).
pub fn train(split: &DatasetSplit, cfg: &TrainConfig, enc_cfg: &EncoderConfig) -> Result<TrainOutcome, TrainError> {
    cfg.validate()?;
    if split.train.is_empty() {
        return Err(TrainError::EmptySplit("train"));
    }
    if split.val.is_empty() {
        return Err(TrainError::EmptySplit("validation"));
    }
    let mut model = SingleModel::initialize(&split.train, enc_cfg, cfg.seed)?;
    let mut feat = Featurizer::for_model(&model)?;
    let train_ex = feat.examples(&split.train)?;
    let val_ex = feat.examples(&split.val)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(2);
    let mut adam = AdamState::new(&model.params);
    let mut order: Vec<usize> = (0..train_ex.len()).collect();
    let initial_train_loss = mean_loss(&model.params, &train_ex)?;

    let mut log = Vec::with_capacity(cfg.epochs);
    let mut best: Option<(f64, usize, ModelParams)> = None;
    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut rng);
        let mut batch_losses = 0.0;
        let mut batches = 0usize;
        for (b, chunk) in order.chunks(cfg.batch_size).enumerate() {
            let batch: Vec<&Example> = chunk.iter().map(|&i| &train_ex[i]).collect();
            let (loss, grads) = batch_gradients(&model.params, &batch)?;
            if !loss.is_finite() {
                return Err(TrainError::Divergence { epoch, batch: b + 1, loss });
            }
            adam.step(&mut model.params, &grads, cfg)?;
            batch_losses += loss;
            batches += 1;
        }
        let train_loss = mean_loss(&model.params, &train_ex)?;
        if !train_loss.is_finite() || !model.params.is_finite() {
            return Err(TrainError::Divergence {
                epoch,
                batch: batches,
                loss: train_loss,
            });
        }
        let (val_loss, val_accuracy, val_f1) = evaluate(&model.params, &val_ex)?;
        log.push(EpochLog {
            epoch,
            batch_loss: batch_losses / batches as f64,
            train_loss,
            val_loss,
            val_accuracy,
            val_f1,
        });
        if best.as_ref().map_or(true, |(f1, _, _)| val_f1 > *f1) {
            best = Some((val_f1, epoch, model.params.clone()));
        }
    }
    let (_, best_epoch, params) = best.expect("at least one epoch");
    model.params = params;
    Ok(TrainOutcome {
        model,
        log,
        best_epoch,
        initial_train_loss,
    })
}

pub fn write_epoch_log(path: &Path, log: &[EpochLog]) -> std::io::Result<()> {
    let mut out = String::new();
    for e in log {
        out.push_str(&serde_json::to_string(e).map_err(std::io::Error::other)?);
        out.push('\n');
    }
    std::fs::write(path, out)
}
