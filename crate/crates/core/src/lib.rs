//! Trace-link augmentation and evaluation toolkit.
//!
//! The crate covers the whole experiment pipeline for requirement-to-code
//! trace links:
//!
//! - [`corpus`]: datasets of natural-language and code artifacts plus their answer sets
//! - [`promptgen`]: zero-shot and few-shot prompt templates
//! - [`llm_gateway`]: chat-completion clients and a deterministic mock provider
//! - [`postprocess`]: cleaning of raw generations into code or requirement text
//! - [`dataset_ops`]: augmentation, negative sampling and ten-part splitting
//! - [`encoder`]: tokenization, `[SEP]` joining, truncation and mean pooling
//! - [`single_model`]: the pair classifier trained with cross-entropy and Adam
//! - [`baselines`]: VSM, LSI, LDA and KNN / logistic regression / linear SVM
//! - [`evalstats`]: confusion metrics and the Wilcoxon signed-rank test

pub mod baselines;
pub mod corpus;
pub mod dataset_ops;
pub mod encoder;
pub mod evalstats;
pub mod llm_gateway;
pub mod matrix;
pub mod postprocess;
pub mod promptgen;
pub mod single_model;

pub use corpus::{Artifact, ArtifactKind, LinkLabel, Provenance, TraceDataset, TraceLink};
pub use dataset_ops::{DatasetSplit, LabeledPair};
pub use encoder::{Backend, EncoderConfig, Vocabulary};
pub use evalstats::{EvalReport, Metrics, WilcoxonResult};
pub use llm_gateway::{GenerationRecord, ProviderConfig};
pub use matrix::Matrix;
pub use postprocess::{CleanedOutput, CleaningRules};
pub use promptgen::{PromptInstance, TemplateKind};
pub use single_model::{ModelParams, SingleModel, TrainConfig};

/// Seeds used for repeated runs unless a config says otherwise.
pub const DEFAULT_SEEDS: [u64; 5] = [2014, 2015, 2016, 2017, 2018];
