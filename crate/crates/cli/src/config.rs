//! Run configuration: a JSON document plus command-line overrides.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tracelink_core::baselines::BaselineConfig;
use tracelink_core::{EncoderConfig, ProviderConfig, TemplateKind, TrainConfig, DEFAULT_SEEDS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Dataset directory in the canonical import format.
    pub dataset: Option<PathBuf>,
    pub out: PathBuf,
    pub templates: Vec<TemplateKind>,
    pub providers: Vec<ProviderConfig>,
    pub encoder: EncoderConfig,
    pub train: TrainConfig,
    pub seeds: Vec<u64>,
    pub baselines: BaselineConfig,
    /// Permute train and validation labels before training (negative control).
    pub shuffle_labels: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dataset: None,
            out: PathBuf::from("out"),
            templates: TemplateKind::ALL.to_vec(),
            providers: vec![ProviderConfig::mock()],
            encoder: EncoderConfig::default(),
            train: TrainConfig::default(),
            seeds: DEFAULT_SEEDS.to_vec(),
            baselines: BaselineConfig::default(),
            shuffle_labels: false,
        }
    }
}

/// Values given on the command line. Each one replaces the config value.
#[derive(Debug, Default, Clone, clap::Args)]
pub struct Overrides {
    /// Dataset directory (dataset.json, answers.tsv, artifact files).
    #[arg(long, global = true)]
    pub dataset: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Restrict the grid to these templates (repeatable).
    #[arg(long = "template", global = true)]
    pub templates: Vec<TemplateKind>,
    /// Restrict the grid to these provider names (repeatable).
    #[arg(long = "provider", global = true)]
    pub providers: Vec<String>,
    /// Comma-separated seed list.
    #[arg(long, global = true, value_delimiter = ',')]
    pub seeds: Vec<u64>,
    #[arg(long, global = true)]
    pub epochs: Option<usize>,
    #[arg(long, global = true)]
    pub learning_rate: Option<f64>,
    #[arg(long, global = true)]
    pub batch_size: Option<usize>,
    #[arg(long, global = true)]
    pub max_seq_len: Option<usize>,
    #[arg(long, global = true)]
    pub embed_dim: Option<usize>,
    /// Train on permuted labels (test labels are left intact).
    #[arg(long, global = true)]
    pub shuffle_labels: bool,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

impl RunConfig {
    /// Reads `config` (paths inside it are relative to its directory), then
    /// applies `ov` (paths relative to the working directory).
    pub fn load(config: Option<&Path>, ov: &Overrides) -> Result<Self> {
        let mut cfg = match config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
                let mut cfg: RunConfig =
                    serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
                let base = path.parent().unwrap_or(Path::new("."));
                cfg.dataset = cfg.dataset.map(|d| resolve(base, &d));
                cfg.out = resolve(base, &cfg.out);
                cfg
            }
            None => RunConfig::default(),
        };
        if let Some(d) = &ov.dataset {
            cfg.dataset = Some(d.clone());
        }
        if let Some(o) = &ov.out {
            cfg.out = o.clone();
        }
        if !ov.templates.is_empty() {
            cfg.templates = ov.templates.clone();
        }
        if !ov.providers.is_empty() {
            let mut kept = Vec::new();
            for name in &ov.providers {
                match cfg.providers.iter().find(|p| &p.name == name) {
                    Some(p) => kept.push(p.clone()),
                    None if name == "mock" => kept.push(ProviderConfig::mock()),
                    None => bail!("provider `{name}` is not defined in the config"),
                }
            }
            cfg.providers = kept;
        }
        if !ov.seeds.is_empty() {
            cfg.seeds = ov.seeds.clone();
        }
        if let Some(v) = ov.epochs {
            cfg.train.epochs = v;
        }
        if let Some(v) = ov.learning_rate {
            cfg.train.learning_rate = v;
        }
        if let Some(v) = ov.batch_size {
            cfg.train.batch_size = v;
        }
        if let Some(v) = ov.max_seq_len {
            cfg.encoder.max_seq_len = v;
        }
        if let Some(v) = ov.embed_dim {
            cfg.encoder.embed_dim = v;
        }
        cfg.shuffle_labels |= ov.shuffle_labels;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            bail!("seed list is empty");
        }
        let mut seen = HashSet::new();
        if let Some(dup) = self.seeds.iter().find(|s| !seen.insert(**s)) {
            bail!("seed {dup} is listed twice");
        }
        let mut names = HashSet::new();
        for p in &self.providers {
            p.validate()?;
            if !names.insert(p.name.as_str()) {
                bail!("provider `{}` is defined twice", p.name);
            }
        }
        let mut kinds = HashSet::new();
        if let Some(t) = self.templates.iter().find(|t| !kinds.insert(**t)) {
            bail!("template `{t}` is listed twice");
        }
        self.encoder.validate()?;
        self.train.validate()?;
        if let Some(d) = &self.dataset {
            if !d.is_dir() {
                bail!("dataset directory {} does not exist", d.display());
            }
        }
        Ok(())
    }

    pub fn dataset_dir(&self) -> Result<&Path> {
        self.dataset
            .as_deref()
            .context("no dataset given: set `dataset` in the config or pass --dataset")
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

/// A cell of the condition grid: the unaugmented control or one
/// provider/template combination.
#[derive(Debug, Clone, PartialEq)]
pub enum ConditionSpec {
    None,
    Augmented { provider: ProviderConfig, template: TemplateKind },
}

impl ConditionSpec {
    pub fn name(&self) -> String {
        match self {
            ConditionSpec::None => "none".to_string(),
            ConditionSpec::Augmented { provider, template } => format!("{}.{}", provider.name, template.slug()),
        }
    }

    /// Row label used in reports.
    pub fn label(&self) -> String {
        match self {
            ConditionSpec::None => "None".to_string(),
            ConditionSpec::Augmented { provider, template } => format!("{} / {}", provider.name, template.slug()),
        }
    }
}

impl RunConfig {
    /// `None` first, then providers in config order, templates in config order.
    pub fn conditions(&self) -> Vec<ConditionSpec> {
        let mut out = vec![ConditionSpec::None];
        for p in &self.providers {
            for t in &self.templates {
                out.push(ConditionSpec::Augmented {
                    provider: p.clone(),
                    template: *t,
                });
            }
        }
        out
    }
}
