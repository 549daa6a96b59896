//! Where each stage reads and writes inside the output directory.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// A stage input is missing; names the command that produces it.
#[derive(Debug)]
pub struct MissingPrerequisite {
    pub path: PathBuf,
    pub command: &'static str,
}

impl fmt::Display for MissingPrerequisite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} not found; run `trace {}` first",
            self.path.display(),
            self.command
        )
    }
}

impl std::error::Error for MissingPrerequisite {}

#[derive(Debug, Clone)]
pub struct Layout {
    pub root: PathBuf,
}

impl Layout {
    pub fn new(root: &Path) -> Self {
        Self { root: root.to_path_buf() }
    }

    pub fn manifest(&self) -> PathBuf {
        self.root.join("manifest.json")
    }

    pub fn dataset(&self) -> PathBuf {
        self.root.join("dataset.json")
    }

    pub fn condition(&self, name: &str) -> PathBuf {
        self.root.join("conditions").join(name)
    }

    pub fn condition_dataset(&self, name: &str) -> PathBuf {
        self.condition(name).join("dataset.json")
    }

    pub fn generations(&self, name: &str) -> PathBuf {
        self.condition(name).join("generations.jsonl")
    }

    pub fn prompts(&self, name: &str) -> PathBuf {
        self.condition(name).join("prompts.jsonl")
    }

    pub fn augment_summary(&self, name: &str) -> PathBuf {
        self.condition(name).join("augment.json")
    }

    pub fn seed_dir(&self, name: &str, seed: u64) -> PathBuf {
        self.condition(name).join(format!("seed-{seed}"))
    }

    pub fn pairs(&self, name: &str, seed: u64) -> PathBuf {
        self.seed_dir(name, seed).join("pairs.jsonl")
    }

    pub fn splits(&self, name: &str, seed: u64) -> PathBuf {
        self.seed_dir(name, seed).join("splits.json")
    }

    pub fn model(&self, name: &str, seed: u64) -> PathBuf {
        self.seed_dir(name, seed).join("model.json")
    }

    pub fn epochs(&self, name: &str, seed: u64) -> PathBuf {
        self.seed_dir(name, seed).join("epochs.jsonl")
    }

    pub fn eval(&self, name: &str, seed: u64) -> PathBuf {
        self.seed_dir(name, seed).join("eval.json")
    }

    pub fn baselines(&self, name: &str, seed: u64) -> PathBuf {
        self.seed_dir(name, seed).join("baselines.json")
    }

    pub fn compare(&self) -> PathBuf {
        self.root.join("compare.json")
    }

    pub fn pvalues(&self) -> PathBuf {
        self.root.join("pvalues.csv")
    }

    pub fn summary(&self) -> PathBuf {
        self.root.join("summary.json")
    }

    pub fn report(&self) -> PathBuf {
        self.root.join("report.md")
    }
}

/// Fails with [`MissingPrerequisite`] when `path` does not exist.
pub fn require(path: &Path, command: &'static str) -> Result<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(MissingPrerequisite {
            path: path.to_path_buf(),
            command,
        }
        .into())
    }
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path, command: &'static str) -> Result<T> {
    require(path, command)?;
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
