//! Traceability datasets: artifacts, answer-set links, and their on-disk forms.
//!
//! Two formats are supported. [`ingest`] reads a dataset *directory*:
//!
//! ```text
//! dataset.json   {"name", "languages": [..], "artifacts": [{"id","kind","lang","file"}]}
//! nl/*.txt       one requirement per file
//! pl/*.java      one code unit per file
//! answers.tsv    source_id<TAB>target_id per line, `#` starts a comment line
//! ```
//!
//! [`save`] / [`load`] use a single self-contained JSON bundle with artifact
//! texts inlined, which is what the pipeline passes between stages.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::promptgen::TemplateKind;

pub const MANIFEST_FILE: &str = "dataset.json";
pub const ANSWERS_FILE: &str = "answers.tsv";
const BUNDLE_FORMAT: &str = "tracelink-dataset/1";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("missing manifest {0}")]
    MissingManifest(PathBuf),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: duplicate artifact id `{id}` (artifact entry {entry})")]
    DuplicateArtifact { path: PathBuf, id: String, entry: usize },
    #[error("{path}: artifact `{id}` has empty text")]
    EmptyArtifact { path: PathBuf, id: String },
    #[error("{path}:{line}: unknown artifact id `{id}`")]
    UnknownArtifact { path: PathBuf, line: usize, id: String },
    #[error("{path}:{line}: malformed answer row `{row}` (expected source_id<TAB>target_id)")]
    MalformedAnswer { path: PathBuf, line: usize, row: String },
    #[error("{path}:{line}: duplicate link {source_id} -> {target_id}")]
    DuplicateAnswer {
        path: PathBuf,
        line: usize,
        source_id: String,
        target_id: String,
    },
    #[error("invalid dataset: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArtifactKind {
    #[serde(rename = "NL")]
    Nl,
    #[serde(rename = "PL")]
    Pl,
}

impl std::fmt::Display for ArtifactKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ArtifactKind::Nl => "NL",
            ArtifactKind::Pl => "PL",
        })
    }
}

/// A requirement (NL) or code unit (PL).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub id: String,
    pub kind: ArtifactKind,
    pub lang: String,
    pub text: String,
}

impl Artifact {
    pub fn nl(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            kind: ArtifactKind::Nl,
            lang: "en".to_string(),
            text: text.into(),
        }
    }

    pub fn pl(id: impl Into<String>, lang: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            kind: ArtifactKind::Pl,
            lang: lang.into(),
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LinkLabel {
    Positive,
    Negative,
}

/// Where a link came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Provenance {
    Original,
    Generated { model: String, template: TemplateKind },
    SampledNegative { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLink {
    pub source_id: String,
    pub target_id: String,
    pub label: LinkLabel,
    pub provenance: Provenance,
}

impl TraceLink {
    pub fn original(source_id: impl Into<String>, target_id: impl Into<String>) -> Self {
        Self {
            source_id: source_id.into(),
            target_id: target_id.into(),
            label: LinkLabel::Positive,
            provenance: Provenance::Original,
        }
    }
}

/// A validated, immutable dataset. Construct through [`TraceDataset::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceDataset {
    name: String,
    languages: BTreeSet<String>,
    artifacts: BTreeMap<String, Artifact>,
    links: Vec<TraceLink>,
}

impl TraceDataset {
    pub fn new(
        name: impl Into<String>,
        languages: impl IntoIterator<Item = String>,
        artifacts: impl IntoIterator<Item = Artifact>,
        links: Vec<TraceLink>,
    ) -> Result<Self, CorpusError> {
        let languages: BTreeSet<String> = languages.into_iter().collect();
        let mut map = BTreeMap::new();
        for a in artifacts {
            if a.text.trim().is_empty() {
                return Err(CorpusError::Invalid(format!("artifact `{}` has empty text", a.id)));
            }
            if a.kind == ArtifactKind::Pl && !languages.contains(&a.lang) {
                return Err(CorpusError::Invalid(format!(
                    "artifact `{}` uses undeclared language `{}`",
                    a.id, a.lang
                )));
            }
            if let Some(prev) = map.insert(a.id.clone(), a) {
                return Err(CorpusError::Invalid(format!("duplicate artifact id `{}`", prev.id)));
            }
        }
        let ds = Self {
            name: name.into(),
            languages,
            artifacts: map,
            links,
        };
        ds.validate_links()?;
        Ok(ds)
    }

    fn validate_links(&self) -> Result<(), CorpusError> {
        let mut seen = HashSet::new();
        for link in &self.links {
            self.expect_kind(&link.source_id, ArtifactKind::Nl)?;
            self.expect_kind(&link.target_id, ArtifactKind::Pl)?;
            match (&link.provenance, link.label) {
                (Provenance::Original, LinkLabel::Negative) => {
                    return Err(CorpusError::Invalid(format!(
                        "original link {} -> {} must be positive",
                        link.source_id, link.target_id
                    )))
                }
                (Provenance::SampledNegative { .. }, LinkLabel::Positive) => {
                    return Err(CorpusError::Invalid(format!(
                        "sampled link {} -> {} must be negative",
                        link.source_id, link.target_id
                    )))
                }
                _ => {}
            }
            if !seen.insert((&link.source_id, &link.target_id, link.label)) {
                return Err(CorpusError::Invalid(format!(
                    "duplicate link {} -> {} ({:?})",
                    link.source_id, link.target_id, link.label
                )));
            }
        }
        Ok(())
    }

    fn expect_kind(&self, id: &str, kind: ArtifactKind) -> Result<(), CorpusError> {
        match self.artifacts.get(id) {
            None => Err(CorpusError::Invalid(format!("link references unknown artifact `{id}`"))),
            Some(a) if a.kind != kind => Err(CorpusError::Invalid(format!(
                "link endpoint `{id}` is {} but must be {kind}",
                a.kind
            ))),
            Some(_) => Ok(()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn languages(&self) -> &BTreeSet<String> {
        &self.languages
    }

    /// The dataset's programming language when exactly one is declared.
    pub fn single_language(&self) -> Option<&str> {
        if self.languages.len() == 1 {
            self.languages.iter().next().map(String::as_str)
        } else {
            None
        }
    }

    pub fn artifact(&self, id: &str) -> Option<&Artifact> {
        self.artifacts.get(id)
    }

    /// All artifacts in id order.
    pub fn artifacts(&self) -> impl Iterator<Item = &Artifact> {
        self.artifacts.values()
    }

    pub fn artifacts_of(&self, kind: ArtifactKind) -> impl Iterator<Item = &Artifact> {
        self.artifacts.values().filter(move |a| a.kind == kind)
    }

    pub fn count(&self, kind: ArtifactKind) -> usize {
        self.artifacts_of(kind).count()
    }

    pub fn links(&self) -> &[TraceLink] {
        &self.links
    }

    pub fn positive_links(&self) -> impl Iterator<Item = &TraceLink> {
        self.links.iter().filter(|l| l.label == LinkLabel::Positive)
    }

    /// Returns a new dataset with `artifacts` and `links` appended.
    /// The receiver is left untouched.
    pub fn extended(
        &self,
        artifacts: impl IntoIterator<Item = Artifact>,
        links: impl IntoIterator<Item = TraceLink>,
    ) -> Result<Self, CorpusError> {
        let mut all_links = self.links.clone();
        all_links.extend(links);
        Self::new(
            self.name.clone(),
            self.languages.iter().cloned(),
            self.artifacts.values().cloned().chain(artifacts),
            all_links,
        )
    }
}

#[derive(Deserialize)]
struct Manifest {
    name: String,
    languages: Vec<String>,
    artifacts: Vec<ManifestEntry>,
}

#[derive(Deserialize)]
struct ManifestEntry {
    id: String,
    kind: ArtifactKind,
    #[serde(default)]
    lang: Option<String>,
    file: PathBuf,
}

fn read_to_string(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn json_error(path: &Path, e: serde_json::Error) -> CorpusError {
    CorpusError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Reads a dataset directory in the canonical import format.
pub fn ingest(dir: &Path) -> Result<TraceDataset, CorpusError> {
    let manifest_path = dir.join(MANIFEST_FILE);
    if !manifest_path.is_file() {
        return Err(CorpusError::MissingManifest(manifest_path));
    }
    let manifest: Manifest = serde_json::from_str(&read_to_string(&manifest_path)?)
        .map_err(|e| json_error(&manifest_path, e))?;

    let mut ids = HashSet::new();
    let mut artifacts = Vec::with_capacity(manifest.artifacts.len());
    for (entry_no, entry) in manifest.artifacts.into_iter().enumerate() {
        if !ids.insert(entry.id.clone()) {
            return Err(CorpusError::DuplicateArtifact {
                path: manifest_path,
                id: entry.id,
                entry: entry_no + 1,
            });
        }
        let file = dir.join(&entry.file);
        let text = read_to_string(&file)?;
        let text = text.trim_end();
        if text.trim().is_empty() {
            return Err(CorpusError::EmptyArtifact { path: file, id: entry.id });
        }
        let lang = match entry.kind {
            ArtifactKind::Nl => entry.lang.unwrap_or_else(|| "en".to_string()),
            ArtifactKind::Pl => match entry.lang {
                Some(l) => l,
                None if manifest.languages.len() == 1 => manifest.languages[0].clone(),
                None => {
                    return Err(CorpusError::Invalid(format!(
                        "artifact `{}` needs a `lang` field",
                        entry.id
                    )))
                }
            },
        };
        artifacts.push(Artifact {
            id: entry.id,
            kind: entry.kind,
            lang,
            text: text.to_string(),
        });
    }

    let kinds: BTreeMap<&str, ArtifactKind> =
        artifacts.iter().map(|a| (a.id.as_str(), a.kind)).collect();
    let answers_path = dir.join(ANSWERS_FILE);
    let links = if answers_path.exists() {
        parse_answers(&answers_path, &read_to_string(&answers_path)?, &kinds)?
    } else {
        Vec::new()
    };

    TraceDataset::new(manifest.name, manifest.languages, artifacts, links)
}

fn parse_answers(
    path: &Path,
    content: &str,
    kinds: &BTreeMap<&str, ArtifactKind>,
) -> Result<Vec<TraceLink>, CorpusError> {
    let mut links = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in content.lines().enumerate() {
        let line = i + 1;
        let row = raw.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = row.split('\t').map(str::trim).collect();
        if fields.len() != 2 || fields.iter().any(|f| f.is_empty()) {
            return Err(CorpusError::MalformedAnswer {
                path: path.to_path_buf(),
                line,
                row: raw.to_string(),
            });
        }
        let (src, dst) = (fields[0], fields[1]);
        for (id, want) in [(src, ArtifactKind::Nl), (dst, ArtifactKind::Pl)] {
            match kinds.get(id) {
                None => {
                    return Err(CorpusError::UnknownArtifact {
                        path: path.to_path_buf(),
                        line,
                        id: id.to_string(),
                    })
                }
                Some(k) if *k != want => {
                    return Err(CorpusError::Invalid(format!(
                        "{}:{line}: `{id}` is {k} but must be {want}",
                        path.display()
                    )))
                }
                Some(_) => {}
            }
        }
        if !seen.insert((src.to_string(), dst.to_string())) {
            return Err(CorpusError::DuplicateAnswer {
                path: path.to_path_buf(),
                line,
                source_id: src.to_string(),
                target_id: dst.to_string(),
            });
        }
        links.push(TraceLink::original(src, dst));
    }
    Ok(links)
}

#[derive(Serialize, Deserialize)]
struct Bundle {
    format: String,
    name: String,
    languages: Vec<String>,
    artifacts: Vec<Artifact>,
    links: Vec<TraceLink>,
}

/// Serializes a dataset to its canonical JSON bundle.
pub fn to_json(ds: &TraceDataset) -> String {
    let bundle = Bundle {
        format: BUNDLE_FORMAT.to_string(),
        name: ds.name.clone(),
        languages: ds.languages.iter().cloned().collect(),
        artifacts: ds.artifacts.values().cloned().collect(),
        links: ds.links.clone(),
    };
    let mut s = serde_json::to_string_pretty(&bundle).expect("dataset serializes");
    s.push('\n');
    s
}

pub fn from_json(path: &Path, content: &str) -> Result<TraceDataset, CorpusError> {
    let bundle: Bundle = serde_json::from_str(content).map_err(|e| json_error(path, e))?;
    if bundle.format != BUNDLE_FORMAT {
        return Err(CorpusError::Parse {
            path: path.to_path_buf(),
            line: 1,
            column: 1,
            message: format!("unsupported format `{}`", bundle.format),
        });
    }
    TraceDataset::new(bundle.name, bundle.languages, bundle.artifacts, bundle.links)
}

pub fn save(ds: &TraceDataset, path: &Path) -> Result<(), CorpusError> {
    fs::write(path, to_json(ds)).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load(path: &Path) -> Result<TraceDataset, CorpusError> {
    from_json(path, &read_to_string(path)?)
}
