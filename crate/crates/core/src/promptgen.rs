//! Prompt templates for generating code from requirements and requirements
//! from code, in zero-shot and few-shot form.
//!
//! Template bodies live in `templates/*.txt` and are embedded at compile time.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Artifact, ArtifactKind, LinkLabel, Provenance, TraceDataset};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PromptError {
    #[error("{kind} needs a {expected} basis artifact but `{id}` is {found}")]
    KindMismatch {
        kind: TemplateKind,
        id: String,
        expected: ArtifactKind,
        found: ArtifactKind,
    },
    #[error("basis artifact `{0}` has empty text")]
    EmptyBasis(String),
    #[error("basis artifact `{0}` is part of the few-shot example pair")]
    BasisIsExample(String),
    #[error("{0} is a zero-shot template")]
    NotFewShot(TemplateKind),
    #[error("{0} is a few-shot template and needs an example pair")]
    MissingExample(TemplateKind),
    #[error("dataset has no positive original link to use as the few-shot example")]
    NoExamplePair,
    #[error("{0} -> {1} is not a positive original link")]
    NotAnExampleLink(String, String),
    #[error("unknown template `{0}`")]
    UnknownTemplate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TemplateKind {
    ZeroShotCode,
    ZeroShotRequirements,
    FewShotCode,
    FewShotRequirements,
}

impl TemplateKind {
    pub const ALL: [TemplateKind; 4] = [
        TemplateKind::ZeroShotCode,
        TemplateKind::ZeroShotRequirements,
        TemplateKind::FewShotCode,
        TemplateKind::FewShotRequirements,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            TemplateKind::ZeroShotCode => "zero-shot-code",
            TemplateKind::ZeroShotRequirements => "zero-shot-requirements",
            TemplateKind::FewShotCode => "few-shot-code",
            TemplateKind::FewShotRequirements => "few-shot-requirements",
        }
    }

    pub fn is_few_shot(self) -> bool {
        matches!(self, TemplateKind::FewShotCode | TemplateKind::FewShotRequirements)
    }

    /// True when the template asks the model to write code.
    pub fn generates_code(self) -> bool {
        matches!(self, TemplateKind::ZeroShotCode | TemplateKind::FewShotCode)
    }

    /// Kind of artifact the prompt is built from.
    pub fn basis_kind(self) -> ArtifactKind {
        if self.generates_code() {
            ArtifactKind::Nl
        } else {
            ArtifactKind::Pl
        }
    }

    pub fn template(self) -> &'static str {
        let raw = match self {
            TemplateKind::ZeroShotCode => include_str!("../templates/zero_shot_code.txt"),
            TemplateKind::ZeroShotRequirements => {
                include_str!("../templates/zero_shot_requirements.txt")
            }
            TemplateKind::FewShotCode => include_str!("../templates/few_shot_code.txt"),
            TemplateKind::FewShotRequirements => {
                include_str!("../templates/few_shot_requirements.txt")
            }
        };
        strip_template_header(raw)
    }
}

impl fmt::Display for TemplateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for TemplateKind {
    type Err = PromptError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TemplateKind::ALL
            .into_iter()
            .find(|k| k.slug() == s)
            .ok_or_else(|| PromptError::UnknownTemplate(s.to_string()))
    }
}

fn strip_template_header(raw: &'static str) -> &'static str {
    let mut rest = raw;
    while rest.starts_with("%%") {
        rest = match rest.find('\n') {
            Some(i) => &rest[i + 1..],
            None => "",
        };
    }
    rest.strip_suffix('\n').unwrap_or(rest)
}

/// A fully substituted prompt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptInstance {
    pub kind: TemplateKind,
    pub text: String,
    pub basis_artifact_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example_pair_id: Option<(String, String)>,
}

/// The fixed in-context example for few-shot prompts of one dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FewShotExample {
    pub nl: Artifact,
    pub pl: Artifact,
}

impl FewShotExample {
    /// Picks the positive original link with the lexicographically smallest
    /// `(source_id, target_id)`.
    pub fn select(ds: &TraceDataset) -> Result<Self, PromptError> {
        let link = ds
            .positive_links()
            .filter(|l| l.provenance == Provenance::Original)
            .min_by(|a, b| (&a.source_id, &a.target_id).cmp(&(&b.source_id, &b.target_id)))
            .ok_or(PromptError::NoExamplePair)?;
        Self::from_link(ds, &link.source_id, &link.target_id)
    }

    pub fn from_link(ds: &TraceDataset, source_id: &str, target_id: &str) -> Result<Self, PromptError> {
        let is_example = ds.links().iter().any(|l| {
            l.source_id == source_id
                && l.target_id == target_id
                && l.label == LinkLabel::Positive
                && l.provenance == Provenance::Original
        });
        let not_link = || PromptError::NotAnExampleLink(source_id.to_string(), target_id.to_string());
        if !is_example {
            return Err(not_link());
        }
        Ok(Self {
            nl: ds.artifact(source_id).ok_or_else(not_link)?.clone(),
            pl: ds.artifact(target_id).ok_or_else(not_link)?.clone(),
        })
    }

    pub fn pair_id(&self) -> (String, String) {
        (self.nl.id.clone(), self.pl.id.clone())
    }
}

/// Single-pass placeholder substitution: text inserted for one placeholder is
/// never scanned for further placeholders.
fn substitute<'a>(template: &str, lookup: impl Fn(&str) -> Option<&'a str>) -> String {
    let mut out = String::with_capacity(template.len() + 256);
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let tail = &rest[open..];
        match tail.find('}').and_then(|close| lookup(&tail[1..close]).map(|v| (close, v))) {
            Some((close, value)) => {
                out.push_str(value);
                rest = &tail[close + 1..];
            }
            None => {
                out.push('{');
                rest = &tail[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

fn check_basis(kind: TemplateKind, basis: &Artifact) -> Result<(), PromptError> {
    let expected = kind.basis_kind();
    if basis.kind != expected {
        return Err(PromptError::KindMismatch {
            kind,
            id: basis.id.clone(),
            expected,
            found: basis.kind,
        });
    }
    if basis.text.trim().is_empty() {
        return Err(PromptError::EmptyBasis(basis.id.clone()));
    }
    Ok(())
}

pub fn build_zero_shot(kind: TemplateKind, lang: &str, basis: &Artifact) -> Result<PromptInstance, PromptError> {
    if kind.is_few_shot() {
        return Err(PromptError::MissingExample(kind));
    }
    check_basis(kind, basis)?;
    let text = substitute(kind.template(), |name| match name {
        "lang" => Some(lang),
        "requirements" | "code" => Some(basis.text.as_str()),
        _ => None,
    });
    Ok(PromptInstance {
        kind,
        text,
        basis_artifact_id: basis.id.clone(),
        example_pair_id: None,
    })
}

pub fn build_few_shot(
    kind: TemplateKind,
    lang: &str,
    basis: &Artifact,
    example: &FewShotExample,
) -> Result<PromptInstance, PromptError> {
    if !kind.is_few_shot() {
        return Err(PromptError::NotFewShot(kind));
    }
    check_basis(kind, basis)?;
    if basis.id == example.nl.id || basis.id == example.pl.id {
        return Err(PromptError::BasisIsExample(basis.id.clone()));
    }
    let text = substitute(kind.template(), |name| match name {
        "lang" => Some(lang),
        "requirements" | "code" => Some(basis.text.as_str()),
        "example requirements" => Some(example.nl.text.as_str()),
        "example code" => Some(example.pl.text.as_str()),
        _ => None,
    });
    Ok(PromptInstance {
        kind,
        text,
        basis_artifact_id: basis.id.clone(),
        example_pair_id: Some(example.pair_id()),
    })
}

/// Dispatches on the template kind; `example` is required for few-shot kinds.
pub fn build(
    kind: TemplateKind,
    lang: &str,
    basis: &Artifact,
    example: Option<&FewShotExample>,
) -> Result<PromptInstance, PromptError> {
    if kind.is_few_shot() {
        let example = example.ok_or(PromptError::MissingExample(kind))?;
        build_few_shot(kind, lang, basis, example)
    } else {
        build_zero_shot(kind, lang, basis)
    }
}

/// Recovers the basis text from a rendered prompt of the given kind.
pub fn extract_basis(kind: TemplateKind, text: &str) -> Option<&str> {
    fn after<'a>(text: &'a str, marker: &str) -> Option<usize> {
        text.find(marker).map(|i| i + marker.len())
    }
    let (start, end) = match kind {
        TemplateKind::ZeroShotCode => (
            after(text, "code based on the following requirements.\n\n")?,
            text.rfind("\n\n# OBJECTIVE #")?,
        ),
        TemplateKind::ZeroShotRequirements => (
            after(text, "requirements from the following code.\n")?,
            text.rfind("\n\n# OBJECTIVE #")?,
        ),
        TemplateKind::FewShotCode | TemplateKind::FewShotRequirements => {
            let marker = "\n\n<<<\n\n";
            (
                text.rfind(marker)? + marker.len(),
                text.strip_suffix("\n\n>>>")?.len(),
            )
        }
    };
    text.get(start..end)
}

/// Recovers `{lang}` from a code-generating prompt.
pub fn extract_lang(text: &str) -> Option<&str> {
    let marker = "corresponding ";
    let start = text.find(marker)? + marker.len();
    let end = start + text[start..].find(" code based on the following")?;
    Some(&text[start..end])
}
