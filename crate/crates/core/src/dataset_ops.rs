//! Augmentation, negative sampling and ten-part splitting.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Artifact, ArtifactKind, CorpusError, LinkLabel, Provenance, TraceDataset, TraceLink};
use crate::llm_gateway::{self, GatewayError, GenerationLog, GenerationRecord, ProviderConfig};
use crate::postprocess::{self, CleaningRules};
use crate::promptgen::{self, FewShotExample, PromptError, PromptInstance, TemplateKind};

#[derive(Debug, Error)]
pub enum DatasetOpsError {
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error("generation for `{basis_id}` failed: {source}")]
    Generation {
        basis_id: String,
        #[source]
        source: GatewayError,
    },
    #[error(transparent)]
    Gateway(#[from] GatewayError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("writing generation log: {0}")]
    Log(#[from] std::io::Error),
    #[error("augmentation with {kind} produced no usable artifacts ({candidates} candidates, {skipped} dropped by cleaning)")]
    AugmentationEmpty {
        kind: TemplateKind,
        candidates: usize,
        skipped: usize,
    },
    #[error("dataset `{0}` must declare exactly one programming language to augment")]
    AmbiguousLanguage(String),
    #[error("no negative candidate for `{0}`: it is linked to every code artifact")]
    NoNegativeCandidate(String),
    #[error("split needs at least 10 pairs, got {0}")]
    SplitTooSmall(usize),
}

/// A training-ready `(nl, pl, label)` example.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPair {
    pub nl_id: String,
    pub pl_id: String,
    pub nl_text: String,
    pub pl_text: String,
    /// 1 = linked, 0 = unlinked.
    pub label: u8,
    pub origin: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSplit {
    pub seed: u64,
    pub train: Vec<LabeledPair>,
    pub val: Vec<LabeledPair>,
    pub test: Vec<LabeledPair>,
}

impl DatasetSplit {
    pub fn len(&self) -> usize {
        self.train.len() + self.val.len() + self.test.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Counts reported after an augmentation run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentSummary {
    pub template: Option<TemplateKind>,
    pub provider: String,
    pub candidates: usize,
    pub generated: usize,
    pub skipped_cleaning: usize,
    pub example_pair_id: Option<(String, String)>,
}

#[derive(Debug)]
pub struct AugmentOutcome {
    pub dataset: TraceDataset,
    pub records: Vec<GenerationRecord>,
    pub prompts: Vec<PromptInstance>,
    pub summary: AugmentSummary,
}

#[derive(Default)]
pub struct AugmentOptions<'a> {
    pub log: Option<&'a GenerationLog>,
    pub cleaning: CleaningRules,
}

fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect()
}

pub fn generated_artifact_id(basis_id: &str, provider: &str, kind: TemplateKind) -> String {
    format!("{basis_id}~{}~{}", slug(provider), kind.slug())
}

/// Generates one new artifact per eligible basis artifact and links it to
/// its basis. The input dataset is not modified.
pub fn augment(
    ds: &TraceDataset,
    kind: TemplateKind,
    provider: &ProviderConfig,
    opts: &AugmentOptions<'_>,
) -> Result<AugmentOutcome, DatasetOpsError> {
    let lang = ds
        .single_language()
        .ok_or_else(|| DatasetOpsError::AmbiguousLanguage(ds.name().to_string()))?
        .to_string();
    let example = if kind.is_few_shot() {
        Some(FewShotExample::select(ds)?)
    } else {
        None
    };

    let excluded: Option<&str> = example.as_ref().map(|ex| match kind.basis_kind() {
        ArtifactKind::Nl => ex.nl.id.as_str(),
        ArtifactKind::Pl => ex.pl.id.as_str(),
    });
    let bases: Vec<&Artifact> = ds
        .artifacts_of(kind.basis_kind())
        .filter(|a| Some(a.id.as_str()) != excluded)
        .collect();
    let prompts = bases
        .iter()
        .map(|b| promptgen::build(kind, &lang, b, example.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;

    let batch = llm_gateway::generate_batch(provider, &prompts)?;
    if let Some(log) = opts.log {
        for rec in &batch.records {
            log.append(rec)?;
        }
    }
    if let Some((i, err)) = batch.errors.into_iter().next() {
        return Err(DatasetOpsError::Generation {
            basis_id: prompts[i].basis_artifact_id.clone(),
            source: err,
        });
    }

    let mut artifacts = Vec::new();
    let mut links = Vec::new();
    let mut skipped = 0;
    for rec in &batch.records {
        let basis_id = &rec.prompt.basis_artifact_id;
        let new_id = generated_artifact_id(basis_id, &provider.name, kind);
        let cleaned = if kind.generates_code() {
            postprocess::extract_code(&rec.raw_output)
        } else {
            postprocess::extract_requirement_with(&rec.raw_output, &opts.cleaning)
        };
        let Ok(cleaned) = cleaned else {
            skipped += 1;
            continue;
        };
        let provenance = Provenance::Generated {
            model: provider.name.clone(),
            template: kind,
        };
        let (artifact, link) = if kind.generates_code() {
            (
                Artifact::pl(new_id.clone(), lang.clone(), cleaned.text),
                TraceLink {
                    source_id: basis_id.clone(),
                    target_id: new_id,
                    label: LinkLabel::Positive,
                    provenance,
                },
            )
        } else {
            (
                Artifact::nl(new_id.clone(), cleaned.text),
                TraceLink {
                    source_id: new_id,
                    target_id: basis_id.clone(),
                    label: LinkLabel::Positive,
                    provenance,
                },
            )
        };
        artifacts.push(artifact);
        links.push(link);
    }

    if artifacts.is_empty() {
        return Err(DatasetOpsError::AugmentationEmpty {
            kind,
            candidates: prompts.len(),
            skipped,
        });
    }
    let summary = AugmentSummary {
        template: Some(kind),
        provider: provider.name.clone(),
        candidates: prompts.len(),
        generated: artifacts.len(),
        skipped_cleaning: skipped,
        example_pair_id: example.as_ref().map(FewShotExample::pair_id),
    };
    Ok(AugmentOutcome {
        dataset: ds.extended(artifacts, links)?,
        records: batch.records,
        prompts,
        summary,
    })
}

fn pair(ds: &TraceDataset, nl_id: &str, pl_id: &str, label: u8, origin: Provenance) -> LabeledPair {
    let text = |id: &str| ds.artifact(id).map(|a| a.text.clone()).unwrap_or_default();
    LabeledPair {
        nl_id: nl_id.to_string(),
        pl_id: pl_id.to_string(),
        nl_text: text(nl_id),
        pl_text: text(pl_id),
        label,
        origin,
    }
}

/// One negative per positive: the positive's code side is replaced by a code
/// artifact drawn uniformly from those not positively linked to the same
/// requirement. Positives and their negatives are interleaved in link order.
pub fn sample_negatives(ds: &TraceDataset, seed: u64) -> Result<Vec<LabeledPair>, DatasetOpsError> {
    let pls: Vec<&str> = ds.artifacts_of(ArtifactKind::Pl).map(|a| a.id.as_str()).collect();
    let mut linked: BTreeMap<&str, HashSet<&str>> = BTreeMap::new();
    let mut positives = Vec::new();
    let mut seen = HashSet::new();
    for l in ds.positive_links() {
        if seen.insert((l.source_id.as_str(), l.target_id.as_str())) {
            linked.entry(&l.source_id).or_default().insert(&l.target_id);
            positives.push(l);
        }
    }

    let mut candidates: HashMap<&str, Vec<&str>> = HashMap::new();
    for (nl, targets) in &linked {
        let c: Vec<&str> = pls.iter().copied().filter(|p| !targets.contains(p)).collect();
        if c.is_empty() {
            return Err(DatasetOpsError::NoNegativeCandidate(nl.to_string()));
        }
        candidates.insert(nl, c);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(positives.len() * 2);
    for l in positives {
        out.push(pair(ds, &l.source_id, &l.target_id, 1, l.provenance.clone()));
        let pick = candidates[l.source_id.as_str()]
            .choose(&mut rng)
            .expect("candidate list is non-empty");
        out.push(pair(ds, &l.source_id, pick, 0, Provenance::SampledNegative { seed }));
    }
    Ok(out)
}

/// Size of part `i` (0-based) when `n` items are cut into ten parts.
pub fn part_size(n: usize, i: usize) -> usize {
    n / 10 + usize::from(i < n % 10)
}

/// Seeded shuffle, then ten contiguous parts: 0..=7 train, 8 validation, 9 test.
pub fn split(pairs: &[LabeledPair], seed: u64) -> Result<DatasetSplit, DatasetOpsError> {
    let n = pairs.len();
    if n < 10 {
        return Err(DatasetOpsError::SplitTooSmall(n));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut parts: Vec<Vec<LabeledPair>> = Vec::with_capacity(10);
    let mut offset = 0;
    for i in 0..10 {
        let len = part_size(n, i);
        parts.push(order[offset..offset + len].iter().map(|&k| pairs[k].clone()).collect());
        offset += len;
    }
    let test = parts.pop().unwrap();
    let val = parts.pop().unwrap();
    Ok(DatasetSplit {
        seed,
        train: parts.into_iter().flatten().collect(),
        val,
        test,
    })
}

pub fn write_pairs_jsonl(path: &Path, pairs: &[LabeledPair]) -> std::io::Result<()> {
    let mut out = String::new();
    for p in pairs {
        out.push_str(&serde_json::to_string(p).map_err(std::io::Error::other)?);
        out.push('\n');
    }
    std::fs::write(path, out)
}

pub fn read_pairs_jsonl(path: &Path) -> std::io::Result<Vec<LabeledPair>> {
    std::fs::read_to_string(path)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(std::io::Error::other))
        .collect()
}
