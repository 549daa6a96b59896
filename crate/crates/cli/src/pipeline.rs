//! The individual pipeline stages. Each reads the previous stage's files
//! from the output directory and writes its own.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use tracelink_core::baselines::{self, BaselineOutput};
use tracelink_core::dataset_ops::{self, AugmentOptions};
use tracelink_core::evalstats::{self, Condition, EvalReport, MetricName, WilcoxonMethod};
use tracelink_core::llm_gateway::GenerationLog;
use tracelink_core::single_model::{self, SingleModel};
use tracelink_core::{corpus, DatasetSplit, TraceDataset};

use crate::config::{ConditionSpec, RunConfig};
use crate::layout::{read_json, require, write_json, Layout};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config_hash: String,
    pub seeds: Vec<u64>,
    pub config: RunConfig,
    /// Commands that have completed against this directory, in first-run order.
    pub stages: Vec<String>,
}

/// The output directory was produced by a different configuration.
#[derive(Debug)]
pub struct ConfigMismatch {
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ConfigMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "output directory was created with config {} but the current config hashes to {}; use a fresh --out",
            self.found, self.expected
        )
    }
}

impl std::error::Error for ConfigMismatch {}

pub struct Pipeline {
    pub cfg: RunConfig,
    pub layout: Layout,
}

impl Pipeline {
    pub fn new(cfg: RunConfig) -> Self {
        let layout = Layout::new(&cfg.out);
        Self { cfg, layout }
    }

    /// Checks the stored manifest against the current config and records `stage`.
    pub fn record_stage(&self, stage: &str) -> Result<()> {
        let path = self.layout.manifest();
        let hash = self.cfg.hash();
        let mut manifest = if path.exists() {
            let m: Manifest = read_json(&path, "ingest")?;
            if m.config_hash != hash {
                return Err(ConfigMismatch {
                    expected: hash,
                    found: m.config_hash,
                }
                .into());
            }
            m
        } else {
            Manifest {
                tool: "trace".to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                config_hash: hash,
                seeds: self.cfg.seeds.clone(),
                config: self.cfg.clone(),
                stages: Vec::new(),
            }
        };
        if !manifest.stages.iter().any(|s| s == stage) {
            manifest.stages.push(stage.to_string());
        }
        write_json(&path, &manifest)
    }

    /// Fails early on a manifest written by another config.
    pub fn check_manifest(&self) -> Result<()> {
        let path = self.layout.manifest();
        if path.exists() {
            let m: Manifest = read_json(&path, "ingest")?;
            if m.config_hash != self.cfg.hash() {
                return Err(ConfigMismatch {
                    expected: self.cfg.hash(),
                    found: m.config_hash,
                }
                .into());
            }
        }
        Ok(())
    }

    fn load_dataset(&self, path: &Path, command: &'static str) -> Result<TraceDataset> {
        require(path, command)?;
        Ok(corpus::load(path)?)
    }

    pub fn ingest(&self) -> Result<()> {
        let dir = self.cfg.dataset_dir()?;
        let ds = corpus::ingest(dir)?;
        std::fs::create_dir_all(&self.layout.root)?;
        corpus::save(&ds, &self.layout.dataset())?;
        println!(
            "ingest {}: {} NL, {} PL, {} links",
            ds.name(),
            ds.count(tracelink_core::ArtifactKind::Nl),
            ds.count(tracelink_core::ArtifactKind::Pl),
            ds.links().len()
        );
        Ok(())
    }

    pub fn augment(&self, dump_prompts: bool) -> Result<()> {
        let ds = self.load_dataset(&self.layout.dataset(), "ingest")?;
        for cond in self.cfg.conditions() {
            let name = cond.name();
            std::fs::create_dir_all(self.layout.condition(&name))?;
            let ConditionSpec::Augmented { provider, template } = &cond else {
                corpus::save(&ds, &self.layout.condition_dataset(&name))?;
                println!("augment {name}: control, {} links", ds.links().len());
                continue;
            };
            let log_path = self.layout.generations(&name);
            if log_path.exists() {
                std::fs::remove_file(&log_path)?;
            }
            let log = GenerationLog::open(&log_path)?;
            let opts = AugmentOptions {
                log: Some(&log),
                ..Default::default()
            };
            let out = dataset_ops::augment(&ds, *template, provider, &opts)
                .with_context(|| format!("augmenting condition {name}"))?;
            if dump_prompts {
                let mut text = String::new();
                for p in &out.prompts {
                    text.push_str(&serde_json::to_string(p)?);
                    text.push('\n');
                }
                std::fs::write(self.layout.prompts(&name), text)?;
            }
            corpus::save(&out.dataset, &self.layout.condition_dataset(&name))?;
            write_json(&self.layout.augment_summary(&name), &out.summary)?;
            println!(
                "augment {name}: {} generated, {} dropped by cleaning",
                out.summary.generated, out.summary.skipped_cleaning
            );
        }
        Ok(())
    }

    pub fn sample(&self) -> Result<()> {
        for cond in self.cfg.conditions() {
            let name = cond.name();
            let ds = self.load_dataset(&self.layout.condition_dataset(&name), "augment")?;
            for &seed in &self.cfg.seeds {
                let pairs = dataset_ops::sample_negatives(&ds, seed)?;
                let path = self.layout.pairs(&name, seed);
                std::fs::create_dir_all(path.parent().unwrap())?;
                dataset_ops::write_pairs_jsonl(&path, &pairs)?;
            }
            println!("sample {name}: {} seeds", self.cfg.seeds.len());
        }
        Ok(())
    }

    pub fn split(&self) -> Result<()> {
        for cond in self.cfg.conditions() {
            let name = cond.name();
            for &seed in &self.cfg.seeds {
                let path = self.layout.pairs(&name, seed);
                require(&path, "sample")?;
                let pairs = dataset_ops::read_pairs_jsonl(&path)?;
                let split = dataset_ops::split(&pairs, seed)?;
                write_json(&self.layout.splits(&name, seed), &split)?;
                if seed == self.cfg.seeds[0] {
                    println!(
                        "split {name}: {}/{}/{}",
                        split.train.len(),
                        split.val.len(),
                        split.test.len()
                    );
                }
            }
        }
        Ok(())
    }

    fn load_split(&self, name: &str, seed: u64) -> Result<DatasetSplit> {
        read_json(&self.layout.splits(name, seed), "split")
    }

    pub fn train(&self) -> Result<()> {
        for cond in self.cfg.conditions() {
            let name = cond.name();
            for &seed in &self.cfg.seeds {
                let mut split = self.load_split(&name, seed)?;
                if self.cfg.shuffle_labels {
                    shuffle_labels(&mut split, seed);
                }
                let train_cfg = single_model::TrainConfig {
                    seed,
                    ..self.cfg.train.clone()
                };
                let out = single_model::train(&split, &train_cfg, &self.cfg.encoder)
                    .with_context(|| format!("training {name} seed {seed}"))?;
                out.model.save(&self.layout.model(&name, seed))?;
                single_model::write_epoch_log(&self.layout.epochs(&name, seed), &out.log)?;
                let best = &out.log[out.best_epoch - 1];
                println!(
                    "train {name} seed {seed}: best epoch {} (val acc {:.3}, val F1 {:.3})",
                    out.best_epoch, best.val_accuracy, best.val_f1
                );
            }
        }
        Ok(())
    }

    fn condition_meta(&self, cond: &ConditionSpec, seed: u64, method: &str) -> Result<Condition> {
        let ds_name = corpus::load(&self.layout.dataset())
            .map(|d| d.name().to_string())
            .unwrap_or_default();
        let (template, provider) = match cond {
            ConditionSpec::None => (None, None),
            ConditionSpec::Augmented { provider, template } => {
                (Some(template.slug().to_string()), Some(provider.name.clone()))
            }
        };
        Ok(Condition {
            dataset: ds_name,
            template,
            provider,
            encoder: self.cfg.encoder.label(),
            max_seq_len: self.cfg.encoder.max_seq_len,
            seed,
            method: method.to_string(),
        })
    }

    pub fn eval(&self) -> Result<()> {
        for cond in self.cfg.conditions() {
            let name = cond.name();
            for &seed in &self.cfg.seeds {
                let split = self.load_split(&name, seed)?;
                let model_path = self.layout.model(&name, seed);
                require(&model_path, "train")?;
                let model = SingleModel::load(&model_path)?;
                let preds = model.predict_all(&split.test)?;
                let labels: Vec<u8> = split.test.iter().map(|p| p.label).collect();
                let report = evalstats::compute_metrics(&preds, &labels)?
                    .with_condition(self.condition_meta(&cond, seed, "single")?);
                write_json(&self.layout.eval(&name, seed), &report)?;
                println!("eval {name} seed {seed}: F1 {:.4}", report.metrics.f1);
            }
        }
        Ok(())
    }

    pub fn baseline(&self) -> Result<()> {
        for cond in self.cfg.conditions() {
            let name = cond.name();
            for &seed in &self.cfg.seeds {
                let mut split = self.load_split(&name, seed)?;
                if self.cfg.shuffle_labels {
                    shuffle_labels(&mut split, seed);
                }
                let mut bcfg = self.cfg.baselines.clone();
                bcfg.lda.seed = seed;
                let outputs = baselines::run_baselines(&split, &bcfg)
                    .with_context(|| format!("baselines for {name} seed {seed}"))?;
                let labels: Vec<u8> = split.test.iter().map(|p| p.label).collect();
                let mut records = Vec::new();
                for o in outputs {
                    let report = evalstats::compute_metrics(&o.predictions, &labels)?
                        .with_condition(self.condition_meta(&cond, seed, o.method.as_str())?);
                    records.push(BaselineRecord { report, output: o });
                }
                write_json(&self.layout.baselines(&name, seed), &records)?;
            }
            println!("baseline {name}: {} seeds", self.cfg.seeds.len());
        }
        Ok(())
    }

    /// Evaluation reports grouped by method, then condition name, in grid order.
    pub fn collect_reports(&self) -> Result<Reports> {
        let mut by_method: BTreeMap<String, BTreeMap<String, Vec<EvalReport>>> = BTreeMap::new();
        for cond in self.cfg.conditions() {
            let name = cond.name();
            for &seed in &self.cfg.seeds {
                let report: EvalReport = read_json(&self.layout.eval(&name, seed), "eval")?;
                by_method
                    .entry("single".into())
                    .or_default()
                    .entry(name.clone())
                    .or_default()
                    .push(report);
                let bpath = self.layout.baselines(&name, seed);
                if bpath.exists() {
                    let records: Vec<BaselineRecord> = read_json(&bpath, "baseline")?;
                    for r in records {
                        by_method
                            .entry(r.report.condition.method.clone())
                            .or_default()
                            .entry(name.clone())
                            .or_default()
                            .push(r.report);
                    }
                }
            }
        }
        // baselines are only reported when every cell has them
        let cells = self.cfg.conditions().len();
        let seeds = self.cfg.seeds.len();
        by_method.retain(|_, conds| conds.len() == cells && conds.values().all(|v| v.len() == seeds));
        Ok(Reports {
            order: self.cfg.conditions().iter().map(ConditionSpec::name).collect(),
            by_method,
        })
    }

    pub fn compare(&self) -> Result<Vec<Comparison>> {
        let reports = self.collect_reports()?;
        let mut rows = Vec::new();
        for (method, conds) in &reports.by_method {
            for (i, left) in reports.order.iter().enumerate() {
                for right in &reports.order[i + 1..] {
                    for metric in MetricName::ALL {
                        let (a, b) = evalstats::paired(&conds[left], &conds[right], metric)?;
                        let w = evalstats::wilcoxon(&a, &b)?;
                        rows.push(Comparison {
                            method: method.clone(),
                            metric,
                            left: left.clone(),
                            right: right.clone(),
                            n_effective: w.n_effective,
                            w_plus: w.w_plus,
                            w_minus: w.w_minus,
                            t: w.t,
                            p_value: w.p_value,
                            test: w.method,
                        });
                    }
                }
            }
        }
        write_json(&self.layout.compare(), &rows)?;
        std::fs::write(self.layout.pvalues(), pvalues_csv(&rows))?;
        let significant = rows.iter().filter(|r| r.p_value < 0.05).count();
        println!("compare: {} tests, {significant} with p < 0.05", rows.len());
        Ok(rows)
    }

    pub fn report(&self) -> Result<()> {
        let reports = self.collect_reports()?;
        let comparisons: Vec<Comparison> = read_json(&self.layout.compare(), "compare")?;
        let mut summary = Vec::new();
        for (method, conds) in &reports.by_method {
            for name in &reports.order {
                let agg = evalstats::aggregate(&conds[name])?;
                summary.push(SummaryRow {
                    method: method.clone(),
                    condition: name.clone(),
                    summary: agg,
                });
            }
        }
        let ds = corpus::load(&self.layout.dataset())?;
        let labels: BTreeMap<String, String> =
            self.cfg.conditions().iter().map(|c| (c.name(), c.label())).collect();
        let md = crate::report::render(&crate::report::ReportInput {
            dataset: ds.name(),
            cfg: &self.cfg,
            order: &reports.order,
            labels: &labels,
            summary: &summary,
            comparisons: &comparisons,
        });
        write_json(&self.layout.summary(), &summary)?;
        std::fs::write(self.layout.report(), md)?;
        println!("report: {}", self.layout.report().display());
        Ok(())
    }
}

/// Permutes the labels of the train and validation parts among themselves.
/// Test labels stay untouched so the control is scored against the truth.
pub fn shuffle_labels(split: &mut DatasetSplit, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_1abe_15u64);
    for part in [&mut split.train, &mut split.val] {
        let mut labels: Vec<u8> = part.iter().map(|p| p.label).collect();
        labels.shuffle(&mut rng);
        for (p, l) in part.iter_mut().zip(labels) {
            p.label = l;
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaselineRecord {
    pub report: EvalReport,
    pub output: BaselineOutput,
}

pub struct Reports {
    pub order: Vec<String>,
    pub by_method: BTreeMap<String, BTreeMap<String, Vec<EvalReport>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub method: String,
    pub metric: MetricName,
    pub left: String,
    pub right: String,
    pub n_effective: usize,
    pub w_plus: f64,
    pub w_minus: f64,
    pub t: f64,
    pub p_value: f64,
    pub test: WilcoxonMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub method: String,
    pub condition: String,
    pub summary: evalstats::Summary,
}

fn pvalues_csv(rows: &[Comparison]) -> String {
    let mut out = String::from("method,metric,left,right,n,w_plus,w_minus,t,p_value,test\n");
    for r in rows {
        let test = match r.test {
            WilcoxonMethod::Exact => "exact",
            WilcoxonMethod::NormalApprox => "normal",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.method,
            r.metric.as_str(),
            r.left,
            r.right,
            r.n_effective,
            r.w_plus,
            r.w_minus,
            r.t,
            r.p_value,
            test
        ));
    }
    out
}

/// Every stage in order, as `trace run` executes them.
pub fn run_all(p: &Pipeline, dump_prompts: bool, with_baselines: bool) -> Result<()> {
    if p.cfg.dataset.is_none() {
        bail!("no dataset given: set `dataset` in the config or pass --dataset");
    }
    p.check_manifest()?;
    p.ingest()?;
    p.record_stage("ingest")?;
    p.augment(dump_prompts)?;
    p.record_stage("augment")?;
    p.sample()?;
    p.record_stage("sample")?;
    p.split()?;
    p.record_stage("split")?;
    p.train()?;
    p.record_stage("train")?;
    p.eval()?;
    p.record_stage("eval")?;
    if with_baselines {
        p.baseline()?;
        p.record_stage("baseline")?;
    }
    p.compare()?;
    p.record_stage("compare")?;
    p.report()?;
    p.record_stage("report")
}

#[cfg(test)]
mod tests {
    use super::*;
    use tracelink_core::corpus::Provenance;
    use tracelink_core::LabeledPair;

    fn split() -> DatasetSplit {
        let pair = |i: usize| LabeledPair {
            nl_id: format!("R{i}"),
            pl_id: format!("C{i}"),
            nl_text: "a".into(),
            pl_text: "b".into(),
            label: (i % 2) as u8,
            origin: Provenance::Original,
        };
        DatasetSplit {
            seed: 1,
            train: (0..16).map(pair).collect(),
            val: (16..18).map(pair).collect(),
            test: (18..20).map(pair).collect(),
        }
    }

    #[test]
    fn shuffling_keeps_label_counts_and_test_labels() {
        let orig = split();
        let mut s = orig.clone();
        shuffle_labels(&mut s, 2014);
        let ones = |v: &[LabeledPair]| v.iter().filter(|p| p.label == 1).count();
        assert_eq!(ones(&s.train), ones(&orig.train));
        assert_eq!(ones(&s.val), ones(&orig.val));
        assert_eq!(s.test, orig.test);
        assert_ne!(s.train, orig.train);
        let texts = |v: &[LabeledPair]| v.iter().map(|p| p.nl_id.clone()).collect::<Vec<_>>();
        assert_eq!(texts(&s.train), texts(&orig.train));
    }

    #[test]
    fn csv_has_one_line_per_row() {
        let row = Comparison {
            method: "single".into(),
            metric: MetricName::F1,
            left: "none".into(),
            right: "mock.zero-shot-code".into(),
            n_effective: 5,
            w_plus: 9.0,
            w_minus: 6.0,
            t: 6.0,
            p_value: 0.8125,
            test: WilcoxonMethod::Exact,
        };
        let csv = pvalues_csv(&[row]);
        assert_eq!(csv.lines().count(), 2);
        assert_eq!(csv.lines().nth(1).unwrap(), "single,f1,none,mock.zero-shot-code,5,9,6,6,0.8125,exact");
    }
}
