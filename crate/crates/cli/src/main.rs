//! `trace`: runs trace-link augmentation experiments stage by stage.

mod config;
mod layout;
mod pipeline;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use serde_json::json;

use config::{Overrides, RunConfig};
use layout::MissingPrerequisite;
use pipeline::{ConfigMismatch, Pipeline};

#[derive(Parser)]
#[command(name = "trace", version, about = "Trace-link augmentation and evaluation runner")]
struct Cli {
    /// JSON run configuration. Paths inside it are relative to the file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Import the dataset directory into the output directory.
    Ingest,
    /// Generate artifacts for every provider/template condition.
    Augment {
        /// Also write the substituted prompts to prompts.jsonl.
        #[arg(long)]
        dump_prompts: bool,
    },
    /// Add one sampled negative per positive link, per seed.
    Sample,
    /// Cut the pairs into train/validation/test parts, per seed.
    Split,
    /// Train the pair classifier for every condition and seed.
    Train,
    /// Score trained models on the test parts.
    Eval,
    /// Run the IR and classical-ML baselines.
    Baseline,
    /// Wilcoxon signed-rank tests between all condition pairs.
    Compare,
    /// Write report.md and summary.json.
    Report,
    /// Every stage in order.
    Run {
        #[arg(long)]
        dump_prompts: bool,
        /// Skip the baseline stage.
        #[arg(long)]
        no_baselines: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ingest => "ingest",
            Command::Augment { .. } => "augment",
            Command::Sample => "sample",
            Command::Split => "split",
            Command::Train => "train",
            Command::Eval => "eval",
            Command::Baseline => "baseline",
            Command::Compare => "compare",
            Command::Report => "report",
            Command::Run { .. } => "run",
        }
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let cfg = RunConfig::load(cli.config.as_deref(), &cli.overrides)?;
    let p = Pipeline::new(cfg);
    if let Command::Run {
        dump_prompts,
        no_baselines,
    } = cli.command
    {
        return pipeline::run_all(&p, dump_prompts, !no_baselines);
    }
    p.check_manifest()?;
    match &cli.command {
        Command::Ingest => p.ingest()?,
        Command::Augment { dump_prompts } => p.augment(*dump_prompts)?,
        Command::Sample => p.sample()?,
        Command::Split => p.split()?,
        Command::Train => p.train()?,
        Command::Eval => p.eval()?,
        Command::Baseline => p.baseline()?,
        Command::Compare => {
            p.compare()?;
        }
        Command::Report => p.report()?,
        Command::Run { .. } => unreachable!(),
    }
    p.record_stage(cli.command.name())
}

fn error_kind(err: &anyhow::Error) -> &'static str {
    use tracelink_core::{corpus, dataset_ops, encoder, evalstats, llm_gateway, single_model};
    for cause in err.chain() {
        if cause.is::<MissingPrerequisite>() {
            return "missing_prerequisite";
        }
        if cause.is::<ConfigMismatch>() {
            return "config_mismatch";
        }
        if cause.is::<llm_gateway::GatewayError>() {
            return "provider";
        }
        if cause.is::<corpus::CorpusError>() {
            return "corpus";
        }
        if cause.is::<dataset_ops::DatasetOpsError>() {
            return "dataset";
        }
        if cause.is::<single_model::TrainError>() || cause.is::<encoder::EncoderError>() {
            return "training";
        }
        if cause.is::<evalstats::EvalError>() {
            return "evaluation";
        }
        if cause.is::<tracelink_core::baselines::BaselineError>() {
            return "baseline";
        }
        if cause.is::<serde_json::Error>() {
            return "parse";
        }
        if cause.is::<std::io::Error>() {
            return "io";
        }
    }
    "config"
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let mut body = json!({
                "command": cli.command.name(),
                "kind": error_kind(&err),
                "message": format!("{err:#}"),
            });
            if let Some(m) = err.chain().find_map(|c| c.downcast_ref::<MissingPrerequisite>()) {
                body["prerequisite"] = json!(m.command);
                body["missing"] = json!(m.path.display().to_string());
            }
            eprintln!("{}", json!({ "error": body }));
            ExitCode::FAILURE
        }
    }
}
