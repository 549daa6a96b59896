//! Markdown rendering of the aggregated results.

use std::collections::BTreeMap;
use std::fmt::Write;

use tracelink_core::evalstats::{MetricName, Metrics};

use crate::config::RunConfig;
use crate::pipeline::{Comparison, SummaryRow};

pub struct ReportInput<'a> {
    pub dataset: &'a str,
    pub cfg: &'a RunConfig,
    /// Condition names in grid order; the first is the `None` control.
    pub order: &'a [String],
    pub labels: &'a BTreeMap<String, String>,
    pub summary: &'a [SummaryRow],
    pub comparisons: &'a [Comparison],
}

fn cell(mean: &Metrics, sd: &Metrics, m: MetricName) -> String {
    format!("{:.4} ± {:.4}", m.of(mean), m.of(sd))
}

fn header(out: &mut String, first: &[&str]) {
    let cols: Vec<&str> = first.iter().copied().chain(MetricName::ALL.iter().map(|m| m.as_str())).collect();
    writeln!(out, "| {} |", cols.join(" | ")).unwrap();
    writeln!(out, "|{}", "---|".repeat(cols.len())).unwrap();
}

pub fn render(input: &ReportInput<'_>) -> String {
    let cfg = input.cfg;
    let label = |name: &str| input.labels.get(name).cloned().unwrap_or_else(|| name.to_string());
    let mut out = String::new();
    writeln!(out, "# Trace-link experiment report: {}\n", input.dataset).unwrap();
    let seeds: Vec<String> = cfg.seeds.iter().map(u64::to_string).collect();
    writeln!(out, "- Seeds: {}", seeds.join(", ")).unwrap();
    writeln!(
        out,
        "- Encoder: {}, max sequence length {}",
        cfg.encoder.label(),
        cfg.encoder.max_seq_len
    )
    .unwrap();
    writeln!(
        out,
        "- Training: lr {}, batch {}, {} epochs",
        cfg.train.learning_rate, cfg.train.batch_size, cfg.train.epochs
    )
    .unwrap();
    writeln!(out, "- Config hash: `{}`", cfg.hash()).unwrap();
    if cfg.shuffle_labels {
        writeln!(out, "- Train/validation labels shuffled: this is a negative-control run").unwrap();
    }
    writeln!(out, "\nCells show mean ± sample standard deviation over seeds on the test part.").unwrap();

    let single: Vec<&SummaryRow> = input.summary.iter().filter(|r| r.method == "single").collect();
    writeln!(out, "\n## Single model\n").unwrap();
    header(&mut out, &["Condition"]);
    for name in input.order {
        if let Some(r) = single.iter().find(|r| &r.condition == name) {
            let cells: Vec<String> = MetricName::ALL
                .iter()
                .map(|m| cell(&r.summary.mean, &r.summary.sd, *m))
                .collect();
            writeln!(out, "| {} | {} |", label(name), cells.join(" | ")).unwrap();
        }
    }

    let others: Vec<&SummaryRow> = input.summary.iter().filter(|r| r.method != "single").collect();
    if !others.is_empty() {
        writeln!(out, "\n## Baselines\n").unwrap();
        header(&mut out, &["Condition", "Method"]);
        for name in input.order {
            for r in others.iter().filter(|r| &r.condition == name) {
                let cells: Vec<String> = MetricName::ALL
                    .iter()
                    .map(|m| cell(&r.summary.mean, &r.summary.sd, *m))
                    .collect();
                writeln!(out, "| {} | {} | {} |", label(name), r.method, cells.join(" | ")).unwrap();
            }
        }
    }

    writeln!(out, "\n## Wilcoxon signed-rank p-values (single model)\n").unwrap();
    writeln!(out, "Paired by seed; p < 0.05 is marked with `*`. All tests are listed in `pvalues.csv`.").unwrap();
    for metric in MetricName::ALL {
        writeln!(out, "\n### {}\n", metric.as_str()).unwrap();
        let names: Vec<String> = input.order.iter().map(|n| label(n)).collect();
        writeln!(out, "| | {} |", names.join(" | ")).unwrap();
        writeln!(out, "|{}", "---|".repeat(names.len() + 1)).unwrap();
        for row in input.order {
            let cells: Vec<String> = input
                .order
                .iter()
                .map(|col| {
                    if row == col {
                        return "-".to_string();
                    }
                    input
                        .comparisons
                        .iter()
                        .find(|c| {
                            c.method == "single"
                                && c.metric == metric
                                && ((&c.left == row && &c.right == col) || (&c.left == col && &c.right == row))
                        })
                        .map(|c| format!("{:.4}{}", c.p_value, if c.p_value < 0.05 { "*" } else { "" }))
                        .unwrap_or_default()
                })
                .collect();
            writeln!(out, "| {} | {} |", label(row), cells.join(" | ")).unwrap();
        }
    }
    out
}
