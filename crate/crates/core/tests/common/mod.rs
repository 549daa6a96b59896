#![allow(dead_code)]

pub mod golden;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tracelink_core::corpus::Provenance;
use tracelink_core::dataset_ops::{DatasetSplit, LabeledPair};

const FILLER: [&str; 24] = [
    "account", "report", "screen", "button", "record", "session", "patient", "visit", "order", "ticket", "route",
    "station", "invoice", "profile", "message", "schedule", "review", "upload", "search", "filter", "export",
    "import", "status", "history",
];

/// 200 pairs; positives carry the marker word on both sides, negatives never do.
pub fn separable_pairs(seed: u64) -> Vec<LabeledPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(200);
    for i in 0..200 {
        let label = (i % 2) as u8;
        let mut words = |n: usize| -> Vec<&str> { (0..n).map(|_| *FILLER.choose(&mut rng).unwrap()).collect() };
        let mut nl = words(6);
        let mut pl = words(6);
        if label == 1 {
            let at = rng.gen_range(0..=nl.len());
            nl.insert(at, "beacon");
            let at = rng.gen_range(0..=pl.len());
            pl.insert(at, "beacon");
        }
        out.push(LabeledPair {
            nl_id: format!("R{i}"),
            pl_id: format!("C{i}"),
            nl_text: format!("The user shall {}.", nl.join(" ")),
            pl_text: format!("class C{i} {{ void {}() {{}} }}", pl.join("_")),
            label,
            origin: Provenance::Original,
        });
    }
    out
}

pub fn separable_split(seed: u64) -> DatasetSplit {
    tracelink_core::dataset_ops::split(&separable_pairs(seed), seed).unwrap()
}

/// Relative error with a floor so that two near-zero values compare equal.
pub fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-7 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
