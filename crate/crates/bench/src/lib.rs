//! Synthetic inputs shared by the benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tracelink_core::corpus::Provenance;
use tracelink_core::LabeledPair;

const WORDS: [&str; 32] = [
    "account", "report", "screen", "button", "record", "session", "patient", "visit", "order", "ticket", "route",
    "station", "invoice", "profile", "message", "schedule", "review", "upload", "search", "filter", "export",
    "import", "status", "history", "login", "payment", "audit", "backup", "notify", "queue", "cache", "token",
];

/// `n` labeled pairs of `len` words per side; positives share one marker word.
pub fn pairs(n: usize, len: usize, seed: u64) -> Vec<LabeledPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let label = (i % 2) as u8;
            let mut nl: Vec<&str> = (0..len).map(|_| *WORDS.choose(&mut rng).unwrap()).collect();
            let mut pl: Vec<&str> = (0..len).map(|_| *WORDS.choose(&mut rng).unwrap()).collect();
            if label == 1 {
                let (a, b) = (rng.gen_range(0..len), rng.gen_range(0..len));
                nl[a] = "beacon";
                pl[b] = "beacon";
            }
            LabeledPair {
                nl_id: format!("R{i}"),
                pl_id: format!("C{i}"),
                nl_text: nl.join(" "),
                pl_text: format!("class C{i} {{ void {}() {{}} }}", pl.join("_")),
                label,
                origin: Provenance::Original,
            }
        })
        .collect()
}

/// Whitespace-split word lists drawn from the same vocabulary.
pub fn docs(n: usize, len: usize, seed: u64) -> Vec<Vec<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..len).map(|_| WORDS.choose(&mut rng).unwrap().to_string()).collect())
        .collect()
}

/// Two paired samples of length `n` with small random differences.
pub fn paired_samples(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.4..0.9)).collect();
    let b = a.iter().map(|x| x + rng.gen_range(-0.1..0.1)).collect();
    (a, b)
}
