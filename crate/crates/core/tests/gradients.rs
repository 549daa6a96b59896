//! Analytic gradients against central finite differences.

mod common;

use common::rel_err;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tracelink_core::baselines::{lr_gradient, lr_loss, LogisticRegression};
use tracelink_core::matrix::Matrix;
use tracelink_core::single_model::{batch_gradients, mean_loss, Example, Input, ModelParams};

const H: f64 = 1e-5;
const TOL: f64 = 1e-4;

fn random_instance(seed: u64) -> (ModelParams, Vec<Example>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (vocab, dim) = (9, 4);
    let params = ModelParams {
        embedding: Some(Matrix::from_fn(vocab, dim, |_, _| rng.gen_range(-1.0..1.0))),
        head_w: Matrix::from_fn(2, dim, |_, _| rng.gen_range(-1.0..1.0)),
        head_b: [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)],
    };
    let examples = (0..6)
        .map(|_| {
            let len = rng.gen_range(2..7);
            let mut seq: Vec<u32> = (0..len).map(|_| rng.gen_range(0..vocab as u32)).collect();
            seq[0] = rng.gen_range(1..vocab as u32);
            Example {
                input: Input::Sequence(seq),
                label: rng.gen_range(0..2),
            }
        })
        .collect();
    (params, examples)
}

/// Every scalar parameter slot as (tensor name, getter/setter index).
fn slots(p: &ModelParams) -> Vec<(&'static str, usize)> {
    let mut out = Vec::new();
    out.extend((0..p.embedding.as_ref().unwrap().data.len()).map(|i| ("embedding", i)));
    out.extend((0..p.head_w.data.len()).map(|i| ("head_w", i)));
    out.extend((0..2).map(|i| ("head_b", i)));
    out
}

fn slot_mut<'a>(p: &'a mut ModelParams, name: &str, i: usize) -> &'a mut f64 {
    match name {
        "embedding" => &mut p.embedding.as_mut().unwrap().data[i],
        "head_w" => &mut p.head_w.data[i],
        _ => &mut p.head_b[i],
    }
}

#[test]
fn single_model_gradients_match_finite_differences() {
    for seed in 0..4 {
        let (params, examples) = random_instance(seed);
        let refs: Vec<&Example> = examples.iter().collect();
        let (_, mut grads) = batch_gradients(&params, &refs).unwrap();
        let mut worst = 0.0f64;
        for (name, i) in slots(&params) {
            let mut plus = params.clone();
            *slot_mut(&mut plus, name, i) += H;
            let mut minus = params.clone();
            *slot_mut(&mut minus, name, i) -= H;
            let numeric = (mean_loss(&plus, &examples).unwrap() - mean_loss(&minus, &examples).unwrap()) / (2.0 * H);
            let analytic = *slot_mut(&mut grads, name, i);
            worst = worst.max(rel_err(analytic, numeric));
        }
        assert!(worst < TOL, "seed {seed}: worst relative error {worst}");
    }
}

#[test]
fn pad_rows_receive_no_gradient() {
    let (params, mut examples) = random_instance(9);
    for ex in &mut examples {
        if let Input::Sequence(seq) = &mut ex.input {
            seq.push(0);
        }
    }
    let refs: Vec<&Example> = examples.iter().collect();
    let (_, grads) = batch_gradients(&params, &refs).unwrap();
    assert!(grads.embedding.unwrap().row(0).iter().all(|&g| g == 0.0));
}

#[test]
fn logistic_regression_gradient_matches_finite_differences() {
    for seed in 0..4 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let x: Vec<Vec<f64>> = (0..12).map(|_| (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let y: Vec<u8> = (0..12).map(|_| rng.gen_range(0..2)).collect();
        let model = LogisticRegression {
            w: (0..5).map(|_| rng.gen_range(-2.0..2.0)).collect(),
            b: rng.gen_range(-1.0..1.0),
        };
        let l2 = 1e-2;
        let (gw, gb) = lr_gradient(&model, &x, &y, l2);
        for j in 0..=5 {
            let bump = |d: f64| {
                let mut m = model.clone();
                if j < 5 {
                    m.w[j] += d;
                } else {
                    m.b += d;
                }
                lr_loss(&m, &x, &y, l2)
            };
            let numeric = (bump(H) - bump(-H)) / (2.0 * H);
            let analytic = if j < 5 { gw[j] } else { gb };
            assert!(rel_err(analytic, numeric) < TOL, "seed {seed} slot {j}: {analytic} vs {numeric}");
        }
    }
}
