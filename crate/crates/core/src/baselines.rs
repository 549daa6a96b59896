//! Information-retrieval and classical classifier baselines.
//!
//! VSM, LSI and LDA score a pair by document similarity and are turned into
//! classifiers by a threshold tuned on the validation part. KNN, logistic
//! regression and a linear SVM consume a five-value [`PairFeatures`] vector
//! built from those same IR models.

use std::collections::{BTreeSet, HashMap};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::ArtifactKind;
use crate::dataset_ops::{DatasetSplit, LabeledPair};
use crate::encoder::tokenize;
use crate::evalstats::metrics_from_counts;
use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BaselineError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("need at least {needed} training points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("feature dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{0} diverged")]
    Divergence(&'static str),
    #[error("score and label counts differ: {scores} vs {labels}")]
    LengthMismatch { scores: usize, labels: usize },
    #[error("SVD failed to converge")]
    Svd,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Cosine similarity; 0 when either side is the zero vector.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot(a, b) / (na * nb)).clamp(-1.0, 1.0)
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let n = norm(&v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct TfidfModel {
    terms: HashMap<String, usize>,
    idf: Vec<f64>,
    docs: Vec<Vec<f64>>,
}

impl TfidfModel {
    /// Fits term statistics on tokenized documents. Term order is first-seen.
    pub fn fit(docs: &[Vec<String>]) -> Result<Self, BaselineError> {
        if docs.is_empty() {
            return Err(BaselineError::EmptyCorpus);
        }
        let mut terms = HashMap::new();
        let mut df = Vec::new();
        for doc in docs {
            let distinct: BTreeSet<&String> = doc.iter().collect();
            for t in distinct {
                let next = terms.len();
                let idx = *terms.entry(t.clone()).or_insert(next);
                if idx == df.len() {
                    df.push(0usize);
                }
                df[idx] += 1;
            }
        }
        let n = docs.len() as f64;
        let idf = df.iter().map(|&d| ((n + 1.0) / (d as f64 + 1.0)).ln() + 1.0).collect();
        let mut model = Self {
            terms,
            idf,
            docs: Vec::new(),
        };
        model.docs = docs.iter().map(|d| model.vectorize(d)).collect();
        Ok(model)
    }

    pub fn n_terms(&self) -> usize {
        self.idf.len()
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn doc_vectors(&self) -> &[Vec<f64>] {
        &self.docs
    }

    /// Raw-count tf times idf, L2-normalized. Unknown terms are ignored.
    pub fn vectorize(&self, tokens: &[String]) -> Vec<f64> {
        let mut v = vec![0.0; self.idf.len()];
        for t in tokens {
            if let Some(&i) = self.terms.get(t) {
                v[i] += 1.0;
            }
        }
        for (x, idf) in v.iter_mut().zip(&self.idf) {
            *x *= idf;
        }
        normalized(v)
    }

    pub fn score(&self, a: &[String], b: &[String]) -> f64 {
        cosine(&self.vectorize(a), &self.vectorize(b))
    }
}

fn to_dmatrix(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows, m.cols, &m.data)
}

/// Thin SVD with singular values sorted in descending order.
pub struct SortedSvd {
    pub u: DMatrix<f64>,
    pub s: Vec<f64>,
    pub v_t: DMatrix<f64>,
}

pub fn sorted_svd(a: &DMatrix<f64>) -> Result<SortedSvd, BaselineError> {
    let svd = a.clone().try_svd(true, true, f64::EPSILON, 0).ok_or(BaselineError::Svd)?;
    let u = svd.u.ok_or(BaselineError::Svd)?;
    let v_t = svd.v_t.ok_or(BaselineError::Svd)?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    Ok(SortedSvd {
        u: DMatrix::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]),
        s: order.iter().map(|&i| svd.singular_values[i]).collect(),
        v_t: DMatrix::from_fn(order.len(), v_t.ncols(), |r, c| v_t[(order[r], c)]),
    })
}

/// Best rank-`k` approximation `U_k Σ_k V_kᵀ` of `a`.
pub fn low_rank_approximation(a: &Matrix, k: usize) -> Result<Matrix, BaselineError> {
    let svd = sorted_svd(&to_dmatrix(a))?;
    let k = k.min(svd.s.len());
    let mut out = Matrix::zeros(a.rows, a.cols);
    for r in 0..a.rows {
        for c in 0..a.cols {
            out.data[r * a.cols + c] = (0..k).map(|i| svd.u[(r, i)] * svd.s[i] * svd.v_t[(i, c)]).sum();
        }
    }
    Ok(out)
}

/// Frobenius norm of `a - A_k`.
pub fn reconstruction_error(a: &Matrix, k: usize) -> Result<f64, BaselineError> {
    let approx = low_rank_approximation(a, k)?;
    Ok(a.data
        .iter()
        .zip(&approx.data)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt())
}

pub const LSI_MAX_RANK: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct LsiModel {
    pub k: usize,
    /// `terms × k`.
    u_k: DMatrix<f64>,
    sigma: Vec<f64>,
    /// Latent coordinates of the training documents, one row per document.
    doc_coords: Vec<Vec<f64>>,
}

impl LsiModel {
    /// Truncated SVD of the term-document TF-IDF matrix.
    pub fn fit(tfidf: &TfidfModel) -> Result<Self, BaselineError> {
        let docs = tfidf.doc_vectors();
        let (t, d) = (tfidf.n_terms(), docs.len());
        if t == 0 || d == 0 {
            return Err(BaselineError::EmptyCorpus);
        }
        let a = DMatrix::from_fn(t, d, |r, c| docs[c][r]);
        let svd = sorted_svd(&a)?;
        let max_rank = LSI_MAX_RANK.min(t.min(d).saturating_sub(1)).max(1);
        let tol = svd.s.first().copied().unwrap_or(0.0) * 1e-12;
        let k = svd.s.iter().take(max_rank).take_while(|&&s| s > tol).count();
        let u_k = svd.u.columns(0, k).into_owned();
        let sigma = svd.s[..k].to_vec();
        let mut model = Self {
            k,
            u_k,
            sigma,
            doc_coords: Vec::new(),
        };
        model.doc_coords = docs.iter().map(|q| model.fold_in(q)).collect();
        Ok(model)
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.sigma
    }

    pub fn doc_coords(&self) -> &[Vec<f64>] {
        &self.doc_coords
    }

    /// `Σ_k⁻¹ U_kᵀ q` for a term-space vector `q`.
    pub fn fold_in(&self, q: &[f64]) -> Vec<f64> {
        (0..self.k)
            .map(|i| {
                let col = self.u_k.column(i);
                col.iter().zip(q).map(|(u, x)| u * x).sum::<f64>() / self.sigma[i]
            })
            .collect()
    }

    pub fn score(&self, tfidf: &TfidfModel, a: &[String], b: &[String]) -> f64 {
        cosine(&self.fold_in(&tfidf.vectorize(a)), &self.fold_in(&tfidf.vectorize(b)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LdaConfig {
    pub topics: usize,
    /// Defaults to `50 / topics` when absent.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    /// Gibbs sweeps used to infer topic mixtures of new documents.
    pub inference_iterations: usize,
    pub seed: u64,
}

impl Default for LdaConfig {
    fn default() -> Self {
        Self {
            topics: 20,
            alpha: None,
            beta: 0.01,
            iterations: 1000,
            inference_iterations: 50,
            seed: 2014,
        }
    }
}

impl LdaConfig {
    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / self.topics as f64)
    }

    fn validate(&self) -> Result<(), BaselineError> {
        if self.topics == 0 {
            return Err(BaselineError::Config("topics must be >= 1".into()));
        }
        if !(self.alpha() > 0.0 && self.beta > 0.0) {
            return Err(BaselineError::Config("alpha and beta must be > 0".into()));
        }
        Ok(())
    }
}

/// Topic mixtures and topic-word distributions at one point of sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct LdaSnapshot {
    /// `docs × topics`.
    pub theta: Matrix,
    /// `topics × terms`.
    pub phi: Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LdaModel {
    pub topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
    inference_iterations: usize,
    terms: HashMap<String, usize>,
    pub theta: Matrix,
    pub phi: Matrix,
}

struct GibbsState {
    k: usize,
    v: usize,
    alpha: f64,
    beta: f64,
    docs: Vec<Vec<usize>>,
    z: Vec<Vec<usize>>,
    n_dk: Vec<Vec<usize>>,
    n_kw: Vec<Vec<usize>>,
    n_k: Vec<usize>,
}

impl GibbsState {
    fn sweep(&mut self, rng: &mut ChaCha8Rng, weights: &mut [f64]) {
        let vbeta = self.v as f64 * self.beta;
        for d in 0..self.docs.len() {
            for i in 0..self.docs[d].len() {
                let w = self.docs[d][i];
                let old = self.z[d][i];
                self.n_dk[d][old] -= 1;
                self.n_kw[old][w] -= 1;
                self.n_k[old] -= 1;
                for k in 0..self.k {
                    weights[k] = (self.n_dk[d][k] as f64 + self.alpha) * (self.n_kw[k][w] as f64 + self.beta)
                        / (self.n_k[k] as f64 + vbeta);
                }
                let new = sample_index(rng, weights);
                self.z[d][i] = new;
                self.n_dk[d][new] += 1;
                self.n_kw[new][w] += 1;
                self.n_k[new] += 1;
            }
        }
    }

    fn snapshot(&self) -> LdaSnapshot {
        let kalpha = self.k as f64 * self.alpha;
        let vbeta = self.v as f64 * self.beta;
        let theta = Matrix::from_fn(self.docs.len(), self.k, |d, k| {
            (self.n_dk[d][k] as f64 + self.alpha) / (self.docs[d].len() as f64 + kalpha)
        });
        let phi = Matrix::from_fn(self.k, self.v, |k, w| {
            (self.n_kw[k][w] as f64 + self.beta) / (self.n_k[k] as f64 + vbeta)
        });
        LdaSnapshot { theta, phi }
    }
}

fn sample_index(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if u < *w {
            return i;
        }
        u -= w;
    }
    weights.len() - 1
}

/// FNV-1a over the tokens, used to seed inference per document.
fn token_hash(tokens: &[String]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for t in tokens {
        for b in t.bytes().chain(std::iter::once(0xff)) {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

impl LdaModel {
    pub fn fit(docs: &[Vec<String>], cfg: &LdaConfig) -> Result<Self, BaselineError> {
        Self::fit_inner(docs, cfg, None)
    }

    /// Collapsed Gibbs sampling. `observe` receives the 1-based sweep index and
    /// the estimates after every sweep.
    pub fn fit_observed(
        docs: &[Vec<String>],
        cfg: &LdaConfig,
        mut observe: impl FnMut(usize, &LdaSnapshot),
    ) -> Result<Self, BaselineError> {
        Self::fit_inner(docs, cfg, Some(&mut observe))
    }

    fn fit_inner(
        docs: &[Vec<String>],
        cfg: &LdaConfig,
        mut observe: Option<&mut dyn FnMut(usize, &LdaSnapshot)>,
    ) -> Result<Self, BaselineError> {
        cfg.validate()?;
        if docs.is_empty() {
            return Err(BaselineError::EmptyCorpus);
        }
        let mut terms = HashMap::new();
        let ids: Vec<Vec<usize>> = docs
            .iter()
            .map(|d| {
                d.iter()
                    .map(|t| {
                        let next = terms.len();
                        *terms.entry(t.clone()).or_insert(next)
                    })
                    .collect()
            })
            .collect();
        let (k, v) = (cfg.topics, terms.len().max(1));
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut state = GibbsState {
            k,
            v,
            alpha: cfg.alpha(),
            beta: cfg.beta,
            z: Vec::with_capacity(ids.len()),
            n_dk: vec![vec![0; k]; ids.len()],
            n_kw: vec![vec![0; v]; k],
            n_k: vec![0; k],
            docs: ids,
        };
        for d in 0..state.docs.len() {
            let mut zd = Vec::with_capacity(state.docs[d].len());
            for &w in &state.docs[d] {
                let t = rng.gen_range(0..k);
                state.n_dk[d][t] += 1;
                state.n_kw[t][w] += 1;
                state.n_k[t] += 1;
                zd.push(t);
            }
            state.z.push(zd);
        }
        let mut weights = vec![0.0; k];
        for sweep in 1..=cfg.iterations {
            state.sweep(&mut rng, &mut weights);
            if let Some(f) = observe.as_mut() {
                f(sweep, &state.snapshot());
            }
        }
        let LdaSnapshot { theta, phi } = state.snapshot();
        Ok(Self {
            topics: k,
            alpha: state.alpha,
            beta: state.beta,
            seed: cfg.seed,
            inference_iterations: cfg.inference_iterations,
            terms,
            theta,
            phi,
        })
    }

    /// Topic mixture of a new document with `phi` held fixed. Documents with
    /// no known term get the uniform mixture.
    pub fn infer(&self, tokens: &[String]) -> Vec<f64> {
        let k = self.topics;
        let words: Vec<usize> = tokens.iter().filter_map(|t| self.terms.get(t).copied()).collect();
        if words.is_empty() {
            return vec![1.0 / k as f64; k];
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ token_hash(tokens));
        let mut n_k = vec![0usize; k];
        let mut z: Vec<usize> = words
            .iter()
            .map(|_| {
                let t = rng.gen_range(0..k);
                n_k[t] += 1;
                t
            })
            .collect();
        let mut weights = vec![0.0; k];
        for _ in 0..self.inference_iterations {
            for (i, &w) in words.iter().enumerate() {
                n_k[z[i]] -= 1;
                for t in 0..k {
                    weights[t] = (n_k[t] as f64 + self.alpha) * self.phi.get(t, w);
                }
                z[i] = sample_index(&mut rng, &weights);
                n_k[z[i]] += 1;
            }
        }
        let denom = words.len() as f64 + k as f64 * self.alpha;
        n_k.iter().map(|&c| (c as f64 + self.alpha) / denom).collect()
    }

    pub fn score(&self, a: &[String], b: &[String]) -> f64 {
        js_similarity(&self.infer(a), &self.infer(b))
    }
}

/// `1 - JSD(p, q) / ln 2`, in `[0, 1]`.
pub fn js_similarity(p: &[f64], q: &[f64]) -> f64 {
    let kl = |a: &[f64], m: &[f64]| -> f64 {
        a.iter()
            .zip(m)
            .filter(|(x, _)| **x > 0.0)
            .map(|(x, y)| x * (x / y).ln())
            .sum()
    };
    let m: Vec<f64> = p.iter().zip(q).map(|(a, b)| 0.5 * (a + b)).collect();
    let jsd = 0.5 * kl(p, &m) + 0.5 * kl(q, &m);
    (1.0 - jsd / std::f64::consts::LN_2).clamp(0.0, 1.0)
}

pub const N_FEATURES: usize = 5;

/// `[vsm cosine, lsi cosine, jaccard, lda similarity, shared / min size]`.
pub type PairFeatures = [f64; N_FEATURES];

pub fn jaccard(a: &[String], b: &[String]) -> f64 {
    let sa: BTreeSet<&String> = a.iter().collect();
    let sb: BTreeSet<&String> = b.iter().collect();
    let union = sa.union(&sb).count();
    if union == 0 {
        return 0.0;
    }
    sa.intersection(&sb).count() as f64 / union as f64
}

/// Distinct shared terms over the smaller distinct-term count.
pub fn shared_term_ratio(a: &[String], b: &[String]) -> f64 {
    let sa: BTreeSet<&String> = a.iter().collect();
    let sb: BTreeSet<&String> = b.iter().collect();
    let smaller = sa.len().min(sb.len());
    if smaller == 0 {
        return 0.0;
    }
    sa.intersection(&sb).count() as f64 / smaller as f64
}

/// The three IR models fit on one training part.
pub struct IrModels {
    pub tfidf: TfidfModel,
    pub lsi: LsiModel,
    pub lda: LdaModel,
}

fn pair_tokens(p: &LabeledPair) -> (Vec<String>, Vec<String>) {
    (tokenize(&p.nl_text, ArtifactKind::Nl), tokenize(&p.pl_text, ArtifactKind::Pl))
}

impl IrModels {
    /// The corpus is every distinct NL and PL text in `train`.
    pub fn fit(train: &[LabeledPair], lda: &LdaConfig) -> Result<Self, BaselineError> {
        let mut seen = BTreeSet::new();
        let mut docs = Vec::new();
        for p in train {
            if seen.insert((ArtifactKind::Nl, p.nl_text.as_str())) {
                docs.push(tokenize(&p.nl_text, ArtifactKind::Nl));
            }
            if seen.insert((ArtifactKind::Pl, p.pl_text.as_str())) {
                docs.push(tokenize(&p.pl_text, ArtifactKind::Pl));
            }
        }
        let tfidf = TfidfModel::fit(&docs)?;
        let lsi = LsiModel::fit(&tfidf)?;
        let lda = LdaModel::fit(&docs, lda)?;
        Ok(Self { tfidf, lsi, lda })
    }

    pub fn features(&self, pair: &LabeledPair) -> PairFeatures {
        let (nl, pl) = pair_tokens(pair);
        let (vn, vp) = (self.tfidf.vectorize(&nl), self.tfidf.vectorize(&pl));
        [
            cosine(&vn, &vp),
            cosine(&self.lsi.fold_in(&vn), &self.lsi.fold_in(&vp)),
            jaccard(&nl, &pl),
            self.lda.score(&nl, &pl),
            shared_term_ratio(&nl, &pl),
        ]
    }
}

/// Decision threshold maximizing F1 when predicting positive for `score >= τ`.
///
/// Candidates are the midpoints between consecutive distinct scores plus the
/// two infinite sentinels; ties go to the smaller threshold. When every score
/// is equal the candidates are that value and `+∞`.
pub fn ir_threshold(scores: &[f64], labels: &[u8]) -> Result<f64, BaselineError> {
    if scores.len() != labels.len() {
        return Err(BaselineError::LengthMismatch {
            scores: scores.len(),
            labels: labels.len(),
        });
    }
    if scores.is_empty() {
        return Err(BaselineError::EmptyCorpus);
    }
    let mut uniq: Vec<f64> = scores.to_vec();
    uniq.sort_by(f64::total_cmp);
    uniq.dedup();
    let mut candidates = Vec::with_capacity(uniq.len() + 2);
    if uniq.len() == 1 {
        candidates.push(uniq[0]);
    } else {
        candidates.push(f64::NEG_INFINITY);
        candidates.extend(uniq.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    }
    candidates.push(f64::INFINITY);

    let mut best = (f64::NEG_INFINITY, candidates[0]);
    for &tau in &candidates {
        let f1 = threshold_f1(scores, labels, tau);
        if f1 > best.0 {
            best = (f1, tau);
        }
    }
    Ok(best.1)
}

fn threshold_f1(scores: &[f64], labels: &[u8], tau: f64) -> f64 {
    let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
    for (&s, &l) in scores.iter().zip(labels) {
        match (s >= tau, l == 1) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
    }
    metrics_from_counts(tp, fp, tn, fn_).f1
}

pub fn apply_threshold(scores: &[f64], tau: f64) -> Vec<u8> {
    scores.iter().map(|&s| u8::from(s >= tau)).collect()
}

fn check_points(x: &[Vec<f64>], y: &[u8]) -> Result<usize, BaselineError> {
    if x.len() != y.len() {
        return Err(BaselineError::LengthMismatch {
            scores: x.len(),
            labels: y.len(),
        });
    }
    let dim = x.first().map_or(0, Vec::len);
    if let Some(bad) = x.iter().find(|r| r.len() != dim) {
        return Err(BaselineError::Dimension {
            expected: dim,
            got: bad.len(),
        });
    }
    Ok(dim)
}

/// Majority label of the `k` nearest training points (Euclidean). Equal
/// distances favour the smaller training index; a split vote gives 0.
pub fn knn_predict(x: &[f64], train_x: &[Vec<f64>], train_y: &[u8], k: usize) -> Result<u8, BaselineError> {
    let dim = check_points(train_x, train_y)?;
    if k == 0 || train_x.len() < k {
        return Err(BaselineError::TooFewPoints {
            needed: k.max(1),
            got: train_x.len(),
        });
    }
    if x.len() != dim {
        return Err(BaselineError::Dimension {
            expected: dim,
            got: x.len(),
        });
    }
    let mut dist: Vec<(f64, usize)> = train_x
        .iter()
        .enumerate()
        .map(|(i, p)| (p.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>(), i))
        .collect();
    dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let ones = dist[..k].iter().filter(|(_, i)| train_y[*i] == 1).count();
    Ok(u8::from(2 * ones > k))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LrConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
}

impl Default for LrConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            epochs: 500,
            l2: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticRegression {
    pub w: Vec<f64>,
    pub b: f64,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Mean binary cross-entropy plus `l2 / 2 · |w|²`.
pub fn lr_loss(model: &LogisticRegression, x: &[Vec<f64>], y: &[u8], l2: f64) -> f64 {
    let data: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, &yi)| {
            let z = dot(&model.w, xi) + model.b;
            // ln(1 + e^z) - y z, stable for large |z|
            let softplus = z.max(0.0) + (-z.abs()).exp().ln_1p();
            softplus - f64::from(yi) * z
        })
        .sum();
    data / x.len().max(1) as f64 + 0.5 * l2 * dot(&model.w, &model.w)
}

/// Gradient of [`lr_loss`] as `(dw, db)`.
pub fn lr_gradient(model: &LogisticRegression, x: &[Vec<f64>], y: &[u8], l2: f64) -> (Vec<f64>, f64) {
    let n = x.len().max(1) as f64;
    let mut gw: Vec<f64> = model.w.iter().map(|w| l2 * w).collect();
    let mut gb = 0.0;
    for (xi, &yi) in x.iter().zip(y) {
        let r = (sigmoid(dot(&model.w, xi) + model.b) - f64::from(yi)) / n;
        for (g, v) in gw.iter_mut().zip(xi) {
            *g += r * v;
        }
        gb += r;
    }
    (gw, gb)
}

impl LogisticRegression {
    /// Full-batch gradient descent from zero weights.
    pub fn train(x: &[Vec<f64>], y: &[u8], cfg: &LrConfig) -> Result<Self, BaselineError> {
        let dim = check_points(x, y)?;
        if x.is_empty() {
            return Err(BaselineError::TooFewPoints { needed: 1, got: 0 });
        }
        let mut model = Self { w: vec![0.0; dim], b: 0.0 };
        for _ in 0..cfg.epochs {
            let (gw, gb) = lr_gradient(&model, x, y, cfg.l2);
            for (w, g) in model.w.iter_mut().zip(&gw) {
                *w -= cfg.learning_rate * g;
            }
            model.b -= cfg.learning_rate * gb;
            if !model.b.is_finite() || model.w.iter().any(|w| !w.is_finite()) {
                return Err(BaselineError::Divergence("logistic regression"));
            }
        }
        Ok(model)
    }

    pub fn probability(&self, x: &[f64]) -> f64 {
        sigmoid(dot(&self.w, x) + self.b)
    }

    /// 1 only when the probability is strictly above one half.
    pub fn predict(&self, x: &[f64]) -> u8 {
        u8::from(self.probability(x) > 0.5)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvmConfig {
    pub lambda: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        Self {
            lambda: 1e-4,
            iterations: 1000,
            seed: 2014,
        }
    }
}

/// Linear SVM. The bias is the last weight, paired with a constant 1 feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvm {
    pub w: Vec<f64>,
}

fn augmented(x: &[f64]) -> impl Iterator<Item = f64> + '_ {
    x.iter().copied().chain(std::iter::once(1.0))
}

/// `λ/2 |w|² + mean hinge loss` with labels mapped to ±1.
pub fn svm_objective(w: &[f64], x: &[Vec<f64>], y: &[u8], lambda: f64) -> f64 {
    let hinge: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, &yi)| {
            let s = if yi == 1 { 1.0 } else { -1.0 };
            (1.0 - s * w.iter().zip(augmented(xi)).map(|(a, b)| a * b).sum::<f64>()).max(0.0)
        })
        .sum();
    0.5 * lambda * dot(w, w) + hinge / x.len().max(1) as f64
}

impl LinearSvm {
    pub fn train(x: &[Vec<f64>], y: &[u8], cfg: &SvmConfig) -> Result<Self, BaselineError> {
        Self::train_traced(x, y, cfg, |_, _| {})
    }

    /// Pegasos subgradient steps on uniformly sampled points, returning the
    /// averaged iterate. `trace` sees the step index and the running average.
    pub fn train_traced(
        x: &[Vec<f64>],
        y: &[u8],
        cfg: &SvmConfig,
        mut trace: impl FnMut(usize, &[f64]),
    ) -> Result<Self, BaselineError> {
        let dim = check_points(x, y)?;
        if x.is_empty() {
            return Err(BaselineError::TooFewPoints { needed: 1, got: 0 });
        }
        if !(cfg.lambda > 0.0) || cfg.iterations == 0 {
            return Err(BaselineError::Config("svm needs lambda > 0 and iterations >= 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut w = vec![0.0; dim + 1];
        let mut avg = vec![0.0; dim + 1];
        for t in 1..=cfg.iterations {
            let i = rng.gen_range(0..x.len());
            let s = if y[i] == 1 { 1.0 } else { -1.0 };
            let eta = 1.0 / (cfg.lambda * t as f64);
            let margin = s * w.iter().zip(augmented(&x[i])).map(|(a, b)| a * b).sum::<f64>();
            let shrink = 1.0 - eta * cfg.lambda;
            for (wj, xj) in w.iter_mut().zip(augmented(&x[i])) {
                *wj *= shrink;
                if margin < 1.0 {
                    *wj += eta * s * xj;
                }
            }
            for (a, wj) in avg.iter_mut().zip(&w) {
                *a += (wj - *a) / t as f64;
            }
            trace(t, &avg);
        }
        if avg.iter().any(|v| !v.is_finite()) {
            return Err(BaselineError::Divergence("svm"));
        }
        Ok(Self { w: avg })
    }

    pub fn decision(&self, x: &[f64]) -> f64 {
        self.w.iter().zip(augmented(x)).map(|(a, b)| a * b).sum()
    }

    /// Positive decision values give 1; zero gives 0.
    pub fn predict(&self, x: &[f64]) -> u8 {
        u8::from(self.decision(x) > 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineKind {
    Vsm,
    Lsi,
    Lda,
    Knn,
    Lr,
    Svm,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 6] = [
        BaselineKind::Vsm,
        BaselineKind::Lsi,
        BaselineKind::Lda,
        BaselineKind::Knn,
        BaselineKind::Lr,
        BaselineKind::Svm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BaselineKind::Vsm => "vsm",
            BaselineKind::Lsi => "lsi",
            BaselineKind::Lda => "lda",
            BaselineKind::Knn => "knn",
            BaselineKind::Lr => "lr",
            BaselineKind::Svm => "svm",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BaselineConfig {
    pub lda: LdaConfig,
    pub knn_k: usize,
    pub lr: LrConfig,
    pub svm: SvmConfig,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        Self {
            lda: LdaConfig::default(),
            knn_k: 5,
            lr: LrConfig::default(),
            svm: SvmConfig::default(),
        }
    }
}

/// Test-part predictions of one baseline; IR methods also carry their scores
/// and the tuned threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineOutput {
    pub method: BaselineKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scores: Option<Vec<f64>>,
    pub predictions: Vec<u8>,
}

/// Fits every baseline on `split.train` and predicts `split.test`. IR
/// thresholds are tuned on `split.val`.
pub fn run_baselines(split: &DatasetSplit, cfg: &BaselineConfig) -> Result<Vec<BaselineOutput>, BaselineError> {
    if split.train.is_empty() || split.val.is_empty() {
        return Err(BaselineError::EmptyCorpus);
    }
    let ir = IrModels::fit(&split.train, &cfg.lda)?;
    let feats = |pairs: &[LabeledPair]| -> Vec<Vec<f64>> { pairs.iter().map(|p| ir.features(p).to_vec()).collect() };
    let labels = |pairs: &[LabeledPair]| -> Vec<u8> { pairs.iter().map(|p| p.label).collect() };
    let (train_x, val_x, test_x) = (feats(&split.train), feats(&split.val), feats(&split.test));
    let (train_y, val_y) = (labels(&split.train), labels(&split.val));

    let mut out = Vec::with_capacity(BaselineKind::ALL.len());
    for (kind, col) in [(BaselineKind::Vsm, 0), (BaselineKind::Lsi, 1), (BaselineKind::Lda, 3)] {
        let val_scores: Vec<f64> = val_x.iter().map(|f| f[col]).collect();
        let tau = ir_threshold(&val_scores, &val_y)?;
        let scores: Vec<f64> = test_x.iter().map(|f| f[col]).collect();
        out.push(BaselineOutput {
            method: kind,
            threshold: Some(tau),
            predictions: apply_threshold(&scores, tau),
            scores: Some(scores),
        });
    }

    let knn = test_x
        .iter()
        .map(|x| knn_predict(x, &train_x, &train_y, cfg.knn_k))
        .collect::<Result<Vec<_>, _>>()?;
    out.push(BaselineOutput {
        method: BaselineKind::Knn,
        threshold: None,
        scores: None,
        predictions: knn,
    });

    let lr = LogisticRegression::train(&train_x, &train_y, &cfg.lr)?;
    out.push(BaselineOutput {
        method: BaselineKind::Lr,
        threshold: None,
        scores: Some(test_x.iter().map(|x| lr.probability(x)).collect()),
        predictions: test_x.iter().map(|x| lr.predict(x)).collect(),
    });

    let svm = LinearSvm::train(&train_x, &train_y, &cfg.svm)?;
    out.push(BaselineOutput {
        method: BaselineKind::Svm,
        threshold: None,
        scores: Some(test_x.iter().map(|x| svm.decision(x)).collect()),
        predictions: test_x.iter().map(|x| svm.predict(x)).collect(),
    });
    Ok(out)
}
