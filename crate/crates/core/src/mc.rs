//! Monte-Carlo cross-validation: draw i.i.d. samples of a scene, form the
//! sample covariance and plug it into the same Gaussian MI formula used for
//! the exact values.
//!
//! Sampling is split into fixed-size blocks. Block `k` draws from ChaCha20
//! seeded with `seed` on stream `k`, and block sums are reduced in block
//! order, so output depends only on `(scene, names, n, seed)` and not on
//! the thread count.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{gaussian_mi_nats, GaussianScene, LogBase};

pub const BLOCK: usize = 1 << 16;
pub const GENERATOR: &str =
    "ChaCha20 (rand_chacha); seed_from_u64(seed), stream = block index, 65536 samples per block";
pub const DEFAULT_SAMPLES: usize = 1_000_000;
/// Default tolerance for single MI terms, in bits.
pub const MI_TOL_BITS: f64 = 0.01;
/// Default tolerance for sums of several MI terms, in bits.
pub const COMPOSITE_TOL_BITS: f64 = 0.02;

struct Moments {
    sum: DVector<f64>,
    cross: DMatrix<f64>,
}

fn block_moments(coeffs: &DMatrix<f64>, sd: &[f64], len: usize, seed: u64, block: u64) -> Moments {
    let (k, m) = coeffs.shape();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let mut z = DVector::zeros(m);
    let mut y = DVector::zeros(k);
    let mut sum = DVector::zeros(k);
    let mut cross = DMatrix::zeros(k, k);
    for _ in 0..len {
        for (zi, s) in z.iter_mut().zip(sd) {
            let g: f64 = rng.sample(StandardNormal);
            *zi = g * s;
        }
        coeffs.mul_to(&z, &mut y);
        sum += &y;
        cross.syger(1.0, &y, &y, 1.0);
    }
    Moments { sum, cross }
}

/// Unbiased sample covariance of `names` from `n` i.i.d. draws of the
/// scene's basis. Deterministic for fixed `(scene, names, n, seed)`.
pub fn sample_covariance(scene: &GaussianScene, names: &[&str], n: usize, seed: u64) -> Result<DMatrix<f64>> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 samples, got {n}")));
    }
    let m = scene.basis().len();
    let mut coeffs = DMatrix::zeros(names.len(), m);
    for (i, name) in names.iter().enumerate() {
        let rv = scene.var(name)?;
        for j in 0..m {
            coeffs[(i, j)] = rv.coeff(j);
        }
    }
    let sd: Vec<f64> = scene.basis().elements().iter().map(|e| e.variance.sqrt()).collect();
    let blocks = n.div_ceil(BLOCK);
    let parts: Vec<Moments> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let len = BLOCK.min(n - b * BLOCK);
            block_moments(&coeffs, &sd, len, seed, b as u64)
        })
        .collect();

    let k = names.len();
    let mut sum = DVector::zeros(k);
    let mut cross = DMatrix::zeros(k, k);
    for p in &parts {
        sum += &p.sum;
        cross += &p.cross;
    }
    // syger fills the lower triangle only.
    let nf = n as f64;
    let mean = &sum / nf;
    let mut cov = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..=i {
            let c = (cross[(i, j)] - nf * mean[i] * mean[j]) / (nf - 1.0);
            cov[(i, j)] = c;
            cov[(j, i)] = c;
        }
    }
    Ok(cov)
}

/// `I(A;B|C)`; `C` may be empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MiTerm {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub c: Vec<String>,
}

impl MiTerm {
    pub fn new(a: &[&str], b: &[&str], c: &[&str]) -> Self {
        let own = |s: &[&str]| s.iter().map(|x| x.to_string()).collect();
        MiTerm {
            a: own(a),
            b: own(b),
            c: own(c),
        }
    }
}

/// Signed sum of MI terms, e.g. `I(U;V,Y1) - I(S1,S2;U)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McQuery {
    pub description: String,
    pub terms: Vec<(f64, MiTerm)>,
}

impl McQuery {
    pub fn mi(a: &[&str], b: &[&str]) -> Self {
        Self::cmi(a, b, &[])
    }

    pub fn cmi(a: &[&str], b: &[&str], c: &[&str]) -> Self {
        let description = if c.is_empty() {
            format!("I({};{})", a.join(","), b.join(","))
        } else {
            format!("I({};{}|{})", a.join(","), b.join(","), c.join(","))
        };
        McQuery {
            description,
            terms: vec![(1.0, MiTerm::new(a, b, c))],
        }
    }

    pub fn combo(description: impl Into<String>, terms: Vec<(f64, MiTerm)>) -> Self {
        McQuery {
            description: description.into(),
            terms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McPair {
    pub description: String,
    pub analytic: f64,
    pub empirical: f64,
    pub abs_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub generator: &'static str,
    pub pairs: Vec<McPair>,
    pub n_samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub pass: bool,
}

fn evaluate(cov: &DMatrix<f64>, index: &[String], q: &McQuery, base: LogBase) -> f64 {
    let idx = |set: &[String]| -> Vec<usize> {
        set.iter()
            .map(|n| index.iter().position(|x| x == n).expect("indexed"))
            .collect()
    };
    let mut total = 0.0;
    for (w, t) in &q.terms {
        let v = base.from_nats(gaussian_mi_nats(cov, &idx(&t.a), &idx(&t.b), &idx(&t.c)));
        // 0·∞ stays 0 for unused terms.
        if *w != 0.0 {
            total += w * v;
        }
    }
    total
}

/// Compares exact and plug-in values of every query. A query whose exact
/// value is infinite passes only if the plug-in value is infinite with the
/// same sign, which checks that dependence is detected from samples too.
pub fn validate(
    scene: &GaussianScene,
    queries: &[McQuery],
    n: usize,
    seed: u64,
    tol: f64,
    base: LogBase,
) -> Result<McReport> {
    let mut names = BTreeSet::new();
    for q in queries {
        for (_, t) in &q.terms {
            if t.a.is_empty() || t.b.is_empty() {
                return Err(Error::EmptySet("mutual information argument"));
            }
            for name in t.a.iter().chain(&t.b).chain(&t.c) {
                scene.var(name)?;
                names.insert(name.clone());
            }
        }
    }
    let index: Vec<String> = names.into_iter().collect();
    let refs: Vec<&str> = index.iter().map(String::as_str).collect();
    let exact = scene.covariance(&refs)?;
    let sampled = sample_covariance(scene, &refs, n, seed)?;

    let pairs: Vec<McPair> = queries
        .iter()
        .map(|q| {
            let analytic = evaluate(&exact, &index, q, base);
            let empirical = evaluate(&sampled, &index, q, base);
            let abs_err = if analytic.is_infinite() && analytic == empirical {
                0.0
            } else {
                (analytic - empirical).abs()
            };
            McPair {
                description: q.description.clone(),
                analytic,
                empirical,
                abs_err,
            }
        })
        .collect();
    let pass = pairs.iter().all(|p| p.abs_err <= tol);
    Ok(McReport {
        generator: GENERATOR,
        pairs,
        n_samples: n,
        seed,
        tol,
        pass,
    })
}
