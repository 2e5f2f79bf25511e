//! Exact entropies and mutual informations of jointly Gaussian variables.
//!
//! Every variable in a [`GaussianScene`] is a linear combination over an
//! independent zero-mean Gaussian basis, so any joint covariance is
//! `C · diag(variances) · Cᵀ` with `C` the stacked coefficient rows. All
//! information quantities reduce to log-determinants of such matrices.
//!
//! Log-determinants come from an incremental Cholesky factorization that
//! visits variables in a canonical (scene) order. A variable whose Schur
//! residual falls below [`SINGULAR_REL_TOL`] times its own variance is a
//! linear function of the variables already factored and is skipped. That
//! gives exact answers for sets containing redundant members, e.g. the state
//! pair `{S1, S2}` under perfect correlation.

use std::collections::HashMap;
use std::f64::consts::{E, PI};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// Relative Schur-residual threshold below which a variable counts as
/// linearly dependent on the ones factored before it.
pub const SINGULAR_REL_TOL: f64 = 1e-12;

/// Logarithm base for reported information quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogBase(f64);

impl LogBase {
    pub const BITS: LogBase = LogBase(2.0);
    pub const NATS: LogBase = LogBase(E);

    pub fn new(base: f64) -> Result<Self> {
        if !(base.is_finite() && base > 0.0 && base != 1.0) {
            return Err(Error::InvalidParams(format!(
                "log base {base} must be positive and != 1"
            )));
        }
        Ok(LogBase(base))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Converts a quantity measured in nats into this base.
    #[inline]
    pub fn from_nats(self, nats: f64) -> f64 {
        if self.0 == E {
            nats
        } else {
            nats / self.0.ln()
        }
    }

    /// `½·log(x)` in this base; the Gaussian capacity building block.
    #[inline]
    pub fn half_log(self, x: f64) -> f64 {
        self.from_nats(0.5 * x.ln())
    }
}

impl Default for LogBase {
    fn default() -> Self {
        LogBase::BITS
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisElement {
    pub name: String,
    pub variance: f64,
}

/// Ordered set of independent zero-mean Gaussian primitives.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Basis {
    elements: Vec<BasisElement>,
}

impl Basis {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends an element. Zero variance is allowed (the element is then the
    /// constant zero); negative or non-finite variance is not.
    pub fn push(&mut self, name: impl Into<String>, variance: f64) -> Result<()> {
        let name = name.into();
        if !(variance.is_finite() && variance >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "variance of basis element `{name}` must be finite and >= 0, got {variance}"
            )));
        }
        if self.index_of(&name).is_some() {
            return Err(Error::DuplicateName(name));
        }
        self.elements.push(BasisElement { name, variance });
        Ok(())
    }

    pub fn with(mut self, name: impl Into<String>, variance: f64) -> Result<Self> {
        self.push(name, variance)?;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.name == name)
    }

    pub fn variance(&self, name: &str) -> Option<f64> {
        self.index_of(name).map(|i| self.elements[i].variance)
    }
}

/// A named linear combination of basis elements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandVec {
    pub name: String,
    pub coeffs: Vec<f64>,
}

impl RandVec {
    /// Coefficient on the basis element at `index`.
    pub fn coeff(&self, index: usize) -> f64 {
        self.coeffs[index]
    }

    pub fn scaled(&self, name: impl Into<String>, k: f64) -> RandVec {
        RandVec {
            name: name.into(),
            coeffs: self.coeffs.iter().map(|c| k * c).collect(),
        }
    }
}

/// A basis plus a set of named variables defined over it.
///
/// Construction registers every basis element as a variable of the same
/// name, so `X1`, `S2`, ... can be used directly in queries.
#[derive(Debug, Clone)]
pub struct GaussianScene {
    basis: Basis,
    vars: Vec<RandVec>,
    index: HashMap<String, usize>,
}

impl GaussianScene {
    pub fn new(basis: Basis) -> Self {
        let n = basis.len();
        let mut scene = GaussianScene {
            basis,
            vars: Vec::with_capacity(n + 8),
            index: HashMap::new(),
        };
        for i in 0..n {
            let mut coeffs = vec![0.0; n];
            coeffs[i] = 1.0;
            let name = scene.basis.elements[i].name.clone();
            scene.index.insert(name.clone(), i);
            scene.vars.push(RandVec { name, coeffs });
        }
        scene
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn vars(&self) -> &[RandVec] {
        &self.vars
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn var(&self, name: &str) -> Result<&RandVec> {
        self.index
            .get(name)
            .map(|&i| &self.vars[i])
            .ok_or_else(|| Error::UnknownVariable(name.to_owned()))
    }

    /// Builds (without inserting) the combination `Σ kᵢ·varᵢ` of existing
    /// variables.
    pub fn combination(&self, name: impl Into<String>, terms: &[(&str, f64)]) -> Result<RandVec> {
        let mut coeffs = vec![0.0; self.basis.len()];
        for &(var, k) in terms {
            let rv = self.var(var)?;
            for (c, v) in coeffs.iter_mut().zip(&rv.coeffs) {
                *c += k * v;
            }
        }
        Ok(RandVec {
            name: name.into(),
            coeffs,
        })
    }

    pub fn insert(&mut self, rv: RandVec) -> Result<()> {
        if rv.coeffs.len() != self.basis.len() {
            return Err(Error::LengthMismatch {
                name: rv.name,
                expected: self.basis.len(),
                got: rv.coeffs.len(),
            });
        }
        if let Some(bad) = rv.coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "coefficient {bad} of `{}` is not finite",
                rv.name
            )));
        }
        if self.index.contains_key(&rv.name) {
            return Err(Error::DuplicateName(rv.name));
        }
        self.index.insert(rv.name.clone(), self.vars.len());
        self.vars.push(rv);
        Ok(())
    }

    /// Inserts the combination `Σ kᵢ·varᵢ` under `name`.
    pub fn define(&mut self, name: &str, terms: &[(&str, f64)]) -> Result<()> {
        let rv = self.combination(name, terms)?;
        self.insert(rv)
    }

    /// Returns a copy of the scene with `vars` added (replacing nothing).
    pub fn with_vars<I: IntoIterator<Item = RandVec>>(&self, vars: I) -> Result<Self> {
        let mut scene = self.clone();
        for rv in vars {
            scene.insert(rv)?;
        }
        Ok(scene)
    }

    fn indices(&self, names: &[&str]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|n| {
                self.index
                    .get(*n)
                    .copied()
                    .ok_or_else(|| Error::UnknownVariable((*n).to_owned()))
            })
            .collect()
    }

    fn covariance_of(&self, idx: &[usize]) -> DMatrix<f64> {
        let vars = &self.basis.elements;
        DMatrix::from_fn(idx.len(), idx.len(), |r, c| {
            let (x, y) = (&self.vars[idx[r]].coeffs, &self.vars[idx[c]].coeffs);
            x.iter().zip(y).zip(vars).map(|((a, b), e)| a * b * e.variance).sum()
        })
    }

    /// Joint covariance `C·diag(var)·Cᵀ` of the named variables, in order.
    pub fn covariance(&self, names: &[&str]) -> Result<DMatrix<f64>> {
        let idx = self.indices(names)?;
        Ok(self.covariance_of(&idx))
    }

    /// Covariance of every variable in the scene, in definition order.
    pub fn full_covariance(&self) -> DMatrix<f64> {
        let idx: Vec<usize> = (0..self.vars.len()).collect();
        self.covariance_of(&idx)
    }

    /// All eigenvalues of the full covariance are `>= -1e-9 · trace`.
    pub fn is_psd(&self) -> bool {
        let cov = self.full_covariance();
        let trace = cov.trace();
        cov.symmetric_eigen()
            .eigenvalues
            .iter()
            .all(|&l| l >= -1e-9 * trace.max(f64::MIN_POSITIVE))
    }

    /// Differential entropy `½·log((2πe)ⁿ·det Σ)`.
    ///
    /// Returns [`Error::Degenerate`] when the variables are linearly
    /// dependent.
    pub fn entropy(&self, names: &[&str], base: LogBase) -> Result<f64> {
        if names.is_empty() {
            return Err(Error::EmptySet("entropy"));
        }
        let (cov, local) = self.local_covariance(&[names])?;
        gaussian_entropy_nats(&cov, &local[0])
            .map(|h| base.from_nats(h))
            .ok_or_else(|| Error::Degenerate(names.iter().map(|s| s.to_string()).collect()))
    }

    /// `I(A;B)`. Returns `f64::INFINITY` when `A` and `B` share a
    /// deterministic component.
    pub fn mutual_info(&self, a: &[&str], b: &[&str], base: LogBase) -> Result<f64> {
        self.cond_mutual_info(a, b, &[], base)
    }

    /// `I(A;B|C)`; `C` may be empty.
    pub fn cond_mutual_info(&self, a: &[&str], b: &[&str], c: &[&str], base: LogBase) -> Result<f64> {
        if a.is_empty() {
            return Err(Error::EmptySet("A"));
        }
        if b.is_empty() {
            return Err(Error::EmptySet("B"));
        }
        for (x, y) in [(a, b), (a, c), (b, c)] {
            if let Some(dup) = x.iter().find(|n| y.contains(n)) {
                return Err(Error::OverlappingSets((*dup).to_owned()));
            }
        }
        let (cov, local) = self.local_covariance(&[a, b, c])?;
        Ok(base.from_nats(gaussian_mi_nats(&cov, &local[0], &local[1], &local[2])))
    }

    /// Covariance over the union of `groups` plus each group's positions in
    /// it, sorted in scene order so results do not depend on argument order.
    fn local_covariance(&self, groups: &[&[&str]]) -> Result<(DMatrix<f64>, Vec<Vec<usize>>)> {
        let mut global: Vec<usize> = Vec::new();
        let mut per_group = Vec::with_capacity(groups.len());
        for g in groups {
            let idx = self.indices(g)?;
            global.extend(&idx);
            per_group.push(idx);
        }
        global.sort_unstable();
        global.dedup();
        let local = per_group
            .into_iter()
            .map(|idx| {
                let mut l: Vec<usize> = idx
                    .iter()
                    .map(|i| global.binary_search(i).expect("index collected above"))
                    .collect();
                l.sort_unstable();
                l.dedup();
                l
            })
            .collect();
        Ok((self.covariance_of(&global), local))
    }
}

/// Incremental Cholesky factor over a subset of a covariance matrix.
struct Factor<'a> {
    cov: &'a DMatrix<f64>,
    kept: Vec<usize>,
    // Row `k` holds the first `k + 1` entries of row `k` of L.
    rows: Vec<Vec<f64>>,
}

impl<'a> Factor<'a> {
    fn new(cov: &'a DMatrix<f64>) -> Self {
        Factor {
            cov,
            kept: Vec::new(),
            rows: Vec::new(),
        }
    }

    /// Adds variable `i`; returns its Schur residual if independent of the
    /// variables already kept, `None` if it is (numerically) a linear
    /// function of them.
    fn push(&mut self, i: usize) -> Option<f64> {
        let diag = self.cov[(i, i)];
        if diag.is_nan() || diag <= 0.0 {
            return None;
        }
        let mut row = Vec::with_capacity(self.kept.len() + 1);
        for (k, &j) in self.kept.iter().enumerate() {
            let lj = &self.rows[k];
            let dot: f64 = row.iter().zip(lj).map(|(x, y)| x * y).sum();
            row.push((self.cov[(i, j)] - dot) / lj[k]);
        }
        let residual = diag - row.iter().map(|x| x * x).sum::<f64>();
        if residual <= SINGULAR_REL_TOL * diag {
            return None;
        }
        row.push(residual.sqrt());
        self.kept.push(i);
        self.rows.push(row);
        Some(residual)
    }

    /// Pushes `set` in order; returns `(Σ ln residual over kept, kept, any_dropped)`.
    fn extend(&mut self, set: &[usize]) -> (f64, Vec<usize>, bool) {
        let mut log_det = 0.0;
        let mut kept = Vec::with_capacity(set.len());
        let mut dropped = false;
        for &i in set {
            match self.push(i) {
                Some(r) => {
                    log_det += r.ln();
                    kept.push(i);
                }
                None => dropped = true,
            }
        }
        (log_det, kept, dropped)
    }
}

/// `ln det Σ[set | cond]` over the maximal independent part of `set`, the
/// kept members, and whether any member was dropped as dependent.
fn conditional_log_det(cov: &DMatrix<f64>, set: &[usize], cond: &[usize]) -> (f64, Vec<usize>, bool) {
    let mut f = Factor::new(cov);
    f.extend(cond);
    f.extend(set)
}

/// Differential entropy in nats of the variables at `set` (indices into
/// `cov`); `None` if they are linearly dependent.
pub fn gaussian_entropy_nats(cov: &DMatrix<f64>, set: &[usize]) -> Option<f64> {
    let (log_det, _, dropped) = conditional_log_det(cov, set, &[]);
    if dropped {
        return None;
    }
    let n = set.len() as f64;
    Some(0.5 * (n * (2.0 * PI * E).ln() + log_det))
}

/// `I(A;B|C)` in nats for index sets into `cov`.
///
/// Members of `A` (or `B`) that are linear functions of `C` and the other
/// members are dropped first; if the reduced union is still singular the
/// result is `+∞`.
pub fn gaussian_mi_nats(cov: &DMatrix<f64>, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
    let (ld_a, kept_a, _) = conditional_log_det(cov, a, c);
    let (ld_b, kept_b, _) = conditional_log_det(cov, b, c);
    if kept_a.is_empty() || kept_b.is_empty() {
        return 0.0;
    }
    let mut union: Vec<usize> = kept_a.iter().chain(&kept_b).copied().collect();
    union.sort_unstable();
    let (ld_ab, _, dropped) = conditional_log_det(cov, &union, c);
    if dropped {
        return f64::INFINITY;
    }
    0.5 * (ld_a + ld_b - ld_ab)
}
