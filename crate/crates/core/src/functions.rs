//! Functions and measures on a finite group.
//!
//! On a finite group the Fourier algebra, the Fourier–Stieltjes algebra and the
//! completely bounded multipliers all coincide with the space of all complex
//! functions, so a single [`GroupFunction`] type serves every role.
//!
//! Convolution of a measure with a function is `(μ ⊛ φ)(x) = Σ_t μ(t) φ(x t)`,
//! which is the convention under which `Θ(μ)(M_φ) = M_{μ⊛φ}`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{characters, generated_subgroup, Group, GroupTable, Subgroup};
use crate::linalg::{is_hermitian_psd, CMatrix, Tolerances, ONE, ZERO};

pub(crate) fn check_same_group(a: &Group, b: &Group) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::GroupMismatch(a.name().to_string(), b.name().to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    group: Group,
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(group: &Group, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::DimensionMismatch { expected: group.order(), got: values.len() });
        }
        Ok(GroupFunction { group: group.clone(), values })
    }

    pub fn from_fn(group: &Group, f: impl FnMut(usize) -> Complex64) -> Self {
        GroupFunction { group: group.clone(), values: group.elements().map(f).collect() }
    }

    pub fn from_real(group: &Group, values: &[f64]) -> Result<Self> {
        Self::new(group, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn constant(group: &Group, c: Complex64) -> Self {
        Self::from_fn(group, |_| c)
    }

    pub fn ones(group: &Group) -> Self {
        Self::constant(group, ONE)
    }

    pub fn delta(group: &Group, x: usize) -> Self {
        Self::from_fn(group, |y| if y == x { ONE } else { ZERO })
    }

    pub fn indicator(group: &Group, members: &[usize]) -> Self {
        Self::from_fn(group, |y| if members.contains(&y) { ONE } else { ZERO })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, x: usize) -> Complex64 {
        self.values[x]
    }

    pub fn pointwise(&self, other: &GroupFunction) -> Result<GroupFunction> {
        check_same_group(&self.group, &other.group)?;
        Ok(GroupFunction {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    pub fn scale(&self, c: Complex64) -> GroupFunction {
        GroupFunction { group: self.group.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    pub fn mean(&self) -> Complex64 {
        self.sum() / self.values.len() as f64
    }

    /// `{x : |φ(x)| > entry_tol}`
    pub fn support(&self, tol: &Tolerances) -> Vec<usize> {
        (0..self.values.len()).filter(|&x| self.values[x].norm() > tol.entry_tol).collect()
    }

    pub fn max_abs_diff(&self, other: &GroupFunction) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn to_document(&self) -> FunctionDocument {
        FunctionDocument {
            group: self.group.name().to_string(),
            values: self.values.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_document(group: &Group, doc: &FunctionDocument) -> Result<Self> {
        if doc.group != group.name() {
            return Err(Error::GroupMismatch(doc.group.clone(), group.name().to_string()));
        }
        Self::new(group, doc.values.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
    }
}

/// `{"group": str, "values": [[re, im]]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionDocument {
    pub group: String,
    pub values: Vec<[f64; 2]>,
}

/// `{"group": str, "weights": [num]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureDocument {
    pub group: String,
    pub weights: Vec<f64>,
}

/// A complex measure on the group; probability measures are the nonnegative normalized ones.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    group: Group,
    weights: Vec<Complex64>,
}

impl Measure {
    pub fn new(group: &Group, weights: Vec<Complex64>) -> Result<Self> {
        if weights.len() != group.order() {
            return Err(Error::DimensionMismatch { expected: group.order(), got: weights.len() });
        }
        Ok(Measure { group: group.clone(), weights })
    }

    pub fn from_real(group: &Group, weights: &[f64]) -> Result<Self> {
        Self::new(group, weights.iter().map(|&w| Complex64::new(w, 0.0)).collect())
    }

    pub fn dirac(group: &Group, x: usize) -> Self {
        let mut w = vec![ZERO; group.order()];
        w[x] = ONE;
        Measure { group: group.clone(), weights: w }
    }

    pub fn uniform(group: &Group) -> Self {
        let n = group.order();
        Measure { group: group.clone(), weights: vec![Complex64::new(1.0 / n as f64, 0.0); n] }
    }

    /// Uniform probability on the listed atoms.
    pub fn uniform_on(group: &Group, atoms: &[usize]) -> Self {
        let mut w = vec![ZERO; group.order()];
        for &a in atoms {
            w[a] += Complex64::new(1.0 / atoms.len() as f64, 0.0);
        }
        Measure { group: group.clone(), weights: w }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn weight(&self, x: usize) -> Complex64 {
        self.weights[x]
    }

    pub fn is_probability(&self, tol: &Tolerances) -> bool {
        let real = self.weights.iter().all(|w| w.im.abs() <= tol.entry_tol && w.re >= -tol.entry_tol);
        let total: Complex64 = self.weights.iter().sum();
        real && (total - ONE).norm() <= tol.entry_tol * self.weights.len() as f64
    }

    pub fn require_probability(&self, tol: &Tolerances) -> Result<()> {
        if self.is_probability(tol) {
            Ok(())
        } else {
            Err(Error::NotProbability)
        }
    }

    /// `{x : μ(x) > entry_tol}`
    pub fn support(&self, tol: &Tolerances) -> Vec<usize> {
        (0..self.weights.len()).filter(|&x| self.weights[x].norm() > tol.entry_tol).collect()
    }

    /// `(μ ⊛ ν)(x) = Σ_{st = x} μ(s) ν(t)`
    pub fn convolve(&self, other: &Measure) -> Result<Measure> {
        check_same_group(&self.group, &other.group)?;
        let g = &self.group;
        let mut w = vec![ZERO; g.order()];
        for s in g.elements() {
            if self.weights[s] == ZERO {
                continue;
            }
            for t in g.elements() {
                w[g.mul(s, t)] += self.weights[s] * other.weights[t];
            }
        }
        Ok(Measure { group: g.clone(), weights: w })
    }

    /// `μ^{⊛k}` with `μ^{⊛0} = δ_e`.
    pub fn power(&self, k: usize) -> Measure {
        let mut out = Measure::dirac(&self.group, 0);
        for _ in 0..k {
            out = out.convolve(self).expect("same group");
        }
        out
    }

    pub fn to_document(&self) -> MeasureDocument {
        MeasureDocument {
            group: self.group.name().to_string(),
            weights: self.weights.iter().map(|w| w.re).collect(),
        }
    }

    pub fn from_document(group: &Group, doc: &MeasureDocument) -> Result<Self> {
        if doc.group != group.name() {
            return Err(Error::GroupMismatch(doc.group.clone(), group.name().to_string()));
        }
        Self::from_real(group, &doc.weights)
    }
}

/// Gram matrix `K[x][y] = σ(x⁻¹y)` and its smallest eigenvalue.
#[derive(Debug, Clone)]
pub struct PdWitness {
    pub gram: CMatrix,
    pub min_eigenvalue: f64,
}

pub fn gram_matrix(sigma: &GroupFunction) -> CMatrix {
    let g = sigma.group();
    let n = g.order();
    CMatrix::from_fn(n, n, |x, y| sigma.at(g.mul(g.inv(x), y)))
}

pub fn is_positive_definite(sigma: &GroupFunction, tol: &Tolerances) -> (bool, PdWitness) {
    let gram = gram_matrix(sigma);
    let (psd, min_eigenvalue) = is_hermitian_psd(&gram, tol);
    (psd, PdWitness { gram, min_eigenvalue })
}

/// Positive definite with `σ(e) = 1`, i.e. a state of the group algebra.
pub fn is_p1(sigma: &GroupFunction, tol: &Tolerances) -> bool {
    (sigma.at(0) - ONE).norm() <= tol.eq_tol && is_positive_definite(sigma, tol).0
}

/// `G_σ = {x : |σ(x) − 1| ≤ eq_tol}`.
///
/// For `σ ∈ P¹(G)` the level set must be a subgroup; failure of that check
/// means the tolerance is misconfigured.
pub fn level_set_one(sigma: &GroupFunction, tol: &Tolerances) -> Result<Vec<usize>> {
    let g = sigma.group();
    let members: Vec<usize> = g.elements().filter(|&x| (sigma.at(x) - ONE).norm() <= tol.eq_tol).collect();
    if is_p1(sigma, tol) && Subgroup::new(g, members.iter().copied()).is_none() {
        return Err(Error::LevelSetNotSubgroup(tol.eq_tol));
    }
    Ok(members)
}

/// `G_σ` as a subgroup; requires `σ ∈ P¹(G)`.
pub fn level_subgroup(sigma: &GroupFunction, tol: &Tolerances) -> Result<Subgroup> {
    if !is_p1(sigma, tol) {
        return Err(Error::NotPositiveDefiniteUnit("level subgroup needs sigma in P1(G)".into()));
    }
    let members = level_set_one(sigma, tol)?;
    Subgroup::new(sigma.group(), members).ok_or(Error::LevelSetNotSubgroup(tol.eq_tol))
}

/// Support generates the whole group.
pub fn is_adapted_measure(mu: &Measure, tol: &Tolerances) -> Result<bool> {
    mu.require_probability(tol)?;
    Ok(generated_subgroup(mu.group(), &mu.support(tol))?.is_whole())
}

/// `G_σ = {e}`; requires `σ ∈ P¹(G)`.
pub fn is_adapted_pd(sigma: &GroupFunction, tol: &Tolerances) -> Result<bool> {
    if !is_p1(sigma, tol) {
        return Err(Error::NotPositiveDefiniteUnit("adaptedness is defined on P1(G)".into()));
    }
    Ok(level_set_one(sigma, tol)? == vec![0])
}

/// `δ_e`: positive definite, `δ_e(e) = 1`, level set `{e}`.
pub fn construct_adapted(group: &Group) -> GroupFunction {
    GroupFunction::delta(group, 0)
}

/// `μ̂(γ) = Σ_x conj(γ(x)) μ(x)`, one value per character in the order of [`characters`].
pub fn fs_transform(mu: &Measure) -> Result<Vec<Complex64>> {
    let chars = characters(mu.group())?;
    Ok(chars
        .iter()
        .map(|chi| chi.values.iter().zip(mu.weights()).map(|(c, w)| c.conj() * w).sum())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptednessReport {
    /// Support of μ generates G.
    pub generates: bool,
    /// Indices of the characters with `|μ̂(γ) − 1| ≤ eq_tol`.
    pub fourier_level_set: Vec<usize>,
    /// The Fourier level set is exactly the trivial character.
    pub fourier_trivial: bool,
    pub agree: bool,
    pub eq_tol: f64,
}

/// Compares "support generates G" with "only the trivial character has `μ̂(γ) = 1`".
pub fn check_adaptedness_equivalence(mu: &Measure, tol: &Tolerances) -> Result<AdaptednessReport> {
    if !mu.group().is_abelian() {
        return Err(Error::Nonabelian);
    }
    let generates = is_adapted_measure(mu, tol)?;
    let transform = fs_transform(mu)?;
    let fourier_level_set: Vec<usize> =
        (0..transform.len()).filter(|&k| (transform[k] - ONE).norm() <= tol.eq_tol).collect();
    // character 0 is the trivial one
    let fourier_trivial = fourier_level_set == vec![0];
    Ok(AdaptednessReport {
        generates,
        fourier_level_set,
        fourier_trivial,
        agree: generates == fourier_trivial,
        eq_tol: tol.eq_tol,
    })
}

/// `(μ ⊛ φ)(x) = Σ_t μ(t) φ(x t)`
pub fn convolve(mu: &Measure, phi: &GroupFunction) -> Result<GroupFunction> {
    check_same_group(mu.group(), phi.group())?;
    let g = mu.group();
    Ok(GroupFunction::from_fn(g, |x| {
        g.elements().map(|t| mu.weight(t) * phi.at(g.mul(x, t))).sum()
    }))
}

/// Matrix of `φ ↦ μ ⊛ φ` acting on value vectors.
pub fn convolution_matrix(mu: &Measure) -> CMatrix {
    let g: &GroupTable = mu.group();
    let n = g.order();
    let mut c = CMatrix::zeros(n, n);
    for x in 0..n {
        for t in 0..n {
            c[(x, g.mul(x, t))] += mu.weight(t);
        }
    }
    c
}
