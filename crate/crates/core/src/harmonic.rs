//! Fixed-point spaces, the three-route comparison for `Θ̂(σ)`, limit products and the ideal suite.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::actions::{bullet, left_regular, pre_adjoint, theta, theta_hat, OperatorMatrix, Superoperator};
use crate::error::{Error, Result};
use crate::functions::{
    check_same_group, convolution_matrix, is_adapted_measure, is_p1, level_set_one, GroupFunction, Measure,
};
use crate::group::{all_subgroups, generated_subgroup, Group, Subgroup};
use crate::linalg::{
    double_commutant, commutant, max_abs, null_space, range, unvectorize, vectorize, CMatrix, CVector, Subspace,
    Tolerances, ONE, ZERO,
};
use crate::random;

/// `{T : Φ(T) = T}` as vectorized operators.
pub fn fixed_points(phi: &Superoperator, tol: &Tolerances) -> Subspace {
    let d = phi.to_dense();
    let k = d.nrows();
    null_space(&(d - CMatrix::identity(k, k)), tol)
}

/// `{φ : μ ⊛ φ = φ}`
pub fn harmonic_functions(mu: &Measure, tol: &Tolerances) -> Result<Subspace> {
    mu.require_probability(tol)?;
    let n = mu.group().order();
    Ok(null_space(&(convolution_matrix(mu) - CMatrix::identity(n, n)), tol))
}

/// `{Σ c_x λ(x) : σ(x) c_x = c_x}` as vectorized operators.
pub fn harmonic_functionals(sigma: &GroupFunction, tol: &Tolerances) -> Subspace {
    let g = sigma.group();
    let n = g.order();
    let diag = CMatrix::from_fn(n, n, |x, y| if x == y { sigma.at(x) - ONE } else { ZERO });
    let coeffs = null_space(&diag, tol);
    let ops: Vec<CVector> = coeffs
        .basis_vectors()
        .map(|c| {
            let mut m = CMatrix::zeros(n, n);
            for x in 0..n {
                m += left_regular(g, x).matrix() * c[x];
            }
            vectorize(&m)
        })
        .collect();
    Subspace::span(n * n, &ops, tol)
}

/// `{T : Θ̂(σ)(T) = T}`
pub fn harmonic_operators(sigma: &GroupFunction, tol: &Tolerances) -> Subspace {
    fixed_points(&theta_hat(sigma), tol)
}

/// Span of the matrix units `E_ab` with `a·b⁻¹` in `stripes`.
pub fn stripe_space(group: &Group, stripes: &[usize]) -> Subspace {
    let n = group.order();
    let mut cols = Vec::new();
    for a in group.elements() {
        for b in group.elements() {
            if stripes.contains(&group.div(a, b)) {
                cols.push(a * n + b);
            }
        }
    }
    let basis = CMatrix::from_fn(n * n, cols.len(), |r, c| if r == cols[c] { ONE } else { ZERO });
    Subspace::from_orthonormal(basis)
}

fn diagonal_units(n: usize) -> Vec<CMatrix> {
    (0..n).map(|a| crate::linalg::matrix_unit(n, a, a)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremMode {
    /// `σ ∈ P¹(G)`: all three routes must coincide.
    Full,
    /// Otherwise only `B ⊆ A ⊆ C` is asserted.
    InclusionOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicReport {
    pub group: String,
    pub parameter: String,
    pub mode: TheoremMode,
    pub level_set: Vec<usize>,
    /// Dimensions of `Fix(Θ̂(σ))`, `(λ(G_σ) ∪ L∞(G))''` and `B_{G_σ}`.
    pub dims: [usize; 3],
    pub expected_dim: usize,
    /// Projector distances `A–B`, `A–C`, `B–C`.
    pub distances: [f64; 3],
    /// Containment defects of `B ⊆ A` and `A ⊆ C`.
    pub inclusion_defects: [f64; 2],
    pub eq_tol: f64,
    pub pass: bool,
}

/// Compares `Fix(Θ̂(σ))`, `({λ(h) : h ∈ G_σ} ∪ L∞(G))''` and `span{E_ab : ab⁻¹ ∈ G_σ}`.
pub fn verify_main_theorem(sigma: &GroupFunction, label: &str, tol: &Tolerances) -> Result<HarmonicReport> {
    let g = sigma.group();
    let n = g.order();
    let mode = if is_p1(sigma, tol) { TheoremMode::Full } else { TheoremMode::InclusionOnly };
    let level_set = level_set_one(sigma, tol)?;

    let a = harmonic_operators(sigma, tol);
    let mut gens: Vec<CMatrix> = level_set.iter().map(|&h| left_regular(g, h).into_matrix()).collect();
    gens.extend(diagonal_units(n));
    let b = match double_commutant(n, &gens, tol) {
        Ok(b) => b,
        Err(Error::NotAnAlgebra(_)) if mode == TheoremMode::InclusionOnly => commutant(n, &commutant(n, &gens, tol)?.basis_matrices(n), tol)?,
        Err(e) => return Err(e),
    };
    let c = stripe_space(g, &level_set);

    let distances = [a.distance(&b)?, a.distance(&c)?, b.distance(&c)?];
    let inclusion_defects = [b.containment_defect(&a)?, a.containment_defect(&c)?];
    let expected_dim = n * level_set.len();
    let dims = [a.dim(), b.dim(), c.dim()];
    let pass = match mode {
        TheoremMode::Full => {
            distances.iter().all(|&d| d <= tol.eq_tol) && dims.iter().all(|&d| d == expected_dim)
        }
        TheoremMode::InclusionOnly => inclusion_defects.iter().all(|&d| d <= tol.eq_tol),
    };
    Ok(HarmonicReport {
        group: g.name().to_string(),
        parameter: label.to_string(),
        mode,
        level_set,
        dims,
        expected_dim,
        distances,
        inclusion_defects,
        eq_tol: tol.eq_tol,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitResult<T> {
    pub value: T,
    pub iterations: usize,
    /// Max-norm difference of the last two Cesàro averages.
    pub residual: f64,
    /// Set when an input is not a fixed point of the averaging map.
    pub warning: Option<String>,
}

/// Cesàro averages `(1/N) Σ_{n=1}^N h_n` of `h_n = step(h_{n−1})`, `h_0 = start`.
fn cesaro(start: CMatrix, step: impl Fn(&CMatrix) -> CMatrix, max_n: usize, tol: f64) -> Result<(CMatrix, usize, f64)> {
    let mut h = step(&start);
    let mut sum = h.clone();
    let mut prev = h.clone();
    let mut residual = f64::INFINITY;
    for n in 2..=max_n.max(1) {
        h = step(&h);
        sum += &h;
        let avg = sum.unscale(n as f64);
        residual = max_abs(&(&avg - &prev));
        if residual <= tol {
            return Ok((avg, n, residual));
        }
        prev = avg;
    }
    if max_n <= 1 {
        return Ok((prev, 1, residual));
    }
    Err(Error::NoConvergence { iterations: max_n, residual })
}

fn harmonic_warning(defects: &[(String, f64)], tol: &Tolerances) -> Option<String> {
    let bad: Vec<String> = defects
        .iter()
        .filter(|(_, d)| *d > tol.eq_tol)
        .map(|(name, d)| format!("{name} is not harmonic (defect {d:.3e})"))
        .collect();
    if bad.is_empty() {
        None
    } else {
        Some(bad.join("; "))
    }
}

/// Cesàro limit of `μ^{⊛n} ⊛ (f g)`.
pub fn limit_product_functions(
    f: &GroupFunction,
    g: &GroupFunction,
    mu: &Measure,
    max_n: usize,
    tol: &Tolerances,
) -> Result<LimitResult<GroupFunction>> {
    check_same_group(f.group(), g.group())?;
    check_same_group(f.group(), mu.group())?;
    mu.require_probability(tol)?;
    let c = convolution_matrix(mu);
    let as_col = |phi: &GroupFunction| CMatrix::from_column_slice(phi.values().len(), 1, phi.values());
    let defect = |phi: &GroupFunction| {
        let v = as_col(phi);
        max_abs(&(&c * &v - &v))
    };
    let warning = harmonic_warning(&[("f".into(), defect(f)), ("g".into(), defect(g))], tol);
    let product = f.pointwise(g)?;
    let (avg, iterations, residual) = cesaro(as_col(&product), |h| &c * h, max_n, tol.eq_tol)?;
    let value = GroupFunction::new(f.group(), avg.iter().copied().collect())?;
    Ok(LimitResult { value, iterations, residual, warning })
}

/// Cesàro limit of `Θ(μ)ⁿ(S T)`.
pub fn limit_product_operators(
    s: &OperatorMatrix,
    t: &OperatorMatrix,
    mu: &Measure,
    max_n: usize,
    tol: &Tolerances,
) -> Result<LimitResult<OperatorMatrix>> {
    check_same_group(s.group(), t.group())?;
    check_same_group(s.group(), mu.group())?;
    mu.require_probability(tol)?;
    let op = theta(mu);
    let defect = |x: &OperatorMatrix| max_abs(&(op.apply_matrix(x.matrix()) - x.matrix()));
    let warning = harmonic_warning(&[("S".into(), defect(s)), ("T".into(), defect(t))], tol);
    let product = s.compose(t)?;
    let (avg, iterations, residual) = cesaro(product.into_matrix(), |h| op.apply_matrix(h), max_n, tol.eq_tol)?;
    Ok(LimitResult { value: OperatorMatrix::new(s.group(), avg)?, iterations, residual, warning })
}

/// `max |Θ(μ)(T) − T|`
pub fn theta_residual(mu: &Measure, t: &OperatorMatrix) -> f64 {
    max_abs(&(theta(mu).apply_matrix(t.matrix()) - t.matrix()))
}

/// `range(Φ_* − id)`, the pre-annihilator of `Fix(Φ)` under the trace pairing.
pub fn pre_annihilator_ideal(phi: &Superoperator, tol: &Tolerances) -> Subspace {
    let d = pre_adjoint(phi).to_dense();
    let k = d.nrows();
    range(&(d - CMatrix::identity(k, k)), tol)
}

/// `max |Tr(T ω)|` over basis elements `T` of `bounded` and `ω` of `trace_class`.
pub fn pairing_defect(bounded: &Subspace, trace_class: &Subspace, n: usize) -> f64 {
    // Tr(Tω) = vec(T)ᵀ · vec(ωᵀ)
    let transposed: Vec<CVector> =
        trace_class.basis_matrices(n).iter().map(|w| vectorize(&w.transpose())).collect();
    if transposed.is_empty() || bounded.dim() == 0 {
        return 0.0;
    }
    let w = CMatrix::from_columns(&transposed);
    max_abs(&(bounded.basis().transpose() * w))
}

/// Largest residual of `ω • E_ab` and `E_ab • ω` against `ideal`, over basis `ω` and all units.
pub fn bullet_closure_defect(ideal: &Subspace, group: &Group) -> Result<f64> {
    let n = group.order();
    let units: Vec<OperatorMatrix> = (0..n * n).map(|k| OperatorMatrix::unit(group, k / n, k % n)).collect();
    let mut worst: f64 = 0.0;
    for m in ideal.basis_matrices(n) {
        let w = OperatorMatrix::new(group, m)?;
        for u in &units {
            worst = worst.max(ideal.residual(&vectorize(bullet(&w, u)?.matrix())));
            worst = worst.max(ideal.residual(&vectorize(bullet(u, &w)?.matrix())));
        }
    }
    Ok(worst)
}

/// `L∞(G)_⊥ = {ω : Tr(M_φ ω) = 0 for all φ}`
pub fn linfty_perp(group: &Group, tol: &Tolerances) -> Subspace {
    let n = group.order();
    let rows = CMatrix::from_fn(n, n * n, |x, k| if k == x * n + x { ONE } else { ZERO });
    null_space(&rows, tol)
}

/// `𝒯₀ = {ω : Tr ω = 0}`
pub fn augmentation_ideal(group: &Group, tol: &Tolerances) -> Subspace {
    let n = group.order();
    let row = CMatrix::from_fn(1, n * n, |_, k| if k % (n + 1) == 0 { ONE } else { ZERO });
    null_space(&row, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealReport {
    pub group: String,
    pub parameter: String,
    /// `dim Ĩ_σ`, `dim L∞(G)_⊥`, `dim 𝒯₀`.
    pub dims: [usize; 3],
    pub expected_ideal_dim: usize,
    pub fixed_dim: usize,
    /// `max |Tr(Tω)|` for `T ∈ Fix(Θ̂(σ))`, `ω ∈ Ĩ_σ`.
    pub orthogonality: f64,
    /// Containment defects of `Ĩ_σ ⊆ L∞(G)_⊥` and `L∞(G)_⊥ ⊆ 𝒯₀`; only asserted when `σ(e) = 1`.
    pub chain_defects: [f64; 2],
    pub chain_asserted: bool,
    /// `•`-closure defects of `Ĩ_σ` and `L∞(G)_⊥`.
    pub closure_defects: [f64; 2],
    /// `max |E_aa • E_bb − ⟨E_aa, 1⟩ E_bb|`.
    pub quotient_defect: f64,
    pub eq_tol: f64,
    pub pass: bool,
}

/// `Ĩ_σ`, `L∞(G)_⊥` and `𝒯₀` with their inclusions and ideal properties.
pub fn linfty_perp_suite(sigma: &GroupFunction, label: &str, tol: &Tolerances) -> Result<IdealReport> {
    let g = sigma.group();
    let n = g.order();
    let hat = theta_hat(sigma);
    let fixed = fixed_points(&hat, tol);
    let ideal = pre_annihilator_ideal(&hat, tol);
    let perp = linfty_perp(g, tol);
    let aug = augmentation_ideal(g, tol);
    let level = level_set_one(sigma, tol)?;

    let orthogonality = pairing_defect(&fixed, &ideal, n);
    let chain_asserted = (sigma.at(0) - ONE).norm() <= tol.eq_tol;
    let chain_defects = [ideal.containment_defect(&perp)?, perp.containment_defect(&aug)?];
    let closure_defects = [bullet_closure_defect(&ideal, g)?, bullet_closure_defect(&perp, g)?];
    let mut quotient_defect: f64 = 0.0;
    for a in g.elements() {
        for b in g.elements() {
            let f = OperatorMatrix::unit(g, a, a);
            let h = OperatorMatrix::unit(g, b, b);
            let expected = h.scale(f.trace());
            quotient_defect = quotient_defect.max(bullet(&f, &h)?.max_abs_diff(&expected));
        }
    }
    let expected_ideal_dim = n * n - n * level.len();
    let dims = [ideal.dim(), perp.dim(), aug.dim()];
    let bound = 1e-10_f64.max(tol.entry_tol);
    let pass = dims == [expected_ideal_dim, n * n - n, n * n - 1]
        && fixed.dim() + ideal.dim() == n * n
        && orthogonality <= tol.eq_tol
        && (!chain_asserted || chain_defects.iter().all(|&d| d <= tol.eq_tol))
        && closure_defects.iter().all(|&d| d <= bound)
        && quotient_defect <= bound;
    Ok(IdealReport {
        group: g.name().to_string(),
        parameter: label.to_string(),
        dims,
        expected_ideal_dim,
        fixed_dim: fixed.dim(),
        orthogonality,
        chain_defects,
        chain_asserted,
        closure_defects,
        quotient_defect,
        eq_tol: tol.eq_tol,
        pass,
    })
}

#[derive(Debug, Clone)]
pub struct InvariantAlgebra {
    /// `L∞(G:H)`: diagonal operators constant on the orbits `H y`.
    pub orbit_space: Subspace,
    /// `({λ(h) : h ∈ H} ∪ L∞(G))'`
    pub commutant: Subspace,
    pub orbits: usize,
    pub distance: f64,
}

pub fn invariant_algebra(group: &Group, h: &Subgroup, tol: &Tolerances) -> Result<InvariantAlgebra> {
    let n = group.order();
    let cosets = h.right_cosets(group);
    let cols: Vec<CVector> = cosets
        .iter()
        .map(|coset| {
            let w = Complex64::new(1.0 / (coset.len() as f64).sqrt(), 0.0);
            let mut m = CMatrix::zeros(n, n);
            for &y in coset {
                m[(y, y)] = w;
            }
            vectorize(&m)
        })
        .collect();
    let orbit_space = Subspace::from_orthonormal(CMatrix::from_columns(&cols));
    let mut gens: Vec<CMatrix> = h.members().iter().map(|&x| left_regular(group, x).into_matrix()).collect();
    gens.extend(diagonal_units(n));
    let comm = commutant(n, &gens, tol)?;
    let distance = orbit_space.distance(&comm)?;
    Ok(InvariantAlgebra { orbit_space, commutant: comm, orbits: cosets.len(), distance })
}

/// `range(f ↦ f − f ⊛' μ)` where `⊛'` is the transpose of `φ ↦ μ ⊛ φ` under `Σ_x f(x) φ(x)`.
pub fn willis_ideal(mu: &Measure, tol: &Tolerances) -> Result<Subspace> {
    mu.require_probability(tol)?;
    let n = mu.group().order();
    Ok(range(&(CMatrix::identity(n, n) - convolution_matrix(mu).transpose()), tol))
}

/// `max |Σ_x f(x) φ(x)|` over basis vectors of the two spaces.
pub fn bilinear_pairing_defect(a: &Subspace, b: &Subspace) -> f64 {
    if a.dim() == 0 || b.dim() == 0 {
        return 0.0;
    }
    max_abs(&(a.basis().transpose() * b.basis()))
}

#[derive(Debug, Clone)]
pub struct MuFixedPoints {
    pub fixed: Subspace,
    /// `{λ(x) : x ∈ G}''`
    pub von_neumann: Subspace,
    pub distance: f64,
}

/// `Fix(Θ(μ))` against the group von Neumann algebra.
pub fn mu_fixed_points(mu: &Measure, tol: &Tolerances) -> Result<MuFixedPoints> {
    if !is_adapted_measure(mu, tol)? {
        return Err(Error::InvalidParameter("measure is not adapted".into()));
    }
    let g = mu.group();
    let n = g.order();
    let fixed = fixed_points(&theta(mu), tol);
    let gens: Vec<CMatrix> = g.elements().map(|x| left_regular(g, x).into_matrix()).collect();
    let von_neumann = double_commutant(n, &gens, tol)?;
    let distance = fixed.distance(&von_neumann)?;
    Ok(MuFixedPoints { fixed, von_neumann, distance })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzCandidate {
    pub sigma: Vec<[f64; 2]>,
    pub level_set: Vec<usize>,
    /// `dim Fix(Θ̂(σ))` and `dim B_{G_σ}`.
    pub dims: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub group: String,
    pub trials: usize,
    /// Trials whose level set is a subgroup.
    pub subgroup_level_sets: usize,
    /// Cases where `Fix(Θ̂(σ)) ⊊ B_{G_σ}`.
    pub strict_candidates: Vec<FuzzCandidate>,
    /// Cases where `(λ(G_σ) ∪ L∞(G))'' ⊄ Fix(Θ̂(σ))`; only possible when `G_σ` is not a subgroup.
    pub lower_inclusion_failures: usize,
    /// `Fix(Θ̂(σ)) ⊄ B_{G_σ}`, which would be a bug.
    pub upper_inclusion_failures: usize,
}

/// Searches non-positive-definite `σ` with `σ(e) = 1` for a strict upper inclusion.
pub fn fuzz_non_pd<R: Rng>(group: &Group, trials: usize, rng: &mut R, tol: &Tolerances) -> Result<FuzzReport> {
    let subgroups = all_subgroups(group);
    let mut report = FuzzReport {
        group: group.name().to_string(),
        trials,
        subgroup_level_sets: 0,
        strict_candidates: Vec::new(),
        lower_inclusion_failures: 0,
        upper_inclusion_failures: 0,
    };
    for _ in 0..trials {
        let h = &subgroups[rng.random_range(0..subgroups.len())];
        let mut sigma = random::unit_function_fixing(group, h, rng);
        if rng.random_bool(0.3) {
            // an extra level-one point that usually breaks the subgroup property
            let x = rng.random_range(0..group.order());
            let mut values = sigma.values().to_vec();
            values[x] = ONE;
            sigma = GroupFunction::new(group, values)?;
        }
        let r = verify_main_theorem(&sigma, "fuzz", tol)?;
        if generated_subgroup(group, &r.level_set)?.len() == r.level_set.len() {
            report.subgroup_level_sets += 1;
        }
        if r.inclusion_defects[0] > tol.eq_tol {
            report.lower_inclusion_failures += 1;
        }
        if r.inclusion_defects[1] > tol.eq_tol {
            report.upper_inclusion_failures += 1;
        }
        if r.dims[0] < r.dims[2] {
            report.strict_candidates.push(FuzzCandidate {
                sigma: sigma.values().iter().map(|z| [z.re, z.im]).collect(),
                level_set: r.level_set.clone(),
                dims: [r.dims[0], r.dims[2]],
            });
        }
    }
    Ok(report)
}

/// Reshapes a vectorized operator.
pub fn as_operator(group: &Group, v: &CVector) -> Result<OperatorMatrix> {
    OperatorMatrix::new(group, unvectorize(v, group.order()))
}
