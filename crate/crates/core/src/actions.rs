//! Operators on `ℓ²(G)`, the actions `Θ` and `Θ̂`, and the co-multiplication `Γ̂`.
//!
//! Conventions, fixed crate-wide:
//!
//! * `λ(x)[a][b] = 1` iff `a = x·b`, `ρ(x)[a][b] = 1` iff `b = a·x`.
//! * Trace pairing `⟨T, ω⟩ = Tr(T ω)`; pre-adjoints, `π` and `•` are all taken
//!   with respect to it.
//! * `Θ(μ)(T) = Σ_t μ(t) ρ(t) T ρ(t)⁻¹`.
//! * `Θ̂(σ)` is the Schur multiplier with mask `m[a][b] = σ(a·b⁻¹)`. This is the
//!   only `L∞(G)`-bimodule map that acts on `λ(x)` as multiplication by
//!   `σ(x)`, since every operator is a sum `Σ_x M_{f_x} λ(x)`.
//! * Pairs `(x, y)` index `ℓ²(G × G)` as `x·n + y`, matching the Kronecker
//!   product layout.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{check_same_group, GroupFunction, Measure};
use crate::group::Group;
use crate::linalg::{max_abs_diff, psd_factorize, CMatrix, Tolerances, ONE, ZERO};

/// Largest group order for which doubled operators are materialized.
pub const SUPEROPERATOR_CAP: usize = 24;
/// Largest group order for which coassociativity is checked on `ℓ²(G³)`.
pub const COASSOCIATIVITY_CAP: usize = 6;

fn check_cap(group: &Group, cap: usize) -> Result<()> {
    if group.order() > cap {
        return Err(Error::SizeCap { order: group.order(), cap });
    }
    Ok(())
}

/// An element of `B(ℓ²(G))`, or of the trace class under the trace pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    group: Group,
    matrix: CMatrix,
}

impl OperatorMatrix {
    pub fn new(group: &Group, matrix: CMatrix) -> Result<Self> {
        let n = group.order();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: matrix.nrows().max(matrix.ncols()) });
        }
        Ok(OperatorMatrix { group: group.clone(), matrix })
    }

    pub fn zeros(group: &Group) -> Self {
        let n = group.order();
        OperatorMatrix { group: group.clone(), matrix: CMatrix::zeros(n, n) }
    }

    pub fn identity(group: &Group) -> Self {
        let n = group.order();
        OperatorMatrix { group: group.clone(), matrix: CMatrix::identity(n, n) }
    }

    pub fn unit(group: &Group, a: usize, b: usize) -> Self {
        let mut m = Self::zeros(group);
        m.matrix[(a, b)] = ONE;
        m
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    fn with(&self, matrix: CMatrix) -> Self {
        OperatorMatrix { group: self.group.clone(), matrix }
    }

    pub fn adjoint(&self) -> Self {
        self.with(self.matrix.adjoint())
    }

    pub fn compose(&self, other: &OperatorMatrix) -> Result<Self> {
        check_same_group(&self.group, &other.group)?;
        Ok(self.with(&self.matrix * &other.matrix))
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<Self> {
        check_same_group(&self.group, &other.group)?;
        Ok(self.with(&self.matrix + &other.matrix))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.with(self.matrix.scale(1.0).map(|z| z * c))
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `⟨self, ω⟩ = Tr(self · ω)`
    pub fn pair(&self, omega: &OperatorMatrix) -> Complex64 {
        trace_pairing(&self.matrix, &omega.matrix)
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }

    pub fn to_document(&self) -> OperatorDocument {
        OperatorDocument {
            group: self.group.name().to_string(),
            matrix: self
                .matrix
                .row_iter()
                .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn from_document(group: &Group, doc: &OperatorDocument) -> Result<Self> {
        if doc.group != group.name() {
            return Err(Error::GroupMismatch(doc.group.clone(), group.name().to_string()));
        }
        let n = group.order();
        if doc.matrix.len() != n || doc.matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Schema(format!("operator matrix must be {n}x{n}")));
        }
        let m = CMatrix::from_fn(n, n, |a, b| {
            let [re, im] = doc.matrix[a][b];
            Complex64::new(re, im)
        });
        Self::new(group, m)
    }
}

/// `{"group": str, "matrix": [[[re, im]]]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDocument {
    pub group: String,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

/// `Tr(T ω) = Σ_{ij} T[i][j] ω[j][i]`
pub fn trace_pairing(t: &CMatrix, omega: &CMatrix) -> Complex64 {
    t.iter().zip(omega.transpose().iter()).map(|(a, b)| a * b).sum()
}

pub fn left_regular(group: &Group, x: usize) -> OperatorMatrix {
    let n = group.order();
    let m = CMatrix::from_fn(n, n, |a, b| if a == group.mul(x, b) { ONE } else { ZERO });
    OperatorMatrix { group: group.clone(), matrix: m }
}

pub fn right_regular(group: &Group, x: usize) -> OperatorMatrix {
    let n = group.order();
    let m = CMatrix::from_fn(n, n, |a, b| if b == group.mul(a, x) { ONE } else { ZERO });
    OperatorMatrix { group: group.clone(), matrix: m }
}

/// Multiplication operator `M_f`.
pub fn mult_op(f: &GroupFunction) -> OperatorMatrix {
    let n = f.group().order();
    let m = CMatrix::from_fn(n, n, |a, b| if a == b { f.at(a) } else { ZERO });
    OperatorMatrix { group: f.group().clone(), matrix: m }
}

/// Coefficients of the orthogonal projection onto `span λ(G)` and the distance to it.
pub fn vn_projection(t: &OperatorMatrix) -> (GroupFunction, f64) {
    let g = t.group();
    let n = g.order() as f64;
    // λ(x) occupies the stripe {(x·b, b)}; the stripes partition all entries
    let coeffs = GroupFunction::from_fn(g, |x| {
        g.elements().map(|b| t.matrix[(g.mul(x, b), b)]).sum::<Complex64>() / n
    });
    let mut residual = t.matrix.clone();
    for a in g.elements() {
        for b in g.elements() {
            residual[(a, b)] -= coeffs.at(g.div(a, b));
        }
    }
    (coeffs, residual.norm())
}

/// A linear map on `B(ℓ²(G))` in one of three interchangeable forms.
#[derive(Debug, Clone, PartialEq)]
pub enum SuperoperatorForm {
    /// `T ↦ m ∘ T` (entrywise product).
    Schur(CMatrix),
    /// `T ↦ Σ_t w_t ρ(t) T ρ(t)⁻¹`.
    ConjSum(Vec<(Complex64, usize)>),
    /// `n² × n²` matrix acting on row-major vectorizations.
    Dense(CMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    group: Group,
    form: SuperoperatorForm,
}

impl Superoperator {
    pub fn new(group: &Group, form: SuperoperatorForm) -> Result<Self> {
        let n = group.order();
        let ok = match &form {
            SuperoperatorForm::Schur(m) => m.shape() == (n, n),
            SuperoperatorForm::ConjSum(terms) => terms.iter().all(|&(_, t)| t < n),
            SuperoperatorForm::Dense(m) => m.shape() == (n * n, n * n),
        };
        if !ok {
            return Err(Error::DimensionMismatch { expected: n, got: 0 });
        }
        Ok(Superoperator { group: group.clone(), form })
    }

    pub fn identity(group: &Group) -> Self {
        let n = group.order();
        Superoperator { group: group.clone(), form: SuperoperatorForm::Schur(CMatrix::from_element(n, n, ONE)) }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn form(&self) -> &SuperoperatorForm {
        &self.form
    }

    pub fn apply(&self, t: &OperatorMatrix) -> Result<OperatorMatrix> {
        check_same_group(&self.group, &t.group)?;
        Ok(t.with(self.apply_matrix(&t.matrix)))
    }

    pub fn apply_matrix(&self, t: &CMatrix) -> CMatrix {
        let g = &self.group;
        let n = g.order();
        match &self.form {
            SuperoperatorForm::Schur(mask) => mask.component_mul(t),
            SuperoperatorForm::ConjSum(terms) => {
                let mut out = CMatrix::zeros(n, n);
                for &(w, s) in terms {
                    for a in 0..n {
                        let as_ = g.mul(a, s);
                        for b in 0..n {
                            out[(a, b)] += w * t[(as_, g.mul(b, s))];
                        }
                    }
                }
                out
            }
            SuperoperatorForm::Dense(d) => {
                let v = crate::linalg::vectorize(t);
                crate::linalg::unvectorize(&(d * v), n)
            }
        }
    }

    /// The `n² × n²` matrix of the map on row-major vectorizations.
    pub fn to_dense(&self) -> CMatrix {
        let g = &self.group;
        let n = g.order();
        match &self.form {
            SuperoperatorForm::Schur(mask) => {
                let mut d = CMatrix::zeros(n * n, n * n);
                for a in 0..n {
                    for b in 0..n {
                        d[(a * n + b, a * n + b)] = mask[(a, b)];
                    }
                }
                d
            }
            SuperoperatorForm::ConjSum(terms) => {
                let mut d = CMatrix::zeros(n * n, n * n);
                for &(w, s) in terms {
                    for a in 0..n {
                        for b in 0..n {
                            d[(a * n + b, g.mul(a, s) * n + g.mul(b, s))] += w;
                        }
                    }
                }
                d
            }
            SuperoperatorForm::Dense(d) => d.clone(),
        }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Superoperator) -> Result<Superoperator> {
        check_same_group(&self.group, &other.group)?;
        let form = match (&self.form, &other.form) {
            (SuperoperatorForm::Schur(a), SuperoperatorForm::Schur(b)) => SuperoperatorForm::Schur(a.component_mul(b)),
            _ => SuperoperatorForm::Dense(self.to_dense() * other.to_dense()),
        };
        Ok(Superoperator { group: self.group.clone(), form })
    }
}

/// `Θ(μ)(T) = Σ_t μ(t) ρ(t) T ρ(t)⁻¹`
pub fn theta(mu: &Measure) -> Superoperator {
    let terms = mu
        .group()
        .elements()
        .filter(|&t| mu.weight(t) != ZERO)
        .map(|t| (mu.weight(t), t))
        .collect();
    Superoperator { group: mu.group().clone(), form: SuperoperatorForm::ConjSum(terms) }
}

/// `m[a][b] = σ(a·b⁻¹)`
pub fn theta_hat_mask(sigma: &GroupFunction) -> CMatrix {
    let g = sigma.group();
    let n = g.order();
    CMatrix::from_fn(n, n, |a, b| sigma.at(g.div(a, b)))
}

/// `Θ̂(σ)` as a Schur multiplier.
pub fn theta_hat(sigma: &GroupFunction) -> Superoperator {
    Superoperator {
        group: sigma.group().clone(),
        form: SuperoperatorForm::Schur(theta_hat_mask(sigma)),
    }
}

/// `Θ̂(σ)(T)` evaluated as `Σ_i M_{u_i} T M_{v_i}` from a rank decomposition of the mask.
pub fn theta_hat_sum_form(sigma: &GroupFunction, t: &OperatorMatrix, tol: &Tolerances) -> Result<OperatorMatrix> {
    check_same_group(sigma.group(), t.group())?;
    let fact = psd_factorize(&theta_hat_mask(sigma), tol);
    if fact.residual > tol.entry_tol {
        return Err(Error::Residual { residual: fact.residual, tol: tol.entry_tol });
    }
    let n = sigma.group().order();
    let mut out = CMatrix::zeros(n, n);
    for (u, v) in &fact.pairs {
        for a in 0..n {
            for b in 0..n {
                out[(a, b)] += u[a] * t.matrix[(a, b)] * v[b];
            }
        }
    }
    Ok(t.with(out))
}

/// The map `Φ_*` with `⟨Φ(T), ω⟩ = ⟨T, Φ_*(ω)⟩`.
pub fn pre_adjoint(phi: &Superoperator) -> Superoperator {
    let g = &phi.group;
    let n = g.order();
    let form = match &phi.form {
        SuperoperatorForm::Schur(mask) => SuperoperatorForm::Schur(mask.transpose()),
        SuperoperatorForm::ConjSum(terms) => {
            SuperoperatorForm::ConjSum(terms.iter().map(|&(w, t)| (w, g.inv(t))).collect())
        }
        SuperoperatorForm::Dense(d) => {
            // K Dᵀ K with K the commutation matrix vec(X) ↦ vec(Xᵀ)
            let swap = |k: usize| (k % n) * n + k / n;
            SuperoperatorForm::Dense(CMatrix::from_fn(n * n, n * n, |r, c| d[(swap(c), swap(r))]))
        }
    };
    Superoperator { group: g.clone(), form }
}

/// `π(ω)(x) = ⟨λ(x), ω⟩ = Tr(λ(x) ω)`
pub fn pi_quotient(omega: &OperatorMatrix) -> GroupFunction {
    let g = omega.group();
    GroupFunction::from_fn(g, |x| g.elements().map(|b| omega.matrix[(b, g.mul(x, b))]).sum())
}

/// Matrix of `π` from row-major vectorized `ω` to function values.
pub fn pi_matrix(group: &Group) -> CMatrix {
    let n = group.order();
    let mut m = CMatrix::zeros(n, n * n);
    for x in 0..n {
        for b in 0..n {
            m[(x, b * n + group.mul(x, b))] = ONE;
        }
    }
    m
}

/// A permutation of `G × G`, stored as `k ↦ image[k]` on pair indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairPermutation {
    image: Vec<usize>,
}

impl PairPermutation {
    fn from_fn(n: usize, f: impl Fn(usize, usize) -> (usize, usize)) -> Self {
        let image = (0..n * n)
            .map(|k| {
                let (x, y) = f(k / n, k % n);
                x * n + y
            })
            .collect();
        PairPermutation { image }
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![0; self.image.len()];
        for (k, &v) in self.image.iter().enumerate() {
            image[v] = k;
        }
        PairPermutation { image }
    }

    /// `self ∘ other`
    pub fn then_after(&self, other: &PairPermutation) -> Self {
        PairPermutation { image: other.image.iter().map(|&k| self.image[k]).collect() }
    }

    pub fn image(&self, k: usize) -> usize {
        self.image[k]
    }

    /// Permutation matrix `P e_k = e_{image[k]}`.
    pub fn to_matrix(&self) -> CMatrix {
        let d = self.image.len();
        let mut m = CMatrix::zeros(d, d);
        for (k, &v) in self.image.iter().enumerate() {
            m[(v, k)] = ONE;
        }
        m
    }

    /// `P X P*`
    pub fn conjugate(&self, x: &CMatrix) -> CMatrix {
        conjugate_by(&self.image, x)
    }
}

fn conjugate_by(image: &[usize], x: &CMatrix) -> CMatrix {
    let d = image.len();
    let mut out = CMatrix::zeros(d, d);
    for k in 0..d {
        for l in 0..d {
            out[(image[k], image[l])] = x[(k, l)];
        }
    }
    out
}

/// `(W ξ)(x, y) = ξ(x, x·y)`, so `W δ_(a,b) = δ_(a, a⁻¹b)`.
pub fn fundamental_unitary(group: &Group) -> PairPermutation {
    PairPermutation::from_fn(group.order(), |a, b| (a, group.mul(group.inv(a), b)))
}

/// `δ_(a,b) ↦ δ_(b,a)`
pub fn flip(group: &Group) -> PairPermutation {
    PairPermutation::from_fn(group.order(), |a, b| (b, a))
}

/// `Ŵ = σ W* σ`
pub fn dual_unitary(group: &Group) -> PairPermutation {
    let s = flip(group);
    s.then_after(&fundamental_unitary(group).inverse()).then_after(&s)
}

/// An operator on `ℓ²(G × G)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubledOperator {
    group: Group,
    matrix: CMatrix,
}

impl DoubledOperator {
    pub fn new(group: &Group, matrix: CMatrix) -> Result<Self> {
        let d = group.order() * group.order();
        if matrix.shape() != (d, d) {
            return Err(Error::DimensionMismatch { expected: d, got: matrix.nrows() });
        }
        Ok(DoubledOperator { group: group.clone(), matrix })
    }

    pub fn tensor(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<Self> {
        check_same_group(a.group(), b.group())?;
        Ok(DoubledOperator { group: a.group.clone(), matrix: a.matrix.kronecker(&b.matrix) })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `(id ⊗ ω)(X)[a][c] = Σ_{b,d} X[(a,b),(c,d)] ω[d][b]`
    pub fn slice_second(&self, omega: &OperatorMatrix) -> OperatorMatrix {
        let n = self.group.order();
        let m = CMatrix::from_fn(n, n, |a, c| {
            let mut s = ZERO;
            for b in 0..n {
                for d in 0..n {
                    s += self.matrix[(a * n + b, c * n + d)] * omega.matrix[(d, b)];
                }
            }
            s
        });
        OperatorMatrix { group: self.group.clone(), matrix: m }
    }

    /// `(ω ⊗ id)(X)[b][d] = Σ_{a,c} X[(a,b),(c,d)] ω[c][a]`
    pub fn slice_first(&self, omega: &OperatorMatrix) -> OperatorMatrix {
        let n = self.group.order();
        let m = CMatrix::from_fn(n, n, |b, d| {
            let mut s = ZERO;
            for a in 0..n {
                for c in 0..n {
                    s += self.matrix[(a * n + b, c * n + d)] * omega.matrix[(c, a)];
                }
            }
            s
        });
        OperatorMatrix { group: self.group.clone(), matrix: m }
    }

    /// `(Tr ⊗ id)(X)[b][d] = Σ_a X[(a,b),(a,d)]`
    pub fn partial_trace_first(&self) -> OperatorMatrix {
        self.slice_first(&OperatorMatrix::identity(&self.group))
    }
}

/// `Γ̂(T) = Ŵ (1 ⊗ T) Ŵ*`
pub fn comultiplication(t: &OperatorMatrix) -> Result<DoubledOperator> {
    let g = t.group();
    check_cap(g, SUPEROPERATOR_CAP)?;
    let n = g.order();
    let lifted = CMatrix::identity(n, n).kronecker(&t.matrix);
    Ok(DoubledOperator { group: g.clone(), matrix: dual_unitary(g).conjugate(&lifted) })
}

/// `⟨ω • ρ, T⟩ = ⟨ω ⊗ ρ, Γ̂(T)⟩`, in closed form:
/// `(ω • ρ)[i][j] = π(ω)(j·i⁻¹) ρ[i][j]`.
pub fn bullet(omega: &OperatorMatrix, rho: &OperatorMatrix) -> Result<OperatorMatrix> {
    check_same_group(omega.group(), rho.group())?;
    let g = omega.group();
    check_cap(g, SUPEROPERATOR_CAP)?;
    let p = pi_quotient(omega);
    let n = g.order();
    Ok(rho.with(CMatrix::from_fn(n, n, |i, j| p.at(g.div(j, i)) * rho.matrix[(i, j)])))
}

/// `ω • ρ` as the pre-adjoint of `Γ̂`: the partial trace of `Ŵ*(ω ⊗ ρ)Ŵ` over the first factor.
pub fn bullet_by_contraction(omega: &OperatorMatrix, rho: &OperatorMatrix) -> Result<OperatorMatrix> {
    let g = omega.group();
    check_cap(g, SUPEROPERATOR_CAP)?;
    let doubled = DoubledOperator::tensor(omega, rho)?;
    let pulled = dual_unitary(g).inverse().conjugate(&doubled.matrix);
    Ok(DoubledOperator { group: g.clone(), matrix: pulled }.partial_trace_first())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// `ω · T = (id ⊗ ω)(Γ̂(T))`
    Left,
    /// `T · ω = (ω ⊗ id)(Γ̂(T))`
    Right,
}

pub fn module_action(side: Side, omega: &OperatorMatrix, t: &OperatorMatrix) -> Result<OperatorMatrix> {
    check_same_group(omega.group(), t.group())?;
    let doubled = comultiplication(t)?;
    Ok(match side {
        Side::Left => doubled.slice_second(omega),
        Side::Right => doubled.slice_first(omega),
    })
}

/// Largest entry of `(Γ̂ ⊗ id)(Γ̂(E_pq)) − (id ⊗ Γ̂)(Γ̂(E_pq))` over all matrix units.
pub fn coassociativity_defect(group: &Group) -> Result<f64> {
    check_cap(group, COASSOCIATIVITY_CAP)?;
    let n = group.order();
    let w_hat = dual_unitary(group);
    // Ŵ ⊗ 1 and 1 ⊗ Ŵ on triples (a, b, c) indexed a·n² + b·n + c
    let left_image: Vec<usize> = (0..n * n * n)
        .map(|k| w_hat.image(k / n) * n + k % n)
        .collect();
    let right_image: Vec<usize> = (0..n * n * n)
        .map(|k| (k / (n * n)) * n * n + w_hat.image(k % (n * n)))
        .collect();
    let id = CMatrix::identity(n, n);
    let mut worst: f64 = 0.0;
    for p in 0..n {
        for q in 0..n {
            let x = comultiplication(&OperatorMatrix::unit(group, p, q))?.matrix;
            // (Γ̂ ⊗ id)(X) = (Ŵ ⊗ 1)(1 ⊗ X)(Ŵ ⊗ 1)*
            let lhs = conjugate_by(&left_image, &id.kronecker(&x));
            // (id ⊗ Γ̂)(A ⊗ B) = (1 ⊗ Ŵ)(A ⊗ 1 ⊗ B)(1 ⊗ Ŵ)*
            let d = n * n * n;
            let middle = CMatrix::from_fn(d, d, |r, c| {
                let (a, b, cc) = (r / (n * n), (r / n) % n, r % n);
                let (a2, b2, c2) = (c / (n * n), (c / n) % n, c % n);
                if b == b2 {
                    x[(a * n + cc, a2 * n + c2)]
                } else {
                    ZERO
                }
            });
            let rhs = conjugate_by(&right_image, &middle);
            worst = worst.max(max_abs_diff(&lhs, &rhs));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_group, GroupKind};
    use crate::random;

    fn grp(s: &str) -> Group {
        make_group(&s.parse::<GroupKind>().unwrap()).unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn regular_representations() {
        let g = grp("S3");
        let id = OperatorMatrix::identity(&g);
        assert_eq!(left_regular(&g, 0), id);
        assert_eq!(right_regular(&g, 0), id);
        for x in g.elements() {
            let l = left_regular(&g, x);
            assert_eq!(l.compose(&left_regular(&g, g.inv(x))).unwrap(), id);
            assert_eq!(l.compose(&l.adjoint()).unwrap(), id);
            for y in g.elements() {
                let prod = right_regular(&g, x).compose(&right_regular(&g, y)).unwrap();
                assert_eq!(prod, right_regular(&g, g.mul(x, y)));
                let prod = left_regular(&g, x).compose(&left_regular(&g, y)).unwrap();
                assert_eq!(prod, left_regular(&g, g.mul(x, y)));
            }
        }
        let d4 = grp("D4");
        for x in d4.elements() {
            for y in d4.elements() {
                let lr = left_regular(&d4, x).compose(&right_regular(&d4, y)).unwrap();
                let rl = right_regular(&d4, y).compose(&left_regular(&d4, x)).unwrap();
                assert_eq!(lr, rl);
            }
        }
    }

    #[test]
    fn theta_examples() {
        let g = grp("D4");
        let mut rng = random::seeded(11);
        let t = random::operator(&g, 1.0, &mut rng);
        let same = theta(&Measure::dirac(&g, 0)).apply(&t).unwrap();
        assert!(same.max_abs_diff(&t) < 1e-15);

        for s in g.elements() {
            let direct = right_regular(&g, s)
                .compose(&t)
                .unwrap()
                .compose(&right_regular(&g, s).adjoint())
                .unwrap();
            let via = theta(&Measure::dirac(&g, s)).apply(&t).unwrap();
            assert!(via.max_abs_diff(&direct) < 1e-15);
        }

        let z2 = grp("Z2");
        let e01 = OperatorMatrix::unit(&z2, 0, 1);
        let out = theta(&Measure::uniform(&z2)).apply(&e01).unwrap();
        let r1 = right_regular(&z2, 1);
        let expected = e01
            .add(&r1.compose(&e01).unwrap().compose(&r1).unwrap())
            .unwrap()
            .scale(Complex64::new(0.5, 0.0));
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn theta_of_multiplication_operator_is_convolution() {
        let g = grp("S3");
        let mut rng = random::seeded(5);
        for _ in 0..10 {
            let mu = random::adapted_measure(&g, &mut rng);
            let phi = random::function(&g, &mut rng);
            let lhs = theta(&mu).apply(&mult_op(&phi)).unwrap();
            let rhs = mult_op(&crate::functions::convolve(&mu, &phi).unwrap());
            assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        }
    }

    #[test]
    fn theta_is_multiplicative_in_measure_convolution() {
        let g = grp("D4");
        let mut rng = random::seeded(9);
        let mu = random::adapted_measure(&g, &mut rng);
        let nu = random::adapted_measure(&g, &mut rng);
        let t = random::operator(&g, 1.0, &mut rng);
        let lhs = theta(&mu).apply(&theta(&nu).apply(&t).unwrap()).unwrap();
        let rhs = theta(&mu.convolve(&nu).unwrap()).apply(&t).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn theta_hat_examples() {
        let g = grp("S3");
        let mut rng = random::seeded(3);
        let t = random::operator(&g, 1.0, &mut rng);
        let same = theta_hat(&GroupFunction::ones(&g)).apply(&t).unwrap();
        assert_eq!(same, t);

        let sigma = random::function(&g, &mut rng);
        for x in g.elements() {
            let out = theta_hat(&sigma).apply(&left_regular(&g, x)).unwrap();
            assert!(out.max_abs_diff(&left_regular(&g, x).scale(sigma.at(x))) < 1e-15);
        }

        let diag = theta_hat(&GroupFunction::delta(&g, 0)).apply(&t).unwrap();
        let expected = OperatorMatrix::new(&g, CMatrix::from_diagonal(&t.matrix().diagonal())).unwrap();
        assert_eq!(diag, expected);

        let f = random::function(&g, &mut rng);
        let out = theta_hat(&sigma).apply(&mult_op(&f)).unwrap();
        assert!(out.max_abs_diff(&mult_op(&f).scale(sigma.at(0))) < 1e-15);
    }

    #[test]
    fn theta_hat_homomorphism_and_bimodule() {
        let g = grp("D4");
        let mut rng = random::seeded(4);
        let s1 = random::function(&g, &mut rng);
        let s2 = random::function(&g, &mut rng);
        let t = random::operator(&g, 1.0, &mut rng);
        let composed = theta_hat(&s1).compose(&theta_hat(&s2)).unwrap().apply(&t).unwrap();
        let product = theta_hat(&s1.pointwise(&s2).unwrap()).apply(&t).unwrap();
        assert!(composed.max_abs_diff(&product) < 1e-14);

        let f = mult_op(&random::function(&g, &mut rng));
        let h = mult_op(&random::function(&g, &mut rng));
        let inside = theta_hat(&s1).apply(&f.compose(&t).unwrap().compose(&h).unwrap()).unwrap();
        let outside = f.compose(&theta_hat(&s1).apply(&t).unwrap()).unwrap().compose(&h).unwrap();
        assert!(inside.max_abs_diff(&outside) < 1e-14);
    }

    #[test]
    fn sum_form_examples() {
        let g = grp("D4");
        let mut rng = random::seeded(8);
        let t = random::operator(&g, 1.0, &mut rng);
        let ones = theta_hat_sum_form(&GroupFunction::ones(&g), &t, &tol()).unwrap();
        assert!(ones.max_abs_diff(&t) < 1e-12);

        let delta = theta_hat_sum_form(&GroupFunction::delta(&g, 0), &t, &tol()).unwrap();
        let expected = OperatorMatrix::new(&g, CMatrix::from_diagonal(&t.matrix().diagonal())).unwrap();
        assert!(delta.max_abs_diff(&expected) < 1e-12);

        for _ in 0..20 {
            let sigma = random::function(&g, &mut rng);
            let t = random::operator(&g, 1.0, &mut rng);
            let schur = theta_hat(&sigma).apply(&t).unwrap();
            let sum = theta_hat_sum_form(&sigma, &t, &tol()).unwrap();
            assert!(schur.max_abs_diff(&sum) <= 1e-10);
        }
    }

    #[test]
    fn forms_agree_with_dense() {
        let g = grp("S3");
        let mut rng = random::seeded(21);
        let t = random::operator(&g, 1.0, &mut rng);
        let ops = [
            theta_hat(&random::function(&g, &mut rng)),
            theta(&random::adapted_measure(&g, &mut rng)),
        ];
        for op in ops {
            let dense = Superoperator::new(&g, SuperoperatorForm::Dense(op.to_dense())).unwrap();
            assert!(op.apply(&t).unwrap().max_abs_diff(&dense.apply(&t).unwrap()) < 1e-14);
        }
    }

    #[test]
    fn pre_adjoint_duality() {
        let g = grp("S3");
        let mut rng = random::seeded(2);
        let id = Superoperator::identity(&g);
        assert_eq!(pre_adjoint(&id), id);

        let sigma = random::function(&g, &mut rng);
        match pre_adjoint(&theta_hat(&sigma)).form() {
            SuperoperatorForm::Schur(m) => assert_eq!(*m, theta_hat_mask(&sigma).transpose()),
            other => panic!("expected a Schur mask, got {other:?}"),
        }

        let ops = [
            theta_hat(&sigma),
            theta(&random::adapted_measure(&g, &mut rng)),
            Superoperator::new(&g, SuperoperatorForm::Dense(theta(&random::adapted_measure(&g, &mut rng)).to_dense()))
                .unwrap(),
        ];
        for op in &ops {
            let adj = pre_adjoint(op);
            for _ in 0..100 {
                let t = random::operator(&g, 1.0, &mut rng);
                let w = random::operator(&g, 1.0, &mut rng);
                let lhs = op.apply(&t).unwrap().pair(&w);
                let rhs = t.pair(&adj.apply(&w).unwrap());
                assert!((lhs - rhs).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn dual_unitary_matches_dense_products() {
        let g = grp("S3");
        let w = fundamental_unitary(&g).to_matrix();
        let s = flip(&g).to_matrix();
        let dense = &s * w.adjoint() * &s;
        assert_eq!(dual_unitary(&g).to_matrix(), dense);
        // Ŵ = Σ_b λ(b) ⊗ E_bb
        let mut expected = CMatrix::zeros(36, 36);
        for b in g.elements() {
            expected += left_regular(&g, b).matrix().kronecker(OperatorMatrix::unit(&g, b, b).matrix());
        }
        assert_eq!(dense, expected);
    }

    #[test]
    fn comultiplication_examples() {
        let g = grp("S3");
        let id = comultiplication(&OperatorMatrix::identity(&g)).unwrap();
        assert_eq!(*id.matrix(), CMatrix::identity(36, 36));
        for x in g.elements() {
            let l = left_regular(&g, x);
            let doubled = comultiplication(&l).unwrap();
            assert_eq!(doubled, DoubledOperator::tensor(&l, &l).unwrap());
        }
        let z3 = grp("Z3");
        for a in z3.elements() {
            for b in z3.elements() {
                let unit = OperatorMatrix::unit(&z3, a, b);
                let expected = DoubledOperator::tensor(&left_regular(&z3, z3.div(a, b)), &unit).unwrap();
                assert_eq!(comultiplication(&unit).unwrap(), expected);
            }
        }
        let big = grp("Z25");
        assert!(matches!(comultiplication(&OperatorMatrix::identity(&big)), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn comultiplication_is_star_homomorphism() {
        let g = grp("D4");
        let mut rng = random::seeded(6);
        let s = random::operator(&g, 1.0, &mut rng);
        let t = random::operator(&g, 1.0, &mut rng);
        let gs = comultiplication(&s).unwrap();
        let gt = comultiplication(&t).unwrap();
        let gst = comultiplication(&s.compose(&t).unwrap()).unwrap();
        assert!(max_abs_diff(gst.matrix(), &(gs.matrix() * gt.matrix())) < 1e-13);
        let gadj = comultiplication(&s.adjoint()).unwrap();
        assert!(max_abs_diff(gadj.matrix(), &gs.matrix().adjoint()) < 1e-15);
    }

    #[test]
    fn coassociativity_small() {
        for s in ["Z1", "Z2", "S3", "Z6"] {
            assert!(coassociativity_defect(&grp(s)).unwrap() <= 1e-10, "{s}");
        }
        assert!(matches!(coassociativity_defect(&grp("D4")), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn bullet_matches_unit_contraction() {
        // ⟨ω • ρ, E_ab⟩ = ⟨ω ⊗ ρ, Γ̂(E_ab)⟩ evaluated unit by unit
        let g = grp("S3");
        let mut rng = random::seeded(12);
        let w = random::operator(&g, 1.0, &mut rng);
        let r = random::operator(&g, 1.0, &mut rng);
        let closed = bullet(&w, &r).unwrap();
        let tensor = DoubledOperator::tensor(&w, &r).unwrap();
        for a in g.elements() {
            for b in g.elements() {
                let gamma = comultiplication(&OperatorMatrix::unit(&g, a, b)).unwrap();
                let pairing = trace_pairing(gamma.matrix(), tensor.matrix());
                assert!((closed.matrix()[(b, a)] - pairing).norm() < 1e-14);
            }
        }
        let contracted = bullet_by_contraction(&w, &r).unwrap();
        assert!(closed.max_abs_diff(&contracted) < 1e-14);
    }

    #[test]
    fn bullet_on_diagonals() {
        let g = grp("Z4");
        let mut rng = random::seeded(13);
        let f = random::function(&g, &mut rng);
        let h = random::function(&g, &mut rng);
        let out = bullet(&mult_op(&f), &mult_op(&h)).unwrap();
        assert!(out.max_abs_diff(&mult_op(&h).scale(f.sum())) < 1e-14);
    }

    #[test]
    fn module_action_examples() {
        let g = grp("S3");
        let mut rng = random::seeded(14);
        let w = random::operator(&g, 1.0, &mut rng);
        let id = OperatorMatrix::identity(&g);
        let out = module_action(Side::Left, &w, &id).unwrap();
        assert!(out.max_abs_diff(&id.scale(w.trace())) < 1e-14);

        for a in g.elements() {
            for b in g.elements() {
                let unit = OperatorMatrix::unit(&g, a, b);
                let out = module_action(Side::Left, &w, &unit).unwrap();
                let expected = left_regular(&g, g.div(a, b)).scale(unit.pair(&w));
                assert!(out.max_abs_diff(&expected) < 1e-14);
            }
        }

        let t = random::operator(&g, 1.0, &mut rng);
        let left = module_action(Side::Left, &w, &t).unwrap();
        assert!(vn_projection(&left).1 < 1e-13);
        let right = module_action(Side::Right, &w, &t).unwrap();
        let expected = theta_hat(&pi_quotient(&w)).apply(&t).unwrap();
        assert!(right.max_abs_diff(&expected) < 1e-13);
    }

    #[test]
    fn pi_examples() {
        let g = grp("D4");
        let scaled = OperatorMatrix::identity(&g).scale(Complex64::new(1.0 / 8.0, 0.0));
        let p = pi_quotient(&scaled);
        assert!(p.max_abs_diff(&GroupFunction::delta(&g, 0)) < 1e-15);
        assert_eq!(crate::linalg::rank(&pi_matrix(&g), &tol()), 8);

        let mut rng = random::seeded(15);
        let w = random::operator(&g, 1.0, &mut rng);
        let via_matrix = pi_matrix(&g) * crate::linalg::vectorize(w.matrix());
        let direct = pi_quotient(&w);
        for x in g.elements() {
            assert!((via_matrix[x] - direct.at(x)).norm() < 1e-14);
            assert!((direct.at(x) - left_regular(&g, x).pair(&w)).norm() < 1e-14);
        }
    }

    #[test]
    fn documents_round_trip() {
        let g = grp("Z3");
        let mut rng = random::seeded(16);
        let t = random::operator(&g, 1.0, &mut rng);
        let doc = t.to_document();
        assert_eq!(OperatorMatrix::from_document(&g, &doc).unwrap(), t);
        let json = serde_json::to_string(&doc).unwrap();
        let back: OperatorDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
    }
}
