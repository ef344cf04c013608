//! Dense complex linear algebra: null spaces, subspaces, commutants.
//!
//! Every rank decision goes through one singular value decomposition with the
//! threshold `rank_tol · s_max`. Matrices are embedded as vectors in row-major
//! order: `vec(X)[i·n + j] = X[i][j]`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative singular-value threshold for rank decisions.
    pub rank_tol: f64,
    /// Projector distance under which two subspaces are equal.
    pub eq_tol: f64,
    /// Magnitude under which a matrix entry or weight counts as zero.
    pub entry_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rank_tol: 1e-9, eq_tol: 1e-8, entry_tol: 1e-10 }
    }
}

impl Tolerances {
    pub fn with_eq_tol(self, eq_tol: f64) -> Self {
        Tolerances { eq_tol, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("rank_tol", self.rank_tol), ("eq_tol", self.eq_tol), ("entry_tol", self.entry_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Row-major vectorization.
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_iterator(m.len(), m.transpose().iter().copied())
}

/// Inverse of [`vectorize`] for an `n × n` matrix.
pub fn unvectorize(v: &CVector, n: usize) -> CMatrix {
    assert_eq!(v.len(), n * n, "vector length is not n²");
    CMatrix::from_row_slice(n, n, v.as_slice())
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Matrix unit `E_ab` in `n × n`.
pub fn matrix_unit(n: usize, a: usize, b: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(a, b)] = ONE;
    m
}

/// A linear subspace of `ℂ^d`, held as an orthonormal basis and its projector.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: CMatrix,
    projector: CMatrix,
}

impl Subspace {
    /// Wraps columns that are already orthonormal.
    pub fn from_orthonormal(basis: CMatrix) -> Self {
        let projector = &basis * basis.adjoint();
        Subspace { basis, projector }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self::from_orthonormal(CMatrix::zeros(ambient_dim, 0))
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::from_orthonormal(CMatrix::identity(ambient_dim, ambient_dim))
    }

    /// Span of arbitrary vectors of length `ambient_dim`.
    pub fn span(ambient_dim: usize, vectors: &[CVector], tol: &Tolerances) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient_dim);
        }
        let m = CMatrix::from_columns(vectors);
        range(&m, tol)
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Orthonormal basis, one vector per column.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = CVector> + '_ {
        self.basis.column_iter().map(|c| c.into_owned())
    }

    /// Basis vectors reshaped into `n × n` matrices.
    pub fn basis_matrices(&self, n: usize) -> Vec<CMatrix> {
        self.basis_vectors().map(|v| unvectorize(&v, n)).collect()
    }

    pub fn projector(&self) -> &CMatrix {
        &self.projector
    }

    pub fn project(&self, v: &CVector) -> CVector {
        &self.basis * (self.basis.adjoint() * v)
    }

    /// `‖v − P v‖`.
    pub fn residual(&self, v: &CVector) -> f64 {
        (v - self.project(v)).norm()
    }

    /// Membership with a residual relative to `max(1, ‖v‖)`.
    pub fn contains_vector(&self, v: &CVector, tol: &Tolerances) -> bool {
        self.residual(v) <= tol.eq_tol * v.norm().max(1.0)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: other.ambient_dim(),
            });
        }
        Ok(())
    }

    /// `‖P_A − P_B‖_F`.
    pub fn distance(&self, other: &Subspace) -> Result<f64> {
        self.check_ambient(other)?;
        Ok((&self.projector - &other.projector).norm())
    }

    pub fn equals(&self, other: &Subspace, tol: &Tolerances) -> Result<bool> {
        Ok(self.distance(other)? <= tol.eq_tol)
    }

    /// `‖P_A P_B − P_A‖_F`, zero iff `self ⊆ other`.
    pub fn containment_defect(&self, other: &Subspace) -> Result<f64> {
        self.check_ambient(other)?;
        Ok((&self.projector * &other.projector - &self.projector).norm())
    }

    pub fn is_subset_of(&self, other: &Subspace, tol: &Tolerances) -> Result<bool> {
        Ok(self.containment_defect(other)? <= tol.eq_tol)
    }

    /// Largest of `‖P² − P‖_F` and `‖P − P*‖_F`.
    pub fn projector_defect(&self) -> f64 {
        let p = &self.projector;
        let idem = (p * p - p).norm();
        let herm = (p - p.adjoint()).norm();
        idem.max(herm)
    }
}

fn to_faer(m: &CMatrix) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, Complex64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| *m.get(i, j))
}

/// Full SVD. nalgebra's own SVD and symmetric eigensolver are not used for
/// decompositions: both lose accuracy or return NaN on some rank-deficient inputs.
struct Svd {
    /// Nonincreasing, `min(rows, cols)` entries.
    singular_values: Vec<f64>,
    u: CMatrix,
    v: CMatrix,
}

fn svd(m: &CMatrix) -> Svd {
    let d = to_faer(m).svd().expect("SVD converges");
    Svd {
        singular_values: d.S().column_vector().iter().map(|z| z.re).collect(),
        u: from_faer(d.U()),
        v: from_faer(d.V()),
    }
}

/// Upper-triangular factor `R` with `RᴴR = MᴴM`.
fn qr_r(m: &CMatrix) -> CMatrix {
    from_faer(to_faer(m).qr().thin_R())
}

fn threshold(singular_values: &[f64], tol: &Tolerances) -> f64 {
    let s_max = singular_values.iter().copied().fold(0.0, f64::max);
    tol.rank_tol * s_max
}

fn select_columns(m: &CMatrix, keep: &[usize]) -> CMatrix {
    CMatrix::from_fn(m.nrows(), keep.len(), |r, c| m[(r, keep[c])])
}

/// Orthonormal basis of `{v : ‖M v‖ ≤ rank_tol·‖M‖·‖v‖}`.
pub fn null_space(m: &CMatrix, tol: &Tolerances) -> Subspace {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Subspace::zero(0);
    }
    if rows == 0 {
        return Subspace::full(cols);
    }
    // R from a QR of a tall matrix has the same null space and singular values
    let compressed;
    let target = if rows > cols {
        compressed = qr_r(m);
        &compressed
    } else {
        m
    };
    let d = svd(target);
    let thr = threshold(&d.singular_values, tol);
    let keep: Vec<usize> = (0..cols).filter(|&i| d.singular_values.get(i).is_none_or(|&s| s <= thr)).collect();
    Subspace::from_orthonormal(select_columns(&d.v, &keep))
}

/// Orthonormal basis of the column space.
pub fn range(m: &CMatrix, tol: &Tolerances) -> Subspace {
    let (rows, cols) = m.shape();
    if cols == 0 || rows == 0 {
        return Subspace::zero(rows);
    }
    let d = svd(m);
    let thr = threshold(&d.singular_values, tol);
    let keep: Vec<usize> = (0..d.singular_values.len()).filter(|&i| d.singular_values[i] > thr).collect();
    Subspace::from_orthonormal(select_columns(&d.u, &keep))
}

pub fn rank(m: &CMatrix, tol: &Tolerances) -> usize {
    range(m, tol).dim()
}

/// Sylvester map `X ↦ A X − X A` on row-major vectorized `n × n` matrices.
pub fn sylvester_map(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let id = CMatrix::identity(n, n);
    a.kronecker(&id) - id.kronecker(&a.transpose())
}

/// Accumulates row blocks, periodically compressing them to a triangular factor
/// that has the same null space.
struct StackedRows {
    cols: usize,
    rows: CMatrix,
}

impl StackedRows {
    fn new(cols: usize) -> Self {
        StackedRows { cols, rows: CMatrix::zeros(0, cols) }
    }

    fn push(&mut self, block: &CMatrix) {
        let old = self.rows.nrows();
        let mut grown = CMatrix::zeros(old + block.nrows(), self.cols);
        grown.view_mut((0, 0), (old, self.cols)).copy_from(&self.rows);
        grown.view_mut((old, 0), (block.nrows(), self.cols)).copy_from(block);
        self.rows = grown;
        if self.rows.nrows() > 4 * self.cols {
            let r = qr_r(&self.rows);
            self.rows = r;
        }
    }
}

fn check_generators(n: usize, generators: &[CMatrix]) -> Result<()> {
    for g in generators {
        if g.nrows() != n || g.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: g.nrows().max(g.ncols()) });
        }
    }
    Ok(())
}

/// `{X : XA = AX and XA* = A*X for every generator A}` as vectorized `n × n` matrices.
pub fn commutant(n: usize, generators: &[CMatrix], tol: &Tolerances) -> Result<Subspace> {
    check_generators(n, generators)?;
    if generators.is_empty() {
        return Ok(Subspace::full(n * n));
    }
    let mut stack = StackedRows::new(n * n);
    let mut push = |a: &CMatrix| {
        let block = sylvester_map(a);
        // a multiple of the identity up to round-off imposes no constraint
        if max_abs(&block) > tol.entry_tol {
            stack.push(&block);
        }
    };
    for g in generators {
        push(g);
        if max_abs_diff(g, &g.adjoint()) > 0.0 {
            push(&g.adjoint());
        }
    }
    if stack.rows.nrows() == 0 {
        return Ok(Subspace::full(n * n));
    }
    Ok(null_space(&stack.rows, tol))
}

/// Commutant taken twice; the result is checked to be a unital *-algebra.
pub fn double_commutant(n: usize, generators: &[CMatrix], tol: &Tolerances) -> Result<Subspace> {
    let first = commutant(n, generators, tol)?;
    let second = commutant(n, &first.basis_matrices(n), tol)?;
    let defect = algebra_defect(&second, n);
    if defect > tol.eq_tol {
        return Err(Error::NotAnAlgebra(defect));
    }
    Ok(second)
}

/// Largest residual of `I`, `B*` and `B_i B_j` against a subspace of vectorized matrices.
pub fn algebra_defect(space: &Subspace, n: usize) -> f64 {
    let mats = space.basis_matrices(n);
    let mut worst = space.residual(&vectorize(&CMatrix::identity(n, n)));
    for (i, a) in mats.iter().enumerate() {
        worst = worst.max(space.residual(&vectorize(&a.adjoint())));
        for b in &mats[i..] {
            worst = worst.max(space.residual(&vectorize(&(a * b))));
            worst = worst.max(space.residual(&vectorize(&(b * a))));
        }
    }
    worst
}

/// Eigenvalues (ascending) and eigenvectors (columns) of the Hermitian part of `k`.
pub fn hermitian_eigen(k: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = (k + k.adjoint()).scale(0.5);
    let eig = to_faer(&h).self_adjoint_eigen(faer::Side::Lower).expect("eigensolver converges");
    let values = eig.S().column_vector().iter().map(|z| z.re).collect();
    (values, from_faer(eig.U()))
}

/// Rotates `v` so that its largest-magnitude entry is real and positive.
fn fix_phase(v: &mut CVector) {
    let pivot = v
        .iter()
        .copied()
        .reduce(|a, b| if b.norm() > a.norm() + 1e-12 { b } else { a });
    if let Some(p) = pivot {
        if p.norm() > 0.0 {
            let phase = p.conj() / p.norm();
            v.iter_mut().for_each(|z| *z *= phase);
        }
    }
}

/// Hermitian within `rank_tol` and smallest eigenvalue above `−rank_tol·‖K‖`.
pub fn is_hermitian_psd(k: &CMatrix, tol: &Tolerances) -> (bool, f64) {
    let scale = max_abs(k).max(f64::MIN_POSITIVE);
    let hermitian = max_abs_diff(k, &k.adjoint()) <= tol.rank_tol * scale;
    let (values, _) = hermitian_eigen(k);
    let min = values.first().copied().unwrap_or(0.0);
    let top = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    (hermitian && min >= -tol.rank_tol * top.max(scale), min)
}

/// Rank decomposition `K = Σ_i u_i v_iᵀ`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub pairs: Vec<(CVector, CVector)>,
    /// True when `v_i = conj(u_i)`, i.e. a Gram factorization of a PSD matrix.
    pub gram: bool,
    /// `‖K − Σ u_i v_iᵀ‖_max`.
    pub residual: f64,
}

impl Factorization {
    pub fn reconstruct(&self, rows: usize, cols: usize) -> CMatrix {
        let mut out = CMatrix::zeros(rows, cols);
        for (u, v) in &self.pairs {
            out += u * v.transpose();
        }
        out
    }
}

/// Factorizes `K` as a sum of outer products. PSD input yields a Gram
/// factorization from the eigendecomposition; anything else goes through the SVD.
pub fn psd_factorize(k: &CMatrix, tol: &Tolerances) -> Factorization {
    let (rows, cols) = k.shape();
    let mut candidates: Vec<(f64, CVector, CVector)>;
    let gram = rows == cols && is_hermitian_psd(k, tol).0;
    if gram {
        let (values, vectors) = hermitian_eigen(k);
        candidates = values
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 0.0)
            .map(|(i, &l)| {
                let mut w = vectors.column(i).into_owned();
                fix_phase(&mut w);
                let u = w.scale(l.sqrt());
                let v = u.conjugate();
                (l, u, v)
            })
            .collect();
    } else {
        let d = svd(k);
        candidates = d
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > 0.0)
            .map(|(i, &s)| {
                let mut u = d.u.column(i).into_owned();
                let mut v = d.v.column(i).into_owned();
                // keep u vᴴ unchanged while fixing the phase of u
                let before = u.clone();
                fix_phase(&mut u);
                if let Some(j) = (0..u.len()).find(|&j| before[j].norm() > 0.0) {
                    let phase = u[j] / before[j];
                    v.iter_mut().for_each(|z| *z *= phase);
                }
                (s, u.scale(s), v.conjugate())
            })
            .collect();
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    let top = candidates.first().map(|c| c.0).unwrap_or(0.0);

    let assemble = |pairs: Vec<(CVector, CVector)>| {
        let mut f = Factorization { pairs, gram, residual: 0.0 };
        f.residual = max_abs_diff(k, &f.reconstruct(rows, cols));
        f
    };
    let truncated = assemble(
        candidates
            .iter()
            .filter(|c| c.0 > tol.rank_tol * top)
            .map(|c| (c.1.clone(), c.2.clone()))
            .collect(),
    );
    if truncated.residual <= tol.entry_tol {
        return truncated;
    }
    assemble(candidates.into_iter().map(|c| (c.1, c.2)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn rank_deficient_decompositions_are_accurate() {
        // I − Cᵀ for a random walk on Z2×Z4; singular, with a one-dimensional kernel
        let w = [0.0, 0.0, 0.12547934342723827, 0.23521634915565737, 0.25605748713352144, 0.0665723230027078, 0.16985171704158317, 0.14682278023929207];
        let mul = |x: usize, t: usize| ((x / 4 + t / 4) % 2) * 4 + (x % 4 + t % 4) % 4;
        let mut m = CMatrix::identity(8, 8);
        for x in 0..8 {
            for t in 0..8 {
                m[(mul(x, t), x)] -= c(w[t]);
            }
        }
        let ones = CVector::from_element(8, c(1.0));
        let r = range(&m, &tol());
        assert_eq!(r.dim(), 7);
        assert!((r.basis().transpose() * &ones).norm() < 1e-13);
        let k = null_space(&m.transpose(), &tol());
        assert_eq!(k.dim(), 1);
        assert!(k.residual(&ones) < 1e-13);
        assert!(r.projector_defect() < 1e-13);
    }

    fn e(d: usize, i: usize) -> CVector {
        let mut v = CVector::zeros(d);
        v[i] = ONE;
        v
    }

    #[test]
    fn vectorization_is_row_major() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(3.0), c(4.0)]);
        let v = vectorize(&m);
        assert_eq!(v.as_slice(), &[c(1.0), c(2.0), c(3.0), c(4.0)]);
        assert_eq!(unvectorize(&v, 2), m);
    }

    #[test]
    fn null_space_examples() {
        assert_eq!(null_space(&CMatrix::zeros(3, 3), &tol()).dim(), 3);
        assert_eq!(null_space(&CMatrix::identity(3, 3), &tol()).dim(), 0);

        let ones = CMatrix::from_element(2, 2, ONE);
        let ns = null_space(&ones, &tol());
        assert_eq!(ns.dim(), 1);
        let expected = Subspace::from_orthonormal(CMatrix::from_column_slice(
            2,
            1,
            &[c(1.0 / 2f64.sqrt()), c(-1.0 / 2f64.sqrt())],
        ));
        assert!(ns.equals(&expected, &tol()).unwrap());
    }

    #[test]
    fn null_space_of_wide_matrix() {
        // one equation in three unknowns
        let m = CMatrix::from_row_slice(1, 3, &[c(1.0), c(1.0), c(1.0)]);
        let ns = null_space(&m, &tol());
        assert_eq!(ns.dim(), 2);
        for v in ns.basis_vectors() {
            assert!((&m * v).norm() < 1e-14);
        }
    }

    #[test]
    fn subspace_comparison() {
        let a = Subspace::span(2, &[e(2, 0) + e(2, 1), e(2, 0) - e(2, 1)], &tol());
        let b = Subspace::full(2);
        assert!(a.equals(&b, &tol()).unwrap());

        let e1 = Subspace::span(2, &[e(2, 0)], &tol());
        let e2 = Subspace::span(2, &[e(2, 1)], &tol());
        assert!(!e1.equals(&e2, &tol()).unwrap());
        assert!((e1.distance(&e2).unwrap() - 2f64.sqrt()).abs() < 1e-14);

        // projector distance of span{e1} and span{e1 + 1e-12 e2} is about √2·1e-12
        let tilted = Subspace::span(2, &[e(2, 0) + e(2, 1).scale(1e-12)], &tol());
        let dist = e1.distance(&tilted).unwrap();
        assert!(dist < 2e-12);
        assert!(e1.equals(&tilted, &tol()).unwrap());

        assert!(e1.is_subset_of(&b, &tol()).unwrap());
        assert!(!b.is_subset_of(&e1, &tol()).unwrap());
        assert!(matches!(e1.distance(&Subspace::full(3)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn commutant_examples() {
        let id = CMatrix::identity(3, 3);
        assert_eq!(commutant(3, &[id], &tol()).unwrap().dim(), 9);

        let units: Vec<CMatrix> = (0..3).flat_map(|a| (0..3).map(move |b| matrix_unit(3, a, b))).collect();
        assert_eq!(commutant(3, &units, &tol()).unwrap().dim(), 1);

        // λ(Z₂) = {I, flip}; commutant is span{I, flip}
        let flip = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let comm = commutant(2, &[CMatrix::identity(2, 2), flip.clone()], &tol()).unwrap();
        assert_eq!(comm.dim(), 2);
        assert!(comm.contains_vector(&vectorize(&flip), &tol()));

        assert!(matches!(commutant(2, &[CMatrix::identity(3, 3)], &tol()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn double_commutant_examples() {
        assert_eq!(double_commutant(3, &[], &tol()).unwrap().dim(), 1);

        // regular representation of Z₃: cyclic shifts
        let shift = CMatrix::from_fn(3, 3, |a, b| if a == (b + 1) % 3 { ONE } else { ZERO });
        let vn = double_commutant(3, &[shift.clone(), &shift * &shift], &tol()).unwrap();
        assert_eq!(vn.dim(), 3);

        let diag: Vec<CMatrix> = (0..4).map(|a| matrix_unit(4, a, a)).collect();
        assert_eq!(double_commutant(4, &diag, &tol()).unwrap().dim(), 4);
    }

    #[test]
    fn double_commutant_contains_generators_and_is_idempotent() {
        let a = CMatrix::from_fn(3, 3, |r, c| Complex64::new((r + 2 * c) as f64, (r * c) as f64 - 1.0));
        let t = tol();
        let dc = double_commutant(3, &[a.clone()], &t).unwrap();
        assert!(dc.contains_vector(&vectorize(&a), &t));
        assert!(dc.contains_vector(&vectorize(&CMatrix::identity(3, 3)), &t));
        let again = double_commutant(3, &dc.basis_matrices(3), &t).unwrap();
        assert!(dc.equals(&again, &t).unwrap());
    }

    #[test]
    fn factorization_examples() {
        let t = tol();
        let id = CMatrix::identity(3, 3);
        let f = psd_factorize(&id, &t);
        assert!(f.gram);
        assert_eq!(f.pairs.len(), 3);
        assert!(f.residual <= t.entry_tol);

        let ones = CMatrix::from_element(4, 4, ONE);
        let f = psd_factorize(&ones, &t);
        assert_eq!(f.pairs.len(), 1);
        for z in f.pairs[0].0.iter().chain(f.pairs[0].1.iter()) {
            assert!((z - ONE).norm() < 1e-12);
        }

        let indefinite = CMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(2.0), c(1.0)]);
        let f = psd_factorize(&indefinite, &t);
        assert!(!f.gram);
        assert!(f.residual <= t.entry_tol);

        let non_hermitian = CMatrix::from_row_slice(2, 2, &[c(1.0), Complex64::new(0.0, 3.0), c(-2.0), c(0.5)]);
        let f = psd_factorize(&non_hermitian, &t);
        assert!(!f.gram);
        assert!(f.residual <= t.entry_tol);
    }

    #[test]
    fn projector_laws() {
        let v = [e(4, 0) + e(4, 2).scale(2.0), e(4, 1) - e(4, 3)];
        let s = Subspace::span(4, &v, &tol());
        assert_eq!(s.dim(), 2);
        assert!(s.projector_defect() < 1e-14);
        for b in s.basis_vectors() {
            assert!((s.project(&b) - &b).norm() < 1e-14);
        }
        let tr: Complex64 = s.projector().trace();
        assert!((tr.re - 2.0).abs() < 1e-12);
    }
}
