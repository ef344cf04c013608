//! Support of an operator as a subset of the group, and its annihilator ideal.

use serde::{Deserialize, Serialize};

use crate::actions::{theta_hat, OperatorMatrix};
use crate::error::Result;
use crate::functions::{check_same_group, GroupFunction};
use crate::group::{Group, Subgroup};
use crate::linalg::{null_space, vectorize, CMatrix, CVector, Subspace, Tolerances, ZERO};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportSet {
    pub group: String,
    pub members: Vec<usize>,
    pub entry_tol: f64,
}

impl SupportSet {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &[usize]) -> bool {
        self.members.iter().all(|x| other.contains(x))
    }
}

fn support_set(group: &Group, mut members: Vec<usize>, tol: &Tolerances) -> SupportSet {
    members.sort_unstable();
    members.dedup();
    SupportSet { group: group.name().to_string(), members, entry_tol: tol.entry_tol }
}

/// `{a·b⁻¹ : |T[a][b]| > entry_tol}`
pub fn operator_support(t: &OperatorMatrix, tol: &Tolerances) -> SupportSet {
    let g = t.group();
    let m = t.matrix();
    let mut members = Vec::new();
    for a in g.elements() {
        for b in g.elements() {
            if m[(a, b)].norm() > tol.entry_tol {
                members.push(g.div(a, b));
            }
        }
    }
    support_set(g, members, tol)
}

#[derive(Debug, Clone)]
pub struct AnnihilatorIdeal {
    /// `{φ : Θ̂(φ)(T) = 0}` as vectors of function values.
    pub ideal: Subspace,
    /// Common zeros of the ideal.
    pub hull: SupportSet,
    /// Largest residual of `δ_y · φ` against the ideal, over basis `φ` and all `y`.
    pub closure_defect: f64,
}

/// The annihilator ideal, computed from `Θ̂` applied to `T` rather than from the stripe formula.
pub fn annihilator_ideal(t: &OperatorMatrix, tol: &Tolerances) -> AnnihilatorIdeal {
    let g = t.group();
    let n = g.order();
    let mut columns = CMatrix::zeros(n * n, n);
    for x in g.elements() {
        let image = theta_hat(&GroupFunction::delta(g, x)).apply(t).expect("same group");
        let v = vectorize(image.matrix());
        for (k, z) in v.iter().enumerate() {
            if z.norm() > tol.entry_tol {
                columns[(k, x)] = *z;
            }
        }
    }
    let ideal = null_space(&columns, tol);
    let p = ideal.projector();
    let hull: Vec<usize> = g.elements().filter(|&x| p[(x, x)].norm() <= tol.eq_tol).collect();
    let closure_defect = ideal_closure_defect(&ideal, n);
    AnnihilatorIdeal { ideal, hull: support_set(g, hull, tol), closure_defect }
}

/// Largest residual of `δ_y · φ` for basis vectors `φ` of a subspace of `ℂ^n`.
pub fn ideal_closure_defect(ideal: &Subspace, n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for phi in ideal.basis_vectors() {
        for y in 0..n {
            let mut v = CVector::zeros(n);
            v[y] = phi[y];
            worst = worst.max(ideal.residual(&v));
        }
    }
    worst
}

/// Whether `supp Θ̂(φ)(T) ⊆ supp φ ∩ supp T`.
pub fn theta_hat_support_law(phi: &GroupFunction, t: &OperatorMatrix, tol: &Tolerances) -> Result<bool> {
    check_same_group(phi.group(), t.group())?;
    let image = theta_hat(phi).apply(t)?;
    let lhs = operator_support(&image, tol);
    let supp_t = operator_support(t, tol);
    let both: Vec<usize> = phi.support(tol).into_iter().filter(|&x| supp_t.contains(x)).collect();
    Ok(lhs.is_subset_of(&both))
}

/// Whether `supp(S + T) ⊆ supp S ∪ supp T` and `supp T* = (supp T)⁻¹`.
pub fn union_and_adjoint_laws(s: &OperatorMatrix, t: &OperatorMatrix, tol: &Tolerances) -> Result<bool> {
    let g = t.group();
    let sum = operator_support(&s.add(t)?, tol);
    let mut union = operator_support(s, tol).members;
    union.extend(operator_support(t, tol).members);
    let adj = operator_support(&t.adjoint(), tol);
    let inverted = support_set(g, operator_support(t, tol).members.iter().map(|&x| g.inv(x)).collect(), tol);
    Ok(sum.is_subset_of(&union) && adj == inverted)
}

/// `max |Θ̂(φ)(T) − φ(e)·T|` for `supp T ⊆ H` and `φ` constant on `H`.
pub fn constant_on_subgroup_defect(phi: &GroupFunction, t: &OperatorMatrix) -> Result<f64> {
    let image = theta_hat(phi).apply(t)?;
    Ok(image.max_abs_diff(&t.scale(phi.at(0))))
}

/// Zeroes every entry of `T` whose stripe `a·b⁻¹` lies outside `H`.
pub fn restrict_to_subgroup(t: &OperatorMatrix, h: &Subgroup) -> OperatorMatrix {
    let g = t.group();
    let n = g.order();
    let m = CMatrix::from_fn(n, n, |a, b| if h.contains(g.div(a, b)) { t.matrix()[(a, b)] } else { ZERO });
    OperatorMatrix::new(g, m).expect("same shape")
}
