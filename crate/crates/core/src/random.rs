//! Seeded generators for functions, measures and operators.

use num_complex::Complex64;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::actions::OperatorMatrix;
use crate::functions::{GroupFunction, Measure};
use crate::group::{all_subgroups, generated_subgroup, Group, Subgroup};
use crate::linalg::{CMatrix, ONE, ZERO};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn function<R: Rng>(group: &Group, rng: &mut R) -> GroupFunction {
    GroupFunction::from_fn(group, |_| complex(rng))
}

/// A function that vanishes on a random part of the group.
pub fn sparse_function<R: Rng>(group: &Group, density: f64, rng: &mut R) -> GroupFunction {
    GroupFunction::from_fn(group, |_| if rng.random_bool(density) { complex(rng) } else { ZERO })
}

/// `σ(x) = ⟨λ(x)ξ, ξ⟩ / ‖ξ‖²` for a random `ξ`.
pub fn positive_definite<R: Rng>(group: &Group, rng: &mut R) -> GroupFunction {
    let xi: Vec<Complex64> = group.elements().map(|_| complex(rng)).collect();
    coefficient_function(group, &xi)
}

/// Like [`positive_definite`], with `ξ` constant on the right cosets `H y`, so that
/// `σ = 1` on `H`.
pub fn positive_definite_fixing<R: Rng>(group: &Group, h: &Subgroup, rng: &mut R) -> GroupFunction {
    let mut xi = vec![ZERO; group.order()];
    for coset in h.right_cosets(group) {
        let v = complex(rng);
        for y in coset {
            xi[y] = v;
        }
    }
    coefficient_function(group, &xi)
}

fn coefficient_function(group: &Group, xi: &[Complex64]) -> GroupFunction {
    let norm_sq: f64 = xi.iter().map(|z| z.norm_sqr()).sum();
    GroupFunction::from_fn(group, |x| {
        let xinv = group.inv(x);
        group.elements().map(|y| xi[group.mul(xinv, y)] * xi[y].conj()).sum::<Complex64>() / norm_sq
    })
}

/// `σ(e) = 1`, `σ = 1` on `h`, random elsewhere; typically not positive definite.
pub fn unit_function_fixing<R: Rng>(group: &Group, h: &Subgroup, rng: &mut R) -> GroupFunction {
    GroupFunction::from_fn(group, |x| if h.contains(x) { ONE } else { complex(rng).scale(1.5) })
}

pub fn random_subgroup<R: Rng>(group: &Group, rng: &mut R) -> Subgroup {
    all_subgroups(group).choose(rng).cloned().expect("at least the trivial subgroup")
}

/// Probability measure with random weights on `support`.
pub fn measure_on<R: Rng>(group: &Group, support: &[usize], rng: &mut R) -> Measure {
    let mut w = vec![0.0; group.order()];
    for &x in support {
        w[x] += rng.random_range(0.05..1.0);
    }
    let total: f64 = w.iter().sum();
    Measure::from_real(group, &w.iter().map(|v| v / total).collect::<Vec<_>>()).expect("length matches")
}

/// Probability measure whose support generates the group.
pub fn adapted_measure<R: Rng>(group: &Group, rng: &mut R) -> Measure {
    loop {
        let size = rng.random_range(1..=group.order());
        let support: Vec<usize> = group.elements().collect::<Vec<_>>().choose_multiple(rng, size).copied().collect();
        if generated_subgroup(group, &support).expect("in range").is_whole() {
            return measure_on(group, &support, rng);
        }
    }
}

/// Probability measure supported in a random proper subgroup; `None` for the trivial group.
pub fn non_adapted_measure<R: Rng>(group: &Group, rng: &mut R) -> Option<Measure> {
    let proper: Vec<Subgroup> = all_subgroups(group).into_iter().filter(|h| !h.is_whole()).collect();
    let h = proper.choose(rng)?;
    let size = rng.random_range(1..=h.len());
    let support: Vec<usize> = h.members().choose_multiple(rng, size).copied().collect();
    Some(measure_on(group, &support, rng))
}

/// Operator with independent random entries, each nonzero with probability `density`.
pub fn operator<R: Rng>(group: &Group, density: f64, rng: &mut R) -> OperatorMatrix {
    let n = group.order();
    let m = CMatrix::from_fn(n, n, |_, _| if rng.random_bool(density) { complex(rng) } else { ZERO });
    OperatorMatrix::new(group, m).expect("square of group order")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{is_adapted_measure, is_p1, level_set_one};
    use crate::group::{make_group, GroupKind};
    use crate::linalg::Tolerances;

    #[test]
    fn generated_pd_functions_are_states() {
        let g = make_group(&GroupKind::Dihedral(4)).unwrap();
        let t = Tolerances::default();
        let mut rng = seeded(7);
        for _ in 0..10 {
            let sigma = positive_definite(&g, &mut rng);
            assert!(is_p1(&sigma, &t));
            assert_eq!(level_set_one(&sigma, &t).unwrap(), vec![0]);
        }
        for h in all_subgroups(&g) {
            let sigma = positive_definite_fixing(&g, &h, &mut rng);
            assert!(is_p1(&sigma, &t));
            assert_eq!(level_set_one(&sigma, &t).unwrap(), h.members());
        }
    }

    #[test]
    fn generated_measures() {
        let g = make_group(&GroupKind::Symmetric(3)).unwrap();
        let t = Tolerances::default();
        let mut rng = seeded(1);
        for _ in 0..20 {
            assert!(is_adapted_measure(&adapted_measure(&g, &mut rng), &t).unwrap());
            let m = non_adapted_measure(&g, &mut rng).unwrap();
            assert!(!is_adapted_measure(&m, &t).unwrap());
        }
        let trivial = make_group(&GroupKind::Cyclic(1)).unwrap();
        assert!(non_adapted_measure(&trivial, &mut rng).is_none());
    }

    #[test]
    fn same_seed_same_output() {
        let g = make_group(&GroupKind::Cyclic(5)).unwrap();
        let a = positive_definite(&g, &mut seeded(3));
        let b = positive_definite(&g, &mut seeded(3));
        assert_eq!(a, b);
    }
}
