//! Finite groups as Cayley tables.
//!
//! Elements are dense indices `0..n` and index 0 is always the identity.
//! Builtin families use the following element orders:
//!
//! * `Z<n>`: index `k` is the residue `k mod n`.
//! * `D<n>`: the symmetry group of the regular n-gon (order `2n`). Index `k < n`
//!   is the rotation `r^k`, index `n + k` is the reflection `s r^k`.
//! * `S<n>`: permutations of `0..n` in lexicographic order of their one-line
//!   notation; `(a·b)(i) = a(b(i))`.
//! * `Dic<n>`: the dicyclic group of order `4n` (`Q8 = Dic2`). Index
//!   `j·2n + k` is `a^k x^j` with `a^{2n} = 1`, `x^2 = a^n`, `x a x^{-1} = a^{-1}`.
//! * `AxB`: index `i·|B| + j` is the pair `(a_i, b_j)`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order accepted anywhere.
pub const MAX_ORDER: usize = 120;

/// Shared handle to a group; functions, measures and operators all carry one.
pub type Group = Arc<GroupTable>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    name: String,
    elements: Vec<String>,
    table: Vec<usize>,
    inverse: Vec<usize>,
}

/// On-disk form of a group. Inverses and the identity are derived on load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDocument {
    pub name: String,
    pub order: usize,
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl GroupTable {
    /// Validates a multiplication table and relabels it so that the identity is index 0.
    pub fn from_table(name: &str, elements: Vec<String>, rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Schema("empty table".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::SizeCap { order: n, cap: MAX_ORDER });
        }
        if elements.len() != n {
            return Err(Error::Schema(format!(
                "{} element labels for a table with {n} rows",
                elements.len()
            )));
        }
        let mut table = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Schema(format!("row {a} has {} entries, expected {n}", row.len())));
            }
            for (b, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::Schema(format!("table[{a}][{b}] = {v} is out of range 0..{n}")));
                }
            }
            table.extend_from_slice(row);
        }
        let at = |a: usize, b: usize| table[a * n + b];

        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(Error::MissingIdentity)?;

        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or(Error::MissingInverse(a))?;
        }

        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    let left = at(ab, c);
                    let right = at(a, at(b, c));
                    if left != right {
                        return Err(Error::Associativity { a, b, c, left, right });
                    }
                }
            }
        }

        // swap the identity into slot 0
        let relabel: Vec<usize> = (0..n)
            .map(|i| {
                if i == identity {
                    0
                } else if i == 0 {
                    identity
                } else {
                    i
                }
            })
            .collect();
        let mut new_table = vec![0; n * n];
        let mut new_inverse = vec![0; n];
        let mut new_elements = elements.clone();
        for a in 0..n {
            new_elements[relabel[a]] = elements[a].clone();
            new_inverse[relabel[a]] = relabel[inverse[a]];
            for b in 0..n {
                new_table[relabel[a] * n + relabel[b]] = relabel[at(a, b)];
            }
        }

        Ok(GroupTable {
            name: name.to_string(),
            elements: new_elements,
            table: new_table,
            inverse: new_inverse,
        })
    }

    fn from_fn(name: String, elements: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let n = elements.len();
        let rows = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
        Self::from_table(&name, elements, rows)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn labels(&self) -> &[String] {
        &self.elements
    }

    pub fn label(&self, x: usize) -> &str {
        &self.elements[x]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `a · b⁻¹`
    #[inline]
    pub fn div(&self, a: usize, b: usize) -> usize {
        self.mul(a, self.inv(b))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> usize {
        self.elements().map(|a| self.element_order(a)).fold(1, lcm)
    }

    pub fn to_document(&self) -> GroupDocument {
        let n = self.order();
        GroupDocument {
            name: self.name.clone(),
            order: n,
            elements: self.elements.clone(),
            table: (0..n).map(|a| self.table[a * n..(a + 1) * n].to_vec()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("group document serializes")
    }
}

impl fmt::Display for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.order())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Parses a group document and validates every group axiom.
pub fn parse_group(document: &str) -> Result<Group> {
    let doc: GroupDocument = serde_json::from_str(document).map_err(|e| Error::Schema(e.to_string()))?;
    if doc.order != doc.table.len() {
        return Err(Error::Schema(format!(
            "order {} does not match table with {} rows",
            doc.order,
            doc.table.len()
        )));
    }
    Ok(Arc::new(GroupTable::from_table(&doc.name, doc.elements, doc.table)?))
}

/// Builtin group families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Dicyclic(usize),
    DirectProduct(Box<GroupKind>, Box<GroupKind>),
}

impl GroupKind {
    pub fn order(&self) -> usize {
        match self {
            GroupKind::Cyclic(n) => *n,
            GroupKind::Dihedral(n) => 2 * n,
            GroupKind::Symmetric(n) => (1..=*n).product(),
            GroupKind::Dicyclic(n) => 4 * n,
            GroupKind::DirectProduct(a, b) => a.order().saturating_mul(b.order()),
        }
    }

    pub fn product(a: GroupKind, b: GroupKind) -> GroupKind {
        GroupKind::DirectProduct(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Cyclic(n) => write!(f, "Z{n}"),
            GroupKind::Dihedral(n) => write!(f, "D{n}"),
            GroupKind::Symmetric(n) => write!(f, "S{n}"),
            GroupKind::Dicyclic(2) => write!(f, "Q8"),
            GroupKind::Dicyclic(n) => write!(f, "Dic{n}"),
            GroupKind::DirectProduct(a, b) => write!(f, "{a}x{b}"),
        }
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    /// Accepts `Z<n>`, `D<n>`, `S<n>`, `Dic<n>`, `Q8`, and `x`-separated products.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('x') {
            let mut parts = s.split('x').map(str::parse::<GroupKind>);
            let first = parts.next().ok_or_else(|| Error::UnknownGroupKind(s.into()))??;
            return parts.try_fold(first, |acc, p| Ok(GroupKind::product(acc, p?)));
        }
        let bad = || Error::UnknownGroupKind(s.to_string());
        if s == "Q8" {
            return Ok(GroupKind::Dicyclic(2));
        }
        let (ctor, digits): (fn(usize) -> GroupKind, &str) = if let Some(d) = s.strip_prefix("Dic") {
            (GroupKind::Dicyclic, d)
        } else if let Some(d) = s.strip_prefix('Z') {
            (GroupKind::Cyclic, d)
        } else if let Some(d) = s.strip_prefix('D') {
            (GroupKind::Dihedral, d)
        } else if let Some(d) = s.strip_prefix('S') {
            (GroupKind::Symmetric, d)
        } else {
            return Err(bad());
        };
        let n: usize = digits.parse().map_err(|_| bad())?;
        Ok(ctor(n))
    }
}

/// Builds a builtin group. See the module docs for element orders.
pub fn make_group(kind: &GroupKind) -> Result<Group> {
    Ok(Arc::new(build(kind)?))
}

fn build(kind: &GroupKind) -> Result<GroupTable> {
    let order = kind.order();
    if let GroupKind::Symmetric(d) = kind {
        if *d > 5 {
            return Err(Error::SizeCap { order, cap: MAX_ORDER });
        }
    }
    if order > MAX_ORDER {
        return Err(Error::SizeCap { order, cap: MAX_ORDER });
    }
    let name = kind.to_string();
    match *kind {
        GroupKind::Cyclic(n) => {
            if n == 0 {
                return Err(Error::InvalidParameter("cyclic group of order 0".into()));
            }
            let labels = (0..n).map(|k| k.to_string()).collect();
            GroupTable::from_fn(name, labels, |a, b| (a + b) % n)
        }
        GroupKind::Dihedral(n) => {
            if n == 0 {
                return Err(Error::InvalidParameter("dihedral group of a 0-gon".into()));
            }
            let labels = (0..n)
                .map(|k| format!("r^{k}"))
                .chain((0..n).map(|k| format!("sr^{k}")))
                .collect();
            GroupTable::from_fn(name, labels, |a, b| {
                let (sa, ka) = (a / n, a % n);
                let (sb, kb) = (b / n, b % n);
                // r^k s = s r^{-k}
                let k = if sb == 0 { ka + kb } else { kb + n - ka };
                ((sa + sb) % 2) * n + k % n
            })
        }
        GroupKind::Symmetric(d) => {
            if d == 0 {
                return Err(Error::InvalidParameter("symmetric group of degree 0".into()));
            }
            let perms = permutations(d);
            let labels = perms
                .iter()
                .map(|p| p.iter().map(|i| i.to_string()).collect::<String>())
                .collect();
            let index_of = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
            GroupTable::from_fn(name, labels, |a, b| {
                let composed: Vec<usize> = (0..d).map(|i| perms[a][perms[b][i]]).collect();
                index_of(&composed)
            })
        }
        GroupKind::Dicyclic(n) => {
            if n == 0 {
                return Err(Error::InvalidParameter("dicyclic group Dic0".into()));
            }
            let m = 2 * n;
            let labels = (0..m)
                .map(|k| format!("a^{k}"))
                .chain((0..m).map(|k| format!("a^{k}x")))
                .collect();
            GroupTable::from_fn(name, labels, |p, q| {
                let (jp, kp) = (p / m, p % m);
                let (jq, kq) = (q / m, q % m);
                match (jp, jq) {
                    (0, _) => jq * m + (kp + kq) % m,
                    (_, 0) => m + (kp + m - kq) % m,
                    _ => (kp + m - kq + n) % m,
                }
            })
        }
        GroupKind::DirectProduct(ref a, ref b) => {
            let ga = build(a)?;
            let gb = build(b)?;
            let nb = gb.order();
            let labels = ga
                .labels()
                .iter()
                .flat_map(|x| gb.labels().iter().map(move |y| format!("({x},{y})")))
                .collect();
            GroupTable::from_fn(name, labels, |p, q| {
                ga.mul(p / nb, q / nb) * nb + gb.mul(p % nb, q % nb)
            })
        }
    }
}

/// All permutations of `0..d` in lexicographic order.
fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..d).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (0..d.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            return out;
        };
        let j = (i + 1..d).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
        out.push(current.clone());
    }
}

/// A subgroup, stored as the sorted list of its member indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: Vec<usize>,
    parent_order: usize,
}

impl Subgroup {
    /// Wraps a member set after checking closure, identity and inverses.
    pub fn new(group: &GroupTable, members: impl IntoIterator<Item = usize>) -> Option<Self> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        if !set.contains(&0) || set.iter().any(|&x| x >= group.order()) {
            return None;
        }
        let closed = set.iter().all(|&a| {
            set.contains(&group.inv(a)) && set.iter().all(|&b| set.contains(&group.mul(a, b)))
        });
        closed.then(|| Subgroup {
            members: set.into_iter().collect(),
            parent_order: group.order(),
        })
    }

    pub fn trivial(group: &GroupTable) -> Self {
        Subgroup { members: vec![0], parent_order: group.order() }
    }

    pub fn whole(group: &GroupTable) -> Self {
        Subgroup { members: group.elements().collect(), parent_order: group.order() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn index(&self) -> usize {
        self.parent_order / self.members.len()
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.parent_order
    }

    /// Right cosets `H y`, each sorted, listed by smallest representative.
    pub fn right_cosets(&self, group: &GroupTable) -> Vec<Vec<usize>> {
        self.cosets(group, |h, y| group.mul(h, y))
    }

    /// Left cosets `y H`.
    pub fn left_cosets(&self, group: &GroupTable) -> Vec<Vec<usize>> {
        self.cosets(group, |h, y| group.mul(y, h))
    }

    fn cosets(&self, group: &GroupTable, act: impl Fn(usize, usize) -> usize) -> Vec<Vec<usize>> {
        let mut seen = vec![false; group.order()];
        let mut out = Vec::new();
        for y in group.elements() {
            if seen[y] {
                continue;
            }
            let mut coset: Vec<usize> = self.members.iter().map(|&h| act(h, y)).collect();
            coset.sort_unstable();
            for &c in &coset {
                seen[c] = true;
            }
            out.push(coset);
        }
        out
    }
}

/// Smallest subgroup containing `generators`, by breadth-first closure.
pub fn generated_subgroup(group: &GroupTable, generators: &[usize]) -> Result<Subgroup> {
    let n = group.order();
    if let Some(&bad) = generators.iter().find(|&&g| g >= n) {
        return Err(Error::ElementOutOfRange { index: bad, order: n });
    }
    let steps: Vec<usize> = generators.iter().flat_map(|&g| [g, group.inv(g)]).collect();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for &s in &steps {
            let y = group.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    Ok(Subgroup {
        members: (0..n).filter(|&x| seen[x]).collect(),
        parent_order: n,
    })
}

/// Every subgroup, sorted by order and then by member list.
pub fn all_subgroups(group: &GroupTable) -> Vec<Subgroup> {
    let cyclic: BTreeSet<Subgroup> = group
        .elements()
        .map(|g| generated_subgroup(group, &[g]).expect("element in range"))
        .collect();
    let mut found = cyclic.clone();
    let mut frontier: Vec<Subgroup> = cyclic.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for h in &frontier {
            for c in &cyclic {
                let gens: Vec<usize> = h.members().iter().chain(c.members()).copied().collect();
                let joined = generated_subgroup(group, &gens).expect("members in range");
                if found.insert(joined.clone()) {
                    next.push(joined);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Subgroup> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.members.cmp(&b.members)));
    out
}

/// A one-dimensional unitary representation of an abelian group.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    pub values: Vec<Complex64>,
}

impl Character {
    pub fn is_trivial(&self, tol: f64) -> bool {
        self.values.iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() <= tol)
    }
}

/// `e^{2πi m / n}`, exact on quarter turns.
fn root_of_unity(m: usize, n: usize) -> Complex64 {
    let m = m % n;
    if (4 * m) % n == 0 {
        return match 4 * m / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, std::f64::consts::TAU * m as f64 / n as f64)
}

/// All characters of an abelian group.
///
/// Builds a tower `{e} < ⟨g₁⟩ < ⟨g₁,g₂⟩ < …` where each `g_i` is an element of
/// maximal order outside the previous stage. A character of a stage extends to
/// the next one in exactly `r` ways, `r` being the least power with
/// `g_i^r` in the previous stage. Character values are tracked as exact integer
/// phases modulo the group exponent. The trivial character comes first; for
/// `Z<n>` the k-th character is `j ↦ e^{2πi jk/n}`.
pub fn characters(group: &GroupTable) -> Result<Vec<Character>> {
    if !group.is_abelian() {
        return Err(Error::Nonabelian);
    }
    let n = group.order();
    let exponent = group.exponent();
    let mut in_stage = vec![false; n];
    in_stage[0] = true;
    let mut stage: Vec<usize> = vec![0];
    // phases[c][x]: character c at element x is e^{2πi phases/exponent}; valid on `stage`
    let mut phases: Vec<Vec<usize>> = vec![vec![0; n]];

    while stage.len() < n {
        let g = group
            .elements()
            .filter(|&x| !in_stage[x])
            .max_by(|&a, &b| group.element_order(a).cmp(&group.element_order(b)).then(b.cmp(&a)))
            .expect("stage is a proper subgroup");
        let mut r = 1;
        let mut g_pow = g;
        while !in_stage[g_pow] {
            g_pow = group.mul(g_pow, g);
            r += 1;
        }
        // g_pow = g^r lies in the stage
        let mut next_stage = Vec::with_capacity(stage.len() * r);
        let mut decomposition = Vec::with_capacity(stage.len() * r);
        let mut gj = 0;
        for j in 0..r {
            for &h in &stage {
                let x = group.mul(h, gj);
                next_stage.push(x);
                decomposition.push((x, h, j));
            }
            gj = group.mul(gj, g);
        }
        let mut next_phases = Vec::with_capacity(phases.len() * r);
        for chi in &phases {
            let base = chi[g_pow];
            debug_assert_eq!(base % r, 0);
            for k in 0..r {
                let w = base / r + k * exponent / r;
                let mut ext = vec![0; n];
                for &(x, h, j) in &decomposition {
                    ext[x] = (chi[h] + j * w) % exponent;
                }
                next_phases.push(ext);
            }
        }
        for &x in &next_stage {
            in_stage[x] = true;
        }
        stage = next_stage;
        phases = next_phases;
    }

    Ok(phases
        .into_iter()
        .map(|p| Character {
            values: p.into_iter().map(|m| root_of_unity(m, exponent)).collect(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(s: &str) -> Group {
        make_group(&s.parse().unwrap()).unwrap()
    }

    fn check_axioms(g: &GroupTable) {
        for a in g.elements() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
            assert_eq!(g.mul(0, a), a);
            for b in g.elements() {
                for c in g.elements() {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn builtins_satisfy_axioms() {
        for s in ["Z1", "Z7", "D1", "D4", "D5", "S1", "S3", "S4", "Q8", "Dic3", "Z2xZ4", "Z2xS3"] {
            let g = kind(s);
            assert_eq!(g.order(), s.parse::<GroupKind>().unwrap().order(), "{s}");
            check_axioms(&g);
        }
    }

    #[test]
    fn trivial_group() {
        let g = kind("Z1");
        assert_eq!(g.order(), 1);
        assert_eq!(g.mul(0, 0), 0);
    }

    #[test]
    fn s3_is_nonabelian_with_order_six() {
        let g = kind("S3");
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(g.label(0), "012");
    }

    #[test]
    fn klein_four_is_self_inverse() {
        let g = make_group(&GroupKind::product(GroupKind::Cyclic(2), GroupKind::Cyclic(2))).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.elements().all(|x| g.inv(x) == x));
        assert!(g.is_abelian());
    }

    #[test]
    fn quaternion_structure() {
        let g = kind("Q8");
        assert!(!g.is_abelian());
        // exactly one element of order 2
        let order_two: Vec<_> = g.elements().filter(|&x| g.element_order(x) == 2).collect();
        assert_eq!(order_two, vec![2]);
        assert_eq!(all_subgroups(&g).len(), 6);
    }

    #[test]
    fn size_caps() {
        assert!(matches!(make_group(&GroupKind::Symmetric(6)), Err(Error::SizeCap { .. })));
        assert!(matches!(make_group(&GroupKind::Cyclic(121)), Err(Error::SizeCap { .. })));
        assert!(make_group(&GroupKind::Symmetric(5)).is_ok());
        assert!(matches!("foo".parse::<GroupKind>(), Err(Error::UnknownGroupKind(_))));
    }

    #[test]
    fn json_round_trip() {
        let g = kind("Z3");
        let back = parse_group(&g.to_json()).unwrap();
        assert_eq!(*back, *g);
        assert_eq!(back.identity(), 0);
    }

    #[test]
    fn identity_is_moved_to_index_zero() {
        // Z3 written with the identity in the middle
        let doc = r#"{"name":"Z3","order":3,"elements":["a","e","b"],
                      "table":[[2,0,1],[0,1,2],[1,2,0]]}"#;
        let g = parse_group(doc).unwrap();
        assert_eq!(g.label(0), "e");
        check_axioms(&g);
    }

    #[test]
    fn out_of_range_entry_is_schema_error() {
        let doc = r#"{"name":"bad","order":2,"elements":["e","a"],"table":[[0,1],[1,5]]}"#;
        assert!(matches!(parse_group(doc), Err(Error::Schema(_))));
    }

    #[test]
    fn nonassociative_loop_is_rejected() {
        // a loop of order 5 in which every element is its own inverse; no group of order 5 has that
        let doc = r#"{"name":"loop5","order":5,"elements":["0","1","2","3","4"],
            "table":[[0,1,2,3,4],[1,0,3,4,2],[2,4,0,1,3],[3,2,4,0,1],[4,3,1,2,0]]}"#;
        match parse_group(doc) {
            Err(Error::Associativity { a, b, c, left, right }) => assert_ne!(left, right, "({a},{b},{c})"),
            other => panic!("expected associativity error, got {other:?}"),
        }
    }

    #[test]
    fn missing_identity_and_inverse() {
        let no_id = r#"{"name":"x","order":2,"elements":["a","b"],"table":[[1,0],[0,0]]}"#;
        assert_eq!(parse_group(no_id).unwrap_err(), Error::MissingIdentity);
        let no_inv = r#"{"name":"x","order":2,"elements":["e","a"],"table":[[0,1],[1,1]]}"#;
        assert_eq!(parse_group(no_inv).unwrap_err(), Error::MissingInverse(1));
    }

    #[test]
    fn generated_subgroups() {
        let z6 = kind("Z6");
        assert_eq!(generated_subgroup(&z6, &[]).unwrap().members(), &[0]);
        assert_eq!(generated_subgroup(&z6, &[2]).unwrap().members(), &[0, 2, 4]);
        let s3 = kind("S3");
        // "102" is a transposition, "120" a 3-cycle
        let t = s3.labels().iter().position(|l| l == "102").unwrap();
        let c = s3.labels().iter().position(|l| l == "120").unwrap();
        assert!(generated_subgroup(&s3, &[t, c]).unwrap().is_whole());
        assert!(matches!(generated_subgroup(&s3, &[9]), Err(Error::ElementOutOfRange { .. })));
    }

    #[test]
    fn subgroup_counts() {
        for (s, count) in [("Z6", 4), ("S3", 6), ("D4", 10), ("Z2xZ4", 8), ("Z1", 1), ("S4", 30)] {
            let g = kind(s);
            let subs = all_subgroups(&g);
            assert_eq!(subs.len(), count, "{s}");
            for h in &subs {
                assert!(Subgroup::new(&g, h.members().iter().copied()).is_some());
                assert_eq!(g.order() % h.len(), 0);
            }
        }
    }

    #[test]
    fn cosets_partition() {
        let g = kind("S3");
        for h in all_subgroups(&g) {
            let right = h.right_cosets(&g);
            let left = h.left_cosets(&g);
            assert_eq!(right.len(), h.index());
            assert_eq!(left.len(), h.index());
            assert_eq!(right.iter().map(Vec::len).sum::<usize>(), 6);
        }
    }

    #[test]
    fn characters_of_z2_and_z4() {
        let z2 = characters(&kind("Z2")).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(z2[0].values, vec![one, one]);
        assert_eq!(z2[1].values, vec![one, -one]);

        // brute force: γ_k(j) = i^{kj}
        let z4 = characters(&kind("Z4")).unwrap();
        let i = Complex64::new(0.0, 1.0);
        for (k, chi) in z4.iter().enumerate() {
            for j in 0..4 {
                assert!((chi.values[j] - i.powu((k * j) as u32)).norm() < 1e-15);
            }
        }
        assert_eq!(characters(&kind("S3")).unwrap_err(), Error::Nonabelian);
    }

    #[test]
    fn characters_are_orthogonal_homomorphisms() {
        for s in ["Z1", "Z12", "Z2xZ2", "Z2xZ4", "Z2xZ2xZ2", "Z3xZ3", "Z2xZ6", "Z4xZ6"] {
            let g = kind(s);
            let chars = characters(&g).unwrap();
            let n = g.order();
            assert_eq!(chars.len(), n, "{s}");
            for chi in &chars {
                assert!((chi.values[0] - 1.0).norm() < 1e-14);
                for a in g.elements() {
                    assert!((chi.values[a].norm() - 1.0).abs() < 1e-14);
                    for b in g.elements() {
                        let d = chi.values[g.mul(a, b)] - chi.values[a] * chi.values[b];
                        assert!(d.norm() < 1e-12, "{s}");
                    }
                }
            }
            for (p, chi) in chars.iter().enumerate() {
                for (q, psi) in chars.iter().enumerate() {
                    let ip: Complex64 = chi.values.iter().zip(&psi.values).map(|(a, b)| a * b.conj()).sum();
                    let expected = if p == q { n as f64 } else { 0.0 };
                    assert!((ip - expected).norm() < 1e-11, "{s} {p} {q}");
                }
            }
        }
    }
}
