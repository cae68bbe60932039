//! Independence, direct sums, perspectivity, neutral ideals and frames.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::{Elem, FiniteLattice};
use crate::error::{Error, Result};

/// Ideal given by its (sorted) member set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IdealSet {
    pub members: Vec<Elem>,
}

impl IdealSet {
    pub fn principal(l: &FiniteLattice, a: Elem) -> Self {
        IdealSet {
            members: l.down_set(a),
        }
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Largest member; ideals of a finite lattice are principal.
    pub fn generator(&self, l: &FiniteLattice) -> Elem {
        l.join_all(self.members.iter().copied())
    }
}

/// An `n`-frame `((a_i)_{i<n}, (c_i)_{1<=i<n})`; `c[i-1]` is the axis of
/// `a_0 ~ a_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    pub a: Vec<Elem>,
    pub c: Vec<Elem>,
    pub large: bool,
}

impl Frame {
    /// Checks independence, the perspectivities, and (if flagged) largeness.
    pub fn verify(&self, l: &FiniteLattice) -> bool {
        if self.a.is_empty() || self.c.len() + 1 != self.a.len() {
            return false;
        }
        if !independent(l, &self.a) {
            return false;
        }
        let a0 = self.a[0];
        let axes_ok = self.a[1..]
            .iter()
            .zip(&self.c)
            .all(|(&ai, &ci)| perspective_via(l, a0, ai, ci));
        axes_ok && (!self.large || neutral_ideal_generated(l, a0).members.len() == l.len())
    }
}

/// Independence by the defining equation over all pairs of index subsets.
pub fn independent_by_definition(l: &FiniteLattice, seq: &[Elem]) -> bool {
    // zero entries never affect any join
    let nz: Vec<Elem> = seq.iter().copied().filter(|&x| x != l.bottom()).collect();
    let k = nz.len();
    if k > l.len() {
        return false;
    }
    let mut joins = vec![l.bottom(); 1usize << k];
    for mask in 1..joins.len() {
        let low = mask.trailing_zeros() as usize;
        joins[mask] = l.join(joins[mask & (mask - 1)], nz[low]);
    }
    for x in 0..joins.len() {
        for y in 0..joins.len() {
            if l.meet(joins[x], joins[y]) != joins[x & y] {
                return false;
            }
        }
    }
    true
}

/// Independence; uses `a_k ∧ ⋁_{i<k} a_i = 0` when the lattice is modular.
pub fn independent(l: &FiniteLattice, seq: &[Elem]) -> bool {
    if l.is_modular() {
        let mut acc = l.bottom();
        for &a in seq {
            if !l.disjoint(a, acc) {
                return false;
            }
            acc = l.join(acc, a);
        }
        true
    } else {
        independent_by_definition(l, seq)
    }
}

/// `⊕ seq`, defined when `seq` is independent.
pub fn oplus(l: &FiniteLattice, seq: &[Elem]) -> Result<Elem> {
    if independent(l, seq) {
        Ok(l.join_all(seq.iter().copied()))
    } else {
        Err(Error::NotIndependent)
    }
}

/// `a ~_x b`, i.e. `a ⊕ x = b ⊕ x`.
pub fn perspective_via(l: &FiniteLattice, a: Elem, b: Elem, x: Elem) -> bool {
    l.disjoint(a, x) && l.disjoint(b, x) && l.join(a, x) == l.join(b, x)
}

/// Least-index axis witnessing `a ~ b`.
pub fn perspective(l: &FiniteLattice, a: Elem, b: Elem) -> Option<Elem> {
    l.elements().find(|&x| perspective_via(l, a, b, x))
}

fn perspectivity_matrix(l: &FiniteLattice) -> Vec<bool> {
    let n = l.len();
    let mut m = vec![false; n * n];
    for a in 0..n {
        for b in a..n {
            let p = perspective(l, a, b).is_some();
            m[a * n + b] = p;
            m[b * n + a] = p;
        }
    }
    m
}

/// Closure of `↓x` under joins, down-sets and perspectivity. This is the
/// neutral ideal generated by `x` when the lattice is sectionally
/// complemented and modular.
pub fn neutral_ideal_by_perspectivity(l: &FiniteLattice, x: Elem) -> IdealSet {
    let n = l.len();
    let persp = perspectivity_matrix(l);
    let mut gen = x;
    loop {
        let mut next = gen;
        for y in l.elements().filter(|&y| l.leq(y, gen)) {
            for z in 0..n {
                if persp[y * n + z] {
                    next = l.join(next, z);
                }
            }
        }
        if next == gen {
            return IdealSet::principal(l, gen);
        }
        gen = next;
    }
}

/// An element is neutral iff it satisfies the median identity with every
/// pair; equivalently its principal ideal generates a distributive
/// sublattice of `Id L` with any two principal ideals.
fn is_neutral_element(l: &FiniteLattice, e: Elem) -> bool {
    l.elements().all(|a| {
        l.elements().all(|b| {
            let lo = l.join(l.join(l.meet(e, a), l.meet(a, b)), l.meet(b, e));
            let hi = l.meet(l.meet(l.join(e, a), l.join(a, b)), l.join(b, e));
            lo == hi
        })
    })
}

/// Least neutral ideal containing `x`, via neutral elements. Valid in any
/// finite lattice.
pub fn neutral_ideal_by_distributivity(l: &FiniteLattice, x: Elem) -> IdealSet {
    let above: Vec<Elem> = l
        .elements()
        .filter(|&e| l.leq(x, e) && is_neutral_element(l, e))
        .collect();
    let e = l
        .meet_all(above.iter().copied())
        .expect("finite lattices have a top, which is neutral");
    debug_assert!(is_neutral_element(l, e));
    IdealSet::principal(l, e)
}

/// Least neutral ideal containing `x`.
pub fn neutral_ideal_generated(l: &FiniteLattice, x: Elem) -> IdealSet {
    if l.is_sc_modular() {
        neutral_ideal_by_perspectivity(l, x)
    } else {
        neutral_ideal_by_distributivity(l, x)
    }
}

/// Visits every frame of the given order in lexicographic order of
/// `(a_0, a_1, c_1, a_2, c_2, ...)`. Stops early when the visitor breaks.
pub fn for_each_frame<F>(l: &FiniteLattice, order: usize, require_large: bool, mut visit: F)
where
    F: FnMut(&Frame) -> ControlFlow<()>,
{
    if order == 0 {
        return;
    }
    let mut frame = Frame {
        a: Vec::with_capacity(order),
        c: Vec::with_capacity(order),
        large: require_large,
    };
    for a0 in l.elements() {
        if require_large && neutral_ideal_generated(l, a0).members.len() != l.len() {
            continue;
        }
        frame.a.clear();
        frame.c.clear();
        frame.a.push(a0);
        if extend_frame(l, order, &mut frame, &mut visit).is_break() {
            return;
        }
    }
}

fn extend_frame<F>(
    l: &FiniteLattice,
    order: usize,
    frame: &mut Frame,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&Frame) -> ControlFlow<()>,
{
    if frame.a.len() == order {
        return visit(frame);
    }
    let a0 = frame.a[0];
    for ai in l.elements() {
        frame.a.push(ai);
        if independent(l, &frame.a) {
            for ci in l.elements().filter(|&c| perspective_via(l, a0, ai, c)) {
                frame.c.push(ci);
                let flow = extend_frame(l, order, frame, visit);
                frame.c.pop();
                flow?;
            }
        }
        frame.a.pop();
    }
    ControlFlow::Continue(())
}

/// All frames of the given order.
pub fn find_frames(l: &FiniteLattice, order: usize, require_large: bool) -> Vec<Frame> {
    let mut out = Vec::new();
    for_each_frame(l, order, require_large, |f| {
        out.push(f.clone());
        ControlFlow::Continue(())
    });
    out
}

/// If `(x ∨ y) ∧ z <= y`, checks `x ∧ (y ∨ z) = x ∧ y` and
/// `(x ∨ z) ∧ (y ∨ z) = (x ∧ y) ∨ z`. Returns whether the hypothesis held.
pub fn check_xyz_lemma(l: &FiniteLattice, x: Elem, y: Elem, z: Elem) -> Result<bool> {
    if !l.leq(l.meet(l.join(x, y), z), y) {
        return Ok(false);
    }
    if l.meet(x, l.join(y, z)) != l.meet(x, y) {
        return Err(Error::ConclusionViolated(format!(
            "x∧(y∨z) != x∧y at ({x},{y},{z})"
        )));
    }
    if l.meet(l.join(x, z), l.join(y, z)) != l.join(l.meet(x, y), z) {
        return Err(Error::ConclusionViolated(format!(
            "(x∨z)∧(y∨z) != (x∧y)∨z at ({x},{y},{z})"
        )));
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{subspace_lattice, Subspace};

    fn m3() -> FiniteLattice {
        FiniteLattice::diamond(3)
    }

    #[test]
    fn independence_in_m3() {
        let l = m3();
        assert!(independent(&l, &[1, 2]));
        assert!(!independent(&l, &[1, 2, 3]));
        assert!(!independent_by_definition(&l, &[1, 2, 3]));
        assert_eq!(l.meet(3, l.join(1, 2)), 3);
    }

    #[test]
    fn zero_entries_are_independent() {
        let l = m3();
        assert!(independent(&l, &[0, 0]));
        assert!(independent_by_definition(&l, &[0, 0]));
        assert!(independent(&l, &[0, 1, 0, 2]));
        assert!(!independent(&l, &[1, 1]));
    }

    #[test]
    fn boolean_atoms_are_independent() {
        let b3 = FiniteLattice::boolean(3);
        assert!(independent(&b3, &[1, 2, 4]));
        assert_eq!(oplus(&b3, &[1, 2, 4]).unwrap(), 7);
    }

    #[test]
    fn oplus_examples() {
        let b2 = FiniteLattice::boolean(2);
        assert_eq!(oplus(&b2, &[1, 2]).unwrap(), 3);
        assert_eq!(oplus(&m3(), &[1, 2, 3]), Err(Error::NotIndependent));

        let s = subspace_lattice(2, 3).unwrap();
        let line = |v: &[u8]| {
            s.index_of(&Subspace::span(s.field(), 3, &[v.to_vec()]))
                .unwrap()
        };
        let (e1, e2, e3) = (line(&[1, 0, 0]), line(&[0, 1, 0]), line(&[0, 0, 1]));
        assert_eq!(
            oplus(s.lattice(), &[e1, e2, e3]).unwrap(),
            s.lattice().top().unwrap()
        );
    }

    #[test]
    fn perspectivity_examples() {
        let l = m3();
        assert_eq!(perspective(&l, 1, 2), Some(3));
        assert_eq!(perspective(&l, 2, 2), Some(0));
        let b2 = FiniteLattice::boolean(2);
        assert_eq!(perspective(&b2, 1, 3), None);
    }

    #[test]
    fn neutral_ideals() {
        let l = m3();
        assert_eq!(neutral_ideal_generated(&l, 1).members, vec![0, 1, 2, 3, 4]);
        assert_eq!(neutral_ideal_generated(&l, 0).members, vec![0]);
        let sq = FiniteLattice::boolean(2);
        assert_eq!(neutral_ideal_generated(&sq, 1).members, vec![0, 1]);
        assert_eq!(neutral_ideal_by_distributivity(&sq, 1).members, vec![0, 1]);
        assert_eq!(
            neutral_ideal_by_distributivity(&l, 1).members,
            vec![0, 1, 2, 3, 4]
        );
    }

    #[test]
    fn frames_in_boolean_lattice_have_zero_base() {
        let b4 = FiniteLattice::boolean(4);
        let frames = find_frames(&b4, 2, false);
        assert!(!frames.is_empty());
        assert!(frames.iter().all(|f| f.a[0] == 0));
    }

    #[test]
    fn order_one_frames_are_single_elements() {
        let l = m3();
        let frames = find_frames(&l, 1, false);
        assert_eq!(frames.len(), l.len());
        assert!(frames.iter().all(|f| f.c.is_empty() && f.verify(&l)));
        assert!(find_frames(&l, 0, false).is_empty());
    }

    #[test]
    fn standard_large_four_frame_in_f2_4() {
        let s = subspace_lattice(2, 4).unwrap();
        let f = s.field();
        let unit = |i: usize| {
            let mut v = vec![0u8; 4];
            v[i] = 1;
            v
        };
        let idx = |rows: Vec<Vec<u8>>| s.index_of(&Subspace::span(f, 4, &rows)).unwrap();
        let a: Vec<Elem> = (0..4).map(|i| idx(vec![unit(i)])).collect();
        let c: Vec<Elem> = (1..4)
            .map(|i| {
                let mut v = unit(0);
                v[i] = 1;
                idx(vec![v])
            })
            .collect();
        let frame = Frame {
            a: a.clone(),
            c: c.clone(),
            large: true,
        };
        assert!(frame.verify(s.lattice()));

        let mut found = false;
        for_each_frame(s.lattice(), 4, true, |fr| {
            if fr.a == a && fr.c == c {
                found = true;
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        assert!(found);
    }

    #[test]
    fn xyz_lemma_examples() {
        let l = m3();
        assert!(check_xyz_lemma(&l, 1, 2, 0).unwrap());
        assert!(!check_xyz_lemma(&l, 1, 2, 3).unwrap());

        let s = subspace_lattice(2, 3).unwrap();
        let line = |v: &[u8]| {
            s.index_of(&Subspace::span(s.field(), 3, &[v.to_vec()]))
                .unwrap()
        };
        let (x, y, z) = (line(&[1, 0, 0]), line(&[0, 1, 0]), line(&[0, 0, 1]));
        assert!(check_xyz_lemma(s.lattice(), x, y, z).unwrap());
    }
}
