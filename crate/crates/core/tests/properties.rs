mod common;

use banlat::io::{parse_lattice, LatticeJson};
use banlat::lattice::{canonical_code, find_isomorphism, lattices_up_to, FiniteLattice};
use banlat::ring::FiniteRing;
use banlat::trace::{trace_from_chain, LTilde, LTildeElement, LTildeKind, StagedLattice};
use proptest::prelude::*;
use proptest::sample::Index;

fn small_lattices() -> Vec<FiniteLattice> {
    lattices_up_to(7).unwrap().into_iter().flatten().collect()
}

/// Canonical form in the finite-subsets host by direct bit inspection: a
/// finite element lives in the first stage containing all its bits, and a
/// tail `y` of stage `i` starts at the least `j` with bits `j..i` all set.
fn subsets_canonical(e: LTildeElement) -> LTildeElement {
    match e.kind {
        LTildeKind::Fin => {
            let stage = (0..=e.stage).find(|&j| e.value >> j == 0).unwrap();
            LTildeElement::fin(stage, e.value)
        }
        LTildeKind::Tail => {
            let full = |j: usize| (j..e.stage).all(|b| e.value >> b & 1 == 1);
            let stage = (0..=e.stage).find(|&j| full(j)).unwrap();
            LTildeElement::tail(stage, e.value & ((1 << stage) - 1))
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_code_ignores_labels(pick in any::<Index>(), seed in any::<u64>()) {
        let all = small_lattices();
        let l = pick.get(&all);
        let mut perm: Vec<usize> = l.elements().collect();
        let mut s = seed;
        for k in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(k, (s >> 33) as usize % (k + 1));
        }
        let relabeled = l.relabel(&perm);
        prop_assert_eq!(canonical_code(l), canonical_code(&relabeled));
        let map = find_isomorphism(l, &relabeled).unwrap();
        prop_assert!(common::is_order_isomorphism(l, &relabeled, &map));
    }

    #[test]
    fn lattice_json_round_trips(pick in any::<Index>()) {
        let all = small_lattices();
        let l = pick.get(&all);
        let text = serde_json::to_string(&LatticeJson::of(l)).unwrap();
        prop_assert_eq!(&parse_lattice(&text).unwrap(), l);
    }

    #[test]
    fn lattice_operations_agree_with_order(pick in any::<Index>(), a in any::<Index>(), b in any::<Index>()) {
        let all = small_lattices();
        let l = pick.get(&all);
        let (a, b) = (a.index(l.len()), b.index(l.len()));
        let j = l.join(a, b);
        prop_assert!(l.leq(a, j) && l.leq(b, j));
        prop_assert!(l.elements().all(|u| !(l.leq(a, u) && l.leq(b, u)) || l.leq(j, u)));
        let m = l.meet(a, b);
        prop_assert!(l.leq(m, a) && l.leq(m, b));
        prop_assert_eq!(l.join(a, l.meet(a, b)), a);
    }

    #[test]
    fn subsets_canonical_forms_match_bit_oracle(stage in 0usize..=6, value in any::<u64>(), tail in any::<bool>()) {
        let host = StagedLattice::finite_subsets(6).unwrap();
        let trace = trace_from_chain(&host).unwrap();
        let lt = LTilde::new(&host, &trace, 6).unwrap();
        let v = (value as usize) & ((1 << stage) - 1);
        let e = if tail { LTildeElement::tail(stage, v) } else { LTildeElement::fin(stage, v) };
        let c = lt.canonicalize(e).unwrap();
        prop_assert_eq!(c, subsets_canonical(e));
        prop_assert_eq!(lt.canonicalize(c).unwrap(), c);
        let comp = lt.complement(c).unwrap();
        prop_assert_eq!(lt.join(c, comp).unwrap(), lt.unit());
        prop_assert_eq!(lt.meet(c, comp).unwrap(), lt.zero());
        prop_assert_ne!(comp.kind, c.kind);
    }

    #[test]
    fn integers_mod_products_are_rings(a in 1usize..8, b in 1usize..8, x in any::<Index>(), y in any::<Index>(), z in any::<Index>()) {
        let r = FiniteRing::integers_mod(a).unwrap().product(&FiniteRing::integers_mod(b).unwrap()).unwrap();
        let (x, y, z) = (x.index(r.len()), y.index(r.len()), z.index(r.len()));
        prop_assert_eq!(r.mul(x, r.add(y, z)), r.add(r.mul(x, y), r.mul(x, z)));
        prop_assert_eq!(r.mul(r.mul(x, y), z), r.mul(x, r.mul(y, z)));
        prop_assert_eq!(r.mul(x, r.one().unwrap()), x);
    }
}
