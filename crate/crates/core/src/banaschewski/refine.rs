//! Decompositions of the unit, refinement maps, and the construction of a
//! Banaschewski function with Boolean range on a finite complemented modular
//! lattice.
//!
//! For a decomposition `u = (u_0, ..., u_{n-1})` (independent, joining to 1)
//! and an element `x`:
//!
//! ```text
//! F_u(x) = { k : u_k ≰ x ∨ u_{<k} }        f_u(x) = ⋁ { u_k : k ∈ F_u(x) }
//! G_u(x) = { k : u_k ∧ (x ∨ u_{<k}) = 0 }  g_u(x) = ⋁ { u_k : k ∈ G_u(x) }
//! ```
//!
//! `u` decides `x` when `F_u(x) ⊆ G_u(x)`. Splitting every block `u_k` into
//! `u_k ∧ (x ∨ u_{<k})` and a sectional complement of it yields a refinement
//! that decides `x`, and refinements preserve decisions. Enumerating the
//! lattice and refining whenever the current decomposition fails to decide
//! the next element produces `f(x) = f_u(x)` for the decomposition current
//! when `x` is reached.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{verify_ban_function, BanFunction};
use crate::error::{Error, Result};
use crate::lattice::{independent, Elem, FiniteLattice};

/// An independent sequence joining to the top. Zero blocks are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition<'a> {
    lattice: &'a FiniteLattice,
    u: Vec<Elem>,
    prefix: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub f_set: Vec<usize>,
    pub g_set: Vec<usize>,
    pub f: Elem,
    pub g: Elem,
}

impl Profile {
    pub fn decides(&self) -> bool {
        self.f_set.iter().all(|k| self.g_set.contains(k))
    }
}

impl<'a> Decomposition<'a> {
    pub fn new(l: &'a FiniteLattice, u: Vec<Elem>) -> Result<Self> {
        let top = l.require_top()?;
        if let Some(&bad) = u.iter().find(|&&x| x >= l.len()) {
            return Err(Error::Malformed(format!("element {bad} out of range")));
        }
        if u.is_empty() && top != l.bottom() {
            return Err(Error::PreconditionFailed(
                "empty decomposition of a nonzero unit".into(),
            ));
        }
        if !independent(l, &u) {
            return Err(Error::NotIndependent);
        }
        if l.join_all(u.iter().copied()) != top {
            return Err(Error::PreconditionFailed(
                "decomposition does not join to the top".into(),
            ));
        }
        Ok(Self::unchecked(l, u))
    }

    fn unchecked(l: &'a FiniteLattice, u: Vec<Elem>) -> Self {
        let mut prefix = Vec::with_capacity(u.len() + 1);
        let mut acc = l.bottom();
        prefix.push(acc);
        for &x in &u {
            acc = l.join(acc, x);
            prefix.push(acc);
        }
        Decomposition {
            lattice: l,
            u,
            prefix,
        }
    }

    /// The one-block decomposition `(1)`.
    pub fn trivial(l: &'a FiniteLattice) -> Result<Self> {
        Ok(Self::unchecked(l, vec![l.require_top()?]))
    }

    pub fn lattice(&self) -> &'a FiniteLattice {
        self.lattice
    }

    pub fn blocks(&self) -> &[Elem] {
        &self.u
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// `u_{<k}`.
    pub fn below(&self, k: usize) -> Elem {
        self.prefix[k]
    }

    /// `Z(u)`, the indices of zero blocks.
    pub fn zeros(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&k| self.u[k] == self.lattice.bottom())
            .collect()
    }

    /// `F_u(x)`, `G_u(x)`, `f_u(x)`, `g_u(x)`, checking `x ∨ f_u(x) = 1`,
    /// `x ∧ g_u(x) = 0` and `g_u(x) <= f_u(x)`.
    pub fn profile(&self, x: Elem) -> Result<Profile> {
        let l = self.lattice;
        let mut f_set = Vec::new();
        let mut g_set = Vec::new();
        for (k, &uk) in self.u.iter().enumerate() {
            let context = l.join(x, self.prefix[k]);
            if !l.leq(uk, context) {
                f_set.push(k);
            }
            if l.disjoint(uk, context) {
                g_set.push(k);
            }
        }
        let f = l.join_all(f_set.iter().map(|&k| self.u[k]));
        let g = l.join_all(g_set.iter().map(|&k| self.u[k]));
        let top = l.require_top()?;
        if l.join(x, f) != top {
            return Err(Error::LemmaViolated(format!("x ∨ f_u(x) != 1 at x={x}")));
        }
        if !l.disjoint(x, g) {
            return Err(Error::LemmaViolated(format!("x ∧ g_u(x) != 0 at x={x}")));
        }
        if !l.leq(g, f) {
            return Err(Error::LemmaViolated(format!("g_u(x) ≰ f_u(x) at x={x}")));
        }
        Ok(Profile { f_set, g_set, f, g })
    }

    pub fn f_u(&self, x: Elem) -> Result<Elem> {
        Ok(self.profile(x)?.f)
    }

    /// Whether `F_u(x) ⊆ G_u(x)`; when it holds `f_u(x) = g_u(x)` is checked.
    pub fn decides(&self, x: Elem) -> Result<bool> {
        let p = self.profile(x)?;
        let d = p.decides();
        if d && p.f != p.g {
            return Err(Error::LemmaViolated(format!(
                "u decides {x} but f_u(x) != g_u(x)"
            )));
        }
        Ok(d)
    }

    /// Elements of the Boolean sublattice generated by the blocks.
    pub fn boolean_span(&self) -> Vec<Elem> {
        self.lattice.boolean_span(&self.u)
    }

    /// Drops zero blocks (keeping one block if all are zero). The returned
    /// map goes from `self` onto the pruned decomposition.
    pub fn prune_zeros(&self) -> RefinementMap<'a> {
        let l = self.lattice;
        let zero = l.bottom();
        let mut kept: Vec<Elem> = self.u.iter().copied().filter(|&x| x != zero).collect();
        if kept.is_empty() {
            kept.push(zero);
        }
        let mut phi = Vec::with_capacity(self.len());
        let mut seen = 0usize;
        for &x in &self.u {
            if x != zero {
                seen += 1;
            }
            phi.push(seen.saturating_sub(1).min(kept.len() - 1));
        }
        RefinementMap {
            source: self.clone(),
            target: Self::unchecked(l, kept),
            phi,
        }
    }
}

/// `phi : v ->> u` with `u_k = ⋁ { v_l : phi(l) = k }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementMap<'a> {
    pub source: Decomposition<'a>,
    pub target: Decomposition<'a>,
    pub phi: Vec<usize>,
}

impl<'a> RefinementMap<'a> {
    pub fn new(
        source: Decomposition<'a>,
        target: Decomposition<'a>,
        phi: Vec<usize>,
    ) -> Result<Self> {
        let l = source.lattice;
        if phi.len() != source.len() {
            return Err(Error::PreconditionFailed(
                "refinement map has wrong length".into(),
            ));
        }
        if phi.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::PreconditionFailed(
                "refinement map is not isotone".into(),
            ));
        }
        let onto = phi.first() == Some(&0)
            && phi.last().map(|&k| k + 1) == Some(target.len())
            && phi.windows(2).all(|w| w[1] <= w[0] + 1);
        if !onto {
            return Err(Error::PreconditionFailed(
                "refinement map is not surjective".into(),
            ));
        }
        for k in 0..target.len() {
            let fiber = l.join_all(
                (0..source.len())
                    .filter(|&i| phi[i] == k)
                    .map(|i| source.u[i]),
            );
            if fiber != target.u[k] {
                return Err(Error::PreconditionFailed(format!(
                    "block {k} is not the join of its fiber"
                )));
            }
        }
        Ok(RefinementMap {
            source,
            target,
            phi,
        })
    }

    pub fn identity(u: Decomposition<'a>) -> Self {
        let phi = (0..u.len()).collect();
        RefinementMap {
            source: u.clone(),
            target: u,
            phi,
        }
    }

    /// `(self: v ->> u)` followed by `(next: u ->> w)`.
    pub fn then(&self, next: &RefinementMap<'a>) -> RefinementMap<'a> {
        assert_eq!(self.target, next.source, "refinement maps do not compose");
        let phi = self.phi.iter().map(|&k| next.phi[k]).collect();
        RefinementMap {
            source: self.source.clone(),
            target: next.target.clone(),
            phi,
        }
    }

    /// `phi_-(k)` and `phi_+(k)`.
    pub fn fiber(&self, k: usize) -> (usize, usize) {
        let lo = self.phi.iter().position(|&j| j == k).unwrap();
        let hi = self.phi.iter().rposition(|&j| j == k).unwrap();
        (lo, hi)
    }
}

/// Splits each `u_k` into `u_k ∧ (x ∨ u_{<k})` and its least-index
/// sectional complement in `u_k`; the result decides `x`.
pub fn refine_to_decide<'a>(u: &Decomposition<'a>, x: Elem) -> Result<RefinementMap<'a>> {
    let l = u.lattice;
    let mut v = Vec::with_capacity(2 * u.len());
    let mut phi = Vec::with_capacity(2 * u.len());
    for (k, &uk) in u.u.iter().enumerate() {
        let even = l.meet(uk, l.join(x, u.below(k)));
        let odd = l.sectional_complement(even, uk)?;
        v.push(even);
        v.push(odd);
        phi.push(k);
        phi.push(k);
    }
    let v = Decomposition::unchecked(l, v);
    if !v.decides(x)? {
        return Err(Error::LemmaViolated(format!(
            "refinement does not decide {x}"
        )));
    }
    Ok(RefinementMap {
        source: v,
        target: u.clone(),
        phi,
    })
}

/// Which items of the refinement lemma were checked, and their outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub items_checked: Vec<String>,
    pub target_decides: bool,
    pub source_decides: bool,
}

/// Checks items (i)–(vi) of the refinement lemma for `phi : v ->> u` at `x`.
pub fn verify_refinement_lemma(map: &RefinementMap<'_>, x: Elem) -> Result<RefinementReport> {
    let (v, u, phi) = (&map.source, &map.target, &map.phi);
    let l = u.lattice;
    let fail = |item: &str, detail: String| Err(Error::LemmaViolated(format!("({item}) {detail}")));
    let mut checked = Vec::new();

    for (i, &k) in phi.iter().enumerate() {
        if !l.leq(v.u[i], u.u[k]) || !l.leq(u.below(k), v.below(i)) {
            return fail("i", format!("at l={i}"));
        }
    }
    checked.push("i".to_string());

    let pu = u.profile(x)?;
    let pv = v.profile(x)?;
    if let Some(&i) = pv.f_set.iter().find(|&&i| !pu.f_set.contains(&phi[i])) {
        return fail("ii", format!("phi({i}) not in F_u({x})"));
    }
    checked.push("ii".to_string());
    if let Some(i) = (0..v.len()).find(|&i| pu.g_set.contains(&phi[i]) && !pv.g_set.contains(&i)) {
        return fail("iii", format!("{i} in phi^-1 G_u({x}) but not in G_v({x})"));
    }
    checked.push("iii".to_string());
    if !l.leq(pv.f, pu.f) {
        return fail("iv", format!("f_v({x}) ≰ f_u({x})"));
    }
    checked.push("iv".to_string());
    if !l.leq(pu.g, pv.g) {
        return fail("v", format!("g_u({x}) ≰ g_v({x})"));
    }
    checked.push("v".to_string());

    let (target_decides, source_decides) = (pu.decides(), pv.decides());
    if target_decides {
        if !source_decides || pu.f != pv.f {
            return fail("vi", format!("decision of {x} not preserved"));
        }
        checked.push("vi".to_string());
    }
    Ok(RefinementReport {
        items_checked: checked,
        target_decides,
        source_decides,
    })
}

/// Output of [`build_ban_function`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltBan {
    pub function: BanFunction,
    /// The Boolean sublattice generated by the final decomposition.
    pub range: Vec<Elem>,
    pub decomposition: Vec<Elem>,
    pub refinements: usize,
}

/// Builds a Banaschewski function with Boolean range by successive
/// refinement along the enumeration `order`.
pub fn build_ban_function(l: &FiniteLattice, order: &[Elem]) -> Result<BuiltBan> {
    let top = l.require_top()?;
    if !l.is_modular() {
        return Err(Error::PreconditionFailed("lattice is not modular".into()));
    }
    if let Some(x) = l.elements().find(|&x| l.complements(x).is_empty()) {
        return Err(Error::PreconditionFailed(format!(
            "element {x} has no complement"
        )));
    }
    let mut seen = vec![false; l.len()];
    if order.len() != l.len()
        || order
            .iter()
            .any(|&x| x >= l.len() || std::mem::replace(&mut seen[x], true))
    {
        return Err(Error::PreconditionFailed(
            "order is not an enumeration of the lattice".into(),
        ));
    }

    let mut u = Decomposition::trivial(l)?;
    let mut table = vec![l.bottom(); l.len()];
    let mut refinements = 0;
    for (n, &x) in order.iter().enumerate() {
        if n == 0 || !u.decides(x)? {
            u = refine_to_decide(&u, x)?.source;
            refinements += 1;
        }
        table[x] = u.f_u(x)?;
    }
    // stability: f(x) = f_{u_m}(x) for every later stage m
    for &x in order {
        if u.f_u(x)? != table[x] {
            return Err(Error::LemmaViolated(format!(
                "f({x}) not stable under refinement"
            )));
        }
    }
    let function = BanFunction::from_table(&table);
    if let Some(v) = verify_ban_function(l, &function)? {
        return Err(Error::LemmaViolated(format!(
            "constructed function fails: {v:?}"
        )));
    }
    let range = u.boolean_span();
    if !super::is_boolean_sublattice(l, &range) || !range.contains(&top) {
        return Err(Error::LemmaViolated(
            "span of final decomposition is not Boolean".into(),
        ));
    }
    if function.range() != range {
        return Err(Error::LemmaViolated(
            "range of f differs from the Boolean span".into(),
        ));
    }
    Ok(BuiltBan {
        function,
        range,
        decomposition: u.u,
        refinements,
    })
}

/// Splits a random block into a random element below it and a random
/// sectional complement, `splits` times, starting from `(1)`.
pub fn random_decomposition<'a, R: Rng>(
    l: &'a FiniteLattice,
    rng: &mut R,
    splits: usize,
) -> Result<Decomposition<'a>> {
    let trivial = Decomposition::trivial(l)?;
    Ok(random_refinement(&trivial, rng, splits)?.source)
}

/// A random refinement of `u` obtained by `splits` random block splits.
pub fn random_refinement<'a, R: Rng>(
    u: &Decomposition<'a>,
    rng: &mut R,
    splits: usize,
) -> Result<RefinementMap<'a>> {
    let l = u.lattice;
    let mut blocks = u.u.clone();
    let mut phi: Vec<usize> = (0..u.len()).collect();
    for _ in 0..splits {
        if blocks.is_empty() {
            break;
        }
        let k = rng.gen_range(0..blocks.len());
        let below = l.down_set(blocks[k]);
        let a = below[rng.gen_range(0..below.len())];
        let comps = l.sectional_complements(a, blocks[k]);
        if comps.is_empty() {
            return Err(Error::NoSectionalComplement { a, b: blocks[k] });
        }
        let b = comps[rng.gen_range(0..comps.len())];
        blocks.splice(k..=k, [a, b]);
        let target = phi[k];
        phi.insert(k, target);
    }
    let v = Decomposition::unchecked(l, blocks);
    RefinementMap::new(v, u.clone(), phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::subspace_lattice;
    use rand::SeedableRng;

    #[test]
    fn square_profile() {
        let b2 = FiniteLattice::boolean(2);
        let u = Decomposition::new(&b2, vec![1, 2]).unwrap();
        let p = u.profile(1).unwrap();
        assert_eq!(
            (p.f_set.clone(), p.g_set.clone(), p.f, p.g),
            (vec![1], vec![1], 2, 2)
        );
        for x in 0..4 {
            assert!(u.decides(x).unwrap());
        }
    }

    #[test]
    fn zero_and_top_profiles() {
        let m3 = FiniteLattice::diamond(3);
        let u = Decomposition::new(&m3, vec![1, 0, 2]).unwrap();
        let p = u.profile(0).unwrap();
        assert_eq!(p.f_set, vec![0, 2]);
        assert_eq!(p.f, 4);
        assert!(p.f_set.iter().all(|k| p.g_set.contains(k)));
        assert!(u.decides(4).unwrap());
        assert!(u.profile(4).unwrap().f_set.is_empty());
    }

    #[test]
    fn f2_cubed_refinement_example() {
        let s = subspace_lattice(2, 3).unwrap();
        let l = s.lattice();
        let e1 = s.span_of(&[vec![1, 0, 0]]);
        let e2 = s.span_of(&[vec![0, 1, 0]]);
        let e3 = s.span_of(&[vec![0, 0, 1]]);
        let e23 = s.span_of(&[vec![0, 1, 0], vec![0, 0, 1]]);
        let e13 = s.span_of(&[vec![1, 0, 0], vec![0, 0, 1]]);
        let u = Decomposition::new(l, vec![e1, e23]).unwrap();
        let p = u.profile(e2).unwrap();
        assert_eq!(p.f_set, vec![0, 1]);
        assert_eq!(p.g_set, vec![0]);
        assert_eq!(p.f, l.top().unwrap());
        assert_eq!(p.g, e1);
        assert!(!u.decides(e2).unwrap());

        let map = refine_to_decide(&u, e2).unwrap();
        assert_eq!(map.source.blocks(), &[0, e1, e2, e3]);
        assert_eq!(map.phi, vec![0, 0, 1, 1]);
        assert_eq!(map.source.f_u(e2).unwrap(), e13);
        let report = verify_refinement_lemma(&map, e2).unwrap();
        assert_eq!(report.items_checked.len(), 5);
        assert!(report.source_decides);
    }

    #[test]
    fn refining_at_zero_interleaves_zero_blocks() {
        let m3 = FiniteLattice::diamond(3);
        let u = Decomposition::new(&m3, vec![1, 2]).unwrap();
        let v = refine_to_decide(&u, 0).unwrap().source;
        assert_eq!(v.blocks(), &[0, 1, 0, 2]);
        assert_eq!(v.zeros(), vec![0, 2]);
    }

    #[test]
    fn identity_refinement_passes() {
        let b2 = FiniteLattice::boolean(2);
        let u = Decomposition::new(&b2, vec![1, 2]).unwrap();
        let id = RefinementMap::identity(u);
        for x in 0..4 {
            let r = verify_refinement_lemma(&id, x).unwrap();
            assert_eq!(r.items_checked.len(), 6);
        }
    }

    #[test]
    fn random_refinement_chains_satisfy_lemma() {
        let s = subspace_lattice(2, 3).unwrap();
        let l = s.lattice();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            let u = random_decomposition(l, &mut rng, 2).unwrap();
            let first = random_refinement(&u, &mut rng, 2).unwrap();
            let second = random_refinement(&first.source, &mut rng, 1).unwrap();
            let chain = second.then(&first);
            let x = rng.gen_range(0..l.len());
            verify_refinement_lemma(&chain, x).unwrap();
        }
    }

    #[test]
    fn builds_boolean_complement_on_cube() {
        let b3 = FiniteLattice::boolean(3);
        let order: Vec<Elem> = b3.elements().collect();
        let built = build_ban_function(&b3, &order).unwrap();
        for x in 0..8 {
            assert_eq!(built.function.get(x), Some(7 ^ x));
        }
        assert_eq!(built.range, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn builds_on_m3_with_four_element_range() {
        let m3 = FiniteLattice::diamond(3);
        for order in [[0, 1, 2, 3, 4], [4, 3, 2, 1, 0], [2, 0, 4, 1, 3]] {
            let built = build_ban_function(&m3, &order).unwrap();
            assert_eq!(built.range.len(), 4);
            assert_eq!(built.function.range(), built.range);
        }
    }

    #[test]
    fn one_element_lattice() {
        let l = FiniteLattice::chain(1);
        let built = build_ban_function(&l, &[0]).unwrap();
        assert_eq!(built.function.get(0), Some(0));
        assert_eq!(built.range, vec![0]);
    }

    #[test]
    fn pruning_keeps_decisions() {
        let m3 = FiniteLattice::diamond(3);
        let u = Decomposition::new(&m3, vec![1, 2]).unwrap();
        let v = refine_to_decide(&u, 3).unwrap().source;
        let pruned = v.prune_zeros();
        assert!(pruned.target.blocks().iter().all(|&b| b != 0));
        let checked = RefinementMap::new(
            pruned.source.clone(),
            pruned.target.clone(),
            pruned.phi.clone(),
        )
        .unwrap();
        for x in 0..5 {
            verify_refinement_lemma(&checked, x).unwrap();
        }
    }

    #[test]
    fn rejects_non_modular_and_bad_orders() {
        let n5 = FiniteLattice::pentagon();
        assert!(matches!(
            build_ban_function(&n5, &[0, 1, 2, 3, 4]),
            Err(Error::PreconditionFailed(_))
        ));
        let m3 = FiniteLattice::diamond(3);
        assert!(matches!(
            build_ban_function(&m3, &[0, 1, 1, 3, 4]),
            Err(Error::PreconditionFailed(_))
        ));
    }
}
