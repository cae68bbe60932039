//! Lifting a lattice map `𝕃(R) → 𝕃(S)↓eS` to a ring homomorphism `R → eSe`.
//!
//! The search assigns images to an additive generating set of `R`, extends
//! additively as it goes, and prunes on the lattice condition
//! `f(x)S = λ(xR)` and on products of already assigned generators.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::Elem;
use crate::ring::{FiniteRing, RElem, RingHom, RingLattice};

/// The data of one lift problem. `lattice_map` sends each element of
/// `𝕃(source)` to an element of `𝕃(target)`.
#[derive(Clone, Copy)]
pub struct LiftProblem<'a> {
    pub source: &'a FiniteRing,
    pub source_lattice: &'a RingLattice,
    pub target: &'a FiniteRing,
    pub target_lattice: &'a RingLattice,
    pub lattice_map: &'a [Elem],
    pub corner: RElem,
}

/// Elements of `eSe`, sorted.
pub fn corner_set(s: &FiniteRing, e: RElem) -> Vec<RElem> {
    let mut inside = vec![false; s.len()];
    for y in s.elements() {
        inside[s.mul(s.mul(e, y), e)] = true;
    }
    s.elements().filter(|&y| inside[y]).collect()
}

struct Search<'a> {
    p: LiftProblem<'a>,
    gens: Vec<RElem>,
    candidates: Vec<Vec<RElem>>,
    corner: Vec<RElem>,
}

impl Search<'_> {
    fn wanted(&self, x: RElem) -> Elem {
        self.p.lattice_map[self.p.source_lattice.element_of(self.p.source, x)]
    }

    fn fits(&self, x: RElem, y: RElem) -> bool {
        self.p.target_lattice.element_of(self.p.target, y) == self.wanted(x)
    }

    /// Extends `f` from its current additive span by `g ↦ y`.
    fn extend(&self, f: &mut [Option<RElem>], g: RElem, y: RElem) -> bool {
        let (r, s) = (self.p.source, self.p.target);
        let mut frontier: Vec<RElem> = r.elements().filter(|&x| f[x].is_some()).collect();
        while let Some(x) = frontier.pop() {
            let (z, v) = (r.add(x, g), s.add(f[x].unwrap(), y));
            match f[z] {
                None => {
                    if !self.fits(z, v) {
                        return false;
                    }
                    f[z] = Some(v);
                    frontier.push(z);
                }
                Some(w) if w != v => return false,
                Some(_) => {}
            }
        }
        true
    }

    fn products_agree(&self, f: &[Option<RElem>], assigned: usize) -> bool {
        let (r, s) = (self.p.source, self.p.target);
        let last = self.gens[assigned - 1];
        self.gens[..assigned].iter().all(|&g| {
            [(g, last), (last, g)]
                .iter()
                .all(|&(a, b)| match f[r.mul(a, b)] {
                    Some(v) => s.mul(f[a].unwrap(), f[b].unwrap()) == v,
                    None => true,
                })
        })
    }

    fn run(&self, f: &mut [Option<RElem>], k: usize, out: &mut Vec<RingHom>) {
        if k == self.gens.len() {
            if let Some(h) = self.finish(f) {
                out.push(h);
            }
            return;
        }
        let g = self.gens[k];
        for &y in &self.candidates[k] {
            let mut next = f.to_vec();
            if self.extend(&mut next, g, y) && self.products_agree(&next, k + 1) {
                self.run(&mut next, k + 1, out);
            }
        }
    }

    fn finish(&self, f: &[Option<RElem>]) -> Option<RingHom> {
        let map: Vec<RElem> = f
            .iter()
            .map(|y| y.expect("generators span the ring"))
            .collect();
        let h = RingHom { map };
        if h.verify(self.p.source, self.p.target).is_err() || !h.is_injective() {
            return None;
        }
        (h.image() == self.corner).then_some(h)
    }
}

/// Every ring homomorphism `f: R → S` with range `eSe` and
/// `f(x)S = λ(xR)` for all `x`, sorted by table.
pub fn lift_corner_homs(p: LiftProblem<'_>) -> Result<Vec<RingHom>> {
    let (r, lr, s, ls) = (p.source, p.source_lattice, p.target, p.target_lattice);
    if p.lattice_map.len() != lr.len() || p.lattice_map.iter().any(|&k| k >= ls.len()) {
        return Err(Error::Malformed(
            "lattice map does not match 𝕃(R) and 𝕃(S)".into(),
        ));
    }
    if !s.is_idempotent(p.corner) {
        return Err(Error::PreconditionFailed(format!(
            "{} is not idempotent",
            p.corner
        )));
    }
    let top = lr.lattice().require_top()?;
    if p.lattice_map[top] != ls.element_of(s, p.corner) {
        return Err(Error::PreconditionFailed(
            "the lattice map does not send R to eS".into(),
        ));
    }
    let corner = corner_set(s, p.corner);
    let gens = r.additive_generators();
    let mut search = Search {
        p,
        gens,
        candidates: Vec::new(),
        corner,
    };
    search.candidates = search
        .gens
        .iter()
        .map(|&g| {
            search
                .corner
                .iter()
                .copied()
                .filter(|&y| search.fits(g, y))
                .collect()
        })
        .collect();
    let mut start = vec![None; r.len()];
    start[r.zero()] = Some(s.zero());
    if !search.fits(r.zero(), s.zero()) {
        return Ok(Vec::new());
    }
    let mut found: Vec<RingHom> = match search.candidates.first() {
        None => {
            let mut out = Vec::new();
            search.run(&mut start, 0, &mut out);
            out
        }
        Some(first) => first
            .par_iter()
            .map(|&y| {
                let mut out = Vec::new();
                let mut f = start.clone();
                if search.extend(&mut f, search.gens[0], y) && search.products_agree(&f, 1) {
                    search.run(&mut f, 1, &mut out);
                }
                out
            })
            .flatten()
            .collect(),
    };
    found.sort_by(|a, b| a.map.cmp(&b.map));
    Ok(found)
}

/// The unique lift, or `NoLift` / `MultipleLifts(count)`.
pub fn lift_corner_hom(p: LiftProblem<'_>) -> Result<RingHom> {
    let mut all = lift_corner_homs(p)?;
    match all.len() {
        0 => Err(Error::NoLift),
        1 => Ok(all.pop().unwrap()),
        n => Err(Error::MultipleLifts(n)),
    }
}
