//! Banaschewski functions on bounded lattices: verification, exhaustive
//! search, the atom formula for meet-semidistributive lattices, and a census
//! over enumerated lattices.
//!
//! The constructive refinement algorithm for complemented modular lattices
//! lives in [`refine`]; measures, V-measures and the Boolean uniqueness
//! machinery live in [`measure`].

pub mod measure;
pub mod refine;

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    canonical_code, check_predicate, find_isomorphism, Elem, FiniteLattice, Predicate,
};

pub use measure::{
    boolean_ranges_isomorphic, exchange_decomposition, measure_from_function, vaught_isomorphism,
    verify_ban_measure, verify_v_measure, verify_v_relation, BanMeasure, CommMonoid, Measure,
    MeasureViolation, VMeasureViolation,
};
pub use refine::{
    build_ban_function, random_decomposition, random_refinement, refine_to_decide,
    verify_refinement_lemma, BuiltBan, Decomposition, Profile, RefinementMap, RefinementReport,
};

/// A (partial) Banaschewski function, stored as its graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BanFunction {
    map: BTreeMap<Elem, Elem>,
}

impl BanFunction {
    /// Builds from `(x, f(x))` pairs; a repeated `x` is malformed.
    pub fn from_pairs<I: IntoIterator<Item = (Elem, Elem)>>(pairs: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (x, y) in pairs {
            if map.insert(x, y).is_some() {
                return Err(Error::Malformed(format!("element {x} assigned twice")));
            }
        }
        Ok(BanFunction { map })
    }

    /// Total function given as a table indexed by element.
    pub fn from_table(table: &[Elem]) -> Self {
        BanFunction {
            map: table.iter().copied().enumerate().collect(),
        }
    }

    pub fn get(&self, x: Elem) -> Option<Elem> {
        self.map.get(&x).copied()
    }

    pub fn domain(&self) -> Vec<Elem> {
        self.map.keys().copied().collect()
    }

    /// Distinct values, sorted.
    pub fn range(&self) -> Vec<Elem> {
        let mut r: Vec<Elem> = self.map.values().copied().collect();
        r.sort_unstable();
        r.dedup();
        r
    }

    pub fn iter(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        self.map.iter().map(|(&x, &y)| (x, y))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_total(&self, l: &FiniteLattice) -> bool {
        self.map.len() == l.len() && self.map.keys().all(|&x| x < l.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BanViolation {
    OutOfRange { element: Elem },
    NotComplement { x: Elem, fx: Elem },
    NotAntitone { x: Elem, y: Elem },
}

/// First violation of the Banaschewski conditions on the declared domain,
/// scanning complements before order pairs, each in increasing order.
pub fn verify_ban_function(l: &FiniteLattice, f: &BanFunction) -> Result<Option<BanViolation>> {
    let top = l.require_top()?;
    for (x, y) in f.iter() {
        if x >= l.len() {
            return Ok(Some(BanViolation::OutOfRange { element: x }));
        }
        if y >= l.len() {
            return Ok(Some(BanViolation::OutOfRange { element: y }));
        }
    }
    if let Some((x, fx)) = f.iter().find(|&(x, fx)| !l.is_direct_sum(x, fx, top)) {
        return Ok(Some(BanViolation::NotComplement { x, fx }));
    }
    for (x, fx) in f.iter() {
        for (y, fy) in f.iter() {
            if l.leq(x, y) && !l.leq(fy, fx) {
                return Ok(Some(BanViolation::NotAntitone { x, y }));
            }
        }
    }
    Ok(None)
}

/// A set of elements forms a Boolean sublattice with the bounds of `l`.
pub fn is_boolean_sublattice(l: &FiniteLattice, set: &[Elem]) -> bool {
    let Some(top) = l.top() else { return false };
    let mut s: Vec<Elem> = set.to_vec();
    s.sort_unstable();
    s.dedup();
    let has = |x: Elem| s.binary_search(&x).is_ok();
    if !has(l.bottom()) || !has(top) {
        return false;
    }
    let closed = s
        .iter()
        .all(|&a| s.iter().all(|&b| has(l.join(a, b)) && has(l.meet(a, b))));
    if !closed {
        return false;
    }
    let complemented = s
        .iter()
        .all(|&a| s.iter().any(|&b| l.is_direct_sum(a, b, top)));
    let distributive = s.iter().all(|&a| {
        s.iter().all(|&b| {
            s.iter()
                .all(|&c| l.meet(a, l.join(b, c)) == l.join(l.meet(a, b), l.meet(a, c)))
        })
    });
    complemented && distributive
}

/// The search visits elements by decreasing up-set size, ties by index.
fn search_order(l: &FiniteLattice) -> Vec<Elem> {
    let mut order: Vec<Elem> = l.elements().collect();
    let up: Vec<usize> = l.elements().map(|x| l.up_set(x).len()).collect();
    order.sort_by_key(|&x| (std::cmp::Reverse(up[x]), x));
    order
}

/// Visits every Banaschewski function on `l` in a fixed depth-first order.
/// With `require_boolean_range`, only functions whose range is a Boolean
/// sublattice with the same bounds are visited.
pub fn for_each_ban_function<F>(
    l: &FiniteLattice,
    require_boolean_range: bool,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&BanFunction) -> ControlFlow<()>,
{
    let top = l.require_top()?;
    let candidates: Vec<Vec<Elem>> = l
        .elements()
        .map(|x| l.sectional_complements(x, top))
        .collect();
    if let Some(x) = l.elements().find(|&x| candidates[x].is_empty()) {
        return Err(Error::NotComplemented(x));
    }
    let order = search_order(l);
    let mut assigned: Vec<Option<Elem>> = vec![None; l.len()];
    let _ = dfs(
        l,
        &order,
        &candidates,
        require_boolean_range,
        &mut assigned,
        0,
        &mut visit,
    );
    Ok(())
}

fn dfs<F>(
    l: &FiniteLattice,
    order: &[Elem],
    candidates: &[Vec<Elem>],
    boolean: bool,
    assigned: &mut [Option<Elem>],
    depth: usize,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&BanFunction) -> ControlFlow<()>,
{
    let Some(&x) = order.get(depth) else {
        let table: Vec<Elem> = assigned.iter().map(|v| v.unwrap()).collect();
        let f = BanFunction::from_table(&table);
        if boolean && !is_boolean_sublattice(l, &f.range()) {
            return ControlFlow::Continue(());
        }
        return visit(&f);
    };
    for &c in &candidates[x] {
        let ok = order[..depth].iter().all(|&y| {
            let fy = assigned[y].unwrap();
            (!l.leq(x, y) || l.leq(fy, c)) && (!l.leq(y, x) || l.leq(c, fy))
        });
        if ok {
            assigned[x] = Some(c);
            dfs(l, order, candidates, boolean, assigned, depth + 1, visit)?;
            assigned[x] = None;
        }
    }
    ControlFlow::Continue(())
}

/// First Banaschewski function in search order, if any.
pub fn search_ban_function(
    l: &FiniteLattice,
    require_boolean_range: bool,
) -> Result<Option<BanFunction>> {
    let mut found = None;
    for_each_ban_function(l, require_boolean_range, |f| {
        found = Some(f.clone());
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Distinct ranges of Boolean Banaschewski functions, each sorted.
pub fn boolean_ranges(l: &FiniteLattice) -> Result<Vec<Vec<Elem>>> {
    let mut out: Vec<Vec<Elem>> = Vec::new();
    for_each_ban_function(l, true, |f| {
        let r = f.range();
        if !out.contains(&r) {
            out.push(r);
        }
        ControlFlow::Continue(())
    })?;
    out.sort();
    Ok(out)
}

/// `⋁ At L = 1`.
pub fn atoms_join_to_top(l: &FiniteLattice) -> bool {
    l.top() == Some(l.join_all(l.atoms()))
}

/// `x ↦ ⋁{p atom : p ∧ x = 0}` with no precondition checks.
pub fn atom_formula(l: &FiniteLattice) -> BanFunction {
    let atoms = l.atoms();
    let table: Vec<Elem> = l
        .elements()
        .map(|x| l.join_all(atoms.iter().copied().filter(|&p| l.disjoint(p, x))))
        .collect();
    BanFunction::from_table(&table)
}

/// The atom formula, for finite meet-semidistributive lattices whose atoms
/// join to the top.
pub fn atom_ban_function(l: &FiniteLattice) -> Result<BanFunction> {
    l.require_top()?;
    if !check_predicate(l, Predicate::MeetSemidistributive)?.holds {
        return Err(Error::PreconditionFailed(
            "lattice is not meet-semidistributive".into(),
        ));
    }
    if !atoms_join_to_top(l) {
        return Err(Error::PreconditionFailed(
            "atoms do not join to the top".into(),
        ));
    }
    Ok(atom_formula(l))
}

/// One row of a Banaschewski census over complemented lattices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub n: usize,
    pub index: usize,
    pub code: String,
    pub modular: bool,
    pub has_ban_function: bool,
}

/// Classifies the complemented members of `lattices` (all of one size, in
/// enumeration order) by existence of a Banaschewski function.
pub fn census_ban(lattices: &[FiniteLattice]) -> Vec<CensusEntry> {
    lattices
        .par_iter()
        .enumerate()
        .filter_map(|(index, l)| {
            let complemented =
                l.top().is_some() && l.elements().all(|x| !l.complements(x).is_empty());
            if !complemented {
                return None;
            }
            let has = search_ban_function(l, false).ok().flatten().is_some();
            Some(CensusEntry {
                n: l.len(),
                index,
                code: canonical_code(l).to_hex(),
                modular: l.is_modular(),
                has_ban_function: has,
            })
        })
        .collect()
}

/// Isomorphism between two Boolean sublattices, given as element sets.
pub(crate) fn sublattices_isomorphic(l: &FiniteLattice, a: &[Elem], b: &[Elem]) -> bool {
    match (l.sublattice(a), l.sublattice(b)) {
        (Ok((la, _)), Ok((lb, _))) => find_isomorphism(&la, &lb).is_some(),
        _ => false,
    }
}
