//! Banaschewski measures, V-measures into finite commutative monoids, the
//! exchange step relating arbitrary decompositions to decompositions inside a
//! Boolean range, and finite back-and-forth for additive V-relations.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{boolean_ranges, is_boolean_sublattice, sublattices_isomorphic, BanFunction};
use crate::error::{Error, Result};
use crate::lattice::{check_predicate, perspective_via, Elem, FiniteLattice, Predicate};

/// `y ⊖ x` for pairs `x <= y` of a domain.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BanMeasure {
    pub domain: Vec<Elem>,
    pub table: BTreeMap<(Elem, Elem), Elem>,
}

impl BanMeasure {
    pub fn get(&self, x: Elem, y: Elem) -> Option<Elem> {
        self.table.get(&(x, y)).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureViolation {
    Missing { x: Elem, y: Elem },
    NotSectionalComplement { x: Elem, y: Elem },
    NotIsotone { x: Elem, y: Elem, y2: Elem },
    NotAntitone { x: Elem, x2: Elem, y: Elem },
}

/// First violation of the measure axioms over the declared domain.
pub fn verify_ban_measure(l: &FiniteLattice, m: &BanMeasure) -> Option<MeasureViolation> {
    let dom = &m.domain;
    let pairs: Vec<(Elem, Elem)> = dom
        .iter()
        .flat_map(|&x| {
            dom.iter()
                .filter(move |&&y| l.leq(x, y))
                .map(move |&y| (x, y))
        })
        .collect();
    for &(x, y) in &pairs {
        match m.get(x, y) {
            None => return Some(MeasureViolation::Missing { x, y }),
            Some(d) if !l.is_direct_sum(x, d, y) => {
                return Some(MeasureViolation::NotSectionalComplement { x, y })
            }
            _ => {}
        }
    }
    for &(x, y) in &pairs {
        let d = m.get(x, y).unwrap();
        for &y2 in dom.iter().filter(|&&y2| l.leq(y, y2)) {
            if !l.leq(d, m.get(x, y2).unwrap()) {
                return Some(MeasureViolation::NotIsotone { x, y, y2 });
            }
        }
        for &x2 in dom.iter().filter(|&&x2| l.leq(x, x2) && l.leq(x2, y)) {
            if !l.leq(m.get(x2, y).unwrap(), d) {
                return Some(MeasureViolation::NotAntitone { x, x2, y });
            }
        }
    }
    None
}

/// `y ⊖ x = y ∧ f(x)` on the ideal `↓ideal_top` of the host of `f`.
pub fn measure_from_function(
    host: &FiniteLattice,
    f: &BanFunction,
    ideal_top: Elem,
) -> Result<BanMeasure> {
    let domain = host.down_set(ideal_top);
    let mut table = BTreeMap::new();
    for &x in &domain {
        let fx = f
            .get(x)
            .ok_or_else(|| Error::PreconditionFailed(format!("f undefined at {x}")))?;
        for &y in domain.iter().filter(|&&y| host.leq(x, y)) {
            table.insert((x, y), host.meet(y, fx));
        }
    }
    let m = BanMeasure { domain, table };
    match verify_ban_measure(host, &m) {
        None => Ok(m),
        Some(v) => Err(Error::AxiomViolated(format!("{v:?}"))),
    }
}

/// A finite commutative monoid given by its addition table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommMonoid {
    pub m: usize,
    pub add: Vec<Vec<usize>>,
    pub zero: usize,
}

impl CommMonoid {
    pub fn new(add: Vec<Vec<usize>>, zero: usize) -> Result<Self> {
        let m = add.len();
        if zero >= m
            || add
                .iter()
                .any(|r| r.len() != m || r.iter().any(|&v| v >= m))
        {
            return Err(Error::Malformed(
                "monoid table is not square over its elements".into(),
            ));
        }
        for a in 0..m {
            if add[zero][a] != a {
                return Err(Error::AxiomViolated(format!(
                    "{zero} is not neutral for {a}"
                )));
            }
            for b in 0..m {
                if add[a][b] != add[b][a] {
                    return Err(Error::AxiomViolated(format!(
                        "not commutative at ({a},{b})"
                    )));
                }
                for c in 0..m {
                    if add[add[a][b]][c] != add[a][add[b][c]] {
                        return Err(Error::AxiomViolated(format!(
                            "not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(CommMonoid { m, add, zero })
    }

    /// `{0, 1, ..., cap, ∞}` where sums beyond `cap` become `∞` (index `cap + 1`).
    pub fn truncated(cap: usize) -> Self {
        let inf = cap + 1;
        let add = (0..=inf)
            .map(|a| {
                (0..=inf)
                    .map(|b| if a + b > cap { inf } else { a + b })
                    .collect()
            })
            .collect();
        CommMonoid {
            m: cap + 2,
            add,
            zero: 0,
        }
    }

    /// `{0, ..., cap}` with `a + b = min(a + b, cap)`.
    pub fn saturating(cap: usize) -> Self {
        let add = (0..=cap)
            .map(|a| (0..=cap).map(|b| (a + b).min(cap)).collect())
            .collect();
        CommMonoid {
            m: cap + 1,
            add,
            zero: 0,
        }
    }

    pub fn sum(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }
}

/// A monoid-valued map on a Boolean sublattice of `lattice`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    pub boolean: Vec<Elem>,
    pub monoid: CommMonoid,
    pub table: BTreeMap<Elem, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VMeasureViolation {
    Undefined { x: Elem },
    ZeroFaithfulness { x: Elem },
    Additivity { x: Elem, y: Elem },
    Refinement { z: Elem, alpha: usize, beta: usize },
}

/// First violation of the three V-measure axioms, checked exhaustively.
pub fn verify_v_measure(l: &FiniteLattice, mu: &Measure) -> Result<Option<VMeasureViolation>> {
    if !is_boolean_sublattice(l, &mu.boolean) {
        return Err(Error::PreconditionFailed(
            "measure source is not a Boolean sublattice".into(),
        ));
    }
    let b = &mu.boolean;
    let mon = &mu.monoid;
    let mut val = BTreeMap::new();
    for &x in b {
        match mu.table.get(&x) {
            Some(&v) if v < mon.m => {
                val.insert(x, v);
            }
            _ => return Ok(Some(VMeasureViolation::Undefined { x })),
        }
    }
    for &x in b {
        if (val[&x] == mon.zero) != (x == l.bottom()) {
            return Ok(Some(VMeasureViolation::ZeroFaithfulness { x }));
        }
    }
    for &x in b {
        for &y in b.iter().filter(|&&y| l.disjoint(x, y)) {
            if val[&l.join(x, y)] != mon.sum(val[&x], val[&y]) {
                return Ok(Some(VMeasureViolation::Additivity { x, y }));
            }
        }
    }
    for &z in b {
        for alpha in 0..mon.m {
            for beta in 0..mon.m {
                if mon.sum(alpha, beta) != val[&z] {
                    continue;
                }
                let split = b.iter().any(|&x| {
                    b.iter()
                        .any(|&y| l.is_direct_sum(x, y, z) && val[&x] == alpha && val[&y] == beta)
                });
                if !split {
                    return Ok(Some(VMeasureViolation::Refinement { z, alpha, beta }));
                }
            }
        }
    }
    Ok(None)
}

/// With `c = x ⊕ y` and `c` in the Boolean range `range` of `f`, returns
/// `(a, b)` in the range with `b = c ∧ f(x)`, `a = c ∧ f(b)`, `c = a ⊕ b`,
/// `b` perspective to `y` and `a` perspective to `x`.
pub fn exchange_decomposition(
    l: &FiniteLattice,
    range: &[Elem],
    f: &BanFunction,
    c: Elem,
    x: Elem,
    y: Elem,
) -> Result<(Elem, Elem)> {
    if !range.contains(&c) {
        return Err(Error::NotInRange(c));
    }
    if !l.is_direct_sum(x, y, c) {
        return Err(Error::PreconditionFailed(format!("{c} is not {x} ⊕ {y}")));
    }
    let at = |z: Elem| {
        f.get(z)
            .ok_or_else(|| Error::PreconditionFailed(format!("f undefined at {z}")))
    };
    let b = l.meet(c, at(x)?);
    let a = l.meet(c, at(b)?);
    let checks = [
        (
            range.contains(&b) && range.contains(&a),
            "a and b lie in the range",
        ),
        (l.is_direct_sum(x, b, c), "c = x ⊕ b"),
        (l.is_direct_sum(a, b, c), "c = a ⊕ b"),
        (perspective_via(l, y, b, x), "y ~ b"),
        (perspective_via(l, x, a, b), "x ~ a"),
    ];
    if let Some((_, what)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(Error::LemmaViolated(format!(
            "exchange step: {what} fails for c={c}, x={x}, y={y}"
        )));
    }
    Ok((a, b))
}

fn complement(l: &FiniteLattice, x: Elem) -> Elem {
    l.complements(x)[0]
}

fn require_boolean(l: &FiniteLattice, which: &str) -> Result<()> {
    if check_predicate(l, Predicate::Boolean)?.holds {
        Ok(())
    } else {
        Err(Error::PreconditionFailed(format!(
            "{which} is not a Boolean lattice"
        )))
    }
}

/// Checks the additive V-relation axioms in both directions; returns the
/// failing axiom and a witness.
pub fn verify_v_relation(
    a: &FiniteLattice,
    b: &FiniteLattice,
    rel: &BTreeSet<(Elem, Elem)>,
) -> Result<Option<(String, String)>> {
    require_boolean(a, "source")?;
    require_boolean(b, "target")?;
    let (ta, tb) = (a.require_top()?, b.require_top()?);
    if !rel.contains(&(ta, tb)) {
        return Ok(Some(("unit".into(), format!("({ta},{tb}) not related"))));
    }
    for x in a.elements() {
        if rel.contains(&(x, b.bottom())) != (x == a.bottom()) {
            return Ok(Some(("zero".into(), format!("({x},{})", b.bottom()))));
        }
    }
    for y in b.elements() {
        if rel.contains(&(a.bottom(), y)) != (y == b.bottom()) {
            return Ok(Some(("zero".into(), format!("({},{y})", a.bottom()))));
        }
    }
    let flipped: BTreeSet<(Elem, Elem)> = rel.iter().map(|&(x, y)| (y, x)).collect();
    if let Some(w) = splitting_failure(a, b, rel) {
        return Ok(Some(("splitting".into(), w)));
    }
    if let Some(w) = splitting_failure(b, a, &flipped) {
        return Ok(Some(("splitting (reversed)".into(), w)));
    }
    Ok(None)
}

/// `x ρ y0 ⊕ y1` iff `x = x0 ⊕ x1` with `x0 ρ y0` and `x1 ρ y1`.
fn splitting_failure(
    a: &FiniteLattice,
    b: &FiniteLattice,
    rel: &BTreeSet<(Elem, Elem)>,
) -> Option<String> {
    for x in a.elements() {
        for y0 in b.elements() {
            for y1 in b.elements().filter(|&y1| b.disjoint(y0, y1)) {
                let lhs = rel.contains(&(x, b.join(y0, y1)));
                let rhs = a.down_set(x).into_iter().any(|x0| {
                    let x1 = a.meet(x, complement(a, x0));
                    rel.contains(&(x0, y0)) && rel.contains(&(x1, y1))
                });
                if lhs != rhs {
                    return Some(format!("x={x}, y0={y0}, y1={y1}"));
                }
            }
        }
    }
    None
}

/// An isomorphism `A -> B` whose graph lies in the additive V-relation
/// `rel`, built by splitting off one atom at a time.
pub fn vaught_isomorphism(
    a: &FiniteLattice,
    b: &FiniteLattice,
    rel: &BTreeSet<(Elem, Elem)>,
) -> Result<Vec<Elem>> {
    if let Some((axiom, witness)) = verify_v_relation(a, b, rel)? {
        return Err(Error::NotAVRelation { axiom, witness });
    }
    let atoms_a = a.atoms();
    let mut atom_image: BTreeMap<Elem, Elem> = BTreeMap::new();
    let (mut x, mut y) = (a.require_top()?, b.require_top()?);
    while x != a.bottom() {
        let p = *atoms_a.iter().find(|&&p| a.leq(p, x)).unwrap();
        let rest = a.meet(x, complement(a, p));
        let q = b
            .down_set(y)
            .into_iter()
            .find(|&q| rel.contains(&(p, q)) && rel.contains(&(rest, b.meet(y, complement(b, q)))))
            .ok_or_else(|| Error::LemmaViolated(format!("no split of ({x},{y}) along atom {p}")))?;
        atom_image.insert(p, q);
        x = rest;
        y = b.meet(y, complement(b, q));
    }
    let map: Vec<Elem> = a
        .elements()
        .map(|x| {
            b.join_all(
                atom_image
                    .iter()
                    .filter(|(&p, _)| a.leq(p, x))
                    .map(|(_, &q)| q),
            )
        })
        .collect();
    let bijective = map.iter().collect::<BTreeSet<_>>().len() == b.len() && a.len() == b.len();
    let hom = a.elements().all(|x| {
        a.elements().all(|y| {
            map[a.join(x, y)] == b.join(map[x], map[y])
                && map[a.meet(x, y)] == b.meet(map[x], map[y])
        })
    });
    let inside = a.elements().all(|x| rel.contains(&(x, map[x])));
    if !(bijective && hom && inside) {
        return Err(Error::LemmaViolated(
            "back-and-forth map is not an isomorphism inside the relation".into(),
        ));
    }
    Ok(map)
}

/// All Boolean Banaschewski ranges of `l` are pairwise isomorphic.
pub fn boolean_ranges_isomorphic(l: &FiniteLattice) -> Result<bool> {
    let ranges = boolean_ranges(l)?;
    Ok(ranges
        .windows(2)
        .all(|w| sublattices_isomorphic(l, &w[0], &w[1])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banaschewski::search_ban_function;

    fn rank_measure(b: &FiniteLattice, monoid: CommMonoid) -> Measure {
        let table = b.elements().map(|x| (x, x.count_ones() as usize)).collect();
        Measure {
            boolean: b.elements().collect(),
            monoid,
            table,
        }
    }

    #[test]
    fn rank_into_truncated_naturals_is_a_v_measure() {
        let b2 = FiniteLattice::boolean(2);
        assert_eq!(
            verify_v_measure(&b2, &rank_measure(&b2, CommMonoid::truncated(2))).unwrap(),
            None
        );
    }

    #[test]
    fn constant_zero_is_not_faithful() {
        let b2 = FiniteLattice::boolean(2);
        let mu = Measure {
            boolean: vec![0, 1, 2, 3],
            monoid: CommMonoid::truncated(2),
            table: (0..4).map(|x| (x, 0)).collect(),
        };
        assert_eq!(
            verify_v_measure(&b2, &mu).unwrap(),
            Some(VMeasureViolation::ZeroFaithfulness { x: 1 })
        );
    }

    #[test]
    fn saturating_monoid_breaks_refinement() {
        let b2 = FiniteLattice::boolean(2);
        let v = verify_v_measure(&b2, &rank_measure(&b2, CommMonoid::saturating(2))).unwrap();
        assert!(matches!(
            v,
            Some(VMeasureViolation::Refinement { z: 3, .. })
        ));
    }

    #[test]
    fn monoid_axioms_are_checked() {
        assert!(CommMonoid::new(vec![vec![0, 1], vec![1, 0]], 0).is_ok());
        assert!(matches!(
            CommMonoid::new(vec![vec![0, 1], vec![0, 1]], 0),
            Err(Error::AxiomViolated(_))
        ));
    }

    #[test]
    fn measure_from_complement() {
        let b3 = FiniteLattice::boolean(3);
        let f = search_ban_function(&b3, false).unwrap().unwrap();
        let m = measure_from_function(&b3, &f, 7).unwrap();
        for y in 0..8 {
            assert_eq!(m.get(0, y), Some(y));
            assert_eq!(m.get(y, y), Some(0));
        }
        let partial = measure_from_function(&b3, &f, 3).unwrap();
        assert_eq!(partial.domain, vec![0, 1, 2, 3]);
    }

    #[test]
    fn exchange_in_m3() {
        let m3 = FiniteLattice::diamond(3);
        let f = BanFunction::from_table(&[4, 2, 1, 1, 0]);
        let range = vec![0, 1, 2, 4];
        let (a, b) = exchange_decomposition(&m3, &range, &f, 4, 1, 3).unwrap();
        assert_eq!(b, 2);
        assert_eq!(a, 1);
        let (a, b) = exchange_decomposition(&m3, &range, &f, 4, 4, 0).unwrap();
        assert_eq!((a, b), (4, 0));
        assert_eq!(
            exchange_decomposition(&m3, &range, &f, 3, 3, 0),
            Err(Error::NotInRange(3))
        );
    }

    fn rank_relation(a: &FiniteLattice, b: &FiniteLattice, cap: u32) -> BTreeSet<(Elem, Elem)> {
        let mut rel = BTreeSet::new();
        for x in a.elements() {
            for y in b.elements() {
                if (x.count_ones()).min(cap) == (y.count_ones()).min(cap) {
                    rel.insert((x, y));
                }
            }
        }
        rel
    }

    #[test]
    fn vaught_on_equal_rank() {
        let b2 = FiniteLattice::boolean(2);
        let rel = rank_relation(&b2, &b2, 8);
        let map = vaught_isomorphism(&b2, &b2, &rel).unwrap();
        assert_eq!(map[0], 0);
        assert_eq!(map[3], 3);
        let b1 = FiniteLattice::boolean(1);
        let id: BTreeSet<_> = [(0, 0), (1, 1)].into_iter().collect();
        assert_eq!(vaught_isomorphism(&b1, &b1, &id).unwrap(), vec![0, 1]);
    }

    #[test]
    fn capped_rank_between_different_sizes_is_rejected() {
        let (b2, b3) = (FiniteLattice::boolean(2), FiniteLattice::boolean(3));
        let err = vaught_isomorphism(&b2, &b3, &rank_relation(&b2, &b3, 2)).unwrap_err();
        assert!(matches!(err, Error::NotAVRelation { .. }));
    }

    #[test]
    fn boolean_ranges_agree() {
        assert!(boolean_ranges_isomorphic(&FiniteLattice::diamond(3)).unwrap());
        assert!(boolean_ranges_isomorphic(&FiniteLattice::boolean(3)).unwrap());
        assert_eq!(boolean_ranges(&FiniteLattice::boolean(3)).unwrap().len(), 1);
    }
}
