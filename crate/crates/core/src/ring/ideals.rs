//! Regularity, idempotents, principal right ideals and the lattice `𝕃(R)`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{FiniteRing, RElem, RingHom, TABLE_CAP};
use crate::error::{Error, Result};
use crate::lattice::{subspace_lattice, Elem, FiniteLattice, Subspace, SubspaceLattice};
use crate::linalg::{mat_mul, rref_with_transform, Row};

/// `xR = {x·r : r ∈ R}` as a sorted member list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RightIdeal {
    pub members: Vec<RElem>,
}

impl RightIdeal {
    fn generated_by(r: &FiniteRing, x: RElem) -> Self {
        let mut members: Vec<RElem> = r.elements().map(|y| r.mul(x, y)).collect();
        members.sort_unstable();
        members.dedup();
        RightIdeal { members }
    }

    pub fn contains(&self, x: RElem) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Least-index `y` with `xyx = x` for table rings; for matrix rings without
/// tables, `y = S·P` where `P·x` is the reduced echelon form of `x` and `S`
/// sends pivot columns back to pivot rows.
pub fn quasi_inverse(r: &FiniteRing, x: RElem) -> Option<RElem> {
    if r.has_tables() {
        return r.elements().find(|&y| r.mul(r.mul(x, y), x) == x);
    }
    let (field, n) = r.matrix_shape().expect("structured rings are matrix rings");
    let mut rows = r.decode(x);
    let (pivots, p) = rref_with_transform(field, &mut rows);
    let mut s: Vec<Row> = vec![vec![0u8; n]; n];
    for (k, &pc) in pivots.iter().enumerate() {
        s[pc][k] = 1;
    }
    let y = r.encode(&mat_mul(field, &s, &p));
    (r.mul(r.mul(x, y), x) == x).then_some(y)
}

/// A quasi-inverse for every element, or `NotRegular` at the first element
/// without one.
pub fn quasi_inverses(r: &FiniteRing) -> Result<Vec<RElem>> {
    r.elements()
        .map(|x| quasi_inverse(r, x).ok_or(Error::NotRegular(x)))
        .collect()
}

pub fn is_regular(r: &FiniteRing) -> bool {
    r.elements().all(|x| quasi_inverse(r, x).is_some())
}

fn require_regular_at(r: &FiniteRing, x: RElem) -> Result<()> {
    quasi_inverse(r, x).map(|_| ()).ok_or(Error::NotRegular(x))
}

/// The projection onto `u` along `w` for complementary subspaces of `F_q^n`,
/// acting on column vectors.
fn projection(r: &FiniteRing, u: &Subspace, w: &Subspace) -> RElem {
    let (field, n) = r.matrix_shape().expect("matrix ring");
    let cols: Vec<&Row> = u.basis().iter().chain(w.basis()).collect();
    let b: Vec<Row> = (0..n)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect();
    let (_, b_inv) = rref_with_transform(field, &mut b.clone());
    let k = u.dim();
    let bd: Vec<Row> = b
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, &v)| if j < k { v } else { 0 })
                .collect()
        })
        .collect();
    r.encode(&mat_mul(field, &bd, &b_inv))
}

fn column_space(r: &FiniteRing, x: RElem) -> Subspace {
    let (field, n) = r.matrix_shape().expect("matrix ring");
    let rows = r.decode(x);
    let cols: Vec<Row> = (0..n)
        .map(|c| rows.iter().map(|row| row[c]).collect())
        .collect();
    Subspace::span(field, n, &cols)
}

/// All idempotents in increasing index order. Matrix rings enumerate them as
/// projections onto an image along a complementary kernel.
pub fn idempotents(r: &FiniteRing) -> Result<Vec<RElem>> {
    if let Some((field, n)) = r.matrix_shape() {
        let sl = subspace_lattice(field.order(), n)?;
        let l = sl.lattice();
        let mut out = Vec::new();
        for u in l.elements() {
            for w in l.complements(u) {
                out.push(projection(r, sl.subspace(u), sl.subspace(w)));
            }
        }
        out.sort_unstable();
        out.dedup();
        return Ok(out);
    }
    Ok(r.elements().filter(|&e| r.is_idempotent(e)).collect())
}

/// `Idemp R` ordered by `⊴`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentPoset {
    pub elements: Vec<RElem>,
    leq: Vec<bool>,
}

impl IdempotentPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Order between positions in `elements`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.len() + j]
    }

    pub fn position(&self, e: RElem) -> Option<usize> {
        self.elements.binary_search(&e).ok()
    }
}

/// `⊴` on the idempotents. For table rings the characterization `a ∈ bRb`
/// is recomputed and compared.
pub fn idempotent_poset(r: &FiniteRing) -> Result<IdempotentPoset> {
    let elements = idempotents(r)?;
    let k = elements.len();
    let mut leq = vec![false; k * k];
    let corners: Option<Vec<Vec<bool>>> = (r.len() <= TABLE_CAP).then(|| {
        elements
            .iter()
            .map(|&b| {
                let mut inside = vec![false; r.len()];
                for x in r.elements() {
                    inside[r.mul(r.mul(b, x), b)] = true;
                }
                inside
            })
            .collect()
    });
    for (i, &a) in elements.iter().enumerate() {
        for (j, &b) in elements.iter().enumerate() {
            let v = r.idem_leq(a, b);
            if let Some(c) = &corners {
                if c[j][a] != v {
                    return Err(Error::LemmaViolated(format!(
                        "a = ab = ba and a ∈ bRb disagree at ({a},{b})"
                    )));
                }
            }
            leq[i * k + j] = v;
        }
    }
    Ok(IdempotentPoset { elements, leq })
}

/// `xR`; rejects elements without a quasi-inverse.
pub fn principal_right_ideal(r: &FiniteRing, x: RElem) -> Result<RightIdeal> {
    require_regular_at(r, x)?;
    let ideal = RightIdeal::generated_by(r, x);
    if !ideal.contains(x) {
        return Err(Error::LemmaViolated(format!(
            "{x} ∉ {x}R although it has a quasi-inverse"
        )));
    }
    Ok(ideal)
}

#[derive(Debug, Clone)]
enum Classifier {
    Table { class: Vec<Elem> },
    Columns { subspaces: SubspaceLattice },
}

/// `𝕃(R)` with an idempotent generator for each element and a way to locate
/// `xR` for any `x`.
#[derive(Debug, Clone)]
pub struct RingLattice {
    lattice: FiniteLattice,
    generators: Vec<RElem>,
    classifier: Classifier,
}

impl RingLattice {
    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    /// An idempotent `e` with `eR` equal to element `k`.
    pub fn generator(&self, k: Elem) -> RElem {
        self.generators[k]
    }

    pub fn generators(&self) -> &[RElem] {
        &self.generators
    }

    /// The lattice element `xR`.
    pub fn element_of(&self, r: &FiniteRing, x: RElem) -> Elem {
        match &self.classifier {
            Classifier::Table { class } => class[x],
            Classifier::Columns { subspaces } => subspaces
                .index_of(&column_space(r, x))
                .expect("column spaces are materialized"),
        }
    }

    /// Subspace of `F_q^n` behind element `k` when the lattice was built from
    /// column spaces.
    pub fn column_subspace(&self, k: Elem) -> Option<&Subspace> {
        match &self.classifier {
            Classifier::Columns { subspaces } => Some(subspaces.subspace(k)),
            Classifier::Table { .. } => None,
        }
    }

    pub fn ideal(&self, r: &FiniteRing, k: Elem) -> RightIdeal {
        RightIdeal::generated_by(r, self.generators[k])
    }
}

/// The inclusion-ordered lattice of principal right ideals.
pub fn build_l(r: &FiniteRing) -> Result<RingLattice> {
    let rl = if r.has_tables() {
        build_from_tables(r)?
    } else {
        build_from_columns(r)?
    };
    if !rl.lattice.is_sc_modular() {
        return Err(Error::LemmaViolated(
            "𝕃(R) is not sectionally complemented modular".into(),
        ));
    }
    Ok(rl)
}

fn build_from_tables(r: &FiniteRing) -> Result<RingLattice> {
    quasi_inverses(r)?;
    let ideals: Vec<RightIdeal> = r
        .elements()
        .map(|x| RightIdeal::generated_by(r, x))
        .collect();
    let mut distinct: Vec<&RightIdeal> = ideals.iter().collect();
    distinct.sort_by(|a, b| (a.len(), &a.members).cmp(&(b.len(), &b.members)));
    distinct.dedup();
    let index: HashMap<&RightIdeal, Elem> = distinct
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, i))
        .collect();
    let class: Vec<Elem> = ideals.iter().map(|id| index[id]).collect();
    let n = distinct.len();
    let mut generators = vec![usize::MAX; n];
    for e in r.elements().filter(|&e| r.is_idempotent(e)) {
        if generators[class[e]] == usize::MAX {
            generators[class[e]] = e;
        }
    }
    if let Some(k) = generators.iter().position(|&g| g == usize::MAX) {
        return Err(Error::LemmaViolated(format!(
            "principal ideal {k} has no idempotent generator"
        )));
    }
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            leq[i * n + j] = distinct[i].members.iter().all(|&x| distinct[j].contains(x));
        }
    }
    let lattice = FiniteLattice::from_leq(n, leq)?;
    Ok(RingLattice {
        lattice,
        generators,
        classifier: Classifier::Table { class },
    })
}

fn build_from_columns(r: &FiniteRing) -> Result<RingLattice> {
    let (field, n) = r.matrix_shape().expect("structured rings are matrix rings");
    let subspaces = subspace_lattice(field.order(), n)?;
    let lattice = subspaces.lattice().clone();
    let generators = lattice
        .elements()
        .map(|u| {
            let w = lattice.complements(u)[0];
            projection(r, subspaces.subspace(u), subspaces.subspace(w))
        })
        .collect();
    Ok(RingLattice {
        lattice,
        generators,
        classifier: Classifier::Columns { subspaces },
    })
}

/// The unique `(a, b) ∈ A × B` with `e = a + b`, given `eR = A ⊕ B`.
pub fn decomp_idempotent(
    r: &FiniteRing,
    e: RElem,
    a: &RightIdeal,
    b: &RightIdeal,
) -> Result<(RElem, RElem)> {
    if !r.is_idempotent(e) {
        return Err(Error::PreconditionFailed(format!("{e} is not idempotent")));
    }
    let er = RightIdeal::generated_by(r, e);
    let inside = |id: &RightIdeal| id.members.iter().all(|&x| r.mul(e, x) == x);
    let trivial_meet = a.members.iter().filter(|&&x| b.contains(x)).count() == 1;
    if !(inside(a) && inside(b) && trivial_meet && a.len() * b.len() == er.len()) {
        return Err(Error::NotADirectSum);
    }
    let (x, y) = a
        .members
        .iter()
        .map(|&x| (x, r.sub(e, x)))
        .find(|&(_, y)| b.contains(y))
        .ok_or(Error::NotADirectSum)?;
    let conclusions = [
        r.is_idempotent(x) && r.is_idempotent(y),
        r.mul(x, y) == r.zero() && r.mul(y, x) == r.zero(),
        RightIdeal::generated_by(r, x) == *a,
        RightIdeal::generated_by(r, y) == *b,
    ];
    if conclusions.contains(&false) {
        return Err(Error::LemmaViolated(format!(
            "decomposition of {e} into ({x},{y}) fails {conclusions:?}"
        )));
    }
    Ok((x, y))
}

/// `eRe` with unit `e` and its inclusion into `R`. When `R` is regular the
/// lattice isomorphism `𝕃(eRe) ≅ 𝕃(R)↓eR` is checked in both directions.
pub fn corner_ring(r: &FiniteRing, e: RElem) -> Result<(FiniteRing, RingHom)> {
    if !r.is_idempotent(e) {
        return Err(Error::PreconditionFailed(format!("{e} is not idempotent")));
    }
    if r.one() == Some(e) {
        return Ok((r.clone(), RingHom::identity(r)));
    }
    let mut inside = vec![false; r.len()];
    for x in r.elements() {
        inside[r.mul(r.mul(e, x), e)] = true;
    }
    let members: Vec<RElem> = r.elements().filter(|&x| inside[x]).collect();
    if members.len() > TABLE_CAP {
        return Err(Error::TooLarge(format!(
            "corner ring has {} elements",
            members.len()
        )));
    }
    let pos: HashMap<RElem, usize> = members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let table = |op: &dyn Fn(RElem, RElem) -> RElem| -> Vec<Vec<usize>> {
        members
            .iter()
            .map(|&a| members.iter().map(|&b| pos[&op(a, b)]).collect())
            .collect()
    };
    let corner = FiniteRing::from_tables(
        table(&|a, b| r.add(a, b)),
        table(&|a, b| r.mul(a, b)),
        Some(pos[&e]),
    )?
    .with_label(format!("corner of {} at {e}", r.label()));
    let hom = RingHom {
        map: members.clone(),
    };
    if is_regular(r) {
        check_corner_lattice(r, e, &corner, &hom)?;
    }
    Ok((corner, hom))
}

fn check_corner_lattice(
    r: &FiniteRing,
    e: RElem,
    corner: &FiniteRing,
    incl: &RingHom,
) -> Result<()> {
    let (lc, lr) = (build_l(corner)?, build_l(r)?);
    let up = l_hom(corner, &lc, r, &lr, incl)?;
    let target = lr.lattice().down_set(lr.element_of(r, e));
    let mut image = up.clone();
    image.sort_unstable();
    let order_embedding = lc.lattice().elements().all(|a| {
        lc.lattice()
            .elements()
            .all(|b| lc.lattice().leq(a, b) == lr.lattice().leq(up[a], up[b]))
    });
    if image != target || !order_embedding {
        return Err(Error::LemmaViolated(
            "J ↦ JR is not an isomorphism onto 𝕃(R)↓eR".into(),
        ));
    }
    for c in lc.lattice().elements() {
        let mut back: Vec<RElem> = lr
            .ideal(r, up[c])
            .members
            .into_iter()
            .filter(|x| incl.map.contains(x))
            .collect();
        back.sort_unstable();
        let mut corner_members: Vec<RElem> = lc
            .ideal(corner, c)
            .members
            .iter()
            .map(|&x| incl.map[x])
            .collect();
        corner_members.sort_unstable();
        if back != corner_members {
            return Err(Error::LemmaViolated(format!(
                "JR ∩ eRe differs from J at corner ideal {c}"
            )));
        }
    }
    Ok(())
}

/// `𝕃(f)(xR) = f(x)S`, checked well defined on every element of the source
/// and checked to be a 0-lattice homomorphism.
pub fn l_hom(
    r: &FiniteRing,
    lr: &RingLattice,
    s: &FiniteRing,
    ls: &RingLattice,
    f: &RingHom,
) -> Result<Vec<Elem>> {
    let map: Vec<Elem> = lr
        .generators()
        .iter()
        .map(|&g| ls.element_of(s, f.apply(g)))
        .collect();
    for x in r.elements() {
        let (k, img) = (lr.element_of(r, x), ls.element_of(s, f.apply(x)));
        if map[k] != img {
            return Err(Error::NotWellDefined(format!(
                "{x}R is ideal {k} but f({x})S is {img}, not {}",
                map[k]
            )));
        }
    }
    let (a, b) = (lr.lattice(), ls.lattice());
    if map[a.bottom()] != b.bottom() {
        return Err(Error::LemmaViolated("𝕃(f) does not preserve 0".into()));
    }
    for x in a.elements() {
        for y in a.elements() {
            if map[a.join(x, y)] != b.join(map[x], map[y])
                || map[a.meet(x, y)] != b.meet(map[x], map[y])
            {
                return Err(Error::LemmaViolated(format!(
                    "𝕃(f) is not a lattice homomorphism at ({x},{y})"
                )));
            }
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{find_isomorphism, is_isomorphism};
    use crate::ring::block_embedding;

    fn f2() -> FiniteRing {
        FiniteRing::matrix_ring(2, 1).unwrap()
    }

    fn m2() -> FiniteRing {
        FiniteRing::matrix_ring(2, 2).unwrap()
    }

    /// Exhaustive regularity oracle independent of the library search.
    fn regular_by_brute_force(r: &FiniteRing) -> Option<RElem> {
        r.elements()
            .find(|&x| !r.elements().any(|y| r.mul(r.mul(x, y), x) == x))
    }

    #[test]
    fn regularity() {
        assert_eq!(quasi_inverses(&f2()).unwrap(), vec![0, 1]);
        assert!(is_regular(&m2()));
        assert_eq!(regular_by_brute_force(&m2()), None);
        let z4 = FiniteRing::integers_mod(4).unwrap();
        assert_eq!(quasi_inverses(&z4), Err(Error::NotRegular(2)));
        assert_eq!(regular_by_brute_force(&z4), Some(2));
    }

    #[test]
    fn structured_quasi_inverses() {
        let s = FiniteRing::matrix_structured(3, 2).unwrap();
        for x in s.elements() {
            let y = quasi_inverse(&s, x).unwrap();
            assert_eq!(s.mul(s.mul(x, y), x), x);
        }
    }

    #[test]
    fn idempotent_counts() {
        assert_eq!(idempotents(&f2()).unwrap(), vec![0, 1]);
        let m = m2();
        let idem = idempotents(&m).unwrap();
        assert_eq!(idem.len(), 8);
        assert_eq!(
            idem,
            m.elements()
                .filter(|&e| m.is_idempotent(e))
                .collect::<Vec<_>>()
        );
        let s = FiniteRing::matrix_ring(3, 2).unwrap();
        assert_eq!(
            idempotents(&s).unwrap(),
            s.elements()
                .filter(|&e| s.is_idempotent(e))
                .collect::<Vec<_>>()
        );
        let big = FiniteRing::matrix_ring(2, 4).unwrap();
        assert_eq!(idempotents(&big).unwrap().len(), 1 + 120 + 560 + 120 + 1);
    }

    #[test]
    fn idempotent_order() {
        let sq = f2().product(&f2()).unwrap();
        let p = idempotent_poset(&sq).unwrap();
        assert_eq!(p.elements, vec![0, 1, 2, 3]);
        assert!(p.leq(1, 3) && p.leq(2, 3) && !p.leq(1, 2) && p.leq(0, 1));
        let p2 = idempotent_poset(&m2()).unwrap();
        assert_eq!(p2.len(), 8);
    }

    #[test]
    fn principal_ideals() {
        assert_eq!(principal_right_ideal(&f2(), 1).unwrap().members, vec![0, 1]);
        let m = m2();
        let e11 = m.encode(&[vec![1, 0], vec![0, 0]]);
        let ideal = principal_right_ideal(&m, e11).unwrap();
        assert_eq!(ideal.len(), 4);
        assert!(ideal.members.iter().all(|&x| m.decode(x)[1] == vec![0, 0]));
        assert_eq!(principal_right_ideal(&m, 0).unwrap().members, vec![0]);
        let z4 = FiniteRing::integers_mod(4).unwrap();
        assert_eq!(principal_right_ideal(&z4, 2), Err(Error::NotRegular(2)));
    }

    #[test]
    fn lattice_of_matrix_rings_is_the_subspace_lattice() {
        let m = m2();
        let l = build_l(&m).unwrap();
        assert_eq!(l.len(), 5);
        let sl = subspace_lattice(2, 2).unwrap();
        let by_columns: Vec<Elem> = l
            .generators()
            .iter()
            .map(|&g| sl.index_of(&column_space(&m, g)).unwrap())
            .collect();
        assert!(is_isomorphism(l.lattice(), sl.lattice(), &by_columns));
        let structured = build_l(&FiniteRing::matrix_structured(2, 2).unwrap()).unwrap();
        assert!(find_isomorphism(l.lattice(), structured.lattice()).is_some());
        assert_eq!(
            build_l(&FiniteRing::matrix_ring(3, 2).unwrap())
                .unwrap()
                .len(),
            6
        );
        assert_eq!(build_l(&f2()).unwrap().len(), 2);
        let sq = build_l(&f2().product(&f2()).unwrap()).unwrap();
        assert!(find_isomorphism(sq.lattice(), &FiniteLattice::boolean(2)).is_some());
    }

    #[test]
    fn structured_generators_are_idempotent() {
        let r = FiniteRing::matrix_ring(2, 4).unwrap();
        let l = build_l(&r).unwrap();
        assert_eq!(l.len(), 67);
        for k in l.lattice().elements() {
            let g = l.generator(k);
            assert!(r.is_idempotent(g));
            assert_eq!(l.element_of(&r, g), k);
        }
    }

    #[test]
    fn idempotent_decomposition() {
        let sq = f2().product(&f2()).unwrap();
        let (a, b) = (
            principal_right_ideal(&sq, 2).unwrap(),
            principal_right_ideal(&sq, 1).unwrap(),
        );
        assert_eq!(decomp_idempotent(&sq, 3, &a, &b).unwrap(), (2, 1));
        let m = m2();
        let e11 = m.encode(&[vec![1, 0], vec![0, 0]]);
        let e22 = m.encode(&[vec![0, 0], vec![0, 1]]);
        let (a, b) = (
            principal_right_ideal(&m, e11).unwrap(),
            principal_right_ideal(&m, e22).unwrap(),
        );
        assert_eq!(
            decomp_idempotent(&m, m.one().unwrap(), &a, &b).unwrap(),
            (e11, e22)
        );
        let zero = principal_right_ideal(&m, 0).unwrap();
        let full = principal_right_ideal(&m, m.one().unwrap()).unwrap();
        assert_eq!(
            decomp_idempotent(&m, m.one().unwrap(), &full, &zero).unwrap(),
            (m.one().unwrap(), 0)
        );
        assert_eq!(
            decomp_idempotent(&m, m.one().unwrap(), &a, &a),
            Err(Error::NotADirectSum)
        );
    }

    #[test]
    fn corners() {
        let m = m2();
        let (c, incl) = corner_ring(&m, m.one().unwrap()).unwrap();
        assert_eq!((c.len(), incl), (16, RingHom::identity(&m)));
        let e11 = m.encode(&[vec![1, 0], vec![0, 0]]);
        let (c, incl) = corner_ring(&m, e11).unwrap();
        assert_eq!(c.len(), 2);
        assert!(is_regular(&c));
        incl.verify(&c, &m).unwrap();
        let (z, _) = corner_ring(&m, 0).unwrap();
        assert_eq!(z.len(), 1);
    }

    #[test]
    fn lattice_maps() {
        let m = m2();
        let lm = build_l(&m).unwrap();
        let id = l_hom(&m, &lm, &m, &lm, &RingHom::identity(&m)).unwrap();
        assert_eq!(id, (0..5).collect::<Vec<_>>());
        let e11 = m.encode(&[vec![1, 0], vec![0, 0]]);
        let (c, incl) = corner_ring(&m, e11).unwrap();
        let lc = build_l(&c).unwrap();
        let up = l_hom(&c, &lc, &m, &lm, &incl).unwrap();
        assert_eq!(up, vec![0, lm.element_of(&m, e11)]);
        let sq = f2().product(&f2()).unwrap();
        let lsq = build_l(&sq).unwrap();
        let lf = build_l(&f2()).unwrap();
        let diag = l_hom(&f2(), &lf, &sq, &lsq, &RingHom { map: vec![0, 3] }).unwrap();
        assert_eq!(diag, vec![0, lsq.lattice().top().unwrap()]);
    }

    #[test]
    fn lattice_maps_compose() {
        let (r1, r2, r4) = (f2(), m2(), FiniteRing::matrix_ring(2, 4).unwrap());
        let (f, g) = (
            block_embedding(&r1, &r2).unwrap(),
            block_embedding(&r2, &r4).unwrap(),
        );
        let (l1, l2, l4) = (
            build_l(&r1).unwrap(),
            build_l(&r2).unwrap(),
            build_l(&r4).unwrap(),
        );
        let lf = l_hom(&r1, &l1, &r2, &l2, &f).unwrap();
        let lg = l_hom(&r2, &l2, &r4, &l4, &g).unwrap();
        let lgf = l_hom(&r1, &l1, &r4, &l4, &f.then(&g)).unwrap();
        assert_eq!(lgf, lf.iter().map(|&k| lg[k]).collect::<Vec<_>>());
    }
}
