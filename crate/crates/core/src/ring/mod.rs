//! Finite associative rings, not necessarily unital.
//!
//! A ring is either given by full addition and multiplication tables (at most
//! [`TABLE_CAP`] elements) or is a matrix ring `M_n(F_q)` evaluated on the
//! fly. Matrix elements are indexed by their entries read as base-`q` digits,
//! entry `(r, c)` being digit `r * n + c`, so the zero matrix is element 0.
//! Small matrix rings keep both representations: tables for exhaustive
//! scans and the matrix description for column-space computations.
//!
//! Every finite regular ring is unital (it is the directed union of its
//! corner rings, and a finite directed union has a largest member), so the
//! unital embedding used for infinite non-unital rings is never needed here.

mod ban;
mod corpus;
mod ideals;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Gf;
use crate::linalg::{mat_mul, Row};

pub use ban::{
    eps_from_ring_ban, eps_property_check, lattice_ban_from_ring, ring_ban_from_lattice,
    verify_ring_ban, EpsViolation, RingBanFunction, RingBanViolation,
};
pub use corpus::{nonregular_examples, regular_corpus};
pub use ideals::{
    build_l, corner_ring, decomp_idempotent, idempotent_poset, idempotents, is_regular, l_hom,
    principal_right_ideal, quasi_inverse, quasi_inverses, IdempotentPoset, RightIdeal, RingLattice,
};

pub type RElem = usize;

/// Largest ring stored with explicit tables.
pub const TABLE_CAP: usize = 256;
/// Largest matrix ring evaluated on the fly.
pub const STRUCTURED_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingTag {
    Table,
    Matrix { q: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct MatrixSpec {
    field: Gf,
    n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRing {
    m: usize,
    zero: RElem,
    one: Option<RElem>,
    tag: RingTag,
    label: String,
    tables: Option<Tables>,
    matrix: Option<MatrixSpec>,
}

impl FiniteRing {
    /// Validates the ring axioms exhaustively; the additive identity is found
    /// from the table.
    pub fn from_tables(
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        one: Option<RElem>,
    ) -> Result<Self> {
        let m = add.len();
        if m == 0 || m > TABLE_CAP {
            return Err(Error::Malformed(format!(
                "ring order {m} outside 1..={TABLE_CAP}"
            )));
        }
        let square = |t: &[Vec<usize>]| {
            t.len() == m && t.iter().all(|r| r.len() == m && r.iter().all(|&v| v < m))
        };
        if !square(&add) || !square(&mul) || one.is_some_and(|o| o >= m) {
            return Err(Error::Malformed(
                "ring tables must be m x m with entries below m".into(),
            ));
        }
        let flat = |t: &[Vec<usize>]| t.iter().flatten().map(|&v| v as u32).collect::<Vec<u32>>();
        let zero = (0..m)
            .find(|&z| (0..m).all(|x| add[z][x] == x && add[x][z] == x))
            .ok_or_else(|| Error::AxiomViolated("addition has no neutral element".into()))?;
        let mut neg = vec![0u32; m];
        for x in 0..m {
            let y = (0..m)
                .find(|&y| add[x][y] == zero)
                .ok_or_else(|| Error::AxiomViolated(format!("{x} has no additive inverse")))?;
            neg[x] = y as u32;
        }
        let ring = FiniteRing {
            m,
            zero,
            one,
            tag: RingTag::Table,
            label: format!("table ring of order {m}"),
            tables: Some(Tables {
                add: flat(&add),
                mul: flat(&mul),
                neg,
            }),
            matrix: None,
        };
        ring.check_axioms()?;
        Ok(ring)
    }

    fn check_axioms(&self) -> Result<()> {
        let m = self.m;
        for a in 0..m {
            for b in 0..m {
                if self.add(a, b) != self.add(b, a) {
                    return Err(Error::AxiomViolated(format!(
                        "addition not commutative at ({a},{b})"
                    )));
                }
                for c in 0..m {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(Error::AxiomViolated(format!(
                            "addition not associative at ({a},{b},{c})"
                        )));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::AxiomViolated(format!(
                            "multiplication not associative at ({a},{b},{c})"
                        )));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                        || self.mul(self.add(b, c), a) != self.add(self.mul(b, a), self.mul(c, a))
                    {
                        return Err(Error::AxiomViolated(format!(
                            "distributivity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        if let Some(o) = self.one {
            if let Some(x) = (0..m).find(|&x| self.mul(o, x) != x || self.mul(x, o) != x) {
                return Err(Error::AxiomViolated(format!(
                    "{o} is not a two-sided unit (fails at {x})"
                )));
            }
        }
        Ok(())
    }

    /// `M_n(F_q)`: tables when `q^(n^2) <= TABLE_CAP`, evaluated on the fly
    /// up to [`STRUCTURED_CAP`].
    pub fn matrix_ring(q: usize, n: usize) -> Result<Self> {
        let mut r = Self::matrix_structured(q, n)?;
        if r.m <= TABLE_CAP {
            r.materialize_tables();
        }
        Ok(r)
    }

    /// `M_n(F_q)` without tables, whatever its size.
    pub fn matrix_structured(q: usize, n: usize) -> Result<Self> {
        let field = Gf::new(q)?;
        let m = (n * n)
            .try_into()
            .ok()
            .and_then(|e: u32| q.checked_pow(e))
            .filter(|&m| m <= STRUCTURED_CAP)
            .ok_or_else(|| {
                Error::TooLarge(format!("M_{n}(F_{q}) exceeds {STRUCTURED_CAP} elements"))
            })?;
        let mut r = FiniteRing {
            m,
            zero: 0,
            one: None,
            tag: RingTag::Matrix { q, n },
            label: if n == 1 {
                format!("F_{q}")
            } else {
                format!("M_{n}(F_{q})")
            },
            tables: None,
            matrix: Some(MatrixSpec { field, n }),
        };
        let id: Vec<Row> = (0..n)
            .map(|i| (0..n).map(|j| u8::from(i == j)).collect())
            .collect();
        r.one = Some(r.encode(&id));
        Ok(r)
    }

    fn materialize_tables(&mut self) {
        let m = self.m;
        let mut t = Tables {
            add: vec![0; m * m],
            mul: vec![0; m * m],
            neg: vec![0; m],
        };
        for a in 0..m {
            t.neg[a] = self.neg(a) as u32;
            for b in 0..m {
                t.add[a * m + b] = self.add(a, b) as u32;
                t.mul[a * m + b] = self.mul(a, b) as u32;
            }
        }
        self.tables = Some(t);
    }

    /// `Z/n`.
    pub fn integers_mod(n: usize) -> Result<Self> {
        let add = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        let mul = (0..n)
            .map(|a| (0..n).map(|b| (a * b) % n).collect())
            .collect();
        let mut r = Self::from_tables(add, mul, Some(1 % n.max(1)))?;
        r.label = format!("Z/{n}");
        Ok(r)
    }

    /// The ring with one element, where `0 = 1`.
    pub fn zero_ring() -> Self {
        let mut r = Self::from_tables(vec![vec![0]], vec![vec![0]], Some(0)).expect("zero ring");
        r.label = "0".into();
        r
    }

    /// `self x other`, element `(a, b)` stored as `a * |other| + b`.
    pub fn product(&self, other: &FiniteRing) -> Result<Self> {
        let (m1, m2) = (self.m, other.m);
        if m1 * m2 > TABLE_CAP {
            return Err(Error::TooLarge(format!(
                "product of order {} exceeds {TABLE_CAP}",
                m1 * m2
            )));
        }
        let m = m1 * m2;
        let op = |f: &dyn Fn(&FiniteRing, RElem, RElem) -> RElem| -> Vec<Vec<usize>> {
            (0..m)
                .map(|x| {
                    (0..m)
                        .map(|y| f(self, x / m2, y / m2) * m2 + f(other, x % m2, y % m2))
                        .collect()
                })
                .collect()
        };
        let add = op(&|r, a, b| r.add(a, b));
        let mul = op(&|r, a, b| r.mul(a, b));
        let one = self.one.zip(other.one).map(|(a, b)| a * m2 + b);
        let mut r = Self::from_tables(add, mul, one)?;
        r.label = format!("{} x {}", self.label, other.label);
        Ok(r)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn elements(&self) -> std::ops::Range<RElem> {
        0..self.m
    }

    pub fn zero(&self) -> RElem {
        self.zero
    }

    pub fn one(&self) -> Option<RElem> {
        self.one
    }

    pub fn require_one(&self) -> Result<RElem> {
        self.one
            .ok_or_else(|| Error::PreconditionFailed(format!("{} has no unit", self.label)))
    }

    pub fn tag(&self) -> &RingTag {
        &self.tag
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// The full tables, materialized on demand for small structured rings.
    pub fn table_view(&self) -> Result<(Vec<Vec<usize>>, Vec<Vec<usize>>)> {
        if self.m > TABLE_CAP {
            return Err(Error::TooLarge(format!(
                "{} has {} elements",
                self.label, self.m
            )));
        }
        let t = |f: &dyn Fn(RElem, RElem) -> RElem| {
            (0..self.m)
                .map(|a| (0..self.m).map(|b| f(a, b)).collect())
                .collect()
        };
        Ok((t(&|a, b| self.add(a, b)), t(&|a, b| self.mul(a, b))))
    }

    pub fn add(&self, a: RElem, b: RElem) -> RElem {
        match (&self.tables, &self.matrix) {
            (Some(t), _) => t.add[a * self.m + b] as usize,
            (None, Some(ms)) => {
                let q = ms.field.order();
                let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
                for _ in 0..ms.n * ms.n {
                    out += ms.field.add((a % q) as u8, (b % q) as u8) as usize * place;
                    a /= q;
                    b /= q;
                    place *= q;
                }
                out
            }
            _ => unreachable!("ring without representation"),
        }
    }

    pub fn neg(&self, a: RElem) -> RElem {
        match (&self.tables, &self.matrix) {
            (Some(t), _) => t.neg[a] as usize,
            (None, Some(ms)) => {
                let q = ms.field.order();
                let (mut a, mut out, mut place) = (a, 0, 1);
                for _ in 0..ms.n * ms.n {
                    out += ms.field.neg((a % q) as u8) as usize * place;
                    a /= q;
                    place *= q;
                }
                out
            }
            _ => unreachable!("ring without representation"),
        }
    }

    pub fn sub(&self, a: RElem, b: RElem) -> RElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: RElem, b: RElem) -> RElem {
        match (&self.tables, &self.matrix) {
            (Some(t), _) => t.mul[a * self.m + b] as usize,
            (None, Some(ms)) => self.encode(&mat_mul(&ms.field, &self.decode(a), &self.decode(b))),
            _ => unreachable!("ring without representation"),
        }
    }

    pub fn is_idempotent(&self, e: RElem) -> bool {
        self.mul(e, e) == e
    }

    /// `a ⊴ b`: `a = ab = ba`.
    pub fn idem_leq(&self, a: RElem, b: RElem) -> bool {
        self.mul(a, b) == a && self.mul(b, a) == a
    }

    /// Field and size of a matrix ring.
    pub fn matrix_shape(&self) -> Option<(&Gf, usize)> {
        self.matrix.as_ref().map(|ms| (&ms.field, ms.n))
    }

    /// Entries of a matrix-ring element.
    pub fn decode(&self, x: RElem) -> Vec<Row> {
        let ms = self.matrix.as_ref().expect("matrix ring");
        let q = ms.field.order();
        let mut x = x;
        let mut out = vec![vec![0u8; ms.n]; ms.n];
        for r in 0..ms.n {
            for c in 0..ms.n {
                out[r][c] = (x % q) as u8;
                x /= q;
            }
        }
        out
    }

    pub fn encode(&self, rows: &[Row]) -> RElem {
        let ms = self.matrix.as_ref().expect("matrix ring");
        let q = ms.field.order();
        rows.iter()
            .flatten()
            .rev()
            .fold(0, |acc, &d| acc * q + d as usize)
    }

    /// A greedy set whose additive span is the whole ring; it also generates
    /// the ring multiplicatively.
    pub fn additive_generators(&self) -> Vec<RElem> {
        let mut inside = vec![false; self.m];
        let mut members = vec![self.zero];
        inside[self.zero] = true;
        let mut gens = Vec::new();
        for g in self.elements() {
            if inside[g] {
                continue;
            }
            gens.push(g);
            let mut multiples = vec![g];
            while *multiples.last().unwrap() != self.zero {
                multiples.push(self.add(*multiples.last().unwrap(), g));
            }
            let base = members.clone();
            for &d in &base {
                for &k in &multiples {
                    let s = self.add(d, k);
                    if !inside[s] {
                        inside[s] = true;
                        members.push(s);
                    }
                }
            }
        }
        gens
    }
}

/// A map between rings preserving addition and multiplication; the unit need
/// not be preserved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingHom {
    pub map: Vec<RElem>,
}

impl RingHom {
    pub fn identity(r: &FiniteRing) -> Self {
        RingHom {
            map: r.elements().collect(),
        }
    }

    pub fn apply(&self, x: RElem) -> RElem {
        self.map[x]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &RingHom) -> RingHom {
        RingHom {
            map: self.map.iter().map(|&y| next.map[y]).collect(),
        }
    }

    pub fn image(&self) -> Vec<RElem> {
        let mut img = self.map.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.map.len()
    }

    /// Checks additivity and multiplicativity against every element paired
    /// with an additive generating set, which suffices for both.
    pub fn verify(&self, source: &FiniteRing, target: &FiniteRing) -> Result<()> {
        if self.map.len() != source.len() || self.map.iter().any(|&y| y >= target.len()) {
            return Err(Error::Malformed(
                "homomorphism table does not match the rings".into(),
            ));
        }
        if self.map[source.zero()] != target.zero() {
            return Err(Error::AxiomViolated("zero is not preserved".into()));
        }
        for g in source.additive_generators() {
            for x in source.elements() {
                let (fx, fg) = (self.map[x], self.map[g]);
                if self.map[source.add(x, g)] != target.add(fx, fg) {
                    return Err(Error::AxiomViolated(format!(
                        "addition not preserved at ({x},{g})"
                    )));
                }
                if self.map[source.mul(x, g)] != target.mul(fx, fg)
                    || self.map[source.mul(g, x)] != target.mul(fg, fx)
                {
                    return Err(Error::AxiomViolated(format!(
                        "multiplication not preserved at ({x},{g})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The upper-left block embedding `M_a(F_q) -> M_b(F_q)`, `a <= b`.
pub fn block_embedding(source: &FiniteRing, target: &FiniteRing) -> Result<RingHom> {
    let ((fs, a), (ft, b)) = match (source.matrix_shape(), target.matrix_shape()) {
        (Some(s), Some(t)) => (s, t),
        _ => {
            return Err(Error::PreconditionFailed(
                "block embedding needs two matrix rings".into(),
            ))
        }
    };
    if fs != ft || a > b {
        return Err(Error::PreconditionFailed(
            "block embedding needs the same field and a <= b".into(),
        ));
    }
    let map = source
        .elements()
        .map(|x| {
            let small = source.decode(x);
            let big: Vec<Row> = (0..b)
                .map(|r| {
                    (0..b)
                        .map(|c| if r < a && c < a { small[r][c] } else { 0 })
                        .collect()
                })
                .collect();
            target.encode(&big)
        })
        .collect();
    Ok(RingHom { map })
}

/// `M_0(F_q)`: the zero ring tagged as a matrix ring, so block embeddings
/// out of it are available.
pub fn empty_matrix_ring(q: usize) -> Result<FiniteRing> {
    FiniteRing::matrix_ring(q, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_encoding_round_trips() {
        let r = FiniteRing::matrix_ring(3, 2).unwrap();
        assert_eq!(r.len(), 81);
        assert!(r.has_tables());
        for x in r.elements() {
            assert_eq!(r.encode(&r.decode(x)), x);
        }
        assert_eq!(r.one(), Some(1 + 27));
    }

    #[test]
    fn structured_and_tabled_agree() {
        let t = FiniteRing::matrix_ring(2, 2).unwrap();
        let s = FiniteRing::matrix_structured(2, 2).unwrap();
        assert!(!s.has_tables());
        for a in t.elements() {
            for b in t.elements() {
                assert_eq!(t.add(a, b), s.add(a, b));
                assert_eq!(t.mul(a, b), s.mul(a, b));
            }
        }
    }

    #[test]
    fn small_matrix_rings() {
        assert_eq!(FiniteRing::matrix_ring(2, 1).unwrap().len(), 2);
        assert_eq!(FiniteRing::matrix_ring(3, 1).unwrap().label(), "F_3");
        assert_eq!(FiniteRing::matrix_ring(2, 4).unwrap().len(), 65536);
        assert!(!FiniteRing::matrix_ring(2, 4).unwrap().has_tables());
        assert!(matches!(
            FiniteRing::matrix_ring(2, 5),
            Err(Error::TooLarge(_))
        ));
        let z = empty_matrix_ring(2).unwrap();
        assert_eq!((z.len(), z.one()), (1, Some(0)));
    }

    #[test]
    fn table_validation() {
        assert!(FiniteRing::integers_mod(6).is_ok());
        let bad_mul = vec![vec![0, 0], vec![0, 0]];
        let add = vec![vec![0, 1], vec![1, 0]];
        assert!(matches!(
            FiniteRing::from_tables(add.clone(), bad_mul, Some(1)),
            Err(Error::AxiomViolated(_))
        ));
        assert!(matches!(
            FiniteRing::from_tables(add, vec![vec![0]], None),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn products_and_homs() {
        let f2 = FiniteRing::matrix_ring(2, 1).unwrap();
        let sq = f2.product(&f2).unwrap();
        assert_eq!((sq.len(), sq.one()), (4, Some(3)));
        let diag = RingHom { map: vec![0, 3] };
        diag.verify(&f2, &sq).unwrap();
        let second = RingHom { map: vec![0, 1] };
        assert!(second.verify(&f2, &sq).is_ok());
        assert!(RingHom { map: vec![1, 1] }.verify(&f2, &sq).is_err());
        let m2 = FiniteRing::matrix_ring(2, 2).unwrap();
        let m4 = FiniteRing::matrix_ring(2, 4).unwrap();
        let up = block_embedding(&m2, &m4).unwrap();
        up.verify(&m2, &m4).unwrap();
        assert!(up.is_injective());
        assert_eq!(RingHom::identity(&m2).then(&up), up);
    }

    #[test]
    fn additive_generators_span() {
        let m2 = FiniteRing::matrix_ring(2, 2).unwrap();
        assert_eq!(m2.additive_generators(), vec![1, 2, 4, 8]);
        assert_eq!(
            FiniteRing::integers_mod(6).unwrap().additive_generators(),
            vec![1]
        );
    }
}
