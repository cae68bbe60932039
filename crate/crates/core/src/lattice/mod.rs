//! Finite lattices stored as dense order matrices with precomputed join and
//! meet tables, plus the structural vocabulary built on top of them.
//!
//! # Arguesian identity
//!
//! [`Predicate::Arguesian`] tests the six-variable Arguesian inequality in
//! the form given by B. Jónsson ("Modular lattices and Desargues' theorem",
//! Math. Scand. 2, 1954):
//!
//! ```text
//! (a0 ∨ b0) ∧ (a1 ∨ b1) ∧ (a2 ∨ b2) <= a0 ∨ (b0 ∧ (c ∨ b1))
//! c  = c2 ∧ (c0 ∨ c1)
//! ci = (aj ∨ ak) ∧ (bj ∨ bk)      {i, j, k} = {0, 1, 2}
//! ```
//!
//! The identity is imported from that literature rather than derived here.
//!
//! # Neutral ideals
//!
//! In a finite lattice every ideal is principal, so the neutral ideal
//! generated by `x` is `↓e` for the least neutral element `e >= x`. When
//! the lattice is sectionally complemented and modular the same ideal is
//! obtained as the perspectivity closure of `↓x`; both routes are exposed.

mod enumerate;
mod iso;
mod ops;
mod predicates;
mod subspace;

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub use enumerate::{
    canonical_code, canonical_labeling, enumerate_lattices, enumerate_lattices_capped,
    lattices_up_to, lattices_up_to_capped, CanonicalCode, MAX_ENUMERATION,
};
pub use iso::{find_isomorphism, is_isomorphism, isomorphic};
pub use ops::{
    check_xyz_lemma, find_frames, for_each_frame, independent, independent_by_definition,
    neutral_ideal_by_distributivity, neutral_ideal_by_perspectivity, neutral_ideal_generated,
    oplus, perspective, perspective_via, Frame, IdealSet,
};
pub use predicates::{check_predicate, has_pentagon, Predicate, PredicateOutcome};
pub use subspace::{subspace_lattice, Subspace, SubspaceLattice, SUBSPACE_CAP};

/// Element index inside a [`FiniteLattice`].
pub type Elem = usize;

/// Largest element count for which dense tables are built.
pub const DENSE_CAP: usize = 4096;

/// A finite lattice on the elements `0..n`.
#[derive(Debug, Clone)]
pub struct FiniteLattice {
    n: usize,
    leq: Vec<bool>,
    join: Vec<u32>,
    meet: Vec<u32>,
    bottom: Elem,
    top: Option<Elem>,
    modular: OnceLock<bool>,
    sc_modular: OnceLock<bool>,
}

impl PartialEq for FiniteLattice {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.leq == other.leq
    }
}

impl Eq for FiniteLattice {}

/// A finite sequence of lattice elements.
pub type ElementSeq = Vec<Elem>;

impl FiniteLattice {
    /// Builds a lattice from a set of order pairs `(lower, upper)`; the order
    /// is their reflexive-transitive closure.
    pub fn from_covers(n: usize, covers: &[(Elem, Elem)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoBottom);
        }
        if n > DENSE_CAP {
            return Err(Error::TooLarge(format!("{n} elements exceeds {DENSE_CAP}")));
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::Malformed(format!(
                    "cover ({a},{b}) out of range 0..{n}"
                )));
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::Malformed(format!(
                        "order pairs contain a cycle through {i} and {j}"
                    )));
                }
            }
        }
        Self::from_leq(n, leq)
    }

    /// Builds a lattice from a partial order matrix (row-major, `leq[a*n+b]`
    /// iff `a <= b`). The matrix must already be a partial order.
    pub fn from_leq(n: usize, leq: Vec<bool>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoBottom);
        }
        if leq.len() != n * n {
            return Err(Error::Malformed("order matrix has wrong size".into()));
        }
        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| leq[b * n + x]))
            .ok_or(Error::NoBottom)?;
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        let mut upper = Vec::with_capacity(n);
        let mut lower = Vec::with_capacity(n);
        for a in 0..n {
            for b in a..n {
                upper.clear();
                lower.clear();
                for x in 0..n {
                    if leq[a * n + x] && leq[b * n + x] {
                        upper.push(x);
                    }
                    if leq[x * n + a] && leq[x * n + b] {
                        lower.push(x);
                    }
                }
                let lub = upper
                    .iter()
                    .copied()
                    .find(|&u| upper.iter().all(|&v| leq[u * n + v]))
                    .ok_or(Error::NotALattice { a, b, op: "join" })?;
                let glb = lower
                    .iter()
                    .copied()
                    .find(|&l| lower.iter().all(|&v| leq[v * n + l]))
                    .ok_or(Error::NotALattice { a, b, op: "meet" })?;
                join[a * n + b] = lub as u32;
                join[b * n + a] = lub as u32;
                meet[a * n + b] = glb as u32;
                meet[b * n + a] = glb as u32;
            }
        }
        let top = (0..n).find(|&t| (0..n).all(|x| leq[x * n + t]));
        Ok(FiniteLattice {
            n,
            leq,
            join,
            meet,
            bottom,
            top,
            modular: OnceLock::new(),
            sc_modular: OnceLock::new(),
        })
    }

    /// Builds a lattice from a join table alone, deriving order and meets.
    /// The table must be the join of a finite lattice; this is validated.
    pub fn from_join_table(n: usize, join: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoBottom);
        }
        if join.len() != n * n {
            return Err(Error::Malformed("join table has wrong size".into()));
        }
        let leq: Vec<bool> = (0..n * n).map(|i| join[i] as usize == i % n).collect();
        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| leq[b * n + x]))
            .ok_or(Error::NoBottom)?;
        // meet(a,b) = join of all common lower bounds
        let mut meet = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let mut m = bottom;
                for x in 0..n {
                    if leq[x * n + a] && leq[x * n + b] {
                        m = join[m * n + x] as usize;
                    }
                }
                if !(leq[m * n + a] && leq[m * n + b]) {
                    return Err(Error::NotALattice { a, b, op: "meet" });
                }
                meet[a * n + b] = m as u32;
                meet[b * n + a] = m as u32;
            }
        }
        let top = (0..n).find(|&t| (0..n).all(|x| leq[x * n + t]));
        Ok(FiniteLattice {
            n,
            leq,
            join,
            meet,
            bottom,
            top,
            modular: OnceLock::new(),
            sc_modular: OnceLock::new(),
        })
    }

    /// Builds a lattice from already-validated tables.
    pub(crate) fn from_tables_unchecked(n: usize, join: Vec<u32>, meet: Vec<u32>) -> Self {
        let leq: Vec<bool> = (0..n * n).map(|i| join[i] as usize == i % n).collect();
        let bottom = (0..n).find(|&b| (0..n).all(|x| leq[b * n + x])).unwrap();
        let top = (0..n).find(|&t| (0..n).all(|x| leq[x * n + t]));
        FiniteLattice {
            n,
            leq,
            join,
            meet,
            bottom,
            top,
            modular: OnceLock::new(),
            sc_modular: OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.n
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Option<Elem> {
        self.top
    }

    /// The top element, or [`Error::UnboundedLattice`].
    pub fn require_top(&self) -> Result<Elem> {
        self.top.ok_or(Error::UnboundedLattice)
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.n + b]
    }

    #[inline]
    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b)
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.n + b] as Elem
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.n + b] as Elem
    }

    pub fn join_all<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items
            .into_iter()
            .fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Meet of a family; the empty meet is the top (which must exist).
    pub fn meet_all<I: IntoIterator<Item = Elem>>(&self, items: I) -> Option<Elem> {
        let mut it = items.into_iter();
        let first = match it.next() {
            Some(x) => x,
            None => return self.top,
        };
        Some(it.fold(first, |acc, x| self.meet(acc, x)))
    }

    /// `a` and `b` are disjoint (`a ∧ b = 0`).
    #[inline]
    pub fn disjoint(&self, a: Elem, b: Elem) -> bool {
        self.meet(a, b) == self.bottom
    }

    /// `c = a ⊕ b`: disjoint with join `c`.
    #[inline]
    pub fn is_direct_sum(&self, a: Elem, b: Elem, c: Elem) -> bool {
        self.disjoint(a, b) && self.join(a, b) == c
    }

    pub fn atoms(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&p| {
                p != self.bottom
                    && self
                        .elements()
                        .all(|x| !(self.lt(x, p) && x != self.bottom))
            })
            .collect()
    }

    /// All complements of `a`; empty if the lattice has no top.
    pub fn complements(&self, a: Elem) -> Vec<Elem> {
        match self.top {
            Some(t) => self.sectional_complements(a, t),
            None => Vec::new(),
        }
    }

    /// All `x` with `a ⊕ x = b`, in increasing index order.
    pub fn sectional_complements(&self, a: Elem, b: Elem) -> Vec<Elem> {
        self.elements()
            .filter(|&x| self.is_direct_sum(a, x, b))
            .collect()
    }

    /// Least-index `x` with `a ⊕ x = b`.
    pub fn sectional_complement(&self, a: Elem, b: Elem) -> Result<Elem> {
        self.elements()
            .find(|&x| self.is_direct_sum(a, x, b))
            .ok_or(Error::NoSectionalComplement { a, b })
    }

    pub fn down_set(&self, a: Elem) -> Vec<Elem> {
        self.elements().filter(|&x| self.leq(x, a)).collect()
    }

    pub fn up_set(&self, a: Elem) -> Vec<Elem> {
        self.elements().filter(|&x| self.leq(a, x)).collect()
    }

    /// Hasse diagram edges `(lower, upper)`.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if self.lt(a, b) && !self.elements().any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Cached modularity test.
    pub fn is_modular(&self) -> bool {
        *self
            .modular
            .get_or_init(|| predicates::modular_witness(self).is_none())
    }

    /// Cached test for "sectionally complemented and modular".
    pub fn is_sc_modular(&self) -> bool {
        *self.sc_modular.get_or_init(|| {
            self.is_modular() && predicates::sectionally_complemented_witness(self).is_none()
        })
    }

    /// The sublattice induced on `members`, which must be closed under join
    /// and meet. Returns the lattice and the map new index -> old index.
    pub fn sublattice(&self, members: &[Elem]) -> Result<(FiniteLattice, Vec<Elem>)> {
        let mut members: Vec<Elem> = members.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::PreconditionFailed("empty sublattice".into()));
        }
        let m = members.len();
        let mut pos = vec![usize::MAX; self.n];
        for (i, &x) in members.iter().enumerate() {
            pos[x] = i;
        }
        let mut join = vec![0u32; m * m];
        let mut meet = vec![0u32; m * m];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                let (jn, mt) = (pos[self.join(a, b)], pos[self.meet(a, b)]);
                if jn == usize::MAX || mt == usize::MAX {
                    return Err(Error::PreconditionFailed(format!(
                        "subset not closed under join/meet at ({a},{b})"
                    )));
                }
                join[i * m + j] = jn as u32;
                meet[i * m + j] = mt as u32;
            }
        }
        Ok((Self::from_tables_unchecked(m, join, meet), members))
    }

    /// The principal ideal `↓a` as a lattice with its inclusion map.
    pub fn principal_ideal(&self, a: Elem) -> (FiniteLattice, Vec<Elem>) {
        self.sublattice(&self.down_set(a))
            .expect("principal ideals are sublattices")
    }

    /// Direct product, elements ordered as `i * |other| + j`.
    pub fn product(&self, other: &FiniteLattice) -> FiniteLattice {
        let (n1, n2) = (self.n, other.n);
        let m = n1 * n2;
        let mut join = vec![0u32; m * m];
        let mut meet = vec![0u32; m * m];
        for a in 0..m {
            for b in 0..m {
                let (a1, a2, b1, b2) = (a / n2, a % n2, b / n2, b % n2);
                join[a * m + b] = (self.join(a1, b1) * n2 + other.join(a2, b2)) as u32;
                meet[a * m + b] = (self.meet(a1, b1) * n2 + other.meet(a2, b2)) as u32;
            }
        }
        Self::from_tables_unchecked(m, join, meet)
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> FiniteLattice {
        let n = n.max(1);
        let join: Vec<u32> = (0..n * n).map(|i| (i / n).max(i % n) as u32).collect();
        let meet: Vec<u32> = (0..n * n).map(|i| (i / n).min(i % n) as u32).collect();
        Self::from_tables_unchecked(n, join, meet)
    }

    /// The Boolean lattice `2^k`; element `i` is the subset with bitmask `i`.
    pub fn boolean(k: usize) -> FiniteLattice {
        let n = 1usize << k;
        let join: Vec<u32> = (0..n * n).map(|i| ((i / n) | (i % n)) as u32).collect();
        let meet: Vec<u32> = (0..n * n).map(|i| ((i / n) & (i % n)) as u32).collect();
        Self::from_tables_unchecked(n, join, meet)
    }

    /// `M_k`: bottom 0, atoms `1..=k`, top `k+1`.
    pub fn diamond(k: usize) -> FiniteLattice {
        let top = k + 1;
        let mut covers = Vec::new();
        for a in 1..=k {
            covers.push((0, a));
            covers.push((a, top));
        }
        if k == 0 {
            covers.push((0, 1));
        }
        Self::from_covers(k + 2, &covers).expect("M_k is a lattice")
    }

    /// The pentagon `N_5`: 0 < a(1) < b(2) < 1(4), c(3) beside the chain.
    pub fn pentagon() -> FiniteLattice {
        Self::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).expect("N_5 is a lattice")
    }

    /// Relabels through `perm` (new index `i` is old element `perm[i]`).
    pub fn relabel(&self, perm: &[Elem]) -> FiniteLattice {
        let n = self.n;
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                join[i * n + j] = inv[self.join(perm[i], perm[j])] as u32;
                meet[i * n + j] = inv[self.meet(perm[i], perm[j])] as u32;
            }
        }
        Self::from_tables_unchecked(n, join, meet)
    }

    /// Rank function: length of the longest chain from the bottom.
    pub fn heights(&self) -> Vec<usize> {
        let mut order: Vec<Elem> = self.elements().collect();
        order.sort_by_key(|&x| self.down_set(x).len());
        let mut h = vec![0usize; self.n];
        for &x in &order {
            h[x] = self
                .elements()
                .filter(|&y| self.lt(y, x))
                .map(|y| h[y] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }

    /// Boolean sublattice generated by an independent family joining to the top.
    pub fn boolean_span(&self, blocks: &[Elem]) -> Vec<Elem> {
        let nonzero: Vec<Elem> = blocks
            .iter()
            .copied()
            .filter(|&b| b != self.bottom)
            .collect();
        let mut out: Vec<Elem> = (0..(1usize << nonzero.len()))
            .map(|mask| {
                self.join_all(
                    nonzero
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &b)| b),
                )
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
