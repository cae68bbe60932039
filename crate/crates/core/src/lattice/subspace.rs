//! Subspace lattices of `F_q^n`.
//!
//! A subspace is stored as its reduced row echelon basis. Elements of a
//! materialized [`SubspaceLattice`] are sorted by dimension and then by the
//! basis rows compared lexicographically, so the zero subspace is element 0
//! and the whole space is the last element.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::{Elem, FiniteLattice, DENSE_CAP};
use crate::error::{Error, Result};
use crate::field::Gf;
use crate::linalg::{kernel_of_rref, rref, Row};

/// Largest number of subspaces materialized as a dense lattice.
pub const SUBSPACE_CAP: usize = DENSE_CAP;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    n: usize,
    rows: Vec<Row>,
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.rows.len(), &self.rows).cmp(&(other.n, other.rows.len(), &other.rows))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace {
            n,
            rows: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![0u8; n];
                r[i] = 1;
                r
            })
            .collect();
        Subspace { n, rows }
    }

    /// Span of the given vectors of length `n`.
    pub fn span(f: &Gf, n: usize, vectors: &[Vec<u8>]) -> Self {
        let mut rows: Vec<Row> = vectors.to_vec();
        debug_assert!(rows.iter().all(|r| r.len() == n));
        rref(f, &mut rows);
        Subspace { n, rows }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The reduced row echelon basis.
    pub fn basis(&self) -> &[Row] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).unwrap())
            .collect()
    }

    pub fn join(&self, f: &Gf, other: &Subspace) -> Subspace {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Subspace::span(f, self.n, &rows)
    }

    /// Orthogonal complement for the standard bilinear form.
    pub fn perp(&self, f: &Gf) -> Subspace {
        let ker = kernel_of_rref(f, &self.rows, &self.pivots(), self.n);
        Subspace::span(f, self.n, &ker)
    }

    /// Intersection, computed as `(U^⊥ + W^⊥)^⊥`.
    pub fn meet(&self, f: &Gf, other: &Subspace) -> Subspace {
        self.perp(f).join(f, &other.perp(f)).perp(f)
    }

    pub fn contains_vector(&self, f: &Gf, v: &[u8]) -> bool {
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        rref(f, &mut rows).len() == self.rows.len()
    }

    pub fn is_subspace_of(&self, f: &Gf, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains_vector(f, r))
    }

    /// Embeds into `F_q^m` (`m >= n`) by zero padding on the right.
    pub fn pad(&self, m: usize) -> Subspace {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.resize(m, 0);
                r
            })
            .collect();
        Subspace { n: m, rows }
    }
}

/// Number of subspaces of `F_q^n`, saturating.
fn subspace_count(q: usize, n: usize) -> u128 {
    // Gaussian binomials via the recurrence [n,k] = [n-1,k-1] + q^k [n-1,k]
    let mut row = vec![1u128];
    for m in 1..=n {
        let mut next = vec![1u128; m + 1];
        for k in 1..m {
            let qk = (q as u128).saturating_pow(k as u32);
            next[k] = row[k - 1].saturating_add(qk.saturating_mul(row[k]));
        }
        row = next;
    }
    row.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

fn all_subspaces(f: &Gf, n: usize) -> Vec<Subspace> {
    let q = f.order() as u8;
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let pivots: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        // free positions: (row r, column c) with c > pivot r and c not a pivot
        let slots: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| {
                ((p + 1)..n)
                    .filter(|c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let mut digits = vec![0u8; slots.len()];
        loop {
            let mut rows: Vec<Row> = pivots
                .iter()
                .map(|&p| {
                    let mut r = vec![0u8; n];
                    r[p] = 1;
                    r
                })
                .collect();
            for (&(r, c), &d) in slots.iter().zip(&digits) {
                rows[r][c] = d;
            }
            out.push(Subspace { n, rows });
            let Some(pos) = digits.iter().position(|&d| d + 1 < q) else {
                break;
            };
            digits[pos] += 1;
            for d in &mut digits[..pos] {
                *d = 0;
            }
        }
    }
    out.sort();
    out
}

/// The lattice of subspaces of `F_q^n` together with the basis of each element.
#[derive(Debug, Clone)]
pub struct SubspaceLattice {
    lattice: FiniteLattice,
    bases: Vec<Subspace>,
    index: HashMap<Subspace, Elem>,
    field: Gf,
    dim: usize,
}

impl SubspaceLattice {
    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn into_lattice(self) -> FiniteLattice {
        self.lattice
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn subspace(&self, e: Elem) -> &Subspace {
        &self.bases[e]
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.bases
    }

    pub fn index_of(&self, s: &Subspace) -> Option<Elem> {
        self.index.get(s).copied()
    }

    /// Index of the span of the given vectors.
    pub fn span_of(&self, vectors: &[Vec<u8>]) -> Elem {
        self.index[&Subspace::span(&self.field, self.dim, vectors)]
    }
}

/// Materializes the subspace lattice of `F_q^dim`.
pub fn subspace_lattice(q: usize, dim: usize) -> Result<SubspaceLattice> {
    let field = Gf::new(q)?;
    let count = subspace_count(q, dim);
    if count > SUBSPACE_CAP as u128 || dim > 31 {
        return Err(Error::TooLarge(format!(
            "F_{q}^{dim} has {count} subspaces (cap {SUBSPACE_CAP})"
        )));
    }
    let bases = all_subspaces(&field, dim);
    debug_assert_eq!(bases.len() as u128, count);
    let n = bases.len();
    let index: HashMap<Subspace, Elem> = bases
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let perp: Vec<Elem> = bases.iter().map(|s| index[&s.perp(&field)]).collect();
    let mut join = vec![0u32; n * n];
    for a in 0..n {
        for b in a..n {
            let j = index[&bases[a].join(&field, &bases[b])] as u32;
            join[a * n + b] = j;
            join[b * n + a] = j;
        }
    }
    let mut meet = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            meet[a * n + b] = perp[join[perp[a] * n + perp[b]] as usize] as u32;
        }
    }
    let lattice = FiniteLattice::from_tables_unchecked(n, join, meet);
    Ok(SubspaceLattice {
        lattice,
        bases,
        index,
        field,
        dim,
    })
}
