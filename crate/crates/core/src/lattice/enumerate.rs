//! Isomorphism-free generation of finite lattices.
//!
//! Every lattice with `n >= 2` elements is obtained from one with `n - 1`
//! elements by adjoining a new atom `a`: removing an atom from a lattice
//! leaves a lattice. The new atom is placed below an up-set `U` of the
//! nonzero elements that contains the top and is closed under every meet that
//! is not `0`. Children are deduplicated by a canonical code.
//!
//! The canonical code is computed by ordered partition refinement on the
//! cover graph, seeded with down-set and up-set sizes, followed by
//! individualization of the first non-singleton cell. Elements with identical
//! strict up- and down-sets are interchangeable and only one of them is ever
//! individualized. Because the first seed component is the down-set size,
//! every canonical labeling is a linear extension of the order with the
//! bottom at 0 and the top at `n - 1`.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{Elem, FiniteLattice};
use crate::error::{Error, Result};

/// Default largest element count accepted by [`enumerate_lattices`].
pub const MAX_ENUMERATION: usize = 10;

/// Largest element count the bitmask representation supports.
const HARD_CAP: usize = 63;

/// Upper-triangular order bits under a canonical labeling, packed most
/// significant first so that integer order equals lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    n: usize,
    words: Vec<u64>,
}

impl CanonicalCode {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn bit(&self, k: usize) -> bool {
        self.words[k / 64] >> (63 - k % 64) & 1 == 1
    }

    /// Rebuilds the canonically labeled lattice.
    pub fn to_lattice(&self) -> FiniteLattice {
        let n = self.n;
        let mut leq = vec![false; n * n];
        let mut k = 0;
        for i in 0..n {
            leq[i * n + i] = true;
            for j in (i + 1)..n {
                leq[i * n + j] = self.bit(k);
                k += 1;
            }
        }
        FiniteLattice::from_leq(n, leq).expect("canonical codes encode lattices")
    }

    /// Hex rendering, stable across runs.
    pub fn to_hex(&self) -> String {
        let bits = self.n * self.n.saturating_sub(1) / 2;
        let mut s = format!("{}:", self.n);
        for w in &self.words {
            s.push_str(&format!("{w:016x}"));
        }
        if bits == 0 {
            s.push('0');
        }
        s
    }
}

/// Order data in bitmask form.
struct Order {
    n: usize,
    down: Vec<u64>,
    up: Vec<u64>,
    lower_covers: Vec<u64>,
    upper_covers: Vec<u64>,
}

impl Order {
    fn from_leq(n: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        let mut down = vec![0u64; n];
        let mut up = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                if leq(i, j) {
                    down[j] |= 1 << i;
                    up[i] |= 1 << j;
                }
            }
        }
        let mut lower_covers = vec![0u64; n];
        let mut upper_covers = vec![0u64; n];
        for x in 0..n {
            let strict_down = down[x] & !(1 << x);
            for y in bits(strict_down) {
                // y covers-below x iff nothing strictly between
                let between = strict_down & up[y] & !(1 << y);
                if between == 0 {
                    lower_covers[x] |= 1 << y;
                    upper_covers[y] |= 1 << x;
                }
            }
        }
        Order {
            n,
            down,
            up,
            lower_covers,
            upper_covers,
        }
    }

    fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b] >> a & 1 == 1
    }

    fn twins(&self, a: usize, b: usize) -> bool {
        let (ma, mb) = (!(1u64 << a), !(1u64 << b));
        (self.down[a] & ma) == (self.down[b] & mb) && (self.up[a] & ma) == (self.up[b] & mb)
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Replaces each key by its rank among the distinct keys.
fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap())
        .collect()
}

fn refine(ord: &Order, mut color: Vec<usize>) -> Vec<usize> {
    let mut classes = color.iter().collect::<BTreeSet<_>>().len();
    loop {
        let keys: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..ord.n)
            .map(|x| {
                let mut lo: Vec<usize> = bits(ord.lower_covers[x]).map(|y| color[y]).collect();
                let mut hi: Vec<usize> = bits(ord.upper_covers[x]).map(|y| color[y]).collect();
                lo.sort_unstable();
                hi.sort_unstable();
                (color[x], lo, hi)
            })
            .collect();
        let next = rank(&keys);
        let next_classes = next.iter().collect::<BTreeSet<_>>().len();
        color = next;
        if next_classes == classes {
            return color;
        }
        classes = next_classes;
    }
}

fn initial_colors(ord: &Order) -> Vec<usize> {
    let keys: Vec<(u32, u32, u32, u32)> = (0..ord.n)
        .map(|x| {
            (
                ord.down[x].count_ones(),
                ord.up[x].count_ones(),
                ord.lower_covers[x].count_ones(),
                ord.upper_covers[x].count_ones(),
            )
        })
        .collect();
    refine(ord, rank(&keys))
}

fn code_for(ord: &Order, color: &[usize]) -> CanonicalCode {
    let n = ord.n;
    let mut at = vec![0usize; n];
    for (x, &c) in color.iter().enumerate() {
        at[c] = x;
    }
    let total = n * n.saturating_sub(1) / 2;
    let mut words = vec![0u64; total.div_ceil(64)];
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if ord.leq(at[i], at[j]) {
                words[k / 64] |= 1 << (63 - k % 64);
            }
            k += 1;
        }
    }
    CanonicalCode { n, words }
}

fn search(ord: &Order, color: Vec<usize>, best: &mut Option<(CanonicalCode, Vec<usize>)>) {
    let n = ord.n;
    let mut size = vec![0usize; n];
    for &c in &color {
        size[c] += 1;
    }
    let Some(cell) = (0..n).find(|&c| size[c] > 1) else {
        let code = code_for(ord, &color);
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            *best = Some((code, color));
        }
        return;
    };
    let mut tried: Vec<usize> = Vec::new();
    for v in (0..n).filter(|&x| color[x] == cell) {
        if tried.iter().any(|&w| ord.twins(v, w)) {
            continue;
        }
        tried.push(v);
        let keys: Vec<(usize, bool)> = (0..n).map(|x| (color[x], x != v)).collect();
        search(ord, refine(ord, rank(&keys)), best);
    }
}

fn canonical_form(ord: &Order) -> (CanonicalCode, Vec<usize>) {
    let mut best = None;
    search(ord, initial_colors(ord), &mut best);
    best.expect("search visits at least one leaf")
}

/// Canonical code of a lattice; equal codes mean isomorphic lattices.
pub fn canonical_code(l: &FiniteLattice) -> CanonicalCode {
    assert!(
        l.len() <= HARD_CAP,
        "canonical codes support at most {HARD_CAP} elements"
    );
    canonical_form(&Order::from_leq(l.len(), |a, b| l.leq(a, b))).0
}

/// The canonical relabeling of `l` (new index `i` is old element `perm[i]`).
pub fn canonical_labeling(l: &FiniteLattice) -> Vec<Elem> {
    let (_, color) = canonical_form(&Order::from_leq(l.len(), |a, b| l.leq(a, b)));
    let mut perm = vec![0; l.len()];
    for (x, &c) in color.iter().enumerate() {
        perm[c] = x;
    }
    perm
}

/// Valid new-atom up-sets of `parent`, as bitmasks over its elements.
fn atom_upsets(parent: &FiniteLattice) -> Vec<u64> {
    let m = parent.len();
    let zero = parent.bottom();
    if m == 1 {
        return vec![0];
    }
    let mut order: Vec<Elem> = parent.elements().filter(|&x| x != zero).collect();
    let size: Vec<usize> = parent
        .elements()
        .map(|x| parent.down_set(x).len())
        .collect();
    order.sort_by_key(|&x| std::cmp::Reverse(size[x]));
    let above: Vec<u64> = parent
        .elements()
        .map(|x| {
            parent
                .elements()
                .filter(|&y| parent.lt(x, y))
                .fold(0u64, |acc, y| acc | 1 << y)
        })
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, u64)> = vec![(1, 1u64 << order[0])];
    while let Some((pos, set)) = stack.pop() {
        if pos == order.len() {
            let closed = bits(set).all(|u| {
                bits(set).all(|v| {
                    let w = parent.meet(u, v);
                    w == zero || set >> w & 1 == 1
                })
            });
            if closed {
                out.push(set);
            }
            continue;
        }
        let x = order[pos];
        stack.push((pos + 1, set));
        if above[x] & !set == 0 {
            stack.push((pos + 1, set | 1 << x));
        }
    }
    out
}

fn children(parent: &FiniteLattice) -> BTreeSet<CanonicalCode> {
    let m = parent.len();
    let n = m + 1;
    atom_upsets(parent)
        .into_iter()
        .map(|set| {
            let ord = Order::from_leq(n, |a, b| {
                if a == b {
                    true
                } else if a == m {
                    set >> b & 1 == 1
                } else if b == m {
                    a == parent.bottom()
                } else {
                    parent.leq(a, b)
                }
            });
            canonical_form(&ord).0
        })
        .collect()
}

fn next_level(parents: &[FiniteLattice]) -> Vec<FiniteLattice> {
    let merged = parents
        .par_iter()
        .map(children)
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    merged.into_iter().map(|c| c.to_lattice()).collect()
}

/// All isomorphism classes of `n`-element lattices, canonically labeled and
/// sorted by canonical code. `n` may not exceed `cap`.
pub fn enumerate_lattices_capped(n: usize, cap: usize) -> Result<Vec<FiniteLattice>> {
    Ok(lattices_up_to_capped(n, cap)?.pop().unwrap_or_default())
}

/// All isomorphism classes of `n`-element lattices (`n <= MAX_ENUMERATION`).
pub fn enumerate_lattices(n: usize) -> Result<Vec<FiniteLattice>> {
    enumerate_lattices_capped(n, MAX_ENUMERATION)
}

/// Level `k - 1` holds the `k`-element lattices, for `k` in `1..=max_n`.
pub fn lattices_up_to(max_n: usize) -> Result<Vec<Vec<FiniteLattice>>> {
    lattices_up_to_capped(max_n, MAX_ENUMERATION)
}

pub fn lattices_up_to_capped(max_n: usize, cap: usize) -> Result<Vec<Vec<FiniteLattice>>> {
    if max_n > cap || max_n > HARD_CAP {
        return Err(Error::TooLarge(format!(
            "enumeration of {max_n}-element lattices exceeds cap {cap}"
        )));
    }
    let mut levels: Vec<Vec<FiniteLattice>> = Vec::new();
    if max_n == 0 {
        return Ok(levels);
    }
    levels.push(vec![FiniteLattice::chain(1)]);
    for _ in 2..=max_n {
        let next = next_level(levels.last().unwrap());
        levels.push(next);
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = lattices_up_to(8).unwrap().iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 5, 15, 53, 222]);
    }

    #[test]
    fn canonical_code_is_relabeling_invariant() {
        let n5 = FiniteLattice::pentagon();
        let code = canonical_code(&n5);
        let shuffled = n5.relabel(&[4, 2, 0, 3, 1]);
        assert_eq!(canonical_code(&shuffled), code);
        assert_ne!(canonical_code(&FiniteLattice::diamond(3)), code);
        assert_eq!(code.to_lattice().len(), 5);
    }

    #[test]
    fn canonical_labeling_is_a_linear_extension() {
        let l = FiniteLattice::boolean(3);
        let perm = canonical_labeling(&l);
        let relabeled = l.relabel(&perm);
        assert_eq!(relabeled.bottom(), 0);
        assert_eq!(relabeled.top(), Some(7));
        for a in 0..8 {
            for b in 0..8 {
                if relabeled.leq(a, b) {
                    assert!(a <= b);
                }
            }
        }
    }

    #[test]
    fn large_diamond_is_handled_by_twin_pruning() {
        let m9 = FiniteLattice::diamond(9);
        let code = canonical_code(&m9);
        assert_eq!(
            canonical_code(&m9.relabel(&[0, 5, 3, 1, 2, 4, 6, 8, 7, 9, 10])),
            code
        );
    }

    #[test]
    fn over_cap_is_rejected() {
        assert!(matches!(enumerate_lattices(11), Err(Error::TooLarge(_))));
        assert!(enumerate_lattices(0).unwrap().is_empty());
    }
}
