//! Independent reference implementations used to check the library.
#![allow(dead_code)]

use std::collections::BTreeSet;

use banlat::lattice::FiniteLattice;
use banlat::ring::FiniteRing;

/// Unlabeled lattices on `n` elements, by brute force: every order relation
/// compatible with the natural labeling, with 0 least and n-1 greatest,
/// filtered for existence of joins and deduplicated by minimizing the order
/// matrix over all relabelings of the inner elements.
pub fn naive_lattice_count(n: usize) -> usize {
    if n <= 2 {
        return 1;
    }
    let inner = n - 2;
    let pairs: Vec<(usize, usize)> = (1..=inner)
        .flat_map(|i| (i + 1..=inner).map(move |j| (i, j)))
        .collect();
    let perms = permutations(inner);
    let mut seen = BTreeSet::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            leq[i][i] = true;
            leq[0][i] = true;
            leq[i][n - 1] = true;
        }
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask >> b & 1 == 1 {
                leq[i][j] = true;
            }
        }
        if !transitive(&leq) || !has_all_joins(&leq) {
            continue;
        }
        let code = perms
            .iter()
            .map(|p| {
                let mut full = vec![0; n];
                full[n - 1] = n - 1;
                for (k, &v) in p.iter().enumerate() {
                    full[k + 1] = v + 1;
                }
                let mut relabeled = vec![false; n * n];
                for a in 0..n {
                    for b in 0..n {
                        relabeled[full[a] * n + full[b]] = leq[a][b];
                    }
                }
                relabeled
            })
            .min()
            .unwrap();
        seen.insert(code);
    }
    seen.len()
}

fn transitive(leq: &[Vec<bool>]) -> bool {
    let n = leq.len();
    (0..n).all(|a| (0..n).all(|b| !leq[a][b] || (0..n).all(|c| !leq[b][c] || leq[a][c])))
}

fn has_all_joins(leq: &[Vec<bool>]) -> bool {
    let n = leq.len();
    (0..n).all(|a| {
        (0..n).all(|b| {
            let ub: Vec<usize> = (0..n).filter(|&u| leq[a][u] && leq[b][u]).collect();
            ub.iter().any(|&u| ub.iter().all(|&v| leq[u][v]))
        })
    })
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn is_complement(l: &FiniteLattice, x: usize, y: usize) -> bool {
    l.join(x, y) == l.top().unwrap() && l.meet(x, y) == l.bottom()
}

/// A total Banaschewski function given as a table: every value a complement,
/// and the map antitone.
pub fn is_ban_table(l: &FiniteLattice, f: &[usize]) -> bool {
    f.len() == l.len()
        && l.elements().all(|x| is_complement(l, x, f[x]))
        && l.elements()
            .all(|x| l.elements().all(|y| !l.leq(x, y) || l.leq(f[y], f[x])))
}

/// Whether any Banaschewski function exists, by trying every assignment of
/// complements.
pub fn exists_ban_function(l: &FiniteLattice) -> bool {
    let choices: Vec<Vec<usize>> = l
        .elements()
        .map(|x| l.elements().filter(|&y| is_complement(l, x, y)).collect())
        .collect();
    if choices.iter().any(Vec::is_empty) {
        return false;
    }
    let mut idx = vec![0; l.len()];
    loop {
        let f: Vec<usize> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        if is_ban_table(l, &f) {
            return true;
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return false;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Contains both bounds, closed under join and meet, distributive, and every
/// member has a complement inside the set.
pub fn is_boolean_subset(l: &FiniteLattice, set: &[usize]) -> bool {
    let s: BTreeSet<usize> = set.iter().copied().collect();
    let top = l.top().unwrap();
    if !s.contains(&l.bottom()) || !s.contains(&top) {
        return false;
    }
    let closed = s.iter().all(|&a| {
        s.iter()
            .all(|&b| s.contains(&l.join(a, b)) && s.contains(&l.meet(a, b)))
    });
    let distributive = s.iter().all(|&a| {
        s.iter().all(|&b| {
            s.iter()
                .all(|&c| l.meet(a, l.join(b, c)) == l.join(l.meet(a, b), l.meet(a, c)))
        })
    });
    let complemented = s.iter().all(|&a| s.iter().any(|&b| is_complement(l, a, b)));
    closed && distributive && complemented
}

/// `map` is a bijection with `a <= b` iff `map[a] <= map[b]`.
pub fn is_order_isomorphism(a: &FiniteLattice, b: &FiniteLattice, map: &[usize]) -> bool {
    let image: BTreeSet<usize> = map.iter().copied().collect();
    map.len() == a.len()
        && a.len() == b.len()
        && image.len() == b.len()
        && image.iter().all(|&y| y < b.len())
        && a.elements()
            .all(|x| a.elements().all(|y| a.leq(x, y) == b.leq(map[x], map[y])))
}

pub fn right_ideal(r: &FiniteRing, x: usize) -> BTreeSet<usize> {
    r.elements().map(|y| r.mul(x, y)).collect()
}

/// Index of the first `x` (then `y`) where `xR = ε(x)R`, idempotence of
/// `ε(x)`, or `ε(xy) = ε(x)ε(xy)ε(x)` fails.
pub fn eps_violation(r: &FiniteRing, eps: &[usize]) -> Option<(usize, Option<usize>)> {
    for x in r.elements() {
        let e = eps[x];
        if r.mul(e, e) != e || right_ideal(r, x) != right_ideal(r, e) {
            return Some((x, None));
        }
        for y in r.elements() {
            let exy = eps[r.mul(x, y)];
            if exy != r.mul(r.mul(e, exy), e) {
                return Some((x, Some(y)));
            }
        }
    }
    None
}
