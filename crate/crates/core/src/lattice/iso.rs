//! Lattice isomorphism by backtracking with forced joins.

use super::{Elem, FiniteLattice};

/// `map[x]` is an order isomorphism `a -> b`.
pub fn is_isomorphism(a: &FiniteLattice, b: &FiniteLattice, map: &[Elem]) -> bool {
    if a.len() != b.len() || map.len() != a.len() {
        return false;
    }
    let mut seen = vec![false; b.len()];
    for &y in map {
        if y >= b.len() || std::mem::replace(&mut seen[y], true) {
            return false;
        }
    }
    a.elements()
        .all(|x| a.elements().all(|y| a.leq(x, y) == b.leq(map[x], map[y])))
}

/// Orders the elements so that, where possible, each one is the join of two
/// earlier ones; records that pair.
fn plan(l: &FiniteLattice) -> Vec<(Elem, Option<(Elem, Elem)>)> {
    let heights = l.heights();
    let mut placed = vec![false; l.len()];
    let mut out: Vec<(Elem, Option<(Elem, Elem)>)> = Vec::with_capacity(l.len());
    while out.len() < l.len() {
        let forced = l.elements().filter(|&x| !placed[x]).find_map(|x| {
            out.iter().enumerate().find_map(|(i, &(p, _))| {
                out[..i]
                    .iter()
                    .find(|&&(q, _)| l.join(p, q) == x)
                    .map(|&(q, _)| (x, (q, p)))
            })
        });
        let step = match forced {
            Some((x, pair)) => (x, Some(pair)),
            None => {
                let x = l
                    .elements()
                    .filter(|&x| !placed[x])
                    .min_by_key(|&x| (heights[x], x))
                    .unwrap();
                (x, None)
            }
        };
        placed[step.0] = true;
        out.push(step);
    }
    out
}

fn signature(l: &FiniteLattice) -> Vec<(usize, usize, usize)> {
    let h = l.heights();
    l.elements()
        .map(|x| (h[x], l.down_set(x).len(), l.up_set(x).len()))
        .collect()
}

/// An isomorphism `a -> b` if one exists; deterministic.
pub fn find_isomorphism(a: &FiniteLattice, b: &FiniteLattice) -> Option<Vec<Elem>> {
    if a.len() != b.len() {
        return None;
    }
    let (sa, sb) = (signature(a), signature(b));
    let mut ka = sa.clone();
    let mut kb = sb.clone();
    ka.sort_unstable();
    kb.sort_unstable();
    if ka != kb {
        return None;
    }
    let steps = plan(a);
    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    if extend(a, b, &sa, &sb, &steps, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &FiniteLattice,
    b: &FiniteLattice,
    sa: &[(usize, usize, usize)],
    sb: &[(usize, usize, usize)],
    steps: &[(Elem, Option<(Elem, Elem)>)],
    depth: usize,
    map: &mut [Elem],
    used: &mut [bool],
) -> bool {
    let Some(&(x, pair)) = steps.get(depth) else {
        return true;
    };
    let consistent = |y: Elem, map: &[Elem]| {
        steps[..depth]
            .iter()
            .all(|&(z, _)| a.leq(x, z) == b.leq(y, map[z]) && a.leq(z, x) == b.leq(map[z], y))
    };
    let candidates: Vec<Elem> = match pair {
        Some((p, q)) => vec![b.join(map[p], map[q])],
        None => b.elements().filter(|&y| sb[y] == sa[x]).collect(),
    };
    for y in candidates {
        if used[y] || sb[y] != sa[x] || !consistent(y, map) {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if extend(a, b, sa, sb, steps, depth + 1, map, used) {
            return true;
        }
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}

pub fn isomorphic(a: &FiniteLattice, b: &FiniteLattice) -> bool {
    find_isomorphism(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::subspace_lattice;

    #[test]
    fn relabeled_lattices_are_isomorphic() {
        let n5 = FiniteLattice::pentagon();
        let r = n5.relabel(&[0, 3, 1, 2, 4]);
        let map = find_isomorphism(&n5, &r).unwrap();
        assert!(is_isomorphism(&n5, &r, &map));
        assert!(!isomorphic(&n5, &FiniteLattice::diamond(3)));
    }

    #[test]
    fn plane_over_f2_is_m3() {
        let s = subspace_lattice(2, 2).unwrap();
        assert!(isomorphic(s.lattice(), &FiniteLattice::diamond(3)));
    }

    #[test]
    fn subspace_lattice_is_isomorphic_to_shuffled_copy() {
        let s = subspace_lattice(2, 4).unwrap().into_lattice();
        let n = s.len();
        let perm: Vec<usize> = (0..n).map(|i| (i * 29 + 7) % n).collect();
        let r = s.relabel(&perm);
        let map = find_isomorphism(&s, &r).unwrap();
        assert!(is_isomorphism(&s, &r, &map));
    }
}
