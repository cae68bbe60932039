//! Banaschewski functions on rings and their translation to and from
//! Banaschewski functions on `𝕃(R)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ideals::{decomp_idempotent, RingLattice};
use super::{FiniteRing, RElem};
use crate::banaschewski::BanFunction;
use crate::error::{Error, Result};

/// `x ↦ f(x)` on a subset `X` of the ring.
pub type RingBanFunction = BTreeMap<RElem, RElem>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingBanViolation {
    NotIdempotent { x: RElem, fx: RElem },
    IdealMismatch { x: RElem, fx: RElem },
    NotMonotone { x: RElem, y: RElem },
}

/// `xR = f(x)R` with `f(x)` idempotent, and `xR ⊆ yR ⟹ f(x) ⊴ f(y)`.
pub fn verify_ring_ban(
    r: &FiniteRing,
    lr: &RingLattice,
    f: &RingBanFunction,
) -> Option<RingBanViolation> {
    for (&x, &fx) in f {
        if !r.is_idempotent(fx) {
            return Some(RingBanViolation::NotIdempotent { x, fx });
        }
        if lr.element_of(r, x) != lr.element_of(r, fx) {
            return Some(RingBanViolation::IdealMismatch { x, fx });
        }
    }
    let l = lr.lattice();
    for (&x, &fx) in f {
        for (&y, &fy) in f {
            if l.leq(lr.element_of(r, x), lr.element_of(r, y)) && !r.idem_leq(fx, fy) {
                return Some(RingBanViolation::NotMonotone { x, y });
            }
        }
    }
    None
}

fn check_partial_lattice_ban(lr: &RingLattice, phi: &BanFunction) -> Result<()> {
    let l = lr.lattice();
    for (k, c) in phi.iter() {
        if k >= l.len() || c >= l.len() || !l.is_direct_sum(k, c, l.require_top()?) {
            return Err(Error::PreconditionFailed(format!(
                "φ({k}) = {c} is not a complement"
            )));
        }
        for (k2, c2) in phi.iter() {
            if l.leq(k, k2) && !l.leq(c2, c) {
                return Err(Error::PreconditionFailed(format!(
                    "φ is not antitone at ({k},{k2})"
                )));
            }
        }
    }
    Ok(())
}

/// `f(x)` is the unique element of `xR` with `1 − f(x) ∈ φ(xR)`, found by
/// decomposing `1` along `R = xR ⊕ φ(xR)`.
pub fn ring_ban_from_lattice(
    r: &FiniteRing,
    lr: &RingLattice,
    phi: &BanFunction,
    xs: &[RElem],
) -> Result<RingBanFunction> {
    let one = r.require_one()?;
    check_partial_lattice_ban(lr, phi)?;
    let mut by_ideal: BTreeMap<usize, RElem> = BTreeMap::new();
    let mut f = RingBanFunction::new();
    for &x in xs {
        if x >= r.len() {
            return Err(Error::PreconditionFailed(format!(
                "{x} is not a ring element"
            )));
        }
        let k = lr.element_of(r, x);
        let fx = match by_ideal.get(&k) {
            Some(&e) => e,
            None => {
                let c = phi
                    .get(k)
                    .ok_or_else(|| Error::PreconditionFailed(format!("φ undefined at {x}R")))?;
                let (a, _) =
                    decomp_idempotent(r, one, &lr.ideal(r, k), &lr.ideal(r, c)).map_err(|e| {
                        Error::PreconditionFailed(format!("R ≠ xR ⊕ φ(xR) at {x}: {e}"))
                    })?;
                by_ideal.insert(k, a);
                a
            }
        };
        f.insert(x, fx);
    }
    if let Some(v) = verify_ring_ban(r, lr, &f) {
        return Err(Error::LemmaViolated(format!(
            "constructed ring function fails: {v:?}"
        )));
    }
    Ok(f)
}

/// `φ(xR) = (1 − f(x))R`, with the round trip back to a ring function checked.
pub fn lattice_ban_from_ring(
    r: &FiniteRing,
    lr: &RingLattice,
    f: &RingBanFunction,
) -> Result<BanFunction> {
    let one = r.require_one()?;
    if let Some(v) = verify_ring_ban(r, lr, f) {
        return Err(Error::PreconditionFailed(format!(
            "not a ring Banaschewski function: {v:?}"
        )));
    }
    let mut phi: BTreeMap<usize, usize> = BTreeMap::new();
    for (&x, &fx) in f {
        let (k, c) = (lr.element_of(r, x), lr.element_of(r, r.sub(one, fx)));
        if phi.insert(k, c).is_some_and(|old| old != c) {
            return Err(Error::PreconditionFailed(format!(
                "(1 − f(x))R depends on the generator of {x}R"
            )));
        }
    }
    let phi = BanFunction::from_pairs(phi)?;
    check_partial_lattice_ban(lr, &phi).map_err(|e| Error::LemmaViolated(e.to_string()))?;
    let xs: Vec<RElem> = f.keys().copied().collect();
    let back = ring_ban_from_lattice(r, lr, &phi, &xs)?;
    if let Some((&x, _)) = back
        .iter()
        .find(|&(x, &fx)| lr.element_of(r, fx) != lr.element_of(r, f[x]))
    {
        return Err(Error::LemmaViolated(format!("round trip changes f({x})R")));
    }
    Ok(phi)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsViolation {
    pub x: RElem,
    pub y: Option<RElem>,
    pub property: String,
}

/// `ε(x)` idempotent with `xR = ε(x)R`, and `ε(xy) = ε(x)ε(xy)ε(x)`, over all
/// `x, y`. The reported violation is the least `x`, then the least `y`.
pub fn eps_property_check(
    r: &FiniteRing,
    lr: &RingLattice,
    eps: &[RElem],
) -> Result<Option<EpsViolation>> {
    if eps.len() != r.len() || eps.iter().any(|&e| e >= r.len()) {
        return Err(Error::Malformed(
            "ε must assign a ring element to every element".into(),
        ));
    }
    Ok((0..r.len()).into_par_iter().find_map_first(|x| {
        let ex = eps[x];
        if !r.is_idempotent(ex) {
            return Some(EpsViolation {
                x,
                y: None,
                property: "ε(x) idempotent".into(),
            });
        }
        if lr.element_of(r, x) != lr.element_of(r, ex) {
            return Some(EpsViolation {
                x,
                y: None,
                property: "xR = ε(x)R".into(),
            });
        }
        r.elements().find_map(|y| {
            let exy = eps[r.mul(x, y)];
            (r.mul(r.mul(ex, exy), ex) != exy).then(|| EpsViolation {
                x,
                y: Some(y),
                property: "ε(xy) = ε(x)ε(xy)ε(x)".into(),
            })
        })
    }))
}

/// `ε = f` for a ring Banaschewski function defined everywhere.
pub fn eps_from_ring_ban(r: &FiniteRing, f: &RingBanFunction) -> Result<Vec<RElem>> {
    r.elements()
        .map(|x| {
            f.get(&x)
                .copied()
                .ok_or_else(|| Error::PreconditionFailed(format!("f undefined at {x}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banaschewski::search_ban_function;
    use crate::ring::build_l;

    fn ring_function_for(r: &FiniteRing) -> (RingLattice, RingBanFunction) {
        let lr = build_l(r).unwrap();
        let phi = search_ban_function(lr.lattice(), false).unwrap().unwrap();
        let xs: Vec<RElem> = r.elements().collect();
        let f = ring_ban_from_lattice(r, &lr, &phi, &xs).unwrap();
        (lr, f)
    }

    #[test]
    fn field_of_two() {
        let f2 = FiniteRing::matrix_ring(2, 1).unwrap();
        let lr = build_l(&f2).unwrap();
        let id: RingBanFunction = [(0, 0), (1, 1)].into_iter().collect();
        assert_eq!(verify_ring_ban(&f2, &lr, &id), None);
        let phi = BanFunction::from_table(&[1, 0]);
        assert_eq!(ring_ban_from_lattice(&f2, &lr, &phi, &[0, 1]).unwrap(), id);
        assert_eq!(lattice_ban_from_ring(&f2, &lr, &id).unwrap(), phi);
        assert_eq!(eps_property_check(&f2, &lr, &[0, 1]).unwrap(), None);
    }

    #[test]
    fn zero_value_on_a_nonzero_ideal_fails() {
        let f2 = FiniteRing::matrix_ring(2, 1).unwrap();
        let lr = build_l(&f2).unwrap();
        let bad: RingBanFunction = [(0, 0), (1, 0)].into_iter().collect();
        assert_eq!(
            verify_ring_ban(&f2, &lr, &bad),
            Some(RingBanViolation::IdealMismatch { x: 1, fx: 0 })
        );
    }

    #[test]
    fn two_by_two_matrices() {
        let m2 = FiniteRing::matrix_ring(2, 2).unwrap();
        let (lr, f) = ring_function_for(&m2);
        assert_eq!(f.len(), 16);
        assert_eq!(verify_ring_ban(&m2, &lr, &f), None);
        let phi = lattice_ban_from_ring(&m2, &lr, &f).unwrap();
        let l = lr.lattice();
        for atom in l.atoms() {
            let c = phi.get(atom).unwrap();
            assert!(l.atoms().contains(&c) && c != atom);
        }
        let eps = eps_from_ring_ban(&m2, &f).unwrap();
        assert_eq!(eps_property_check(&m2, &lr, &eps).unwrap(), None);
        let constant = vec![m2.one().unwrap(); 16];
        let v = eps_property_check(&m2, &lr, &constant).unwrap().unwrap();
        assert_eq!((v.x, v.property.as_str()), (0, "xR = ε(x)R"));
    }

    #[test]
    fn boolean_square() {
        let f2 = FiniteRing::matrix_ring(2, 1).unwrap();
        let sq = f2.product(&f2).unwrap();
        let lr = build_l(&sq).unwrap();
        let id: RingBanFunction = (0..4).map(|e| (e, e)).collect();
        let phi = lattice_ban_from_ring(&sq, &lr, &id).unwrap();
        for e in 0..4 {
            assert_eq!(
                phi.get(lr.element_of(&sq, e)),
                Some(lr.element_of(&sq, sq.sub(3, e)))
            );
        }
        let (lr, f) = ring_function_for(&sq);
        for (&x, &fx) in &f {
            assert_eq!(lr.element_of(&sq, x), lr.element_of(&sq, fx));
        }
    }

    #[test]
    fn ring_functions_respect_equal_ideals() {
        for r in [
            FiniteRing::matrix_ring(2, 2).unwrap(),
            FiniteRing::matrix_ring(3, 1).unwrap(),
        ] {
            let (lr, f) = ring_function_for(&r);
            for (&x, &fx) in &f {
                for (&y, &fy) in &f {
                    if lr.element_of(&r, x) == lr.element_of(&r, y) {
                        assert_eq!(fx, fy);
                    }
                }
            }
        }
    }
}
