//! Structural predicates with counterexample witnesses.

use serde::{Deserialize, Serialize};

use super::{neutral_ideal_generated, Elem, FiniteLattice};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    Modular,
    Distributive,
    Complemented,
    SectionallyComplemented,
    MeetSemidistributive,
    Arguesian,
    Simple,
    Boolean,
}

impl Predicate {
    pub const ALL: [Predicate; 8] = [
        Predicate::Modular,
        Predicate::Distributive,
        Predicate::Complemented,
        Predicate::SectionallyComplemented,
        Predicate::MeetSemidistributive,
        Predicate::Arguesian,
        Predicate::Simple,
        Predicate::Boolean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Modular => "modular",
            Predicate::Distributive => "distributive",
            Predicate::Complemented => "complemented",
            Predicate::SectionallyComplemented => "sectionally_complemented",
            Predicate::MeetSemidistributive => "meet_semidistributive",
            Predicate::Arguesian => "arguesian",
            Predicate::Simple => "simple",
            Predicate::Boolean => "boolean",
        }
    }

    pub fn parse(s: &str) -> Option<Predicate> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s.replace('-', "_"))
    }
}

/// Result of a predicate check. On failure `witness` holds the elements
/// violating the defining condition, in the order the condition names them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateOutcome {
    pub holds: bool,
    pub witness: Option<Vec<Elem>>,
}

impl PredicateOutcome {
    fn from_witness(w: Option<Vec<Elem>>) -> Self {
        PredicateOutcome {
            holds: w.is_none(),
            witness: w,
        }
    }
}

pub fn check_predicate(l: &FiniteLattice, which: Predicate) -> Result<PredicateOutcome> {
    let w = match which {
        Predicate::Modular => modular_witness(l),
        Predicate::Distributive => distributive_witness(l),
        Predicate::Complemented => {
            l.require_top()?;
            complemented_witness(l)
        }
        Predicate::SectionallyComplemented => sectionally_complemented_witness(l),
        Predicate::MeetSemidistributive => meet_semidistributive_witness(l),
        Predicate::Arguesian => {
            l.require_top()?;
            arguesian_witness(l)
        }
        Predicate::Simple => simple_witness(l),
        Predicate::Boolean => {
            l.require_top()?;
            distributive_witness(l).or_else(|| complemented_witness(l))
        }
    };
    Ok(PredicateOutcome::from_witness(w))
}

/// `(x, y, z)` with `z <= x` and `x ∧ (y ∨ z) != (x ∧ y) ∨ z`.
pub(crate) fn modular_witness(l: &FiniteLattice) -> Option<Vec<Elem>> {
    for x in l.elements() {
        for z in l.elements().filter(|&z| l.leq(z, x)) {
            for y in l.elements() {
                if l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), z) {
                    return Some(vec![x, y, z]);
                }
            }
        }
    }
    None
}

fn distributive_witness(l: &FiniteLattice) -> Option<Vec<Elem>> {
    for x in l.elements() {
        for y in l.elements() {
            for z in l.elements() {
                if l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z)) {
                    return Some(vec![x, y, z]);
                }
            }
        }
    }
    None
}

fn complemented_witness(l: &FiniteLattice) -> Option<Vec<Elem>> {
    let top = l.top()?;
    l.elements()
        .find(|&a| !l.elements().any(|x| l.is_direct_sum(a, x, top)))
        .map(|a| vec![a])
}

/// `(a, b)` with `a <= b` and no `x` such that `b = a ⊕ x`.
pub(crate) fn sectionally_complemented_witness(l: &FiniteLattice) -> Option<Vec<Elem>> {
    for b in l.elements() {
        for a in l.elements().filter(|&a| l.leq(a, b)) {
            if !l.elements().any(|x| l.is_direct_sum(a, x, b)) {
                return Some(vec![a, b]);
            }
        }
    }
    None
}

/// `(x, y, z)` with `x ∧ y = x ∧ z` but `x ∧ y != x ∧ (y ∨ z)`.
fn meet_semidistributive_witness(l: &FiniteLattice) -> Option<Vec<Elem>> {
    for x in l.elements() {
        for y in l.elements() {
            for z in l.elements() {
                let m = l.meet(x, y);
                if m == l.meet(x, z) && m != l.meet(x, l.join(y, z)) {
                    return Some(vec![x, y, z]);
                }
            }
        }
    }
    None
}

/// Arguesian identity in Jónsson's six-variable form (externally sourced,
/// see the module docs of [`crate::lattice`]):
///
/// `(a0∨b0) ∧ (a1∨b1) ∧ (a2∨b2) <= a0 ∨ (b0 ∧ (c ∨ b1))`
///
/// where `c = c2 ∧ (c0 ∨ c1)` and `ci = (aj ∨ ak) ∧ (bj ∨ bk)` for
/// `{i, j, k} = {0, 1, 2}`.
fn arguesian_witness(l: &FiniteLattice) -> Option<Vec<Elem>> {
    let (j, m) = (|a, b| l.join(a, b), |a, b| l.meet(a, b));
    for a0 in l.elements() {
        for b0 in l.elements() {
            let p0 = j(a0, b0);
            for a1 in l.elements() {
                for b1 in l.elements() {
                    let p01 = m(p0, j(a1, b1));
                    let c2 = m(j(a0, a1), j(b0, b1));
                    for a2 in l.elements() {
                        for b2 in l.elements() {
                            let lhs = m(p01, j(a2, b2));
                            if lhs == l.bottom() {
                                continue;
                            }
                            let c0 = m(j(a1, a2), j(b1, b2));
                            let c1 = m(j(a0, a2), j(b0, b2));
                            let c = m(c2, j(c0, c1));
                            let rhs = j(a0, m(b0, j(c, b1)));
                            if !l.leq(lhs, rhs) {
                                return Some(vec![a0, a1, a2, b0, b1, b2]);
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// A nonzero `x` whose generated neutral ideal is proper, or `[0]` for the
/// one-element lattice (which is not simple).
fn simple_witness(l: &FiniteLattice) -> Option<Vec<Elem>> {
    if l.len() < 2 {
        return Some(vec![l.bottom()]);
    }
    l.elements()
        .filter(|&x| x != l.bottom())
        .find(|&x| neutral_ideal_generated(l, x).members.len() != l.len())
        .map(|x| vec![x])
}

/// Non-modularity via an explicit pentagon: `a < b` and `c` with
/// `a ∨ c = b ∨ c` and `a ∧ c = b ∧ c`. Returns `(a, b, c)`.
pub fn has_pentagon(l: &FiniteLattice) -> Option<(Elem, Elem, Elem)> {
    for a in l.elements() {
        for b in l.elements().filter(|&b| l.lt(a, b)) {
            for c in l.elements() {
                if l.join(a, c) == l.join(b, c) && l.meet(a, c) == l.meet(b, c) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}
