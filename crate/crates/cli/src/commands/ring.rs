use banlat::banaschewski::search_ban_function;
use banlat::io::{parse_ring, parse_ring_with_eps, LatticeJson, RingJson};
use banlat::ring::{
    build_l, eps_from_ring_ban, eps_property_check, idempotents, quasi_inverse,
    ring_ban_from_lattice, verify_ring_ban, FiniteRing, RElem, RingLattice,
};
use banlat::{Error, Result};
use clap::Subcommand;
use serde_json::json;

use crate::report::Outcome;
use crate::Input;

#[derive(Subcommand, Debug)]
pub enum RingCmd {
    /// Regularity, with the least element lacking a quasi-inverse.
    Regular,
    /// All idempotents in increasing order.
    Idempotents,
    /// The lattice of principal right ideals with idempotent generators.
    Lat,
    /// A ring Banaschewski function built from one on the ideal lattice.
    Ban,
    /// Check the properties of ε; without an explicit ε, one is derived.
    EpsCheck,
    /// Describe `M_n(F_q)` for piping into other ring commands.
    Matrix {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n: usize,
    },
}

pub fn run(cmd: &RingCmd, input: &mut Input) -> (String, Result<Outcome>) {
    let (name, result) = match cmd {
        RingCmd::Regular => ("ring regular", ring_input(input).and_then(|r| regular(&r))),
        RingCmd::Idempotents => ("ring idempotents", ring_input(input).and_then(|r| idem(&r))),
        RingCmd::Lat => ("ring lat", ring_input(input).and_then(|r| lat(&r))),
        RingCmd::Ban => ("ring ban", ring_input(input).and_then(|r| ban(&r))),
        RingCmd::EpsCheck => ("ring eps-check", eps_check(input)),
        RingCmd::Matrix { q, n } => ("ring matrix", matrix(*q, *n)),
    };
    (name.to_string(), result)
}

fn ring_input(input: &mut Input) -> Result<FiniteRing> {
    parse_ring(&input.object("ring")?)
}

fn regular(r: &FiniteRing) -> Result<Outcome> {
    let witness = r.elements().find(|&x| quasi_inverse(r, x).is_none());
    Ok(Outcome::check(
        witness.is_none(),
        json!({ "size": r.len(), "witness": witness }),
    ))
}

fn idem(r: &FiniteRing) -> Result<Outcome> {
    let e = idempotents(r)?;
    Ok(Outcome::value(
        json!({ "count": e.len(), "idempotents": e }),
    ))
}

fn lat(r: &FiniteRing) -> Result<Outcome> {
    let lr = build_l(r)?;
    Ok(Outcome::value(json!({
        "lattice": LatticeJson::of(lr.lattice()),
        "generators": lr.generators(),
    })))
}

fn derive_function(r: &FiniteRing, lr: &RingLattice) -> Result<Option<Vec<RElem>>> {
    let Some(phi) = search_ban_function(lr.lattice(), false)? else {
        return Ok(None);
    };
    let xs: Vec<RElem> = r.elements().collect();
    let f = ring_ban_from_lattice(r, lr, &phi, &xs)?;
    if let Some(v) = verify_ring_ban(r, lr, &f) {
        return Err(Error::LemmaViolated(format!(
            "derived ring function fails: {v:?}"
        )));
    }
    eps_from_ring_ban(r, &f).map(Some)
}

fn ban(r: &FiniteRing) -> Result<Outcome> {
    let lr = build_l(r)?;
    Ok(match derive_function(r, &lr)? {
        Some(f) => Outcome::pass(json!({ "f": f })),
        None => Outcome::fail(json!({ "f": null })),
    })
}

fn eps_check(input: &mut Input) -> Result<Outcome> {
    let text = input.text()?.to_string();
    let (r, eps) = match parse_ring_with_eps(&text) {
        Ok(pair) => pair,
        Err(Error::Malformed(_)) if parse_ring(&text).is_ok() => (parse_ring(&text)?, None),
        Err(e) => return Err(e),
    };
    let lr = build_l(&r)?;
    let (eps, derived) = match eps {
        Some(e) => (e, false),
        None => match derive_function(&r, &lr)? {
            Some(e) => (e, true),
            None => return Ok(Outcome::fail(json!({ "eps": null, "derived": true }))),
        },
    };
    let violation = eps_property_check(&r, &lr, &eps)?;
    Ok(Outcome::check(
        violation.is_none(),
        json!({ "eps": eps, "derived": derived, "violation": violation }),
    ))
}

fn matrix(q: usize, n: usize) -> Result<Outcome> {
    let r = FiniteRing::matrix_ring(q, n)?;
    let ring = RingJson::of(&r)?;
    Ok(Outcome::value(json!({ "ring": ring, "size": r.len() })))
}
