use banlat::coord::{coordinatize_from_trace, lift_corner_hom, verify_system, LiftProblem};
use banlat::io::{parse_coord_input, parse_lift, parse_system};
use banlat::{Error, Result};
use clap::Subcommand;
use serde_json::json;

use crate::report::Outcome;
use crate::Input;

#[derive(Subcommand, Debug)]
pub enum CoordCmd {
    /// Check a directed system of rings and corner embeddings.
    SystemVerify {
        #[arg(long)]
        depth: Option<usize>,
    },
    /// The unique ring embedding onto a corner inducing a lattice map.
    Lift,
    /// Rebuild the ring system from stage rings and a trace.
    Assemble {
        #[arg(long)]
        depth: Option<usize>,
    },
}

pub fn run(cmd: &CoordCmd, input: &mut Input) -> (String, Result<Outcome>) {
    match cmd {
        CoordCmd::SystemVerify { depth } => {
            ("coord system-verify".into(), system_verify(*depth, input))
        }
        CoordCmd::Lift => ("coord lift".into(), lift(input)),
        CoordCmd::Assemble { depth } => ("coord assemble".into(), assemble(*depth, input)),
    }
}

fn system_verify(depth: Option<usize>, input: &mut Input) -> Result<Outcome> {
    let s = parse_system(input.text()?)?;
    let last = s.rings().len() - 1;
    let depth = depth.unwrap_or(last);
    if depth > last {
        return Err(Error::StageOverflow {
            needed: depth,
            depth: last,
        });
    }
    match verify_system(&s, depth) {
        Ok(r) => Ok(Outcome::pass(json!({
            "depth": depth,
            "stages": r.stages,
            "pairs": r.pairs,
            "triples": r.triples,
        }))),
        Err(Error::IncoherentSystem(reason)) => {
            Ok(Outcome::fail(json!({ "depth": depth, "reason": reason })))
        }
        Err(e) => Err(e),
    }
}

fn lift(input: &mut Input) -> Result<Outcome> {
    let p = parse_lift(input.text()?)?;
    let h = lift_corner_hom(LiftProblem {
        source: &p.source,
        source_lattice: &p.source_lattice,
        target: &p.target,
        target_lattice: &p.target_lattice,
        lattice_map: &p.lattice_map,
        corner: p.corner,
    })?;
    Ok(Outcome::pass(json!({ "corner": p.corner, "map": h.map })))
}

fn assemble(depth: Option<usize>, input: &mut Input) -> Result<Outcome> {
    let ci = parse_coord_input(input.text()?)?;
    let depth = depth.unwrap_or(ci.host.depth());
    let c = coordinatize_from_trace(ci, depth)?;
    let corners: Vec<(usize, usize, usize)> =
        c.corners.e.iter().map(|(&(i, j), &e)| (i, j, e)).collect();
    let lifts: Vec<(usize, usize, usize)> = c.lifts.iter().map(|(&(i, j), &n)| (i, j, n)).collect();
    let sizes: Vec<usize> = c.witness.system.rings().iter().map(|r| r.len()).collect();
    Ok(Outcome::pass(json!({
        "depth": depth,
        "ring_sizes": sizes,
        "corners": corners,
        "lifts": lifts,
        "limit": { "index": c.limit.index, "size": c.limit.ring.len() },
        "system": { "stages": c.system.stages, "pairs": c.system.pairs, "triples": c.system.triples },
        "frame_stages": c.frame_stages,
    })))
}
