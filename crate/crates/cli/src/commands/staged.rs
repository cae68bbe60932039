use banlat::io::{
    parse_ring, parse_staged_with_trace, LatticeJson, PosetJson, StagedJson, TraceJson,
};
use banlat::trace::{
    trace_from_chain, trace_from_ring, verify_embedding, verify_trace, LTilde, StagedLattice,
    TraceFamily,
};
use banlat::{Error, Result};
use clap::{Args, Subcommand, ValueEnum};
use serde_json::json;

use crate::report::Outcome;
use crate::Input;

#[derive(Subcommand, Debug)]
pub enum TraceCmd {
    /// Check the trace axioms on `{"staged": .., "trace": ..}`.
    Verify {
        #[arg(long)]
        depth: Option<usize>,
    },
    /// The interval trace of a staged chain.
    FromChain,
    /// The normal trace of `(j - i)R` over the idempotents of a ring.
    FromRing,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum HostKind {
    FiniteSubsets,
    FdSubspaces,
}

#[derive(Args, Debug)]
pub struct HostArgs {
    /// Stages to materialize.
    #[arg(long)]
    depth: Option<usize>,
    /// A built-in host; without it the host is read as JSON.
    #[arg(long, value_enum)]
    kind: Option<HostKind>,
    /// Field order for `fd-subspaces`.
    #[arg(long, default_value_t = 2)]
    q: usize,
}

#[derive(Subcommand, Debug)]
pub enum EmbedCmd {
    /// Materialize the complemented extension in canonical forms.
    Build(HostArgs),
    /// Check the embedding and the structure of the extension.
    Verify(HostArgs),
}

fn staged_input(input: &mut Input) -> Result<(StagedLattice, TraceFamily)> {
    parse_staged_with_trace(&input.fields(&["staged", "trace"])?)
}

pub fn run_trace(cmd: &TraceCmd, input: &mut Input) -> (String, Result<Outcome>) {
    match cmd {
        TraceCmd::Verify { depth } => ("trace verify".into(), verify(*depth, input)),
        TraceCmd::FromChain => ("trace from-chain".into(), from_chain(input)),
        TraceCmd::FromRing => ("trace from-ring".into(), from_ring(input)),
    }
}

fn verify(depth: Option<usize>, input: &mut Input) -> Result<Outcome> {
    let (host, trace) = staged_input(input)?;
    let depth = depth.unwrap_or(host.depth());
    if depth > host.depth() {
        return Err(Error::StageOverflow {
            needed: depth,
            depth: host.depth(),
        });
    }
    let violation = verify_trace(&host, &trace, depth)?;
    Ok(Outcome::check(
        violation.is_none(),
        json!({ "depth": depth, "violation": violation }),
    ))
}

fn from_chain(input: &mut Input) -> Result<Outcome> {
    let text = input.fields(&["staged"])?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Malformed(e.to_string()))?;
    let spec_value = value.get("staged").cloned().unwrap_or(value);
    let spec: StagedJson =
        serde_json::from_value(spec_value).map_err(|e| Error::Malformed(e.to_string()))?;
    let host = spec.build()?;
    let trace = trace_from_chain(&host)?;
    Ok(Outcome::value(
        json!({ "staged": spec, "trace": TraceJson::of(&trace) }),
    ))
}

fn from_ring(input: &mut Input) -> Result<Outcome> {
    let r = parse_ring(&input.object("ring")?)?;
    let rt = trace_from_ring(&r)?;
    let tops: Vec<usize> = rt
        .idempotents
        .iter()
        .map(|&e| rt.ring_lattice.element_of(&r, e))
        .collect();
    let staged = StagedJson::PrincipalIdeal {
        lattice: LatticeJson::of(rt.ring_lattice.lattice()),
        poset: PosetJson::of(rt.host.poset()),
        tops,
    };
    Ok(Outcome::value(json!({
        "staged": staged,
        "trace": TraceJson::of(&rt.trace),
        "idempotents": rt.idempotents,
    })))
}

fn host(args: &HostArgs, input: &mut Input) -> Result<(StagedLattice, TraceFamily, usize)> {
    let (host, trace) = match args.kind {
        Some(kind) => {
            let depth = args
                .depth
                .ok_or_else(|| Error::Malformed("--kind needs --depth".into()))?;
            let host = match kind {
                HostKind::FiniteSubsets => StagedLattice::finite_subsets(depth)?,
                HostKind::FdSubspaces => StagedLattice::fd_subspaces_standard(args.q, depth)?,
            };
            let trace = trace_from_chain(&host)?;
            (host, trace)
        }
        None => staged_input(input)?,
    };
    let depth = args.depth.unwrap_or(host.depth());
    Ok((host, trace, depth))
}

pub fn run_embed(cmd: &EmbedCmd, input: &mut Input) -> (String, Result<Outcome>) {
    match cmd {
        EmbedCmd::Build(args) => ("embed build".into(), build(args, input)),
        EmbedCmd::Verify(args) => ("embed verify".into(), embed_verify(args, input)),
    }
}

fn build(args: &HostArgs, input: &mut Input) -> Result<Outcome> {
    let (host, trace, depth) = host(args, input)?;
    let lt = LTilde::new(&host, &trace, depth)?;
    let elements = lt.materialize()?;
    Ok(Outcome::value(json!({
        "depth": depth,
        "chain": lt.chain(),
        "count": elements.len(),
        "elements": elements,
    })))
}

fn embed_verify(args: &HostArgs, input: &mut Input) -> Result<Outcome> {
    let (host, trace, depth) = host(args, input)?;
    let report = verify_embedding(&host, &trace, depth)?;
    Ok(Outcome::check(
        report.passed(),
        serde_json::to_value(report).expect("serializable"),
    ))
}
