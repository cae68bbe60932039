//! JSON formats for lattices, Banaschewski functions, rings, staged lattices,
//! traces, ring systems and coordinatization inputs.
//!
//! Every `parse_*` function takes untrusted text and either returns a
//! validated object or an error; sizes are capped so that validation stays
//! polynomial and small.

use std::collections::BTreeMap;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::banaschewski::BanFunction;
use crate::coord::{
    bounded_subspace_input, subspace_chain_input, CoordInput, DirectedRingSystem, StageRing,
    StagedFrame,
};
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice, Frame};
use crate::ring::{block_embedding, build_l, l_hom, FiniteRing, RingHom, RingLattice, RingTag};
use crate::trace::{trace_from_chain, trivial_trace, DirectedPoset, StagedLattice, TraceFamily};

/// Largest lattice accepted from JSON.
pub const INPUT_LATTICE_CAP: usize = 512;
/// Largest directed poset accepted from JSON.
pub const INPUT_POSET_CAP: usize = 64;

fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeJson {
    pub n: usize,
    /// Order pairs `[lower, upper]`; covers suffice.
    pub covers: Vec<(Elem, Elem)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl LatticeJson {
    pub fn of(l: &FiniteLattice) -> Self {
        LatticeJson {
            n: l.len(),
            covers: l.covers(),
            names: None,
        }
    }

    pub fn build(&self) -> Result<FiniteLattice> {
        if self.n > INPUT_LATTICE_CAP {
            return Err(Error::TooLarge(format!(
                "{} elements exceeds the input cap {INPUT_LATTICE_CAP}",
                self.n
            )));
        }
        if let Some(names) = &self.names {
            if names.len() != self.n {
                return Err(Error::Malformed(format!(
                    "{} names for {} elements",
                    names.len(),
                    self.n
                )));
            }
        }
        FiniteLattice::from_covers(self.n, &self.covers)
    }
}

pub fn parse_lattice(text: &str) -> Result<FiniteLattice> {
    from_json::<LatticeJson>(text)?.build()
}

/// A partial function given by its domain and `[x, f(x)]` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BanFunctionJson {
    pub domain: Vec<Elem>,
    pub map: Vec<(Elem, Elem)>,
}

impl BanFunctionJson {
    pub fn of(f: &BanFunction) -> Self {
        BanFunctionJson {
            domain: f.domain(),
            map: f.iter().collect(),
        }
    }

    pub fn build(&self, l: &FiniteLattice) -> Result<BanFunction> {
        if let Some(&(x, y)) = self
            .map
            .iter()
            .find(|&&(x, y)| x >= l.len() || y >= l.len())
        {
            return Err(Error::Malformed(format!(
                "pair ({x},{y}) is outside the lattice"
            )));
        }
        let f = BanFunction::from_pairs(self.map.iter().copied())?;
        let mut domain = self.domain.clone();
        domain.sort_unstable();
        domain.dedup();
        if domain != f.domain() {
            return Err(Error::Malformed(
                "domain does not match the mapped elements".into(),
            ));
        }
        Ok(f)
    }
}

/// `{"lattice": .., "function": {"domain": [..], "map": [[x, f(x)], ..]}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeWithFunction {
    pub lattice: LatticeJson,
    pub function: BanFunctionJson,
}

pub fn parse_ban_function(text: &str) -> Result<(FiniteLattice, BanFunction)> {
    let input: LatticeWithFunction = from_json(text)?;
    let l = input.lattice.build()?;
    let f = input.function.build(&l)?;
    Ok((l, f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub q: usize,
    pub n: usize,
}

/// A ring given by tables, as `M_n(F_q)`, as `Z/n`, or as a product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingJson {
    Tables {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<usize>,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        #[serde(default)]
        one: Option<usize>,
    },
    Matrix {
        matrix: MatrixJson,
    },
    IntegersMod {
        integers_mod: usize,
    },
    Product {
        product: Vec<RingJson>,
    },
}

impl RingJson {
    /// Matrix rings are described by shape; everything else by tables.
    pub fn of(r: &FiniteRing) -> Result<Self> {
        match r.tag() {
            RingTag::Matrix { q, n } => Ok(RingJson::Matrix {
                matrix: MatrixJson { q: *q, n: *n },
            }),
            RingTag::Table => {
                let (add, mul) = r.table_view()?;
                Ok(RingJson::Tables {
                    m: Some(add.len()),
                    add,
                    mul,
                    one: r.one(),
                })
            }
        }
    }

    pub fn build(&self) -> Result<FiniteRing> {
        match self {
            RingJson::Tables { m, add, mul, one } => {
                if m.is_some_and(|m| m != add.len()) {
                    return Err(Error::Malformed(format!(
                        "m does not match the {}-row addition table",
                        add.len()
                    )));
                }
                if add.len() > crate::ring::TABLE_CAP {
                    return Err(Error::TooLarge(format!(
                        "{} elements exceeds the table cap",
                        add.len()
                    )));
                }
                FiniteRing::from_tables(add.clone(), mul.clone(), *one)
            }
            RingJson::Matrix { matrix } => FiniteRing::matrix_ring(matrix.q, matrix.n),
            RingJson::IntegersMod { integers_mod } => {
                if *integers_mod == 0 || *integers_mod > crate::ring::TABLE_CAP {
                    return Err(Error::PreconditionFailed(format!(
                        "Z/{integers_mod} is not supported"
                    )));
                }
                FiniteRing::integers_mod(*integers_mod)
            }
            RingJson::Product { product } => {
                let (first, rest) = product
                    .split_first()
                    .ok_or_else(|| Error::Malformed("empty product".into()))?;
                rest.iter()
                    .try_fold(first.build()?, |acc, r| acc.product(&r.build()?))
            }
        }
    }
}

pub fn parse_ring(text: &str) -> Result<FiniteRing> {
    from_json::<RingJson>(text)?.build()
}

/// `{"ring": .., "eps": [..]}` with `eps` optional.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingWithEps {
    pub ring: RingJson,
    #[serde(default)]
    pub eps: Option<Vec<usize>>,
}

pub fn parse_ring_with_eps(text: &str) -> Result<(FiniteRing, Option<Vec<usize>>)> {
    let input: RingWithEps = from_json(text)?;
    let r = input.ring.build()?;
    if let Some(eps) = &input.eps {
        if eps.len() != r.len() || eps.iter().any(|&e| e >= r.len()) {
            return Err(Error::Malformed(
                "ε must assign a ring element to every element".into(),
            ));
        }
    }
    Ok((r, input.eps))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetJson {
    pub n: usize,
    /// Order pairs `[i, j]` meaning `i <= j`; closed reflexively and
    /// transitively.
    pub leq: Vec<(usize, usize)>,
    pub zero: usize,
    pub chain: Vec<usize>,
}

impl PosetJson {
    pub fn of(p: &DirectedPoset) -> Self {
        let n = p.len();
        let leq = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && p.leq(i, j))
            .collect();
        PosetJson {
            n,
            leq,
            zero: p.zero(),
            chain: p.cofinal_chain().to_vec(),
        }
    }

    pub fn build(&self) -> Result<DirectedPoset> {
        let n = self.n;
        if n == 0 || n > INPUT_POSET_CAP {
            return Err(Error::Malformed(format!(
                "poset size {n} outside 1..={INPUT_POSET_CAP}"
            )));
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(i, j) in &self.leq {
            if i >= n || j >= n {
                return Err(Error::Malformed(format!(
                    "order pair ({i},{j}) out of range"
                )));
            }
            leq[i * n + j] = true;
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
        DirectedPoset::new(n, leq, self.zero, self.chain.clone())
    }
}

/// Stages materialized when a finite-subsets descriptor gives no depth.
pub const DEFAULT_SUBSETS_DEPTH: usize = 6;
/// Stages materialized when an fd-subspaces descriptor gives neither dims nor depth.
pub const DEFAULT_SUBSPACES_DEPTH: usize = 4;

fn default_subsets_depth() -> usize {
    DEFAULT_SUBSETS_DEPTH
}

/// How to build a staged lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StagedJson {
    FiniteSubsets {
        #[serde(default = "default_subsets_depth")]
        depth: usize,
    },
    FdSubspaces {
        q: usize,
        #[serde(default)]
        dims: Option<Vec<usize>>,
        #[serde(default)]
        depth: Option<usize>,
    },
    Explicit {
        stages: Vec<LatticeJson>,
        #[serde(alias = "injections")]
        steps: Vec<Vec<Elem>>,
        #[serde(default)]
        bounded: bool,
    },
    PrincipalIdeal {
        lattice: LatticeJson,
        poset: PosetJson,
        tops: Vec<Elem>,
    },
    /// A bounded lattice over `{0, 1}` with stages `{0}` and the lattice.
    Bounded { lattice: LatticeJson },
}

impl StagedJson {
    pub fn build(&self) -> Result<StagedLattice> {
        match self {
            StagedJson::FiniteSubsets { depth } => StagedLattice::finite_subsets(*depth),
            StagedJson::FdSubspaces { q, dims, depth } => match (dims, depth) {
                (Some(d), None) => StagedLattice::fd_subspaces(*q, d),
                (None, d) => {
                    StagedLattice::fd_subspaces_standard(*q, d.unwrap_or(DEFAULT_SUBSPACES_DEPTH))
                }
                _ => Err(Error::Malformed(
                    "fd-subspaces takes dims or depth, not both".into(),
                )),
            },
            StagedJson::Explicit {
                stages,
                steps,
                bounded,
            } => {
                if stages.len() > INPUT_POSET_CAP {
                    return Err(Error::TooLarge(format!(
                        "{} stages exceeds {INPUT_POSET_CAP}",
                        stages.len()
                    )));
                }
                let built = stages
                    .iter()
                    .map(LatticeJson::build)
                    .collect::<Result<Vec<_>>>()?;
                StagedLattice::explicit(built, steps.clone(), *bounded)
            }
            StagedJson::PrincipalIdeal {
                lattice,
                poset,
                tops,
            } => StagedLattice::principal_ideals(&lattice.build()?, poset.build()?, tops),
            StagedJson::Bounded { lattice } => Ok(trivial_trace(&lattice.build()?)?.0),
        }
    }

    /// The trace this host comes with when none is supplied: the interval
    /// trace of a chain, or the trivial trace of a bounded lattice.
    pub fn default_trace(&self, host: &StagedLattice) -> Result<TraceFamily> {
        match self {
            StagedJson::Bounded { lattice } => Ok(trivial_trace(&lattice.build()?)?.1),
            _ => trace_from_chain(host),
        }
    }
}

pub fn parse_staged(text: &str) -> Result<StagedLattice> {
    from_json::<StagedJson>(text)?.build()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceJson {
    /// Triples `[i, j, a_i^j]`.
    pub entries: Vec<(usize, usize, Elem)>,
    #[serde(default)]
    pub normal: bool,
}

impl TraceJson {
    pub fn of(t: &TraceFamily) -> Self {
        TraceJson {
            entries: t.entries.iter().map(|(&(i, j), &x)| (i, j, x)).collect(),
            normal: t.normal,
        }
    }

    pub fn build(&self) -> Result<TraceFamily> {
        let mut entries = BTreeMap::new();
        for &(i, j, x) in &self.entries {
            if entries.insert((i, j), x).is_some() {
                return Err(Error::Malformed(format!(
                    "trace entry ({i},{j}) given twice"
                )));
            }
        }
        Ok(TraceFamily {
            entries,
            normal: self.normal,
        })
    }
}

pub fn parse_trace(text: &str) -> Result<TraceFamily> {
    from_json::<TraceJson>(text)?.build()
}

/// `{"staged": .., "trace": ..}`, the trace defaulting as in
/// [`StagedJson::default_trace`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StagedWithTrace {
    pub staged: StagedJson,
    #[serde(default)]
    pub trace: Option<TraceJson>,
}

pub fn parse_staged_with_trace(text: &str) -> Result<(StagedLattice, TraceFamily)> {
    let input: StagedWithTrace = from_json(text)?;
    let host = input.staged.build()?;
    let trace = match &input.trace {
        Some(t) => t.build()?,
        None => input.staged.default_trace(&host)?,
    };
    Ok((host, trace))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomJson {
    pub from: usize,
    pub to: usize,
    pub map: Vec<usize>,
}

/// A chain of rings, either by upper-left blocks or by explicit steps, with
/// optional replacements of individual composites.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemJson {
    BlockChain {
        block_chain: BlockChainJson,
        #[serde(default)]
        overrides: Vec<HomJson>,
    },
    Chain {
        rings: Vec<RingJson>,
        steps: Vec<Vec<usize>>,
        #[serde(default)]
        overrides: Vec<HomJson>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockChainJson {
    pub q: usize,
    pub sizes: Vec<usize>,
}

impl SystemJson {
    pub fn build(&self) -> Result<DirectedRingSystem> {
        let (mut s, overrides) = match self {
            SystemJson::BlockChain {
                block_chain,
                overrides,
            } => {
                if block_chain.sizes.is_empty() || block_chain.sizes.len() > INPUT_POSET_CAP {
                    return Err(Error::Malformed("block chain needs 1 to 64 sizes".into()));
                }
                (
                    DirectedRingSystem::block_chain(block_chain.q, &block_chain.sizes)?,
                    overrides,
                )
            }
            SystemJson::Chain {
                rings,
                steps,
                overrides,
            } => {
                if rings.len() > INPUT_POSET_CAP {
                    return Err(Error::TooLarge(format!(
                        "{} rings exceeds {INPUT_POSET_CAP}",
                        rings.len()
                    )));
                }
                let built = rings
                    .iter()
                    .map(RingJson::build)
                    .collect::<Result<Vec<_>>>()?;
                let steps = steps.iter().map(|m| RingHom { map: m.clone() }).collect();
                (DirectedRingSystem::chain(built, steps)?, overrides)
            }
        };
        for h in overrides {
            if h.map
                .iter()
                .any(|&y| h.to >= s.rings().len() || y >= s.ring(h.to).len())
            {
                return Err(Error::Malformed(format!(
                    "override {} -> {} leaves the target ring",
                    h.from, h.to
                )));
            }
            s.replace_hom(h.from, h.to, RingHom { map: h.map.clone() })?;
        }
        Ok(s)
    }
}

pub fn parse_system(text: &str) -> Result<DirectedRingSystem> {
    from_json::<SystemJson>(text)?.build()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageRingJson {
    pub ring: RingJson,
    pub iso: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameJson {
    pub stage: usize,
    pub a: Vec<Elem>,
    #[serde(default)]
    pub c: Vec<Elem>,
}

/// Inputs of the assembly: a named family or explicit stages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordJson {
    SubspaceChain {
        subspace_chain: SubspaceChainJson,
        #[serde(default)]
        frame: Option<FrameJson>,
    },
    BoundedSubspace {
        bounded_subspace: MatrixJson,
        #[serde(default)]
        frame: Option<FrameJson>,
    },
    Explicit {
        staged: StagedJson,
        #[serde(default)]
        trace: Option<TraceJson>,
        stages: Vec<Option<StageRingJson>>,
        #[serde(default)]
        frame: Option<FrameJson>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceChainJson {
    pub q: usize,
    pub dims: Vec<usize>,
}

impl CoordJson {
    pub fn build(&self) -> Result<CoordInput> {
        let (mut input, frame) = match self {
            CoordJson::SubspaceChain {
                subspace_chain,
                frame,
            } => (
                subspace_chain_input(subspace_chain.q, &subspace_chain.dims)?,
                frame,
            ),
            CoordJson::BoundedSubspace {
                bounded_subspace,
                frame,
            } => (
                bounded_subspace_input(bounded_subspace.q, bounded_subspace.n)?,
                frame,
            ),
            CoordJson::Explicit {
                staged,
                trace,
                stages,
                frame,
            } => {
                let host = staged.build()?;
                let trace = match trace {
                    Some(t) => t.build()?,
                    None => staged.default_trace(&host)?,
                };
                let stages = stages
                    .iter()
                    .map(|s| {
                        s.as_ref()
                            .map(|s| {
                                Ok(StageRing {
                                    ring: s.ring.build()?,
                                    iso: s.iso.clone(),
                                })
                            })
                            .transpose()
                    })
                    .collect::<Result<Vec<_>>>()?;
                (
                    CoordInput {
                        host,
                        trace,
                        stages,
                        frame: None,
                    },
                    frame,
                )
            }
        };
        if let Some(f) = frame {
            let stage = input.host.stage(f.stage)?;
            if f.a.iter().chain(&f.c).any(|&x| x >= stage.len()) {
                return Err(Error::Malformed("frame element outside its stage".into()));
            }
            input.frame = Some(StagedFrame {
                stage: f.stage,
                frame: Frame {
                    a: f.a.clone(),
                    c: f.c.clone(),
                    large: true,
                },
            });
        }
        Ok(input)
    }
}

pub fn parse_coord_input(text: &str) -> Result<CoordInput> {
    from_json::<CoordJson>(text)?.build()
}

/// A lift problem: explicit rings with a map `𝕃(source) → 𝕃(target)` in
/// the element order of [`build_l`], or the upper-left block embedding
/// `M_a(F_q) → M_b(F_q)` whose induced map is used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LiftJson {
    Block {
        block: BlockLiftJson,
    },
    Explicit {
        source: RingJson,
        target: RingJson,
        lattice_map: Vec<Elem>,
        corner: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockLiftJson {
    pub q: usize,
    pub a: usize,
    pub b: usize,
}

/// Rings, their lattices, the lattice map and the corner idempotent.
pub struct LiftInput {
    pub source: FiniteRing,
    pub source_lattice: RingLattice,
    pub target: FiniteRing,
    pub target_lattice: RingLattice,
    pub lattice_map: Vec<Elem>,
    pub corner: usize,
}

impl LiftJson {
    pub fn build(&self) -> Result<LiftInput> {
        match self {
            LiftJson::Block { block } => {
                let source = FiniteRing::matrix_ring(block.q, block.a)?;
                let target = FiniteRing::matrix_ring(block.q, block.b)?;
                let (source_lattice, target_lattice) = (build_l(&source)?, build_l(&target)?);
                let incl = block_embedding(&source, &target)?;
                let lattice_map = l_hom(&source, &source_lattice, &target, &target_lattice, &incl)?;
                let corner = incl.apply(source.require_one()?);
                Ok(LiftInput {
                    source,
                    source_lattice,
                    target,
                    target_lattice,
                    lattice_map,
                    corner,
                })
            }
            LiftJson::Explicit {
                source,
                target,
                lattice_map,
                corner,
            } => {
                let (source, target) = (source.build()?, target.build()?);
                if *corner >= target.len() {
                    return Err(Error::Malformed(format!(
                        "corner {corner} is not a ring element"
                    )));
                }
                let (source_lattice, target_lattice) = (build_l(&source)?, build_l(&target)?);
                Ok(LiftInput {
                    source,
                    source_lattice,
                    target,
                    target_lattice,
                    lattice_map: lattice_map.clone(),
                    corner: *corner,
                })
            }
        }
    }
}

pub fn parse_lift(text: &str) -> Result<LiftInput> {
    from_json::<LiftJson>(text)?.build()
}
