//! Directed systems of regular rings and the assembly of a coordinatizing
//! ring from a Banaschewski trace whose stages are already coordinatized.
//!
//! Given stage rings `R_i` with isomorphisms `ε_i: L↓a_0^i → 𝕃(R_i)`, the
//! idempotent `e_i^j` is read off `R_j = ε_j(a_0^i) ⊕ ε_j(a_i^j)`, each
//! `f_i^j: R_i → e_i^j R_j e_i^j` is the lift of `ε_j ∘ ε_i^{-1}`, and the
//! direct limit is checked at the last materialized stage.

mod lift;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::{is_isomorphism, subspace_lattice, Elem, Frame};
use crate::ring::{
    block_embedding, build_l, decomp_idempotent, is_regular, l_hom, FiniteRing, RElem, RingHom,
    RingLattice,
};
use crate::trace::{
    trace_from_chain, trivial_trace, verify_trace, DirectedPoset, StagedLattice, TraceFamily,
};

pub use lift::{corner_set, lift_corner_hom, lift_corner_homs, LiftProblem};

/// Rings `R_i` over a directed poset with homomorphisms `f_i^j` for `i <= j`.
#[derive(Debug, Clone)]
pub struct DirectedRingSystem {
    poset: DirectedPoset,
    rings: Vec<FiniteRing>,
    homs: BTreeMap<(usize, usize), RingHom>,
}

impl DirectedRingSystem {
    pub fn new(
        poset: DirectedPoset,
        rings: Vec<FiniteRing>,
        homs: BTreeMap<(usize, usize), RingHom>,
    ) -> Result<Self> {
        if rings.len() != poset.len() {
            return Err(Error::Malformed(
                "one ring per poset element is required".into(),
            ));
        }
        for (i, j) in poset.pairs() {
            let h = homs
                .get(&(i, j))
                .ok_or_else(|| Error::Malformed(format!("no homomorphism {i} -> {j}")))?;
            if h.map.len() != rings[i].len() || h.map.iter().any(|&y| y >= rings[j].len()) {
                return Err(Error::Malformed(format!(
                    "homomorphism {i} -> {j} has the wrong shape"
                )));
            }
        }
        Ok(DirectedRingSystem { poset, rings, homs })
    }

    /// A chain `R_0 → R_1 → ...` from consecutive steps.
    pub fn chain(rings: Vec<FiniteRing>, steps: Vec<RingHom>) -> Result<Self> {
        if rings.is_empty() || steps.len() + 1 != rings.len() {
            return Err(Error::Malformed(
                "a chain needs one step between consecutive rings".into(),
            ));
        }
        let mut homs = BTreeMap::new();
        for i in 0..rings.len() {
            let mut h = RingHom::identity(&rings[i]);
            homs.insert((i, i), h.clone());
            for (j, step) in steps.iter().enumerate().skip(i) {
                if step.map.len() != rings[j].len()
                    || step.map.iter().any(|&y| y >= rings[j + 1].len())
                {
                    return Err(Error::Malformed(format!("step {j} has the wrong shape")));
                }
                h = h.then(step);
                homs.insert((i, j + 1), h.clone());
            }
        }
        Self::new(DirectedPoset::chain_of(rings.len()), rings, homs)
    }

    /// `M_{n_0}(F_q) → M_{n_1}(F_q) → ...` by upper-left blocks.
    pub fn block_chain(q: usize, sizes: &[usize]) -> Result<Self> {
        let rings = sizes
            .iter()
            .map(|&n| FiniteRing::matrix_ring(q, n))
            .collect::<Result<Vec<_>>>()?;
        let steps = rings
            .windows(2)
            .map(|w| block_embedding(&w[0], &w[1]))
            .collect::<Result<Vec<_>>>()?;
        Self::chain(rings, steps)
    }

    pub fn poset(&self) -> &DirectedPoset {
        &self.poset
    }

    pub fn rings(&self) -> &[FiniteRing] {
        &self.rings
    }

    pub fn ring(&self, i: usize) -> &FiniteRing {
        &self.rings[i]
    }

    pub fn hom(&self, i: usize, j: usize) -> Option<&RingHom> {
        self.homs.get(&(i, j))
    }

    pub fn homs(&self) -> &BTreeMap<(usize, usize), RingHom> {
        &self.homs
    }

    /// Overwrites `f_i^j`; shape is checked, coherence is not.
    pub fn replace_hom(&mut self, i: usize, j: usize, h: RingHom) -> Result<()> {
        if !self.homs.contains_key(&(i, j)) || h.map.len() != self.rings[i].len() {
            return Err(Error::Malformed(format!(
                "no homomorphism slot {i} -> {j} of that shape"
            )));
        }
        self.homs.insert((i, j), h);
        Ok(())
    }

    fn unit(&self, i: usize) -> Result<RElem> {
        self.rings[i]
            .one()
            .ok_or_else(|| Error::IncoherentSystem(format!("R_{i} is not unital")))
    }

    fn live(&self, depth: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.poset
            .pairs()
            .filter(move |&(i, j)| i <= depth && j <= depth)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemReport {
    pub stages: usize,
    pub pairs: usize,
    pub triples: usize,
}

/// Checks each stage is unital and regular, each `f_i^j` is an injective
/// homomorphism onto `e R_j e` with `e = f_i^j(1_i)`, `f_i^i = id`,
/// `f_i^k = f_j^k ∘ f_i^j`, and `e_i^k ⊴ e_j^k`, over stages `0..=depth`.
pub fn verify_system(s: &DirectedRingSystem, depth: usize) -> Result<SystemReport> {
    let incoherent = |msg: String| Error::IncoherentSystem(msg);
    let last = depth.min(s.poset.len() - 1);
    for i in 0..=last {
        s.unit(i)?;
        if !is_regular(&s.rings[i]) {
            return Err(incoherent(format!("R_{i} is not regular")));
        }
    }
    let mut pairs = 0;
    for (i, j) in s.live(last) {
        pairs += 1;
        let h = &s.homs[&(i, j)];
        if i == j {
            if *h != RingHom::identity(&s.rings[i]) {
                return Err(incoherent(format!("f_{i}^{i} is not the identity")));
            }
            continue;
        }
        let (ri, rj) = (&s.rings[i], &s.rings[j]);
        h.verify(ri, rj)
            .map_err(|e| incoherent(format!("f_{i}^{j}: {e}")))?;
        if !h.is_injective() {
            return Err(incoherent(format!("f_{i}^{j} is not injective")));
        }
        let e = h.apply(s.unit(i)?);
        if !rj.is_idempotent(e) || h.image() != corner_set(rj, e) {
            return Err(incoherent(format!(
                "the range of f_{i}^{j} is not the corner at f_{i}^{j}(1)"
            )));
        }
    }
    let mut triples = 0;
    for (i, j) in s.live(last) {
        for k in (0..=last).filter(|&k| s.poset.leq(j, k)) {
            triples += 1;
            let (ij, jk, ik) = (&s.homs[&(i, j)], &s.homs[&(j, k)], &s.homs[&(i, k)]);
            if ij.then(jk) != *ik {
                return Err(incoherent(format!(
                    "f_{i}^{k} differs from f_{j}^{k} ∘ f_{i}^{j}"
                )));
            }
            let (eik, ejk) = (ik.apply(s.unit(i)?), jk.apply(s.unit(j)?));
            if !s.rings[k].idem_leq(eik, ejk) {
                return Err(incoherent(format!("e_{i}^{k} is not below e_{j}^{k}")));
            }
        }
    }
    Ok(SystemReport {
        stages: last + 1,
        pairs,
        triples,
    })
}

/// A staged lattice with a trace, a ring system over the same poset
/// (possibly truncated), and isomorphisms `ε_i: stage(i) → 𝕃(R_i)`
/// satisfying `𝕃(f_i^j) ∘ ε_i = ε_j ∘ inject_i^j`.
#[derive(Debug, Clone)]
pub struct CoordinatizationWitness {
    pub lattice: StagedLattice,
    pub trace: TraceFamily,
    pub system: DirectedRingSystem,
    pub ring_lattices: Vec<RingLattice>,
    pub iso: Vec<Vec<Elem>>,
}

impl CoordinatizationWitness {
    pub fn new(
        lattice: StagedLattice,
        trace: TraceFamily,
        system: DirectedRingSystem,
        iso: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        let n = system.poset.len();
        if n > lattice.poset().len() || iso.len() != n {
            return Err(Error::Malformed(
                "the system and isomorphisms must cover a prefix of the stages".into(),
            ));
        }
        if (0..n).any(|i| (0..n).any(|j| system.poset.leq(i, j) != lattice.poset().leq(i, j))) {
            return Err(Error::PreconditionFailed(
                "the system and the lattice are indexed by different orders".into(),
            ));
        }
        let ring_lattices = system
            .rings
            .iter()
            .map(build_l)
            .collect::<Result<Vec<_>>>()?;
        for i in 0..n {
            if !is_isomorphism(lattice.stage(i)?, ring_lattices[i].lattice(), &iso[i]) {
                return Err(Error::PreconditionFailed(format!(
                    "ε_{i} is not an isomorphism onto 𝕃(R_{i})"
                )));
            }
        }
        for (i, j) in system.poset.pairs().filter(|&(i, j)| i != j) {
            let (ri, rj) = (&system.rings[i], &system.rings[j]);
            let lf = l_hom(
                ri,
                &ring_lattices[i],
                rj,
                &ring_lattices[j],
                &system.homs[&(i, j)],
            )?;
            for x in lattice.stage(i)?.elements() {
                if lf[iso[i][x]] != iso[j][lattice.inject(i, j, x)?] {
                    return Err(Error::PreconditionFailed(format!(
                        "𝕃(f_{i}^{j}) ∘ ε_{i} ≠ ε_{j} at {x}"
                    )));
                }
            }
        }
        Ok(CoordinatizationWitness {
            lattice,
            trace,
            system,
            ring_lattices,
            iso,
        })
    }
}

/// The idempotents `e_i^j ∈ R_j` for `i <= j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CornerData {
    pub e: BTreeMap<(usize, usize), RElem>,
}

impl CornerData {
    pub fn get(&self, i: usize, j: usize) -> Option<RElem> {
        self.e.get(&(i, j)).copied()
    }
}

struct Stages<'a> {
    host: &'a StagedLattice,
    trace: &'a TraceFamily,
    poset: &'a DirectedPoset,
    rings: &'a [FiniteRing],
    lattices: &'a [RingLattice],
    iso: &'a [Vec<Elem>],
}

/// `1_j = e + (1_j − e)` along `R_j = ε_j(a_0^i) ⊕ ε_j(a_i^j)`.
fn decompose_corners(st: &Stages<'_>) -> Result<CornerData> {
    let mut out = CornerData::default();
    for (i, j) in st.poset.pairs() {
        let (rj, lj, iso) = (&st.rings[j], &st.lattices[j], &st.iso[j]);
        let one = rj.require_one()?;
        let a = st
            .trace
            .get(i, j)
            .ok_or_else(|| Error::PreconditionFailed(format!("trace undefined at ({i},{j})")))?;
        let left = lj.ideal(rj, iso[st.host.top_in(i, j)?]);
        let right = lj.ideal(rj, iso[a]);
        let (e, _) = decomp_idempotent(rj, one, &left, &right)
            .map_err(|err| Error::DecompositionFailed(format!("({i},{j}): {err}")))?;
        out.e.insert((i, j), e);
    }
    Ok(out)
}

/// Computes every `e_i^j` by decomposition and checks `e_i^j = f_i^j(1_i)`,
/// `f_j^k(e_i^j) = e_i^k`, `e_i^k ⊴ e_j^k`, and
/// `im(f_j^k ∘ f_i^j) = e_i^k R_k e_i^k`.
pub fn corner_data(w: &CoordinatizationWitness, depth: usize) -> Result<CornerData> {
    let s = &w.system;
    let last = depth.min(s.poset.len() - 1);
    let poset = s.poset.restrict(last)?;
    let st = Stages {
        host: &w.lattice,
        trace: &w.trace,
        poset: &poset,
        rings: &s.rings,
        lattices: &w.ring_lattices,
        iso: &w.iso,
    };
    let data = decompose_corners(&st)?;
    for (i, j) in poset.pairs() {
        if s.homs[&(i, j)].apply(s.unit(i)?) != data.e[&(i, j)] {
            return Err(Error::IncoherentSystem(format!(
                "e_{i}^{j} differs from f_{i}^{j}(1)"
            )));
        }
    }
    for (i, j) in poset.pairs() {
        for k in (0..=last).filter(|&k| poset.leq(j, k)) {
            let rk = &s.rings[k];
            let (eij, eik, ejk) = (data.e[&(i, j)], data.e[&(i, k)], data.e[&(j, k)]);
            if s.homs[&(j, k)].apply(eij) != eik {
                return Err(Error::LemmaViolated(format!(
                    "f_{j}^{k}(e_{i}^{j}) ≠ e_{i}^{k}"
                )));
            }
            if !rk.idem_leq(eik, ejk) {
                return Err(Error::LemmaViolated(format!(
                    "e_{i}^{k} is not below e_{j}^{k}"
                )));
            }
            if s.homs[&(i, j)].then(&s.homs[&(j, k)]).image() != corner_set(rk, eik) {
                return Err(Error::LemmaViolated(format!(
                    "im f_{j}^{k} ∘ f_{i}^{j} is not e_{i}^{k} R_{k} e_{i}^{k}"
                )));
            }
        }
    }
    Ok(data)
}

/// The depth-truncated colimit: the largest stage `R_m` with the maps
/// `f_i^m`.
#[derive(Debug, Clone)]
pub struct LimitStage {
    pub index: usize,
    pub ring: FiniteRing,
    pub injections: BTreeMap<usize, RingHom>,
}

/// Finds the largest stage up to `depth` and checks that each `𝕃(f_i^m)`
/// maps `𝕃(R_i)` isomorphically onto `𝕃(R_m)↓f_i^m(1)R_m`.
pub fn limit_stage(s: &DirectedRingSystem, depth: usize) -> Result<LimitStage> {
    let last = depth.min(s.poset.len() - 1);
    let m = (0..=last)
        .find(|&m| (0..=last).all(|i| s.poset.leq(i, m)))
        .ok_or(Error::NoCofinalStage)?;
    let rm = &s.rings[m];
    let lm = build_l(rm)?;
    let mut injections = BTreeMap::new();
    for i in 0..=last {
        let h = s.homs[&(i, m)].clone();
        if i != m {
            let ri = &s.rings[i];
            let li = build_l(ri)?;
            let lf = l_hom(ri, &li, rm, &lm, &h)?;
            let mut image = lf.clone();
            image.sort_unstable();
            let target = lm
                .lattice()
                .down_set(lm.element_of(rm, h.apply(ri.require_one()?)));
            let embeds = li.lattice().elements().all(|a| {
                li.lattice()
                    .elements()
                    .all(|b| li.lattice().leq(a, b) == lm.lattice().leq(lf[a], lf[b]))
            });
            if image != target || !embeds {
                return Err(Error::LemmaViolated(format!(
                    "𝕃(R_{i}) is not the ideal below e_{i}^{m} in 𝕃(R_{m})"
                )));
            }
        }
        injections.insert(i, h);
    }
    Ok(LimitStage {
        index: m,
        ring: rm.clone(),
        injections,
    })
}

/// A coordinatizing ring for one stage, with `iso: stage → 𝕃(ring)`.
#[derive(Debug, Clone)]
pub struct StageRing {
    pub ring: FiniteRing,
    pub iso: Vec<Elem>,
}

/// A frame in stage `stage`, to be rechecked large in each later stage.
#[derive(Debug, Clone)]
pub struct StagedFrame {
    pub stage: usize,
    pub frame: Frame,
}

#[derive(Debug, Clone)]
pub struct CoordInput {
    pub host: StagedLattice,
    pub trace: TraceFamily,
    pub stages: Vec<Option<StageRing>>,
    pub frame: Option<StagedFrame>,
}

#[derive(Debug, Clone)]
pub struct Coordinatized {
    pub witness: CoordinatizationWitness,
    pub corners: CornerData,
    pub limit: LimitStage,
    pub system: SystemReport,
    /// Number of lifts found for each `(i, j)` with `i < j`; always 1 on
    /// success.
    pub lifts: BTreeMap<(usize, usize), usize>,
    /// Stages in which the frame was verified large.
    pub frame_stages: Vec<usize>,
}

fn check_frame(host: &StagedLattice, sf: &StagedFrame, last: usize) -> Result<Vec<usize>> {
    let i0 = sf.stage;
    if i0 > last {
        return Err(Error::StageOverflow {
            needed: i0,
            depth: last,
        });
    }
    let mut ok = Vec::new();
    for j in (0..=last).filter(|&j| host.poset().leq(i0, j)) {
        let lift = |xs: &[Elem]| {
            xs.iter()
                .map(|&x| host.inject(i0, j, x))
                .collect::<Result<Vec<_>>>()
        };
        let moved = Frame {
            a: lift(&sf.frame.a)?,
            c: lift(&sf.frame.c)?,
            large: true,
        };
        if !moved.verify(host.stage(j)?) {
            return Err(Error::PreconditionFailed(format!(
                "the frame is not a large frame in stage {j}"
            )));
        }
        ok.push(j);
    }
    Ok(ok)
}

/// Assembles the directed system `(R_i, f_i^j)` from per-stage
/// coordinatizations over `0..=depth` and checks it end to end.
pub fn coordinatize_from_trace(input: CoordInput, depth: usize) -> Result<Coordinatized> {
    let CoordInput {
        host,
        trace,
        stages,
        frame,
    } = input;
    if depth > host.depth() {
        return Err(Error::StageOverflow {
            needed: depth,
            depth: host.depth(),
        });
    }
    let poset = host.poset().restrict(depth)?;
    if let Some(v) = verify_trace(&host, &trace, depth)? {
        return Err(Error::PreconditionFailed(format!(
            "not a Banaschewski trace: {v:?}"
        )));
    }
    let frame_stages = match &frame {
        Some(sf) => check_frame(&host, sf, depth)?,
        None => Vec::new(),
    };
    let mut rings = Vec::with_capacity(depth + 1);
    let mut iso = Vec::with_capacity(depth + 1);
    for i in 0..=depth {
        let sr = stages
            .get(i)
            .cloned()
            .flatten()
            .ok_or(Error::MissingStageRing(i))?;
        rings.push(sr.ring);
        iso.push(sr.iso);
    }
    let lattices = rings.iter().map(build_l).collect::<Result<Vec<_>>>()?;
    for i in 0..=depth {
        if !is_isomorphism(host.stage(i)?, lattices[i].lattice(), &iso[i]) {
            return Err(Error::PreconditionFailed(format!(
                "ε_{i} is not an isomorphism onto 𝕃(R_{i})"
            )));
        }
    }
    let st = Stages {
        host: &host,
        trace: &trace,
        poset: &poset,
        rings: &rings,
        lattices: &lattices,
        iso: &iso,
    };
    let corners = decompose_corners(&st)?;

    let mut homs = BTreeMap::new();
    let mut lifts = BTreeMap::new();
    for (i, j) in poset.pairs() {
        if i == j {
            homs.insert((i, i), RingHom::identity(&rings[i]));
            continue;
        }
        let (li, lj) = (&lattices[i], &lattices[j]);
        let mut back = vec![0; li.len()];
        for (x, &k) in iso[i].iter().enumerate() {
            back[k] = x;
        }
        let map: Vec<Elem> = back
            .iter()
            .map(|&x| host.inject(i, j, x).map(|y| iso[j][y]))
            .collect::<Result<_>>()?;
        let problem = LiftProblem {
            source: &rings[i],
            source_lattice: li,
            target: &rings[j],
            target_lattice: lj,
            lattice_map: &map,
            corner: corners.e[&(i, j)],
        };
        let found = lift_corner_homs(problem)?;
        lifts.insert((i, j), found.len());
        match found.len() {
            0 => return Err(Error::NoLift),
            1 => homs.insert((i, j), found.into_iter().next().unwrap()),
            n => return Err(Error::MultipleLifts(n)),
        };
    }
    let system = DirectedRingSystem::new(poset, rings, homs)?;
    let report = verify_system(&system, depth)?;
    let limit = limit_stage(&system, depth)?;
    let witness = CoordinatizationWitness::new(host, trace, system, iso)?;
    let checked = corner_data(&witness, depth)?;
    if checked != corners {
        return Err(Error::LemmaViolated(
            "corner idempotents changed between assembly and check".into(),
        ));
    }
    Ok(Coordinatized {
        witness,
        corners,
        limit,
        system: report,
        lifts,
        frame_stages,
    })
}

/// `ε: subspace_lattice(q, n) → 𝕃(M_n(F_q))`, sending `U` to `xR` for a
/// matrix `x` whose columns span `U`.
pub fn subspace_isomorphism(
    q: usize,
    n: usize,
    r: &FiniteRing,
    lr: &RingLattice,
) -> Result<Vec<Elem>> {
    let sl = subspace_lattice(q, n)?;
    if r.matrix_shape().map(|(f, m)| (f.order(), m)) != Some((q, n)) {
        return Err(Error::PreconditionFailed(format!(
            "ring is not M_{n}(F_{q})"
        )));
    }
    Ok(sl
        .lattice()
        .elements()
        .map(|u| {
            let basis = sl.subspace(u).basis();
            let rows: Vec<Vec<u8>> = (0..n)
                .map(|row| {
                    (0..n)
                        .map(|col| basis.get(col).map_or(0, |b| b[row]))
                        .collect()
                })
                .collect();
            lr.element_of(r, r.encode(&rows))
        })
        .collect())
}

fn matrix_stage(q: usize, n: usize) -> Result<StageRing> {
    let ring = FiniteRing::matrix_ring(q, n)?;
    let lr = build_l(&ring)?;
    let iso = subspace_isomorphism(q, n, &ring, &lr)?;
    Ok(StageRing { ring, iso })
}

/// Finite-dimensional subspaces of `F_q^(ω)` staged at `dims` (starting at
/// 0) with the interval trace and `M_{dims[i]}(F_q)` at stage `i`.
pub fn subspace_chain_input(q: usize, dims: &[usize]) -> Result<CoordInput> {
    let host = StagedLattice::fd_subspaces(q, dims)?;
    let trace = trace_from_chain(&host)?;
    let stages = dims
        .iter()
        .map(|&d| matrix_stage(q, d).map(Some))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoordInput {
        host,
        trace,
        stages,
        frame: None,
    })
}

/// `subspace_lattice(q, n)` with its trivial trace, coordinatized by
/// `M_n(F_q)` directly.
pub fn bounded_subspace_input(q: usize, n: usize) -> Result<CoordInput> {
    let l = subspace_lattice(q, n)?.into_lattice();
    let (host, trace) = trivial_trace(&l)?;
    let zero = StageRing {
        ring: FiniteRing::matrix_ring(q, 0)?,
        iso: vec![0],
    };
    let full = matrix_stage(q, n)?;
    let members = l.principal_ideal(l.require_top()?).1;
    let iso = members.iter().map(|&x| full.iso[x]).collect();
    let stages = vec![
        Some(zero),
        Some(StageRing {
            ring: full.ring,
            iso,
        }),
    ];
    Ok(CoordInput {
        host,
        trace,
        stages,
        frame: None,
    })
}
