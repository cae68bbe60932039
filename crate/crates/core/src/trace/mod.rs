//! Banaschewski traces over directed posets and the lattices they live in.
//!
//! An unbounded lattice is presented as a directed union of finite stages
//! `L↓a_0^i`, materialized eagerly up to a depth bound and then immutable.
//! Requests beyond the bound fail with `StageOverflow`.

mod ltilde;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{subspace_lattice, Elem, FiniteLattice};
use crate::ring::{build_l, idempotent_poset, FiniteRing, RingLattice};

pub use ltilde::{verify_embedding, EmbeddingReport, LTilde, LTildeElement, LTildeKind};

/// A partial order with least element, upward directed, together with a
/// cofinal chain starting at the least element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedPoset {
    n: usize,
    leq: Vec<bool>,
    zero: usize,
    chain: Vec<usize>,
}

impl DirectedPoset {
    pub fn new(n: usize, leq: Vec<bool>, zero: usize, chain: Vec<usize>) -> Result<Self> {
        if n == 0 || leq.len() != n * n || zero >= n || chain.iter().any(|&c| c >= n) {
            return Err(Error::Malformed(
                "directed poset tables do not match its size".into(),
            ));
        }
        let p = DirectedPoset {
            n,
            leq,
            zero,
            chain,
        };
        for i in 0..n {
            if !p.leq(i, i) || !p.leq(zero, i) {
                return Err(Error::PreconditionFailed(format!(
                    "order not reflexive or {zero} not least at {i}"
                )));
            }
            for j in 0..n {
                if i != j && p.leq(i, j) && p.leq(j, i) {
                    return Err(Error::PreconditionFailed(format!(
                        "order not antisymmetric at ({i},{j})"
                    )));
                }
                if p.upper_bound(i, j).is_none() {
                    return Err(Error::PreconditionFailed(format!(
                        "{i} and {j} have no upper bound"
                    )));
                }
                for k in 0..n {
                    if p.leq(i, j) && p.leq(j, k) && !p.leq(i, k) {
                        return Err(Error::PreconditionFailed(format!(
                            "order not transitive at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        if p.chain.first() != Some(&zero)
            || p.chain
                .windows(2)
                .any(|w| !(p.leq(w[0], w[1]) && w[0] != w[1]))
        {
            return Err(Error::PreconditionFailed(
                "cofinal chain must strictly increase from zero".into(),
            ));
        }
        if let Some(i) = (0..n).find(|&i| !p.chain.iter().any(|&c| p.leq(i, c))) {
            return Err(Error::PreconditionFailed(format!(
                "chain is not cofinal: nothing above {i}"
            )));
        }
        Ok(p)
    }

    /// `0 < 1 < ... < len - 1`.
    pub fn chain_of(len: usize) -> Self {
        let n = len.max(1);
        let leq = (0..n * n).map(|k| k / n <= k % n).collect();
        DirectedPoset {
            n,
            leq,
            zero: 0,
            chain: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.n + j]
    }

    pub fn cofinal_chain(&self) -> &[usize] {
        &self.chain
    }

    pub fn upper_bound(&self, i: usize, j: usize) -> Option<usize> {
        (0..self.n).find(|&k| self.leq(i, k) && self.leq(j, k))
    }

    /// Pairs `i <= j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.n)
                .filter(move |&j| self.leq(i, j))
                .map(move |j| (i, j))
        })
    }

    /// Largest element, when there is one.
    pub fn maximum(&self) -> Option<usize> {
        (0..self.n).find(|&m| (0..self.n).all(|i| self.leq(i, m)))
    }

    /// The subposet on `0..=last`, which must again be directed with the
    /// restricted chain cofinal.
    pub fn restrict(&self, last: usize) -> Result<DirectedPoset> {
        let n = (last + 1).min(self.n);
        let leq = (0..n * n).map(|k| self.leq(k / n, k % n)).collect();
        let chain = self.chain.iter().copied().filter(|&c| c < n).collect();
        DirectedPoset::new(n, leq, self.zero, chain)
    }

    fn is_standard_chain(&self) -> bool {
        self.chain.len() == self.n && self.chain.iter().enumerate().all(|(i, &c)| i == c)
    }
}

/// How a staged lattice was produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StagedKind {
    FiniteSubsets,
    FdSubspaces { q: usize, dims: Vec<usize> },
    Explicit,
    PrincipalIdeal,
}

/// Finite stages `L↓a_0^i` over a directed poset, with the inclusion of each
/// stage into every later one.
#[derive(Debug, Clone)]
pub struct StagedLattice {
    kind: StagedKind,
    poset: DirectedPoset,
    stages: Vec<FiniteLattice>,
    inject: BTreeMap<(usize, usize), Vec<Elem>>,
    bounded: bool,
}

impl StagedLattice {
    fn assemble(
        kind: StagedKind,
        poset: DirectedPoset,
        stages: Vec<FiniteLattice>,
        inject: BTreeMap<(usize, usize), Vec<Elem>>,
        bounded: bool,
    ) -> Result<Self> {
        let s = StagedLattice {
            kind,
            poset,
            stages,
            inject,
            bounded,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if self.stages.len() != self.poset.len() {
            return Err(Error::Malformed(
                "one stage per poset element is required".into(),
            ));
        }
        for (i, j) in self.poset.pairs() {
            let map = self
                .inject
                .get(&(i, j))
                .ok_or_else(|| Error::Malformed(format!("no injection {i} -> {j}")))?;
            let (a, b) = (&self.stages[i], &self.stages[j]);
            if map.len() != a.len() || map.iter().any(|&y| y >= b.len()) {
                return Err(Error::Malformed(format!(
                    "injection {i} -> {j} has the wrong shape"
                )));
            }
            if map[a.bottom()] != b.bottom() {
                return Err(Error::PreconditionFailed(format!(
                    "injection {i} -> {j} moves 0"
                )));
            }
            for x in a.elements() {
                for y in a.elements() {
                    if map[a.join(x, y)] != b.join(map[x], map[y])
                        || map[a.meet(x, y)] != b.meet(map[x], map[y])
                        || a.leq(x, y) != b.leq(map[x], map[y])
                    {
                        return Err(Error::PreconditionFailed(format!(
                            "injection {i} -> {j} is not an embedding"
                        )));
                    }
                }
            }
            let top = map[a.require_top()?];
            if b.down_set(top).len() != a.len() {
                return Err(Error::PreconditionFailed(format!(
                    "stage {i} is not a principal ideal of stage {j}"
                )));
            }
        }
        for (i, j) in self.poset.pairs() {
            for k in (0..self.poset.len()).filter(|&k| self.poset.leq(j, k)) {
                let (ij, jk, ik) = (
                    &self.inject[&(i, j)],
                    &self.inject[&(j, k)],
                    &self.inject[&(i, k)],
                );
                if ij.iter().zip(ik).any(|(&y, &z)| jk[y] != z) {
                    return Err(Error::PreconditionFailed(format!(
                        "injections {i} -> {j} -> {k} do not compose"
                    )));
                }
            }
        }
        Ok(())
    }

    fn chain_injections(
        stages: &[FiniteLattice],
        step: impl Fn(usize, usize, Elem) -> Elem,
    ) -> BTreeMap<(usize, usize), Vec<Elem>> {
        let mut inject = BTreeMap::new();
        for i in 0..stages.len() {
            for j in i..stages.len() {
                inject.insert(
                    (i, j),
                    stages[i].elements().map(|x| step(i, j, x)).collect(),
                );
            }
        }
        inject
    }

    /// Finite subsets of ω; stage `i` is the power set of `{0, ..., i-1}` with
    /// element = bitmask.
    pub fn finite_subsets(depth: usize) -> Result<Self> {
        if depth > 10 {
            return Err(Error::TooLarge(format!(
                "finite-subsets depth {depth} exceeds 10"
            )));
        }
        let stages: Vec<FiniteLattice> = (0..=depth).map(FiniteLattice::boolean).collect();
        let inject = Self::chain_injections(&stages, |_, _, x| x);
        Self::assemble(
            StagedKind::FiniteSubsets,
            DirectedPoset::chain_of(depth + 1),
            stages,
            inject,
            false,
        )
    }

    /// Finite-dimensional subspaces of `F_q^(ω)`, stage `i` being the
    /// subspaces of the span of the first `dims[i]` basis vectors.
    pub fn fd_subspaces(q: usize, dims: &[usize]) -> Result<Self> {
        if dims.is_empty() || dims[0] != 0 || dims.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::PreconditionFailed(
                "stage dimensions must start at 0 and not decrease".into(),
            ));
        }
        let spaces = dims
            .iter()
            .map(|&d| subspace_lattice(q, d))
            .collect::<Result<Vec<_>>>()?;
        let stages: Vec<FiniteLattice> = spaces.iter().map(|s| s.lattice().clone()).collect();
        let inject = Self::chain_injections(&stages, |i, j, x| {
            spaces[j]
                .index_of(&spaces[i].subspace(x).pad(dims[j]))
                .expect("padded subspace")
        });
        let kind = StagedKind::FdSubspaces {
            q,
            dims: dims.to_vec(),
        };
        Self::assemble(
            kind,
            DirectedPoset::chain_of(dims.len()),
            stages,
            inject,
            false,
        )
    }

    /// `dims[i] = i` up to `depth`.
    pub fn fd_subspaces_standard(q: usize, depth: usize) -> Result<Self> {
        Self::fd_subspaces(q, &(0..=depth).collect::<Vec<_>>())
    }

    /// A chain of explicit stages; `steps[i]` embeds stage `i` into stage `i+1`.
    pub fn explicit(
        stages: Vec<FiniteLattice>,
        steps: Vec<Vec<Elem>>,
        bounded: bool,
    ) -> Result<Self> {
        if stages.is_empty() || steps.len() + 1 != stages.len() {
            return Err(Error::Malformed(
                "explicit staging needs one step between consecutive stages".into(),
            ));
        }
        for (i, s) in steps.iter().enumerate() {
            if s.len() != stages[i].len() || s.iter().any(|&y| y >= stages[i + 1].len()) {
                return Err(Error::Malformed(format!("step {i} has the wrong shape")));
            }
        }
        let inject = Self::chain_injections(&stages, |i, j, x| (i..j).fold(x, |y, k| steps[k][y]));
        let poset = DirectedPoset::chain_of(stages.len());
        Self::assemble(StagedKind::Explicit, poset, stages, inject, bounded)
    }

    /// Stages `L↓tops[i]` of one finite lattice over `poset`.
    pub fn principal_ideals(
        l: &FiniteLattice,
        poset: DirectedPoset,
        tops: &[Elem],
    ) -> Result<Self> {
        if tops.len() != poset.len() || tops.iter().any(|&t| t >= l.len()) {
            return Err(Error::Malformed(
                "one top per poset element is required".into(),
            ));
        }
        if let Some((i, j)) = poset.pairs().find(|&(i, j)| !l.leq(tops[i], tops[j])) {
            return Err(Error::PreconditionFailed(format!(
                "tops are not monotone at ({i},{j})"
            )));
        }
        let ideals: Vec<(FiniteLattice, Vec<Elem>)> =
            tops.iter().map(|&t| l.principal_ideal(t)).collect();
        let mut inject = BTreeMap::new();
        for (i, j) in poset.pairs() {
            let map = ideals[i]
                .1
                .iter()
                .map(|x| ideals[j].1.binary_search(x).expect("ideal inclusion"))
                .collect();
            inject.insert((i, j), map);
        }
        let stages = ideals.into_iter().map(|(s, _)| s).collect();
        Self::assemble(StagedKind::PrincipalIdeal, poset, stages, inject, true)
    }

    pub fn kind(&self) -> &StagedKind {
        &self.kind
    }

    pub fn poset(&self) -> &DirectedPoset {
        &self.poset
    }

    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    /// Index of the last materialized stage.
    pub fn depth(&self) -> usize {
        self.poset.len() - 1
    }

    pub fn stage(&self, i: usize) -> Result<&FiniteLattice> {
        self.stages.get(i).ok_or(Error::StageOverflow {
            needed: i,
            depth: self.depth(),
        })
    }

    pub fn stages(&self) -> &[FiniteLattice] {
        &self.stages
    }

    /// The image of `x ∈ stage(i)` in `stage(j)`.
    pub fn inject(&self, i: usize, j: usize, x: Elem) -> Result<Elem> {
        if i.max(j) > self.depth() {
            return Err(Error::StageOverflow {
                needed: i.max(j),
                depth: self.depth(),
            });
        }
        let map = self.inject.get(&(i, j)).ok_or_else(|| {
            Error::PreconditionFailed(format!("stage {i} is not below stage {j}"))
        })?;
        map.get(x)
            .copied()
            .ok_or_else(|| Error::PreconditionFailed(format!("{x} is not in stage {i}")))
    }

    pub fn injection(&self, i: usize, j: usize) -> Option<&[Elem]> {
        self.inject.get(&(i, j)).map(Vec::as_slice)
    }

    /// `a_0^i` read in stage `j`.
    pub fn top_in(&self, i: usize, j: usize) -> Result<Elem> {
        self.inject(i, j, self.stage(i)?.require_top()?)
    }
}

/// The elements `a_i^j ∈ stage(j)` for `i <= j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TraceFamily {
    pub entries: BTreeMap<(usize, usize), Elem>,
    pub normal: bool,
}

impl TraceFamily {
    pub fn get(&self, i: usize, j: usize) -> Option<Elem> {
        self.entries.get(&(i, j)).copied()
    }

    fn at(&self, i: usize, j: usize) -> Result<Elem> {
        self.get(i, j)
            .ok_or_else(|| Error::PreconditionFailed(format!("trace undefined at ({i},{j})")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceViolation {
    Missing { i: usize, j: usize },
    NotDirectSum { i: usize, j: usize, k: usize },
    NotCofinal { i: usize },
    NotNormal { i: usize, j: usize },
}

/// Checks `a_i^k = a_i^j ⊕ a_j^k` for materialized `i <= j <= k`, cofinality
/// of the `a_0^i` among materialized stages, and normality when flagged.
pub fn verify_trace(
    host: &StagedLattice,
    t: &TraceFamily,
    depth: usize,
) -> Result<Option<TraceViolation>> {
    let p = host.poset();
    let within = depth.min(host.depth());
    let live = |i: usize| i <= within;
    for (i, j) in p.pairs().filter(|&(i, j)| live(i) && live(j)) {
        match t.get(i, j) {
            Some(x) if x < host.stage(j)?.len() => {}
            _ => return Ok(Some(TraceViolation::Missing { i, j })),
        }
    }
    for (i, j) in p.pairs().filter(|&(i, j)| live(i) && live(j)) {
        for k in (0..=within).filter(|&k| p.leq(j, k)) {
            let sk = host.stage(k)?;
            let lifted = host.inject(j, k, t.at(i, j)?)?;
            if !sk.is_direct_sum(lifted, t.at(j, k)?, t.at(i, k)?) {
                return Ok(Some(TraceViolation::NotDirectSum { i, j, k }));
            }
        }
    }
    let zero = p.zero();
    for i in 0..=within {
        let covered = (0..=within).filter(|&j| p.leq(i, j)).any(|j| {
            host.top_in(i, j)
                .and_then(|top| Ok(host.stage(j)?.leq(top, t.at(zero, j)?)))
                .unwrap_or(false)
        });
        if !covered {
            return Ok(Some(TraceViolation::NotCofinal { i }));
        }
    }
    if t.normal {
        if let Some((i, j)) = non_normal_pair(host, t, within)? {
            return Ok(Some(TraceViolation::NotNormal { i, j }));
        }
    }
    Ok(None)
}

fn non_normal_pair(
    host: &StagedLattice,
    t: &TraceFamily,
    within: usize,
) -> Result<Option<(usize, usize)>> {
    let p = host.poset();
    let zero = p.zero();
    for (i, j) in p
        .pairs()
        .filter(|&(i, j)| i != j && i <= within && j <= within)
    {
        if host.inject(i, j, t.at(zero, i)?)? == t.at(zero, j)? {
            return Ok(Some((i, j)));
        }
    }
    Ok(None)
}

/// `a_m^n = ⊕(a_i : m <= i < n)` where `a_n` is the least-index sectional
/// complement of `e_n = a_0^n` in `e_{n+1}`.
pub fn trace_from_chain(host: &StagedLattice) -> Result<TraceFamily> {
    if !host.poset().is_standard_chain() {
        return Err(Error::PreconditionFailed(
            "trace_from_chain needs the chain 0 < 1 < 2 < ...".into(),
        ));
    }
    let s0 = host.stage(0)?;
    if s0.require_top()? != s0.bottom() {
        return Err(Error::PreconditionFailed(
            "the chain must start at e_0 = 0".into(),
        ));
    }
    let depth = host.depth();
    let mut steps = Vec::with_capacity(depth);
    for n in 0..depth {
        let next = host.stage(n + 1)?;
        let e_n = host.top_in(n, n + 1)?;
        steps.push(next.sectional_complement(e_n, next.require_top()?)?);
    }
    let mut t = TraceFamily::default();
    for n in 0..=depth {
        let sn = host.stage(n)?;
        for m in 0..=n {
            let parts = (m..n)
                .map(|i| host.inject(i + 1, n, steps[i]))
                .collect::<Result<Vec<_>>>()?;
            t.entries.insert((m, n), sn.join_all(parts));
        }
    }
    t.normal = (0..depth).all(|n| {
        host.stage(n).map(FiniteLattice::len).ok() != host.stage(n + 1).map(FiniteLattice::len).ok()
    });
    if let Some(v) = verify_trace(host, &t, depth)? {
        return Err(Error::LemmaViolated(format!("interval trace fails: {v:?}")));
    }
    Ok(t)
}

/// The trace `a_0^0 = 0`, `a_0^1 = 1`, `a_1^1 = 0` of a bounded lattice over
/// `Λ = {0, 1}`.
pub fn trivial_trace(l: &FiniteLattice) -> Result<(StagedLattice, TraceFamily)> {
    let top = l.require_top()?;
    let host = StagedLattice::principal_ideals(l, DirectedPoset::chain_of(2), &[l.bottom(), top])?;
    let stage1_top = host.stage(1)?.require_top()?;
    let entries = [((0, 0), 0), ((0, 1), stage1_top), ((1, 1), 0)]
        .into_iter()
        .collect();
    let t = TraceFamily {
        entries,
        normal: l.len() > 1,
    };
    if let Some(v) = verify_trace(&host, &t, 1)? {
        return Err(Error::LemmaViolated(format!("trivial trace fails: {v:?}")));
    }
    Ok((host, t))
}

/// Output of [`trace_from_ring`].
#[derive(Debug, Clone)]
pub struct RingTrace {
    pub ring_lattice: RingLattice,
    /// `Λ` element `k` is the idempotent `idempotents[k]`.
    pub idempotents: Vec<usize>,
    pub host: StagedLattice,
    pub trace: TraceFamily,
}

/// `A_i^j = (j − i)R` over `(Idemp R, ⊴)`, staged as the principal ideals
/// `iR` of `𝕃(R)`.
pub fn trace_from_ring(r: &FiniteRing) -> Result<RingTrace> {
    let lr = build_l(r)?;
    let ip = idempotent_poset(r)?;
    let n = ip.len();
    let leq = (0..n * n).map(|k| ip.leq(k / n, k % n)).collect();
    let zero = ip.position(r.zero()).expect("0 is idempotent");
    let top = (0..n)
        .find(|&m| (0..n).all(|i| ip.leq(i, m)))
        .ok_or_else(|| Error::PreconditionFailed("Idemp R has no largest element".into()))?;
    let chain = if top == zero {
        vec![zero]
    } else {
        vec![zero, top]
    };
    let poset = DirectedPoset::new(n, leq, zero, chain)?;
    let tops: Vec<Elem> = ip.elements.iter().map(|&e| lr.element_of(r, e)).collect();
    let host = StagedLattice::principal_ideals(lr.lattice(), poset, &tops)?;
    let mut t = TraceFamily {
        entries: BTreeMap::new(),
        normal: true,
    };
    for (i, j) in host.poset().pairs() {
        let d = r.sub(ip.elements[j], ip.elements[i]);
        if !r.is_idempotent(d) {
            return Err(Error::LemmaViolated(format!(
                "j − i is not idempotent for ({i},{j})"
            )));
        }
        let elem = lr.element_of(r, d);
        let pos = lr
            .lattice()
            .down_set(tops[j])
            .binary_search(&elem)
            .map_err(|_| {
                Error::LemmaViolated(format!("(j − i)R is not inside jR for ({i},{j})"))
            })?;
        t.entries.insert((i, j), pos);
    }
    if let Some(v) = verify_trace(&host, &t, host.depth())? {
        return Err(Error::LemmaViolated(format!("ring trace fails: {v:?}")));
    }
    Ok(RingTrace {
        ring_lattice: lr,
        idempotents: ip.elements,
        host,
        trace: t,
    })
}
