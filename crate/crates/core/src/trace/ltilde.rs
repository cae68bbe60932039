//! The complemented extension `L̃` of an unbounded sectionally complemented
//! modular lattice carrying a Banaschewski trace.
//!
//! Every element of `L̃` is either `ε(x) = [x | j → ∞]` or
//! `ε_i(x) = [x ∨ a_i^j | j → ∞]` with `x ≤ a_0^i`, so elements are kept as
//! exact canonical forms `Fin(i, x)` and `Tail(i, x)` instead of classes
//! modulo a filter. Stages are read along the cofinal chain of the poset.
//!
//! `Fin(i, x)` is canonical when `i` is the least chain stage containing `x`.
//! `Tail(j, y)` is canonical when `j` is the least chain stage `i` with
//! `a_i^j ≤ y` and `(y ∧ a_0^i) ∨ a_i^j = y`, the value being `y ∧ a_0^i`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{verify_trace, StagedKind, StagedLattice, TraceFamily};
use crate::error::{Error, Result};
use crate::lattice::{check_predicate, Elem, FiniteLattice, Predicate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LTildeKind {
    Fin,
    Tail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LTildeElement {
    pub kind: LTildeKind,
    pub stage: usize,
    pub value: Elem,
}

impl LTildeElement {
    pub fn fin(stage: usize, value: Elem) -> Self {
        LTildeElement {
            kind: LTildeKind::Fin,
            stage,
            value,
        }
    }

    pub fn tail(stage: usize, value: Elem) -> Self {
        LTildeElement {
            kind: LTildeKind::Tail,
            stage,
            value,
        }
    }
}

/// Arithmetic in `L̃` over the chain stages up to a depth.
pub struct LTilde<'a> {
    host: &'a StagedLattice,
    trace: &'a TraceFamily,
    chain: Vec<usize>,
    position: HashMap<usize, usize>,
    preimage: BTreeMap<(usize, usize), Vec<Option<Elem>>>,
}

impl<'a> LTilde<'a> {
    pub fn new(host: &'a StagedLattice, trace: &'a TraceFamily, depth: usize) -> Result<Self> {
        let full = host.poset().cofinal_chain();
        if depth >= full.len() {
            return Err(Error::StageOverflow {
                needed: depth,
                depth: full.len() - 1,
            });
        }
        let chain = full[..=depth].to_vec();
        let position = chain.iter().enumerate().map(|(p, &c)| (c, p)).collect();
        let mut preimage = BTreeMap::new();
        for (p, &i) in chain.iter().enumerate() {
            for &j in &chain[p..] {
                let mut back = vec![None; host.stage(j)?.len()];
                for x in host.stage(i)?.elements() {
                    back[host.inject(i, j, x)?] = Some(x);
                }
                preimage.insert((i, j), back);
            }
        }
        for (p, &i) in chain.iter().enumerate() {
            for &j in &chain[p..] {
                if trace.get(i, j).is_none() {
                    return Err(Error::PreconditionFailed(format!(
                        "trace undefined at ({i},{j})"
                    )));
                }
            }
        }
        Ok(LTilde {
            host,
            trace,
            chain,
            position,
            preimage,
        })
    }

    pub fn chain(&self) -> &[usize] {
        &self.chain
    }

    fn pos(&self, stage: usize) -> Result<usize> {
        self.position
            .get(&stage)
            .copied()
            .ok_or(Error::StageOverflow {
                needed: stage,
                depth: *self.chain.last().unwrap(),
            })
    }

    fn check(&self, e: LTildeElement) -> Result<()> {
        self.pos(e.stage)?;
        if e.value >= self.host.stage(e.stage)?.len() {
            return Err(Error::Malformed(format!(
                "{} is not an element of stage {}",
                e.value, e.stage
            )));
        }
        Ok(())
    }

    /// `e` written at the later chain stage `j`, not canonicalized.
    fn lift(&self, e: LTildeElement, j: usize) -> Result<Elem> {
        let x = self.host.inject(e.stage, j, e.value)?;
        Ok(match e.kind {
            LTildeKind::Fin => x,
            LTildeKind::Tail => self
                .host
                .stage(j)?
                .join(x, self.trace.get(e.stage, j).expect("checked in new")),
        })
    }

    pub fn canonicalize(&self, e: LTildeElement) -> Result<LTildeElement> {
        self.check(e)?;
        let j = e.stage;
        let sj = self.host.stage(j)?;
        for &i in &self.chain[..=self.pos(j)?] {
            let back = &self.preimage[&(i, j)];
            match e.kind {
                LTildeKind::Fin => {
                    if let Some(x) = back[e.value] {
                        return Ok(LTildeElement::fin(i, x));
                    }
                }
                LTildeKind::Tail => {
                    let a = self.trace.get(i, j).expect("checked in new");
                    let low = sj.meet(e.value, self.host.top_in(i, j)?);
                    if sj.leq(a, e.value) && sj.join(low, a) == e.value {
                        return Ok(LTildeElement::tail(i, back[low].expect("below a_0^i")));
                    }
                }
            }
        }
        Err(Error::LemmaViolated(format!(
            "{e:?} has no canonical stage"
        )))
    }

    fn common(&self, a: LTildeElement, b: LTildeElement) -> Result<(usize, Elem, Elem)> {
        self.check(a)?;
        self.check(b)?;
        let j = self.chain[self.pos(a.stage)?.max(self.pos(b.stage)?)];
        Ok((j, self.lift(a, j)?, self.lift(b, j)?))
    }

    pub fn join(&self, a: LTildeElement, b: LTildeElement) -> Result<LTildeElement> {
        let (j, x, y) = self.common(a, b)?;
        let v = self.host.stage(j)?.join(x, y);
        let kind = if a.kind == LTildeKind::Fin && b.kind == LTildeKind::Fin {
            LTildeKind::Fin
        } else {
            LTildeKind::Tail
        };
        self.canonicalize(LTildeElement {
            kind,
            stage: j,
            value: v,
        })
    }

    pub fn meet(&self, a: LTildeElement, b: LTildeElement) -> Result<LTildeElement> {
        let (j, x, y) = self.common(a, b)?;
        let v = self.host.stage(j)?.meet(x, y);
        let kind = if a.kind == LTildeKind::Tail && b.kind == LTildeKind::Tail {
            LTildeKind::Tail
        } else {
            LTildeKind::Fin
        };
        self.canonicalize(LTildeElement {
            kind,
            stage: j,
            value: v,
        })
    }

    pub fn leq(&self, a: LTildeElement, b: LTildeElement) -> Result<bool> {
        Ok(self.meet(a, b)? == self.canonicalize(a)?)
    }

    /// `ε(0)`.
    pub fn zero(&self) -> LTildeElement {
        LTildeElement::fin(self.chain[0], self.host.stages()[self.chain[0]].bottom())
    }

    /// `ε_0(0)`.
    pub fn unit(&self) -> LTildeElement {
        LTildeElement::tail(self.chain[0], self.host.stages()[self.chain[0]].bottom())
    }

    /// `Fin(i, x) ↦ Tail(i, y)` and `Tail(i, x) ↦ Fin(i, y)` where
    /// `x ⊕ y = a_0^i`.
    pub fn complement(&self, e: LTildeElement) -> Result<LTildeElement> {
        let e = self.canonicalize(e)?;
        let s = self.host.stage(e.stage)?;
        let y = s.sectional_complement(e.value, s.require_top()?)?;
        let kind = match e.kind {
            LTildeKind::Fin => LTildeKind::Tail,
            LTildeKind::Tail => LTildeKind::Fin,
        };
        let c = self.canonicalize(LTildeElement {
            kind,
            stage: e.stage,
            value: y,
        })?;
        if self.join(e, c)? != self.unit() || self.meet(e, c)? != self.zero() {
            return Err(Error::LemmaViolated(format!(
                "{c:?} is not a complement of {e:?}"
            )));
        }
        Ok(c)
    }

    /// Every canonical element whose stage lies on the chain prefix.
    pub fn materialize(&self) -> Result<Vec<LTildeElement>> {
        let last = *self.chain.last().unwrap();
        let mut out = Vec::new();
        for x in self.host.stage(last)?.elements() {
            out.push(self.canonicalize(LTildeElement::fin(last, x))?);
        }
        for &i in &self.chain {
            for x in self.host.stage(i)?.elements() {
                out.push(self.canonicalize(LTildeElement::tail(i, x))?);
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub host: StagedKind,
    pub depth: usize,
    pub bounded: bool,
    pub elements: usize,
    pub finite_part: usize,
    pub checks: Vec<CheckLine>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Materialized {
    elems: Vec<LTildeElement>,
    index: HashMap<LTildeElement, usize>,
    lattice: FiniteLattice,
}

fn materialize_lattice(lt: &LTilde<'_>) -> Result<(Materialized, Vec<String>)> {
    let elems = lt.materialize()?;
    let n = elems.len();
    let index: HashMap<LTildeElement, usize> =
        elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let rows: Vec<(Vec<u32>, Vec<u32>)> = elems
        .par_iter()
        .map(|&a| -> Result<(Vec<u32>, Vec<u32>)> {
            let mut j = Vec::with_capacity(n);
            let mut m = Vec::with_capacity(n);
            for &b in &elems {
                let (x, y) = (lt.join(a, b)?, lt.meet(a, b)?);
                let missing =
                    || Error::ViolationFound(format!("{a:?} and {b:?} leave the materialized set"));
                j.push(*index.get(&x).ok_or_else(missing)? as u32);
                m.push(*index.get(&y).ok_or_else(missing)? as u32);
            }
            Ok((j, m))
        })
        .collect::<Result<_>>()?;
    let join: Vec<u32> = rows.iter().flat_map(|r| r.0.iter().copied()).collect();
    let meet: Vec<u32> = rows.iter().flat_map(|r| r.1.iter().copied()).collect();
    let mut problems = Vec::new();
    let at = |t: &[u32], a: usize, b: usize| t[a * n + b] as usize;
    'laws: for a in 0..n {
        for b in 0..n {
            if at(&join, a, b) != at(&join, b, a) || at(&meet, a, b) != at(&meet, b, a) {
                problems.push(format!("operations not commutative at ({a},{b})"));
                break 'laws;
            }
            if at(&join, a, at(&meet, a, b)) != a || at(&meet, a, at(&join, a, b)) != a {
                problems.push(format!("absorption fails at ({a},{b})"));
                break 'laws;
            }
            for c in 0..n {
                if at(&join, at(&join, a, b), c) != at(&join, a, at(&join, b, c))
                    || at(&meet, at(&meet, a, b), c) != at(&meet, a, at(&meet, b, c))
                {
                    problems.push(format!("operations not associative at ({a},{b},{c})"));
                    break 'laws;
                }
            }
        }
    }
    if !problems.is_empty() {
        return Err(Error::ViolationFound(problems.join("; ")));
    }
    let lattice = FiniteLattice::from_join_table(n, join)?;
    if (0..n).any(|a| (0..n).any(|b| lattice.meet(a, b) != at(&meet, a, b))) {
        problems.push("meet disagrees with the order induced by join".into());
    }
    Ok((
        Materialized {
            elems,
            index,
            lattice,
        },
        problems,
    ))
}

/// Checks, on the materialization of `L̃` up to `depth`, that `ε` is a
/// 0-lattice embedding onto an ideal, that no tail element is perspective to
/// a finite one, that every element is complemented, that modularity holds,
/// and that distributivity carries over from distributive stages. A bounded
/// host is handled by its trivial trace instead.
pub fn verify_embedding(
    host: &StagedLattice,
    trace: &TraceFamily,
    depth: usize,
) -> Result<EmbeddingReport> {
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(CheckLine {
            name: name.into(),
            passed,
            detail,
        })
    };
    let trace_issue = verify_trace(host, trace, depth)?;
    let detail = trace_issue
        .as_ref()
        .map(|v| format!("{v:?}"))
        .unwrap_or_default();
    push("trace", trace_issue.is_none(), detail);
    if host.is_bounded() {
        let report = EmbeddingReport {
            host: host.kind().clone(),
            depth,
            bounded: true,
            elements: 0,
            finite_part: 0,
            checks,
        };
        return finish(report);
    }
    let lt = LTilde::new(host, trace, depth)?;
    let (mat, problems) = materialize_lattice(&lt)?;
    push(
        "lattice operations",
        problems.is_empty(),
        problems.join("; "),
    );
    let (l, elems, index) = (&mat.lattice, &mat.elems, &mat.index);
    let idx = |e: LTildeElement| index[&e];

    let mut canon = Vec::new();
    for &e in elems {
        if lt.canonicalize(e)? != e {
            canon.push(format!("{e:?} is not a fixed point"));
        }
    }
    for (p, &i) in lt.chain().iter().enumerate() {
        for &j in &lt.chain()[p..] {
            let a = trace.get(i, j).expect("checked");
            for x in host.stage(i)?.elements() {
                let lifted = host.stage(j)?.join(host.inject(i, j, x)?, a);
                if lt.canonicalize(LTildeElement::tail(i, x))?
                    != lt.canonicalize(LTildeElement::tail(j, lifted))?
                {
                    canon.push(format!("Tail({i},{x}) and Tail({j},{lifted}) differ"));
                }
            }
        }
    }
    push("canonical forms", canon.is_empty(), canon.join("; "));

    let last = *lt.chain().last().unwrap();
    let sl = host.stage(last)?;
    let fin = |x: Elem| lt.canonicalize(LTildeElement::fin(last, x));
    let fins: Vec<LTildeElement> = sl.elements().map(fin).collect::<Result<_>>()?;
    let mut emb = Vec::new();
    let mut distinct = fins.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != fins.len() {
        emb.push("ε is not injective".to_string());
    }
    if idx(fins[sl.bottom()]) != l.bottom() {
        emb.push("ε(0) is not the least element".to_string());
    }
    for x in sl.elements() {
        for y in sl.elements() {
            if idx(fins[sl.join(x, y)]) != l.join(idx(fins[x]), idx(fins[y]))
                || idx(fins[sl.meet(x, y)]) != l.meet(idx(fins[x]), idx(fins[y]))
            {
                emb.push(format!("ε does not preserve operations at ({x},{y})"));
            }
        }
    }
    push("ε is a 0-lattice embedding", emb.is_empty(), emb.join("; "));

    let is_fin: Vec<bool> = elems.iter().map(|e| e.kind == LTildeKind::Fin).collect();
    let mut ideal = Vec::new();
    for a in l.elements().filter(|&a| is_fin[a]) {
        if let Some(b) = l.down_set(a).into_iter().find(|&b| !is_fin[b]) {
            ideal.push(format!("{:?} lies below {:?}", elems[b], elems[a]));
        }
        if let Some(b) = l.elements().find(|&b| is_fin[b] && !is_fin[l.join(a, b)]) {
            ideal.push(format!("{:?} ∨ {:?} leaves im ε", elems[a], elems[b]));
        }
    }
    push("im ε is an ideal", ideal.is_empty(), ideal.join("; "));

    let tails: Vec<usize> = l.elements().filter(|&a| !is_fin[a]).collect();
    let finite: Vec<usize> = l.elements().filter(|&a| is_fin[a]).collect();
    let cross = tails.par_iter().find_map_first(|&t| {
        finite.iter().find_map(|&f| {
            l.elements()
                .find(|&z| l.disjoint(t, z) && l.disjoint(f, z) && l.join(t, z) == l.join(f, z))
                .map(|z| format!("{:?} ~ {:?} via {:?}", elems[t], elems[f], elems[z]))
        })
    });
    push(
        "no tail element is perspective to a finite one",
        cross.is_none(),
        cross.unwrap_or_default(),
    );

    let mut comp = Vec::new();
    for &e in elems {
        if let Err(err) = lt.complement(e) {
            comp.push(format!("{e:?}: {err}"));
        }
    }
    if idx(lt.canonicalize(lt.unit())?) != l.require_top()? {
        comp.push("ε_0(0) is not the top".into());
    }
    push(
        "every element is complemented",
        comp.is_empty(),
        comp.join("; "),
    );

    push("modular", l.is_modular(), String::new());
    let host_distributive = host
        .stages()
        .iter()
        .take(last + 1)
        .map(|s| check_predicate(s, Predicate::Distributive).map(|o| o.holds))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|d| d);
    if host_distributive {
        let d = check_predicate(l, Predicate::Distributive)?;
        push(
            "distributive like the host",
            d.holds,
            format!("{:?}", d.witness),
        );
    }

    let report = EmbeddingReport {
        host: host.kind().clone(),
        depth,
        bounded: false,
        elements: l.len(),
        finite_part: finite.len(),
        checks,
    };
    finish(report)
}

fn finish(report: EmbeddingReport) -> Result<EmbeddingReport> {
    match report.checks.iter().find(|c| !c.passed) {
        Some(c) => Err(Error::ViolationFound(format!("{}: {}", c.name, c.detail))),
        None => Ok(report),
    }
}
