mod common;

use std::io::Write;
use std::ops::ControlFlow;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use banlat::banaschewski::{
    atom_ban_function, atoms_join_to_top, boolean_ranges, boolean_ranges_isomorphic,
    build_ban_function, census_ban, exchange_decomposition, for_each_ban_function,
    random_decomposition, random_refinement, refine_to_decide, search_ban_function,
    verify_ban_function, verify_refinement_lemma, BanFunction, Decomposition,
};
use banlat::coord::{coordinatize_from_trace, subspace_chain_input};
use banlat::lattice::{
    check_predicate, enumerate_lattices, find_isomorphism, lattices_up_to, lattices_up_to_capped,
    subspace_lattice, FiniteLattice, Predicate, MAX_ENUMERATION,
};
use banlat::ring::{
    build_l, eps_from_ring_ban, eps_property_check, regular_corpus, ring_ban_from_lattice,
    FiniteRing, RElem,
};
use banlat::trace::{
    trace_from_chain, trace_from_ring, verify_embedding, verify_trace, StagedLattice,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: banlat::Result<T>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn table(l: &FiniteLattice, f: &BanFunction) -> Vec<usize> {
    l.elements()
        .map(|x| f.get(x).unwrap_or(usize::MAX))
        .collect()
}

fn complemented(l: &FiniteLattice) -> bool {
    l.top().is_some() && l.elements().all(|x| !l.complements(x).is_empty())
}

fn complemented_modular_up_to(n: usize) -> Vec<FiniteLattice> {
    lattices_up_to(n)
        .unwrap()
        .into_iter()
        .flatten()
        .filter(|l| complemented(l) && l.is_modular())
        .collect()
}

fn perspective_oracle(l: &FiniteLattice, a: usize, b: usize) -> bool {
    l.elements()
        .any(|z| l.disjoint(a, z) && l.disjoint(b, z) && l.join(a, z) == l.join(b, z))
}

fn ac1() -> Outcome {
    let lattices = complemented_modular_up_to(8);
    for l in &lattices {
        let found = ok(search_ban_function(l, true), "search")?
            .ok_or("search found no Boolean-range function")?;
        ensure(common::is_ban_table(l, &table(l, &found)), || {
            "searched function fails the oracle".into()
        })?;
        ensure(common::is_boolean_subset(l, &found.range()), || {
            "searched range is not Boolean".into()
        })?;
        let order: Vec<usize> = l.elements().collect();
        let built = ok(build_ban_function(l, &order), "build")?;
        ensure(common::is_ban_table(l, &table(l, &built.function)), || {
            "built function fails the oracle".into()
        })?;
        ensure(common::is_boolean_subset(l, &built.range), || {
            "built range is not Boolean".into()
        })?;
        ensure(
            built
                .function
                .range()
                .iter()
                .all(|y| built.range.contains(y)),
            || "values leave the range".into(),
        )?;
    }
    Ok(format!(
        "{} complemented modular lattices with at most 8 elements",
        lattices.len()
    ))
}

fn ac2() -> Outcome {
    let mut top = MAX_ENUMERATION;
    loop {
        let levels = ok(lattices_up_to_capped(top, top), "enumerate")?;
        for level in &levels {
            let census = census_ban(level);
            if let Some(e) = census.iter().find(|e| !e.has_ban_function) {
                let l = &level[e.index];
                ensure(complemented(l) && !l.is_modular(), || {
                    "witness is not complemented non-modular".into()
                })?;
                ensure(!common::exists_ban_function(l), || {
                    "the oracle finds a function on the witness".into()
                })?;
                return Ok(format!(
                    "smallest n = {}, witness {} with covers {:?}",
                    e.n,
                    e.code,
                    l.covers()
                ));
            }
        }
        if top > MAX_ENUMERATION {
            return Err(format!("no witness up to n = {top}"));
        }
        top += 1;
    }
}

fn ac3() -> Outcome {
    let mut sd = 0;
    let mut all = 0;
    for l in lattices_up_to(8).unwrap().into_iter().flatten() {
        all += 1;
        let i = atoms_join_to_top(&l);
        let iii = ok(check_predicate(&l, Predicate::Complemented), "predicate")?.holds;
        let ii = iii && ok(search_ban_function(&l, false), "search")?.is_some();
        ensure(!ii || iii, || {
            format!("(ii) without (iii) on {:?}", l.covers())
        })?;
        ensure(!iii || i, || {
            format!("(iii) without (i) on {:?}", l.covers())
        })?;
        if ok(
            check_predicate(&l, Predicate::MeetSemidistributive),
            "predicate",
        )?
        .holds
        {
            sd += 1;
            ensure(i == ii && ii == iii, || {
                format!("conditions disagree on {:?}", l.covers())
            })?;
            if i {
                let f = ok(atom_ban_function(&l), "atom formula")?;
                ensure(common::is_ban_table(&l, &table(&l, &f)), || {
                    "atom formula fails the oracle".into()
                })?;
                ensure(ok(verify_ban_function(&l, &f), "verify")?.is_none(), || {
                    "atom formula rejected".into()
                })?;
            }
        }
    }
    Ok(format!("{all} lattices, {sd} meet-semidistributive"))
}

fn ac4() -> Outcome {
    let mut pool = vec![subspace_lattice(2, 3).unwrap().into_lattice()];
    pool.extend(complemented_modular_up_to(8));
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..1000 {
        let l = &pool[rng.gen_range(0..pool.len())];
        let splits = rng.gen_range(0..4);
        let u = ok(random_decomposition(l, &mut rng, splits), "decomposition")?;
        let x = rng.gen_range(0..l.len());
        check_profile(l, &u, x)?;
        let y_above: Vec<usize> = l.up_set(x);
        let fx = ok(u.f_u(x), "f_u")?;
        for y in y_above {
            ensure(l.leq(ok(u.f_u(y), "f_u")?, fx), || {
                format!("f_u not antitone at ({x},{y})")
            })?;
        }
        let decided = ok(refine_to_decide(&u, x), "refine")?;
        ensure(decided.source.len() == 2 * u.len(), || {
            "refinement has the wrong length".into()
        })?;
        ensure(ok(decided.source.decides(x), "decides")?, || {
            "refinement does not decide".into()
        })?;
        ok(verify_refinement_lemma(&decided, x), "refinement lemma")?;
        let splits = rng.gen_range(0..4);
        let random = ok(random_refinement(&u, &mut rng, splits), "random refinement")?;
        ok(verify_refinement_lemma(&random, x), "refinement lemma")?;
        let chained = ok(refine_to_decide(&random.source, x), "refine")?;
        ok(
            verify_refinement_lemma(&chained.then(&random), x),
            "composed refinement lemma",
        )?;
    }
    Ok(format!("1000 samples over {} lattices, seed 0", pool.len()))
}

fn check_profile(l: &FiniteLattice, u: &Decomposition<'_>, x: usize) -> Result<(), String> {
    let p = ok(u.profile(x), "profile")?;
    let blocks = u.blocks();
    let mut f_set = Vec::new();
    let mut g_set = Vec::new();
    for (k, &uk) in blocks.iter().enumerate() {
        let ctx = l.join(x, l.join_all(blocks[..k].iter().copied()));
        if !l.leq(uk, ctx) {
            f_set.push(k);
        }
        if l.meet(uk, ctx) == l.bottom() {
            g_set.push(k);
        }
    }
    ensure(p.f_set == f_set && p.g_set == g_set, || {
        "index sets differ from the oracle".into()
    })?;
    let top = l.top().unwrap();
    ensure(l.join(x, p.f) == top, || "x ∨ f_u(x) != 1".into())?;
    ensure(l.meet(x, p.g) == l.bottom(), || "x ∧ g_u(x) != 0".into())?;
    ensure(l.leq(p.g, p.f), || "g_u(x) ≰ f_u(x)".into())
}

fn ac5() -> Outcome {
    let rings = [
        ("F_2", FiniteRing::integers_mod(2).unwrap()),
        ("F_3", FiniteRing::integers_mod(3).unwrap()),
        (
            "F_2×F_2",
            FiniteRing::integers_mod(2)
                .unwrap()
                .product(&FiniteRing::integers_mod(2).unwrap())
                .unwrap(),
        ),
        ("M_2(F_2)", FiniteRing::matrix_ring(2, 2).unwrap()),
    ];
    let mut pairs = 0;
    for (name, r) in &rings {
        let lr = ok(build_l(r), "build_L")?;
        let phi =
            ok(search_ban_function(lr.lattice(), false), "search")?.ok_or("no lattice function")?;
        let xs: Vec<RElem> = r.elements().collect();
        let f = ok(ring_ban_from_lattice(r, &lr, &phi, &xs), "ring function")?;
        let eps = ok(eps_from_ring_ban(r, &f), "ε")?;
        ensure(
            ok(eps_property_check(r, &lr, &eps), "ε check")?.is_none(),
            || format!("ε fails on {name}"),
        )?;
        ensure(common::eps_violation(r, &eps).is_none(), || {
            format!("oracle rejects ε on {name}")
        })?;
        pairs += r.len() * r.len();
    }
    Ok(format!("4 rings, {pairs} pairs"))
}

fn ac6() -> Outcome {
    let mut sizes = Vec::new();
    for (q, expect) in [(2, 5), (3, 6)] {
        let lr = ok(build_l(&FiniteRing::matrix_ring(q, 2).unwrap()), "build_L")?;
        let sl = subspace_lattice(q, 2).unwrap();
        let map = find_isomorphism(lr.lattice(), sl.lattice()).ok_or("no isomorphism")?;
        ensure(lr.len() == expect, || {
            format!("𝕃(M_2(F_{q})) has {} elements", lr.len())
        })?;
        ensure(
            common::is_order_isomorphism(lr.lattice(), sl.lattice(), &map),
            || "map is not an isomorphism".into(),
        )?;
        sizes.push(format!("q={q}: {expect} elements, map {map:?}"));
    }
    Ok(sizes.join("; "))
}

fn ac7() -> Outcome {
    let lattices = complemented_modular_up_to(8);
    for l in &lattices {
        ensure(ok(boolean_ranges_isomorphic(l), "ranges")?, || {
            "Boolean ranges not isomorphic".into()
        })?;
        let ranges = ok(boolean_ranges(l), "ranges")?;
        ensure(ranges.windows(2).all(|w| w[0].len() == w[1].len()), || {
            "Boolean ranges differ in size".into()
        })?;
    }
    let mut instances = 0;
    for l in [FiniteLattice::diamond(3), FiniteLattice::boolean(3)] {
        let mut functions = Vec::new();
        ok(
            for_each_ban_function(&l, true, |f| {
                functions.push(f.clone());
                ControlFlow::Continue(())
            }),
            "functions",
        )?;
        for f in &functions {
            let range = f.range();
            for &c in &range {
                for x in l.elements() {
                    for y in l.elements() {
                        if !(l.join(x, y) == c && l.disjoint(x, y)) {
                            continue;
                        }
                        let (a, b) =
                            ok(exchange_decomposition(&l, &range, f, c, x, y), "exchange")?;
                        ensure(range.contains(&a) && range.contains(&b), || {
                            "exchange leaves the range".into()
                        })?;
                        ensure(l.join(a, b) == c && l.disjoint(a, b), || {
                            "c != a ⊕ b".into()
                        })?;
                        ensure(perspective_oracle(&l, a, x), || {
                            format!("{a} not perspective to {x}")
                        })?;
                        ensure(perspective_oracle(&l, b, y), || {
                            format!("{b} not perspective to {y}")
                        })?;
                        instances += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{} lattices; {instances} exchange instances in M_3 and 2^3",
        lattices.len()
    ))
}

fn ac8() -> Outcome {
    let mut out = Vec::new();
    for (name, host, depth) in [
        (
            "finite subsets",
            StagedLattice::finite_subsets(6).unwrap(),
            6,
        ),
        (
            "F_2 subspaces",
            StagedLattice::fd_subspaces_standard(2, 4).unwrap(),
            4,
        ),
    ] {
        let trace = trace_from_chain(&host).unwrap();
        let report = ok(verify_embedding(&host, &trace, depth), name)?;
        ensure(report.passed(), || format!("{name}: {:?}", report.checks))?;
        let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
        for needed in [
            "ε is a 0-lattice embedding",
            "im ε is an ideal",
            "every element is complemented",
            "modular",
        ] {
            ensure(names.contains(&needed), || {
                format!("{name}: missing check {needed}")
            })?;
        }
        if name == "finite subsets" {
            ensure(names.contains(&"distributive like the host"), || {
                "distributivity not checked".into()
            })?;
        }
        out.push(format!(
            "{name} depth {depth}: {} elements",
            report.elements
        ));
    }
    Ok(out.join("; "))
}

fn ac9() -> Outcome {
    let mut traced = 0;
    for r in ok(regular_corpus(), "corpus")?
        .iter()
        .filter(|r| r.len() <= 16)
    {
        let rt = ok(trace_from_ring(r), r.label())?;
        ensure(rt.trace.normal, || {
            format!("{} trace is not normal", r.label())
        })?;
        ensure(
            ok(verify_trace(&rt.host, &rt.trace, rt.host.depth()), "verify")?.is_none(),
            || format!("{} trace fails", r.label()),
        )?;
        traced += 1;
    }
    let mut chains = Vec::new();
    for depth in 1..=3 {
        let c = ok(
            coordinatize_from_trace(subspace_chain_input(2, &[0, 1, 2, 4]).unwrap(), depth),
            "coordinatize",
        )?;
        let s = &c.witness.system;
        for k in 0..=depth {
            for j in 0..=k {
                for i in 0..=j {
                    let eij = c.corners.get(i, j).ok_or("missing corner")?;
                    let moved = s.hom(j, k).ok_or("missing hom")?.apply(eij);
                    ensure(Some(moved) == c.corners.get(i, k), || {
                        format!("f_{j}^{k}(e_{i}^{j}) != e_{i}^{k}")
                    })?;
                }
            }
        }
        chains.push(depth);
    }
    Ok(format!("{traced} corpus rings traced; M_(2^i)(F_2) chain coordinatized through stage indices {chains:?}"))
}

fn ac10() -> Outcome {
    let expected = [1, 1, 1, 2, 5, 15, 53];
    let counts: Vec<usize> = (1..=7)
        .map(|n| enumerate_lattices(n).unwrap().len())
        .collect();
    let naive: Vec<usize> = (1..=7).map(common::naive_lattice_count).collect();
    ensure(counts == expected && naive == expected, || {
        format!("library {counts:?}, oracle {naive:?}")
    })?;
    Ok(format!("{counts:?}"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        (
            "AC1",
            "Boolean-range Banaschewski functions on complemented modular lattices",
            ac1,
        ),
        (
            "AC2",
            "complemented lattice without a Banaschewski function",
            ac2,
        ),
        (
            "AC3",
            "atoms, Banaschewski functions and complementation",
            ac3,
        ),
        ("AC4", "decomposition and refinement lemmas", ac4),
        ("AC5", "ring Banaschewski functions and ε", ac5),
        ("AC6", "principal right ideals of 2×2 matrix rings", ac6),
        ("AC7", "uniqueness of Boolean ranges and exchange", ac7),
        ("AC8", "complemented extension of staged lattices", ac8),
        ("AC9", "ring traces and coordinatization", ac9),
        ("AC10", "enumerator calibration", ac10),
    ];
    let mut failed = Vec::new();
    for (id, title, run) in criteria {
        let started = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        let line = match result {
            Ok(detail) => format!("[PASS] {id} {title} ({secs:.1}s): {detail}"),
            Err(why) => {
                failed.push(id);
                format!("[FAIL] {id} {title} ({secs:.1}s): {why}")
            }
        };
        writeln!(std::io::stdout().lock(), "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
