use banlat::banaschewski::{
    build_ban_function, census_ban, random_decomposition, random_refinement, refine_to_decide,
    search_ban_function, verify_ban_function, verify_refinement_lemma,
};
use banlat::io::{parse_ban_function, parse_lattice, BanFunctionJson, LatticeJson};
use banlat::lattice::{
    check_predicate, find_frames, lattices_up_to_capped, subspace_lattice, FiniteLattice,
    Predicate, MAX_ENUMERATION,
};
use banlat::{Error, Result};
use clap::Subcommand;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::report::Outcome;
use crate::{Global, Input};

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Evaluate structural predicates, with counterexamples.
    Check {
        /// Predicates to check (default: all).
        #[arg(long = "predicate", short)]
        predicates: Vec<String>,
    },
    /// Depth-first search for a Banaschewski function.
    SearchBan {
        #[arg(long)]
        boolean_range: bool,
    },
    /// Build a Banaschewski function with Boolean range by refinement.
    BuildBan,
    /// Verify a supplied Banaschewski function.
    VerifyBan,
    /// All lattices with at most `max-n` elements up to isomorphism.
    Enumerate {
        #[arg(long)]
        max_n: usize,
        /// Allow one size beyond the default enumeration cap.
        #[arg(long)]
        escalate: bool,
    },
    /// Frames of a given order.
    Frames {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        large: bool,
    },
    /// The lattice of subspaces of `F_q^dim`.
    Subspace {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        dim: usize,
    },
    /// Classify complemented lattices by existence of a Banaschewski function.
    CensusBan {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        escalate: bool,
    },
    /// Random decomposition and refinement checks; the input lattice
    /// defaults to the subspaces of `F_2^3`.
    LemmaSweep {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Use `subspace_lattice(2, 3)` instead of reading input.
        #[arg(long)]
        builtin: bool,
    },
}

fn lattice_input(input: &mut Input) -> Result<FiniteLattice> {
    parse_lattice(&input.object("lattice")?)
}

fn cap(escalate: bool) -> usize {
    if escalate {
        MAX_ENUMERATION + 1
    } else {
        MAX_ENUMERATION
    }
}

pub fn run(cmd: &LatticeCmd, global: &Global, input: &mut Input) -> (String, Result<Outcome>) {
    let (name, result) = match cmd {
        LatticeCmd::Check { predicates } => ("lattice check", check(predicates, input)),
        LatticeCmd::SearchBan { boolean_range } => {
            ("lattice search-ban", search(*boolean_range, input))
        }
        LatticeCmd::BuildBan => ("lattice build-ban", build(input)),
        LatticeCmd::VerifyBan => ("lattice verify-ban", verify(input)),
        LatticeCmd::Enumerate { max_n, escalate } => {
            ("lattice enumerate", enumerate(*max_n, *escalate))
        }
        LatticeCmd::Frames { order, large } => ("lattice frames", frames(*order, *large, input)),
        LatticeCmd::Subspace { q, dim } => ("lattice subspace", subspace(*q, *dim)),
        LatticeCmd::CensusBan { max_n, escalate } => {
            ("lattice census-ban", census(*max_n, *escalate))
        }
        LatticeCmd::LemmaSweep { samples, builtin } => (
            "lattice lemma-sweep",
            sweep(*samples, *builtin, global.seed, input),
        ),
    };
    (name.to_string(), result)
}

fn check(names: &[String], input: &mut Input) -> Result<Outcome> {
    let l = lattice_input(input)?;
    let preds: Vec<Predicate> = if names.is_empty() {
        Predicate::ALL.to_vec()
    } else {
        names
            .iter()
            .map(|n| {
                Predicate::parse(n)
                    .ok_or_else(|| Error::Malformed(format!("unknown predicate {n}")))
            })
            .collect::<Result<_>>()?
    };
    let mut out = Map::new();
    let mut all = true;
    for p in preds {
        let o = check_predicate(&l, p)?;
        all &= o.holds;
        out.insert(
            p.name().into(),
            serde_json::to_value(o).expect("serializable"),
        );
    }
    Ok(Outcome::check(
        all,
        json!({ "n": l.len(), "predicates": out }),
    ))
}

fn search(boolean_range: bool, input: &mut Input) -> Result<Outcome> {
    let l = lattice_input(input)?;
    Ok(match search_ban_function(&l, boolean_range)? {
        Some(f) => {
            Outcome::pass(json!({ "function": BanFunctionJson::of(&f), "range": f.range() }))
        }
        None => Outcome::fail(json!({ "function": Value::Null })),
    })
}

fn build(input: &mut Input) -> Result<Outcome> {
    let l = lattice_input(input)?;
    let order: Vec<usize> = l.elements().collect();
    let built = build_ban_function(&l, &order)?;
    Ok(Outcome::pass(json!({
        "function": BanFunctionJson::of(&built.function),
        "range": built.range,
        "decomposition": built.decomposition,
        "refinements": built.refinements,
    })))
}

fn verify(input: &mut Input) -> Result<Outcome> {
    let (l, f) = parse_ban_function(input.text()?)?;
    let v = verify_ban_function(&l, &f)?;
    Ok(Outcome::check(v.is_none(), json!({ "violation": v })))
}

fn enumerate(max_n: usize, escalate: bool) -> Result<Outcome> {
    let levels = lattices_up_to_capped(max_n, cap(escalate))?;
    let counts: Vec<usize> = levels.iter().map(Vec::len).collect();
    let lattices: Vec<LatticeJson> = levels.iter().flatten().map(LatticeJson::of).collect();
    Ok(Outcome::value(
        json!({ "counts": counts, "lattices": lattices }),
    ))
}

fn frames(order: usize, large: bool, input: &mut Input) -> Result<Outcome> {
    let l = lattice_input(input)?;
    let found = find_frames(&l, order, large);
    Ok(Outcome::check(
        !found.is_empty(),
        json!({ "count": found.len(), "frames": found }),
    ))
}

fn subspace(q: usize, dim: usize) -> Result<Outcome> {
    let s = subspace_lattice(q, dim)?;
    Ok(Outcome::value(
        json!({ "lattice": LatticeJson::of(s.lattice()) }),
    ))
}

fn census(max_n: usize, escalate: bool) -> Result<Outcome> {
    let levels = lattices_up_to_capped(max_n, cap(escalate))?;
    let mut rows = Vec::new();
    let mut all_modular_have = true;
    let mut smallest: Option<Value> = None;
    for level in &levels {
        let entries = census_ban(level);
        let modular: Vec<_> = entries.iter().filter(|e| e.modular).collect();
        let without: Vec<_> = entries.iter().filter(|e| !e.has_ban_function).collect();
        all_modular_have &= modular.iter().all(|e| e.has_ban_function);
        if smallest.is_none() {
            if let Some(w) = without.first() {
                smallest = Some(json!({
                    "n": w.n,
                    "code": w.code,
                    "lattice": LatticeJson::of(&level[w.index]),
                }));
            }
        }
        rows.push(json!({
            "n": level.first().map_or(0, FiniteLattice::len),
            "lattices": level.len(),
            "complemented": entries.len(),
            "complemented_modular": modular.len(),
            "modular_with_function": modular.iter().filter(|e| e.has_ban_function).count(),
            "without_function": without.iter().map(|e| e.code.clone()).collect::<Vec<_>>(),
        }));
    }
    Ok(Outcome::check(
        all_modular_have,
        json!({ "rows": rows, "smallest_without_function": smallest }),
    ))
}

fn sweep(samples: usize, builtin: bool, seed: u64, input: &mut Input) -> Result<Outcome> {
    let l = if builtin {
        subspace_lattice(2, 3)?.into_lattice()
    } else {
        lattice_input(input)?
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for _ in 0..samples {
        let splits = rng.gen_range(0..4);
        let u = random_decomposition(&l, &mut rng, splits)?;
        let x = rng.gen_range(0..l.len());
        verify_refinement_lemma(&refine_to_decide(&u, x)?, x)?;
        let splits = rng.gen_range(0..4);
        verify_refinement_lemma(&random_refinement(&u, &mut rng, splits)?, x)?;
        checked += 1;
    }
    Ok(Outcome::pass(
        json!({ "n": l.len(), "samples": checked, "seed": seed }),
    ))
}
