//! Named finite rings used by tests, the CLI and the acceptance suite.
//!
//! Finite regular rings are finite products of matrix rings over finite
//! fields. The regular corpus lists one ring for every such product of order
//! at most 16 except `GF(16)`, whose field arithmetic is not provided, plus a
//! few isomorphic copies given by different tables.

use super::FiniteRing;
use crate::error::Result;

fn field(q: usize) -> FiniteRing {
    FiniteRing::matrix_ring(q, 1).expect("supported field")
}

fn product(parts: &[FiniteRing]) -> Result<FiniteRing> {
    parts[1..]
        .iter()
        .try_fold(parts[0].clone(), |acc, r| acc.product(r))
}

pub fn regular_corpus() -> Result<Vec<FiniteRing>> {
    let mut out = vec![FiniteRing::zero_ring()];
    for q in [2, 3, 4, 5, 7, 8, 9] {
        out.push(field(q));
    }
    for p in [11, 13] {
        out.push(FiniteRing::integers_mod(p)?);
    }
    let combos: [&[usize]; 14] = [
        &[2, 2],
        &[2, 3],
        &[2, 4],
        &[3, 3],
        &[2, 5],
        &[3, 4],
        &[2, 7],
        &[3, 5],
        &[2, 8],
        &[4, 4],
        &[2, 2, 2],
        &[2, 2, 3],
        &[2, 2, 4],
        &[2, 2, 2, 2],
    ];
    for combo in combos {
        out.push(product(
            &combo.iter().map(|&q| field(q)).collect::<Vec<_>>(),
        )?);
    }
    out.push(FiniteRing::matrix_ring(2, 2)?);
    for n in [6, 10, 14, 15] {
        out.push(FiniteRing::integers_mod(n)?);
    }
    Ok(out)
}

/// Small rings that are not regular, each with a known witness.
pub fn nonregular_examples() -> Result<Vec<(FiniteRing, usize)>> {
    let mut out = Vec::new();
    for (n, w) in [(4, 2), (8, 2), (9, 3), (12, 2)] {
        out.push((FiniteRing::integers_mod(n)?, w));
    }
    // F_2[x]/(x^2), element a + bx stored as a + 2b.
    let add: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    let mul: Vec<Vec<usize>> = (0..4)
        .map(|u| {
            (0..4)
                .map(|v| {
                    let (a, b, c, d) = (u & 1, u >> 1, v & 1, v >> 1);
                    (a & c) | ((((a & d) ^ (b & c)) & 1) << 1)
                })
                .collect()
        })
        .collect();
    out.push((
        FiniteRing::from_tables(add, mul, Some(1))?.with_label("F_2[x]/(x^2)"),
        2,
    ));
    let null = FiniteRing::from_tables(
        vec![vec![0, 1], vec![1, 0]],
        vec![vec![0, 0], vec![0, 0]],
        None,
    )?;
    out.push((null.with_label("Z/2 with zero product"), 1));
    Ok(out)
}
