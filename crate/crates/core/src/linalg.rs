//! Dense row reduction over a small Galois field.

use crate::field::Gf;

pub(crate) type Row = Vec<u8>;

/// Brings `rows` to reduced row echelon form in place, drops zero rows, and
/// returns the pivot column of each remaining row.
pub(crate) fn rref(f: &Gf, rows: &mut Vec<Row>) -> Vec<usize> {
    let pivots = reduce(f, rows, None);
    rows.truncate(pivots.len());
    pivots
}

/// Like [`rref`] but also returns `P` (rows × rows, invertible) with
/// `P · original = reduced`, where `reduced` keeps its zero rows at the bottom.
pub(crate) fn rref_with_transform(f: &Gf, rows: &mut [Row]) -> (Vec<usize>, Vec<Row>) {
    let m = rows.len();
    let mut p: Vec<Row> = (0..m)
        .map(|i| {
            let mut r = vec![0u8; m];
            r[i] = 1;
            r
        })
        .collect();
    let mut owned = rows.to_vec();
    let pivots = reduce(f, &mut owned, Some(&mut p));
    rows.clone_from_slice(&owned);
    (pivots, p)
}

fn reduce(f: &Gf, rows: &mut [Row], mut track: Option<&mut [Row]>) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        if let Some(t) = track.as_deref_mut() {
            t.swap(r, pr);
        }
        let inv = f.inv(rows[r][c]);
        scale(f, &mut rows[r], inv);
        if let Some(t) = track.as_deref_mut() {
            scale(f, &mut t[r], inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let k = rows[i][c];
                let (src, dst) = pick(rows, r, i);
                axpy(f, dst, src, k);
                if let Some(t) = track.as_deref_mut() {
                    let (src, dst) = pick(t, r, i);
                    axpy(f, dst, src, k);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

fn pick(rows: &mut [Row], src: usize, dst: usize) -> (&Row, &mut Row) {
    if src < dst {
        let (a, b) = rows.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = rows.split_at_mut(src);
        (&b[0], &mut a[dst])
    }
}

fn scale(f: &Gf, row: &mut Row, k: u8) {
    for x in row.iter_mut() {
        *x = f.mul(*x, k);
    }
}

/// `dst -= k * src`.
fn axpy(f: &Gf, dst: &mut Row, src: &Row, k: u8) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = f.sub(*d, f.mul(k, s));
    }
}

/// Basis of `{v : v · r = 0 for every row r}`, from rows already in RREF
/// over `n` columns.
pub(crate) fn kernel_of_rref(f: &Gf, rows: &[Row], pivots: &[usize], n: usize) -> Vec<Row> {
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u8; n];
        v[free] = 1;
        for (row, &pc) in rows.iter().zip(pivots) {
            v[pc] = f.neg(row[free]);
        }
        out.push(v);
    }
    out
}

pub(crate) fn mat_mul(f: &Gf, a: &[Row], b: &[Row]) -> Vec<Row> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|ra| {
            (0..cols)
                .map(|j| (0..inner).fold(0u8, |acc, k| f.add(acc, f.mul(ra[k], b[k][j]))))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_reproduces_reduced_form() {
        let f = Gf::new(3).unwrap();
        let orig: Vec<Row> = vec![vec![0, 2, 1], vec![1, 1, 0], vec![1, 0, 2]];
        let mut rows = orig.clone();
        let (piv, p) = rref_with_transform(&f, &mut rows);
        assert_eq!(mat_mul(&f, &p, &orig), rows);
        for (r, &c) in piv.iter().enumerate() {
            assert_eq!(rows[r][c], 1);
        }
    }

    #[test]
    fn kernel_is_orthogonal() {
        let f = Gf::new(2).unwrap();
        let mut rows: Vec<Row> = vec![vec![1, 1, 0, 1], vec![0, 1, 1, 0]];
        let piv = rref(&f, &mut rows);
        let ker = kernel_of_rref(&f, &rows, &piv, 4);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for r in &rows {
                let dot = v.iter().zip(r).fold(0, |a, (&x, &y)| f.add(a, f.mul(x, y)));
                assert_eq!(dot, 0);
            }
        }
    }
}
