//! Small Galois fields GF(q), q in {2, 3, 4, 5, 7, 8, 9}.
//!
//! Elements are encoded as integers `0..q`. For prime q this is the residue;
//! for prime powers the base-p digits are polynomial coefficients (lowest
//! degree first) reduced modulo a fixed irreducible polynomial.

use crate::error::{Error, Result};

pub const SUPPORTED_ORDERS: [usize; 7] = [2, 3, 4, 5, 7, 8, 9];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf {
    q: usize,
    p: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl Gf {
    pub fn new(q: usize) -> Result<Self> {
        // (characteristic, degree, monic irreducible low coefficients)
        let (p, k, modulus): (usize, usize, &[usize]) = match q {
            2 | 3 | 5 | 7 => (q, 1, &[]),
            4 => (2, 2, &[1, 1]),    // x^2 + x + 1
            8 => (2, 3, &[1, 1, 0]), // x^3 + x + 1
            9 => (3, 2, &[1, 0]),    // x^2 + 1
            _ => {
                return Err(Error::PreconditionFailed(format!(
                    "unsupported field order {q}; expected one of {SUPPORTED_ORDERS:?}"
                )))
            }
        };
        let digits = |mut x: usize| {
            let mut d = vec![0usize; k];
            for slot in d.iter_mut() {
                *slot = x % p;
                x /= p;
            }
            d
        };
        let undigits = |d: &[usize]| d.iter().rev().fold(0usize, |acc, &c| acc * p + c);

        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&sum) as u8;

                let mut prod = vec![0usize; 2 * k];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                // reduce: x^k = -(modulus)
                for deg in (k..2 * k).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    prod[deg] = 0;
                    for (i, m) in modulus.iter().enumerate() {
                        let idx = deg - k + i;
                        prod[idx] = (prod[idx] + (p - (c * m) % p)) % p;
                    }
                }
                mul[a * q + b] = undigits(&prod[..k]) as u8;
            }
        }
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (0..q)
                    .find(|&b| mul[a * q + b] == 1)
                    .expect("field multiplication table lacks an inverse")
                    as u8;
            }
        }
        Ok(Gf {
            q,
            p,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `a` must be nonzero.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }
}
