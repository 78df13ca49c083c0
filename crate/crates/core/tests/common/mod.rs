//! Oracles written against raw term lists, sharing no code with the library
//! beyond reading a polynomial's terms.
#![allow(dead_code)]

use std::collections::BTreeMap;

use charp::Polynomial;

pub type Terms = BTreeMap<Vec<u32>, u64>;

pub fn terms_of(f: &Polynomial) -> Terms {
    f.terms().iter().map(|(e, c)| (e.as_slice().to_vec(), *c as u64)).collect()
}

pub fn mul_terms(a: &Terms, b: &Terms, p: u64) -> Terms {
    let mut out = Terms::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let c = out.entry(e).or_insert(0);
            *c = (*c + ca * cb) % p;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn pow_terms(a: &Terms, k: u64, nvars: usize, p: u64) -> Terms {
    let mut out = Terms::from([(vec![0; nvars], 1)]);
    for _ in 0..k {
        out = mul_terms(&out, a, p);
    }
    out
}

/// `Φ^e` on a term list: keep exponents `≡ q−1 (mod q)` and divide down.
/// Coefficients are fixed by the `q`-th root on a prime field.
pub fn trace_terms(a: &Terms, q: u32) -> Terms {
    a.iter()
        .filter(|(e, _)| e.iter().all(|&v| v % q == q - 1))
        .map(|(e, c)| (e.iter().map(|&v| (v - (q - 1)) / q).collect(), *c))
        .collect()
}

pub fn is_one(a: &Terms) -> bool {
    a.len() == 1 && a.iter().next().is_some_and(|(e, c)| e.iter().all(|&v| v == 0) && *c == 1)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut b = a % p;
    let mut k = p - 2;
    while k > 0 {
        if k & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        k >>= 1;
    }
    r
}

/// Whether `A x = b` has a solution mod `p` (row reduction on the
/// augmented matrix).
pub fn consistent_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> bool {
    let cols = rows.first().map_or(0, |r| r.len() - 1);
    let mut rank_row = 0;
    for c in 0..cols {
        let Some(piv) = (rank_row..rows.len()).find(|&r| rows[r][c] % p != 0) else {
            continue;
        };
        rows.swap(rank_row, piv);
        let inv = inv_mod(rows[rank_row][c], p);
        for v in rows[rank_row].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank_row && rows[r][c] != 0 {
                let k = rows[r][c];
                for j in 0..=cols {
                    rows[r][j] = (rows[r][j] + p * p - k * rows[rank_row][j] % p) % p;
                }
            }
        }
        rank_row += 1;
    }
    rows[rank_row..].iter().all(|r| r[cols] % p == 0)
}

/// All exponent vectors in `nvars` variables of total degree `d`.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials_of_degree(nvars - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Membership of a homogeneous `f` in the ideal of homogeneous `gens` by
/// searching for cofactors `h_i` of degree `deg f − deg g_i`.
pub fn homogeneous_membership(f: &Terms, gens: &[Terms], nvars: usize, p: u64) -> bool {
    let Some(df) = f.keys().next().map(|e| e.iter().sum::<u32>()) else {
        return true;
    };
    let mut unknowns: Vec<(usize, Vec<u32>)> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let dg: u32 = g.keys().next().map_or(0, |e| e.iter().sum());
        if dg <= df {
            for m in monomials_of_degree(nvars, df - dg) {
                unknowns.push((i, m));
            }
        }
    }
    let targets = monomials_of_degree(nvars, df);
    let rows = targets
        .iter()
        .map(|t| {
            let mut row: Vec<u64> = unknowns
                .iter()
                .map(|(i, m)| {
                    gens[*i]
                        .iter()
                        .find(|(e, _)| e.iter().zip(m).zip(t).all(|((a, b), c)| a + b == *c))
                        .map_or(0, |(_, c)| *c)
                })
                .collect();
            row.push(f.get(t).copied().unwrap_or(0));
            row
        })
        .collect();
    consistent_mod_p(rows, p)
}
