//! Buchberger's algorithm with the sugar selection strategy.
//!
//! Works on raw exponent vectors so that callers can append auxiliary
//! variables (elimination) without building a new ring.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use super::order::MonomialOrder;
use crate::field::PrimeField;
use crate::poly::ExpVec;

static POSTCHECKS: AtomicUsize = AtomicUsize::new(0);

/// Number of reduced bases that have passed the S-polynomial post-check in
/// this process.
pub fn postcheck_count() -> usize {
    POSTCHECKS.load(AtomicOrdering::Relaxed)
}

/// Terms sorted descending under some monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct OPoly {
    pub terms: Vec<(ExpVec, u32)>,
}

impl OPoly {
    pub fn from_terms(mut terms: Vec<(ExpVec, u32)>, order: &MonomialOrder) -> Self {
        terms.retain(|(_, c)| *c != 0);
        terms.sort_by(|a, b| order.cmp(b.0.as_slice(), a.0.as_slice()));
        OPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &ExpVec {
        &self.terms[0].0
    }

    pub fn lc(&self) -> u32 {
        self.terms[0].1
    }

    pub fn make_monic(&mut self, f: PrimeField) {
        if let Some(&(_, c)) = self.terms.first() {
            if c != 1 {
                let inv = f.inv(c);
                for t in &mut self.terms {
                    t.1 = f.mul(t.1, inv);
                }
            }
        }
    }
}

/// `a - c * m * b` where both inputs are sorted under `order`.
fn sub_scaled(
    a: &[(ExpVec, u32)],
    c: u32,
    m: &ExpVec,
    b: &[(ExpVec, u32)],
    order: &MonomialOrder,
    f: PrimeField,
) -> Vec<(ExpVec, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut scaled = b.iter().map(|(e, v)| (e.mul(m), f.neg(f.mul(c, *v)))).peekable();
    while i < a.len() {
        let Some((eb, _)) = scaled.peek() else { break };
        match order.cmp(a[i].0.as_slice(), eb.as_slice()) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => out.push(scaled.next().unwrap()),
            Ordering::Equal => {
                let (eb, vb) = scaled.next().unwrap();
                let v = f.add(a[i].1, vb);
                if v != 0 {
                    out.push((eb, v));
                }
                i += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(scaled);
    out
}

/// Full normal form of `p` modulo `basis`.
pub(crate) fn normal_form(p: &OPoly, basis: &[OPoly], order: &MonomialOrder, f: PrimeField) -> OPoly {
    let mut rem = Vec::new();
    let mut cur = p.terms.clone();
    let mut start = 0;
    while start < cur.len() {
        let (lt, lc) = &cur[start];
        match basis.iter().find(|g| !g.is_zero() && g.lm().divides(lt)) {
            Some(g) => {
                let m = g.lm().quotient_of(lt);
                let c = f.mul(*lc, f.inv(g.lc()));
                cur = sub_scaled(&cur[start..], c, &m, &g.terms, order, f);
                start = 0;
            }
            None => {
                rem.push(cur[start].clone());
                start += 1;
            }
        }
    }
    OPoly { terms: rem }
}

pub(crate) fn s_polynomial(a: &OPoly, b: &OPoly, order: &MonomialOrder, f: PrimeField) -> OPoly {
    let l = a.lm().lcm(b.lm());
    let ma = a.lm().quotient_of(&l);
    let mb = b.lm().quotient_of(&l);
    let ca = f.inv(a.lc());
    let cb = f.inv(b.lc());
    let left: Vec<_> = a.terms.iter().map(|(e, v)| (e.mul(&ma), f.mul(*v, ca))).collect();
    OPoly {
        terms: sub_scaled(&left, cb, &mb, &b.terms, order, f),
    }
}

/// Computes the reduced Gröbner basis of the given generators.
///
/// Panics if the post-hoc S-polynomial check fails; that can only happen
/// through a bug in this module.
pub(crate) fn reduced_groebner_basis(gens: &[OPoly], order: &MonomialOrder, f: PrimeField) -> Vec<OPoly> {
    let mut basis: Vec<OPoly> = Vec::new();
    let mut sugar: Vec<u64> = Vec::new();
    let mut pending: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    let mut lcms: std::collections::HashMap<(usize, usize), ExpVec> = Default::default();
    let mut live: HashSet<(usize, usize)> = HashSet::new();

    let push = |g: OPoly,
                s: u64,
                basis: &mut Vec<OPoly>,
                sugar: &mut Vec<u64>,
                pending: &mut BTreeSet<(u64, usize, usize)>,
                lcms: &mut std::collections::HashMap<(usize, usize), ExpVec>,
                live: &mut HashSet<(usize, usize)>| {
        let k = basis.len();
        for i in 0..k {
            let l = basis[i].lm().lcm(g.lm());
            let si = sugar[i] + l.degree() - basis[i].lm().degree();
            let sk = s + l.degree() - g.lm().degree();
            let ps = si.max(sk);
            pending.insert((ps, i, k));
            lcms.insert((i, k), l);
            live.insert((i, k));
        }
        basis.push(g);
        sugar.push(s);
    };

    let mut inputs: Vec<OPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    inputs.sort_by(|a, b| order.cmp(a.lm().as_slice(), b.lm().as_slice()));
    for g in inputs {
        let mut h = normal_form(&g, &basis, order, f);
        if h.is_zero() {
            continue;
        }
        h.make_monic(f);
        let s = h.terms.iter().map(|(e, _)| e.degree()).max().unwrap_or(0);
        push(h, s, &mut basis, &mut sugar, &mut pending, &mut lcms, &mut live);
    }

    while let Some(&key) = pending.iter().next() {
        pending.remove(&key);
        let (ps, i, j) = key;
        live.remove(&(i, j));
        let l = lcms.remove(&(i, j)).unwrap();
        // First criterion: coprime leading monomials.
        if basis[i].lm().coprime(basis[j].lm()) {
            continue;
        }
        // Chain criterion: some k with lm_k | lcm whose pairs with i and j
        // have both been treated already.
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm().divides(&l)
                && !live.contains(&(i.min(k), i.max(k)))
                && !live.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let sp = s_polynomial(&basis[i], &basis[j], order, f);
        let mut h = normal_form(&sp, &basis, order, f);
        if h.is_zero() {
            continue;
        }
        h.make_monic(f);
        push(h, ps, &mut basis, &mut sugar, &mut pending, &mut lcms, &mut live);
    }

    let reduced = interreduce(basis, order, f);
    assert!(
        satisfies_buchberger_criterion(&reduced, order, f),
        "Buchberger post-check failed: an S-polynomial of the reduced basis has nonzero normal form"
    );
    POSTCHECKS.fetch_add(1, AtomicOrdering::Relaxed);
    reduced
}

/// Minimal, fully interreduced, monic basis sorted by descending leading
/// monomial.
fn interreduce(mut basis: Vec<OPoly>, order: &MonomialOrder, f: PrimeField) -> Vec<OPoly> {
    basis.retain(|g| !g.is_zero());
    basis.sort_by(|a, b| order.cmp(a.lm().as_slice(), b.lm().as_slice()));
    let mut minimal: Vec<OPoly> = Vec::new();
    for g in basis {
        if !minimal.iter().any(|m| m.lm().divides(g.lm())) {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<OPoly> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let mut g = normal_form(&minimal[i], &others, order, f);
        g.make_monic(f);
        out.push(g);
    }
    out.sort_by(|a, b| order.cmp(b.lm().as_slice(), a.lm().as_slice()));
    out
}

/// Every S-polynomial reduces to zero modulo `basis`.
pub(crate) fn satisfies_buchberger_criterion(basis: &[OPoly], order: &MonomialOrder, f: PrimeField) -> bool {
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if basis[i].lm().coprime(basis[j].lm()) {
                continue;
            }
            let sp = s_polynomial(&basis[i], &basis[j], order, f);
            if !normal_form(&sp, basis, order, f).is_zero() {
                return false;
            }
        }
    }
    true
}
