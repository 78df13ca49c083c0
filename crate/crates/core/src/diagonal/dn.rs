//! Bounded linear-algebra searches for liftings along `Δ_n`.
//!
//! A lifting is `Φ^e_{S^{⊗n}}(G·−)`. Writing `F^e_* S^{⊗n}` in the monomial
//! basis `x^γ`, `γ ∈ [0, q−1]^{Nn}`, the image of `x^γ` is
//! `c_γ = Σ_μ G_{qμ + (q−1−γ)} x^μ`, so the unknown coefficients of `G` split
//! into independent blocks, one per class `γ`. The diagram condition
//! `Δ_n(c_γ) = φ(F^e_* Δ_n(x^γ))` is a system of fiber sums in each block.
//! Compatibility with `𝔡_n` follows from the diagram, since
//! `Δ_n(c) = 0` for the image `c` of anything in `𝔡_n`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::TensorPower;
use crate::cartier::{compatibility_witness, frobenius_scale, frobenius_trace, CartierMap};
use crate::error::{Error, Result};
use crate::linalg::{solve_linear, FpMatrix, SolveOutcome};
use crate::poly::{ExpVec, Polynomial};
use crate::segre::segre_membership;

/// Where the lifting has to land.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DnTarget {
    /// Liftings on the polynomial ring `S^{⊗n}`.
    Ambient,
    /// Liftings on `R^{⊗n}` for the Segre product `R ⊂ S`; only classes that
    /// contain elements of `R^{⊗n}` are constrained, and their images must
    /// stay in `R^{⊗n}`.
    Segre,
}

/// Size limits for the searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Basis classes, multiplier monomials and enumerated candidates.
    pub elements: u64,
    /// Unknowns in a single linear system.
    pub unknowns: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            elements: 1_000_000,
            unknowns: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DnWitness {
    pub e: u32,
    /// `G` with `Φ^e(G·−)` lifting the map.
    #[serde(serialize_with = "crate::report::display")]
    pub lift: Polynomial,
    /// Per-variable degree bound used for `G`.
    pub bound: u32,
    pub classes: u64,
    pub unknowns: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DnMembership {
    Found(DnWitness),
    /// No lifting with the given degree bound; says nothing about larger
    /// bounds.
    NotFound { bound: u32, class: Vec<u32>, reason: String },
}

impl DnMembership {
    pub fn witness(&self) -> Option<&DnWitness> {
        match self {
            DnMembership::Found(w) => Some(w),
            DnMembership::NotFound { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityWitness {
    pub map: CartierMap,
    #[serde(serialize_with = "crate::report::display")]
    pub lift: Polynomial,
}

fn check_target(tp: &TensorPower, target: DnTarget) -> Result<()> {
    if target == DnTarget::Segre && !tp.base().has_segre_blocks() {
        return Err(Error::precondition("Segre liftings need a ring with x and y blocks"));
    }
    Ok(())
}

fn class_count(tp: &TensorPower, q: u32, caps: &Caps) -> Result<u64> {
    let count = (q as u128).pow(tp.ring().num_vars() as u32);
    if count > caps.elements as u128 {
        return Err(Error::cap("basis classes", count, caps.elements as u128));
    }
    Ok(count as u64)
}

fn class_exponent(tp: &TensorPower, q: u32, mut idx: u64) -> ExpVec {
    let v = (0..tp.ring().num_vars())
        .map(|_| {
            let d = (idx % q as u64) as u32;
            idx /= q as u64;
            d
        })
        .collect();
    ExpVec::from_vec(v)
}

/// Required per-factor `Y − X` degree of `c_γ`, or `None` when the class
/// holds no element of `R^{⊗n}`. Empty for ambient targets.
fn class_surplus(tp: &TensorPower, target: DnTarget, q: u32, gamma: &ExpVec) -> Option<Vec<i64>> {
    if target == DnTarget::Ambient {
        return Some(vec![]);
    }
    (1..=tp.n())
        .map(|k| {
            let (x, y) = tp.factor_bidegree(gamma, k);
            let d = y as i64 - x as i64;
            (d % q as i64 == 0).then_some(d / q as i64)
        })
        .collect()
}

/// All vectors `v` with `0 ≤ v_i ≤ limits[i]`.
fn boxes(limits: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &l in limits {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=l).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

/// Exponents `μ` of `c_γ` allowed by the degree bound (and by membership in
/// `R^{⊗n}` for Segre targets).
fn allowed_exponents(
    tp: &TensorPower,
    q: u32,
    bound: u32,
    gamma: &ExpVec,
    surplus: &[i64],
    caps: &Caps,
) -> Result<Vec<ExpVec>> {
    let mut limits = Vec::with_capacity(gamma.len());
    for &g in gamma.as_slice() {
        let shift = q - 1 - g;
        if bound < shift {
            return Ok(vec![]);
        }
        limits.push((bound - shift) / q);
    }
    let nb = tp.base().num_vars();
    let mut per_factor = Vec::with_capacity(tp.n() as usize);
    let mut total: u128 = 1;
    for k in 0..tp.n() as usize {
        let cube: u128 = limits[k * nb..(k + 1) * nb].iter().map(|&l| l as u128 + 1).product();
        if cube > caps.elements as u128 {
            return Err(Error::cap("candidate exponents", cube, caps.elements as u128));
        }
        let mut options = boxes(&limits[k * nb..(k + 1) * nb]);
        if let Some(&d) = surplus.get(k) {
            options.retain(|v| {
                let (x, y) = tp.factor_bidegree(&embed_factor(v, k, tp), k as u32 + 1);
                y as i64 - x as i64 == d
            });
        }
        total *= options.len() as u128;
        per_factor.push(options);
    }
    if total > caps.unknowns as u128 {
        return Err(Error::cap("unknowns in one class", total, caps.unknowns as u128));
    }
    let mut out = vec![Vec::with_capacity(gamma.len())];
    for options in per_factor {
        out = out
            .into_iter()
            .flat_map(|v| {
                options.iter().map(move |o| {
                    let mut w = v.clone();
                    w.extend_from_slice(o);
                    w
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(ExpVec::from_vec).collect())
}

fn embed_factor(v: &[u32], k: usize, tp: &TensorPower) -> ExpVec {
    let nb = tp.base().num_vars();
    let mut full = vec![0; tp.ring().num_vars()];
    full[k * nb..(k + 1) * nb].copy_from_slice(v);
    ExpVec::from_vec(full)
}

/// Exponent of `G` that contributes `x^μ` to `c_γ`.
fn lift_exponent(q: u32, mu: &ExpVec, gamma: &ExpVec) -> ExpVec {
    ExpVec::from_vec(mu.as_slice().iter().zip(gamma.as_slice()).map(|(&m, &g)| q * m + q - 1 - g).collect())
}

enum ClassResult {
    Solved { terms: Vec<(ExpVec, u32)>, unknowns: u64 },
    Failed(String),
}

/// Solves the fiber-sum system of one class for a prescribed `Δ_n(c_γ)`.
fn solve_class(tp: &TensorPower, q: u32, gamma: &ExpVec, mus: &[ExpVec], target: &Polynomial) -> Result<ClassResult> {
    let field = tp.ring().field();
    let mut rows: HashMap<ExpVec, usize> = HashMap::new();
    let mut row_keys: Vec<ExpVec> = Vec::new();
    let mut key_of = |w: ExpVec, rows: &mut HashMap<ExpVec, usize>| -> usize {
        *rows.entry(w.clone()).or_insert_with(|| {
            row_keys.push(w);
            row_keys.len() - 1
        })
    };
    let col_rows: Vec<usize> = mus.iter().map(|mu| key_of(tp.collapse(mu), &mut rows)).collect();
    for (w, _) in target.terms() {
        key_of(w.clone(), &mut rows);
    }
    let mut a = FpMatrix::zeros(field, row_keys.len(), mus.len());
    for (c, &r) in col_rows.iter().enumerate() {
        a.set(r, c, 1);
    }
    let rhs: Vec<u32> = row_keys.iter().map(|w| target.coeff(w).value()).collect();
    match solve_linear(&a, &rhs)? {
        SolveOutcome::Inconsistent => {
            let stray = row_keys
                .iter()
                .find(|w| !col_rows.iter().any(|&r| row_keys[r] == **w) && !target.coeff(w).is_zero())
                .map(|w| Polynomial::display_monomial(tp.base(), w))
                .unwrap_or_else(|| "an unreachable monomial".into());
            Ok(ClassResult::Failed(format!("target needs {stray}, outside the bounded fibers")))
        }
        SolveOutcome::Solved(sol) => Ok(ClassResult::Solved {
            terms: mus
                .iter()
                .zip(&sol.particular)
                .filter(|(_, &v)| v != 0)
                .map(|(mu, &v)| (lift_exponent(q, mu, gamma), v))
                .collect(),
            unknowns: mus.len() as u64,
        }),
    }
}

/// Searches for `G` with per-variable degree at most `bound` such that
/// `Φ^e(G·−)` on `S^{⊗n}` lifts `m` along `Δ_n`. The default bound is
/// `deg(m.g) + (n−1)(q−1)`.
pub fn dn_membership(tp: &TensorPower, target: DnTarget, m: &CartierMap, bound: Option<u32>, caps: &Caps) -> Result<DnMembership> {
    check_target(tp, target)?;
    if !m.g().ring().same_as(tp.base()) {
        return Err(Error::ContextMismatch);
    }
    let q = m.q();
    let deg = m.g().total_degree() as u32;
    let bound = bound.unwrap_or(deg + (tp.n() - 1) * (q - 1));
    if bound < m.g().max_var_degree() {
        return Err(Error::precondition(format!("degree bound {bound} is below the degree of the multiplier")));
    }
    let count = class_count(tp, q, caps)?;
    let results: Vec<Result<Option<(ExpVec, ClassResult)>>> = (0..count)
        .into_par_iter()
        .map(|idx| {
            let gamma = class_exponent(tp, q, idx);
            let Some(surplus) = class_surplus(tp, target, q, &gamma) else {
                return Ok(None);
            };
            let mono = Polynomial::monomial(tp.ring(), gamma.clone(), 1);
            let rhs = m.apply(&tp.delta_eval(&mono)?)?;
            let mus = allowed_exponents(tp, q, bound, &gamma, &surplus, caps)?;
            Ok(Some((gamma.clone(), solve_class(tp, q, &gamma, &mus, &rhs)?)))
        })
        .collect();
    let mut terms = Vec::new();
    let mut classes = 0;
    let mut unknowns = 0;
    for r in results {
        match r? {
            None => {}
            Some((gamma, ClassResult::Failed(reason))) => {
                return Ok(DnMembership::NotFound {
                    bound,
                    class: gamma.into_vec(),
                    reason,
                })
            }
            Some((_, ClassResult::Solved { terms: t, unknowns: u })) => {
                classes += 1;
                unknowns += u;
                terms.extend(t);
            }
        }
    }
    Ok(DnMembership::Found(DnWitness {
        e: m.e(),
        lift: Polynomial::from_terms(tp.ring(), terms),
        bound,
        classes,
        unknowns,
    }))
}

/// Re-checks a lifting from scratch: the diagram on every constrained
/// class, membership of the images in `R^{⊗n}` for Segre targets, and
/// `𝔡_n`-compatibility for ambient targets. `None` means it passed.
pub fn verify_dn_witness(tp: &TensorPower, target: DnTarget, m: &CartierMap, lift: &Polynomial, caps: &Caps) -> Result<Option<String>> {
    check_target(tp, target)?;
    let q = m.q();
    if lift.is_zero() {
        return Ok(Some("the lifting is zero".into()));
    }
    let count = class_count(tp, q, caps)?;
    let failure = (0..count)
        .into_par_iter()
        .map(|idx| -> Result<Option<String>> {
            let gamma = class_exponent(tp, q, idx);
            let Some(surplus) = class_surplus(tp, target, q, &gamma) else {
                return Ok(None);
            };
            let mono = Polynomial::monomial(tp.ring(), gamma.clone(), 1);
            let image = frobenius_trace(&lift.checked_mul(&mono)?, m.e())?;
            let expected = m.apply(&tp.delta_eval(&mono)?)?;
            if tp.delta_eval(&image)? != expected {
                return Ok(Some(format!("diagram fails on {mono}: lifted image {image}, expected {expected}")));
            }
            for (ex, _) in image.terms() {
                for (k, &d) in surplus.iter().enumerate() {
                    let (x, y) = tp.factor_bidegree(ex, k as u32 + 1);
                    if y as i64 - x as i64 != d {
                        return Ok(Some(format!("image {image} of {mono} leaves R^⊗{}", tp.n())));
                    }
                }
            }
            Ok(None)
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    if let Some(found) = failure {
        return found;
    }
    if target == DnTarget::Ambient && tp.n() >= 2 {
        let lifted = CartierMap::new(m.e(), lift.clone())?;
        if let Some(w) = compatibility_witness(&lifted, &tp.diagonal_ideal()?, caps.elements)? {
            return Ok(Some(format!("lifting is not compatible with the diagonal: image {}", w.image)));
        }
    }
    Ok(None)
}

/// Multiplier monomials `x^η` (per-variable degree at most `g_bound`,
/// default `q−1`) whose maps `Φ^e(x^η·−)` lift along `Δ_n` with lifting
/// degree at most `g_bound + (n−1)(q−1)`.
///
/// The coefficient of `x^ω` in `φ(F^e_* Δ_n(x^γ))` for `φ = Φ^e(g·−)` is a
/// single coefficient of `g`, so the solution space is spanned by monomials.
pub fn dn_map_space(tp: &TensorPower, target: DnTarget, e: u32, g_bound: Option<u32>, caps: &Caps) -> Result<Vec<ExpVec>> {
    check_target(tp, target)?;
    let q = frobenius_scale(tp.base().characteristic(), e)?;
    let g_bound = g_bound.unwrap_or(q - 1);
    let lift_bound = g_bound + (tp.n() - 1) * (q - 1);
    let nb = tp.base().num_vars();
    let candidates = (g_bound as u128 + 1).pow(nb as u32);
    if candidates > caps.elements as u128 {
        return Err(Error::cap("multiplier monomials", candidates, caps.elements as u128));
    }
    let count = class_count(tp, q, caps)?;
    let reachable: Vec<Option<(ExpVec, std::collections::HashSet<ExpVec>)>> = (0..count)
        .into_par_iter()
        .map(|idx| -> Result<_> {
            let gamma = class_exponent(tp, q, idx);
            let Some(surplus) = class_surplus(tp, target, q, &gamma) else {
                return Ok(None);
            };
            let mus = allowed_exponents(tp, q, lift_bound, &gamma, &surplus, caps)?;
            Ok(Some((tp.collapse(&gamma), mus.iter().map(|mu| tp.collapse(mu)).collect())))
        })
        .collect::<Result<_>>()?;
    let etas = boxes(&vec![g_bound; nb]);
    Ok(etas
        .into_par_iter()
        .filter(|eta| {
            reachable.iter().flatten().all(|(dgamma, fibers)| {
                let mut omega = Vec::with_capacity(nb);
                for (&h, &d) in eta.iter().zip(dgamma.as_slice()) {
                    let t = h + d;
                    if t < q - 1 || (t - (q - 1)) % q != 0 {
                        return true;
                    }
                    omega.push((t - (q - 1)) / q);
                }
                fibers.contains(&ExpVec::from_vec(omega))
            })
        })
        .map(ExpVec::from_vec)
        .collect())
}

/// Searches `e = 1..=e_max` for `φ = Φ^e(g·−)` with `φ(F^e_* f) = 1` that
/// lifts along `Δ_n`. The lifting is re-verified before it is returned.
pub fn dn_regularity_witness(
    tp: &TensorPower,
    target: DnTarget,
    f: &Polynomial,
    e_max: u32,
    g_bound: Option<u32>,
    caps: &Caps,
) -> Result<Option<RegularityWitness>> {
    if f.is_zero() {
        return Err(Error::precondition("a regularity witness needs f != 0"));
    }
    if !f.ring().same_as(tp.base()) {
        return Err(Error::ContextMismatch);
    }
    if target == DnTarget::Segre && !segre_membership(f) {
        return Err(Error::precondition(format!("{f} is not in the Segre product")));
    }
    let field = f.field();
    for e in 1..=e_max {
        let q = frobenius_scale(tp.base().characteristic(), e)?;
        let space = dn_map_space(tp, target, e, g_bound, caps)?;
        if space.is_empty() {
            continue;
        }
        if space.len() as u64 > caps.unknowns {
            return Err(Error::cap("multiplier unknowns", space.len() as u128, caps.unknowns as u128));
        }
        // Φ^e(x^η f) for each candidate η, then solve Σ c_η Φ^e(x^η f) = 1.
        let images: Vec<Polynomial> = space
            .iter()
            .map(|eta| frobenius_trace(&f.mul_monomial(eta), e))
            .collect::<Result<_>>()?;
        let mut row_of: HashMap<ExpVec, usize> = HashMap::new();
        let one = ExpVec::zero(tp.base().num_vars());
        row_of.insert(one.clone(), 0);
        for img in &images {
            for (w, _) in img.terms() {
                let next = row_of.len();
                row_of.entry(w.clone()).or_insert(next);
            }
        }
        let mut a = FpMatrix::zeros(field, row_of.len(), space.len());
        for (c, img) in images.iter().enumerate() {
            for (w, v) in img.terms() {
                a.set(row_of[w], c, *v);
            }
        }
        let mut rhs = vec![0; row_of.len()];
        rhs[0] = 1;
        let SolveOutcome::Solved(sol) = solve_linear(&a, &rhs)? else {
            continue;
        };
        let g = Polynomial::from_terms(tp.base(), space.iter().cloned().zip(sol.particular.iter().copied()));
        let map = CartierMap::new(e, g)?;
        let lift_bound = g_bound.unwrap_or(q - 1) + (tp.n() - 1) * (q - 1);
        let DnMembership::Found(w) = dn_membership(tp, target, &map, Some(lift_bound), caps)? else {
            return Err(Error::Invariant(format!("{map} lies in the lifting space but no lifting was found")));
        };
        if let Some(reason) = verify_dn_witness(tp, target, &map, &w.lift, caps)? {
            return Err(Error::Invariant(format!("regularity witness failed re-verification: {reason}")));
        }
        if !map.apply(f)?.is_one() {
            return Err(Error::Invariant(format!("{map} does not send {f} to 1")));
        }
        return Ok(Some(RegularityWitness { map, lift: w.lift }));
    }
    Ok(None)
}
