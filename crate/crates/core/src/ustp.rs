//! Symbolic powers of named primes in quotient rings and the containment
//! `𝔭^{(hn)} ⊆ 𝔭^n`.
//!
//! Ideals of `R = S/I` are represented by their preimages in `S`.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::IdealHandle;
use crate::poly::{ExpVec, Polynomial};
use crate::report::Verdict;
use crate::ring::Ring;
use crate::segre::exponents_of_degree;

/// `R = S/I` for a polynomial ring `S`.
#[derive(Clone, Debug)]
pub struct QuotientRingSpec {
    quotient: IdealHandle,
}

impl QuotientRingSpec {
    pub fn new(quotient: IdealHandle) -> Result<Self> {
        if quotient.is_unit() {
            return Err(Error::precondition("the quotient ideal must be proper"));
        }
        Ok(QuotientRingSpec { quotient })
    }

    /// `k[x_0..x_r, y_0..y_s] / I_2` presented on the variables
    /// `z_{ij}` of the `(r+1)×(s+1)` generic matrix.
    pub fn segre_cone(p: u64, r: u32, s: u32) -> Result<Self> {
        let names: Vec<String> = (0..=r).flat_map(|i| (0..=s).map(move |j| format!("z{i}{j}"))).collect();
        let ring = Ring::new(p, &names)?;
        let z = |i: u32, j: u32| Polynomial::var(&ring, (i * (s + 1) + j) as usize);
        let mut minors = Vec::new();
        for i in 0..=r {
            for k in i + 1..=r {
                for j in 0..=s {
                    for l in j + 1..=s {
                        minors.push(z(i, j) * z(k, l) - z(i, l) * z(k, j));
                    }
                }
            }
        }
        Self::new(IdealHandle::new(&ring, minors)?)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.quotient.ring()
    }

    pub fn quotient(&self) -> &IdealHandle {
        &self.quotient
    }

    pub fn characteristic(&self) -> u32 {
        self.ring().characteristic()
    }
}

/// A prime `𝔭` of `R` with its height and an element `s ∉ 𝔭` used to
/// saturate.
#[derive(Clone, Debug)]
pub struct PrimeSpec {
    /// `𝔭 + I` in `S`.
    ideal: IdealHandle,
    height: u32,
    s: Polynomial,
    notes: Vec<String>,
}

impl PrimeSpec {
    pub fn new(ring: &QuotientRingSpec, generators: Vec<Polynomial>, height: u32, s: Polynomial) -> Result<Self> {
        let p = IdealHandle::new(ring.ring(), generators)?.sum(ring.quotient())?;
        if p.is_unit() {
            return Err(Error::precondition("the prime must be proper"));
        }
        if p.is_subset_of(ring.quotient())? {
            return Err(Error::precondition("the prime equals the quotient ideal (the zero ideal of R)"));
        }
        if p.contains(&s)? {
            return Err(Error::precondition(format!("saturating element {s} lies in the prime")));
        }
        Ok(PrimeSpec {
            ideal: p,
            height,
            s,
            notes: vec![
                "primality of P is assumed, not checked".into(),
                "(P^m + I : s^inf) equals P^(m) only if s lies in every other associated prime of P^m".into(),
            ],
        })
    }

    pub fn ideal(&self) -> &IdealHandle {
        &self.ideal
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn saturating_element(&self) -> &Polynomial {
        &self.s
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn add_note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }
}

/// `𝔭^m + I` in `S`.
pub fn ordinary_power(p: &PrimeSpec, m: u32, ring: &QuotientRingSpec) -> Result<IdealHandle> {
    Ok(p.ideal.minimalized().power(m)?.sum(ring.quotient())?.minimalized())
}

/// `(𝔭^m + I : s^∞)`. Always contained in `𝔭^{(m)}`; equal to it when `s`
/// lies in every associated prime of `𝔭^m` other than `𝔭`.
pub fn symbolic_power(p: &PrimeSpec, m: u32, ring: &QuotientRingSpec) -> Result<IdealHandle> {
    if m < 1 {
        return Err(Error::precondition("symbolic power needs m >= 1"));
    }
    if !p.ideal.ring().same_as(ring.ring()) {
        return Err(Error::ContextMismatch);
    }
    Ok(ordinary_power(p, m, ring)?.saturate(&p.s)?.minimalized())
}

/// Monomial witness for `f ∈ 𝔭^{(m)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleOutcome {
    pub verdict: Verdict,
    pub witness: Option<String>,
    pub monomials_tried: u64,
}

/// Looks for a monomial `w ∉ 𝔭` of degree at most `witness_degree` with
/// `w·f ∈ 𝔭^m + I`. Returns `Pass` with the witness, or `Inconclusive`
/// when none is found among at most `power_cap` candidates. Never `Fail`.
pub fn symbolic_membership_oracle(
    f: &Polynomial,
    p: &PrimeSpec,
    m: u32,
    ring: &QuotientRingSpec,
    witness_degree: u32,
    power_cap: u64,
) -> Result<OracleOutcome> {
    let target = ordinary_power(p, m, ring)?;
    symbolic_membership_with(f, p, &target, witness_degree, power_cap)
}

fn symbolic_membership_with(
    f: &Polynomial,
    p: &PrimeSpec,
    target: &IdealHandle,
    witness_degree: u32,
    power_cap: u64,
) -> Result<OracleOutcome> {
    let ring = p.ideal.ring();
    let mut tried = 0;
    for d in 0..=witness_degree {
        for ex in exponents_of_degree(ring.num_vars(), d) {
            let w = Polynomial::monomial(ring, ExpVec::from_vec(ex), 1);
            if p.ideal.contains(&w)? {
                continue;
            }
            tried += 1;
            if tried > power_cap {
                return Ok(OracleOutcome {
                    verdict: Verdict::Inconclusive,
                    witness: None,
                    monomials_tried: tried - 1,
                });
            }
            if target.contains(&w.checked_mul(f)?)? {
                return Ok(OracleOutcome {
                    verdict: Verdict::Pass,
                    witness: Some(w.to_string()),
                    monomials_tried: tried,
                });
            }
        }
    }
    Ok(OracleOutcome {
        verdict: Verdict::Inconclusive,
        witness: None,
        monomials_tried: tried,
    })
}

/// Checks every generator of `symbolic_power(p, m)` against the element
/// oracle. `None` when all pass, else the first generator left unconfirmed.
pub fn cross_check_symbolic_power(
    p: &PrimeSpec,
    m: u32,
    ring: &QuotientRingSpec,
    witness_degree: u32,
    power_cap: u64,
) -> Result<Option<String>> {
    let sym = symbolic_power(p, m, ring)?;
    let target = ordinary_power(p, m, ring)?;
    let bad = sym
        .generators()
        .par_iter()
        .map(|g| Ok((g, symbolic_membership_with(g, p, &target, witness_degree, power_cap)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .find(|(_, o)| o.verdict != Verdict::Pass)
        .map(|(g, _)| g.to_string());
    Ok(bad)
}

#[derive(Clone, Debug, Serialize)]
pub struct UstpLevel {
    pub n: u32,
    pub verdict: Verdict,
    pub symbolic_generators: usize,
    pub power_generators: usize,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct UstpReport {
    pub height: u32,
    pub levels: Vec<UstpLevel>,
    pub verdict: Verdict,
    pub caveats: Vec<String>,
}

/// For `n = 1..=n_max`, checks `(𝔭^{hn} + I : s^∞) ⊆ 𝔭^n + I`. Each `n`
/// is verified on its own.
pub fn ustp_containment_report(ring: &QuotientRingSpec, p: &PrimeSpec, h: u32, n_max: u32) -> Result<UstpReport> {
    let levels = (1..=n_max)
        .into_par_iter()
        .map(|n| -> Result<UstpLevel> {
            let start = Instant::now();
            let sym = symbolic_power(p, h * n, ring)?;
            let pow = ordinary_power(p, n, ring)?;
            let ok = sym.is_subset_of(&pow)?;
            Ok(UstpLevel {
                n,
                verdict: Verdict::from_bool(ok),
                symbolic_generators: sym.generators().len(),
                power_generators: pow.generators().len(),
                millis: start.elapsed().as_millis(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = Verdict::from_bool(levels.iter().all(|l| l.verdict == Verdict::Pass));
    let mut caveats = p.notes.clone();
    caveats.push(format!("saturating element: {}", p.s));
    Ok(UstpReport {
        height: h,
        levels,
        verdict,
        caveats,
    })
}
