//! Test ideals `τ(𝔞^t)` in polynomial rings via the ascending chain
//! `Φ^e(F^e_* 𝔞^{⌈t p^e⌉})`, and the containment checks built on them.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cartier::{frobenius_components, frobenius_scale, frobenius_trace};
use crate::diagonal::{dn_map_space, Caps, DnTarget, TensorPower};
use crate::error::{Error, Result};
use crate::groebner::IdealHandle;
use crate::poly::{ExpVec, Polynomial};
use crate::report::Verdict;
use crate::ring::Block;
use crate::segre::{enumerate_generators, SegreContext};

/// A nonnegative rational exponent in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RationalExponent {
    num: u64,
    den: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl RationalExponent {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::precondition("exponent denominator must be >= 1"));
        }
        let g = gcd(num, den).max(1);
        Ok(RationalExponent {
            num: num / g,
            den: den / g,
        })
    }

    pub fn integer(n: u64) -> Self {
        RationalExponent { num: n, den: 1 }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `⌈t·k⌉`.
    pub fn ceil_mul(&self, k: u64) -> u64 {
        let prod = self.num as u128 * k as u128;
        prod.div_ceil(self.den as u128) as u64
    }

    pub fn scale(&self, k: u64) -> Self {
        Self::new(self.num * k, self.den).expect("denominator is nonzero")
    }
}

impl fmt::Display for RationalExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for RationalExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            offset: 0,
            message: format!("expected a rational like 3 or 3/2, found {s:?}"),
        };
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        Self::new(n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?)
    }
}

impl Serialize for RationalExponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Default bound on the number of spanning images per level.
pub const DEFAULT_IMAGE_CAP: u64 = 1_000_000;

/// `Φ^e(F^e_* J)`, generated by the images `Φ^e(x^α g)` of the generators
/// `g` of `J`; the nonzero ones are exactly the Frobenius components of `g`.
pub fn trace_image_ideal(e: u32, j: &IdealHandle) -> Result<IdealHandle> {
    trace_image_ideal_capped(e, j, DEFAULT_IMAGE_CAP)
}

pub fn trace_image_ideal_capped(e: u32, j: &IdealHandle, cap: u64) -> Result<IdealHandle> {
    frobenius_scale(j.ring().characteristic(), e)?;
    let parts: Vec<Vec<Polynomial>> = j
        .generators()
        .par_iter()
        .map(|g| Ok(frobenius_components(g, e)?.into_iter().map(|(_, c)| c).collect()))
        .collect::<Result<_>>()?;
    let total: u64 = parts.iter().map(|p| p.len() as u64).sum();
    if total > cap {
        return Err(Error::cap("spanning images", total as u128, cap as u128));
    }
    IdealHandle::new(j.ring(), parts.into_iter().flatten().collect()).map(|i| i.minimalized())
}

/// `𝔞^k`, with `𝔞^0 = (1)`.
fn power_or_unit(a: &IdealHandle, k: u64) -> Result<IdealHandle> {
    if k == 0 {
        return IdealHandle::new(a.ring(), vec![Polynomial::one(a.ring())]);
    }
    let k = u32::try_from(k).map_err(|_| Error::precondition(format!("ideal power {k} is too large")))?;
    Ok(a.minimalized().power(k)?.minimalized())
}

#[derive(Clone, Debug, Serialize)]
pub struct TestIdealResult {
    #[serde(serialize_with = "serialize_ideal")]
    pub ideal: IdealHandle,
    /// First `e` with `chain[e] = chain[e+1]`.
    pub stabilized_at_e: Option<u32>,
    /// Levels `e = 1, 2, …` in order.
    #[serde(serialize_with = "serialize_ideals")]
    pub chain: Vec<IdealHandle>,
    /// Set when `p` divides the denominator of `t`; stabilization may come
    /// late in that regime.
    pub p_divides_denominator: bool,
}

impl TestIdealResult {
    pub fn stabilized(&self) -> bool {
        self.stabilized_at_e.is_some()
    }
}

pub(crate) fn ideal_strings(i: &IdealHandle) -> Vec<String> {
    i.groebner_basis().iter().map(|g| g.to_string()).collect()
}

fn serialize_ideal<S: Serializer>(i: &IdealHandle, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ideal_strings(i))
}

fn serialize_ideals<S: Serializer>(v: &[IdealHandle], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ideal_strings))
}

/// Computes `chain[e] = Φ^e(F^e_* 𝔞^{⌈t p^e⌉})` for `e = 1..=e_max` and
/// stops at the first `e` with `chain[e] = chain[e+1]`.
///
/// The chain is ascending; a descent is reported as an invariant error.
pub fn test_ideal_bms(a: &IdealHandle, t: RationalExponent, e_max: u32) -> Result<TestIdealResult> {
    if e_max < 1 {
        return Err(Error::precondition("test ideal chains need e_max >= 1"));
    }
    if a.is_zero_ideal() {
        return Err(Error::precondition("test ideals need a nonzero ideal"));
    }
    let p = a.ring().characteristic() as u64;
    let mut chain: Vec<IdealHandle> = Vec::new();
    let mut stabilized_at_e = None;
    for e in 1..=e_max {
        let q = frobenius_scale(p as u32, e)? as u64;
        let level = trace_image_ideal(e, &power_or_unit(a, t.ceil_mul(q))?)?;
        if let Some(prev) = chain.last() {
            if !prev.is_subset_of(&level)? {
                return Err(Error::Invariant(format!("test ideal chain descends between e = {} and e = {e}", e - 1)));
            }
            if level.is_subset_of(prev)? {
                stabilized_at_e = Some(e - 1);
                chain.push(level);
                break;
            }
        }
        chain.push(level);
    }
    let ideal = match stabilized_at_e {
        Some(e) => chain[e as usize - 1].clone(),
        None => chain.last().expect("e_max >= 1").clone(),
    };
    Ok(TestIdealResult {
        ideal,
        stabilized_at_e,
        chain,
        p_divides_denominator: t.denominator() % p == 0,
    })
}

/// `⌈mt(q−1)⌉ ≤ m⌈t(q−1)⌉ ≤ ⌈mt(q−1)⌉ + m`.
pub fn ceiling_identity_check(m: u64, t: RationalExponent, q: u64) -> Result<bool> {
    if m < 1 || q < 2 {
        return Err(Error::precondition("ceiling check needs m >= 1 and q >= 2"));
    }
    let lo = t.scale(m).ceil_mul(q - 1);
    let mid = m * t.ceil_mul(q - 1);
    Ok(lo <= mid && mid <= lo + m)
}

/// `τ(𝔞^{tn}) ⊆ τ(𝔞^t)^n` in a polynomial ring. Inconclusive when either
/// chain fails to stabilize by `e_max`.
pub fn subadditivity_check(a: &IdealHandle, t: RationalExponent, n: u32, e_max: u32) -> Result<Verdict> {
    if n < 1 {
        return Err(Error::precondition("subadditivity needs n >= 1"));
    }
    let lhs = test_ideal_bms(a, t.scale(n as u64), e_max)?;
    let rhs = test_ideal_bms(a, t, e_max)?;
    if !lhs.stabilized() || !rhs.stabilized() {
        return Ok(Verdict::Inconclusive);
    }
    let rhs_power = rhs.ideal.power(n)?;
    Ok(Verdict::from_bool(lhs.ideal.is_subset_of(&rhs_power)?))
}

/// `τ(𝔮^h) ⊆ 𝔮` for an ideal with at most `h` generators.
///
/// A level of the chain that escapes `𝔮` is a definite failure; containment
/// at an unstabilized level is inconclusive.
pub fn briancon_skoda_check(q_ideal: &IdealHandle, h: u32, e_max: u32) -> Result<Verdict> {
    let gens = q_ideal.generators().iter().filter(|g| !g.is_zero()).count();
    if gens > h as usize {
        return Err(Error::precondition(format!("{gens} generators exceed h = {h}")));
    }
    let tau = test_ideal_bms(q_ideal, RationalExponent::integer(h as u64), e_max)?;
    if !tau.ideal.is_subset_of(q_ideal)? {
        return Ok(Verdict::Fail);
    }
    Ok(if tau.stabilized() {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    })
}

/// One level of `τ(R, D^{(n)}; 𝔞^t)` from below: the ideal generated by
/// `φ(F^e_*(c·u))` where `φ` runs over a basis of the level-`e` lifting
/// space, `u` over generators of `𝔞^{⌈t(q−1)⌉}` and `c` over module
/// generators of `F^e_*` of the ring (monomials `x^α`, or the Segre
/// generators with outer degree at most 1).
///
/// This is a single level of an ascending chain, not its limit. Ideals of
/// the Segre ring are represented by their extensions to the ambient ring.
pub fn dn_truncated_test_ideal(
    tp: &TensorPower,
    target: DnTarget,
    e: u32,
    a: &IdealHandle,
    t: RationalExponent,
    caps: &Caps,
) -> Result<IdealHandle> {
    let base = tp.base();
    if !a.ring().same_as(base) {
        return Err(Error::ContextMismatch);
    }
    let q = frobenius_scale(base.characteristic(), e)?;
    let space = dn_map_space(tp, target, e, None, caps)?;
    let multipliers: Vec<ExpVec> = match target {
        DnTarget::Ambient => {
            let n = base.num_vars();
            let count = (q as u128).pow(n as u32);
            if count > caps.elements as u128 {
                return Err(Error::cap("multiplier monomials", count, caps.elements as u128));
            }
            (0..count as u64)
                .map(|mut idx| {
                    ExpVec::from_vec(
                        (0..n)
                            .map(|_| {
                                let d = (idx % q as u64) as u32;
                                idx /= q as u64;
                                d
                            })
                            .collect(),
                    )
                })
                .collect()
        }
        DnTarget::Segre => {
            let count = |b: Block| base.variables().iter().filter(|v| v.id.block == b).count() as u32;
            let seg = SegreContext::new(base.characteristic() as u64, e, count(Block::X) - 1, count(Block::Y) - 1)?;
            enumerate_generators(&seg, 1).iter().map(|g| g.monomial(q)).collect()
        }
    };
    let us = power_or_unit(a, t.ceil_mul(q as u64 - 1))?;
    let work = space.len() as u128 * multipliers.len() as u128 * us.generators().len() as u128;
    if work > caps.elements as u128 {
        return Err(Error::cap("spanning images", work, caps.elements as u128));
    }
    let images: Vec<Polynomial> = space
        .par_iter()
        .map(|eta| -> Result<Vec<Polynomial>> {
            let mut out = Vec::new();
            for u in us.generators() {
                let gu = u.mul_monomial(eta);
                for c in &multipliers {
                    let img = frobenius_trace(&gu.mul_monomial(c), e)?;
                    if !img.is_zero() {
                        out.push(img);
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(IdealHandle::new(base, images)?.minimalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn ideal(ring: &std::sync::Arc<Ring>, gens: &[&str]) -> IdealHandle {
        IdealHandle::parse(ring, gens).unwrap()
    }

    #[test]
    fn rational_parsing_and_ceilings() {
        let t: RationalExponent = "6/4".parse().unwrap();
        assert_eq!((t.numerator(), t.denominator()), (3, 2));
        assert_eq!(t.to_string(), "3/2");
        assert_eq!(t.ceil_mul(3), 5);
        assert!("1/0".parse::<RationalExponent>().is_err());
        assert!("x".parse::<RationalExponent>().is_err());
    }

    #[test]
    fn trace_images() {
        let s = Ring::new(2, &["x", "y"]).unwrap();
        let j = ideal(&s, &["x^2*y^2"]);
        assert!(trace_image_ideal(1, &j).unwrap().same_ideal(&ideal(&s, &["x*y"])).unwrap());
        assert!(trace_image_ideal(1, &ideal(&s, &["1"])).unwrap().is_unit());
        let m4 = ideal(&s, &["x", "y"]).power(4).unwrap();
        assert!(trace_image_ideal(1, &m4).unwrap().same_ideal(&ideal(&s, &["x", "y"])).unwrap());
    }

    #[test]
    fn chains() {
        let s = Ring::new(2, &["x", "y"]).unwrap();
        let m = ideal(&s, &["x", "y"]);
        let r = test_ideal_bms(&m, RationalExponent::integer(2), 4).unwrap();
        assert!(r.stabilized());
        assert!(r.ideal.same_ideal(&m).unwrap());
        let unit = ideal(&s, &["1"]);
        assert!(test_ideal_bms(&unit, "5/3".parse().unwrap(), 3).unwrap().ideal.is_unit());
        let x = Ring::new(3, &["x"]).unwrap();
        let px = ideal(&x, &["x"]);
        assert!(test_ideal_bms(&px, RationalExponent::integer(1), 3).unwrap().ideal.same_ideal(&px).unwrap());
        assert!(test_ideal_bms(&px, RationalExponent::integer(1), 0).is_err());
    }

    #[test]
    fn ceiling_examples() {
        assert!(ceiling_identity_check(3, RationalExponent::new(1, 2).unwrap(), 5).unwrap());
        for m in 1..=20 {
            for q in 2..=49 {
                for den in 1..=12 {
                    for num in 0..=2 * den {
                        let t = RationalExponent::new(num, den).unwrap();
                        assert!(ceiling_identity_check(m, t, q).unwrap(), "{m} {t} {q}");
                    }
                }
            }
        }
    }

    #[test]
    fn containment_checks() {
        let s2 = Ring::new(2, &["x", "y"]).unwrap();
        let m = ideal(&s2, &["x", "y"]);
        assert_eq!(subadditivity_check(&m, RationalExponent::integer(1), 2, 4).unwrap(), Verdict::Pass);
        assert_eq!(subadditivity_check(&m, RationalExponent::integer(1), 1, 4).unwrap(), Verdict::Pass);
        assert_eq!(briancon_skoda_check(&m, 2, 4).unwrap(), Verdict::Pass);
        let s5 = Ring::new(5, &["x", "y"]).unwrap();
        let a = ideal(&s5, &["x^2", "y^3"]);
        assert_eq!(subadditivity_check(&a, RationalExponent::integer(1), 2, 3).unwrap(), Verdict::Pass);
        let s3 = Ring::new(3, &["x", "y"]).unwrap();
        assert_eq!(briancon_skoda_check(&ideal(&s3, &["x^2", "y^3"]), 2, 3).unwrap(), Verdict::Pass);
        assert!(briancon_skoda_check(&ideal(&s3, &["x", "y", "x*y"]), 2, 3).is_err());
    }

    #[test]
    fn truncated_level_contains_x0y0() {
        let seg = SegreContext::new(2, 1, 1, 1).unwrap();
        let tp = TensorPower::new(seg.ring(), 2).unwrap();
        let a = ideal(seg.ring(), &["x0*y0"]);
        let level = dn_truncated_test_ideal(&tp, DnTarget::Segre, 1, &a, RationalExponent::integer(1), &Caps::default()).unwrap();
        assert!(a.is_subset_of(&level).unwrap());
    }

    #[test]
    fn truncated_level_in_polynomial_ring() {
        let s = Ring::new(2, &["x", "y"]).unwrap();
        let tp = TensorPower::new(&s, 1).unwrap();
        let m = ideal(&s, &["x", "y"]);
        let t = RationalExponent::integer(2);
        let level = dn_truncated_test_ideal(&tp, DnTarget::Ambient, 1, &m, t, &Caps::default()).unwrap();
        let direct = trace_image_ideal(1, &m.power(t.ceil_mul(1) as u32).unwrap()).unwrap();
        assert!(level.same_ideal(&direct).unwrap());
        let unit = ideal(&s, &["1"]);
        let zero_t = dn_truncated_test_ideal(&tp, DnTarget::Ambient, 1, &unit, RationalExponent::integer(0), &Caps::default()).unwrap();
        assert!(zero_t.is_unit());
    }
}
