//! p^{-e}-linear maps on polynomial rings.
//!
//! Every p^{-e}-linear map `F^e_* S → S` on a polynomial ring is `Φ^e`
//! precomposed with multiplication by some `g`, so a map is stored as the
//! pair `(e, g)`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::IdealHandle;
use crate::poly::{ExpVec, Polynomial};

/// `p^e`, as long as it fits comfortably in an exponent.
pub fn frobenius_scale(p: u32, e: u32) -> Result<u32> {
    (p as u64)
        .checked_pow(e)
        .filter(|&q| q <= u32::MAX as u64 / 4)
        .map(|q| q as u32)
        .ok_or_else(|| Error::precondition(format!("{p}^{e} is too large")))
}

/// `a = mu·q + alpha` with `0 <= alpha < q`, per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FrobDecomp {
    pub mu: ExpVec,
    pub alpha: ExpVec,
    pub e: u32,
}

impl FrobDecomp {
    pub fn recompose(&self, q: u32) -> ExpVec {
        ExpVec::from_vec(
            self.mu
                .as_slice()
                .iter()
                .zip(self.alpha.as_slice())
                .map(|(&m, &a)| m * q + a)
                .collect(),
        )
    }
}

pub fn frob_decompose(a: &ExpVec, p: u32, e: u32) -> Result<FrobDecomp> {
    if e == 0 {
        return Err(Error::precondition("Frobenius level e must be >= 1"));
    }
    let q = frobenius_scale(p, e)?;
    let (mu, alpha) = a.as_slice().iter().map(|&v| (v / q, v % q)).unzip();
    Ok(FrobDecomp {
        mu: ExpVec::from_vec(mu),
        alpha: ExpVec::from_vec(alpha),
        e,
    })
}

/// The Frobenius trace `Φ^e`: `c·x^(μq + α) ↦ c·x^μ` when every `α_v = q − 1`,
/// and `0` otherwise.
pub fn frobenius_trace(f: &Polynomial, e: u32) -> Result<Polynomial> {
    if e == 0 {
        return Err(Error::precondition("Frobenius level e must be >= 1"));
    }
    let q = frobenius_scale(f.ring().characteristic(), e)?;
    let terms = f.terms().iter().filter_map(|(ex, c)| {
        ex.as_slice()
            .iter()
            .all(|&v| v % q == q - 1)
            .then(|| (ExpVec::from_vec(ex.as_slice().iter().map(|&v| v / q).collect()), *c))
    });
    Ok(Polynomial::from_terms(f.ring(), terms))
}

/// The components `f_β` in `f = Σ_β f_β^q · x^β` (β ∈ [0, q−1]^N), keyed by
/// `β`, zero components omitted.
///
/// `Φ^e(F^e_*(x^α f)) = f_{(q−1)−α}`, so these are exactly the nonzero
/// values of `Φ^e` on the spanning set `{x^α f}` of `F^e_*(f)`.
pub fn frobenius_components(f: &Polynomial, e: u32) -> Result<Vec<(ExpVec, Polynomial)>> {
    let q = frobenius_scale(f.ring().characteristic(), e)?;
    let mut parts: HashMap<ExpVec, Vec<(ExpVec, u32)>> = HashMap::new();
    for (ex, c) in f.terms() {
        let beta = ExpVec::from_vec(ex.as_slice().iter().map(|&v| v % q).collect());
        let mu = ExpVec::from_vec(ex.as_slice().iter().map(|&v| v / q).collect());
        parts.entry(beta).or_default().push((mu, *c));
    }
    let mut out: Vec<_> = parts
        .into_iter()
        .map(|(beta, terms)| (beta, Polynomial::from_terms(f.ring(), terms)))
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// The map `F^e_* f ↦ Φ^e(F^e_*(g·f))`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CartierMap {
    e: u32,
    #[serde(serialize_with = "crate::report::display")]
    g: Polynomial,
}

impl CartierMap {
    pub fn new(e: u32, g: Polynomial) -> Result<Self> {
        if e == 0 {
            return Err(Error::precondition("Frobenius level e must be >= 1"));
        }
        if g.is_zero() {
            return Err(Error::precondition("the premultiplier of a map must be nonzero"));
        }
        frobenius_scale(g.ring().characteristic(), e)?;
        Ok(CartierMap { e, g })
    }

    /// `Φ^e` itself.
    pub fn trace(ring: &std::sync::Arc<crate::ring::Ring>, e: u32) -> Result<Self> {
        Self::new(e, Polynomial::one(ring))
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn g(&self) -> &Polynomial {
        &self.g
    }

    pub fn q(&self) -> u32 {
        frobenius_scale(self.g.ring().characteristic(), self.e).expect("checked at construction")
    }

    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        frobenius_trace(&self.g.checked_mul(f)?, self.e)
    }

    /// `self · other = self ∘ F^e_* other`, which is `(e + d, g^{p^d}·h)`.
    pub fn compose(&self, other: &CartierMap) -> Result<CartierMap> {
        let g = self.g.frobenius_power(other.e).checked_mul(&other.g)?;
        CartierMap::new(self.e + other.e, g)
    }

    /// `(self · r)(F^e_* f) = self(F^e_*(r·f))`.
    pub fn right_multiply(&self, r: &Polynomial) -> Result<CartierMap> {
        if r.is_zero() {
            return Err(Error::precondition("right multiplication by zero"));
        }
        CartierMap::new(self.e, self.g.checked_mul(r)?)
    }
}

impl fmt::Display for CartierMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phi^{} * ({})", self.e, self.g)
    }
}

pub fn cartier_apply(m: &CartierMap, f: &Polynomial) -> Result<Polynomial> {
    m.apply(f)
}

pub fn cartier_compose(phi: &CartierMap, psi: &CartierMap) -> Result<CartierMap> {
    phi.compose(psi)
}

pub fn right_multiply(m: &CartierMap, r: &Polynomial) -> Result<CartierMap> {
    m.right_multiply(r)
}

/// A map `(e, c^{-1}·x^{(q−1)−β})` with `φ(F^e_* f) = 1`, built from a Frobenius
/// component `f_β = c` of `f` that is a nonzero constant. `None` when no
/// component is constant (a splitting may still exist).
pub fn splitting_from_unit_component(f: &Polynomial, e: u32) -> Result<Option<CartierMap>> {
    let q = frobenius_scale(f.ring().characteristic(), e)?;
    for (beta, comp) in frobenius_components(f, e)? {
        if comp.num_terms() == 1 && comp.terms()[0].0.is_one() {
            let c = f.field().wrap(comp.terms()[0].1);
            let alpha = ExpVec::from_vec(beta.as_slice().iter().map(|&b| q - 1 - b).collect());
            let g = Polynomial::monomial(f.ring(), alpha, c.inv().expect("nonzero constant").value() as i64);
            return CartierMap::new(e, g).map(Some);
        }
    }
    Ok(None)
}

/// An element of the spanning set of `F^e_* I` whose image escapes `I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityWitness {
    /// Index of the generator `g_i`.
    pub generator: usize,
    /// The multiplier exponent `α`.
    pub alpha: Vec<u32>,
    pub image: String,
}

/// `Some(witness)` when `m(F^e_* I) ⊄ I`, `None` when compatible.
///
/// The images of the spanning set `{x^α g_i : α ∈ [0, q−1]^N}` are the
/// Frobenius components of `m.g · g_i`, so only the nonzero ones are
/// generated; `cap` bounds their total number.
pub fn compatibility_witness(m: &CartierMap, ideal: &IdealHandle, cap: u64) -> Result<Option<CompatibilityWitness>> {
    let q = m.q();
    let mut seen: u64 = 0;
    for (i, gi) in ideal.generators().iter().enumerate() {
        let components = frobenius_components(&m.g.checked_mul(gi)?, m.e)?;
        seen += components.len() as u64;
        if seen > cap {
            return Err(Error::cap("spanning images", seen as u128, cap as u128));
        }
        for (beta, image) in components {
            if !ideal.contains(&image)? {
                let alpha = beta.as_slice().iter().map(|&b| q - 1 - b).collect();
                return Ok(Some(CompatibilityWitness {
                    generator: i,
                    alpha,
                    image: image.to_string(),
                }));
            }
        }
    }
    Ok(None)
}

/// Default bound on the spanning-set size for compatibility checks.
pub const DEFAULT_SPANNING_CAP: u64 = 1_000_000;

/// `m(F^e_* I) ⊆ I`.
pub fn ideal_compatible(m: &CartierMap, ideal: &IdealHandle) -> Result<bool> {
    Ok(compatibility_witness(m, ideal, DEFAULT_SPANNING_CAP)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn ring(p: u64, names: &[&str]) -> Arc<Ring> {
        Ring::new(p, names).unwrap()
    }

    fn poly(r: &Arc<Ring>, s: &str) -> Polynomial {
        Polynomial::parse(r, s).unwrap()
    }

    #[test]
    fn decomposition() {
        let d = frob_decompose(&ExpVec::from_vec(vec![7, 4]), 5, 1).unwrap();
        assert_eq!(d.mu.as_slice(), &[1, 0]);
        assert_eq!(d.alpha.as_slice(), &[2, 4]);
        let d = frob_decompose(&ExpVec::from_vec(vec![9]), 2, 2).unwrap();
        assert_eq!((d.mu.get(0), d.alpha.get(0)), (2, 1));
        assert_eq!(d.recompose(4).as_slice(), &[9]);
        assert!(frob_decompose(&ExpVec::from_vec(vec![1]), 2, 0).is_err());
    }

    #[test]
    fn trace_examples() {
        let r = ring(2, &["x", "y"]);
        assert!(frobenius_trace(&poly(&r, "x*y"), 1).unwrap().is_one());
        assert!(frobenius_trace(&poly(&r, "x"), 1).unwrap().is_zero());
        assert_eq!(frobenius_trace(&poly(&r, "x^3*y"), 1).unwrap(), poly(&r, "x"));
    }

    #[test]
    fn apply_examples() {
        let s = Ring::segre_ambient(2, 1, 1).unwrap();
        let m = CartierMap::new(1, poly(&s, "x1*y1")).unwrap();
        assert!(m.apply(&poly(&s, "x0*y0")).unwrap().is_one());
        let r = ring(3, &["x"]);
        assert!(CartierMap::trace(&r, 2).unwrap().apply(&Polynomial::one(&r)).unwrap().is_zero());
        let m = CartierMap::new(1, poly(&r, "x^2")).unwrap();
        assert!(m.apply(&Polynomial::one(&r)).unwrap().is_one());
    }

    #[test]
    fn compose_examples() {
        let r = ring(2, &["x", "y"]);
        let t1 = CartierMap::trace(&r, 1).unwrap();
        let t2 = CartierMap::trace(&r, 2).unwrap();
        assert_eq!(t2.compose(&t1).unwrap(), CartierMap::trace(&r, 3).unwrap());

        let x = ring(2, &["x"]);
        let theta = CartierMap::trace(&x, 1)
            .unwrap()
            .compose(&CartierMap::new(1, poly(&x, "x")).unwrap())
            .unwrap();
        assert_eq!(theta, CartierMap::new(2, poly(&x, "x")).unwrap());
        assert!(theta.apply(&poly(&x, "x^2")).unwrap().is_one());

        let a = CartierMap::new(1, poly(&r, "x")).unwrap();
        let b = CartierMap::new(1, poly(&r, "y")).unwrap();
        assert_eq!(a.compose(&b).unwrap(), CartierMap::new(2, poly(&r, "x^2*y")).unwrap());
    }

    #[test]
    fn right_multiply_examples() {
        let r = ring(2, &["x"]);
        let m = CartierMap::new(1, poly(&r, "x")).unwrap();
        assert_eq!(m.right_multiply(&Polynomial::one(&r)).unwrap(), m);
        let mx = m.right_multiply(&poly(&r, "x")).unwrap();
        assert_eq!(mx.g(), &poly(&r, "x^2"));
        assert!(mx.apply(&Polynomial::one(&r)).unwrap().is_zero());
        assert!(m.right_multiply(&Polynomial::zero(&r)).is_err());
        // The factor f^{p^d - 1} with d = 2, f = x over F_3.
        let x3 = ring(3, &["x"]);
        let t = CartierMap::trace(&x3, 1).unwrap();
        assert_eq!(t.right_multiply(&poly(&x3, "x^8")).unwrap().g(), &poly(&x3, "x^8"));
    }

    #[test]
    fn compatibility_examples() {
        let r = ring(2, &["x", "y"]);
        let x = IdealHandle::parse(&r, &["x"]).unwrap();
        assert!(ideal_compatible(&CartierMap::new(1, poly(&r, "x")).unwrap(), &x).unwrap());
        let w = compatibility_witness(&CartierMap::trace(&r, 1).unwrap(), &x, 100)
            .unwrap()
            .unwrap();
        // Φ(F_*(x·y)) = 1.
        assert_eq!(w.alpha, vec![0, 1]);
        assert_eq!(w.image, "1");
        assert!(ideal_compatible(&CartierMap::trace(&r, 1).unwrap(), &IdealHandle::zero(&r)).unwrap());
    }

    /// Direct enumeration of `Φ^e(x^α f)` over `α ∈ [0, q−1]^N`.
    fn spanning_images(f: &Polynomial, e: u32) -> Vec<Polynomial> {
        let q = frobenius_scale(f.ring().characteristic(), e).unwrap();
        let n = f.ring().num_vars();
        let mut out = vec![];
        let mut alpha = vec![0u32; n];
        loop {
            let img = frobenius_trace(&f.mul_monomial(&ExpVec::from_vec(alpha.clone())), e).unwrap();
            if !img.is_zero() {
                out.push(img);
            }
            let mut i = 0;
            while i < n {
                alpha[i] += 1;
                if alpha[i] < q {
                    break;
                }
                alpha[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        out
    }

    #[test]
    fn components_match_enumerated_images() {
        let r = ring(3, &["x", "y"]);
        for s in ["x^5*y + 2*x*y^7 + y^2 + 1", "x^2*y^2", "x + y"] {
            let f = poly(&r, s);
            let mut a: Vec<String> = spanning_images(&f, 1).iter().map(|p| p.to_string()).collect();
            let mut b: Vec<String> = frobenius_components(&f, 1).unwrap().iter().map(|(_, p)| p.to_string()).collect();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }

    fn small_poly(r: Arc<Ring>, max_exp: u32) -> impl Strategy<Value = Polynomial> {
        let n = r.num_vars();
        let p = r.characteristic();
        prop::collection::vec((prop::collection::vec(0..=max_exp, n), 0..p), 0..5)
            .prop_map(move |terms| Polynomial::from_terms(&r, terms.into_iter().map(|(e, c)| (ExpVec::from_vec(e), c))))
    }

    fn setup() -> impl Strategy<Value = (Arc<Ring>, u32)> {
        (prop::sample::select(vec![2u64, 3]), 1u32..=2).prop_map(|(p, e)| (ring(p, &["x", "y"]), e))
    }

    proptest! {
        #[test]
        fn composition_contract(((r, e), d) in setup().prop_flat_map(|s| (Just(s), 1u32..=2)),
                                seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let q = (r.characteristic() as u32).pow(e);
            let mut rand_poly = |deg: u32| {
                let terms: Vec<_> = (0..4)
                    .map(|_| (ExpVec::from_vec(vec![rng.gen_range(0..=deg), rng.gen_range(0..=deg)]), rng.gen_range(0..r.characteristic())))
                    .collect();
                Polynomial::from_terms(&r, terms)
            };
            let g = rand_poly(2 * q);
            let h = rand_poly(2 * q);
            let f = rand_poly(2 * q);
            prop_assume!(!g.is_zero() && !h.is_zero());
            let phi = CartierMap::new(e, g).unwrap();
            let psi = CartierMap::new(d, h).unwrap();
            let composed = phi.compose(&psi).unwrap();
            prop_assert_eq!(composed.apply(&f).unwrap(), phi.apply(&psi.apply(&f).unwrap()).unwrap());
        }

        #[test]
        fn linearity_and_projection((f, h, g, e) in setup().prop_flat_map(|(r, e)| {
            (small_poly(r.clone(), 6), small_poly(r.clone(), 3), small_poly(r, 6), Just(e))
        })) {
            let r = f.ring().clone();
            let q = (r.characteristic() as u32).pow(e);
            let g = if g.is_zero() { Polynomial::one(&r) } else { g };
            let m = CartierMap::new(e, g).unwrap();
            // p^{-e}-linearity.
            prop_assert_eq!(m.apply(&(h.frobenius_power(e) * f.clone())).unwrap(), h.clone() * m.apply(&f).unwrap());
            // Additivity.
            prop_assert_eq!(m.apply(&(f.clone() + h.clone())).unwrap(), m.apply(&f).unwrap() + m.apply(&h).unwrap());
            // Splitting identity.
            let corner = ExpVec::from_vec(vec![q - 1; r.num_vars()]);
            prop_assert_eq!(frobenius_trace(&f.frobenius_power(e).mul_monomial(&corner), e).unwrap(), f);
        }
    }

    #[test]
    fn key_reduction_induction() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 60 {
            let p = [2u64, 3][rng.gen_range(0..2)];
            let (e, d, m) = (rng.gen_range(1..=2), rng.gen_range(1..=2), rng.gen_range(2..=4u64));
            let r = ring(p, &["x", "y"]);
            let f = poly(&r, &format!("x^{}*y^{} + {}", rng.gen_range(0..4), rng.gen_range(0..4), rng.gen_range(1..p)));
            let (Some(phi), Some(psi)) = (splitting_from_unit_component(&f, e).unwrap(), splitting_from_unit_component(&f.pow(m - 1), d).unwrap()) else {
                continue;
            };
            let qd = p.pow(d);
            let theta = phi.compose(&psi.right_multiply(&f.pow(qd - 1)).unwrap()).unwrap();
            assert!(theta.apply(&f.pow(m)).unwrap().is_one(), "f = {f}, m = {m}");
            checked += 1;
        }
    }
}
