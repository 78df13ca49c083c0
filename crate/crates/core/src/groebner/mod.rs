//! Gröbner bases and the ideal operations built on them.
//!
//! Quotient rings are never modelled directly: to work in `S/I`, add `I`'s
//! generators to every ideal involved and compute in `S`.

mod buchberger;
mod order;

use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use buchberger::{normal_form, reduced_groebner_basis, OPoly};
pub use buchberger::postcheck_count;
pub use order::{MonomialOrder, OrderKind};

use crate::error::{Error, Result};
use crate::poly::{ExpVec, Polynomial};
use crate::ring::Ring;

#[derive(Debug)]
struct Basis {
    ordered: Vec<OPoly>,
    polys: Vec<Polynomial>,
}

/// An ideal given by generators, with its reduced Gröbner basis computed on
/// first use and cached.
#[derive(Debug)]
pub struct IdealHandle {
    ring: Arc<Ring>,
    generators: Vec<Polynomial>,
    order: MonomialOrder,
    basis: OnceLock<Basis>,
}

impl Clone for IdealHandle {
    fn clone(&self) -> Self {
        IdealHandle {
            ring: Arc::clone(&self.ring),
            generators: self.generators.clone(),
            order: self.order.clone(),
            basis: OnceLock::new(),
        }
    }
}

fn to_opoly(f: &Polynomial, extra: usize, order: &MonomialOrder) -> OPoly {
    let terms = f
        .terms()
        .iter()
        .map(|(e, c)| {
            let mut v = e.as_slice().to_vec();
            v.resize(v.len() + extra, 0);
            (ExpVec::from_vec(v), *c)
        })
        .collect();
    OPoly::from_terms(terms, order)
}

fn from_opoly(ring: &Arc<Ring>, f: &OPoly) -> Polynomial {
    let n = ring.num_vars();
    Polynomial::from_terms(
        ring,
        f.terms
            .iter()
            .map(|(e, c)| (ExpVec::from_vec(e.as_slice()[..n].to_vec()), *c)),
    )
}

impl IdealHandle {
    /// The ideal generated by `generators`, with the grevlex order on the
    /// ring's variable order.
    pub fn new(ring: &Arc<Ring>, generators: Vec<Polynomial>) -> Result<Self> {
        Self::with_order(ring, generators, MonomialOrder::grevlex(ring.num_vars()))
    }

    pub fn with_order(ring: &Arc<Ring>, generators: Vec<Polynomial>, order: MonomialOrder) -> Result<Self> {
        if order.num_vars() != ring.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "order on {} variables for a ring with {}",
                order.num_vars(),
                ring.num_vars()
            )));
        }
        if generators.iter().any(|g| !g.ring().same_as(ring)) {
            return Err(Error::ContextMismatch);
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(IdealHandle {
            ring: Arc::clone(ring),
            generators,
            order,
            basis: OnceLock::new(),
        })
    }

    /// Parses each string as a polynomial in `ring`.
    pub fn parse<S: AsRef<str>>(ring: &Arc<Ring>, generators: &[S]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|g| Polynomial::parse(ring, g.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, gens)
    }

    pub fn zero(ring: &Arc<Ring>) -> Self {
        Self::new(ring, Vec::new()).expect("empty generator list")
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    fn basis(&self) -> &Basis {
        self.basis.get_or_init(|| {
            let field = self.ring.field();
            let gens: Vec<OPoly> = self.generators.iter().map(|g| to_opoly(g, 0, &self.order)).collect();
            let ordered = reduced_groebner_basis(&gens, &self.order, field);
            let polys = ordered.iter().map(|g| from_opoly(&self.ring, g)).collect();
            Basis { ordered, polys }
        })
    }

    /// The reduced, monic Gröbner basis, sorted by descending leading
    /// monomial. Empty for the zero ideal.
    pub fn groebner_basis(&self) -> &[Polynomial] {
        &self.basis().polys
    }

    fn check_ring(&self, f: &Polynomial) -> Result<()> {
        if f.ring().same_as(&self.ring) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        self.check_ring(f)?;
        let nf = normal_form(&to_opoly(f, 0, &self.order), &self.basis().ordered, &self.order, self.ring.field());
        Ok(from_opoly(&self.ring, &nf))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        self.groebner_basis().first().is_some_and(Polynomial::is_one)
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    /// Every generator of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &IdealHandle) -> Result<bool> {
        if !self.ring.same_as(&other.ring) {
            return Err(Error::ContextMismatch);
        }
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_ideal(&self, other: &IdealHandle) -> Result<bool> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }

    /// `self + other`, keeping `self`'s order.
    pub fn sum(&self, other: &IdealHandle) -> Result<IdealHandle> {
        if !self.ring.same_as(&other.ring) {
            return Err(Error::ContextMismatch);
        }
        let mut gens = self.generators.clone();
        for g in &other.generators {
            if !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        Self::with_order(&self.ring, gens, self.order.clone())
    }

    /// The same ideal presented by its reduced Gröbner basis.
    pub fn minimalized(&self) -> IdealHandle {
        let out = IdealHandle {
            ring: Arc::clone(&self.ring),
            generators: self.groebner_basis().to_vec(),
            order: self.order.clone(),
            basis: OnceLock::new(),
        };
        let b = self.basis();
        let _ = out.basis.set(Basis {
            ordered: b.ordered.clone(),
            polys: b.polys.clone(),
        });
        out
    }

    /// `self^m`, generated by all `m`-fold products of the generators.
    pub fn power(&self, m: u32) -> Result<IdealHandle> {
        if m == 0 {
            return Err(Error::precondition("ideal power needs m >= 1"));
        }
        let mut current = self.generators.clone();
        for _ in 1..m {
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for a in &current {
                for g in &self.generators {
                    let prod = a * g;
                    if seen.insert(prod.clone()) {
                        next.push(prod);
                    }
                }
            }
            current = next;
        }
        Self::with_order(&self.ring, current, self.order.clone())
    }

    /// `self ∩ other`, by eliminating `t` from `t·self + (1 − t)·other`.
    pub fn intersect(&self, other: &IdealHandle) -> Result<IdealHandle> {
        if !self.ring.same_as(&other.ring) {
            return Err(Error::ContextMismatch);
        }
        if self.is_zero_ideal() || other.is_zero_ideal() {
            return Ok(IdealHandle::zero(&self.ring).with_order_of(self));
        }
        let n = self.ring.num_vars();
        let field = self.ring.field();
        let order = self.order.eliminating_tail(1);
        let t = {
            let mut v = vec![0; n + 1];
            v[n] = 1;
            ExpVec::from_vec(v)
        };
        let one = ExpVec::zero(n + 1);
        let mut gens = Vec::new();
        for g in &self.generators {
            let terms = to_opoly(g, 1, &order).terms.into_iter().map(|(e, c)| (e.mul(&t), c)).collect();
            gens.push(OPoly::from_terms(terms, &order));
        }
        for h in &other.generators {
            let base = to_opoly(h, 1, &order).terms;
            let mut terms: Vec<(ExpVec, u32)> = base.iter().map(|(e, c)| (e.mul(&one), *c)).collect();
            terms.extend(base.iter().map(|(e, c)| (e.mul(&t), field.neg(*c))));
            gens.push(OPoly::from_terms(terms, &order));
        }
        let basis = reduced_groebner_basis(&gens, &order, field);
        let kept = basis
            .iter()
            .filter(|g| g.lm().get(n) == 0)
            .map(|g| from_opoly(&self.ring, g))
            .collect();
        Self::with_order(&self.ring, kept, self.order.clone())
    }

    fn with_order_of(mut self, other: &IdealHandle) -> IdealHandle {
        self.order = other.order.clone();
        self
    }

    /// The colon ideal `(self : f)`.
    pub fn colon(&self, f: &Polynomial) -> Result<IdealHandle> {
        self.check_ring(f)?;
        if f.is_zero() {
            return Err(Error::precondition("colon by the zero polynomial"));
        }
        if self.contains(f)? {
            return Self::with_order(&self.ring, vec![Polynomial::one(&self.ring)], self.order.clone());
        }
        let principal = Self::with_order(&self.ring, vec![f.clone()], self.order.clone())?;
        let meet = self.intersect(&principal)?;
        let quotients = meet
            .generators
            .iter()
            .map(|g| {
                g.exact_div(f)
                    .ok_or_else(|| Error::Invariant(format!("intersection generator {g} not divisible by {f}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_order(&self.ring, quotients, self.order.clone())
    }

    /// `(self : f^∞)` by iterated colons. The loop stops once a colon adds
    /// nothing, and the fixed point is confirmed by one further colon.
    pub fn saturate(&self, f: &Polynomial) -> Result<IdealHandle> {
        if f.is_zero() {
            return Err(Error::precondition("saturation by the zero polynomial"));
        }
        let mut current = self.minimalized();
        loop {
            let next = current.colon(f)?.minimalized();
            if next.is_subset_of(&current)? {
                let check = next.colon(f)?;
                if !check.is_subset_of(&next)? {
                    return Err(Error::Invariant("saturation fixed point not confirmed".into()));
                }
                return Ok(next);
            }
            current = next;
        }
    }
}

/// The reduced Gröbner basis of `ideal` under its order.
pub fn groebner_basis(ideal: &IdealHandle) -> Vec<Polynomial> {
    ideal.groebner_basis().to_vec()
}

pub fn ideal_membership(f: &Polynomial, ideal: &IdealHandle) -> Result<bool> {
    ideal.contains(f)
}

pub fn ideal_power(ideal: &IdealHandle, m: u32) -> Result<IdealHandle> {
    ideal.power(m)
}

pub fn colon_saturation(ideal: &IdealHandle, f: &Polynomial) -> Result<IdealHandle> {
    ideal.saturate(f)
}

/// `I ⊆ J`.
pub fn ideal_containment(i: &IdealHandle, j: &IdealHandle) -> Result<bool> {
    i.is_subset_of(j)
}
