//! Sparse multivariate polynomials over 𝔽_p.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};
use crate::ring::{Block, Ring};

/// Dense exponent vector, one slot per ring variable. A zero slot is an
/// absent variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExpVec(Vec<u32>);

impl ExpVec {
    pub fn zero(nvars: usize) -> Self {
        ExpVec(vec![0; nvars])
    }

    pub fn from_vec(v: Vec<u32>) -> Self {
        ExpVec(v)
    }

    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut v = vec![0; nvars];
        v[i] = 1;
        ExpVec(v)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, v: u32) {
        self.0[i] = v;
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &ExpVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &ExpVec) -> ExpVec {
        ExpVec(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &ExpVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn scale(&self, k: u32) -> ExpVec {
        ExpVec(self.0.iter().map(|a| a * k).collect())
    }
}

/// Graded reverse lexicographic comparison, variable 0 largest.
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// A polynomial with terms kept in descending grevlex order and no zero
/// coefficients. This sorted form is also the canonical printed form.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: Vec<(ExpVec, u32)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.ring.same_as(&other.ring)
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial {
            ring: Arc::clone(ring),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: i64) -> Self {
        let v = ring.field().reduce(c);
        let terms = if v == 0 {
            vec![]
        } else {
            vec![(ExpVec::zero(ring.num_vars()), v)]
        };
        Polynomial {
            ring: Arc::clone(ring),
            terms,
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, 1)
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        Self::monomial(ring, ExpVec::unit(ring.num_vars(), i), 1)
    }

    pub fn monomial(ring: &Arc<Ring>, exps: ExpVec, coeff: i64) -> Self {
        assert_eq!(exps.len(), ring.num_vars(), "exponent vector length");
        let v = ring.field().reduce(coeff);
        let terms = if v == 0 { vec![] } else { vec![(exps, v)] };
        Polynomial {
            ring: Arc::clone(ring),
            terms,
        }
    }

    /// Sums arbitrary (possibly repeated) terms.
    pub fn from_terms<I>(ring: &Arc<Ring>, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExpVec, u32)>,
    {
        let field = ring.field();
        let mut acc: HashMap<ExpVec, u32> = HashMap::new();
        for (e, c) in terms {
            debug_assert_eq!(e.len(), ring.num_vars());
            let slot = acc.entry(e).or_insert(0);
            *slot = field.add(*slot, c % field.characteristic());
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<Ring>, acc: HashMap<ExpVec, u32>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_unstable_by(|a, b| grevlex_cmp(b.0.as_slice(), a.0.as_slice()));
        Polynomial {
            ring: Arc::clone(ring),
            terms,
        }
    }

    pub fn parse(ring: &Arc<Ring>, text: &str) -> Result<Self> {
        Parser::new(ring, text).parse_all()
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> PrimeField {
        self.ring.field()
    }

    pub fn terms(&self) -> &[(ExpVec, u32)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(ExpVec, u32)> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1 == 1 && self.terms[0].0.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coeff(&self, exps: &ExpVec) -> Fp {
        let v = self
            .terms
            .iter()
            .find(|(e, _)| e == exps)
            .map_or(0, |(_, c)| *c);
        self.field().wrap(v)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.iter().map(|(e, _)| e.degree()).max().unwrap_or(0)
    }

    /// Largest exponent of any single variable.
    pub fn max_var_degree(&self) -> u32 {
        self.terms
            .iter()
            .flat_map(|(e, _)| e.as_slice().iter().copied())
            .max()
            .unwrap_or(0)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.ring.same_as(&other.ring) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.product(other))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let f = self.field();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: u32| if negate { f.neg(c) } else { c };
        while i < self.terms.len() && j < other.terms.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &other.terms[j];
            match grevlex_cmp(ea.as_slice(), eb.as_slice()) {
                Ordering::Greater => {
                    out.push((ea.clone(), *ca));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((eb.clone(), sign(*cb)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(*ca, sign(*cb));
                    if c != 0 {
                        out.push((ea.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(e, c)| (e.clone(), sign(*c))));
        Polynomial {
            ring: Arc::clone(&self.ring),
            terms: out,
        }
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let f = self.field();
        if self.terms.len() == 1 || other.terms.len() == 1 {
            let (mono, poly) = if self.terms.len() == 1 { (self, other) } else { (other, self) };
            let (me, mc) = &mono.terms[0];
            // Multiplying by a monomial preserves the order of terms.
            let terms = poly
                .terms
                .iter()
                .filter_map(|(e, c)| {
                    let v = f.mul(*c, *mc);
                    (v != 0).then(|| (e.mul(me), v))
                })
                .collect();
            return Polynomial {
                ring: Arc::clone(&self.ring),
                terms,
            };
        }
        let mut acc: HashMap<ExpVec, u32> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let slot = acc.entry(ea.mul(eb)).or_insert(0);
                *slot = f.add(*slot, f.mul(*ca, *cb));
            }
        }
        Self::from_map(&self.ring, acc)
    }

    pub fn scale(&self, c: Fp) -> Polynomial {
        assert_eq!(c.characteristic(), self.ring.characteristic());
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let f = self.field();
        Polynomial {
            ring: Arc::clone(&self.ring),
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), f.mul(*v, c.value())))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, exps: &ExpVec) -> Polynomial {
        Polynomial {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().map(|(e, c)| (e.mul(exps), *c)).collect(),
        }
    }

    pub fn pow(&self, mut k: u64) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.product(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.product(&base);
            }
        }
        acc
    }

    /// `f^(p^e)`: coefficients of 𝔽_p are Frobenius-fixed, so this only
    /// scales exponents by `p^e`.
    pub fn frobenius_power(&self, e: u32) -> Polynomial {
        let q = (self.ring.characteristic() as u64).pow(e);
        let q = u32::try_from(q).expect("Frobenius scale exceeds u32 exponents");
        Polynomial {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().map(|(ex, c)| (ex.scale(q), *c)).collect(),
        }
    }

    /// Sends each monomial through `map` into `target`, summing collisions.
    pub fn map_monomials<F>(&self, target: &Arc<Ring>, mut map: F) -> Polynomial
    where
        F: FnMut(&ExpVec) -> ExpVec,
    {
        assert_eq!(target.characteristic(), self.ring.characteristic());
        Polynomial::from_terms(target, self.terms.iter().map(|(e, c)| (map(e), *c)))
    }

    /// Total degree in the given block, per monomial.
    pub fn block_degrees(&self, exps: &ExpVec, block: Block) -> u64 {
        self.ring
            .variables()
            .iter()
            .zip(exps.as_slice())
            .filter(|(v, _)| v.id.block == block)
            .map(|(_, &e)| e as u64)
            .sum()
    }

    /// Exact division by `divisor`; `None` if it does not divide.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(self.ring.same_as(&divisor.ring));
        let (lead_e, lead_c) = divisor.terms.first()?;
        let f = self.field();
        let inv = f.inv(*lead_c);
        let mut rem = self.clone();
        let mut quot: Vec<(ExpVec, u32)> = Vec::new();
        while let Some((e, c)) = rem.terms.first().cloned() {
            if !lead_e.divides(&e) {
                return None;
            }
            let qe = lead_e.quotient_of(&e);
            let qc = f.mul(c, inv);
            let step = divisor.mul_monomial(&qe).scale(f.wrap(qc));
            rem = rem.merge(&step, true);
            quot.push((qe, qc));
        }
        Some(Polynomial::from_terms(&self.ring, quot))
    }

    pub fn display_monomial(ring: &Ring, exps: &ExpVec) -> String {
        let mut s = String::new();
        for (i, &e) in exps.as_slice().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('*');
            }
            s.push_str(&ring.variable(i).name);
            if e > 1 {
                s.push('^');
                s.push_str(&e.to_string());
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if e.is_one() {
                write!(f, "{c}")?;
            } else if *c == 1 {
                write!(f, "{}", Polynomial::display_monomial(&self.ring, e))?;
            } else {
                write!(f, "{c}*{}", Polynomial::display_monomial(&self.ring, e))?;
            }
        }
        Ok(())
    }
}

macro_rules! poly_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for &Polynomial {
            type Output = Polynomial;
            /// Panics if the operands live in different rings; use the
            /// `checked_*` form to get an error instead.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomials from different rings")
            }
        }
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_op!(Add, add, checked_add);
poly_op!(Sub, sub, checked_sub);
poly_op!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let f = self.field();
        Polynomial {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), f.neg(*c))).collect(),
        }
    }
}

// Grammar:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' integer)?
//   atom   := integer | identifier | '(' expr ')'
struct Parser<'a> {
    ring: &'a Arc<Ring>,
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(ring: &'a Arc<Ring>, text: &'a str) -> Self {
        Parser {
            ring,
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Polynomial> {
        let p = self.expr()?;
        if self.peek().is_some() {
            return self.err(format!("unexpected `{}`", self.src[self.pos] as char));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                self.pos = start;
                return self.err("expected a nonnegative integer exponent");
            }
            let k: u64 = match digits.parse() {
                Ok(k) => k,
                Err(_) => return self.err("exponent too large"),
            };
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                let p = self.ring.characteristic() as u64;
                // Reduce digit by digit so arbitrarily long literals work.
                let v = digits
                    .bytes()
                    .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Ok(Polynomial::constant(self.ring, v as i64))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.ring.index_of(name) {
                    Some(i) => Ok(Polynomial::var(self.ring, i)),
                    None => {
                        self.pos = start;
                        Err(Error::UnknownVariable(name.to_string()))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(p: u64) -> Arc<Ring> {
        Ring::new(p, &["x", "y", "z"]).unwrap()
    }

    fn poly(r: &Arc<Ring>, s: &str) -> Polynomial {
        Polynomial::parse(r, s).unwrap()
    }

    #[test]
    fn freshmans_dream_over_f2() {
        let r = ring(2);
        let f = poly(&r, "x+y");
        assert_eq!(&f * &f, poly(&r, "x^2+y^2"));
    }

    #[test]
    fn additive_identity() {
        let r = ring(3);
        let f = poly(&r, "x*y - 2*z^2 + 1");
        assert_eq!(&f + &Polynomial::zero(&r), f);
    }

    #[test]
    fn difference_of_squares_over_f5() {
        let r = ring(5);
        assert_eq!(&poly(&r, "x-y") * &poly(&r, "x+y"), poly(&r, "x^2-y^2"));
    }

    #[test]
    fn frobenius_power_examples() {
        let r2 = ring(2);
        assert_eq!(poly(&r2, "x+y").frobenius_power(1), poly(&r2, "x^2+y^2"));
        let f = poly(&r2, "x*z + y + 1");
        assert_eq!(f.frobenius_power(0), f);
        let r3 = ring(3);
        assert_eq!(poly(&r3, "x^2*y").frobenius_power(2), poly(&r3, "x^18*y^9"));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = poly(&ring(2), "x");
        let b = poly(&ring(3), "x");
        assert_eq!(a.checked_add(&b), Err(Error::ContextMismatch));
        assert_eq!(a.checked_mul(&b), Err(Error::ContextMismatch));
    }

    #[test]
    fn canonical_printing() {
        let r = ring(5);
        let f = poly(&r, "3 - x + y^2*x + 10*z");
        assert_eq!(f.to_string(), "x*y^2 + 4*x + 3");
        assert_eq!(poly(&r, "x - x").to_string(), "0");
    }

    #[test]
    fn parse_errors() {
        let r = ring(5);
        assert_eq!(
            Polynomial::parse(&r, "x + w"),
            Err(Error::UnknownVariable("w".into()))
        );
        assert!(matches!(Polynomial::parse(&r, "x + * y"), Err(Error::Parse { offset: 4, .. })));
        assert!(matches!(Polynomial::parse(&r, "(x"), Err(Error::Parse { .. })));
        assert!(matches!(Polynomial::parse(&r, "x^"), Err(Error::Parse { .. })));
    }

    #[test]
    fn exact_division() {
        let r = ring(7);
        let f = poly(&r, "x^2 - y^2");
        assert_eq!(f.exact_div(&poly(&r, "x+y")), Some(poly(&r, "x-y")));
        assert_eq!(f.exact_div(&poly(&r, "x+z")), None);
    }

    fn arb_poly(p: u64) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(((0u32..4, 0u32..4, 0u32..4), 0i64..7), 0..5).prop_map(move |ts| {
            let r = ring(p);
            Polynomial::from_terms(
                &r,
                ts.into_iter()
                    .map(|((a, b, c), k)| (ExpVec::from_vec(vec![a, b, c]), r.field().reduce(k))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(
            (f, g, h) in prop::sample::select(vec![2u64, 3])
                .prop_flat_map(|p| (arb_poly(p), arb_poly(p), arb_poly(p)))
        ) {
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert!((&f - &f).is_zero());
        }

        #[test]
        fn frobenius_matches_repeated_multiplication(f in arb_poly(3), e in 0u32..3) {
            let q = 3u64.pow(e);
            let mut naive = Polynomial::one(f.ring());
            for _ in 0..q { naive = &naive * &f; }
            prop_assert_eq!(f.frobenius_power(e), naive);
        }

        #[test]
        fn print_parse_roundtrip(f in arb_poly(3)) {
            let back = Polynomial::parse(f.ring(), &f.to_string()).unwrap();
            prop_assert_eq!(back, f);
        }
    }

    #[test]
    fn exhaustive_axioms_tiny_ring() {
        // Every polynomial in F_2[x, y] supported on {1, x, y, xy} with degree <= 2.
        let r = Ring::new(2, &["x", "y"]).unwrap();
        let basis = ["1", "x", "y", "x*y"];
        let all: Vec<Polynomial> = (0..16u32)
            .map(|mask| {
                basis
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(Polynomial::zero(&r), |acc, (_, m)| &acc + &poly(&r, m))
            })
            .collect();
        for f in &all {
            for g in &all {
                for h in &all {
                    assert_eq!(&(f * g) * h, f * &(g * h));
                    assert_eq!(f * &(g + h), &(f * g) + &(f * h));
                }
            }
        }
    }
}
