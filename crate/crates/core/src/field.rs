//! Arithmetic in the prime field 𝔽_p.
//!
//! Coefficients inside polynomials and matrices are stored as bare `u32`
//! residues and combined through a [`PrimeField`] context; [`Fp`] is the
//! self-describing element type used at API boundaries.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest characteristic accepted. Residues stay below 2^31, so the sum of
/// two of them fits in a `u32`.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The field 𝔽_p, carried around as a context for raw residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_CHARACTERISTIC || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Reduces a signed integer into [0, p).
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat. Panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    pub fn elem(&self, v: i64) -> Fp {
        Fp {
            value: self.reduce(v),
            p: self.p,
        }
    }

    /// Wraps a residue that is already reduced.
    pub fn wrap(&self, value: u32) -> Fp {
        debug_assert!(value < self.p);
        Fp { value, p: self.p }
    }
}

/// An element of 𝔽_p together with its characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    p: u32,
}

impl Fp {
    pub fn new(value: i64, p: u64) -> Result<Self> {
        Ok(PrimeField::new(p)?.elem(value))
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn inv(&self) -> Option<Fp> {
        (self.value != 0).then(|| self.field().wrap(self.field().inv(self.value)))
    }

    pub fn pow(&self, exp: u64) -> Fp {
        self.field().wrap(self.field().pow(self.value, exp))
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! fp_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Fp {
            type Output = Fp;
            fn $method(self, rhs: Fp) -> Fp {
                assert_eq!(self.p, rhs.p, "mixed characteristics");
                self.field().wrap(self.field().$method(self.value, rhs.value))
            }
        }
    };
}

fp_binop!(Add, add);
fp_binop!(Sub, sub);
fp_binop!(Mul, mul);

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        self.field().wrap(self.field().neg(self.value))
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv().expect("division by zero in F_p")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_composites_and_out_of_range() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(0).is_err());
        assert!(PrimeField::new((1 << 31) + 11).is_err());
        assert!(PrimeField::new(2_147_483_647).is_ok());
    }

    #[test]
    fn small_field_tables() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.reduce(-1), 4);
        assert_eq!(f.inv(2), 3);
        assert_eq!(f.sub(1, 3), 3);
        let two = f.elem(2);
        assert_eq!((two / f.elem(3)).value(), 4);
        assert_eq!((-two).value(), 3);
    }

    proptest! {
        #[test]
        fn inverse_roundtrip(p in prop::sample::select(vec![2u64, 3, 5, 7, 31, 65_521, 2_147_483_647]), a in 1i64..1_000_000) {
            let f = PrimeField::new(p).unwrap();
            let x = f.elem(a);
            if !x.is_zero() {
                prop_assert_eq!((x * x.inv().unwrap()).value(), 1);
            }
        }

        #[test]
        fn frobenius_fixes_prime_field(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), a in 0i64..100) {
            let x = PrimeField::new(p).unwrap().elem(a);
            prop_assert_eq!(x.pow(p), x);
        }
    }
}
