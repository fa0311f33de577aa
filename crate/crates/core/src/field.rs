//! Arithmetic in a prime field F_p.
//!
//! [`PrimeField`] is a small copyable context holding the modulus. Hot loops in
//! the polynomial code work on raw `u32` residues through the context's
//! methods; [`FieldElement`] is the checked value type used at API boundaries.

use crate::error::{Error, Result};
use std::fmt;

/// Modulus context for F_p. Construction checks primality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    /// Builds the context for F_p; fails unless `p` is a prime below 2^31.
    pub fn new(p: u64) -> Result<Self> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("modulus {p} is not a supported prime"),
            });
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    /// Reduces a signed integer into [0, p).
    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn from_u64(&self, v: u64) -> u32 {
        (v % self.p as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p as u64 - b as u64) as u32
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

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse by extended Euclid. Panics on zero; use [`FieldElement::inv`]
    /// for the checked version.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        self.from_i64(s0)
    }

    /// Signed representative in (-p/2, p/2], used for rendering.
    pub fn signed(&self, a: u32) -> i64 {
        if a as u64 * 2 > self.p as u64 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn elem(&self, v: i64) -> FieldElement {
        FieldElement {
            value: self.from_i64(v),
            field: *self,
        }
    }
}

/// A residue in [0, p) tagged with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    field: PrimeField,
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same(&self, other: &FieldElement) -> Result<PrimeField> {
        if self.field != other.field {
            return Err(Error::Context(format!(
                "mixed moduli {} and {}",
                self.field.p, other.field.p
            )));
        }
        Ok(self.field)
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        let f = self.same(other)?;
        Ok(FieldElement {
            value: f.add(self.value, other.value),
            field: f,
        })
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        let f = self.same(other)?;
        Ok(FieldElement {
            value: f.sub(self.value, other.value),
            field: f,
        })
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        let f = self.same(other)?;
        Ok(FieldElement {
            value: f.mul(self.value, other.value),
            field: f,
        })
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.value == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement {
            value: self.field.inv(self.value),
            field: self.field,
        })
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement {
            value: self.field.pow(self.value, e),
            field: self.field,
        }
    }

    /// The p-th root. Frobenius is the identity on F_p.
    pub fn pth_root(&self) -> FieldElement {
        *self
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
