//! Prime fields and Lucas binomial coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field `F_p`. Elements are residues `0..p` stored as `u32`.
///
/// The context is `Copy`, so every container of field elements carries one
/// and all arithmetic is routed through it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 16 {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    /// Number of elements; equal to `p` for a prime field.
    #[inline]
    pub fn order(self) -> u64 {
        self.p as u64
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
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

    pub fn inv(self, a: u32) -> Result<u32> {
        if a % self.p == 0 {
            return Err(Error::ZeroDivision);
        }
        Ok(self.pow(a, self.p as u64 - 2))
    }

    pub fn div(self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Representative in `(-p/2, p/2]`, used for human-readable output.
    pub fn signed(self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if 2 * a > p {
            a - p
        } else {
            a
        }
    }

    pub fn elements(self) -> impl Iterator<Item = u32> {
        0..self.p
    }

    pub fn units(self) -> impl Iterator<Item = u32> {
        1..self.p
    }

    /// `binom(i, j)` reduced mod `p`; see [`lucas_binomial`].
    pub fn binomial(self, i: i64, j: u64) -> u32 {
        lucas_binomial(i, j, self.p)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn small_binomial(c: u64, d: u64, p: u32) -> u32 {
    if d > c {
        return 0;
    }
    let p64 = p as u64;
    let (mut num, mut den) = (1u64, 1u64);
    for k in 0..d {
        num = num * ((c - k) % p64) % p64;
        den = den * ((k + 1) % p64) % p64;
    }
    let field = PrimeField { p };
    field.mul(num as u32, field.inv(den as u32).expect("digits are below p"))
}

/// Binomial coefficient `binom(i, j) mod p` by Lucas' theorem.
///
/// A negative upper index is first rewritten as
/// `binom(-m, j) = (-1)^j binom(m + j - 1, j)`.
pub fn lucas_binomial(i: i64, j: u64, p: u32) -> u32 {
    if i < 0 {
        let m = i.unsigned_abs();
        let v = lucas_binomial((m + j - 1) as i64, j, p);
        return if j % 2 == 1 && v != 0 { p - v } else { v };
    }
    let (mut c, mut d) = (i as u64, j);
    let p64 = p as u64;
    let mut acc = 1u32;
    while d > 0 {
        let (cd, dd) = (c % p64, d % p64);
        if dd > cd {
            return 0;
        }
        acc = ((acc as u64 * small_binomial(cd, dd, p) as u64) % p64) as u32;
        c /= p64;
        d /= p64;
    }
    acc
}
