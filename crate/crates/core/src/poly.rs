//! Dense polynomials in `A = F_q[θ]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::PrimeField;

/// A polynomial in `θ` with coefficients in a prime field, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyA {
    field: PrimeField,
    coeffs: Vec<u32>,
}

impl PolyA {
    pub fn from_coeffs(field: PrimeField, mut coeffs: Vec<u32>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= field.p();
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn from_signed(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        Self { field, coeffs: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: PrimeField, c: u32) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    /// The variable `θ`.
    pub fn theta(field: PrimeField) -> Self {
        Self::monomial(field, 1, 1)
    }

    pub fn monomial(field: PrimeField, c: u32, e: usize) -> Self {
        let mut coeffs = vec![0; e + 1];
        coeffs[e] = c;
        Self::from_coeffs(field, coeffs)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u32 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True for nonzero constants and zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        Self::from_coeffs(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn monic(&self) -> Self {
        match self.field.inv(self.leading()) {
            Ok(inv) => self.scale(inv),
            Err(_) => self.clone(),
        }
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { field: self.field, coeffs }
    }

    pub fn divrem(&self, d: &PolyA) -> Result<(PolyA, PolyA)> {
        let f = self.field;
        let dd = d.degree().ok_or(Error::ZeroDivision)?;
        let lead_inv = f.inv(d.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((PolyA::zero(f), self.clone()));
        }
        let mut quot = vec![0; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = f.mul(rem[k], lead_inv);
            if c == 0 {
                continue;
            }
            quot[k - dd] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k - dd + j] = f.sub(rem[k - dd + j], f.mul(c, dc));
            }
        }
        Ok((PolyA::from_coeffs(f, quot), PolyA::from_coeffs(f, rem)))
    }

    pub fn rem(&self, d: &PolyA) -> Result<PolyA> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient; fails if `d` does not divide `self`.
    pub fn div_exact(&self, d: &PolyA) -> Result<PolyA> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::NonUnit(format!("{d} does not divide {self}")));
        }
        Ok(q)
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &PolyA) -> PolyA {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, mut e: u64) -> PolyA {
        let mut base = self.clone();
        let mut acc = PolyA::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn mulmod(&self, other: &PolyA, m: &PolyA) -> Result<PolyA> {
        (self * other).rem(m)
    }

    pub fn powmod(&self, mut e: u64, m: &PolyA) -> Result<PolyA> {
        let mut base = self.rem(m)?;
        let mut acc = PolyA::one(self.field).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, m)?;
            }
        }
        Ok(acc)
    }

    /// `f(θ^{q^k})`, which equals `f^{q^k}` since coefficients lie in the prime field.
    pub fn frobenius(&self, k: u32) -> PolyA {
        if self.is_constant() || k == 0 {
            return self.clone();
        }
        let step = (self.field.p() as usize).pow(k);
        let mut coeffs = vec![0; (self.coeffs.len() - 1) * step + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * step] = c;
        }
        PolyA { field: self.field, coeffs }
    }

    /// The hyperderivative `∂_θ^j`.
    pub fn hyperderiv(&self, j: usize) -> PolyA {
        let f = self.field;
        if self.coeffs.len() <= j {
            return PolyA::zero(f);
        }
        let coeffs = (j..self.coeffs.len())
            .map(|k| f.mul(self.coeffs[k], f.binomial(k as i64, j as u64)))
            .collect();
        PolyA::from_coeffs(f, coeffs)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Composition `self(g)`.
    pub fn compose(&self, g: &PolyA) -> PolyA {
        self.coeffs
            .iter()
            .rev()
            .fold(PolyA::zero(self.field), |acc, &c| &(&acc * g) + &PolyA::constant(self.field, c))
    }

    /// Parses the `T^3+2*T+1` text form. Negative coefficients are reduced mod p.
    pub fn parse(field: PrimeField, text: &str) -> Result<PolyA> {
        let err = || Error::Parse(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in s.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !s[..i].ends_with('^') {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut acc: Vec<i64> = Vec::new();
        for term in terms {
            let (sign, body) = match term.as_bytes().first() {
                Some(b'-') => (-1i64, &term[1..]),
                Some(b'+') => (1, &term[1..]),
                _ => (1, term),
            };
            if body.is_empty() {
                return Err(err());
            }
            let (coef, exp) = if let Some(pos) = body.find(['T', 't']) {
                let c = match body[..pos].strip_suffix('*') {
                    Some(c) => c.parse::<i64>().map_err(|_| err())?,
                    None if pos == 0 => 1,
                    None => return Err(err()),
                };
                let rest = &body[pos + 1..];
                let e = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').ok_or_else(err)?.parse::<usize>().map_err(|_| err())?
                };
                (c, e)
            } else {
                (body.parse::<i64>().map_err(|_| err())?, 0)
            };
            if acc.len() <= exp {
                acc.resize(exp + 1, 0);
            }
            acc[exp] += sign * coef;
        }
        Ok(PolyA::from_signed(field, &acc))
    }
}

/// Writes `Σ c_k T^k` given descending `(exponent, coefficient)` pairs.
pub(crate) fn write_terms(
    out: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (u64, u32)>,
) -> fmt::Result {
    let mut first = true;
    for (e, c) in terms {
        if !first {
            out.write_str("+")?;
        }
        first = false;
        match (e, c) {
            (0, c) => write!(out, "{c}")?,
            (1, 1) => out.write_str("T")?,
            (1, c) => write!(out, "{c}*T")?,
            (e, 1) => write!(out, "T^{e}")?,
            (e, c) => write!(out, "{c}*T^{e}")?,
        }
    }
    if first {
        out.write_str("0")?;
    }
    Ok(())
}

/// Serialized as its display string, e.g. `"T^2+2"`.
impl serde::Serialize for PolyA {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for PolyA {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| (e as u64, c));
        write_terms(out, terms)
    }
}

impl fmt::Debug for PolyA {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "PolyA[F_{}]({self})", self.field.p())
    }
}

impl Add for &PolyA {
    type Output = PolyA;
    fn add(self, rhs: &PolyA) -> PolyA {
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| f.add(self.coeff(k), rhs.coeff(k))).collect();
        PolyA::from_coeffs(f, coeffs)
    }
}

impl Sub for &PolyA {
    type Output = PolyA;
    fn sub(self, rhs: &PolyA) -> PolyA {
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| f.sub(self.coeff(k), rhs.coeff(k))).collect();
        PolyA::from_coeffs(f, coeffs)
    }
}

impl Neg for &PolyA {
    type Output = PolyA;
    fn neg(self) -> PolyA {
        let f = self.field;
        PolyA::from_coeffs(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &PolyA {
    type Output = PolyA;
    fn mul(self, rhs: &PolyA) -> PolyA {
        let f = self.field;
        if self.is_zero() || rhs.is_zero() {
            return PolyA::zero(f);
        }
        let p = f.p() as u64;
        let mut acc = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        // Delay reductions: each partial sum stays far below u64::MAX for p < 2^16.
        let flush = (u64::MAX / ((p - 1) * (p - 1)).max(1)).min(1 << 20) as usize;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                acc[i + j] += a as u64 * b as u64;
            }
            if i % flush == flush - 1 {
                acc.iter_mut().for_each(|x| *x %= p);
            }
        }
        PolyA::from_coeffs(f, acc.into_iter().map(|x| (x % p) as u32).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for PolyA {
            type Output = PolyA;
            fn $m(self, rhs: PolyA) -> PolyA { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// All monic polynomials of degree `d`, constant coefficient varying fastest.
pub fn monic_polys(field: PrimeField, d: usize) -> impl Iterator<Item = PolyA> {
    let q = field.p() as u64;
    (0..q.pow(d as u32)).map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(d + 1);
        for _ in 0..d {
            coeffs.push((idx % q) as u32);
            idx /= q;
        }
        coeffs.push(1);
        PolyA::from_coeffs(field, coeffs)
    })
}

/// All monic irreducible polynomials of degree `d`, constant coefficient
/// varying fastest.
pub fn monic_irreducibles(field: PrimeField, d: usize) -> Vec<PolyA> {
    assert!(d >= 1, "degree must be positive");
    let q = field.p() as u64;
    let count = q.pow(d as u32);
    let prime_divisors: Vec<usize> = (2..=d).filter(|&l| d % l == 0 && (2..l).all(|m| l % m != 0)).collect();
    let mut out = Vec::new();
    let mut digits = vec![0u32; d];
    for idx in 0..count {
        if idx > 0 {
            for slot in digits.iter_mut() {
                *slot += 1;
                if *slot < field.p() {
                    break;
                }
                *slot = 0;
            }
        }
        if d > 1 && digits[0] == 0 {
            continue;
        }
        let mut coeffs = digits.clone();
        coeffs.push(1);
        let w = PolyA::from_coeffs(field, coeffs);
        if is_irreducible_with(&w, &prime_divisors) {
            out.push(w);
        }
    }
    out
}

/// Distinct-degree irreducibility criterion.
pub fn is_irreducible(w: &PolyA) -> bool {
    let Some(d) = w.degree() else { return false };
    if d == 0 {
        return false;
    }
    let primes: Vec<usize> = (2..=d).filter(|&l| d % l == 0 && (2..l).all(|m| l % m != 0)).collect();
    is_irreducible_with(&w.monic(), &primes)
}

fn is_irreducible_with(w: &PolyA, prime_divisors: &[usize]) -> bool {
    let d = w.degree().expect("nonzero");
    if d == 1 {
        return true;
    }
    let field = w.field();
    let q = field.p() as u64;
    let theta = PolyA::theta(field);
    // frob[k] = θ^{q^k} mod w
    let mut frob = vec![theta.rem(w).expect("w nonzero")];
    for _ in 0..d {
        let next = frob.last().unwrap().powmod(q, w).expect("w nonzero");
        frob.push(next);
    }
    if frob[d] != frob[0] {
        return false;
    }
    prime_divisors.iter().all(|&l| {
        let diff = &frob[d / l] - &theta;
        w.gcd(&diff).is_one()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let f = f3();
        let p = PolyA::parse(f, "T^3+2*T+1").unwrap();
        assert_eq!(p.coeffs(), &[1, 2, 0, 1]);
        assert_eq!(p.to_string(), "T^3+2*T+1");
        assert_eq!(PolyA::zero(f).to_string(), "0");
        assert_eq!(PolyA::parse(f, "-1").unwrap().to_string(), "2");
        assert_eq!(PolyA::parse(f, "T - T").unwrap().to_string(), "0");
        assert_eq!(PolyA::parse(f, "2T^2").is_err(), true);
        assert!(PolyA::parse(f, "T^").is_err());
    }

    #[test]
    fn hyperderivative_examples() {
        let f = f3();
        assert_eq!(PolyA::theta(f).hyperderiv(1), PolyA::one(f));
        assert_eq!(PolyA::monomial(f, 1, 5).hyperderiv(2), PolyA::monomial(f, 1, 3));
        let g = PolyA::parse(f, "T^4+T+2").unwrap();
        assert_eq!(g.hyperderiv(0), g);
    }

    #[test]
    fn irreducible_counts() {
        let f = f3();
        let lin: Vec<String> = monic_irreducibles(f, 1).iter().map(|w| w.to_string()).collect();
        assert_eq!(lin, ["T", "T+1", "T+2"]);
        assert_eq!(monic_irreducibles(f, 2).len(), 3);
        assert_eq!(monic_irreducibles(f, 3).len(), 8);
    }

    /// Irreducibility by trial division against every monic polynomial of
    /// degree at most d/2.
    fn irreducible_by_trial(w: &PolyA) -> bool {
        let f = w.field();
        let d = w.degree().unwrap();
        for k in 1..=d / 2 {
            let total = (f.p() as u64).pow(k as u32);
            for idx in 0..total {
                let mut c = Vec::with_capacity(k + 1);
                let mut x = idx;
                for _ in 0..k {
                    c.push((x % f.p() as u64) as u32);
                    x /= f.p() as u64;
                }
                c.push(1);
                if w.rem(&PolyA::from_coeffs(f, c)).unwrap().is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn irreducibles_agree_with_trial_division() {
        for p in [3u32, 5] {
            let f = PrimeField::new(p).unwrap();
            for d in 1..=4usize {
                let fast: Vec<PolyA> = monic_irreducibles(f, d);
                let total = (p as u64).pow(d as u32);
                let mut slow = Vec::new();
                for idx in 0..total {
                    let mut c = Vec::new();
                    let mut x = idx;
                    for _ in 0..d {
                        c.push((x % p as u64) as u32);
                        x /= p as u64;
                    }
                    c.push(1);
                    let w = PolyA::from_coeffs(f, c);
                    if irreducible_by_trial(&w) {
                        slow.push(w);
                    }
                }
                assert_eq!(fast, slow, "q={p} d={d}");
            }
        }
    }

    #[test]
    fn gauss_count() {
        for p in [3u32, 5] {
            let f = PrimeField::new(p).unwrap();
            for big_d in 1..=6usize {
                let total: u64 = (1..=big_d)
                    .filter(|d| big_d % d == 0)
                    .map(|d| d as u64 * monic_irreducibles(f, d).len() as u64)
                    .sum();
                assert_eq!(total, (p as u64).pow(big_d as u32));
            }
        }
    }

    #[test]
    fn divrem_and_gcd() {
        let f = PrimeField::new(5).unwrap();
        let a = PolyA::parse(f, "T^5+3*T^2+1").unwrap();
        let b = PolyA::parse(f, "2*T^2+T+4").unwrap();
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
        let g = (&a * &b).gcd(&b);
        assert_eq!(g, b.monic());
    }
}
