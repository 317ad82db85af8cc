//! Sparse polynomials in `θ` with 64-bit exponents.
//!
//! Numerators of logarithm coefficients have degrees of order `q^i`, far
//! beyond what a dense vector can hold for `q = 7`, but only a handful of
//! nonzero terms.

use std::fmt;

use crate::field::PrimeField;
use crate::poly::{write_terms, PolyA};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    field: PrimeField,
    /// `(exponent, coefficient)` sorted by exponent, coefficients nonzero.
    terms: Vec<(u64, u32)>,
}

impl SparsePoly {
    pub fn zero(field: PrimeField) -> Self {
        Self { field, terms: Vec::new() }
    }

    pub fn constant(field: PrimeField, c: u32) -> Self {
        Self::monomial(field, c, 0)
    }

    pub fn monomial(field: PrimeField, c: u32, e: u64) -> Self {
        let c = c % field.p();
        let terms = if c == 0 { Vec::new() } else { vec![(e, c)] };
        Self { field, terms }
    }

    /// `θ^hi - θ^lo`.
    pub fn binomial(field: PrimeField, hi: u64, lo: u64) -> Self {
        debug_assert!(hi > lo);
        Self { field, terms: vec![(lo, field.p() - 1), (hi, 1)] }
    }

    pub fn from_terms(field: PrimeField, mut terms: Vec<(u64, u32)>) -> Self {
        terms.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(u64, u32)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 = field.add(last.1, c % field.p()),
                _ => out.push((e, c % field.p())),
            }
            if out.last().map(|t| t.1) == Some(0) {
                out.pop();
            }
        }
        Self { field, terms: out }
    }

    pub fn from_dense(p: &PolyA) -> Self {
        let terms = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| (e as u64, c))
            .collect();
        Self { field: p.field(), terms }
    }

    pub fn to_dense(&self) -> PolyA {
        let mut coeffs = vec![0; self.degree().map_or(0, |d| d as usize + 1)];
        for &(e, c) in &self.terms {
            coeffs[e as usize] = c;
        }
        PolyA::from_coeffs(self.field, coeffs)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn terms(&self) -> &[(u64, u32)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|t| t.0)
    }

    pub fn low_degree(&self) -> Option<u64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn leading(&self) -> u32 {
        self.terms.last().map_or(0, |t| t.1)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<u32> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        let c = c % f.p();
        if c == 0 {
            return Self::zero(f);
        }
        Self { field: f, terms: self.terms.iter().map(|&(e, x)| (e, f.mul(x, c))).collect() }
    }

    pub fn shift(&self, k: u64) -> Self {
        Self { field: self.field, terms: self.terms.iter().map(|&(e, c)| (e + k, c)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.p() - 1)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let f = self.field;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let fix = |c: u32| if negate { f.neg(c) } else { c };
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, fix(b[j].1)));
                j += 1;
            } else {
                let c = f.add(a[i].1, fix(b[j].1));
                if c != 0 {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Self { field: f, terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if small.len() <= 4 {
            let mut acc = Self::zero(f);
            for &(e, c) in &small.terms {
                acc = acc.add(&big.shift(e).scale(c));
            }
            return acc;
        }
        let mut prods = Vec::with_capacity(small.len() * big.len());
        for &(e1, c1) in &small.terms {
            for &(e2, c2) in &big.terms {
                prods.push((e1 + e2, f.mul(c1, c2)));
            }
        }
        Self::from_terms(f, prods)
    }

    /// Multiplication by `θ^hi - θ^lo`.
    pub fn mul_binomial(&self, hi: u64, lo: u64) -> Self {
        self.shift(hi).sub(&self.shift(lo))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.field, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `f(θ^{q^k})`, i.e. `f^{q^k}` over the prime field.
    pub fn frobenius(&self, k: u32) -> Self {
        let step = (self.field.p() as u64).pow(k);
        Self { field: self.field, terms: self.terms.iter().map(|&(e, c)| (e * step, c)).collect() }
    }

    pub fn hyperderiv(&self, j: u64) -> Self {
        let f = self.field;
        let terms = self
            .terms
            .iter()
            .filter(|t| t.0 >= j)
            .map(|&(e, c)| (e - j, f.mul(c, f.binomial(e as i64, j))))
            .filter(|t| t.1 != 0)
            .collect();
        Self { field: f, terms }
    }

    /// True when `θ^lo (θ^m - 1)` divides `self`, with `m = hi - lo`.
    pub fn divisible_by_binomial(&self, hi: u64, lo: u64) -> bool {
        if self.is_zero() {
            return true;
        }
        if self.low_degree().unwrap() < lo {
            return false;
        }
        let m = hi - lo;
        let mut folded: std::collections::HashMap<u64, u32> = std::collections::HashMap::new();
        for &(e, c) in &self.terms {
            let slot = folded.entry((e - lo) % m).or_insert(0);
            *slot = self.field.add(*slot, c);
        }
        folded.values().all(|&c| c == 0)
    }

    /// Exact quotient by `θ^hi - θ^lo`; `None` if it does not divide.
    pub fn div_binomial(&self, hi: u64, lo: u64) -> Option<Self> {
        if !self.divisible_by_binomial(hi, lo) {
            return None;
        }
        let f = self.field;
        let m = hi - lo;
        // Divide θ^{e-lo} terms by (θ^m - 1) from the top down; the quotient
        // of c θ^e is c(θ^{e-m} + θ^{e-2m} + ...) down to the residue class.
        let mut rem: std::collections::BTreeMap<u64, u32> =
            self.terms.iter().map(|&(e, c)| (e - lo, c)).collect();
        let mut quot = Vec::new();
        while let Some((&e, &c)) = rem.iter().next_back() {
            rem.remove(&e);
            if e < m {
                return None;
            }
            quot.push((e - m, c));
            let slot = rem.entry(e - m).or_insert(0);
            *slot = f.add(*slot, c);
            if *slot == 0 {
                rem.remove(&(e - m));
            }
        }
        Some(Self::from_terms(f, quot))
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(out, self.terms.iter().rev().copied())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "SparsePoly[F_{}]({self})", self.field.p())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense(f: PrimeField, c: &[u32]) -> PolyA {
        PolyA::from_coeffs(f, c.to_vec())
    }

    proptest! {
        #[test]
        fn matches_dense_arithmetic(a in prop::collection::vec(0u32..5, 0..12), b in prop::collection::vec(0u32..5, 0..12)) {
            let f = PrimeField::new(5).unwrap();
            let (da, db) = (dense(f, &a), dense(f, &b));
            let (sa, sb) = (SparsePoly::from_dense(&da), SparsePoly::from_dense(&db));
            prop_assert_eq!(sa.add(&sb).to_dense(), &da + &db);
            prop_assert_eq!(sa.sub(&sb).to_dense(), &da - &db);
            prop_assert_eq!(sa.mul(&sb).to_dense(), &da * &db);
            prop_assert_eq!(sa.frobenius(1).to_dense(), da.frobenius(1));
            prop_assert_eq!(sa.hyperderiv(2).to_dense(), da.hyperderiv(2));
        }

        #[test]
        fn binomial_division(a in prop::collection::vec(0u32..3, 1..10), hi in 2u64..12, lo in 0u64..2) {
            let f = PrimeField::new(3).unwrap();
            let sa = SparsePoly::from_dense(&dense(f, &a));
            let prod = sa.mul_binomial(hi, lo);
            prop_assert_eq!(prod.div_binomial(hi, lo), Some(sa.clone()));
            let dense_div = dense(f, &a).divrem(&SparsePoly::binomial(f, hi, lo).to_dense()).unwrap();
            prop_assert_eq!(sa.divisible_by_binomial(hi, lo), dense_div.1.is_zero());
        }
    }
}
