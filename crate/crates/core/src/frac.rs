//! Exact elements of `K = F_q(θ)` with bracket-monomial denominators.
//!
//! Every denominator met by logarithm and exponential coefficients is a
//! product of `θ` and of twisted brackets `θ^{q^{k+s}} - θ^{q^s}`. Keeping the
//! denominator factored makes Frobenius twists, division by brackets and
//! expansion at infinity cheap, while numerators stay sparse.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::laurent::LaurentSeries;
use crate::poly::PolyA;
use crate::sparse::SparsePoly;

/// The monic binomial `θ^{q^{k+shift}} - θ^{q^shift}`, i.e. `[k]^{q^shift}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub k: u32,
    pub shift: u32,
}

impl Atom {
    pub fn bracket(k: u32) -> Self {
        Self { k, shift: 0 }
    }

    fn hi(self, q: u64) -> u64 {
        q.checked_pow(self.k + self.shift).expect("bracket degree overflows u64")
    }

    fn lo(self, q: u64) -> u64 {
        q.pow(self.shift)
    }
}

#[derive(Clone)]
pub struct Frac {
    num: SparsePoly,
    theta: u64,
    atoms: BTreeMap<Atom, u32>,
}

impl Frac {
    pub fn zero(field: PrimeField) -> Self {
        Self::from_sparse(SparsePoly::zero(field))
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: PrimeField, c: u32) -> Self {
        Self::from_sparse(SparsePoly::constant(field, c))
    }

    pub fn theta(field: PrimeField) -> Self {
        Self::from_sparse(SparsePoly::monomial(field, 1, 1))
    }

    pub fn from_sparse(num: SparsePoly) -> Self {
        Self { num, theta: 0, atoms: BTreeMap::new() }
    }

    pub fn from_poly(p: &PolyA) -> Self {
        Self::from_sparse(SparsePoly::from_dense(p))
    }

    /// `[k] = θ^{q^k} - θ`, with `[0] = 1`.
    pub fn bracket(field: PrimeField, k: u32) -> Self {
        if k == 0 {
            return Self::one(field);
        }
        let q = field.p() as u64;
        Self::from_sparse(SparsePoly::binomial(field, q.pow(k), 1))
    }

    /// `c / [k]^e`.
    pub fn inv_bracket_pow(field: PrimeField, c: u32, k: u32, e: u32) -> Self {
        Self::constant(field, c).div_bracket_pow(k, e)
    }

    pub fn field(&self) -> PrimeField {
        self.num.field()
    }

    pub fn numerator(&self) -> &SparsePoly {
        &self.num
    }

    /// Exponent of `θ` and bracket exponents of the (monic) denominator.
    pub fn denominator_factors(&self) -> (u64, &BTreeMap<Atom, u32>) {
        (self.theta, &self.atoms)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn q(&self) -> u64 {
        self.field().p() as u64
    }

    pub fn denominator_degree(&self) -> u64 {
        let q = self.q();
        self.theta + self.atoms.iter().map(|(a, &e)| e as u64 * a.hi(q)).sum::<u64>()
    }

    /// Exact `v_∞`; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        let d = self.num.degree()?;
        Some(self.denominator_degree() as i64 - d as i64)
    }

    /// The polynomial when the denominator is trivial.
    pub fn as_sparse(&self) -> Option<&SparsePoly> {
        (self.theta == 0 && self.atoms.is_empty()).then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<u32> {
        let r = self.reduce();
        r.as_sparse().and_then(|s| s.as_constant())
    }

    /// Numerator over the larger denominator `θ^theta ∏ atoms`.
    fn lift(&self, theta: u64, atoms: &BTreeMap<Atom, u32>) -> SparsePoly {
        let q = self.q();
        let mut num = self.num.shift(theta - self.theta);
        for (a, &e) in atoms {
            let own = self.atoms.get(a).copied().unwrap_or(0);
            for _ in own..e {
                num = num.mul_binomial(a.hi(q), a.lo(q));
            }
        }
        num
    }

    fn common(&self, other: &Self) -> (u64, BTreeMap<Atom, u32>) {
        let theta = self.theta.max(other.theta);
        let mut atoms = self.atoms.clone();
        for (a, &e) in &other.atoms {
            let slot = atoms.entry(*a).or_insert(0);
            *slot = (*slot).max(e);
        }
        (theta, atoms)
    }

    fn normalized(num: SparsePoly, theta: u64, atoms: BTreeMap<Atom, u32>) -> Self {
        if num.is_zero() {
            return Self::zero(num.field());
        }
        let cancel = theta.min(num.low_degree().unwrap_or(0));
        let num = if cancel > 0 {
            Self::unshift(&num, cancel)
        } else {
            num
        };
        let atoms = atoms.into_iter().filter(|&(_, e)| e > 0).collect();
        Self { num, theta: theta - cancel, atoms }
    }

    fn unshift(num: &SparsePoly, k: u64) -> SparsePoly {
        SparsePoly::from_terms(num.field(), num.terms().iter().map(|&(e, c)| (e - k, c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let (theta, atoms) = self.common(other);
        let num = self.lift(theta, &atoms).add(&other.lift(theta, &atoms));
        Self::normalized(num, theta, atoms)
    }

    /// Balanced pairwise sum; neighbours tend to share denominators, so
    /// early merges stay small.
    pub fn sum<'a>(field: PrimeField, items: impl IntoIterator<Item = &'a Frac>) -> Self {
        let mut layer: Vec<Frac> = items.into_iter().cloned().collect();
        if layer.is_empty() {
            return Self::zero(field);
        }
        while layer.len() > 1 {
            layer = layer
                .chunks(2)
                .map(|pair| if pair.len() == 2 { pair[0].add(&pair[1]) } else { pair[0].clone() })
                .collect();
        }
        layer.pop().unwrap_or_else(|| Self::zero(field))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), theta: self.theta, atoms: self.atoms.clone() }
    }

    pub fn scale(&self, c: u32) -> Self {
        Self::normalized(self.num.scale(c), self.theta, self.atoms.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field());
        }
        let mut atoms = self.atoms.clone();
        for (a, &e) in &other.atoms {
            *atoms.entry(*a).or_insert(0) += e;
        }
        Self::normalized(self.num.mul(&other.num), self.theta + other.theta, atoms)
    }

    pub fn mul_sparse(&self, p: &SparsePoly) -> Self {
        Self::normalized(self.num.mul(p), self.theta, self.atoms.clone())
    }

    pub fn div_atom_pow(&self, atom: Atom, e: u32) -> Self {
        if self.is_zero() || e == 0 {
            return self.clone();
        }
        let mut atoms = self.atoms.clone();
        *atoms.entry(atom).or_insert(0) += e;
        Self { num: self.num.clone(), theta: self.theta, atoms }
    }

    /// Division by `[k]^e`.
    pub fn div_bracket_pow(&self, k: u32, e: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        self.div_atom_pow(Atom::bracket(k), e)
    }

    pub fn div_theta_pow(&self, e: u64) -> Self {
        Self::normalized(self.num.clone(), self.theta + e, self.atoms.clone())
    }

    /// `x^{q^j}`: twists numerator exponents and shifts every atom.
    pub fn frobenius(&self, j: u32) -> Self {
        if j == 0 {
            return self.clone();
        }
        let qj = self.q().pow(j);
        let atoms = self.atoms.iter().map(|(a, &e)| (Atom { k: a.k, shift: a.shift + j }, e)).collect();
        Self { num: self.num.frobenius(j), theta: self.theta * qj, atoms }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field());
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

    /// Cancels every denominator atom that divides the numerator.
    pub fn reduce(&self) -> Self {
        let q = self.q();
        let mut num = self.num.clone();
        let mut atoms = self.atoms.clone();
        for (a, e) in atoms.iter_mut() {
            while *e > 0 {
                match num.div_binomial(a.hi(q), a.lo(q)) {
                    Some(quot) => {
                        num = quot;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        Self::normalized(num, self.theta, atoms)
    }

    /// Expanded denominator.
    pub fn denominator(&self) -> SparsePoly {
        let q = self.q();
        let mut d = SparsePoly::monomial(self.field(), 1, self.theta);
        for (a, &e) in &self.atoms {
            for _ in 0..e {
                d = d.mul_binomial(a.hi(q), a.lo(q));
            }
        }
        d
    }

    /// Inverse, available when the numerator factors into `θ` and twisted
    /// brackets times a constant.
    pub fn try_inv(&self) -> Result<Self> {
        let f = self.field();
        let q = self.q();
        let r = self.reduce();
        let mut num = r.num.clone();
        let low = num.low_degree().ok_or(Error::ZeroDivision)?;
        num = Self::unshift(&num, low);
        // num = c θ^low ∏ (θ^{M_a} - 1)
        let (num, found) = split_binomials(&num, q).ok_or_else(|| Error::NonUnit(format!("{}", r.num)))?;
        let theta_gain: u64 = found.iter().map(|(a, &e)| e as u64 * a.lo(q)).sum();
        let c = num.as_constant().unwrap();
        let c_inv = f.inv(c)?;
        let new_num = r.denominator().shift(theta_gain).scale(c_inv);
        Ok(Self::normalized(new_num, low, found))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.try_inv()?))
    }

    /// Expansion at infinity modulo `u^prec`.
    pub fn to_laurent(&self, prec: i64) -> LaurentSeries {
        let f = self.field();
        let Some(v) = self.valuation() else {
            return LaurentSeries::zero(f, prec);
        };
        if v >= prec {
            return LaurentSeries::zero(f, prec);
        }
        let q = self.q();
        let len = (prec - v) as usize;
        // 1/den = u^{dd} ∏ (1 - u^{M_a})^{-e_a}
        let mut series = vec![0u32; len];
        series[0] = 1;
        for (a, &e) in &self.atoms {
            let m = (a.hi(q) - a.lo(q)) as usize;
            if m >= len {
                continue;
            }
            for _ in 0..e {
                for i in m..len {
                    series[i] = f.add(series[i], series[i - m]);
                }
            }
        }
        let dd = self.denominator_degree() as i64;
        let mut out = vec![0u64; len];
        let p = f.p() as u64;
        for &(e, c) in self.num.terms().iter().rev() {
            let off = (dd - e as i64 - v) as usize;
            if off >= len {
                break;
            }
            for i in 0..len - off {
                out[off + i] = (out[off + i] + c as u64 * series[i] as u64) % p;
            }
        }
        LaurentSeries::new(f, v, out.into_iter().map(|x| x as u32).collect(), prec)
    }
}

/// Writes `num` (with nonzero constant term) as a constant times a product of
/// `θ^{q^{k+s}-q^s} - 1`, trying larger factors first and backtracking.
fn split_binomials(num: &SparsePoly, q: u64) -> Option<(SparsePoly, BTreeMap<Atom, u32>)> {
    if num.as_constant().is_some() {
        return Some((num.clone(), BTreeMap::new()));
    }
    let deg = num.degree()?;
    let mut candidates = Vec::new();
    for total in 1..64u32 {
        let Some(hi) = q.checked_pow(total) else { break };
        if hi / q * (q - 1) > deg {
            break;
        }
        for shift in 0..total {
            let atom = Atom { k: total - shift, shift };
            let m = hi - atom.lo(q);
            if m <= deg {
                candidates.push((m, atom));
            }
        }
    }
    candidates.sort_by(|a, b| b.0.cmp(&a.0));
    for (m, atom) in candidates {
        if let Some(quot) = num.div_binomial(m, 0) {
            if let Some((c, mut found)) = split_binomials(&quot, q) {
                *found.entry(atom).or_insert(0) += 1;
                return Some((c, found));
            }
        }
    }
    None
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.field() == other.field() && self.sub(other).is_zero()
    }
}

impl Eq for Frac {}

impl fmt::Display for Frac {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduce();
        if r.theta == 0 && r.atoms.is_empty() {
            return write!(out, "{}", r.num);
        }
        write!(out, "({})/({})", r.num, r.denominator())
    }
}

impl fmt::Debug for Frac {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "({}) / θ^{}", self.num, self.theta)?;
        for (a, e) in &self.atoms {
            if a.shift == 0 {
                write!(out, "·[{}]^{e}", a.k)?;
            } else {
                write!(out, "·[{}]^(q^{})^{e}", a.k, a.shift)?;
            }
        }
        Ok(())
    }
}

macro_rules! frac_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for &Frac {
            type Output = Frac;
            fn $m(self, rhs: &Frac) -> Frac { Frac::$m(self, rhs) }
        }
    )*};
}
frac_ops!(Add add, Sub sub, Mul mul);

impl Neg for &Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn bracket_expansion() {
        let f = f3();
        let x = Frac::inv_bracket_pow(f, 1, 1, 1);
        assert_eq!(x.to_laurent(9).to_string(), "u^3 + u^5 + u^7 + O(u^9)");
        assert_eq!(x.valuation(), Some(3));
    }

    #[test]
    fn inverse_of_bracket_products() {
        let f = PrimeField::new(5).unwrap();
        let b1 = Frac::bracket(f, 1);
        let b2 = Frac::bracket(f, 2);
        let x = b1.mul(&b2).mul(&b2.frobenius(1)).mul(&Frac::theta(f).pow(3)).scale(3);
        let inv = x.try_inv().unwrap();
        assert_eq!(x.mul(&inv), Frac::one(f));
        let bad = Frac::from_poly(&PolyA::parse(f, "T+1").unwrap()).add(&Frac::one(f).div_bracket_pow(1, 1));
        assert!(bad.try_inv().is_err());
    }

    #[test]
    fn frobenius_of_fraction_is_power() {
        let f = f3();
        let x = Frac::from_poly(&PolyA::parse(f, "T^2+1").unwrap()).div_bracket_pow(1, 2).div_bracket_pow(2, 1);
        assert_eq!(x.frobenius(1), x.pow(3));
        assert_eq!(x.frobenius(2), x.pow(9));
    }

    #[test]
    fn reduce_cancels() {
        let f = f3();
        let x = Frac::bracket(f, 2).div_bracket_pow(1, 1);
        let r = x.reduce();
        assert!(r.denominator_factors().1.is_empty());
        assert_eq!(r.numerator().degree(), Some(6));
    }

    proptest! {
        #[test]
        fn laurent_conversion_is_a_ring_map(
            a in prop::collection::vec(0u32..3, 1..6),
            b in prop::collection::vec(0u32..3, 1..6),
            ka in 1u32..3, kb in 1u32..3, ea in 0u32..3, eb in 0u32..3,
        ) {
            let f = f3();
            let x = Frac::from_poly(&PolyA::from_coeffs(f, a)).div_bracket_pow(ka, ea);
            let y = Frac::from_poly(&PolyA::from_coeffs(f, b)).div_bracket_pow(kb, eb).frobenius(1);
            let prec = 20;
            let big = 60;
            prop_assert_eq!(x.add(&y).to_laurent(prec), x.to_laurent(big).add(&y.to_laurent(big)).truncate(prec));
            prop_assert_eq!(x.mul(&y).to_laurent(prec), x.to_laurent(big).mul(&y.to_laurent(big)).truncate(prec));
        }

        #[test]
        fn laurent_matches_dense_long_division(a in prop::collection::vec(0u32..5, 1..8), k in 1u32..3, e in 1u32..3) {
            let f = PrimeField::new(5).unwrap();
            let num = PolyA::from_coeffs(f, a);
            let x = Frac::from_poly(&num).div_bracket_pow(k, e);
            let den = Frac::bracket(f, k).pow(e as u64).as_sparse().unwrap().to_dense();
            prop_assert_eq!(x.to_laurent(30), LaurentSeries::from_fraction(&num, &den, 30).unwrap());
        }
    }
}
