//! Polynomials in an auxiliary variable `t` over `K`, and truncated Taylor
//! expansions around `t = θ`.
//!
//! The Taylor coefficient `a_j` of `f` at `t = θ` is `∂_t^j(f)` evaluated at
//! `t = θ`, so a [`ThetaTaylor`] is the natural carrier of hyperderivative
//! data in `t`.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::frac::Frac;
use crate::sparse::SparsePoly;

/// `Σ c_k t^k` with `c_k ∈ K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TPoly {
    field: PrimeField,
    coeffs: Vec<Frac>,
}

impl TPoly {
    pub fn new(field: PrimeField, mut coeffs: Vec<Frac>) -> Self {
        while coeffs.last().is_some_and(Frac::is_zero) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn constant(c: Frac) -> Self {
        Self::new(c.field(), vec![c])
    }

    /// The variable `t`.
    pub fn t(field: PrimeField) -> Self {
        Self::new(field, vec![Frac::zero(field), Frac::one(field)])
    }

    /// `t - c`.
    pub fn t_minus(c: Frac) -> Self {
        let f = c.field();
        Self::new(f, vec![c.neg(), Frac::one(f)])
    }

    pub fn coeffs(&self) -> &[Frac] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Frac::zero(self.field);
        let coeffs = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&zero).add(other.coeffs.get(k).unwrap_or(&zero)))
            .collect();
        Self::new(self.field, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(self.field, Vec::new());
        }
        let mut coeffs = vec![Frac::zero(self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Self::new(self.field, coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(Frac::one(self.field)), |acc, _| acc.mul(self))
    }

    /// The hyperderivative `∂_t^j`, coefficientwise in `K`.
    pub fn hyperderiv(&self, j: usize) -> Self {
        let f = self.field;
        let coeffs = (j..self.coeffs.len())
            .map(|k| self.coeffs[k].scale(f.binomial(k as i64, j as u64)))
            .collect();
        Self::new(f, coeffs)
    }

    /// Value at `t = θ`.
    pub fn eval_theta(&self) -> Frac {
        let theta = Frac::theta(self.field);
        self.coeffs.iter().rev().fold(Frac::zero(self.field), |acc, c| acc.mul(&theta).add(c))
    }

    /// Taylor coefficients at `t = θ` up to `order`:
    /// `a_j = Σ_k c_k binom(k, j) θ^{k-j}`.
    pub fn taylor_at_theta(&self, order: usize) -> ThetaTaylor {
        let f = self.field;
        let coeffs = (0..=order)
            .map(|j| {
                let mut acc = Frac::zero(f);
                for (k, c) in self.coeffs.iter().enumerate().skip(j) {
                    let b = f.binomial(k as i64, j as u64);
                    if b != 0 {
                        let mono = SparsePoly::monomial(f, b, (k - j) as u64);
                        acc = acc.add(&c.mul_sparse(&mono));
                    }
                }
                acc
            })
            .collect();
        ThetaTaylor { field: f, coeffs }
    }
}

/// `Σ_{j≤m} a_j (t-θ)^j + O((t-θ)^{m+1})` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaTaylor {
    field: PrimeField,
    coeffs: Vec<Frac>,
}

impl ThetaTaylor {
    pub fn from_coeffs(field: PrimeField, mut coeffs: Vec<Frac>, order: usize) -> Self {
        coeffs.resize(order + 1, Frac::zero(field));
        Self { field, coeffs }
    }

    pub fn constant(c: Frac, order: usize) -> Self {
        let f = c.field();
        Self::from_coeffs(f, vec![c], order)
    }

    pub fn one(field: PrimeField, order: usize) -> Self {
        Self::constant(Frac::one(field), order)
    }

    /// `c0 + c1 (t-θ)`.
    pub fn linear(c0: Frac, c1: Frac, order: usize) -> Self {
        let f = c0.field();
        Self::from_coeffs(f, vec![c0, c1], order)
    }

    /// `t - θ^{q^k} = (t-θ) - [k]`.
    pub fn t_minus_frobenius(field: PrimeField, k: u32, order: usize) -> Self {
        Self::linear(Frac::bracket(field, k).neg(), Frac::one(field), order)
    }

    /// `1/(t - θ^{q^k}) = -Σ_j (t-θ)^j / [k]^{j+1}` for `k ≥ 1`.
    pub fn inv_t_minus_frobenius(field: PrimeField, k: u32, order: usize) -> Self {
        assert!(k >= 1, "t - θ is not a unit at t = θ");
        let minus_one = field.p() - 1;
        let coeffs = (0..=order).map(|j| Frac::inv_bracket_pow(field, minus_one, k, j as u32 + 1)).collect();
        Self { field, coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Frac] {
        &self.coeffs
    }

    /// `∂_t^j(f)` at `t = θ`.
    pub fn coeff(&self, j: usize) -> &Frac {
        &self.coeffs[j]
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|j| self.coeffs[j].add(&other.coeffs[j])).collect();
        Self { field: self.field, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|j| self.coeffs[j].sub(&other.coeffs[j])).collect();
        Self { field: self.field, coeffs }
    }

    pub fn scale(&self, c: &Frac) -> Self {
        Self { field: self.field, coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|j| {
                (0..=j).fold(Frac::zero(self.field), |acc, i| acc.add(&self.coeffs[i].mul(&other.coeffs[j - i])))
            })
            .collect();
        Self { field: self.field, coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.field, self.order()), |acc, _| acc.mul(self))
    }

    pub fn inv(&self) -> Result<Self> {
        let a0_inv = self.coeffs[0]
            .try_inv()
            .map_err(|_| Error::NonUnit("denominator vanishes at t = θ".into()))?;
        let mut out: Vec<Frac> = vec![a0_inv.clone()];
        for j in 1..=self.order() {
            let s = (1..=j).fold(Frac::zero(self.field), |acc, k| acc.add(&self.coeffs[k].mul(&out[j - k])));
            out.push(s.mul(&a0_inv).neg());
        }
        Ok(Self { field: self.field, coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }
}

/// Taylor coefficients of `num/den` at `t = θ` up to `order`.
pub fn taylor_of_fraction(num: &TPoly, den: &TPoly, order: usize) -> Result<ThetaTaylor> {
    num.taylor_at_theta(order).div(&den.taylor_at_theta(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyA;
    use proptest::prelude::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn geometric_expansion() {
        let f = f3();
        let den = TPoly::t_minus(Frac::theta(f).pow(3));
        let one = TPoly::constant(Frac::one(f));
        let tt = taylor_of_fraction(&one, &den, 1).unwrap();
        assert_eq!(tt.coeff(0), &Frac::inv_bracket_pow(f, 2, 1, 1));
        assert_eq!(tt.coeff(1), &Frac::inv_bracket_pow(f, 2, 1, 2));
        assert_eq!(tt, ThetaTaylor::inv_t_minus_frobenius(f, 1, 1));
    }

    #[test]
    fn trivial_expansions() {
        let f = f3();
        let one = TPoly::constant(Frac::one(f));
        let tt = taylor_of_fraction(&one, &one, 3).unwrap();
        assert_eq!(tt, ThetaTaylor::one(f, 3));
        let lin = TPoly::t_minus(Frac::theta(f));
        let tt = taylor_of_fraction(&lin, &one, 2).unwrap();
        assert_eq!(tt.coeffs(), &[Frac::zero(f), Frac::one(f), Frac::zero(f)]);
        assert!(taylor_of_fraction(&one, &lin, 2).is_err());
    }

    fn tpoly(f: PrimeField, coeffs: &[Vec<u32>]) -> TPoly {
        TPoly::new(f, coeffs.iter().map(|c| Frac::from_poly(&PolyA::from_coeffs(f, c.clone()))).collect())
    }

    proptest! {
        #[test]
        fn taylor_coefficients_are_t_hyperderivatives(
            c in prop::collection::vec(prop::collection::vec(0u32..5, 0..4), 1..6)
        ) {
            let f = PrimeField::new(5).unwrap();
            let p = tpoly(f, &c);
            let tt = p.taylor_at_theta(4);
            for j in 0..=4 {
                prop_assert_eq!(tt.coeff(j), &p.hyperderiv(j).eval_theta());
            }
        }

        #[test]
        fn product_is_convolution(
            a in prop::collection::vec(prop::collection::vec(0u32..3, 0..3), 1..5),
            b in prop::collection::vec(prop::collection::vec(0u32..3, 0..3), 1..5),
        ) {
            let f = f3();
            let (pa, pb) = (tpoly(f, &a), tpoly(f, &b));
            prop_assert_eq!(pa.mul(&pb).taylor_at_theta(4), pa.taylor_at_theta(4).mul(&pb.taylor_at_theta(4)));
        }
    }
}
