//! Truncated Laurent series in `u = 1/θ`, the completion `K_∞ = F_q((u))`.
//!
//! A series is known modulo `u^prec` (absolute precision). Results of
//! arithmetic carry the precision that the operands actually determine.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::PolyA;

/// Precision used when the caller has no opinion.
pub const DEFAULT_PREC: i64 = 40;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    field: PrimeField,
    /// Exponent of `u` carried by `coeffs[0]`; equals `prec` for the zero series.
    lead: i64,
    coeffs: Vec<u32>,
    prec: i64,
}

/// Wire form: `{"lead", "coeffs", "prec", "q"}`.
#[derive(Serialize, Deserialize)]
struct Wire {
    lead: i64,
    coeffs: Vec<u32>,
    prec: i64,
    q: u32,
}

impl Serialize for LaurentSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire { lead: self.lead, coeffs: self.coeffs.clone(), prec: self.prec, q: self.field.p() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        let field = PrimeField::new(w.q).map_err(serde::de::Error::custom)?;
        Ok(LaurentSeries::new(field, w.lead, w.coeffs, w.prec))
    }
}

impl LaurentSeries {
    /// Builds `Σ coeffs[k] u^{lead+k} + O(u^prec)`, discarding anything at or
    /// beyond `prec`.
    pub fn new(field: PrimeField, lead: i64, mut coeffs: Vec<u32>, prec: i64) -> Self {
        for c in coeffs.iter_mut() {
            *c %= field.p();
        }
        let keep = (prec - lead).clamp(0, coeffs.len() as i64) as usize;
        coeffs.truncate(keep);
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let skip = coeffs.iter().take_while(|&&c| c == 0).count();
        if skip == coeffs.len() {
            return Self::zero(field, prec);
        }
        coeffs.drain(..skip);
        Self { field, lead: lead + skip as i64, coeffs, prec }
    }

    pub fn zero(field: PrimeField, prec: i64) -> Self {
        Self { field, lead: prec, coeffs: Vec::new(), prec }
    }

    pub fn one(field: PrimeField, prec: i64) -> Self {
        Self::constant(field, 1, prec)
    }

    pub fn constant(field: PrimeField, c: u32, prec: i64) -> Self {
        Self::new(field, 0, vec![c], prec)
    }

    /// `u^e`.
    pub fn monomial(field: PrimeField, c: u32, e: i64, prec: i64) -> Self {
        Self::new(field, e, vec![c], prec)
    }

    /// Embeds a polynomial `Σ c_k θ^k = Σ c_k u^{-k}`.
    pub fn from_poly(p: &PolyA, prec: i64) -> Self {
        match p.degree() {
            None => Self::zero(p.field(), prec),
            Some(d) => {
                let coeffs = p.coeffs().iter().rev().copied().collect();
                Self::new(p.field(), -(d as i64), coeffs, prec)
            }
        }
    }

    /// Expansion of `num/den` at infinity.
    pub fn from_fraction(num: &PolyA, den: &PolyA, prec: i64) -> Result<Self> {
        let dd = den.degree().ok_or(Error::ZeroDivision)? as i64;
        let Some(dn) = num.degree() else {
            return Ok(Self::zero(num.field(), prec));
        };
        let v = dd - dn as i64;
        if v >= prec {
            return Ok(Self::zero(num.field(), prec));
        }
        // Both are u^{-deg} times a unit power series; only the relative
        // precision prec - v of the quotient matters.
        let rel = (prec - v).max(0);
        let n = Self::new(num.field(), 0, num.coeffs().iter().rev().copied().collect(), rel);
        let d = Self::new(den.field(), 0, den.coeffs().iter().rev().copied().collect(), rel);
        let q = n.div(&d)?;
        Ok(Self::new(num.field(), q.lead + v, q.coeffs, prec))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn lead(&self) -> i64 {
        self.lead
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `v_∞`, or `None` when the series is zero to the known precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.lead)
        }
    }

    /// Lower bound for the valuation: `prec` for the zero series.
    pub fn valuation_bound(&self) -> i64 {
        self.lead
    }

    /// Coefficient of `u^m`, for `m < prec`.
    pub fn coeff(&self, m: i64) -> u32 {
        debug_assert!(m < self.prec, "coefficient u^{m} is beyond precision {}", self.prec);
        if m < self.lead {
            return 0;
        }
        self.coeffs.get((m - self.lead) as usize).copied().unwrap_or(0)
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        Self::new(self.field, self.lead, self.coeffs.clone(), prec)
    }

    /// Same coefficients, precision replaced. Used for exact objects whose
    /// precision is a storage bound rather than an uncertainty.
    pub fn with_prec(&self, prec: i64) -> Self {
        Self::new(self.field, self.lead, self.coeffs.clone(), prec)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let f = self.field;
        let prec = self.prec.min(other.prec);
        let lead = self.lead.min(other.lead);
        if lead >= prec {
            return Self::zero(f, prec);
        }
        let mut out = vec![0u32; (prec - lead) as usize];
        for (k, &c) in self.coeffs.iter().enumerate() {
            let idx = self.lead + k as i64 - lead;
            if (idx as usize) < out.len() {
                out[idx as usize] = c;
            }
        }
        for (k, &c) in other.coeffs.iter().enumerate() {
            let idx = (other.lead + k as i64 - lead) as usize;
            if idx < out.len() {
                let c = if negate { f.neg(c) } else { c };
                out[idx] = f.add(out[idx], c);
            }
        }
        Self::new(f, lead, out, prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.p() - 1)
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        Self::new(f, self.lead, self.coeffs.iter().map(|&x| f.mul(x, c)).collect(), self.prec)
    }

    /// Multiplication by `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::new(self.field, self.lead + k, self.coeffs.clone(), self.prec + k)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = self.field;
        let prec = (self.prec + other.lead).min(other.prec + self.lead);
        let lead = self.lead + other.lead;
        if self.is_zero() || other.is_zero() || lead >= prec {
            return Self::zero(f, prec);
        }
        let len = (prec - lead) as usize;
        let p = f.p() as u64;
        let mut out = vec![0u64; len];
        for (i, &a) in self.coeffs.iter().enumerate().take(len) {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = (out[i + j] + a as u64 * b as u64) % p;
            }
        }
        Self::new(f, lead, out.into_iter().map(|x| x as u32).collect(), prec)
    }

    /// Inverse of a nonzero series; precision drops by twice the valuation.
    pub fn inv(&self) -> Result<Self> {
        let f = self.field;
        let v = self.valuation().ok_or_else(|| Error::NonUnit("series is zero to its precision".into()))?;
        let rel = (self.prec - v) as usize;
        let c0_inv = f.inv(self.coeffs[0])?;
        let mut out = vec![0u32; rel];
        out[0] = c0_inv;
        for k in 1..rel {
            let mut s = 0u32;
            for j in 1..=k.min(self.coeffs.len() - 1) {
                s = f.add(s, f.mul(self.coeffs[j], out[k - j]));
            }
            out[k] = f.mul(f.neg(s), c0_inv);
        }
        Ok(Self::new(f, -v, out, self.prec - 2 * v))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field, i64::MAX / 4);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        if acc.prec == i64::MAX / 4 {
            acc = acc.with_prec(self.prec.max(0));
        }
        acc
    }

    /// `x^{q^k}`: exponents and precision scale by `q^k`.
    pub fn frobenius(&self, k: u32) -> Self {
        self.frobenius_truncated(k, i64::MAX)
    }

    /// `x^{q^k} + O(u^cap)`, never materializing coefficients beyond `cap`.
    pub fn frobenius_truncated(&self, k: u32, cap: i64) -> Self {
        let step = (self.field.p() as i64).pow(k);
        let prec = self.prec.saturating_mul(step).min(cap);
        let lead = self.lead.saturating_mul(step);
        if self.is_zero() || lead >= prec {
            return Self::zero(self.field, prec);
        }
        let len = ((prec - lead) as usize).min((self.coeffs.len() - 1) * step as usize + 1);
        let mut out = vec![0u32; len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let idx = i * step as usize;
            if idx >= len {
                break;
            }
            out[idx] = c;
        }
        Self::new(self.field, lead, out, prec)
    }

    /// The hyperderivative `∂_θ^j`. The coefficient of `θ^{k-j}` is known
    /// exactly when that of `θ^k` is, so precision rises by `j`.
    pub fn hyperderiv(&self, j: u64) -> Self {
        let f = self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let m = self.lead + k as i64; // term c θ^{-m}
                f.mul(c, f.binomial(-m, j))
            })
            .collect();
        Self::new(f, self.lead + j as i64, coeffs, self.prec + j as i64)
    }

    /// Smallest exponent at which the two series differ, capped by the
    /// smaller precision.
    pub fn agreement(&self, other: &Self) -> i64 {
        let prec = self.prec.min(other.prec);
        let start = self.lead.min(other.lead);
        (start..prec).find(|&m| self.coeff(m) != other.coeff(m)).unwrap_or(prec)
    }

    /// Number of agreeing coefficients counted from `u^0`.
    pub fn matched_coefficients(&self, other: &Self) -> usize {
        self.agreement(other).max(0) as usize
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = self.field;
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let e = self.lead + k as i64;
            let s = f.signed(c);
            let mag = s.unsigned_abs();
            if first {
                if s < 0 {
                    out.write_str("-")?;
                }
            } else {
                out.write_str(if s < 0 { " - " } else { " + " })?;
            }
            first = false;
            match (e, mag) {
                (0, m) => write!(out, "{m}")?,
                (e, 1) => write!(out, "{}", upow(e))?,
                (e, m) => write!(out, "{m}*{}", upow(e))?,
            }
        }
        if first {
            write!(out, "O(u^{})", self.prec)
        } else {
            write!(out, " + O(u^{})", self.prec)
        }
    }
}

fn upow(e: i64) -> String {
    if e == 1 {
        "u".into()
    } else {
        format!("u^{e}")
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "[F_{}] {self}", self.field.p())
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
    fn fraction_examples() {
        let f = f3();
        let one = PolyA::one(f);
        let br = PolyA::parse(f, "T^3-T").unwrap();
        let s = LaurentSeries::from_fraction(&one, &br, 9).unwrap();
        assert_eq!(s.to_string(), "u^3 + u^5 + u^7 + O(u^9)");
        let t = LaurentSeries::from_fraction(&PolyA::theta(f), &one, 5).unwrap();
        assert_eq!(t.valuation(), Some(-1));
        assert_eq!(t.coeffs(), &[1]);
        let g = LaurentSeries::from_fraction(&PolyA::theta(f), &PolyA::parse(f, "T-1").unwrap(), 4).unwrap();
        assert_eq!(g.to_string(), "1 + u + u^2 + u^3 + O(u^4)");
        assert!(LaurentSeries::from_fraction(&one, &PolyA::zero(f), 4).is_err());
    }

    #[test]
    fn hyperderivative_examples() {
        let f = f3();
        let inv_theta = LaurentSeries::monomial(f, 1, 1, 10);
        assert_eq!(inv_theta.hyperderiv(1), LaurentSeries::monomial(f, 2, 2, 11));
        let cube = LaurentSeries::monomial(f, 1, -3, 10);
        assert!(cube.hyperderiv(2).is_zero());
        assert_eq!(cube.hyperderiv(0), cube);
    }

    #[test]
    fn text_and_json() {
        let f = f3();
        let s = LaurentSeries::new(f, 0, vec![1, 0, 0, 2, 0, 2], 7);
        assert_eq!(s.to_string(), "1 - u^3 - u^5 + O(u^7)");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"lead":0,"coeffs":[1,0,0,2,0,2],"prec":7,"q":3}"#);
        let back: LaurentSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn precision_rules() {
        let f = f3();
        let a = LaurentSeries::new(f, 0, vec![1, 1], 5);
        let b = LaurentSeries::new(f, 2, vec![1], 9);
        assert_eq!(a.add(&b).prec(), 5);
        assert_eq!(a.mul(&b).prec(), 7);
        assert_eq!(a.inv().unwrap().prec(), 5);
        assert_eq!(b.inv().unwrap().prec(), 5);
        assert_eq!(a.frobenius(1).prec(), 15);
    }

    fn poly_strategy() -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0u32..3, 1..6)
    }

    proptest! {
        #[test]
        fn fraction_round_trip(fc in poly_strategy(), gc in poly_strategy(), hc in poly_strategy()) {
            let f = f3();
            let (fp, gp, hp) = (PolyA::from_coeffs(f, fc), PolyA::from_coeffs(f, gc), PolyA::from_coeffs(f, hc));
            prop_assume!(!hp.is_zero());
            let prec = 12;
            let lhs = LaurentSeries::from_fraction(&(&fp * &gp), &hp, prec).unwrap();
            let rhs = LaurentSeries::from_fraction(&fp, &hp, prec + 20).unwrap()
                .mul(&LaurentSeries::from_poly(&gp, prec + 20));
            prop_assert_eq!(lhs.clone(), rhs.truncate(prec));
        }

        #[test]
        fn inverse_is_inverse(c in prop::collection::vec(0u32..5, 1..10), lead in -3i64..3) {
            let f = PrimeField::new(5).unwrap();
            let s = LaurentSeries::new(f, lead, c, 12);
            prop_assume!(!s.is_zero());
            let prod = s.mul(&s.inv().unwrap());
            prop_assert_eq!(prod.clone(), LaurentSeries::one(f, prod.prec()));
        }

        #[test]
        fn frobenius_is_multiplicative(a in prop::collection::vec(0u32..3, 1..8), b in prop::collection::vec(0u32..3, 1..8)) {
            let f = f3();
            let (x, y) = (LaurentSeries::new(f, 0, a, 8), LaurentSeries::new(f, 1, b, 8));
            prop_assert_eq!(x.mul(&y).frobenius(1), x.frobenius(1).mul(&y.frobenius(1)));
            // Repeated multiplication cannot see the gain in precision of a p-th power.
            prop_assert_eq!(x.frobenius(1).truncate(x.pow(3).prec()), x.pow(3));
        }

        #[test]
        fn hyperderivative_leibniz(a in prop::collection::vec(0u32..5, 1..8), b in prop::collection::vec(0u32..5, 1..8), n in 0u64..6) {
            let f = PrimeField::new(5).unwrap();
            let (x, y) = (LaurentSeries::new(f, -2, a, 10), LaurentSeries::new(f, 1, b, 10));
            let lhs = x.mul(&y).hyperderiv(n);
            let mut rhs = LaurentSeries::zero(f, i64::MAX / 4);
            for j in 0..=n {
                rhs = rhs.add(&x.hyperderiv(j).mul(&y.hyperderiv(n - j)));
            }
            let prec = lhs.prec().min(rhs.prec());
            prop_assert_eq!(lhs.truncate(prec), rhs.truncate(prec));
        }
    }
}
