//! Rank-2 Drinfeld modules `φ_θ = θ + aτ + bτ²`, shadowed partitions and
//! the combinatorial formula for logarithm coefficients.

use std::fmt;

use crate::carlitz::deg_l;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::frac::Frac;
use crate::laurent::LaurentSeries;
use crate::poly::PolyA;
use crate::sparse::SparsePoly;

#[derive(Clone, PartialEq, Eq)]
pub struct DrinfeldRank2 {
    field: PrimeField,
    a: PolyA,
    b: PolyA,
}

impl DrinfeldRank2 {
    pub fn new(a: PolyA, b: PolyA) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::Precondition("b must be nonzero".into()));
        }
        if a.field() != b.field() {
            return Err(Error::Precondition("a and b live over different fields".into()));
        }
        Ok(Self { field: a.field(), a, b })
    }

    /// Constant coefficients `a, b ∈ F_q`.
    pub fn constant(field: PrimeField, a: u32, b: u32) -> Result<Self> {
        Self::new(PolyA::constant(field, a), PolyA::constant(field, b))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn a(&self) -> &PolyA {
        &self.a
    }

    pub fn b(&self) -> &PolyA {
        &self.b
    }

    pub fn is_constant(&self) -> bool {
        self.a.is_constant() && self.b.is_constant()
    }

    /// `(a, b)` as field elements, for constant-coefficient modules.
    pub fn constants(&self) -> Result<(u32, u32)> {
        if !self.is_constant() {
            return Err(Error::NonConstant);
        }
        Ok((self.a.coeff(0), self.b.coeff(0)))
    }

    /// `a^{q^k}` as a sparse polynomial.
    pub fn a_frob(&self, k: u32) -> SparsePoly {
        SparsePoly::from_dense(&self.a).frobenius(k)
    }

    /// `b^{q^k}` as a sparse polynomial.
    pub fn b_frob(&self, k: u32) -> SparsePoly {
        SparsePoly::from_dense(&self.b).frobenius(k)
    }

    /// The twist `φ̃ = γ^{-1} φ γ` with `γ^{q-1} = -1/b`.
    pub fn twist(&self) -> Result<Self> {
        let (a, b) = self.constants()?;
        let f = self.field;
        let c = f.neg(f.inv(b)?);
        let ta = f.mul(a, c);
        let tb = f.mul(b, f.pow(c, f.p() as u64 + 1));
        Self::constant(f, ta, tb)
    }
}

impl fmt::Debug for DrinfeldRank2 {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "φ[F_{}](a = {}, b = {})", self.field.p(), self.a, self.b)
    }
}

/// A pair `(S1, S2)` of subsets of `{0, …, n-1}` such that `S1`, `S2` and
/// `S2 + 1` partition it (empty parts allowed). Sets are bitmasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ShadowedPartition {
    pub n: u32,
    pub s1: u64,
    pub s2: u64,
}

impl ShadowedPartition {
    pub fn is_valid(&self) -> bool {
        let full = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let shadow = self.s2 << 1;
        self.s1 & self.s2 == 0
            && self.s1 & shadow == 0
            && self.s2 & shadow == 0
            && self.s1 | self.s2 | shadow == full
    }

    /// Membership in the subfamily with `0 ∈ S1`.
    pub fn starts_in_s1(&self) -> bool {
        self.s1 & 1 == 1
    }

    pub fn s1_elements(&self) -> Vec<u32> {
        elements(self.s1)
    }

    pub fn s2_elements(&self) -> Vec<u32> {
        elements(self.s2)
    }
}

impl fmt::Display for ShadowedPartition {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: u64| {
            let e: Vec<String> = elements(s).iter().map(|x| x.to_string()).collect();
            format!("{{{}}}", e.join(","))
        };
        write!(out, "({}, {})", show(self.s1), show(self.s2))
    }
}

fn elements(set: u64) -> Vec<u32> {
    (0..64).filter(|i| set >> i & 1 == 1).collect()
}

/// All shadowed partitions of level `n`, by descent on the largest element:
/// first those with `n-1 ∈ S1`, then those with `n-2 ∈ S2`.
pub fn shadowed_partitions(n: u32) -> Vec<ShadowedPartition> {
    assert!(n < 64, "levels above 63 do not fit the bitmask encoding");
    if n == 0 {
        return vec![ShadowedPartition { n: 0, s1: 0, s2: 0 }];
    }
    let mut out: Vec<ShadowedPartition> = shadowed_partitions(n - 1)
        .into_iter()
        .map(|u| ShadowedPartition { n, s1: u.s1 | 1 << (n - 1), s2: u.s2 })
        .collect();
    if n >= 2 {
        out.extend(
            shadowed_partitions(n - 2)
                .into_iter()
                .map(|u| ShadowedPartition { n, s1: u.s1, s2: u.s2 | 1 << (n - 2) }),
        );
    }
    out
}

/// `w₁(S) = Σ_{i∈S} q^i`.
pub fn weight1(q: u64, set: u64) -> u64 {
    elements(set).iter().map(|&i| q.pow(i)).sum()
}

/// `w₂(S) = Σ_{i∈S, i≠0} q^i`, defined when `0 ∈ S`.
pub fn weight2(q: u64, set: u64) -> Result<u64> {
    if set & 1 == 0 {
        return Err(Error::Precondition("the second weight needs 0 in the set".into()));
    }
    Ok(weight1(q, set & !1))
}

/// `∏_{i∈S} x^{q^i}` for a sparse `x`.
fn frob_product(x: &SparsePoly, set: u64) -> SparsePoly {
    elements(set)
        .iter()
        .fold(SparsePoly::constant(x.field(), 1), |acc, &i| acc.mul(&x.frobenius(i)))
}

/// Numerator `a^w b^{w₁(S2)}` of `C_U` and the brackets `k` whose negatives
/// `-[k]` make up its denominator.
pub fn component_parts(u: &ShadowedPartition, phi: &DrinfeldRank2) -> (SparsePoly, Vec<u32>) {
    let a = SparsePoly::from_dense(&phi.a);
    let b = SparsePoly::from_dense(&phi.b);
    let a_set = if u.starts_in_s1() { u.s1 & !1 } else { u.s1 };
    let num = frob_product(&a, a_set).mul(&frob_product(&b, u.s2));
    let brackets = u.s1_elements().iter().map(|i| i + 1).chain(u.s2_elements().iter().map(|i| i + 2)).collect();
    (num, brackets)
}

/// The component `C_U` of `γ_n` attached to `U`.
pub fn component(u: &ShadowedPartition, phi: &DrinfeldRank2) -> Frac {
    let f = phi.field;
    let (num, brackets) = component_parts(u, phi);
    let sign = if brackets.len() % 2 == 1 { f.p() - 1 } else { 1 };
    brackets.iter().fold(Frac::from_sparse(num.scale(sign)), |x, &k| x.div_bracket_pow(k, 1))
}

/// `F_n`, `T_n` and `γ_n = a F_n + T_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaParts {
    pub f: Frac,
    pub t: Frac,
    pub gamma: Frac,
}

fn partition_sum(phi: &DrinfeldRank2, n: u32, starts_in_s1: bool) -> Frac {
    let parts: Vec<Frac> = shadowed_partitions(n)
        .iter()
        .filter(|u| u.starts_in_s1() == starts_in_s1)
        .map(|u| component(u, phi))
        .collect();
    Frac::sum(phi.field, &parts)
}

/// `F_n`: the sum of components over partitions with `0 ∈ S1`.
pub fn f_partition_sum(phi: &DrinfeldRank2, n: u32) -> Frac {
    partition_sum(phi, n, true)
}

/// `T_n`: the sum of components over partitions with `0 ∉ S1`.
pub fn t_partition_sum(phi: &DrinfeldRank2, n: u32) -> Frac {
    partition_sum(phi, n, false)
}

/// Sums components over shadowed partitions, split by whether `0 ∈ S1`.
pub fn ft_gamma(phi: &DrinfeldRank2, n: u32) -> GammaParts {
    let fs = f_partition_sum(phi, n);
    let ts = t_partition_sum(phi, n);
    let gamma = fs.mul_sparse(&SparsePoly::from_dense(&phi.a)).add(&ts);
    GammaParts { f: fs, t: ts, gamma }
}

/// `γ_0..=γ_n` from `γ_i = -(a^{q^{i-1}} γ_{i-1} + b^{q^{i-2}} γ_{i-2}) / [i]`.
pub fn gamma_recursive(phi: &DrinfeldRank2, n: u32) -> Vec<Frac> {
    two_term_recursion(phi, n, Frac::one(phi.field), Frac::zero(phi.field))
}

/// `F_0..=F_n` from the same recursion started at `F_0 = 0`, `F_1 = -1/[1]`.
pub fn f_recursive(phi: &DrinfeldRank2, n: u32) -> Vec<Frac> {
    let f = phi.field;
    let mut out = vec![Frac::zero(f)];
    if n == 0 {
        return out;
    }
    out.push(Frac::inv_bracket_pow(f, f.p() - 1, 1, 1));
    for i in 2..=n {
        let next = recursion_step(phi, i, &out[i as usize - 1], &out[i as usize - 2]);
        out.push(next);
    }
    out
}

fn recursion_step(phi: &DrinfeldRank2, i: u32, prev: &Frac, prev2: &Frac) -> Frac {
    let s = prev.mul_sparse(&phi.a_frob(i - 1));
    let s = if i >= 2 { s.add(&prev2.mul_sparse(&phi.b_frob(i - 2))) } else { s };
    s.neg().div_bracket_pow(i, 1)
}

fn two_term_recursion(phi: &DrinfeldRank2, n: u32, first: Frac, before: Frac) -> Vec<Frac> {
    let mut out = vec![first];
    let mut prev2 = before;
    for i in 1..=n {
        let next = recursion_step(phi, i, &out[i as usize - 1], &prev2);
        prev2 = out[i as usize - 1].clone();
        out.push(next);
    }
    out
}

/// Exponential coefficients `ξ_0..=ξ_n`:
/// `ξ_i = (a ξ_{i-1}^q + b ξ_{i-2}^{q²}) / [i]`.
pub fn exp_coeffs(phi: &DrinfeldRank2, n: u32) -> Vec<Frac> {
    let f = phi.field;
    let a = SparsePoly::from_dense(&phi.a);
    let b = SparsePoly::from_dense(&phi.b);
    let mut out = vec![Frac::one(f)];
    for i in 1..=n as usize {
        let mut s = out[i - 1].frobenius(1).mul_sparse(&a);
        if i >= 2 {
            s = s.add(&out[i - 2].frobenius(2).mul_sparse(&b));
        }
        out.push(s.div_bracket_pow(i as u32, 1));
    }
    out
}

/// Rigorous lower bounds for `v_∞(γ_i)`, `i = 0..=n`, for constant
/// coefficients: `γ_i L_i` is a polynomial whose degree is bounded through
/// `γ_i L_i = a γ_{i-1} L_{i-1} - b [i-1] γ_{i-2} L_{i-2}`.
pub fn gamma_valuation_bounds(q: u64, n: u32) -> Vec<i64> {
    let mut dmax = vec![0u64, 0u64];
    for i in 2..=n as usize {
        let next = dmax[i - 1].max(q.pow(i as u32 - 1) + dmax[i - 2]);
        dmax.push(next);
    }
    (0..=n as usize).map(|i| deg_l(q, i as u32) as i64 - dmax[i] as i64).collect()
}

const LOG_TERM_CAP: u32 = 16;

/// `log_φ(z) = Σ γ_i z^{q^i}` for constant coefficients.
pub fn drinfeld_log_eval(phi: &DrinfeldRank2, z: &LaurentSeries, prec: i64) -> Result<LaurentSeries> {
    phi.constants()?;
    let f = phi.field;
    let q = f.p() as i64;
    let Some(v) = z.valuation() else {
        return Ok(LaurentSeries::zero(f, prec.min(z.prec())));
    };
    let bounds = gamma_valuation_bounds(q as u64, LOG_TERM_CAP);
    let term_bound = |i: usize| bounds[i] + q.pow(i as u32) * v;
    let mut stop = None;
    for i in 1..LOG_TERM_CAP as usize {
        if term_bound(i) >= prec && term_bound(i + 1) > term_bound(i) {
            stop = Some(i);
            break;
        }
    }
    let stop = stop.ok_or_else(|| Error::Divergence(format!("logarithm terms at v(z) = {v}")))?;
    let gammas = gamma_recursive(phi, stop as u32);
    let mut acc = LaurentSeries::zero(f, prec);
    for (i, g) in gammas.iter().enumerate().take(stop) {
        let qi = q.pow(i as u32);
        let vg = g.valuation().unwrap_or(prec);
        let zi = z.frobenius_truncated(i as u32, prec - vg);
        acc = acc.add(&zi.mul(&g.to_laurent(prec - qi * v)));
    }
    Ok(acc)
}
