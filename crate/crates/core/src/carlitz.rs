//! Carlitz brackets, factorials, polylogarithms and truncated zeta sums.

use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::frac::Frac;
use crate::laurent::LaurentSeries;
use crate::poly::{monic_polys, PolyA};

/// Memoized `[i]`, `D_i` and `L_i` as dense polynomials.
///
/// Dense tables are only practical for small `q^i`; the logarithm machinery
/// works with the factored forms from [`Frac`] instead.
#[derive(Debug)]
pub struct CarlitzData {
    field: PrimeField,
    brackets: RwLock<Vec<PolyA>>,
    factorials: RwLock<Vec<PolyA>>,
    l: RwLock<Vec<PolyA>>,
}

impl CarlitzData {
    pub fn new(field: PrimeField) -> Self {
        let one = PolyA::one(field);
        Self {
            field,
            brackets: RwLock::new(vec![one.clone()]),
            factorials: RwLock::new(vec![one.clone()]),
            l: RwLock::new(vec![one]),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    fn fill(table: &RwLock<Vec<PolyA>>, i: usize, next: impl Fn(usize, &[PolyA]) -> PolyA) -> PolyA {
        if let Some(v) = table.read().expect("poisoned").get(i) {
            return v.clone();
        }
        let mut t = table.write().expect("poisoned");
        while t.len() <= i {
            let k = t.len();
            let v = next(k, &t);
            t.push(v);
        }
        t[i].clone()
    }

    /// `[i] = θ^{q^i} - θ`, with `[0] = 1`.
    pub fn bracket(&self, i: usize) -> PolyA {
        let f = self.field;
        Self::fill(&self.brackets, i, |k, _| {
            let q = f.p() as usize;
            &PolyA::monomial(f, 1, q.pow(k as u32)) - &PolyA::theta(f)
        })
    }

    /// `D_i = [i] D_{i-1}^q`.
    pub fn carlitz_d(&self, i: usize) -> PolyA {
        let brackets: Vec<PolyA> = (0..=i).map(|k| self.bracket(k)).collect();
        Self::fill(&self.factorials, i, |k, t| &brackets[k] * &t[k - 1].frobenius(1))
    }

    /// `L_i = (-1)^i [i][i-1]···[1]`.
    pub fn carlitz_l(&self, i: usize) -> PolyA {
        let brackets: Vec<PolyA> = (0..=i).map(|k| self.bracket(k)).collect();
        Self::fill(&self.l, i, |k, t| -&(&brackets[k] * &t[k - 1]))
    }

    /// `Γ_{n+1} = ∏ D_j^{n_j}` over the base-`q` digits `n_j` of `n`.
    pub fn carlitz_gamma(&self, n: u64) -> PolyA {
        let q = self.field.p() as u64;
        let (mut n, mut j) = (n, 0usize);
        let mut acc = PolyA::one(self.field);
        while n > 0 {
            let digit = n % q;
            if digit > 0 {
                acc = &acc * &self.carlitz_d(j).pow(digit);
            }
            n /= q;
            j += 1;
        }
        acc
    }
}

/// `deg L_i = (q^{i+1} - q)/(q - 1)`.
pub fn deg_l(q: u64, i: u32) -> u64 {
    (q.pow(i + 1) - q) / (q - 1)
}

/// `c / L_i^n` in factored form.
pub fn inv_l_pow(field: PrimeField, i: u32, n: u32) -> Frac {
    let sign = if (i as u64 * n as u64) % 2 == 1 { field.p() - 1 } else { 1 };
    (1..=i).fold(Frac::constant(field, sign), |acc, k| acc.div_bracket_pow(k, n))
}

/// `L_i` in factored form.
pub fn l_frac(field: PrimeField, i: u32) -> Frac {
    let sign = if i % 2 == 1 { field.p() - 1 } else { 1 };
    (1..=i).fold(Frac::constant(field, sign), |acc, k| acc.mul(&Frac::bracket(field, k)))
}

/// `log_n(z) = Σ_i z^{q^i} / L_i^n`.
pub fn polylog_eval(n: u32, z: &LaurentSeries, prec: i64) -> Result<LaurentSeries> {
    let f = z.field();
    let q = f.p() as i64;
    let Some(v) = z.valuation() else {
        return Ok(LaurentSeries::zero(f, prec.min(z.prec())));
    };
    if v * (q - 1) + n as i64 * q <= 0 {
        return Err(Error::Domain(format!("log_{n} needs v(z) > -{n}q/(q-1), got v(z) = {v}")));
    }
    let mut acc = LaurentSeries::zero(f, prec);
    for i in 0u32.. {
        let qi = q.pow(i);
        let vl = n as i64 * deg_l(q as u64, i) as i64;
        if qi * v + vl >= prec {
            break;
        }
        let zi = z.frobenius_truncated(i, prec - vl);
        let inv = inv_l_pow(f, i, n).to_laurent(prec - qi * v);
        acc = acc.add(&zi.mul(&inv));
    }
    Ok(acc)
}

/// Degree blocks `Σ_{a monic, deg a = d} a^{-s}` for `d = 0..=maxdeg`, by
/// brute-force summation.
pub fn zeta_blocks(field: PrimeField, s: u32, maxdeg: usize, prec: i64) -> Vec<LaurentSeries> {
    let one = PolyA::one(field);
    (0..=maxdeg)
        .map(|d| {
            monic_polys(field, d).fold(LaurentSeries::zero(field, prec), |acc, a| {
                let term = LaurentSeries::from_fraction(&one, &a.pow(s as u64), prec).expect("monic");
                acc.add(&term)
            })
        })
        .collect()
}

/// `Σ_{a monic, deg a ≤ maxdeg} a^{-s}`.
pub fn zeta_truncated(field: PrimeField, s: u32, maxdeg: usize, prec: i64) -> LaurentSeries {
    zeta_blocks(field, s, maxdeg, prec)
        .iter()
        .fold(LaurentSeries::zero(field, prec), |acc, b| acc.add(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn tables() {
        let c = CarlitzData::new(f3());
        assert_eq!(c.bracket(1).to_string(), "T^3+2*T");
        assert_eq!(c.carlitz_l(1).to_string(), "2*T^3+T");
        let expect = &c.bracket(2) * &c.bracket(1).pow(3);
        assert_eq!(c.carlitz_d(2), expect);
        assert!(c.carlitz_gamma(1).is_one());
        assert_eq!(c.carlitz_gamma(3), c.carlitz_d(1));
        assert_eq!(c.carlitz_gamma(4), c.carlitz_d(1));
    }

    #[test]
    fn degrees_match_closed_forms() {
        for p in [3u32, 5] {
            let c = CarlitzData::new(PrimeField::new(p).unwrap());
            for i in 0..=(if p == 3 { 6 } else { 4 }) {
                assert_eq!(c.carlitz_l(i).degree().unwrap() as u64, deg_l(p as u64, i as u32));
                assert_eq!(c.carlitz_d(i).degree().unwrap() as u64, i as u64 * (p as u64).pow(i as u32));
            }
        }
        for q in [3u64, 5, 7] {
            for i in 0..=10u32 {
                let f = PrimeField::new(q as u32).unwrap();
                assert_eq!(l_frac(f, i).denominator_degree(), 0);
                let inv = inv_l_pow(f, i, 1);
                assert_eq!(inv.valuation(), Some(deg_l(q, i) as i64));
            }
        }
    }

    #[test]
    fn factored_l_matches_dense() {
        let f = PrimeField::new(5).unwrap();
        let c = CarlitzData::new(f);
        for i in 0..=3u32 {
            assert_eq!(l_frac(f, i).as_sparse().unwrap().to_dense(), c.carlitz_l(i as usize));
        }
    }

    #[test]
    fn polylog_examples() {
        let f = f3();
        let one = LaurentSeries::one(f, 100);
        assert_eq!(polylog_eval(1, &one, 9).unwrap().to_string(), "1 - u^3 - u^5 - u^7 + O(u^9)");
        assert_eq!(polylog_eval(2, &one, 6).unwrap().to_string(), "1 + O(u^6)");
        assert!(polylog_eval(3, &LaurentSeries::zero(f, 20), 10).unwrap().is_zero());
        let theta = LaurentSeries::monomial(f, 1, -2, 100);
        assert!(polylog_eval(1, &theta, 10).is_err());
    }

    #[test]
    fn zeta_examples() {
        let f = f3();
        assert_eq!(zeta_truncated(f, 1, 1, 6).to_string(), "1 - u^3 - u^5 + O(u^6)");
        assert_eq!(zeta_truncated(f, 4, 0, 10), LaurentSeries::one(f, 10));
        let z = zeta_truncated(f, 2, 2, 8);
        assert_eq!(z.sub(&LaurentSeries::one(f, 8)).valuation_bound(), 6);
    }

    #[test]
    fn blockwise_carlitz_identity_exact() {
        // Σ_{deg a = d} L_d / a = 1, computed with exact polynomial division.
        for p in [3u32, 5] {
            let f = PrimeField::new(p).unwrap();
            let c = CarlitzData::new(f);
            for d in 0..=4usize {
                let l = c.carlitz_l(d);
                let total = monic_polys(f, d).fold(PolyA::zero(f), |acc, a| &acc + &l.div_exact(&a).unwrap());
                assert!(total.is_one(), "q={p} d={d}");
            }
        }
    }

    #[test]
    fn zeta_one_is_carlitz_log_of_one() {
        for p in [3u32, 5] {
            let f = PrimeField::new(p).unwrap();
            let prec = 60;
            let log1 = polylog_eval(1, &LaurentSeries::one(f, 1000), prec).unwrap();
            let z = zeta_truncated(f, 1, 3, prec);
            // The block of degree 4 has valuation deg L_4.
            let guaranteed = (deg_l(p as u64, 4) as i64).min(prec);
            assert!(log1.agreement(&z) >= guaranteed);
        }
    }
}
