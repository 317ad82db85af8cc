//! The dual t-motive `H_n = L[t]h₁ ⊕ L[t]h₂` of `G_n`, the coordinate map
//! `δ₀∘ι`, and the first inverse Frobenius `φ₁`.
//!
//! Elements are handled in the basis of powers of `s = t - θ`, where `δ₀∘ι`
//! is plain coefficient extraction.

use crate::drinfeld::DrinfeldRank2;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::frac::Frac;
use crate::matrix::{d_matrix, Matrix};
use crate::poly::PolyA;
use crate::taylor::{TPoly, ThetaTaylor};

/// `f₁h₁ + f₂h₂` with `f₁, f₂ ∈ K[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotiveElement {
    pub f1: TPoly,
    pub f2: TPoly,
}

impl MotiveElement {
    pub fn new(f1: TPoly, f2: TPoly) -> Self {
        Self { f1, f2 }
    }
}

/// `H_n` or its twisted companion `H̃_n`, for constant `a, b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualMotive {
    field: PrimeField,
    n: usize,
    a: u32,
    b: u32,
    twisted: bool,
}

/// An element of `H_n` written as `Σ_j (c1_j h₁ + c2_j h₂) s^j`.
#[derive(Clone, Debug)]
struct SForm {
    c1: Vec<Frac>,
    c2: Vec<Frac>,
}

impl DualMotive {
    pub fn new(phi: &DrinfeldRank2, n: usize) -> Result<Self> {
        let (a, b) = phi.constants()?;
        if n == 0 {
            return Err(Error::Precondition("the level n must be positive".into()));
        }
        Ok(Self { field: phi.field(), n, a, b, twisted: false })
    }

    pub fn twisted(phi: &DrinfeldRank2, n: usize) -> Result<Self> {
        let mut m = Self::new(phi, n)?;
        m.twisted = true;
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_twisted(&self) -> bool {
        self.twisted
    }

    fn constant(&self, c: u32) -> Frac {
        Frac::constant(self.field, c)
    }

    /// `σ·h₁` and `σ·h₂` as coordinate pairs in `K[t]`.
    pub fn sigma_action(&self) -> [MotiveElement; 2] {
        let f = self.field;
        let s = TPoly::t_minus(Frac::theta(f));
        let sn = s.pow(self.n as u32);
        let sn1 = s.pow(self.n as u32 + 1);
        let zero = TPoly::new(f, Vec::new());
        let c = |x: u32| TPoly::constant(self.constant(x));
        let b_inv = f.inv(self.b).expect("b is a unit");
        if self.twisted {
            [
                MotiveElement::new(zero, c(f.neg(1)).mul(&sn)),
                MotiveElement::new(c(f.neg(self.b)).mul(&sn1), c(self.a).mul(&sn)),
            ]
        } else {
            [
                MotiveElement::new(zero, c(b_inv).mul(&sn)),
                MotiveElement::new(sn1, c(f.neg(f.mul(self.a, b_inv))).mul(&sn)),
            ]
        }
    }

    /// `(X₁, X₂)` with `s^{n+1}h₁ = σX₁` and `s^n h₂ = σX₂`; both have constant
    /// coordinates `(h₁-coefficient, h₂-coefficient)`.
    fn sigma_preimages(&self) -> [(u32, u32); 2] {
        let f = self.field;
        if self.twisted {
            let m = f.neg(f.inv(self.b).expect("b is a unit"));
            [(f.mul(m, self.a), m), (f.neg(1), 0)]
        } else {
            [(self.a, 1), (self.b, 0)]
        }
    }

    fn s_form(&self, e: &MotiveElement) -> SForm {
        let expand = |p: &TPoly| p.taylor_at_theta(p.degree().unwrap_or(0)).coeffs().to_vec();
        SForm { c1: expand(&e.f1), c2: expand(&e.f2) }
    }

    /// `δ₀∘ι`: the column `[∂_t^n f₁, ∂_t^{n-1} f₂, ∂_t^{n-1} f₁, …, f₂, f₁]` at `t = θ`.
    pub fn delta0_iota(&self, e: &MotiveElement) -> Vec<Frac> {
        let order = self.n;
        let c1 = e.f1.taylor_at_theta(order);
        let c2 = e.f2.taylor_at_theta(order);
        column_from_taylor(self.field, self.n, c1.coeffs(), c2.coeffs())
    }

    /// The representative of `H_n/(σ-1)H_n` in `K^{2n+1}`, reached by
    /// replacing `c s^{m}h₁` (`m > n`) by `c^q (t-θ^q)^{m-n-1} X₁` and
    /// `c s^m h₂` (`m ≥ n`) by `c^q (t-θ^q)^{m-n} X₂`.
    pub fn eta(&self, e: &MotiveElement) -> Vec<Frac> {
        let f = self.field;
        let n = self.n;
        let mut form = self.s_form(e);
        let [x1, x2] = self.sigma_preimages();
        loop {
            let top1 = form.c1.iter().rposition(|c| !c.is_zero()).filter(|&m| m > n);
            let top2 = form.c2.iter().rposition(|c| !c.is_zero()).filter(|&m| m >= n);
            let (c, shift, (p1, p2)) = if let Some(m) = top1 {
                (std::mem::replace(&mut form.c1[m], Frac::zero(f)), m - n - 1, x1)
            } else if let Some(m) = top2 {
                (std::mem::replace(&mut form.c2[m], Frac::zero(f)), m - n, x2)
            } else {
                break;
            };
            let lifted = ThetaTaylor::t_minus_frobenius(f, 1, shift).pow(shift as u32).scale(&c.frobenius(1));
            for (j, coef) in lifted.coeffs().iter().enumerate() {
                add_at(&mut form.c1, j, &coef.scale(p1));
                add_at(&mut form.c2, j, &coef.scale(p2));
            }
        }
        let pad = |v: &[Frac], len: usize| {
            let mut v = v.to_vec();
            v.resize(len, Frac::zero(f));
            v
        };
        column_from_taylor(f, n, &pad(&form.c1, n + 1), &pad(&form.c2, n + 1))
    }

    /// `φ_n(θ)` acting on a coordinate column: `θx + Nx + E x^{(1)}`, with
    /// `E` scaled by `-b^{-1}` for the twisted motive.
    pub fn phi_theta_apply(&self, x: &[Frac]) -> Vec<Frac> {
        let f = self.field;
        let d = 2 * self.n + 1;
        let theta = Frac::theta(f);
        let scale = if self.twisted { f.neg(f.inv(self.b).expect("b is a unit")) } else { 1 };
        let mut out: Vec<Frac> = (0..d)
            .map(|r| {
                let base = theta.mul(&x[r]);
                if r + 2 < d {
                    base.add(&x[r + 2])
                } else {
                    base
                }
            })
            .collect();
        let (x1, x2) = (x[0].frobenius(1), x[1].frobenius(1));
        out[d - 2] = out[d - 2].add(&x1.scale(scale));
        out[d - 1] = out[d - 1].add(&x1.scale(f.mul(scale, self.a)).add(&x2.scale(f.mul(scale, self.b))));
        out
    }

    /// `t·e` in `H_n`.
    pub fn t_times(&self, e: &MotiveElement) -> MotiveElement {
        let t = TPoly::t(self.field);
        MotiveElement::new(e.f1.mul(&t), e.f2.mul(&t))
    }

    /// `(φ₁(h₁), φ₁(h₂))` via `p₁` and the `σ`-preimages.
    pub fn phi1_vectors(&self) -> (Vec<Frac>, Vec<Frac>) {
        let f = self.field;
        let p1 = inverse_frob_poly(f, self.n);
        let [(a1, a2), (b1, b2)] = self.sigma_preimages();
        let c = |x: u32| TPoly::constant(self.constant(x));
        let lin = TPoly::t_minus(Frac::from_sparse(crate::sparse::SparsePoly::monomial(f, 1, f.p() as u64)));
        let x1 = MotiveElement::new(p1.mul(&c(a1)), p1.mul(&c(a2)));
        let x2 = MotiveElement::new(p1.mul(&lin).mul(&c(b1)), p1.mul(&lin).mul(&c(b2)));
        (self.delta0_iota(&x1), self.delta0_iota(&x2))
    }

    /// The witnesses of `W = ∂(K_∞)e_{2n} ⊕ ∂(K_∞)e_{2n+1}`.
    pub fn w_basis_check(&self) -> WBasisReport {
        let f = self.field;
        let n = self.n;
        let d = 2 * n + 1;
        let (v1, v2) = self.phi1_vectors();
        // The twisted vectors are -b^{-1} times the untwisted ones, so the
        // witnesses pick up the inverse factor -b.
        let tw = if self.twisted { f.neg(self.b) } else { 1 };
        let b_inv = f.inv(self.b).expect("b is a unit");
        let base = PolyA::from_coeffs(f, vec![0, 1]) - PolyA::monomial(f, 1, f.p() as usize);
        let c12 = base.pow(n as u64).scale(f.mul(b_inv, tw));
        let c21 = base.pow(n as u64 + 1).scale(tw);
        let c22 = base.pow(n as u64).scale(f.mul(f.neg(f.mul(self.a, b_inv)), tw));
        let as_frac = |m: Matrix<PolyA>| m.map(Frac::from_poly);
        let first = as_frac(d_matrix(&c12, n)).mul_vec(&v2);
        let second: Vec<Frac> = as_frac(d_matrix(&c21, n))
            .mul_vec(&v1)
            .iter()
            .zip(as_frac(d_matrix(&c22, n)).mul_vec(&v2))
            .map(|(x, y)| x.add(&y))
            .collect();
        let unit = |k: usize| (0..d).map(|r| Frac::constant(f, (r == k) as u32)).collect::<Vec<_>>();
        WBasisReport {
            same4: first == unit(d - 1),
            same5: second == unit(d - 2),
            witnesses: [c12, c21, c22],
            images: [first, second],
        }
    }
}

#[derive(Clone, Debug)]
pub struct WBasisReport {
    /// `d_n[c₁₂] φ₁(h₂) = e_{2n+1}`.
    pub same4: bool,
    /// `d_n[c₂₁] φ₁(h₁) + d_n[c₂₂] φ₁(h₂) = e_{2n}`.
    pub same5: bool,
    /// `c₁₂, c₂₁, c₂₂`.
    pub witnesses: [PolyA; 3],
    pub images: [Vec<Frac>; 2],
}

impl WBasisReport {
    pub fn holds(&self) -> bool {
        self.same4 && self.same5
    }
}

fn add_at(v: &mut Vec<Frac>, j: usize, x: &Frac) {
    if x.is_zero() {
        return;
    }
    if v.len() <= j {
        v.resize(j + 1, Frac::zero(x.field()));
    }
    v[j] = v[j].add(x);
}

fn column_from_taylor(field: PrimeField, n: usize, c1: &[Frac], c2: &[Frac]) -> Vec<Frac> {
    let zero = Frac::zero(field);
    let get = |v: &[Frac], j: usize| v.get(j).cloned().unwrap_or_else(|| zero.clone());
    let mut out = Vec::with_capacity(2 * n + 1);
    for j in (0..=n).rev() {
        out.push(get(c1, j));
        if j > 0 {
            out.push(get(c2, j - 1));
        }
    }
    out
}

/// `p₁(t)`: the degree-`≤ n` truncation at `t = θ` of `(t - θ^q)^{-(n+1)}`.
pub fn inverse_frob_poly(field: PrimeField, n: usize) -> TPoly {
    let taylor = ThetaTaylor::inv_t_minus_frobenius(field, 1, n).pow(n as u32 + 1);
    let s = TPoly::t_minus(Frac::theta(field));
    taylor
        .coeffs()
        .iter()
        .enumerate()
        .fold(TPoly::new(field, Vec::new()), |acc, (j, c)| acc.add(&s.pow(j as u32).mul(&TPoly::constant(c.clone()))))
}

/// `p₁(t)(t - θ^q)^{n+1} - 1`, as Taylor coefficients at `θ` up to order `n`;
/// all zero by construction.
pub fn inverse_frob_residual(field: PrimeField, n: usize) -> ThetaTaylor {
    let p1 = inverse_frob_poly(field, n).taylor_at_theta(n);
    let lin = ThetaTaylor::t_minus_frobenius(field, 1, n).pow(n as u32 + 1);
    p1.mul(&lin).sub(&ThetaTaylor::one(field, n))
}
