//! Residue fields `A/wA` in the polynomial basis, matrices over `F_q`, and
//! Fitting generators `|M|_A` as characteristic polynomials.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::{is_irreducible, PolyA};

/// A square matrix over `F_q`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMatrix {
    field: PrimeField,
    size: usize,
    data: Vec<u32>,
}

impl FqMatrix {
    pub fn zero(field: PrimeField, size: usize) -> Self {
        Self { field, size, data: vec![0; size * size] }
    }

    pub fn identity(field: PrimeField, size: usize) -> Self {
        let mut m = Self::zero(field, size);
        for i in 0..size {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Self {
        let size = rows.len();
        let mut m = Self::zero(field, size);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), size, "matrix rows must be square");
            for (c, &x) in row.iter().enumerate() {
                m.set(r, c, x % field.p());
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.size + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: u32) {
        self.data[r * self.size + c] = x;
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.data.chunks(self.size.max(1)).map(<[u32]>::to_vec).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&x, &y)| f.add(x, y)).collect();
        Self { field: f, size: self.size, data }
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        Self { field: f, size: self.size, data: self.data.iter().map(|&x| f.mul(x, c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = self.field;
        let n = self.size;
        let p = f.p() as u64;
        let mut out = Self::zero(f, n);
        for r in 0..n {
            for k in 0..n {
                let x = self.get(r, k) as u64;
                if x == 0 {
                    continue;
                }
                for c in 0..n {
                    let slot = &mut out.data[r * n + c];
                    *slot = ((*slot as u64 + x * other.get(k, c) as u64) % p) as u32;
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.field, self.size);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `A ⊗ B` with `A` indexing the outer blocks.
    pub fn kron(&self, other: &Self) -> Self {
        let f = self.field;
        let (n, m) = (self.size, other.size);
        let mut out = Self::zero(f, n * m);
        for r in 0..n {
            for c in 0..n {
                let x = self.get(r, c);
                if x == 0 {
                    continue;
                }
                for i in 0..m {
                    for j in 0..m {
                        out.set(r * m + i, c * m + j, f.mul(x, other.get(i, j)));
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let f = self.field;
        let (n, m) = (self.size, other.size);
        let mut out = Self::zero(f, n + m);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, self.get(r, c));
            }
        }
        for r in 0..m {
            for c in 0..m {
                out.set(n + r, n + c, other.get(r, c));
            }
        }
        out
    }

    /// `det(X·Id - M)` with `X` written as `θ`, via reduction to upper
    /// Hessenberg form and the standard three-term recurrence.
    pub fn charpoly(&self) -> PolyA {
        let f = self.field;
        let n = self.size;
        let mut h = self.clone();
        for col in 0..n.saturating_sub(2) {
            let Some(piv) = (col + 1..n).find(|&r| h.get(r, col) != 0) else {
                continue;
            };
            if piv != col + 1 {
                h.swap_rows(piv, col + 1);
                h.swap_cols(piv, col + 1);
            }
            let inv = f.inv(h.get(col + 1, col)).expect("pivot is nonzero");
            for r in col + 2..n {
                let factor = f.mul(h.get(r, col), inv);
                if factor == 0 {
                    continue;
                }
                // Row r -= factor * row (col+1); column (col+1) += factor * column r.
                for c in 0..n {
                    let v = f.sub(h.get(r, c), f.mul(factor, h.get(col + 1, c)));
                    h.set(r, c, v);
                }
                for rr in 0..n {
                    let v = f.add(h.get(rr, col + 1), f.mul(factor, h.get(rr, r)));
                    h.set(rr, col + 1, v);
                }
            }
        }
        // p_k = (X - h_kk) p_{k-1} - Σ_{i<k} h_ik (∏_{j=i+1}^{k} h_{j,j-1}) p_{i-1}
        let x = PolyA::theta(f);
        let mut ps: Vec<PolyA> = vec![PolyA::one(f)];
        for k in 0..n {
            let mut next = &(&x - &PolyA::constant(f, h.get(k, k))) * &ps[k];
            let mut prod = 1u32;
            for i in (0..k).rev() {
                prod = f.mul(prod, h.get(i + 1, i));
                if prod == 0 {
                    break;
                }
                let coef = f.mul(h.get(i, k), prod);
                if coef != 0 {
                    next = &next - &ps[i].scale(coef);
                }
            }
            ps.push(next);
        }
        ps.pop().expect("nonempty recurrence")
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.size {
            self.data.swap(a * self.size + c, b * self.size + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.size {
            self.data.swap(r * self.size + a, r * self.size + b);
        }
    }
}

/// `|M|_A` for the `A`-module on which `θ` acts by `t`.
pub fn fitting_generator(t: &FqMatrix) -> PolyA {
    t.charpoly()
}

/// `A/wA` for a monic irreducible `w`, with basis `1, θ̄, …, θ̄^{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    w: PolyA,
    companion: FqMatrix,
    frobenius: FqMatrix,
}

impl ResidueField {
    pub fn new(w: &PolyA) -> Result<Self> {
        if !w.is_monic() || !is_irreducible(w) {
            return Err(Error::Precondition(format!("{w} is not a monic irreducible")));
        }
        let f = w.field();
        let d = w.degree().unwrap_or(0);
        let column_matrix = |cols: Vec<PolyA>| {
            let mut m = FqMatrix::zero(f, d);
            for (c, v) in cols.iter().enumerate() {
                for r in 0..d {
                    m.set(r, c, v.coeff(r));
                }
            }
            m
        };
        let theta = PolyA::theta(f);
        let companion = column_matrix(
            (0..d).map(|j| PolyA::monomial(f, 1, j).mulmod(&theta, w).expect("w is nonzero")).collect(),
        );
        let frobenius = column_matrix(
            (0..d).map(|j| PolyA::monomial(f, 1, j).powmod(f.p() as u64, w).expect("w is nonzero")).collect(),
        );
        Ok(Self { w: w.clone(), companion, frobenius })
    }

    pub fn modulus(&self) -> &PolyA {
        &self.w
    }

    pub fn degree(&self) -> usize {
        self.companion.size()
    }

    pub fn field(&self) -> PrimeField {
        self.w.field()
    }

    /// Multiplication by `θ̄`.
    pub fn companion(&self) -> &FqMatrix {
        &self.companion
    }

    /// `x ↦ x^q`.
    pub fn frobenius(&self) -> &FqMatrix {
        &self.frobenius
    }

    pub fn reduce(&self, a: &PolyA) -> PolyA {
        a.rem(&self.w).expect("w is nonzero")
    }

    pub fn mul(&self, x: &PolyA, y: &PolyA) -> PolyA {
        x.mulmod(y, &self.w).expect("w is nonzero")
    }

    pub fn inv(&self, x: &PolyA) -> Result<PolyA> {
        let x = self.reduce(x);
        if x.is_zero() {
            return Err(Error::ZeroDivision);
        }
        let order = (self.field().p() as u64).pow(self.degree() as u32);
        Ok(x.powmod(order - 2, &self.w).expect("w is nonzero"))
    }

    /// `x^{q^k}`.
    pub fn frob(&self, x: &PolyA, k: u32) -> PolyA {
        (0..k).fold(self.reduce(x), |acc, _| acc.powmod(self.field().p() as u64, &self.w).expect("w is nonzero"))
    }
}
