//! The exact-identity self-test suites behind `selftest`.

use serde::Serialize;

use crate::drinfeld::{f_recursive, ft_gamma, gamma_recursive, DrinfeldRank2};
use crate::field::PrimeField;
use crate::motive::DualMotive;
use crate::poly::PolyA;
use crate::tmodule::{deformation_matrix, functional_residual, log_coeffs, log_rows_closed, TensorModule};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn sample_modules() -> Vec<TensorModule> {
    let cases = [(3, "T", "T^2+2", 1), (3, "1", "2", 1), (5, "2*T+1", "3", 2), (5, "0", "1", 1), (7, "T", "1", 3)];
    cases
        .into_iter()
        .map(|(p, a, b, n)| {
            let f = PrimeField::new(p).expect("prime");
            let phi = DrinfeldRank2::new(PolyA::parse(f, a).expect("literal"), PolyA::parse(f, b).expect("literal"))
                .expect("b ≠ 0");
            TensorModule::new(phi, n).expect("n ≥ 1")
        })
        .collect()
}

const LOG_DEPTH: u32 = 4;

fn log_suite(name: &'static str, check: impl Fn(&TensorModule, u32, &[crate::matrix::Matrix<crate::frac::Frac>]) -> bool) -> SuiteOutcome {
    let mut out = SuiteOutcome { name, checked: 0, failures: Vec::new() };
    for m in sample_modules() {
        let logs = log_coeffs(&m, LOG_DEPTH);
        for i in 1..=LOG_DEPTH {
            out.checked += 1;
            if !check(&m, i, &logs) {
                out.failures.push(format!("{m:?}, i = {i}"));
            }
        }
    }
    out
}

pub fn functional_equation_suite() -> SuiteOutcome {
    log_suite("log functional equation", |m, i, logs| {
        functional_residual(&logs[i as usize - 1], &logs[i as usize], i, m).is_zero()
    })
}

pub fn closed_rows_suite() -> SuiteOutcome {
    log_suite("closed last two rows", |m, i, logs| {
        let (r0, r1) = log_rows_closed(i, m);
        let d = m.dim();
        logs[i as usize].row(d - 2) == r0 && logs[i as usize].row(d - 1) == r1
    })
}

pub fn deformation_suite() -> SuiteOutcome {
    log_suite("deformation matrix", |m, i, logs| deformation_matrix(i, m) == logs[i as usize])
}

pub fn partition_suite() -> SuiteOutcome {
    let mut out = SuiteOutcome { name: "partition sums vs recursions", checked: 0, failures: Vec::new() };
    for m in sample_modules() {
        let phi = m.phi();
        let depth = 8;
        let gammas = gamma_recursive(phi, depth);
        let fs = f_recursive(phi, depth);
        for k in 0..=depth {
            out.checked += 1;
            let parts = ft_gamma(phi, k);
            if parts.gamma != gammas[k as usize] || parts.f != fs[k as usize] {
                out.failures.push(format!("{phi:?}, k = {k}"));
            }
        }
    }
    out
}

pub fn motive_suite() -> SuiteOutcome {
    let mut out = SuiteOutcome { name: "dual motive W-basis", checked: 0, failures: Vec::new() };
    for (p, n) in [(3u32, 1usize), (5, 2)] {
        let f = PrimeField::new(p).expect("prime");
        for a in f.elements() {
            for b in f.units() {
                let phi = DrinfeldRank2::constant(f, a, b).expect("b ≠ 0");
                for twisted in [false, true] {
                    let motive = if twisted { DualMotive::twisted(&phi, n) } else { DualMotive::new(&phi, n) };
                    out.checked += 1;
                    if !motive.is_ok_and(|m| m.w_basis_check().holds()) {
                        out.failures.push(format!("q = {p}, n = {n}, a = {a}, b = {b}, twisted = {twisted}"));
                    }
                }
            }
        }
    }
    out
}

pub fn selftest() -> Vec<SuiteOutcome> {
    vec![functional_equation_suite(), partition_suite(), closed_rows_suite(), deformation_suite(), motive_suite()]
}
