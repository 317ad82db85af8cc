//! One line per acceptance criterion. Exits nonzero if any criterion fails.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use drinfeld_lvalues::carlitz::{zeta_blocks, zeta_truncated};
use drinfeld_lvalues::drinfeld::{f_partition_sum, f_recursive, ft_gamma, gamma_recursive, DrinfeldRank2};
use drinfeld_lvalues::lvalue::{
    goss_factor_motive, primes_up_to, euler_vs_log_one, taelman_factor, taelman_graded, taelman_l_value, verify_theorem,
    ConstantTModule,
};
use drinfeld_lvalues::motive::{inverse_frob_residual, DualMotive};
use drinfeld_lvalues::tmodule::{
    deformation_matrix, functional_residual, log_coeffs, log_rows_closed, log_valuation_bound, minor2x2, regulator,
    TensorModule,
};
use drinfeld_lvalues::{PolyA, PrimeField};

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn field(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn random_poly(rng: &mut ChaCha8Rng, f: PrimeField, max_deg: usize) -> PolyA {
    PolyA::from_coeffs(f, (0..=max_deg).map(|_| rng.gen_range(0..f.p())).collect())
}

/// 60 seeded pairs `(a, b)` with `deg ≤ 2`, `b ≠ 0`, per prime.
fn random_pairs(p: u32) -> Vec<DrinfeldRank2> {
    let f = field(p);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + p as u64);
    let mut out = Vec::new();
    while out.len() < 60 {
        let a = random_poly(&mut rng, f, 2);
        let b = random_poly(&mut rng, f, 2);
        if !b.is_zero() {
            out.push(DrinfeldRank2::new(a, b).unwrap());
        }
    }
    out
}

fn constant_pairs(p: u32) -> Vec<DrinfeldRank2> {
    let f = field(p);
    f.elements().flat_map(|a| f.units().map(move |b| DrinfeldRank2::constant(f, a, b).unwrap())).collect()
}

fn criterion_1() -> Verdict {
    let mut bad = Vec::new();
    let mut checked = 0;
    for p in [3, 5, 7] {
        for phi in random_pairs(p) {
            let gammas = gamma_recursive(&phi, 10);
            let fs = f_recursive(&phi, 10);
            for n in 0..=10u32 {
                checked += 1;
                let parts = ft_gamma(&phi, n);
                if parts.gamma != gammas[n as usize] || parts.f != fs[n as usize] {
                    bad.push(format!("q={p} {phi:?} n={n}"));
                }
            }
        }
    }
    verdict(bad.is_empty(), format!("{checked} (q, a, b, n) cases, {} mismatches {:?}", bad.len(), bad.first()))
}

fn criterion_2() -> Verdict {
    let mut bad = Vec::new();
    let mut checked = 0;
    for p in [3, 5, 7] {
        for phi in random_pairs(p) {
            let fs = f_recursive(&phi, 12);
            for i in 0..=12u32 {
                checked += 1;
                if f_partition_sum(&phi, i) != fs[i as usize] {
                    bad.push(format!("q={p} {phi:?} i={i}"));
                }
            }
        }
    }
    verdict(bad.is_empty(), format!("{checked} F_i comparisons, {} mismatches {:?}", bad.len(), bad.first()))
}

fn sweep_modules() -> Vec<TensorModule> {
    let mut out = Vec::new();
    for (p, n) in [(3, 1), (5, 1), (5, 2), (7, 3)] {
        let f = field(p);
        let mut rng = ChaCha8Rng::seed_from_u64(0xc3 + p as u64 * 10 + n as u64);
        let mut phis = vec![DrinfeldRank2::constant(f, 1, p - 1).unwrap()];
        loop {
            let (a, b) = (random_poly(&mut rng, f, 2), random_poly(&mut rng, f, 2));
            if b.degree() == Some(2) {
                phis.push(DrinfeldRank2::new(a, b).unwrap());
                break;
            }
        }
        out.extend(phis.into_iter().map(|phi| TensorModule::new(phi, n).unwrap()));
    }
    out
}

fn criterion_3() -> Verdict {
    let mut bad = Vec::new();
    let mut checked = 0;
    for m in sweep_modules() {
        let logs = log_coeffs(&m, 6);
        let d = m.dim();
        for i in 1..=6u32 {
            checked += 1;
            let p = &logs[i as usize];
            let residual = functional_residual(&logs[i as usize - 1], p, i, &m).is_zero();
            let (r0, r1) = log_rows_closed(i, &m);
            let rows = p.row(d - 2) == r0 && p.row(d - 1) == r1;
            let deformed = &deformation_matrix(i, &m) == p;
            if !(residual && rows && deformed) {
                bad.push(format!("{m:?} i={i} residual={residual} rows={rows} deformation={deformed}"));
            }
        }
    }
    verdict(bad.is_empty(), format!("{checked} (module, i) cases, {} mismatches {:?}", bad.len(), bad.first()))
}

fn criterion_4() -> Verdict {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (p, n) in [(3u32, 1usize), (5, 1), (5, 2), (7, 3)] {
        for phi in constant_pairs(p) {
            let m = TensorModule::new(phi, n).unwrap();
            let logs = log_coeffs(&m, 6);
            for i in 1..=6u32 {
                let bound = log_valuation_bound(p as u64, n, i);
                for x in logs[i as usize].entries() {
                    checked += 1;
                    if let Some(v) = x.valuation() {
                        let v = v as i128;
                        if v < bound || (i >= 2 && v <= 0) {
                            bad.push(format!("{m:?} i={i} v={v} bound={bound}"));
                        }
                    }
                }
            }
        }
    }
    verdict(bad.is_empty(), format!("{checked} entries, {} violations {:?}", bad.len(), bad.first()))
}

fn criterion_5() -> Verdict {
    let mut bad = Vec::new();
    let mut checked = 0;
    for p in [3u32, 5] {
        let f = field(p);
        for n in (1..=2).filter(|n| 2 * n + 1 <= p as usize) {
            for phi in constant_pairs(p) {
                let b = phi.b().coeff(0);
                let plain = log_coeffs(&TensorModule::new(phi.clone(), n).unwrap(), 6);
                let twisted = log_coeffs(&TensorModule::twisted(phi.clone(), n).unwrap(), 6);
                for i in 0..=6usize {
                    checked += 1;
                    let sign = if i % 2 == 1 { p - 1 } else { 1 };
                    let scale = f.mul(sign, f.pow(f.inv(b).unwrap(), i as u64));
                    if twisted[i] != plain[i].map(|x| x.scale(scale)) {
                        bad.push(format!("{phi:?} n={n} i={i}"));
                    }
                }
            }
        }
    }
    verdict(bad.is_empty(), format!("{checked} (φ, n, i) cases, {} mismatches {:?}", bad.len(), bad.first()))
}

fn criterion_6() -> Verdict {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (p, n) in [(3u32, 1usize), (5, 2)] {
        for phi in constant_pairs(p) {
            for twisted in [false, true] {
                let m = if twisted { DualMotive::twisted(&phi, n) } else { DualMotive::new(&phi, n) }.unwrap();
                let r = m.w_basis_check();
                checked += 1;
                if !r.holds() {
                    bad.push(format!("{phi:?} n={n} twisted={twisted} same4={} same5={}", r.same4, r.same5));
                }
            }
        }
        let residual = inverse_frob_residual(field(p), n);
        checked += 1;
        if !residual.coeffs().iter().all(|c| c.is_zero()) {
            bad.push(format!("inverse-Frobenius congruence q={p} n={n}"));
        }
    }
    verdict(bad.is_empty(), format!("{checked} identities, {} failures {:?}", bad.len(), bad.first()))
}

fn criterion_7() -> Verdict {
    let mut bad = Vec::new();
    let mut checked = 0;
    let prec = 40;
    for p in [3u32, 5] {
        let f = field(p);
        for s in 1..=3usize {
            let module = ConstantTModule::carlitz_power(f, s).unwrap();
            let blocks = taelman_graded(&module, 5, prec).unwrap();
            let oracle = zeta_blocks(f, s as u32, 5, prec);
            for d in 0..=5 {
                checked += 1;
                if blocks[d] != oracle[d] {
                    bad.push(format!("q={p} s={s} degree {d}"));
                }
                let euler = taelman_l_value(&module, d, prec).unwrap().product;
                let exact_below = ((d + 1) * s) as i64;
                checked += 1;
                if euler.agreement(&zeta_truncated(f, s as u32, d, prec)) < exact_below.min(prec) {
                    bad.push(format!("q={p} s={s} D={d} ungraded"));
                }
            }
        }
    }
    let f = field(3);
    let carlitz = ConstantTModule::carlitz(f);
    for w in primes_up_to(f, 4) {
        checked += 1;
        if taelman_factor(&carlitz, &w, 8).unwrap().points != &w - &PolyA::one(f) {
            bad.push(format!("|C(A/({w}))| ≠ w - 1"));
        }
    }
    verdict(bad.is_empty(), format!("{checked} checks, {} failures {:?}", bad.len(), bad.first()))
}

fn criterion_8() -> Verdict {
    let mut worst = (usize::MAX, usize::MAX);
    let mut lines = Vec::new();
    for phi in constant_pairs(3) {
        let m = TensorModule::twisted(phi.clone(), 1).unwrap();
        let prec = 30;
        let reg = regulator(&m, prec).unwrap();
        let minor = minor2x2(&m, prec).unwrap();
        let euler = taelman_l_value(&ConstantTModule::from_tensor(&m).unwrap(), 9, prec).unwrap();
        let (x, y) = (reg.matched_coefficients(&euler.product), reg.matched_coefficients(&minor));
        worst = (worst.0.min(x), worst.1.min(y));
        lines.push(format!("({},{}):{x}/{y}", phi.a(), phi.b()));
    }
    verdict(worst.0 >= 12 && worst.1 >= 20, format!("reg~L / reg~minor per (a,b): {}", lines.join(" ")))
}

fn theorem_cases() -> Vec<(u32, usize, u32, u32, usize)> {
    let mut cases: Vec<_> = constant_pairs(3).iter().map(|phi| (3, 1, phi.a().coeff(0), phi.b().coeff(0), 9)).collect();
    cases.extend([(5, 2, 0, 4, 5), (5, 2, 1, 4, 5), (5, 2, 2, 1, 5)]);
    cases
}

fn criterion_9() -> Verdict {
    let mut ok = true;
    let mut lines = Vec::new();
    for (p, n, a, b, d) in theorem_cases() {
        let phi = DrinfeldRank2::constant(field(p), a, b).unwrap();
        let r = verify_theorem(&phi, n, d, 30).unwrap();
        ok &= r.verified && r.matched_coefficients >= 12;
        lines.push(format!("q{p}n{n}({a},{b}):{}{}", r.matched_coefficients, if r.verified { "" } else { "!" }));
    }
    verdict(ok, format!("matched per case: {}", lines.join(" ")))
}

fn criterion_10() -> Verdict {
    let mut ok = true;
    let mut lines = Vec::new();
    for (p, pairs) in [(3u32, [(1, 2), (0, 1), (2, 1)]), (5, [(1, 4), (0, 1), (2, 1)])] {
        for (a, b) in pairs {
            let phi = DrinfeldRank2::constant(field(p), a, b).unwrap();
            let r = euler_vs_log_one(&phi, 8, 40).unwrap();
            ok &= r.matched_coefficients >= 10;
            lines.push(format!("q{p}({a},{b}):{}", r.matched_coefficients));
        }
    }
    verdict(ok, format!("L(φ̃/A) ~ log_φ̃(1) at D=8: {}", lines.join(" ")))
}

fn criterion_11() -> Verdict {
    let mut bad = Vec::new();
    let mut checked = 0;
    let prec = 40;
    for phi in constant_pairs(3) {
        let m = ConstantTModule::from_tensor(&TensorModule::twisted(phi.clone(), 1).unwrap()).unwrap();
        let drinfeld = ConstantTModule::drinfeld(&phi).unwrap();
        for w in primes_up_to(field(3), 3) {
            checked += 1;
            let goss = goss_factor_motive(&phi, &w).unwrap();
            if goss.at_one_monic() != taelman_factor(&drinfeld, &w, 4).unwrap().points {
                bad.push(format!("calibration {phi:?} w={w}"));
            }
            if goss.inverse_at(2, prec).unwrap() != taelman_factor(&m, &w, prec).unwrap().factor {
                bad.push(format!("{phi:?} w={w}"));
            }
        }
    }
    verdict(bad.is_empty(), format!("{checked} primes × modules, {} failures {:?}", bad.len(), bad.first()))
}

fn criterion_12() -> Verdict {
    let exe = env!("CARGO_BIN_EXE_drinfeld-l");
    let dir = std::env::temp_dir().join(format!("drinfeld-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut ok = true;
    let mut compared = 0;
    for (p, n, a, b, d) in theorem_cases() {
        let mut outputs = Vec::new();
        for threads in [1, 8] {
            let path = dir.join(format!("q{p}n{n}a{a}b{b}t{threads}.json"));
            let run = Command::new(exe)
                .args(["verify", "--q", &p.to_string(), "--n", &n.to_string(), "--a", &a.to_string()])
                .args(["--b", &b.to_string(), "--max-prime-deg", &d.to_string(), "--prec", "30"])
                .args(["--threads", &threads.to_string(), "--json"])
                .arg(&path)
                .output()
                .unwrap();
            ok &= run.status.code() == Some(0);
            outputs.push((run.stdout, std::fs::read(&path).unwrap_or_default()));
        }
        compared += 1;
        ok &= !outputs[0].1.is_empty() && outputs[0] == outputs[1];
    }
    let _ = std::fs::remove_dir_all(&dir);
    verdict(ok, format!("{compared} verify runs, stdout and JSON compared at --threads 1 vs 8"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict, f64); 12] = [
        ("shadowed partitions = recursion (γ and F)", criterion_1, 2.0),
        ("F_i recursion = partition sum, i ≤ 12", criterion_2, 2.0),
        ("log coefficients: recursion = closed rows = deformation", criterion_3, 30.0),
        ("log coefficient valuation bound", criterion_4, 10.0),
        ("twist law P̃_i = (-1)^i b^-i P_i", criterion_5, 10.0),
        ("dual-motive W-basis witnesses and congruence", criterion_6, 10.0),
        ("Euler products vs zeta sums and Carlitz point counts", criterion_7, 30.0),
        ("class formula: regulator = Euler product = minor", criterion_8, 120.0),
        ("L(G̃_n/A) = closed right-hand side", criterion_9, 300.0),
        ("L(φ̃/A) = log_φ̃(1)", criterion_10, 60.0),
        ("per-prime Goss = Taelman factors", criterion_11, 30.0),
        ("verify output independent of --threads", criterion_12, 600.0),
    ];
    let mut failed = 0;
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let secs = start.elapsed().as_secs_f64();
        let timing = if secs > *budget { format!("{secs:.1}s, over the {budget}s budget") } else { format!("{secs:.1}s") };
        println!("criterion {:>2} {} {name} [{timing}]: {}", k + 1, if v.passed { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.passed);
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
