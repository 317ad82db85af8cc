//! `drinfeld-l`: L-values of rank-2 Drinfeld modules from the command line.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage or precondition error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use drinfeld_lvalues::carlitz::zeta_truncated;
use drinfeld_lvalues::drinfeld::{ft_gamma, gamma_recursive, shadowed_partitions, component, DrinfeldRank2};
use drinfeld_lvalues::lvalue::{
    check_theorem_range, goss_l_value, rhs_theorem, taelman_graded, taelman_l_value, verify_theorem, ConstantTModule,
};
use drinfeld_lvalues::motive::DualMotive;
use drinfeld_lvalues::report::selftest;
use drinfeld_lvalues::tmodule::{log_coeffs, minor2x2, regulator, regulator_plain, TensorModule};
use drinfeld_lvalues::{Error, LaurentSeries, PolyA, PrimeField};

#[derive(Parser, Debug)]
#[command(name = "drinfeld-l", version, about = "Special L-values of rank-2 Drinfeld modules over F_q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Prime field size.
    #[arg(long, default_value_t = 3)]
    q: u32,
    /// Level n of G_n (the exponent s for `zeta`).
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// φ_θ = θ + aτ + bτ², as polynomials in T.
    #[arg(long, default_value = "0")]
    a: String,
    #[arg(long, default_value = "2")]
    b: String,
    /// Absolute precision in u = 1/θ.
    #[arg(long, default_value_t = 24)]
    prec: i64,
    #[arg(long = "max-prime-deg", default_value_t = 6)]
    max_prime_deg: usize,
    /// Number of series terms; chosen from `prec` when absent.
    #[arg(long)]
    terms: Option<u32>,
    /// Coefficient index for `logcoeff`.
    #[arg(long, default_value_t = 1)]
    i: u32,
    /// Worker threads for Euler products; output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Also write the report as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Logarithm coefficients γ_0..γ_n of φ, exactly.
    Gamma(Common),
    /// Shadowed partitions of {0..n-1} and their components for φ.
    Partitions(Common),
    /// The logarithm coefficient P_i of G_n.
    Logcoeff {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        twisted: bool,
    },
    /// Regulator of G̃_n alongside the 2×2 minor.
    Regulator(Common),
    /// Taelman L-value of G̃_n as a truncated Euler product.
    Taelman(Common),
    /// Goss L(M_φ, n+1) by Euler product against the closed right-hand side.
    GossRhs(Common),
    /// Truncated zeta sum at s = n against the Euler product of C^{⊗n}.
    Zeta(Common),
    /// Full check of L(G̃_n/A) against the closed form.
    Verify {
        #[command(flatten)]
        common: Common,
        /// `main` for the L-value identity, `motive` for the dual-motive basis identities.
        #[arg(long, default_value = "main")]
        checks: String,
    },
    /// Exact-identity suites.
    Selftest(Common),
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Math(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// What a subcommand produced: text for stdout, optional JSON, and whether
/// every check in it passed.
struct Outcome {
    text: String,
    json: Option<serde_json::Value>,
    ok: bool,
}

impl Common {
    fn field(&self) -> Result<PrimeField, CliError> {
        PrimeField::new(self.q).map_err(|_| CliError::Usage(format!("--q {} is not a prime", self.q)))
    }

    fn phi(&self) -> Result<DrinfeldRank2, CliError> {
        let f = self.field()?;
        let a = PolyA::parse(f, &self.a)?;
        let b = PolyA::parse(f, &self.b)?;
        if b.is_zero() {
            return Err(CliError::Usage("--b must be nonzero".into()));
        }
        Ok(DrinfeldRank2::new(a, b)?)
    }

    fn constant_phi(&self) -> Result<DrinfeldRank2, CliError> {
        let phi = self.phi()?;
        phi.constants().map_err(|_| CliError::Usage("--a and --b must be constants in F_q here".into()))?;
        Ok(phi)
    }

    fn level(&self) -> Result<usize, CliError> {
        if self.n == 0 {
            return Err(CliError::Usage("--n must be positive".into()));
        }
        Ok(self.n)
    }

    fn prec(&self) -> Result<i64, CliError> {
        if self.prec < 1 {
            return Err(CliError::Usage("--prec must be positive".into()));
        }
        Ok(self.prec)
    }
}

fn series_line(label: &str, s: &LaurentSeries) -> String {
    format!("{label:<12}{s}\n")
}

fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("reports serialize")
}

fn run_gamma(c: &Common) -> Result<Outcome, CliError> {
    let phi = c.phi()?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for (i, g) in gamma_recursive(&phi, c.n as u32).iter().enumerate() {
        text.push_str(&format!("gamma_{i} = {g}\n"));
        rows.push(g.to_string());
    }
    Ok(Outcome { text, json: Some(serde_json::json!({ "gamma": rows })), ok: true })
}

fn run_partitions(c: &Common) -> Result<Outcome, CliError> {
    let phi = c.phi()?;
    let parts = shadowed_partitions(c.n as u32);
    let mut text = String::new();
    for u in &parts {
        text.push_str(&format!("{u}  {}\n", component(u, &phi)));
    }
    let sums = ft_gamma(&phi, c.n as u32);
    text.push_str(&format!("count {}\nF = {}\nT = {}\ngamma = {}\n", parts.len(), sums.f, sums.t, sums.gamma));
    let json = serde_json::json!({
        "partitions": parts.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "f": sums.f.to_string(),
        "t": sums.t.to_string(),
        "gamma": sums.gamma.to_string(),
    });
    Ok(Outcome { text, json: Some(json), ok: true })
}

fn run_logcoeff(c: &Common, twisted: bool) -> Result<Outcome, CliError> {
    let phi = c.phi()?;
    let n = c.level()?;
    let module = if twisted { TensorModule::twisted(phi, n)? } else { TensorModule::new(phi, n)? };
    let p = log_coeffs(&module, c.i).pop().expect("at least P_0");
    let mut text = format!("P_{} of {module:?}\n", c.i);
    let mut rows = Vec::new();
    for r in 0..p.rows() {
        let row: Vec<String> = p.row(r).iter().map(ToString::to_string).collect();
        text.push_str(&format!("[{}]\n", row.join(", ")));
        rows.push(row);
    }
    Ok(Outcome { text, json: Some(serde_json::json!({ "i": c.i, "rows": rows })), ok: true })
}

fn run_regulator(c: &Common) -> Result<Outcome, CliError> {
    let phi = c.constant_phi()?;
    let module = TensorModule::twisted(phi, c.level()?)?;
    let prec = c.prec()?;
    let reg = regulator(&module, prec)?;
    let minor = minor2x2(&module, prec)?;
    let plain = regulator_plain(&module, prec)?;
    let matched = reg.matched_coefficients(&minor);
    let text = [
        series_line("regulator", &reg),
        series_line("minor2x2", &minor),
        series_line("plain det", &plain),
        format!("matched     {matched}\n"),
    ]
    .concat();
    let json = serde_json::json!({ "regulator": reg, "minor2x2": minor, "plain_det": plain, "matched_coefficients": matched });
    Ok(Outcome { text, json: Some(json), ok: true })
}

fn run_taelman(c: &Common) -> Result<Outcome, CliError> {
    let phi = c.constant_phi()?;
    let module = TensorModule::twisted(phi, c.level()?)?;
    let report = taelman_l_value(&ConstantTModule::from_tensor(&module)?, c.max_prime_deg, c.prec()?)?;
    let text = [
        series_line("L(G/A)", &report.product),
        series_line("D-1", &report.previous),
        format!("primes      {}\nheuristic   {}\nstable      {}\n", report.factors.len(), report.heuristic_precision, report.stabilization),
    ]
    .concat();
    Ok(Outcome { text, json: Some(to_json(&report)), ok: true })
}

fn run_goss_rhs(c: &Common) -> Result<Outcome, CliError> {
    let phi = c.constant_phi()?;
    let n = c.level()?;
    let prec = c.prec()?;
    let goss = goss_l_value(&phi, n as u32 + 1, c.max_prime_deg, prec)?;
    let rhs = rhs_theorem(&phi, n, c.terms, prec)?;
    let matched = goss.matched_coefficients(&rhs);
    let text = [series_line("L(M,n+1)", &goss), series_line("rhs", &rhs), format!("matched     {matched}\n")].concat();
    let json = serde_json::json!({ "goss": goss, "rhs": rhs, "matched_coefficients": matched });
    Ok(Outcome { text, json: Some(json), ok: true })
}

fn run_zeta(c: &Common) -> Result<Outcome, CliError> {
    let f = c.field()?;
    let s = c.level()?;
    let prec = c.prec()?;
    let sum = zeta_truncated(f, s as u32, c.max_prime_deg, prec);
    let module = ConstantTModule::carlitz_power(f, s)?;
    let euler = taelman_l_value(&module, c.max_prime_deg, prec)?;
    let blocks = taelman_graded(&module, c.max_prime_deg, prec)?;
    let graded = blocks.iter().fold(LaurentSeries::zero(f, prec), |acc, x| acc.add(x));
    let graded_ok = graded == sum;
    let text = [
        series_line("zeta sum", &sum),
        series_line("euler", &euler.product),
        format!("matched     {}\ngraded      {}\n", sum.matched_coefficients(&euler.product), if graded_ok { "equal" } else { "DIFFERENT" }),
    ]
    .concat();
    let json = serde_json::json!({ "zeta": sum, "euler": euler.product, "graded_equal": graded_ok });
    Ok(Outcome { text, json: Some(json), ok: graded_ok })
}

fn run_verify(c: &Common, checks: &str) -> Result<Outcome, CliError> {
    let phi = c.constant_phi()?;
    let n = c.level()?;
    match checks {
        "main" => {
            check_theorem_range(&phi, n)?;
            let report = verify_theorem(&phi, n, c.max_prime_deg, c.prec()?)?;
            let text = [
                series_line("lhs", &report.lhs),
                series_line("rhs", &report.rhs),
                series_line("regulator", &report.regulator),
                series_line("minor2x2", &report.minor2x2),
                format!(
                    "matched     {}\nheuristic   {}\nstable      {}\nverified    {}\n",
                    report.matched_coefficients, report.heuristic_precision, report.stabilization_precision, report.verified
                ),
            ]
            .concat();
            Ok(Outcome { text, json: Some(to_json(&report)), ok: report.verified })
        }
        "motive" => {
            let mut text = String::new();
            let mut all = true;
            let mut rows = Vec::new();
            for twisted in [false, true] {
                let m = if twisted { DualMotive::twisted(&phi, n)? } else { DualMotive::new(&phi, n)? };
                let r = m.w_basis_check();
                all &= r.holds();
                text.push_str(&format!("twisted={twisted} same4={} same5={}\n", r.same4, r.same5));
                rows.push(serde_json::json!({ "twisted": twisted, "same4": r.same4, "same5": r.same5 }));
            }
            Ok(Outcome { text, json: Some(serde_json::json!({ "motive": rows })), ok: all })
        }
        other => Err(CliError::Usage(format!("unknown --checks value {other:?}; use main or motive"))),
    }
}

fn run_selftest() -> Outcome {
    let suites = selftest();
    let mut text = String::new();
    for s in &suites {
        let status = if s.passed() { "pass" } else { "FAIL" };
        text.push_str(&format!("{status}  {:<32}{} checks\n", s.name, s.checked));
        for failure in &s.failures {
            text.push_str(&format!("      {failure}\n"));
        }
    }
    let ok = suites.iter().all(|s| s.passed());
    Outcome { text, json: Some(to_json(&suites)), ok }
}

fn dispatch(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Gamma(c) => run_gamma(c),
        Command::Partitions(c) => run_partitions(c),
        Command::Logcoeff { common, twisted } => run_logcoeff(common, *twisted),
        Command::Regulator(c) => run_regulator(c),
        Command::Taelman(c) => run_taelman(c),
        Command::GossRhs(c) => run_goss_rhs(c),
        Command::Zeta(c) => run_zeta(c),
        Command::Verify { common, checks } => run_verify(common, checks),
        Command::Selftest(_) => Ok(run_selftest()),
    }
}

fn common(command: &Command) -> &Common {
    match command {
        Command::Gamma(c)
        | Command::Partitions(c)
        | Command::Regulator(c)
        | Command::Taelman(c)
        | Command::GossRhs(c)
        | Command::Zeta(c)
        | Command::Selftest(c) => c,
        Command::Logcoeff { common, .. } | Command::Verify { common, .. } => common,
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let c = common(&cli.command);
    let threads = match c.threads {
        Some(0) => return Err(CliError::Usage("--threads must be positive".into())),
        Some(t) => t,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| dispatch(&cli.command))?;
    if let (Some(path), Some(json)) = (&c.json, &outcome.json) {
        let body = serde_json::to_string_pretty(json).expect("json values serialize") + "\n";
        std::fs::write(path, body).map_err(|source| CliError::Io { path: path.clone(), source })?;
    }
    Ok(outcome)
}

fn exit_code(err: &CliError) -> u8 {
    match err {
        CliError::Math(Error::Inconsistent(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.text.as_bytes());
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
