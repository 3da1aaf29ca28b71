//! `egz`: command-line front end for the zero-sum solver.
//!
//! Exit codes: 0 success, 1 certificate rejected by `verify`, 2 bad input,
//! 3 internal invariant violation.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::{Command, ExitCode};

use clap::{Args, Parser, Subcommand};

use egz::cli::{
    format_instance, generate_egz, parse_certificate, parse_instance, run_bench, write_csv,
    BenchMode, BenchRecord, CertificateJson, Distribution,
};
use egz::modmath::is_prime;
use egz::oracle::{brute_egz, brute_subset_sum, brute_sumset};
use egz::prime_egz::{solve_prime_egz_with, PrimeEgzWorkspace};
use egz::state::SolverState;
use egz::{
    solve_egz_instrumented, verify_certificate, Certificate, EgzInstance, Error, PrimeEgzInstance,
    PrimeTargetInstance, Result,
};

/// Audits are quadratic in the modulus, so they are capped.
const AUDIT_LIMIT: u64 = 2000;
/// Benchmark sizes at or above this run in their own process.
const ISOLATE_FROM: u64 = 1_000_000;

#[derive(Parser)]
#[command(
    name = "egz",
    version,
    about = "Constructive zero-sum subsets modulo n"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an instance file (or stdin) and print 1-based indices.
    Solve(SolveArgs),
    /// Check a certificate against an instance.
    Verify {
        instance: PathBuf,
        certificate: PathBuf,
    },
    /// Write a seeded random instance to stdout.
    Gen {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Distribution::Uniform)]
        dist: Distribution,
    },
    /// Time the solver and report owner-array counters as CSV.
    Bench(BenchArgs),
    /// Solve one target subset-sum instance modulo a prime.
    PrimeTarget {
        #[arg(long)]
        p: u64,
        /// The p - 1 differences, whitespace or comma separated.
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long)]
        tau: u64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        debug_audit: bool,
    },
    /// Solve an instance whose modulus is prime with the prime solver alone.
    PrimeEgz(SolveArgs),
    /// Exponential reference solvers for small inputs.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file; stdin when omitted or `-`.
    input: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    /// Check the certificate before printing it.
    #[arg(long)]
    verify: bool,
    /// Audit the solver state after every transition (n <= 2000).
    #[arg(long)]
    debug_audit: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<u64>,
    /// Number of seeds per size.
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    /// First seed; run k uses `seed + k`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Distribution::Uniform)]
    dist: Distribution,
    #[arg(long, value_enum, default_value_t = BenchMode::PrimeTarget)]
    mode: BenchMode,
    /// Output path; stdout when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Run every size in this process.
    #[arg(long, hide = true)]
    in_process: bool,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Exhaustive target subset sum.
    SubsetSum {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long)]
        tau: u64,
    },
    /// Exhaustive zero-sum search on an instance file.
    Egz { input: Option<PathBuf> },
    /// Sumset of progressions `{0, v, ..., ell v}` given as `v:ell`.
    Sumset {
        #[arg(long)]
        p: u64,
        #[arg(long = "ap", required = true)]
        progressions: Vec<String>,
    },
}

enum Failure {
    Error(Error),
    Rejected(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn input_err(msg: impl Into<String>) -> Failure {
    Failure::Error(Error::InvalidInput(msg.into()))
}

fn read_text(path: Option<&PathBuf>) -> std::result::Result<String, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| input_err(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| input_err(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn parse_residues(text: &str, p: u64) -> Result<Vec<u64>> {
    text.split(|c: char| c.is_ascii_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let v: i64 = t
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad integer {t:?}")))?;
            egz::modmath::mod_reduce(v, p)
        })
        .collect()
}

fn one_based(indices: &[usize]) -> String {
    let mut s = String::with_capacity(indices.len() * 8);
    for (k, i) in indices.iter().enumerate() {
        if k > 0 {
            s.push(' ');
        }
        s.push_str(&(i + 1).to_string());
    }
    s
}

fn emit_certificate(n: u64, indices: &[usize], json: bool) -> io::Result<()> {
    let mut out = io::stdout().lock();
    if json {
        let body = CertificateJson {
            n,
            indices: indices.iter().map(|i| i + 1).collect(),
            sum_mod_n: 0,
        };
        serde_json::to_writer(&mut out, &body)?;
        writeln!(out)
    } else {
        writeln!(out, "{}", one_based(indices))
    }
}

fn check_audit(flag: bool, n: u64) -> std::result::Result<(), Failure> {
    if flag && n > AUDIT_LIMIT {
        return Err(input_err(format!(
            "--debug-audit is limited to n <= {AUDIT_LIMIT}, got {n}"
        )));
    }
    Ok(())
}

fn confirm(instance: &EgzInstance, cert: &Certificate) -> std::result::Result<(), Failure> {
    let verdict = verify_certificate(instance, cert);
    if verdict.is_valid() {
        Ok(())
    } else {
        Err(Failure::Error(Error::Invariant(format!(
            "solver produced an invalid certificate: {verdict}"
        ))))
    }
}

fn cmd_solve(args: &SolveArgs) -> std::result::Result<(), Failure> {
    let instance = parse_instance(&read_text(args.input.as_ref())?)?;
    check_audit(args.debug_audit, instance.n())?;
    let (cert, _) = solve_egz_instrumented(&instance, args.debug_audit)?;
    if args.verify {
        confirm(&instance, &cert)?;
    }
    emit_certificate(instance.n(), &cert.indices, args.json).map_err(|e| input_err(e.to_string()))
}

fn cmd_prime_egz(args: &SolveArgs) -> std::result::Result<(), Failure> {
    let instance = parse_instance(&read_text(args.input.as_ref())?)?;
    let p = instance.n();
    if !is_prime(p) {
        return Err(input_err(format!(
            "prime-egz needs a prime modulus, got {p}"
        )));
    }
    check_audit(args.debug_audit, p)?;
    let prime_inst = PrimeEgzInstance::from_values(p, instance.values())?;
    let mut ws = PrimeEgzWorkspace::new();
    ws.set_audit(args.debug_audit);
    let cert = solve_prime_egz_with(&mut ws, &prime_inst)?;
    if args.verify {
        confirm(&instance, &cert)?;
    }
    emit_certificate(p, &cert.indices, args.json).map_err(|e| input_err(e.to_string()))
}

fn cmd_verify(instance: &PathBuf, certificate: &PathBuf) -> std::result::Result<(), Failure> {
    let inst = parse_instance(&read_text(Some(instance))?)?;
    let indices = parse_certificate(&read_text(Some(certificate))?)?;
    let cert = Certificate {
        indices,
        modulus: inst.n(),
    };
    match verify_certificate(&inst, &cert) {
        v if v.is_valid() => {
            println!("valid");
            Ok(())
        }
        v => Err(Failure::Rejected(v.to_string())),
    }
}

fn cmd_prime_target(
    p: u64,
    d: &str,
    tau: u64,
    json: bool,
    audit: bool,
) -> std::result::Result<(), Failure> {
    check_audit(audit, p)?;
    let inst = PrimeTargetInstance::new(p, parse_residues(d, p)?, tau)?;
    let mut state = SolverState::new(p)?;
    state.set_audit(audit);
    let j = state.solve(inst.d(), inst.tau())?;
    let sum = j.iter().fold(0u64, |acc, &i| (acc + inst.d()[i]) % p);
    if sum != inst.tau() {
        return Err(Failure::Error(Error::Invariant(format!(
            "selected differences sum to {sum}, not {tau}"
        ))));
    }
    if json {
        let body = serde_json::json!({ "p": p, "tau": tau, "indices": j.iter().map(|i| i + 1).collect::<Vec<_>>() });
        println!("{body}");
    } else {
        println!("{}", one_based(&j));
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> std::result::Result<(), Failure> {
    if args.seeds == 0 {
        return Err(input_err("--seeds must be positive"));
    }
    let seeds: Vec<u64> = (0..args.seeds).map(|k| args.seed.wrapping_add(k)).collect();
    let mut records = Vec::new();
    for &n in &args.sizes {
        for &seed in &seeds {
            if n >= ISOLATE_FROM && !args.in_process {
                records.push(bench_isolated(n, seed, args)?);
            } else {
                records.extend(run_bench(&[n], &[seed], args.dist, args.mode)?);
            }
        }
    }
    match &args.csv {
        Some(path) => {
            let file = fs::File::create(path)
                .map_err(|e| input_err(format!("{}: {e}", path.display())))?;
            write_csv(&records, io::BufWriter::new(file))?;
        }
        None => write_csv(&records, io::stdout().lock())?,
    }
    Ok(())
}

/// Runs one large benchmark in a fresh process so allocator state from
/// earlier runs does not leak into its timing.
fn bench_isolated(
    n: u64,
    seed: u64,
    args: &BenchArgs,
) -> std::result::Result<BenchRecord, Failure> {
    let exe = std::env::current_exe().map_err(|e| input_err(e.to_string()))?;
    let dist = clap::ValueEnum::to_possible_value(&args.dist)
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let mode = clap::ValueEnum::to_possible_value(&args.mode)
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let output = Command::new(exe)
        .args(["bench", "--in-process", "--seeds", "1"])
        .args(["--sizes", &n.to_string(), "--seed", &seed.to_string()])
        .args(["--dist", &dist, "--mode", &mode])
        .output()
        .map_err(|e| input_err(format!("could not start benchmark child: {e}")))?;
    if !output.status.success() {
        let msg = String::from_utf8_lossy(&output.stderr).trim().to_string();
        let err = if output.status.code() == Some(3) {
            Error::Invariant(msg)
        } else {
            Error::InvalidInput(msg)
        };
        return Err(Failure::Error(err));
    }
    #[derive(serde::Deserialize)]
    struct Row {
        n: u64,
        wall_time_ns: u64,
        owner_reads: u64,
        owner_writes: u64,
        owner_clears: u64,
        cells_scanned: u64,
        merges: u64,
        extensions: u64,
        recon_nodes: u64,
        touches_per_p: f64,
    }
    let mut reader = csv::Reader::from_reader(output.stdout.as_slice());
    let row: Row = reader
        .deserialize()
        .next()
        .ok_or_else(|| input_err("benchmark child printed no record"))?
        .map_err(|e| input_err(format!("benchmark child output: {e}")))?;
    Ok(BenchRecord {
        n: row.n,
        wall_time_ns: row.wall_time_ns,
        owner_reads: row.owner_reads,
        owner_writes: row.owner_writes,
        owner_clears: row.owner_clears,
        cells_scanned: row.cells_scanned,
        merges: row.merges,
        extensions: row.extensions,
        recon_nodes: row.recon_nodes,
        touches_per_p: row.touches_per_p,
    })
}

fn cmd_oracle(cmd: &OracleCmd) -> std::result::Result<(), Failure> {
    match cmd {
        OracleCmd::SubsetSum { p, d, tau } => {
            if *p < 2 {
                return Err(Failure::Error(Error::InvalidModulus));
            }
            let d = parse_residues(d, *p)?;
            match brute_subset_sum(*p, &d, *tau % *p) {
                Some(j) => println!("{}", one_based(&j)),
                None => println!("none"),
            }
        }
        OracleCmd::Egz { input } => {
            let inst = parse_instance(&read_text(input.as_ref())?)?;
            if inst.n() > 16 {
                return Err(input_err("the exhaustive oracle accepts n <= 16"));
            }
            match brute_egz(inst.n(), inst.values()) {
                Some(j) => println!("{}", one_based(&j)),
                None => println!("none"),
            }
        }
        OracleCmd::Sumset { p, progressions } => {
            if *p < 2 {
                return Err(Failure::Error(Error::InvalidModulus));
            }
            let mut aps = Vec::with_capacity(progressions.len());
            for arg in progressions {
                let (v, ell) = arg
                    .split_once(':')
                    .ok_or_else(|| input_err(format!("expected v:ell, got {arg:?}")))?;
                let v: u64 = v
                    .trim()
                    .parse()
                    .map_err(|_| input_err(format!("bad v in {arg:?}")))?;
                let ell: u64 = ell
                    .trim()
                    .parse()
                    .map_err(|_| input_err(format!("bad ell in {arg:?}")))?;
                aps.push((v % p, ell));
            }
            let set = brute_sumset(*p, &aps);
            let text: Vec<String> = set.iter().map(u64::to_string).collect();
            println!("{}", text.join(" "));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    match &cli.command {
        Cmd::Solve(args) => cmd_solve(args),
        Cmd::PrimeEgz(args) => cmd_prime_egz(args),
        Cmd::Verify {
            instance,
            certificate,
        } => cmd_verify(instance, certificate),
        Cmd::Gen { n, seed, dist } => {
            let inst = generate_egz(*n, *seed, *dist)?;
            io::stdout()
                .lock()
                .write_all(format_instance(&inst).as_bytes())
                .map_err(|e| input_err(e.to_string()))
        }
        Cmd::Bench(args) => cmd_bench(args),
        Cmd::PrimeTarget {
            p,
            d,
            tau,
            json,
            debug_audit,
        } => cmd_prime_target(*p, d, *tau, *json, *debug_audit),
        Cmd::Oracle(cmd) => cmd_oracle(cmd),
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected(reason)) => {
            println!("invalid: {reason}");
            ExitCode::from(1)
        }
        Err(Failure::Error(e)) => {
            eprintln!("egz: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
