use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rbt::certificate::Certificate;
use rbt::engine::{solve_with, Outcome, SolveOptions};
use rbt::oracle::{brute_force_two_factor, run_exhaustive, verify_two_factor, ExhaustiveOptions};
use rbt::tournament::{is_f_isomorphic, make_f4k, perturb, random_regular, FMode, RegularBipartiteTournament};
use rbt::Error;

const OK: u8 = 0;
const VIOLATION: u8 = 1;
const EXCLUDED: u8 = 2;
const INVALID: u8 = 3;
const FALSIFIED: u8 = 4;

#[derive(Parser)]
#[command(name = "rbt", version, about = "Complementary cycles in regular bipartite tournaments")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Write an instance: a seeded random one, or F_4k.
    Gen(GenArgs),
    /// Certificate JSON for cycles of lengths 2p and 4k-2p.
    Solve(SolveArgs),
    /// Check a certificate against an instance.
    Verify(VerifyArgs),
    /// Decide existence of a (2p, 4k-2p)-factor by exhaustive search.
    Oracle(OracleArgs),
    /// Solve and verify every instance for a given k.
    Enumerate(EnumerateArgs),
    /// Whether the instance is F_4k.
    Fcheck(InputArg),
}

#[derive(Args)]
struct InputArg {
    /// Instance file; standard input when absent.
    #[arg(long, short)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, conflicts_with = "f4k", required_unless_present = "f4k")]
    k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Build F_4k for this k.
    #[arg(long)]
    f4k: Option<usize>,
    /// Random degree-preserving swaps applied to F_4k.
    #[arg(long, requires = "f4k", default_value_t = 0)]
    swaps: usize,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    p: usize,
    #[command(flatten)]
    input: InputArg,
    /// Re-verify each intermediate factor and print the step log to standard error.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file.
    #[arg(long)]
    instance: PathBuf,
    /// Certificate file; standard input when absent.
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    p: usize,
    #[command(flatten)]
    input: InputArg,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    k: usize,
    /// Values of p, e.g. `--p 2 --p 3` or `--p 2-3`.
    #[arg(long, num_args = 1.., required = true)]
    p: Vec<String>,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// One instance per isomorphism class.
    #[arg(long)]
    iso: bool,
    /// Progress file for resuming an interrupted run.
    #[arg(long)]
    cursor: Option<PathBuf>,
}

struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Falsified(f) => Fail(FALSIFIED, f.to_string()),
            other => Fail(INVALID, other.to_string()),
        }
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<String, Fail> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Fail(INVALID, format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Fail(INVALID, format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn read_instance(path: Option<&PathBuf>) -> Result<RegularBipartiteTournament, Fail> {
    let text = read_input(path)?;
    RegularBipartiteTournament::parse(&text).map_err(|e| Fail(INVALID, format!("invalid instance: {e}")))
}

fn parse_ps(items: &[String]) -> Result<Vec<usize>, Fail> {
    let bad = |s: &str| Fail(INVALID, format!("bad p value {s:?}"));
    let mut ps = Vec::new();
    for item in items.iter().flat_map(|s| s.split(',')) {
        match item.split_once('-') {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (a.parse().map_err(|_| bad(item))?, b.parse().map_err(|_| bad(item))?);
                ps.extend(a..=b);
            }
            None => ps.push(item.parse().map_err(|_| bad(item))?),
        }
    }
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

fn run(verb: Verb, out: &mut dyn Write) -> Result<u8, Fail> {
    let io = |e: std::io::Error| Fail(INVALID, format!("write: {e}"));
    match verb {
        Verb::Gen(a) => {
            let d = match (a.k, a.f4k) {
                (_, Some(k)) => {
                    if k == 0 || k > 16 {
                        return Err(Fail(INVALID, format!("k={k} outside 1..=16")));
                    }
                    let f = make_f4k(k)?;
                    if a.swaps > 0 {
                        perturb(&f, a.swaps, a.seed)
                    } else {
                        f
                    }
                }
                (Some(k), None) if (1..=16).contains(&k) => random_regular(k, a.seed),
                (k, _) => return Err(Fail(INVALID, format!("k={k:?} outside 1..=16"))),
            };
            out.write_all(d.to_text().as_bytes()).map_err(io)?;
            Ok(OK)
        }
        Verb::Solve(a) => {
            let d = read_instance(a.input.input.as_ref())?;
            let report = solve_with(&d, a.p, &SolveOptions { trace: a.trace })?;
            match report.outcome {
                Outcome::Excluded => {
                    eprintln!("excluded: the instance is F_{}", 4 * d.k());
                    Ok(EXCLUDED)
                }
                Outcome::Solved(cert) => {
                    if a.trace {
                        for line in &cert.provenance {
                            eprintln!("{line}");
                        }
                        let s = &report.stats;
                        eprintln!("steps={} fallbacks={} routes={}", s.steps, s.fallbacks, s.routes.join(","));
                    }
                    writeln!(out, "{}", cert.to_json()).map_err(io)?;
                    Ok(OK)
                }
            }
        }
        Verb::Verify(a) => {
            let d = read_instance(Some(&a.instance))?;
            let text = read_input(a.cert.as_ref())?;
            let cert = Certificate::from_json(text.trim()).map_err(|e| Fail(INVALID, format!("invalid certificate: {e}")))?;
            match verify_two_factor(&d, &cert) {
                Ok(()) => {
                    writeln!(out, "ok").map_err(io)?;
                    Ok(OK)
                }
                Err(v) => {
                    writeln!(out, "violation: {v}").map_err(io)?;
                    Ok(VIOLATION)
                }
            }
        }
        Verb::Oracle(a) => {
            let d = read_instance(a.input.input.as_ref())?;
            match brute_force_two_factor(&d, a.p)? {
                Some((c, rest)) => {
                    writeln!(out, "exists {c:?} {rest:?}").map_err(io)?;
                    Ok(OK)
                }
                None => {
                    writeln!(out, "none").map_err(io)?;
                    Ok(EXCLUDED)
                }
            }
        }
        Verb::Enumerate(a) => {
            let mut opts = ExhaustiveOptions::new(parse_ps(&a.p)?);
            opts.workers = a.workers;
            opts.up_to_iso = a.iso;
            opts.cursor = a.cursor;
            let mut write_err = None;
            let report = run_exhaustive(a.k, &opts, &mut |line| {
                if let Err(e) = writeln!(out, "{line}") {
                    write_err.get_or_insert(e);
                }
            })?;
            if let Some(e) = write_err {
                return Err(io(e));
            }
            writeln!(out, "{}", report.summary()).map_err(io)?;
            for f in &report.falsifications {
                eprintln!("{f}");
            }
            Ok(if report.falsified > 0 { FALSIFIED } else { OK })
        }
        Verb::Fcheck(a) => {
            let d = read_instance(a.input.as_ref())?;
            let g = d.digraph();
            let verdict = if is_f_isomorphic(g, g.vertices(), FMode::F) { "F" } else { "not-F" };
            writeln!(out, "{verdict}").map_err(io)?;
            Ok(OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { INVALID } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli.verb, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("{msg}");
            ExitCode::from(code)
        }
    }
}
