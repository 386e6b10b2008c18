//! `sl2dvr`: command-line driver for the SL₂ character-degree engine.

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::Value;
use sl2dvr::oracle::OracleConfig;
use sl2dvr::tdvr::RingDesc;
use sl2dvr_cli::commands::{self, EprimeMethod, ZetaSource};
use sl2dvr_cli::suites::{run_suite, summarize, Suite, SuiteConfig};

#[derive(Parser, Debug)]
#[command(name = "sl2dvr", version, about = "Character degrees of SL2 over truncated 2-adic rings")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Print JSON with sorted keys.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Print comma-separated rows where the output is tabular.
    #[arg(long, global = true)]
    csv: bool,
    /// Seed for the oracle's randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest group whose character table may be computed.
    #[arg(long, global = true, default_value_t = 1 << 15)]
    max_group_order: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Show the parameters of a ring.
    Ring {
        /// Ring spec kind:q:r[:e], e.g. 2adic:2:4, laurent:2:4, eis:2:9:2.
        #[arg(long, value_parser = parse_ring)]
        spec: RingDesc,
    },
    /// List the cyclic orbits in normal form.
    Orbits {
        #[arg(long, value_parser = parse_ring)]
        ring: RingDesc,
    },
    /// Compute the extension sets E′ and E.
    Eprime {
        #[arg(long, value_parser = parse_ring)]
        ring: RingDesc,
        /// Restrict to one orbit id.
        #[arg(long)]
        orbit: Option<usize>,
        #[arg(long, value_enum, default_value_t = EprimeMethod::Both)]
        method: EprimeMethod,
        /// Use the alternate additive character.
        #[arg(long)]
        alt_psi: bool,
    },
    /// Predicted primitive spectra per orbit.
    Spectrum {
        #[arg(long, value_parser = parse_ring)]
        ring: RingDesc,
        #[arg(long)]
        orbit: Option<usize>,
        /// Also compute the spectra from character tables.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        alt_psi: bool,
    },
    /// Class sizes and character degrees of SL2.
    Chartable {
        #[arg(long, value_parser = parse_ring)]
        ring: RingDesc,
    },
    /// The representation zeta polynomial of SL2.
    Zeta {
        #[arg(long, value_parser = parse_ring)]
        ring: RingDesc,
        #[arg(long, value_enum, default_value_t = ZetaSource::Oracle)]
        method: ZetaSource,
    },
    /// Compare the zeta polynomials of two rings; exits 3 when they differ.
    Compare {
        #[arg(long, value_parser = parse_ring)]
        left: RingDesc,
        #[arg(long, value_parser = parse_ring)]
        right: RingDesc,
    },
    /// Run acceptance suites; exits 1 when an assertion fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

fn parse_ring(s: &str) -> Result<RingDesc, String> {
    s.parse().map_err(|e: sl2dvr::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = &cli.global;
    if let Some(n) = g.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    let oc = sl2dvr::zeta::oracle_config(g.max_group_order, g.seed);
    match cli.command {
        Command::Ring { spec } => emit(g, &commands::ring(spec)?, None),
        Command::Orbits { ring } => {
            let v = commands::orbits(ring)?;
            let csv = table_csv(&v["orbits"], &["orbit_id", "type", "a", "alpha", "beta", "k", "s", "gamma", "orbit_size"]);
            emit(g, &v, Some(csv))
        }
        Command::Eprime { ring, orbit, method, alt_psi } => {
            let v = commands::eprime(ring, orbit, method, alt_psi)?;
            let csv = eprime_csv(&v);
            emit(g, &v, Some(csv))
        }
        Command::Spectrum { ring, orbit, oracle, alt_psi } => emit(g, &commands::spectrum(ring, orbit, oracle, alt_psi, &oc)?, None),
        Command::Chartable { ring } => {
            let v = commands::chartable(ring, &oc)?;
            let csv = list_csv("degree", &v["degrees"]);
            emit(g, &v, Some(csv))
        }
        Command::Zeta { ring, method } => {
            let (_, v) = commands::zeta(ring, method, &oc)?;
            let csv = table_csv(&v["zeta"], &["dim", "count"]);
            emit(g, &v, Some(csv))
        }
        Command::Compare { left, right } => compare(g, left, right, &oc),
        Command::Verify { suite } => verify(g, suite),
    }
}

fn emit(g: &Global, v: &Value, csv: Option<String>) -> Result<ExitCode> {
    if g.json {
        println!("{}", serde_json::to_string_pretty(v)?);
    } else if let (true, Some(c)) = (g.csv, csv) {
        print!("{c}");
    } else {
        print!("{}", text(v, ""));
    }
    Ok(ExitCode::SUCCESS)
}

fn compare(g: &Global, left: RingDesc, right: RingDesc, oc: &OracleConfig) -> Result<ExitCode> {
    let (rep, v) = commands::compare_rings(left, right, oc)?;
    if g.json {
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else if g.csv {
        println!("exponent,left,right");
        let coeff = |side: &str, d: u64| v[side]["zeta"].as_array().and_then(|a| a.iter().find(|e| e["dim"] == d)).map_or(0, |e| e["count"].as_u64().unwrap_or(0));
        for &d in &rep.differing {
            println!("{d},{},{}", coeff("left", d), coeff("right", d));
        }
    } else {
        println!("{left} vs {right}: {}", if rep.equal { "equal" } else { "differ" });
        println!("differing exponents: {:?}", rep.differing);
        for t in &rep.targeted {
            println!("X^{}: {} vs {}", t.exponent, t.left, t.right);
        }
    }
    Ok(if rep.equal { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

fn verify(g: &Global, suite: Suite) -> Result<ExitCode> {
    let cfg = SuiteConfig { max_group_order: g.max_group_order, seed: g.seed };
    let assertions = run_suite(suite, &cfg)?;
    let summary = summarize(&assertions);
    let ok = summary.iter().all(|c| c.passed);
    if g.json {
        let v = serde_json::json!({ "suite": suite, "passed": ok, "criteria": summary, "assertions": assertions });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else if g.csv {
        println!("criterion,name,passed,detail");
        for a in &assertions {
            println!("{},{},{},\"{}\"", a.criterion, a.name, a.passed, a.detail.replace('"', "'"));
        }
    } else {
        for a in &assertions {
            println!("  [{}] {:>2} {}: {}", if a.passed { "ok" } else { "FAIL" }, a.criterion, a.name, a.detail);
        }
        for c in &summary {
            println!("{} criterion {}: {} ({} assertions, {} failing)", if c.passed { "PASS" } else { "FAIL" }, c.criterion, c.title, c.assertions, c.failures);
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn table_csv(rows: &Value, cols: &[&str]) -> String {
    let mut out = cols.join(",") + "\n";
    for r in rows.as_array().into_iter().flatten() {
        out += &cols.iter().map(|c| cell(&r[*c])).collect::<Vec<_>>().join(",");
        out.push('\n');
    }
    out
}

fn list_csv(header: &str, items: &Value) -> String {
    let mut out = format!("{header}\n");
    for x in items.as_array().into_iter().flatten() {
        out += &format!("{}\n", cell(x));
    }
    out
}

fn eprime_csv(v: &Value) -> String {
    let mut out = String::from("orbit_id,type,e_prime_size,e_size,closed_equal\n");
    for r in v["orbits"].as_array().into_iter().flatten() {
        let sets = if r["brute"].is_null() { &r["closed"] } else { &r["brute"] };
        out += &format!("{},{},{},{},{}\n", cell(&r["orbit"]["orbit_id"]), cell(&r["orbit"]["type"]), cell(&sets["e_prime_size"]), cell(&sets["e_size"]), cell(&r["equal"]));
    }
    out
}

/// Indented `key: value` rendering of a JSON document.
fn text(v: &Value, indent: &str) -> String {
    let mut out = String::new();
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if x.is_object() || (x.is_array() && x.as_array().is_some_and(|a| a.iter().any(|e| e.is_object()))) {
                    out += &format!("{indent}{k}:\n{}", text(x, &format!("{indent}  ")));
                } else {
                    out += &format!("{indent}{k}: {}\n", cell(x));
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                out += &format!("{indent}- [{i}]\n{}", text(x, &format!("{indent}  ")));
            }
        }
        other => out += &format!("{indent}{}\n", cell(other)),
    }
    out
}
