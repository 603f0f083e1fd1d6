//! `bcov`: command-line driver for the certification pipeline.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bcov_core::euler_holo::holo_report;
use bcov_core::euler_top::{total_chi_y0, StratumOptions};
use bcov_core::gw::n1_invariants;
use bcov_core::lattice_fan::{build_fan_pi, build_fan_sigma, certify, Fan, FanJson};
use bcov_core::series::{i0_series, ipq_table, mirror_map, yukawa_from_pf, PFOperator};
use bcov_core::{verify_bcov, RunConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "bcov",
    version,
    about = "Exact certification of the genus-one B-model ledger"
)]
struct Cli {
    /// Emit machine-readable JSON instead of a text summary.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the parallel stages.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON configuration file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Cross-check sampled localization charts with exact rational functions.
    #[arg(long, global = true)]
    exact_holo: bool,
    /// Skip the saturation check on restricted Newton polytopes.
    #[arg(long, global = true)]
    no_saturation_check: bool,
    /// Increase log verbosity (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or validate a fan.
    Fan {
        #[command(subcommand)]
        action: FanAction,
    },
    /// Euler characteristics of the central fiber.
    Chi {
        #[arg(value_enum)]
        kind: ChiKind,
        /// Laurent guard length for the holomorphic computation.
        #[arg(long)]
        guard: Option<usize>,
        /// Include every stratum contribution in the output.
        #[arg(long)]
        strata: bool,
    },
    /// Period series tables near the large complex structure point.
    Series(OrderArg),
    /// Genus-one series coefficients in the mirror coordinate.
    Gw(OrderArg),
    /// Run the whole pipeline and assemble the ledger.
    Verify {
        #[arg(value_enum)]
        scope: Scope,
        #[command(flatten)]
        order: OrderArg,
        #[arg(long)]
        guard: Option<usize>,
        /// Write the report JSON here (`-` for standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FanAction {
    /// Build a fan and write it as JSON.
    Build {
        #[arg(long, value_enum, default_value = "pi")]
        which: WhichFan,
        /// Output path, `-` for standard output.
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Validate a fan JSON file (the built fan Π when omitted).
    Check { file: Option<PathBuf> },
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichFan {
    Pi,
    Sigma,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChiKind {
    Top,
    Holo,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scope {
    All,
}

#[derive(Args)]
struct OrderArg {
    /// Series truncation order.
    #[arg(long)]
    order: Option<usize>,
}

/// Failure classes mapped to exit codes.
enum Failure {
    /// A check or computation stage failed.
    Check(String),
    /// I/O, configuration, or other internal error.
    Internal(String),
}

impl From<bcov_core::Error> for Failure {
    fn from(e: bcov_core::Error) -> Self {
        match e {
            bcov_core::Error::Config(_) => Failure::Internal(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Internal(format!("{}: {e}", path.display()))
}

fn load_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
            RunConfig::from_json(&text).map_err(|e| Failure::Internal(e.to_string()))?
        }
        None => RunConfig::default(),
    };
    cfg.exact_holo |= cli.exact_holo;
    if cli.no_saturation_check {
        cfg.check_saturation = false;
    }
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    match &cli.command {
        Command::Series(o) | Command::Gw(o) => {
            if let Some(d) = o.order {
                cfg.order = d;
            }
        }
        Command::Verify { order, guard, .. } => {
            if let Some(d) = order.order {
                cfg.order = d;
            }
            if let Some(g) = guard {
                cfg.guard = *g;
            }
        }
        Command::Chi { guard: Some(g), .. } => cfg.guard = *g,
        _ => {}
    }
    cfg.validate()
        .map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(cfg)
}

fn write_output(path: &Path, text: &str) -> Result<(), Failure> {
    if path.as_os_str() == "-" {
        let mut out = std::io::stdout().lock();
        writeln!(out, "{text}").map_err(|e| io_err(path, e))
    } else {
        fs::write(path, format!("{text}\n")).map_err(|e| io_err(path, e))
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn emit(json: bool, value: Value, text: String) {
    if json {
        println!("{}", pretty(&value));
    } else {
        println!("{text}");
    }
}

fn strings(xs: &[bcov_core::Q]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn cmd_fan(action: &FanAction, json: bool) -> Result<(), Failure> {
    match action {
        FanAction::Build { which, out } => {
            let fan = match which {
                WhichFan::Pi => build_fan_pi()?,
                WhichFan::Sigma => build_fan_sigma()?,
            };
            write_output(out, &pretty(&fan.to_json()))?;
            info!(
                "wrote {} rays, {} maximal cones",
                fan.rays.len(),
                fan.maximal_cones.len()
            );
            Ok(())
        }
        FanAction::Check { file } => {
            let fan = match file {
                Some(p) => {
                    let text = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
                    let j: FanJson = serde_json::from_str(&text).map_err(|e| {
                        Failure::Check(format!("{}: malformed fan: {e}", p.display()))
                    })?;
                    Fan::from_json(&j)?
                }
                None => build_fan_pi()?,
            };
            let cert = certify(&fan)?;
            let summary = format!("{} rays, {} maximal cones", cert.rays, cert.maximal_cones);
            emit(json, json!(cert), format!("{summary}\n{cert:#?}"));
            if cert.is_valid() {
                Ok(())
            } else {
                Err(Failure::Check(format!("fan validation failed: {summary}")))
            }
        }
    }
}

fn cmd_chi(kind: ChiKind, strata: bool, cfg: &RunConfig, json: bool) -> Result<(), Failure> {
    let pi = build_fan_pi()?;
    match kind {
        ChiKind::Top => {
            let opts = StratumOptions {
                check_saturation: cfg.check_saturation,
            };
            let r = total_chi_y0(&pi, &opts)?;
            let mut v = json!({ "total": r.total, "by_dimension": r.by_dimension, "timing_ms": r.timing_ms });
            if strata {
                v["strata"] = json!(r.strata);
            }
            emit(
                json,
                v,
                format!("chi(Y0) = {} (by dimension {:?})", r.total, r.by_dimension),
            );
        }
        ChiKind::Holo => {
            let r = holo_report(&pi, cfg.guard)?;
            let text = format!(
                "chi(O) = {}, chi(O(-L1)) = {}, chi(O(-L2)) = {}, chi(O(-L1-L2)) = {}, chi(O_W0) = {} (guard {})",
                r.chi_o, r.chi_ml1, r.chi_ml2, r.chi_ml1ml2, r.chi_w0, r.guard
            );
            emit(json, json!(r), text);
        }
    }
    Ok(())
}

fn cmd_series(cfg: &RunConfig, json: bool) -> Result<(), Failure> {
    let d = cfg.order;
    let i0 = i0_series(d)?;
    let table = ipq_table(d)?;
    let mm = mirror_map(d)?;
    let yuk = yukawa_from_pf(&PFOperator::three_three(), d)?;
    let i0q: Vec<Value> = i0
        .iter()
        .map(|s| {
            let parts: Vec<Vec<String>> = (0..=s.degree().unwrap_or(0))
                .map(|k| s.part(k).to_strings())
                .collect();
            json!(parts)
        })
        .collect();
    let ipp: Vec<Vec<String>> = (0..5).map(|p| table[p][p].part(0).to_strings()).collect();
    let q = mm.q_series();
    let v = json!({
        "order": d,
        "I0q_by_L_power": i0q,
        "Ipp": ipp,
        "Q": q.to_strings(),
        "yukawa": yuk.to_strings(),
    });
    let text = format!(
        "order {d}\nI00 = {:?}\nQ = {:?}\nYukawa = {:?}",
        strings(&i0[0].part(0).coeffs()[..d.min(5)]),
        strings(&q.coeffs()[..d.min(5)]),
        strings(&yuk.coeffs()[..d.min(5)])
    );
    emit(json, v, text);
    Ok(())
}

fn cmd_gw(cfg: &RunConfig, json: bool) -> Result<(), Failure> {
    let s = n1_invariants(cfg.order)?;
    let mut text = format!("N1_0 = {}\n", s.n1_0);
    for (d, v) in &s.n1 {
        text.push_str(&format!("N1_{d} = {v}\n"));
    }
    text.push_str(&format!("constant = {}", s.constant));
    emit(json, json!(s), text);
    Ok(())
}

fn cmd_verify(cfg: &RunConfig, out: Option<&Path>, json: bool) -> Result<(), Failure> {
    let report = verify_bcov(cfg)?;
    let body = pretty(&report);
    if let Some(p) = out {
        write_output(p, &body)?;
    }
    let text = report
        .checks
        .iter()
        .map(|c| format!("[{}] {}", if c.passed { "PASS" } else { "FAIL" }, c.name))
        .chain(std::iter::once(format!("verification: {}", report.status)))
        .collect::<Vec<_>>()
        .join("\n");
    if out.is_none_or(|p| p.as_os_str() != "-") {
        emit(json, json!(report), text);
    }
    match report.first_failure {
        None => Ok(()),
        Some(f) => Err(Failure::Check(f)),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = load_config(cli)?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Internal(e.to_string()))?;
    }
    match &cli.command {
        Command::Fan { action } => cmd_fan(action, cli.json),
        Command::Chi { kind, strata, .. } => cmd_chi(*kind, *strata, &cfg, cli.json),
        Command::Series(_) => cmd_series(&cfg, cli.json),
        Command::Gw(_) => cmd_gw(&cfg, cli.json),
        Command::Verify {
            scope: Scope::All,
            out,
            ..
        } => cmd_verify(&cfg, out.as_deref(), cli.json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
