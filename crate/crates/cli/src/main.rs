//! `pgroup`: structure reports, certificates and oracles for finite p-groups
//! given by polycyclic presentations.
//!
//! Exit codes: 0 ok, 1 verification failed, 2 bad input, 3 enumeration cap,
//! 4 engine fault, 10 the group reduces to earlier results.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pgroup::automorphism::{brute_force_aut_oracle, route_hypotheses, OracleSummary};
use pgroup::certificate::{construct, verify_certificate, Certificate, Verification};
use pgroup::pc::DEFAULT_ENUMERATION_CAP;
use pgroup::{Error, PcGroup, StructureReport};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "pgroup", version, about = "Non-inner automorphisms of order p for finite p-groups")]
struct Cli {
    /// Largest group (in elements) any exhaustive scan may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for `batch` (0 = one per CPU).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the structure report and hypothesis route.
    Check { file: PathBuf },
    /// Build a certificate for a non-inner automorphism of order p.
    Construct { file: PathBuf },
    /// Re-check a certificate against a presentation.
    Verify { file: PathBuf, cert: PathBuf },
    /// Enumerate automorphisms fixing the Frattini subgroup elementwise.
    Oracle { file: PathBuf },
    /// Check and construct for every `*.pc` file in a directory.
    Batch { dir: PathBuf },
}

const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_FAULT: u8 = 4;
const EXIT_REDUCTION: u8 = 10;

/// A non-zero outcome with the message to print on stderr.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::Fault { .. } => EXIT_FAULT,
            _ => EXIT_INPUT,
        };
        let message = match &e {
            Error::Fault { kind, state } => format!("fault: {kind}\nstate: {state}"),
            other => format!("error: {other}"),
        };
        Failure { code, message }
    }
}

fn load(path: &Path, cap: u64) -> Result<PcGroup, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("error: {}: {e}", path.display())))?;
    PcGroup::from_text(&text)
        .map(|g| g.with_cap(cap))
        .map_err(|e| Failure::input(format!("error: {}: {e}", path.display())))
}

/// `"reduction(class ≤ 3)"` becomes `"reduction: class ≤ 3 (prior work)"`.
fn reduction_message(label: &str) -> String {
    let inner = label.strip_prefix("reduction(").and_then(|s| s.strip_suffix(')')).unwrap_or(label);
    format!("reduction: {inner} (prior work)")
}

fn emit(cli: &Cli, body: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, body).map_err(|e| Failure::input(format!("error: {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn report_text(r: &StructureReport) -> String {
    let types = |t: &[u64]| t.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    let mut s = String::new();
    s += &format!("prime: {}\n", r.prime);
    s += &format!("order: {}\n", r.order);
    s += &format!("class: {}\n", r.class);
    s += &format!("d: {}\n", r.d);
    s += &format!("normally constrained: {}\n", r.is_nc);
    s += &format!("thin: {}\n", r.is_thin);
    s += &format!("strongly Frattinian: {}\n", r.strongly_frattinian);
    s += &format!("d(Z2/Z) = d(G)d(Z): {}\n", r.abdollahi_condition);
    s += &format!("Z2 abelian: {}\n", r.z2_abelian);
    s += &format!("Z type: [{}]\n", types(&r.center_type));
    match &r.z2_type {
        Some(t) => s += &format!("Z2 type: [{}]\n", types(t)),
        None => s += "Z2 type: non-abelian\n",
    }
    s += &format!("lower central factors: [{}]\n", types(&r.series_orders));
    s += &format!("route: {}\n", r.hypothesis_route);
    s
}

fn oracle_text(o: &OracleSummary) -> String {
    let mut s = String::new();
    s += &format!("candidates: {}\n", o.candidates);
    s += &format!("automorphisms fixing Frattini: {}\n", o.frattini_fixing);
    s += &format!("of order p: {}\n", o.count_order_p);
    s += &format!("non-inner of order p: {}\n", o.non_inner_order_p);
    s += &format!(
        "exists non-inner order-p automorphism fixing Frattini: {}\n",
        o.exists_noninner_order_p_fixing_frattini
    );
    if o.central_lifts_all_inner {
        s += "all order-p Frattini-fixing derivation lifts into Z(G) are inner\n";
    }
    s
}

fn cmd_check(cli: &Cli, file: &Path) -> Result<u8, Failure> {
    let g = load(file, cli.cap)?;
    let report = g.structure_report()?;
    emit(
        cli,
        &match cli.format {
            Format::Json => to_json(&report),
            Format::Text => report_text(&report),
        },
    )?;
    Ok(0)
}

fn cmd_construct(cli: &Cli, file: &Path) -> Result<u8, Failure> {
    let g = load(file, cli.cap)?;
    let route = route_hypotheses(&g)?;
    if route.is_reduction() {
        println!("{}", reduction_message(route.label()));
        return Ok(EXIT_REDUCTION);
    }
    let cert = construct(&g)?;
    emit(cli, &cert.to_json())?;
    if cli.out.is_some() && cli.format == Format::Text {
        println!("{}: order {} automorphism, not inner ({} conjugators)", cert.route, cert.order, cert.non_inner_evidence.search_size);
    }
    Ok(0)
}

fn cmd_verify(cli: &Cli, file: &Path, cert_path: &Path) -> Result<u8, Failure> {
    let g = load(file, cli.cap)?;
    let text = fs::read_to_string(cert_path).map_err(|e| Failure::input(format!("error: {}: {e}", cert_path.display())))?;
    let cert = Certificate::from_json(&text).map_err(|e| Failure::input(format!("error: {}: {e}", cert_path.display())))?;
    let v: Verification = verify_certificate(&g, &cert);
    let body = match cli.format {
        Format::Json => to_json(&v),
        Format::Text if v.ok => "pass\n".to_string(),
        Format::Text => {
            let mut s = "fail\n".to_string();
            for d in &v.diffs {
                s += &format!("  {d}\n");
            }
            s
        }
    };
    emit(cli, &body)?;
    Ok(if v.ok { 0 } else { EXIT_VERIFY })
}

fn cmd_oracle(cli: &Cli, file: &Path) -> Result<u8, Failure> {
    let g = load(file, cli.cap)?;
    let summary = brute_force_aut_oracle(&g)?;
    emit(
        cli,
        &match cli.format {
            Format::Json => to_json(&summary),
            Format::Text => oracle_text(&summary),
        },
    )?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct BatchRow {
    file: String,
    /// One of `certified`, `reduction`, `verify-failed`, `error`, `cap`, `fault`.
    status: &'static str,
    order: Option<u64>,
    route: Option<String>,
    certificate_route: Option<String>,
    detail: Option<String>,
}

fn batch_row(path: &Path, cap: u64) -> BatchRow {
    let mut row = BatchRow {
        file: path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned()),
        status: "error",
        order: None,
        route: None,
        certificate_route: None,
        detail: None,
    };
    let g = match load(path, cap) {
        Ok(g) => g,
        Err(f) => {
            row.detail = Some(f.message);
            return row;
        }
    };
    row.order = Some(g.order());
    let outcome = g.structure_report().and_then(|report| {
        row.route = Some(report.hypothesis_route.clone());
        match route_hypotheses(&g)? {
            r if r.is_reduction() => Ok(None),
            _ => construct(&g).map(Some),
        }
    });
    match outcome {
        Ok(None) => row.status = "reduction",
        Ok(Some(cert)) => {
            let v = verify_certificate(&g, &cert);
            row.certificate_route = Some(cert.route);
            if v.ok {
                row.status = "certified";
            } else {
                row.status = "verify-failed";
                row.detail = Some(v.diffs.join("; "));
            }
        }
        Err(e) => {
            row.status = match e {
                Error::CapExceeded { .. } => "cap",
                Error::Fault { .. } => "fault",
                _ => "error",
            };
            row.detail = Some(e.to_string());
        }
    }
    row
}

fn cmd_batch(cli: &Cli, dir: &Path) -> Result<u8, Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::input(format!("error: {}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "pc"))
        .collect();
    paths.sort();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| Failure::input(format!("error: thread pool: {e}")))?;
    let rows: Vec<BatchRow> = pool.install(|| paths.par_iter().map(|p| batch_row(p, cli.cap)).collect());
    let body = match cli.format {
        Format::Json => to_json(&rows),
        Format::Text => rows
            .iter()
            .map(|r| {
                format!(
                    "{:<28} {:<14} {}{}\n",
                    r.file,
                    r.status,
                    r.certificate_route.as_deref().or(r.route.as_deref()).unwrap_or("-"),
                    r.detail.as_ref().map(|d| format!("  ({d})")).unwrap_or_default()
                )
            })
            .collect(),
    };
    emit(cli, &body)?;
    Ok(if rows.iter().any(|r| r.status == "fault") { EXIT_FAULT } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { file } => cmd_check(&cli, file),
        Command::Construct { file } => cmd_construct(&cli, file),
        Command::Verify { file, cert } => cmd_verify(&cli, file, cert),
        Command::Oracle { file } => cmd_oracle(&cli, file),
        Command::Batch { dir } => cmd_batch(&cli, dir),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
