//! `overlap-ecc`: reproducible experiments on overlapped Hamming codes.
//!
//! Reports go to stdout or `--out <path>`. A run manifest (arguments, seed,
//! library version, SHA-256 of every report) is written next to the report
//! as `<path>.manifest.json`, or to stderr when printing to stdout.
//!
//! Exit codes: 0 success, 1 usage, 2 validation failure, 3 search not found.

mod manifest;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use overlap_ecc::builtin::BUILTIN_NAMES;
use overlap_ecc::code::Codestruct;
use overlap_ecc::reliability::{reliability_curve, FailureTerm, ReliabilityParams};
use overlap_ecc::scalability::{compare, BASELINE_CODES};
use overlap_ecc::search::{
    search_assignment_with, AssignmentFile, SearchOptions, DEFAULT_STATE_LIMIT,
};
use overlap_ecc::{
    builtin_config, sweep_cell, validate_assignment, Action, BitVec, InjectionMode, Region,
    SweepOptions, SweepReport,
};
use serde::Serialize;
use serde_json::json;

use crate::manifest::RunManifest;

pub const CODESTRUCT_SCHEMA: &str = "overlap-ecc/codestruct/v1";
pub const DECODE_SCHEMA: &str = "overlap-ecc/decode/v1";
pub const SWEEP_SCHEMA: &str = "overlap-ecc/sweep/v1";
pub const VALIDATION_SCHEMA: &str = "overlap-ecc/validation/v1";
pub const SCALABILITY_SCHEMA: &str = "overlap-ecc/scalability/v1";

#[derive(Parser, Debug)]
#[command(
    name = "overlap-ecc",
    version,
    about = "Overlapped Hamming code experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Encode data bits into a codestruct.
    Encode {
        #[arg(long)]
        code: String,
        /// Row-major data bits, e.g. `100000000`.
        #[arg(long)]
        data: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Decode a codestruct given as hex.
    Decode {
        #[arg(long)]
        code: String,
        #[arg(long)]
        hex: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exhaustive fault-injection sweep.
    Sweep(SweepArgs),
    /// Search for a valid outer/inner address assignment.
    Search {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        max_states: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check that an assignment pair yields unique composite addresses.
    VerifyMaps {
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        builtin: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Reliability curve and MTTF for a built-in code.
    Reliability {
        #[arg(long)]
        code: String,
        /// Failures per bit per day.
        #[arg(long, default_value_t = 1e-5, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, default_value_t = 20000.0, allow_negative_numbers = true)]
        t_max: f64,
        #[arg(long, default_value_t = 1000.0, allow_negative_numbers = true)]
        step: f64,
        #[arg(long, value_enum, default_value_t = Model::UpToSigma)]
        model: Model,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Redundancy cost comparison for square data matrices.
    Scalability {
        #[arg(long = "max", default_value_t = 7, value_parser = clap::value_parser!(u64).range(2..=64))]
        max_side: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, required_unless_present = "all")]
    code: Option<String>,
    /// data, check or all (the whole codestruct).
    #[arg(long, default_value = "all")]
    region: String,
    /// A count (`3`) or an inclusive range (`1..6`).
    #[arg(long, default_value = "1..8")]
    errors: String,
    /// Every code, region and error count from 1 to 8.
    #[arg(long, conflicts_with = "code")]
    all: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value = "outer-complement")]
    injection: String,
    /// Payload bits; all zeros when omitted.
    #[arg(long)]
    payload: Option<String>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Model {
    UpToSigma,
    AnyError,
}

impl From<Model> for FailureTerm {
    fn from(m: Model) -> Self {
        match m {
            Model::UpToSigma => FailureTerm::UpToSigma,
            Model::AnyError => FailureTerm::AnyError,
        }
    }
}

/// Error carrying the process exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl Failure {
    fn usage(err: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 1,
            err: err.into(),
        }
    }

    fn validation(err: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 2,
            err: err.into(),
        }
    }
}

impl From<overlap_ecc::Error> for Failure {
    fn from(e: overlap_ecc::Error) -> Self {
        let code = match e {
            overlap_ecc::Error::InvalidArgument(_) => 1,
            overlap_ecc::Error::InvalidConfig(_) => 2,
            overlap_ecc::Error::NotFound { .. } => 3,
        };
        Failure {
            code,
            err: e.into(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        Failure { code: 1, err }
    }
}

type CmdResult<T> = Result<T, Failure>;

/// A finished report plus the knobs that go into the manifest.
struct Report {
    body: String,
    seed: Option<u64>,
    /// Non-zero exit code to return after writing the report.
    status: u8,
}

impl Report {
    fn ok(body: String) -> Self {
        Report {
            body,
            seed: None,
            status: 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let out = match &cli.command {
        Command::Encode { out, .. }
        | Command::Decode { out, .. }
        | Command::Search { out, .. }
        | Command::VerifyMaps { out, .. }
        | Command::Reliability { out, .. }
        | Command::Scalability { out, .. } => out.clone(),
        Command::Sweep(a) => a.out.clone(),
    };
    let result = run(cli.command).and_then(|report| {
        emit(&report, &out)?;
        Ok(report.status)
    });
    match result {
        Ok(status) => ExitCode::from(status),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn emit(report: &Report, out: &OutArgs) -> CmdResult<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let command = args.first().cloned().unwrap_or_default();
    let mut manifest = RunManifest::new(command, args, report.seed);
    match &out.out {
        Some(path) => {
            std::fs::write(path, &report.body)
                .with_context(|| format!("writing {}", path.display()))?;
            manifest.add_output(path.display().to_string(), report.body.as_bytes());
            let mpath = manifest::manifest_path(path);
            std::fs::write(&mpath, manifest.to_json()?)
                .with_context(|| format!("writing {}", mpath.display()))?;
        }
        None => {
            print!("{}", report.body);
            manifest.add_output("-".to_string(), report.body.as_bytes());
            eprintln!(
                "{}",
                serde_json::to_string(&manifest).map_err(anyhow::Error::from)?
            );
        }
    }
    Ok(())
}

fn run(cmd: Command) -> CmdResult<Report> {
    match cmd {
        Command::Encode { code, data, .. } => cmd_encode(&code, &data),
        Command::Decode { code, hex, .. } => cmd_decode(&code, &hex),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Search {
            m,
            k,
            seed,
            max_states,
            ..
        } => cmd_search(m, k, seed, max_states),
        Command::VerifyMaps { builtin, file, .. } => cmd_verify_maps(builtin.as_deref(), file),
        Command::Reliability {
            code,
            lambda,
            t_max,
            step,
            model,
            ..
        } => cmd_reliability(&code, lambda, t_max, step, model),
        Command::Scalability {
            max_side, format, ..
        } => cmd_scalability(max_side as usize, format),
    }
}

fn pretty<T: Serialize>(value: &T) -> CmdResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(anyhow::Error::from)?;
    s.push('\n');
    Ok(s)
}

fn codestruct_json(code: &str, cs: &Codestruct) -> serde_json::Value {
    json!({
        "schema": CODESTRUCT_SCHEMA,
        "code": code,
        "bits": cs.len(),
        "hex": cs.to_hex(),
        "codestruct": cs.to_json(),
    })
}

fn cmd_encode(code: &str, data: &str) -> CmdResult<Report> {
    let cfg = builtin_config(code)?;
    let bits: BitVec = data.parse()?;
    if bits.len() != cfg.m() {
        return Err(Failure::usage(anyhow!(
            "expected {} bits for code {code}, got {}",
            cfg.m(),
            bits.len()
        )));
    }
    let cs = cfg.encode(&bits)?;
    Ok(Report::ok(pretty(&codestruct_json(code, &cs))?))
}

fn cmd_decode(code: &str, hex: &str) -> CmdResult<Report> {
    let cfg = builtin_config(code)?;
    let cs = cfg.codestruct_from_hex(hex)?;
    let out = cfg.decode(&cs)?;
    let action = match out.action {
        Action::None => json!({ "kind": "none" }),
        Action::SingleOuter(p) => json!({ "kind": "single-outer", "positions": [p] }),
        Action::SingleInner(p) => json!({ "kind": "single-inner", "positions": [p] }),
        Action::DoublePair(a, b) => json!({ "kind": "double", "positions": [a, b] }),
        Action::DetectedOnly => json!({ "kind": "detected-only" }),
    };
    let body = json!({
        "schema": DECODE_SCHEMA,
        "code": code,
        "input": codestruct_json(code, &cs),
        "data": out.data.to_string(),
        "detected": out.detected,
        "action": action,
    });
    Ok(Report::ok(pretty(&body)?))
}

fn parse_errors(s: &str) -> CmdResult<RangeInclusive<usize>> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| Failure::usage(anyhow!("bad error count {t:?}")))
    };
    let range = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.trim_start_matches('='))?,
        None => {
            let e = num(s)?;
            e..=e
        }
    };
    if range.is_empty() || *range.start() == 0 {
        return Err(Failure::usage(anyhow!(
            "error range {s:?} must be non-empty and start at 1 or more"
        )));
    }
    Ok(range)
}

#[derive(Serialize)]
struct SweepRow {
    code: String,
    region: String,
    errors: usize,
    combinations: u64,
    corrected: u64,
    detected: u64,
    correction_rate: String,
    detection_rate: String,
}

impl From<&SweepReport> for SweepRow {
    fn from(r: &SweepReport) -> Self {
        SweepRow {
            code: r.code.clone(),
            region: r.region.as_str().to_string(),
            errors: r.errors,
            combinations: r.decodings,
            corrected: r.corrected,
            detected: r.detected,
            correction_rate: format!("{:.2}", r.correction_rate),
            detection_rate: format!("{:.2}", r.detection_rate),
        }
    }
}

fn cmd_sweep(args: &SweepArgs) -> CmdResult<Report> {
    let mode: InjectionMode = args.injection.parse()?;
    if args.workers == 0 {
        return Err(Failure::usage(anyhow!("--workers must be at least 1")));
    }
    let (codes, regions, errors): (Vec<&str>, Vec<Region>, RangeInclusive<usize>) = if args.all {
        (BUILTIN_NAMES.to_vec(), Region::ALL.to_vec(), 1..=8)
    } else {
        let code = args
            .code
            .as_deref()
            .expect("clap requires --code without --all");
        (
            vec![code],
            vec![args.region.parse()?],
            parse_errors(&args.errors)?,
        )
    };
    let opts = SweepOptions {
        mode,
        workers: args.workers,
    };

    let mut rows = Vec::new();
    for code in codes {
        let cfg = builtin_config(code)?;
        let payload = match &args.payload {
            Some(p) => {
                let bits: BitVec = p.parse()?;
                if bits.len() != cfg.m() {
                    return Err(Failure::usage(anyhow!(
                        "payload has {} bits, code {code} expects {}",
                        bits.len(),
                        cfg.m()
                    )));
                }
                bits
            }
            None => BitVec::zeros(cfg.m())?,
        };
        for &region in &regions {
            let size = region.size(cfg.m(), cfg.n());
            for e in errors.clone() {
                if e > size {
                    eprintln!(
                        "warning: skipping {code} {region} e={e}: region has only {size} bits"
                    );
                    continue;
                }
                rows.push(SweepRow::from(&sweep_cell(
                    &cfg, region, e, &payload, opts,
                )?));
            }
        }
    }

    let body = match args.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row).map_err(anyhow::Error::from)?;
            }
            if rows.is_empty() {
                w.write_record([
                    "code",
                    "region",
                    "errors",
                    "combinations",
                    "corrected",
                    "detected",
                    "correction_rate",
                    "detection_rate",
                ])
                .map_err(anyhow::Error::from)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?)
                .map_err(anyhow::Error::from)?
        }
        Format::Json => pretty(&json!({
            "schema": SWEEP_SCHEMA,
            "injection": mode.to_string(),
            "rows": rows,
        }))?,
    };
    Ok(Report::ok(body))
}

fn cmd_search(m: usize, k: u32, seed: u64, max_states: u64) -> CmdResult<Report> {
    let opts = SearchOptions {
        seed,
        max_states,
        ..SearchOptions::default()
    };
    let found = search_assignment_with(m, k, &opts)?;
    eprintln!("explored {} states", found.explored);
    let mut report = Report::ok(pretty(&AssignmentFile::new(&found.outer, &found.inner))?);
    report.seed = Some(seed);
    Ok(report)
}

fn cmd_verify_maps(builtin: Option<&str>, file: Option<PathBuf>) -> CmdResult<Report> {
    let (label, outer, inner) = match (builtin, file) {
        (Some(name), _) => {
            let cfg = builtin_config(name)?;
            (name.to_string(), cfg.outer().clone(), cfg.inner().clone())
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading {}", path.display()))?;
            let parsed: AssignmentFile = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))
                .map_err(Failure::validation)?;
            let (o, i) = parsed.assignments().map_err(Failure::validation)?;
            (path.display().to_string(), o, i)
        }
        (None, None) => return Err(Failure::usage(anyhow!("pass --builtin or --file"))),
    };
    let report = validate_assignment(&outer, &inner, outer.m()).map_err(Failure::validation)?;
    for c in &report.collisions {
        eprintln!(
            "collision: pairs {:?} and {:?} share composite address {:?}",
            c.first, c.second, c.key
        );
    }
    let body = pretty(&json!({
        "schema": VALIDATION_SCHEMA,
        "source": label,
        "ok": report.ok,
        "unique_keys": report.unique_keys,
        "collisions": report.collisions,
    }))?;
    Ok(Report {
        body,
        seed: None,
        status: if report.ok { 0 } else { 2 },
    })
}

fn cmd_reliability(
    code: &str,
    lambda: f64,
    t_max: f64,
    step: f64,
    model: Model,
) -> CmdResult<Report> {
    let params = ReliabilityParams::for_builtin(code, lambda)?.with_failure_term(model.into());
    let curve = reliability_curve(&params, t_max, step)?;
    let mut body = String::from("t_days,reliability\n");
    for (t, r) in &curve.samples {
        body.push_str(&format!("{t},{r:.6}\n"));
    }
    body.push_str(&format!(
        "# mttf_days={:.3} horizon_days={}\n",
        curve.mttf, curve.horizon
    ));
    Ok(Report::ok(body))
}

fn cmd_scalability(max_side: usize, format: Format) -> CmdResult<Report> {
    let table = compare(max_side);
    let body = match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["size", "N", "ecc", "check_bits", "total_bits", "rc"])
                .map_err(anyhow::Error::from)?;
            for row in &table {
                let size = format!("{0}x{0}", row.side);
                let n = (row.side * row.side).to_string();
                let o = &row.overlapped;
                w.write_record([
                    size.as_str(),
                    &n,
                    &o.label,
                    &o.check_bits.to_string(),
                    &o.total_bits.to_string(),
                    &o.rc_display(),
                ])
                .map_err(anyhow::Error::from)?;
                for (label, b) in BASELINE_CODES.iter().zip(&row.baselines) {
                    let fields = match b {
                        Some(b) => [
                            b.check_bits.to_string(),
                            b.total_bits.to_string(),
                            b.rc_display(),
                        ],
                        None => Default::default(),
                    };
                    w.write_record([size.as_str(), &n, label, &fields[0], &fields[1], &fields[2]])
                        .map_err(anyhow::Error::from)?;
                }
            }
            String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?)
                .map_err(anyhow::Error::from)?
        }
        Format::Json => pretty(&json!({ "schema": SCALABILITY_SCHEMA, "rows": table }))?,
    };
    Ok(Report::ok(body))
}
