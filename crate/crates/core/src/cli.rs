//! The `betti` command line: argument parsing, reports and exit codes.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
//! or input-format errors. Machine-readable output goes to stdout; verdicts
//! and timings go to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::field::{FieldContext, DEFAULT_PRIME};
use crate::instances::{generate, Family, InstanceSpec};
use crate::koszul::{
    betti_table, euler_strand_check, gorenstein_duality_check, strand_complete, verify_green,
    BettiTable, DifferentialStats,
};
use crate::ring::{hilbert_check, FamilyLabel, GradedAlgebra, HilbertReport, DEFAULT_QMAX};
use crate::selftest::run_selftest;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "betti",
    version,
    about = "Koszul cohomology tables of projective varieties over GF(p)"
)]
pub struct Cli {
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true, env = "BETTI_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Grid,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a seeded instance as JSON.
    Gen {
        #[arg(long)]
        family: String,
        /// Genus; for `rnc` the degree of the curve.
        #[arg(long)]
        genus: Option<u32>,
        #[arg(long, env = "BETTI_PRIME", default_value_t = DEFAULT_PRIME as u64)]
        prime: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout when omitted).
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Compute the table `κ_{p,q}` for `p <= pmax`, `q <= qmax`.
    Betti {
        file: PathBuf,
        /// Defaults to the number of variables.
        #[arg(long)]
        pmax: Option<usize>,
        #[arg(long, default_value_t = 2)]
        qmax: usize,
        #[arg(long, value_enum, default_value_t = Format::Grid)]
        format: Format,
    },
    /// Check the single vanishing `κ_{k,1} = 0` for `g = 2k`.
    VerifyGreen { file: PathBuf },
    /// Run the calibration suite.
    Selftest {
        #[arg(long, env = "BETTI_PRIME", default_value_t = DEFAULT_PRIME as u64)]
        prime: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    fn new(check: &str, pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            check: check.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceEcho {
    pub family: Family,
    pub genus: u32,
    pub prime: u32,
    pub seed: u64,
}

impl InstanceEcho {
    fn of(spec: &InstanceSpec) -> Self {
        InstanceEcho {
            family: spec.family,
            genus: spec.genus,
            prime: spec.prime,
            seed: spec.seed,
        }
    }
}

/// What `betti` prints with `--format json`. Timings are left out so equal
/// inputs give equal bytes; they are reported on stderr.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub instance: InstanceEcho,
    pub dims: Vec<usize>,
    pub pmax: usize,
    pub qmax: usize,
    /// `kappa[p][q]`.
    pub kappa: Vec<Vec<u64>>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip)]
    pub seconds: f64,
}

impl RunReport {
    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

/// Failure reasons surfaced to the user, with their exit codes.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Cell { source, .. } => error_code(source),
        Error::ChainCondition { .. }
        | Error::DegenerateDraw(_)
        | Error::DegenerateParametrization { .. }
        | Error::RingInvariant(_)
        | Error::SymComposite { .. }
        | Error::DivisionByZero => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: error_code(&e),
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

pub fn read_instance(path: &Path) -> std::result::Result<InstanceSpec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let spec = InstanceSpec::from_json(&text)
        .map_err(|e| Failure::usage(format!("{}: malformed instance: {e}", path.display())))?;
    spec.presentation()?;
    Ok(spec)
}

fn hilbert_verdict(report: &HilbertReport) -> Verdict {
    let detail = report
        .rows
        .iter()
        .map(|r| format!("{}/{}", r.actual, r.expected))
        .collect::<Vec<_>>()
        .join(" ");
    Verdict::new("hilbert", report.pass(), format!("dims/expected {detail}"))
}

fn stats_line(d: &DifferentialStats) -> String {
    format!(
        "d({},{}) {}x{} nnz {} rank {} {:.3}s",
        d.p, d.q, d.rows, d.cols, d.nnz, d.rank, d.seconds
    )
}

fn table_verdicts(table: &BettiTable, ring: &GradedAlgebra, label: FamilyLabel) -> Vec<Verdict> {
    let mut out = Vec::new();
    let strands: Vec<usize> = (0..=table.pmax + table.qmax)
        .filter(|&m| strand_complete(table, ring, m))
        .collect();
    let bad: Vec<usize> = strands
        .iter()
        .copied()
        .filter(|&m| !euler_strand_check(table, ring, m))
        .collect();
    out.push(Verdict::new(
        "euler",
        bad.is_empty(),
        if bad.is_empty() {
            format!("strands {strands:?}")
        } else {
            format!("failing strands {bad:?}")
        },
    ));
    let genus = match label {
        FamilyLabel::CanonicalCurve { genus } => Some(genus),
        FamilyLabel::K3 { genus } | FamilyLabel::TangentDevelopable { genus } => Some(genus),
        FamilyLabel::RationalNormalCurve { .. } => None,
    };
    if let Some(g) = genus.filter(|g| g % 2 == 0 && *g >= 4) {
        let g = g as usize;
        if table.pmax >= g - 3 && table.qmax >= 2 {
            out.push(Verdict::new(
                "duality",
                gorenstein_duality_check(table, g as u32),
                format!("κ(p,2) = κ({}-p,1), 1 <= p <= {}", g - 2, g - 3),
            ));
        }
        let k = g / 2;
        if let Some(v) = table.kappa(k, 1) {
            out.push(Verdict::new("green", v == 0, format!("κ({k},1) = {v}")));
        }
    }
    out
}

fn cmd_gen(
    family: &str,
    genus: Option<u32>,
    prime: u64,
    seed: u64,
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let family: Family = family.parse()?;
    let ctx = FieldContext::new(prime)?;
    let spec = generate(family, genus, ctx, seed)?;
    let (_, report) = spec.checked_ring(DEFAULT_QMAX)?;
    let json = spec.to_json();
    match output {
        Some(path) => std::fs::write(path, &json)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        None => out
            .write_all(json.as_bytes())
            .map_err(|e| Failure::usage(e.to_string()))?,
    }
    let _ = writeln!(
        err,
        "{} genus {} prime {} seed {}: {}",
        family,
        spec.genus,
        prime,
        seed,
        hilbert_verdict(&report).detail
    );
    Ok(EXIT_PASS)
}

pub fn betti_report(
    spec: &InstanceSpec,
    pmax: Option<usize>,
    qmax: usize,
) -> std::result::Result<(RunReport, BettiTable), Failure> {
    if qmax + 1 > DEFAULT_QMAX {
        return Err(Failure::usage(format!(
            "--qmax {qmax} needs ring degree {}, instances are built to degree {DEFAULT_QMAX}",
            qmax + 1
        )));
    }
    let start = std::time::Instant::now();
    let ring = spec.build_ring(DEFAULT_QMAX)?;
    let pmax = pmax.unwrap_or(ring.r1_dim());
    let label = spec.label();
    let hilbert = hilbert_check(&ring, label);
    let mut verdicts = vec![hilbert_verdict(&hilbert)];
    let table = betti_table(&ring, pmax, qmax)?;
    verdicts.push(Verdict::new(
        "chain",
        true,
        "d∘d = 0 on every assembled pair",
    ));
    verdicts.extend(table_verdicts(&table, &ring, label));
    let report = RunReport {
        instance: InstanceEcho::of(spec),
        dims: ring.dims().to_vec(),
        pmax,
        qmax,
        kappa: table.kappa.clone(),
        verdicts,
        seconds: start.elapsed().as_secs_f64(),
    };
    Ok((report, table))
}

fn write_verdicts(err: &mut dyn Write, verdicts: &[Verdict]) {
    for v in verdicts {
        let _ = writeln!(
            err,
            "{} {}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.check,
            v.detail
        );
    }
}

fn cmd_betti(
    file: &Path,
    pmax: Option<usize>,
    qmax: usize,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let spec = read_instance(file)?;
    let (report, table) = betti_report(&spec, pmax, qmax)?;
    match format {
        Format::Grid => {
            let _ = out.write_all(table.to_grid().as_bytes());
        }
        Format::Json => {
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
        }
    }
    let _ = writeln!(
        err,
        "{} genus {} prime {} seed {} dims {:?}",
        spec.family, spec.genus, spec.prime, spec.seed, report.dims
    );
    for d in &table.differentials {
        let _ = writeln!(err, "  {}", stats_line(d));
    }
    write_verdicts(err, &report.verdicts);
    let _ = writeln!(err, "total {:.3}s", report.seconds);
    Ok(if report.pass() { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_verify_green(file: &Path, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let spec = read_instance(file)?;
    if spec.family == Family::Rnc {
        return Err(Failure::usage(
            "rnc instances are not even-genus canonical models; verify-green needs a curve, K3 or tandev instance",
        ));
    }
    if spec.genus % 2 == 1 {
        return Err(Error::OddGenus(spec.genus).into());
    }
    let ring = spec.build_ring(DEFAULT_QMAX)?;
    let hilbert = hilbert_verdict(&hilbert_check(&ring, spec.label()));
    let verdict = verify_green(&ring, spec.genus)?;
    let green = Verdict::new(
        "green",
        verdict.pass,
        format!("κ({},1) = {}", verdict.k, verdict.kappa),
    );
    let _ = writeln!(
        out,
        "{} genus {} prime {} seed {}: {} κ({},1) = {}",
        spec.family,
        spec.genus,
        spec.prime,
        spec.seed,
        if verdict.pass { "PASS" } else { "FAIL" },
        verdict.k,
        verdict.kappa
    );
    for d in verdict.outgoing.iter().chain(&verdict.incoming) {
        let _ = writeln!(err, "  {}", stats_line(d));
    }
    let verdicts = [hilbert, green];
    write_verdicts(err, &verdicts);
    let _ = writeln!(err, "total {:.3}s", verdict.seconds);
    Ok(if verdicts.iter().all(|v| v.pass) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

fn cmd_selftest(prime: u64, out: &mut dyn Write) -> CmdResult {
    let ctx = FieldContext::new(prime)?;
    let start = std::time::Instant::now();
    let results = run_selftest(ctx);
    for r in &results {
        let _ = writeln!(
            out,
            "{} {} ({}, {:.3}s)",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.detail,
            r.seconds
        );
    }
    let _ = writeln!(out, "selftest {:.2}s", start.elapsed().as_secs_f64());
    match results.iter().find(|r| !r.pass) {
        Some(first) => Err(Failure {
            code: EXIT_FAIL,
            message: format!("first failing case: {} ({})", first.name, first.detail),
        }),
        None => Ok(EXIT_PASS),
    }
}

fn configure_threads(threads: Option<usize>) -> std::result::Result<(), Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Failure::usage("--threads must be positive"));
        }
        builder = builder.num_threads(n);
    }
    // a second call in the same process keeps the first pool
    let _ = builder.build_global();
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    let result = configure_threads(cli.threads).and_then(|()| match &cli.command {
        Command::Gen {
            family,
            genus,
            prime,
            seed,
            output,
        } => cmd_gen(family, *genus, *prime, *seed, output.as_deref(), out, err),
        Command::Betti {
            file,
            pmax,
            qmax,
            format,
        } => cmd_betti(file, *pmax, *qmax, *format, out, err),
        Command::VerifyGreen { file } => cmd_verify_green(file, out, err),
        Command::Selftest { prime } => cmd_selftest(*prime, out),
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
