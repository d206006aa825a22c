//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage, 3 domain or feasibility, 4 convergence or
//! cross-check, 5 I/O. Every failure prints one line to standard error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analytic::DEFAULT_M_MAX;
use crate::error::SrfError;
use crate::exec::Execution;
use crate::helix::{HelixParams, SkipCount};
use crate::io::{self as out, linspace};
use crate::optimize::{self, ConjectureConfig, GridSpec, OptimumReport, RefineOptions};
use crate::oracle::{self, OracleReport, RelaxOptions};
use crate::region;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;
pub const EXIT_IO: i32 = 5;

const MAX_AXIS: usize = 4000;
const MAX_SKIP: u32 = 64;
const MAX_N: usize = 10_000;
const TOL_RANGE: RangeInclusive<f64> = 1e-14..=1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Parsed and validated invocation.
#[derive(Debug, Parser)]
#[command(name = "helix-srf", version, about = "Steiner ratio function of helical point sets")]
pub struct RunConfig {
    /// Worker threads for grid and batch evaluation; 1 runs sequentially.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..=1024))]
    pub threads: Option<u16>,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format. `surface` and `region` default to csv, the rest to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ρ_m on an (ω, α) lattice.
    Surface(SurfaceArgs),
    /// ρ_m = 1 curves and the ω window.
    Region(RegionArgs),
    /// Lattice scan plus simplex refinement, or refinement from a given start.
    Minimize(MinimizeArgs),
    /// Newton solve for the point where ρ_1 = ρ_2 = ρ_3.
    Triple(TripleArgs),
    /// Finite-n tree oracle.
    Verify(VerifyArgs),
    /// Global minimum with both routes cross-checked.
    Conjecture(ScanArgs),
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Skip counts, `k` or `lo..hi` (inclusive).
    #[arg(long, default_value = "1..5", value_parser = parse_skip_range)]
    pub m: RangeInclusive<u32>,
    /// Lattice size `N_OMEGAxN_ALPHA`.
    #[arg(long, default_value = "400x400", value_parser = parse_grid)]
    pub grid: [usize; 2],
    /// `lo:hi`; defaults to the ω window.
    #[arg(long, value_parser = parse_bounds)]
    pub omega: Option<[f64; 2]>,
    #[arg(long, default_value = "0.005:2", value_parser = parse_bounds)]
    pub alpha: [f64; 2],
    /// Largest skip count in the feasibility test.
    #[arg(long, default_value_t = DEFAULT_M_MAX)]
    pub m_max: u32,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long, default_value = "1..5", value_parser = parse_skip_range)]
    pub m: RangeInclusive<u32>,
    /// ω samples across the window.
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value = "400x400", value_parser = parse_grid)]
    pub grid: [usize; 2],
    /// Upper end of the α lattice.
    #[arg(long, default_value_t = 2.0)]
    pub alpha_hi: f64,
    #[arg(long, default_value_t = DEFAULT_M_MAX)]
    pub m_max: u32,
    /// Simplex diameter at which refinement stops.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct MinimizeArgs {
    #[command(flatten)]
    pub scan: ScanArgs,
    /// Refinement start; skips the lattice scan (requires --alpha).
    #[arg(long, requires = "alpha", allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, requires = "omega", allow_hyphen_values = true)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TripleArgs {
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Stop when a sweep shortens the tree by less than this.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_sweeps: usize,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Srf(SrfError),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Srf(e) => match e {
                SrfError::Spec(_) => EXIT_USAGE,
                SrfError::Domain(_)
                | SrfError::Degenerate(_)
                | SrfError::DegenerateInput(_)
                | SrfError::EmptyFeasibleSet => EXIT_DOMAIN,
                SrfError::NonConvergence { .. } | SrfError::DegenerateRoot | SrfError::CrossCheckFailure { .. } => {
                    EXIT_CONVERGENCE
                }
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_USAGE => "usage",
            EXIT_DOMAIN => "domain",
            EXIT_CONVERGENCE => "convergence",
            _ => "io",
        }
    }

    /// `error[kind]: message` on a single line.
    pub fn line(&self) -> String {
        let msg = match self {
            CliError::Usage(m) => m.clone(),
            CliError::Srf(e) => e.to_string(),
            CliError::Io(e) => e.to_string(),
        };
        format!(
            "error[{}]: {}",
            self.kind(),
            msg.split_whitespace().collect::<Vec<_>>().join(" ")
        )
    }
}

impl From<SrfError> for CliError {
    fn from(e: SrfError) -> Self {
        CliError::Srf(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_skip_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse::<u32>(), b.trim().parse::<u32>()),
        None => (s.trim().parse::<u32>(), s.trim().parse::<u32>()),
    };
    let (lo, hi) = (lo.map_err(|e| e.to_string())?, hi.map_err(|e| e.to_string())?);
    if lo == 0 || lo > hi || hi > MAX_SKIP {
        return Err(format!("expected 1 <= lo <= hi <= {MAX_SKIP}"));
    }
    Ok(lo..=hi)
}

fn parse_grid(s: &str) -> Result<[usize; 2], String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or("expected NxM")?;
    let dims = [a.trim().parse::<usize>(), b.trim().parse::<usize>()];
    let [a, b] = dims.map(|d| d.map_err(|e| e.to_string()));
    let (a, b) = (a?, b?);
    if !(1..=MAX_AXIS).contains(&a) || !(1..=MAX_AXIS).contains(&b) {
        return Err(format!("each axis must be in 1..={MAX_AXIS}"));
    }
    Ok([a, b])
}

fn parse_bounds(s: &str) -> Result<[f64; 2], String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err("expected finite lo <= hi".into());
    }
    Ok([lo, hi])
}

fn skip(m: u32) -> Result<SkipCount, CliError> {
    if m > MAX_SKIP {
        return Err(usage(format!("skip count {m} above {MAX_SKIP}")));
    }
    SkipCount::new(m).map_err(CliError::from)
}

fn m_max(m: u32) -> Result<SkipCount, CliError> {
    if m < 5 {
        return Err(usage(format!("--m-max {m} below 5")));
    }
    skip(m)
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if TOL_RANGE.contains(&tol) {
        Ok(())
    } else {
        Err(usage(format!("tolerance {tol} outside [1e-14, 1e-3]")))
    }
}

impl ScanArgs {
    fn grid_spec(&self) -> Result<GridSpec, CliError> {
        if !(self.alpha_hi > 0.0 && self.alpha_hi.is_finite()) {
            return Err(usage(format!("--alpha-hi {} must be positive", self.alpha_hi)));
        }
        Ok(GridSpec::new(self.grid[0], self.grid[1])
            .with_alpha_hi(self.alpha_hi)
            .with_m_max(m_max(self.m_max)?))
    }

    fn refine(&self) -> Result<RefineOptions, CliError> {
        check_tol(self.tol)?;
        Ok(RefineOptions {
            tol: self.tol,
            m_max: m_max(self.m_max)?,
            ..RefineOptions::default()
        })
    }
}

#[derive(Serialize)]
struct TripleOutput {
    #[serde(flatten)]
    optimum: OptimumReport,
    iterations: usize,
    residual: f64,
    step_distances: [f64; 3],
}

#[derive(Serialize)]
struct VerifyOutput {
    #[serde(flatten)]
    report: OracleReport,
    /// `angle_step_mean / ω`; informational only.
    #[serde(skip_serializing_if = "Option::is_none")]
    angle_step_over_omega: Option<f64>,
}

enum Output {
    Surface(Vec<out::SurfaceRow>),
    Region(Vec<out::RegionRow>),
    /// Rendered JSON, newline-terminated.
    Report(Vec<u8>),
}

fn report<T: Serialize>(r: T) -> Output {
    let mut buf = Vec::new();
    out::write_report(&r, &mut buf).expect("writing to memory");
    Output::Report(buf)
}

fn execute(command: &Command, exec: Execution) -> Result<Output, CliError> {
    match command {
        Command::Surface(a) => {
            let ms = a.m.clone().map(skip).collect::<Result<Vec<_>, _>>()?;
            let m_max = m_max(a.m_max)?;
            let w = region::omega_window();
            let [wlo, whi] = a.omega.unwrap_or([w.lo, w.hi]);
            if !(wlo > 0.0 && whi < std::f64::consts::TAU) {
                return Err(usage("--omega bounds must lie in (0, 2π)"));
            }
            if a.alpha[0] < 0.0 {
                return Err(usage("--alpha bounds must be non-negative"));
            }
            let omegas = linspace(wlo, whi, a.grid[0]);
            let alphas = linspace(a.alpha[0], a.alpha[1], a.grid[1]);
            Ok(Output::Surface(out::surface_rows(&omegas, &alphas, &ms, m_max, exec)))
        }
        Command::Region(a) => {
            if !(2..=100_000).contains(&a.samples) {
                return Err(usage("--samples must be in 2..=100000"));
            }
            let ms = a.m.clone().map(skip).collect::<Result<Vec<_>, _>>()?;
            Ok(Output::Region(out::region_rows(
                region::omega_window(),
                &ms,
                a.samples,
                exec,
            )?))
        }
        Command::Minimize(a) => {
            let refine = a.scan.refine()?;
            match (a.omega, a.alpha) {
                (Some(omega), Some(alpha)) => Ok(report(optimize::refine_local(
                    HelixParams::new(omega, alpha)?,
                    &refine,
                )?)),
                _ => {
                    let spec = a.scan.grid_spec()?;
                    let scan = optimize::grid_scan(spec, exec)?;
                    let mut opt = optimize::refine_local(scan.incumbent_cell().params, &refine)?;
                    opt.grid_resolution = Some(a.scan.grid);
                    Ok(report(opt))
                }
            }
        }
        Command::Triple(a) => {
            let t = optimize::solve_triple_point(HelixParams::new(a.omega, a.alpha)?)?;
            let m_max = SkipCount::new(DEFAULT_M_MAX)?;
            Ok(report(TripleOutput {
                optimum: OptimumReport::evaluate(t.params(), m_max, optimize::triple::RESIDUAL_TOL, 0)?,
                iterations: t.iterations,
                residual: t.residual,
                step_distances: t.step_distances(),
            }))
        }
        Command::Verify(a) => {
            if !(3..=MAX_N).contains(&a.n) {
                return Err(usage(format!("--n must be in 3..={MAX_N}")));
            }
            check_tol(a.tol)?;
            if a.max_sweeps == 0 {
                return Err(usage("--max-sweeps must be positive"));
            }
            let p = HelixParams::new(a.omega, a.alpha)?;
            let opts = RelaxOptions {
                tol: a.tol,
                max_sweeps: a.max_sweeps,
                ..RelaxOptions::default()
            };
            let report_ = oracle::steiner_ratio_finite(a.n, p, &opts)?;
            let angle_step_over_omega = report_.angle_step_mean.map(|s| s / p.omega);
            Ok(report(VerifyOutput {
                report: report_,
                angle_step_over_omega,
            }))
        }
        Command::Conjecture(a) => {
            let config = ConjectureConfig {
                grid: a.grid_spec()?,
                refine: a.refine()?,
                exec,
            };
            Ok(report(optimize::conjecture_report(&config)?))
        }
    }
}

fn emit(output: &Output, format: Format, w: &mut dyn Write) -> Result<(), CliError> {
    match (output, format) {
        (Output::Surface(rows), Format::Csv) => out::write_surface_csv(rows, &mut *w)?,
        (Output::Surface(rows), Format::Json) => out::write_report(rows, &mut *w)?,
        (Output::Region(rows), Format::Csv) => out::write_region_csv(rows, &mut *w)?,
        (Output::Region(rows), Format::Json) => out::write_report(rows, &mut *w)?,
        (Output::Report(bytes), Format::Json) => w.write_all(bytes)?,
        (Output::Report(_), Format::Csv) => return Err(usage("reports are JSON only; drop --format csv")),
    }
    w.flush()?;
    Ok(())
}

fn run(config: &RunConfig) -> Result<(), CliError> {
    let format = config.format.unwrap_or(match config.command {
        Command::Surface(_) | Command::Region(_) => Format::Csv,
        _ => Format::Json,
    });
    if format == Format::Csv && !matches!(config.command, Command::Surface(_) | Command::Region(_)) {
        return Err(usage("reports are JSON only; drop --format csv"));
    }
    let output = with_threads(config.threads, |exec| execute(&config.command, exec))??;
    match &config.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            emit(&output, format, &mut w)
        }
        None => emit(&output, format, &mut io::stdout().lock()),
    }
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(threads: Option<u16>, f: impl FnOnce(Execution) -> T + Send) -> Result<T, CliError> {
    match threads {
        Some(1) => Ok(f(Execution::Sequential)),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k as usize)
                .build()
                .map_err(|e| usage(format!("thread pool: {e}")))?;
            Ok(pool.install(|| f(Execution::Parallel)))
        }
        None => Ok(f(Execution::Parallel)),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T>(_threads: Option<u16>, f: impl FnOnce(Execution) -> T) -> Result<T, CliError> {
    Ok(f(Execution::Sequential))
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                eprint!("{e}");
                return EXIT_USAGE;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", usage(first).line());
            return EXIT_USAGE;
        }
    };
    match run(&config) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{}", e.line());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_parsers() {
        assert_eq!(parse_skip_range("1..5").unwrap(), 1..=5);
        assert_eq!(parse_skip_range("3").unwrap(), 3..=3);
        assert!(parse_skip_range("0..2").is_err());
        assert!(parse_skip_range("4..2").is_err());
        assert_eq!(parse_grid("2x3").unwrap(), [2, 3]);
        assert!(parse_grid("0x3").is_err());
        assert!(parse_grid("23").is_err());
        assert_eq!(parse_bounds("1.4:4.9").unwrap(), [1.4, 4.9]);
        assert!(parse_bounds("2:1").is_err());
        assert!(parse_bounds("nan:1").is_err());
    }

    #[test]
    fn exit_code_taxonomy() {
        let code = |e: SrfError| CliError::Srf(e).exit_code();
        assert_eq!(code(SrfError::spec("x")), 2);
        assert_eq!(code(SrfError::domain("x")), 3);
        assert_eq!(code(SrfError::EmptyFeasibleSet), 3);
        assert_eq!(code(SrfError::DegenerateRoot), 4);
        assert_eq!(
            code(SrfError::NonConvergence {
                method: "m",
                budget: 1,
                unit: "u"
            }),
            4
        );
        assert_eq!(CliError::Io(io::Error::other("x")).exit_code(), 5);
        let line = CliError::Srf(SrfError::domain("a\nb")).line();
        assert_eq!(line, "error[domain]: domain error: a b");
    }

    #[test]
    fn run_cli_codes() {
        assert_eq!(run_cli(["helix-srf", "--help"]), 0);
        assert_eq!(run_cli(["helix-srf", "frobnicate"]), 2);
        assert_eq!(run_cli(["helix-srf", "surface", "--bogus"]), 2);
        assert_eq!(
            run_cli(["helix-srf", "verify", "--n", "3", "--omega", "0.5", "--alpha", "0.3"]),
            3
        );
        assert_eq!(run_cli(["helix-srf", "triple", "--format", "csv"]), 2);
        assert_eq!(run_cli(["helix-srf", "conjecture", "--grid", "8x8"]), 2);
    }
}
