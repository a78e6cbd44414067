//! Batch front end: argument and config-file parsing, command dispatch and
//! output files.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::assembly::{Method, ProblemConfig};
use crate::bench::{
    benard_mesh, benard_setup, cavity_mesh, cavity_setup, convergence_study_with, error_norms, lshape_singular,
    manufactured_smooth_2d, midline_profiles, profiles_csv, ExactSolution, Heating, StudyLevel, StudyTable,
};
use crate::error::{Error, Result};
use crate::fem::FeSystem;
use crate::io::{parse_key_values, write_vtk, KeyValues};
use crate::iterate::{history_csv, run, SolveReport, SolveStatus};
use crate::mesh::Mesh;

pub const SWEEP_HEADER: &str = "ra,method,status,iters,rel_diff";
pub const DEFAULT_LEVELS: [usize; 4] = [8, 16, 32, 64];
pub const DEFAULT_SWEEP: [f64; 6] = [1e1, 1e2, 1e3, 1e4, 1e5, 1e6];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Convergence,
    Run,
    SweepRa,
    Cavity,
    Benard,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Convergence => "convergence",
            Command::Run => "run",
            Command::SweepRa => "sweep-ra",
            Command::Cavity => "cavity",
            Command::Benard => "benard",
        }
    }
}

/// Problems with closed-form solutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bench {
    Smooth,
    LShape,
}

impl std::str::FromStr for Bench {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "smooth" => Ok(Bench::Smooth),
            "lshape" | "l-shape" => Ok(Bench::LShape),
            other => Err(Error::InvalidConfig(format!("unknown benchmark `{other}`"))),
        }
    }
}

impl Bench {
    pub fn name(self) -> &'static str {
        match self {
            Bench::Smooth => "smooth",
            Bench::LShape => "lshape",
        }
    }

    pub fn exact(self) -> ExactSolution {
        match self {
            Bench::Smooth => manufactured_smooth_2d(),
            Bench::LShape => lshape_singular(),
        }
    }
}

/// Fully resolved command: defaults filled in and invariants checked.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    pub bench: Bench,
    /// One method, or several for a Rayleigh sweep.
    pub methods: Vec<Method>,
    /// Refinement levels of a convergence study.
    pub levels: Vec<usize>,
    /// Cells per unit length for single runs.
    pub n: usize,
    /// One value, or the sweep values.
    pub ra: Vec<f64>,
    pub pr: f64,
    pub kappa: f64,
    pub b3: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub heating: Heating,
    pub out: PathBuf,
    /// Fill the `seconds` column of study tables.
    pub timing: bool,
}

impl RunSpec {
    pub fn method(&self) -> Method {
        self.methods[0]
    }
}

#[derive(Parser, Debug)]
#[command(name = "imhd", version, about = "Thermally coupled inductionless MHD solver")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Mesh-refinement study against a closed-form solution.
    Convergence(Flags),
    /// Single solve of a closed-form benchmark.
    Run(Flags),
    /// Iteration robustness over Rayleigh numbers on the smooth benchmark.
    SweepRa(Flags),
    /// Differentially heated cavity.
    Cavity(Flags),
    /// Layer heated from below.
    Benard(Flags),
}

fn method_arg(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn heating_arg(s: &str) -> std::result::Result<Heating, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn bench_arg(s: &str) -> std::result::Result<Bench, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Flat key=value file; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// smooth | lshape
    #[arg(long, value_parser = bench_arg)]
    bench: Option<Bench>,
    /// stokes | newton | oseen
    #[arg(long, value_parser = method_arg)]
    method: Option<Method>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    ra: Option<Vec<f64>>,
    #[arg(long)]
    pr: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    b3: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
    /// uniform | sinusoidal
    #[arg(long, value_parser = heating_arg)]
    heating: Option<Heating>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    timing: bool,
}

fn list<T: std::str::FromStr>(kv: &KeyValues, key: &str) -> Result<Option<Vec<T>>>
where
    T::Err: std::fmt::Display,
{
    let Some(v) = kv.get(key) else { return Ok(None) };
    let line = kv.line(key).unwrap_or(0);
    v.split(',')
        .map(|s| s.trim().parse().map_err(|e| Error::Parse { line, msg: format!("`{key}`: {e}") }))
        .collect::<Result<Vec<T>>>()
        .map(Some)
}

const CONFIG_KEYS: [&str; 14] = [
    "bench", "method", "n", "levels", "ra", "pr", "kappa", "b3", "tol", "max_iter", "max-iter", "heating", "out",
    "timing",
];

impl Flags {
    /// Fills unset flags from a config file.
    fn merge(&mut self, kv: &KeyValues) -> Result<()> {
        for (k, _) in kv.iter() {
            if !CONFIG_KEYS.contains(&k) {
                return Err(Error::Parse { line: kv.line(k).unwrap_or(0), msg: format!("unknown key `{k}`") });
            }
        }
        fn keep<T>(slot: &mut Option<T>, v: Option<T>) {
            if slot.is_none() {
                *slot = v;
            }
        }
        keep(&mut self.bench, kv.parse("bench")?);
        keep(&mut self.method, kv.parse("method")?);
        keep(&mut self.n, kv.parse("n")?);
        keep(&mut self.levels, list(kv, "levels")?);
        keep(&mut self.ra, list(kv, "ra")?);
        keep(&mut self.pr, kv.parse("pr")?);
        keep(&mut self.kappa, kv.parse("kappa")?);
        keep(&mut self.b3, kv.parse("b3")?);
        keep(&mut self.tol, kv.parse("tol")?);
        keep(&mut self.max_iter, kv.parse("max_iter")?);
        keep(&mut self.max_iter, kv.parse("max-iter")?);
        keep(&mut self.heating, kv.parse("heating")?);
        keep(&mut self.out, kv.parse("out")?);
        self.timing |= kv.parse::<bool>("timing")?.unwrap_or(false);
        Ok(())
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

fn resolve(command: Command, f: Flags) -> Result<RunSpec> {
    use Command::*;
    let defaults = ProblemConfig::default();
    let only = |set: bool, flag: &str, allowed: &[Command]| {
        if set && !allowed.contains(&command) {
            usage(format!("--{flag} does not apply to `{}`", command.name()))
        } else {
            Ok(())
        }
    };
    only(f.bench.is_some(), "bench", &[Convergence, Run])?;
    only(f.levels.is_some(), "levels", &[Convergence])?;
    only(f.n.is_some(), "n", &[Run, SweepRa, Cavity, Benard])?;
    only(f.heating.is_some(), "heating", &[Benard])?;

    let bench = f.bench.unwrap_or(Bench::Smooth);
    if command == SweepRa && bench != Bench::Smooth {
        return usage("the Rayleigh sweep runs on the smooth benchmark");
    }
    let methods = match (f.method, command) {
        (Some(m), _) => vec![m],
        (None, SweepRa) => Method::ALL.to_vec(),
        (None, Cavity) => vec![Method::Newton],
        (None, _) => vec![Method::Oseen],
    };
    let ra = match (f.ra, command) {
        (Some(v), _) => v,
        (None, SweepRa) => DEFAULT_SWEEP.to_vec(),
        (None, Cavity) => vec![1e3],
        (None, Benard) => vec![3e3],
        (None, _) => vec![1.0],
    };
    if ra.is_empty() || (command != SweepRa && ra.len() != 1) {
        return usage(format!("`{}` takes exactly one --ra value", command.name()));
    }
    let spec = RunSpec {
        command,
        bench,
        methods,
        levels: f.levels.unwrap_or_else(|| DEFAULT_LEVELS.to_vec()),
        n: f.n.unwrap_or(match command {
            Run => 16,
            Benard => 20,
            _ => 32,
        }),
        ra,
        pr: f.pr.unwrap_or(if command == Cavity { 0.71 } else { 1.0 }),
        kappa: f.kappa.unwrap_or(1.0),
        b3: f.b3.unwrap_or(1.0),
        tol: f.tol.unwrap_or(defaults.tol),
        max_iter: f.max_iter.unwrap_or(defaults.max_iter),
        heating: f.heating.unwrap_or(Heating::Uniform),
        out: f.out.unwrap_or_else(|| PathBuf::from("out")),
        timing: f.timing,
    };
    check(&spec)?;
    Ok(spec)
}

fn check(s: &RunSpec) -> Result<()> {
    if s.command == Command::Convergence {
        if s.levels.len() < 2 {
            return usage("a convergence study needs at least two levels");
        }
        if s.levels.contains(&0) {
            return usage("levels must be positive");
        }
    }
    if s.n == 0 {
        return usage("--n must be positive");
    }
    let positive_ra = matches!(s.command, Command::Cavity | Command::Benard);
    for &ra in &s.ra {
        if !ra.is_finite() || ra < 0.0 || (positive_ra && ra == 0.0) {
            return usage(format!("invalid Rayleigh number {ra}"));
        }
    }
    let cfg = ProblemConfig {
        pr: s.pr,
        kappa: s.kappa,
        b3: s.b3,
        tol: s.tol,
        max_iter: s.max_iter,
        ..ProblemConfig::default()
    };
    cfg.validate().map_err(|e| Error::Usage(e.to_string()))
}

/// Parses `argv` (program name first). Help and version requests come back
/// as [`Error::Help`].
pub fn parse_cli<I, T>(argv: I) -> Result<RunSpec>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Error::Help(e.render().to_string()),
            _ => Error::Usage(e.render().to_string().trim_start_matches("error: ").to_string()),
        }
    })?;
    let (command, mut flags) = match cli.command {
        Sub::Convergence(f) => (Command::Convergence, f),
        Sub::Run(f) => (Command::Run, f),
        Sub::SweepRa(f) => (Command::SweepRa, f),
        Sub::Cavity(f) => (Command::Cavity, f),
        Sub::Benard(f) => (Command::Benard, f),
    };
    if let Some(path) = flags.config.clone() {
        let text = std::fs::read_to_string(&path)?;
        flags.merge(&parse_key_values(&text)?)?;
    }
    resolve(command, flags)
}

/// What a command produced.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    /// Every run and level converged.
    pub converged: bool,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    fn write(&mut self, path: PathBuf, text: &str) -> Result<()> {
        std::fs::write(&path, text)?;
        self.files.push(path);
        Ok(())
    }
}

fn tag(ra: f64) -> String {
    format!("{ra:e}")
}

fn smooth_config(spec: &RunSpec, exact: &ExactSolution, method: Method) -> ProblemConfig {
    ProblemConfig { tol: spec.tol, max_iter: spec.max_iter, ..exact.config(method) }
}

fn with_iteration(spec: &RunSpec, cfg: ProblemConfig) -> ProblemConfig {
    ProblemConfig {
        pr: spec.pr,
        kappa: spec.kappa,
        b3: spec.b3,
        method: spec.method(),
        tol: spec.tol,
        max_iter: spec.max_iter,
        ..cfg
    }
}

fn solve(mesh: Mesh, cfg: &ProblemConfig) -> Result<(FeSystem, crate::fem::FieldSolution, SolveReport)> {
    let sys = FeSystem::new(mesh, cfg.boundary_mode, &cfg.temperature_walls)?;
    let (sol, rep) = run(&sys, cfg)?;
    Ok((sys, sol, rep))
}

fn summary(label: &str, rep: &SolveReport) {
    let last = rep.history.last().map_or(f64::NAN, |r| r.rel_diff);
    println!("{label}: {} after {} iterations (rel diff {last:.3e})", rep.status.name(), rep.iterations);
}

/// Runs the command and writes its files into `spec.out`, creating it if needed.
pub fn execute(spec: &RunSpec) -> Result<Outcome> {
    std::fs::create_dir_all(&spec.out)?;
    let out = &spec.out;
    let mut o = Outcome { converged: true, files: Vec::new() };
    match spec.command {
        Command::Convergence => {
            let exact = spec.bench.exact().with_params(spec.pr, spec.ra[0], spec.kappa, spec.b3);
            let table = convergence_study_with(&exact, &smooth_config(spec, &exact, spec.method()), &spec.levels)?;
            o.converged = table.levels.iter().all(|l| l.report.is_some());
            for l in &table.levels {
                let status = l.report.as_ref().map_or_else(
                    || l.failure.clone().unwrap_or_default(),
                    |r| format!("converged, {} iterations", r.iterations),
                );
                println!("n = {}: {status}", l.n);
            }
            let name = format!("convergence_{}_{}.csv", spec.bench.name(), spec.method().name());
            o.write(out.join(name), &table.to_csv(spec.timing))?;
        }
        Command::Run => {
            let exact = spec.bench.exact().with_params(spec.pr, spec.ra[0], spec.kappa, spec.b3);
            let cfg = smooth_config(spec, &exact, spec.method());
            let (sys, sol, rep) = solve(exact.mesh(spec.n)?, &cfg)?;
            let stem = format!("run_{}_{}_n{}", spec.bench.name(), spec.method().name(), spec.n);
            summary(&stem, &rep);
            o.converged = rep.status == SolveStatus::Converged;
            let mut r = error_norms(&sol, &exact, &sys);
            r.iterations = rep.iterations;
            r.seconds = rep.seconds;
            let level = StudyLevel { n: spec.n, h: r.h, status: Some(rep.status), report: Some(r), failure: None };
            let table = StudyTable { levels: vec![level], rates: vec![None] };
            o.write(out.join(format!("{stem}_errors.csv")), &table.to_csv(spec.timing))?;
            o.write(out.join(format!("{stem}_history.csv")), &history_csv(&rep))?;
            vtk(&mut o, out.join(format!("{stem}.vtk")), &sol, &sys)?;
        }
        Command::SweepRa => {
            let mesh = manufactured_smooth_2d().mesh(spec.n)?;
            let mut table = String::from(SWEEP_HEADER);
            table.push('\n');
            for &m in &spec.methods {
                for &ra in &spec.ra {
                    let exact = manufactured_smooth_2d().with_params(spec.pr, ra, spec.kappa, spec.b3);
                    let (_, _, rep) = solve(mesh.clone(), &smooth_config(spec, &exact, m))?;
                    let stem = format!("sweep_{}_ra{}", m.name(), tag(ra));
                    summary(&stem, &rep);
                    o.converged &= rep.status == SolveStatus::Converged;
                    let last = rep.history.last().map_or(f64::NAN, |r| r.rel_diff);
                    let _ =
                        writeln!(table, "{},{},{},{},{:e}", tag(ra), m.name(), rep.status.name(), rep.iterations, last);
                    o.write(out.join(format!("{stem}_history.csv")), &history_csv(&rep))?;
                }
            }
            o.write(out.join("sweep_ra.csv"), &table)?;
        }
        Command::Cavity => {
            let cfg = with_iteration(spec, cavity_setup(spec.ra[0])?);
            let (sys, sol, rep) = solve(cavity_mesh(spec.n)?, &cfg)?;
            let stem = format!("cavity_ra{}", tag(spec.ra[0]));
            summary(&stem, &rep);
            o.converged = rep.status == SolveStatus::Converged;
            o.write(out.join(format!("{stem}_history.csv")), &history_csv(&rep))?;
            o.write(out.join(format!("{stem}_profiles.csv")), &profiles_csv(&midline_profiles(&sol, &sys)?))?;
            vtk(&mut o, out.join(format!("{stem}.vtk")), &sol, &sys)?;
        }
        Command::Benard => {
            let heating = match spec.heating {
                Heating::Uniform => "uniform",
                Heating::Sinusoidal => "sinusoidal",
            };
            let cfg = with_iteration(spec, benard_setup(spec.ra[0], spec.heating)?);
            let (sys, sol, rep) = solve(benard_mesh(spec.n)?, &cfg)?;
            let stem = format!("benard_{heating}_ra{}", tag(spec.ra[0]));
            summary(&stem, &rep);
            o.converged = rep.status == SolveStatus::Converged;
            o.write(out.join(format!("{stem}_history.csv")), &history_csv(&rep))?;
            vtk(&mut o, out.join(format!("{stem}.vtk")), &sol, &sys)?;
        }
    }
    Ok(o)
}

fn vtk(o: &mut Outcome, path: PathBuf, sol: &crate::fem::FieldSolution, sys: &FeSystem) -> Result<()> {
    write_vtk(sol, sys, &path)?;
    o.files.push(path);
    Ok(())
}

/// Exit code: 0 on success, 2 when an iteration failed to converge, 1 on errors.
pub fn run_command(spec: &RunSpec) -> i32 {
    match execute(spec) {
        Ok(o) if o.converged => 0,
        Ok(_) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
