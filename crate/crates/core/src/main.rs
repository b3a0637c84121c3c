use clap::{Args, Parser, Subcommand};
use convineq::autocorr::{autocorrelation_grid, GridMethod};
use convineq::certificates;
use convineq::combinatorics::{
    beta_g, density_profile, gamma_g, heuristic_gamma, write_profile_csv, BasisInstance,
    BasisSolution, Certificate,
};
use convineq::functionals::{evaluate, FunctionalId, RatioReport};
use convineq::manifest::RunManifest;
use convineq::optimizer::{objective, optimize, FamilyId, ParamFamily, SearchConfig, SearchMethod, Sense};
use convineq::quad::{Interval, QuadratureConfig};
use convineq::spec::FunctionSpec;
use convineq::{Error, Result};
use std::path::{Path, PathBuf};
use std::time::Instant;

const EXIT_VERIFY_FAIL: i32 = 1;
const EXIT_INPUT_ERROR: i32 = 2;
const EXIT_BUDGET: i32 = 3;

#[derive(Parser)]
#[command(name = "convineq", version, about = "Convolution-inequality toolkit: functionals, certificates, searches, and basis solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonFlags {
    /// Absolute quadrature tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol_abs: f64,
    /// Relative quadrature tolerance
    #[arg(long, default_value_t = 1e-8)]
    tol_rel: f64,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

impl CommonFlags {
    fn quad(&self) -> Result<QuadratureConfig> {
        let cfg = QuadratureConfig {
            abs_tol: self.tol_abs,
            rel_tol: self.tol_rel,
            ..QuadratureConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the full certificate suite and write certificates.csv
    Verify {
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Evaluate a ratio functional on a function spec file
    Functional {
        #[command(flatten)]
        common: CommonFlags,
        /// Function spec JSON file
        #[arg(long)]
        spec: PathBuf,
        /// Functional: thm1 | thm2 | sidon_eq1 | holder | prop3_distance
        #[arg(long)]
        id: String,
        /// Report format
        #[arg(long, default_value = "jsonl")]
        format: String,
    },
    /// Sample the autocorrelation g(t) on a uniform grid
    Autocorr {
        #[command(flatten)]
        common: CommonFlags,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        t_lo: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t_hi: f64,
        /// Number of grid points
        #[arg(long, default_value_t = 201)]
        grid: usize,
        /// direct | fast_transform
        #[arg(long, default_value = "direct")]
        method: String,
    },
    /// Local search over a parametric family
    Optimize {
        #[command(flatten)]
        common: CommonFlags,
        /// Functional to optimize
        #[arg(long)]
        id: String,
        /// Family: gaussian_poly_K | arcsine_mixture_M | indicator_mixture_M
        #[arg(long)]
        family: String,
        /// Comma-separated start parameters
        #[arg(long)]
        start: String,
        /// coordinate_descent | simplex
        #[arg(long, default_value = "coordinate_descent")]
        method: String,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Minimize instead of maximize
        #[arg(long)]
        minimize: bool,
    },
    /// Solve a difference-basis (gamma) or g-Sidon (beta) instance
    Bases {
        #[command(flatten)]
        common: CommonFlags,
        /// gamma | beta
        #[arg(long)]
        mode: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        g: usize,
        /// Max element cap for gamma (default 3n)
        #[arg(long)]
        cap: Option<usize>,
        /// Search-node budget
        #[arg(long, default_value_t = 1u64 << 32)]
        budget: u64,
        /// Use simulated annealing (gamma only) with this set size
        #[arg(long)]
        heuristic: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Density profile of basis-solution files
    Profile {
        #[command(flatten)]
        common: CommonFlags,
        #[arg(long, default_value_t = 32)]
        bins: usize,
        /// Solution JSON files written by the bases command
        files: Vec<PathBuf>,
    },
}

fn write_file(path: &Path, bytes: &[u8], manifest: &mut RunManifest) -> Result<()> {
    std::fs::write(path, bytes)?;
    manifest.record_output(path)?;
    Ok(())
}

fn finish(mut manifest: RunManifest, out_dir: &Path, started: Instant) -> Result<()> {
    manifest.wall_clock_secs = started.elapsed().as_secs_f64();
    manifest.save(&out_dir.join("run_manifest.json"))
}

fn cmd_verify(common: &CommonFlags, args: &[String]) -> Result<i32> {
    let started = Instant::now();
    std::fs::create_dir_all(&common.out)?;
    let mut rows = certificates::default_suite()?;
    // test hook: force a failing row to exercise the nonzero exit path
    if std::env::var("CONVINEQ_INJECT_FAIL").is_ok() {
        if let Some(r) = rows.first_mut() {
            r.pass = false;
            r.note = format!("{} [injected failure]", r.note);
        }
    }
    let mut csv = Vec::new();
    certificates::write_csv(&rows, &mut csv)?;
    let mut manifest =
        RunManifest::new("verify", args, serde_json::json!({"tol_abs": common.tol_abs}));
    write_file(&common.out.join("certificates.csv"), &csv, &mut manifest)?;
    let mut all_pass = true;
    for r in &rows {
        println!(
            "{:32} target {:>13.6} computed {:>13.6} {}",
            r.name,
            r.target,
            r.computed,
            if r.pass { "PASS" } else { "FAIL" }
        );
        all_pass &= r.pass;
    }
    finish(manifest, &common.out, started)?;
    Ok(if all_pass { 0 } else { EXIT_VERIFY_FAIL })
}

fn cmd_functional(
    common: &CommonFlags,
    spec_path: &Path,
    id: &str,
    format: &str,
    args: &[String],
) -> Result<i32> {
    let started = Instant::now();
    std::fs::create_dir_all(&common.out)?;
    let id: FunctionalId = id.parse()?;
    let spec = FunctionSpec::load(spec_path)?;
    let cfg = common.quad()?;
    let report = evaluate(id, &spec, &cfg)?;
    let mut manifest = RunManifest::new(
        "functional",
        args,
        serde_json::json!({"id": id.to_string(), "tol_abs": common.tol_abs, "tol_rel": common.tol_rel}),
    );
    manifest.record_input(spec_path)?;
    let (name, bytes) = match format {
        "csv" => (
            "report.csv",
            format!("{}\n{}\n", RatioReport::csv_header(), report.csv_row()).into_bytes(),
        ),
        "jsonl" => ("report.jsonl", format!("{}\n", serde_json::to_string(&report)?).into_bytes()),
        other => return Err(Error::Parse(format!("unknown format '{other}'"))),
    };
    write_file(&common.out.join(name), &bytes, &mut manifest)?;
    println!("{} = {:.6} (error estimate {:.6e})", id, report.value, report.error_estimate);
    finish(manifest, &common.out, started)?;
    Ok(0)
}

fn cmd_autocorr(
    common: &CommonFlags,
    spec_path: &Path,
    t_lo: f64,
    t_hi: f64,
    grid: usize,
    method: &str,
    args: &[String],
) -> Result<i32> {
    let started = Instant::now();
    std::fs::create_dir_all(&common.out)?;
    let method: GridMethod = method.parse()?;
    let spec = FunctionSpec::load(spec_path)?;
    let cfg = common.quad()?;
    let curve = autocorrelation_grid(&spec, Interval::new(t_lo, t_hi)?, grid, method, &cfg)?;
    for w in &curve.warnings {
        eprintln!("warning: {w}");
    }
    let mut manifest = RunManifest::new(
        "autocorr",
        args,
        serde_json::json!({"t_lo": t_lo, "t_hi": t_hi, "grid": grid}),
    );
    manifest.record_input(spec_path)?;
    let mut csv = Vec::new();
    curve.write_csv(&mut csv)?;
    write_file(&common.out.join("autocorr.csv"), &csv, &mut manifest)?;
    let finite = curve.g_values.iter().filter(|v| v.is_finite()).count();
    println!("{} samples ({} finite) written to autocorr.csv", curve.t_values.len(), finite);
    finish(manifest, &common.out, started)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_optimize(
    common: &CommonFlags,
    id: &str,
    family: &str,
    start: &str,
    method: &str,
    step: f64,
    budget: usize,
    seed: u64,
    minimize: bool,
    args: &[String],
) -> Result<i32> {
    let started = Instant::now();
    std::fs::create_dir_all(&common.out)?;
    let id: FunctionalId = id.parse()?;
    let family_id: FamilyId = family.parse()?;
    let family = ParamFamily::new(family_id);
    let theta: Vec<f64> = start
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad start value '{s}'"))))
        .collect::<Result<_>>()?;
    let method: SearchMethod = method.parse()?;
    let quad = common.quad()?;
    let cfg = SearchConfig {
        method,
        sense: if minimize { Sense::Minimize } else { Sense::Maximize },
        initial_step: step,
        budget,
        seed,
        ..SearchConfig::default()
    };
    let obj = objective(id, &family, &quad);
    let trace = optimize(&obj, &theta, &cfg)?;
    let mut manifest = RunManifest::new(
        "optimize",
        args,
        serde_json::json!({"id": id.to_string(), "family": family_id.to_string(), "config": cfg}),
    );
    let mut csv = Vec::new();
    trace.write_csv(&mut csv)?;
    write_file(&common.out.join("trace.csv"), &csv, &mut manifest)?;
    let best_spec = family.build(&trace.best_theta)?;
    write_file(
        &common.out.join("best_spec.json"),
        best_spec.to_json().as_bytes(),
        &mut manifest,
    )?;
    println!(
        "best {} = {:.6} after {} evaluations",
        id, trace.best_value, trace.evaluations
    );
    finish(manifest, &common.out, started)?;
    Ok(0)
}

#[derive(serde::Serialize)]
struct SolutionFile<'a> {
    #[serde(flatten)]
    solution: &'a BasisSolution,
    size: usize,
}

#[allow(clippy::too_many_arguments)]
fn cmd_bases(
    common: &CommonFlags,
    mode: &str,
    n: usize,
    g: usize,
    cap: Option<usize>,
    budget: u64,
    heuristic: Option<usize>,
    seed: u64,
    args: &[String],
) -> Result<i32> {
    let started = Instant::now();
    std::fs::create_dir_all(&common.out)?;
    let inst = BasisInstance::new(n, g)?;
    let cap = cap.unwrap_or(3 * n);
    let mode = match mode {
        "gamma" | "difference" => "difference",
        "beta" | "sum" | "sidon" => "sum",
        other => return Err(Error::Parse(format!("unknown mode '{other}'"))),
    };
    let solution = match (mode, heuristic) {
        ("difference", None) => gamma_g(&inst, cap, budget)?,
        ("difference", Some(size)) => heuristic_gamma(&inst, size, cap, seed, budget)?
            .ok_or_else(|| Error::Infeasible("annealing found no feasible set".into()))?,
        ("sum", None) => beta_g(&inst, budget)?,
        _ => return Err(Error::InvalidSpec("heuristic mode applies to difference bases only".into())),
    };
    solution.validate()?;
    let mut manifest = RunManifest::new(
        "bases",
        args,
        serde_json::json!({"mode": mode, "n": n, "g": g, "cap": cap, "budget": budget, "seed": seed}),
    );
    let file = SolutionFile { solution: &solution, size: solution.size() };
    write_file(
        &common.out.join("solution.json"),
        serde_json::to_string_pretty(&file)?.as_bytes(),
        &mut manifest,
    )?;
    let cert = match solution.certified {
        Certificate::ExactOptimal => "exact_optimal",
        Certificate::FeasibleOnly => "feasible_only",
    };
    println!(
        "{mode} n={n} g={g} size={} scaled={:.6} certificate={cert}",
        solution.size(),
        solution.size() as f64 / (g as f64 * n as f64).sqrt()
    );
    finish(manifest, &common.out, started)?;
    Ok(if solution.certified == Certificate::FeasibleOnly && heuristic.is_none() {
        EXIT_BUDGET
    } else {
        0
    })
}

fn cmd_profile(common: &CommonFlags, bins: usize, files: &[PathBuf], args: &[String]) -> Result<i32> {
    let started = Instant::now();
    std::fs::create_dir_all(&common.out)?;
    if files.is_empty() {
        return Err(Error::InvalidSpec("profile needs at least one solution file".into()));
    }
    let mut manifest = RunManifest::new("profile", args, serde_json::json!({"bins": bins}));
    let mut solutions = Vec::new();
    for f in files {
        manifest.record_input(f)?;
        let text = std::fs::read_to_string(f)?;
        let sol: BasisSolution = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("{}: {e}", f.display())))?;
        sol.validate()?;
        solutions.push(sol);
    }
    let profile = density_profile(&solutions, bins)?;
    let mut csv = Vec::new();
    write_profile_csv(&profile, &mut csv)?;
    write_file(&common.out.join("profile.csv"), &csv, &mut manifest)?;
    println!(
        "boundary exponent {:.6} (fit residual {:.6}) over {} solutions",
        profile.boundary_exponent,
        profile.fit_residual,
        solutions.len()
    );
    finish(manifest, &common.out, started)?;
    Ok(0)
}

fn run() -> Result<i32> {
    if let Ok(workers) = std::env::var("CONVINEQ_WORKERS") {
        let count: usize = workers
            .parse()
            .map_err(|_| Error::Parse(format!("bad CONVINEQ_WORKERS value '{workers}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(count)
            .build_global()
            .ok();
    }
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match &cli.command {
        Command::Verify { common } => cmd_verify(common, &args),
        Command::Functional { common, spec, id, format } => {
            cmd_functional(common, spec, id, format, &args)
        }
        Command::Autocorr { common, spec, t_lo, t_hi, grid, method } => {
            cmd_autocorr(common, spec, *t_lo, *t_hi, *grid, method, &args)
        }
        Command::Optimize { common, id, family, start, method, step, budget, seed, minimize } => {
            cmd_optimize(common, id, family, start, method, *step, *budget, *seed, *minimize, &args)
        }
        Command::Bases { common, mode, n, g, cap, budget, heuristic, seed } => {
            cmd_bases(common, mode, *n, *g, *cap, *budget, *heuristic, *seed, &args)
        }
        Command::Profile { common, bins, files } => cmd_profile(common, *bins, files, &args),
    }
}

fn main() {
    match run() {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(EXIT_INPUT_ERROR);
        }
    }
}
