//! Command-line front end: `sweep`, `point`, `validate`, `materials`.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! failure (a sweep point or validation that did not converge). Set
//! `CASIMIR_LOG=info` (or `debug`) for progress diagnostics on stderr;
//! CSV output alone goes to stdout.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use casimir_spring::config::{self, parse_config, SweepSpec};
use casimir_spring::constants::ev_to_angular_frequency;
use casimir_spring::error::Error;
use casimir_spring::lifshitz::{HalfSpacePair, LifshitzEvaluator, LifshitzResult};
use casimir_spring::materials::{Response, BUILTIN_NAMES};
use casimir_spring::pfa::{
    casimir_force_cap_only, membrane_spring_constant, spring_constant_cap_only,
    spring_constant_full, spring_constant_perfect_conductor, SpringResult,
};
use casimir_spring::sweep::{emit_csv, run_sweep, timing_summary};
use casimir_spring::validate::{default_validation_points, validate_engine};
use casimir_spring::Result;

#[derive(Parser)]
#[command(
    name = "casimir",
    version,
    about = "Thermal Casimir spring constants for a re-entrant cavity"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep k_C over a gap grid and emit CSV.
    Sweep(SweepArgs),
    /// Evaluate everything at a single gap.
    Point(PointArgs),
    /// Compare the engine against the brute-force reference and the
    /// force/gradient derivative chains.
    Validate(ValidateArgs),
    /// List the built-in materials.
    Materials,
}

#[derive(Args)]
struct SweepArgs {
    /// Config file (flat key = value); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

/// Flag overrides; each beats the config file, which beats the default.
/// Names and units mirror the config keys.
#[derive(Args)]
struct Overrides {
    #[arg(long, value_name = "UM")]
    gap_min_um: Option<f64>,
    #[arg(long, value_name = "UM")]
    gap_max_um: Option<f64>,
    #[arg(long)]
    n_points: Option<u32>,
    /// linear or log.
    #[arg(long)]
    spacing: Option<String>,
    /// Comma-separated material names.
    #[arg(long)]
    coatings: Option<String>,
    #[arg(long)]
    post_material: Option<String>,
    #[arg(long, value_name = "K")]
    temperature_k: Option<f64>,
    #[arg(long, value_name = "UM")]
    r0_um: Option<f64>,
    #[arg(long, value_name = "UM")]
    r1_um: Option<f64>,
    #[arg(long, value_name = "UM")]
    h_um: Option<f64>,
    /// cap_only or full.
    #[arg(long)]
    formula: Option<String>,
    #[arg(long, value_name = "BOOL")]
    include_pc_curve: Option<bool>,
    #[arg(long)]
    quad_rel_tol: Option<f64>,
    #[arg(long)]
    matsubara_rel_tol: Option<f64>,
    #[arg(long)]
    l_max_cap: Option<u32>,
    /// Worker threads; 0 = auto.
    #[arg(long)]
    workers: Option<u32>,
}

impl Overrides {
    fn apply(&self, spec: &mut SweepSpec) -> Result<()> {
        if let Some(v) = self.gap_min_um {
            spec.gap_min = v * 1e-6;
        }
        if let Some(v) = self.gap_max_um {
            spec.gap_max = v * 1e-6;
        }
        if let Some(v) = self.n_points {
            spec.n_points = v;
        }
        if let Some(v) = &self.spacing {
            spec.spacing = config::parse_spacing(v)?;
        }
        if let Some(v) = &self.coatings {
            let mut coatings = Vec::new();
            for name in v.split(',') {
                let name = name.trim();
                if !name.is_empty() {
                    coatings.push(spec.resolve_material(name)?);
                }
            }
            spec.coatings = coatings;
        }
        if let Some(v) = &self.post_material {
            spec.post_material = spec.resolve_material(v)?;
        }
        if let Some(v) = self.temperature_k {
            spec.temperature = v;
        }
        if let Some(v) = self.r0_um {
            spec.geometry.r0 = v * 1e-6;
        }
        if let Some(v) = self.r1_um {
            spec.geometry.r1 = v * 1e-6;
        }
        if let Some(v) = self.h_um {
            spec.geometry.h = v * 1e-6;
        }
        if let Some(v) = &self.formula {
            spec.formula = config::parse_formula(v)?;
        }
        if let Some(v) = self.include_pc_curve {
            spec.include_pc_curve = v;
        }
        if let Some(v) = self.quad_rel_tol {
            spec.engine.quad_rel_tol = v;
        }
        if let Some(v) = self.matsubara_rel_tol {
            spec.engine.matsubara_rel_tol = v;
        }
        if let Some(v) = self.l_max_cap {
            spec.engine.l_max_cap = v;
        }
        if let Some(v) = self.workers {
            spec.workers = v;
        }
        spec.validate()
    }
}

#[derive(Args)]
struct PointArgs {
    /// Gap between post cap and membrane coating, micrometres.
    #[arg(long, value_name = "UM")]
    gap_um: f64,
    #[arg(long, default_value = "Au")]
    coating: String,
    #[arg(long, default_value = "Al")]
    post: String,
    #[arg(long, value_name = "K", default_value_t = 300.0)]
    temperature_k: f64,
    #[arg(long, value_name = "UM", default_value_t = 200.0)]
    r0_um: f64,
    #[arg(long, value_name = "UM", default_value_t = 300.0)]
    r1_um: f64,
    #[arg(long, value_name = "UM", default_value_t = 500.0)]
    h_um: f64,
    /// cap_only or full.
    #[arg(long, default_value = "cap_only")]
    formula: String,
    #[arg(long)]
    quad_rel_tol: Option<f64>,
    #[arg(long)]
    matsubara_rel_tol: Option<f64>,
    #[arg(long)]
    l_max_cap: Option<u32>,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ValidateArgs {
    /// Maximum allowed relative deviation.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Serialize)]
struct PointOutput {
    gap_m: f64,
    temperature_k: f64,
    post: String,
    coating: String,
    energy_per_area: LifshitzResult,
    pressure: LifshitzResult,
    pressure_gradient: LifshitzResult,
    cap_force_n: LifshitzResult,
    spring: SpringResult,
    spring_pc: SpringResult,
    membrane_k_s: Option<f64>,
    ratio_k_s: Option<f64>,
}

/// Write to stdout, treating a closed pipe (e.g. `casimir ... | head`) as
/// normal termination instead of a panic.
fn print_stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            panic!("stdout: {e}");
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CASIMIR_LOG", "warn"))
        .format_timestamp(None)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let run = match cli.cmd {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Point(args) => cmd_point(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Materials => cmd_materials(),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Convergence { .. } => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<u8> {
    let mut spec = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => SweepSpec::default(),
    };
    args.overrides.apply(&mut spec)?;

    let outcome = run_sweep(&spec)?;
    let csv = emit_csv(&spec, &outcome.rows);
    match &args.out {
        Some(path) => {
            fs::write(path, &csv)
                .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {} rows to {}", outcome.rows.len(), path.display());
        }
        None => print_stdout(&csv),
    }
    eprintln!("sweep: {}", timing_summary(&spec, &outcome));
    if outcome.n_failed > 0 {
        eprintln!(
            "sweep: {} cells failed to converge (NaN in CSV)",
            outcome.n_failed
        );
        return Ok(2);
    }
    Ok(0)
}

fn cmd_point(args: PointArgs) -> Result<u8> {
    let mut spec = SweepSpec::default();
    spec.geometry.r0 = args.r0_um * 1e-6;
    spec.geometry.r1 = args.r1_um * 1e-6;
    spec.geometry.h = args.h_um * 1e-6;
    spec.geometry.validate()?;
    if let Some(v) = args.quad_rel_tol {
        spec.engine.quad_rel_tol = v;
    }
    if let Some(v) = args.matsubara_rel_tol {
        spec.engine.matsubara_rel_tol = v;
    }
    if let Some(v) = args.l_max_cap {
        spec.engine.l_max_cap = v;
    }
    let formula = config::parse_formula(&args.formula)?;
    let coating = spec.resolve_material(&args.coating)?;
    let post = spec.resolve_material(&args.post)?;
    let x = args.gap_um * 1e-6;

    let ev = LifshitzEvaluator::new(
        HalfSpacePair::new(post.clone(), coating.clone()),
        args.temperature_k,
        spec.engine.clone(),
    )?;
    let energy = ev.energy_per_area(x)?;
    let pressure = ev.pressure(x)?;
    let gradient = ev.pressure_gradient(x)?;
    let cap_force = casimir_force_cap_only(&spec.geometry, &ev, x)?;
    let spring = match formula {
        config::SweepFormula::CapOnly => spring_constant_cap_only(&spec.geometry, &ev, x)?,
        config::SweepFormula::Full => spring_constant_full(&spec.geometry, &ev, x)?,
    };
    let spring_pc = spring_constant_perfect_conductor(&spec.geometry, x);
    let membrane_k_s = membrane_spring_constant(&coating.name);
    let out = PointOutput {
        gap_m: x,
        temperature_k: args.temperature_k,
        post: post.name.clone(),
        coating: coating.name.clone(),
        energy_per_area: energy,
        pressure,
        pressure_gradient: gradient,
        cap_force_n: cap_force,
        spring,
        spring_pc,
        membrane_k_s,
        ratio_k_s: membrane_k_s.map(|k_s| spring.k_c / k_s),
    };

    if args.json {
        print_stdout(&format!(
            "{}\n",
            serde_json::to_string_pretty(&out).expect("serialise")
        ));
        return Ok(0);
    }
    let mut buf = String::new();
    writeln!(
        buf,
        "{} coating over {} post, x = {:e} um, T = {} K",
        out.coating, out.post, args.gap_um, out.temperature_k
    )
    .expect("string write");
    for (label, unit, r) in [
        ("E/A  ", "J/m^2", &out.energy_per_area),
        ("F/A  ", "N/m^2", &out.pressure),
        ("F'/A ", "N/m^3", &out.pressure_gradient),
        ("F_cap", "N    ", &out.cap_force_n),
    ] {
        writeln!(
            buf,
            "  {label} = {:e} {unit} (est err {:.1e}, {} Matsubara terms, {} evals)",
            r.value, r.est_error, r.n_matsubara, r.n_evals
        )
        .expect("string write");
    }
    writeln!(
        buf,
        "  k_C ({}) = {:e} N/m (est err {:.1e})",
        out.spring.provenance.as_str(),
        out.spring.k_c,
        out.spring.est_error
    )
    .expect("string write");
    if formula == config::SweepFormula::Full {
        let b = &out.spring.breakdown;
        writeln!(buf, "    cap             = {:e} N/m", b.cap).expect("string write");
        writeln!(buf, "    sidewall force  = {:e} N/m", b.sidewall_force).expect("string write");
        writeln!(buf, "    sidewall energy = {:e} N/m", b.sidewall_energy).expect("string write");
    }
    writeln!(buf, "  k_C (ideal mirrors) = {:e} N/m", out.spring_pc.k_c).expect("string write");
    if let (Some(k_s), Some(ratio)) = (out.membrane_k_s, out.ratio_k_s) {
        writeln!(buf, "  k_C / k_S = {:e} (k_S = {k_s} N/m)", ratio).expect("string write");
    }
    print_stdout(&buf);
    Ok(0)
}

fn cmd_validate(args: ValidateArgs) -> Result<u8> {
    if !(args.tolerance > 0.0 && args.tolerance.is_finite()) {
        return Err(Error::Config(format!(
            "tolerance must be positive, got {:e}",
            args.tolerance
        )));
    }
    let points = default_validation_points();
    let report = validate_engine(&points, args.tolerance);
    if args.json {
        print_stdout(&format!(
            "{}\n",
            serde_json::to_string_pretty(&report).expect("serialise")
        ));
        return Ok(if report.pass { 0 } else { 2 });
    }
    let mut buf = String::new();
    writeln!(
        buf,
        "validate: {} points, tolerance {:e}",
        report.points.len(),
        report.tolerance
    )
    .expect("string write");
    for p in &report.points {
        writeln!(
            buf,
            "  x = {:e} m ({} | {}): energy {:.2e}, pressure {:.2e}, gradient {:.2e}",
            p.gap_m, p.side_1, p.side_2, p.energy_dev, p.pressure_dev, p.gradient_dev
        )
        .expect("string write");
    }
    writeln!(
        buf,
        "validate: max deviation {:.3e} {} tolerance {:e}: {}",
        report.max_deviation,
        if report.pass { "<" } else { ">=" },
        report.tolerance,
        if report.pass { "PASS" } else { "FAIL" }
    )
    .expect("string write");
    print_stdout(&buf);
    Ok(if report.pass { 0 } else { 2 })
}

fn cmd_materials() -> Result<u8> {
    let mut buf = String::from("built-in materials:\n");
    let ev = ev_to_angular_frequency(1.0)?;
    for name in BUILTIN_NAMES {
        let m = casimir_spring::materials::builtin_material(name)?;
        match m.response {
            Response::Drude(p) => {
                write!(
                    buf,
                    "  {:<8} Drude   Omega = {:>4} eV   gamma = {:>5} eV   delta = {:.2} nm",
                    m.name,
                    p.plasma_freq / ev,
                    p.relaxation_freq / ev,
                    m.penetration_depth()? * 1e9
                )
                .expect("string write");
                if let Some(k_s) = membrane_spring_constant(&m.name) {
                    write!(buf, "   k_S = {k_s} N/m").expect("string write");
                }
                buf.push('\n');
            }
            Response::PerfectConductor => {
                writeln!(buf, "  {:<8} perfect conductor (ideal mirror)", m.name)
                    .expect("string write");
            }
            Response::Vacuum => {
                writeln!(buf, "  {:<8} vacuum (no interaction)", m.name).expect("string write");
            }
        }
    }
    print_stdout(&buf);
    Ok(0)
}
