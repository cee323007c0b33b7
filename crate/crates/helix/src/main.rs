//! `helix` — synthesize, analyze, classify, and verify space curves through
//! the alternative moving frame.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/input error,
//! 3 I/O error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use helix_curves::alt_frame::{alt_frame_from_frenet, AltFrameData};
use helix_curves::classify::classify_all;
use helix_curves::curve::{validate_unit_speed, CurveSamples, IntrinsicProfile, ProfileKind, DEFAULT_SPEED_TOL};
use helix_curves::frenet::{frenet_from_samples, integrate_profile, FrenetApparatus};
use helix_curves::indicatrix::{
    binormal_indicatrix, normal_indicatrix, sabban_frame, tangent_indicatrix, SphericalCurve,
};
use helix_curves::synthesis::profile_c_constant_precession;
use helix_curves::{io, verify, HelixError};

#[derive(Parser)]
#[command(name = "helix", version, about = "Space-curve analysis via the alternative moving frame")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Synthesize a curve from a named intrinsic-profile family or a CSV.
    Synth(SynthArgs),
    /// Extract κ, τ, H, σ, f, g from a sampled curve and summarize.
    Analyze(AnalyzeArgs),
    /// Run every detector on a sampled curve.
    Classify(ClassifyArgs),
    /// Emit a spherical image (tangent/normal/binormal) with intrinsics.
    Indicatrix(IndicatrixArgs),
    /// Run the theorem-check ledger.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    CircularHelix,
    ConstantPrecession,
    CConstantPrecession,
    FromProfileCsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Tangent,
    Normal,
    Binormal,
}

fn parse_span(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("span must be lo:hi, got `{s}`"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad span start `{lo}`"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad span end `{hi}`"))?;
    if !(lo < hi) {
        return Err(format!("span must have lo < hi, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum, env = "HELIX_FAMILY")]
    family: Family,
    /// Helix radius parameter a (circular-helix).
    #[arg(long, env = "HELIX_A", default_value_t = 1.0)]
    a: f64,
    /// Helix pitch parameter b (circular-helix).
    #[arg(long, env = "HELIX_B", default_value_t = 1.0)]
    b: f64,
    #[arg(long, env = "HELIX_W", default_value_t = 1.0)]
    w: f64,
    #[arg(long, env = "HELIX_MU", default_value_t = 0.5)]
    mu: f64,
    #[arg(long, env = "HELIX_C1", default_value_t = 0.0)]
    c1: f64,
    #[arg(long, env = "HELIX_C2", default_value_t = 1.0)]
    c2: f64,
    /// Integration constant θ0 of the harmonic-curvature angle.
    #[arg(long, env = "HELIX_THETA0")]
    theta0: Option<f64>,
    /// Arc-length span lo:hi; defaults to a family-specific guarded domain.
    #[arg(long, value_parser = parse_span, env = "HELIX_SPAN")]
    span: Option<(f64, f64)>,
    /// Integrator step.
    #[arg(long, env = "HELIX_H", default_value_t = 1e-3)]
    h: f64,
    /// Input profile CSV (family from-profile-csv).
    #[arg(long, env = "HELIX_INPUT")]
    input: Option<PathBuf>,
    /// Output directory for curve.csv, profile.csv, frames.csv.
    #[arg(long, env = "HELIX_OUTPUT", default_value = ".")]
    output: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long, env = "HELIX_INPUT")]
    input: PathBuf,
    /// Output JSON path; stdout when omitted.
    #[arg(long, env = "HELIX_OUTPUT")]
    output: Option<PathBuf>,
    /// Include the full per-sample profiles in the JSON.
    #[arg(long)]
    full: bool,
    #[arg(long, env = "HELIX_TOL_NUMERIC", default_value_t = helix_curves::classify::NUMERIC_TOL)]
    tol_numeric: f64,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, env = "HELIX_INPUT")]
    input: PathBuf,
    #[arg(long, env = "HELIX_OUTPUT")]
    output: Option<PathBuf>,
    #[arg(long, env = "HELIX_TOL_NUMERIC", default_value_t = helix_curves::classify::NUMERIC_TOL)]
    tol_numeric: f64,
}

#[derive(Args)]
struct IndicatrixArgs {
    #[arg(long, env = "HELIX_INPUT")]
    input: PathBuf,
    #[arg(long, value_enum, env = "HELIX_WHICH")]
    which: Which,
    /// Also compute the Sabban-frame geodesic curvature column.
    #[arg(long)]
    sabban: bool,
    /// Resample count for the Sabban route.
    #[arg(long, env = "HELIX_N", default_value_t = 2000)]
    n: usize,
    /// Output directory.
    #[arg(long, env = "HELIX_OUTPUT", default_value = ".")]
    output: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Restrict the grid to profiles whose name contains this substring.
    #[arg(long, env = "HELIX_FAMILY")]
    family: Option<String>,
    #[arg(long, env = "HELIX_TOL_ANALYTIC", default_value_t = helix_curves::classify::ANALYTIC_TOL)]
    tol_analytic: f64,
    #[arg(long, env = "HELIX_TOL_NUMERIC", default_value_t = helix_curves::classify::NUMERIC_TOL)]
    tol_numeric: f64,
    /// Add an intentionally corrupted profile whose check must fail.
    #[arg(long)]
    inject_fault: bool,
    /// Ledger JSON path; stdout lines only when omitted.
    #[arg(long, env = "HELIX_OUTPUT")]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Synth(args) => cmd_synth(args),
        Cmd::Analyze(args) => cmd_analyze(args),
        Cmd::Classify(args) => cmd_classify(args),
        Cmd::Indicatrix(args) => cmd_indicatrix(args),
        Cmd::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                HelixError::Io(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn extraction(curve: &CurveSamples) -> Result<(FrenetApparatus, AltFrameData), HelixError> {
    let app = frenet_from_samples(curve)?;
    let alt = alt_frame_from_frenet(&app)?;
    Ok((app, alt))
}

fn cmd_synth(args: SynthArgs) -> Result<ExitCode, HelixError> {
    let profile = match args.family {
        Family::CircularHelix => IntrinsicProfile::new(
            ProfileKind::CircularHelix { a: args.a, b: args.b },
            args.span.unwrap_or((0.0, 4.0 * std::f64::consts::PI)),
        )?,
        Family::ConstantPrecession => {
            let period = 2.0 * std::f64::consts::PI / args.mu.abs().max(f64::MIN_POSITIVE);
            let default_span = (0.02 * period, 0.98 * period);
            IntrinsicProfile::new(
                ProfileKind::ConstantPrecession { w: args.w, mu: args.mu },
                args.span.unwrap_or(default_span),
            )?
        }
        Family::CConstantPrecession => {
            // Default θ0 = π/2 aligns the family with the constant-precession
            // limiting form; the maximal κ > 0 window is found automatically.
            let theta0 = args.theta0.unwrap_or(std::f64::consts::FRAC_PI_2);
            let profile =
                profile_c_constant_precession(args.c1, args.c2, args.mu, theta0, 0.08)?;
            match args.span {
                Some(span) => IntrinsicProfile::new(profile.kind, span)?,
                None => profile,
            }
        }
        Family::FromProfileCsv => {
            let input = args.input.ok_or_else(|| {
                HelixError::InvalidArgument("--input is required with from-profile-csv".into())
            })?;
            let profile = io::read_profile_csv(&input)?;
            match args.span {
                Some(span) => IntrinsicProfile::new(profile.kind, span)?,
                None => profile,
            }
        }
    };

    let (curve, app) = integrate_profile(&profile, args.h, profile.domain)?;
    std::fs::create_dir_all(&args.output)?;
    io::write_curve_csv(&args.output.join("curve.csv"), &curve)?;
    io::write_profile_csv(&args.output.join("profile.csv"), &app.s, &app.kappa, &app.tau)?;
    io::write_frames_csv(&args.output.join("frames.csv"), &app)?;
    println!(
        "wrote curve.csv, profile.csv, frames.csv ({} samples) to {}",
        curve.len(),
        args.output.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn summary(values: &[f64]) -> serde_json::Value {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    json!({
        "mean": mean,
        "rel_std": var.sqrt() / (mean.abs() + helix_curves::classify::EPS_ABS),
        "min": min,
        "max": max,
    })
}

fn emit_json(output: Option<&PathBuf>, value: &serde_json::Value) -> Result<(), HelixError> {
    let text = serde_json::to_string_pretty(value).expect("JSON serialization cannot fail");
    match output {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode, HelixError> {
    let curve = io::read_curve_csv(&args.input)?;
    let speed = validate_unit_speed(&curve, DEFAULT_SPEED_TOL)?;
    let (app, alt) = extraction(&curve)?;
    let h_vals = app.harmonic_curvature();
    let mut report = json!({
        "samples": curve.len(),
        "speed": {
            "pass": speed.pass,
            "worst_deviation": speed.worst_deviation,
            "worst_segment": speed.worst_segment,
        },
        "coverage": { "frenet": app.coverage, "alt_frame": alt.coverage },
        "kappa": summary(&app.kappa),
        "tau": summary(&app.tau),
        "harmonic_curvature": summary(&h_vals),
        "sigma": summary(&alt.sigma),
        "f": summary(&alt.f),
        "g": summary(&alt.g),
    });
    if args.full {
        report["profiles"] = json!({
            "s": alt.s,
            "f": alt.f,
            "g": alt.g,
            "sigma": alt.sigma,
        });
    }
    emit_json(args.output.as_ref(), &report)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(args: ClassifyArgs) -> Result<ExitCode, HelixError> {
    let curve = io::read_curve_csv(&args.input)?;
    let (app, alt) = extraction(&curve)?;
    let report = classify_all(&app, &alt, args.tol_numeric)?;
    let value = serde_json::to_value(&report).expect("report serializes");
    emit_json(args.output.as_ref(), &value)?;
    Ok(ExitCode::SUCCESS)
}

fn write_spherical(
    dir: &std::path::Path,
    stem: &str,
    sc: &SphericalCurve,
    intr: &helix_curves::indicatrix::IndicatrixIntrinsics,
    sabban: bool,
    n: usize,
) -> Result<(), HelixError> {
    use std::io::Write;
    if sabban {
        let uni = sc.reparameterize_uniform(n)?;
        let frame = sabban_frame(&uni)?;
        io::write_spherical_csv(&dir.join(format!("{stem}.csv")), &uni, Some(&frame.k_g))?;
    } else {
        io::write_spherical_csv(&dir.join(format!("{stem}.csv")), sc, None)?;
    }
    let mut out = std::io::BufWriter::new(std::fs::File::create(
        dir.join(format!("{stem}_intrinsics.csv")),
    )?);
    writeln!(out, "s,s_ind,kappa_ind,tau_ind")?;
    for i in 0..intr.s.len() {
        writeln!(
            out,
            "{},{},{},{}",
            intr.s[i], intr.s_ind[i], intr.kappa_ind[i], intr.tau_ind[i]
        )?;
    }
    Ok(())
}

fn cmd_indicatrix(args: IndicatrixArgs) -> Result<ExitCode, HelixError> {
    let curve = io::read_curve_csv(&args.input)?;
    let (app, alt) = extraction(&curve)?;
    std::fs::create_dir_all(&args.output)?;
    match args.which {
        Which::Tangent => {
            let (sc, intr, _) = tangent_indicatrix(&app, &alt)?;
            write_spherical(&args.output, "tangent", &sc, &intr, args.sabban, args.n)?;
            println!("wrote tangent.csv, tangent_intrinsics.csv to {}", args.output.display());
        }
        Which::Normal => {
            let (sc, intr) = normal_indicatrix(&app, &alt)?;
            write_spherical(&args.output, "normal", &sc, &intr, args.sabban, args.n)?;
            println!("wrote normal.csv, normal_intrinsics.csv to {}", args.output.display());
        }
        Which::Binormal => {
            let pieces = binormal_indicatrix(&app, &alt)?;
            for (i, (sc, intr)) in pieces.iter().enumerate() {
                let stem = format!("binormal_{i}");
                write_spherical(&args.output, &stem, sc, intr, args.sabban, args.n)?;
            }
            println!(
                "wrote {} binormal piece(s) to {}",
                pieces.len(),
                args.output.display()
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, HelixError> {
    let opts = verify::VerifyOptions {
        tol_analytic: args.tol_analytic,
        tol_numeric: args.tol_numeric,
        inject_fault: args.inject_fault,
        family_filter: args.family,
    };
    let ledger = verify::run_all(&opts)?;
    for check in &ledger.checks {
        println!(
            "{} {:32} residual {:.6e} (tol {:.1e})",
            if check.pass { "PASS" } else { "FAIL" },
            check.name,
            check.residual,
            check.tolerance
        );
    }
    if let Some(path) = &args.output {
        let value = serde_json::to_value(&ledger).expect("ledger serializes");
        emit_json(Some(path), &value)?;
    }
    if ledger.all_pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("verification failed");
        Ok(ExitCode::from(1))
    }
}
