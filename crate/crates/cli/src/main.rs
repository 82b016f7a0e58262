use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use sc_blaschke::bounds::{self, MAX_WINDOW_EPS};
use sc_blaschke::scmap::{trace_polygon, TraceVertex, DEFAULT_NODES, MIN_NODES};
use sc_blaschke::{solve_prevertices, MapKind, DEFAULT_TOL};
use sc_blaschke_cli::analyze::analyze;
use sc_blaschke_cli::document::{BoundsDocument, RadiusDocument, SpecDocument};
use sc_blaschke_cli::{svg, verify, CliError, ExitStatus};

#[derive(Parser)]
#[command(
    name = "scmap",
    version,
    about = "Schwarz-Christoffel maps from Blaschke-product pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Interior,
    Exterior,
}

impl From<Kind> for MapKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Interior => MapKind::Interior,
            Kind::Exterior => MapKind::Exterior,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve a spec and write a JSON report (and optionally a figure).
    Analyze {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
    },
    /// Separation bounds for a convex map of degree n with zeros in |z| <= r.
    Bounds {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
    },
    /// Lower bound on the largest zero modulus for degrees (d1, d2).
    Radius {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
    },
    /// Run the property suites on seeded random specs.
    Verify {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        trials: usize,
    },
    /// Trace the image polygon of a spec into an SVG figure.
    Trace {
        spec: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        scale_re: f64,
        #[arg(long, default_value_t = 0.0)]
        scale_im: f64,
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
    },
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn check_nodes(nodes: usize) -> Result<(), CliError> {
    if nodes < MIN_NODES {
        return Err(CliError::Usage(format!(
            "--nodes must be at least {MIN_NODES}"
        )));
    }
    Ok(())
}

fn cmd_analyze(
    spec: &Path,
    out: &Path,
    svg_path: Option<&Path>,
    tol: f64,
    nodes: usize,
) -> Result<ExitStatus, CliError> {
    check_nodes(nodes)?;
    let spec = SpecDocument::read(spec)?.to_spec()?;
    let analysis = analyze(&spec, tol)?;
    write_file(out, &analysis.report.to_json())?;
    if let Some(path) = svg_path {
        let scale = Complex64::new(1.0, 0.0);
        let trace = analysis
            .prevertices
            .as_ref()
            .map(|set| trace_polygon(set, scale, nodes));
        let (trace, message) = match trace {
            Some(Ok(t)) => (Some(t), None),
            Some(Err(e)) => (None, Some(e.to_string())),
            None => (None, Some("inadmissible spec".to_string())),
        };
        let figure = svg::render(
            &spec,
            analysis.prevertices.as_ref(),
            trace.as_ref(),
            message.as_deref(),
        );
        write_file(path, &figure)?;
    }
    if let Some(d) = &analysis.report.diagnostic {
        eprintln!("inadmissible: {d}");
        return Ok(ExitStatus::Inadmissible);
    }
    Ok(ExitStatus::Success)
}

fn cmd_bounds(kind: MapKind, n: usize, r: f64) -> Result<ExitStatus, CliError> {
    let b = bounds::separation_bound(kind, n, r)?;
    let window = if r <= MAX_WINDOW_EPS {
        let (lo, hi) = bounds::small_radius_window(kind, n, r)?;
        Some([lo, hi])
    } else {
        None
    };
    let doc = BoundsDocument {
        min_sep: b.two_theta_min,
        max_sep: b.two_psi_max,
        window,
    };
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(ExitStatus::Success)
}

fn cmd_radius(kind: MapKind, d1: usize, d2: usize) -> Result<ExitStatus, CliError> {
    let b = bounds::zero_radius_lower_bound(kind, d1, d2)?;
    let doc = RadiusDocument {
        kind: kind.into(),
        d1,
        d2,
        r_min: b.r_min,
    };
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(ExitStatus::Success)
}

fn cmd_verify(seed: u64, trials: usize) -> Result<ExitStatus, CliError> {
    let report = verify::run(seed, trials)?;
    print!("{}", report.render());
    Ok(if report.passed() {
        ExitStatus::Success
    } else {
        ExitStatus::VerificationFailed
    })
}

fn cmd_trace(
    spec: &Path,
    svg_path: &Path,
    scale: Complex64,
    nodes: usize,
) -> Result<ExitStatus, CliError> {
    check_nodes(nodes)?;
    let spec = SpecDocument::read(spec)?.to_spec()?;
    let set = match solve_prevertices(&spec, DEFAULT_TOL) {
        Ok(set) => set,
        Err(e @ sc_blaschke::PrevertexError::Inadmissible(_)) => {
            eprintln!("inadmissible: {e}");
            return Ok(ExitStatus::Inadmissible);
        }
        Err(e) => return Err(e.into()),
    };
    let trace = trace_polygon(&set, scale, nodes)?;
    write_file(
        svg_path,
        &svg::render(&spec, Some(&set), Some(&trace), None),
    )?;
    for (p, v) in set.points().iter().zip(&trace.vertices) {
        match v {
            TraceVertex::Finite { position, .. } => {
                println!(
                    "t={:.12} beta={:.12} vertex={:.12}{:+.12}i",
                    p.t, p.beta, position.re, position.im
                )
            }
            TraceVertex::Infinite => println!("t={:.12} beta={:.12} vertex=infinite", p.t, p.beta),
        }
    }
    Ok(ExitStatus::Success)
}

fn run(cli: Cli) -> Result<ExitStatus, CliError> {
    match cli.command {
        Command::Analyze {
            spec,
            out,
            svg,
            tol,
            nodes,
        } => cmd_analyze(&spec, &out, svg.as_deref(), tol, nodes),
        Command::Bounds { kind, n, r } => cmd_bounds(kind.into(), n, r),
        Command::Radius { kind, d1, d2 } => cmd_radius(kind.into(), d1, d2),
        Command::Verify { seed, trials } => cmd_verify(seed, trials),
        Command::Trace {
            spec,
            svg,
            scale_re,
            scale_im,
            nodes,
        } => cmd_trace(&spec, &svg, Complex64::new(scale_re, scale_im), nodes),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() {
                ExitStatus::Usage.code()
            } else {
                0
            };
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ExitStatus::Usage.code() as u8)
        }
    }
}
