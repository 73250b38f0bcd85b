use std::collections::BTreeMap;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use layerpot_core::harness::{
    self, log_spaced_eps, reference_point_specs, ErrorRecord, FieldSliceConfig, Plane, PointSpec, RecordStatus, SweepConfig,
};
use layerpot_core::{gauss_law_check, Approximation, Error, ProductRule, ProfileKind, Result, SurfaceDomain, Vec3};

#[derive(Parser)]
#[command(name = "layerpot", version, about = "Close evaluation of Laplace layer potentials in 3D")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Error versus ε at fixed N for each boundary point
    SweepEps(SweepArgs),
    /// Error over the (N, ε) grid for each boundary point
    SweepGrid(SweepArgs),
    /// Error over an axis-aligned interior plane section
    FieldSlice(SliceArgs),
    /// Double layer of unit density at a point (−1 inside, 0 outside)
    GaussLaw(GaussArgs),
    /// Fit log-log slopes of error versus ε from a sweep CSV
    Fit(FitArgs),
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value = "peanut")]
    domain: ProfileKind,
    #[arg(long, default_value = "2")]
    approx: Approximation,
    /// Quadrature order (sweep-eps)
    #[arg(long, default_value_t = harness::DEFAULT_N)]
    n: usize,
    /// Comma-separated quadrature orders (sweep-grid)
    #[arg(long, value_delimiter = ',')]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = harness::DEFAULT_EPS_MIN)]
    eps_min: f64,
    #[arg(long, default_value_t = harness::DEFAULT_EPS_MAX)]
    eps_max: f64,
    #[arg(long, default_value_t = harness::DEFAULT_EPS_COUNT)]
    eps_count: usize,
    /// Boundary point as x,y,z (repeatable)
    #[arg(long = "point", value_parser = parse_triple, allow_hyphen_values = true)]
    points: Vec<Vec3>,
    /// Boundary point as theta,phi (repeatable)
    #[arg(long = "point-angles", value_parser = parse_pair, allow_hyphen_values = true)]
    point_angles: Vec<(f64, f64)>,
    /// Error floor used for the summary slope
    #[arg(long, default_value_t = harness::DEFAULT_FLOOR)]
    floor: f64,
    /// Output CSV (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SliceArgs {
    #[arg(long, default_value = "peanut")]
    domain: ProfileKind,
    #[arg(long, default_value = "2")]
    approx: Approximation,
    #[arg(long, default_value_t = harness::DEFAULT_N)]
    n: usize,
    #[arg(long, default_value = "z=0", allow_hyphen_values = true)]
    plane: Plane,
    #[arg(long, default_value_t = 100)]
    resolution: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GaussArgs {
    #[arg(long, default_value = "sphere")]
    domain: ProfileKind,
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Evaluation point x,y,z
    #[arg(long = "point", value_parser = parse_triple, allow_hyphen_values = true)]
    point: Vec3,
    /// Centre the rotated grid at theta,phi
    #[arg(long = "point-angles", value_parser = parse_pair, allow_hyphen_values = true)]
    point_angles: Option<(f64, f64)>,
}

#[derive(Args)]
struct FitArgs {
    /// Sweep CSV to read
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = harness::DEFAULT_FLOOR)]
    floor: f64,
}

fn parse_numbers(s: &str, count: usize) -> std::result::Result<Vec<f64>, String> {
    let values: std::result::Result<Vec<f64>, _> = s.split(',').map(|v| v.trim().parse::<f64>()).collect();
    match values {
        Ok(v) if v.len() == count => Ok(v),
        _ => Err(format!("expected {count} comma-separated numbers, got '{s}'")),
    }
}

fn parse_triple(s: &str) -> std::result::Result<Vec3, String> {
    parse_numbers(s, 3).map(|v| Vec3::new(v[0], v[1], v[2]))
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    parse_numbers(s, 2).map(|v| (v[0], v[1]))
}

fn sweep_config(args: &SweepArgs, grid: bool) -> Result<SweepConfig> {
    let domain = SurfaceDomain::new(args.domain);
    if args.eps_count == 0 || !(args.eps_min > 0.0 && args.eps_min <= args.eps_max) {
        return Err(Error::InvalidConfig("need 0 < eps-min <= eps-max and eps-count >= 1".into()));
    }
    let mut points: Vec<PointSpec> = args
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| PointSpec::Cartesian { id: format!("p{i}"), position: *p })
        .collect();
    points.extend(
        args.point_angles
            .iter()
            .enumerate()
            .map(|(i, (theta, phi))| PointSpec::Angles { id: format!("q{i}"), theta: *theta, phi: *phi }),
    );
    if points.is_empty() {
        points = reference_point_specs(args.domain);
        let domain = SurfaceDomain::new(args.domain);
        for p in &points {
            let residual = p.residual(&domain);
            if residual > layerpot_core::geometry::ON_SURFACE_TOLERANCE {
                eprintln!("note: point {} projected onto the surface (moved {residual:.3e})", p.id());
            }
        }
    }
    let n_values = if grid {
        if args.n_list.is_empty() {
            vec![16, 32, 64, 96, 128, 192, 256]
        } else {
            args.n_list.clone()
        }
    } else {
        vec![args.n]
    };
    let config = SweepConfig {
        domain,
        approx: args.approx,
        n_values,
        eps_values: log_spaced_eps(args.eps_min, args.eps_max, args.eps_count),
        points,
        output_path: args.out.clone(),
    };
    config.validate()?;
    Ok(config)
}

fn emit(records: &[ErrorRecord], out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => harness::write_csv(records, path),
        None => harness::write_csv_to(records, io::stdout().lock())
            .map_err(|source| Error::Csv { path: PathBuf::from("<stdout>"), source }),
    }
}

type SlopeGroups = BTreeMap<(String, u8, usize, String), (Vec<f64>, Vec<f64>)>;

/// Evaluated records grouped by (domain, approx, N, point) into (ε, error) series.
fn group_series(records: &[ErrorRecord]) -> SlopeGroups {
    let mut groups = SlopeGroups::new();
    for r in records.iter().filter(|r| r.status == RecordStatus::Ok) {
        let entry = groups.entry((r.domain.clone(), r.approx, r.n, r.point_id.clone())).or_default();
        entry.0.push(r.eps);
        entry.1.push(r.abs_error);
    }
    groups
}

fn print_slopes(records: &[ErrorRecord], floor: f64) {
    for ((domain, approx, n, point), (eps, err)) in group_series(records) {
        match harness::fit_slope(&eps, &err, floor) {
            Ok(s) => eprintln!("{domain} approx={approx} n={n} point={point}: slope {s:.3}"),
            Err(e) => eprintln!("{domain} approx={approx} n={n} point={point}: {e}"),
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::SweepEps(args) => {
            let config = sweep_config(&args, false)?;
            let records = harness::run_epsilon_sweep(&config)?;
            emit(&records, args.out.as_ref())?;
            print_slopes(&records, args.floor);
        }
        Command::SweepGrid(args) => {
            let config = sweep_config(&args, true)?;
            let records = harness::run_grid_sweep(&config)?;
            emit(&records, args.out.as_ref())?;
        }
        Command::FieldSlice(args) => {
            let config = FieldSliceConfig {
                domain: SurfaceDomain::new(args.domain),
                approx: args.approx,
                n: args.n,
                plane: args.plane,
                resolution: args.resolution,
            };
            let records = harness::run_field_slice(&config)?;
            emit(&records, args.out.as_ref())?;
        }
        Command::GaussLaw(args) => {
            let domain = SurfaceDomain::new(args.domain);
            let rule = ProductRule::new(args.n)?;
            let value = gauss_law_check(&domain, args.point, &rule, args.point_angles);
            println!("{value:.16e}");
        }
        Command::Fit(args) => {
            let records = harness::read_csv(&args.input)?;
            println!("domain,approx,n,point_id,slope");
            for ((domain, approx, n, point), (eps, err)) in group_series(&records) {
                let slope = harness::fit_slope(&eps, &err, args.floor).map(|s| format!("{s:.6}")).unwrap_or_else(|_| "NaN".into());
                println!("{domain},{approx},{n},{point},{slope}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
