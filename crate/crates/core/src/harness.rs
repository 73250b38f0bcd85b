//! Convergence experiments: ε-sweeps, (N, ε) grids, interior error slices,
//! slope fits and CSV output.
//!
//! Every sweep returns its records in a fixed order regardless of how the work
//! was scheduled, so repeated runs write byte-identical files.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{ProfileKind, SurfaceDomain};
use crate::potentials::{Approximation, BoundarySamples, DensityPair, Target};
use crate::quadrature::ProductRule;
use crate::reference::{densities_from_exact, exact_solution};
use crate::vec3::Vec3;

pub const CSV_HEADER: [&str; 11] = [
    "domain",
    "approx",
    "n",
    "eps",
    "point_id",
    "theta_star",
    "phi_star",
    "u_exact",
    "u_numeric",
    "abs_error",
    "log10_error",
];

/// Errors below this are clamped before taking the logarithm.
pub const LOG10_CLAMP: f64 = 1e-17;
pub const DEFAULT_N: usize = 128;
pub const DEFAULT_EPS_MIN: f64 = 1e-6;
pub const DEFAULT_EPS_MAX: f64 = 1e-1;
pub const DEFAULT_EPS_COUNT: usize = 20;
pub const DEFAULT_FLOOR: f64 = 1e-13;

/// Labelled boundary points, to four decimals.
///
/// Mushroom B and C are not on the surface as listed (residuals ≈ 9e−3 and
/// ≈ 0.72); use [`reference_point_specs`], which projects them.
pub fn reference_points(kind: ProfileKind) -> Vec<(&'static str, Vec3)> {
    match kind {
        ProfileKind::Peanut => vec![
            ("A", Vec3::new(-0.0894, 0.4040, 0.0)),
            ("B", Vec3::new(-0.4349, 0.0, 1.1819)),
            ("C", Vec3::new(0.0, 1.0456, 0.8032)),
        ],
        ProfileKind::Mushroom => vec![
            ("A", Vec3::new(-1.5559, 2.4816, 0.0)),
            ("B", Vec3::new(-1.8307, 0.0, 0.7412)),
            ("C", Vec3::new(0.0, 0.7601, 1.1446)),
        ],
        ProfileKind::Sphere => vec![
            ("A", Vec3::new(1.0, 0.0, 0.0)),
            ("B", Vec3::new(0.0, 0.6, 0.8)),
            ("C", Vec3::new(-0.48, 0.6, -0.64)),
        ],
    }
}

/// A boundary point given in Cartesian form, by its parameters, or as an
/// approximate location to be projected onto the surface.
#[derive(Debug, Clone, PartialEq)]
pub enum PointSpec {
    /// Must lie on the surface within `ON_SURFACE_TOLERANCE`.
    Cartesian { id: String, position: Vec3 },
    Angles { id: String, theta: f64, phi: f64 },
    /// Replaced by the surface point with the same `(θ, φ)` direction.
    Projected { id: String, position: Vec3 },
}

impl PointSpec {
    pub fn id(&self) -> &str {
        match self {
            PointSpec::Cartesian { id, .. } | PointSpec::Angles { id, .. } | PointSpec::Projected { id, .. } => id,
        }
    }

    /// `(θ*, φ*)` of the point on `domain`.
    pub fn resolve(&self, domain: &SurfaceDomain) -> Result<(f64, f64)> {
        match self {
            PointSpec::Cartesian { position, .. } => domain.inverse_parameterize(*position),
            PointSpec::Angles { theta, phi, .. } => Ok((*theta, *phi)),
            PointSpec::Projected { position, .. } => {
                let (theta, phi, _) = domain.surface_parameters(*position);
                Ok((theta, phi))
            }
        }
    }

    /// Distance from the given location to the resolved surface point; zero
    /// for parameter-specified points.
    pub fn residual(&self, domain: &SurfaceDomain) -> f64 {
        match self {
            PointSpec::Cartesian { position, .. } | PointSpec::Projected { position, .. } => domain.surface_parameters(*position).2,
            PointSpec::Angles { .. } => 0.0,
        }
    }
}

/// The labelled points of `kind` as projected point specs.
pub fn reference_point_specs(kind: ProfileKind) -> Vec<PointSpec> {
    reference_points(kind)
        .into_iter()
        .map(|(id, position)| PointSpec::Projected { id: id.to_string(), position })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub domain: SurfaceDomain,
    pub approx: Approximation,
    pub n_values: Vec<usize>,
    /// Strictly decreasing.
    pub eps_values: Vec<f64>,
    pub points: Vec<PointSpec>,
    pub output_path: Option<PathBuf>,
}

impl SweepConfig {
    /// Defaults: N = 128, 20 log-spaced ε in `[1e−6, 1e−1]`, the labelled points A, B, C.
    pub fn with_defaults(domain: SurfaceDomain, approx: Approximation) -> Self {
        let points = reference_point_specs(domain.profile_kind);
        SweepConfig {
            domain,
            approx,
            n_values: vec![DEFAULT_N],
            eps_values: log_spaced_eps(DEFAULT_EPS_MIN, DEFAULT_EPS_MAX, DEFAULT_EPS_COUNT),
            points,
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.eps_values.is_empty() || self.points.is_empty() {
            return Err(Error::InvalidConfig("n, eps and point lists must be non-empty".into()));
        }
        if !self.n_values.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidConfig("n values must be strictly increasing".into()));
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n == 0 || n > crate::quadrature::MAX_ORDER) {
            return Err(Error::InvalidOrder(n));
        }
        if !self.eps_values.windows(2).all(|w| w[0] > w[1]) {
            return Err(Error::InvalidConfig("eps values must be strictly decreasing".into()));
        }
        if self.eps_values.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(Error::InvalidConfig("eps values must be positive and finite".into()));
        }
        for p in &self.points {
            let (theta, _) = p.resolve(&self.domain)?;
            if !(theta > 0.0 && theta < std::f64::consts::PI) {
                return Err(Error::DegeneratePole { theta });
            }
        }
        Ok(())
    }
}

/// `count` values from `max` down to `min`, equally spaced in log₁₀.
pub fn log_spaced_eps(min: f64, max: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![max];
    }
    let (lo, hi) = (min.log10(), max.log10());
    (0..count)
        .map(|i| 10f64.powf(hi - (hi - lo) * i as f64 / (count - 1) as f64))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordStatus {
    Ok,
    /// Grid point outside the domain (or on its boundary); not evaluated.
    Masked,
    /// Geometry or kernel failure for this record only.
    Failed,
}

/// One evaluation compared against the exact field.
///
/// In CSV form a masked record has `eps = NaN`; a failed record has a finite
/// `eps` and `u_numeric = NaN`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRecord {
    pub domain: String,
    pub approx: u8,
    pub n: usize,
    pub eps: f64,
    pub point_id: String,
    pub theta_star: f64,
    pub phi_star: f64,
    pub u_exact: f64,
    pub u_numeric: f64,
    pub abs_error: f64,
    pub log10_error: f64,
    pub status: RecordStatus,
}

impl ErrorRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn evaluated(domain: &str, approx: Approximation, n: usize, eps: f64, point_id: &str, theta_star: f64, phi_star: f64, u_exact: f64, u_numeric: f64) -> Self {
        let abs_error = (u_exact - u_numeric).abs();
        ErrorRecord {
            domain: domain.to_string(),
            approx: approx.index(),
            n,
            eps,
            point_id: point_id.to_string(),
            theta_star,
            phi_star,
            u_exact,
            u_numeric,
            abs_error,
            log10_error: abs_error.max(LOG10_CLAMP).log10(),
            status: RecordStatus::Ok,
        }
    }

    fn unevaluated(domain: &str, approx: Approximation, n: usize, eps: f64, point_id: &str, angles: (f64, f64), u_exact: f64, status: RecordStatus) -> Self {
        ErrorRecord {
            domain: domain.to_string(),
            approx: approx.index(),
            n,
            eps,
            point_id: point_id.to_string(),
            theta_star: angles.0,
            phi_star: angles.1,
            u_exact,
            u_numeric: f64::NAN,
            abs_error: f64::NAN,
            log10_error: f64::NAN,
            status,
        }
    }
}

fn sweep_records(config: &SweepConfig) -> Result<Vec<ErrorRecord>> {
    config.validate()?;
    let domain = config.domain;
    let densities = densities_from_exact(&domain);
    let mut jobs = Vec::new();
    for point in &config.points {
        let angles = point.resolve(&domain)?;
        for &n in &config.n_values {
            jobs.push((point.id().to_string(), angles, n));
        }
    }

    let blocks: Vec<Vec<ErrorRecord>> = jobs
        .par_iter()
        .map(|(id, (ts, ps), n)| -> Result<Vec<ErrorRecord>> {
            let rule = ProductRule::cached(*n)?;
            let (fs, fp) = grid_centre(config.approx, (*ts, *ps));
            let samples = BoundarySamples::new(&domain, &densities, &rule, fs, fp);
            let records = config
                .eps_values
                .par_iter()
                .map(|&eps| evaluate_record(&domain, config.approx, &densities, &samples, *n, eps, id, (*ts, *ps)))
                .collect();
            Ok(records)
        })
        .collect::<Result<_>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

/// Approximation 1 is evaluated naively on the unrotated grid; the others in
/// the frame of the boundary point.
fn grid_centre(approx: Approximation, angles: (f64, f64)) -> (f64, f64) {
    match approx {
        Approximation::Plain => (0.0, 0.0),
        _ => angles,
    }
}

#[allow(clippy::too_many_arguments)]
fn evaluate_record(
    domain: &SurfaceDomain,
    approx: Approximation,
    densities: &DensityPair,
    samples: &BoundarySamples,
    n: usize,
    eps: f64,
    id: &str,
    (ts, ps): (f64, f64),
) -> ErrorRecord {
    let name = domain.name();
    let target = match Target::on_domain(domain, ts, ps, eps) {
        Ok(t) => t,
        Err(_) => return ErrorRecord::unevaluated(name, approx, n, eps, id, (ts, ps), f64::NAN, RecordStatus::Failed),
    };
    let u_exact = exact_solution(target.x);
    match approx.evaluate_samples(samples, densities, &target) {
        Ok(u) => ErrorRecord::evaluated(name, approx, n, eps, id, ts, ps, u_exact, u),
        Err(_) => ErrorRecord::unevaluated(name, approx, n, eps, id, (ts, ps), u_exact, RecordStatus::Failed),
    }
}

/// Fixed-N error versus ε at each point; ordered by point, then N, then ε descending.
pub fn run_epsilon_sweep(config: &SweepConfig) -> Result<Vec<ErrorRecord>> {
    sweep_records(config)
}

/// Full (N, ε) cross product per point, N outer and ε inner.
pub fn run_grid_sweep(config: &SweepConfig) -> Result<Vec<ErrorRecord>> {
    if config.n_values.len() < 2 {
        return Err(Error::InvalidConfig("a grid sweep needs at least two N values".into()));
    }
    sweep_records(config)
}

/// Axis-aligned plane `x[axis] = value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub axis: usize,
    pub value: f64,
}

impl std::str::FromStr for Plane {
    type Err = Error;

    /// Parses `x=0`, `y=0.25`, `z=-1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("invalid plane '{s}', expected e.g. z=0"));
        let (axis, value) = s.split_once('=').ok_or_else(bad)?;
        let axis = match axis.trim() {
            "x" | "X" => 0,
            "y" | "Y" => 1,
            "z" | "Z" => 2,
            _ => return Err(bad()),
        };
        let value: f64 = value.trim().parse().map_err(|_| bad())?;
        Ok(Plane { axis, value })
    }
}

#[derive(Debug, Clone)]
pub struct FieldSliceConfig {
    pub domain: SurfaceDomain,
    pub approx: Approximation,
    pub n: usize,
    pub plane: Plane,
    /// Grid points per in-plane axis.
    pub resolution: usize,
}

impl FieldSliceConfig {
    /// In-plane grid coordinates, row-major, with ids `r{row}c{col}`.
    pub fn grid(&self) -> Vec<(String, Vec3)> {
        let (a, b) = match self.plane.axis {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let (ea, eb) = (self.domain.extent(a) * 1.05, self.domain.extent(b) * 1.05);
        let m = self.resolution;
        let coord = |i: usize, e: f64| if m == 1 { 0.0 } else { -e + 2.0 * e * i as f64 / (m - 1) as f64 };
        let mut out = Vec::with_capacity(m * m);
        for row in 0..m {
            for col in 0..m {
                let mut p = [0.0; 3];
                p[self.plane.axis] = self.plane.value;
                p[a] = coord(col, ea);
                p[b] = coord(row, eb);
                out.push((format!("r{row}c{col}"), Vec3(p)));
            }
        }
        out
    }
}

/// Error over an interior plane section using the exact densities.
pub fn run_field_slice(config: &FieldSliceConfig) -> Result<Vec<ErrorRecord>> {
    let densities = densities_from_exact(&config.domain);
    run_field_slice_with(config, &densities, &exact_solution)
}

/// Error over an interior plane section for arbitrary densities and the
/// matching reference field.
pub fn run_field_slice_with(config: &FieldSliceConfig, densities: &DensityPair, reference: &(dyn Fn(Vec3) -> f64 + Sync)) -> Result<Vec<ErrorRecord>> {
    if config.resolution == 0 || config.plane.axis > 2 {
        return Err(Error::InvalidConfig("field slice needs a positive resolution and an x, y or z plane".into()));
    }
    let rule = ProductRule::cached(config.n)?;
    let domain = config.domain;
    let approx = config.approx;
    let name = domain.name();
    let records = config
        .grid()
        .into_par_iter()
        .map(|(id, x)| {
            if !domain.contains(x) {
                return ErrorRecord::unevaluated(name, approx, config.n, f64::NAN, &id, (f64::NAN, f64::NAN), reference(x), RecordStatus::Masked);
            }
            let (ystar, eps) = match domain.closest_boundary_point(x) {
                Ok(found) => found,
                Err(_) => return ErrorRecord::unevaluated(name, approx, config.n, f64::NAN, &id, (f64::NAN, f64::NAN), reference(x), RecordStatus::Failed),
            };
            let angles = (ystar.theta, ystar.phi);
            let target = Target::new(ystar, eps, domain.ell);
            let u_exact = reference(target.x);
            let (fs, fp) = grid_centre(approx, angles);
            let samples = BoundarySamples::new(&domain, densities, &rule, fs, fp);
            match approx.evaluate_samples(&samples, densities, &target) {
                Ok(u) => ErrorRecord::evaluated(name, approx, config.n, eps, &id, angles.0, angles.1, u_exact, u),
                Err(_) => ErrorRecord::unevaluated(name, approx, config.n, eps, &id, angles, u_exact, RecordStatus::Failed),
            }
        })
        .collect();
    Ok(records)
}

/// Least-squares slope of `log₁₀(error)` against `log₁₀(ε)`, using only
/// points whose error exceeds `floor`.
pub fn fit_slope(eps_values: &[f64], errors: &[f64], floor: f64) -> Result<f64> {
    let pts: Vec<(f64, f64)> = eps_values
        .iter()
        .zip(errors)
        .filter(|(e, err)| **e > 0.0 && err.is_finite() && **err > floor)
        .map(|(e, err)| (e.log10(), err.log10()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientPoints { found: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientPoints { found: 1 });
    }
    Ok(sxy / sxx)
}

fn real(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Writes records with the fixed header; reals carry 17 significant digits.
pub fn write_csv(records: &[ErrorRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    write_csv_to(records, file).map_err(|source| Error::Csv { path: path.to_path_buf(), source })
}

pub fn write_csv_to<W: Write>(records: &[ErrorRecord], sink: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.domain.clone(),
            r.approx.to_string(),
            r.n.to_string(),
            real(r.eps),
            r.point_id.clone(),
            real(r.theta_star),
            real(r.phi_star),
            real(r.u_exact),
            real(r.u_numeric),
            real(r.abs_error),
            real(r.log10_error),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<ErrorRecord>> {
    let file = File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    read_csv_from(file).map_err(|e| match e {
        ReadError::Csv(source) => Error::Csv { path: path.to_path_buf(), source },
        ReadError::Field(msg) => Error::InvalidConfig(format!("{}: {msg}", path.display())),
    })
}

#[derive(Debug)]
pub enum ReadError {
    Csv(csv::Error),
    Field(String),
}

impl From<csv::Error> for ReadError {
    fn from(e: csv::Error) -> Self {
        ReadError::Csv(e)
    }
}

pub fn read_csv_from<R: std::io::Read>(source: R) -> std::result::Result<Vec<ErrorRecord>, ReadError> {
    let mut reader = csv::Reader::from_reader(source);
    let header = reader.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(ReadError::Field(format!("unexpected header {:?}", header)));
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let num = |i: usize| -> std::result::Result<f64, ReadError> {
            row[i].parse::<f64>().map_err(|_| ReadError::Field(format!("column {} is not a number: '{}'", CSV_HEADER[i], &row[i])))
        };
        let int = |i: usize| -> std::result::Result<usize, ReadError> {
            row[i].parse::<usize>().map_err(|_| ReadError::Field(format!("column {} is not an integer: '{}'", CSV_HEADER[i], &row[i])))
        };
        let eps = num(3)?;
        let u_numeric = num(8)?;
        let status = if eps.is_nan() {
            RecordStatus::Masked
        } else if u_numeric.is_nan() {
            RecordStatus::Failed
        } else {
            RecordStatus::Ok
        };
        out.push(ErrorRecord {
            domain: row[0].to_string(),
            approx: int(1)? as u8,
            n: int(2)?,
            eps,
            point_id: row[4].to_string(),
            theta_star: num(5)?,
            phi_star: num(6)?,
            u_exact: num(7)?,
            u_numeric,
            abs_error: num(9)?,
            log10_error: num(10)?,
            status,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn slope_examples() {
        let eps = [1e-1, 1e-2, 1e-3];
        assert_abs_diff_eq!(fit_slope(&eps, &[1e-3, 1e-4, 1e-5], 1e-13).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit_slope(&eps, &[1e-2, 1e-4, 1e-6], 1e-13).unwrap(), 2.0, epsilon = 1e-12);
        let eps4 = [1e-1, 1e-2, 1e-3, 1e-4];
        let s = fit_slope(&eps4, &[1e-2, 1e-4, 1e-6, 1e-15], 1e-13).unwrap();
        assert_abs_diff_eq!(s, 2.0, epsilon = 1e-12);
        assert!(matches!(fit_slope(&eps4, &[1e-2, 1e-14, 1e-15, 1e-16], 1e-13), Err(Error::InsufficientPoints { found: 1 })));
    }

    #[test]
    fn eps_grid_descends() {
        let e = log_spaced_eps(1e-6, 1e-1, 20);
        assert_eq!(e.len(), 20);
        assert_abs_diff_eq!(e[0], 1e-1, epsilon = 1e-16);
        assert_abs_diff_eq!(e[19], 1e-6, epsilon = 1e-20);
        assert!(e.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn plane_parsing() {
        assert_eq!("z=0".parse::<Plane>().unwrap(), Plane { axis: 2, value: 0.0 });
        assert_eq!("x = -0.5".parse::<Plane>().unwrap(), Plane { axis: 0, value: -0.5 });
        assert!("w=1".parse::<Plane>().is_err());
        assert!("z".parse::<Plane>().is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = SweepConfig::with_defaults(SurfaceDomain::peanut(), Approximation::Subtracted);
        c.validate().unwrap();
        c.eps_values = vec![1e-3, 1e-2];
        assert!(c.validate().is_err());
        c.eps_values = vec![1e-2, 1e-3];
        c.n_values = vec![64, 32];
        assert!(c.validate().is_err());
        c.n_values = vec![32];
        c.points = vec![PointSpec::Cartesian { id: "bad".into(), position: Vec3::new(0.3, 0.3, 0.3) }];
        assert!(matches!(c.validate(), Err(Error::OffSurface { .. })));
    }

    #[test]
    fn reference_points_lie_on_their_surfaces() {
        for kind in ProfileKind::ALL {
            let d = SurfaceDomain::new(kind);
            for (id, p) in reference_points(kind) {
                let (_, _, residual) = d.surface_parameters(p);
                match (kind, id) {
                    (ProfileKind::Mushroom, "B") => assert!(residual > 1e-3 && residual < 1e-2),
                    (ProfileKind::Mushroom, "C") => assert!(residual > 0.5),
                    _ => assert!(residual < 1e-4, "{kind} {id} residual {residual}"),
                }
            }
        }
    }

    #[test]
    fn projected_reference_points_resolve_away_from_poles() {
        for kind in ProfileKind::ALL {
            let d = SurfaceDomain::new(kind);
            for spec in reference_point_specs(kind) {
                let (theta, phi) = spec.resolve(&d).unwrap();
                assert!(theta > 0.1 && theta < 3.0, "{kind} {}", spec.id());
                let y = d.parameterize(theta, phi);
                assert_abs_diff_eq!(d.surface_parameters(y).2, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn empty_csv_is_header_only() {
        let mut buf = Vec::new();
        write_csv_to(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{}\n", CSV_HEADER.join(",")));
    }
}
