use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("surface frame requested at a parameterization pole (theta = {theta})")]
    DegeneratePole { theta: f64 },

    #[error("point is {residual:.3e} away from the surface (tolerance {tolerance:.1e})")]
    OffSurface { residual: f64, tolerance: f64 },

    #[error("point ({x}, {y}, {z}) is not strictly inside the domain")]
    NotInterior { x: f64, y: f64, z: f64 },

    #[error("kernel evaluated at coincident points (|x - y| = {distance:e})")]
    CoincidentPoints { distance: f64 },

    #[error("quadrature order {0} outside the supported range 1..=2048")]
    InvalidOrder(usize),

    #[error("slope fit needs at least 3 points above the floor, got {found}")]
    InsufficientPoints { found: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}
