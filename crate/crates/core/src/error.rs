use thiserror::Error;

use crate::model::Topology;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular evolution matrix (pivot {pivot:.3e} below {threshold:.3e})")]
    SingularSystem { pivot: f64, threshold: f64 },

    #[error("{0} is undefined for the given drive (zero Rabi frequency or zero rate)")]
    UndefinedCoefficient(&'static str),

    #[error("{operation} is not defined for the {topology} topology")]
    UnsupportedTopology {
        operation: &'static str,
        topology: Topology,
    },

    #[error("g2(0) is undefined: probe transmission is zero")]
    DivisionByZero,

    #[error("phase is undefined: transmission amplitude is exactly zero")]
    UndefinedPhase,

    #[error("grid too narrow: endpoint magnitude {endpoint:.3e} exceeds 1e-3 of the peak {peak:.3e}")]
    GridTooNarrow { endpoint: f64, peak: f64 },

    #[error("non-positive transmission amplitude {value:.3e} at grid index {index}")]
    NonPositiveAmplitude { index: usize, value: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
