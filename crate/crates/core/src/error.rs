use thiserror::Error;

/// Everything that can go wrong while building or integrating a model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("non-finite state at t = {t}: {state:?}")]
    NonFiniteState { t: f64, state: Vec<f64> },
    #[error("width collapsed to σ = {sigma:e} at t = {t} (floor {floor:e})")]
    WidthCollapse { t: f64, sigma: f64, floor: f64 },
    #[error("leading coefficient of the {equation} equation vanished ({value:e}) at t = {t}")]
    SingularCoefficient {
        equation: &'static str,
        t: f64,
        value: f64,
    },
    #[error("paths live on different grids ({left} vs {right} points)")]
    GridMismatch { left: usize, right: usize },
    #[error("time {t} lies outside the path grid [{t0}, {t1}]")]
    OutsideGrid { t: f64, t0: f64, t1: f64 },
    #[error("ensemble is empty")]
    EmptyEnsemble,
    #[error("{0}")]
    Unsupported(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        name,
        value,
        reason,
    }
}
