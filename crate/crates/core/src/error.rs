use thiserror::Error;

use crate::rh_index::IndexReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),
    #[error("cut {cut} outside window [{lo}, {hi}]")]
    Range { cut: i64, lo: i64, hi: i64 },
    #[error("window error: {0}")]
    Window(String),
    #[error("symbol is not invertible on the circle (min |det| = {min_abs_det:e})")]
    NotInvertible { min_abs_det: f64 },
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("index routes disagree: {0:?}")]
    Inconsistent(Box<IndexReport>),
    #[error("no transition automorphism: {0}")]
    NoTransition(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("calibration error: {0}")]
    Calibration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
