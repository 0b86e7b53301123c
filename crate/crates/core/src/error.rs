//! Crate-wide error type.
//!
//! Every failure carries enough context to be actionable (worst violating
//! triple, offending index, the limit that was hit). `kind()` exposes a
//! stable machine-readable tag used by the CLI's JSON error output.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("distance matrix is not symmetric at ({i},{j}): {forward} vs {backward}")]
    AsymmetricDistance { i: usize, j: usize, forward: f64, backward: f64 },

    #[error(
        "triangle inequality violated at ({i},{j},{k}): d({i},{k}) = {direct} > d({i},{j}) + d({j},{k}) = {via}"
    )]
    TriangleViolation { i: usize, j: usize, k: usize, direct: f64, via: f64 },

    #[error("weight[{i}] = {weight} is not strictly positive")]
    NonpositiveWeight { i: usize, weight: f64 },

    #[error("weights sum to {sum}, too far from 1 to renormalize")]
    MassNotOne { sum: f64 },

    #[error("dist[{i}][{i}] = {value}, diagonal must be exactly 0")]
    DiagonalNotZero { i: usize, value: f64 },

    #[error("dist[{i}][{j}] = {value}, distinct points must be at positive distance")]
    NonpositiveDistance { i: usize, j: usize, value: f64 },

    #[error("non-finite entry in {what} at flat index {index}")]
    NonFiniteEntry { what: &'static str, index: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("generator would produce {requested} points, configured maximum is {max}")]
    SizeOverflow { requested: usize, max: usize },

    #[error("subset is empty")]
    EmptySet,

    #[error("space has {n} points, exact subset search is limited to {limit}")]
    TooLargeForExact { n: usize, limit: usize },

    #[error("space has {n} points, the lattice oracle is limited to {limit}")]
    TooLargeForOracle { n: usize, limit: usize },

    #[error("profile has fewer than 2 strictly positive values, nothing to fit")]
    DegenerateProfile,

    #[error(
        "anchors are not {lip}-Lipschitz at ({a},{b}): |{value_a} - {value_b}| > {lip} * {distance}"
    )]
    AnchorsNotLipschitz { a: usize, b: usize, value_a: f64, value_b: f64, lip: f64, distance: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("bound is not informative: {0}")]
    NotInformative(String),

    #[error("graph is disconnected, the spectral gap would be 0")]
    DisconnectedGraph,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag for this error.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::AsymmetricDistance { .. } => "AsymmetricDistance",
            Error::TriangleViolation { .. } => "TriangleViolation",
            Error::NonpositiveWeight { .. } => "NonpositiveWeight",
            Error::MassNotOne { .. } => "MassNotOne",
            Error::DiagonalNotZero { .. } => "DiagonalNotZero",
            Error::NonpositiveDistance { .. } => "NonpositiveDistance",
            Error::NonFiniteEntry { .. } => "NonFiniteEntry",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::SizeOverflow { .. } => "SizeOverflow",
            Error::EmptySet => "EmptySet",
            Error::TooLargeForExact { .. } => "TooLargeForExact",
            Error::TooLargeForOracle { .. } => "TooLargeForOracle",
            Error::DegenerateProfile => "DegenerateProfile",
            Error::AnchorsNotLipschitz { .. } => "AnchorsNotLipschitz",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::NotInformative(_) => "NotInformative",
            Error::DisconnectedGraph => "DisconnectedGraph",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Io(_) => "Io",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
