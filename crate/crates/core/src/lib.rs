//! Exact combinatorial engine for topological invariants of abelian
//! symplectic quotients of complex projective space.
//!
//! The rank-`r` torus acts on `P_{2^r - 1}` with one weight column for every
//! sign vector in `{-1,+1}^r`; the moment polytope is the cube `[-1/2, 1/2]^r`.
//! This crate models the action data ([`action`]), the face lattice and
//! orbit-type strata of the cube ([`xray`]), the recursive wall-crossing
//! machinery that builds Poincaré polynomials and Euler characteristics from
//! outside the polytope ([`engine`]), closed-form cross-checks
//! ([`closedform`]) and a verification layer against committed reference data
//! ([`verify`]).
//!
//! All arithmetic is exact: integer polynomial coefficients are
//! arbitrary-precision and moment values are rationals. No floating point is
//! used anywhere in the computational path.

pub mod action;
pub mod closedform;
pub mod engine;
pub mod poly;
pub mod verify;
pub mod xray;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// The rank-0 torus is degenerate and rejected everywhere.
    #[error("torus rank must be at least 1")]
    DegenerateTorus,

    /// An operation was asked to exceed its documented combinatorial cap.
    #[error("{what} supports r <= {cap}, got r = {got}")]
    CapExceeded {
        what: &'static str,
        cap: u32,
        got: u32,
    },

    /// Sign matrix columns failed the distinctness check.
    #[error("sign matrix has duplicate columns; input is corrupted")]
    DuplicateColumns,

    /// An amplitude vector had the wrong length or did not sum to one.
    #[error("invalid amplitude vector: {0}")]
    InvalidAmplitudes(String),

    /// Two faces passed to a crossing were not incident in the face lattice.
    #[error("faces are not incident: {0}")]
    FacesNotIncident(String),

    /// A crossing normal or stratum failed the codimension-1 wall conditions.
    #[error("degenerate wall crossing: {0}")]
    DegenerateCrossing(String),

    /// A walk path violated the ascending-chain contract.
    #[error("invalid walk path: {0}")]
    InvalidPath(String),

    /// The reference table file could not be read.
    #[error("cannot read table {path}: {source}")]
    TableIo {
        path: String,
        source: std::io::Error,
    },

    /// The reference table file could not be parsed.
    #[error("cannot parse table {path}: {detail}")]
    TableParse { path: String, detail: String },

    /// A reference table row violated its own internal invariants.
    #[error("table row r={r} is inconsistent: {detail}")]
    TableRow { r: u32, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
