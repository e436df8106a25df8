//! Superoscillating Gaussian superpositions in quantum phase space.
//!
//! The crate builds superpositions of displaced squeezed Gaussians, evaluates
//! their Wigner distributions in closed form from pairwise kernels, and
//! measures the size of the phase-space structures they contain.
//!
//! Module map:
//!
//! - [`superosc`]: the band-limited function `(cos x + iα sin x)^N`, its
//!   Fourier coefficients and derived weight sequences.
//! - [`states`]: Gaussian superpositions (cat states and the superoscillating
//!   state) in position space.
//! - [`wigner`]: pairwise closed-form Wigner kernel, grids, mixtures,
//!   marginals and Moyal overlaps.
//! - [`oracle`]: brute-force quadrature of the Wigner integral, used only for
//!   validation.
//! - [`analysis`]: Zurek scale, zero-crossing scale estimation, overspill and
//!   displacement sensitivity.
//! - [`export`]: CSV and PGM grid files.
//! - [`presets`]: parameter sets used throughout the tests and the CLI.

pub mod analysis;
mod exact;
pub mod export;
pub mod oracle;
pub mod presets;
pub mod states;
pub mod superosc;
pub mod wigner;

use thiserror::Error;

/// Complex scalar used for coefficients and wavefunction values.
pub type ComplexAmplitude = num_complex::Complex64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coefficient magnitude 2^{log2_magnitude:.1} exceeds double precision range")]
    CoefficientOverflow { log2_magnitude: f64 },

    #[error("coefficient table built for (N={table_n}, alpha={table_alpha}) used with (N={n}, alpha={alpha})")]
    TableMismatch {
        table_n: u32,
        table_alpha: f64,
        n: u32,
        alpha: f64,
    },

    #[error("components have different widths ({0} and {1}); a common xi is required")]
    MixedWidths(f64, f64),

    #[error("state has no components")]
    EmptyState,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid lattices differ")]
    LatticeMismatch,

    #[error("window too small: {0}")]
    InsufficientWindow(String),

    #[error("quadrature criterion unmet: {0}")]
    Quadrature(String),

    #[error("found {found} zero crossings, at least {required} required")]
    InsufficientCrossings { found: usize, required: usize },

    #[error("indeterminate: {0}")]
    Indeterminate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
