//! # mmc-core
//!
//! Concentration of measure on finite metric measure spaces, computed
//! exactly or with certified sandwich estimates.
//!
//! A metric measure space here is the triplet `(X, d_X, μ_X)`: finitely many
//! points, a distance matrix and strictly positive probability weights. On
//! such spaces this crate computes the quantities that organize the
//! concentration phenomenon and machine-checks the inequalities relating
//! them:
//!
//! | Quantity | Where |
//! |----------|-------|
//! | isoperimetric enlargement `A_r`, metric balls | [`enlargement`] |
//! | doubling constant and its two-radius characterization | [`enlargement`] |
//! | concentration function `α^ε(r)` (exact, with witnesses) | [`concentration`] |
//! | exponential / Gaussian envelope fits | [`concentration`] |
//! | quantiles and the two concentration inequalities | [`concentration`] |
//! | Lipschitz observables, pushforwards, partial diameter | [`lipschitz`] |
//! | observable diameter `ObsDiam(X; −κ)` as a lower/upper sandwich | [`lipschitz`] |
//! | Laplace functional lower bounds and lattice oracles | [`lipschitz`] |
//! | Gromov / Ledoux expansion coefficients (exact, with witnesses) | [`expansion`] |
//! | spectral gap of the weighted graph Laplacian | [`spectral`] |
//! | closed-form theorem right-hand sides and the full check suite | [`bounds`], [`verify`] |
//!
//! Exact quantities (`α^ε`, both expansion coefficients, partial diameters)
//! are suprema/infima over Borel sets and are computed by pruned subset
//! enumeration, so they are only available up to a configured point limit
//! (default [`DEFAULT_EXACT_LIMIT`]). The observable diameter and the
//! Laplace functional are suprema over the 1-Lipschitz polytope; they are
//! reported as certified sandwiches (witness lower bound, duality upper
//! bound), with exhaustive lattice oracles for calibration on very small
//! spaces.
//!
//! The numeric core is generic over the scalar via [`scalar::Real`]
//! (`f32`/`f64`); the aliases at the crate root fix `f64`, which is what the
//! CLI, the JSON space documents and the check suite use.
//!
//! ## Quick start
//!
//! ```
//! use mmc_core::space::{generate, SpaceKind, DEFAULT_MAX_POINTS};
//! use mmc_core::expansion::exp_ledoux;
//! use mmc_core::DEFAULT_EXACT_LIMIT;
//!
//! let cycle = generate::<f64>(&SpaceKind::Cycle { n: 6 }, DEFAULT_MAX_POINTS).unwrap();
//! let led = exp_ledoux(&cycle, 0.5, 1.0, DEFAULT_EXACT_LIMIT).unwrap();
//! assert!((led.value.finite().unwrap() - 3.0).abs() < 1e-12);
//! ```

#![forbid(unsafe_code)]

pub mod bounds;
pub mod concentration;
pub mod enlargement;
pub mod error;
pub mod expansion;
pub mod io;
pub mod lipschitz;
pub mod mask;
pub mod scalar;
mod search;
pub mod space;
pub mod spectral;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use mask::SubsetMask;
pub use scalar::Real;

/// Largest point count accepted by the exact subset searches by default:
/// masks fit one machine word and runtimes stay at desk scale.
pub const DEFAULT_EXACT_LIMIT: usize = 22;

/// Hard cap on the configurable exact limit (`u32` masks).
pub const MAX_EXACT_LIMIT: usize = 26;

/// Concrete `f64` aliases for the generic core types.
pub type Space = space::MetricMeasureSpace<f64>;
pub type Params = space::SpaceParams<f64>;
pub type LipschitzFn = lipschitz::LipschitzFunction<f64>;
pub type Atoms = lipschitz::PushforwardAtoms<f64>;
pub type Profile = concentration::ConcentrationProfile<f64>;
