//! Numerical laboratory for N-coupled cubic Schrödinger systems
//!
//!     i ∂_t u_j + Δ u_j + F_j(u) = 0,   F_j = ½ ∂_{z̄_j} g,
//!
//! where g: ℂᴺ → ℝ is a gauge-invariant quartic polynomial with real
//! coefficients. The crate computes scalar and system ground states, the
//! sharp mass-energy scattering thresholds, evolves fields on a periodic box
//! with a Strang split-step spectral integrator, and verifies the structural
//! identities the conservation laws and blowup criteria rest on: charge and
//! Euler identities of the nonlinearity, Galilean boost energy identities,
//! and truncated virial identities.
//!
//! All numerics are generic over the scalar type via [`num::Real`]; concrete
//! `f64` aliases are exported at the crate root.

pub mod diagnostics;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod num;
pub mod polynomial;
pub mod profile;
pub mod solver;
pub mod variational;

pub use error::{Error, Result};
pub use num::{Real, C};

/// Crate-standard double-precision aliases.
pub type GaugePolynomial64 = polynomial::GaugePolynomial<f64>;
pub type FieldState64 = field::FieldState<f64>;
pub type GridDescriptor64 = grid::GridDescriptor<f64>;
pub type RadialProfile64 = profile::RadialProfile<f64>;
pub type FunctionalRecord64 = variational::FunctionalRecord<f64>;
