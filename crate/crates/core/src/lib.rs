//! Simulation and verification toolkit for the linear IMBq-type wave
//! equation
//!
//! ```text
//! u_tt - Δu - Δu_tt = 0,   u(0) = u₀,   u_t(0) = u₁,
//! ```
//!
//! whose Fourier modes oscillate at the bounded rate `f(r) = r/√(1+r²)`.
//! The crate provides
//!
//! * [`multiplier`]: the dispersion symbol and the solution multipliers,
//! * [`spectral`]: exact multiplier evolution on a periodic box, the energy
//!   functional and the resolvent solve,
//! * [`oracle`]: grid-free quadrature of `‖w(t,·)‖²_ξ` and of the data
//!   functionals, built on the shipped [`preset`]s,
//! * [`bounds`]: every inequality chain of the lower/upper growth estimates
//!   as machine-checkable [`bounds::BoundCheck`] records,
//! * [`growth`]: regime classification of norm time series.
//!
//! Norm conventions: `‖·‖_x` is the spatial `L²` norm; `‖·‖_ξ` is the `L²`
//! norm in frequency under `f̂(ξ) = ∫ e^{-ix·ξ} f(x) dx`, so that
//! `‖f̂‖²_ξ = (2π)^n ‖f‖²_x`.

pub mod bounds;
pub mod dimension;
pub mod error;
pub mod growth;
pub mod multiplier;
pub mod oracle;
pub mod preset;
pub mod quadrature;
pub mod spectral;
pub mod transform;

pub use bounds::{BoundCheck, BoundsVerifier, VerifierConfig};
pub use dimension::Dimension;
pub use error::{Error, Result};
pub use growth::{GrowthKind, GrowthModel, NormSeries};
pub use multiplier::DispersionSymbol;
pub use oracle::NormOracle;
pub use preset::{DataPreset, PresetKind};
pub use quadrature::QuadratureConfig;
pub use spectral::{GridField, GridSpec, SpectralSolver};
