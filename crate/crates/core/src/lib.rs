//! Exact series algebra for multiplicative genera (L, A-hat, Todd) together with
//! the quantum-oscillator thermodynamics that reproduces them: closed-form and
//! truncated partition functions, Chern-character traces over finite and
//! degenerate spectra, Matsubara-product representations, and the
//! spectral-asymmetry index density with verified quadrature.
//!
//! The algebraic backbone is [`series::PowerSeries`], a truncated formal power
//! series over arbitrary-precision rationals; every genus identity in [`genus`]
//! and every series-side contract in [`thermo`] is checked coefficient-exactly,
//! with no floating point. The numeric side ([`thermo`], [`trace_geom`],
//! [`asymmetry`]) is binary64 throughout, with series branches guarding the
//! small-argument cancellation regions.

pub mod asymmetry;
pub mod genus;
pub mod quad;
pub mod rational;
pub mod series;
pub mod thermo;
pub mod trace_geom;

pub use quad::QuadratureResult;
pub use rational::Rational;
pub use series::PowerSeries;
