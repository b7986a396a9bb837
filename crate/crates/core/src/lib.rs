//! Mechanics and readout of suspended spiral capacitors and inductors.
//!
//! The numerical core is generic over [`Real`] (`f32`, `f64`, or the
//! quad-precision [`Extended`]); the aliases below fix it to `f64`.

pub mod beam;
pub mod constants;
pub mod electromech;
pub mod error;
pub mod geometry;
pub mod inductor;
pub mod linalg;
pub mod plot;
pub mod real;
pub mod reference;
pub mod spectrum;
pub mod vec3;

pub use error::{Error, Result};
pub use real::Real;

/// IEEE binary128 scalar, ~34 significant digits.
pub type Extended = f128::f128;

pub type SpiralSpecF64 = geometry::SpiralSpec<f64>;
pub type MaterialF64 = geometry::Material<f64>;
pub type SpiralCurveF64 = geometry::SpiralCurve<f64>;
pub type BeamMeshF64 = beam::BeamMesh<f64>;
pub type SystemMatricesF64 = beam::SystemMatrices<f64>;
pub type ModalSolutionF64 = beam::ModalSolution<f64>;
pub type ProfileF64 = beam::Profile<f64>;
pub type CouplingResultF64 = electromech::CouplingResult<f64>;
pub type InductorResultF64 = inductor::InductorResult<f64>;
pub type SpectrumF64 = spectrum::Spectrum<f64>;
pub type FitResultF64 = spectrum::FitResult<f64>;
