//! Null electromagnetic fields built from Bateman variables, the Legendrian
//! fields they induce on the unit 3-sphere, and the numerical machinery used
//! to check their properties: field-line tracing, linking numbers, rotation
//! numbers, monodromy of closed orbits and Poynting transport.
//!
//! Everything numeric is generic over [`Real`] (implemented for `f32` and
//! `f64`). The aliases at the bottom of this file fix the scalar to `f64`,
//! which is what the tolerances in the test-suite assume.

// `!(x > 0)` also rejects NaN, which is the point
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bateman;
pub mod error;
pub mod evolve;
pub mod floquet;
pub mod flow;
pub mod funcspace;
pub mod geom;
pub mod legendrian;
pub mod ode;
pub mod rng;
pub mod scalar;
pub mod vector;

pub use error::{Error, Result};
pub use scalar::Real;

pub type S3Point = geom::S3Point<f64>;
pub type HopfFrame = geom::HopfFrame<f64>;
pub type R3Point = geom::R3Point<f64>;
pub type HopfCoords = geom::HopfCoords<f64>;
pub type MixedPoly = funcspace::MixedPoly<f64>;
pub type Generator = funcspace::Generator<f64>;
pub type WirtingerJet = funcspace::WirtingerJet<f64>;
pub type SpacetimePoint = bateman::SpacetimePoint<f64>;
pub type VariableJet = bateman::VariableJet<f64>;
pub type ComplexTriple = bateman::ComplexTriple<f64>;
pub type EmSample = bateman::EmSample<f64>;
pub type BatemanField = bateman::BatemanField<f64>;
pub type LegendrianField = legendrian::LegendrianField<f64>;
pub type S3Curve = flow::Curve<f64, 4>;
pub type R3Curve = flow::Curve<f64, 3>;
pub type MonodromyReport = floquet::MonodromyReport<f64>;
pub type NveSpec = floquet::NveSpec<f64>;
pub type TransportSpec = evolve::TransportSpec<f64>;
