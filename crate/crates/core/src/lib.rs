//! Renormalisation of analytic vector fields on the 2-torus.
//!
//! The frequency slope is expanded as a continued fraction; each partial
//! quotient drives one step that rescales the field by a `GL(2,Z)` shift,
//! removes its far-from-resonance Fourier modes by a near-identity change of
//! coordinates, and renormalises the average.

pub mod number_theory;
pub mod fourier_field;
pub mod scaling_step;
pub mod normalization_step;
pub mod renorm_driver;
pub mod cli_experiments;
