//! Multipole and local expansions for the Laplace Green's function in layered media.
//!
//! Modules, bottom up: [`medium`] (layer geometry), [`densities`] (reaction densities),
//! [`harmonics`] (spherical harmonics and constants), [`sommerfeld`] (spectral integrals),
//! [`expansions`] (free-space and reaction operators) and [`lab`] (bound verification).

pub mod densities;
pub mod error;
pub mod geometry;
pub mod harmonics;
pub mod lab;
pub mod medium;
pub mod expansions;
pub mod sommerfeld;

pub use error::{Error, Result};
