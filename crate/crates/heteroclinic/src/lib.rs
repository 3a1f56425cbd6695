//! Validated manifold charts and certified heteroclinic intersection curves
//! for quadratic volume-preserving maps.
//!
//! The crate builds rigorous Taylor parameterizations of the 2D stable and
//! unstable manifolds of the fixed points of a quadratic family of 3D
//! volume-preserving diffeomorphisms, then proves existence of 1D
//! intersection curves between them with an adapted-frame interval Newton
//! method. Every claim is backed by outward-rounded interval arithmetic and
//! can be re-checked from an exported certificate.

pub mod chart;
pub mod complex;
pub mod decimal;
pub mod linalg;
pub mod lomeli;
pub mod floatmat;
pub mod interval;
pub mod rounding;
pub mod tail;
