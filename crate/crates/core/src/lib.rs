//! Numerical laboratory for billiard scattering in the exterior of finite
//! disjoint unions of strictly convex bodies.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`] holds the obstacles (balls, ellipsoids and the planar curve
//!   obstacles used by the cavity demonstration) and ray queries against them.
//! * [`dynamics`] traces billiard trajectories with specular reflection.
//! * [`spectra`] measures the two scattering observables: sojourn times over
//!   an impact-parameter lattice, and travelling times between points of the
//!   reference sphere found by shooting.
//! * [`rigidity`] compares spectra, probes reflection counts, estimates the
//!   accessible part of the boundary, reconstructs boundary points from
//!   travelling times and builds the elliptic-cavity counterexample.
//! * [`io`] reads and writes scene documents and the CSV tables.

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod io;
pub mod optimize;
pub mod rigidity;
pub mod sampling;
pub mod spectra;

pub use error::{Error, Result};
pub use geometry::{Vector, vector};
