//! The two scattering observables: sojourn times of `(omega, theta)`-rays and
//! travelling times of `(x, y)`-geodesics on the reference sphere.

mod shooting;
mod sls;
mod sojourn;
mod table;

pub use shooting::{PairGrid, SeedFan, ShootingParams, find_xy_geodesics, travelling_time_spectrum};
pub use sls::{impact_lattice, scan_sls};
pub use sojourn::sojourn_time;
pub use table::{
    Diagnostics, GridDescription, SlsSample, SpectrumKind, SpectrumTable, TimedSample, TravellingTimeSample,
};
