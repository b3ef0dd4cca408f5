//! Experiments on scattering data: spectra comparison, reflection-count
//! probes, accessible-boundary coverage, reconstruction from travelling
//! times and the elliptic-cavity counterexample.

mod compare;
mod coverage;
mod livshits;
mod probe;
mod reconstruct;

pub use compare::{DISTINGUISHABLE_FRACTION, DiscrepancyReport, Verdict, compare_spectra, hausdorff_times};
pub use coverage::{CoverageEntry, CoverageParams, CoverageReport, UnreachedPoint, accessible_coverage, random_probes};
pub use livshits::{
    HIDDEN_TAG, LivshitsParams, LivshitsReport, LivshitsVariant, aperture_rays, focal_reflection_error,
    livshits_demo, livshits_scene,
};
pub use probe::{ProbeComparison, reflection_count_probe, rotate_probe};
pub use reconstruct::{
    BoundaryEstimate, EstimatedPoint, boundary_truth, point_set_hausdorff, reconstruct_boundary, reflection_point,
    truth_coverage,
};
