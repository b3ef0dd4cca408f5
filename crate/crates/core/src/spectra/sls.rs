use rayon::prelude::*;

use super::sojourn::sojourn_time;
use super::table::{Diagnostics, GridDescription, SlsSample, SpectrumKind, SpectrumTable};
use crate::dynamics::{PhaseState, TraceLimits, itinerary, trace};
use crate::error::{Error, Result};
use crate::geometry::{Scene, Vector};
use crate::io::scene_digest;
use crate::sampling::orthonormal_complement;

/// Launch points on the tangent hyperplane `Z_omega`: a cell-centred lattice
/// with `resolution` points per axis over `[-a, a]^(d-1)`, restricted to the
/// open disk of radius `a`. Returns (in-plane coordinates, point).
pub fn impact_lattice(scene: &Scene, omega: &Vector, resolution: usize) -> Vec<(Vec<f64>, Vector)> {
    let d = scene.dimension();
    let a = scene.ball().radius;
    let c = &scene.ball().center;
    let basis = orthonormal_complement(omega);
    let step = 2.0 * a / resolution as f64;
    let base = c - omega * a;
    let total = resolution.pow((d - 1) as u32);
    (0..total)
        .filter_map(|mut idx| {
            let coords: Vec<f64> = (0..d - 1)
                .map(|_| {
                    let k = idx % resolution;
                    idx /= resolution;
                    -a + (k as f64 + 0.5) * step
                })
                .collect();
            if coords.iter().map(|b| b * b).sum::<f64>() >= a * a {
                return None;
            }
            let point = basis.iter().zip(&coords).fold(base.clone(), |p, (e, b)| p + e * *b);
            Some((coords, point))
        })
        .collect()
}

/// Sojourn times over the impact lattice for one incoming direction.
///
/// Every lattice point is a grid cell; escaped trajectories contribute one
/// sample, cut-off ones leave their cell empty and are counted.
pub fn scan_sls(scene: &Scene, omega: &Vector, resolution: usize, limits: &TraceLimits) -> Result<SpectrumTable<SlsSample>> {
    if omega.len() != scene.dimension() {
        return Err(Error::DimensionMismatch { expected: scene.dimension(), got: omega.len() });
    }
    if resolution == 0 {
        return Err(Error::Contract("impact lattice resolution must be positive".into()));
    }
    let omega = omega.normalize();
    let lattice = impact_lattice(scene, &omega, resolution);
    let cells: Vec<Option<SlsSample>> = lattice
        .par_iter()
        .map(|(coords, point)| {
            let start = PhaseState { point: point.clone(), direction: omega.clone() };
            let rec = trace(scene, &start, limits)?;
            if !rec.escaped() {
                return Ok(None);
            }
            let theta = rec.final_state.direction.clone();
            Ok(Some(SlsSample {
                sojourn: sojourn_time(scene, &rec, &omega, &theta)?,
                omega: omega.clone(),
                impact: coords.clone(),
                impact_point: point.clone(),
                theta,
                reflections: rec.reflections(),
                grazing: rec.has_grazing(),
                itinerary: itinerary(&rec),
            }))
        })
        .collect::<Result<_>>()?;

    let diagnostics = Diagnostics {
        launched: cells.len(),
        cutoff: cells.iter().filter(|c| c.is_none()).count(),
        dropped: 0,
    };
    let keys = lattice
        .iter()
        .map(|(coords, _)| omega.iter().copied().chain(coords.iter().copied()).collect())
        .collect();
    Ok(SpectrumTable {
        scene_digest: Some(scene_digest(scene)),
        grid: GridDescription {
            kind: SpectrumKind::Sls,
            label: format!("sls resolution={resolution}"),
            keys,
        },
        cells: cells.into_iter().map(|c| c.into_iter().collect()).collect(),
        diagnostics,
    })
}
