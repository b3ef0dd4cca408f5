use std::collections::HashMap;

use rayon::prelude::*;

use crate::dynamics::{PhaseState, TraceLimits, trace};
use crate::error::{Error, Result};
use crate::geometry::{Scene, Vector};
use crate::sampling::{random_inward, random_unit, rng};

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageParams {
    pub n_rays: usize,
    pub epsilon: f64,
    pub seed: u64,
    /// Boundary samples per convex body.
    pub body_samples: usize,
    /// Boundary samples per arc of a curve obstacle.
    pub arc_samples: usize,
}

impl CoverageParams {
    pub fn new(n_rays: usize, epsilon: f64, seed: u64) -> Self {
        Self { n_rays, epsilon, seed, body_samples: 720, arc_samples: 200 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageEntry {
    pub obstacle: usize,
    /// Set for the arcs of curve obstacles.
    pub arc: Option<usize>,
    pub tags: Vec<String>,
    pub samples: usize,
    pub covered: usize,
    pub coverage: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnreachedPoint {
    pub obstacle: usize,
    pub arc: Option<usize>,
    pub point: Vector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport {
    pub entries: Vec<CoverageEntry>,
    pub unreached: Vec<UnreachedPoint>,
    pub rays: usize,
    pub escaped: usize,
    /// Reflection points marked on escaped trajectories.
    pub marked: usize,
}

impl CoverageReport {
    /// Largest coverage among the entries carrying `tag`, `None` when no
    /// entry does.
    pub fn tagged_coverage(&self, tag: &str) -> Option<f64> {
        self.entries.iter().filter(|e| e.tags.iter().any(|t| t == tag)).map(|e| e.coverage).reduce(f64::max)
    }
}

/// Random inward phase states on the reference sphere: uniform position,
/// uniform direction over the inward hemisphere.
pub fn random_probes(scene: &Scene, n: usize, seed: u64) -> Vec<PhaseState> {
    let mut r = rng(seed);
    let c = &scene.ball().center;
    let a = scene.ball().radius;
    (0..n)
        .map(|_| {
            let u = random_unit(&mut r, scene.dimension());
            let direction = random_inward(&mut r, &u);
            PhaseState { point: c + &u * a, direction }
        })
        .collect()
}

type PieceKey = (usize, Option<usize>);

struct CellIndex {
    eps: f64,
    cells: HashMap<Vec<i64>, Vec<Vector>>,
}

impl CellIndex {
    fn new(eps: f64) -> Self {
        Self { eps, cells: HashMap::new() }
    }

    fn cell(&self, p: &Vector) -> Vec<i64> {
        p.iter().map(|x| (x / self.eps).floor() as i64).collect()
    }

    fn insert(&mut self, p: Vector) {
        self.cells.entry(self.cell(&p)).or_default().push(p);
    }

    fn near(&self, p: &Vector) -> bool {
        let base = self.cell(p);
        let d = base.len();
        (0..3usize.pow(d as u32)).any(|mut code| {
            let key: Vec<i64> = base
                .iter()
                .map(|k| {
                    let off = (code % 3) as i64 - 1;
                    code /= 3;
                    k + off
                })
                .collect();
            self.cells.get(&key).is_some_and(|pts| pts.iter().any(|q| (q - p).norm() <= self.eps))
        })
    }
}

/// Numeric coverage of the accessible boundary: the fraction of boundary
/// samples of each body (or arc) within `epsilon` of a non-grazing
/// reflection point of an escaped random probe on the same piece.
pub fn accessible_coverage(scene: &Scene, params: &CoverageParams, limits: &TraceLimits) -> Result<CoverageReport> {
    if params.n_rays == 0 {
        return Err(Error::Contract("coverage needs at least one ray".into()));
    }
    if !(params.epsilon > 0.0) {
        return Err(Error::Contract(format!("epsilon {} is not positive", params.epsilon)));
    }
    let probes = random_probes(scene, params.n_rays, params.seed);
    let records = probes.par_iter().map(|p| trace(scene, p, limits)).collect::<Result<Vec<_>>>()?;

    let mut index: HashMap<PieceKey, CellIndex> = HashMap::new();
    let mut escaped = 0;
    let mut marked = 0;
    for rec in records.iter().filter(|r| r.escaped()) {
        escaped += 1;
        for e in rec.events.iter().filter(|e| !e.grazing) {
            index.entry((e.obstacle, e.arc)).or_insert_with(|| CellIndex::new(params.epsilon)).insert(e.point.clone());
            marked += 1;
        }
    }

    let nb = scene.bodies().len();
    let mut pieces: Vec<(PieceKey, Vec<String>, Vec<Vector>)> = scene
        .bodies()
        .iter()
        .enumerate()
        .map(|(i, b)| ((i, None), Vec::new(), b.boundary_samples(params.body_samples)))
        .collect();
    for (k, curve) in scene.curves().iter().enumerate() {
        for (j, arc) in curve.arcs().iter().enumerate() {
            pieces.push(((nb + k, Some(j)), arc.tags.iter().cloned().collect(), arc.samples(params.arc_samples)));
        }
    }

    let mut entries = Vec::with_capacity(pieces.len());
    let mut unreached = Vec::new();
    for ((obstacle, arc), tags, samples) in pieces {
        let marks = index.get(&(obstacle, arc));
        let mut covered = 0;
        for p in samples.iter() {
            if marks.is_some_and(|m| m.near(p)) {
                covered += 1;
            } else {
                unreached.push(UnreachedPoint { obstacle, arc, point: p.clone() });
            }
        }
        entries.push(CoverageEntry {
            obstacle,
            arc,
            tags,
            samples: samples.len(),
            covered,
            coverage: covered as f64 / samples.len() as f64,
        });
    }
    Ok(CoverageReport { entries, unreached, rays: params.n_rays, escaped, marked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    #[test]
    fn empty_scene_has_empty_coverage_map() {
        let s = Scene::new(vector(&[0.0, 0.0]), 10.0).unwrap();
        let r = accessible_coverage(&s, &CoverageParams::new(100, 0.05, 1), &TraceLimits::for_scene(&s)).unwrap();
        assert!(r.entries.is_empty());
        assert_eq!(r.escaped, 100);
        assert_eq!(r.marked, 0);
    }

    #[test]
    fn probes_are_inward_and_on_the_sphere() {
        let s = Scene::new(vector(&[1.0, 2.0, 3.0]), 4.0).unwrap();
        for p in random_probes(&s, 200, 9) {
            let r = &p.point - &s.ball().center;
            assert!((r.norm() - 4.0).abs() < 1e-12);
            assert!(r.dot(&p.direction) < 0.0);
        }
        assert_eq!(random_probes(&s, 5, 9), random_probes(&s, 5, 9));
    }
}
