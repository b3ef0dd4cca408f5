use std::cell::RefCell;
use std::f64::consts::PI;

use rayon::prelude::*;

use super::table::{Diagnostics, GridDescription, SpectrumKind, SpectrumTable, TravellingTimeSample};
use crate::dynamics::{PhaseState, TraceLimits, itinerary, trace};
use crate::error::{Error, Result};
use crate::geometry::{Scene, Vector};
use crate::io::scene_digest;
use crate::optimize::{brent, nelder_mead};
use crate::sampling::{cap_directions, hemisphere_directions, orthonormal_complement, sphere_points};

/// Neighbours used to find local minima of the miss distance over the seed
/// set in three or more dimensions.
const SEED_NEIGHBOURS: usize = 8;
/// Bisection depth and smallest angular gap when refining the planar seed
/// fan across itinerary changes and exit-angle jumps.
const REFINE_DEPTH: usize = 40;
const REFINE_MIN_GAP: f64 = 1e-12;
const REFINE_JUMP: f64 = PI / 4.0;

/// Tuning of the shooting method.
#[derive(Clone, Debug, PartialEq)]
pub struct ShootingParams {
    /// Seed directions per start point.
    pub seeds: usize,
    /// Extra seeds aimed at the bounding sphere of each convex body (three
    /// or more dimensions only).
    pub body_seeds: usize,
    /// Extra traces allowed for refining a planar seed fan.
    pub refine_budget: usize,
    /// Accepted distance between the refined exit point and the target.
    pub tol: f64,
    /// Samples with equal itinerary and times closer than this are merged.
    pub dedup: f64,
    pub max_iter: usize,
}

impl ShootingParams {
    pub fn for_scene(scene: &Scene) -> Self {
        let a = scene.ball().radius;
        Self {
            seeds: if scene.dimension() == 2 { 720 } else { 2000 },
            body_seeds: if scene.dimension() == 2 { 0 } else { 1000 },
            refine_budget: 8 * 720,
            tol: 1e-7 * a,
            dedup: 1e-5 * a,
            max_iter: 200,
        }
    }
}

#[derive(Clone, Debug)]
struct Exit {
    point: Vector,
    t: f64,
    dir_out: Vector,
    reflections: usize,
    itinerary: Vec<usize>,
}

/// Launch from `x` in direction `dir` and locate the last crossing of the
/// reference sphere. `None` for cut-off trajectories.
fn shoot(scene: &Scene, x: &Vector, dir: &Vector, limits: &TraceLimits) -> Result<Option<Exit>> {
    let rec = trace(scene, &PhaseState { point: x.clone(), direction: dir.clone() }, limits)?;
    if !rec.escaped() {
        return Ok(None);
    }
    let (from, walked) = match rec.events.last() {
        Some(e) => (&e.point, e.cumulative_length),
        None => (x, 0.0),
    };
    let dir_out = rec.final_state.direction.clone();
    let Some((_, t_exit)) = scene.ball().crossings(from, &dir_out) else {
        return Ok(None);
    };
    let t_exit = t_exit.max(0.0);
    Ok(Some(Exit {
        point: from + &dir_out * t_exit,
        t: walked + t_exit,
        reflections: rec.reflections(),
        itinerary: itinerary(&rec),
        dir_out,
    }))
}

fn wrap_angle(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(2.0 * PI) - PI;
    if r == -PI { PI } else { r }
}

/// Seed trajectories from one point `x` of the reference sphere, reused for
/// every target `y`.
pub struct SeedFan<'a> {
    scene: &'a Scene,
    limits: &'a TraceLimits,
    params: &'a ShootingParams,
    x: Vector,
    inward: Vector,
    basis: Vec<Vector>,
    /// Planar launch angles from the inward normal, increasing.
    angles: Vec<f64>,
    directions: Vec<Vector>,
    exits: Vec<Option<Exit>>,
    neighbours: Vec<Vec<usize>>,
}

impl<'a> SeedFan<'a> {
    pub fn launch(scene: &'a Scene, x: &Vector, params: &'a ShootingParams, limits: &'a TraceLimits) -> Result<Self> {
        let c = &scene.ball().center;
        let a = scene.ball().radius;
        if x.len() != scene.dimension() {
            return Err(Error::DimensionMismatch { expected: scene.dimension(), got: x.len() });
        }
        if ((x - c).norm() - a).abs() > 1e-9 * a.max(1.0) {
            return Err(Error::Contract("start point is not on the reference sphere".into()));
        }
        let inward = (c - x).normalize();
        let basis = orthonormal_complement(&inward);
        let mut fan = Self {
            scene,
            limits,
            params,
            x: x.clone(),
            inward,
            basis,
            angles: Vec::new(),
            directions: Vec::new(),
            exits: Vec::new(),
            neighbours: Vec::new(),
        };
        if scene.dimension() == 2 {
            fan.launch_planar()?;
        } else {
            fan.launch_spatial()?;
        }
        Ok(fan)
    }

    fn launch_planar(&mut self) -> Result<()> {
        let n = self.params.seeds;
        let seeds: Vec<(f64, Option<Exit>)> = (0..n)
            .map(|k| {
                let phi = -PI / 2.0 + (k as f64 + 0.5) * PI / n as f64;
                Ok((phi, shoot(self.scene, &self.x, &self.planar_direction(phi), self.limits)?))
            })
            .collect::<Result<_>>()?;
        let pts = self.refine(seeds)?;
        self.directions = pts.iter().map(|(phi, _)| self.planar_direction(*phi)).collect();
        (self.angles, self.exits) = pts.into_iter().unzip();
        Ok(())
    }

    fn needs_split(&self, a: &Option<Exit>, b: &Option<Exit>) -> bool {
        match (a, b) {
            (Some(a), Some(b)) => {
                a.itinerary != b.itinerary
                    || wrap_angle(self.angle_of(&a.point) - self.angle_of(&b.point)).abs() > REFINE_JUMP
            }
            (None, None) => false,
            _ => true,
        }
    }

    /// Bisects, level by level, between neighbouring seeds that straddle an
    /// itinerary change or a large exit jump. Stops at the depth limit, at the
    /// minimum gap, or before a level that would exceed the trace budget.
    fn refine(&self, mut pts: Vec<(f64, Option<Exit>)>) -> Result<Vec<(f64, Option<Exit>)>> {
        let mut budget = self.params.refine_budget;
        for _ in 0..REFINE_DEPTH {
            let split: Vec<usize> = (0..pts.len().saturating_sub(1))
                .filter(|&i| pts[i + 1].0 - pts[i].0 >= REFINE_MIN_GAP && self.needs_split(&pts[i].1, &pts[i + 1].1))
                .collect();
            if split.is_empty() || split.len() > budget {
                break;
            }
            budget -= split.len();
            let mids = split
                .iter()
                .map(|&i| {
                    let m = 0.5 * (pts[i].0 + pts[i + 1].0);
                    Ok((i, (m, shoot(self.scene, &self.x, &self.planar_direction(m), self.limits)?)))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut next = Vec::with_capacity(pts.len() + mids.len());
            let mut mids = mids.into_iter().peekable();
            for (i, p) in pts.into_iter().enumerate() {
                next.push(p);
                if mids.peek().is_some_and(|(j, _)| *j == i) {
                    next.push(mids.next().expect("peeked").1);
                }
            }
            pts = next;
        }
        Ok(pts)
    }

    fn launch_spatial(&mut self) -> Result<()> {
        let mut directions = hemisphere_directions(&self.inward, self.params.seeds);
        if self.params.body_seeds > 0 {
            for b in self.scene.bodies() {
                let to = b.center() - &self.x;
                let dist = to.norm();
                let half = (1.05 * b.bounding_radius() / dist).min(1.0).asin();
                directions.extend(
                    cap_directions(&to, half, self.params.body_seeds)
                        .into_iter()
                        .filter(|u| u.dot(&self.inward) > 0.0),
                );
            }
        }
        self.exits = directions
            .iter()
            .map(|u| shoot(self.scene, &self.x, u, self.limits))
            .collect::<Result<Vec<_>>>()?;
        self.neighbours = nearest_neighbours(&directions);
        self.directions = directions;
        Ok(())
    }

    pub fn diagnostics(&self) -> Diagnostics {
        Diagnostics {
            launched: self.exits.len(),
            cutoff: self.exits.iter().filter(|e| e.is_none()).count(),
            dropped: 0,
        }
    }

    fn angle_of(&self, p: &Vector) -> f64 {
        let q = p - &self.scene.ball().center;
        q[1].atan2(q[0])
    }

    /// Direction at angle `phi` from the inward normal (planar case).
    fn planar_direction(&self, phi: f64) -> Vector {
        &self.inward * phi.cos() + &self.basis[0] * phi.sin()
    }

    fn sample(&self, y: &Vector, dir: Vector, exit: Exit) -> TravellingTimeSample {
        TravellingTimeSample {
            x: self.x.clone(),
            y: y.clone(),
            t: exit.t,
            reflections: exit.reflections,
            residual: (&exit.point - y).norm(),
            itinerary: exit.itinerary,
            dir_in: dir,
            dir_out: exit.dir_out,
            exit_point: exit.point,
        }
    }

    /// All `(x, y)`-geodesics resolved from this fan.
    pub fn solve(&self, y: &Vector) -> Result<(Vec<TravellingTimeSample>, Diagnostics)> {
        let c = &self.scene.ball().center;
        let a = self.scene.ball().radius;
        if ((y - c).norm() - a).abs() > 1e-9 * a.max(1.0) {
            return Err(Error::Contract("target point is not on the reference sphere".into()));
        }
        if (y - &self.x).norm() == 0.0 {
            return Err(Error::Contract("x and y coincide".into()));
        }
        let (samples, dropped) =
            if self.scene.dimension() == 2 { self.solve_planar(y)? } else { self.solve_spatial(y)? };
        let diagnostics = Diagnostics { launched: 0, cutoff: 0, dropped };
        Ok((dedup(samples, self.params.dedup), diagnostics))
    }

    /// Bracket sign changes of the wrapped exit-angle miss between
    /// consecutive seeds and refine each with Brent's method.
    fn solve_planar(&self, y: &Vector) -> Result<(Vec<TravellingTimeSample>, usize)> {
        let psi_y = self.angle_of(y);
        let miss: Vec<Option<f64>> = self
            .exits
            .iter()
            .map(|e| e.as_ref().map(|e| wrap_angle(self.angle_of(&e.point) - psi_y)))
            .collect();
        let mut samples = Vec::new();
        let mut dropped = 0;
        for k in 0..miss.len().saturating_sub(1) {
            let (Some(ga), Some(gb)) = (miss[k], miss[k + 1]) else { continue };
            let (pa, pb) = (self.angles[k], self.angles[k + 1]);
            if ga == 0.0 {
                if let Some(exit) = self.exits[k].clone() {
                    samples.push(self.sample(y, self.directions[k].clone(), exit));
                }
                continue;
            }
            if ga * gb >= 0.0 || (ga - gb).abs() >= PI {
                continue;
            }
            let failure: RefCell<Option<Error>> = RefCell::new(None);
            let g = |phi: f64| -> f64 {
                match shoot(self.scene, &self.x, &self.planar_direction(phi), self.limits) {
                    Ok(Some(e)) => wrap_angle(self.angle_of(&e.point) - psi_y),
                    Ok(None) => 0.0,
                    Err(err) => {
                        failure.borrow_mut().get_or_insert(err);
                        0.0
                    }
                }
            };
            let (phi, _) = brent(g, pa, pb, ga, gb, 1e-16, self.params.max_iter);
            if let Some(err) = failure.into_inner() {
                return Err(err);
            }
            let dir = self.planar_direction(phi);
            match shoot(self.scene, &self.x, &dir, self.limits)? {
                Some(exit) if (&exit.point - y).norm() < self.params.tol => samples.push(self.sample(y, dir, exit)),
                _ => dropped += 1,
            }
        }
        Ok((samples, dropped))
    }

    /// Local minima of the miss distance over the seed set, grouped by
    /// itinerary, refined with Nelder-Mead on the tangent coordinates of the
    /// launch direction.
    fn solve_spatial(&self, y: &Vector) -> Result<(Vec<TravellingTimeSample>, usize)> {
        let a = self.scene.ball().radius;
        let miss: Vec<Option<f64>> =
            self.exits.iter().map(|e| e.as_ref().map(|e| (&e.point - y).norm())).collect();
        let mut samples = Vec::new();
        let mut dropped = 0;
        for (k, m) in miss.iter().enumerate() {
            let Some(m) = *m else { continue };
            if m > 0.5 * a {
                continue;
            }
            let it = &self.exits[k].as_ref().map(|e| &e.itinerary);
            let is_min = self.neighbours[k].iter().all(|&j| match (&miss[j], &self.exits[j]) {
                (Some(mj), Some(ej)) if Some(&ej.itinerary) == *it => m <= *mj,
                _ => true,
            });
            if !is_min {
                continue;
            }
            let u0 = &self.directions[k];
            let step = 0.5
                * self.neighbours[k].iter().map(|&j| (&self.directions[j] - u0).norm()).fold(f64::INFINITY, f64::min);
            let tangent = orthonormal_complement(u0);
            let dir_of = |alpha: &[f64]| -> Vector {
                tangent.iter().zip(alpha).fold(u0.clone(), |u, (e, s)| u + e * *s).normalize()
            };
            let failure: RefCell<Option<Error>> = RefCell::new(None);
            let objective = |alpha: &[f64]| -> f64 {
                match shoot(self.scene, &self.x, &dir_of(alpha), self.limits) {
                    Ok(Some(e)) => (&e.point - y).norm_squared(),
                    Ok(None) => 16.0 * a * a,
                    Err(err) => {
                        failure.borrow_mut().get_or_insert(err);
                        16.0 * a * a
                    }
                }
            };
            let ftol = (1e-3 * self.params.tol).powi(2);
            let (alpha, _) = nelder_mead(objective, &vec![0.0; tangent.len()], step, ftol, 3 * self.params.max_iter);
            if let Some(err) = failure.into_inner() {
                return Err(err);
            }
            let dir = dir_of(&alpha);
            match shoot(self.scene, &self.x, &dir, self.limits)? {
                Some(exit) if (&exit.point - y).norm() < self.params.tol => samples.push(self.sample(y, dir, exit)),
                _ => dropped += 1,
            }
        }
        Ok((samples, dropped))
    }
}

fn nearest_neighbours(points: &[Vector]) -> Vec<Vec<usize>> {
    points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let mut d: Vec<(f64, usize)> = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, q)| ((p - q).norm_squared(), j))
                .collect();
            let k = SEED_NEIGHBOURS.min(d.len());
            if k > 0 {
                d.select_nth_unstable_by(k - 1, |x, y| x.0.total_cmp(&y.0));
            }
            d.truncate(k);
            d.into_iter().map(|(_, j)| j).collect()
        })
        .collect()
}

/// Sort by time and merge samples with equal itinerary whose times agree
/// within `delta`, keeping the smaller residual.
fn dedup(mut samples: Vec<TravellingTimeSample>, delta: f64) -> Vec<TravellingTimeSample> {
    samples.sort_by(|a, b| a.t.total_cmp(&b.t).then_with(|| a.itinerary.cmp(&b.itinerary)));
    let mut out: Vec<TravellingTimeSample> = Vec::with_capacity(samples.len());
    for s in samples {
        if let Some(prev) = out.iter_mut().rev().find(|p| p.itinerary == s.itinerary && (p.t - s.t).abs() < delta) {
            if s.residual < prev.residual {
                *prev = s;
            }
        } else {
            out.push(s);
        }
    }
    out.sort_by(|a, b| a.t.total_cmp(&b.t).then_with(|| a.itinerary.cmp(&b.itinerary)));
    out
}

/// Travelling times of all `(x, y)`-geodesics found by shooting from `x`.
/// The list may be empty or miss long, poorly resolved branches.
pub fn find_xy_geodesics(
    scene: &Scene,
    x: &Vector,
    y: &Vector,
    params: &ShootingParams,
    limits: &TraceLimits,
) -> Result<Vec<TravellingTimeSample>> {
    Ok(SeedFan::launch(scene, x, params, limits)?.solve(y)?.0)
}

/// Ordered point pairs on the reference sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct PairGrid {
    pub points: Vec<Vector>,
    /// Index pairs `(i, j)`, sorted by `i` then `j`.
    pub pairs: Vec<(usize, usize)>,
    pub min_separation_deg: f64,
}

impl PairGrid {
    /// `n` points on the sphere (equal angles in the plane, Fibonacci lattice
    /// in space) and all ordered pairs separated by more than
    /// `min_separation_deg`.
    pub fn on_sphere(scene: &Scene, n: usize, min_separation_deg: f64) -> Self {
        let c = &scene.ball().center;
        let a = scene.ball().radius;
        let points = sphere_points(scene.dimension(), n).into_iter().map(|u| c + u * a).collect();
        Self::from_points(scene, points, min_separation_deg)
    }

    pub fn from_points(scene: &Scene, points: Vec<Vector>, min_separation_deg: f64) -> Self {
        let c = &scene.ball().center;
        let cos_max = min_separation_deg.to_radians().cos();
        let mut pairs = Vec::new();
        for (i, p) in points.iter().enumerate() {
            for (j, q) in points.iter().enumerate() {
                let (u, v) = ((p - c).normalize(), (q - c).normalize());
                if i != j && u.dot(&v) < cos_max {
                    pairs.push((i, j));
                }
            }
        }
        Self { points, pairs, min_separation_deg }
    }

    pub fn keys(&self) -> Vec<Vec<f64>> {
        self.pairs
            .iter()
            .map(|&(i, j)| self.points[i].iter().chain(self.points[j].iter()).copied().collect())
            .collect()
    }
}

/// Travelling-time spectrum over a pair grid. Each start point's seed fan is
/// traced once and shared by all its targets; cells follow the pair order.
pub fn travelling_time_spectrum(
    scene: &Scene,
    grid: &PairGrid,
    params: &ShootingParams,
    limits: &TraceLimits,
) -> Result<SpectrumTable<TravellingTimeSample>> {
    if !grid.pairs.windows(2).all(|w| w[0] <= w[1]) {
        return Err(Error::Contract("pair grid must be sorted".into()));
    }
    let starts: Vec<usize> = {
        let mut s: Vec<usize> = grid.pairs.iter().map(|p| p.0).collect();
        s.dedup();
        s
    };
    let per_start: Vec<(Vec<Vec<TravellingTimeSample>>, Diagnostics)> = starts
        .par_iter()
        .map(|&i| {
            let fan = SeedFan::launch(scene, &grid.points[i], params, limits)?;
            let mut diag = fan.diagnostics();
            let mut cells = Vec::new();
            for &(_, j) in grid.pairs.iter().filter(|p| p.0 == i) {
                let (samples, d) = fan.solve(&grid.points[j])?;
                diag += d;
                cells.push(samples);
            }
            Ok((cells, diag))
        })
        .collect::<Result<_>>()?;

    let mut diagnostics = Diagnostics::default();
    let mut cells = Vec::with_capacity(grid.pairs.len());
    for (c, d) in per_start {
        cells.extend(c);
        diagnostics += d;
    }
    Ok(SpectrumTable {
        scene_digest: Some(scene_digest(scene)),
        grid: GridDescription {
            kind: SpectrumKind::Travel,
            label: format!(
                "travel points={} min_separation_deg={} seeds={}",
                grid.points.len(),
                grid.min_separation_deg,
                params.seeds
            ),
            keys: grid.keys(),
        },
        cells,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ConvexBody, vector};

    fn disk_scene() -> Scene {
        Scene::new(vector(&[0.0, 0.0]), 10.0)
            .unwrap()
            .with_body(ConvexBody::ball(vector(&[0.0, 0.0]), 1.0).unwrap())
            .unwrap()
    }

    fn on_circle(deg: f64) -> Vector {
        let r = deg.to_radians();
        vector(&[10.0 * r.cos(), 10.0 * r.sin()])
    }

    fn fermat(x: &Vector, y: &Vector, n: usize) -> f64 {
        (0..n)
            .map(|k| {
                let s = 2.0 * PI * k as f64 / n as f64;
                let p = vector(&[s.cos(), s.sin()]);
                (x - &p).norm() + (&p - y).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn solve(scene: &Scene, x: &Vector, y: &Vector) -> Vec<TravellingTimeSample> {
        find_xy_geodesics(scene, x, y, &ShootingParams::for_scene(scene), &TraceLimits::for_scene(scene)).unwrap()
    }

    #[test]
    fn empty_scene_chords() {
        let s = Scene::new(vector(&[0.0, 0.0]), 10.0).unwrap();
        let r = solve(&s, &on_circle(180.0), &on_circle(0.0));
        assert_eq!(r.len(), 1);
        assert!((r[0].t - 20.0).abs() < 1e-9);
        let r = solve(&s, &on_circle(180.0), &on_circle(90.0));
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].reflections, 0);
        assert!((r[0].t - 200f64.sqrt()).abs() < 1e-7);
    }

    #[test]
    fn one_reflection_time_is_the_fermat_minimum() {
        let s = disk_scene();
        for (dx, dy) in [(180.0, 90.0), (200.0, 60.0), (135.0, 20.0)] {
            let (x, y) = (on_circle(dx), on_circle(dy));
            let r = solve(&s, &x, &y);
            let one: Vec<_> = r.iter().filter(|t| t.reflections == 1).collect();
            assert_eq!(one.len(), 1, "{dx} {dy}: {r:?}");
            assert!((one[0].t - fermat(&x, &y, 200_000)).abs() < 1e-6);
            assert!(r.iter().any(|t| t.reflections == 0 && (t.t - (&x - &y).norm()).abs() < 1e-6));
        }
    }

    #[test]
    fn blocked_chord_has_no_geodesic() {
        let r = solve(&disk_scene(), &on_circle(180.0), &on_circle(0.0));
        assert!(r.iter().all(|t| t.reflections != 1), "{r:?}");
    }

    #[test]
    fn reciprocity_and_triangle_bound() {
        let s = Scene::new(vector(&[0.0, 0.0]), 10.0)
            .unwrap()
            .with_body(ConvexBody::ball(vector(&[-2.0, 0.0]), 1.0).unwrap())
            .unwrap()
            .with_body(ConvexBody::ball(vector(&[2.5, 1.0]), 1.2).unwrap())
            .unwrap();
        let (x, y) = (on_circle(170.0), on_circle(-20.0));
        let fwd = solve(&s, &x, &y);
        let back = solve(&s, &y, &x);
        assert!(!fwd.is_empty());
        let tf: Vec<f64> = fwd.iter().map(|t| t.t).collect();
        let tb: Vec<f64> = back.iter().map(|t| t.t).collect();
        assert_eq!(tf.len(), tb.len(), "{tf:?} {tb:?}");
        for (a, b) in tf.iter().zip(&tb) {
            assert!((a - b).abs() < 1e-6, "{fwd:#?} {back:#?}");
        }
        for t in &fwd {
            assert!(t.t >= (&x - &y).norm() - 1e-9);
            assert!(t.residual < 1e-6);
        }
    }

    #[test]
    fn spatial_one_reflection() {
        let s = Scene::new(vector(&[0.0, 0.0, 0.0]), 10.0)
            .unwrap()
            .with_body(ConvexBody::ball(vector(&[0.0, 0.0, 0.0]), 1.0).unwrap())
            .unwrap();
        let x = vector(&[-10.0, 0.0, 0.0]);
        let y = vector(&[0.0, 10.0, 0.0]);
        let r = solve(&s, &x, &y);
        let one: Vec<_> = r.iter().filter(|t| t.reflections == 1).collect();
        assert_eq!(one.len(), 1, "{r:?}");
        // The reflection point lies in the plane of x, y and the center.
        let x2 = vector(&[-10.0, 0.0]);
        let y2 = vector(&[0.0, 10.0]);
        assert!((one[0].t - fermat(&x2, &y2, 200_000)).abs() < 1e-5);
    }

    #[test]
    fn spectrum_is_deterministic() {
        let s = disk_scene();
        let grid = PairGrid::on_sphere(&s, 8, 1.0);
        let p = ShootingParams { seeds: 180, ..ShootingParams::for_scene(&s) };
        let l = TraceLimits::for_scene(&s);
        let a = travelling_time_spectrum(&s, &grid, &p, &l).unwrap();
        let b = travelling_time_spectrum(&s, &grid, &p, &l).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cells.len(), 56);
    }
}
