//! A non-convex obstacle whose scattering data cannot see part of its
//! boundary: a thick shell around a half-ellipse cavity, open between the
//! foci through a short channel. Rays entering the cavity between the foci
//! leave between the foci after one reflection, so the cavity floor outside
//! the foci is never touched and can be reshaped without changing any
//! travelling time.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use super::compare::{DiscrepancyReport, compare_spectra};
use crate::dynamics::{PhaseState, TraceLimits, reflect, trace};
use crate::error::{Error, Result};
use crate::geometry::{Arc, CurveObstacle, Scene, vector};
use crate::sampling::rng;
use crate::spectra::{PairGrid, ShootingParams, SpectrumTable, TravellingTimeSample, travelling_time_spectrum};

pub const HIDDEN_TAG: &str = "hidden";

/// Shape of the cavity floor outside the foci.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LivshitsVariant {
    /// H1: a small half-ellipse pocket on each side.
    Pocket,
    /// H2: flat.
    Flat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LivshitsParams {
    /// Semi-major axis of the cavity ellipse.
    pub semi_major: f64,
    /// Half the distance between the foci.
    pub focal: f64,
    /// Half-width of the opening.
    pub aperture: f64,
    pub wall: f64,
    /// Depth of the channel below the focal line.
    pub depth: f64,
    pub pocket_center: f64,
    pub pocket_half_width: f64,
    pub pocket_depth: f64,
    pub ball_radius: f64,
    pub aperture_rays: usize,
    pub focal_rays: usize,
    /// Points on the reference circle for the travelling-time comparison.
    pub grid_points: usize,
    pub seed: u64,
    /// Comparison tolerance relative to the ball radius.
    pub relative_tol: f64,
}

impl Default for LivshitsParams {
    fn default() -> Self {
        Self {
            semi_major: 2.0,
            focal: 1.0,
            aperture: 1.0,
            wall: 0.5,
            depth: 0.6,
            pocket_center: 1.5,
            pocket_half_width: 0.3,
            pocket_depth: 0.25,
            ball_radius: 5.0,
            aperture_rays: 100_000,
            focal_rays: 1000,
            grid_points: 24,
            seed: 1,
            relative_tol: 1e-6,
        }
    }
}

impl LivshitsParams {
    pub fn semi_minor(&self) -> f64 {
        (self.semi_major * self.semi_major - self.focal * self.focal).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Contract(m));
        if !(self.focal > 0.0 && self.semi_major > self.focal) {
            return bad(format!("need 0 < focal ({}) < semi_major ({})", self.focal, self.semi_major));
        }
        if !(self.aperture > 0.0) {
            return bad(format!("aperture {} is not positive", self.aperture));
        }
        if self.aperture > self.focal {
            return bad(format!(
                "foci outside aperture: aperture half-width {} exceeds the focal half-distance {}",
                self.aperture, self.focal
            ));
        }
        if !(self.wall > 0.0 && self.depth > 0.0) {
            return bad("wall and depth must be positive".into());
        }
        let (lo, hi) = (self.pocket_center - self.pocket_half_width, self.pocket_center + self.pocket_half_width);
        if !(self.pocket_half_width > 0.0 && lo > self.focal && hi < self.semi_major) {
            return bad(format!("pocket [{lo}, {hi}] must lie strictly between the focus and the ellipse"));
        }
        if !(self.pocket_depth > 0.0 && self.pocket_depth < self.depth) {
            return bad(format!("pocket depth {} must be in (0, depth)", self.pocket_depth));
        }
        Ok(())
    }
}

fn floor(params: &LivshitsParams, variant: LivshitsVariant, side: f64) -> Vec<Arc> {
    let (c, a) = (params.focal, params.semi_major);
    let (pc, pw, pd) = (side * params.pocket_center, params.pocket_half_width, params.pocket_depth);
    let pieces = match variant {
        LivshitsVariant::Flat => vec![Arc::segment([side * c, 0.0], [side * a, 0.0])],
        LivshitsVariant::Pocket => vec![
            Arc::segment([side * c, 0.0], [pc - side * pw, 0.0]),
            Arc::elliptic([pc, 0.0], [pw, pd], if side > 0.0 { PI } else { 2.0 * PI }, if side > 0.0 { 2.0 * PI } else { PI }),
            Arc::segment([pc + side * pw, 0.0], [side * a, 0.0]),
        ],
    };
    let pieces: Vec<Arc> = pieces.into_iter().map(|p| p.tagged(HIDDEN_TAG)).collect();
    if side > 0.0 { pieces } else { pieces.into_iter().rev().map(reversed).collect() }
}

fn reversed(arc: Arc) -> Arc {
    use crate::geometry::ArcGeometry;
    let geometry = match arc.geometry {
        ArcGeometry::Segment { start, end } => ArcGeometry::Segment { start: end, end: start },
        ArcGeometry::Elliptic { center, semiaxes, angle_start, angle_end } => {
            ArcGeometry::Elliptic { center, semiaxes, angle_start: angle_end, angle_end: angle_start }
        }
    };
    Arc { geometry, tags: arc.tags }
}

/// Index of the cavity ellipse among the arcs of [`livshits_scene`].
fn cavity_arc(params: &LivshitsParams, variant: LivshitsVariant) -> usize {
    let inner = usize::from(params.aperture < params.focal);
    1 + inner + floor(params, variant, 1.0).len()
}

pub fn livshits_scene(params: &LivshitsParams, variant: LivshitsVariant) -> Result<Scene> {
    params.validate()?;
    let (a, b, c, h, d) = (params.semi_major, params.semi_minor(), params.focal, params.aperture, params.depth);
    let outer = a + params.wall;
    let mut arcs = vec![Arc::segment([h, -d], [h, 0.0])];
    if h < c {
        arcs.push(Arc::segment([h, 0.0], [c, 0.0]));
    }
    arcs.extend(floor(params, variant, 1.0));
    arcs.push(Arc::elliptic([0.0, 0.0], [a, b], 0.0, PI));
    arcs.extend(floor(params, variant, -1.0));
    if h < c {
        arcs.push(Arc::segment([-c, 0.0], [-h, 0.0]));
    }
    arcs.extend([
        Arc::segment([-h, 0.0], [-h, -d]),
        Arc::segment([-h, -d], [-outer, -d]),
        Arc::segment([-outer, -d], [-outer, 0.0]),
        Arc::elliptic([0.0, 0.0], [outer, b + params.wall], PI, 0.0),
        Arc::segment([outer, 0.0], [outer, -d]),
        Arc::segment([outer, -d], [h, -d]),
    ]);
    Scene::new(vector(&[0.0, 0.0]), params.ball_radius)?.with_curve(CurveObstacle::new(arcs)?)
}

/// Largest distance from the second focus to the reflected line of rays
/// leaving the first focus upward at `n` equally spaced angles.
pub fn focal_reflection_error(params: &LivshitsParams, n: usize) -> Result<f64> {
    params.validate()?;
    let ellipse = Arc::elliptic([0.0, 0.0], [params.semi_major, params.semi_minor()], 0.0, PI);
    let (fa, fb) = (vector(&[-params.focal, 0.0]), vector(&[params.focal, 0.0]));
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let phi = PI * (k as f64 + 0.5) / n as f64;
        let v = vector(&[phi.cos(), phi.sin()]);
        let hit = ellipse
            .ray_intersect(&fa, &v, 0.0)
            .ok_or_else(|| Error::Contract("focal ray missed the ellipse".into()))?;
        let w = reflect(&v, &hit.normal);
        let q = &fb - &hit.point;
        worst = worst.max((w[0] * q[1] - w[1] * q[0]).abs());
    }
    Ok(worst)
}

/// Where a ray entering the cavity at `(x0, 0)` with angle `angle` to the
/// focal line crosses that line again after reflecting off the ellipse.
pub fn exit_crossing(params: &LivshitsParams, x0: f64, angle: f64) -> Result<f64> {
    params.validate()?;
    let ellipse = Arc::elliptic([0.0, 0.0], [params.semi_major, params.semi_minor()], 0.0, PI);
    let v = vector(&[angle.cos(), angle.sin()]);
    let hit = ellipse
        .ray_intersect(&vector(&[x0, 0.0]), &v, 0.0)
        .ok_or_else(|| Error::Contract("entering ray missed the ellipse".into()))?;
    let w = reflect(&v, &hit.normal);
    if !(w[1] < 0.0) {
        return Err(Error::Contract("reflected ray does not return to the focal line".into()));
    }
    Ok(hit.point[0] - hit.point[1] * w[0] / w[1])
}

/// Rays from random points of the lower half of the reference circle aimed
/// at uniform points of the opening.
pub fn aperture_rays(params: &LivshitsParams, n: usize, seed: u64) -> Vec<PhaseState> {
    let mut r = rng(seed);
    let a = params.ball_radius;
    (0..n)
        .map(|_| {
            let psi = PI + PI * r.random::<f64>();
            let target = params.aperture * (2.0 * r.random::<f64>() - 1.0);
            let point = vector(&[a * psi.cos(), a * psi.sin()]);
            let direction = (vector(&[target, 0.0]) - &point).normalize();
            PhaseState { point, direction }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct LivshitsReport {
    pub focal_error: f64,
    /// `(x0, angle in degrees, exit crossing)` of the entering-ray checks.
    pub exit_checks: Vec<(f64, f64, f64)>,
    pub exits_between_foci: bool,
    pub aperture_rays: usize,
    /// Rays touching a hidden arc in the pocket and the flat scene.
    pub hidden_hits: [usize; 2],
    pub spectra: [SpectrumTable<TravellingTimeSample>; 2],
    pub comparison: DiscrepancyReport,
}

fn hidden_hit_count(scene: &Scene, rays: &[PhaseState], limits: &TraceLimits) -> Result<usize> {
    let curve = &scene.curves()[0];
    let nb = scene.bodies().len();
    let touched = rays
        .par_iter()
        .map(|p| {
            let rec = trace(scene, p, limits)?;
            Ok(rec.events.iter().any(|e| {
                e.obstacle == nb && e.arc.is_some_and(|j| curve.arcs()[j].has_tag(HIDDEN_TAG))
            }))
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(touched.into_iter().filter(|t| *t).count())
}

pub fn livshits_demo(params: &LivshitsParams) -> Result<LivshitsReport> {
    let pocket = livshits_scene(params, LivshitsVariant::Pocket)?;
    let flat = livshits_scene(params, LivshitsVariant::Flat)?;
    debug_assert!(pocket.curves()[0].arcs()[cavity_arc(params, LivshitsVariant::Pocket)].tags.is_empty());

    let focal_error = focal_reflection_error(params, params.focal_rays)?;
    let mut exit_checks = Vec::new();
    for x0 in [-0.5, 0.0, 0.5].map(|s| s * params.aperture) {
        for deg in [30.0, 60.0, 90.0, 120.0, 150.0] {
            exit_checks.push((x0, deg, exit_crossing(params, x0, f64::to_radians(deg))?));
        }
    }
    let exits_between_foci = exit_checks.iter().all(|&(_, _, x)| x.abs() < params.focal);

    let limits = TraceLimits::for_scene(&pocket);
    let rays = aperture_rays(params, params.aperture_rays, params.seed);
    let hidden_hits = [hidden_hit_count(&pocket, &rays, &limits)?, hidden_hit_count(&flat, &rays, &limits)?];

    let grid = PairGrid::on_sphere(&pocket, params.grid_points, 1.0);
    let shooting = ShootingParams::for_scene(&pocket);
    let spectra = [
        travelling_time_spectrum(&pocket, &grid, &shooting, &limits)?,
        travelling_time_spectrum(&flat, &grid, &shooting, &limits)?,
    ];
    let comparison = compare_spectra(&spectra[0], &spectra[1], params.relative_tol * params.ball_radius)?;
    Ok(LivshitsReport {
        focal_error,
        exit_checks,
        exits_between_foci,
        aperture_rays: rays.len(),
        hidden_hits,
        spectra,
        comparison,
    })
}
