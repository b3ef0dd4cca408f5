//! Billiard trajectories in the exterior of the obstacle.

use crate::error::{Error, Result};
use crate::geometry::{Scene, Vector};

pub const DEFAULT_MAX_REFLECTIONS: usize = 10_000;
/// Default path-length cutoff in units of the ball radius.
pub const DEFAULT_PATH_FACTOR: f64 = 1e4;

/// A point of the unit sphere bundle: position and unit direction.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseState {
    pub point: Vector,
    pub direction: Vector,
}

impl PhaseState {
    /// Normalises `direction`.
    pub fn new(point: Vector, direction: Vector) -> Result<Self> {
        if point.len() != direction.len() {
            return Err(Error::DimensionMismatch { expected: point.len(), got: direction.len() });
        }
        let n = direction.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Contract("zero direction".into()));
        }
        Ok(Self { point, direction: direction / n })
    }

    pub fn reversed(&self) -> Self {
        Self { point: self.point.clone(), direction: -&self.direction }
    }
}

/// Finite stand-in for "trapped": a trajectory still bouncing after
/// `max_reflections` reflections or `max_path_length` of travel is cut off.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceLimits {
    pub max_reflections: usize,
    pub escape_radius: f64,
    pub max_path_length: f64,
}

impl TraceLimits {
    pub fn for_scene(scene: &Scene) -> Self {
        let a = scene.ball().radius;
        Self {
            max_reflections: DEFAULT_MAX_REFLECTIONS,
            escape_radius: a,
            max_path_length: DEFAULT_PATH_FACTOR * a,
        }
    }

    pub fn with_max_reflections(mut self, n: usize) -> Self {
        self.max_reflections = n;
        self
    }

    fn check(&self, scene: &Scene) -> Result<()> {
        if self.max_reflections < 1 {
            return Err(Error::Contract("max_reflections must be at least 1".into()));
        }
        if !(self.escape_radius >= scene.ball().radius) {
            return Err(Error::Contract(format!(
                "escape radius {} is smaller than the ball radius {}",
                self.escape_radius,
                scene.ball().radius
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    pub obstacle: usize,
    pub arc: Option<usize>,
    pub point: Vector,
    pub normal: Vector,
    /// Tangential contact; the trajectory went straight through.
    pub grazing: bool,
    /// Path length from the initial point to this event.
    pub cumulative_length: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Escaped,
    Cutoff,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub initial: PhaseState,
    pub events: Vec<Event>,
    pub final_state: PhaseState,
    /// Polyline length from the initial point through the events to the final
    /// point.
    pub total_length: f64,
    pub classification: Classification,
}

impl TrajectoryRecord {
    pub fn escaped(&self) -> bool {
        self.classification == Classification::Escaped
    }

    /// Number of actual reflections (grazing contacts excluded).
    pub fn reflections(&self) -> usize {
        self.events.iter().filter(|e| !e.grazing).count()
    }

    pub fn has_grazing(&self) -> bool {
        self.events.iter().any(|e| e.grazing)
    }

    /// Vertices of the polyline: initial point, events, final point.
    pub fn vertices(&self) -> Vec<&Vector> {
        std::iter::once(&self.initial.point)
            .chain(self.events.iter().map(|e| &e.point))
            .chain(std::iter::once(&self.final_state.point))
            .collect()
    }
}

/// Specular reflection `v - 2 <v, n> n`.
pub fn reflect(v: &Vector, n: &Vector) -> Vector {
    v - n * (2.0 * v.dot(n))
}

/// Obstacle ids of the reflections in order; grazing contacts are skipped.
pub fn itinerary(record: &TrajectoryRecord) -> Vec<usize> {
    record.events.iter().filter(|e| !e.grazing).map(|e| e.obstacle).collect()
}

/// Follows the billiard flow from `start` until it escapes or hits a limit.
///
/// A trajectory has escaped once it is at least `escape_radius` from the ball
/// center and moving outward; the final point is placed on that sphere (or at
/// closest approach when the last leg stays outside it). Grazing contacts are
/// recorded but do not change the direction.
pub fn trace(scene: &Scene, start: &PhaseState, limits: &TraceLimits) -> Result<TrajectoryRecord> {
    limits.check(scene)?;
    let c = &scene.ball().center;
    let r_esc = limits.escape_radius;
    let mut p = start.point.clone();
    let mut v = start.direction.clone();
    let mut events = Vec::new();
    let mut length = 0.0;
    let mut reflections = 0usize;
    let mut last: Option<(usize, Option<usize>)> = None;

    let classification = loop {
        let q = &p - c;
        if q.norm() >= r_esc && q.dot(&v) >= 0.0 {
            break Classification::Escaped;
        }
        let Some(hit) = scene.first_hit_after(&p, &v, last)? else {
            // Free flight to the last crossing of the escape sphere.
            let b = q.dot(&v);
            let disc = b * b - (q.norm_squared() - r_esc * r_esc);
            let t = if disc >= 0.0 { -b + disc.sqrt() } else { -b };
            let t = t.max(0.0);
            p += &v * t;
            length += t;
            break Classification::Escaped;
        };
        if reflections >= limits.max_reflections || length + hit.hit.t > limits.max_path_length {
            break Classification::Cutoff;
        }
        length += hit.hit.t;
        p = hit.hit.point;
        if !hit.hit.grazing {
            v = reflect(&v, &hit.hit.normal);
            // Keep the direction on the unit sphere to round-off.
            let n = v.norm();
            v /= n;
            reflections += 1;
        }
        last = Some((hit.obstacle, hit.arc));
        events.push(Event {
            obstacle: hit.obstacle,
            arc: hit.arc,
            point: p.clone(),
            normal: hit.hit.normal,
            grazing: hit.hit.grazing,
            cumulative_length: length,
        });
    };

    Ok(TrajectoryRecord {
        initial: start.clone(),
        events,
        final_state: PhaseState { point: p, direction: v },
        total_length: length,
        classification,
    })
}

/// Traces the escaped trajectory backwards from its final state and returns
/// the largest distance between matching event points.
pub fn time_reverse_deviation(scene: &Scene, record: &TrajectoryRecord, limits: &TraceLimits) -> Result<f64> {
    if !record.escaped() {
        return Err(Error::NotEscaped);
    }
    let back = trace(scene, &record.final_state.reversed(), limits)?;
    if back.events.len() != record.events.len() {
        return Err(Error::ReversibilityFailure {
            forward: record.events.len(),
            reversed: back.events.len(),
        });
    }
    Ok(back
        .events
        .iter()
        .zip(record.events.iter().rev())
        .map(|(b, f)| (&b.point - &f.point).norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ConvexBody, vector};

    fn scene(centers: &[[f64; 2]]) -> Scene {
        centers.iter().fold(Scene::new(vector(&[0.0, 0.0]), 10.0).unwrap(), |s, c| {
            s.with_body(ConvexBody::ball(vector(c), 1.0).unwrap()).unwrap()
        })
    }

    fn state(p: [f64; 2], v: [f64; 2]) -> PhaseState {
        PhaseState::new(vector(&p), vector(&v)).unwrap()
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(reflect(&vector(&[1.0, 0.0]), &vector(&[-1.0, 0.0])), vector(&[-1.0, 0.0]));
        assert_eq!(reflect(&vector(&[1.0, 0.0]), &vector(&[0.0, 1.0])), vector(&[1.0, 0.0]));
        let h = 0.5f64.sqrt();
        let r = reflect(&vector(&[h, -h]), &vector(&[0.0, 1.0]));
        assert!((r - vector(&[h, h])).norm() < 1e-16);
    }

    #[test]
    fn free_ray_escapes() {
        let s = scene(&[]);
        let rec = trace(&s, &state([-10.0, 0.0], [1.0, 0.0]), &TraceLimits::for_scene(&s)).unwrap();
        assert!(rec.events.is_empty());
        assert!(rec.escaped());
        assert_eq!(rec.final_state.point, vector(&[10.0, 0.0]));
        assert!(itinerary(&rec).is_empty());
        assert_eq!(time_reverse_deviation(&s, &rec, &TraceLimits::for_scene(&s)).unwrap(), 0.0);
    }

    #[test]
    fn backscatter_off_unit_disk() {
        let s = scene(&[[0.0, 0.0]]);
        let limits = TraceLimits::for_scene(&s);
        let rec = trace(&s, &state([-10.0, 0.0], [1.0, 0.0]), &limits).unwrap();
        assert_eq!(rec.events.len(), 1);
        assert_eq!(rec.events[0].point, vector(&[-1.0, 0.0]));
        assert_eq!(rec.final_state.direction, vector(&[-1.0, 0.0]));
        assert!(rec.escaped());
        assert_eq!(itinerary(&rec), vec![0]);
        assert!(time_reverse_deviation(&s, &rec, &limits).unwrap() < 1e-9);
    }

    #[test]
    fn two_disk_bouncing_orbit_is_cut_off() {
        let s = scene(&[[-3.0, 0.0], [3.0, 0.0]]);
        let limits = TraceLimits::for_scene(&s).with_max_reflections(50);
        // Coming in from outside along the axis the ray meets the outer face of
        // the left disk and backscatters.
        let rec = trace(&s, &state([-10.0, 0.0], [1.0, 0.0]), &limits).unwrap();
        assert!(rec.escaped());
        assert_eq!(rec.events.len(), 1);
        assert_eq!(rec.events[0].point, vector(&[-4.0, 0.0]));
        // The bouncing orbit itself lives in the gap.
        let rec = trace(&s, &state([0.0, 0.0], [1.0, 0.0]), &limits).unwrap();
        assert_eq!(rec.classification, Classification::Cutoff);
        assert_eq!(rec.events.len(), 50);
        let it = itinerary(&rec);
        for (k, e) in rec.events.iter().enumerate() {
            let x = if k % 2 == 0 { 2.0 } else { -2.0 };
            assert!((&e.point - vector(&[x, 0.0])).norm() < 1e-12);
            assert_eq!(it[k], if k % 2 == 0 { 1 } else { 0 });
        }
        assert!(time_reverse_deviation(&s, &rec, &limits).is_err());
    }

    #[test]
    fn grazing_ray_goes_straight() {
        let s = scene(&[[0.0, 0.0]]);
        let rec = trace(&s, &state([-5.0, 1.0], [1.0, 0.0]), &TraceLimits::for_scene(&s)).unwrap();
        assert_eq!(rec.events.len(), 1);
        assert!(rec.events[0].grazing);
        assert_eq!(rec.final_state.direction, vector(&[1.0, 0.0]));
        assert!(itinerary(&rec).is_empty());
    }
}
