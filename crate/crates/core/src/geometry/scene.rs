use nalgebra::DMatrix;

use super::{ArcGeometry, ConvexBody, CurveObstacle, Hit, Vector};
use crate::error::{Error, Result};

/// Minimum ray parameter, relative to the ball radius, for re-hitting a curve
/// obstacle right after leaving it.
const CURVE_SELF_HIT_GUARD: f64 = 1e-9;

/// The reference ball `O` whose boundary sphere carries the travelling-time
/// measurements.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceBall {
    pub center: Vector,
    pub radius: f64,
}

impl ReferenceBall {
    /// Parameters `t` at which the line `origin + t v` crosses the sphere,
    /// in increasing order.
    pub fn crossings(&self, origin: &Vector, direction: &Vector) -> Option<(f64, f64)> {
        let q = origin - &self.center;
        let b = q.dot(direction);
        let c = q.norm_squared() - self.radius * self.radius;
        let disc = b * b - c;
        if disc < 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        Some((-b - sq, -b + sq))
    }
}

/// An obstacle hit: `obstacle` indexes bodies first, then curves; `arc` is set
/// for curve obstacles.
#[derive(Clone, Debug, PartialEq)]
pub struct SceneHit {
    pub obstacle: usize,
    pub arc: Option<usize>,
    pub hit: Hit,
}

/// Obstacle `K` (bodies plus optional demo curves) inside the reference ball.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    dimension: usize,
    bodies: Vec<ConvexBody>,
    curves: Vec<CurveObstacle>,
    ball: ReferenceBall,
}

impl Scene {
    pub fn new(ball_center: Vector, ball_radius: f64) -> Result<Self> {
        let dimension = ball_center.len();
        if dimension < 2 {
            return Err(Error::Contract(format!("dimension {dimension} < 2")));
        }
        if !(ball_radius > 0.0 && ball_radius.is_finite()) {
            return Err(Error::Contract(format!("ball radius {ball_radius} is not positive")));
        }
        Ok(Self {
            dimension,
            bodies: Vec::new(),
            curves: Vec::new(),
            ball: ReferenceBall { center: ball_center, radius: ball_radius },
        })
    }

    pub fn with_body(mut self, body: ConvexBody) -> Result<Self> {
        if body.dimension() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, got: body.dimension() });
        }
        self.bodies.push(body);
        Ok(self)
    }

    pub fn with_bodies(self, bodies: impl IntoIterator<Item = ConvexBody>) -> Result<Self> {
        bodies.into_iter().try_fold(self, Scene::with_body)
    }

    pub fn with_curve(mut self, curve: CurveObstacle) -> Result<Self> {
        if self.dimension != 2 {
            return Err(Error::InvalidCurve(format!(
                "curve obstacles need dimension 2, scene has {}",
                self.dimension
            )));
        }
        self.curves.push(curve);
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn bodies(&self) -> &[ConvexBody] {
        &self.bodies
    }

    pub fn curves(&self) -> &[CurveObstacle] {
        &self.curves
    }

    pub fn ball(&self) -> &ReferenceBall {
        &self.ball
    }

    pub fn obstacle_count(&self) -> usize {
        self.bodies.len() + self.curves.len()
    }

    /// True when the obstacle is a union of convex bodies only.
    pub fn is_convex_union(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn first_hit(&self, origin: &Vector, direction: &Vector) -> Result<Option<SceneHit>> {
        self.first_hit_after(origin, direction, None)
    }

    /// Nearest hit along the ray, leaving out the immediate re-hit of the
    /// obstacle the ray just left (`last`). A line leaving a convex body
    /// cannot meet it again, so that body is skipped outright; curve
    /// obstacles instead get a small minimum ray parameter. Ties go to the
    /// lowest obstacle id.
    pub fn first_hit_after(
        &self,
        origin: &Vector,
        direction: &Vector,
        last: Option<(usize, Option<usize>)>,
    ) -> Result<Option<SceneHit>> {
        let mut best: Option<SceneHit> = None;
        for (i, body) in self.bodies.iter().enumerate() {
            if matches!(last, Some((j, _)) if j == i) {
                continue;
            }
            if let Some(hit) = body.ray_intersect(origin, direction, 0.0)? {
                if best.as_ref().is_none_or(|b| hit.t < b.hit.t) {
                    best = Some(SceneHit { obstacle: i, arc: None, hit });
                }
            }
        }
        let guard = CURVE_SELF_HIT_GUARD * self.ball.radius;
        for (k, curve) in self.curves.iter().enumerate() {
            let id = self.bodies.len() + k;
            let just_left = matches!(last, Some((j, _)) if j == id);
            for (a, arc) in curve.arcs().iter().enumerate() {
                let t_min = if just_left {
                    if last == Some((id, Some(a))) && matches!(arc.geometry, ArcGeometry::Segment { .. }) {
                        continue;
                    }
                    guard
                } else {
                    0.0
                };
                if let Some(hit) = arc.ray_intersect(origin, direction, t_min) {
                    if best.as_ref().is_none_or(|b| hit.t < b.hit.t) {
                        best = Some(SceneHit { obstacle: id, arc: Some(a), hit });
                    }
                }
            }
        }
        Ok(best)
    }

    /// Implicit value of obstacle `id` at `x` (arc value for curves).
    pub fn obstacle_value(&self, id: usize, arc: Option<usize>, x: &Vector) -> f64 {
        match self.bodies.get(id) {
            Some(body) => body.value(x),
            None => {
                let curve = &self.curves[id - self.bodies.len()];
                curve.arcs()[arc.unwrap_or(0)].value(x)
            }
        }
    }

    /// Image of the scene under `x -> c + g (x - c)` with `c` the ball center.
    pub fn rotated(&self, g: &DMatrix<f64>) -> Result<Self> {
        if g.nrows() != self.dimension || g.ncols() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, got: g.nrows() });
        }
        if !self.curves.is_empty() {
            return Err(Error::Contract("rotation of curve obstacles is not supported".into()));
        }
        let zero = Vector::zeros(self.dimension);
        Ok(Self {
            dimension: self.dimension,
            bodies: self.bodies.iter().map(|b| b.transformed(g, &self.ball.center, &zero)).collect(),
            curves: Vec::new(),
            ball: self.ball.clone(),
        })
    }

    /// Translate every obstacle and the ball center by `shift`.
    pub fn translated(&self, shift: &Vector) -> Self {
        let id = DMatrix::identity(self.dimension, self.dimension);
        Self {
            dimension: self.dimension,
            bodies: self.bodies.iter().map(|b| b.transformed(&id, &b.center().clone(), shift)).collect(),
            curves: self.curves.iter().map(|c| c.translated([shift[0], shift[1]])).collect(),
            ball: ReferenceBall { center: &self.ball.center + shift, radius: self.ball.radius },
        }
    }

    /// Move body `index` by `shift`, leaving everything else in place.
    pub fn with_body_translated(&self, index: usize, shift: &Vector) -> Result<Self> {
        let body = self
            .bodies
            .get(index)
            .ok_or_else(|| Error::Contract(format!("no body with index {index}")))?;
        let id = DMatrix::identity(self.dimension, self.dimension);
        let mut out = self.clone();
        out.bodies[index] = body.transformed(&id, &body.center().clone(), shift);
        Ok(out)
    }

    /// Same obstacle with a different reference ball radius.
    pub fn with_ball_radius(&self, radius: f64) -> Result<Self> {
        let mut out = self.clone();
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Contract(format!("ball radius {radius} is not positive")));
        }
        out.ball.radius = radius;
        Ok(out)
    }

    /// Same obstacle with the bodies listed in a different order.
    pub fn with_body_order(&self, order: &[usize]) -> Result<Self> {
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.bodies.len()).collect::<Vec<_>>() {
            return Err(Error::Contract("body order is not a permutation".into()));
        }
        let mut out = self.clone();
        out.bodies = order.iter().map(|&i| self.bodies[i].clone()).collect();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    fn two_disks() -> Scene {
        Scene::new(vector(&[0.0, 0.0]), 10.0)
            .unwrap()
            .with_body(ConvexBody::ball(vector(&[-3.0, 0.0]), 1.0).unwrap())
            .unwrap()
            .with_body(ConvexBody::ball(vector(&[3.0, 0.0]), 1.0).unwrap())
            .unwrap()
    }

    #[test]
    fn empty_scene_has_no_hits() {
        let s = Scene::new(vector(&[0.0, 0.0]), 10.0).unwrap();
        assert!(s.first_hit(&vector(&[1.0, 2.0]), &vector(&[0.0, 1.0])).unwrap().is_none());
    }

    #[test]
    fn nearer_body_wins() {
        let h = two_disks().first_hit(&vector(&[-6.0, 0.0]), &vector(&[1.0, 0.0])).unwrap().unwrap();
        assert_eq!(h.obstacle, 0);
        assert_eq!(h.hit.point, vector(&[-4.0, 0.0]));
    }

    #[test]
    fn ray_between_disks_misses() {
        // The vertical line x = 0 stays at distance 2 from both disks.
        let h = two_disks().first_hit(&vector(&[0.0, 2.0]), &vector(&[0.0, -1.0])).unwrap();
        assert!(h.is_none());
    }

    #[test]
    fn curves_need_the_plane() {
        let s = Scene::new(vector(&[0.0, 0.0, 0.0]), 10.0).unwrap();
        let c = CurveObstacle::new(vec![super::super::Arc::segment([0.0, 0.0], [1.0, 0.0])]).unwrap();
        assert!(s.with_curve(c).is_err());
    }
}
