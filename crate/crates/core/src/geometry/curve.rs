use std::collections::BTreeSet;
use std::f64::consts::PI;

use super::{Hit, TANGENCY_EPS, Vector, vector};
use crate::error::{Error, Result};

/// Allowed gap between consecutive arc endpoints.
const JOIN_TOL: f64 = 1e-9;

/// A smooth planar piece of a curve obstacle.
#[derive(Clone, Debug, PartialEq)]
pub enum ArcGeometry {
    /// `center + (a cos s, b sin s)` for `s` running from `angle_start` to
    /// `angle_end` (either direction, at most one full turn).
    Elliptic {
        center: [f64; 2],
        semiaxes: [f64; 2],
        angle_start: f64,
        angle_end: f64,
    },
    Segment { start: [f64; 2], end: [f64; 2] },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arc {
    pub geometry: ArcGeometry,
    pub tags: BTreeSet<String>,
}

impl Arc {
    pub fn segment(start: [f64; 2], end: [f64; 2]) -> Self {
        Self { geometry: ArcGeometry::Segment { start, end }, tags: BTreeSet::new() }
    }

    pub fn elliptic(center: [f64; 2], semiaxes: [f64; 2], angle_start: f64, angle_end: f64) -> Self {
        Self {
            geometry: ArcGeometry::Elliptic { center, semiaxes, angle_start, angle_end },
            tags: BTreeSet::new(),
        }
    }

    pub fn tagged(mut self, tag: &str) -> Self {
        self.tags.insert(tag.to_string());
        self
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.contains(tag)
    }

    /// Point at curve parameter `s` in `[0, 1]`.
    pub fn point_at(&self, s: f64) -> [f64; 2] {
        match self.geometry {
            ArcGeometry::Elliptic { center, semiaxes, angle_start, angle_end } => {
                let ang = angle_start + s * (angle_end - angle_start);
                [center[0] + semiaxes[0] * ang.cos(), center[1] + semiaxes[1] * ang.sin()]
            }
            ArcGeometry::Segment { start, end } => {
                [start[0] + s * (end[0] - start[0]), start[1] + s * (end[1] - start[1])]
            }
        }
    }

    pub fn start_point(&self) -> [f64; 2] {
        self.point_at(0.0)
    }

    pub fn end_point(&self) -> [f64; 2] {
        self.point_at(1.0)
    }

    /// `n + 1` points equally spaced in the curve parameter.
    pub fn samples(&self, n: usize) -> Vec<Vector> {
        (0..=n).map(|k| vector(&self.point_at(k as f64 / n as f64))).collect()
    }

    /// Implicit function of the supporting conic or line (signed distance for
    /// segments).
    pub fn value(&self, x: &Vector) -> f64 {
        match self.geometry {
            ArcGeometry::Elliptic { center, semiaxes, .. } => {
                let u = (x[0] - center[0]) / semiaxes[0];
                let v = (x[1] - center[1]) / semiaxes[1];
                u * u + v * v - 1.0
            }
            ArcGeometry::Segment { start, end } => {
                let e = [end[0] - start[0], end[1] - start[1]];
                let len = e[0].hypot(e[1]);
                (e[0] * (x[1] - start[1]) - e[1] * (x[0] - start[0])) / len
            }
        }
    }

    fn contains_angle(angle_start: f64, angle_end: f64, ang: f64) -> bool {
        let sweep = angle_end - angle_start;
        let rel = ((ang - angle_start) * sweep.signum()).rem_euclid(2.0 * PI);
        rel <= sweep.abs() + 1e-12 || rel >= 2.0 * PI - 1e-12
    }

    /// First crossing with `t > t_min`. The normal is oriented against the
    /// incoming ray, which for a ray arriving from the exterior is the
    /// outward normal of the solid.
    pub fn ray_intersect(&self, origin: &Vector, direction: &Vector, t_min: f64) -> Option<Hit> {
        let (ox, oy) = (origin[0], origin[1]);
        let (vx, vy) = (direction[0], direction[1]);
        let (t, grad) = match self.geometry {
            ArcGeometry::Elliptic { center, semiaxes, angle_start, angle_end } => {
                let (a, b) = (semiaxes[0], semiaxes[1]);
                let (px, py) = ((ox - center[0]) / a, (oy - center[1]) / b);
                let (wx, wy) = (vx / a, vy / b);
                let qa = wx * wx + wy * wy;
                let qb = px * wx + py * wy;
                let qc = px * px + py * py - 1.0;
                let disc = qb * qb - qa * qc;
                if disc < 0.0 {
                    return None;
                }
                let sq = disc.sqrt();
                let (r1, r2) = if qb > 0.0 {
                    let q = -qb - sq;
                    (q / qa, qc / q)
                } else {
                    let q = -qb + sq;
                    (qc / q, q / qa)
                };
                let (r1, r2) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
                let t = [r1, r2].into_iter().find(|&t| {
                    t > t_min
                        && Self::contains_angle(
                            angle_start,
                            angle_end,
                            (py + t * wy).atan2(px + t * wx),
                        )
                })?;
                let x = ox + t * vx - center[0];
                let y = oy + t * vy - center[1];
                (t, [x / (a * a), y / (b * b)])
            }
            ArcGeometry::Segment { start, end } => {
                let e = [end[0] - start[0], end[1] - start[1]];
                let denom = vx * e[1] - vy * e[0];
                if denom.abs() < 1e-300 {
                    return None;
                }
                let w = [start[0] - ox, start[1] - oy];
                let t = (w[0] * e[1] - w[1] * e[0]) / denom;
                let lambda = (w[0] * vy - w[1] * vx) / denom;
                if !(t > t_min) || !(-1e-12..=1.0 + 1e-12).contains(&lambda) {
                    return None;
                }
                (t, [-e[1], e[0]])
            }
        };
        let mut normal = vector(&grad).normalize();
        let mut cos_incidence = normal.dot(direction);
        if cos_incidence > 0.0 {
            normal = -normal;
            cos_incidence = -cos_incidence;
        }
        Some(Hit {
            t,
            point: origin + direction * t,
            normal,
            cos_incidence,
            grazing: cos_incidence.abs() < TANGENCY_EPS,
        })
    }
}

/// A planar obstacle bounded by a chain of elliptic arcs and segments.
///
/// Curve obstacles are not strictly convex, so scenes containing one lie
/// outside the class for which spectra determine the obstacle. They exist to
/// build counterexamples.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveObstacle {
    arcs: Vec<Arc>,
}

impl CurveObstacle {
    pub fn new(arcs: Vec<Arc>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::InvalidCurve("no arcs".into()));
        }
        for (i, arc) in arcs.iter().enumerate() {
            match arc.geometry {
                ArcGeometry::Elliptic { semiaxes, angle_start, angle_end, .. } => {
                    if !(semiaxes[0] > 0.0 && semiaxes[1] > 0.0) {
                        return Err(Error::InvalidCurve(format!("arc {i}: non-positive semiaxis")));
                    }
                    if (angle_end - angle_start).abs() > 2.0 * PI + 1e-12 {
                        return Err(Error::InvalidCurve(format!("arc {i}: sweep exceeds one turn")));
                    }
                }
                ArcGeometry::Segment { start, end } => {
                    if start == end {
                        return Err(Error::InvalidCurve(format!("arc {i}: degenerate segment")));
                    }
                }
            }
        }
        let curve = Self { arcs };
        if let Some((i, gap)) = curve.join_gaps().into_iter().find(|&(_, g)| g > JOIN_TOL) {
            return Err(Error::InvalidCurve(format!(
                "arc {i} does not meet its successor (gap {gap:e})"
            )));
        }
        Ok(curve)
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn non_convex(&self) -> bool {
        true
    }

    /// Gap between the end of arc `i` and the start of arc `i + 1`.
    pub fn join_gaps(&self) -> Vec<(usize, f64)> {
        self.arcs
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let (p, q) = (w[0].end_point(), w[1].start_point());
                (i, (p[0] - q[0]).hypot(p[1] - q[1]))
            })
            .collect()
    }

    pub fn translated(&self, shift: [f64; 2]) -> Self {
        let arcs = self
            .arcs
            .iter()
            .map(|a| {
                let geometry = match a.geometry {
                    ArcGeometry::Elliptic { center, semiaxes, angle_start, angle_end } => ArcGeometry::Elliptic {
                        center: [center[0] + shift[0], center[1] + shift[1]],
                        semiaxes,
                        angle_start,
                        angle_end,
                    },
                    ArcGeometry::Segment { start, end } => ArcGeometry::Segment {
                        start: [start[0] + shift[0], start[1] + shift[1]],
                        end: [end[0] + shift[0], end[1] + shift[1]],
                    },
                };
                Arc { geometry, tags: a.tags.clone() }
            })
            .collect();
        Self { arcs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_hit_faces_ray() {
        let s = Arc::segment([0.0, -1.0], [0.0, 1.0]);
        let hit = s.ray_intersect(&vector(&[-2.0, 0.5]), &vector(&[1.0, 0.0]), 0.0).unwrap();
        assert_eq!(hit.t, 2.0);
        assert_eq!(hit.normal, vector(&[-1.0, 0.0]));
        assert!(s.ray_intersect(&vector(&[-2.0, 1.5]), &vector(&[1.0, 0.0]), 0.0).is_none());
    }

    #[test]
    fn elliptic_arc_respects_angle_range() {
        // Upper half of the unit circle.
        let arc = Arc::elliptic([0.0, 0.0], [1.0, 1.0], 0.0, PI);
        let up = arc.ray_intersect(&vector(&[0.0, 0.0]), &vector(&[0.0, 1.0]), 0.0).unwrap();
        assert!((up.point[1] - 1.0).abs() < 1e-15);
        assert!(arc.ray_intersect(&vector(&[0.0, 0.0]), &vector(&[0.0, -1.0]), 0.0).is_none());
        // Reversed sweep covers the same set.
        let rev = Arc::elliptic([0.0, 0.0], [1.0, 1.0], PI, 0.0);
        assert!(rev.ray_intersect(&vector(&[0.0, 0.0]), &vector(&[0.3, 1.0]).normalize(), 0.0).is_some());
    }

    #[test]
    fn chain_must_join() {
        let ok = CurveObstacle::new(vec![Arc::segment([0.0, 0.0], [1.0, 0.0]), Arc::segment([1.0, 0.0], [1.0, 1.0])]);
        assert!(ok.is_ok());
        let bad = CurveObstacle::new(vec![Arc::segment([0.0, 0.0], [1.0, 0.0]), Arc::segment([1.1, 0.0], [1.0, 1.0])]);
        assert!(bad.is_err());
    }
}
