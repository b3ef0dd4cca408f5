use std::fmt;

use nalgebra::DMatrix;

use super::{BodyKind, ConvexBody, Scene, Vector};
use crate::optimize::nelder_mead;
use crate::sampling::orthonormal_complement;

/// Boundary samples per body for the disjointness and containment checks.
const PAIR_SAMPLES: usize = 720;
const CONVEXITY_SAMPLES: usize = 100;
const ARC_SAMPLES: usize = 1000;
const MIN_SEPARATION: f64 = 1e-6;
const CONTAINMENT_MARGIN: f64 = 1e-6;
const ORTHONORMAL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// Two obstacles intersect or come closer than the separation threshold.
    NotDisjoint { first: usize, second: usize, overlap: bool, distance: f64 },
    NotContained { obstacle: usize, max_distance: f64, limit: f64 },
    NotStrictlyConvex { obstacle: usize, detail: String },
    CurveGap { obstacle: usize, arc: usize, gap: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotDisjoint { first, second, overlap: true, .. } => {
                write!(f, "obstacles {first} and {second} overlap")
            }
            Violation::NotDisjoint { first, second, distance, .. } => {
                write!(f, "obstacles {first} and {second} are not separated (distance {distance:e})")
            }
            Violation::NotContained { obstacle, max_distance, limit } => write!(
                f,
                "obstacle {obstacle} reaches distance {max_distance} from the ball center (limit {limit})"
            ),
            Violation::NotStrictlyConvex { obstacle, detail } => {
                write!(f, "obstacle {obstacle} failed the convexity check: {detail}")
            }
            Violation::CurveGap { obstacle, arc, gap } => {
                write!(f, "obstacle {obstacle}: arc {arc} does not meet its successor (gap {gap:e})")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the hypotheses on a scene: pairwise disjoint obstacles, all inside
/// the reference ball, bodies strictly convex, curve chains closed up.
///
/// The distance checks are sampled (720 boundary points per body, refined
/// locally with Nelder-Mead); they are not certified.
pub fn validate_scene(scene: &Scene) -> ValidationReport {
    let mut violations = Vec::new();
    let nb = scene.bodies().len();

    for (i, body) in scene.bodies().iter().enumerate() {
        if let Some(detail) = convexity_problem(body) {
            violations.push(Violation::NotStrictlyConvex { obstacle: i, detail });
        }
    }
    for (k, curve) in scene.curves().iter().enumerate() {
        for (arc, gap) in curve.join_gaps() {
            if gap > 1e-9 {
                violations.push(Violation::CurveGap { obstacle: nb + k, arc, gap });
            }
        }
    }

    let samples: Vec<Vec<Vector>> = scene
        .bodies()
        .iter()
        .map(|b| b.boundary_samples(PAIR_SAMPLES))
        .chain(scene.curves().iter().map(|c| {
            c.arcs().iter().flat_map(|a| a.samples(ARC_SAMPLES)).collect()
        }))
        .collect();

    for i in 0..scene.obstacle_count() {
        for j in i + 1..scene.obstacle_count() {
            let (overlap, distance) = match (scene.bodies().get(i), scene.bodies().get(j)) {
                (Some(a), Some(b)) => body_pair_distance(a, b, &samples[i], &samples[j]),
                (Some(a), None) => sampled_distance_to_body(a, &samples[j]),
                _ => (false, min_sample_distance(&samples[i], &samples[j])),
            };
            if overlap || distance <= MIN_SEPARATION {
                violations.push(Violation::NotDisjoint { first: i, second: j, overlap, distance });
            }
        }
    }

    let c = &scene.ball().center;
    let limit = scene.ball().radius - CONTAINMENT_MARGIN;
    for (i, pts) in samples.iter().enumerate() {
        let mut max_distance = pts.iter().map(|p| (p - c).norm()).fold(0.0, f64::max);
        if let Some(body) = scene.bodies().get(i) {
            max_distance = max_distance.max(refine_max_distance(body, c, pts));
        }
        if !(max_distance < limit) {
            violations.push(Violation::NotContained { obstacle: i, max_distance, limit });
        }
    }
    ValidationReport { violations }
}

fn convexity_problem(body: &ConvexBody) -> Option<String> {
    let d = body.dimension();
    let r = body.rotation();
    let err = (r.transpose() * r - DMatrix::<f64>::identity(d, d)).amax();
    if !(err <= ORTHONORMAL_TOL) {
        return Some(format!("rotation deviates from orthonormal by {err:e}"));
    }
    if body.semiaxes().iter().any(|s| !(*s > 0.0)) {
        return Some("non-positive semiaxis".into());
    }
    for p in body.boundary_samples(CONVEXITY_SAMPLES) {
        let (_, g) = body.evaluate(&p);
        if !(g.norm() > 0.0) {
            return Some("vanishing gradient on the boundary".into());
        }
        // The Hessian of this family is constant; evaluated per sample so the
        // check stays meaningful for other implicit families.
        if body.hessian().cholesky().is_none() {
            return Some("Hessian is not positive definite".into());
        }
    }
    None
}

fn min_sample_distance(a: &[Vector], b: &[Vector]) -> f64 {
    a.iter()
        .flat_map(|p| b.iter().map(move |q| (p - q).norm()))
        .fold(f64::INFINITY, f64::min)
}

fn sampled_distance_to_body(body: &ConvexBody, pts: &[Vector]) -> (bool, f64) {
    let inside = pts.iter().any(|p| body.value(p) <= 0.0);
    let samples = body.boundary_samples(PAIR_SAMPLES);
    (inside, min_sample_distance(&samples, pts))
}

/// Unit vector `u0` moved by tangent coordinates `alpha` and renormalised.
fn perturbed(u0: &Vector, basis: &[Vector], alpha: &[f64]) -> Vector {
    let mut u = u0.clone();
    for (e, a) in basis.iter().zip(alpha) {
        u += e * *a;
    }
    u.normalize()
}

fn body_pair_distance(a: &ConvexBody, b: &ConvexBody, sa: &[Vector], sb: &[Vector]) -> (bool, f64) {
    if a.kind() == BodyKind::Ball && b.kind() == BodyKind::Ball {
        let gap = (a.center() - b.center()).norm() - a.semiaxes()[0] - b.semiaxes()[0];
        return (gap < 0.0, gap.max(0.0));
    }
    let overlap = a.value(b.center()) <= 0.0
        || b.value(a.center()) <= 0.0
        || sa.iter().any(|p| b.value(p) <= 0.0)
        || sb.iter().any(|p| a.value(p) <= 0.0);
    if overlap {
        return (true, 0.0);
    }
    let (mut best, mut bi, mut bj) = (f64::INFINITY, 0, 0);
    for (i, p) in sa.iter().enumerate() {
        for (j, q) in sb.iter().enumerate() {
            let dist = (p - q).norm();
            if dist < best {
                (best, bi, bj) = (dist, i, j);
            }
        }
    }
    // Local refinement over the parameter spheres of both bodies.
    let d = a.dimension();
    let units = crate::sampling::sphere_points(d, PAIR_SAMPLES);
    let (ua, ub) = (units[bi].clone(), units[bj].clone());
    let (ea, eb) = (orthonormal_complement(&ua), orthonormal_complement(&ub));
    let (_, refined) = nelder_mead(
        |x| {
            let pa = a.boundary_point(&perturbed(&ua, &ea, &x[..d - 1]));
            let pb = b.boundary_point(&perturbed(&ub, &eb, &x[d - 1..]));
            (pa - pb).norm()
        },
        &vec![0.0; 2 * (d - 1)],
        0.01,
        1e-14,
        2000,
    );
    (false, best.min(refined))
}

fn refine_max_distance(body: &ConvexBody, c: &Vector, samples: &[Vector]) -> f64 {
    if body.kind() == BodyKind::Ball {
        return (body.center() - c).norm() + body.semiaxes()[0];
    }
    let d = body.dimension();
    let units = crate::sampling::sphere_points(d, samples.len());
    let start = samples
        .iter()
        .enumerate()
        .max_by(|x, y| (x.1 - c).norm().total_cmp(&(y.1 - c).norm()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let u0 = units[start].clone();
    let basis = orthonormal_complement(&u0);
    let (_, neg) = nelder_mead(
        |x| -(body.boundary_point(&perturbed(&u0, &basis, x)) - c).norm(),
        &vec![0.0; d - 1],
        0.01,
        1e-14,
        1000,
    );
    -neg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    fn scene(radius: f64, centers: &[[f64; 2]]) -> Scene {
        centers.iter().fold(Scene::new(vector(&[0.0, 0.0]), radius).unwrap(), |s, c| {
            s.with_body(ConvexBody::ball(vector(c), 1.0).unwrap()).unwrap()
        })
    }

    #[test]
    fn admissible_two_disks() {
        assert!(validate_scene(&scene(10.0, &[[-3.0, 0.0], [3.0, 0.0]])).is_admissible());
    }

    #[test]
    fn overlapping_disks() {
        let r = validate_scene(&scene(10.0, &[[-0.5, 0.0], [0.5, 0.0]]));
        assert!(matches!(
            r.violations.as_slice(),
            [Violation::NotDisjoint { first: 0, second: 1, overlap: true, .. }]
        ));
    }

    #[test]
    fn disk_poking_out_of_ball() {
        let r = validate_scene(&scene(10.0, &[[9.5, 0.0]]));
        assert!(matches!(r.violations.as_slice(), [Violation::NotContained { obstacle: 0, .. }]));
    }

    #[test]
    fn close_ellipses_detected_by_refinement() {
        // Two ellipses separated by a gap of 1e-7 along the x axis.
        let a = ConvexBody::ellipsoid(vector(&[-2.0, 0.0]), vector(&[2.0, 0.5]), None).unwrap();
        let b = ConvexBody::ellipsoid(vector(&[2.0 + 1e-7, 0.0]), vector(&[2.0, 0.7]), None).unwrap();
        let s = Scene::new(vector(&[0.0, 0.0]), 10.0).unwrap().with_body(a).unwrap().with_body(b).unwrap();
        let r = validate_scene(&s);
        assert!(matches!(r.violations.as_slice(), [Violation::NotDisjoint { overlap: false, .. }]), "{r:?}");

        let a = ConvexBody::ellipsoid(vector(&[-2.0, 0.0]), vector(&[2.0, 0.5]), None).unwrap();
        let b = ConvexBody::ellipsoid(vector(&[2.1, 0.0]), vector(&[2.0, 0.7]), None).unwrap();
        let s = Scene::new(vector(&[0.0, 0.0]), 10.0).unwrap().with_body(a).unwrap().with_body(b).unwrap();
        assert!(validate_scene(&s).is_admissible());
    }

    #[test]
    fn rotated_ellipse_containment_uses_long_axis() {
        let g = 0.4f64;
        let r = DMatrix::from_row_slice(2, 2, &[g.cos(), -g.sin(), g.sin(), g.cos()]);
        let e = ConvexBody::ellipsoid(vector(&[5.0, 0.0]), vector(&[5.5, 0.3]), Some(r)).unwrap();
        let s = Scene::new(vector(&[0.0, 0.0]), 10.0).unwrap().with_body(e).unwrap();
        assert!(!validate_scene(&s).is_admissible());
    }
}
