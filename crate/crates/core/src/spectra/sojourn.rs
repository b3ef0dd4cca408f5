use crate::dynamics::TrajectoryRecord;
use crate::error::{Error, Result};
use crate::geometry::{Scene, Vector};

const DIRECTION_TOL: f64 = 1e-9;

/// Sojourn time `T' - 2a` of an escaped trajectory, where `T'` is the length
/// of the trajectory (extended to infinity at both ends) inside the slab
/// `{ <z - c, omega> > -a } ∩ { <z - c, theta> < a }` between the hyperplanes
/// tangent to the reference ball.
pub fn sojourn_time(scene: &Scene, record: &TrajectoryRecord, omega: &Vector, theta: &Vector) -> Result<f64> {
    if !record.escaped() {
        return Err(Error::NotEscaped);
    }
    if (&record.initial.direction - omega).norm() > DIRECTION_TOL {
        return Err(Error::Contract("incoming direction does not match omega".into()));
    }
    if (&record.final_state.direction - theta).norm() > DIRECTION_TOL {
        return Err(Error::Contract("outgoing direction does not match theta".into()));
    }
    let c = &scene.ball().center;
    let a = scene.ball().radius;

    let mut clipped = clipped_length(c, a, omega, theta, &record.initial.point, &-omega, f64::INFINITY);
    let vertices = record.vertices();
    for w in vertices.windows(2) {
        let seg = w[1] - w[0];
        let len = seg.norm();
        if len > 0.0 {
            clipped += clipped_length(c, a, omega, theta, w[0], &(seg / len), len);
        }
    }
    clipped += clipped_length(c, a, omega, theta, &record.final_state.point, theta, f64::INFINITY);
    Ok(clipped - 2.0 * a)
}

/// Length of `{ p + s u : 0 <= s <= len }` inside both half-spaces.
fn clipped_length(c: &Vector, a: f64, omega: &Vector, theta: &Vector, p: &Vector, u: &Vector, len: f64) -> f64 {
    let q = p - c;
    let (mut lo, mut hi) = (0.0, len);
    // Each constraint reads h0 + s * dh > 0.
    for (h0, dh) in [(q.dot(omega) + a, u.dot(omega)), (a - q.dot(theta), -u.dot(theta))] {
        if dh == 0.0 {
            if h0 <= 0.0 {
                return 0.0;
            }
        } else {
            let root = -h0 / dh;
            if dh > 0.0 {
                lo = f64::max(lo, root);
            } else {
                hi = f64::min(hi, root);
            }
        }
    }
    (hi - lo).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{PhaseState, TraceLimits, trace};
    use crate::geometry::{ConvexBody, vector};

    fn disk_scene(a: f64) -> Scene {
        Scene::new(vector(&[0.0, 0.0]), a)
            .unwrap()
            .with_body(ConvexBody::ball(vector(&[0.0, 0.0]), 1.0).unwrap())
            .unwrap()
    }

    fn run(scene: &Scene, p: [f64; 2], v: [f64; 2]) -> (TrajectoryRecord, f64) {
        let rec = trace(scene, &PhaseState::new(vector(&p), vector(&v)).unwrap(), &TraceLimits::for_scene(scene)).unwrap();
        let t = sojourn_time(scene, &rec, &rec.initial.direction.clone(), &rec.final_state.direction.clone()).unwrap();
        (rec, t)
    }

    #[test]
    fn free_ray_has_zero_sojourn() {
        let s = Scene::new(vector(&[0.0, 0.0]), 10.0).unwrap();
        for b in [-9.0, -3.0, 0.0, 4.5, 9.9] {
            let (_, t) = run(&s, [-10.0, b], [1.0, 0.0]);
            assert!(t.abs() < 1e-12, "{b} {t}");
        }
    }

    #[test]
    fn head_on_backscatter() {
        let (_, t) = run(&disk_scene(10.0), [-10.0, 0.0], [1.0, 0.0]);
        assert!((t + 2.0).abs() < 1e-12);
        let (_, t2) = run(&disk_scene(20.0), [-20.0, 0.0], [1.0, 0.0]);
        assert!((t2 - t).abs() < 1e-12);
    }

    #[test]
    fn ninety_degree_scattering() {
        // Impact parameter sqrt(2)/2 reflects (1,0) into (0,1) at p = (-h, h).
        // Hand legs: incoming from x = -10 to p is 10 - h, outgoing from p to
        // y = 10 is 10 - h, so T = 20 - 2h - 20 = -sqrt(2).
        let h = 0.5f64.sqrt();
        let (rec, t) = run(&disk_scene(10.0), [-10.0, h], [1.0, 0.0]);
        assert!((&rec.final_state.direction - vector(&[0.0, 1.0])).norm() < 1e-12);
        let legs = (10.0 - h) + (10.0 - h);
        assert!((t - (legs - 20.0)).abs() < 1e-12);
    }

    #[test]
    fn rejects_mismatched_directions() {
        let s = disk_scene(10.0);
        let rec = trace(&s, &PhaseState::new(vector(&[-10.0, 0.0]), vector(&[1.0, 0.0])).unwrap(), &TraceLimits::for_scene(&s)).unwrap();
        assert!(sojourn_time(&s, &rec, &vector(&[1.0, 0.0]), &vector(&[1.0, 0.0])).is_err());
    }
}
