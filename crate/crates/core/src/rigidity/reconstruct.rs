use crate::error::{Error, Result};
use crate::geometry::{Scene, Vector};
use crate::spectra::{SpectrumTable, TravellingTimeSample};

/// Accepted `| |x - p| + |p - y| - t |` for a reconstructed point.
pub const CONSISTENCY_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct EstimatedPoint {
    pub p: Vector,
    pub x: Vector,
    pub y: Vector,
    pub t: f64,
    pub dir_out: Vector,
    /// Position of the source sample in the table.
    pub cell: usize,
    pub sample: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryEstimate {
    pub points: Vec<EstimatedPoint>,
    /// One-reflection samples without a root in `(0, t)`.
    pub skipped: usize,
    /// Roots failing the consistency check or lying outside the ball.
    pub filtered: usize,
    /// Fraction of a ground-truth sample within `epsilon` of an estimate.
    pub coverage: Option<f64>,
}

impl BoundaryEstimate {
    pub fn positions(&self) -> Vec<Vector> {
        self.points.iter().map(|e| e.p.clone()).collect()
    }

    pub fn with_ground_truth(mut self, truth: &[Vector], epsilon: f64) -> Self {
        self.coverage = Some(truth_coverage(&self.positions(), truth, epsilon));
        self
    }
}

/// Reflection point of a one-bounce path from `x` to `y` of length `t`
/// leaving along `dir_out`: `p = y - tau dir_out` with
/// `|x - p| = t - tau`, which is linear in `tau`.
pub fn reflection_point(x: &Vector, y: &Vector, t: f64, dir_out: &Vector) -> Option<Vector> {
    let w = y - x;
    let den = 2.0 * (t - w.dot(dir_out));
    if den.abs() <= 1e-15 * t.abs().max(1.0) {
        return None;
    }
    let tau = (t * t - w.norm_squared()) / den;
    (tau > 0.0 && tau < t).then(|| y - dir_out * tau)
}

/// Boundary points from the one-reflection samples of a travelling-time
/// table.
pub fn reconstruct_boundary(
    table: &SpectrumTable<TravellingTimeSample>,
    center: &Vector,
    radius: f64,
) -> Result<BoundaryEstimate> {
    if !(radius > 0.0) {
        return Err(Error::Contract(format!("ball radius {radius} is not positive")));
    }
    let mut points = Vec::new();
    let mut skipped = 0;
    let mut filtered = 0;
    for (cell, samples) in table.cells.iter().enumerate() {
        for (k, s) in samples.iter().enumerate().filter(|(_, s)| s.reflections == 1) {
            let Some(p) = reflection_point(&s.x, &s.y, s.t, &s.dir_out) else {
                skipped += 1;
                continue;
            };
            let mismatch = ((&s.x - &p).norm() + (&p - &s.y).norm() - s.t).abs();
            if !(mismatch < CONSISTENCY_TOL) || (&p - center).norm() >= radius {
                filtered += 1;
                continue;
            }
            points.push(EstimatedPoint {
                p,
                x: s.x.clone(),
                y: s.y.clone(),
                t: s.t,
                dir_out: s.dir_out.clone(),
                cell,
                sample: k,
            });
        }
    }
    Ok(BoundaryEstimate { points, skipped, filtered, coverage: None })
}

/// Boundary samples of every convex body of the scene.
pub fn boundary_truth(scene: &Scene, per_body: usize) -> Vec<Vector> {
    scene.bodies().iter().flat_map(|b| b.boundary_samples(per_body)).collect()
}

fn directed(from: &[Vector], to: &[Vector]) -> f64 {
    use rayon::prelude::*;
    from.par_iter()
        .map(|p| to.iter().map(|q| (p - q).norm_squared()).fold(f64::INFINITY, f64::min))
        .reduce(|| 0.0, f64::max)
        .sqrt()
}

/// Hausdorff distance between finite point sets; infinite when exactly one
/// is empty.
pub fn point_set_hausdorff(a: &[Vector], b: &[Vector]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => f64::INFINITY,
        _ => directed(a, b).max(directed(b, a)),
    }
}

pub fn truth_coverage(estimate: &[Vector], truth: &[Vector], epsilon: f64) -> f64 {
    if truth.is_empty() {
        return 1.0;
    }
    let hit = truth
        .iter()
        .filter(|q| estimate.iter().any(|p| (p - *q).norm() <= epsilon))
        .count();
    hit as f64 / truth.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::reflect;
    use crate::geometry::vector;

    /// One-bounce path off the circle `|z - c| = r` at angle `alpha`,
    /// incoming direction at angle `beta` from the inward normal, extended
    /// to the sphere of radius `a` about the origin.
    fn oracle(c: &Vector, r: f64, a: f64, alpha: f64, beta: f64) -> (Vector, Vector, f64, Vector, Vector) {
        let n = vector(&[alpha.cos(), alpha.sin()]);
        let p = c + &n * r;
        let v_in = -(&n * beta.cos()) + vector(&[-n[1], n[0]]) * beta.sin();
        let v_out = reflect(&v_in, &n);
        let back = |q: &Vector, v: &Vector| -> f64 {
            let b = q.dot(v);
            -b + (b * b - q.norm_squared() + a * a).sqrt()
        };
        let s_in = back(&p, &(-&v_in));
        let s_out = back(&p, &v_out);
        (&p - &v_in * s_in, &p + &v_out * s_out, s_in + s_out, v_out, p)
    }

    #[test]
    fn exact_on_oracle_samples() {
        let c = vector(&[0.3, -0.2]);
        for k in 0..200 {
            let alpha = k as f64 * 0.031;
            let beta = -1.2 + (k % 25) as f64 * 0.1;
            let (x, y, t, u, p_true) = oracle(&c, 1.0, 10.0, alpha, beta);
            let p = reflection_point(&x, &y, t, &u).unwrap();
            assert!(((&p - &c).norm() - 1.0).abs() < 1e-8);
            assert!((&p - &p_true).norm() < 1e-8);
        }
    }

    #[test]
    fn symmetric_backscatter_free_case_has_no_root() {
        // A free ray: t = |y - x| and dir_out along y - x.
        let x = vector(&[-10.0, 0.0]);
        let y = vector(&[10.0, 0.0]);
        assert!(reflection_point(&x, &y, 20.0, &vector(&[1.0, 0.0])).is_none());
    }

    #[test]
    fn point_set_distance() {
        let a = vec![vector(&[0.0, 0.0]), vector(&[1.0, 0.0])];
        let b = vec![vector(&[0.0, 0.5])];
        assert!((point_set_hausdorff(&a, &b) - 1.25f64.sqrt()).abs() < 1e-15);
        assert_eq!(point_set_hausdorff(&a, &a), 0.0);
        assert_eq!(truth_coverage(&b, &a, 0.6), 0.5);
    }
}
