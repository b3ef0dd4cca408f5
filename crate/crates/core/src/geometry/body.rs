use nalgebra::DMatrix;

use super::{DOUBLE_ROOT_BAND, Hit, ROOT_TOL, TANGENCY_EPS, Vector};
use crate::error::{Error, Result};
use crate::sampling;

const ORTHONORMAL_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BodyKind {
    Ball,
    Ellipsoid,
}

/// A strictly convex body `{ x : phi(x) <= 0 }` with
/// `phi(x) = |D^-1 R^T (x - c)|^2 - 1`.
///
/// `D` is the diagonal matrix of semiaxes and `R` an orthonormal rotation.
/// Balls use equal semiaxes and the identity rotation. Other smooth strictly
/// convex bodies would slot in behind the same `evaluate`/`ray_intersect`
/// surface; only this quadric family is provided because its intersections
/// have closed forms.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexBody {
    kind: BodyKind,
    center: Vector,
    semiaxes: Vector,
    rotation: DMatrix<f64>,
}

impl ConvexBody {
    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        let d = center.len();
        if d < 2 {
            return Err(Error::InvalidBody(format!("dimension {d} < 2")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidBody(format!("radius {radius} is not positive")));
        }
        Ok(Self {
            kind: BodyKind::Ball,
            semiaxes: Vector::from_element(d, radius),
            rotation: DMatrix::identity(d, d),
            center,
        })
    }

    pub fn ellipsoid(center: Vector, semiaxes: Vector, rotation: Option<DMatrix<f64>>) -> Result<Self> {
        let d = center.len();
        if d < 2 {
            return Err(Error::InvalidBody(format!("dimension {d} < 2")));
        }
        if semiaxes.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: semiaxes.len() });
        }
        if let Some(bad) = semiaxes.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidBody(format!("semiaxis {bad} is not positive")));
        }
        let rotation = rotation.unwrap_or_else(|| DMatrix::identity(d, d));
        if rotation.nrows() != d || rotation.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: rotation.nrows() });
        }
        let gram = rotation.transpose() * &rotation;
        let err = (gram - DMatrix::<f64>::identity(d, d)).amax();
        if !(err <= ORTHONORMAL_TOL) {
            return Err(Error::InvalidBody(format!(
                "rotation is not orthonormal (max |R^T R - I| = {err:e})"
            )));
        }
        Ok(Self { kind: BodyKind::Ellipsoid, center, semiaxes, rotation })
    }

    pub fn kind(&self) -> BodyKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn semiaxes(&self) -> &Vector {
        &self.semiaxes
    }

    pub fn rotation(&self) -> &DMatrix<f64> {
        &self.rotation
    }

    /// Largest semiaxis; every boundary point lies within this distance of
    /// the center.
    pub fn bounding_radius(&self) -> f64 {
        self.semiaxes.max()
    }

    fn to_local(&self, x: &Vector) -> Vector {
        self.dir_to_local(&(x - &self.center))
    }

    fn dir_to_local(&self, v: &Vector) -> Vector {
        let mut y = self.rotation.tr_mul(v);
        y.component_div_assign(&self.semiaxes);
        y
    }

    /// Value and gradient of the implicit function at `x`.
    pub fn evaluate(&self, x: &Vector) -> (f64, Vector) {
        let y = self.to_local(x);
        let value = y.norm_squared() - 1.0;
        let scaled = y.component_div(&self.semiaxes) * 2.0;
        (value, &self.rotation * scaled)
    }

    pub fn value(&self, x: &Vector) -> f64 {
        self.to_local(x).norm_squared() - 1.0
    }

    pub fn outward_normal(&self, x: &Vector) -> Vector {
        self.evaluate(x).1.normalize()
    }

    /// Constant Hessian `2 R D^-2 R^T`.
    pub fn hessian(&self) -> DMatrix<f64> {
        let inv_sq = DMatrix::from_diagonal(&self.semiaxes.map(|s| 2.0 / (s * s)));
        &self.rotation * inv_sq * self.rotation.transpose()
    }

    /// Boundary point `c + R D u` for a unit vector `u`.
    pub fn boundary_point(&self, u: &Vector) -> Vector {
        &self.center + &self.rotation * u.component_mul(&self.semiaxes)
    }

    /// `n` boundary points, images of a quasi-uniform set of unit vectors.
    pub fn boundary_samples(&self, n: usize) -> Vec<Vector> {
        sampling::sphere_points(self.dimension(), n)
            .iter()
            .map(|u| self.boundary_point(u))
            .collect()
    }

    /// The smallest `t > t_min` with `phi(origin + t * direction) = 0`.
    ///
    /// The root comes from the quadratic in body-local coordinates and is then
    /// polished with Newton steps on `phi` along the ray. Double roots (the
    /// local discriminant within [`DOUBLE_ROOT_BAND`]) are reported as
    /// grazing hits at the point of closest approach.
    pub fn ray_intersect(&self, origin: &Vector, direction: &Vector, t_min: f64) -> Result<Option<Hit>> {
        let o = self.to_local(origin);
        let w = self.dir_to_local(direction);
        let scale = w.norm();
        let u = &w / scale;
        let b = o.dot(&u);
        let c = o.norm_squared() - 1.0;
        // Equals 1 - (local impact parameter)^2.
        let disc = b * b - c;
        if disc < -DOUBLE_ROOT_BAND {
            return Ok(None);
        }
        let double = disc.abs() <= DOUBLE_ROOT_BAND;
        let roots = if double {
            [-b, -b]
        } else {
            let sq = disc.sqrt();
            let (s1, s2) = if b > 0.0 {
                let s1 = -b - sq;
                (s1, c / s1)
            } else {
                let s2 = -b + sq;
                (c / s2, s2)
            };
            if s1 <= s2 { [s1, s2] } else { [s2, s1] }
        };
        let Some(s) = roots.into_iter().find(|s| s / scale > t_min) else {
            return Ok(None);
        };
        let mut t = s / scale;
        if !double {
            for _ in 0..NEWTON_MAX_ITER {
                let x = origin + direction * t;
                let (f, g) = self.evaluate(&x);
                if f.abs() < 1e-15 {
                    break;
                }
                let df = g.dot(direction);
                if df.abs() < 1e-300 {
                    break;
                }
                let next = t - f / df;
                if !next.is_finite() || next <= t_min {
                    break;
                }
                t = next;
            }
        }
        let point = origin + direction * t;
        let (f, g) = self.evaluate(&point);
        if !(f.abs() < ROOT_TOL) {
            return Err(Error::RootNotConverged {
                origin: origin.iter().copied().collect(),
                direction: direction.iter().copied().collect(),
            });
        }
        let normal = g.normalize();
        let cos_incidence = direction.dot(&normal);
        Ok(Some(Hit {
            t,
            grazing: double || cos_incidence.abs() < TANGENCY_EPS,
            point,
            normal,
            cos_incidence,
        }))
    }

    /// Apply `x -> pivot + g (x - pivot) + shift` to the body.
    pub fn transformed(&self, g: &DMatrix<f64>, pivot: &Vector, shift: &Vector) -> Self {
        Self {
            kind: self.kind,
            center: pivot + g * (&self.center - pivot) + shift,
            semiaxes: self.semiaxes.clone(),
            rotation: match self.kind {
                BodyKind::Ball => self.rotation.clone(),
                BodyKind::Ellipsoid => g * &self.rotation,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    fn unit_disk() -> ConvexBody {
        ConvexBody::ball(vector(&[0.0, 0.0]), 1.0).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let (v, g) = unit_disk().evaluate(&vector(&[0.0, 0.0]));
        assert_eq!(v, -1.0);
        assert_eq!(g, vector(&[0.0, 0.0]));

        let (v, g) = unit_disk().evaluate(&vector(&[1.0, 0.0]));
        assert_eq!(v, 0.0);
        assert_eq!(g, vector(&[2.0, 0.0]));

        // x^2/4 + y^2 - 1 at (2, 0): value 0, gradient (2x/4, 2y) = (1, 0).
        let e = ConvexBody::ellipsoid(vector(&[0.0, 0.0]), vector(&[2.0, 1.0]), None).unwrap();
        let (v, g) = e.evaluate(&vector(&[2.0, 0.0]));
        assert_eq!(v, 0.0);
        assert_eq!(g, vector(&[1.0, 0.0]));
    }

    #[test]
    fn head_on_chord() {
        let hit = unit_disk()
            .ray_intersect(&vector(&[-2.0, 0.0]), &vector(&[1.0, 0.0]), 0.0)
            .unwrap()
            .unwrap();
        assert_eq!(hit.t, 1.0);
        assert_eq!(hit.point, vector(&[-1.0, 0.0]));
        assert_eq!(hit.normal, vector(&[-1.0, 0.0]));
        assert_eq!(hit.cos_incidence, -1.0);
        assert!(!hit.grazing);
    }

    #[test]
    fn tangent_ray_is_grazing() {
        let hit = unit_disk()
            .ray_intersect(&vector(&[-2.0, 1.0]), &vector(&[1.0, 0.0]), 0.0)
            .unwrap()
            .unwrap();
        assert!(hit.grazing);
        assert!((&hit.point - vector(&[0.0, 1.0])).norm() < 1e-12);
    }

    #[test]
    fn missing_ray() {
        let hit = unit_disk()
            .ray_intersect(&vector(&[-2.0, 2.0]), &vector(&[1.0, 0.0]), 0.0)
            .unwrap();
        assert!(hit.is_none());
    }

    #[test]
    fn grazing_perturbation_splits() {
        let disk = unit_disk();
        let dir = vector(&[1.0, 0.0]);
        let above = disk.ray_intersect(&vector(&[-2.0, 1.0 + 1e-4]), &dir, 0.0).unwrap();
        let below = disk.ray_intersect(&vector(&[-2.0, 1.0 - 1e-4]), &dir, 0.0).unwrap();
        assert!(above.is_none());
        let below = below.unwrap();
        assert!(!below.grazing);
        // The exit root exists too.
        let exit = disk.ray_intersect(&vector(&[-2.0, 1.0 - 1e-4]), &dir, below.t).unwrap();
        assert!(exit.unwrap().t > below.t);
    }

    #[test]
    fn rejects_bad_rotation_and_axes() {
        let r = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(ConvexBody::ellipsoid(vector(&[0.0, 0.0]), vector(&[1.0, 2.0]), Some(r)).is_err());
        assert!(ConvexBody::ellipsoid(vector(&[0.0, 0.0]), vector(&[1.0, 0.0]), None).is_err());
        assert!(ConvexBody::ball(vector(&[0.0, 0.0]), -1.0).is_err());
    }

    #[test]
    fn rotated_ellipse_hit_lies_on_boundary() {
        let a = 0.7f64;
        let r = DMatrix::from_row_slice(2, 2, &[a.cos(), -a.sin(), a.sin(), a.cos()]);
        let e = ConvexBody::ellipsoid(vector(&[0.5, -0.3]), vector(&[2.0, 0.5]), Some(r)).unwrap();
        let hit = e
            .ray_intersect(&vector(&[-5.0, 1.0]), &vector(&[0.98, -0.2]).normalize(), 0.0)
            .unwrap()
            .unwrap();
        assert!(e.value(&hit.point).abs() < 1e-12);
        assert!(hit.cos_incidence < 0.0);
        assert!((hit.normal.norm() - 1.0).abs() < 1e-12);
    }
}
