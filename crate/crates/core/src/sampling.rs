//! Deterministic point sets on spheres and hemispheres, plus seeded RNGs.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::Vector;

/// Golden angle used by the Fibonacci lattices.
const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// Fixed seed for the quasi-uniform sets in dimension > 3.
const HIGH_DIM_SEED: u64 = 0x5ca7_7e12;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` nearly uniform unit vectors in `R^d`: equally spaced angles for `d = 2`,
/// a Fibonacci lattice for `d = 3`, normalised Gaussian draws with a fixed seed
/// otherwise.
pub fn sphere_points(d: usize, n: usize) -> Vec<Vector> {
    match d {
        2 => (0..n)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / n as f64;
                Vector::from_vec(vec![a.cos(), a.sin()])
            })
            .collect(),
        3 => (0..n)
            .map(|k| {
                let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
                let r = (1.0 - z * z).max(0.0).sqrt();
                let phi = GOLDEN_ANGLE * k as f64;
                Vector::from_vec(vec![r * phi.cos(), r * phi.sin(), z])
            })
            .collect(),
        _ => {
            let mut rng = rng(HIGH_DIM_SEED);
            (0..n).map(|_| random_unit(&mut rng, d)).collect()
        }
    }
}

/// `n` unit directions in the open hemisphere `<u, axis> > 0`.
///
/// In the plane the directions are equally spaced in angle about `axis`; in
/// three dimensions a Fibonacci lattice on the upper cap is rotated onto
/// `axis`.
pub fn hemisphere_directions(axis: &Vector, n: usize) -> Vec<Vector> {
    let d = axis.len();
    let axis = axis.normalize();
    let basis = orthonormal_complement(&axis);
    match d {
        2 => (0..n)
            .map(|k| {
                let phi = -PI / 2.0 + (k as f64 + 0.5) * PI / n as f64;
                &axis * phi.cos() + &basis[0] * phi.sin()
            })
            .collect(),
        3 => (0..n)
            .map(|k| {
                let z = 1.0 - (k as f64 + 0.5) / n as f64;
                let r = (1.0 - z * z).max(0.0).sqrt();
                let phi = GOLDEN_ANGLE * k as f64;
                &axis * z + &basis[0] * (r * phi.cos()) + &basis[1] * (r * phi.sin())
            })
            .collect(),
        _ => {
            let mut rng = rng(HIGH_DIM_SEED);
            (0..n)
                .map(|_| {
                    let u = random_unit(&mut rng, d);
                    let s = u.dot(&axis);
                    if s < 0.0 { &u - &axis * (2.0 * s) } else { u }
                })
                .collect()
        }
    }
}

/// `n` unit directions within angle `half_angle` of `axis` (spherical cap;
/// Fibonacci lattice in three dimensions, seeded random draws above).
pub fn cap_directions(axis: &Vector, half_angle: f64, n: usize) -> Vec<Vector> {
    let d = axis.len();
    let axis = axis.normalize();
    let basis = orthonormal_complement(&axis);
    let z_min = half_angle.cos();
    if d == 3 {
        return (0..n)
            .map(|k| {
                let z = 1.0 - (k as f64 + 0.5) / n as f64 * (1.0 - z_min);
                let r = (1.0 - z * z).max(0.0).sqrt();
                let phi = GOLDEN_ANGLE * k as f64;
                &axis * z + &basis[0] * (r * phi.cos()) + &basis[1] * (r * phi.sin())
            })
            .collect();
    }
    let mut rng = rng(HIGH_DIM_SEED);
    (0..n)
        .map(|_| {
            let w = random_unit(&mut rng, d);
            let w = (&w - &axis * w.dot(&axis)).normalize();
            let theta = half_angle * rng.random::<f64>().sqrt();
            &axis * theta.cos() + w * theta.sin()
        })
        .collect()
}

/// Orthonormal basis of the hyperplane orthogonal to the unit vector `axis`,
/// obtained by Gram-Schmidt on the standard basis. The result is a
/// deterministic function of `axis`.
pub fn orthonormal_complement(axis: &Vector) -> Vec<Vector> {
    let d = axis.len();
    if d == 2 {
        return vec![Vector::from_vec(vec![-axis[1], axis[0]])];
    }
    let mut basis: Vec<Vector> = vec![axis.clone()];
    // Start from the coordinate axes least aligned with `axis`.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| axis[i].abs().total_cmp(&axis[j].abs()));
    for i in order {
        if basis.len() == d {
            break;
        }
        let mut e = Vector::zeros(d);
        e[i] = 1.0;
        for b in &basis {
            let p = e.dot(b);
            e -= b * p;
        }
        let n = e.norm();
        if n > 1e-8 {
            basis.push(e / n);
        }
    }
    basis.remove(0);
    basis
}

pub fn random_unit<R: Rng>(rng: &mut R, d: usize) -> Vector {
    loop {
        let v = Vector::from_fn(d, |_, _| {
            // Box-Muller.
            let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
            let u2: f64 = rng.random();
            (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
        });
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Uniformly random inward direction at the boundary point with outward
/// normal `outward`.
pub fn random_inward<R: Rng>(rng: &mut R, outward: &Vector) -> Vector {
    let d = outward.len();
    if d == 2 {
        let phi = (rng.random::<f64>() - 0.5) * PI;
        let basis = orthonormal_complement(outward);
        return -outward * phi.cos() + &basis[0] * phi.sin();
    }
    let u = random_unit(rng, d);
    let s = u.dot(outward);
    if s > 0.0 { &u - outward * (2.0 * s) } else { u }
}
