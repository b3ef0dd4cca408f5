use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::dynamics::{PhaseState, TraceLimits, trace};
use crate::error::{Error, Result};
use crate::geometry::Scene;

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeComparison {
    /// Non-grazing reflection counts `(scene A, scene B)` per probe.
    pub counts: Vec<(usize, usize)>,
    pub equal: usize,
    pub equal_fraction: f64,
}

fn check_probe(scene: &Scene, p: &PhaseState, index: usize) -> Result<()> {
    let c = &scene.ball().center;
    let a = scene.ball().radius;
    let r = &p.point - c;
    if ((r.norm() - a).abs() > 1e-9 * a) || r.dot(&p.direction) >= 0.0 {
        return Err(Error::Contract(format!("probe {index} is not an inward state on the reference sphere")));
    }
    Ok(())
}

/// Traces every probe in both scenes and compares reflection counts.
pub fn reflection_count_probe(
    scene_a: &Scene,
    scene_b: &Scene,
    probes: &[PhaseState],
    limits: &TraceLimits,
) -> Result<ProbeComparison> {
    for (i, p) in probes.iter().enumerate() {
        check_probe(scene_a, p, i)?;
        check_probe(scene_b, p, i)?;
    }
    let counts: Vec<(usize, usize)> = probes
        .par_iter()
        .map(|p| Ok((trace(scene_a, p, limits)?.reflections(), trace(scene_b, p, limits)?.reflections())))
        .collect::<Result<_>>()?;
    let equal = counts.iter().filter(|(x, y)| x == y).count();
    let equal_fraction = if counts.is_empty() { 1.0 } else { equal as f64 / counts.len() as f64 };
    Ok(ProbeComparison { counts, equal, equal_fraction })
}

/// Image of a phase state under the rotation `g` about `pivot`.
pub fn rotate_probe(p: &PhaseState, g: &DMatrix<f64>, pivot: &crate::Vector) -> PhaseState {
    PhaseState { point: pivot + g * (&p.point - pivot), direction: g * &p.direction }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ConvexBody, vector};
    use crate::rigidity::random_probes;

    #[test]
    fn probe_symmetry() {
        let s = Scene::new(vector(&[0.0, 0.0]), 10.0)
            .unwrap()
            .with_body(ConvexBody::ball(vector(&[-2.0, 0.0]), 1.0).unwrap())
            .unwrap()
            .with_body(ConvexBody::ball(vector(&[2.0, 0.5]), 1.0).unwrap())
            .unwrap();
        let probes = random_probes(&s, 500, 3);
        let r = reflection_count_probe(&s, &s, &probes, &TraceLimits::for_scene(&s)).unwrap();
        assert_eq!(r.equal_fraction, 1.0);
    }

    #[test]
    fn shared_disk_probe() {
        let one = Scene::new(vector(&[0.0, 0.0]), 10.0)
            .unwrap()
            .with_body(ConvexBody::ball(vector(&[0.0, 0.0]), 1.0).unwrap())
            .unwrap();
        let two = one.clone().with_body(ConvexBody::ball(vector(&[0.0, 7.0]), 1.0).unwrap()).unwrap();
        // Head-on along the x axis: backscatters and never comes near y = 7.
        let probe = PhaseState { point: vector(&[-10.0, 0.0]), direction: vector(&[1.0, 0.0]) };
        let limits = TraceLimits::for_scene(&one);
        let r = reflection_count_probe(&one, &two, &[probe], &limits).unwrap();
        assert_eq!(r.counts, vec![(1, 1)]);
    }

    #[test]
    fn outward_probe_is_rejected() {
        let s = Scene::new(vector(&[0.0, 0.0]), 10.0).unwrap();
        let p = PhaseState { point: vector(&[-10.0, 0.0]), direction: vector(&[-1.0, 0.0]) };
        assert!(reflection_count_probe(&s, &s, &[p], &TraceLimits::for_scene(&s)).is_err());
    }
}
