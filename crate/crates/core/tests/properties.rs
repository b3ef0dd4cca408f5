use proptest::prelude::*;

use scatterlab::dynamics::{PhaseState, TraceLimits, reflect, trace};
use scatterlab::geometry::{ConvexBody, Scene, Vector};
use scatterlab::io::{DEFAULT_PRECISION, Metadata, format_float, parse_scene, scene_digest, serialize_scene};

fn v(xs: &[f64]) -> Vector {
    Vector::from_vec(xs.to_vec())
}

/// Two disks on opposite sides of the y axis, so they never overlap.
fn disks(left: (f64, f64, f64), right: (f64, f64, f64)) -> Scene {
    Scene::new(v(&[0.0, 0.0]), 12.0)
        .unwrap()
        .with_bodies([
            ConvexBody::ball(v(&[-left.0, left.1]), left.2).unwrap(),
            ConvexBody::ball(v(&[right.0, right.1]), right.2).unwrap(),
        ])
        .unwrap()
}

fn disk() -> impl Strategy<Value = (f64, f64, f64)> {
    (3.0..5.0f64, -3.0..3.0f64, 0.3..2.5f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn floats_round_trip(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        let back: f64 = format_float(x, DEFAULT_PRECISION).parse().unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn scene_document_round_trip(l in disk(), r in disk(), seed in any::<u64>()) {
        let scene = disks(l, r);
        let text = serialize_scene(&scene, Metadata { name: Some("pair".into()), seed: Some(seed) });
        let back = parse_scene(&text).unwrap();
        for (a, b) in scene.bodies().iter().zip(back.bodies()) {
            prop_assert_eq!(a.center(), b.center());
            prop_assert_eq!(a.semiaxes(), b.semiaxes());
        }
        prop_assert_eq!(scene_digest(&scene), scene_digest(&back));
        prop_assert_eq!(serialize_scene(&back, Metadata::default()), serialize_scene(&scene, Metadata::default()));
    }

    #[test]
    fn reflections_are_specular(l in disk(), r in disk(), phi in 0.0..std::f64::consts::TAU, psi in -1.5..1.5f64) {
        let scene = disks(l, r);
        let p = v(&[12.0 * phi.cos(), 12.0 * phi.sin()]);
        let inward = -&p / 12.0;
        let u = v(&[inward[0] * psi.cos() - inward[1] * psi.sin(), inward[0] * psi.sin() + inward[1] * psi.cos()]);
        let rec = trace(&scene, &PhaseState::new(p, u).unwrap(), &TraceLimits::for_scene(&scene)).unwrap();
        let pts = rec.vertices();
        for (k, e) in rec.events.iter().enumerate() {
            let body = &scene.bodies()[e.obstacle];
            prop_assert!(body.value(&e.point).abs() < 1e-9);
            let d_in = (pts[k + 1] - pts[k]).normalize();
            let d_out = (pts[k + 2] - pts[k + 1]).normalize();
            let expected = if e.grazing { d_in.clone() } else { reflect(&d_in, &e.normal) };
            prop_assert!((&d_out - &expected).norm() < 1e-9, "event {k}: {d_out} vs {expected}");
        }
    }
}
