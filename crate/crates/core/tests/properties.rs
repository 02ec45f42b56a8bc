use proptest::prelude::*;

use chancal::channel::{binomial_thinning, mix_source_noise, NoiseDistribution, Pmf};
use chancal::metrics::fidelity;
use chancal::reconstruct::{project_simplex, smoothness_penalty};

fn simplex(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, 1..=max_len).prop_filter_map("zero mass", |v| {
        let s: f64 = v.iter().sum();
        (s > 1e-6).then(|| v.iter().map(|x| x / s).collect())
    })
}

proptest! {
    #[test]
    fn mixing_keeps_mass(b in simplex(13), xi in 0.0f64..=1.0) {
        let noise = NoiseDistribution::new(b).unwrap();
        let p = mix_source_noise(&noise, xi).unwrap();
        let s: f64 = p.probs().iter().sum();
        prop_assert!((s - 1.0).abs() < 1e-12);
        prop_assert_eq!(p.probs().len(), noise.probs().len() + 1);
    }

    #[test]
    fn thinning_composes(b in simplex(10), q1 in 0.0f64..=1.0, q2 in 0.0f64..=1.0) {
        let noise = NoiseDistribution::new(b).unwrap();
        let once = binomial_thinning(&noise, q1 * q2).unwrap();
        let twice = binomial_thinning(&binomial_thinning(&noise, q1).unwrap(), q2).unwrap();
        for (a, c) in once.probs().iter().zip(twice.probs()) {
            prop_assert!((a - c).abs() < 1e-12);
        }
    }

    #[test]
    fn full_transmission_is_identity(b in simplex(10)) {
        let noise = NoiseDistribution::new(b.clone()).unwrap();
        let out = binomial_thinning(&noise, 1.0).unwrap();
        for (a, c) in out.probs().iter().zip(&b) {
            prop_assert!((a - c).abs() < 1e-15);
        }
    }

    #[test]
    fn projection_lands_on_simplex(v in prop::collection::vec(-5.0f64..5.0, 1..20)) {
        let p = project_simplex(&v);
        prop_assert!(p.iter().all(|&x| x >= 0.0));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let again = project_simplex(&p);
        for (a, c) in p.iter().zip(&again) {
            prop_assert!((a - c).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_is_closest_point(v in prop::collection::vec(-2.0f64..2.0, 2..8), w in simplex(8)) {
        // Every simplex point is at least as far from v as the projection.
        let p = project_simplex(&v);
        let mut w = w;
        w.resize(v.len(), 0.0);
        let s: f64 = w.iter().sum();
        prop_assume!(s > 1e-6);
        let w: Vec<f64> = w.iter().map(|x| x / s).collect();
        let d = |a: &[f64]| a.iter().zip(&v).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
        prop_assert!(d(&p) <= d(&w) + 1e-12);
    }

    #[test]
    fn fidelity_bounds(a in simplex(8), b in simplex(8)) {
        let f = fidelity(&a, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert_eq!(f, fidelity(&b, &a).unwrap());
    }

    #[test]
    fn penalty_ignores_affine_trends(a in -1.0f64..1.0, c in -1.0f64..1.0, n in 3usize..12) {
        let line: Vec<f64> = (0..n).map(|m| a + c * m as f64).collect();
        prop_assert!(smoothness_penalty(&line) < 1e-20);
    }
}
