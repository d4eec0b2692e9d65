//! Values frozen from independent 30-digit computations.

use num_complex::Complex64;

use layerfmm::densities::{density_bound, reaction_densities};
use layerfmm::lab::suite::BESSEL_REFERENCE;
use layerfmm::medium::{LayeredMedium, ReactionComponent};
use layerfmm::sommerfeld::bessel::bessel_j;
use layerfmm::sommerfeld::eval_reaction_green;

fn slab() -> LayeredMedium {
    LayeredMedium::dielectric(vec![0.0, -1.0], vec![1.0, 5.0, 2.0]).unwrap()
}

#[test]
fn bessel_references() {
    for &(m, x, v) in &BESSEL_REFERENCE {
        let got = bessel_j(m, x);
        assert!(((got - v) / v).abs() < 1e-13, "J_{m}({x}) = {got}, expected {v}");
    }
}

#[test]
fn slab_density_values() {
    let m = slab();
    for (k, v) in [(0.0, -1.0 / 3.0), (0.5, -0.568_788_505_459_851_4), (2.0, -0.662_282_859_628_395_4)] {
        let s = reaction_densities(&m, 0, 0, Complex64::new(k, 0.0)).unwrap().get(1, 1).unwrap();
        assert!((s.re - v).abs() < 1e-15 && s.im.abs() < 1e-15, "k={k}: {s}");
    }
}

#[test]
fn slab_green_values() {
    let m = slab();
    let c = ReactionComponent::new(1, 1, 0, 0);
    let cases = [
        ([0.0, 0.0, 0.4], [0.0, 0.0, 0.6], -0.045_368_057_392_982_91),
        ([0.7, 0.0, 1.3], [0.0, 0.0, 1.0], -0.016_621_411_560_396_12),
        ([3.0, 0.0, 0.1], [0.0, 0.0, 0.3], -0.011_296_719_583_760_93),
    ];
    for (r, rp, v) in cases {
        let q = eval_reaction_green(&m, c, r, rp, 1e-12).unwrap();
        assert!((q.value.re - v).abs() < 1e-11 * v.abs(), "{} vs {v}", q.value.re);
        assert!(q.error < 1e-11 * v.abs());
    }
}

#[test]
fn two_layer_density_bound() {
    for eps in [2.0, 10.0, 80.0] {
        let m = LayeredMedium::dielectric(vec![0.0], vec![1.0, eps]).unwrap();
        let b = density_bound(&m, ReactionComponent::new(1, 1, 0, 0)).unwrap();
        assert!((b.value - 1.05 * (eps - 1.0) / (eps + 1.0)).abs() < 1e-14);
    }
}
