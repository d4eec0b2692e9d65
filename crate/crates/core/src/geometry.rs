//! Small 3-vector helpers and spherical coordinates.

use std::f64::consts::PI;

pub type Vec3 = [f64; 3];

#[inline]
pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Reflection through the xy-plane.
#[inline]
pub fn reflect(a: Vec3) -> Vec3 {
    [a[0], a[1], -a[2]]
}

/// Transverse polar coordinates (rho, phi) of the xy part.
#[inline]
pub fn polar_xy(a: Vec3) -> (f64, f64) {
    (a[0].hypot(a[1]), a[1].atan2(a[0]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCoord {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalCoord {
    pub fn from_cartesian(v: Vec3) -> Self {
        let r = norm(v);
        if r == 0.0 {
            return Self { r: 0.0, theta: 0.0, phi: 0.0 };
        }
        let theta = (v[2] / r).clamp(-1.0, 1.0).acos();
        let mut phi = v[1].atan2(v[0]);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        Self { r, theta, phi }
    }

    pub fn to_cartesian(self) -> Vec3 {
        let st = self.theta.sin();
        [
            self.r * st * self.phi.cos(),
            self.r * st * self.phi.sin(),
            self.r * self.theta.cos(),
        ]
    }
}

/// Quasi-uniform points on a sphere (golden-angle spiral).
pub fn fibonacci_sphere(n: usize, center: Vec3, radius: f64) -> Vec<Vec3> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let rxy = (1.0 - z * z).max(0.0).sqrt();
            let t = golden * i as f64;
            add(center, scale([rxy * t.cos(), rxy * t.sin(), z], radius))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spherical_round_trip() {
        for v in [[1.0, 2.0, 3.0], [-0.3, 0.1, -2.0], [0.0, 0.0, 1.5], [0.0, -1.0, 0.0]] {
            let w = SphericalCoord::from_cartesian(v).to_cartesian();
            for i in 0..3 {
                assert!((v[i] - w[i]).abs() <= 1e-14 * norm(v));
            }
        }
        let o = SphericalCoord::from_cartesian([0.0; 3]);
        assert_eq!((o.r, o.theta, o.phi), (0.0, 0.0, 0.0));
    }

    #[test]
    fn fibonacci_points_on_sphere() {
        let pts = fibonacci_sphere(64, [1.0, 2.0, 3.0], 2.5);
        assert_eq!(pts.len(), 64);
        for p in pts {
            assert!((norm(sub(p, [1.0, 2.0, 3.0])) - 2.5).abs() < 1e-13);
        }
    }
}
