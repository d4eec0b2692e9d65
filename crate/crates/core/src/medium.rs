//! Layered-medium geometry, coordinate maps and equivalent polarization sources.
//!
//! Layers are numbered from the top: layer 0 is `z > d_0`, layer `l` is
//! `d_l < z < d_{l-1}` and layer `L` is `z < d_{L-1}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MediumJson", into = "MediumJson")]
pub struct LayeredMedium {
    interfaces: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MediumJson {
    interfaces: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TryFrom<MediumJson> for LayeredMedium {
    type Error = Error;
    fn try_from(m: MediumJson) -> Result<Self> {
        LayeredMedium::new(m.interfaces, m.a, m.b)
    }
}

impl From<LayeredMedium> for MediumJson {
    fn from(m: LayeredMedium) -> Self {
        MediumJson { interfaces: m.interfaces, a: m.a, b: m.b }
    }
}

impl LayeredMedium {
    pub fn new(interfaces: Vec<f64>, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let l = interfaces.len();
        if a.len() != l + 1 || b.len() != l + 1 {
            return Err(Error::InvalidMedium(format!(
                "{} interfaces need {} values of a and b, got {} and {}",
                l,
                l + 1,
                a.len(),
                b.len()
            )));
        }
        if interfaces.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidMedium("non-finite interface height".into()));
        }
        if interfaces.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidMedium("interfaces must be strictly decreasing".into()));
        }
        if a.iter().chain(&b).any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidMedium("a and b must be positive and finite".into()));
        }
        Ok(Self { interfaces, a, b })
    }

    /// Free space: no interfaces, unit constants.
    pub fn homogeneous() -> Self {
        Self { interfaces: vec![], a: vec![1.0], b: vec![1.0] }
    }

    /// Classical dielectric stack: `a = 1`, `b = eps`.
    pub fn dielectric(interfaces: Vec<f64>, eps: Vec<f64>) -> Result<Self> {
        let a = vec![1.0; eps.len()];
        Self::new(interfaces, a, eps)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Number of interfaces `L`; there are `L + 1` layers.
    pub fn num_interfaces(&self) -> usize {
        self.interfaces.len()
    }

    pub fn interfaces(&self) -> &[f64] {
        &self.interfaces
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Interface height with the boundary conventions `d_{-1} = d_0`, `d_L = d_{L-1}`.
    pub fn d(&self, l: isize) -> f64 {
        let last = self.interfaces.len() as isize - 1;
        self.interfaces[l.clamp(0, last) as usize]
    }

    /// Layer thickness `D_l = d_{l-1} - d_l` (zero for the two half-spaces).
    pub fn thickness(&self, l: usize) -> f64 {
        if self.interfaces.is_empty() {
            return 0.0;
        }
        self.d(l as isize - 1) - self.d(l as isize)
    }

    fn tolerance(&self) -> f64 {
        let scale = self.interfaces.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        1e-14 * (scale + 1.0)
    }

    pub fn layer_of(&self, z: f64) -> Result<usize> {
        let tol = self.tolerance();
        if self.interfaces.iter().any(|d| (z - d).abs() <= tol) {
            return Err(Error::PointOnInterface { z });
        }
        Ok(self.interfaces.iter().take_while(|&&d| z < d).count())
    }

    /// Strict membership `d_l < z < d_{l-1}`.
    pub fn in_layer(&self, layer: usize, z: f64) -> bool {
        matches!(self.layer_of(z), Ok(l) if l == layer)
    }

    /// Distance from `z` to the nearest boundary of `layer` (infinite for no boundary).
    pub fn clearance(&self, layer: usize, z: f64) -> f64 {
        let l = self.interfaces.len();
        let mut c = f64::INFINITY;
        if layer < l {
            c = c.min(z - self.interfaces[layer]);
        }
        if layer > 0 {
            c = c.min(self.interfaces[layer - 1] - z);
        }
        c
    }

    pub fn check_layer(&self, layer: usize) -> Result<()> {
        if layer > self.interfaces.len() {
            return Err(Error::IndexOutOfRange { index: layer, max: self.interfaces.len() });
        }
        Ok(())
    }

    /// True when no interface carries a material contrast.
    pub fn is_homogeneous(&self) -> bool {
        self.a.windows(2).all(|w| w[0] == w[1]) && self.b.windows(2).all(|w| w[0] == w[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerPoint {
    position: Vec3,
    layer: usize,
}

impl LayerPoint {
    /// Checks `d_layer < z < d_{layer-1}`.
    pub fn new(medium: &LayeredMedium, position: Vec3, layer: usize) -> Result<Self> {
        medium.check_layer(layer)?;
        let found = medium.layer_of(position[2])?;
        if found != layer {
            return Err(Error::WrongLayer { z: position[2], layer });
        }
        Ok(Self { position, layer })
    }

    pub fn locate(medium: &LayeredMedium, position: Vec3) -> Result<Self> {
        let layer = medium.layer_of(position[2])?;
        Ok(Self { position, layer })
    }

    pub fn position(&self) -> Vec3 {
        self.position
    }

    pub fn layer(&self) -> usize {
        self.layer
    }
}

/// Reaction component `u^{ab}_{l l'}`: `a` orients the target side, `b` the source side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReactionComponent {
    pub a: u8,
    pub b: u8,
    pub ell: usize,
    #[serde(rename = "ellprime")]
    pub ellp: usize,
}

impl ReactionComponent {
    pub fn new(a: u8, b: u8, ell: usize, ellp: usize) -> Self {
        Self { a, b, ell, ellp }
    }

    /// Parses "11", "12", "21" or "22".
    pub fn parse_ab(s: &str) -> Result<(u8, u8)> {
        let bytes = s.as_bytes();
        if bytes.len() != 2 || !matches!(bytes[0], b'1' | b'2') || !matches!(bytes[1], b'1' | b'2') {
            return Err(Error::Config(format!("component must be one of 11,12,21,22, got {s:?}")));
        }
        Ok((bytes[0] - b'0', bytes[1] - b'0'))
    }

    pub fn exists(&self, medium: &LayeredMedium) -> bool {
        let l = medium.num_interfaces();
        if l == 0 || self.ell > l || self.ellp > l {
            return false;
        }
        let a_ok = if self.a == 1 { self.ell < l } else { self.ell > 0 };
        let b_ok = if self.b == 1 { self.ellp < l } else { self.ellp > 0 };
        a_ok && b_ok && matches!(self.a, 1 | 2) && matches!(self.b, 1 | 2)
    }

    pub fn check(&self, medium: &LayeredMedium) -> Result<()> {
        medium.check_layer(self.ell)?;
        medium.check_layer(self.ellp)?;
        if !self.exists(medium) {
            return Err(Error::ComponentAbsent { a: self.a, b: self.b, ell: self.ell, ellp: self.ellp });
        }
        Ok(())
    }

    /// All components that exist for the layer pair.
    pub fn all(medium: &LayeredMedium, ell: usize, ellp: usize) -> Vec<Self> {
        let mut v = Vec::new();
        for a in 1..=2 {
            for b in 1..=2 {
                let c = Self::new(a, b, ell, ellp);
                if c.exists(medium) {
                    v.push(c);
                }
            }
        }
        v
    }

    fn target_z(&self, medium: &LayeredMedium, z: f64) -> f64 {
        let l = self.ell as isize;
        if self.a == 1 {
            z - medium.d(l)
        } else {
            medium.d(l - 1) - z
        }
    }

    fn source_z(&self, medium: &LayeredMedium, zp: f64) -> f64 {
        let lp = self.ellp as isize;
        if self.b == 1 {
            zp - medium.d(lp)
        } else {
            medium.d(lp - 1) - zp
        }
    }
}

/// `tau^{ab}_{l l'}(r, r')`: transverse part `r - r'`, vertical part the sum of the
/// distances of `r` and `r'` to the interfaces the wave reflects from.
pub fn tau_map(medium: &LayeredMedium, c: ReactionComponent, r: Vec3, rp: Vec3) -> Result<Vec3> {
    c.check(medium)?;
    Ok([r[0] - rp[0], r[1] - rp[1], c.target_z(medium, r[2]) + c.source_z(medium, rp[2])])
}

/// Equivalent polarization source `r'_{ab}`.
pub fn polarization_source(medium: &LayeredMedium, c: ReactionComponent, rp: Vec3) -> Result<Vec3> {
    c.check(medium)?;
    let s = c.source_z(medium, rp[2]);
    let l = c.ell as isize;
    let z = if c.a == 1 { medium.d(l) - s } else { medium.d(l - 1) + s };
    Ok([rp[0], rp[1], z])
}

/// Inverse of [`polarization_source`].
pub fn physical_source(medium: &LayeredMedium, c: ReactionComponent, rpol: Vec3) -> Result<Vec3> {
    c.check(medium)?;
    let l = c.ell as isize;
    let s = if c.a == 1 { medium.d(l) - rpol[2] } else { rpol[2] - medium.d(l - 1) };
    let lp = c.ellp as isize;
    let zp = if c.b == 1 { s + medium.d(lp) } else { medium.d(lp - 1) - s };
    Ok([rpol[0], rpol[1], zp])
}
