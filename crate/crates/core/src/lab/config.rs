//! Experiment configuration, read from JSON.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::medium::{LayeredMedium, ReactionComponent};
use crate::sommerfeld::MeForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Me,
    Le,
    M2m,
    L2l,
    M2l,
    ReactionMe,
    ReactionLe,
    ReactionM2l,
    DensityProps,
    Cagniard,
    AdditionTheorems,
    InterfaceInequality,
}

impl ExperimentKind {
    pub fn is_reaction(self) -> bool {
        matches!(self, Self::ReactionMe | Self::ReactionLe | Self::ReactionM2l)
    }

    pub fn is_suite(self) -> bool {
        matches!(self, Self::DensityProps | Self::Cagniard | Self::AdditionTheorems | Self::InterfaceInequality)
    }
}

/// A medium given inline or as a path (relative to the config file).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MediumSpec {
    Path(PathBuf),
    Inline(LayeredMedium),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Geometry {
    /// Center of the source ball (physical coordinates).
    #[serde(default)]
    pub source_center: Vec3,
    /// Source ball radius `a_s`.
    #[serde(default = "one")]
    pub a_s: f64,
    /// Distance of the target sphere from the expansion center.
    #[serde(default)]
    pub eval_radius: Option<f64>,
    #[serde(default)]
    pub target_center: Option<Vec3>,
    /// Target ball radius `a_t` (M2L kinds).
    #[serde(default)]
    pub a_t: Option<f64>,
    /// Separation factor `c > 1` (M2L kinds).
    #[serde(default)]
    pub c: Option<f64>,
    /// Center shift for M2M and L2L.
    #[serde(default)]
    pub shift: Option<Vec3>,
    /// Direction from source to target center (M2L kinds).
    #[serde(default)]
    pub direction: Option<Vec3>,
}

impl Default for Geometry {
    fn default() -> Self {
        Self {
            source_center: [0.0; 3],
            a_s: 1.0,
            eval_radius: None,
            target_center: None,
            a_t: None,
            c: None,
            shift: None,
            direction: None,
        }
    }
}

fn one() -> f64 {
    1.0
}
fn p_min() -> usize {
    1
}
fn p_max() -> usize {
    20
}
fn charges() -> usize {
    20
}
fn tol() -> f64 {
    1e-12
}
fn targets() -> usize {
    64
}
fn form() -> MeForm {
    MeForm::Polarization
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub medium: Option<MediumSpec>,
    /// Reaction component; absent for free-space kinds.
    #[serde(default)]
    pub component: Option<ReactionComponent>,
    #[serde(default = "form")]
    pub formulation: MeForm,
    #[serde(default)]
    pub geometry: Geometry,
    #[serde(default = "p_min")]
    pub p_min: usize,
    #[serde(default = "p_max")]
    pub p_max: usize,
    #[serde(default = "charges")]
    pub charges: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "tol")]
    pub tol: f64,
    #[serde(default = "targets")]
    pub targets: usize,
    /// Resolved medium-file directory; not part of the JSON.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            medium: None,
            component: None,
            formulation: MeForm::Polarization,
            geometry: Geometry::default(),
            p_min: p_min(),
            p_max: p_max(),
            charges: charges(),
            seed: 0,
            tol: tol(),
            targets: targets(),
            base_dir: None,
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut c = Self::from_json_str(&std::fs::read_to_string(path)?)?;
        c.base_dir = path.parent().map(Path::to_path_buf);
        Ok(c)
    }

    pub fn medium(&self) -> Result<LayeredMedium> {
        match &self.medium {
            None => Ok(LayeredMedium::homogeneous()),
            Some(MediumSpec::Inline(m)) => Ok(m.clone()),
            Some(MediumSpec::Path(p)) => {
                let full = match &self.base_dir {
                    Some(d) if p.is_relative() => d.join(p),
                    _ => p.clone(),
                };
                LayeredMedium::load(full)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_min > self.p_max {
            return Err(Error::Config(format!("p_min {} > p_max {}", self.p_min, self.p_max)));
        }
        if !(self.geometry.a_s > 0.0) {
            return Err(Error::Config("a_s must be positive".into()));
        }
        if let Some(c) = self.geometry.c {
            if !(c > 1.0) {
                return Err(Error::Config(format!("separation factor c must exceed 1, got {c}")));
            }
        }
        if self.kind.is_reaction() && self.component.is_none() {
            return Err(Error::Config("reaction experiments need a component".into()));
        }
        if !(self.tol >= crate::sommerfeld::quadrature::MIN_TOL) {
            return Err(Error::Config(format!("tol {} below the quadrature floor", self.tol)));
        }
        Ok(())
    }
}
