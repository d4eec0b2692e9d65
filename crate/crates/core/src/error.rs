use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid medium: {0}")]
    InvalidMedium(String),

    #[error("point z={z} lies on an interface")]
    PointOnInterface { z: f64 },

    #[error("point z={z} is not inside layer {layer}")]
    WrongLayer { z: f64, layer: usize },

    #[error("component u^{a}{b} is absent for layers ({ell},{ellp})")]
    ComponentAbsent { a: u8, b: u8, ell: usize, ellp: usize },

    #[error("spectral argument must satisfy Re k >= 0, got {re}")]
    InvalidSpectralArgument { re: f64 },

    #[error("layer index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("degenerate denominator |alpha22| = {0:e}")]
    DegenerateDenominator(f64),

    #[error("argument outside domain: {0}")]
    DomainError(String),

    #[error("constant tables limited to p_max <= 60, requested {0}")]
    Overflow(usize),

    #[error("quadrature tolerance {tol:e} not met, achieved {achieved:e}")]
    ToleranceNotMet { tol: f64, achieved: f64 },

    #[error("charge at distance {dist} outside box radius {radius}")]
    ChargeOutsideBox { dist: f64, radius: f64 },

    #[error("charge at distance {dist} inside box radius {radius}")]
    ChargeInsideBox { dist: f64, radius: f64 },

    #[error("expansion center z={z} on the wrong side of the interface")]
    CenterOnWrongSide { z: f64 },

    #[error("boxes not separated: distance {dist} <= {required}")]
    BoxesNotSeparated { dist: f64, required: f64 },

    #[error("box crosses an interface")]
    BoxCrossesInterface,

    #[error("point outside region of validity: {0}")]
    RegionViolation(String),

    #[error("imaginary residue {imag:e} exceeds threshold {threshold:e}")]
    ImaginaryResidue { imag: f64, threshold: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
