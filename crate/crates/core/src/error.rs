use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("entries violate |a|^2 - |c|^2 = 1 (residual {residual:e})")]
    NotInGroup { residual: f64 },
    #[error("input point is the pole of the transformation")]
    PoleAtInput,
    #[error("c = 0: the transformation is a rotation fixing 0 and infinity")]
    RotationCenterCase,
    #[error("c = 0: the transformation has no isometric circle")]
    NoIsometricCircle,
    #[error("cross ratio is undefined for coincident points")]
    DegeneratePoints,
    #[error("hyperbolic lines share an endpoint")]
    SharedEndpoint,
    #[error("transformation is not hyperbolic (beta = {beta})")]
    NotHyperbolic { beta: f64 },
    #[error("arc length {0} must lie strictly inside (0, 2pi)")]
    DegenerateLength(f64),
    #[error("arc midpoints coincide")]
    CoincidentMidpoints,
    #[error("{name}: argument {x} is outside the domain")]
    Domain { name: &'static str, x: f64 },
    #[error("density '{0}' is not integrable on its domain")]
    NonIntegrable(String),
    #[error("unknown experiment '{0}'")]
    UnknownExperiment(String),
    #[error("sample size {0} is below the minimum of 1000")]
    SampleSizeTooSmall(u64),
    #[error("invalid run configuration: {0}")]
    Config(String),
    #[error("malformed record: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, x: f64) -> Error {
    Error::Domain { name, x }
}
