use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("elements belong to different groups")]
    MixedGroups,
    #[error("generator word {0:?} evaluates to the identity")]
    IdentityGenerator(String),
    #[error("element cap of {cap} exceeded while growing ball to radius {radius}")]
    MemoryBudgetExceeded { cap: usize, radius: u32 },
    #[error("element is outside the ball of radius {radius}")]
    OutOfBall { radius: u32 },
    #[error("horizon {horizon} too small: need at least {needed}")]
    HorizonTooSmall { horizon: u32, needed: u32 },
    #[error("branch is not a geodesic: b(y) increased at step {step}")]
    NotAGeodesic { step: usize },
    #[error("ray of length {length} too short for radius {radius}")]
    RayTooShort { length: usize, radius: u32 },
    #[error("ray limit is not certified at radius {0}")]
    UncertifiedLimit(u32),
    #[error("radius mismatch: {0} vs {1}")]
    RadiusMismatch(u32, u32),
    #[error("function domain radius {have} too small: need {needed}")]
    DomainTooSmall { have: u32, needed: u32 },
    #[error("function has no finite orbit at this radius")]
    NoFiniteOrbit,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("element outside the domain of the boundary functions")]
    OutOfDomain,
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
