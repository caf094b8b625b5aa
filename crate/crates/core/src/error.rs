use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("occupation total {total} exceeds truncation cap {cap}")]
    OccupationExceedsTruncation { total: usize, cap: usize },

    #[error("expected {expected} modes, got {got}")]
    WrongModeCount { expected: usize, got: usize },

    #[error("mode {mode} out of range for a {mode_count}-mode basis")]
    ModeOutOfRange { mode: usize, mode_count: usize },

    #[error("beam splitter needs two distinct modes, got {0} twice")]
    RepeatedMode(usize),

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("efficiency {0} is outside [0, 1]")]
    EfficiencyOutOfRange(f64),

    #[error("pattern covers {got} modes but the state has {expected}")]
    PatternModeMismatch { expected: usize, got: usize },

    #[error("operands live on different Fock bases")]
    BasisMismatch,

    #[error("truncation cap {cap} is too small, need at least {needed}")]
    TruncationTooSmall { needed: usize, cap: usize },

    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("unsupported detector configuration: {0}")]
    UnsupportedDetector(&'static str),

    #[error("x = {0} is outside the fair lossless range [0, 1/2]")]
    XOutOfFairRange(f64),

    #[error("degenerate denominator in {0}")]
    DegenerateDenominator(&'static str),

    #[error("detector efficiency is zero, cheating probability is undefined")]
    DegenerateEfficiency,

    #[error("r^l - s^l has no maximizer over l >= 1 (supremum 1 is not attained)")]
    NoMaximizer,

    #[error("no root of the SCF system in y in (0, 1/2)")]
    NoRootInUnitInterval,

    #[error("SCF solution violates P_d(B) = 1 - p + eps (residual {residual:e})")]
    InconsistentScf { residual: f64 },

    #[error("no fair y for x = {x}, z = {z}: z must not exceed {bound}")]
    NoFairParameter { x: f64, z: f64, bound: f64 },

    #[error("fair y = {0} is outside [0, 1]")]
    YOutOfUnitInterval(f64),

    #[error("the fairness root for x = {x}, z = {z} has sqrt(y) = {root} < 0")]
    NegativeFairRoot { x: f64, z: f64, root: f64 },

    #[error("balanced x = {0} is outside [0, 1]")]
    XOutOfUnitInterval(f64),

    #[error("fairness residual {0:e} exceeds tolerance")]
    FairnessResidual(f64),

    #[error("fixed-point iteration did not converge after {iterations} steps (last step {last_step:e})")]
    NoConvergence { iterations: usize, last_step: f64 },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value,
            lo: 0.0,
            hi: 1.0,
        })
    }
}

pub(crate) fn check_efficiency(value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::EfficiencyOutOfRange(value))
    }
}
