//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by groupoid construction and the operations on top of it.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("unknown object id `{0}`")]
    UnknownObject(String),

    #[error("unknown morphism id `{0}`")]
    UnknownMorphism(String),

    #[error("`{left}` and `{right}` are not composable: src(`{left}`) = `{left_src}` but rng(`{right}`) = `{right_rng}`")]
    NotComposable {
        left: String,
        right: String,
        left_src: String,
        right_rng: String,
    },

    #[error("values are defined over different groupoids")]
    BaseMismatch,

    #[error("groupoid is not connected: no morphism with range `{anchor}` and source `{object}`")]
    NotConnected { anchor: String, object: String },

    #[error("structural malformation: {0}")]
    Malformed(String),

    #[error("invalid group table: {0}")]
    InvalidGroupTable(String),

    #[error("expected a single-object groupoid (a group), found {0} objects")]
    NotAGroup(usize),

    #[error("permutation raised to the period {period} is not the identity")]
    PeriodMismatch { period: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("density weights must sum to 1, found {0}")]
    WeightsNotNormalized(String),

    #[error("kernel coefficient for `{morphism}` breaks the fibered condition: rng = `{range}` but it was filed under `{declared}`")]
    NotFibered {
        morphism: String,
        range: String,
        declared: String,
    },

    #[error("kernel declared full-support but `{morphism}` in the fiber of `{object}` has no positive coefficient")]
    NotFullSupport { object: String, morphism: String },

    #[error("coefficient for `{0}` must be nonnegative, found {1}")]
    NegativeCoefficient(String, f64),

    #[error("modular function must be positive on `{0}`")]
    NotPositive(String),

    #[error("modular function is missing a value for `{0}`")]
    MissingModularValue(String),

    #[error("representation is not unitary: {0}")]
    NotUnitary(String),

    #[error("morphism `{0}` does not lie in the fiber G_{1}^{2}")]
    NotInFiber(String, String, String),

    #[error("{0}")]
    Invalid(String),
}
