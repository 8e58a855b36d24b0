//! Error type shared by every module in the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building grids, validating inputs,
/// evaluating bounds, or searching.
///
/// The variants are grouped by how callers should react: `QuadSpec`,
/// `InputSpec` and `Argument` are caller mistakes (usage errors);
/// `Infeasible`, `Degenerate` and `DivergentGap` describe scenarios the
/// mathematics itself rules out; `OrderingViolation` flags a broken bound
/// ordering detected at emission time.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Quadrature specification outside the supported envelope.
    #[error("invalid quadrature spec: {0}")]
    QuadSpec(String),

    /// Input distribution violating a structural invariant.
    #[error("invalid input distribution: {0}")]
    InputSpec(String),

    /// Any other malformed argument (ranges, lengths, NaN).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The requested construction cannot satisfy its constraints.
    #[error("infeasible scenario: {0}")]
    Infeasible(String),

    /// The scenario degenerates (e.g. β = 0 leaves the constraint vacuous).
    #[error("degenerate scenario: {0}")]
    Degenerate(String),

    /// The additive-gap certificate diverges (β = 0 makes log(1/β) infinite).
    #[error("divergent gap: {0}")]
    DivergentGap(String),

    /// A guaranteed bound ordering failed at curve-emission time.
    #[error("bound ordering violated: {0}")]
    OrderingViolation(String),
}
