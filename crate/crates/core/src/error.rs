use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero vector has no primitive part")]
    ZeroVector,
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("wedge degree {r} out of range for rank {n}")]
    DegreeOutOfRange { r: usize, n: usize },
    #[error("degenerate polytope: {0}")]
    DegeneratePolytope(String),
    #[error("lattice point scan box too large ({0} candidates)")]
    BoxTooLarge(u128),
    #[error("polytope is not reflexive: {0}")]
    NotReflexive(String),
    #[error("Minkowski face split is not unique: {0}")]
    NonUniqueSplit(String),
    #[error("loop transport around cell {rho} is not a shear (rank of T - id is {rank})")]
    NotShear { rho: usize, rank: usize },
    #[error("loop transport around cell {rho} is trivial; no shear data")]
    ZeroLoop { rho: usize },
    #[error("cell {0}: {1}")]
    BadCell(usize, String),
    #[error("simplicity fails at cell {tau}: {reason}")]
    SimplicityFailure { tau: usize, reason: String },
    #[error("transport through two maximal cells disagrees on the invariant subspace at flag {0}")]
    TransportAmbiguity(String),
    #[error("piecewise linear function is not strictly convex at vertex {0}")]
    NotStrictlyConvex(usize),
    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),
    #[error("rho is not interior to the face F of the monoid")]
    RhoNotInterior,
    #[error("oracle degree bound {0} too large")]
    BoundTooLarge(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
