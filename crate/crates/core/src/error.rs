use thiserror::Error;

use crate::lattice::LVector;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("gram matrix is not square")]
    GramNotSquare,
    #[error("gram matrix is not symmetric")]
    GramNotSymmetric,
    #[error("lattice is not negative definite")]
    NotNegativeDefinite,
    #[error("expected positive norm: {0}")]
    NotPositive(String),
    #[error("vector is not isotropic")]
    NotIsotropic,
    #[error("vectors are not orthogonal")]
    NotOrthogonal,
    #[error("half the norm of the transvection vector is not an integer")]
    ParityFailure,
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("negative norm is outside the supported range")]
    NegativeNorm,
    #[error("the orthogonal complement of the direction is not negative definite")]
    SliceNotDefinite,
    #[error("host lattice is not of the form U+U+R with R unimodular")]
    UnsupportedHost,
    #[error("invalid period data: {0}")]
    InvalidPeriod(String),
    #[error("class is not Lagrangian (pairs nonzero with omega)")]
    NotLagrangian,
    #[error("class pairs to zero with the period: it is of type (1,1); with square >= -2 it would vanish")]
    TypeOneOne,
    #[error("phase and sign operations need a rational omega")]
    FormalOmegaUnsupported,
    #[error("omega is zero")]
    ZeroOmega,
    #[error("zero vector")]
    ZeroVector,
    #[error("vector is not a member of the sublattice")]
    NotMember,
    #[error("isotropic vector is orthogonal to the partner vector")]
    NotCoupled,
    #[error("lattice has a positive vector")]
    HasPositive(LVector),
    #[error("inconsistent state: {0}")]
    ImpossibleState(String),
    #[error("class is not decomposable: {0}")]
    NotDecomposable(String),
    #[error("sublattice is not realizable: {0}")]
    NotRealizable(String),
    #[error("ell pairs non-positively with omega")]
    WrongSide,
    #[error("host lattice is degenerate")]
    Degenerate,
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::RankMismatch { .. } => "rank_mismatch",
            Error::GramNotSquare => "gram_not_square",
            Error::GramNotSymmetric => "gram_not_symmetric",
            Error::NotNegativeDefinite => "not_negative_definite",
            Error::NotPositive(_) => "not_positive",
            Error::NotIsotropic => "not_isotropic",
            Error::NotOrthogonal => "not_orthogonal",
            Error::ParityFailure => "parity_failure",
            Error::NotPrimitive => "not_primitive",
            Error::NegativeNorm => "negative_norm",
            Error::SliceNotDefinite => "slice_not_definite",
            Error::UnsupportedHost => "unsupported_host",
            Error::InvalidPeriod(_) => "invalid_period",
            Error::NotLagrangian => "not_lagrangian",
            Error::TypeOneOne => "type_one_one",
            Error::FormalOmegaUnsupported => "formal_omega_unsupported",
            Error::ZeroOmega => "zero_omega",
            Error::ZeroVector => "zero_vector",
            Error::NotMember => "not_member",
            Error::NotCoupled => "not_coupled",
            Error::HasPositive(_) => "has_positive",
            Error::ImpossibleState(_) => "impossible_state",
            Error::NotDecomposable(_) => "not_decomposable",
            Error::NotRealizable(_) => "not_realizable",
            Error::WrongSide => "wrong_side",
            Error::Degenerate => "degenerate",
        }
    }
}
