use thiserror::Error;

use crate::label::Label;

/// The equations a split fork must satisfy, in the order they are checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForkEquation {
    /// `f∘p1 = f∘p2`
    Coequalizes,
    /// `f∘g = id_a`
    Section,
    /// `p1∘k = id_b`
    FirstRetraction,
    /// `p2∘k = g∘f`
    SecondRetraction,
}

impl std::fmt::Display for ForkEquation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ForkEquation::Coequalizes => "f∘p1 = f∘p2",
            ForkEquation::Section => "f∘g = id",
            ForkEquation::FirstRetraction => "p1∘k = id",
            ForkEquation::SecondRetraction => "p2∘k = g∘f",
        })
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate label {0}")]
    DuplicateLabel(Label),
    #[error("map is not total: no value for {0}")]
    NotTotal(Label),
    #[error("value {0} lies outside the codomain")]
    ValueOutsideCodomain(Label),
    #[error("{0} is not an element of the domain")]
    KeyOutsideDomain(Label),
    #[error("{0} is assigned two different values")]
    ConflictingAssignment(Label),
    #[error("maps are not composable: codomain of the first differs from domain of the second")]
    NonComposable,
    #[error("maps do not share a codomain")]
    CodomainMismatch,
    #[error("maps are not parallel")]
    NotParallel,
    #[error("size {size} exceeds the bound {bound} for {what}")]
    SizeBoundExceeded { what: &'static str, size: usize, bound: usize },
    #[error("ultrafilter on a set of size {0} is not principal")]
    NonPrincipalPoint(usize),
    #[error("not an isomorphism: {0}")]
    NotAnIso(String),
    #[error("map is not an epimorphism")]
    NotEpi,
    #[error("competitor cone does not commute")]
    ConeDoesNotCommute,
    #[error("site bounds violated: {0}")]
    BoundViolation(String),
    #[error("functor law violated: {0}")]
    FunctorLawViolation(String),
    #[error("naturality violated: {0}")]
    NotNatural(String),
    #[error("split fork equation {0} fails")]
    ForkLawViolation(ForkEquation),
    #[error("presheaf does not satisfy the descent condition")]
    StarRequired,
    #[error("partitions have different base sets")]
    BaseMismatch,
    #[error("invalid Boolean algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("structure invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
