//! Matrices over cyclotomic numbers and finite matrix groups.

mod cache;
mod group;
mod kernel;
mod matrix;
mod subspace;

pub use cache::ElementCache;
pub use group::{ConjugacyClass, ElementSet, FiniteMatrixGroup, DEFAULT_CAP};
pub use matrix::CycMatrix;
pub use subspace::{averaging_projector, fixed_space, invariant_complement, restrict, restrict_matrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatError {
    #[error("expected a {expected:?} matrix, found {found:?}")]
    Shape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix is singular")]
    Singular,
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("closure exceeded {cap} elements")]
    ClosureOverflow { cap: usize },
    #[error("group is not enumerated")]
    NotEnumerated,
    #[error("subgroup is not contained in the group")]
    Containment,
    #[error("subset is not closed under conjugation")]
    Partition,
    #[error("subspace is not invariant")]
    Invariance,
    #[error("cache: {0}")]
    Cache(String),
}
