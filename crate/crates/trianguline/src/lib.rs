//! Exact-arithmetic invariants for local models of trianguline varieties.
//!
//! The crate computes, at desk scale and with no floating point anywhere, the
//! combinatorial and linear-algebra layer that governs these local models:
//!
//! * Weyl groups of products of general linear groups: length, Bruhat order,
//!   the dot action, diamond configurations ([`weyl`]);
//! * Kazhdan-Lusztig polynomials with two independent algorithms and the
//!   multiplicity matrices built from their values at one ([`kl`]);
//! * root-lattice invariants `d_w` and fixed subspaces of the torus ([`cartan`]);
//! * exact rational flag geometry: relative position, the two weight maps on
//!   a flag pair with a compatible endomorphism, cell-point construction and
//!   the degeneration probe ([`flags`]);
//! * Schubert tangent spaces by determinantal Jacobians, smoothness pattern
//!   tests and tangent bounds ([`schubert`]);
//! * the cycle group on the components of the nilpotent fiber, fiber-cycle
//!   decompositions and a symbolic replay of the companion-point induction
//!   ([`cycles`]);
//! * crystalline parameters, genericity, and companion-point enumeration with
//!   symbolic character bookkeeping ([`companion`]).
//!
//! Every operation with a nontrivial contract is cross-validated by an
//! independent brute-force oracle; the [`check`] module packages those
//! cross-validations as runnable suites.

pub mod cartan;
pub mod check;
pub mod companion;
pub mod cycles;
pub mod flags;
pub mod kl;
pub mod linalg;
pub mod perm;
pub mod schubert;
pub mod weyl;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("embedding shapes do not match")]
    ShapeMismatch,
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("singular matrix where an invertible one is required")]
    SingularMatrix,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("upper-triangular support violated at {0}")]
    SupportViolation(String),
    #[error("genericity violated by eigenvalue pair ({i}, {j}) with ratio {ratio}")]
    GenericityViolation { i: usize, j: usize, ratio: String },
    #[error("default component-multiplicity matrix is only valid for n <= 7, got n = {n}; supply one explicitly")]
    AMatrixGuard { n: usize },
    #[error("no matching permutation: the multisets define different polynomials")]
    NoMatchingPermutation,
    #[error("duplicate entries where pairwise distinct scalars are required")]
    DuplicateEntries,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
