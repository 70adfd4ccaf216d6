//! Exact lattice algorithms for Lagrangian classes on K3 surfaces.
//!
//! The crate computes Lagrangian lattices `[ω]^⊥ ∩ Λ`, decides whether they
//! are generated by classes of square at least −2 (with checkable
//! certificates), realizes prescribed sublattices as Lagrangian lattices,
//! tracks hyperkähler-rotation phases in rational arithmetic, and produces
//! isotropic fibration classes.
//!
//! All arithmetic is exact (`BigInt` / `BigRational`).

pub mod criteria;
pub mod eichler;
pub mod enumerate;
pub mod error;
pub mod exec;
pub mod fibration;
pub mod formal;
pub mod hodge;
pub mod lattice;
pub mod matrix;
pub mod sampling;

pub use error::{Error, Result};
pub use exec::Strategy;
pub use formal::{AnyVector, FormalVector, MarkerPoly};
pub use lattice::{Diagonalization, Isometry, LVector, Lattice, QVector, Sublattice};
pub use hodge::{GaussianRational, Omega, PeriodData, RootChoice, RotationPhase};
