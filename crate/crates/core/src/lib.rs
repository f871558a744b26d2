//! Basis-independent imaginarity and coherence of ordered tuples of quantum states.
//!
//! A multi-state `(ρ₁, …, ρₙ)` is imaginarity-free when one unitary makes every member real,
//! and incoherent when one unitary diagonalizes every member. For qubits both questions are
//! answered by the Gram matrix of the Bloch vectors, which in turn is fixed by the pairwise
//! overlaps `Tr(ρᵢρⱼ)`. Higher Bargmann invariants `Tr(ρ_{i₁}⋯ρ_{iₘ})` supply witnesses in
//! any dimension.

pub mod bargmann;
pub mod cli;
pub mod criteria;
pub mod discrimination;
pub mod error;
pub mod linalg;
pub mod qstate;
pub mod quantifiers;
pub mod reconstruct;
pub mod sphere;

pub use error::{Error, Result};
pub use qstate::{DensityMatrix, MultiState};
