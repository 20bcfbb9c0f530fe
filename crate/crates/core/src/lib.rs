//! Exact computations with vertex algebras over normed rings of rational
//! scalars: modes, `n`-th products, λ-brackets and the standard identities.

pub mod algebras;
pub mod conformal;
pub mod fields;
pub mod identities;
pub mod model;
pub mod pbw;
pub mod scalars;
pub mod series;
pub mod states;
pub mod verify;
pub mod vertex;

pub use scalars::{Norm, NormCtx, Scalar, ScalarRing};
pub use states::State;
pub use vertex::{VertexAlgebra, VertexError};
