//! Finite semimodules over a tabulated Γ-semiring, projectives as images of
//! idempotent matrices, and bounded isomorphism search.

mod classify;
mod iso;
mod map;
mod matrix;
mod module;

pub use classify::{classify_projectives, Classification, IsoClass};
pub use iso::is_isomorphic;
pub use map::{image_module, matrix_as_map, ImageModule, ModuleMap};
pub use matrix::{enumerate_idempotents, is_left_equivariant, mat_mul, IdempotentMatrix, Matrix};
pub use module::{direct_sum, free_module, Fingerprint, Provenance, Semimodule};

pub(crate) use map::{image_in, matrix_map_between};
pub(crate) use matrix::{mat_vec, mul_with};
