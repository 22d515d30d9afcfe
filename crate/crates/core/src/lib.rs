//! Finite Γ-semirings given by explicit operation tables, their finitely
//! generated projective semimodules, and the invariants K₀ and K₁.
//!
//! Everything here is pure computation over finite carriers and only needs
//! `alloc`. File formats and the command-line front end live in the `gammak`
//! crate.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod caps;
pub mod error;
pub mod intlinalg;
pub mod ktheory;
pub mod semimodule;

pub use algebra::{BuiltinKind, GammaHomomorphism, GammaSemiring, Unit};
pub use caps::{Caps, ModuleMode};
pub use error::{Error, Result};
pub use intlinalg::{FgAbelianGroup, IntMatrix};
