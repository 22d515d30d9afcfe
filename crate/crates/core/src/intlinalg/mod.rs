//! Exact integer linear algebra: Smith normal form, finitely generated
//! abelian groups, and abelian quotients of finite groups.

mod abelian;
mod finite;
mod matrix;
mod snf;

pub use abelian::{
    abelian_direct_sum, abelian_iso, group_from_presentation, FgAbelianGroup, GroupHom,
    Presentation,
};
pub use finite::{
    abelian_quotient, finite_abelianization, generating_set, AbelianQuotient, FiniteGroup,
    GroupTable, Subgroup,
};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, Snf};
