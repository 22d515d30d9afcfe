//! K₀ from the monoid of projectives, K₁ from the automorphism tower,
//! Euler characteristics, base change and the theorem checks.

mod base_change;
mod checks;
mod complex;
mod monoid;
mod tower;

pub use base_change::{base_change_k0, base_change_k1, K0BaseChange, K1BaseChange};
pub use checks::{
    check_base_change, check_matrix_morita, check_product, check_triangular_theorem, hom_family, BaseChangeReport,
    CompositeCheck, K1Comparison, K1Verdict, LiftingReport, MoritaReport, NamedHom, ProductReport, TriangularReport,
};
pub use complex::{
    assemble, check_additivity, contractible_complexes, euler_characteristic, random_additivity_trials, zero_twist,
    AdditivityReport, BoundedComplex, TrialSummary,
};
pub use monoid::{build_monoid, grothendieck_group, k0, k0_at, k0_class, k0_vector, IsoClassMonoid, K0Result, Probe, Relation};
pub use tower::{
    aut_tower, block_triangular_diagnostic, k1, k1_from_tower, map_to_matrix, matrix_inverse, relation_diagnostics,
    stabilize, whitehead_class, AutTower, BlockTriangularDiagnostic, K1Result, MatrixGroup, RelationDiagnostics,
    TowerLevel, WhiteheadClass,
};
