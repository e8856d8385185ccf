//! The quadratic dual, the Yoneda algebra of the Ore extension, and exactness
//! checks for the resolutions of the trivial module.

mod koszul;
mod resolution;

pub use koszul::{
    associativity_failures, bilinear, correction_functional, graded_symmetry_check, koszul_dual_mul,
    pairing_matrix, trivial_extension_check, trivial_extension_mul, yoneda_basis, yoneda_dims, yoneda_mul,
    KoszulDualElement, TrivialExtensionReport, YonedaElement,
};
pub use resolution::{
    base_resolution_check, chain_map_commutation_check, euler_defects, induced_sequence_check,
    mapping_cone_check, ChainMapVariant, CommutationReport, DegreeCheck, ExactnessReport,
};
