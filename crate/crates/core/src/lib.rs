//! A kernel for finite p-groups given by polycyclic presentations.

pub mod abelian;
pub mod artin;
pub mod autgroup;
pub mod collector;
pub mod consistency;
pub mod cover;
pub mod descendants;
pub mod error;
pub mod family;
pub mod fp;
pub mod gfp;
pub mod pc;
pub mod pquotient;
pub mod registry;
pub mod subgroup;
pub mod treepath;

pub use artin::{artin_pattern, artin_transfer, kappa, maximal_layers, sigma_schur_test, ArtinPattern, Kappa, SigmaResult};
pub use autgroup::{automorphism_group, bruteforce_automorphisms, AutGroup, Automorphism};
pub use collector::{element_arith, normalize, ArithOp, Collector, Element};
pub use consistency::{check_consistency, Violation};
pub use descendants::{immediate_descendants, Descendant, DescendantOptions, DescendantReport};
pub use cover::{p_cover, CoverData, CoverQuotient};
pub use error::{Error, Result};
pub use family::{build_family, instantiate_family, Family, FamilySpec};
pub use fp::{parse_fp, FpPresentation, Word};
pub use pc::{parse_pcp, Def, PcPresentation, PcWord};
pub use pquotient::{p_quotient, PQuotient, PQuotientOptions};
pub use abelian::{abelian_type, match_pattern, smith_normal_form, AbelianType, TypePattern};

/// Integer matrices with arbitrary-precision entries.
pub type IntMatrix = abelian::Matrix<num_bigint::BigInt>;
/// Integer matrices with machine-word entries. Elimination transforms can
/// grow well past the input entries; arithmetic that overflows `i64` panics
/// rather than wrapping, so prefer [`IntMatrix`] for large inputs.
pub type SmallIntMatrix = abelian::Matrix<i64>;
pub use registry::{resolve_path, ResolvedPath};
pub use treepath::{parse_tree_path, Step, TreePath};
pub use subgroup::{series, structure_summary, subgroup_closure, SeriesKind, StructureSummary, Subgroup};
