//! Non-commutative Fourier analysis on finite groups.
//!
//! The crate models finite compact groups with uniform Haar measure,
//! computes complete tables of irreducible unitary representations,
//! evaluates vector-valued Fourier transforms, scalar and vector-valued
//! Schatten norms (exact where a Fubini identification applies, certified
//! lower/upper sandwiches elsewhere), and turns Hausdorff–Young,
//! Plancherel, Hölder and Minkowski-type inequalities into executable
//! checks with three-valued verdicts.

pub mod error;
pub mod exponent;
pub mod fourier;
pub mod group;
pub mod linalg;
pub mod repr;
pub mod specnorm;
pub mod verify;

pub use error::{NcftError, Result};
pub use exponent::Exponent;
pub use fourier::{
    forward, inverse, involution, lp_g_norm, lp_ghat_norm, pairing as spectral_pairing,
    GroupFunction, SpectralArray,
};
pub use group::{build_group, conjugacy_classes, validate_table, FiniteGroup, GroupSpec};
pub use repr::{irreps_catalog, irreps_numeric, validate_irreps, Irrep, IrrepTable};
pub use specnorm::{
    e_norm, embed_diag_lp, mn_e_norm, schatten_norm, sn_p_norm, BlockMatrix, EValue,
    NormSandwich, OperatorSpaceDesc, SandwichOptions,
};
pub use verify::{
    check_hausdorff_young, check_holder_lemma, check_inverse_hy, check_linf_l1, check_minkowski,
    check_plancherel, check_theorem_bounds, estimate_cotype_constant, estimate_type_constant,
    ConstantEstimate, ConstantKind, Verdict, VerdictStatus,
};

/// Version string embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
