//! Shared fixtures for the criterion benchmarks.

use ncft_core::fourier::{random_group_function, GroupFunction};
use ncft_core::{build_group, irreps_catalog, GroupSpec, IrrepTable, OperatorSpaceDesc};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Irrep table for a fixed benchmark group.
pub fn table(spec: &str) -> IrrepTable {
    let g = build_group(&GroupSpec::parse(spec).expect("spec")).expect("group");
    irreps_catalog(&g).expect("catalog")
}

/// Deterministic random test function on the group underlying `t`.
pub fn test_function(t: &IrrepTable, e: OperatorSpaceDesc, seed: u64) -> GroupFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_group_function(&t.group, e, &mut rng)
}
