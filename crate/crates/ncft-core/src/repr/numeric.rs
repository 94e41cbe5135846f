//! Generic numeric construction of the dual object by decomposing the
//! left regular representation into irreducible invariant subspaces.

use num_complex::Complex64;

use crate::error::{NcftError, Result};
use crate::group::FiniteGroup;
use crate::linalg::{derive_rng, hermitian_eig, random_hermitian, CMat};

use super::{sort_canonical, Irrep, IrrepTable};

const MAX_RETRIES: u64 = 8;
const IRREDUCIBILITY_TOL: f64 = 1e-6;

/// Left regular representation restricted to the column span of `basis`
/// (|G|×k, orthonormal): π(g) = B* ρ(g) B.
fn restricted_rep(g: &FiniteGroup, basis: &CMat) -> Vec<CMat> {
    let k = basis.ncols();
    (0..g.order)
        .map(|gi| {
            // ρ(g)·B permutes rows: row g·h of the result is row h of B
            let mut permuted = CMat::zeros(g.order, k);
            for h in 0..g.order {
                let dest = g.mul(gi, h);
                permuted.set_row(dest, &basis.row(h));
            }
            basis.adjoint() * permuted
        })
        .collect()
}

fn is_irreducible(g: &FiniteGroup, rep: &[CMat]) -> bool {
    let s: f64 = rep
        .iter()
        .map(|m| m.diagonal().iter().sum::<Complex64>().norm_sqr())
        .sum::<f64>()
        / g.order as f64;
    (s - 1.0).abs() < IRREDUCIBILITY_TOL
}

/// Split an invariant subspace by averaging a random Hermitian matrix over
/// the restricted representation and clustering the eigenvalues of the
/// resulting commutant element.
fn split_subspace(
    g: &FiniteGroup,
    basis: &CMat,
    seed: u64,
    attempt: u64,
    tol: f64,
) -> Option<Vec<CMat>> {
    let k = basis.ncols();
    let rep = restricted_rep(g, basis);
    let mut rng = derive_rng(seed, 0x5eed_0000 + attempt);
    let h = random_hermitian(&mut rng, k);
    let mut t = CMat::zeros(k, k);
    for m in &rep {
        t += m * &h * m.adjoint();
    }
    t /= Complex64::new(g.order as f64, 0.0);
    let (vals, u) = hermitian_eig(&t);
    let scale = vals.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    // cluster sorted eigenvalues by gap
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..k {
        if vals[i] - vals[i - 1] > tol * scale {
            clusters.push((start, i));
            start = i;
        }
    }
    clusters.push((start, k));
    if clusters.len() < 2 {
        return None;
    }
    Some(
        clusters
            .into_iter()
            .map(|(a, b)| basis * u.columns(a, b - a))
            .collect(),
    )
}

fn decompose(
    g: &FiniteGroup,
    basis: CMat,
    seed: u64,
    tol: f64,
    out: &mut Vec<Irrep>,
) -> Result<()> {
    let rep = restricted_rep(g, &basis);
    if is_irreducible(g, &rep) {
        out.push(Irrep::from_matrices(rep));
        return Ok(());
    }
    for attempt in 0..MAX_RETRIES {
        if let Some(parts) = split_subspace(g, &basis, seed, attempt, tol) {
            for part in parts {
                decompose(g, part, seed.wrapping_add(1 + attempt), tol, out)?;
            }
            return Ok(());
        }
    }
    Err(NcftError::DecompositionStalled(format!(
        "subspace of dimension {} unresolved after {MAX_RETRIES} seeds at tol {tol}",
        basis.ncols()
    )))
}

/// Characters agree up to the stated tolerance ⇔ the irreps are equivalent.
fn same_character(g: &FiniteGroup, a: &Irrep, b: &Irrep) -> bool {
    if a.degree != b.degree {
        return false;
    }
    let ip: Complex64 = (0..g.order)
        .map(|gi| a.character[gi] * b.character[gi].conj())
        .sum::<Complex64>()
        / Complex64::new(g.order as f64, 0.0);
    (ip - Complex64::new(1.0, 0.0)).norm() < 1e-6
}

/// Complete irrep table by numeric decomposition of the left regular
/// representation. Deterministic for a fixed seed; the resulting unitary
/// realizations are seed-dependent but the character multiset is not.
pub fn irreps_numeric(g: &FiniteGroup, seed: u64, tol: f64) -> Result<IrrepTable> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(NcftError::ToleranceInvalid(tol));
    }
    if g.order > 120 {
        return Err(NcftError::InvalidSpec(format!(
            "numeric decomposition supports order <= 120, got {}",
            g.order
        )));
    }
    let mut found: Vec<Irrep> = Vec::new();
    decompose(g, crate::linalg::identity(g.order), seed, tol, &mut found)?;
    let mut irreps: Vec<Irrep> = Vec::new();
    for cand in found {
        if !irreps.iter().any(|kept| same_character(g, kept, &cand)) {
            irreps.push(cand);
        }
    }
    let total: usize = irreps.iter().map(|p| p.degree * p.degree).sum();
    if total != g.order {
        return Err(NcftError::DecompositionStalled(format!(
            "deduplicated irreps cover {total} of {} regular dimensions",
            g.order
        )));
    }
    sort_canonical(&mut irreps);
    Ok(IrrepTable { group: g.clone(), irreps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, GroupSpec};
    use crate::repr::{irreps_catalog, validate_irreps};

    fn group(spec: &str) -> FiniteGroup {
        build_group(&GroupSpec::parse(spec).unwrap()).unwrap()
    }

    #[test]
    fn cyclic2_characters() {
        let g = group("Z2");
        let t = irreps_numeric(&g, 0, 1e-8).unwrap();
        assert_eq!(t.degrees(), vec![1, 1]);
        let chars: Vec<Vec<f64>> = t
            .irreps
            .iter()
            .map(|p| p.character.iter().map(|c| c.re).collect())
            .collect();
        assert!((chars[0][0] - 1.0).abs() < 1e-9);
        // canonical order puts (1, −1) before (1, 1) or vice versa; check both present
        assert!(chars.iter().any(|c| (c[1] - 1.0).abs() < 1e-9));
        assert!(chars.iter().any(|c| (c[1] + 1.0).abs() < 1e-9));
    }

    #[test]
    fn s3_matches_catalog_characters() {
        let g = group("S3");
        let numeric = irreps_numeric(&g, 42, 1e-8).unwrap();
        let catalog = irreps_catalog(&g).unwrap();
        assert_eq!(numeric.degrees(), catalog.degrees());
        for (a, b) in numeric.irreps.iter().zip(&catalog.irreps) {
            for gi in 0..g.order {
                assert!(
                    (a.character[gi] - b.character[gi]).norm() < 1e-8,
                    "character mismatch at element {gi}"
                );
            }
        }
    }

    #[test]
    fn d4_degrees() {
        let g = group("D4");
        let t = irreps_numeric(&g, 1, 1e-8).unwrap();
        assert_eq!(t.degrees(), vec![1, 1, 1, 1, 2]);
        assert!(validate_irreps(&t).pass);
    }

    #[test]
    fn seeds_agree_on_characters() {
        let g = group("Q8");
        let a = irreps_numeric(&g, 7, 1e-8).unwrap();
        let b = irreps_numeric(&g, 1234, 1e-8).unwrap();
        assert_eq!(a.degrees(), b.degrees());
        for (pa, pb) in a.irreps.iter().zip(&b.irreps) {
            for gi in 0..g.order {
                assert!((pa.character[gi] - pb.character[gi]).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn bad_tolerance_rejected() {
        let g = group("Z2");
        assert!(matches!(
            irreps_numeric(&g, 0, 0.0),
            Err(NcftError::ToleranceInvalid(_))
        ));
    }
}
