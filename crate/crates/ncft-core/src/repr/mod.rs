//! The dual object Ĝ: complete lists of irreducible unitary matrix
//! representations, from closed-form catalogs or numeric decomposition of
//! the regular representation.

mod catalog;
mod numeric;
mod young;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{NcftError, Result};
use crate::group::{FiniteGroup, GroupSpec};
use crate::linalg::{identity, CMat};

pub use catalog::irreps_catalog;
pub use numeric::irreps_numeric;

/// One irreducible unitary representation: a d×d unitary matrix per group
/// element, plus its character.
#[derive(Debug, Clone)]
pub struct Irrep {
    pub degree: usize,
    pub matrices: Vec<CMat>,
    pub character: Vec<Complex64>,
}

impl Irrep {
    pub fn from_matrices(matrices: Vec<CMat>) -> Irrep {
        let degree = matrices[0].nrows();
        let character = matrices.iter().map(crate::linalg::trace).collect();
        Irrep { degree, matrices, character }
    }
}

/// The dual object: a complete, canonically ordered list of pairwise
/// inequivalent irreps of a group.
#[derive(Debug, Clone)]
pub struct IrrepTable {
    pub group: FiniteGroup,
    pub irreps: Vec<Irrep>,
}

impl IrrepTable {
    pub fn degrees(&self) -> Vec<usize> {
        self.irreps.iter().map(|p| p.degree).collect()
    }

    pub fn sum_degree_squares(&self) -> usize {
        self.irreps.iter().map(|p| p.degree * p.degree).sum()
    }
}

/// Canonical ordering: ascending degree, ties broken by lexicographic
/// character over the fixed element ordering. Characters are rounded to 1e−6
/// so the numeric and catalog routes agree.
pub(crate) fn sort_canonical(irreps: &mut Vec<Irrep>) {
    let key = |p: &Irrep| -> (usize, Vec<(i64, i64)>) {
        (
            p.degree,
            p.character
                .iter()
                .map(|c| ((c.re * 1e6).round() as i64, (c.im * 1e6).round() as i64))
                .collect(),
        )
    };
    irreps.sort_by(|a, b| key(a).cmp(&key(b)));
}

/// Per-invariant worst-case residuals of an [`IrrepTable`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IrrepReport {
    pub pass: bool,
    pub unitarity: f64,
    pub homomorphism: f64,
    pub irreducibility: f64,
    pub character_orthogonality: f64,
    pub schur_orthogonality: f64,
    pub sum_degree_squares: usize,
    pub group_order: usize,
    pub failures: Vec<String>,
}

pub const TOL_UNITARITY: f64 = 1e-9;
pub const TOL_HOMOMORPHISM: f64 = 1e-9;
pub const TOL_IRREDUCIBILITY: f64 = 1e-6;
pub const TOL_CHAR_ORTH: f64 = 1e-6;
pub const TOL_SCHUR: f64 = 1e-8;

/// Compute worst-case residuals for unitarity, homomorphism,
/// irreducibility, orthogonality and completeness. Failures are report
/// content, not errors.
pub fn validate_irreps(t: &IrrepTable) -> IrrepReport {
    let g = &t.group;
    let n = g.order as f64;
    let mut unitarity = 0.0f64;
    let mut homomorphism = 0.0f64;
    let mut irreducibility = 0.0f64;
    for p in &t.irreps {
        let id = identity(p.degree);
        for gi in 0..g.order {
            let m = &p.matrices[gi];
            let r = m * m.adjoint() - &id;
            unitarity = unitarity.max(op_norm(&r));
        }
        for gi in 0..g.order {
            for hi in 0..g.order {
                let r = &p.matrices[g.mul(gi, hi)] - &p.matrices[gi] * &p.matrices[hi];
                homomorphism = homomorphism.max(op_norm(&r));
            }
        }
        let s: f64 = p.character.iter().map(|c| c.norm_sqr()).sum::<f64>() / n;
        irreducibility = irreducibility.max((s - 1.0).abs());
    }
    let mut character_orthogonality = 0.0f64;
    for (a, pa) in t.irreps.iter().enumerate() {
        for (b, pb) in t.irreps.iter().enumerate() {
            let ip: Complex64 = (0..g.order)
                .map(|gi| pa.character[gi] * pb.character[gi].conj())
                .sum::<Complex64>()
                / n;
            let target = if a == b { 1.0 } else { 0.0 };
            character_orthogonality =
                character_orthogonality.max((ip - Complex64::new(target, 0.0)).norm());
        }
    }
    let schur_orthogonality = schur_residual(t);
    let sum_degree_squares = t.sum_degree_squares();
    let mut failures = Vec::new();
    if unitarity >= TOL_UNITARITY {
        failures.push(format!("unitarity residual {unitarity:.3e}"));
    }
    if homomorphism >= TOL_HOMOMORPHISM {
        failures.push(format!("homomorphism residual {homomorphism:.3e}"));
    }
    if irreducibility >= TOL_IRREDUCIBILITY {
        failures.push(format!("irreducibility residual {irreducibility:.3e}"));
    }
    if character_orthogonality >= TOL_CHAR_ORTH {
        failures.push(format!(
            "character orthogonality residual {character_orthogonality:.3e}"
        ));
    }
    if schur_orthogonality >= TOL_SCHUR {
        failures.push(format!("Schur orthogonality residual {schur_orthogonality:.3e}"));
    }
    if sum_degree_squares != g.order {
        failures.push(format!(
            "completeness: sum of squared degrees {} != group order {}",
            sum_degree_squares, g.order
        ));
    }
    IrrepReport {
        pass: failures.is_empty(),
        unitarity,
        homomorphism,
        irreducibility,
        character_orthogonality,
        schur_orthogonality,
        sum_degree_squares,
        group_order: g.order,
        failures,
    }
}

fn op_norm(a: &CMat) -> f64 {
    crate::linalg::singular_values(a).first().copied().unwrap_or(0.0)
}

/// Worst deviation of (1/|G|) Σ_g π_ij(g) conj(σ_kl(g)) from
/// δ_{πσ} δ_{ik} δ_{jl} / d_π.
fn schur_residual(t: &IrrepTable) -> f64 {
    let g = &t.group;
    let n = g.order as f64;
    let mut worst = 0.0f64;
    for (a, pa) in t.irreps.iter().enumerate() {
        for (b, pb) in t.irreps.iter().enumerate() {
            for i in 0..pa.degree {
                for j in 0..pa.degree {
                    for k in 0..pb.degree {
                        for l in 0..pb.degree {
                            let ip: Complex64 = (0..g.order)
                                .map(|gi| {
                                    pa.matrices[gi][(i, j)] * pb.matrices[gi][(k, l)].conj()
                                })
                                .sum::<Complex64>()
                                / n;
                            let target = if a == b && i == k && j == l {
                                1.0 / pa.degree as f64
                            } else {
                                0.0
                            };
                            worst = worst.max((ip - Complex64::new(target, 0.0)).norm());
                        }
                    }
                }
            }
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// JSON table format: {"group": spec, "irreps": [{"degree", "matrices"}]}
// with complex entries as [re, im].

#[derive(Debug, Serialize, Deserialize)]
pub struct IrrepTableFile {
    pub group: GroupSpec,
    pub irreps: Vec<IrrepFile>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct IrrepFile {
    pub degree: usize,
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

impl IrrepTable {
    pub fn to_file(&self) -> IrrepTableFile {
        IrrepTableFile {
            group: self.group.spec.clone(),
            irreps: self
                .irreps
                .iter()
                .map(|p| IrrepFile {
                    degree: p.degree,
                    matrices: p
                        .matrices
                        .iter()
                        .map(|m| {
                            (0..p.degree)
                                .map(|i| {
                                    (0..p.degree)
                                        .map(|j| [m[(i, j)].re, m[(i, j)].im])
                                        .collect()
                                })
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_file(file: &IrrepTableFile) -> Result<IrrepTable> {
        let group = crate::group::build_group(&file.group)?;
        let mut irreps = Vec::new();
        for p in &file.irreps {
            if p.matrices.len() != group.order {
                return Err(NcftError::ShapeMismatch(format!(
                    "irrep has {} matrices for group of order {}",
                    p.matrices.len(),
                    group.order
                )));
            }
            let matrices: Vec<CMat> = p
                .matrices
                .iter()
                .map(|m| {
                    CMat::from_fn(p.degree, p.degree, |i, j| {
                        Complex64::new(m[i][j][0], m[i][j][1])
                    })
                })
                .collect();
            irreps.push(Irrep::from_matrices(matrices));
        }
        Ok(IrrepTable { group, irreps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;

    #[test]
    fn validate_flags_missing_irrep() {
        let g = build_group(&GroupSpec::parse("S3").unwrap()).unwrap();
        let mut t = irreps_catalog(&g).unwrap();
        t.irreps.pop();
        let report = validate_irreps(&t);
        assert!(!report.pass);
        assert!(report.failures.iter().any(|f| f.contains("completeness")));
    }

    #[test]
    fn validate_flags_scaled_matrix() {
        let g = build_group(&GroupSpec::parse("S3").unwrap()).unwrap();
        let mut t = irreps_catalog(&g).unwrap();
        let last = t.irreps.len() - 1;
        t.irreps[last].matrices[1] *= Complex64::new(1.01, 0.0);
        let report = validate_irreps(&t);
        assert!(!report.pass);
        assert!(report.unitarity > 1e-3);
    }

    #[test]
    fn table_file_roundtrip() {
        let g = build_group(&GroupSpec::parse("Q8").unwrap()).unwrap();
        let t = irreps_catalog(&g).unwrap();
        let json = serde_json::to_string(&t.to_file()).unwrap();
        let parsed: IrrepTableFile = serde_json::from_str(&json).unwrap();
        let t2 = IrrepTable::from_file(&parsed).unwrap();
        assert!(validate_irreps(&t2).pass);
        assert_eq!(t.degrees(), t2.degrees());
    }
}
