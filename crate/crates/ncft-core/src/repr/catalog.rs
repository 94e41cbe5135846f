//! Closed-form irreducible representations for the catalog families.

use std::collections::VecDeque;
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{NcftError, Result};
use crate::group::{build_group, permutations, FiniteGroup, GroupSpec};
use crate::linalg::{identity, kron, CMat};

use super::young::{partitions, yor_generators};
use super::{sort_canonical, Irrep, IrrepTable};

/// Extend generator matrices to the whole group by breadth-first closure
/// over the multiplication table.
fn rep_from_generators(g: &FiniteGroup, gens: &[(usize, CMat)]) -> Result<Vec<CMat>> {
    let d = gens.first().map_or(1, |(_, m)| m.nrows());
    let mut matrices: Vec<Option<CMat>> = vec![None; g.order];
    matrices[FiniteGroup::IDENTITY] = Some(identity(d));
    let mut queue = VecDeque::from([FiniteGroup::IDENTITY]);
    while let Some(h) = queue.pop_front() {
        for (s, m) in gens {
            let sh = g.mul(*s, h);
            if matrices[sh].is_none() {
                matrices[sh] = Some(m * matrices[h].as_ref().unwrap());
                queue.push_back(sh);
            }
        }
    }
    matrices
        .into_iter()
        .map(|m| m.ok_or_else(|| NcftError::InvalidSpec("generators do not generate".into())))
        .collect()
}

fn cyclic_irreps(n: usize) -> Vec<Irrep> {
    (0..n)
        .map(|k| {
            let matrices = (0..n)
                .map(|j| {
                    CMat::from_element(
                        1,
                        1,
                        Complex64::from_polar(1.0, TAU * (j * k) as f64 / n as f64),
                    )
                })
                .collect();
            Irrep::from_matrices(matrices)
        })
        .collect()
}

fn one_dim_from_gen_values(g: &FiniteGroup, gens: &[(usize, Complex64)]) -> Result<Irrep> {
    let mats: Vec<(usize, CMat)> = gens
        .iter()
        .map(|(s, v)| (*s, CMat::from_element(1, 1, *v)))
        .collect();
    Ok(Irrep::from_matrices(rep_from_generators(g, &mats)?))
}

fn dihedral_irreps(g: &FiniteGroup, n: usize) -> Result<Vec<Irrep>> {
    let r = 1; // index of r^1
    let s = n; // index of s
    let one = Complex64::new(1.0, 0.0);
    let neg = Complex64::new(-1.0, 0.0);
    let mut out = Vec::new();
    out.push(one_dim_from_gen_values(g, &[(r, one), (s, one)])?);
    out.push(one_dim_from_gen_values(g, &[(r, one), (s, neg)])?);
    if n % 2 == 0 {
        out.push(one_dim_from_gen_values(g, &[(r, neg), (s, one)])?);
        out.push(one_dim_from_gen_values(g, &[(r, neg), (s, neg)])?);
    }
    let two_dim_count = if n % 2 == 0 { n / 2 - 1 } else { (n - 1) / 2 };
    for h in 1..=two_dim_count {
        let w = Complex64::from_polar(1.0, TAU * h as f64 / n as f64);
        let mut rho_r = CMat::zeros(2, 2);
        rho_r[(0, 0)] = w;
        rho_r[(1, 1)] = w.conj();
        let mut rho_s = CMat::zeros(2, 2);
        rho_s[(0, 1)] = one;
        rho_s[(1, 0)] = one;
        out.push(Irrep::from_matrices(rep_from_generators(
            g,
            &[(r, rho_r), (s, rho_s)],
        )?));
    }
    Ok(out)
}

fn quaternion_irreps(g: &FiniteGroup) -> Result<Vec<Irrep>> {
    let gi = 2; // index of i
    let gj = 4; // index of j
    let one = Complex64::new(1.0, 0.0);
    let neg = Complex64::new(-1.0, 0.0);
    let im = Complex64::new(0.0, 1.0);
    let mut out = vec![
        one_dim_from_gen_values(g, &[(gi, one), (gj, one)])?,
        one_dim_from_gen_values(g, &[(gi, one), (gj, neg)])?,
        one_dim_from_gen_values(g, &[(gi, neg), (gj, one)])?,
        one_dim_from_gen_values(g, &[(gi, neg), (gj, neg)])?,
    ];
    let mut rho_i = CMat::zeros(2, 2);
    rho_i[(0, 0)] = im;
    rho_i[(1, 1)] = -im;
    let mut rho_j = CMat::zeros(2, 2);
    rho_j[(0, 1)] = one;
    rho_j[(1, 0)] = neg;
    out.push(Irrep::from_matrices(rep_from_generators(
        g,
        &[(gi, rho_i), (gj, rho_j)],
    )?));
    Ok(out)
}

fn symmetric_irreps(g: &FiniteGroup, n: usize) -> Result<Vec<Irrep>> {
    let perms = permutations(n);
    // element index of the adjacent transposition (k, k+1)
    let transposition_index = |k: usize| {
        let mut p: Vec<usize> = (0..n).collect();
        p.swap(k, k + 1);
        perms.iter().position(|q| *q == p).unwrap()
    };
    let mut out = Vec::new();
    for shape in partitions(n) {
        let gens: Vec<(usize, CMat)> = yor_generators(&shape)
            .into_iter()
            .enumerate()
            .map(|(k, m)| (transposition_index(k), m))
            .collect();
        out.push(Irrep::from_matrices(rep_from_generators(g, &gens)?));
    }
    Ok(out)
}

fn product_irreps(left: &GroupSpec, right: &GroupSpec) -> Result<Vec<Irrep>> {
    let ga = build_group(left)?;
    let gb = build_group(right)?;
    let ta = irreps_catalog(&ga)?;
    let tb = irreps_catalog(&gb)?;
    let mut out = Vec::new();
    for pa in &ta.irreps {
        for pb in &tb.irreps {
            let matrices: Vec<CMat> = (0..ga.order)
                .flat_map(|ia| {
                    let ma = &pa.matrices[ia];
                    (0..gb.order)
                        .map(move |ib| kron(ma, &pb.matrices[ib]))
                        .collect::<Vec<_>>()
                })
                .collect();
            out.push(Irrep::from_matrices(matrices));
        }
    }
    Ok(out)
}

/// Complete irrep table from closed-form constructions. Ordering is
/// canonical: ascending degree, ties broken by lexicographic character.
pub fn irreps_catalog(g: &FiniteGroup) -> Result<IrrepTable> {
    let mut irreps = match &g.spec {
        GroupSpec::Cyclic { n } => cyclic_irreps(*n),
        GroupSpec::Dihedral { n } => dihedral_irreps(g, *n)?,
        GroupSpec::Quaternion8 => quaternion_irreps(g)?,
        GroupSpec::Symmetric { n } => symmetric_irreps(g, *n)?,
        GroupSpec::Product { left, right } => product_irreps(left, right)?,
        GroupSpec::Table { source } => {
            return Err(NcftError::UnsupportedFamily(format!(
                "table:{source} (use irreps_numeric)"
            )))
        }
    };
    sort_canonical(&mut irreps);
    Ok(IrrepTable { group: g.clone(), irreps })
}
