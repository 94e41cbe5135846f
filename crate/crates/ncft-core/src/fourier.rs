//! Vector-valued Fourier transform over a finite group with normalized
//! Haar measure, its inverse, the duality pairing, and the involution τ.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{NcftError, Result};
use crate::exponent::Exponent;
use crate::group::{FiniteGroup, GroupSpec};
use crate::linalg::{kron, trace, CMat};
use crate::repr::IrrepTable;
use crate::specnorm::{
    e_norm, mat_to_rows, rows_to_mat, sn_p_norm, BlockMatrix, EValue, NormSandwich,
    OperatorSpaceDesc, SandwichOptions,
};

/// An E-valued function on a finite group, one value per element in the
/// group's fixed element order.
#[derive(Debug, Clone)]
pub struct GroupFunction {
    pub group: FiniteGroup,
    pub e: OperatorSpaceDesc,
    pub values: Vec<EValue>,
}

impl GroupFunction {
    pub fn new(group: FiniteGroup, e: OperatorSpaceDesc, values: Vec<EValue>) -> Result<GroupFunction> {
        if values.len() != group.order {
            return Err(NcftError::ShapeMismatch(format!(
                "{} values for group of order {}",
                values.len(),
                group.order
            )));
        }
        let f = GroupFunction { group, e, values };
        for (g, v) in f.values.iter().enumerate() {
            // matrix realization must match the descriptor's shape
            EValue::from_matrix(&f.e, &v.to_matrix()).map_err(|_| {
                NcftError::ShapeMismatch(format!("value at element {g} does not match {}", f.e))
            })?;
        }
        Ok(f)
    }

    pub fn scalar(group: FiniteGroup, values: Vec<Complex64>) -> GroupFunction {
        GroupFunction {
            group,
            e: OperatorSpaceDesc::Scalar,
            values: values.into_iter().map(EValue::Scalar).collect(),
        }
    }

    /// The scaled point mass |G|·δ_e, the extremal function of the scalar
    /// Hausdorff–Young inequality.
    pub fn scaled_delta(group: FiniteGroup) -> GroupFunction {
        let order = group.order;
        let mut values = vec![Complex64::new(0.0, 0.0); order];
        values[FiniteGroup::IDENTITY] = Complex64::new(order as f64, 0.0);
        GroupFunction::scalar(group, values)
    }

    pub fn value_matrix(&self, g: usize) -> CMat {
        self.values[g].to_matrix()
    }
}

/// A spectral array: one M_{d_π} ⊗ E block per irrep of the table.
#[derive(Debug, Clone)]
pub struct SpectralArray {
    pub table: IrrepTable,
    pub e: OperatorSpaceDesc,
    pub blocks: Vec<BlockMatrix>,
}

impl SpectralArray {
    pub fn new(table: IrrepTable, e: OperatorSpaceDesc, blocks: Vec<BlockMatrix>) -> Result<SpectralArray> {
        if blocks.len() != table.irreps.len() {
            return Err(NcftError::ShapeMismatch(format!(
                "{} blocks for {} irreps",
                blocks.len(),
                table.irreps.len()
            )));
        }
        for (p, b) in table.irreps.iter().zip(&blocks) {
            if b.outer != p.degree || b.e != e {
                return Err(NcftError::ShapeMismatch(format!(
                    "block of outer dim {} over {} at irrep of degree {}",
                    b.outer, b.e, p.degree
                )));
            }
        }
        Ok(SpectralArray { table, e, blocks })
    }

    pub fn zero(table: IrrepTable, e: OperatorSpaceDesc) -> SpectralArray {
        let m = e.dim();
        let blocks = table
            .irreps
            .iter()
            .map(|p| BlockMatrix {
                outer: p.degree,
                e,
                flat: CMat::zeros(p.degree * m, p.degree * m),
            })
            .collect();
        SpectralArray { table, e, blocks }
    }
}

fn check_same_group(a: &GroupSpec, b: &GroupSpec) -> Result<()> {
    if format!("{a}") != format!("{b}") {
        return Err(NcftError::GroupMismatch(format!("{a} vs {b}")));
    }
    Ok(())
}

/// Fourier coefficients f̂(π) = (1/|G|) Σ_g π(g)* ⊗ f(g), one block per
/// irrep, accumulated in fixed element order.
pub fn forward(f: &GroupFunction, t: &IrrepTable) -> Result<SpectralArray> {
    check_same_group(&f.group.spec, &t.group.spec)?;
    let order = f.group.order;
    let m = f.e.dim();
    let inv_order = Complex64::new(1.0 / order as f64, 0.0);
    let mut blocks = Vec::with_capacity(t.irreps.len());
    for p in &t.irreps {
        let side = p.degree * m;
        let mut flat = CMat::zeros(side, side);
        for g in 0..order {
            flat += kron(&p.matrices[g].adjoint(), &f.value_matrix(g));
        }
        flat *= inv_order;
        blocks.push(BlockMatrix::from_flat(p.degree, f.e, flat)?);
    }
    SpectralArray::new(t.clone(), f.e, blocks)
}

/// Inversion formula f(g) = Σ_π d_π Σ_{i,j} A^π_{ij} · π_{ji}(g); the sum
/// over (i,j) is the partial trace over the matrix factor weighted by π(g).
pub fn inverse(a: &SpectralArray) -> Result<GroupFunction> {
    let t = &a.table;
    let group = t.group.clone();
    let m = a.e.dim();
    let mut values = Vec::with_capacity(group.order);
    for g in 0..group.order {
        let mut total = CMat::zeros(m, m);
        for (p, b) in t.irreps.iter().zip(&a.blocks) {
            let d = Complex64::new(p.degree as f64, 0.0);
            let pg = &p.matrices[g];
            for i in 0..p.degree {
                for j in 0..p.degree {
                    total += b.block(i, j) * (d * pg[(j, i)]);
                }
            }
        }
        values.push(EValue::from_matrix(&a.e, &total)?);
    }
    GroupFunction::new(group, a.e, values)
}

/// Duality pairing Σ_π d_π tr(A^π B^π), the trace taken over the flattened
/// blocks.
pub fn pairing(a: &SpectralArray, b: &SpectralArray) -> Result<Complex64> {
    check_same_group(&a.table.group.spec, &b.table.group.spec)?;
    if a.blocks.len() != b.blocks.len() {
        return Err(NcftError::ShapeMismatch("mismatched block counts".into()));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for ((p, ba), bb) in a.table.irreps.iter().zip(&a.blocks).zip(&b.blocks) {
        if ba.flat.ncols() != bb.flat.nrows() {
            return Err(NcftError::ShapeMismatch(format!(
                "pairing blocks of sides {} and {}",
                ba.flat.ncols(),
                bb.flat.nrows()
            )));
        }
        total += Complex64::new(p.degree as f64, 0.0) * trace(&(&ba.flat * &bb.flat));
    }
    Ok(total)
}

/// τ(f)(g) = f(g⁻¹).
pub fn involution(f: &GroupFunction) -> GroupFunction {
    let values = (0..f.group.order)
        .map(|g| f.values[f.group.inv(g)].clone())
        .collect();
    GroupFunction {
        group: f.group.clone(),
        e: f.e,
        values,
    }
}

/// L_E^p(G) norm under normalized Haar measure:
/// ((1/|G|) Σ_g ‖f(g)‖_E^p)^{1/p}, max over g at p = ∞.
pub fn lp_g_norm(f: &GroupFunction, p: Exponent) -> Result<f64> {
    let w = 1.0 / f.group.order as f64;
    let mut terms = Vec::with_capacity(f.group.order);
    for v in &f.values {
        terms.push((w, e_norm(v, &f.e)?));
    }
    Ok(p.weighted_sum_norm(&terms))
}

/// ℒ_E^p(Ĝ) norm (Σ_π d_π ‖A^π‖_{S_{d_π}^p(E)}^p)^{1/p}; sup over π at
/// p = ∞. Exact when every block is exact-tier, otherwise a sandwich.
pub fn lp_ghat_norm(a: &SpectralArray, p: Exponent, opts: &SandwichOptions) -> Result<NormSandwich> {
    let mut parts = Vec::with_capacity(a.blocks.len());
    for (pi, b) in a.table.irreps.iter().zip(&a.blocks) {
        parts.push((pi.degree as f64, sn_p_norm(b, p, opts)?));
    }
    Ok(NormSandwich::combine_weighted(&parts, p))
}

// ---------------------------------------------------------------------------
// JSON file formats. Values and blocks are stored in their matrix
// realization, complex entries as [re, im].

#[derive(Debug, Serialize, Deserialize)]
pub struct GroupFunctionFile {
    pub group: GroupSpec,
    #[serde(rename = "E")]
    pub e: OperatorSpaceDesc,
    pub values: Vec<Vec<Vec<[f64; 2]>>>,
}

impl GroupFunction {
    pub fn to_file(&self) -> GroupFunctionFile {
        GroupFunctionFile {
            group: self.group.spec.clone(),
            e: self.e,
            values: self.values.iter().map(|v| mat_to_rows(&v.to_matrix())).collect(),
        }
    }

    pub fn from_file(file: &GroupFunctionFile) -> Result<GroupFunction> {
        let group = crate::group::build_group(&file.group)?;
        let mut values = Vec::with_capacity(file.values.len());
        for rows in &file.values {
            values.push(EValue::from_matrix(&file.e, &rows_to_mat(rows)?)?);
        }
        GroupFunction::new(group, file.e, values)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpectralArrayFile {
    pub group: GroupSpec,
    #[serde(rename = "E")]
    pub e: OperatorSpaceDesc,
    pub blocks: Vec<SpectralBlockFile>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpectralBlockFile {
    pub pi: usize,
    pub degree: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl SpectralArray {
    pub fn to_file(&self) -> SpectralArrayFile {
        SpectralArrayFile {
            group: self.table.group.spec.clone(),
            e: self.e,
            blocks: self
                .blocks
                .iter()
                .enumerate()
                .map(|(pi, b)| SpectralBlockFile {
                    pi,
                    degree: b.outer,
                    data: mat_to_rows(&b.flat),
                })
                .collect(),
        }
    }

    /// Rebuild against a table for the same group; blocks may appear in any
    /// order thanks to the `pi` index.
    pub fn from_file(file: &SpectralArrayFile, table: &IrrepTable) -> Result<SpectralArray> {
        check_same_group(&file.group, &table.group.spec)?;
        let mut blocks: Vec<Option<BlockMatrix>> = vec![None; table.irreps.len()];
        for bf in &file.blocks {
            if bf.pi >= blocks.len() {
                return Err(NcftError::ShapeMismatch(format!("block index {} out of range", bf.pi)));
            }
            blocks[bf.pi] = Some(BlockMatrix::from_flat(bf.degree, file.e, rows_to_mat(&bf.data)?)?);
        }
        let blocks: Result<Vec<BlockMatrix>> = blocks
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or_else(|| NcftError::ShapeMismatch(format!("missing block {i}"))))
            .collect();
        SpectralArray::new(table.clone(), file.e, blocks?)
    }
}

// ---------------------------------------------------------------------------
// Seeded random inputs shared by the verification checks and tests.

pub fn random_group_function(
    group: &FiniteGroup,
    e: OperatorSpaceDesc,
    rng: &mut impl rand::Rng,
) -> GroupFunction {
    let m = e.dim();
    let values = (0..group.order)
        .map(|_| {
            let raw = crate::linalg::complex_gaussian(rng, m, m);
            EValue::from_matrix(&e, &raw).expect("shape matches by construction")
        })
        .collect();
    GroupFunction {
        group: group.clone(),
        e,
        values,
    }
}

pub fn random_spectral_array(
    table: &IrrepTable,
    e: OperatorSpaceDesc,
    rng: &mut impl rand::Rng,
) -> SpectralArray {
    let m = e.dim();
    let blocks = table
        .irreps
        .iter()
        .map(|p| {
            let side = p.degree * m;
            BlockMatrix {
                outer: p.degree,
                e,
                flat: crate::linalg::complex_gaussian(rng, side, side),
            }
        })
        .collect();
    SpectralArray {
        table: table.clone(),
        e,
        blocks,
    }
}
