//! Vector-valued Schatten norms.
//!
//! `S_n^p(E)` norms are exact in the matched-exponent (Fubini) cases and
//! otherwise come back as certified lower/estimate/upper sandwiches: upper
//! bounds from factorization optimization and Schmidt decompositions, lower
//! bounds from dual certificates paired against the flattened matrix.

mod optimizer;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{NcftError, Result};
use crate::exponent::Exponent;
use crate::linalg::{
    derive_rng, dual_power, exp_hermitian, identity, is_finite, kron, log_pd, reshuffle,
    schatten_norm as schatten_flat, trace, trace_inner, CMat, CVec,
};

pub use crate::linalg::schatten_norm;

/// Description of the coefficient operator space E.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorSpaceDesc {
    Scalar,
    Schatten { dim: usize, q: Exponent },
    /// ℓ^p(n) realized as the diagonal subspace of the n×n Schatten class.
    DiagLp { dim: usize, p: Exponent },
}

impl OperatorSpaceDesc {
    /// Side length of the matrix realization of an element of E.
    pub fn dim(&self) -> usize {
        match self {
            OperatorSpaceDesc::Scalar => 1,
            OperatorSpaceDesc::Schatten { dim, .. } | OperatorSpaceDesc::DiagLp { dim, .. } => *dim,
        }
    }

    /// Inner Schatten exponent of the matrix realization; Scalar has none
    /// and behaves as matched with any outer exponent.
    pub fn inner_exponent(&self) -> Option<Exponent> {
        match self {
            OperatorSpaceDesc::Scalar => None,
            OperatorSpaceDesc::Schatten { q, .. } => Some(*q),
            OperatorSpaceDesc::DiagLp { p, .. } => Some(*p),
        }
    }

    pub fn dual(&self) -> OperatorSpaceDesc {
        match self {
            OperatorSpaceDesc::Scalar => OperatorSpaceDesc::Scalar,
            OperatorSpaceDesc::Schatten { dim, q } => OperatorSpaceDesc::Schatten {
                dim: *dim,
                q: q.conjugate(),
            },
            OperatorSpaceDesc::DiagLp { dim, p } => OperatorSpaceDesc::DiagLp {
                dim: *dim,
                p: p.conjugate(),
            },
        }
    }
}

impl OperatorSpaceDesc {
    /// Parse compact descriptors: `scalar`, `schatten:<dim>:<q>`,
    /// `lp:<dim>:<p>`; exponents accept `inf` and fractions like `4/3`.
    pub fn parse(s: &str) -> Result<OperatorSpaceDesc> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["scalar"] => Ok(OperatorSpaceDesc::Scalar),
            ["schatten", dim, q] => Ok(OperatorSpaceDesc::Schatten {
                dim: dim
                    .parse()
                    .map_err(|_| NcftError::UnsupportedSpace(s.into()))?,
                q: Exponent::parse(q)?,
            }),
            ["lp", dim, p] => Ok(OperatorSpaceDesc::DiagLp {
                dim: dim
                    .parse()
                    .map_err(|_| NcftError::UnsupportedSpace(s.into()))?,
                p: Exponent::parse(p)?,
            }),
            _ => Err(NcftError::UnsupportedSpace(s.into())),
        }
    }
}

impl std::fmt::Display for OperatorSpaceDesc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OperatorSpaceDesc::Scalar => write!(f, "scalar"),
            OperatorSpaceDesc::Schatten { dim, q } => write!(f, "schatten({dim},{q})"),
            OperatorSpaceDesc::DiagLp { dim, p } => write!(f, "lp({dim},{p})"),
        }
    }
}

/// A single element of E in the shape its descriptor prescribes.
#[derive(Debug, Clone)]
pub enum EValue {
    Scalar(Complex64),
    Matrix(CMat),
    Diag(CVec),
}

impl EValue {
    /// Matrix realization: 1×1 for Scalar, the matrix itself for Schatten,
    /// the diagonal matrix for DiagLp.
    pub fn to_matrix(&self) -> CMat {
        match self {
            EValue::Scalar(z) => CMat::from_element(1, 1, *z),
            EValue::Matrix(m) => m.clone(),
            EValue::Diag(v) => CMat::from_diagonal(v),
        }
    }

    pub fn from_matrix(e: &OperatorSpaceDesc, m: &CMat) -> Result<EValue> {
        let d = e.dim();
        if m.nrows() != d || m.ncols() != d {
            return Err(NcftError::ShapeMismatch(format!(
                "{}×{} value for space {e} of dim {d}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(match e {
            OperatorSpaceDesc::Scalar => EValue::Scalar(m[(0, 0)]),
            OperatorSpaceDesc::Schatten { .. } => EValue::Matrix(m.clone()),
            OperatorSpaceDesc::DiagLp { .. } => EValue::Diag(m.diagonal()),
        })
    }

    fn matches(&self, e: &OperatorSpaceDesc) -> bool {
        match (self, e) {
            (EValue::Scalar(_), OperatorSpaceDesc::Scalar) => true,
            (EValue::Matrix(m), OperatorSpaceDesc::Schatten { dim, .. }) => {
                m.nrows() == *dim && m.ncols() == *dim
            }
            (EValue::Diag(v), OperatorSpaceDesc::DiagLp { dim, .. }) => v.len() == *dim,
            _ => false,
        }
    }
}

/// Norm of a single E-value.
pub fn e_norm(x: &EValue, e: &OperatorSpaceDesc) -> Result<f64> {
    if !x.matches(e) {
        return Err(NcftError::ShapeMismatch(format!("value does not match space {e}")));
    }
    Ok(match (x, e) {
        (EValue::Scalar(z), _) => z.norm(),
        (EValue::Matrix(m), OperatorSpaceDesc::Schatten { q, .. }) => schatten_flat(m, *q)?,
        (EValue::Diag(v), OperatorSpaceDesc::DiagLp { p, .. }) => {
            let terms: Vec<(f64, f64)> = v.iter().map(|z| (1.0, z.norm())).collect();
            p.weighted_sum_norm(&terms)
        }
        _ => unreachable!(),
    })
}

/// An element of M_n ⊗ E, stored flattened as an (n·m)×(n·m) matrix in
/// row-major blocks (outer index slow).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    pub outer: usize,
    pub e: OperatorSpaceDesc,
    pub flat: CMat,
}

impl BlockMatrix {
    pub fn from_flat(outer: usize, e: OperatorSpaceDesc, flat: CMat) -> Result<BlockMatrix> {
        let side = outer * e.dim();
        if flat.nrows() != side || flat.ncols() != side {
            return Err(NcftError::ShapeMismatch(format!(
                "flat matrix {}×{} for outer {outer} over {e}",
                flat.nrows(),
                flat.ncols()
            )));
        }
        if !is_finite(&flat) {
            return Err(NcftError::NonFiniteEntries);
        }
        Ok(BlockMatrix { outer, e, flat })
    }

    pub fn from_blocks(e: OperatorSpaceDesc, blocks: &[Vec<EValue>]) -> Result<BlockMatrix> {
        let n = blocks.len();
        let m = e.dim();
        let mut flat = CMat::zeros(n * m, n * m);
        for (i, row) in blocks.iter().enumerate() {
            if row.len() != n {
                return Err(NcftError::ShapeMismatch("ragged block rows".into()));
            }
            for (j, v) in row.iter().enumerate() {
                if !v.matches(&e) {
                    return Err(NcftError::ShapeMismatch(format!(
                        "block ({i},{j}) does not match space {e}"
                    )));
                }
                flat.view_mut((i * m, j * m), (m, m)).copy_from(&v.to_matrix());
            }
        }
        BlockMatrix::from_flat(n, e, flat)
    }

    /// Elementary tensor a ⊗ y.
    pub fn elementary(a: &CMat, y: &EValue, e: OperatorSpaceDesc) -> Result<BlockMatrix> {
        if a.nrows() != a.ncols() {
            return Err(NcftError::ShapeMismatch("outer factor must be square".into()));
        }
        if !y.matches(&e) {
            return Err(NcftError::ShapeMismatch(format!("inner factor does not match {e}")));
        }
        BlockMatrix::from_flat(a.nrows(), e, kron(a, &y.to_matrix()))
    }

    pub fn block(&self, i: usize, j: usize) -> CMat {
        let m = self.e.dim();
        self.flat.view((i * m, j * m), (m, m)).into()
    }

    pub fn block_value(&self, i: usize, j: usize) -> EValue {
        EValue::from_matrix(&self.e, &self.block(i, j)).expect("block shape is consistent")
    }
}

/// Swap the tensor factors of an (n·m)×(n·m) flat matrix: the result is the
/// (m·n)×(m·n) matrix with x'[(k,i),(l,j)] = x[(i,k),(j,l)].
pub fn swap_blocks(flat: &CMat, n: usize, m: usize) -> CMat {
    let mut out = CMat::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[(k * n + i, l * n + j)] = flat[(i * m + k, j * m + l)];
                }
            }
        }
    }
    out
}

/// Duality pairing: trace of the product of the flattened matrices.
pub fn pairing(x: &CMat, z: &CMat) -> Complex64 {
    trace(&(x * z))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SandwichMethod {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "fubini")]
    Fubini,
    #[serde(rename = "factorization+dual")]
    FactorizationDual,
}

/// Certified bracket around a norm value: lower ≤ estimate ≤ upper, with
/// lower = upper for the exact methods.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormSandwich {
    pub lower: f64,
    pub estimate: f64,
    pub upper: f64,
    pub method: SandwichMethod,
    pub restarts_used: usize,
    /// Set when the sandwich gap stayed above the configured target after
    /// the full optimizer budget; the bounds remain valid.
    pub budget_exhausted: bool,
}

impl NormSandwich {
    pub fn exact(value: f64, method: SandwichMethod) -> NormSandwich {
        NormSandwich {
            lower: value,
            estimate: value,
            upper: value,
            method,
            restarts_used: 0,
            budget_exhausted: false,
        }
    }

    fn bracket(lower: f64, estimate: f64, upper: f64, restarts: usize, gap_target: f64) -> NormSandwich {
        debug_assert!(lower <= upper * (1.0 + 1e-9) + 1e-12, "lower {lower} > upper {upper}");
        let lower = lower.min(upper);
        let estimate = estimate.clamp(lower, upper);
        let gap = if upper > 0.0 { (upper - lower) / upper } else { 0.0 };
        NormSandwich {
            lower,
            estimate,
            upper,
            method: SandwichMethod::FactorizationDual,
            restarts_used: restarts,
            budget_exhausted: gap > gap_target,
        }
    }

    pub fn gap(&self) -> f64 {
        if self.upper > 0.0 {
            (self.upper - self.lower) / self.upper
        } else {
            0.0
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    /// Weighted p-sum of sandwiches: lower from lowers, upper from uppers.
    /// Exact when every part is exact.
    pub fn combine_weighted(parts: &[(f64, NormSandwich)], p: Exponent) -> NormSandwich {
        let sum = |pick: &dyn Fn(&NormSandwich) -> f64| {
            let terms: Vec<(f64, f64)> = parts.iter().map(|(w, s)| (*w, pick(s))).collect();
            p.weighted_sum_norm(&terms)
        };
        let lower = sum(&|s| s.lower);
        let estimate = sum(&|s| s.estimate);
        let upper = sum(&|s| s.upper);
        let all_exact = parts.iter().all(|(_, s)| s.is_exact());
        NormSandwich {
            lower,
            estimate: estimate.clamp(lower, upper),
            upper,
            method: if all_exact {
                SandwichMethod::Exact
            } else {
                SandwichMethod::FactorizationDual
            },
            restarts_used: parts.iter().map(|(_, s)| s.restarts_used).max().unwrap_or(0),
            budget_exhausted: parts.iter().any(|(_, s)| s.budget_exhausted),
        }
    }
}

/// Budget and determinism knobs for the sandwich engine.
#[derive(Debug, Clone, Copy)]
pub struct SandwichOptions {
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
    pub random_certificates: usize,
    /// Test hook: route matched-exponent inputs through the factorization
    /// tier instead of the exact Fubini path.
    pub force_factorization: bool,
    /// Relative gap above which the sandwich is flagged budget_exhausted.
    pub gap_target: f64,
}

impl Default for SandwichOptions {
    fn default() -> Self {
        SandwichOptions {
            restarts: 32,
            iters: 400,
            seed: 0,
            random_certificates: 64,
            force_factorization: false,
            gap_target: 0.25,
        }
    }
}

impl SandwichOptions {
    pub fn quick(seed: u64) -> Self {
        SandwichOptions {
            restarts: 4,
            iters: 80,
            seed,
            random_certificates: 16,
            ..SandwichOptions::default()
        }
    }
}

// ---------------------------------------------------------------------------
// Hermitian parameter coding for the factorization optimizer.

fn hermitian_dim(n: usize) -> usize {
    n * n
}

/// Decode n² reals into a traceless Hermitian matrix: n diagonal entries
/// followed by (re, im) pairs for the strict upper triangle. The traceless
/// projection fixes the scale gauge of the factorization.
fn decode_hermitian(params: &[f64], n: usize) -> CMat {
    let mut h = CMat::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = Complex64::new(params[i], 0.0);
    }
    let mut k = n;
    for i in 0..n {
        for j in (i + 1)..n {
            let z = Complex64::new(params[k], params[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    let mean = trace(&h) / Complex64::new(n as f64, 0.0);
    for i in 0..n {
        h[(i, i)] -= mean;
    }
    h
}

fn encode_hermitian(h: &CMat, out: &mut Vec<f64>) {
    let n = h.nrows();
    for i in 0..n {
        out.push(h[(i, i)].re);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(h[(i, j)].re);
            out.push(h[(i, j)].im);
        }
    }
}

fn double_exponent(e: Exponent) -> Exponent {
    match e {
        Exponent::Infinity => Exponent::Infinity,
        Exponent::Finite(v) => Exponent::Finite(2.0 * v),
    }
}

// ---------------------------------------------------------------------------
// Schmidt (reshuffle SVD) decomposition bounds.

struct SchmidtTerm {
    weight: f64,
    outer: CMat,
    inner: CMat,
}

/// Decompose the flat matrix as Σ_k s_k a_k ⊗ y_k with orthonormal vec'd
/// factors, via SVD of the reshuffled matrix. Terms come back with s_k
/// descending; negligible terms are dropped.
fn schmidt_terms(flat: &CMat, n: usize, m: usize) -> Vec<SchmidtTerm> {
    let r = reshuffle(flat, n, m);
    let svd = r.svd(true, true);
    let u = svd.u.as_ref().unwrap();
    let vt = svd.v_t.as_ref().unwrap();
    let sv = &svd.singular_values;
    let top = sv.iter().fold(0.0f64, |acc, &s| acc.max(s));
    let mut terms = Vec::new();
    let mut idx: Vec<usize> = (0..sv.len()).collect();
    idx.sort_by(|&a, &b| sv[b].partial_cmp(&sv[a]).unwrap());
    for &k in &idx {
        if sv[k] <= top * 1e-13 {
            continue;
        }
        let outer = CMat::from_fn(n, n, |i, j| u[(i * n + j, k)]);
        let inner = CMat::from_fn(m, m, |a, b| vt[(k, a * m + b)]);
        terms.push(SchmidtTerm { weight: sv[k], outer, inner });
    }
    terms
}

/// Triangle-inequality upper bound Σ_k s_k ‖a_k‖_{S_n^p} ‖y_k‖_{S_m^q};
/// exact on elementary tensors.
fn schmidt_upper(flat: &CMat, n: usize, m: usize, p: Exponent, q: Exponent) -> Result<f64> {
    let mut total = 0.0;
    for t in schmidt_terms(flat, n, m) {
        total += t.weight * schatten_flat(&t.outer, p)? * schatten_flat(&t.inner, q)?;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Dual certificates.

/// Valid upper bound on ‖z‖_{S_n^{p'}(S_m^{q'})} for certificate use: the
/// Schmidt bound, tightened by the flat matched norm when the ordered-norms
/// inclusion runs the right way (p' ≥ q').
fn certificate_upper(z: &CMat, n: usize, m: usize, pd: Exponent, qd: Exponent) -> Result<f64> {
    let mut best = schmidt_upper(z, n, m, pd, qd)?;
    if pd.value() >= qd.value() {
        best = best.min(schatten_flat(z, qd)?);
    }
    Ok(best)
}

fn certificate_lower(
    flat: &CMat,
    n: usize,
    m: usize,
    pd: Exponent,
    qd: Exponent,
    pool: &[CMat],
) -> Result<f64> {
    let mut best: f64 = 0.0;
    for z in pool {
        let up = certificate_upper(z, n, m, pd, qd)?;
        if up > 1e-300 {
            best = best.max(pairing(flat, z).norm() / up);
        }
    }
    Ok(best)
}

/// Shared certificate candidates: the adjoint, flat dual-norm witnesses at
/// both exponents, the elementary certificate from the top Schmidt pair,
/// and seeded random Gaussians.
fn base_certificates(
    flat: &CMat,
    n: usize,
    m: usize,
    p: Exponent,
    q: Exponent,
    opts: &SandwichOptions,
) -> Vec<CMat> {
    let mut pool = vec![flat.adjoint(), dual_power(flat, q), dual_power(flat, p)];
    if let Some(top) = schmidt_terms(flat, n, m).first() {
        pool.push(kron(&dual_power(&top.outer, p), &dual_power(&top.inner, q)));
    }
    for k in 0..opts.random_certificates {
        let mut rng = derive_rng(opts.seed, 0xce27_0000 + k as u64);
        pool.push(crate::linalg::complex_gaussian(&mut rng, n * m, n * m));
    }
    pool
}

// ---------------------------------------------------------------------------
// Factorization tiers.

struct FactorizationOutcome {
    value: f64,
    h_a: CMat,
    h_b: CMat,
}

/// Smart starting point for the factorization tiers: powers of the partial
/// traces of x x* and x* x, exact for elementary tensors. `t` is the power
/// applied to the square of the outer factor.
fn partial_trace_init(flat: &CMat, n: usize, m: usize, t: f64) -> (CMat, CMat) {
    let left = trace_inner(&(flat * flat.adjoint()), n, m);
    let right = trace_inner(&(flat.adjoint() * flat), n, m);
    let floor_of = |g: &CMat| {
        let scale = g.diagonal().iter().map(|z| z.re.abs()).fold(0.0f64, f64::max);
        (scale * 1e-8).max(1e-300)
    };
    let h_a = log_pd(&left, floor_of(&left)) * Complex64::new(t / 2.0, 0.0);
    let h_b = log_pd(&right, floor_of(&right)) * Complex64::new(t / 2.0, 0.0);
    (h_a, h_b)
}

fn run_restarts(
    objective: &(dyn Fn(&[f64]) -> f64 + Sync),
    init: &[f64],
    opts: &SandwichOptions,
) -> (f64, Vec<f64>) {
    let results: Vec<optimizer::SearchResult> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|restart| {
            let mut rng = derive_rng(opts.seed, 0xfac0_0000 + restart as u64);
            let mut start = init.to_vec();
            if restart > 0 {
                use rand::Rng;
                use rand_distr::StandardNormal;
                let scale = if restart % 4 == 0 { 1.0 } else { 0.4 };
                let fresh = restart % 4 == 0;
                for v in start.iter_mut() {
                    let d: f64 = rng.sample(StandardNormal);
                    *v = if fresh { scale * d } else { *v + scale * d };
                }
            }
            optimizer::minimize(objective, &start, opts.iters, &mut rng)
        })
        .collect();
    let mut best_val = f64::INFINITY;
    let mut best_params = init.to_vec();
    for r in results {
        if r.value < best_val {
            best_val = r.value;
            best_params = r.params;
        }
    }
    (best_val, best_params)
}

/// Tier (iv), p < q: minimize ‖a‖_{2r} ‖(a⁻¹⊗1)x(b⁻¹⊗1)‖_q ‖b‖_{2r} over
/// positive definite a = exp(h_a), b = exp(h_b), 1/p = 1/q + 1/r.
fn factorization_upper(
    flat: &CMat,
    n: usize,
    m: usize,
    p: Exponent,
    q: Exponent,
    opts: &SandwichOptions,
) -> Result<FactorizationOutcome> {
    let r = Exponent::holder_complement(p, q);
    let two_r = double_exponent(r);
    let im = identity(m);
    let objective = move |params: &[f64]| -> f64 {
        let h_a = decode_hermitian(&params[..hermitian_dim(n)], n);
        let h_b = decode_hermitian(&params[hermitian_dim(n)..], n);
        let a = exp_hermitian(&h_a);
        let b = exp_hermitian(&h_b);
        let a_inv = exp_hermitian(&(-&h_a));
        let b_inv = exp_hermitian(&(-&h_b));
        let mid = kron(&a_inv, &im) * flat * kron(&b_inv, &im);
        let na = schatten_flat(&a, two_r).unwrap_or(f64::INFINITY);
        let nb = schatten_flat(&b, two_r).unwrap_or(f64::INFINITY);
        let nm = schatten_flat(&mid, q).unwrap_or(f64::INFINITY);
        let v = na * nm * nb;
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    // exact for elementary tensors: a = (xx*-partial-trace)^{p/(4r)}
    let inv_r = match r {
        Exponent::Infinity => 0.0,
        Exponent::Finite(rv) => 1.0 / rv,
    };
    let t = p.value() * inv_r / 2.0;
    let (h_a0, h_b0) = partial_trace_init(flat, n, m, t);
    let mut init = Vec::with_capacity(2 * hermitian_dim(n));
    encode_hermitian(&h_a0, &mut init);
    encode_hermitian(&h_b0, &mut init);
    for v in init.iter_mut() {
        *v = v.clamp(-optimizer::PARAM_CLAMP, optimizer::PARAM_CLAMP);
    }
    let (value, params) = run_restarts(&objective, &init, opts);
    Ok(FactorizationOutcome {
        value,
        h_a: decode_hermitian(&params[..hermitian_dim(n)], n),
        h_b: decode_hermitian(&params[hermitian_dim(n)..], n),
    })
}

/// Tier (v) lower bound, p > q: maximize
/// ‖(a⊗1)x(b⊗1)‖_q / (‖a‖_{2r} ‖b‖_{2r}) with 1/q = 1/p + 1/r. Every
/// trial value is a certified lower bound by the Hölder inequality for
/// vector-valued Schatten classes.
fn sup_formula_lower(
    flat: &CMat,
    n: usize,
    m: usize,
    p: Exponent,
    q: Exponent,
    opts: &SandwichOptions,
) -> Result<FactorizationOutcome> {
    let r = Exponent::holder_complement(q, p);
    let two_r = double_exponent(r);
    let im = identity(m);
    let objective = move |params: &[f64]| -> f64 {
        let h_a = decode_hermitian(&params[..hermitian_dim(n)], n);
        let h_b = decode_hermitian(&params[hermitian_dim(n)..], n);
        let a = exp_hermitian(&h_a);
        let b = exp_hermitian(&h_b);
        let num = schatten_flat(&(kron(&a, &im) * flat * kron(&b, &im)), q).unwrap_or(0.0);
        let na = schatten_flat(&a, two_r).unwrap_or(f64::INFINITY);
        let nb = schatten_flat(&b, two_r).unwrap_or(f64::INFINITY);
        let v = num / (na * nb);
        if v.is_finite() {
            -v
        } else {
            f64::INFINITY
        }
    };
    // exact for elementary tensors: a = (xx*-partial-trace)^{(p−q)/(4q)};
    // at p = ∞ the optimum concentrates on the top singular pair, so use a
    // strongly concentrating finite power.
    let t = match p {
        Exponent::Infinity => 6.0,
        Exponent::Finite(pv) => (pv - q.value()) / (2.0 * q.value()),
    };
    let (h_a0, h_b0) = partial_trace_init(flat, n, m, t);
    let mut init = Vec::with_capacity(2 * hermitian_dim(n));
    encode_hermitian(&h_a0, &mut init);
    encode_hermitian(&h_b0, &mut init);
    for v in init.iter_mut() {
        *v = v.clamp(-optimizer::PARAM_CLAMP, optimizer::PARAM_CLAMP);
    }
    let (neg_value, params) = run_restarts(&objective, &init, opts);
    Ok(FactorizationOutcome {
        value: (-neg_value).max(0.0),
        h_a: decode_hermitian(&params[..hermitian_dim(n)], n),
        h_b: decode_hermitian(&params[hermitian_dim(n)..], n),
    })
}

// ---------------------------------------------------------------------------
// The engine.

/// Norm of x in S_n^p(E): exact in the Fubini/scalar tiers, otherwise a
/// certified sandwich from factorization uppers and dual-certificate lowers.
pub fn sn_p_norm(x: &BlockMatrix, p: Exponent, opts: &SandwichOptions) -> Result<NormSandwich> {
    if !is_finite(&x.flat) {
        return Err(NcftError::NonFiniteEntries);
    }
    let n = x.outer;
    let m = x.e.dim();
    let q = match x.e.inner_exponent() {
        // scalar E behaves as matched with the outer exponent
        None => {
            return Ok(NormSandwich::exact(
                schatten_flat(&x.flat, p)?,
                SandwichMethod::Exact,
            ))
        }
        Some(q) => q,
    };
    if m == 1 {
        return Ok(NormSandwich::exact(
            schatten_flat(&x.flat, p)?,
            SandwichMethod::Exact,
        ));
    }
    if q.approx_eq(&p) && !opts.force_factorization {
        let method = if p.is_infinite() {
            // minimal tensor norm of the flattened operator
            SandwichMethod::Exact
        } else {
            SandwichMethod::Fubini
        };
        return Ok(NormSandwich::exact(schatten_flat(&x.flat, p)?, method));
    }
    let flat_q = schatten_flat(&x.flat, q)?;
    let schmidt = schmidt_upper(&x.flat, n, m, p, q)?;
    let pd = p.conjugate();
    let qd = q.conjugate();
    let mut pool = base_certificates(&x.flat, n, m, p, q, opts);

    if p.value() <= q.value() {
        // tier (iv): factorization upper; flat matched norm is a lower by
        // the ordered-norms contraction
        let fac = factorization_upper(&x.flat, n, m, p, q, opts)?;
        let upper = schmidt.min(fac.value);
        let a_inv = exp_hermitian(&(-&fac.h_a));
        let b_inv = exp_hermitian(&(-&fac.h_b));
        let im = identity(m);
        let mid = kron(&a_inv, &im) * &x.flat * kron(&b_inv, &im);
        pool.push(kron(&b_inv, &im) * dual_power(&mid, q) * kron(&a_inv, &im));
        let lower = flat_q.max(certificate_lower(&x.flat, n, m, pd, qd, &pool)?);
        Ok(NormSandwich::bracket(lower, upper, upper, opts.restarts, opts.gap_target))
    } else {
        // tier (v): flat matched norm and Schmidt are uppers; the dual-side
        // sup formula and certificates give lowers
        let upper = flat_q.min(schmidt);
        let sup = sup_formula_lower(&x.flat, n, m, p, q, opts)?;
        let a = exp_hermitian(&sup.h_a);
        let b = exp_hermitian(&sup.h_b);
        let im = identity(m);
        pool.push(kron(&b, &im) * dual_power(&(kron(&a, &im) * &x.flat * kron(&b, &im)), q) * kron(&a, &im));
        let lower = sup
            .value
            .max(certificate_lower(&x.flat, n, m, pd, qd, &pool)?);
        Ok(NormSandwich::bracket(lower, lower.max(sup.value), upper, opts.restarts, opts.gap_target))
    }
}

/// Norm in M_n(E): the p = ∞ member of the same engine.
pub fn mn_e_norm(x: &BlockMatrix, opts: &SandwichOptions) -> Result<NormSandwich> {
    sn_p_norm(x, Exponent::INF, opts)
}

/// ℓ^p(n) vector as a diagonal scalar-block matrix; its sn_p_norm at
/// exponent p is exactly the ℓ^p norm.
pub fn embed_diag_lp(v: &[Complex64], _p: Exponent) -> BlockMatrix {
    let n = v.len();
    let flat = CMat::from_fn(n, n, |i, j| {
        if i == j {
            v[i]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    BlockMatrix {
        outer: n,
        e: OperatorSpaceDesc::Scalar,
        flat,
    }
}

// ---------------------------------------------------------------------------
// JSON form: complex entries as [re, im], matrices as nested row-major rows.

pub(crate) fn mat_to_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub(crate) fn rows_to_mat(rows: &[Vec<[f64; 2]>]) -> Result<CMat> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != nc) {
        return Err(NcftError::ShapeMismatch("ragged matrix rows".into()));
    }
    Ok(CMat::from_fn(nr, nc, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

#[derive(Serialize, Deserialize)]
struct BlockMatrixRaw {
    outer: usize,
    #[serde(rename = "E")]
    e: OperatorSpaceDesc,
    data: Vec<Vec<[f64; 2]>>,
}

impl Serialize for BlockMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BlockMatrixRaw {
            outer: self.outer,
            e: self.e,
            data: mat_to_rows(&self.flat),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlockMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = BlockMatrixRaw::deserialize(d)?;
        let flat = rows_to_mat(&raw.data).map_err(D::Error::custom)?;
        BlockMatrix::from_flat(raw.outer, raw.e, flat).map_err(D::Error::custom)
    }
}
