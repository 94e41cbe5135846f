//! Dense complex matrix kernels shared by the norm engine and the
//! representation machinery.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{NcftError, Result};
use crate::exponent::Exponent;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO_C: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE_C: Complex64 = Complex64::new(1.0, 0.0);

/// Deterministic per-stream RNG: every independent unit of work derives its
/// own stream from (seed, stream index), so results do not depend on
/// scheduling order.
pub fn derive_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn is_finite(a: &CMat) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Singular values of a complex matrix, descending.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let mut sv: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

/// Schatten p-norm: ℓ^p norm of the singular values; operator norm at p = ∞.
pub fn schatten_norm(a: &CMat, p: Exponent) -> Result<f64> {
    if !is_finite(a) {
        return Err(NcftError::NonFiniteEntries);
    }
    let sv = singular_values(a);
    Ok(match p {
        Exponent::Infinity => sv.first().copied().unwrap_or(0.0),
        Exponent::Finite(p) => sv.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p),
    })
}

/// Eigendecomposition of a Hermitian matrix: (eigenvalues ascending, unitary U).
pub fn hermitian_eig(a: &CMat) -> (Vec<f64>, CMat) {
    let se = nalgebra::SymmetricEigen::new(a.clone());
    let mut idx: Vec<usize> = (0..se.eigenvalues.len()).collect();
    idx.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = idx.iter().map(|&i| se.eigenvalues[i]).collect();
    let n = a.nrows();
    let mut u = CMat::zeros(n, n);
    for (col, &i) in idx.iter().enumerate() {
        u.set_column(col, &se.eigenvectors.column(i));
    }
    (vals, u)
}

/// Apply a real function to a Hermitian matrix through its spectrum.
pub fn hermitian_map(h: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, u) = hermitian_eig(h);
    let d = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&v| Complex64::new(f(v), 0.0)),
    ));
    &u * d * u.adjoint()
}

/// exp(h) for Hermitian h (always positive definite).
pub fn exp_hermitian(h: &CMat) -> CMat {
    hermitian_map(h, f64::exp)
}

/// log(a) for a Hermitian positive definite matrix, with eigenvalue floor.
pub fn log_pd(a: &CMat, floor: f64) -> CMat {
    hermitian_map(a, |v| v.max(floor).ln())
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Reshuffle an (n·m)×(n·m) block matrix into the n²×m² matrix whose rows are
/// indexed by the outer coordinates and columns by the inner ones. An
/// elementary tensor a ⊗ y maps to the rank-one matrix vec(a)·vec(y)ᵀ.
pub fn reshuffle(x: &CMat, n: usize, m: usize) -> CMat {
    assert_eq!(x.nrows(), n * m);
    assert_eq!(x.ncols(), n * m);
    let mut out = CMat::zeros(n * n, m * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[(i * n + j, k * m + l)] = x[(i * m + k, j * m + l)];
                }
            }
        }
    }
    out
}

/// Inverse of [`reshuffle`]: rebuild the (n·m)×(n·m) matrix.
pub fn unreshuffle(r: &CMat, n: usize, m: usize) -> CMat {
    assert_eq!(r.nrows(), n * n);
    assert_eq!(r.ncols(), m * m);
    let mut out = CMat::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[(i * m + k, j * m + l)] = r[(i * n + j, k * m + l)];
                }
            }
        }
    }
    out
}

/// Partial trace over the inner m×m factor: returns the n×n matrix
/// R[i,j] = Σ_k x[(i,k),(j,k)].
pub fn trace_inner(x: &CMat, n: usize, m: usize) -> CMat {
    let mut out = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut s = ZERO_C;
            for k in 0..m {
                s += x[(i * m + k, j * m + k)];
            }
            out[(i, j)] = s;
        }
    }
    out
}

/// Partial trace over the outer n×n factor: returns the m×m matrix
/// S[k,l] = Σ_i x[(i,k),(i,l)].
pub fn trace_outer(x: &CMat, n: usize, m: usize) -> CMat {
    let mut out = CMat::zeros(m, m);
    for k in 0..m {
        for l in 0..m {
            let mut s = ZERO_C;
            for i in 0..n {
                s += x[(i * m + k, i * m + l)];
            }
            out[(k, l)] = s;
        }
    }
    out
}

pub fn trace(a: &CMat) -> Complex64 {
    a.diagonal().iter().sum()
}

/// Dual-norm witness for the scalar Schatten p-norm: for a = UΣV*, returns
/// V·Σ^{p−1}·U* (top singular pair projector at p = ∞), so tr(a·dual) = ‖a‖_p^p
/// and the witness has Schatten p′ norm ‖a‖_p^{p−1}.
pub fn dual_power(a: &CMat, p: Exponent) -> CMat {
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().unwrap();
    let vt = svd.v_t.as_ref().unwrap();
    let sv = &svd.singular_values;
    let n = sv.len();
    let cutoff = sv.iter().fold(0.0f64, |acc, &s| acc.max(s)) * 1e-13;
    let g: Vec<f64> = match p {
        Exponent::Infinity => {
            // projector onto the top singular pair
            let top = sv.iter().fold(0.0f64, |acc, &s| acc.max(s));
            sv.iter()
                .map(|&s| if s >= top - cutoff && top > 0.0 { 1.0 } else { 0.0 })
                .collect()
        }
        Exponent::Finite(p) => sv
            .iter()
            .map(|&s| if s > cutoff { s.powf(p - 1.0) } else { 0.0 })
            .collect(),
    };
    let d = CMat::from_diagonal(&CVec::from_iterator(
        n,
        g.iter().map(|&v| Complex64::new(v, 0.0)),
    ));
    vt.adjoint() * d * u.adjoint()
}

pub fn complex_gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> CMat {
    let g = complex_gaussian(rng, n, n);
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMat {
    let g = complex_gaussian(rng, n, n);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    // fix the phase gauge so the distribution is Haar
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE_C };
        for i in 0..n {
            q[(i, j)] *= phase.conj();
        }
    }
    q
}
