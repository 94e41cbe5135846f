//! Acceptance suite: one test per release criterion, each printing a
//! single pass/fail line. Tolerances and time budgets are stated inline.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use ncft_core::fourier::{random_group_function, random_spectral_array};
use ncft_core::repr::validate_irreps;
use ncft_core::specnorm::SandwichMethod;
use ncft_core::verify::{
    check_theorem_bounds, hy_extremal_residual, inverse_hy_extremal_residual,
};
use ncft_core::{
    build_group, check_hausdorff_young, check_inverse_hy, check_minkowski, check_plancherel,
    estimate_cotype_constant, estimate_type_constant, forward, inverse, irreps_catalog,
    irreps_numeric, schatten_norm, sn_p_norm, BlockMatrix, Exponent, GroupSpec, IrrepTable,
    OperatorSpaceDesc, SandwichOptions, VerdictStatus,
};

type CMat = DMatrix<Complex64>;

fn finish(n: usize, name: &str, started: Instant, budget: Duration, result: Result<(), String>) {
    let elapsed = started.elapsed();
    let outcome = match &result {
        Ok(()) if elapsed <= budget => "pass".to_string(),
        Ok(()) => format!("fail — over time budget ({elapsed:?} > {budget:?})"),
        Err(e) => format!("fail — {e}"),
    };
    println!("acceptance {n} ({name}): {outcome}");
    if let Err(e) = result {
        panic!("acceptance {n} ({name}): {e}");
    }
    assert!(elapsed <= budget, "acceptance {n}: {elapsed:?} over budget {budget:?}");
}

fn table_for(spec: &str) -> IrrepTable {
    irreps_catalog(&build_group(&GroupSpec::parse(spec).unwrap()).unwrap()).unwrap()
}

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

const ACCEPTANCE_GROUPS: [&str; 4] = ["Z4", "S3", "D4", "Q8"];

#[test]
fn acceptance_01_irrep_completeness() {
    let started = Instant::now();
    let result = (|| -> Result<(), String> {
        let mut specs: Vec<String> = (1..=12).map(|n| format!("Z{n}")).collect();
        specs.extend((2..=6).map(|n| format!("D{n}")));
        specs.extend(["Q8".into(), "S3".into(), "S4".into()]);
        for spec in &specs {
            let g = build_group(&GroupSpec::parse(spec).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let catalog = irreps_catalog(&g).map_err(|e| e.to_string())?;
            let numeric = irreps_numeric(&g, 11, 1e-8).map_err(|e| e.to_string())?;
            for (route, t) in [("catalog", &catalog), ("numeric", &numeric)] {
                let r = validate_irreps(t);
                if t.sum_degree_squares() != g.order {
                    return Err(format!(
                        "{spec}/{route}: Σd² = {} ≠ |G| = {}",
                        t.sum_degree_squares(),
                        g.order
                    ));
                }
                if r.unitarity >= 1e-9 || r.homomorphism >= 1e-9 {
                    return Err(format!(
                        "{spec}/{route}: unitarity {} homomorphism {}",
                        r.unitarity, r.homomorphism
                    ));
                }
                if r.schur_orthogonality >= 1e-8 {
                    return Err(format!("{spec}/{route}: Schur residual {}", r.schur_orthogonality));
                }
                if !r.pass {
                    return Err(format!("{spec}/{route}: {:?}", r.failures));
                }
            }
        }
        Ok(())
    })();
    finish(1, "irrep completeness", started, Duration::from_secs(10), result);
}

#[test]
fn acceptance_02_plancherel() {
    let started = Instant::now();
    let result = (|| -> Result<(), String> {
        for spec in ACCEPTANCE_GROUPS {
            let t = table_for(spec);
            let worst = check_plancherel(&t, OperatorSpaceDesc::Scalar, 1000, 2)
                .map_err(|e| e.to_string())?;
            if worst >= 1e-9 {
                return Err(format!("{spec}: worst relative residual {worst}"));
            }
        }
        Ok(())
    })();
    finish(2, "Plancherel isometry", started, Duration::from_secs(5), result);
}

#[test]
fn acceptance_03_round_trip() {
    let started = Instant::now();
    let e = OperatorSpaceDesc::Schatten { dim: 2, q: Exponent::TWO };
    let result = (|| -> Result<(), String> {
        for spec in ACCEPTANCE_GROUPS {
            let t = table_for(spec);
            let errs: Result<Vec<(f64, f64)>, String> = (0..200u64)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = ChaCha8Rng::seed_from_u64(300 + trial);
                    // inverse ∘ forward on a random function
                    let f = random_group_function(&t.group, e, &mut rng);
                    let back = inverse(&forward(&f, &t).map_err(|e| e.to_string())?)
                        .map_err(|e| e.to_string())?;
                    let (mut num, mut den) = (0.0f64, 0.0f64);
                    for g in 0..t.group.order {
                        num += (f.value_matrix(g) - back.value_matrix(g)).norm_squared();
                        den += f.value_matrix(g).norm_squared();
                    }
                    let err_fn = (num / den).sqrt();
                    // forward ∘ inverse on a random spectrum
                    let a = random_spectral_array(&t, e, &mut rng);
                    let round = forward(&inverse(&a).map_err(|e| e.to_string())?, &t)
                        .map_err(|e| e.to_string())?;
                    let (mut num, mut den) = (0.0f64, 0.0f64);
                    for (x, y) in a.blocks.iter().zip(round.blocks.iter()) {
                        num += (&x.flat - &y.flat).norm_squared();
                        den += x.flat.norm_squared();
                    }
                    Ok((err_fn, (num / den).sqrt()))
                })
                .collect();
            for (err_fn, err_sp) in errs? {
                if err_fn >= 1e-8 || err_sp >= 1e-8 {
                    return Err(format!("{spec}: roundtrip errors {err_fn} / {err_sp}"));
                }
            }
        }
        Ok(())
    })();
    finish(3, "transform round trip", started, Duration::from_secs(10), result);
}

#[test]
fn acceptance_04_hausdorff_young_scalar() {
    let started = Instant::now();
    let opts = SandwichOptions::quick(4);
    let result = (|| -> Result<(), String> {
        let grid = [Exponent::ONE, Exponent::new(4.0 / 3.0).unwrap(), Exponent::TWO];
        for spec in ACCEPTANCE_GROUPS {
            let t = table_for(spec);
            for p in grid {
                let verdicts =
                    check_hausdorff_young(&t, p, OperatorSpaceDesc::Scalar, 1000, 4, &opts)
                        .map_err(|e| e.to_string())?;
                let bad = verdicts.iter().filter(|v| v.status != VerdictStatus::Verified).count();
                if bad > 0 {
                    return Err(format!("{spec} p={p}: {bad}/1000 not verified"));
                }
                let residual = hy_extremal_residual(&t, p).map_err(|e| e.to_string())?;
                if residual >= 1e-9 {
                    return Err(format!("{spec} p={p}: extremal residual {residual}"));
                }
            }
        }
        Ok(())
    })();
    finish(4, "Hausdorff–Young", started, Duration::from_secs(30), result);
}

#[test]
fn acceptance_05_inverse_hausdorff_young_scalar() {
    let started = Instant::now();
    let opts = SandwichOptions::quick(5);
    let result = (|| -> Result<(), String> {
        let grid = [Exponent::ONE, Exponent::new(4.0 / 3.0).unwrap(), Exponent::TWO];
        for spec in ACCEPTANCE_GROUPS {
            let t = table_for(spec);
            for p in grid {
                let verdicts = check_inverse_hy(&t, p, OperatorSpaceDesc::Scalar, 1000, 5, &opts)
                    .map_err(|e| e.to_string())?;
                let violated =
                    verdicts.iter().filter(|v| v.status == VerdictStatus::Violated).count();
                if violated > 0 {
                    return Err(format!("{spec} p={p}: {violated}/1000 violated"));
                }
                let residual = inverse_hy_extremal_residual(&t, p).map_err(|e| e.to_string())?;
                if residual >= 1e-9 {
                    return Err(format!("{spec} p={p}: extremal residual {residual}"));
                }
            }
        }
        Ok(())
    })();
    finish(5, "inverse Hausdorff–Young", started, Duration::from_secs(30), result);
}

#[test]
fn acceptance_06_endpoint_constants() {
    let started = Instant::now();
    let result = (|| -> Result<(), String> {
        let spaces = [
            OperatorSpaceDesc::Scalar,
            OperatorSpaceDesc::Schatten { dim: 2, q: Exponent::TWO },
        ];
        for spec in ["S3", "Q8"] {
            let t = table_for(spec);
            for e in spaces {
                let opts = SandwichOptions::quick(6);
                let ty = estimate_type_constant(&t, Exponent::ONE, e, 2, 2, 6, &opts)
                    .map_err(|e| e.to_string())?;
                if (ty.value - 1.0).abs() >= 1e-6 {
                    return Err(format!("{spec} E={e}: type endpoint {}", ty.value));
                }
                let co = estimate_cotype_constant(&t, Exponent::ONE, e, 2, 2, 6, &opts)
                    .map_err(|e| e.to_string())?;
                if (co.value - 1.0).abs() >= 1e-6 {
                    return Err(format!("{spec} E={e}: cotype endpoint {}", co.value));
                }
            }
        }
        Ok(())
    })();
    finish(6, "endpoint constants", started, Duration::from_secs(60), result);
}

#[test]
fn acceptance_07_sandwich_soundness() {
    let started = Instant::now();
    let result = (|| -> Result<(), String> {
        let grid = [
            (Exponent::ONE, Exponent::TWO),
            (Exponent::TWO, Exponent::ONE),
            (Exponent::ONE, Exponent::INF),
            (Exponent::INF, Exponent::TWO),
            (Exponent::new(1.5).unwrap(), Exponent::new(3.0).unwrap()),
        ];
        // certified ordering on 10⁴ random instances
        let failures: Vec<String> = (0..10_000u64)
            .into_par_iter()
            .filter_map(|trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(700 + trial);
                let n = rng.gen_range(1..=3usize);
                let m = rng.gen_range(1..=3usize);
                let (p, q) = grid[(trial % 5) as usize];
                let flat = gaussian(&mut rng, n * m, n * m);
                let e = OperatorSpaceDesc::Schatten { dim: m, q };
                let x = match BlockMatrix::from_flat(n, e, flat) {
                    Ok(x) => x,
                    Err(e) => return Some(format!("trial {trial}: {e}")),
                };
                match sn_p_norm(&x, p, &SandwichOptions::quick(trial)) {
                    Ok(s) => {
                        let ok = s.lower <= s.estimate * (1.0 + 1e-12)
                            && s.estimate <= s.upper * (1.0 + 1e-12)
                            && s.lower.is_finite()
                            && s.upper.is_finite();
                        if ok {
                            None
                        } else {
                            Some(format!(
                                "trial {trial} n={n} m={m} p={p} q={q}: [{}, {}, {}]",
                                s.lower, s.estimate, s.upper
                            ))
                        }
                    }
                    Err(e) => Some(format!("trial {trial}: {e}")),
                }
            })
            .collect();
        if let Some(first) = failures.first() {
            return Err(format!("{} ordering failures, first: {first}", failures.len()));
        }
        // matched exponents: forced optimizer path reproduces the exact value
        let forced_opts = SandwichOptions {
            force_factorization: true,
            restarts: 32,
            ..SandwichOptions::default()
        };
        for trial in 0..5u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(7100 + trial);
            for p in [Exponent::ONE, Exponent::new(1.5).unwrap(), Exponent::TWO] {
                let flat = gaussian(&mut rng, 6, 6);
                let e = OperatorSpaceDesc::Schatten { dim: 3, q: p };
                let x = BlockMatrix::from_flat(2, e, flat).map_err(|e| e.to_string())?;
                let exact = sn_p_norm(&x, p, &SandwichOptions::default())
                    .map_err(|e| e.to_string())?;
                if exact.method != SandwichMethod::Fubini {
                    return Err(format!("matched p={p}: expected Fubini oracle"));
                }
                let forced = sn_p_norm(&x, p, &forced_opts).map_err(|e| e.to_string())?;
                let rel = (forced.upper - exact.estimate).abs() / exact.estimate;
                if rel >= 1e-4 {
                    return Err(format!("matched p={p} trial {trial}: optimizer off by {rel}"));
                }
            }
        }
        // elementary tensors: gap below 1%
        for (i, (p, q)) in grid.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(7200 + i as u64);
            let a = gaussian(&mut rng, 3, 3);
            let y = gaussian(&mut rng, 2, 2);
            let e = OperatorSpaceDesc::Schatten { dim: 2, q: *q };
            let yv = ncft_core::EValue::from_matrix(&e, &y).map_err(|e| e.to_string())?;
            let x = BlockMatrix::elementary(&a, &yv, e).map_err(|e| e.to_string())?;
            let s = sn_p_norm(&x, *p, &SandwichOptions::default()).map_err(|e| e.to_string())?;
            let truth = schatten_norm(&a, *p).map_err(|e| e.to_string())?
                * schatten_norm(&y, *q).map_err(|e| e.to_string())?;
            if s.lower > truth * (1.0 + 1e-9) || s.upper < truth * (1.0 - 1e-9) {
                return Err(format!("elementary p={p} q={q}: [{}, {}] misses {truth}", s.lower, s.upper));
            }
            if s.gap() >= 0.01 {
                return Err(format!("elementary p={p} q={q}: gap {}", s.gap()));
            }
        }
        Ok(())
    })();
    finish(7, "sandwich soundness", started, Duration::from_secs(300), result);
}

#[test]
fn acceptance_08_quantized_minkowski() {
    let started = Instant::now();
    let opts = SandwichOptions::quick(8);
    let result = (|| -> Result<(), String> {
        let grid = [
            (Exponent::ONE, Exponent::TWO),
            (Exponent::ONE, Exponent::INF),
            (Exponent::TWO, Exponent::INF),
            (Exponent::TWO, Exponent::TWO),
        ];
        for (p1, p2) in grid {
            let verdicts =
                check_minkowski(p1, p2, 2, 2, 100, 8, &opts).map_err(|e| e.to_string())?;
            let violated = verdicts.iter().filter(|v| v.status == VerdictStatus::Violated).count();
            if violated > 0 {
                return Err(format!("({p1},{p2}): {violated}/100 violated"));
            }
            if p1.approx_eq(&p2) {
                for v in &verdicts {
                    // matched reordering is an isometry, margin must vanish
                    if v.margin.abs() >= 1e-10 * v.rhs.upper.max(1.0) {
                        return Err(format!("matched case margin {}", v.margin));
                    }
                }
            }
        }
        Ok(())
    })();
    finish(8, "quantized Minkowski", started, Duration::from_secs(120), result);
}

#[test]
fn acceptance_09_theorem_backed_bounds() {
    let started = Instant::now();
    let result = (|| -> Result<(), String> {
        let t = table_for("S3");
        let opts = SandwichOptions::quick(9);
        let mut estimates = Vec::new();
        for p in [Exponent::ONE, Exponent::TWO] {
            estimates.push(
                estimate_type_constant(&t, p, OperatorSpaceDesc::Scalar, 2, 4, 9, &opts)
                    .map_err(|e| e.to_string())?,
            );
        }
        // C_2^1(ℓ¹(2), G) ≤ 2^{1/1 − 1/2} = √2
        let diag = estimate_type_constant(
            &t,
            Exponent::TWO,
            OperatorSpaceDesc::DiagLp { dim: 2, p: Exponent::ONE },
            2,
            4,
            9,
            &opts,
        )
        .map_err(|e| e.to_string())?;
        if diag.value > 2f64.sqrt() + 1e-6 {
            return Err(format!("ℓ¹(2) estimate {} exceeds √2", diag.value));
        }
        estimates.push(diag);
        // 4-dimensional E at p = 2 is capped by √4 = 2
        let dim4 = estimate_type_constant(
            &t,
            Exponent::TWO,
            OperatorSpaceDesc::Schatten { dim: 2, q: Exponent::TWO },
            2,
            4,
            9,
            &opts,
        )
        .map_err(|e| e.to_string())?;
        if dim4.value > 2.0 + 1e-6 {
            return Err(format!("4-dim estimate {} exceeds 2", dim4.value));
        }
        estimates.push(dim4);
        for est in &estimates {
            if est.value < 1.0 - 1e-9 {
                return Err(format!("estimate below 1: {}", est.value));
            }
        }
        let report = check_theorem_bounds(&estimates);
        if !report.pass {
            return Err(format!("bounds report: {:?}", report.findings));
        }
        Ok(())
    })();
    finish(9, "theorem-backed bounds", started, Duration::from_secs(120), result);
}

#[test]
fn acceptance_10_determinism() {
    let started = Instant::now();
    let result = (|| -> Result<(), String> {
        let t = table_for("D4");
        let opts = SandwichOptions::quick(10);
        let run_hy = || {
            let v = check_hausdorff_young(
                &t,
                Exponent::new(4.0 / 3.0).unwrap(),
                OperatorSpaceDesc::Schatten { dim: 2, q: Exponent::TWO },
                20,
                10,
                &opts,
            )
            .unwrap();
            serde_json::to_string(&v).unwrap()
        };
        if run_hy() != run_hy() {
            return Err("Hausdorff–Young reports differ between identical runs".into());
        }
        let run_est = || {
            let est = estimate_type_constant(
                &t,
                Exponent::new(1.5).unwrap(),
                OperatorSpaceDesc::Scalar,
                2,
                3,
                10,
                &opts,
            )
            .unwrap();
            serde_json::to_string(&est).unwrap()
        };
        if run_est() != run_est() {
            return Err("constant estimates differ between identical runs".into());
        }
        Ok(())
    })();
    finish(10, "determinism", started, Duration::from_secs(60), result);
}
