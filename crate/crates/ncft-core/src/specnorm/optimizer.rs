//! Derivative-free local search used by the factorization engine.
//!
//! The search walks a flat real parameter vector with random directions and
//! an adaptive step size. It is monotone in the best value seen, so a good
//! starting point can never be lost.

use rand::Rng;
use rand_distr::StandardNormal;

/// Parameter entries are clamped to this magnitude; exp of a Hermitian
/// matrix built from larger entries overflows the objective.
pub const PARAM_CLAMP: f64 = 30.0;

pub struct SearchResult {
    pub params: Vec<f64>,
    pub value: f64,
}

/// Minimize `eval` starting from `init`. `eval` must return a finite value
/// or +∞ for infeasible points.
pub fn minimize(
    eval: &dyn Fn(&[f64]) -> f64,
    init: &[f64],
    iters: usize,
    rng: &mut impl Rng,
) -> SearchResult {
    let mut best = init.to_vec();
    let mut best_val = eval(&best);
    let mut step = 0.3;
    for _ in 0..iters {
        let mut trial = best.clone();
        for v in trial.iter_mut() {
            let d: f64 = rng.sample(StandardNormal);
            *v = (*v + step * d).clamp(-PARAM_CLAMP, PARAM_CLAMP);
        }
        let val = eval(&trial);
        if val < best_val {
            best = trial;
            best_val = val;
            step = (step * 1.5).min(2.0);
        } else {
            step *= 0.7;
            if step < 1e-8 {
                step = 0.05;
            }
        }
    }
    SearchResult { params: best, value: best_val }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::derive_rng;

    #[test]
    fn finds_quadratic_minimum() {
        let eval = |x: &[f64]| x.iter().map(|v| (v - 1.5) * (v - 1.5)).sum::<f64>();
        let mut rng = derive_rng(0, 0);
        let res = minimize(&eval, &[0.0; 4], 2000, &mut rng);
        assert!(res.value < 1e-4, "value {}", res.value);
    }

    #[test]
    fn monotone_from_good_start() {
        let eval = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let mut rng = derive_rng(1, 0);
        let res = minimize(&eval, &[0.0; 3], 50, &mut rng);
        assert_eq!(res.value, 0.0);
    }
}
