//! Young orthogonal representations of the symmetric groups: real
//! orthogonal irreps indexed by partitions, with generator matrices for
//! the adjacent transpositions.

use num_complex::Complex64;

use crate::linalg::CMat;

/// Partitions of n in descending-part form, reverse lexicographic.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// A standard Young tableau as the cell position of each entry:
/// `pos[v]` is the (row, col) of value v (0-based values 0..n−1).
type Tableau = Vec<(usize, usize)>;

/// All standard Young tableaux of a partition, in insertion order.
pub fn standard_tableaux(shape: &[usize]) -> Vec<Tableau> {
    let n: usize = shape.iter().sum();
    let mut out = Vec::new();
    let mut filled = vec![0usize; shape.len()];
    let mut pos: Tableau = Vec::new();
    fn rec(
        v: usize,
        n: usize,
        shape: &[usize],
        filled: &mut Vec<usize>,
        pos: &mut Tableau,
        out: &mut Vec<Tableau>,
    ) {
        if v == n {
            out.push(pos.clone());
            return;
        }
        for r in 0..shape.len() {
            let c = filled[r];
            if c < shape[r] && (r == 0 || filled[r - 1] > c) {
                filled[r] += 1;
                pos.push((r, c));
                rec(v + 1, n, shape, filled, pos, out);
                pos.pop();
                filled[r] -= 1;
            }
        }
    }
    rec(0, n, shape, &mut filled, &mut pos, &mut out);
    out
}

/// Generator matrices for the adjacent transpositions (k, k+1),
/// k = 0..n−2, in the Young orthogonal form. Entries are real; the
/// matrices are orthogonal and satisfy the Coxeter relations.
pub fn yor_generators(shape: &[usize]) -> Vec<CMat> {
    let n: usize = shape.iter().sum();
    let tableaux = standard_tableaux(shape);
    let dim = tableaux.len();
    let index_of = |t: &Tableau| tableaux.iter().position(|u| u == t).unwrap();
    let mut gens = Vec::new();
    for k in 0..n.saturating_sub(1) {
        let mut m = CMat::zeros(dim, dim);
        for (ti, t) in tableaux.iter().enumerate() {
            let (r1, c1) = t[k];
            let (r2, c2) = t[k + 1];
            // axial distance between k+1 and k (content difference)
            let d = (c2 as i64 - r2 as i64) - (c1 as i64 - r1 as i64);
            let inv_d = 1.0 / d as f64;
            m[(ti, ti)] = Complex64::new(inv_d, 0.0);
            if d.unsigned_abs() > 1 {
                let mut swapped = t.clone();
                swapped.swap(k, k + 1);
                let tj = index_of(&swapped);
                m[(ti, tj)] = Complex64::new((1.0 - inv_d * inv_d).sqrt(), 0.0);
            }
        }
        gens.push(m);
    }
    gens
}
