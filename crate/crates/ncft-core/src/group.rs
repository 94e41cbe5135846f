//! Concrete finite groups: multiplication tables, inverses, conjugacy
//! classes, a catalog of standard families and ingestion of user tables.

use std::fmt;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NcftError, Result};
use crate::linalg::derive_rng;

/// A finite group on dense element indices 0..order−1 with identity at 0.
/// Haar measure is uniform with total mass 1, so each element carries weight
/// 1/order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
    pub labels: Vec<String>,
    pub classes: Vec<Vec<usize>>,
    pub spec: GroupSpec,
}

impl FiniteGroup {
    pub const IDENTITY: usize = 0;

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order
    }
}

/// Family descriptor used to build catalog groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic { n: usize },
    Dihedral { n: usize },
    Quaternion8,
    Symmetric { n: usize },
    Product { left: Box<GroupSpec>, right: Box<GroupSpec> },
    Table { source: String },
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic { n } => write!(f, "Z{n}"),
            GroupSpec::Dihedral { n } => write!(f, "D{n}"),
            GroupSpec::Quaternion8 => write!(f, "Q8"),
            GroupSpec::Symmetric { n } => write!(f, "S{n}"),
            GroupSpec::Product { left, right } => write!(f, "product({left},{right})"),
            GroupSpec::Table { source } => write!(f, "table:{source}"),
        }
    }
}

impl GroupSpec {
    /// Parse a compact spec string: `Z4`, `cyclic:4`, `D4`, `Q8`, `S3`,
    /// `product(Z2,Z2)`, `table:path.json`.
    pub fn parse(s: &str) -> Result<GroupSpec> {
        let s = s.trim();
        let bad = || NcftError::InvalidSpec(s.to_string());
        if let Some(rest) = s.strip_prefix("product(") {
            let inner = rest.strip_suffix(')').ok_or_else(bad)?;
            let mut depth = 0usize;
            let mut split = None;
            for (i, c) in inner.char_indices() {
                match c {
                    '(' => depth += 1,
                    ')' => depth = depth.checked_sub(1).ok_or_else(bad)?,
                    ',' if depth == 0 => {
                        split = Some(i);
                        break;
                    }
                    _ => {}
                }
            }
            let i = split.ok_or_else(bad)?;
            return Ok(GroupSpec::Product {
                left: Box::new(GroupSpec::parse(&inner[..i])?),
                right: Box::new(GroupSpec::parse(&inner[i + 1..])?),
            });
        }
        if let Some(path) = s.strip_prefix("table:") {
            return Ok(GroupSpec::Table { source: path.to_string() });
        }
        let num = |t: &str| -> Result<usize> { t.parse().map_err(|_| bad()) };
        match s {
            "Q8" | "quaternion8" => return Ok(GroupSpec::Quaternion8),
            _ => {}
        }
        if let Some((fam, arg)) = s.split_once(':') {
            return match fam {
                "cyclic" => Ok(GroupSpec::Cyclic { n: num(arg)? }),
                "dihedral" => Ok(GroupSpec::Dihedral { n: num(arg)? }),
                "symmetric" => Ok(GroupSpec::Symmetric { n: num(arg)? }),
                _ => Err(bad()),
            };
        }
        if let Some(arg) = s.strip_prefix('Z') {
            return Ok(GroupSpec::Cyclic { n: num(arg)? });
        }
        if let Some(arg) = s.strip_prefix('D') {
            return Ok(GroupSpec::Dihedral { n: num(arg)? });
        }
        if let Some(arg) = s.strip_prefix('S') {
            return Ok(GroupSpec::Symmetric { n: num(arg)? });
        }
        Err(bad())
    }
}

/// JSON schema for user-supplied multiplication tables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableFile {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// Per-axiom findings of [`validate_table`]; failures are report content,
/// not errors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableReport {
    pub pass: bool,
    pub failures: Vec<String>,
    pub identity: Option<usize>,
}

/// Check closure/Latin-square structure, identity, inverses and
/// associativity of a raw multiplication table. Associativity is exhaustive
/// up to order 64 and sampled (10·order² seeded triples) above.
pub fn validate_table(mul: &[Vec<usize>]) -> TableReport {
    let n = mul.len();
    let mut failures = Vec::new();
    if n == 0 {
        return TableReport { pass: false, failures: vec!["empty table".into()], identity: None };
    }
    if mul.iter().any(|row| row.len() != n) {
        failures.push("table is not square".into());
        return TableReport { pass: false, failures, identity: None };
    }
    if mul.iter().flatten().any(|&v| v >= n) {
        failures.push("entry out of range (closure fails)".into());
        return TableReport { pass: false, failures, identity: None };
    }
    for g in 0..n {
        let mut seen_row = vec![false; n];
        let mut seen_col = vec![false; n];
        for h in 0..n {
            seen_row[mul[g][h]] = true;
            seen_col[mul[h][g]] = true;
        }
        if seen_row.iter().any(|&b| !b) {
            failures.push(format!("row {g} is not a permutation (not a Latin square)"));
        }
        if seen_col.iter().any(|&b| !b) {
            failures.push(format!("column {g} is not a permutation (not a Latin square)"));
        }
    }
    let identity = (0..n).find(|&e| (0..n).all(|g| mul[e][g] == g && mul[g][e] == g));
    if identity.is_none() {
        failures.push("no two-sided identity".into());
    }
    if let Some(e) = identity {
        for g in 0..n {
            let ok = (0..n).any(|h| mul[g][h] == e && mul[h][g] == e);
            if !ok {
                failures.push(format!("element {g} has no two-sided inverse"));
            }
        }
    }
    if n <= 64 {
        'assoc: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        failures.push(format!("associativity fails at ({a},{b},{c})"));
                        break 'assoc;
                    }
                }
            }
        }
    } else {
        let mut rng = derive_rng(0x6e636674, 0);
        for _ in 0..10 * n * n {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            let c = rng.gen_range(0..n);
            if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                failures.push(format!("associativity fails at ({a},{b},{c})"));
                break;
            }
        }
    }
    TableReport { pass: failures.is_empty(), failures, identity }
}

/// Conjugacy class partition: x ~ y iff ∃h with h·x·h⁻¹ = y. Classes are
/// ordered by their smallest member, so the identity class comes first.
pub fn conjugacy_classes(mul: &[Vec<usize>], inv: &[usize]) -> Vec<Vec<usize>> {
    let n = mul.len();
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        let mut class = Vec::new();
        for h in 0..n {
            let y = mul[mul[h][x]][inv[h]];
            if !seen[y] {
                seen[y] = true;
                class.push(y);
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    classes
}

fn finish(mul: Vec<Vec<usize>>, labels: Vec<String>, spec: GroupSpec) -> Result<FiniteGroup> {
    let report = validate_table(&mul);
    if !report.pass {
        return Err(NcftError::InvalidTable(report.failures.join("; ")));
    }
    let e = report.identity.expect("validated table has identity");
    // canonicalize so that the identity sits at index 0
    let (mul, labels) = if e == 0 {
        (mul, labels)
    } else {
        let n = mul.len();
        let map = |i: usize| if i == 0 { e } else if i == e { 0 } else { i };
        let mut m2 = vec![vec![0; n]; n];
        let mut l2 = vec![String::new(); n];
        for a in 0..n {
            l2[a] = labels[map(a)].clone();
            for b in 0..n {
                m2[a][b] = map(mul[map(a)][map(b)]);
            }
        }
        // map is an involution, so applying it to the entry inverts the relabeling
        (m2, l2)
    };
    let n = mul.len();
    let inv: Vec<usize> = (0..n)
        .map(|g| (0..n).find(|&h| mul[g][h] == 0).expect("validated inverses"))
        .collect();
    let classes = conjugacy_classes(&mul, &inv);
    Ok(FiniteGroup { order: n, mul, inv, labels, classes, spec })
}

fn build_cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(NcftError::InvalidSpec("cyclic(0)".into()));
    }
    let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    let labels = (0..n).map(|a| format!("g{a}")).collect();
    finish(mul, labels, GroupSpec::Cyclic { n })
}

fn build_dihedral(n: usize) -> Result<FiniteGroup> {
    if n < 2 {
        return Err(NcftError::InvalidSpec(format!("dihedral({n}) requires n >= 2")));
    }
    // element (a, b) = r^a s^b at index a + n·b; s r = r⁻¹ s
    let order = 2 * n;
    let idx = |a: usize, b: usize| a % n + n * (b % 2);
    let mut mul = vec![vec![0; order]; order];
    for a in 0..n {
        for b in 0..2 {
            for c in 0..n {
                for d in 0..2 {
                    let exp = if b == 0 { (a + c) % n } else { (a + n - c % n) % n };
                    mul[idx(a, b)][idx(c, d)] = idx(exp, b + d);
                }
            }
        }
    }
    let mut labels = vec![String::new(); order];
    for a in 0..n {
        labels[idx(a, 0)] = format!("r{a}");
        labels[idx(a, 1)] = format!("r{a}s");
    }
    finish(mul, labels, GroupSpec::Dihedral { n })
}

fn build_quaternion8() -> Result<FiniteGroup> {
    // index = 2·unit + sign with units e,i,j,k and sign 0 ↦ +, 1 ↦ −
    let units = ["1", "i", "j", "k"];
    // (unit, sign) product table for the quaternion units
    let unit_mul = |u: usize, v: usize| -> (usize, usize) {
        match (u, v) {
            (0, v) => (v, 0),
            (u, 0) => (u, 0),
            (u, v) if u == v => (0, 1),
            (1, 2) => (3, 0),
            (2, 1) => (3, 1),
            (2, 3) => (1, 0),
            (3, 2) => (1, 1),
            (3, 1) => (2, 0),
            (1, 3) => (2, 1),
            _ => unreachable!(),
        }
    };
    let mut mul = vec![vec![0; 8]; 8];
    for u in 0..4 {
        for su in 0..2 {
            for v in 0..4 {
                for sv in 0..2 {
                    let (w, sw) = unit_mul(u, v);
                    mul[2 * u + su][2 * v + sv] = 2 * w + (su + sv + sw) % 2;
                }
            }
        }
    }
    let labels = (0..8)
        .map(|i| format!("{}{}", if i % 2 == 1 { "-" } else { "" }, units[i / 2]))
        .collect();
    finish(mul, labels, GroupSpec::Quaternion8)
}

/// All permutations of 0..n in lexicographic order of one-line notation.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        if n == 0 {
            break;
        }
    }
    out
}

fn build_symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 5 {
        return Err(NcftError::InvalidSpec(format!(
            "symmetric({n}) supported for 1 <= n <= 5"
        )));
    }
    let perms = permutations(n);
    let index_of = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
    let order = perms.len();
    let mut mul = vec![vec![0; order]; order];
    for (a, p) in perms.iter().enumerate() {
        for (b, q) in perms.iter().enumerate() {
            // composition (p∘q)(x) = p(q(x))
            let r: Vec<usize> = (0..n).map(|x| p[q[x]]).collect();
            mul[a][b] = index_of(&r);
        }
    }
    let labels = perms
        .iter()
        .map(|p| p.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(""))
        .collect();
    finish(mul, labels, GroupSpec::Symmetric { n })
}

fn build_product(left: &GroupSpec, right: &GroupSpec) -> Result<FiniteGroup> {
    let a = build_group(left)?;
    let b = build_group(right)?;
    let order = a.order * b.order;
    let idx = |ga: usize, gb: usize| ga * b.order + gb;
    let mut mul = vec![vec![0; order]; order];
    for ga in 0..a.order {
        for gb in 0..b.order {
            for ha in 0..a.order {
                for hb in 0..b.order {
                    mul[idx(ga, gb)][idx(ha, hb)] = idx(a.mul(ga, ha), b.mul(gb, hb));
                }
            }
        }
    }
    let mut labels = vec![String::new(); order];
    for ga in 0..a.order {
        for gb in 0..b.order {
            labels[idx(ga, gb)] = format!("{}|{}", a.labels[ga], b.labels[gb]);
        }
    }
    finish(
        mul,
        labels,
        GroupSpec::Product { left: Box::new(left.clone()), right: Box::new(right.clone()) },
    )
}

fn build_from_table_file(source: &str) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(Path::new(source))?;
    let file: TableFile = serde_json::from_str(&text)?;
    build_from_table(&file, source)
}

/// Build a group from an in-memory table file.
pub fn build_from_table(file: &TableFile, source: &str) -> Result<FiniteGroup> {
    if file.mul.len() != file.order {
        return Err(NcftError::InvalidTable(format!(
            "declared order {} but table has {} rows",
            file.order,
            file.mul.len()
        )));
    }
    let labels = match &file.labels {
        Some(l) if l.len() == file.order => l.clone(),
        Some(_) => return Err(NcftError::InvalidTable("labels length mismatch".into())),
        None => (0..file.order).map(|i| format!("e{i}")).collect(),
    };
    finish(file.mul.clone(), labels, GroupSpec::Table { source: source.to_string() })
}

/// Build a validated [`FiniteGroup`] from a spec. Deterministic per spec;
/// element 0 is always the identity.
pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Cyclic { n } => build_cyclic(*n),
        GroupSpec::Dihedral { n } => build_dihedral(*n),
        GroupSpec::Quaternion8 => build_quaternion8(),
        GroupSpec::Symmetric { n } => build_symmetric(*n),
        GroupSpec::Product { left, right } => build_product(left, right),
        GroupSpec::Table { source } => build_from_table_file(source),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class_sizes(g: &FiniteGroup) -> Vec<usize> {
        g.classes.iter().map(|c| c.len()).collect()
    }

    #[test]
    fn cyclic_one_is_trivial() {
        let g = build_group(&GroupSpec::Cyclic { n: 1 }).unwrap();
        assert_eq!(g.order, 1);
        assert_eq!(g.mul, vec![vec![0]]);
    }

    #[test]
    fn cyclic_classes_are_singletons() {
        for n in 1..=8 {
            let g = build_group(&GroupSpec::Cyclic { n }).unwrap();
            assert!(g.is_abelian());
            assert!(g.classes.iter().all(|c| c.len() == 1));
        }
    }

    /// Exhaustive conjugation oracle, independent of the library partition.
    fn conjugation_oracle(g: &FiniteGroup) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..g.order {
            let mut orbit: Vec<usize> =
                (0..g.order).map(|h| g.mul(g.mul(h, x), g.inv(h))).collect();
            orbit.sort_unstable();
            orbit.dedup();
            if !classes.contains(&orbit) {
                classes.push(orbit);
            }
        }
        classes.sort_by_key(|c| c[0]);
        classes
    }

    #[test]
    fn quaternion8_has_five_classes() {
        let g = build_group(&GroupSpec::Quaternion8).unwrap();
        assert_eq!(g.order, 8);
        let oracle = conjugation_oracle(&g);
        assert_eq!(g.classes, oracle);
        let mut sizes = class_sizes(&g);
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn s3_class_sizes() {
        let g = build_group(&GroupSpec::Symmetric { n: 3 }).unwrap();
        assert_eq!(g.classes, conjugation_oracle(&g));
        let mut sizes = class_sizes(&g);
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn d4_has_five_classes() {
        let g = build_group(&GroupSpec::Dihedral { n: 4 }).unwrap();
        assert_eq!(g.order, 8);
        assert_eq!(g.classes, conjugation_oracle(&g));
        assert_eq!(g.classes.len(), 5);
    }

    #[test]
    fn klein_four_is_elementary_abelian() {
        let spec = GroupSpec::parse("product(Z2,Z2)").unwrap();
        let g = build_group(&spec).unwrap();
        assert_eq!(g.order, 4);
        for x in 1..4 {
            assert_eq!(g.mul(x, x), 0, "non-identity element must be an involution");
        }
    }

    #[test]
    fn class_sizes_sum_to_order_and_inv_is_involution() {
        for spec in ["Z6", "D5", "Q8", "S4", "product(Z2,S3)"] {
            let g = build_group(&GroupSpec::parse(spec).unwrap()).unwrap();
            assert_eq!(class_sizes(&g).iter().sum::<usize>(), g.order, "{spec}");
            for x in 0..g.order {
                assert_eq!(g.inv(g.inv(x)), x);
                assert_eq!(g.mul(x, g.inv(x)), 0);
                assert_eq!(g.mul(g.inv(x), x), 0);
            }
        }
    }

    #[test]
    fn validate_table_examples() {
        assert!(validate_table(&[vec![0]]).pass);
        assert!(validate_table(&[vec![0, 1], vec![1, 0]]).pass);
        let bad = validate_table(&[vec![0, 1], vec![1, 1]]);
        assert!(!bad.pass);
        assert!(bad.failures.iter().any(|f| f.contains("Latin")));
    }

    #[test]
    fn table_identity_moves_to_index_zero() {
        // Z2 written with identity at index 1
        let file = TableFile { order: 2, mul: vec![vec![1, 0], vec![0, 1]], labels: None };
        let g = build_from_table(&file, "mem").unwrap();
        assert_eq!(g.mul(0, 0), 0);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(GroupSpec::parse("Z4").unwrap(), GroupSpec::Cyclic { n: 4 });
        assert_eq!(GroupSpec::parse("cyclic:4").unwrap(), GroupSpec::Cyclic { n: 4 });
        assert_eq!(GroupSpec::parse("Q8").unwrap(), GroupSpec::Quaternion8);
        assert!(GroupSpec::parse("nonsense").is_err());
        let p = GroupSpec::parse("product(Z2,product(Z2,Z3))").unwrap();
        assert_eq!(build_group(&p).unwrap().order, 12);
        // display round-trips through parse
        assert_eq!(GroupSpec::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn symmetric_bounds() {
        assert!(build_group(&GroupSpec::Symmetric { n: 6 }).is_err());
        assert_eq!(build_group(&GroupSpec::Symmetric { n: 5 }).unwrap().order, 120);
    }
}
