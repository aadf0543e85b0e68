//! The star-versus-reduction comparison for the interchange process.
//!
//! For a center vertex with rates c_1..c_{n-1} to the other vertices, the
//! claim under test is that the star's Dirichlet form dominates the form of
//! the reduced rates c_i c_j / s. Setting c_0 := -(c_1 + .. + c_{n-1}), the
//! gap between the two forms is the quadratic form of a single symmetric
//! matrix C on permutations, with diagonal cc := sum c_i^2 + sum_{i<j}
//! c_i c_j and entry c_i c_j between any two permutations that differ by the
//! transposition of i and j. The machinery here builds C, its even/odd block
//! structure, the correction matrix C' = cc^2 I - X^t X, and the rate-free
//! integer matrices A^J and B^K whose combination reproduces C'; positive
//! semi-definiteness of C is what makes the reduction step legitimate.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::perm::{self, factorial, CosetPartition, Permutation, RelativeKind};
use crate::spectra;

/// Default ceiling on n for the n! x n! matrix C. 7 is accepted behind the
/// explicit override, nothing larger.
pub const MAX_OCTOPUS_N: usize = 6;

/// The rate data of a star: c_1..c_{n-1} >= 0 toward vertices 1..n-1, the
/// balancing value c_0 = -(c_1 + .. + c_{n-1}), and the diagonal value cc.
/// All-zero rates are allowed and produce C = 0.
#[derive(Debug, Clone)]
pub struct RateSystem {
    rates: Vec<f64>,
}

impl RateSystem {
    /// Builds the system from the leaf rates c_1..c_{n-1}; n is inferred.
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::BadRates("need at least one rate (n >= 2)".into()));
        }
        if rates.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::BadRates(
                "rates must be finite and nonnegative".into(),
            ));
        }
        Ok(RateSystem { rates })
    }

    pub fn n(&self) -> usize {
        self.rates.len() + 1
    }

    /// The leaf rates c_1..c_{n-1}.
    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// c_0 = -(c_1 + .. + c_{n-1}), negative whenever some rate is positive.
    pub fn c0(&self) -> f64 {
        let s: f64 = self.rates.iter().sum();
        if s == 0.0 {
            0.0
        } else {
            -s
        }
    }

    /// cc = sum c_i^2 + sum_{i<j} c_i c_j, the diagonal of C; equals
    /// -sum_{0<=i<j} c_i c_j.
    pub fn cc(&self) -> f64 {
        let mut total = 0.0;
        for (i, &ci) in self.rates.iter().enumerate() {
            total += ci * ci;
            for &cj in &self.rates[i + 1..] {
                total += ci * cj;
            }
        }
        total
    }

    /// `[c_0, c_1, .., c_{n-1}]`.
    pub fn extended(&self) -> Vec<f64> {
        let mut ext = Vec::with_capacity(self.n());
        ext.push(self.c0());
        ext.extend_from_slice(&self.rates);
        ext
    }

    /// c_J = prod_{i in J} c_i over the extended indices (0 included).
    pub fn product_over(&self, set: &[usize]) -> f64 {
        let ext = self.extended();
        set.iter().fold(1.0, |acc, &i| acc * ext[i])
    }
}

/// C on the parity-sorted permutation basis, its odd/even block X, and the
/// correction matrix C'.
#[derive(Debug, Clone)]
pub struct OctopusMatrices {
    /// n! x n!, basis: even permutations first, odd after, each ascending in
    /// enumeration rank.
    pub c: DMatrix<f64>,
    /// Odd-row / even-column block of C; (n!/2) x (n!/2).
    pub x: DMatrix<f64>,
    /// cc^2 I - X^t X on the even permutations.
    pub cprime: DMatrix<f64>,
    /// Enumeration rank of each basis position.
    pub basis: Vec<usize>,
    /// Diagonal value of C.
    pub cc: f64,
}

/// Builds C, X, and C' for the given rates (n at most 6).
pub fn build_c(r: &RateSystem) -> Result<OctopusMatrices> {
    build_c_with_max(r, MAX_OCTOPUS_N)
}

/// [`build_c`] with an explicit ceiling on n (at most 7).
pub fn build_c_with_max(r: &RateSystem, max_n: usize) -> Result<OctopusMatrices> {
    let n = r.n();
    let cap = max_n.min(perm::MAX_ENUM_N);
    if n > cap {
        return Err(Error::SizeLimit {
            what: "octopus matrix",
            limit: cap,
            got: n,
        });
    }
    let all = perm::enumerate_all(n);
    let mut sorted: Vec<&Permutation> = all.iter().filter(|p| p.is_even()).collect();
    sorted.extend(all.iter().filter(|p| !p.is_even()));
    let basis: Vec<usize> = sorted.iter().map(|p| p.lehmer_rank()).collect();
    let ext = r.extended();
    let cc = r.cc();
    let dim = all.len();
    let half = dim / 2;
    let mut c = DMatrix::zeros(dim, dim);
    for p in 0..dim {
        c[(p, p)] = cc;
        for q in p + 1..dim {
            let d = sorted[p].inverse().compose(sorted[q]);
            let support = d.support();
            if support.len() == 2 {
                let v = ext[support[0]] * ext[support[1]];
                c[(p, q)] = v;
                c[(q, p)] = v;
            }
        }
    }
    let x = c.view((half, 0), (half, half)).into_owned();
    let xtx = x.transpose() * &x;
    let mut cprime = -xtx;
    for i in 0..half {
        cprime[(i, i)] += cc * cc;
    }
    Ok(OctopusMatrices {
        c,
        x,
        cprime,
        basis,
        cc,
    })
}

/// Sum over permutations of the squared increment along the swap at (u, v).
fn swap_energy(perms: &[Permutation], f: &[f64], u: usize, v: usize) -> f64 {
    perms
        .iter()
        .enumerate()
        .map(|(s, p)| {
            let t = p.swap_images(u, v).lehmer_rank();
            let d = f[t] - f[s];
            d * d
        })
        .sum()
}

/// The gap between the star's Dirichlet form at `x` and the form of the
/// reduced rates, for a function `f` on permutations (enumeration-rank
/// indexed): sum_y c_xy nu[(grad_xy f)^2] - sum_{y<z} (c_xy c_xz / s)
/// nu[(grad_yz f)^2], with nu uniform. Claimed nonnegative for every f.
pub fn octopus_residual(g: &WeightedGraph, x: usize, f: &[f64]) -> Result<f64> {
    let n = g.n();
    if n > MAX_OCTOPUS_N {
        return Err(Error::SizeLimit {
            what: "octopus residual",
            limit: MAX_OCTOPUS_N,
            got: n,
        });
    }
    if x >= n {
        return Err(Error::VertexOutOfRange { v: x, n });
    }
    if f.len() != factorial(n) {
        return Err(Error::DimensionMismatch {
            expected: factorial(n),
            got: f.len(),
        });
    }
    let perms = perm::enumerate_all(n);
    let s = g.strength(x);
    let mut total = 0.0;
    for y in 0..n {
        let c = g.weight(x, y);
        if c > 0.0 {
            total += c * swap_energy(&perms, f, x, y);
        }
    }
    for y in 0..n {
        for z in y + 1..n {
            if y == x || z == x {
                continue;
            }
            let c = g.weight(x, y) * g.weight(x, z);
            if c > 0.0 {
                total -= c / s * swap_energy(&perms, f, y, z);
            }
        }
    }
    Ok(total / factorial(n) as f64)
}

/// Difference between the two sides of the identity
/// `n! (-c_0) residual = 2 f^t C f` that moves the star comparison onto the
/// matrix C; returns the absolute residual.
pub fn quadratic_form_identity(r: &RateSystem, f: &[f64]) -> Result<f64> {
    let n = r.n();
    if f.len() != factorial(n) {
        return Err(Error::DimensionMismatch {
            expected: factorial(n),
            got: f.len(),
        });
    }
    let oct = build_c(r)?;
    let perms = perm::enumerate_all(n);
    let s = -r.c0();
    let rates = r.rates();
    let mut total = 0.0;
    for y in 1..n {
        if rates[y - 1] > 0.0 {
            total += rates[y - 1] * swap_energy(&perms, f, 0, y);
        }
    }
    if s > 0.0 {
        for y in 1..n {
            for z in y + 1..n {
                let c = rates[y - 1] * rates[z - 1];
                if c > 0.0 {
                    total -= c / s * swap_energy(&perms, f, y, z);
                }
            }
        }
    }
    let lhs = s * total;
    let fb = nalgebra::DVector::from_iterator(f.len(), oct.basis.iter().map(|&r| f[r]));
    let rhs = 2.0 * (fb.transpose() * &oct.c * &fb)[(0, 0)];
    Ok((lhs - rhs).abs())
}

// ── Rate-free integer matrices ─────────────────────────────────────────────

/// An integer matrix over the even permutations together with the coset
/// partition it is block-diagonal for: off-diagonal coset blocks vanish and
/// all diagonal blocks are equal.
#[derive(Debug, Clone)]
pub struct CosetBlockMatrix {
    /// The defining vertex subset (4 elements for A^J, 5 for B^K).
    pub subset: Vec<usize>,
    /// Entries over even permutations, ascending enumeration rank.
    pub m: DMatrix<i64>,
    /// Left cosets of the even permutations supported on `subset`.
    pub partition: CosetPartition,
}

impl CosetBlockMatrix {
    /// Checks the block invariants exactly: returns (diagonal blocks all
    /// equal, off-diagonal blocks all zero).
    pub fn block_structure(&self) -> (bool, bool) {
        let blocks = &self.partition.blocks;
        let k = blocks[0].len();
        let pick = |bi: usize, bj: usize| {
            DMatrix::from_fn(k, k, |s, t| self.m[(blocks[bi][s], blocks[bj][t])])
        };
        let first = pick(0, 0);
        let mut diag_equal = true;
        let mut off_zero = true;
        for bi in 0..blocks.len() {
            for bj in 0..blocks.len() {
                if bi == bj {
                    diag_equal &= pick(bi, bj) == first;
                } else {
                    off_zero &= pick(bi, bj).iter().all(|&v| v == 0);
                }
            }
        }
        (diag_equal, off_zero)
    }
}

fn check_subset(n: usize, set: &[usize], size: usize) -> Result<Vec<usize>> {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != size || set.len() != size {
        return Err(Error::BadSubset(format!(
            "need {size} distinct vertices, got {set:?}"
        )));
    }
    if sorted.last().copied().unwrap_or(0) >= n {
        return Err(Error::BadSubset(format!(
            "subset {set:?} out of range for n = {n}"
        )));
    }
    Ok(sorted)
}

/// The matrix A^J over even permutations: 2 on the diagonal, 2 between
/// permutations differing by two disjoint 2-cycles inside J, -1 for a
/// 3-cycle inside J, 0 otherwise. Rate-free by construction.
pub fn build_aj(n: usize, j: &[usize]) -> Result<CosetBlockMatrix> {
    if n < 4 {
        return Err(Error::TooSmall {
            what: "A^J",
            min: 4,
            got: n,
        });
    }
    if n > perm::MAX_ENUM_N {
        return Err(Error::SizeLimit {
            what: "A^J",
            limit: perm::MAX_ENUM_N,
            got: n,
        });
    }
    let j = check_subset(n, j, 4)?;
    let evens = perm::enumerate_even(n);
    let dim = evens.len();
    let m = DMatrix::from_fn(dim, dim, |a, b| {
        match perm::classify_relative(&evens[a], &evens[b], &j).kind {
            RelativeKind::Identity => 2,
            RelativeKind::TwoTwoCycles => 2,
            RelativeKind::ThreeCycle => -1,
            RelativeKind::Other => 0,
        }
    });
    let partition = perm::left_cosets(&evens, &perm::embedded_even_subgroup(n, &j));
    Ok(CosetBlockMatrix {
        subset: j,
        m,
        partition,
    })
}

/// B^K = sum over the five 4-subsets J of K of eps_J A^J, with eps_J = +1
/// iff 0 is in J. Requires 0 in K.
pub fn build_bk(n: usize, k: &[usize]) -> Result<CosetBlockMatrix> {
    if n < 5 {
        return Err(Error::TooSmall {
            what: "B^K",
            min: 5,
            got: n,
        });
    }
    let k = check_subset(n, k, 5)?;
    if !k.contains(&0) {
        return Err(Error::BadSubset(format!("subset {k:?} must contain 0")));
    }
    let evens = perm::enumerate_even(n);
    let dim = evens.len();
    let mut m = DMatrix::zeros(dim, dim);
    for &drop in &k {
        let j: Vec<usize> = k.iter().copied().filter(|&v| v != drop).collect();
        let sign = if j.contains(&0) { 1 } else { -1 };
        m += build_aj(n, &j)?.m * sign;
    }
    let partition = perm::left_cosets(&evens, &perm::embedded_even_subgroup(n, &k));
    Ok(CosetBlockMatrix {
        subset: k,
        m,
        partition,
    })
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Largest entry of `C'(n) - sum_{|J|=4} (-c_J) A^J(n)` (the sum is empty
/// for n <= 3, where C' itself must vanish). With integer-valued rates both
/// sides are computed exactly and the residual is exactly zero.
pub fn verify_corr_decomposition(r: &RateSystem) -> Result<f64> {
    let n = r.n();
    let oct = build_c(r)?;
    if n <= 3 {
        return Ok(max_abs(&oct.cprime));
    }
    let evens = perm::enumerate_even(n);
    let dim = evens.len();
    let full: Vec<usize> = (0..n).collect();
    // Shape and support of a^-1 b once per pair; each J then only needs a
    // mask test.
    let table: Vec<(RelativeKind, u32)> = {
        let mut t = Vec::with_capacity(dim * dim);
        for a in &evens {
            for b in &evens {
                let class = perm::classify_relative(a, b, &full);
                let mask = class.support.iter().fold(0u32, |m, &p| m | (1 << p));
                t.push((class.kind, mask));
            }
        }
        t
    };
    let mut target = DMatrix::zeros(dim, dim);
    for j in k_subsets(n, 4) {
        let cj = r.product_over(&j);
        if cj == 0.0 {
            continue;
        }
        let j_mask = j.iter().fold(0u32, |m, &p| m | (1 << p));
        for a in 0..dim {
            for b in 0..dim {
                let (kind, mask) = table[a * dim + b];
                let inside = mask & !j_mask == 0;
                let e = match kind {
                    RelativeKind::Identity => 2,
                    RelativeKind::TwoTwoCycles if inside => 2,
                    RelativeKind::ThreeCycle if inside => -1,
                    _ => 0,
                };
                if e != 0 {
                    target[(a, b)] += -cj * e as f64;
                }
            }
        }
    }
    Ok(max_abs(&(&oct.cprime - target)))
}

// ── Fact reports ───────────────────────────────────────────────────────────

/// One verified statement about the integer matrices.
#[derive(Debug, Clone)]
pub struct MatrixFact {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn fact(name: &str, pass: bool, detail: String) -> MatrixFact {
    MatrixFact {
        name: name.to_string(),
        pass,
        detail,
    }
}

fn spectrum_is(m: &DMatrix<i64>, expected: &[(f64, usize)], tol: f64) -> Result<(bool, String)> {
    let mf = m.map(|v| v as f64);
    let (values, _) = spectra::eigs_sym(&mf)?;
    let mut want = Vec::new();
    for &(v, mult) in expected {
        want.extend(std::iter::repeat_n(v, mult));
    }
    if want.len() != values.len() {
        return Ok((false, format!("dimension {} vs {}", values.len(), want.len())));
    }
    let worst = values
        .iter()
        .zip(&want)
        .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
    Ok((worst <= tol, format!("largest eigenvalue deviation {worst:.2e}")))
}

/// Exact verification of the structural facts about the integer matrices:
/// with n = 4 the 12 x 12 matrix A = A^{{0,1,2,3}}, with n = 5 the 60 x 60
/// matrix B = B^{{0,..,4}} and the five A^(i) = A^{K minus i}.
pub fn verify_matrix_facts(n: usize) -> Result<Vec<MatrixFact>> {
    match n {
        4 => {
            let a = build_aj(4, &[0, 1, 2, 3])?;
            let mut facts = Vec::new();
            let (pass, detail) = spectrum_is(&a.m, &[(0.0, 10), (12.0, 2)], 1e-9)?;
            facts.push(fact("a4-spectrum-0x10-12x2", pass, detail));

            let evens = perm::enumerate_even(4);
            let klein = perm::left_cosets(&evens, &perm::klein_group_0123());
            let mut form_ok = true;
            for (bi, bl) in klein.blocks.iter().enumerate() {
                for (bj, br) in klein.blocks.iter().enumerate() {
                    for &s in bl {
                        for &t in br {
                            let want = if bi == bj { 2 } else { -1 };
                            form_ok &= a.m[(s, t)] == want;
                        }
                    }
                }
            }
            facts.push(fact(
                "a4-klein-coset-form",
                form_ok,
                "2 within Klein cosets, -1 across".into(),
            ));

            let sq_ok = &a.m * &a.m == &a.m * 12;
            facts.push(fact("a4-square-is-12a", sq_ok, "A^2 = 12 A exactly".into()));
            Ok(facts)
        }
        5 => {
            let k = [0, 1, 2, 3, 4];
            let b = build_bk(5, &k)?;
            let a_drop: Vec<DMatrix<i64>> = (0..5)
                .map(|i| {
                    let j: Vec<usize> = k.iter().copied().filter(|&v| v != i).collect();
                    build_aj(5, &j).map(|c| c.m)
                })
                .collect::<Result<_>>()?;
            let mut facts = Vec::new();

            let (pass, detail) = spectrum_is(&b.m, &[(0.0, 45), (24.0, 15)], 1e-9)?;
            facts.push(fact("b5-spectrum-0x45-24x15", pass, detail));

            let trace: i64 = (0..60).map(|i| b.m[(i, i)]).sum();
            facts.push(fact("b5-trace-360", trace == 360, format!("trace {trace}")));

            let annihilates = (&b.m * &a_drop[0]).iter().all(|&v| v == 0);
            facts.push(fact(
                "b-annihilates-a0",
                annihilates,
                "B A^(0) = 0 exactly".into(),
            ));

            let squares = a_drop.iter().all(|a| a * a == a * 12);
            facts.push(fact(
                "a-drop-squares-are-12a",
                squares,
                "(A^(i))^2 = 12 A^(i) for every i".into(),
            ));

            let b_plus = a_drop.iter().fold(DMatrix::zeros(60, 60), |acc, a| acc + a);
            let plus_ok = &b_plus * &b_plus == &b_plus * 24;
            facts.push(fact(
                "b-plus-square-is-24",
                plus_ok,
                "(B+)^2 = 24 B+ exactly".into(),
            ));

            let b_ok = &b.m * &b.m == &b.m * 24;
            facts.push(fact("b-square-is-24b", b_ok, "B^2 = 24 B exactly".into()));

            let evens = perm::enumerate_even(5);
            let index: HashMap<&[usize], usize> = evens
                .iter()
                .enumerate()
                .map(|(i, p)| (p.images(), i))
                .collect();
            let klein = perm::klein_group_1234();
            let mut sums_ok = true;
            for row in 0..evens.len() {
                for eta in &evens {
                    let sum: i64 = klein
                        .iter()
                        .map(|s| b.m[(row, index[eta.compose(s).images()])])
                        .sum();
                    sums_ok &= sum == 0;
                }
            }
            facts.push(fact(
                "klein-coset-row-sums-vanish",
                sums_ok,
                "every row of B sums to 0 over every Klein coset".into(),
            ));
            Ok(facts)
        }
        n if n < 4 => Err(Error::TooSmall {
            what: "matrix fact report",
            min: 4,
            got: n,
        }),
        n => Err(Error::SizeLimit {
            what: "matrix fact report",
            limit: 5,
            got: n,
        }),
    }
}

// ── Coefficient bound ──────────────────────────────────────────────────────

/// Outcome of the coefficient comparison underlying the positivity of C':
/// for every 4-subset J, sum_{K superset of J, 0 in K, |K|=5} eps_J |c_K|
/// / |c_0| is at most -c_J, with equality exactly when 0 is not in J.
#[derive(Debug, Clone)]
pub struct CoefficientBound {
    pub ok: bool,
    /// The subset attaining the smallest margin `-c_J - lhs_J`.
    pub worst_j: Vec<usize>,
    pub worst_margin: f64,
    /// Whether every J without 0 sits at equality (within tolerance).
    pub equality_respected: bool,
}

pub fn verify_coefficient_bound(r: &RateSystem) -> Result<CoefficientBound> {
    let n = r.n();
    if n < 5 {
        return Err(Error::TooSmall {
            what: "coefficient bound",
            min: 5,
            got: n,
        });
    }
    let ext = r.extended();
    let s = -r.c0();
    let mut scale = 1.0f64;
    let mut margins = Vec::new();
    for j in k_subsets(n, 4) {
        let cj = r.product_over(&j);
        let has_zero = j.contains(&0);
        let eps = if has_zero { 1.0 } else { -1.0 };
        let mut lhs = 0.0;
        if s > 0.0 {
            for (m, &cm) in ext.iter().enumerate() {
                if j.contains(&m) {
                    continue;
                }
                if has_zero || m == 0 {
                    lhs += (cj * cm).abs();
                }
            }
            lhs = eps * lhs / s;
        }
        scale = scale.max(cj.abs());
        margins.push((j, has_zero, -cj - lhs));
    }
    let tol = 1e-12 * scale;
    let (worst_j, _, worst_margin) = margins
        .iter()
        .cloned()
        .min_by(|a, b| a.2.total_cmp(&b.2))
        .expect("at least one 4-subset");
    let ok = worst_margin >= -tol;
    let equality_respected = margins
        .iter()
        .filter(|(_, has_zero, _)| !has_zero)
        .all(|(_, _, m)| m.abs() <= tol);
    Ok(CoefficientBound {
        ok,
        worst_j,
        worst_margin,
        equality_respected,
    })
}

// ───────────────────────────────────────────────────────────────────────────
