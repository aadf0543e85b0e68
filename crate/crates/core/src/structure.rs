//! Structure of the interchange spectrum beyond the bare gap: subset-sum
//! eigenvalues inherited from the walk, the alternating eigenvalue, dimension
//! counts from integer partitions, the pairing of conjugate eigenvalues, the
//! subspace of functions with vanishing single-particle conditional means,
//! and the end-to-end gap-equality report.

use nalgebra::{DMatrix, DVector};

use crate::chains;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::octopus::{self, RateSystem};
use crate::perm;
use crate::spectra::{self, Tolerances};

/// Binomial coefficient, exact for every value used here.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as u64
}

// ── Partitions ──────────────────────────────────────────────────────────────

/// An integer partition: non-increasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty()
            || parts.contains(&0)
            || parts.windows(2).any(|w| w[0] < w[1])
        {
            return Err(Error::BadSubset(format!(
                "not a partition: {parts:?} (need non-increasing positive parts)"
            )));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Dimension of the associated symmetric-group module, by the hook
    /// length formula: n! over the product of all hook lengths.
    pub fn hook_dimension(&self) -> u64 {
        let n = self.n();
        let conj = self.conjugate_parts();
        let mut hooks: u128 = 1;
        for (i, &row) in self.parts.iter().enumerate() {
            for (j, &cj) in conj.iter().enumerate().take(row) {
                hooks *= (row - j + cj - i - 1) as u128;
            }
        }
        let mut nf: u128 = 1;
        for v in 2..=n {
            nf *= v as u128;
        }
        (nf / hooks) as u64
    }

    fn conjugate_parts(&self) -> Vec<usize> {
        let width = self.parts[0];
        (0..width)
            .map(|j| self.parts.iter().filter(|&&p| p > j).count())
            .collect()
    }
}

/// All partitions of n in reverse-lexicographic order: (n) first, then
/// (n-1,1), .., ending with the all-ones partition.
pub fn partitions(n: usize) -> Result<Vec<Partition>> {
    if n == 0 || n > 12 {
        return Err(Error::SizeLimit {
            what: "partition enumeration",
            limit: 12,
            got: n,
        });
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(remaining: usize, max_part: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            cur.push(part);
            rec(remaining - part, part, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    Ok(out)
}

// ── Subset sums, alternating eigenvalue, conjugate pairing ─────────────────

/// Result of matching walk subset sums inside the interchange spectrum.
#[derive(Debug, Clone)]
pub struct SubsetSumReport {
    /// Every subset sum found, with its predicted multiplicity.
    pub ok: bool,
    /// Eigenvalues matched, counting multiplicity.
    pub count: usize,
    /// The predicted total when the walk spectrum is simple.
    pub expected_count: usize,
    /// Walk spectrum has a repeated eigenvalue; the count comparison is then
    /// not meaningful.
    pub degenerate: bool,
    /// Largest distance from an expected value to its matched eigenvalue.
    pub max_mismatch: f64,
}

/// Forms all sums over subsets of the nonzero walk eigenvalues, each with
/// multiplicity `C(n-1, |subset|)`, and verifies multiset inclusion in the
/// interchange spectrum. The total is `C(2(n-1), n-1)` when everything
/// matches.
pub fn subset_sum_check(g: &WeightedGraph, tols: &Tolerances) -> Result<SubsetSumReport> {
    let n = g.n();
    let (rw_values, _) = spectra::eigs_sym(&g.laplacian())?;
    let ip = chains::build_interchange(g)?;
    let (ip_values, _) = spectra::eigs_sym(&(-&ip.q))?;
    let radius = ip_values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = tols.match_tol(radius);

    let cluster = tols.cluster_abs(radius);
    let nonzero = &rw_values[1..];
    let mut degenerate = false;
    for i in 0..nonzero.len() {
        for j in i + 1..nonzero.len() {
            degenerate |= (nonzero[i] - nonzero[j]).abs() <= cluster;
        }
    }

    let mut expected = Vec::new();
    for mask in 0u32..(1 << (n - 1)) {
        let sum: f64 = (0..n - 1)
            .filter(|&i| (mask >> i) & 1 == 1)
            .map(|i| nonzero[i])
            .sum();
        let mult = binomial(n - 1, mask.count_ones() as usize) as usize;
        expected.extend(std::iter::repeat_n(sum, mult));
    }
    expected.sort_by(f64::total_cmp);
    let expected_count = binomial(2 * (n - 1), n - 1) as usize;

    let (ok, unmatched) = spectra::multiset_subset(&expected, &ip_values, tol);
    let max_mismatch = unmatched
        .iter()
        .map(|&s| {
            ip_values
                .iter()
                .fold(f64::INFINITY, |a, v| a.min((v - s).abs()))
        })
        .fold(0.0f64, f64::max);
    Ok(SubsetSumReport {
        ok,
        count: expected.len() - unmatched.len(),
        expected_count,
        degenerate,
        max_mismatch,
    })
}

/// The parity function is claimed to be an eigenfunction of the negated
/// interchange generator with eigenvalue twice the total weight; returns the
/// largest entry of the defect.
pub fn alternating_eigenvalue_residual(g: &WeightedGraph) -> Result<f64> {
    let ip = chains::build_interchange(g)?;
    let perms = perm::enumerate_all(g.n());
    let h = DVector::from_iterator(
        perms.len(),
        perms.iter().map(|p| if p.is_even() { 1.0 } else { -1.0 }),
    );
    let lam = 2.0 * g.total_weight();
    let defect = -&ip.q * &h - lam * &h;
    Ok(defect.amax())
}

/// Pairs the sorted interchange spectrum bottom-to-top and checks that every
/// pair sums to twice the total weight; returns (perfect, worst deviation).
pub fn conjugate_pairing_check(g: &WeightedGraph, tols: &Tolerances) -> Result<(bool, f64)> {
    let ip = chains::build_interchange(g)?;
    let (values, _) = spectra::eigs_sym(&(-&ip.q))?;
    let total = 2.0 * g.total_weight();
    let radius = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let tol = tols.match_tol(radius);
    let mut worst = 0.0f64;
    let m = values.len();
    for i in 0..m / 2 {
        worst = worst.max((values[i] + values[m - 1 - i] - total).abs());
    }
    Ok((worst <= tol, worst))
}

// ── The zero-conditional-mean subspace ──────────────────────────────────────

/// Orthonormal basis of H, the functions on permutations whose conditional
/// mean vanishes given the value at any one position (equivalently, given
/// the position of any one label; the conditioning events coincide).
#[derive(Debug, Clone)]
pub struct HSubspace {
    pub dim: usize,
    /// n! x dim, orthonormal columns.
    pub basis: DMatrix<f64>,
    /// Rank of the span of the n^2 conditioning indicators.
    pub indicator_rank: usize,
}

const RANK_CUTOFF: f64 = 1e-10;

/// Pivoted modified Gram-Schmidt: an orthonormal basis of the span of `cols`
/// orthogonal to the (orthonormal) `seed`. Deterministic; residual columns
/// below the cutoff are dropped.
fn pivoted_mgs(
    seed: &[DVector<f64>],
    mut cols: Vec<DVector<f64>>,
    cutoff: f64,
) -> Vec<DVector<f64>> {
    for c in cols.iter_mut() {
        let norm = c.norm();
        if norm > 0.0 {
            *c /= norm;
        }
        for s in seed {
            let p = s.dot(c);
            *c -= s * p;
        }
    }
    let mut norms2: Vec<f64> = cols.iter().map(|c| c.norm_squared()).collect();
    let mut out: Vec<DVector<f64>> = Vec::new();
    while let Some(best) = (0..cols.len()).max_by(|&a, &b| norms2[a].total_cmp(&norms2[b])) {
        if norms2[best] <= cutoff * cutoff {
            break;
        }
        let mut v = cols.swap_remove(best);
        norms2.swap_remove(best);
        // one more orthogonalization pass keeps the basis orthonormal even
        // after many updates
        for s in seed.iter().chain(&out) {
            let p = s.dot(&v);
            v -= s * p;
        }
        let norm = v.norm();
        if norm <= cutoff {
            continue;
        }
        v /= norm;
        for (c, n2) in cols.iter_mut().zip(norms2.iter_mut()) {
            let p = v.dot(c);
            *c -= &v * p;
            *n2 -= p * p;
        }
        out.push(v);
    }
    out
}

/// Builds H for n points: orthogonalize the n^2 position indicators, then
/// complete the complement from the standard basis.
pub fn h_subspace(n: usize) -> Result<HSubspace> {
    if n < 3 {
        return Err(Error::TooSmall {
            what: "zero-conditional-mean subspace",
            min: 3,
            got: n,
        });
    }
    if n > chains::DEFAULT_MAX_PERMUTATION_N {
        return Err(Error::SizeLimit {
            what: "zero-conditional-mean subspace",
            limit: chains::DEFAULT_MAX_PERMUTATION_N,
            got: n,
        });
    }
    let perms = perm::enumerate_all(n);
    let nf = perms.len();
    let mut indicators = Vec::with_capacity(n * n);
    for x in 0..n {
        for i in 0..n {
            indicators.push(DVector::from_iterator(
                nf,
                perms.iter().map(|p| if p.apply(x) == i { 1.0 } else { 0.0 }),
            ));
        }
    }
    let span = pivoted_mgs(&[], indicators, RANK_CUTOFF);
    let standard: Vec<DVector<f64>> = (0..nf)
        .map(|j| {
            let mut e = DVector::zeros(nf);
            e[j] = 1.0;
            e
        })
        .collect();
    let complement = pivoted_mgs(&span, standard, RANK_CUTOFF);
    Ok(HSubspace {
        dim: complement.len(),
        basis: DMatrix::from_columns(&complement),
        indicator_rank: span.len(),
    })
}

/// Smallest eigenvalue of the negated interchange generator restricted to H.
/// Fails if H is not numerically invariant under the generator.
pub fn mu_ip(g: &WeightedGraph, tols: &Tolerances) -> Result<f64> {
    let _ = tols;
    let gen = chains::build_interchange(g)?;
    let hs = h_subspace(g.n())?;
    let neg_q = -&gen.q;
    let m = &neg_q * &hs.basis;
    let back = &hs.basis * (hs.basis.transpose() * &m);
    let scale = neg_q.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let residual = (&m - back).amax();
    if residual > 1e-8 * scale {
        return Err(Error::InvarianceViolated { residual });
    }
    let r = hs.basis.transpose() * m;
    let sym = (&r + r.transpose()) * 0.5;
    let (values, _) = spectra::eigs_sym(&sym)?;
    Ok(values[0])
}

// ── End-to-end report ───────────────────────────────────────────────────────

/// One named sub-check of a verification report.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    /// The violation the check compares against its tolerance (residual,
    /// deficit, or absolute difference; see `detail`).
    pub metric: f64,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, pass: bool, metric: f64, detail: String) -> Self {
        CheckOutcome {
            name: name.to_string(),
            pass,
            metric,
            detail,
        }
    }
}

/// Outcome of the full gap-equality verification on one graph.
#[derive(Debug, Clone)]
pub struct AldousReport {
    pub lambda_rw: f64,
    pub lambda_ip: f64,
    pub difference: f64,
    pub all_pass: bool,
    pub checks: Vec<CheckOutcome>,
}

/// Verifies that walk and interchange share their spectral gap, together
/// with the supporting statements: gap monotonicity under reduction at every
/// vertex, positive semi-definiteness of the star-comparison matrix at every
/// vertex, the restricted-gap chain, and (n <= 5) the derived-process
/// corollaries.
pub fn verify_aldous(g: &WeightedGraph, tols: &Tolerances) -> Result<AldousReport> {
    let n = g.n();
    let lambda_rw = spectra::spectral_gap(&(-g.laplacian()), tols)?;
    let ip = chains::build_interchange(g)?;
    let lambda_ip = ip.gap(tols)?;
    let difference = (lambda_ip - lambda_rw).abs();
    let gap_tol = 1e-7 * lambda_rw.max(1.0);
    let mut checks = vec![CheckOutcome::new(
        "gap-equality",
        difference <= gap_tol,
        difference,
        format!("walk gap {lambda_rw:.12}, interchange gap {lambda_ip:.12}"),
    )];

    if n >= 3 {
        let mut worst_drop = f64::NEG_INFINITY;
        let mut worst_x = 0;
        for x in 0..n {
            let reduced = g.reduce_at(x)?;
            let gap_x = spectra::spectral_gap(&(-reduced.graph.laplacian()), tols)?;
            let drop = lambda_rw - gap_x;
            if drop > worst_drop {
                worst_drop = drop;
                worst_x = x;
            }
        }
        checks.push(CheckOutcome::new(
            "reduction-monotone",
            worst_drop <= 1e-9 * lambda_rw.max(1.0),
            worst_drop.max(0.0),
            format!("largest gap drop {worst_drop:.3e} at vertex {worst_x}"),
        ));

        let mut worst_min_eig = f64::INFINITY;
        for x in 0..n {
            let rates: Vec<f64> = (0..n).filter(|&y| y != x).map(|y| g.weight(x, y)).collect();
            let oct = octopus::build_c(&RateSystem::new(rates)?)?;
            let (_, min_eig) = spectra::is_psd(&oct.c, tols)?;
            worst_min_eig = worst_min_eig.min(min_eig);
        }
        checks.push(CheckOutcome::new(
            "star-comparison-psd",
            worst_min_eig >= tols.psd_floor(g.total_weight().powi(2)),
            (-worst_min_eig).max(0.0),
            format!("smallest eigenvalue over all centers {worst_min_eig:.3e}"),
        ));

        let mu = mu_ip(g, tols)?;
        let chain_tol = 1e-7 * lambda_rw.max(1.0);
        let min_rule = (lambda_ip - lambda_rw.min(mu)).abs();
        checks.push(CheckOutcome::new(
            "gap-is-min-of-walk-and-restricted",
            min_rule <= chain_tol,
            min_rule,
            format!("restricted gap {mu:.12}"),
        ));
        checks.push(CheckOutcome::new(
            "restricted-gap-dominates-walk",
            mu >= lambda_rw - chain_tol,
            (lambda_rw - mu).max(0.0),
            format!("restricted gap {mu:.12} vs walk gap {lambda_rw:.12}"),
        ));
        let mut max_reduced_ip = f64::NEG_INFINITY;
        for x in 0..n {
            let reduced = g.reduce_at(x)?;
            let gap = chains::build_interchange(&reduced.graph)?.gap(tols)?;
            max_reduced_ip = max_reduced_ip.max(gap);
        }
        checks.push(CheckOutcome::new(
            "restricted-gap-dominates-reductions",
            mu >= max_reduced_ip - chain_tol,
            (max_reduced_ip - mu).max(0.0),
            format!("largest reduced interchange gap {max_reduced_ip:.12}"),
        ));
    }

    if (3..=5).contains(&n) {
        let mut worst = 0.0f64;
        for k in 1..n {
            let gap = chains::build_exclusion(g, k)?.gap(tols)?;
            worst = worst.max((gap - lambda_rw).abs());
        }
        let counts: Vec<usize> = match n {
            3 => vec![1, 2],
            4 => vec![2, 1, 1],
            _ => vec![2, 2, 1],
        };
        let cep_gap = chains::build_colored(g, &counts)?.gap(tols)?;
        worst = worst.max((cep_gap - lambda_rw).abs());
        checks.push(CheckOutcome::new(
            "exclusion-gaps-equal-walk",
            worst <= 1e-7 * lambda_rw.max(1.0),
            worst,
            "every particle count and the colored variant".into(),
        ));
        if n >= 4 {
            let cp = chains::build_cycle(g)?.gap(tols)?;
            checks.push(CheckOutcome::new(
                "cycle-gap-dominates-walk",
                cp >= lambda_rw - 1e-7 * lambda_rw.max(1.0),
                (lambda_rw - cp).max(0.0),
                format!("cycle gap {cp:.12}"),
            ));
        }
        if n >= 4 && n.is_multiple_of(2) {
            let mp = chains::build_matching(g)?.gap(tols)?;
            checks.push(CheckOutcome::new(
                "matching-gap-dominates-walk",
                mp >= lambda_rw - 1e-7 * lambda_rw.max(1.0),
                (lambda_rw - mp).max(0.0),
                format!("matching gap {mp:.12}"),
            ));
        }
    }

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(AldousReport {
        lambda_rw,
        lambda_ip,
        difference,
        all_pass,
        checks,
    })
}

// ───────────────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, random_graph};
    use crate::perm::factorial;
    use proptest::prelude::*;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    // ── Partitions ─────────────────────────────────────────────────────────

    #[test]
    fn partition_enumeration_order_and_counts() {
        let p4 = partitions(4).unwrap();
        let parts: Vec<&[usize]> = p4.iter().map(|p| p.parts()).collect();
        assert_eq!(
            parts,
            vec![
                &[4][..],
                &[3, 1][..],
                &[2, 2][..],
                &[2, 1, 1][..],
                &[1, 1, 1, 1][..],
            ]
        );
        assert_eq!(partitions(8).unwrap().len(), 22);
        assert!(matches!(partitions(13), Err(Error::SizeLimit { .. })));
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn hook_dimensions_known_values() {
        assert_eq!(Partition::new(vec![5]).unwrap().hook_dimension(), 1);
        assert_eq!(Partition::new(vec![2, 2]).unwrap().hook_dimension(), 2);
        assert_eq!(Partition::new(vec![3, 2]).unwrap().hook_dimension(), 5);
        for n in 2..=8usize {
            for k in 0..n {
                let mut parts = vec![n - k];
                parts.extend(std::iter::repeat_n(1, k));
                if parts[0] >= 1 && (k == 0 || parts[0] >= 1) && n - k >= 1 {
                    let p = Partition::new(parts).unwrap();
                    if p.parts()[0] >= *p.parts().last().unwrap() {
                        assert_eq!(p.hook_dimension(), binomial(n - 1, k), "n={n} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn squared_dimensions_sum_to_factorial() {
        for n in 1..=8usize {
            let total: u64 = partitions(n)
                .unwrap()
                .iter()
                .map(|p| p.hook_dimension().pow(2))
                .sum();
            assert_eq!(total, factorial(n) as u64, "n = {n}");
        }
    }

    // ── Subset sums and pairing ────────────────────────────────────────────

    #[test]
    fn subset_sums_fill_the_three_point_spectrum() {
        let g = random_graph(3, 1.0, 1);
        let report = subset_sum_check(&g, &tols()).unwrap();
        assert!(report.ok, "mismatch {:e}", report.max_mismatch);
        assert!(!report.degenerate);
        assert_eq!(report.count, 6);
        assert_eq!(report.expected_count, 6);
    }

    #[test]
    fn subset_sums_on_larger_random_graphs() {
        for (n, expected) in [(4usize, 20usize), (5, 70)] {
            for seed in 10..13 {
                let g = random_graph(n, 0.8, seed);
                let report = subset_sum_check(&g, &tols()).unwrap();
                assert!(report.ok, "n = {n}, seed = {seed}");
                if !report.degenerate {
                    assert_eq!(report.count, expected);
                    assert_eq!(report.expected_count, expected);
                }
            }
        }
    }

    #[test]
    fn unit_triangle_walk_spectrum_is_degenerate() {
        let report = subset_sum_check(&complete_graph(3), &tols()).unwrap();
        assert!(report.degenerate);
        assert!(report.ok);
    }

    #[test]
    fn parity_function_is_an_eigenfunction() {
        for seed in 20..24 {
            let g = random_graph(4, 0.8, seed);
            let res = alternating_eigenvalue_residual(&g).unwrap();
            let scale = (2.0 * g.total_weight()).max(1.0);
            assert!(res <= 1e-10 * scale, "residual {res:e}");
        }
    }

    #[test]
    fn conjugate_pairing_is_perfect() {
        let g2 = random_graph(2, 1.0, 30);
        assert!(conjugate_pairing_check(&g2, &tols()).unwrap().0);
        for n in 3..=5usize {
            for seed in 31..34 {
                let g = random_graph(n, 0.8, seed);
                let (ok, worst) = conjugate_pairing_check(&g, &tols()).unwrap();
                assert!(ok, "n = {n}, seed = {seed}, worst {worst:e}");
            }
        }
    }

    // ── H subspace ─────────────────────────────────────────────────────────

    #[test]
    fn h_subspace_dimensions() {
        let h3 = h_subspace(3).unwrap();
        assert_eq!(h3.indicator_rank, 5);
        assert_eq!(h3.dim, 1);
        let h4 = h_subspace(4).unwrap();
        assert_eq!(h4.indicator_rank, 10);
        assert_eq!(h4.dim, 14);
        assert!(h_subspace(2).is_err());
        assert!(h_subspace(7).is_err());
    }

    #[test]
    fn indicator_rank_matches_the_gram_rank() {
        let n = 4;
        let perms = perm::enumerate_all(n);
        let nf = perms.len();
        let mut ind = DMatrix::zeros(nf, n * n);
        for (s, p) in perms.iter().enumerate() {
            for x in 0..n {
                ind[(s, x * n + p.apply(x))] = 1.0;
            }
        }
        let gram = ind.transpose() * &ind;
        let (values, _) = spectra::eigs_sym(&gram).unwrap();
        let rank = values.iter().filter(|v| **v > 1e-8).count();
        assert_eq!(rank, (n - 1) * (n - 1) + 1);
    }

    #[test]
    fn h_basis_is_orthonormal_with_vanishing_conditional_means() {
        let n = 4;
        let hs = h_subspace(n).unwrap();
        let gram = hs.basis.transpose() * &hs.basis;
        for p in 0..hs.dim {
            for q in 0..hs.dim {
                let want = if p == q { 1.0 } else { 0.0 };
                assert!((gram[(p, q)] - want).abs() <= 1e-10);
            }
        }
        let perms = perm::enumerate_all(n);
        for col in 0..hs.dim {
            for x in 0..n {
                for i in 0..n {
                    // same event either way: label i sits at position x
                    let by_position: f64 = perms
                        .iter()
                        .enumerate()
                        .filter(|(_, p)| p.apply(x) == i)
                        .map(|(s, _)| hs.basis[(s, col)])
                        .sum();
                    let by_label: f64 = perms
                        .iter()
                        .enumerate()
                        .filter(|(_, p)| p.inverse().apply(i) == x)
                        .map(|(s, _)| hs.basis[(s, col)])
                        .sum();
                    assert!(by_position.abs() <= 1e-10);
                    assert_eq!(by_position, by_label);
                }
            }
        }
    }

    #[test]
    fn parity_function_lies_in_h() {
        let n = 3;
        let hs = h_subspace(n).unwrap();
        let perms = perm::enumerate_all(n);
        let mut h = DVector::from_iterator(
            perms.len(),
            perms.iter().map(|p| if p.is_even() { 1.0 } else { -1.0 }),
        );
        h /= h.norm();
        let coeffs = hs.basis.transpose() * &h;
        assert!((coeffs.norm() - 1.0).abs() <= 1e-10);
    }

    // ── Restricted gap and the full report ─────────────────────────────────

    #[test]
    fn restricted_gap_chain_on_random_graphs() {
        for seed in 40..44 {
            for n in [3usize, 4] {
                let g = random_graph(n, 0.8, seed);
                let lambda_rw = spectra::spectral_gap(&(-g.laplacian()), &tols()).unwrap();
                let lambda_ip = chains::build_interchange(&g)
                    .unwrap()
                    .gap(&tols())
                    .unwrap();
                let mu = mu_ip(&g, &tols()).unwrap();
                let tol = 1e-7 * lambda_rw.max(1.0);
                assert!(
                    (lambda_ip - lambda_rw.min(mu)).abs() <= tol,
                    "n = {n}, seed = {seed}"
                );
                assert!(mu >= lambda_rw - tol);
            }
        }
    }

    #[test]
    fn restricted_gap_of_the_unit_triangle_is_the_alternating_eigenvalue() {
        let mu = mu_ip(&complete_graph(3), &tols()).unwrap();
        assert!((mu - 6.0).abs() <= 1e-9);
    }

    #[test]
    fn full_report_on_k4() {
        let report = verify_aldous(&complete_graph(4), &tols()).unwrap();
        assert!((report.lambda_rw - 4.0).abs() <= 1e-9);
        assert!((report.lambda_ip - 4.0).abs() <= 1e-9);
        assert!(report.all_pass, "checks: {:#?}", report.checks);
    }

    #[test]
    fn full_report_on_a_single_edge() {
        let g = random_graph(2, 1.0, 50);
        let report = verify_aldous(&g, &tols()).unwrap();
        assert_eq!(report.difference, 0.0);
        assert!(report.all_pass);
    }

    #[test]
    fn full_report_on_random_graphs() {
        for seed in 60..63 {
            let g = random_graph(5, 0.7, seed);
            let report = verify_aldous(&g, &tols()).unwrap();
            assert!(report.all_pass, "seed {seed}: {:#?}", report.checks);
        }
    }

    // ── Properties ─────────────────────────────────────────────────────────

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn prop_subset_sums_included(seed in 0u64..100, n in 3usize..=4) {
            let g = random_graph(n, 0.8, seed);
            let report = subset_sum_check(&g, &tols()).unwrap();
            prop_assert!(report.ok);
        }

        #[test]
        fn prop_alternating_value_is_in_the_spectrum(seed in 0u64..100) {
            let g = random_graph(4, 0.8, seed);
            let ip = chains::build_interchange(&g).unwrap();
            let (values, _) = spectra::eigs_sym(&(-&ip.q)).unwrap();
            let total = 2.0 * g.total_weight();
            let tol = tols().match_tol(total.max(1.0));
            prop_assert!(values.iter().any(|v| (v - total).abs() <= tol));
        }
    }
}
