//! Certified symmetric eigensolves, spectral gaps, clustering, and the
//! eigenvalue interlacing check for network reduction.
//!
//! Every solve is verified on the spot: the reconstruction residual and the
//! orthonormality defect must pass fixed bounds or the solve is rejected.
//! All downstream claims therefore never rest on an unchecked decomposition.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Relative tolerance factors used throughout the crate.
///
/// Absolute bounds are derived per matrix: `scale` is `max(1, largest
/// absolute entry)` for entrywise claims and `max(1, spectral radius)` for
/// eigenvalue claims.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Symmetry and input sanity for eigensolves.
    pub eigen_rel: f64,
    /// Gap threshold when grouping near-equal eigenvalues.
    pub cluster_rel: f64,
    /// How far below zero an eigenvalue may sit and still count as
    /// non-negative, relative to `1 + max |entry|`.
    pub psd_rel: f64,
    /// Matching tolerance for comparing eigenvalues across spectra.
    pub match_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eigen_rel: 1e-12,
            cluster_rel: 1e-8,
            psd_rel: 1e-8,
            match_rel: 1e-7,
        }
    }
}

impl Tolerances {
    pub fn cluster_abs(&self, spectral_radius: f64) -> f64 {
        self.cluster_rel * spectral_radius.max(1.0)
    }

    pub fn psd_floor(&self, max_entry: f64) -> f64 {
        -(self.psd_rel * (1.0 + max_entry))
    }

    pub fn match_tol(&self, spectral_radius: f64) -> f64 {
        self.match_rel * spectral_radius.max(1.0)
    }
}

/// A group of near-equal eigenvalues.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cluster {
    /// Mean of the group.
    pub value: f64,
    pub multiplicity: usize,
}

/// Sorted eigenvalues of a symmetric matrix plus their clustering.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Spectrum {
    /// Raw eigenvalues, ascending.
    pub values: Vec<f64>,
    /// Single-linkage grouping of `values`: consecutive gaps within the
    /// cluster tolerance are merged, so representatives are separated by
    /// more than it.
    pub clusters: Vec<Cluster>,
}

impl Spectrum {
    pub fn from_values(mut values: Vec<f64>, cluster_abs: f64) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).expect("non-finite eigenvalue"));
        let clusters = cluster_values(&values, cluster_abs);
        Spectrum { values, clusters }
    }

    /// Largest absolute eigenvalue.
    pub fn radius(&self) -> f64 {
        self.values
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spectrum serializes")
    }
}

fn cluster_values(sorted: &[f64], tol: f64) -> Vec<Cluster> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 0..sorted.len() {
        if i + 1 < sorted.len() && sorted[i + 1] - sorted[i] <= tol {
            continue;
        }
        let group = &sorted[start..=i];
        clusters.push(Cluster {
            value: group.iter().sum::<f64>() / group.len() as f64,
            multiplicity: group.len(),
        });
        start = i + 1;
    }
    clusters
}

fn scale_of(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0)
}

/// Eigendecomposition of a symmetric matrix: ascending eigenvalues and the
/// matching orthonormal eigenvector columns.
///
/// The input must be finite and symmetric within `1e-12 * scale`. The
/// decomposition is certified before it is returned: the Frobenius residual
/// `|M V - V diag| <= 1e-9 |M|` and the orthonormality defect
/// `|V^T V - I|_max <= 1e-10` are both checked.
pub fn eigs_sym(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.ncols(),
        });
    }
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let scale = scale_of(m);
    for i in 0..n {
        for j in i + 1..n {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::NotSymmetric);
            }
        }
    }

    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        se.eigenvalues[a]
            .partial_cmp(&se.eigenvalues[b])
            .expect("finite eigenvalues")
    });
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &se.eigenvectors.column(i));
    }

    let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(values.clone()));
    let residual = (m * &vectors - &vectors * lambda).norm();
    let m_norm = m.norm();
    if residual > 1e-9 * m_norm.max(f64::MIN_POSITIVE) {
        return Err(Error::Certification(format!(
            "reconstruction residual {residual:e} exceeds 1e-9 * {m_norm:e}"
        )));
    }
    let gram = vectors.transpose() * &vectors;
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((gram[(i, j)] - expect).abs());
        }
    }
    if defect > 1e-10 {
        return Err(Error::Certification(format!(
            "orthonormality defect {defect:e} exceeds 1e-10"
        )));
    }
    Ok((values, vectors))
}

/// Sorted, clustered spectrum of a symmetric matrix.
pub fn spectrum_of(m: &DMatrix<f64>, tols: &Tolerances) -> Result<Spectrum> {
    let (values, _) = eigs_sym(m)?;
    let radius = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    Ok(Spectrum::from_values(values, tols.cluster_abs(radius)))
}

/// Smallest non-zero eigenvalue of `-Q` for a generator matrix `Q`
/// (symmetric, zero row sums). Fails with [`Error::ZeroNotSimple`] unless the
/// eigenvalue cluster at zero has multiplicity one.
pub fn spectral_gap(q: &DMatrix<f64>, tols: &Tolerances) -> Result<f64> {
    let spectrum = spectrum_of(&(-q), tols)?;
    let zero = &spectrum.clusters[0];
    if zero.value.abs() > tols.cluster_abs(spectrum.radius()) {
        return Err(Error::Certification(format!(
            "smallest eigenvalue {:e} of -Q is not zero",
            zero.value
        )));
    }
    if zero.multiplicity != 1 {
        return Err(Error::ZeroNotSimple {
            multiplicity: zero.multiplicity,
        });
    }
    Ok(spectrum.values[1])
}

/// Whether the smallest eigenvalue clears the scale-aware floor, plus the
/// eigenvalue itself.
pub fn is_psd(m: &DMatrix<f64>, tols: &Tolerances) -> Result<(bool, f64)> {
    if m.nrows() == 0 {
        return Ok((true, 0.0));
    }
    let (values, _) = eigs_sym(m)?;
    let min = values[0];
    let floor = tols.psd_floor(m.iter().fold(0.0f64, |acc, v| acc.max(v.abs())));
    Ok((min >= floor, min))
}

/// Greedy multiset inclusion: does every value in `small` (with multiplicity)
/// find a distinct partner in `big` within `tol`? Returns the unmatched
/// leftovers of `small`.
pub fn multiset_subset(small: &[f64], big: &[f64], tol: f64) -> (bool, Vec<f64>) {
    let mut small = small.to_vec();
    let mut big = big.to_vec();
    small.sort_by(|a, b| a.partial_cmp(b).expect("finite value"));
    big.sort_by(|a, b| a.partial_cmp(b).expect("finite value"));
    let mut unmatched = Vec::new();
    let mut j = 0;
    for &s in &small {
        while j < big.len() && big[j] < s - tol {
            j += 1;
        }
        if j < big.len() && (big[j] - s).abs() <= tol {
            j += 1;
        } else {
            unmatched.push(s);
        }
    }
    (unmatched.is_empty(), unmatched)
}

/// Confirms a claimed spectral gap variationally: `Q^2 + gap Q` must be
/// positive semidefinite while `Q^2 + gap (1 + 1e-4) Q` must not be.
pub fn variational_gap_check(q: &DMatrix<f64>, gap: f64, tols: &Tolerances) -> Result<bool> {
    let q2 = q * q;
    let at_gap = &q2 + q * gap;
    let above = &q2 + q * (gap * (1.0 + 1e-4));
    let (psd_at, _) = is_psd(&at_gap, tols)?;
    let (psd_above, _) = is_psd(&above, tols)?;
    Ok(psd_at && !psd_above)
}

/// Laplacian eigenvalue comparison between a graph and its reduction at `x`.
#[derive(Debug, Clone)]
pub struct InterlacingReport {
    pub gap_original: f64,
    pub gap_reduced: f64,
    /// Worst violation of `gap_reduced >= gap_original` and of the
    /// interlacing fences `lambda_j(G) <= lambda_j(G_x) <= lambda_{j+1}(G)`.
    /// Zero when every comparison holds outright.
    pub max_violation: f64,
    /// Spectral radius of the original Laplacian, for tolerance scaling.
    pub radius: f64,
}

/// Compares the Laplacian spectrum of `g` with that of its reduction at `x`:
/// the gap never drops, and the reduced eigenvalues interlace the originals.
pub fn interlacing_check(
    g: &WeightedGraph,
    x: usize,
    tols: &Tolerances,
) -> Result<InterlacingReport> {
    let reduced = g.reduce_at(x)?;
    let full = spectrum_of(&g.laplacian(), tols)?;
    let small = spectrum_of(&reduced.graph.laplacian(), tols)?;
    let n = g.n();
    let mut violation = 0.0f64;
    violation = violation.max(full.values[1] - small.values[1]);
    for j in 1..n - 1 {
        violation = violation.max(full.values[j] - small.values[j]);
        violation = violation.max(small.values[j] - full.values[j + 1]);
    }
    Ok(InterlacingReport {
        gap_original: full.values[1],
        gap_reduced: small.values[1],
        max_violation: violation.max(0.0),
        radius: full.radius(),
    })
}

/// Smallest eigenvalue of `M = -Q` restricted to the complement of the
/// constant vector, computed matrix-free by Lanczos iteration with full
/// reorthogonalization. `apply` must evaluate `M v`; `norm_bound` must bound
/// the spectral radius of `M` (a row-sum bound works).
///
/// The returned value is certified: the Ritz pair must satisfy
/// `|M v - lambda v| <= 1e-7 * norm_bound`, otherwise the run is rejected.
pub fn gap_via_lanczos<F>(apply: F, dim: usize, norm_bound: f64, seed: u64) -> Result<f64>
where
    F: Fn(&[f64], &mut [f64]),
{
    assert!(dim >= 2, "deflated Lanczos needs dimension at least 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();

    let deflate = |w: &mut Vec<f64>| {
        let mean: f64 = w.iter().sum::<f64>() / dim as f64;
        for e in w.iter_mut() {
            *e -= mean;
        }
    };
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let norm = |a: &[f64]| -> f64 { dot(a, a).sqrt() };

    deflate(&mut v);
    let v_norm = norm(&v);
    if v_norm == 0.0 {
        return Err(Error::Certification("degenerate start vector".into()));
    }
    for e in v.iter_mut() {
        *e /= v_norm;
    }

    let max_steps = dim.saturating_sub(1).min(600);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];

    for _ in 0..max_steps {
        apply(&v, &mut w);
        let alpha = dot(&w, &v);
        alphas.push(alpha);
        basis.push(v.clone());
        // Full reorthogonalization, run twice for stability.
        for _ in 0..2 {
            deflate(&mut w);
            for b in &basis {
                let c = dot(&w, b);
                for (we, be) in w.iter_mut().zip(b) {
                    *we -= c * be;
                }
            }
        }
        let beta = norm(&w);
        if beta <= 1e-13 * norm_bound.max(1.0) {
            break;
        }
        betas.push(beta);
        v = w.iter().map(|e| e / beta).collect();
    }

    let k = alphas.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let (ritz_values, ritz_vectors) = eigs_sym(&t)?;
    let theta = ritz_values[0];
    let mut u = vec![0.0; dim];
    for (i, b) in basis.iter().enumerate() {
        let c = ritz_vectors[(i, 0)];
        for (ue, be) in u.iter_mut().zip(b) {
            *ue += c * be;
        }
    }
    let u_norm = norm(&u);
    for e in u.iter_mut() {
        *e /= u_norm;
    }
    apply(&u, &mut w);
    let mut residual = 0.0f64;
    for (we, ue) in w.iter().zip(&u) {
        let r = we - theta * ue;
        residual += r * r;
    }
    let residual = residual.sqrt();
    if residual > 1e-7 * norm_bound.max(1.0) {
        return Err(Error::Certification(format!(
            "Lanczos residual {residual:e} exceeds 1e-7 * {norm_bound:e}"
        )));
    }
    Ok(theta)
}

// ───────────────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, random_graph, WeightedGraph};
    use proptest::prelude::*;

    fn path3() -> WeightedGraph {
        WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    // ── Certified eigensolves ──────────────────────────────────────────────

    #[test]
    fn unit_path_laplacian_has_spectrum_zero_one_three() {
        let (values, _) = eigs_sym(&path3().laplacian()).unwrap();
        let expect = [0.0, 1.0, 3.0];
        for (v, e) in values.iter().zip(expect) {
            assert!((v - e).abs() <= 1e-12, "got {values:?}");
        }
    }

    #[test]
    fn diagonal_matrices_return_their_sorted_diagonal() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, -1.0, 2.0]));
        let (values, _) = eigs_sym(&m).unwrap();
        assert_eq!(values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn asymmetric_and_non_finite_inputs_are_rejected() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = 1.0;
        assert!(matches!(eigs_sym(&m), Err(Error::NotSymmetric)));
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = f64::NAN;
        assert!(matches!(eigs_sym(&m), Err(Error::NonFinite)));
    }

    #[test]
    fn random_solves_pass_certification() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..200 {
            let n = 1 + (trial * 7) % 150;
            let raw = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() * 2.0 - 1.0);
            let m = (&raw + raw.transpose()) * 0.5;
            let (values, vectors) = eigs_sym(&m).unwrap();
            assert_eq!(values.len(), n);
            assert_eq!(vectors.nrows(), n);
            for pair in values.windows(2) {
                assert!(pair[0] <= pair[1]);
            }
        }
    }

    #[test]
    fn zero_matrix_has_zero_spectrum() {
        let (values, _) = eigs_sym(&DMatrix::zeros(4, 4)).unwrap();
        assert_eq!(values, vec![0.0; 4]);
    }

    // ── Gaps and clustering ────────────────────────────────────────────────

    #[test]
    fn complete_graph_gap_is_n() {
        let tols = Tolerances::default();
        let gap = spectral_gap(&(-complete_graph(4).laplacian()), &tols).unwrap();
        assert!((gap - 4.0).abs() <= 1e-10);
    }

    #[test]
    fn block_diagonal_laplacian_fails_zero_simplicity() {
        // Two disjoint unit edges: zero eigenvalue has multiplicity 2.
        let mut q = DMatrix::zeros(4, 4);
        for (a, b) in [(0usize, 1usize), (2, 3)] {
            q[(a, b)] = 1.0;
            q[(b, a)] = 1.0;
            q[(a, a)] = -1.0;
            q[(b, b)] = -1.0;
        }
        let tols = Tolerances::default();
        assert!(matches!(
            spectral_gap(&q, &tols),
            Err(Error::ZeroNotSimple { multiplicity: 2 })
        ));
    }

    #[test]
    fn clustering_groups_values_within_tolerance() {
        let values = vec![0.0, 1e-12, 1.0, 1.0 + 1e-12, 2.0];
        let s = Spectrum::from_values(values, 1e-8);
        let m: Vec<usize> = s.clusters.iter().map(|c| c.multiplicity).collect();
        assert_eq!(m, vec![2, 2, 1]);
    }

    #[test]
    fn spectrum_json_roundtrips() {
        let s = Spectrum::from_values(vec![0.0, 1.0, 1.0 + 1e-13], 1e-8);
        let back: Spectrum = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(back.values, s.values);
        assert_eq!(back.clusters.len(), s.clusters.len());
    }

    #[test]
    fn variational_check_confirms_the_path_gap() {
        let q = -path3().laplacian();
        let tols = Tolerances::default();
        assert!(variational_gap_check(&q, 1.0, &tols).unwrap());
        assert!(!variational_gap_check(&q, 1.2, &tols).unwrap());
    }

    // ── PSD and multiset matching ──────────────────────────────────────────

    #[test]
    fn psd_verdicts() {
        let tols = Tolerances::default();
        let id = DMatrix::identity(3, 3);
        assert!(is_psd(&id, &tols).unwrap().0);
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]));
        let (ok, min) = is_psd(&m, &tols).unwrap();
        assert!(!ok);
        assert!((min + 1.0).abs() <= 1e-12);
    }

    #[test]
    fn multiset_subset_matches_with_multiplicity() {
        let (ok, _) = multiset_subset(&[0.0, 1.0], &[0.0, 1.0, 3.0], 1e-9);
        assert!(ok);
        let (ok, unmatched) = multiset_subset(&[0.0, 2.0], &[0.0, 1.0, 3.0], 1e-9);
        assert!(!ok);
        assert_eq!(unmatched, vec![2.0]);
        // Multiplicity matters: a single 1.0 cannot serve two requests.
        let (ok, _) = multiset_subset(&[1.0, 1.0], &[0.0, 1.0, 3.0], 1e-9);
        assert!(!ok);
    }

    // ── Interlacing ────────────────────────────────────────────────────────

    #[test]
    fn triangle_reduction_interlaces_and_keeps_the_gap() {
        let tols = Tolerances::default();
        let report = interlacing_check(&complete_graph(3), 2, &tols).unwrap();
        assert!((report.gap_original - 3.0).abs() <= 1e-10);
        assert!((report.gap_reduced - 3.0).abs() <= 1e-10);
        assert!(report.max_violation <= 1e-12);
    }

    // ── Lanczos ────────────────────────────────────────────────────────────

    #[test]
    fn lanczos_gap_matches_dense_solve() {
        for seed in [1u64, 2, 3] {
            let g = random_graph(12, 0.5, seed);
            let l = g.laplacian();
            let tols = Tolerances::default();
            let dense = spectral_gap(&(-l.clone()), &tols).unwrap();
            let bound = 2.0 * (0..12).map(|x| g.strength(x)).fold(0.0f64, f64::max);
            let apply = |v: &[f64], out: &mut [f64]| {
                for i in 0..12 {
                    out[i] = (0..12).map(|j| l[(i, j)] * v[j]).sum();
                }
            };
            let sparse = gap_via_lanczos(apply, 12, bound, seed).unwrap();
            assert!(
                (sparse - dense).abs() <= 1e-8 * dense.max(1.0),
                "seed {seed}: {sparse} vs {dense}"
            );
        }
    }

    // ── Properties ─────────────────────────────────────────────────────────

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn prop_rayleigh_quotients_dominate_the_gap(n in 3usize..=7, seed in 0u64..300) {
            let g = random_graph(n, 0.7, seed);
            let l = g.laplacian();
            let tols = Tolerances::default();
            let gap = spectral_gap(&(-l.clone()), &tols).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
            for _ in 0..50 {
                let mut f: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
                let mean = f.iter().sum::<f64>() / n as f64;
                for e in f.iter_mut() { *e -= mean; }
                let fv = nalgebra::DVector::from_vec(f);
                let denom = fv.dot(&fv);
                prop_assume!(denom > 1e-12);
                let quotient = fv.dot(&(&l * &fv)) / denom;
                prop_assert!(quotient >= gap - 1e-9 * gap.max(1.0));
            }
        }

        #[test]
        fn prop_laplacian_trace_is_twice_total_weight(n in 2usize..=7, seed in 0u64..300) {
            let g = random_graph(n, 0.6, seed);
            let tols = Tolerances::default();
            let s = spectrum_of(&g.laplacian(), &tols).unwrap();
            let trace: f64 = s.values.iter().sum();
            let expect = 2.0 * g.total_weight();
            prop_assert!((trace - expect).abs() <= 1e-10 * expect.max(1.0));
        }

        #[test]
        fn prop_interlacing_holds_on_random_graphs(n in 3usize..=7, seed in 0u64..300) {
            let g = random_graph(n, 0.6, seed);
            let tols = Tolerances::default();
            for x in 0..n {
                let report = interlacing_check(&g, x, &tols).unwrap();
                prop_assert!(report.max_violation <= 1e-9 * report.radius.max(1.0));
            }
        }
    }
}
