//! The three commands behind the binary: `gap`, `reduce`, and the `verify`
//! family. Input and size errors surface as `Err(String)` (exit code 2);
//! claims that fail their tolerance become `fail` rows in the report.

use std::fmt;
use std::str::FromStr;

use sgl_core::chains::{self, Generator};
use sgl_core::graph::{parse_graph, random_graph, WeightedGraph};
use sgl_core::octopus::{self, RateSystem};
use sgl_core::spectra::{self, Tolerances};
use sgl_core::structure::{self, binomial, Partition};

use crate::report::{fmt_metric, CheckResult, RandomSweep, Report, RunConfig};

/// Above this dimension `gap` switches to the matrix-free solver.
const DENSE_LIMIT: usize = 1000;
const LANCZOS_SEED: u64 = 17;

// ── Chain selection ─────────────────────────────────────────────────────────

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainSpec {
    Walk,
    Interchange,
    Exclusion(usize),
    Colored(Vec<usize>),
    Cycle,
    Matching,
}

impl FromStr for ChainSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "rw" | "walk" => return Ok(ChainSpec::Walk),
            "ip" | "interchange" => return Ok(ChainSpec::Interchange),
            "cycle" | "cp" => return Ok(ChainSpec::Cycle),
            "matching" | "mp" => return Ok(ChainSpec::Matching),
            _ => {}
        }
        if let Some(rest) = lower.strip_prefix("ep:") {
            let k: usize = rest
                .parse()
                .map_err(|_| format!("bad particle count in '{s}'"))?;
            return Ok(ChainSpec::Exclusion(k));
        }
        if let Some(rest) = lower.strip_prefix("cep:") {
            let counts: Result<Vec<usize>, _> = rest.split(',').map(|p| p.trim().parse()).collect();
            return counts
                .map(ChainSpec::Colored)
                .map_err(|_| format!("bad color counts in '{s}'"));
        }
        Err(format!(
            "unknown chain '{s}' (expected rw, ip, ep:K, cep:N1,N2,.., cycle, or matching)"
        ))
    }
}

impl fmt::Display for ChainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainSpec::Walk => write!(f, "rw"),
            ChainSpec::Interchange => write!(f, "ip"),
            ChainSpec::Exclusion(k) => write!(f, "ep:{k}"),
            ChainSpec::Colored(counts) => {
                let parts: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
                write!(f, "cep:{}", parts.join(","))
            }
            ChainSpec::Cycle => write!(f, "cycle"),
            ChainSpec::Matching => write!(f, "matching"),
        }
    }
}

fn build_chain(g: &WeightedGraph, spec: &ChainSpec, max_n: usize) -> sgl_core::Result<Generator> {
    match spec {
        ChainSpec::Walk => chains::build_walk(g),
        ChainSpec::Interchange => chains::build_interchange_with_max(g, max_n),
        ChainSpec::Exclusion(k) => chains::build_exclusion(g, *k),
        ChainSpec::Colored(counts) => chains::build_colored_with_max(g, counts, max_n),
        ChainSpec::Cycle => chains::build_cycle(g),
        ChainSpec::Matching => chains::build_matching(g),
    }
}

// ── Inputs ──────────────────────────────────────────────────────────────────

#[derive(Debug, Clone)]
pub enum InputSource {
    File(String),
    Random(RandomSweep),
}

impl InputSource {
    fn graphs(&self) -> Result<Vec<WeightedGraph>, String> {
        match self {
            InputSource::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read {path}: {e}"))?;
                Ok(vec![parse_graph(&text).map_err(|e| e.to_string())?])
            }
            InputSource::Random(sweep) => {
                if sweep.trials == 0 {
                    return Err("need at least one trial".into());
                }
                if !(sweep.density > 0.0 && sweep.density <= 1.0) {
                    return Err(format!("density {} outside (0, 1]", sweep.density));
                }
                Ok((0..sweep.trials)
                    .map(|i| random_graph(sweep.n, sweep.density, sweep.seed + i as u64))
                    .collect())
            }
        }
    }

    fn fill(&self, config: &mut RunConfig) {
        match self {
            InputSource::File(path) => config.graph = Some(path.clone()),
            InputSource::Random(sweep) => config.random = Some(sweep.clone()),
        }
    }

    fn trials(&self) -> usize {
        match self {
            InputSource::File(_) => 1,
            InputSource::Random(sweep) => sweep.trials,
        }
    }
}

fn row_name(base: &str, trial: usize, trials: usize) -> String {
    if trials > 1 {
        format!("{base}[{trial}]")
    } else {
        base.to_string()
    }
}

// ── gap ─────────────────────────────────────────────────────────────────────

pub struct GapArgs {
    pub input: InputSource,
    pub chain: ChainSpec,
    pub spectrum: bool,
    pub max_n: usize,
    pub tols: Tolerances,
}

pub fn cmd_gap(args: &GapArgs) -> Result<Report, String> {
    let mut config = RunConfig {
        chain: Some(args.chain.to_string()),
        max_n: args.max_n,
        tolerances: (&args.tols).into(),
        ..Default::default()
    };
    args.input.fill(&mut config);
    let graphs = args.input.graphs()?;
    let trials = args.input.trials();
    let mut checks = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        let use_sparse = args.chain == ChainSpec::Interchange
            && !args.spectrum
            && factorial_at_most(g.n(), DENSE_LIMIT).is_none();
        let (gap, dim, method) = if use_sparse {
            let action =
                chains::interchange_action(g, args.max_n).map_err(|e| e.to_string())?;
            let gap = spectra::gap_via_lanczos(
                |v, out| action.apply_neg_generator(v, out),
                action.dim,
                action.norm_bound(),
                LANCZOS_SEED,
            )
            .map_err(|e| e.to_string())?;
            (gap, action.dim, "matrix-free")
        } else {
            let gen = build_chain(g, &args.chain, args.max_n).map_err(|e| e.to_string())?;
            let gap = gen.gap(&args.tols).map_err(|e| e.to_string())?;
            if args.spectrum {
                let spectrum =
                    spectra::spectrum_of(&(-&gen.q), &args.tols).map_err(|e| e.to_string())?;
                let clusters: Vec<String> = spectrum
                    .clusters
                    .iter()
                    .map(|c| format!("{} x{}", crate::report::fmt_metric(c.value), c.multiplicity))
                    .collect();
                checks.push(CheckResult::new(
                    row_name("spectrum", i, trials),
                    true,
                    spectrum.clusters.len() as f64,
                    format!("clustered eigenvalues of -Q: {}", clusters.join(", ")),
                    "clustered-spectrum",
                ));
            }
            (gap, gen.dim(), "dense")
        };
        checks.push(CheckResult::new(
            row_name("spectral-gap", i, trials),
            true,
            gap,
            format!(
                "chain {} on {} vertices, {} states, {} solver",
                args.chain,
                g.n(),
                dim,
                method
            ),
            "spectral-gap",
        ));
    }
    Ok(Report::new("gap", config, checks))
}

/// `Some(n!)` when it stays at or below `limit`.
fn factorial_at_most(n: usize, limit: usize) -> Option<usize> {
    let mut f = 1usize;
    for v in 2..=n {
        f = f.checked_mul(v)?;
        if f > limit {
            return None;
        }
    }
    Some(f)
}

// ── reduce ──────────────────────────────────────────────────────────────────

pub struct ReduceArgs {
    pub graph: String,
    /// 1-based, matching the file format.
    pub at: usize,
    pub output: Option<String>,
    pub tols: Tolerances,
}

pub fn cmd_reduce(args: &ReduceArgs) -> Result<Report, String> {
    let text =
        std::fs::read_to_string(&args.graph).map_err(|e| format!("cannot read {}: {e}", args.graph))?;
    let g = parse_graph(&text).map_err(|e| e.to_string())?;
    if args.at == 0 || args.at > g.n() {
        return Err(format!(
            "vertex {} out of range (graph has vertices 1..{})",
            args.at,
            g.n()
        ));
    }
    let reduced = g.reduce_at(args.at - 1).map_err(|e| e.to_string())?;
    let edge_list = reduced.graph.to_edge_list();
    if let Some(path) = &args.output {
        std::fs::write(path, &edge_list).map_err(|e| format!("cannot write {path}: {e}"))?;
    }

    let gap_g = spectra::spectral_gap(&(-g.laplacian()), &args.tols).map_err(|e| e.to_string())?;
    let gap_r = spectra::spectral_gap(&(-reduced.graph.laplacian()), &args.tols)
        .map_err(|e| e.to_string())?;
    let drop = gap_g - gap_r;
    let tol = 1e-9 * gap_g.max(1.0);

    let config = RunConfig {
        graph: Some(args.graph.clone()),
        at: Some(args.at),
        output: args.output.clone(),
        max_n: chains::DEFAULT_MAX_PERMUTATION_N,
        tolerances: (&args.tols).into(),
        ..Default::default()
    };
    let checks = vec![
        CheckResult::new(
            "reduced-graph",
            true,
            gap_r,
            format!(
                "vertex {} removed; edges: {}",
                args.at,
                edge_list.trim_end().replace('\n', "; ")
            ),
            "network-reduction",
        ),
        CheckResult::new(
            "gap-monotonicity",
            drop <= tol,
            drop.max(0.0),
            format!("original gap {gap_g}, reduced gap {gap_r}"),
            "reduction-monotone",
        ),
    ];
    Ok(Report::new("reduce", config, checks))
}

// ── verify ──────────────────────────────────────────────────────────────────

pub struct VerifyGraphArgs {
    pub input: InputSource,
    pub max_n: usize,
    pub tols: Tolerances,
}

pub fn cmd_verify_aldous(args: &VerifyGraphArgs) -> Result<Report, String> {
    let mut config = RunConfig {
        max_n: args.max_n,
        tolerances: (&args.tols).into(),
        ..Default::default()
    };
    args.input.fill(&mut config);
    let graphs = args.input.graphs()?;
    let trials = args.input.trials();
    let mut checks = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        match structure::verify_aldous(g, &args.tols) {
            Ok(report) => {
                for c in report.checks {
                    checks.push(CheckResult::new(
                        row_name(&c.name, i, trials),
                        c.pass,
                        c.metric,
                        c.detail,
                        &c.name,
                    ));
                }
            }
            Err(e) => checks.push(CheckResult::new(
                row_name("gap-equality", i, trials),
                false,
                -1.0,
                format!("verification aborted: {e}"),
                "gap-equality",
            )),
        }
    }
    Ok(Report::new("verify aldous", config, checks))
}

pub struct VerifyOctopusArgs {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_n: usize,
    pub tols: Tolerances,
}

pub fn cmd_verify_octopus(args: &VerifyOctopusArgs) -> Result<Report, String> {
    if args.n < 2 {
        return Err("need n >= 2 (at least one spoke)".into());
    }
    if args.trials == 0 {
        return Err("need at least one trial".into());
    }
    let config = RunConfig {
        n: Some(args.n),
        trials: Some(args.trials),
        seed: Some(args.seed),
        max_n: args.max_n,
        tolerances: (&args.tols).into(),
        ..Default::default()
    };
    let mut checks = Vec::new();
    use rand_core_seed::rates_for_trial;
    for i in 0..args.trials {
        let r = rates_for_trial(args.n - 1, args.seed, i);
        let oct = match octopus::build_c_with_max(&r, args.max_n) {
            Ok(o) => o,
            Err(e) => return Err(e.to_string()),
        };
        let (values, _) = spectra::eigs_sym(&oct.c).map_err(|e| e.to_string())?;
        let floor = args.tols.psd_floor(oct.c.amax());
        checks.push(CheckResult::new(
            row_name("star-comparison-psd", i, args.trials),
            values[0] >= floor,
            (-values[0]).max(0.0),
            format!(
                "smallest eigenvalue {}, floor {}",
                fmt_metric(values[0]),
                fmt_metric(floor)
            ),
            "star-comparison-psd",
        ));
        if args.n <= 3 {
            let residual = oct.cprime.amax();
            let scale = (oct.cc * oct.cc).max(1.0);
            checks.push(CheckResult::new(
                row_name("small-correction-vanishes", i, args.trials),
                residual <= 1e-12 * scale,
                residual,
                format!("max |C'| = {} at n = {}", fmt_metric(residual), args.n),
                "small-correction-vanishes",
            ));
        } else {
            let scale = oct.cprime.amax().max(1.0);
            let residual = octopus::verify_corr_decomposition(&r).map_err(|e| e.to_string())?;
            checks.push(CheckResult::new(
                row_name("correction-decomposition", i, args.trials),
                residual <= 1e-8 * scale,
                residual,
                format!(
                    "entrywise residual {}, scale {}",
                    fmt_metric(residual),
                    fmt_metric(scale)
                ),
                "correction-decomposition",
            ));
        }
        if args.n >= 5 {
            let bound = octopus::verify_coefficient_bound(&r).map_err(|e| e.to_string())?;
            checks.push(CheckResult::new(
                row_name("coefficient-bound", i, args.trials),
                bound.ok && bound.equality_respected,
                (-bound.worst_margin).max(0.0),
                format!(
                    "worst margin {} at subset {:?}",
                    fmt_metric(bound.worst_margin),
                    bound.worst_j
                ),
                "coefficient-bound",
            ));
        }
    }
    Ok(Report::new("verify octopus", config, checks))
}

/// Deterministic per-trial rates without dragging a generator through the
/// whole sweep: one stream per trial.
mod rand_core_seed {
    use super::RateSystem;
    use sgl_core::graph::random_graph;

    pub fn rates_for_trial(len: usize, seed: u64, trial: usize) -> RateSystem {
        // reuse the graph sampler's deterministic weights as a rate source
        let g = random_graph(len + 1, 1.0, seed ^ ((trial as u64) << 32 | 0x5eed));
        let rates: Vec<f64> = (1..=len).map(|v| g.weight(0, v) * 4.0).collect();
        RateSystem::new(rates).expect("complete graph weights are positive")
    }
}

pub struct VerifyMatricesArgs {
    pub n: usize,
    pub max_n: usize,
    pub tols: Tolerances,
}

pub fn cmd_verify_matrices(args: &VerifyMatricesArgs) -> Result<Report, String> {
    let facts = octopus::verify_matrix_facts(args.n).map_err(|e| e.to_string())?;
    let config = RunConfig {
        n: Some(args.n),
        max_n: args.max_n,
        tolerances: (&args.tols).into(),
        ..Default::default()
    };
    let checks = facts
        .into_iter()
        .map(|f| {
            CheckResult::new(
                f.name.clone(),
                f.pass,
                if f.pass { 0.0 } else { 1.0 },
                f.detail,
                "comparison-matrix-facts",
            )
        })
        .collect();
    Ok(Report::new("verify matrices", config, checks))
}

pub fn cmd_verify_structure(args: &VerifyGraphArgs) -> Result<Report, String> {
    let mut config = RunConfig {
        max_n: args.max_n,
        tolerances: (&args.tols).into(),
        ..Default::default()
    };
    args.input.fill(&mut config);
    let graphs = args.input.graphs()?;
    let trials = args.input.trials();
    let mut checks = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        let report = structure::subset_sum_check(g, &args.tols).map_err(|e| e.to_string())?;
        checks.push(CheckResult::new(
            row_name("subset-sum-inclusion", i, trials),
            report.ok,
            report.max_mismatch,
            format!(
                "{} walk subset sums found in the interchange spectrum",
                report.count
            ),
            "subset-sum-spectrum",
        ));
        if report.degenerate {
            checks.push(CheckResult::skipped(
                row_name("subset-sum-count", i, trials),
                "walk spectrum is degenerate; count not comparable",
                "subset-sum-count",
            ));
        } else {
            let diff = report.count.abs_diff(report.expected_count);
            checks.push(CheckResult::new(
                row_name("subset-sum-count", i, trials),
                diff == 0,
                diff as f64,
                format!("{} of {} expected", report.count, report.expected_count),
                "subset-sum-count",
            ));
        }
        let value = 2.0 * g.total_weight();
        let residual = structure::alternating_eigenvalue_residual(g).map_err(|e| e.to_string())?;
        checks.push(CheckResult::new(
            row_name("alternating-eigenvalue", i, trials),
            residual <= 1e-10 * value.max(1.0),
            residual,
            format!(
                "parity eigenfunction defect {} at eigenvalue {}",
                fmt_metric(residual),
                fmt_metric(value)
            ),
            "alternating-eigenvalue",
        ));
        let (ok, worst) =
            structure::conjugate_pairing_check(g, &args.tols).map_err(|e| e.to_string())?;
        checks.push(CheckResult::new(
            row_name("conjugate-pairing", i, trials),
            ok,
            worst,
            "sorted spectrum pairs bottom-to-top to twice the total weight".to_string(),
            "conjugate-pairing",
        ));
    }

    let mut dims_ok = true;
    for n in 1..=8usize {
        let total: u64 = structure::partitions(n)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|p| p.hook_dimension().pow(2))
            .sum();
        dims_ok &= total == sgl_core::perm::factorial(n) as u64;
        for k in 0..n {
            let mut parts = vec![n - k];
            parts.extend(std::iter::repeat_n(1, k));
            let hook = Partition::new(parts).map_err(|e| e.to_string())?;
            dims_ok &= hook.hook_dimension() == binomial(n - 1, k);
        }
    }
    checks.push(CheckResult::new(
        "dimension-count",
        dims_ok,
        if dims_ok { 0.0 } else { 1.0 },
        "squared hook dimensions sum to n! and L-shaped dimensions match binomials, n <= 8",
        "dimension-count",
    ));
    Ok(Report::new("verify structure", config, checks))
}
