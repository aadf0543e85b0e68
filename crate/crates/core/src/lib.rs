//! Exact generator matrices for particle processes driven by a weighted
//! graph, together with the numerical machinery to compare their spectra.
//!
//! Six processes share the same edge rates: the single random walker, the
//! interchange process on full labelings, the exclusion process with k
//! indistinguishable particles, its colored refinement, and the cycle and
//! matching walks obtained by forgetting part of the labeling. The library
//! builds their negated generators as exact dense matrices (matrix-free for
//! the largest interchange sizes), reduces graphs by eliminating a vertex
//! through its star, certifies symmetric eigendecompositions, and checks the
//! structural facts that tie all the gaps to the walk gap: contraction
//! intertwinings, the star-comparison quadratic form and its correlation
//! decomposition, subset-sum eigenvalues, conjugate pairing, and the
//! restricted-gap argument on the zero-conditional-mean subspace.

pub mod chains;
pub mod error;
pub mod graph;
pub mod octopus;
pub mod perm;
pub mod spectra;
pub mod structure;

pub use chains::{
    build_colored, build_cycle, build_exclusion, build_interchange, build_matching, build_walk,
    contraction, verify_intertwining, ContractionMap, EdgeAction, Generator, SpaceKind, StateSpace,
};
pub use error::{Error, Result};
pub use graph::{complete_graph, parse_graph, random_graph, ReducedGraph, WeightedGraph};
pub use octopus::{
    build_aj, build_bk, build_c, octopus_residual, verify_coefficient_bound,
    verify_corr_decomposition, verify_matrix_facts, CoefficientBound, CosetBlockMatrix,
    MatrixFact, OctopusMatrices, RateSystem,
};
pub use perm::Permutation;
pub use spectra::{spectral_gap, spectrum_of, Spectrum, Tolerances};
pub use structure::{
    conjugate_pairing_check, h_subspace, mu_ip, partitions, subset_sum_check, verify_aldous,
    AldousReport, CheckOutcome, HSubspace, Partition, SubsetSumReport,
};
