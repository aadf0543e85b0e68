//! Permutations of {0, .., n-1}: composition, parity, Lehmer ranking, cosets.
//!
//! Every matrix over a permutation state space in this crate is indexed by
//! Lehmer rank, i.e. lexicographic order of the image words. Enumerations of
//! the even permutations keep the induced order. Fixing one ranking here fixes
//! the layout of every generator and coset block matrix downstream.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Hard ceiling for full enumeration of a symmetric group (7! = 5040).
pub const MAX_ENUM_N: usize = 7;

const FACTORIALS: [usize; 13] = [
    1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362_880, 3_628_800, 39_916_800, 479_001_600,
];

/// n! for n <= 12.
pub fn factorial(n: usize) -> usize {
    FACTORIALS[n]
}

/// A permutation of {0, .., n-1}, stored as its image word.
///
/// `p.apply(i)` is the image of `i`. Composition is in function order:
/// `(a.compose(&b)).apply(i) == a.apply(b.apply(i))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Validates that `images` is a bijection on {0, .., n-1}.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {v} out of range for n = {n}"
                )));
            }
            if seen[v] {
                return Err(Error::InvalidPermutation(format!("image {v} repeated")));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    /// The transposition exchanging `x` and `y` in the symmetric group on n points.
    pub fn transposition(n: usize, x: usize, y: usize) -> Self {
        assert!(x < n && y < n && x != y, "transposition needs two distinct points");
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(x, y);
        Permutation { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Function composition: `(a.compose(&b)).apply(i) == a.apply(b.apply(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n());
        let images = other.images.iter().map(|&i| self.images[i]).collect();
        Permutation { images }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v] = i;
        }
        Permutation { images }
    }

    /// Right multiplication by the transposition of `x` and `y`: the result
    /// has the images at positions `x` and `y` exchanged.
    pub fn swap_images(&self, x: usize, y: usize) -> Permutation {
        let mut images = self.images.clone();
        images.swap(x, y);
        Permutation { images }
    }

    /// True when the permutation is a product of an even number of transpositions.
    pub fn is_even(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions % 2 == 0
    }

    /// Points moved by the permutation, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.images[i] != i).collect()
    }

    /// Non-trivial cycles, each rotated to start at its smallest point,
    /// sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.images[i];
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Position in the lexicographic order of all image words of length n.
    pub fn lehmer_rank(&self) -> usize {
        let n = self.n();
        let mut rank = 0;
        for i in 0..n {
            let smaller = self.images[i + 1..]
                .iter()
                .filter(|&&v| v < self.images[i])
                .count();
            rank += smaller * FACTORIALS[n - 1 - i];
        }
        rank
    }

    /// Inverse of [`lehmer_rank`](Self::lehmer_rank): the `rank`-th image word
    /// in lexicographic order.
    pub fn from_lehmer_rank(n: usize, rank: usize) -> Self {
        assert!(rank < FACTORIALS[n], "rank {rank} out of range for n = {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        let mut rest = rank;
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let f = FACTORIALS[n - 1 - i];
            images.push(pool.remove(rest / f));
            rest %= f;
        }
        Permutation { images }
    }

    /// Image word as a space-separated string, e.g. `"1 0 2"`.
    pub fn one_line(&self) -> String {
        let words: Vec<String> = self.images.iter().map(|v| v.to_string()).collect();
        words.join(" ")
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, e.g. `(0 1)(2 3)`; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            let parts: Vec<String> = cycle.iter().map(|v| v.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses the one-line image word, e.g. `"1 0 2"`.
    fn from_str(s: &str) -> Result<Self> {
        let images: std::result::Result<Vec<usize>, _> =
            s.split_whitespace().map(str::parse::<usize>).collect();
        let images = images
            .map_err(|e| Error::InvalidPermutation(format!("bad image word {s:?}: {e}")))?;
        Permutation::from_images(images)
    }
}

/// All n! permutations in Lehmer order. Panics above [`MAX_ENUM_N`].
pub fn enumerate_all(n: usize) -> Vec<Permutation> {
    assert!(n <= MAX_ENUM_N, "full enumeration capped at n = {MAX_ENUM_N}");
    (0..FACTORIALS[n])
        .map(|r| Permutation::from_lehmer_rank(n, r))
        .collect()
}

/// The n!/2 even permutations in Lehmer order. Panics above [`MAX_ENUM_N`].
pub fn enumerate_even(n: usize) -> Vec<Permutation> {
    assert!(n >= 2, "even subgroup enumeration needs n >= 2");
    let mut even: Vec<Permutation> = enumerate_all(n).into_iter().filter(|p| p.is_even()).collect();
    debug_assert_eq!(even.len(), FACTORIALS[n] / 2);
    even.shrink_to_fit();
    even
}

/// How `b` sits relative to `a`, as seen from the group element `a^-1 b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelativeKind {
    /// `a == b`.
    Identity,
    /// `a^-1 b` is a product of two disjoint 2-cycles, all four moved points
    /// inside the reference set.
    TwoTwoCycles,
    /// `a^-1 b` is a 3-cycle with all moved points inside the reference set.
    ThreeCycle,
    /// Anything else, including shapes that match but move points outside
    /// the reference set.
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeClass {
    pub kind: RelativeKind,
    /// Moved points of `a^-1 b`, ascending.
    pub support: Vec<usize>,
}

/// Classifies `a^-1 b` by cycle shape, restricted to the reference set `j_set`.
pub fn classify_relative(a: &Permutation, b: &Permutation, j_set: &[usize]) -> RelativeClass {
    let d = a.inverse().compose(b);
    let support = d.support();
    let inside = support.iter().all(|p| j_set.contains(p));
    let mut lengths: Vec<usize> = d.cycles().iter().map(Vec::len).collect();
    lengths.sort_unstable();
    let kind = if support.is_empty() {
        RelativeKind::Identity
    } else if inside && lengths == [2, 2] {
        RelativeKind::TwoTwoCycles
    } else if inside && lengths == [3] {
        RelativeKind::ThreeCycle
    } else {
        RelativeKind::Other
    };
    RelativeClass { kind, support }
}

/// Partition of an enumerated group into left cosets `g sub`.
#[derive(Debug, Clone)]
pub struct CosetPartition {
    /// One row per coset, ordered by representative. Row `b` lists the ambient
    /// indices of `rep_b . sigma` following the subgroup's own enumeration
    /// order, so the induced submatrix layout is identical across blocks.
    pub blocks: Vec<Vec<usize>>,
    /// Ambient index of each block's minimal (first-encountered) element.
    pub representatives: Vec<usize>,
}

/// Splits `ambient` into left cosets of `sub`. Two elements share a block iff
/// `a^-1 b` lies in `sub`. Representatives are the minimal ambient indices;
/// blocks are ordered by representative.
///
/// `ambient` must be closed under right multiplication by `sub`.
pub fn left_cosets(ambient: &[Permutation], sub: &[Permutation]) -> CosetPartition {
    let index: HashMap<&[usize], usize> = ambient
        .iter()
        .enumerate()
        .map(|(i, p)| (p.images(), i))
        .collect();
    let mut assigned = vec![false; ambient.len()];
    let mut blocks = Vec::new();
    let mut representatives = Vec::new();
    for i in 0..ambient.len() {
        if assigned[i] {
            continue;
        }
        let block: Vec<usize> = sub
            .iter()
            .map(|s| {
                let member = ambient[i].compose(s);
                *index
                    .get(member.images())
                    .expect("ambient not closed under the subgroup")
            })
            .collect();
        for &m in &block {
            assert!(!assigned[m] || m == i, "subgroup enumeration contains duplicates");
            assigned[m] = true;
        }
        representatives.push(i);
        blocks.push(block);
    }
    CosetPartition {
        blocks,
        representatives,
    }
}

/// The Klein four-group {id, (01)(23), (02)(13), (03)(12)} on 4 points.
pub fn klein_group_0123() -> Vec<Permutation> {
    [
        vec![0, 1, 2, 3],
        vec![1, 0, 3, 2],
        vec![2, 3, 0, 1],
        vec![3, 2, 1, 0],
    ]
    .into_iter()
    .map(|images| Permutation { images })
    .collect()
}

/// The Klein four-group {id, (12)(34), (13)(24), (14)(23)} on 5 points,
/// fixing the point 0.
pub fn klein_group_1234() -> Vec<Permutation> {
    [
        vec![0, 1, 2, 3, 4],
        vec![0, 2, 1, 4, 3],
        vec![0, 3, 4, 1, 2],
        vec![0, 4, 3, 2, 1],
    ]
    .into_iter()
    .map(|images| Permutation { images })
    .collect()
}

/// The even permutations of `support` (a subset of {0, .., n-1}), embedded as
/// permutations of n points fixing everything else. Order is induced by the
/// even enumeration of the small group, hence Lehmer-ascending.
pub fn embedded_even_subgroup(n: usize, support: &[usize]) -> Vec<Permutation> {
    let mut points = support.to_vec();
    points.sort_unstable();
    points.dedup();
    assert!(points.iter().all(|&p| p < n), "support point out of range");
    enumerate_even(points.len())
        .into_iter()
        .map(|q| {
            let mut images: Vec<usize> = (0..n).collect();
            for (i, &p) in points.iter().enumerate() {
                images[p] = points[q.apply(i)];
            }
            Permutation { images }
        })
        .collect()
}

// ───────────────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // ── Composition and parity ─────────────────────────────────────────────

    #[test]
    fn compose_applies_right_then_left() {
        let a: Permutation = "1 2 0".parse().unwrap();
        let b: Permutation = "0 2 1".parse().unwrap();
        let c = a.compose(&b);
        for i in 0..3 {
            assert_eq!(c.apply(i), a.apply(b.apply(i)));
        }
    }

    #[test]
    fn inverse_composes_to_identity() {
        for p in enumerate_all(4) {
            assert_eq!(p.compose(&p.inverse()), Permutation::identity(4));
            assert_eq!(p.inverse().compose(&p), Permutation::identity(4));
        }
    }

    #[test]
    fn transpositions_are_odd_and_involutive() {
        let t = Permutation::transposition(5, 1, 3);
        assert!(!t.is_even());
        assert_eq!(t.compose(&t), Permutation::identity(5));
    }

    #[test]
    fn parity_is_multiplicative() {
        for a in enumerate_all(4) {
            for b in enumerate_all(4) {
                assert_eq!(a.compose(&b).is_even(), a.is_even() == b.is_even());
            }
        }
    }

    #[test]
    fn swap_images_is_right_transposition() {
        let p: Permutation = "2 0 3 1".parse().unwrap();
        let t = Permutation::transposition(4, 1, 3);
        assert_eq!(p.swap_images(1, 3), p.compose(&t));
    }

    // ── Lehmer ranking ─────────────────────────────────────────────────────

    #[test]
    fn identity_has_rank_zero() {
        assert_eq!(Permutation::identity(5).lehmer_rank(), 0);
    }

    #[test]
    fn rank_roundtrip_is_exhaustive_up_to_n5() {
        for n in 1..=5 {
            for r in 0..factorial(n) {
                let p = Permutation::from_lehmer_rank(n, r);
                assert_eq!(p.lehmer_rank(), r);
            }
        }
    }

    #[test]
    fn rank_order_is_lexicographic_on_image_words() {
        let all = enumerate_all(4);
        for pair in all.windows(2) {
            assert!(pair[0].images() < pair[1].images());
        }
    }

    // ── Enumeration ────────────────────────────────────────────────────────

    #[test]
    fn even_enumeration_of_s3_is_id_012_021() {
        let even = enumerate_even(3);
        assert_eq!(even.len(), 3);
        assert_eq!(even[0].images(), &[0, 1, 2]);
        assert_eq!(even[1].images(), &[1, 2, 0]);
        assert_eq!(even[2].images(), &[2, 0, 1]);
        assert_eq!(format!("{}", even[1]), "(0 1 2)");
        assert_eq!(format!("{}", even[2]), "(0 2 1)");
    }

    #[test]
    fn even_enumeration_has_half_size() {
        for n in 2..=6 {
            assert_eq!(enumerate_even(n).len(), factorial(n) / 2);
        }
    }

    // ── Cycle notation ─────────────────────────────────────────────────────

    #[test]
    fn cycle_notation_examples() {
        assert_eq!(format!("{}", Permutation::identity(4)), "()");
        let p: Permutation = "1 0 3 2".parse().unwrap();
        assert_eq!(format!("{p}"), "(0 1)(2 3)");
    }

    #[test]
    fn one_line_roundtrip() {
        let p: Permutation = "3 1 0 2".parse().unwrap();
        assert_eq!(p.one_line().parse::<Permutation>().unwrap(), p);
    }

    #[test]
    fn bad_image_words_are_rejected() {
        assert!("0 0 1".parse::<Permutation>().is_err());
        assert!("0 3".parse::<Permutation>().is_err());
    }

    // ── Relative classification ────────────────────────────────────────────

    #[test]
    fn classify_two_two_cycles() {
        let a = Permutation::identity(4);
        let b: Permutation = "1 0 3 2".parse().unwrap();
        let class = classify_relative(&a, &b, &[0, 1, 2, 3]);
        assert_eq!(class.kind, RelativeKind::TwoTwoCycles);
        assert_eq!(class.support, vec![0, 1, 2, 3]);
    }

    #[test]
    fn classify_three_cycle_depends_on_reference_set() {
        let a = Permutation::identity(4);
        let b: Permutation = "1 2 0 3".parse().unwrap();
        assert_eq!(
            classify_relative(&a, &b, &[0, 1, 2]).kind,
            RelativeKind::ThreeCycle
        );
        assert_eq!(
            classify_relative(&a, &b, &[0, 1, 3]).kind,
            RelativeKind::Other
        );
    }

    #[test]
    fn classify_identity_and_single_transposition() {
        let a: Permutation = "1 0 2 3".parse().unwrap();
        assert_eq!(
            classify_relative(&a, &a, &[0, 1, 2, 3]).kind,
            RelativeKind::Identity
        );
        let b = Permutation::identity(4);
        assert_eq!(
            classify_relative(&a, &b, &[0, 1, 2, 3]).kind,
            RelativeKind::Other
        );
    }

    // ── Cosets ─────────────────────────────────────────────────────────────

    #[test]
    fn even_s4_splits_into_three_klein_cosets() {
        let ambient = enumerate_even(4);
        let sub = klein_group_0123();
        let cosets = left_cosets(&ambient, &sub);
        assert_eq!(cosets.blocks.len(), 3);
        for block in &cosets.blocks {
            assert_eq!(block.len(), 4);
            for &i in block {
                for &j in block {
                    let d = ambient[i].inverse().compose(&ambient[j]);
                    assert!(sub.contains(&d));
                }
            }
        }
    }

    #[test]
    fn coset_blocks_partition_the_ambient_group() {
        let ambient = enumerate_even(5);
        let sub = embedded_even_subgroup(5, &[0, 1, 2, 3]);
        let cosets = left_cosets(&ambient, &sub);
        assert_eq!(cosets.blocks.len(), 5);
        let mut all: Vec<usize> = cosets.blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..60).collect::<Vec<_>>());
        for (b, block) in cosets.blocks.iter().enumerate() {
            let rep = cosets.representatives[b];
            assert_eq!(block[0], rep);
            assert_eq!(block.iter().min(), Some(&rep));
        }
    }

    #[test]
    fn klein_groups_are_subgroups_of_the_even_permutations() {
        for group in [klein_group_0123(), klein_group_1234()] {
            for a in &group {
                assert!(a.is_even());
                for b in &group {
                    assert!(group.contains(&a.compose(b)));
                }
            }
        }
    }

    #[test]
    fn embedded_even_subgroup_fixes_the_complement() {
        let sub = embedded_even_subgroup(6, &[1, 3, 4, 5]);
        assert_eq!(sub.len(), 12);
        for p in &sub {
            assert!(p.is_even());
            assert_eq!(p.apply(0), 0);
            assert_eq!(p.apply(2), 2);
        }
    }

    // ── Properties ─────────────────────────────────────────────────────────

    proptest! {
        #[test]
        fn prop_rank_roundtrip(n in 2usize..=7, seed in 0usize..5040) {
            let rank = seed % factorial(n);
            let p = Permutation::from_lehmer_rank(n, rank);
            prop_assert_eq!(p.lehmer_rank(), rank);
        }

        #[test]
        fn prop_inverse_rank_is_a_bijection(n in 2usize..=6, seed in 0usize..720) {
            let rank = seed % factorial(n);
            let p = Permutation::from_lehmer_rank(n, rank);
            let q = p.inverse().inverse();
            prop_assert_eq!(p, q);
        }

        #[test]
        fn prop_support_matches_cycles(n in 2usize..=6, seed in 0usize..720) {
            let p = Permutation::from_lehmer_rank(n, seed % factorial(n));
            let from_cycles: usize = p.cycles().iter().map(Vec::len).sum();
            prop_assert_eq!(p.support().len(), from_cycles);
        }
    }
}
