//! Exact combinatorics of the set-partition lattice.
//!
//! A partition of `{1..n}` splits the ground set into disjoint nonempty
//! blocks. The lattice of all such partitions, ordered by refinement, drives
//! every cumulant formula in this crate: moment products are indexed by
//! partitions, and the inversion coefficients are the Möbius values
//! `μ(π, 1̂) = (−1)^{|π|−1} (|π|−1)!`.
//!
//! Enumeration is by restricted growth strings, which gives a canonical,
//! reproducible order. Everything here is exact integer arithmetic.

use crate::error::{Error, Result};

/// Largest ground-set size accepted by the enumerators (`Bell(12) ≈ 4.2·10⁶`).
pub const MAX_ENUMERATION_N: usize = 12;

/// A partition of `{1..n}` into disjoint nonempty blocks.
///
/// Blocks are stored sorted ascending and ordered by their minimum, so two
/// equal partitions compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Builds a partition from explicit blocks, validating that they are
    /// nonempty, pairwise disjoint and cover `{1..n}` exactly.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("ground set must be nonempty".into()));
        }
        let mut seen = vec![false; n + 1];
        let mut covered = 0usize;
        let mut sorted: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
        for block in blocks {
            if block.is_empty() {
                return Err(Error::InvalidInput("empty block".into()));
            }
            let mut b = block;
            b.sort_unstable();
            for &x in &b {
                if x == 0 || x > n {
                    return Err(Error::InvalidInput(format!(
                        "element {x} outside the ground set 1..={n}"
                    )));
                }
                if seen[x] {
                    return Err(Error::InvalidInput(format!("element {x} repeated")));
                }
                seen[x] = true;
                covered += 1;
            }
            sorted.push(b);
        }
        if covered != n {
            return Err(Error::InvalidInput(format!(
                "blocks cover {covered} of {n} elements"
            )));
        }
        sorted.sort_by_key(|b| b[0]);
        Ok(Self { n, blocks: sorted })
    }

    fn from_rgs(rgs: &[usize]) -> Self {
        let nb = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); nb];
        for (i, &label) in rgs.iter().enumerate() {
            blocks[label].push(i + 1);
        }
        // RGS labels appear in first-use order, so blocks are already sorted
        // by their minimum.
        Self {
            n: rgs.len(),
            blocks,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks `|π|`.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Minimum element of every block, in block order.
    pub fn block_minima(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b[0]).collect()
    }

    /// Möbius value `μ(π, 1̂_n) = (−1)^{|π|−1} (|π|−1)!`.
    ///
    /// This is the standard top-interval value forced by
    /// `κ₂ = m₂ − m₁²` (two singletons must carry −1).
    pub fn mobius_to_top(&self) -> i64 {
        let p = self.block_count();
        let sign = if (p - 1).is_multiple_of(2) { 1 } else { -1 };
        sign * factorial_i64(p - 1)
    }

    /// Block-size multiplicity vector `λ(π)`.
    pub fn partition_type(&self) -> PartitionType {
        let mut mult = vec![0usize; self.n];
        for b in &self.blocks {
            mult[b.len() - 1] += 1;
        }
        PartitionType {
            n: self.n,
            multiplicities: mult,
        }
    }

    /// Indicator of block minima: entry `i` (0-based, element `i+1`) is true
    /// iff that element is the smallest of its block. Exactly `|π|` entries
    /// are set and the first is always set.
    pub fn block_min_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        for b in &self.blocks {
            mask[b[0] - 1] = true;
        }
        mask
    }
}

impl std::fmt::Display for SetPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

/// The type `λ = 1^{k₁} 2^{k₂} ⋯ n^{k_n}` of a partition: `k_j` blocks of
/// size `j`, with `Σ j·k_j = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionType {
    n: usize,
    multiplicities: Vec<usize>,
}

impl PartitionType {
    pub fn new(n: usize, multiplicities: Vec<usize>) -> Result<Self> {
        if multiplicities.len() != n {
            return Err(Error::InvalidInput(format!(
                "expected {n} multiplicities, got {}",
                multiplicities.len()
            )));
        }
        let weighted: usize = multiplicities
            .iter()
            .enumerate()
            .map(|(i, &k)| (i + 1) * k)
            .sum();
        if weighted != n {
            return Err(Error::InvalidInput(format!(
                "block sizes sum to {weighted}, expected {n}"
            )));
        }
        Ok(Self { n, multiplicities })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `k_j` for `j = 1..n` (index 0 holds `k₁`).
    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Total number of blocks `Σ k_j`.
    pub fn block_count(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Number of set partitions of this type:
    /// `n! / (∏ (j!)^{k_j} · ∏ k_j!)`, exactly.
    pub fn faa_di_bruno_count(&self) -> u64 {
        let mut denom: u128 = 1;
        for (i, &k) in self.multiplicities.iter().enumerate() {
            let j = i + 1;
            denom *= factorial_u128(j).pow(k as u32);
            denom *= factorial_u128(k);
        }
        (factorial_u128(self.n) / denom) as u64
    }
}

/// All partitions of this type, as integer parts sorted descending
/// (convenience for iterating `λ ⊢ n`).
pub fn partition_types(n: usize) -> Result<Vec<PartitionType>> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return Err(Error::SizeLimit {
            n,
            max: MAX_ENUMERATION_N,
        });
    }
    let mut out = Vec::new();
    let mut mult = vec![0usize; n];
    fn rec(remaining: usize, largest: usize, mult: &mut Vec<usize>, out: &mut Vec<PartitionType>, n: usize) {
        if remaining == 0 {
            out.push(PartitionType {
                n,
                multiplicities: mult.clone(),
            });
            return;
        }
        for part in (1..=largest.min(remaining)).rev() {
            mult[part - 1] += 1;
            rec(remaining - part, part, mult, out, n);
            mult[part - 1] -= 1;
        }
    }
    rec(n, n, &mut mult, &mut out, n);
    Ok(out)
}

/// Streaming enumeration of `Π_n` in restricted-growth-string order.
pub struct PartitionIter {
    rgs: Vec<usize>,
    maxes: Vec<usize>,
    done: bool,
    started: bool,
}

impl PartitionIter {
    fn new(n: usize) -> Self {
        Self {
            rgs: vec![0; n],
            maxes: vec![0; n],
            done: false,
            started: false,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.rgs.len();
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.rgs[i] <= self.maxes[i - 1] {
                self.rgs[i] += 1;
                self.maxes[i] = self.maxes[i - 1].max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.maxes[j] = self.maxes[j - 1];
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for PartitionIter {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(SetPartition::from_rgs(&self.rgs));
        }
        if self.advance() {
            Some(SetPartition::from_rgs(&self.rgs))
        } else {
            self.done = true;
            None
        }
    }
}

/// Iterator over all partitions of `{1..n}` in restricted-growth-string
/// order. Errors when `n` is outside `1..=12`.
pub fn partition_iter(n: usize) -> Result<PartitionIter> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return Err(Error::SizeLimit {
            n,
            max: MAX_ENUMERATION_N,
        });
    }
    Ok(PartitionIter::new(n))
}

/// All partitions of `{1..n}`, materialized; length is the Bell number.
pub fn enumerate_partitions(n: usize) -> Result<Vec<SetPartition>> {
    Ok(partition_iter(n)?.collect())
}

/// An interleaving of several decks: deck `d` of size `deck_sizes[d]` is
/// placed on the (strictly increasing) positions `placements[d]`, and the
/// placement sets partition `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shuffle {
    deck_sizes: Vec<usize>,
    placements: Vec<Vec<usize>>,
}

impl Shuffle {
    pub fn deck_sizes(&self) -> &[usize] {
        &self.deck_sizes
    }

    pub fn placements(&self) -> &[Vec<usize>] {
        &self.placements
    }

    /// Total number of positions.
    pub fn n(&self) -> usize {
        self.deck_sizes.iter().sum()
    }

    /// The partition whose blocks are the (nonempty) placement sets.
    pub fn to_partition(&self) -> SetPartition {
        let blocks: Vec<Vec<usize>> = self
            .placements
            .iter()
            .filter(|p| !p.is_empty())
            .cloned()
            .collect();
        SetPartition::new(self.n(), blocks).expect("placements partition the position set")
    }
}

/// All shuffles of decks with the given sizes, ordered lexicographically by
/// placement sets. Zero-size decks are allowed and occupy no positions.
/// The count equals the multinomial coefficient `(n; deck_sizes)`.
pub fn enumerate_shuffles(deck_sizes: &[usize]) -> Result<Vec<Shuffle>> {
    let n: usize = deck_sizes.iter().sum();
    if deck_sizes.is_empty() || n == 0 || n > MAX_ENUMERATION_N {
        return Err(Error::SizeLimit {
            n,
            max: MAX_ENUMERATION_N,
        });
    }
    let positions: Vec<usize> = (1..=n).collect();
    let mut out = Vec::with_capacity(multinomial(deck_sizes) as usize);
    let mut chosen: Vec<Vec<usize>> = Vec::with_capacity(deck_sizes.len());
    fill_decks(deck_sizes, 0, &positions, &mut chosen, &mut out);
    Ok(out)
}

fn fill_decks(
    sizes: &[usize],
    deck: usize,
    remaining: &[usize],
    chosen: &mut Vec<Vec<usize>>,
    out: &mut Vec<Shuffle>,
) {
    if deck == sizes.len() {
        out.push(Shuffle {
            deck_sizes: sizes.to_vec(),
            placements: chosen.clone(),
        });
        return;
    }
    let k = sizes[deck];
    let mut combo = Vec::with_capacity(k);
    choose_rec(remaining, k, 0, &mut combo, &mut |combo| {
        let rest: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|p| !combo.contains(p))
            .collect();
        chosen.push(combo.to_vec());
        fill_decks(sizes, deck + 1, &rest, chosen, out);
        chosen.pop();
    });
}

fn choose_rec(
    pool: &[usize],
    k: usize,
    start: usize,
    combo: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if combo.len() == k {
        visit(combo);
        return;
    }
    let need = k - combo.len();
    for i in start..=pool.len().saturating_sub(need) {
        combo.push(pool[i]);
        choose_rec(pool, k, i + 1, combo, visit);
        combo.pop();
    }
}

/// Multinomial coefficient `n! / ∏ sizes_i!` for `n = Σ sizes_i ≤ 12`.
pub fn multinomial(sizes: &[usize]) -> u64 {
    let n: usize = sizes.iter().sum();
    let mut denom: u128 = 1;
    for &s in sizes {
        denom *= factorial_u128(s);
    }
    (factorial_u128(n) / denom) as u64
}

fn factorial_i64(k: usize) -> i64 {
    (1..=k as i64).product::<i64>().max(1)
}

fn factorial_u128(k: usize) -> u128 {
    (1..=k as u128).product::<u128>().max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent Bell-number oracle (Bell triangle recursion).
    fn bell_numbers(upto: usize) -> Vec<u64> {
        let mut bells = vec![1u64];
        let mut row = vec![1u64];
        for _ in 1..=upto {
            let mut next = Vec::with_capacity(row.len() + 1);
            next.push(*row.last().unwrap());
            for &x in &row {
                let last = *next.last().unwrap();
                next.push(last + x);
            }
            bells.push(next[0]);
            row = next;
        }
        bells
    }

    /// Independent recursive construction: insert element n into each block
    /// of a partition of n-1, or as a new singleton.
    fn brute_force_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
        if n == 1 {
            return vec![vec![vec![1]]];
        }
        let mut out = Vec::new();
        for p in brute_force_partitions(n - 1) {
            for i in 0..p.len() {
                let mut q = p.clone();
                q[i].push(n);
                out.push(q);
            }
            let mut q = p.clone();
            q.push(vec![n]);
            out.push(q);
        }
        out
    }

    #[test]
    fn enumeration_counts_match_bell_numbers() {
        let bells = bell_numbers(8);
        for (n, &bell) in bells.iter().enumerate().skip(1) {
            let parts = enumerate_partitions(n).unwrap();
            assert_eq!(parts.len() as u64, bell, "n={n}");
        }
    }

    #[test]
    fn enumeration_matches_brute_force_construction() {
        for n in 1..=6 {
            let mut ours: Vec<SetPartition> = enumerate_partitions(n).unwrap();
            let mut brute: Vec<SetPartition> = brute_force_partitions(n)
                .into_iter()
                .map(|blocks| SetPartition::new(n, blocks).unwrap())
                .collect();
            ours.sort_by_key(|p| format!("{p}"));
            brute.sort_by_key(|p| format!("{p}"));
            assert_eq!(ours, brute, "n={n}");
        }
    }

    #[test]
    fn rgs_order_is_deterministic() {
        let parts = enumerate_partitions(3).unwrap();
        let rendered: Vec<String> = parts.iter().map(|p| format!("{p}")).collect();
        assert_eq!(rendered, vec!["1,2,3", "1,2|3", "1,3|2", "1|2,3", "1|2|3"]);
    }

    #[test]
    fn single_element_has_one_partition() {
        let parts = enumerate_partitions(1).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].blocks(), &[vec![1]]);
    }

    #[test]
    fn enumeration_bound_is_enforced() {
        assert!(matches!(
            enumerate_partitions(13),
            Err(Error::SizeLimit { n: 13, max: 12 })
        ));
        assert!(enumerate_partitions(0).is_err());
    }

    #[test]
    fn mobius_values() {
        let top = SetPartition::new(4, vec![vec![1, 2, 3, 4]]).unwrap();
        assert_eq!(top.mobius_to_top(), 1);
        let two_singletons = SetPartition::new(2, vec![vec![1], vec![2]]).unwrap();
        // forced by kappa_2 = m_2 - m_1^2
        assert_eq!(two_singletons.mobius_to_top(), -1);
        let four_singletons =
            SetPartition::new(4, vec![vec![1], vec![2], vec![3], vec![4]]).unwrap();
        assert_eq!(four_singletons.mobius_to_top(), -6);
    }

    #[test]
    fn type_of_examples() {
        let p = SetPartition::new(4, vec![vec![1, 3], vec![2], vec![4]]).unwrap();
        assert_eq!(p.partition_type().multiplicities(), &[2, 1, 0, 0]);
        let top5 = SetPartition::new(5, vec![vec![1, 2, 3, 4, 5]]).unwrap();
        assert_eq!(top5.partition_type().multiplicities(), &[0, 0, 0, 0, 1]);
        let bottom3 = SetPartition::new(3, vec![vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(bottom3.partition_type().multiplicities(), &[3, 0, 0]);
    }

    #[test]
    fn faa_di_bruno_counts_match_enumeration() {
        // all-singletons type is realized by exactly one partition
        let lam = PartitionType::new(5, vec![5, 0, 0, 0, 0]).unwrap();
        assert_eq!(lam.faa_di_bruno_count(), 1);

        // frozen values checked against direct enumeration of Pi_4
        let pairs = PartitionType::new(4, vec![0, 2, 0, 0]).unwrap();
        assert_eq!(pairs.faa_di_bruno_count(), 3);
        let mixed = PartitionType::new(4, vec![2, 1, 0, 0]).unwrap();
        assert_eq!(mixed.faa_di_bruno_count(), 6);

        for n in 1..=8 {
            for lam in partition_types(n).unwrap() {
                let count = enumerate_partitions(n)
                    .unwrap()
                    .iter()
                    .filter(|p| p.partition_type() == lam)
                    .count() as u64;
                assert_eq!(lam.faa_di_bruno_count(), count, "n={n} lambda={lam:?}");
            }
        }
    }

    #[test]
    fn type_sum_rule_holds() {
        for n in 1..=8 {
            let total: u64 = partition_types(n)
                .unwrap()
                .iter()
                .map(|l| l.faa_di_bruno_count())
                .sum();
            assert_eq!(total, enumerate_partitions(n).unwrap().len() as u64);
        }
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(enumerate_shuffles(&[4, 0]).unwrap().len(), 1);
        assert_eq!(enumerate_shuffles(&[2, 1]).unwrap().len(), 3);
        assert_eq!(enumerate_shuffles(&[2, 2]).unwrap().len(), 6);
        for sizes in [vec![3, 2], vec![1, 1, 2], vec![2, 3, 3]] {
            let shuffles = enumerate_shuffles(&sizes).unwrap();
            assert_eq!(shuffles.len() as u64, multinomial(&sizes));
        }
    }

    #[test]
    fn shuffle_to_partition_examples() {
        let lone = enumerate_shuffles(&[3, 0]).unwrap();
        assert_eq!(lone[0].to_partition().blocks(), &[vec![1, 2, 3]]);

        let pairs = enumerate_shuffles(&[1, 1]).unwrap();
        let split = pairs
            .iter()
            .find(|s| s.placements() == [vec![1], vec![2]])
            .unwrap();
        assert_eq!(split.to_partition().block_count(), 2);
    }

    #[test]
    fn shuffle_fibers_have_size_prod_kj_factorial() {
        // For lambda = 2^2, exactly k_2! = 2 shuffles map to each pair-pair
        // partition.
        use std::collections::HashMap;
        let mut fibers: HashMap<SetPartition, usize> = HashMap::new();
        for s in enumerate_shuffles(&[2, 2]).unwrap() {
            *fibers.entry(s.to_partition()).or_insert(0) += 1;
        }
        assert_eq!(fibers.len(), 3);
        assert!(fibers.values().all(|&c| c == 2));
    }

    #[test]
    fn shuffle_fibers_cover_each_type_uniformly() {
        // for every type, shuffle_to_partition is (prod k_j!)-to-1 onto the
        // partitions of that type
        use std::collections::HashMap;
        for n in 1..=5 {
            for lam in partition_types(n).unwrap() {
                let sizes: Vec<usize> = lam
                    .multiplicities()
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &k)| std::iter::repeat_n(i + 1, k))
                    .collect();
                let mut fibers: HashMap<SetPartition, usize> = HashMap::new();
                for s in enumerate_shuffles(&sizes).unwrap() {
                    *fibers.entry(s.to_partition()).or_insert(0) += 1;
                }
                let fiber_size: usize = lam
                    .multiplicities()
                    .iter()
                    .map(|&k| (1..=k).product::<usize>().max(1))
                    .product();
                assert_eq!(fibers.len() as u64, lam.faa_di_bruno_count(), "{lam:?}");
                assert!(fibers.values().all(|&c| c == fiber_size), "{lam:?}");
                for pi in fibers.keys() {
                    assert_eq!(pi.partition_type(), lam);
                }
            }
        }
    }

    #[test]
    fn block_min_mask_examples() {
        let bottom = SetPartition::new(4, vec![vec![1], vec![2], vec![3], vec![4]]).unwrap();
        assert_eq!(bottom.block_min_mask(), vec![true; 4]);
        let top = SetPartition::new(4, vec![vec![1, 2, 3, 4]]).unwrap();
        assert_eq!(top.block_min_mask(), vec![true, false, false, false]);
        let interleaved = SetPartition::new(4, vec![vec![1, 3], vec![2, 4]]).unwrap();
        assert_eq!(interleaved.block_min_mask(), vec![true, true, false, false]);
    }

    #[test]
    fn block_min_mask_counts_blocks_and_starts_with_one() {
        for n in 1..=7 {
            for p in enumerate_partitions(n).unwrap() {
                let mask = p.block_min_mask();
                assert!(mask[0]);
                assert_eq!(mask.iter().filter(|&&b| b).count(), p.block_count());
            }
        }
    }

    #[test]
    fn invalid_partitions_are_rejected() {
        assert!(SetPartition::new(3, vec![vec![1, 2]]).is_err());
        assert!(SetPartition::new(3, vec![vec![1, 2], vec![2, 3]]).is_err());
        assert!(SetPartition::new(3, vec![vec![1, 2, 3], vec![]]).is_err());
        assert!(SetPartition::new(2, vec![vec![1, 2, 3]]).is_err());
    }

    #[test]
    fn full_enumeration_bound_count() {
        // Bell(12), via the streaming iterator.
        let count = partition_iter(12).unwrap().count();
        assert_eq!(count, 4_213_597);
    }
}
