//! Ordered block partitions of `{0, .., n-1}` and Koszul signs.
//!
//! Positions are zero-based throughout; a block is a strictly increasing
//! list of positions. Letter degrees are always taken in the grading of
//! the coalgebra that hosts the word.

use crate::error::{Error, Result};

/// An ordered partition of `{0, .., n-1}` into nonempty sorted blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl BlockPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &blocks {
            if b.is_empty() || b.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config(format!("block {b:?} is empty or unsorted")));
            }
            for &i in b {
                if i >= n || seen[i] {
                    return Err(Error::Config(format!("blocks do not partition 0..{n}")));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Config(format!("blocks do not cover 0..{n}")));
        }
        Ok(Self { n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Concatenation of the blocks: the image order of the shuffle.
    pub fn flattened(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }

    /// True when the block maxima strictly increase.
    pub fn is_respectful(&self) -> bool {
        self.blocks
            .windows(2)
            .all(|w| w[0].last() < w[1].last())
    }
}

/// Iterates over all assignments of `n` positions to `j` labelled blocks,
/// with every block nonempty. Assignments come in lexicographic order of the
/// label vector, which is deterministic.
fn labelled_surjections(n: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if j == 0 || j > n {
        return out;
    }
    let mut labels = vec![0usize; n];
    loop {
        let mut counts = vec![0usize; j];
        for &l in &labels {
            counts[l] += 1;
        }
        if counts.iter().all(|&c| c > 0) {
            out.push(labels.clone());
        }
        // odometer increment
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            labels[k] += 1;
            if labels[k] < j {
                break;
            }
            labels[k] = 0;
        }
    }
}

fn blocks_from_labels(labels: &[usize], j: usize) -> Vec<Vec<usize>> {
    let mut blocks = vec![Vec::new(); j];
    for (pos, &l) in labels.iter().enumerate() {
        blocks[l].push(pos);
    }
    blocks
}

/// All ordered partitions of `0..n` into exactly `j` nonempty blocks,
/// sorted lexicographically by block contents.
pub fn ordered_partitions(n: usize, j: usize) -> Vec<BlockPartition> {
    let mut out: Vec<BlockPartition> = labelled_surjections(n, j)
        .iter()
        .map(|l| BlockPartition {
            n,
            blocks: blocks_from_labels(l, j),
        })
        .collect();
    out.sort();
    out
}

/// Ordered pairs `(I, J)` of nonempty complementary subsets of `0..n`.
pub fn two_block_partitions(n: usize) -> Result<Vec<BlockPartition>> {
    if n < 1 {
        return Err(Error::EmptyWord);
    }
    Ok(ordered_partitions(n, 2))
}

/// Ordered partitions into `j` nonempty blocks whose maxima increase.
///
/// There is exactly one such ordering per unordered set partition, so the
/// count is the Stirling number of the second kind `S(n, j)`.
pub fn respectful_partitions(n: usize, j: usize) -> Vec<BlockPartition> {
    let mut out = Vec::new();
    if j == 0 || j > n {
        return out;
    }
    // Restricted growth strings enumerate set partitions; ordering the
    // blocks by their maxima gives the respectful representative.
    let mut rgs = vec![0usize; n];
    fn rec(pos: usize, max_label: usize, rgs: &mut Vec<usize>, j: usize, out: &mut Vec<BlockPartition>) {
        let n = rgs.len();
        if pos == n {
            if max_label + 1 == j {
                let mut blocks = blocks_from_labels(rgs, j);
                blocks.sort_by_key(|b| *b.last().unwrap());
                out.push(BlockPartition { n, blocks });
            }
            return;
        }
        let limit = (max_label + 1).min(j - 1);
        for l in 0..=limit {
            // remaining positions must still be able to open the missing blocks
            let new_max = max_label.max(l);
            if j - 1 - new_max > n - pos - 1 {
                continue;
            }
            rgs[pos] = l;
            rec(pos + 1, new_max, rgs, j, out);
        }
    }
    if n == 0 {
        return out;
    }
    rgs[0] = 0;
    rec(1, 0, &mut rgs, j, &mut out);
    out.sort();
    out
}

/// Letter degrees of a word, in the hosting coalgebra's grading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignContext {
    degrees: Vec<i64>,
}

impl SignContext {
    pub fn new(degrees: Vec<i64>) -> Self {
        Self { degrees }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// Sum of the degrees at the given positions.
    pub fn degree_of(&self, positions: &[usize]) -> i64 {
        positions.iter().map(|&p| self.degrees[p]).sum()
    }
}

#[inline]
fn odd(d: i64) -> bool {
    d.rem_euclid(2) == 1
}

/// Koszul sign of rearranging letters of the given degrees into `order`
/// (a permutation of `0..degrees.len()`, listing old positions in their new
/// order).
pub fn permutation_sign(degrees: &[i64], order: &[usize]) -> i32 {
    let mut sign = 1;
    for a in 0..order.len() {
        for b in (a + 1)..order.len() {
            let (p, q) = (order[a], order[b]);
            if p > q && odd(degrees[p]) && odd(degrees[q]) {
                sign = -sign;
            }
        }
    }
    sign
}

/// The shuffle sign `eps_x(I_1, .., I_j)`.
pub fn koszul_sign(ctx: &SignContext, p: &BlockPartition) -> Result<i32> {
    if ctx.len() != p.n() {
        return Err(Error::LengthMismatch {
            context: ctx.len(),
            partition: p.n(),
        });
    }
    Ok(permutation_sign(ctx.degrees(), &p.flattened()))
}

/// Sign attached to applying a map of degree `q` to the letters at
/// `positions` (sorted, nonempty) of a tensor word, with the result put in
/// the slot of the last extracted letter.
///
/// It is the Koszul sign of carrying the degree-`q` symbol from the front
/// of the word up to that slot, past the letters that stay in front of it,
/// while the extracted letters are gathered just behind it.
pub fn epsilon_insertion(ctx: &SignContext, positions: &[usize], q: i64) -> Result<i32> {
    let n = ctx.len();
    if positions.is_empty() || positions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!(
            "extraction positions {positions:?} must be nonempty and increasing"
        )));
    }
    let last = *positions.last().unwrap();
    if last >= n {
        return Err(Error::LengthMismatch {
            context: n,
            partition: last + 1,
        });
    }
    // augmented word: symbol at index 0, letters shifted by one
    let mut degrees = Vec::with_capacity(n + 1);
    degrees.push(q);
    degrees.extend_from_slice(ctx.degrees());
    let mut order = Vec::with_capacity(n + 1);
    order.extend((0..last).filter(|i| positions.binary_search(i).is_err()).map(|i| i + 1));
    order.push(0);
    order.extend(positions.iter().map(|&i| i + 1));
    order.extend(((last + 1)..n).map(|i| i + 1));
    Ok(permutation_sign(&degrees, &order))
}

/// Sorts the letters of a graded-commutative monomial into canonical order
/// (by `(degree, index)`), returning the sorted letters and the Koszul sign,
/// or `None` when a letter of odd degree is repeated.
pub fn canonicalize_symmetric(letters: &[usize], degrees: &[i64]) -> Option<(Vec<usize>, i32)> {
    let mut order: Vec<usize> = (0..letters.len()).collect();
    order.sort_by_key(|&p| (degrees[letters[p]], letters[p], p));
    let sorted: Vec<usize> = order.iter().map(|&p| letters[p]).collect();
    for w in sorted.windows(2) {
        if w[0] == w[1] && odd(degrees[w[0]]) {
            return None;
        }
    }
    let letter_degrees: Vec<i64> = letters.iter().map(|&l| degrees[l]).collect();
    Some((sorted, permutation_sign(&letter_degrees, &order)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subsets_oracle(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut out = Vec::new();
        for mask in 1..(1u32 << n) - 1 {
            let i: Vec<usize> = (0..n).filter(|k| mask & (1 << k) != 0).collect();
            let j: Vec<usize> = (0..n).filter(|k| mask & (1 << k) == 0).collect();
            out.push((i, j));
        }
        out.sort();
        out
    }

    #[test]
    fn two_block_counts_and_contents() {
        assert!(two_block_partitions(0).is_err());
        assert!(two_block_partitions(1).unwrap().is_empty());
        let two: Vec<_> = two_block_partitions(2)
            .unwrap()
            .into_iter()
            .map(|p| p.blocks().to_vec())
            .collect();
        assert_eq!(two, vec![vec![vec![0], vec![1]], vec![vec![1], vec![0]]]);
        for n in 1..=6 {
            let got: Vec<(Vec<usize>, Vec<usize>)> = two_block_partitions(n)
                .unwrap()
                .into_iter()
                .map(|p| (p.blocks()[0].clone(), p.blocks()[1].clone()))
                .collect();
            assert_eq!(got, subsets_oracle(n));
            assert_eq!(got.len(), (1 << n) - 2);
        }
    }

    #[test]
    fn respectful_examples() {
        let got: Vec<_> = respectful_partitions(3, 2)
            .into_iter()
            .map(|p| p.blocks().to_vec())
            .collect();
        // oracle: filter all ordered 2-block partitions by increasing maxima
        let want: Vec<_> = two_block_partitions(3)
            .unwrap()
            .into_iter()
            .filter(|p| p.blocks()[0].last() < p.blocks()[1].last())
            .map(|p| p.blocks().to_vec())
            .collect();
        assert_eq!(got, want);
        assert_eq!(
            got,
            vec![
                vec![vec![0], vec![1, 2]],
                vec![vec![0, 1], vec![2]],
                vec![vec![1], vec![0, 2]],
            ]
        );
        let single = respectful_partitions(4, 1);
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].blocks(), &[vec![0, 1, 2, 3]]);
        assert_eq!(respectful_partitions(4, 2).len(), 7);
        assert!(respectful_partitions(2, 3).is_empty());
    }

    #[test]
    fn respectful_matches_filtered_ordered_partitions() {
        for n in 1..=6 {
            for j in 1..=n {
                let want: Vec<_> = ordered_partitions(n, j)
                    .into_iter()
                    .filter(BlockPartition::is_respectful)
                    .collect();
                assert_eq!(respectful_partitions(n, j), want, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn koszul_sign_examples() {
        let p = BlockPartition::new(2, vec![vec![1], vec![0]]).unwrap();
        assert_eq!(koszul_sign(&SignContext::new(vec![1, 1]), &p).unwrap(), -1);
        assert_eq!(koszul_sign(&SignContext::new(vec![2, 0]), &p).unwrap(), 1);
        // n = 3, ({2},{1,3}) in one-based notation: only letter 2 crosses letter 1
        let p = BlockPartition::new(3, vec![vec![1], vec![0, 2]]).unwrap();
        for d1 in 0..2 {
            for d2 in 0..2 {
                for d3 in 0..2 {
                    let s = koszul_sign(&SignContext::new(vec![d1, d2, d3]), &p).unwrap();
                    assert_eq!(s, if d1 * d2 % 2 == 1 { -1 } else { 1 });
                }
            }
        }
        assert!(koszul_sign(&SignContext::new(vec![1]), &p).is_err());
    }

    #[test]
    fn insertion_signs() {
        // first letter: the symbol crosses nothing
        let ctx = SignContext::new(vec![3, 1, 2]);
        assert_eq!(epsilon_insertion(&ctx, &[0], 1).unwrap(), 1);
        // symbol of degree 1 crossing the first letter
        for d in -2..3 {
            let ctx = SignContext::new(vec![d, 5]);
            let want = if d.rem_euclid(2) == 1 { -1 } else { 1 };
            assert_eq!(epsilon_insertion(&ctx, &[1], 1).unwrap(), want);
        }
    }

    #[test]
    fn insertion_pair_matches_brute_force() {
        // symbol of degree q moves past x_a (a not extracted, a < j), and
        // x_i moves right past the letters strictly between i and j.
        let degs = [1i64, 0, 1, 1, 2];
        let ctx = SignContext::new(degs.to_vec());
        for q in 0..2 {
            for i in 0..5 {
                for j in (i + 1)..5 {
                    let mut exponent = 0;
                    for a in 0..j {
                        if a != i {
                            exponent += q * degs[a];
                        }
                    }
                    for a in (i + 1)..j {
                        exponent += degs[i] * degs[a];
                    }
                    let want = if exponent % 2 == 0 { 1 } else { -1 };
                    assert_eq!(epsilon_insertion(&ctx, &[i, j], q).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn canonical_symmetric_words() {
        let degrees = [1, 0, 1];
        assert_eq!(canonicalize_symmetric(&[0, 0], &degrees), None);
        assert_eq!(canonicalize_symmetric(&[1, 1], &degrees), Some((vec![1, 1], 1)));
        assert_eq!(canonicalize_symmetric(&[2, 0], &degrees), Some((vec![0, 2], -1)));
        assert_eq!(canonicalize_symmetric(&[2, 1, 0], &degrees), Some((vec![1, 0, 2], -1)));
    }
}
