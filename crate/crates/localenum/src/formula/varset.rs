//! Dense variable sets over `1..=n`.

use std::cmp::Ordering;
use std::fmt;

/// A subset of the variables `1..=n`, stored as a fixed-width bitset.
///
/// Used for assignments-as-sets (the variables set to 1), transversals,
/// ball centers, and node labels. The word width is fixed at construction
/// from the ambient variable count, so sets drawn from the same formula
/// compare and hash cheaply.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VarSet {
    words: Vec<u64>,
}

impl VarSet {
    /// Empty set with capacity for variables `1..=n`.
    pub fn empty(n: usize) -> Self {
        VarSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn from_vars<I: IntoIterator<Item = u32>>(n: usize, vars: I) -> Self {
        let mut s = VarSet::empty(n);
        for v in vars {
            s.insert(v);
        }
        s
    }

    /// Full set `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        VarSet::from_vars(n, 1..=n as u32)
    }

    #[inline]
    fn slot(v: u32) -> (usize, u64) {
        debug_assert!(v >= 1, "variables are 1-based");
        let idx = (v - 1) as usize;
        (idx / 64, 1u64 << (idx % 64))
    }

    #[inline]
    pub fn insert(&mut self, v: u32) {
        let (w, b) = Self::slot(v);
        debug_assert!(w < self.words.len(), "variable {v} out of capacity");
        self.words[w] |= b;
    }

    #[inline]
    pub fn remove(&mut self, v: u32) {
        let (w, b) = Self::slot(v);
        self.words[w] &= !b;
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        let (w, b) = Self::slot(v);
        w < self.words.len() && self.words[w] & b != 0
    }

    /// Cardinality.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset_of(&self, other: &VarSet) -> bool {
        debug_assert_eq!(self.words.len(), other.words.len());
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Symmetric difference, used to translate between a ball center and
    /// the all-zeros coordinate frame.
    pub fn symmetric_difference(&self, other: &VarSet) -> VarSet {
        debug_assert_eq!(self.words.len(), other.words.len());
        VarSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    /// Hamming distance `|self Δ other|`.
    pub fn distance(&self, other: &VarSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros();
                    bits &= bits - 1;
                    Some(wi as u32 * 64 + tz + 1)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }
}

impl PartialOrd for VarSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the ascending member sequence, for stable output order.
impl Ord for VarSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
