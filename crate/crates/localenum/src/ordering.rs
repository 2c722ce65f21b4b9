//! Clause ordering and tree-edge ordering.
//!
//! The canonical clause ordering puts a greedily-maximal set of pairwise
//! variable-disjoint monotone width-3 clauses first (the *disjoint
//! prefix*), so the first `m` levels of every transversal tree are
//! developed by the same disjoint clauses. The general mode adds a second
//! tier holding the remaining monotone width-3 clauses. Tree edges at each
//! node are ordered either lexicographically or by a per-node seeded
//! permutation that is uniform and independent across nodes.

use crate::formula::{CnfFormula, VarSet};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum OrderingMode {
    /// Disjoint prefix first, remaining clauses in input order.
    MonotoneCanonical,
    /// Disjoint prefix, then remaining monotone width-3 clauses, then the
    /// rest; branch selection below the prefix avoids prefix variables
    /// that already appeared twice in the current shoot.
    GeneralCanonical,
    /// Input order, no prefix.
    AsGiven,
}

/// A permutation of clause indices plus the disjoint-prefix metadata.
#[derive(Clone, Debug)]
pub struct ClauseOrdering {
    permutation: Vec<usize>,
    disjoint_prefix_len: usize,
    x_d: VarSet,
    mode: OrderingMode,
}

impl ClauseOrdering {
    /// Clause indices in search order.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Number of clauses in the disjoint prefix (`m`).
    pub fn disjoint_prefix_len(&self) -> usize {
        self.disjoint_prefix_len
    }

    /// Variables of the disjoint prefix (`X_D`).
    pub fn x_d(&self) -> &VarSet {
        &self.x_d
    }

    pub fn mode(&self) -> OrderingMode {
        self.mode
    }
}

/// Computes the clause ordering for `f` in the given mode.
///
/// The prefix is the greedy maximal set of pairwise-disjoint monotone
/// width-3 clauses, scanned by ascending clause index; greedy maximality
/// is all the analysis needs and keeps the ordering deterministic.
pub fn canonical_ordering(f: &CnfFormula, mode: OrderingMode) -> ClauseOrdering {
    let nc = f.num_clauses();
    if mode == OrderingMode::AsGiven {
        return ClauseOrdering {
            permutation: (0..nc).collect(),
            disjoint_prefix_len: 0,
            x_d: VarSet::empty(f.num_vars()),
            mode,
        };
    }

    let mut x_d = VarSet::empty(f.num_vars());
    let mut prefix = Vec::new();
    let mut in_prefix = vec![false; nc];
    for (ci, c) in f.clauses().iter().enumerate() {
        if c.width() == 3
            && c.is_monotone()
            && c.literals().iter().all(|l| !x_d.contains(l.var()))
        {
            prefix.push(ci);
            in_prefix[ci] = true;
            for l in c.literals() {
                x_d.insert(l.var());
            }
        }
    }

    let mut permutation = prefix.clone();
    match mode {
        OrderingMode::MonotoneCanonical => {
            permutation.extend((0..nc).filter(|&ci| !in_prefix[ci]));
        }
        OrderingMode::GeneralCanonical => {
            permutation.extend((0..nc).filter(|&ci| {
                !in_prefix[ci] && f.clauses()[ci].width() == 3 && f.clauses()[ci].is_monotone()
            }));
            permutation.extend((0..nc).filter(|&ci| {
                !in_prefix[ci] && !(f.clauses()[ci].width() == 3 && f.clauses()[ci].is_monotone())
            }));
        }
        OrderingMode::AsGiven => unreachable!(),
    }

    ClauseOrdering {
        permutation,
        disjoint_prefix_len: prefix.len(),
        x_d,
        mode,
    }
}

/// How child edges are ordered at each tree node.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeOrderPolicy {
    /// Ascending variable index everywhere.
    FixedLexicographic,
    /// Per-node uniform random permutation, a deterministic function of
    /// the seed and the node's path key.
    SeededRandom { seed: u64 },
}

impl EdgeOrderPolicy {
    pub fn seed(&self) -> Option<u64> {
        match self {
            EdgeOrderPolicy::FixedLexicographic => None,
            EdgeOrderPolicy::SeededRandom { seed } => Some(*seed),
        }
    }
}

// SplitMix64 finalizer. Used both to fold the node path key into a state
// and as the per-node permutation stream; cheap enough to run at every
// node and stable across platforms.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// Folds a node path key (the sequence of edge labels from the root) and a
/// seed into a single permutation-stream state.
#[inline]
pub(crate) fn node_stream_state(seed: u64, path: &[u32]) -> u64 {
    let mut state = mix64(seed ^ GOLDEN);
    for &v in path {
        state = mix64(state ^ (v as u64).wrapping_mul(GOLDEN));
    }
    state
}

/// Orders `vars` according to the policy. `path` identifies the node (the
/// root has the empty path); distinct nodes get independent permutations.
pub fn edge_permutation(vars: &[u32], policy: EdgeOrderPolicy, path: &[u32]) -> Vec<u32> {
    let mut out = vars.to_vec();
    match policy {
        EdgeOrderPolicy::FixedLexicographic => out.sort_unstable(),
        EdgeOrderPolicy::SeededRandom { seed } => {
            let mut state = node_stream_state(seed, path);
            // Fisher-Yates driven by the splitmix stream.
            for i in (1..out.len()).rev() {
                state = state.wrapping_add(GOLDEN);
                let j = (mix64(state) % (i as u64 + 1)) as usize;
                out.swap(i, j);
            }
        }
    }
    out
}
