//! Materializes small transversal trees and computes the quantities the
//! running-time analysis is built from: edge markings, shoot weights,
//! fullness, exact survival probabilities under random sibling orderings,
//! and their pessimistic per-marked-edge approximations. Monte Carlo runs
//! of the search engine cross-check the exact values.

use crate::bounds::LAMBDA;
use crate::formula::{CnfFormula, VarSet};
use crate::ordering::{ClauseOrdering, EdgeOrderPolicy};
use crate::search::{self, NodeClass, Residual, SearchError};
use num::rational::BigRational;
use num::traits::ToPrimitive;
use num::{BigInt, One, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub const DEFAULT_NODE_LIMIT: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("tree would exceed {limit} nodes")]
    NodeLimit { limit: usize },
    #[error(transparent)]
    Search(#[from] SearchError),
}

#[derive(Clone, Debug)]
pub struct TreeNode {
    pub parent: Option<usize>,
    pub depth: usize,
    /// Label of the edge from the parent (None at the root).
    pub edge_var: Option<u32>,
    /// Path variables from the root (the label `Q_v` without the dead
    /// marker).
    pub label: VarSet,
    /// The residual contains an empty clause; the node is a dead leaf.
    pub bot: bool,
    /// Children in canonical (clause-literal) order.
    pub children: Vec<usize>,
    /// Index of the clause developed at this node, if internal.
    pub clause: Option<usize>,
    /// For leaves at the depth cap: whether the label is a model.
    pub is_model: bool,
}

/// A fully materialized transversal tree built to a depth cap with a given
/// clause ordering. Children are stored unordered (canonically); the
/// random sibling ordering is integrated out by the survival computations.
#[derive(Clone, Debug)]
pub struct ExplicitTree {
    pub nodes: Vec<TreeNode>,
    pub n_vars: usize,
    pub depth_cap: usize,
    /// Disjoint-prefix length of the ordering used.
    pub m: usize,
    pub x_d: VarSet,
}

impl ExplicitTree {
    pub const ROOT: usize = 0;

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].children.is_empty())
    }

    /// Path node ids from the root to `node`, inclusive.
    pub fn path_to(&self, node: usize) -> Vec<usize> {
        let mut path = vec![node];
        let mut cur = node;
        while let Some(p) = self.nodes[cur].parent {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }
}

/// Builds the full (unpruned) transversal tree of `f` to depth
/// `depth_cap`, using the ordering's branch-selection rule. A node below
/// the cap whose residual is satisfied by all-zeros violates the promise
/// and aborts the construction.
pub fn build_tree(
    f: &CnfFormula,
    ordering: &ClauseOrdering,
    depth_cap: usize,
    node_limit: usize,
) -> Result<ExplicitTree, AnalysisError> {
    let mut res = Residual::new(f, ordering);
    let mut nodes: Vec<TreeNode> = Vec::new();

    fn grow(
        res: &mut Residual,
        nodes: &mut Vec<TreeNode>,
        parent: Option<usize>,
        edge_var: Option<u32>,
        depth_cap: usize,
        node_limit: usize,
    ) -> Result<usize, AnalysisError> {
        if nodes.len() >= node_limit {
            return Err(AnalysisError::NodeLimit { limit: node_limit });
        }
        let id = nodes.len();
        let depth = res.depth();
        nodes.push(TreeNode {
            parent,
            depth,
            edge_var,
            label: res.path_set(),
            bot: false,
            children: Vec::new(),
            clause: None,
            is_model: false,
        });
        match res.classify() {
            NodeClass::Dead => {
                nodes[id].bot = true;
            }
            NodeClass::AllZeroModel => {
                if depth < depth_cap {
                    return Err(AnalysisError::Search(SearchError::PromiseViolation {
                        witness: res.path_set(),
                    }));
                }
                nodes[id].is_model = true;
            }
            NodeClass::Branch(ci, vars) => {
                if depth == depth_cap {
                    return Ok(id);
                }
                nodes[id].clause = Some(ci);
                res.push_shoot(&vars);
                for &a in &vars {
                    res.assign(a);
                    let child = grow(res, nodes, Some(id), Some(a), depth_cap, node_limit);
                    res.unassign(a);
                    let child = child?;
                    nodes[id].children.push(child);
                }
                res.pop_shoot(&vars);
            }
        }
        Ok(id)
    }

    grow(&mut res, &mut nodes, None, None, depth_cap, node_limit)?;
    Ok(ExplicitTree {
        nodes,
        n_vars: f.num_vars(),
        depth_cap,
        m: ordering.disjoint_prefix_len(),
        x_d: ordering.x_d().clone(),
    })
}

/// Marking sets: for the edge into node `v`, the ancestors of `v`'s parent
/// that own a child edge with the same label.
#[derive(Clone, Debug)]
pub struct EdgeMarking {
    /// Indexed by child node id (the edge is identified with its lower
    /// endpoint); `sets[root]` is empty.
    pub sets: Vec<Vec<usize>>,
}

impl EdgeMarking {
    pub fn size(&self, node: usize) -> usize {
        self.sets[node].len()
    }

    pub fn is_marked(&self, node: usize) -> bool {
        !self.sets[node].is_empty()
    }
}

pub fn compute_markings(tree: &ExplicitTree) -> EdgeMarking {
    let mut sets = vec![Vec::new(); tree.nodes.len()];
    for (v, set) in sets.iter_mut().enumerate().skip(1) {
        let label = tree.nodes[v].edge_var.unwrap();
        let u = tree.nodes[v].parent.unwrap();
        // Ancestors of u, excluding u itself.
        let mut w = tree.nodes[u].parent;
        while let Some(wid) = w {
            if tree.nodes[wid]
                .children
                .iter()
                .any(|&c| tree.nodes[c].edge_var == Some(label))
            {
                set.push(wid);
            }
            w = tree.nodes[wid].parent;
        }
        set.reverse();
    }
    EdgeMarking { sets }
}

/// How many edges of the path into `leaf` each path node marks
/// (`|N_leaf(v)|` for every `v` on the path), keyed by node id.
fn path_marking_counts(tree: &ExplicitTree, markings: &EdgeMarking, leaf: usize) -> Vec<(usize, usize)> {
    let path = tree.path_to(leaf);
    let mut counts: Vec<(usize, usize)> = path.iter().map(|&v| (v, 0)).collect();
    for &e in &path[1..] {
        for &w in &markings.sets[e] {
            let slot = counts
                .iter_mut()
                .find(|(v, _)| *v == w)
                .expect("marking node lies on the path");
            slot.1 += 1;
        }
    }
    counts
}

/// Exact survival probabilities under uniform independent sibling
/// orderings, as rationals.
pub struct SurvivalExact {
    /// `(leaf id, survival probability)` for every leaf, dead or not.
    pub per_leaf: Vec<(usize, BigRational)>,
    pub total: BigRational,
}

impl SurvivalExact {
    pub fn total_f64(&self) -> f64 {
        self.total.to_f64().expect("survival total fits in f64")
    }

    pub fn leaf(&self, leaf: usize) -> &BigRational {
        &self
            .per_leaf
            .iter()
            .find(|(l, _)| *l == leaf)
            .expect("leaf present")
            .1
    }
}

/// The survival probability of each leaf's path is the product over path
/// nodes `v` of `1 / (|N_leaf(v)| + 1)`.
pub fn survival_exact(tree: &ExplicitTree, markings: &EdgeMarking) -> SurvivalExact {
    let mut per_leaf = Vec::new();
    let mut total = BigRational::zero();
    for leaf in tree.leaves() {
        let mut sigma = BigRational::one();
        for (_, cnt) in path_marking_counts(tree, markings, leaf) {
            sigma *= BigRational::new(BigInt::one(), BigInt::from(cnt as u64 + 1));
        }
        total += &sigma;
        per_leaf.push((leaf, sigma));
    }
    SurvivalExact { per_leaf, total }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PessimisticMode {
    /// Charge `LAMBDA` per marked path edge.
    Monotone,
    /// Charge `LAMBDA` per marked path edge and once more per doubly
    /// marked path edge.
    General,
}

pub struct SurvivalPessimistic {
    pub mode: PessimisticMode,
    /// `(leaf id, LAMBDA exponent, value)`.
    pub per_leaf: Vec<(usize, u32, f64)>,
    pub total: f64,
}

/// Per-leaf pessimistic survival. The exponent counts marked edges along
/// the path into the leaf (doubly marked edges count twice in general
/// mode); unmarked edges and missing children contribute nothing.
pub fn survival_pessimistic(
    tree: &ExplicitTree,
    markings: &EdgeMarking,
    mode: PessimisticMode,
) -> SurvivalPessimistic {
    let mut per_leaf = Vec::new();
    let mut total = 0.0;
    for leaf in tree.leaves() {
        let path = tree.path_to(leaf);
        let mut exponent = 0u32;
        for &e in &path[1..] {
            let m = markings.size(e);
            if m >= 1 {
                exponent += 1;
            }
            if mode == PessimisticMode::General && m >= 2 {
                exponent += 1;
            }
        }
        let value = LAMBDA.powi(exponent as i32);
        total += value;
        per_leaf.push((leaf, exponent, value));
    }
    SurvivalPessimistic {
        mode,
        per_leaf,
        total,
    }
}

/// Exact check that a leaf's survival probability is dominated by
/// `LAMBDA^exponent`: compares `sigma^2 * 3^exponent <= 1` in rationals.
pub fn pessimistic_dominates(sigma: &BigRational, exponent: u32) -> bool {
    let three_pow = BigRational::from(BigInt::from(3u32).pow(exponent));
    sigma * sigma * three_pow <= BigRational::one()
}

/// Shoot and path statistics for the shoot from the root to a leaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathStats {
    /// Path length (number of path edges).
    pub path_len: usize,
    /// Number of edges in the shoot (all child edges of path nodes).
    pub shoot_edges: usize,
    /// Marked shoot edges (`W`).
    pub weight: usize,
    /// `W + 3*path_len - shoot_edges`: the uniform weight, charging one
    /// unit per missing child of a non-ternary node.
    pub uniform_weight: i64,
    /// Doubly marked shoot edges.
    pub double_weight: usize,
    /// Marked edges on the path itself.
    pub path_weight: usize,
    /// Doubly marked edges on the path itself.
    pub path_double_weight: usize,
    /// Fullness: prefix variables off the first-m-levels path that label a
    /// shoot edge hanging from depth >= m.
    pub fullness: usize,
}

pub fn path_stats(tree: &ExplicitTree, markings: &EdgeMarking, leaf: usize) -> PathStats {
    let path = tree.path_to(leaf);
    let path_len = path.len() - 1;
    let m = tree.m;

    let mut shoot_edges = 0;
    let mut weight = 0;
    let mut double_weight = 0;
    for &v in &path {
        for &c in &tree.nodes[v].children {
            shoot_edges += 1;
            let sz = markings.size(c);
            if sz >= 1 {
                weight += 1;
            }
            if sz >= 2 {
                double_weight += 1;
            }
        }
    }

    let mut path_weight = 0;
    let mut path_double_weight = 0;
    for &e in &path[1..] {
        let sz = markings.size(e);
        if sz >= 1 {
            path_weight += 1;
        }
        if sz >= 2 {
            path_double_weight += 1;
        }
    }

    let mut fullness = 0;
    if path_len >= m {
        let prefix_path: VarSet = VarSet::from_vars(
            tree.n_vars,
            path[1..=m].iter().map(|&v| tree.nodes[v].edge_var.unwrap()),
        );
        let mut seen = VarSet::empty(tree.n_vars);
        for &v in &path[m..] {
            for &c in &tree.nodes[v].children {
                let lab = tree.nodes[c].edge_var.unwrap();
                if tree.x_d.contains(lab) && !prefix_path.contains(lab) && !seen.contains(lab) {
                    seen.insert(lab);
                    fullness += 1;
                }
            }
        }
    }

    PathStats {
        path_len,
        shoot_edges,
        weight,
        uniform_weight: weight as i64 + 3 * path_len as i64 - shoot_edges as i64,
        double_weight,
        path_weight,
        path_double_weight,
        fullness,
    }
}

/// Outcome of the structural check for a node below the disjoint prefix:
/// such a node must have at most 2 outgoing edges, or a doubly marked
/// outgoing edge, or a singly marked outgoing edge labeled by a prefix
/// variable.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MarkingVerdict {
    AtMostTwoEdges,
    DoublyMarkedEdge,
    SingleMarkedPrefixEdge,
    Flagged,
}

/// Evaluates the verdict for every internal node at depth >= m.
pub fn check_disjoint_marking(
    tree: &ExplicitTree,
    markings: &EdgeMarking,
) -> Vec<(usize, MarkingVerdict)> {
    let mut out = Vec::new();
    for (id, node) in tree.nodes.iter().enumerate() {
        if node.children.is_empty() || node.depth < tree.m {
            continue;
        }
        let verdict = if node.children.len() <= 2 {
            MarkingVerdict::AtMostTwoEdges
        } else if node.children.iter().any(|&c| markings.size(c) >= 2) {
            MarkingVerdict::DoublyMarkedEdge
        } else if node.children.iter().any(|&c| {
            markings.size(c) == 1 && tree.x_d.contains(tree.nodes[c].edge_var.unwrap())
        }) {
            MarkingVerdict::SingleMarkedPrefixEdge
        } else {
            MarkingVerdict::Flagged
        };
        out.push((id, verdict));
    }
    out
}

/// Independent route to a leaf's survival probability: enumerate every
/// joint ordering of the children of the path's internal nodes and count
/// the orderings under which no path edge is cut. Exponential in the path
/// length; meant for desk-scale trees only.
pub fn survival_by_ordering_enumeration(tree: &ExplicitTree, leaf: usize) -> BigRational {
    let path = tree.path_to(leaf);
    let internal: Vec<usize> = path[..path.len() - 1].to_vec();

    // Per path node: its children, and which child continues the path.
    let mut child_lists: Vec<Vec<usize>> = Vec::new();
    let mut path_child: Vec<usize> = Vec::new();
    for (i, &v) in internal.iter().enumerate() {
        child_lists.push(tree.nodes[v].children.clone());
        let next = path[i + 1];
        path_child.push(
            tree.nodes[v]
                .children
                .iter()
                .position(|&c| c == next)
                .expect("path child present"),
        );
    }

    // Mixed-radix enumeration over the per-node permutations.
    let perms_per_node: Vec<Vec<Vec<usize>>> = child_lists
        .iter()
        .map(|cs| permutations(cs.len()))
        .collect();
    let total: u64 = perms_per_node.iter().map(|p| p.len() as u64).product();
    let mut alive = 0u64;
    let mut idx = vec![0usize; internal.len()];
    loop {
        // position_of[i][j] = rank of child j at node i under this combo
        let cut = (0..internal.len()).any(|i| {
            let perm = &perms_per_node[i][idx[i]];
            // rank of each child slot
            let rank_of = |slot: usize| perm.iter().position(|&p| p == slot).unwrap();
            let path_rank = rank_of(path_child[i]);
            // Does node i cut any later path edge?
            ((i + 1)..path.len()).any(|j| {
                let lab = tree.nodes[path[j]].edge_var.unwrap();
                if j == i + 1 {
                    return false; // the path edge at i itself
                }
                child_lists[i].iter().enumerate().any(|(slot, &c)| {
                    tree.nodes[c].edge_var == Some(lab) && rank_of(slot) < path_rank
                })
            })
        });
        if !cut {
            alive += 1;
        }
        // increment mixed radix
        let mut carry = true;
        for (i, ix) in idx.iter_mut().enumerate() {
            if !carry {
                break;
            }
            *ix += 1;
            if *ix == perms_per_node[i].len() {
                *ix = 0;
            } else {
                carry = false;
            }
        }
        if carry {
            break;
        }
    }
    BigRational::new(BigInt::from(alive), BigInt::from(total))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..k).collect();
    heap_permute(&mut items, k, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// Nodes whose sibling ordering can influence some cut event: at least two
/// children, and a marked edge somewhere at-or-below one of the children.
pub fn ordering_relevant_nodes(tree: &ExplicitTree, markings: &EdgeMarking) -> usize {
    let n = tree.nodes.len();
    let mut marked_below = vec![false; n];
    // Nodes are indexed in preorder, so scanning in reverse sees children
    // before parents.
    for id in (0..n).rev() {
        let mut below = markings.is_marked(id);
        for &c in &tree.nodes[id].children {
            below |= marked_below[c];
        }
        marked_below[id] = below;
    }
    (0..n)
        .filter(|&id| {
            tree.nodes[id].children.len() >= 2
                && tree.nodes[id].children.iter().any(|&c| marked_below[c])
        })
        .count()
}

/// Pessimistic survival total of the subtree rooted at `node`, with
/// exponents counted along the paths from `node` and markings taken from
/// the full tree.
pub fn pessimistic_subtree_total(
    tree: &ExplicitTree,
    markings: &EdgeMarking,
    node: usize,
    mode: PessimisticMode,
) -> f64 {
    fn walk(
        tree: &ExplicitTree,
        markings: &EdgeMarking,
        id: usize,
        exponent: u32,
        mode: PessimisticMode,
    ) -> f64 {
        if tree.nodes[id].children.is_empty() {
            return LAMBDA.powi(exponent as i32);
        }
        tree.nodes[id]
            .children
            .iter()
            .map(|&c| {
                let sz = markings.size(c);
                let mut e = exponent;
                if sz >= 1 {
                    e += 1;
                }
                if mode == PessimisticMode::General && sz >= 2 {
                    e += 1;
                }
                walk(tree, markings, c, e, mode)
            })
            .sum()
    }
    walk(tree, markings, node, 0, mode)
}

/// Sample statistics of the engine's visited-leaves count.
#[derive(Clone, Copy, Debug)]
pub struct LeafSample {
    pub trials: u64,
    pub mean: f64,
    /// Standard error of the mean; absent for a single trial.
    pub std_error: Option<f64>,
}

/// Runs the search engine `trials` times with independently derived seeds
/// and reports the sample mean and standard error of `leaves_visited`.
pub fn monte_carlo_leaves(
    f: &CnfFormula,
    t: usize,
    ordering: &ClauseOrdering,
    trials: u64,
    seed: u64,
) -> Result<LeafSample, SearchError> {
    assert!(trials >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..trials {
        let trial_seed: u64 = rng.random();
        let outcome = search::enumerate_at_depth(
            f,
            t,
            ordering,
            EdgeOrderPolicy::SeededRandom { seed: trial_seed },
        )?;
        let x = outcome.leaves_visited as f64;
        sum += x;
        sum_sq += x * x;
    }
    let n = trials as f64;
    let mean = sum / n;
    let std_error = if trials > 1 {
        let var = (sum_sq - n * mean * mean) / (n - 1.0);
        Some((var.max(0.0) / n).sqrt())
    } else {
        None
    };
    Ok(LeafSample {
        trials,
        mean,
        std_error,
    })
}

/// Used by the analyze report: σ(T) restricted to valid leaves labelled by
/// a given minimum transversal sums to exactly 1.
pub fn survival_mass_of_label(
    tree: &ExplicitTree,
    exact: &SurvivalExact,
    label: &VarSet,
) -> BigRational {
    exact
        .per_leaf
        .iter()
        .filter(|(leaf, _)| {
            let node = &tree.nodes[*leaf];
            node.is_model && &node.label == label
        })
        .map(|(_, sigma)| sigma.clone())
        .sum()
}
