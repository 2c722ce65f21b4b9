//! Depth-capped DFS over the implicit transversal tree with left-sibling
//! pruning.
//!
//! The tree is never materialized: the walker keeps per-clause counters
//! (satisfied count, remaining positive/negative literals), a per-variable
//! cut-flag array with an undo log, and the current path. At each node the
//! branch clause is the first unsatisfied residual-monotone clause in
//! search order (with the general-mode width-3 avoidance refinement), its
//! unassigned variables become the child edges, and a child is skipped
//! exactly when an equal-labeled edge already appeared to the left of the
//! path at some ancestor.

use crate::formula::{CnfFormula, VarSet};
use crate::ordering::{self, ClauseOrdering, EdgeOrderPolicy, OrderingMode};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SearchError {
    /// The promise "no model of weight < t" was violated: `witness` is a
    /// model of weight below the search depth.
    #[error("promise violation: {witness:?} is a model of weight {} < search depth", witness.len())]
    PromiseViolation { witness: VarSet },
    #[error("formula has no model at any weight up to {n}")]
    Unsatisfiable { n: usize },
}

/// Result of one tree search.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Emitted assignments, in DFS emission order, pairwise distinct.
    pub transversals: Vec<VarSet>,
    /// Leaves visited: depth-`t` nodes plus dead (empty-clause) nodes.
    pub leaves_visited: u64,
    /// Internal nodes whose children were generated.
    pub nodes_expanded: u64,
    /// Child edges skipped by the pruning rule.
    pub edges_pruned: u64,
    /// The search depth `t`.
    pub depth: usize,
    /// Seed of the edge-order policy, if randomized.
    pub seed: Option<u64>,
}

/// Residual-formula walker: path assignment, clause simplification
/// counters, and shoot occurrence counts. Shared by the search engine and
/// the explicit tree builder.
pub(crate) struct Residual<'a> {
    f: &'a CnfFormula,
    ordering: &'a ClauseOrdering,
    pos_occ: Vec<Vec<u32>>,
    neg_occ: Vec<Vec<u32>>,
    sat_cnt: Vec<u32>,
    pos_rem: Vec<u32>,
    neg_rem: Vec<u32>,
    empty_clauses: u32,
    in_path: Vec<bool>,
    pub(crate) path: Vec<u32>,
    /// Per-variable count of appearances as a child-edge label of a path
    /// node (the developed shoot above the current node).
    shoot_cnt: Vec<u32>,
}

/// What the walker sees at a node.
pub(crate) enum NodeClass {
    /// The residual contains an empty clause; the node is dead.
    Dead,
    /// The all-zeros completion satisfies the residual: the path set is a
    /// model.
    AllZeroModel,
    /// Branch on this clause (index into the formula's clause list) with
    /// these unassigned variables, in clause-literal order.
    Branch(usize, Vec<u32>),
}

impl<'a> Residual<'a> {
    pub(crate) fn new(f: &'a CnfFormula, ordering: &'a ClauseOrdering) -> Self {
        let n = f.num_vars();
        let mut pos_occ = vec![Vec::new(); n + 1];
        let mut neg_occ = vec![Vec::new(); n + 1];
        let mut pos_rem = Vec::with_capacity(f.num_clauses());
        let mut neg_rem = Vec::with_capacity(f.num_clauses());
        let mut empty_clauses = 0;
        for (ci, c) in f.clauses().iter().enumerate() {
            for l in c.literals() {
                if l.is_positive() {
                    pos_occ[l.var() as usize].push(ci as u32);
                } else {
                    neg_occ[l.var() as usize].push(ci as u32);
                }
            }
            pos_rem.push(c.positive_count() as u32);
            neg_rem.push(c.negative_count() as u32);
            if c.width() == 0 {
                empty_clauses += 1;
            }
        }
        Residual {
            f,
            ordering,
            pos_occ,
            neg_occ,
            sat_cnt: vec![0; f.num_clauses()],
            pos_rem,
            neg_rem,
            empty_clauses,
            in_path: vec![false; n + 1],
            path: Vec::new(),
            shoot_cnt: vec![0; n + 1],
        }
    }

    pub(crate) fn formula(&self) -> &'a CnfFormula {
        self.f
    }

    pub(crate) fn depth(&self) -> usize {
        self.path.len()
    }

    pub(crate) fn path_set(&self) -> VarSet {
        VarSet::from_vars(self.f.num_vars(), self.path.iter().copied())
    }

    #[inline]
    fn is_empty_clause(&self, ci: usize) -> bool {
        self.sat_cnt[ci] == 0 && self.pos_rem[ci] == 0 && self.neg_rem[ci] == 0
    }

    #[inline]
    fn is_residual_monotone_unsat(&self, ci: usize) -> bool {
        self.sat_cnt[ci] == 0 && self.neg_rem[ci] == 0 && self.pos_rem[ci] > 0
    }

    /// Sets `v := 1` and simplifies.
    pub(crate) fn assign(&mut self, v: u32) {
        debug_assert!(!self.in_path[v as usize]);
        self.in_path[v as usize] = true;
        self.path.push(v);
        for i in 0..self.pos_occ[v as usize].len() {
            let ci = self.pos_occ[v as usize][i] as usize;
            self.sat_cnt[ci] += 1;
            self.pos_rem[ci] -= 1;
        }
        for i in 0..self.neg_occ[v as usize].len() {
            let ci = self.neg_occ[v as usize][i] as usize;
            self.neg_rem[ci] -= 1;
            if self.is_empty_clause(ci) {
                self.empty_clauses += 1;
            }
        }
    }

    pub(crate) fn unassign(&mut self, v: u32) {
        debug_assert_eq!(self.path.last(), Some(&v));
        self.path.pop();
        self.in_path[v as usize] = false;
        for i in 0..self.pos_occ[v as usize].len() {
            let ci = self.pos_occ[v as usize][i] as usize;
            self.sat_cnt[ci] -= 1;
            self.pos_rem[ci] += 1;
        }
        for i in 0..self.neg_occ[v as usize].len() {
            let ci = self.neg_occ[v as usize][i] as usize;
            if self.is_empty_clause(ci) {
                self.empty_clauses -= 1;
            }
            self.neg_rem[ci] += 1;
        }
    }

    /// Unassigned variables of clause `ci`'s positive literals, in
    /// clause-literal order.
    fn residual_vars(&self, ci: usize) -> Vec<u32> {
        self.f.clauses()[ci]
            .literals()
            .iter()
            .filter(|l| l.is_positive() && !self.in_path[l.var() as usize])
            .map(|l| l.var())
            .collect()
    }

    /// Classifies the current node and selects the branch clause.
    ///
    /// Order of precedence: an empty residual clause kills the node; if no
    /// unsatisfied residual-monotone clause exists the all-zeros completion
    /// satisfies the residual; otherwise the branch clause is the first
    /// unsatisfied residual-monotone clause in search order. In general
    /// mode at depth >= m, a residual-monotone clause of residual width 3
    /// containing no prefix variable that already labels two shoot edges is
    /// preferred, falling back to the plain first clause when none exists.
    pub(crate) fn classify(&self) -> NodeClass {
        if self.empty_clauses > 0 {
            return NodeClass::Dead;
        }
        let general = self.ordering.mode() == OrderingMode::GeneralCanonical
            && self.depth() >= self.ordering.disjoint_prefix_len();
        let mut fallback: Option<usize> = None;
        for &ci in self.ordering.permutation() {
            if !self.is_residual_monotone_unsat(ci) {
                continue;
            }
            if !general {
                return NodeClass::Branch(ci, self.residual_vars(ci));
            }
            if fallback.is_none() {
                fallback = Some(ci);
            }
            if self.pos_rem[ci] == 3 {
                let avoided = self.f.clauses()[ci].literals().iter().any(|l| {
                    l.is_positive()
                        && !self.in_path[l.var() as usize]
                        && self.ordering.x_d().contains(l.var())
                        && self.shoot_cnt[l.var() as usize] >= 2
                });
                if !avoided {
                    return NodeClass::Branch(ci, self.residual_vars(ci));
                }
            }
        }
        match fallback {
            Some(ci) => NodeClass::Branch(ci, self.residual_vars(ci)),
            None => NodeClass::AllZeroModel,
        }
    }

    /// Records the development of a node: its child-edge labels join the
    /// shoot.
    pub(crate) fn push_shoot(&mut self, vars: &[u32]) {
        for &v in vars {
            self.shoot_cnt[v as usize] += 1;
        }
    }

    pub(crate) fn pop_shoot(&mut self, vars: &[u32]) {
        for &v in vars {
            self.shoot_cnt[v as usize] -= 1;
        }
    }
}

struct Engine<'a> {
    res: Residual<'a>,
    policy: EdgeOrderPolicy,
    target: usize,
    cut: Vec<bool>,
    undo: Vec<(u32, bool)>,
    out: SearchOutcome,
}

impl<'a> Engine<'a> {
    fn new(
        f: &'a CnfFormula,
        ordering: &'a ClauseOrdering,
        policy: EdgeOrderPolicy,
        target: usize,
    ) -> Self {
        Engine {
            res: Residual::new(f, ordering),
            policy,
            target,
            cut: vec![false; f.num_vars() + 1],
            undo: Vec::new(),
            out: SearchOutcome {
                transversals: Vec::new(),
                leaves_visited: 0,
                nodes_expanded: 0,
                edges_pruned: 0,
                depth: target,
                seed: policy.seed(),
            },
        }
    }

    fn dfs(&mut self) -> Result<(), SearchError> {
        let depth = self.res.depth();
        let class = self.res.classify();
        if let NodeClass::Dead = class {
            self.out.leaves_visited += 1;
            return Ok(());
        }
        if depth == self.target {
            self.out.leaves_visited += 1;
            if let NodeClass::AllZeroModel = class {
                let s = self.res.path_set();
                debug_assert!(self.res.formula().is_model(&s));
                self.out.transversals.push(s);
            }
            return Ok(());
        }
        match class {
            NodeClass::AllZeroModel => Err(SearchError::PromiseViolation {
                witness: self.res.path_set(),
            }),
            NodeClass::Branch(_, vars) => {
                self.out.nodes_expanded += 1;
                let perm = ordering::edge_permutation(&vars, self.policy, &self.res.path);
                self.res.push_shoot(&vars);
                let undo_mark = self.undo.len();
                let mut result = Ok(());
                for (i, &a) in perm.iter().enumerate() {
                    if i > 0 {
                        let left = perm[i - 1] as usize;
                        self.undo.push((perm[i - 1], self.cut[left]));
                        self.cut[left] = true;
                    }
                    if self.cut[a as usize] {
                        self.out.edges_pruned += 1;
                        continue;
                    }
                    self.res.assign(a);
                    result = self.dfs();
                    self.res.unassign(a);
                    if result.is_err() {
                        break;
                    }
                }
                while self.undo.len() > undo_mark {
                    let (v, prior) = self.undo.pop().unwrap();
                    self.cut[v as usize] = prior;
                }
                self.res.pop_shoot(&vars);
                result
            }
            NodeClass::Dead => unreachable!(),
        }
    }
}

/// Enumerates all models of weight exactly `t`, each exactly once,
/// assuming no model of weight `< t` exists. A node at depth `< t` whose
/// residual is satisfied by all-zeros is a promise violation and is
/// reported with its witness.
pub fn enumerate_at_depth(
    f: &CnfFormula,
    t: usize,
    ordering: &ClauseOrdering,
    policy: EdgeOrderPolicy,
) -> Result<SearchOutcome, SearchError> {
    let mut engine = Engine::new(f, ordering, policy, t);
    engine.dfs()?;
    debug_assert!(engine.cut.iter().all(|&c| !c), "cut flags not restored");
    debug_assert!(engine.undo.is_empty());
    Ok(engine.out)
}

/// Iterative deepening from 0: returns the least `t` with a model together
/// with that run's outcome. The promise holds automatically at the first
/// nonempty depth.
pub fn enumerate_min(
    f: &CnfFormula,
    ordering: &ClauseOrdering,
    policy: EdgeOrderPolicy,
) -> Result<(usize, SearchOutcome), SearchError> {
    for t in 0..=f.num_vars() {
        let outcome = enumerate_at_depth(f, t, ordering, policy)?;
        if !outcome.transversals.is_empty() {
            return Ok((t, outcome));
        }
    }
    Err(SearchError::Unsatisfiable { n: f.num_vars() })
}

/// Enumerates all models at Hamming distance exactly `t` from `alpha`,
/// assuming none lies closer: flips the formula by `alpha`, searches from
/// all-zeros, and translates the outputs (and any violation witness) back.
pub fn enum_ball(
    f: &CnfFormula,
    alpha: &VarSet,
    t: usize,
    ordering_mode: OrderingMode,
    policy: EdgeOrderPolicy,
) -> Result<SearchOutcome, SearchError> {
    let flipped = f.flip_literals(alpha);
    let ordering = ordering::canonical_ordering(&flipped, ordering_mode);
    match enumerate_at_depth(&flipped, t, &ordering, policy) {
        Ok(mut outcome) => {
            for s in &mut outcome.transversals {
                *s = s.symmetric_difference(alpha);
                debug_assert_eq!(s.distance(alpha), t);
            }
            Ok(outcome)
        }
        Err(SearchError::PromiseViolation { witness }) => Err(SearchError::PromiseViolation {
            witness: witness.symmetric_difference(alpha),
        }),
        Err(e) => Err(e),
    }
}

/// Pruned DFS to depth at most `cap`; whenever a node's residual is
/// satisfied by all-zeros its path set is emitted and the branch stops.
/// Every subset-minimal model of weight <= `cap` appears in the output;
/// non-minimal models may appear as well.
pub fn enumerate_models_capped(
    f: &CnfFormula,
    cap: usize,
    ordering: &ClauseOrdering,
    policy: EdgeOrderPolicy,
) -> Vec<VarSet> {
    struct Capped<'a> {
        res: Residual<'a>,
        policy: EdgeOrderPolicy,
        cap: usize,
        cut: Vec<bool>,
        undo: Vec<(u32, bool)>,
        out: Vec<VarSet>,
    }
    impl Capped<'_> {
        fn dfs(&mut self) {
            match self.res.classify() {
                NodeClass::Dead => {}
                NodeClass::AllZeroModel => self.out.push(self.res.path_set()),
                NodeClass::Branch(_, vars) => {
                    if self.res.depth() == self.cap {
                        return;
                    }
                    let perm = ordering::edge_permutation(&vars, self.policy, &self.res.path);
                    self.res.push_shoot(&vars);
                    let undo_mark = self.undo.len();
                    for (i, &a) in perm.iter().enumerate() {
                        if i > 0 {
                            let left = perm[i - 1] as usize;
                            self.undo.push((perm[i - 1], self.cut[left]));
                            self.cut[left] = true;
                        }
                        if self.cut[a as usize] {
                            continue;
                        }
                        self.res.assign(a);
                        self.dfs();
                        self.res.unassign(a);
                    }
                    while self.undo.len() > undo_mark {
                        let (v, prior) = self.undo.pop().unwrap();
                        self.cut[v as usize] = prior;
                    }
                    self.res.pop_shoot(&vars);
                }
            }
        }
    }
    let mut search = Capped {
        res: Residual::new(f, ordering),
        policy,
        cap,
        cut: vec![false; f.num_vars() + 1],
        undo: Vec::new(),
        out: Vec::new(),
    };
    search.dfs();
    search.out
}
