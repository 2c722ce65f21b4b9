//! Problem drivers built on the search engine: minimum model weight,
//! distance-t enumeration, Hamming-ball satisfiability, 3-SAT via the two
//! poles, and minimal-model enumeration for bounded-negation CNFs.

use crate::formula::{CnfFormula, VarSet};
use crate::ordering::{self, EdgeOrderPolicy, OrderingMode};
use crate::search::{self, SearchError, SearchOutcome};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("clause {clause_index} has width {width}, limit is {limit}")]
    WidthLimit {
        clause_index: usize,
        width: usize,
        limit: usize,
    },
    #[error("clause {clause_index} exceeds the {limit}-literal sign budget required by the sign mode")]
    NegationBudget { clause_index: usize, limit: usize },
}

/// Aggregate statistics over the engine runs behind a solver answer.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct RunStats {
    pub leaves_visited: u64,
    pub nodes_expanded: u64,
    pub edges_pruned: u64,
    pub searches: u64,
}

impl RunStats {
    fn absorb(&mut self, outcome: &SearchOutcome) {
        self.leaves_visited += outcome.leaves_visited;
        self.nodes_expanded += outcome.nodes_expanded;
        self.edges_pruned += outcome.edges_pruned;
        self.searches += 1;
    }
}

/// Minimum weight of a model (the transversal number for monotone
/// formulas), by iterative deepening.
pub fn tau(
    f: &CnfFormula,
    mode: OrderingMode,
    policy: EdgeOrderPolicy,
) -> Result<usize, SolveError> {
    let ord = ordering::canonical_ordering(f, mode);
    let (t, _) = search::enumerate_min(f, &ord, policy)?;
    Ok(t)
}

/// Report of an enumeration run.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub assignments: Vec<VarSet>,
    pub stats: RunStats,
}

/// All models at Hamming distance exactly `t` from `alpha`, assuming none
/// lies closer.
pub fn enum_at_distance(
    f: &CnfFormula,
    alpha: &VarSet,
    t: usize,
    mode: OrderingMode,
    policy: EdgeOrderPolicy,
) -> Result<SolveReport, SolveError> {
    let outcome = search::enum_ball(f, alpha, t, mode, policy)?;
    let mut stats = RunStats::default();
    stats.absorb(&outcome);
    Ok(SolveReport {
        assignments: outcome.transversals,
        stats,
    })
}

/// Whether some model lies within Hamming distance `t` of `alpha`.
///
/// No promise is needed: the radius grows from 0, so the first radius
/// that yields anything settles the answer.
pub fn ball_sat(
    f: &CnfFormula,
    alpha: &VarSet,
    t: usize,
    mode: OrderingMode,
    policy: EdgeOrderPolicy,
) -> Result<(bool, RunStats), SolveError> {
    let mut stats = RunStats::default();
    for radius in 0..=t.min(f.num_vars()) {
        let outcome = search::enum_ball(f, alpha, radius, mode, policy)?;
        stats.absorb(&outcome);
        if !outcome.transversals.is_empty() {
            return Ok((true, stats));
        }
    }
    Ok((false, stats))
}

/// 3-SAT decision: search radius `ceil(n/2)` around both the all-zeros
/// and the all-ones assignment; every assignment lies in one of the two
/// balls.
pub fn sat3(
    f: &CnfFormula,
    mode: OrderingMode,
    policy: EdgeOrderPolicy,
) -> Result<(bool, RunStats), SolveError> {
    if let Some((ci, c)) = f
        .clauses()
        .iter()
        .enumerate()
        .find(|(_, c)| c.width() > 3)
    {
        return Err(SolveError::WidthLimit {
            clause_index: ci,
            width: c.width(),
            limit: 3,
        });
    }
    let n = f.num_vars();
    let radius = n.div_ceil(2);
    let (from_zeros, mut stats) = ball_sat(f, &VarSet::empty(n), radius, mode, policy)?;
    if from_zeros {
        return Ok((true, stats));
    }
    let (from_ones, ones_stats) = ball_sat(f, &VarSet::full(n), radius, mode, policy)?;
    stats.leaves_visited += ones_stats.leaves_visited;
    stats.nodes_expanded += ones_stats.nodes_expanded;
    stats.edges_pruned += ones_stats.edges_pruned;
    stats.searches += ones_stats.searches;
    Ok((from_ones, stats))
}

/// Which literal budget the bounded-negation enumerator enforces.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SignMode {
    /// Each clause has at most 3 positive literals; outputs are the
    /// subset-minimal models.
    PositiveBounded,
    /// Each clause has at most 3 negative literals; the formula is solved
    /// with all literals negated and the outputs complemented, so they are
    /// the complements of the negated formula's minimal models.
    NegativeBounded,
    /// Pick whichever budget the formula satisfies, preferring positive.
    Auto,
}

pub const MINIMAL_MODEL_BUDGET: usize = 3;

fn negate_all_literals(f: &CnfFormula) -> CnfFormula {
    f.flip_literals(&VarSet::full(f.num_vars()))
}

/// Enumerates the minimal models of a bounded-negation CNF: a pruned tree
/// search collects every minimal model of weight up to `ceil(c*n)`, an
/// exhaustive sweep collects all models above the threshold, and subset
/// filtering inside the combined pool leaves exactly the minimal ones.
pub fn minimal_models_bounded_neg(
    f: &CnfFormula,
    c: f64,
    sign_mode: SignMode,
    policy: EdgeOrderPolicy,
) -> Result<SolveReport, SolveError> {
    assert!((0.0..=1.0).contains(&c), "threshold must lie in [0, 1]");
    let budget = MINIMAL_MODEL_BUDGET;
    let pos_ok = f.clauses().iter().all(|c| c.positive_count() <= budget);
    let neg_ok = f.clauses().iter().all(|c| c.negative_count() <= budget);
    let use_positive = match sign_mode {
        SignMode::PositiveBounded => true,
        SignMode::NegativeBounded => false,
        SignMode::Auto => pos_ok || !neg_ok,
    };
    if use_positive && !pos_ok || !use_positive && !neg_ok {
        let ci = f
            .clauses()
            .iter()
            .position(|c| {
                if use_positive {
                    c.positive_count() > budget
                } else {
                    c.negative_count() > budget
                }
            })
            .unwrap();
        return Err(SolveError::NegationBudget {
            clause_index: ci,
            limit: budget,
        });
    }

    let (work, complement) = if use_positive {
        (f.clone(), false)
    } else {
        (negate_all_literals(f), true)
    };

    let n = work.num_vars();
    let cap = ((c * n as f64).ceil() as usize).min(n);
    let ord = ordering::canonical_ordering(&work, OrderingMode::GeneralCanonical);

    // Candidate pool: tree-search emissions up to the weight cap, plus an
    // exhaustive sweep of everything heavier.
    let mut pool: Vec<VarSet> = search::enumerate_models_capped(&work, cap, &ord, policy);
    for bits in 0..(1u64 << n) {
        if (bits.count_ones() as usize) <= cap {
            continue;
        }
        let s = VarSet::from_vars(n, (1..=n as u32).filter(|&v| bits >> (v - 1) & 1 == 1));
        if work.is_model(&s) {
            pool.push(s);
        }
    }
    pool.sort_by_key(|s| (s.len(), s.clone()));
    pool.dedup();

    // Every minimal model is in the pool and every non-minimal pool entry
    // has a pool entry strictly below it, so subset filtering is exact.
    let mut minimal: Vec<VarSet> = Vec::new();
    'outer: for s in pool {
        for m in &minimal {
            if m.is_subset_of(&s) {
                continue 'outer;
            }
        }
        minimal.push(s);
    }

    let mut assignments: Vec<VarSet> = if complement {
        minimal
            .into_iter()
            .map(|s| s.symmetric_difference(&VarSet::full(n)))
            .collect()
    } else {
        minimal
    };
    assignments.sort();
    Ok(SolveReport {
        assignments,
        stats: RunStats::default(),
    })
}
