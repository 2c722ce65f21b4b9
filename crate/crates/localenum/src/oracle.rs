//! Brute-force ground truth for enumeration claims, independent of the
//! search engine: weight-stratified model enumeration, minimum models by
//! iterative deepening, and minimal models by exhaustive subset scan.

use crate::formula::{CnfFormula, VarSet};
use itertools::Itertools;
use thiserror::Error;

pub const DEFAULT_WEIGHT_LIMIT: usize = 20;
pub const DEFAULT_MINIMAL_LIMIT: usize = 14;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle limited to {limit} variables, formula has {n}")]
    LimitExceeded { n: usize, limit: usize },
    #[error("formula has no model")]
    Unsatisfiable,
}

/// All weight-`t` models, by exhaustive iteration over the weight-`t`
/// subsets.
pub fn models_at_weight(
    f: &CnfFormula,
    t: usize,
    limit: usize,
) -> Result<Vec<VarSet>, OracleError> {
    let n = f.num_vars();
    if n > limit {
        return Err(OracleError::LimitExceeded { n, limit });
    }
    let mut out = Vec::new();
    for subset in (1..=n as u32).combinations(t) {
        let s = VarSet::from_vars(n, subset);
        if f.is_model(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Least weight carrying a model, with all models of that weight.
pub fn min_transversals(
    f: &CnfFormula,
    limit: usize,
) -> Result<(usize, Vec<VarSet>), OracleError> {
    for t in 0..=f.num_vars() {
        let models = models_at_weight(f, t, limit)?;
        if !models.is_empty() {
            return Ok((t, models));
        }
    }
    Err(OracleError::Unsatisfiable)
}

/// All subset-minimal models, by scanning every assignment and then
/// filtering against all smaller models.
pub fn minimal_models(f: &CnfFormula, limit: usize) -> Result<Vec<VarSet>, OracleError> {
    let n = f.num_vars();
    if n > limit {
        return Err(OracleError::LimitExceeded { n, limit });
    }
    let mut models: Vec<VarSet> = Vec::new();
    for bits in 0..(1u64 << n) {
        let s = VarSet::from_vars(n, (1..=n as u32).filter(|&v| bits >> (v - 1) & 1 == 1));
        if f.is_model(&s) {
            models.push(s);
        }
    }
    models.sort_by_key(|s| (s.len(), s.clone()));
    let mut minimal: Vec<VarSet> = Vec::new();
    'outer: for s in models {
        for m in &minimal {
            if m.is_subset_of(&s) {
                continue 'outer;
            }
        }
        minimal.push(s);
    }
    Ok(minimal)
}
