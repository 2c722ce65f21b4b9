//! Instance generators: block-majority formulas, disjoint 2-CNFs, and
//! seeded random k-CNFs for test corpora.

use super::{Clause, CnfFormula, FormulaError, Literal};
use itertools::Itertools;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Block-majority formula: the variables are split into consecutive blocks
/// of size `2(k-1)` and every k-subset of each block appears as a positive
/// clause. Every model must set at least `k-1` variables per block, so for
/// `k = 3` the minimum model weight is `n/2` with `6^(n/4)` minimum models.
pub fn maj(n: usize, k: usize) -> Result<CnfFormula, FormulaError> {
    assert!(k >= 2);
    let block = 2 * (k - 1);
    if !n.is_multiple_of(block) {
        return Err(FormulaError::BlockDivisibility { n, block });
    }
    let mut clauses = Vec::new();
    for b in 0..n / block {
        let lo = (b * block + 1) as u32;
        let vars: Vec<u32> = (lo..lo + block as u32).collect();
        for subset in vars.iter().combinations(k) {
            let lits = subset.into_iter().map(|&v| Literal::positive(v)).collect();
            clauses.push(Clause::new(lits).expect("distinct positives"));
        }
    }
    CnfFormula::new(n, clauses)
}

/// `t` pairwise variable-disjoint positive width-2 clauses over `n >= 2t`
/// variables: minimum model weight `t`, `2^t` minimum models.
pub fn disjoint_2cnf(t: usize, n: usize) -> Result<CnfFormula, FormulaError> {
    if 2 * t > n {
        return Err(FormulaError::TooFewVariables { t, n });
    }
    let clauses = (0..t)
        .map(|i| {
            let a = (2 * i + 1) as u32;
            Clause::new(vec![Literal::positive(a), Literal::positive(a + 1)]).unwrap()
        })
        .collect();
    CnfFormula::new(n, clauses)
}

/// Configuration for [`random_cnf`].
#[derive(Clone, Copy, Debug)]
pub struct RandomCnf {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub monotone: bool,
    pub seed: u64,
}

/// `m` clauses of width exactly `k`, variables drawn without replacement
/// per clause, signs uniform unless `monotone`. Deterministic per seed.
pub fn random_cnf(cfg: RandomCnf) -> CnfFormula {
    assert!(cfg.k <= cfg.n, "clause width must not exceed variable count");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pool: Vec<u32> = (1..=cfg.n as u32).collect();
    let clauses = (0..cfg.m)
        .map(|_| {
            pool.partial_shuffle(&mut rng, cfg.k);
            let lits = pool[..cfg.k]
                .iter()
                .map(|&v| {
                    if cfg.monotone || rng.random_bool(0.5) {
                        Literal::positive(v)
                    } else {
                        Literal::negative(v)
                    }
                })
                .collect();
            Clause::new(lits).expect("distinct variables per clause")
        })
        .collect();
    CnfFormula::new(cfg.n, clauses).expect("generated literals in range")
}
