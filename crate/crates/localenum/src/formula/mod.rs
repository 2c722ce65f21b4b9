//! CNF data model: literals, clauses, formulas, semantic checks, and the
//! literal-flip and width-padding reductions.

mod varset;
pub mod dimacs;
pub mod gen;

pub use varset::VarSet;

use itertools::Itertools;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("clause {clause_index} is tautological (contains {var} and -{var})")]
    Tautology { clause_index: usize, var: u32 },
    #[error("literal {literal} out of range in clause {clause_index} (n = {n})")]
    LiteralOutOfRange {
        clause_index: usize,
        literal: i64,
        n: usize,
    },
    #[error("clause width {width} exceeds target width {k}")]
    WidthExceeded { width: usize, k: usize },
    #[error("cannot pad an empty clause (the formula is unsatisfiable)")]
    CannotPadEmptyClause,
    #[error("padding would produce more than {limit} clauses")]
    ExpansionLimit { limit: usize },
    #[error("variable count {n} is not divisible by {block}")]
    BlockDivisibility { n: usize, block: usize },
    #[error("{t} disjoint pairs need at least {} variables, got {n}", 2 * t)]
    TooFewVariables { t: usize, n: usize },
    #[error("{0}")]
    Dimacs(String),
}

/// A signed occurrence of a variable. Variables are 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    var: u32,
    positive: bool,
}

impl Literal {
    pub fn positive(var: u32) -> Self {
        debug_assert!(var >= 1);
        Literal {
            var,
            positive: true,
        }
    }

    pub fn negative(var: u32) -> Self {
        debug_assert!(var >= 1);
        Literal {
            var,
            positive: false,
        }
    }

    #[inline]
    pub fn var(self) -> u32 {
        self.var
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// Signed DIMACS form: `v` for positive, `-v` for negative.
    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }
}

impl std::fmt::Debug for Literal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals over distinct variables.
///
/// Width 0 (the empty clause) is representable; tautologies are not.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Builds a clause, collapsing duplicate literals and rejecting
    /// tautologies. Literal order is otherwise preserved.
    pub fn new(literals: Vec<Literal>) -> Result<Self, FormulaError> {
        let mut seen: Vec<Literal> = Vec::with_capacity(literals.len());
        for lit in literals {
            if seen.iter().any(|s| s.var == lit.var && s.positive != lit.positive) {
                return Err(FormulaError::Tautology {
                    clause_index: 0,
                    var: lit.var,
                });
            }
            if !seen.contains(&lit) {
                seen.push(lit);
            }
        }
        Ok(Clause { literals: seen })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn width(&self) -> usize {
        self.literals.len()
    }

    pub fn is_monotone(&self) -> bool {
        self.literals.iter().all(|l| l.positive)
    }

    pub fn contains_var(&self, v: u32) -> bool {
        self.literals.iter().any(|l| l.var == v)
    }

    pub fn positive_count(&self) -> usize {
        self.literals.iter().filter(|l| l.positive).count()
    }

    pub fn negative_count(&self) -> usize {
        self.literals.iter().filter(|l| !l.positive).count()
    }
}

/// A CNF formula `(X, C)` with `n` variables and an ordered clause list.
///
/// The stored clause order is significant: orderings permute indices into
/// this list, never the list itself.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CnfFormula {
    n: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        for (ci, c) in clauses.iter().enumerate() {
            for l in c.literals() {
                if l.var() as usize > n {
                    return Err(FormulaError::LiteralOutOfRange {
                        clause_index: ci,
                        literal: l.to_dimacs(),
                        n,
                    });
                }
            }
        }
        Ok(CnfFormula { n, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Maximum clause width (0 for the empty clause list).
    pub fn max_width(&self) -> usize {
        self.clauses.iter().map(Clause::width).max().unwrap_or(0)
    }

    pub fn is_monotone(&self) -> bool {
        self.clauses.iter().all(Clause::is_monotone)
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(|c| c.width() == 0)
    }

    /// True iff the assignment that sets exactly the members of `s` to 1
    /// satisfies every clause.
    pub fn is_model(&self, s: &VarSet) -> bool {
        self.clauses.iter().all(|c| {
            c.literals()
                .iter()
                .any(|l| l.is_positive() == s.contains(l.var()))
        })
    }

    /// Swaps the polarity of every literal on a variable of `alpha`,
    /// producing `G` with `G(y) = F(y XOR alpha)`. Clause order and widths
    /// are preserved.
    pub fn flip_literals(&self, alpha: &VarSet) -> CnfFormula {
        let clauses = self
            .clauses
            .iter()
            .map(|c| Clause {
                literals: c
                    .literals()
                    .iter()
                    .map(|&l| if alpha.contains(l.var()) { l.negated() } else { l })
                    .collect(),
            })
            .collect();
        CnfFormula {
            n: self.n,
            clauses,
        }
    }

    /// Replaces every clause of width `< k` by all its extensions with
    /// fresh positive literals, so that every clause has width exactly `k`.
    ///
    /// Assuming the minimum model weight is at most `n - k`, the result has
    /// the same minimum-weight models. `clause_limit` caps the expansion
    /// (the construction is combinatorial and meant for small instances).
    pub fn pad_to_uniform_width(
        &self,
        k: usize,
        clause_limit: usize,
    ) -> Result<CnfFormula, FormulaError> {
        let mut out: Vec<Clause> = Vec::new();
        for c in &self.clauses {
            if c.width() > k {
                return Err(FormulaError::WidthExceeded {
                    width: c.width(),
                    k,
                });
            }
            if c.width() == 0 {
                return Err(FormulaError::CannotPadEmptyClause);
            }
            if c.width() == k {
                out.push(c.clone());
                if out.len() > clause_limit {
                    return Err(FormulaError::ExpansionLimit { limit: clause_limit });
                }
                continue;
            }
            let missing = k - c.width();
            let free: Vec<u32> = (1..=self.n as u32).filter(|&v| !c.contains_var(v)).collect();
            if free.len() < missing {
                return Err(FormulaError::WidthExceeded {
                    width: c.width(),
                    k,
                });
            }
            for extra in free.iter().combinations(missing) {
                let mut lits = c.literals().to_vec();
                lits.extend(extra.into_iter().map(|&v| Literal::positive(v)));
                out.push(Clause { literals: lits });
                if out.len() > clause_limit {
                    return Err(FormulaError::ExpansionLimit { limit: clause_limit });
                }
            }
        }
        Ok(CnfFormula {
            n: self.n,
            clauses: out,
        })
    }
}
