//! DIMACS CNF reader and writer.
//!
//! The reader accepts the usual format: optional `c` comment lines, one
//! `p cnf <vars> <clauses>` header, then zero-terminated clauses which may
//! span lines. Duplicate literals inside a clause are collapsed silently;
//! tautological clauses are an error.

use super::{Clause, CnfFormula, FormulaError, Literal};
use std::fmt::Write as _;

pub fn parse(text: &str) -> Result<CnfFormula, FormulaError> {
    let mut tokens = text
        .lines()
        .filter(|line| !line.trim_start().starts_with('c'))
        .flat_map(|line| line.split_whitespace());

    match (tokens.next(), tokens.next()) {
        (Some("p"), Some("cnf")) => {}
        other => {
            return Err(FormulaError::Dimacs(format!(
                "expected `p cnf <vars> <clauses>` header, found {other:?}"
            )))
        }
    }
    let n: usize = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| FormulaError::Dimacs("malformed variable count in header".into()))?;
    let m: usize = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| FormulaError::Dimacs("malformed clause count in header".into()))?;

    let mut clauses: Vec<Clause> = Vec::with_capacity(m);
    let mut current: Vec<Literal> = Vec::new();
    for tok in tokens {
        let lit: i64 = tok
            .parse()
            .map_err(|_| FormulaError::Dimacs(format!("bad token {tok:?}")))?;
        if lit == 0 {
            let clause_index = clauses.len();
            let clause = Clause::new(std::mem::take(&mut current)).map_err(|e| match e {
                FormulaError::Tautology { var, .. } => FormulaError::Tautology { clause_index, var },
                other => other,
            })?;
            clauses.push(clause);
            continue;
        }
        let var = lit.unsigned_abs();
        if var as usize > n {
            return Err(FormulaError::LiteralOutOfRange {
                clause_index: clauses.len(),
                literal: lit,
                n,
            });
        }
        current.push(if lit > 0 {
            Literal::positive(var as u32)
        } else {
            Literal::negative(var as u32)
        });
    }
    if !current.is_empty() {
        return Err(FormulaError::Dimacs(
            "unterminated clause at end of input".into(),
        ));
    }
    if clauses.len() != m {
        return Err(FormulaError::Dimacs(format!(
            "header declares {m} clauses, found {}",
            clauses.len()
        )));
    }
    CnfFormula::new(n, clauses)
}

pub fn write(f: &CnfFormula) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", f.num_vars(), f.num_clauses());
    for c in f.clauses() {
        for l in c.literals() {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        let _ = writeln!(out, "0");
    }
    out
}
