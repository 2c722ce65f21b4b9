//! Enumeration of minimum-Hamming-weight satisfying assignments of k-CNFs
//! by randomized pruned transversal-tree search, together with the
//! machinery to verify the algorithm's running-time analysis at desk
//! scale: explicit trees with edge markings and survival probabilities,
//! recurrence tables with piecewise closed forms, and brute-force oracles
//! for every enumeration claim.
//!
//! ```
//! use localenum::formula::gen;
//! use localenum::ordering::{canonical_ordering, EdgeOrderPolicy, OrderingMode};
//! use localenum::search;
//!
//! let f = gen::maj(8, 3).unwrap();
//! let ord = canonical_ordering(&f, OrderingMode::GeneralCanonical);
//! let (t, outcome) =
//!     search::enumerate_min(&f, &ord, EdgeOrderPolicy::SeededRandom { seed: 7 }).unwrap();
//! assert_eq!((t, outcome.transversals.len()), (4, 36));
//! ```
//!
//! The `localenum` binary exposes the whole surface as subcommands; see
//! the crate README.

pub mod analysis;
pub mod bounds;
pub mod formula;
pub mod oracle;
pub mod ordering;
pub mod search;
pub mod solvers;

pub use formula::{Clause, CnfFormula, FormulaError, Literal, VarSet};
pub use ordering::{ClauseOrdering, EdgeOrderPolicy, OrderingMode};
pub use search::{SearchError, SearchOutcome};
