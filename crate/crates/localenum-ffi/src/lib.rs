//! C ABI over the enumeration engine: opaque handles, status codes, and a
//! thread-local last-error message. The header `include/localenum.h` is
//! generated by cbindgen at build time.
//!
//! Ownership rules: every `*_new`/`*_parse`/`*_gen_*` output must be
//! released with the matching `*_free`; assignment buffers are caller
//! allocated and filled by the accessor functions.

use libc::{c_char, size_t};
use localenum::formula::{dimacs, gen, CnfFormula, VarSet};
use localenum::ordering::{canonical_ordering, EdgeOrderPolicy, OrderingMode};
use localenum::search::{self, SearchError, SearchOutcome};
use localenum::solvers;
use std::cell::RefCell;
use std::ffi::{CStr, CString};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LeStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    ParseError = 3,
    /// A model of weight below the requested depth exists.
    PromiseViolation = 4,
    Unsatisfiable = 5,
    LimitExceeded = 6,
}

/// Clause ordering selector.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LeOrdering {
    Canonical = 0,
    AsGiven = 1,
}

/// Tree-edge ordering selector; `seed` is ignored for `Fixed`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LeEdgeOrder {
    Fixed = 0,
    Random = 1,
}

/// Opaque formula handle.
pub struct LeFormula {
    inner: CnfFormula,
}

/// Opaque enumeration-outcome handle.
pub struct LeOutcome {
    assignments: Vec<Vec<u32>>,
    depth: usize,
    leaves_visited: u64,
    nodes_expanded: u64,
    edges_pruned: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap());
}

/// Message for the most recent error on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn le_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

fn ordering_mode(order: LeOrdering) -> OrderingMode {
    match order {
        LeOrdering::Canonical => OrderingMode::GeneralCanonical,
        LeOrdering::AsGiven => OrderingMode::AsGiven,
    }
}

fn edge_policy(edge: LeEdgeOrder, seed: u64) -> EdgeOrderPolicy {
    match edge {
        LeEdgeOrder::Fixed => EdgeOrderPolicy::FixedLexicographic,
        LeEdgeOrder::Random => EdgeOrderPolicy::SeededRandom { seed },
    }
}

fn search_status(e: &SearchError) -> LeStatus {
    match e {
        SearchError::PromiseViolation { .. } => LeStatus::PromiseViolation,
        SearchError::Unsatisfiable { .. } => LeStatus::Unsatisfiable,
    }
}

unsafe fn write_formula(out: *mut *mut LeFormula, f: CnfFormula) -> LeStatus {
    *out = Box::into_raw(Box::new(LeFormula { inner: f }));
    LeStatus::Ok
}

/// Parses a DIMACS CNF string into a formula handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn le_formula_parse_dimacs(
    text: *const c_char,
    out: *mut *mut LeFormula,
) -> LeStatus {
    if text.is_null() || out.is_null() {
        set_error("null argument");
        return LeStatus::NullArgument;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_error("input is not valid UTF-8");
        return LeStatus::ParseError;
    };
    match dimacs::parse(text) {
        Ok(f) => write_formula(out, f),
        Err(e) => {
            set_error(e.to_string());
            LeStatus::ParseError
        }
    }
}

/// Block-majority generator; `n` must be divisible by `2(k-1)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn le_formula_gen_maj(
    n: size_t,
    k: size_t,
    out: *mut *mut LeFormula,
) -> LeStatus {
    if out.is_null() {
        set_error("null argument");
        return LeStatus::NullArgument;
    }
    if k < 2 {
        set_error("k must be at least 2");
        return LeStatus::InvalidArgument;
    }
    match gen::maj(n, k) {
        Ok(f) => write_formula(out, f),
        Err(e) => {
            set_error(e.to_string());
            LeStatus::InvalidArgument
        }
    }
}

/// `t` pairwise-disjoint positive width-2 clauses over `n` variables.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn le_formula_gen_disjoint2(
    t: size_t,
    n: size_t,
    out: *mut *mut LeFormula,
) -> LeStatus {
    if out.is_null() {
        set_error("null argument");
        return LeStatus::NullArgument;
    }
    match gen::disjoint_2cnf(t, n) {
        Ok(f) => write_formula(out, f),
        Err(e) => {
            set_error(e.to_string());
            LeStatus::InvalidArgument
        }
    }
}

/// Seeded random k-CNF with `m` clauses of width exactly `k`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn le_formula_gen_random(
    n: size_t,
    m: size_t,
    k: size_t,
    monotone: bool,
    seed: u64,
    out: *mut *mut LeFormula,
) -> LeStatus {
    if out.is_null() {
        set_error("null argument");
        return LeStatus::NullArgument;
    }
    if k > n {
        set_error("clause width exceeds variable count");
        return LeStatus::InvalidArgument;
    }
    write_formula(
        out,
        gen::random_cnf(gen::RandomCnf {
            n,
            m,
            k,
            monotone,
            seed,
        }),
    )
}

/// # Safety
/// `f` must be a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn le_formula_num_vars(f: *const LeFormula) -> size_t {
    if f.is_null() {
        return 0;
    }
    (*f).inner.num_vars()
}

/// # Safety
/// `f` must be a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn le_formula_num_clauses(f: *const LeFormula) -> size_t {
    if f.is_null() {
        return 0;
    }
    (*f).inner.num_clauses()
}

/// Serializes a formula to DIMACS. The returned string must be released
/// with [`le_string_free`]; null on error.
///
/// # Safety
/// `f` must be a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn le_formula_to_dimacs(f: *const LeFormula) -> *mut c_char {
    if f.is_null() {
        return std::ptr::null_mut();
    }
    match CString::new(dimacs::write(&(*f).inner)) {
        Ok(s) => s.into_raw(),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must come from [`le_formula_to_dimacs`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn le_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a formula handle. Null is a no-op.
///
/// # Safety
/// `f` must be a pointer previously returned by a formula constructor and
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn le_formula_free(f: *mut LeFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

unsafe fn alpha_from_raw(
    f: &CnfFormula,
    alpha: *const u32,
    alpha_len: size_t,
) -> Result<VarSet, LeStatus> {
    let mut set = VarSet::empty(f.num_vars());
    if alpha_len == 0 {
        return Ok(set);
    }
    if alpha.is_null() {
        set_error("null alpha with nonzero length");
        return Err(LeStatus::NullArgument);
    }
    for i in 0..alpha_len {
        let v = *alpha.add(i);
        if v == 0 || v as usize > f.num_vars() {
            set_error(format!("alpha variable {v} out of range"));
            return Err(LeStatus::InvalidArgument);
        }
        set.insert(v);
    }
    Ok(set)
}

unsafe fn write_outcome(out: *mut *mut LeOutcome, outcome: SearchOutcome) -> LeStatus {
    let boxed = LeOutcome {
        assignments: outcome.transversals.iter().map(|s| s.to_vec()).collect(),
        depth: outcome.depth,
        leaves_visited: outcome.leaves_visited,
        nodes_expanded: outcome.nodes_expanded,
        edges_pruned: outcome.edges_pruned,
    };
    *out = Box::into_raw(Box::new(boxed));
    LeStatus::Ok
}

/// Enumerates all models at Hamming distance exactly `t` from the center
/// given as an array of `alpha_len` 1-based variable indices (the
/// variables set to 1). Requires that no model lies closer.
///
/// # Safety
/// `f` and `out` must be valid; `alpha` must point to `alpha_len` entries.
#[no_mangle]
pub unsafe extern "C" fn le_enumerate_at_distance(
    f: *const LeFormula,
    alpha: *const u32,
    alpha_len: size_t,
    t: size_t,
    order: LeOrdering,
    edge_order: LeEdgeOrder,
    seed: u64,
    out: *mut *mut LeOutcome,
) -> LeStatus {
    if f.is_null() || out.is_null() {
        set_error("null argument");
        return LeStatus::NullArgument;
    }
    let formula = &(*f).inner;
    let center = match alpha_from_raw(formula, alpha, alpha_len) {
        Ok(a) => a,
        Err(status) => return status,
    };
    match search::enum_ball(
        formula,
        &center,
        t,
        ordering_mode(order),
        edge_policy(edge_order, seed),
    ) {
        Ok(outcome) => write_outcome(out, outcome),
        Err(e) => {
            set_error(e.to_string());
            search_status(&e)
        }
    }
}

/// Finds the minimum model weight and enumerates all models there.
///
/// # Safety
/// `f` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn le_enumerate_min(
    f: *const LeFormula,
    order: LeOrdering,
    edge_order: LeEdgeOrder,
    seed: u64,
    out: *mut *mut LeOutcome,
) -> LeStatus {
    if f.is_null() || out.is_null() {
        set_error("null argument");
        return LeStatus::NullArgument;
    }
    let formula = &(*f).inner;
    let ord = canonical_ordering(formula, ordering_mode(order));
    match search::enumerate_min(formula, &ord, edge_policy(edge_order, seed)) {
        Ok((_, outcome)) => write_outcome(out, outcome),
        Err(e) => {
            set_error(e.to_string());
            search_status(&e)
        }
    }
}

/// # Safety
/// `o` must be a live outcome handle.
#[no_mangle]
pub unsafe extern "C" fn le_outcome_count(o: *const LeOutcome) -> size_t {
    if o.is_null() {
        return 0;
    }
    (*o).assignments.len()
}

/// # Safety
/// `o` must be a live outcome handle.
#[no_mangle]
pub unsafe extern "C" fn le_outcome_depth(o: *const LeOutcome) -> size_t {
    if o.is_null() {
        return 0;
    }
    (*o).depth
}

/// # Safety
/// `o` must be a live outcome handle.
#[no_mangle]
pub unsafe extern "C" fn le_outcome_leaves_visited(o: *const LeOutcome) -> u64 {
    if o.is_null() {
        return 0;
    }
    (*o).leaves_visited
}

/// # Safety
/// `o` must be a live outcome handle.
#[no_mangle]
pub unsafe extern "C" fn le_outcome_nodes_expanded(o: *const LeOutcome) -> u64 {
    if o.is_null() {
        return 0;
    }
    (*o).nodes_expanded
}

/// # Safety
/// `o` must be a live outcome handle.
#[no_mangle]
pub unsafe extern "C" fn le_outcome_edges_pruned(o: *const LeOutcome) -> u64 {
    if o.is_null() {
        return 0;
    }
    (*o).edges_pruned
}

/// Number of variables in the `index`-th assignment.
///
/// # Safety
/// `o` must be a live outcome handle.
#[no_mangle]
pub unsafe extern "C" fn le_outcome_assignment_len(o: *const LeOutcome, index: size_t) -> size_t {
    if o.is_null() {
        return 0;
    }
    let outcome = &*o;
    outcome.assignments.get(index).map_or(0, Vec::len)
}

/// Copies the `index`-th assignment (ascending 1-based variable indices)
/// into `buf` and returns the number of entries written, at most
/// `buf_len`.
///
/// # Safety
/// `o` must be live; `buf` must point to at least `buf_len` entries.
#[no_mangle]
pub unsafe extern "C" fn le_outcome_assignment(
    o: *const LeOutcome,
    index: size_t,
    buf: *mut u32,
    buf_len: size_t,
) -> size_t {
    if o.is_null() || buf.is_null() {
        return 0;
    }
    let outcome = &*o;
    let Some(vars) = outcome.assignments.get(index) else {
        return 0;
    };
    let count = vars.len().min(buf_len);
    std::ptr::copy_nonoverlapping(vars.as_ptr(), buf, count);
    count
}

/// Releases an outcome handle. Null is a no-op.
///
/// # Safety
/// `o` must be a pointer previously returned by an enumeration call and
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn le_outcome_free(o: *mut LeOutcome) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Minimum model weight, written to `out_t`.
///
/// # Safety
/// `f` and `out_t` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn le_tau(
    f: *const LeFormula,
    order: LeOrdering,
    edge_order: LeEdgeOrder,
    seed: u64,
    out_t: *mut size_t,
) -> LeStatus {
    if f.is_null() || out_t.is_null() {
        set_error("null argument");
        return LeStatus::NullArgument;
    }
    match solvers::tau(
        &(*f).inner,
        ordering_mode(order),
        edge_policy(edge_order, seed),
    ) {
        Ok(t) => {
            *out_t = t;
            LeStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            LeStatus::Unsatisfiable
        }
    }
}

/// Whether a model lies within distance `t` of the center; result in
/// `out_sat`.
///
/// # Safety
/// `f` and `out_sat` must be valid; `alpha` must point to `alpha_len`
/// entries.
#[no_mangle]
pub unsafe extern "C" fn le_ball_sat(
    f: *const LeFormula,
    alpha: *const u32,
    alpha_len: size_t,
    t: size_t,
    order: LeOrdering,
    edge_order: LeEdgeOrder,
    seed: u64,
    out_sat: *mut bool,
) -> LeStatus {
    if f.is_null() || out_sat.is_null() {
        set_error("null argument");
        return LeStatus::NullArgument;
    }
    let formula = &(*f).inner;
    let center = match alpha_from_raw(formula, alpha, alpha_len) {
        Ok(a) => a,
        Err(status) => return status,
    };
    match solvers::ball_sat(
        formula,
        &center,
        t,
        ordering_mode(order),
        edge_policy(edge_order, seed),
    ) {
        Ok((sat, _)) => {
            *out_sat = sat;
            LeStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            LeStatus::InvalidArgument
        }
    }
}

/// 3-SAT decision via distance-`ceil(n/2)` searches from both poles.
///
/// # Safety
/// `f` and `out_sat` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn le_sat3(
    f: *const LeFormula,
    edge_order: LeEdgeOrder,
    seed: u64,
    out_sat: *mut bool,
) -> LeStatus {
    if f.is_null() || out_sat.is_null() {
        set_error("null argument");
        return LeStatus::NullArgument;
    }
    match solvers::sat3(
        &(*f).inner,
        OrderingMode::GeneralCanonical,
        edge_policy(edge_order, seed),
    ) {
        Ok((sat, _)) => {
            *out_sat = sat;
            LeStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            LeStatus::InvalidArgument
        }
    }
}

/// The headline constants of the running-time analysis.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct LeHeadlineConstants {
    pub enum_half_base: f64,
    pub majority_lb_base: f64,
    pub maj_family_base: f64,
    pub c: f64,
    pub h2_c: f64,
    pub entropy_base: f64,
    pub mprime_base: f64,
    pub balance_gap: f64,
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn le_headline_constants(out: *mut LeHeadlineConstants) -> LeStatus {
    if out.is_null() {
        set_error("null argument");
        return LeStatus::NullArgument;
    }
    let h = localenum::bounds::headline_constants();
    *out = LeHeadlineConstants {
        enum_half_base: h.enum_half_base,
        majority_lb_base: h.majority_lb_base,
        maj_family_base: h.maj_family_base,
        c: h.c,
        h2_c: h.h2_c,
        entropy_base: h.entropy_base,
        mprime_base: h.mprime_base,
        balance_gap: h.balance_gap,
    };
    LeStatus::Ok
}
