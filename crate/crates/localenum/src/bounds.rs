//! Recurrence tables, closed forms, and the headline constants.
//!
//! The pessimistic survival process charges each marked edge a factor
//! `LAMBDA = 1/sqrt(3)`. `mprime_*` bounds depth-`d` ternary trees whose
//! root-to-leaf shoots carry at least `w` marked edges; `l_rec`/`m2_rec`
//! extend the bound to general trees tracking uniform weight and the
//! fullness budget `y`; `h_closed`/`g_closed` are their piecewise closed
//! forms. Branch weights follow the recurrences exactly; `w` arguments may
//! go negative during unrolling and only clamp at depth 0.

use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

/// Per-marked-edge survival factor of the pessimistic process.
pub const LAMBDA: f64 = 0.577_350_269_189_625_8; // 1/sqrt(3)

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("argument ({w}, {d}, y={y:?}) outside the valid region")]
    OutOfRange { w: f64, d: f64, y: Option<f64> },
}

/// Closed form for the maximum pessimistic survival value of a depth-`d`
/// ternary tree with shoot weight at least `w`. Three pieces with
/// breakpoints at `w = d` and `w = 2d`; accepts real arguments.
pub fn mprime_closed(w: f64, d: f64) -> Result<f64, BoundsError> {
    if !(0.0..=3.0 * d).contains(&w) || d < 0.0 {
        return Err(BoundsError::OutOfRange { w, d, y: None });
    }
    let l = LAMBDA;
    Ok(if w <= d {
        (2.0 + l).powf(w) * 3f64.powf(d - w)
    } else if w <= 2.0 * d {
        (1.0 + 2.0 * l).powf(w - d) * (2.0 + l).powf(2.0 * d - w)
    } else {
        (3.0 * l).powf(w - 2.0 * d) * (1.0 + 2.0 * l).powf(3.0 * d - w)
    })
}

/// The three-piece closed form for `l_rec(w, d, 0)`.
pub fn g_closed(w: f64, d: f64) -> Result<f64, BoundsError> {
    if !(0.0..=3.0 * d).contains(&w) || d < 0.0 {
        return Err(BoundsError::OutOfRange { w, d, y: None });
    }
    let l = LAMBDA;
    let l2 = l * l;
    Ok(if w <= d {
        (2.0 + l2).powf(d)
    } else if w <= 2.0 * d {
        (2.0 + l2).powf(2.0 * d - w) * (1.0 + l + l2).powf(w - d)
    } else {
        (1.0 + l + l2).powf(3.0 * d - w) * (2.0 * l + l2).powf(w - 2.0 * d)
    })
}

/// The five-piece closed form bounding `l_rec(w, d, y)` for `0 <= y <= d`,
/// with breakpoints at `w = d, d+y, 2d, 2d+y`. Adjacent pieces agree on
/// the breakpoints.
pub fn h_closed(w: f64, d: f64, y: f64) -> Result<f64, BoundsError> {
    if !(0.0..=3.0 * d).contains(&w) || !(0.0..=d).contains(&y) {
        return Err(BoundsError::OutOfRange { w, d, y: Some(y) });
    }
    let piece = if w <= d {
        1
    } else if w <= d + y {
        2
    } else if w <= 2.0 * d {
        3
    } else if w <= 2.0 * d + y {
        4
    } else {
        5
    };
    Ok(h_piece(piece, w, d, y))
}

/// Evaluates one of the five pieces of [`h_closed`] regardless of region,
/// for checking that adjacent pieces agree on their shared breakpoints.
pub fn h_piece(piece: u8, w: f64, d: f64, y: f64) -> f64 {
    let l = LAMBDA;
    let l2 = l * l;
    match piece {
        1 => (2.0 + l).powf(y) * (2.0 + l2).powf(d - y),
        2 => (2.0 + l).powf(y - (w - d)) * (1.0 + 2.0 * l).powf(w - d) * (2.0 + l2).powf(d - y),
        3 => {
            (1.0 + 2.0 * l).powf(y)
                * (2.0 + l2).powf(2.0 * d - w)
                * (1.0 + l + l2).powf(w - d - y)
        }
        4 => {
            (1.0 + 2.0 * l).powf(y - (w - 2.0 * d))
                * (3.0 * l).powf(w - 2.0 * d)
                * (1.0 + l + l2).powf(d - y)
        }
        5 => {
            (3.0 * l).powf(y)
                * (1.0 + l + l2).powf(3.0 * d - w)
                * (2.0 * l + l2).powf(w - 2.0 * d - y)
        }
        _ => unreachable!(),
    }
}

/// Memoized recurrence tables. Build once, query freely.
#[derive(Default)]
pub struct BoundTables {
    mprime: HashMap<(i64, u32), f64>,
    l: HashMap<(i64, u32, u32), f64>,
    m2: HashMap<(i64, u32), f64>,
}

impl BoundTables {
    pub fn new() -> Self {
        Self::default()
    }

    /// Dynamic program for the maximum pessimistic survival value: at each
    /// level mark `k` of the three children (`k ∈ 0..=3`) at factor
    /// `3 - k + k*LAMBDA`, consuming `k` weight. Equals [`mprime_closed`]
    /// on the integer grid.
    pub fn mprime_dp(&mut self, w: i64, d: u32) -> f64 {
        if d == 0 {
            return if w <= 0 { 1.0 } else { 0.0 };
        }
        if let Some(&v) = self.mprime.get(&(w, d)) {
            return v;
        }
        let v = (0..=3u32)
            .map(|k| {
                let factor = (3 - k) as f64 + k as f64 * LAMBDA;
                factor * self.mprime_dp(w - k as i64, d - 1)
            })
            .fold(0.0f64, f64::max);
        self.mprime.insert((w, d), v);
        v
    }

    /// The fullness-tracking recurrence. For `y >= 1` the branch weights
    /// are `2+l`, `1+2l`, `3l` (consuming 1, 2, 3 weight and one unit of
    /// fullness); at `y = 0` they are `2+l^2`, `1+l+l^2`, `2l+l^2`.
    pub fn l_rec(&mut self, w: i64, d: u32, y: u32) -> f64 {
        if d == 0 {
            return if w <= 0 { 1.0 } else { 0.0 };
        }
        if let Some(&v) = self.l.get(&(w, d, y)) {
            return v;
        }
        let l = LAMBDA;
        let l2 = l * l;
        let branches: [f64; 3] = if y >= 1 {
            [2.0 + l, 1.0 + 2.0 * l, 3.0 * l]
        } else {
            [2.0 + l2, 1.0 + l + l2, 2.0 * l + l2]
        };
        let ny = y.saturating_sub(1);
        let v = branches
            .iter()
            .enumerate()
            .map(|(i, &b)| b * self.l_rec(w - (i as i64 + 1), d - 1, ny))
            .fold(0.0f64, f64::max);
        self.l.insert((w, d, y), v);
        v
    }

    /// Binary-tree variant for the 2-CNF tail: branch weights `2`, `1+l`,
    /// `2l`, each consuming one extra unit of uniform weight for the
    /// missing third child.
    pub fn m2_rec(&mut self, w: i64, d: u32) -> f64 {
        if d == 0 {
            return if w <= 0 { 1.0 } else { 0.0 };
        }
        if let Some(&v) = self.m2.get(&(w, d)) {
            return v;
        }
        let branches = [2.0, 1.0 + LAMBDA, 2.0 * LAMBDA];
        let v = branches
            .iter()
            .enumerate()
            .map(|(i, &b)| b * self.m2_rec(w - (i as i64 + 1), d - 1))
            .fold(0.0f64, f64::max);
        self.m2.insert((w, d), v);
        v
    }
}

/// Expected-leaves bound for enumerating distance-`t` models of a 3-CNF,
/// with the regime's exact expression and per-factor bases.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RuntimeBound {
    pub regime: u8,
    /// Base of the `^n` factor.
    pub base_n: f64,
    /// Base of the `^t` factor.
    pub base_t: f64,
    pub value: f64,
}

/// The three-regime bound: `3^t` for `t <= n/3`, then the two exact
/// expressions whose rounded bases are `1.164^n * 1.9023^t` and
/// `1.1962^n * 1.7851^t`.
pub fn runtime_bound(n: u64, t: u64) -> Result<RuntimeBound, BoundsError> {
    if 2 * t > n {
        return Err(BoundsError::OutOfRange {
            w: t as f64,
            d: n as f64,
            y: None,
        });
    }
    let l = LAMBDA;
    let (regime, base_n, base_t) = if 3 * t <= n {
        (1, 1.0, 3.0)
    } else if 7 * t <= 3 * n {
        (2, 3.0 / (2.0 + l), (2.0 + l).powi(3) / 9.0)
    } else {
        (
            3,
            (2.0 + l) / (1.0 + 2.0 * l),
            (3.0 * (1.0 + 2.0 * l).powi(7) / (2.0 + l).powi(5)).powf(1.0 / 3.0),
        )
    };
    Ok(RuntimeBound {
        regime,
        base_n,
        base_t,
        value: base_n.powf(n as f64) * base_t.powf(t as f64),
    })
}

/// The headline constants, each paired with its published rounded value.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HeadlineConstants {
    /// Per-variable base of the distance-`n/2` enumeration bound
    /// (`base_n * sqrt(base_t)` of regime 3); rounds to 1.598.
    pub enum_half_base: f64,
    /// Majority lower-bound base `2 / enum_half_base`; rounds to 1.251.
    pub majority_lb_base: f64,
    /// `6^(1/4)`, the per-variable count of minimum models of the
    /// block-majority family; rounds to 1.565.
    pub maj_family_base: f64,
    /// The bounded-negation weight threshold.
    pub c: f64,
    /// Binary entropy `H2(c)`.
    pub h2_c: f64,
    /// `2^H2(c)`: per-variable cost of the exhaustive tail; rounds to
    /// 1.8204.
    pub entropy_base: f64,
    /// `(1+2l)^(2c-1) * (2+l)^(1-c)`: per-variable cost of the tree
    /// search below the threshold; rounds to 1.8204.
    pub mprime_base: f64,
    /// `|entropy_base - mprime_base|`; the threshold balances the sides.
    pub balance_gap: f64,
}

pub const BOUNDED_NEG_THRESHOLD: f64 = 0.71347;

pub fn binary_entropy(x: f64) -> f64 {
    assert!(0.0 < x && x < 1.0);
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

pub fn headline_constants() -> HeadlineConstants {
    let l = LAMBDA;
    let regime3 = runtime_bound(2, 1).expect("t = n/2 in range");
    let enum_half_base = regime3.base_n * regime3.base_t.sqrt();
    let c = BOUNDED_NEG_THRESHOLD;
    let h2_c = binary_entropy(c);
    let entropy_base = 2f64.powf(h2_c);
    let mprime_base = (1.0 + 2.0 * l).powf(2.0 * c - 1.0) * (2.0 + l).powf(1.0 - c);
    HeadlineConstants {
        enum_half_base,
        majority_lb_base: 2.0 / enum_half_base,
        maj_family_base: 6f64.powf(0.25),
        c,
        h2_c,
        entropy_base,
        mprime_base,
        balance_gap: (entropy_base - mprime_base).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn lambda_is_inverse_sqrt_three() {
        assert_eq!(LAMBDA, 1.0 / 3f64.sqrt());
        assert!((LAMBDA * LAMBDA * 3.0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mprime_closed_examples() {
        assert!(close(mprime_closed(0.0, 2.0).unwrap(), 9.0, 1e-12));
        assert!(close(mprime_closed(1.0, 1.0).unwrap(), 2.0 + LAMBDA, 1e-12));
        assert!(close(mprime_closed(3.0, 1.0).unwrap(), 3f64.sqrt(), 1e-12));
        assert!(mprime_closed(-1.0, 1.0).is_err());
        assert!(mprime_closed(4.0, 1.0).is_err());
    }

    #[test]
    fn mprime_dp_matches_closed_form_on_grid() {
        let mut tables = BoundTables::new();
        for d in 0..=15u32 {
            for w in 0..=3 * d as i64 {
                let dp = tables.mprime_dp(w, d);
                let cf = mprime_closed(w as f64, d as f64).unwrap();
                assert!(close(dp, cf, 1e-9), "M'({w},{d}): dp={dp} closed={cf}");
            }
        }
    }

    #[test]
    fn mprime_dp_base_cases() {
        let mut t = BoundTables::new();
        assert_eq!(t.mprime_dp(0, 5), 243.0);
        assert!(close(t.mprime_dp(3, 1), 3.0 * LAMBDA, 1e-12));
    }

    #[test]
    fn l_rec_base_and_one_step() {
        let mut t = BoundTables::new();
        assert_eq!(t.l_rec(0, 0, 5), 1.0);
        assert_eq!(t.l_rec(1, 0, 0), 0.0);
        assert!(close(t.l_rec(1, 1, 0), 2.0 + 1.0 / 3.0, 1e-12));
        assert!(close(t.l_rec(1, 1, 1), 2.0 + LAMBDA, 1e-12));
    }

    #[test]
    fn l_rec_dominated_by_h_closed() {
        let mut t = BoundTables::new();
        for d in 0..=12u32 {
            for y in 0..=d {
                for w in 0..=3 * d as i64 {
                    let l = t.l_rec(w, d, y);
                    let h = h_closed(w as f64, d as f64, y as f64).unwrap();
                    assert!(
                        l <= h * (1.0 + 1e-9) + 1e-12,
                        "L({w},{d},{y})={l} > H={h}"
                    );
                }
            }
        }
    }

    #[test]
    fn l_rec_zero_fullness_dominated_by_g_closed() {
        let mut t = BoundTables::new();
        for d in 0..=12u32 {
            for w in 0..=3 * d as i64 {
                let l = t.l_rec(w, d, 0);
                let g = g_closed(w as f64, d as f64).unwrap();
                assert!(l <= g * (1.0 + 1e-9) + 1e-12, "L({w},{d},0)={l} > G={g}");
            }
        }
    }

    #[test]
    fn m2_examples_and_dominance() {
        let mut t = BoundTables::new();
        assert_eq!(t.m2_rec(0, 5), 32.0);
        assert_eq!(t.m2_rec(1, 1), 2.0);
        for d in 0..=12u32 {
            for w in 0..=3 * d as i64 {
                let m2 = t.m2_rec(w, d);
                let l0 = t.l_rec(w, d, 0);
                assert!(m2 <= l0 * (1.0 + 1e-9) + 1e-12, "M2({w},{d})={m2} > L0={l0}");
            }
        }
    }

    #[test]
    fn l_rec_monotonicity() {
        let mut t = BoundTables::new();
        for d in 0..=10u32 {
            for y in 0..=d {
                for w in 0..3 * d as i64 {
                    // Non-increasing in w.
                    assert!(t.l_rec(w, d, y) >= t.l_rec(w + 1, d, y) - 1e-12);
                }
                for w in 0..=3 * d as i64 {
                    // More fullness budget never hurts.
                    assert!(t.l_rec(w, d, y) >= t.l_rec(w, d, 0) - 1e-12);
                }
            }
        }
    }

    #[test]
    fn l_rec_below_mprime_for_large_fullness() {
        let mut t = BoundTables::new();
        for d in 0..=10u32 {
            for y in d..=d + 4 {
                for w in 0..=3 * d as i64 {
                    let l = t.l_rec(w, d, y);
                    let m = t.mprime_dp(w, d);
                    assert!(l <= m * (1.0 + 1e-9) + 1e-12, "L({w},{d},{y})={l} > M'={m}");
                }
            }
        }
    }

    #[test]
    fn h_piece_boundaries_agree() {
        for d in 0..=12u32 {
            for y in 0..=d {
                let (df, yf) = (d as f64, y as f64);
                let pairs = [
                    (1u8, 2u8, df),
                    (2, 3, df + yf),
                    (3, 4, 2.0 * df),
                    (4, 5, 2.0 * df + yf),
                ];
                for (a, b, w) in pairs {
                    if w <= 3.0 * df {
                        let ha = h_piece(a, w, df, yf);
                        let hb = h_piece(b, w, df, yf);
                        assert!(
                            close(ha, hb, 1e-9),
                            "pieces {a}/{b} at w={w}, d={d}, y={y}: {ha} vs {hb}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn g_piece_boundaries_agree() {
        let l = LAMBDA;
        let l2 = l * l;
        for d in 1..=12u32 {
            let df = d as f64;
            let g1 = (2.0 + l2).powf(df);
            let g2_at_d = (2.0 + l2).powf(2.0 * df - df) * (1.0 + l + l2).powf(0.0);
            assert!(close(g1, g2_at_d, 1e-9));
            let g2_at_2d = (2.0 + l2).powf(0.0) * (1.0 + l + l2).powf(df);
            let g3_at_2d = (1.0 + l + l2).powf(df) * (2.0 * l + l2).powf(0.0);
            assert!(close(g2_at_2d, g3_at_2d, 1e-9));
        }
    }

    #[test]
    fn h_collapses_to_g_at_zero_fullness() {
        for d in 0..=12u32 {
            for w in 0..=3 * d as i64 {
                let h = h_closed(w as f64, d as f64, 0.0).unwrap();
                let g = g_closed(w as f64, d as f64).unwrap();
                assert!(close(h, g, 1e-9), "H({w},{d},0)={h} != G={g}");
            }
        }
    }

    #[test]
    fn g_closed_example() {
        let expected = (2.0 + 1.0 / 3.0) * (2.0 + 1.0 / 3.0) * (2.0 + 1.0 / 3.0);
        assert!(close(g_closed(0.0, 3.0).unwrap(), expected, 1e-12));
        assert!((g_closed(0.0, 3.0).unwrap() - 12.7037).abs() < 1e-3);
    }

    #[test]
    fn runtime_bound_regimes() {
        let r2 = runtime_bound(7, 3).unwrap();
        assert_eq!(r2.regime, 2);
        assert!((r2.base_n - 1.164).abs() < 1e-3);
        assert!((r2.base_t - 1.9023).abs() < 1e-3);

        let r3 = runtime_bound(2, 1).unwrap();
        assert_eq!(r3.regime, 3);
        assert!((r3.base_n - 1.1962).abs() < 1e-3);
        assert!((r3.base_t - 1.7851).abs() < 1e-3);

        let r1 = runtime_bound(9, 3).unwrap();
        assert_eq!(r1.regime, 1);
        assert!((r1.value - 27.0).abs() < 1e-9);

        assert!(runtime_bound(4, 3).is_err());
    }

    #[test]
    fn headline_values() {
        let h = headline_constants();
        assert!((h.enum_half_base - 1.598).abs() < 1e-3);
        assert!((h.majority_lb_base - 1.251).abs() < 1e-3);
        assert!((h.maj_family_base - 1.565).abs() < 1e-3);
        assert!((h.entropy_base - 1.8204).abs() < 1e-3);
        assert!((h.mprime_base - 1.8204).abs() < 1e-3);
        assert!(h.balance_gap < 1e-3);
    }
}
