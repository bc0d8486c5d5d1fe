//! Recurrences exactly as printed, kept for regression comparison with the
//! derived ones.

use serde::{Deserialize, Serialize};

use crate::algebra::{factor_linear, MPoly};
use crate::ode::Recurrence;

fn p(s: &str) -> MPoly {
    s.parse().expect("literal polynomial")
}

/// Step-2 relation for `Q_n(s)`, indices `n+2, n, n−2`.
pub fn printed_kink_q() -> Recurrence {
    Recurrence::new(
        "n",
        "s",
        2,
        2,
        vec![
            p("eps2*(eps2 + 1)"),
            p("-((2*eps2 + 1)*n^2 + (5*eps2 + 2 + 4*s*eps2)*n - 4*s^2 + 2*s*eps2 + 3 - 9*eps2)"),
            p("n*(n - 1)*(n^2 + n*(4*s - 2) + 4*s^2 - 4*s - 15)"),
        ],
    )
    .expect("nonzero leading coefficient")
}

/// Even sector `P_m = Q_{2m}`.
pub fn printed_kink_even() -> Recurrence {
    Recurrence::new(
        "m",
        "s",
        1,
        0,
        vec![
            p("eps2*(eps2 + 1)"),
            p("-((8*eps2 + 4)*m^2 + (8*s*eps2 - 6*eps2 - 4)*m - 4*s^2 - 6*s*eps2 + 3 - 11*eps2)"),
            p("(m - 1)*(2*m - 3)*(8*m^2 + (16*s - 24)*m + 8*s^2 - 24*s - 14)"),
        ],
    )
    .expect("nonzero leading coefficient")
}

/// Odd sector `P_m = Q_{2m+1}`.
pub fn printed_kink_odd() -> Recurrence {
    Recurrence::new(
        "m",
        "s",
        1,
        0,
        vec![
            p("eps2*(eps2 + 1)"),
            p("-((8*eps2 + 4)*m^2 + (8*s*eps2 + 2*eps2)*m - 4*s^2 - 2*s*eps2 + 2 - 12*eps2)"),
            p("(m - 1)*(2*m - 1)*(8*m^2 + (16*s - 16)*m + 8*s^2 - 16*s - 24)"),
        ],
    )
    .expect("nonzero leading coefficient")
}

/// Angular relation for `P_n(β)` with the `n`-independent square.
pub fn printed_bhaduri() -> Recurrence {
    Recurrence::new(
        "n",
        "beta",
        1,
        0,
        vec![
            p("n + 2*a - 1"),
            p("-2*(b - c)*(n - 1 + a)"),
            p("(n - 1)*((beta + 1)^2/4 - (a + b + c - 3/2)^2)"),
        ],
    )
    .expect("nonzero leading coefficient")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffDiff {
    pub j: usize,
    /// `derived − printed`, factored for display.
    pub difference: String,
    pub difference_poly: MPoly,
}

/// Coefficient-wise comparison of two recurrences with the same shape and
/// indexing; empty when they agree exactly.
pub fn diff_recurrences(derived: &Recurrence, printed: &Recurrence) -> Vec<CoeffDiff> {
    let d = derived.with_top(printed.top);
    let len = d.coeffs.len().max(printed.coeffs.len());
    (0..len)
        .filter_map(|j| {
            let a = d.coeffs.get(j).cloned().unwrap_or_default();
            let b = printed.coeffs.get(j).cloned().unwrap_or_default();
            let diff = a.sub(&b);
            (!diff.is_zero()).then(|| CoeffDiff {
                j,
                difference: factor_linear(&diff, &d.index).to_string(),
                difference_poly: diff,
            })
        })
        .collect()
}
