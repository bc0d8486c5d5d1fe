//! QES truncation points of span-2, step-1 recurrences.
//!
//! The series truncates at `M` when `P_M ≠ 0` and `P_{M+1} = P_{M+2} = 0`;
//! every later entry then vanishes. Since the relation producing `P_{M+2}`
//! reads `c0·P_{M+2} + c1·P_{M+1} + c2·P_M = 0`, a truncation point is a
//! common root of `P_{M+1}` and `c2(M+2)`.

use serde::{Deserialize, Serialize};

use super::generate::{bind, generate_at, generate_sequence};
use super::LabError;
use crate::algebra::{refine_root, sturm_isolate_roots, Bindings, Rat, RootInterval, UPoly};
use crate::ode::Recurrence;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericCandidate {
    pub interval: RootInterval,
    pub approx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationRecord {
    /// Index of the last nonzero entry.
    pub m: usize,
    /// Roots of the trailing coefficient of the relation producing `P_{M+2}`.
    pub c_factor_roots: Vec<RootInterval>,
    /// Roots of `P_{M+1}`; empty with `p_identically_zero` when it vanishes
    /// for every spectral value.
    pub p_roots: Vec<RootInterval>,
    pub p_identically_zero: bool,
    /// Rational truncation points, each verified by exact regeneration.
    pub qes_points: Vec<Rat>,
    /// Irrational common roots, refined but not verified exactly.
    pub numeric_only: Vec<NumericCandidate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationResult {
    pub spectral: String,
    pub lo: Rat,
    pub hi: Rat,
    pub m_max: usize,
    pub records: Vec<TruncationRecord>,
}

impl TruncationResult {
    /// All verified `(M, point)` pairs in index order.
    pub fn points(&self) -> Vec<(usize, Rat)> {
        self.records
            .iter()
            .flat_map(|r| r.qes_points.iter().map(move |p| (r.m, p.clone())))
            .collect()
    }

    pub fn has_point(&self, x: &Rat) -> bool {
        self.points().iter().any(|(_, p)| p == x)
    }
}

fn in_range(x: &Rat, lo: &Rat, hi: &Rat) -> bool {
    lo <= x && x <= hi
}

/// Real roots in `[lo, hi]`, rational ones reported as exact points.
fn roots_in(p: &UPoly, lo: &Rat, hi: &Rat) -> Result<Vec<RootInterval>, LabError> {
    let rational = p.rational_roots()?;
    let mut out = sturm_isolate_roots(p, lo, hi)?;
    for iv in out.iter_mut() {
        if let Some(r) = rational.iter().find(|r| iv.contains(r) || (*r == &iv.lo && *r == &iv.hi)) {
            iv.lo = r.clone();
            iv.hi = r.clone();
        }
    }
    Ok(out)
}

pub fn truncation_scan(
    rec: &Recurrence,
    b: &Bindings,
    m_max: usize,
    lo: &Rat,
    hi: &Rat,
) -> Result<TruncationResult, LabError> {
    if rec.span() != 2 || rec.step != 1 {
        return Err(LabError::WrongShape(format!(
            "truncation needs span 2 and step 1, got span {} step {}",
            rec.span(),
            rec.step
        )));
    }
    if lo > hi {
        return Err(LabError::WrongShape(format!("empty search interval [{lo}, {hi}]")));
    }
    let r = bind(&rec.with_top(0), b)?;
    let seq = generate_sequence(&r, &Bindings::new(), m_max + 2)?;
    let spec = r.spectral.clone();
    let refine_width = Rat::new(1, 1_000_000_000_000);
    let mut records = Vec::with_capacity(m_max + 1);

    for m in 0..=m_max {
        let next = &seq.entries[m + 1];
        let c2 = r.coeff_at(2, (m + 2) as i64).to_upoly(&spec)?;
        let c_factor_roots = if c2.is_zero() { Vec::new() } else { roots_in(&c2, lo, hi)? };
        let p_identically_zero = next.is_zero();
        let p_roots = if p_identically_zero { Vec::new() } else { roots_in(next, lo, hi)? };

        // common roots: gcd, treating a zero polynomial as no constraint
        let common = match (c2.is_zero(), p_identically_zero) {
            (true, true) => None,
            (true, false) => Some(next.clone()),
            (false, true) => Some(c2.clone()),
            (false, false) => Some(next.gcd(&c2)),
        };
        let mut qes_points = Vec::new();
        let mut numeric_only = Vec::new();
        if let Some(g) = common.filter(|g| g.degree().is_some_and(|d| d > 0)) {
            let rational: Vec<Rat> = g.rational_roots()?.into_iter().filter(|x| in_range(x, lo, hi)).collect();
            for x in &rational {
                if verify(&r, x, m, m_max)? {
                    qes_points.push(x.clone());
                }
            }
            let mut rest = g.square_free_part()?;
            for x in &rational {
                rest = rest.div_rem(&UPoly::linear_root(&spec, x)).0;
            }
            if rest.degree().is_some_and(|d| d > 0) {
                for iv in sturm_isolate_roots(&rest, lo, hi)? {
                    let iv = refine_root(&rest, &iv, &refine_width)?;
                    numeric_only.push(NumericCandidate {
                        approx: iv.midpoint_f64(),
                        interval: iv,
                    });
                }
            }
        }
        records.push(TruncationRecord {
            m,
            c_factor_roots,
            p_roots,
            p_identically_zero,
            qes_points,
            numeric_only,
        });
    }
    Ok(TruncationResult {
        spectral: spec,
        lo: lo.clone(),
        hi: hi.clone(),
        m_max,
        records,
    })
}

/// Regenerates the sequence at `x`: `P_M ≠ 0` and every later entry through
/// `max(M_max, M + 2) + 2` vanishes.
fn verify(r: &Recurrence, x: &Rat, m: usize, m_max: usize) -> Result<bool, LabError> {
    let upto = m_max.max(m + 2) + 2;
    let vals = match generate_at(r, &Bindings::new(), x, upto) {
        Ok(v) => v,
        Err(LabError::LeadingZeroAt { .. }) => return Ok(false),
        Err(e) => return Err(e),
    };
    Ok(!vals[m].is_zero() && vals[m + 1..].iter().all(Rat::is_zero))
}
