//! Display factoring: peel off factors that are linear and monic in one
//! variable with rational coefficients in the others, e.g.
//! `n^4 + ... = n (n - 1) (n + 2*s - 5) (n + 2*s + 3)`.
//!
//! This is not a complete factorization algorithm. Whatever cannot be
//! split this way stays in the cofactor.

use std::fmt;

use serde::Serialize;

use super::{Bindings, MPoly, Rat};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Factored {
    pub content: Rat,
    /// Linear factors with multiplicity.
    pub factors: Vec<(MPoly, u32)>,
    /// Remaining factor with leading rational 1 (or the constant 1).
    pub cofactor: MPoly,
}

impl Factored {
    pub fn expand(&self) -> MPoly {
        let mut acc = self.cofactor.scale(&self.content);
        for (f, k) in &self.factors {
            acc = acc.mul(&f.pow(*k));
        }
        acc
    }
}

impl fmt::Display for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.content.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        for (p, k) in &self.factors {
            let s = if p.n_terms() == 1 {
                p.to_string()
            } else {
                format!("({p})")
            };
            if *k == 1 {
                parts.push(s);
            } else {
                parts.push(format!("{s}^{k}"));
            }
        }
        if !self.cofactor.is_constant() {
            if self.cofactor.n_terms() == 1 {
                parts.push(self.cofactor.to_string());
            } else {
                parts.push(format!("({})", self.cofactor));
            }
        }
        let body = parts.join("*");
        match (body.is_empty(), self.content.is_one(), (-&self.content).is_one()) {
            (true, _, _) => write!(f, "{}", self.content),
            (false, true, _) => write!(f, "{body}"),
            (false, _, true) => write!(f, "-{body}"),
            (false, _, _) => write!(f, "{}*{body}", self.content),
        }
    }
}

/// Factors `p`, trying `first` before the remaining variables.
pub fn factor_linear(p: &MPoly, first: &str) -> Factored {
    if p.is_zero() {
        return Factored {
            content: Rat::zero(),
            factors: Vec::new(),
            cofactor: MPoly::one(),
        };
    }
    let mut order: Vec<String> = vec![first.to_string()];
    order.extend(p.vars().iter().filter(|v| *v != first).cloned());
    let mut rest = p.clone();
    let mut factors: Vec<(MPoly, u32)> = Vec::new();
    for var in &order {
        while rest.degree_in(var).unwrap_or(0) > 0 {
            let Some(root) = find_linear_root(&rest, var) else {
                break;
            };
            let lin = MPoly::var(var).sub(&root);
            rest = divide_by_linear(&rest, var, &root);
            match factors.iter_mut().find(|(f, _)| *f == lin) {
                Some((_, k)) => *k += 1,
                None => factors.push((lin, 1)),
            }
        }
    }
    // display order: simpler factors first, then by constant term
    factors.sort_by_cached_key(|(f, _)| (f.n_terms(), f.vars().len(), f.substitute(&zero_all(f)).constant_value()));
    let content = rest.leading_rational();
    let cofactor = rest.scale(&content.recip());
    Factored {
        content,
        factors,
        cofactor,
    }
}

fn zero_all(p: &MPoly) -> Bindings {
    p.vars().iter().map(|v| (v.clone(), Rat::zero())).collect()
}

fn divide_by_linear(p: &MPoly, var: &str, root: &MPoly) -> MPoly {
    let c = p.coeffs_in(var);
    let d = c.len() - 1;
    let mut q = vec![MPoly::zero(); d];
    q[d - 1] = c[d].clone();
    for k in (1..d).rev() {
        q[k - 1] = c[k].add(&root.mul(&q[k]));
    }
    debug_assert!(c[0].add(&root.mul(&q[0])).is_zero());
    MPoly::from_coeffs_in(var, &q)
}

/// Looks for `L`, linear in the other variables, with `p(var := L) = 0`.
fn find_linear_root(p: &MPoly, var: &str) -> Option<MPoly> {
    let others: Vec<String> = p.vars().iter().filter(|v| *v != var).cloned().collect();
    let lead = p.coeffs_in(var).pop()?;
    let base_points: [i64; 4] = [0, 1, 3, -2];
    for &b0 in &base_points {
        // distinct values per variable so differences like (b - c) survive
        let at = |k: usize| b0 + 7 * k as i64;
        let base: Bindings = others
            .iter()
            .enumerate()
            .map(|(k, v)| (v.clone(), Rat::int(at(k))))
            .collect();
        if lead.substitute(&base).is_zero() {
            continue;
        }
        let r0s = univariate_roots(p, var, &base)?;
        // per-variable slope candidates
        let mut slopes: Vec<Vec<Rat>> = Vec::new();
        let mut ok = true;
        for (k, v) in others.iter().enumerate() {
            let mut shifted = base.clone();
            shifted.insert(v.clone(), Rat::int(at(k) + 1));
            if lead.substitute(&shifted).is_zero() {
                ok = false;
                break;
            }
            match univariate_roots(p, var, &shifted) {
                Some(r) => slopes.push(r),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        for r0 in &r0s {
            let cands: Vec<Vec<Rat>> = slopes
                .iter()
                .map(|rs| rs.iter().map(|r| r - r0).collect())
                .collect();
            let total: usize = cands.iter().map(Vec::len).product();
            if total > 4096 {
                continue;
            }
            for idx in 0..total {
                let mut k = idx;
                let mut l = MPoly::constant(r0.clone());
                for (j, (v, cs)) in others.iter().zip(&cands).enumerate() {
                    let c = &cs[k % cs.len()];
                    k /= cs.len();
                    // L = r0 + sum c_j (v_j - base_j)
                    l = l.add(&MPoly::var(v).sub(&MPoly::int(at(j))).scale(c));
                }
                if p.compose(var, &l).is_zero() {
                    return Some(l);
                }
            }
        }
        return None;
    }
    None
}

fn univariate_roots(p: &MPoly, var: &str, at: &Bindings) -> Option<Vec<Rat>> {
    let u = p.substitute(at).to_upoly(var).ok()?;
    u.rational_roots().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn kink_trailing_factor() {
        let q = p("n*(n-1)*(n^2 + n*(4*s-2) + 4*s^2 - 4*s - 15)");
        let f = factor_linear(&q, "n");
        assert_eq!(f.expand(), q);
        assert_eq!(f.factors.len(), 4);
        assert!(f.cofactor.is_constant());
        assert!(f.factors.iter().any(|(l, _)| *l == p("n + 2*s - 5")));
        assert!(f.factors.iter().any(|(l, _)| *l == p("n + 2*s + 3")));
    }

    #[test]
    fn content_and_other_variables() {
        let q = p("-2*(b-c)*(n+a-1)");
        let f = factor_linear(&q, "n");
        assert_eq!(f.expand(), q);
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.content, Rat::int(-2));
    }

    #[test]
    fn irreducible_stays_put() {
        let q = p("3*(n^2 + s)");
        let f = factor_linear(&q, "n");
        assert!(f.factors.is_empty());
        assert_eq!(f.content, Rat::int(3));
        assert_eq!(f.to_string(), "3*(n^2 + s)");
    }

    #[test]
    fn repeated_factor() {
        let q = p("(n-2)^2*(n+1)");
        let f = factor_linear(&q, "n");
        assert_eq!(f.expand(), q);
        assert!(f.factors.contains(&(p("n-2"), 2)));
    }
}
