//! Real-root isolation with Sturm sequences, exact over the rationals.
//!
//! Roots are isolated for the square-free part; multiplicities come from
//! the square-free factorization. An isolating interval is either an exact
//! point (`lo == hi`) or an open interval `(lo, hi)` whose endpoints are not
//! roots and which contains exactly one distinct root.
//!
//! Endpoint handling: a requested endpoint that is itself a root is moved
//! outward by `δ = (hi - lo) / 2^10`, halving `δ` until no further root lies
//! between the moved and the original endpoint.

use serde::{Deserialize, Serialize};

use num_bigint::{BigInt, Sign};

use super::upoly::eval_homogeneous;
use super::{AlgebraError, Rat, UPoly};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootInterval {
    pub lo: Rat,
    pub hi: Rat,
    pub multiplicity: usize,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rat) -> bool {
        if self.is_exact() {
            &self.lo == x
        } else {
            &self.lo < x && x < &self.hi
        }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint_f64(&self) -> f64 {
        Rat::midpoint(&self.lo, &self.hi).to_f64()
    }
}

/// Sturm chain of a square-free polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    /// Positive integer multiples of the chain polynomials.
    chain: Vec<Vec<BigInt>>,
}

impl SturmChain {
    pub fn new(p: &UPoly) -> Result<Self, AlgebraError> {
        if p.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let mut chain = vec![p.clone(), p.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            // positive rescaling keeps the sign pattern
            let r = if r.is_zero() {
                r
            } else {
                let pp = r.primitive_part();
                if pp.leading().signum() == r.leading().signum() {
                    pp
                } else {
                    pp.neg()
                }
            };
            chain.push(r.neg());
        }
        chain.pop();
        Ok(SturmChain {
            chain: chain.iter().map(UPoly::integer_coeffs).collect(),
        })
    }

    pub fn sign_changes(&self, x: &Rat) -> usize {
        let signs: Vec<Sign> = self
            .chain
            .iter()
            .map(|q| eval_homogeneous(q, x).sign())
            .filter(|&s| s != Sign::NoSign)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct roots in `(a, b]`.
    pub fn count(&self, a: &Rat, b: &Rat) -> usize {
        self.sign_changes(a).saturating_sub(self.sign_changes(b))
    }
}

fn nudge_out(p: &UPoly, chain: &SturmChain, x: &Rat, width: &Rat, downward: bool) -> Rat {
    let mut delta = width / Rat::int(1024);
    loop {
        let cand = if downward { x - &delta } else { x + &delta };
        if !p.eval(&cand).is_zero() {
            let (a, b) = if downward { (&cand, x) } else { (x, &cand) };
            // exactly the root at x itself
            let inside = if downward {
                chain.count(a, b)
            } else {
                chain.count(a, b) + 1
            };
            if inside == 1 {
                return cand;
            }
        }
        delta = delta / Rat::int(2);
    }
}

/// Isolates every distinct real root of `p` in `[lo, hi]`.
pub fn sturm_isolate_roots(p: &UPoly, lo: &Rat, hi: &Rat) -> Result<Vec<RootInterval>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if lo > hi {
        return Err(AlgebraError::EmptyInterval);
    }
    let sf = p.square_free_part()?;
    if sf.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let chain = SturmChain::new(&sf)?;
    let width = if lo == hi { Rat::one() } else { hi - lo };
    let a = if sf.eval(lo).is_zero() {
        nudge_out(&sf, &chain, lo, &width, true)
    } else {
        lo.clone()
    };
    let b = if sf.eval(hi).is_zero() {
        nudge_out(&sf, &chain, hi, &width, false)
    } else {
        hi.clone()
    };

    let mut found = Vec::new();
    let mut stack = vec![(a, b)];
    while let Some((a, b)) = stack.pop() {
        let n = chain.count(&a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            found.push((a, b));
            continue;
        }
        let mut mid = Rat::midpoint(&a, &b);
        if sf.eval(&mid).is_zero() {
            found.push((mid.clone(), mid.clone()));
            let d = nudge_out(&sf, &chain, &mid, &(&b - &a), true);
            let u = nudge_out(&sf, &chain, &mid, &(&b - &a), false);
            stack.push((u, b));
            mid = d;
        } else {
            stack.push((mid.clone(), b));
        }
        stack.push((a, mid));
    }
    found.sort();

    let factors = p.square_free_factors()?;
    let chains = factors
        .iter()
        .map(|f| if f.degree() == Some(0) { None } else { Some(SturmChain::new(f)) })
        .map(|c| c.transpose())
        .collect::<Result<Vec<_>, _>>()?;
    let out = found
        .into_iter()
        .map(|(lo, hi)| {
            let multiplicity = if lo == hi {
                factors.iter().position(|f| f.eval(&lo).is_zero()).map(|i| i + 1)
            } else {
                chains.iter().position(|c| {
                    c.as_ref().is_some_and(|c| c.count(&lo, &hi) == 1)
                }).map(|i| i + 1)
            }
            .unwrap_or(1);
            RootInterval { lo, hi, multiplicity }
        })
        .collect();
    Ok(out)
}

/// Bisects an isolating interval of `p` until its width is at most `width`.
pub fn refine_root(p: &UPoly, iv: &RootInterval, width: &Rat) -> Result<RootInterval, AlgebraError> {
    if iv.is_exact() {
        return Ok(iv.clone());
    }
    let sf = p.square_free_part()?;
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    let slo = sf.eval(&lo).signum();
    while &(&hi - &lo) > width {
        let mid = Rat::midpoint(&lo, &hi);
        let sm = sf.eval(&mid).signum();
        if sm == 0 {
            return Ok(RootInterval {
                lo: mid.clone(),
                hi: mid,
                multiplicity: iv.multiplicity,
            });
        }
        if sm == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RootInterval {
        lo,
        hi,
        multiplicity: iv.multiplicity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(c: &[i64]) -> UPoly {
        UPoly::from_ints("x", c)
    }

    #[test]
    fn two_simple_roots() {
        let r = sturm_isolate_roots(&u(&[2, -3, 1]), &Rat::int(0), &Rat::int(5)).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].contains(&Rat::int(1)) || r[0].lo <= Rat::int(1) && Rat::int(1) <= r[0].hi);
        assert!(r[1].contains(&Rat::int(2)) || r[1].lo <= Rat::int(2) && Rat::int(2) <= r[1].hi);
        assert!(r[0].hi <= r[1].lo);
    }

    #[test]
    fn no_real_roots() {
        let r = sturm_isolate_roots(&u(&[1, 0, 1]), &Rat::int(-10), &Rat::int(10)).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn restricted_range() {
        // (s-1)(s+3) on (0,2)
        let r = sturm_isolate_roots(&u(&[-3, 2, 1]), &Rat::int(0), &Rat::int(2)).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].lo < Rat::int(1) && Rat::int(1) < r[0].hi || r[0].contains(&Rat::int(1)));
    }

    #[test]
    fn endpoint_roots_are_nudged() {
        // roots at 0 and 1, interval exactly [0, 1]
        let r = sturm_isolate_roots(&u(&[0, -1, 1]), &Rat::int(0), &Rat::int(1)).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].lo < Rat::zero());
        assert!(r[1].hi > Rat::one());
    }

    #[test]
    fn multiplicities() {
        // (x-1)^3 (x+1)
        let p = u(&[-1, 1]).mul(&u(&[-1, 1])).mul(&u(&[-1, 1])).mul(&u(&[1, 1]));
        let r = sturm_isolate_roots(&p, &Rat::int(-4), &Rat::int(4)).unwrap();
        assert_eq!(r.iter().map(|i| i.multiplicity).collect::<Vec<_>>(), vec![1, 3]);
    }

    #[test]
    fn refinement() {
        let p = u(&[-2, 0, 1]);
        let r = sturm_isolate_roots(&p, &Rat::int(0), &Rat::int(2)).unwrap();
        let w = Rat::new(1, 1_000_000_000_000);
        let fine = refine_root(&p, &r[0], &w).unwrap();
        assert!(fine.width() <= w);
        assert!((fine.midpoint_f64() - 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(
            sturm_isolate_roots(&UPoly::zero("x"), &Rat::int(0), &Rat::int(1)),
            Err(AlgebraError::ZeroPolynomial)
        );
    }
}
