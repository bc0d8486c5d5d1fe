//! Dense univariate polynomials over [`Rat`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{sturm_isolate_roots, AlgebraError, MPoly, Rat};

/// `coeffs[k]` multiplies `var^k`; the leading coefficient is nonzero, and
/// the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly {
    var: String,
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn new(var: &str, mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        UPoly {
            var: var.to_string(),
            coeffs,
        }
    }

    pub fn from_ints(var: &str, coeffs: &[i64]) -> Self {
        UPoly::new(var, coeffs.iter().map(|&c| Rat::int(c)).collect())
    }

    pub fn zero(var: &str) -> Self {
        UPoly::new(var, Vec::new())
    }

    pub fn one(var: &str) -> Self {
        UPoly::constant(var, Rat::one())
    }

    pub fn constant(var: &str, c: Rat) -> Self {
        UPoly::new(var, vec![c])
    }

    /// The monomial `var`.
    pub fn x(var: &str) -> Self {
        UPoly::new(var, vec![Rat::zero(), Rat::one()])
    }

    /// `var - r`.
    pub fn linear_root(var: &str, r: &Rat) -> Self {
        UPoly::new(var, vec![-r, Rat::one()])
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        UPoly::new(&self.var, c)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UPoly {
        UPoly::new(&self.var, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &Rat) -> UPoly {
        UPoly::new(&self.var, self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(&self.var);
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UPoly::new(&self.var, out)
    }

    pub fn derivative(&self) -> UPoly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rat::int(k as i64))
            .collect();
        UPoly::new(&self.var, c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lead_inv = d.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(&self.var), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] * &lead_inv;
            if !q.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let sub = &q * dc;
                    rem[k + j] -= &sub;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (UPoly::new(&self.var, quot), UPoly::new(&self.var, rem))
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.monic()
    }

    /// Scales to integer coefficients with unit content and positive
    /// leading coefficient.
    pub fn primitive_part(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let ints = self.integer_coeffs();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let c = ints
            .into_iter()
            .map(|c| Rat::from_bigint(c * &sign / &g))
            .collect();
        UPoly::new(&self.var, c)
    }

    /// Coefficients multiplied by the lcm of denominators.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        self.coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect()
    }

    /// Yun's square-free factorization: `p = lc · Π f_i^i` with each `f_i`
    /// monic, square-free and pairwise coprime. Entry `i-1` holds `f_i`.
    pub fn square_free_factors(&self) -> Result<Vec<UPoly>, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let mut out = Vec::new();
        let d = self.derivative();
        let mut a = self.gcd(&d);
        if a.is_zero() {
            a = UPoly::one(&self.var);
        }
        let mut b = self.div_rem(&a).0;
        let mut c = d.div_rem(&a).0;
        let mut dd = UPoly::sub(&c, &b.derivative());
        loop {
            if b.degree() == Some(0) {
                break;
            }
            let f = b.gcd(&dd);
            out.push(f.clone());
            b = b.div_rem(&f).0;
            c = dd.div_rem(&f).0;
            dd = UPoly::sub(&c, &b.derivative());
        }
        while out.last().is_some_and(|f| f.degree() == Some(0)) {
            out.pop();
        }
        Ok(out)
    }

    /// `p / gcd(p, p')`, monic.
    pub fn square_free_part(&self) -> Result<UPoly, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let g = self.gcd(&self.derivative());
        if g.is_zero() {
            return Ok(self.monic());
        }
        Ok(self.div_rem(&g).0.monic())
    }

    /// All distinct rational roots, ascending.
    ///
    /// A root `p/q` in lowest terms has `q` dividing the leading coefficient
    /// `a_n` of the primitive part, and two such fractions differ by at least
    /// `1/a_n²`. Each real root is isolated, refined below that separation,
    /// and the simplest rational inside its interval is tested exactly.
    pub fn rational_roots(&self) -> Result<Vec<Rat>, AlgebraError> {
        let sf = self.square_free_part()?.primitive_part();
        let mut coeffs = sf.coeffs.clone();
        let mut roots = Vec::new();
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            roots.push(Rat::zero());
            coeffs.drain(..lead_zeros);
        }
        let reduced = UPoly::new(&self.var, coeffs);
        if reduced.degree().unwrap_or(0) == 0 {
            return Ok(roots);
        }
        let an = reduced.leading().abs();
        let bound = root_bound(&reduced.integer_coeffs());
        let width = (Rat::int(2) * &an * &an).recip();
        let ints = reduced.integer_coeffs();
        for iv in sturm_isolate_roots(&reduced, &-&bound, &bound)? {
            if iv.is_exact() {
                roots.push(iv.lo);
                continue;
            }
            if let Some(r) = rational_in(&ints, iv.lo, iv.hi, &width) {
                roots.push(r);
            }
        }
        roots.sort();
        roots.dedup();
        Ok(roots)
    }

    pub fn to_mpoly(&self) -> MPoly {
        MPoly::from_upoly(self)
    }

    pub fn with_var(&self, var: &str) -> UPoly {
        UPoly::new(var, self.coeffs.clone())
    }
}

/// `Σ a_i p^i q^(d−i)`, the value at `p/q` scaled by `q^d`.
pub(crate) fn eval_homogeneous(ints: &[BigInt], x: &Rat) -> BigInt {
    let (p, q) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    for a in ints.iter().rev() {
        acc = acc * p + a * &qpow;
        qpow *= q;
    }
    acc
}

/// Power of two strictly above every root modulus (Fujiwara's bound
/// `2 max |a_{d−i}/a_d|^{1/i}`, estimated from bit lengths).
fn root_bound(ints: &[BigInt]) -> Rat {
    let d = ints.len() - 1;
    let bd = ints[d].bits() as i64;
    let e = (1..=d)
        .filter(|&i| !ints[d - i].is_zero())
        .map(|i| {
            let num = ints[d - i].bits() as i64 - bd + 1;
            num.div_euclid(i as i64) + 1
        })
        .max()
        .unwrap_or(0)
        .max(0);
    Rat::from_bigint(BigInt::one() << (e as usize + 2))
}

/// Bisects an isolating interval `(lo, hi)` of a square-free integer
/// polynomial, testing the simplest rational inside along the way.
fn rational_in(ints: &[BigInt], mut lo: Rat, mut hi: Rat, width: &Rat) -> Option<Rat> {
    let sign = |x: &Rat| eval_homogeneous(ints, x).sign();
    let s_lo = sign(&lo);
    let mut step = 0u32;
    loop {
        if step % 4 == 0 || &(&hi - &lo) < width {
            let c = simplest_between(&lo, &hi);
            if eval_homogeneous(ints, &c).is_zero() {
                return Some(c);
            }
            if &(&hi - &lo) < width {
                return None;
            }
        }
        let mid = Rat::midpoint(&lo, &hi);
        let sm = sign(&mid);
        if sm == num_bigint::Sign::NoSign {
            return Some(mid);
        }
        if sm == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        step += 1;
    }
}

/// The rational with the smallest denominator in the open interval `(a, b)`.
fn simplest_between(a: &Rat, b: &Rat) -> Rat {
    if b.signum() <= 0 {
        return -simplest_above(&-b, Some(&-a));
    }
    if a.signum() < 0 {
        return Rat::zero();
    }
    simplest_above(a, Some(b))
}

/// Simplest rational in `(a, b)` for `0 <= a < b`, with `b = None` for
/// an unbounded interval; continued-fraction descent.
fn simplest_above(a: &Rat, b: Option<&Rat>) -> Rat {
    let n = Rat::from_bigint(a.inner().floor().to_integer());
    let next = &n + &Rat::one();
    if b.is_none_or(|b| &next < b) {
        return next;
    }
    let b = b.expect("bounded");
    // a, b in [n, n + 1]: x = n + 1/y with y in (1/(b - n), 1/(a - n))
    let lo = (b - &n).recip();
    let frac = a - &n;
    let y = if frac.is_zero() {
        simplest_above(&lo, None)
    } else {
        simplest_above(&lo, Some(&frac.recip()))
    };
    n + y.recip()
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_mpoly())
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly[{}]({self})", self.var)
    }
}

#[derive(Serialize, Deserialize)]
struct UPolyJson {
    var: String,
    coeffs: Vec<Rat>,
}

impl Serialize for UPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        UPolyJson {
            var: self.var.clone(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for UPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let j = UPolyJson::deserialize(de)?;
        if j.coeffs.last().is_some_and(Rat::is_zero) {
            return Err(serde::de::Error::custom("leading coefficient is zero"));
        }
        Ok(UPoly::new(&j.var, j.coeffs))
    }
}

macro_rules! upoly_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&UPoly> for &UPoly {
            type Output = UPoly;
            fn $m(self, rhs: &UPoly) -> UPoly {
                UPoly::$m(self, rhs)
            }
        }
        impl $tr<UPoly> for UPoly {
            type Output = UPoly;
            fn $m(self, rhs: UPoly) -> UPoly {
                UPoly::$m(&self, &rhs)
            }
        }
        impl $tr<&UPoly> for UPoly {
            type Output = UPoly;
            fn $m(self, rhs: &UPoly) -> UPoly {
                UPoly::$m(&self, rhs)
            }
        }
    };
}

upoly_binop!(Add, add);
upoly_binop!(Sub, sub);
upoly_binop!(Mul, mul);

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(c: &[i64]) -> UPoly {
        UPoly::from_ints("x", c)
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x-2) / (x-1)
        let (q, r) = u(&[2, -3, 1]).div_rem(&u(&[-1, 1]));
        assert_eq!(q, u(&[-2, 1]));
        assert!(r.is_zero());
        // gcd((x-1)(x-2), (x-1)(x+3)) = x-1
        assert_eq!(u(&[2, -3, 1]).gcd(&u(&[-3, 2, 1])), u(&[-1, 1]));
    }

    #[test]
    fn square_free() {
        // (x-1)^2 (x+2)
        let p = u(&[-1, 1]).mul(&u(&[-1, 1])).mul(&u(&[2, 1]));
        let f = p.square_free_factors().unwrap();
        assert_eq!(f, vec![u(&[2, 1]), u(&[-1, 1])]);
        assert_eq!(p.square_free_part().unwrap(), u(&[-1, 1]).mul(&u(&[2, 1])));
    }

    #[test]
    fn rational_roots() {
        // (2x-1)(3x+4)(x^2+1) x
        let p = u(&[-1, 2]).mul(&u(&[4, 3])).mul(&u(&[1, 0, 1])).mul(&u(&[0, 1]));
        assert_eq!(
            p.rational_roots().unwrap(),
            vec![Rat::new(-4, 3), Rat::zero(), Rat::new(1, 2)]
        );
        assert!(u(&[-2, 0, 1]).rational_roots().unwrap().is_empty());
        assert!(UPoly::zero("x").rational_roots().is_err());
    }

    #[test]
    fn json_rejects_zero_leading() {
        let ok: UPoly = serde_json::from_str(r#"{"var":"s","coeffs":["1","-1/2"]}"#).unwrap();
        assert_eq!(ok.degree(), Some(1));
        assert!(serde_json::from_str::<UPoly>(r#"{"var":"s","coeffs":["1","0"]}"#).is_err());
    }
}
