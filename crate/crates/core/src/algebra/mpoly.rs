//! Sparse multivariate polynomials over [`Rat`].
//!
//! Every `MPoly` carries its own sorted variable list; exponent vectors are
//! dense over that list. Operations between polynomials on different
//! variable lists work in the union and then prune variables that no longer
//! occur, so structural equality is polynomial equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AlgebraError, Rat, UPoly};

/// Assignment of exact rational values to variables.
pub type Bindings = BTreeMap<String, Rat>;

/// Convenience constructor for [`Bindings`].
pub fn bindings<I, S>(pairs: I) -> Bindings
where
    I: IntoIterator<Item = (S, Rat)>,
    S: Into<String>,
{
    pairs.into_iter().map(|(k, v)| (k.into(), v)).collect()
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MPoly { vars: Vec::new(), terms }
    }

    pub fn int(c: i64) -> Self {
        MPoly::constant(Rat::int(c))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], Rat::one());
        MPoly {
            vars: vec![name.to_string()],
            terms,
        }
    }

    /// Builds a polynomial from raw terms; zero coefficients are dropped and
    /// repeated exponents summed.
    pub fn from_terms<I>(vars: &[String], terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (Vec<u32>, Rat)>,
    {
        let mut sorted: Vec<String> = vars.to_vec();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != vars.len() {
            return Err(AlgebraError::Schema("duplicate variable names".into()));
        }
        let perm: Vec<usize> = sorted
            .iter()
            .map(|v| vars.iter().position(|w| w == v).unwrap())
            .collect();
        let mut map: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (exp, c) in terms {
            if exp.len() != vars.len() {
                return Err(AlgebraError::Schema(format!(
                    "exponent vector of length {} for {} variables",
                    exp.len(),
                    vars.len()
                )));
            }
            let e: Vec<u32> = perm.iter().map(|&i| exp[i]).collect();
            *map.entry(e).or_default() += &c;
        }
        Ok(MPoly::normalized(sorted, map))
    }

    fn normalized(vars: Vec<String>, mut terms: BTreeMap<Vec<u32>, Rat>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..vars.len())
            .map(|i| terms.keys().any(|e| e[i] > 0))
            .collect();
        if used.iter().all(|&u| u) {
            return MPoly { vars, terms };
        }
        let keep: Vec<usize> = (0..vars.len()).filter(|&i| used[i]).collect();
        let vars = keep.iter().map(|&i| vars[i].clone()).collect();
        let terms = terms
            .into_iter()
            .map(|(e, c)| (keep.iter().map(|&i| e[i]).collect(), c))
            .collect();
        MPoly { vars, terms }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn has_var(&self, name: &str) -> bool {
        self.vars.iter().any(|v| v == name)
    }

    /// Terms as (exponent vector over `vars()`, coefficient), in ascending
    /// lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    /// The value of a polynomial without variables.
    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_constant() {
            Some(self.terms.values().next().cloned().unwrap_or_default())
        } else {
            None
        }
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
        let set: BTreeSet<&String> = a.iter().chain(b.iter()).collect();
        set.into_iter().cloned().collect()
    }

    fn lifted(&self, vars: &[String]) -> BTreeMap<Vec<u32>, Rat> {
        if self.vars == vars {
            return self.terms.clone();
        }
        let pos: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("var in union"))
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut full = vec![0u32; vars.len()];
                for (k, &p) in pos.iter().enumerate() {
                    full[p] = e[k];
                }
                (full, c.clone())
            })
            .collect()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let vars = MPoly::union_vars(&self.vars, &other.vars);
        let mut map = self.lifted(&vars);
        for (e, c) in other.lifted(&vars) {
            *map.entry(e).or_default() += &c;
        }
        MPoly::normalized(vars, map)
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> MPoly {
        if k.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero();
        }
        let vars = MPoly::union_vars(&self.vars, &other.vars);
        let a = self.lifted(&vars);
        let b = other.lifted(&vars);
        let mut map: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *map.entry(e).or_default() += &(ca * cb);
            }
        }
        MPoly::normalized(vars, map)
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = MPoly::mul(&base, &base);
            }
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in `var`; `None` for the zero polynomial.
    pub fn degree_in(&self, var: &str) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        Some(match self.index_of(var) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        })
    }

    /// Coefficients with respect to `var`: entry `k` multiplies `var^k`.
    pub fn coeffs_in(&self, var: &str) -> Vec<MPoly> {
        let Some(i) = self.index_of(var) else {
            return if self.is_zero() {
                Vec::new()
            } else {
                vec![self.clone()]
            };
        };
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut parts: Vec<BTreeMap<Vec<u32>, Rat>> = vec![BTreeMap::new(); deg + 1];
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            rest[i] = 0;
            parts[e[i] as usize].insert(rest, c.clone());
        }
        parts
            .into_iter()
            .map(|m| MPoly::normalized(self.vars.clone(), m))
            .collect()
    }

    /// Inverse of [`MPoly::coeffs_in`].
    pub fn from_coeffs_in(var: &str, coeffs: &[MPoly]) -> MPoly {
        let x = MPoly::var(var);
        let mut acc = MPoly::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(&x).add(c);
        }
        acc
    }

    /// Partial evaluation; bindings for absent variables are ignored.
    pub fn substitute(&self, b: &Bindings) -> MPoly {
        let bound: Vec<Option<&Rat>> = self.vars.iter().map(|v| b.get(v)).collect();
        if bound.iter().all(Option::is_none) {
            return self.clone();
        }
        let mut map: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = e.clone();
            for (i, val) in bound.iter().enumerate() {
                if let Some(v) = val {
                    coeff *= &v.pow(e[i]);
                    rest[i] = 0;
                }
            }
            *map.entry(rest).or_default() += &coeff;
        }
        MPoly::normalized(self.vars.clone(), map)
    }

    /// Replaces `var` by the polynomial `with`.
    pub fn compose(&self, var: &str, with: &MPoly) -> MPoly {
        if !self.has_var(var) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(var);
        let mut acc = MPoly::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(with).add(c);
        }
        acc
    }

    pub fn derivative(&self, var: &str) -> MPoly {
        let Some(i) = self.index_of(var) else {
            return MPoly::zero();
        };
        let mut map = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut d = e.clone();
                d[i] -= 1;
                map.insert(d, c * Rat::int(e[i] as i64));
            }
        }
        MPoly::normalized(self.vars.clone(), map)
    }

    /// Exact division by `var^k`, if every term is divisible.
    pub fn div_var_power(&self, var: &str, k: u32) -> Option<MPoly> {
        if k == 0 {
            return Some(self.clone());
        }
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        let i = self.index_of(var)?;
        let mut map = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] < k {
                return None;
            }
            let mut d = e.clone();
            d[i] -= k;
            map.insert(d, c.clone());
        }
        Some(MPoly::normalized(self.vars.clone(), map))
    }

    /// Views the polynomial as univariate in `var`.
    pub fn to_upoly(&self, var: &str) -> Result<UPoly, AlgebraError> {
        if let Some(other) = self.vars.iter().find(|v| *v != var) {
            return Err(AlgebraError::NotUnivariate {
                var: var.to_string(),
                found: other.clone(),
            });
        }
        let coeffs = self
            .coeffs_in(var)
            .into_iter()
            .map(|c| c.constant_value().unwrap_or_default())
            .collect();
        Ok(UPoly::new(var, coeffs))
    }

    pub fn from_upoly(p: &UPoly) -> MPoly {
        let terms = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| (vec![k as u32], c.clone()));
        MPoly::from_terms(&[p.var().to_string()], terms).expect("single variable")
    }

    /// Floating-point evaluation; unbound variables count as zero.
    pub fn eval_f64(&self, values: &BTreeMap<String, f64>) -> f64 {
        let vals: Vec<f64> = self
            .vars
            .iter()
            .map(|v| values.get(v).copied().unwrap_or(0.0))
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(&vals)
                    .fold(c.to_f64(), |acc, (&k, &x)| acc * x.powi(k as i32))
            })
            .sum()
    }

    /// Terms in display order: descending total degree, then descending
    /// lexicographic exponent.
    pub fn display_terms(&self) -> Vec<(&Vec<u32>, &Rat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }

    /// Coefficient of the first term in display order; zero for `0`.
    pub fn leading_rational(&self) -> Rat {
        self.display_terms()
            .first()
            .map(|(_, c)| (*c).clone())
            .unwrap_or_default()
    }

    /// Rational content: the polynomial divided by its leading rational.
    pub fn monic(&self) -> MPoly {
        let lc = self.leading_rational();
        if lc.is_zero() {
            self.clone()
        } else {
            self.scale(&lc.recip())
        }
    }

    fn fmt_monomial(&self, e: &[u32]) -> String {
        e.iter()
            .zip(&self.vars)
            .filter(|(k, _)| **k > 0)
            .map(|(k, v)| {
                if *k == 1 {
                    v.clone()
                } else {
                    format!("{v}^{k}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.display_terms().into_iter().enumerate() {
            let mono = self.fmt_monomial(e);
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{mag}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    coeff: Rat,
}

#[derive(Serialize, Deserialize)]
struct MPolyJson {
    vars: Vec<String>,
    terms: Vec<TermJson>,
}

impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        MPolyJson {
            vars: self.vars.clone(),
            terms: self
                .display_terms()
                .into_iter()
                .map(|(e, c)| TermJson {
                    exp: e.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let j = MPolyJson::deserialize(de)?;
        MPoly::from_terms(&j.vars, j.terms.into_iter().map(|t| (t.exp, t.coeff)))
            .map_err(serde::de::Error::custom)
    }
}

macro_rules! mpoly_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&MPoly> for &MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &MPoly) -> MPoly {
                MPoly::$m(self, rhs)
            }
        }
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                MPoly::$m(&self, &rhs)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &MPoly) -> MPoly {
                MPoly::$m(&self, rhs)
            }
        }
        impl $tr<MPoly> for &MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                MPoly::$m(self, &rhs)
            }
        }
    };
}

mpoly_binop!(Add, add);
mpoly_binop!(Sub, sub);
mpoly_binop!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly::neg(&self)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly::neg(self)
    }
}

impl From<Rat> for MPoly {
    fn from(c: Rat) -> Self {
        MPoly::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(p("x+1") * p("x-1"), p("x^2-1"));
    }

    #[test]
    fn zero_absorbs() {
        let z = p("s+eps2") * MPoly::zero();
        assert!(z.is_zero());
        assert!(z.vars().is_empty());
    }

    #[test]
    fn direct_expansion() {
        assert_eq!(p("2*s+1") * p("2*s-3"), p("4*s^2-4*s-3"));
    }

    #[test]
    fn substitution_examples() {
        let half = bindings([("eps2", Rat::new(1, 2))]);
        assert!(p("2*eps2^2+eps2-1").substitute(&half).is_zero());
        assert_eq!(p("x").substitute(&Bindings::new()), p("x"));
        let s = bindings([("s", Rat::new(1, 2))]);
        assert_eq!(p("4*s^2-4*s-3").substitute(&s), MPoly::int(-4));
    }

    #[test]
    fn cancellation_prunes_variables() {
        let q = p("x*y + z") - p("x*y");
        assert_eq!(q.vars(), &["z".to_string()]);
        assert_eq!(q, MPoly::var("z"));
    }

    #[test]
    fn coefficients_in_variable() {
        let q = p("3*n^2*s + n - 2*s + 5");
        let cs = q.coeffs_in("n");
        assert_eq!(cs, vec![p("5-2*s"), MPoly::one(), p("3*s")]);
        assert_eq!(MPoly::from_coeffs_in("n", &cs), q);
        assert_eq!(q.degree_in("n"), Some(2));
        assert_eq!(q.degree_in("t"), Some(0));
        assert_eq!(MPoly::zero().degree_in("t"), None);
    }

    #[test]
    fn composition_and_derivative() {
        let q = p("n^2 + n");
        assert_eq!(q.compose("n", &p("2*m-1")), p("4*m^2 - 2*m"));
        assert_eq!(p("x^3*y + y").derivative("x"), p("3*x^2*y"));
        assert_eq!(p("t^3 + t^5*s").div_var_power("t", 3), Some(p("1 + t^2*s")));
        assert_eq!(p("t + t^5").div_var_power("t", 2), None);
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(p("-3 + s^2*4 - 4*s").to_string(), "4*s^2 - 4*s - 3");
        assert_eq!(p("1/2*x - y").to_string(), "1/2*x - y");
        assert_eq!(MPoly::zero().to_string(), "0");
    }

    #[test]
    fn json_schema_shape() {
        let q = p("2*a*b - 1/3");
        let j = serde_json::to_value(&q).unwrap();
        assert_eq!(
            j,
            serde_json::json!({
                "vars": ["a", "b"],
                "terms": [{"exp": [1, 1], "coeff": "2"}, {"exp": [0, 0], "coeff": "-1/3"}]
            })
        );
        let back: MPoly = serde_json::from_value(j).unwrap();
        assert_eq!(back, q);
        let bad = serde_json::json!({"vars": ["a"], "terms": [{"exp": [1, 1], "coeff": "1"}]});
        assert!(serde_json::from_value::<MPoly>(bad).is_err());
    }
}
