use std::fmt;

use serde::{Deserialize, Serialize};

use super::OdeError;
use crate::algebra::{factor_linear, Bindings, MPoly, Rat, UPoly};

/// A linear recurrence
///
/// `Σ_j coeffs[j](n) · P_{n + top − j·step} = 0`
///
/// with `j = 0` the highest index. Entries with negative index are zero, and
/// `seed` fixes `P_0 .. P_{seed.len()−1}`; the relation determines every
/// later entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recurrence {
    pub index: String,
    pub spectral: String,
    pub step: u32,
    pub top: i64,
    pub coeffs: Vec<MPoly>,
    pub seed: Vec<MPoly>,
}

impl Recurrence {
    pub fn new(
        index: &str,
        spectral: &str,
        step: u32,
        top: i64,
        coeffs: Vec<MPoly>,
    ) -> Result<Self, OdeError> {
        if coeffs.first().is_none_or(MPoly::is_zero) {
            return Err(OdeError::LeadingCoeffVanishes { n: None });
        }
        if step == 0 {
            return Err(OdeError::WrongShape("step must be positive".into()));
        }
        Ok(Recurrence {
            index: index.to_string(),
            spectral: spectral.to_string(),
            step,
            top,
            coeffs,
            seed: vec![MPoly::one()],
        })
    }

    pub fn with_seed(mut self, seed: Vec<MPoly>) -> Self {
        self.seed = seed;
        self
    }

    pub fn span(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &MPoly {
        &self.coeffs[0]
    }

    pub fn trailing(&self) -> &MPoly {
        self.coeffs.last().unwrap()
    }

    fn index_poly(&self) -> MPoly {
        MPoly::var(&self.index)
    }

    /// Coefficient `j` at a concrete index value.
    pub fn coeff_at(&self, j: usize, n: i64) -> MPoly {
        let b: Bindings = [(self.index.clone(), Rat::int(n))].into_iter().collect();
        self.coeffs[j].substitute(&b)
    }

    /// Re-labels the index so that the highest index becomes `n + new_top`.
    pub fn with_top(&self, new_top: i64) -> Recurrence {
        if new_top == self.top {
            return self.clone();
        }
        let shift = MPoly::int(new_top - self.top);
        let sub = self.index_poly().add(&shift);
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(|c| c.compose(&self.index, &sub)).collect();
        out.top = new_top;
        out
    }

    pub fn renamed_index(&self, name: &str) -> Recurrence {
        let mut out = self.clone();
        let v = MPoly::var(name);
        out.coeffs = self.coeffs.iter().map(|c| c.compose(&self.index, &v)).collect();
        out.index = name.to_string();
        out
    }

    pub fn substitute(&self, b: &Bindings) -> Recurrence {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(|c| c.substitute(b)).collect();
        out.seed = self.seed.iter().map(|c| c.substitute(b)).collect();
        out
    }

    pub fn scaled(&self, k: &Rat) -> Recurrence {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(|c| c.scale(k)).collect();
        out
    }

    pub fn scaled_by(&self, p: &MPoly) -> Recurrence {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(|c| c.mul(p)).collect();
        out
    }

    /// Flips the overall sign so the leading coefficient has a positive
    /// leading rational.
    pub fn sign_normalized(&self) -> Recurrence {
        if self.leading().leading_rational().is_negative() {
            self.scaled(&Rat::int(-1))
        } else {
            self.clone()
        }
    }

    /// Divides every coefficient by the leading rational of `coeffs[0]`.
    pub fn monic(&self) -> Recurrence {
        let lc = self.leading().leading_rational();
        self.scaled(&lc.recip())
    }

    /// Parameters other than the index and the spectral variable.
    pub fn parameters(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .coeffs
            .iter()
            .chain(&self.seed)
            .flat_map(|c| c.vars().iter().cloned())
            .filter(|v| *v != self.index && *v != self.spectral)
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Index label of coefficient `j`, e.g. `n+2`, `n`, `n-2`.
    pub fn label(&self, j: usize) -> String {
        let off = self.top - (j as i64) * self.step as i64;
        match off.cmp(&0) {
            std::cmp::Ordering::Equal => self.index.clone(),
            std::cmp::Ordering::Greater => format!("{}+{off}", self.index),
            std::cmp::Ordering::Less => format!("{}{off}", self.index),
        }
    }

    /// Coefficients factored for display.
    pub fn factored(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .map(|c| factor_linear(c, &self.index).to_string())
            .collect()
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factored()
            .into_iter()
            .enumerate()
            .map(|(j, c)| format!("[{c}]*P({})", self.label(j)))
            .collect();
        write!(f, "{} = 0", parts.join(" + "))
    }
}

/// A family of polynomials in the spectral variable, indexed from 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolySequence {
    pub spectral: String,
    pub entries: Vec<UPoly>,
    /// True when the seed differs from the default `P_0 = 1`.
    #[serde(default)]
    pub custom_seed: bool,
}

impl PolySequence {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn degrees(&self) -> Vec<Option<usize>> {
        self.entries.iter().map(UPoly::degree).collect()
    }

    /// One row per index: `n,c0,c1,...` with exact `p/q` coefficients.
    pub fn to_csv(&self) -> String {
        let width = self
            .entries
            .iter()
            .map(|e| e.coeffs().len())
            .max()
            .unwrap_or(0)
            .max(1);
        let mut out = String::from("n");
        for k in 0..width {
            out.push_str(&format!(",c{k}"));
        }
        out.push('\n');
        for (n, e) in self.entries.iter().enumerate() {
            out.push_str(&n.to_string());
            for k in 0..width {
                out.push(',');
                out.push_str(&e.coeff(k).to_string());
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn reindexing() {
        let r = Recurrence::new("n", "s", 2, 2, vec![p("1"), p("n - s"), p("n^2")]).unwrap();
        let r0 = r.with_top(0);
        assert_eq!(r0.coeffs[1], p("n - 2 - s"));
        assert_eq!(r0.with_top(2), r);
        assert_eq!(r.label(0), "n+2");
        assert_eq!(r.label(1), "n");
        assert_eq!(r.label(2), "n-2");
    }

    #[test]
    fn zero_leading_rejected() {
        assert!(Recurrence::new("n", "s", 1, 0, vec![MPoly::zero(), p("s")]).is_err());
    }

    #[test]
    fn csv_rows() {
        let seq = PolySequence {
            spectral: "x".into(),
            entries: vec![UPoly::one("x"), UPoly::new("x", vec![Rat::new(-1, 2), Rat::zero(), Rat::one()])],
            custom_seed: false,
        };
        assert_eq!(seq.to_csv(), "n,c0,c1,c2\n0,1,0,0\n1,-1/2,0,1\n");
    }
}
