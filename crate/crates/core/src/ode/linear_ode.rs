use serde::{Deserialize, Serialize};

use super::OdeError;
use crate::algebra::MPoly;

/// One term `coeff / indep^denom_power · f^(order)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdeTerm {
    pub order: u32,
    pub coeff: MPoly,
    /// Power of the independent variable dividing `coeff`. Derivations
    /// require this to be cleared first.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub denom_power: u32,
}

fn is_zero(v: &u32) -> bool {
    *v == 0
}

impl OdeTerm {
    pub fn new(order: u32, coeff: MPoly) -> Self {
        OdeTerm {
            order,
            coeff,
            denom_power: 0,
        }
    }

    pub fn over_power(order: u32, coeff: MPoly, denom_power: u32) -> Self {
        OdeTerm {
            order,
            coeff,
            denom_power,
        }
    }
}

/// `Σ terms[i].coeff · f^(terms[i].order) = 0` in the variable `indep`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearOde {
    pub indep: String,
    pub terms: Vec<OdeTerm>,
}

impl LinearOde {
    pub fn new(indep: &str, terms: Vec<OdeTerm>) -> Result<Self, OdeError> {
        let ode = LinearOde {
            indep: indep.to_string(),
            terms,
        };
        ode.validate()?;
        Ok(ode)
    }

    pub fn validate(&self) -> Result<(), OdeError> {
        let max = self
            .terms
            .iter()
            .filter(|t| !t.coeff.is_zero())
            .map(|t| t.order)
            .max()
            .unwrap_or(0);
        if max == 0 {
            return Err(OdeError::NoDerivative);
        }
        Ok(())
    }

    pub fn order(&self) -> u32 {
        self.terms
            .iter()
            .filter(|t| !t.coeff.is_zero())
            .map(|t| t.order)
            .max()
            .unwrap_or(0)
    }

    /// Merged polynomial coefficient of `f^(k)` for each `k`, failing if a
    /// term still carries an undivided power of the independent variable.
    pub fn polynomial_coeffs(&self) -> Result<Vec<MPoly>, OdeError> {
        let mut out = vec![MPoly::zero(); self.order() as usize + 1];
        for t in &self.terms {
            if t.coeff.is_zero() {
                continue;
            }
            let c = t
                .coeff
                .div_var_power(&self.indep, t.denom_power)
                .ok_or(OdeError::NotPolynomial {
                    order: t.order,
                    power: t.denom_power,
                })?;
            let k = t.order as usize;
            out[k] = out[k].add(&c);
        }
        Ok(out)
    }

    /// Multiplies the equation by the largest denominator power so that every
    /// coefficient becomes polynomial.
    pub fn cleared(&self) -> LinearOde {
        let m = self.terms.iter().map(|t| t.denom_power).max().unwrap_or(0);
        let x = MPoly::var(&self.indep);
        let terms = self
            .terms
            .iter()
            .map(|t| OdeTerm::new(t.order, t.coeff.mul(&x.pow(m - t.denom_power))))
            .collect();
        LinearOde {
            indep: self.indep.clone(),
            terms,
        }
    }

    pub fn scaled(&self, c: &crate::algebra::Rat) -> LinearOde {
        LinearOde {
            indep: self.indep.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| OdeTerm {
                    order: t.order,
                    coeff: t.coeff.scale(c),
                    denom_power: t.denom_power,
                })
                .collect(),
        }
    }

    /// Parameters other than the independent variable.
    pub fn parameters(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .terms
            .iter()
            .flat_map(|t| t.coeff.vars().iter().cloned())
            .filter(|v| *v != self.indep)
            .collect();
        v.sort();
        v.dedup();
        v
    }
}
