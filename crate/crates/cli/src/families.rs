use clap::ValueEnum;
use qes_core::algebra::{Bindings, MPoly};
use qes_core::models::{
    bhaduri_recurrence_sym, kink_sectors, printed_bhaduri, printed_kink_even, printed_kink_odd,
};
use qes_core::ode::Recurrence;
use serde_json::Value;

use crate::output::CliError;
use crate::Bind;

/// Models whose ODE `derive` can expand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DeriveModel {
    /// Kink problem in `t = (y + ε²)^{1/2}`.
    KinkT,
    /// Kink problem in Heun form, variable `y`.
    KinkHeun,
    /// Angular equation of the two-body problem.
    Bhaduri,
}

impl DeriveModel {
    pub fn default_spectral(self) -> &'static str {
        match self {
            DeriveModel::KinkT | DeriveModel::KinkHeun => "s",
            DeriveModel::Bhaduri => "beta",
        }
    }
}

/// Polynomial families defined by step-1 three-term recurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    KinkEven,
    KinkOdd,
    PrintedKinkEven,
    PrintedKinkOdd,
    Bhaduri,
    PrintedBhaduri,
    /// Monic Hermite control, `P_n = x P_{n−1} − (n−1) P_{n−2}`.
    Hermite,
    /// `P_n = x P_{n−1} − P_{n−2}/4`.
    Chebyshev,
}

fn p(s: &str) -> MPoly {
    s.parse().expect("literal polynomial")
}

impl Family {
    pub fn recurrence(self) -> Result<Recurrence, CliError> {
        Ok(match self {
            Family::KinkEven => kink_sectors()?.0,
            Family::KinkOdd => kink_sectors()?.1,
            Family::PrintedKinkEven => printed_kink_even(),
            Family::PrintedKinkOdd => printed_kink_odd(),
            Family::Bhaduri => bhaduri_recurrence_sym()?,
            Family::PrintedBhaduri => printed_bhaduri(),
            Family::Hermite => control(p("n - 1")),
            Family::Chebyshev => control(p("1/4")),
        })
    }

    pub fn name(self) -> String {
        self.to_possible_value().expect("named variant").get_name().to_string()
    }
}

fn control(c: MPoly) -> Recurrence {
    Recurrence::new("n", "x", 1, 0, vec![MPoly::one(), p("-x"), c]).expect("monic")
}

impl Bind {
    pub fn bindings(&self) -> Bindings {
        [("eps2", &self.eps2), ("a", &self.a), ("b", &self.b), ("c", &self.c)]
            .into_iter()
            .filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v)))
            .collect()
    }

    /// Only the bindings the recurrence uses; others are rejected.
    pub fn for_recurrence(&self, rec: &Recurrence) -> Result<Bindings, CliError> {
        let b = self.bindings();
        let params = rec.parameters();
        if let Some(extra) = b.keys().find(|k| !params.contains(k)) {
            return Err(CliError::usage(format!(
                "--{extra} is not a parameter of this model (parameters: {})",
                if params.is_empty() { "none".to_string() } else { params.join(", ") }
            )));
        }
        Ok(b)
    }

    pub fn to_json(&self) -> Value {
        let m: serde_json::Map<String, Value> =
            self.bindings().into_iter().map(|(k, v)| (k, Value::String(v.to_string()))).collect();
        Value::Object(m)
    }
}
