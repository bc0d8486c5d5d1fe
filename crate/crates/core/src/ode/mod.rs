//! Linear ODEs with polynomial coefficients and the recurrences satisfied by
//! their power-series coefficients.

mod derive;
mod linear_ode;
mod recurrence;

pub use derive::{
    derive_recurrence, exact_residual, falling_factorial, parity_decouple, plain_to_factorial,
    Scaling, SeriesAnsatz,
};
pub use linear_ode::{LinearOde, OdeTerm};
pub use recurrence::{PolySequence, Recurrence};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OdeError {
    #[error("NOT_POLYNOMIAL: coefficient of f^({order}) still divided by x^{power}")]
    NotPolynomial { order: u32, power: u32 },
    #[error("LEADING_COEFF_VANISHES{}", .n.map(|n| format!(" at n = {n}")).unwrap_or_default())]
    LeadingCoeffVanishes { n: Option<i64> },
    #[error("WRONG_SHAPE: {0}")]
    WrongShape(String),
    #[error("UNBOUND_PARAMETER: {0}")]
    UnboundParameter(String),
    #[error("the ODE has no derivative term")]
    NoDerivative,
    #[error("index symbol {0} is also an ODE parameter")]
    IndexClash(String),
}
