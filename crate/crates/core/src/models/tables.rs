//! CSV tables of potentials and wavefunctions for external plotting.

use std::fmt::Write;

/// `x,V,psi` rows on `n` equally spaced points of `[lo, hi]`.
pub fn potential_table(
    lo: f64,
    hi: f64,
    n: usize,
    v: impl Fn(f64) -> f64,
    psi: Option<&dyn Fn(f64) -> f64>,
) -> String {
    let mut out = String::from(if psi.is_some() { "x,V,psi\n" } else { "x,V\n" });
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    for i in 0..n {
        let x = lo + i as f64 * step;
        match psi {
            Some(f) => writeln!(out, "{x:.12e},{:.12e},{:.12e}", v(x), f(x)),
            None => writeln!(out, "{x:.12e},{:.12e}", v(x)),
        }
        .expect("writing to a String");
    }
    out
}
