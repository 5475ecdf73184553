//! Parser for printed operators: polynomials in `t` and `Θ` where every
//! power of `t` is read to the left of the `Θ` factors.
//!
//! `Θ` may also be written `θ` or `T`; products may be implicit.

use num_traits::Zero;

use super::ThetaOperator;
use crate::arith::{parse_multipoly, Polynomial, Rational};
use crate::error::Result;

/// Parse `Θ^2 - 16t(Θ+1/2)^2` into `[Θ^2, -16(Θ+1/2)^2]`.
pub fn parse_operator(s: &str) -> Result<ThetaOperator<Rational>> {
    let bi = parse_multipoly(s, &["t", "ΘθT"])?;
    let r = bi.degree_in(0).unwrap_or(0) as usize;
    let n = bi.degree_in(1).unwrap_or(0) as usize;
    let mut rows = vec![vec![Rational::zero(); n + 1]; r + 1];
    for (e, v) in bi.terms() {
        rows[e[0] as usize][e[1] as usize] = v.clone();
    }
    Ok(ThetaOperator::new(rows.into_iter().map(Polynomial::new).collect()))
}
