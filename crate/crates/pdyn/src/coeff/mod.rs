//! Exact coefficient arithmetic: rationals, cyclotomic fields, square-root
//! towers over them, text parsing and rigorous complex embeddings.

pub mod cyclo;
pub mod embed;
pub mod parse;
pub mod rational;
pub mod tower;

pub use cyclo::Cyclo;
pub use embed::ComplexBall;
pub use parse::{parse_coeff, parse_coeff_in};
pub use rational::{parse_rational, q, qi, Rational};
pub use tower::{Coeff, Field};

/// Field operation selector for [`cyclo_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact arithmetic on coefficients. Results are in canonical form.
pub fn cyclo_arith(op: ArithOp, a: &Coeff, b: &Coeff) -> crate::error::Result<Coeff> {
    match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b),
    }
}

/// Complex embedding ζ_n ↦ e^{2πi/n} with a guaranteed error radius.
pub fn cyclo_embed(a: &Coeff, precision_bits: u32) -> ComplexBall {
    a.embed(precision_bits)
}
