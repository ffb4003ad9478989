//! Exact arithmetic substrate: rationals, binomials, dense polynomials and
//! cyclotomic residues. Everything here is immutable and float-free.

pub mod combinatorics;
pub mod cyclotomic;
pub mod polynomial;
pub mod rational;

pub use combinatorics::{binomial, factorial, multinomial};
pub use cyclotomic::{cyclo_root_power, cyclotomic_polynomial, CyclotomicElement, CyclotomicRing};
pub use polynomial::{poly_coefficient, Polynomial, Variable};
pub use rational::{format_rational, parse_rational, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic modulus must be positive")]
    ZeroModulus,
    #[error("parts sum to {sum}, expected {n}")]
    PartsSum { n: u64, sum: u64 },
    #[error("division defining Φ_{0} left a nonzero remainder")]
    InexactDivision(u64),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}
