//! The power sums `h(p, k) = 1^p + 2^p + ... + k^p`, evaluated by direct
//! summation, by the odd-exponent recurrence
//!
//! ```text
//! h(p,k) = ((k+1)^p k + Σ_{j=1}^{p-1} (-1)^j C(p,j) (k+1)^{p-j} h(j,k)) / 2,   p odd,
//! ```
//!
//! by Faulhaber's formula, and as closed-form polynomials in `k`.
//!
//! The recurrence only determines odd exponents; even exponents that it
//! needs are supplied by Faulhaber's formula with oracle Bernoulli numbers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::bernoulli::BernoulliOracle;
use crate::exact::rational::{from_bigint, to_integer};
use crate::exact::{binomial, Polynomial, Rational, Variable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PowerSumError {
    #[error("the odd-exponent recurrence does not determine h({0}, k) for even exponent {0}")]
    EvenExponent(u32),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("need Bernoulli numbers B_0..B_{need}, got {got} values")]
    MissingBernoulli { need: u32, got: usize },
}

/// `(p, k)` for `h(p, k)`; both non-negative, and `h(p, 0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PowerSumQuery {
    pub p: u32,
    pub k: u64,
}

fn sign(e: u32) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Literal summation; `0^0 = 1`.
pub fn h_naive(p: u32, k: u64) -> BigInt {
    (1..=k).map(|s| BigInt::from(s).pow(p)).sum()
}

/// Faulhaber's formula as a polynomial in `k`:
/// `(k^{p+1} + Σ_{j=1}^{p} (-1)^j C(p+1,j) B_j k^{p+1-j}) / (p+1)`.
///
/// `bernoulli[j]` must hold `B_j` for `j <= p`.
pub fn faulhaber_polynomial(p: u32, bernoulli: &[Rational]) -> Result<Polynomial, PowerSumError> {
    if bernoulli.len() <= p as usize {
        return Err(PowerSumError::MissingBernoulli {
            need: p,
            got: bernoulli.len(),
        });
    }
    let n = p as usize + 1;
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    for j in 1..=p {
        let c = from_bigint(binomial(p as u64 + 1, j as i64) * sign(j));
        coeffs[n - j as usize] += c * &bernoulli[j as usize];
    }
    let poly = Polynomial::from_coeffs(Variable::K, coeffs);
    Ok(poly.scale(&Rational::new(BigInt::one(), BigInt::from(n))))
}

/// The odd-exponent recurrence over polynomials. `lower[j]` is `h(j, ·)` for
/// `1 <= j < p`; index 0 is ignored.
pub fn recurrence_polynomial(p: u32, lower: &[Polynomial]) -> Polynomial {
    assert!(p % 2 == 1, "recurrence needs an odd exponent");
    assert!(lower.len() >= p as usize);
    let k = Polynomial::identity(Variable::K);
    let k1 = Polynomial::from_ints(Variable::K, &[1, 1]);
    let mut acc = &k1.pow(p) * &k;
    for j in 1..p {
        let c = from_bigint(binomial(p as u64, j as i64) * sign(j));
        let term = &k1.pow(p - j) * &lower[j as usize];
        acc = &acc + &term.scale(&c);
    }
    acc.scale(&Rational::new(BigInt::one(), BigInt::from(2)))
}

/// `h(p, ·)` interpolated through the direct sums at `k = 0..=p+1`. Uses no
/// Bernoulli numbers at all.
pub fn interpolated_polynomial(p: u32) -> Polynomial {
    let xs: Vec<Rational> = (0..=p as i64 + 1).map(|k| Rational::from_integer(k.into())).collect();
    let ys: Vec<Rational> = (0..=p as u64 + 1).map(|k| from_bigint(h_naive(p, k))).collect();
    Polynomial::interpolate(Variable::K, &xs, &ys)
}

/// Evaluator with memo tables confined to one instance.
#[derive(Debug, Default)]
pub struct PowerSums {
    oracle: BernoulliOracle,
    polynomials: Vec<Polynomial>,
    values: BTreeMap<PowerSumQuery, BigInt>,
}

impl PowerSums {
    pub fn new() -> Self {
        Self::default()
    }

    /// `h(p, k)` from the odd-exponent recurrence.
    pub fn h_recurrence(&mut self, p: u32, k: u64) -> Result<BigInt, PowerSumError> {
        if p % 2 == 0 {
            return Err(PowerSumError::EvenExponent(p));
        }
        let key = PowerSumQuery { p, k };
        if let Some(v) = self.values.get(&key) {
            return Ok(v.clone());
        }
        let k_big = BigInt::from(k);
        let k1: BigInt = &k_big + 1;
        let mut acc = k1.clone().pow(p) * &k_big;
        for j in 1..p {
            let lower = if j % 2 == 1 {
                self.h_recurrence(j, k)?
            } else {
                let r = self.h_faulhaber(j, k)?;
                to_integer(&r).expect("h_faulhaber checks integrality")
            };
            acc += binomial(p as u64, j as i64) * sign(j) * k1.clone().pow(p - j) * lower;
        }
        let (half, rem) = acc.div_rem(&BigInt::from(2));
        if !rem.is_zero() {
            return Err(PowerSumError::Consistency(format!(
                "odd numerator in the recurrence for h({p},{k})"
            )));
        }
        self.values.insert(key, half.clone());
        Ok(half)
    }

    /// `h(p, k)` from Faulhaber's formula with oracle Bernoulli numbers; the
    /// result must be an integer.
    pub fn h_faulhaber(&mut self, p: u32, k: u64) -> Result<Rational, PowerSumError> {
        let bern = self.oracle.values_through(p as usize).to_vec();
        let v = faulhaber_polynomial(p, &bern)?.eval(&Rational::from_integer(k.into()));
        if !v.is_integer() {
            return Err(PowerSumError::Consistency(format!(
                "Faulhaber value for h({p},{k}) is not an integer: {v}"
            )));
        }
        Ok(v)
    }

    /// Closed form of `h(p, ·)`: odd `p` through the recurrence, even `p`
    /// through Faulhaber's formula. `h(0, ·) = k`.
    pub fn h_polynomial(&mut self, p: u32) -> Result<Polynomial, PowerSumError> {
        if self.polynomials.is_empty() {
            self.polynomials.push(Polynomial::identity(Variable::K));
        }
        while self.polynomials.len() <= p as usize {
            let q = self.polynomials.len() as u32;
            let next = if q % 2 == 1 {
                recurrence_polynomial(q, &self.polynomials)
            } else {
                let bern = self.oracle.values_through(q as usize).to_vec();
                faulhaber_polynomial(q, &bern)?
            };
            self.polynomials.push(next);
        }
        Ok(self.polynomials[p as usize].clone())
    }
}

pub fn h_recurrence(p: u32, k: u64) -> Result<BigInt, PowerSumError> {
    PowerSums::new().h_recurrence(p, k)
}

pub fn h_faulhaber(p: u32, k: u64) -> Result<Rational, PowerSumError> {
    PowerSums::new().h_faulhaber(p, k)
}

pub fn h_polynomial(p: u32) -> Result<Polynomial, PowerSumError> {
    PowerSums::new().h_polynomial(p)
}

/// `Σ_{s<k} s^p = k^p (k-1) + Σ_{a=0}^{p-1} (-1)^{p-a} C(p,a) k^a Σ_{s<k} s^{p-a}`,
/// every side by direct summation.
pub fn eq4_check(p: u32, k: u64) -> bool {
    if k == 0 {
        return false;
    }
    let below = |e: u32| h_naive(e, k - 1);
    let kb = BigInt::from(k);
    let mut rhs = kb.clone().pow(p) * (&kb - 1);
    for a in 0..p {
        rhs += binomial(p as u64, a as i64) * sign(p - a) * kb.clone().pow(a) * below(p - a);
    }
    below(p) == rhs
}
