//! Exponential power sums
//!
//! ```text
//! f(p) = Σ_{s=1}^{k-1} s^p e^{-2πims/k},    g(p) = Σ_{s=1}^{k-1} s^p e^{2πims/k},
//! ```
//!
//! and the identities relating them. For `k ∤ m`,
//!
//! ```text
//! f(p) = -k^p + Σ_{a=0}^{p-1} (-1)^{p-a} C(p,a) k^a g(p-a),
//! ```
//!
//! which is checked exactly in `Q[x]/Φ_k` (where `x^m ≠ 1` is equivalent to
//! `k ∤ m`) and in double precision. The intermediate reflection identity
//!
//! ```text
//! f(p) = (-1)^p g(p) + Σ_{a=0}^{p-1} (-1)^{p+a+1} C(p,a) k^{p-a} f(a)
//! ```
//!
//! only uses `x^k = 1` and is checked in `Q[x]/(x^k - 1)` for every `m`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Pow, Zero};

use crate::compositions::{decreasing_chains, CompositionError};
use crate::exact::rational::from_bigint;
use crate::exact::{binomial, CyclotomicElement, CyclotomicRing, Polynomial, Rational, Variable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExpSumError {
    #[error("modulus k = {0} is below 2")]
    ModulusTooSmall(u64),
    #[error("k = {k} divides m = {m}; the identity requires k ∤ m")]
    KDividesM { k: u64, m: i64 },
    #[error("{0}")]
    Domain(String),
}

impl From<CompositionError> for ExpSumError {
    fn from(e: CompositionError) -> Self {
        ExpSumError::Domain(e.to_string())
    }
}

/// `+1` for `g`, `-1` for `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frequency {
    Positive,
    Negative,
}

impl Frequency {
    fn factor(self) -> i64 {
        match self {
            Frequency::Positive => 1,
            Frequency::Negative => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExpSumQuery {
    p: u32,
    k: u64,
    m: i64,
    sign: Frequency,
}

impl ExpSumQuery {
    pub fn new(p: u32, k: u64, m: i64, sign: Frequency) -> Result<Self, ExpSumError> {
        if k < 2 {
            return Err(ExpSumError::ModulusTooSmall(k));
        }
        Ok(ExpSumQuery { p, k, m, sign })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn sign(&self) -> Frequency {
        self.sign
    }

    /// Exponent of the root of unity attached to `s`, in `[0, k)`.
    fn exponent(&self, s: u64) -> usize {
        let k = self.k as i128;
        let e = (self.sign.factor() as i128 * self.m as i128 * s as i128).rem_euclid(k);
        e as usize
    }

    /// Coefficients `c_e` with `sum = Σ_e c_e ζ^e` over `e ∈ [0, k)`.
    fn root_coefficients(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.k as usize];
        for s in 1..self.k {
            out[self.exponent(s)] += BigInt::from(s).pow(self.p);
        }
        out
    }
}

/// Direct summation in double precision.
pub fn exp_power_sum_complex(q: &ExpSumQuery) -> Complex64 {
    let k = q.k as f64;
    (1..q.k)
        .map(|s| {
            let angle = 2.0 * PI * q.exponent(s) as f64 / k;
            Complex64::from_polar((s as f64).powi(q.p as i32), angle)
        })
        .sum()
}

/// The sum as an exact element of `Q[x]/Φ_k` under `e^{2πi/k} ↦ x`.
pub fn exp_power_sum_cyclo(q: &ExpSumQuery) -> CyclotomicElement {
    let ring = CyclotomicRing::new(q.k).expect("k >= 2");
    exp_power_sum_in(&ring, q)
}

fn exp_power_sum_in(ring: &Arc<CyclotomicRing>, q: &ExpSumQuery) -> CyclotomicElement {
    debug_assert_eq!(ring.k(), q.k);
    ring.from_root_coefficients(q.root_coefficients().into_iter().map(from_bigint).collect())
}

fn admissible(p: u32, k: u64, m: i64) -> Result<(), ExpSumError> {
    if k < 2 {
        return Err(ExpSumError::ModulusTooSmall(k));
    }
    if p == 0 {
        return Err(ExpSumError::Domain("exponent p must be at least 1".into()));
    }
    if m.rem_euclid(k as i64) == 0 {
        return Err(ExpSumError::KDividesM { k, m });
    }
    Ok(())
}

fn sign(e: u32) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Accumulates `c * g(j)` terms as root-of-unity coefficients. All arithmetic
/// stays in `Z[ζ]` written over the basis `1, ζ, ..., ζ^{k-1}`.
struct RootSum {
    coeffs: Vec<BigInt>,
}

impl RootSum {
    fn new(k: u64) -> Self {
        RootSum {
            coeffs: vec![BigInt::zero(); k as usize],
        }
    }

    fn add_scaled(&mut self, c: &BigInt, other: &[BigInt]) {
        for (a, b) in self.coeffs.iter_mut().zip(other) {
            *a += c * b;
        }
    }

    fn add_constant(&mut self, c: &BigInt) {
        self.coeffs[0] += c;
    }

    fn into_polynomial(self) -> Polynomial {
        Polynomial::from_coeffs(Variable::X, self.coeffs.into_iter().map(from_bigint).collect())
    }
}

/// Right-hand side of the identity for `f(p)`, given `g(j)` for `j = 1..=p`
/// as root coefficients (`g[j - 1]`).
fn prop1_rhs(p: u32, k: u64, g: &[Vec<BigInt>]) -> RootSum {
    let kb = BigInt::from(k);
    let mut rhs = RootSum::new(k);
    rhs.add_constant(&-kb.clone().pow(p));
    for a in 0..p {
        let c = binomial(p as u64, a as i64) * sign(p - a) * kb.clone().pow(a);
        rhs.add_scaled(&c, &g[(p - a - 1) as usize]);
    }
    rhs
}

/// `f(p) - [-k^p + Σ_{a<p} (-1)^{p-a} C(p,a) k^a g(p-a)]` in `Q[x]/Φ_k`; zero
/// whenever `k ∤ m`.
pub fn prop1_residual_cyclo(p: u32, k: u64, m: i64) -> Result<CyclotomicElement, ExpSumError> {
    admissible(p, k, m)?;
    let ring = CyclotomicRing::new(k).expect("k >= 2");
    Ok(prop1_residual_in(&ring, p, m))
}

fn prop1_residual_in(ring: &Arc<CyclotomicRing>, p: u32, m: i64) -> CyclotomicElement {
    let k = ring.k();
    let g: Vec<Vec<BigInt>> = (1..=p)
        .map(|j| ExpSumQuery { p: j, k, m, sign: Frequency::Positive }.root_coefficients())
        .collect();
    let f = ExpSumQuery { p, k, m, sign: Frequency::Negative }.root_coefficients();
    residual_mod_phi(ring, &f, prop1_rhs(p, k, &g))
}

fn residual_mod_phi(ring: &Arc<CyclotomicRing>, lhs: &[BigInt], rhs: RootSum) -> CyclotomicElement {
    let mut diff = RootSum::new(ring.k());
    diff.add_scaled(&BigInt::from(1), lhs);
    diff.add_scaled(&BigInt::from(-1), &rhs.coeffs);
    ring.reduce(&diff.into_polynomial())
}

/// Exact check over `1 <= p <= pmax` for one `(k, m)`, reusing the `g(j)`
/// tables across exponents. Returns the residual for each `p`.
pub fn prop1_residuals_for(ring: &Arc<CyclotomicRing>, pmax: u32, m: i64) -> Result<Vec<CyclotomicElement>, ExpSumError> {
    let k = ring.k();
    admissible(pmax.max(1), k, m)?;
    let g: Vec<Vec<BigInt>> = (1..=pmax)
        .map(|j| ExpSumQuery { p: j, k, m, sign: Frequency::Positive }.root_coefficients())
        .collect();
    Ok((1..=pmax)
        .map(|p| {
            let f = ExpSumQuery { p, k, m, sign: Frequency::Negative }.root_coefficients();
            residual_mod_phi(ring, &f, prop1_rhs(p, k, &g))
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatResidual {
    pub absolute: f64,
    /// `absolute / max(|f(p)|, 1)`.
    pub relative: f64,
    pub lhs_magnitude: f64,
}

/// The same identity in double precision.
pub fn prop1_residual_complex(p: u32, k: u64, m: i64) -> Result<FloatResidual, ExpSumError> {
    admissible(p, k, m)?;
    let g = |j: u32| exp_power_sum_complex(&ExpSumQuery { p: j, k, m, sign: Frequency::Positive });
    let lhs = exp_power_sum_complex(&ExpSumQuery { p, k, m, sign: Frequency::Negative });
    let kf = k as f64;
    let mut rhs = Complex64::new(-kf.powi(p as i32), 0.0);
    for a in 0..p {
        let c = crate::exact::rational::to_f64(&from_bigint(binomial(p as u64, a as i64)))
            * sign(p - a) as f64
            * kf.powi(a as i32);
        rhs += g(p - a) * c;
    }
    let absolute = (lhs - rhs).norm();
    Ok(FloatResidual {
        absolute,
        relative: absolute / lhs.norm().max(1.0),
        lhs_magnitude: lhs.norm(),
    })
}

/// Residual of the reflection identity in `Q[x]/(x^k - 1)` for every
/// `m ∈ [0, k)`. Returns the residue of largest max-norm, which is the zero
/// polynomial when the identity holds for all `m`.
pub fn eq3_residual_poly(p: u32, k: u64) -> Result<Polynomial, ExpSumError> {
    Ok(eq3_residuals(p, k)?
        .into_iter()
        .max_by(|a, b| max_norm(a).cmp(&max_norm(b)))
        .unwrap_or_else(|| Polynomial::zero(Variable::X)))
}

fn max_norm(p: &Polynomial) -> Rational {
    use num_traits::Signed;
    p.coeffs().iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
}

/// Per-`m` residuals of the reflection identity, indexed by `m`.
pub fn eq3_residuals(p: u32, k: u64) -> Result<Vec<Polynomial>, ExpSumError> {
    if k < 2 {
        return Err(ExpSumError::ModulusTooSmall(k));
    }
    if p == 0 {
        return Err(ExpSumError::Domain("exponent p must be at least 1".into()));
    }
    let kb = BigInt::from(k);
    Ok((0..k as i64)
        .map(|m| {
            let f = |e: u32| ExpSumQuery { p: e, k, m, sign: Frequency::Negative }.root_coefficients();
            let g = ExpSumQuery { p, k, m, sign: Frequency::Positive }.root_coefficients();
            let mut rhs = RootSum::new(k);
            rhs.add_scaled(&BigInt::from(sign(p)), &g);
            for a in 0..p {
                let c = binomial(p as u64, a as i64) * sign(p + a + 1) * kb.clone().pow(p - a);
                rhs.add_scaled(&c, &f(a));
            }
            let mut diff = RootSum::new(k);
            diff.add_scaled(&BigInt::from(1), &f(p));
            diff.add_scaled(&BigInt::from(-1), &rhs.coeffs);
            diff.into_polynomial()
        })
        .collect())
}

/// Coefficient of `k^a g(p-a)` after repeatedly expanding `f` through the
/// reflection identity.
///
/// For `a >= 1` this is the brute-force signed sum over strictly decreasing
/// chains `p > i_1 > ... > i_r > p-a` (empty chain included) of
/// `(-1)^{p+r+1} C(p,i_1) C(i_1,i_2) ... C(i_r,p-a)`. For `a = 0` no
/// expansion step is taken and the coefficient is the leading `(-1)^p`.
pub fn chain_coefficient_sum(p: u32, a: u32) -> Result<Rational, ExpSumError> {
    if p == 0 || a > p {
        return Err(ExpSumError::Domain(format!("need 1 <= p and 0 <= a <= p, got p={p}, a={a}")));
    }
    if a == 0 {
        return Ok(Rational::from_integer(sign(p).into()));
    }
    let upper = p as usize;
    let lower = (p - a) as usize;
    let total: BigInt = decreasing_chains(upper, lower)?
        .iter()
        .map(|chain| {
            let r = chain.len() as u32;
            let mut prev = upper as u64;
            let mut prod = BigInt::from(sign(p + r + 1));
            for &i in chain.indices().iter().chain(std::iter::once(&lower)) {
                prod *= binomial(prev, i as i64);
                prev = i as u64;
            }
            prod
        })
        .sum();
    Ok(from_bigint(total))
}
