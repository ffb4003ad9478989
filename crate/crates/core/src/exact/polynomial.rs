//! Dense univariate polynomials over [`Rational`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::rational::{format_rational, Rational};
use super::ExactError;

/// Display label for the indeterminate. Metadata only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variable {
    K,
    X,
}

impl Variable {
    pub fn symbol(self) -> &'static str {
        match self {
            Variable::K => "k",
            Variable::X => "x",
        }
    }
}

/// Coefficients in ascending degree, trimmed so the last entry is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
    var: Variable,
}

impl Polynomial {
    pub fn from_coeffs(var: Variable, coeffs: Vec<Rational>) -> Self {
        let mut p = Polynomial { coeffs, var };
        p.trim();
        p
    }

    pub fn from_ints(var: Variable, coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            var,
            coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect(),
        )
    }

    pub fn zero(var: Variable) -> Self {
        Polynomial { coeffs: Vec::new(), var }
    }

    pub fn one(var: Variable) -> Self {
        Self::constant(var, Rational::one())
    }

    pub fn constant(var: Variable, c: Rational) -> Self {
        Self::from_coeffs(var, vec![c])
    }

    /// `c * var^degree`.
    pub fn monomial(var: Variable, c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(var, coeffs)
    }

    /// The identity polynomial `var`.
    pub fn identity(var: Variable) -> Self {
        Self::monomial(var, Rational::one(), 1)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn variable(&self) -> Variable {
        self.var
    }

    pub fn with_variable(mut self, var: Variable) -> Self {
        self.var = var;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coefficient(&self, degree: usize) -> Rational {
        self.coeffs.get(degree).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * at + c)
    }

    pub fn eval_int(&self, at: &BigInt) -> Rational {
        self.eval(&Rational::from_integer(at.clone()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.var);
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            var: self.var,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.var);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), ExactError> {
        assert_eq!(self.var, divisor.var, "variable mismatch in division");
        let lead = divisor.leading_coefficient().ok_or(ExactError::DivisionByZero)?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(self.var), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((
            Self::from_coeffs(self.var, quot),
            Self::from_coeffs(self.var, rem),
        ))
    }

    pub fn rem(&self, divisor: &Polynomial) -> Result<Polynomial, ExactError> {
        self.div_rem(divisor).map(|(_, r)| r)
    }

    /// Folds exponents modulo `k`, i.e. reduces modulo `x^k - 1`.
    pub fn reduce_mod_xk_minus_1(&self, k: usize) -> Polynomial {
        assert!(k > 0);
        let mut out = vec![Rational::zero(); k.min(self.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i % k] += c;
        }
        Self::from_coeffs(self.var, out)
    }

    /// Lagrange interpolation through `(xs[i], ys[i])`; the `xs` must be distinct.
    pub fn interpolate(var: Variable, xs: &[Rational], ys: &[Rational]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let mut acc = Self::zero(var);
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            let mut basis = Self::one(var);
            let mut denom = Rational::one();
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    basis = &basis * &Self::from_coeffs(var, vec![-xj.clone(), Rational::one()]);
                    denom *= xi - xj;
                }
            }
            acc = &acc + &basis.scale(&(yi / denom));
        }
        acc
    }

    fn zip_with(&self, other: &Polynomial, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        assert_eq!(self.var, other.var, "variable mismatch");
        let zero = Rational::zero();
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                f(
                    self.coeffs.get(i).unwrap_or(&zero),
                    other.coeffs.get(i).unwrap_or(&zero),
                )
            })
            .collect();
        Self::from_coeffs(self.var, coeffs)
    }
}

/// Free-function form of [`Polynomial::coefficient`].
pub fn poly_coefficient(p: &Polynomial, degree: usize) -> Rational {
    p.coefficient(degree)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.var, rhs.var, "variable mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.var);
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(self.var, out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            var: self.var,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Serializes as a JSON array of `"a/b"` strings, ascending degree.
impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&format_rational(c))?;
        }
        seq.end()
    }
}

/// Human-readable form, highest degree first: `1/4*k^4 + 1/2*k^3 + 1/4*k^2`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let v = self.var.symbol();
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = format_rational(&c.abs());
            match (d, mag.as_str()) {
                (0, m) => f.write_str(m)?,
                (1, "1") => f.write_str(v)?,
                (1, m) => write!(f, "{m}*{v}")?,
                (d, "1") => write!(f, "{v}^{d}")?,
                (d, m) => write!(f, "{m}*{v}^{d}")?,
            }
        }
        Ok(())
    }
}
