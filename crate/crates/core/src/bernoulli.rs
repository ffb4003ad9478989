//! Bernoulli numbers, with `B_1 = -1/2`.
//!
//! [`BernoulliOracle`] runs the defining recurrence
//! `Σ_{j=0}^{n} C(n+1, j) B_j = 0`. [`retrieve_bernoulli`] recovers the same
//! numbers a second way: it writes `h(n+1, k)` (or `h(1, k)` for `n = 1`)
//! both through the odd-exponent recurrence and through Faulhaber's formula
//! with `B_n` unknown, and solves for `B_n` from one coefficient.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact::rational::{format_rational, from_bigint};
use crate::exact::{binomial, Polynomial, Rational, Variable};
use crate::power_sums::{faulhaber_polynomial, interpolated_polynomial, recurrence_polynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BernoulliError {
    #[error("B_{0} vanishes for odd n > 1; there is nothing to retrieve")]
    OddIndex(usize),
    #[error("internal consistency failure at B_{n}: {detail}")]
    Consistency { n: usize, detail: String },
    #[error("retrieved B_{n} = {retrieved} disagrees with the oracle value {oracle}")]
    OracleMismatch {
        n: usize,
        retrieved: String,
        oracle: String,
    },
}

/// Memoized defining recurrence.
#[derive(Debug, Clone)]
pub struct BernoulliOracle {
    cache: Vec<Rational>,
}

impl Default for BernoulliOracle {
    fn default() -> Self {
        BernoulliOracle {
            cache: vec![Rational::one()],
        }
    }
}

impl BernoulliOracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// `B_0 ..= B_n`.
    pub fn values_through(&mut self, n: usize) -> &[Rational] {
        while self.cache.len() <= n {
            let m = self.cache.len();
            let s: Rational = self
                .cache
                .iter()
                .enumerate()
                .map(|(j, b)| from_bigint(binomial(m as u64 + 1, j as i64)) * b)
                .sum();
            let b = -s / Rational::from_integer(BigInt::from(m + 1));
            self.cache.push(b);
        }
        &self.cache[..=n]
    }

    pub fn get(&mut self, n: usize) -> Rational {
        self.values_through(n)[n].clone()
    }
}

pub fn bernoulli_oracle(n: usize) -> Rational {
    BernoulliOracle::new().get(n)
}

/// One solved step of the retrieval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetrievalStep {
    pub n: usize,
    /// Exponent of the power sum whose two expressions are compared.
    pub p: u32,
    /// Degree of `k` whose coefficients are equated.
    pub compared_degree: usize,
    #[serde(with = "crate::exact::rational::as_string")]
    pub value: Rational,
    /// The recurrence side, as a polynomial in `k`.
    pub recurrence_side: Polynomial,
    /// Faulhaber's side after substituting the solved value.
    pub faulhaber_side: Polynomial,
}

/// Recovers `B_n` from `known[j] = B_j` for `j < n`.
///
/// Lower power sums on the recurrence side come from the recurrence itself
/// (odd) or from Faulhaber's formula with the already retrieved numbers
/// (even, below `n`). `h(n, ·)` itself, whose Faulhaber form would contain
/// the unknown, is obtained by interpolating direct sums.
pub fn retrieve_step(n: usize, known: &[Rational]) -> Result<RetrievalStep, BernoulliError> {
    if n == 0 || (n % 2 == 1 && n > 1) {
        return Err(BernoulliError::OddIndex(n));
    }
    assert!(known.len() >= n, "need B_0..B_{{n-1}}");
    let p: u32 = if n == 1 { 1 } else { n as u32 + 1 };

    let mut lower: Vec<Polynomial> = vec![Polynomial::identity(Variable::K)];
    for j in 1..p {
        let poly = if j % 2 == 1 {
            recurrence_polynomial(j, &lower)
        } else if (j as usize) < n {
            faulhaber_polynomial(j, known).map_err(|e| BernoulliError::Consistency {
                n,
                detail: e.to_string(),
            })?
        } else {
            interpolated_polynomial(j)
        };
        lower.push(poly);
    }
    let recurrence_side = recurrence_polynomial(p, &lower);

    // Faulhaber's side split as known_part + B_n * unknown_part. Entries
    // above n are odd indices >= 3, which vanish.
    let mut with_zero = known[..n].to_vec();
    with_zero.resize(p as usize + 1, Rational::zero());
    let known_part = faulhaber_polynomial(p, &with_zero).expect("table sized to p");
    let degree = p as usize + 1 - n;
    let scale = Rational::new(BigInt::one(), BigInt::from(p + 1));
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let unknown_coeff = from_bigint(binomial(p as u64 + 1, n as i64) * sign) * scale;
    let unknown_part = Polynomial::monomial(Variable::K, unknown_coeff.clone(), degree);

    let value = (recurrence_side.coefficient(degree) - known_part.coefficient(degree)) / unknown_coeff;
    let faulhaber_side = &known_part + &unknown_part.scale(&value);
    if faulhaber_side != recurrence_side {
        return Err(BernoulliError::Consistency {
            n,
            detail: format!(
                "after solving, the two sides differ: {recurrence_side} vs {faulhaber_side}"
            ),
        });
    }
    Ok(RetrievalStep {
        n,
        p,
        compared_degree: degree,
        value,
        recurrence_side,
        faulhaber_side,
    })
}

/// Every retrieval step for indices `1..=nmax` that admit one (1 and the evens),
/// with odd indices from 3 up set to zero in between.
pub fn retrieve_sequence(nmax: usize) -> Result<Vec<RetrievalStep>, BernoulliError> {
    let mut known = vec![Rational::one()];
    let mut steps = Vec::new();
    for n in 1..=nmax {
        if n == 1 || n % 2 == 0 {
            let step = retrieve_step(n, &known)?;
            known.push(step.value.clone());
            steps.push(step);
        } else {
            known.push(Rational::zero());
        }
    }
    Ok(steps)
}

/// `B_n` by retrieval, for `n = 1` or even `n >= 2`.
pub fn retrieve_bernoulli(n: usize) -> Result<Rational, BernoulliError> {
    if n == 0 || (n % 2 == 1 && n > 1) {
        return Err(BernoulliError::OddIndex(n));
    }
    let steps = retrieve_sequence(n)?;
    Ok(steps.last().expect("n >= 1 yields a step").value.clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BernoulliTable {
    #[serde(serialize_with = "serialize_values")]
    values: BTreeMap<usize, Rational>,
}

fn serialize_values<S: serde::Serializer>(
    values: &BTreeMap<usize, Rational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    #[derive(Serialize)]
    struct Entry {
        n: usize,
        value: String,
    }
    let mut seq = s.serialize_seq(Some(values.len()))?;
    for (&n, v) in values {
        seq.serialize_element(&Entry {
            n,
            value: format_rational(v),
        })?;
    }
    seq.end()
}

impl BernoulliTable {
    pub fn get(&self, n: usize) -> Option<&Rational> {
        self.values.get(&n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.values.iter().map(|(&n, v)| (n, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `B_0..=B_nmax`, retrieved where possible and checked against the oracle.
pub fn bernoulli_table(nmax: usize) -> Result<BernoulliTable, BernoulliError> {
    let mut oracle = BernoulliOracle::new();
    let expected = oracle.values_through(nmax).to_vec();
    let mut values = BTreeMap::new();
    values.insert(0, Rational::one());
    for n in 1..=nmax {
        values.insert(n, Rational::zero());
    }
    for step in retrieve_sequence(nmax)? {
        values.insert(step.n, step.value);
    }
    for (&n, v) in &values {
        if v != &expected[n] {
            return Err(BernoulliError::OracleMismatch {
                n,
                retrieved: format_rational(v),
                oracle: format_rational(&expected[n]),
            });
        }
    }
    Ok(BernoulliTable { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn oracle_values() {
        let mut o = BernoulliOracle::new();
        assert_eq!(o.get(0), int(1));
        assert_eq!(o.get(1), rat(-1, 2));
        assert_eq!(o.get(2), rat(1, 6));
        assert_eq!(o.get(4), rat(-1, 30));
        assert_eq!(o.get(6), rat(1, 42));
        assert_eq!(o.get(8), rat(-1, 30));
        assert_eq!(o.get(10), rat(5, 66));
        assert_eq!(o.get(12), rat(-691, 2730));
        for m in 1..=15 {
            assert!(o.get(2 * m + 1).is_zero());
        }
    }

    #[test]
    fn retrieval_examples() {
        let s1 = retrieve_step(1, &[int(1)]).unwrap();
        assert_eq!((s1.p, s1.compared_degree), (1, 1));
        assert_eq!(s1.value, rat(-1, 2));
        let s2 = retrieve_step(2, &[int(1), rat(-1, 2)]).unwrap();
        assert_eq!((s2.p, s2.compared_degree), (3, 2));
        assert_eq!(s2.value, rat(1, 6));
        assert_eq!(retrieve_bernoulli(4).unwrap(), rat(-1, 30));
        assert_eq!(retrieve_bernoulli(2).unwrap(), rat(1, 6));
    }

    #[test]
    fn odd_indices_are_rejected() {
        assert_eq!(retrieve_bernoulli(3), Err(BernoulliError::OddIndex(3)));
        assert_eq!(retrieve_bernoulli(0), Err(BernoulliError::OddIndex(0)));
    }

    #[test]
    fn tables() {
        let t0 = bernoulli_table(0).unwrap();
        assert_eq!(t0.len(), 1);
        assert_eq!(t0.get(0), Some(&int(1)));
        let t3 = bernoulli_table(3).unwrap();
        let v: Vec<_> = t3.iter().map(|(_, v)| v.clone()).collect();
        assert_eq!(v, vec![int(1), rat(-1, 2), rat(1, 6), int(0)]);
        assert_eq!(bernoulli_table(8).unwrap().get(8), Some(&rat(-1, 30)));
        assert_eq!(
            serde_json::to_string(&t3).unwrap(),
            r#"{"values":[{"n":0,"value":"1"},{"n":1,"value":"-1/2"},{"n":2,"value":"1/6"},{"n":3,"value":"0"}]}"#
        );
    }
}
