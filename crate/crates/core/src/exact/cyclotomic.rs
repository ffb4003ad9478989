//! Cyclotomic polynomials and exact arithmetic in `Q[x]/Φ_k(x)`.
//!
//! Mapping `e^{2πi/k} ↦ x` identifies the cyclotomic field `Q(ζ_k)` with
//! `Q[x]/Φ_k`, so sums of rational multiples of k-th roots of unity can be
//! compared for exact equality by comparing reduced residues.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::One;

use super::polynomial::{Polynomial, Variable};
use super::rational::Rational;
use super::ExactError;

fn divisors(k: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= k {
        if k % d == 0 {
            small.push(d);
            if d * d != k {
                large.push(k / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `Φ_k`, obtained as `(x^k - 1) / Π_{d|k, d<k} Φ_d` by exact division.
pub fn cyclotomic_polynomial(k: u64) -> Result<Polynomial, ExactError> {
    if k == 0 {
        return Err(ExactError::ZeroModulus);
    }
    let divs = divisors(k);
    let mut cache: BTreeMap<u64, Polynomial> = BTreeMap::new();
    for &d in &divs {
        let mut xd_minus_1 = Polynomial::monomial(Variable::X, Rational::one(), d as usize);
        xd_minus_1 = &xd_minus_1 - &Polynomial::one(Variable::X);
        let below = divs
            .iter()
            .take_while(|&&e| e < d)
            .filter(|&&e| d % e == 0)
            .fold(Polynomial::one(Variable::X), |acc, e| &acc * &cache[e]);
        let (q, r) = xd_minus_1.div_rem(&below)?;
        if !r.is_zero() {
            return Err(ExactError::InexactDivision(d));
        }
        cache.insert(d, q);
    }
    Ok(cache.remove(&k).expect("k divides itself"))
}

/// `Q[x]/Φ_k` together with its modulus polynomial.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicRing {
    k: u64,
    modulus: Polynomial,
}

impl CyclotomicRing {
    pub fn new(k: u64) -> Result<Arc<Self>, ExactError> {
        Ok(Arc::new(CyclotomicRing {
            k,
            modulus: cyclotomic_polynomial(k)?,
        }))
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn modulus(&self) -> &Polynomial {
        &self.modulus
    }

    /// `φ(k)`, the degree of `Φ_k`.
    pub fn dimension(&self) -> usize {
        self.modulus.degree().expect("Φ_k is nonzero")
    }

    pub fn reduce(self: &Arc<Self>, p: &Polynomial) -> CyclotomicElement {
        let p = p.clone().with_variable(Variable::X);
        let residue = p.rem(&self.modulus).expect("Φ_k is nonzero");
        CyclotomicElement {
            ring: Arc::clone(self),
            residue,
        }
    }

    /// Image of `Σ coeffs[e] x^e` where exponents index the k-th roots of unity.
    pub fn from_root_coefficients(self: &Arc<Self>, coeffs: Vec<Rational>) -> CyclotomicElement {
        let p = Polynomial::from_coeffs(Variable::X, coeffs).reduce_mod_xk_minus_1(self.k as usize);
        self.reduce(&p)
    }

    pub fn zero(self: &Arc<Self>) -> CyclotomicElement {
        CyclotomicElement {
            ring: Arc::clone(self),
            residue: Polynomial::zero(Variable::X),
        }
    }

    pub fn one(self: &Arc<Self>) -> CyclotomicElement {
        self.constant(Rational::one())
    }

    pub fn constant(self: &Arc<Self>, c: Rational) -> CyclotomicElement {
        CyclotomicElement {
            ring: Arc::clone(self),
            residue: Polynomial::constant(Variable::X, c),
        }
    }

    /// `x^(e mod k)` reduced modulo `Φ_k`.
    pub fn root_power(self: &Arc<Self>, e: i64) -> CyclotomicElement {
        let e = e.rem_euclid(self.k as i64) as usize;
        self.reduce(&Polynomial::monomial(Variable::X, Rational::one(), e))
    }
}

/// `x^(e mod k)` in `Q[x]/Φ_k`.
pub fn cyclo_root_power(k: u64, e: i64) -> Result<CyclotomicElement, ExactError> {
    Ok(CyclotomicRing::new(k)?.root_power(e))
}

/// A residue in `Q[x]/Φ_k` of degree below `φ(k)`.
#[derive(Clone, Debug)]
pub struct CyclotomicElement {
    ring: Arc<CyclotomicRing>,
    residue: Polynomial,
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring.k == other.ring.k && self.residue == other.residue
    }
}

impl Eq for CyclotomicElement {}

impl CyclotomicElement {
    pub fn modulus_k(&self) -> u64 {
        self.ring.k
    }

    pub fn ring(&self) -> &Arc<CyclotomicRing> {
        &self.ring
    }

    pub fn residue(&self) -> &Polynomial {
        &self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.residue == Polynomial::one(Variable::X)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CyclotomicElement {
            ring: Arc::clone(&self.ring),
            residue: self.residue.scale(c),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.ring.one();
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

    fn check_same_ring(&self, other: &Self) {
        assert_eq!(self.ring.k, other.ring.k, "mixing residues of different cyclotomic rings");
    }
}

impl Add for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn add(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        self.check_same_ring(rhs);
        CyclotomicElement {
            ring: Arc::clone(&self.ring),
            residue: &self.residue + &rhs.residue,
        }
    }
}

impl Sub for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn sub(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        self.check_same_ring(rhs);
        CyclotomicElement {
            ring: Arc::clone(&self.ring),
            residue: &self.residue - &rhs.residue,
        }
    }
}

impl Mul for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn mul(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        self.check_same_ring(rhs);
        self.ring.reduce(&(&self.residue * &rhs.residue))
    }
}

impl Neg for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        CyclotomicElement {
            ring: Arc::clone(&self.ring),
            residue: -&self.residue,
        }
    }
}

impl Add for CyclotomicElement {
    type Output = CyclotomicElement;
    fn add(self, rhs: CyclotomicElement) -> CyclotomicElement {
        &self + &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    fn x(coeffs: &[i64]) -> Polynomial {
        Polynomial::from_ints(Variable::X, coeffs)
    }

    fn totient(k: u64) -> usize {
        (1..=k).filter(|&a| num_integer::gcd(a, k) == 1).count()
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_polynomial(1).unwrap(), x(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2).unwrap(), x(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(6).unwrap(), x(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(4).unwrap(), x(&[1, 0, 1]));
        assert!(matches!(cyclotomic_polynomial(0), Err(ExactError::ZeroModulus)));
    }

    #[test]
    fn product_over_divisors_is_xk_minus_1_and_degree_is_totient() {
        for k in 1..=60u64 {
            let prod = divisors(k)
                .iter()
                .fold(x(&[1]), |acc, &d| &acc * &cyclotomic_polynomial(d).unwrap());
            let target = &Polynomial::monomial(Variable::X, int(1), k as usize) - &x(&[1]);
            assert_eq!(prod, target, "k={k}");
            let phi = cyclotomic_polynomial(k).unwrap();
            assert_eq!(phi.degree(), Some(totient(k)), "k={k}");
            assert_eq!(phi.leading_coefficient(), Some(&int(1)));
            assert!(phi.coeffs().iter().all(|c| c.is_integer()));
        }
    }

    #[test]
    fn root_power_reduction() {
        let r5 = cyclo_root_power(5, 7).unwrap();
        assert_eq!(r5.residue(), &x(&[0, 0, 1]));
        assert_eq!(cyclo_root_power(4, 2).unwrap().residue(), &x(&[-1]));
        assert!(cyclo_root_power(9, 0).unwrap().is_one());
        assert_eq!(
            cyclo_root_power(7, -1).unwrap(),
            cyclo_root_power(7, 6).unwrap()
        );
    }

    #[test]
    fn generator_has_exact_order_k() {
        for k in 1..=40u64 {
            let ring = CyclotomicRing::new(k).unwrap();
            let z = ring.root_power(1);
            let mut acc = ring.one();
            for j in 1..=k {
                acc = &acc * &z;
                assert_eq!(acc.is_one(), j == k, "k={k}, j={j}");
                assert!(acc.residue().degree().unwrap_or(0) < ring.dimension().max(1));
            }
            assert!(z.pow(k).is_one());
        }
    }

    #[test]
    fn sum_of_primitive_cube_roots_is_minus_one() {
        let ring = CyclotomicRing::new(3).unwrap();
        let s = &ring.root_power(1) + &ring.root_power(2);
        assert_eq!(s, ring.constant(int(-1)));
    }
}
