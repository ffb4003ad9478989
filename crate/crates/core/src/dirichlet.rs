//! Dirichlet characters, Gauss sums, the sums `S(m, χ)`, truncated
//! `L(r, χ)`, and a numeric check of the identity
//!
//! ```text
//! (-1)^{v+1} k r! / (i^r 2^{r-1} π^r) · L(r, χ) = Σ_{q=0}^{2⌊r/2⌋} C(r,q) B_q S(r-q, χ).
//! ```
//!
//! Only magnitudes are compared; the unit factor `(-1)^{v+1}` is recorded
//! as observed. Everything here is double precision.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use crate::bernoulli::BernoulliOracle;
use crate::exact::rational::{from_bigint, to_f64};
use crate::exact::{binomial, factorial};
use crate::report::Status;

/// Refuse truncations longer than this.
pub const MAX_TERMS: u64 = 5_000_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LfnError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("L(1, χ) diverges for the principal character")]
    Divergent,
    #[error("target tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("truncation would need {0} terms")]
    TooManyTerms(f64),
    #[error("{0}")]
    Domain(String),
}

/// `(Z/kZ)^*` as a product of cyclic groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitGroupStructure {
    pub modulus: u64,
    pub generators: Vec<u64>,
    pub orders: Vec<u64>,
    /// Residue → exponent vector with respect to `generators`.
    pub dlog: BTreeMap<u64, Vec<u64>>,
}

impl UnitGroupStructure {
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn multiplicative_order(g: u64, m: u64) -> u64 {
    let mut x = g % m;
    let mut ord = 1;
    while x != 1 % m {
        x = x * g % m;
        ord += 1;
    }
    ord
}

pub fn totient(k: u64) -> u64 {
    (1..=k).filter(|&a| a.gcd(&k) == 1).count() as u64
}

/// Element of `Z/kZ` congruent to `g` mod `pe` and to 1 mod `k / pe`.
fn lift(g: u64, pe: u64, k: u64) -> u64 {
    let rest = k / pe;
    (0..rest)
        .map(|t| g + t * pe)
        .find(|r| r % rest == 1 % rest)
        .expect("CRT lift exists for coprime moduli")
        % k
}

/// Cyclic decomposition via the prime-power factorization of `k`.
pub fn unit_group_structure(k: u64) -> Result<UnitGroupStructure, LfnError> {
    if k == 0 {
        return Err(LfnError::ZeroModulus);
    }
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    for (q, e) in factorize(k) {
        let pe = q.pow(e);
        let local: Vec<(u64, u64)> = if q == 2 {
            match e {
                1 => vec![],
                2 => vec![(3, 2)],
                _ => vec![(pe - 1, 2), (5, pe / 4)],
            }
        } else {
            let phi = pe / q * (q - 1);
            let g = (2..pe)
                .find(|&g| g % q != 0 && multiplicative_order(g, pe) == phi)
                .expect("odd prime powers have primitive roots");
            vec![(g, phi)]
        };
        for (g, ord) in local {
            generators.push(lift(g, pe, k));
            orders.push(ord);
        }
    }

    let mut dlog = BTreeMap::new();
    let total: u64 = orders.iter().product();
    for idx in 0..total {
        let mut rem = idx;
        let mut exps = vec![0; orders.len()];
        for j in (0..orders.len()).rev() {
            exps[j] = rem % orders[j];
            rem /= orders[j];
        }
        let r = generators
            .iter()
            .zip(&exps)
            .fold(1 % k, |acc, (&g, &x)| acc * pow_mod(g, x, k) % k);
        let prev = dlog.insert(r, exps);
        assert!(prev.is_none(), "generators of (Z/{k})* are not independent");
    }
    debug_assert_eq!(total, totient(k));
    Ok(UnitGroupStructure {
        modulus: k,
        generators,
        orders,
        dlog,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_exponent(r: u32) -> Parity {
        if r % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A character mod `k` as an explicit value table.
///
/// Values are `e^{2πi t/L}` with `L` the exponent of the unit group; the
/// integer phases `t` are kept alongside the complex table so that parity
/// and primitivity are decided exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter {
    modulus: u64,
    index: usize,
    exponents: Vec<u64>,
    phase_denominator: u64,
    phases: Vec<Option<u64>>,
    values: Vec<Complex64>,
    parity: Parity,
    principal: bool,
}

fn root_of_unity(t: u64, denom: u64) -> Complex64 {
    if (4 * t) % denom == 0 {
        match 4 * t / denom % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, 2.0 * PI * t as f64 / denom as f64)
    }
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Position in [`enumerate_characters`] order.
    pub fn index(&self) -> usize {
        self.index
    }

    /// Image of generator `j` is `e^{2πi exponents[j] / orders[j]}`.
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, n: i64) -> Complex64 {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_principal(&self) -> bool {
        self.principal
    }

    fn is_unit_one(&self, n: u64) -> bool {
        self.phases[n as usize] == Some(0)
    }

    /// Not induced from any modulus `d | k`, `d < k`: for each such `d` some
    /// unit `n ≡ 1 (mod d)` has `χ(n) ≠ 1`.
    pub fn is_primitive(&self) -> bool {
        let k = self.modulus;
        (1..k).filter(|d| k % d == 0).all(|d| {
            (0..k)
                .filter(|&n| n % d == 1 % d && self.phases[n as usize].is_some())
                .any(|n| !self.is_unit_one(n))
        })
    }

    /// Order of `χ` in the character group.
    pub fn order(&self) -> u64 {
        let g = self
            .phases
            .iter()
            .flatten()
            .fold(self.phase_denominator, |acc, &t| acc.gcd(&t));
        self.phase_denominator / g
    }
}

/// All `φ(k)` characters, ordered by exponent tuple; the principal one first.
pub fn enumerate_characters(k: u64) -> Result<Vec<DirichletCharacter>, LfnError> {
    let group = unit_group_structure(k)?;
    let denom = group.orders.iter().fold(1u64, |acc, &o| acc.lcm(&o));
    let total = group.order();
    let mut out = Vec::with_capacity(total as usize);
    for idx in 0..total {
        let mut rem = idx;
        let mut exponents = vec![0; group.orders.len()];
        for j in (0..group.orders.len()).rev() {
            exponents[j] = rem % group.orders[j];
            rem /= group.orders[j];
        }
        let mut phases = vec![None; k as usize];
        for (&res, logs) in &group.dlog {
            let t = logs
                .iter()
                .zip(&exponents)
                .zip(&group.orders)
                .map(|((&l, &x), &o)| l * x * (denom / o))
                .sum::<u64>()
                % denom;
            phases[res as usize] = Some(t);
        }
        let values = phases
            .iter()
            .map(|t| t.map_or(Complex64::new(0.0, 0.0), |t| root_of_unity(t, denom)))
            .collect();
        let minus_one = ((k as i64 - 1).rem_euclid(k as i64)) as usize;
        let parity = match phases[minus_one] {
            Some(0) => Parity::Even,
            Some(t) if 2 * t == denom => Parity::Odd,
            other => unreachable!("χ(-1) must be ±1, phase {other:?}/{denom}"),
        };
        out.push(DirichletCharacter {
            modulus: k,
            index: idx as usize,
            principal: exponents.iter().all(|&x| x == 0),
            exponents,
            phase_denominator: denom,
            phases,
            values,
            parity,
        });
    }
    Ok(out)
}

fn unit_phase(numer: u64, k: u64) -> Complex64 {
    root_of_unity(numer % k, k)
}

/// `G(j, χ) = Σ_{m=1}^{k} χ(m) e^{2πi m j / k}`.
pub fn gauss_sum(j: i64, chi: &DirichletCharacter) -> Complex64 {
    let k = chi.modulus;
    let j = j.rem_euclid(k as i64) as u64;
    (1..=k).map(|m| chi.value(m as i64) * unit_phase(m * j, k)).sum()
}

/// `S(m, χ) = Σ_{j=1}^{k} (j/k)^m G(j, χ)`, including the `j = k` term.
pub fn s_sum(m: u32, chi: &DirichletCharacter) -> Complex64 {
    let k = chi.modulus as f64;
    (1..=chi.modulus)
        .map(|j| gauss_sum(j as i64, chi) * (j as f64 / k).powi(m as i32))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LSeriesValue {
    pub r: u32,
    #[serde(serialize_with = "serialize_complex")]
    pub value: Complex64,
    pub truncation_n: u64,
    /// Upper bound on `|L(r, χ) - value|`.
    pub tail_bound: f64,
}

fn serialize_complex<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// Neumaier-compensated complex accumulator.
#[derive(Default)]
struct Compensated {
    sum: Complex64,
    comp: Complex64,
}

impl Compensated {
    fn add(&mut self, x: Complex64) {
        fn step(sum: &mut f64, comp: &mut f64, x: f64) {
            let t = *sum + x;
            if sum.abs() >= x.abs() {
                *comp += (*sum - t) + x;
            } else {
                *comp += (x - t) + *sum;
            }
            *sum = t;
        }
        step(&mut self.sum.re, &mut self.comp.re, x.re);
        step(&mut self.sum.im, &mut self.comp.im, x.im);
    }

    fn total(&self) -> Complex64 {
        self.sum + self.comp
    }
}

/// `Σ_{n=1}^{N} χ(n) / n^r`.
pub fn l_partial_sum(r: u32, chi: &DirichletCharacter, terms: u64) -> Complex64 {
    let k = chi.modulus;
    let units: Vec<(u64, Complex64)> = (1..=k)
        .map(|n| (n, chi.value(n as i64)))
        .filter(|(_, v)| v.norm_sqr() > 0.0)
        .collect();
    let mut acc = Compensated::default();
    let mut base = 0u64;
    'outer: loop {
        for &(res, v) in &units {
            let n = base + res;
            if n > terms {
                break 'outer;
            }
            let w = (n as f64).powi(-(r as i32));
            acc.add(v * w);
        }
        base += k;
        if base >= terms {
            break;
        }
    }
    acc.total()
}

/// Truncated `L(r, χ)` with a rigorous tail bound no larger than `target_tol`.
///
/// For `r >= 2` the tail is at most `∫_N^∞ x^{-r} dx = N^{1-r}/(r-1)`. For
/// `r = 1`, `N` is a multiple of `k` so the character sum up to `N`
/// vanishes, and Abel summation bounds the tail by `k · max_n |Σ_{m≤n} χ(m)| / N`.
pub fn l_value(r: u32, chi: &DirichletCharacter, target_tol: f64) -> Result<LSeriesValue, LfnError> {
    if !(target_tol > 0.0 && target_tol.is_finite()) {
        return Err(LfnError::BadTolerance(target_tol));
    }
    if r == 0 {
        return Err(LfnError::Domain("r must be at least 1".into()));
    }
    let k = chi.modulus;
    let (n, tail_bound) = if r == 1 {
        if chi.principal {
            return Err(LfnError::Divergent);
        }
        let mut partial = Complex64::new(0.0, 0.0);
        let mut max_partial: f64 = 0.0;
        for m in 1..=k {
            partial += chi.value(m as i64);
            max_partial = max_partial.max(partial.norm());
        }
        let blocks = (max_partial / target_tol).ceil().max(1.0);
        let n = blocks * k as f64;
        if n > MAX_TERMS as f64 {
            return Err(LfnError::TooManyTerms(n));
        }
        let n = n as u64;
        (n, k as f64 * max_partial / n as f64)
    } else {
        let rm1 = (r - 1) as f64;
        let n = ((rm1 * target_tol).powf(-1.0 / rm1)).ceil().max(1.0);
        if n > MAX_TERMS as f64 {
            return Err(LfnError::TooManyTerms(n));
        }
        let n = n as u64;
        (n, (n as f64).powf(-rm1) / rm1)
    };
    Ok(LSeriesValue {
        r,
        value: l_partial_sum(r, chi, n),
        truncation_n: n,
        tail_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlkanReport {
    pub k: u64,
    pub r: u32,
    pub chi_index: usize,
    pub primitive: bool,
    pub lhs_magnitude: f64,
    pub rhs_magnitude: f64,
    pub ratio: f64,
    /// `RHS / (k r! L / (i^r 2^{r-1} π^r))`, which should be `±1`.
    pub sign_observed: String,
    pub status: Status,
    pub detail: String,
}

pub const ALKAN_MAX_R: u32 = 4;

/// Compares `|LHS|` and `|RHS|`; PASS when the ratio is within `tol` of 1.
pub fn alkan_check(r: u32, chi: &DirichletCharacter, tol: f64) -> Result<AlkanReport, LfnError> {
    if chi.principal {
        return Err(LfnError::Domain("the principal character is excluded".into()));
    }
    if r == 0 || r > ALKAN_MAX_R {
        return Err(LfnError::Domain(format!("r must lie in 1..={ALKAN_MAX_R}, got {r}")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(LfnError::BadTolerance(tol));
    }
    let primitive = chi.is_primitive();
    let mut report = AlkanReport {
        k: chi.modulus,
        r,
        chi_index: chi.index,
        primitive,
        lhs_magnitude: f64::NAN,
        rhs_magnitude: f64::NAN,
        ratio: f64::NAN,
        sign_observed: String::new(),
        status: Status::Skipped,
        detail: String::new(),
    };
    if chi.parity != Parity::of_exponent(r) {
        report.detail = format!("parity mismatch: χ is {:?}, r = {r}", chi.parity).to_lowercase();
        return Ok(report);
    }

    let mut oracle = BernoulliOracle::new();
    let bern: Vec<f64> = oracle.values_through(r as usize).iter().map(to_f64).collect();
    let rhs: Complex64 = (0..=2 * (r / 2))
        .map(|q| {
            let c = to_f64(&from_bigint(binomial(r as u64, q as i64))) * bern[q as usize];
            s_sum(r - q, chi) * c
        })
        .sum();

    let l = l_value(r, chi, tol / 20.0)?;
    let r_fact = to_f64(&from_bigint(factorial(r as u64)));
    let scale = chi.modulus as f64 * r_fact / (2f64.powi(r as i32 - 1) * PI.powi(r as i32));
    let i_pow_r = Complex64::i().powu(r);
    let lhs = l.value * scale / i_pow_r;

    report.lhs_magnitude = lhs.norm();
    report.rhs_magnitude = rhs.norm();
    report.ratio = report.lhs_magnitude / report.rhs_magnitude;
    let unit = rhs / lhs;
    report.sign_observed = if (unit - 1.0).norm() < 1e-3 {
        "+1".to_string()
    } else if (unit + 1.0).norm() < 1e-3 {
        "-1".to_string()
    } else {
        format!("phase {:.6} rad", unit.arg())
    };
    let within = (report.ratio - 1.0).abs() <= tol;
    report.status = match (primitive, within) {
        (false, _) => Status::Reported,
        (true, true) => Status::Pass,
        (true, false) => Status::Fail,
    };
    report.detail = format!(
        "N = {}, tail bound {:.3e}",
        l.truncation_n, l.tail_bound
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn quadratic_mod5() -> DirichletCharacter {
        enumerate_characters(5)
            .unwrap()
            .into_iter()
            .find(|c| c.order() == 2)
            .unwrap()
    }

    #[test]
    fn unit_groups() {
        let g2 = unit_group_structure(2).unwrap();
        assert!(g2.orders.is_empty());
        assert_eq!(g2.order(), 1);
        let g5 = unit_group_structure(5).unwrap();
        assert_eq!(g5.orders, vec![4]);
        let g8 = unit_group_structure(8).unwrap();
        assert_eq!(g8.orders, vec![2, 2]);
        for &g in &g8.generators {
            assert_eq!(g * g % 8, 1);
        }
        assert!(matches!(unit_group_structure(0), Err(LfnError::ZeroModulus)));
        for k in 1..=60 {
            let g = unit_group_structure(k).unwrap();
            assert_eq!(g.order(), totient(k), "k={k}");
            assert_eq!(g.dlog.len() as u64, totient(k));
            for (&res, _) in &g.dlog {
                assert_eq!(res.gcd(&k), 1);
            }
        }
    }

    #[test]
    fn character_basics() {
        let chars = enumerate_characters(5).unwrap();
        assert_eq!(chars.len(), 4);
        assert!(chars[0].is_principal());
        for n in 1..5 {
            assert_eq!(chars[0].value(n), Complex64::new(1.0, 0.0));
        }
        assert_eq!(chars[0].value(0), Complex64::new(0.0, 0.0));
        for c in &chars[1..] {
            let s: Complex64 = (1..=5).map(|n| c.value(n)).sum();
            assert!(s.norm() <= 1e-9);
        }
        let k1 = enumerate_characters(1).unwrap();
        assert_eq!(k1.len(), 1);
        assert_eq!(k1[0].parity(), Parity::Even);
    }

    #[test]
    fn parity_and_primitivity() {
        let mod4 = enumerate_characters(4).unwrap();
        assert_eq!(mod4[1].parity(), Parity::Odd);
        assert!(mod4[1].is_primitive());
        assert!(!mod4[0].is_primitive());
        // mod 12 has one primitive character, χ_{-3}·χ_{-4}, which is even.
        let prim12: Vec<_> = enumerate_characters(12)
            .unwrap()
            .into_iter()
            .filter(DirichletCharacter::is_primitive)
            .collect();
        assert_eq!(prim12.len(), 1);
        assert_eq!(prim12[0].parity(), Parity::Even);
        // counts of primitive characters for prime moduli: p - 2
        for p in [3u64, 5, 7, 11, 13] {
            let n = enumerate_characters(p).unwrap().iter().filter(|c| c.is_primitive()).count();
            assert_eq!(n as u64, p - 2);
        }
        // mod 8: the two characters of conductor 8
        let n8 = enumerate_characters(8).unwrap().iter().filter(|c| c.is_primitive()).count();
        assert_eq!(n8, 2);
    }

    #[test]
    fn gauss_sums() {
        let chi = quadratic_mod5();
        assert!(close(gauss_sum(1, &chi), Complex64::new(5f64.sqrt(), 0.0), 1e-9));
        for k in [3u64, 4, 5, 7, 8, 9, 11, 12] {
            for c in enumerate_characters(k).unwrap() {
                if c.is_principal() {
                    continue;
                }
                assert!(gauss_sum(0, &c).norm() <= 1e-10);
                if c.is_primitive() {
                    assert!((gauss_sum(1, &c).norm() - (k as f64).sqrt()).abs() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn s_sums_against_double_loop() {
        for k in 2..=12u64 {
            for c in enumerate_characters(k).unwrap() {
                for m in 0..=4u32 {
                    let mut direct = Complex64::new(0.0, 0.0);
                    for j in 1..=k {
                        for n in 1..=k {
                            let ang = 2.0 * PI * (n * j) as f64 / k as f64;
                            direct += c.value(n as i64)
                                * Complex64::from_polar(1.0, ang)
                                * (j as f64 / k as f64).powi(m as i32);
                        }
                    }
                    assert!(close(s_sum(m, &c), direct, 1e-10), "k={k} m={m}");
                }
                if !c.is_principal() {
                    assert!(s_sum(0, &c).norm() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn l_values() {
        let chi4 = enumerate_characters(4).unwrap().remove(1);
        let l = l_value(1, &chi4, 1e-7).unwrap();
        assert!((l.value.re - PI / 4.0).abs() < 1e-6);
        assert!(l.truncation_n % 4 == 0);
        let chi3 = enumerate_characters(3).unwrap().remove(1);
        let l = l_value(1, &chi3, 1e-7).unwrap();
        assert!((l.value.re - PI / (3.0 * 3f64.sqrt())).abs() < 1e-6);
        assert!(matches!(
            l_value(1, &enumerate_characters(3).unwrap()[0], 1e-6),
            Err(LfnError::Divergent)
        ));
        assert!(matches!(l_value(2, &chi3, 0.0), Err(LfnError::BadTolerance(_))));
    }

    #[test]
    fn l_value_r2_against_long_truncation() {
        // the real even character mod 3 is principal; use the quadratic character mod 5
        let chi = quadratic_mod5();
        let l = l_value(2, &chi, 1e-7).unwrap();
        let reference = l_partial_sum(2, &chi, 10_000_000);
        assert!(close(l.value, reference, 1e-6));
    }

    #[test]
    fn tail_bounds_cover_observed_tails() {
        for k in [3u64, 4, 5, 7] {
            for c in enumerate_characters(k).unwrap().iter().filter(|c| !c.is_principal()) {
                for r in 1..=3 {
                    let l = l_value(r, c, 1e-4).unwrap();
                    let longer = l_partial_sum(r, c, 4 * l.truncation_n);
                    assert!((l.value - longer).norm() < l.tail_bound, "k={k} r={r}");
                }
            }
        }
    }

    #[test]
    fn alkan_examples() {
        let chi4 = enumerate_characters(4).unwrap().remove(1);
        let rep = alkan_check(1, &chi4, 1e-5).unwrap();
        assert_eq!(rep.status, Status::Pass, "{rep:?}");
        let rep = alkan_check(2, &quadratic_mod5(), 1e-5).unwrap();
        assert_eq!(rep.status, Status::Pass, "{rep:?}");
        let rep = alkan_check(1, &quadratic_mod5(), 1e-5).unwrap();
        assert_eq!(rep.status, Status::Skipped);
        assert!(alkan_check(1, &enumerate_characters(4).unwrap()[0], 1e-5).is_err());
        assert!(alkan_check(5, &chi4, 1e-5).is_err());
    }
}
