//! Compositions (ordered partitions), the bijection between strictly
//! decreasing chains and compositions, and two evaluations of the
//! coefficient of `x^n` in `(1 - Σ u_i x^i)^{-1}`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact::Rational;

/// Largest `n` for which `C(n)` or `C(m, n)` is enumerated.
pub const MAX_ENUMERATION: usize = 24;
/// Largest `n` for the brute-force coefficient sum.
pub const MAX_BRUTEFORCE: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompositionError {
    #[error("n = {n} exceeds the enumeration limit {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error("{0}")]
    Domain(String),
}

/// An ordered tuple of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self, CompositionError> {
        if parts.is_empty() {
            return Err(CompositionError::Domain("a composition has at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(CompositionError::Domain(format!("zero part in {parts:?}")));
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Indices `upper > i_1 > i_2 > ... > i_r > lower`; may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DecreasingChain {
    indices: Vec<usize>,
    upper: usize,
    lower: usize,
}

impl DecreasingChain {
    pub fn new(indices: Vec<usize>, upper: usize, lower: usize) -> Result<Self, CompositionError> {
        if lower >= upper {
            return Err(CompositionError::Domain(format!(
                "lower {lower} must be below upper {upper}"
            )));
        }
        let mut prev = upper;
        for &i in &indices {
            if i >= prev || i <= lower {
                return Err(CompositionError::Domain(format!(
                    "{indices:?} is not strictly decreasing inside ({lower}, {upper})"
                )));
            }
            prev = i;
        }
        Ok(DecreasingChain { indices, upper, lower })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

fn check_guard(n: usize, limit: usize) -> Result<(), CompositionError> {
    if n > limit {
        Err(CompositionError::SizeLimit { n, limit })
    } else {
        Ok(())
    }
}

fn extend(prefix: &mut Vec<usize>, remaining: usize, slots: Option<usize>, out: &mut Vec<Composition>) {
    if remaining == 0 {
        if slots.map_or(true, |s| s == 0) {
            out.push(Composition { parts: prefix.clone() });
        }
        return;
    }
    let max_part = match slots {
        Some(0) => return,
        // leave at least one unit for each remaining slot
        Some(s) => remaining - (s - 1),
        None => remaining,
    };
    for part in 1..=max_part {
        prefix.push(part);
        extend(prefix, remaining - part, slots.map(|s| s - 1), out);
        prefix.pop();
    }
}

/// All `2^(n-1)` compositions of `n`, lexicographic in the parts.
pub fn enumerate_compositions(n: usize) -> Result<Vec<Composition>, CompositionError> {
    if n == 0 {
        return Err(CompositionError::Domain("n must be positive".into()));
    }
    check_guard(n, MAX_ENUMERATION)?;
    let mut out = Vec::with_capacity(1 << (n - 1));
    extend(&mut Vec::new(), n, None, &mut out);
    Ok(out)
}

/// Compositions of `n` with exactly `m` parts, lexicographic.
pub fn enumerate_compositions_length(n: usize, m: usize) -> Result<Vec<Composition>, CompositionError> {
    if m < 1 || m > n {
        return Err(CompositionError::Domain(format!("length {m} outside 1..={n}")));
    }
    check_guard(n, MAX_ENUMERATION)?;
    let mut out = Vec::new();
    extend(&mut Vec::new(), n, Some(m), &mut out);
    Ok(out)
}

/// `(upper - i_1, i_1 - i_2, ..., i_r - lower)`.
pub fn chain_to_composition(chain: &DecreasingChain) -> Composition {
    let mut parts = Vec::with_capacity(chain.indices.len() + 1);
    let mut prev = chain.upper;
    for &i in chain.indices.iter().chain(std::iter::once(&chain.lower)) {
        parts.push(prev - i);
        prev = i;
    }
    Composition { parts }
}

/// Inverse of [`chain_to_composition`]: `i_1 = upper - j_1`, `i_2 = upper - (j_1 + j_2)`, ...
pub fn composition_to_chain(
    comp: &Composition,
    upper: usize,
    lower: usize,
) -> Result<DecreasingChain, CompositionError> {
    if lower >= upper || comp.total() != upper - lower {
        return Err(CompositionError::Domain(format!(
            "parts of {:?} sum to {}, expected {upper} - {lower}",
            comp.parts,
            comp.total()
        )));
    }
    let mut indices = Vec::with_capacity(comp.len() - 1);
    let mut at = upper;
    for &j in &comp.parts[..comp.len() - 1] {
        at -= j;
        indices.push(at);
    }
    Ok(DecreasingChain { indices, upper, lower })
}

/// Every strictly decreasing chain inside `(lower, upper)`, shortest first;
/// chains of equal length are lexicographic by index.
pub fn decreasing_chains(upper: usize, lower: usize) -> Result<Vec<DecreasingChain>, CompositionError> {
    if lower >= upper {
        return Err(CompositionError::Domain(format!(
            "lower {lower} must be below upper {upper}"
        )));
    }
    let span = upper - lower;
    check_guard(span, MAX_ENUMERATION)?;
    let mut chains: Vec<DecreasingChain> = enumerate_compositions(span)?
        .iter()
        .map(|c| composition_to_chain(c, upper, lower).expect("sums match"))
        .collect();
    chains.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.indices.cmp(&b.indices)));
    Ok(chains)
}

/// Coefficient of `x^n` in `(1 - Σ_{i≥1} u_i x^i)^{-1}` by truncated series
/// inversion: `c_0 = 1`, `c_t = Σ_{i=1}^{t} u_i c_{t-i}`. `u[0]` holds `u_1`.
pub fn gessel_coefficient_series(u: &[Rational], n: usize) -> Result<Rational, CompositionError> {
    check_weights(u, n)?;
    let mut c: Vec<Rational> = Vec::with_capacity(n + 1);
    c.push(Rational::one());
    for t in 1..=n {
        let mut acc = Rational::zero();
        for i in 1..=t {
            acc += &u[i - 1] * &c[t - i];
        }
        c.push(acc);
    }
    Ok(c.swap_remove(n))
}

/// The same coefficient as `Σ_{(a_1..a_j) ∈ C(n)} u_{a_1} ... u_{a_j}`, with
/// the constant term 1 at `n = 0`.
pub fn gessel_coefficient_bruteforce(u: &[Rational], n: usize) -> Result<Rational, CompositionError> {
    check_weights(u, n)?;
    check_guard(n, MAX_BRUTEFORCE)?;
    if n == 0 {
        return Ok(Rational::one());
    }
    Ok(enumerate_compositions(n)?
        .iter()
        .map(|c| {
            c.parts
                .iter()
                .fold(Rational::one(), |acc, &a| acc * &u[a - 1])
        })
        .sum())
}

fn check_weights(u: &[Rational], n: usize) -> Result<(), CompositionError> {
    if u.len() < n {
        return Err(CompositionError::Domain(format!(
            "need weights u_1..u_{n}, got {}",
            u.len()
        )));
    }
    Ok(())
}
