//! Grid sweeps over the identities, producing sorted [`VerificationRecord`]s.
//!
//! Sweeps run in parallel over the modulus; records are re-sorted by case
//! key afterwards so output never depends on scheduling.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::dirichlet::{alkan_check, enumerate_characters, AlkanReport, LfnError};
use crate::exact::rational::{format_rational, from_bigint};
use crate::exact::{binomial, CyclotomicRing};
use crate::exp_sums::{chain_coefficient_sum, eq3_residuals, prop1_residual_complex, prop1_residuals_for};
use crate::report::{ReportGroup, Status, VerificationRecord};

fn record(case: String, key: Vec<i64>, ok: bool, detail: String) -> VerificationRecord {
    let status = if ok { Status::Pass } else { Status::Fail };
    VerificationRecord::new(case, key, status, detail)
}

/// Exact residual in `Q[x]/Φ_k` for `1 <= p <= pmax`, `2 <= k <= kmax`,
/// `1 <= m <= 3k`, `k ∤ m`.
pub fn prop1_exact(pmax: u32, kmax: u64) -> ReportGroup {
    let records: Vec<VerificationRecord> = (2..=kmax)
        .into_par_iter()
        .flat_map_iter(|k| {
            let ring = CyclotomicRing::new(k).expect("k >= 2");
            (1..=3 * k as i64)
                .filter(move |m| m % k as i64 != 0)
                .flat_map(move |m| {
                    let residuals = prop1_residuals_for(&ring, pmax, m).expect("admissible");
                    residuals.into_iter().enumerate().map(move |(i, res)| {
                        let p = i as u32 + 1;
                        let detail = if res.is_zero() {
                            String::new()
                        } else {
                            format!("nonzero residue {}", res.residue())
                        };
                        record(
                            format!("p={p},k={k},m={m}"),
                            vec![p as i64, k as i64, m],
                            res.is_zero(),
                            detail,
                        )
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    ReportGroup::new("prop1 exact", records)
}

/// Acceptance bound for the floating check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatTolerance {
    pub relative: f64,
    /// When set, also accept `absolute <= scale * k^(p+1)`.
    pub absolute_scale: Option<f64>,
}

impl FloatTolerance {
    pub fn relative(relative: f64) -> Self {
        FloatTolerance {
            relative,
            absolute_scale: None,
        }
    }
}

/// The frequencies used by the floating sweep: `1`, `k-1`, and `⌊k/2⌋` when `k ∤ ⌊k/2⌋`.
pub fn float_frequencies(k: u64, include_half: bool) -> Vec<i64> {
    let mut ms = vec![1, k as i64 - 1];
    let half = (k / 2) as i64;
    if include_half && half % k as i64 != 0 {
        ms.push(half);
    }
    ms.sort_unstable();
    ms.dedup();
    ms
}

/// Double-precision residual over `1 <= p <= pmax`, `2 <= k <= kmax`.
pub fn prop1_float(pmax: u32, kmax: u64, tol: FloatTolerance, include_half: bool) -> ReportGroup {
    let records: Vec<VerificationRecord> = (2..=kmax)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut out = Vec::new();
            for m in float_frequencies(k, include_half) {
                for p in 1..=pmax {
                    let r = prop1_residual_complex(p, k, m).expect("admissible");
                    let abs_ok = tol
                        .absolute_scale
                        .is_some_and(|s| r.absolute <= s * (k as f64).powi(p as i32 + 1));
                    let ok = r.relative <= tol.relative || abs_ok;
                    out.push(record(
                        format!("p={p},k={k},m={m}"),
                        vec![p as i64, k as i64, m],
                        ok,
                        format!("relative {:.3e}, absolute {:.3e}", r.relative, r.absolute),
                    ));
                }
            }
            out
        })
        .collect();
    ReportGroup::new("prop1 float", records)
}

/// Exact residual of the reflection identity mod `x^k - 1` for every `m ∈ [0, k)`.
pub fn eq3(pmax: u32, kmax: u64) -> ReportGroup {
    let records: Vec<VerificationRecord> = (2..=kmax)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut out = Vec::new();
            for p in 1..=pmax {
                for (m, res) in eq3_residuals(p, k).expect("k >= 2, p >= 1").into_iter().enumerate() {
                    let detail = if res.is_zero() {
                        String::new()
                    } else {
                        format!("nonzero residue {res}")
                    };
                    out.push(record(
                        format!("p={p},k={k},m={m}"),
                        vec![p as i64, k as i64, m as i64],
                        res.is_zero(),
                        detail,
                    ));
                }
            }
            out
        })
        .collect();
    ReportGroup::new("eq3", records)
}

/// `chain_coefficient_sum(p, a)` against `(-1)^{p-a} C(p,a)` for `a < p`
/// and against 1 at `a = p`.
pub fn coefficient_sums(pmax: u32) -> ReportGroup {
    let records: Vec<VerificationRecord> = (1..=pmax)
        .into_par_iter()
        .flat_map_iter(|p| {
            (0..=p).map(move |a| {
                let got = chain_coefficient_sum(p, a).expect("0 <= a <= p");
                let expected = if a == p {
                    from_bigint(BigInt::from(1))
                } else {
                    let s = if (p - a) % 2 == 0 { 1 } else { -1 };
                    from_bigint(binomial(p as u64, a as i64) * s)
                };
                record(
                    format!("p={p},a={a}"),
                    vec![p as i64, a as i64],
                    got == expected,
                    format!("got {}, expected {}", format_rational(&got), format_rational(&expected)),
                )
            })
        })
        .collect();
    ReportGroup::new("coefficient sums", records)
}

/// Magnitude check for every non-principal character mod `k`. Imprimitive
/// characters are skipped unless `include_imprimitive`, in which case they
/// are reported but never fail the run.
pub fn alkan(k: u64, r: u32, tol: f64, include_imprimitive: bool) -> Result<Vec<AlkanReport>, LfnError> {
    let chars = enumerate_characters(k)?;
    let selected: Vec<_> = chars
        .into_iter()
        .filter(|c| !c.is_principal() && (include_imprimitive || c.is_primitive()))
        .collect();
    selected
        .par_iter()
        .map(|c| alkan_check(r, c, tol))
        .collect()
}

pub fn alkan_group(reports: &[AlkanReport]) -> ReportGroup {
    let records = reports
        .iter()
        .map(|rep| {
            VerificationRecord::new(
                format!("k={},r={},chi={}", rep.k, rep.r, rep.chi_index),
                vec![rep.k as i64, rep.r as i64, rep.chi_index as i64],
                rep.status,
                rep.detail.clone(),
            )
        })
        .collect();
    ReportGroup::new("alkan", records)
}
