use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use super::dataset::{Dataset, DatasetMeta, EigenRecord};
use super::EquidistError;
use crate::field::{FieldSpec, PrimeLabel};
use crate::measures::discrete_series_point;

/// Largest `N` accepted by [`tau_source`].
pub const TAU_LIMIT: usize = 1_000_000;

/// Weight of `Δ`; its archimedean eigenvalue is the discrete series point of this weight.
pub const DELTA_WEIGHT: u64 = 12;

/// Nonzero terms `(exponent, sign)` of `prod_{n>=1} (1 - q^n)` up to `q^len`:
/// `sum_k (-1)^k q^{k(3k-1)/2}` over all integers `k`.
pub fn pentagonal_terms(len: usize) -> Vec<(usize, i128)> {
    let mut terms = vec![(0usize, 1i128)];
    for k in 1.. {
        let sign = if k % 2 == 1 { -1 } else { 1 };
        let e1 = k * (3 * k - 1) / 2;
        if e1 > len {
            break;
        }
        terms.push((e1, sign));
        let e2 = k * (3 * k + 1) / 2;
        if e2 <= len {
            terms.push((e2, sign));
        }
    }
    terms.sort_unstable();
    terms
}

/// `a · s` truncated to `a.len()` coefficients, with `s` sparse.
///
/// Every output coefficient is bounded by `max|a| · sum|s|`; once that bound
/// fits in `i128` the accumulation cannot overflow and runs unchecked.
pub fn mul_sparse(a: &[i128], s: &[(usize, i128)]) -> Result<Vec<i128>, EquidistError> {
    let max_a = a.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
    let weight = s.iter().try_fold(0u128, |acc, (_, c)| acc.checked_add(c.unsigned_abs()));
    let bound = weight.and_then(|w| w.checked_mul(max_a));
    if !bound.is_some_and(|b| b <= i128::MAX as u128) {
        return Err(EquidistError::Overflow(a.len()));
    }
    const CHUNK: usize = 4096;
    let mut out = vec![0i128; a.len()];
    out.par_chunks_mut(CHUNK).enumerate().for_each(|(k, chunk)| {
        let lo = k * CHUNK;
        for &(e, c) in s {
            if e >= lo + chunk.len() {
                break;
            }
            let start = e.max(lo);
            let src = &a[start - e..lo + chunk.len() - e];
            let dst = &mut chunk[start - lo..];
            match c {
                1 => dst.iter_mut().zip(src).for_each(|(d, x)| *d += x),
                -1 => dst.iter_mut().zip(src).for_each(|(d, x)| *d -= x),
                _ => dst.iter_mut().zip(src).for_each(|(d, x)| *d += c * x),
            }
        }
    });
    Ok(out)
}

/// `τ(0..=n)` with `τ(0) = 0`, as the coefficients of `q · prod (1 - q^m)^24`
/// built by 24 multiplications with the pentagonal series.
pub fn tau_table(n: usize) -> Result<Vec<i128>, EquidistError> {
    if n > TAU_LIMIT {
        return Err(EquidistError::Budget { requested: n, limit: TAU_LIMIT });
    }
    let len = n.max(1);
    let pent = pentagonal_terms(len);
    let mut series = vec![0i128; len];
    series[0] = 1;
    for _ in 0..24 {
        series = mul_sparse(&series, &pent)?;
    }
    let mut tau = vec![0i128; n + 1];
    tau[1..].copy_from_slice(&series[..n]);
    Ok(tau)
}

fn smallest_prime_factors(n: usize) -> Vec<usize> {
    let mut spf = vec![0usize; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for j in (i..=n).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i;
                }
            }
        }
    }
    spf
}

/// Checks `τ(mn) = τ(m)τ(n)` for coprime `m, n` and
/// `τ(p^{k+1}) = τ(p)τ(p^k) - p^11 τ(p^{k-1})` for every index in the table.
pub fn verify_hecke_identities(tau: &[i128]) -> Result<(), EquidistError> {
    let n = tau.len().saturating_sub(1);
    if n >= 1 && tau[1] != 1 {
        return Err(EquidistError::HeckeIdentity("τ(1) ≠ 1".into()));
    }
    let spf = smallest_prime_factors(n);
    let big = |k: usize| BigInt::from(tau[k]);
    (2..=n).into_par_iter().try_for_each(|m| {
        let p = spf[m];
        let mut pa = 1;
        while m % (pa * p) == 0 {
            pa *= p;
        }
        let rest = m / pa;
        if rest > 1 {
            if big(m) != big(pa) * big(rest) {
                return Err(EquidistError::HeckeIdentity(format!("τ({m}) ≠ τ({pa})·τ({rest})")));
            }
        } else if pa > p {
            let (prev, prev2) = (pa / p, pa / (p * p));
            let expected = big(p) * big(prev) - BigInt::from(p).pow(11) * big(prev2);
            if big(m) != expected {
                return Err(EquidistError::HeckeIdentity(format!("τ({m}) fails the prime-power recursion")));
            }
        }
        Ok(())
    })
}

/// Per-prime data of `Δ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauPrime {
    pub p: u64,
    pub tau: i128,
    /// `|τ(p)| / p^5`, in `[0, 2√p]`.
    pub lambda: f64,
    /// `τ(p²) / p^10`, the `T(p²)` eigenvalue; present when `p² <= N`.
    pub t_p2: Option<f64>,
}

/// `λ_{π,p} = |τ(p)| / p^5` as an exact rational.
pub fn tau_lambda_exact(tau: &[i128], p: usize) -> BigRational {
    BigRational::new(BigInt::from(tau[p]).abs(), BigInt::from(p).pow(5))
}

#[derive(Clone, Debug)]
pub struct TauSource {
    pub table: Vec<i128>,
    pub primes: Vec<TauPrime>,
    /// One record over `Q` carrying every `λ_{π,p}`, `p <= N`.
    pub dataset: Dataset,
}

/// `τ(n)` for `n <= N`, verified against the Hecke identities before
/// anything is emitted.
pub fn tau_source(n: usize) -> Result<TauSource, EquidistError> {
    let table = tau_table(n)?;
    verify_hecke_identities(&table)?;
    let spf = smallest_prime_factors(n);
    let ratio = |num: i128, den: BigInt| {
        BigRational::new(BigInt::from(num), den).to_f64().expect("finite rational")
    };
    let primes: Vec<TauPrime> = (2..=n)
        .filter(|&p| spf[p] == p)
        .map(|p| TauPrime {
            p: p as u64,
            tau: table[p],
            lambda: tau_lambda_exact(&table, p).to_f64().expect("finite rational"),
            t_p2: (p * p <= n).then(|| ratio(table[p * p], BigInt::from(p).pow(10))),
        })
        .collect();
    let label = |p: u64| PrimeLabel { p, index: 0 };
    let record = EigenRecord {
        lambda_inf: vec![discrete_series_point(DELTA_WEIGHT)],
        xi: vec![0],
        lambda_p: primes.iter().map(|t| (label(t.p), t.lambda)).collect(),
        weight: 1.0,
        src: Some("tau".into()),
    };
    let meta = DatasetMeta {
        field: FieldSpec::Rational,
        level: "1".into(),
        norms: primes.iter().map(|t| (label(t.p), t.p)).collect(),
        provenance: BTreeMap::from([("source".to_string(), "tau".to_string()), ("n".to_string(), n.to_string())]),
    };
    Ok(TauSource { table, primes, dataset: Dataset::new(meta, vec![record])? })
}
