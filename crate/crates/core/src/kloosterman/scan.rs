use rayon::prelude::*;
use serde::Serialize;

use super::{eval, DirichletCharacter, KloostermanError, KloostermanQuery};
use crate::field::{find_generator, ideals_of_norm, FieldElement, Ideal, NumberField, PrimeIdeal};

/// Upper limit on the summed `N(c)` over a scan.
pub const SCAN_WORK_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub c: String,
    pub norm: u64,
    pub abs_k: f64,
    pub unit_pairs: u64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeilScan {
    pub rows: Vec<ScanRow>,
    /// Running maximum of `ratio`: the empirical implied constant.
    pub max_ratio: f64,
    /// Ideals in range without a generator found by the bounded search.
    pub skipped_nonprincipal: usize,
}

/// `|K_χ(r, r'; c)|` against `prod_{𝔭 in S} N𝔭^{v} · (prod_{𝔭 not in S} N𝔭^{v})^{1/2 + ε}`
/// for one generator `c` of every ideal `(c) ⊆ I` with `N(c) <= max_norm`.
/// `exceptional` defaults to the primes dividing `I`. Rows are ordered by norm,
/// then by Hermite form.
#[allow(clippy::too_many_arguments)]
pub fn weil_scan(
    field: &NumberField,
    r: &FieldElement,
    r_prime: &FieldElement,
    chi: &DirichletCharacter,
    max_norm: u64,
    eps: f64,
    exceptional: Option<&[PrimeIdeal]>,
) -> Result<WeilScan, KloostermanError> {
    let level = chi.modulus().clone();
    let mut ideals: Vec<Ideal> = Vec::new();
    let mut work = 0u64;
    for n in 1..=max_norm {
        for ideal in ideals_of_norm(field, n) {
            if ideal.is_contained_in(&level) {
                work = work.saturating_add(n);
                ideals.push(ideal);
            }
        }
        if work > SCAN_WORK_BUDGET {
            return Err(KloostermanError::ScanTooLarge { max_norm, work, budget: SCAN_WORK_BUDGET });
        }
    }
    let default_set;
    let exceptional = match exceptional {
        Some(s) => s,
        None => {
            default_set = level.factor(field)?.into_iter().map(|(p, _)| p).collect::<Vec<_>>();
            &default_set
        }
    };
    let results: Vec<Option<Result<ScanRow, KloostermanError>>> = ideals
        .par_iter()
        .map(|ideal| {
            let c = find_generator(field, ideal)?;
            Some(scan_row(field, r, r_prime, chi, &c, ideal, eps, exceptional))
        })
        .collect();
    let mut rows = Vec::new();
    let mut skipped = 0;
    for res in results {
        match res {
            None => skipped += 1,
            Some(row) => rows.push(row?),
        }
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(WeilScan { rows, max_ratio, skipped_nonprincipal: skipped })
}

#[allow(clippy::too_many_arguments)]
fn scan_row(
    field: &NumberField,
    r: &FieldElement,
    r_prime: &FieldElement,
    chi: &DirichletCharacter,
    c: &FieldElement,
    ideal: &Ideal,
    eps: f64,
    exceptional: &[PrimeIdeal],
) -> Result<ScanRow, KloostermanError> {
    let q = KloostermanQuery::new(field, c.clone(), r.clone(), r_prime.clone(), chi.clone())?;
    let k = eval(field, &q)?;
    let mut inside = 1.0f64;
    let mut outside = 1.0f64;
    for (p, v) in ideal.factor(field)? {
        let contribution = (p.norm() as f64).powi(v as i32);
        if exceptional.iter().any(|s| s.ideal == p.ideal) {
            inside *= contribution;
        } else {
            outside *= contribution;
        }
    }
    let bound = inside * outside.powf(0.5 + eps);
    Ok(ScanRow {
        c: field.format_element(c),
        norm: ideal.norm(),
        abs_k: k.norm(),
        unit_pairs: ideal.euler_phi(field)?,
        bound,
        ratio: k.norm() / bound,
    })
}
