use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::dataset::{Dataset, Interval};
use super::{compensated_sum, EquidistError, Neumaier};
use crate::field::{prime_by_label, Ideal, NumberField, PrimeLabel};
use crate::measures::{box_measure, BoxMeasureKind, SatoTateMeasure, SpectralBox};

/// `N(Ω_t; (J_𝔭))`: the total weight of records with `λ_π ∈ Ω_t` and
/// `λ_{π,𝔭} ∈ J_𝔭` for every key of `j`. The box is closed.
pub fn count(ds: &Dataset, omega: &SpectralBox, t: f64, j: &BTreeMap<PrimeLabel, Interval>) -> Result<f64, EquidistError> {
    if ds.records.is_empty() {
        return Ok(0.0);
    }
    omega.validate()?;
    let d = ds.dimension().unwrap_or(0);
    if d != omega.dimension() {
        return Err(EquidistError::Dimension { expected: d, got: omega.dimension() });
    }
    let labels = ds.prime_labels();
    if let Some(missing) = j.keys().find(|l| !labels.contains(l)) {
        return Err(EquidistError::UnknownPrime(missing.to_string()));
    }
    let total = ds
        .records
        .par_iter()
        .filter(|r| omega.contains(&r.lambda_inf, t) && j.iter().all(|(l, iv)| iv.contains(r.lambda_p[l])))
        .fold(Neumaier::default, |mut acc, r| {
            acc.add(r.weight);
            acc
        })
        .reduce(Neumaier::default, Neumaier::merge);
    Ok(total.value())
}

/// Factors of the main term `C · pl(Ω_t) · prod Φ_𝔭(J_𝔭)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prediction {
    /// `C = 2 √|D_F| · covolume / (2π)^d`.
    pub constant: f64,
    pub pl: f64,
    pub phi: BTreeMap<String, f64>,
    pub phi_product: f64,
    /// `C · pl · prod Φ`.
    pub value: f64,
    /// `V₁(Ω_t)`, the scale of the error term.
    pub v1: f64,
}

pub fn predict(
    field: &NumberField,
    covolume: f64,
    omega: &SpectralBox,
    t: f64,
    j: &BTreeMap<PrimeLabel, Interval>,
) -> Result<Prediction, EquidistError> {
    if !(covolume > 0.0) || !covolume.is_finite() {
        return Err(EquidistError::InvalidCovolume(covolume));
    }
    let d = field.degree();
    if omega.dimension() != d {
        return Err(EquidistError::Dimension { expected: d, got: omega.dimension() });
    }
    let constant = 2.0 * (field.discriminant().unsigned_abs() as f64).sqrt() * covolume / (2.0 * PI).powi(d as i32);
    let pl = box_measure(BoxMeasureKind::Pl, omega, t)?.value;
    let v1 = box_measure(BoxMeasureKind::V1, omega, t)?.value;
    let mut phi = BTreeMap::new();
    let mut phi_product = 1.0;
    for (&label, iv) in j {
        let p = prime_by_label(field, label)?;
        // continuous measure: open and closed ends give the same mass
        let mass = SatoTateMeasure::new(label, p.norm()).interval(iv.lo, iv.hi);
        phi_product *= mass;
        phi.insert(label.to_string(), mass);
    }
    Ok(Prediction { constant, pl, phi, phi_product, value: constant * pl * phi_product, v1 })
}

/// `[Γ(1) : Γ₀(I)] = N(I) prod_{𝔭 | I} (1 + 1/N𝔭)`.
pub fn level_index(field: &NumberField, level: &Ideal) -> Result<BigRational, EquidistError> {
    if level.norm() == 0 {
        return Err(EquidistError::ZeroIdeal);
    }
    let mut index = BigRational::from_integer(BigInt::from(level.norm()));
    for (p, _) in level.factor(field)? {
        index *= BigRational::one() + BigRational::new(BigInt::one(), BigInt::from(p.norm()));
    }
    Ok(index)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub t: f64,
    pub count: f64,
    pub prediction: f64,
    /// `count / prediction`, absent when the prediction vanishes.
    pub ratio: Option<f64>,
    pub v1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportSummary {
    pub records: usize,
    pub total_weight: f64,
    pub final_ratio: Option<f64>,
    /// `max_t |count - prediction| / V₁(Ω_t)`.
    pub max_deviation_over_v1: Option<f64>,
    /// Single-form datasets illustrate the pipeline only; the counting law
    /// is an average over many forms.
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub summary: ReportSummary,
}

impl Report {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), EquidistError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "count", "prediction", "ratio", "v1"])?;
        for r in &self.rows {
            let ratio = r.ratio.map(|x| x.to_string()).unwrap_or_default();
            out.write_record([r.t.to_string(), r.count.to_string(), r.prediction.to_string(), ratio, r.v1.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn run_report(
    field: &NumberField,
    ds: &Dataset,
    omega: &SpectralBox,
    ts: &[f64],
    j: &BTreeMap<PrimeLabel, Interval>,
    covolume: f64,
) -> Result<Report, EquidistError> {
    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        let c = count(ds, omega, t, j)?;
        let p = predict(field, covolume, omega, t, j)?;
        let ratio = (p.value > 0.0).then(|| c / p.value);
        rows.push(ReportRow { t, count: c, prediction: p.value, ratio, v1: p.v1 });
    }
    let deviations: Vec<f64> =
        rows.iter().filter(|r| r.v1 > 0.0).map(|r| (r.count - r.prediction).abs() / r.v1).collect();
    let single_form = ds.meta.provenance.get("source").is_some_and(|s| s == "tau");
    let summary = ReportSummary {
        records: ds.records.len(),
        total_weight: compensated_sum(ds.records.iter().map(|r| r.weight)),
        final_ratio: rows.last().and_then(|r| r.ratio),
        max_deviation_over_v1: deviations.into_iter().reduce(f64::max),
        note: single_form.then(|| "pipeline demonstration on a single form, not a family average".to_string()),
    };
    Ok(Report { rows, summary })
}
