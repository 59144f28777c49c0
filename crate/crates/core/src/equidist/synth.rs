use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::dataset::{Dataset, DatasetMeta, EigenRecord};
use super::EquidistError;
use crate::field::{prime_by_label, NumberField, PrimeLabel};
use crate::measures::{MeasureKind, SatoTateMeasure, SpectralBox, SpectralMeasure};

/// Nodes in every inverse-CDF table.
pub const TABLE_NODES: usize = 10_000;

/// Piecewise-linear inverse of a tabulated CDF. `cdf` is nondecreasing,
/// starts at 0 and ends at 1.
#[derive(Clone, Debug)]
pub struct InverseCdf {
    x: Vec<f64>,
    cdf: Vec<f64>,
}

impl InverseCdf {
    /// `masses[i]` is the mass of `[x[i], x[i+1]]`.
    pub fn from_masses(x: Vec<f64>, masses: &[f64]) -> Option<Self> {
        debug_assert_eq!(x.len(), masses.len() + 1);
        let mut cdf = Vec::with_capacity(x.len());
        cdf.push(0.0);
        let mut acc = 0.0;
        for &m in masses {
            acc += m.max(0.0);
            cdf.push(acc);
        }
        if !(acc > 0.0) {
            return None;
        }
        cdf.iter_mut().for_each(|c| *c /= acc);
        Some(InverseCdf { x, cdf })
    }

    pub fn sample(&self, u: f64) -> f64 {
        let i = self.cdf.partition_point(|&c| c < u).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let s = if c1 > c0 { ((u - c0) / (c1 - c0)).clamp(0.0, 1.0) } else { 0.0 };
        self.x[i - 1] + s * (self.x[i] - self.x[i - 1])
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

/// `pl_ξ` restricted to `[a, b]` and normalized: atoms with their relative
/// masses, then the continuous part on `λ >= 1/4`.
#[derive(Clone, Debug)]
pub struct ArchimedeanSampler {
    atoms: Vec<(f64, f64)>,
    atom_mass: f64,
    total: f64,
    continuous: Option<InverseCdf>,
}

impl ArchimedeanSampler {
    pub fn new(parity: u8, a: f64, b: f64) -> Result<Self, EquidistError> {
        let measure = SpectralMeasure::new(MeasureKind::plancherel(parity));
        let atoms = measure.atoms_in(a, b);
        let atom_mass: f64 = atoms.iter().map(|&(_, m)| m).sum();
        let lo = a.max(0.25);
        let mut continuous = None;
        let mut continuous_mass = 0.0;
        if b > lo {
            // uniform in u = √(λ - 1/4), where both densities are bounded
            let us = linspace((lo - 0.25).sqrt(), (b - 0.25).sqrt(), TABLE_NODES);
            let lambdas: Vec<f64> = us.iter().map(|u| 0.25 + u * u).collect();
            let masses = lambdas
                .windows(2)
                .map(|w| measure.interval(w[0], w[1]).map(|e| e.value))
                .collect::<Result<Vec<_>, _>>()?;
            continuous_mass = masses.iter().sum();
            continuous = InverseCdf::from_masses(us, &masses);
        }
        let total = atom_mass + continuous_mass;
        if !(total > 0.0) {
            return Err(EquidistError::ZeroMass(format!("[{a}, {b}] with parity {parity}")));
        }
        Ok(ArchimedeanSampler { atoms, atom_mass, total, continuous })
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        let mut v = rng.gen::<f64>() * self.total;
        if v < self.atom_mass {
            for &(x, m) in &self.atoms {
                if v < m {
                    return x;
                }
                v -= m;
            }
            return self.atoms.last().map(|a| a.0).unwrap_or(0.25);
        }
        match &self.continuous {
            Some(table) => {
                let u = table.sample((v - self.atom_mass) / (self.total - self.atom_mass));
                0.25 + u * u
            }
            None => self.atoms.last().map(|a| a.0).unwrap_or(0.25),
        }
    }
}

/// Inverse-CDF table for `Φ_𝔭` on `[0, 2√N𝔭]`.
pub fn sato_tate_table(measure: &SatoTateMeasure) -> InverseCdf {
    let xs = linspace(0.0, measure.support_end(), TABLE_NODES);
    let masses: Vec<f64> = xs.windows(2).map(|w| measure.interval(w[0], w[1])).collect();
    InverseCdf::from_masses(xs, &masses).expect("Φ has total mass 1")
}

/// Parameters of a synthetic dataset.
#[derive(Clone, Debug)]
pub struct SynthSpec {
    pub omega: SpectralBox,
    /// Growth parameter at which the growing coordinates are sampled.
    pub t: f64,
    pub primes: Vec<PrimeLabel>,
    pub count: usize,
    pub seed: u64,
}

/// Record `i` draws from its own ChaCha stream `i` under `seed`, so the
/// output does not depend on the number of workers.
pub fn synthesize(field: &NumberField, level: &str, spec: &SynthSpec) -> Result<Dataset, EquidistError> {
    spec.omega.validate()?;
    if spec.omega.dimension() != field.degree() {
        return Err(EquidistError::Dimension { expected: field.degree(), got: spec.omega.dimension() });
    }
    if spec.count == 0 {
        return Err(EquidistError::InvalidRecord("at least one record is required".into()));
    }
    if !(spec.t >= 0.0) || !spec.t.is_finite() {
        return Err(EquidistError::InvalidRecord(format!("growth parameter t = {}", spec.t)));
    }
    let samplers = (0..spec.omega.dimension())
        .map(|j| {
            let (a, b) = spec.omega.coordinate(j, spec.t);
            ArchimedeanSampler::new(spec.omega.xi[j], a, b)
                .map_err(|e| EquidistError::ZeroMass(format!("coordinate {j}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut norms = BTreeMap::new();
    let mut tables = Vec::new();
    for &label in &spec.primes {
        let p = prime_by_label(field, label)?;
        norms.insert(label, p.norm());
        tables.push((label, sato_tate_table(&SatoTateMeasure::new(label, p.norm()))));
    }
    let records: Vec<EigenRecord> = (0..spec.count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(i as u64);
            let lambda_inf = samplers.iter().map(|s| s.sample(&mut rng)).collect();
            let lambda_p = tables.iter().map(|(l, t)| (*l, t.sample(rng.gen()))).collect();
            EigenRecord { lambda_inf, xi: spec.omega.xi.clone(), lambda_p, weight: 1.0, src: None }
        })
        .collect();
    let provenance = BTreeMap::from([
        ("source".to_string(), "synthetic".to_string()),
        ("seed".to_string(), spec.seed.to_string()),
        ("t".to_string(), spec.t.to_string()),
        ("box".to_string(), serde_json::to_string(&spec.omega)?),
    ]);
    Dataset::new(DatasetMeta { field: field.spec(), level: level.to_string(), norms, provenance }, records)
}
