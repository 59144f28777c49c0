use std::collections::BTreeMap;

use super::spoly::s_poly_for_norm;
use super::{HeckeEigenvalue, HeckeError};
use crate::field::{prime_by_label, Ideal, NumberField, PrimeLabel};

/// `T(𝔞²)` for `𝔞 = prod 𝔭^{k_𝔭}` with every `𝔭` coprime to the level.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GlobalHeckeOperator {
    factors: BTreeMap<PrimeLabel, (u64, usize)>,
}

impl GlobalHeckeOperator {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(field: &NumberField, level: &Ideal, exponents: &[(PrimeLabel, usize)]) -> Result<Self, HeckeError> {
        let mut factors = BTreeMap::new();
        for &(label, k) in exponents {
            if k == 0 {
                return Err(HeckeError::ZeroExponent);
            }
            let prime = prime_by_label(field, label)?;
            if level.is_contained_in(&prime.ideal) {
                return Err(HeckeError::DividesLevel(label));
            }
            factors.entry(label).and_modify(|e: &mut (u64, usize)| e.1 += k).or_insert((prime.norm(), k));
        }
        Ok(GlobalHeckeOperator { factors })
    }

    /// `(label, N𝔭, k_𝔭)` in label order.
    pub fn factors(&self) -> impl Iterator<Item = (PrimeLabel, u64, usize)> + '_ {
        self.factors.iter().map(|(&l, &(n, k))| (l, n, k))
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// `prod_𝔭 sum_{j=0}^{2k} N𝔭^j`.
    pub fn trivial_bound(&self) -> f64 {
        self.factors().map(|(_, n, k)| (0..=2 * k).map(|j| (n as f64).powi(j as i32)).sum::<f64>()).product()
    }
}

/// `prod_𝔭 S_{𝔭,2k_𝔭}(λ_𝔭)`.
pub fn global_eigenvalue(
    op: &GlobalHeckeOperator,
    eigenvalues: &BTreeMap<PrimeLabel, HeckeEigenvalue>,
) -> Result<f64, HeckeError> {
    op.factors().try_fold(1.0, |acc, (label, norm, k)| {
        let ev = eigenvalues.get(&label).ok_or(HeckeError::MissingPrime(label))?;
        Ok(acc * s_poly_for_norm(norm, k).eval(ev.lambda))
    })
}
