use std::collections::VecDeque;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::KloostermanError;
use crate::field::{FieldElement, Ideal, NumberField, ResidueRing};

/// One generator of a character given by its value `e(exponent / order)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterGenerator {
    /// Integral coordinates of a unit representative modulo the conductor.
    pub unit: Vec<i64>,
    pub order: u64,
    pub exponent: u64,
}

/// A character of `(O / I)^*`. Values are stored exactly as exponents `k`
/// with `χ(x) = e(k / order)`.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    ring: ResidueRing,
    order: u64,
    table: Vec<Option<u64>>,
}

impl DirichletCharacter {
    pub fn trivial(field: &NumberField, modulus: &Ideal) -> Self {
        let ring = ResidueRing::new(field, modulus);
        let table = ring.inverse_table().into_iter().map(|inv| inv.map(|_| 0)).collect();
        DirichletCharacter { ring, order: 1, table }
    }

    /// Closure of the generator values under multiplication. Fails if the
    /// values are inconsistent or the generators miss some unit class.
    pub fn from_generators(
        field: &NumberField,
        modulus: &Ideal,
        gens: &[CharacterGenerator],
    ) -> Result<Self, KloostermanError> {
        let ring = ResidueRing::new(field, modulus);
        let order = gens.iter().fold(1u64, |acc, g| acc.lcm(&g.order.max(1)));
        let mut table: Vec<Option<u64>> = vec![None; ring.size()];
        let mut steps = Vec::new();
        for g in gens {
            if g.order == 0 {
                return Err(KloostermanError::InvalidCharacter("order 0".into()));
            }
            if !ring.is_unit(&ring.reduce(&g.unit)) {
                return Err(KloostermanError::InvalidCharacter(format!("{:?} is not a unit modulo I", g.unit)));
            }
            steps.push((ring.reduce(&g.unit), (g.exponent % g.order) * (order / g.order)));
        }
        let one = ring.reduce(&unit_vector(field.degree()));
        let start = ring.index_of(&one);
        table[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let x = ring.element(i);
            let k = table[i].expect("visited");
            for (g, kg) in &steps {
                let j = ring.index_of(&ring.mul(&x, g));
                let kj = (k + kg) % order;
                match table[j] {
                    None => {
                        table[j] = Some(kj);
                        queue.push_back(j);
                    }
                    Some(prev) if prev != kj => {
                        return Err(KloostermanError::InvalidCharacter(format!(
                            "generator values are inconsistent at {:?}",
                            ring.element(j)
                        )));
                    }
                    _ => {}
                }
            }
        }
        let units = ring.inverse_table();
        if units.iter().zip(&table).any(|(u, t)| u.is_some() != t.is_some()) {
            return Err(KloostermanError::InvalidCharacter("generators do not generate (O/I)^*".into()));
        }
        Ok(DirichletCharacter { ring, order, table })
    }

    pub fn modulus(&self) -> &Ideal {
        self.ring.modulus()
    }

    /// Common order of all values.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|v| v.is_none_or(|k| k == 0))
    }

    /// `k` with `χ(x) = e(k / order)`, or `None` when `x` is not a unit mod `I`.
    pub fn exponent_of(&self, x: &[i64]) -> Option<u64> {
        self.table[self.ring.index_of(x)]
    }

    pub(crate) fn exponent_wide(&self, x: &[i128]) -> Option<u64> {
        let reduced: Vec<i64> = {
            let mut v = x.to_vec();
            self.ring.reduce_wide(&mut v);
            v.into_iter().map(|c| c as i64).collect()
        };
        self.exponent_of(&reduced)
    }

    /// `χ(x)`, zero for non-units.
    pub fn value(&self, x: &[i64]) -> Complex64 {
        match self.exponent_of(x) {
            Some(k) => Complex64::from_polar(1.0, TAU * k as f64 / self.order as f64),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `χ` at an integral field element.
    pub fn value_at(&self, x: &FieldElement) -> Result<Complex64, KloostermanError> {
        let coords = x.integral_coords().ok_or(KloostermanError::NotIntegral)?;
        Ok(self.value(&coords))
    }

    /// `χ(-1)`, always `±1`.
    pub fn at_minus_one(&self) -> i8 {
        let mut m = vec![0i64; self.ring.field().degree()];
        m[0] = -1;
        match self.exponent_of(&m) {
            Some(k) if 2 * k == self.order => -1,
            _ => 1,
        }
    }
}

fn unit_vector(d: usize) -> Vec<i64> {
    let mut v = vec![0; d];
    v[0] = 1;
    v
}
