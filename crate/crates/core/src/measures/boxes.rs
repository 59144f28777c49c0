use serde::{Deserialize, Serialize};

use super::quad::Estimate;
use super::spectral::{is_discrete_series_point, MeasureKind, SpectralMeasure};
use super::MeasureError;

/// `Ω_t = [-t, t]^Q × prod_{j in E} [A_j, B_j]` with parities `ξ`.
///
/// JSON form: `{"xi": [0, 1], "intervals": [null, [0.5, 3.0]]}` where `null`
/// marks a growing coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralBox {
    pub xi: Vec<u8>,
    pub intervals: Vec<Option<[f64; 2]>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoxMeasureKind {
    Pl,
    V1,
}

impl SpectralBox {
    pub fn new(xi: Vec<u8>, intervals: Vec<Option<[f64; 2]>>) -> Result<Self, MeasureError> {
        let b = SpectralBox { xi, intervals };
        b.validate()?;
        Ok(b)
    }

    pub fn dimension(&self) -> usize {
        self.xi.len()
    }

    pub fn growing(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.intervals.len()).filter(|&j| self.intervals[j].is_none())
    }

    pub fn validate(&self) -> Result<(), MeasureError> {
        let bad = |msg: String| Err(MeasureError::InvalidBox(msg));
        if self.xi.is_empty() || self.xi.len() != self.intervals.len() {
            return bad(format!("{} parities for {} coordinates", self.xi.len(), self.intervals.len()));
        }
        if let Some(&x) = self.xi.iter().find(|&&x| x > 1) {
            return bad(format!("parity {x} not in {{0, 1}}"));
        }
        if self.growing().next().is_none() {
            return bad("no growing coordinate".into());
        }
        for (j, iv) in self.intervals.iter().enumerate() {
            if let Some([a, b]) = *iv {
                if !a.is_finite() || !b.is_finite() || a > b {
                    return bad(format!("coordinate {j}: [{a}, {b}] is not a finite interval"));
                }
                for e in [a, b] {
                    if is_discrete_series_point(e, self.xi[j]) {
                        return Err(MeasureError::ForbiddenEndpoint { coordinate: j, value: e });
                    }
                }
            }
        }
        Ok(())
    }

    /// The interval of coordinate `j` at growth parameter `t`.
    pub fn coordinate(&self, j: usize, t: f64) -> (f64, f64) {
        match self.intervals[j] {
            Some([a, b]) => (a, b),
            None => (-t, t),
        }
    }

    pub fn contains(&self, lambda: &[f64], t: f64) -> bool {
        lambda.len() == self.dimension()
            && lambda.iter().enumerate().all(|(j, &x)| {
                let (a, b) = self.coordinate(j, t);
                a <= x && x <= b
            })
    }
}

/// Product over coordinates (index order) of the parity-selected measure.
pub fn box_measure(kind: BoxMeasureKind, omega: &SpectralBox, t: f64) -> Result<Estimate, MeasureError> {
    omega.validate()?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(MeasureError::InvalidBox(format!("growth parameter t = {t}")));
    }
    let mut total = Estimate::exact(1.0);
    for j in 0..omega.dimension() {
        let measure = SpectralMeasure::new(match kind {
            BoxMeasureKind::Pl => MeasureKind::plancherel(omega.xi[j]),
            BoxMeasureKind::V1 => MeasureKind::reference(omega.xi[j]),
        });
        let (a, b) = omega.coordinate(j, t);
        total = total.mul(measure.interval(a, b)?);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_atom_boxes() {
        let b1 = SpectralBox::new(vec![0], vec![None]).unwrap();
        assert_eq!(box_measure(BoxMeasureKind::Pl, &b1, 0.25).unwrap().value, 1.0);
        let b2 = SpectralBox::new(vec![0, 0], vec![None, None]).unwrap();
        assert_eq!(box_measure(BoxMeasureKind::Pl, &b2, 0.25).unwrap().value, 1.0);
    }

    #[test]
    fn null_fixed_interval_kills_product() {
        let b = SpectralBox::new(vec![0, 0], vec![None, Some([0.05, 0.2])]).unwrap();
        assert_eq!(box_measure(BoxMeasureKind::Pl, &b, 30.0).unwrap().value, 0.0);
        assert!(box_measure(BoxMeasureKind::V1, &b, 30.0).unwrap().value > 0.0);
    }

    #[test]
    fn validation() {
        assert!(SpectralBox::new(vec![0], vec![Some([1.0, 2.0])]).is_err());
        assert!(SpectralBox::new(vec![0, 2], vec![None, None]).is_err());
        assert!(SpectralBox::new(vec![0], vec![]).is_err());
        assert!(SpectralBox::new(vec![0, 0], vec![None, Some([3.0, 1.0])]).is_err());
        assert_eq!(
            SpectralBox::new(vec![0, 1], vec![None, Some([-0.75, 1.0])]),
            Err(MeasureError::ForbiddenEndpoint { coordinate: 1, value: -0.75 })
        );
        // -3/4 is a discrete series point only for odd parity
        assert!(SpectralBox::new(vec![0, 0], vec![None, Some([-0.75, 1.0])]).is_ok());
        assert!(SpectralBox::new(vec![0, 0], vec![None, Some([-2.0, 1.0])]).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let b: SpectralBox = serde_json::from_str(r#"{"xi":[0,1],"intervals":[null,[0.5,3.0]]}"#).unwrap();
        assert_eq!(b.intervals[1], Some([0.5, 3.0]));
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(serde_json::from_str::<SpectralBox>(&s).unwrap(), b);
    }
}
