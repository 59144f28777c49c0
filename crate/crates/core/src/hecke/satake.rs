use std::f64::consts::PI;

use serde::Serialize;

use super::HeckeError;
use crate::field::PrimeLabel;

/// `ν_𝔭` in the canonical domain: real in `(0, 1/2]` or `i y` with
/// `y in [0, π / (2 log N)]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Nu {
    Real(f64),
    Imaginary(f64),
}

impl Nu {
    /// Signed real coordinate: `x` for real `ν = x`, `-y` for `ν = i y`.
    pub fn signed(&self) -> f64 {
        match *self {
            Nu::Real(x) => x,
            Nu::Imaginary(y) => -y,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SatakeParam {
    pub prime: PrimeLabel,
    pub norm: u64,
    pub nu: Nu,
}

impl SatakeParam {
    /// Canonical representative of `ν = re + i im` modulo `ν -> -ν` and the
    /// imaginary period `2π / log N`.
    pub fn new(prime: PrimeLabel, norm: u64, re: f64, im: f64) -> Result<Self, HeckeError> {
        let bad = || HeckeError::NuOutOfDomain(format!("{re}{im:+}i"));
        if !re.is_finite() || !im.is_finite() || norm < 2 {
            return Err(bad());
        }
        let log_n = (norm as f64).ln();
        let period = 2.0 * PI / log_n;
        let mut y = im;
        if y.abs() > period / 2.0 {
            y = y.rem_euclid(period);
            if y > period / 2.0 {
                y -= period;
            }
        }
        let (x, y) = if re < 0.0 || (re == 0.0 && y < 0.0) { (-re, -y) } else { (re, y) };
        let nu = if y == 0.0 {
            if x > 0.5 {
                return Err(bad());
            }
            if x == 0.0 {
                Nu::Imaginary(0.0)
            } else {
                Nu::Real(x)
            }
        } else if x == 0.0 {
            let y = y.abs();
            if y > PI / (2.0 * log_n) * (1.0 + 1e-12) {
                return Err(bad());
            }
            Nu::Imaginary(y.min(PI / (2.0 * log_n)))
        } else {
            return Err(bad());
        };
        Ok(SatakeParam { prime, norm, nu })
    }
}

/// Eigenvalue `λ_𝔭 in [0, 1 + N𝔭]` of the Hecke operator at `𝔭`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeckeEigenvalue {
    pub prime: PrimeLabel,
    pub norm: u64,
    pub lambda: f64,
}

impl HeckeEigenvalue {
    pub fn new(prime: PrimeLabel, norm: u64, lambda: f64) -> Result<Self, HeckeError> {
        let max = 1.0 + norm as f64;
        if !(0.0..=max).contains(&lambda) {
            return Err(HeckeError::LambdaOutOfRange { lambda, max });
        }
        Ok(HeckeEigenvalue { prime, norm, lambda })
    }

    pub fn is_tempered(&self) -> bool {
        self.lambda <= 2.0 * (self.norm as f64).sqrt()
    }

    /// Eigenvalue `λ² - N𝔭` of `T(𝔭²)`.
    pub fn t_p2_eigenvalue(&self) -> f64 {
        self.lambda * self.lambda - self.norm as f64
    }
}

/// `λ = √N (N^ν + N^{-ν})`.
pub fn lambda_from_nu(nu: &SatakeParam) -> HeckeEigenvalue {
    let n = nu.norm as f64;
    let lambda = match nu.nu {
        Nu::Real(x) => n.powf(0.5 + x) + n.powf(0.5 - x),
        Nu::Imaginary(y) => (2.0 * n.sqrt() * (y * n.ln()).cos()).max(0.0),
    };
    HeckeEigenvalue { prime: nu.prime, norm: nu.norm, lambda: lambda.min(n + 1.0) }
}

pub fn nu_from_lambda(ev: &HeckeEigenvalue) -> Result<SatakeParam, HeckeError> {
    let n = ev.norm as f64;
    let max = 1.0 + n;
    if !(0.0..=max).contains(&ev.lambda) || ev.norm < 2 {
        return Err(HeckeError::LambdaOutOfRange { lambda: ev.lambda, max });
    }
    let r = ev.lambda / (2.0 * n.sqrt());
    let nu = if r <= 1.0 {
        Nu::Imaginary(r.acos() / n.ln())
    } else {
        Nu::Real((r.acosh() / n.ln()).min(0.5))
    };
    Ok(SatakeParam { prime: ev.prime, norm: ev.norm, nu })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label() -> PrimeLabel {
        PrimeLabel { p: 5, index: 0 }
    }

    #[test]
    fn endpoints() {
        for norm in [2u64, 3, 5, 9, 49] {
            let n = norm as f64;
            let at = |nu| lambda_from_nu(&SatakeParam { prime: label(), norm, nu }).lambda;
            assert!((at(Nu::Imaginary(0.0)) - 2.0 * n.sqrt()).abs() < 1e-12);
            assert_eq!(at(Nu::Real(0.5)), n + 1.0);
            assert!(at(Nu::Imaginary(PI / (2.0 * n.ln()))) < 1e-12);
        }
    }

    #[test]
    fn roundtrip_grid() {
        for norm in [2u64, 3, 4, 7, 25] {
            let max = 1.0 + norm as f64;
            for i in 0..=1000 {
                let lambda = max * i as f64 / 1000.0;
                let ev = HeckeEigenvalue::new(label(), norm, lambda).unwrap();
                let back = lambda_from_nu(&nu_from_lambda(&ev).unwrap()).lambda;
                assert!((back - lambda).abs() < 1e-12, "N = {norm}, λ = {lambda}, back = {back}");
            }
        }
    }

    #[test]
    fn monotone_in_real_nu() {
        let mut last = 0.0;
        for i in 1..=50 {
            let nu = SatakeParam { prime: label(), norm: 7, nu: Nu::Real(i as f64 / 100.0) };
            let l = lambda_from_nu(&nu).lambda;
            assert!(l > last);
            last = l;
        }
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(HeckeEigenvalue::new(label(), 5, 6.5).is_err());
        assert!(HeckeEigenvalue::new(label(), 5, -0.1).is_err());
        let ev = HeckeEigenvalue { prime: label(), norm: 5, lambda: 7.0 };
        assert!(nu_from_lambda(&ev).is_err());
    }

    #[test]
    fn canonicalization() {
        let log5 = 5f64.ln();
        let a = SatakeParam::new(label(), 5, -0.3, 0.0).unwrap();
        assert_eq!(a.nu, Nu::Real(0.3));
        let b = SatakeParam::new(label(), 5, 0.0, -0.2).unwrap();
        assert_eq!(b.nu, Nu::Imaginary(0.2));
        let c = SatakeParam::new(label(), 5, 0.0, 0.2 + 2.0 * PI / log5).unwrap();
        match c.nu {
            Nu::Imaginary(y) => assert!((y - 0.2).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert!(SatakeParam::new(label(), 5, 0.6, 0.0).is_err());
        assert!(SatakeParam::new(label(), 5, 0.1, 0.1).is_err());
        assert!(SatakeParam::new(label(), 5, 0.0, 0.9 * PI / log5).is_err());
    }
}
