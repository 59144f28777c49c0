use std::f64::consts::PI;

use serde::Serialize;

use crate::field::PrimeLabel;
use crate::hecke::EvenPoly;

/// `Φ_𝔭(f) = (1/(π N)) ∫_0^{2√N} f(λ) √(4N - λ²) dλ`, a probability measure
/// on `[0, 2√N]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SatoTateMeasure {
    pub prime: PrimeLabel,
    pub norm: u64,
}

impl SatoTateMeasure {
    pub fn new(prime: PrimeLabel, norm: u64) -> Self {
        SatoTateMeasure { prime, norm }
    }

    pub fn support_end(&self) -> f64 {
        2.0 * (self.norm as f64).sqrt()
    }

    pub fn density(&self, lambda: f64) -> f64 {
        let n = self.norm as f64;
        if !(0.0..=self.support_end()).contains(&lambda) {
            return 0.0;
        }
        (4.0 * n - lambda * lambda).max(0.0).sqrt() / (PI * n)
    }

    /// `Φ_𝔭([0, x])`.
    pub fn cdf(&self, x: f64) -> f64 {
        let n = self.norm as f64;
        let x = x.clamp(0.0, self.support_end());
        let r = (4.0 * n - x * x).max(0.0).sqrt();
        let ratio = (x / self.support_end()).min(1.0);
        ((0.5 * x * r + 2.0 * n * ratio.asin()) / (PI * n)).min(1.0)
    }

    /// Mass of `[a, b]` after intersecting with the support.
    pub fn interval(&self, a: f64, b: f64) -> f64 {
        if b < a {
            return 0.0;
        }
        (self.cdf(b) - self.cdf(a)).max(0.0)
    }

    /// Exact for polynomials: Gauss-Chebyshev (second kind) on
    /// `(2/π) ∫_0^π f(2√N cos θ) sin²θ dθ`, valid since `f` is even.
    pub fn phi(&self, f: &EvenPoly) -> f64 {
        let nodes = f.degree() / 2 + 2;
        let scale = self.support_end();
        let step = PI / (nodes + 1) as f64;
        let total: f64 = (1..=nodes)
            .map(|i| {
                let theta = i as f64 * step;
                let s = theta.sin();
                step * s * s * f.eval(scale * theta.cos())
            })
            .sum();
        2.0 * total / PI
    }
}
