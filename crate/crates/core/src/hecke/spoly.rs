use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::field::PrimeIdeal;

/// `sum_i c_i λ^{2i}`; `coeffs()[i]` is the coefficient of `λ^{2i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenPoly {
    coeffs: Vec<BigRational>,
    approx: Vec<f64>,
}

impl EvenPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        let approx = coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        EvenPoly { coeffs, approx }
    }

    pub fn from_f64(coeffs: &[f64]) -> Option<Self> {
        coeffs.iter().map(|&c| BigRational::from_float(c)).collect::<Option<Vec<_>>>().map(Self::new)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Degree in `λ` (always even).
    pub fn degree(&self) -> usize {
        2 * (self.coeffs.len() - 1)
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        let x2 = lambda * lambda;
        self.approx.iter().rev().fold(0.0, |acc, &c| acc * x2 + c)
    }

    pub fn eval_exact(&self, lambda: &BigRational) -> BigRational {
        let x2 = lambda * lambda;
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x2 + c)
    }

    /// Coefficients in increasing powers of `λ`, odd powers included.
    pub fn dense(&self) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.degree() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[2 * i] = c.clone();
        }
        out
    }
}

impl Serialize for EvenPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.dense().iter().map(ToString::to_string).collect();
        strings.serialize(s)
    }
}

/// Chebyshev `U_{2k}(u)` coefficients in increasing powers of `u`.
fn chebyshev_u(n: usize) -> Vec<BigInt> {
    let mut prev = vec![BigInt::one()];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![BigInt::zero(), BigInt::from(2)];
    for _ in 1..n {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c * 2;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// The even polynomial with `S(√N (X + X⁻¹)) = N^k sum_{j=0}^{2k} X^{2(k-j)}`.
/// Equals `N^k U_{2k}(λ / (2√N))`.
pub fn s_poly_for_norm(norm: u64, k: usize) -> EvenPoly {
    let u = chebyshev_u(2 * k);
    let n = BigInt::from(norm);
    let coeffs = (0..=k)
        .map(|i| {
            // u^{2i} = λ^{2i} / (4N)^i
            let num = &u[2 * i] * n.clone().pow(k - i);
            BigRational::new(num, BigInt::from(4u32).pow(i))
        })
        .collect();
    EvenPoly::new(coeffs)
}

pub fn s_poly(prime: &PrimeIdeal, k: usize) -> EvenPoly {
    s_poly_for_norm(prime.norm(), k)
}
