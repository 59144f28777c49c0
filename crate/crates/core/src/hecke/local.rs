use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::HeckeError;
use crate::field::PrimeLabel;

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    if v.is_empty() {
        v.push(BigRational::zero());
    }
    v
}

fn norm_power(norm: u64, k: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(norm).pow(k))
}

/// An element of `H_𝔭` in the basis `T(𝔭⁰), T(𝔭²), T(𝔭⁴), ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalHeckeElement {
    prime: PrimeLabel,
    norm: u64,
    coeffs: Vec<BigRational>,
}

impl LocalHeckeElement {
    pub fn new(prime: PrimeLabel, norm: u64, coeffs: Vec<BigRational>) -> Self {
        LocalHeckeElement { prime, norm, coeffs: trim(coeffs) }
    }

    /// The unit `ε_𝔭 = T(𝔭⁰)`.
    pub fn unit(prime: PrimeLabel, norm: u64) -> Self {
        Self::basis(prime, norm, 0)
    }

    /// `T(𝔭^{2k})`.
    pub fn basis(prime: PrimeLabel, norm: u64, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::one();
        Self::new(prime, norm, coeffs)
    }

    pub fn from_ints(prime: PrimeLabel, norm: u64, coeffs: &[i64]) -> Self {
        Self::new(prime, norm, coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn prime(&self) -> PrimeLabel {
        self.prime
    }

    pub fn norm(&self) -> u64 {
        self.norm
    }

    /// Coefficient of `T(𝔭^{2k})` at index `k`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    fn check_same(&self, other: &Self) -> Result<(), HeckeError> {
        if self.prime != other.prime || self.norm != other.norm {
            return Err(HeckeError::PrimeMismatch(self.prime, other.prime));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, HeckeError> {
        self.check_same(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Ok(Self::new(self.prime, self.norm, coeffs))
    }

    /// Right multiplication by `T(𝔭²)`:
    /// `T(𝔭^{2k}) * T(𝔭²) = T(𝔭^{2k+2}) + N T(𝔭^{2k}) + N² T(𝔭^{2k-2})` for `k >= 1`.
    fn times_t2(&self, coeffs: &[BigRational]) -> Vec<BigRational> {
        let n = BigRational::from_integer(self.norm.into());
        let n2 = &n * &n;
        let mut out = vec![BigRational::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out[k + 1] += c;
            if k >= 1 {
                out[k] += c * &n;
                out[k - 1] += c * &n2;
            }
        }
        out
    }

    /// Coefficients `b_j` with `self = sum_j b_j T(𝔭²)^j`.
    fn to_power_basis(&self) -> Vec<BigRational> {
        let top = self.coeffs.len();
        let mut powers = vec![vec![BigRational::one()]];
        for j in 1..top {
            let next = self.times_t2(&powers[j - 1]);
            powers.push(next);
        }
        let mut rest = self.coeffs.clone();
        let mut out = vec![BigRational::zero(); top];
        for k in (0..top).rev() {
            let b = rest[k].clone();
            if !b.is_zero() {
                for (i, p) in powers[k].iter().enumerate() {
                    rest[i] -= &b * p;
                }
            }
            out[k] = b;
        }
        out
    }

    /// Convolution product, computed with the three-term relation only.
    pub fn multiply(&self, other: &Self) -> Result<Self, HeckeError> {
        self.check_same(other)?;
        let b = other.to_power_basis();
        let mut acc: Vec<BigRational> = vec![BigRational::zero()];
        for bj in b.iter().rev() {
            acc = self.times_t2(&acc);
            if acc.len() < self.coeffs.len() {
                acc.resize(self.coeffs.len(), BigRational::zero());
            }
            for (i, c) in self.coeffs.iter().enumerate() {
                acc[i] += bj * c;
            }
        }
        Ok(Self::new(self.prime, self.norm, acc))
    }

    /// Image in the even symmetric Laurent polynomials:
    /// `T(𝔭^{2k}) -> N^k sum_{j=0}^{2k} X^{2k-2j}`.
    pub fn to_sym_laurent(&self) -> SymLaurentPoly {
        let mut out = vec![BigRational::zero(); self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scaled = c * norm_power(self.norm, k);
            for o in out.iter_mut().take(k + 1) {
                *o += &scaled;
            }
        }
        SymLaurentPoly::new(out)
    }

    /// Inverse of [`to_sym_laurent`](Self::to_sym_laurent). Every even
    /// symmetric Laurent polynomial over `Q` lies in the image.
    pub fn from_sym_laurent(prime: PrimeLabel, norm: u64, p: &SymLaurentPoly) -> Self {
        let mut rest = p.coeffs.clone();
        let mut out = vec![BigRational::zero(); rest.len()];
        for k in (0..rest.len()).rev() {
            if rest[k].is_zero() {
                continue;
            }
            let t = &rest[k] / norm_power(norm, k);
            let scaled = &t * norm_power(norm, k);
            for r in rest.iter_mut().take(k + 1) {
                *r -= &scaled;
            }
            out[k] = t;
        }
        Self::new(prime, norm, out)
    }
}

/// `c_0 + sum_{k>=1} c_k (X^{2k} + X^{-2k})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymLaurentPoly {
    coeffs: Vec<BigRational>,
}

impl SymLaurentPoly {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        SymLaurentPoly { coeffs: trim(coeffs) }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Dense coefficients of `X^{2e}` for `e = -K..=K`.
    pub fn to_dense(&self) -> Vec<BigRational> {
        let k = self.coeffs.len() - 1;
        let mut dense = vec![BigRational::zero(); 2 * k + 1];
        dense[k] = self.coeffs[0].clone();
        for i in 1..=k {
            dense[k + i] = self.coeffs[i].clone();
            dense[k - i] = self.coeffs[i].clone();
        }
        dense
    }

    /// Folds a dense symmetric vector back; `None` if it is not symmetric.
    pub fn from_dense(dense: &[BigRational]) -> Option<Self> {
        if dense.len() % 2 == 0 {
            return None;
        }
        let k = dense.len() / 2;
        if (1..=k).any(|i| dense[k + i] != dense[k - i]) {
            return None;
        }
        Some(Self::new(dense[k..].to_vec()))
    }

    /// Laurent polynomial product.
    pub fn mul(&self, other: &Self) -> Self {
        let a = self.to_dense();
        let b = other.to_dense();
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Self::from_dense(&out).expect("product of symmetric polynomials is symmetric")
    }

    /// Value at `X = x` (real).
    pub fn eval(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        let x2 = x * x;
        let mut total = self.coeffs[0].to_f64().unwrap_or(f64::NAN);
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            let xk = x2.powi(k as i32);
            total += c.to_f64().unwrap_or(f64::NAN) * (xk + 1.0 / xk);
        }
        total
    }
}
