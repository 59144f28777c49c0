//! Exact arithmetic in `Q` and real quadratic fields `Q(sqrt m)`.
//!
//! Elements are coordinate vectors of rationals over the integral basis
//! `(1, w)`, with `w = (1 + sqrt m)/2` when `m = 1 mod 4` and `w = sqrt m`
//! otherwise. For `Q` the basis is `(1)`. The arithmetic itself only looks at
//! the multiplication table, so nothing below depends on the degree being two.

mod hnf;
mod ideal;
mod residue;
mod units;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ideal::{
    factor_rational_prime, find_generator, ideals_of_norm, inverse_different, prime_by_label, primes_up_to_norm,
    FractionalIdeal, Ideal, PrimeIdeal, PrimeLabel,
};
pub use residue::ResidueRing;
pub use units::UnitGroupData;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("field spec {0:?} not understood (expected \"Q\" or \"Q(sqrt m)\")")]
    InvalidSpec(String),
    #[error("{0} is not squarefree and > 1")]
    NotSquarefree(i64),
    #[error("{0} is not a rational prime")]
    NotPrime(u64),
    #[error("prime {0} divides the index of the monogenic order")]
    IndexDivisor(u64),
    #[error("element is not invertible modulo the ideal; gcd ideal has norm {}", witness.norm())]
    NotInvertible { witness: Ideal },
    #[error("element is not integral")]
    NotIntegral,
    #[error("element is zero")]
    Zero,
    #[error("lattice is not of full rank")]
    NotFullRank,
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("coordinate vector has length {got}, field degree is {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("cannot parse element {0:?}")]
    ParseElement(String),
    #[error("unknown prime label {0}")]
    UnknownPrime(String),
}

/// Which field to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rational,
    RealQuadratic(i64),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::RealQuadratic(m) => write!(f, "Q(sqrt {m})"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Accepts `Q`, `rational`, `Q(sqrt 5)`, `Q(sqrt(5))`, `Q(sqrt5)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = compact.to_ascii_lowercase();
        if lower == "q" || lower == "rational" {
            return Ok(FieldSpec::Rational);
        }
        let inner = lower
            .strip_prefix("q(sqrt")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| FieldError::InvalidSpec(s.to_string()))?;
        let inner = inner.trim_start_matches('(').trim_end_matches(')');
        let m: i64 = inner.parse().map_err(|_| FieldError::InvalidSpec(s.to_string()))?;
        Ok(FieldSpec::RealQuadratic(m))
    }
}

/// An element of the field, as rational coordinates over the integral basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Integer coordinates, if the element lies in `O` and fits in `i64`.
    pub fn integral_coords(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // Very large numerator/denominator: scale both down first.
    let (n, d) = (r.numer(), r.denom());
    let shift = n.bits().max(d.bits()).saturating_sub(1000);
    let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// A totally real number field of degree one or two.
#[derive(Clone, Debug)]
pub struct NumberField {
    spec: FieldSpec,
    degree: usize,
    /// `w^2 = omega_trace * w - omega_norm` (quadratic case only).
    omega_trace: i64,
    omega_norm: i64,
    discriminant: i64,
    /// `mult[i][j]` = coordinates of `e_i * e_j`.
    mult: Vec<Vec<Vec<i64>>>,
    /// Images of `w` under the real embeddings, largest first.
    omega_images: Vec<f64>,
    units: UnitGroupData,
}

fn is_squarefree(m: i64) -> bool {
    let mut n = m;
    let mut p = 2i64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Builds the field with its canonical integral basis.
pub fn make_field(spec: FieldSpec) -> Result<NumberField, FieldError> {
    match spec {
        FieldSpec::Rational => Ok(NumberField {
            spec,
            degree: 1,
            omega_trace: 0,
            omega_norm: 0,
            discriminant: 1,
            mult: vec![vec![vec![1]]],
            omega_images: vec![],
            units: UnitGroupData::rational(),
        }),
        FieldSpec::RealQuadratic(m) => {
            if m <= 1 || !is_squarefree(m) {
                return Err(FieldError::NotSquarefree(m));
            }
            let (t, n) = if m.rem_euclid(4) == 1 { (1, (1 - m) / 4) } else { (0, -m) };
            let disc = t * t - 4 * n;
            let sq = (disc as f64).sqrt();
            let omega_images = vec![(t as f64 + sq) / 2.0, (t as f64 - sq) / 2.0];
            let mult = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![-n, t]]];
            let mut field = NumberField {
                spec,
                degree: 2,
                omega_trace: t,
                omega_norm: n,
                discriminant: disc,
                mult,
                omega_images,
                units: UnitGroupData::rational(),
            };
            field.units = units::compute_unit_data(&field);
            Ok(field)
        }
    }
}

impl NumberField {
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    /// Coefficients `[c0, c1, 1]` of the monic defining polynomial of `w`
    /// (for `Q`, the polynomial `x`).
    pub fn defining_polynomial(&self) -> Vec<i64> {
        match self.degree {
            1 => vec![0, 1],
            _ => vec![self.omega_norm, -self.omega_trace, 1],
        }
    }

    pub fn units(&self) -> &UnitGroupData {
        &self.units
    }

    pub fn element(&self, coords: Vec<BigRational>) -> Result<FieldElement, FieldError> {
        if coords.len() != self.degree {
            return Err(FieldError::DegreeMismatch { expected: self.degree, got: coords.len() });
        }
        Ok(FieldElement { coords })
    }

    pub fn from_ints(&self, coords: &[i64]) -> Result<FieldElement, FieldError> {
        self.element(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn from_rational(&self, r: BigRational) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.degree];
        coords[0] = r;
        FieldElement { coords }
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_rational(rat(n))
    }

    pub fn zero(&self) -> FieldElement {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// The second basis element `w`; `None` for `Q`.
    pub fn omega(&self) -> Option<FieldElement> {
        (self.degree == 2).then(|| FieldElement { coords: vec![rat(0), rat(1)] })
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement { coords: x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement { coords: x.coords.iter().zip(&y.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        FieldElement { coords: x.coords.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, x: &FieldElement, r: &BigRational) -> FieldElement {
        FieldElement { coords: x.coords.iter().map(|a| a * r).collect() }
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let d = self.degree;
        let mut out = vec![BigRational::zero(); d];
        for i in 0..d {
            if x.coords[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y.coords[j].is_zero() {
                    continue;
                }
                let prod = &x.coords[i] * &y.coords[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.mult[i][j][k];
                    if c != 0 {
                        *o += &prod * rat(c);
                    }
                }
            }
        }
        FieldElement { coords: out }
    }

    /// Integer-coordinate product, for elements of `O`.
    pub(crate) fn mul_int(&self, x: &[i128], y: &[i128]) -> Vec<i128> {
        let d = self.degree;
        let mut out = vec![0i128; d];
        for i in 0..d {
            for j in 0..d {
                let p = x[i] * y[j];
                if p == 0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += p * self.mult[i][j][k] as i128;
                }
            }
        }
        out
    }

    /// Rows are the coordinates of `x * e_i`.
    pub fn mult_matrix(&self, x: &FieldElement) -> Vec<Vec<BigRational>> {
        (0..self.degree)
            .map(|i| {
                let mut e = vec![BigRational::zero(); self.degree];
                e[i] = BigRational::one();
                self.mul(x, &FieldElement { coords: e }).coords
            })
            .collect()
    }

    /// `S(x)`: the sum of the real embeddings, computed exactly.
    pub fn trace(&self, x: &FieldElement) -> BigRational {
        let m = self.mult_matrix(x);
        (0..self.degree).map(|i| m[i][i].clone()).fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn norm(&self, x: &FieldElement) -> BigRational {
        determinant(self.mult_matrix(x))
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        if x.is_zero() {
            return Err(FieldError::Zero);
        }
        // Solve y * M_x = e_0 where rows of M_x are x*e_i: sum_i y_i (x e_i) = 1.
        let m = self.mult_matrix(x);
        let d = self.degree;
        let mut a: Vec<Vec<BigRational>> = (0..d)
            .map(|k| {
                let mut row: Vec<BigRational> = (0..d).map(|i| m[i][k].clone()).collect();
                row.push(if k == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        solve_in_place(&mut a).ok_or(FieldError::Zero)?;
        Ok(FieldElement { coords: a.iter().map(|row| row[d].clone()).collect() })
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &FieldElement, e: i64) -> Result<FieldElement, FieldError> {
        let mut base = if e < 0 { self.inv(x)? } else { x.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        Ok(acc)
    }

    /// Galois conjugate (identity on `Q`).
    pub fn conjugate(&self, x: &FieldElement) -> FieldElement {
        match self.degree {
            1 => x.clone(),
            _ => {
                // w -> t - w
                let (a, b) = (&x.coords[0], &x.coords[1]);
                FieldElement { coords: vec![a + b * rat(self.omega_trace), -b] }
            }
        }
    }

    /// Real embeddings, in the fixed order (largest image of `w` first).
    pub fn embed(&self, x: &FieldElement) -> Vec<f64> {
        match self.degree {
            1 => vec![rat_to_f64(&x.coords[0])],
            _ => {
                let a = rat_to_f64(&x.coords[0]);
                let b = rat_to_f64(&x.coords[1]);
                self.omega_images.iter().map(|w| a + b * w).collect()
            }
        }
    }

    /// Exact sign of each embedding (`-1`, `0`, `1`).
    pub fn embedding_signs(&self, x: &FieldElement) -> Vec<i8> {
        match self.degree {
            1 => vec![sign_of(&x.coords[0])],
            _ => {
                // sign of a + b*(t +- sqrt D)/2  =  sign of (2a + b t) +- b sqrt D
                let u = &x.coords[0] * rat(2) + &x.coords[1] * rat(self.omega_trace);
                let v = x.coords[1].clone();
                let d = rat(self.discriminant);
                vec![sign_plus_root(&u, &v, &d), sign_plus_root(&u, &(-v.clone()), &d)]
            }
        }
    }

    /// The image `f'(w)` of the derivative of the defining polynomial; its
    /// inverse generates the inverse different.
    pub fn different_generator(&self) -> FieldElement {
        match self.degree {
            1 => self.one(),
            _ => FieldElement { coords: vec![rat(-self.omega_trace), rat(2)] },
        }
    }

    /// Parses an element like `3`, `-1/2`, `2+3w`, `1/5*w - 2`.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement, FieldError> {
        let err = || FieldError::ParseElement(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut coords = vec![BigRational::zero(); self.degree];
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' && bytes[i - 1] != b'*' {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        for term in terms {
            let (term, is_w) = match term.strip_suffix('w') {
                Some(t) => (t.strip_suffix('*').unwrap_or(t), true),
                None => (term, false),
            };
            let coef = match term {
                "" | "+" => BigRational::one(),
                "-" => -BigRational::one(),
                t => parse_rational(t.strip_prefix('+').unwrap_or(t)).ok_or_else(err)?,
            };
            let slot = if is_w {
                if self.degree < 2 {
                    return Err(err());
                }
                1
            } else {
                0
            };
            coords[slot] += coef;
        }
        Ok(FieldElement { coords })
    }

    pub fn format_element(&self, x: &FieldElement) -> String {
        let a = &x.coords[0];
        if self.degree == 1 || x.coords[1].is_zero() {
            return a.to_string();
        }
        let b = &x.coords[1];
        let w = if b.is_one() {
            "w".to_string()
        } else if (-b).is_one() {
            "-w".to_string()
        } else {
            format!("{b}*w")
        };
        if a.is_zero() {
            w
        } else if w.starts_with('-') {
            format!("{a}{w}")
        } else {
            format!("{a}+{w}")
        }
    }
}

fn sign_of(r: &BigRational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of `u + v*sqrt(d)` for rational `u, v` and non-square `d > 0`.
fn sign_plus_root(u: &BigRational, v: &BigRational, d: &BigRational) -> i8 {
    let su = sign_of(u);
    let sv = sign_of(v);
    if sv == 0 {
        return su;
    }
    if su == 0 || su == sv {
        return sv;
    }
    // opposite signs: compare u^2 with v^2 d
    let lhs = u * u;
    let rhs = v * v * d;
    if lhs > rhs {
        su
    } else if lhs < rhs {
        sv
    } else {
        0
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

fn determinant(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

/// Gauss-Jordan on an augmented `n x (n+1)` system; `None` if singular.
fn solve_in_place(a: &mut [Vec<BigRational>]) -> Option<()> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let p = a[col][col].clone();
        for c in col..=n {
            a[col][c] = &a[col][c] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    Some(())
}

pub(crate) fn lcm_of_denominators(x: &FieldElement) -> BigInt {
    x.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5() -> NumberField {
        make_field(FieldSpec::RealQuadratic(5)).unwrap()
    }

    #[test]
    fn canonical_bases() {
        let q = make_field(FieldSpec::Rational).unwrap();
        assert_eq!((q.degree(), q.discriminant()), (1, 1));
        let f5 = q5();
        assert_eq!(f5.discriminant(), 5);
        assert_eq!(f5.defining_polynomial(), vec![-1, -1, 1]);
        let f2 = make_field(FieldSpec::RealQuadratic(2)).unwrap();
        assert_eq!(f2.discriminant(), 8);
        assert_eq!(f2.defining_polynomial(), vec![-2, 0, 1]);
    }

    #[test]
    fn non_squarefree_rejected() {
        for m in [4, 12, 18, 1, 0, -3] {
            assert!(matches!(make_field(FieldSpec::RealQuadratic(m)), Err(FieldError::NotSquarefree(_))));
        }
    }

    #[test]
    fn embeddings_are_roots() {
        for m in [2, 3, 5, 6, 13, 73] {
            let f = make_field(FieldSpec::RealQuadratic(m)).unwrap();
            let c = f.defining_polynomial();
            for w in f.embed(&f.omega().unwrap()) {
                let val = c[0] as f64 + c[1] as f64 * w + w * w;
                assert!(val.abs() < 1e-12, "m={m} residual {val}");
            }
        }
    }

    #[test]
    fn trace_and_norm_examples() {
        let f = q5();
        let w = f.omega().unwrap();
        assert_eq!(f.trace(&w), rat(1));
        assert_eq!(f.norm(&w), rat(-1));
        let q = make_field(FieldSpec::Rational).unwrap();
        assert_eq!(q.trace(&q.from_int(7)), rat(7));
        let f2 = make_field(FieldSpec::RealQuadratic(2)).unwrap();
        assert_eq!(f2.trace(&f2.from_ints(&[3, 1]).unwrap()), rat(6));
    }

    #[test]
    fn inverse_and_conjugate() {
        let f = q5();
        let x = f.parse_element("2+3w").unwrap();
        let y = f.inv(&x).unwrap();
        assert_eq!(f.mul(&x, &y), f.one());
        assert_eq!(f.mul(&x, &f.conjugate(&x)), f.from_rational(f.norm(&x)));
        assert!(matches!(f.inv(&f.zero()), Err(FieldError::Zero)));
    }

    #[test]
    fn exact_signs_match_embeddings() {
        let f = make_field(FieldSpec::RealQuadratic(7)).unwrap();
        for s in ["3-w", "-3+w", "8-3w", "2w", "-1", "w-2"] {
            let x = f.parse_element(s).unwrap();
            let signs = f.embedding_signs(&x);
            for (sg, v) in signs.iter().zip(f.embed(&x)) {
                assert_eq!(*sg as f64, v.signum(), "{s}");
            }
        }
    }

    #[test]
    fn parse_and_format() {
        let f = q5();
        let x = f.parse_element("1/5*w - 2").unwrap();
        assert_eq!(x.coords(), &[rat(-2), BigRational::new(1.into(), 5.into())]);
        assert_eq!(f.parse_element(&f.format_element(&x)).unwrap(), x);
        assert_eq!(f.parse_element("-w").unwrap(), f.from_ints(&[0, -1]).unwrap());
        assert!(make_field(FieldSpec::Rational).unwrap().parse_element("w").is_err());
        assert_eq!("Q(sqrt 5)".parse::<FieldSpec>().unwrap(), FieldSpec::RealQuadratic(5));
        assert_eq!("Q(sqrt(13))".parse::<FieldSpec>().unwrap(), FieldSpec::RealQuadratic(13));
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
    }
}
