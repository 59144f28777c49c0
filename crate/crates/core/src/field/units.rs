use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{FieldElement, NumberField};

/// Torsion `{±1}` plus, for quadratic fields, the fundamental unit `ε₀ > 1`
/// (under the first embedding).
#[derive(Clone, Debug)]
pub struct UnitGroupData {
    fundamental: Option<FieldElement>,
    fundamental_norm: i64,
    signs: Vec<i8>,
    embedding: Vec<f64>,
}

impl UnitGroupData {
    pub(crate) fn rational() -> Self {
        UnitGroupData { fundamental: None, fundamental_norm: 1, signs: vec![], embedding: vec![1.0] }
    }

    pub fn fundamental(&self) -> Option<&FieldElement> {
        self.fundamental.as_ref()
    }

    /// `N(ε₀)`, either `1` or `-1`.
    pub fn fundamental_norm(&self) -> i64 {
        self.fundamental_norm
    }

    /// Embedding signs of `ε₀`.
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn fundamental_embedding(&self) -> &[f64] {
        &self.embedding
    }

    /// `log ε₀` under the first embedding (0 for `Q`).
    pub fn regulator(&self) -> f64 {
        self.embedding[0].abs().ln()
    }
}

fn isqrt(n: i64) -> i64 {
    let mut s = (n as f64).sqrt() as i64;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

/// `floor((p + sqrt d)/q)` for non-square `d`, with `s = floor(sqrt d)`.
fn floor_quadratic(p: i64, q: i64, s: i64) -> i64 {
    if q > 0 {
        (p + s).div_euclid(q)
    } else {
        (-p - s - 1).div_euclid(-q)
    }
}

/// Continued fraction expansion of the larger root of the defining polynomial.
/// The first convergent `p/q` with `N(p - q w) = ±1` gives the fundamental
/// unit as the conjugate of `p - q w`.
pub(crate) fn compute_unit_data(field: &NumberField) -> UnitGroupData {
    let (t, n, d) = (field.omega_trace, field.omega_norm, field.discriminant);
    let s = isqrt(d);
    let (mut cf_p, mut cf_q) = (t, 2i64);
    let (mut p_prev, mut p_cur) = (BigInt::from(0), BigInt::from(1));
    let (mut q_prev, mut q_cur) = (BigInt::from(1), BigInt::from(0));
    let (bt, bn) = (BigInt::from(t), BigInt::from(n));
    loop {
        let a = floor_quadratic(cf_p, cf_q, s);
        let p_next = BigInt::from(a) * &p_cur + &p_prev;
        let q_next = BigInt::from(a) * &q_cur + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        let norm = &p_cur * &p_cur - &bt * &p_cur * &q_cur + &bn * &q_cur * &q_cur;
        if norm.abs().is_one() {
            let eps = FieldElement {
                coords: vec![
                    BigRational::from_integer(&p_cur - &q_cur * &bt),
                    BigRational::from_integer(q_cur.clone()),
                ],
            };
            let signs = field.embedding_signs(&eps);
            let embedding = field.embed(&eps);
            let fundamental_norm = if norm.is_positive() { 1 } else { -1 };
            debug_assert!(embedding[0] > 1.0);
            return UnitGroupData { fundamental: Some(eps), fundamental_norm, signs, embedding };
        }
        let next_p = a * cf_q - cf_p;
        cf_q = (d - next_p * next_p) / cf_q;
        cf_p = next_p;
    }
}

impl NumberField {
    /// Integral with norm `±1`.
    pub fn is_unit(&self, x: &FieldElement) -> bool {
        x.is_integral() && !x.is_zero() && self.norm(x).abs().is_one()
    }

    /// Returns a unit `ε` with `ε² = r/r'`, if one exists.
    pub fn unit_square_class(&self, r: &FieldElement, r_prime: &FieldElement) -> Option<FieldElement> {
        if r.is_zero() || r_prime.is_zero() {
            return None;
        }
        let q = self.div(r, r_prime).ok()?;
        if q == self.one() {
            return Some(self.one());
        }
        let eps0 = self.units.fundamental.as_ref()?;
        if !self.is_unit(&q) {
            return None;
        }
        let log_q = self.embed(&q)[0].abs().ln();
        let j = (log_q / (2.0 * self.units.regulator())).round() as i64;
        let eps = self.pow(eps0, j).ok()?;
        (self.mul(&eps, &eps) == q).then_some(eps)
    }
}
