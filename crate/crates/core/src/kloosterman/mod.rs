//! Kloosterman sums at the cusp `∞` twisted by a character of `(O/I)^*`,
//! their symmetries, the delta term, and Weil-bound scans.

mod character;
mod scan;

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::field::{inverse_different, FieldElement, FieldError, Ideal, NumberField, ResidueRing};

pub use character::{CharacterGenerator, DirichletCharacter};
pub use scan::{weil_scan, ScanRow, WeilScan};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KloostermanError {
    #[error("modulus c must be a nonzero element of the level ideal")]
    ModulusNotInLevel,
    #[error("{0} is not in the inverse different")]
    NotInInverseDifferent(String),
    #[error("element is not integral")]
    NotIntegral,
    #[error("r and r' must be nonzero")]
    ZeroFrequency,
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("scan over norms up to {max_norm} exceeds the work budget ({work} > {budget})")]
    ScanTooLarge { max_norm: u64, work: u64, budget: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `K_χ(r, r'; c)` for `c in I \ {0}` and `r, r' in O'`.
#[derive(Clone, Debug)]
pub struct KloostermanQuery {
    pub c: FieldElement,
    pub r: FieldElement,
    pub r_prime: FieldElement,
    pub chi: DirichletCharacter,
}

impl KloostermanQuery {
    pub fn new(
        field: &NumberField,
        c: FieldElement,
        r: FieldElement,
        r_prime: FieldElement,
        chi: DirichletCharacter,
    ) -> Result<Self, KloostermanError> {
        if c.is_zero() || !chi.modulus().contains(&c) {
            return Err(KloostermanError::ModulusNotInLevel);
        }
        let dual = inverse_different(field);
        for x in [&r, &r_prime] {
            if !dual.contains(field, x) {
                return Err(KloostermanError::NotInInverseDifferent(field.format_element(x)));
            }
        }
        Ok(KloostermanQuery { c, r, r_prime, chi })
    }

    /// The same query with `(r, r')` swapped and `c` replaced by `sign · c`.
    fn swapped(&self, field: &NumberField, negate_c: bool) -> Self {
        let c = if negate_c { field.neg(&self.c) } else { self.c.clone() };
        KloostermanQuery { c, r: self.r_prime.clone(), r_prime: self.r.clone(), chi: self.chi.clone() }
    }
}

/// `S(x / c)` on the basis as integers over a common denominator.
struct PhaseTable {
    denominator: BigInt,
    coefficients: Vec<BigInt>,
}

fn phase_table(field: &NumberField, num: &FieldElement, c: &FieldElement) -> Result<PhaseTable, FieldError> {
    let base = field.div(num, c)?;
    let traces: Vec<_> = (0..field.degree())
        .map(|i| {
            let mut e = vec![0i64; field.degree()];
            e[i] = 1;
            field.trace(&field.mul(&base, &field.from_ints(&e).expect("integral")))
        })
        .collect();
    let denominator = traces.iter().fold(BigInt::from(1), |acc, t| acc.lcm(t.denom()));
    let coefficients =
        traces.iter().map(|t| (t.numer() * (&denominator / t.denom())).mod_floor(&denominator)).collect();
    Ok(PhaseTable { denominator, coefficients })
}

/// Exact evaluation. Every term's phase `S((r' a + r d)/c) - k_χ(d)/order`
/// is reduced modulo 1 in integers before conversion to floating point.
pub fn eval(field: &NumberField, q: &KloostermanQuery) -> Result<Complex64, KloostermanError> {
    let ring = ResidueRing::new(field, &Ideal::principal(field, &q.c)?);
    let ta = phase_table(field, &q.r_prime, &q.c)?;
    let td = phase_table(field, &q.r, &q.c)?;
    let order = BigInt::from(q.chi.order());
    let modulus_big = ta.denominator.lcm(&td.denominator).lcm(&order);
    let modulus = modulus_big.to_i128().ok_or(FieldError::Overflow)?;
    let scale = |t: &PhaseTable| -> Vec<i128> {
        let s = &modulus_big / &t.denominator;
        t.coefficients.iter().map(|c| (c * &s).to_i128().expect("reduced below modulus")).collect()
    };
    let (wa, wd) = (scale(&ta), scale(&td));
    let chi_scale = (&modulus_big / &order).to_i128().expect("divides modulus");

    let inverses = ring.inverse_table();
    let mut total = Complex64::new(0.0, 0.0);
    let mut compensation = Complex64::new(0.0, 0.0);
    for (i, inv) in inverses.iter().enumerate() {
        let Some(j) = *inv else { continue };
        let a = ring.element(i);
        let d = ring.element(j);
        let d_wide: Vec<i128> = d.iter().map(|&x| x as i128).collect();
        let k = q.chi.exponent_wide(&d_wide).ok_or_else(|| {
            KloostermanError::InvalidCharacter("character undefined on a unit modulo c".into())
        })? as i128;
        let mut phase = -(k * chi_scale);
        for t in 0..a.len() {
            phase = (phase + (a[t] as i128 * wa[t]) % modulus + (d[t] as i128 * wd[t]) % modulus) % modulus;
        }
        let phase = phase.rem_euclid(modulus);
        let term = Complex64::from_polar(1.0, TAU * (phase as f64 / modulus as f64));
        // Kahan summation
        let y = term - compensation;
        let sum = total + y;
        compensation = (sum - total) - y;
        total = sum;
    }
    Ok(total)
}

/// Deviations in `conj K(r,r';c) = K(r',r;-c) = χ(-1) K(r',r;c)`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SymmetryReport {
    pub value: Complex64,
    pub negated_modulus_deviation: f64,
    pub character_sign_deviation: f64,
    pub max_deviation: f64,
    pub holds: bool,
}

pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

pub fn symmetry_check(field: &NumberField, q: &KloostermanQuery) -> Result<SymmetryReport, KloostermanError> {
    let k = eval(field, q)?;
    let k_neg = eval(field, &q.swapped(field, true))?;
    let k_swap = eval(field, &q.swapped(field, false))?;
    let sign = q.chi.at_minus_one() as f64;
    let d1 = (k.conj() - k_neg).norm();
    let d2 = (k.conj() - k_swap * sign).norm();
    let max_deviation = d1.max(d2);
    Ok(SymmetryReport {
        value: k,
        negated_modulus_deviation: d1,
        character_sign_deviation: d2,
        max_deviation,
        holds: max_deviation <= SYMMETRY_TOLERANCE,
    })
}

/// Delta term at the cusp `∞`: `(1/2) sum_{ε² = r/r'} χ(ε^{-1}) prod_j sign(ε_j)^{ξ_j}`,
/// summed over both units `±ε₁` with translation part `β = 0`.
pub fn delta_term(
    field: &NumberField,
    r: &FieldElement,
    r_prime: &FieldElement,
    xi: &[u8],
    chi: &DirichletCharacter,
) -> Result<Complex64, KloostermanError> {
    if r.is_zero() || r_prime.is_zero() {
        return Err(KloostermanError::ZeroFrequency);
    }
    let Some(eps) = field.unit_square_class(r, r_prime) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let mut total = Complex64::new(0.0, 0.0);
    for e in [eps.clone(), field.neg(&eps)] {
        let inv = field.inv(&e)?;
        let sign: i32 = field
            .embedding_signs(&e)
            .iter()
            .zip(xi)
            .map(|(&s, &x)| if x % 2 == 1 { s as i32 } else { 1 })
            .product();
        total += chi.value_at(&inv)? * (0.5 * sign as f64);
    }
    Ok(total)
}

/// Count of unit pairs, the trivial bound for `|K|`.
pub fn unit_pair_count(field: &NumberField, c: &FieldElement) -> Result<u64, KloostermanError> {
    let ideal = Ideal::principal(field, c)?;
    Ok(ideal.euler_phi(field)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, FieldSpec};

    fn rational_query(c: i64, r: i64, rp: i64) -> (NumberField, KloostermanQuery) {
        let q = make_field(FieldSpec::Rational).unwrap();
        let chi = DirichletCharacter::trivial(&q, &Ideal::unit(&q));
        let query = KloostermanQuery::new(&q, q.from_int(c), q.from_int(r), q.from_int(rp), chi).unwrap();
        (q, query)
    }

    /// Classical `S(m, n; c)` by direct enumeration with gcd tests.
    fn classical(m: i64, n: i64, c: i64) -> f64 {
        (1..=c.abs())
            .filter(|a| a.gcd(&c) == 1)
            .map(|a| {
                let d = (1..=c.abs()).find(|d| (a * d).rem_euclid(c.abs()) == 1 % c.abs()).unwrap();
                (TAU * ((m * a + n * d) as f64) / c as f64).cos()
            })
            .sum()
    }

    #[test]
    fn small_rational_sums() {
        let cases = [(2i64, 1.0), (3, -1.0), (5, 0.381_966_011_250_105_1)];
        for (c, expected) in cases {
            let (q, query) = rational_query(c, 1, 1);
            let k = eval(&q, &query).unwrap();
            assert!((k.re - expected).abs() < 1e-12 && k.im.abs() < 1e-12, "c = {c}: {k}");
        }
    }

    #[test]
    fn agrees_with_classical_enumeration() {
        for c in 1..60i64 {
            for (m, n) in [(1, 1), (2, 3), (5, 7)] {
                let (q, query) = rational_query(c, m, n);
                let k = eval(&q, &query).unwrap();
                assert!((k.re - classical(m, n, c)).abs() < 1e-10, "S({m},{n};{c})");
            }
        }
    }

    #[test]
    fn rejects_bad_queries() {
        let q = make_field(FieldSpec::Rational).unwrap();
        let chi = DirichletCharacter::trivial(&q, &Ideal::rational(&q, 4).unwrap());
        let bad_c = KloostermanQuery::new(&q, q.from_int(6), q.one(), q.one(), chi.clone());
        assert!(matches!(bad_c, Err(KloostermanError::ModulusNotInLevel)));
        let half = q.parse_element("1/2").unwrap();
        let bad_r = KloostermanQuery::new(&q, q.from_int(8), half, q.one(), chi);
        assert!(matches!(bad_r, Err(KloostermanError::NotInInverseDifferent(_))));
    }

    #[test]
    fn delta_examples() {
        let q = make_field(FieldSpec::Rational).unwrap();
        let trivial = DirichletCharacter::trivial(&q, &Ideal::unit(&q));
        let r = q.from_int(3);
        assert!((delta_term(&q, &r, &r, &[0], &trivial).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(delta_term(&q, &r, &q.from_int(6), &[0], &trivial).unwrap(), Complex64::new(0.0, 0.0));
        let four = Ideal::rational(&q, 4).unwrap();
        let odd = DirichletCharacter::from_generators(
            &q,
            &four,
            &[CharacterGenerator { unit: vec![3], order: 2, exponent: 1 }],
        )
        .unwrap();
        assert!((delta_term(&q, &r, &r, &[1], &odd).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(delta_term(&q, &q.zero(), &r, &[0], &trivial).is_err());
    }

    #[test]
    fn delta_over_golden_field() {
        let f = make_field(FieldSpec::RealQuadratic(5)).unwrap();
        let trivial = DirichletCharacter::trivial(&f, &Ideal::unit(&f));
        let eps = f.units().fundamental().unwrap().clone();
        let r = f.parse_element("-1/5+2/5*w").unwrap();
        let r_prime = f.mul(&r, &f.pow(&eps, -2).unwrap());
        // ε₁ = ε has signs (+, -)
        let d0 = delta_term(&f, &r, &r_prime, &[0, 0], &trivial).unwrap();
        let d1 = delta_term(&f, &r, &r_prime, &[0, 1], &trivial).unwrap();
        assert!((d0.re - 1.0).abs() < 1e-15);
        assert!(d1.norm() < 1e-15, "incompatible parity cancels");
        let d11 = delta_term(&f, &r, &r_prime, &[1, 1], &trivial).unwrap();
        assert!((d11.re + 1.0).abs() < 1e-15);
    }
}
