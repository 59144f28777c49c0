use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::hnf::{hermite_form, reduce_mod};
use super::{is_prime, lcm_of_denominators, FieldElement, FieldError, NumberField};

/// A nonzero integral ideal, stored as the HNF of its lattice over the
/// integral basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    pub(crate) hnf: Vec<Vec<i128>>,
    norm: u64,
}

impl PartialOrd for Ideal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ideal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.hnf.cmp(&other.hnf)
    }
}

impl Ideal {
    pub(crate) fn from_lattice_rows(rows: &[Vec<i128>], dim: usize) -> Result<Self, FieldError> {
        let form = hermite_form(rows, dim)?;
        let norm = form
            .h
            .iter()
            .enumerate()
            .try_fold(1u128, |acc, (i, r)| acc.checked_mul(r[i] as u128))
            .and_then(|n| u64::try_from(n).ok())
            .ok_or(FieldError::Overflow)?;
        Ok(Ideal { hnf: form.h, norm })
    }

    /// The ideal generated by the given integral elements.
    pub fn from_generators(field: &NumberField, gens: &[Vec<i64>]) -> Result<Self, FieldError> {
        let d = field.degree();
        let mut rows = Vec::with_capacity(gens.len() * d);
        for g in gens {
            if g.len() != d {
                return Err(FieldError::DegreeMismatch { expected: d, got: g.len() });
            }
            let g: Vec<i128> = g.iter().map(|&x| x as i128).collect();
            for i in 0..d {
                let mut e = vec![0i128; d];
                e[i] = 1;
                rows.push(field.mul_int(&g, &e));
            }
        }
        if rows.iter().all(|r| r.iter().all(|&x| x == 0)) {
            return Err(FieldError::Zero);
        }
        Self::from_lattice_rows(&rows, d)
    }

    pub fn principal(field: &NumberField, x: &FieldElement) -> Result<Self, FieldError> {
        let c = x.integral_coords().ok_or(FieldError::NotIntegral)?;
        Self::from_generators(field, &[c])
    }

    pub fn unit(field: &NumberField) -> Self {
        Self::from_generators(field, &[field.one().integral_coords().unwrap()]).unwrap()
    }

    /// `(n) = nO`.
    pub fn rational(field: &NumberField, n: i64) -> Result<Self, FieldError> {
        Self::principal(field, &field.from_int(n))
    }

    pub fn degree(&self) -> usize {
        self.hnf.len()
    }

    /// Absolute norm `[O : a]`.
    pub fn norm(&self) -> u64 {
        self.norm
    }

    pub fn is_unit(&self) -> bool {
        self.norm == 1
    }

    /// HNF rows (lower triangular).
    pub fn hnf_rows(&self) -> Vec<Vec<i64>> {
        self.hnf.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
    }

    /// The lattice basis as field elements.
    pub fn basis(&self, field: &NumberField) -> Vec<FieldElement> {
        self.hnf_rows().iter().map(|r| field.from_ints(r).unwrap()).collect()
    }

    pub fn contains_coords(&self, v: &[i128]) -> bool {
        let mut w = v.to_vec();
        reduce_mod(&self.hnf, &mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        match x.integral_coords() {
            Some(c) => self.contains_coords(&c.iter().map(|&v| v as i128).collect::<Vec<_>>()),
            None => false,
        }
    }

    /// `self ⊆ other`, i.e. `other` divides `self`.
    pub fn is_contained_in(&self, other: &Ideal) -> bool {
        self.hnf.iter().all(|r| other.contains_coords(r))
    }

    pub fn mul(&self, field: &NumberField, other: &Ideal) -> Result<Ideal, FieldError> {
        let mut rows = Vec::new();
        for a in &self.hnf {
            for b in &other.hnf {
                rows.push(field.mul_int(a, b));
            }
        }
        Self::from_lattice_rows(&rows, self.degree())
    }

    /// `self + other`, the gcd of the two ideals.
    pub fn add(&self, other: &Ideal) -> Result<Ideal, FieldError> {
        let rows: Vec<Vec<i128>> = self.hnf.iter().chain(&other.hnf).cloned().collect();
        Self::from_lattice_rows(&rows, self.degree())
    }

    pub fn pow(&self, field: &NumberField, k: u32) -> Result<Ideal, FieldError> {
        let mut acc = Ideal::unit(field);
        for _ in 0..k {
            acc = acc.mul(field, self)?;
        }
        Ok(acc)
    }

    /// Valuation at a prime ideal.
    pub fn valuation(&self, field: &NumberField, p: &PrimeIdeal) -> Result<u32, FieldError> {
        let mut k = 0;
        let mut pk = p.ideal.clone();
        while self.norm % pk.norm == 0 && self.is_contained_in(&pk) {
            k += 1;
            pk = pk.mul(field, &p.ideal)?;
        }
        Ok(k)
    }

    /// Prime factorization, primes in label order.
    pub fn factor(&self, field: &NumberField) -> Result<Vec<(PrimeIdeal, u32)>, FieldError> {
        let mut out = Vec::new();
        for p in rational_prime_divisors(self.norm) {
            for prime in factor_rational_prime(field, p)? {
                let v = self.valuation(field, &prime)?;
                if v > 0 {
                    out.push((prime, v));
                }
            }
        }
        Ok(out)
    }

    /// Number of units of `O / self`.
    pub fn euler_phi(&self, field: &NumberField) -> Result<u64, FieldError> {
        let mut phi = self.norm;
        for (p, _) in self.factor(field)? {
            let np = p.norm();
            phi = phi / np * (np - 1);
        }
        Ok(phi)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{:?}", self.hnf_rows())
    }
}

pub(crate) fn rational_prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A fractional ideal `(1/den) * num` with `num` integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalIdeal {
    pub denominator: BigInt,
    pub numerator: Ideal,
    /// A generator, when the ideal was built from one.
    pub generator: Option<FieldElement>,
}

impl FractionalIdeal {
    pub fn principal(field: &NumberField, x: &FieldElement) -> Result<Self, FieldError> {
        if x.is_zero() {
            return Err(FieldError::Zero);
        }
        let den = lcm_of_denominators(x);
        let scaled = field.scale(x, &BigRational::from_integer(den.clone()));
        Ok(FractionalIdeal {
            numerator: Ideal::principal(field, &scaled)?,
            denominator: den,
            generator: Some(x.clone()),
        })
    }

    pub fn contains(&self, field: &NumberField, x: &FieldElement) -> bool {
        let scaled = field.scale(x, &BigRational::from_integer(self.denominator.clone()));
        self.numerator.contains(&scaled)
    }

    /// Absolute norm as a rational.
    pub fn norm(&self, field: &NumberField) -> BigRational {
        let d = self.denominator.pow(field.degree() as u32);
        BigRational::new(BigInt::from(self.numerator.norm()), d)
    }
}

/// The inverse different `O'`, generated by `1/f'(w)` for the monogenic basis.
pub fn inverse_different(field: &NumberField) -> FractionalIdeal {
    let g = field.inv(&field.different_generator()).expect("f'(w) is nonzero");
    FractionalIdeal::principal(field, &g).expect("nonzero")
}

/// Stable label `"p:i"`: rational prime below and index among its factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeLabel {
    pub p: u64,
    pub index: usize,
}

impl fmt::Display for PrimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.p, self.index)
    }
}

impl FromStr for PrimeLabel {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::UnknownPrime(s.to_string());
        let (p, i) = match s.split_once(':') {
            Some((p, i)) => (p, i),
            None => (s, "0"),
        };
        Ok(PrimeLabel { p: p.trim().parse().map_err(|_| bad())?, index: i.trim().parse().map_err(|_| bad())? })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdeal {
    pub ideal: Ideal,
    pub p: u64,
    pub residue_degree: u32,
    pub ramification: u32,
    pub generator: Option<FieldElement>,
    pub label: PrimeLabel,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.ideal.norm()
    }
}

/// Kummer-Dedekind factorization of `(p)`, factors sorted by HNF.
pub fn factor_rational_prime(field: &NumberField, p: u64) -> Result<Vec<PrimeIdeal>, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    let pi = p as i64;
    if field.degree() == 1 {
        let ideal = Ideal::rational(field, pi)?;
        return Ok(vec![PrimeIdeal {
            ideal,
            p,
            residue_degree: 1,
            ramification: 1,
            generator: Some(field.from_int(pi)),
            label: PrimeLabel { p, index: 0 },
        }]);
    }
    // The canonical basis is all of O, so the monogenic index is 1 and every
    // prime is admissible.
    if monogenic_index(field) % p == 0 {
        return Err(FieldError::IndexDivisor(p));
    }
    let poly = field.defining_polynomial();
    let (c0, c1) = (poly[0].rem_euclid(pi), poly[1].rem_euclid(pi));
    let roots: Vec<i64> = (0..pi)
        .filter(|&r| ((r as i128 * r as i128 + c1 as i128 * r as i128 + c0 as i128) % pi as i128) == 0)
        .collect();
    let mut factors: Vec<(Ideal, u32, u32)> = match roots.len() {
        0 => vec![(Ideal::rational(field, pi)?, 2, 1)],
        1 => vec![(Ideal::from_generators(field, &[vec![pi, 0], vec![-roots[0], 1]])?, 1, 2)],
        _ => {
            let mut v = Vec::new();
            for &r in &roots {
                v.push((Ideal::from_generators(field, &[vec![pi, 0], vec![-r, 1]])?, 1, 1));
            }
            v
        }
    };
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(factors
        .into_iter()
        .enumerate()
        .map(|(index, (ideal, f, e))| {
            let generator = find_generator(field, &ideal);
            PrimeIdeal { ideal, p, residue_degree: f, ramification: e, generator, label: PrimeLabel { p, index } }
        })
        .collect())
}

fn monogenic_index(_field: &NumberField) -> u64 {
    1
}

/// Looks up a prime by label.
pub fn prime_by_label(field: &NumberField, label: PrimeLabel) -> Result<PrimeIdeal, FieldError> {
    factor_rational_prime(field, label.p)?
        .into_iter()
        .find(|q| q.label == label)
        .ok_or_else(|| FieldError::UnknownPrime(label.to_string()))
}

/// All prime ideals of norm at most `max_norm`, ordered by (norm, label).
pub fn primes_up_to_norm(field: &NumberField, max_norm: u64) -> Vec<PrimeIdeal> {
    let mut out: Vec<PrimeIdeal> = (2..=max_norm)
        .filter(|&p| is_prime(p))
        .flat_map(|p| factor_rational_prime(field, p).unwrap())
        .filter(|q| q.norm() <= max_norm)
        .collect();
    out.sort_by_key(|q| (q.norm(), q.label));
    out
}

const GENERATOR_SEARCH_BUDGET: u64 = 2_000_000;

/// Searches for a generator of a (possibly) principal ideal. Works from the
/// unit-normalized embedding box `1 <= |x_1/x_2| < eps_0^2`; returns `None`
/// if no generator exists or the box exceeds the search budget.
pub fn find_generator(field: &NumberField, ideal: &Ideal) -> Option<FieldElement> {
    if field.degree() == 1 {
        return Some(field.from_int(ideal.hnf[0][0] as i64));
    }
    let n = ideal.norm() as f64;
    let eps = field.units().fundamental_embedding()[0];
    let w = field.embed(&field.omega().unwrap());
    let sqrt_d = w[0] - w[1];
    let x1_max = n.sqrt() * eps * (1.0 + 1e-9);
    let x2_max = n.sqrt() * (1.0 + 1e-9);
    // x = X0 + X1 w with X1 = v * c, X0 = u * a + v * b (HNF rows (a,0), (b,c)).
    let (a, b, c) = (ideal.hnf[0][0], ideal.hnf[1][0], ideal.hnf[1][1]);
    let x1_bound = (x1_max + x2_max) / sqrt_d;
    let vmax = (x1_bound / c as f64).ceil() as i128;
    let width = 2.0 * x2_max / a as f64 + 1.0;
    if (2 * vmax + 1) as f64 * width > GENERATOR_SEARCH_BUDGET as f64 {
        return None;
    }
    let target = BigRational::from_integer(BigInt::from(ideal.norm()));
    for v in -vmax..=vmax {
        let big_x1 = (v * c) as f64;
        // x_2 = X0 + X1 w_2 in [-x2_max, x2_max]
        let lo = ((-x2_max - big_x1 * w[1] - (v * b) as f64) / a as f64).floor() as i128;
        let hi = ((x2_max - big_x1 * w[1] - (v * b) as f64) / a as f64).ceil() as i128;
        for u in lo..=hi {
            let x0 = u * a + v * b;
            let x1 = v * c;
            if x0 == 0 && x1 == 0 {
                continue;
            }
            let el = field.from_ints(&[x0 as i64, x1 as i64]).ok()?;
            if field.norm(&el).abs() == target {
                return Some(el);
            }
        }
    }
    None
}

/// Enumerates the integral ideals of norm exactly `n` (degree <= 2).
pub fn ideals_of_norm(field: &NumberField, n: u64) -> Vec<Ideal> {
    if field.degree() == 1 {
        return vec![Ideal::rational(field, n as i64).unwrap()];
    }
    let mut out = Vec::new();
    // HNF rows (a, 0), (b, c) with a*c = n, 0 <= b < a; closed under w.
    for c in 1..=n {
        if n % c != 0 {
            continue;
        }
        let a = n / c;
        for b in 0..a {
            let rows = vec![vec![a as i64, 0], vec![b as i64, c as i64]];
            if let Ok(id) = Ideal::from_generators(field, &rows) {
                if id.norm() == n {
                    out.push(id);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, rat, FieldSpec};

    fn q5() -> NumberField {
        make_field(FieldSpec::RealQuadratic(5)).unwrap()
    }

    #[test]
    fn norms_of_ideals() {
        let f = q5();
        assert_eq!(Ideal::rational(&f, 3).unwrap().norm(), 9);
        let p5 = factor_rational_prime(&f, 5).unwrap();
        assert_eq!(p5.len(), 1);
        assert_eq!((p5[0].norm(), p5[0].ramification, p5[0].residue_degree), (5, 2, 1));
    }

    #[test]
    fn splitting_types_in_q_sqrt5() {
        let f = q5();
        let p2 = factor_rational_prime(&f, 2).unwrap();
        assert_eq!(p2.len(), 1);
        assert_eq!((p2[0].norm(), p2[0].residue_degree), (4, 2));
        let p11 = factor_rational_prime(&f, 11).unwrap();
        assert_eq!(p11.len(), 2);
        assert!(p11.iter().all(|q| q.norm() == 11 && q.ramification == 1));
        assert_eq!(p11[0].label.to_string(), "11:0");
        assert_eq!(p11[1].label.to_string(), "11:1");
        assert!(matches!(factor_rational_prime(&f, 15), Err(FieldError::NotPrime(15))));
    }

    #[test]
    fn generator_found_for_principal_primes() {
        let f = q5();
        for p in [5u64, 11, 19, 29, 31] {
            for q in factor_rational_prime(&f, p).unwrap() {
                let g = q.generator.clone().expect("Q(sqrt 5) has class number one");
                assert_eq!(Ideal::principal(&f, &g).unwrap(), q.ideal);
            }
        }
    }

    #[test]
    fn nonprincipal_prime_has_no_generator() {
        // Q(sqrt 10) has class number 2; the prime above 2 is not principal.
        let f = make_field(FieldSpec::RealQuadratic(10)).unwrap();
        let p2 = factor_rational_prime(&f, 2).unwrap();
        assert_eq!(p2.len(), 1);
        assert!(p2[0].generator.is_none());
        let p3 = factor_rational_prime(&f, 3).unwrap();
        assert!(p3.iter().all(|q| q.generator.is_none()));
    }

    #[test]
    fn inverse_different_examples() {
        let q = make_field(FieldSpec::Rational).unwrap();
        let d = inverse_different(&q);
        assert_eq!(d.numerator, Ideal::unit(&q));
        assert_eq!(d.denominator, BigInt::from(1));

        let f = q5();
        let d = inverse_different(&f);
        // 1/sqrt5 = (2w - 1)/5
        let g = f.parse_element("-1/5+2/5*w").unwrap();
        assert_eq!(d.generator.as_ref().unwrap(), &g);
        assert_eq!(d.norm(&f), BigRational::new(1.into(), 5.into()));

        let f2 = make_field(FieldSpec::RealQuadratic(2)).unwrap();
        let d2 = inverse_different(&f2);
        assert_eq!(d2.generator.as_ref().unwrap(), &f2.parse_element("1/4*w").unwrap());
    }

    #[test]
    fn inverse_different_is_trace_dual() {
        for m in [2, 3, 5, 13] {
            let f = make_field(FieldSpec::RealQuadratic(m)).unwrap();
            let od = inverse_different(&f);
            let g = od.generator.clone().unwrap();
            for num in -6..=6 {
                for den in [1, 2, 3, 4, 5, 8, 13, 52] {
                    for k in -3..=3 {
                        let x = f.element(vec![BigRational::new(num.into(), den.into()), rat(k)]).unwrap();
                        let x = f.mul(&x, &f.from_int(1));
                        let dual = (0..2).all(|i| {
                            let mut e = f.from_int(0);
                            e.coords[i] = rat(1);
                            f.trace(&f.mul(&x, &e)).is_integer()
                        });
                        assert_eq!(dual, od.contains(&f, &x), "m={m} x={:?}", x);
                    }
                }
                let y = f.mul(&g, &f.from_int(num));
                assert!(od.contains(&f, &y));
            }
        }
    }

    #[test]
    fn ideal_enumeration_by_norm() {
        let f = q5();
        // norm 4: only (2); norm 11: two primes; norm 5: one prime; norm 6: none (2 inert)
        assert_eq!(ideals_of_norm(&f, 4).len(), 1);
        assert_eq!(ideals_of_norm(&f, 11).len(), 2);
        assert_eq!(ideals_of_norm(&f, 5).len(), 1);
        assert_eq!(ideals_of_norm(&f, 6).len(), 0);
        assert_eq!(ideals_of_norm(&f, 121).len(), 3);
    }

    #[test]
    fn factor_and_phi() {
        let f = q5();
        let c = Ideal::rational(&f, 6).unwrap();
        let fac = c.factor(&f).unwrap();
        assert_eq!(fac.len(), 2);
        assert_eq!(c.euler_phi(&f).unwrap(), 3 * 8);
        let p5 = factor_rational_prime(&f, 5).unwrap().remove(0);
        assert_eq!(Ideal::rational(&f, 25).unwrap().valuation(&f, &p5).unwrap(), 4);
    }
}
