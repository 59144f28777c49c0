use std::collections::HashMap;

use num_integer::Integer;
use num_rational::BigRational;
use rayon::prelude::*;

use super::{HeckeError, LocalHeckeElement};
use crate::field::{is_prime, FieldElement, FieldError, NumberField, PrimeIdeal, PrimeLabel, ResidueRing};

/// Row-major 2×2 matrix over the field.
pub type Mat2 = [[FieldElement; 2]; 2];

const PAIR_LIMIT: u64 = 1_000_000;

/// Left coset representatives `[[π^{k-l}, b π^{-k}], [0, π^{l-k}]]` of
/// `Δ(𝔭^{2k})`, for `l = 0..=2k` and `b` over `O / 𝔭^l`.
pub fn coset_representatives(field: &NumberField, prime: &PrimeIdeal, k: usize) -> Result<Vec<Mat2>, HeckeError> {
    if k == 0 {
        return Err(HeckeError::ZeroExponent);
    }
    let pi = prime.generator.as_ref().ok_or(HeckeError::NoGenerator(prime.label))?;
    let pow = |e: i64| field.pow(pi, e);
    let pi_neg_k = pow(-(k as i64))?;
    let mut out = Vec::new();
    let mut modulus = crate::field::Ideal::unit(field);
    for l in 0..=2 * k {
        if l > 0 {
            modulus = modulus.mul(field, &prime.ideal)?;
        }
        let ring = ResidueRing::new(field, &modulus);
        let top = pow(k as i64 - l as i64)?;
        let bottom = pow(l as i64 - k as i64)?;
        for b in ring.enumerate() {
            let b = field.from_ints(&b)?;
            out.push([[top.clone(), field.mul(&b, &pi_neg_k)], [field.zero(), bottom.clone()]]);
        }
    }
    Ok(out)
}

/// Whether `g h^{-1}` lies in `SL₂(Z_(p))`, for matrices over `Q`.
pub fn left_equivalent_rational(g: &Mat2, h: &Mat2, p: u64) -> bool {
    let e = |m: &Mat2, i: usize, j: usize| m[i][j].coords()[0].clone();
    let det_h = e(h, 0, 0) * e(h, 1, 1) - e(h, 0, 1) * e(h, 1, 0);
    let inv = [[e(h, 1, 1) / &det_h, -e(h, 0, 1) / &det_h], [-e(h, 1, 0) / &det_h, e(h, 0, 0) / &det_h]];
    let p = num_bigint::BigInt::from(p);
    let integral = |x: &BigRational| x.denom().mod_floor(&p) != num_bigint::BigInt::from(0);
    (0..2).all(|i| {
        (0..2).all(|j| {
            let x: BigRational = (0..2).map(|t| e(g, i, t) * &inv[t][j]).sum();
            integral(&x)
        })
    })
}

/// `(a, b, d)` with `[[a, b], [0, d]] = γ m`, `γ in SL₂(Z)`, `a > 0`,
/// `0 <= b < |d|`. `None` for singular `m`.
pub fn hermite_form_2x2(m: [[i128; 2]; 2]) -> Option<(i128, i128, i128)> {
    let [mut r0, mut r1] = m;
    while r1[0] != 0 {
        let q = Integer::div_floor(&r0[0], &r1[0]);
        r0 = [r0[0] - q * r1[0], r0[1] - q * r1[1]];
        // (r0, r1) -> (r1, -r0) has determinant 1
        let t = r0;
        r0 = r1;
        r1 = [-t[0], -t[1]];
    }
    if r0[0] == 0 || r1[1] == 0 {
        return None;
    }
    if r0[0] < 0 {
        r0 = [-r0[0], -r0[1]];
        r1 = [-r1[0], -r1[1]];
    }
    let d = r1[1];
    Some((r0[0], r0[1].rem_euclid(d.abs()), d))
}

/// Outcome of the brute-force product `T(p^{2k}) * T(p^{2m})` over `Q`.
#[derive(Clone, Debug)]
pub struct ConvolutionTally {
    pub product: LocalHeckeElement,
    /// Multiplicity of each left coset in the primitive class `j`.
    pub class_multiplicities: Vec<u64>,
    /// Number of distinct left cosets seen in class `j`.
    pub class_sizes: Vec<u64>,
    pub pairs: u64,
}

fn scaled_reps(p: i128, k: u32) -> Vec<[[i128; 2]; 2]> {
    let mut out = Vec::new();
    for l in 0..=2 * k {
        for b in 0..p.pow(l) {
            out.push([[p.pow(2 * k - l), b], [0, p.pow(l)]]);
        }
    }
    out
}

fn mat_mul(a: &[[i128; 2]; 2], b: &[[i128; 2]; 2]) -> [[i128; 2]; 2] {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

fn valuation(mut x: i128, p: i128) -> u32 {
    let mut v = 0;
    while x != 0 && x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Multiplies every pair of left coset representatives of `Δ(p^{2k})` and
/// `Δ(p^{2m})` over `Q`, tallies the products by Hermite form, and reads off
/// the coefficients of `T(p^{2n})`.
pub fn brute_force_convolution(p: u64, k: u32, m: u32) -> Result<ConvolutionTally, HeckeError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p).into());
    }
    let count = |e: u32| (0..=2 * e).map(|l| p.saturating_pow(l)).fold(0u64, u64::saturating_add);
    let pairs = count(k).saturating_mul(count(m));
    if pairs > PAIR_LIMIT {
        return Err(HeckeError::SizeGuard { pairs, limit: PAIR_LIMIT });
    }
    let pw = p as i128;
    let left = scaled_reps(pw, k);
    let right = scaled_reps(pw, m);
    let tally: HashMap<(i128, i128, i128), u64> = left
        .par_iter()
        .fold(HashMap::new, |mut acc, g| {
            for h in &right {
                let key = hermite_form_2x2(mat_mul(g, h)).expect("nonsingular");
                *acc.entry(key).or_insert(0) += 1;
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (key, c) in b {
                *a.entry(key).or_insert(0) += c;
            }
            a
        });

    let top = (k + m) as usize;
    let mut mult: Vec<Option<u64>> = vec![None; top + 1];
    let mut sizes = vec![0u64; top + 1];
    for (&(a, b, d), &c) in &tally {
        let content = valuation(a.gcd(&b).gcd(&d), pw) as usize;
        let j = top - content;
        sizes[j] += 1;
        match mult[j] {
            None => mult[j] = Some(c),
            Some(prev) if prev != c => return Err(HeckeError::NonConstantMultiplicity(j as u32)),
            _ => {}
        }
    }
    let class_multiplicities: Vec<u64> = mult.into_iter().map(|x| x.unwrap_or(0)).collect();
    let coeffs = (0..=top)
        .map(|n| {
            let next = class_multiplicities.get(n + 1).copied().unwrap_or(0) as i64;
            BigRational::from_integer((class_multiplicities[n] as i64 - next).into())
        })
        .collect();
    Ok(ConvolutionTally {
        product: LocalHeckeElement::new(PrimeLabel { p, index: 0 }, p, coeffs),
        class_multiplicities,
        class_sizes: sizes,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{factor_rational_prime, make_field, FieldSpec};

    fn rational_prime(q: &NumberField, p: u64) -> PrimeIdeal {
        factor_rational_prime(q, p).unwrap().remove(0)
    }

    #[test]
    fn coset_counts_over_q() {
        let q = make_field(FieldSpec::Rational).unwrap();
        for (p, k, n) in [(2u64, 1usize, 7usize), (3, 1, 13), (2, 2, 31)] {
            let reps = coset_representatives(&q, &rational_prime(&q, p), k).unwrap();
            assert_eq!(reps.len(), n);
            for i in 0..reps.len() {
                for j in 0..i {
                    assert!(!left_equivalent_rational(&reps[i], &reps[j], p), "p = {p}: {i} ~ {j}");
                }
                assert!(left_equivalent_rational(&reps[i], &reps[i], p));
            }
        }
    }

    #[test]
    fn coset_counts_over_quadratic_field() {
        let f = make_field(FieldSpec::RealQuadratic(5)).unwrap();
        let p2 = factor_rational_prime(&f, 2).unwrap().remove(0);
        assert_eq!(coset_representatives(&f, &p2, 1).unwrap().len(), 1 + 4 + 16);
        let f10 = make_field(FieldSpec::RealQuadratic(10)).unwrap();
        let p = factor_rational_prime(&f10, 3).unwrap().remove(0);
        assert!(matches!(coset_representatives(&f10, &p, 1), Err(HeckeError::NoGenerator(_))));
    }

    #[test]
    fn hermite_2x2() {
        assert_eq!(hermite_form_2x2([[2, 1], [4, 6]]), Some((2, 1, 4)));
        assert_eq!(hermite_form_2x2([[0, 1], [-1, 0]]), Some((1, 0, 1)));
        assert_eq!(hermite_form_2x2([[1, 2], [2, 4]]), None);
        let (a, b, d) = hermite_form_2x2([[4, 7], [2, 5]]).unwrap();
        assert_eq!(a * d, 6);
        assert!(b >= 0 && b < d);
    }

    fn coeffs(t: &ConvolutionTally) -> Vec<i64> {
        t.product.coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn brute_force_small_products() {
        assert_eq!(coeffs(&brute_force_convolution(2, 1, 1).unwrap()), vec![4, 2, 1]);
        assert_eq!(coeffs(&brute_force_convolution(3, 1, 1).unwrap()), vec![9, 3, 1]);
        assert_eq!(coeffs(&brute_force_convolution(2, 1, 0).unwrap()), vec![0, 1]);
    }

    #[test]
    fn class_sizes_match_double_coset_index() {
        let t = brute_force_convolution(3, 1, 2).unwrap();
        for (j, &s) in t.class_sizes.iter().enumerate() {
            let expected = if j == 0 { 1 } else { 3u64.pow(2 * j as u32) + 3u64.pow(2 * j as u32 - 1) };
            assert_eq!(s, expected, "class {j}");
        }
    }

    #[test]
    fn size_guard() {
        assert!(matches!(brute_force_convolution(97, 2, 2), Err(HeckeError::SizeGuard { .. })));
        assert!(brute_force_convolution(4, 1, 1).is_err());
    }
}
