use hilbert_hecke::field::PrimeLabel;
use hilbert_hecke::hecke::{brute_force_convolution, LocalHeckeElement, SymLaurentPoly};
use num_rational::BigRational;
use proptest::prelude::*;

const NORMS: [u64; 5] = [2, 3, 4, 5, 9];

fn element(norm: u64, coeffs: Vec<i64>) -> LocalHeckeElement {
    LocalHeckeElement::from_ints(PrimeLabel { p: 2, index: 0 }, norm, &coeffs)
}

fn coeff_vec() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-9i64..=9, 1..=4)
}

/// Dense Laurent product of the images, independent of `SymLaurentPoly::mul`.
fn dense_product(a: &SymLaurentPoly, b: &SymLaurentPoly) -> Vec<BigRational> {
    let (x, y) = (a.to_dense(), b.to_dense());
    let mut out = vec![BigRational::from_integer(0.into()); x.len() + y.len() - 1];
    for (i, u) in x.iter().enumerate() {
        for (j, v) in y.iter().enumerate() {
            out[i + j] += u * v;
        }
    }
    out
}

proptest! {
    #[test]
    fn laurent_map_is_multiplicative(n in prop::sample::select(NORMS.to_vec()), a in coeff_vec(), b in coeff_vec()) {
        let (a, b) = (element(n, a), element(n, b));
        let lhs = a.multiply(&b).unwrap().to_sym_laurent();
        let rhs = a.to_sym_laurent().mul(&b.to_sym_laurent());
        prop_assert_eq!(&lhs, &rhs);
        let dense = dense_product(&a.to_sym_laurent(), &b.to_sym_laurent());
        prop_assert_eq!(SymLaurentPoly::from_dense(&dense).unwrap(), lhs);
    }

    #[test]
    fn laurent_roundtrip(n in prop::sample::select(NORMS.to_vec()), a in coeff_vec()) {
        let a = element(n, a);
        let back = LocalHeckeElement::from_sym_laurent(a.prime(), n, &a.to_sym_laurent());
        prop_assert_eq!(back, a);
    }

    #[test]
    fn commutative_and_associative(
        n in prop::sample::select(NORMS.to_vec()),
        a in coeff_vec(), b in coeff_vec(), c in coeff_vec(),
    ) {
        let (a, b, c) = (element(n, a), element(n, b), element(n, c));
        prop_assert_eq!(a.multiply(&b).unwrap(), b.multiply(&a).unwrap());
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn brute_force_matches_relation() {
    for (p, k, m) in [(2u64, 1u32, 1u32), (3, 1, 1), (5, 1, 1), (2, 1, 2), (2, 2, 1), (3, 0, 1)] {
        let tally = brute_force_convolution(p, k, m).unwrap();
        let a = LocalHeckeElement::basis(PrimeLabel { p, index: 0 }, p, k as usize);
        let b = LocalHeckeElement::basis(PrimeLabel { p, index: 0 }, p, m as usize);
        assert_eq!(tally.product, a.multiply(&b).unwrap(), "p = {p}, k = {k}, m = {m}");
    }
}

#[test]
fn brute_force_documented_products() {
    let as_ints = |p, k, m| -> Vec<i64> {
        brute_force_convolution(p, k, m)
            .unwrap()
            .product
            .coeffs()
            .iter()
            .map(|c| c.to_integer().try_into().unwrap())
            .collect()
    };
    assert_eq!(as_ints(2, 1, 1), vec![4, 2, 1]);
    assert_eq!(as_ints(3, 1, 1), vec![9, 3, 1]);
    assert_eq!(as_ints(2, 1, 0), vec![0, 1]);
}
