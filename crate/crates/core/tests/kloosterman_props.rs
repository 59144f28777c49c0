use hilbert_hecke::field::{inverse_different, make_field, FieldElement, FieldSpec, Ideal, NumberField, ResidueRing};
use hilbert_hecke::kloosterman::{
    delta_term, eval, symmetry_check, unit_pair_count, CharacterGenerator, DirichletCharacter, KloostermanQuery,
};
use num_complex::Complex64;
use num_integer::Integer;
use proptest::prelude::*;

fn dual_element(field: &NumberField, x: &[i64]) -> FieldElement {
    let g = inverse_different(field).generator.expect("quadratic and rational inverse differents are principal");
    field.mul(&g, &field.from_ints(x).unwrap())
}

fn characters(field: &NumberField) -> Vec<DirichletCharacter> {
    match field.degree() {
        1 => vec![
            DirichletCharacter::trivial(field, &Ideal::unit(field)),
            DirichletCharacter::from_generators(
                field,
                &Ideal::rational(field, 4).unwrap(),
                &[CharacterGenerator { unit: vec![3], order: 2, exponent: 1 }],
            )
            .unwrap(),
            DirichletCharacter::from_generators(
                field,
                &Ideal::rational(field, 7).unwrap(),
                &[CharacterGenerator { unit: vec![3], order: 6, exponent: 1 }],
            )
            .unwrap(),
        ],
        _ => vec![
            DirichletCharacter::trivial(field, &Ideal::unit(field)),
            DirichletCharacter::from_generators(
                field,
                &Ideal::rational(field, 3).unwrap(),
                &[CharacterGenerator { unit: vec![0, 1], order: 8, exponent: 3 }],
            )
            .unwrap(),
        ],
    }
}

fn level_generator(field: &NumberField, chi: &DirichletCharacter) -> FieldElement {
    let n = chi.modulus().norm();
    let root = (1..=n).find(|k| k * k == n).map(|k| k as i64);
    match (field.degree(), root) {
        (1, _) => field.from_int(n as i64),
        (_, Some(k)) if *chi.modulus() == Ideal::rational(field, k).unwrap() => field.from_int(k),
        _ => field.one(),
    }
}

fn query_strategy() -> impl Strategy<Value = (u8, usize, Vec<i64>, Vec<i64>, Vec<i64>)> {
    (
        0u8..2,
        0usize..3,
        prop::collection::vec(-6i64..=6, 2),
        prop::collection::vec(-6i64..=6, 2),
        prop::collection::vec(-5i64..=5, 2),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn conjugation_symmetries((which, chi_idx, r, rp, c) in query_strategy()) {
        let field = if which == 0 {
            make_field(FieldSpec::Rational).unwrap()
        } else {
            make_field(FieldSpec::RealQuadratic(5)).unwrap()
        };
        let d = field.degree();
        let chis = characters(&field);
        let chi = chis[chi_idx % chis.len()].clone();
        let c_base = field.from_ints(&c[..d]).unwrap();
        prop_assume!(!c_base.is_zero());
        let c = field.mul(&c_base, &level_generator(&field, &chi));
        prop_assume!(Ideal::principal(&field, &c).unwrap().norm() <= 400);
        let r = dual_element(&field, &r[..d]);
        let rp = dual_element(&field, &rp[..d]);
        let q = KloostermanQuery::new(&field, c, r, rp, chi).unwrap();
        let report = symmetry_check(&field, &q).unwrap();
        prop_assert!(report.holds, "{report:?}");
    }
}

#[test]
fn trivial_bound_and_unit_count() {
    for field in [make_field(FieldSpec::Rational).unwrap(), make_field(FieldSpec::RealQuadratic(5)).unwrap()] {
        let chi = DirichletCharacter::trivial(&field, &Ideal::unit(&field));
        for x in 1..25i64 {
            let mut coords = vec![x; field.degree()];
            coords[0] = x + 1;
            let c = field.from_ints(&coords).unwrap();
            let ideal = Ideal::principal(&field, &c).unwrap();
            let ring = ResidueRing::new(&field, &ideal);
            let count = unit_pair_count(&field, &c).unwrap();
            assert_eq!(count as usize, ring.unit_count());
            let r = dual_element(&field, &vec![1; field.degree()]);
            let q = KloostermanQuery::new(&field, c, r.clone(), r, chi.clone()).unwrap();
            assert!(eval(&field, &q).unwrap().norm() <= count as f64 + 1e-9);
        }
    }
}

fn rational_sum(m: i64, n: i64, c: i64) -> Complex64 {
    let q = make_field(FieldSpec::Rational).unwrap();
    let chi = DirichletCharacter::trivial(&q, &Ideal::unit(&q));
    eval(&q, &KloostermanQuery::new(&q, q.from_int(c), q.from_int(m), q.from_int(n), chi).unwrap()).unwrap()
}

fn inverse_mod(a: i64, m: i64) -> i64 {
    (0..m).find(|x| (a * x).rem_euclid(m) == 1 % m).unwrap()
}

#[test]
fn twisted_multiplicativity() {
    for c1 in 2..=14i64 {
        for c2 in 2..=14i64 {
            if c1 * c2 > 200 || c1.gcd(&c2) != 1 {
                continue;
            }
            for (m, n) in [(1, 1), (2, 5), (3, 4)] {
                let lhs = rational_sum(m, n, c1 * c2);
                let i2 = inverse_mod(c2, c1);
                let i1 = inverse_mod(c1, c2);
                let rhs = rational_sum(m * i2 * i2, n, c1) * rational_sum(m * i1 * i1, n, c2);
                assert!((lhs - rhs).norm() < 1e-9, "c1 = {c1}, c2 = {c2}, (m, n) = ({m}, {n})");
            }
        }
    }
}

#[test]
fn shift_invariance() {
    let f = make_field(FieldSpec::RealQuadratic(5)).unwrap();
    let chi = DirichletCharacter::trivial(&f, &Ideal::unit(&f));
    for (c, r, rp, shift) in [([3, 1], [1, 0], [2, 1], [1, 1]), ([7, 0], [0, 1], [1, -1], [-2, 3]), ([4, 3], [2, 2], [1, 0], [0, 1])] {
        let c = f.from_ints(&c).unwrap();
        let r = dual_element(&f, &r);
        let rp = dual_element(&f, &rp);
        let shifted = f.add(&r, &f.mul(&c, &dual_element(&f, &shift)));
        let base = eval(&f, &KloostermanQuery::new(&f, c.clone(), r, rp.clone(), chi.clone()).unwrap()).unwrap();
        let moved = eval(&f, &KloostermanQuery::new(&f, c, shifted, rp, chi.clone()).unwrap()).unwrap();
        assert!((base - moved).norm() < 1e-9);
    }
}

#[test]
fn delta_symmetric_and_vanishing() {
    for field in [make_field(FieldSpec::Rational).unwrap(), make_field(FieldSpec::RealQuadratic(5)).unwrap()] {
        let chi = DirichletCharacter::trivial(&field, &Ideal::unit(&field));
        let xi = vec![0u8; field.degree()];
        for a in 1..8i64 {
            for b in 1..8i64 {
                let r = dual_element(&field, &vec![a; field.degree()]);
                let rp = dual_element(&field, &vec![b; field.degree()]);
                let d1 = delta_term(&field, &r, &rp, &xi, &chi).unwrap();
                let d2 = delta_term(&field, &rp, &r, &xi, &chi).unwrap();
                assert!((d1 - d2).norm() < 1e-15);
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((d1.re - expected).abs() < 1e-15, "a = {a}, b = {b}");
            }
        }
    }
}
