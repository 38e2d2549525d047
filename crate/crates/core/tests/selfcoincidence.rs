use nielsen_core::projective::Field;
use nielsen_core::selfcoincidence::{
    fiber_projection_self_loose, quaternion_counterexample, residual_not_parallel, residual_with_witness,
    sample_unit_vector, selfmap_s, self_loose, KVector, Quaternion, Verdict,
};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn section_congruence(field: Field, n_prime: u32) -> bool {
    match field {
        Field::R | Field::C => n_prime % 2 == 1,
        Field::H => n_prime % 24 == 23,
    }
}

#[test]
fn looseness_truth_table() {
    let mut cases = 0;
    for field in Field::ALL {
        for n_prime in 1..=48 {
            let fiber = fiber_projection_self_loose(field, n_prime).unwrap();
            let expected = if section_congruence(field, n_prime) { Verdict::Loose } else { Verdict::NotLoose };
            assert_eq!(fiber.verdict, expected, "{field}P({n_prime})");
            for m in 1..=60 {
                let n = field.d() * n_prime;
                let region = section_congruence(field, n_prime) || n <= 3;
                let expected = if region && (m, n) != (2, 2) { Verdict::Loose } else { Verdict::Unknown };
                assert_eq!(self_loose(field, m, n_prime).verdict, expected, "{field}P({n_prime}), m = {m}");
                if fiber.is_loose() && (m, n) != (2, 2) {
                    assert!(self_loose(field, m, n_prime).is_loose());
                }
                cases += 1;
            }
        }
    }
    assert!(cases >= 144);
}

#[test]
fn residual_positive_on_commutative_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for field in [Field::R, Field::C] {
        for n_prime in [1, 3, 5] {
            for _ in 0..1000 {
                let x = sample_unit_vector(&mut rng, field, n_prime);
                assert!(x.norm2().is_one());
                let s = selfmap_s(&x).unwrap();
                assert_eq!(s.norm2(), x.norm2());
                assert!(residual_not_parallel(&x).unwrap() > BigRational::zero(), "{x}");
            }
        }
    }
}

#[test]
fn real_examples() {
    let x = KVector::new(Field::R, vec![Quaternion::one(), Quaternion::zero()]).unwrap();
    let s = selfmap_s(&x).unwrap();
    assert_eq!(s, KVector::new(Field::R, vec![Quaternion::zero(), Quaternion::one()]).unwrap());
    assert!(residual_not_parallel(&x).unwrap().is_one());
    let ss = selfmap_s(&s).unwrap();
    assert_eq!(ss, KVector::new(Field::R, vec![-&Quaternion::one(), Quaternion::zero()]).unwrap());
}

#[test]
fn complex_example_matches_formula() {
    let i = Quaternion::i();
    let one_plus_i = &Quaternion::one() + &i;
    let x = KVector::new(Field::C, vec![i.clone(), one_plus_i.clone()]).unwrap();
    let s = selfmap_s(&x).unwrap();
    let expected = KVector::new(Field::C, vec![-&one_plus_i.conj(), i.conj()]).unwrap();
    assert_eq!(s, expected);
}

#[test]
fn quaternionic_counterexample() {
    let (x, lambda) = quaternion_counterexample();
    assert_eq!(lambda, Quaternion::i());
    assert!(lambda.norm2().is_one());
    let s = selfmap_s(&x).unwrap();
    assert!(s.sub(&x.left_mul(&lambda)).is_zero());
    let (r, w) = residual_with_witness(&x).unwrap();
    assert!(r.is_zero());
    assert_eq!(w, Quaternion::i());
    let padded = KVector::new(Field::H, vec![Quaternion::j(), Quaternion::k(), Quaternion::zero(), Quaternion::zero()]).unwrap();
    let s = selfmap_s(&padded).unwrap();
    let expected = KVector::new(Field::H, vec![Quaternion::k(), -&Quaternion::j(), Quaternion::zero(), Quaternion::zero()]).unwrap();
    assert_eq!(s, expected);
}

#[test]
fn even_n_prime_and_zero_vector_are_rejected() {
    let x = KVector::new(Field::R, vec![Quaternion::one(), Quaternion::zero(), Quaternion::zero()]).unwrap();
    assert!(selfmap_s(&x).is_err());
    let z = KVector::new(Field::C, vec![Quaternion::zero(), Quaternion::zero()]).unwrap();
    assert!(residual_not_parallel(&z).is_err());
}
