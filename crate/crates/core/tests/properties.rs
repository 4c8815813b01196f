use proptest::prelude::*;
use salemfield::arith::{gcd, totient};
use salemfield::class::{find_primitive_root, mult_character, Classifier, LogTable};
use salemfield::poly::{poly_gcd, totient_poly, PolyQ};
use salemfield::spectral::{
    bilinear_bound_check, dft_field, dft_zmod, inverse_dft_zmod, Domain, IndicatorSet, ROUND_TRIP_TOLERANCE,
};
use salemfield::{additive_character, build_field, Complex64, FieldSpec, DEFAULT_CAP};

const FIELDS: [(u64, u32, u32); 9] =
    [(2, 1, 3), (2, 1, 8), (3, 1, 4), (2, 2, 3), (5, 1, 3), (3, 2, 2), (7, 1, 2), (13, 1, 1), (4093, 1, 1)];

fn spec_at(i: usize) -> FieldSpec {
    let (p, k, n) = FIELDS[i % FIELDS.len()];
    build_field(p, k, n, None).unwrap()
}

fn field_and_indices(count: usize) -> impl Strategy<Value = (FieldSpec, Vec<u64>)> {
    (0..FIELDS.len()).prop_flat_map(move |i| {
        let spec = spec_at(i);
        let size = spec.order();
        (Just(spec), prop::collection::vec(0..size, count))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms((spec, ix) in field_and_indices(3)) {
        let [a, b, c] = [0, 1, 2].map(|i| spec.from_index(ix[i]));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!(&a * &spec.one(), a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
            prop_assert!(a.pow(spec.order() - 1).is_one());
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn frobenius_is_an_automorphism_fixing_the_subfield((spec, ix) in field_and_indices(2)) {
        let [a, b] = [0, 1].map(|i| spec.from_index(ix[i]));
        prop_assert_eq!((&a * &b).frobenius_q(), &a.frobenius_q() * &b.frobenius_q());
        prop_assert_eq!((&a + &b).frobenius_q(), &a.frobenius_q() + &b.frobenius_q());
        let mut c = a.clone();
        for _ in 0..spec.n() {
            c = c.frobenius_q();
        }
        prop_assert_eq!(&c, &a);
        prop_assert_eq!(a.frobenius_q() == a, spec.in_subfield(&a));
        prop_assert_eq!(a.trace_abs(), a.trace_abs_direct());
    }

    #[test]
    fn classification_is_invariant_under_conjugation((spec, ix) in field_and_indices(1)) {
        let classifier = Classifier::new(&spec).unwrap();
        let a = spec.from_index(ix[0]);
        let b = a.frobenius_q();
        prop_assert_eq!(classifier.is_primitive(&a).unwrap(), classifier.is_primitive(&b).unwrap());
        prop_assert_eq!(classifier.is_normal(&a).unwrap(), classifier.is_normal(&b).unwrap());
        prop_assert_eq!(classifier.frobenius_order(&a).unwrap(), classifier.frobenius_order(&b).unwrap());
        if !a.is_zero() {
            prop_assert_eq!(classifier.multiplicative_order(&a).unwrap(), classifier.multiplicative_order(&b).unwrap());
        }
    }

    #[test]
    fn integer_totient_is_multiplicative(a in 1u64..5000, b in 1u64..5000) {
        prop_assume!(gcd(a, b) == 1);
        prop_assert_eq!(totient(a * b), totient(a) * totient(b));
    }

    #[test]
    fn polynomial_totient_is_multiplicative(
        field in 0usize..4,
        g in prop::collection::vec(any::<u32>(), 1..5),
        h in prop::collection::vec(any::<u32>(), 1..5),
    ) {
        let spec = [(2, 1), (3, 1), (2, 2), (5, 1)].map(|(p, k)| build_field(p, k, 1, None).unwrap())[field].clone();
        let monic = |raw: &[u32]| {
            let sub = spec.subfield().indices();
            let mut coeffs: Vec<_> = raw.iter().map(|&r| spec.from_index(sub[r as usize % sub.len()])).collect();
            coeffs.push(spec.one());
            PolyQ::from_coeffs(&spec, coeffs).unwrap()
        };
        let (g, h) = (monic(&g), monic(&h));
        prop_assume!(poly_gcd(&g, &h).unwrap().is_one());
        let gh = g.mul(&h).unwrap();
        prop_assert_eq!(totient_poly(&gh).unwrap(), totient_poly(&g).unwrap() * totient_poly(&h).unwrap());
    }

    #[test]
    fn bilinear_bound_on_random_sets(
        (spec, ix) in field_and_indices(1),
        u in prop::collection::vec(any::<bool>(), 16..=16),
        v in prop::collection::vec(any::<bool>(), 16..=16),
    ) {
        prop_assume!(spec.order() <= 256);
        let size = spec.order();
        let pick = |mask: &[bool]| {
            let members: Vec<u64> = (0..size).filter(|&i| mask[(i % 16) as usize] ^ (i % 3 == 0)).collect();
            IndicatorSet::from_members(Domain::Field(spec.clone()), members).unwrap()
        };
        let (u, v) = (pick(&u), pick(&v));
        prop_assume!(u.cardinality() > 0 && v.cardinality() > 0);
        let beta = spec.from_index(ix[0].max(1));
        prop_assert!(bilinear_bound_check(&u, &v, &beta).unwrap().check.pass);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn transform_round_trip(values in prop::collection::vec(-1.0f64..1.0, 2..=8192)) {
        let f: Vec<Complex64> = values.chunks(2).map(|c| Complex64::new(c[0], *c.get(1).unwrap_or(&0.0))).collect();
        let back = inverse_dft_zmod(&dft_zmod(&f).coeffs);
        let worst = back.iter().zip(&f).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(worst <= ROUND_TRIP_TOLERANCE, "m = {}, error {worst:e}", f.len());
    }

    #[test]
    fn real_functions_have_conjugate_symmetric_spectra(values in prop::collection::vec(-1.0f64..1.0, 1..600)) {
        let f: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let m = f.len();
        let coeffs = dft_zmod(&f).coeffs;
        for s in 0..m {
            let mirror = coeffs[(m - s) % m].conj();
            prop_assert!((coeffs[s] - mirror).norm() < 1e-9 * m as f64);
        }
    }
}

#[test]
fn additive_characters_are_orthogonal() {
    for i in 0..FIELDS.len() - 1 {
        let spec = spec_at(i);
        for beta in spec.elements().step_by(3) {
            let total: Complex64 = spec.elements().map(|a| additive_character(&beta, &a).unwrap()).sum();
            let expected = if beta.is_zero() { spec.order() as f64 } else { 0.0 };
            assert!((total - expected).norm() < 1e-9, "{beta} in F_{}", spec.order());
        }
    }
}

#[test]
fn multiplicative_characters_are_orthogonal() {
    for i in 0..FIELDS.len() {
        let spec = spec_at(i);
        let table = LogTable::new(&find_primitive_root(&spec), DEFAULT_CAP).unwrap();
        let order = spec.order() - 1;
        for d in salemfield::arith::divisors(order).into_iter().filter(|&d| d > 1).take(4) {
            let total: Complex64 = spec.elements().skip(1).map(|a| mult_character(d, 1, &table, &a).unwrap()).sum();
            assert!(total.norm() < 1e-6 * order as f64, "d = {d} in F_{}", spec.order());
        }
    }
}

#[test]
fn absolute_trace_is_balanced() {
    for i in 0..FIELDS.len() {
        let spec = spec_at(i);
        let mut hits = vec![0u64; spec.p() as usize];
        for a in spec.elements() {
            hits[a.trace_abs() as usize] += 1;
        }
        let each = spec.order() / spec.p();
        assert!(hits.iter().all(|&h| h == each), "F_{}: {hits:?}", spec.order());
    }
}

#[test]
fn field_transform_matches_character_sums() {
    let spec = build_field(3, 1, 2, None).unwrap();
    let f: Vec<Complex64> = (0..9).map(|i| Complex64::new(i as f64, (i * i % 5) as f64)).collect();
    let spectrum = dft_field(&spec, &f, DEFAULT_CAP).unwrap();
    for beta in spec.elements() {
        let direct: Complex64 = spec
            .elements()
            .map(|a| f[a.index() as usize] * additive_character(&beta, &a).unwrap())
            .sum();
        assert!((spectrum.coeffs[beta.index() as usize] - direct).norm() < 1e-9);
    }
    assert!(spectrum.plancherel_error() < 1e-9);
}
