use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sympinv::classify::Classifier;
use sympinv::linalg::{invariant_factors, Mat};
use sympinv::poly::{factorize, is_irreducible};
use sympinv::symplectic::{is_symplectic, random_symplectic, SymplecticElement, SymplecticSpace};
use sympinv::{Field, Poly, Tri};

fn field(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn primes() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11])
}

fn monic(p: u64, coeffs: &[i64]) -> Poly {
    let mut c = coeffs.to_vec();
    c.push(1);
    Poly::from_i64s(field(p), &c)
}

fn random_element(p: u64, dim: usize, seed: u64) -> SymplecticElement {
    let space = SymplecticSpace::standard(field(p), dim).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = random_symplectic(&space, &mut rng, 3 * dim);
    SymplecticElement::new(m, space).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorization_round_trips(p in primes(), coeffs in prop::collection::vec(0i64..11, 1..9)) {
        let f = monic(p, &coeffs);
        let fac = factorize(&f).unwrap();
        prop_assert_eq!(fac.product(), f);
        for (g, e) in &fac.factors {
            prop_assert!(*e >= 1);
            prop_assert!(g.is_monic());
            prop_assert!(is_irreducible(g).unwrap());
        }
    }

    #[test]
    fn dickson_transform_inverts(p in primes(), coeffs in prop::collection::vec(0i64..11, 0..5), lambda in 1i64..11) {
        let f = monic(p, &coeffs);
        let l = field(p).from_i64(lambda);
        if l.is_zero() {
            return Ok(());
        }
        let d = f.dickson(&l).unwrap();
        prop_assert_eq!(d.deg(), 2 * f.deg());
        prop_assert_eq!(d.inverse_dickson(&l), Some(f));
    }

    #[test]
    fn random_products_stay_symplectic(p in primes(), seed in any::<u64>()) {
        let a = random_element(p, 4, seed);
        let b = random_element(p, 4, seed.wrapping_add(1));
        let space = a.space().clone();
        prop_assert!(is_symplectic(&a.matrix().mul(b.matrix()), &space).unwrap());
        prop_assert!(a.mul(&a.inverse()).matrix().is_identity());
    }

    #[test]
    fn similarity_invariants_are_conjugation_invariant(p in primes(), seed in any::<u64>()) {
        let phi = random_element(p, 4, seed);
        let alpha = random_element(p, 4, !seed);
        let psi = phi.conjugate(alpha.matrix()).unwrap();
        prop_assert_eq!(
            invariant_factors(phi.matrix()).invariant_factors,
            invariant_factors(psi.matrix()).invariant_factors
        );
        let inv = invariant_factors(phi.matrix()).invariant_factors;
        let prod = inv.iter().fold(Poly::one(field(p)), |acc, f| acc.mul(f));
        prop_assert_eq!(prod.deg(), 4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn witnesses_verify_and_verdicts_are_class_functions(
        p in prop::sample::select(vec![3u64, 7]),
        dim in prop::sample::select(vec![2usize, 4]),
        seed in any::<u64>(),
    ) {
        let phi = random_element(p, dim, seed);
        let alpha = random_element(p, dim, seed ^ 0x9e37_79b9);
        let psi = phi.conjugate(alpha.matrix()).unwrap();
        let c = Classifier::default();
        let a = c.classify(&phi);
        let b = c.classify(&psi);
        prop_assert!(a.consistency_violations(&phi).is_empty(), "{:?}", a.consistency_violations(&phi));
        for ((name, va), (_, vb)) in a.verdicts().iter().zip(b.verdicts().iter()) {
            if let Some(w) = &va.witness {
                prop_assert!(w.verify(&phi), "{} witness fails", name);
            }
            if va.status != Tri::Unknown && vb.status != Tri::Unknown {
                prop_assert_eq!(va.status, vb.status, "{} differs on a conjugate", name);
            }
        }
        prop_assert_eq!(a.reversible_gl, b.reversible_gl);
        prop_assert_eq!(a.neg_inverse_gl, b.neg_inverse_gl);
    }

    #[test]
    fn mat_json_round_trips(p in primes(), seed in any::<u64>()) {
        let phi = random_element(p, 4, seed);
        let back = SymplecticElement::from_json(&phi.to_json()).unwrap();
        prop_assert_eq!(back.matrix(), phi.matrix());
        prop_assert_eq!(Mat::from_json(&phi.matrix().to_json()).unwrap(), phi.matrix().clone());
    }
}
