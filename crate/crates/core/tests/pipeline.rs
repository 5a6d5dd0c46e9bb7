use gbprobe::crypto::{attack_commutative, decrypt, encrypt, keygen};
use gbprobe::forge::{build_counterexample, low_degree_agreement};
use gbprobe::format::{parse_public_key, parse_result, write_public_key, write_result, IdealFile};
use gbprobe::random::{random_poly, random_poly_of_degree, seeded};
use gbprobe::staircase::reconstruct;
use gbprobe::{CanOracle, Error, Monomial, Polynomial, PrimeField, TermOrder};
use proptest::prelude::*;

fn f101() -> PrimeField {
    PrimeField::new(101).unwrap()
}

fn order(k: u8, n: usize) -> TermOrder {
    match k % 3 {
        0 => TermOrder::lex(n),
        1 => TermOrder::deglex(n),
        _ => TermOrder::degrevlex(n),
    }
}

fn quadratic_ideal(seed: u64, n: usize) -> Vec<Polynomial> {
    let mut rng = seeded(seed);
    (0..n).map(|_| random_poly_of_degree(&mut rng, n, f101(), 2, 3)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decryption_inverts_encryption(seed in any::<u64>(), k in 1u8..3) {
        let ord = order(k, 2);
        let kp = match keygen(&quadratic_ideal(seed, 2), &ord, 2, 1, 3, &mut seeded(seed ^ 1)) {
            Err(Error::UnitIdeal | Error::NotEnoughNormalTerms { .. }) => return Ok(()),
            r => r.unwrap(),
        };
        let mut o = CanOracle::from_basis(kp.private.clone());
        let mut rng = seeded(seed ^ 2);
        for _ in 0..5 {
            let msg = kp.public.random_message(&mut rng);
            let c = encrypt(&kp.public, &msg, &mut rng).unwrap();
            prop_assert_eq!(decrypt(&mut o, &c).unwrap(), msg);
        }
    }

    #[test]
    fn attack_recovers_private_basis(seed in any::<u64>(), k in 1u8..3) {
        let ord = order(k, 2);
        let kp = match keygen(&quadratic_ideal(seed, 2), &ord, 2, 1, 3, &mut seeded(seed ^ 1)) {
            Err(Error::UnitIdeal | Error::NotEnoughNormalTerms { .. }) => return Ok(()),
            r => r.unwrap(),
        };
        let mut o = CanOracle::from_basis(kp.private.clone());
        let attack = attack_commutative(&mut o, &kp.public, None).unwrap();
        prop_assert_eq!(attack.basis(), kp.private.elements());
    }

    #[test]
    fn public_key_text_round_trip(seed in any::<u64>(), k in 0u8..3) {
        let ord = order(k, 2);
        let kp = match keygen(&quadratic_ideal(seed, 2), &ord, 2, 1, 3, &mut seeded(seed)) {
            Err(Error::UnitIdeal | Error::NotEnoughNormalTerms { .. }) => return Ok(()),
            r => r.unwrap(),
        };
        let back = parse_public_key(&write_public_key(&kp.public)).unwrap();
        prop_assert_eq!(back.g, kp.public.g.clone());
        prop_assert_eq!(back.t, kp.public.t.clone());
        prop_assert_eq!(back.delta, kp.public.delta);
        prop_assert_eq!(back.cap, kp.public.cap);
    }

    #[test]
    fn forged_pairs_agree_below_the_bound(seed in any::<u64>(), a in 1u32..4, extra in 0u32..3) {
        let n = 2;
        let ord = TermOrder::deglex(n);
        let mut rng = seeded(seed);
        let mut exps = vec![0; n];
        exps[0] = a;
        let mut j = vec![Polynomial::term(f101(), Monomial::new(exps).unwrap(), 1)];
        j.push(random_poly(&mut rng, n, f101(), a + 1, 3));
        let f = match build_counterexample(&j, &ord, a + 1 + extra) {
            Err(Error::UnitIdeal | Error::DeltaTooSmall { .. }) => return Ok(()),
            r => r.unwrap(),
        };
        prop_assert!(f.h_is_groebner);
        prop_assert!(low_degree_agreement(&f).unwrap());
    }

    #[test]
    fn ideal_files_round_trip(seed in any::<u64>(), n in 1usize..4, k in 0u8..3) {
        let mut rng = seeded(seed);
        let ord = order(k, n);
        let polys = (0..3).map(|_| random_poly(&mut rng, n, f101(), 3, 4)).filter(|p| !p.is_zero()).collect();
        let file = IdealFile { nvars: n, field: f101(), ord, polys };
        let back = IdealFile::parse(&file.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), file.to_text());
        prop_assert_eq!(back.polys, file.polys);
    }

    #[test]
    fn result_files_round_trip(seed in any::<u64>(), k in 0u8..3) {
        let ord = order(k, 2);
        let gens = quadratic_ideal(seed, 2);
        let mut o = match CanOracle::new(&gens, &ord) {
            Ok(o) => o,
            Err(_) => return Ok(()),
        };
        let r = reconstruct(&mut o, 4).unwrap();
        let back = parse_result(&write_result(&r, &ord), 2, f101()).unwrap();
        prop_assert_eq!(write_result(&back, &ord), write_result(&r, &ord));
    }
}
