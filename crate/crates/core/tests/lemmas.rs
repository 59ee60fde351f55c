use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use exactcat::exactstruct::{isbell_structure, max_structure, split_structure, CheckConfig, Conflation, Verdict};
use exactcat::fgab::{classify, is_pushout_square, Bounds, FgAb, Hom};
use exactcat::homlemmas::{
    biproduct_conflation, defl_sum_reduction, hom_epi_characterization, injective_test, nine_factorization,
    pushout_characterizations, random_conflation_morphism, random_five_instance, short_five_inverse, three_by_three,
    torsion_three_by_three, PushoutSquare,
};
use exactcat::suites::{check_lemma, replay_lemma, Lemma};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn every_suite_holds_in_exact_structures(seed in any::<u64>()) {
        let cfg = CheckConfig::new(10, seed);
        for s in [split_structure(), max_structure()] {
            for lemma in Lemma::ALL {
                let r = check_lemma(&s, lemma, &cfg);
                prop_assert_eq!(r.verdict, Verdict::Pass, "{}", r.summary());
            }
        }
    }

    #[test]
    fn short_five_inverts(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = max_structure();
        if let Some(m) = random_five_instance(&s, &mut rng, Bounds::default()) {
            let (inv, _) = short_five_inverse(&s, &m).unwrap();
            prop_assert!(inv.after(&m.g).unwrap().equals(&Hom::identity(m.g.source())).unwrap());
            prop_assert!(classify(&m.g).is_iso());
        }
    }

    #[test]
    fn nine_factorization_composes_to_g(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in [split_structure(), max_structure()] {
            let Some(m) = random_conflation_morphism(&s, &mut rng, Bounds::default()) else { continue };
            let n = nine_factorization(&s, &m).unwrap();
            prop_assert!(n.lower.g.after(&n.upper.g).unwrap().equals(&m.g).unwrap());
            prop_assert!(is_pushout_square(&m.source.inflation, &m.f, &n.middle.inflation, &n.upper.g).unwrap());
            prop_assert!(s.is_conflation(&n.middle.inflation, &n.middle.deflation).unwrap());
        }
    }
}

#[test]
fn torsion_three_by_three_in_max() {
    let max = max_structure();
    let x = torsion_three_by_three(&max).unwrap();
    let out = three_by_three(&max, &x).unwrap();
    let z2 = FgAb::cyclic(2);
    assert!(out.row3.left().isomorphic(&z2));
    assert!(out.row3.middle().isomorphic(&FgAb::from_orders(&[2, 2])));
    assert!(out.row3.right().isomorphic(&z2));
    // columns are not split, so the fixture is not a split diagram
    assert!(torsion_three_by_three(&split_structure()).is_err());
}

#[test]
fn pushout_square_of_multiplication() {
    let max = max_structure();
    let z = FgAb::integers();
    let two = Hom::scalar(&z, 2);
    let sq = PushoutSquare::new(two.clone(), two.clone(), two.clone(), two.clone()).unwrap();
    let got = pushout_characterizations(&max, &sq).unwrap();
    assert!(!got.pushout && !got.conflation && !got.pushout_and_pullback);
    let sq = PushoutSquare::new(two.clone(), Hom::identity(&z), two.clone(), Hom::identity(&z)).unwrap();
    let got = pushout_characterizations(&max, &sq).unwrap();
    assert!(got.pushout && got.conflation && got.pushout_and_pullback);
    assert!(!sq.padded().commutes() || !pushout_characterizations(&max, &sq.padded()).unwrap().pushout);
}

#[test]
fn deflation_sums() {
    let max = max_structure();
    let z = FgAb::integers();
    let two = Hom::scalar(&z, 2);
    let v = defl_sum_reduction(&max, &two, &two).unwrap();
    assert!(!v.sum_is_deflation && !v.g_is_deflation);
    let p = Hom::from_i64(&z, &FgAb::cyclic(2), &[1]).unwrap();
    let v = defl_sum_reduction(&max, &two, &p).unwrap();
    assert!(v.sum_is_deflation && v.g_is_deflation);
}

#[test]
fn injectives() {
    let cfg = CheckConfig::new(30, 4);
    let (split, max) = (split_structure(), max_structure());
    assert!(injective_test(&split, &FgAb::integers(), &cfg));
    assert!(!injective_test(&max, &FgAb::integers(), &cfg));
    assert!(!injective_test(&max, &FgAb::cyclic(3), &cfg));
    assert!(injective_test(&max, &FgAb::zero(), &cfg));
    let z = FgAb::integers();
    assert!(!hom_epi_characterization(&Hom::scalar(&z, 2), &[z.clone()]));
    assert!(hom_epi_characterization(&FgAb::injection_first(&z, &z), &[z.clone()]));
}

#[test]
fn biproducts_are_conflations() {
    let (a, b) = (FgAb::cyclic(4), FgAb::integers());
    for s in [split_structure(), max_structure()] {
        let c: Conflation = biproduct_conflation(&s, &a, &b).unwrap();
        assert!(c.middle().isomorphic(&FgAb::direct_sum(&a, &b)));
    }
}

#[test]
fn isbell_lemma_failures_replay() {
    let s = isbell_structure(2).unwrap();
    for lemma in [Lemma::Obscure, Lemma::Double] {
        let r = check_lemma(&s, lemma, &CheckConfig::new(200, 1729));
        assert_eq!(r.verdict, Verdict::Fail, "{lemma}");
        let w = r.witness.unwrap();
        assert!(w.origin.is_some());
        let out = replay_lemma(&w).unwrap();
        assert!(matches!(out, exactcat::exactstruct::Outcome::Fails { .. }), "{lemma}");
    }
}
