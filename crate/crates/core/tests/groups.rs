use proptest::prelude::*;

use exactcat::fgab::{
    classify, cokernel, image, inverse, is_pullback_square, is_pushout_square, kernel, pullback, pushout, random_hom,
    random_object, Bounds, FgAb, Hom,
};

fn obj(seed: u64) -> FgAb {
    random_object(Bounds::default(), seed)
}

fn eq(f: &Hom, g: &Hom) -> bool {
    f.equals(g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_is_the_equalizer_with_zero(s in any::<[u64; 4]>()) {
        let (a, b, x) = (obj(s[0]), obj(s[1]), obj(s[2]));
        let f = random_hom(&a, &b, s[3]);
        let (_, k) = kernel(&f);
        prop_assert!(f.after(&k).unwrap().is_zero());
        prop_assert!(classify(&k).is_mono);
        // a map factors through k exactly when f kills it
        let u = random_hom(&x, &a, s[0] ^ 1);
        let killed = f.after(&u).unwrap().is_zero();
        prop_assert_eq!(exactcat::fgab::restrict_through_kernel(&k, &u).is_ok(), killed);
        let t = random_hom(&x, k.source(), s[1] ^ 5);
        prop_assert!(exactcat::fgab::restrict_through_kernel(&k, &k.after(&t).unwrap()).is_ok());
    }

    #[test]
    fn cokernel_is_the_coequalizer_with_zero(s in any::<[u64; 4]>()) {
        let (a, b, x) = (obj(s[0]), obj(s[1]), obj(s[2]));
        let f = random_hom(&a, &b, s[3]);
        let (c, p) = cokernel(&f);
        prop_assert!(p.after(&f).unwrap().is_zero());
        prop_assert!(classify(&p).is_epi);
        let w = random_hom(&c, &x, s[1] ^ 7);
        let v = w.after(&p).unwrap();
        let lifted = exactcat::fgab::lift_through_cokernel(&p, &v).unwrap();
        prop_assert!(eq(&lifted, &w));
    }

    #[test]
    fn first_isomorphism_theorem(s in any::<[u64; 3]>()) {
        let (a, b) = (obj(s[0]), obj(s[1]));
        let f = random_hom(&a, &b, s[2]);
        let (k, incl) = kernel(&f);
        let (coim, _) = cokernel(&incl);
        let (im, _) = image(&f);
        prop_assert!(coim.isomorphic(&im));
        prop_assert_eq!(k.is_zero(), classify(&f).is_mono);
    }

    #[test]
    fn pushouts_and_pullbacks_are_squares(s in any::<[u64; 5]>()) {
        let (a, b, c) = (obj(s[0]), obj(s[1]), obj(s[2]));
        let (i, f) = (random_hom(&a, &b, s[3]), random_hom(&a, &c, s[4]));
        let po = pushout(&i, &f).unwrap();
        prop_assert!(is_pushout_square(&i, &f, &po.leg_from_other, &po.leg_from_source).unwrap());
        let (d, h) = (random_hom(&b, &a, s[3] ^ 3), random_hom(&c, &a, s[4] ^ 3));
        let pb = pullback(&d, &h).unwrap();
        prop_assert!(is_pullback_square(&pb.leg_to_source, &pb.leg_to_other, &h, &d).unwrap());
    }

    #[test]
    fn composition_is_associative(s in any::<[u64; 7]>()) {
        let (a, b, c, d) = (obj(s[0]), obj(s[1]), obj(s[2]), obj(s[3]));
        let (f, g, h) = (random_hom(&a, &b, s[4]), random_hom(&b, &c, s[5]), random_hom(&c, &d, s[6]));
        let left = h.after(&g).unwrap().after(&f).unwrap();
        let right = h.after(&g.after(&f).unwrap()).unwrap();
        prop_assert!(eq(&left, &right));
        prop_assert!(eq(&Hom::identity(&b).after(&f).unwrap(), &f));
    }

    #[test]
    fn biproduct_identities(s in any::<[u64; 2]>()) {
        let (a, b) = (obj(s[0]), obj(s[1]));
        let (i1, i2) = (FgAb::injection_first(&a, &b), FgAb::injection_second(&a, &b));
        let (p1, p2) = (FgAb::projection_first(&a, &b), FgAb::projection_second(&a, &b));
        prop_assert!(eq(&p1.after(&i1).unwrap(), &Hom::identity(&a)));
        prop_assert!(p2.after(&i1).unwrap().is_zero());
        let sum = i1.after(&p1).unwrap().try_add(&i2.after(&p2).unwrap()).unwrap();
        prop_assert!(eq(&sum, &Hom::identity(i1.target())));
    }

    #[test]
    fn standard_form_is_an_isomorphism(s in any::<u64>()) {
        let a = obj(s);
        let (to, from) = (a.to_standard(), a.from_standard());
        prop_assert!(eq(&from.after(&to).unwrap(), &Hom::identity(&a)));
        prop_assert!(a.standard().is_standard());
        prop_assert!(a.isomorphic(&a.standard()));
    }

    #[test]
    fn inverses_invert(s in any::<[u64; 2]>()) {
        let a = obj(s[0]);
        let f = random_hom(&a, &a, s[1]);
        match inverse(&f) {
            Some(g) => {
                prop_assert!(eq(&g.after(&f).unwrap(), &Hom::identity(&a)));
                prop_assert!(eq(&f.after(&g).unwrap(), &Hom::identity(&a)));
            }
            None => prop_assert!(!classify(&f).is_iso()),
        }
    }
}

#[test]
fn cyclic_groups_from_presentations() {
    let z = FgAb::integers();
    let (q, _) = cokernel(&Hom::scalar(&z, 6));
    assert!(q.isomorphic(&FgAb::from_orders(&[2, 3])));
    let (k, _) = kernel(&Hom::from_i64(&FgAb::cyclic(4), &FgAb::cyclic(4), &[2]).unwrap());
    assert!(k.isomorphic(&FgAb::cyclic(2)));
    assert!(Hom::from_i64(&FgAb::cyclic(2), &z, &[1]).is_err());
}

#[test]
fn describe_keeps_generator_order() {
    let g = FgAb::from_orders(&[0, 2]);
    assert_eq!(g.describe(), "Z + Z/2");
    assert_eq!(FgAb::zero().describe(), "0");
}
