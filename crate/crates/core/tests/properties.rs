use std::sync::Arc;

use proptest::prelude::*;

use rational_ba::biform::BiForm;
use rational_ba::embedding::{check_phi1_equations, phi1, phi2, phi2_vanishing_pattern, ProjPoint};
use rational_ba::json::{exprat_from_json, exprat_to_json};
use rational_ba::mero::{check_descent, mero_basis};
use rational_ba::module::{grade_basis, ModuleElement};
use rational_ba::{presets, ExpContext, ExpRat, GaussQ, UPoly};

fn gauss() -> impl Strategy<Value = GaussQ> {
    (-6i64..=6, 1i64..=4, -3i64..=3, 1i64..=3).prop_map(|(a, b, c, d)| GaussQ::complex(a, b, c, d))
}

fn nonzero_gauss() -> impl Strategy<Value = GaussQ> {
    gauss().prop_filter("nonzero", |g| !g.is_zero())
}

fn ctx() -> Arc<ExpContext> {
    ExpContext::new(vec![GaussQ::one(), GaussQ::from_int(-1)])
}

fn exprat() -> impl Strategy<Value = ExpRat> {
    (
        -2i64..=2,
        prop::collection::vec(gauss(), 1..4),
        prop::collection::vec(gauss(), 1..3).prop_filter("nonzero denominator", |d| d.iter().any(|c| !c.is_zero())),
    )
        .prop_map(|(e, num, den)| ExpRat::from_parts(&ctx(), e, UPoly::new(num), UPoly::new(den)).unwrap())
}

fn point(len: usize) -> impl Strategy<Value = ProjPoint> {
    prop::collection::vec(gauss(), len).prop_filter_map("zero vector", |v| ProjPoint::new(v).ok())
}

proptest! {
    #[test]
    fn gauss_field_laws(a in gauss(), b in gauss(), c in gauss()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        if !b.is_zero() {
            prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a);
        }
    }

    #[test]
    fn exprat_field_laws(a in exprat(), b in exprat()) {
        let s = a.checked_add(&b).unwrap().checked_sub(&b).unwrap();
        prop_assert_eq!(&s, &a);
        if !b.is_zero() {
            prop_assert_eq!(a.checked_mul(&b).unwrap().checked_div(&b).unwrap(), a.clone());
        }
        let again = ExpRat::from_parts(&ctx(), a.minexp(), a.numer().clone(), a.denom().clone()).unwrap();
        prop_assert_eq!(again, a);
    }

    #[test]
    fn derivations(a in exprat(), b in exprat()) {
        for j in 0..2 {
            let lhs = a.checked_mul(&b).unwrap().derive(j).unwrap();
            let rhs = a.derive(j).unwrap().checked_mul(&b).unwrap()
                .checked_add(&a.checked_mul(&b.derive(j).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        prop_assert_eq!(a.derive(0).unwrap().derive(1).unwrap(), a.derive(1).unwrap().derive(0).unwrap());
    }

    #[test]
    fn exprat_json_round_trip(a in exprat()) {
        let j = exprat_to_json(&a);
        prop_assert_eq!(exprat_from_json(&ctx(), &j).unwrap(), a);
    }

    #[test]
    fn swap_is_an_involution(coeffs in prop::collection::vec(gauss(), 9)) {
        let f = BiForm::from_vec(2, 2, 2, &coeffs).unwrap();
        prop_assert_eq!(f.swap_factors().unwrap().swap_factors().unwrap(), f);
    }

    #[test]
    fn partner_is_multiplicative(a in prop::collection::vec(gauss(), 4), b in prop::collection::vec(gauss(), 4)) {
        for data in [presets::gamma_n2(), presets::omega()] {
            let fa = BiForm::from_vec(2, 1, 1, &a).unwrap();
            let fb = BiForm::from_vec(2, 1, 1, &b).unwrap();
            let lhs = data.partner(&fa.mul(&fb).unwrap()).unwrap();
            let rhs = data.partner(&fa).unwrap().mul(&data.partner(&fb).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn projective_equality_is_scale_free(p in point(4), s in nonzero_gauss()) {
        prop_assert_eq!(p.scaled(&s).unwrap(), p);
    }

    #[test]
    fn phi1_images_satisfy_equations(z in point(2), t in point(3)) {
        let p = presets::gamma_n3().to_gamma().unwrap().p;
        let (u, v) = phi1(&z, &t, &p).unwrap();
        prop_assert!(check_phi1_equations(&u, &v, &p));
    }

    #[test]
    fn phi2_vanishing(z in point(2), w in point(2)) {
        prop_assert!(phi2_vanishing_pattern(&phi2(&z, &w).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn descent_is_closed(c in prop::collection::vec(gauss(), 8), name in prop::sample::select(vec!["gamma-n2", "omega"])) {
        let data = if name == "omega" { presets::omega() } else { presets::gamma_n2() };
        let basis = mero_basis(&data, 1).unwrap();
        let mut acc = basis[0].scale(&c[0]);
        for (f, k) in basis.iter().zip(&c).skip(1) {
            acc = acc.add(&f.scale(k)).unwrap();
        }
        prop_assert!(check_descent(&data, acc.numerator()).unwrap());
        prop_assert!(check_descent(&data, acc.mul(&basis[0]).unwrap().numerator()).unwrap());
    }

    #[test]
    fn gluing_preserved(c in prop::collection::vec(exprat(), 6), j in 0usize..2, name in prop::sample::select(vec!["gamma-n2", "omega"])) {
        let data = if name == "omega" { presets::omega() } else { presets::gamma_n2() };
        // Rebuild the coefficients in the preset's own context.
        let ctx = data.context();
        let space = grade_basis(&data, 2).unwrap();
        let mut psi = ModuleElement::new(&data, BiForm::zero(2, 2, 2)).unwrap();
        for (e, a) in space.elements().iter().zip(&c) {
            let a = ExpRat::from_parts(ctx, a.minexp(), a.numer().clone(), a.denom().clone()).unwrap();
            psi = psi.add(&e.scale(&a)).unwrap();
        }
        prop_assert!(psi.derive(j).unwrap().check().is_ok());
        prop_assert!(psi.lift(1).check().is_ok());
        let lambda = &mero_basis(&data, 1).unwrap()[0];
        prop_assert!(psi.mul_mero(lambda).unwrap().check().is_ok());
    }
}
