use std::sync::Arc;

use num_traits::Signed;
use proptest::prelude::*;

use quatcm_core::classgrp::{class_group, compose, project};
use quatcm_core::localsym::{disc_of, ramification_of};
use quatcm_core::orders::{
    embedding_conductor, maximal_order, maximalize, optimal_embedding_exists, order_from_basis,
    reduced_discriminant,
};
use quatcm_core::quat::embedding_from_element;
use quatcm_core::tensor::{
    embedding_from_idempotent, find_u, idempotent_from_embedding, rescale_alpha, tconj, tmul, tnorm, ttrace,
    u_conjugates_to_complement, verify_iota_identities,
};
use quatcm_core::thetasearch::{algebra_for_disc, find_theta_pair, presents};
use quatcm_core::{q, qi, ImagQuadField, LScalar, QuadOrder, QuatAlgebra, QuatElement, QuatLattice, TensorAlgebra};

fn nonzero(range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = i64> {
    range.prop_filter("nonzero", |x| *x != 0)
}

fn algebra() -> impl Strategy<Value = Arc<QuatAlgebra>> {
    (nonzero(-12..=12), nonzero(-12..=12)).prop_map(|(a, b)| QuatAlgebra::from_ints(a, b).unwrap())
}

/// Algebra with a trace-zero element of positive norm.
fn algebra_with_imaginary() -> impl Strategy<Value = (Arc<QuatAlgebra>, QuatElement)> {
    algebra().prop_flat_map(|alg| {
        let a = alg.clone();
        (Just(alg), prop::array::uniform3(-5i64..=5))
            .prop_map(move |(alg, c)| (alg, a.from_ints_coords([0, c[0], c[1], c[2]])))
            .prop_filter("positive norm", |(_, g)| g.norm().is_positive())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_product_is_associative(
        (alg, g) in algebra_with_imaginary(),
        xs in prop::array::uniform3(prop::array::uniform4(-4i64..=4)),
        ys in prop::array::uniform3(prop::array::uniform4(-4i64..=4)),
    ) {
        let t = TensorAlgebra::new(alg.clone(), -g.norm()).unwrap();
        let el = |k: usize| t.element(alg.from_ints_coords(xs[k]), alg.from_ints_coords(ys[k])).unwrap();
        let (x, y, z) = (el(0), el(1), el(2));
        let lhs = tmul(&tmul(&x, &y).unwrap(), &z).unwrap();
        let rhs = tmul(&x, &tmul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(tmul(&t.one(), &x).unwrap(), x.clone());
        let n = tmul(&x, &tconj(&x)).unwrap();
        prop_assert_eq!(n, t.scalar(&tnorm(&x)));
    }

    #[test]
    fn idempotent_bijection((alg, g) in algebra_with_imaginary(), num in nonzero(-6..=6), den in 1i64..=6) {
        let emb = embedding_from_element(&g).unwrap();
        let t = TensorAlgebra::new(alg, emb.delta().clone()).unwrap();
        let e = idempotent_from_embedding(&t, &emb).unwrap();
        let x = e.element();
        prop_assert_eq!(tmul(x, x).unwrap(), x.clone());
        prop_assert_eq!(ttrace(x), LScalar::new(qi(1), qi(0)));
        prop_assert!(tnorm(x).is_zero());
        prop_assert_eq!(tconj(x), e.complement().element().clone());
        prop_assert_eq!(embedding_from_idempotent(&e).unwrap(), emb.clone());

        let lambda = q(num, den);
        let scaled = rescale_alpha(&e, &lambda).unwrap();
        let recovered = embedding_from_idempotent(&scaled).unwrap();
        prop_assert_eq!(recovered.image(), &emb.image().scale(&lambda));
        prop_assert_eq!(recovered.delta(), &(emb.delta() * &lambda * &lambda));
    }

    #[test]
    fn identities_and_u((alg, g) in algebra_with_imaginary()) {
        let emb = embedding_from_element(&g).unwrap();
        let t = TensorAlgebra::new(alg, emb.delta().clone()).unwrap();
        let e = idempotent_from_embedding(&t, &emb).unwrap();
        prop_assert!(verify_iota_identities(&emb, &e).unwrap().all());
        let u = find_u(&emb).unwrap();
        prop_assert_eq!(&u * emb.image(), -&(emb.image() * &u));
        prop_assert!(u_conjugates_to_complement(&e, &u).unwrap());
    }

    #[test]
    fn lattice_form_is_canonical(alg in algebra(), m in prop::array::uniform4(prop::array::uniform4(-3i64..=3))) {
        let basis = alg.basis();
        let combo: Vec<QuatElement> = m
            .iter()
            .map(|row| row.iter().zip(&basis).fold(alg.zero(), |acc, (k, b)| &acc + &b.scale(&qi(*k))))
            .collect();
        let mut gens = combo.clone();
        gens.extend(basis.iter().cloned());
        let a = QuatLattice::from_generators(&alg, &gens).unwrap();
        gens.reverse();
        let b = QuatLattice::from_generators(&alg, &gens).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(combo.iter().all(|x| a.contains(x)));
    }

    #[test]
    fn maximalize_reaches_disc(a in nonzero(-15..=15), b in nonzero(-15..=15)) {
        let alg = QuatAlgebra::from_ints(a, b).unwrap();
        let std = order_from_basis(&alg, &alg.basis()).unwrap();
        let max = maximalize(&std).unwrap();
        prop_assert_eq!(reduced_discriminant(&max).unwrap(), disc_of(&alg).unwrap());
        prop_assert!(std.lattice().is_sublattice_of(max.lattice()));
        prop_assert_eq!(maximalize(&max).unwrap(), max);
    }

    #[test]
    fn theta_pairs_verify(idx in 0usize..12, d in 1u64..=50) {
        let disc = [6u64, 10, 14, 15, 21, 22, 26, 33, 34, 35, 38, 39][idx];
        let Ok(l) = ImagQuadField::new(d) else { return Ok(()) };
        let Ok(pair) = find_theta_pair(disc, &l) else { return Ok(()) };
        prop_assert!(presents(pair.theta1, disc, &l).unwrap());
        prop_assert!(presents(pair.theta2, disc, &l).unwrap());
        let r = ramification_of(l.disc(), pair.theta1).unwrap();
        prop_assert_eq!(r.discriminant(), disc);
        prop_assert_eq!(find_theta_pair(disc, &l).unwrap(), pair);
    }

    #[test]
    fn projection_is_homomorphism(d in prop::sample::select(vec![1u64, 2, 3, 5, 7, 11]), c in 1u64..=12) {
        let l = ImagQuadField::new(d).unwrap();
        let order = QuadOrder::new(l, c).unwrap();
        let pic = class_group(&order).unwrap();
        for cp in quatcm_core::arith::divisors(c) {
            for x in &pic.elements {
                for y in pic.elements.iter().take(6) {
                    let lhs = project(&order, &compose(x, y).unwrap(), cp).unwrap();
                    let rhs = compose(&project(&order, x, cp).unwrap(), &project(&order, y, cp).unwrap()).unwrap();
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn conductors_respect_embedding_criterion() {
    for disc in [6u64, 10, 15] {
        let alg = algebra_for_disc(disc).unwrap();
        let o = maximal_order(&alg).unwrap();
        for coords in [[0, 1, 0, 0], [0, 0, 1, 0], [0, 1, 1, 0], [0, 2, 0, 1], [0, 1, 0, 1]] {
            let g = alg.from_ints_coords(coords);
            if !g.norm().is_positive() {
                continue;
            }
            let emb = embedding_from_element(&g).unwrap();
            let l = ImagQuadField::from_square(emb.delta()).unwrap();
            let c = embedding_conductor(&o, &emb, &l).unwrap();
            assert!(optimal_embedding_exists(disc, &l, c), "disc {disc}, g = {g}, c = {c}");
        }
    }
}
