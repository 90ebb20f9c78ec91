use std::cmp::Ordering;

use modinv::cpaction::{apply_sigma, delta_power, is_invariant, lead_length, length, transfer};
use modinv::paths::{classify_path, lambda_monomial, theta};
use modinv::sl2::{is_sl2_invariant, sl2_act};
use modinv::straighten::{expand_combination, uncross};
use modinv::{
    grevlex_cmp, Component, FpMatrix, LatticePath, Monomial, MultiDegree, PathClass, Polynomial,
    Prime, SL2Element, UProduct,
};
use proptest::prelude::*;

const M: usize = 3;

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| Prime::new(p).unwrap())
}

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0u16..3, 2 * M).prop_map(|e| Monomial::from_exponents(&e))
}

fn terms() -> impl Strategy<Value = Vec<(Monomial, i64)>> {
    prop::collection::vec((monomial(), -10i64..10), 0..6)
}

fn poly(p: Prime, t: Vec<(Monomial, i64)>) -> Polynomial {
    Polynomial::from_terms(M, p, t)
}

/// The part of `f` in the multidegree of its lead term.
fn homogeneous(p: Prime, t: Vec<(Monomial, i64)>) -> Polynomial {
    let f = poly(p, t);
    match f.lead_monomial() {
        Some(lm) => f.project(&lm.multidegree()),
        None => f,
    }
}

fn sl2_element(p: Prime, a: i64, b: i64, c: i64) -> SL2Element {
    // Two unipotents and a torus element generate every element we need.
    let t = (a.rem_euclid(p.get() as i64 - 1) + 1) as u32;
    let g = SL2Element::upper(b, p).mul(&SL2Element::lower(c, p));
    match SL2Element::diagonal(t, p) {
        Ok(d) => g.mul(&d),
        Err(_) => g,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(p in prime(), a in terms(), b in terms(), c in terms()) {
        let (f, g, h) = (poly(p, a), poly(p, b), poly(p, c));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(&f + &(-&f), Polynomial::zero(M, p));
    }

    #[test]
    fn lead_is_multiplicative(p in prime(), a in terms(), b in terms()) {
        let (f, g) = (poly(p, a), poly(p, b));
        prop_assume!(!f.is_zero() && !g.is_zero());
        let (lf, cf) = f.lead().unwrap();
        let (lg, cg) = g.lead().unwrap();
        let (lfg, cfg) = (&f * &g).lead().unwrap();
        prop_assert_eq!(lfg, lf.mul(&lg));
        prop_assert_eq!(cfg, p.mul(cf, cg));
    }

    #[test]
    fn grevlex_is_a_monomial_order(a in monomial(), b in monomial(), c in monomial()) {
        let ab = grevlex_cmp(&a, &b).unwrap();
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        prop_assert_eq!(grevlex_cmp(&b, &a).unwrap(), ab.reverse());
        prop_assert_eq!(grevlex_cmp(&a.mul(&c), &b.mul(&c)).unwrap(), ab);
        if !c.is_one() {
            prop_assert_eq!(grevlex_cmp(&a.mul(&c), &a).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn display_parse_round_trip(p in prime(), a in terms()) {
        let f = poly(p, a);
        prop_assert_eq!(Polynomial::parse(&f.to_string(), M, p).unwrap(), f);
    }

    #[test]
    fn sigma_has_order_p(p in prime(), a in terms(), j in 0u64..10, k in 0u64..10) {
        let f = poly(p, a);
        prop_assert_eq!(apply_sigma(&f, p.get() as u64), f.clone());
        prop_assert_eq!(apply_sigma(&apply_sigma(&f, j), k), apply_sigma(&f, j + k));
        prop_assert_eq!(apply_sigma(&(&f * &f), j), &apply_sigma(&f, j) * &apply_sigma(&f, j));
    }

    #[test]
    fn transfers_are_invariant(p in prime(), a in terms()) {
        let f = homogeneous(p, a);
        let t = transfer(&f);
        prop_assert!(is_invariant(&t));
        if !t.is_zero() {
            prop_assert_eq!(length(&t).unwrap(), p.get());
            prop_assert_eq!(t, delta_power(&f, p.get() - 1));
        }
    }

    #[test]
    fn socle_images_have_long_summands(p in prime(), a in terms()) {
        let g = homogeneous(p, a);
        prop_assume!(!g.is_zero());
        let r = (1..=p.get()).find(|&r| delta_power(&g, r).is_zero()).unwrap();
        let f = delta_power(&g, r - 1);
        let l = length(&f).unwrap();
        prop_assert!(r <= l && l <= p.get());
        prop_assert!(lead_length(&f).unwrap() >= l);
    }

    #[test]
    fn rref_is_idempotent(p in prime(), rows in prop::collection::vec(prop::collection::vec(-5i64..5, 6), 1..6)) {
        let a = FpMatrix::from_rows(&rows, p).unwrap();
        let r = a.rref();
        prop_assert_eq!(r.matrix.rref().matrix, r.matrix.clone());
        prop_assert_eq!(a.rank() + a.kernel_basis().len(), a.cols());
        for v in a.kernel_basis() {
            prop_assert!(a.mul_vec(&v).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn component_vectors_round_trip(p in prime(), parts in prop::collection::vec(0u32..4, 1..4), seed in any::<u64>()) {
        let comp = Component::new(MultiDegree::new(parts));
        let v: Vec<u32> = (0..comp.dim()).map(|i| p.reduce(seed.rotate_left(i as u32 % 64) ^ i as u64)).collect();
        let f = comp.from_vector(&v, p);
        prop_assert_eq!(comp.to_vector(&f).unwrap(), v);
    }

    #[test]
    fn uncrossing_preserves_value(p in prime(), edges in prop::collection::vec((0usize..6, 0usize..6), 1..4)) {
        let mut u = UProduct::one(6);
        for (i, j) in edges {
            if i != j {
                u = u.with_u(i.min(j), i.max(j), 1);
            }
        }
        let straight = uncross(&u);
        prop_assert!(straight.iter().all(|(_, v)| v.is_noncrossing()));
        prop_assert_eq!(expand_combination(&straight, 6, p), u.expand(p));
    }

    #[test]
    fn theta_spans_its_summand(p in prime(), steps in prop::collection::vec(any::<bool>(), 1..8)) {
        let path = LatticePath::from_steps(steps);
        prop_assume!(classify_path(&path, p) != PathClass::Neither);
        let t = theta(&path, p).unwrap();
        prop_assert!(is_invariant(&t));
        prop_assert_eq!(t.lead_monomial().unwrap(), &lambda_monomial(&path));
    }

    #[test]
    fn sl2_action_is_a_group_action(p in prime(), g in (0i64..6, 0i64..7, 0i64..7), h in (0i64..6, 0i64..7, 0i64..7), a in terms()) {
        let f = poly(p, a);
        let g = sl2_element(p, g.0, g.1, g.2);
        let h = sl2_element(p, h.0, h.1, h.2);
        prop_assert_eq!(sl2_act(&g.mul(&h), &f), sl2_act(&g, &sl2_act(&h, &f)));
        prop_assert_eq!(sl2_act(&g, &sl2_act(&g.inverse(), &f)), f);
    }

    #[test]
    fn u_products_are_sl2_invariant(p in prime(), i in 0usize..M, j in 0usize..M, k in 1u32..3) {
        prop_assume!(i != j);
        let f = Polynomial::u(M, p, i, j).pow(k);
        prop_assert!(is_sl2_invariant(&f));
    }
}
