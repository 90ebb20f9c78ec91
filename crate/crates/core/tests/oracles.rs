//! End-to-end checks against independently known values.

use modinv::cpaction::{
    decompose_component, decompose_with_periodicity, invariant_basis, is_invariant,
};
use modinv::polarize::decompose_by_symmetrization;
use modinv::sagbi::{build_generators, minimality_report, sagbi_verify, subduct};
use modinv::sl2::{
    build_sm, is_sl2_invariant, minimal_generators_sl2, sl2_invariant_basis, verify_l_identities,
};
use modinv::{Component, FpMatrix, MultiDegree, Polynomial, Prime, SL2Element, SetKind, Sl2Config};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pr(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn md(parts: &[u32]) -> MultiDegree {
    MultiDegree::new(parts.to_vec())
}

#[test]
fn degree_1112_decompositions_agree() {
    for p in [2u64, 3, 5, 7, 11] {
        let lambda = md(&[1, 1, 1, 2]);
        let direct = decompose_component(&lambda, pr(p));
        assert_eq!(direct.dim(), 24);
        assert_eq!(
            decompose_by_symmetrization(&lambda, pr(p)).unwrap(),
            direct,
            "p = {p}"
        );
    }
    let at7: Vec<(usize, u64)> = decompose_component(&md(&[1, 1, 1, 2]), pr(7))
        .summands()
        .collect();
    assert_eq!(at7, [(2, 3), (4, 3), (6, 1)]);
}

#[test]
fn periodicity_matches_direct_rank_profile() {
    for (p, parts) in [
        (3u64, vec![4u32, 2]),
        (5, vec![6, 1, 1]),
        (3, vec![5, 3]),
        (2, vec![3, 2, 1]),
    ] {
        let lambda = MultiDegree::new(parts);
        assert_eq!(
            decompose_with_periodicity(&lambda, pr(p)),
            decompose_component(&lambda, pr(p)),
            "{lambda:?}"
        );
    }
}

#[test]
fn invariant_dimension_is_socle_dimension() {
    for (p, parts) in [
        (3u64, vec![2u32, 2]),
        (5, vec![3, 1, 1]),
        (2, vec![2, 1, 1]),
    ] {
        let lambda = MultiDegree::new(parts);
        let basis = invariant_basis(&lambda, pr(p));
        assert!(basis.iter().all(is_invariant));
        assert_eq!(
            basis.len() as u64,
            decompose_component(&lambda, pr(p)).socle_dim()
        );
    }
}

#[test]
fn random_invariants_subduct_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, m) in [(2u64, 3usize), (3, 2), (3, 3), (5, 2)] {
        let p = pr(p);
        let gens = build_generators(p, m, SetKind::Minimal);
        for _ in 0..20 {
            let mut f = Polynomial::zero(m, p);
            for _ in 0..3 {
                let factors: Vec<(usize, u32)> = (0..rng.gen_range(1..=3))
                    .map(|_| (rng.gen_range(0..gens.len()), 1))
                    .collect();
                f = &f + &gens.product(&factors).scale(rng.gen_range(1..p.get()));
            }
            let lambda = match f.lead_monomial() {
                Some(lm) => lm.multidegree(),
                None => continue,
            };
            let f = f.project(&lambda);
            assert!(subduct(&f, &gens).unwrap().is_member(), "{f}");
        }
    }
}

#[test]
fn generating_sets_are_sagbi_and_minimal() {
    let p = pr(3);
    let gens = build_generators(p, 2, SetKind::Minimal);
    for d in 1..=6 {
        for lambda in MultiDegree::all_with_total(2, d) {
            assert!(sagbi_verify(&lambda, &gens).passed(), "{lambda:?}");
        }
    }
    assert!(minimality_report(p, 2).passed());
    assert!(subduct(&Polynomial::y(2, p, 0), &gens).is_err());
}

#[test]
fn sl2_generators_for_small_cases() {
    let r = minimal_generators_sl2(pr(3), 3, &Sl2Config::new(9)).unwrap();
    assert_eq!(r.total(), 28);
    assert_eq!(r.noether_number, 8);
    assert!(r.generators.iter().all(|(_, g)| is_sl2_invariant(g)));
    assert_eq!(build_sm(pr(3), 2).len(), 8);
    assert_eq!(build_sm(pr(3), 3).len(), 18);
    assert_eq!(verify_l_identities(pr(5), 3).unwrap(), 6);
}

#[test]
fn sl2_invariants_are_c_p_invariant() {
    for (p, parts) in [(3u64, vec![4u32, 2]), (2, vec![2, 2, 2]), (5, vec![6, 2])] {
        let lambda = MultiDegree::new(parts);
        for f in sl2_invariant_basis(&lambda, pr(p)) {
            assert!(is_sl2_invariant(&f) && is_invariant(&f));
        }
    }
}

#[test]
fn weight_zero_kernel_matches_full_kernel() {
    for (p, parts) in [
        (3u64, vec![2u32, 2]),
        (3, vec![3, 3]),
        (5, vec![4, 4]),
        (2, vec![2, 1, 1]),
        (3, vec![2, 2, 2]),
    ] {
        let p = pr(p);
        let lambda = MultiDegree::new(parts);
        let comp = Component::new(lambda.clone());
        let n = comp.dim();
        let mut stacked = FpMatrix::zeros(2 * n, n, p);
        for (k, g) in SL2Element::generators(p).iter().enumerate() {
            let a = comp
                .operator_matrix(&g.to_block_map())
                .minus_scalar_identity(1);
            for r in 0..n {
                for c in 0..n {
                    stacked.set(k * n + r, c, a.get(r, c));
                }
            }
        }
        assert_eq!(
            stacked.kernel_basis().len(),
            sl2_invariant_basis(&lambda, p).len(),
            "{lambda:?}"
        );
    }
}
