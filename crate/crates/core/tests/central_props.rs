use std::collections::BTreeMap;

use proptest::prelude::*;
use stabrep::central::{
    char_of_bipartition_gl, char_of_triple_gl, char_osp, char_pair_of_hom, char_pair_of_hom_osp, ck_value,
    finite_ck_value, hc_compatibility, transpose_identity_check, ExponentialSum, FiniteGroup, FormalTriple, HcResult,
    OspFlavor,
};
use stabrep::rational::{q, Q};
use stabrep::stable::{instantiate_family, HomFamily};
use stabrep::{Bipartition, CutDecomposition, Partition};

fn partition(max_parts: usize, max_part: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..=max_part, 0..=max_parts).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

fn values(pairs: &[(&str, i64)]) -> BTreeMap<String, Q> {
    pairs.iter().map(|(k, v)| (k.to_string(), q(*v))).collect()
}

fn constant_ck(chi: &stabrep::central::CentralCharacter, k: usize, vals: &BTreeMap<String, Q>) -> Q {
    ck_value(chi, k).unwrap().substitute(vals).as_constant().expect("fully instantiated")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transpose_identity(p in partition(6, 8)) {
        prop_assert!(transpose_identity_check(&p));
    }

    #[test]
    fn bipartition_matches_finite(plus in partition(3, 4), minus in partition(2, 4), extra in 0usize..3, k in 0usize..=6) {
        let nu = Bipartition::new(plus, minus);
        let n = nu.len().max(1) + extra;
        let chi = char_of_bipartition_gl(&nu);
        let w = nu.gl_weight(n).unwrap();
        let got = constant_ck(&chi, k, &values(&[("t", n as i64)]));
        prop_assert_eq!(got, finite_ck_value(&w, n, k, FiniteGroup::Gl).unwrap());
    }

    /// The triple formula instantiated at integer `α`, `β` equals the bipartition formula.
    #[test]
    fn triple_matches_bipartition(
        k in 0usize..=2,
        l in 0usize..=2,
        gamma in partition(2, 2),
        dalpha in prop::collection::vec(0usize..3, 2),
        dbeta in prop::collection::vec(0usize..3, 2),
    ) {
        let alpha: Vec<usize> = (0..k).map(|i| gamma.first() + dalpha[i..k].iter().sum::<usize>()).collect();
        let beta: Vec<usize> = (0..l).map(|j| gamma.len() + dbeta[j..l].iter().sum::<usize>()).collect();
        let dec = CutDecomposition::new(alpha.clone(), beta.clone(), gamma.clone()).unwrap();
        let lam = dec.assemble().unwrap();
        let formal = char_of_triple_gl(&FormalTriple::generic(k, l, gamma));
        let mut vals = BTreeMap::new();
        for (i, a) in alpha.iter().enumerate() {
            vals.insert(format!("a{}", i + 1), q(*a as i64));
        }
        for (j, b) in beta.iter().enumerate() {
            vals.insert(format!("b{}", j + 1), q(*b as i64));
        }
        let direct = char_of_bipartition_gl(&Bipartition::new(lam, Partition::empty()));
        prop_assert_eq!(formal.numerator.substitute(&vals), direct.numerator);
    }

    #[test]
    fn osp_characters_are_even(nu in partition(3, 3), flavor in prop_oneof![Just(OspFlavor::O), Just(OspFlavor::Sp)]) {
        let chi = char_osp(&nu, flavor);
        prop_assert!(chi.numerator.is_even());
        for k in [1, 3, 5] {
            prop_assert!(ck_value(&chi, k).is_err());
            prop_assert!(chi.numerator.moment(k).is_zero());
        }
    }

    #[test]
    fn osp_matches_finite(nu in partition(3, 3), extra in 0usize..2, k in (1usize..=3).prop_map(|x| 2 * x)) {
        let n = nu.len().max(1) + extra;
        let w: Vec<i64> = (1..=n).map(|i| nu.part(i) as i64).collect();
        for (flavor, group) in [(OspFlavor::O, FiniteGroup::O), (OspFlavor::Sp, FiniteGroup::Sp)] {
            let got = constant_ck(&char_osp(&nu, flavor), k, &values(&[("t", flavor.t_at(n))]));
            prop_assert_eq!(got, finite_ck_value(&w, n, k, group).unwrap());
        }
    }

    #[test]
    fn hom_families_are_compatible(
        a in prop::collection::vec(-2i64..=2, 0..=2),
        b in prop::collection::vec(-2i64..=2, 0..=2),
        gamma in partition(2, 2),
        delta in partition(2, 2),
    ) {
        let fam = HomFamily::new(a, b, gamma, delta);
        let (chi, psi) = char_pair_of_hom(&fam);
        prop_assert!(hc_compatibility(&chi, &psi).unwrap().is_compatible());
        for flavor in [OspFlavor::O, OspFlavor::Sp] {
            let (chi, psi) = char_pair_of_hom_osp(&fam, flavor);
            prop_assert!(hc_compatibility(&chi, &psi).unwrap().is_compatible());
        }
    }

    #[test]
    fn exponential_sum_text_round_trip(plus in partition(3, 4), minus in partition(3, 4)) {
        let s = char_of_bipartition_gl(&Bipartition::new(plus, minus)).numerator;
        prop_assert_eq!(s.to_string().parse::<ExponentialSum>().unwrap(), s);
    }
}

/// Instantiating the triple character of a family at rank `n` reproduces `C_k` of `λ^{(n)}`.
#[test]
fn triple_matches_finite_rank() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let fam = HomFamily::new(vec![1], vec![0], "1".parse().unwrap(), "1".parse().unwrap());
    for _ in 0..10 {
        let n = rng.gen_range(6..=9);
        let alpha = rng.gen_range(1..=6) as i64;
        let beta = rng.gen_range(1..=(n as i64 - 2));
        let inst = instantiate_family(&fam, &[alpha], &[beta], n).unwrap();
        let (chi, psi) = char_pair_of_hom(&fam);
        let vals = values(&[("a1", alpha), ("b1", beta), ("t", n as i64)]);
        for k in 0..=6 {
            for (c, p) in [(&chi, &inst.lambda_n), (&psi, &inst.mu_n)] {
                let w: Vec<i64> = (1..=n).map(|i| p.part(i) as i64).collect();
                assert_eq!(constant_ck(c, k, &vals), finite_ck_value(&w, n, k, FiniteGroup::Gl).unwrap(), "{p} k={k}");
            }
        }
    }
}

#[test]
fn half_coefficient_counterexample() {
    let chi = stabrep::central::CentralCharacter::gl("1/2@2;-1/2@1".parse().unwrap());
    let psi = stabrep::central::CentralCharacter::gl(ExponentialSum::zero());
    assert!(matches!(hc_compatibility(&chi, &psi).unwrap(), HcResult::Incompatible { .. }));
}
