use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;
use stabrep::rational::q;
use stabrep::weyl::{
    addable_contents_of_weight, box_operator_eigenvalues, irr_character, tensor_decompose, weyl_dimension, Group,
};
use stabrep::{Bipartition, Partition};

fn dominant(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(lo..=hi, n).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    })
}

fn group() -> impl Strategy<Value = Group> {
    prop_oneof![(1usize..=4).prop_map(Group::Gl), (1usize..=3).prop_map(Group::So), (1usize..=3).prop_map(Group::Sp)]
}

fn weight_for(g: Group) -> impl Strategy<Value = Vec<i64>> {
    match g {
        Group::Gl(n) => dominant(n, -2, 2).boxed(),
        Group::So(n) | Group::Sp(n) => dominant(n, 0, 2).boxed(),
    }
}

/// `Π_{cells} (n + c) / hook`.
fn hook_content_dimension(p: &Partition, n: usize) -> BigUint {
    let conj = p.conjugate();
    let mut num = BigRational::from_integer(1.into());
    for cell in p.cells() {
        let arm = p.part(cell.row) as i64 - cell.col;
        let leg = conj.part(cell.col as usize) as i64 - cell.row as i64;
        num *= BigRational::new((n as i64 + cell.content()).into(), (arm + leg + 1).into());
    }
    num.to_integer().to_biguint().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn characters_are_weyl_invariant((g, w) in group().prop_flat_map(|g| (Just(g), weight_for(g)))) {
        let ch = irr_character(g, &w).unwrap();
        prop_assert!(ch.is_weyl_invariant());
        prop_assert_eq!(ch.multiplicity(&w), 1);
        prop_assert_eq!(BigUint::from(ch.dimension()), weyl_dimension(g, &w).unwrap());
    }

    #[test]
    fn tensor_dimension_conserved(
        (g, a, b) in group().prop_flat_map(|g| (Just(g), weight_for(g), weight_for(g)))
    ) {
        let dim = |w: &[i64]| weyl_dimension(g, w).unwrap();
        let total: BigUint = tensor_decompose(g, &a, &b).unwrap().iter().map(|(w, m)| BigUint::from(*m) * dim(w)).sum();
        prop_assert_eq!(total, dim(&a) * dim(&b));
    }

    #[test]
    fn tensor_is_commutative((g, a, b) in group().prop_flat_map(|g| (Just(g), weight_for(g), weight_for(g)))) {
        prop_assert_eq!(tensor_decompose(g, &a, &b).unwrap(), tensor_decompose(g, &b, &a).unwrap());
    }

    #[test]
    fn hook_content_agrees(w in dominant(4, 0, 4), extra in 0usize..3) {
        let n = 4 + extra;
        let mut w = w;
        w.resize(n, 0);
        let p = Partition::new(w.iter().map(|&x| x as usize).collect()).unwrap();
        prop_assert_eq!(weyl_dimension(Group::Gl(n), &w).unwrap(), hook_content_dimension(&p, n));
    }
}

/// The action map on `V ⊗ V_λ` acts on `V_μ` by the content of the added cell.
#[test]
fn box_operator_is_content() {
    let n = 4;
    let mut checked = 0;
    for total in 0..=3 {
        for s in 0..=total {
            for plus in Partition::all_of_size(s) {
                for minus in Partition::all_of_size(total - s) {
                    let lam = Bipartition::new(plus.clone(), minus);
                    if lam.len() + 1 > n {
                        continue;
                    }
                    let eig = box_operator_eigenvalues(n, &lam).unwrap();
                    let contents = addable_contents_of_weight(&lam.gl_weight(n).unwrap());
                    assert_eq!(eig.len(), contents.len(), "{lam}");
                    for (w, c) in contents {
                        let mu = Bipartition::from_weight(&w).unwrap();
                        assert_eq!(eig[&mu], q(c), "{lam} -> {mu}");
                    }
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 10);
}

#[test]
fn rank_ceiling_is_reported() {
    assert!(irr_character(Group::Gl(9), &[0; 9]).is_err());
    assert!(irr_character(Group::Sp(2), &[0, 1]).is_err());
}
