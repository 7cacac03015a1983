use num_bigint::BigUint;
use proptest::prelude::*;
use stabrep::lr::{lr_coefficient, schur_product, skew_schur_expand};
use stabrep::weyl::{tensor_decompose, weyl_dimension, Group};
use stabrep::{Partition, SkewShape};

fn partition(max_parts: usize, max_part: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..=max_part, 0..=max_parts).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

fn padded(p: &Partition, n: usize) -> Vec<i64> {
    (1..=n).map(|i| p.part(i) as i64).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn symmetric_in_factors(mu in partition(3, 3), nu in partition(3, 3)) {
        let prod = schur_product(&mu, &nu);
        prop_assert_eq!(&prod, &schur_product(&nu, &mu));
        for (lam, c) in &prod.coeffs {
            prop_assert_eq!(&lr_coefficient(lam, &mu, &nu), c);
            prop_assert_eq!(&lr_coefficient(lam, &nu, &mu), c);
        }
    }

    #[test]
    fn conjugation_symmetry(mu in partition(3, 3), nu in partition(3, 3)) {
        for (lam, c) in &schur_product(&mu, &nu).coeffs {
            prop_assert_eq!(&lr_coefficient(&lam.conjugate(), &mu.conjugate(), &nu.conjugate()), c);
        }
    }

    #[test]
    fn skew_expansion_matches_coefficients(lam in partition(4, 4), mu in partition(3, 3)) {
        prop_assume!(lam.contains(&mu));
        let exp = skew_schur_expand(&SkewShape::new(lam.clone(), mu.clone()).unwrap());
        for nu in Partition::all_of_size(lam.size() - mu.size()) {
            prop_assert_eq!(exp.get(&nu), lr_coefficient(&lam, &mu, &nu));
        }
    }

    /// Brauer–Klimyk on `gl_n` with `n ≥ ℓ(μ) + ℓ(ν)` sees every `c^λ_{μν}`.
    #[test]
    fn agrees_with_weyl_oracle(mu in partition(3, 2), nu in partition(3, 2)) {
        let n = (mu.len() + nu.len()).max(1);
        let oracle = tensor_decompose(Group::Gl(n), &padded(&mu, n), &padded(&nu, n)).unwrap();
        let prod = schur_product(&mu, &nu);
        prop_assert_eq!(oracle.len(), prod.coeffs.len());
        for (lam, c) in &prod.coeffs {
            prop_assert_eq!(BigUint::from(oracle[&padded(lam, n)]), c.clone());
        }
    }

    /// `Σ_λ c^λ_{μν} dim V_λ = dim V_μ · dim V_ν` at a small rank.
    #[test]
    fn dimension_count(mu in partition(2, 3), nu in partition(2, 3)) {
        let n = 3;
        let dim = |p: &Partition| weyl_dimension(Group::Gl(n), &padded(p, n)).unwrap();
        let total: BigUint = schur_product(&mu, &nu)
            .coeffs
            .iter()
            .filter(|(lam, _)| lam.len() <= n)
            .map(|(lam, c)| c * dim(lam))
            .sum();
        prop_assert_eq!(total, dim(&mu) * dim(&nu));
    }
}

/// Kostka numbers by brute-force tableau filling, then `h_μ = Σ K_{λμ} s_λ`
/// rebuilt from iterated one-row products.
#[test]
fn kostka_oracle() {
    fn kostka(shape: &Partition, content: &[usize]) -> u64 {
        // fill letter by letter: each step adds a horizontal strip, i.e. rows
        // interlace as q_1 ≥ p_1 ≥ q_2 ≥ p_2 ≥ …
        fn strips(p: &[usize], shape: &Partition, i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if i == shape.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let lo = p.get(i).copied().unwrap_or(0);
            let mut hi = shape.part(i + 1);
            if i > 0 {
                hi = hi.min(p[i - 1]);
            }
            for x in lo..=hi.max(lo) {
                if x - lo > left || x > hi {
                    break;
                }
                cur.push(x);
                strips(p, shape, i + 1, left - (x - lo), cur, out);
                cur.pop();
            }
        }
        let mut states = vec![vec![0usize; shape.len()]];
        for &c in content {
            let mut next = Vec::new();
            for p in &states {
                strips(p, shape, 0, c, &mut Vec::new(), &mut next);
            }
            states = next;
        }
        let target: Vec<usize> = (1..=shape.len()).map(|i| shape.part(i)).collect();
        states.iter().filter(|s| **s == target).count() as u64
    }
    for content in [vec![2, 1], vec![2, 2], vec![3, 1, 1], vec![2, 2, 1]] {
        let mut prod = stabrep::lr::SchurExpansion::single(Partition::empty());
        for &r in &content {
            prod = prod.mul(&stabrep::lr::SchurExpansion::single(Partition::new(vec![r]).unwrap()));
        }
        for lam in Partition::all_of_size(content.iter().sum()) {
            assert_eq!(prod.get(&lam), BigUint::from(kostka(&lam, &content)), "{lam} {content:?}");
        }
    }
}
