use proptest::prelude::*;
use stabrep::{Bipartition, CutDecomposition, Partition};

fn partition(max_parts: usize, max_part: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..=max_part, 0..=max_parts).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

proptest! {
    #[test]
    fn conjugate_is_involution(p in partition(8, 8)) {
        prop_assert_eq!(p.conjugate().conjugate(), p.clone());
        prop_assert_eq!(p.conjugate().size(), p.size());
        prop_assert_eq!(p.conjugate().diagonal_length(), p.diagonal_length());
    }

    #[test]
    fn cut_round_trip(p in partition(8, 8), k in 0usize..4, l in 0usize..4) {
        let d = p.diagonal_length();
        prop_assume!(k <= d && l <= d);
        let dec = CutDecomposition::cut(&p, k, l).unwrap();
        prop_assert!(dec.validate().is_ok());
        prop_assert_eq!(dec.assemble().unwrap(), p.clone());
        let cells = k * l + dec.alpha.iter().sum::<usize>() + dec.beta.iter().sum::<usize>() + dec.gamma.size();
        prop_assert_eq!(cells, p.size());
    }

    #[test]
    fn add_remove_inverse(p in partition(6, 6)) {
        for c in p.addable_cells() {
            let q = p.add_cell(c.content()).unwrap();
            prop_assert_eq!(q.size(), p.size() + 1);
            prop_assert_eq!(q.remove_cell(c.content()).unwrap(), p.clone());
        }
        for c in p.removable_cells() {
            let q = p.remove_cell(c.content()).unwrap();
            prop_assert_eq!(q.add_cell(c.content()).unwrap(), p.clone());
        }
    }

    #[test]
    fn add_cell_content_conjugates(p in partition(6, 6), c in -7i64..7) {
        let a = p.add_cell(c).map(|x| x.conjugate());
        prop_assert_eq!(a, p.conjugate().add_cell(-c));
    }

    #[test]
    fn bipartition_weight_round_trip(a in partition(3, 5), b in partition(3, 5), extra in 0usize..3) {
        let bp = Bipartition::new(a, b);
        let n = bp.len() + extra;
        prop_assume!(n > 0);
        let w = bp.gl_weight(n).unwrap();
        prop_assert!(w.windows(2).all(|x| x[0] >= x[1]));
        prop_assert_eq!(Bipartition::from_weight(&w).unwrap(), bp.clone());
        prop_assert_eq!(bp.dual().dual(), bp);
    }

    #[test]
    fn text_round_trip(a in partition(5, 9), b in partition(5, 9)) {
        prop_assert_eq!(a.to_string().parse::<Partition>().unwrap(), a.clone());
        let bp = Bipartition::new(a, b);
        prop_assert_eq!(bp.to_string().parse::<Bipartition>().unwrap(), bp);
    }
}

#[test]
fn malformed_text_is_rejected() {
    for s in ["1,2", "a", "3,,1", "-1"] {
        assert!(s.parse::<Partition>().is_err(), "{s}");
    }
    assert!("1|2|3".parse::<Bipartition>().is_err());
}
