use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabrep::central::AffineExponent;
use stabrep::rational::{q, to_i64, Q};
use stabrep::slz::{
    apply_e, apply_f, apply_factor, basis_vector, bracket_check, grothendieck_e, grothendieck_f, iso_map, BasisIndex,
    FamilySpec, ModuleKind, ModuleSpec, SparseVector, TupleIndex, Twist,
};
use stabrep::Partition;

const TWISTS: [&[Twist]; 6] =
    [&[], &[Twist::Dual], &[Twist::Tau], &[Twist::Dual, Twist::Tau], &[Twist::Tau, Twist::Dual], &[Twist::Dual, Twist::Dual]];

fn twisted(kind: ModuleKind, twists: &[Twist]) -> ModuleSpec {
    twists.iter().fold(ModuleSpec::new(kind), |m, t| m.twist(*t))
}

fn wedge_basis(n: usize, lo: i64, hi: i64) -> Vec<BasisIndex> {
    fn rec(n: usize, top: i64, lo: i64, cur: &mut Vec<i64>, out: &mut Vec<BasisIndex>) {
        if cur.len() == n {
            out.push(BasisIndex::Wedge(cur.clone()));
            return;
        }
        for x in (lo..=top).rev() {
            cur.push(x);
            rec(n, x - 1, lo, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, hi, lo, &mut Vec::new(), &mut out);
    out
}

/// Smaller, for exhaustive scans of a truncated basis.
fn small_family() -> FamilySpec {
    "a=A1:1,0;b=B1:0;gamma=1;abar=C1:0;bbar=D1:0;gammabar=1".parse().unwrap()
}

fn family() -> FamilySpec {
    "a=A1:1,0|A2:0;b=B1:1,0;gamma=1;abar=C1:0;bbar=D1:0;gammabar=1".parse().unwrap()
}

#[test]
fn fock_brackets() {
    let sample: Vec<BasisIndex> = Partition::up_to_size(8).into_iter().map(BasisIndex::Fock).collect();
    for tw in TWISTS {
        let m = twisted(ModuleKind::Fock, tw);
        for i in -8..=8 {
            for j in -8..=8 {
                assert!(bracket_check(&m, i, j, &sample).unwrap(), "{m} ({i},{j})");
            }
        }
    }
}

#[test]
fn cz_and_wedge_brackets() {
    let cz: Vec<BasisIndex> = (-8..=8).map(BasisIndex::Int).collect();
    for tw in TWISTS {
        let m = twisted(ModuleKind::CZ, tw);
        for i in -6..=6 {
            for j in -6..=6 {
                assert!(bracket_check(&m, i, j, &cz).unwrap(), "{m} ({i},{j})");
            }
        }
        for n in 1..=4 {
            let m = twisted(ModuleKind::Wedge(n), tw);
            let sample = wedge_basis(n, -4, 4);
            for i in -5..=5 {
                for j in -5..=5 {
                    assert!(bracket_check(&m, i, j, &sample).unwrap(), "{m} ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn tensor_brackets() {
    let m: ModuleSpec = "tensor(wedge2,fock^tau,cz^dual)".parse().unwrap();
    let mut sample = Vec::new();
    for w in wedge_basis(2, -2, 2) {
        for p in Partition::up_to_size(3) {
            for c in -2..=2 {
                sample.push(BasisIndex::Tensor(vec![w.clone(), BasisIndex::Fock(p.clone()), BasisIndex::Int(c)]));
            }
        }
    }
    for i in -3..=3 {
        for j in -3..=3 {
            assert!(bracket_check(&m, i, j, &sample).unwrap(), "({i},{j})");
        }
    }
}

#[test]
fn twist_coherence() {
    let sample: Vec<BasisIndex> = Partition::up_to_size(5).into_iter().map(BasisIndex::Fock).collect();
    let plain = ModuleSpec::new(ModuleKind::Fock);
    let dual = plain.clone().twist(Twist::Dual);
    let tau = plain.clone().twist(Twist::Tau);
    let dt = plain.clone().twist(Twist::Dual).twist(Twist::Tau);
    let td = plain.clone().twist(Twist::Tau).twist(Twist::Dual);
    let twice = plain.clone().twist(Twist::Tau).twist(Twist::Tau);
    for b in sample {
        let v = basis_vector(b);
        for c in -5..=5 {
            assert_eq!(apply_f(&dual, c, &v).unwrap(), apply_e(&plain, c, &v).unwrap());
            assert_eq!(apply_e(&dual, c, &v).unwrap(), apply_f(&plain, c, &v).unwrap());
            assert_eq!(apply_f(&tau, c, &v).unwrap(), apply_f(&plain, -c, &v).unwrap());
            assert_eq!(apply_f(&dt, c, &v).unwrap(), apply_f(&td, c, &v).unwrap());
            assert_eq!(apply_f(&dt, c, &v).unwrap(), apply_e(&plain, -c, &v).unwrap());
            assert_eq!(apply_f(&twice, c, &v).unwrap(), apply_f(&plain, c, &v).unwrap());
        }
    }
}

/// Random walk of box moves from the base tuple.
fn random_tuple(fam: &FamilySpec, rng: &mut ChaCha8Rng, steps: usize) -> TupleIndex {
    let cosets = fam.active_cosets();
    let mut t = fam.base_tuple();
    for _ in 0..steps {
        let x = &cosets[rng.gen_range(0..cosets.len())].representative;
        let m = rng.gen_range(-4..=4);
        let next = if rng.gen_bool(0.6) { grothendieck_f(fam, x, m, &t) } else { grothendieck_e(fam, x, m, &t) };
        if let Some(n) = next.unwrap() {
            t = n;
        }
    }
    t
}

fn step(fam: &FamilySpec, raise: bool, x: &AffineExponent, m: i64, t: &TupleIndex) -> Option<TupleIndex> {
    if raise { grothendieck_f(fam, x, m, t) } else { grothendieck_e(fam, x, m, t) }.unwrap()
}

#[test]
fn distinct_cosets_commute() {
    let fam = small_family();
    let basis = fam.truncated_basis(1, 2);
    assert!(basis.len() > 100);
    let cosets = fam.active_cosets();
    for (i, x) in cosets.iter().enumerate() {
        for (j, y) in cosets.iter().enumerate() {
            if i == j {
                continue;
            }
            let (x, y) = (&x.representative, &y.representative);
            for t in basis.iter().step_by(15) {
                for m in -2..=2 {
                    for m2 in -2..=2 {
                        for (rx, ry) in [(true, true), (true, false), (false, false)] {
                            let xy = step(&fam, ry, y, m2, t).and_then(|u| step(&fam, rx, x, m, &u));
                            let yx = step(&fam, rx, x, m, t).and_then(|u| step(&fam, ry, y, m2, &u));
                            assert_eq!(xy, yx, "{x}+{m} vs {y}+{m2} on {t:?}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn dmu_brackets() {
    let fam = small_family();
    let sample: Vec<BasisIndex> = fam.truncated_basis(1, 2).into_iter().step_by(9).map(BasisIndex::Tuple).collect();
    for ac in fam.active_cosets() {
        let spec = ModuleSpec::new(ModuleKind::DMu { family: Box::new(fam.clone()), coset: ac.representative.clone() });
        for i in -3..=3 {
            for j in -3..=3 {
                assert!(bracket_check(&spec, i, j, &sample).unwrap(), "{} ({i},{j})", ac.representative);
            }
        }
    }
}

#[test]
fn iso_map_intertwines() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for fam in [family(), FamilySpec::simple(2, 1, "1".parse().unwrap(), 1, 1, Partition::empty())] {
        let tensor = fam.tensor_spec();
        for (pos, ac) in fam.active_cosets().into_iter().enumerate() {
            for shift in [0, 3] {
                let x = ac.representative.add_int(shift);
                for _ in 0..60 {
                    let t = random_tuple(&fam, &mut rng, 12);
                    let v = basis_vector(iso_map(&fam, &t).unwrap());
                    for m in -6..=6 {
                        for raise in [true, false] {
                            let lhs: SparseVector = step(&fam, raise, &x, m, &t)
                                .map(|u| basis_vector(iso_map(&fam, &u).unwrap()))
                                .unwrap_or_default();
                            let rhs = apply_factor(&tensor, pos, raise, m + shift, &v).unwrap();
                            assert_eq!(lhs, rhs, "coset {x} m={m} raise={raise} t={t:?}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn gamma_block_is_fock() {
    let fam = family();
    let gamma = fam.active_cosets().into_iter().find(|a| a.kind == stabrep::slz::BlockKind::Gamma).unwrap();
    let fock = ModuleSpec::new(ModuleKind::Fock);
    for p in Partition::up_to_size(5) {
        let mut t = fam.base_tuple();
        t.delta = p.clone();
        for m in -5..=5 {
            let expected = apply_f(&fock, m, &basis_vector(BasisIndex::Fock(p.clone()))).unwrap();
            let got = step(&fam, true, &gamma.representative, m, &t)
                .map(|u| basis_vector(BasisIndex::Fock(u.delta)))
                .unwrap_or_default();
            assert_eq!(got, expected);
        }
    }
}

/// `λ = (λ⁺, λ⁻)` for generator values `vals`: row blocks `A_j`, column blocks `B_j`, then `γ`.
fn assemble(rows: &[(i64, Vec<i64>)], cols: &[(i64, Vec<i64>)], gamma: &Partition) -> Partition {
    let k: i64 = rows.iter().map(|r| r.1.len() as i64).sum();
    let l: i64 = cols.iter().map(|c| c.1.len() as i64).sum();
    let mut parts: Vec<i64> = rows.iter().flat_map(|(g, s)| s.iter().map(move |x| g + l + x)).collect();
    let heights: Vec<i64> = cols.iter().flat_map(|(g, s)| s.iter().map(move |x| g + k + x)).collect();
    let tallest = heights.iter().copied().max().unwrap_or(k);
    for r in k + 1..=tallest.max(k + gamma.len() as i64) {
        let under = heights.iter().filter(|&&h| h >= r).count() as i64;
        parts.push(under + gamma.part((r - k) as usize) as i64);
    }
    assert!(parts.windows(2).all(|w| w[0] >= w[1]), "not a partition: {parts:?}");
    Partition::new(parts.into_iter().filter(|&x| x > 0).map(|x| x as usize).collect()).unwrap()
}

fn finite_bipartition(fam: &FamilySpec, t: &TupleIndex, vals: &BTreeMap<String, Q>) -> (Partition, Partition) {
    let g = |name: &str| to_i64(&vals[name]).unwrap();
    let blocks = |bs: &[stabrep::slz::Block], seqs: &[Vec<i64>]| -> Vec<(i64, Vec<i64>)> {
        bs.iter().zip(seqs).map(|(b, s)| (g(&b.name), s.clone())).collect()
    };
    (
        assemble(&blocks(&fam.a, &t.a), &blocks(&fam.b, &t.b), &t.delta),
        assemble(&blocks(&fam.abar, &t.abar), &blocks(&fam.bbar, &t.bbar), &t.delta_bar),
    )
}

/// With widely separated generator values, `f` at `X + m` adds the `gl_n` box of content
/// `X(vals) + m`: a cell of that content on `λ⁺`, or removal of a cell of content
/// `−t − X(vals) − m` from `λ⁻`.
#[test]
fn finite_instantiation_matches_contents() {
    let fam = family();
    let t_val = 1_000_000_000i64;
    let vals: BTreeMap<String, Q> =
        [("A1", 3000), ("A2", 2000), ("B1", 500), ("C1", 4000), ("D1", 700), ("t", t_val)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), q(v)))
            .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut moves = 0;
    for _ in 0..80 {
        let t = random_tuple(&fam, &mut rng, 15);
        let (plus, minus) = finite_bipartition(&fam, &t, &vals);
        for ac in fam.active_cosets() {
            let base = to_i64(ac.representative.substitute(&vals).constant_part()).unwrap();
            for m in -6..=6 {
                let c = base + m;
                for raise in [true, false] {
                    let finite = if raise {
                        plus.add_cell(c).map(|p| (p, minus.clone())).or_else(|| minus.remove_cell(-t_val - c).map(|p| (plus.clone(), p)))
                    } else {
                        plus.remove_cell(c).map(|p| (p, minus.clone())).or_else(|| minus.add_cell(-t_val - c).map(|p| (plus.clone(), p)))
                    };
                    let got = step(&fam, raise, &ac.representative, m, &t).map(|u| finite_bipartition(&fam, &u, &vals));
                    assert_eq!(got, finite, "{} m={m} raise={raise} t={t:?}", ac.representative);
                    moves += usize::from(got.is_some());
                }
            }
        }
    }
    assert!(moves > 200);
}
