//! Littlewood–Richardson coefficients and skew Schur expansions.
//!
//! Coefficients are counted by enumerating LR skew tableaux: rows weakly
//! increase, columns strictly increase, and the reverse reading word is a
//! lattice word. Results are memoised in process-wide caches.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::partition::{CutDecomposition, Partition, SkewShape};
use crate::Result;

/// `Σ_ν coeffs[ν] s_ν` with strictly positive coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SchurExpansion {
    pub coeffs: BTreeMap<Partition, BigUint>,
}

impl SchurExpansion {
    pub fn get(&self, nu: &Partition) -> BigUint {
        self.coeffs.get(nu).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn single(nu: Partition) -> Self {
        Self { coeffs: BTreeMap::from([(nu, BigUint::from(1u8))]) }
    }

    fn add(&mut self, nu: Partition, c: BigUint) {
        if c.is_zero() {
            return;
        }
        *self.coeffs.entry(nu).or_default() += c;
    }

    /// Product in the Schur basis, via LR coefficients of straight shapes.
    pub fn mul(&self, other: &SchurExpansion) -> SchurExpansion {
        let mut out = SchurExpansion::default();
        for (mu, a) in &self.coeffs {
            for (nu, b) in &other.coeffs {
                let prod = schur_product(mu, nu);
                for (lam, c) in prod.coeffs {
                    out.add(lam, a * b * c);
                }
            }
        }
        out
    }

    /// Hall inner product with another expansion.
    pub fn pairing(&self, other: &SchurExpansion) -> BigUint {
        self.coeffs
            .iter()
            .filter_map(|(nu, a)| other.coeffs.get(nu).map(|b| a * b))
            .sum()
    }
}

/// A skew shape `λ̃ / η̃` built from rows `c`, a strip `γ/ε` and columns `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositeShape {
    pub shape: SkewShape,
    pub c: Vec<usize>,
    pub d: Vec<usize>,
    pub strip: SkewShape,
}

type CoeffKey = (Partition, Partition, Partition);

fn expansion_cache() -> &'static Mutex<HashMap<SkewShape, Arc<SchurExpansion>>> {
    static CACHE: OnceLock<Mutex<HashMap<SkewShape, Arc<SchurExpansion>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn coeff_cache() -> &'static Mutex<HashMap<CoeffKey, BigUint>> {
    static CACHE: OnceLock<Mutex<HashMap<CoeffKey, BigUint>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `c^λ_{μν}`.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> BigUint {
    if mu.size() + nu.size() != lambda.size() || !lambda.contains(mu) || !lambda.contains(nu) {
        return BigUint::zero();
    }
    let key = (lambda.clone(), mu.clone(), nu.clone());
    if let Some(c) = coeff_cache().lock().unwrap().get(&key) {
        return c.clone();
    }
    let shape = SkewShape { outer: lambda.clone(), inner: mu.clone() };
    let counts = enumerate_lr(&shape, Some(nu.parts()));
    let c = BigUint::from(counts.get(nu).copied().unwrap_or(0));
    coeff_cache().lock().unwrap().insert(key, c.clone());
    c
}

/// `s_{λ/μ} = Σ_ν c^λ_{μν} s_ν`.
pub fn skew_schur_expand(shape: &SkewShape) -> Arc<SchurExpansion> {
    let key = normalize(shape);
    if let Some(e) = expansion_cache().lock().unwrap().get(&key) {
        return e.clone();
    }
    let mut exp = SchurExpansion::default();
    for (nu, c) in enumerate_lr(&key, None) {
        exp.add(nu, BigUint::from(c));
    }
    let exp = Arc::new(exp);
    expansion_cache().lock().unwrap().insert(key, exp.clone());
    exp
}

/// `(s_a, s_b)` for two skew shapes.
pub fn skew_pairing(a: &SkewShape, b: &SkewShape) -> BigUint {
    if a.size() != b.size() {
        return BigUint::zero();
    }
    skew_schur_expand(a).pairing(&skew_schur_expand(b))
}

/// `s_μ s_ν`, read off the disconnected skew shape `μ ⊕ ν`.
pub fn schur_product(mu: &Partition, nu: &Partition) -> SchurExpansion {
    let mut exp = SchurExpansion::default();
    for lam in Partition::all_of_size(mu.size() + nu.size()) {
        if lam.contains(mu) && lam.contains(nu) {
            exp.add(lam.clone(), lr_coefficient(&lam, mu, nu));
        }
    }
    exp
}

/// Drops empty rows and empty columns; the skew Schur function is unchanged.
pub fn normalize(shape: &SkewShape) -> SkewShape {
    let keep: Vec<usize> = (1..=shape.outer.len())
        .filter(|&i| shape.outer.part(i) > shape.inner.part(i))
        .collect();
    let outer: Vec<usize> = keep.iter().map(|&i| shape.outer.part(i)).collect();
    let inner: Vec<usize> = keep.iter().map(|&i| shape.inner.part(i)).collect();
    let (outer, inner) = (Partition::new(outer).unwrap(), Partition::new(inner).unwrap());
    let (oc, ic) = (outer.conjugate(), inner.conjugate());
    let cols: Vec<usize> = (1..=oc.len()).filter(|&j| oc.part(j) > ic.part(j)).collect();
    let oc = Partition::new(cols.iter().map(|&j| oc.part(j)).collect()).unwrap();
    let ic = Partition::new(cols.iter().map(|&j| ic.part(j)).collect()).unwrap();
    SkewShape { outer: oc.conjugate(), inner: ic.conjugate() }
}

/// The composite skew shape `[α̃, β̃, γ] / [α̃ − c, β̃ − d, ε]`, with
/// `α̃_i = γ_1 + Σ_{j ≥ i} c_j` and `β̃_i = γ'_1 + Σ_{j ≥ i} d_j`.
pub fn composite_shape(c: &[usize], d: &[usize], strip: &SkewShape) -> Result<CompositeShape> {
    let gamma = &strip.outer;
    let tail_sums = |v: &[usize], base: usize| -> Vec<usize> {
        let mut out = vec![0; v.len()];
        let mut acc = base;
        for i in (0..v.len()).rev() {
            acc += v[i];
            out[i] = acc;
        }
        out
    };
    let alpha = tail_sums(c, gamma.first());
    let beta = tail_sums(d, gamma.len());
    let alpha_in: Vec<usize> = alpha.iter().zip(c).map(|(a, ci)| a - ci).collect();
    let beta_in: Vec<usize> = beta.iter().zip(d).map(|(b, di)| b - di).collect();
    let outer = CutDecomposition::new(alpha, beta, gamma.clone())?.assemble()?;
    let inner = CutDecomposition::new(alpha_in, beta_in, strip.inner.clone())?.assemble()?;
    let shape = normalize(&SkewShape::new(outer, inner)?);
    Ok(CompositeShape { shape, c: c.to_vec(), d: d.to_vec(), strip: strip.clone() })
}

/// `c_ν(c, d, γ/ε)`: the coefficient of `s_ν` in the composite skew Schur function.
pub fn lr_weight_count(c: &[usize], d: &[usize], strip: &SkewShape, nu: &Partition) -> Result<BigUint> {
    let comp = composite_shape(c, d, strip)?;
    if comp.shape.size() != nu.size() {
        return Ok(BigUint::zero());
    }
    Ok(skew_schur_expand(&comp.shape).get(nu))
}

struct Filler<'a> {
    inner: &'a Partition,
    outer: &'a Partition,
    weight: Option<&'a [usize]>,
    order: Vec<(usize, usize)>,
    grid: Vec<Vec<usize>>,
    counts: Vec<usize>,
    out: BTreeMap<Partition, u64>,
}

/// Counts LR tableaux of `shape` by content, optionally restricted to one content.
fn enumerate_lr(shape: &SkewShape, weight: Option<&[usize]>) -> BTreeMap<Partition, u64> {
    // reverse reading order: top to bottom, right to left
    let order = (1..=shape.outer.len())
        .flat_map(|i| ((shape.inner.part(i) + 1)..=shape.outer.part(i)).rev().map(move |j| (i, j)))
        .collect::<Vec<_>>();
    let mut f = Filler {
        inner: &shape.inner,
        outer: &shape.outer,
        weight,
        grid: (1..=shape.outer.len()).map(|i| vec![0; shape.outer.part(i)]).collect(),
        counts: vec![0; order.len() + 2],
        order,
        out: BTreeMap::new(),
    };
    f.fill(0);
    f.out
}

impl Filler<'_> {
    fn fill(&mut self, idx: usize) {
        let Some(&(row, col)) = self.order.get(idx) else {
            let content: Vec<usize> = self.counts.iter().skip(1).take_while(|&&c| c > 0).copied().collect();
            let nu = Partition::new(content).expect("lattice words have partition content");
            *self.out.entry(nu).or_default() += 1;
            return;
        };
        let right = if col < self.outer.part(row) { self.grid[row - 1][col] } else { usize::MAX };
        let above = if row > 1 && col > self.inner.part(row - 1) { self.grid[row - 2][col - 1] } else { 0 };
        let top = self.counts.iter().skip(1).take_while(|&&c| c > 0).count() + 1;
        for x in (above + 1)..=right.min(top) {
            if x > 1 && self.counts[x - 1] <= self.counts[x] {
                continue;
            }
            if let Some(w) = self.weight {
                if self.counts[x] >= w.get(x - 1).copied().unwrap_or(0) {
                    continue;
                }
            }
            self.grid[row - 1][col - 1] = x;
            self.counts[x] += 1;
            self.fill(idx + 1);
            self.counts[x] -= 1;
        }
        self.grid[row - 1][col - 1] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn sk(s: &str) -> SkewShape {
        s.parse().unwrap()
    }

    fn n(x: u32) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(lr_coefficient(&p("1"), &p(""), &p("1")), n(1));
        assert_eq!(lr_coefficient(&p("2,2"), &p("2,1"), &p("1")), n(1));
        assert_eq!(lr_coefficient(&p("3"), &p("1,1"), &p("1")), n(0));
        assert_eq!(lr_coefficient(&p("3,2,1"), &p("2,1"), &p("2,1")), n(2));
        assert_eq!(lr_coefficient(&p("4,2"), &p("2,1"), &p("2,1")), n(1));
    }

    #[test]
    fn expansion_examples() {
        let e = skew_schur_expand(&sk("2,1/1"));
        assert_eq!(e.coeffs, BTreeMap::from([(p("2"), n(1)), (p("1,1"), n(1))]));
        assert_eq!(skew_schur_expand(&sk("3,1/")).coeffs, BTreeMap::from([(p("3,1"), n(1))]));
        assert_eq!(skew_schur_expand(&sk("2,2/1")).coeffs, BTreeMap::from([(p("2,1"), n(1))]));
        assert_eq!(skew_schur_expand(&sk("/")).coeffs, BTreeMap::from([(p(""), n(1))]));
        assert_eq!(skew_schur_expand(&sk("2,1/2,1")).coeffs, BTreeMap::from([(p(""), n(1))]));
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(skew_pairing(&sk("1/"), &sk("1/")), n(1));
        assert_eq!(skew_pairing(&sk("2,1/1"), &sk("2,1/1")), n(2));
        assert_eq!(skew_pairing(&sk("2/"), &sk("1,1/")), n(0));
        assert_eq!(skew_pairing(&sk("2/"), &sk("1/")), n(0));
    }

    #[test]
    fn composite_examples() {
        let empty = SkewShape::default();
        assert_eq!(composite_shape(&[2], &[], &empty).unwrap().shape, sk("2/"));
        assert_eq!(composite_shape(&[1, 1], &[], &empty).unwrap().shape, sk("2,1/1"));
        assert_eq!(composite_shape(&[], &[], &sk("2,1/1")).unwrap().shape, sk("2,1/1"));
        assert_eq!(composite_shape(&[0, 2], &[], &empty).unwrap().shape, sk("2/"));
        assert_eq!(composite_shape(&[], &[2], &empty).unwrap().shape, sk("1,1/"));
        let comp = composite_shape(&[1], &[1], &sk("1/")).unwrap();
        assert_eq!(comp.shape.size(), 3);
        assert_eq!(comp.c, vec![1]);
    }

    #[test]
    fn weight_count_examples() {
        let e = SkewShape::default();
        assert_eq!(lr_weight_count(&[1], &[], &e, &p("1")).unwrap(), n(1));
        assert_eq!(lr_weight_count(&[2], &[], &e, &p("1,1")).unwrap(), n(0));
        assert_eq!(lr_weight_count(&[1, 1], &[], &e, &p("2")).unwrap(), n(1));
        assert_eq!(lr_weight_count(&[1, 1], &[], &e, &p("1,1")).unwrap(), n(1));
    }

    #[test]
    fn normalize_drops_empty_lines() {
        assert_eq!(normalize(&sk("3,1/1,1")), sk("2/"));
        assert_eq!(normalize(&sk("2,2/2")), sk("2/"));
    }
}
