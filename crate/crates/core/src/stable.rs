//! Finite and stable multiplicities of `Hom(μ, λ)` as a diagonal module.
//!
//! A [`HomFamily`] fixes `(a, b, γ, δ)`; instances pair `λ = [α, β, γ]` with
//! `μ = [α + a, β + b, δ]` for growing `α, β`. The stable formulas are sums
//! of products of composite-shape LR counts; [`verify_stability`] compares
//! them with the finite-rank oracle over a window of ranks.

use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::lr::{lr_coefficient, lr_weight_count, skew_pairing, skew_schur_expand};
use crate::partition::{Bipartition, CutDecomposition, Partition, SkewShape};
use crate::weyl::{self, Group};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HomFamily {
    pub k: usize,
    pub l: usize,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub gamma: Partition,
    pub delta: Partition,
}

impl HomFamily {
    pub fn new(a: Vec<i64>, b: Vec<i64>, gamma: Partition, delta: Partition) -> Self {
        Self { k: a.len(), l: b.len(), a, b, gamma, delta }
    }

    /// The family of `End(λ)`: `a = b = 0`, `γ = δ`.
    pub fn end(k: usize, l: usize, gamma: Partition) -> Self {
        Self::new(vec![0; k], vec![0; l], gamma.clone(), gamma)
    }

    pub fn empty() -> Self {
        Self::new(vec![], vec![], Partition::empty(), Partition::empty())
    }

    /// `|a| + |b| + |δ| − |γ|`, the forced value of `|ν̄| − |ν|`.
    pub fn degree(&self) -> i64 {
        self.a.iter().sum::<i64>() + self.b.iter().sum::<i64>() + self.delta.size() as i64
            - self.gamma.size() as i64
    }

    fn check(&self) -> Result<()> {
        if self.a.len() != self.k || self.b.len() != self.l {
            return Err(Error::InvalidFamily("lengths of a, b disagree with (k, l)".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyInstance {
    pub lambda_n: Partition,
    pub mu_n: Partition,
    pub n: usize,
}

/// `(s_{λ/ν}, s_{μ/ν̄}) = dim Hom_{GL_n}(V_ν, V_λ ⊗ V_μ^*)`.
pub fn finite_hom_multiplicity_gl(lambda: &Partition, mu: &Partition, nu: &Bipartition, n: usize) -> Result<BigUint> {
    let needed = (lambda.len() + nu.minus.len()).min(mu.len() + nu.plus.len());
    if n < needed {
        return Err(Error::RankTooSmall { n, needed });
    }
    if !lambda.contains(&nu.plus) || !mu.contains(&nu.minus) {
        return Ok(BigUint::zero());
    }
    let a = SkewShape { outer: lambda.clone(), inner: nu.plus.clone() };
    let b = SkewShape { outer: mu.clone(), inner: nu.minus.clone() };
    Ok(skew_pairing(&a, &b))
}

/// Vectors `x ≥ lower` (entrywise) with `Σ x = total`.
fn compositions(total: usize, lower: &[usize]) -> Vec<Vec<usize>> {
    let base: usize = lower.iter().sum();
    if base > total {
        return vec![];
    }
    let mut out = Vec::new();
    let mut cur = lower.to_vec();
    fn rec(i: usize, left: usize, cur: &mut Vec<usize>, lower: &[usize], out: &mut Vec<Vec<usize>>) {
        if i + 1 >= cur.len() {
            if let Some(last) = cur.last_mut() {
                *last = lower[lower.len() - 1] + left;
                out.push(cur.clone());
            } else if left == 0 {
                out.push(vec![]);
            }
            return;
        }
        for x in 0..=left {
            cur[i] = lower[i] + x;
            rec(i + 1, left - x, cur, lower, out);
        }
        cur[i] = lower[i];
    }
    rec(0, total - base, &mut cur, lower, &mut out);
    out
}

fn shifted(v: &[usize], s: &[i64]) -> Vec<usize> {
    v.iter().zip(s).map(|(x, y)| (*x as i64 + y) as usize).collect()
}

/// `Σ_{c,d,ε} c_ω(c, d, γ/ε) · c_ξ(c + a, d + b, δ/ε)` over the index set with
/// `|c| + |d| + |γ| − |ε| = |ω|` and `|c| + |d| + |a| + |b| + |δ| − |ε| = |ξ|`.
fn stable_sum(fam: &HomFamily, omega: &Partition, xi: &Partition) -> Result<BigUint> {
    fam.check()?;
    if xi.size() as i64 - omega.size() as i64 != fam.degree() {
        return Ok(BigUint::zero());
    }
    let lower_c: Vec<usize> = fam.a.iter().map(|&x| (-x).max(0) as usize).collect();
    let lower_d: Vec<usize> = fam.b.iter().map(|&x| (-x).max(0) as usize).collect();
    let lower: Vec<usize> = lower_c.iter().chain(&lower_d).copied().collect();
    let mut total = BigUint::zero();
    for eps in fam.gamma.meet(&fam.delta).subpartitions() {
        let s = omega.size() as i64 - fam.gamma.size() as i64 + eps.size() as i64;
        if s < 0 {
            continue;
        }
        let strip1 = SkewShape::new(fam.gamma.clone(), eps.clone())?;
        let strip2 = SkewShape::new(fam.delta.clone(), eps.clone())?;
        for cd in compositions(s as usize, &lower) {
            let (c, d) = cd.split_at(fam.k);
            let left = lr_weight_count(c, d, &strip1, omega)?;
            if left.is_zero() {
                continue;
            }
            let right = lr_weight_count(&shifted(c, &fam.a), &shifted(d, &fam.b), &strip2, xi)?;
            total += left * right;
        }
    }
    Ok(total)
}

/// The stable multiplicity of `V_ν` in `Hom(μ, λ)` for type `GL`.
pub fn stable_hom_multiplicity_gl(fam: &HomFamily, nu: &Bipartition) -> Result<BigUint> {
    stable_sum(fam, &nu.plus, &nu.minus)
}

/// The stable multiplicity of `V_ν` in `Hom(μ, λ)` for types `O` and `Sp`.
pub fn stable_hom_multiplicity_osp(fam: &HomFamily, nu: &Partition) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for omega in nu.subpartitions() {
        let rest = SkewShape { outer: nu.clone(), inner: omega.clone() };
        for (xi, c) in &skew_schur_expand(&rest).coeffs {
            let inner = stable_sum(fam, &omega, xi)?;
            total += c * inner;
        }
    }
    Ok(total)
}

/// `Σ_{η,ω,ξ} c^λ_{ηω} c^μ_{ηξ} c^ν_{ωξ}`.
pub fn king_multiplicity(lambda: &Partition, mu: &Partition, nu: &Partition) -> BigUint {
    let mut total = BigUint::zero();
    for eta in lambda.meet(mu).subpartitions() {
        let el = skew_schur_expand(&SkewShape { outer: lambda.clone(), inner: eta.clone() });
        let em = skew_schur_expand(&SkewShape { outer: mu.clone(), inner: eta.clone() });
        for (omega, x) in &el.coeffs {
            if omega.size() > nu.size() {
                continue;
            }
            for (xi, y) in &em.coeffs {
                let c = lr_coefficient(nu, omega, xi);
                if !c.is_zero() {
                    total += x * y * c;
                }
            }
        }
    }
    total
}

/// `λ^{(n)} = [α, β, γ]`, `μ^{(n)} = [α + a, β + b, δ]`.
pub fn instantiate_family(fam: &HomFamily, alpha: &[i64], beta: &[i64], n: usize) -> Result<FamilyInstance> {
    fam.check()?;
    if alpha.len() != fam.k || beta.len() != fam.l {
        return Err(Error::InvalidInstance("α, β lengths disagree with (k, l)".into()));
    }
    let nonneg = |v: Vec<i64>, what: &str| -> Result<Vec<usize>> {
        v.iter()
            .map(|&x| usize::try_from(x).map_err(|_| Error::InvalidInstance(format!("{what} has a negative entry {x}"))))
            .collect()
    };
    let add = |x: &[i64], y: &[i64]| x.iter().zip(y).map(|(p, q)| p + q).collect::<Vec<_>>();
    let build = |al: Vec<usize>, be: Vec<usize>, g: &Partition| {
        CutDecomposition::new(al, be, g.clone())
            .and_then(|d| d.assemble())
            .map_err(|e| Error::InvalidInstance(e.to_string()))
    };
    let lambda_n = build(nonneg(alpha.to_vec(), "α")?, nonneg(beta.to_vec(), "β")?, &fam.gamma)?;
    let mu_n = build(nonneg(add(alpha, &fam.a), "α + a")?, nonneg(add(beta, &fam.b), "β + b")?, &fam.delta)?;
    for p in [&lambda_n, &mu_n] {
        if p.len() > n {
            return Err(Error::InvalidInstance(format!("ℓ({p}) = {} exceeds n = {n}", p.len())));
        }
    }
    Ok(FamilyInstance { lambda_n, mu_n, n })
}

/// The instantiation used for stability probes: `α_i = g (k − i + 1) n` with `g`
/// the least value not below `g0` for which both triples assemble, and
/// `β_j = (l − j + 1) ⌊(n − k) / (l + 1)⌋` so that columns stay within rank `n`.
pub fn gap_instance(fam: &HomFamily, g0: usize, n: usize) -> Result<FamilyInstance> {
    let step = n.saturating_sub(fam.k) / (fam.l + 1);
    if fam.l > 0 && step == 0 {
        return Err(Error::InvalidInstance(format!("rank {n} leaves no room for the column blocks")));
    }
    let beta: Vec<i64> = (1..=fam.l).map(|j| ((fam.l - j + 1) * step) as i64).collect();
    let mut last = None;
    for g in g0.max(1)..g0.max(1) + 64 {
        let alpha: Vec<i64> = (1..=fam.k).map(|i| (g * (fam.k - i + 1) * n) as i64).collect();
        match instantiate_family(fam, &alpha, &beta, usize::MAX) {
            Ok(inst) => return Ok(FamilyInstance { n, ..inst }),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::InvalidInstance("no admissible gap".into())))
}

/// The probe size used to pick gaps: large enough that `ν` fits in every block.
fn gap_floor(fam: &HomFamily, probe: usize) -> usize {
    let spread: i64 = fam.a.iter().chain(&fam.b).map(|x| x.abs()).sum();
    1 + probe + spread as usize + fam.gamma.first().max(fam.delta.first()) + fam.gamma.len().max(fam.delta.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StabilityGroup {
    Gl,
    O,
    Sp,
}

impl StabilityGroup {
    fn oracle(&self, n: usize) -> Group {
        match self {
            StabilityGroup::Gl => Group::Gl(n),
            StabilityGroup::O => Group::So(n),
            StabilityGroup::Sp => Group::Sp(n),
        }
    }
}

/// A simple constituent `V_ν` to probe: a bipartition for `gl`, a partition for `o`/`sp`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Probe {
    Gl(Bipartition),
    Osp(Partition),
}

impl Probe {
    fn size(&self) -> usize {
        match self {
            Probe::Gl(b) => b.plus.size().max(b.minus.size()),
            Probe::Osp(p) => p.size(),
        }
    }

    fn weight(&self, n: usize) -> Option<Vec<i64>> {
        match self {
            Probe::Gl(b) => b.gl_weight(n).ok(),
            Probe::Osp(p) => (p.len() <= n).then(|| (1..=n).map(|i| p.part(i) as i64).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityPoint {
    pub n: usize,
    pub lambda: String,
    pub mu: String,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub points: Vec<StabilityPoint>,
    pub stable_value: u64,
    /// All oracle values in the window agree. A finite-window heuristic, not a proof.
    pub stabilized: bool,
    pub matches_stable: bool,
}

/// `[V_λ ⊗ V_μ^* : V_ν]` at rank `n`, computed as `[V_ν ⊗ V_μ : V_λ]`.
fn oracle_hom_multiplicity(group: Group, lambda: &[i64], mu: &[i64], nu: Option<Vec<i64>>) -> Result<u64> {
    let Some(nu) = nu else { return Ok(0) };
    weyl::tensor_multiplicity(group, &nu, mu, lambda)
}

fn padded(p: &Partition, n: usize) -> Vec<i64> {
    (1..=n).map(|i| p.part(i) as i64).collect()
}

/// Oracle multiplicities of `V_ν` in `Hom(μ^{(n)}, λ^{(n)})` across `n_range`,
/// against the closed-form stable value.
pub fn verify_stability(
    fam: &HomFamily,
    probe: &Probe,
    group: StabilityGroup,
    n_range: RangeInclusive<usize>,
) -> Result<StabilityReport> {
    let stable = match (probe, group) {
        (Probe::Gl(nu), StabilityGroup::Gl) => stable_hom_multiplicity_gl(fam, nu)?,
        (Probe::Osp(nu), StabilityGroup::O | StabilityGroup::Sp) => stable_hom_multiplicity_osp(fam, nu)?,
        _ => return Err(Error::InvalidInstance("probe type does not match the group".into())),
    };
    let g0 = gap_floor(fam, probe.size());
    let mut points = Vec::new();
    for n in n_range {
        let inst = gap_instance(fam, g0, n)?;
        if inst.lambda_n.len() > n || inst.mu_n.len() > n {
            return Err(Error::InvalidInstance(format!("instance does not fit rank {n}")));
        }
        let oracle = group.oracle(n);
        let m = oracle_hom_multiplicity(oracle, &padded(&inst.lambda_n, n), &padded(&inst.mu_n, n), probe.weight(n))?;
        points.push(StabilityPoint { n, lambda: inst.lambda_n.to_string(), mu: inst.mu_n.to_string(), multiplicity: m });
    }
    Ok(report(points, stable.to_u64().expect("stable value fits in u64")))
}

fn report(points: Vec<StabilityPoint>, stable_value: u64) -> StabilityReport {
    let stabilized = points.windows(2).all(|w| w[0].multiplicity == w[1].multiplicity);
    let matches_stable = stabilized && points.iter().all(|p| p.multiplicity == stable_value);
    StabilityReport { points, stable_value, stabilized, matches_stable }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedReport {
    pub points: Vec<StabilityPoint>,
    pub value: Option<u64>,
    pub stabilized: bool,
}

/// Oracle data for `Hom(μ^{(n)}, λ^{(n)})` with bipartition highest weights:
/// the plus parts come from `plus_fam`, the minus parts from `minus_fam`.
/// No closed form is asserted.
pub fn mixed_stable_multiplicity(
    plus_fam: &HomFamily,
    minus_fam: &HomFamily,
    nu: &Bipartition,
    n_range: RangeInclusive<usize>,
) -> Result<MixedReport> {
    let probe = nu.plus.size().max(nu.minus.size());
    let (gp, gm) = (gap_floor(plus_fam, probe), gap_floor(minus_fam, probe));
    let mut points = Vec::new();
    for n in n_range {
        let p = gap_instance(plus_fam, gp, n)?;
        let m = gap_instance(minus_fam, gm, n)?;
        let lambda = Bipartition::new(p.lambda_n, m.lambda_n);
        let mu = Bipartition::new(p.mu_n, m.mu_n);
        let (lw, mw) = (
            lambda.gl_weight(n).map_err(|e| Error::InvalidInstance(e.to_string()))?,
            mu.gl_weight(n).map_err(|e| Error::InvalidInstance(e.to_string()))?,
        );
        let mult = oracle_hom_multiplicity(Group::Gl(n), &lw, &mw, nu.gl_weight(n).ok())?;
        points.push(StabilityPoint { n, lambda: lambda.to_string(), mu: mu.to_string(), multiplicity: mult });
    }
    let stabilized = points.windows(2).all(|w| w[0].multiplicity == w[1].multiplicity);
    let value = points.last().map(|p| p.multiplicity);
    Ok(MixedReport { points, value, stabilized })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn bp(s: &str) -> Bipartition {
        s.parse().unwrap()
    }

    fn n(x: u32) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn finite_examples() {
        assert_eq!(finite_hom_multiplicity_gl(&p("1"), &p("1"), &bp("|"), 2).unwrap(), n(1));
        assert_eq!(finite_hom_multiplicity_gl(&p("1"), &p("1"), &bp("1|1"), 3).unwrap(), n(1));
        assert_eq!(finite_hom_multiplicity_gl(&p("1"), &p("1"), &bp("2|"), 3).unwrap(), n(0));
        assert_eq!(
            finite_hom_multiplicity_gl(&p("1,1"), &p("1,1"), &bp("1|1"), 2),
            Err(Error::RankTooSmall { n: 2, needed: 3 })
        );
    }

    #[test]
    fn stable_gl_examples() {
        let end = HomFamily::end(1, 0, p(""));
        assert_eq!(stable_hom_multiplicity_gl(&end, &bp("1|1")).unwrap(), n(1));
        assert_eq!(stable_hom_multiplicity_gl(&end, &bp("1,1|1,1")).unwrap(), n(0));
        assert_eq!(stable_hom_multiplicity_gl(&end, &bp("|")).unwrap(), n(1));
        let shift = HomFamily::new(vec![1], vec![], p(""), p(""));
        assert_eq!(stable_hom_multiplicity_gl(&shift, &bp("|1")).unwrap(), n(1));
        assert_eq!(stable_hom_multiplicity_gl(&shift, &bp("1|")).unwrap(), n(0));
    }

    #[test]
    fn stable_osp_examples() {
        let end = HomFamily::end(1, 0, p(""));
        assert_eq!(stable_hom_multiplicity_osp(&end, &p("")).unwrap(), n(1));
        assert_eq!(stable_hom_multiplicity_osp(&end, &p("1,1")).unwrap(), n(1));
        assert_eq!(stable_hom_multiplicity_osp(&HomFamily::empty(), &p("1")).unwrap(), n(0));
    }

    #[test]
    fn king_examples() {
        assert_eq!(king_multiplicity(&p("1"), &p("1"), &p("")), n(1));
        assert_eq!(king_multiplicity(&p("1"), &p("1"), &p("1,1")), n(1));
        assert_eq!(king_multiplicity(&p("1"), &p(""), &p("1")), n(1));
        assert_eq!(king_multiplicity(&p("1"), &p("1"), &p("2")), n(1));
    }

    #[test]
    fn instantiation_examples() {
        let end = HomFamily::end(1, 0, p(""));
        let inst = instantiate_family(&end, &[6], &[], 6).unwrap();
        assert_eq!((inst.lambda_n, inst.mu_n), (p("6"), p("6")));

        let fam = HomFamily::new(vec![1], vec![0, 0], p("2"), p("1"));
        let inst = instantiate_family(&fam, &[9], &[7, 4], 12).unwrap();
        assert_eq!(inst.lambda_n, p("11,4,2,2,2,1,1,1"));
        assert_eq!(inst.mu_n, p("12,3,2,2,2,1,1,1"));

        let neg = HomFamily::new(vec![-2], vec![], p(""), p(""));
        assert!(matches!(instantiate_family(&neg, &[1], &[], 4), Err(Error::InvalidInstance(_))));
        assert!(matches!(instantiate_family(&fam, &[9], &[7, 4], 7), Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn compositions_with_bounds() {
        assert_eq!(compositions(2, &[0, 1]), vec![vec![0, 2], vec![1, 1]]);
        assert_eq!(compositions(0, &[]), vec![Vec::<usize>::new()]);
        assert!(compositions(1, &[]).is_empty());
        assert!(compositions(1, &[2]).is_empty());
    }

    #[test]
    fn stability_examples() {
        let end = HomFamily::end(1, 0, p(""));
        let r = verify_stability(&end, &Probe::Gl(bp("1|1")), StabilityGroup::Gl, 4..=6).unwrap();
        assert_eq!(r.points.iter().map(|x| x.multiplicity).collect::<Vec<_>>(), vec![1, 1, 1]);
        assert!(r.stabilized && r.matches_stable);

        let shift = HomFamily::new(vec![1], vec![], p(""), p(""));
        let r = verify_stability(&shift, &Probe::Gl(bp("|1")), StabilityGroup::Gl, 4..=6).unwrap();
        assert_eq!(r.points.iter().map(|x| x.multiplicity).collect::<Vec<_>>(), vec![1, 1, 1]);
        assert!(r.matches_stable);

        let r = verify_stability(&end, &Probe::Osp(p("1,1")), StabilityGroup::O, 2..=4).unwrap();
        assert_eq!(r.points.iter().map(|x| x.multiplicity).collect::<Vec<_>>(), vec![1, 1, 1]);
        assert!(r.matches_stable);
    }

    #[test]
    fn mixed_examples() {
        let end = HomFamily::end(1, 0, p(""));
        let empty = HomFamily::empty();
        let r = mixed_stable_multiplicity(&end, &empty, &bp("1|1"), 4..=6).unwrap();
        assert_eq!((r.value, r.stabilized), (Some(1), true));
        let r = mixed_stable_multiplicity(&empty, &empty, &bp("|"), 2..=4).unwrap();
        assert_eq!((r.value, r.stabilized), (Some(1), true));
        let r = mixed_stable_multiplicity(&end, &end, &bp("|"), 5..=7).unwrap();
        assert_eq!((r.value, r.stabilized), (Some(1), true));
    }
}
