//! Finite-rank character oracle for `gl_n`, `so_{2n+1}` and `sp_{2n}`.
//!
//! Dominant weight multiplicities come from Freudenthal's formula, tensor
//! products from Brauer–Klimyk. Weights live in the standard `ε`-basis; all
//! inner products are taken on doubled coordinates so `ρ` stays integral.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::partition::{Bipartition, Partition};
use crate::rational::{q, Q};
use crate::{Error, Result};

pub const GL_MAX_RANK: usize = 7;
pub const OSP_MAX_RANK: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Group {
    /// `gl_n`
    Gl(usize),
    /// `so_{2n+1}`
    So(usize),
    /// `sp_{2n}`
    Sp(usize),
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Gl(n) => write!(f, "gl_{n}"),
            Group::So(n) => write!(f, "so_{}", 2 * n + 1),
            Group::Sp(n) => write!(f, "sp_{}", 2 * n),
        }
    }
}

impl Group {
    pub fn rank(&self) -> usize {
        match *self {
            Group::Gl(n) | Group::So(n) | Group::Sp(n) => n,
        }
    }

    fn check_ceiling(&self) -> Result<()> {
        let max = match self {
            Group::Gl(_) => GL_MAX_RANK,
            _ => OSP_MAX_RANK,
        };
        if self.rank() == 0 || self.rank() > max {
            return Err(Error::RankCeiling { group: self.to_string(), n: self.rank(), max });
        }
        Ok(())
    }

    pub fn is_dominant(&self, w: &[i64]) -> bool {
        w.len() == self.rank()
            && w.windows(2).all(|p| p[0] >= p[1])
            && (matches!(self, Group::Gl(_)) || w.iter().all(|&x| x >= 0))
    }

    fn check_dominant(&self, w: &[i64]) -> Result<()> {
        if self.is_dominant(w) {
            Ok(())
        } else {
            Err(Error::NonDominant(w.to_vec()))
        }
    }

    /// `2ρ`.
    fn rho2(&self) -> Vec<i64> {
        let n = self.rank() as i64;
        (1..=n)
            .map(|i| match self {
                Group::Gl(_) => n + 1 - 2 * i,
                Group::So(_) => 2 * n - 2 * i + 1,
                Group::Sp(_) => 2 * n - 2 * i + 2,
            })
            .collect()
    }

    fn positive_roots(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let unit = |i: usize, c: i64| {
            let mut v = vec![0; n];
            v[i] = c;
            v
        };
        let mut roots = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut v = unit(i, 1);
                v[j] = -1;
                roots.push(v);
                if !matches!(self, Group::Gl(_)) {
                    let mut v = unit(i, 1);
                    v[j] = 1;
                    roots.push(v);
                }
            }
            match self {
                Group::So(_) => roots.push(unit(i, 1)),
                Group::Sp(_) => roots.push(unit(i, 2)),
                Group::Gl(_) => {}
            }
        }
        roots
    }

    /// The dominant element of the Weyl orbit of `w`.
    pub fn to_dominant(&self, w: &[i64]) -> Vec<i64> {
        let mut v: Vec<i64> = match self {
            Group::Gl(_) => w.to_vec(),
            _ => w.iter().map(|x| x.abs()).collect(),
        };
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// Reflects a doubled `ρ`-shifted weight into the open dominant chamber,
    /// returning `None` on a wall and otherwise the image with `sign(w)`.
    fn reflect_regular(&self, v: &[i64]) -> Option<(Vec<i64>, i64)> {
        let mut sign = 1;
        let mut u: Vec<i64> = match self {
            Group::Gl(_) => v.to_vec(),
            _ => {
                let mut u = Vec::with_capacity(v.len());
                for &x in v {
                    if x == 0 {
                        return None;
                    }
                    if x < 0 {
                        sign = -sign;
                    }
                    u.push(x.abs());
                }
                u
            }
        };
        // insertion sort, counting transpositions
        for i in 1..u.len() {
            let mut j = i;
            while j > 0 && u[j - 1] < u[j] {
                u.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
            if j > 0 && u[j - 1] == u[j] {
                return None;
            }
        }
        Some((u, sign))
    }

    /// `μ ≤ λ` in the dominance order, assuming the same root-lattice coset.
    fn below(&self, mu: &[i64], lambda: &[i64]) -> bool {
        let mut acc = 0;
        for (a, b) in lambda.iter().zip(mu) {
            acc += a - b;
            if acc < 0 {
                return false;
            }
        }
        match self {
            Group::Gl(_) => acc == 0,
            Group::So(_) => true,
            Group::Sp(_) => acc % 2 == 0,
        }
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn add(a: &[i64], b: &[i64], k: i64) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + k * y).collect()
}

/// Sparse weight multiplicities of a finite-dimensional module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterPoly {
    pub group: Group,
    pub weights: BTreeMap<Vec<i64>, u64>,
}

impl CharacterPoly {
    pub fn dimension(&self) -> u64 {
        self.weights.values().sum()
    }

    pub fn multiplicity(&self, w: &[i64]) -> u64 {
        self.weights.get(w).copied().unwrap_or(0)
    }

    pub fn is_weyl_invariant(&self) -> bool {
        self.weights.iter().all(|(w, &m)| self.multiplicity(&self.group.to_dominant(w)) == m)
    }
}

/// Multiplicities of the dominant weights of `L(hw)`.
pub fn dominant_multiplicities(group: Group, hw: &[i64]) -> Result<BTreeMap<Vec<i64>, u64>> {
    group.check_ceiling()?;
    group.check_dominant(hw)?;
    let roots = group.positive_roots();
    let all_roots: Vec<Vec<i64>> =
        roots.iter().cloned().chain(roots.iter().map(|r| r.iter().map(|x| -x).collect())).collect();

    let mut seen: HashSet<Vec<i64>> = HashSet::from([hw.to_vec()]);
    let mut stack = vec![hw.to_vec()];
    while let Some(mu) = stack.pop() {
        for r in &all_roots {
            let w = group.to_dominant(&add(&mu, r, 1));
            if group.below(&w, hw) && !seen.contains(&w) {
                seen.insert(w.clone());
                stack.push(w);
            }
        }
    }

    let rho2 = group.rho2();
    let mut order: Vec<Vec<i64>> = seen.into_iter().collect();
    order.sort_by_key(|mu| (-dot(mu, &rho2), mu.clone()));

    let norm = |w: &[i64]| {
        let v: Vec<i64> = w.iter().zip(&rho2).map(|(a, r)| 2 * a + r).collect();
        dot(&v, &v)
    };
    let top = norm(hw);
    let mut mult: HashMap<Vec<i64>, u64> = HashMap::new();
    for mu in &order {
        if mu.as_slice() == hw {
            mult.insert(mu.clone(), 1);
            continue;
        }
        let mut acc: i64 = 0;
        for r in &roots {
            let mut k = 1;
            loop {
                let w = add(mu, r, k);
                let Some(&m) = mult.get(&group.to_dominant(&w)) else { break };
                acc += m as i64 * dot(&w, r);
                k += 1;
            }
        }
        let denom = top - norm(mu);
        let num = 8 * acc;
        debug_assert!(denom > 0 && num % denom == 0, "Freudenthal division for {mu:?}");
        let m = (num / denom) as u64;
        if m > 0 {
            mult.insert(mu.clone(), m);
        }
    }
    Ok(mult.into_iter().collect())
}

/// The full character of `L(hw)`.
pub fn irr_character(group: Group, hw: &[i64]) -> Result<CharacterPoly> {
    let dom = dominant_multiplicities(group, hw)?;
    let mut weights = BTreeMap::new();
    for (mu, m) in dom {
        for w in orbit(group, &mu) {
            weights.insert(w, m);
        }
    }
    Ok(CharacterPoly { group, weights })
}

/// The Weyl orbit of a dominant weight.
pub fn orbit(group: Group, mu: &[i64]) -> Vec<Vec<i64>> {
    let mut perms = Vec::new();
    let mut cur = mu.to_vec();
    cur.sort_unstable();
    loop {
        perms.push(cur.clone());
        if !next_permutation(&mut cur) {
            break;
        }
    }
    if matches!(group, Group::Gl(_)) {
        return perms;
    }
    let mut out = Vec::new();
    for p in perms {
        let nz: Vec<usize> = (0..p.len()).filter(|&i| p[i] != 0).collect();
        for mask in 0u32..(1 << nz.len()) {
            let mut w = p.clone();
            for (b, &i) in nz.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    w[i] = -w[i];
                }
            }
            out.push(w);
        }
    }
    out
}

fn next_permutation(v: &mut [i64]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else { return false };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Weyl dimension formula.
pub fn weyl_dimension(group: Group, hw: &[i64]) -> Result<BigUint> {
    group.check_dominant(hw)?;
    let rho2 = group.rho2();
    let shifted: Vec<i64> = hw.iter().zip(&rho2).map(|(a, r)| 2 * a + r).collect();
    let (mut num, mut den) = (BigUint::one(), BigUint::one());
    for r in group.positive_roots() {
        num *= BigUint::from(dot(&shifted, &r) as u64);
        den *= BigUint::from(dot(&rho2, &r) as u64);
    }
    Ok(num / den)
}

/// `L(hw1) ⊗ L(hw2) = ⊕ m_ν L(ν)`, by Brauer–Klimyk over the smaller factor.
pub fn tensor_decompose(group: Group, hw1: &[i64], hw2: &[i64]) -> Result<BTreeMap<Vec<i64>, u64>> {
    group.check_ceiling()?;
    group.check_dominant(hw1)?;
    group.check_dominant(hw2)?;
    let (small, big) =
        if weyl_dimension(group, hw1)? <= weyl_dimension(group, hw2)? { (hw1, hw2) } else { (hw2, hw1) };
    let ch = irr_character(group, small)?;
    let rho2 = group.rho2();
    let mut acc: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for (w, &m) in &ch.weights {
        let v: Vec<i64> = big.iter().zip(w).zip(&rho2).map(|((b, x), r)| 2 * (b + x) + r).collect();
        if let Some((u, sign)) = group.reflect_regular(&v) {
            let nu: Vec<i64> = u.iter().zip(&rho2).map(|(x, r)| (x - r) / 2).collect();
            *acc.entry(nu).or_default() += sign * m as i64;
        }
    }
    let mut out = BTreeMap::new();
    for (nu, m) in acc {
        assert!(m >= 0, "negative Brauer–Klimyk multiplicity at {nu:?}");
        if m > 0 {
            out.insert(nu, m as u64);
        }
    }
    Ok(out)
}

/// `[L(hw1) ⊗ L(hw2) : L(target)]`.
pub fn tensor_multiplicity(group: Group, hw1: &[i64], hw2: &[i64], target: &[i64]) -> Result<u64> {
    group.check_dominant(target)?;
    Ok(tensor_decompose(group, hw1, hw2)?.get(target).copied().unwrap_or(0))
}

/// `V_ν^* = V_{(ν̄|ν)}`.
pub fn dual_weight(nu: &Bipartition) -> Bipartition {
    nu.dual()
}

/// `c₂(ν) = Σ ν_i (ν_i + n + 1 − 2i)`.
pub fn casimir2_gl(w: &[i64]) -> i64 {
    let n = w.len() as i64;
    w.iter().enumerate().map(|(i, &x)| x * (x + n + 1 - 2 * (i as i64 + 1))).sum()
}

/// Eigenvalues of the action map `x` on the summands `V_μ ⊆ V ⊗ V_λ`.
pub fn box_operator_eigenvalues(n: usize, lambda: &Bipartition) -> Result<BTreeMap<Bipartition, Q>> {
    if n < lambda.len() + 1 {
        return Err(Error::RankTooSmall { n, needed: lambda.len() + 1 });
    }
    let group = Group::Gl(n);
    let w = lambda.gl_weight(n)?;
    let mut vec_rep = vec![0; n];
    vec_rep[0] = 1;
    let c_box = casimir2_gl(&vec_rep);
    let c_lam = casimir2_gl(&w);
    let mut out = BTreeMap::new();
    for (mu, _) in tensor_decompose(group, &vec_rep, &w)? {
        let val = q(casimir2_gl(&mu) - c_lam - c_box) / q(2);
        out.insert(Bipartition::from_weight(&mu)?, val);
    }
    Ok(out)
}

/// Contents of the cells addable to the diagram of a dominant `gl_n` weight,
/// keyed by the resulting weight.
pub fn addable_contents_of_weight(w: &[i64]) -> BTreeMap<Vec<i64>, i64> {
    let shift = -w.last().copied().unwrap_or(0).min(0);
    let lam = Partition::new(w.iter().map(|&x| (x + shift) as usize).collect()).expect("dominant weight");
    lam.addable_cells()
        .into_iter()
        .filter(|c| c.row <= w.len())
        .map(|c| {
            let mut mu = w.to_vec();
            mu[c.row - 1] += 1;
            (mu, c.content() - shift)
        })
        .collect()
}
