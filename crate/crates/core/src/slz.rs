//! The `sl_Z` action by box-adding and box-removing operators on `C^Z`, its
//! wedge powers, the Fock space, their twists, and the Grothendieck groups of
//! the categories `D_μ`.
//!
//! `f_c` adds and `e_c` removes a cell of content `c` (column minus row).
//! `M^∨` swaps `e_c` and `f_c`; `M^τ` sends `f_c ↦ f_{−c}`, `e_c ↦ e_{−c}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::central::{AffineExponent, T};
use crate::partition::Partition;
use crate::rational::{q, Q};
use crate::{Error, Result};

/// Adds the content-`c` cell to a nonincreasing sequence.
pub fn seq_add_cell(theta: &[i64], c: i64) -> Option<Vec<i64>> {
    let m = theta.iter().enumerate().position(|(i, &x)| x - i as i64 == c)?;
    if m > 0 && theta[m - 1] == theta[m] {
        return None;
    }
    let mut out = theta.to_vec();
    out[m] += 1;
    Some(out)
}

/// Removes the content-`c` cell from a nonincreasing sequence.
pub fn seq_remove_cell(theta: &[i64], c: i64) -> Option<Vec<i64>> {
    let m = theta.iter().enumerate().position(|(i, &x)| x - 1 - i as i64 == c)?;
    if m + 1 < theta.len() && theta[m + 1] == theta[m] {
        return None;
    }
    let mut out = theta.to_vec();
    out[m] -= 1;
    Some(out)
}

/// `i_m = θ_m − m + 1`.
pub fn wedge_of_sequence(theta: &[i64]) -> Vec<i64> {
    theta.iter().enumerate().map(|(i, &x)| x - i as i64).collect()
}

pub fn sequence_of_wedge(w: &[i64]) -> Vec<i64> {
    w.iter().enumerate().map(|(i, &x)| x + i as i64).collect()
}

fn is_nonincreasing(s: &[i64]) -> bool {
    s.windows(2).all(|w| w[0] >= w[1])
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Block {
    pub name: String,
    /// Nonincreasing, ending in 0.
    pub seq: Vec<i64>,
}

impl Block {
    pub fn new(name: &str, seq: Vec<i64>) -> Self {
        Self { name: name.to_string(), seq }
    }
}

/// `μ = ((A_j, α[j]), (B_j, β[j]), γ)` and its barred copy.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub a: Vec<Block>,
    pub b: Vec<Block>,
    pub gamma: Partition,
    pub abar: Vec<Block>,
    pub bbar: Vec<Block>,
    pub gamma_bar: Partition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    A,
    B,
    ABar,
    BBar,
    Gamma,
    GammaBar,
}

/// A block of `D_μ` together with its `sl_Z` copy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActiveCoset {
    pub kind: BlockKind,
    /// Position within the blocks of this kind.
    pub index: usize,
    pub representative: AffineExponent,
}

impl FamilySpec {
    /// All blocks of length one with zero sequences, named `A1…`, `B1…`, `C1…`, `D1…`.
    pub fn simple(p: usize, q: usize, gamma: Partition, pbar: usize, qbar: usize, gamma_bar: Partition) -> Self {
        let blocks = |prefix: &str, n: usize| (1..=n).map(|j| Block::new(&format!("{prefix}{j}"), vec![0])).collect();
        Self { a: blocks("A", p), b: blocks("B", q), gamma, abar: blocks("C", pbar), bbar: blocks("D", qbar), gamma_bar }
    }

    pub fn validate(&self) -> Result<()> {
        let mut names = BTreeSet::new();
        for blk in self.a.iter().chain(&self.b).chain(&self.abar).chain(&self.bbar) {
            let valid = blk.name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && blk.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || blk.name == T {
                return Err(Error::InvalidFamily(format!("bad generator name {:?}", blk.name)));
            }
            if !names.insert(blk.name.clone()) {
                return Err(Error::InvalidFamily(format!("generator {:?} repeated", blk.name)));
            }
            if blk.seq.is_empty() || !is_nonincreasing(&blk.seq) || blk.seq.last() != Some(&0) {
                return Err(Error::InvalidFamily(format!(
                    "block {} must be a nonincreasing sequence ending in 0, got {:?}",
                    blk.name, blk.seq
                )));
            }
        }
        Ok(())
    }

    fn total(blocks: &[Block]) -> i64 {
        blocks.iter().map(|b| b.seq.len() as i64).sum()
    }

    /// `(K, L, K̄, L̄)`.
    pub fn totals(&self) -> (i64, i64, i64, i64) {
        (Self::total(&self.a), Self::total(&self.b), Self::total(&self.abar), Self::total(&self.bbar))
    }

    /// Representatives `A_j + L − Σ_{i<j} k_i`, `−B_j − K + Σ_{i<j} l_i`,
    /// `−Ā_j − t − L̄ + Σ k̄_i`, `B̄_j − t + K̄ − Σ l̄_i`, `L − K`, `−t + K̄ − L̄`.
    pub fn active_cosets(&self) -> Vec<ActiveCoset> {
        let (k, l, kb, lb) = self.totals();
        let g = AffineExponent::generator;
        let t = g(T);
        let mut out = Vec::new();
        let mut push = |kind, blocks: &[Block], base: &dyn Fn(&Block) -> AffineExponent, step: i64| {
            let mut acc = 0i64;
            for (index, blk) in blocks.iter().enumerate() {
                out.push(ActiveCoset { kind, index, representative: base(blk).add_int(step * acc) });
                acc += blk.seq.len() as i64;
            }
        };
        push(BlockKind::A, &self.a, &|b| g(&b.name).add_int(l), -1);
        push(BlockKind::B, &self.b, &|b| g(&b.name).neg().add_int(-k), 1);
        push(BlockKind::ABar, &self.abar, &|b| g(&b.name).neg().sub(&t).add_int(-lb), 1);
        push(BlockKind::BBar, &self.bbar, &|b| g(&b.name).sub(&t).add_int(kb), -1);
        out.push(ActiveCoset { kind: BlockKind::Gamma, index: 0, representative: AffineExponent::int(l - k) });
        out.push(ActiveCoset { kind: BlockKind::GammaBar, index: 0, representative: t.neg().add_int(kb - lb) });
        out
    }

    /// The active coset containing `coset`, its position, and `coset − representative`.
    pub fn locate(&self, coset: &AffineExponent) -> Result<(usize, ActiveCoset, i64)> {
        self.active_cosets()
            .into_iter()
            .enumerate()
            .find_map(|(pos, ac)| coset.integer_difference(&ac.representative).map(|d| (pos, ac, d)))
            .ok_or_else(|| Error::InactiveCoset(coset.to_string()))
    }

    /// `μ` itself as a tuple.
    pub fn base_tuple(&self) -> TupleIndex {
        let seqs = |bs: &[Block]| bs.iter().map(|b| b.seq.clone()).collect();
        TupleIndex {
            a: seqs(&self.a),
            b: seqs(&self.b),
            abar: seqs(&self.abar),
            bbar: seqs(&self.bbar),
            delta: self.gamma.clone(),
            delta_bar: self.gamma_bar.clone(),
        }
    }

    /// The factor modules `Λ^{k_j}`, `(Λ^{l_j})^τ`, `((Λ^{k̄_j})^τ)^∨`, `(Λ^{l̄_j})^∨`, `F`, `(F^τ)^∨`,
    /// in the order of `active_cosets`.
    pub fn tensor_spec(&self) -> ModuleSpec {
        let mut fs = Vec::new();
        for b in &self.a {
            fs.push(ModuleSpec::new(ModuleKind::Wedge(b.seq.len())));
        }
        for b in &self.b {
            fs.push(ModuleSpec::new(ModuleKind::Wedge(b.seq.len())).twist(Twist::Tau));
        }
        for b in &self.abar {
            fs.push(ModuleSpec::new(ModuleKind::Wedge(b.seq.len())).twist(Twist::Tau).twist(Twist::Dual));
        }
        for b in &self.bbar {
            fs.push(ModuleSpec::new(ModuleKind::Wedge(b.seq.len())).twist(Twist::Dual));
        }
        fs.push(ModuleSpec::new(ModuleKind::Fock));
        fs.push(ModuleSpec::new(ModuleKind::Fock).twist(Twist::Tau).twist(Twist::Dual));
        ModuleSpec::tensor(fs)
    }

    /// Tuples whose block entries stay within `radius` of `μ`'s and with `|δ|, |δ̄| ≤ cells`.
    pub fn truncated_basis(&self, radius: i64, cells: usize) -> Vec<TupleIndex> {
        fn seqs(base: &[i64], radius: i64) -> Vec<Vec<i64>> {
            let lo = base.iter().min().copied().unwrap_or(0) - radius;
            let hi = base.iter().max().copied().unwrap_or(0) + radius;
            let mut out = Vec::new();
            fn rec(k: usize, top: i64, lo: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
                if cur.len() == k {
                    out.push(cur.clone());
                    return;
                }
                for x in (lo..=top).rev() {
                    cur.push(x);
                    rec(k, x, lo, cur, out);
                    cur.pop();
                }
            }
            rec(base.len(), hi, lo, &mut Vec::new(), &mut out);
            out
        }
        let mut options: Vec<Vec<Vec<i64>>> = Vec::new();
        for b in self.a.iter().chain(&self.b).chain(&self.abar).chain(&self.bbar) {
            options.push(seqs(&b.seq, radius));
        }
        let parts = Partition::up_to_size(cells);
        let mut combos: Vec<Vec<Vec<i64>>> = vec![vec![]];
        for opts in &options {
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    opts.iter().map(move |o| {
                        let mut c = c.clone();
                        c.push(o.clone());
                        c
                    })
                })
                .collect();
        }
        let (na, nb, nab) = (self.a.len(), self.b.len(), self.abar.len());
        let mut out = Vec::new();
        for c in combos {
            for d in &parts {
                for db in &parts {
                    out.push(TupleIndex {
                        a: c[..na].to_vec(),
                        b: c[na..na + nb].to_vec(),
                        abar: c[na + nb..na + nb + nab].to_vec(),
                        bbar: c[na + nb + nab..].to_vec(),
                        delta: d.clone(),
                        delta_bar: db.clone(),
                    });
                }
            }
        }
        out
    }
}

impl fmt::Display for FamilySpec {
    /// `a=A1:0|A2:1,0;b=…;gamma=2,1;abar=…;bbar=…;gammabar=…`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks = |bs: &[Block]| {
            bs.iter()
                .map(|b| format!("{}:{}", b.name, b.seq.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
                .collect::<Vec<_>>()
                .join("|")
        };
        write!(
            f,
            "a={};b={};gamma={};abar={};bbar={};gammabar={}",
            blocks(&self.a),
            blocks(&self.b),
            self.gamma,
            blocks(&self.abar),
            blocks(&self.bbar),
            self.gamma_bar
        )
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut fam = FamilySpec::default();
        let parse_blocks = |v: &str| -> Result<Vec<Block>> {
            v.split('|')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|item| {
                    let (name, seq) = item
                        .split_once(':')
                        .ok_or_else(|| Error::InvalidFamily(format!("expected name:seq, got {item:?}")))?;
                    let seq = seq
                        .split(',')
                        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::InvalidFamily(format!("bad entry {x:?}"))))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Block::new(name.trim(), seq))
                })
                .collect()
        };
        for item in s.split(';').map(str::trim).filter(|x| !x.is_empty()) {
            let (key, value) =
                item.split_once('=').ok_or_else(|| Error::InvalidFamily(format!("expected key=value, got {item:?}")))?;
            match key.trim() {
                "a" => fam.a = parse_blocks(value)?,
                "b" => fam.b = parse_blocks(value)?,
                "abar" => fam.abar = parse_blocks(value)?,
                "bbar" => fam.bbar = parse_blocks(value)?,
                "gamma" => fam.gamma = value.parse()?,
                "gammabar" => fam.gamma_bar = value.parse()?,
                other => return Err(Error::InvalidFamily(format!("unknown key {other:?}"))),
            }
        }
        fam.validate()?;
        Ok(fam)
    }
}

/// A basis element of `D_μ`: the actual block sequences of `λ`, with `δ`, `δ̄`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TupleIndex {
    pub a: Vec<Vec<i64>>,
    pub b: Vec<Vec<i64>>,
    pub abar: Vec<Vec<i64>>,
    pub bbar: Vec<Vec<i64>>,
    pub delta: Partition,
    pub delta_bar: Partition,
}

impl TupleIndex {
    pub fn validate(&self, fam: &FamilySpec) -> Result<()> {
        let check = |seqs: &[Vec<i64>], blocks: &[Block]| {
            seqs.len() == blocks.len()
                && seqs.iter().zip(blocks).all(|(s, b)| s.len() == b.seq.len() && is_nonincreasing(s))
        };
        if check(&self.a, &fam.a) && check(&self.b, &fam.b) && check(&self.abar, &fam.abar) && check(&self.bbar, &fam.bbar)
        {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("tuple {self:?} does not match family {fam}")))
        }
    }

    fn block_mut(&mut self, kind: BlockKind, index: usize) -> &mut Vec<i64> {
        match kind {
            BlockKind::A => &mut self.a[index],
            BlockKind::B => &mut self.b[index],
            BlockKind::ABar => &mut self.abar[index],
            BlockKind::BBar => &mut self.bbar[index],
            _ => unreachable!("sequence blocks only"),
        }
    }

    fn block(&self, kind: BlockKind, index: usize) -> &[i64] {
        match kind {
            BlockKind::A => &self.a[index],
            BlockKind::B => &self.b[index],
            BlockKind::ABar => &self.abar[index],
            BlockKind::BBar => &self.bbar[index],
            _ => unreachable!("sequence blocks only"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BasisIndex {
    Int(i64),
    /// Strictly decreasing.
    Wedge(Vec<i64>),
    Fock(Partition),
    Tuple(TupleIndex),
    Tensor(Vec<BasisIndex>),
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisIndex::Int(c) => write!(f, "v{c}"),
            BasisIndex::Wedge(w) => {
                write!(f, "{}", w.iter().map(|x| format!("v{x}")).collect::<Vec<_>>().join("^"))
            }
            BasisIndex::Fock(p) => write!(f, "v[{p}]"),
            BasisIndex::Tuple(t) => write!(
                f,
                "(a={:?}, b={:?}, abar={:?}, bbar={:?}, delta=[{}], deltabar=[{}])",
                t.a, t.b, t.abar, t.bbar, t.delta, t.delta_bar
            ),
            BasisIndex::Tensor(fs) => {
                write!(f, "{}", fs.iter().map(BasisIndex::to_string).collect::<Vec<_>>().join(" ⊗ "))
            }
        }
    }
}

pub type SparseVector = BTreeMap<BasisIndex, Q>;

pub fn basis_vector(b: BasisIndex) -> SparseVector {
    SparseVector::from([(b, Q::one())])
}

fn add_to(v: &mut SparseVector, b: BasisIndex, c: Q) {
    if c.is_zero() {
        return;
    }
    let slot = v.entry(b.clone()).or_default();
    *slot += c;
    if slot.is_zero() {
        v.remove(&b);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Twist {
    Dual,
    Tau,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ModuleKind {
    CZ,
    Wedge(usize),
    Fock,
    /// `D_μ` under the `sl_Z` copy of the active coset containing `coset`.
    DMu { family: Box<FamilySpec>, coset: AffineExponent },
    Tensor(Vec<ModuleSpec>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleSpec {
    pub kind: ModuleKind,
    pub twists: Vec<Twist>,
}

impl ModuleSpec {
    pub fn new(kind: ModuleKind) -> Self {
        Self { kind, twists: vec![] }
    }

    pub fn tensor(factors: Vec<ModuleSpec>) -> Self {
        Self::new(ModuleKind::Tensor(factors))
    }

    pub fn twist(mut self, t: Twist) -> Self {
        self.twists.push(t);
        self
    }

    /// `(swap e/f, negate index)`; the two twists commute and are involutions.
    pub fn effective_twist(&self) -> (bool, bool) {
        let dual = self.twists.iter().filter(|t| **t == Twist::Dual).count() % 2 == 1;
        let tau = self.twists.iter().filter(|t| **t == Twist::Tau).count() % 2 == 1;
        (dual, tau)
    }

    pub fn factors(&self) -> Option<&[ModuleSpec]> {
        match &self.kind {
            ModuleKind::Tensor(fs) => Some(fs),
            _ => None,
        }
    }
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ModuleKind::CZ => write!(f, "cz")?,
            ModuleKind::Wedge(n) => write!(f, "wedge{n}")?,
            ModuleKind::Fock => write!(f, "fock")?,
            ModuleKind::DMu { coset, .. } => write!(f, "dmu[{coset}]")?,
            ModuleKind::Tensor(fs) => {
                write!(f, "tensor({})", fs.iter().map(ModuleSpec::to_string).collect::<Vec<_>>().join(","))?
            }
        }
        for t in &self.twists {
            write!(f, "^{}", if *t == Twist::Dual { "dual" } else { "tau" })?;
        }
        Ok(())
    }
}

impl FromStr for ModuleSpec {
    type Err = Error;

    /// `cz`, `wedge3`, `fock`, `tensor(fock,cz^tau)`, each with `^dual`/`^tau` suffixes.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidFamily(format!("cannot parse module {s:?}"));
        let s = s.trim();
        let (head, twists) = if let Some(rest) = s.strip_prefix("tensor(") {
            let mut depth = 1;
            let close = rest
                .char_indices()
                .find(|&(_, c)| {
                    match c {
                        '(' => depth += 1,
                        ')' => depth -= 1,
                        _ => {}
                    }
                    depth == 0
                })
                .map(|(i, _)| i)
                .ok_or_else(bad)?;
            let inner = &rest[..close];
            let mut parts = Vec::new();
            let (mut depth, mut start) = (0, 0);
            for (i, c) in inner.char_indices() {
                match c {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    ',' if depth == 0 => {
                        parts.push(&inner[start..i]);
                        start = i + 1;
                    }
                    _ => {}
                }
            }
            parts.push(&inner[start..]);
            let fs = parts.into_iter().map(str::parse).collect::<Result<Vec<ModuleSpec>>>()?;
            (ModuleSpec::tensor(fs), &rest[close + 1..])
        } else {
            let end = s.find('^').unwrap_or(s.len());
            let kind = match &s[..end] {
                "cz" => ModuleKind::CZ,
                "fock" => ModuleKind::Fock,
                w => ModuleKind::Wedge(w.strip_prefix("wedge").and_then(|n| n.parse().ok()).ok_or_else(bad)?),
            };
            (ModuleSpec::new(kind), &s[end..])
        };
        let mut spec = head;
        for t in twists.split('^').filter(|x| !x.is_empty()) {
            spec = spec.twist(match t {
                "dual" => Twist::Dual,
                "tau" => Twist::Tau,
                _ => return Err(bad()),
            });
        }
        Ok(spec)
    }
}

fn mismatch(spec: &ModuleSpec, b: &BasisIndex) -> Error {
    Error::DimensionMismatch(format!("{b} is not a basis element of {spec}"))
}

/// `f_c` (`raise`) or `e_c` on one basis element of an untwisted base module.
fn act_base(spec: &ModuleSpec, raise: bool, c: i64, b: &BasisIndex) -> Result<Vec<(BasisIndex, Q)>> {
    let one = |x: BasisIndex| vec![(x, Q::one())];
    Ok(match (&spec.kind, b) {
        (ModuleKind::CZ, BasisIndex::Int(x)) => {
            let (from, to) = if raise { (c, c + 1) } else { (c + 1, c) };
            if *x == from {
                one(BasisIndex::Int(to))
            } else {
                vec![]
            }
        }
        (ModuleKind::Wedge(n), BasisIndex::Wedge(w)) => {
            if w.len() != *n || w.windows(2).any(|p| p[0] <= p[1]) {
                return Err(mismatch(spec, b));
            }
            let (from, to) = if raise { (c, c + 1) } else { (c + 1, c) };
            match w.iter().position(|&x| x == from) {
                Some(pos) if !w.contains(&to) => {
                    let mut out = w.clone();
                    out[pos] = to;
                    one(BasisIndex::Wedge(out))
                }
                _ => vec![],
            }
        }
        (ModuleKind::Fock, BasisIndex::Fock(p)) => {
            let r = if raise { p.add_cell(c) } else { p.remove_cell(c) };
            r.map(|x| one(BasisIndex::Fock(x))).unwrap_or_default()
        }
        (ModuleKind::DMu { family, coset }, BasisIndex::Tuple(t)) => {
            let out = if raise { grothendieck_f(family, coset, c, t)? } else { grothendieck_e(family, coset, c, t)? };
            out.map(|x| one(BasisIndex::Tuple(x))).unwrap_or_default()
        }
        (ModuleKind::Tensor(fs), BasisIndex::Tensor(parts)) => {
            if fs.len() != parts.len() {
                return Err(mismatch(spec, b));
            }
            let mut out = Vec::new();
            for (i, (f, p)) in fs.iter().zip(parts).enumerate() {
                for (img, x) in act(f, raise, c, p)? {
                    let mut v = parts.clone();
                    v[i] = img;
                    out.push((BasisIndex::Tensor(v), x));
                }
            }
            out
        }
        _ => return Err(mismatch(spec, b)),
    })
}

fn act(spec: &ModuleSpec, raise: bool, c: i64, b: &BasisIndex) -> Result<Vec<(BasisIndex, Q)>> {
    let (dual, tau) = spec.effective_twist();
    act_base(spec, raise != dual, if tau { -c } else { c }, b)
}

fn apply_op(spec: &ModuleSpec, raise: bool, c: i64, v: &SparseVector) -> Result<SparseVector> {
    let mut out = SparseVector::new();
    for (b, x) in v {
        for (img, y) in act(spec, raise, c, b)? {
            add_to(&mut out, img, x * y);
        }
    }
    Ok(out)
}

pub fn apply_f(spec: &ModuleSpec, c: i64, v: &SparseVector) -> Result<SparseVector> {
    apply_op(spec, true, c, v)
}

pub fn apply_e(spec: &ModuleSpec, c: i64, v: &SparseVector) -> Result<SparseVector> {
    apply_op(spec, false, c, v)
}

/// `f_c` or `e_c` acting on the `factor`-th tensor factor only.
pub fn apply_factor(spec: &ModuleSpec, factor: usize, raise: bool, c: i64, v: &SparseVector) -> Result<SparseVector> {
    let fs = spec.factors().ok_or_else(|| Error::DimensionMismatch(format!("{spec} is not a tensor product")))?;
    let f = fs.get(factor).ok_or(Error::IndexOutOfRange { index: factor, max: fs.len() })?;
    let mut out = SparseVector::new();
    for (b, x) in v {
        let BasisIndex::Tensor(parts) = b else { return Err(mismatch(spec, b)) };
        if parts.len() != fs.len() {
            return Err(mismatch(spec, b));
        }
        for (img, y) in act(f, raise, c, &parts[factor])? {
            let mut p = parts.clone();
            p[factor] = img;
            add_to(&mut out, BasisIndex::Tensor(p), x * y);
        }
    }
    Ok(out)
}

/// `(e, f)` at offset `m` on the block of `coset`: which cell operation on which content.
fn block_step(fam: &FamilySpec, coset: &AffineExponent, m: i64, raise: bool, t: &TupleIndex) -> Result<Option<TupleIndex>> {
    t.validate(fam)?;
    let (_, ac, shift) = fam.locate(coset)?;
    let m = m + shift;
    // (add?, content) per block, for f; e reverses add/remove
    let (add, content) = match ac.kind {
        BlockKind::A | BlockKind::Gamma => (true, m),
        BlockKind::B => (true, -m),
        BlockKind::ABar | BlockKind::GammaBar => (false, -m),
        BlockKind::BBar => (false, m),
    };
    let add = add == raise;
    let mut out = t.clone();
    match ac.kind {
        BlockKind::Gamma | BlockKind::GammaBar => {
            let p = if ac.kind == BlockKind::Gamma { &mut out.delta } else { &mut out.delta_bar };
            match if add { p.add_cell(content) } else { p.remove_cell(content) } {
                Some(x) => *p = x,
                None => return Ok(None),
            }
        }
        kind => {
            let s = t.block(kind, ac.index);
            match if add { seq_add_cell(s, content) } else { seq_remove_cell(s, content) } {
                Some(x) => *out.block_mut(kind, ac.index) = x,
                None => return Ok(None),
            }
        }
    }
    Ok(Some(out))
}

/// `f` of the `sl_Z` copy at `coset`, at integer offset `m` from `coset`.
pub fn grothendieck_f(fam: &FamilySpec, coset: &AffineExponent, m: i64, t: &TupleIndex) -> Result<Option<TupleIndex>> {
    block_step(fam, coset, m, true, t)
}

pub fn grothendieck_e(fam: &FamilySpec, coset: &AffineExponent, m: i64, t: &TupleIndex) -> Result<Option<TupleIndex>> {
    block_step(fam, coset, m, false, t)
}

/// The basis element of `fam.tensor_spec()` matching `t`.
pub fn iso_map(fam: &FamilySpec, t: &TupleIndex) -> Result<BasisIndex> {
    t.validate(fam)?;
    let mut parts = Vec::new();
    for s in t.a.iter().chain(&t.b).chain(&t.abar).chain(&t.bbar) {
        parts.push(BasisIndex::Wedge(wedge_of_sequence(s)));
    }
    parts.push(BasisIndex::Fock(t.delta.clone()));
    parts.push(BasisIndex::Fock(t.delta_bar.clone()));
    Ok(BasisIndex::Tensor(parts))
}

/// The eigenvalue of `[e_c, f_c]` predicted from addable and removable cells.
pub fn predicted_eigenvalue(spec: &ModuleSpec, c: i64, b: &BasisIndex) -> Result<i64> {
    let (dual, tau) = spec.effective_twist();
    let c = if tau { -c } else { c };
    let h = match (&spec.kind, b) {
        (ModuleKind::CZ, BasisIndex::Int(x)) => i64::from(*x == c) - i64::from(*x == c + 1),
        (ModuleKind::Wedge(_), BasisIndex::Wedge(w)) => {
            let (has_c, has_next) = (w.contains(&c), w.contains(&(c + 1)));
            i64::from(has_c && !has_next) - i64::from(has_next && !has_c)
        }
        (ModuleKind::Fock, BasisIndex::Fock(p)) => {
            let addable = p.addable_cells().iter().filter(|x| x.content() == c).count() as i64;
            let removable = p.removable_cells().iter().filter(|x| x.content() == c).count() as i64;
            addable - removable
        }
        (ModuleKind::DMu { family, coset }, BasisIndex::Tuple(t)) => {
            let (pos, _, shift) = family.locate(coset)?;
            let tensor = family.tensor_spec();
            let BasisIndex::Tensor(parts) = iso_map(family, t)? else { unreachable!() };
            predicted_eigenvalue(&tensor.factors().unwrap()[pos], c + shift, &parts[pos])?
        }
        (ModuleKind::Tensor(fs), BasisIndex::Tensor(parts)) if fs.len() == parts.len() => {
            let mut s = 0;
            for (f, p) in fs.iter().zip(parts) {
                s += predicted_eigenvalue(f, c, p)?;
            }
            s
        }
        _ => return Err(mismatch(spec, b)),
    };
    Ok(if dual { -h } else { h })
}

/// `[e_i, f_j] = 0` for `i ≠ j`, and `[e_i, f_i]` diagonal with the predicted
/// eigenvalue (in `{−1, 0, 1}` unless `spec` is a tensor product), on `sample`.
pub fn bracket_check(spec: &ModuleSpec, i: i64, j: i64, sample: &[BasisIndex]) -> Result<bool> {
    for b in sample {
        let v = basis_vector(b.clone());
        let ef = apply_e(spec, i, &apply_f(spec, j, &v)?)?;
        let fe = apply_f(spec, j, &apply_e(spec, i, &v)?)?;
        let mut bracket = ef;
        for (x, c) in fe {
            add_to(&mut bracket, x, -c);
        }
        let expected = if i == j {
            let h = predicted_eigenvalue(spec, i, b)?;
            if spec.factors().is_none() && h.abs() > 1 {
                return Ok(false);
            }
            let mut e = SparseVector::new();
            add_to(&mut e, b.clone(), q(h));
            e
        } else {
            SparseVector::new()
        };
        if bracket != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn fock(s: &str) -> SparseVector {
        basis_vector(BasisIndex::Fock(p(s)))
    }

    fn x(s: &str) -> AffineExponent {
        s.parse().unwrap()
    }

    #[test]
    fn fock_examples() {
        let f = ModuleSpec::new(ModuleKind::Fock);
        assert_eq!(apply_f(&f, 0, &fock("")).unwrap(), fock("1"));
        assert!(apply_e(&f, 0, &fock("")).unwrap().is_empty());
        assert_eq!(apply_f(&f, -1, &fock("1")).unwrap(), fock("1,1"));
        let dual = f.clone().twist(Twist::Dual);
        assert_eq!(apply_f(&dual, 0, &fock("1")).unwrap(), fock(""));
        let tau = f.twist(Twist::Tau);
        assert_eq!(apply_f(&tau, 1, &fock("1")).unwrap(), fock("1,1"));
    }

    #[test]
    fn cz_and_wedge() {
        let cz = ModuleSpec::new(ModuleKind::CZ);
        assert_eq!(apply_f(&cz, 3, &basis_vector(BasisIndex::Int(3))).unwrap(), basis_vector(BasisIndex::Int(4)));
        assert!(apply_f(&cz, 2, &basis_vector(BasisIndex::Int(3))).unwrap().is_empty());
        assert_eq!(apply_e(&cz, 3, &basis_vector(BasisIndex::Int(4))).unwrap(), basis_vector(BasisIndex::Int(3)));
        let w = ModuleSpec::new(ModuleKind::Wedge(2));
        let v = basis_vector(BasisIndex::Wedge(vec![1, -1]));
        assert!(apply_f(&w, 0, &v).unwrap().is_empty());
        assert_eq!(apply_f(&w, -1, &v).unwrap(), basis_vector(BasisIndex::Wedge(vec![1, 0])));
        assert_eq!(wedge_of_sequence(&[1, 0]), vec![1, -1]);
        assert!(apply_f(&w, 0, &basis_vector(BasisIndex::Wedge(vec![0, 1]))).is_err());
    }

    #[test]
    fn wedge_matches_sequences() {
        let w = ModuleSpec::new(ModuleKind::Wedge(3));
        let theta = vec![2, 2, -1];
        for c in -5..5 {
            let img = apply_f(&w, c, &basis_vector(BasisIndex::Wedge(wedge_of_sequence(&theta)))).unwrap();
            let expected = seq_add_cell(&theta, c)
                .map(|s| basis_vector(BasisIndex::Wedge(wedge_of_sequence(&s))))
                .unwrap_or_default();
            assert_eq!(img, expected, "c={c}");
        }
    }

    #[test]
    fn brackets() {
        let f = ModuleSpec::new(ModuleKind::Fock);
        assert!(bracket_check(&f, 0, 0, &[BasisIndex::Fock(Partition::empty())]).unwrap());
        let sample: Vec<BasisIndex> = Partition::up_to_size(4).into_iter().map(BasisIndex::Fock).collect();
        assert!(bracket_check(&f, 0, 1, &sample).unwrap());
        assert!(bracket_check(&f, 1, 1, &sample).unwrap());
        let w = ModuleSpec::new(ModuleKind::Wedge(3)).twist(Twist::Tau);
        let ws = vec![BasisIndex::Wedge(vec![3, 2, 0]), BasisIndex::Wedge(vec![2, 1, -4])];
        assert!(bracket_check(&w, 2, 2, &ws).unwrap());
        assert!(bracket_check(&w, -2, -2, &ws).unwrap());
    }

    #[test]
    fn cosets() {
        let fam = FamilySpec::simple(1, 0, Partition::empty(), 0, 0, Partition::empty());
        let reps: Vec<String> = fam.active_cosets().iter().map(|a| a.representative.to_string()).collect();
        assert_eq!(reps, vec!["A1", "-1", "-t"]);
        let empty = FamilySpec::default();
        let reps: Vec<String> = empty.active_cosets().iter().map(|a| a.representative.to_string()).collect();
        assert_eq!(reps, vec!["0", "-t"]);
        assert!(fam.locate(&x("B7")).is_err());
        let (pos, _, shift) = fam.locate(&x("A1+3")).unwrap();
        assert_eq!((pos, shift), (0, 3));
    }

    #[test]
    fn grothendieck_examples() {
        let fam = FamilySpec::simple(1, 0, Partition::empty(), 0, 0, Partition::empty());
        let base = fam.base_tuple();
        let grown = grothendieck_f(&fam, &x("A1"), 0, &base).unwrap().unwrap();
        assert_eq!(grown.a, vec![vec![1]]);
        assert!(grothendieck_f(&fam, &x("A1"), 1, &base).unwrap().is_none());

        let empty = FamilySpec::default();
        let t = grothendieck_f(&empty, &x("0"), 0, &empty.base_tuple()).unwrap().unwrap();
        assert_eq!(t.delta, p("1"));

        let bar = FamilySpec { abar: vec![Block::new("C1", vec![0])], ..Default::default() };
        assert!(grothendieck_f(&bar, &x("-C1-t"), 0, &bar.base_tuple()).unwrap().is_none());
        let t = grothendieck_f(&bar, &x("-C1-t"), 1, &bar.base_tuple()).unwrap().unwrap();
        assert_eq!(t.abar, vec![vec![-1]]);
        assert!(matches!(grothendieck_f(&bar, &x("C1"), 0, &bar.base_tuple()), Err(Error::InactiveCoset(_))));
    }

    #[test]
    fn iso_examples() {
        let empty = FamilySpec::default();
        assert_eq!(
            iso_map(&empty, &empty.base_tuple()).unwrap(),
            BasisIndex::Tensor(vec![BasisIndex::Fock(Partition::empty()), BasisIndex::Fock(Partition::empty())])
        );
        let fam = FamilySpec { a: vec![Block::new("A1", vec![1, 0])], ..Default::default() };
        let BasisIndex::Tensor(parts) = iso_map(&fam, &fam.base_tuple()).unwrap() else { panic!() };
        assert_eq!(parts[0], BasisIndex::Wedge(vec![1, -1]));
    }

    #[test]
    fn family_text() {
        let fam: FamilySpec = "a=A1:1,0|A2:0;b=B1:0;gamma=2,1;gammabar=1".parse().unwrap();
        assert_eq!(fam.a.len(), 2);
        assert_eq!(fam.to_string().parse::<FamilySpec>().unwrap(), fam);
        assert!("a=t:0".parse::<FamilySpec>().is_err());
        assert!("a=A1:0|A1:0".parse::<FamilySpec>().is_err());
        assert!("a=A1:0,1".parse::<FamilySpec>().is_err());
        assert!("a=A1:1".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn module_text() {
        for s in ["fock", "cz^dual", "wedge3^tau^dual", "tensor(fock,tensor(cz,wedge2)^tau)^dual"] {
            let m: ModuleSpec = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("wedge".parse::<ModuleSpec>().is_err());
        assert!("fock^bogus".parse::<ModuleSpec>().is_err());
    }
}
