//! Exact operator actions of `U(gl_N)` and of `o`/`sp` on tensor products of
//! symmetric and exterior powers, annihilator minors, and the super symbol.
//!
//! Every generator is expanded into the `gl_N` basis `E_pq` (`E_pq v_q = v_p`)
//! and acts on tensor factors by the Leibniz rule. `A(i,j)` denotes
//! `a_ij = v_i ⊗ v_j + ε v_j ⊗ v_i` under the identification of `V ⊗ V` with
//! `gl_V` induced by the invariant form.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::rational::{fmt_q, q, Q};
use crate::{Error, Result};

/// The Lie algebra together with the dimension of `V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Algebra {
    Gl(usize),
    /// `o(N)` preserving `Q(v_i, v_{n+i}) = 1`, plus `Q(v_N, v_N) = 1` for odd `N`.
    O(usize),
    /// `sp(N)`, `N = 2n`, preserving `ω(v_i, v_{n+i}) = 1` for `i ≤ n`.
    Sp(usize),
}

impl Algebra {
    pub fn dim(&self) -> usize {
        match *self {
            Algebra::Gl(n) | Algebra::O(n) | Algebra::Sp(n) => n,
        }
    }

    /// `n` with `N = 2n` or `2n + 1`.
    pub fn half(&self) -> usize {
        self.dim() / 2
    }

    pub fn is_gl(&self) -> bool {
        matches!(self, Algebra::Gl(_))
    }

    /// `−1` for `o`, `+1` for `sp`.
    pub fn epsilon(&self) -> i64 {
        match self {
            Algebra::O(_) => -1,
            _ => 1,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Algebra::Gl(0) | Algebra::O(0) | Algebra::Sp(0) => {
                Err(Error::DimensionMismatch(format!("{self} has zero-dimensional V")))
            }
            Algebra::Sp(n) if n % 2 == 1 => Err(Error::DimensionMismatch(format!("sp needs even dimension, got {n}"))),
            _ => Ok(()),
        }
    }

    /// `v_i ⊗ v_m ↦ sign · E_{i, partner(m)}`.
    fn tensor_to_gl(&self, m: usize) -> (usize, i64) {
        let n = self.half();
        if m > 2 * n {
            return (m, 1);
        }
        let partner = if m <= n { m + n } else { m - n };
        let sign = match self {
            Algebra::Sp(_) if m > n => -1,
            _ => 1,
        };
        (partner, sign)
    }

    /// `Σ c · E_pq` for one generator.
    fn expand(&self, g: Gen) -> Vec<(usize, usize, i64)> {
        match g {
            Gen::E(p, q) => vec![(p, q, 1)],
            Gen::A(i, j) => {
                let (pj, sj) = self.tensor_to_gl(j);
                let (pi, si) = self.tensor_to_gl(i);
                let mut out = vec![(i, pj, sj)];
                let second = (j, pi, self.epsilon() * si);
                if second.0 == i && second.1 == pj {
                    out[0].2 += second.2;
                    out.retain(|t| t.2 != 0);
                } else {
                    out.push(second);
                }
                out
            }
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebra::Gl(n) => write!(f, "gl({n})"),
            Algebra::O(n) => write!(f, "o({n})"),
            Algebra::Sp(n) => write!(f, "sp({n})"),
        }
    }
}

impl FromStr for Algebra {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidFamily(format!("unknown algebra {s:?}; expected gl(n), o(N) or sp(2n)"));
        let s = s.trim().to_ascii_lowercase();
        let (name, rest) = s.split_at(s.find(|c: char| c.is_ascii_digit() || c == '(' || c == '_').ok_or_else(bad)?);
        let num: usize = rest.trim_matches(|c| c == '(' || c == ')' || c == '_').parse().map_err(|_| bad())?;
        let alg = match name {
            "gl" => Algebra::Gl(num),
            "o" | "so" => Algebra::O(num),
            "sp" => Algebra::Sp(num),
            _ => return Err(bad()),
        };
        alg.validate()?;
        Ok(alg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Gen {
    E(usize, usize),
    A(usize, usize),
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::E(i, j) => write!(f, "E({i},{j})"),
            Gen::A(i, j) => write!(f, "A({i},{j})"),
        }
    }
}

/// `Σ c · word`; a word `[g_1, …, g_r]` is the product `g_1 ⋯ g_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorExpr {
    algebra: Algebra,
    terms: BTreeMap<Vec<Gen>, Q>,
}

impl OperatorExpr {
    pub fn zero(algebra: Algebra) -> Self {
        Self { algebra, terms: BTreeMap::new() }
    }

    pub fn scalar(algebra: Algebra, c: Q) -> Self {
        let mut out = Self::zero(algebra);
        out.add_term(vec![], c);
        out
    }

    /// `E(i,j)` for `gl`, `A(i,j)` otherwise, normalized by `A(j,i) = ε A(i,j)`.
    pub fn generator(algebra: Algebra, i: usize, j: usize) -> Result<Self> {
        let max = algebra.dim();
        for idx in [i, j] {
            if idx == 0 || idx > max {
                return Err(Error::IndexOutOfRange { index: idx, max });
            }
        }
        if algebra.is_gl() {
            let mut out = Self::zero(algebra);
            out.add_term(vec![Gen::E(i, j)], Q::one());
            return Ok(out);
        }
        let (i, j, c) = if i <= j { (i, j, 1) } else { (j, i, algebra.epsilon()) };
        if i == j && algebra.epsilon() == -1 {
            return Ok(Self::zero(algebra));
        }
        let mut out = Self::zero(algebra);
        out.add_term(vec![Gen::A(i, j)], q(c));
        Ok(out)
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Gen>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, word: Vec<Gen>, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(word.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut out = Self::zero(self.algebra);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    /// Noncommutative product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.algebra);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (w, c) in &self.terms {
            let neg = c < &Q::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let word: String = w.iter().map(Gen::to_string).collect();
            if word.is_empty() {
                out.push_str(&fmt_q(&a));
            } else {
                if !a.is_one() {
                    out.push_str(&fmt_q(&a));
                    out.push('*');
                }
                out.push_str(&word);
            }
        }
        f.write_str(&out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FactorKind {
    Sym,
    Alt,
}

/// `Sym^m(V)`, `Sym^m(V*)`, `Alt^m(V)` or `Alt^m(V*)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub kind: FactorKind,
    pub dual: bool,
    pub degree: usize,
}

impl Factor {
    pub fn sym(degree: usize) -> Self {
        Self { kind: FactorKind::Sym, dual: false, degree }
    }

    pub fn sym_dual(degree: usize) -> Self {
        Self { kind: FactorKind::Sym, dual: true, degree }
    }

    pub fn alt(degree: usize) -> Self {
        Self { kind: FactorKind::Alt, dual: false, degree }
    }

    pub fn alt_dual(degree: usize) -> Self {
        Self { kind: FactorKind::Alt, dual: true, degree }
    }

    /// Basis monomials as sorted index lists (multisets for `Sym`, sets for `Alt`).
    fn basis(&self, dim: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.degree);
        let strict = self.kind == FactorKind::Alt;
        fn rec(start: usize, dim: usize, left: usize, strict: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for i in start..=dim {
                cur.push(i);
                rec(if strict { i + 1 } else { i }, dim, left - 1, strict, cur, out);
                cur.pop();
            }
        }
        rec(1, dim, self.degree, strict, &mut cur, &mut out);
        out
    }

    /// `E_pq` on one basis monomial.
    fn act(&self, p: usize, q: usize, mono: &[usize]) -> Option<(Vec<usize>, i64)> {
        // V: replace one q by p. V*: E_pq v*_p = −v*_q, replace one p by q.
        let (from, to, sign) = if self.dual { (p, q, -1) } else { (q, p, 1) };
        match self.kind {
            FactorKind::Sym => {
                let count = mono.iter().filter(|&&x| x == from).count() as i64;
                if count == 0 {
                    return None;
                }
                let mut out = mono.to_vec();
                let pos = out.iter().position(|&x| x == from).unwrap();
                out.remove(pos);
                let ins = out.partition_point(|&x| x < to);
                out.insert(ins, to);
                Some((out, sign * count))
            }
            FactorKind::Alt => {
                let pos = mono.iter().position(|&x| x == from)?;
                if from == to {
                    return Some((mono.to_vec(), sign));
                }
                if mono.contains(&to) {
                    return None;
                }
                let mut out = mono.to_vec();
                out[pos] = to;
                // bubble `to` into place, one transposition per step
                let mut s = sign;
                let mut k = pos;
                while k > 0 && out[k - 1] > out[k] {
                    out.swap(k - 1, k);
                    s = -s;
                    k -= 1;
                }
                while k + 1 < out.len() && out[k] > out[k + 1] {
                    out.swap(k, k + 1);
                    s = -s;
                    k += 1;
                }
                Some((out, s))
            }
        }
    }

    fn dimension(&self, dim: usize) -> u128 {
        let (top, k) = match self.kind {
            FactorKind::Sym => ((dim + self.degree).saturating_sub(1), self.degree),
            FactorKind::Alt => (dim, self.degree),
        };
        if k > top {
            return 0;
        }
        let mut acc: u128 = 1;
        for i in 0..k as u128 {
            acc = acc * (top as u128 - i) / (i + 1);
        }
        acc
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            FactorKind::Sym => "S",
            FactorKind::Alt => "L",
        };
        write!(f, "{k}{}{}", self.degree, if self.dual { "*" } else { "" })
    }
}

impl FromStr for Factor {
    type Err = Error;

    /// `S2`, `S2*`, `L3`, `L3*` (also `Sym`/`Alt`/`Λ`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidFamily(format!("cannot parse factor {s:?}; expected S<m>, S<m>*, L<m> or L<m>*"));
        let t = s.trim();
        let (t, dual) = match t.strip_suffix('*') {
            Some(r) => (r, true),
            None => (t, false),
        };
        let split = t.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
        let (name, deg) = t.split_at(split);
        let kind = match name.to_ascii_lowercase().as_str() {
            "s" | "sym" => FactorKind::Sym,
            "l" | "alt" | "λ" | "a" => FactorKind::Alt,
            _ => return Err(bad()),
        };
        Ok(Factor { kind, dual, degree: deg.parse().map_err(|_| bad())? })
    }
}

/// A basis element: one monomial per factor.
pub type BasisElem = Vec<Vec<usize>>;
/// A sparse vector in the monomial basis.
pub type Vector = BTreeMap<BasisElem, Q>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleSpace {
    pub algebra: Algebra,
    pub factors: Vec<Factor>,
}

impl ModuleSpace {
    pub fn new(algebra: Algebra, factors: Vec<Factor>) -> Result<Self> {
        algebra.validate()?;
        Ok(Self { algebra, factors })
    }

    pub fn dimension(&self) -> u128 {
        self.factors.iter().map(|f| f.dimension(self.algebra.dim())).product()
    }

    pub fn basis(&self) -> Vec<BasisElem> {
        let dim = self.algebra.dim();
        let mut out: Vec<BasisElem> = vec![vec![]];
        for f in &self.factors {
            let fb = f.basis(dim);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    fb.iter().map(move |m| {
                        let mut e = prefix.clone();
                        e.push(m.clone());
                        e
                    })
                })
                .collect();
        }
        out
    }

    fn contains(&self, e: &BasisElem) -> bool {
        let dim = self.algebra.dim();
        e.len() == self.factors.len()
            && e.iter().zip(&self.factors).all(|(m, f)| {
                m.len() == f.degree
                    && m.iter().all(|&i| (1..=dim).contains(&i))
                    && m.windows(2).all(|w| if f.kind == FactorKind::Alt { w[0] < w[1] } else { w[0] <= w[1] })
            })
    }

    fn apply_e(&self, p: usize, q: usize, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (e, c) in v {
            for (fi, f) in self.factors.iter().enumerate() {
                if let Some((m, s)) = f.act(p, q, &e[fi]) {
                    let mut img = e.clone();
                    img[fi] = m;
                    add_to(&mut out, img, c * Q::from_integer(s.into()));
                }
            }
        }
        out
    }

    fn apply_gen(&self, g: Gen, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (p, q, s) in self.algebra.expand(g) {
            for (e, c) in self.apply_e(p, q, v) {
                add_to(&mut out, e, c * Q::from_integer(s.into()));
            }
        }
        out
    }
}

impl fmt::Display for ModuleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fs: Vec<String> = self.factors.iter().map(Factor::to_string).collect();
        write!(f, "{} on {}", self.algebra, if fs.is_empty() { "k".into() } else { fs.join("⊗") })
    }
}

fn add_to(v: &mut Vector, e: BasisElem, c: Q) {
    if c.is_zero() {
        return;
    }
    let slot = v.entry(e.clone()).or_default();
    *slot += c;
    if slot.is_zero() {
        v.remove(&e);
    }
}

pub fn basis_vector(e: BasisElem) -> Vector {
    Vector::from([(e, Q::one())])
}

/// The image `op · v`; words act right to left.
pub fn apply(op: &OperatorExpr, space: &ModuleSpace, v: &Vector) -> Result<Vector> {
    if op.algebra != space.algebra {
        return Err(Error::DimensionMismatch(format!("operator on {} applied to {}", op.algebra, space.algebra)));
    }
    if let Some(bad) = v.keys().find(|e| !space.contains(e)) {
        return Err(Error::DimensionMismatch(format!("{bad:?} is not a basis element of {space}")));
    }
    let mut out = Vector::new();
    for (word, c) in &op.terms {
        let mut cur = v.clone();
        for &g in word.iter().rev() {
            if cur.is_empty() {
                break;
            }
            cur = space.apply_gen(g, &cur);
        }
        for (e, x) in cur {
            add_to(&mut out, e, x * c);
        }
    }
    Ok(out)
}

/// The first basis element not killed by `op`, if any.
pub fn find_witness(op: &OperatorExpr, space: &ModuleSpace) -> Result<Option<BasisElem>> {
    for b in space.basis() {
        if !apply(op, space, &basis_vector(b.clone()))?.is_empty() {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

pub fn check_annihilates(op: &OperatorExpr, space: &ModuleSpace) -> Result<bool> {
    Ok(find_witness(op, space)?.is_none())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    SymV,
    SymVDual,
}

/// `E_ij(E_kl + δ_kl) − E_il(E_kj + δ_kj)` (`SymV`) or
/// `(E_ij − δ_ij)E_kl − (E_il − δ_il)E_kj` (`SymVDual`) in `U(gl_n)`.
pub fn elementary_annihilator(n: usize, i: usize, j: usize, k: usize, l: usize, variant: Variant) -> Result<OperatorExpr> {
    let alg = Algebra::Gl(n);
    let e = |a, b| OperatorExpr::generator(alg, a, b);
    let delta = |a: usize, b: usize| OperatorExpr::scalar(alg, q(i64::from(a == b)));
    Ok(match variant {
        Variant::SymV => e(i, j)?.mul(&e(k, l)?.add(&delta(k, l))).sub(&e(i, l)?.mul(&e(k, j)?.add(&delta(k, j)))),
        Variant::SymVDual => e(i, j)?.sub(&delta(i, j)).mul(&e(k, l)?).sub(&e(i, l)?.sub(&delta(i, l)).mul(&e(k, j)?)),
    })
}

/// The entry of `A` at `(i, j)`: `E_ij` for `gl`, `a_ij` otherwise.
pub fn matrix_entry(algebra: Algebra, i: usize, j: usize) -> Result<OperatorExpr> {
    OperatorExpr::generator(algebra, i, j)
}

/// The minor `det (A_{i,j})_{i ∈ I, j ∈ J}`, expanded with factors in row order.
///
/// `gl` requires `I ∩ J = ∅`. For `o`/`sp`, overlap is allowed when
/// `I ∪ J ⊆ {1..n}`, where all entries commute; otherwise `I ∩ J = ∅` is required.
pub fn minor(rows: &[usize], cols: &[usize], algebra: Algebra) -> Result<OperatorExpr> {
    algebra.validate()?;
    if rows.len() != cols.len() {
        return Err(Error::IndexSetSize(rows.len(), cols.len()));
    }
    let max = algebra.dim();
    if let Some(&bad) = rows.iter().chain(cols).find(|&&x| x == 0 || x > max) {
        return Err(Error::IndexOutOfRange { index: bad, max });
    }
    let distinct = |s: &[usize]| {
        let mut v = s.to_vec();
        v.sort_unstable();
        v.dedup();
        v.len() == s.len()
    };
    if !distinct(rows) || !distinct(cols) {
        return Err(Error::OverlappingIndexSets(rows.to_vec(), cols.to_vec()));
    }
    let overlap = rows.iter().any(|r| cols.contains(r));
    let low = rows.iter().chain(cols).all(|&x| x <= algebra.half());
    if overlap && (algebra.is_gl() || !low) {
        return Err(Error::OverlappingIndexSets(rows.to_vec(), cols.to_vec()));
    }
    let p = rows.len();
    let mut out = OperatorExpr::zero(algebra);
    let mut perm: Vec<usize> = (0..p).collect();
    for_each_permutation(&mut perm, 0, 1, &mut |perm, sign| {
        let mut term = OperatorExpr::scalar(algebra, q(sign));
        for (r, &c) in perm.iter().enumerate() {
            term = term.mul(&matrix_entry(algebra, rows[r], cols[c]).expect("indices checked"));
            if term.is_zero() {
                break;
            }
        }
        out = out.add(&term);
    });
    Ok(out)
}

fn for_each_permutation(perm: &mut Vec<usize>, k: usize, sign: i64, f: &mut impl FnMut(&[usize], i64)) {
    if k == perm.len() {
        f(perm, sign);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        for_each_permutation(perm, k + 1, if i == k { sign } else { -sign }, f);
        perm.swap(k, i);
    }
}

/// Whether all entries `A_{i,j}`, `i ∈ I`, `j ∈ J`, commute on `space`.
pub fn entries_commute(rows: &[usize], cols: &[usize], space: &ModuleSpace) -> Result<bool> {
    let entries: Vec<OperatorExpr> = rows
        .iter()
        .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
        .map(|(i, j)| matrix_entry(space.algebra, i, j))
        .collect::<Result<_>>()?;
    for (a, x) in entries.iter().enumerate() {
        for y in &entries[a + 1..] {
            if !check_annihilates(&x.commutator(y), space)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundFamily {
    Gl,
    Osp,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBound {
    pub value: u64,
    /// For `osp`, the competing exponent `(2d+1)(d(2d+1)+1)`.
    pub statement_value: Option<u64>,
    pub mismatch: bool,
}

/// `(2k+1)(2k(2k+1)+1)` for both families; for `osp` the smaller exponent
/// `(2d+1)(d(2d+1)+1)` is reported alongside and flagged when it differs.
pub fn degree_bound(k: u64, family: BoundFamily) -> DegreeBound {
    let value = (2 * k + 1) * (2 * k * (2 * k + 1) + 1);
    match family {
        BoundFamily::Gl => DegreeBound { value, statement_value: None, mismatch: false },
        BoundFamily::Osp => {
            let stated = (2 * k + 1) * (k * (2 * k + 1) + 1);
            DegreeBound { value, statement_value: Some(stated), mismatch: stated != value }
        }
    }
}

/// Variables `(index, copy)`: `x`, `y` even; `ξ`, `η` odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SuperVar {
    X(usize, usize),
    Y(usize, usize),
    Xi(usize, usize),
    Eta(usize, usize),
}

impl SuperVar {
    pub fn is_odd(&self) -> bool {
        matches!(self, SuperVar::Xi(..) | SuperVar::Eta(..))
    }
}

impl fmt::Display for SuperVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuperVar::X(i, a) => write!(f, "x{i}_{a}"),
            SuperVar::Y(i, a) => write!(f, "y{i}_{a}"),
            SuperVar::Xi(i, a) => write!(f, "xi{i}_{a}"),
            SuperVar::Eta(i, a) => write!(f, "eta{i}_{a}"),
        }
    }
}

/// Even part as sorted `(var, exponent)`, odd part as a strictly increasing list.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SuperMonomial {
    pub even: Vec<(SuperVar, u32)>,
    pub odd: Vec<SuperVar>,
}

impl SuperMonomial {
    fn mul(&self, other: &Self) -> Option<(Self, i64)> {
        let mut sign = 1;
        for y in &other.odd {
            let greater = self.odd.iter().filter(|x| *x > y).count();
            if self.odd.contains(y) {
                return None;
            }
            if greater % 2 == 1 {
                sign = -sign;
            }
        }
        let mut odd = self.odd.clone();
        odd.extend_from_slice(&other.odd);
        odd.sort_unstable();
        let mut even: BTreeMap<SuperVar, u32> = self.even.iter().copied().collect();
        for (v, e) in &other.even {
            *even.entry(*v).or_default() += e;
        }
        Some((Self { even: even.into_iter().collect(), odd }, sign))
    }

    pub fn xi_count(&self) -> usize {
        self.odd.iter().filter(|v| matches!(v, SuperVar::Xi(..))).count()
    }

    pub fn eta_count(&self) -> usize {
        self.odd.len() - self.xi_count()
    }
}

/// An element of the free supercommutative algebra over `Q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuperPolynomial {
    terms: BTreeMap<SuperMonomial, Q>,
}

impl SuperPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut p = Self::default();
        p.add_term(SuperMonomial::default(), Q::one());
        p
    }

    pub fn var(v: SuperVar) -> Self {
        let m = if v.is_odd() {
            SuperMonomial { even: vec![], odd: vec![v] }
        } else {
            SuperMonomial { even: vec![(v, 1)], odd: vec![] }
        };
        let mut p = Self::default();
        p.add_term(m, Q::one());
        p
    }

    pub fn terms(&self) -> &BTreeMap<SuperMonomial, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: SuperMonomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut out = Self::default();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, s)) = m1.mul(m2) {
                    out.add_term(m, c1 * c2 * Q::from_integer(s.into()));
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
            if out.is_zero() {
                break;
            }
        }
        out
    }

    /// Terms without odd variables.
    pub fn even_part(&self) -> Self {
        Self { terms: self.terms.iter().filter(|(m, _)| m.odd.is_empty()).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Substitutes integers for all even variables.
    pub fn specialize_even(&self, value: impl Fn(SuperVar) -> i64) -> Self {
        let mut out = Self::default();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            for &(v, e) in &m.even {
                coef *= crate::rational::pow(&q(value(v)), e as usize);
            }
            out.add_term(SuperMonomial { even: vec![], odd: m.odd.clone() }, coef);
        }
        out
    }

    /// Smallest `ξ`-degree among the terms.
    pub fn min_xi_degree(&self) -> Option<usize> {
        self.terms.keys().map(SuperMonomial::xi_count).min()
    }

    pub fn variables(&self) -> Vec<SuperVar> {
        let mut vs: Vec<SuperVar> =
            self.terms.keys().flat_map(|m| m.even.iter().map(|e| e.0).chain(m.odd.iter().copied())).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (m, c) in &self.terms {
            let neg = c < &Q::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            out.push_str(match (out.is_empty(), neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            });
            let mut factors: Vec<String> =
                m.even.iter().map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") }).collect();
            factors.extend(m.odd.iter().map(SuperVar::to_string));
            if factors.is_empty() {
                out.push_str(&fmt_q(&a));
            } else {
                if !a.is_one() {
                    out.push_str(&fmt_q(&a));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        f.write_str(&out)
    }
}

/// True iff every term has an odd variable and equally many `ξ` and `η`.
pub fn nilradical_check(p: &SuperPolynomial) -> bool {
    p.terms.keys().all(|m| !m.odd.is_empty() && m.xi_count() == m.eta_count())
}

/// The image of `A(i, j)` in the super algebra.
fn symbol_entry(i: usize, j: usize, k: usize, algebra: Algebra) -> SuperPolynomial {
    let v = SuperPolynomial::var;
    let mut out = SuperPolynomial::zero();
    if algebra.is_gl() {
        for a in 1..=k {
            out = out.add(&v(SuperVar::X(i, a)).mul(&v(SuperVar::Y(j, a))));
            out = out.add(&v(SuperVar::Xi(i, a)).mul(&v(SuperVar::Eta(j, a))));
        }
        for b in k + 1..=2 * k {
            out = out.add(&v(SuperVar::X(j, b)).mul(&v(SuperVar::Y(i, b))).scale(&q(-1)));
            out = out.add(&v(SuperVar::Xi(j, b)).mul(&v(SuperVar::Eta(i, b))).scale(&q(-1)));
        }
    } else {
        let eps = q(algebra.epsilon());
        for a in 1..=k {
            out = out.add(&v(SuperVar::X(i, a)).mul(&v(SuperVar::Y(j, a))));
            out = out.add(&v(SuperVar::X(j, a)).mul(&v(SuperVar::Y(i, a))).scale(&eps));
            out = out.add(&v(SuperVar::Xi(i, a)).mul(&v(SuperVar::Eta(j, a))));
            out = out.add(&v(SuperVar::Xi(j, a)).mul(&v(SuperVar::Eta(i, a))).scale(&eps));
        }
    }
    out
}

/// The image of the minor `A_{I,J}`, `|I| = |J| = 2k + 1`, in the free
/// supercommutative algebra with `k` copies (`gl`: `2k` copies split into `V*`
/// and `V`).
pub fn super_symbol(rows: &[usize], cols: &[usize], k: usize, algebra: Algebra) -> Result<SuperPolynomial> {
    let size = 2 * k + 1;
    if rows.len() != size || cols.len() != size {
        return Err(Error::IndexSetSize(rows.len(), cols.len()));
    }
    if rows.iter().any(|r| cols.contains(r)) {
        return Err(Error::OverlappingIndexSets(rows.to_vec(), cols.to_vec()));
    }
    let max = if algebra.is_gl() { algebra.dim() } else { algebra.half() };
    if let Some(&bad) = rows.iter().chain(cols).find(|&&x| x == 0 || x > max) {
        return Err(Error::IndexOutOfRange { index: bad, max });
    }
    // row-by-row expansion over column subsets
    let mut partial: BTreeMap<u64, SuperPolynomial> = BTreeMap::from([(0u64, SuperPolynomial::one())]);
    for &r in rows {
        let mut next: BTreeMap<u64, SuperPolynomial> = BTreeMap::new();
        for (mask, poly) in &partial {
            for (ci, &c) in cols.iter().enumerate() {
                if mask & (1 << ci) != 0 {
                    continue;
                }
                let above = (mask >> (ci + 1)).count_ones();
                let sign = if above % 2 == 0 { q(1) } else { q(-1) };
                let term = poly.mul(&symbol_entry(r, c, k, algebra)).scale(&sign);
                let slot = next.entry(mask | (1 << ci)).or_default();
                *slot = slot.add(&term);
            }
        }
        partial = next;
    }
    Ok(partial.into_values().next().unwrap_or_default())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilpotencyReport {
    pub odd_variables: usize,
    pub xi_variables: usize,
    pub min_xi_degree: Option<usize>,
    /// Smallest power forced to vanish by counting `ξ`-degrees.
    pub vanishing_power_by_degree: Option<usize>,
    pub power: usize,
    /// `p^power = 0` after substituting distinct positive integers for the even variables.
    pub specialized_power_zero: bool,
    /// `p^{power − 1} ≠ 0` under the same substitution.
    pub specialized_previous_nonzero: bool,
}

/// Checks `p^power = 0`, where `xi_variables` is the number of `ξ`-generators of the ambient algebra.
pub fn nilpotency_check(p: &SuperPolynomial, xi_variables: usize, power: usize) -> NilpotencyReport {
    let vars = p.variables();
    let odd_variables = 2 * xi_variables;
    let min_xi_degree = p.min_xi_degree();
    let vanishing_power_by_degree = match min_xi_degree {
        Some(0) => None,
        Some(m) => Some(xi_variables / m + 1),
        None => Some(1),
    };
    let even: Vec<SuperVar> = vars.iter().copied().filter(|v| !v.is_odd()).collect();
    let spec = p.specialize_even(|v| even.binary_search(&v).map(|i| i as i64 + 1).unwrap_or(1));
    let prev = spec.pow(power.saturating_sub(1));
    let full = prev.mul(&spec);
    NilpotencyReport {
        odd_variables,
        xi_variables,
        min_xi_degree,
        vanishing_power_by_degree,
        power,
        specialized_power_zero: full.is_zero(),
        specialized_previous_nonzero: !prev.is_zero(),
    }
}

/// `2k(2k+1)` `ξ`-generators for both substitutions.
pub fn xi_variable_count(k: usize) -> usize {
    2 * k * (2 * k + 1)
}
