//! Partitions, bipartitions, skew shapes and the `[α, β, γ]` diagram cut.
//!
//! Cells are addressed by 1-based `(row, col)` and the content of a cell is
//! `col - row`.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An integer partition with trailing zeros stripped.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition, dropping zero parts. Fails unless the input is nonincreasing.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1] && w[0] != 0) || has_inner_zero(&parts) {
            return Err(Error::InvalidPartition(join(&parts)));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The `i`-th part counted from 1; zero beyond the length.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return usize::MAX;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn first(&self) -> usize {
        self.part(1)
    }

    pub fn conjugate(&self) -> Self {
        let width = self.first();
        let parts = (1..=width)
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count())
            .collect();
        Self { parts }
    }

    /// `max { i : λ_i ≥ i }`, zero for the empty partition.
    pub fn diagonal_length(&self) -> usize {
        self.parts
            .iter()
            .enumerate()
            .take_while(|(i, &p)| p > *i)
            .count()
    }

    /// Containment of Young diagrams: `other ⊆ self`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p as i64).map(move |c| Cell::new(i + 1, c)))
    }

    pub fn addable_cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for i in 1..=self.len() + 1 {
            let p = self.part(i);
            if i == 1 || self.part(i - 1) > p {
                out.push(Cell::new(i, p as i64 + 1));
            }
        }
        out
    }

    pub fn removable_cells(&self) -> Vec<Cell> {
        (1..=self.len())
            .filter(|&i| self.part(i) > self.part(i + 1))
            .map(|i| Cell::new(i, self.part(i) as i64))
            .collect()
    }

    /// `λ + □_c`, if a cell of content `c` is addable.
    pub fn add_cell(&self, content: i64) -> Option<Partition> {
        let cell = self.addable_cells().into_iter().find(|c| c.content() == content)?;
        let mut parts = self.parts.clone();
        if cell.row > parts.len() {
            parts.push(1);
        } else {
            parts[cell.row - 1] += 1;
        }
        Some(Self { parts })
    }

    /// `λ - □_c`, if a cell of content `c` is removable.
    pub fn remove_cell(&self, content: i64) -> Option<Partition> {
        let cell = self.removable_cells().into_iter().find(|c| c.content() == content)?;
        let mut parts = self.parts.clone();
        parts[cell.row - 1] -= 1;
        if parts.last() == Some(&0) {
            parts.pop();
        }
        Some(Self { parts })
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of_size(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        gen_partitions(n, n, &mut cur, &mut out);
        out
    }

    /// All partitions of size at most `n`.
    pub fn up_to_size(n: usize) -> Vec<Partition> {
        (0..=n).flat_map(Self::all_of_size).collect()
    }

    /// All partitions of `n` with at most `len` parts.
    pub fn all_of_size_with_len(n: usize, len: usize) -> Vec<Partition> {
        Self::all_of_size(n).into_iter().filter(|p| p.len() <= len).collect()
    }

    /// Every partition contained in `self`, including `∅` and `self`.
    pub fn subpartitions(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        gen_sub(&self.parts, 0, usize::MAX, &mut cur, &mut out);
        out
    }

    /// Intersection of diagrams.
    pub fn meet(&self, other: &Partition) -> Partition {
        let parts = self.parts.iter().zip(&other.parts).map(|(a, b)| *a.min(b)).collect();
        Self { parts }
    }
}

fn has_inner_zero(parts: &[usize]) -> bool {
    match parts.iter().position(|&p| p == 0) {
        Some(i) => parts[i..].iter().any(|&p| p != 0),
        None => false,
    }
}

fn gen_partitions(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if n == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    for p in (1..=n.min(max)).rev() {
        cur.push(p);
        gen_partitions(n - p, p, cur, out);
        cur.pop();
    }
}

fn gen_sub(outer: &[usize], i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
    out.push(Partition { parts: cur.clone() });
    if i == outer.len() {
        return;
    }
    for p in 1..=outer[i].min(max) {
        cur.push(p);
        gen_sub(outer, i + 1, p, cur, out);
        cur.pop();
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl Index<usize> for Partition {
    type Output = usize;

    /// 0-based access returning 0 beyond the length.
    fn index(&self, i: usize) -> &usize {
        self.parts.get(i).unwrap_or(&0)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.parts))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(s);
        if s.is_empty() || s == "∅" {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidPartition(s.to_string()))?;
        Self::new(parts).map_err(|_| Error::InvalidPartition(s.to_string()))
    }
}

/// A cell of a (possibly shifted) Young diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: i64,
}

impl Cell {
    pub fn new(row: usize, col: i64) -> Self {
        Self { row, col }
    }

    pub fn content(&self) -> i64 {
        self.col - self.row as i64
    }
}

/// The pair `(λ, λ̄)` indexing a rational representation of `GL_n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    pub plus: Partition,
    pub minus: Partition,
}

impl Bipartition {
    pub fn new(plus: Partition, minus: Partition) -> Self {
        Self { plus, minus }
    }

    pub fn len(&self) -> usize {
        self.plus.len() + self.minus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty() && self.minus.is_empty()
    }

    pub fn dual(&self) -> Self {
        Self::new(self.minus.clone(), self.plus.clone())
    }

    /// `[λ]_n = (λ_1, …, λ_k, 0, …, 0, −λ̄_l, …, −λ̄_1)`.
    pub fn gl_weight(&self, n: usize) -> Result<Vec<i64>> {
        if n < self.len() {
            return Err(Error::RankTooSmall { n, needed: self.len() });
        }
        let mut w = vec![0i64; n];
        for (i, &p) in self.plus.parts().iter().enumerate() {
            w[i] = p as i64;
        }
        for (i, &p) in self.minus.parts().iter().enumerate() {
            w[n - 1 - i] = -(p as i64);
        }
        Ok(w)
    }

    /// Inverse of [`Bipartition::gl_weight`] for a nonincreasing integer vector.
    pub fn from_weight(w: &[i64]) -> Result<Self> {
        if w.windows(2).any(|p| p[0] < p[1]) {
            return Err(Error::NonDominant(w.to_vec()));
        }
        let plus = w.iter().filter(|&&x| x > 0).map(|&x| x as usize).collect();
        let minus = w.iter().rev().filter(|&&x| x < 0).map(|&x| (-x) as usize).collect();
        Ok(Self::new(Partition::new(plus)?, Partition::new(minus)?))
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.plus, self.minus)
    }
}

impl FromStr for Bipartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, m) = s.split_once('|').ok_or_else(|| Error::InvalidPartition(s.to_string()))?;
        Ok(Self::new(p.parse()?, m.parse()?))
    }
}

/// A skew diagram `outer / inner`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SkewShape {
    pub outer: Partition,
    pub inner: Partition,
}

impl SkewShape {
    pub fn new(outer: Partition, inner: Partition) -> Result<Self> {
        if !outer.contains(&inner) {
            return Err(Error::NotContained { outer: outer.to_string(), inner: inner.to_string() });
        }
        Ok(Self { outer, inner })
    }

    pub fn straight(outer: Partition) -> Self {
        Self { outer, inner: Partition::empty() }
    }

    pub fn size(&self) -> usize {
        self.outer.size() - self.inner.size()
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (1..=self.outer.len()).flat_map(move |i| {
            let lo = self.inner.part(i) as i64 + 1;
            (lo..=self.outer.part(i) as i64).map(move |c| Cell::new(i, c))
        })
    }

    pub fn conjugate(&self) -> Self {
        Self { outer: self.outer.conjugate(), inner: self.inner.conjugate() }
    }
}

impl fmt::Display for SkewShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.outer, self.inner)
    }
}

impl FromStr for SkewShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('/') {
            Some((o, i)) => Self::new(o.parse()?, i.parse()?),
            None => Ok(Self::straight(s.parse()?)),
        }
    }
}

/// `λ = [α, β, γ]`: a horizontal cut under row `k` and a vertical cut after column `l`.
///
/// `α` holds the row overhangs right of the `k × l` rectangle, `β` the column
/// overhangs below it, `γ` the remaining diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CutDecomposition {
    pub k: usize,
    pub l: usize,
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub gamma: Partition,
}

impl CutDecomposition {
    pub fn new(alpha: Vec<usize>, beta: Vec<usize>, gamma: Partition) -> Result<Self> {
        let dec = Self { k: alpha.len(), l: beta.len(), alpha, beta, gamma };
        dec.validate()?;
        Ok(dec)
    }

    pub fn cut(lambda: &Partition, k: usize, l: usize) -> Result<Self> {
        let d = lambda.diagonal_length();
        if k > d || l > d {
            return Err(Error::CutTooDeep { k, l, d });
        }
        let conj = lambda.conjugate();
        let alpha = (1..=k).map(|i| lambda.part(i) - l).collect();
        let beta = (1..=l).map(|j| conj.part(j) - k).collect();
        let rows = conj.part(l + 1).saturating_sub(k);
        let gamma = Partition::new((1..=rows).map(|i| lambda.part(k + i) - l).collect())?;
        Ok(Self { k, l, alpha, beta, gamma })
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha.len() != self.k || self.beta.len() != self.l {
            return Err(Error::InvalidTriple("lengths of α, β disagree with (k, l)".into()));
        }
        if self.alpha.windows(2).any(|w| w[0] < w[1]) || self.beta.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidTriple("α and β must be nonincreasing".into()));
        }
        if let Some(&ak) = self.alpha.last() {
            if self.gamma.first() > ak {
                return Err(Error::InvalidTriple(format!("γ_1 = {} > α_k = {ak}", self.gamma.first())));
            }
        }
        if let Some(&bl) = self.beta.last() {
            if self.gamma.len() > bl {
                return Err(Error::InvalidTriple(format!("γ'_1 = {} > β_l = {bl}", self.gamma.len())));
            }
        }
        Ok(())
    }

    pub fn assemble(&self) -> Result<Partition> {
        self.validate()?;
        let (k, l) = (self.k, self.l);
        let mut parts: Vec<usize> = self.alpha.iter().map(|a| a + l).collect();
        let height = self.beta.first().copied().unwrap_or(0).max(self.gamma.len());
        for i in 1..=height {
            if i <= self.gamma.len() {
                parts.push(self.gamma.part(i) + l);
            } else {
                parts.push(self.beta.iter().filter(|&&b| b >= i).count());
            }
        }
        debug_assert!(parts.len() >= k);
        Partition::new(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p("").conjugate(), p(""));
        assert_eq!(p("2,1").conjugate(), p("2,1"));
        assert_eq!(p("5,4,2,1").conjugate(), p("4,3,2,2,1"));
    }

    #[test]
    fn rejects_increasing_parts() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0, 1]).is_err());
        assert_eq!(Partition::new(vec![3, 1, 0, 0]).unwrap(), p("3,1"));
        assert!("3,x".parse::<Partition>().is_err());
    }

    #[test]
    fn diagonal_length() {
        assert_eq!(p("").diagonal_length(), 0);
        assert_eq!(p("5,4,2,1").diagonal_length(), 2);
        assert_eq!(p("3,3,3").diagonal_length(), 3);
        assert_eq!(p("1,1,1").diagonal_length(), 1);
    }

    #[test]
    fn cut_examples() {
        let c = CutDecomposition::cut(&p("5,4,2,1"), 1, 2).unwrap();
        assert_eq!((c.alpha.clone(), c.beta.clone(), c.gamma.clone()), (vec![3], vec![3, 2], p("2")));
        assert_eq!(c.assemble().unwrap(), p("5,4,2,1"));

        let c = CutDecomposition::cut(&p(""), 0, 0).unwrap();
        assert!(c.alpha.is_empty() && c.beta.is_empty() && c.gamma.is_empty());

        let c = CutDecomposition::cut(&p("3,3,3"), 1, 1).unwrap();
        assert_eq!((c.alpha.clone(), c.beta.clone(), c.gamma.clone()), (vec![2], vec![2], p("2,2")));

        assert_eq!(
            CutDecomposition::cut(&p("5,4,2,1"), 3, 0),
            Err(Error::CutTooDeep { k: 3, l: 0, d: 2 })
        );
    }

    #[test]
    fn assemble_examples() {
        let dec = CutDecomposition::new(vec![3], vec![3, 2], p("2")).unwrap();
        assert_eq!(dec.assemble().unwrap(), p("5,4,2,1"));
        let dec = CutDecomposition::new(vec![], vec![], p("2,1")).unwrap();
        assert_eq!(dec.assemble().unwrap(), p("2,1"));
        let dec = CutDecomposition::new(vec![0], vec![], p("")).unwrap();
        assert_eq!(dec.assemble().unwrap(), p(""));
        assert!(matches!(CutDecomposition::new(vec![1], vec![], p("2")), Err(Error::InvalidTriple(_))));
        assert!(matches!(CutDecomposition::new(vec![], vec![1], p("1,1")), Err(Error::InvalidTriple(_))));
    }

    #[test]
    fn addable_and_removable() {
        let contents = |cells: Vec<Cell>| cells.iter().map(|c| (c.row, c.content())).collect::<Vec<_>>();
        assert_eq!(contents(p("").addable_cells()), vec![(1, 0)]);
        assert_eq!(contents(p("2,1").addable_cells()), vec![(1, 2), (2, 0), (3, -2)]);
        assert_eq!(contents(p("2,1").removable_cells()), vec![(1, 1), (2, -1)]);
        assert_eq!(p("1").add_cell(-1), Some(p("1,1")));
        assert_eq!(p("1").add_cell(0), None);
        assert_eq!(p("2,1").remove_cell(-1), Some(p("2")));
    }

    #[test]
    fn bipartition_weights() {
        let b: Bipartition = "1|1".parse().unwrap();
        assert_eq!(b.gl_weight(3).unwrap(), vec![1, 0, -1]);
        assert_eq!(Bipartition::default().gl_weight(2).unwrap(), vec![0, 0]);
        let b: Bipartition = "2,1|1".parse().unwrap();
        assert_eq!(b.gl_weight(4).unwrap(), vec![2, 1, 0, -1]);
        assert_eq!(b.gl_weight(2), Err(Error::RankTooSmall { n: 2, needed: 3 }));
        assert_eq!(Bipartition::from_weight(&[2, 1, 0, -1]).unwrap(), b);
        assert_eq!(b.to_string(), "2,1|1");
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (0..8).map(|n| Partition::all_of_size(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15]);
        assert_eq!(p("2,1").subpartitions().len(), 5);
        assert_eq!(p("2,2").subpartitions().len(), 6);
    }
}
