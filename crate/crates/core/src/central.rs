//! Exponential central characters over formal generators.
//!
//! A character is stored as the numerator `S(z) = Σ c · e^{x z}` of
//! `χ(z) = S(z) / (e^z − 1)` (type `gl`) or `S(z) / (e^{z/2} − e^{−z/2})`
//! (types `o`, `sp`). Exponents are affine in named generators; `t` is the
//! interpolation parameter. Writing `q = e^z`, the eigenvalue of `C_k` is the
//! `k`-th moment `Σ c · x^k` of the numerator.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::partition::{Bipartition, Partition};
use crate::rational::{fmt_q, fractional_part, frac, half, parse_q, pow, q, Q};
use crate::stable::HomFamily;
use crate::{Error, Result};

pub const T: &str = "t";

/// `constant + Σ coeffs[g] · g`, with no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineExponent {
    coeffs: BTreeMap<String, Q>,
    constant: Q,
}

impl AffineExponent {
    pub fn new(constant: Q, coeffs: BTreeMap<String, Q>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self { coeffs, constant }
    }

    pub fn constant(c: Q) -> Self {
        Self { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(q(c))
    }

    pub fn generator(name: &str) -> Self {
        Self { coeffs: BTreeMap::from([(name.to_string(), Q::one())]), constant: Q::zero() }
    }

    /// `(t + 1) / 2`.
    pub fn t_half_plus() -> Self {
        Self::generator(T).scale(&half()).add_const(&half())
    }

    pub fn constant_part(&self) -> &Q {
        &self.constant
    }

    pub fn coeffs(&self) -> &BTreeMap<String, Q> {
        &self.coeffs
    }

    pub fn coeff(&self, name: &str) -> Q {
        self.coeffs.get(name).cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (g, c) in &other.coeffs {
            *coeffs.entry(g.clone()).or_default() += c;
        }
        Self::new(&self.constant + &other.constant, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&q(-1))
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(&self.constant * s, self.coeffs.iter().map(|(g, c)| (g.clone(), c * s)).collect())
    }

    pub fn add_const(&self, c: &Q) -> Self {
        Self { coeffs: self.coeffs.clone(), constant: &self.constant + c }
    }

    pub fn add_int(&self, c: i64) -> Self {
        self.add_const(&q(c))
    }

    /// Replaces the assigned generators by values.
    pub fn substitute(&self, values: &BTreeMap<String, Q>) -> Self {
        let mut constant = self.constant.clone();
        let mut coeffs = BTreeMap::new();
        for (g, c) in &self.coeffs {
            match values.get(g) {
                Some(v) => constant += c * v,
                None => {
                    coeffs.insert(g.clone(), c.clone());
                }
            }
        }
        Self::new(constant, coeffs)
    }

    /// The `Z`-coset key and integer offset: `self = key + offset`.
    pub fn coset(&self) -> (AffineExponent, i64) {
        let f = fractional_part(&self.constant);
        let offset = (&self.constant - &f).to_integer();
        let offset = i64::try_from(offset).expect("offset fits i64");
        (Self { coeffs: self.coeffs.clone(), constant: f }, offset)
    }

    /// `self − other` if it is an integer.
    pub fn integer_difference(&self, other: &Self) -> Option<i64> {
        // coefficient maps carry no zero entries, so equal maps mean a constant difference
        if self.coeffs != other.coeffs {
            return None;
        }
        let d = &self.constant - &other.constant;
        if d.is_integer() {
            i64::try_from(d.to_integer()).ok()
        } else {
            None
        }
    }
}

impl fmt::Display for AffineExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (g, c) in &self.coeffs {
            let sign = if c.is_negative() { "-" } else if out.is_empty() { "" } else { "+" };
            let a = c.abs();
            out.push_str(sign);
            if a != Q::one() {
                out.push_str(&fmt_q(&a));
                out.push('*');
            }
            out.push_str(g);
        }
        if out.is_empty() {
            out = fmt_q(&self.constant);
        } else if !self.constant.is_zero() {
            if !self.constant.is_negative() {
                out.push('+');
            }
            out.push_str(&fmt_q(&self.constant));
        }
        f.write_str(&out)
    }
}

impl FromStr for AffineExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidFamily(format!("cannot parse exponent {s:?}"));
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('*') && !cur.ends_with('/') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut out = AffineExponent::default();
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(b) => (q(-1), b),
                None => (q(1), term.strip_prefix('+').unwrap_or(&term)),
            };
            // `t/2` and `3*t/2`
            let (body, den) = match body.rsplit_once('/') {
                Some((head, d))
                    if head.rsplit('*').next().and_then(|n| n.chars().next()).is_some_and(|c| c.is_ascii_alphabetic() || c == '_') =>
                {
                    (head, parse_q(d).filter(|d| !d.is_zero()).ok_or_else(bad)?)
                }
                _ => (body, Q::one()),
            };
            let sign = sign / den;
            let (coef, name) = match body.split_once('*') {
                Some((c, n)) => (parse_q(c).ok_or_else(bad)?, Some(n)),
                None => match parse_q(body) {
                    Some(c) => (c, None),
                    None => (Q::one(), Some(body)),
                },
            };
            let coef = coef * sign;
            match name {
                Some(n) => {
                    let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                        && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !valid {
                        return Err(bad());
                    }
                    out = out.add(&AffineExponent::generator(n).scale(&coef));
                }
                None => out = out.add_const(&coef),
            }
        }
        Ok(out)
    }
}

impl Serialize for AffineExponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: BTreeMap<&str, String> = self.coeffs.iter().map(|(g, c)| (g.as_str(), fmt_q(c))).collect();
        let mut st = s.serialize_struct("AffineExponent", 2)?;
        st.serialize_field("constant", &fmt_q(&self.constant))?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// A multivariate polynomial over `Q` in generator names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorPoly {
    terms: BTreeMap<Vec<(String, u32)>, Q>,
}

impl GeneratorPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::default();
        p.add_term(vec![], c);
        p
    }

    pub fn from_affine(x: &AffineExponent) -> Self {
        let mut p = Self::constant(x.constant.clone());
        for (g, c) in &x.coeffs {
            p.add_term(vec![(g.clone(), 1)], c.clone());
        }
        p
    }

    fn add_term(&mut self, mono: Vec<(String, u32)>, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mono).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<(String, u32)>, Q> {
        &self.terms
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&vec![]).cloned(),
            _ => None,
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
                let mut exps: BTreeMap<String, u32> = m1.iter().cloned().collect();
                for (g, e) in m2 {
                    *exps.entry(g.clone()).or_default() += e;
                }
                out.add_term(exps.into_iter().collect(), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::constant(Q::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn substitute(&self, values: &BTreeMap<String, Q>) -> Self {
        let mut out = Self::default();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Vec::new();
            for (g, e) in m {
                match values.get(g) {
                    Some(v) => coef *= pow(v, *e as usize),
                    None => rest.push((g.clone(), *e)),
                }
            }
            out.add_term(rest, coef);
        }
        out
    }
}

impl fmt::Display for GeneratorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let sign = if c.is_negative() { "-" } else if out.is_empty() { "" } else { "+" };
            out.push_str(sign);
            let a = c.abs();
            let mono: Vec<String> =
                m.iter().map(|(g, e)| if *e == 1 { g.clone() } else { format!("{g}^{e}") }).collect();
            if mono.is_empty() {
                out.push_str(&fmt_q(&a));
            } else {
                if a != Q::one() {
                    out.push_str(&fmt_q(&a));
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        f.write_str(&out)
    }
}

/// `Σ coeff · q^{exponent}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExponentialSum {
    terms: BTreeMap<AffineExponent, Q>,
}

impl ExponentialSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(x: AffineExponent, c: Q) -> Self {
        let mut s = Self::default();
        s.add_term(x, c);
        s
    }

    pub fn terms(&self) -> &BTreeMap<AffineExponent, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, x: AffineExponent, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(x.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, c) in &other.terms {
            out.add_term(x.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut out = Self::default();
        for (x, c) in &self.terms {
            out.add_term(x.clone(), c * s);
        }
        out
    }

    /// Multiplication by `q^{shift}`.
    pub fn shift(&self, shift: &AffineExponent) -> Self {
        Self { terms: self.terms.iter().map(|(x, c)| (x.add(shift), c.clone())).collect() }
    }

    /// `S(z) ↦ S(−z)`.
    pub fn negate_exponents(&self) -> Self {
        Self { terms: self.terms.iter().map(|(x, c)| (x.neg(), c.clone())).collect() }
    }

    pub fn substitute(&self, values: &BTreeMap<String, Q>) -> Self {
        let mut out = Self::default();
        for (x, c) in &self.terms {
            out.add_term(x.substitute(values), c.clone());
        }
        out
    }

    /// `Σ coeff · exponent^k`.
    pub fn moment(&self, k: usize) -> GeneratorPoly {
        let mut out = GeneratorPoly::zero();
        for (x, c) in &self.terms {
            out = out.add(&GeneratorPoly::from_affine(x).pow(k).scale(c));
        }
        out
    }

    pub fn is_even(&self) -> bool {
        *self == self.negate_exponents()
    }
}

impl fmt::Display for ExponentialSum {
    /// `coeff@exponent` items joined by `;`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.terms.iter().map(|(x, c)| format!("{}@{}", fmt_q(c), x)).collect();
        f.write_str(&items.join(";"))
    }
}

impl FromStr for ExponentialSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Self::default();
        for item in s.split(';').map(str::trim).filter(|i| !i.is_empty()) {
            let (c, x) = item
                .split_once('@')
                .ok_or_else(|| Error::InvalidFamily(format!("expected coeff@exponent, got {item:?}")))?;
            let c = parse_q(c).ok_or_else(|| Error::InvalidFamily(format!("bad coefficient {c:?}")))?;
            out.add_term(x.parse()?, c);
        }
        Ok(out)
    }
}

impl Serialize for ExponentialSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            coefficient: String,
            exponent: &'a AffineExponent,
        }
        s.collect_seq(self.terms.iter().map(|(x, c)| Term { coefficient: fmt_q(c), exponent: x }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OspFlavor {
    O,
    Sp,
}

impl OspFlavor {
    /// The value of `t` at rank `n`: `2n + 1` for `O_{2n+1}`, `2n` for `Sp_{2n}`.
    pub fn t_at(&self, n: usize) -> i64 {
        match self {
            OspFlavor::O => 2 * n as i64 + 1,
            OspFlavor::Sp => 2 * n as i64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Series {
    Gl,
    Osp(OspFlavor),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralCharacter {
    pub numerator: ExponentialSum,
    pub series: Series,
}

impl CentralCharacter {
    pub fn gl(numerator: ExponentialSum) -> Self {
        Self { numerator, series: Series::Gl }
    }

    pub fn substitute(&self, values: &BTreeMap<String, Q>) -> Self {
        Self { numerator: self.numerator.substitute(values), series: self.series }
    }
}

/// `[x]_q · q^{shift} · (q − 1) = q^{x + shift} − q^{shift}`.
pub fn q_number_term(x: &AffineExponent, shift: &AffineExponent) -> ExponentialSum {
    let mut s = ExponentialSum::monomial(x.add(shift), Q::one());
    s.add_term(shift.clone(), q(-1));
    s
}

/// `Σ_j (q^{ν_j} − 1) q^{(t+1)/2 − j} + Σ_j (q^{−ν̄_j} − 1) q^{−(t+1)/2 + j}`.
pub fn char_of_bipartition_gl(nu: &Bipartition) -> CentralCharacter {
    let th = AffineExponent::t_half_plus();
    let mut s = ExponentialSum::zero();
    for (j, &p) in nu.plus.parts().iter().enumerate() {
        s = s.add(&q_number_term(&AffineExponent::int(p as i64), &th.add_int(-(j as i64 + 1))));
    }
    for (j, &p) in nu.minus.parts().iter().enumerate() {
        s = s.add(&q_number_term(&AffineExponent::int(-(p as i64)), &th.neg().add_int(j as i64 + 1)));
    }
    CentralCharacter::gl(s)
}

/// `λ = [α, β, γ]` with symbolic `α`, `β`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormalTriple {
    pub alpha: Vec<AffineExponent>,
    pub beta: Vec<AffineExponent>,
    pub gamma: Partition,
}

impl FormalTriple {
    /// `α_i = a{i}`, `β_j = b{j}`.
    pub fn generic(k: usize, l: usize, gamma: Partition) -> Self {
        Self {
            alpha: (1..=k).map(|i| AffineExponent::generator(&format!("a{i}"))).collect(),
            beta: (1..=l).map(|j| AffineExponent::generator(&format!("b{j}"))).collect(),
            gamma,
        }
    }

    /// `(α + a, β + b, δ)`.
    pub fn shifted(&self, a: &[i64], b: &[i64], delta: Partition) -> Self {
        Self {
            alpha: self.alpha.iter().zip(a).map(|(x, s)| x.add_int(*s)).collect(),
            beta: self.beta.iter().zip(b).map(|(x, s)| x.add_int(*s)).collect(),
            gamma: delta,
        }
    }

    /// `Σ_j [α_j + l]_q q^{−j} + Σ_j [β_j − m]_q q^{−β_j + j − 1 − k} + Σ_j [γ_j + l]_q q^{−k − j}`,
    /// times `(q − 1)`, where `m = ℓ(γ)`.
    fn row_sum(&self) -> ExponentialSum {
        let (k, l, m) = (self.alpha.len() as i64, self.beta.len() as i64, self.gamma.len() as i64);
        let mut s = ExponentialSum::zero();
        for (j, a) in self.alpha.iter().enumerate() {
            let j = j as i64 + 1;
            s = s.add(&q_number_term(&a.add_int(l), &AffineExponent::int(-j)));
        }
        for (j, b) in self.beta.iter().enumerate() {
            let j = j as i64 + 1;
            s = s.add(&q_number_term(&b.add_int(-m), &b.neg().add_int(j - 1 - k)));
        }
        for (j, &g) in self.gamma.parts().iter().enumerate() {
            let j = j as i64 + 1;
            s = s.add(&q_number_term(&AffineExponent::int(g as i64 + l), &AffineExponent::int(-k - j)));
        }
        s
    }
}

pub fn char_of_triple_gl(triple: &FormalTriple) -> CentralCharacter {
    CentralCharacter::gl(triple.row_sum().shift(&AffineExponent::t_half_plus()))
}

/// `(χ, ψ)` of `Hom(μ, λ)` with `λ = [α, β, γ]`, `μ = [α + a, β + b, δ]`.
pub fn char_pair_of_hom(fam: &HomFamily) -> (CentralCharacter, CentralCharacter) {
    let lam = FormalTriple::generic(fam.k, fam.l, fam.gamma.clone());
    let mu = lam.shifted(&fam.a, &fam.b, fam.delta.clone());
    (char_of_triple_gl(&lam), char_of_triple_gl(&mu))
}

/// `½ (S̃(z) + S̃(−z))` for `S̃ = q^{t/2} · row_sum`.
fn symmetrize(tilde: ExponentialSum, flavor: OspFlavor) -> CentralCharacter {
    let numerator = tilde.add(&tilde.negate_exponents()).scale(&half());
    CentralCharacter { numerator, series: Series::Osp(flavor) }
}

/// `Σ_i cosh((ν_i + t/2 − i) z) − cosh((t/2 − i) z)`.
pub fn char_osp(nu: &Partition, flavor: OspFlavor) -> CentralCharacter {
    let half_t = AffineExponent::generator(T).scale(&half());
    let mut s = ExponentialSum::zero();
    for (i, &p) in nu.parts().iter().enumerate() {
        s = s.add(&q_number_term(&AffineExponent::int(p as i64), &half_t.add_int(-(i as i64 + 1))));
    }
    symmetrize(s, flavor)
}

pub fn char_osp_triple(triple: &FormalTriple, flavor: OspFlavor) -> CentralCharacter {
    let half_t = AffineExponent::generator(T).scale(&half());
    symmetrize(triple.row_sum().shift(&half_t), flavor)
}

pub fn char_pair_of_hom_osp(fam: &HomFamily, flavor: OspFlavor) -> (CentralCharacter, CentralCharacter) {
    let lam = FormalTriple::generic(fam.k, fam.l, fam.gamma.clone());
    let mu = lam.shifted(&fam.a, &fam.b, fam.delta.clone());
    (char_osp_triple(&lam, flavor), char_osp_triple(&mu, flavor))
}

/// `χ(C_k)`.
pub fn ck_value(chi: &CentralCharacter, k: usize) -> Result<GeneratorPoly> {
    if matches!(chi.series, Series::Osp(_)) && k % 2 == 1 {
        return Err(Error::OddIndexForOsp(k));
    }
    Ok(chi.numerator.moment(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FiniteGroup {
    Gl,
    O,
    Sp,
}

/// `C_k` on `L(hw)` in the fixed normalization: `Σ (hw_i + ρ_i)^k − ρ_i^k`, with
/// `ρ_i = (n+1)/2 − i` (gl), `n − i + 1/2` (o), and `n − i` after the shift (sp).
pub fn finite_ck_value(hw: &[i64], n: usize, k: usize, group: FiniteGroup) -> Result<Q> {
    let dominant = hw.len() == n
        && hw.windows(2).all(|w| w[0] >= w[1])
        && (group == FiniteGroup::Gl || hw.iter().all(|&x| x >= 0));
    if !dominant {
        return Err(Error::NonDominant(hw.to_vec()));
    }
    let n = n as i64;
    let mut total = Q::zero();
    for (i, &x) in hw.iter().enumerate() {
        let i = i as i64 + 1;
        let rho = match group {
            FiniteGroup::Gl => frac(n + 1 - 2 * i, 2),
            FiniteGroup::O => frac(2 * n - 2 * i + 1, 2),
            FiniteGroup::Sp => q(n - i),
        };
        total += pow(&(q(x) + &rho), k) - pow(&rho, k);
    }
    Ok(total)
}

/// Multiplicities of `e^{b z}` with signs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HcDecomposition {
    /// `b_i` (gl: `e^{b z}`; osp: `sinh((2b + 1) z / 2)`) with multiplicity.
    pub plus: Vec<(AffineExponent, u64)>,
    /// `c_j` (gl only): `−e^{c z}` with multiplicity.
    pub minus: Vec<(AffineExponent, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum HcResult {
    Compatible(HcDecomposition),
    Incompatible { coset: String, reason: String },
}

impl HcResult {
    pub fn is_compatible(&self) -> bool {
        matches!(self, HcResult::Compatible(_))
    }
}

/// Divides `d` by `q − 1` coset by coset; returns the quotient or the failing coset.
fn divide_by_q_minus_one(d: &ExponentialSum) -> std::result::Result<ExponentialSum, (String, String)> {
    let mut cosets: BTreeMap<AffineExponent, BTreeMap<i64, Q>> = BTreeMap::new();
    for (x, c) in d.terms() {
        let (key, off) = x.coset();
        cosets.entry(key).or_default().insert(off, c.clone());
    }
    let mut out = ExponentialSum::zero();
    for (key, coeffs) in cosets {
        let total: Q = coeffs.values().sum();
        if !total.is_zero() {
            return Err((key.to_string(), format!("coefficients sum to {} instead of 0", fmt_q(&total))));
        }
        let (&lo, &hi) = (coeffs.keys().next().unwrap(), coeffs.keys().next_back().unwrap());
        let mut acc = Q::zero();
        for m in lo..hi {
            if let Some(c) = coeffs.get(&m) {
                acc -= c;
            }
            out.add_term(key.add_int(m), acc.clone());
        }
    }
    Ok(out)
}

/// Finds `{b_i}, {c_j}` with `χ − ψ = Σ e^{b_i z} − Σ e^{c_j z}` (gl) or
/// `χ − ψ = Σ sinh((2 b_i + 1) z / 2)` (osp).
pub fn hc_compatibility(chi: &CentralCharacter, psi: &CentralCharacter) -> Result<HcResult> {
    if chi.series != psi.series {
        return Err(Error::SeriesMismatch);
    }
    let d = chi.numerator.sub(&psi.numerator);
    let incompatible = |(coset, reason)| Ok(HcResult::Incompatible { coset, reason });
    match chi.series {
        Series::Gl => {
            let quo = match divide_by_q_minus_one(&d) {
                Ok(x) => x,
                Err(e) => return incompatible(e),
            };
            let mut dec = HcDecomposition::default();
            for (x, c) in quo.terms() {
                if !c.is_integer() {
                    return incompatible((x.coset().0.to_string(), format!("non-integer coefficient {}", fmt_q(c))));
                }
                let m = c.abs().to_integer().try_into().expect("multiplicity fits u64");
                if c.is_positive() {
                    dec.plus.push((x.clone(), m));
                } else {
                    dec.minus.push((x.clone(), m));
                }
            }
            Ok(HcResult::Compatible(dec))
        }
        Series::Osp(_) => {
            // (q^{1/2} − q^{−1/2})^{-1} = q^{1/2} / (q − 1)
            let quo = match divide_by_q_minus_one(&d.shift(&AffineExponent::constant(half()))) {
                Ok(x) => x,
                Err(e) => return incompatible(e),
            };
            let mut dec = HcDecomposition::default();
            for (x, c) in quo.terms() {
                let partner = quo.terms().get(&x.neg()).cloned().unwrap_or_default();
                if partner != -c.clone() {
                    return incompatible((x.coset().0.to_string(), "quotient is not odd".into()));
                }
                let twice = c * q(2);
                if !twice.is_integer() {
                    return incompatible((x.coset().0.to_string(), format!("non-integer coefficient {}", fmt_q(&twice))));
                }
                if twice.is_positive() {
                    let m = twice.to_integer().try_into().expect("multiplicity fits u64");
                    dec.plus.push((x.add_const(&-half()), m));
                }
            }
            Ok(HcResult::Compatible(dec))
        }
    }
}

/// `Σ_j [λ_j]_q q^{−j} = Σ_k [λ'_k]_q q^{−λ'_k + k − 1}`.
pub fn transpose_identity_check(lambda: &Partition) -> bool {
    row_form(lambda) == column_form(lambda)
}

pub fn row_form(lambda: &Partition) -> ExponentialSum {
    let mut s = ExponentialSum::zero();
    for (j, &p) in lambda.parts().iter().enumerate() {
        s = s.add(&q_number_term(&AffineExponent::int(p as i64), &AffineExponent::int(-(j as i64) - 1)));
    }
    s
}

pub fn column_form(lambda: &Partition) -> ExponentialSum {
    let mut s = ExponentialSum::zero();
    for (k, &c) in lambda.conjugate().parts().iter().enumerate() {
        let (c, k) = (c as i64, k as i64 + 1);
        s = s.add(&q_number_term(&AffineExponent::int(c), &AffineExponent::int(-c + k - 1)));
    }
    s
}
