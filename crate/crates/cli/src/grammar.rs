//! Argument grammars. Every parser returns a message naming the offending token.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use stabrep::annihilator::Algebra;
use stabrep::central::ExponentialSum;
use stabrep::rational::{parse_q, Q};
use stabrep::slz::{FamilySpec, ModuleSpec};
use stabrep::stable::HomFamily;
use stabrep::{Bipartition, Partition};

pub const PARTITION: &str = "comma list of nonincreasing nonnegative integers, e.g. \"3,1,1\" or \"\"";
pub const BIPARTITION: &str = "two partitions separated by '|', e.g. \"2,1|1\"";
pub const INT_VECTOR: &str = "comma list of integers, e.g. \"1,-2,0\"";
pub const FAMILY: &str = "key=value pairs k, l, a, b, gamma, delta, e.g. \"k=1,l=0,a=0,gamma=,delta=\"";
pub const TRIPLE: &str = "key=value pairs k, l, gamma, e.g. \"k=1,l=1,gamma=2\"";
pub const VALUES: &str = "';'-separated assignments, e.g. \"alpha=9;beta=7,4;t=20\"";

fn bad(token: &str, grammar: &str) -> String {
    format!("cannot parse {token:?}; expected {grammar}")
}

pub fn partition(s: &str) -> Result<Partition, String> {
    s.trim().parse().map_err(|_| bad(s, PARTITION))
}

pub fn bipartition(s: &str) -> Result<Bipartition, String> {
    s.trim().parse().map_err(|_| bad(s, BIPARTITION))
}

pub fn int_vector(s: &str) -> Result<Vec<i64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| bad(x, INT_VECTOR))).collect()
}

pub fn index_vector(s: &str) -> Result<Vec<usize>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad(x, "comma list of positive indices"))).collect()
}

pub fn exponential_sum(s: &str) -> Result<ExponentialSum, String> {
    s.parse().map_err(|_| bad(s, "terms \"coeff@exponent\" separated by ';', e.g. \"1@t/2+1;-1@0\""))
}

pub fn algebra(s: &str) -> Result<Algebra, String> {
    s.parse().map_err(|_| bad(s, "gl(N), o(N) or sp(N)"))
}

pub fn slz_family(s: &str) -> Result<FamilySpec, String> {
    s.parse().map_err(|e: stabrep::Error| format!("cannot parse {s:?}: {e}"))
}

pub fn module(s: &str) -> Result<ModuleSpec, String> {
    s.parse().map_err(|_| bad(s, "cz, wedgeN, fock or tensor(...), each optionally followed by ^dual / ^tau"))
}

pub fn range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let grammar = "integer range \"lo..hi\"";
    let (lo, hi) = s.split_once("..").ok_or_else(|| bad(s, grammar))?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad(lo, grammar))?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad(hi, grammar))?;
    if lo > hi {
        return Err(bad(s, grammar));
    }
    Ok(lo..=hi)
}

/// Splits `k=1,l=0,a=1,-1,gamma=2,1` into keys and values: a token without `=`
/// continues the value of the previous key. `;` also separates pairs.
pub fn key_values(s: &str, allowed: &[&str], grammar: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out: BTreeMap<String, String> = BTreeMap::new();
    let mut last: Option<String> = None;
    for tok in s.split([',', ';']).map(str::trim) {
        if let Some((k, v)) = tok.split_once('=') {
            let k = k.trim();
            if !allowed.contains(&k) {
                return Err(bad(tok, grammar));
            }
            if out.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(format!("key {k:?} given twice; expected {grammar}"));
            }
            last = Some(k.to_string());
        } else if tok.is_empty() && last.is_none() {
            continue;
        } else {
            let key = last.as_ref().ok_or_else(|| bad(tok, grammar))?;
            let v = out.get_mut(key).expect("present");
            v.push(',');
            v.push_str(tok);
        }
    }
    Ok(out)
}

fn count(v: Option<&String>, what: &str) -> Result<Option<usize>, String> {
    v.map(|x| x.parse::<usize>().map_err(|_| bad(x, &format!("a nonnegative integer for {what}")))).transpose()
}

/// A `Hom` family from `k, l, a, b, gamma, delta`; missing `a`, `b` default to zeros.
pub fn hom_family(s: &str) -> Result<HomFamily, String> {
    let kv = key_values(s, &["k", "l", "a", "b", "gamma", "delta"], FAMILY)?;
    build_family(
        count(kv.get("k"), "k")?,
        count(kv.get("l"), "l")?,
        kv.get("a").map(|x| int_vector(x)).transpose()?,
        kv.get("b").map(|x| int_vector(x)).transpose()?,
        kv.get("gamma").map(|x| partition(x)).transpose()?,
        kv.get("delta").map(|x| partition(x)).transpose()?,
    )
}

pub fn build_family(
    k: Option<usize>,
    l: Option<usize>,
    a: Option<Vec<i64>>,
    b: Option<Vec<i64>>,
    gamma: Option<Partition>,
    delta: Option<Partition>,
) -> Result<HomFamily, String> {
    let k = k.or(a.as_ref().map(Vec::len)).unwrap_or(0);
    let l = l.or(b.as_ref().map(Vec::len)).unwrap_or(0);
    let a = a.unwrap_or_else(|| vec![0; k]);
    let b = b.unwrap_or_else(|| vec![0; l]);
    if a.len() != k {
        return Err(format!("a has {} entries but k = {k}", a.len()));
    }
    if b.len() != l {
        return Err(format!("b has {} entries but l = {l}", b.len()));
    }
    let gamma = gamma.unwrap_or_default();
    let delta = delta.unwrap_or_else(|| gamma.clone());
    Ok(HomFamily::new(a, b, gamma, delta))
}

/// `(k, l, γ)` for a formal triple.
pub fn triple(s: &str) -> Result<(usize, usize, Partition), String> {
    let kv = key_values(s, &["k", "l", "gamma"], TRIPLE)?;
    Ok((
        count(kv.get("k"), "k")?.unwrap_or(0),
        count(kv.get("l"), "l")?.unwrap_or(0),
        kv.get("gamma").map(|x| partition(x)).transpose()?.unwrap_or_default(),
    ))
}

/// `alpha=9;beta=7,4;t=20` becomes `a1=9, b1=7, b2=4, t=20`; other keys name generators directly.
pub fn generator_values(s: &str) -> Result<BTreeMap<String, Q>, String> {
    let mut out = BTreeMap::new();
    for pair in s.split(';').map(str::trim).filter(|x| !x.is_empty()) {
        let (k, v) = pair.split_once('=').ok_or_else(|| bad(pair, VALUES))?;
        let k = k.trim();
        let parse = |x: &str| parse_q(x.trim()).ok_or_else(|| bad(x, VALUES));
        match k {
            "alpha" | "beta" => {
                let prefix = &k[..1];
                for (i, x) in v.split(',').enumerate() {
                    out.insert(format!("{prefix}{}", i + 1), parse(x)?);
                }
            }
            _ if k.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') => {
                out.insert(k.to_string(), parse(v)?);
            }
            _ => return Err(bad(k, VALUES)),
        }
    }
    Ok(out)
}
