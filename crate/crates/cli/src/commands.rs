use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use stabrep::annihilator::{
    check_annihilates, degree_bound, elementary_annihilator, find_witness, minor, nilpotency_check,
    nilradical_check, super_symbol, xi_variable_count, Algebra, BoundFamily, Factor, ModuleSpace, OperatorExpr,
    Variant,
};
use stabrep::central::{
    self, char_of_bipartition_gl, char_of_triple_gl, char_osp, char_osp_triple, char_pair_of_hom,
    char_pair_of_hom_osp, ck_value, finite_ck_value, hc_compatibility, transpose_identity_check, AffineExponent,
    CentralCharacter, ExponentialSum, FiniteGroup, FormalTriple, HcResult, OspFlavor,
};
use stabrep::lr::{lr_coefficient, skew_schur_expand};
use stabrep::rational::{fmt_q, Q};
use stabrep::slz::{
    apply_e, apply_f, apply_factor, basis_vector, bracket_check, grothendieck_e, grothendieck_f, iso_map,
    BasisIndex, FamilySpec, ModuleKind, ModuleSpec, SparseVector, TupleIndex,
};
use stabrep::stable::{
    finite_hom_multiplicity_gl, king_multiplicity, mixed_stable_multiplicity, stable_hom_multiplicity_gl,
    stable_hom_multiplicity_osp, verify_stability, HomFamily, Probe, StabilityGroup, StabilityReport,
};
use stabrep::weyl::{tensor_decompose, tensor_multiplicity, Group};
use stabrep::{Bipartition, Partition, SkewShape};

use crate::grammar;
use crate::output::{Report, Table};

pub enum CliError {
    /// Bad input: exit code 2.
    Usage(String),
    /// Exit code 1.
    Internal(String),
}

impl From<stabrep::Error> for CliError {
    fn from(e: stabrep::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CmdResult = Result<Report, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn big(x: &BigUint) -> Value {
    match x.to_u64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn q_json(x: &Q) -> Value {
    json!(fmt_q(x))
}

pub struct Ctx {
    pub seed: u64,
    pub timing: bool,
}

impl Ctx {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

pub fn lr(lambda: &Partition, mu: &Partition, nu: &Partition) -> CmdResult {
    Ok(Report::new(json!({ "value": big(&lr_coefficient(lambda, mu, nu)) })))
}

pub fn skew(outer: &Partition, inner: &Partition) -> CmdResult {
    let shape = SkewShape::new(outer.clone(), inner.clone())?;
    let exp = skew_schur_expand(&shape);
    let mut table = Table::new(&["nu", "coefficient"]);
    let mut terms = Vec::new();
    for (nu, c) in &exp.coeffs {
        table.push(vec![nu.to_string(), c.to_string()]);
        terms.push(json!({ "nu": nu.to_string(), "coefficient": big(c) }));
    }
    Ok(Report::with_table(json!({ "shape": shape.to_string(), "expansion": terms }), table))
}

pub fn hom_mult(lambda: &Partition, mu: &Partition, nu: &Bipartition, n: usize, oracle: bool) -> CmdResult {
    let value = finite_hom_multiplicity_gl(lambda, mu, nu, n)?;
    let mut out = json!({ "value": big(&value) });
    if oracle {
        let pad = |p: &Partition| (1..=n).map(|i| p.part(i) as i64).collect::<Vec<_>>();
        let o = match nu.gl_weight(n) {
            Ok(w) => tensor_multiplicity(Group::Gl(n), &w, &pad(mu), &pad(lambda))?,
            Err(_) => 0,
        };
        out["oracle"] = json!(o);
        out["agrees"] = json!(BigUint::from(o) == value);
    }
    Ok(Report::new(out))
}

/// Bipartitions `ν` with `|ν|, |ν̄| ≤ max` and `|ν̄| − |ν| = degree`.
fn probes_gl(max: usize, degree: i64) -> Vec<Bipartition> {
    let mut out = Vec::new();
    for plus in Partition::up_to_size(max) {
        for minus in Partition::up_to_size(max) {
            if minus.size() as i64 - plus.size() as i64 == degree {
                out.push(Bipartition::new(plus.clone(), minus));
            }
        }
    }
    out
}

fn family_json(fam: &HomFamily) -> Value {
    json!({
        "k": fam.k, "l": fam.l, "a": fam.a, "b": fam.b,
        "gamma": fam.gamma.to_string(), "delta": fam.delta.to_string(),
    })
}

pub fn stable_hom(fam: &HomFamily, nu: Option<&Bipartition>, max_size: Option<usize>) -> CmdResult {
    match (nu, max_size) {
        (Some(nu), None) => Ok(Report::new(json!({ "value": big(&stable_hom_multiplicity_gl(fam, nu)?) }))),
        (None, Some(max)) => {
            let mut table = Table::new(&["nu", "multiplicity"]);
            let mut rows = Vec::new();
            for nu in probes_gl(max, fam.degree()) {
                let m = stable_hom_multiplicity_gl(fam, &nu)?;
                table.push(vec![nu.to_string(), m.to_string()]);
                rows.push(json!({ "nu": nu.to_string(), "multiplicity": big(&m) }));
            }
            Ok(Report::with_table(json!({ "family": family_json(fam), "multiplicities": rows }), table))
        }
        _ => Err(usage("give exactly one of --nu or --max-size")),
    }
}

pub fn stable_hom_osp(fam: &HomFamily, nu: Option<&Partition>, max_size: Option<usize>) -> CmdResult {
    match (nu, max_size) {
        (Some(nu), None) => Ok(Report::new(json!({ "value": big(&stable_hom_multiplicity_osp(fam, nu)?) }))),
        (None, Some(max)) => {
            let mut table = Table::new(&["nu", "multiplicity"]);
            let mut rows = Vec::new();
            for nu in Partition::up_to_size(max) {
                let m = stable_hom_multiplicity_osp(fam, &nu)?;
                table.push(vec![nu.to_string(), m.to_string()]);
                rows.push(json!({ "nu": nu.to_string(), "multiplicity": big(&m) }));
            }
            Ok(Report::with_table(json!({ "family": family_json(fam), "multiplicities": rows }), table))
        }
        _ => Err(usage("give exactly one of --nu or --max-size")),
    }
}

pub fn king(lambda: &Partition, mu: &Partition, nu: Option<&Partition>) -> CmdResult {
    match nu {
        Some(nu) => Ok(Report::new(json!({ "value": big(&king_multiplicity(lambda, mu, nu)) }))),
        None => {
            let mut table = Table::new(&["nu", "multiplicity"]);
            let mut rows = Vec::new();
            for nu in Partition::up_to_size(lambda.size() + mu.size()) {
                let m = king_multiplicity(lambda, mu, &nu);
                if m > BigUint::from(0u8) {
                    table.push(vec![nu.to_string(), m.to_string()]);
                    rows.push(json!({ "nu": nu.to_string(), "multiplicity": big(&m) }));
                }
            }
            Ok(Report::with_table(json!({ "multiplicities": rows }), table))
        }
    }
}

fn stability_table(points: &[stabrep::stable::StabilityPoint]) -> Table {
    let mut t = Table::new(&["n", "lambda", "mu", "multiplicity"]);
    for p in points {
        t.push(vec![p.n.to_string(), p.lambda.clone(), p.mu.clone(), p.multiplicity.to_string()]);
    }
    t
}

pub fn verify(fam: &HomFamily, group: StabilityGroup, nu: &str, n_min: usize, n_max: usize) -> CmdResult {
    if n_min > n_max {
        return Err(usage(format!("--n-min {n_min} exceeds --n-max {n_max}")));
    }
    let probe = match group {
        StabilityGroup::Gl => Probe::Gl(grammar::bipartition(nu).map_err(CliError::Usage)?),
        _ => Probe::Osp(grammar::partition(nu).map_err(CliError::Usage)?),
    };
    let report: StabilityReport = verify_stability(fam, &probe, group, n_min..=n_max)?;
    let table = stability_table(&report.points);
    let json = serde_json::to_value(&report).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(Report::with_table(json, table))
}

pub fn mixed(plus: &HomFamily, minus: &HomFamily, nu: &Bipartition, n_min: usize, n_max: usize) -> CmdResult {
    if n_min > n_max {
        return Err(usage(format!("--n-min {n_min} exceeds --n-max {n_max}")));
    }
    let report = mixed_stable_multiplicity(plus, minus, nu, n_min..=n_max)?;
    let table = stability_table(&report.points);
    let json = serde_json::to_value(&report).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(Report::with_table(json, table))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SeriesArg {
    Gl,
    O,
    Sp,
}

impl SeriesArg {
    fn flavor(self) -> Option<OspFlavor> {
        match self {
            SeriesArg::Gl => None,
            SeriesArg::O => Some(OspFlavor::O),
            SeriesArg::Sp => Some(OspFlavor::Sp),
        }
    }
}

/// Where a single central character comes from.
pub enum CharSource {
    Bipartition(Bipartition),
    Partition(Partition),
    Triple(usize, usize, Partition),
}

fn build_char(series: SeriesArg, src: &CharSource) -> Result<CentralCharacter, CliError> {
    Ok(match (series.flavor(), src) {
        (None, CharSource::Bipartition(b)) => char_of_bipartition_gl(b),
        (None, CharSource::Partition(p)) => char_of_bipartition_gl(&Bipartition::new(p.clone(), Partition::empty())),
        (None, CharSource::Triple(k, l, g)) => char_of_triple_gl(&FormalTriple::generic(*k, *l, g.clone())),
        (Some(f), CharSource::Partition(p)) => char_osp(p, f),
        (Some(f), CharSource::Triple(k, l, g)) => char_osp_triple(&FormalTriple::generic(*k, *l, g.clone()), f),
        (Some(_), CharSource::Bipartition(_)) => {
            return Err(usage("--bipartition is only meaningful for --series gl; use --partition"))
        }
    })
}

fn char_json(chi: &CentralCharacter) -> Value {
    let (series, denominator) = match chi.series {
        central::Series::Gl => ("gl", "q - 1"),
        central::Series::Osp(OspFlavor::O) => ("o", "q^(1/2) - q^(-1/2)"),
        central::Series::Osp(OspFlavor::Sp) => ("sp", "q^(1/2) - q^(-1/2)"),
    };
    let terms: Vec<Value> = chi
        .numerator
        .terms()
        .iter()
        .map(|(x, c)| json!({ "coefficient": fmt_q(c), "exponent": x.to_string() }))
        .collect();
    json!({
        "series": series,
        "numerator": chi.numerator.to_string(),
        "denominator": denominator,
        "terms": terms,
    })
}

pub fn central_char(series: SeriesArg, src: &CharSource, values: Option<&BTreeMap<String, Q>>) -> CmdResult {
    let mut chi = build_char(series, src)?;
    if let Some(v) = values {
        chi = chi.substitute(v);
    }
    Ok(Report::new(char_json(&chi)))
}

pub fn ck(series: SeriesArg, src: &CharSource, k: usize, values: Option<&BTreeMap<String, Q>>) -> CmdResult {
    let chi = build_char(series, src)?;
    let mut poly = ck_value(&chi, k)?;
    if let Some(v) = values {
        poly = poly.substitute(v);
    }
    let mut out = json!({ "k": k, "value": poly.to_string() });
    if let Some(c) = poly.as_constant() {
        out["constant"] = q_json(&c);
    }
    Ok(Report::new(out))
}

pub fn ck_finite(hw: &[i64], group: SeriesArg, k: usize) -> CmdResult {
    let g = match group {
        SeriesArg::Gl => FiniteGroup::Gl,
        SeriesArg::O => FiniteGroup::O,
        SeriesArg::Sp => FiniteGroup::Sp,
    };
    let v = finite_ck_value(hw, hw.len(), k, g)?;
    Ok(Report::new(json!({ "k": k, "value": fmt_q(&v) })))
}

fn pair(series: SeriesArg, fam: &HomFamily) -> (CentralCharacter, CentralCharacter) {
    match series.flavor() {
        None => char_pair_of_hom(fam),
        Some(f) => char_pair_of_hom_osp(fam, f),
    }
}

pub fn char_pair(series: SeriesArg, fam: &HomFamily, values: Option<&BTreeMap<String, Q>>) -> CmdResult {
    let (mut chi, mut psi) = pair(series, fam);
    if let Some(v) = values {
        chi = chi.substitute(v);
        psi = psi.substitute(v);
    }
    Ok(Report::new(json!({ "family": family_json(fam), "chi": char_json(&chi), "psi": char_json(&psi) })))
}

fn hc_json(r: &HcResult) -> Value {
    let list = |xs: &[(AffineExponent, u64)]| -> Vec<Value> {
        xs.iter().map(|(x, m)| json!({ "exponent": x.to_string(), "multiplicity": m })).collect()
    };
    match r {
        HcResult::Compatible(d) => json!({ "compatible": true, "plus": list(&d.plus), "minus": list(&d.minus) }),
        HcResult::Incompatible { coset, reason } => {
            json!({ "compatible": false, "coset": coset, "reason": reason })
        }
    }
}

pub fn hc_family(series: SeriesArg, fam: &HomFamily) -> CmdResult {
    let (chi, psi) = pair(series, fam);
    Ok(Report::new(hc_json(&hc_compatibility(&chi, &psi)?)))
}

pub fn hc_explicit(series: SeriesArg, chi: &ExponentialSum, psi: &ExponentialSum) -> CmdResult {
    let wrap = |s: &ExponentialSum| CentralCharacter {
        numerator: s.clone(),
        series: match series.flavor() {
            None => central::Series::Gl,
            Some(f) => central::Series::Osp(f),
        },
    };
    Ok(Report::new(hc_json(&hc_compatibility(&wrap(chi), &wrap(psi))?)))
}

/// A uniformly chosen partition of a uniformly chosen size `≤ max`.
fn random_partition(rng: &mut ChaCha8Rng, max: usize) -> Partition {
    let n = rng.gen_range(0..=max);
    let all = Partition::all_of_size(n);
    all[rng.gen_range(0..all.len())].clone()
}

pub fn transpose_check(ctx: &Ctx, lambda: Option<&Partition>, random: usize, max_size: usize) -> CmdResult {
    let sample: Vec<Partition> = match lambda {
        Some(l) => vec![l.clone()],
        None => {
            let mut rng = ctx.rng();
            (0..random).map(|_| random_partition(&mut rng, max_size)).collect()
        }
    };
    let failures: Vec<String> =
        sample.iter().filter(|p| !transpose_identity_check(p)).map(Partition::to_string).collect();
    Ok(Report::new(json!({
        "checked": sample.len(),
        "passed": failures.is_empty(),
        "failures": failures,
        "sample": sample.iter().map(Partition::to_string).collect::<Vec<_>>(),
    })))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GroupArg {
    Gl,
    So,
    Sp,
}

pub fn tensor(group: GroupArg, n: usize, hw1: &[i64], hw2: &[i64]) -> CmdResult {
    let g = match group {
        GroupArg::Gl => Group::Gl(n),
        GroupArg::So => Group::So(n),
        GroupArg::Sp => Group::Sp(n),
    };
    let dec = tensor_decompose(g, hw1, hw2)?;
    let mut table = Table::new(&["weight", "multiplicity"]);
    let mut rows = Vec::new();
    for (w, m) in &dec {
        let ws = w.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        table.push(vec![ws.clone(), m.to_string()]);
        rows.push(json!({ "weight": w, "multiplicity": m }));
    }
    Ok(Report::with_table(json!({ "group": g.to_string(), "summands": rows }), table))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Elementary,
    GlMinors,
    OspMinors,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum VariantArg {
    Symv,
    Symvdual,
}

pub struct AnnihilatorArgs<'a> {
    pub suite: Option<Suite>,
    pub algebra: Option<Algebra>,
    pub space: Option<&'a str>,
    pub elementary: Option<&'a [usize]>,
    pub variant: VariantArg,
    pub minor: Option<&'a str>,
    pub n_max: usize,
    pub m_max: usize,
}

fn parse_space(alg: Algebra, s: &str) -> Result<ModuleSpace, CliError> {
    let factors = s
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|f| {
            f.parse::<Factor>()
                .map_err(|_| usage(format!("cannot parse factor {f:?}; expected S<m>, S<m>*, L<m> or L<m>*")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ModuleSpace::new(alg, factors)?)
}

fn parse_minor(s: &str) -> Result<(Vec<usize>, Vec<usize>), CliError> {
    let (i, j) = s.split_once('|').ok_or_else(|| usage(format!("cannot parse {s:?}; expected rows|cols, e.g. \"1,2|3,4\"")))?;
    Ok((grammar::index_vector(i).map_err(CliError::Usage)?, grammar::index_vector(j).map_err(CliError::Usage)?))
}

fn verdict(ctx: &Ctx, check: &str, parameters: Value, dimension: u128, ok: bool, start: Instant) -> Value {
    let mut v = json!({ "check": check, "parameters": parameters, "dimension": dimension as u64, "verdict": ok });
    if ctx.timing {
        v["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    v
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (1..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

pub fn annihilator_verify(ctx: &Ctx, args: &AnnihilatorArgs) -> CmdResult {
    let start = Instant::now();
    let mut reports = Vec::new();
    match args.suite {
        Some(Suite::Elementary) => {
            for n in 1..=args.n_max {
                let mut dim = 0u128;
                let mut ok = true;
                for m in 0..=args.m_max {
                    let sv = ModuleSpace::new(Algebra::Gl(n), vec![Factor::sym(m)])?;
                    let svd = ModuleSpace::new(Algebra::Gl(n), vec![Factor::sym_dual(m)])?;
                    dim += sv.dimension() + svd.dimension();
                    for idx in 0..n.pow(4) {
                        let (i, j, k, l) = (idx / n.pow(3) + 1, idx / n.pow(2) % n + 1, idx / n % n + 1, idx % n + 1);
                        ok &= check_annihilates(&elementary_annihilator(n, i, j, k, l, Variant::SymV)?, &sv)?;
                        ok &= check_annihilates(&elementary_annihilator(n, i, j, k, l, Variant::SymVDual)?, &svd)?;
                    }
                }
                reports.push(verdict(ctx, "elementary", json!({ "n": n, "m_max": args.m_max }), dim, ok, start));
            }
        }
        Some(Suite::GlMinors) => {
            for p in 1..=args.n_max.min(2) {
                let alg = Algebra::Gl(2 * (p + 1));
                let rows: Vec<usize> = (1..=p + 1).collect();
                let cols: Vec<usize> = (p + 2..=2 * p + 2).collect();
                let bigm = minor(&rows, &cols, alg)?;
                let small = minor(&rows[..p], &cols[..p], alg)?;
                let (mut ok, mut small_fails, mut dim) = (true, false, 0u128);
                for k in 0..=p {
                    for total in p..=args.m_max.max(p) {
                        for split in 0..=total {
                            for lam in compositions(split, k) {
                                for mu in compositions(total - split, p - k) {
                                    let mut fs: Vec<Factor> = lam.iter().map(|&d| Factor::sym(d)).collect();
                                    fs.extend(mu.iter().map(|&d| Factor::sym_dual(d)));
                                    let w = ModuleSpace::new(alg, fs)?;
                                    dim += w.dimension();
                                    ok &= check_annihilates(&bigm, &w)?;
                                    small_fails |= find_witness(&small, &w)?.is_some();
                                }
                            }
                        }
                    }
                }
                let params = json!({ "p": p, "algebra": alg.to_string(), "degree_max": args.m_max });
                let mut v = verdict(ctx, "gl-minors", params, dim, ok && small_fails, start);
                v["negative_control_fails"] = json!(small_fails);
                reports.push(v);
            }
        }
        Some(Suite::OspMinors) => {
            // An odd principal a_ij minor of o(N) acts by zero, so the disjoint 12-dimensional cases carry the content.
            let cases: [(Algebra, [usize; 3], [usize; 3]); 4] = [
                (Algebra::O(6), [1, 2, 3], [1, 2, 3]),
                (Algebra::Sp(6), [1, 2, 3], [1, 2, 3]),
                (Algebra::O(12), [1, 2, 3], [4, 5, 6]),
                (Algebra::Sp(12), [1, 2, 3], [4, 5, 6]),
            ];
            for (alg, rows, cols) in cases {
                let op = minor(&rows, &cols, alg)?;
                let (mut ok, mut dim) = (true, 0u128);
                for m in 0..=args.m_max {
                    let s = ModuleSpace::new(alg, vec![Factor::sym(m)])?;
                    dim += s.dimension();
                    ok &= check_annihilates(&op, &s)?;
                }
                let control = ModuleSpace::new(alg, vec![Factor::sym(2), Factor::sym(1)])?;
                let control_fails = find_witness(&op, &control)?.is_some();
                let params = json!({ "algebra": alg.to_string(), "rows": rows, "cols": cols, "m_max": args.m_max });
                let mut v = verdict(ctx, "osp-minors", params, dim, ok, start);
                v["negative_control_fails"] = json!(control_fails);
                reports.push(v);
            }
        }
        None => {
            let alg = args.algebra.ok_or_else(|| usage("--algebra is required without --suite"))?;
            let space = parse_space(alg, args.space.ok_or_else(|| usage("--space is required without --suite"))?)?;
            let (op, name): (OperatorExpr, String) = match (args.elementary, args.minor) {
                (Some(idx), None) => {
                    let [i, j, k, l] = idx else {
                        return Err(usage(format!("--elementary needs 4 indices, got {}", idx.len())));
                    };
                    if !alg.is_gl() {
                        return Err(usage("--elementary requires a gl algebra"));
                    }
                    let variant = match args.variant {
                        VariantArg::Symv => Variant::SymV,
                        VariantArg::Symvdual => Variant::SymVDual,
                    };
                    (elementary_annihilator(alg.dim(), *i, *j, *k, *l, variant)?, "elementary".into())
                }
                (None, Some(m)) => {
                    let (rows, cols) = parse_minor(m)?;
                    (minor(&rows, &cols, alg)?, "minor".into())
                }
                _ => return Err(usage("give exactly one of --elementary or --minor")),
            };
            let witness = find_witness(&op, &space)?;
            let params = json!({ "algebra": alg.to_string(), "space": space.to_string(), "operator": op.to_string() });
            let mut v = verdict(ctx, &name, params, space.dimension(), witness.is_none(), start);
            v["witness"] = json!(witness.map(|w| format!("{w:?}")));
            reports.push(v);
        }
    }
    let all = reports.iter().all(|r| r["verdict"] == json!(true));
    let mut table = Table::new(&["check", "parameters", "dimension", "verdict"]);
    for r in &reports {
        table.push(vec![
            r["check"].as_str().unwrap_or_default().to_string(),
            r["parameters"].to_string(),
            r["dimension"].to_string(),
            r["verdict"].to_string(),
        ]);
    }
    Ok(Report::with_table(json!({ "verdict": all, "reports": reports }), table))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum BoundArg {
    Gl,
    Osp,
}

pub fn degree_bound_cmd(k: u64, family: BoundArg) -> CmdResult {
    if k == 0 {
        return Err(usage("--k must be positive"));
    }
    let fam = match family {
        BoundArg::Gl => BoundFamily::Gl,
        BoundArg::Osp => BoundFamily::Osp,
    };
    let b = degree_bound(k, fam);
    Ok(Report::new(json!({ "value": b.value, "statement_value": b.statement_value, "mismatch": b.mismatch })))
}

pub fn super_symbol_check(alg: Algebra, k: usize, rows: Option<&[usize]>, cols: Option<&[usize]>) -> CmdResult {
    let size = 2 * k + 1;
    let rows: Vec<usize> = rows.map(<[usize]>::to_vec).unwrap_or_else(|| (1..=size).collect());
    let cols: Vec<usize> = cols.map(<[usize]>::to_vec).unwrap_or_else(|| (size + 1..=2 * size).collect());
    let p = super_symbol(&rows, &cols, k, alg)?;
    let xi = xi_variable_count(k);
    let power = xi + 1;
    let report = nilpotency_check(&p, xi, power);
    let nil = nilradical_check(&p);
    let ok = nil && report.specialized_power_zero && report.vanishing_power_by_degree.is_some_and(|v| v <= power);
    Ok(Report::new(json!({
        "algebra": alg.to_string(),
        "rows": rows,
        "cols": cols,
        "k": k,
        "terms": p.terms().len(),
        "pure_even_terms": p.even_part().terms().len(),
        "nilradical": nil,
        "nilpotency": serde_json::to_value(&report).map_err(|e| CliError::Internal(e.to_string()))?,
        "verdict": ok,
    })))
}

/// Parses one basis element of `spec`; tensor factors are separated by `/`.
fn parse_basis(spec: &ModuleSpec, s: &str) -> Result<BasisIndex, CliError> {
    let bad = |g: &str| usage(format!("cannot parse basis element {s:?} of {spec}; expected {g}"));
    Ok(match &spec.kind {
        ModuleKind::CZ => BasisIndex::Int(s.trim().parse().map_err(|_| bad("an integer"))?),
        ModuleKind::Wedge(n) => {
            let w = grammar::int_vector(s).map_err(CliError::Usage)?;
            if w.len() != *n || w.windows(2).any(|p| p[0] <= p[1]) {
                return Err(bad(&format!("{n} strictly decreasing integers")));
            }
            BasisIndex::Wedge(w)
        }
        ModuleKind::Fock => BasisIndex::Fock(grammar::partition(s).map_err(CliError::Usage)?),
        ModuleKind::Tensor(fs) => {
            let parts: Vec<&str> = s.split('/').collect();
            if parts.len() != fs.len() {
                return Err(bad(&format!("{} factors separated by '/'", fs.len())));
            }
            if fs.iter().any(|f| matches!(f.kind, ModuleKind::Tensor(_))) {
                return Err(usage("basis text for nested tensor products is not supported"));
            }
            BasisIndex::Tensor(fs.iter().zip(parts).map(|(f, p)| parse_basis(f, p)).collect::<Result<_, _>>()?)
        }
        ModuleKind::DMu { .. } => return Err(bad("no basis text; D_mu starts from the family's base tuple")),
    })
}

/// `f0,e-1,f2`, applied in the order written.
fn parse_ops(s: &str) -> Result<Vec<(bool, i64)>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|op| {
            let raise = match op.chars().next() {
                Some('f') => true,
                Some('e') => false,
                _ => return Err(usage(format!("cannot parse operator {op:?}; expected f<int> or e<int>"))),
            };
            let c = op[1..]
                .parse::<i64>()
                .map_err(|_| usage(format!("cannot parse operator {op:?}; expected f<int> or e<int>")))?;
            Ok((raise, c))
        })
        .collect()
}

fn vector_json(v: &SparseVector) -> Value {
    let terms: Vec<Value> = v.iter().map(|(b, c)| json!({ "basis": b.to_string(), "coefficient": fmt_q(c) })).collect();
    json!(terms)
}

pub struct SlzApplyArgs<'a> {
    pub module: Option<&'a ModuleSpec>,
    pub basis: Option<&'a str>,
    pub family: Option<&'a FamilySpec>,
    pub coset: Option<&'a str>,
    pub ops: &'a str,
}

pub fn slz_apply(args: &SlzApplyArgs) -> CmdResult {
    let ops = parse_ops(args.ops)?;
    let (spec, start, family) = match (args.module, args.family) {
        (Some(m), None) => {
            let b = parse_basis(m, args.basis.ok_or_else(|| usage("--basis is required with --module"))?)?;
            (m.clone(), basis_vector(b), None)
        }
        (None, Some(fam)) => {
            let coset: AffineExponent = args
                .coset
                .ok_or_else(|| usage("--coset is required with --family"))?
                .parse()
                .map_err(|_| usage(format!("cannot parse coset {:?}", args.coset.unwrap_or_default())))?;
            fam.locate(&coset)?;
            let spec = ModuleSpec::new(ModuleKind::DMu { family: Box::new(fam.clone()), coset });
            (spec, basis_vector(BasisIndex::Tuple(fam.base_tuple())), Some(fam))
        }
        _ => return Err(usage("give exactly one of --module or --family")),
    };
    let mut v = start.clone();
    for &(raise, c) in &ops {
        v = if raise { apply_f(&spec, c, &v)? } else { apply_e(&spec, c, &v)? };
    }
    let mut out = json!({ "module": spec.to_string(), "input": vector_json(&start), "ops": args.ops, "result": vector_json(&v) });
    if let Some(fam) = family {
        let images: Vec<Value> = v
            .iter()
            .map(|(b, c)| match b {
                BasisIndex::Tuple(t) => Ok(json!({ "basis": iso_map(fam, t)?.to_string(), "coefficient": fmt_q(c) })),
                _ => Err(CliError::Internal("unexpected basis element".into())),
            })
            .collect::<Result<_, CliError>>()?;
        out["tensor_image"] = json!(images);
        out["tensor_module"] = json!(fam.tensor_spec().to_string());
    }
    Ok(Report::new(out))
}

/// A finite sample of basis elements of `spec`.
fn sample_basis(spec: &ModuleSpec, window: i64, cells: usize) -> Vec<BasisIndex> {
    match &spec.kind {
        ModuleKind::CZ => (-window..=window).map(BasisIndex::Int).collect(),
        ModuleKind::Wedge(n) => {
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
            rec(*n, window, -window, &mut Vec::new(), &mut out);
            out
        }
        ModuleKind::Fock => Partition::up_to_size(cells).into_iter().map(BasisIndex::Fock).collect(),
        ModuleKind::DMu { family, .. } => {
            family.truncated_basis(1, cells.min(2)).into_iter().map(BasisIndex::Tuple).collect()
        }
        ModuleKind::Tensor(fs) => {
            let mut combos: Vec<Vec<BasisIndex>> = vec![vec![]];
            for f in fs {
                let part = sample_basis(f, window.min(2), cells.min(2));
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        part.iter().map(move |p| {
                            let mut c = c.clone();
                            c.push(p.clone());
                            c
                        })
                    })
                    .collect();
            }
            combos.into_iter().map(BasisIndex::Tensor).collect()
        }
    }
}

fn random_tuple(fam: &FamilySpec, rng: &mut ChaCha8Rng, steps: usize) -> Result<TupleIndex, CliError> {
    let cosets = fam.active_cosets();
    let mut t = fam.base_tuple();
    for _ in 0..steps {
        let x = &cosets[rng.gen_range(0..cosets.len())].representative;
        let m = rng.gen_range(-4..=4);
        let next = if rng.gen_bool(0.6) { grothendieck_f(fam, x, m, &t)? } else { grothendieck_e(fam, x, m, &t)? };
        if let Some(n) = next {
            t = n;
        }
    }
    Ok(t)
}

pub struct SlzVerifyArgs<'a> {
    pub module: Option<&'a ModuleSpec>,
    pub family: Option<&'a FamilySpec>,
    pub range: std::ops::RangeInclusive<i64>,
    pub window: i64,
    pub cells: usize,
    pub tuples: usize,
}

pub fn slz_verify(ctx: &Ctx, args: &SlzVerifyArgs) -> CmdResult {
    match (args.module, args.family) {
        (Some(m), None) => {
            let sample = sample_basis(m, args.window, args.cells);
            let mut failures = Vec::new();
            let mut pairs = 0usize;
            for i in args.range.clone() {
                for j in args.range.clone() {
                    pairs += 1;
                    if !bracket_check(m, i, j, &sample)? {
                        failures.push(json!([i, j]));
                    }
                }
            }
            Ok(Report::new(json!({
                "module": m.to_string(),
                "sample_size": sample.len(),
                "pairs_checked": pairs,
                "failures": failures,
                "passed": failures.is_empty(),
            })))
        }
        (None, Some(fam)) => {
            let mut rng = ctx.rng();
            let tensor = fam.tensor_spec();
            let mut rows = Vec::new();
            let mut table = Table::new(&["coset", "tuples", "checks", "passed"]);
            for (pos, ac) in fam.active_cosets().into_iter().enumerate() {
                let mut checks = 0usize;
                let mut ok = true;
                for _ in 0..args.tuples {
                    let t = random_tuple(fam, &mut rng, 12)?;
                    let v = basis_vector(iso_map(fam, &t)?);
                    for m in args.range.clone() {
                        for raise in [true, false] {
                            let image = if raise {
                                grothendieck_f(fam, &ac.representative, m, &t)?
                            } else {
                                grothendieck_e(fam, &ac.representative, m, &t)?
                            };
                            let lhs: SparseVector =
                                image.map(|u| iso_map(fam, &u).map(basis_vector)).transpose()?.unwrap_or_default();
                            let rhs = apply_factor(&tensor, pos, raise, m, &v)?;
                            checks += 1;
                            ok &= lhs == rhs;
                        }
                    }
                }
                let rep = ac.representative.to_string();
                table.push(vec![rep.clone(), args.tuples.to_string(), checks.to_string(), ok.to_string()]);
                rows.push(json!({ "coset": rep, "tuples": args.tuples, "checks": checks, "passed": ok }));
            }
            let passed = rows.iter().all(|r| r["passed"] == json!(true));
            Ok(Report::with_table(json!({ "family": fam.to_string(), "cosets": rows, "passed": passed }), table))
        }
        _ => Err(usage("give exactly one of --module or --family")),
    }
}
