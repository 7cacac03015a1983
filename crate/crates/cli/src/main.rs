use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stabrep::annihilator::Algebra;
use stabrep::central::ExponentialSum;
use stabrep::rational::Q;
use stabrep::slz::{FamilySpec, ModuleSpec};
use stabrep::stable::{HomFamily, StabilityGroup};
use stabrep::{Bipartition, Partition};

mod commands;
mod grammar;
mod output;

use commands::{
    AnnihilatorArgs, BoundArg, CharSource, CliError, CmdResult, Ctx, GroupArg, SeriesArg, SlzApplyArgs, SlzVerifyArgs,
    Suite, VariantArg,
};
use output::Format;

#[derive(Clone, Debug)]
struct Ints(Vec<i64>);

#[derive(Clone, Debug)]
struct Indices(Vec<usize>);

#[derive(Clone, Debug)]
struct Values(BTreeMap<String, Q>);

fn ints(s: &str) -> Result<Ints, String> {
    grammar::int_vector(s).map(Ints)
}

fn indices(s: &str) -> Result<Indices, String> {
    grammar::index_vector(s).map(Indices)
}

fn values(s: &str) -> Result<Values, String> {
    grammar::generator_values(s).map(Values)
}

fn range(s: &str) -> Result<std::ops::RangeInclusive<i64>, String> {
    grammar::range(s)
}

#[derive(Parser, Debug)]
#[command(name = "stabrep", version, about = "Stable multiplicities, central characters, annihilators and sl_Z modules")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for randomized checks (ChaCha8).
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Write the result to FILE atomically instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Report elapsed time on stderr.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// Whole family as key=value pairs, e.g. "k=1,l=0,a=0,gamma=,delta=".
    #[arg(long, value_parser = grammar::hom_family, allow_hyphen_values = true,
          conflicts_with_all = ["k", "l", "a", "b", "gamma", "delta"])]
    family: Option<HomFamily>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// Row shifts, e.g. "1,-1".
    #[arg(long, value_parser = ints, allow_hyphen_values = true)]
    a: Option<Ints>,
    /// Column shifts.
    #[arg(long, value_parser = ints, allow_hyphen_values = true)]
    b: Option<Ints>,
    #[arg(long, value_parser = grammar::partition)]
    gamma: Option<Partition>,
    /// Defaults to gamma.
    #[arg(long, value_parser = grammar::partition)]
    delta: Option<Partition>,
}

impl FamilyArgs {
    fn build(&self) -> Result<HomFamily, CliError> {
        if let Some(f) = &self.family {
            return Ok(f.clone());
        }
        grammar::build_family(
            self.k,
            self.l,
            self.a.as_ref().map(|x| x.0.clone()),
            self.b.as_ref().map(|x| x.0.clone()),
            self.gamma.clone(),
            self.delta.clone(),
        )
        .map_err(CliError::Usage)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StabGroupArg {
    Gl,
    O,
    Sp,
}

#[derive(Args, Debug)]
struct CharSourceArgs {
    #[arg(long, value_parser = grammar::bipartition, group = "source")]
    bipartition: Option<Bipartition>,
    #[arg(long, value_parser = grammar::partition, group = "source")]
    partition: Option<Partition>,
    /// Formal triple, e.g. "k=1,l=1,gamma=2".
    #[arg(long, value_parser = grammar::triple, group = "source")]
    triple: Option<(usize, usize, Partition)>,
}

impl CharSourceArgs {
    fn source(&self) -> Result<CharSource, CliError> {
        match (&self.bipartition, &self.partition, &self.triple) {
            (Some(b), None, None) => Ok(CharSource::Bipartition(b.clone())),
            (None, Some(p), None) => Ok(CharSource::Partition(p.clone())),
            (None, None, Some((k, l, g))) => Ok(CharSource::Triple(*k, *l, g.clone())),
            _ => Err(CliError::Usage("give exactly one of --bipartition, --partition or --triple".into())),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Littlewood–Richardson coefficient c^λ_{μν}.
    Lr {
        #[arg(long, value_parser = grammar::partition)]
        lambda: Partition,
        #[arg(long, value_parser = grammar::partition)]
        mu: Partition,
        #[arg(long, value_parser = grammar::partition)]
        nu: Partition,
    },
    /// Schur expansion of s_{outer/inner}.
    Skew {
        #[arg(long, value_parser = grammar::partition)]
        outer: Partition,
        #[arg(long, value_parser = grammar::partition)]
        inner: Partition,
    },
    /// Finite-rank multiplicity of V_ν in Hom(V_μ, V_λ) for gl_n.
    HomMult {
        #[arg(long, value_parser = grammar::partition)]
        lambda: Partition,
        #[arg(long, value_parser = grammar::partition)]
        mu: Partition,
        #[arg(long, value_parser = grammar::bipartition)]
        nu: Bipartition,
        #[arg(long)]
        n: usize,
        /// Also compute the Weyl-character oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Stable gl multiplicity of a family.
    StableHom {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_parser = grammar::bipartition, conflicts_with = "max_size")]
        nu: Option<Bipartition>,
        /// Tabulate every ν of matching degree with |ν|, |ν̄| ≤ N.
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Stable o/sp multiplicity of a family.
    StableHomOsp {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_parser = grammar::partition, conflicts_with = "max_size")]
        nu: Option<Partition>,
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Stable o/sp tensor multiplicity [V_λ ⊗ V_μ : V_ν].
    King {
        #[arg(long, value_parser = grammar::partition)]
        lambda: Partition,
        #[arg(long, value_parser = grammar::partition)]
        mu: Partition,
        #[arg(long, value_parser = grammar::partition)]
        nu: Option<Partition>,
    },
    /// Oracle multiplicities of a family across a rank window.
    VerifyStability {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = StabGroupArg::Gl)]
        group: StabGroupArg,
        /// Bipartition for gl, partition for o/sp.
        #[arg(long)]
        nu: String,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Oracle data for bipartition families (no closed form).
    MixedStability {
        #[arg(long, value_parser = grammar::hom_family, allow_hyphen_values = true)]
        plus_family: HomFamily,
        #[arg(long, value_parser = grammar::hom_family, allow_hyphen_values = true)]
        minus_family: HomFamily,
        #[arg(long, value_parser = grammar::bipartition)]
        nu: Bipartition,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Exponential central character.
    CentralChar {
        #[arg(long, value_enum)]
        series: SeriesArg,
        #[command(flatten)]
        source: CharSourceArgs,
        /// Generator values, e.g. "alpha=9;beta=7,4;t=20".
        #[arg(long, value_parser = values)]
        values: Option<Values>,
    },
    /// Value of the generator C_k.
    Ck {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = SeriesArg::Gl)]
        series: SeriesArg,
        #[command(flatten)]
        source: CharSourceArgs,
        /// Finite highest weight; uses the rank-n formula instead of a formal character.
        #[arg(long, value_parser = ints, allow_hyphen_values = true, conflicts_with_all = ["bipartition", "partition", "triple"])]
        hw: Option<Ints>,
        #[arg(long, value_parser = values)]
        values: Option<Values>,
    },
    /// Central characters (χ, ψ) of a family.
    CharPair {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = SeriesArg::Gl)]
        series: SeriesArg,
        #[arg(long, value_parser = values)]
        values: Option<Values>,
    },
    /// Harish-Chandra compatibility of (χ, ψ).
    HcCompat {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = SeriesArg::Gl)]
        series: SeriesArg,
        /// Explicit numerator, e.g. "1@a1;-1@0".
        #[arg(long, value_parser = grammar::exponential_sum, allow_hyphen_values = true, requires = "psi")]
        chi: Option<ExponentialSum>,
        #[arg(long, value_parser = grammar::exponential_sum, allow_hyphen_values = true, requires = "chi")]
        psi: Option<ExponentialSum>,
    },
    /// Row/column form identity for the gl character.
    TransposeCheck {
        #[arg(long, value_parser = grammar::partition, conflicts_with = "random")]
        lambda: Option<Partition>,
        /// Number of seeded random partitions.
        #[arg(long, default_value_t = 100)]
        random: usize,
        #[arg(long, default_value_t = 20)]
        max_size: usize,
    },
    /// Tensor product decomposition at finite rank.
    TensorDecompose {
        #[arg(long, value_enum)]
        group: GroupArg,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = ints, allow_hyphen_values = true)]
        hw1: Ints,
        #[arg(long, value_parser = ints, allow_hyphen_values = true)]
        hw2: Ints,
    },
    /// Check that operators annihilate tensor spaces.
    AnnihilatorVerify {
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        #[arg(long, value_parser = grammar::algebra, conflicts_with = "suite")]
        algebra: Option<Algebra>,
        /// Factors such as "S2,S1*" or "L2".
        #[arg(long, conflicts_with = "suite")]
        space: Option<String>,
        /// Elementary annihilator indices "i,j,k,l".
        #[arg(long, value_parser = indices, conflicts_with_all = ["suite", "minor"])]
        elementary: Option<Indices>,
        #[arg(long, value_enum, default_value_t = VariantArg::Symv)]
        variant: VariantArg,
        /// Minor "rows|cols", e.g. "1,2,3|4,5,6".
        #[arg(long, conflicts_with = "suite")]
        minor: Option<String>,
        /// Largest n for the elementary suite, largest p for gl minors.
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        /// Largest symmetric degree.
        #[arg(long, default_value_t = 4)]
        m_max: usize,
    },
    /// Degree bound for the annihilator construction.
    DegreeBound {
        #[arg(long)]
        k: u64,
        #[arg(long, value_enum, default_value_t = BoundArg::Gl)]
        family: BoundArg,
    },
    /// Super-symbol nilradical and nilpotency check.
    SuperSymbolCheck {
        #[arg(long, value_parser = grammar::algebra)]
        algebra: Algebra,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = indices)]
        rows: Option<Indices>,
        #[arg(long, value_parser = indices)]
        cols: Option<Indices>,
    },
    /// Apply f_c / e_c operators to a basis vector.
    SlzApply {
        #[arg(long, value_parser = grammar::module, conflicts_with = "family")]
        module: Option<ModuleSpec>,
        /// Basis element; tensor factors separated by '/'.
        #[arg(long, allow_hyphen_values = true)]
        basis: Option<String>,
        #[arg(long, value_parser = grammar::slz_family)]
        family: Option<FamilySpec>,
        /// Coset representative, e.g. "a1" or "-t+a1".
        #[arg(long, allow_hyphen_values = true)]
        coset: Option<String>,
        /// Operators applied left to right, e.g. "f0,e1,f-2".
        #[arg(long, allow_hyphen_values = true)]
        ops: String,
    },
    /// Bracket relations on a module, or intertwining on a family.
    SlzVerify {
        #[arg(long, value_parser = grammar::module, conflicts_with = "family")]
        module: Option<ModuleSpec>,
        #[arg(long, value_parser = grammar::slz_family)]
        family: Option<FamilySpec>,
        /// Operator indices "lo..hi".
        #[arg(long, value_parser = range, allow_hyphen_values = true, default_value = "-3..3")]
        range: std::ops::RangeInclusive<i64>,
        /// Window for CZ and wedge bases.
        #[arg(long, default_value_t = 4)]
        window: i64,
        /// Cell bound for Fock bases.
        #[arg(long, default_value_t = 4)]
        cells: usize,
        /// Random tuples per coset in family mode.
        #[arg(long, default_value_t = 50)]
        tuples: usize,
    },
}

fn run(cli: &Cli) -> CmdResult {
    let ctx = Ctx { seed: cli.seed, timing: cli.timing };
    let vals = |v: &Option<Values>| v.as_ref().map(|x| x.0.clone());
    match &cli.command {
        Command::Lr { lambda, mu, nu } => commands::lr(lambda, mu, nu),
        Command::Skew { outer, inner } => commands::skew(outer, inner),
        Command::HomMult { lambda, mu, nu, n, oracle } => commands::hom_mult(lambda, mu, nu, *n, *oracle),
        Command::StableHom { family, nu, max_size } => commands::stable_hom(&family.build()?, nu.as_ref(), *max_size),
        Command::StableHomOsp { family, nu, max_size } => {
            commands::stable_hom_osp(&family.build()?, nu.as_ref(), *max_size)
        }
        Command::King { lambda, mu, nu } => commands::king(lambda, mu, nu.as_ref()),
        Command::VerifyStability { family, group, nu, n_min, n_max } => {
            let g = match group {
                StabGroupArg::Gl => StabilityGroup::Gl,
                StabGroupArg::O => StabilityGroup::O,
                StabGroupArg::Sp => StabilityGroup::Sp,
            };
            commands::verify(&family.build()?, g, nu, *n_min, *n_max)
        }
        Command::MixedStability { plus_family, minus_family, nu, n_min, n_max } => {
            commands::mixed(plus_family, minus_family, nu, *n_min, *n_max)
        }
        Command::CentralChar { series, source, values } => {
            commands::central_char(*series, &source.source()?, vals(values).as_ref())
        }
        Command::Ck { k, series, source, hw, values } => match hw {
            Some(hw) => commands::ck_finite(&hw.0, *series, *k),
            None => commands::ck(*series, &source.source()?, *k, vals(values).as_ref()),
        },
        Command::CharPair { family, series, values } => {
            commands::char_pair(*series, &family.build()?, vals(values).as_ref())
        }
        Command::HcCompat { family, series, chi, psi } => match (chi, psi) {
            (Some(c), Some(p)) => commands::hc_explicit(*series, c, p),
            _ => commands::hc_family(*series, &family.build()?),
        },
        Command::TransposeCheck { lambda, random, max_size } => {
            commands::transpose_check(&ctx, lambda.as_ref(), *random, *max_size)
        }
        Command::TensorDecompose { group, n, hw1, hw2 } => commands::tensor(*group, *n, &hw1.0, &hw2.0),
        Command::AnnihilatorVerify { suite, algebra, space, elementary, variant, minor, n_max, m_max } => {
            commands::annihilator_verify(
                &ctx,
                &AnnihilatorArgs {
                    suite: *suite,
                    algebra: *algebra,
                    space: space.as_deref(),
                    elementary: elementary.as_ref().map(|x| x.0.as_slice()),
                    variant: *variant,
                    minor: minor.as_deref(),
                    n_max: *n_max,
                    m_max: *m_max,
                },
            )
        }
        Command::DegreeBound { k, family } => commands::degree_bound_cmd(*k, *family),
        Command::SuperSymbolCheck { algebra, k, rows, cols } => commands::super_symbol_check(
            *algebra,
            *k,
            rows.as_ref().map(|x| x.0.as_slice()),
            cols.as_ref().map(|x| x.0.as_slice()),
        ),
        Command::SlzApply { module, basis, family, coset, ops } => commands::slz_apply(&SlzApplyArgs {
            module: module.as_ref(),
            basis: basis.as_deref(),
            family: family.as_ref(),
            coset: coset.as_deref(),
            ops,
        }),
        Command::SlzVerify { module, family, range, window, cells, tuples } => commands::slz_verify(
            &ctx,
            &SlzVerifyArgs {
                module: module.as_ref(),
                family: family.as_ref(),
                range: range.clone(),
                window: *window,
                cells: *cells,
                tuples: *tuples,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let result = run(&cli);
    if cli.timing {
        eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(report) => {
            let bytes = match output::render(&report, cli.format) {
                Ok(b) => b,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            match output::emit(&bytes, cli.out.as_deref()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
