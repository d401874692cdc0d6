use clap::{Args, Subcommand, ValueEnum};
use rado_core::counting::{
    count_solutions_with, count_trivial_pair, enumerate_solutions, even_moment_check, exponent_fit, mean_value,
    CountOptions, DiagonalSystem, DEFAULT_MEMORY_BUDGET,
};
use rado_core::lab::bohr::{bohr_recurrence_check, bohr_set, bohr_syndetic_constant, BohrSpec};
use rado_core::lab::coloring::{find_bad_coloring_with, ColoringOptions, SolutionFilter};
use rado_core::lab::density::density_experiment;
use rado_core::lab::psi::{indicator, AuxOperator, AuxOperatorSpec, Weight};
use rado_core::lab::syndetic::{check_mult_syndetic, syndetic_density_check, SyndeticFamily};
use rado_core::lab::wtrick::{crude_transfer_check, select_progression, w_params, TransferInstance};
use rado_core::matroid::{
    check_condition_i, is_quasi_partitionable, mu_profile, partition_report, q_profile,
};
use rado_core::structure::{
    check_columns_condition, decompose_quasi, falsify_columns_condition, preprocess_system, to_normal_form,
};
use rado_core::RationalMatrix;
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{bad, field, matrix, rational, typed, CliResult, Input};

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Columns condition, condition (I) and the resulting verdict
    Analyze(KArgs),
    /// mu(d) and q(d) profiles
    MuQ(MatrixArgs),
    /// Check q(d) >= d k^2 + 1
    ConditionI(KArgs),
    /// Split the columns into k nonsingular square blocks
    Partition(PartitionArgs),
    /// Quasi-q-partitionability
    Quasi(QArgs),
    /// Block decomposition into quasi-q-partitionable pieces
    Decompose(QArgs),
    /// Columns condition certificate
    Columns(ColumnsArgs),
    /// Block normal form with replayable transcript
    NormalForm(MatrixArgs),
    /// Bring a split system {"A", "B", "C"} into preprocessed form
    Preprocess(KArgs),
    /// Total, trivial and nontrivial solution counts over [N]
    Count(CountArgs),
    /// Solutions with x_u = x_v
    Trivial(TrivialArgs),
    /// Equal sums of t k-th powers over [N]
    MeanValue(MeanArgs),
    /// Moment identity check and optional growth-exponent fit
    Moments(MomentArgs),
    /// Search for an r-coloring of [N] with no monochromatic solution
    Coloring(ColoringArgs),
    /// Solutions inside random dense subsets of [N]
    Density(DensityArgs),
    /// Multiplicative syndeticity of a generated family
    Syndetic(SyndeticArgs),
    /// Polynomial Bohr set, its syndeticity constant and recurrence
    Bohr(BohrArgs),
    /// W-trick parameters, weight mass and progression choice
    Wtrick(WtrickArgs),
    /// Crude transfer inequality between linearised and degree-k counts
    Transfer(TransferArgs),
    /// Auxiliary operator Psi on indicator weights
    Psi(PsiArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct MatrixArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub input: Input,
}

#[derive(Args, Debug, Serialize)]
pub struct KArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub input: Input,
    #[arg(long)]
    pub k: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct PartitionArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub input: Input,
    #[arg(long)]
    pub k: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct QArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub input: Input,
    #[arg(long)]
    pub q: usize,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ColumnsArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub input: Input,
    /// Random row-space samples for the falsifier when the condition fails
    #[arg(long, default_value_t = 0)]
    pub falsify_samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CountArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub input: Input,
    #[arg(long)]
    pub k: u32,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u64,
    /// Bytes available to the split-join tables
    #[arg(long, default_value_t = DEFAULT_MEMORY_BUDGET)]
    pub memory_budget: u128,
    #[arg(long)]
    pub total_only: bool,
    /// Also list up to this many solutions
    #[arg(long)]
    pub list: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct TrivialArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub input: Input,
    #[arg(long)]
    pub k: u32,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u64,
    /// 0-based variable index
    #[arg(long)]
    pub u: usize,
    /// 0-based variable index, larger than u
    #[arg(long)]
    pub v: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct MeanArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub t: u32,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct MomentArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub t: u32,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u64,
    /// Comma separated N values for a log-log fit of N(k,t,N)
    #[arg(long, value_delimiter = ',')]
    pub fit: Vec<u64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterArg {
    PairwiseDistinct,
    NonConstant,
    All,
}

impl From<FilterArg> for SolutionFilter {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::PairwiseDistinct => SolutionFilter::PairwiseDistinct,
            FilterArg::NonConstant => SolutionFilter::NonConstant,
            FilterArg::All => SolutionFilter::All,
        }
    }
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ColoringArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub input: Input,
    #[arg(long)]
    pub k: u32,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u64,
    #[arg(long, default_value_t = 2)]
    pub r: u32,
    #[arg(long, value_enum, default_value_t = FilterArg::NonConstant)]
    pub filter: FilterArg,
    #[arg(long)]
    pub node_budget: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
pub struct DensityArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub input: Input,
    #[arg(long)]
    pub k: u32,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u64,
    /// Density as a rational, e.g. 1/2
    #[arg(long)]
    pub delta: String,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct SyndeticArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub input: Input,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u64,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BohrArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub input: Input,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u64,
    /// Largest multiplier tried for the syndeticity constant
    #[arg(long)]
    pub syndetic_cap: Option<u64>,
    /// Run the recurrence check on the first phase with budget N^(1/c)
    #[arg(long)]
    pub recurrence_c: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WtrickArgs {
    /// Optional set A (JSON list) for choosing the progression
    #[command(flatten)]
    #[serde(skip)]
    pub input: Input,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub w: u64,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub zeta: u64,
    #[arg(long, default_value_t = 1)]
    pub xi: u64,
    #[arg(long, default_value_t = 64)]
    pub zeta_cap: u64,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TransferArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub input: Input,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub w: u64,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub zeta: u64,
    #[arg(long, default_value_t = 1)]
    pub xi: u64,
    #[arg(long, default_value_t = 1 << 22)]
    pub solution_limit: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct PsiArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub input: Input,
    /// Weights default to the indicator of [N]
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u64,
}

pub struct Outcome {
    pub subcommand: &'static str,
    pub input: Value,
    pub options: Value,
    pub result: Value,
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn system(v: &Value, k: u32) -> CliResult<DiagonalSystem> {
    Ok(DiagonalSystem::new(matrix(v, 0)?, k)?)
}

fn u64_list(v: &Value, what: &str) -> CliResult<Vec<u64>> {
    typed(v, what)
}

fn split_system(v: &Value) -> CliResult<(RationalMatrix, RationalMatrix, RationalMatrix)> {
    let a = matrix(field(v, "A")?, 0)?;
    let b = match v.get("B") {
        Some(b) => matrix(b, 0)?,
        None => RationalMatrix::zeros(a.rows(), 0),
    };
    let c = match v.get("C") {
        Some(c) => matrix(c, b.cols())?,
        None => RationalMatrix::zeros(0, b.cols()),
    };
    Ok((a, b, c))
}

fn verdict(columns: bool, condition_i: bool) -> &'static str {
    match (columns, condition_i) {
        (false, _) => "not partition regular: the columns condition fails",
        (true, true) => "partition regular: condition (I) holds and the columns condition holds",
        (true, false) => "undetermined: condition (I) fails, so the columns condition alone does not decide",
    }
}

pub fn run(cmd: &Command) -> CliResult<Outcome> {
    let (subcommand, input, options): (&'static str, &Input, Value) = match cmd {
        Command::Analyze(a) => ("analyze", &a.input, to_json(a)),
        Command::MuQ(a) => ("mu-q", &a.input, to_json(a)),
        Command::ConditionI(a) => ("condition-i", &a.input, to_json(a)),
        Command::Partition(a) => ("partition", &a.input, to_json(a)),
        Command::Quasi(a) => ("quasi", &a.input, to_json(a)),
        Command::Decompose(a) => ("decompose", &a.input, to_json(a)),
        Command::Columns(a) => ("columns", &a.input, to_json(a)),
        Command::NormalForm(a) => ("normal-form", &a.input, to_json(a)),
        Command::Preprocess(a) => ("preprocess", &a.input, to_json(a)),
        Command::Count(a) => ("count", &a.input, to_json(a)),
        Command::Trivial(a) => ("trivial", &a.input, to_json(a)),
        Command::MeanValue(a) => return Ok(no_input("mean-value", to_json(a), to_json(&mean_value(a.k, a.t, a.n)?))),
        Command::Moments(a) => return moments(a).map(|r| no_input("moments", to_json(a), r)),
        Command::Coloring(a) => ("coloring", &a.input, to_json(a)),
        Command::Density(a) => ("density", &a.input, to_json(a)),
        Command::Syndetic(a) => ("syndetic", &a.input, to_json(a)),
        Command::Bohr(a) => ("bohr", &a.input, to_json(a)),
        Command::Wtrick(a) if !a.input.is_given() => {
            return wtrick(a, None).map(|r| no_input("wtrick", to_json(a), r));
        }
        Command::Wtrick(a) => ("wtrick", &a.input, to_json(a)),
        Command::Transfer(a) => ("transfer", &a.input, to_json(a)),
        Command::Psi(a) => ("psi", &a.input, to_json(a)),
    };
    let v = input.value()?;
    let result = match cmd {
        Command::Analyze(a) => {
            let m = matrix(&v, 0)?;
            let cert = check_columns_condition(&m)?;
            let ci = check_condition_i(&m, a.k)?;
            json!({
                "columnsCondition": cert.is_some(),
                "columnsCertificate": cert,
                "conditionI": ci,
                "verdict": verdict(cert.is_some(), ci.holds),
            })
        }
        Command::MuQ(_) => {
            let m = matrix(&v, 0)?;
            json!({ "mu": mu_profile(&m)?.values, "q": q_profile(&m)?.values })
        }
        Command::ConditionI(a) => to_json(&check_condition_i(&matrix(&v, 0)?, a.k)?),
        Command::Partition(a) => to_json(&partition_report(&matrix(&v, 0)?, a.k)?),
        Command::Quasi(a) => to_json(&is_quasi_partitionable(&matrix(&v, 0)?, a.q)?),
        Command::Decompose(a) => to_json(&decompose_quasi(&matrix(&v, 0)?, a.q)?),
        Command::Columns(a) => {
            let m = matrix(&v, 0)?;
            let cert = check_columns_condition(&m)?;
            let mut out = json!({ "holds": cert.is_some(), "certificate": cert });
            if cert.is_none() && a.falsify_samples > 0 {
                let seed = a.seed.ok_or_else(|| bad("--falsify-samples needs --seed"))?;
                let w = falsify_columns_condition(&m, a.falsify_samples, seed);
                out["falsifier"] = to_json(&w.map(|w| w.iter().map(|e| e.to_string()).collect::<Vec<_>>()));
            }
            out
        }
        Command::NormalForm(_) => to_json(&to_normal_form(&matrix(&v, 0)?)?),
        Command::Preprocess(a) => {
            let (am, bm, cm) = split_system(&v)?;
            to_json(&preprocess_system(&am, &bm, &cm, a.k)?)
        }
        Command::Count(a) => {
            let sys = system(&v, a.k)?;
            let opts = CountOptions { memory_budget: a.memory_budget, total_only: a.total_only };
            let mut out = to_json(&count_solutions_with(&sys, a.n, None, opts)?);
            if let Some(limit) = a.list {
                out["solutions"] = to_json(&enumerate_solutions(&sys, a.n, None, limit)?);
            }
            out
        }
        Command::Trivial(a) => {
            let sys = system(&v, a.k)?;
            json!({ "u": a.u, "v": a.v, "count": count_trivial_pair(&sys, a.n, a.u, a.v)?.to_string() })
        }
        Command::Coloring(a) => {
            let sys = system(&v, a.k)?;
            let mut opts = ColoringOptions { filter: a.filter.into(), ..Default::default() };
            if let Some(b) = a.node_budget {
                opts.node_budget = b;
            }
            to_json(&find_bad_coloring_with(&sys, a.n, a.r, opts)?)
        }
        Command::Density(a) => {
            let sys = system(&v, a.k)?;
            to_json(&density_experiment(&sys, a.n, &rational(&a.delta)?, a.trials, a.seed)?)
        }
        Command::Syndetic(a) => {
            let fam: SyndeticFamily = typed(&v, "syndetic family")?;
            let m = fam.constant();
            let limit = a.n.checked_mul(m).ok_or_else(|| bad("N * M overflows"))?;
            let members = fam.members(limit);
            let contains = |x: u64| members[x as usize];
            json!({
                "family": fam,
                "M": m,
                "syndeticity": check_mult_syndetic(contains, m, a.n),
                "density": syndetic_density_check(contains, m, a.n),
            })
        }
        Command::Bohr(a) => {
            let spec: BohrSpec = typed(&v, "Bohr spec")?;
            spec.validate()?;
            let mut out = json!({
                "spec": spec,
                "N": a.n,
                "period": spec.period().to_string(),
                "set": bohr_set(&spec, a.n),
            });
            if let Some(cap) = a.syndetic_cap {
                out["syndeticConstant"] = json!(bohr_syndetic_constant(&spec, cap)?);
            }
            if let Some(c) = a.recurrence_c {
                let alpha = spec.phases.first().ok_or_else(|| bad("recurrence needs a phase"))?;
                out["recurrence"] = to_json(&bohr_recurrence_check(spec.h, alpha, a.n, c)?);
            }
            out
        }
        Command::Wtrick(a) => wtrick(a, Some(&v))?,
        Command::Transfer(a) => {
            let (am, bm, cm) = split_system(&v)?;
            let inst = TransferInstance {
                a: am,
                b: bm,
                c: cm,
                a_set: u64_list(field(&v, "aSet")?, "aSet")?,
                s_set: u64_list(field(&v, "sSet")?, "sSet")?,
            };
            let p = w_params(a.k, a.w, a.n, a.zeta, a.xi)?;
            json!({ "params": p, "report": crude_transfer_check(&inst, &p, a.solution_limit)? })
        }
        Command::Psi(a) => psi(a, &v)?,
        Command::MeanValue(_) | Command::Moments(_) => unreachable!("handled without input"),
    };
    Ok(Outcome { subcommand, input: v, options, result })
}

fn no_input(subcommand: &'static str, options: Value, result: Value) -> Outcome {
    Outcome { subcommand, input: Value::Null, options, result }
}

fn moments(a: &MomentArgs) -> CliResult<Value> {
    let check = even_moment_check(a.k, a.t, a.n)?;
    let mut out = to_json(&check);
    if !a.fit.is_empty() {
        let series = a
            .fit
            .iter()
            .map(|&n| {
                let v = mean_value(a.k, a.t, n)?.value;
                Ok((n as f64, v.to_string().parse::<f64>().unwrap_or(f64::INFINITY)))
            })
            .collect::<CliResult<Vec<_>>>()?;
        out["fit"] = to_json(&exponent_fit(&series)?);
    }
    Ok(out)
}

fn wtrick(a: &WtrickArgs, set: Option<&Value>) -> CliResult<Value> {
    let p = w_params(a.k, a.w, a.n, a.zeta, a.xi)?;
    let mut out = json!({ "params": p, "nuMass": p.nu_mass() });
    if let Some(v) = set {
        let set = u64_list(v, "set A")?;
        out["progression"] = to_json(&select_progression(&set, a.n, a.k, a.w, a.zeta_cap)?);
    }
    Ok(out)
}

fn psi(a: &PsiArgs, v: &Value) -> CliResult<Value> {
    let (am, bm, _) = split_system(v)?;
    let spec = AuxOperatorSpec {
        a: am,
        b: bm,
        k: typed(field(v, "k")?, "k")?,
        b_set: typed(field(v, "bSet")?, "bSet")?,
        y: match v.get("y") {
            Some(y) => typed(y, "y")?,
            None => Vec::new(),
        },
    };
    let op = AuxOperator::new(spec)?;
    let weights: Vec<Weight> = match v.get("sets") {
        Some(sets) => typed::<Vec<Vec<i64>>>(sets, "sets")?.into_iter().map(indicator).collect(),
        None => vec![indicator(1..=a.n as i64); op.s()],
    };
    let value = op.psi(&weights)?;
    Ok(json!({
        "q": op.q(),
        "kernel": op.kernel,
        "shifts": op.shifts,
        "diagonalColumns": op.diagonal_columns,
        "psi": rado_core::linalg::rational_to_json(&value),
        "points": op.points(&weights).len(),
    }))
}
