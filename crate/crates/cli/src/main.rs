use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mobility::axioms::{self, PropertyRow};
use mobility::class1::{self, DecompositionResult, SubgroupPartition};
use mobility::class2::{self, check_gamma, PMode};
use mobility::io::{self, json_number, Format, IoError, ResultTable};
use mobility::measure::{validate_spec, MeasureId, MeasureSpec};
use mobility::{tables, MobilityError, MovementProfile, StatusTransform, VarianceConvention};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "mobility",
    version,
    about = "Mobility measures, decompositions and property checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one measure on a profile CSV (`id,u,v`).
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        measure: MeasureArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate measures on every scenario of a scenario JSON file, or on the
    /// built-in scenarios when no file is given.
    Scenarios {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Measures to evaluate; repeat the flag for several rows.
        #[arg(long = "measure", required = true, value_parser = parse_measure)]
        measures: Vec<MeasureId>,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Reproduce a built-in results table (1, 2 or 4).
    #[command(name = "paper-tables")]
    BuiltinTables {
        #[arg(value_parser = ["1", "2", "4"])]
        which: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Split a measure into components.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Group file (`id,group`), required for `subgroup`.
        #[arg(long)]
        groups: Option<PathBuf>,
        #[command(flatten)]
        measure: MeasureArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Audit measures against the movement and invariance properties.
    Check {
        #[arg(long, value_parser = parse_measure, conflicts_with = "all", required_unless_present = "all")]
        measure: Option<MeasureId>,
        /// Audit the sixteen-measure roster and compare with the reference matrix.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 400, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long, value_parser = parse_measure)]
    measure: MeasureId,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct ParamArgs {
    /// Sensitivity; the measure's default when omitted.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Positional weight exponent (odd, non-negative).
    #[arg(long, default_value = "1", value_parser = parse_gamma, allow_negative_numbers = true)]
    gamma: i64,
    /// Location shift of the intermediate family.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, value_enum, default_value_t = Status::Identity)]
    status: Status,
    #[arg(long, value_enum, default_value_t = Pmode::Distance)]
    pmode: Pmode,
    #[arg(long, value_enum, default_value_t = Var::N)]
    var: Var,
    /// Inequality index behind the Shorrocks measure.
    #[arg(long, value_enum, default_value_t = Inequality::Theil)]
    inequality: Inequality,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    #[arg(long, default_value_t = 3)]
    decimals: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Updown,
    Seg,
    Subgroup,
}

#[derive(Clone, Copy, ValueEnum)]
enum Status {
    Identity,
    Log,
    Rank,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pmode {
    Status,
    Distance,
}

#[derive(Clone, Copy, ValueEnum)]
enum Var {
    #[value(name = "n")]
    N,
    #[value(name = "n-1")]
    NMinus1,
}

#[derive(Clone, Copy, ValueEnum)]
enum Inequality {
    Theil,
    Gini,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Tsv,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Json => Format::Json,
            OutFormat::Tsv => Format::Tsv,
        }
    }
}

fn parse_measure(s: &str) -> Result<MeasureId, String> {
    s.parse()
}

fn parse_gamma(s: &str) -> Result<i64, String> {
    let g: i64 = s.parse().map_err(|_| format!("'{s}' is not an integer"))?;
    check_gamma(g).map_err(|e| e.to_string())?;
    Ok(g)
}

impl ParamArgs {
    fn spec(&self, id: MeasureId) -> Result<MeasureSpec, MobilityError> {
        let id = match (id, self.inequality) {
            (MeasureId::ShorrocksTheil, Inequality::Gini) => MeasureId::ShorrocksGini,
            (id, _) => id,
        };
        let mut spec = MeasureSpec::new(id)
            .with_gamma(self.gamma)?
            .with_c(self.c)
            .with_status(match self.status {
                Status::Identity => StatusTransform::Identity,
                Status::Log => StatusTransform::Log,
                Status::Rank => StatusTransform::Rank,
            })
            .with_p_mode(match self.pmode {
                Pmode::Status => PMode::StatusBased,
                Pmode::Distance => PMode::DistanceBased,
            })
            .with_variance(match self.var {
                Var::N => VarianceConvention::Population,
                Var::NMinus1 => VarianceConvention::Sample,
            });
        if let Some(a) = self.alpha {
            spec = spec.with_alpha(a);
        }
        validate_spec(&spec)?;
        Ok(spec)
    }
}

fn params_json(spec: &MeasureSpec) -> Value {
    json!({
        "alpha": spec.alpha,
        "gamma": spec.gamma,
        "c": spec.c,
        "status": spec.status,
        "pmode": spec.p_mode,
        "var": match spec.variance {
            VarianceConvention::Population => "n",
            VarianceConvention::Sample => "n-1",
        },
    })
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serialisable"));
}

fn run_compute(input: &PathBuf, m: &MeasureArgs, out: &OutputArgs) -> Result<(), IoError> {
    let spec = m.params.spec(m.measure)?;
    let lp = io::parse_profile_csv(input)?;
    let value = spec.evaluate(&lp.profile)?;
    match out.format {
        OutFormat::Json => print_json(&json!({
            "measure": spec.id.name(),
            "label": spec.label(),
            "params": params_json(&spec),
            "value": json_number(&Some(value), out.decimals),
        })),
        OutFormat::Tsv => print!(
            "measure\tvalue\n{}\t{}\n",
            spec.label(),
            io::format_value(value, out.decimals)
        ),
    }
    Ok(())
}

fn run_scenarios(
    input: &Option<PathBuf>,
    ids: &[MeasureId],
    params: &ParamArgs,
    out: &OutputArgs,
) -> Result<(), IoError> {
    let set = match input {
        Some(path) => io::ScenarioSet::from_json_file(path)?,
        None => tables::scenario_set(),
    };
    let specs = ids.iter().map(|&id| params.spec(id)).collect::<Result<Vec<_>, _>>()?;
    let columns: Vec<String> = set.labels().map(String::from).collect();
    let profiles: Vec<MovementProfile> = columns.iter().map(|c| set.profile(c).expect("known label")).collect();
    let table = ResultTable {
        rows: specs.iter().map(MeasureSpec::label).collect(),
        cells: specs
            .iter()
            .map(|s| profiles.iter().map(|p| s.evaluate(p).ok()).collect())
            .collect(),
        columns,
    };
    print!("{}", table.render(out.format.into(), out.decimals));
    Ok(())
}

fn decomposition_json(spec: &MeasureSpec, method: &str, d: &DecompositionResult, decimals: usize) -> Value {
    let n = |x: f64| json_number(&Some(x), decimals);
    json!({
        "measure": spec.id.name(),
        "label": spec.label(),
        "params": params_json(spec),
        "method": method,
        "total": n(d.total),
        "components": d.components.iter().map(|c| json!({
            "label": c.label,
            "weight": n(c.weight),
            "value": n(c.value),
        })).collect::<Vec<_>>(),
        "between": n(d.between),
        "residual": n(d.residual),
    })
}

fn decompose_class1(
    spec: &MeasureSpec,
    p: &MovementProfile,
    g: &SubgroupPartition,
) -> Result<DecompositionResult, MobilityError> {
    match spec.id {
        MeasureId::A1 => class1::decompose_a1_subgroups(p, spec.alpha, g),
        MeasureId::S1 => class1::decompose_s1_subgroups(p, spec.alpha, g),
        MeasureId::T1 => class1::decompose_t1_subgroups(p, spec.alpha, g),
        _ => Err(MobilityError::DomainError(format!(
            "subgroup decomposition is available for A1, S1 and T1, not {}",
            spec.id
        ))),
    }
}

fn run_decompose(
    input: &PathBuf,
    method: Method,
    groups: &Option<PathBuf>,
    m: &MeasureArgs,
    out: &OutputArgs,
) -> Result<(), IoError> {
    let spec = m.params.spec(m.measure)?;
    let lp = io::parse_profile_csv(input)?;
    let p = lp.profile.transform(spec.status)?;
    let (name, d) = match method {
        Method::Updown => {
            let d = match spec.concept() {
                Some(c) => class2::decompose_updown(&p, c, spec.weight_scheme()?)?,
                None => decompose_class1(&spec, &p, &SubgroupPartition::up_down(&p)?)?,
            };
            ("updown", d)
        }
        Method::Seg => {
            let c = spec.concept().ok_or_else(|| {
                MobilityError::DomainError(format!(
                    "seg decomposition is available for A2, S2 and T2, not {}",
                    spec.id
                ))
            })?;
            if spec.gamma != 1 {
                return Err(MobilityError::UnsupportedGamma {
                    gamma: spec.gamma,
                    context: "seg decomposition",
                }
                .into());
            }
            ("seg", class2::decompose_seg(&p, c)?)
        }
        Method::Subgroup => {
            let path = groups
                .as_ref()
                .ok_or_else(|| MobilityError::DomainError("subgroup decomposition needs --groups".into()))?;
            let g = io::parse_groups_csv(path, &lp.ids)?;
            ("subgroup", decompose_class1(&spec, &p, &g)?)
        }
    };
    match out.format {
        OutFormat::Json => print_json(&decomposition_json(&spec, name, &d, out.decimals)),
        OutFormat::Tsv => {
            let f = |x: f64| io::format_value(x, out.decimals);
            println!("component\tweight\tvalue");
            for c in &d.components {
                println!("{}\t{}\t{}", c.label, f(c.weight), f(c.value));
            }
            println!("between\t\t{}", f(d.between));
            println!("total\t\t{}", f(d.total));
            println!("residual\t\t{}", f(d.residual));
        }
    }
    Ok(())
}

fn run_check(
    measure: Option<MeasureId>,
    seed: u64,
    trials: usize,
    params: &ParamArgs,
    out: &OutputArgs,
) -> Result<(), IoError> {
    let roster = match measure {
        Some(id) => {
            let spec = params.spec(id)?;
            vec![(spec.label(), spec)]
        }
        None => axioms::default_roster(),
    };
    let report = axioms::property_report(&roster, trials, seed);
    let rows: Vec<PropertyRow> = report.iter().map(|r| r.row()).collect();
    let differences: Vec<Value> = if measure.is_none() {
        rows.iter()
            .zip(tables::reference_matrix())
            .filter_map(|(got, want)| {
                let cols = got.differences(&want);
                (!cols.is_empty()).then(|| json!({ "measure": got.measure, "columns": cols }))
            })
            .collect()
    } else {
        Vec::new()
    };
    match out.format {
        OutFormat::Json => {
            let mut doc = json!({ "seed": seed, "trials": trials, "reports": report, "matrix": rows });
            if measure.is_none() {
                doc["reference_differences"] = Value::Array(differences);
            }
            print_json(&doc);
        }
        OutFormat::Tsv => {
            println!("measure\taxiom2\taxiom2'\tscale\ttranslation\tup/down\texchange\tdirectional");
            for r in &rows {
                println!("{}", r.render());
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), IoError> {
    match &cli.command {
        Command::Compute { input, measure, out } => run_compute(input, measure, out),
        Command::Scenarios {
            input,
            measures,
            params,
            out,
        } => run_scenarios(input, measures, params, out),
        Command::BuiltinTables { which, out } => {
            let t = tables::builtin_table(which.parse().expect("validated by clap")).expect("known table");
            print!("{}", t.render(out.format.into(), out.decimals));
            Ok(())
        }
        Command::Decompose {
            input,
            method,
            groups,
            measure,
            out,
        } => run_decompose(input, *method, groups, measure, out),
        Command::Check {
            measure,
            all: _,
            seed,
            trials,
            params,
            out,
        } => run_check(*measure, *seed, *trials as usize, params, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            print_json(&json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(1)
        }
    }
}
