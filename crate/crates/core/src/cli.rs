//! Command-line front end. Every command prints one versioned report.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::anyon_model::{validate_model, AnyonModelSpec, ModelKind};
use crate::braiding::{self, BraidRepresentation, BraidWord};
use crate::error::{Error, Result};
use crate::fusion_space::{standard_basis, FusionBasis, QubitKet, Register, StateVector};
use crate::measurement::{self, AncillaPrep, Enumeration, PovmEffect};
use crate::relational_clock::{self, ClockSchedule, GateClass, GlobalState, EVOLUTION_TOL};
use crate::report;

#[derive(Debug, Parser)]
#[command(name = "anyon-chronos", version, about = "Page-Wootters clocks built from SU(2)_2 anyons")]
pub struct Cli {
    /// Anyon model: su2_2 or ising.
    #[arg(long, global = true, default_value = "su2_2")]
    pub model: ModelKind,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Fidelity / unitarity tolerance used for pass flags in reports.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Resource {
    Singlet,
    Braided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Prep {
    Zero,
    Stabilizer,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect the anyon model.
    #[command(subcommand)]
    Model(ModelCommand),
    /// Braid generators and their group.
    #[command(subcommand)]
    Braid(BraidCommand),
    /// Fuse a pair of anyons and report both charge outcomes.
    Fuse(FuseArgs),
    /// Clock POVMs from braid circuits.
    #[command(subcommand)]
    Povm(PovmCommand),
    /// Page–Wootters conditioning.
    #[command(subcommand)]
    Paw(PawCommand),
    /// Clock time resolution for a gate class.
    Resolution(ResolutionArgs),
}

#[derive(Debug, Subcommand)]
pub enum ModelCommand {
    /// Labels, fusion rules, F and R, plus consistency checks.
    Show,
}

#[derive(Debug, Subcommand)]
pub enum BraidCommand {
    /// Unitary of a braid word such as "s3 s4 s2" (upper case = inverse).
    Eval {
        #[arg(long, default_value_t = 3)]
        anyons: usize,
        #[arg(long)]
        word: String,
    },
    /// Order of the group generated by the braid generators, modulo phase.
    Closure {
        #[arg(long, default_value_t = 3)]
        anyons: usize,
        #[arg(long, default_value_t = braiding::DEFAULT_MAX_GROUP)]
        max_size: usize,
    },
}

#[derive(Debug, Args)]
pub struct FuseArgs {
    /// 3 (one qubit) or 6 (clock and system).
    #[arg(long, default_value_t = 3)]
    pub anyons: usize,
    /// One-qubit state: 0, 1, +, -, +i, -i.
    #[arg(long, allow_hyphen_values = true)]
    pub state: Option<QubitKet>,
    /// Shared clock/system state for six anyons.
    #[arg(long, value_enum)]
    pub resource: Option<Resource>,
    /// Anyon pair "i,j", 1-based.
    #[arg(long, value_parser = parse_pair)]
    pub pair: (usize, usize),
}

#[derive(Debug, Subcommand)]
pub enum PovmCommand {
    /// Distinct clock effects reachable with braid circuits on m ancillas.
    Enumerate {
        #[arg(long)]
        ancilla: usize,
        #[arg(long, value_enum, default_value_t = Prep::Zero)]
        ancilla_prep: Prep,
    },
}

#[derive(Debug, Subcommand)]
pub enum PawCommand {
    /// Condition a shared state on every tick of a clock schedule.
    Run {
        #[arg(long, value_enum)]
        resource: Resource,
        /// Equatorial schedule with N ticks.
        #[arg(long, required_unless_present = "povm_file")]
        ticks: Option<usize>,
        /// JSON list of effects (or an object with an "effects" list).
        #[arg(long, conflicts_with = "ticks")]
        povm_file: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct ResolutionArgs {
    #[arg(long)]
    pub gates: GateClass,
    #[arg(long)]
    pub ancilla: usize,
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected i,j but got '{s}'"))?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("bad anyon index '{x}': {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn basis_for(model: &AnyonModelSpec, anyons: usize) -> Result<FusionBasis> {
    let total = match anyons {
        3 => "sigma",
        6 => "vac",
        n => return Err(Error::UnsupportedAnyonCount(n)),
    };
    standard_basis(model, anyons, model.label_id(total)?)
}

fn resource_state(model: &AnyonModelSpec, resource: Resource) -> Result<GlobalState> {
    match resource {
        Resource::Singlet => Ok(GlobalState::bell_singlet()),
        Resource::Braided => GlobalState::bell_via_braiding(model),
    }
}

fn resource_name(resource: Resource) -> &'static str {
    match resource {
        Resource::Singlet => "singlet",
        Resource::Braided => "braided",
    }
}

fn model_show(model: &AnyonModelSpec) -> Map<String, Value> {
    let checks = validate_model(model);
    let mut m = Map::new();
    m.insert("model".into(), model.to_json());
    m.insert("valid".into(), Value::from(checks.all_passed()));
    m.insert("checks".into(), checks.to_json());
    m
}

fn braid_eval(model: &AnyonModelSpec, anyons: usize, word: &str, tol: f64) -> Result<Map<String, Value>> {
    let basis = basis_for(model, anyons)?;
    let word = BraidWord::parse(word, anyons)?;
    let gate = BraidRepresentation::new(model, &basis)?.evaluate(&word)?;
    let err = gate.unitarity_error();
    let mut m = Map::new();
    m.insert("anyons".into(), Value::from(anyons));
    m.insert("word".into(), Value::from(word.to_string()));
    m.insert("basis".into(), basis.to_json());
    m.insert("matrix".into(), report::matrix(gate.matrix()));
    m.insert("unitarity_error".into(), report::num(err));
    m.insert("unitary".into(), Value::from(err <= tol));
    Ok(m)
}

fn braid_closure(model: &AnyonModelSpec, anyons: usize, max_size: usize) -> Result<Map<String, Value>> {
    let basis = basis_for(model, anyons)?;
    let rep = BraidRepresentation::new(model, &basis)?;
    let group = braiding::group_closure(rep.generators(), max_size)?;
    let mut m = Map::new();
    m.insert("anyons".into(), Value::from(anyons));
    m.insert("dim".into(), Value::from(group.dim()));
    m.insert("group_order".into(), Value::from(group.order()));
    Ok(m)
}

fn fuse(model: &AnyonModelSpec, args: &FuseArgs) -> Result<Map<String, Value>> {
    let state = match (args.anyons, args.state, args.resource) {
        (3, Some(ket), None) => StateVector::new(Register::Fusion(basis_for(model, 3)?), ket.vector())?,
        (6, None, Some(r)) => resource_state(model, r)?.state().clone(),
        (3, _, _) => return Err(Error::Usage("three anyons take --state only".into())),
        (6, _, _) => return Err(Error::Usage("six anyons take --resource only".into())),
        (n, _, _) => return Err(Error::UnsupportedAnyonCount(n)),
    };
    let (triple, pauli) = measurement::pair_basis(state.register(), args.pair)?;
    let outcomes = measurement::fuse_pair(model, &state, args.pair)?;
    let mut m = Map::new();
    m.insert("anyons".into(), Value::from(args.anyons));
    m.insert("pair".into(), Value::Array(vec![Value::from(args.pair.0), Value::from(args.pair.1)]));
    m.insert("triple".into(), Value::from(format!("{triple:?}").to_lowercase()));
    m.insert("pauli".into(), Value::from(format!("{pauli:?}")));
    m.insert(
        "outcomes".into(),
        Value::Array(
            outcomes
                .iter()
                .map(|o| {
                    let mut e = Map::new();
                    e.insert("charge".into(), Value::from(o.charge_name.clone()));
                    e.insert("probability".into(), report::num(o.probability));
                    e.insert(
                        "post_state".into(),
                        o.post_state.as_ref().map_or(Value::Null, |s| report::vector(s.amplitudes())),
                    );
                    Value::Object(e)
                })
                .collect(),
        ),
    );
    Ok(m)
}

fn povm_enumerate(model: &AnyonModelSpec, ancilla: usize, prep: Prep) -> Result<Map<String, Value>> {
    let prep = match prep {
        Prep::Zero => AncillaPrep::Zero,
        Prep::Stabilizer => AncillaPrep::Stabilizer,
    };
    let catalog = measurement::enumerate_clifford_povms_with(model, ancilla, prep, Enumeration::IsometryOrbit)?;
    let mut m = match catalog.to_json() {
        Value::Object(m) => m,
        _ => unreachable!("catalog serialises to an object"),
    };
    m.insert("ancilla_prep".into(), Value::from(format!("{prep:?}").to_lowercase()));
    Ok(m)
}

fn read_povm_file(path: &PathBuf) -> Result<Vec<PovmEffect>> {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let list = match &v {
        Value::Array(a) => a,
        Value::Object(o) => o
            .get("effects")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidPovm("file has no \"effects\" list".into()))?,
        _ => return Err(Error::InvalidPovm("expected a list of effects".into())),
    };
    list.iter().map(PovmEffect::from_json).collect()
}

fn paw_run(
    model: &AnyonModelSpec,
    resource: Resource,
    ticks: Option<usize>,
    povm_file: Option<&PathBuf>,
    tol: f64,
) -> Result<Map<String, Value>> {
    let schedule = match (ticks, povm_file) {
        (_, Some(path)) => ClockSchedule::from_effects(read_povm_file(path)?)?,
        (Some(n), None) => ClockSchedule::equatorial(n)?,
        (None, None) => return Err(Error::Usage("either --ticks or --povm-file is required".into())),
    };
    let global = resource_state(model, resource)?;
    let run = relational_clock::run_schedule(&global, &schedule);
    let mut m = match run.to_json() {
        Value::Object(m) => m,
        _ => unreachable!("evolution report serialises to an object"),
    };
    m.insert("resource".into(), Value::from(resource_name(resource)));
    m.insert("global_state".into(), report::vector(global.state().amplitudes()));
    m.insert(
        "schmidt_coefficients".into(),
        Value::Array(global.schmidt_coefficients().iter().map(|x| report::num(*x)).collect()),
    );
    let ok = run.min_fidelity().is_some_and(|f| 1.0 - f <= tol);
    m.insert("emergent_evolution".into(), Value::from(ok));
    if resource == Resource::Braided {
        let l = relational_clock::local_equivalence(&GlobalState::bell_singlet(), &global);
        m.insert("local_map_from_singlet".into(), l.map_or(Value::Null, |g| report::matrix(g.matrix())));
    }
    Ok(m)
}

fn resolution(model: &AnyonModelSpec, args: &ResolutionArgs) -> Result<Map<String, Value>> {
    let r = relational_clock::time_resolution(model, args.gates, args.ancilla)?;
    match r.to_json() {
        Value::Object(m) => Ok(m),
        _ => unreachable!("resolution serialises to an object"),
    }
}

/// Runs a parsed command and returns the report envelope.
pub fn execute(cli: &Cli) -> Result<Value> {
    let model = cli.model.spec();
    let (kind, mut body) = match &cli.command {
        Command::Model(ModelCommand::Show) => ("model_show", model_show(&model)),
        Command::Braid(BraidCommand::Eval { anyons, word }) => {
            ("braid_eval", braid_eval(&model, *anyons, word, cli.tol.unwrap_or(braiding::GATE_TOL))?)
        }
        Command::Braid(BraidCommand::Closure { anyons, max_size }) => {
            ("braid_closure", braid_closure(&model, *anyons, *max_size)?)
        }
        Command::Fuse(args) => ("fuse", fuse(&model, args)?),
        Command::Povm(PovmCommand::Enumerate { ancilla, ancilla_prep }) => {
            ("povm_enumerate", povm_enumerate(&model, *ancilla, *ancilla_prep)?)
        }
        Command::Paw(PawCommand::Run { resource, ticks, povm_file }) => (
            "paw_run",
            paw_run(&model, *resource, *ticks, povm_file.as_ref(), cli.tol.unwrap_or(EVOLUTION_TOL))?,
        ),
        Command::Resolution(args) => ("resolution", resolution(&model, args)?),
    };
    body.insert("model_name".into(), Value::from(cli.model.to_string()));
    Ok(report::envelope(kind, body))
}

fn render(cli: &Cli, report: &Value) -> Result<String> {
    match cli.format {
        Format::Json => report::to_json_string(report),
        Format::Csv => report::to_csv_string(report),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code:
/// 0 on success, 1 on a domain error, 2 on a usage error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let outcome = execute(&cli).and_then(|r| render(&cli, &r)).and_then(|t| emit(&cli, &t));
    match outcome {
        Ok(()) => 0,
        Err(e @ Error::Usage(_)) => {
            eprintln!("error: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
