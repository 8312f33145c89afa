//! Command-line front end. Every command reads JSON and writes JSON or DOT.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cobordism::{CobordismCycle, CycleData};
use crate::configuration::{EmbeddedConfiguration, EmbeddedData};
use crate::dual_graph::{self, DualGraph, EventLog, WeightedConfiguration};
use crate::enumeration::build_subcomplex;
use crate::homology::HomologyClass;
use crate::multicurve::{CurveKey, MulticurveData, OrientedMulticurve, ParallelFamily, Region, Side};
use crate::rational;
use crate::surface::{standard_gluings, CombinatorialSurface, GluingData};
use crate::surgery::{StepRecord, SurgeryState, SurgeryTree};

#[derive(Debug, Parser)]
#[command(name = "cyclecx", version, about = "Cycles of cycles on triangulated surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a cobordism cycle (--config) or a multicurve (--curves)
    Validate(Common),
    /// Sink/source elimination on a weighted configuration
    Reduce(Common),
    /// Innermost-arc surgery of a configuration toward the star of --base
    Surger(Common),
    /// Bounded piece of the complex in one homology class
    Enumerate(Common),
    /// Refine a cobordism cycle to a top-dimensional one
    Extend(Common),
    /// Re-emit the surface, a multicurve or a configuration
    Export(Common),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Dot,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Surface gluing JSON
    #[arg(long)]
    pub surface: Option<PathBuf>,
    /// Use the standard one-vertex surface of this genus instead of --surface
    #[arg(long, conflicts_with = "surface")]
    pub genus: Option<usize>,
    /// Multicurve JSON: {"weights": [...], "orientations": [...]}
    #[arg(long)]
    pub curves: Option<PathBuf>,
    /// Cobordism cycle or weighted configuration JSON
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Base curve JSON, same format as --curves
    #[arg(long)]
    pub base: Option<PathBuf>,
    /// Homology class, comma separated
    #[arg(long)]
    pub class: Option<String>,
    /// Maximum total normal weight
    #[arg(long)]
    pub bound: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Output file (stdout if absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub name: String,
    pub message: String,
}

impl CliError {
    fn new(name: &str, message: impl Into<String>) -> Self {
        CliError { name: name.into(), message: message.into() }
    }

    /// 2 for unreadable or ill-formed input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self.name.as_str() {
            "ParseError" | "SchemaError" | "IoError" | "UsageError" => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.name, "message": self.message }).to_string()
    }
}

macro_rules! module_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::new(e.name(), e.to_string())
            }
        }
    )*};
}

module_error!(
    crate::error::SurfaceError,
    crate::error::CurveError,
    crate::error::CobordismError,
    crate::error::ReductionError,
    crate::error::SurgeryError,
    crate::error::EnumerationError
);

fn json_error(what: &Path, e: serde_json::Error) -> CliError {
    use serde_json::error::Category;
    let name = match e.classify() {
        Category::Io => "IoError",
        Category::Syntax | Category::Eof => "ParseError",
        Category::Data => "SchemaError",
    };
    CliError::new(name, format!("{}: {e}", what.display()))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::new("IoError", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| json_error(path, e))
}

fn need<'a, T>(v: &'a Option<T>, flag: &str, cmd: &str) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| CliError::new("UsageError", format!("{cmd} needs --{flag}")))
}

fn load_surface(a: &Common) -> Result<Arc<CombinatorialSurface>, CliError> {
    let data: GluingData = match (&a.surface, a.genus) {
        (Some(p), _) => read_json(p)?,
        (None, Some(g)) if g >= 1 => standard_gluings(g),
        (None, Some(_)) => return Err(CliError::new("UsageError", "--genus must be at least 1")),
        (None, None) => return Err(CliError::new("UsageError", "--surface or --genus is required")),
    };
    Ok(Arc::new(CombinatorialSurface::from_gluings(&data)?))
}

fn load_curves(s: &Arc<CombinatorialSurface>, path: &Path) -> Result<OrientedMulticurve, CliError> {
    let d: MulticurveData = read_json(path)?;
    Ok(OrientedMulticurve::from_data(s.clone(), &d)?)
}

fn load_cycle(path: &Path) -> Result<CobordismCycle, CliError> {
    let d: CycleData = read_json(path)?;
    Ok(CobordismCycle::new(d.levels)?)
}

/// Either an embedded configuration or an abstract weighted one.
enum AnyConfig {
    Embedded(EmbeddedConfiguration),
    Abstract(WeightedConfiguration),
}

fn load_config(s: &Arc<CombinatorialSurface>, path: &Path) -> Result<AnyConfig, CliError> {
    let v: serde_json::Value = read_json(path)?;
    if v.get("curves").is_some() {
        let d: EmbeddedData = serde_json::from_value(v).map_err(|e| json_error(path, e))?;
        Ok(AnyConfig::Embedded(EmbeddedConfiguration::from_data(s.clone(), &d)?))
    } else {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(flatten)]
            cycle: CycleData,
            #[serde(with = "rational::vec")]
            weights: Vec<rational::Rational>,
        }
        let r: Raw = serde_json::from_value(v).map_err(|e| json_error(path, e))?;
        let cycle = CobordismCycle::new(r.cycle.levels)?;
        Ok(AnyConfig::Abstract(WeightedConfiguration::new(cycle, r.weights)?))
    }
}

fn parse_class(s: &str) -> Result<HomologyClass, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map(HomologyClass)
        .map_err(|e| CliError::new("SchemaError", format!("bad class {s:?}: {e}")))
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn json_only(a: &Common, cmd: &str) -> Result<(), CliError> {
    if a.format == Format::Dot {
        return Err(CliError::new("UsageError", format!("{cmd} has no DOT output")));
    }
    Ok(())
}

#[derive(Serialize)]
struct CurveReport {
    weights: Vec<usize>,
    orientations: Vec<i8>,
    components: usize,
    class: HomologyClass,
    reduced: bool,
    families: Vec<ParallelFamily>,
    regions: Vec<Region>,
    key: CurveKey,
}

fn curve_report(c: &OrientedMulticurve) -> CurveReport {
    CurveReport {
        weights: c.weights(),
        orientations: c.orientations().to_vec(),
        components: c.num_components(),
        class: c.homology_class(),
        reduced: c.is_reduced(),
        families: c.families(),
        regions: c.complementary_regions(),
        key: c.canonical_key(),
    }
}

/// Regions as nodes, each component an arrow from its negative to its
/// positive side.
fn regions_dot(c: &OrientedMulticurve) -> String {
    let regions = c.complementary_regions();
    let mut s = String::from("digraph regions {\n");
    let mut ends = vec![(usize::MAX, usize::MAX); c.num_components()];
    for r in &regions {
        let _ = writeln!(s, "  r{} [label=\"r{} chi={} g={}\"];", r.id, r.id, r.euler_char, r.genus);
        for &(k, side) in &r.boundary {
            match side {
                Side::Positive => ends[k].1 = r.id,
                Side::Negative => ends[k].0 = r.id,
            }
        }
    }
    for (k, (t, h)) in ends.iter().enumerate() {
        let _ = writeln!(s, "  r{t} -> r{h} [label=\"{k}\"];");
    }
    s.push_str("}\n");
    s
}

fn surface_dot(s: &CombinatorialSurface) -> String {
    let mut out = String::from("graph surface {\n");
    for t in 0..s.num_triangles() {
        let _ = writeln!(out, "  t{t};");
    }
    for e in 0..s.num_edges() {
        let [a, b] = s.edge_slots(e);
        let _ = writeln!(out, "  t{} -- t{} [label=\"{e}\"];", a.0, b.0);
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct ReduceOutput<T: Serialize> {
    config: T,
    log: EventLog,
    dual_graph: DualGraph,
}

fn validate(a: &Common) -> Result<String, CliError> {
    let s = load_surface(a)?;
    json_only(a, "validate")?;
    if let Some(p) = &a.curves {
        return Ok(pretty(&curve_report(&load_curves(&s, p)?)));
    }
    let cycle = load_cycle(need(&a.config, "config", "validate")?)?;
    Ok(pretty(&cycle.validate(s.genus() as i64)?))
}

fn reduce(a: &Common) -> Result<String, CliError> {
    let s = load_surface(a)?;
    let (out, log) = match load_config(&s, need(&a.config, "config", "reduce")?)? {
        AnyConfig::Embedded(c) => {
            let (r, log) = c.reduce()?;
            (serde_json::to_value(r.to_data()).expect("serializable"), (r.to_weighted(), log))
        }
        AnyConfig::Abstract(c) => {
            let (r, log) = dual_graph::reduce(&c)?;
            (serde_json::to_value(&r).expect("serializable"), (r, log))
        }
    };
    let (weighted, log) = log;
    let g = DualGraph::build(&weighted);
    Ok(match a.format {
        Format::Json => pretty(&ReduceOutput { config: out, log, dual_graph: g }),
        Format::Dot => g.to_dot(),
    })
}

fn surger(a: &Common) -> Result<String, CliError> {
    let s = load_surface(a)?;
    let config = match load_config(&s, need(&a.config, "config", "surger")?)? {
        AnyConfig::Embedded(c) => c,
        AnyConfig::Abstract(_) => {
            return Err(CliError::new("SchemaError", "surger needs an embedded configuration with curves"))
        }
    };
    let base = load_curves(&s, need(&a.base, "base", "surger")?)?;
    let state = SurgeryState::new(config, base)?;
    match a.format {
        Format::Json => Ok(pretty(&state.retract_to_star()?)),
        Format::Dot => {
            let mut trees: Vec<SurgeryTree> = Vec::new();
            let mut st = state;
            while st.num_crossings() > 0 {
                trees.push(st.build_tree()?);
                let (next, _): (SurgeryState, StepRecord) = st.surger_step()?;
                st = next;
            }
            Ok(trees.iter().map(|t| t.to_dot()).collect())
        }
    }
}

fn enumerate(a: &Common) -> Result<String, CliError> {
    let s = load_surface(a)?;
    let x = parse_class(need(&a.class, "class", "enumerate")?)?;
    let b = *need(&a.bound, "bound", "enumerate")?;
    let snap = build_subcomplex(&s, &x, b)?;
    Ok(match a.format {
        Format::Json => snap.to_json() + "\n",
        Format::Dot => snap.to_dot(),
    })
}

fn extend(a: &Common) -> Result<String, CliError> {
    let s = load_surface(a)?;
    json_only(a, "extend")?;
    let cycle = load_cycle(need(&a.config, "config", "extend")?)?;
    Ok(pretty(&cycle.extend_to_top(s.genus() as i64)?))
}

fn export(a: &Common) -> Result<String, CliError> {
    let s = load_surface(a)?;
    if let Some(p) = &a.curves {
        let c = load_curves(&s, p)?;
        return Ok(match a.format {
            Format::Json => pretty(&curve_report(&c)),
            Format::Dot => regions_dot(&c),
        });
    }
    if let Some(p) = &a.config {
        let w = match load_config(&s, p)? {
            AnyConfig::Embedded(c) => c.to_weighted(),
            AnyConfig::Abstract(c) => c,
        };
        return Ok(match a.format {
            Format::Json => pretty(&w),
            Format::Dot => DualGraph::build(&w).to_dot(),
        });
    }
    Ok(match a.format {
        Format::Json => pretty(&s.to_gluings()),
        Format::Dot => surface_dot(&s),
    })
}

/// Runs one command and returns the text it produces.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Validate(a) => validate(a),
        Command::Reduce(a) => reduce(a),
        Command::Surger(a) => surger(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Extend(a) => extend(a),
        Command::Export(a) => export(a),
    }
}

fn common(cli: &Cli) -> &Common {
    match &cli.command {
        Command::Validate(a)
        | Command::Reduce(a)
        | Command::Surger(a)
        | Command::Enumerate(a)
        | Command::Extend(a)
        | Command::Export(a) => a,
    }
}

/// Executes and writes the output; errors go to stdout as JSON and to
/// stderr as text. Returns the exit status.
pub fn run(cli: &Cli) -> i32 {
    let res = execute(cli).and_then(|text| match &common(cli).out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::new("IoError", format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match res {
        Ok(()) => 0,
        Err(e) => {
            println!("{}", e.to_json());
            eprintln!("error: {}: {}", e.name, e.message);
            e.exit_code()
        }
    }
}
