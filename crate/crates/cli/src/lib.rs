//! Command-line companion to `sepgraph-core`: file formats, seeded
//! instance generators, the self-check suite, and the `sepgraph` binary's
//! argument handling.
//!
//! Every subcommand reads its inputs, runs one core pipeline, and writes a
//! single JSON document (CSV for `experiment`) to `--out` or stdout.
//! Failures are reported as `{"error": ...}`; exit code 1 marks rejected
//! input, exit code 2 marks a computation that could not produce a result.

use std::fmt;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use sepgraph_core::{
    build_net, disc_sr, fibrate, is_separating, is_slim, min_vertex_cut, modulus_p,
    nearest_net_vertex, net_experiment, pencil_from_duals, pencil_from_flow, position_field,
    riesz_weights, slimify, transfer_set, MeasureGraph, NetError, PathPencil, PointCloud,
    TerminalPair, Weighting,
};

pub mod experiment;
pub mod gen;
pub mod io;
pub mod verify;

use io::{count_json, path_json, ratio_json, set_json, GraphDoc};

/// Failure classes, mirrored in the process exit code: rejected input (1)
/// versus a pipeline that ran and could not produce a result (2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Validation(String),
    Computation(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            CliError::Validation(msg) | CliError::Computation(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Computation(_) => 2,
        }
    }
}

fn computation(e: impl fmt::Display) -> CliError {
    CliError::Computation(e.to_string())
}

/// Cloud errors split by origin: merged terminals and vanished weights
/// happen mid-pipeline, everything else rejects the input.
fn net_err(e: NetError) -> CliError {
    match e {
        NetError::TerminalsMerged { .. } | NetError::DegenerateWeights => computation(e),
        _ => CliError::Validation(e.to_string()),
    }
}

#[derive(Parser)]
#[command(
    name = "sepgraph",
    version,
    about = "Separating sets, cuts, modulus, and net discretization on measure graphs"
)]
pub struct Cli {
    /// Print every input and output format this tool reads or writes.
    #[arg(long)]
    pub schema: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

/// Graph document plus a terminal pair; shared by the graph subcommands.
#[derive(Args)]
pub struct GraphInput {
    /// Graph JSON document.
    #[arg(long)]
    pub graph: PathBuf,
    /// First terminal vertex id.
    #[arg(long)]
    pub v: String,
    /// Second terminal vertex id.
    #[arg(long)]
    pub w: String,
}

/// Point-cloud source plus a terminal pair of point indices.
#[derive(Args)]
pub struct CloudInput {
    /// Point-cloud CSV (columns x1..xd,mass; optional header row).
    #[arg(long)]
    pub cloud: Option<PathBuf>,
    /// Square distance-matrix CSV; requires --masses.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Sidecar CSV with one mass per point, for --matrix.
    #[arg(long)]
    pub masses: Option<PathBuf>,
    /// Index of the first terminal point.
    #[arg(long)]
    pub v: usize,
    /// Index of the second terminal point.
    #[arg(long)]
    pub w: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightingArg {
    /// Keep the cloud's own masses.
    Plain,
    /// Reweight by the two-pole kernel; needs --L.
    Riesz,
}

#[derive(Subcommand)]
pub enum Command {
    /// Width, mass, ratio, and positions of a vertex set.
    Analyze {
        #[command(flatten)]
        input: GraphInput,
        /// Comma-separated vertex ids.
        #[arg(long)]
        set: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum-mass vertex cut, its flow value, and a path pencil.
    Mincut {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition a separating set into width-one levels.
    Fibrate {
        #[command(flatten)]
        input: GraphInput,
        /// Comma-separated vertex ids.
        #[arg(long)]
        set: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test a separating set for slimness and report its slim core.
    Slim {
        #[command(flatten)]
        input: GraphInput,
        /// Comma-separated vertex ids.
        #[arg(long)]
        set: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vertex p-modulus of the terminal path family.
    Modulus {
        #[command(flatten)]
        input: GraphInput,
        /// Exponent; must be at least 1.
        #[arg(long)]
        p: f64,
        /// Relative duality-gap target.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Path pencil from the max flow (p = 1) or the modulus duals (p > 1).
    Pencil {
        #[command(flatten)]
        input: GraphInput,
        /// Exponent; must be at least 1.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Relative duality-gap target for p > 1.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the r-net measure graph of a point cloud.
    Discretize {
        #[command(flatten)]
        input: CloudInput,
        /// Net scale.
        #[arg(long)]
        r: f64,
        /// Cloud set spec: ';'-union of box:/half:/ids: parts.
        #[arg(long)]
        set: String,
        #[arg(long, value_enum, default_value_t = WeightingArg::Plain)]
        weighting: WeightingArg,
        /// Truncation factor for riesz weighting (>= 1).
        #[arg(long = "L")]
        l: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multi-scale discretization series, emitted as CSV.
    Experiment {
        #[command(flatten)]
        input: CloudInput,
        /// Strictly decreasing comma-separated scale schedule.
        #[arg(long, value_delimiter = ',')]
        r: Vec<f64>,
        /// Cloud set spec: ';'-union of box:/half:/ids: parts.
        #[arg(long)]
        set: String,
        #[arg(long, value_enum, default_value_t = WeightingArg::Plain)]
        weighting: WeightingArg,
        /// Truncation factor for riesz weighting (>= 1).
        #[arg(long = "L")]
        l: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check the core identities on seeded random graphs.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Largest instance size; between 2 and 12.
        #[arg(long, default_value_t = 7)]
        max_vertices: usize,
        /// Number of random instances.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub struct RunOutcome {
    /// Text for stdout; empty when the document went to --out.
    pub printed: String,
    pub exit: i32,
}

pub fn run(cli: Cli) -> Result<RunOutcome, CliError> {
    if cli.schema {
        return Ok(RunOutcome {
            printed: SCHEMA.to_string(),
            exit: 0,
        });
    }
    let command = cli.command.ok_or_else(|| {
        CliError::Validation("no subcommand given (see --help or --schema)".into())
    })?;
    let (document, exit, out) = match command {
        Command::Analyze { input, set, out } => {
            let (graph, t) = graph_context(&input)?;
            let set = io::parse_vertex_set(&graph, &set)?;
            (pretty(&analyze_doc(&graph, t, &set)), 0, out)
        }
        Command::Mincut { input, out } => {
            let (graph, t) = graph_context(&input)?;
            (pretty(&mincut_doc(&graph, t)), 0, out)
        }
        Command::Fibrate { input, set, out } => {
            let (graph, t) = graph_context(&input)?;
            let set = io::parse_vertex_set(&graph, &set)?;
            (pretty(&fibrate_doc(&graph, t, &set)?), 0, out)
        }
        Command::Slim { input, set, out } => {
            let (graph, t) = graph_context(&input)?;
            let set = io::parse_vertex_set(&graph, &set)?;
            (pretty(&slim_doc(&graph, t, &set)?), 0, out)
        }
        Command::Modulus { input, p, tol, out } => {
            let (graph, t) = graph_context(&input)?;
            check_exponent(p, tol)?;
            (pretty(&modulus_doc(&graph, t, p, tol)?), 0, out)
        }
        Command::Pencil { input, p, tol, out } => {
            let (graph, t) = graph_context(&input)?;
            check_exponent(p, tol)?;
            (pretty(&pencil_doc(&graph, t, p, tol)?), 0, out)
        }
        Command::Discretize {
            input,
            r,
            set,
            weighting,
            l,
            out,
        } => {
            let weighting = to_weighting(weighting, l)?;
            (pretty(&discretize_doc(&input, r, &set, weighting)?), 0, out)
        }
        Command::Experiment {
            input,
            r,
            set,
            weighting,
            l,
            out,
        } => {
            let weighting = to_weighting(weighting, l)?;
            (experiment_csv_doc(&input, &r, &set, weighting)?, 0, out)
        }
        Command::Verify {
            seed,
            max_vertices,
            samples,
            out,
        } => {
            let cfg = verify::VerifyConfig {
                seed,
                max_vertices,
                samples,
            };
            let (report, ok) = verify::run_verify(&cfg)?;
            (pretty(&report), if ok { 0 } else { 2 }, out)
        }
    };
    match out {
        Some(path) => {
            fs::write(&path, &document)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            Ok(RunOutcome {
                printed: String::new(),
                exit,
            })
        }
        None => Ok(RunOutcome {
            printed: document,
            exit,
        }),
    }
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    text
}

fn graph_context(input: &GraphInput) -> Result<(MeasureGraph, TerminalPair), CliError> {
    let graph = io::load_graph(&input.graph)?;
    let v = io::resolve_vertex(&graph, &input.v)?;
    let w = io::resolve_vertex(&graph, &input.w)?;
    if v == w {
        return Err(CliError::Validation("terminals must be distinct".into()));
    }
    Ok((graph, TerminalPair::new(v, w)))
}

fn check_exponent(p: f64, tol: f64) -> Result<(), CliError> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(CliError::Validation(format!(
            "exponent p must be finite and at least 1, got {p}"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Validation(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}

fn to_weighting(arg: WeightingArg, l: Option<f64>) -> Result<Weighting, CliError> {
    match (arg, l) {
        (WeightingArg::Plain, None) => Ok(Weighting::Plain),
        (WeightingArg::Plain, Some(_)) => Err(CliError::Validation(
            "--L only applies to --weighting riesz".into(),
        )),
        (WeightingArg::Riesz, Some(l)) => Ok(Weighting::Riesz { l }),
        (WeightingArg::Riesz, None) => Err(CliError::Validation(
            "--weighting riesz needs a truncation factor --L".into(),
        )),
    }
}

fn weighting_json(weighting: Weighting) -> Value {
    match weighting {
        Weighting::Plain => json!("plain"),
        Weighting::Riesz { l } => json!({ "riesz": { "L": l } }),
    }
}

fn load_cloud(input: &CloudInput) -> Result<PointCloud, CliError> {
    match (&input.cloud, &input.matrix, &input.masses) {
        (Some(path), None, None) => io::load_cloud_csv(path),
        (None, Some(matrix), Some(masses)) => io::load_matrix_cloud(matrix, masses),
        _ => Err(CliError::Validation(
            "provide --cloud, or --matrix together with --masses".into(),
        )),
    }
}

fn check_poles(cloud: &PointCloud, input: &CloudInput) -> Result<(), CliError> {
    for idx in [input.v, input.w] {
        if idx >= cloud.len() {
            return Err(CliError::Validation(format!(
                "point index {idx} out of range for a {}-point cloud",
                cloud.len()
            )));
        }
    }
    if input.v == input.w {
        return Err(CliError::Validation(
            "terminal points must be distinct".into(),
        ));
    }
    Ok(())
}

fn analyze_doc(graph: &MeasureGraph, t: TerminalPair, set: &sepgraph_core::VertexSet) -> Value {
    let sr = disc_sr(graph, t, set);
    let positions = position_field(graph, t, set);
    let mut by_id = Map::new();
    for z in 0..graph.vertex_count() {
        by_id.insert(graph.label(z).to_owned(), count_json(positions.value(z)));
    }
    json!({
        "width": count_json(sr.width),
        "mass": sr.mass,
        "sr": ratio_json(sr.value),
        "separating": is_separating(graph, t, set),
        "positions": by_id,
    })
}

fn pencil_json(graph: &MeasureGraph, pencil: &PathPencil) -> Value {
    Value::Array(
        pencil
            .paths
            .iter()
            .map(|(path, alpha)| {
                json!({
                    "path": path_json(graph, &path.vertices),
                    "alpha": alpha,
                })
            })
            .collect(),
    )
}

fn mincut_doc(graph: &MeasureGraph, t: TerminalPair) -> Value {
    let cut = min_vertex_cut(graph, t);
    let (pencil, c) = match pencil_from_flow(graph, t) {
        Ok(p) => {
            let c = p.capacity_bound;
            (pencil_json(graph, &p), ratio_json(c))
        }
        Err(_) => (json!([]), ratio_json(f64::INFINITY)),
    };
    json!({
        "cut_value": cut.value,
        "cut": set_json(graph, &cut.cut),
        "flow_value": cut.flow_value,
        "pencil": pencil,
        "C": c,
    })
}

fn fibrate_doc(
    graph: &MeasureGraph,
    t: TerminalPair,
    set: &sepgraph_core::VertexSet,
) -> Result<Value, CliError> {
    let sr = disc_sr(graph, t, set);
    let fib = fibrate(graph, t, set).map_err(computation)?;
    let levels: Vec<Value> = fib.levels.iter().map(|l| set_json(graph, l)).collect();
    Ok(json!({
        "width": fib.width,
        "mass": sr.mass,
        "sr": ratio_json(sr.value),
        "levels": levels,
        "chosen": fib.chosen,
    }))
}

fn slim_doc(
    graph: &MeasureGraph,
    t: TerminalPair,
    set: &sepgraph_core::VertexSet,
) -> Result<Value, CliError> {
    let check = is_slim(graph, t, set).map_err(computation)?;
    let core = slimify(graph, t, set).map_err(computation)?;
    Ok(json!({
        "slim": check.slim,
        "witness": check.witness.map(|z| graph.label(z).to_owned()),
        "slimmed": set_json(graph, &core),
        "slimmed_mass": graph.mass_of(&core),
    }))
}

fn modulus_doc(
    graph: &MeasureGraph,
    t: TerminalPair,
    p: f64,
    tol: f64,
) -> Result<Value, CliError> {
    let result = modulus_p(graph, t, p, tol).map_err(computation)?;
    let mut rho = Map::new();
    for z in 0..graph.vertex_count() {
        rho.insert(graph.label(z).to_owned(), json!(result.rho.value(z)));
    }
    let active: Vec<Value> = result
        .active_paths
        .iter()
        .map(|path| path_json(graph, &path.vertices))
        .collect();
    Ok(json!({
        "p": result.p,
        "modulus": result.value,
        "gap": result.gap,
        "rho": rho,
        "active_paths": active,
    }))
}

fn pencil_doc(
    graph: &MeasureGraph,
    t: TerminalPair,
    p: f64,
    tol: f64,
) -> Result<Value, CliError> {
    let pencil = if p == 1.0 {
        pencil_from_flow(graph, t).map_err(computation)?
    } else {
        let result = modulus_p(graph, t, p, tol).map_err(computation)?;
        pencil_from_duals(graph, &result).map_err(computation)?
    };
    Ok(json!({
        "p": p,
        "pencil": pencil_json(graph, &pencil),
        "total_weight": pencil.total_weight,
        "C": ratio_json(pencil.capacity_bound),
    }))
}

/// The experiment pipeline's working measure: plain masses, or the
/// floored two-pole reweighting.
fn reweighted(
    cloud: &PointCloud,
    x: usize,
    y: usize,
    weighting: Weighting,
) -> Result<PointCloud, CliError> {
    match weighting {
        Weighting::Plain => Ok(cloud.clone()),
        Weighting::Riesz { l } => {
            let rw = riesz_weights(cloud, x, y, l).map_err(net_err)?;
            let total = rw.total_mass();
            if total.is_nan() || total <= 0.0 {
                return Err(net_err(NetError::DegenerateWeights));
            }
            let floor = total * 1e-15 / cloud.len() as f64;
            cloud
                .with_masses(rw.weights.iter().map(|w| w.max(floor)).collect())
                .map_err(net_err)
        }
    }
}

fn discretize_doc(
    input: &CloudInput,
    r: f64,
    set_spec: &str,
    weighting: Weighting,
) -> Result<Value, CliError> {
    let cloud = load_cloud(input)?;
    check_poles(&cloud, input)?;
    let indicator = io::parse_cloud_set(&cloud, set_spec)?;
    let working = reweighted(&cloud, input.v, input.w, weighting)?;
    let net = build_net(&working, r).map_err(net_err)?;
    let tx = nearest_net_vertex(&working, &net, input.v);
    let ty = nearest_net_vertex(&working, &net, input.w);
    if tx == ty {
        return Err(net_err(NetError::TerminalsMerged { r }));
    }
    let set = transfer_set(&working, &net, &indicator);
    Ok(json!({
        "r": r,
        "net_size": net.graph.vertex_count(),
        "net_indices": net.net_indices,
        "terminals": [net.graph.label(tx), net.graph.label(ty)],
        "set": set_json(&net.graph, &set),
        "weighting": weighting_json(weighting),
        "graph": GraphDoc::from_graph(&net.graph),
    }))
}

fn experiment_csv_doc(
    input: &CloudInput,
    schedule: &[f64],
    set_spec: &str,
    weighting: Weighting,
) -> Result<String, CliError> {
    let cloud = load_cloud(input)?;
    check_poles(&cloud, input)?;
    let indicator = io::parse_cloud_set(&cloud, set_spec)?;
    let rows = net_experiment(&cloud, input.v, input.w, &indicator, schedule, weighting)
        .map_err(net_err)?;
    let metadata = json!({
        "command": "experiment",
        "points": cloud.len(),
        "x": input.v,
        "y": input.w,
        "set": set_spec,
        "weighting": weighting_json(weighting),
        "schedule": schedule,
    });
    Ok(experiment::experiment_csv(&metadata, &rows))
}

pub const SCHEMA: &str = r##"sepgraph formats

Graph document (JSON), read by --graph:
  {"vertices":[{"id":<string>,"mu":<positive float>},...],
   "edges":[[<id>,<id>],...]}
  Ids may be strings or integers; integers are normalized to strings.
  Edges are undirected; self-loops and duplicates are rejected.

Point cloud (CSV), read by --cloud:
  columns x1,...,xd,mass; one row per point; optional header row.
Distance matrix (CSV), read by --matrix with --masses:
  square matrix of distances; sidecar CSV holds one mass per row.

Vertex set (--set on graph commands): comma-separated vertex ids.
Cloud set (--set on cloud commands): ';'-union of
  box:lo1,hi1,...,lod,hid   axis-aligned box
  half:a1,...,ad,c          half-plane a.x <= c
  ids:i,j,...               explicit point indices

analyze  -> {"width":<int|"inf">,"mass":<float>,"sr":<float|"inf"|0>,
             "separating":<bool>,"positions":{<id>:<int|"inf">,...}}
fibrate  -> {"width":<int>,"mass":<float>,"sr":<float>,
             "levels":[[<id>,...],...],"chosen":<int>}
slim     -> {"slim":<bool>,"witness":<id|null>,
             "slimmed":[<id>,...],"slimmed_mass":<float>}
mincut   -> {"cut_value":<float>,"cut":[<id>,...],"flow_value":<float>,
             "pencil":[{"path":[<id>,...],"alpha":<float>},...],
             "C":<float|"inf">}
modulus  -> {"p":<float>,"modulus":<float>,"gap":<float>,
             "rho":{<id>:<float>,...},"active_paths":[[<id>,...],...]}
pencil   -> {"p":<float>,"pencil":[{"path":[...],"alpha":<float>},...],
             "total_weight":<float>,"C":<float|"inf">}
discretize -> {"r":<float>,"net_size":<int>,"net_indices":[<int>,...],
             "terminals":[<id>,<id>],"set":[<id>,...],
             "weighting":<"plain"|{"riesz":{"L":<float>}}>,
             "graph":<graph document>}
experiment -> CSV: line 1 is "# " + JSON metadata,
             line 2 is the header r,width,sr_over_r,cut_over_r,
             then one row per scheduled scale (width is an int or "inf").
verify   -> {"seed":<int>,"max_vertices":<int>,"samples":<int>,
             "checks":[{"name":<string>,"instances":<int>,
                        "failures":<int>},...],
             "failures":<int>,
             "counterexample":<null|{"check":<string>,
               "graph":<graph document>,"v":<id>,"w":<id>,
               "set":[<id>,...]|null,"detail":<string>}>}

Errors: {"error":<message>} on stdout; exit 1 for rejected input,
exit 2 when a computation cannot produce a result (no path between the
terminals, a non-separating set, merged net terminals, solver
non-convergence, or an oracle size cap). verify exits 2 when any check
finds a counterexample.
"##;

#[cfg(test)]
mod tests {
    use super::*;
    use sepgraph_core::VertexSet;

    fn chain() -> MeasureGraph {
        MeasureGraph::from_labeled_edges(
            vec![
                ("v".into(), 1.0),
                ("a".into(), 2.0),
                ("w".into(), 1.0),
            ],
            &[("v".into(), "a".into()), ("a".into(), "w".into())],
        )
        .unwrap()
    }

    #[test]
    fn analyze_reports_width_mass_ratio() {
        let graph = chain();
        let t = TerminalPair::new(0, 2);
        let set = VertexSet::from_indices(3, [1]);
        let doc = analyze_doc(&graph, t, &set);
        assert_eq!(doc["width"], json!(1));
        assert_eq!(doc["mass"], json!(2.0));
        assert_eq!(doc["sr"], json!(2.0));
        assert_eq!(doc["separating"], json!(true));
        assert_eq!(doc["positions"]["v"], json!(0));
        assert_eq!(doc["positions"]["a"], json!(1));
    }

    #[test]
    fn weighting_flag_combinations() {
        assert_eq!(to_weighting(WeightingArg::Plain, None), Ok(Weighting::Plain));
        assert_eq!(
            to_weighting(WeightingArg::Riesz, Some(2.0)),
            Ok(Weighting::Riesz { l: 2.0 })
        );
        assert!(to_weighting(WeightingArg::Plain, Some(1.0)).is_err());
        assert!(to_weighting(WeightingArg::Riesz, None).is_err());
    }

    #[test]
    fn exponent_validation() {
        assert!(check_exponent(1.0, 1e-9).is_ok());
        assert!(check_exponent(0.5, 1e-9).is_err());
        assert!(check_exponent(f64::NAN, 1e-9).is_err());
        assert!(check_exponent(2.0, 0.0).is_err());
    }

    #[test]
    fn mincut_doc_contains_pencil_and_capacity() {
        let graph = chain();
        let doc = mincut_doc(&graph, TerminalPair::new(0, 2));
        assert_eq!(doc["cut_value"], json!(1.0));
        assert_eq!(doc["cut"], json!(["v"]));
        assert_eq!(doc["C"], json!(1.0));
        assert_eq!(doc["pencil"][0]["path"], json!(["v", "a", "w"]));
        assert_eq!(doc["pencil"][0]["alpha"], json!(1.0));
    }
}
