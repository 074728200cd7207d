//! The `nbc` command line: instance parsing, dispatch and JSON reports.
//!
//! Reports are JSON objects with sorted keys. Every report carries
//! `command`, `params` and `input_digest` (SHA-256 of the canonical
//! instance and parameters). Exact rationals are `"p/q"` strings, big
//! integers are decimal strings and floats keep 12 significant digits.
//!
//! Exit codes: 0 success, 1 malformed input, 2 precondition failure (or a
//! failed verification suite), 3 size-guard rejection.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::chain::{down_up_matrix, local_spectral_profile, local_to_global_bound, spectral_gap, FacetComplex};
use crate::error::{Error, Guard, Result};
use crate::gadgets::{
    build_hardcore_reduction, build_link_gadget, build_long_edge_instance, build_opt_reduction, gap_certificate,
    max_weight_nbc_base, partition_link_facets, reductions::default_target_size, verify_counting_sandwich,
    verify_hardcore_identities, SandwichMode, WeightVector,
};
use crate::graph::{
    build_named_graph, chromatic_polynomial, count_acyclic_orientations, count_g_parking_functions,
    count_independent_sets_by_size, hardcore_partition, max_weight_independent_set, MultiGraph, NamedGraph,
};
use crate::matroid::{Matroid, MatroidOracle};
use crate::nbc::{is_log_concave, ElementOrder, NbcComplex};
use crate::rational::{self, Rational};
use crate::verify::{run_suite, SuiteReport, DEFAULT_SEED, SUITES};

#[derive(Debug, Parser)]
#[command(name = "nbc", version, about = "Broken-circuit complexes, walks and gadgets")]
pub struct Cli {
    /// Override size guards.
    #[arg(long, global = true)]
    pub force_size: bool,
    /// Seed for the randomized verification suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// JSON instance file.
    #[arg(long, conflicts_with = "graph")]
    pub input: Option<PathBuf>,
    /// Inline generator: complete:N, bipartite:A:B, cycle:N, path:N,
    /// edgeless:N, theta:N or copies:R:<spec>.
    #[arg(long)]
    pub graph: Option<String>,
    /// Edge ranking, smallest first (overrides the file's order).
    #[arg(long, value_delimiter = ',')]
    pub order: Option<Vec<usize>>,
    /// Truncation rank (overrides the file's value).
    #[arg(long)]
    pub truncate: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Face numbers of the NBC complex.
    FaceNumbers(InstanceArgs),
    /// All NBC bases.
    NbcBases(InstanceArgs),
    /// Down-up walk spectral gap and the local-to-global bound.
    WalkGap {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Use all bases instead of NBC bases.
        #[arg(long)]
        bases: bool,
    },
    /// Local-walk second eigenvalues by face size.
    LocalProfile {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        bases: bool,
    },
    /// Facets of the link of an NBC face.
    Link {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_delimiter = ',', default_value = "")]
        tau: Vec<String>,
    },
    /// Hardness gadget constructions.
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Reductions and their checked sandwiches.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Reference graph counts.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Run a verification suite, or `all`.
    Verify { suite: String },
}

#[derive(Debug, Subcommand)]
pub enum GadgetCommand {
    /// Theta graph with a long NBC polytope edge.
    LongEdge {
        #[arg(long)]
        n: usize,
    },
    /// Apex gadget over K_{n,n} (`--n`) or a given base graph.
    Link {
        #[arg(long, conflicts_with_all = ["input", "graph"])]
        n: Option<usize>,
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        l: usize,
        /// Target size; defaults to n with `--n`, else floor(2|V|/19).
        #[arg(long)]
        m: Option<usize>,
        /// Add the link partition and the gap certificate.
        #[arg(long)]
        report: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum ReduceCommand {
    /// Max-weight independent set vs max-weight NBC base; weights are per vertex.
    Opt(InstanceArgs),
    /// Link-facet count sandwich.
    Count {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
    },
    /// External-field partition function sandwich.
    Field {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
    },
    /// Padding with copies of K8 and its counting identities.
    Hardcore {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Chromatic polynomial coefficients.
    Chromatic(InstanceArgs),
    /// Acyclic orientation count.
    Acyclic(InstanceArgs),
    /// Independent sets by size.
    Indep(InstanceArgs),
    /// G-parking functions next to the NBC base count.
    Parking {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 0)]
        root: usize,
    },
    /// Hardcore partition function at a rational fugacity.
    Hardcore {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        fugacity: String,
    },
}

/// On-disk instance schema.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncate: Option<usize>,
    #[serde(default, alias = "fugacities", skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("instance: {e}")))
    }

    pub fn from_graph(g: &MultiGraph) -> Self {
        InstanceFile {
            vertices: g.vertex_count(),
            edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
            ..Default::default()
        }
    }

    pub fn graph(&self) -> Result<MultiGraph> {
        MultiGraph::new(self.vertices, self.edges.iter().map(|e| (e[0], e[1])).collect())
    }

    pub fn matroid(&self) -> Result<Matroid> {
        let m = Matroid::graphic(self.graph()?);
        match self.truncate {
            Some(r) => m.truncate(r),
            None => Ok(m),
        }
    }

    pub fn complex(&self) -> Result<NbcComplex> {
        let matroid = self.matroid()?;
        let order = match &self.order {
            Some(r) => ElementOrder::new(r.clone())?,
            None => ElementOrder::identity(matroid.ground_size()),
        };
        NbcComplex::new(matroid, order)
    }

    /// Parsed weights, or all ones over `len` entries.
    pub fn weight_vector(&self, len: usize) -> Result<WeightVector> {
        match &self.weights {
            None => Ok(WeightVector::ones(len)),
            Some(ws) => {
                if ws.len() != len {
                    return Err(Error::invalid(format!("{} weights, expected {len}", ws.len())));
                }
                Ok(WeightVector::new(ws.iter().map(|w| rational::parse(w)).collect::<Result<_>>()?))
            }
        }
    }
}

/// Parses `complete:4`, `bipartite:2:3`, `copies:3:complete:8`, ...
pub fn parse_graph_spec(spec: &str) -> Result<MultiGraph> {
    fn kind(parts: &[&str], spec: &str) -> Result<NamedGraph> {
        let num = |i: usize| -> Result<usize> {
            parts
                .get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::invalid(format!("bad graph spec {spec:?}")))
        };
        let exact = |k: usize| -> Result<()> {
            if parts.len() == k {
                Ok(())
            } else {
                Err(Error::invalid(format!("bad graph spec {spec:?}")))
            }
        };
        Ok(match parts.first().map(|s| s.trim()) {
            Some("complete") => exact(2).and(num(1)).map(NamedGraph::Complete)?,
            Some("bipartite") => {
                exact(3)?;
                NamedGraph::CompleteBipartite(num(1)?, num(2)?)
            }
            Some("cycle") => exact(2).and(num(1)).map(NamedGraph::Cycle)?,
            Some("path") => exact(2).and(num(1)).map(NamedGraph::Path)?,
            Some("edgeless") => exact(2).and(num(1)).map(NamedGraph::Edgeless)?,
            Some("copies") if parts.len() > 2 => NamedGraph::DisjointCopies(Box::new(kind(&parts[2..], spec)?), num(1)?),
            _ => return Err(Error::invalid(format!("unknown graph spec {spec:?}"))),
        })
    }
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.first().map(|s| s.trim()) == Some("theta") {
        let n = parts
            .get(1)
            .and_then(|s| s.trim().parse().ok())
            .filter(|_| parts.len() == 2)
            .ok_or_else(|| Error::invalid(format!("bad graph spec {spec:?}")))?;
        return Ok(build_long_edge_instance(n, Guard::Force)?.instance.graph);
    }
    build_named_graph(&kind(&parts, spec)?)
}

fn load_instance(args: &InstanceArgs) -> Result<InstanceFile> {
    let mut inst = match (&args.input, &args.graph) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
            InstanceFile::parse(&text)?
        }
        (None, Some(spec)) => InstanceFile::from_graph(&parse_graph_spec(spec)?),
        (None, None) => return Err(Error::invalid("an instance is required: pass --input or --graph")),
    };
    if let Some(order) = &args.order {
        inst.order = Some(order.clone());
    }
    if args.truncate.is_some() {
        inst.truncate = args.truncate;
    }
    inst.graph()?;
    Ok(inst)
}

fn rat(r: &Rational) -> Value {
    Value::String(rational::format(r))
}

fn rats(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(rat).collect())
}

fn facets_json(fs: &[Vec<usize>]) -> Value {
    json!(fs)
}

/// Rounds every non-integer float to 12 significant digits.
fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float");
            *v = serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

struct Ctx {
    guard: Guard,
    seed: u64,
}

/// A finished computation: report fields, params, the instance it ran on,
/// and whether it should exit as a failed check.
struct Outcome {
    fields: Map<String, Value>,
    params: Map<String, Value>,
    instance: Option<InstanceFile>,
    check_failed: bool,
}

impl Outcome {
    fn new(instance: Option<InstanceFile>) -> Self {
        Outcome {
            fields: Map::new(),
            params: Map::new(),
            instance,
            check_failed: false,
        }
    }

    fn set(&mut self, k: &str, v: Value) -> &mut Self {
        self.fields.insert(k.to_string(), v);
        self
    }

    fn param(&mut self, k: &str, v: Value) -> &mut Self {
        self.params.insert(k.to_string(), v);
        self
    }
}

fn complex_facets(inst: &InstanceFile, bases: bool, guard: Guard) -> Result<FacetComplex> {
    if bases {
        FacetComplex::from_bases(&inst.matroid()?, guard)
    } else {
        FacetComplex::from_nbc(&inst.complex()?, guard)
    }
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<(&'static str, Outcome)> {
    let guard = ctx.guard;
    Ok(match cmd {
        Command::FaceNumbers(a) => {
            let inst = load_instance(a)?;
            let f = inst.complex()?.face_numbers(guard)?;
            let mut o = Outcome::new(Some(inst));
            o.set("n", json!(f.counts()))
                .set("total", json!(f.total()))
                .set("log_concave", json!(is_log_concave(&f)));
            ("face-numbers", o)
        }
        Command::NbcBases(a) => {
            let inst = load_instance(a)?;
            let x = inst.complex()?;
            let bases = x.enumerate_nbc_bases(guard)?;
            let mut o = Outcome::new(Some(inst));
            o.set("rank", json!(x.rank()))
                .set("count", json!(bases.len()))
                .set("bases", facets_json(&bases));
            ("nbc-bases", o)
        }
        Command::WalkGap { instance, bases } => {
            let inst = load_instance(instance)?;
            let c = complex_facets(&inst, *bases, guard)?;
            let p = down_up_matrix(&c);
            let gap = spectral_gap(&p)?;
            let profile = local_spectral_profile(&c, guard)?;
            let bound = if c.dimension() == 0 { None } else { Some(local_to_global_bound(&profile, c.dimension())?) };
            let mut o = Outcome::new(Some(inst));
            o.param("bases", json!(bases))
                .set("states", json!(c.len()))
                .set("dimension", json!(c.dimension()))
                .set("gap", float(gap))
                .set("lambda2", p.second_eigenvalue()?.map_or(Value::Null, float))
                .set("ltg_bound", bound.map_or(Value::Null, float));
            ("walk-gap", o)
        }
        Command::LocalProfile { instance, bases } => {
            let inst = load_instance(instance)?;
            let c = complex_facets(&inst, *bases, guard)?;
            let profile = local_spectral_profile(&c, guard)?;
            let rank = c.dimension();
            let bound = if rank == 0 { None } else { Some(local_to_global_bound(&profile, rank)?) };
            let mut o = Outcome::new(Some(inst));
            o.param("bases", json!(bases))
                .set("gammas", Value::Array(profile.gammas().iter().map(|&g| float(g)).collect()))
                .set("max", profile.max().map_or(Value::Null, float))
                .set("scaled_max", profile.scaled_max(rank).map_or(Value::Null, float))
                .set("ltg_bound", bound.map_or(Value::Null, float));
            ("local-profile", o)
        }
        Command::Link { instance, tau } => {
            let inst = load_instance(instance)?;
            let tau: Vec<usize> = tau
                .iter()
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse().map_err(|_| Error::invalid(format!("bad element {s:?} in --tau"))))
                .collect::<Result<_>>()?;
            let x = inst.complex()?;
            x.matroid().check_set(&tau)?;
            let facets = x.link_facets(&tau, guard)?;
            let mut o = Outcome::new(Some(inst));
            o.param("tau", json!(tau))
                .set("count", json!(facets.len()))
                .set("facets", facets_json(&facets));
            ("link", o)
        }
        Command::Gadget(GadgetCommand::LongEdge { n }) => {
            let le = build_long_edge_instance(*n, guard)?;
            let g = &le.instance.graph;
            let mut o = Outcome::new(Some(InstanceFile::from_graph(g)));
            o.param("n", json!(n))
                .set("b", json!(le.b))
                .set("b_prime", json!(le.b_prime))
                .set("weights", rats(le.weights.weights()))
                .set("common_value", rat(&le.common_value))
                .set("nbc_bases", facets_json(&le.bases))
                .set("certified", json!(le.certified))
                .set("squared_distance", json!(le.squared_distance()))
                .set("edge_length", float((le.squared_distance() as f64).sqrt()));
            ("gadget long-edge", o)
        }
        Command::Gadget(GadgetCommand::Link { n, instance, l, m, report }) => {
            let (base, m) = match n {
                Some(n) => (build_named_graph(&NamedGraph::CompleteBipartite(*n, *n))?, m.unwrap_or(*n)),
                None => {
                    let g = load_instance(instance)?.graph()?;
                    let m = m.unwrap_or_else(|| default_target_size(g.vertex_count()));
                    (g, m)
                }
            };
            let inst = build_link_gadget(&base, *l, m, guard)?;
            let facets = inst.complex.link_facets(&inst.tau, guard)?;
            let mut o = Outcome::new(Some(InstanceFile::from_graph(&base)));
            o.param("l", json!(l)).param("m", json!(m));
            if let Some(n) = n {
                o.param("n", json!(n));
            }
            o.set("ground_size", json!(inst.matroid().ground_size()))
                .set("truncation_rank", json!(inst.matroid().rank()))
                .set("tau_size", json!(inst.tau.len()))
                .set("link_facets", json!(facets.len()))
                .set("facet_size", json!(facets.first().map_or(0, Vec::len)));
            if *report {
                let (fa, fb) = match (inst.marked("F_A"), inst.marked("F_B")) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return Err(Error::precondition("--report needs a bipartite base graph")),
                };
                let disjoint = facets
                    .iter()
                    .all(|s| !(s.iter().any(|e| fa.contains(e)) && s.iter().any(|e| fb.contains(e))));
                let with_e0 = facets.iter().all(|s| s.contains(&0));
                o.set("claim_disjoint", json!(disjoint)).set("all_contain_e0", json!(with_e0));
                let part = partition_link_facets(&inst, &facets)?;
                let sizes = |map: &std::collections::BTreeMap<usize, Vec<usize>>| -> Value {
                    Value::Object(map.iter().map(|(k, v)| (k.to_string(), json!(v.len()))).collect())
                };
                o.set("S_A_n", json!(part.s_a_len(m)))
                    .set("S_A", sizes(&part.s_a))
                    .set("S_B", sizes(&part.s_b))
                    .set("S_0", json!(part.s_0.len()));
                let cert = gap_certificate(&inst, guard)?;
                o.set("measured_gap", float(cert.measured_gap))
                    .set("conductance", rat(&cert.conductance))
                    .set("neighbor_ratio", rat(&cert.neighbor_ratio))
                    .set("mixing_bound", rat(&cert.mixing_bound))
                    .set("half_condition", json!(cert.half_condition))
                    .set("cheeger_holds", json!(cert.cheeger_holds))
                    .set("uncorrected_holds", json!(cert.uncorrected_holds));
            }
            ("gadget link", o)
        }
        Command::Reduce(ReduceCommand::Opt(a)) => {
            let file = load_instance(a)?;
            let g = file.graph()?;
            let vw = file.weight_vector(g.vertex_count())?;
            let (inst, ew) = build_opt_reduction(&g, &vw)?;
            let (set, mis) = max_weight_independent_set(&g, vw.weights(), guard)?;
            let (base, nbc) = max_weight_nbc_base(&inst.complex, &ew, guard)?;
            let mut o = Outcome::new(Some(file));
            o.set("independent_set", json!(set))
                .set("independent_set_weight", rat(&mis))
                .set("nbc_base", json!(base))
                .set("nbc_base_weight", rat(&nbc))
                .set("equal", json!(mis == nbc));
            ("reduce opt", o)
        }
        Command::Reduce(ReduceCommand::Count { instance, m, l }) | Command::Reduce(ReduceCommand::Field { instance, m, l }) => {
            let (name, mode) = match cmd {
                Command::Reduce(ReduceCommand::Count { .. }) => ("reduce count", SandwichMode::FacetCount),
                _ => ("reduce field", SandwichMode::PartitionFunction),
            };
            let file = load_instance(instance)?;
            let r = verify_counting_sandwich(&file.graph()?, *m, *l, mode, guard)?;
            let mut o = Outcome::new(Some(file));
            o.param("m", json!(m))
                .param("l", json!(l))
                .set("source_quantity", rat(&r.source_quantity))
                .set("target_quantity", rat(&r.target_quantity))
                .set("lower_bound", rat(&r.lower_bound))
                .set("upper_bound", rat(&r.upper_bound))
                .set("verdict", json!(r.verdict));
            (name, o)
        }
        Command::Reduce(ReduceCommand::Hardcore { instance, r }) => {
            let file = load_instance(instance)?;
            let g = file.graph()?;
            let padded = build_hardcore_reduction(&g, *r)?;
            let report = verify_hardcore_identities(&g, *r, guard)?;
            let checks: Map<String, Value> = report
                .checks
                .iter()
                .map(|c| {
                    (
                        c.name.to_string(),
                        json!({"cases": c.cases, "passed": c.passed(), "failures": c.failures}),
                    )
                })
                .collect();
            let mut o = Outcome::new(Some(file));
            o.param("r", json!(r))
                .set("vertices", json!(padded.vertex_count()))
                .set("edges", json!(padded.edge_count()))
                .set("exhaustive", json!(report.exhaustive))
                .set(
                    "independent_set_counts",
                    Value::Array(report.padded_counts.counts().iter().map(|c| json!(c.to_string())).collect()),
                )
                .set("checks", Value::Object(checks))
                .set("passed", json!(report.passed()));
            o.check_failed = !report.passed();
            ("reduce hardcore", o)
        }
        Command::Oracle(oc) => oracle(oc, guard)?,
        Command::Verify { suite } => {
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let reports: Vec<SuiteReport> = names.iter().map(|s| run_suite(s, ctx.seed)).collect::<Result<_>>()?;
            let passed = reports.iter().all(SuiteReport::passed);
            let mut o = Outcome::new(None);
            o.param("suite", json!(suite)).param("seed", json!(ctx.seed));
            o.set(
                "suites",
                Value::Array(
                    reports
                        .iter()
                        .map(|r| {
                            json!({
                                "name": r.name,
                                "criterion": r.criterion,
                                "passed": r.passed(),
                                "cases": r.cases,
                                "failure_count": r.failure_count,
                                "failures": r.failures,
                                "metrics": r.metrics,
                            })
                        })
                        .collect(),
                ),
            )
            .set("passed", json!(passed));
            o.check_failed = !passed;
            ("verify", o)
        }
    })
}

fn oracle(cmd: &OracleCommand, guard: Guard) -> Result<(&'static str, Outcome)> {
    Ok(match cmd {
        OracleCommand::Chromatic(a) => {
            let inst = load_instance(a)?;
            let chi = chromatic_polynomial(&inst.graph()?, guard)?;
            let mut o = Outcome::new(Some(inst));
            o.set(
                "coefficients",
                Value::Array(chi.coefficients().iter().map(|c| json!(c.to_string())).collect()),
            )
            .set("at_minus_one", json!(chi.eval(-1).to_string()));
            ("oracle chromatic", o)
        }
        OracleCommand::Acyclic(a) => {
            let inst = load_instance(a)?;
            let count = count_acyclic_orientations(&inst.graph()?, guard)?;
            let mut o = Outcome::new(Some(inst));
            o.set("count", json!(count));
            ("oracle acyclic", o)
        }
        OracleCommand::Indep(a) => {
            let inst = load_instance(a)?;
            let counts = count_independent_sets_by_size(&inst.graph()?, guard)?;
            let mut o = Outcome::new(Some(inst));
            o.set("counts", Value::Array(counts.counts().iter().map(|c| json!(c.to_string())).collect()))
                .set("total", json!(counts.total().to_string()));
            ("oracle indep", o)
        }
        OracleCommand::Parking { instance, root } => {
            let inst = load_instance(instance)?;
            let g = inst.graph()?;
            let count = count_g_parking_functions(&g, *root, guard)?;
            let nbc = NbcComplex::with_identity_order(Matroid::graphic(g)).enumerate_nbc_bases(guard)?;
            let mut o = Outcome::new(Some(inst));
            o.param("root", json!(root))
                .set("count", json!(count))
                .set("nbc_bases", json!(nbc.len()));
            ("oracle parking", o)
        }
        OracleCommand::Hardcore { instance, fugacity } => {
            let inst = load_instance(instance)?;
            let lambda = rational::parse(fugacity)?;
            let z = hardcore_partition(&inst.graph()?, &lambda, guard)?;
            let mut o = Outcome::new(Some(inst));
            o.param("fugacity", rat(&lambda)).set("partition_function", rat(&z));
            ("oracle hardcore", o)
        }
    })
}

/// Result of one invocation, ready to print.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) => 1,
        Error::Precondition(_) => 2,
        Error::SizeGuard { .. } => 3,
    }
}

fn failure(code: i32, msg: &str) -> Invocation {
    let line = msg.split_whitespace().collect::<Vec<_>>().join(" ");
    Invocation {
        code,
        stdout: String::new(),
        stderr: format!("error: {line}\n"),
    }
}

fn execute(cli: &Cli) -> Result<(String, bool)> {
    let ctx = Ctx {
        guard: if cli.force_size { Guard::Force } else { Guard::Enforce },
        seed: cli.seed.unwrap_or(DEFAULT_SEED),
    };
    let (name, mut outcome) = dispatch(&cli.command, &ctx)?;
    let digest_input = json!({"instance": outcome.instance, "params": outcome.params});
    let digest = hex::encode(Sha256::digest(digest_input.to_string().as_bytes()));
    let mut report = outcome.fields;
    report.insert("command".to_string(), json!(name));
    report.insert("input_digest".to_string(), json!(digest));
    report.insert("params".to_string(), Value::Object(std::mem::take(&mut outcome.params)));
    let mut report = Value::Object(report);
    round_floats(&mut report);
    let mut text = serde_json::to_string_pretty(&report).expect("JSON values serialize");
    text.push('\n');
    Ok((text, outcome.check_failed))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Invocation {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => {
                    let text = e.to_string();
                    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
                    failure(1, first.trim_start_matches("error: "))
                }
            };
        }
    };
    match execute(&cli) {
        Ok((stdout, check_failed)) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &stdout) {
                    return failure(1, &format!("cannot write {}: {e}", path.display()));
                }
            }
            Invocation {
                code: if check_failed { 2 } else { 0 },
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => failure(exit_code(&e), &e.to_string()),
    }
}

/// Entry point for the binary.
pub fn main() -> ! {
    let inv = run(std::env::args_os());
    print!("{}", inv.stdout);
    eprint!("{}", inv.stderr);
    std::process::exit(inv.code)
}
