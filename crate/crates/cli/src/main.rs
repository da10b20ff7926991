use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gpgraph_core::applications::{
    family_table, ihara_zeta, is_ramanujan, ramanujan_by_inequality, ramanujan_closed_rule, waring_number_with_budget,
};
use gpgraph_core::finite_field::{build_field_with_budget, FieldParams, DEFAULT_MAX_ORDER};
use gpgraph_core::oracles::{run_suite_with, SuiteOptions};
use gpgraph_core::paley_graphs::{build_graph_with_budget, export, GraphSpec};
use gpgraph_core::spectra_srg::{closed_walks, intersection_array, spanning_trees, spectrum, srg_params};
use gpgraph_core::Error;
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "gpgraph",
    version,
    about = "Generalized Paley graphs: construction, closed forms and brute-force checks"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Field tables for F_{p^{sm}}
    Field {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Full closed-form record of a graph
    Graph {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Also report closed walks of lengths 2..=R
        #[arg(long, value_name = "R")]
        walks: Option<u32>,
        /// Also report the spanning-tree count
        #[arg(long)]
        trees: bool,
    },
    /// Eigenvalues with multiplicities
    Spectrum {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Strongly regular parameters, flags and intersection array
    Srg {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Number of closed walks of length r
    Walks {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(long, default_value_t = 3)]
        r: u32,
    },
    /// Number of spanning trees
    Trees {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Waring number g(q^ell + 1, q^m), with witnesses on request
    Waring {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Emit one decomposition per field element
        #[arg(long)]
        witnesses: bool,
    },
    /// Ramanujan status by the closed rule and by the eigenvalue bound
    Ramanujan {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Ihara zeta factorization
    Zeta {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Family table for q in {2, 3, 4}
    Tables {
        #[arg(long)]
        family: u64,
        #[arg(long, default_value_t = 4)]
        tmax: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run every brute-force oracle against the closed forms
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Skip the falsification controls
        #[arg(long)]
        no_controls: bool,
    },
    /// Write the adjacency structure
    Export {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value_t = ExportKind::Edges)]
        kind: ExportKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long)]
    m: u32,
    #[arg(long, env = "GPG_MAX_ORDER")]
    max_order: Option<u64>,
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    ell: u32,
    #[arg(long)]
    complement: bool,
    /// Largest field or graph order that may be materialized
    #[arg(long, env = "GPG_MAX_ORDER")]
    max_order: Option<u64>,
}

impl SpecArgs {
    fn spec(&self) -> Result<GraphSpec, Error> {
        let g = GraphSpec::new(self.p, self.s, self.m, self.ell)?;
        Ok(if self.complement { g.complement() } else { g })
    }

    fn proper_spec(&self) -> Result<GraphSpec, Error> {
        let g = self.spec()?;
        g.require_proper()?;
        Ok(g)
    }

    fn budget(&self) -> u64 {
        self.max_order.unwrap_or(DEFAULT_MAX_ORDER)
    }
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportKind {
    Edges,
    Dimacs,
    Bits,
}

/// What a verb produced: a JSON value, a text rendering and optionally
/// explicit CSV rows.
struct Report {
    json: Value,
    text: String,
    csv: Option<Vec<Vec<String>>>,
    failed: bool,
}

impl Report {
    fn new(json: Value, text: impl Into<String>) -> Self {
        Report { json, text: text.into(), csv: None, failed: false }
    }

    fn render(&self, format: Format) -> Result<Vec<u8>, Failure> {
        let mut out = match format {
            Format::Json => serde_json::to_vec_pretty(&self.json).map_err(|e| Failure::Runtime(e.to_string()))?,
            Format::Text => self.text.trim_end().as_bytes().to_vec(),
            Format::Csv => {
                let rows = self.csv.clone().unwrap_or_else(|| flatten(&self.json));
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in rows {
                    w.write_record(&row).map_err(|e| Failure::Runtime(e.to_string()))?;
                }
                let mut bytes = w.into_inner().map_err(|e| Failure::Runtime(e.to_string()))?;
                while bytes.last() == Some(&b'\n') {
                    bytes.pop();
                }
                bytes
            }
        };
        out.push(b'\n');
        Ok(out)
    }
}

/// Header row of top-level keys and one row of values; nested values are
/// written as compact JSON.
fn flatten(v: &Value) -> Vec<Vec<String>> {
    let Value::Object(map) = v else { return vec![vec![scalar(v)]] };
    let header = map.keys().cloned().collect();
    let row = map.values().map(scalar).collect();
    vec![header, row]
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CompositeP(_)
            | Error::BudgetExceeded { .. }
            | Error::NotASubfield { .. }
            | Error::InvalidSpec(_)
            | Error::NotInFamily(_)
            | Error::MixedBase
            | Error::NotDivisible { .. }
            | Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn big(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

fn spec_json(g: &GraphSpec) -> Value {
    json!({
        "p": g.p,
        "s": g.s,
        "m": g.m,
        "ell": g.ell,
        "complement": g.complemented,
        "label": g.label(),
    })
}

fn optional<T>(r: Result<T, Error>) -> Result<Option<T>, Error> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Disconnected | Error::DegenerateGraph | Error::NotApplicable(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn array_json(g: &GraphSpec) -> Result<Value, Error> {
    Ok(match optional(intersection_array::<BigInt>(g))? {
        Some(a) => Value::Array(a.as_vec().iter().map(big).collect()),
        None => Value::Null,
    })
}

fn field_report(args: &FieldArgs) -> Result<Report, Failure> {
    let params = FieldParams::new(args.p, args.s, args.m)?;
    let f = build_field_with_budget(params, args.max_order.unwrap_or(DEFAULT_MAX_ORDER))?;
    let rec = f.record();
    let json = json!({
        "p": rec.p,
        "s": rec.s,
        "m": rec.m,
        "order": params.order_big().to_string(),
        "modulus": rec.modulus,
        "alpha": f.to_digit_string(f.alpha()),
        "group_factors": f.group_factors(),
    });
    let text = format!(
        "F_{} (p={}, degree {})\nmodulus {:?}\nprimitive element {}",
        params.order_big(),
        rec.p,
        f.n(),
        rec.modulus,
        f.to_digit_string(f.alpha())
    );
    Ok(Report::new(json, text))
}

fn graph_report(args: &SpecArgs, walks: Option<u32>, trees: bool) -> Result<Report, Failure> {
    let g = args.proper_spec()?;
    let sp = spectrum::<BigInt>(&g)?;
    let srg = optional(srg_params::<BigInt>(&g))?;
    let mut map = Map::new();
    map.insert("spec".into(), spec_json(&g));
    map.insert("order".into(), big(&g.order()));
    map.insert("degree".into(), big(sp.largest()));
    map.insert("spectrum".into(), serde_json::to_value(&sp).expect("spectrum serializes"));
    map.insert("srg".into(), serde_json::to_value(&srg).expect("srg serializes"));
    map.insert("array".into(), array_json(&g)?);
    map.insert("connected".into(), Value::Bool(sp.is_connected()));
    let mut text = format!("{}\norder {}\nspectrum {sp}", g.label(), g.order());
    if let Some(r) = &srg {
        let (v, k, e, d) = r.tuple();
        text.push_str(&format!("\nsrg ({v},{k},{e},{d})"));
    }
    if let Some(r_max) = walks {
        let mut w = Map::new();
        for r in 2..=r_max {
            let count = closed_walks::<BigInt>(&g, r)?;
            text.push_str(&format!("\nw{r} {count}"));
            w.insert(r.to_string(), big(&count));
        }
        map.insert("walks".into(), Value::Object(w));
    }
    if trees {
        let t = spanning_trees::<BigInt>(&g)?;
        text.push_str(&format!("\ntrees {t}"));
        map.insert("trees".into(), big(&t));
    }
    Ok(Report::new(Value::Object(map), text))
}

fn run(verb: &Verb) -> Result<Report, Failure> {
    match verb {
        Verb::Field { field, .. } => field_report(field),
        Verb::Graph { spec, walks, trees, .. } => graph_report(spec, *walks, *trees),
        Verb::Spectrum { spec, .. } => {
            let g = spec.proper_spec()?;
            let sp = spectrum::<BigInt>(&g)?;
            let json = json!({ "spec": spec_json(&g), "spectrum": sp });
            Ok(Report::new(json, sp.to_string()))
        }
        Verb::Srg { spec, .. } => {
            let g = spec.proper_spec()?;
            let r = srg_params::<BigInt>(&g)?;
            let (v, k, e, d) = r.tuple();
            let array = array_json(&g)?;
            let text = format!("({v},{k},{e},{d})\narray {}", scalar(&array));
            Ok(Report::new(json!({ "spec": spec_json(&g), "srg": r, "array": array }), text))
        }
        Verb::Walks { spec, r, .. } => {
            let g = spec.proper_spec()?;
            let w = closed_walks::<BigInt>(&g, *r)?;
            Ok(Report::new(json!({ "spec": spec_json(&g), "r": r, "walks": big(&w) }), w.to_string()))
        }
        Verb::Trees { spec, .. } => {
            let g = spec.proper_spec()?;
            let t = spanning_trees::<BigInt>(&g)?;
            Ok(Report::new(json!({ "spec": spec_json(&g), "trees": big(&t) }), t.to_string()))
        }
        Verb::Waring { spec, witnesses, .. } => {
            let g = spec.spec()?;
            let cert = waring_number_with_budget(&g, spec.budget())?;
            let mut json = json!({
                "spec": spec_json(&g),
                "k": big(&cert.k_exp),
                "field_size": big(&cert.field_size),
                "g": cert.g,
            });
            if *witnesses {
                let w = cert
                    .witnesses
                    .as_ref()
                    .ok_or_else(|| Failure::Usage(format!("field order exceeds budget {}", spec.budget())))?;
                let f = build_field_with_budget(g.field_params(), spec.budget())?;
                let rows: Vec<[String; 3]> = f
                    .elements()
                    .zip(w)
                    .map(|(a, &(x, y))| [f.to_digit_string(a), f.to_digit_string(x), f.to_digit_string(y)])
                    .collect();
                json["witnesses"] = serde_json::to_value(rows).expect("strings serialize");
            }
            let text = format!("g({}, {}) = {}", cert.k_exp, cert.field_size, cert.g);
            Ok(Report::new(json, text))
        }
        Verb::Ramanujan { spec, .. } => {
            let g = spec.proper_spec()?;
            let verdict = is_ramanujan(&g)?;
            let closed = optional(ramanujan_closed_rule(&g))?;
            let bound = ramanujan_by_inequality(&g)?;
            let json = json!({
                "spec": spec_json(&g),
                "ramanujan": verdict,
                "closed_rule": closed,
                "eigenvalue_bound": bound,
            });
            Ok(Report::new(json, if verdict { "ramanujan" } else { "not ramanujan" }))
        }
        Verb::Zeta { spec, .. } => {
            let g = spec.proper_spec()?;
            let z = ihara_zeta(&g)?;
            let json = json!({ "spec": spec_json(&g), "zeta": z, "display": z.to_string() });
            Ok(Report::new(json, z.to_string()))
        }
        Verb::Tables { family, tmax, .. } => {
            let rows = family_table(*family, *tmax)?;
            let mut csv = vec![["t", "graph", "srg", "spectrum"].map(String::from).to_vec()];
            csv.extend(rows.iter().map(|r| r.columns().to_vec()));
            let text = rows.iter().map(|r| r.columns().join("  ")).collect::<Vec<_>>().join("\n");
            let json = serde_json::to_value(&rows).expect("rows serialize");
            Ok(Report { json, text, csv: Some(csv), failed: false })
        }
        Verb::Verify { spec, no_controls, .. } => {
            let g = spec.proper_spec()?;
            let mut opts = SuiteOptions { controls: !no_controls, ..SuiteOptions::default() };
            if let Some(b) = spec.max_order {
                opts.budget = usize::try_from(b).unwrap_or(usize::MAX);
            }
            let report = run_suite_with(&g, &opts)?;
            let text = report
                .checks
                .iter()
                .map(|c| {
                    let verdict = if c.pass { "PASS" } else { "FAIL" };
                    format!("{verdict} {}: expected {}, observed {}", c.name, c.expected, c.observed)
                })
                .collect::<Vec<_>>()
                .join("\n");
            let mut csv = vec![["check", "pass", "expected", "observed"].map(String::from).to_vec()];
            csv.extend(
                report
                    .checks
                    .iter()
                    .map(|c| vec![c.name.clone(), c.pass.to_string(), c.expected.clone(), c.observed.clone()]),
            );
            let json = json!({ "spec": spec_json(&g), "all_pass": report.all_pass(), "checks": report.checks });
            Ok(Report { json, text, csv: Some(csv), failed: !report.all_pass() })
        }
        Verb::Export { .. } => unreachable!("handled by export_graph"),
    }
}

fn export_graph(spec: &SpecArgs, kind: ExportKind) -> Result<Vec<u8>, Failure> {
    let g = spec.proper_spec()?;
    let graph = build_graph_with_budget(&g, spec.budget())?;
    Ok(match kind {
        ExportKind::Edges => export::edge_list(&graph).into_bytes(),
        ExportKind::Dimacs => export::dimacs(&graph).into_bytes(),
        ExportKind::Bits => export::bit_dump(&graph),
    })
}

fn emit(bytes: &[u8], out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(bytes).map_err(|e| Failure::Runtime(e.to_string())),
    }
}

fn out_args(verb: &Verb) -> &OutArgs {
    match verb {
        Verb::Field { out, .. }
        | Verb::Graph { out, .. }
        | Verb::Spectrum { out, .. }
        | Verb::Srg { out, .. }
        | Verb::Walks { out, .. }
        | Verb::Trees { out, .. }
        | Verb::Waring { out, .. }
        | Verb::Ramanujan { out, .. }
        | Verb::Zeta { out, .. }
        | Verb::Tables { out, .. }
        | Verb::Verify { out, .. } => out,
        Verb::Export { .. } => unreachable!("export has its own output flags"),
    }
}

fn execute(cli: &Cli) -> Result<bool, Failure> {
    if let Verb::Export { spec, kind, out } = &cli.verb {
        emit(&export_graph(spec, *kind)?, out.as_ref())?;
        return Ok(true);
    }
    let out = out_args(&cli.verb);
    let default = if matches!(cli.verb, Verb::Tables { .. }) { Format::Csv } else { Format::Json };
    let report = run(&cli.verb)?;
    emit(&report.render(out.format.unwrap_or(default))?, out.out.as_ref())?;
    Ok(!report.failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
