//! Command-line front end. Reports are JSON objects with sorted keys and a
//! `schema` field, or a plain text rendering of the same data.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{
    analyze, load_catalog, parse_catalog, parse_params, verify_catalog, verify_entry, VerificationReport, VerifyOptions,
};
use crate::duval::{classify_ade, LocalModel};
use crate::error::{Error, Result};
use crate::exactalg::{parse, vars, FieldSpec};
use crate::fsplit::fedder;
use crate::pencil::sample_members;
use crate::wvariety::{default_ext_bound, singular_points, SurfaceModel};

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "dvdp",
    version,
    about = "Exact computations on Du Val del Pezzo surfaces over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Args, Debug)]
struct SurfaceArgs {
    /// Characteristic.
    #[arg(long)]
    p: u32,
    /// Degree of the base field over F_p.
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Weights: 1,1,2,3 or 1,1,1,2 or 1,1,1,1 (one equation), 1,1,1,1,1 (two quadrics).
    #[arg(long, value_delimiter = ',')]
    weights: Vec<u32>,
    /// Equation in x, y, z, w, or two quadrics in x0..x4 separated by `;`.
    #[arg(long)]
    eq: String,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

impl SurfaceArgs {
    fn model(&self) -> Result<SurfaceModel> {
        SurfaceModel::from_text(&FieldSpec::new(self.p, self.k)?, &self.weights, &self.eq)
    }

    fn echo(&self) -> Value {
        json!({"p": self.p, "k": self.k, "weights": self.weights, "eq": self.eq})
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Singular points, their types, Fedder's criterion and optional sampling.
    Analyze {
        #[command(flatten)]
        s: SurfaceArgs,
        /// Largest relative extension degree searched for singular points.
        #[arg(long)]
        ext_bound: Option<u32>,
        /// Also sample this many anti-canonical members.
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Absolute extension degree of the sampling field.
        #[arg(long, default_value_t = 4)]
        field_ext: u32,
    },
    /// Fedder's criterion only.
    Fedder {
        #[command(flatten)]
        s: SurfaceArgs,
    },
    /// Singular points with completeness certificates.
    Singular {
        #[command(flatten)]
        s: SurfaceArgs,
        #[arg(long)]
        ext_bound: Option<u32>,
    },
    /// ADE type of a local equation in x, y, z singular at the origin.
    Classify {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        eq: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Sample members of the anti-canonical system.
    Members {
        #[command(flatten)]
        s: SurfaceArgs,
        #[arg(long, default_value_t = 50)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Absolute extension degree of the sampling field.
        #[arg(long, default_value_t = 4)]
        field_ext: u32,
    },
    /// The embedded catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    /// Replay catalog rows and compare with their expectations.
    Verify {
        #[arg(long)]
        id: Option<String>,
        /// Parameters for a family, e.g. "a=1,b=g^1".
        #[arg(long)]
        params: Option<String>,
        /// Absolute degree of the parameter field (with --params).
        #[arg(long)]
        field_ext: Option<u32>,
        /// Parameter points per family when --params is absent.
        #[arg(long, default_value_t = 5)]
        samples: usize,
        /// Read the catalog from this file instead of the embedded one.
        #[arg(long)]
        catalog: Option<std::path::PathBuf>,
        #[arg(long)]
        ext_bound: Option<u32>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// List the rows.
    List {
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Exit status and the two output streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn envelope(command: &str, input: Value, result: Value, pass: bool) -> Value {
    json!({
        "schema": SCHEMA,
        "tool": "dvdp",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "input": input,
        "result": result,
        "pass": pass,
    })
}

/// Render a JSON value as indented lines of `key: value`.
fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&format!("{pad}[{i}]\n"));
                text(x, indent + 1, out);
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !x.is_object() && is_flat(x)),
        Value::Object(_) => false,
        _ => true,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            text(v, 0, &mut s);
            s
        }
    }
}

fn catalog_lines(reports: &[VerificationReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let params = r
            .params
            .as_ref()
            .map(|p| format!(" [{}]", p.join(",")))
            .unwrap_or_default();
        s.push_str(&format!(
            "{} {}{}: computed {} expected {} fsplit {}\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            params,
            r.analysis.dynkin,
            r.expected_dynkin.as_deref().unwrap_or("-"),
            r.analysis.fedder.fsplit,
        ));
    }
    s
}

fn execute(cli: Cli) -> Result<(String, bool)> {
    match cli.command {
        Command::Analyze {
            s,
            ext_bound,
            trials,
            seed,
            field_ext,
        } => {
            let x = s.model()?;
            let opts = VerifyOptions {
                ext_bound: ext_bound.unwrap_or_else(default_ext_bound),
                sample: trials.map(|t| (field_ext, t, seed)),
            };
            let (analysis, _) = analyze(&x, &opts)?;
            Ok((
                render(&envelope("analyze", s.echo(), to_value(&analysis), true), s.format),
                true,
            ))
        }
        Command::Fedder { s } => {
            let x = s.model()?;
            let v = fedder(&x);
            let result = json!({
                "fsplit": v.fsplit,
                "witness": v.witness_text(x.generators()[0]),
                "extension": v.extension,
            });
            Ok((render(&envelope("fedder", s.echo(), result, true), s.format), true))
        }
        Command::Singular { s, ext_bound } => {
            let x = s.model()?;
            let locus = singular_points(&x, ext_bound.unwrap_or_else(default_ext_bound))?;
            let points: Vec<Value> = locus
                .points
                .iter()
                .map(|p| {
                    json!({
                        "chart": p.chart_var,
                        "coords": p.coords_text(),
                        "field_degree": p.field_degree,
                        "orbit_size": p.galois_orbit_size,
                        "local_length": p.local_length,
                    })
                })
                .collect();
            let certs: Vec<Value> = locus
                .certificates
                .iter()
                .map(|c| {
                    json!({
                        "chart": c.chart_var,
                        "ideal_dimension": c.ideal_dimension,
                        "found_length": c.found_length,
                        "degrees_searched": c.degrees_searched,
                    })
                })
                .collect();
            let result = json!({"points": points, "certificates": certs});
            Ok((render(&envelope("singular", s.echo(), result, true), s.format), true))
        }
        Command::Classify { p, k, eq, format } => {
            let field = FieldSpec::new(p, k)?;
            let m = LocalModel::new(parse(&eq, &vars(&["x", "y", "z"]), &field)?)?;
            let c = classify_ade(&m, 8)?;
            let result = json!({
                "ade": c.ade.to_string(),
                "tau": c.tau,
                "coindex_ambiguous": c.coindex_ambiguous,
                "graph": {"nodes": c.graph.nodes, "edges": c.graph.edges, "field_degree": c.graph.field_degree},
            });
            let input = json!({"p": p, "k": k, "eq": eq});
            Ok((render(&envelope("classify", input, result, true), format), true))
        }
        Command::Members {
            s,
            trials,
            seed,
            field_ext,
        } => {
            let x = s.model()?;
            let r = sample_members(&x, field_ext, trials, seed)?;
            let mut input = s.echo();
            input["trials"] = json!(trials);
            input["seed"] = json!(seed);
            input["field_ext"] = json!(field_ext);
            Ok((render(&envelope("members", input, to_value(&r), true), s.format), true))
        }
        Command::Catalog { action } => match action {
            CatalogAction::List { format } => {
                let entries = load_catalog()?;
                let rows: Vec<Value> = entries
                    .iter()
                    .map(|e| {
                        json!({
                            "id": e.id,
                            "p": e.p.to_string(),
                            "degree": e.degree,
                            "equation": e.equation,
                            "expected_dynkin": e.expected_dynkin.as_ref().map(ToString::to_string),
                            "expected_fsplit": e.expected_fsplit,
                            "source": e.source,
                        })
                    })
                    .collect();
                Ok((
                    render(&envelope("catalog list", json!({}), json!(rows), true), format),
                    true,
                ))
            }
            CatalogAction::Verify {
                id,
                params,
                field_ext,
                samples,
                catalog,
                ext_bound,
                format,
            } => {
                let entries = match &catalog {
                    Some(path) => {
                        let text = std::fs::read_to_string(path)
                            .map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
                        parse_catalog(&text)?
                    }
                    None => load_catalog()?,
                };
                let opts = VerifyOptions {
                    ext_bound: ext_bound.unwrap_or_else(default_ext_bound),
                    sample: None,
                };
                let reports = match &params {
                    Some(text) => {
                        let id = id
                            .as_deref()
                            .ok_or_else(|| Error::Catalog("--params needs --id".into()))?;
                        let e = entries
                            .iter()
                            .find(|e| e.id == id)
                            .ok_or_else(|| Error::Catalog(format!("no entry with id {id}")))?;
                        let domain = e
                            .domain
                            .ok_or_else(|| Error::Catalog(format!("{id} takes no parameters")))?;
                        let p = e
                            .prime()
                            .ok_or_else(|| Error::Catalog(format!("{id} has no equation")))?;
                        let field = match field_ext {
                            Some(k) => FieldSpec::new(p, k)?,
                            None => e.default_field()?,
                        };
                        let values = parse_params(text, domain, &field)?;
                        vec![verify_entry(&entries, e, Some((&field, &values)), &opts)?]
                    }
                    None => verify_catalog(&entries, id.as_deref(), samples, &opts)?,
                };
                let pass = reports.iter().all(|r| r.pass);
                let input = json!({
                    "id": id,
                    "params": params,
                    "samples": samples,
                    "catalog": catalog.as_ref().map(|p| p.display().to_string()),
                });
                let out = match format {
                    Format::Json => render(&envelope("catalog verify", input, to_value(&reports), pass), format),
                    Format::Text => catalog_lines(&reports),
                };
                Ok((out, pass))
            }
        },
    }
}

/// Run with the given arguments (the first is the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let msg = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (msg, String::new())
            } else {
                (String::new(), msg)
            };
            return Outcome { code, stdout, stderr };
        }
    };
    match execute(cli) {
        Ok((stdout, pass)) => Outcome {
            code: if pass { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
