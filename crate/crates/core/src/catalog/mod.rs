//! The embedded catalog of surfaces and classification rows, Dynkin-type
//! algebra and end-to-end verification.

mod dynkin;
mod params;

pub use dynkin::DynkinType;
pub use params::{verify_parametrization, ParamDomain, Parametrization, ParametrizationCheck};

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::duval::{classify_ade, local_equation, AdeType};
use crate::error::{Error, Result};
use crate::exactalg::{parse, vars, FieldElement, FieldSpec};
use crate::fsplit::fedder;
use crate::pencil::{sample_members, SamplingReport};
use crate::wvariety::{ambient_vars, degree_for_weights, singular_points, SurfaceModel};

const CATALOG: &str = include_str!("../../data/catalog.txt");

/// Largest extension degree the resolution engine may use.
const RESOLUTION_EXT: u32 = 8;

/// Which characteristics a row applies to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PConstraint {
    OneOf(Vec<u32>),
    Above(u32),
}

impl PConstraint {
    pub fn admits(&self, p: u32) -> bool {
        match self {
            PConstraint::OneOf(ps) => ps.contains(&p),
            PConstraint::Above(b) => p > *b,
        }
    }

    fn parse(s: &str) -> Option<PConstraint> {
        if let Some(b) = s.strip_prefix('>') {
            return b.trim().parse().ok().map(PConstraint::Above);
        }
        s.split(',')
            .map(|t| t.trim().parse().ok())
            .collect::<Option<Vec<u32>>>()
            .map(PConstraint::OneOf)
    }
}

impl fmt::Display for PConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PConstraint::OneOf(ps) => {
                write!(f, "{}", ps.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
            }
            PConstraint::Above(b) => write!(f, ">{b}"),
        }
    }
}

/// Number of isomorphism classes recorded for a registry row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassCount {
    Finite(u32),
    Infinite,
}

/// One catalog row: an equation with its expectations, or an
/// equation-free registry row.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub p: PConstraint,
    pub degree: Option<u32>,
    pub weights: Option<Vec<u32>>,
    pub equation: Option<String>,
    pub classes: Option<ClassCount>,
    pub domain: Option<ParamDomain>,
    pub expected_dynkin: Option<DynkinType>,
    pub expected_fsplit: Option<bool>,
    pub source: String,
}

impl CatalogEntry {
    pub fn is_registry(&self) -> bool {
        self.equation.is_none()
    }

    /// The characteristic of an equation row.
    pub fn prime(&self) -> Option<u32> {
        match (&self.p, self.is_registry()) {
            (PConstraint::OneOf(ps), false) if ps.len() == 1 => Some(ps[0]),
            _ => None,
        }
    }

    /// Field used when no parameters are supplied: the prime field, or a
    /// field with enough domain points to sample.
    pub fn default_field(&self) -> Result<FieldSpec> {
        let p = self
            .prime()
            .ok_or_else(|| Error::Catalog(format!("{} has no equation", self.id)))?;
        let k = match self.domain {
            None => 1,
            Some(ParamDomain::D1) => 4,
            Some(ParamDomain::D2) => 3,
        };
        FieldSpec::new(p, k)
    }

    /// The surface at the given parameter values.
    pub fn model(&self, field: &FieldSpec, params: &[FieldElement]) -> Result<SurfaceModel> {
        let (Some(eq), Some(weights)) = (&self.equation, &self.weights) else {
            return Err(Error::Catalog(format!("{} has no equation", self.id)));
        };
        if let Some(d) = self.domain {
            if !d.contains(field, params) {
                return Err(Error::InvalidSection(format!("parameters outside {d:?}")));
            }
        }
        let names = ambient_vars(weights.len());
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let parts = eq
            .split(';')
            .map(|t| params::specialise(t.trim(), &names, field, params))
            .collect::<Result<Vec<_>>>()?;
        match <[_; 2]>::try_from(parts) {
            Ok([q1, q2]) => SurfaceModel::complete_intersection(q1, q2),
            Err(mut one) if one.len() == 1 => SurfaceModel::hypersurface(weights, one.remove(0)),
            Err(_) => Err(Error::Catalog(format!("{}: bad equation count", self.id))),
        }
    }
}

fn field_or_dash(s: &str) -> Option<&str> {
    (s != "-").then_some(s)
}

fn parse_line(line: &str) -> Result<CatalogEntry> {
    let cols: Vec<&str> = line.split('|').map(str::trim).collect();
    let bad = |why: &str| Error::Catalog(format!("{why}: `{line}`"));
    let [id, p, degree, weights, equation, domain, dynkin, fsplit, source] = cols.as_slice() else {
        return Err(bad("expected nine columns"));
    };
    let p = PConstraint::parse(p).ok_or_else(|| bad("bad characteristic"))?;
    let degree = field_or_dash(degree)
        .map(|d| d.parse::<u32>())
        .transpose()
        .map_err(|_| bad("bad degree"))?;
    let weights = field_or_dash(weights)
        .map(|w| {
            w.split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
        })
        .transpose()
        .map_err(|_| bad("bad weights"))?;
    let (equation, classes) = match equation.strip_prefix("classes=") {
        Some("inf") => (None, Some(ClassCount::Infinite)),
        Some(n) => (
            None,
            Some(ClassCount::Finite(n.parse().map_err(|_| bad("bad class count"))?)),
        ),
        None => (field_or_dash(equation).map(str::to_string), None),
    };
    let domain = match *domain {
        "-" => None,
        "D1" => Some(ParamDomain::D1),
        "D2" => Some(ParamDomain::D2),
        _ => return Err(bad("bad parameter domain")),
    };
    let expected_dynkin = field_or_dash(dynkin).map(str::parse).transpose()?;
    let expected_fsplit = match *fsplit {
        "-" => None,
        "true" => Some(true),
        "false" => Some(false),
        _ => return Err(bad("bad fsplit expectation")),
    };
    let entry = CatalogEntry {
        id: id.to_string(),
        p,
        degree,
        weights,
        equation,
        classes,
        domain,
        expected_dynkin,
        expected_fsplit,
        source: source.to_string(),
    };
    validate(&entry).map_err(|e| bad(&e.to_string()))?;
    Ok(entry)
}

fn validate(e: &CatalogEntry) -> Result<()> {
    if e.is_registry() {
        if e.classes.is_none() || e.expected_dynkin.is_none() {
            return Err(Error::Catalog("registry rows need a type and a class count".into()));
        }
        return Ok(());
    }
    let p = e
        .prime()
        .ok_or_else(|| Error::Catalog("equation rows need a single prime".into()))?;
    let weights = e
        .weights
        .as_ref()
        .ok_or_else(|| Error::Catalog("missing weights".into()))?;
    let (d, wdeg) = degree_for_weights(weights).ok_or_else(|| Error::Catalog("unsupported weights".into()))?;
    if e.degree != Some(d) {
        return Err(Error::Catalog(format!("weights give degree {d}")));
    }
    let field = FieldSpec::new(p, 1)?;
    let mut names: Vec<String> = ambient_vars(weights.len()).to_vec();
    names.extend(["a", "b", "c"].map(String::from));
    let v = vars(&names.iter().map(String::as_str).collect::<Vec<_>>());
    let mut extended = weights.clone();
    extended.extend([0, 0, 0]);
    for part in e.equation.as_deref().unwrap_or_default().split(';') {
        let g = parse(part.trim(), &v, &field)?;
        if !g.is_quasi_homogeneous(&extended, wdeg) {
            return Err(Error::Catalog(format!(
                "`{}` is not of weighted degree {wdeg}",
                part.trim()
            )));
        }
    }
    Ok(())
}

/// Parse the embedded catalog.
pub fn load_catalog() -> Result<Vec<CatalogEntry>> {
    parse_catalog(CATALOG)
}

/// Parse catalog text in the embedded format.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let entries = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_line)
        .collect::<Result<Vec<_>>>()?;
    for (i, e) in entries.iter().enumerate() {
        if entries[..i].iter().any(|o| o.id == e.id) {
            return Err(Error::Catalog(format!("duplicate id {}", e.id)));
        }
    }
    Ok(entries)
}

/// Registry types admitted in characteristic `p`.
pub fn registry_types(entries: &[CatalogEntry], p: u32) -> Vec<DynkinType> {
    entries
        .iter()
        .filter(|e| e.is_registry() && e.p.admits(p))
        .filter_map(|e| e.expected_dynkin.clone())
        .collect()
}

/// Parse `a=..,b=..` into values over `field`, in the domain's order.
pub fn parse_params(text: &str, domain: ParamDomain, field: &FieldSpec) -> Result<Vec<FieldElement>> {
    let none = vars(&[]);
    let mut out = vec![None; domain.names().len()];
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = item.split_once('=').ok_or_else(|| Error::Parse {
            pos: 0,
            msg: format!("expected name=value, got `{item}`"),
        })?;
        let slot = domain
            .names()
            .iter()
            .position(|n| *n == name.trim())
            .ok_or_else(|| Error::UnknownVariable(name.trim().to_string()))?;
        let c = parse(value.trim(), &none, field)?;
        out[slot] = Some(c.constant_term());
    }
    out.into_iter()
        .zip(domain.names())
        .map(|(v, n)| v.ok_or_else(|| Error::MissingImage(n.to_string())))
        .collect()
}

/// Options for one verification run.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub ext_bound: u32,
    /// Sample members over `F_{p^k}`: `(k, trials, seed)`.
    pub sample: Option<(u32, u32, u64)>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            ext_bound: crate::wvariety::default_ext_bound(),
            sample: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointReport {
    pub chart: String,
    pub coords: Vec<String>,
    pub field_degree: u32,
    pub orbit_size: u32,
    pub local_length: usize,
    pub ade: String,
    pub tau: usize,
    pub coindex_ambiguous: bool,
    pub graph_nodes: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub chart: String,
    pub ideal_dimension: usize,
    pub found_length: usize,
    pub degrees_searched: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FedderReport {
    pub fsplit: bool,
    pub witness: Option<String>,
    /// The complete-intersection variant, beyond the hypersurface criterion.
    pub extension: bool,
}

/// Everything computed for one surface.
#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub field: String,
    pub degree: u32,
    pub equation: String,
    pub points: Vec<PointReport>,
    pub certificates: Vec<CertificateReport>,
    pub base_point: Option<Vec<String>>,
    pub dynkin: String,
    pub rank: u32,
    pub fedder: FedderReport,
    pub sampling: Option<SamplingReport>,
}

/// Singular points, their types, the Dynkin type and Fedder's verdict.
pub fn analyze(x: &SurfaceModel, opts: &VerifyOptions) -> Result<(Analysis, DynkinType)> {
    let locus = singular_points(x, opts.ext_bound)?;
    let classified = locus
        .points
        .par_iter()
        .map(|s| classify_ade(&local_equation(x, s)?, RESOLUTION_EXT))
        .collect::<Result<Vec<_>>>()?;
    let mut comps: Vec<AdeType> = Vec::new();
    let mut points = Vec::new();
    for (s, c) in locus.points.iter().zip(&classified) {
        comps.extend(std::iter::repeat_n(c.ade, s.galois_orbit_size as usize));
        points.push(PointReport {
            chart: s.chart_var.clone(),
            coords: s.coords_text(),
            field_degree: s.field_degree,
            orbit_size: s.galois_orbit_size,
            local_length: s.local_length,
            ade: c.ade.to_string(),
            tau: c.tau,
            coindex_ambiguous: c.coindex_ambiguous,
            graph_nodes: c.graph.nodes,
        });
    }
    let dynkin = DynkinType::new(comps);
    let verdict = fedder(x);
    let gens = x.generators();
    let sampling = opts
        .sample
        .map(|(k, trials, seed)| sample_members(x, k, trials, seed))
        .transpose()?;
    let analysis = Analysis {
        field: x.field().to_string(),
        degree: x.degree(),
        equation: x.equation_text(),
        points,
        certificates: locus
            .certificates
            .iter()
            .map(|c| CertificateReport {
                chart: c.chart_var.clone(),
                ideal_dimension: c.ideal_dimension,
                found_length: c.found_length,
                degrees_searched: c.degrees_searched.clone(),
            })
            .collect(),
        base_point: locus
            .base_point
            .map(|b| b.lift.iter().map(|&e| x.field().fmt_elem(e)).collect()),
        dynkin: dynkin.to_string(),
        rank: dynkin.rank(),
        fedder: FedderReport {
            fsplit: verdict.fsplit,
            witness: verdict.witness_text(gens[0]),
            extension: verdict.extension,
        },
        sampling,
    };
    Ok((analysis, dynkin))
}

/// Result of replaying one catalog row.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub params: Option<Vec<String>>,
    /// Set for parameter families: only the listed parameters were checked.
    pub note: Option<String>,
    pub analysis: Analysis,
    pub expected_dynkin: Option<String>,
    pub dynkin_pass: Option<bool>,
    /// Rank equals `9 - degree`; checked for rows with an expected type.
    pub rank_degree_pass: Option<bool>,
    /// The type (without coindices) occurs in the registry for this `p`.
    pub registry_pass: Option<bool>,
    pub expected_fsplit: Option<bool>,
    pub fsplit_pass: Option<bool>,
    pub pass: bool,
    pub source: String,
}

/// Replay one equation row at the given parameters.
pub fn verify_entry(
    entries: &[CatalogEntry],
    e: &CatalogEntry,
    params: Option<(&FieldSpec, &[FieldElement])>,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let ctx = |err: Error| Error::Entry {
        id: e.id.clone(),
        source: Box::new(err),
    };
    let default_field = e.default_field().map_err(ctx)?;
    let (field, values): (&FieldSpec, &[FieldElement]) = params.unwrap_or((&default_field, &[]));
    if e.domain.is_some() && values.is_empty() {
        return Err(ctx(Error::MissingImage("parameters".into())));
    }
    let x = e.model(field, values).map_err(ctx)?;
    let (analysis, computed) = analyze(&x, opts).map_err(ctx)?;
    let p = field.p();
    let dynkin_pass = e.expected_dynkin.as_ref().map(|t| t.matches(&computed));
    let rank_degree_pass = e.expected_dynkin.as_ref().map(|_| computed.rank() + x.degree() == 9);
    // skipped when the catalog carries no registry rows for this p
    let registry = registry_types(entries, p);
    let registry_pass = e
        .expected_dynkin
        .as_ref()
        .filter(|_| !registry.is_empty())
        .map(|_| registry.contains(&computed.without_coindices()));
    let fsplit_pass = e.expected_fsplit.map(|b| b == analysis.fedder.fsplit);
    let pass = [dynkin_pass, rank_degree_pass, registry_pass, fsplit_pass]
        .iter()
        .all(|c| c.unwrap_or(true));
    let params = e.domain.map(|d| {
        d.names()
            .iter()
            .zip(values)
            .map(|(n, &v)| format!("{n}={}", field.fmt_elem(v)))
            .collect()
    });
    Ok(VerificationReport {
        id: e.id.clone(),
        note: params
            .as_ref()
            .map(|_| "family verified at sampled parameters only".to_string()),
        params,
        analysis,
        expected_dynkin: e.expected_dynkin.as_ref().map(DynkinType::to_string),
        dynkin_pass,
        rank_degree_pass,
        registry_pass,
        expected_fsplit: e.expected_fsplit,
        fsplit_pass,
        pass,
        source: e.source.clone(),
    })
}

/// Replay every equation row; families at `samples` parameter points of
/// their default field.
pub fn verify_catalog(
    entries: &[CatalogEntry],
    only: Option<&str>,
    samples: usize,
    opts: &VerifyOptions,
) -> Result<Vec<VerificationReport>> {
    type Job<'a> = (&'a CatalogEntry, Option<(FieldSpec, Vec<FieldElement>)>);
    let mut jobs: Vec<Job> = Vec::new();
    for e in entries
        .iter()
        .filter(|e| !e.is_registry() && only.is_none_or(|id| id == e.id))
    {
        match e.domain {
            None => jobs.push((e, None)),
            Some(d) => {
                let f = e.default_field()?;
                for v in d.sample(&f, samples) {
                    jobs.push((e, Some((f.clone(), v))));
                }
            }
        }
    }
    if let Some(id) = only {
        if jobs.is_empty() {
            return Err(Error::Catalog(format!("no equation entry with id {id}")));
        }
    }
    jobs.par_iter()
        .map(|(e, pv)| verify_entry(entries, e, pv.as_ref().map(|(f, v)| (f, v.as_slice())), opts))
        .collect()
}
