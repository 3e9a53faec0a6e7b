//! Batch front end shared by the `spencerlab` binary and the Python bindings:
//! scene files in, JSON documents out.
//!
//! A scene file looks like
//!
//! ```text
//! # the cusp
//! [ring]
//! variables = x, y
//! weights = 2, 3
//!
//! [ideal]
//! x^3 - y^2
//!
//! [options]
//! name = cusp
//! ```
//!
//! Output documents always carry `command`, `scene`, `degree_bound`,
//! `tables`, `certificate` and `limits` (the last three possibly empty),
//! plus command-specific fields. Keys are sorted and integer keys are
//! written as strings, so identical inputs give byte-identical output.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::completion::{completed_complex, derived_completion, embedding_independence, tower_limit, LimitReport};
use crate::complexes::{build_de_rham, build_jet_complex, build_koszul, build_spencer_of_module, homology_table, ModuleKind};
use crate::dmod::{filtered_spencer, filtered_spencer_on, kashiwara_quotient, TruncatedDiffOps};
use crate::error::{Error, Result};
use crate::euler::{acyclicity_certificate, cartan_check, euler_derivation};
use crate::invariants::{jacobian_smoothness, milnor_tjurina, spencer_h0};
use crate::linalg::PresentedModule;
use crate::ring::{parse_polynomial, AffineScene, Ideal, Polynomial, WeightedRing};

pub const DEFAULT_DEGREE_BOUND: i64 = 8;

/// A parsed scene file.
#[derive(Clone, Debug)]
pub struct SceneFile {
    pub name: String,
    pub scene: AffineScene,
}

impl SceneFile {
    pub fn to_json(&self) -> Value {
        let ring = self.scene.ring();
        json!({
            "name": self.name,
            "variables": ring.names(),
            "weights": ring.weights(),
            "ideal": self.scene.ideal().generators().iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }
}

#[derive(PartialEq)]
enum Section {
    None,
    Ring,
    Ideal,
    Options,
}

fn line_error(line: usize, message: impl std::fmt::Display) -> Error {
    Error::Invalid(format!("scene line {line}: {message}"))
}

/// Parses scene text. `default_name` is used when `[options]` has no name.
pub fn parse_scene(text: &str, default_name: &str) -> Result<SceneFile> {
    let mut section = Section::None;
    let mut variables: Option<Vec<String>> = None;
    let mut weights: Option<Vec<i64>> = None;
    let mut generators: Vec<(usize, String)> = Vec::new();
    let mut name = default_name.to_string();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = match header.trim() {
                "ring" => Section::Ring,
                "ideal" => Section::Ideal,
                "options" => Section::Options,
                other => return Err(line_error(line_no, format!("unknown section [{other}]"))),
            };
            continue;
        }
        match section {
            Section::None => return Err(line_error(line_no, "content before the first section")),
            Section::Ideal => generators.push((line_no, line.to_string())),
            Section::Ring | Section::Options => {
                let (key, value) =
                    line.split_once('=').ok_or_else(|| line_error(line_no, "expected `key = value`"))?;
                let (key, value) = (key.trim(), value.trim());
                let list = || value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty());
                match (&section, key) {
                    (Section::Ring, "variables") => variables = Some(list().collect()),
                    (Section::Ring, "weights") => {
                        weights = Some(
                            list()
                                .map(|w| w.parse::<i64>().map_err(|_| line_error(line_no, format!("bad weight `{w}`"))))
                                .collect::<Result<_>>()?,
                        )
                    }
                    (Section::Options, "name") => name = value.to_string(),
                    _ => return Err(line_error(line_no, format!("unknown key `{key}`"))),
                }
            }
        }
    }
    let variables = variables.ok_or_else(|| Error::Invalid("scene has no `variables` entry".into()))?;
    let weights = weights.unwrap_or_else(|| vec![1; variables.len()]);
    let ring = WeightedRing::new(variables, weights)?;
    let mut polys = Vec::new();
    for (line_no, text) in generators {
        let p = parse_polynomial(&text, &ring).map_err(|e| line_error(line_no, e))?;
        polys.push(p);
    }
    let scene = AffineScene::new(ring.clone(), Ideal::new(&ring, polys)?)?;
    Ok(SceneFile { name, scene })
}

/// Reads and parses a scene file; the file stem is the default name.
pub fn load_scene(path: &Path) -> Result<SceneFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scene");
    parse_scene(&text, stem)
}

/// Coefficient module for `spencer --module`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpencerModule {
    Structure,
    Omega1,
    OmegaTop,
}

impl FromStr for SpencerModule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "O" => Ok(SpencerModule::Structure),
            "omega1" => Ok(SpencerModule::Omega1),
            "omega-top" => Ok(SpencerModule::OmegaTop),
            other => Err(Error::Invalid(format!("unknown module `{other}` (expected O, omega1 or omega-top)"))),
        }
    }
}

/// Complex certified by `euler-certify`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertifyComplex {
    DeRham,
    Jet(u32),
}

impl FromStr for CertifyComplex {
    type Err = Error;

    /// `derham`, `jet` (order 1) or `jetN`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "derham" => Ok(CertifyComplex::DeRham),
            "jet" => Ok(CertifyComplex::Jet(1)),
            _ => s
                .strip_prefix("jet")
                .and_then(|r| r.parse().ok())
                .map(CertifyComplex::Jet)
                .ok_or_else(|| Error::Invalid(format!("unknown complex `{s}` (expected derham, jet or jetN)"))),
        }
    }
}

/// Ideal to complete along.
#[derive(Clone, Debug)]
pub enum Along {
    /// The scene's own ideal.
    SelfIdeal,
    /// The ideal of all coordinate functions.
    Variables,
    /// The ideal of another scene file over the same ring.
    Scene(Box<SceneFile>),
}

impl Along {
    fn resolve(&self, scene: &AffineScene) -> Result<Ideal> {
        match self {
            Along::SelfIdeal => Ok(scene.ideal().clone()),
            Along::Variables => {
                let ring = scene.ring();
                Ideal::new(ring, (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect())
            }
            Along::Scene(other) => {
                if other.scene.ring() != scene.ring() {
                    return Err(Error::Invalid(format!(
                        "ideal file `{}` is over a different ring than the scene",
                        other.name
                    )));
                }
                Ok(other.scene.ideal().clone())
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum Command {
    DeRham,
    Jet { r: u32 },
    Spencer { module: SpencerModule },
    /// Defaults to the coordinate functions.
    Koszul { elements: Option<Vec<String>> },
    /// With `n`, the unit-weight affine space of that dimension replaces the scene.
    FilteredSpencer { n: Option<usize>, p: u32 },
    Kashiwara { p: u32 },
    EulerCertify { complex: CertifyComplex },
    Milnor,
    Smooth,
    SpencerH0,
    Complete { along: Along, r_max: Option<usize> },
    DerivedComplete { along: Along, r_max: Option<usize> },
    Independence { extended: Box<SceneFile>, r_max: Option<usize> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::DeRham => "derham",
            Command::Jet { .. } => "jet",
            Command::Spencer { .. } => "spencer",
            Command::Koszul { .. } => "koszul",
            Command::FilteredSpencer { .. } => "filtered-spencer",
            Command::Kashiwara { .. } => "kashiwara",
            Command::EulerCertify { .. } => "euler-certify",
            Command::Milnor => "milnor",
            Command::Smooth => "smooth",
            Command::SpencerH0 => "spencer-h0",
            Command::Complete { .. } => "complete",
            Command::DerivedComplete { .. } => "derived-complete",
            Command::Independence { .. } => "independence",
        }
    }

    fn needs_scene(&self) -> bool {
        !matches!(self, Command::FilteredSpencer { n: Some(_), .. })
    }
}

/// Stages needed so that `w * r > d` for every weight up to `bound`, plus two
/// more to confirm stabilization.
pub fn default_stages(ideal: &Ideal, bound: i64) -> usize {
    let w = ideal.generators().iter().filter_map(|g| g.homogeneous_degree().ok()).filter(|&w| w > 0).min().unwrap_or(1);
    (bound.max(0) / w) as usize + 3
}

fn lim_tables(report: &LimitReport) -> Value {
    let mut out = Map::new();
    for &i in report.indices() {
        let mut row = Map::new();
        for d in report.weights() {
            if let Some(v) = report.lim(i, d).filter(|&v| v > 0) {
                row.insert(d.to_string(), v.into());
            }
        }
        out.insert(i.to_string(), row.into());
    }
    out.into()
}

/// Runs a command. `scene` may be omitted only for `filtered-spencer --n`.
pub fn run(command: &Command, scene: Option<&SceneFile>, degree_bound: i64) -> Result<Value> {
    if degree_bound < 0 {
        return Err(Error::Invalid(format!("degree bound must be non-negative, got {degree_bound}")));
    }
    let file = match (scene, command.needs_scene()) {
        (Some(f), _) => Some(f),
        (None, false) => None,
        (None, true) => return Err(Error::Invalid(format!("`{}` needs a scene file", command.name()))),
    };
    let mut doc = Map::new();
    doc.insert("command".into(), command.name().into());
    doc.insert("scene".into(), file.map_or(Value::Null, SceneFile::to_json));
    doc.insert("degree_bound".into(), degree_bound.into());
    doc.insert("tables".into(), json!({}));
    doc.insert("certificate".into(), json!({}));
    doc.insert("limits".into(), json!({}));
    let d = degree_bound;
    let scene = || file.map(|f| &f.scene).expect("scene checked above");
    match command {
        Command::DeRham => {
            doc.insert("tables".into(), homology_table(&build_de_rham(scene())?, d)?.to_json());
        }
        Command::Jet { r } => {
            doc.insert("r".into(), (*r).into());
            doc.insert("tables".into(), homology_table(&build_jet_complex(scene(), *r)?, d)?.to_json());
        }
        Command::Spencer { module } => {
            let kind = match module {
                SpencerModule::Structure => ModuleKind::Structure,
                SpencerModule::Omega1 => ModuleKind::Forms(1),
                SpencerModule::OmegaTop => ModuleKind::Forms(scene().ring().nvars()),
            };
            doc.insert("module".into(), kind.to_string().into());
            doc.insert("tables".into(), homology_table(&build_spencer_of_module(scene(), kind)?, d)?.to_json());
        }
        Command::Koszul { elements } => {
            let ring = scene().ring();
            let elems: Vec<Polynomial> = match elements {
                Some(texts) => texts.iter().map(|t| parse_polynomial(t, ring)).collect::<Result<_>>()?,
                None => (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect(),
            };
            doc.insert("elements".into(), elems.iter().map(ToString::to_string).collect::<Vec<_>>().into());
            doc.insert("tables".into(), homology_table(&build_koszul(scene(), &elems)?, d)?.to_json());
        }
        Command::FilteredSpencer { n, p } => {
            let complex = match n {
                Some(n) => filtered_spencer(*n, *p)?,
                None => filtered_spencer_on(scene(), *p)?,
            };
            if let Some(n) = n {
                doc.insert("n".into(), (*n).into());
            }
            doc.insert("p".into(), (*p).into());
            doc.insert("tables".into(), homology_table(&complex, d)?.to_json());
        }
        Command::Kashiwara { p } => {
            let s = scene();
            let q = kashiwara_quotient(&TruncatedDiffOps::new(s.ring(), *p), s.ideal(), d)?;
            let pieces: Map<String, Value> =
                q.pieces().map(|(w, labels)| (w.to_string(), labels.to_vec().into())).collect();
            let dims: Map<String, Value> = q.pieces().map(|(w, labels)| (w.to_string(), labels.len().into())).collect();
            doc.insert("p".into(), (*p).into());
            doc.insert("tables".into(), json!({ "0": dims }));
            doc.insert("basis".into(), pieces.into());
            doc.insert("total_dim".into(), q.total_dim().into());
            doc.insert("nilpotency".into(), q.nilpotency().to_vec().into());
            doc.insert("supported".into(), q.is_supported_on_ideal().into());
        }
        Command::EulerCertify { complex } => {
            let s = scene();
            let c = match complex {
                CertifyComplex::DeRham => build_de_rham(s)?,
                CertifyComplex::Jet(r) => build_jet_complex(s, *r)?,
            };
            let xi = euler_derivation(c.scene())?;
            let cartan = cartan_check(&c, &xi, d)?;
            let cert = acyclicity_certificate(&c, &xi, d)?;
            doc.insert("complex".into(), c.name().into());
            doc.insert("field".into(), xi.to_string().into());
            doc.insert(
                "cartan".into(),
                json!({"pieces_checked": cartan.pieces_checked, "passed": cartan.passed()}),
            );
            doc.insert("tables".into(), homology_table(&c, d)?.to_json());
            doc.insert("certificate".into(), cert.to_json());
        }
        Command::Milnor => {
            let f = match scene().ideal().generators() {
                [f] => f,
                gens => {
                    return Err(Error::Invalid(format!(
                        "milnor needs a hypersurface (one generator), got {}",
                        gens.len()
                    )))
                }
            };
            merge(&mut doc, milnor_tjurina(f)?.to_json());
        }
        Command::Smooth => merge(&mut doc, jacobian_smoothness(scene())?.to_json()),
        Command::SpencerH0 => {
            let report = spencer_h0(scene(), d)?;
            let mut extra = report.to_json();
            let table = extra.as_object_mut().and_then(|o| o.remove("table")).unwrap_or_default();
            doc.insert("tables".into(), json!({ "0": table }));
            merge(&mut doc, extra);
        }
        Command::Complete { along, r_max } => {
            let s = scene();
            let ideal = along.resolve(s)?;
            let ambient = s.with_ideal(Ideal::new(s.ring(), Vec::new())?)?;
            let stages = r_max.unwrap_or_else(|| default_stages(&ideal, d));
            let tower = completed_complex(&build_de_rham(&ambient)?, &ideal, stages)?;
            let report = tower_limit(&tower, d)?;
            doc.insert("along".into(), ideal_json(&ideal));
            doc.insert("stages".into(), stages.into());
            doc.insert("tables".into(), lim_tables(&report));
            doc.insert("limits".into(), report.to_json());
        }
        Command::DerivedComplete { along, r_max } => {
            let s = scene();
            let ideal = along.resolve(s)?;
            let stages = r_max.unwrap_or_else(|| default_stages(&ideal, d));
            let derived = derived_completion(&PresentedModule::structure_sheaf(s), &ideal, stages, d)?;
            doc.insert("along".into(), ideal_json(&ideal));
            doc.insert("stages".into(), stages.into());
            doc.insert("tables".into(), lim_tables(&derived.limits));
            doc.insert("limits".into(), derived.limits.to_json());
        }
        Command::Independence { extended, r_max } => {
            let s = scene();
            let stages = r_max.unwrap_or_else(|| {
                default_stages(s.ideal(), d).max(default_stages(extended.scene.ideal(), d))
            });
            let report = embedding_independence(s, &extended.scene, stages, d)?;
            doc.insert("extended_scene".into(), extended.to_json());
            doc.insert("stages".into(), stages.into());
            doc.insert("independence".into(), report.to_json());
        }
    }
    Ok(Value::Object(doc))
}

fn ideal_json(ideal: &Ideal) -> Value {
    ideal.generators().iter().map(ToString::to_string).collect::<Vec<_>>().into()
}

fn merge(doc: &mut Map<String, Value>, extra: Value) {
    if let Value::Object(extra) = extra {
        doc.extend(extra);
    }
}

/// Canonical serialization: sorted keys, two-space indentation, trailing newline.
pub fn to_json_string(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("json values always serialize");
    s.push('\n');
    s
}

/// Human-readable rendering of a result document.
pub fn render_text(doc: &Value) -> String {
    let mut out = String::new();
    let get = |k: &str| doc.get(k).cloned().unwrap_or(Value::Null);
    let scene_name = get("scene").get("name").and_then(Value::as_str).unwrap_or("-").to_string();
    let _ = writeln!(out, "{} on {} (degree bound {})", get("command").as_str().unwrap_or("?"), scene_name, get("degree_bound"));
    if let Some(tables) = doc.get("tables").and_then(Value::as_object) {
        let mut rows: Vec<(i64, &Map<String, Value>)> = tables
            .iter()
            .filter_map(|(i, row)| Some((i.parse().ok()?, row.as_object()?)))
            .collect();
        rows.sort_by_key(|(i, _)| *i);
        for (i, row) in rows {
            let mut cells: Vec<(i64, &Value)> = row.iter().filter_map(|(w, v)| Some((w.parse().ok()?, v))).collect();
            cells.sort_by_key(|(w, _)| *w);
            let body = if cells.is_empty() {
                "0".to_string()
            } else {
                cells.iter().map(|(w, v)| format!("w{w}:{v}")).collect::<Vec<_>>().join("  ")
            };
            let _ = writeln!(out, "  [{i}] {body}");
        }
    }
    if let Some(map) = doc.as_object() {
        for (k, v) in map {
            let skip = ["command", "scene", "degree_bound", "tables"].contains(&k.as_str())
                || v.as_object().is_some_and(Map::is_empty);
            if !skip {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUSP: &str = "# cusp\n[ring]\nvariables = x, y\nweights = 2, 3\n\n[ideal]\nx^3 - y^2\n[options]\nname = cusp\n";

    #[test]
    fn parses_scene() {
        let f = parse_scene(CUSP, "fallback").unwrap();
        assert_eq!(f.name, "cusp");
        assert_eq!(f.scene.ring().weights(), &[2, 3]);
        assert_eq!(f.scene.ideal().generators().len(), 1);
        let plain = parse_scene("[ring]\nvariables = x, y\n", "a2").unwrap();
        assert_eq!(plain.name, "a2");
        assert_eq!(plain.scene.ring().weights(), &[1, 1]);
        assert!(plain.scene.ideal().generators().is_empty());
    }

    #[test]
    fn scene_errors() {
        assert!(parse_scene("x^2\n", "s").is_err());
        assert!(parse_scene("[ring]\nvariables = x\n[wrong]\n", "s").is_err());
        assert!(parse_scene("[ring]\nvariables = x\nweights = 0\n", "s").is_err());
        assert!(parse_scene("[ring]\nvariables = x, y\nweights = 1, 1\n[ideal]\nx + y^2\n", "s").is_err());
        let err = parse_scene("[ring]\nvariables = x\n[ideal]\nx + z\n", "s").unwrap_err();
        assert!(err.to_string().contains("line 4"), "{err}");
    }

    #[test]
    fn milnor_document() {
        let f = parse_scene(CUSP, "c").unwrap();
        let doc = run(&Command::Milnor, Some(&f), 8).unwrap();
        assert_eq!(doc["mu"], json!(2));
        assert_eq!(doc["tau"], json!(2));
        assert_eq!(doc["basis"], json!(["1", "x"]));
        for key in ["command", "scene", "degree_bound", "tables", "certificate", "limits"] {
            assert!(doc.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn derham_document() {
        let f = parse_scene("[ring]\nvariables = x, y\n", "a2").unwrap();
        let doc = run(&Command::DeRham, Some(&f), 8).unwrap();
        assert_eq!(doc["tables"], json!({"0": {"0": 1}, "1": {}, "2": {}}));
        let text = render_text(&doc);
        assert!(text.contains("[0] w0:1"), "{text}");
    }

    #[test]
    fn smooth_empty_ideal() {
        let f = parse_scene("[ring]\nvariables = x, y, z\n", "a3").unwrap();
        let doc = run(&Command::Smooth, Some(&f), 8).unwrap();
        assert_eq!(doc["smooth"], json!(true));
    }

    #[test]
    fn determinism() {
        let f = parse_scene(CUSP, "c").unwrap();
        let a = to_json_string(&run(&Command::SpencerH0, Some(&f), 6).unwrap());
        let b = to_json_string(&run(&Command::SpencerH0, Some(&f), 6).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn parses_options() {
        assert_eq!("jet2".parse::<CertifyComplex>().unwrap(), CertifyComplex::Jet(2));
        assert_eq!("jet".parse::<CertifyComplex>().unwrap(), CertifyComplex::Jet(1));
        assert!("other".parse::<CertifyComplex>().is_err());
        assert_eq!("omega-top".parse::<SpencerModule>().unwrap(), SpencerModule::OmegaTop);
        assert!(run(&Command::Milnor, None, 8).is_err());
        assert!(run(&Command::FilteredSpencer { n: Some(1), p: 2 }, None, 4).is_ok());
    }

    #[test]
    fn certifies_jets() {
        let f = parse_scene(CUSP, "c").unwrap();
        let doc = run(&Command::EulerCertify { complex: CertifyComplex::Jet(1) }, Some(&f), 4).unwrap();
        assert_eq!(doc["certificate"]["valid"], json!(true));
        assert_eq!(doc["cartan"]["passed"], json!(true));
    }
}
