//! TOML instance and solution files.
//!
//! Instance files carry `name`, `directed`, `mode` (`"ftp"` with `k` or
//! `"ftf"` with `ell`), `source`, `sink`, `vertices` and `arcs`; arc ids are
//! positions in `arcs`. Leading `# key = value` comment lines hold
//! generator annotations. Weights are integers or `"p/q"` strings.

use std::fmt::Write as _;
use std::str::FromStr;

use ftnet_core::{Arc, ArcId, Instance, InstanceError, Mode, Weight};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("parse error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> FormatError {
    FormatError::Invalid(msg.into())
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
enum WeightText {
    Int(i64),
    Text(String),
}

impl WeightText {
    fn to_weight(&self) -> Result<Weight, FormatError> {
        match self {
            WeightText::Int(n) => Ok(Weight::from_integer(*n)),
            WeightText::Text(s) => Weight::from_str(s.trim()).map_err(|_| invalid(format!("bad weight '{s}'"))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcRecord {
    tail: String,
    head: String,
    weight: WeightText,
    #[serde(default)]
    vulnerable: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceRecord {
    #[serde(default)]
    name: String,
    #[serde(default = "yes")]
    directed: bool,
    mode: String,
    k: Option<usize>,
    ell: Option<usize>,
    source: String,
    sink: String,
    vertices: Vec<String>,
    #[serde(default)]
    arcs: Vec<ArcRecord>,
}

fn yes() -> bool {
    true
}

/// An instance together with its annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub instance: Instance,
    pub annotations: Vec<(String, String)>,
}

fn leading_annotations(text: &str) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some(body) = line.strip_prefix('#') else { break };
        if let Some((k, v)) = body.split_once('=') {
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
    }
    out
}

pub fn parse_instance(text: &str) -> Result<Document, FormatError> {
    let rec: InstanceRecord = toml::from_str(text)?;
    let mode = match (rec.mode.as_str(), rec.k, rec.ell) {
        ("ftp", Some(k), None) => Mode::Ftp { k },
        ("ftf", None, Some(ell)) => Mode::Ftf { ell },
        ("ftp", None, _) => return Err(invalid("mode ftp needs k")),
        ("ftf", _, None) => return Err(invalid("mode ftf needs ell")),
        ("ftp" | "ftf", _, _) => return Err(invalid("give exactly one of k and ell")),
        (other, _, _) => return Err(invalid(format!("unknown mode '{other}'"))),
    };
    let index = |name: &str| -> Result<usize, FormatError> {
        rec.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| InstanceError::UnknownVertex { name: name.to_string() }.into())
    };
    let mut arcs = Vec::with_capacity(rec.arcs.len());
    for a in &rec.arcs {
        arcs.push(Arc { tail: index(&a.tail)?, head: index(&a.head)?, weight: a.weight.to_weight()?, vulnerable: a.vulnerable });
    }
    let (source, sink) = (index(&rec.source)?, index(&rec.sink)?);
    let instance = Instance::new(rec.name, rec.directed, mode, rec.vertices, arcs, source, sink)?;
    Ok(Document { instance, annotations: leading_annotations(text) })
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn weight_text(w: &Weight) -> String {
    if w.is_integer() {
        w.numer().to_string()
    } else {
        quote(&w.to_string())
    }
}

/// Canonical text: fixed key order, arcs in id order, one arc per line.
pub fn serialize_instance(doc: &Document) -> String {
    let mut out = String::new();
    for (k, v) in &doc.annotations {
        writeln!(out, "# {k} = {v}").unwrap();
    }
    out.push_str(&canonical_body(&doc.instance));
    out
}

/// The canonical form without annotations, which is what gets fingerprinted.
pub fn canonical_body(inst: &Instance) -> String {
    let mut out = String::new();
    let name = |v: usize| quote(&inst.vertices()[v]);
    writeln!(out, "name = {}", quote(inst.name())).unwrap();
    writeln!(out, "directed = {}", inst.directed()).unwrap();
    match inst.mode() {
        Mode::Ftp { k } => writeln!(out, "mode = \"ftp\"\nk = {k}").unwrap(),
        Mode::Ftf { ell } => writeln!(out, "mode = \"ftf\"\nell = {ell}").unwrap(),
    }
    writeln!(out, "source = {}", name(inst.source())).unwrap();
    writeln!(out, "sink = {}", name(inst.sink())).unwrap();
    let vs: Vec<String> = (0..inst.vertex_count()).map(name).collect();
    writeln!(out, "vertices = [{}]", vs.join(", ")).unwrap();
    out.push_str("arcs = [\n");
    for a in inst.arcs() {
        writeln!(
            out,
            "  {{ tail = {}, head = {}, weight = {}, vulnerable = {} }},",
            name(a.tail),
            name(a.head),
            weight_text(&a.weight),
            a.vulnerable
        )
        .unwrap();
    }
    out.push_str("]\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub arcs: Vec<ArcId>,
    pub cost: Weight,
    pub feasible: bool,
    pub witness_scenario: Option<Vec<ArcId>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolutionRecord {
    arcs: Vec<ArcId>,
    cost: WeightText,
    feasible: bool,
    witness_scenario: Option<Vec<ArcId>>,
}

pub fn parse_solution(text: &str) -> Result<Solution, FormatError> {
    let rec: SolutionRecord = toml::from_str(text)?;
    Ok(Solution { arcs: rec.arcs, cost: rec.cost.to_weight()?, feasible: rec.feasible, witness_scenario: rec.witness_scenario })
}

/// A missing witness is written as an absent key, since TOML has no null.
pub fn serialize_solution(sol: &Solution) -> String {
    let ids = |v: &[ArcId]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ");
    let mut out = format!(
        "arcs = [{}]\ncost = {}\nfeasible = {}\n",
        ids(&sol.arcs),
        weight_text(&sol.cost),
        sol.feasible
    );
    if let Some(w) = &sol.witness_scenario {
        writeln!(out, "witness_scenario = [{}]", ids(w)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"name = "one"
directed = true
mode = "ftp"
k = 0
source = "s"
sink = "t"
vertices = ["s", "t"]
arcs = [
  { tail = "s", head = "t", weight = 1, vulnerable = false },
]
"#;

    #[test]
    fn minimal_round_trip_is_identity() {
        let doc = parse_instance(MINIMAL).unwrap();
        assert_eq!(doc.instance.arcs().len(), 1);
        assert_eq!(serialize_instance(&doc), MINIMAL);
    }

    #[test]
    fn negative_weight_is_rejected() {
        let text = MINIMAL.replace("weight = 1", "weight = -1");
        let err = parse_instance(&text).unwrap_err().to_string();
        assert!(err.contains("negative weight"), "{err}");
    }

    #[test]
    fn unknown_vertex_is_rejected() {
        let text = MINIMAL.replace("head = \"t\"", "head = \"x\"");
        let err = parse_instance(&text).unwrap_err().to_string();
        assert!(err.contains("unknown vertex"), "{err}");
    }

    #[test]
    fn rational_weights_and_annotations() {
        let text = format!("# fractional_opt = 5/4\n{}", MINIMAL.replace("weight = 1", "weight = \"6/4\""));
        let doc = parse_instance(&text).unwrap();
        assert_eq!(doc.instance.weight(0), Weight::new(3, 2));
        assert_eq!(doc.annotations, vec![("fractional_opt".to_string(), "5/4".to_string())]);
        let out = serialize_instance(&doc);
        assert!(out.contains("weight = \"3/2\""));
        assert_eq!(parse_instance(&out).unwrap(), doc);
    }

    #[test]
    fn mode_needs_its_parameter() {
        assert!(parse_instance(&MINIMAL.replace("k = 0", "ell = 1")).is_err());
        assert!(parse_instance(&MINIMAL.replace("mode = \"ftp\"", "mode = \"ftf\"")).is_err());
        let ftf = MINIMAL.replace("mode = \"ftp\"\nk = 0", "mode = \"ftf\"\nell = 2");
        assert_eq!(parse_instance(&ftf).unwrap().instance.ell(), Some(2));
    }

    #[test]
    fn solution_round_trip() {
        let sol = Solution { arcs: vec![0, 3], cost: Weight::new(7, 2), feasible: false, witness_scenario: Some(vec![3]) };
        assert_eq!(parse_solution(&serialize_solution(&sol)).unwrap(), sol);
        let none = Solution { witness_scenario: None, feasible: true, ..sol };
        let text = serialize_solution(&none);
        assert!(!text.contains("witness"));
        assert_eq!(parse_solution(&text).unwrap(), none);
    }
}
