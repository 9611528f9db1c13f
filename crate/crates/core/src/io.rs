//! JSON model files.
//!
//! Both formats are written canonically: object keys sorted, agent lists in
//! universe order, two-space indentation with arrays of plain values kept
//! on one line, and a trailing newline. Loading a
//! canonical file and saving it again reproduces it byte for byte.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{AgentPattern, AgentSet, Universe, UniverseError};
use crate::formula::Prop;
use crate::kripke::{KripkeError, PreModel, Relations};
use crate::simplicial::{Complex, Face, ModelError, Simplex, SimplicialModel};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error("unknown agent {0:?}")]
    UnknownAgent(String),
    #[error("empty agent list")]
    EmptyGroup,
    #[error("duplicate agent {0:?} in a list")]
    DuplicateAgent(String),
    #[error("unknown world {0:?}")]
    UnknownWorld(String),
    #[error("invalid proposition name {0:?}")]
    BadProp(String),
    #[error("unknown mode {0:?}, expected \"generated\" or \"explicit\"")]
    BadMode(String),
    #[error(transparent)]
    Simplicial(#[from] ModelError),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
}

/// Either kind of model, as told apart by the file's keys.
#[derive(Debug, Clone)]
pub enum AnyModel {
    Simplicial(SimplicialModel),
    Kripke(PreModel),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimplicialFile {
    agents: Vec<String>,
    simplices: Vec<SimplexFile>,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimplexFile {
    faces: Vec<(Vec<String>, u32)>,
    name: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KripkeFile {
    agents: Vec<String>,
    #[serde(default)]
    edges: Vec<EdgeFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    interior: Option<Vec<String>>,
    mode: String,
    #[serde(default)]
    selfloops: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
    worlds: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    pairs: Vec<(String, String)>,
    pattern: Vec<Vec<String>>,
}

fn read_set(u: &Universe, names: &[String]) -> Result<AgentSet, IoError> {
    if names.is_empty() {
        return Err(IoError::EmptyGroup);
    }
    let mut set = AgentSet::default();
    for n in names {
        let a = u.index(n).ok_or_else(|| IoError::UnknownAgent(n.clone()))?;
        if set.contains(a) {
            return Err(IoError::DuplicateAgent(n.clone()));
        }
        set = set.union(AgentSet::single(a));
    }
    Ok(set)
}

fn write_set(u: &Universe, set: AgentSet) -> Vec<String> {
    u.set_names(set).into_iter().map(str::to_string).collect()
}

fn read_pattern(u: &Universe, groups: &[Vec<String>]) -> Result<AgentPattern, IoError> {
    let sets = groups.iter().map(|g| read_set(u, g)).collect::<Result<Vec<_>, _>>()?;
    Ok(AgentPattern::new(sets))
}

fn write_pattern(u: &Universe, g: &AgentPattern) -> Vec<Vec<String>> {
    g.groups().iter().map(|&s| write_set(u, s)).collect()
}

fn read_props(names: &[String]) -> Result<BTreeSet<Prop>, IoError> {
    names
        .iter()
        .map(|n| Prop::new(n).map_err(|_| IoError::BadProp(n.clone())))
        .collect()
}

fn write_props(props: &BTreeSet<Prop>) -> Vec<String> {
    props.iter().map(|p| p.as_str().to_string()).collect()
}

fn to_canonical<T: Serialize>(file: &T) -> String {
    let value = serde_json::to_value(file).expect("model files always serialize");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

fn has_object(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Object(_) => true,
        serde_json::Value::Array(items) => items.iter().any(has_object),
        _ => false,
    }
}

/// Objects one key per line, sorted; arrays without objects inside on one
/// line.
fn write_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(item, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if has_object(v) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        _ => out.push_str(&v.to_string()),
    }
}

pub fn parse_simplicial(text: &str) -> Result<SimplicialModel, IoError> {
    let file: SimplicialFile = serde_json::from_str(text)?;
    let u = Universe::new(&file.agents)?;
    let mut simplices = Vec::with_capacity(file.simplices.len());
    for s in &file.simplices {
        let faces = s
            .faces
            .iter()
            .map(|(agents, color)| Ok(Face::new(read_set(&u, agents)?, *color)))
            .collect::<Result<Vec<_>, IoError>>()?;
        simplices.push(Simplex::new(s.name.clone(), faces));
    }
    let valuation = file
        .valuation
        .iter()
        .map(|(w, ps)| Ok((w.clone(), read_props(ps)?)))
        .collect::<Result<BTreeMap<_, _>, IoError>>()?;
    Ok(SimplicialModel::new(Complex::new(u, simplices), &valuation)?)
}

pub fn simplicial_to_json(m: &SimplicialModel) -> String {
    let u = &m.complex.universe;
    let file = SimplicialFile {
        agents: u.names().to_vec(),
        simplices: m
            .simplices()
            .iter()
            .map(|s| SimplexFile {
                faces: s.faces.iter().map(|f| (write_set(u, f.agents), f.color)).collect(),
                name: s.name.clone(),
            })
            .collect(),
        valuation: m
            .simplices()
            .iter()
            .zip(&m.valuation)
            .map(|(s, v)| (s.name.clone(), write_props(v)))
            .collect(),
    };
    to_canonical(&file)
}

pub fn parse_kripke(text: &str) -> Result<PreModel, IoError> {
    let file: KripkeFile = serde_json::from_str(text)?;
    let u = Universe::new(&file.agents)?;
    let world = |name: &str| {
        file.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| IoError::UnknownWorld(name.to_string()))
    };
    let mut edges: Vec<(usize, usize, AgentPattern)> = Vec::new();
    for e in &file.edges {
        let g = read_pattern(&u, &e.pattern)?;
        for (w, v) in &e.pairs {
            edges.push((world(w)?, world(v)?, g.clone()));
        }
    }
    for (w, groups) in &file.selfloops {
        let i = world(w)?;
        for b in groups {
            edges.push((i, i, AgentPattern::of(read_set(&u, b)?)));
        }
    }
    let mut valuation = vec![BTreeSet::new(); file.worlds.len()];
    for (w, ps) in &file.valuation {
        valuation[world(w)?] = read_props(ps)?;
    }
    let interior = match &file.interior {
        Some(names) => {
            let mut flags = vec![false; file.worlds.len()];
            for n in names {
                flags[world(n)?] = true;
            }
            Some(flags)
        }
        None => None,
    };
    let mut m = match file.mode.as_str() {
        "generated" => PreModel::generated(u, file.worlds.clone(), edges, valuation)?,
        "explicit" => {
            let mut per: BTreeMap<AgentPattern, Vec<(usize, usize)>> = BTreeMap::new();
            for (w, v, g) in edges {
                per.entry(g).or_default().push((w, v));
            }
            PreModel::explicit(u, file.worlds.clone(), per, valuation)?
        }
        other => return Err(IoError::BadMode(other.to_string())),
    };
    m.interior = interior;
    Ok(m)
}

pub fn kripke_to_json(m: &PreModel) -> String {
    let u = &m.universe;
    let name = |i: usize| m.worlds[i].clone();
    let mut by_pattern: BTreeMap<AgentPattern, Vec<(usize, usize)>> = BTreeMap::new();
    let mut selfloops: BTreeMap<String, Vec<Vec<String>>> = BTreeMap::new();
    let mode = match &m.relations {
        Relations::Generated(edges) => {
            for e in edges {
                if e.from == e.to && e.pattern.len() == 1 {
                    selfloops
                        .entry(name(e.from))
                        .or_default()
                        .push(write_set(u, e.pattern.groups()[0]));
                } else {
                    by_pattern.entry(e.pattern.clone()).or_default().push((e.from, e.to));
                }
            }
            "generated"
        }
        Relations::Explicit(map) => {
            // Each class as a star around its first member.
            for (g, r) in map {
                let pairs = by_pattern.entry(g.clone()).or_default();
                for class in r.classes() {
                    pairs.extend(class.iter().map(|&v| (class[0], v)));
                }
            }
            "explicit"
        }
    };
    for loops in selfloops.values_mut() {
        loops.sort_by_key(|names| u.set(names.iter()).expect("names come from the universe"));
    }
    let edges = by_pattern
        .into_iter()
        .map(|(g, mut pairs)| {
            pairs.sort_unstable();
            pairs.dedup();
            EdgeFile {
                pairs: pairs.into_iter().map(|(w, v)| (name(w), name(v))).collect(),
                pattern: write_pattern(u, &g),
            }
        })
        .collect();
    let file = KripkeFile {
        agents: u.names().to_vec(),
        edges,
        interior: m.interior.as_ref().map(|flags| {
            (0..m.len()).filter(|&i| flags[i]).map(name).collect()
        }),
        mode: mode.to_string(),
        selfloops,
        valuation: (0..m.len()).map(|i| (name(i), write_props(&m.valuation[i]))).collect(),
        worlds: m.worlds.clone(),
    };
    to_canonical(&file)
}

/// Parses either format, deciding by the presence of `simplices`.
pub fn parse_model(text: &str) -> Result<AnyModel, IoError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("simplices").is_some() {
        Ok(AnyModel::Simplicial(parse_simplicial(text)?))
    } else {
        Ok(AnyModel::Kripke(parse_kripke(text)?))
    }
}

pub fn model_to_json(m: &AnyModel) -> String {
    match m {
        AnyModel::Simplicial(s) => simplicial_to_json(s),
        AnyModel::Kripke(k) => kripke_to_json(k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUEUE: &str = r#"{"agents":["P","Q"],"simplices":[
        {"name":"s","faces":[[["P","Q"],0],[["P"],0],[["Q"],0]]},
        {"name":"t","faces":[[["Q","P"],1],[["P"],0],[["Q"],0]]}],
        "valuation":{"s":["p"]}}"#;

    #[test]
    fn simplicial_round_trip() {
        let m = parse_simplicial(QUEUE).unwrap();
        assert_eq!(m.simplices()[1].color_of(m.complex.universe.full()), Some(1));
        let text = simplicial_to_json(&m);
        assert!(text.ends_with("}\n"));
        let again = parse_simplicial(&text).unwrap();
        assert_eq!(again, m);
        assert_eq!(simplicial_to_json(&again), text);
    }

    #[test]
    fn simplicial_errors() {
        let bad_agent = QUEUE.replace(r#"[["P"],0]"#, r#"[["R"],0]"#);
        assert!(matches!(parse_simplicial(&bad_agent), Err(IoError::UnknownAgent(a)) if a == "R"));
        let missing = QUEUE.replace(r#",[["Q"],0]]}"#, "]}");
        assert!(matches!(parse_simplicial(&missing), Err(IoError::Simplicial(_))));
        let extra = QUEUE.replace(r#""agents""#, r#""colour":1,"agents""#);
        assert!(matches!(parse_simplicial(&extra), Err(IoError::Json(_))));
        assert!(matches!(parse_simplicial("{"), Err(IoError::Json(_))));
    }

    const FIG: &str = r#"{"agents":["a","b"],"worlds":["w1","w2","w3"],"mode":"generated",
        "edges":[{"pattern":[["a"],["b"]],"pairs":[["w2","w1"]]},{"pattern":[["b"]],"pairs":[["w2","w3"],["w1","w3"]]}],
        "selfloops":{"w1":[["a","b"]],"w2":[["a","b"]],"w3":[["b","a"]]},
        "valuation":{"w1":["p"],"w3":["q"]}}"#;

    #[test]
    fn kripke_round_trip() {
        let m = parse_kripke(FIG).unwrap();
        assert!(m.is_generated());
        assert!(m.equiv(0, 0));
        let text = kripke_to_json(&m);
        let again = parse_kripke(&text).unwrap();
        assert_eq!(kripke_to_json(&again), text);
        assert_eq!(again.valuation, m.valuation);
        let g = m.universe.parse_pattern("a,b").unwrap();
        use crate::semantics::Frame;
        assert_eq!(again.relation(&g), m.relation(&g));
    }

    #[test]
    fn explicit_round_trip() {
        let text = FIG.replace("generated", "explicit");
        let m = parse_kripke(&text).unwrap();
        assert!(!m.is_generated());
        let out = kripke_to_json(&m);
        assert_eq!(kripke_to_json(&parse_kripke(&out).unwrap()), out);
    }

    #[test]
    fn interior_round_trip() {
        let mut m = parse_kripke(FIG).unwrap();
        m.interior = Some(vec![true, false, true]);
        let text = kripke_to_json(&m);
        assert!(text.contains("\"interior\""));
        assert_eq!(parse_kripke(&text).unwrap().interior, m.interior);
    }

    #[test]
    fn kripke_errors() {
        assert!(matches!(parse_kripke(&FIG.replace("generated", "lazy")), Err(IoError::BadMode(_))));
        assert!(matches!(
            parse_kripke(&FIG.replace(r#"["w2","w3"]"#, r#"["w2","w9"]"#)),
            Err(IoError::UnknownWorld(w)) if w == "w9"
        ));
        assert!(matches!(parse_kripke(&FIG.replace(r#"[["b"]]"#, "[]")), Err(IoError::Kripke(_))));
        assert!(matches!(parse_kripke(&FIG.replace(r#"["q"]"#, r#"["Q!"]"#)), Err(IoError::BadProp(_))));
    }

    #[test]
    fn detects_kind() {
        assert!(matches!(parse_model(QUEUE), Ok(AnyModel::Simplicial(_))));
        assert!(matches!(parse_model(FIG), Ok(AnyModel::Kripke(_))));
    }
}
