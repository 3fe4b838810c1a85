use serde::{Deserialize, Serialize};

use super::{Item, KForest, Vertex};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ForestJson {
    n: usize,
    k: usize,
    d: usize,
    squares: Vec<Vec<usize>>,
    rounds: Vec<usize>,
    edges: Vec<[String; 2]>,
    orientation: Vec<String>,
}

fn parse_index(s: &str, prefix: char) -> Option<usize> {
    let rest = s.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

fn vertex_label(v: Vertex) -> String {
    match v {
        Vertex::Square(i) => format!("S{i}"),
        Vertex::Round(e) => format!("R{e}"),
    }
}

impl KForest {
    /// Compact JSON, e.g. `{"n":3,"k":3,"d":2,"squares":[[1,2]],"rounds":[3],
    /// "edges":[["S0","R3"]],"orientation":["S0","E0"]}`.
    pub fn to_json(&self) -> String {
        let j = ForestJson {
            n: self.n,
            k: self.k,
            d: self.d,
            squares: self.squares.clone(),
            rounds: self.rounds.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| [vertex_label(a), vertex_label(b)])
                .collect(),
            orientation: self
                .orientation
                .iter()
                .map(|it| match it {
                    Item::Square(i) => format!("S{i}"),
                    Item::Edge(i) => format!("E{i}"),
                })
                .collect(),
        };
        serde_json::to_string(&j).expect("forest serialisation")
    }

    /// Parses and validates a forest. The orientation need not be canonical.
    pub fn from_json(s: &str) -> Result<KForest> {
        let j: ForestJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("forest json: {e}")))?;
        let vertex = |s: &str| -> Result<Vertex> {
            if let Some(i) = parse_index(s, 'S') {
                Ok(Vertex::Square(i))
            } else if let Some(e) = parse_index(s, 'R') {
                Ok(Vertex::Round(e))
            } else {
                Err(Error::Parse(format!("bad vertex reference {s:?}")))
            }
        };
        let mut edges = Vec::with_capacity(j.edges.len());
        for [a, b] in &j.edges {
            edges.push((vertex(a)?, vertex(b)?));
        }
        let mut orientation = Vec::with_capacity(j.orientation.len());
        for o in &j.orientation {
            if let Some(i) = parse_index(o, 'S') {
                orientation.push(Item::Square(i));
            } else if let Some(i) = parse_index(o, 'E') {
                orientation.push(Item::Edge(i));
            } else {
                return Err(Error::Parse(format!("bad orientation entry {o:?}")));
            }
        }
        let f = KForest {
            n: j.n,
            k: j.k,
            d: j.d,
            squares: j.squares,
            rounds: j.rounds,
            edges,
            orientation,
        };
        f.validate()?;
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_layout() {
        let s = r#"{"n":3,"k":3,"d":2,"squares":[[1,2]],"rounds":[3],"edges":[["S0","R3"]],"orientation":["S0","E0"]}"#;
        let f = KForest::from_json(s).unwrap();
        assert_eq!(f.to_json(), s);
    }

    #[test]
    fn rejects_unknown_reference() {
        let s = r#"{"n":3,"k":3,"d":2,"squares":[[1,2]],"rounds":[3],"edges":[["S0","X3"]],"orientation":["S0","E0"]}"#;
        assert!(matches!(KForest::from_json(s), Err(Error::Parse(_))));
    }
}
