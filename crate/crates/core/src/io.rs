//! JSON encodings of coloured graphs.
//!
//! Two graph layouts are accepted:
//!
//! ```text
//! {"n": 3, "r": 2, "edges": [[0,1,0],[0,2,1],[1,2,0]]}
//! {"n": 3, "r": 2, "rows": ["01", "0"]}
//! ```
//!
//! In the compact layout `rows[u]` lists the colours of `(u, v)` for
//! `v = u+1 .. n-1`, one digit each, so it needs `r <= 10`. Unknown top-level
//! keys (such as an embedded run manifest) are ignored.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::census::BipartiteColouring;
use crate::error::{Error, Result};
use crate::graph::{Colour, ColouredCompleteGraph};

pub fn graph_to_json(g: &ColouredCompleteGraph, compact: bool) -> Value {
    if compact && g.r() <= 10 {
        let rows: Vec<String> = (0..g.n())
            .map(|u| {
                ((u + 1)..g.n())
                    .map(|v| char::from(b'0' + g.colour(u, v)))
                    .collect()
            })
            .collect();
        json!({"n": g.n(), "r": g.r(), "rows": rows})
    } else {
        let edges: Vec<[usize; 3]> = g.edges().map(|(u, v, c)| [u, v, c as usize]).collect();
        json!({"n": g.n(), "r": g.r(), "edges": edges})
    }
}

fn field_usize(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| Error::InvalidGraph(format!("missing or non-integer field {key:?}")))
}

pub fn graph_from_json(value: &Value) -> Result<ColouredCompleteGraph> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::InvalidGraph("expected a JSON object".into()))?;
    let n = field_usize(obj, "n")?;
    let r = field_usize(obj, "r")?;
    if r > 254 {
        return Err(Error::InvalidGraph(format!("r = {r} is too large")));
    }
    let r = r as u8;
    if let Some(edges) = obj.get("edges") {
        let edges = edges
            .as_array()
            .ok_or_else(|| Error::InvalidGraph("\"edges\" must be an array".into()))?;
        let mut list = Vec::with_capacity(edges.len());
        for e in edges {
            let triple = e
                .as_array()
                .filter(|a| a.len() == 3)
                .and_then(|a| {
                    let u = a[0].as_u64()?;
                    let v = a[1].as_u64()?;
                    let c = a[2].as_u64()?;
                    Some((u as usize, v as usize, c))
                })
                .ok_or_else(|| Error::InvalidGraph(format!("malformed edge {e}")))?;
            if triple.2 >= r as u64 {
                return Err(Error::InvalidGraph(format!(
                    "edge ({},{}) has colour {}, but r = {r}",
                    triple.0, triple.1, triple.2
                )));
            }
            list.push((triple.0, triple.1, triple.2 as Colour));
        }
        ColouredCompleteGraph::from_edges(n, r, &list)
    } else if let Some(rows) = obj.get("rows") {
        let rows = rows
            .as_array()
            .ok_or_else(|| Error::InvalidGraph("\"rows\" must be an array".into()))?;
        if rows.len() != n && !(rows.len() + 1 == n && n > 0) {
            return Err(Error::InvalidGraph(format!("expected {n} rows, got {}", rows.len())));
        }
        let mut list = Vec::new();
        for (u, row) in rows.iter().enumerate() {
            let s = row
                .as_str()
                .ok_or_else(|| Error::InvalidGraph(format!("row {u} is not a string")))?;
            if s.len() != n - 1 - u {
                return Err(Error::InvalidGraph(format!(
                    "row {u} has {} entries, expected {}",
                    s.len(),
                    n - 1 - u
                )));
            }
            for (k, ch) in s.chars().enumerate() {
                let c = ch
                    .to_digit(10)
                    .ok_or_else(|| Error::InvalidGraph(format!("row {u}: bad digit {ch:?}")))?;
                list.push((u, u + 1 + k, c as u64));
            }
        }
        let mut edges = Vec::with_capacity(list.len());
        for (u, v, c) in list {
            if c >= r as u64 {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) has colour {c}, but r = {r}")));
            }
            edges.push((u, v, c as Colour));
        }
        ColouredCompleteGraph::from_edges(n, r, &edges)
    } else {
        Err(Error::InvalidGraph("expected an \"edges\" or \"rows\" field".into()))
    }
}

/// `{"kind": "bipartite", "x": [...], "y": [...], "rows": [...]}` where
/// `rows[i]` holds the colours from the `i`-th vertex of `x` to each of `y`.
pub fn bipartite_to_json(b: &BipartiteColouring) -> Value {
    let rows: Vec<String> = (0..b.x().len())
        .map(|i| (0..b.y().len()).map(|j| char::from(b'0' + b.colour(i, j))).collect())
        .collect();
    json!({"kind": "bipartite", "x": b.x(), "y": b.y(), "rows": rows})
}

pub fn is_bipartite_json(value: &Value) -> bool {
    value.get("kind").and_then(Value::as_str) == Some("bipartite")
}

pub fn bipartite_from_json(value: &Value) -> Result<BipartiteColouring> {
    let bad = |what: &str| Error::InvalidGraph(format!("bipartite colouring: {what}"));
    let side = |key: &str| -> Result<Vec<usize>> {
        value
            .get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| bad(&format!("missing {key:?}")))?
            .iter()
            .map(|v| v.as_u64().map(|v| v as usize).ok_or_else(|| bad("non-integer vertex")))
            .collect()
    };
    let (x, y) = (side("x")?, side("y")?);
    let rows = value.get("rows").and_then(Value::as_array).ok_or_else(|| bad("missing \"rows\""))?;
    if rows.len() != x.len() {
        return Err(bad("one row per x vertex required"));
    }
    let mut colours = Vec::with_capacity(x.len() * y.len());
    for row in rows {
        let s = row.as_str().ok_or_else(|| bad("row is not a string"))?;
        if s.chars().count() != y.len() {
            return Err(bad("row length differs from |y|"));
        }
        for ch in s.chars() {
            match ch {
                '0' | '1' => colours.push(ch as u8 - b'0'),
                _ => return Err(bad(&format!("bad colour digit {ch:?}"))),
            }
        }
    }
    BipartiteColouring::new(x, y, colours)
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_graph(path: &Path) -> Result<ColouredCompleteGraph> {
    let text = std::fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&text)?;
    graph_from_json(&value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_layouts_load_the_same_graph() {
        let a = serde_json::json!({"n": 3, "r": 2, "edges": [[0,1,0],[0,2,1],[1,2,0]]});
        let b = serde_json::json!({"n": 3, "r": 2, "rows": ["01", "0", ""], "manifest": {}});
        assert_eq!(graph_from_json(&a).unwrap(), graph_from_json(&b).unwrap());
    }

    #[test]
    fn rejects_out_of_range_colour_and_missing_pairs() {
        let bad = serde_json::json!({"n": 3, "r": 2, "edges": [[0,1,2],[0,2,1],[1,2,0]]});
        assert!(graph_from_json(&bad).is_err());
        let short = serde_json::json!({"n": 3, "r": 2, "rows": ["0", "0"]});
        assert!(graph_from_json(&short).is_err());
        let neither = serde_json::json!({"n": 3, "r": 2});
        assert!(graph_from_json(&neither).is_err());
    }

    #[test]
    fn writes_compact_rows() {
        let g = ColouredCompleteGraph::from_fn(3, 2, |u, _| (u % 2) as u8).unwrap();
        let v = graph_to_json(&g, true);
        assert_eq!(v["rows"], serde_json::json!(["00", "1", ""]));
        assert_eq!(graph_from_json(&v).unwrap(), g);
    }

    #[test]
    fn bipartite_round_trip() {
        let b = crate::constructions::make_bipartite_mindeg(5, crate::Rational::new(1, 5), 2).unwrap();
        let v = bipartite_to_json(&b);
        assert!(is_bipartite_json(&v));
        assert_eq!(bipartite_from_json(&v).unwrap(), b);
        assert!(bipartite_from_json(&serde_json::json!({"kind": "bipartite", "x": [0], "y": [1], "rows": ["2"]})).is_err());
    }
}
