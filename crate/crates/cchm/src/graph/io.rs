//! Plain-text graph format.
//!
//! Line 1: `nodes:` followed by comma-separated identifiers. Each further
//! line is one edge, `from,to,mark_at_from,mark_at_to`, with `from < to`
//! lexicographically and marks in `tail|arrow|circle`. Lines are sorted
//! lexicographically, every line ends with LF. The writer is canonical:
//! equal graphs serialise to identical bytes.

use super::{GraphError, GraphKind, Mark, MixedGraph};

pub fn graph_to_text(g: &MixedGraph) -> String {
    let mut out = String::from("nodes:");
    out.push_str(&g.node_names().join(","));
    out.push('\n');
    let mut lines: Vec<String> = g
        .edge_list()
        .map(|(i, j, mi, mj)| {
            format!(
                "{},{},{},{}",
                g.node_name(i),
                g.node_name(j),
                mi.as_str(),
                mj.as_str()
            )
        })
        .collect();
    lines.sort();
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn graph_from_text(text: &str) -> Result<MixedGraph, GraphError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| GraphError::ParseError("empty file".into()))?;
    let names = header
        .strip_prefix("nodes:")
        .ok_or_else(|| GraphError::ParseError("first line must start with 'nodes:'".into()))?;
    let names: Vec<&str> = if names.is_empty() {
        Vec::new()
    } else {
        names.split(',').collect()
    };
    let mut g = MixedGraph::new(GraphKind::Unclassified, names)?;

    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(GraphError::ParseError(format!(
                "line {}: expected 4 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let from = g
            .node_index(fields[0])
            .ok_or_else(|| GraphError::UnknownNode(fields[0].to_string()))?;
        let to = g
            .node_index(fields[1])
            .ok_or_else(|| GraphError::UnknownNode(fields[1].to_string()))?;
        if fields[0] >= fields[1] {
            return Err(GraphError::ParseError(format!(
                "line {}: endpoints must satisfy from < to",
                lineno + 2
            )));
        }
        if g.adjacent(from, to) {
            return Err(GraphError::ParseError(format!(
                "line {}: duplicate edge {},{}",
                lineno + 2,
                fields[0],
                fields[1]
            )));
        }
        let mark_from = parse_mark(fields[2], lineno)?;
        let mark_to = parse_mark(fields[3], lineno)?;
        g.set_edge(from, to, mark_from, mark_to);
    }
    Ok(g)
}

fn parse_mark(s: &str, lineno: usize) -> Result<Mark, GraphError> {
    match s {
        "tail" => Ok(Mark::Tail),
        "arrow" => Ok(Mark::Arrow),
        "circle" => Ok(Mark::Circle),
        other => Err(GraphError::ParseError(format!(
            "line {}: unknown mark {:?}",
            lineno + 2,
            other
        ))),
    }
}
