//! Edge-list text format: a header line `v m` followed by `m` lines `u w`,
//! 0-indexed, newline-terminated.

use std::fs;
use std::path::Path;

use super::{Graph, GraphError};

pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text.lines().enumerate();
    let (header_no, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or(GraphError::Parse { line: 1, message: "missing header".into() })?;
    let [v, m] = parse_pair(header, header_no + 1)?;
    let mut pairs = Vec::with_capacity(m);
    for (no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        if pairs.len() == m {
            return Err(GraphError::Parse { line: no + 1, message: format!("more than {m} edge lines") });
        }
        let [u, w] = parse_pair(line, no + 1)?;
        pairs.push((u, w));
    }
    if pairs.len() != m {
        return Err(GraphError::Parse {
            line: text.lines().count() + 1,
            message: format!("expected {m} edge lines, found {}", pairs.len()),
        });
    }
    Graph::new(v, &pairs).map_err(|err| match err {
        GraphError::Loop { index, .. } | GraphError::DuplicateEdge { index, .. } | GraphError::VertexOutOfRange { index, .. } => {
            GraphError::Parse { line: edge_line_number(text, index), message: err.to_string() }
        }
        other => other,
    })
}

fn parse_pair(line: &str, line_no: usize) -> Result<[usize; 2], GraphError> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(GraphError::Parse { line: line_no, message: format!("expected two integers, got {:?}", line.trim()) });
    }
    let mut out = [0usize; 2];
    for (slot, field) in out.iter_mut().zip(fields) {
        *slot = field
            .parse()
            .map_err(|_| GraphError::Parse { line: line_no, message: format!("not a nonnegative integer: {field:?}") })?;
    }
    Ok(out)
}

/// 1-based line number of the `index`-th edge line.
fn edge_line_number(text: &str, index: usize) -> usize {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .nth(index + 1)
        .map(|(no, _)| no + 1)
        .unwrap_or(0)
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    let text = fs::read_to_string(path.as_ref()).map_err(|e| GraphError::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_edge_list(&text)
}

/// Serializes edges in id order; `parse_edge_list` reproduces the same graph.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for &(u, w) in g.edges() {
        out.push_str(&format!("{u} {w}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::families;
    use super::*;

    #[test]
    fn round_trip() {
        let g = families::petersen();
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let err = parse_edge_list("3 2\n0 1\n1 x\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }), "{err:?}");
        let err = parse_edge_list("3 2\n0 1\n1 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }), "{err:?}");
        let err = parse_edge_list("3 3\n0 1\n1 2\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { .. }));
        let err = parse_edge_list("3 1 7\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }));
    }
}
