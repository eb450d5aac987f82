//! SteinLib STP 1.0 reader and writer, best-known-bound tables, gap metric
//! and run records.

mod bounds;
mod record;

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::graph::{Instance, InstanceError};

pub use bounds::{coverage_group, coverage_label, gap_permil, BoundsError, BoundsTable, GapError};
pub use record::{read_records, write_records, RecordError, RunRecord, RunStatus};

const MAGIC: &str = "33D32945";

#[derive(Debug, Error)]
pub enum StpError {
    #[error("malformed header: expected '{MAGIC} STP File ...' on the first line")]
    MalformedHeader,
    #[error("line {line}: node {node} out of range 1..={node_count}")]
    NodeOutOfRange { line: usize, node: i64, node_count: usize },
    #[error("line {line}: cannot parse '{token}' as a number")]
    InvalidNumber { line: usize, token: String },
    #[error("line {line}: arc lines are not supported (undirected instances only)")]
    ArcLine { line: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{what}: header declares {declared}, file lists {found}")]
    CountMismatch { what: &'static str, declared: usize, found: usize },
    #[error("instance has no terminals")]
    NoTerminals,
    #[error("missing section {0}")]
    MissingSection(&'static str),
    #[error("missing EOF marker")]
    MissingEof,
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Comment,
    Graph,
    Terminals,
    Skipped,
}

fn number<T: std::str::FromStr>(token: Option<&str>, line: usize) -> Result<T, StpError> {
    let token = token.ok_or_else(|| StpError::Syntax {
        line,
        message: "missing field".into(),
    })?;
    token.parse().map_err(|_| StpError::InvalidNumber {
        line,
        token: token.to_string(),
    })
}

fn node_id(token: Option<&str>, line: usize, node_count: Option<usize>) -> Result<usize, StpError> {
    let node: i64 = number(token, line)?;
    let node_count = node_count.ok_or_else(|| StpError::Syntax {
        line,
        message: "node referenced before 'Nodes' line".into(),
    })?;
    if node < 1 || node as usize > node_count {
        return Err(StpError::NodeOutOfRange { line, node, node_count });
    }
    Ok(node as usize - 1)
}

/// Parses an STP 1.0 document. Node ids in the file are 1-based.
pub fn parse_stp(text: &str) -> Result<Instance, StpError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.find(|(_, l)| !l.is_empty()) {
        Some((_, first)) if first.to_ascii_uppercase().starts_with(MAGIC) => {}
        _ => return Err(StpError::MalformedHeader),
    }

    let mut section = Section::None;
    let mut name: Option<String> = None;
    let mut node_count: Option<usize> = None;
    let mut declared_edges: Option<usize> = None;
    let mut declared_terminals: Option<usize> = None;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut terminals: Vec<usize> = Vec::new();
    let mut seen_graph = false;
    let mut seen_terminals = false;
    let mut seen_eof = false;

    for (line, content) in lines {
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let keyword = tokens.next().unwrap().to_ascii_lowercase();

        if section == Section::None {
            match keyword.as_str() {
                "section" => {
                    let which = tokens.next().unwrap_or("").to_ascii_lowercase();
                    section = match which.as_str() {
                        "comment" => Section::Comment,
                        "graph" => {
                            seen_graph = true;
                            Section::Graph
                        }
                        "terminals" => {
                            seen_terminals = true;
                            Section::Terminals
                        }
                        _ => Section::Skipped,
                    };
                }
                "eof" => {
                    seen_eof = true;
                    break;
                }
                _ => {
                    return Err(StpError::Syntax {
                        line,
                        message: format!("unexpected '{content}' outside a section"),
                    })
                }
            }
            continue;
        }
        if keyword == "end" {
            section = Section::None;
            continue;
        }

        match section {
            Section::Comment => {
                if keyword == "name" {
                    let rest = content[4..].trim().trim_matches('"');
                    name = Some(rest.to_string());
                }
            }
            Section::Graph => match keyword.as_str() {
                "nodes" => node_count = Some(number(tokens.next(), line)?),
                "edges" => declared_edges = Some(number(tokens.next(), line)?),
                "arcs" | "a" => return Err(StpError::ArcLine { line }),
                "e" => {
                    let u = node_id(tokens.next(), line, node_count)?;
                    let v = node_id(tokens.next(), line, node_count)?;
                    let cost: f64 = number(tokens.next(), line)?;
                    edges.push((u, v, cost));
                }
                _ => {
                    return Err(StpError::Syntax {
                        line,
                        message: format!("unknown graph line '{content}'"),
                    })
                }
            },
            Section::Terminals => match keyword.as_str() {
                "terminals" => declared_terminals = Some(number(tokens.next(), line)?),
                "t" => terminals.push(node_id(tokens.next(), line, node_count)?),
                // Rooted variants name a root; the undirected problem ignores it.
                "root" | "rootp" => {}
                _ => {
                    return Err(StpError::Syntax {
                        line,
                        message: format!("unknown terminal line '{content}'"),
                    })
                }
            },
            Section::Skipped | Section::None => {}
        }
    }

    if !seen_graph {
        return Err(StpError::MissingSection("Graph"));
    }
    if !seen_terminals {
        return Err(StpError::MissingSection("Terminals"));
    }
    if !seen_eof {
        return Err(StpError::MissingEof);
    }
    let node_count = node_count.ok_or(StpError::MissingSection("Graph/Nodes"))?;
    if let Some(declared) = declared_edges {
        if declared != edges.len() {
            return Err(StpError::CountMismatch {
                what: "edges",
                declared,
                found: edges.len(),
            });
        }
    }
    if declared_terminals == Some(0) || terminals.is_empty() {
        return Err(StpError::NoTerminals);
    }
    if let Some(declared) = declared_terminals {
        if declared != terminals.len() {
            return Err(StpError::CountMismatch {
                what: "terminals",
                declared,
                found: terminals.len(),
            });
        }
    }

    let inst = Instance::new(node_count, edges, terminals)?;
    Ok(match name {
        Some(n) => inst.with_name(n),
        None => inst,
    })
}

pub fn read_stp_file(path: impl AsRef<Path>) -> Result<Instance, StpError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let inst = parse_stp(&text)?;
    if inst.name().is_some() {
        return Ok(inst);
    }
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(inst.with_name(stem))
}

fn format_cost(cost: f64) -> String {
    if cost.fract() == 0.0 && cost.abs() < 1e15 {
        format!("{}", cost as i64)
    } else {
        // Shortest representation that parses back to the same value.
        format!("{cost}")
    }
}

/// Writes an STP 1.0 document with 1-based node ids.
pub fn write_stp(inst: &Instance) -> String {
    let mut out = String::new();
    out.push_str("33D32945 STP File, STP Format Version 1.0\n\n");
    out.push_str("SECTION Comment\n");
    if let Some(name) = inst.name() {
        let _ = writeln!(out, "Name \"{name}\"");
    }
    out.push_str("END\n\nSECTION Graph\n");
    let _ = writeln!(out, "Nodes {}", inst.node_count());
    let _ = writeln!(out, "Edges {}", inst.edge_count());
    for e in inst.edges() {
        let _ = writeln!(out, "E {} {} {}", e.u + 1, e.v + 1, format_cost(e.cost));
    }
    out.push_str("END\n\nSECTION Terminals\n");
    let _ = writeln!(out, "Terminals {}", inst.terminals().len());
    for &t in inst.terminals() {
        let _ = writeln!(out, "T {}", t + 1);
    }
    out.push_str("END\n\nEOF\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const PATH3: &str = "33D32945 STP File, STP Format Version 1.0
SECTION Comment
Name \"path3\"
END

SECTION Graph
Nodes 3
Edges 2
E 1 2 1
E 2 3 1
END

SECTION Terminals
Terminals 2
T 1
T 3
END

EOF
";

    #[test]
    fn parses_minimal_file() {
        let inst = parse_stp(PATH3).unwrap();
        assert_eq!(inst.node_count(), 3);
        assert_eq!(inst.edge_count(), 2);
        assert_eq!(inst.terminals(), &[0, 2]);
        assert_eq!(inst.name(), Some("path3"));
    }

    #[test]
    fn terminal_out_of_range() {
        let text = PATH3.replace("T 3", "T 5");
        assert!(matches!(
            parse_stp(&text),
            Err(StpError::NodeOutOfRange { node: 5, node_count: 3, .. })
        ));
    }

    #[test]
    fn duplicate_edges_collapse_to_min() {
        let text = PATH3
            .replace("Edges 2", "Edges 3")
            .replace("E 1 2 1", "E 1 2 5\nE 1 2 3");
        let inst = parse_stp(&text).unwrap();
        assert_eq!(inst.edge_count(), 2);
        assert_eq!(inst.edge(0).cost, 3.0);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_stp("hello\n"), Err(StpError::MalformedHeader)));
        assert!(matches!(
            parse_stp(&PATH3.replace("E 2 3 1", "E 2 3 x")),
            Err(StpError::InvalidNumber { .. })
        ));
        assert!(matches!(
            parse_stp(&PATH3.replace("E 2 3 1", "A 2 3 1")),
            Err(StpError::ArcLine { .. })
        ));
        let no_terminals = PATH3.replace("Terminals 2\nT 1\nT 3\n", "Terminals 0\n");
        assert!(matches!(parse_stp(&no_terminals), Err(StpError::NoTerminals)));
        assert!(matches!(
            parse_stp(&PATH3.replace("Edges 2", "Edges 4")),
            Err(StpError::CountMismatch { what: "edges", .. })
        ));
    }

    #[test]
    fn skips_unknown_sections_and_case() {
        let text = PATH3.replace(
            "SECTION Terminals",
            "SECTION Coordinates\nDD 1 0 0\nEND\n\nsection terminals",
        );
        assert_eq!(parse_stp(&text).unwrap().terminals().len(), 2);
    }

    #[test]
    fn round_trip() {
        let inst = Instance::new(4, [(0, 1, 2.5), (1, 2, 1.0), (2, 3, 7.0)], [0, 3])
            .unwrap()
            .with_name("x");
        let again = parse_stp(&write_stp(&inst)).unwrap();
        assert_eq!(again.edges(), inst.edges());
        assert_eq!(again.terminals(), inst.terminals());
        assert_eq!(again.name(), Some("x"));
    }
}
