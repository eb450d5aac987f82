//! One line per component, node ids 1-based:
//!
//! ```text
//! terminals=1,2,3 cost=3 edges=4-1:1,4-2:1,4-3:1
//! ```
//!
//! Expansion paths are not written; components read back carry empty paths.

use std::fmt::Write as _;

use thiserror::Error;

use super::{ComponentError, ComponentSet, FullComponent, MetricEdge};

#[derive(Debug, Error)]
pub enum DumpError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Component { line: usize, source: ComponentError },
}

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

pub fn write_dump(set: &ComponentSet) -> String {
    let mut out = String::new();
    for c in set.components() {
        let terminals: Vec<String> = c.terminals.iter().map(|t| (t + 1).to_string()).collect();
        let edges: Vec<String> = c
            .edges
            .iter()
            .map(|e| format!("{}-{}:{}", e.a + 1, e.b + 1, fmt_num(e.cost)))
            .collect();
        let _ = writeln!(
            out,
            "terminals={} cost={} edges={}",
            terminals.join(","),
            fmt_num(c.cost),
            edges.join(",")
        );
    }
    out
}

pub fn read_dump(text: &str, k: usize) -> Result<ComponentSet, DumpError> {
    let mut set = ComponentSet::new(k);
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let syntax = |message: &str| DumpError::Syntax {
            line,
            message: message.to_string(),
        };
        let mut terminals = Vec::new();
        let mut edges = Vec::new();
        for field in raw.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(|| syntax("expected key=value"))?;
            match key {
                "terminals" => {
                    for t in value.split(',') {
                        let t: usize = t.parse().map_err(|_| syntax("bad terminal id"))?;
                        terminals.push(t.checked_sub(1).ok_or_else(|| syntax("ids are 1-based"))?);
                    }
                }
                "cost" => {}
                "edges" => {
                    for e in value.split(',') {
                        let (ends, cost) = e.split_once(':').ok_or_else(|| syntax("edge needs a:b:cost"))?;
                        let (a, b) = ends.split_once('-').ok_or_else(|| syntax("edge needs a-b"))?;
                        let parse = |s: &str| -> Result<usize, DumpError> {
                            let v: usize = s.parse().map_err(|_| syntax("bad node id"))?;
                            v.checked_sub(1).ok_or_else(|| syntax("ids are 1-based"))
                        };
                        edges.push(MetricEdge {
                            a: parse(a)?,
                            b: parse(b)?,
                            cost: cost.parse().map_err(|_| syntax("bad cost"))?,
                            path: Vec::new(),
                        });
                    }
                }
                _ => return Err(syntax("unknown field")),
            }
        }
        let c = FullComponent::new(&terminals, edges).map_err(|source| DumpError::Component { line, source })?;
        set.insert(c);
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut set = ComponentSet::new(3);
        set.insert(
            FullComponent::new(
                &[1, 2, 3],
                vec![
                    MetricEdge { a: 0, b: 1, cost: 1.0, path: vec![] },
                    MetricEdge { a: 0, b: 2, cost: 1.5, path: vec![] },
                    MetricEdge { a: 0, b: 3, cost: 1.0, path: vec![] },
                ],
            )
            .unwrap(),
        );
        let text = write_dump(&set);
        assert_eq!(text, "terminals=2,3,4 cost=3.5 edges=1-2:1,1-3:1.5,1-4:1\n");
        let back = read_dump(&text, 3).unwrap();
        assert_eq!(back.components(), set.components());
    }
}
