use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::numeric::definitely_less;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("line {line}: expected 'name value'")]
    Malformed { line: usize },
    #[error("line {line}: bound for {name} must be positive, got {value}")]
    NonPositive { line: usize, name: String, value: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Best known upper bounds keyed by instance name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundsTable {
    bounds: BTreeMap<String, f64>,
}

impl BoundsTable {
    /// Two whitespace-separated columns per line; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, BoundsError> {
        let mut bounds = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split_whitespace();
            let (Some(name), Some(value), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(BoundsError::Malformed { line: i + 1 });
            };
            let value: f64 = value
                .parse()
                .map_err(|_| BoundsError::Malformed { line: i + 1 })?;
            if !(value > 0.0) {
                return Err(BoundsError::NonPositive {
                    line: i + 1,
                    name: name.to_string(),
                    value,
                });
            }
            bounds.insert(name.to_string(), value);
        }
        Ok(BoundsTable { bounds })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, BoundsError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn insert(&mut self, name: impl Into<String>, value: f64) {
        self.bounds.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.bounds.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GapError {
    #[error("best known bound must be positive, got {0}")]
    NonPositiveBound(f64),
    /// The solution beats the best known bound: either the bound table or
    /// the solver is wrong. The (negative) gap is carried for reporting.
    #[error("cost {cost} is below the best known bound {best} (gap {gap} permil)")]
    BelowBound { cost: f64, best: f64, gap: f64 },
}

/// `(cost / best - 1) * 1000`.
pub fn gap_permil(cost: f64, best: f64) -> Result<f64, GapError> {
    if !(best > 0.0) {
        return Err(GapError::NonPositiveBound(best));
    }
    let gap = (cost / best - 1.0) * 1000.0;
    if definitely_less(cost, best) {
        return Err(GapError::BelowBound { cost, best, gap });
    }
    Ok(gap.max(0.0))
}

/// Smallest `X` in `{10, 20, ..., 100}` with `X - 10 < 100 |R| / |V| <= X`.
pub fn coverage_group(terminals: usize, nodes: usize) -> u32 {
    if nodes == 0 {
        return 100;
    }
    // ceil(10 |R| / |V|) in integer arithmetic, so exact boundaries stay exact.
    let decile = (10 * terminals).div_ceil(nodes).clamp(1, 10);
    decile as u32 * 10
}

pub fn coverage_label(terminals: usize, nodes: usize) -> String {
    format!("Coverage {}", coverage_group(terminals, nodes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_values() {
        assert_eq!(format!("{:.4}", gap_permil(6_001_175.0, 6_001_164.0).unwrap()), "0.0018");
        assert_eq!(format!("{:.2}", gap_permil(11_600_427.0, 6_001_164.0).unwrap()), "933.03");
        assert_eq!(gap_permil(5.0, 5.0).unwrap(), 0.0);
        assert!(matches!(gap_permil(4.0, 5.0), Err(GapError::BelowBound { .. })));
        assert!(matches!(gap_permil(4.0, 0.0), Err(GapError::NonPositiveBound(_))));
    }

    #[test]
    fn coverage_boundaries() {
        assert_eq!(coverage_group(2, 40), 10);
        assert_eq!(coverage_group(7, 7), 100);
        assert_eq!(coverage_group(25, 100), 30);
        assert_eq!(coverage_group(10, 100), 10);
        assert_eq!(coverage_group(11, 100), 20);
        assert_eq!(coverage_label(2, 40), "Coverage 10");
    }

    #[test]
    fn bounds_parse() {
        let t = BoundsTable::parse("# name best\nb01 82\nb02   83\n\n").unwrap();
        assert_eq!(t.get("b01"), Some(82.0));
        assert_eq!(t.len(), 2);
        assert!(BoundsTable::parse("b01\n").is_err());
        assert!(BoundsTable::parse("b01 0\n").is_err());
    }
}
