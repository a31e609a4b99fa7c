//! Comma-separated integer literals: `0,1,5` for sets, `4,6` for weights.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralError(pub String);

impl fmt::Display for LiteralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for LiteralError {}

/// Whitespace is ignored; an empty literal is an empty list.
pub fn parse_list(s: &str) -> Result<Vec<i64>, LiteralError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Ok(Vec::new());
    }
    compact
        .split(',')
        .map(|tok| {
            tok.parse::<i64>()
                .map_err(|_| LiteralError(format!("invalid integer {tok:?} in {s:?}")))
        })
        .collect()
}

/// Like [`parse_list`] but rejects repeated values.
pub fn parse_set(s: &str) -> Result<Vec<i64>, LiteralError> {
    let values = parse_list(s)?;
    let mut seen = std::collections::HashSet::new();
    for v in &values {
        if !seen.insert(*v) {
            return Err(LiteralError(format!("duplicate residue {v} in {s:?}")));
        }
    }
    Ok(values)
}
