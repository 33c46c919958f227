//! Small helpers for the textual forms used in config files,
//! e.g. `gaussian(1.7,1)` or `affine(512, logpow(1,1))`.

use crate::error::{Error, Result};

/// Splits `name(args)` into `(name, args)`, requiring the trailing `)`.
pub(crate) fn split_callable(s: &str) -> Result<(&str, &str)> {
    let s = s.trim();
    let open = s
        .find('(')
        .ok_or_else(|| Error::Parse(format!("expected `name(...)`, got `{s}`")))?;
    if !s.ends_with(')') {
        return Err(Error::Parse(format!("missing closing `)` in `{s}`")));
    }
    let name = s[..open].trim();
    let args = &s[open + 1..s.len() - 1];
    if name.is_empty() {
        return Err(Error::Parse(format!("missing name in `{s}`")));
    }
    Ok((name, args))
}

/// Splits arguments on commas that are not nested inside parentheses.
pub(crate) fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = s[start..].trim();
    if !(last.is_empty() && out.is_empty()) {
        out.push(last);
    }
    out
}

pub(crate) fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{what}: expected a number, got `{s}`")))
}

/// Canonical name form: lowercase with `-`/`_` stripped, so that
/// `point_mass`, `point-mass` and `PointMass` all match.
pub(crate) fn canonical_name(name: &str) -> String {
    name.chars()
        .filter(|c| *c != '-' && *c != '_')
        .flat_map(|c| c.to_lowercase())
        .collect()
}
