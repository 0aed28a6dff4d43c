//! Plain-text fixture holding permutation generators and starter sets.
//!
//! Format, one item per line, `#` starts a comment:
//!
//! ```text
//! degree 45
//! gamma1 (2,44,38)(4,10)
//! S1 {2, 3, 4}
//! ```
//!
//! Lines whose value starts with `(` are generators in cycle notation,
//! lines whose value starts with `{` are starter sets.

use qherm_core::sss::{AccessSet, Permutation};

use crate::error::{CliError, CliResult};

/// The shipped example: a point stabilizer acting on the Hermitian surface
/// of `PG(3, 4)` and two starters.
pub const HERMITIAN_Q2_EXAMPLE: &str = include_str!("../fixtures/hermitian_q2_example.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub degree: u32,
    pub generators: Vec<(String, Permutation)>,
    pub starters: Vec<(String, AccessSet)>,
}

pub fn parse(text: &str) -> CliResult<Fixture> {
    let mut degree = None;
    let mut gens = Vec::new();
    let mut sets = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| CliError::Usage(format!("fixture line {}: {what}", no + 1));
        let (name, value) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| bad("expected `name value`"))?;
        let value = value.trim();
        if name == "degree" {
            degree = Some(value.parse::<u32>().map_err(|_| bad("degree is not an integer"))?);
        } else if value.starts_with('(') {
            let d = degree.ok_or_else(|| bad("`degree` must come first"))?;
            gens.push((name.to_string(), Permutation::parse_cycles(d, value)?));
        } else if let Some(body) = value.strip_prefix('{').and_then(|v| v.strip_suffix('}')) {
            let members = body
                .split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| bad("set member is not an integer")))
                .collect::<CliResult<Vec<u32>>>()?;
            let set = AccessSet::new(members);
            if let Some(d) = degree {
                set.check(d)?;
            }
            sets.push((name.to_string(), set));
        } else {
            return Err(bad("value is neither a cycle list nor a set"));
        }
    }
    let degree = degree.ok_or_else(|| CliError::Usage("fixture has no `degree` line".into()))?;
    Ok(Fixture {
        degree,
        generators: gens,
        starters: sets,
    })
}
