//! The embedded golden fixture: every positive class count for orders 3
//! through 8, as published in the appendix table. CSV columns are
//! `n,S,count` with the set field quoted when it holds several elements.

use num_bigint::BigUint;

use crate::{Error, Result};

pub const TABLE3_CSV: &str = include_str!("../data/table3.csv");

/// One golden cell: `cp_n(S) = count`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GoldenCell {
    pub n: u32,
    pub elements: Vec<u32>,
    pub count: BigUint,
}

impl GoldenCell {
    pub fn label(&self) -> String {
        let set = self
            .elements
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!("n={} S={{{set}}}", self.n)
    }
}

/// Parses the embedded fixture.
pub fn golden_cells() -> Vec<GoldenCell> {
    parse_csv(TABLE3_CSV).expect("embedded fixture parses")
}

/// Parses fixture-format CSV: header `n,S,count`, then one row per cell.
pub fn parse_csv(text: &str) -> Result<Vec<GoldenCell>> {
    let mut cells = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || idx == 0 {
            continue;
        }
        let bad = || Error::Domain(format!("fixture line {} malformed: {line:?}", idx + 1));
        let first_comma = line.find(',').ok_or_else(bad)?;
        let last_comma = line.rfind(',').ok_or_else(bad)?;
        if first_comma == last_comma {
            return Err(bad());
        }
        let n = line[..first_comma]
            .trim()
            .parse::<u32>()
            .map_err(|_| bad())?;
        let count = line[last_comma + 1..]
            .trim()
            .parse::<BigUint>()
            .map_err(|_| bad())?;
        let set_field = line[first_comma + 1..last_comma].trim().trim_matches('"');
        let mut elements = Vec::new();
        for tok in set_field.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            elements.push(tok.parse::<u32>().map_err(|_| bad())?);
        }
        cells.push(GoldenCell { n, elements, count });
    }
    Ok(cells)
}
