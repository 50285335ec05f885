//! Count tables keyed by peak set, with export in the appendix layout.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// An element-set key ordered by cardinality first, then lexicographically
/// on the ascending element list — the grouping used by the appendix table.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct SetKey(Vec<u32>);

impl SetKey {
    pub fn new(mut elements: Vec<u32>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Self(elements)
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }
}

impl Ord for SetKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for SetKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, v) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// The complete classification of `S_n` by circular peak set: every feasible
/// set maps to its exact count; absent keys count zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CountTable {
    n: u32,
    counts: BTreeMap<SetKey, BigUint>,
}

#[derive(Serialize, Deserialize)]
struct JsonEntry {
    set: Vec<u32>,
    count: String,
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    n: u32,
    entries: Vec<JsonEntry>,
}

impl CountTable {
    pub(crate) fn from_counts<I>(n: u32, counts: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigUint)>,
    {
        let counts = counts
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(elements, c)| (SetKey::new(elements), c))
            .collect();
        Self { n, counts }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Count for the given element set; zero when the key is absent.
    pub fn get(&self, elements: &[u32]) -> BigUint {
        self.counts
            .get(&SetKey::new(elements.to_vec()))
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }

    pub fn contains(&self, elements: &[u32]) -> bool {
        self.counts.contains_key(&SetKey::new(elements.to_vec()))
    }

    /// Entries in appendix order: by cardinality, then lexicographically.
    pub fn iter(&self) -> impl Iterator<Item = (&SetKey, &BigUint)> {
        self.counts.iter()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Sum over all classes; equals `n!` for a complete table.
    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    pub fn to_text(&self) -> String {
        let width = self
            .counts
            .keys()
            .map(|k| k.to_string().len())
            .max()
            .unwrap_or(2);
        let mut out = format!("# cp_n(S) for n = {}\n", self.n);
        for (key, count) in &self.counts {
            out.push_str(&format!(
                "{:width$}  {}\n",
                key.to_string(),
                count,
                width = width
            ));
        }
        out.push_str(&format!(
            "# classes: {}, total: {}\n",
            self.counts.len(),
            self.total()
        ));
        out
    }

    /// CSV with columns `n,S,count`; the set column is quoted when it
    /// contains more than one element.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,S,count\n");
        for (key, count) in &self.counts {
            out.push_str(&csv_row(self.n, key.elements(), &count.to_string()));
        }
        out
    }

    /// JSON of the form `{"n": 5, "entries": [{"set": [4,5], "count": "12"}]}`.
    /// Counts are decimal strings so consumers never lose integer width.
    pub fn to_json(&self) -> String {
        let table = JsonTable {
            n: self.n,
            entries: self
                .counts
                .iter()
                .map(|(key, count)| JsonEntry {
                    set: key.elements().to_vec(),
                    count: count.to_string(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&table).expect("serializing count table")
    }

    /// Parses the output of [`CountTable::to_json`] back into a table.
    pub fn from_json(s: &str) -> crate::Result<Self> {
        let table: JsonTable = serde_json::from_str(s)
            .map_err(|e| crate::Error::Domain(format!("bad table JSON: {e}")))?;
        let mut counts = Vec::new();
        for entry in table.entries {
            let count = entry
                .count
                .parse::<BigUint>()
                .map_err(|e| crate::Error::Domain(format!("bad count string: {e}")))?;
            counts.push((entry.set, count));
        }
        Ok(Self::from_counts(table.n, counts))
    }
}

pub(crate) fn csv_row(n: u32, elements: &[u32], count: &str) -> String {
    let set_field = elements
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",");
    if elements.len() > 1 {
        format!("{n},\"{set_field}\",{count}\n")
    } else {
        format!("{n},{set_field},{count}\n")
    }
}
