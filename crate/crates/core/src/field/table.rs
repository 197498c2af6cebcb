//! Table of primitive polynomials with factorizations of 2^L - 1.
//!
//! One record per line: `L 0xHEX p1,p2,...`, factors repeated by
//! multiplicity. `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;

use dashu_int::UBig;

use super::Gf2Poly;
use crate::error::{Error, Result};

/// Environment variable naming a table file that replaces the embedded one.
pub const POLY_TABLE_ENV: &str = "FILTROPT_POLY_TABLE";

const EMBEDDED: &str = include_str!("../../data/primitive_polys.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub length: u32,
    pub poly: Gf2Poly,
    pub factors: Vec<UBig>,
}

#[derive(Clone, Debug, Default)]
pub struct PolyTable {
    entries: BTreeMap<u32, TableEntry>,
}

impl PolyTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| Error::Table {
                line: idx + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [len, poly, factors] = fields[..] else {
                return Err(bad(format!("expected 3 fields, found {}", fields.len())));
            };
            let length: u32 = len
                .parse()
                .map_err(|_| bad(format!("invalid degree {len:?}")))?;
            let poly = Gf2Poly::from_hex(poly).map_err(|e| bad(e.to_string()))?;
            let factors = parse_factor_list(factors).map_err(bad)?;
            if entries
                .insert(length, TableEntry { length, poly, factors })
                .is_some()
            {
                return Err(bad(format!("duplicate entry for L = {length}")));
            }
        }
        Ok(Self { entries })
    }

    /// The table compiled into the crate.
    pub fn embedded() -> Self {
        Self::parse(EMBEDDED).expect("embedded polynomial table is well formed")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::parse(&text)
    }

    /// The table named by [`POLY_TABLE_ENV`] if set, else the embedded one.
    pub fn from_env_or_embedded() -> Result<Self> {
        match std::env::var_os(POLY_TABLE_ENV) {
            Some(path) => Self::load(path),
            None => Ok(Self::embedded()),
        }
    }

    pub fn get(&self, length: u32) -> Option<&TableEntry> {
        self.entries.get(&length)
    }

    pub fn lengths(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = &TableEntry> {
        self.entries.values()
    }
}

/// Parses `3,3,7` into prime factors. An empty list is written as `-`.
pub fn parse_factor_list(text: &str) -> std::result::Result<Vec<UBig>, String> {
    let text = text.trim();
    if text == "-" || text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|f| {
            f.trim()
                .parse::<UBig>()
                .map_err(|_| format!("invalid factor {f:?}"))
        })
        .collect()
}
