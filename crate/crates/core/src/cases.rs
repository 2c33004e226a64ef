//! Regression table of twisted-equation cases: parsing and execution.
//!
//! One case per line, whitespace separated:
//!
//! ```text
//! id  group  mode  p  factors  relation  lengths  centralizer  expect  [large]
//! ```
//!
//! `factors` is a comma list of exponents for a single unknown (`0,-2,1`), or
//! of slot-letter/exponent pairs for several unknowns (`a0,b0,a7,b7`).
//! `lengths` is one value or range (`2`, `1..2`) for every slot, or a comma
//! list with one entry per slot. `centralizer` is `-` or k, meaning each
//! unknown commutes with c^k. A trailing `large` marks rows that need
//! `--allow-large`. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abslen::{coxeter_element, length_table, LengthTable};
use crate::catalog::{load_catalog_from, CatalogEntry};
use crate::groups::{build_group, BuildConfig, Elem, ReflectionGroup};
use crate::kernel::{solve_twisted, Factor, Relation, Slot, TwistedSystem};
use crate::ncp::Interval;
use crate::sieve::Mode;

/// The table shipped with the crate.
pub const SHIPPED_CASES: &str = include_str!("../cases/cases.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct CaseParseError {
    pub line: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRow {
    pub line: usize,
    pub id: String,
    pub group: String,
    pub mode: Mode,
    pub p: String,
    pub system: TwistedSystem,
    pub expect: u64,
    pub large: bool,
}

pub fn parse_case_table(text: &str) -> Result<Vec<CaseRow>, CaseParseError> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |msg: String| CaseParseError { line, msg };
        let cols: Vec<&str> = body.split_whitespace().collect();
        if cols.len() < 9 || cols.len() > 10 {
            return Err(err(format!("expected 9 or 10 columns, found {}", cols.len())));
        }
        let large = match cols.get(9) {
            None => false,
            Some(&"large") => true,
            Some(other) => return Err(err(format!("unknown flag `{other}`"))),
        };
        let mode = cols[2].parse::<Mode>().map_err(|e| err(e.to_string()))?;
        let centralizer = match cols[7] {
            "-" => None,
            k => Some(k.parse::<i64>().map_err(|_| err(format!("bad centralizer `{k}`")))?),
        };
        let system = parse_system(cols[4], cols[5], cols[6], centralizer).map_err(err)?;
        let expect = cols[8].parse::<u64>().map_err(|_| err(format!("bad expected count `{}`", cols[8])))?;
        rows.push(CaseRow {
            line,
            id: cols[0].to_string(),
            group: cols[1].to_string(),
            mode,
            p: cols[3].to_string(),
            system,
            expect,
            large,
        });
    }
    Ok(rows)
}

/// Build a system from the textual factor, relation and length columns.
pub fn parse_system(
    factors: &str,
    relation: &str,
    lengths: &str,
    centralizer: Option<i64>,
) -> Result<TwistedSystem, String> {
    let factors = parse_factors(factors)?;
    let nslots = factors.iter().map(|f| f.slot + 1).max().unwrap_or(0);
    let relation: Relation = relation.parse()?;
    let slots = parse_lengths(lengths, nslots)?;
    let system = TwistedSystem { slots, factors, relation, centralizer };
    system.validate().map_err(|e| e.to_string())?;
    Ok(system)
}

fn parse_factors(s: &str) -> Result<Vec<Factor>, String> {
    let mut out = Vec::new();
    for tok in s.split(',') {
        let (slot, num) = match tok.chars().next() {
            Some(ch) if ch.is_ascii_lowercase() => ((ch as u8 - b'a') as usize, &tok[1..]),
            _ => (0, tok),
        };
        let exp = num.parse::<i64>().map_err(|_| format!("bad factor `{tok}`"))?;
        out.push(Factor { slot, exp });
    }
    let lettered = s.chars().any(|ch| ch.is_ascii_lowercase());
    if lettered && s.split(',').any(|t| !t.starts_with(|ch: char| ch.is_ascii_lowercase())) {
        return Err(format!("factors `{s}` mix lettered and plain exponents"));
    }
    Ok(out)
}

fn parse_range(s: &str) -> Result<Slot, String> {
    let bad = || format!("bad length `{s}`");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
        None => {
            let v = s.parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    Ok(Slot { min_len: a, max_len: b })
}

fn parse_lengths(s: &str, nslots: usize) -> Result<Vec<Slot>, String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.len() {
        1 => Ok(vec![parse_range(parts[0])?; nslots]),
        k if k == nslots => parts.iter().map(|p| parse_range(p)).collect(),
        k => Err(format!("{k} lengths given for {nslots} unknowns")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseStatus {
    Pass,
    Fail,
    Skipped,
    Error,
}

impl fmt::Display for CaseStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseStatus::Pass => "pass",
            CaseStatus::Fail => "FAIL",
            CaseStatus::Skipped => "skipped",
            CaseStatus::Error => "error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub line: usize,
    pub id: String,
    pub group: String,
    pub p: String,
    pub system: String,
    pub expect: u64,
    pub found: Option<u64>,
    pub status: CaseStatus,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct CaseOptions {
    pub allow_large: bool,
    pub budget: u128,
    pub catalog_dir: Option<std::path::PathBuf>,
}

impl Default for CaseOptions {
    fn default() -> Self {
        CaseOptions { allow_large: false, budget: crate::kernel::DEFAULT_SOLVE_BUDGET, catalog_dir: None }
    }
}

struct Prepared {
    g: ReflectionGroup,
    l: LengthTable,
    c: Elem,
    iv: Interval,
}

fn prepare(entry: &CatalogEntry, allow_large: bool) -> Result<Prepared, String> {
    let cfg = BuildConfig { allow_large, ..BuildConfig::default() };
    let g = build_group(entry, &cfg).map_err(|e| e.to_string())?;
    let l = length_table(&g);
    let c = coxeter_element(&g, &l).map_err(|e| e.to_string())?;
    let iv = Interval::new(&g, &l, c);
    Ok(Prepared { g, l, c, iv })
}

/// Runs every row, building each group once. Rows are reported in table order.
pub fn run_cases(rows: &[CaseRow], opts: &CaseOptions) -> Vec<CaseOutcome> {
    let mut groups: BTreeMap<String, Result<Prepared, String>> = BTreeMap::new();
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let mut outcome = CaseOutcome {
            line: row.line,
            id: row.id.clone(),
            group: row.group.clone(),
            p: row.p.clone(),
            system: row.system.to_string(),
            expect: row.expect,
            found: None,
            status: CaseStatus::Skipped,
            message: String::new(),
        };
        if row.large && !opts.allow_large {
            outcome.message = "needs --allow-large".into();
            out.push(outcome);
            continue;
        }
        let prepared = groups.entry(row.group.clone()).or_insert_with(|| {
            load_catalog_from(&row.group, opts.catalog_dir.as_deref())
                .map_err(|e| e.to_string())
                .and_then(|e| prepare(&e, opts.allow_large))
        });
        match prepared {
            Err(e) => {
                outcome.status = CaseStatus::Error;
                outcome.message = e.clone();
            }
            Ok(p) => match solve_twisted(&p.g, p.c, &p.l, &p.iv, &row.system, opts.budget) {
                Ok(sols) => {
                    let found = sols.len() as u64;
                    outcome.found = Some(found);
                    if found == row.expect {
                        outcome.status = CaseStatus::Pass;
                    } else {
                        outcome.status = CaseStatus::Fail;
                        outcome.message = format!("expected {}, found {found}", row.expect);
                    }
                }
                Err(e) => {
                    outcome.status = CaseStatus::Error;
                    outcome.message = e.to_string();
                }
            },
        }
        out.push(outcome);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_table_parses() {
        let rows = parse_case_table(SHIPPED_CASES).unwrap();
        assert!(rows.len() > 30);
        let mut ids: Vec<&str> = rows.iter().map(|r| r.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), rows.len(), "duplicate ids");
    }

    #[test]
    fn parse_forms() {
        let rows = parse_case_table("x H4 phi 15m/2 a0,b0,a7,b7 eq 1 15 30\ny E6 phi 3m/2 0,1 leq 1..2 3 0 large\n").unwrap();
        assert_eq!(rows[0].system.slots.len(), 2);
        assert_eq!(rows[0].system.factors[2], Factor { slot: 0, exp: 7 });
        assert_eq!(rows[0].system.centralizer, Some(15));
        assert_eq!(rows[1].system.slots[0], Slot { min_len: 1, max_len: 2 });
        assert!(rows[1].large);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let e = parse_case_table("# header\n\nx H3 phi 5m/3 0,q eq 1 - 5\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_case_table("x H3 phi 5m/3 0,1 eq 1 -\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_case_table("x H3 phi 5m/3 a0,1 eq 1 - 5\n").unwrap_err();
        assert!(e.msg.contains("mix"));
        let e = parse_case_table("x H3 phi 5m/3 a0,b1 eq 1,1,1 - 5\n").unwrap_err();
        assert!(e.msg.contains("lengths"));
    }

    #[test]
    fn empty_table() {
        assert!(parse_case_table("").unwrap().is_empty());
        assert!(run_cases(&[], &CaseOptions::default()).is_empty());
    }

    #[test]
    fn falsified_row_fails() {
        let rows = parse_case_table("h3 H3 phi 5m/3 0,-2,1 eq 1 - 6\n").unwrap();
        let out = run_cases(&rows, &CaseOptions::default());
        assert_eq!(out[0].status, CaseStatus::Fail);
        assert_eq!(out[0].found, Some(5));
    }

    #[test]
    fn large_rows_are_skipped() {
        let rows = parse_case_table("g G32 phi 5m/3 0,1,2,3 eq 1 5 5 large\n").unwrap();
        let out = run_cases(&rows, &CaseOptions::default());
        assert_eq!(out[0].status, CaseStatus::Skipped);
    }
}
