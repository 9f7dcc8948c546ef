//! Bit-exact persistence of arrays, libraries, and run manifests.
//!
//! Array format (normative): line 1 is `CA N t k v` with single spaces,
//! followed by N lines of k space-separated decimal symbols, each line
//! newline-terminated with no trailing whitespace.
//!
//! Library format: line 1 is `CALIB count N t k v`, followed by `count`
//! array bodies (header omitted per member) separated by single blank
//! lines, members in lex order.
//!
//! Manifest format: UTF-8 `key = value` lines in a fixed key order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::array::{CoveringArray, Params};
use crate::canonical::{canonical_minimum, CanonicalForm};
use crate::coverage::verify_strength;
use crate::error::{CaError, Result};
use crate::generator::CaLibrary;
use crate::multiset::ValidMultiset;
use crate::search::SearchStats;

pub fn ca_to_string(a: &CoveringArray) -> String {
    let p = a.params();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "CA {} {} {} {}",
        p.rows(),
        p.strength(),
        p.columns(),
        p.order()
    );
    for row in a.row_iter() {
        push_row(&mut out, row);
    }
    out
}

fn push_row(out: &mut String, row: &[u8]) {
    for (i, sym) in row.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{sym}");
    }
    out.push('\n');
}

pub fn write_ca(a: &CoveringArray, path: &Path) -> Result<()> {
    fs::write(path, ca_to_string(a))?;
    Ok(())
}

/// Incremental line reader tracking 1-based positions for diagnostics.
struct Lines<'a> {
    rest: &'a str,
    line_no: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        Lines {
            rest: text,
            line_no: 0,
        }
    }

    fn next_line(&mut self) -> Option<(&'a str, usize)> {
        if self.rest.is_empty() {
            return None;
        }
        self.line_no += 1;
        match self.rest.find('\n') {
            Some(pos) => {
                let line = &self.rest[..pos];
                self.rest = &self.rest[pos + 1..];
                Some((line, self.line_no))
            }
            None => {
                // final line without terminator; accepted but positions stay exact
                let line = self.rest;
                self.rest = "";
                Some((line, self.line_no))
            }
        }
    }

    fn at_end(&self) -> bool {
        self.rest.is_empty()
    }
}

/// Split a line into whitespace-separated fields, rejecting anything other
/// than single spaces between non-empty tokens.
fn fields(line: &str, line_no: usize) -> Result<Vec<(&str, usize)>> {
    let mut out = Vec::new();
    let mut col = 1usize;
    for tok in line.split(' ') {
        if tok.is_empty() {
            return Err(CaError::parse(
                line_no,
                col,
                "expected a single space between fields",
            ));
        }
        out.push((tok, col));
        col += tok.len() + 1;
    }
    Ok(out)
}

fn parse_usize(tok: &str, line: usize, col: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| CaError::parse(line, col, format!("invalid {what}: {tok:?}")))
}

fn parse_header(lines: &mut Lines<'_>, magic: &str, extra: usize) -> Result<(Vec<usize>, usize)> {
    let Some((line, line_no)) = lines.next_line() else {
        return Err(CaError::parse(1, 1, format!("missing {magic} header")));
    };
    let fields = fields(line, line_no)?;
    if fields.is_empty() || fields[0].0 != magic {
        return Err(CaError::parse(
            line_no,
            1,
            format!("expected {magic} header"),
        ));
    }
    if fields.len() != 1 + extra {
        return Err(CaError::parse(
            line_no,
            1,
            format!(
                "{magic} header wants {extra} fields, got {}",
                fields.len() - 1
            ),
        ));
    }
    let mut values = Vec::with_capacity(extra);
    for (tok, col) in &fields[1..] {
        values.push(parse_usize(tok, line_no, *col, "header field")?);
    }
    Ok((values, line_no))
}

fn parse_body(lines: &mut Lines<'_>, params: Params) -> Result<Vec<u8>> {
    // capacity from untrusted headers is clamped; a short body errors out
    // long before a large claim could matter
    let claimed = params.rows().saturating_mul(params.columns());
    let mut cells = Vec::with_capacity(claimed.min(1 << 20));
    for row in 0..params.rows() {
        let Some((line, line_no)) = lines.next_line() else {
            return Err(CaError::parse(
                lines.line_no + 1,
                1,
                format!("missing row {row}: expected {} rows", params.rows()),
            ));
        };
        let fields = fields(line, line_no)?;
        if fields.len() != params.columns() {
            return Err(CaError::parse(
                line_no,
                1,
                format!(
                    "row {row} has {} symbols, expected {}",
                    fields.len(),
                    params.columns()
                ),
            ));
        }
        for (c, (tok, col)) in fields.iter().enumerate() {
            let sym = parse_usize(tok, line_no, *col, "symbol")?;
            if sym >= params.order() {
                return Err(CaError::parse(
                    line_no,
                    *col,
                    format!(
                        "symbol {sym} at row {row} column {c} out of range for order {}",
                        params.order()
                    ),
                ));
            }
            cells.push(sym as u8);
        }
    }
    Ok(cells)
}

pub fn parse_ca(text: &str) -> Result<CoveringArray> {
    let mut lines = Lines::new(text);
    let (header, line_no) = parse_header(&mut lines, "CA", 4)?;
    let params = Params::new(header[0], header[1], header[2], header[3])
        .map_err(|e| CaError::parse(line_no, 1, e.to_string()))?;
    let cells = parse_body(&mut lines, params)?;
    if !lines.at_end() {
        return Err(CaError::parse(
            lines.line_no + 1,
            1,
            "trailing content after array body",
        ));
    }
    CoveringArray::new(params, cells)
}

pub fn read_ca(path: &Path) -> Result<CoveringArray> {
    parse_ca(&fs::read_to_string(path)?)
}

pub fn library_to_string(lib: &CaLibrary) -> String {
    let p = lib.params();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "CALIB {} {} {} {} {}",
        lib.len(),
        p.rows(),
        p.strength(),
        p.columns(),
        p.order()
    );
    for (i, member) in lib.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for row in member.array().row_iter() {
            push_row(&mut out, row);
        }
    }
    out
}

pub fn write_library(lib: &CaLibrary, path: &Path) -> Result<()> {
    fs::write(path, library_to_string(lib))?;
    Ok(())
}

/// Parse a library archive. Member strength is always re-verified; when
/// `check_minimality` is set each member is also re-canonicalized and must
/// equal its own minimum (slow, flag-gated).
pub fn parse_library(text: &str, check_minimality: bool) -> Result<CaLibrary> {
    let mut lines = Lines::new(text);
    let (header, line_no) = parse_header(&mut lines, "CALIB", 5)?;
    let count = header[0];
    let params = Params::new(header[1], header[2], header[3], header[4])
        .map_err(|e| CaError::parse(line_no, 1, e.to_string()))?;
    let mut members = Vec::with_capacity(count.min(1 << 16));
    for m in 0..count {
        if m > 0 {
            match lines.next_line() {
                Some(("", _)) => {}
                Some((_, line_no)) => {
                    return Err(CaError::parse(
                        line_no,
                        1,
                        "expected a blank line between members",
                    ));
                }
                None => {
                    return Err(CaError::parse(
                        lines.line_no + 1,
                        1,
                        format!("missing member {m}: header promised {count}"),
                    ));
                }
            }
        }
        let body_starts = lines.line_no + 1;
        let cells = parse_body(&mut lines, params)?;
        let array = CoveringArray::new(params, cells)?;
        if !verify_strength(&array, params.strength())? {
            return Err(CaError::parse(
                body_starts,
                1,
                format!(
                    "member {m} fails verification at strength {}",
                    params.strength()
                ),
            ));
        }
        if check_minimality {
            let min = canonical_minimum(&array);
            if min.array() != &array {
                return Err(CaError::parse(
                    body_starts,
                    1,
                    format!("member {m} is not the minimum of its isomorphism class"),
                ));
            }
        }
        members.push(CanonicalForm::new_unchecked(array));
    }
    if !lines.at_end() {
        return Err(CaError::parse(
            lines.line_no + 1,
            1,
            "trailing content after last member",
        ));
    }
    // strict lex order also rejects duplicates
    CaLibrary::new(params, members)
}

pub fn read_library(path: &Path, check_minimality: bool) -> Result<CaLibrary> {
    parse_library(&fs::read_to_string(path)?, check_minimality)
}

/// Hex SHA-256 of a byte string; the manifest records the algorithm name.
pub fn fingerprint(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

pub const HASH_ALGORITHM: &str = "sha256";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Exists,
    Nonexistent,
    NotFoundPartial,
    BudgetExhausted,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Exists => "exists",
            Verdict::Nonexistent => "nonexistent",
            Verdict::NotFoundPartial => "not-found-partial",
            Verdict::BudgetExhausted => "budget-exhausted",
        }
    }
}

/// Everything needed to audit one run: parameters, library fingerprints,
/// multisets, result files with content hashes, counters, and the verdict.
/// A `nonexistent` verdict is only written when every library was complete
/// and the search ran to exhaustion.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub rows: usize,
    pub strength: usize,
    pub columns: usize,
    pub order: usize,
    /// (row count, file name, content hash) per library used
    pub libraries: Vec<(usize, String, String)>,
    pub multisets: Vec<ValidMultiset>,
    /// (file name, content hash) per result array written
    pub results: Vec<(String, String)>,
    pub stats: SearchStats,
    pub verdict: Verdict,
}

pub fn manifest_to_string(m: &RunManifest) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("tool", m.tool_version.clone());
    kv("command", m.command.clone());
    kv("n", m.rows.to_string());
    kv("t", m.strength.to_string());
    kv("k", m.columns.to_string());
    kv("v", m.order.to_string());
    kv("hash_algorithm", HASH_ALGORITHM.to_string());
    for (size, name, hash) in &m.libraries {
        kv(&format!("library_{size}"), name.clone());
        kv(&format!("library_{size}_hash"), hash.clone());
    }
    kv(
        "multisets",
        m.multisets
            .iter()
            .map(|ms| ms.to_string())
            .collect::<Vec<_>>()
            .join("; "),
    );
    kv("nodes", m.stats.nodes.to_string());
    kv("tuples", m.stats.tuples.to_string());
    kv(
        "juxtapositions_completed",
        m.stats.completed_juxtapositions.to_string(),
    );
    kv("coverage_prunes", m.stats.coverage_prunes.to_string());
    for (i, per) in m.stats.per_multiset.iter().enumerate() {
        let sizes = per
            .sizes
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        kv(&format!("multiset_{i}"), sizes);
        kv(&format!("multiset_{i}_tuples"), per.tuples.to_string());
        kv(
            &format!("multiset_{i}_completed"),
            per.completed_juxtapositions.to_string(),
        );
        kv(
            &format!("multiset_{i}_prunes"),
            per.coverage_prunes.to_string(),
        );
    }
    kv("wall_ms", m.stats.wall.as_millis().to_string());
    kv("results", m.results.len().to_string());
    for (i, (name, hash)) in m.results.iter().enumerate() {
        kv(&format!("result_{i}"), name.clone());
        kv(&format!("result_{i}_hash"), hash.clone());
    }
    kv("verdict", m.verdict.as_str().to_string());
    out
}

pub fn write_manifest(m: &RunManifest, path: &Path) -> Result<()> {
    fs::write(path, manifest_to_string(m))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{brute_force_distinct, CaLibrary};

    fn arr(rows: usize, t: usize, k: usize, v: usize, cells: &[u8]) -> CoveringArray {
        CoveringArray::new(Params::new(rows, t, k, v).unwrap(), cells.to_vec()).unwrap()
    }

    #[test]
    fn ca_round_trip() {
        let a = arr(4, 2, 3, 2, &[0, 0, 0, 0, 1, 1, 1, 0, 1, 1, 1, 0]);
        let text = ca_to_string(&a);
        assert_eq!(text, "CA 4 2 3 2\n0 0 0\n0 1 1\n1 0 1\n1 1 0\n");
        assert_eq!(parse_ca(&text).unwrap(), a);
    }

    #[test]
    fn ca_parse_errors_carry_positions() {
        let err = parse_ca("CA 2 1 2 3\n0 1\n0 3\n").unwrap_err();
        match err {
            CaError::Parse {
                line,
                column,
                message,
            } => {
                assert_eq!(line, 3);
                assert_eq!(column, 3);
                assert!(message.contains("symbol 3"), "{message}");
                assert!(message.contains("row 1 column 1"), "{message}");
            }
            other => panic!("unexpected error {other}"),
        }

        assert!(parse_ca("CA 2 1 2\n0 1\n1 0\n").is_err());
        assert!(parse_ca("XX 2 1 2 2\n0 1\n1 0\n").is_err());
        assert!(parse_ca("CA 2 1 2 2\n0  1\n1 0\n").is_err());
        assert!(parse_ca("CA 2 1 2 2\n0 1\n1 0\nextra\n").is_err());
        assert!(parse_ca("CA 2 1 2 2\n0 1\n").is_err());
    }

    #[test]
    fn library_round_trip_and_validation() {
        let lib = brute_force_distinct(Params::new(4, 2, 3, 2).unwrap()).unwrap();
        let text = library_to_string(&lib);
        let back = parse_library(&text, true).unwrap();
        assert_eq!(back.len(), lib.len());
        assert_eq!(library_to_string(&back), text);

        // empty library
        let empty = CaLibrary::new(Params::new(3, 2, 3, 2).unwrap(), Vec::new()).unwrap();
        let text = library_to_string(&empty);
        assert_eq!(text, "CALIB 0 3 2 3 2\n");
        assert_eq!(parse_library(&text, true).unwrap().len(), 0);
    }

    #[test]
    fn library_rejects_non_minimal_member_when_validating() {
        // a row shuffle of the minimum is a valid CA, but not minimal
        let lib = brute_force_distinct(Params::new(4, 2, 3, 2).unwrap()).unwrap();
        let member = lib.members()[0].array();
        let mut rows: Vec<Vec<u8>> = member.row_iter().map(|r| r.to_vec()).collect();
        rows.swap(0, 3);
        let shuffled = CoveringArray::from_rows(member.params(), &rows).unwrap();
        let text = format!(
            "CALIB 1 4 2 3 2\n{}",
            ca_to_string(&shuffled)
                .lines()
                .skip(1)
                .map(|l| format!("{l}\n"))
                .collect::<String>()
        );
        assert!(parse_library(&text, false).is_ok());
        assert!(parse_library(&text, true).is_err());
    }

    #[test]
    fn library_rejects_member_failing_strength() {
        let text = "CALIB 1 2 1 2 2\n0 0\n0 0\n";
        assert!(parse_library(text, false).is_err());
    }

    #[test]
    fn three_member_library_round_trips_in_order() {
        let lib = crate::generator::generate_distinct(
            Params::new(11, 2, 5, 3).unwrap(),
            &crate::generator::GenOptions::default(),
        )
        .unwrap()
        .library;
        assert_eq!(lib.len(), 3);
        let text = library_to_string(&lib);
        let back = parse_library(&text, true).unwrap();
        for (a, b) in lib.iter().zip(back.iter()) {
            assert_eq!(a.array(), b.array());
        }
    }

    #[test]
    fn fingerprints_differ_iff_content_differs() {
        let a = fingerprint(b"CA 2 1 2 2\n0 1\n1 0\n");
        let b = fingerprint(b"CA 2 1 2 2\n0 1\n1 0\n");
        let c = fingerprint(b"CA 2 1 2 2\n0 0\n1 1\n");
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn manifest_stable_layout() {
        let m = RunManifest {
            tool_version: "ca 0.1.0".into(),
            command: "search".into(),
            rows: 7,
            strength: 3,
            columns: 4,
            order: 2,
            libraries: Vec::new(),
            multisets: Vec::new(),
            results: Vec::new(),
            stats: SearchStats::default(),
            verdict: Verdict::Nonexistent,
        };
        let text = manifest_to_string(&m);
        assert!(text.starts_with("tool = ca 0.1.0\ncommand = search\nn = 7\n"));
        assert!(text.ends_with("verdict = nonexistent\n"));
        assert!(text.lines().all(|l| l.contains(" = ")));
    }
}
