//! DIMACS reading and writing, for both `p cnf` and `p dnf` headers.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::cnf::{Clause, ClauseSet, Lit};
use crate::error::{Error, Result};

/// How a clause-set read from a file is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpretation {
    #[default]
    Cnf,
    Dnf,
}

impl Interpretation {
    fn tag(self) -> &'static str {
        match self {
            Interpretation::Cnf => "cnf",
            Interpretation::Dnf => "dnf",
        }
    }
}

/// A parsed DIMACS file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimacs {
    pub kind: Interpretation,
    pub declared_vars: u32,
    pub clauses: ClauseSet,
    /// Comment lines without the leading `c `.
    pub comments: Vec<String>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses DIMACS text. Clauses may span lines; duplicate literals inside a
/// clause are merged and duplicate clauses are contracted.
pub fn parse_dimacs(text: &str) -> Result<Dimacs> {
    let mut header: Option<(Interpretation, u32, usize)> = None;
    let mut comments = Vec::new();
    let mut clauses = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut current_start = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                comments.push(rest.trim_start().to_string());
                continue;
            }
        }
        if line.starts_with('%') {
            // Trailer used by some benchmark archives.
            break;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(parse_err(line_no, "second problem line"));
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(parse_err(line_no, "expected `p cnf <vars> <clauses>`"));
            }
            let kind = match fields[0] {
                "cnf" => Interpretation::Cnf,
                "dnf" => Interpretation::Dnf,
                other => return Err(parse_err(line_no, format!("unknown format `{other}`"))),
            };
            let n = fields[1].parse().map_err(|_| parse_err(line_no, "bad variable count"))?;
            let m = fields[2].parse().map_err(|_| parse_err(line_no, "bad clause count"))?;
            header = Some((kind, n, m));
            continue;
        }
        let Some((_, n, _)) = header else {
            return Err(parse_err(line_no, "clause before problem line"));
        };
        for tok in line.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| parse_err(line_no, format!("bad literal `{tok}`")))?;
            if x == 0 {
                let c = Clause::new(current.drain(..))
                    .map_err(|e| parse_err(current_start, e.to_string()))?;
                clauses.push(c);
                continue;
            }
            if x.unsigned_abs() > u64::from(n) {
                return Err(parse_err(line_no, format!("literal {x} exceeds declared {n} variables")));
            }
            if current.is_empty() {
                current_start = line_no;
            }
            current.push(Lit::from_dimacs(x).map_err(|e| parse_err(line_no, e.to_string()))?);
        }
    }
    let Some((kind, declared_vars, _)) = header else {
        return Err(parse_err(text.lines().count().max(1), "missing problem line"));
    };
    if !current.is_empty() {
        return Err(parse_err(current_start, "last clause is not terminated by 0"));
    }
    Ok(Dimacs { kind, declared_vars, clauses: ClauseSet::new(clauses), comments })
}

/// Writes F in DIMACS form with the given comment lines.
pub fn write_dimacs<W: Write>(
    out: &mut W,
    f: &ClauseSet,
    kind: Interpretation,
    comments: &[String],
) -> io::Result<()> {
    for c in comments {
        writeln!(out, "c {c}")?;
    }
    let n = f.max_var().map_or(0, |v| v.id());
    writeln!(out, "p {} {} {}", kind.tag(), n, f.c())?;
    for c in f {
        write_clause(out, c)?;
    }
    Ok(())
}

pub(crate) fn write_clause<W: Write>(out: &mut W, c: &Clause) -> io::Result<()> {
    let mut line = String::with_capacity(4 * c.len() + 2);
    for x in c.iter() {
        let _ = write!(line, "{} ", x.to_dimacs());
    }
    line.push('0');
    writeln!(out, "{line}")
}

/// F as DIMACS CNF text.
pub fn emit_dimacs(f: &ClauseSet) -> String {
    let mut buf = Vec::new();
    write_dimacs(&mut buf, f, Interpretation::Cnf, &[]).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}
