//! Corpus files: blank-line separated blocks of `key = value` lines.
//!
//! ```text
//! # the cusp
//! name = A2
//! vars = x, y
//! f = x^3 + y^2
//! expect_mu = 2
//! tags = ADE
//! ```

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::field::Field;
use crate::invariants::SingularityInput;
use crate::poly::{LocalPolynomial, RingContext};

use super::expr::{parse_polynomial_at, Origin};
use super::ParseError;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectations {
    pub mu: Option<u64>,
    pub tau: Option<u64>,
    pub e_crit: Option<u64>,
    pub icis: Option<bool>,
}

/// One germ of the corpus, with its equations kept as source text so they
/// can be read over any coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub vars: Vec<String>,
    pub polys: Vec<String>,
    pub expect: Expectations,
    pub tags: Vec<String>,
    /// Where each equation starts in the source.
    origins: Vec<Origin>,
}

impl CorpusEntry {
    pub fn n(&self) -> usize {
        self.vars.len() - self.polys.len()
    }

    pub fn k(&self) -> usize {
        self.polys.len()
    }

    pub fn context(&self, field: Field) -> Result<Arc<RingContext>, ParseError> {
        let origin = self.origins.first().copied().unwrap_or_default();
        RingContext::new(self.vars.clone(), field).map_err(|e| ParseError {
            line: origin.line,
            column: 1,
            message: e.to_string(),
        })
    }

    pub fn polynomials(&self, ctx: &Arc<RingContext>) -> Result<Vec<LocalPolynomial>, ParseError> {
        self.polys
            .iter()
            .zip(&self.origins)
            .map(|(src, &o)| parse_polynomial_at(src, ctx, o))
            .collect()
    }

    /// The germ over `field`.
    pub fn input(&self, field: Field) -> Result<SingularityInput, ParseError> {
        let ctx = self.context(field)?;
        let polys = self.polynomials(&ctx)?;
        let origin = self.origins.first().copied().unwrap_or_default();
        SingularityInput::new(&ctx, polys).map_err(|e| ParseError {
            line: origin.line,
            column: 1,
            message: e.to_string(),
        })
    }

    /// The entry in corpus syntax.
    pub fn to_text(&self) -> String {
        let mut out = format!("name = {}\nvars = {}\n", self.name, self.vars.join(", "));
        for f in &self.polys {
            out.push_str(&format!("f = {f}\n"));
        }
        let e = &self.expect;
        for (key, v) in [("expect_mu", e.mu), ("expect_tau", e.tau), ("expect_e_crit", e.e_crit)] {
            if let Some(v) = v {
                out.push_str(&format!("{key} = {v}\n"));
            }
        }
        if let Some(b) = e.icis {
            out.push_str(&format!("expect_icis = {b}\n"));
        }
        if !self.tags.is_empty() {
            out.push_str(&format!("tags = {}\n", self.tags.join(", ")));
        }
        out
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

struct Block<'a> {
    lines: Vec<(usize, &'a str)>,
}

fn blocks(text: &str) -> Vec<Block<'_>> {
    let mut out = Vec::new();
    let mut current = Block { lines: Vec::new() };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if raw.trim().is_empty() {
            if !current.lines.is_empty() {
                out.push(std::mem::replace(&mut current, Block { lines: Vec::new() }));
            }
            continue;
        }
        // a comment-only line neither separates blocks nor contributes a key
        if line.trim().is_empty() {
            continue;
        }
        current.lines.push((i + 1, line));
    }
    if !current.lines.is_empty() {
        out.push(current);
    }
    out
}

fn parse_block(block: &Block<'_>) -> Result<CorpusEntry, ParseError> {
    let start = block.lines[0].0;
    let mut name: Option<String> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut polys: Vec<(String, Origin)> = Vec::new();
    let mut expect = Expectations::default();
    let mut tags: Option<Vec<String>> = None;
    let mut seen: Vec<&str> = Vec::new();

    for &(line, text) in &block.lines {
        let err = |column: usize, message: String| ParseError { line, column, message };
        let Some(eq) = text.find('=') else {
            let col = text.len() - text.trim_start().len() + 1;
            return Err(err(col, "expected `key = value`".into()));
        };
        let key = text[..eq].trim();
        let value_start = eq + 1 + (text[eq + 1..].len() - text[eq + 1..].trim_start().len());
        let value = text[eq + 1..].trim();
        let key_col = text.len() - text.trim_start().len() + 1;
        let value_col = value_start + 1;
        if key != "f" {
            if seen.contains(&key) {
                return Err(err(key_col, format!("duplicate key `{key}`")));
            }
            seen.push(key);
        }
        let int = |v: &str| -> Result<u64, ParseError> {
            v.parse::<u64>()
                .map_err(|_| err(value_col, format!("expected a non-negative integer for `{key}`")))
        };
        match key {
            "name" => {
                if !is_identifier(value) {
                    return Err(err(value_col, format!("invalid name `{value}`")));
                }
                name = Some(value.to_string());
            }
            "vars" => {
                let list: Vec<String> = value.split(',').map(|v| v.trim().to_string()).collect();
                if let Some(bad) = list.iter().find(|v| !is_identifier(v)) {
                    return Err(err(value_col, format!("invalid variable name `{bad}`")));
                }
                vars = Some(list);
            }
            "f" => polys.push((
                value.to_string(),
                Origin {
                    line,
                    column: value_col,
                },
            )),
            "expect_mu" => expect.mu = Some(int(value)?),
            "expect_tau" => expect.tau = Some(int(value)?),
            "expect_e_crit" => expect.e_crit = Some(int(value)?),
            "expect_icis" => {
                expect.icis = Some(match value {
                    "true" => true,
                    "false" => false,
                    _ => return Err(err(value_col, "expected `true` or `false` for `expect_icis`".into())),
                })
            }
            "tags" => {
                tags = Some(
                    value
                        .split(',')
                        .map(|t| t.trim().to_string())
                        .filter(|t| !t.is_empty())
                        .collect(),
                );
            }
            other => return Err(err(key_col, format!("unknown key `{other}`"))),
        }
    }

    let missing = |what: &str| ParseError {
        line: start,
        column: 1,
        message: format!("entry is missing `{what}`"),
    };
    let name = name.ok_or_else(|| missing("name"))?;
    let vars = vars.ok_or_else(|| missing("vars"))?;
    if polys.is_empty() {
        return Err(missing("f"));
    }
    if polys.len() > vars.len() {
        return Err(ParseError {
            line: start,
            column: 1,
            message: format!("{} equations in {} variables", polys.len(), vars.len()),
        });
    }
    let (polys, origins) = polys.into_iter().unzip();
    let entry = CorpusEntry {
        name,
        vars,
        polys,
        expect,
        tags: tags.unwrap_or_default(),
        origins,
    };
    // surface syntax errors, unknown variables and non-germs now rather than at run time
    entry.input(Field::Rational)?;
    Ok(entry)
}

/// Parses a single entry.
pub fn parse_entry(text: &str) -> Result<CorpusEntry, ParseError> {
    let mut bs = blocks(text);
    match bs.len() {
        0 => Err(ParseError {
            line: 1,
            column: 1,
            message: "empty input".into(),
        }),
        1 => parse_block(&bs.remove(0)),
        _ => Err(ParseError {
            line: bs[1].lines[0].0,
            column: 1,
            message: "expected a single entry".into(),
        }),
    }
}

/// Parses a whole corpus file; an empty file is an error.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, ParseError> {
    let bs = blocks(text);
    if bs.is_empty() {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "corpus contains no entries".into(),
        });
    }
    let entries: Vec<CorpusEntry> = bs.iter().map(parse_block).collect::<Result<_, _>>()?;
    for (i, e) in entries.iter().enumerate() {
        if entries[..i].iter().any(|o| o.name == e.name) {
            return Err(ParseError {
                line: e.origins[0].line,
                column: 1,
                message: format!("duplicate entry name `{}`", e.name),
            });
        }
    }
    Ok(entries)
}
