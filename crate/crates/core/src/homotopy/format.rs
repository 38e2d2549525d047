//! Line-oriented table file: parsing and canonical serialization.
//!
//! ```text
//! stem 3 0 24
//! gen nu
//! prod nu nu -> 6 1
//! group 6 3 0 12
//! gen nu'
//! susp 0,1
//! stab 3 2
//! gamma 2 1 1
//! antip 1
//! src "Toda, Composition Methods, Prop. 5.6"
//! name alpha1_3 6 3 4
//! ```
//!
//! Empty coefficient lists and empty torsion lists are written by omitting
//! the trailing field.

use std::fmt::{self, Write as _};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableFile {
    pub stems: Vec<StemDecl>,
    pub products: Vec<ProductDecl>,
    pub entries: Vec<EntryDecl>,
    pub names: Vec<NameDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StemDecl {
    pub degree: u32,
    pub free_rank: usize,
    pub torsion: Vec<i64>,
    pub generators: Vec<String>,
    pub source: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductDecl {
    pub left: String,
    pub right: String,
    pub degree: u32,
    pub coeffs: Vec<i64>,
    pub source: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryDecl {
    pub m: u32,
    pub q: u32,
    pub free_rank: usize,
    pub torsion: Vec<i64>,
    pub generators: Vec<GenDecl>,
    pub source: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenDecl {
    pub name: String,
    pub susp: Option<Vec<i64>>,
    pub stab: Option<(u32, Vec<i64>)>,
    pub gamma: Vec<GammaDecl>,
    pub antip: Option<Vec<i64>>,
    pub source: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaDecl {
    pub k: u32,
    pub degree: u32,
    pub coeffs: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameDecl {
    pub name: String,
    pub m: u32,
    pub q: u32,
    pub coeffs: Vec<i64>,
    pub source: Option<String>,
}

/// What `gen`, annotations and `src` attach to.
#[derive(Clone, Copy)]
enum Cursor {
    None,
    Stem(usize),
    Entry(usize),
    Gen(usize, usize),
    Product(usize),
    Name(usize),
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token { text: &line[s..i], column: s + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &line[s..], column: s + 1 });
    }
    out
}

/// Drops a `#` comment, ignoring `#` inside double quotes.
fn strip_comment(line: &str) -> &str {
    let mut in_quote = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => in_quote = !in_quote,
            '#' if !in_quote => return &line[..i],
            _ => {}
        }
    }
    line
}

struct LineParser<'a> {
    line_no: usize,
    tokens: Vec<Token<'a>>,
    pos: usize,
    eol_column: usize,
}

impl<'a> LineParser<'a> {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line_no, column, message: message.into() }
    }

    fn next(&mut self, what: &str) -> Result<&Token<'a>, ParseError> {
        let col = self.eol_column;
        let t = self.tokens.get(self.pos).ok_or_else(|| self.err(col, format!("expected {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    fn optional(&mut self) -> Option<&Token<'a>> {
        let t = self.tokens.get(self.pos)?;
        self.pos += 1;
        Some(t)
    }

    fn uint<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        let (text, column) = {
            let t = self.next(what)?;
            (t.text, t.column)
        };
        text.parse::<T>()
            .map_err(|_| self.err(column, format!("expected {what}, found `{text}`")))
    }

    fn word(&mut self, what: &str) -> Result<String, ParseError> {
        Ok(self.next(what)?.text.to_string())
    }

    fn int_list_opt(&mut self) -> Result<Vec<i64>, ParseError> {
        let Some(t) = self.optional() else { return Ok(vec![]) };
        let (text, column) = (t.text, t.column);
        text.split(',')
            .map(|s| {
                s.parse::<i64>().map_err(|_| {
                    self.err(column, format!("invalid integer `{s}` in list `{text}`"))
                })
            })
            .collect()
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.tokens.get(self.pos) {
            Some(t) => Err(self.err(t.column, format!("unexpected trailing `{}`", t.text))),
            None => Ok(()),
        }
    }
}

pub fn parse(text: &str) -> Result<TableFile, ParseError> {
    let mut file = TableFile::default();
    let mut cursor = Cursor::None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let body = strip_comment(raw);
        let tokens = tokenize(body);
        if tokens.is_empty() {
            continue;
        }
        let eol_column = body.trim_end().len() + 1;
        let keyword = tokens[0].text;
        let kw_col = tokens[0].column;
        let mut p = LineParser { line_no, tokens, pos: 1, eol_column };

        // `src` takes the raw remainder of the line
        if keyword == "src" {
            let rest = body[kw_col - 1 + 3..].trim();
            let col = body.len() - body.trim_start().len() + 4;
            if rest.len() < 2 || !rest.starts_with('"') || !rest.ends_with('"') {
                return Err(p.err(col + 1, "expected a double-quoted citation"));
            }
            let inner = &rest[1..rest.len() - 1];
            if inner.contains('"') {
                return Err(p.err(col + 1, "citation must not contain `\"`"));
            }
            let slot = match cursor {
                Cursor::None => return Err(p.err(kw_col, "`src` before any declaration")),
                Cursor::Stem(i) => &mut file.stems[i].source,
                Cursor::Entry(i) => &mut file.entries[i].source,
                Cursor::Gen(i, j) => &mut file.entries[i].generators[j].source,
                Cursor::Product(i) => &mut file.products[i].source,
                Cursor::Name(i) => &mut file.names[i].source,
            };
            if slot.is_some() {
                return Err(p.err(kw_col, "duplicate `src`"));
            }
            *slot = Some(inner.to_string());
            continue;
        }

        match keyword {
            "stem" => {
                let degree = p.uint("stem degree")?;
                let free_rank = p.uint("free rank")?;
                let torsion = p.int_list_opt()?;
                p.finish()?;
                file.stems.push(StemDecl { degree, free_rank, torsion, generators: vec![], source: None });
                cursor = Cursor::Stem(file.stems.len() - 1);
            }
            "group" => {
                let m = p.uint("m")?;
                let q = p.uint("q")?;
                let free_rank = p.uint("free rank")?;
                let torsion = p.int_list_opt()?;
                p.finish()?;
                file.entries.push(EntryDecl { m, q, free_rank, torsion, generators: vec![], source: None });
                cursor = Cursor::Entry(file.entries.len() - 1);
            }
            "gen" => {
                let name = p.word("generator name")?;
                p.finish()?;
                cursor = match cursor {
                    Cursor::Stem(i) => {
                        file.stems[i].generators.push(name);
                        Cursor::Stem(i)
                    }
                    Cursor::Entry(i) | Cursor::Gen(i, _) => {
                        file.entries[i].generators.push(GenDecl { name, ..Default::default() });
                        Cursor::Gen(i, file.entries[i].generators.len() - 1)
                    }
                    _ => return Err(p.err(kw_col, "`gen` must follow `stem` or `group`")),
                };
            }
            "susp" | "stab" | "gamma" | "antip" => {
                let Cursor::Gen(i, j) = cursor else {
                    return Err(p.err(kw_col, format!("`{keyword}` must follow `gen` inside a `group`")));
                };
                let g = &mut file.entries[i].generators[j];
                let dup = match keyword {
                    "susp" => {
                        let v = p.int_list_opt()?;
                        g.susp.replace(v).is_some()
                    }
                    "stab" => {
                        let d = p.uint("stable degree")?;
                        let v = p.int_list_opt()?;
                        g.stab.replace((d, v)).is_some()
                    }
                    "gamma" => {
                        let k: u32 = p.uint("component index k")?;
                        let degree = p.uint("stable degree")?;
                        let coeffs = p.int_list_opt()?;
                        let dup = g.gamma.iter().any(|c| c.k == k);
                        g.gamma.push(GammaDecl { k, degree, coeffs });
                        dup
                    }
                    _ => {
                        let v = p.int_list_opt()?;
                        g.antip.replace(v).is_some()
                    }
                };
                if dup {
                    return Err(p.err(kw_col, format!("duplicate `{keyword}` annotation")));
                }
                p.finish()?;
            }
            "prod" => {
                let left = p.word("left generator")?;
                let right = p.word("right generator")?;
                let arrow = p.next("`->`")?;
                if arrow.text != "->" {
                    let (c, t) = (arrow.column, arrow.text.to_string());
                    return Err(p.err(c, format!("expected `->`, found `{t}`")));
                }
                let degree = p.uint("product degree")?;
                let coeffs = p.int_list_opt()?;
                p.finish()?;
                file.products.push(ProductDecl { left, right, degree, coeffs, source: None });
                cursor = Cursor::Product(file.products.len() - 1);
            }
            "name" => {
                let name = p.word("element name")?;
                let m = p.uint("m")?;
                let q = p.uint("q")?;
                let coeffs = p.int_list_opt()?;
                p.finish()?;
                file.names.push(NameDecl { name, m, q, coeffs, source: None });
                cursor = Cursor::Name(file.names.len() - 1);
            }
            other => return Err(p.err(kw_col, format!("unknown directive `{other}`"))),
        }
    }
    Ok(file)
}

fn list(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn push_line(out: &mut String, parts: &[String]) {
    let parts: Vec<&str> = parts.iter().map(String::as_str).filter(|s| !s.is_empty()).collect();
    out.push_str(&parts.join(" "));
    out.push('\n');
}

fn push_src(out: &mut String, src: &Option<String>) {
    if let Some(s) = src {
        let _ = writeln!(out, "src \"{s}\"");
    }
}

impl TableFile {
    /// Canonical text form; `parse(serialize(f)) == f`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for s in &self.stems {
            push_line(&mut out, &["stem".into(), s.degree.to_string(), s.free_rank.to_string(), list(&s.torsion)]);
            push_src(&mut out, &s.source);
            for g in &s.generators {
                let _ = writeln!(out, "gen {g}");
            }
        }
        for p in &self.products {
            push_line(
                &mut out,
                &["prod".into(), p.left.clone(), p.right.clone(), "->".into(), p.degree.to_string(), list(&p.coeffs)],
            );
            push_src(&mut out, &p.source);
        }
        for e in &self.entries {
            push_line(
                &mut out,
                &["group".into(), e.m.to_string(), e.q.to_string(), e.free_rank.to_string(), list(&e.torsion)],
            );
            push_src(&mut out, &e.source);
            for g in &e.generators {
                let _ = writeln!(out, "gen {}", g.name);
                if let Some(v) = &g.susp {
                    push_line(&mut out, &["susp".into(), list(v)]);
                }
                if let Some((d, v)) = &g.stab {
                    push_line(&mut out, &["stab".into(), d.to_string(), list(v)]);
                }
                for c in &g.gamma {
                    push_line(&mut out, &["gamma".into(), c.k.to_string(), c.degree.to_string(), list(&c.coeffs)]);
                }
                if let Some(v) = &g.antip {
                    push_line(&mut out, &["antip".into(), list(v)]);
                }
                push_src(&mut out, &g.source);
            }
        }
        for n in &self.names {
            push_line(
                &mut out,
                &["name".into(), n.name.clone(), n.m.to_string(), n.q.to_string(), list(&n.coeffs)],
            );
            push_src(&mut out, &n.source);
        }
        out
    }
}

impl fmt::Display for TableFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}
