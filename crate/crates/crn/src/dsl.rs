//! Text format for reaction networks, plus JSON serialization.
//!
//! A document is a sequence of statements separated by newlines or
//! semicolons; `#` starts a comment running to the end of the line.
//!
//! ```text
//! statement  := species-decl | reaction
//! species-decl := "species" identifier+            (optional, fixes ordering)
//! reaction   := complex ("->" | "<->") complex rate?
//! complex    := "0" | term ("+" term)*
//! term       := coefficient? species
//! coefficient := nonnegative decimal | fraction "p/q"
//! rate       := "[" number ("," number)? "]"
//! ```
//!
//! `<->` expands into two reactions; `[a,b]` assigns the forward then the
//! backward constant, and a single `[a]` applies to both directions. An
//! omitted rate defaults to 1 with a warning. Species are indexed in first
//! appearance order; the optional `species` declaration pins that order,
//! which is how serialized output round-trips to an identical network.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact::{self, Rat};
use crate::graph::{Complex, Reaction, ReactionNetwork};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A positioned message produced while parsing. Line and column are 1-based
/// and point inside the offending token.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn error(line: usize, column: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            line,
            column,
            severity: Severity::Error,
            message: message.into(),
        }
    }

    fn warning(line: usize, column: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            line,
            column,
            severity: Severity::Warning,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {}: {}", self.line, self.column, kind, self.message)
    }
}

/// Successful parse: the network plus any warnings.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub network: ReactionNetwork,
    pub warnings: Vec<Diagnostic>,
}

#[derive(Debug, Error)]
pub enum SerializeError {
    #[error("a network without reactions has no text form")]
    EmptyNetwork,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Number(Rat),
    Ident(String),
    Arrow,
    BothArrow,
    Plus,
    Comma,
    Slash,
    LBracket,
    RBracket,
    Minus,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            text,
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self, n: usize) {
        for c in self.text[..n].chars() {
            if c == '\n' {
                self.line += 1;
                self.column = 1;
            } else {
                self.column += 1;
            }
        }
        self.text = &self.text[n..];
    }

    /// Tokenizes one statement; statements end at newline, `;`, or EOF.
    /// Returns `None` at end of input.
    fn statement(&mut self) -> Option<Result<Vec<Spanned>, Diagnostic>> {
        let mut toks = Vec::new();
        loop {
            let mut chars = self.text.chars();
            let Some(c) = chars.next() else {
                return if toks.is_empty() { None } else { Some(Ok(toks)) };
            };
            match c {
                '\n' | ';' => {
                    self.bump(1);
                    if !toks.is_empty() {
                        return Some(Ok(toks));
                    }
                }
                ' ' | '\t' | '\r' => self.bump(1),
                '#' => {
                    let end = self.text.find('\n').unwrap_or(self.text.len());
                    self.bump(end);
                }
                '-' => {
                    let (line, column) = (self.line, self.column);
                    if self.text.starts_with("->") {
                        self.bump(2);
                        toks.push(Spanned {
                            tok: Tok::Arrow,
                            line,
                            column,
                        });
                    } else {
                        self.bump(1);
                        toks.push(Spanned {
                            tok: Tok::Minus,
                            line,
                            column,
                        });
                    }
                }
                '<' => {
                    let (line, column) = (self.line, self.column);
                    if self.text.starts_with("<->") {
                        self.bump(3);
                        toks.push(Spanned {
                            tok: Tok::BothArrow,
                            line,
                            column,
                        });
                    } else {
                        self.skip_statement();
                        return Some(Err(Diagnostic::error(line, column, "expected `<->`")));
                    }
                }
                '+' => {
                    self.push_simple(&mut toks, Tok::Plus);
                }
                ',' => {
                    self.push_simple(&mut toks, Tok::Comma);
                }
                '/' => {
                    self.push_simple(&mut toks, Tok::Slash);
                }
                '[' => {
                    self.push_simple(&mut toks, Tok::LBracket);
                }
                ']' => {
                    self.push_simple(&mut toks, Tok::RBracket);
                }
                c if c.is_ascii_digit() => {
                    let (line, column) = (self.line, self.column);
                    let end = self
                        .text
                        .find(|ch: char| !ch.is_ascii_digit() && ch != '.')
                        .unwrap_or(self.text.len());
                    let lit = &self.text[..end];
                    match exact::parse_decimal(lit) {
                        Some(r) => {
                            self.bump(end);
                            toks.push(Spanned {
                                tok: Tok::Number(r),
                                line,
                                column,
                            });
                        }
                        None => {
                            self.skip_statement();
                            return Some(Err(Diagnostic::error(
                                line,
                                column,
                                format!("malformed number `{lit}`"),
                            )));
                        }
                    }
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let (line, column) = (self.line, self.column);
                    let end = self
                        .text
                        .find(|ch: char| !ch.is_ascii_alphanumeric() && ch != '_' && ch != '\'')
                        .unwrap_or(self.text.len());
                    let name = self.text[..end].to_string();
                    self.bump(end);
                    toks.push(Spanned {
                        tok: Tok::Ident(name),
                        line,
                        column,
                    });
                }
                other => {
                    let (line, column) = (self.line, self.column);
                    self.skip_statement();
                    return Some(Err(Diagnostic::error(
                        line,
                        column,
                        format!("unexpected character `{other}`"),
                    )));
                }
            }
        }
    }

    /// Advances past the rest of the current statement after a lex error.
    fn skip_statement(&mut self) {
        let end = self
            .text
            .find(['\n', ';'])
            .map(|i| i + 1)
            .unwrap_or(self.text.len());
        self.bump(end);
    }

    fn push_simple(&mut self, toks: &mut Vec<Spanned>, tok: Tok) {
        toks.push(Spanned {
            tok,
            line: self.line,
            column: self.column,
        });
        self.bump(1);
    }
}

struct Builder {
    species: Vec<String>,
    edges: BTreeMap<(Complex, Complex), Rat>,
}

impl Builder {
    fn species_index(&mut self, name: &str) -> usize {
        match self.species.iter().position(|s| s == name) {
            Some(i) => i,
            None => {
                self.species.push(name.to_string());
                self.species.len() - 1
            }
        }
    }
}

/// Raw complex: terms as (coefficient, species index), before the global
/// dimension is known.
type RawComplex = Vec<(Rat, usize)>;

/// Parsed rate bracket: forward constant, optional backward constant, and
/// the position of the forward constant.
type RateSpec = (Rat, Option<Rat>, usize, usize);

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&Spanned> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn end_position(&self) -> (usize, usize) {
        self.toks
            .last()
            .map(|t| (t.line, t.column))
            .unwrap_or((1, 1))
    }

    fn error_here(&self, message: impl Into<String>) -> Diagnostic {
        match self.peek() {
            Some(t) => Diagnostic::error(t.line, t.column, message),
            None => {
                let (line, column) = self.end_position();
                Diagnostic::error(line, column, message)
            }
        }
    }

    /// number | number "/" number
    fn rational(&mut self) -> Result<(Rat, usize, usize), Diagnostic> {
        let minus = matches!(self.peek().map(|t| &t.tok), Some(Tok::Minus));
        if minus {
            self.next();
        }
        let (value, line, column) = match self.next() {
            Some(Spanned {
                tok: Tok::Number(n),
                line,
                column,
            }) => (n.clone(), *line, *column),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return Err(self.error_here("expected a number"));
            }
        };
        let mut value = value;
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Slash)) {
            self.next();
            match self.next() {
                Some(Spanned {
                    tok: Tok::Number(den),
                    line: dl,
                    column: dc,
                }) => {
                    if !value.is_integer() || !den.is_integer() {
                        return Err(Diagnostic::error(
                            *dl,
                            *dc,
                            "fraction parts must be integers",
                        ));
                    }
                    if den.is_zero() {
                        return Err(Diagnostic::error(*dl, *dc, "zero denominator"));
                    }
                    value /= den;
                }
                _ => {
                    self.pos = self.pos.saturating_sub(1);
                    return Err(self.error_here("expected a denominator"));
                }
            }
        }
        if minus {
            value = -value;
        }
        Ok((value, line, column))
    }

    /// complex := "0" | term ("+" term)*
    fn complex(&mut self, builder: &mut Builder) -> Result<RawComplex, Diagnostic> {
        if let Some(Spanned {
            tok: Tok::Number(n),
            ..
        }) = self.peek()
        {
            if n.is_zero() {
                // Lone zero complex; a following identifier would make this a
                // zero coefficient instead.
                let next_is_ident = matches!(
                    self.toks.get(self.pos + 1).map(|t| &t.tok),
                    Some(Tok::Ident(_))
                );
                let next_is_slash = matches!(
                    self.toks.get(self.pos + 1).map(|t| &t.tok),
                    Some(Tok::Slash)
                );
                if !next_is_ident && !next_is_slash {
                    self.next();
                    return Ok(Vec::new());
                }
            }
        }
        let mut terms = Vec::new();
        loop {
            terms.push(self.term(builder)?);
            if matches!(self.peek().map(|t| &t.tok), Some(Tok::Plus)) {
                self.next();
            } else {
                break;
            }
        }
        Ok(terms)
    }

    /// term := coefficient? species
    fn term(&mut self, builder: &mut Builder) -> Result<(Rat, usize), Diagnostic> {
        let coeff = match self.peek().map(|t| &t.tok) {
            Some(Tok::Number(_)) | Some(Tok::Minus) => {
                let (value, line, column) = self.rational()?;
                if value.is_negative() {
                    return Err(Diagnostic::error(
                        line,
                        column,
                        "coefficients must be nonnegative",
                    ));
                }
                value
            }
            _ => exact::int(1),
        };
        match self.next() {
            Some(Spanned {
                tok: Tok::Ident(name),
                line,
                column,
            }) => {
                if name == "species" {
                    return Err(Diagnostic::error(
                        *line,
                        *column,
                        "`species` is a reserved word",
                    ));
                }
                let name = name.clone();
                Ok((coeff, builder.species_index(&name)))
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error_here("expected a species name"))
            }
        }
    }

    /// rate := "[" rational ("," rational)? "]"
    fn rate(&mut self) -> Result<Option<RateSpec>, Diagnostic> {
        if !matches!(self.peek().map(|t| &t.tok), Some(Tok::LBracket)) {
            return Ok(None);
        }
        self.next();
        let (forward, fl, fc) = self.rational()?;
        let backward = if matches!(self.peek().map(|t| &t.tok), Some(Tok::Comma)) {
            self.next();
            Some(self.rational()?.0)
        } else {
            None
        };
        match self.next() {
            Some(Spanned {
                tok: Tok::RBracket, ..
            }) => Ok(Some((forward, backward, fl, fc))),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error_here("expected `]`"))
            }
        }
    }
}

fn realize(raw: &RawComplex, dim: usize) -> Complex {
    let mut coords = vec![Rat::zero(); dim];
    for (c, i) in raw {
        coords[*i] += c;
    }
    Complex::new(coords)
}

struct PendingEdge {
    source: RawComplex,
    target: RawComplex,
    rate: Rat,
    line: usize,
    column: usize,
}

/// Parses a document into a network. Errors prevent a network from being
/// produced; warnings accompany a successful parse.
pub fn parse_network(text: &str) -> Result<Parsed, Vec<Diagnostic>> {
    let mut builder = Builder {
        species: Vec::new(),
        edges: BTreeMap::new(),
    };
    let mut pending: Vec<PendingEdge> = Vec::new();
    let mut errors = Vec::new();
    let mut warnings = Vec::new();

    let mut lexer = Lexer::new(text);
    while let Some(stmt) = lexer.statement() {
        let toks = match stmt {
            Ok(t) => t,
            Err(e) => {
                errors.push(e);
                continue;
            }
        };
        let mut p = Parser {
            toks: &toks,
            pos: 0,
        };
        if let Some(Spanned {
            tok: Tok::Ident(word),
            ..
        }) = p.peek()
        {
            if word == "species" {
                p.next();
                let mut any = false;
                while let Some(Spanned {
                    tok: Tok::Ident(name),
                    line,
                    column,
                }) = p.peek()
                {
                    if name == "species" {
                        errors.push(Diagnostic::error(
                            *line,
                            *column,
                            "`species` is a reserved word",
                        ));
                        break;
                    }
                    let name = name.clone();
                    builder.species_index(&name);
                    any = true;
                    p.next();
                }
                if !any {
                    errors.push(p.error_here("expected species names"));
                } else if p.peek().is_some() {
                    errors.push(p.error_here("unexpected token after species list"));
                }
                continue;
            }
        }
        match parse_reaction_statement(&mut p, &mut builder, &mut warnings) {
            Ok(mut edges) => pending.append(&mut edges),
            Err(e) => errors.push(e),
        }
    }

    let dim = builder.species.len();
    for e in pending {
        let source = realize(&e.source, dim);
        let target = realize(&e.target, dim);
        if source == target {
            errors.push(Diagnostic::error(
                e.line,
                e.column,
                format!(
                    "reaction source equals its target: {}",
                    source.render(&builder.species)
                ),
            ));
            continue;
        }
        if !e.rate.is_positive() {
            errors.push(Diagnostic::error(
                e.line,
                e.column,
                format!("non-positive rate constant {}", exact::render(&e.rate)),
            ));
            continue;
        }
        let key = (source, target);
        if builder.edges.contains_key(&key) {
            errors.push(Diagnostic::error(
                e.line,
                e.column,
                format!(
                    "duplicate reaction {} -> {}",
                    key.0.render(&builder.species),
                    key.1.render(&builder.species)
                ),
            ));
            continue;
        }
        builder.edges.insert(key, e.rate);
    }

    if !errors.is_empty() {
        return Err(errors);
    }

    let network = ReactionNetwork::new(
        builder.species.clone(),
        builder
            .edges
            .into_iter()
            .map(|((s, t), k)| Reaction::new(s, t, k)),
    )
    .expect("builder already validated the edges");

    let redundant = network.redundant_species();
    for i in redundant.coupled.iter().chain(&redundant.padding) {
        warnings.push(Diagnostic::warning(
            1,
            1,
            format!("species {} is redundant: no reaction changes it", network.species()[*i]),
        ));
    }

    Ok(Parsed { network, warnings })
}

fn parse_reaction_statement(
    p: &mut Parser,
    builder: &mut Builder,
    warnings: &mut Vec<Diagnostic>,
) -> Result<Vec<PendingEdge>, Diagnostic> {
    let source = p.complex(builder)?;
    let (reversible, line, column) = match p.next() {
        Some(Spanned {
            tok: Tok::Arrow,
            line,
            column,
        }) => (false, *line, *column),
        Some(Spanned {
            tok: Tok::BothArrow,
            line,
            column,
        }) => (true, *line, *column),
        _ => {
            p.pos = p.pos.saturating_sub(1);
            return Err(p.error_here("expected `->` or `<->`"));
        }
    };
    let target = p.complex(builder)?;
    let rate = p.rate()?;
    if p.peek().is_some() {
        return Err(p.error_here("unexpected token after reaction"));
    }
    let (forward, backward) = match rate {
        Some((f, Some(b), rl, rc)) => {
            if !reversible {
                return Err(Diagnostic::error(
                    rl,
                    rc,
                    "two rate constants require `<->`",
                ));
            }
            (f, Some(b))
        }
        Some((f, None, _, _)) => {
            // One constant on a reversible reaction applies to both
            // directions.
            let b = if reversible { Some(f.clone()) } else { None };
            (f, b)
        }
        None => {
            warnings.push(Diagnostic::warning(
                line,
                column,
                "missing rate constant, defaulting to 1",
            ));
            let b = if reversible { Some(exact::int(1)) } else { None };
            (exact::int(1), b)
        }
    };
    let mut out = vec![PendingEdge {
        source: source.clone(),
        target: target.clone(),
        rate: forward,
        line,
        column,
    }];
    if reversible {
        out.push(PendingEdge {
            source: target,
            target: source,
            rate: backward.expect("reversible reactions carry a backward rate"),
            line,
            column,
        });
    }
    Ok(out)
}

/// Canonical text form. Begins with a `species` declaration so the species
/// order survives a round trip; one reaction per line in lexicographic
/// order, rates always explicit.
pub fn serialize_dsl(net: &ReactionNetwork) -> Result<String, SerializeError> {
    if net.is_empty() {
        return Err(SerializeError::EmptyNetwork);
    }
    let mut out = String::new();
    out.push_str("species ");
    out.push_str(&net.species().join(" "));
    out.push('\n');
    for r in net.reactions() {
        out.push_str(&r.render(net.species()));
        out.push('\n');
    }
    Ok(out)
}

fn rat_to_json(r: &Rat) -> Value {
    let f = exact::to_f64(r);
    if &Rat::from_float(f).unwrap_or_else(Rat::zero) == r {
        json!(f)
    } else {
        // Not representable in binary floating point; keep it exact.
        json!(exact::render(r))
    }
}

fn complex_to_json(c: &Complex, species: &[String]) -> Value {
    let mut map = serde_json::Map::new();
    for (i, x) in c.coords().iter().enumerate() {
        if !x.is_zero() {
            map.insert(species[i].clone(), rat_to_json(x));
        }
    }
    Value::Object(map)
}

/// JSON form: `{"species": [...], "reactions": [{"source": {name: coeff},
/// "target": {...}, "rate": k}]}`. Coefficients and rates are numbers when
/// exactly representable as doubles, and `"p/q"` strings otherwise.
pub fn serialize_json(net: &ReactionNetwork) -> Value {
    json!({
        "species": net.species(),
        "reactions": net
            .reactions()
            .map(|r| {
                json!({
                    "source": complex_to_json(&r.source, net.species()),
                    "target": complex_to_json(&r.target, net.species()),
                    "rate": rat_to_json(&r.rate),
                })
            })
            .collect::<Vec<_>>(),
    })
}

fn rat_from_json(v: &Value) -> Result<Rat, String> {
    match v {
        Value::Number(n) => {
            let f = n.as_f64().ok_or("number out of range")?;
            Rat::from_float(f).ok_or_else(|| "non-finite number".to_string())
        }
        Value::String(s) => {
            let (num, den) = match s.split_once('/') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (s.trim(), "1"),
            };
            let parse_int = |t: &str| -> Result<Rat, String> {
                let (neg, t) = match t.strip_prefix('-') {
                    Some(rest) => (true, rest),
                    None => (false, t),
                };
                let r = exact::parse_decimal(t).ok_or_else(|| format!("bad rational `{s}`"))?;
                Ok(if neg { -r } else { r })
            };
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(num / den)
        }
        _ => Err("expected a number or rational string".to_string()),
    }
}

/// Parses the JSON form back into a network.
pub fn parse_json(value: &Value) -> Result<Parsed, Vec<Diagnostic>> {
    let fail = |msg: String| vec![Diagnostic::error(1, 1, msg)];
    let species: Vec<String> = value
        .get("species")
        .and_then(Value::as_array)
        .ok_or_else(|| fail("missing `species` array".into()))?
        .iter()
        .map(|s| s.as_str().map(str::to_string))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| fail("species names must be strings".into()))?;
    let dim = species.len();
    let complex_from = |v: &Value| -> Result<Complex, String> {
        let obj = v.as_object().ok_or("complex must be an object")?;
        let mut coords = vec![Rat::zero(); dim];
        for (name, coeff) in obj {
            let i = species
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| format!("unknown species `{name}`"))?;
            coords[i] = rat_from_json(coeff)?;
        }
        Ok(Complex::new(coords))
    };
    let mut reactions = Vec::new();
    for (k, r) in value
        .get("reactions")
        .and_then(Value::as_array)
        .ok_or_else(|| fail("missing `reactions` array".into()))?
        .iter()
        .enumerate()
    {
        let get = |field: &str| {
            r.get(field)
                .ok_or_else(|| format!("reaction {k}: missing `{field}`"))
        };
        let source = complex_from(get("source").map_err(fail)?).map_err(fail)?;
        let target = complex_from(get("target").map_err(fail)?).map_err(fail)?;
        let rate = rat_from_json(get("rate").map_err(fail)?).map_err(fail)?;
        reactions.push(Reaction::new(source, target, rate));
    }
    let network =
        ReactionNetwork::new(species, reactions).map_err(|e| fail(e.to_string()))?;
    let mut warnings = Vec::new();
    let redundant = network.redundant_species();
    for i in redundant.coupled.iter().chain(&redundant.padding) {
        warnings.push(Diagnostic::warning(
            1,
            1,
            format!("species {} is redundant: no reaction changes it", network.species()[*i]),
        ));
    }
    Ok(Parsed { network, warnings })
}
