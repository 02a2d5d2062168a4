//! A small text format (`.ktb`) for models.
//!
//! ```text
//! # comments run to the end of the line
//! model "toy"
//! description "one scalar in two dimensions"
//! base 2 [t, x]
//! field y even
//! antifield y_bar odd of y
//! ghost c odd stage 0
//! antifield c_bar even of c
//! let kinetic = y[t]^2 - y[x]^2
//! lagrangian = 1/2*kinetic
//! stage 0 { c = 0 }
//! xi { c = 0 }
//! alpha 1 { target = expr }
//! note "free text"
//! ```
//!
//! Expressions are polynomials over rationals in jet variables `name` or
//! `name[coord, …]`, with `+ - * /` (division by nonzero constants only),
//! non-negative integer powers `^k`, parentheses, total derivatives
//! `d(expr, coord, …)` and names bound by `let`. Keywords are recognized
//! only at the start of a statement, so fields may be named `xi` or `d`
//! (though `d(` always starts a derivative). Layout is free-form.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::brst::{AlphaWitness, Generator, Model, ModelError, NoetherStage};
use crate::derivation::{Chirality, Derivation};
use crate::graded::{default_coords, Field, FieldDecl, GradedPoly, MultiIndex, Parity, Rational, Role};
use crate::jet::total_derivative;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Lexical,
    Syntax,
    Semantic,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::Lexical => "lexical error",
            ErrorKind::Syntax => "syntax error",
            ErrorKind::Semantic => "semantic error",
        })
    }
}

/// A fatal diagnostic with a 1-based source position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.line, self.col, self.kind, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Warning {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: warning: {}", self.line, self.col, self.message)
    }
}

#[derive(Clone, Debug)]
pub struct Parsed {
    pub model: Model,
    pub warnings: Vec<Warning>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Str(String),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Str(_) => f.write_str("string"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, message: String| ParseError {
        kind: ErrorKind::Lexical,
        line,
        col,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: tl,
                col: tc,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            let digits: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Int(digits.parse().expect("digits")),
                line: tl,
                col: tc,
            });
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            i += 1;
            col += 1;
            loop {
                match chars.get(i) {
                    None | Some('\n') => return Err(err(tl, tc, "unterminated string".into())),
                    Some('"') => {
                        i += 1;
                        col += 1;
                        break;
                    }
                    Some('\\') => {
                        let esc = match chars.get(i + 1) {
                            Some('"') => '"',
                            Some('\\') => '\\',
                            Some('n') => '\n',
                            other => {
                                return Err(err(line, col, format!("unknown escape `\\{}`", other.copied().unwrap_or(' '))))
                            }
                        };
                        s.push(esc);
                        i += 2;
                        col += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                        col += 1;
                    }
                }
            }
            out.push(Token {
                tok: Tok::Str(s),
                line: tl,
                col: tc,
            });
            continue;
        }
        if "+-*/^()[]{},=;".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                line: tl,
                col: tc,
            });
            i += 1;
            col += 1;
            continue;
        }
        return Err(err(tl, tc, format!("unexpected character `{c}`")));
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    name: Option<String>,
    description: String,
    base: Option<(usize, Vec<String>)>,
    fields: Vec<Field>,
    by_name: HashMap<String, Field>,
    positions: HashMap<String, (usize, usize)>,
    lets: HashMap<String, GradedPoly>,
    lagrangian: Option<GradedPoly>,
    stages: BTreeMap<u32, Vec<Generator>>,
    xi: Option<BTreeMap<Field, GradedPoly>>,
    alphas: Vec<AlphaWitness>,
    notes: Vec<String>,
    warnings: Vec<Warning>,
    depth: usize,
}

const MAX_DEPTH: usize = 200;
const MAX_EXPONENT: u32 = 64;
const MAX_BASE_DIM: usize = 64;
const MAX_STAGE: u32 = 1000;

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Token, kind: ErrorKind, message: impl Into<String>) -> ParseError {
        ParseError {
            kind,
            line: t.line,
            col: t.col,
            message: message.into(),
        }
    }

    fn syntax(&self, t: &Token, expected: &str) -> ParseError {
        self.error_at(t, ErrorKind::Syntax, format!("expected {expected}, found {}", t.tok))
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn expect_sym(&mut self, c: char) -> PResult<Token> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(t)
        } else {
            Err(self.syntax(&t, &format!("`{c}`")))
        }
    }

    fn ident(&mut self) -> PResult<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            _ => Err(self.syntax(&t, "a name")),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        let (s, t) = self.ident()?;
        if s == kw {
            Ok(())
        } else {
            Err(self.syntax(&t, &format!("`{kw}`")))
        }
    }

    fn string(&mut self) -> PResult<String> {
        let t = self.next();
        match t.tok {
            Tok::Str(s) => Ok(s),
            _ => Err(self.syntax(&t, "a string")),
        }
    }

    fn small_int(&mut self) -> PResult<u32> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => n
                .to_u32()
                .ok_or_else(|| self.error_at(&t, ErrorKind::Semantic, "integer too large")),
            _ => Err(self.syntax(&t, "an integer")),
        }
    }

    fn parity(&mut self) -> PResult<Parity> {
        let (s, t) = self.ident()?;
        match s.as_str() {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            _ => Err(self.syntax(&t, "`even` or `odd`")),
        }
    }

    fn dim(&self, at: &Token) -> PResult<usize> {
        self.base
            .as_ref()
            .map(|b| b.0)
            .ok_or_else(|| self.error_at(at, ErrorKind::Semantic, "`base` must be declared before expressions"))
    }

    fn declare(&mut self, f: Field, at: &Token) -> PResult<()> {
        if self.by_name.contains_key(&f.name) || self.lets.contains_key(&f.name) {
            return Err(self.error_at(at, ErrorKind::Semantic, format!("`{}` is already declared", f.name)));
        }
        self.positions.insert(f.name.clone(), (at.line, at.col));
        self.by_name.insert(f.name.clone(), f.clone());
        self.fields.push(f);
        Ok(())
    }

    fn lookup_field(&self, name: &str, at: &Token) -> PResult<Field> {
        self.by_name
            .get(name)
            .cloned()
            .ok_or_else(|| self.error_at(at, ErrorKind::Semantic, format!("unknown field `{name}`")))
    }

    fn statement(&mut self) -> PResult<bool> {
        let t = self.peek().clone();
        let kw = match &t.tok {
            Tok::Eof => return Ok(false),
            Tok::Sym(';') => {
                self.next();
                return Ok(true);
            }
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.syntax(&t, "a statement")),
        };
        self.next();
        match kw.as_str() {
            "model" => self.name = Some(self.string()?),
            "description" => self.description = self.string()?,
            "note" => {
                let s = self.string()?;
                self.notes.push(s);
            }
            "base" => {
                if self.base.is_some() {
                    return Err(self.error_at(&t, ErrorKind::Semantic, "`base` declared twice"));
                }
                let n = self.small_int()? as usize;
                if n == 0 || n > MAX_BASE_DIM {
                    return Err(self.error_at(
                        &t,
                        ErrorKind::Semantic,
                        format!("base dimension must be between 1 and {MAX_BASE_DIM}"),
                    ));
                }
                let coords = if self.is_sym('[') {
                    self.next();
                    let mut names = Vec::new();
                    loop {
                        let (c, ct) = self.ident()?;
                        if names.contains(&c) {
                            return Err(self.error_at(&ct, ErrorKind::Semantic, format!("duplicate coordinate `{c}`")));
                        }
                        names.push(c);
                        if self.is_sym(',') {
                            self.next();
                        } else {
                            break;
                        }
                    }
                    let close = self.expect_sym(']')?;
                    if names.len() != n {
                        return Err(self.error_at(
                            &close,
                            ErrorKind::Semantic,
                            format!("{} coordinate names for base dimension {n}", names.len()),
                        ));
                    }
                    names
                } else {
                    default_coords(n)
                };
                self.base = Some((n, coords));
            }
            "field" => {
                let (name, at) = self.ident()?;
                let p = self.parity()?;
                self.declare(Field::field(name, p), &at)?;
            }
            "ghost" => {
                let (name, at) = self.ident()?;
                let p = self.parity()?;
                self.keyword("stage")?;
                let k = self.small_int()?;
                if k > MAX_STAGE {
                    return Err(self.error_at(&at, ErrorKind::Semantic, format!("stage {k} exceeds {MAX_STAGE}")));
                }
                self.declare(Field::ghost(name, p, k), &at)?;
            }
            "antifield" => {
                let (name, at) = self.ident()?;
                let p = self.parity()?;
                self.keyword("of")?;
                let (dual, dt) = self.ident()?;
                let dual = self.lookup_field(&dual, &dt)?;
                let (role, ant) = match dual.role {
                    Role::Field => (Role::Antifield, 1),
                    Role::Ghost { stage } => (Role::GhostAntifield { stage }, stage + 2),
                    _ => {
                        return Err(self.error_at(&dt, ErrorKind::Semantic, format!("`{}` is itself an antifield", dual.name)))
                    }
                };
                if p != dual.parity.flip() {
                    return Err(self.error_at(
                        &at,
                        ErrorKind::Semantic,
                        format!("antifield `{name}` must be {} (its dual `{}` is {})", dual.parity.flip(), dual.name, dual.parity),
                    ));
                }
                let decl = FieldDecl {
                    name,
                    parity: p,
                    ghost_number: 0,
                    antifield_number: ant,
                    role,
                    dual_of: Some(dual.name.clone()),
                };
                self.declare(Field::new(decl), &at)?;
            }
            "let" => {
                let (name, at) = self.ident()?;
                if self.by_name.contains_key(&name) || self.lets.contains_key(&name) {
                    return Err(self.error_at(&at, ErrorKind::Semantic, format!("`{name}` is already declared")));
                }
                self.expect_sym('=')?;
                let value = self.expr()?;
                self.lets.insert(name, value);
            }
            "lagrangian" => {
                if self.lagrangian.is_some() {
                    return Err(self.error_at(&t, ErrorKind::Semantic, "`lagrangian` given twice"));
                }
                self.expect_sym('=')?;
                self.lagrangian = Some(self.expr()?);
            }
            "stage" => {
                let k = self.small_int()?;
                if self.stages.contains_key(&k) {
                    return Err(self.error_at(&t, ErrorKind::Semantic, format!("stage {k} given twice")));
                }
                let entries = self.block()?;
                let mut gens = Vec::with_capacity(entries.len());
                for (ghost, at, density) in entries {
                    let antifield = self
                        .fields
                        .iter()
                        .find(|a| a.dual_of.as_deref() == Some(ghost.name.as_str()))
                        .cloned()
                        .ok_or_else(|| self.error_at(&at, ErrorKind::Semantic, format!("ghost `{}` has no antifield", ghost.name)))?;
                    self.positions.entry(format!("generator:{}", ghost.name)).or_insert((at.line, at.col));
                    gens.push(Generator {
                        ghost,
                        antifield,
                        density,
                    });
                }
                self.stages.insert(k, gens);
            }
            "xi" => {
                if self.xi.is_some() {
                    return Err(self.error_at(&t, ErrorKind::Semantic, "`xi` given twice"));
                }
                let entries = self.block()?;
                self.xi = Some(entries.into_iter().map(|(f, _, p)| (f, p)).collect());
            }
            "alpha" => {
                let k = self.small_int()?;
                for (target, _, alpha) in self.block()? {
                    self.alphas.push(AlphaWitness { stage: k, target, alpha });
                }
            }
            _ => return Err(self.error_at(&t, ErrorKind::Syntax, format!("unknown statement `{kw}`"))),
        }
        Ok(true)
    }

    /// `{ name = expr … }`
    fn block(&mut self) -> PResult<Vec<(Field, Token, GradedPoly)>> {
        self.expect_sym('{')?;
        let mut out: Vec<(Field, Token, GradedPoly)> = Vec::new();
        while !self.is_sym('}') {
            if self.is_sym(';') {
                self.next();
                continue;
            }
            let (name, at) = self.ident()?;
            let f = self.lookup_field(&name, &at)?;
            if out.iter().any(|(g, _, _)| g == &f) {
                return Err(self.error_at(&at, ErrorKind::Semantic, format!("`{name}` given twice in block")));
            }
            self.expect_sym('=')?;
            let p = self.expr()?;
            out.push((f, at, p));
        }
        self.expect_sym('}')?;
        Ok(out)
    }

    fn expr(&mut self) -> PResult<GradedPoly> {
        let mut acc = self.term()?;
        loop {
            if self.is_sym('+') {
                self.next();
                acc += self.term()?;
            } else if self.is_sym('-') {
                self.next();
                acc -= self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<GradedPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.is_sym('*') {
                let op = self.next();
                let rhs = self.unary()?;
                self.lint_product(&acc, &rhs, &op);
                acc = acc.mul(&rhs);
            } else if self.is_sym('/') {
                let op = self.next();
                let rhs = self.unary()?;
                match rhs.as_constant() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&(Rational::from_integer(1.into()) / c)),
                    Some(_) => return Err(self.error_at(&op, ErrorKind::Semantic, "division by zero")),
                    None => return Err(self.error_at(&op, ErrorKind::Semantic, "division by a non-constant expression")),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> PResult<GradedPoly> {
        if self.depth >= MAX_DEPTH {
            let t = self.peek().clone();
            return Err(self.error_at(&t, ErrorKind::Syntax, "expression nested too deeply"));
        }
        self.depth += 1;
        let out = self.unary_inner();
        self.depth -= 1;
        out
    }

    fn unary_inner(&mut self) -> PResult<GradedPoly> {
        if self.is_sym('-') {
            self.next();
            return Ok(-self.unary()?);
        }
        if self.is_sym('+') {
            self.next();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> PResult<GradedPoly> {
        let base = self.atom()?;
        if self.is_sym('^') {
            let op = self.next();
            let k = self.small_int()?;
            if k > MAX_EXPONENT {
                return Err(self.error_at(&op, ErrorKind::Semantic, format!("exponent {k} exceeds {MAX_EXPONENT}")));
            }
            if k >= 2 && base.terms().any(|(m, _)| m.factors().iter().any(|(v, _)| v.is_odd())) {
                self.warn(&op, "a power of an expression containing odd variables; odd squares vanish");
            }
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn coord(&mut self) -> PResult<usize> {
        let t = self.next();
        let (n, names) = match &self.base {
            Some(b) => (b.0, b.1.clone()),
            None => return Err(self.error_at(&t, ErrorKind::Semantic, "`base` must be declared before expressions")),
        };
        match &t.tok {
            Tok::Ident(s) => names
                .iter()
                .position(|c| c == s)
                .ok_or_else(|| self.error_at(&t, ErrorKind::Semantic, format!("unknown coordinate `{s}`"))),
            Tok::Int(k) => k
                .to_usize()
                .filter(|&k| k < n)
                .ok_or_else(|| self.error_at(&t, ErrorKind::Semantic, format!("coordinate index {k} out of range"))),
            _ => Err(self.syntax(&t, "a coordinate")),
        }
    }

    fn atom(&mut self) -> PResult<GradedPoly> {
        let t = self.next();
        match &t.tok {
            Tok::Int(k) => Ok(GradedPoly::constant(Rational::from_integer(k.clone()))),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(name) if name == "d" && self.is_sym('(') => {
                self.next();
                let mut e = self.expr()?;
                self.expect_sym(',')?;
                loop {
                    let c = self.coord()?;
                    e = total_derivative(&e, c);
                    if self.is_sym(',') {
                        self.next();
                    } else {
                        break;
                    }
                }
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(v) = self.lets.get(name) {
                    if self.is_sym('[') {
                        return Err(self.error_at(&t, ErrorKind::Semantic, format!("`{name}` is a binding, not a field; use d(…)")));
                    }
                    return Ok(v.clone());
                }
                let f = self.lookup_field(name, &t)?;
                let n = self.dim(&t)?;
                let mut idx = MultiIndex::zero(n);
                if self.is_sym('[') {
                    self.next();
                    if !self.is_sym(']') {
                        loop {
                            idx = idx.plus_coord(self.coord()?);
                            if self.is_sym(',') {
                                self.next();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect_sym(']')?;
                }
                Ok(GradedPoly::var(f.jet(idx)))
            }
            _ => Err(self.syntax(&t, "an expression")),
        }
    }

    fn warn(&mut self, at: &Token, message: &str) {
        self.warnings.push(Warning {
            line: at.line,
            col: at.col,
            message: message.to_string(),
        });
    }

    fn lint_product(&mut self, a: &GradedPoly, b: &GradedPoly, op: &Token) {
        for (ma, _) in a.terms() {
            for (mb, _) in b.terms() {
                for (v, _) in ma.factors() {
                    if v.is_odd() && mb.exponent_of(v) > 0 {
                        let msg = format!("odd variable `{}` is multiplied by itself; the product vanishes", v.field.name);
                        self.warn(op, &msg);
                        return;
                    }
                }
            }
        }
    }

    fn finish(self) -> Result<Parsed, ParseError> {
        let eof = self.toks.last().expect("eof token").clone();
        let (n, coords) = self
            .base
            .clone()
            .ok_or_else(|| self.error_at(&eof, ErrorKind::Semantic, "missing `base` declaration"))?;
        let mut stages = Vec::with_capacity(self.stages.len());
        for (i, (k, generators)) in self.stages.iter().enumerate() {
            if *k != i as u32 {
                return Err(self.error_at(&eof, ErrorKind::Semantic, format!("stage {i} is missing")));
            }
            stages.push(NoetherStage {
                stage: *k,
                generators: generators.clone(),
            });
        }
        let xi = match &self.xi {
            Some(comps) => Some(
                Derivation::new(Chirality::Left, Parity::Odd, 1, comps.clone())
                    .map_err(|e| self.error_at(&eof, ErrorKind::Semantic, format!("xi: {e}")))?,
            ),
            None => None,
        };
        let model = Model {
            name: self.name.clone().unwrap_or_else(|| "unnamed".into()),
            description: self.description.clone(),
            base_dim: n,
            coords,
            fields: self.fields.clone(),
            lagrangian: self.lagrangian.clone().unwrap_or_default(),
            stages,
            brst_xi: xi,
            alpha_witnesses: self.alphas.clone(),
            notes: self.notes.clone(),
        };
        model.validate().map_err(|e| {
            let (line, col) = self.position_of(&e).unwrap_or((eof.line, eof.col));
            ParseError {
                kind: ErrorKind::Semantic,
                line,
                col,
                message: e.to_string(),
            }
        })?;
        Ok(Parsed {
            model,
            warnings: self.warnings,
        })
    }

    fn position_of(&self, e: &ModelError) -> Option<(usize, usize)> {
        let key = match e {
            ModelError::AntifieldParity { name, .. } | ModelError::DanglingDual { name, .. } => name.clone(),
            ModelError::RoleGrading(n) | ModelError::MissingGhostAntifield(n) | ModelError::MissingGenerator(n) => n.clone(),
            ModelError::Generator { ghost, .. } => format!("generator:{ghost}"),
            _ => return None,
        };
        self.positions.get(&key).copied()
    }
}

/// Parses a model source; warnings accompany a successful parse.
pub fn parse_model(src: &str) -> Result<Parsed, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        name: None,
        description: String::new(),
        base: None,
        fields: Vec::new(),
        by_name: HashMap::new(),
        positions: HashMap::new(),
        lets: HashMap::new(),
        lagrangian: None,
        stages: BTreeMap::new(),
        xi: None,
        alphas: Vec::new(),
        notes: Vec::new(),
        warnings: Vec::new(),
        depth: 0,
    };
    while p.statement()? {}
    p.finish()
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

const TERMS_PER_LINE: usize = 4;

/// Renders a polynomial over several lines, a few terms per line.
fn render_expr(p: &GradedPoly, coords: &[String], indent: &str) -> String {
    if p.len() <= TERMS_PER_LINE {
        return p.render(coords);
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let single = GradedPoly::term(c.clone(), m.clone()).render(coords);
        if i == 0 {
            out.push('\n');
            out.push_str(indent);
            out.push_str(&single);
            continue;
        }
        if i % TERMS_PER_LINE == 0 {
            out.push('\n');
            out.push_str(indent);
        } else {
            out.push(' ');
        }
        match single.strip_prefix('-') {
            Some(rest) => {
                out.push_str("- ");
                out.push_str(rest);
            }
            None => {
                out.push_str("+ ");
                out.push_str(&single);
            }
        }
    }
    out
}

/// Renders a model as DSL source; `parse_model` inverts it for models
/// whose antifields are declared after their duals.
pub fn render_model(m: &Model) -> String {
    let mut out = String::new();
    out.push_str(&format!("model {}\n", quote(&m.name)));
    if !m.description.is_empty() {
        out.push_str(&format!("description {}\n", quote(&m.description)));
    }
    out.push_str(&format!("base {} [{}]\n", m.base_dim, m.coords.join(", ")));
    for note in &m.notes {
        out.push_str(&format!("note {}\n", quote(note)));
    }
    out.push('\n');
    for f in &m.fields {
        let line = match f.role {
            Role::Field => format!("field {} {}", f.name, f.parity),
            Role::Ghost { stage } => format!("ghost {} {} stage {stage}", f.name, f.parity),
            Role::Antifield | Role::GhostAntifield { .. } => {
                format!("antifield {} {} of {}", f.name, f.parity, f.dual_of.as_deref().unwrap_or("?"))
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str(&format!("\nlagrangian = {}\n", render_expr(&m.lagrangian, &m.coords, "    ")));
    for stage in &m.stages {
        out.push_str(&format!("\nstage {} {{\n", stage.stage));
        for g in &stage.generators {
            out.push_str(&format!("  {} = {}\n", g.ghost.name, render_expr(&g.density, &m.coords, "      ")));
        }
        out.push_str("}\n");
    }
    if let Some(xi) = &m.brst_xi {
        out.push_str("\nxi {\n");
        for (f, p) in xi.components() {
            out.push_str(&format!("  {} = {}\n", f.name, render_expr(p, &m.coords, "      ")));
        }
        out.push_str("}\n");
    }
    let mut by_stage: BTreeMap<u32, Vec<&AlphaWitness>> = BTreeMap::new();
    for w in &m.alpha_witnesses {
        by_stage.entry(w.stage).or_default().push(w);
    }
    for (k, ws) in by_stage {
        out.push_str(&format!("\nalpha {k} {{\n"));
        for w in ws {
            out.push_str(&format!("  {} = {}\n", w.target.name, render_expr(&w.alpha, &m.coords, "      ")));
        }
        out.push_str("}\n");
    }
    out.lines().map(str::trim_end).fold(String::new(), |acc, l| acc + l + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::int;

    const MINIMAL: &str = "base 1\nfield y even\nlagrangian = 0\n";

    #[test]
    fn minimal_source() {
        let p = parse_model(MINIMAL).unwrap();
        assert!(p.model.stages.is_empty());
        assert!(p.model.lagrangian.is_zero());
        assert_eq!(p.model.fields.len(), 1);
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn expression_features() {
        let src = "base 2 [t, x]\nfield y even\nlet k = y[t]^2 - y[x,x]\nlagrangian = 1/2*k + d(y*y, t) - 3/6*y[t]^2";
        let m = parse_model(src).unwrap().model;
        let y = m.field("y").unwrap();
        let yxx = GradedPoly::var(y.jet(MultiIndex::from_coords(2, &[1, 1])));
        let yyt = GradedPoly::var(y.var(2)).mul(&GradedPoly::var(y.jet(MultiIndex::unit(2, 0))));
        assert_eq!(m.lagrangian, yxx.scale(&crate::graded::ratio(-1, 2)) + yyt.scale(&int(2)));
    }

    #[test]
    fn odd_square_warns() {
        let src = "base 1\nfield c odd\nlagrangian = c*c";
        let p = parse_model(src).unwrap();
        assert!(p.model.lagrangian.is_zero());
        assert_eq!(p.warnings.len(), 1);
        assert_eq!((p.warnings[0].line, p.warnings[0].col), (3, 15));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_model("base 1\nfield y even\nlagrangian = y * z").unwrap_err();
        assert_eq!((e.kind, e.line, e.col), (ErrorKind::Semantic, 3, 18));
        let e = parse_model("base 1\nfield y even\nlagrangian = y +").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Syntax);
        let e = parse_model("base 1\nfield y @").unwrap_err();
        assert_eq!((e.kind, e.line, e.col), (ErrorKind::Lexical, 2, 9));
        let e = parse_model("field y even\nlagrangian = y").unwrap_err();
        assert!(e.message.contains("base"));
        let e = parse_model("base 1\nfield y even\nlagrangian = y / y").unwrap_err();
        assert!(e.message.contains("non-constant"));
    }

    #[test]
    fn keywords_are_contextual() {
        let src = "base 1 [t]\nghost xi odd stage 0\nantifield xi_bar even of xi\nfield d even\n\
                   stage 0 { xi = 0 }\nxi { xi = 0 }\nlagrangian = d[t]^2";
        let m = parse_model(src).unwrap().model;
        assert_eq!(m.lagrangian.len(), 1);
    }

    #[test]
    fn render_round_trip() {
        let src = "model \"t\\\"q\"\nbase 1 [t]\nfield y even\nantifield y_bar odd of y\n\
                   ghost c odd stage 0\nantifield c_bar even of c\n\
                   lagrangian = y[t]^2 + y^3 - 2*y*y[t,t] + 7 + y[t,t,t]\nstage 0 { c = y_bar[t] }\nxi { }";
        let m = parse_model(src).unwrap().model;
        let again = parse_model(&render_model(&m)).unwrap().model;
        assert_eq!(m, again);
        assert_eq!(m.name, "t\"q");
    }
}
