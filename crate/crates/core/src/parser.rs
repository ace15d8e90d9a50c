//! Task-file reader and writer.
//!
//! The syntax is a small subset of the usual ASP surface language plus the
//! learning directives `#pos`, `#neg`, `#brave_ordering`,
//! `#cautious_ordering`, `#modeh`, `#modeb`, `#constant` and `#maxv`.
//! `%` starts a comment that runs to the end of the line.

use std::collections::HashSet;
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::bias::{ModeArg, ModeBias, ModeSchema};
use crate::model::{
    Atom, CmpOp, Example, LearningTask, Literal, OrderingExample, OrderingMode, PartialInterpretation, Penalty,
    Polarity, Program, Rule, Symbol, Term,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ParseErrorKind {
    Syntax,
    DuplicateId,
    DanglingRef,
    Overlap,
    UnsafeRule,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::DuplicateId => "duplicate id",
            ParseErrorKind::DanglingRef => "dangling reference",
            ParseErrorKind::Overlap => "overlapping inclusions and exclusions",
            ParseErrorKind::UnsafeRule => "unsafe rule",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("{line}:{column}: {kind}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub kind: ParseErrorKind,
}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Ident(String),
    Var(String),
    Int(i64),
    Directive(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Dot,
    DotDot,
    If,
    WeakIf,
    At,
    Minus,
    Cmp(CmpOp),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Directive(d) => write!(f, "`#{d}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::DotDot => f.write_str("`..`"),
            Tok::If => f.write_str("`:-`"),
            Tok::WeakIf => f.write_str("`:~`"),
            Tok::At => f.write_str("`@`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Cmp(op) => write!(f, "`{op}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

fn error(pos: Pos, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
    ParseError { line: pos.line, column: pos.column, message: message.into(), kind }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        let next = chars.get(i + 1).copied();
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '%' {
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
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            toks.push((if c.is_ascii_lowercase() { Tok::Ident(word) } else { Tok::Var(word) }, pos));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let value = text.parse().map_err(|_| error(pos, ParseErrorKind::Syntax, "integer out of range"))?;
            toks.push((Tok::Int(value), pos));
            continue;
        }
        if c == '#' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i + 1 - start;
            if word.is_empty() {
                return Err(error(pos, ParseErrorKind::Syntax, "expected a directive name after `#`"));
            }
            toks.push((Tok::Directive(word), pos));
            continue;
        }
        let (tok, len) = match (c, next) {
            (':', Some('-')) => (Tok::If, 2),
            (':', Some('~')) => (Tok::WeakIf, 2),
            ('.', Some('.')) => (Tok::DotDot, 2),
            ('!', Some('=')) => (Tok::Cmp(CmpOp::Ne), 2),
            ('<', Some('=')) => (Tok::Cmp(CmpOp::Le), 2),
            ('>', Some('=')) => (Tok::Cmp(CmpOp::Ge), 2),
            ('<', _) => (Tok::Cmp(CmpOp::Lt), 1),
            ('>', _) => (Tok::Cmp(CmpOp::Gt), 1),
            ('=', _) => (Tok::Cmp(CmpOp::Eq), 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            (',', _) => (Tok::Comma, 1),
            (';', _) => (Tok::Semi, 1),
            ('.', _) => (Tok::Dot, 1),
            ('@', _) => (Tok::At, 1),
            ('-', _) => (Tok::Minus, 1),
            _ => return Err(error(pos, ParseErrorKind::Syntax, format!("unexpected character `{c}`"))),
        };
        toks.push((tok, pos));
        advance(len, &mut i, &mut col);
    }
    toks.push((Tok::Eof, Pos { line, column: col }));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Parser { toks: lex(src)?, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&t.to_string()))
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        error(self.pos(), ParseErrorKind::Syntax, format!("expected {wanted}, found {}", self.peek()))
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = self.eat(&Tok::Minus);
        match self.peek().clone() {
            Tok::Int(i) => {
                self.bump();
                Ok(if neg { -i } else { i })
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(Term::var(&v))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Term::sym(&s))
            }
            Tok::Int(_) | Tok::Minus => {
                let lo = self.int()?;
                if self.eat(&Tok::DotDot) {
                    let hi = self.int()?;
                    Ok(Term::Range(lo, hi))
                } else {
                    Ok(Term::Int(lo))
                }
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn atom(&mut self) -> PResult<Atom> {
        let pred = self.ident()?;
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                args.push(self.term()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RParen)?;
        }
        Ok(Atom::new(&pred, args))
    }

    fn literal(&mut self) -> PResult<Literal> {
        if matches!(self.peek(), Tok::Ident(s) if s == "not") && matches!(self.peek2(), Tok::Ident(_)) {
            self.bump();
            return Ok(Literal::Neg(self.atom()?));
        }
        let starts_atom = matches!(self.peek(), Tok::Ident(_)) && !matches!(self.peek2(), Tok::Cmp(_));
        if starts_atom {
            return Ok(Literal::Pos(self.atom()?));
        }
        let lhs = self.term()?;
        let op = match self.bump() {
            Tok::Cmp(op) => op,
            _ => {
                self.at -= 1;
                return Err(self.unexpected("a comparison operator"));
            }
        };
        let rhs = self.term()?;
        Ok(Literal::Cmp(lhs, op, rhs))
    }

    fn body(&mut self) -> PResult<Vec<Literal>> {
        let mut body = vec![self.literal()?];
        while self.eat(&Tok::Comma) {
            body.push(self.literal()?);
        }
        Ok(body)
    }

    fn rule(&mut self) -> PResult<Rule> {
        let start = self.pos();
        let rule = match self.peek().clone() {
            Tok::If => {
                self.bump();
                let body = self.body()?;
                self.expect(&Tok::Dot)?;
                Rule::Hard { body }
            }
            Tok::WeakIf => {
                self.bump();
                let body = self.body()?;
                self.expect(&Tok::Dot)?;
                self.expect(&Tok::LBracket)?;
                let weight = self.term()?;
                self.expect(&Tok::At)?;
                let level = self.int()?;
                let mut terms = Vec::new();
                while self.eat(&Tok::Comma) {
                    terms.push(self.term()?);
                }
                self.expect(&Tok::RBracket)?;
                Rule::Weak { body, weight, level, terms }
            }
            Tok::Int(_) | Tok::LBrace => {
                let lower = if matches!(self.peek(), Tok::Int(_)) { Some(self.int()?) } else { None };
                self.expect(&Tok::LBrace)?;
                let mut heads = vec![self.atom()?];
                while self.eat(&Tok::Comma) || self.eat(&Tok::Semi) {
                    heads.push(self.atom()?);
                }
                self.expect(&Tok::RBrace)?;
                let upper = if matches!(self.peek(), Tok::Int(_)) { Some(self.int()?) } else { None };
                let body = if self.eat(&Tok::If) { self.body()? } else { Vec::new() };
                self.expect(&Tok::Dot)?;
                let bound = |b: Option<i64>, default: usize| -> PResult<u32> {
                    let b = b.unwrap_or(default as i64);
                    u32::try_from(b).map_err(|_| error(start, ParseErrorKind::Syntax, "negative choice bound"))
                };
                Rule::Choice { lower: bound(lower, 0)?, upper: bound(upper, heads.len())?, heads, body }
            }
            Tok::Ident(_) => {
                let head = self.atom()?;
                let body = if self.eat(&Tok::If) { self.body()? } else { Vec::new() };
                self.expect(&Tok::Dot)?;
                Rule::Normal { head, body }
            }
            _ => return Err(self.unexpected("a rule")),
        };
        check_rule(&rule, start)?;
        Ok(rule)
    }

    fn program_until(&mut self, end: &Tok) -> PResult<Program> {
        let mut p = Program::new();
        while self.peek() != end {
            p.push(self.rule()?);
        }
        Ok(p)
    }

    fn mode_schema(&mut self) -> PResult<ModeSchema> {
        let pred = self.ident()?;
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                let arg = match (self.peek().clone(), self.peek2().clone()) {
                    (Tok::Ident(k), Tok::LParen) if k == "var" || k == "const" => {
                        self.bump();
                        self.bump();
                        let ty = Symbol::new(&self.ident()?);
                        self.expect(&Tok::RParen)?;
                        if k == "var" {
                            ModeArg::Var(ty)
                        } else {
                            ModeArg::Const(ty)
                        }
                    }
                    _ => match self.term()? {
                        t @ (Term::Sym(_) | Term::Int(_)) => ModeArg::Fixed(t),
                        _ => {
                            return Err(error(
                                self.pos(),
                                ParseErrorKind::Syntax,
                                "expected var(type), const(type) or a constant",
                            ))
                        }
                    },
                };
                args.push(arg);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RParen)?;
        }
        Ok(ModeSchema { pred: Symbol::new(&pred), args })
    }

    fn ground_atoms(&mut self) -> PResult<Vec<(Atom, Pos)>> {
        self.expect(&Tok::LBrace)?;
        let mut atoms = Vec::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                let pos = self.pos();
                let a = self.atom()?;
                if !a.is_ground() || a.args.iter().any(|t| matches!(t, Term::Range(..))) {
                    return Err(error(pos, ParseErrorKind::Syntax, format!("`{a}` must be a ground atom")));
                }
                atoms.push((a, pos));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RBrace)?;
        }
        Ok(atoms)
    }

    /// `id` or `id@penalty`.
    fn id_with_penalty(&mut self) -> PResult<(String, Penalty)> {
        let id = self.ident()?;
        let penalty = if self.eat(&Tok::At) {
            let p = self.int()?;
            if p <= 0 {
                return Err(error(self.pos(), ParseErrorKind::Syntax, "penalty must be a positive integer"));
            }
            Penalty::Finite(p as u64)
        } else {
            Penalty::Infinite
        };
        Ok((id, penalty))
    }
}

fn check_rule(rule: &Rule, pos: Pos) -> PResult<()> {
    let has_range = |a: &Atom| a.args.iter().any(|t| matches!(t, Term::Range(..)));
    let range_outside_fact = rule.body().iter().filter_map(Literal::atom).any(has_range)
        || matches!(rule, Rule::Choice { heads, .. } if heads.iter().any(has_range))
        || (!rule.is_fact() && rule.head_atoms().iter().any(has_range));
    if range_outside_fact {
        return Err(error(pos, ParseErrorKind::Syntax, "ranges are only allowed in facts"));
    }
    rule.validate().map_err(|e| error(pos, ParseErrorKind::UnsafeRule, e.to_string()))
}

/// Parses a whole task file.
pub fn parse_task(source: &str) -> Result<LearningTask, ParseError> {
    let mut p = Parser::new(source)?;
    let mut task = LearningTask::default();
    let mut example_pos = Vec::new();
    let mut ordering_pos = Vec::new();
    let (mut n_pos, mut n_neg, mut n_ord) = (0usize, 0usize, 0usize);

    while *p.peek() != Tok::Eof {
        let start = p.pos();
        let Tok::Directive(name) = p.peek().clone() else {
            let rule = p.rule()?;
            task.background.push(rule);
            continue;
        };
        p.bump();
        p.expect(&Tok::LParen)?;
        match name.as_str() {
            "pos" | "neg" => {
                let polarity = if name == "pos" { Polarity::Positive } else { Polarity::Negative };
                let named = matches!(p.peek(), Tok::Ident(_));
                let (id, penalty) = if named {
                    let idp = p.id_with_penalty()?;
                    p.expect(&Tok::Comma)?;
                    idp
                } else {
                    let id = match polarity {
                        Polarity::Positive => {
                            n_pos += 1;
                            format!("pos_{n_pos}")
                        }
                        Polarity::Negative => {
                            n_neg += 1;
                            format!("neg_{n_neg}")
                        }
                    };
                    (id, Penalty::Infinite)
                };
                let incl = p.ground_atoms()?;
                p.expect(&Tok::Comma)?;
                let excl = p.ground_atoms()?;
                let context = if p.eat(&Tok::Comma) {
                    p.expect(&Tok::LBrace)?;
                    let ctx = p.program_until(&Tok::RBrace)?;
                    p.expect(&Tok::RBrace)?;
                    ctx
                } else {
                    Program::new()
                };
                p.expect(&Tok::RParen)?;
                p.expect(&Tok::Dot)?;
                if let Some((a, pos)) = excl.iter().find(|(a, _)| incl.iter().any(|(b, _)| a == b)) {
                    return Err(error(*pos, ParseErrorKind::Overlap, format!("`{a}` is both included and excluded")));
                }
                if context.has_weak() {
                    return Err(error(start, ParseErrorKind::Syntax, "contexts may not contain weak constraints"));
                }
                if task.examples.iter().any(|e| e.id == id) {
                    return Err(error(start, ParseErrorKind::DuplicateId, format!("example id `{id}` is used twice")));
                }
                task.examples.push(Example {
                    id,
                    polarity,
                    pi: PartialInterpretation::new(incl.into_iter().map(|x| x.0), excl.into_iter().map(|x| x.0)),
                    context,
                    penalty,
                });
                example_pos.push(start);
            }
            "brave_ordering" | "cautious_ordering" => {
                let mode = if name == "brave_ordering" { OrderingMode::Brave } else { OrderingMode::Cautious };
                let mut ids = Vec::new();
                let mut op = None;
                loop {
                    match p.peek().clone() {
                        Tok::Cmp(o) if op.is_none() => {
                            p.bump();
                            op = Some(o);
                        }
                        Tok::Ident(_) if op.is_none() => ids.push(p.id_with_penalty()?),
                        _ => return Err(p.unexpected("an example id or comparison operator")),
                    }
                    if !p.eat(&Tok::Comma) {
                        break;
                    }
                }
                p.expect(&Tok::RParen)?;
                p.expect(&Tok::Dot)?;
                let (id, penalty, lo, hi) = match ids.len() {
                    2 => {
                        n_ord += 1;
                        (format!("ord_{n_ord}"), Penalty::Infinite, ids[0].0.clone(), ids[1].0.clone())
                    }
                    3 => (ids[0].0.clone(), ids[0].1, ids[1].0.clone(), ids[2].0.clone()),
                    _ => return Err(error(start, ParseErrorKind::Syntax, "an ordering takes two example ids")),
                };
                if task.orderings.iter().any(|o| o.id == id) {
                    return Err(error(start, ParseErrorKind::DuplicateId, format!("ordering id `{id}` is used twice")));
                }
                task.orderings.push(OrderingExample { id, lo, hi, op: op.unwrap_or(CmpOp::Lt), mode, penalty });
                ordering_pos.push(start);
            }
            "modeh" | "modeb" => {
                let schema = p.mode_schema()?;
                p.expect(&Tok::RParen)?;
                p.expect(&Tok::Dot)?;
                if name == "modeh" {
                    task.mode_bias.modeh.push(schema);
                } else {
                    task.mode_bias.modeb.push(schema);
                }
            }
            "constant" => {
                let ty = p.ident()?;
                p.expect(&Tok::Comma)?;
                let value = match p.term()? {
                    t @ (Term::Sym(_) | Term::Int(_)) => t,
                    _ => {
                        return Err(error(start, ParseErrorKind::Syntax, "constant value must be a symbol or integer"))
                    }
                };
                p.expect(&Tok::RParen)?;
                p.expect(&Tok::Dot)?;
                task.mode_bias.add_constant(&ty, value);
            }
            "maxv" => {
                let n = p.int()?;
                p.expect(&Tok::RParen)?;
                p.expect(&Tok::Dot)?;
                if n <= 0 {
                    return Err(error(start, ParseErrorKind::Syntax, "#maxv needs a positive integer"));
                }
                task.mode_bias.max_variables = n as usize;
            }
            other => return Err(error(start, ParseErrorKind::Syntax, format!("unknown directive `#{other}`"))),
        }
    }

    let ids: HashSet<&str> = task.examples.iter().filter(|e| e.is_positive()).map(|e| e.id.as_str()).collect();
    for (o, pos) in task.orderings.iter().zip(&ordering_pos) {
        for r in [&o.lo, &o.hi] {
            if !ids.contains(r.as_str()) {
                return Err(error(
                    *pos,
                    ParseErrorKind::DanglingRef,
                    format!("ordering `{}` refers to `{r}`, which is not a positive example", o.id),
                ));
            }
        }
    }
    Ok(task)
}

/// Parses a plain program (no directives).
pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(source)?;
    p.program_until(&Tok::Eof)
}

/// Parses exactly one rule.
pub fn parse_rule(source: &str) -> Result<Rule, ParseError> {
    let mut p = Parser::new(source)?;
    let r = p.rule()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(r)
}

/// Parses the argument of `#modeh`/`#modeb`, e.g. `heads(var(coin))`.
pub fn parse_mode_schema(source: &str) -> Result<ModeSchema, ParseError> {
    let mut p = Parser::new(source)?;
    let s = p.mode_schema()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(s)
}

fn write_atoms(out: &mut String, atoms: &std::collections::BTreeSet<Atom>) {
    out.push('{');
    for (i, a) in atoms.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{a}");
    }
    out.push('}');
}

fn write_id(out: &mut String, id: &str, penalty: Penalty) {
    out.push_str(id);
    if let Penalty::Finite(p) = penalty {
        let _ = write!(out, "@{p}");
    }
}

/// Task-file text for `task`; [`parse_task`] reads it back.
pub fn render_task(task: &LearningTask) -> String {
    let mut out = String::new();
    out.push_str(&task.background.to_string());
    for e in &task.examples {
        out.push_str(if e.is_positive() { "#pos(" } else { "#neg(" });
        write_id(&mut out, &e.id, e.penalty);
        out.push_str(", ");
        write_atoms(&mut out, &e.pi.inclusions);
        out.push_str(", ");
        write_atoms(&mut out, &e.pi.exclusions);
        if !e.context.is_empty() {
            out.push_str(", {\n");
            for r in e.context.iter() {
                let _ = writeln!(out, "  {r}");
            }
            out.push('}');
        }
        out.push_str(").\n");
    }
    for o in &task.orderings {
        out.push_str(match o.mode {
            OrderingMode::Brave => "#brave_ordering(",
            OrderingMode::Cautious => "#cautious_ordering(",
        });
        write_id(&mut out, &o.id, o.penalty);
        let _ = writeln!(out, ", {}, {}, {}).", o.lo, o.hi, o.op);
    }
    for s in &task.mode_bias.modeh {
        let _ = writeln!(out, "#modeh({s}).");
    }
    for s in &task.mode_bias.modeb {
        let _ = writeln!(out, "#modeb({s}).");
    }
    for (ty, cs) in &task.mode_bias.constants {
        for c in cs {
            let _ = writeln!(out, "#constant({ty}, {c}).");
        }
    }
    if task.mode_bias.max_variables != ModeBias::default().max_variables {
        let _ = writeln!(out, "#maxv({}).", task.mode_bias.max_variables);
    }
    out
}
