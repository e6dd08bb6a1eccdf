//! Scripts: `ring QQ[x,y];` declarations, named ideals and polynomials, and commands.
//!
//! Statements end at `;` or a newline. Without a `ring` declaration each command takes
//! the variables it mentions, sorted by name.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;
use wsclosure::{ExponentVector, LocalArc, MonomialIdeal, Poly, PolyIdeal, UniPoly};

/// Words that cannot name variables or definitions.
const RESERVED: &[&str] = &["in", "of", "at", "root", "with", "contains", "ring", "ideal", "poly"];

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown variable `{name}`")]
    UnknownVariable { line: usize, col: usize, name: String },
    #[error("{line}:{col}: `{what}` is not a monomial; this command needs a monomial ideal")]
    NotMonomial { line: usize, col: usize, what: String },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, col, .. }
            | ParseError::UnknownVariable { line, col, .. }
            | ParseError::NotMonomial { line, col, .. } => (*line, *col),
        }
    }
}

type PResult<T> = std::result::Result<T, ParseError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

fn syntax(pos: Pos, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    }
}

// ---- tokens --------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    /// End of a statement: `;`, a newline, or the end of input.
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: Pos,
    /// Text of the token as written, for diagnostics and command words.
    text: String,
}

fn lex(input: &str) -> PResult<Vec<Token>> {
    let chars: Vec<char> = input.chars().collect();
    let mut positions = Vec::with_capacity(chars.len() + 1);
    let (mut line, mut col) = (1, 1);
    for &c in &chars {
        positions.push(Pos { line, col });
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    positions.push(Pos { line, col });

    let mut out = Vec::new();
    // newlines inside brackets do not end a statement
    let mut depth = 0usize;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = positions[i];
        let start = i;
        if c == ';' || (c == '\n' && depth == 0) {
            out.push(Token {
                tok: Tok::End,
                pos,
                text: c.to_string(),
            });
            i += 1;
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            // command words may contain inner hyphens: `star-min-red`
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric()
                    || chars[i] == '_'
                    || (chars[i] == '-'
                        && chars.get(i + 1).is_some_and(|n| n.is_ascii_alphabetic())
                        && is_command_prefix(&chars[start..i])))
            {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Ident(text.clone()),
                pos,
                text,
            });
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Int(text.parse().expect("digits")),
                pos,
                text,
            });
        } else if "+-*/^(),=[]".contains(c) {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth = depth.saturating_sub(1),
                _ => {}
            }
            out.push(Token {
                tok: Tok::Sym(c),
                pos,
                text: c.to_string(),
            });
            i += 1;
        } else {
            return Err(syntax(pos, format!("unexpected character `{c}`")));
        }
    }
    out.push(Token {
        tok: Tok::End,
        pos: positions[chars.len()],
        text: String::new(),
    });
    Ok(out)
}

/// Hyphenated command words and their prefixes.
const HYPHENATED: &[&str] = &["star-min-red", "dim-igt", "classify-reductions", "zz-check", "paper-examples"];

fn is_command_prefix(word: &[char]) -> bool {
    let w: String = word.iter().collect();
    HYPHENATED.iter().any(|c| c.starts_with(&format!("{w}-")))
}

// ---- expressions ---------------------------------------------------------

/// A polynomial expression over named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigRational),
    Var(String, Pos),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v, _) => {
                out.insert(v.clone());
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_vars(out),
        }
    }

    /// The polynomial in the ring with variables `names`.
    pub fn to_poly(&self, names: &[String]) -> PResult<Poly> {
        let n = names.len();
        Ok(match self {
            Expr::Num(c) => Poly::constant(n, c.clone()),
            Expr::Var(v, pos) => match names.iter().position(|x| x == v) {
                Some(i) => Poly::var(n, i),
                None => {
                    return Err(ParseError::UnknownVariable {
                        line: pos.line,
                        col: pos.col,
                        name: v.clone(),
                    })
                }
            },
            Expr::Add(a, b) => &a.to_poly(names)? + &b.to_poly(names)?,
            Expr::Sub(a, b) => &a.to_poly(names)? - &b.to_poly(names)?,
            Expr::Mul(a, b) => &a.to_poly(names)? * &b.to_poly(names)?,
            Expr::Neg(a) => -&a.to_poly(names)?,
            Expr::Pow(a, k) => a.to_poly(names)?.pow(*k),
        })
    }

    /// A constant expression's value.
    fn to_constant(&self, pos: Pos) -> PResult<BigRational> {
        let p = self.to_poly(&[])?;
        if p.total_degree().unwrap_or(0) > 0 {
            return Err(syntax(pos, "expected a rational number"));
        }
        Ok(p.constant_term())
    }
}

/// Ideal generators as written, with the position of each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealExpr {
    pub gens: Vec<(Expr, Pos)>,
}

impl IdealExpr {
    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        for (g, _) in &self.gens {
            g.collect_vars(out);
        }
    }

    pub fn to_polys(&self, names: &[String]) -> PResult<Vec<Poly>> {
        self.gens.iter().map(|(g, _)| g.to_poly(names)).collect()
    }

    /// The monomial ideal generated, when every generator is a single term (or zero).
    pub fn to_monomial(&self, names: &[String]) -> PResult<MonomialIdeal> {
        let mut gens: Vec<ExponentVector> = Vec::new();
        for (g, pos) in &self.gens {
            let p = g.to_poly(names)?;
            if p.num_terms() > 1 {
                return Err(ParseError::NotMonomial {
                    line: pos.line,
                    col: pos.col,
                    what: p.display_with(names),
                });
            }
            gens.extend(p.terms().map(|(e, _)| e.clone()));
        }
        Ok(MonomialIdeal::new(names.len(), gens).expect("exponent vectors of the ring's length"))
    }
}

// ---- requests ------------------------------------------------------------

/// `J` in `reduction J of I`: monomial, or a parameter ideal with polynomial generators.
#[derive(Clone, Debug)]
pub enum ReductionInput {
    Monomial(MonomialIdeal),
    Parameter(PolyIdeal),
}

#[derive(Clone, Debug)]
pub enum Command {
    Newton(MonomialIdeal),
    Rees(MonomialIdeal),
    Iclose(MonomialIdeal),
    Igt(MonomialIdeal),
    Colength(MonomialIdeal),
    Multiplicity(MonomialIdeal),
    DimIgt(MonomialIdeal),
    ClassifyReductions(MonomialIdeal),
    Vbar { f: Poly, ideal: MonomialIdeal },
    Ord { f: Poly, ideal: MonomialIdeal },
    Reduction { j: ReductionInput, ideal: MonomialIdeal },
    Core { j: MonomialIdeal, ideal: MonomialIdeal },
    StarMinRed { j: PolyIdeal, ideal: MonomialIdeal, member: Option<Poly> },
    RrsCertify { h: Poly, ideal: MonomialIdeal },
    RrsSearch { h: Poly, ideal: MonomialIdeal },
    RrsVerify { h: Poly, ideal: MonomialIdeal, coeffs: Vec<Poly> },
    /// `F` lives in the ring variables; the last one is `T`.
    ZzAt { f: Poly, point: Vec<BigRational>, root: BigRational },
    ZzCertificate { h: Poly, ideal: MonomialIdeal },
    Relclose { h: Poly, ideal: MonomialIdeal, arcs: Option<(LocalArc, LocalArc)> },
    Classify { h: Poly, ideal: MonomialIdeal },
    PaperExamples,
}

impl Command {
    /// The command word as typed.
    pub fn name(&self) -> &'static str {
        match self {
            Command::Newton(_) => "newton",
            Command::Rees(_) => "rees",
            Command::Iclose(_) => "iclose",
            Command::Igt(_) => "igt",
            Command::Colength(_) => "colength",
            Command::Multiplicity(_) => "multiplicity",
            Command::DimIgt(_) => "dim-igt",
            Command::ClassifyReductions(_) => "classify-reductions",
            Command::Vbar { .. } => "vbar",
            Command::Ord { .. } => "ord",
            Command::Reduction { .. } => "reduction",
            Command::Core { .. } => "core",
            Command::StarMinRed { .. } => "star-min-red",
            Command::RrsCertify { .. } => "rrs certify",
            Command::RrsSearch { .. } => "rrs search",
            Command::RrsVerify { .. } => "rrs verify",
            Command::ZzAt { .. } | Command::ZzCertificate { .. } => "zz-check",
            Command::Relclose { .. } => "relclose",
            Command::Classify { .. } => "classify",
            Command::PaperExamples => "paper-examples",
        }
    }
}

/// One command with the ring it was resolved in.
#[derive(Clone, Debug)]
pub struct Request {
    pub command: Command,
    pub ring: Vec<String>,
    pub line: usize,
}

// ---- parser --------------------------------------------------------------

struct Parser {
    toks: Vec<Token>,
    at: usize,
    ring: Option<Vec<String>>,
    ideals: HashMap<String, IdealExpr>,
    polys: HashMap<String, Expr>,
}

/// Parse a script into requests, resolving names and rings.
pub fn parse(input: &str) -> PResult<Vec<Request>> {
    let mut p = Parser {
        toks: lex(input)?,
        at: 0,
        ring: None,
        ideals: HashMap::new(),
        polys: HashMap::new(),
    };
    let mut out = Vec::new();
    while p.at < p.toks.len() {
        if p.peek().tok == Tok::End {
            p.at += 1;
            continue;
        }
        if let Some(req) = p.statement()? {
            out.push(req);
        }
        p.expect_end()?;
    }
    Ok(out)
}

/// Parse a single polynomial in the given variables.
pub fn parse_poly(input: &str, names: &[String]) -> PResult<Poly> {
    let mut p = Parser {
        toks: lex(input)?,
        at: 0,
        ring: Some(names.to_vec()),
        ideals: HashMap::new(),
        polys: HashMap::new(),
    };
    let e = p.expr()?;
    p.expect_end()?;
    e.to_poly(names)
}

/// Parse an ideal literal `(g1, ..., gk)` in the given variables.
pub fn parse_ideal(input: &str, names: &[String]) -> PResult<Vec<Poly>> {
    let mut p = Parser {
        toks: lex(input)?,
        at: 0,
        ring: Some(names.to_vec()),
        ideals: HashMap::new(),
        polys: HashMap::new(),
    };
    let i = p.ideal_literal()?;
    p.expect_end()?;
    i.to_polys(names)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at.min(self.toks.len() - 1)]
    }

    fn next(&mut self) -> Token {
        let t = self.peek().clone();
        self.at += 1;
        t
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == w)
    }

    fn expect_sym(&mut self, c: char) -> PResult<Pos> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(t.pos)
        } else {
            Err(syntax(t.pos, format!("expected `{c}`, found {}", describe(&t))))
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<()> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) if s == w => Ok(()),
            _ => Err(syntax(t.pos, format!("expected `{w}`, found {}", describe(&t)))),
        }
    }

    fn expect_end(&mut self) -> PResult<()> {
        let t = self.next();
        if t.tok == Tok::End {
            Ok(())
        } else {
            Err(syntax(t.pos, format!("expected end of statement, found {}", describe(&t))))
        }
    }

    fn name(&mut self) -> PResult<(String, Pos)> {
        let t = self.next();
        match t.tok {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) && !s.contains('-') => Ok((s, t.pos)),
            _ => Err(syntax(t.pos, format!("expected a name, found {}", describe(&t)))),
        }
    }

    fn uint(&mut self) -> PResult<u32> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => u32::try_from(n.clone()).map_err(|_| syntax(t.pos, "exponent too large")),
            _ => Err(syntax(t.pos, format!("expected an exponent, found {}", describe(&t)))),
        }
    }

    fn statement(&mut self) -> PResult<Option<Request>> {
        let head = self.next();
        let word = match &head.tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(syntax(head.pos, format!("expected a command, found {}", describe(&head)))),
        };
        let line = head.pos.line;
        match word.as_str() {
            "ring" => {
                self.ring_decl()?;
                Ok(None)
            }
            "ideal" => {
                let (name, pos) = self.name()?;
                self.check_definable(&name, pos)?;
                self.expect_sym('=')?;
                let i = self.ideal_literal()?;
                self.ideals.insert(name, i);
                Ok(None)
            }
            "poly" => {
                let (name, pos) = self.name()?;
                self.check_definable(&name, pos)?;
                self.expect_sym('=')?;
                let e = self.expr()?;
                self.polys.insert(name, e);
                Ok(None)
            }
            _ => self.command(&word, head.pos).map(|(command, ring)| Some(Request { command, ring, line })),
        }
    }

    fn check_definable(&self, name: &str, pos: Pos) -> PResult<()> {
        if self.ring.as_ref().is_some_and(|r| r.iter().any(|v| v == name)) {
            return Err(syntax(pos, format!("`{name}` is a ring variable")));
        }
        Ok(())
    }

    fn ring_decl(&mut self) -> PResult<()> {
        let t = self.next();
        if !matches!(&t.tok, Tok::Ident(s) if s == "QQ") {
            return Err(syntax(t.pos, "only QQ[...] rings are supported"));
        }
        self.expect_sym('[')?;
        let mut names: Vec<String> = Vec::new();
        loop {
            let (v, pos) = self.name()?;
            if names.contains(&v) {
                return Err(syntax(pos, format!("variable `{v}` declared twice")));
            }
            names.push(v);
            if self.is_sym(',') {
                self.next();
            } else {
                break;
            }
        }
        self.expect_sym(']')?;
        self.ring = Some(names);
        Ok(())
    }

    /// Parse a command's arguments and resolve them in the declared or inferred ring.
    fn command(&mut self, word: &str, pos: Pos) -> PResult<(Command, Vec<String>)> {
        let single: Option<fn(MonomialIdeal) -> Command> = match word {
            "newton" => Some(Command::Newton),
            "rees" => Some(Command::Rees),
            "iclose" => Some(Command::Iclose),
            "igt" => Some(Command::Igt),
            "colength" => Some(Command::Colength),
            "multiplicity" => Some(Command::Multiplicity),
            "dim-igt" => Some(Command::DimIgt),
            "classify-reductions" => Some(Command::ClassifyReductions),
            _ => None,
        };
        if let Some(make) = single {
            let i = self.ideal_ref()?;
            let ring = self.ring_for(&[], &[&i]);
            return Ok((make(i.to_monomial(&ring)?), ring));
        }
        match word {
            "vbar" | "ord" | "classify" | "relclose" => {
                let f = self.expr()?;
                self.expect_word("in")?;
                let i = self.ideal_ref()?;
                let arcs = if word == "relclose" && self.is_word("at") {
                    self.next();
                    Some(self.arc_pair()?)
                } else {
                    None
                };
                let ring = self.ring_for(&[&f], &[&i]);
                let (f, ideal) = (f.to_poly(&ring)?, i.to_monomial(&ring)?);
                let cmd = match word {
                    "vbar" => Command::Vbar { f, ideal },
                    "ord" => Command::Ord { f, ideal },
                    "classify" => Command::Classify { h: f, ideal },
                    _ => {
                        let arcs = match arcs {
                            None => None,
                            Some((a, b, apos)) => Some((to_arc(&a, ring.len(), apos)?, to_arc(&b, ring.len(), apos)?)),
                        };
                        Command::Relclose { h: f, ideal, arcs }
                    }
                };
                Ok((cmd, ring))
            }
            "reduction" | "core" | "star-min-red" => {
                let j = self.ideal_ref()?;
                self.expect_word("of")?;
                let i = self.ideal_ref()?;
                let member = if word == "star-min-red" && self.is_word("contains") {
                    self.next();
                    Some(self.expr()?)
                } else {
                    None
                };
                let extra: Vec<&Expr> = member.iter().collect();
                let ring = self.ring_for(&extra, &[&j, &i]);
                let ideal = i.to_monomial(&ring)?;
                let cmd = match word {
                    "reduction" => {
                        let polys = j.to_polys(&ring)?;
                        let input = if polys.iter().all(|p| p.num_terms() <= 1) {
                            ReductionInput::Monomial(j.to_monomial(&ring)?)
                        } else {
                            ReductionInput::Parameter(poly_ideal(polys, pos)?)
                        };
                        Command::Reduction { j: input, ideal }
                    }
                    "core" => Command::Core {
                        j: j.to_monomial(&ring)?,
                        ideal,
                    },
                    _ => Command::StarMinRed {
                        j: poly_ideal(j.to_polys(&ring)?, pos)?,
                        ideal,
                        member: member.map(|m| m.to_poly(&ring)).transpose()?,
                    },
                };
                Ok((cmd, ring))
            }
            "rrs" => {
                let sub = self.next();
                let sub_word = match &sub.tok {
                    Tok::Ident(s) if ["certify", "search", "verify"].contains(&s.as_str()) => s.clone(),
                    _ => return Err(syntax(sub.pos, "expected `certify`, `search`, or `verify` after `rrs`")),
                };
                let h = self.expr()?;
                self.expect_word("in")?;
                let i = self.ideal_ref()?;
                let coeffs = if sub_word == "verify" {
                    self.expect_word("with")?;
                    Some(self.ideal_literal()?)
                } else {
                    None
                };
                let ideals: Vec<&IdealExpr> = std::iter::once(&i).chain(coeffs.as_ref()).collect();
                let ring = self.ring_for(&[&h], &ideals);
                let (h, ideal) = (h.to_poly(&ring)?, i.to_monomial(&ring)?);
                let cmd = match sub_word.as_str() {
                    "certify" => Command::RrsCertify { h, ideal },
                    "search" => Command::RrsSearch { h, ideal },
                    _ => Command::RrsVerify {
                        h,
                        ideal,
                        coeffs: coeffs.expect("parsed above").to_polys(&ring)?,
                    },
                };
                Ok((cmd, ring))
            }
            "zz-check" => {
                let f = self.expr()?;
                if self.is_word("in") {
                    self.next();
                    let i = self.ideal_ref()?;
                    let ring = self.ring_for(&[&f], &[&i]);
                    let cmd = Command::ZzCertificate {
                        h: f.to_poly(&ring)?,
                        ideal: i.to_monomial(&ring)?,
                    };
                    return Ok((cmd, ring));
                }
                self.expect_word("at")?;
                let point_pos = self.peek().pos;
                let point = self.ideal_literal()?;
                self.expect_word("root")?;
                let root_pos = self.peek().pos;
                let root = self.expr()?;
                let ring = self.ring_for(&[&f], &[]);
                let values: Vec<BigRational> =
                    point.gens.iter().map(|(e, p)| e.to_constant(*p)).collect::<PResult<_>>()?;
                if values.len() + 1 != ring.len() {
                    return Err(syntax(
                        point_pos,
                        format!("expected {} coordinates before the root variable", ring.len().saturating_sub(1)),
                    ));
                }
                let cmd = Command::ZzAt {
                    f: f.to_poly(&ring)?,
                    point: values,
                    root: root.to_constant(root_pos)?,
                };
                Ok((cmd, ring))
            }
            "paper-examples" => Ok((Command::PaperExamples, vec![])),
            _ => Err(syntax(pos, format!("unknown command `{word}`"))),
        }
    }

    /// The declared ring, or the sorted variables mentioned by the arguments.
    fn ring_for(&self, exprs: &[&Expr], ideals: &[&IdealExpr]) -> Vec<String> {
        if let Some(r) = &self.ring {
            return r.clone();
        }
        let mut vars = BTreeSet::new();
        for e in exprs {
            e.collect_vars(&mut vars);
        }
        for i in ideals {
            i.collect_vars(&mut vars);
        }
        vars.into_iter().collect()
    }

    /// A named ideal or an ideal literal.
    fn ideal_ref(&mut self) -> PResult<IdealExpr> {
        if let Tok::Ident(s) = &self.peek().tok {
            let s = s.clone();
            let pos = self.peek().pos;
            self.next();
            return self
                .ideals
                .get(&s)
                .cloned()
                .ok_or_else(|| syntax(pos, format!("`{s}` is not a defined ideal")));
        }
        self.ideal_literal()
    }

    fn ideal_literal(&mut self) -> PResult<IdealExpr> {
        self.expect_sym('(')?;
        let mut gens = Vec::new();
        loop {
            let pos = self.peek().pos;
            gens.push((self.expr()?, pos));
            if self.is_sym(',') {
                self.next();
            } else {
                break;
            }
        }
        self.expect_sym(')')?;
        Ok(IdealExpr { gens })
    }

    /// `((a1, ..., an), (b1, ..., bn))` with components polynomials in `t`.
    fn arc_pair(&mut self) -> PResult<(Vec<Expr>, Vec<Expr>, Pos)> {
        let pos = self.expect_sym('(')?;
        let a = self.ideal_literal()?;
        self.expect_sym(',')?;
        let b = self.ideal_literal()?;
        self.expect_sym(')')?;
        let strip = |i: IdealExpr| i.gens.into_iter().map(|(e, _)| e).collect();
        Ok((strip(a), strip(b), pos))
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.is_sym('+') {
                self.next();
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.is_sym('-') {
                self.next();
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while self.is_sym('*') {
            self.next();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.is_sym('-') {
            self.next();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.is_sym('^') {
            self.next();
            return Ok(Expr::Pow(Box::new(base), self.uint()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let t = self.next();
        match t.tok {
            Tok::Int(n) => {
                if self.is_sym('/') {
                    self.next();
                    let d = self.next();
                    match d.tok {
                        Tok::Int(m) if !m.is_zero() => Ok(Expr::Num(BigRational::new(n, m))),
                        Tok::Int(_) => Err(syntax(d.pos, "division by zero")),
                        _ => Err(syntax(d.pos, "only integer literals can be divided")),
                    }
                } else {
                    Ok(Expr::Num(BigRational::from_integer(n)))
                }
            }
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) && !s.contains('-') => match self.polys.get(&s) {
                Some(e) => Ok(e.clone()),
                None => Ok(Expr::Var(s, t.pos)),
            },
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            _ => Err(syntax(t.pos, format!("expected a term, found {}", describe(&t)))),
        }
    }
}

fn describe(t: &Token) -> String {
    match t.tok {
        Tok::End if t.text.is_empty() => "end of input".to_string(),
        Tok::End => "end of statement".to_string(),
        _ => format!("`{}`", t.text),
    }
}

fn poly_ideal(polys: Vec<Poly>, pos: Pos) -> PResult<PolyIdeal> {
    PolyIdeal::new(polys).map_err(|e| syntax(pos, e.to_string()))
}

fn to_arc(comps: &[Expr], nvars: usize, pos: Pos) -> PResult<LocalArc> {
    if comps.len() != nvars {
        return Err(syntax(pos, format!("an arc needs {nvars} components, found {}", comps.len())));
    }
    let t = vec!["t".to_string()];
    let mut out = Vec::new();
    for c in comps {
        let p = c.to_poly(&t)?;
        let deg = p.total_degree().unwrap_or(0) as usize;
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        for (e, c) in p.terms() {
            coeffs[e.entries()[0] as usize] = c.clone();
        }
        out.push(UniPoly::new(coeffs));
    }
    LocalArc::new(out).map_err(|_| syntax(pos, "arc components must vanish at t = 0"))
}
