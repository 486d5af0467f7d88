//! Recursive-descent parser for query scripts.

use std::fmt;

use super::ast::*;
use crate::fields::ResidueSpec;
use crate::groups::arch::is_prime;
use crate::groups::{ArchComponent, Rational};
use crate::orders::OrderTerm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Struct,
    Cut,
    Pos,
    Elem,
    Int,
    Schema,
}

/// Argument kinds of every query.
pub fn signature(op: &str) -> Option<&'static [Kind]> {
    use Kind::*;
    Some(match op {
        "normalize" | "order_props" | "drk_order" | "validate_drk" | "condense" | "gamma" | "drk_group"
        | "order_rank_check" | "field_props" | "drk_field" | "arch_equiv_necessary" => &[Struct],
        "point_props" => &[Struct, Pos],
        "classify_final_segment" | "quotient" | "decide_definable" | "lift_definability" | "coarsening_witness" => {
            &[Struct, Cut]
        }
        "schema_extension" => &[Struct, Schema],
        "condense_iter" | "max_divisible" | "is_n_regular" | "spine" => &[Struct, Int],
        "member" => &[Struct, Cut, Elem],
        "abc" => &[Struct, Elem],
        "abc_n" | "f_n" | "oracle_spine" => &[Struct, Elem, Int],
        "e_n" => &[Struct, Elem, Elem, Int],
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Punct(char),
    Arrow,
    Assign,
    Sep,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Punct(c) => write!(f, "'{c}'"),
            Tok::Arrow => write!(f, "'->'"),
            Tok::Assign => write!(f, "':='"),
            Tok::Sep => write!(f, "end of statement"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut depth: i32 = 0;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let push = |tok: Tok, out: &mut Vec<Token>| out.push(Token { tok, line: l0, col: c0 });
        if c == '\n' {
            if depth == 0 {
                push(Tok::Sep, &mut out);
            }
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
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            push(Tok::Ident(s), &mut out);
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse::<i64>().map_err(|_| ParseError {
                line: l0,
                col: c0,
                message: format!("integer {s} is too large"),
            })?;
            col += i - start;
            push(Tok::Int(n), &mut out);
            continue;
        }
        let next = chars.get(i + 1).copied();
        match (c, next) {
            ('-', Some('>')) => {
                push(Tok::Arrow, &mut out);
                i += 2;
                col += 2;
            }
            (':', Some('=')) => {
                push(Tok::Assign, &mut out);
                i += 2;
                col += 2;
            }
            (';', _) if depth == 0 => {
                push(Tok::Sep, &mut out);
                i += 1;
                col += 1;
            }
            ('(' | '[' | '{' | ')' | ']' | '}' | ',' | ':' | ';' | '+' | '*' | '=' | '/' | '-', _) => {
                match c {
                    '(' | '[' | '{' => depth += 1,
                    ')' | ']' | '}' => depth -= 1,
                    _ => {}
                }
                push(Tok::Punct(c), &mut out);
                i += 1;
                col += 1;
            }
            _ => {
                return Err(ParseError { line: l0, col: c0, message: format!("unexpected character '{c}'") });
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

const ORDER_WORDS: [&str; 6] = ["fin", "omega", "zeta", "dense", "repl", "empty"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        let t = &self.toks[self.pos];
        Err(ParseError { line: t.line, col: t.col, message: message.into() })
    }

    fn expect_punct(&mut self, c: char) -> PResult<()> {
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected '{c}', found {}", self.peek()))
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => self.err(format!("expected a name, found {t}")),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            t => self.err(format!("expected '{kw}', found {t}")),
        }
    }

    fn uint(&mut self) -> PResult<i64> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            t => self.err(format!("expected an integer, found {t}")),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = self.eat_punct('-');
        let n = self.uint()?;
        Ok(if neg { -n } else { n })
    }

    fn index(&mut self) -> PResult<usize> {
        let n = self.uint()?;
        if n < 1 {
            return self.err("atom indices start at 1");
        }
        Ok(n as usize)
    }

    fn script(&mut self) -> PResult<Script> {
        let mut stmts = Vec::new();
        loop {
            while *self.peek() == Tok::Sep {
                self.bump();
            }
            if *self.peek() == Tok::Eof {
                break;
            }
            let (line, col) = (self.toks[self.pos].line, self.toks[self.pos].col);
            let stmt = self.statement()?;
            stmts.push(Located { stmt, line, col });
            match self.peek() {
                Tok::Sep | Tok::Eof => {}
                t => return self.err(format!("expected end of statement, found {t}")),
            }
        }
        Ok(Script { stmts })
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let name = self.ident()?;
        if *self.peek() == Tok::Assign {
            self.bump();
            let expr = self.structure()?;
            return Ok(Stmt::Binding { name, expr });
        }
        let Some(sig) = signature(&name) else {
            return self.err(format!("unknown query '{name}'"));
        };
        self.expect_punct('(')?;
        let mut args = Vec::new();
        for (k, kind) in sig.iter().enumerate() {
            if k > 0 {
                self.expect_punct(',')?;
            }
            args.push(match kind {
                Kind::Struct => Arg::Struct(self.structure()?),
                Kind::Cut => Arg::Cut(self.cut()?),
                Kind::Pos => Arg::Pos(self.pos_ast()?),
                Kind::Elem => Arg::Elem(self.elem()?),
                Kind::Int => Arg::Int(self.int()?),
                Kind::Schema => Arg::Schema(self.schema()?),
            });
        }
        if *self.peek() == Tok::Punct(',') {
            return self.err(format!("{name} takes {} arguments", sig.len()));
        }
        self.expect_punct(')')?;
        Ok(Stmt::Query { op: name, args })
    }

    fn structure(&mut self) -> PResult<StructExpr> {
        match (self.peek().clone(), self.peek2().clone()) {
            (Tok::Ident(s), Tok::Punct('(')) if s == "lex" || s == "hahn" => Ok(StructExpr::Group(self.group()?)),
            (Tok::Ident(s), Tok::Punct('(')) if s == "ps" => self.field(),
            (Tok::Ident(s), _) if !ORDER_WORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(StructExpr::Ref(s))
            }
            _ => Ok(StructExpr::Order(self.order()?)),
        }
    }

    fn order(&mut self) -> PResult<OrderTerm> {
        let mut parts = vec![self.order_atom()?];
        while self.eat_punct('+') {
            parts.push(self.order_atom()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { OrderTerm::Sum(parts) })
    }

    fn order_atom(&mut self) -> PResult<OrderTerm> {
        match self.peek().clone() {
            Tok::Int(1) => {
                self.bump();
                Ok(OrderTerm::Fin(1))
            }
            Tok::Punct('(') => {
                self.bump();
                let t = self.order()?;
                self.expect_punct(')')?;
                Ok(t)
            }
            Tok::Ident(s) => {
                self.bump();
                match s.as_str() {
                    "fin" => {
                        self.expect_punct('(')?;
                        let n = self.uint()?;
                        self.expect_punct(')')?;
                        Ok(OrderTerm::Fin(n as u64))
                    }
                    "empty" => Ok(OrderTerm::Empty),
                    "omega" => Ok(if self.eat_punct('*') { OrderTerm::OmegaStar } else { OrderTerm::Omega }),
                    "zeta" => Ok(OrderTerm::Zeta),
                    "dense" => self.dense_tail(),
                    "repl" => {
                        self.expect_punct('(')?;
                        self.keyword("dense")?;
                        let base = self.dense_tail()?;
                        self.expect_punct(';')?;
                        let summand = self.order()?;
                        self.expect_punct(')')?;
                        Ok(OrderTerm::repl(base, summand))
                    }
                    other => {
                        self.pos -= 1;
                        self.err(format!("unknown order atom '{other}'"))
                    }
                }
            }
            t => self.err(format!("expected an order atom, found {t}")),
        }
    }

    fn dense_tail(&mut self) -> PResult<OrderTerm> {
        let (mut has_min, mut has_max) = (false, false);
        if self.eat_punct('[') {
            if matches!(self.peek(), Tok::Ident(s) if s == "min") {
                self.bump();
                has_min = true;
            }
            if self.eat_punct(',') {
                self.keyword("max")?;
                has_max = true;
            }
            self.expect_punct(']')?;
        }
        Ok(OrderTerm::Dense { has_min, has_max })
    }

    fn prime(&mut self) -> PResult<u64> {
        let n = self.uint()?;
        if !is_prime(n as u64) {
            self.pos -= 1;
            return self.err(format!("{n} is not prime"));
        }
        Ok(n as u64)
    }

    fn comp(&mut self) -> PResult<ArchComponent> {
        let name = self.ident()?;
        match name.as_str() {
            "Z" => Ok(ArchComponent::Z),
            "Q" => Ok(ArchComponent::Q),
            "Z_" => {
                self.expect_punct('(')?;
                let p = self.prime()?;
                self.expect_punct(')')?;
                Ok(ArchComponent::local(p))
            }
            "arch" => {
                self.expect_punct('(')?;
                let kind = self.ident()?;
                if kind != "div" && kind != "codiv" {
                    self.pos -= 1;
                    return self.err("expected 'div' or 'codiv'");
                }
                self.expect_punct('=')?;
                self.expect_punct('{')?;
                let mut primes = Vec::new();
                if *self.peek() != Tok::Punct('}') {
                    primes.push(self.prime()?);
                    while self.eat_punct(',') {
                        primes.push(self.prime()?);
                    }
                }
                self.expect_punct('}')?;
                self.expect_punct(')')?;
                Ok(if kind == "div" { ArchComponent::div(primes) } else { ArchComponent::codiv(primes) })
            }
            other => {
                self.pos -= 1;
                self.err(format!("unknown component '{other}'"))
            }
        }
    }

    fn comps(&mut self) -> PResult<Vec<ArchComponent>> {
        let mut out = vec![self.comp()?];
        while self.eat_punct(',') {
            out.push(self.comp()?);
        }
        Ok(out)
    }

    fn group(&mut self) -> PResult<GroupExpr> {
        let kw = self.ident()?;
        self.expect_punct('(')?;
        let g = if kw == "lex" {
            let comps = self.comps()?;
            let index = OrderTerm::Sum(vec![OrderTerm::Fin(1); comps.len()]);
            GroupExpr { lex: true, index, comps }
        } else {
            let index = self.order()?;
            self.expect_punct(';')?;
            GroupExpr { lex: false, index, comps: self.comps()? }
        };
        self.expect_punct(')')?;
        Ok(g)
    }

    fn field(&mut self) -> PResult<StructExpr> {
        self.keyword("ps")?;
        self.expect_punct('(')?;
        let residue = match self.ident()?.as_str() {
            "Q" => ResidueSpec::rationals(),
            "rcf" => ResidueSpec::rcf(),
            "res" => {
                self.expect_punct('(')?;
                self.keyword("rc")?;
                self.expect_punct('=')?;
                let rc = match self.ident()?.as_str() {
                    "true" => true,
                    "false" => false,
                    _ => {
                        self.pos -= 1;
                        return self.err("expected 'true' or 'false'");
                    }
                };
                self.expect_punct(')')?;
                ResidueSpec::new(format!("res(rc={rc})"), rc)
            }
            other => {
                self.pos -= 1;
                return self.err(format!("unknown residue field '{other}'"));
            }
        };
        self.expect_punct(',')?;
        let group = match (self.peek().clone(), self.peek2().clone()) {
            (Tok::Ident(s), Tok::Punct('(')) if s == "lex" || s == "hahn" => StructExpr::Group(self.group()?),
            (Tok::Ident(s), _) => {
                self.bump();
                StructExpr::Ref(s)
            }
            (t, _) => return self.err(format!("expected a group, found {t}")),
        };
        self.expect_punct(')')?;
        Ok(StructExpr::Field { residue, group: Box::new(group) })
    }

    fn loc_atom(&mut self) -> PResult<LocAtom> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "min" => {
                self.bump();
                Ok(LocAtom::Min)
            }
            Tok::Ident(s) if s == "max" => {
                self.bump();
                Ok(LocAtom::Max)
            }
            _ => Ok(LocAtom::Int(self.int()?)),
        }
    }

    fn pos_ast(&mut self) -> PResult<PosAst> {
        let atom = self.index()?;
        let mut p = PosAst { atom, loc: None, inner: None };
        if self.eat_punct(':') {
            p.loc = Some(self.loc_atom()?);
            if self.eat_punct('{') {
                p.inner = Some(Box::new(self.pos_ast()?));
                self.expect_punct('}')?;
            }
        }
        Ok(p)
    }

    fn cut(&mut self) -> PResult<CutAst> {
        let name = self.ident()?;
        let c = match name.as_str() {
            "zero" => return Ok(CutAst::Zero),
            "all" => return Ok(CutAst::All),
            "upper" => {
                self.expect_punct('(')?;
                CutAst::Upper(self.index()?)
            }
            "minus" => {
                self.expect_punct('(')?;
                CutAst::Minus(self.pos_ast()?)
            }
            "plus" => {
                self.expect_punct('(')?;
                CutAst::Plus(self.pos_ast()?)
            }
            "gap" => {
                self.expect_punct('(')?;
                let i = self.index()?;
                let l = if self.eat_punct(':') { self.int()? } else { 0 };
                CutAst::Gap(i, l)
            }
            "fibre" => {
                self.expect_punct('(')?;
                let i = self.index()?;
                self.expect_punct(':')?;
                let b = self.loc_atom()?;
                self.expect_punct(';')?;
                CutAst::Fibre(i, b, Box::new(self.cut()?))
            }
            other => {
                self.pos -= 1;
                return self.err(format!("unknown cut '{other}'"));
            }
        };
        self.expect_punct(')')?;
        Ok(c)
    }

    fn rational(&mut self) -> PResult<Rational> {
        let n = self.int()?;
        if self.eat_punct('/') {
            let d = self.uint()?;
            if d == 0 {
                return self.err("zero denominator");
            }
            return Ok(Rational::new(n, d));
        }
        Ok(Rational::from_integer(n))
    }

    fn elem(&mut self) -> PResult<Vec<(PosAst, Rational)>> {
        self.expect_punct('[')?;
        let mut out = Vec::new();
        if !self.eat_punct(']') {
            loop {
                let p = self.pos_ast()?;
                if self.bump() != Tok::Arrow {
                    self.pos -= 1;
                    return self.err("expected '->'");
                }
                out.push((p, self.rational()?));
                if !self.eat_punct(',') {
                    break;
                }
            }
            self.expect_punct(']')?;
        }
        Ok(out)
    }

    fn schema(&mut self) -> PResult<SchemaAst> {
        let name = self.ident()?;
        if !self.eat_punct('(') {
            return Ok(SchemaAst::Plain(name));
        }
        let p = self.pos_ast()?;
        let inner = if self.eat_punct(',') { Some(Box::new(self.schema()?)) } else { None };
        self.expect_punct(')')?;
        Ok(SchemaAst::WithParam(name, p, inner))
    }
}

pub fn parse(text: &str) -> Result<Script, ParseError> {
    let toks = lex(text)?;
    Parser { toks, pos: 0 }.script()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binding_then_query() {
        let s = parse("G := lex(Z, Z_(2)); decide_definable(G, upper(2))").unwrap();
        assert_eq!((s.bindings(), s.queries()), (1, 1));
        let s = parse("T := dense + zeta; condense(T)").unwrap();
        assert_eq!((s.bindings(), s.queries()), (1, 1));
    }

    #[test]
    fn rejects_composite_localizations() {
        let e = parse("G := lex(Z_(4), Q)").unwrap_err();
        assert!(e.message.contains("4 is not prime"), "{e}");
        assert_eq!((e.line, e.col), (1, 13));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("T := omega\nfoo(T)").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse("G := lex(W)").unwrap_err().message.contains("unknown component"));
        assert!(parse("drk_group(lex(Z), 2)").is_err());
    }

    #[test]
    fn printing_round_trips() {
        let text = "T := repl(dense[min]; omega*) + 1 + (zeta + dense[,max])\n\
                    G := hahn(omega + 1; Z, arch(div={2,3}))\n\
                    K := ps(res(rc=true), G)\n\
                    classify_final_segment(T, fibre(1:min; gap(1:-2)))\n\
                    e_n(G, [1:3 -> -1/2, 2 -> 5], [], 2)\n\
                    schema_extension(T, Above(2:0, HasSuccessor))\n\
                    point_props(T, 1:4{1:0})";
        let s = parse(text).unwrap();
        let again = parse(&s.to_string()).unwrap();
        assert_eq!(s, again);
        assert_eq!(s.to_string(), again.to_string());
    }
}
