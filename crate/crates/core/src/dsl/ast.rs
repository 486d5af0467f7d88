//! Syntax trees for query scripts. Structures are kept exactly as written;
//! positions and cuts are resolved against a structure when a query runs.

use std::fmt;

use crate::fields::ResidueSpec;
use crate::groups::{element::format_rational, ArchComponent, Rational};
use crate::orders::OrderTerm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupExpr {
    /// Written as `lex(...)`; the index is then a sum of single points.
    pub lex: bool,
    pub index: OrderTerm,
    pub comps: Vec<ArchComponent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructExpr {
    Order(OrderTerm),
    Group(GroupExpr),
    Field { residue: ResidueSpec, group: Box<StructExpr> },
    Ref(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocAtom {
    Int(i64),
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosAst {
    pub atom: usize,
    pub loc: Option<LocAtom>,
    /// Point of the fibre, for replicated atoms.
    pub inner: Option<Box<PosAst>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutAst {
    Upper(usize),
    Minus(PosAst),
    Plus(PosAst),
    Gap(usize, i64),
    Fibre(usize, LocAtom, Box<CutAst>),
    Zero,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemaAst {
    Plain(String),
    WithParam(String, PosAst, Option<Box<SchemaAst>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arg {
    Struct(StructExpr),
    Cut(CutAst),
    Pos(PosAst),
    Elem(Vec<(PosAst, Rational)>),
    Int(i64),
    Schema(SchemaAst),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Binding { name: String, expr: StructExpr },
    Query { op: String, args: Vec<Arg> },
}

/// A statement with the line and column where it starts.
#[derive(Debug, Clone)]
pub struct Located {
    pub stmt: Stmt,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Script {
    pub stmts: Vec<Located>,
}

impl Script {
    pub fn statements(&self) -> impl Iterator<Item = &Stmt> {
        self.stmts.iter().map(|l| &l.stmt)
    }

    pub fn bindings(&self) -> usize {
        self.statements().filter(|s| matches!(s, Stmt::Binding { .. })).count()
    }

    pub fn queries(&self) -> usize {
        self.statements().filter(|s| matches!(s, Stmt::Query { .. })).count()
    }
}

/// Scripts compare by their statements, ignoring source positions.
impl PartialEq for Script {
    fn eq(&self, other: &Self) -> bool {
        self.statements().eq(other.statements())
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        if self.lex {
            write!(f, "lex({})", comps.join(", "))
        } else {
            write!(f, "hahn({}; {})", self.index, comps.join(", "))
        }
    }
}

impl fmt::Display for StructExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructExpr::Order(t) => write!(f, "{t}"),
            StructExpr::Group(g) => write!(f, "{g}"),
            StructExpr::Field { residue, group } => write!(f, "ps({}, {group})", residue.name),
            StructExpr::Ref(name) => write!(f, "{name}"),
        }
    }
}

impl fmt::Display for LocAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocAtom::Int(k) => write!(f, "{k}"),
            LocAtom::Min => write!(f, "min"),
            LocAtom::Max => write!(f, "max"),
        }
    }
}

impl fmt::Display for PosAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.atom)?;
        if let Some(l) = self.loc {
            write!(f, ":{l}")?;
        }
        if let Some(inner) = &self.inner {
            write!(f, "{{{inner}}}")?;
        }
        Ok(())
    }
}

impl fmt::Display for CutAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutAst::Upper(i) => write!(f, "upper({i})"),
            CutAst::Minus(p) => write!(f, "minus({p})"),
            CutAst::Plus(p) => write!(f, "plus({p})"),
            CutAst::Gap(i, l) => write!(f, "gap({i}:{l})"),
            CutAst::Fibre(i, b, c) => write!(f, "fibre({i}:{b}; {c})"),
            CutAst::Zero => write!(f, "zero"),
            CutAst::All => write!(f, "all"),
        }
    }
}

impl fmt::Display for SchemaAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaAst::Plain(n) => write!(f, "{n}"),
            SchemaAst::WithParam(n, p, None) => write!(f, "{n}({p})"),
            SchemaAst::WithParam(n, p, Some(s)) => write!(f, "{n}({p}, {s})"),
        }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Struct(s) => write!(f, "{s}"),
            Arg::Cut(c) => write!(f, "{c}"),
            Arg::Pos(p) => write!(f, "{p}"),
            Arg::Elem(es) => {
                let parts: Vec<String> = es.iter().map(|(p, q)| format!("{p} -> {}", format_rational(q))).collect();
                write!(f, "[{}]", parts.join(", "))
            }
            Arg::Int(n) => write!(f, "{n}"),
            Arg::Schema(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Binding { name, expr } => write!(f, "{name} := {expr}"),
            Stmt::Query { op, args } => {
                let parts: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                write!(f, "{op}({})", parts.join(", "))
            }
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.statements() {
            writeln!(f, "{s};")?;
        }
        Ok(())
    }
}
