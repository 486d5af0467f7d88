//! Evaluation of query scripts into report records.

use std::collections::HashMap;

use serde_json::{json, Map, Value as Json};

use super::ast::*;
use super::parser::{parse, ParseError};
use crate::error::{Error, Result};
use crate::fields::{
    arch_equiv_necessary, drk_field, field_props, lift_definability, coarsening_witness, valuation_label, FieldTerm,
};
use crate::groups::{GroupElement, GroupTerm};
use crate::orders::{
    classify_final_segment, condense, condense_iter, drk_order, normalize, order_props, point_props,
    schema_extension, validate_drk, Chain, Completeness, Cut, DensePoint, Locator, OrderTerm, Point, Schema,
    SegmentVerdict,
};
use crate::rules::Rule;
use crate::spines::{
    abc, abc_n, decide_definable, drk_group, e_n, f_n, oracle_spine, order_rank_check, spine, subgroup_label, Verdict,
};

pub const REPORT_VERSION: &str = "1";

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Unknown verdicts make the run fail.
    pub strict: bool,
    /// Overrides the per-group candidate moduli.
    pub moduli: Option<Vec<u64>>,
    /// Cross-check every invariant against brute force.
    pub oracle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Error,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Error => "error",
            Status::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub query: String,
    pub structure: String,
    pub status: Status,
    pub summary: String,
    pub result: Json,
    pub rule_citations: Vec<String>,
}

impl Record {
    pub fn to_json(&self) -> Json {
        let mut result = match &self.result {
            Json::Object(m) => m.clone(),
            _ => Map::new(),
        };
        result.insert("summary".into(), Json::String(self.summary.clone()));
        json!({
            "query": self.query,
            "structure": self.structure,
            "status": self.status.as_str(),
            "result": result,
            "rule_citations": self.rule_citations,
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub records: Vec<Record>,
    pub binding_errors: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> Json {
        let mut top = Map::new();
        top.insert("version".into(), json!(REPORT_VERSION));
        top.insert("records".into(), Json::Array(self.records.iter().map(Record::to_json).collect()));
        if !self.binding_errors.is_empty() {
            top.insert("binding_errors".into(), json!(self.binding_errors));
        }
        Json::Object(top)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("json values serialize")
    }

    /// 0 when everything succeeded, 2 on a semantic error, 3 on an unknown
    /// verdict in strict mode.
    pub fn exit_code(&self, strict: bool) -> i32 {
        if !self.binding_errors.is_empty() || self.records.iter().any(|r| r.status == Status::Error) {
            2
        } else if strict && self.records.iter().any(|r| r.status == Status::Unknown) {
            3
        } else {
            0
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("[{}] {}\n", r.status.as_str(), r.query));
            if !r.structure.is_empty() {
                out.push_str(&format!("    on     {}\n", r.structure));
            }
            out.push_str(&format!("    result {}\n", r.summary));
            if !r.rule_citations.is_empty() {
                out.push_str(&format!("    rules  {}\n", r.rule_citations.join(", ")));
            }
        }
        for e in &self.binding_errors {
            out.push_str(&format!("[error] {e}\n"));
        }
        out
    }
}

#[derive(Debug, Clone)]
enum Value {
    Order(OrderTerm),
    Group(GroupTerm),
    Field(FieldTerm),
}

impl Value {
    fn echo(&self) -> String {
        match self {
            Value::Order(t) => normalize(t).map(|t| t.to_string()).unwrap_or_else(|_| t.to_string()),
            Value::Group(g) => g.to_string(),
            Value::Field(k) => k.to_string(),
        }
    }

    fn order(&self) -> OrderTerm {
        match self {
            Value::Order(t) => t.clone(),
            Value::Group(g) => g.gamma(),
            Value::Field(k) => k.group().gamma(),
        }
    }

    fn group(&self) -> Result<&GroupTerm> {
        match self {
            Value::Group(g) => Ok(g),
            Value::Field(k) => Ok(k.group()),
            Value::Order(t) => Err(Error::Structure(format!("{t} is an order, not a group"))),
        }
    }

    fn field(&self) -> Result<&FieldTerm> {
        match self {
            Value::Field(k) => Ok(k),
            other => Err(Error::Structure(format!("{} is not a field", other.echo()))),
        }
    }
}

struct Outcome {
    summary: String,
    result: Json,
    rules: Vec<Rule>,
    unknown: bool,
}

impl Outcome {
    fn new(summary: impl Into<String>, result: Json) -> Self {
        Outcome { summary: summary.into(), result, rules: Vec::new(), unknown: false }
    }

    fn rules(mut self, rules: impl IntoIterator<Item = Rule>) -> Self {
        for r in rules {
            if !self.rules.contains(&r) {
                self.rules.push(r);
            }
        }
        self
    }

    fn unknown(mut self, u: bool) -> Self {
        self.unknown = u;
        self
    }
}

type Env = HashMap<String, std::result::Result<Value, String>>;

fn eval(expr: &StructExpr, env: &Env) -> Result<Value> {
    match expr {
        StructExpr::Order(t) => {
            t.check()?;
            Ok(Value::Order(t.clone()))
        }
        StructExpr::Group(ge) => Ok(Value::Group(GroupTerm::new(ge.index.clone(), ge.comps.clone())?)),
        StructExpr::Field { residue, group } => {
            let g = eval(group, env)?;
            Ok(Value::Field(FieldTerm::new(residue.clone(), g.group()?.clone())?))
        }
        StructExpr::Ref(name) => match env.get(name) {
            Some(Ok(v)) => Ok(v.clone()),
            Some(Err(e)) => Err(Error::Structure(format!("binding {name} failed: {e}"))),
            None => Err(Error::Structure(format!("unbound name {name}"))),
        },
    }
}

fn dense_point(l: LocAtom) -> DensePoint {
    match l {
        LocAtom::Min => DensePoint::Min,
        LocAtom::Max => DensePoint::Max,
        LocAtom::Int(k) => DensePoint::At(k),
    }
}

fn resolve_pos(chain: &Chain, p: &PosAst) -> Result<Point> {
    let atom = chain
        .atom(p.atom)
        .ok_or_else(|| Error::Point(format!("there is no atom {}", p.atom)))?;
    let loc = p.loc.unwrap_or(LocAtom::Int(0));
    let offset = |what: &str| match loc {
        LocAtom::Int(k) if k >= 0 => Ok(k as u64),
        other => Err(Error::Point(format!("{other} is not a position in {what}"))),
    };
    let locator = match atom {
        OrderTerm::Fin(_) => Locator::Fin(offset("a finite atom")?),
        OrderTerm::Omega => Locator::Omega(offset("omega")?),
        OrderTerm::OmegaStar => Locator::OmegaStar(offset("omega*")?),
        OrderTerm::Zeta => match loc {
            LocAtom::Int(k) => Locator::Zeta(k),
            other => return Err(Error::Point(format!("{other} is not a position in zeta"))),
        },
        OrderTerm::Dense { .. } => Locator::Dense(dense_point(loc)),
        OrderTerm::Repl { summand, .. } => {
            let inner = p
                .inner
                .as_ref()
                .ok_or_else(|| Error::Point(format!("{p} needs a fibre position such as {}:0{{1:0}}", p.atom)))?;
            let q = resolve_pos(&Chain::new(summand), inner)?;
            Locator::Repl(dense_point(loc), Box::new(q))
        }
        _ => return Err(Error::Point(format!("atom {} has no points", p.atom))),
    };
    let point = Point::new(p.atom, locator);
    chain.validate(&point)?;
    Ok(point)
}

fn resolve_cut(chain: &Chain, c: &CutAst) -> Result<Cut> {
    Ok(match c {
        CutAst::Zero => Cut::Nothing,
        CutAst::All => Cut::Everything,
        CutAst::Upper(i) => Cut::AtomBoundary(*i),
        CutAst::Minus(p) => Cut::Minus(resolve_pos(chain, p)?),
        CutAst::Plus(p) => Cut::Plus(resolve_pos(chain, p)?),
        CutAst::Gap(i, l) => Cut::DenseGap(*i, *l),
        CutAst::Fibre(i, b, inner) => {
            let Some(OrderTerm::Repl { summand, .. }) = chain.atom(*i) else {
                return Err(Error::Designator(format!("atom {i} is not replicated")));
            };
            Cut::Fibre(*i, dense_point(*b), Box::new(resolve_cut(&Chain::new(summand), inner)?))
        }
    })
}

fn resolve_elem(g: &GroupTerm, es: &[(PosAst, crate::groups::Rational)]) -> Result<GroupElement> {
    let entries = es
        .iter()
        .map(|(p, q)| Ok((resolve_pos(g.chain(), p)?, *q)))
        .collect::<Result<Vec<_>>>()?;
    GroupElement::new(g, entries)
}

fn resolve_schema(chain: &Chain, s: &SchemaAst) -> Result<Schema> {
    let bad = |n: &str| Error::Structure(format!("unknown schema {n}"));
    Ok(match s {
        SchemaAst::Plain(n) => match n.as_str() {
            "Empty" => Schema::Empty,
            "HasPredecessor" => Schema::HasPredecessor,
            "HasSuccessor" => Schema::HasSuccessor,
            "AllLaterHaveSuccessor" => Schema::AllLaterHaveSuccessor,
            "AllLaterHavePredecessor" => Schema::AllLaterHavePredecessor,
            _ => return Err(bad(n)),
        },
        SchemaAst::WithParam(n, p, inner) => {
            let a = resolve_pos(chain, p)?;
            match (n.as_str(), inner) {
                ("PrincipalMinus", None) => Schema::PrincipalMinus(a),
                ("PrincipalPlus", None) => Schema::PrincipalPlus(a),
                ("Above", Some(s)) => Schema::Above(a, Box::new(resolve_schema(chain, s)?)),
                ("Below", Some(s)) => Schema::Below(a, Box::new(resolve_schema(chain, s)?)),
                _ => return Err(bad(n)),
            }
        }
    })
}

fn f_label(g: &GroupTerm, f: &Option<Cut>) -> String {
    match f {
        None => "∅".into(),
        Some(c) => subgroup_label(g, c),
    }
}

fn verdict_json(g: &GroupTerm, h: &Cut, v: &Verdict) -> Json {
    let (kind, n, detail) = match v {
        Verdict::Definable { n, detail, .. } => ("definable", *n, detail.clone()),
        Verdict::NotDefinable { detail, .. } => ("not-definable", None, detail.clone()),
        Verdict::Unknown(why) => ("unknown", None, why.clone()),
    };
    json!({ "subgroup": subgroup_label(g, h), "verdict": kind, "n": n, "detail": detail })
}

struct Ctx<'a> {
    opts: &'a RunOptions,
}

impl Ctx<'_> {
    fn moduli(&self, g: &GroupTerm) -> Vec<u64> {
        self.opts.moduli.clone().unwrap_or_else(|| g.default_moduli())
    }

    fn check_oracle(&self, g: &GroupTerm, x: &GroupElement, n: Option<u64>) -> Result<()> {
        if !self.opts.oracle || !g.has_finite_index() || x.is_zero() {
            return Ok(());
        }
        let ns: Vec<u64> = match n {
            Some(n) => vec![n],
            None => vec![2],
        };
        for n in ns {
            let o = oracle_spine(g, x, n)?;
            let i = abc(g, x)?;
            let r = abc_n(g, x, n)?;
            let fast = (i.a, i.b, r.a, r.b, f_n(g, x, n)?);
            let slow = (o.a, o.b, o.a_n, o.b_n, o.f_n);
            if fast != slow {
                return Err(Error::Inconsistent(format!(
                    "fast path {fast:?} diverges from brute force {slow:?} for {x} (n = {n})"
                )));
            }
        }
        Ok(())
    }

    fn dispatch(&self, op: &str, vals: &[Value], args: &[Arg]) -> Result<Outcome> {
        let v = &vals[0];
        let int = |k: usize| match &args[k] {
            Arg::Int(n) => *n,
            _ => unreachable!("checked by the parser"),
        };
        let modulus = |k: usize| -> Result<u64> {
            let n = int(k);
            if n < 2 {
                return Err(Error::Precondition(format!("modulus must be at least 2, got {n}")));
            }
            Ok(n as u64)
        };
        let cut_in = |chain: &Chain, k: usize| match &args[k] {
            Arg::Cut(c) => resolve_cut(chain, c),
            _ => unreachable!("checked by the parser"),
        };
        let elem = |g: &GroupTerm, k: usize| match &args[k] {
            Arg::Elem(es) => resolve_elem(g, es),
            _ => unreachable!("checked by the parser"),
        };
        Ok(match op {
            "normalize" => Outcome::new(normalize(&v.order())?.to_string(), json!({})),
            "order_props" => {
                let p = order_props(&v.order());
                Outcome::new(
                    format!("dense={}, discrete={}, min={}, max={}", p.dense, p.discrete, p.has_min, p.has_max),
                    json!({ "dense": p.dense, "discrete": p.discrete, "has_min": p.has_min, "has_max": p.has_max }),
                )
            }
            "point_props" => {
                let t = v.order();
                let Arg::Pos(p) = &args[1] else { unreachable!() };
                let p = resolve_pos(&Chain::new(&t), p)?;
                let pp = point_props(&t, &p)?;
                Outcome::new(
                    format!("successor={}, predecessor={}", pp.has_successor, pp.has_predecessor),
                    json!({ "point": p.to_string(), "has_successor": pp.has_successor, "has_predecessor": pp.has_predecessor }),
                )
            }
            "classify_final_segment" => {
                let t = v.order();
                let chain = Chain::new(&t);
                let c = chain.canon(&cut_in(&chain, 1)?)?;
                let verdict = classify_final_segment(&t, &c)?;
                let (kind, schema, rule) = match &verdict {
                    SegmentVerdict::Definable { schema, rule } => ("definable", Some(schema.to_string()), Some(*rule)),
                    SegmentVerdict::NotDefinable(rule) => ("not-definable", None, Some(*rule)),
                    SegmentVerdict::Unknown(_) => ("unknown", None, None),
                };
                Outcome::new(verdict.to_string(), json!({ "cut": c.to_string(), "verdict": kind, "schema": schema }))
                    .rules(rule)
                    .unknown(rule.is_none())
            }
            "schema_extension" => {
                let t = v.order();
                let Arg::Schema(s) = &args[1] else { unreachable!() };
                let schema = resolve_schema(&Chain::new(&t), s)?;
                let ext = schema_extension(&t, &schema)?;
                Outcome::new(ext.to_string(), json!({ "schema": schema.to_string() }))
            }
            "drk_order" | "validate_drk" => {
                let d = drk_order(&v.order())?;
                let report = validate_drk(&d);
                if !report.ok() {
                    return Err(Error::Inconsistent(report.violations.join("; ")));
                }
                let undecided: Vec<String> = d.undecided.iter().map(|c| c.to_string()).collect();
                if op == "validate_drk" {
                    Outcome::new("no violations", json!({ "violations": [] , "rank": d.to_string() }))
                } else {
                    Outcome::new(
                        d.to_string(),
                        json!({ "completeness": d.completeness.to_string(), "undecided": undecided }),
                    )
                    .unknown(!undecided.is_empty())
                }
            }
            "condense" => {
                let c = condense(&v.order())?;
                Outcome::new(c.to_string(), json!({ "underlying": normalize(&c.underlying())?.to_string() }))
            }
            "condense_iter" => {
                let k = int(1);
                if k < 1 {
                    return Err(Error::Precondition("at least one step is needed".into()));
                }
                let (c, steps, fixed) = condense_iter(&v.order(), k as usize)?;
                Outcome::new(c.to_string(), json!({ "steps": steps, "fixed": fixed }))
            }
            "gamma" => Outcome::new(v.group()?.gamma().to_string(), json!({})),
            "member" => {
                let g = v.group()?;
                let h = g.subgroup(&cut_in(g.chain(), 1)?)?;
                let x = elem(g, 2)?;
                let m = crate::groups::member(g, &h, &x)?;
                Outcome::new(m.to_string(), json!({ "member": m, "subgroup": subgroup_label(g, &h) }))
            }
            "quotient" => {
                let g = v.group()?;
                let q = g.quotient(&cut_in(g.chain(), 1)?)?;
                Outcome::new(q.to_string(), json!({}))
            }
            "max_divisible" => {
                let g = v.group()?;
                let p = int(1);
                if p != 0 && !crate::groups::arch::is_prime(p as u64) {
                    return Err(Error::Precondition(format!("{p} is neither 0 nor a prime")));
                }
                let h = g.max_divisible(p as u64);
                Outcome::new(subgroup_label(g, &h), json!({ "cut": h.to_string() }))
            }
            "is_n_regular" => {
                let r = v.group()?.is_n_regular(modulus(1)?);
                Outcome::new(r.to_string(), json!({ "regular": r }))
            }
            "abc" => {
                let g = v.group()?;
                let x = elem(g, 1)?;
                self.check_oracle(g, &x, None)?;
                let i = abc(g, &x)?;
                Outcome::new(
                    format!("A = {}, B = {}, C = {}", subgroup_label(g, &i.a), subgroup_label(g, &i.b), i.c),
                    json!({ "A": subgroup_label(g, &i.a), "B": subgroup_label(g, &i.b), "C": i.c.to_string() }),
                )
            }
            "abc_n" => {
                let g = v.group()?;
                let x = elem(g, 1)?;
                let n = modulus(2)?;
                self.check_oracle(g, &x, Some(n))?;
                let i = abc_n(g, &x, n)?;
                Outcome::new(
                    format!("A_{n} = {}, B_{n} = {}, C_{n} = {}", subgroup_label(g, &i.a), subgroup_label(g, &i.b), i.c),
                    json!({ "A_n": subgroup_label(g, &i.a), "B_n": subgroup_label(g, &i.b), "C_n": i.c.to_string() }),
                )
            }
            "f_n" => {
                let g = v.group()?;
                let x = elem(g, 1)?;
                let n = modulus(2)?;
                self.check_oracle(g, &x, Some(n))?;
                let f = f_n(g, &x, n)?;
                Outcome::new(f_label(g, &f), json!({ "empty": f.is_none() }))
            }
            "e_n" => {
                let g = v.group()?;
                let (x, h) = (elem(g, 1)?, elem(g, 2)?);
                let m = e_n(g, &x, &h, modulus(3)?)?;
                Outcome::new(
                    format!("in E_n = {}, in E_n* = {}", m.in_e, m.in_e_star),
                    json!({ "in_e": m.in_e, "in_e_star": m.in_e_star }),
                )
            }
            "spine" => {
                let g = v.group()?;
                let s = spine(g, modulus(1)?)?;
                let parts: Vec<String> = s
                    .elements
                    .iter()
                    .map(|e| format!("{}[{}{}]", subgroup_label(g, &e.subgroup), e.kind, if e.dk { ",Dk" } else { "" }))
                    .collect();
                let elements: Vec<Json> = s
                    .elements
                    .iter()
                    .map(|e| {
                        json!({
                            "subgroup": subgroup_label(g, &e.subgroup),
                            "kind": e.kind.to_string(),
                            "dk": e.dk,
                            "witness": e.witness.to_string(),
                        })
                    })
                    .collect();
                Outcome::new(format!("{{{}}}", parts.join(", ")), json!({ "elements": elements }))
            }
            "decide_definable" => {
                let g = v.group()?;
                let h = g.subgroup(&cut_in(g.chain(), 1)?)?;
                let verdict = decide_definable(g, &h, &self.moduli(g))?;
                Outcome::new(verdict.to_string(), verdict_json(g, &h, &verdict))
                    .rules(verdict.rule())
                    .unknown(verdict.rule().is_none())
            }
            "drk_group" => {
                let g = v.group()?;
                let d = drk_group(g, &self.moduli(g))?;
                let members: Vec<Json> = d
                    .members
                    .iter()
                    .map(|m| json!({ "subgroup": m.label, "rule": m.verdict.rule().map(Rule::tag) }))
                    .collect();
                let undecided: Vec<&str> = d.undecided.iter().map(|m| m.label.as_str()).collect();
                Outcome::new(
                    d.to_string(),
                    json!({ "members": members, "undecided": undecided, "completeness": d.completeness.to_string() }),
                )
                .rules(d.members.iter().filter_map(|m| m.verdict.rule()))
                .unknown(d.completeness == Completeness::SoundOnly)
            }
            "order_rank_check" => {
                let g = v.group()?;
                let p = order_rank_check(g, &self.moduli(g));
                let summary = match (p.n, &p.conclusion) {
                    (Some(n), Some(c)) => format!("holds with n = {n}: {c}"),
                    _ => "does not hold".into(),
                };
                Outcome::new(summary, json!({ "holds": p.holds, "n": p.n, "conclusion": p.conclusion }))
            }
            "oracle_spine" => {
                let g = v.group()?;
                let x = elem(g, 1)?;
                let n = modulus(2)?;
                let o = oracle_spine(g, &x, n)?;
                let ctx = Ctx { opts: &RunOptions { oracle: true, ..self.opts.clone() } };
                ctx.check_oracle(g, &x, Some(n))?;
                Outcome::new(
                    format!(
                        "A = {}, B = {}, A_{n} = {}, B_{n} = {}, F_{n} = {}",
                        subgroup_label(g, &o.a),
                        subgroup_label(g, &o.b),
                        subgroup_label(g, &o.a_n),
                        subgroup_label(g, &o.b_n),
                        f_label(g, &o.f_n)
                    ),
                    json!({ "agrees_with_fast_path": true }),
                )
            }
            "field_props" => {
                let p = field_props(v.field()?);
                Outcome::new(
                    format!("real_closed={}, henselian_vnat={}", p.real_closed, p.henselian_vnat),
                    json!({ "real_closed": p.real_closed, "henselian_vnat": p.henselian_vnat }),
                )
            }
            "drk_field" => {
                let k = v.field()?;
                let d = drk_field(k, &self.moduli(k.group()))?;
                Outcome::new(
                    d.to_string(),
                    json!({
                        "case": d.case.to_string(),
                        "group_rank": d.group_rank.to_string(),
                        "completeness": d.completeness.to_string(),
                    }),
                )
                .rules([d.rule])
                .unknown(d.completeness == Completeness::SoundOnly)
            }
            "lift_definability" => {
                let k = v.field()?;
                let g = k.group();
                let h = g.subgroup(&cut_in(g.chain(), 1)?)?;
                let fv = lift_definability(k, &h, &self.moduli(g))?;
                let mut result = verdict_json(g, &h, &fv.verdict);
                result["valuation"] = json!(valuation_label(g, &h));
                result["derivation"] = json!(fv.chain);
                Outcome::new(fv.verdict.to_string(), result)
                    .rules(fv.verdict.rule())
                    .unknown(fv.verdict.rule().is_none())
            }
            "coarsening_witness" => {
                let g = v.group()?;
                let h = cut_in(g.chain(), 1)?;
                let w = coarsening_witness(g, &h, &self.moduli(g))?;
                Outcome::new(
                    format!("H_a = {}, H_b = {}, {}", subgroup_label(g, &w.h_a), subgroup_label(g, &w.h_b), w.reason),
                    json!({
                        "H_a": subgroup_label(g, &w.h_a),
                        "H_b": subgroup_label(g, &w.h_b),
                        "n": w.n,
                        "g": w.g.to_string(),
                        "reason": w.reason.to_string(),
                    }),
                )
            }
            "arch_equiv_necessary" => {
                let c = arch_equiv_necessary(v.field()?)?;
                let summary = if c.consistent { "consistent".to_string() } else { c.violations.join("; ") };
                Outcome::new(summary, json!({ "consistent": c.consistent, "violations": c.violations }))
            }
            other => return Err(Error::Structure(format!("unknown query {other}"))),
        })
    }
}

pub fn run(script: &Script, opts: &RunOptions) -> Report {
    let mut env: Env = HashMap::new();
    let mut report = Report::default();
    let ctx = Ctx { opts };
    for located in &script.stmts {
        match &located.stmt {
            Stmt::Binding { name, expr } => {
                let v = eval(expr, &env).map_err(|e| e.to_string());
                if let Err(e) = &v {
                    report.binding_errors.push(format!("{}:{}: {name}: {e}", located.line, located.col));
                }
                env.insert(name.clone(), v);
            }
            Stmt::Query { op, args } => {
                let query = located.stmt.to_string();
                let Some(Arg::Struct(first)) = args.first() else { unreachable!("queries start with a structure") };
                let record = match eval(first, &env) {
                    Err(e) => Record {
                        query,
                        structure: String::new(),
                        status: Status::Error,
                        summary: e.to_string(),
                        result: json!({}),
                        rule_citations: Vec::new(),
                    },
                    Ok(v) => {
                        let structure = v.echo();
                        match ctx.dispatch(op, std::slice::from_ref(&v), args) {
                            Ok(o) => Record {
                                query,
                                structure,
                                status: if o.unknown { Status::Unknown } else { Status::Ok },
                                summary: o.summary,
                                result: o.result,
                                rule_citations: o.rules.iter().map(|r| r.tag().to_string()).collect(),
                            },
                            Err(e) => Record {
                                query,
                                structure,
                                status: Status::Error,
                                summary: e.to_string(),
                                result: json!({}),
                                rule_citations: Vec::new(),
                            },
                        }
                    }
                };
                report.records.push(record);
            }
        }
    }
    report
}

pub fn run_text(text: &str, opts: &RunOptions) -> std::result::Result<Report, ParseError> {
    Ok(run(&parse(text)?, opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(text: &str) -> Record {
        let r = run_text(text, &RunOptions::default()).unwrap();
        r.records.last().unwrap().clone()
    }

    #[test]
    fn divisible_rank_two() {
        let r = one("G := lex(Q, Q); drk_group(G)");
        assert_eq!((r.summary.as_str(), r.status), ("{{0}}", Status::Ok));
        assert_eq!(one("drk_order(lex(Q, Q))").summary, "{∅, {2}}");
        assert_eq!(one("drk_field(ps(rcf, lex(Q, Q)))").summary, "∅");
    }

    #[test]
    fn positions_resolve_against_atoms() {
        let r = one("point_props(repl(dense; omega), 1:0{1:0})");
        assert_eq!(r.summary, "successor=true, predecessor=false");
        let r = one("point_props(omega, 1:-1)");
        assert_eq!(r.status, Status::Error);
    }

    #[test]
    fn unknowns_fail_strict_runs() {
        let text = "G := hahn(dense; Z); decide_definable(G, gap(1:0))";
        let rep = run_text(text, &RunOptions::default()).unwrap();
        assert_eq!(rep.records[0].status, Status::Unknown);
        assert_eq!(rep.exit_code(false), 0);
        assert_eq!(rep.exit_code(true), 3);
    }

    #[test]
    fn semantic_errors_do_not_stop_the_script() {
        let rep = run_text("G := hahn(omega; Z, Q); gamma(G); gamma(lex(Z))", &RunOptions::default()).unwrap();
        assert_eq!(rep.records.len(), 2);
        assert_eq!(rep.records[0].status, Status::Error);
        assert_eq!(rep.records[1].summary, "1");
        assert_eq!(rep.exit_code(false), 2);
    }

    #[test]
    fn json_is_stable() {
        let text = "G := lex(Z, Z_(2)); decide_definable(G, upper(2)); spine(G, 2)";
        let a = run_text(text, &RunOptions::default()).unwrap().to_json_string();
        let b = run_text(text, &RunOptions::default()).unwrap().to_json_string();
        assert_eq!(a, b);
        let v: Json = serde_json::from_str(&a).unwrap();
        assert_eq!(v["version"], "1");
        assert_eq!(v["records"][0]["rule_citations"][0], "rigid-quotient-divisible-layer");
    }
}
