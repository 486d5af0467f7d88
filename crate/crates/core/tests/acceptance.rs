//! Acceptance suite: one pass/fail line per criterion, non-zero exit on
//! any failure.

use std::time::{Duration, Instant};

use oagrank_core::dsl::{golden, run_text, RunOptions, Status};
use oagrank_core::fields::{drk_field, transfer_case, FieldTerm, ResidueSpec, TransferCase};
use oagrank_core::groups::{ArchComponent, GroupElement, GroupTerm, Rational};
use oagrank_core::orders::{
    classify_final_segment, condense, drk_order, normalize, validate_drk, Cut, DrkDescription, Locator, OrderTerm,
    Point, SegmentVerdict,
};
use oagrank_core::spines::{abc, abc_n, convex_subgroups, decide_definable, drk_group, f_n, f_subset, oracle_spine, spine};

const MODULI: [u64; 4] = [2, 3, 4, 6];

type Outcome = Result<String, String>;

fn components() -> Vec<ArchComponent> {
    vec![ArchComponent::Z, ArchComponent::Q, ArchComponent::local(2), ArchComponent::local(3)]
}

fn groups(max_rank: usize) -> Vec<GroupTerm> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<ArchComponent>> = vec![vec![]];
    for _ in 0..max_rank {
        let mut next = Vec::new();
        for prefix in &layer {
            for c in components() {
                let mut v = prefix.clone();
                v.push(c);
                out.push(GroupTerm::lex(v.clone()).unwrap());
                next.push(v);
            }
        }
        layer = next;
    }
    out
}

fn at(i: usize) -> Point {
    Point::new(i, Locator::Fin(0))
}

/// All elements with entries in ±1..3 on at most three positions.
fn elements(g: &GroupTerm) -> Vec<GroupElement> {
    let rank = g.blocks().len();
    let values = [-3i64, -2, -1, 1, 2, 3];
    let mut out = Vec::new();
    for mask in 1u32..(1 << rank) {
        let pos: Vec<usize> = (0..rank).filter(|k| mask & (1 << k) != 0).collect();
        if pos.len() > 3 {
            continue;
        }
        let total = values.len().pow(pos.len() as u32);
        for code in 0..total {
            let mut c = code;
            let entries = pos
                .iter()
                .map(|&k| {
                    let v = values[c % values.len()];
                    c /= values.len();
                    (at(k + 1), Rational::from_integer(v))
                })
                .collect();
            out.push(GroupElement::new(g, entries).unwrap());
        }
    }
    out
}

/// Runs `check` on every group in parallel and sums the returned counts.
fn par_groups(gs: &[GroupTerm], check: impl Fn(&GroupTerm) -> Result<usize, String> + Sync) -> Result<usize, String> {
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get());
    let chunk = gs.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = gs
            .chunks(chunk)
            .map(|part| {
                let check = &check;
                s.spawn(move || part.iter().try_fold(0usize, |acc, g| Ok::<usize, String>(acc + check(g)?)))
            })
            .collect();
        handles.into_iter().try_fold(0usize, |acc, h| Ok::<usize, String>(acc + h.join().unwrap()?))
    })
}

fn summary_of(script: &str) -> Result<(String, serde_json::Value), String> {
    let rep = run_text(script, &RunOptions::default()).map_err(|e| e.to_string())?;
    let r = rep.records.last().ok_or("no record")?;
    if r.status != Status::Ok {
        return Err(format!("{script}: status {}: {}", r.status.as_str(), r.summary));
    }
    Ok((r.summary.clone(), r.to_json()))
}

fn expect(script: &str, summary: &str, case: Option<&str>) -> Result<(), String> {
    let (got, json) = summary_of(script)?;
    if got != summary {
        return Err(format!("{script}: expected {summary}, got {got}"));
    }
    if let Some(c) = case {
        if json["result"]["case"] != c {
            return Err(format!("{script}: expected {c}, got {}", json["result"]["case"]));
        }
    }
    Ok(())
}

fn golden_rank_two() -> Outcome {
    let start = Instant::now();
    expect("drk_group(lex(Q, Q))", "{{0}}", None)?;
    expect("drk_order(lex(Q, Q))", "{∅, {2}}", None)?;
    expect("drk_field(ps(rcf, lex(Q, Q)))", "∅", Some("case2"))?;
    let t = start.elapsed();
    if t > Duration::from_secs(1) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("three goldens in {t:?}"))
}

fn archimedean_dichotomy() -> Outcome {
    expect("drk_field(ps(Q, lex(Z)))", "{O_vnat}", Some("case1"))?;
    expect("drk_field(ps(rcf, lex(Q)))", "∅", Some("case2"))?;
    Ok("both fields match".into())
}

fn condensation_goldens() -> Outcome {
    let first = OrderTerm::sum([OrderTerm::dense(), OrderTerm::Zeta]);
    let second = OrderTerm::sum([
        OrderTerm::repl(OrderTerm::dense(), OrderTerm::OmegaStar),
        OrderTerm::repl(OrderTerm::dense(), OrderTerm::Omega),
    ]);
    let c = condense(&first).map_err(|e| e.to_string())?.to_string();
    if c != "dense + 1[zeta]" {
        return Err(format!("first condensation {c}"));
    }
    let c = condense(&second).map_err(|e| e.to_string())?;
    let colors: Vec<String> = c.atoms.iter().map(|(_, col)| col.to_string()).collect();
    let under: Vec<&OrderTerm> = c.atoms.iter().map(|(t, _)| t).collect();
    if under != [&OrderTerm::dense(), &OrderTerm::dense()] || colors != ["omega*", "omega"] {
        return Err(format!("second condensation {c}"));
    }
    for (t, want) in [(&first, "HasPredecessor"), (&second, "AllLaterHaveSuccessor")] {
        match classify_final_segment(t, &Cut::AtomBoundary(2)).map_err(|e| e.to_string())? {
            SegmentVerdict::Definable { schema, .. } if schema.to_string() == want => {}
            other => return Err(format!("{t}: {other}")),
        }
    }
    Ok("dense + 1[zeta]; dense[omega*] + dense[omega]; both schemas".into())
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let gs = groups(4);
    let n = par_groups(&gs, |g| {
        let mut k = 0;
        for x in elements(g) {
            let i = abc(g, &x).map_err(|e| e.to_string())?;
            for n in MODULI {
                let o = oracle_spine(g, &x, n).map_err(|e| e.to_string())?;
                let r = abc_n(g, &x, n).map_err(|e| e.to_string())?;
                let f = f_n(g, &x, n).map_err(|e| e.to_string())?;
                if (&i.a, &i.b, &r.a, &r.b, &f) != (&o.a, &o.b, &o.a_n, &o.b_n, &o.f_n) {
                    return Err(format!("{g} {x} n={n}"));
                }
                k += 1;
            }
        }
        Ok(k)
    })?;
    let t = start.elapsed();
    if n < 10_000 {
        return Err(format!("only {n} instances"));
    }
    if t > Duration::from_secs(60) {
        return Err(format!("{n} instances took {t:?}"));
    }
    Ok(format!("{n} instances agree in {t:?}"))
}

/// `d` with `x + nd` equal to `x` minus its first k entries, when it exists.
fn cancellers(g: &GroupTerm, x: &GroupElement, n: u64) -> Vec<GroupElement> {
    let e = x.entries();
    (1..=e.len())
        .filter_map(|k| {
            let entries = e[..k].iter().map(|(p, q)| (p.clone(), -q / Rational::from_integer(n as i64))).collect();
            GroupElement::new(g, entries).ok()
        })
        .collect()
}

fn invariant_suite() -> Outcome {
    let gs = groups(4);
    let n = par_groups(&gs, |g| {
        let chain = g.chain();
        let xs = elements(g);
        let singles: Vec<&GroupElement> = xs.iter().filter(|x| x.entries().len() == 1).collect();
        let mut checks = 0;
        for n in MODULI {
            let data: Vec<_> = xs
                .iter()
                .map(|x| Ok((abc(g, x)?, abc_n(g, x, n)?)))
                .collect::<oagrank_core::Result<_>>()
                .map_err(|e| e.to_string())?;
            let mut a_values: Vec<Cut> = data.iter().map(|(_, r)| r.a.clone()).collect();
            a_values.sort_by(|p, q| chain.cmp_cuts(p, q));
            a_values.dedup();
            for (x, (i, r)) in xs.iter().zip(&data) {
                let ok = chain.cut_subset(&r.a, &i.a)
                    && chain.cut_subset(&i.a, &i.b)
                    && i.a != i.b
                    && chain.cut_subset(&i.b, &r.b);
                if !ok {
                    return Err(format!("inclusion chain fails for {g} {x} n={n}"));
                }
                for a in &a_values {
                    if chain.cut_subset(&r.a, a) && r.a != *a && !chain.cut_subset(&r.b, a) {
                        return Err(format!("spine implication fails for {g} {x} n={n}"));
                    }
                }
                let f = f_n(g, x, n).map_err(|e| e.to_string())?;
                // A_n(0) is empty, so the meet is empty once some x + nd vanishes
                let mut meet: Option<Cut> = None;
                let mut vanishes = false;
                let ds = std::iter::once(GroupElement::zero())
                    .chain(cancellers(g, x, n))
                    .chain(singles.iter().map(|d| (*d).clone()));
                for d in ds {
                    let y = x.add(g, &d.scale(n as i64).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                    if y.is_zero() {
                        vanishes = true;
                        continue;
                    }
                    let a = abc_n(g, &y, n).map_err(|e| e.to_string())?.a;
                    if !f_subset(g, &f, &Some(a.clone())) {
                        return Err(format!("F_n not below A_n(x + nd) for {g} {x} n={n}"));
                    }
                    meet = Some(match meet {
                        None => a,
                        Some(m) => std::cmp::max_by(m, a, |p, q| chain.cmp_cuts(p, q)),
                    });
                }
                if vanishes {
                    meet = None;
                }
                if meet != f {
                    return Err(format!("F_n is not the meet for {g} {x} n={n}"));
                }
                checks += 1;
            }
        }
        Ok(checks)
    })?;
    Ok(format!("{n} elements, zero violations"))
}

fn residues() -> Vec<ResidueSpec> {
    vec![
        ResidueSpec::rationals(),
        ResidueSpec::rcf(),
        ResidueSpec::new("res(rc=true)", true),
        ResidueSpec::new("res(rc=false)", false),
    ]
}

fn dichotomy_audit(ranks: &mut Vec<DrkDescription>) -> Outcome {
    let mut count = 0;
    for g in groups(3) {
        let moduli = g.default_moduli();
        let gd = drk_group(&g, &moduli).map_err(|e| e.to_string())?;
        let group_cuts: Vec<Cut> = gd.members.iter().map(|m| m.rep.clone()).collect();
        ranks.push(drk_order(&g.gamma()).map_err(|e| e.to_string())?);
        for res in residues() {
            let k = FieldTerm::new(res.clone(), g.clone()).map_err(|e| e.to_string())?;
            let d = drk_field(&k, &moduli).map_err(|e| e.to_string())?;
            let field_cuts: Vec<Cut> = d.members.iter().map(|(_, c)| c.clone()).collect();
            let without_zero: Vec<Cut> = group_cuts.iter().filter(|c| **c != Cut::Nothing).cloned().collect();
            if field_cuts != group_cuts && field_cuts != without_zero {
                return Err(format!("{k}: field rank {field_cuts:?} vs group rank {group_cuts:?}"));
            }
            let trivial_gp = [2u64, 3, 5, 7].iter().any(|&p| g.max_divisible(p) == Cut::Nothing);
            let want = !res.real_closed || trivial_gp;
            if (transfer_case(&k) == TransferCase::Case1) != want {
                return Err(format!("{k}: case {}", transfer_case(&k)));
            }
            count += 1;
        }
    }
    if count < 200 {
        return Err(format!("only {count} fields"));
    }
    Ok(format!("{count} fields, zero violations"))
}

fn corollary_cross_check() -> Outcome {
    let mut count = 0;
    for g in groups(3) {
        let moduli = g.default_moduli();
        if !decide_definable(&g, &Cut::Nothing, &moduli).map_err(|e| e.to_string())?.is_definable() {
            return Err(format!("{{0}} not definable in {g}"));
        }
        let spines: Vec<_> = moduli.iter().map(|&n| spine(&g, n)).collect::<oagrank_core::Result<_>>().map_err(|e| e.to_string())?;
        for h in convex_subgroups(&g).map_err(|e| e.to_string())?.into_iter().skip(1) {
            let v = decide_definable(&g, &h, &moduli).map_err(|e| format!("{g} {h}: {e}"))?;
            let on_spine = spines.iter().any(|s| s.find(&h).is_some());
            if v.is_definable() != on_spine {
                return Err(format!("{g} {h}: {v} but spine membership {on_spine}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} subgroups, no contradictory pair"))
}

fn successor_lemma(ranks: &[DrkDescription]) -> Outcome {
    for r in ranks {
        let rep = validate_drk(r);
        if !rep.ok() {
            return Err(format!("{r}: {}", rep.violations.join("; ")));
        }
    }
    Ok(format!("{} ranks, zero violations", ranks.len()))
}

fn corpus_script() -> String {
    let mut s: String = golden::CORPUS.iter().map(|e| format!("{}\n", e.script)).collect();
    s.push_str("G := lex(Z, Z_(2), Q)\nspine(G, 2)\nabc_n(G, [1 -> 1, 3 -> 2], 6)\nlift_definability(ps(rcf, G), upper(2))\n");
    s
}

fn determinism() -> Outcome {
    let script = corpus_script();
    let a = run_text(&script, &RunOptions::default()).map_err(|e| e.to_string())?.to_json_string();
    let b = run_text(&script, &RunOptions::default()).map_err(|e| e.to_string())?.to_json_string();
    if a != b {
        return Err("reports differ".into());
    }
    Ok(format!("{} bytes identical", a.len()))
}

fn main() {
    let mut ranks = Vec::new();
    for t in [
        OrderTerm::Fin(2),
        OrderTerm::sum([OrderTerm::dense(), OrderTerm::Zeta]),
        OrderTerm::sum([
            OrderTerm::repl(OrderTerm::dense(), OrderTerm::OmegaStar),
            OrderTerm::repl(OrderTerm::dense(), OrderTerm::Omega),
        ]),
        normalize(&GroupTerm::lex(vec![ArchComponent::Q, ArchComponent::Q]).unwrap().gamma()).unwrap(),
    ] {
        ranks.push(drk_order(&t).unwrap());
    }
    let results: Vec<(&str, Outcome)> = vec![
        ("1 golden ranks of lex(Q, Q)", golden_rank_two()),
        ("2 archimedean dichotomy", archimedean_dichotomy()),
        ("3 condensation goldens", condensation_goldens()),
        ("4 oracle equivalence", oracle_equivalence()),
        ("5 invariant inclusions", invariant_suite()),
        ("6 field rank dichotomy", dichotomy_audit(&mut ranks)),
        ("7 corollary cross-validation", corollary_cross_check()),
        ("8 successor lemma on ranks", successor_lemma(&ranks)),
        ("9 determinism", determinism()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(msg) => println!("PASS criterion {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
