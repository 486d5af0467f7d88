//! Brute-force first-order evaluation over finite orders, used as an
//! oracle for schema semantics.

use std::collections::HashMap;

use super::term::OrderTerm;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Lt(String, String),
    Eq(String, String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

pub fn lt(a: &str, b: &str) -> Formula {
    Formula::Lt(a.into(), b.into())
}

pub fn le(a: &str, b: &str) -> Formula {
    Formula::Or(vec![lt(a, b), eq(a, b)])
}

pub fn eq(a: &str, b: &str) -> Formula {
    Formula::Eq(a.into(), b.into())
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(fs: impl IntoIterator<Item = Formula>) -> Formula {
    Formula::And(fs.into_iter().collect())
}

pub fn or(fs: impl IntoIterator<Item = Formula>) -> Formula {
    Formula::Or(fs.into_iter().collect())
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

pub fn exists(v: &str, f: Formula) -> Formula {
    Formula::Exists(v.into(), Box::new(f))
}

pub fn forall(v: &str, f: Formula) -> Formula {
    Formula::Forall(v.into(), Box::new(f))
}

/// `b` is the successor of `a`: `a < b ∧ ∀z ¬(a < z < b)`.
pub fn successor(a: &str, b: &str) -> Formula {
    let z = fresh(&[a, b]);
    and([lt(a, b), forall(&z, not(and([lt(a, &z), lt(&z, b)])))])
}

/// The condensation relation: `x` and `y` are joined by a chain of
/// successors in both directions.
pub fn condensation(x: &str, y: &str) -> Formula {
    let half = |a: &str, b: &str| {
        and([
            lt(a, b),
            forall(
                "l",
                implies(and([le(a, "l"), lt("l", b)]), exists("s", successor("l", "s"))),
            ),
            forall(
                "u",
                implies(and([lt(a, "u"), le("u", b)]), exists("p", successor("p", "u"))),
            ),
        ])
    };
    or([eq(x, y), half(x, y), half(y, x)])
}

fn fresh(taken: &[&str]) -> String {
    (0..)
        .map(|k| format!("z{k}"))
        .find(|v| !taken.contains(&v.as_str()))
        .unwrap()
}

/// Evaluate `f` in the finite order denoted by `t`. Points are numbered
/// `0..n` in increasing order.
pub fn fo_eval_finite(t: &OrderTerm, f: &Formula, env: &HashMap<String, usize>) -> Result<bool> {
    let n = t
        .finite_len()
        .ok_or_else(|| Error::Scope(format!("{t} is not finite")))? as usize;
    let mut env = env.clone();
    eval(n, f, &mut env)
}

fn lookup(env: &HashMap<String, usize>, v: &str) -> Result<usize> {
    env.get(v).copied().ok_or_else(|| Error::Scope(format!("unbound variable {v}")))
}

fn eval(n: usize, f: &Formula, env: &mut HashMap<String, usize>) -> Result<bool> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Lt(a, b) => lookup(env, a)? < lookup(env, b)?,
        Formula::Eq(a, b) => lookup(env, a)? == lookup(env, b)?,
        Formula::Not(g) => !eval(n, g, env)?,
        Formula::And(gs) => {
            for g in gs {
                if !eval(n, g, env)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval(n, g, env)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Implies(a, b) => !eval(n, a, env)? || eval(n, b, env)?,
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let want = matches!(f, Formula::Exists(..));
            let saved = env.get(v).copied();
            let mut result = !want;
            for k in 0..n {
                env.insert(v.clone(), k);
                if eval(n, g, env)? == want {
                    result = want;
                    break;
                }
            }
            match saved {
                Some(k) => env.insert(v.clone(), k),
                None => env.remove(v),
            };
            result
        }
    })
}
