//! SMT-LIB 2 (QF_LRA) rendering of a MILP encoding, and a small checker
//! for the fragment it produces.
//!
//! Binaries become `Bool` constants used through `(ite d 1.0 0.0)`. The
//! script is satisfiable iff the sequent has a countervaluation.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::milp::{ColumnKind, LinExpr, MilpEncoding};
use super::simplex::Sense;
use crate::algebra::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed SMT-LIB script: {0}")]
pub struct SmtError(pub String);

fn literal(q: &Rational) -> String {
    let abs = q.abs();
    let body = if abs.denom().is_one() {
        format!("{}.0", abs.numer())
    } else {
        format!("(/ {}.0 {}.0)", abs.numer(), abs.denom())
    };
    if q.is_negative() {
        format!("(- {body})")
    } else {
        body
    }
}

fn term(enc: &MilpEncoding, e: &LinExpr) -> String {
    let mut parts = Vec::new();
    if !e.constant.is_zero() || e.terms.is_empty() {
        parts.push(literal(&e.constant));
    }
    for (j, c) in &e.terms {
        let col = &enc.columns[*j];
        let atom = match col.kind {
            ColumnKind::Continuous => col.name.clone(),
            ColumnKind::Binary => format!("(ite {} 1.0 0.0)", col.name),
        };
        parts.push(if c.is_one() {
            atom
        } else {
            format!("(* {} {atom})", literal(c))
        });
    }
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        format!("(+ {})", parts.join(" "))
    }
}

pub fn emit_smt(enc: &MilpEncoding) -> String {
    let mut out = String::new();
    out.push_str("; premises pinned to 1, conclusion below 1\n");
    out.push_str("(set-option :produce-models true)\n(set-logic QF_LRA)\n");
    for col in &enc.columns {
        let sort = match col.kind {
            ColumnKind::Continuous => "Real",
            ColumnKind::Binary => "Bool",
        };
        let _ = writeln!(out, "(declare-fun {} () {sort})", col.name);
    }
    for c in &enc.constraints {
        // binary range rows are implied by the Bool sort
        if let [(j, _)] = c.expr.terms.as_slice() {
            if enc.columns[*j].kind == ColumnKind::Binary && c.sense != Sense::Eq {
                continue;
            }
        }
        let op = match c.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        let _ = writeln!(out, "(assert ({op} {} 0.0))", term(enc, &c.expr));
    }
    let conclusion = &enc.nodes[enc.conclusion].value;
    let _ = writeln!(out, "(define-fun phi () Real {})", term(enc, conclusion));
    out.push_str("(assert (< phi 1.0))\n(check-sat)\n(get-model)\n");
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn parse_sexps(text: &str) -> Result<Vec<Sexp>, SmtError> {
    let mut stack: Vec<Vec<Sexp>> = vec![Vec::new()];
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        match c {
            ';' => {
                while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                    chars.next();
                }
            }
            '(' => stack.push(Vec::new()),
            ')' => {
                let done = stack.pop().unwrap();
                let Some(parent) = stack.last_mut() else {
                    return Err(SmtError(format!("unbalanced `)` at byte {i}")));
                };
                parent.push(Sexp::List(done));
            }
            c if c.is_whitespace() => {}
            _ => {
                let mut atom = String::from(c);
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_whitespace() || d == '(' || d == ')' || d == ';' {
                        break;
                    }
                    atom.push(d);
                    chars.next();
                }
                stack.last_mut().unwrap().push(Sexp::Atom(atom));
            }
        }
    }
    if stack.len() != 1 {
        return Err(SmtError("unclosed `(`".into()));
    }
    Ok(stack.pop().unwrap())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sort {
    Real,
    Bool,
}

fn sort_of(name: &str) -> Result<Sort, SmtError> {
    match name {
        "Real" => Ok(Sort::Real),
        "Bool" => Ok(Sort::Bool),
        other => Err(SmtError(format!("unknown sort `{other}`"))),
    }
}

fn is_symbol(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || "_~!@$%^&*+-=<>.?/".contains(c) && !c.is_ascii_digit())
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || "_~!@$%^&*+-=<>.?/".contains(c))
}

fn is_number(s: &str) -> bool {
    let mut parts = s.splitn(2, '.');
    let int = parts.next().unwrap();
    let frac = parts.next();
    !int.is_empty()
        && int.chars().all(|c| c.is_ascii_digit())
        && (int == "0" || !int.starts_with('0'))
        && frac.is_none_or(|f| !f.is_empty() && f.chars().all(|c| c.is_ascii_digit()))
}

struct Checker {
    symbols: BTreeMap<String, Sort>,
}

impl Checker {
    /// Sort of `t` and whether it is free of declared symbols.
    fn term(&self, t: &Sexp) -> Result<(Sort, bool), SmtError> {
        match t {
            Sexp::Atom(a) if is_number(a) => Ok((Sort::Real, true)),
            Sexp::Atom(a) if a == "true" || a == "false" => Ok((Sort::Bool, true)),
            Sexp::Atom(a) => match self.symbols.get(a) {
                Some(&s) => Ok((s, false)),
                None => Err(SmtError(format!("undeclared symbol `{a}`"))),
            },
            Sexp::List(items) => {
                let Some(Sexp::Atom(head)) = items.first() else {
                    return Err(SmtError("application without a function symbol".into()));
                };
                let args = items[1..].iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                let all = |s: Sort| args.iter().all(|(t, _)| *t == s);
                let constant = args.iter().all(|(_, c)| *c);
                let arity = |ok: bool| {
                    if ok {
                        Ok(())
                    } else {
                        Err(SmtError(format!("wrong arguments for `{head}`")))
                    }
                };
                match head.as_str() {
                    "+" => arity(args.len() >= 2 && all(Sort::Real)).map(|_| (Sort::Real, constant)),
                    "-" => arity(!args.is_empty() && all(Sort::Real)).map(|_| (Sort::Real, constant)),
                    "*" => {
                        let varying = args.iter().filter(|(_, c)| !*c).count();
                        arity(args.len() >= 2 && all(Sort::Real) && varying <= 1).map(|_| (Sort::Real, constant))
                    }
                    "/" => arity(args.len() == 2 && all(Sort::Real) && constant).map(|_| (Sort::Real, true)),
                    "<=" | "<" | ">=" | ">" => {
                        arity(args.len() >= 2 && all(Sort::Real)).map(|_| (Sort::Bool, constant))
                    }
                    "=" => {
                        arity(args.len() >= 2 && (all(Sort::Real) || all(Sort::Bool))).map(|_| (Sort::Bool, constant))
                    }
                    "and" | "or" => arity(!args.is_empty() && all(Sort::Bool)).map(|_| (Sort::Bool, constant)),
                    "not" => arity(args.len() == 1 && all(Sort::Bool)).map(|_| (Sort::Bool, constant)),
                    "=>" => arity(args.len() >= 2 && all(Sort::Bool)).map(|_| (Sort::Bool, constant)),
                    "ite" => {
                        arity(args.len() == 3 && args[0].0 == Sort::Bool && args[1].0 == args[2].0)?;
                        Ok((args[1].0, constant))
                    }
                    other => Err(SmtError(format!("unknown function `{other}`"))),
                }
            }
        }
    }

    fn declare(&mut self, name: &Sexp, sort: &Sexp) -> Result<(), SmtError> {
        let (Sexp::Atom(n), Sexp::Atom(s)) = (name, sort) else {
            return Err(SmtError("bad declaration".into()));
        };
        if !is_symbol(n) {
            return Err(SmtError(format!("`{n}` is not a symbol")));
        }
        if self.symbols.insert(n.clone(), sort_of(s)?).is_some() {
            return Err(SmtError(format!("`{n}` declared twice")));
        }
        Ok(())
    }
}

/// Syntactic and sort check of a QF_LRA script in the emitted fragment.
pub fn check_smt(text: &str) -> Result<(), SmtError> {
    let mut ck = Checker {
        symbols: BTreeMap::new(),
    };
    let mut logic = false;
    for cmd in parse_sexps(text)? {
        let Sexp::List(items) = &cmd else {
            return Err(SmtError("top-level atom".into()));
        };
        let Some(Sexp::Atom(head)) = items.first() else {
            return Err(SmtError("empty command".into()));
        };
        let rest = &items[1..];
        match (head.as_str(), rest) {
            ("set-logic", [Sexp::Atom(l)]) => {
                if logic {
                    return Err(SmtError("logic set twice".into()));
                }
                if l != "QF_LRA" {
                    return Err(SmtError(format!("unexpected logic `{l}`")));
                }
                logic = true;
            }
            ("set-option" | "set-info", [Sexp::Atom(k), _]) if k.starts_with(':') => {}
            ("declare-fun", [name, Sexp::List(params), sort]) if params.is_empty() => {
                ck.declare(name, sort)?;
            }
            ("declare-const", [name, sort]) => ck.declare(name, sort)?,
            ("define-fun", [name, Sexp::List(params), Sexp::Atom(sort), body]) if params.is_empty() => {
                let (s, _) = ck.term(body)?;
                if s != sort_of(sort)? {
                    return Err(SmtError("define-fun body has the wrong sort".into()));
                }
                ck.declare(name, &Sexp::Atom(sort.clone()))?;
            }
            ("assert", [t]) => {
                if !logic {
                    return Err(SmtError("assert before set-logic".into()));
                }
                if ck.term(t)?.0 != Sort::Bool {
                    return Err(SmtError("asserted term is not Boolean".into()));
                }
            }
            ("check-sat" | "get-model" | "exit", []) => {}
            (other, _) => return Err(SmtError(format!("unsupported command `{other}`"))),
        }
    }
    if !logic {
        return Err(SmtError("no set-logic".into()));
    }
    Ok(())
}
