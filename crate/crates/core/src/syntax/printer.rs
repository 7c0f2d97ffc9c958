//! Concrete syntax printer; `parse(&f.to_string()) == f` holds structurally.

use std::fmt::{self, Write};

use super::Formula;

const IFF: u8 = 0;
const IMPL: u8 = 1;
const DISJ: u8 = 2;
const CONJ: u8 = 3;
const FUSE: u8 = 4;
const UNARY: u8 = 5;
const ATOM: u8 = 6;

/// Recognises the `(a → b)·(b → a)` expansion of `a ↔ b`.
fn as_iff(f: &Formula) -> Option<(&Formula, &Formula)> {
    if let Formula::Fuse(l, r) = f {
        if let (Formula::Impl(a, b), Formula::Impl(b2, a2)) = (l.as_ref(), r.as_ref()) {
            if a == a2 && b == b2 {
                return Some((a, b));
            }
        }
    }
    None
}

fn level(f: &Formula) -> u8 {
    if as_iff(f).is_some() {
        return IFF;
    }
    match f {
        Formula::Zero | Formula::One | Formula::Var(_) => ATOM,
        Formula::Impl(_, b) if **b == Formula::Zero => UNARY,
        Formula::Impl(..) => IMPL,
        Formula::Join(..) => DISJ,
        Formula::Meet(..) => CONJ,
        Formula::Fuse(..) => FUSE,
        Formula::Box(_) | Formula::Diamond(_) | Formula::Delta(_) | Formula::Power(..) => UNARY,
    }
}

fn write_at(out: &mut String, f: &Formula, min: u8) {
    if level(f) < min {
        out.push('(');
        write_at(out, f, IFF);
        out.push(')');
        return;
    }
    if let Some((a, b)) = as_iff(f) {
        write_at(out, a, IFF);
        out.push_str(" <-> ");
        write_at(out, b, IMPL);
        return;
    }
    let infix = |out: &mut String, a: &Formula, op: &str, b: &Formula, l: u8, r: u8| {
        write_at(out, a, l);
        out.push_str(op);
        write_at(out, b, r);
    };
    match f {
        Formula::Zero => out.push('0'),
        Formula::One => out.push('1'),
        Formula::Var(x) => out.push_str(x),
        Formula::Impl(a, b) if **b == Formula::Zero => {
            out.push('~');
            write_at(out, a, UNARY);
        }
        Formula::Impl(a, b) => infix(out, a, " -> ", b, DISJ, IMPL),
        Formula::Join(a, b) => infix(out, a, " \\/ ", b, DISJ, CONJ),
        Formula::Meet(a, b) => infix(out, a, " /\\ ", b, CONJ, FUSE),
        Formula::Fuse(a, b) => infix(out, a, " & ", b, FUSE, UNARY),
        Formula::Box(a) => {
            out.push_str("[]");
            write_at(out, a, UNARY);
        }
        Formula::Diamond(a) => {
            out.push_str("<>");
            write_at(out, a, UNARY);
        }
        Formula::Delta(a) => {
            out.push('D');
            if level(a) >= UNARY && !matches!(**a, Formula::Box(_) | Formula::Diamond(_)) {
                out.push(' ');
            }
            write_at(out, a, UNARY);
        }
        Formula::Power(a, m) => {
            write_at(out, a, ATOM);
            let _ = write!(out, "^{m}");
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_at(&mut s, self, IFF);
        f.write_str(&s)
    }
}
