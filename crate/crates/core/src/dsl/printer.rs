use std::fmt::Write;

use crate::expr::{BinaryOp, Expr, UnaryOp};
use crate::spec::InequalitySpec;

// Binding strength, loosest first.
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const PREFIX: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => SUM,
        Expr::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => PRODUCT,
        Expr::Unary(UnaryOp::Neg, _) => PREFIX,
        Expr::Pow(..) => POWER,
        _ => ATOM,
    }
}

fn write_wrapped(out: &mut String, e: &Expr, parens: bool) {
    if parens {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

pub(crate) fn write_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Const(c) => out.push_str(c.text()),
        Expr::Var(i) => {
            let _ = write!(out, "x{i}");
        }
        Expr::Pi => out.push_str("pi"),
        Expr::Unary(UnaryOp::Neg, a) => {
            out.push('-');
            write_wrapped(out, a, precedence(a) < PREFIX);
        }
        Expr::Unary(op, a) => {
            out.push_str(op.name());
            out.push('(');
            write_expr(out, a);
            out.push(')');
        }
        Expr::Binary(BinaryOp::Atn2, a, b) => {
            out.push_str("atn2(");
            write_expr(out, a);
            out.push_str(", ");
            write_expr(out, b);
            out.push(')');
        }
        Expr::Binary(op, a, b) => {
            let (p, sym) = match op {
                BinaryOp::Add => (SUM, " + "),
                BinaryOp::Sub => (SUM, " - "),
                BinaryOp::Mul => (PRODUCT, " * "),
                _ => (PRODUCT, " / "),
            };
            // Left-associative: only a strictly looser left operand needs
            // parentheses, the right one also at equal strength.
            write_wrapped(out, a, precedence(a) < p);
            out.push_str(sym);
            write_wrapped(out, b, precedence(b) <= p);
        }
        Expr::Pow(a, n) => {
            write_wrapped(out, a, precedence(a) < ATOM);
            let _ = write!(out, "^{n}");
        }
    }
}

fn escape(name: &str) -> String {
    let mut s = String::with_capacity(name.len());
    for c in name.chars() {
        match c {
            '"' => s.push_str("\\\""),
            '\\' => s.push_str("\\\\"),
            '\n' => s.push_str("\\n"),
            c => s.push(c),
        }
    }
    s
}

pub(super) fn print(spec: &InequalitySpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ineq {} \"{}\" {{", spec.id(), escape(spec.name()));
    for (i, b) in spec.bounds().iter().enumerate() {
        let _ = writeln!(out, "  dom x{i} in [{}, {}];", b.lo, b.hi);
    }
    for g in spec.constraints() {
        out.push_str("  constraint ");
        write_expr(&mut out, g);
        out.push_str(" >= 0;\n");
    }
    out.push_str("  goal ");
    for (i, f) in spec.disjuncts().iter().enumerate() {
        if i > 0 {
            out.push_str(" \\/ ");
        }
        write_expr(&mut out, f);
        out.push_str(" < 0");
    }
    out.push_str(";\n}\n");
    out
}
