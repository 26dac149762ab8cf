//! Concrete syntax for formulas and sequents.
//!
//! Compound operands of binary connectives are always parenthesized and
//! quantifiers are always wrapped, so printed text parses back to the same
//! tree without relying on precedence.

use std::fmt;

use super::{ConfigFlags, Decl, ItemKind, Script};
use crate::formula::{BinOp, Formula, Quantifier, Sequent, Slot};
use crate::kernel::{Params, ProofNode};

/// ASCII (parseable) or Unicode (display only) rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    Ascii,
    Unicode,
}

fn op_symbol(op: BinOp, style: Style) -> &'static str {
    match style {
        Style::Ascii => op.symbol(),
        Style::Unicode => match op {
            BinOp::And => "∧",
            BinOp::Or => "∨",
            BinOp::Times => "⊗",
            BinOp::Par => "⅋",
            BinOp::Imp => "→",
            BinOp::Excl => "←",
        },
    }
}

fn write_operand(out: &mut String, f: &Formula, style: Style) {
    match f {
        Formula::Binary { .. } | Formula::Join { .. } => {
            out.push('(');
            write_formula(out, f, style);
            out.push(')');
        }
        _ => write_formula(out, f, style),
    }
}

pub fn write_formula(out: &mut String, f: &Formula, style: Style) {
    use std::fmt::Write;
    let uni = style == Style::Unicode;
    match f {
        Formula::Atom { pred, index, args } => {
            out.push_str(pred);
            if let Some(i) = index {
                let _ = write!(out, "_{i}");
            }
            if !args.is_empty() {
                out.push('(');
                for (k, t) in args.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    let _ = write!(out, "{t}");
                }
                out.push(')');
            }
        }
        Formula::Member { term, domain } => {
            let _ = write!(out, "{term} {} {domain}", if uni { "∈" } else { "in" });
        }
        Formula::DualMember {
            term,
            domain,
            duality,
        } => {
            let _ = write!(out, "({term} {} {domain})^{duality}", if uni { "∈" } else { "in" });
        }
        Formula::Eq(s, t) => {
            let _ = write!(out, "{s} = {t}");
        }
        Formula::Neq(s, t) => {
            let _ = write!(out, "{s} {} {t}", if uni { "≠" } else { "/=" });
        }
        Formula::IndexRel { left, tag, right } => {
            let _ = write!(out, "{left} ~{} {right}", tag.suffix());
        }
        Formula::Binary { op, lhs, rhs } => {
            write_operand(out, lhs, style);
            let _ = write!(out, " {} ", op_symbol(*op, style));
            write_operand(out, rhs, style);
        }
        Formula::Join { tag, lhs, rhs } => {
            write_operand(out, lhs, style);
            if uni {
                let _ = write!(out, " ⋈{} ", tag.suffix());
            } else {
                let _ = write!(out, " join_{} ", tag.suffix());
            }
            write_operand(out, rhs, style);
        }
        Formula::Quant { q, var, domain, body } => {
            let word = match (q, uni) {
                (Quantifier::Forall, false) => "forall",
                (Quantifier::Exists, false) => "exists",
                (Quantifier::Forall, true) => "∀",
                (Quantifier::Exists, true) => "∃",
            };
            if uni {
                let _ = write!(out, "({word}{var} ∈ {domain}. ");
            } else {
                let _ = write!(out, "({word} {var} in {domain} . ");
            }
            write_formula(out, body, style);
            out.push(')');
        }
    }
}

pub fn write_slot(out: &mut String, s: &Slot, style: Style) {
    match s {
        Slot::Single(f) => write_formula(out, f, style),
        Slot::Corr { first, tag, second } => {
            write_formula(out, first, style);
            out.push_str(" ,_");
            out.push(tag.suffix());
            out.push(' ');
            write_formula(out, second, style);
        }
    }
}

pub fn write_sequent(out: &mut String, s: &Sequent, style: Style) {
    let side = |slots: &[Slot]| {
        let mut buf = String::new();
        for (k, slot) in slots.iter().enumerate() {
            if k > 0 {
                buf.push_str(", ");
            }
            write_slot(&mut buf, slot, style);
        }
        buf
    };
    let turnstile = if style == Style::Unicode { "⊢" } else { "|-" };
    let (l, r) = (side(&s.left), side(&s.right));
    if !l.is_empty() {
        out.push_str(&l);
        out.push(' ');
    }
    out.push_str(turnstile);
    if !r.is_empty() {
        out.push(' ');
        out.push_str(&r);
    }
}

pub fn formula_string(f: &Formula, style: Style) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, style);
    s
}

pub fn sequent_string(q: &Sequent, style: Style) -> String {
    let mut s = String::new();
    write_sequent(&mut s, q, style);
    s
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&formula_string(self, Style::Ascii))
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_slot(&mut s, self, Style::Ascii);
        f.write_str(&s)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&sequent_string(self, Style::Ascii))
    }
}

fn push_params(out: &mut String, params: &Params) {
    use std::fmt::Write;
    if let Some(f) = &params.formula {
        let _ = write!(out, " formula=[{f}]");
    }
    if let Some(v) = &params.var {
        let _ = write!(out, " var={v}");
    }
    if let Some(t) = &params.term {
        let _ = write!(out, " term=[{t}]");
    }
    if let Some(d) = &params.domain {
        let _ = write!(out, " domain={d}");
    }
    if let Some(d) = &params.duality {
        let _ = write!(out, " duality={d}");
    }
    if let Some(w) = params.which {
        let _ = write!(out, " which={w}");
    }
}

/// The rule line and premises of `node`, with the rule line at `indent`.
fn write_proof_body(out: &mut String, node: &ProofNode, indent: usize) {
    let pad = " ".repeat(indent);
    out.push_str(&pad);
    out.push_str("by ");
    out.push_str(node.rule.name());
    push_params(out, &node.params);
    out.push('\n');
    for p in &node.premises {
        out.push_str(&pad);
        out.push_str("- ");
        write_sequent(out, &p.conclusion, Style::Ascii);
        out.push('\n');
        write_proof_body(out, p, indent + 2);
    }
}

/// `proof NAME : SEQUENT` followed by the indented derivation.
pub fn proof_string(name: &str, node: &ProofNode) -> String {
    let mut out = format!("proof {name} : {}\n", node.conclusion);
    write_proof_body(&mut out, node, 2);
    out
}

fn decl_string(d: &Decl) -> String {
    match d {
        Decl::Domain(r) => {
            let entries: Vec<String> = r.entries.iter().map(|t| t.to_string()).collect();
            let mut s = format!("domain {} = {{{}}}", r.name, entries.join(", "));
            for (on, word) in [
                (r.focused, "focused"),
                (r.virtual_singleton, "virtual"),
                (r.inhabited, "inhabited"),
                (r.substitution_allowed, "substitution"),
            ] {
                if on {
                    s.push(' ');
                    s.push_str(word);
                }
            }
            if let Some(dual) = &r.duality {
                s.push_str(" duality ");
                s.push_str(dual);
            }
            s
        }
        Decl::Config(flags) => {
            let on: Vec<&str> = ConfigFlags::NAMES
                .into_iter()
                .filter(|n| flags.get(n) == Some(true))
                .collect();
            if on.is_empty() {
                "config none".to_string()
            } else {
                format!("config {}", on.join(" "))
            }
        }
        Decl::LicenseSubst(dom) => format!("license subst {dom}"),
        Decl::LicenseDAxiom { domain, duality } => format!("license daxiom {domain} {duality}"),
        Decl::CollapseDemo => "collapse_demo".to_string(),
    }
}

pub fn script_string(script: &Script) -> String {
    let mut out = String::new();
    for d in &script.declarations {
        out.push_str(&decl_string(d));
        out.push('\n');
    }
    for item in &script.items {
        match &item.kind {
            ItemKind::Formula(f) => out.push_str(&format!("formula {} : {f}\n", item.name)),
            ItemKind::Sequent(s) => out.push_str(&format!("sequent {} : {s}\n", item.name)),
            ItemKind::Proof(p) => out.push_str(&proof_string(&item.name, p)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{CorrelationTag, Index, Term};

    #[test]
    fn prints_examples() {
        let p = Formula::prop("p");
        let q = Formula::prop("q");
        assert_eq!(Formula::imp(p.clone(), q.clone()).to_string(), "p -> q");
        let nested = Formula::imp(Formula::and(p.clone(), q.clone()), p.clone());
        assert_eq!(nested.to_string(), "(p & q) -> p");
        let a = |i: u8| Formula::indexed_atom("A", Index::Const(i), vec![Term::var("x")]);
        let bell = Formula::forall("x", "Dminus", Formula::join(CorrelationTag::Opposite, a(1), a(2)));
        assert_eq!(bell.to_string(), "(forall x in Dminus . A_1(x) join_o A_2(x))");
        assert_eq!(formula_string(&bell, Style::Unicode), "(∀x ∈ Dminus. A_1(x) ⋈o A_2(x))");
    }

    #[test]
    fn prints_sequents() {
        let z = Term::var("z");
        let s = Sequent::of(vec![], vec![Formula::Eq(z.clone(), z.clone())]);
        assert_eq!(s.to_string(), "|- z = z");
        let d = Sequent::of(vec![Formula::dual_member(z.clone(), "D", "d")], vec![]);
        assert_eq!(d.to_string(), "(z in D)^d |-");
        let c = Sequent::new(
            vec![],
            vec![Slot::corr(Formula::prop("p"), CorrelationTag::Identical, Formula::prop("q"))],
        );
        assert_eq!(c.to_string(), "|- p ,_i q");
    }
}
