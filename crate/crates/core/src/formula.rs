//! Formulas, sequents and the substitution machinery.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::term::{CorrelationTag, Index, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("substitution term `{0}` is not closed")]
    OpenTerm(Term),
}

/// Binary connectives. Each has a dual under symmetrization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    /// additive conjunction `&`
    And,
    /// additive disjunction `\/`
    Or,
    /// multiplicative conjunction `(x)`
    Times,
    /// multiplicative disjunction `*`
    Par,
    /// implication `->`
    Imp,
    /// exclusion `<-`
    Excl,
}

impl BinOp {
    pub const ALL: [BinOp; 6] = [
        BinOp::And,
        BinOp::Or,
        BinOp::Times,
        BinOp::Par,
        BinOp::Imp,
        BinOp::Excl,
    ];

    pub fn dual(self) -> BinOp {
        match self {
            BinOp::And => BinOp::Or,
            BinOp::Or => BinOp::And,
            BinOp::Times => BinOp::Par,
            BinOp::Par => BinOp::Times,
            BinOp::Imp => BinOp::Excl,
            BinOp::Excl => BinOp::Imp,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "&",
            BinOp::Or => "\\/",
            BinOp::Times => "(x)",
            BinOp::Par => "*",
            BinOp::Imp => "->",
            BinOp::Excl => "<-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom {
        pred: String,
        index: Option<Index>,
        args: Vec<Term>,
    },
    Member {
        term: Term,
        domain: String,
    },
    /// `(t in D)^d`: membership under a named duality.
    DualMember {
        term: Term,
        domain: String,
        duality: String,
    },
    Eq(Term, Term),
    Neq(Term, Term),
    IndexRel {
        left: Index,
        tag: CorrelationTag,
        right: Index,
    },
    Binary {
        op: BinOp,
        lhs: Box<Formula>,
        rhs: Box<Formula>,
    },
    Quant {
        q: Quantifier,
        var: String,
        domain: String,
        body: Box<Formula>,
    },
    Join {
        tag: CorrelationTag,
        lhs: Box<Formula>,
        rhs: Box<Formula>,
    },
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom {
            pred: pred.into(),
            index: None,
            args,
        }
    }

    pub fn indexed_atom(pred: impl Into<String>, index: Index, args: Vec<Term>) -> Self {
        Formula::Atom {
            pred: pred.into(),
            index: Some(index),
            args,
        }
    }

    pub fn prop(name: impl Into<String>) -> Self {
        Formula::atom(name, Vec::new())
    }

    pub fn member(term: Term, domain: impl Into<String>) -> Self {
        Formula::Member {
            term,
            domain: domain.into(),
        }
    }

    pub fn dual_member(term: Term, domain: impl Into<String>, duality: impl Into<String>) -> Self {
        Formula::DualMember {
            term,
            domain: domain.into(),
            duality: duality.into(),
        }
    }

    pub fn binary(op: BinOp, lhs: Formula, rhs: Formula) -> Self {
        Formula::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Self {
        Formula::binary(BinOp::And, lhs, rhs)
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Self {
        Formula::binary(BinOp::Or, lhs, rhs)
    }

    pub fn imp(lhs: Formula, rhs: Formula) -> Self {
        Formula::binary(BinOp::Imp, lhs, rhs)
    }

    pub fn quant(q: Quantifier, var: impl Into<String>, domain: impl Into<String>, body: Formula) -> Self {
        Formula::Quant {
            q,
            var: var.into(),
            domain: domain.into(),
            body: Box::new(body),
        }
    }

    pub fn forall(var: impl Into<String>, domain: impl Into<String>, body: Formula) -> Self {
        Formula::quant(Quantifier::Forall, var, domain, body)
    }

    pub fn exists(var: impl Into<String>, domain: impl Into<String>, body: Formula) -> Self {
        Formula::quant(Quantifier::Exists, var, domain, body)
    }

    pub fn join(tag: CorrelationTag, lhs: Formula, rhs: Formula) -> Self {
        Formula::Join {
            tag,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    /// Right-nested fold `f1 op (f2 op (... fn))`; `None` for an empty list.
    pub fn fold_right(op: BinOp, items: Vec<Formula>) -> Option<Formula> {
        let mut it = items.into_iter().rev();
        let last = it.next()?;
        Some(it.fold(last, |acc, f| Formula::binary(op, f, acc)))
    }

    pub fn is_atomic(&self) -> bool {
        !matches!(
            self,
            Formula::Binary { .. } | Formula::Quant { .. } | Formula::Join { .. }
        )
    }

    /// Variables with a free occurrence.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn has_free(&self, var: &str) -> bool {
        self.free_vars().contains(var)
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut term = |t: &Term, bound: &Vec<String>| {
            if let Term::Var(v) = t {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        };
        match self {
            Formula::Atom { args, .. } => args.iter().for_each(|t| term(t, bound)),
            Formula::Member { term: t, .. } | Formula::DualMember { term: t, .. } => term(t, bound),
            Formula::Eq(s, t) | Formula::Neq(s, t) => {
                term(s, bound);
                term(t, bound);
            }
            Formula::IndexRel { .. } => {}
            Formula::Binary { lhs, rhs, .. } | Formula::Join { lhs, rhs, .. } => {
                lhs.collect_free(bound, out);
                rhs.collect_free(bound, out);
            }
            Formula::Quant { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| {
            if let Term::Var(v) = t {
                out.insert(v.clone());
            }
        });
        self.visit(&mut |f| {
            if let Formula::Quant { var, .. } = f {
                out.insert(var.clone());
            }
        });
        out
    }

    /// Pre-order traversal of subformulas.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Binary { lhs, rhs, .. } | Formula::Join { lhs, rhs, .. } => {
                lhs.visit(f);
                rhs.visit(f);
            }
            Formula::Quant { body, .. } => body.visit(f),
            _ => {}
        }
    }

    pub fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        self.visit(&mut |g| match g {
            Formula::Atom { args, .. } => args.iter().for_each(&mut *f),
            Formula::Member { term, .. } | Formula::DualMember { term, .. } => f(term),
            Formula::Eq(s, t) | Formula::Neq(s, t) => {
                f(s);
                f(t);
            }
            _ => {}
        });
    }

    /// Domain names mentioned by quantifiers and membership atoms.
    pub fn domains(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Member { domain, .. }
            | Formula::DualMember { domain, .. }
            | Formula::Quant { domain, .. } => {
                out.insert(domain.clone());
            }
            _ => {}
        });
        out
    }

    /// Capture-avoiding replacement of the free occurrences of `var` by `by`.
    pub fn replace_var(&self, var: &str, by: &Term) -> Formula {
        self.replace_term(&Term::Var(var.to_string()), by)
    }

    /// Capture-avoiding replacement of every free occurrence of the term
    /// `from` by `to`.
    pub fn replace_term(&self, from: &Term, to: &Term) -> Formula {
        let rt = |t: &Term| if t == from { to.clone() } else { t.clone() };
        match self {
            Formula::Atom { pred, index, args } => Formula::Atom {
                pred: pred.clone(),
                index: index.clone(),
                args: args.iter().map(rt).collect(),
            },
            Formula::Member { term, domain } => Formula::Member {
                term: rt(term),
                domain: domain.clone(),
            },
            Formula::DualMember {
                term,
                domain,
                duality,
            } => Formula::DualMember {
                term: rt(term),
                domain: domain.clone(),
                duality: duality.clone(),
            },
            Formula::Eq(s, t) => Formula::Eq(rt(s), rt(t)),
            Formula::Neq(s, t) => Formula::Neq(rt(s), rt(t)),
            Formula::IndexRel { .. } => self.clone(),
            Formula::Binary { op, lhs, rhs } => {
                Formula::binary(*op, lhs.replace_term(from, to), rhs.replace_term(from, to))
            }
            Formula::Join { tag, lhs, rhs } => {
                Formula::join(*tag, lhs.replace_term(from, to), rhs.replace_term(from, to))
            }
            Formula::Quant {
                q,
                var,
                domain,
                body,
            } => {
                if from.as_var() == Some(var.as_str()) {
                    return self.clone();
                }
                let from_free = match from {
                    Term::Var(v) => body.has_free(v),
                    _ => true,
                };
                if from_free && to.as_var() == Some(var.as_str()) {
                    let mut avoid = body.all_vars();
                    avoid.insert(var.clone());
                    if let Term::Var(v) = from {
                        avoid.insert(v.clone());
                    }
                    let fresh = fresh_name(var, &avoid);
                    let renamed = body.replace_var(var, &Term::Var(fresh.clone()));
                    return Formula::quant(*q, fresh, domain.clone(), renamed.replace_term(from, to));
                }
                Formula::quant(*q, var.clone(), domain.clone(), body.replace_term(from, to))
            }
        }
    }

    /// Alpha-normal form: bound variables renamed by binder depth.
    pub fn canonical(&self) -> Formula {
        self.canon(0)
    }

    fn canon(&self, depth: usize) -> Formula {
        match self {
            Formula::Binary { op, lhs, rhs } => Formula::binary(*op, lhs.canon(depth), rhs.canon(depth)),
            Formula::Join { tag, lhs, rhs } => Formula::join(*tag, lhs.canon(depth), rhs.canon(depth)),
            Formula::Quant {
                q,
                var,
                domain,
                body,
            } => {
                let name = format!("#{depth}");
                let body = body.replace_var(var, &Term::Var(name.clone())).canon(depth + 1);
                Formula::quant(*q, name, domain.clone(), body)
            }
            _ => self.clone(),
        }
    }

    /// Atom indexes occurring in the formula.
    pub fn index_set(&self) -> BTreeSet<Index> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom { index: Some(i), .. } = f {
                out.insert(i.clone());
            }
        });
        out
    }

    /// The index of a formula built from atoms carrying a single index.
    pub fn index(&self) -> Option<Index> {
        let set = self.index_set();
        if set.len() == 1 {
            set.into_iter().next()
        } else {
            None
        }
    }

    /// Replace atom index `from` by `to` everywhere.
    pub fn reindex(&self, from: &Index, to: &Index) -> Formula {
        match self {
            Formula::Atom { pred, index, args } => Formula::Atom {
                pred: pred.clone(),
                index: match index {
                    Some(i) if i == from => Some(to.clone()),
                    other => other.clone(),
                },
                args: args.clone(),
            },
            Formula::Binary { op, lhs, rhs } => {
                Formula::binary(*op, lhs.reindex(from, to), rhs.reindex(from, to))
            }
            Formula::Join { tag, lhs, rhs } => {
                Formula::join(*tag, lhs.reindex(from, to), rhs.reindex(from, to))
            }
            Formula::Quant {
                q,
                var,
                domain,
                body,
            } => Formula::quant(*q, var.clone(), domain.clone(), body.reindex(from, to)),
            _ => self.clone(),
        }
    }

    /// Structural problems: join operands sharing an index.
    pub fn well_formed(&self) -> Result<(), String> {
        let mut err = None;
        self.visit(&mut |f| {
            if let Formula::Join { lhs, rhs, .. } = f {
                let (a, b) = (lhs.index_set(), rhs.index_set());
                if err.is_none() && (a.is_empty() || b.is_empty() || !a.is_disjoint(&b)) {
                    err = Some("join operands must carry distinct indexes".to_string());
                }
            }
        });
        err.map_or(Ok(()), Err)
    }
}

/// Replace free `x` by the closed term `t`.
pub fn substitute(formula: &Formula, x: &str, t: &Term) -> Result<Formula, SubstError> {
    if !t.is_closed() {
        return Err(SubstError::OpenTerm(t.clone()));
    }
    Ok(formula.replace_var(x, t))
}

pub fn free_vars(formula: &Formula) -> BTreeSet<String> {
    formula.free_vars()
}

/// Equality up to renaming of bound variables.
pub fn formula_equal(a: &Formula, b: &Formula) -> bool {
    a.canonical() == b.canonical()
}

/// `base`, `base1`, `base2`, ... : the first not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() || stem.starts_with('#') { "v" } else { stem };
    if !avoid.contains(stem) {
        return stem.to_string();
    }
    (1..)
        .map(|n| format!("{stem}{n}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded")
}

/// A sequent position: a single formula or a correlated pair `A ,_f B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Single(Formula),
    Corr {
        first: Formula,
        tag: CorrelationTag,
        second: Formula,
    },
}

impl Slot {
    pub fn corr(first: Formula, tag: CorrelationTag, second: Formula) -> Self {
        Slot::Corr { first, tag, second }
    }

    pub fn formula(&self) -> Option<&Formula> {
        match self {
            Slot::Single(f) => Some(f),
            Slot::Corr { .. } => None,
        }
    }

    pub fn formulas(&self) -> Vec<&Formula> {
        match self {
            Slot::Single(f) => vec![f],
            Slot::Corr { first, second, .. } => vec![first, second],
        }
    }

    pub fn map(&self, f: impl Fn(&Formula) -> Formula) -> Slot {
        match self {
            Slot::Single(a) => Slot::Single(f(a)),
            Slot::Corr { first, tag, second } => Slot::corr(f(first), *tag, f(second)),
        }
    }

    pub fn canonical(&self) -> Slot {
        self.map(Formula::canonical)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        self.formulas().into_iter().flat_map(|f| f.free_vars()).collect()
    }

    pub fn index_multiset(&self) -> Vec<Index> {
        let mut out = Vec::new();
        for f in self.formulas() {
            f.visit(&mut |g| {
                if let Formula::Atom { index: Some(i), .. } = g {
                    out.push(i.clone());
                }
            });
        }
        out
    }
}

impl From<Formula> for Slot {
    fn from(f: Formula) -> Self {
        Slot::Single(f)
    }
}

/// `left |- right`. Slot order is kept for printing and symmetrization;
/// the kernel compares sides as multisets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Sequent {
    pub left: Vec<Slot>,
    pub right: Vec<Slot>,
}

impl Sequent {
    pub fn new(left: Vec<Slot>, right: Vec<Slot>) -> Self {
        Sequent { left, right }
    }

    pub fn of(left: Vec<Formula>, right: Vec<Formula>) -> Self {
        Sequent {
            left: left.into_iter().map(Slot::Single).collect(),
            right: right.into_iter().map(Slot::Single).collect(),
        }
    }

    /// Canonical representative: alpha-normal slots, each side sorted.
    pub fn canonical(&self) -> Sequent {
        let mut left: Vec<Slot> = self.left.iter().map(Slot::canonical).collect();
        let mut right: Vec<Slot> = self.right.iter().map(Slot::canonical).collect();
        left.sort();
        right.sort();
        Sequent { left, right }
    }

    /// Equality up to exchange and alpha-renaming.
    pub fn equiv(&self, other: &Sequent) -> bool {
        self.left.len() == other.left.len()
            && self.right.len() == other.right.len()
            && self.canonical() == other.canonical()
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        self.left
            .iter()
            .chain(self.right.iter())
            .flat_map(Slot::free_vars)
            .collect()
    }

    pub fn all_vars(&self) -> BTreeSet<String> {
        self.left
            .iter()
            .chain(self.right.iter())
            .flat_map(|s| s.formulas().into_iter().flat_map(|f| f.all_vars()).collect::<Vec<_>>())
            .collect()
    }

    pub fn map(&self, f: impl Fn(&Formula) -> Formula) -> Sequent {
        Sequent {
            left: self.left.iter().map(|s| s.map(&f)).collect(),
            right: self.right.iter().map(|s| s.map(&f)).collect(),
        }
    }

    pub fn replace_var(&self, var: &str, by: &Term) -> Sequent {
        self.map(|f| f.replace_var(var, by))
    }

    pub fn slots(&self) -> impl Iterator<Item = &Slot> {
        self.left.iter().chain(self.right.iter())
    }

    pub fn domains(&self) -> BTreeSet<String> {
        self.slots()
            .flat_map(|s| s.formulas().into_iter().flat_map(|f| f.domains()).collect::<Vec<_>>())
            .collect()
    }
}

/// Remove one slot alpha-equivalent to `slot`; `None` when absent.
pub fn remove_slot(side: &[Slot], slot: &Slot) -> Option<Vec<Slot>> {
    let target = slot.canonical();
    let pos = side.iter().position(|s| s.canonical() == target)?;
    let mut out = side.to_vec();
    out.remove(pos);
    Some(out)
}

/// Multiset equality of two sides up to alpha-renaming.
pub fn side_equiv(a: &[Slot], b: &[Slot]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut x: Vec<Slot> = a.iter().map(Slot::canonical).collect();
    let mut y: Vec<Slot> = b.iter().map(Slot::canonical).collect();
    x.sort();
    y.sort();
    x == y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::DOWN;

    fn a(t: Term) -> Formula {
        Formula::atom("A", vec![t])
    }

    #[test]
    fn free_vars_examples() {
        let f = Formula::forall("x", "D", a(Term::var("x")));
        assert!(f.free_vars().is_empty());
        let m = Formula::member(Term::var("z"), "D");
        assert_eq!(m.free_vars(), BTreeSet::from(["z".to_string()]));
        let j = Formula::join(
            CorrelationTag::Identical,
            Formula::indexed_atom("A", Index::Const(1), vec![Term::var("z")]),
            Formula::indexed_atom("A", Index::Const(2), vec![Term::var("z")]),
        );
        assert_eq!(j.free_vars(), BTreeSet::from(["z".to_string()]));
    }

    #[test]
    fn substitute_examples() {
        let t1 = Term::constant("T1");
        assert_eq!(substitute(&a(Term::var("z")), "z", &t1).unwrap(), a(t1.clone()));
        let q = Formula::forall("z", "D", a(Term::var("z")));
        assert_eq!(substitute(&q, "z", &t1).unwrap(), q);
        let down = Term::outcome_of(DOWN, 1, 1);
        assert_eq!(
            substitute(&Formula::member(Term::var("z"), "Ddown"), "z", &down).unwrap(),
            Formula::member(down.clone(), "Ddown")
        );
        assert_eq!(
            substitute(&a(Term::var("z")), "z", &Term::var("y")),
            Err(SubstError::OpenTerm(Term::var("y")))
        );
    }

    #[test]
    fn replace_avoids_capture() {
        // forall y. R(y, x) with x := y must not capture.
        let f = Formula::forall("y", "D", Formula::atom("R", vec![Term::var("y"), Term::var("x")]));
        let g = f.replace_var("x", &Term::var("y"));
        assert!(g.has_free("y"));
        assert!(!formula_equal(&f, &g));
    }

    #[test]
    fn formula_equal_examples() {
        let f = Formula::forall("x", "D", a(Term::var("x")));
        let g = Formula::forall("y", "D", a(Term::var("y")));
        assert!(formula_equal(&f, &g));
        let (p, q) = (Formula::prop("A"), Formula::prop("B"));
        assert!(!formula_equal(&Formula::and(p.clone(), q.clone()), &Formula::and(q.clone(), p.clone())));
        let a1 = Formula::indexed_atom("A", Index::Const(1), vec![]);
        let a2 = Formula::indexed_atom("A", Index::Const(2), vec![]);
        assert!(!formula_equal(
            &Formula::join(CorrelationTag::Identical, a1.clone(), a2.clone()),
            &Formula::join(CorrelationTag::Opposite, a1, a2)
        ));
    }

    #[test]
    fn index_propagates_through_constructors() {
        let a1 = Formula::indexed_atom("A", Index::Const(1), vec![Term::var("x")]);
        let b = Formula::prop("p");
        for op in BinOp::ALL {
            assert_eq!(Formula::binary(op, a1.clone(), b.clone()).index(), Some(Index::Const(1)));
        }
        assert_eq!(Formula::forall("x", "D", a1.clone()).index(), Some(Index::Const(1)));
        assert_eq!(a1.reindex(&Index::Const(1), &Index::Const(2)).index(), Some(Index::Const(2)));
    }

    #[test]
    fn sequent_equiv_is_multiset() {
        let (p, q) = (Formula::prop("p"), Formula::prop("q"));
        let s1 = Sequent::of(vec![p.clone(), q.clone()], vec![p.clone()]);
        let s2 = Sequent::of(vec![q.clone(), p.clone()], vec![p.clone()]);
        let s3 = Sequent::of(vec![q.clone(), p.clone(), p.clone()], vec![p]);
        assert!(s1.equiv(&s2));
        assert!(!s1.equiv(&s3));
    }
}
