//! Generators shared by the property and acceptance tests.
#![allow(dead_code)]

use proptest::prelude::*;
use symlog_core::formula::{BinOp, Formula, Quantifier, Sequent, Slot};
use symlog_core::kernel::{Params, ProofNode, Rule};
use symlog_core::registry::{DomainRecord, Registry};
use symlog_core::term::{CorrelationTag, Index, Term};

pub const DOMAINS: [&str; 5] = ["D", "V", "Ddown", "Dup", "Dplus"];

pub fn arb_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        prop::sample::select(vec!["x", "y", "z"]).prop_map(Term::var),
        prop::sample::select(vec!["T1", "T2"]).prop_map(Term::constant),
        (prop::sample::select(vec!["down", "up", "plus"]), 1u64..4, 4u64..9)
            .prop_map(|(l, n, d)| Term::outcome_of(l, n, d)),
        prop::sample::select(vec!["down", "up"]).prop_map(|l| Term::outcome_of(l, 1, 1)),
    ]
}

pub fn arb_index() -> impl Strategy<Value = Index> {
    prop_oneof![
        prop::sample::select(vec!["i", "j", "k"]).prop_map(|v| Index::Var(v.into())),
        (1u8..4).prop_map(Index::Const),
    ]
}

pub fn arb_tag() -> impl Strategy<Value = CorrelationTag> {
    prop::sample::select(CorrelationTag::ALL.to_vec())
}

fn arb_binop() -> impl Strategy<Value = BinOp> {
    prop::sample::select(vec![BinOp::And, BinOp::Or, BinOp::Times, BinOp::Par, BinOp::Imp, BinOp::Excl])
}

pub fn arb_leaf() -> impl Strategy<Value = Formula> {
    let domain = || prop::sample::select(DOMAINS.to_vec());
    prop_oneof![
        prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::prop),
        (
            prop::sample::select(vec!["A", "B"]),
            prop::option::of(arb_index()),
            prop::collection::vec(arb_term(), 0..3)
        )
            .prop_map(|(p, i, args)| match i {
                Some(i) => Formula::indexed_atom(p, i, args),
                None => Formula::atom(p, args),
            }),
        (arb_term(), domain()).prop_map(|(t, d)| Formula::member(t, d)),
        (arb_term(), domain(), prop::sample::select(vec!["d", "perp", "top"]))
            .prop_map(|(t, d, k)| Formula::dual_member(t, d, k)),
        (arb_term(), arb_term()).prop_map(|(s, t)| Formula::Eq(s, t)),
        (arb_term(), arb_term()).prop_map(|(s, t)| Formula::Neq(s, t)),
        (arb_index(), arb_tag(), arb_index()).prop_map(|(left, tag, right)| Formula::IndexRel { left, tag, right }),
    ]
}

/// Formulas of height at most `depth`.
pub fn arb_formula(depth: u32) -> impl Strategy<Value = Formula> {
    arb_leaf().prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            (arb_binop(), inner.clone(), inner.clone()).prop_map(|(op, a, b)| Formula::binary(op, a, b)),
            (
                prop::sample::select(vec![Quantifier::Forall, Quantifier::Exists]),
                prop::sample::select(vec!["x", "y"]),
                prop::sample::select(DOMAINS.to_vec()),
                inner.clone()
            )
                .prop_map(|(q, v, d, b)| Formula::quant(q, v, d, b)),
            (arb_tag(), inner.clone(), inner).prop_map(|(t, a, b)| Formula::join(t, a, b)),
        ]
    })
}

pub fn arb_slot() -> impl Strategy<Value = Slot> {
    prop_oneof![
        3 => arb_formula(3).prop_map(Slot::Single),
        1 => (arb_formula(2), arb_tag(), arb_formula(2)).prop_map(|(a, t, b)| Slot::corr(a, t, b)),
    ]
}

pub fn arb_sequent() -> impl Strategy<Value = Sequent> {
    (prop::collection::vec(arb_slot(), 0..4), prop::collection::vec(arb_slot(), 0..4))
        .prop_map(|(l, r)| Sequent::new(l, r))
}

/// Registry for generated proofs: one plain domain.
pub fn proof_registry() -> Registry {
    let mut reg = Registry::new();
    reg.register(DomainRecord::new("D", vec![Term::constant("T1"), Term::constant("T2")]))
        .unwrap();
    reg
}

/// A recipe for a proof. `build` interprets it, skipping steps whose
/// selectors find nothing to act on.
#[derive(Debug, Clone)]
pub enum Recipe {
    Leaf(u8, u8),
    Unary(u8, u8, u8, u8, Box<Recipe>),
    Binary(u8, u8, u8, Box<Recipe>, Box<Recipe>),
}

pub fn arb_recipe(depth: u32) -> impl Strategy<Value = Recipe> {
    let leaf = (any::<u8>(), any::<u8>()).prop_map(|(k, a)| Recipe::Leaf(k, a));
    leaf.prop_recursive(depth, 48, 2, |inner| {
        prop_oneof![
            3 => (any::<u8>(), any::<u8>(), any::<u8>(), any::<u8>(), inner.clone())
                .prop_map(|(op, a, b, c, r)| Recipe::Unary(op, a, b, c, Box::new(r))),
            2 => (any::<u8>(), any::<u8>(), any::<u8>(), inner.clone(), inner)
                .prop_map(|(op, a, b, l, r)| Recipe::Binary(op, a, b, Box::new(l), Box::new(r))),
        ]
    })
}

fn atom(k: u8) -> Formula {
    Formula::prop(["p", "q", "r", "s"][k as usize % 4])
}

fn one(f: Formula) -> Slot {
    Slot::Single(f)
}

fn pick(side: &[Slot], k: u8) -> Option<(usize, &Formula)> {
    let singles: Vec<(usize, &Formula)> = side
        .iter()
        .enumerate()
        .filter_map(|(n, s)| s.formula().map(|f| (n, f)))
        .collect();
    if singles.is_empty() {
        None
    } else {
        Some(singles[k as usize % singles.len()])
    }
}

fn removed(side: &[Slot], n: usize) -> Vec<Slot> {
    let mut v = side.to_vec();
    v.remove(n);
    v
}

fn node(left: Vec<Slot>, right: Vec<Slot>, rule: Rule, principal: Option<Formula>, prem: Vec<ProofNode>) -> ProofNode {
    let params = match principal {
        Some(f) => Params::default().with_formula(f),
        None => Params::default(),
    };
    ProofNode::new(Sequent::new(left, right), rule, params, prem)
}

/// Build a proof that checks under all four flags and `proof_registry`.
pub fn build(r: &Recipe) -> ProofNode {
    match r {
        Recipe::Leaf(k, a) => {
            let z = Term::var(["z", "T1"][*a as usize % 2]);
            let mem = Formula::member(z.clone(), "D");
            let dual = Formula::dual_member(z.clone(), "D", "d");
            match k % 5 {
                0 | 1 => node(vec![one(atom(*a))], vec![one(atom(*a))], Rule::Id, None, vec![]),
                2 => node(vec![], vec![one(Formula::Eq(z.clone(), z))], Rule::Refl, None, vec![]),
                3 => node(vec![one(Formula::Neq(z.clone(), z))], vec![], Rule::Irrefl, None, vec![]),
                _ if a % 2 == 0 => node(vec![], vec![one(dual), one(mem)], Rule::DualEm, None, vec![]),
                _ => node(vec![one(dual), one(mem)], vec![], Rule::DualNc, None, vec![]),
            }
        }
        Recipe::Unary(op, a, b, c, sub) => {
            let p = build(sub);
            let (l, rt) = (&p.conclusion.left, &p.conclusion.right);
            let extra = atom(*c);
            let which = if c % 2 == 0 { 1 } else { 2 };
            let with = |op: BinOp, f: &Formula| match which {
                1 => Formula::binary(op, f.clone(), extra.clone()),
                _ => Formula::binary(op, extra.clone(), f.clone()),
            };
            let wrap = |left, right, rule, f: Formula| {
                let mut n = node(left, right, rule, Some(f), vec![p.clone()]);
                if matches!(rule, Rule::AndL | Rule::OrR) {
                    n.params.which = Some(which);
                }
                n
            };
            match op % 9 {
                0 => match pick(l, *a) {
                    Some((n, f)) => {
                        let g = with(BinOp::And, f);
                        wrap([removed(l, n), vec![one(g.clone())]].concat(), rt.clone(), Rule::AndL, g)
                    }
                    None => p,
                },
                1 => match pick(rt, *a) {
                    Some((n, f)) => {
                        let g = with(BinOp::Or, f);
                        wrap(l.clone(), [removed(rt, n), vec![one(g.clone())]].concat(), Rule::OrR, g)
                    }
                    None => p,
                },
                2 | 3 => {
                    let (side, bop, rule) = if op % 9 == 2 {
                        (rt, BinOp::Par, Rule::ParR)
                    } else {
                        (l, BinOp::Times, Rule::TimesL)
                    };
                    match (pick(side, *a), pick(side, *b)) {
                        (Some((n, f)), Some((m, g))) if n != m => {
                            let h = Formula::binary(bop, f.clone(), g.clone());
                            let rest: Vec<Slot> = side
                                .iter()
                                .enumerate()
                                .filter(|(k, _)| *k != n && *k != m)
                                .map(|(_, s)| s.clone())
                                .chain([one(h.clone())])
                                .collect();
                            if rule == Rule::ParR {
                                wrap(l.clone(), rest, rule, h)
                            } else {
                                wrap(rest, rt.clone(), rule, h)
                            }
                        }
                        _ => p,
                    }
                }
                4 => match (pick(l, *a), pick(rt, *b)) {
                    (Some((n, f)), Some((m, g))) => {
                        let h = Formula::imp(f.clone(), g.clone());
                        wrap(removed(l, n), [removed(rt, m), vec![one(h.clone())]].concat(), Rule::ImpR, h)
                    }
                    _ => p,
                },
                5 => match (pick(l, *a), pick(rt, *b)) {
                    (Some((n, f)), Some((m, g))) => {
                        let h = Formula::binary(BinOp::Excl, f.clone(), g.clone());
                        wrap([removed(l, n), vec![one(h.clone())]].concat(), removed(rt, m), Rule::ExclL, h)
                    }
                    _ => p,
                },
                6 => wrap([l.clone(), vec![one(extra.clone())]].concat(), rt.clone(), Rule::WeakenL, extra),
                7 => wrap(l.clone(), [rt.clone(), vec![one(extra.clone())]].concat(), Rule::WeakenR, extra),
                _ => match pick(rt, *a) {
                    Some((_, f)) => {
                        let f = f.clone();
                        let q = wrap(l.clone(), [rt.clone(), vec![one(f.clone())]].concat(), Rule::ExpandR, f.clone());
                        node(l.clone(), rt.clone(), Rule::ContractR, Some(f), vec![q])
                    }
                    None => p,
                },
            }
        }
        Recipe::Binary(op, a, b, x, y) => {
            let (p, q) = (build(x), build(y));
            let (pl, pr) = (&p.conclusion.left, &p.conclusion.right);
            let (ql, qr) = (&q.conclusion.left, &q.conclusion.right);
            match op % 5 {
                0 => match (pick(pl, *a), pick(ql, *b)) {
                    (Some((n, f)), Some((m, g))) => {
                        let h = Formula::binary(BinOp::Par, f.clone(), g.clone());
                        let left = [vec![one(h.clone())], removed(pl, n), removed(ql, m)].concat();
                        node(left, [pr.clone(), qr.clone()].concat(), Rule::ParL, Some(h), vec![p, q])
                    }
                    _ => p,
                },
                1 => match (pick(pr, *a), pick(qr, *b)) {
                    (Some((n, f)), Some((m, g))) => {
                        let h = Formula::binary(BinOp::Times, f.clone(), g.clone());
                        let right = [removed(pr, n), removed(qr, m), vec![one(h.clone())]].concat();
                        node([pl.clone(), ql.clone()].concat(), right, Rule::TimesR, Some(h), vec![p, q])
                    }
                    _ => p,
                },
                2 => match (pick(pr, *a), pick(ql, *b)) {
                    (Some((n, f)), Some((m, g))) => {
                        let h = Formula::imp(f.clone(), g.clone());
                        let left = [pl.clone(), vec![one(h.clone())], removed(ql, m)].concat();
                        node(left, [removed(pr, n), qr.clone()].concat(), Rule::ImpL, Some(h), vec![p, q])
                    }
                    _ => p,
                },
                3 => match (pick(pr, *a), pick(ql, *b)) {
                    (Some((n, f)), Some((m, g))) => {
                        let h = Formula::binary(BinOp::Excl, f.clone(), g.clone());
                        let right = [removed(pr, n), vec![one(h.clone())], qr.clone()].concat();
                        node([pl.clone(), removed(ql, m)].concat(), right, Rule::ExclR, Some(h), vec![p, q])
                    }
                    _ => p,
                },
                _ => match pick(pr, *a) {
                    Some((n, f)) => {
                        let f = f.clone();
                        let id = node(vec![one(f.clone())], vec![one(f.clone())], Rule::Id, None, vec![]);
                        let right = [removed(pr, n), vec![one(f.clone())]].concat();
                        node(pl.clone(), right, Rule::Cut, Some(f), vec![p, id])
                    }
                    None => p,
                },
            }
        }
    }
}
