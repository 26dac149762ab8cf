use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::check::check_proof;
use super::symmetrize::mirror_params;
use super::{CalculusConfig, Params, ProofNode, Rule};
use crate::duality::{symmetrize_sequent, LiteralInvolution, GENERIC_DUALITY};
use crate::formula::{fresh_name, BinOp, Formula, Quantifier, Sequent, Slot};
use crate::registry::Registry;
use crate::term::Term;

/// Depth used when neither the caller nor `SYMLOG_DEPTH` chooses one.
pub const DEFAULT_DEPTH: usize = 8;
/// Largest depth the search accepts.
pub const MAX_DEPTH: usize = 8;

/// Sides larger than this are not split for multiplicative rules.
const MAX_SPLIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search depth {requested} exceeds the maximum of {max}")]
    DepthExceeded { requested: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(ProofNode),
    NotFound { depth: usize },
}

impl SearchOutcome {
    pub fn proof(&self) -> Option<&ProofNode> {
        match self {
            SearchOutcome::Found(p) => Some(p),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

/// Depth from `SYMLOG_DEPTH`, else [`DEFAULT_DEPTH`].
pub fn default_depth() -> usize {
    std::env::var("SYMLOG_DEPTH")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_DEPTH)
}

/// Bounded backward search by iterative deepening. Principal formulas are
/// tried left to right; cut is used only against focus axioms. Every proof
/// returned has been re-checked.
pub fn search_proof(
    goal: &Sequent,
    cfg: &CalculusConfig,
    reg: &Registry,
    depth: usize,
) -> Result<SearchOutcome, SearchError> {
    if depth > MAX_DEPTH {
        return Err(SearchError::DepthExceeded {
            requested: depth,
            max: MAX_DEPTH,
        });
    }
    let mut s = Searcher {
        cfg,
        reg,
        failed: HashMap::new(),
    };
    for d in 1..=depth {
        if let Some(p) = s.prove(goal, d) {
            if check_proof(&p, cfg, reg).is_ok() {
                return Ok(SearchOutcome::Found(p));
            }
        }
    }
    Ok(SearchOutcome::NotFound { depth })
}

struct Move {
    rule: Rule,
    params: Params,
    premises: Vec<Sequent>,
}

impl Move {
    fn new(rule: Rule, params: Params, premises: Vec<Sequent>) -> Self {
        Move { rule, params, premises }
    }

    fn mirrored(self, inv: &LiteralInvolution) -> Move {
        Move {
            rule: self.rule.mirror(),
            params: mirror_params(self.rule, &self.params, inv),
            premises: self
                .premises
                .iter()
                .rev()
                .map(|s| symmetrize_sequent(s, inv))
                .collect(),
        }
    }
}

struct Searcher<'a> {
    cfg: &'a CalculusConfig,
    reg: &'a Registry,
    /// Largest depth at which a canonical sequent is known to fail.
    failed: HashMap<Sequent, usize>,
}

impl Searcher<'_> {
    fn prove(&mut self, goal: &Sequent, depth: usize) -> Option<ProofNode> {
        if depth == 0 {
            return None;
        }
        let key = goal.canonical();
        if self.failed.get(&key).is_some_and(|&d| d >= depth) {
            return None;
        }
        for m in self.moves(goal) {
            let mut premises = Vec::with_capacity(m.premises.len());
            for p in &m.premises {
                match self.prove(p, depth - 1) {
                    Some(proof) => premises.push(proof),
                    None => break,
                }
            }
            if premises.len() == m.premises.len() {
                return Some(ProofNode::new(goal.clone(), m.rule, m.params, premises));
            }
        }
        self.failed.insert(key, depth);
        None
    }

    fn moves(&self, goal: &Sequent) -> Vec<Move> {
        let mut out = base_moves(goal, self.cfg, self.reg);
        let mut tags: BTreeSet<String> = BTreeSet::new();
        for s in goal.slots() {
            for f in s.formulas() {
                f.visit(&mut |g| {
                    if let Formula::DualMember { duality, .. } = g {
                        tags.insert(duality.clone());
                    }
                });
            }
        }
        if tags.is_empty() {
            tags.insert(GENERIC_DUALITY.to_string());
        }
        let mirrored_cfg = self.cfg.mirrored();
        for d in tags {
            let inv = LiteralInvolution::identity_with(d);
            let sym = symmetrize_sequent(goal, &inv);
            out.extend(
                base_moves(&sym, &mirrored_cfg, self.reg)
                    .into_iter()
                    .filter(|m| !matches!(m.rule, Rule::Id | Rule::Cut))
                    .map(|m| m.mirrored(&inv)),
            );
        }
        // Axioms first, then logical rules, structural rules last.
        out.sort_by_key(|m| match m.rule {
            _ if m.premises.is_empty() => 0,
            Rule::WeakenL | Rule::WeakenR => 3,
            Rule::Cut => 2,
            _ => 1,
        });
        out
    }
}

fn single(f: &Formula) -> Slot {
    Slot::Single(f.clone())
}

fn with(side: &[Slot], extra: impl IntoIterator<Item = Slot>) -> Vec<Slot> {
    let mut out = side.to_vec();
    out.extend(extra);
    out
}

/// All ways of splitting `items` into two sub-multisets.
fn splits(items: &[Slot]) -> Vec<(Vec<Slot>, Vec<Slot>)> {
    let n = items.len();
    (0..1usize << n)
        .map(|mask| {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (k, s) in items.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    a.push(s.clone());
                } else {
                    b.push(s.clone());
                }
            }
            (a, b)
        })
        .collect()
}

fn ctx_ok(allowed: bool, ctx: &[Slot]) -> bool {
    allowed || ctx.is_empty()
}

/// Moves whose rule is a base rule, for principal formulas on either side.
fn base_moves(goal: &Sequent, cfg: &CalculusConfig, reg: &Registry) -> Vec<Move> {
    let mut out = Vec::new();
    let (l, r) = (&goal.left, &goal.right);

    // Axioms.
    if let ([a], [b]) = (l.as_slice(), r.as_slice()) {
        if a.canonical() == b.canonical() {
            out.push(Move::new(Rule::Id, Params::default(), vec![]));
        }
    }
    if l.is_empty() {
        if let [Slot::Single(f)] = r.as_slice() {
            match f {
                Formula::Eq(s, t) if s == t => out.push(Move::new(Rule::Refl, Params::default(), vec![])),
                Formula::Member { term, domain } => {
                    if let Ok(rec) = reg.get(domain) {
                        let witness = rec.witness().as_ref() == Some(term);
                        let entry = rec.entries.contains(term) && (rec.focused || cfg.allows_substitution(domain));
                        if witness || entry {
                            out.push(Move::new(Rule::MemberAx, Params::default(), vec![]));
                        }
                    }
                }
                _ => {}
            }
        }
        if let [Slot::Single(Formula::Member { term, domain }), Slot::Single(Formula::DualMember { term: t2, domain: d2, .. })]
        | [Slot::Single(Formula::DualMember { term: t2, domain: d2, .. }), Slot::Single(Formula::Member { term, domain })] =
            r.as_slice()
        {
            if term == t2 && domain == d2 {
                out.push(Move::new(Rule::DualEm, Params::default(), vec![]));
            }
        }
    }
    if let ([Slot::Single(Formula::Member { term, domain })], [Slot::Single(disj)]) = (l.as_slice(), r.as_slice()) {
        if let Ok(rec) = reg.get(domain) {
            if rec.focused && rec.entry_disjunction(term).as_ref() == Some(disj) {
                out.push(Move::new(Rule::FocusAx, Params::default(), vec![]));
            }
        }
    }

    // Right rules.
    for (k, slot) in r.iter().enumerate() {
        let mut delta = r.clone();
        delta.remove(k);
        let gated = ctx_ok(cfg.right_contexts, &delta);
        match slot {
            Slot::Single(f) => match f {
                Formula::Binary { op: BinOp::And, lhs, rhs } if gated => out.push(Move::new(
                    Rule::AndR,
                    Params::default().with_formula(f.clone()),
                    vec![
                        Sequent::new(l.clone(), with(&delta, [single(lhs)])),
                        Sequent::new(l.clone(), with(&delta, [single(rhs)])),
                    ],
                )),
                Formula::Binary { op: BinOp::Par, lhs, rhs } if gated => out.push(Move::new(
                    Rule::ParR,
                    Params::default().with_formula(f.clone()),
                    vec![Sequent::new(l.clone(), with(&delta, [single(lhs), single(rhs)]))],
                )),
                Formula::Binary { op: BinOp::Imp, lhs, rhs } if gated => out.push(Move::new(
                    Rule::ImpR,
                    Params::default().with_formula(f.clone()),
                    vec![Sequent::new(with(l, [single(lhs)]), with(&delta, [single(rhs)]))],
                )),
                Formula::Quant {
                    q: Quantifier::Forall,
                    var,
                    domain,
                    body,
                } if gated => {
                    let mut avoid = goal.all_vars();
                    avoid.extend(reg.domains().map(|d| crate::registry::witness_name(&d.name)));
                    let z = fresh_name("z", &avoid);
                    let zt = Term::var(&z);
                    out.push(Move::new(
                        Rule::ForallF,
                        Params::default().with_formula(f.clone()).with_var(z),
                        vec![Sequent::new(
                            with(l, [single(&Formula::member(zt.clone(), domain.clone()))]),
                            with(&delta, [single(&body.replace_var(var, &zt))]),
                        )],
                    ));
                }
                Formula::Join { tag, lhs, rhs } if gated && virtual_context(l, reg) => out.push(Move::new(
                    Rule::JoinR,
                    Params::default().with_formula(f.clone()),
                    vec![Sequent::new(
                        l.clone(),
                        with(&delta, [Slot::corr((**lhs).clone(), *tag, (**rhs).clone())]),
                    )],
                )),
                _ => {}
            },
            Slot::Corr { first, tag, second } if gated => {
                if let (Some(i), Some(j)) = (first.index(), second.index()) {
                    if first.reindex(&i, &j) == *second {
                        let rel = Formula::IndexRel { left: i, tag: *tag, right: j };
                        out.push(Move::new(
                            Rule::ConvR,
                            Params::default(),
                            vec![Sequent::new(with(l, [single(&rel)]), with(&delta, [single(first)]))],
                        ));
                    }
                }
            }
            _ => {}
        }
    }

    // Left rules.
    for (k, slot) in l.iter().enumerate() {
        let Slot::Single(f) = slot else { continue };
        let mut gamma = l.clone();
        gamma.remove(k);
        match f {
            Formula::Binary { op: BinOp::And, lhs, rhs } if ctx_ok(cfg.left_contexts, &gamma) => {
                for (w, part) in [(1u8, lhs), (2, rhs)] {
                    out.push(Move::new(
                        Rule::AndL,
                        Params::default().with_formula(f.clone()).with_which(w),
                        vec![Sequent::new(with(&gamma, [single(part)]), r.clone())],
                    ));
                }
            }
            Formula::Binary { op: BinOp::Par, lhs, rhs } if gamma.len() + r.len() <= MAX_SPLIT => {
                for (g1, g2) in splits(&gamma) {
                    if !ctx_ok(cfg.left_contexts, &g1) || !ctx_ok(cfg.left_contexts, &g2) {
                        continue;
                    }
                    for (d1, d2) in splits(r) {
                        out.push(Move::new(
                            Rule::ParL,
                            Params::default().with_formula(f.clone()),
                            vec![
                                Sequent::new(with(&g1, [single(lhs)]), d1.clone()),
                                Sequent::new(with(&g2, [single(rhs)]), d2),
                            ],
                        ));
                    }
                }
            }
            Formula::Binary { op: BinOp::Imp, lhs, rhs } if gamma.len() + r.len() <= MAX_SPLIT => {
                for (g1, g2) in splits(&gamma) {
                    if !ctx_ok(cfg.left_contexts, &g2) {
                        continue;
                    }
                    for (d1, d2) in splits(r) {
                        if !ctx_ok(cfg.right_contexts, &d1) {
                            continue;
                        }
                        out.push(Move::new(
                            Rule::ImpL,
                            Params::default().with_formula(f.clone()),
                            vec![
                                Sequent::new(g1.clone(), with(&d1, [single(lhs)])),
                                Sequent::new(with(&g2, [single(rhs)]), d2),
                            ],
                        ));
                    }
                }
            }
            Formula::Quant {
                q: Quantifier::Forall,
                var,
                domain,
                body,
            } if gamma.len() + r.len() <= MAX_SPLIT => {
                for t in instance_terms(goal, domain, reg) {
                    let member = Formula::member(t.clone(), domain.clone());
                    let inst = body.replace_var(var, &t);
                    for (g0, g1) in splits(&gamma) {
                        if !ctx_ok(cfg.left_contexts, &g1) {
                            continue;
                        }
                        for (d1, d2) in splits(r) {
                            if !ctx_ok(cfg.right_contexts, &d1) {
                                continue;
                            }
                            out.push(Move::new(
                                Rule::ForallR,
                                Params::default().with_formula(f.clone()).with_term(t.clone()),
                                vec![
                                    Sequent::new(g0.clone(), with(&d1, [single(&member)])),
                                    Sequent::new(with(&g1, [single(&inst)]), d2),
                                ],
                            ));
                        }
                    }
                }
            }
            Formula::Eq(s, t) if s != t => {
                for (from, to) in [(s, t), (t, s)] {
                    let prem = Sequent::new(gamma.clone(), r.clone()).map(|g| g.replace_term(from, to));
                    if !prem.equiv(&Sequent::new(gamma.clone(), r.clone())) {
                        out.push(Move::new(Rule::EqIntro, Params::default().with_formula(f.clone()), vec![prem]));
                    }
                }
            }
            Formula::IndexRel { left: i, tag, right: j } => {
                for (m, a) in r.iter().enumerate() {
                    let Slot::Single(a) = a else { continue };
                    if a.index().as_ref() != Some(i) {
                        continue;
                    }
                    let mut delta = r.clone();
                    delta.remove(m);
                    if !ctx_ok(cfg.right_contexts, &delta) {
                        continue;
                    }
                    out.push(Move::new(
                        Rule::ConvRInv,
                        Params::default().with_formula(a.clone()),
                        vec![Sequent::new(
                            gamma.clone(),
                            with(&delta, [Slot::corr(a.clone(), *tag, a.reindex(i, j))]),
                        )],
                    ));
                }
            }
            Formula::Member { term, domain } if cfg.cut => {
                if let Ok(rec) = reg.get(domain) {
                    if rec.focused {
                        if let Some(disj) = rec.entry_disjunction(term) {
                            out.push(Move::new(
                                Rule::Cut,
                                Params::default().with_formula(disj.clone()),
                                vec![
                                    Sequent::of(vec![f.clone()], vec![disj.clone()]),
                                    Sequent::new(with(&gamma, [single(&disj)]), r.clone()),
                                ],
                            ));
                        }
                    }
                }
            }
            _ => {}
        }
    }

    // Weakening.
    if cfg.weakening {
        for (k, s) in r.iter().enumerate() {
            if r[..k].contains(s) {
                continue;
            }
            let mut rest = r.clone();
            rest.remove(k);
            let params = match s {
                Slot::Single(f) => Params::default().with_formula(f.clone()),
                Slot::Corr { .. } => Params::default(),
            };
            out.push(Move::new(Rule::WeakenR, params, vec![Sequent::new(l.clone(), rest)]));
        }
    }
    out
}

fn virtual_context(left: &[Slot], reg: &Registry) -> bool {
    left.iter().filter_map(Slot::formula).any(|f| match f {
        Formula::Member { domain, .. } => reg.is_virtual_singleton(domain),
        _ => false,
    })
}

/// Candidate instances for a universal on the left: the domain's witness
/// and licensed entries, then every term of the goal.
fn instance_terms(goal: &Sequent, domain: &str, reg: &Registry) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    if let Ok(rec) = reg.get(domain) {
        out.extend(rec.witness());
        out.extend(rec.entries.iter().cloned());
    }
    for s in goal.slots() {
        for f in s.formulas() {
            let bound = bound_vars(f);
            f.visit_terms(&mut |t| {
                let is_bound = matches!(t, Term::Var(v) if bound.contains(v));
                if !is_bound && !out.contains(t) {
                    out.push(t.clone());
                }
            });
        }
    }
    out
}

fn bound_vars(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    f.visit(&mut |g| {
        if let Formula::Quant { var, .. } = g {
            out.insert(var.clone());
        }
    });
    out
}
