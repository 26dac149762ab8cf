use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::derived::expand_node;
use super::symmetrize::mirror_params;
use super::{CalculusConfig, CheckError, Failure, Params, ProofNode, Rule};
use crate::duality::{symmetrize_sequent, InvolutionKind, LiteralInvolution, GENERIC_DUALITY};
use crate::formula::{remove_slot, side_equiv, BinOp, Formula, Quantifier, Sequent, Slot};
use crate::registry::Registry;
use crate::term::Term;

/// Counts gathered over every node of a checked proof.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckStats {
    pub nodes: usize,
    pub height: usize,
    pub rules: BTreeMap<String, usize>,
    pub substitution_domains: BTreeSet<String>,
    pub d_axiom_domains: BTreeSet<(String, String)>,
}

/// Outcome of checking a proof: every failing node in pre-order, plus
/// statistics over the whole tree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub ok: bool,
    pub failures: Vec<CheckError>,
    pub stats: CheckStats,
}

impl CheckReport {
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    pub fn first_failure(&self) -> Option<&CheckError> {
        self.failures.first()
    }

    pub fn into_result(self) -> Result<CheckStats, CheckError> {
        match self.failures.into_iter().next() {
            Some(e) => Err(e),
            None => Ok(self.stats),
        }
    }
}

/// Check every node of `proof`. Failures are listed in pre-order.
pub fn check_proof(proof: &ProofNode, cfg: &CalculusConfig, reg: &Registry) -> CheckReport {
    let mut nodes = Vec::new();
    collect(proof, &mut Vec::new(), &mut nodes);
    let failures: Vec<CheckError> = nodes
        .par_iter()
        .filter_map(|(path, node)| {
            check_node(node, cfg, reg).err().map(|failure| CheckError {
                path: path.clone(),
                rule: node.rule.name().to_string(),
                failure,
            })
        })
        .collect();
    let mut stats = CheckStats {
        nodes: nodes.len(),
        height: proof.height(),
        ..CheckStats::default()
    };
    for (_, node) in &nodes {
        *stats.rules.entry(node.rule.name().to_string()).or_default() += 1;
        match node.rule {
            Rule::Subst => {
                if let Some(d) = &node.params.domain {
                    stats.substitution_domains.insert(d.clone());
                }
            }
            Rule::DAxiom | Rule::TopAxiom | Rule::TopAxiomDual => {
                if let Some(pair) = d_axiom_use(node) {
                    stats.d_axiom_domains.insert(pair);
                }
            }
            _ => {}
        }
    }
    CheckReport {
        ok: failures.is_empty(),
        failures,
        stats,
    }
}

/// Check with the configuration implied by `reg` and the given flags.
pub fn check_proof_with(
    proof: &ProofNode,
    reg: &Registry,
    left_contexts: bool,
    right_contexts: bool,
    weakening: bool,
    cut: bool,
) -> CheckReport {
    let cfg = CalculusConfig::from_registry(reg, left_contexts, right_contexts, weakening, cut);
    check_proof(proof, &cfg, reg)
}

fn collect<'a>(node: &'a ProofNode, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a ProofNode)>) {
    out.push((path.clone(), node));
    for (i, p) in node.premises.iter().enumerate() {
        path.push(i);
        collect(p, path, out);
        path.pop();
    }
}

fn d_axiom_use(node: &ProofNode) -> Option<(String, String)> {
    let c = &node.conclusion;
    match node.rule {
        Rule::DAxiom => c.right.iter().find_map(|s| match s {
            Slot::Single(Formula::DualMember { domain, duality, .. }) => Some((domain.clone(), duality.clone())),
            _ => None,
        }),
        Rule::TopAxiom => c.left.iter().find_map(|s| match s {
            Slot::Single(Formula::Member { domain, .. }) => Some((domain.clone(), "top".to_string())),
            _ => None,
        }),
        Rule::TopAxiomDual => c.right.iter().find_map(|s| match s {
            Slot::Single(Formula::DualMember { domain, .. }) => Some((domain.clone(), "top".to_string())),
            _ => None,
        }),
        _ => None,
    }
}

/// Check one inference step against its premises' conclusions.
pub(crate) fn check_node(node: &ProofNode, cfg: &CalculusConfig, reg: &Registry) -> Result<(), Failure> {
    if node.premises.len() != node.rule.arity() {
        return Err(Failure::ArityMismatch {
            expected: node.rule.arity(),
            found: node.premises.len(),
        });
    }
    for slot in node.conclusion.slots() {
        for f in slot.formulas() {
            f.well_formed().map_err(Failure::SideConditionViolated)?;
        }
    }
    let prems: Vec<&Sequent> = node.premises.iter().map(|p| &p.conclusion).collect();
    if node.rule.is_base() {
        return check_base(node.rule, &node.params, &node.conclusion, &prems, cfg, reg);
    }
    let mut first = None;
    for d in duality_candidates(node) {
        let inv = LiteralInvolution::identity_with(d);
        let concl = symmetrize_sequent(&node.conclusion, &inv);
        let mirrored: Vec<Sequent> = prems.iter().rev().map(|s| symmetrize_sequent(s, &inv)).collect();
        let mirrored_refs: Vec<&Sequent> = mirrored.iter().collect();
        let params = mirror_params(node.rule, &node.params, &inv);
        match check_base(node.rule.mirror(), &params, &concl, &mirrored_refs, &cfg.mirrored(), reg) {
            Ok(()) => return Ok(()),
            Err(e) => {
                first.get_or_insert(e);
            }
        }
    }
    Err(first.expect("at least one duality candidate"))
}

/// Membership dualities that can undo the mirror image at this node.
fn duality_candidates(node: &ProofNode) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(d) = &node.params.duality {
        out.push(d.clone());
    }
    let mut add = |s: &Sequent| {
        for slot in s.slots() {
            for f in slot.formulas() {
                f.visit(&mut |g| {
                    if let Formula::DualMember { duality, .. } = g {
                        if !out.contains(duality) {
                            out.push(duality.clone());
                        }
                    }
                });
            }
        }
    };
    add(&node.conclusion);
    for p in &node.premises {
        add(&p.conclusion);
    }
    if !out.iter().any(|d| d == GENERIC_DUALITY) {
        out.push(GENERIC_DUALITY.to_string());
    }
    out
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

fn gate(cfg: &CalculusConfig, side: Side, ctx: &[Slot], rule: Rule) -> Result<(), Failure> {
    if ctx.is_empty() {
        return Ok(());
    }
    let (allowed, name) = match side {
        Side::Left => (cfg.left_contexts, "left"),
        Side::Right => (cfg.right_contexts, "right"),
    };
    if allowed {
        Ok(())
    } else {
        Err(Failure::SideConditionViolated(format!(
            "{rule} with extra {name} context requires {name}_contexts"
        )))
    }
}

fn single(f: &Formula) -> Slot {
    Slot::Single(f.clone())
}

fn without(side: &[Slot], f: &Formula) -> Option<Vec<Slot>> {
    remove_slot(side, &single(f))
}

fn plus(base: &[Slot], extra: impl IntoIterator<Item = Slot>) -> Vec<Slot> {
    let mut out = base.to_vec();
    out.extend(extra);
    out
}

fn seq_eq(a: &Sequent, left: &[Slot], right: &[Slot]) -> bool {
    side_equiv(&a.left, left) && side_equiv(&a.right, right)
}

fn mismatch(what: impl Into<String>) -> Failure {
    Failure::ConclusionMismatch(what.into())
}

/// Distinct single formulas on a side matching `pred`, restricted to the
/// `formula` parameter when given.
fn principals<'a>(side: &'a [Slot], params: &Params, pred: impl Fn(&Formula) -> bool) -> Vec<&'a Formula> {
    let want = params.formula.as_ref().map(Formula::canonical);
    let mut seen = BTreeSet::new();
    side.iter()
        .filter_map(Slot::formula)
        .filter(|f| pred(f))
        .filter(|f| want.as_ref().is_none_or(|w| f.canonical() == *w))
        .filter(|f| seen.insert(f.canonical()))
        .collect()
}

/// Try each candidate; succeed on the first success. Errors other than
/// a plain mismatch are preferred when reporting.
fn try_each<T>(cands: Vec<T>, what: &str, mut f: impl FnMut(T) -> Result<(), Failure>) -> Result<(), Failure> {
    let mut best: Option<Failure> = None;
    for c in cands {
        match f(c) {
            Ok(()) => return Ok(()),
            Err(e) => {
                let better = match (&best, &e) {
                    (None, _) => true,
                    (Some(Failure::ConclusionMismatch(_)), e) => !matches!(e, Failure::ConclusionMismatch(_)),
                    _ => false,
                };
                if better {
                    best = Some(e);
                }
            }
        }
    }
    Err(best.unwrap_or_else(|| mismatch(format!("no principal formula of the form {what}"))))
}

fn is_bin(op: BinOp) -> impl Fn(&Formula) -> bool {
    move |f| matches!(f, Formula::Binary { op: o, .. } if *o == op)
}

fn operands(f: &Formula) -> (&Formula, &Formula) {
    match f {
        Formula::Binary { lhs, rhs, .. } | Formula::Join { lhs, rhs, .. } => (lhs, rhs),
        _ => unreachable!("operands of a non-binary formula"),
    }
}

fn check_base(
    rule: Rule,
    params: &Params,
    c: &Sequent,
    p: &[&Sequent],
    cfg: &CalculusConfig,
    reg: &Registry,
) -> Result<(), Failure> {
    match rule {
        Rule::Id => match (c.left.as_slice(), c.right.as_slice()) {
            ([a], [b]) if a.canonical() == b.canonical() => Ok(()),
            _ => Err(mismatch("id needs the form A |- A")),
        },
        Rule::Cut => {
            if !cfg.cut {
                return Err(Failure::SideConditionViolated("cut is disabled".into()));
            }
            let cands: Vec<&Formula> = principals(&p[0].right, params, |f| without(&p[1].left, f).is_some());
            try_each(cands, "a formula on the right of the first premise and the left of the second", |f| {
                let r1 = without(&p[0].right, f).unwrap();
                let l2 = without(&p[1].left, f).unwrap();
                if seq_eq(c, &plus(&p[0].left, l2), &plus(&r1, p[1].right.iter().cloned())) {
                    Ok(())
                } else {
                    Err(mismatch(format!("cut on {f} does not give the conclusion")))
                }
            })
        }
        Rule::WeakenR => {
            if !cfg.weakening {
                return Err(Failure::SideConditionViolated("weakening is disabled".into()));
            }
            if !side_equiv(&c.left, &p[0].left) {
                return Err(mismatch("weakening changes the left side"));
            }
            added_slot(&p[0].right, &c.right, params)
        }
        Rule::ContractR => {
            if !side_equiv(&c.left, &p[0].left) {
                return Err(mismatch("contraction changes the left side"));
            }
            duplicated_slot(&c.right, &p[0].right)
        }
        Rule::ExpandR => {
            if !side_equiv(&c.left, &p[0].left) {
                return Err(mismatch("expansion changes the left side"));
            }
            duplicated_slot(&p[0].right, &c.right)
        }
        Rule::AndR => try_each(principals(&c.right, params, is_bin(BinOp::And)), "A & B on the right", |f| {
            let (a, b) = operands(f);
            let d1 = without(&c.right, f).unwrap();
            if seq_eq(p[0], &c.left, &plus(&d1, [single(a)])) && seq_eq(p[1], &c.left, &plus(&d1, [single(b)])) {
                gate(cfg, Side::Right, &d1, rule)
            } else {
                Err(mismatch("premises are not the two conjuncts"))
            }
        }),
        Rule::AndL => try_each(principals(&c.left, params, is_bin(BinOp::And)), "A & B on the left", |f| {
            let (a, b) = operands(f);
            let g1 = without(&c.left, f).unwrap();
            let which = match params.which {
                Some(1) => vec![a],
                Some(2) => vec![b],
                Some(n) => return Err(Failure::SideConditionViolated(format!("which={n} must be 1 or 2"))),
                None => vec![a, b],
            };
            if which
                .into_iter()
                .any(|x| seq_eq(p[0], &plus(&g1, [single(x)]), &c.right))
            {
                gate(cfg, Side::Left, &g1, rule)
            } else {
                Err(mismatch("premise does not keep a conjunct"))
            }
        }),
        Rule::ParR => try_each(principals(&c.right, params, is_bin(BinOp::Par)), "A * B on the right", |f| {
            let (a, b) = operands(f);
            let d1 = without(&c.right, f).unwrap();
            if seq_eq(p[0], &c.left, &plus(&d1, [single(a), single(b)])) {
                gate(cfg, Side::Right, &d1, rule)
            } else {
                Err(mismatch("premise does not split the par"))
            }
        }),
        Rule::ParL => try_each(principals(&c.left, params, is_bin(BinOp::Par)), "A * B on the left", |f| {
            let (a, b) = operands(f);
            let (Some(g1), Some(g2)) = (without(&p[0].left, a), without(&p[1].left, b)) else {
                return Err(mismatch("premises do not hold the par operands on the left"));
            };
            let left = plus(&plus(&[single(f)], g1.clone()), g2.clone());
            if seq_eq(c, &left, &plus(&p[0].right, p[1].right.iter().cloned())) {
                gate(cfg, Side::Left, &g1, rule)?;
                gate(cfg, Side::Left, &g2, rule)
            } else {
                Err(mismatch("par-left contexts do not combine to the conclusion"))
            }
        }),
        Rule::ImpR => try_each(principals(&c.right, params, is_bin(BinOp::Imp)), "A -> B on the right", |f| {
            let (a, b) = operands(f);
            let d1 = without(&c.right, f).unwrap();
            if seq_eq(p[0], &plus(&c.left, [single(a)]), &plus(&d1, [single(b)])) {
                gate(cfg, Side::Right, &d1, rule)
            } else {
                Err(mismatch("premise is not A |- B"))
            }
        }),
        Rule::ImpL => try_each(principals(&c.left, params, is_bin(BinOp::Imp)), "A -> B on the left", |f| {
            let (a, b) = operands(f);
            let (Some(d1), Some(g2)) = (without(&p[0].right, a), without(&p[1].left, b)) else {
                return Err(mismatch("premises are not |- A and B |-"));
            };
            let left = plus(&plus(&p[0].left, [single(f)]), g2.clone());
            if seq_eq(c, &left, &plus(&d1, p[1].right.iter().cloned())) {
                gate(cfg, Side::Right, &d1, rule)?;
                gate(cfg, Side::Left, &g2, rule)
            } else {
                Err(mismatch("implication-left contexts do not combine to the conclusion"))
            }
        }),
        Rule::ForallF => try_each(
            principals(&c.right, params, |f| matches!(f, Formula::Quant { q: Quantifier::Forall, .. })),
            "forall on the right",
            |f| {
                let Formula::Quant { var, domain, body, .. } = f else { unreachable!() };
                let d1 = without(&c.right, f).unwrap();
                let eigen: Vec<String> = match &params.var {
                    Some(z) => vec![z.clone()],
                    None => p[0]
                        .left
                        .iter()
                        .filter_map(|s| match s.formula() {
                            Some(Formula::Member { term: Term::Var(z), domain: d }) if d == domain => Some(z.clone()),
                            _ => None,
                        })
                        .collect(),
                };
                try_each(eigen, "an eigenvariable", |z| {
                    let zt = Term::Var(z.clone());
                    let left = plus(&c.left, [single(&Formula::member(zt.clone(), domain.clone()))]);
                    let right = plus(&d1, [single(&body.replace_var(var, &zt))]);
                    if !seq_eq(p[0], &left, &right) {
                        return Err(mismatch(format!("premise is not z in {domain} |- body at {z}")));
                    }
                    if c.free_vars().contains(&z) {
                        return Err(Failure::SideConditionViolated(format!(
                            "eigenvariable {z} occurs free in the conclusion"
                        )));
                    }
                    if reg.is_witness(&z) {
                        return Err(Failure::SideConditionViolated(format!(
                            "{z} is a domain witness and cannot be an eigenvariable"
                        )));
                    }
                    gate(cfg, Side::Right, &d1, rule)
                })
            },
        ),
        Rule::ForallR => try_each(
            principals(&c.left, params, |f| matches!(f, Formula::Quant { q: Quantifier::Forall, .. })),
            "forall on the left",
            |f| {
                let Formula::Quant { var, domain, body, .. } = f else { unreachable!() };
                let terms: Vec<Term> = match &params.term {
                    Some(t) => vec![t.clone()],
                    None => p[0]
                        .right
                        .iter()
                        .filter_map(|s| match s.formula() {
                            Some(Formula::Member { term, domain: d }) if d == domain => Some(term.clone()),
                            _ => None,
                        })
                        .collect(),
                };
                try_each(terms, "an instance term", |t| {
                    let Some(d1) = without(&p[0].right, &Formula::member(t.clone(), domain.clone())) else {
                        return Err(mismatch(format!("first premise lacks {t} in {domain}")));
                    };
                    let Some(g1) = without(&p[1].left, &body.replace_var(var, &t)) else {
                        return Err(mismatch(format!("second premise lacks the instance at {t}")));
                    };
                    let left = plus(&plus(&p[0].left, [single(f)]), g1.clone());
                    if seq_eq(c, &left, &plus(&d1, p[1].right.iter().cloned())) {
                        gate(cfg, Side::Right, &d1, rule)?;
                        gate(cfg, Side::Left, &g1, rule)
                    } else {
                        Err(mismatch("forall-left contexts do not combine to the conclusion"))
                    }
                })
            },
        ),
        Rule::EqIntro => try_each(
            principals(&c.left, params, |f| matches!(f, Formula::Eq(..))),
            "s = t on the left",
            |f| {
                let Formula::Eq(s, t) = f else { unreachable!() };
                let rest = without(&c.left, f).unwrap();
                if leibniz_match(&rest, &p[0].left, s, t) && leibniz_match(&c.right, &p[0].right, s, t) {
                    Ok(())
                } else {
                    Err(mismatch(format!("premise is not the conclusion up to replacing {s} and {t}")))
                }
            },
        ),
        Rule::Refl => match (c.left.as_slice(), c.right.as_slice()) {
            ([], [Slot::Single(Formula::Eq(s, t))]) if s == t => Ok(()),
            _ => Err(mismatch("refl needs the form |- t = t")),
        },
        Rule::Subst => {
            let z = params.var.as_ref().ok_or_else(|| Failure::MissingParameter("var".into()))?;
            let t = params.term.as_ref().ok_or_else(|| Failure::MissingParameter("term".into()))?;
            let d = params
                .domain
                .as_ref()
                .ok_or_else(|| Failure::MissingParameter("domain".into()))?;
            if !cfg.allows_substitution(d) {
                return Err(Failure::SubstitutionNotLicensed(d.clone()));
            }
            let rec = reg.get(d).map_err(|_| Failure::UnknownDomain(d.clone()))?;
            if !rec.entries.contains(t) {
                return Err(Failure::SideConditionViolated(format!("{t} is not an entry of {d}")));
            }
            if p[0].replace_var(z, t).equiv(c) {
                Ok(())
            } else {
                Err(mismatch(format!("conclusion is not the premise with {z} replaced by {t}")))
            }
        }
        Rule::MemberAx => match (c.left.as_slice(), c.right.as_slice()) {
            ([], [Slot::Single(Formula::Member { term, domain })]) => {
                let rec = reg.get(domain).map_err(|_| Failure::UnknownDomain(domain.clone()))?;
                let witness = rec.witness().as_ref() == Some(term);
                let entry = rec.entries.contains(term) && (rec.focused || cfg.allows_substitution(domain));
                if witness || entry {
                    Ok(())
                } else {
                    Err(Failure::SideConditionViolated(format!(
                        "{term} in {domain} is neither a witness nor a focused or substitutable entry"
                    )))
                }
            }
            _ => Err(mismatch("membership axiom needs the form |- t in D")),
        },
        Rule::DualEm => match (c.left.as_slice(), c.right.as_slice()) {
            ([], [Slot::Single(a), Slot::Single(b)]) if dual_pair(a, b) || dual_pair(b, a) => Ok(()),
            _ => Err(mismatch("dual excluded middle needs the form |- t in D, (t in D)^d")),
        },
        Rule::FocusAx => match (c.left.as_slice(), c.right.as_slice()) {
            ([Slot::Single(Formula::Member { term, domain })], [Slot::Single(disj)]) => {
                let rec = reg.get(domain).map_err(|_| Failure::UnknownDomain(domain.clone()))?;
                if !rec.focused {
                    return Err(Failure::SideConditionViolated(format!("{domain} is not focused")));
                }
                match rec.entry_disjunction(term) {
                    Some(expected) if expected == *disj => Ok(()),
                    _ => Err(mismatch(format!("right side is not the entry disjunction of {domain}"))),
                }
            }
            _ => Err(mismatch("focus axiom needs the form z in D |- z = t1 \\/ ... \\/ z = tn")),
        },
        Rule::DAxiom => d_axiom(c, params, cfg, false),
        Rule::TopAxiom => d_axiom(c, params, cfg, true),
        Rule::ConvR => try_each(corr_slots(&c.right), "a correlated pair on the right", |slot| {
            let Slot::Corr { first, tag, second } = slot else { unreachable!() };
            let (Some(i), Some(j)) = (first.index(), second.index()) else {
                return Err(Failure::SideConditionViolated("correlated formulas need one index each".into()));
            };
            if first.reindex(&i, &j) != *second {
                return Err(Failure::SideConditionViolated(
                    "second formula of the pair must be the first reindexed".into(),
                ));
            }
            let d1 = remove_slot(&c.right, slot).unwrap();
            let rel = Formula::IndexRel { left: i, tag: *tag, right: j };
            if seq_eq(p[0], &plus(&c.left, [single(&rel)]), &plus(&d1, [single(first)])) {
                gate(cfg, Side::Right, &d1, rule)
            } else {
                Err(mismatch("premise is not the relation form of the pair"))
            }
        }),
        Rule::ConvRInv => {
            let rels: Vec<&Formula> = principals(&c.left, &Params::default(), |f| matches!(f, Formula::IndexRel { .. }));
            try_each(rels, "an index relation on the left", |rel| {
                let Formula::IndexRel { left: i, tag, right: j } = rel else { unreachable!() };
                let g = without(&c.left, rel).unwrap();
                let heads: Vec<&Formula> = principals(&c.right, params, |f| f.index().as_ref() == Some(i));
                try_each(heads, "a formula indexed by the relation", |a| {
                    let d1 = without(&c.right, a).unwrap();
                    let pair = Slot::corr(a.clone(), *tag, a.reindex(i, j));
                    if seq_eq(p[0], &g, &plus(&d1, [pair])) {
                        gate(cfg, Side::Right, &d1, rule)
                    } else {
                        Err(mismatch("premise is not the comma form of the relation"))
                    }
                })
            })
        }
        Rule::JoinR => try_each(
            principals(&c.right, params, |f| matches!(f, Formula::Join { .. })),
            "a join on the right",
            |f| {
                let Formula::Join { tag, lhs, rhs } = f else { unreachable!() };
                let d1 = without(&c.right, f).unwrap();
                let pair = Slot::corr((**lhs).clone(), *tag, (**rhs).clone());
                if !seq_eq(p[0], &c.left, &plus(&d1, [pair])) {
                    return Err(mismatch("premise is not the correlated pair of the join"));
                }
                virtual_context(&c.left, reg)?;
                gate(cfg, Side::Right, &d1, rule)
            },
        ),
        Rule::JoinRInv => try_each(corr_slots(&c.right), "a correlated pair on the right", |slot| {
            let Slot::Corr { first, tag, second } = slot else { unreachable!() };
            let d1 = remove_slot(&c.right, slot).unwrap();
            let join = Formula::join(*tag, first.clone(), second.clone());
            if !seq_eq(p[0], &c.left, &plus(&d1, [single(&join)])) {
                return Err(mismatch("premise is not the join of the pair"));
            }
            virtual_context(&c.left, reg)?;
            gate(cfg, Side::Right, &d1, rule)
        }),
        Rule::ParallelForall | Rule::ParallelForallInv => {
            let placeholder = ProofNode::leaf(p[0].clone(), Rule::Id);
            let node = ProofNode::new(c.clone(), rule, params.clone(), vec![placeholder.clone()]);
            let expanded = expand_node(&node, reg)?;
            let mut result = Ok(());
            expanded.visit(&mut |n: &ProofNode| {
                if result.is_ok() && *n != placeholder {
                    result = check_node(n, cfg, reg);
                }
            });
            result
        }
        other => unreachable!("{other} is checked through its mirror"),
    }
}

fn corr_slots(side: &[Slot]) -> Vec<&Slot> {
    side.iter().filter(|s| matches!(s, Slot::Corr { .. })).collect()
}

fn dual_pair(a: &Formula, b: &Formula) -> bool {
    matches!(
        (a, b),
        (Formula::Member { term, domain }, Formula::DualMember { term: t2, domain: d2, .. })
            if term == t2 && domain == d2
    )
}

/// The left side must contain `z in V` for a registered virtual singleton.
fn virtual_context(left: &[Slot], reg: &Registry) -> Result<(), Failure> {
    let ok = left.iter().filter_map(Slot::formula).any(|f| match f {
        Formula::Member { domain, .. } => reg.is_virtual_singleton(domain),
        _ => false,
    });
    if ok {
        Ok(())
    } else {
        Err(Failure::SideConditionViolated(
            "NotVirtualSingleton: join needs z in V for a virtual singleton V on the left".into(),
        ))
    }
}

fn added_slot(before: &[Slot], after: &[Slot], params: &Params) -> Result<(), Failure> {
    let want = params.formula.as_ref().map(|f| single(f).canonical());
    for s in after {
        if want.as_ref().is_some_and(|w| s.canonical() != *w) {
            continue;
        }
        if side_equiv(&remove_slot(after, s).unwrap(), before) {
            return Ok(());
        }
    }
    Err(mismatch("conclusion is not the premise plus one formula"))
}

/// `long` is `short` with one of its slots repeated.
fn duplicated_slot(short: &[Slot], long: &[Slot]) -> Result<(), Failure> {
    if short.iter().any(|s| side_equiv(&plus(short, [s.clone()]), long)) {
        Ok(())
    } else {
        Err(mismatch("sides differ by more than one repeated formula"))
    }
}

/// Bijection between `concl` and `prem` where each pair is equal or equal
/// after replacing `s` by `t` (or `t` by `s`) throughout.
fn leibniz_match(concl: &[Slot], prem: &[Slot], s: &Term, t: &Term) -> bool {
    if concl.len() != prem.len() {
        return false;
    }
    let images: Vec<Vec<Slot>> = concl
        .iter()
        .map(|f| {
            let mut v = vec![
                f.canonical(),
                f.map(|g| g.replace_term(s, t)).canonical(),
                f.map(|g| g.replace_term(t, s)).canonical(),
            ];
            v.sort();
            v.dedup();
            v
        })
        .collect();
    let prem: Vec<Slot> = prem.iter().map(Slot::canonical).collect();
    fn go(k: usize, images: &[Vec<Slot>], prem: &[Slot], used: &mut Vec<bool>) -> bool {
        if k == images.len() {
            return true;
        }
        for (j, g) in prem.iter().enumerate() {
            if !used[j] && images[k].contains(g) {
                used[j] = true;
                if go(k + 1, images, prem, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    go(0, &images, &prem, &mut vec![false; prem.len()])
}

/// `z in V, A(y) |- A(z), (y in V)^d`, or with `y in V'` for the top
/// form, where `V'` is the top-dual domain of `V`.
fn d_axiom(c: &Sequent, params: &Params, cfg: &CalculusConfig, top: bool) -> Result<(), Failure> {
    let shape = || {
        mismatch(if top {
            "top axiom needs the form z in V, A(y) |- A(z), y in V'"
        } else {
            "d-axiom needs the form z in V, A(y) |- A(z), (y in V)^d"
        })
    };
    let (Some(l), Some(r)) = (singles2(&c.left), singles2(&c.right)) else {
        return Err(shape());
    };
    let mut best = None;
    for (zm, fy) in [(l[0], l[1]), (l[1], l[0])] {
        for (gz, ym) in [(r[0], r[1]), (r[1], r[0])] {
            let Formula::Member { term: Term::Var(z), domain: v } = zm else { continue };
            let (y, duality) = match (ym, top) {
                (Formula::DualMember { term: Term::Var(y), domain, duality }, false) if domain == v => {
                    (y, duality.clone())
                }
                (Formula::Member { term: Term::Var(y), domain }, true)
                    if domain != v && InvolutionKind::Top.map_domain(v) == domain =>
                {
                    (y, "top".to_string())
                }
                _ => continue,
            };
            if !instance_pair(fy, gz, y, z, params) {
                best.get_or_insert_with(|| mismatch("A(y) and A(z) are not instances of one body"));
                continue;
            }
            if !cfg.allows_d_axiom(v, &duality) {
                return Err(Failure::DAxiomNotLicensed(v.clone(), duality));
            }
            return Ok(());
        }
    }
    Err(best.unwrap_or_else(shape))
}

fn singles2(side: &[Slot]) -> Option<[&Formula; 2]> {
    match side {
        [Slot::Single(a), Slot::Single(b)] => Some([a, b]),
        _ => None,
    }
}

/// Whether `fy = A(y)` and `gz = A(z)` for one body `A`.
fn instance_pair(fy: &Formula, gz: &Formula, y: &str, z: &str, params: &Params) -> bool {
    if let (Some(body), Some(x)) = (&params.formula, &params.var) {
        return body.replace_var(x, &Term::var(y)).canonical() == fy.canonical()
            && body.replace_var(x, &Term::var(z)).canonical() == gz.canonical();
    }
    if y == z {
        return fy.canonical() == gz.canonical();
    }
    let mut avoid = fy.all_vars();
    avoid.extend(gz.all_vars());
    let x = crate::formula::fresh_name("x", &avoid);
    let from_z = gz.replace_var(z, &Term::var(&x));
    let from_y = fy.replace_var(y, &Term::var(&x));
    from_z.replace_var(&x, &Term::var(y)).canonical() == fy.canonical()
        || from_y.replace_var(&x, &Term::var(z)).canonical() == gz.canonical()
}
