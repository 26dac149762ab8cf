//! Correlated commas, second-order conversion, the join equation and the
//! proofs built on them.
//!
//! A pair `A_i ,_f A_j` on the right converts to `A_i` with `i ~f j` on the
//! left. Under `z in V` for a virtual singleton `V` the pair is also
//! interchangeable with `A_i join_f A_j`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::{BinOp, Formula, Sequent, Slot};
use crate::kernel::{Params, ProofNode, Rule};
use crate::registry::{witness_name, Registry};
use crate::term::{CorrelationTag, Index, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrelationError {
    #[error("slot mismatch: {0}")]
    SlotMismatch(String),
    #[error("`{0}` is not a virtual singleton")]
    NotVirtualSingleton(String),
    #[error("no membership z in V on the left")]
    MissingMembership,
    #[error("formulas are not one body under two indexes: {0}")]
    NotReindexed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConversionDirection {
    ToRelation,
    ToComma,
}

/// One second-order conversion on the right slot at `slot`. For
/// `ToComma`, `introduced` names the relation to consume; for
/// `ToRelation` it is optional and, when given, must be the relation
/// produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConversionStep {
    pub direction: ConversionDirection,
    pub slot: usize,
    pub introduced: Option<Formula>,
}

impl ConversionStep {
    pub fn to_relation(slot: usize) -> Self {
        ConversionStep {
            direction: ConversionDirection::ToRelation,
            slot,
            introduced: None,
        }
    }

    pub fn to_comma(slot: usize, rel: Formula) -> Self {
        ConversionStep {
            direction: ConversionDirection::ToComma,
            slot,
            introduced: Some(rel),
        }
    }
}

fn right_slot(s: &Sequent, slot: usize) -> Result<&Slot, CorrelationError> {
    s.right
        .get(slot)
        .ok_or_else(|| CorrelationError::SlotMismatch(format!("no right slot {slot}")))
}

/// The indexes of a correlated pair, checking the second is the first
/// reindexed.
pub fn pair_indexes(first: &Formula, second: &Formula) -> Result<(Index, Index), CorrelationError> {
    let (Some(i), Some(j)) = (first.index(), second.index()) else {
        return Err(CorrelationError::NotReindexed("each formula needs exactly one index".into()));
    };
    if i == j || first.reindex(&i, &j) != *second {
        return Err(CorrelationError::NotReindexed(format!("{first} and {second}")));
    }
    Ok((i, j))
}

/// `Γ |- Δ, A_i ,_f A_j` and `Γ, i ~f j |- Δ, A_i`, either way round.
pub fn convert(s: &Sequent, step: &ConversionStep) -> Result<Sequent, CorrelationError> {
    let mut out = s.clone();
    match step.direction {
        ConversionDirection::ToRelation => {
            let Slot::Corr { first, tag, second } = right_slot(s, step.slot)? else {
                return Err(CorrelationError::SlotMismatch(format!("right slot {} is not a pair", step.slot)));
            };
            let (i, j) = pair_indexes(first, second)?;
            let rel = Formula::IndexRel {
                left: i,
                tag: *tag,
                right: j,
            };
            if step.introduced.as_ref().is_some_and(|r| *r != rel) {
                return Err(CorrelationError::SlotMismatch(format!("step expects {rel}")));
            }
            out.right[step.slot] = Slot::Single(first.clone());
            out.left.push(Slot::Single(rel));
        }
        ConversionDirection::ToComma => {
            let Some(rel @ Formula::IndexRel { left: i, tag, right: j }) = &step.introduced else {
                return Err(CorrelationError::SlotMismatch("toComma needs an index relation".into()));
            };
            let Slot::Single(a) = right_slot(s, step.slot)? else {
                return Err(CorrelationError::SlotMismatch(format!("right slot {} is a pair", step.slot)));
            };
            if a.index().as_ref() != Some(i) {
                return Err(CorrelationError::SlotMismatch(format!("{a} is not indexed by {i}")));
            }
            let pos = s
                .left
                .iter()
                .rposition(|l| l.formula() == Some(rel))
                .ok_or_else(|| CorrelationError::SlotMismatch(format!("{rel} is not on the left")))?;
            out.left.remove(pos);
            out.right[step.slot] = Slot::corr(a.clone(), *tag, a.reindex(i, j));
        }
    }
    Ok(out)
}

/// Idempotency of the comma: drop the right slot at `slot` when it
/// repeats another right slot.
pub fn contract(s: &Sequent, slot: usize) -> Result<Sequent, CorrelationError> {
    let target = right_slot(s, slot)?.canonical();
    let repeated = s
        .right
        .iter()
        .enumerate()
        .any(|(k, other)| k != slot && other.canonical() == target);
    if !repeated {
        return Err(CorrelationError::SlotMismatch(format!("right slot {slot} is not repeated")));
    }
    let mut out = s.clone();
    out.right.remove(slot);
    Ok(out)
}

/// Idempotency of the comma: repeat the right slot at `slot`.
pub fn duplicate(s: &Sequent, slot: usize) -> Result<Sequent, CorrelationError> {
    let copy = right_slot(s, slot)?.clone();
    let mut out = s.clone();
    out.right.insert(slot + 1, copy);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinDirection {
    ToJoin,
    ToComma,
}

/// The virtual singleton named by a `z in V` on the left.
fn virtual_member(s: &Sequent, reg: &Registry) -> Result<String, CorrelationError> {
    let mut other = None;
    for f in s.left.iter().filter_map(Slot::formula) {
        if let Formula::Member { domain, .. } = f {
            if reg.is_virtual_singleton(domain) {
                return Ok(domain.clone());
            }
            other.get_or_insert_with(|| domain.clone());
        }
    }
    Err(other.map_or(CorrelationError::MissingMembership, CorrelationError::NotVirtualSingleton))
}

/// `Γ, z in V |- A_i ,_f A_j` and `Γ, z in V |- A_i join_f A_j`.
pub fn join_step(
    s: &Sequent,
    direction: JoinDirection,
    slot: usize,
    reg: &Registry,
) -> Result<Sequent, CorrelationError> {
    virtual_member(s, reg)?;
    let mut out = s.clone();
    out.right[slot] = match (direction, right_slot(s, slot)?) {
        (JoinDirection::ToJoin, Slot::Corr { first, tag, second }) => {
            pair_indexes(first, second)?;
            Slot::Single(Formula::join(*tag, first.clone(), second.clone()))
        }
        (JoinDirection::ToComma, Slot::Single(Formula::Join { tag, lhs, rhs })) => {
            Slot::corr((**lhs).clone(), *tag, (**rhs).clone())
        }
        _ => return Err(CorrelationError::SlotMismatch(format!("right slot {slot} has the wrong shape"))),
    };
    Ok(out)
}

/// Atom indexes of a sequent as a multiset. A relation `i ~f j` stands for
/// the index `j` it absorbed, so conversion and join steps conserve it.
pub fn index_profile(s: &Sequent) -> BTreeMap<Index, usize> {
    let mut out = BTreeMap::new();
    for slot in s.slots() {
        for i in slot.index_multiset() {
            *out.entry(i).or_default() += 1;
        }
        if let Some(Formula::IndexRel { right, .. }) = slot.formula() {
            *out.entry(right.clone()).or_default() += 1;
        }
    }
    out
}

fn leaf(left: Vec<Formula>, right: Vec<Formula>, rule: Rule) -> ProofNode {
    ProofNode::leaf(Sequent::of(left, right), rule)
}

fn identity(f: &Formula) -> ProofNode {
    leaf(vec![f.clone()], vec![f.clone()], Rule::Id)
}

fn node(left: Vec<Slot>, right: Vec<Slot>, rule: Rule, params: Params, premises: Vec<ProofNode>) -> ProofNode {
    ProofNode::new(Sequent::new(left, right), rule, params, premises)
}

fn s(f: &Formula) -> Slot {
    Slot::Single(f.clone())
}

/// Both directions of the distribution of a universal over a join.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    /// `forall x in V . (A_i join_f A_j) |- (forall A_i) join_f (forall A_j)`
    pub forward: ProofNode,
    /// `(forall A_i) join_f (forall A_j) |- forall x in V . (A_i join_f A_j)`
    pub backward: ProofNode,
}

/// Proofs of both directions for bodies `a_i`, `a_j` in the variable `x`.
/// They use cut and weakening; the parallel steps stay as derived nodes.
pub fn distribute_forall(
    reg: &Registry,
    v: &str,
    a_i: &Formula,
    a_j: &Formula,
    x: &str,
    tag: CorrelationTag,
) -> Result<Distribution, CorrelationError> {
    if !reg.is_virtual_singleton(v) {
        return Err(CorrelationError::NotVirtualSingleton(v.to_string()));
    }
    pair_indexes(a_i, a_j)?;
    let w = Term::var(witness_name(v));
    let mut avoid = a_i.all_vars();
    avoid.extend(a_j.all_vars());
    avoid.insert(witness_name(v));
    let z_name = crate::formula::fresh_name("z", &avoid);
    let z = Term::var(&z_name);

    let joined = Formula::forall(x, v, Formula::join(tag, a_i.clone(), a_j.clone()));
    let all_i = Formula::forall(x, v, a_i.clone());
    let all_j = Formula::forall(x, v, a_j.clone());
    let split = Formula::join(tag, all_i.clone(), all_j.clone());
    let w_in = Formula::member(w, v);
    let z_in = Formula::member(z.clone(), v);
    let ai_z = a_i.replace_var(x, &z);
    let aj_z = a_j.replace_var(x, &z);
    let j_z = Formula::join(tag, ai_z.clone(), aj_z.clone());
    let pair_z = Slot::corr(ai_z, tag, aj_z);
    let pair_all = Slot::corr(all_i, tag, all_j);
    let witness = leaf(vec![], vec![w_in.clone()], Rule::MemberAx);
    let cut_witness = Params::default().with_formula(w_in.clone());

    let inst = node(
        vec![s(&w_in), s(&joined), s(&z_in)],
        vec![s(&j_z)],
        Rule::ForallR,
        Params::default().with_term(z.clone()),
        vec![
            node(vec![s(&w_in), s(&z_in)], vec![s(&z_in)], Rule::WeakenL, Params::default(), vec![identity(&z_in)]),
            identity(&j_z),
        ],
    );
    let unjoin = node(
        vec![s(&w_in), s(&joined), s(&z_in)],
        vec![pair_z.clone()],
        Rule::JoinRInv,
        Params::default(),
        vec![inst],
    );
    let parallel = node(
        vec![s(&w_in), s(&joined)],
        vec![pair_all.clone()],
        Rule::ParallelForall,
        Params::default().with_var(z_name.clone()),
        vec![unjoin],
    );
    let rejoin = node(vec![s(&w_in), s(&joined)], vec![s(&split)], Rule::JoinR, Params::default(), vec![parallel]);
    let forward = node(
        vec![s(&joined)],
        vec![s(&split)],
        Rule::Cut,
        cut_witness.clone(),
        vec![witness.clone(), rejoin],
    );

    let weak = node(
        vec![s(&w_in), s(&split)],
        vec![s(&split)],
        Rule::WeakenL,
        Params::default(),
        vec![identity(&split)],
    );
    let unjoin = node(vec![s(&w_in), s(&split)], vec![pair_all], Rule::JoinRInv, Params::default(), vec![weak]);
    let parallel = node(
        vec![s(&w_in), s(&split), s(&z_in)],
        vec![pair_z],
        Rule::ParallelForallInv,
        Params::default().with_var(z_name.clone()),
        vec![unjoin],
    );
    let rejoin = node(
        vec![s(&w_in), s(&split), s(&z_in)],
        vec![s(&j_z)],
        Rule::JoinR,
        Params::default(),
        vec![parallel],
    );
    let general = node(
        vec![s(&w_in), s(&split)],
        vec![s(&joined)],
        Rule::ForallF,
        Params::default().with_var(z_name),
        vec![rejoin],
    );
    let backward = node(vec![s(&split)], vec![s(&joined)], Rule::Cut, cut_witness, vec![witness, general]);
    Ok(Distribution { forward, backward })
}

/// `forall x in V . (A(x) * B(x)) |- (forall x in V . A(x)) * (forall x in V . B(x))`
/// from the d-axiom for `(V, duality)`. Needs both context flags and cut.
pub fn par_distribution(
    reg: &Registry,
    v: &str,
    a: &Formula,
    b: &Formula,
    x: &str,
    duality: &str,
) -> Result<ProofNode, CorrelationError> {
    reg.get(v).map_err(|_| CorrelationError::NotVirtualSingleton(v.to_string()))?;
    let mut avoid = a.all_vars();
    avoid.extend(b.all_vars());
    let z_name = crate::formula::fresh_name("z", &avoid);
    avoid.insert(z_name.clone());
    let y_name = crate::formula::fresh_name("y", &avoid);
    let (z, y) = (Term::var(&z_name), Term::var(&y_name));

    let all_ab = Formula::forall(x, v, Formula::binary(BinOp::Par, a.clone(), b.clone()));
    let all_a = Formula::forall(x, v, a.clone());
    let all_b = Formula::forall(x, v, b.clone());
    let z_in = Formula::member(z.clone(), v);
    let y_in = Formula::member(y.clone(), v);
    let z_dual = Formula::dual_member(z.clone(), v, duality);
    let (a_z, b_z, b_y) = (a.replace_var(x, &z), b.replace_var(x, &z), b.replace_var(x, &y));
    let ab_z = Formula::binary(BinOp::Par, a_z.clone(), b_z.clone());

    let d_ax = ProofNode::new(
        Sequent::of(vec![y_in.clone(), b_z.clone()], vec![b_y.clone(), z_dual.clone()]),
        Rule::DAxiom,
        Params::default().with_formula(b.clone()).with_var(x),
        vec![],
    );
    let excl = leaf(vec![z_dual.clone(), z_in.clone()], vec![], Rule::DualNc);
    let b_inst = ProofNode::new(
        Sequent::of(vec![y_in, b_z.clone(), z_in.clone()], vec![b_y]),
        Rule::Cut,
        Params::default().with_formula(z_dual),
        vec![d_ax, excl],
    );
    let b_all = ProofNode::new(
        Sequent::of(vec![b_z.clone(), z_in.clone()], vec![all_b.clone()]),
        Rule::ForallF,
        Params::default().with_var(y_name),
        vec![b_inst],
    );
    let split = ProofNode::new(
        Sequent::of(vec![ab_z, z_in.clone()], vec![a_z.clone(), all_b.clone()]),
        Rule::ParL,
        Params::default(),
        vec![identity(&a_z), b_all],
    );
    let inst = ProofNode::new(
        Sequent::of(vec![all_ab.clone(), z_in.clone(), z_in.clone()], vec![a_z, all_b.clone()]),
        Rule::ForallR,
        Params::default().with_term(z.clone()),
        vec![identity(&z_in), split],
    );
    let shared = ProofNode::new(
        Sequent::of(vec![all_ab.clone(), z_in.clone()], inst.conclusion.right.iter().filter_map(|s| s.formula().cloned()).collect()),
        Rule::ContractL,
        Params::default(),
        vec![inst],
    );
    let general = ProofNode::new(
        Sequent::of(vec![all_ab.clone()], vec![all_a.clone(), all_b.clone()]),
        Rule::ForallF,
        Params::default().with_var(z_name),
        vec![shared],
    );
    Ok(ProofNode::new(
        Sequent::of(vec![all_ab], vec![Formula::binary(BinOp::Par, all_a, all_b)]),
        Rule::ParR,
        Params::default(),
        vec![general],
    ))
}

/// `(exists x in V . A(x)) |- (forall x in V . A(x))` from the d-axiom for
/// `(V, duality)`: one universal and one existential step over the axiom.
pub fn exists_to_forall(v: &str, body: &Formula, x: &str, duality: &str) -> ProofNode {
    let mut avoid = body.all_vars();
    let z_name = crate::formula::fresh_name("z", &avoid);
    avoid.insert(z_name.clone());
    let y_name = crate::formula::fresh_name("y", &avoid);
    let (z, y) = (Term::var(&z_name), Term::var(&y_name));
    let ex = Formula::exists(x, v, body.clone());
    let all = Formula::forall(x, v, body.clone());
    let z_in = Formula::member(z.clone(), v);
    let ax = ProofNode::new(
        Sequent::of(
            vec![z_in.clone(), body.replace_var(x, &y)],
            vec![body.replace_var(x, &z), Formula::dual_member(y, v, duality)],
        ),
        Rule::DAxiom,
        Params::default().with_formula(body.clone()).with_var(x),
        vec![],
    );
    let witness = ProofNode::new(
        Sequent::of(vec![z_in, ex.clone()], vec![body.replace_var(x, &z)]),
        Rule::ExistsF,
        Params::default().with_var(y_name).with_duality(duality),
        vec![ax],
    );
    ProofNode::new(
        Sequent::of(vec![ex], vec![all]),
        Rule::ForallF,
        Params::default().with_var(z_name),
        vec![witness],
    )
}
