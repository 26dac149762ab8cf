use super::symmetrize::mirror_tree;
use super::{Failure, Params, ProofNode, Rule};
use crate::duality::{LiteralInvolution, GENERIC_DUALITY};
use crate::formula::{remove_slot, Formula, Quantifier, Sequent, Slot};
use crate::registry::Registry;
use crate::term::Term;

/// Replace every derived-rule node by its expansion into primitive rules.
pub fn expand_derived(proof: &ProofNode, reg: &Registry) -> Result<ProofNode, Failure> {
    let premises = proof
        .premises
        .iter()
        .map(|p| expand_derived(p, reg))
        .collect::<Result<Vec<_>, _>>()?;
    let node = ProofNode {
        premises,
        ..proof.clone()
    };
    if node.rule.is_derived() {
        expand_node(&node, reg)
    } else {
        Ok(node)
    }
}

/// One-step expansion of a derived node; its premises are kept as is.
///
/// `Γ |- (forall x in V . A_i(x)) ,_f (forall x in V . A_j(x))` from
/// `Γ, z in V |- A_i(z) ,_f A_j(z)` becomes, reading upwards,
/// `conv_r`, `forall_f` on `z`, `conv_r_inv`.
pub(crate) fn expand_node(node: &ProofNode, reg: &Registry) -> Result<ProofNode, Failure> {
    match node.rule {
        Rule::ParallelForall => expand_parallel(node, reg),
        Rule::ParallelForallInv => expand_parallel_inv(node, reg),
        Rule::ParallelExists | Rule::ParallelExistsInv => {
            let d = node
                .params
                .duality
                .clone()
                .or_else(|| premise_duality(node))
                .unwrap_or_else(|| GENERIC_DUALITY.to_string());
            let inv = LiteralInvolution::identity_with(d);
            let mirrored = mirror_tree(node, &inv);
            let expanded = if node.rule == Rule::ParallelExists {
                expand_parallel(&mirrored, reg)?
            } else {
                expand_parallel_inv(&mirrored, reg)?
            };
            Ok(mirror_tree(&expanded, &inv))
        }
        _ => Ok(node.clone()),
    }
}

fn premise_duality(node: &ProofNode) -> Option<String> {
    node.premises.first()?.conclusion.slots().find_map(|s| match s.formula() {
        Some(Formula::DualMember { duality, .. }) => Some(duality.clone()),
        _ => None,
    })
}

fn expand_parallel(node: &ProofNode, reg: &Registry) -> Result<ProofNode, Failure> {
    let [premise] = node.premises.as_slice() else {
        return Err(Failure::ArityMismatch {
            expected: 1,
            found: node.premises.len(),
        });
    };
    let c = &node.conclusion;
    let shape = || Failure::ConclusionMismatch("parallel rule needs a pair of quantified formulas on the right".into());
    let pair = c
        .right
        .iter()
        .find(|s| match s {
            Slot::Corr { first, second, .. } => {
                matches!((first, second), (Formula::Quant { q: Quantifier::Forall, .. }, Formula::Quant { q: Quantifier::Forall, .. }))
                    && node.params.formula.as_ref().is_none_or(|f| f.canonical() == first.canonical())
            }
            _ => false,
        })
        .ok_or_else(shape)?;
    let Slot::Corr { first, tag, second } = pair else { unreachable!() };
    let Formula::Quant { var, domain, body, .. } = first else { unreachable!() };
    let Formula::Quant { domain: domain2, .. } = second else { unreachable!() };
    if domain != domain2 {
        return Err(Failure::SideConditionViolated("both quantifiers must range over one domain".into()));
    }
    if !reg.is_virtual_singleton(domain) {
        return Err(Failure::SideConditionViolated(format!(
            "NotVirtualSingleton: {domain} is not a virtual singleton"
        )));
    }
    let (Some(i), Some(j)) = (first.index(), second.index()) else {
        return Err(Failure::SideConditionViolated("correlated formulas need one index each".into()));
    };
    let z = match &node.params.var {
        Some(z) => z.clone(),
        None => premise
            .conclusion
            .left
            .iter()
            .find_map(|s| match s.formula() {
                Some(Formula::Member { term: Term::Var(z), domain: d }) if d == domain => Some(z.clone()),
                _ => None,
            })
            .ok_or_else(|| Failure::ConclusionMismatch(format!("premise lacks z in {domain}")))?,
    };
    let zt = Term::var(&z);
    let delta = remove_slot(&c.right, pair).unwrap();
    let rel = Formula::IndexRel {
        left: i.clone(),
        tag: *tag,
        right: j.clone(),
    };
    let inner = body.replace_var(var, &zt);
    let mut left3 = c.left.clone();
    left3.push(Slot::Single(Formula::member(zt, domain.clone())));
    left3.push(Slot::Single(rel.clone()));
    let mut right3 = delta.clone();
    right3.push(Slot::Single(inner));
    let n3 = ProofNode::new(Sequent::new(left3, right3), Rule::ConvRInv, Params::default(), vec![premise.clone()]);
    let mut left2 = c.left.clone();
    left2.push(Slot::Single(rel));
    let mut right2 = delta;
    right2.push(Slot::Single(first.clone()));
    let n2 = ProofNode::new(
        Sequent::new(left2, right2),
        Rule::ForallF,
        Params::default().with_var(z),
        vec![n3],
    );
    Ok(ProofNode::new(c.clone(), Rule::ConvR, Params::default(), vec![n2]))
}

/// `Γ, z in V |- A_i(z) ,_f A_j(z)` from `Γ |- (forall A_i) ,_f (forall A_j)`
/// becomes, reading upwards, `conv_r`, a cut on `forall A_i` against
/// `forall A_i, z in V |- A_i(z)`, and `conv_r_inv`.
fn expand_parallel_inv(node: &ProofNode, reg: &Registry) -> Result<ProofNode, Failure> {
    let [premise] = node.premises.as_slice() else {
        return Err(Failure::ArityMismatch {
            expected: 1,
            found: node.premises.len(),
        });
    };
    let c = &node.conclusion;
    let pc = &premise.conclusion;
    let shape = || Failure::ConclusionMismatch("premise needs a pair of quantified formulas on the right".into());
    let pair = pc
        .right
        .iter()
        .find(|s| match s {
            Slot::Corr { first, second, .. } => {
                matches!((first, second), (Formula::Quant { q: Quantifier::Forall, .. }, Formula::Quant { q: Quantifier::Forall, .. }))
                    && node.params.formula.as_ref().is_none_or(|f| f.canonical() == first.canonical())
            }
            _ => false,
        })
        .ok_or_else(shape)?;
    let Slot::Corr { first, tag, second } = pair else { unreachable!() };
    let Formula::Quant { var, domain, body, .. } = first else { unreachable!() };
    let Formula::Quant { var: var2, domain: domain2, body: body2, .. } = second else { unreachable!() };
    if domain != domain2 {
        return Err(Failure::SideConditionViolated("both quantifiers must range over one domain".into()));
    }
    if !reg.is_virtual_singleton(domain) {
        return Err(Failure::SideConditionViolated(format!(
            "NotVirtualSingleton: {domain} is not a virtual singleton"
        )));
    }
    let (Some(i), Some(j)) = (first.index(), second.index()) else {
        return Err(Failure::SideConditionViolated("correlated formulas need one index each".into()));
    };
    let instance = |z: &str| {
        let zt = Term::var(z);
        Slot::Corr {
            first: body.replace_var(var, &zt),
            tag: *tag,
            second: body2.replace_var(var2, &zt),
        }
    };
    let candidates: Vec<String> = match &node.params.var {
        Some(z) => vec![z.clone()],
        None => c
            .left
            .iter()
            .filter_map(|s| match s.formula() {
                Some(Formula::Member { term: Term::Var(z), domain: d }) if d == domain => Some(z.clone()),
                _ => None,
            })
            .collect(),
    };
    let z = candidates
        .into_iter()
        .find(|z| {
            let want = instance(z).canonical();
            c.right.iter().any(|s| s.canonical() == want)
        })
        .ok_or_else(|| Failure::ConclusionMismatch(format!("conclusion lacks an instance pair over {domain}")))?;
    let zt = Term::var(&z);
    let delta = remove_slot(&pc.right, pair).unwrap();
    let rel = Formula::IndexRel {
        left: i.clone(),
        tag: *tag,
        right: j.clone(),
    };
    let member = Formula::member(zt.clone(), domain.clone());
    let inst = body.replace_var(var, &zt);
    let single = |f: &Formula| Slot::Single(f.clone());

    let mut left3 = pc.left.clone();
    left3.push(single(&rel));
    let mut right3 = delta.clone();
    right3.push(single(first));
    let n3 = ProofNode::new(Sequent::new(left3, right3), Rule::ConvRInv, Params::default(), vec![premise.clone()]);

    let id_member = ProofNode::leaf(Sequent::of(vec![member.clone()], vec![member.clone()]), Rule::Id);
    let id_inst = ProofNode::leaf(Sequent::of(vec![inst.clone()], vec![inst.clone()]), Rule::Id);
    let n4 = ProofNode::new(
        Sequent::of(vec![first.clone(), member.clone()], vec![inst.clone()]),
        Rule::ForallR,
        Params::default().with_term(zt),
        vec![id_member, id_inst],
    );

    let mut left2 = pc.left.clone();
    left2.push(single(&rel));
    left2.push(single(&member));
    let mut right2 = delta;
    right2.push(single(&inst));
    let n2 = ProofNode::new(
        Sequent::new(left2, right2),
        Rule::Cut,
        Params::default().with_formula(first.clone()),
        vec![n3, n4],
    );
    Ok(ProofNode::new(c.clone(), Rule::ConvR, Params::default(), vec![n2]))
}
