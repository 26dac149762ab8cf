use thiserror::Error;

use super::{CalculusConfig, Params, ProofNode, Rule};
use crate::duality::{symmetrize_formula, symmetrize_sequent, LiteralInvolution};
use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("configuration is not symmetric: left_contexts={left} but right_contexts={right}")]
    NotSymmetricConfig { left: bool, right: bool },
    #[error("proof uses duality `{found}` but the involution maps memberships to `{expected}`")]
    DualityMismatch { expected: String, found: String },
}

/// Parameters of a node after mirroring.
pub fn mirror_params(rule: Rule, params: &Params, inv: &LiteralInvolution) -> Params {
    let mut out = params.clone();
    out.formula = params.formula.as_ref().map(|f| symmetrize_formula(f, inv));
    if matches!(rule, Rule::AndL | Rule::OrR) {
        out.which = params.which.map(|w| 3 - w);
    }
    out
}

/// The membership duality a proof's dual memberships use, or the generic
/// tag when it has none.
pub fn proof_duality(proof: &ProofNode) -> String {
    let mut found = None;
    proof.visit(&mut |n| {
        for s in n.conclusion.slots() {
            for f in s.formulas() {
                f.visit(&mut |g| {
                    if let Formula::DualMember { duality, .. } = g {
                        found.get_or_insert_with(|| duality.clone());
                    }
                });
            }
        }
        if let Some(d) = &n.params.duality {
            found.get_or_insert_with(|| d.clone());
        }
    });
    found.unwrap_or_else(|| crate::duality::GENERIC_DUALITY.to_string())
}

/// Mirror a whole proof: every sequent is symmetrized, every rule replaced
/// by its mirror and binary premises swapped. The result checks under the
/// same (symmetric) configuration.
pub fn symmetrize_proof(
    proof: &ProofNode,
    inv: &LiteralInvolution,
    cfg: &CalculusConfig,
) -> Result<ProofNode, SymmetryError> {
    if !cfg.is_symmetric() {
        return Err(SymmetryError::NotSymmetricConfig {
            left: cfg.left_contexts,
            right: cfg.right_contexts,
        });
    }
    let mut found = None;
    proof.visit(&mut |n| {
        let mut scan = |f: &Formula| {
            f.visit(&mut |g| {
                if let Formula::DualMember { duality, .. } = g {
                    if *duality != inv.membership_duality && found.is_none() {
                        found = Some(duality.clone());
                    }
                }
            })
        };
        for s in n.conclusion.slots() {
            s.formulas().into_iter().for_each(&mut scan);
        }
        if let Some(f) = &n.params.formula {
            scan(f);
        }
        if let Some(d) = &n.params.duality {
            if *d != inv.membership_duality && found.is_none() {
                found = Some(d.clone());
            }
        }
    });
    if let Some(found) = found {
        return Err(SymmetryError::DualityMismatch {
            expected: inv.membership_duality.clone(),
            found,
        });
    }
    Ok(mirror_tree(proof, inv))
}

pub(crate) fn mirror_tree(node: &ProofNode, inv: &LiteralInvolution) -> ProofNode {
    ProofNode {
        conclusion: symmetrize_sequent(&node.conclusion, inv),
        rule: node.rule.mirror(),
        params: mirror_params(node.rule, &node.params, inv),
        premises: node.premises.iter().rev().map(|p| mirror_tree(p, inv)).collect(),
    }
}
