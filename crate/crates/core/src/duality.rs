//! The symmetry map on formulas and sequents, and the literal dualities
//! `perp` and `top` of the qubit dictionary.
//!
//! Symmetrization swaps every connective with its dual and reverses the
//! operands, exchanges `forall`/`exists`, and trades membership atoms for
//! dual-membership atoms tagged with the involution's membership duality.
//! Atoms go through the involution's literal table.

use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, Sequent, Slot};
use crate::term::{Term, DOWN, UP};

pub const D_DOWN: &str = "Ddown";
pub const D_UP: &str = "Dup";
pub const D_PLUS: &str = "Dplus";
pub const D_MINUS: &str = "Dminus";

/// The four qubit domains.
pub const QUBIT_DOMAINS: [&str; 4] = [D_DOWN, D_UP, D_PLUS, D_MINUS];

/// Default membership duality of the identity involution.
pub const GENERIC_DUALITY: &str = "d";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InvolutionKind {
    Identity,
    Perp,
    Top,
}

impl InvolutionKind {
    pub fn name(self) -> &'static str {
        match self {
            InvolutionKind::Identity => "identity",
            InvolutionKind::Perp => "perp",
            InvolutionKind::Top => "top",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "identity" | "id" => Some(InvolutionKind::Identity),
            "perp" => Some(InvolutionKind::Perp),
            "top" => Some(InvolutionKind::Top),
            _ => None,
        }
    }

    /// Domain table: perp swaps the sharp domains, top the phase domains.
    pub fn map_domain(self, domain: &str) -> &str {
        match (self, domain) {
            (InvolutionKind::Perp, D_DOWN) => D_UP,
            (InvolutionKind::Perp, D_UP) => D_DOWN,
            (InvolutionKind::Top, D_PLUS) => D_MINUS,
            (InvolutionKind::Top, D_MINUS) => D_PLUS,
            (_, d) => d,
        }
    }

    /// Sharp-label table used on certain outcomes: only perp acts.
    pub fn map_label(self, label: &str) -> &str {
        match (self, label) {
            (InvolutionKind::Perp, DOWN) => UP,
            (InvolutionKind::Perp, UP) => DOWN,
            (_, l) => l,
        }
    }
}

impl fmt::Display for InvolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An involution on literals, together with the duality name used for the
/// dual-membership atoms that symmetrization introduces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LiteralInvolution {
    pub kind: InvolutionKind,
    pub membership_duality: String,
}

impl LiteralInvolution {
    pub fn identity() -> Self {
        Self::new(InvolutionKind::Identity, GENERIC_DUALITY)
    }

    pub fn new(kind: InvolutionKind, membership_duality: impl Into<String>) -> Self {
        LiteralInvolution {
            kind,
            membership_duality: membership_duality.into(),
        }
    }

    /// Identity on literals with a chosen membership duality.
    pub fn identity_with(membership_duality: impl Into<String>) -> Self {
        Self::new(InvolutionKind::Identity, membership_duality)
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    fn map_atom(&self, pred: &str, index: &Option<crate::term::Index>, args: &[Term]) -> Formula {
        let args = args
            .iter()
            .map(|t| match t {
                Term::Outcome { label, prob } if *prob == crate::term::Prob::from_integer(1) => {
                    Term::Outcome {
                        label: self.kind.map_label(label).to_string(),
                        prob: *prob,
                    }
                }
                other => other.clone(),
            })
            .collect();
        Formula::Atom {
            pred: pred.to_string(),
            index: index.clone(),
            args,
        }
    }
}

/// `(A o B)^s = B^s o^s A^s`, recursively.
pub fn symmetrize_formula(a: &Formula, inv: &LiteralInvolution) -> Formula {
    match a {
        Formula::Atom { pred, index, args } => inv.map_atom(pred, index, args),
        Formula::Member { term, domain } => {
            Formula::dual_member(term.clone(), domain.clone(), inv.membership_duality.clone())
        }
        Formula::DualMember {
            term,
            domain,
            duality,
        } => {
            if *duality == inv.membership_duality {
                Formula::member(term.clone(), domain.clone())
            } else {
                a.clone()
            }
        }
        Formula::Eq(s, t) => Formula::Neq(s.clone(), t.clone()),
        Formula::Neq(s, t) => Formula::Eq(s.clone(), t.clone()),
        Formula::IndexRel { .. } => a.clone(),
        Formula::Binary { op, lhs, rhs } => Formula::binary(
            op.dual(),
            symmetrize_formula(rhs, inv),
            symmetrize_formula(lhs, inv),
        ),
        Formula::Join { tag, lhs, rhs } => {
            Formula::join(*tag, symmetrize_formula(rhs, inv), symmetrize_formula(lhs, inv))
        }
        Formula::Quant {
            q,
            var,
            domain,
            body,
        } => Formula::quant(q.dual(), var.clone(), domain.clone(), symmetrize_formula(body, inv)),
    }
}

pub fn symmetrize_slot(slot: &Slot, inv: &LiteralInvolution) -> Slot {
    match slot {
        Slot::Single(f) => Slot::Single(symmetrize_formula(f, inv)),
        Slot::Corr { first, tag, second } => Slot::corr(
            symmetrize_formula(second, inv),
            *tag,
            symmetrize_formula(first, inv),
        ),
    }
}

/// `Gamma |- Delta` becomes `Delta^s |- Gamma^s`, each side reversed.
pub fn symmetrize_sequent(s: &Sequent, inv: &LiteralInvolution) -> Sequent {
    let flip = |side: &[Slot]| side.iter().rev().map(|x| symmetrize_slot(x, inv)).collect();
    Sequent {
        left: flip(&s.right),
        right: flip(&s.left),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualityError {
    #[error("`{0}` is not a qubit literal")]
    UnclassifiedLiteral(String),
    #[error("`{0}` is not a literal duality (expected perp or top)")]
    NotADuality(String),
}

/// Apply `perp` or `top` to a qubit literal.
///
/// Accepted shapes: sharp atoms `A((down,1))`/`A((up,1))`, quantified
/// literals `Q x in D . A(x)` over the four qubit domains, and Bell
/// formulas `forall x in D+- . A_i(x) join_f A_j(x)` (left unchanged).
pub fn apply_duality(a: &Formula, duality: InvolutionKind) -> Result<Formula, DualityError> {
    if duality == InvolutionKind::Identity {
        return Err(DualityError::NotADuality(duality.name().to_string()));
    }
    let unclassified = || DualityError::UnclassifiedLiteral(a.to_string());
    match a {
        Formula::Atom { pred, index, args } => match args.as_slice() {
            [Term::Outcome { label, prob }]
                if *prob == crate::term::Prob::from_integer(1) && (label == DOWN || label == UP) =>
            {
                Ok(Formula::Atom {
                    pred: pred.clone(),
                    index: index.clone(),
                    args: vec![Term::Outcome {
                        label: duality.map_label(label).to_string(),
                        prob: *prob,
                    }],
                })
            }
            _ => Err(unclassified()),
        },
        Formula::Quant {
            q,
            var,
            domain,
            body,
        } if QUBIT_DOMAINS.contains(&domain.as_str()) => {
            if is_bell_body(var, body) && (domain == D_PLUS || domain == D_MINUS) {
                return Ok(a.clone());
            }
            if !is_literal_body(var, body) {
                return Err(unclassified());
            }
            Ok(Formula::quant(
                *q,
                var.clone(),
                duality.map_domain(domain).to_string(),
                (**body).clone(),
            ))
        }
        _ => Err(unclassified()),
    }
}

fn is_literal_body(var: &str, body: &Formula) -> bool {
    matches!(body, Formula::Atom { args, .. } if args.len() == 1 && args[0].as_var() == Some(var))
}

fn is_bell_body(var: &str, body: &Formula) -> bool {
    match body {
        Formula::Join { lhs, rhs, .. } => {
            is_literal_body(var, lhs)
                && is_literal_body(var, rhs)
                && lhs.index().is_some()
                && rhs.index().is_some()
                && lhs.index() != rhs.index()
        }
        _ => false,
    }
}
