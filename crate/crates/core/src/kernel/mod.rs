//! Proof trees, calculus configuration and the proof checker.

mod check;
mod derived;
mod rules;
mod search;
mod symmetrize;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, Sequent};
use crate::registry::Registry;
use crate::term::Term;

pub use check::{check_proof, check_proof_with, CheckReport, CheckStats};
pub use derived::expand_derived;
pub use rules::Rule;
pub use search::{default_depth, search_proof, SearchError, SearchOutcome, DEFAULT_DEPTH, MAX_DEPTH};
pub use symmetrize::{mirror_params, proof_duality, symmetrize_proof, SymmetryError};

/// Structural and domain switches of the calculus.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CalculusConfig {
    pub left_contexts: bool,
    pub right_contexts: bool,
    pub weakening: bool,
    pub cut: bool,
    /// Domains whose entries may be substituted for free variables.
    pub substitution_domains: BTreeSet<String>,
    /// `(domain, duality)` pairs whose d-axiom is licensed.
    pub d_axiom_domains: BTreeSet<(String, String)>,
    pub collapse_demo: bool,
}

impl CalculusConfig {
    pub fn new(left_contexts: bool, right_contexts: bool, weakening: bool, cut: bool) -> Self {
        CalculusConfig {
            left_contexts,
            right_contexts,
            weakening,
            cut,
            ..CalculusConfig::default()
        }
    }

    pub fn all_flags() -> Self {
        Self::new(true, true, true, true)
    }

    /// Flags plus the licences implied by the registry: substitution for
    /// domains that allow it, d-axioms for virtual singletons.
    pub fn from_registry(reg: &Registry, left_contexts: bool, right_contexts: bool, weakening: bool, cut: bool) -> Self {
        let mut cfg = Self::new(left_contexts, right_contexts, weakening, cut);
        cfg.collapse_demo = reg.collapse_demo();
        for d in reg.domains() {
            if d.substitution_allowed {
                cfg.substitution_domains.insert(d.name.clone());
            }
            if d.virtual_singleton && !d.focused {
                if let Some(dual) = &d.duality {
                    cfg.d_axiom_domains.insert((d.name.clone(), dual.clone()));
                }
            }
        }
        cfg
    }

    pub fn is_symmetric(&self) -> bool {
        self.left_contexts == self.right_contexts
    }

    /// The configuration seen through the left/right mirror.
    pub fn mirrored(&self) -> Self {
        CalculusConfig {
            left_contexts: self.right_contexts,
            right_contexts: self.left_contexts,
            ..self.clone()
        }
    }

    pub fn allows_substitution(&self, domain: &str) -> bool {
        self.substitution_domains.contains(domain)
    }

    pub fn allows_d_axiom(&self, domain: &str, duality: &str) -> bool {
        self.d_axiom_domains
            .contains(&(domain.to_string(), duality.to_string()))
    }

    /// Domains licensed both for substitution and for a d-axiom.
    pub fn collapse_domains(&self) -> Vec<String> {
        self.d_axiom_domains
            .iter()
            .filter(|(d, _)| self.substitution_domains.contains(d))
            .map(|(d, _)| d.clone())
            .collect()
    }
}

/// Rule parameters. Most can be inferred; scripts give them to pick a
/// principal formula or an instance.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Params {
    /// Principal, cut or weakened formula; the body `A(x)` for d-axioms.
    pub formula: Option<Formula>,
    /// Eigenvariable, substituted variable or d-axiom placeholder.
    pub var: Option<String>,
    /// Instantiating or substituted term.
    pub term: Option<Term>,
    pub domain: Option<String>,
    /// Duality tag of the dual memberships a rule introduces.
    pub duality: Option<String>,
    /// Which conjunct or disjunct (1 or 2).
    pub which: Option<u8>,
}

impl Params {
    pub fn is_empty(&self) -> bool {
        *self == Params::default()
    }

    pub fn with_formula(mut self, f: Formula) -> Self {
        self.formula = Some(f);
        self
    }

    pub fn with_var(mut self, v: impl Into<String>) -> Self {
        self.var = Some(v.into());
        self
    }

    pub fn with_term(mut self, t: Term) -> Self {
        self.term = Some(t);
        self
    }

    pub fn with_domain(mut self, d: impl Into<String>) -> Self {
        self.domain = Some(d.into());
        self
    }

    pub fn with_duality(mut self, d: impl Into<String>) -> Self {
        self.duality = Some(d.into());
        self
    }

    pub fn with_which(mut self, w: u8) -> Self {
        self.which = Some(w);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProofNode {
    pub conclusion: Sequent,
    pub rule: Rule,
    pub params: Params,
    pub premises: Vec<ProofNode>,
}

impl ProofNode {
    pub fn new(conclusion: Sequent, rule: Rule, params: Params, premises: Vec<ProofNode>) -> Self {
        ProofNode {
            conclusion,
            rule,
            params,
            premises,
        }
    }

    pub fn leaf(conclusion: Sequent, rule: Rule) -> Self {
        Self::new(conclusion, rule, Params::default(), vec![])
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofNode::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(ProofNode::height).max().unwrap_or(0)
    }

    pub fn visit(&self, f: &mut impl FnMut(&ProofNode)) {
        f(self);
        for p in &self.premises {
            p.visit(f);
        }
    }

    /// Path from the root, as premise positions.
    pub fn at(&self, path: &[usize]) -> Option<&ProofNode> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.premises.get(*i)?.at(rest),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", content = "detail")]
pub enum Failure {
    #[error("side condition violated: {0}")]
    SideConditionViolated(String),
    #[error("substitution not licensed for domain `{0}`")]
    SubstitutionNotLicensed(String),
    #[error("d-axiom not licensed for domain `{0}` under duality `{1}`")]
    DAxiomNotLicensed(String, String),
    #[error("rule expects {expected} premises, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("conclusion does not match: {0}")]
    ConclusionMismatch(String),
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
}

impl Failure {
    pub fn kind(&self) -> &'static str {
        match self {
            Failure::SideConditionViolated(_) => "SideConditionViolated",
            Failure::SubstitutionNotLicensed(_) => "SubstitutionNotLicensed",
            Failure::DAxiomNotLicensed(..) => "DAxiomNotLicensed",
            Failure::ArityMismatch { .. } => "ArityMismatch",
            Failure::ConclusionMismatch(_) => "ConclusionMismatch",
            Failure::MissingParameter(_) => "MissingParameter",
            Failure::UnknownDomain(_) => "UnknownDomain",
        }
    }
}

/// A failed check, located by its premise path from the root.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{rule} at {}: {failure}", path_string(path))]
pub struct CheckError {
    pub path: Vec<usize>,
    pub rule: String,
    pub failure: Failure,
}

pub fn path_string(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}
