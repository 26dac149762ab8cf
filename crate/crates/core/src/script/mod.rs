//! The `.blq` proof-script language.
//!
//! A script is a sequence of lines:
//!
//! ```text
//! # comment
//! domain D = {T1, T2} focused substitution
//! config left_contexts right_contexts weakening cut
//! license subst D
//! license daxiom V d
//! collapse_demo
//! formula F : forall x in D . A(x)
//! sequent S : A(T1) & A(T2) |- forall x in D . A(x)
//! proof P : A(T1) |- A(T1)
//!   by id
//! ```
//!
//! A proof's rule line sits two spaces below its conclusion; each premise
//! is a `- SEQUENT` line at the same indentation as the rule line, followed
//! by its own rule line two spaces deeper. Rule parameters are `key=value`
//! with formulas and terms in brackets: `by forall_r term=[T1]`.
//!
//! The four qubit domains `Ddown`, `Dup`, `Dplus`, `Dminus` are predeclared.

mod lexer;
mod parser;
pub mod printer;

use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, Sequent};
use crate::kernel::{CalculusConfig, ProofNode};
use crate::registry::{d_axiom_schema, DomainRecord, Registry, RegistryError};

pub use parser::{parse, parse_formula, parse_sequent, parse_term};
pub use printer::{formula_string, proof_string, sequent_string, Style};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

/// The context switches of a `config` line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfigFlags {
    pub left_contexts: bool,
    pub right_contexts: bool,
    pub weakening: bool,
    pub cut: bool,
}

impl ConfigFlags {
    pub const NAMES: [&'static str; 4] = ["left_contexts", "right_contexts", "weakening", "cut"];

    pub fn get(&self, name: &str) -> Option<bool> {
        match name {
            "left_contexts" => Some(self.left_contexts),
            "right_contexts" => Some(self.right_contexts),
            "weakening" => Some(self.weakening),
            "cut" => Some(self.cut),
            _ => None,
        }
    }

    pub fn set(&mut self, name: &str) -> bool {
        match name {
            "left_contexts" => self.left_contexts = true,
            "right_contexts" => self.right_contexts = true,
            "weakening" => self.weakening = true,
            "cut" => self.cut = true,
            _ => return false,
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decl {
    Domain(DomainRecord),
    Config(ConfigFlags),
    LicenseSubst(String),
    LicenseDAxiom { domain: String, duality: String },
    CollapseDemo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ItemKind {
    Formula(Formula),
    Sequent(Sequent),
    Proof(ProofNode),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub name: String,
    pub kind: ItemKind,
}

impl Item {
    pub fn sequent(&self) -> Option<&Sequent> {
        match &self.kind {
            ItemKind::Sequent(s) => Some(s),
            ItemKind::Proof(p) => Some(&p.conclusion),
            ItemKind::Formula(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    pub declarations: Vec<Decl>,
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error("licence for `{0}` names an undeclared domain")]
    UnknownDomain(String),
    #[error("domain `{0}` is licensed for both substitution and a d-axiom; this needs collapse_demo")]
    CollapseNotEnabled(String),
}

/// The four qubit measurement domains.
pub fn qubit_registry(collapse_demo: bool) -> Registry {
    use crate::duality::{D_DOWN, D_MINUS, D_PLUS, D_UP};
    use crate::term::{Term, DOWN, UP};
    let mut reg = Registry::with_collapse_demo(collapse_demo);
    let half = vec![Term::outcome_of(DOWN, 1, 2), Term::outcome_of(UP, 1, 2)];
    let records = [
        DomainRecord::focused(D_DOWN, vec![Term::outcome_of(DOWN, 1, 1)]).with_duality("perp"),
        DomainRecord::focused(D_UP, vec![Term::outcome_of(UP, 1, 1)]).with_duality("perp"),
        DomainRecord::virtual_singleton(D_PLUS, half.clone(), "top"),
        DomainRecord::virtual_singleton(D_MINUS, half, "top"),
    ];
    for r in records {
        reg.register(r).expect("qubit domains are valid");
    }
    reg
}

impl Script {
    pub fn item(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn proofs(&self) -> impl Iterator<Item = (&str, &ProofNode)> {
        self.items.iter().filter_map(|i| match &i.kind {
            ItemKind::Proof(p) => Some((i.name.as_str(), p)),
            _ => None,
        })
    }

    pub fn collapse_demo(&self) -> bool {
        self.declarations.iter().any(|d| matches!(d, Decl::CollapseDemo))
    }

    /// The qubit domains plus every declared domain.
    pub fn registry(&self) -> Result<Registry, ScriptError> {
        let mut reg = qubit_registry(self.collapse_demo());
        for d in &self.declarations {
            if let Decl::Domain(r) = d {
                reg.register(r.clone())?;
            }
        }
        Ok(reg)
    }

    /// Flags from the last `config` line, if any.
    pub fn flags(&self) -> Option<ConfigFlags> {
        self.declarations.iter().rev().find_map(|d| match d {
            Decl::Config(f) => Some(*f),
            _ => None,
        })
    }

    /// The calculus configuration for `flags` with the registry's implied
    /// licences plus the script's explicit ones. A d-axiom licence must be
    /// admitted by the domain's classification.
    pub fn config_with(&self, reg: &Registry, flags: ConfigFlags) -> Result<CalculusConfig, ScriptError> {
        let mut cfg =
            CalculusConfig::from_registry(reg, flags.left_contexts, flags.right_contexts, flags.weakening, flags.cut);
        for d in &self.declarations {
            match d {
                Decl::LicenseSubst(dom) => {
                    reg.get(dom).map_err(|_| ScriptError::UnknownDomain(dom.clone()))?;
                    cfg.substitution_domains.insert(dom.clone());
                }
                Decl::LicenseDAxiom { domain, duality } => {
                    let rec = reg.get(domain).map_err(|_| ScriptError::UnknownDomain(domain.clone()))?;
                    d_axiom_schema(rec, duality)?;
                    cfg.d_axiom_domains.insert((domain.clone(), duality.clone()));
                }
                _ => {}
            }
        }
        if !reg.collapse_demo() {
            if let Some(dom) = cfg.collapse_domains().into_iter().next() {
                return Err(ScriptError::CollapseNotEnabled(dom));
            }
        }
        Ok(cfg)
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&printer::script_string(self))
    }
}
