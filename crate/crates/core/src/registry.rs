//! Named random first-order domains and the rules their classification
//! licenses.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::duality::{InvolutionKind, GENERIC_DUALITY};
use crate::formula::{BinOp, Formula, Sequent};
use crate::kernel::{CalculusConfig, Params, ProofNode, Rule};
use crate::term::{Prob, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("domain `{domain}` violates its invariant: {clause}")]
    InvariantViolation { domain: String, clause: String },
    #[error("domain `{0}` is not registered")]
    Unknown(String),
    #[error("domain `{0}` is already registered")]
    Duplicate(String),
    #[error("domain `{0}` has no entries")]
    EmptyDomain(String),
    #[error("domain `{0}` is focused but not a singleton, so it has no d-axioms")]
    FocusedNonSingleton(String),
    #[error("domain `{0}` is neither a virtual nor an extensional singleton")]
    NotVirtualSingleton(String),
}

/// A named domain with its classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainRecord {
    pub name: String,
    /// Closed terms; outcomes for random domains, constants for abstract ones.
    pub entries: Vec<Term>,
    pub focused: bool,
    pub virtual_singleton: bool,
    pub duality: Option<String>,
    pub substitution_allowed: bool,
    pub inhabited: bool,
}

impl DomainRecord {
    pub fn new(name: impl Into<String>, entries: Vec<Term>) -> Self {
        DomainRecord {
            name: name.into(),
            entries,
            focused: false,
            virtual_singleton: false,
            duality: None,
            substitution_allowed: false,
            inhabited: false,
        }
    }

    /// A focused domain; substitution by its entries is allowed.
    pub fn focused(name: impl Into<String>, entries: Vec<Term>) -> Self {
        DomainRecord {
            focused: true,
            substitution_allowed: true,
            ..DomainRecord::new(name, entries)
        }
    }

    /// An unfocused, inhabited virtual singleton with the given duality.
    pub fn virtual_singleton(name: impl Into<String>, entries: Vec<Term>, duality: impl Into<String>) -> Self {
        DomainRecord {
            virtual_singleton: true,
            inhabited: true,
            duality: Some(duality.into()),
            ..DomainRecord::new(name, entries)
        }
    }

    pub fn with_duality(mut self, duality: impl Into<String>) -> Self {
        self.duality = Some(duality.into());
        self
    }

    pub fn is_extensional_singleton(&self) -> bool {
        self.focused && self.entries.len() == 1
    }

    pub fn witness(&self) -> Option<Term> {
        self.inhabited.then(|| Term::Var(witness_name(&self.name)))
    }

    /// Check the record invariants; `collapse_demo` lifts the ban on
    /// combining substitution with a licensed duality.
    pub fn validate(&self, collapse_demo: bool) -> Result<(), RegistryError> {
        let violation = |clause: &str| RegistryError::InvariantViolation {
            domain: self.name.clone(),
            clause: clause.to_string(),
        };
        if self.entries.iter().any(|t| !t.is_closed()) {
            return Err(violation("entries must be closed terms"));
        }
        if self.focused && self.virtual_singleton && self.entries.len() != 1 {
            return Err(violation("a focused virtual singleton must have exactly one entry"));
        }
        let probs: Vec<Prob> = self
            .entries
            .iter()
            .filter_map(|t| match t {
                Term::Outcome { prob, .. } => Some(*prob),
                _ => None,
            })
            .collect();
        if !probs.is_empty() {
            if probs.len() != self.entries.len() {
                return Err(violation("entries mix outcomes and constants"));
            }
            if probs.iter().sum::<Prob>() != Prob::from_integer(1) {
                return Err(violation("outcome probabilities must sum to 1"));
            }
        }
        if self.virtual_singleton && !self.focused {
            if self.duality.is_none() {
                return Err(violation("a virtual singleton needs a duality"));
            }
            if self.substitution_allowed && !collapse_demo {
                return Err(violation(
                    "a virtual singleton with a duality cannot allow substitution (drop the duality or enable collapse-demo)",
                ));
            }
        }
        Ok(())
    }

    /// `z = t1 \/ ... \/ z = tn`, right-nested.
    pub fn entry_disjunction(&self, z: &Term) -> Option<Formula> {
        Formula::fold_right(
            BinOp::Or,
            self.entries.iter().map(|t| Formula::Eq(z.clone(), t.clone())).collect(),
        )
    }
}

pub fn witness_name(domain: &str) -> String {
    format!("w_{domain}")
}

/// The d-axiom schema a domain admits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DAxiomSchema {
    /// `z in V, A(y) |- A(z), (y in V)^d`, taken as an axiom.
    Virtual { domain: String, duality: String },
    /// `z = u, A(y) |- A(z), y /= u`, derivable from `A(u) |- A(u)`.
    Extensional { domain: String, element: Term },
}

impl DAxiomSchema {
    /// Instance for the body `body` with bound placeholder `x`.
    pub fn instance(&self, body: &Formula, x: &str, z: &str, y: &str) -> Sequent {
        let (zt, yt) = (Term::var(z), Term::var(y));
        match self {
            DAxiomSchema::Virtual { domain, duality } => Sequent::of(
                vec![Formula::member(zt.clone(), domain.clone()), body.replace_var(x, &yt)],
                vec![
                    body.replace_var(x, &zt),
                    Formula::dual_member(yt, domain.clone(), duality.clone()),
                ],
            ),
            DAxiomSchema::Extensional { element, .. } => Sequent::of(
                vec![Formula::Eq(zt.clone(), element.clone()), body.replace_var(x, &yt)],
                vec![body.replace_var(x, &zt), Formula::Neq(yt, element.clone())],
            ),
        }
    }

    /// The instance with dual memberships shown through the literal
    /// domain tables, e.g. `(y in Dplus)^top` as `y in Dminus`.
    pub fn rendered_instance(&self, body: &Formula, x: &str, z: &str, y: &str) -> Sequent {
        self.instance(body, x, z, y).map(render_dual_membership)
    }
}

/// `(t in D)^perp` / `(t in D)^top` rewritten as plain membership in the
/// dual qubit domain; other formulas unchanged.
pub fn render_dual_membership(f: &Formula) -> Formula {
    match f {
        Formula::DualMember {
            term,
            domain,
            duality,
        } => match InvolutionKind::parse(duality) {
            Some(kind @ (InvolutionKind::Perp | InvolutionKind::Top)) if kind.map_domain(domain) != domain => {
                Formula::member(term.clone(), kind.map_domain(domain))
            }
            _ => f.clone(),
        },
        _ => f.clone(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Registry {
    domains: BTreeMap<String, DomainRecord>,
    collapse_demo: bool,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    pub fn with_collapse_demo(collapse_demo: bool) -> Self {
        Registry {
            collapse_demo,
            ..Registry::default()
        }
    }

    pub fn collapse_demo(&self) -> bool {
        self.collapse_demo
    }

    pub fn set_collapse_demo(&mut self, on: bool) {
        self.collapse_demo = on;
    }

    pub fn register(&mut self, record: DomainRecord) -> Result<&DomainRecord, RegistryError> {
        record.validate(self.collapse_demo)?;
        if self.domains.contains_key(&record.name) {
            return Err(RegistryError::Duplicate(record.name));
        }
        let name = record.name.clone();
        self.domains.insert(name.clone(), record);
        Ok(&self.domains[&name])
    }

    pub fn get(&self, name: &str) -> Result<&DomainRecord, RegistryError> {
        self.domains
            .get(name)
            .ok_or_else(|| RegistryError::Unknown(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.domains.contains_key(name)
    }

    pub fn domains(&self) -> impl Iterator<Item = &DomainRecord> {
        self.domains.values()
    }

    pub fn is_virtual_singleton(&self, name: &str) -> bool {
        self.domains.get(name).is_some_and(|d| d.virtual_singleton)
    }

    /// Whether `var` is the distinguished inhabitant of some domain.
    pub fn is_witness(&self, var: &str) -> bool {
        self.domains
            .values()
            .any(|d| d.inhabited && witness_name(&d.name) == var)
    }

    /// `(z = t1 \/ ... \/ z = tn |- z in D,  z in D |- z = t1 \/ ... \/ z = tn)`.
    /// The second is an axiom only when `D` is focused.
    pub fn focus_sequents(&self, name: &str) -> Result<(Sequent, Sequent), RegistryError> {
        let d = self.get(name)?;
        let z = Term::var("z");
        let disj = d
            .entry_disjunction(&z)
            .ok_or_else(|| RegistryError::EmptyDomain(name.to_string()))?;
        let member = Formula::member(z, name);
        Ok((
            Sequent::of(vec![disj.clone()], vec![member.clone()]),
            Sequent::of(vec![member], vec![disj]),
        ))
    }

    /// The d-axiom schema of `name` under `duality`.
    pub fn license_d_axiom(&self, name: &str, duality: &str) -> Result<DAxiomSchema, RegistryError> {
        d_axiom_schema(self.get(name)?, duality)
    }
}

/// Licensing law: extensional singletons get the derivable equality schema,
/// unfocused virtual singletons the axiom schema, anything else fails.
pub fn d_axiom_schema(record: &DomainRecord, duality: &str) -> Result<DAxiomSchema, RegistryError> {
    if record.focused {
        return match record.entries.as_slice() {
            [u] => Ok(DAxiomSchema::Extensional {
                domain: record.name.clone(),
                element: u.clone(),
            }),
            _ => Err(RegistryError::FocusedNonSingleton(record.name.clone())),
        };
    }
    if record.virtual_singleton {
        let duality = if duality.is_empty() {
            record.duality.clone().unwrap_or_else(|| GENERIC_DUALITY.to_string())
        } else {
            duality.to_string()
        };
        return Ok(DAxiomSchema::Virtual {
            domain: record.name.clone(),
            duality,
        });
    }
    Err(RegistryError::NotVirtualSingleton(record.name.clone()))
}

/// Result of [`consistency_guard`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GuardOutcome {
    /// Proofs of `|- u' = u` for each ordered pair of distinct entries.
    Collapse(Vec<CollapseProof>),
    /// No conflicting licences; for an extensional singleton `{u}` the only
    /// equation produced is `|- u = u`.
    Consistent(Option<ProofNode>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseProof {
    pub left: Term,
    pub right: Term,
    pub proof: ProofNode,
}

/// When `name` is licensed for both substitution and a d-axiom, derive
/// `|- u' = u` for its entries: the d-axiom on `x = u`, substitution of
/// `u'` and `u`, then cuts against reflexivity and the membership axioms.
pub fn consistency_guard(reg: &Registry, cfg: &CalculusConfig, name: &str) -> Result<GuardOutcome, RegistryError> {
    let rec = reg.get(name)?;
    if rec.is_extensional_singleton() {
        let u = &rec.entries[0];
        let refl = ProofNode::leaf(Sequent::of(vec![], vec![Formula::Eq(u.clone(), u.clone())]), Rule::Refl);
        return Ok(GuardOutcome::Consistent(Some(refl)));
    }
    let duality = cfg
        .d_axiom_domains
        .iter()
        .find(|(d, _)| d == name)
        .map(|(_, dual)| dual.clone());
    let (Some(duality), true) = (duality, cfg.allows_substitution(name)) else {
        return Ok(GuardOutcome::Consistent(None));
    };
    let mut proofs = Vec::new();
    for u2 in &rec.entries {
        for u in &rec.entries {
            if u2 != u {
                proofs.push(CollapseProof {
                    left: u2.clone(),
                    right: u.clone(),
                    proof: collapse_proof(name, &duality, u2, u),
                });
            }
        }
    }
    Ok(GuardOutcome::Collapse(proofs))
}

fn collapse_proof(v: &str, duality: &str, u2: &Term, u: &Term) -> ProofNode {
    let (z, y) = (Term::var("z"), Term::var("y"));
    let eq = |a: &Term, b: &Term| Formula::Eq(a.clone(), b.clone());
    let body = eq(&Term::var("x"), u);
    let goal = eq(u2, u);
    let u2_in = Formula::member(u2.clone(), v);
    let u_dual = Formula::dual_member(u.clone(), v, duality);
    let axiom = ProofNode::new(
        Sequent::of(
            vec![Formula::member(z.clone(), v), eq(&y, u)],
            vec![eq(&z, u), Formula::dual_member(y.clone(), v, duality)],
        ),
        Rule::DAxiom,
        Params::default().with_formula(body).with_var("x"),
        vec![],
    );
    let subst_z = ProofNode::new(
        Sequent::of(vec![u2_in.clone(), eq(&y, u)], vec![goal.clone(), Formula::dual_member(y, v, duality)]),
        Rule::Subst,
        Params::default().with_var("z").with_term(u2.clone()).with_domain(v),
        vec![axiom],
    );
    let subst_y = ProofNode::new(
        Sequent::of(vec![u2_in.clone(), eq(u, u)], vec![goal.clone(), u_dual.clone()]),
        Rule::Subst,
        Params::default().with_var("y").with_term(u.clone()).with_domain(v),
        vec![subst_z],
    );
    let refl = ProofNode::leaf(Sequent::of(vec![], vec![eq(u, u)]), Rule::Refl);
    let cut_refl = ProofNode::new(
        Sequent::of(vec![u2_in.clone()], vec![goal.clone(), u_dual.clone()]),
        Rule::Cut,
        Params::default().with_formula(eq(u, u)),
        vec![refl, subst_y],
    );
    let member = ProofNode::leaf(Sequent::of(vec![], vec![u2_in.clone()]), Rule::MemberAx);
    let cut_member = ProofNode::new(
        Sequent::of(vec![], vec![goal.clone(), u_dual.clone()]),
        Rule::Cut,
        Params::default().with_formula(u2_in),
        vec![member, cut_refl],
    );
    let dual_member = ProofNode::leaf(Sequent::of(vec![u_dual.clone()], vec![]), Rule::MemberDualAx);
    ProofNode::new(
        Sequent::of(vec![], vec![goal]),
        Rule::Cut,
        Params::default().with_formula(u_dual),
        vec![cut_member, dual_member],
    )
}
