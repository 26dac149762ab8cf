//! Proof kernel and proof-script language for a symmetric sequent calculus
//! over random first-order domains, with a qubit/Bell-state dictionary.

pub mod corpus;
pub mod correlation;
pub mod duality;
pub mod formula;
pub mod kernel;
pub mod quantum;
pub mod registry;
pub mod report;
pub mod script;
pub mod term;

pub use duality::{apply_duality, symmetrize_formula, symmetrize_sequent, InvolutionKind, LiteralInvolution};
pub use formula::{BinOp, Formula, Quantifier, Sequent, Slot};
pub use registry::{DomainRecord, Registry, RegistryError};
pub use term::{CorrelationTag, Index, Prob, Term};
pub use kernel::{check_proof, search_proof, symmetrize_proof, CalculusConfig, CheckError, Failure, Params, ProofNode, Rule};
