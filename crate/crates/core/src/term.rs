//! First-order terms, formula indexes and correlation tags.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact outcome probability.
pub type Prob = Ratio<u64>;

/// Outcome label for "spin down".
pub const DOWN: &str = "down";
/// Outcome label for "spin up".
pub const UP: &str = "up";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("outcome probability {0} is outside (0, 1]")]
    BadProbability(Prob),
}

/// A first-order term.
///
/// Outcomes pair a measurement label with its exact probability and are
/// closed, like constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    Outcome { label: String, prob: Prob },
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn outcome(label: impl Into<String>, prob: Prob) -> Result<Self, TermError> {
        if prob == Prob::from_integer(0) || prob > Prob::from_integer(1) {
            return Err(TermError::BadProbability(prob));
        }
        Ok(Term::Outcome {
            label: label.into(),
            prob,
        })
    }

    /// Shorthand for outcomes with literal probabilities; panics on an
    /// invalid probability.
    pub fn outcome_of(label: &str, numer: u64, denom: u64) -> Self {
        Term::outcome(label, Prob::new(numer, denom)).expect("valid outcome probability")
    }

    pub fn is_closed(&self) -> bool {
        !matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::Outcome { label, prob } => {
                if *prob.denom() == 1 {
                    write!(f, "({label},{})", prob.numer())
                } else {
                    write!(f, "({label},{}/{})", prob.numer(), prob.denom())
                }
            }
        }
    }
}

/// Index distinguishing the slots of a correlated pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    Var(String),
    Const(u8),
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Var(v) => f.write_str(v),
            Index::Const(n) => write!(f, "{n}"),
        }
    }
}

/// The outcome map linking two correlated formulas: identity or swap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationTag {
    Identical,
    Opposite,
}

impl CorrelationTag {
    pub const ALL: [CorrelationTag; 2] = [CorrelationTag::Identical, CorrelationTag::Opposite];

    pub fn suffix(self) -> char {
        match self {
            CorrelationTag::Identical => 'i',
            CorrelationTag::Opposite => 'o',
        }
    }

    pub fn from_suffix(c: char) -> Option<Self> {
        match c {
            'i' => Some(CorrelationTag::Identical),
            'o' => Some(CorrelationTag::Opposite),
            _ => None,
        }
    }

    /// Image of an outcome label under the correlation map.
    pub fn map_label(self, label: &str) -> &str {
        match (self, label) {
            (CorrelationTag::Opposite, DOWN) => UP,
            (CorrelationTag::Opposite, UP) => DOWN,
            (_, l) => l,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CorrelationTag::Identical => "identical",
            CorrelationTag::Opposite => "opposite",
        }
    }
}
