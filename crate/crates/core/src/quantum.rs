//! One-qubit states, Bell pairs and their formulas.
//!
//! A state is kept in canonical form `alpha |down> + e^{i phi} beta |up>`
//! with `alpha, beta >= 0`; the global phase is dropped.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::duality::{apply_duality, InvolutionKind, D_DOWN, D_MINUS, D_PLUS, D_UP};
use crate::formula::{BinOp, Formula};
use crate::registry::DomainRecord;
use crate::term::{CorrelationTag, Index, Prob, Term, DOWN, UP};

/// Normalization and orthogonality tolerance.
pub const TOLERANCE: f64 = 1e-12;
/// Largest distance allowed between a probability and its rational form.
pub const RATIONAL_TOLERANCE: f64 = 1e-9;
/// Largest denominator tried when rationalizing a probability.
pub const MAX_DENOMINATOR: u64 = 1_000_000;
/// Phase tolerance when matching `phi` against 0 and pi.
const PHASE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("state is not normalized: alpha^2 + beta^2 = {0}")]
    NotNormalized(f64),
    #[error("amplitudes must be finite and non-negative")]
    BadAmplitude,
    #[error("probability {0} has no rational form with denominator at most {MAX_DENOMINATOR}")]
    NonDyadicProbability(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Qubit {
    pub alpha: f64,
    pub beta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    X,
    Z,
}

impl Gate {
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        match self {
            Gate::X => [[o, l], [l, o]],
            Gate::Z => [[l, o], [o, -l]],
        }
    }

    /// The literal duality the gate realizes.
    pub fn duality(self) -> InvolutionKind {
        match self {
            Gate::X => InvolutionKind::Perp,
            Gate::Z => InvolutionKind::Top,
        }
    }
}

fn fold_phase(phi: f64) -> f64 {
    let p = phi.rem_euclid(TAU);
    if TAU - p < PHASE_TOLERANCE {
        0.0
    } else {
        p
    }
}

impl Qubit {
    pub fn new(alpha: f64, beta: f64, phi: f64) -> Result<Qubit, QuantumError> {
        if !(alpha.is_finite() && beta.is_finite() && phi.is_finite()) || alpha < 0.0 || beta < 0.0 {
            return Err(QuantumError::BadAmplitude);
        }
        let norm = alpha * alpha + beta * beta;
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(QuantumError::NotNormalized(norm));
        }
        let phi = if beta == 0.0 || alpha == 0.0 { 0.0 } else { fold_phase(phi) };
        Ok(Qubit { alpha, beta, phi })
    }

    pub fn down() -> Qubit {
        Qubit {
            alpha: 1.0,
            beta: 0.0,
            phi: 0.0,
        }
    }

    pub fn up() -> Qubit {
        Qubit {
            alpha: 0.0,
            beta: 1.0,
            phi: 0.0,
        }
    }

    pub fn plus() -> Qubit {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Qubit {
            alpha: h,
            beta: h,
            phi: 0.0,
        }
    }

    pub fn minus() -> Qubit {
        Qubit { phi: PI, ..Qubit::plus() }
    }

    /// The basis states in the order down, up, plus, minus.
    pub fn basis() -> [(&'static str, Qubit); 4] {
        [
            ("down", Qubit::down()),
            ("up", Qubit::up()),
            ("plus", Qubit::plus()),
            ("minus", Qubit::minus()),
        ]
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        [Complex64::new(self.alpha, 0.0), Complex64::from_polar(self.beta, self.phi)]
    }

    /// Canonical form of a vector, normalized and with the global phase
    /// removed.
    pub fn from_amplitudes(a: Complex64, b: Complex64) -> Result<Qubit, QuantumError> {
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(QuantumError::NotNormalized(norm * norm));
        }
        let (a, b) = (a / norm, b / norm);
        if a.norm() <= TOLERANCE {
            return Ok(Qubit::up());
        }
        let rot = a.conj() / a.norm();
        let b = b * rot;
        let alpha = a.norm();
        let beta = b.norm();
        if beta <= TOLERANCE {
            return Ok(Qubit::down());
        }
        Ok(Qubit {
            alpha,
            beta,
            phi: fold_phase(b.arg()),
        })
    }

    pub fn approx_eq(&self, other: &Qubit, tol: f64) -> bool {
        (inner_product(self, other).norm() - 1.0).abs() <= tol
    }
}

/// `<q|q'> = alpha alpha' + e^{i(phi' - phi)} beta beta'`.
pub fn inner_product(q: &Qubit, q2: &Qubit) -> Complex64 {
    let [a, b] = q.amplitudes();
    let [a2, b2] = q2.amplitudes();
    a.conj() * a2 + b.conj() * b2
}

pub fn distinguishable(q: &Qubit, q2: &Qubit) -> bool {
    inner_product(q, q2).norm() < TOLERANCE
}

pub fn apply_gate(g: Gate, q: &Qubit) -> Qubit {
    let m = g.matrix();
    let [a, b] = q.amplitudes();
    Qubit::from_amplitudes(m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b)
        .expect("unitary gates keep the norm")
}

/// Closest fraction with denominator at most `max_den`, by continued
/// fractions.
fn best_rational(x: f64, max_den: u64) -> (u64, u64) {
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut r = x;
    loop {
        let a = r.floor();
        let a_int = a as u64;
        let (p2, q2) = (a_int * p1 + p0, a_int * q1 + q0);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a;
        if frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    (p1, q1)
}

/// `x` as an exact probability in `[0, 1]`.
pub fn rationalize(x: f64) -> Result<Prob, QuantumError> {
    if !(-RATIONAL_TOLERANCE..=1.0 + RATIONAL_TOLERANCE).contains(&x) {
        return Err(QuantumError::NonDyadicProbability(x));
    }
    let x = x.clamp(0.0, 1.0);
    let (n, d) = best_rational(x, MAX_DENOMINATOR);
    if d == 0 || (n as f64 / d as f64 - x).abs() > RATIONAL_TOLERANCE {
        return Err(QuantumError::NonDyadicProbability(x));
    }
    Ok(Prob::new(n, d))
}

fn near(x: f64, y: f64) -> bool {
    (x - y).abs() <= PHASE_TOLERANCE
}

/// The random domain of a z-measurement. Sharp states give the focused
/// singletons, the balanced states with phase 0 or pi the virtual
/// singletons; any other state gets an anonymous unfocused domain.
pub fn measurement_domain(q: &Qubit) -> Result<DomainRecord, QuantumError> {
    let norm = q.alpha * q.alpha + q.beta * q.beta;
    if (norm - 1.0).abs() > TOLERANCE {
        return Err(QuantumError::NotNormalized(norm));
    }
    let p_down = rationalize(q.alpha * q.alpha)?;
    let p_up = Prob::from_integer(1) - p_down;
    if (q.beta * q.beta - *p_up.numer() as f64 / *p_up.denom() as f64).abs() > RATIONAL_TOLERANCE {
        return Err(QuantumError::NonDyadicProbability(q.beta * q.beta));
    }
    let zero = Prob::from_integer(0);
    let mut entries = Vec::new();
    for (label, p) in [(DOWN, p_down), (UP, p_up)] {
        if p > zero {
            entries.push(Term::outcome(label, p).expect("probability in (0, 1]"));
        }
    }
    if entries.len() == 1 {
        let name = if p_down > zero { D_DOWN } else { D_UP };
        return Ok(DomainRecord::focused(name, entries).with_duality("perp"));
    }
    if p_down == Prob::new(1, 2) {
        if near(q.phi, 0.0) {
            return Ok(DomainRecord::virtual_singleton(D_PLUS, entries, "top"));
        }
        if near(q.phi, PI) {
            return Ok(DomainRecord::virtual_singleton(D_MINUS, entries, "top"));
        }
    }
    let phase = (q.phi * 1e6).round() as u64;
    let name = format!("Dq_{}_{}_{phase}", p_down.numer(), p_down.denom());
    Ok(DomainRecord {
        inhabited: true,
        ..DomainRecord::new(name, entries)
    })
}

fn a_of(x: &str) -> Formula {
    Formula::atom("A", vec![Term::var(x)])
}

/// `forall x in D_q . A(x)`.
pub fn state_formula(q: &Qubit) -> Result<Formula, QuantumError> {
    let d = measurement_domain(q)?;
    Ok(Formula::forall("x", d.name, a_of("x")))
}

/// `A(t1) & ... & A(tm)` over the outcomes of a z-measurement.
pub fn collapse(q: &Qubit) -> Result<Formula, QuantumError> {
    let d = measurement_domain(q)?;
    let parts = d
        .entries
        .into_iter()
        .map(|t| Formula::atom("A", vec![t]))
        .collect();
    Ok(Formula::fold_right(BinOp::And, parts).expect("measurement domains are non-empty"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BellPhase {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BellState {
    pub phase: BellPhase,
    pub correlation: CorrelationTag,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState {
            phase: BellPhase::Plus,
            correlation: CorrelationTag::Identical,
        },
        BellState {
            phase: BellPhase::Plus,
            correlation: CorrelationTag::Opposite,
        },
        BellState {
            phase: BellPhase::Minus,
            correlation: CorrelationTag::Identical,
        },
        BellState {
            phase: BellPhase::Minus,
            correlation: CorrelationTag::Opposite,
        },
    ];

    pub fn singlet() -> BellState {
        BellState {
            phase: BellPhase::Minus,
            correlation: CorrelationTag::Opposite,
        }
    }
}

/// `forall x in D+- . A_1(x) join_f A_2(x)`.
pub fn bell_formula(b: BellState) -> Formula {
    let domain = match b.phase {
        BellPhase::Plus => D_PLUS,
        BellPhase::Minus => D_MINUS,
    };
    let a = |i: u8| Formula::indexed_atom("A", Index::Const(i), vec![Term::var("x")]);
    Formula::forall("x", domain, Formula::join(b.correlation, a(1), a(2)))
}

/// One cell of the gate/duality square.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityCell {
    pub state: String,
    pub gate: Gate,
    /// The formula of the state after the gate.
    pub after_gate: String,
    /// The dual of the state's formula.
    pub dual: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrespondenceReport {
    pub ok: bool,
    pub cells: Vec<DualityCell>,
}

/// Check that X acts as perp and Z as top on the four basis states.
pub fn duality_correspondence() -> CorrespondenceReport {
    let mut cells = Vec::new();
    for gate in [Gate::X, Gate::Z] {
        for (name, s) in Qubit::basis() {
            let after = state_formula(&apply_gate(gate, &s));
            let dual = state_formula(&s).ok().and_then(|f| apply_duality(&f, gate.duality()).ok());
            let show = |f: Option<&Formula>| f.map_or_else(|| "<none>".to_string(), Formula::to_string);
            let ok = matches!((&after, &dual), (Ok(a), Some(d)) if a == d);
            cells.push(DualityCell {
                state: name.to_string(),
                gate,
                after_gate: show(after.as_ref().ok()),
                dual: show(dual.as_ref()),
                ok,
            });
        }
    }
    CorrespondenceReport {
        ok: cells.iter().all(|c| c.ok),
        cells,
    }
}

/// Grid point of the orthogonality scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub alpha_sq: f64,
    pub delta_phi: f64,
    pub overlap: f64,
}

/// `|<q|q'>|` for `q`, `q'` with equal moduli `alpha^2` in `0, 0.1, .., 1`
/// and phase difference in `0, pi/8, .., 15 pi/8`.
pub fn orthogonality_scan() -> Vec<ScanPoint> {
    let mut out = Vec::new();
    for k in 0..=10 {
        let alpha_sq = k as f64 / 10.0;
        for m in 0..16 {
            let delta_phi = m as f64 * PI / 8.0;
            let (a, b) = (alpha_sq.sqrt(), (1.0 - alpha_sq).sqrt());
            let q = Qubit { alpha: a, beta: b, phi: 0.0 };
            let q2 = Qubit {
                alpha: a,
                beta: b,
                phi: delta_phi,
            };
            out.push(ScanPoint {
                alpha_sq,
                delta_phi,
                overlap: inner_product(&q, &q2).norm(),
            });
        }
    }
    out
}
