use std::f64::consts::PI;

use proptest::prelude::*;
use symlog_core::duality::{apply_duality, InvolutionKind};
use symlog_core::formula::{Formula, Sequent};
use symlog_core::kernel::{search_proof, CalculusConfig, SearchOutcome};
use symlog_core::quantum::{
    apply_gate, bell_formula, collapse, distinguishable, duality_correspondence, inner_product, measurement_domain,
    orthogonality_scan, state_formula, BellState, Gate, QuantumError, Qubit,
};
use symlog_core::script::qubit_registry;
use symlog_core::term::Term;

#[test]
fn inner_product_matches_hand_computation() {
    // 0.6 * 0.6 + e^{i pi} 0.8 * 0.8 = 0.36 - 0.64
    let q = Qubit::new(0.6, 0.8, 0.0).unwrap();
    let q2 = Qubit::new(0.6, 0.8, PI).unwrap();
    let ip = inner_product(&q, &q2);
    assert!((ip.re + 0.28).abs() < 1e-12 && ip.im.abs() < 1e-12);
    assert!(distinguishable(&Qubit::plus(), &Qubit::minus()));
    assert!((inner_product(&q, &q).norm() - 1.0).abs() < 1e-12);
}

#[test]
fn orthogonality_only_at_balanced_opposite_phase() {
    let scan = orthogonality_scan();
    assert_eq!(scan.len(), 11 * 16);
    let zeros: Vec<_> = scan.iter().filter(|p| p.overlap < 1e-12).collect();
    assert_eq!(zeros.len(), 1);
    assert!((zeros[0].alpha_sq - 0.5).abs() < 1e-12 && (zeros[0].delta_phi - PI).abs() < 1e-12);
}

#[test]
fn measurement_domains_of_basis_states() {
    let down = measurement_domain(&Qubit::down()).unwrap();
    assert_eq!(down.name, "Ddown");
    assert!(down.is_extensional_singleton());
    let plus = measurement_domain(&Qubit::plus()).unwrap();
    assert_eq!(plus.name, "Dplus");
    assert!(plus.virtual_singleton && !plus.focused);
    assert_eq!(plus.entries, vec![Term::outcome_of("down", 1, 2), Term::outcome_of("up", 1, 2)]);
    let up = measurement_domain(&Qubit::new(0.0, 1.0, 0.0).unwrap()).unwrap();
    assert_eq!(up.entries, vec![Term::outcome_of("up", 1, 1)]);
    let skew = measurement_domain(&Qubit::new(0.6, 0.8, 1.0).unwrap()).unwrap();
    assert!(!skew.focused && !skew.virtual_singleton && skew.duality.is_none());
    let odd = (1.0f64 / 3.0 + 1e-8).sqrt();
    let q = Qubit::new(odd, (1.0 - odd * odd).sqrt(), 0.0).unwrap();
    assert!(matches!(measurement_domain(&q), Err(QuantumError::NonDyadicProbability(_))));
}

#[test]
fn gates_act_on_the_basis() {
    assert!(apply_gate(Gate::X, &Qubit::down()).approx_eq(&Qubit::up(), 1e-12));
    let zp = apply_gate(Gate::Z, &Qubit::plus());
    assert!(zp.approx_eq(&Qubit::minus(), 1e-12));
    assert!((zp.phi - PI).abs() < 1e-12);
}

#[test]
fn gates_and_dualities_commute_on_all_cells() {
    let report = duality_correspondence();
    assert_eq!(report.cells.len(), 8);
    assert!(report.ok, "{:#?}", report.cells);
}

#[test]
fn measurement_loses_the_phase() {
    let p = collapse(&Qubit::plus()).unwrap();
    assert_eq!(p, collapse(&Qubit::minus()).unwrap());
    assert_eq!(p.to_string(), "A((down,1/2)) & A((up,1/2))");
    assert_ne!(p, state_formula(&Qubit::plus()).unwrap());
    assert_eq!(collapse(&Qubit::down()).unwrap().to_string(), "A((down,1))");
}

#[test]
fn sharp_state_formula_is_its_instance() {
    let reg = qubit_registry(false);
    let cfg = CalculusConfig::from_registry(&reg, true, true, false, true);
    let f = state_formula(&Qubit::down()).unwrap();
    assert_eq!(f.to_string(), "(forall x in Ddown . A(x))");
    let inst = Formula::atom("A", vec![Term::outcome_of("down", 1, 1)]);
    for goal in [Sequent::of(vec![f.clone()], vec![inst.clone()]), Sequent::of(vec![inst], vec![f])] {
        assert!(matches!(search_proof(&goal, &cfg, &reg, 8).unwrap(), SearchOutcome::Found(_)), "{goal}");
    }
}

#[test]
fn bell_formulas_are_perp_fixed_points() {
    assert_eq!(
        bell_formula(BellState::singlet()).to_string(),
        "(forall x in Dminus . A_1(x) join_o A_2(x))"
    );
    for b in BellState::ALL {
        let f = bell_formula(b);
        assert_eq!(apply_duality(&f, InvolutionKind::Perp).unwrap(), f);
    }
    let minus = state_formula(&Qubit::minus()).unwrap();
    assert_eq!(apply_duality(&minus, InvolutionKind::Perp).unwrap(), minus);
}

#[test]
fn json_shapes() {
    let q: Qubit = serde_json::from_str(r#"{"alpha":1.0,"beta":0.0,"phi":0.0}"#).unwrap();
    assert_eq!(q, Qubit::down());
    let b: BellState = serde_json::from_str(r#"{"phase":"minus","correlation":"opposite"}"#).unwrap();
    assert_eq!(b, BellState::singlet());
}

fn qubit() -> impl Strategy<Value = Qubit> {
    (0.0..=1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(a2, phi)| {
        let alpha = a2.sqrt();
        Qubit::new(alpha, (1.0 - alpha * alpha).max(0.0).sqrt(), phi).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gates_are_involutions(q in qubit()) {
        for g in [Gate::X, Gate::Z] {
            let back = apply_gate(g, &apply_gate(g, &q));
            prop_assert!(back.approx_eq(&q, 1e-9));
            prop_assert!((back.alpha - q.alpha).abs() < 1e-9);
        }
    }
}
