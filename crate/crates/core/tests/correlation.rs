use symlog_core::correlation::{
    contract, convert, distribute_forall, duplicate, exists_to_forall, index_profile, join_step, par_distribution,
    ConversionStep, CorrelationError, JoinDirection,
};
use symlog_core::formula::{Formula, Sequent, Slot};
use symlog_core::kernel::{check_proof, expand_derived, CalculusConfig};
use symlog_core::registry::DomainRecord;
use symlog_core::script::qubit_registry;
use symlog_core::term::{CorrelationTag, Index, Term};

fn a(i: u8, var: &str) -> Formula {
    Formula::indexed_atom("A", Index::Const(i), vec![Term::var(var)])
}


#[test]
fn conversion_moves_the_pair_into_a_relation() {
    let s = Sequent::new(vec![Slot::Single(Formula::prop("g"))], vec![Slot::corr(a(1, "z"), CorrelationTag::Identical, a(2, "z"))]);
    let r = convert(&s, &ConversionStep::to_relation(0)).unwrap();
    assert_eq!(r.to_string(), "g, 1 ~i 2 |- A_1(z)");
    let rel = Formula::IndexRel {
        left: Index::Const(1),
        tag: CorrelationTag::Identical,
        right: Index::Const(2),
    };
    assert_eq!(convert(&r, &ConversionStep::to_comma(0, rel)).unwrap(), s);
    assert_eq!(index_profile(&r), index_profile(&s));
    assert!(matches!(convert(&r, &ConversionStep::to_relation(0)), Err(CorrelationError::SlotMismatch(_))));
}

#[test]
fn repeated_formula_contracts() {
    let s = Sequent::of(vec![], vec![Formula::prop("p")]);
    let d = duplicate(&s, 0).unwrap();
    assert_eq!(d.to_string(), "|- p, p");
    assert_eq!(contract(&d, 1).unwrap(), s);
    assert!(contract(&s, 0).is_err());
}

#[test]
fn join_step_needs_a_virtual_singleton() {
    let reg = qubit_registry(false);
    let pair = Slot::corr(a(1, "z"), CorrelationTag::Identical, a(2, "z"));
    let s = Sequent::new(vec![Slot::Single(Formula::member(Term::var("z"), "Dplus"))], vec![pair.clone()]);
    let joined = join_step(&s, JoinDirection::ToJoin, 0, &reg).unwrap();
    assert_eq!(joined.to_string(), "z in Dplus |- A_1(z) join_i A_2(z)");
    assert_eq!(join_step(&joined, JoinDirection::ToComma, 0, &reg).unwrap(), s);
    assert_eq!(index_profile(&joined), index_profile(&s));
    let focused = Sequent::new(vec![Slot::Single(Formula::member(Term::var("z"), "Ddown"))], vec![pair]);
    assert_eq!(
        join_step(&focused, JoinDirection::ToJoin, 0, &reg),
        Err(CorrelationError::NotVirtualSingleton("Ddown".into()))
    );
}

#[test]
fn distribution_proofs_check_in_both_directions() {
    let reg = qubit_registry(false);
    let cfg = CalculusConfig::from_registry(&reg, false, false, true, true);
    for (v, tag) in [("Dplus", CorrelationTag::Identical), ("Dminus", CorrelationTag::Opposite)] {
        let d = distribute_forall(&reg, v, &a(1, "x"), &a(2, "x"), "x", tag).unwrap();
        for proof in [&d.forward, &d.backward] {
            let report = check_proof(proof, &cfg, &reg);
            assert!(report.ok, "{v}: {:?}", report.failures);
            let flat = expand_derived(proof, &reg).unwrap();
            assert_eq!(flat.conclusion, proof.conclusion);
            assert!(check_proof(&flat, &cfg, &reg).ok);
        }
        assert_eq!(
            d.forward.conclusion.to_string(),
            format!("(forall x in {v} . A_1(x) join_{0} A_2(x)) |- (forall x in {v} . A_1(x)) join_{0} (forall x in {v} . A_2(x))", tag.suffix())
        );
    }
}

#[test]
fn distribution_is_rejected_for_focused_domains() {
    let mut reg = qubit_registry(false);
    reg.register(DomainRecord::focused("D", vec![Term::constant("T1"), Term::constant("T2")])).unwrap();
    assert_eq!(
        distribute_forall(&reg, "D", &a(1, "x"), &a(2, "x"), "x", CorrelationTag::Identical),
        Err(CorrelationError::NotVirtualSingleton("D".into()))
    );
}

#[test]
fn par_distribution_checks_from_the_d_axiom() {
    let reg = qubit_registry(false);
    let cfg = CalculusConfig::from_registry(&reg, true, true, false, true);
    let p = |n: &str| Formula::atom(n, vec![Term::var("x")]);
    let proof = par_distribution(&reg, "Dplus", &p("A"), &p("B"), "x", "top").unwrap();
    let report = check_proof(&proof, &cfg, &reg);
    assert!(report.ok, "{:?}", report.failures);
    assert!(report.stats.d_axiom_domains.contains(&("Dplus".to_string(), "top".to_string())));
    let mut unlicensed = cfg.clone();
    unlicensed.d_axiom_domains.clear();
    assert!(!check_proof(&proof, &unlicensed, &reg).ok);
}

#[test]
fn existential_implies_universal_on_virtual_singletons() {
    let reg = qubit_registry(false);
    let cfg = CalculusConfig::from_registry(&reg, true, true, true, true);
    let proof = exists_to_forall("Dminus", &Formula::atom("A", vec![Term::var("x")]), "x", "top");
    let report = check_proof(&proof, &cfg, &reg);
    assert!(report.ok, "{:?}", report.failures);
}
