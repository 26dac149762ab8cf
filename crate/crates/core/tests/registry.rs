use symlog_core::kernel::{check_proof, search_proof, CalculusConfig, SearchOutcome};
use symlog_core::formula::{Formula, Sequent};
use symlog_core::registry::{consistency_guard, DomainRecord, GuardOutcome, Registry};
use symlog_core::term::Term;

fn two_entry(collapse: bool) -> Registry {
    let mut reg = Registry::with_collapse_demo(collapse);
    let mut v = DomainRecord::virtual_singleton("V", vec![Term::constant("T1"), Term::constant("T2")], "d");
    v.substitution_allowed = collapse;
    reg.register(v).unwrap();
    reg
}

#[test]
fn both_licences_collapse_the_domain() {
    let reg = two_entry(true);
    let cfg = CalculusConfig::from_registry(&reg, false, false, false, true);
    let GuardOutcome::Collapse(proofs) = consistency_guard(&reg, &cfg, "V").unwrap() else {
        panic!("expected a collapse");
    };
    assert_eq!(proofs.len(), 2);
    for p in &proofs {
        let report = check_proof(&p.proof, &cfg, &reg);
        assert!(report.ok, "{:?}", report.failures);
        assert_eq!(p.proof.conclusion, Sequent::of(vec![], vec![Formula::Eq(p.left.clone(), p.right.clone())]));
    }
}

#[test]
fn single_licence_is_consistent() {
    let reg = two_entry(false);
    let cfg = CalculusConfig::from_registry(&reg, true, true, true, true);
    assert_eq!(consistency_guard(&reg, &cfg, "V").unwrap(), GuardOutcome::Consistent(None));
    let goal = Sequent::of(vec![], vec![Formula::Eq(Term::constant("T2"), Term::constant("T1"))]);
    assert!(matches!(search_proof(&goal, &cfg, &reg, 8).unwrap(), SearchOutcome::NotFound { .. }));
}

#[test]
fn extensional_singleton_only_proves_reflexivity() {
    let mut reg = Registry::with_collapse_demo(true);
    let mut u = DomainRecord::focused("U", vec![Term::constant("T")]);
    u.substitution_allowed = true;
    reg.register(u).unwrap();
    let cfg = CalculusConfig::from_registry(&reg, false, false, false, false);
    let GuardOutcome::Consistent(Some(p)) = consistency_guard(&reg, &cfg, "U").unwrap() else {
        panic!("expected reflexivity");
    };
    assert_eq!(p.conclusion.to_string(), "|- T = T");
    assert!(check_proof(&p, &cfg, &reg).ok);
}
