use symlog_core::duality::{LiteralInvolution, D_PLUS};
use symlog_core::kernel::{check_proof, search_proof, symmetrize_proof, SearchOutcome};
use symlog_core::registry::DomainRecord;
use symlog_core::{CalculusConfig, Failure, Formula, Params, ProofNode, Registry, Rule, Sequent, Term};

fn p(name: &str) -> Formula {
    Formula::prop(name)
}

fn a(t: Term) -> Formula {
    Formula::atom("A", vec![t])
}

fn focused_registry() -> Registry {
    let mut reg = Registry::new();
    reg.register(DomainRecord::focused("D", vec![Term::constant("T1"), Term::constant("T2")]))
        .unwrap();
    reg
}

/// All sixteen flag combinations.
fn all_configs() -> Vec<CalculusConfig> {
    (0..16u8)
        .map(|b| CalculusConfig::new(b & 1 != 0, b & 2 != 0, b & 4 != 0, b & 8 != 0))
        .collect()
}

#[test]
fn modus_ponens_is_found_without_flags() {
    let goal = Sequent::of(vec![Formula::imp(p("p"), p("q")), p("p")], vec![p("q")]);
    let reg = Registry::new();
    let out = search_proof(&goal, &CalculusConfig::default(), &reg, 4).unwrap();
    let proof = out.proof().expect("found");
    check_proof(proof, &CalculusConfig::default(), &reg).into_result().unwrap();
}

#[test]
fn affirming_the_consequent_is_not_found_under_any_flags() {
    let goal = Sequent::of(vec![Formula::imp(p("p"), p("q")), p("q")], vec![p("p")]);
    let reg = Registry::new();
    for cfg in all_configs() {
        let out = search_proof(&goal, &cfg, &reg, 8).unwrap();
        assert_eq!(out, SearchOutcome::NotFound { depth: 8 }, "{cfg:?}");
    }
}

#[test]
fn focused_domain_universal_from_instances() {
    let reg = focused_registry();
    let x = Term::var("x");
    let goal = Sequent::of(
        vec![Formula::and(a(Term::constant("T1")), a(Term::constant("T2")))],
        vec![Formula::forall("x", "D", a(x))],
    );
    let cfg = CalculusConfig::from_registry(&reg, true, true, false, true);
    let out = search_proof(&goal, &cfg, &reg, 6).unwrap();
    let proof = out.proof().expect("found at depth 6");
    assert!(proof.height() <= 6);
}

#[test]
fn unfocused_domain_universal_is_not_found() {
    let mut reg = Registry::new();
    let half = vec![Term::outcome_of("down", 1, 2), Term::outcome_of("up", 1, 2)];
    reg.register(DomainRecord::virtual_singleton(D_PLUS, half.clone(), "top"))
        .unwrap();
    let goal = Sequent::of(
        vec![Formula::and(a(half[0].clone()), a(half[1].clone()))],
        vec![Formula::forall("x", D_PLUS, a(Term::var("x")))],
    );
    for cfg in all_configs() {
        let cfg = CalculusConfig {
            d_axiom_domains: Default::default(),
            ..cfg
        };
        let out = search_proof(&goal, &cfg, &reg, 6).unwrap();
        assert!(out.proof().is_none(), "{cfg:?}");
    }
}

#[test]
fn gated_context_is_a_side_condition() {
    let reg = Registry::new();
    // p, q |- p & q with both premises weakened on the left.
    let leaf = |l: Vec<Formula>, r: Vec<Formula>| ProofNode::leaf(Sequent::of(l, r), Rule::Id);
    let proof = ProofNode::new(
        Sequent::of(vec![p("p"), p("q")], vec![Formula::and(p("p"), p("q"))]),
        Rule::AndR,
        Params::default(),
        vec![
            ProofNode::new(
                Sequent::of(vec![p("p"), p("q")], vec![p("p")]),
                Rule::WeakenL,
                Params::default(),
                vec![leaf(vec![p("p")], vec![p("p")])],
            ),
            ProofNode::new(
                Sequent::of(vec![p("p"), p("q")], vec![p("q")]),
                Rule::WeakenL,
                Params::default(),
                vec![leaf(vec![p("q")], vec![p("q")])],
            ),
        ],
    );
    check_proof(&proof, &CalculusConfig::new(false, false, true, false), &reg).into_result().unwrap();
    let weak_off = check_proof(&proof, &CalculusConfig::new(false, false, false, false), &reg).into_result().unwrap_err();
    assert_eq!(weak_off.path, vec![0]);
    assert!(matches!(weak_off.failure, Failure::SideConditionViolated(_)));
}

#[test]
fn symmetrized_search_results_check() {
    let reg = focused_registry();
    let cfg = CalculusConfig::from_registry(&reg, true, true, true, true);
    let goal = Sequent::of(
        vec![Formula::and(a(Term::constant("T1")), a(Term::constant("T2")))],
        vec![Formula::forall("x", "D", a(Term::var("x")))],
    );
    let proof = search_proof(&goal, &cfg, &reg, 6).unwrap().proof().cloned().unwrap();
    let inv = LiteralInvolution::identity();
    let mirrored = symmetrize_proof(&proof, &inv, &cfg).unwrap();
    check_proof(&mirrored, &cfg, &reg).into_result().unwrap();
    assert_eq!(symmetrize_proof(&mirrored, &inv, &cfg).unwrap(), proof);
}

#[test]
fn exists_from_forall_in_inhabited_domain() {
    let mut reg = Registry::new();
    let half = vec![Term::outcome_of("down", 1, 2), Term::outcome_of("up", 1, 2)];
    reg.register(DomainRecord::virtual_singleton(D_PLUS, half, "top")).unwrap();
    let cfg = CalculusConfig::from_registry(&reg, true, true, true, true);
    let goal = Sequent::of(
        vec![Formula::forall("x", D_PLUS, a(Term::var("x")))],
        vec![Formula::exists("x", D_PLUS, a(Term::var("x")))],
    );
    let out = search_proof(&goal, &cfg, &reg, 6).unwrap();
    assert!(out.proof().is_some());
}
