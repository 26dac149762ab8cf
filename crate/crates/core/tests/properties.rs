mod common;

use common::*;
use proptest::prelude::*;
use symlog_core::correlation::{convert, ConversionStep};
use symlog_core::corpus::FILES;
use symlog_core::duality::{
    apply_duality, symmetrize_formula, symmetrize_sequent, InvolutionKind, LiteralInvolution,
};
use symlog_core::formula::{Formula, Sequent, Slot};
use symlog_core::kernel::{check_proof, symmetrize_proof, CalculusConfig};
use symlog_core::script::{parse, parse_formula, parse_sequent};
use symlog_core::term::{Index, Term};

fn literals() -> Vec<Formula> {
    let a = |t: Term| Formula::atom("A", vec![t]);
    let x = || Formula::atom("A", vec![Term::var("x")]);
    vec![
        a(Term::outcome_of("down", 1, 1)),
        a(Term::outcome_of("up", 1, 1)),
        Formula::forall("x", "Ddown", x()),
        Formula::exists("x", "Dup", x()),
        Formula::forall("x", "Dplus", x()),
        Formula::exists("x", "Dminus", x()),
        Formula::forall("x", "Dup", x()),
        Formula::exists("x", "Ddown", x()),
    ]
}

#[test]
fn dualities_are_involutions_and_commute_on_literals() {
    for l in literals() {
        for k in [InvolutionKind::Perp, InvolutionKind::Top] {
            let once = apply_duality(&l, k).unwrap();
            assert_eq!(apply_duality(&once, k).unwrap(), l, "{k} on {l}");
        }
        let pt = apply_duality(&apply_duality(&l, InvolutionKind::Top).unwrap(), InvolutionKind::Perp).unwrap();
        let tp = apply_duality(&apply_duality(&l, InvolutionKind::Perp).unwrap(), InvolutionKind::Top).unwrap();
        assert_eq!(pt, tp, "{l}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn formula_symmetrization_is_an_involution(f in arb_formula(6)) {
        let inv = LiteralInvolution::identity();
        // Dual memberships under other dualities are fixed, so only the
        // generic tag goes round trip through plain membership.
        prop_assert_eq!(symmetrize_formula(&symmetrize_formula(&f, &inv), &inv), f);
    }

    #[test]
    fn sequent_symmetrization_is_an_involution(s in arb_sequent()) {
        let inv = LiteralInvolution::identity();
        prop_assert_eq!(symmetrize_sequent(&symmetrize_sequent(&s, &inv), &inv), s);
    }

    #[test]
    fn formulas_print_and_parse_back(f in arb_formula(8)) {
        let text = f.to_string();
        let back = parse_formula(&text);
        prop_assert_eq!(back.as_ref().ok(), Some(&f), "{}", text);
    }

    #[test]
    fn sequents_print_and_parse_back(s in arb_sequent()) {
        let text = s.to_string();
        prop_assert_eq!(parse_sequent(&text).ok(), Some(s), "{}", text);
    }

    #[test]
    fn to_comma_undoes_to_relation(
        body in arb_formula(3),
        pred in prop::sample::select(vec!["A", "B"]),
        i in 1u8..3,
        tag in arb_tag(),
        left in prop::collection::vec(arb_formula(2), 0..3),
        before in prop::collection::vec(arb_formula(2), 0..3),
    ) {
        let ai = Formula::indexed_atom(pred, Index::Const(i), vec![]);
        let first = Formula::and(ai, body.clone());
        // Only the atom carries an index; keep the body index-free.
        prop_assume!(body.index_set().is_empty());
        let second = first.reindex(&Index::Const(i), &Index::Const(i + 2));
        let mut right: Vec<Slot> = before.into_iter().map(Slot::Single).collect();
        let slot = right.len();
        right.push(Slot::corr(first, tag, second));
        let s = Sequent::new(left.into_iter().map(Slot::Single).collect(), right);
        let relational = convert(&s, &ConversionStep::to_relation(slot)).unwrap();
        let rel = relational.left.last().and_then(Slot::formula).unwrap().clone();
        prop_assert_eq!(convert(&relational, &ConversionStep::to_comma(slot, rel)).unwrap(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn mirrored_random_proofs_check(r in arb_recipe(6)) {
        let (reg, cfg) = (proof_registry(), CalculusConfig::all_flags());
        let p = build(&r);
        let report = check_proof(&p, &cfg, &reg);
        prop_assert!(report.ok, "generated proof fails: {:?}\n{:?}", report.first_failure(), p);
        let inv = LiteralInvolution::identity();
        let m = symmetrize_proof(&p, &inv, &cfg).unwrap();
        let mr = check_proof(&m, &cfg, &reg);
        prop_assert!(mr.ok, "mirror fails: {:?}", mr.first_failure());
        prop_assert_eq!(&m.conclusion, &symmetrize_sequent(&p.conclusion, &inv));
        prop_assert_eq!(symmetrize_proof(&m, &inv, &cfg).unwrap(), p);
    }

    #[test]
    fn parser_survives_mutations(
        file in 0..FILES.len(),
        edits in prop::collection::vec((any::<prop::sample::Index>(), 0u8..4, prop::char::range(' ', '~')), 1..4),
    ) {
        let mut chars: Vec<char> = FILES[file].1.chars().collect();
        for (at, kind, c) in edits {
            let n = at.index(chars.len().max(1));
            match kind {
                0 if !chars.is_empty() => { chars.remove(n.min(chars.len() - 1)); }
                1 => chars.insert(n.min(chars.len()), c),
                2 if chars.len() > 1 => {
                    let k = n.min(chars.len() - 2);
                    chars.swap(k, k + 1);
                }
                _ => if let Some(slot) = chars.get_mut(n) { *slot = c },
            }
        }
        let text: String = chars.into_iter().collect();
        if let Ok(script) = parse(&text) {
            let printed = script.to_string();
            prop_assert_eq!(parse(&printed).ok(), Some(script), "{}", printed);
        }
    }
}
