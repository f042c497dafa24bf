mod oracle;

use std::collections::BTreeSet;

use apple_core::materialize::{materialize, EntailmentRegime};
use apple_core::ontology::{extract_schema, load_assets, AssetTexts, ClassExpression};
use apple_core::prefix::vocab;
use apple_core::query::{retrieve_instances, select, PatternTerm, QueryMode, TriplePattern};
use apple_core::rules::{evaluate_rules, replay, RuleError};
use apple_core::turtle::{parse_turtle, serialize_turtle};
use apple_core::validate::World;
use apple_core::{Graph, KnowledgeBase, PrefixMap, SourceDoc, Term, Triple};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oracle::{random_world, RandomWorld};

fn world(seed: u64) -> (ChaCha8Rng, RandomWorld) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = random_world(&mut rng);
    (rng, w)
}

fn closure(g: &Graph) -> Graph {
    materialize(g, &extract_schema(g).unwrap(), &EntailmentRegime::default())
}

fn prefixes() -> PrefixMap {
    let mut p = PrefixMap::apple_default();
    p.insert("r", oracle::NS);
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn materialization_matches_the_naive_fixpoint(seed in any::<u64>()) {
        let (_, w) = world(seed);
        prop_assert_eq!(closure(&w.graph), oracle::naive_materialize(&w.graph));
    }

    #[test]
    fn materialization_is_monotone_and_idempotent(seed in any::<u64>()) {
        let (mut rng, w) = world(seed);
        let sub: Graph = w.graph.iter().filter(|_| rng.gen_bool(0.6)).collect();
        let full = closure(&w.graph);
        prop_assert!(closure(&sub).is_subset_of(&full));
        prop_assert!(w.graph.is_subset_of(&full));
        let schema = extract_schema(&w.graph).unwrap();
        prop_assert_eq!(materialize(&full, &schema, &EntailmentRegime::default()), full.clone());
    }

    #[test]
    fn document_order_does_not_matter(seed in any::<u64>()) {
        let (mut rng, w) = world(seed);
        let mut triples: Vec<Triple> = w.graph.iter().collect();
        triples.shuffle(&mut rng);
        let cut = rng.gen_range(0..=triples.len());
        let halves: Vec<SourceDoc> = [&triples[..cut], &triples[cut..]]
            .iter()
            .enumerate()
            .map(|(i, part)| {
                let g: Graph = part.iter().cloned().collect();
                SourceDoc::new(format!("part{i}"), serialize_turtle(&g, &prefixes()))
            })
            .collect();
        let ab = KnowledgeBase::build(&halves).unwrap();
        let ba = KnowledgeBase::build(&[halves[1].clone(), halves[0].clone()]).unwrap();
        prop_assert_eq!(&ab.asserted, &w.graph);
        prop_assert_eq!(&ab.materialized, &ba.materialized);
        prop_assert_eq!(&ab.schema, &ba.schema);
    }

    #[test]
    fn schema_extraction_ignores_insertion_order(seed in any::<u64>()) {
        let (mut rng, w) = world(seed);
        let mut triples: Vec<Triple> = w.graph.iter().collect();
        triples.shuffle(&mut rng);
        let mut g = Graph::new();
        for t in triples {
            g.insert(t).unwrap();
        }
        prop_assert_eq!(extract_schema(&g).unwrap(), extract_schema(&w.graph).unwrap());
    }

    #[test]
    fn retrieval_matches_brute_force_and_grows_with_entailment(seed in any::<u64>()) {
        let (mut rng, w) = world(seed);
        let full = closure(&w.graph);
        for _ in 0..4 {
            let e = oracle::random_expression(&mut rng, &w, 3);
            let raw = retrieve_instances(&e, &w.graph);
            let entailed = retrieve_instances(&e, &full);
            prop_assert_eq!(&entailed, &oracle::brute_force_instances(&e, &full), "{:?}", e);
            prop_assert!(raw.is_subset(&entailed), "{:?}", e);
        }
    }

    #[test]
    fn rule_evaluation_matches_grounding(seed in any::<u64>()) {
        let (mut rng, w) = world(seed);
        let rules = oracle::random_rules(&mut rng, &w);
        let full = closure(&w.graph);
        prop_assert_eq!(evaluate_rules(&full, &rules), oracle::grounding_evaluate(&full, &rules));
    }

    #[test]
    fn select_matches_nested_loops(seed in any::<u64>()) {
        let (mut rng, w) = world(seed);
        let g = closure(&w.graph);
        let triples: Vec<Triple> = g.iter().collect();
        prop_assume!(!triples.is_empty());
        // A chain ?v0 p ?v1 . ?v1 q ?v2 ... keeps the pattern connected.
        let n = rng.gen_range(1..=3);
        let mut raw = Vec::new();
        let mut patterns = Vec::new();
        for i in 0..n {
            let pick = triples.choose(&mut rng).unwrap();
            let s = format!("v{i}");
            let o: Result<Term, String> = if rng.gen_bool(0.2) { Ok(pick.object.clone()) } else { Err(format!("v{}", i + 1)) };
            raw.push([Err(s.clone()), Ok(pick.predicate.clone()), o.clone()]);
            let slot = |x: Result<Term, String>| match x {
                Ok(t) => PatternTerm::Const(t),
                Err(v) => PatternTerm::Var(v),
            };
            patterns.push(TriplePattern {
                subject: PatternTerm::Var(s),
                predicate: PatternTerm::Const(pick.predicate.clone()),
                object: slot(o),
            });
        }
        let got: BTreeSet<_> = select(&patterns, &g).into_iter().collect();
        prop_assert_eq!(got, oracle::nested_loop_select(&raw, &g));
    }

    #[test]
    fn turtle_round_trips_random_graphs(seed in any::<u64>()) {
        let (_, w) = world(seed);
        let text = serialize_turtle(&w.graph, &prefixes());
        prop_assert_eq!(&parse_turtle(&text, &PrefixMap::new()).unwrap().graph, &w.graph);
    }

    #[test]
    fn turtle_ignores_extra_whitespace(seed in any::<u64>(), pad in "[ \t\n]{1,4}") {
        let (_, w) = world(seed);
        let text = serialize_turtle(&w.graph, &prefixes());
        let spaced = text.replace(" ;", &format!("{pad};")).replace(" .\n", &format!("{pad}.{pad}\n"));
        prop_assert_eq!(&parse_turtle(&spaced, &PrefixMap::new()).unwrap().graph, &w.graph);
    }

    #[test]
    fn turtle_errors_point_at_the_broken_line(lines in 0usize..30) {
        let mut text = String::from("@prefix e: <http://e/> .\n");
        for i in 0..lines {
            text.push_str(&format!("e:s{i} e:p e:o{i} .\n"));
        }
        text.push_str("e:bad e:p .\n");
        let err = parse_turtle(&text, &PrefixMap::new()).unwrap_err();
        prop_assert_eq!(err.line, lines + 2);
    }
}

/// Perturbs the bundled scenario by dropping some of the action's triples and
/// adding principle links to a second action.
fn perturbed_scenario(rng: &mut ChaCha8Rng) -> String {
    let assets = load_assets().unwrap();
    let action = vocab::apple("PrescribeOpioidPainkiller");
    let mut g: Graph = assets
        .scenario
        .iter()
        .filter(|t| !(t.subject == action || t.subject.value().ends_with("Disorder")) || rng.gen_bool(0.7))
        .collect();
    let other = vocab::apple("ReferToSpecialist");
    g.insert(Triple::new(other.clone(), vocab::rdf_type(), vocab::apple("Action")).unwrap()).unwrap();
    for (p, principle) in [
        ("upholdsEthicalPrinciple", "Autonomy"),
        ("violatesEthicalPrinciple", "Justice"),
        ("upholdsEthicalPrinciple", "Beneficence"),
    ] {
        if rng.gen_bool(0.5) {
            g.insert(Triple::new(other.clone(), vocab::apple(p), vocab::apple(principle)).unwrap()).unwrap();
        }
    }
    serialize_turtle(&g, &PrefixMap::apple_default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn at_most_one_verdict_and_firings_replay(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let texts = AssetTexts { scenario: perturbed_scenario(&mut rng), ..AssetTexts::bundled() };
        let kb = KnowledgeBase::from_assets(&texts).unwrap();
        let rules = load_assets().unwrap().rules;
        let verdicts = match kb.classify(&rules) {
            Ok(v) => v,
            Err(e @ RuleError::ConflictingVerdicts { .. }) => return Err(TestCaseError::fail(e.to_string())),
            Err(e) => panic!("{e}"),
        };
        let actions: BTreeSet<&Term> = verdicts.iter().map(|v| &v.action).collect();
        prop_assert_eq!(actions.len(), verdicts.len());
        let evaluated = evaluate_rules(&kb.materialized, &rules);
        for v in &verdicts {
            let head = Triple::new(v.action.clone(), vocab::rdf_type(), v.verdict_class.iri()).unwrap();
            prop_assert!(v.asserted || !v.firings.is_empty());
            for f in &v.firings {
                let rule = rules.iter().find(|r| r.id == f.rule).unwrap();
                prop_assert!(replay(&evaluated, rule, &f.bindings, &head));
            }
        }
    }

    #[test]
    fn reports_and_answers_are_deterministic(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let texts = AssetTexts { scenario: perturbed_scenario(&mut rng), ..AssetTexts::bundled() };
        let a = KnowledgeBase::from_assets(&texts).unwrap();
        let b = KnowledgeBase::from_assets(&texts).unwrap();
        for world in [World::Open, World::Closed] {
            prop_assert_eq!(a.validate(world).to_json(), b.validate(world).to_json());
        }
        let q = "Action and (hasConsequence some Consequence)";
        prop_assert_eq!(
            a.query(QueryMode::Instances, q).unwrap().to_json(),
            b.query(QueryMode::Instances, q).unwrap().to_json()
        );
    }
}

#[test]
fn aliases_answer_like_canonical_names() {
    let kb = KnowledgeBase::bundled().unwrap();
    let pairs = [
        ("violatesEthicalPrinciples some EthicalPrinciples", "violatesEthicalPrinciple some EthicalPrinciple"),
        ("upholdsEthicalPrinciples some Thing", "upholdsEthicalPrinciple some EthicalPrinciple"),
        ("inverse violatesEthicalPrinciples some Action", "inverse violatesEthicalPrinciple some Action"),
    ];
    for (alias, canon) in pairs {
        let x = kb.query(QueryMode::Instances, alias).unwrap();
        let y = kb.query(QueryMode::Instances, canon).unwrap();
        assert!(!y.is_empty(), "{canon}");
        assert_eq!(x, y, "{alias}");
    }
}

#[test]
fn random_expressions_are_well_formed() {
    let (mut rng, w) = world(7);
    for _ in 0..200 {
        let e = oracle::random_expression(&mut rng, &w, 3);
        assert!(e.is_well_formed() || matches!(e, ClassExpression::Anything), "{e:?}");
    }
}

#[test]
fn generators_exercise_the_interesting_cases() {
    let (mut derived, mut entailed, mut negated, mut literal_hits, mut nonempty) = (0, 0, 0, 0, 0);
    for seed in 0..200 {
        let (mut rng, w) = world(seed);
        let full = closure(&w.graph);
        entailed += usize::from(full.len() > w.graph.len());
        literal_hits += usize::from(full.iter().any(|t| t.object.is_literal()));
        let rules = oracle::random_rules(&mut rng, &w);
        negated += usize::from(rules.iter().any(|r| r.negative_body().next().is_some()));
        derived += usize::from(evaluate_rules(&full, &rules).len() > full.len());
        let e = oracle::random_expression(&mut rng, &w, 3);
        nonempty += usize::from(!retrieve_instances(&e, &full).is_empty());
    }
    assert!(entailed > 100, "{entailed}");
    assert!(derived > 50, "{derived}");
    assert!(negated > 50, "{negated}");
    assert!(literal_hits > 30, "{literal_hits}");
    assert!(nonempty > 50, "{nonempty}");
}
