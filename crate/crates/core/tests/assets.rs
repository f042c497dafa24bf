use std::collections::BTreeSet;

use apple_core::cq::run_cases;
use apple_core::ontology::{extract_schema, load_assets, Obligation};
use apple_core::prefix::{vocab, PrefixMap};
use apple_core::query::QueryMode;
use apple_core::rules::VerdictClass;
use apple_core::turtle::{parse_turtle, serialize_turtle};
use apple_core::validate::World;
use apple_core::{KnowledgeBase, Term, Triple};

fn a(local: &str) -> Term {
    vocab::apple(local)
}

fn t(s: &str, p: &str, o: &str) -> Triple {
    let p = if p == "a" { vocab::rdf_type() } else if p == "subClassOf" { vocab::sub_class_of() } else { a(p) };
    Triple::new(a(s), p, a(o)).unwrap()
}

#[test]
fn assets_load_and_contain_the_documented_facts() {
    let assets = load_assets().unwrap();
    assert!(assets.taxonomy.contains(&t("Bioethics", "subClassOf", "AppliedEthics")));
    assert!(assets.scenario.contains(&t("Deforestation", "resolvedBy", "DeepEcology")));
    assert!(assets.scenario.contains(&t("PrescribeOpioidPainkiller", "hasConsequence", "OpioidUseDisorder")));
    assert!(assets.scenario.contains(&t("PrescribeOpioidPainkiller", "hasConsequence", "PainRelief")));
    assert_eq!(assets.rules.len(), 3);
    assert_eq!(assets.cq_manifest.len(), 10);
}

#[test]
fn asset_triple_counts_match_the_frozen_manifest() {
    let assets = load_assets().unwrap();
    let manifest: serde_json::Value = serde_json::from_str(include_str!("../assets/asset-manifest.json")).unwrap();
    assert_eq!(manifest["apple-taxonomy.ttl"]["triples"], assets.taxonomy.len());
    assert_eq!(manifest["bioethics-scenario.ttl"]["triples"], assets.scenario.len());
    let kb = KnowledgeBase::bundled().unwrap();
    assert_eq!(manifest["materialized"]["triples"], kb.materialized.len());
}

#[test]
fn taxonomy_schema_has_the_documented_axioms() {
    let assets = load_assets().unwrap();
    let schema = extract_schema(&assets.taxonomy).unwrap();
    let normative: BTreeSet<Term> = ["Consequentialism", "Deontology", "VirtueEthics"].map(a).into_iter().collect();
    assert!(schema.disjoint_sets.contains(&normative));
    assert!(schema.existential_obligations.contains(&Obligation {
        class: a("EthicalIssue"),
        property: a("resolvedBy"),
        filler: a("AppliedEthicsPhilosophy"),
    }));
    assert!(schema.inverse_of.contains(&(a("violatesEthicalPrinciple"), a("violatedBy")))
        || schema.inverse_of.contains(&(a("violatedBy"), a("violatesEthicalPrinciple"))));
    for o in &schema.existential_obligations {
        assert!(schema.declared_properties.contains(&o.property), "{}", o.property);
    }
}

#[test]
fn taxonomy_class_tree_and_individuals() {
    let assets = load_assets().unwrap();
    let schema = extract_schema(&assets.taxonomy).unwrap();
    let tree = [
        ("MetaEthics", "Ethics"),
        ("NormativeEthics", "Ethics"),
        ("AppliedEthics", "Ethics"),
        ("Consequentialism", "NormativeEthics"),
        ("Deontology", "NormativeEthics"),
        ("VirtueEthics", "NormativeEthics"),
        ("Bioethics", "AppliedEthics"),
        ("BusinessEthics", "AppliedEthics"),
        ("AcademicEthics", "AppliedEthics"),
        ("EnvironmentalEthics", "AppliedEthics"),
        ("ActiveAgent", "Agent"),
        ("PassiveAgent", "Agent"),
        ("MorallyRightAction", "Action"),
        ("MorallyWrongAction", "Action"),
        ("MorallyGreyAction", "Action"),
        ("SeverityOfConsequence", "CharacteristicOfConsequence"),
        ("UtilityOfConsequence", "CharacteristicOfConsequence"),
        ("DurationOfConsequence", "CharacteristicOfConsequence"),
    ];
    for (sub, sup) in tree {
        assert!(schema.is_subclass(&a(sub), &a(sup)), "{sub} ⊑ {sup}");
    }
    for c in [
        "Context", "Event", "Role", "Consequence", "MoralIntention", "TimeEntity", "Place", "Domain",
        "EthicalPrinciple", "EthicalIssue", "AppliedEthicsPhilosophy",
    ] {
        assert!(schema.declared_classes.contains(&a(c)), "{c}");
    }
    let nodes = assets.taxonomy.nodes();
    for i in [
        "Principlism", "Feminism", "DeepEcology", "Consent", "Deforestation", "Justice", "Nonmaleficence",
        "Beneficence", "Autonomy", "Responsibility", "Transparency", "MildConsequence", "ModerateConsequence",
        "SignificantConsequence", "GoodConsequence", "BadConsequence", "NeutralConsequence",
        "ShortTermConsequence", "LongTermConsequence",
    ] {
        assert!(nodes.contains(&a(i)), "{i}");
    }
}

#[test]
fn assets_round_trip_through_turtle() {
    let assets = load_assets().unwrap();
    let prefixes = PrefixMap::apple_default();
    for g in [&assets.taxonomy, &assets.scenario] {
        let text = serialize_turtle(g, &prefixes);
        assert_eq!(&parse_turtle(&text, &PrefixMap::new()).unwrap().graph, g);
    }
}

#[test]
fn bundled_pipeline_answers_every_cq() {
    let assets = load_assets().unwrap();
    let kb = KnowledgeBase::bundled().unwrap();
    for o in run_cases(&kb, &kb.materialized, &assets.cq_manifest) {
        assert!(o.passed, "{o:?}");
    }
}

#[test]
fn bundled_verdict_is_wrong_via_r1() {
    let assets = load_assets().unwrap();
    let kb = KnowledgeBase::bundled().unwrap();
    let verdicts = kb.classify(&assets.rules).unwrap();
    assert_eq!(verdicts.len(), 1);
    assert_eq!(verdicts[0].action, a("PrescribeOpioidPainkiller"));
    assert_eq!(verdicts[0].verdict_class, VerdictClass::MorallyWrongAction);
    assert_eq!(verdicts[0].fired_rules, ["R1"]);
}

#[test]
fn bundled_closed_world_validation_is_clean() {
    let kb = KnowledgeBase::bundled().unwrap();
    assert_eq!(kb.default_world(), World::Closed);
    let report = kb.validate(World::Closed);
    assert!(report.violations.is_empty(), "{}", report.to_json());
}

#[test]
fn spec_examples_on_bundled_data() {
    let kb = KnowledgeBase::bundled().unwrap();
    let rows = kb.materialized.match_pattern(Some(&a("Doctor")), Some(&a("doesAction")), None);
    assert_eq!(rows, [t("Doctor", "doesAction", "PrescribeOpioidPainkiller")]);
    assert!(kb.materialized.contains(&t("Doctor", "isParticipantIn", "DentalSurgeryAftercare")));
    assert!(kb.materialized.contains(&t("OpioidUseDisorder", "hasCharacteristicOfConsequence", "SignificantConsequence")));
    let agents = kb.query(QueryMode::Instances, "Agent").unwrap();
    assert_eq!(agents.answers(None), [a("Doctor"), a("Patient")].into_iter().collect());
    let ethics = kb.query(QueryMode::Classes, "Ethics").unwrap().answers(None);
    assert!(ethics.contains(&a("Bioethics")) && ethics.contains(&a("MetaEthics")));
    assert!(!ethics.contains(&a("Ethics")));
    let sel = kb.query(QueryMode::Select, "?x doesAction ?a").unwrap();
    assert_eq!(sel.len(), 1);
}
