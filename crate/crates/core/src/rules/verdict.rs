use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::graph::Graph;
use crate::prefix::vocab;
use crate::rules::eval::instantiate;
use crate::rules::{evaluate_rules, match_body, Atom, AtomTerm, Bindings, Rule, RuleError};
use crate::term::{Term, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum VerdictClass {
    MorallyRightAction,
    MorallyWrongAction,
    MorallyGreyAction,
}

impl VerdictClass {
    pub const ALL: [VerdictClass; 3] = [
        VerdictClass::MorallyRightAction,
        VerdictClass::MorallyWrongAction,
        VerdictClass::MorallyGreyAction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VerdictClass::MorallyRightAction => "MorallyRightAction",
            VerdictClass::MorallyWrongAction => "MorallyWrongAction",
            VerdictClass::MorallyGreyAction => "MorallyGreyAction",
        }
    }

    pub fn iri(self) -> Term {
        vocab::apple(self.name())
    }
}

/// One rule application that derived a verdict.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Firing {
    pub rule: String,
    pub bindings: BTreeMap<String, Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Intention {
    pub agent: Term,
    pub intention: Term,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub action: Term,
    pub verdict_class: VerdictClass,
    /// Ids of the rules with at least one firing, in rule-file order.
    pub fired_rules: Vec<String>,
    pub firings: Vec<Firing>,
    /// The verdict type was already present in the input.
    pub asserted: bool,
    /// Intentions of the agents doing the action. Reported, not used by the shipped rules.
    pub intentions: Vec<Intention>,
}

/// Evaluates `rules` over `graph` and reports a verdict for every action
/// that upholds or violates some principle and ends up in a verdict class.
/// Actions no rule classifies are left out. The result is sorted by action.
pub fn classify_actions(graph: &Graph, rules: &[Rule]) -> Result<Vec<Verdict>, RuleError> {
    let evaluated = evaluate_rules(graph, rules);
    collect_verdicts(graph, &evaluated, rules)
}

/// Verdicts read off an already evaluated graph.
pub fn collect_verdicts(input: &Graph, evaluated: &Graph, rules: &[Rule]) -> Result<Vec<Verdict>, RuleError> {
    let rdf_type = vocab::rdf_type();
    let mut actions: BTreeSet<Term> = BTreeSet::new();
    for p in ["upholdsEthicalPrinciple", "violatesEthicalPrinciple"] {
        actions.extend(evaluated.pairs(&vocab::apple(p)).map(|(s, _)| s.clone()));
    }

    let mut verdicts = Vec::new();
    for action in actions {
        let classes: Vec<VerdictClass> = VerdictClass::ALL
            .into_iter()
            .filter(|c| evaluated.contains_terms(&action, &rdf_type, &c.iri()))
            .collect();
        let verdict_class = match classes.as_slice() {
            [] => continue,
            [one] => *one,
            many => {
                let mut names: Vec<String> = many.iter().map(|c| c.name().to_string()).collect();
                names.sort();
                return Err(RuleError::ConflictingVerdicts {
                    action: action.plain(),
                    classes: names,
                });
            }
        };
        let head = Triple {
            subject: action.clone(),
            predicate: rdf_type.clone(),
            object: verdict_class.iri(),
        };
        let firings = firings_for(evaluated, rules, &head);
        let mut fired_rules: Vec<String> = Vec::new();
        for rule in rules {
            if firings.iter().any(|f| f.rule == rule.id) {
                fired_rules.push(rule.id.clone());
            }
        }
        let mut intentions = Vec::new();
        for agent in evaluated.subjects(&vocab::apple("doesAction"), &action) {
            for intention in evaluated.objects(agent, &vocab::apple("hasMoralIntention")) {
                intentions.push(Intention {
                    agent: agent.clone(),
                    intention: intention.clone(),
                });
            }
        }
        intentions.sort();
        verdicts.push(Verdict {
            asserted: input.contains(&head),
            action,
            verdict_class,
            fired_rules,
            firings,
            intentions,
        });
    }
    Ok(verdicts)
}

/// Rule applications in `evaluated` whose head includes `head`.
pub fn firings_for(evaluated: &Graph, rules: &[Rule], head: &Triple) -> Vec<Firing> {
    let mut out = BTreeSet::new();
    for rule in rules {
        let derives = rule.head.iter().any(|h| match h {
            Atom::Class { class, .. } => head.predicate == vocab::rdf_type() && *class == head.object,
            Atom::Property { property, .. } => *property == head.predicate,
        });
        if !derives {
            continue;
        }
        for b in match_body(evaluated, &rule.body) {
            if instantiate(rule, &b).contains(head) {
                out.insert(Firing {
                    rule: rule.id.clone(),
                    bindings: b,
                });
            }
        }
    }
    out.into_iter().collect()
}

/// Checks a firing against `graph`: the bindings satisfy the body and yield
/// `head`. Used to audit provenance.
pub fn replay(graph: &Graph, rule: &Rule, bindings: &Bindings, head: &Triple) -> bool {
    let ground = |t: &AtomTerm| match t {
        AtomTerm::Var(v) => bindings.get(v).cloned().map(AtomTerm::Const),
        other => Some(other.clone()),
    };
    let holds = |atom: &Atom| -> Option<bool> {
        let (s, p, o) = atom.as_pattern();
        let s = ground(s)?;
        let o = ground(&o)?;
        let slot = |t: &AtomTerm| match t {
            AtomTerm::Const(c) => Some(c.clone()),
            _ => None,
        };
        Some(!graph.match_pattern(slot(&s).as_ref(), Some(&p), slot(&o).as_ref()).is_empty())
    };
    for b in &rule.body {
        match holds(&b.atom) {
            Some(found) if found != b.negated => {}
            _ => return false,
        }
    }
    instantiate(rule, bindings).contains(head)
}
