use std::fmt::Display;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use apple_core::cq::{parse_manifest, render_table, run_cases};
use apple_core::ontology::{AssetTexts, NameResolver, Vocabulary, SCENARIO_FILE, TAXONOMY_FILE};
use apple_core::query::QueryMode;
use apple_core::rules::{parse_rules, Rule, RuleError};
use apple_core::turtle::serialize_turtle;
use apple_core::{Graph, KnowledgeBase, PipelineError, SourceDoc};

use crate::{Command, Format, InputArgs};

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARSE: u8 = 1;
pub const EXIT_CQ_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_QUERY: u8 = 3;
pub const EXIT_CLASH: u8 = 4;

/// An error plus the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

trait OrExit<T> {
    fn or_exit(self, code: u8) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> OrExit<T> for Result<T, E> {
    fn or_exit(self, code: u8) -> Result<T, Failure> {
        self.map_err(|e| Failure { code, error: e.into() })
    }
}

fn fail<T>(code: u8, msg: impl Display) -> Result<T, Failure> {
    Err(Failure {
        code,
        error: anyhow!("{msg}"),
    })
}

pub fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Reason { io, rules } => reason(&io, rules.as_deref()),
        Command::Classify { io, rules } => classify(&io, rules.as_deref()),
        Command::Query { io, mode, rules, query } => run_query(&io, mode.into(), rules.as_deref(), &query),
        Command::Validate { io, world } => {
            let kb = load(&io)?;
            let world = world.map(Into::into).unwrap_or_else(|| kb.default_world());
            let report = kb.validate(world);
            emit(&io, &report.to_json(), &[Format::Json])?;
            Ok(if report.errors() > 0 { EXIT_CLASH } else { EXIT_OK })
        }
        Command::Cq { io, manifest, seed } => cq(&io, manifest.as_deref(), seed),
    }
}

fn assets() -> Result<AssetTexts, Failure> {
    AssetTexts::locate().or_exit(EXIT_CONFIG)
}

/// Bundled documents first (when asked for, or when there are no `-i`
/// files), then the inputs in command-line order.
fn load(io: &InputArgs) -> Result<KnowledgeBase, Failure> {
    let mut docs = Vec::new();
    if io.bundled || io.input.is_empty() {
        let texts = assets()?;
        docs.push(SourceDoc::new(TAXONOMY_FILE, texts.taxonomy));
        docs.push(SourceDoc::new(SCENARIO_FILE, texts.scenario));
    }
    for path in &io.input {
        let text = read(path)?;
        docs.push(SourceDoc::new(path.display().to_string(), text));
    }
    let kb = KnowledgeBase::build(&docs).map_err(|e| match e {
        PipelineError::Parse { .. } | PipelineError::Schema(_) => Failure {
            code: EXIT_PARSE,
            error: e.into(),
        },
    })?;
    for (name, w) in &kb.warnings {
        eprintln!("{name}:{w}");
    }
    Ok(kb)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .or_exit(EXIT_CONFIG)
}

/// Rule names resolve against the loaded vocabulary plus the bundled
/// taxonomy, so a scenario file can be classified on its own.
fn load_rules(kb: &KnowledgeBase, path: Option<&Path>) -> Result<Vec<Rule>, Failure> {
    let (name, text) = match path {
        Some(p) => (p.display().to_string(), read(p)?),
        None => ("bundled rules".to_string(), assets()?.rules),
    };
    let mut vocabulary = kb.vocabulary();
    if let Ok(taxonomy) = KnowledgeBase::build(&[SourceDoc::new(TAXONOMY_FILE, AssetTexts::bundled().taxonomy)]) {
        merge(&mut vocabulary, taxonomy.vocabulary());
    }
    let names = NameResolver {
        prefixes: kb.prefixes.clone(),
        ..NameResolver::with_vocabulary(vocabulary)
    };
    parse_rules(&text, &names).map_err(|e: RuleError| Failure {
        code: EXIT_CONFIG,
        error: anyhow!("{name}: {e}"),
    })
}

fn merge(into: &mut Vocabulary, from: Vocabulary) {
    into.classes.extend(from.classes);
    into.properties.extend(from.properties);
    into.nodes.extend(from.nodes);
}

fn reason(io: &InputArgs, rules: Option<&Path>) -> Result<u8, Failure> {
    let kb = load(io)?;
    let graph = match rules {
        Some(path) => kb.reasoned(&load_rules(&kb, Some(path))?),
        None => kb.materialized.clone(),
    };
    emit(io, &turtle(&graph, &kb), &[Format::Turtle])?;
    Ok(EXIT_OK)
}

fn turtle(graph: &Graph, kb: &KnowledgeBase) -> String {
    if graph.is_empty() {
        String::new()
    } else {
        serialize_turtle(graph, &kb.prefixes)
    }
}

fn classify(io: &InputArgs, rules: Option<&Path>) -> Result<u8, Failure> {
    let kb = load(io)?;
    let rules = load_rules(&kb, rules)?;
    let verdicts = match kb.classify(&rules) {
        Ok(v) => v,
        Err(e @ RuleError::ConflictingVerdicts { .. }) => return fail(EXIT_CLASH, e),
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    let text = match format(io, &[Format::Json, Format::Tsv])? {
        Format::Tsv => {
            let mut out = String::from("action\tverdict\trules\n");
            for v in &verdicts {
                out.push_str(&format!("{}\t{}\t{}\n", v.action.plain(), v.verdict_class.name(), v.fired_rules.join(",")));
            }
            out
        }
        _ => json(&verdicts)?,
    };
    emit(io, &text, &[Format::Json, Format::Tsv])?;
    Ok(EXIT_OK)
}

fn run_query(io: &InputArgs, mode: QueryMode, rules: Option<&Path>, text: &str) -> Result<u8, Failure> {
    let kb = load(io)?;
    let graph = match rules {
        Some(path) => kb.reasoned(&load_rules(&kb, Some(path))?),
        None => kb.materialized.clone(),
    };
    let results = kb
        .query_over(&graph, mode, text)
        .map_err(|e| anyhow!("query {e}"))
        .or_exit(EXIT_QUERY)?;
    let out = match format(io, &[Format::Json, Format::Tsv])? {
        Format::Tsv => results.to_tsv(),
        _ => results.to_json(),
    };
    emit(io, &out, &[Format::Json, Format::Tsv])?;
    Ok(EXIT_OK)
}

fn cq(io: &InputArgs, manifest: Option<&Path>, seed: Option<u64>) -> Result<u8, Failure> {
    let kb = load(io)?;
    let (name, text) = match manifest {
        Some(p) => (p.display().to_string(), read(p)?),
        None => ("bundled manifest".to_string(), assets()?.cq_manifest),
    };
    let mut cases = parse_manifest(&text)
        .map_err(|e| anyhow!("{name}: {e}"))
        .or_exit(EXIT_CONFIG)?;
    if let Some(seed) = seed {
        cases.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let outcomes = run_cases(&kb, &kb.materialized, &cases);
    let out = match io.format {
        Some(Format::Json) => json(&outcomes)?,
        Some(Format::Turtle) => return fail(EXIT_CONFIG, "cq output is a table, json or tsv"),
        Some(Format::Tsv) => {
            let mut out = String::from("id\tstatus\tanswers\n");
            for o in &outcomes {
                let status = if o.passed { "pass" } else { "fail" };
                out.push_str(&format!("{}\t{status}\t{}\n", o.id, o.actual.join(" ")));
            }
            out
        }
        _ => render_table(&outcomes, |iri| match kb.prefixes.compact(iri) {
            Some((p, local)) if p == "apple" => local,
            Some((p, local)) => format!("{p}:{local}"),
            None => iri.to_string(),
        }),
    };
    emit(io, &out, &[Format::Json, Format::Tsv])?;
    Ok(if outcomes.iter().all(|o| o.passed) { EXIT_OK } else { EXIT_CQ_FAILED })
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).or_exit(EXIT_CONFIG)?;
    s.push('\n');
    Ok(s)
}

/// The requested format, or the first allowed one.
fn format(io: &InputArgs, allowed: &[Format]) -> Result<Format, Failure> {
    match io.format {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => fail(EXIT_CONFIG, format!("format {f:?} is not available for this command").to_lowercase()),
    }
}

fn emit(io: &InputArgs, text: &str, allowed: &[Format]) -> Result<(), Failure> {
    format(io, allowed)?;
    match &io.output {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .or_exit(EXIT_CONFIG)
}
