//! Browser bindings: classify, query and validate an edited scenario
//! against the bundled taxonomy. Every call returns a JSON string.

use apple_core::ontology::{load_assets, AssetTexts};
use apple_core::query::QueryMode;
use apple_core::validate::World;
use apple_core::KnowledgeBase;
use wasm_bindgen::prelude::*;

fn knowledge_base(scenario: &str) -> Result<KnowledgeBase, String> {
    let texts = AssetTexts {
        scenario: scenario.to_string(),
        ..AssetTexts::bundled()
    };
    KnowledgeBase::from_assets(&texts).map_err(|e| e.to_string())
}

pub fn classify_json(scenario: &str) -> Result<String, String> {
    let kb = knowledge_base(scenario)?;
    let rules = load_assets().map_err(|e| e.to_string())?.rules;
    let verdicts = kb.classify(&rules).map_err(|e| e.to_string())?;
    serde_json::to_string_pretty(&verdicts).map_err(|e| e.to_string())
}

pub fn query_json(scenario: &str, mode: &str, query: &str) -> Result<String, String> {
    let kb = knowledge_base(scenario)?;
    let mode: QueryMode = mode.parse()?;
    let results = kb.query(mode, query).map_err(|e| format!("query {e}"))?;
    Ok(results.to_json())
}

/// `world` is "open", "closed" or empty for the default.
pub fn validate_json(scenario: &str, world: &str) -> Result<String, String> {
    let kb = knowledge_base(scenario)?;
    let world = match world {
        "" => kb.default_world(),
        w => w.parse::<World>()?,
    };
    Ok(kb.validate(world).to_json())
}

#[wasm_bindgen(js_name = bundledScenario)]
pub fn bundled_scenario() -> String {
    AssetTexts::bundled().scenario
}

#[wasm_bindgen]
pub fn classify(scenario: &str) -> Result<String, JsError> {
    classify_json(scenario).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn query(scenario: &str, mode: &str, text: &str) -> Result<String, JsError> {
    query_json(scenario, mode, text).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn validate(scenario: &str, world: &str) -> Result<String, JsError> {
    validate_json(scenario, world).map_err(|e| JsError::new(&e))
}
