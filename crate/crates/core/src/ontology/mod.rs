//! Schema view of a graph and the bundled assets.

mod assets;
mod expr;
mod names;
mod schema;

pub use assets::{
    load_assets, AppleAssets, AssetError, AssetTexts, ASSET_DIR_ENV, MANIFEST_FILE, RULES_FILE, SCENARIO_FILE, TAXONOMY_FILE,
};
pub use expr::{ClassExpression, PropertyPath};
pub use names::{canonical, NameKind, NameResolver, Vocabulary, ALIASES};
pub use schema::{extract_schema, Obligation, SchemaError, SchemaIndex};
