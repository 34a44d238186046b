//! Field bundles and extensions shipped with the library.

use crate::error::{Error, Result};
use crate::numfield::{Bundle, ExtensionSpec};

pub const FIELDS: &[(&str, &str)] = &[
    ("qzeta3", include_str!("../../../catalog/qzeta3.json")),
    ("qzeta9", include_str!("../../../catalog/qzeta9.json")),
    ("qzeta5", include_str!("../../../catalog/qzeta5.json")),
    ("q257", include_str!("../../../catalog/q257.json")),
    ("q13", include_str!("../../../catalog/q13.json")),
    ("e21", include_str!("../../../catalog/e21.json")),
];

pub const EXTENSIONS: &[(&str, &str)] = &[
    ("layer_zeta9", include_str!("../../../catalog/layer_zeta9.json")),
    ("layer_e21", include_str!("../../../catalog/layer_e21.json")),
    ("rad7", include_str!("../../../catalog/rad7.json")),
];

fn strip_name(s: &str) -> &str {
    let base = s.rsplit('/').next().unwrap_or(s);
    base.strip_suffix(".json").unwrap_or(base)
}

fn lookup<'a>(table: &'a [(&str, &str)], key: &str) -> Option<&'a str> {
    let k = strip_name(key).to_ascii_lowercase().replace(['-', '_'], "");
    table.iter().find(|(n, _)| n.replace('_', "") == k).map(|(_, t)| *t)
}

/// A bundle by catalog name (`qzeta3`, `Qzeta3.json`, ...) or by file path.
pub fn load_bundle(key: &str) -> Result<Bundle> {
    if std::path::Path::new(key).is_file() {
        return Bundle::from_json(&std::fs::read_to_string(key)?);
    }
    match lookup(FIELDS, key) {
        Some(t) => Bundle::from_json(t),
        None => Err(Error::BadInput(format!("no field bundle {key:?} on disk or in the catalog"))),
    }
}

pub fn load_extension(key: &str) -> Result<ExtensionSpec> {
    if std::path::Path::new(key).is_file() {
        return ExtensionSpec::from_json(&std::fs::read_to_string(key)?);
    }
    match lookup(EXTENSIONS, key) {
        Some(t) => ExtensionSpec::from_json(t),
        None => Err(Error::BadInput(format!("no extension {key:?} on disk or in the catalog"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        assert!(load_bundle("Qzeta3.json").is_ok());
        assert!(load_bundle("q257").is_ok());
        assert!(load_extension("layer-zeta9").is_ok());
        assert!(matches!(load_bundle("nope"), Err(Error::BadInput(_))));
    }
}
