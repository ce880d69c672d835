//! On-disk cache of threshold tables, keyed by order, count and method and
//! guarded by a SHA-256 of the table payload.

use std::fs;
use std::path::{Path, PathBuf};

use screened_dirac::par::Execution;
use screened_dirac::roots::{build_root_tables_with, RootMethod, RootTables};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    truncation_order: usize,
    count: usize,
    method: RootMethod,
    sha256: String,
    tables: String,
}

fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn method_name(method: RootMethod) -> &'static str {
    match method {
        RootMethod::Ikebe => "ikebe",
        RootMethod::Bisection => "bisection",
    }
}

pub fn cache_path(dir: &Path, order: usize, count: usize, method: RootMethod) -> PathBuf {
    dir.join(format!("root_tables_order{order}_count{count}_{}.json", method_name(method)))
}

fn load(path: &Path, order: usize, count: usize, method: RootMethod) -> Option<RootTables> {
    let text = fs::read_to_string(path).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    let fits = file.version == CACHE_VERSION
        && file.truncation_order == order
        && file.count == count
        && file.method == method
        && file.sha256 == digest(&file.tables);
    if !fits {
        return None;
    }
    RootTables::from_json(&file.tables).ok()
}

/// Cached tables if present and intact, otherwise built and stored.
pub fn root_tables(
    dir: &Path,
    exec: Execution,
    count: usize,
    method: RootMethod,
    order: usize,
) -> Result<RootTables, CliError> {
    let path = cache_path(dir, order, count, method);
    if let Some(t) = load(&path, order, count, method) {
        return Ok(t);
    }
    let tables = build_root_tables_with(exec, count, method, order)?;
    let payload = tables.to_json();
    let file = CacheFile {
        version: CACHE_VERSION,
        truncation_order: order,
        count,
        method,
        sha256: digest(&payload),
        tables: payload,
    };
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let tmp = path.with_extension("json.tmp");
    let text = serde_json::to_string_pretty(&file).expect("cache serializes");
    fs::write(&tmp, text).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, &path).map_err(|e| CliError::io(&path, e))?;
    Ok(tables)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_hex_sha256() {
        assert_eq!(digest(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn corrupted_cache_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let a = root_tables(dir.path(), Execution::Sequential, 2, RootMethod::Ikebe, 40).unwrap();
        let path = cache_path(dir.path(), 40, 2, RootMethod::Ikebe);
        assert!(load(&path, 40, 2, RootMethod::Ikebe).is_some());
        assert!(load(&path, 41, 2, RootMethod::Ikebe).is_none());

        let text = fs::read_to_string(&path).unwrap().replacen("1.2308", "1.2309", 1);
        fs::write(&path, text).unwrap();
        assert!(load(&path, 40, 2, RootMethod::Ikebe).is_none());
        let b = root_tables(dir.path(), Execution::Sequential, 2, RootMethod::Ikebe, 40).unwrap();
        assert_eq!(a, b);
        assert!(load(&path, 40, 2, RootMethod::Ikebe).is_some());
    }
}
