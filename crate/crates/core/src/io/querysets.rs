//! Query point sets on disk: one `<kind>.json` file per set.

use crate::harness::{QueryKind, QueryPointSet};
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum SetError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("no query sets in {0}")]
    Empty(String),
}

fn file_name(kind: QueryKind) -> String {
    format!("{}.json", kind.as_str())
}

pub fn save_query_sets(dir: impl AsRef<Path>, sets: &[QueryPointSet]) -> Result<(), SetError> {
    let dir = dir.as_ref();
    let io = |source| SetError::Io { path: dir.display().to_string(), source };
    std::fs::create_dir_all(dir).map_err(io)?;
    for s in sets {
        let path = dir.join(file_name(s.kind));
        let mut text = serde_json::to_string_pretty(s).expect("query sets serialize");
        text.push('\n');
        std::fs::write(&path, text).map_err(|source| SetError::Io { path: path.display().to_string(), source })?;
    }
    Ok(())
}

/// Every set present in `dir`, in the fixed kind order.
pub fn load_query_sets(dir: impl AsRef<Path>) -> Result<Vec<QueryPointSet>, SetError> {
    let dir = dir.as_ref();
    let mut out = Vec::new();
    for kind in QueryKind::ALL {
        let path = dir.join(file_name(kind));
        if !path.exists() {
            continue;
        }
        let p = path.display().to_string();
        let text = std::fs::read_to_string(&path).map_err(|source| SetError::Io { path: p.clone(), source })?;
        out.push(serde_json::from_str(&text).map_err(|source| SetError::Json { path: p, source })?);
    }
    if out.is_empty() {
        return Err(SetError::Empty(dir.display().to_string()));
    }
    Ok(out)
}
