//! JSON documents on disk: catalogs and provider exports.

use std::path::{Path, PathBuf};

use crs_core::catalog::ingest::{GoogleRecord, SourceKind, SourceRecord, YelpRecord, ZomatoRecord};
use crs_core::catalog::Catalog;
use crs_core::assets;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// `field` is the JSON path of the offending value, `.` for the root.
    #[error("{path}: at `{field}`: {message}")]
    Decode {
        path: PathBuf,
        field: String,
        message: String,
    },
    #[error("{path}: unknown source `{source_tag}` (expected google, yelp or zomato)")]
    UnknownSource { path: PathBuf, source_tag: String },
}

pub fn read(path: &Path) -> Result<String, DataError> {
    std::fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write(path: &Path, contents: &str) -> Result<(), DataError> {
    let io = |source| DataError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    std::fs::write(path, contents).map_err(io)
}

/// Decode JSON, reporting the path to the first bad value.
pub fn decode<T: DeserializeOwned>(src: &str, path: &Path) -> Result<T, DataError> {
    let de = &mut serde_json::Deserializer::from_str(src);
    serde_path_to_error::deserialize(de).map_err(|e| DataError::Decode {
        path: path.to_path_buf(),
        field: e.path().to_string(),
        message: e.into_inner().to_string(),
    })
}

pub fn load_catalog(path: Option<&Path>) -> Result<Catalog, DataError> {
    match path {
        Some(p) => decode(&read(p)?, p),
        None => decode(assets::FIXTURE_CATALOG_JSON, Path::new("<fixture>")),
    }
}

pub fn catalog_json(catalog: &Catalog) -> String {
    let mut s = serde_json::to_string_pretty(catalog).expect("catalog serializes");
    s.push('\n');
    s
}

/// An export file: `{"source": "yelp", "records": [...]}`.
#[derive(Debug, Deserialize, Serialize)]
struct Export {
    source: String,
    records: Vec<serde_json::Value>,
}

/// Read one export file into tagged records.
pub fn load_export(path: &Path) -> Result<Vec<SourceRecord>, DataError> {
    let export: Export = decode(&read(path)?, path)?;
    let kind = SourceKind::parse(&export.source).ok_or_else(|| DataError::UnknownSource {
        path: path.to_path_buf(),
        source_tag: export.source.clone(),
    })?;
    export
        .records
        .into_iter()
        .enumerate()
        .map(|(i, value)| {
            let err = |e: serde_path_to_error::Error<serde_json::Error>| DataError::Decode {
                path: path.to_path_buf(),
                field: format!("records[{i}].{}", e.path()),
                message: e.into_inner().to_string(),
            };
            Ok(match kind {
                SourceKind::Google => SourceRecord::Google(from_value::<GoogleRecord>(value).map_err(err)?),
                SourceKind::Yelp => SourceRecord::Yelp(from_value::<YelpRecord>(value).map_err(err)?),
                SourceKind::Zomato => SourceRecord::Zomato(from_value::<ZomatoRecord>(value).map_err(err)?),
            })
        })
        .collect()
}

fn from_value<T: DeserializeOwned>(
    value: serde_json::Value,
) -> Result<T, serde_path_to_error::Error<serde_json::Error>> {
    serde_path_to_error::deserialize(value)
}
