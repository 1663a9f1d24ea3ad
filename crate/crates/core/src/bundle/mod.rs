//! Writing layouts and interactive bundles to disk.

mod html;
mod markdown;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::layout::LayoutDocument;

pub use html::{
    build_payload, emit_html, extract_payload, index_html, BundleManifest, BundleOptions, DataPayload, LayoutMode,
    ManifestEntry, ViewerAssets, PAYLOAD_ELEMENT_ID,
};
pub use markdown::render_markdown;

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("viewer assets not found{}; build the viewer and pass its directory", .searched.as_ref().map(|p| format!(" in {}", p.display())).unwrap_or_default())]
    MissingViewerAssets { searched: Option<PathBuf> },
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<(), EmitError> {
    let io = |source| EmitError::Io { path: path.to_owned(), source };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    fs::write(path, bytes).map_err(io)
}

/// The layout document as pretty JSON with a trailing newline.
///
/// Key order follows the type definitions and numbers are written in their
/// shortest form, so equal documents give equal bytes.
#[must_use]
pub fn layout_json(doc: &LayoutDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("layout serializes");
    s.push('\n');
    s
}

pub fn emit_layout_json(doc: &LayoutDocument, path: &Path) -> Result<(), EmitError> {
    write_file(path, layout_json(doc).as_bytes())
}
