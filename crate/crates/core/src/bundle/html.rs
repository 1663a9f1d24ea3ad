use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use pulldown_cmark_escape::escape_html;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::layout::{cue_styles, CueStyle, LayoutDocument};
use crate::notebook::{CellId, CellKind, NotebookDoc, OutputPayload};
use crate::relationship::{Relationship, RelationshipSet};

use super::markdown::render_markdown;
use super::{write_file, EmitError};

pub const PAYLOAD_ELEMENT_ID: &str = "interlink-data";
const PAYLOAD_OPEN: &str = r#"<script id="interlink-data" type="application/json">"#;
const PAYLOAD_CLOSE: &str = "</script>";

/// Compiled viewer script and stylesheet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewerAssets {
    pub js: Vec<u8>,
    pub css: Vec<u8>,
}

impl ViewerAssets {
    /// Reads `viewer.js` and `viewer.css` from a built viewer directory.
    pub fn from_dir(dir: &Path) -> Result<Self, EmitError> {
        let read = |name: &str| fs::read(dir.join(name));
        match (read("viewer.js"), read("viewer.css")) {
            (Ok(js), Ok(css)) => Ok(Self { js, css }),
            _ => Err(EmitError::MissingViewerAssets { searched: Some(dir.to_owned()) }),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum LayoutMode {
    Linear,
    #[default]
    SideBySide,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BundleOptions {
    /// Presentation shown when the bundle opens.
    pub default_mode: LayoutMode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PayloadCell {
    pub cell_id: CellId,
    pub kind: CellKind,
    pub source: String,
    /// Rendered markdown with source offsets, for text cells.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub html: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<OutputPayload>,
}

/// Everything the viewer reads, embedded in the page.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DataPayload<'a> {
    pub default_mode: LayoutMode,
    pub notebook: String,
    /// Cell ids in notebook order, for the linear presentation.
    pub linear_order: Vec<CellId>,
    pub cells: Vec<PayloadCell>,
    pub relationships: Vec<&'a Relationship>,
    pub layout: &'a LayoutDocument,
    pub cue_styles: BTreeMap<&'static str, CueStyle>,
}

#[must_use]
pub fn build_payload<'a>(
    doc: &'a LayoutDocument,
    nb: &NotebookDoc,
    rels: &'a RelationshipSet,
    opts: &BundleOptions,
) -> DataPayload<'a> {
    let notebook = Path::new(nb.source_path())
        .file_name()
        .map_or_else(|| nb.source_path().to_owned(), |n| n.to_string_lossy().into_owned());
    let cells = nb
        .cells()
        .iter()
        .map(|c| PayloadCell {
            cell_id: c.id.clone(),
            kind: c.kind,
            source: c.source.clone(),
            html: (c.kind == CellKind::Text).then(|| render_markdown(&c.source)),
            outputs: c.output_payloads.clone(),
        })
        .collect();
    DataPayload {
        default_mode: opts.default_mode,
        notebook,
        linear_order: nb.cells().iter().map(|c| c.id.clone()).collect(),
        cells,
        relationships: rels.iter().collect(),
        layout: doc,
        cue_styles: cue_styles(),
    }
}

/// JSON safe to place inside a script element.
fn embeddable(payload: &DataPayload<'_>) -> String {
    serde_json::to_string(payload).expect("payload serializes").replace('<', "\\u003c")
}

/// The page: stylesheet, mount point, payload and script, all local.
#[must_use]
pub fn index_html(payload: &DataPayload<'_>) -> String {
    let mut title = String::new();
    escape_html(&mut title, &payload.notebook).expect("writing to a String");
    format!(
        "<!DOCTYPE html>\n\
         <html lang=\"en\">\n\
         <head>\n\
         <meta charset=\"utf-8\">\n\
         <meta name=\"viewport\" content=\"width=device-width, initial-scale=1\">\n\
         <title>{title}</title>\n\
         <link rel=\"stylesheet\" href=\"assets/viewer.css\">\n\
         </head>\n\
         <body>\n\
         <div id=\"interlink-root\"></div>\n\
         {PAYLOAD_OPEN}{data}{PAYLOAD_CLOSE}\n\
         <script src=\"assets/viewer.js\"></script>\n\
         </body>\n\
         </html>\n",
        data = embeddable(payload),
    )
}

/// Parses the embedded payload back out of a page.
#[must_use]
pub fn extract_payload(html: &str) -> Option<serde_json::Value> {
    let start = html.find(PAYLOAD_OPEN)? + PAYLOAD_OPEN.len();
    let len = html[start..].find(PAYLOAD_CLOSE)?;
    serde_json::from_str(&html[start..start + len]).ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ManifestEntry {
    /// Relative to the output directory, `/`-separated.
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BundleManifest {
    pub files: Vec<ManifestEntry>,
}

/// Writes `index.html` and the viewer assets under `out`.
///
/// Fails with [`EmitError::MissingViewerAssets`] when no built viewer is
/// supplied.
pub fn emit_html(
    doc: &LayoutDocument,
    nb: &NotebookDoc,
    rels: &RelationshipSet,
    assets: Option<&ViewerAssets>,
    opts: &BundleOptions,
    out: &Path,
) -> Result<BundleManifest, EmitError> {
    let assets = assets.ok_or(EmitError::MissingViewerAssets { searched: None })?;
    let page = index_html(&build_payload(doc, nb, rels, opts));
    let files: [(&str, &[u8]); 3] =
        [("index.html", page.as_bytes()), ("assets/viewer.js", &assets.js), ("assets/viewer.css", &assets.css)];
    let mut entries = Vec::with_capacity(files.len());
    for (rel, bytes) in files {
        let path: PathBuf = out.join(rel);
        write_file(&path, bytes)?;
        entries.push(ManifestEntry {
            path: rel.to_owned(),
            bytes: bytes.len(),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
    }
    Ok(BundleManifest { files: entries })
}
