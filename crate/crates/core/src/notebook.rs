//! Notebook ingestion.
//!
//! A Jupyter notebook (nbformat 4) is flattened into an ordered list of
//! cells of three kinds. Markdown cells become `m<i>`, code cells `c<j>`,
//! and the outputs of code cell `c<j>` collapse into a single `o<j>` placed
//! directly after it. Counters are per kind and 1-based. Raw cells and
//! attachments are dropped.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use base64::Engine;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

/// The three content categories a cell can belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Text,
    Code,
    Output,
}

impl CellKind {
    pub const ALL: [CellKind; 3] = [CellKind::Text, CellKind::Code, CellKind::Output];

    #[must_use]
    pub fn prefix(self) -> char {
        match self {
            CellKind::Text => 'm',
            CellKind::Code => 'c',
            CellKind::Output => 'o',
        }
    }

    #[must_use]
    pub fn as_str(self) -> &'static str {
        match self {
            CellKind::Text => "text",
            CellKind::Code => "code",
            CellKind::Output => "output",
        }
    }

    /// Code and output cells share the right column.
    #[must_use]
    pub fn is_computational(self) -> bool {
        !matches!(self, CellKind::Text)
    }
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Identifier of the form `m<N>`, `c<N>` or `o<N>`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CellId(String);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid cell id `{0}`: expected m<N>, c<N> or o<N>")]
pub struct InvalidCellId(pub String);

impl CellId {
    #[must_use]
    pub fn new(kind: CellKind, index: usize) -> Self {
        CellId(format!("{}{}", kind.prefix(), index))
    }

    /// Kind implied by the prefix.
    #[must_use]
    pub fn kind(&self) -> CellKind {
        match self.0.as_bytes()[0] {
            b'm' => CellKind::Text,
            b'c' => CellKind::Code,
            _ => CellKind::Output,
        }
    }

    #[must_use]
    pub fn index(&self) -> usize {
        self.0[1..].parse().unwrap_or(usize::MAX)
    }

    #[must_use]
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for CellId {
    type Err = InvalidCellId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let ok = matches!(chars.next(), Some('m' | 'c' | 'o'))
            && s.len() > 1
            && s.len() <= 20
            && chars.all(|c| c.is_ascii_digit());
        if ok {
            Ok(CellId(s.to_owned()))
        } else {
            Err(InvalidCellId(s.to_owned()))
        }
    }
}

impl TryFrom<String> for CellId {
    type Error = InvalidCellId;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<CellId> for String {
    fn from(id: CellId) -> String {
        id.0
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageDims {
    pub width: u32,
    pub height: u32,
}

/// One rendered output of a code cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OutputPayload {
    pub mime: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub text_content: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub image_dims: Option<ImageDims>,
    /// Base64 image bytes (raster) or SVG markup, kept so bundles stay offline.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub data: Option<String>,
}

impl OutputPayload {
    #[must_use]
    pub fn text(mime: impl Into<String>, text: impl Into<String>) -> Self {
        Self { mime: mime.into(), text_content: Some(text.into()), image_dims: None, data: None }
    }

    #[must_use]
    pub fn image(mime: impl Into<String>, width: u32, height: u32) -> Self {
        Self { mime: mime.into(), text_content: None, image_dims: Some(ImageDims { width, height }), data: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Cell {
    pub id: CellId,
    pub kind: CellKind,
    pub source: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub output_payloads: Vec<OutputPayload>,
    pub ordinal: usize,
}

impl Cell {
    /// Length of `source` in Unicode scalar values, the unit of span offsets.
    #[must_use]
    pub fn char_len(&self) -> usize {
        self.source.chars().count()
    }
}

/// Ordered, immutable cell sequence of one notebook.
#[derive(Debug, Clone, PartialEq)]
pub struct NotebookDoc {
    cells: Vec<Cell>,
    source_path: String,
    by_id: HashMap<CellId, usize>,
}

impl NotebookDoc {
    /// Builds a document from cells already in notebook order.
    ///
    /// Ordinals are reassigned from position. Fails on duplicate ids.
    pub fn from_cells(mut cells: Vec<Cell>, source_path: impl Into<String>) -> Result<Self, NotebookParseError> {
        let mut by_id = HashMap::with_capacity(cells.len());
        for (i, cell) in cells.iter_mut().enumerate() {
            cell.ordinal = i;
            if by_id.insert(cell.id.clone(), i).is_some() {
                return Err(NotebookParseError::DuplicateCellId { id: cell.id.to_string() });
            }
        }
        Ok(Self { cells, source_path: source_path.into(), by_id })
    }

    #[must_use]
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    #[must_use]
    pub fn source_path(&self) -> &str {
        &self.source_path
    }

    #[must_use]
    pub fn get(&self, id: &CellId) -> Option<&Cell> {
        self.by_id.get(id).map(|&i| &self.cells[i])
    }

    #[must_use]
    pub fn ordinal(&self, id: &CellId) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Number of cells of each kind, in `CellKind::ALL` order.
    #[must_use]
    pub fn census(&self) -> [usize; 3] {
        let mut out = [0; 3];
        for c in &self.cells {
            out[c.kind as usize] += 1;
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum NotebookParseError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON at byte {byte_offset} (line {line}, column {column}): {message}")]
    Syntax { byte_offset: usize, line: usize, column: usize, message: String },
    #[error("unsupported nbformat major version {0}; only 4 is supported")]
    UnsupportedVersion(u64),
    #[error("{}: {message}", location(*.cell_index))]
    Structure { cell_index: Option<usize>, message: String },
    #[error("duplicate cell id {id}")]
    DuplicateCellId { id: String },
}

fn location(cell_index: Option<usize>) -> String {
    match cell_index {
        Some(i) => format!("cell {i}"),
        None => "notebook".to_owned(),
    }
}

fn structure(cell_index: Option<usize>, message: impl Into<String>) -> NotebookParseError {
    NotebookParseError::Structure { cell_index, message: message.into() }
}

/// Reads and parses a notebook file.
pub fn parse_notebook(path: &Path) -> Result<NotebookDoc, NotebookParseError> {
    let bytes =
        std::fs::read(path).map_err(|source| NotebookParseError::Io { path: path.display().to_string(), source })?;
    parse_notebook_bytes(&bytes, &path.display().to_string())
}

/// Parses notebook JSON held in memory.
pub fn parse_notebook_bytes(bytes: &[u8], source_path: &str) -> Result<NotebookDoc, NotebookParseError> {
    let root: Value = serde_json::from_slice(bytes).map_err(|e| syntax_error(bytes, &e))?;
    let obj = root.as_object().ok_or_else(|| structure(None, "top level is not an object"))?;

    let major = obj
        .get("nbformat")
        .and_then(Value::as_u64)
        .ok_or_else(|| structure(None, "missing integer field `nbformat`"))?;
    if major != 4 {
        return Err(NotebookParseError::UnsupportedVersion(major));
    }
    let raw_cells =
        obj.get("cells").and_then(Value::as_array).ok_or_else(|| structure(None, "missing array field `cells`"))?;

    let mut cells = Vec::new();
    let (mut n_text, mut n_code) = (0usize, 0usize);
    for (i, raw) in raw_cells.iter().enumerate() {
        let cell = raw.as_object().ok_or_else(|| structure(Some(i), "cell is not an object"))?;
        let cell_type = cell
            .get("cell_type")
            .and_then(Value::as_str)
            .ok_or_else(|| structure(Some(i), "missing string field `cell_type`"))?;
        match cell_type {
            "markdown" => {
                n_text += 1;
                cells.push(Cell {
                    id: CellId::new(CellKind::Text, n_text),
                    kind: CellKind::Text,
                    source: multiline(cell.get("source"), i, "source")?,
                    output_payloads: Vec::new(),
                    ordinal: 0,
                });
            }
            "code" => {
                n_code += 1;
                cells.push(Cell {
                    id: CellId::new(CellKind::Code, n_code),
                    kind: CellKind::Code,
                    source: multiline(cell.get("source"), i, "source")?,
                    output_payloads: Vec::new(),
                    ordinal: 0,
                });
                let outputs = match cell.get("outputs") {
                    None | Some(Value::Null) => &[][..],
                    Some(Value::Array(a)) => a.as_slice(),
                    Some(_) => return Err(structure(Some(i), "`outputs` is not an array")),
                };
                if !outputs.is_empty() {
                    let payloads = outputs.iter().map(|o| parse_output(o, i)).collect::<Result<Vec<_>, _>>()?;
                    let source =
                        payloads.iter().filter_map(|p| p.text_content.as_deref()).collect::<Vec<_>>().join("\n");
                    cells.push(Cell {
                        id: CellId::new(CellKind::Output, n_code),
                        kind: CellKind::Output,
                        source,
                        output_payloads: payloads,
                        ordinal: 0,
                    });
                }
            }
            "raw" => {}
            other => return Err(structure(Some(i), format!("unknown cell_type `{other}`"))),
        }
    }
    NotebookDoc::from_cells(cells, source_path)
}

fn syntax_error(bytes: &[u8], e: &serde_json::Error) -> NotebookParseError {
    let (line, column) = (e.line(), e.column());
    let mut offset = 0;
    for (n, l) in bytes.split_inclusive(|&b| b == b'\n').enumerate() {
        if n + 1 == line {
            offset += column.saturating_sub(1).min(l.len());
            break;
        }
        offset += l.len();
    }
    NotebookParseError::Syntax { byte_offset: offset, line, column, message: e.to_string() }
}

/// nbformat stores multi-line strings either whole or as a list of lines.
fn multiline(v: Option<&Value>, cell: usize, field: &str) -> Result<String, NotebookParseError> {
    match v {
        None | Some(Value::Null) => Ok(String::new()),
        Some(Value::String(s)) => Ok(s.clone()),
        Some(Value::Array(parts)) => parts
            .iter()
            .map(|p| p.as_str().ok_or_else(|| structure(Some(cell), format!("`{field}` has a non-string line"))))
            .collect(),
        Some(_) => Err(structure(Some(cell), format!("`{field}` is neither a string nor a list of strings"))),
    }
}

const RASTER_MIMES: [&str; 4] = ["image/png", "image/jpeg", "image/gif", "image/webp"];
const TEXT_MIMES: [&str; 4] = ["text/plain", "text/markdown", "text/html", "text/latex"];

fn parse_output(raw: &Value, cell: usize) -> Result<OutputPayload, NotebookParseError> {
    let obj = raw.as_object().ok_or_else(|| structure(Some(cell), "output is not an object"))?;
    let output_type = obj
        .get("output_type")
        .and_then(Value::as_str)
        .ok_or_else(|| structure(Some(cell), "output is missing `output_type`"))?;
    match output_type {
        "stream" => Ok(OutputPayload::text("text/plain", multiline(obj.get("text"), cell, "text")?)),
        "error" => {
            let tb = match obj.get("traceback") {
                Some(Value::Array(lines)) => lines.iter().filter_map(Value::as_str).collect::<Vec<_>>().join("\n"),
                _ => {
                    let name = obj.get("ename").and_then(Value::as_str).unwrap_or("Error");
                    let value = obj.get("evalue").and_then(Value::as_str).unwrap_or("");
                    format!("{name}: {value}")
                }
            };
            Ok(OutputPayload::text("text/plain", tb))
        }
        "execute_result" | "display_data" => {
            let empty = serde_json::Map::new();
            let data = obj.get("data").and_then(Value::as_object).unwrap_or(&empty);
            let meta = obj.get("metadata").and_then(Value::as_object).unwrap_or(&empty);
            let text = TEXT_MIMES.iter().find_map(|m| data.get(*m).map(|v| multiline(Some(v), cell, m))).transpose()?;

            for mime in RASTER_MIMES {
                let Some(v) = data.get(mime) else { continue };
                let b64: String = multiline(Some(v), cell, mime)?.split_whitespace().collect();
                let dims = metadata_dims(meta, mime).or_else(|| raster_dims(&b64));
                if let Some(dims) = dims {
                    return Ok(OutputPayload {
                        mime: mime.to_owned(),
                        text_content: text,
                        image_dims: Some(dims),
                        data: Some(b64),
                    });
                }
            }
            if let Some(v) = data.get("image/svg+xml") {
                let svg = multiline(Some(v), cell, "image/svg+xml")?;
                if let Some(dims) = metadata_dims(meta, "image/svg+xml").or_else(|| svg_dims(&svg)) {
                    return Ok(OutputPayload {
                        mime: "image/svg+xml".to_owned(),
                        text_content: text,
                        image_dims: Some(dims),
                        data: Some(svg),
                    });
                }
            }
            if let Some(v) = data.get("application/json") {
                if text.is_none() {
                    let pretty = serde_json::to_string_pretty(v).unwrap_or_default();
                    return Ok(OutputPayload::text("application/json", pretty));
                }
            }
            let mime = TEXT_MIMES.iter().find(|m| data.contains_key(**m)).copied().unwrap_or("text/plain");
            Ok(OutputPayload::text(mime, text.unwrap_or_default()))
        }
        other => Err(structure(Some(cell), format!("unknown output_type `{other}`"))),
    }
}

fn metadata_dims(meta: &serde_json::Map<String, Value>, mime: &str) -> Option<ImageDims> {
    let m = meta.get(mime)?.as_object()?;
    let width = u32::try_from(m.get("width")?.as_u64()?).ok()?;
    let height = u32::try_from(m.get("height")?.as_u64()?).ok()?;
    (width > 0 && height > 0).then_some(ImageDims { width, height })
}

fn raster_dims(b64: &str) -> Option<ImageDims> {
    // Headers live in the first few hundred bytes, but JPEG SOF markers can sit
    // after large EXIF blocks, so decode the whole thing.
    let bytes = base64::engine::general_purpose::STANDARD.decode(b64).ok()?;
    let size = imagesize::blob_size(&bytes).ok()?;
    let width = u32::try_from(size.width).ok()?;
    let height = u32::try_from(size.height).ok()?;
    (width > 0 && height > 0).then_some(ImageDims { width, height })
}

fn svg_dims(svg: &str) -> Option<ImageDims> {
    let start = svg.find("<svg")?;
    let tag = &svg[start..start + svg[start..].find('>')?];
    let attr = |name: &str| -> Option<f64> {
        let key = format!(" {name}=\"");
        let at = tag.find(&key)? + key.len();
        let rest = &tag[at..];
        let num: String = rest.chars().take_while(|c| c.is_ascii_digit() || *c == '.').collect();
        num.parse().ok()
    };
    let (w, h) = match (attr("width"), attr("height")) {
        (Some(w), Some(h)) => (w, h),
        _ => {
            let key = " viewBox=\"";
            let at = tag.find(key)? + key.len();
            let vb: Vec<f64> = tag[at..].split('"').next()?.split_whitespace().filter_map(|t| t.parse().ok()).collect();
            (*vb.get(2)?, *vb.get(3)?)
        }
    };
    let (width, height) = (w.round() as u32, h.round() as u32);
    (width > 0 && height > 0).then_some(ImageDims { width, height })
}
