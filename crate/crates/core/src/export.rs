//! Serialization of tables and records: HTML with location IDs, CSV,
//! structure JSON, and the on-disk dataset layout.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use scraper::{Html, Selector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::to_virtual_coords;
use crate::model::{
    BBox, CellBox, CellType, LayoutTree, PageMode, PageSize, QaPair, RowBox, Split, Table, TableSpec,
    VirtualBox, WordBox,
};
use crate::render::Placement;

pub const MANIFEST_FILE: &str = "manifest.jsonl";
pub const IMAGE_DIR: &str = "images";
pub const A4_IMAGE_DIR: &str = "images_a4";
pub const ANNOTATION_DIR: &str = "annotations";

fn escape_html(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

/// HTML document whose rows, cells and words carry IDs `row-{r}`,
/// `cell-{r}-{c}` and `word-{r}-{c}-{w}`.
pub fn to_html(table: &Table) -> String {
    let mut html = String::new();
    html.push_str("<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n");
    html.push_str(&format!("<title>{}</title>\n</head>\n<body>\n", escape_html(&table.id)));
    html.push_str(&format!("<table id=\"table\" class=\"theme-{}\">\n", table.theme));
    for (r, row) in table.rows.iter().enumerate() {
        html.push_str(&format!("<tr id=\"row-{r}\">\n"));
        for (c, cell) in row.cells.iter().enumerate() {
            let span = if cell.colspan > 1 {
                format!(" colspan=\"{}\"", cell.colspan)
            } else {
                String::new()
            };
            html.push_str(&format!("<td id=\"cell-{r}-{c}\" class=\"{}\"{span}>", cell.cell_type));
            let words: Vec<String> = cell
                .words
                .iter()
                .enumerate()
                .map(|(w, text)| format!("<span id=\"word-{r}-{c}-{w}\">{}</span>", escape_html(text)))
                .collect();
            html.push_str(&words.join(" "));
            html.push_str("</td>\n");
        }
        html.push_str("</tr>\n");
    }
    html.push_str("</table>\n</body>\n</html>\n");
    html
}

/// What an HTML export parses back to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedHtml {
    pub ids: Vec<String>,
    /// Per row, per cell: (cell type class, colspan, words).
    pub cells: Vec<Vec<(String, usize, Vec<String>)>>,
}

impl ParsedHtml {
    pub fn text_grid(&self) -> Vec<Vec<String>> {
        self.cells
            .iter()
            .map(|row| {
                let mut line = Vec::new();
                for (_, colspan, words) in row {
                    line.push(words.join(" "));
                    line.extend(std::iter::repeat_n(String::new(), colspan.saturating_sub(1)));
                }
                line
            })
            .collect()
    }
}

pub fn parse_html(html: &str) -> Result<ParsedHtml> {
    let doc = Html::parse_document(html);
    let sel = |s: &str| Selector::parse(s).expect("static selector");
    let (tr, td, span, with_id) = (sel("tr"), sel("td"), sel("span"), sel("[id]"));
    let ids = doc
        .select(&with_id)
        .filter_map(|e| e.value().attr("id").map(str::to_owned))
        .collect();
    let mut cells = Vec::new();
    for (r, row) in doc.select(&tr).enumerate() {
        if row.value().attr("id") != Some(format!("row-{r}").as_str()) {
            return Err(Error::InvalidTable(format!("html row {r} has id {:?}", row.value().attr("id"))));
        }
        let mut line = Vec::new();
        for (c, cell) in row.select(&td).enumerate() {
            if cell.value().attr("id") != Some(format!("cell-{r}-{c}").as_str()) {
                return Err(Error::InvalidTable(format!("html cell {r}-{c} has the wrong id")));
            }
            let colspan = cell
                .value()
                .attr("colspan")
                .map(|v| v.parse::<usize>())
                .transpose()
                .map_err(|e| Error::InvalidTable(format!("html cell {r}-{c} colspan: {e}")))?
                .unwrap_or(1);
            let class = cell.value().attr("class").unwrap_or_default().to_owned();
            let words = cell
                .select(&span)
                .enumerate()
                .map(|(w, s)| {
                    if s.value().attr("id") != Some(format!("word-{r}-{c}-{w}").as_str()) {
                        return Err(Error::InvalidTable(format!("html word {r}-{c}-{w} has the wrong id")));
                    }
                    Ok(s.text().collect::<String>())
                })
                .collect::<Result<Vec<_>>>()?;
            line.push((class, colspan, words));
        }
        cells.push(line);
    }
    Ok(ParsedHtml { ids, cells })
}

/// RFC 4180 CSV, one line per row; spanning cells are padded with empty
/// fields so every line has `column_count` fields.
pub fn to_csv(table: &Table) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    for line in table.text_grid() {
        w.write_record(&line).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
}

pub fn parse_csv(text: &str) -> Result<Vec<Vec<String>>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    r.records()
        .map(|rec| Ok(rec?.iter().map(str::to_owned).collect()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordDoc {
    pub text: String,
    pub bbox: BBox,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub virtual_bbox: Option<VirtualBox>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDoc {
    pub index: usize,
    pub column: usize,
    pub colspan: usize,
    #[serde(rename = "type")]
    pub cell_type: CellType,
    pub bbox: BBox,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub virtual_bbox: Option<VirtualBox>,
    pub words: Vec<WordDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowDoc {
    pub index: usize,
    pub bbox: BBox,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub virtual_bbox: Option<VirtualBox>,
    pub cells: Vec<CellDoc>,
}

/// The table's structure with 2D positions: rows, cells, words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDoc {
    pub page_mode: PageMode,
    pub page_size: PageSize,
    pub bbox: BBox,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub virtual_bbox: Option<VirtualBox>,
    pub rows: Vec<RowDoc>,
}

impl StructureDoc {
    pub fn build(table: &Table, layout: &LayoutTree, with_virtual: bool) -> Result<Self> {
        layout.validate_against(table)?;
        let PageSize { width, height } = layout.page_size;
        let virt = |b: &BBox| -> Result<Option<VirtualBox>> {
            if with_virtual {
                Ok(Some(to_virtual_coords(b, width, height)?))
            } else {
                Ok(None)
            }
        };
        let mut words = layout.words.iter().peekable();
        let mut cells = layout.cells.iter().peekable();
        let mut rows = Vec::with_capacity(table.rows.len());
        for (rb, row) in layout.rows.iter().zip(&table.rows) {
            let mut cell_docs = Vec::with_capacity(row.cells.len());
            for cell in &row.cells {
                let cb = cells.next().expect("validated cell count");
                let mut word_docs = Vec::with_capacity(cell.words.len());
                while let Some(w) = words.next_if(|w| w.row == cb.row && w.cell == cb.cell) {
                    word_docs.push(WordDoc {
                        text: w.text.clone(),
                        bbox: w.bbox,
                        virtual_bbox: virt(&w.bbox)?,
                    });
                }
                cell_docs.push(CellDoc {
                    index: cb.cell,
                    column: cell.column_index,
                    colspan: cell.colspan,
                    cell_type: cell.cell_type,
                    bbox: cb.bbox,
                    virtual_bbox: virt(&cb.bbox)?,
                    words: word_docs,
                });
            }
            rows.push(RowDoc {
                index: rb.row,
                bbox: rb.bbox,
                virtual_bbox: virt(&rb.bbox)?,
                cells: cell_docs,
            });
        }
        Ok(StructureDoc {
            page_mode: layout.page_mode,
            page_size: layout.page_size,
            bbox: layout.table_box,
            virtual_bbox: virt(&layout.table_box)?,
            rows,
        })
    }

    /// Rebuilds the pixel geometry described by this document.
    pub fn to_layout(&self) -> LayoutTree {
        let mut rows = Vec::new();
        let mut cells = Vec::new();
        let mut words = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            rows.push(RowBox { row: r, bbox: row.bbox });
            for (c, cell) in row.cells.iter().enumerate() {
                cells.push(CellBox {
                    row: r,
                    cell: c,
                    bbox: cell.bbox,
                });
                for (w, word) in cell.words.iter().enumerate() {
                    words.push(WordBox {
                        row: r,
                        cell: c,
                        word: w,
                        text: word.text.clone(),
                        bbox: word.bbox,
                    });
                }
            }
        }
        LayoutTree {
            page_mode: self.page_mode,
            page_size: self.page_size,
            table_box: self.bbox,
            rows,
            cells,
            words,
        }
    }

    pub fn text_grid(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|row| {
                let mut line = Vec::new();
                for cell in &row.cells {
                    line.push(cell.words.iter().map(|w| w.text.as_str()).collect::<Vec<_>>().join(" "));
                    line.extend(std::iter::repeat_n(String::new(), cell.colspan.saturating_sub(1)));
                }
                line
            })
            .collect()
    }

    pub fn flattened_words(&self) -> Vec<&WordDoc> {
        self.rows
            .iter()
            .flat_map(|r| &r.cells)
            .flat_map(|c| &c.words)
            .collect()
    }
}

pub fn to_structure_json(table: &Table, layout: &LayoutTree, with_virtual: bool) -> Result<String> {
    let doc = StructureDoc::build(table, layout, with_virtual)?;
    Ok(serde_json::to_string(&doc).expect("structure serializes"))
}

/// A word read by an OCR engine, in table-image pixels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OcrWord {
    pub text: String,
    pub bbox: BBox,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordPaths {
    pub image: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image_a4: Option<String>,
    pub annotation: String,
}

impl RecordPaths {
    pub fn for_id(id: &str, with_a4: bool) -> Self {
        RecordPaths {
            image: format!("{IMAGE_DIR}/{id}.png"),
            image_a4: with_a4.then(|| format!("{A4_IMAGE_DIR}/{id}.png")),
            annotation: format!("{ANNOTATION_DIR}/{id}.json"),
        }
    }

    pub fn all(&self) -> impl Iterator<Item = &str> {
        [Some(self.image.as_str()), self.image_a4.as_deref(), Some(self.annotation.as_str())]
            .into_iter()
            .flatten()
    }
}

/// Contents of `annotations/{id}.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    pub id: String,
    pub theme: usize,
    pub split: Split,
    pub paths: RecordPaths,
    /// Where the table sits on the A4 image.
    pub a4_placement: Placement,
    pub spec: TableSpec,
    pub html: String,
    pub csv: String,
    /// Geometry in table-image pixels, with virtual coordinates.
    pub structure: StructureDoc,
    pub qa_pairs: Vec<QaPair>,
    pub competition_pair: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ocr_words: Option<Vec<OcrWord>>,
}

impl Annotation {
    pub fn competition(&self) -> Option<&QaPair> {
        self.qa_pairs.get(self.competition_pair)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_slice(&bytes).map_err(|e| Error::json(path, e))
    }
}

/// One table's complete exportable bundle.
#[derive(Debug, Clone)]
pub struct DatasetRecord {
    pub annotation: Annotation,
    pub table_png: Vec<u8>,
    pub a4_png: Option<Vec<u8>>,
}

impl DatasetRecord {
    pub fn id(&self) -> &str {
        &self.annotation.id
    }

    pub fn validate(&self) -> Result<()> {
        if self.annotation.competition().is_none() {
            return Err(Error::Generation(format!(
                "{}: competition pair {} of {}",
                self.id(),
                self.annotation.competition_pair,
                self.annotation.qa_pairs.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub theme: usize,
    pub split: Split,
    pub paths: RecordPaths,
}

fn write_file(root: &Path, rel: &str, bytes: &[u8], written: &mut Vec<PathBuf>) -> Result<()> {
    let path = root.join(rel);
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    written.push(path);
    Ok(())
}

/// Writes a record's images and annotation under `root`. On failure any
/// file already written for the record is removed.
pub fn write_record_files(record: &DatasetRecord, root: &Path) -> Result<ManifestEntry> {
    record.validate()?;
    let a = &record.annotation;
    let mut written = Vec::new();
    let result = (|| {
        write_file(root, &a.paths.image, &record.table_png, &mut written)?;
        if let (Some(rel), Some(png)) = (&a.paths.image_a4, &record.a4_png) {
            write_file(root, rel, png, &mut written)?;
        }
        let json = serde_json::to_vec(a).expect("annotation serializes");
        write_file(root, &a.paths.annotation, &json, &mut written)
    })();
    if let Err(e) = result {
        for p in &written {
            let _ = fs::remove_file(p);
        }
        return Err(e);
    }
    Ok(ManifestEntry {
        id: a.id.clone(),
        theme: a.theme,
        split: a.split,
        paths: a.paths.clone(),
    })
}

pub fn append_manifest(root: &Path, entries: &[ManifestEntry]) -> Result<()> {
    let path = root.join(MANIFEST_FILE);
    let mut f = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(&path)
        .map_err(|e| Error::io(&path, e))?;
    let mut buf = Vec::new();
    for e in entries {
        serde_json::to_writer(&mut buf, e).expect("manifest entry serializes");
        buf.push(b'\n');
    }
    f.write_all(&buf).map_err(|e| Error::io(&path, e))
}

/// Writes the record's files and appends its manifest line.
pub fn write_record(record: &DatasetRecord, root: &Path) -> Result<ManifestEntry> {
    let entry = write_record_files(record, root)?;
    append_manifest(root, std::slice::from_ref(&entry))?;
    Ok(entry)
}

pub fn read_manifest(root: &Path) -> Result<Vec<ManifestEntry>> {
    let path = root.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let mut ids = HashSet::new();
    let mut out = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let entry: ManifestEntry = serde_json::from_str(line).map_err(|e| Error::json(&path, e))?;
        if !ids.insert(entry.id.clone()) {
            return Err(Error::Generation(format!("duplicate manifest id {}", entry.id)));
        }
        out.push(entry);
    }
    Ok(out)
}
