//! Domain types shared by every stage of the pipeline.
//!
//! Everything here is plain data: constructors validate their invariants and
//! nothing is mutated once a table has been generated.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned pixel rectangle, origin top-left.
///
/// `x0 < x1` and `y0 < y1` always hold. Edges are lattice lines, so a box
/// covers the pixels `x0..x1` by `y0..y1` and two boxes sharing an edge have
/// disjoint interiors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u32; 4]", into = "[u32; 4]")]
pub struct BBox {
    x0: u32,
    y0: u32,
    x1: u32,
    y1: u32,
}

impl BBox {
    pub fn new(x0: u32, y0: u32, x1: u32, y1: u32) -> Result<Self> {
        if x0 >= x1 || y0 >= y1 {
            return Err(Error::Geometry(format!(
                "box ({x0}, {y0}, {x1}, {y1}) has no area"
            )));
        }
        Ok(Self { x0, y0, x1, y1 })
    }

    pub fn from_size(x: u32, y: u32, width: u32, height: u32) -> Result<Self> {
        Self::new(x, y, x + width, y + height)
    }

    pub fn x0(&self) -> u32 {
        self.x0
    }
    pub fn y0(&self) -> u32 {
        self.y0
    }
    pub fn x1(&self) -> u32 {
        self.x1
    }
    pub fn y1(&self) -> u32 {
        self.y1
    }
    pub fn width(&self) -> u32 {
        self.x1 - self.x0
    }
    pub fn height(&self) -> u32 {
        self.y1 - self.y0
    }

    /// `other` lies within `self` (shared edges allowed).
    pub fn contains(&self, other: &BBox) -> bool {
        self.x0 <= other.x0 && self.y0 <= other.y0 && other.x1 <= self.x1 && other.y1 <= self.y1
    }

    /// Interiors overlap. Boxes that only touch along an edge do not.
    pub fn overlaps(&self, other: &BBox) -> bool {
        self.x0 < other.x1 && other.x0 < self.x1 && self.y0 < other.y1 && other.y0 < self.y1
    }

    pub fn translate(&self, dx: u32, dy: u32) -> BBox {
        BBox {
            x0: self.x0 + dx,
            y0: self.y0 + dy,
            x1: self.x1 + dx,
            y1: self.y1 + dy,
        }
    }

    pub fn to_array(&self) -> [u32; 4] {
        [self.x0, self.y0, self.x1, self.y1]
    }
}

impl TryFrom<[u32; 4]> for BBox {
    type Error = Error;

    fn try_from(v: [u32; 4]) -> Result<Self> {
        BBox::new(v[0], v[1], v[2], v[3])
    }
}

impl From<BBox> for [u32; 4] {
    fn from(b: BBox) -> Self {
        b.to_array()
    }
}

/// Box in the 0..=1000 "virtual" coordinate space consumed by layout-aware
/// language models. Quantization may collapse an extent to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[u16; 4]", into = "[u16; 4]")]
pub struct VirtualBox {
    pub x0: u16,
    pub y0: u16,
    pub x1: u16,
    pub y1: u16,
}

impl From<[u16; 4]> for VirtualBox {
    fn from(v: [u16; 4]) -> Self {
        VirtualBox {
            x0: v[0],
            y0: v[1],
            x1: v[2],
            y1: v[3],
        }
    }
}

impl From<VirtualBox> for [u16; 4] {
    fn from(b: VirtualBox) -> Self {
        [b.x0, b.y0, b.x1, b.y1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellType {
    SectionTitle,
    CurrencyUnit,
    RowHeader,
    ColumnHeader,
    Data,
}

impl CellType {
    pub const ALL: [CellType; 5] = [
        CellType::SectionTitle,
        CellType::CurrencyUnit,
        CellType::RowHeader,
        CellType::ColumnHeader,
        CellType::Data,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CellType::SectionTitle => "section_title",
            CellType::CurrencyUnit => "currency_unit",
            CellType::RowHeader => "row_header",
            CellType::ColumnHeader => "column_header",
            CellType::Data => "data",
        }
    }

    /// Header-like cells that may switch to a bold weight.
    pub fn is_heading(&self) -> bool {
        matches!(
            self,
            CellType::SectionTitle | CellType::CurrencyUnit | CellType::ColumnHeader
        )
    }
}

impl fmt::Display for CellType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub cell_type: CellType,
    pub words: Vec<String>,
    pub column_index: usize,
    pub colspan: usize,
}

impl Cell {
    pub fn new(cell_type: CellType, words: Vec<String>, column_index: usize) -> Self {
        Cell {
            cell_type,
            words,
            column_index,
            colspan: 1,
        }
    }

    pub fn spanning(
        cell_type: CellType,
        words: Vec<String>,
        column_index: usize,
        colspan: usize,
    ) -> Self {
        Cell {
            cell_type,
            words,
            column_index,
            colspan,
        }
    }

    /// Splits display text on single spaces; the empty string gives an empty cell.
    pub fn from_text(cell_type: CellType, text: &str, column_index: usize) -> Self {
        Self::new(cell_type, split_words(text), column_index)
    }

    pub fn text(&self) -> String {
        self.words.join(" ")
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

pub fn split_words(text: &str) -> Vec<String> {
    text.split(' ')
        .filter(|w| !w.is_empty())
        .map(str::to_owned)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub cells: Vec<Cell>,
    pub row_index: usize,
    pub section_index: Option<usize>,
}

impl Row {
    pub fn span_width(&self) -> usize {
        self.cells.iter().map(|c| c.colspan).sum()
    }

    pub fn is_header_row(&self) -> bool {
        !self.cells.is_empty()
            && self
                .cells
                .iter()
                .all(|c| c.cell_type == CellType::ColumnHeader)
    }

    pub fn is_data_row(&self) -> bool {
        self.cells.iter().any(|c| c.cell_type == CellType::Data)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Typeface {
    Serif,
    Sans,
    Condensed,
}

impl Typeface {
    pub const ALL: [Typeface; 3] = [Typeface::Serif, Typeface::Sans, Typeface::Condensed];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    Regular,
    Bold,
}

/// How the table's text is set. Carried on the table so layout and
/// rendering need nothing beyond the table and its theme style.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Typography {
    pub typeface: Typeface,
    pub font_size_pt: f32,
    pub bold_headers: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub id: String,
    pub theme: usize,
    pub rows: Vec<Row>,
    pub column_count: usize,
    pub currency_symbol: String,
    pub typography: Typography,
}

impl Table {
    /// Checks the structural invariants every generated table must satisfy.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidTable(format!("{}: {msg}", self.id)));
        if self.column_count == 0 {
            return bad("no columns".into());
        }
        let mut header_row = None;
        for (i, row) in self.rows.iter().enumerate() {
            if row.row_index != i {
                return bad(format!("row {i} carries index {}", row.row_index));
            }
            if row.span_width() != self.column_count {
                return bad(format!(
                    "row {i} spans {} columns, expected {}",
                    row.span_width(),
                    self.column_count
                ));
            }
            let mut col = 0;
            for cell in &row.cells {
                if cell.colspan == 0 {
                    return bad(format!("row {i} has a zero-width cell"));
                }
                if cell.column_index != col {
                    return bad(format!("row {i} cell column index {} != {col}", cell.column_index));
                }
                col += cell.colspan;
            }
            if row.is_header_row() {
                if header_row.is_some() {
                    return bad("more than one column-header row".into());
                }
                header_row = Some(i);
            }
            if row.is_data_row() {
                if header_row.is_none() {
                    return bad(format!("data row {i} precedes the header row"));
                }
                if row.cells[0].cell_type != CellType::RowHeader {
                    return bad(format!("data row {i} does not start with a row header"));
                }
            }
        }
        if header_row.is_none() {
            return bad("no column-header row".into());
        }
        Ok(())
    }

    pub fn header_row(&self) -> Option<&Row> {
        self.rows.iter().find(|r| r.is_header_row())
    }

    /// Text of the column header covering `column`, if any.
    pub fn column_key(&self, column: usize) -> Option<String> {
        self.header_row()?
            .cells
            .iter()
            .find(|c| c.column_index <= column && column < c.column_index + c.colspan)
            .map(Cell::text)
    }

    /// All words in reading order: rows top to bottom, cells left to right.
    pub fn flattened_words(&self) -> Vec<&str> {
        self.rows
            .iter()
            .flat_map(|r| r.cells.iter())
            .flat_map(|c| c.words.iter().map(String::as_str))
            .collect()
    }

    pub fn cell_count(&self) -> usize {
        self.rows.iter().map(|r| r.cells.len()).sum()
    }

    pub fn word_count(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| r.cells.iter())
            .map(|c| c.words.len())
            .sum()
    }

    /// Display text per grid slot, spanning cells padded with empty slots.
    pub fn text_grid(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|row| {
                let mut line = Vec::with_capacity(self.column_count);
                for cell in &row.cells {
                    line.push(cell.text());
                    line.extend(std::iter::repeat_n(String::new(), cell.colspan - 1));
                }
                line
            })
            .collect()
    }
}

/// Sampled blueprint of one table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSpec {
    pub theme: usize,
    pub typeface: Typeface,
    pub font_size_pt: f32,
    pub bold_headers: bool,
    pub section_count: usize,
    pub rows_per_section: Vec<usize>,
    pub value_column_count: usize,
    pub has_note_column: bool,
    pub has_currency_row: bool,
    pub date_format: crate::format::DateFormat,
    pub negative_style: crate::format::NegativeStyle,
    pub thousands_separator: bool,
    pub section_numbering: bool,
    pub per_table_seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PageMode {
    TableBoundary,
    A4Page,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageSize {
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowBox {
    pub row: usize,
    pub bbox: BBox,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellBox {
    pub row: usize,
    pub cell: usize,
    pub bbox: BBox,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordBox {
    pub row: usize,
    pub cell: usize,
    pub word: usize,
    pub text: String,
    pub bbox: BBox,
}

/// Pixel geometry of a laid-out table. Rows, cells and words are stored in
/// reading order, so `words` is the flattened word list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutTree {
    pub page_mode: PageMode,
    pub page_size: PageSize,
    pub table_box: BBox,
    pub rows: Vec<RowBox>,
    pub cells: Vec<CellBox>,
    pub words: Vec<WordBox>,
}

impl LayoutTree {
    /// Checks containment (word in cell in row in table in page) and
    /// pairwise disjointness of rows and of cells within a row.
    pub fn validate(&self) -> Result<()> {
        let err = |msg: String| Err(Error::Geometry(msg));
        let page = BBox::new(0, 0, self.page_size.width, self.page_size.height)?;
        if !page.contains(&self.table_box) {
            return err(format!("table box {:?} outside page", self.table_box));
        }
        for (i, r) in self.rows.iter().enumerate() {
            if r.row != i {
                return err(format!("row entry {i} refers to row {}", r.row));
            }
            if !self.table_box.contains(&r.bbox) {
                return err(format!("row {i} {:?} outside table", r.bbox));
            }
        }
        for pair in self.rows.windows(2) {
            if pair[0].bbox.overlaps(&pair[1].bbox) {
                return err(format!("rows {} and {} overlap", pair[0].row, pair[1].row));
            }
        }
        // Rows are stored top to bottom; check every pair anyway.
        for (i, a) in self.rows.iter().enumerate() {
            for b in &self.rows[i + 1..] {
                if a.bbox.overlaps(&b.bbox) {
                    return err(format!("rows {} and {} overlap", a.row, b.row));
                }
            }
        }
        let mut row_cells: Vec<Vec<&CellBox>> = vec![Vec::new(); self.rows.len()];
        for c in &self.cells {
            let Some(row) = self.rows.get(c.row) else {
                return err(format!("cell ({}, {}) refers to a missing row", c.row, c.cell));
            };
            if !row.bbox.contains(&c.bbox) {
                return err(format!("cell ({}, {}) {:?} outside its row", c.row, c.cell, c.bbox));
            }
            row_cells[c.row].push(c);
        }
        for cells in &row_cells {
            for (i, a) in cells.iter().enumerate() {
                if a.cell != i {
                    return err(format!("row {} cell {i} out of order", a.row));
                }
                for b in &cells[i + 1..] {
                    if a.bbox.overlaps(&b.bbox) {
                        return err(format!(
                            "cells ({}, {}) and ({}, {}) overlap",
                            a.row, a.cell, b.row, b.cell
                        ));
                    }
                }
            }
        }
        let mut last: Option<(usize, usize, usize)> = None;
        for w in &self.words {
            let Some(cell) = row_cells.get(w.row).and_then(|cs| cs.get(w.cell)) else {
                return err(format!("word ({}, {}, {}) refers to a missing cell", w.row, w.cell, w.word));
            };
            if !cell.bbox.contains(&w.bbox) {
                return err(format!(
                    "word ({}, {}, {}) {:?} outside cell {:?}",
                    w.row, w.cell, w.word, w.bbox, cell.bbox
                ));
            }
            let key = (w.row, w.cell, w.word);
            if let Some(prev) = last {
                if key <= prev {
                    return err(format!("word {key:?} out of reading order"));
                }
            }
            last = Some(key);
        }
        Ok(())
    }

    /// Geometry is valid and its words are exactly the table's flattened words.
    pub fn validate_against(&self, table: &Table) -> Result<()> {
        self.validate()?;
        if self.rows.len() != table.rows.len() {
            return Err(Error::Geometry(format!(
                "layout has {} rows, table has {}",
                self.rows.len(),
                table.rows.len()
            )));
        }
        if self.cells.len() != table.cell_count() {
            return Err(Error::Geometry(format!(
                "layout has {} cells, table has {}",
                self.cells.len(),
                table.cell_count()
            )));
        }
        let expected = table.flattened_words();
        if self.words.len() != expected.len()
            || self.words.iter().zip(&expected).any(|(w, e)| w.text != *e)
        {
            return Err(Error::Geometry(
                "layout words differ from the table's flattened words".into(),
            ));
        }
        Ok(())
    }

    pub fn cell_box(&self, row: usize, cell: usize) -> Option<&CellBox> {
        self.cells.iter().find(|c| c.row == row && c.cell == cell)
    }
}

/// One extractive QA pair. `start..end` is a half-open range over the
/// flattened word list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QaPair {
    pub question: String,
    #[serde(rename = "answer")]
    pub answer_text: String,
    pub row_key: String,
    pub column_key: String,
    pub start: usize,
    pub end: usize,
}

impl QaPair {
    /// The span is in range and reproduces the answer text.
    pub fn check_span<S: AsRef<str>>(&self, words: &[S]) -> Result<()> {
        if self.start >= self.end || self.end > words.len() {
            return Err(Error::Span(format!(
                "span {}..{} invalid for {} words",
                self.start,
                self.end,
                words.len()
            )));
        }
        let joined = words[self.start..self.end]
            .iter()
            .map(AsRef::as_ref)
            .collect::<Vec<_>>()
            .join(" ");
        if joined != self.answer_text {
            return Err(Error::Span(format!(
                "span {}..{} reads {joined:?}, answer is {:?}",
                self.start, self.end, self.answer_text
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Validation, Split::Test];

    pub fn as_str(&self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "validation" => Ok(Split::Validation),
            "test" => Ok(Split::Test),
            other => Err(Error::Config(format!("unknown split {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bbox_rejects_empty_area() {
        assert!(BBox::new(0, 0, 0, 5).is_err());
        assert!(BBox::new(3, 3, 4, 3).is_err());
        assert!(BBox::new(3, 3, 2, 9).is_err());
        assert!(BBox::new(0, 0, 1, 1).is_ok());
    }

    #[test]
    fn shared_edges_do_not_overlap() {
        let a = BBox::new(0, 0, 50, 10).unwrap();
        let b = BBox::new(50, 0, 100, 10).unwrap();
        assert!(!a.overlaps(&b));
        let c = BBox::new(49, 0, 60, 10).unwrap();
        assert!(a.overlaps(&c));
    }

    #[test]
    fn bbox_deserialization_enforces_area() {
        assert!(serde_json::from_str::<BBox>("[1,2,3,4]").is_ok());
        assert!(serde_json::from_str::<BBox>("[3,2,3,4]").is_err());
    }

    #[test]
    fn span_check() {
        let words = ["a", "52,160", "b", "c"];
        let pair = QaPair {
            question: String::new(),
            answer_text: "52,160".into(),
            row_key: String::new(),
            column_key: String::new(),
            start: 1,
            end: 2,
        };
        assert!(pair.check_span(&words).is_ok());
        let bad = QaPair { end: 3, ..pair.clone() };
        assert!(bad.check_span(&words).is_err());
        let empty = QaPair { end: 1, ..pair };
        assert!(empty.check_span(&words).is_err());
    }

    fn tiny_table() -> Table {
        Table {
            id: "t".into(),
            theme: 0,
            column_count: 2,
            currency_symbol: "£".into(),
            typography: Typography {
                typeface: Typeface::Sans,
                font_size_pt: 10.0,
                bold_headers: false,
            },
            rows: vec![
                Row {
                    row_index: 0,
                    section_index: None,
                    cells: vec![
                        Cell::new(CellType::ColumnHeader, vec![], 0),
                        Cell::from_text(CellType::ColumnHeader, "2021", 1),
                    ],
                },
                Row {
                    row_index: 1,
                    section_index: Some(0),
                    cells: vec![Cell::spanning(
                        CellType::SectionTitle,
                        vec!["Stocks".into()],
                        0,
                        2,
                    )],
                },
                Row {
                    row_index: 2,
                    section_index: Some(0),
                    cells: vec![
                        Cell::from_text(CellType::RowHeader, "Gross rent", 0),
                        Cell::from_text(CellType::Data, "(1,839)", 1),
                    ],
                },
            ],
        }
    }

    #[test]
    fn table_invariants() {
        let t = tiny_table();
        t.validate().unwrap();
        assert_eq!(t.column_key(1).as_deref(), Some("2021"));
        assert_eq!(t.flattened_words(), vec!["2021", "Stocks", "Gross", "rent", "(1,839)"]);
        assert_eq!(t.text_grid()[1], vec!["Stocks".to_string(), String::new()]);

        let mut no_header = t.clone();
        no_header.rows[0].cells[1].cell_type = CellType::Data;
        assert!(no_header.validate().is_err());

        let mut short = t.clone();
        short.rows[1].cells[0].colspan = 1;
        assert!(short.validate().is_err());

        let mut headless = t;
        headless.rows[2].cells[0].cell_type = CellType::Data;
        assert!(headless.validate().is_err());
    }
}
