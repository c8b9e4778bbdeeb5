//! Visual themes: how a table looks (`ThemeStyle`) and which typographic
//! and structural options the sampler may pick for it (`ThemeSampling`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{DateFormat, NegativeStyle};
use crate::model::{CellType, Typeface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rgb(pub [u8; 3]);

impl Rgb {
    pub const WHITE: Rgb = Rgb([255, 255, 255]);
    pub const BLACK: Rgb = Rgb([0, 0, 0]);
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [r, g, b] = self.0;
        write!(f, "#{r:02x}{g:02x}{b:02x}")
    }
}

impl FromStr for Rgb {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let hex = s
            .strip_prefix('#')
            .filter(|h| h.len() == 6)
            .ok_or_else(|| Error::Config(format!("colour {s:?} is not #rrggbb")))?;
        let byte = |i: usize| {
            u8::from_str_radix(&hex[i..i + 2], 16)
                .map_err(|_| Error::Config(format!("colour {s:?} is not #rrggbb")))
        };
        Ok(Rgb([byte(0)?, byte(2)?, byte(4)?]))
    }
}

impl Serialize for Rgb {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rgb {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One value per cell type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerType<T> {
    pub section_title: T,
    pub currency_unit: T,
    pub row_header: T,
    pub column_header: T,
    pub data: T,
}

impl<T: Copy> PerType<T> {
    pub fn uniform(v: T) -> Self {
        PerType {
            section_title: v,
            currency_unit: v,
            row_header: v,
            column_header: v,
            data: v,
        }
    }

    pub fn get(&self, t: CellType) -> T {
        match t {
            CellType::SectionTitle => self.section_title,
            CellType::CurrencyUnit => self.currency_unit,
            CellType::RowHeader => self.row_header,
            CellType::ColumnHeader => self.column_header,
            CellType::Data => self.data,
        }
    }

    pub fn with(mut self, t: CellType, v: T) -> Self {
        match t {
            CellType::SectionTitle => self.section_title = v,
            CellType::CurrencyUnit => self.currency_unit = v,
            CellType::RowHeader => self.row_header = v,
            CellType::ColumnHeader => self.column_header = v,
            CellType::Data => self.data = v,
        }
        self
    }
}

/// Per-edge pixel amounts, used for both padding and border widths.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edges {
    pub top: u32,
    pub right: u32,
    pub bottom: u32,
    pub left: u32,
}

impl Edges {
    pub const ZERO: Edges = Edges {
        top: 0,
        right: 0,
        bottom: 0,
        left: 0,
    };

    pub const fn new(top: u32, right: u32, bottom: u32, left: u32) -> Self {
        Edges {
            top,
            right,
            bottom,
            left,
        }
    }

    pub const fn symmetric(vertical: u32, horizontal: u32) -> Self {
        Edges::new(vertical, horizontal, vertical, horizontal)
    }

    pub fn covers(&self, other: &Edges) -> bool {
        self.top >= other.top
            && self.right >= other.right
            && self.bottom >= other.bottom
            && self.left >= other.left
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Align {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThemeStyle {
    pub theme: usize,
    pub name: String,
    pub padding: PerType<Edges>,
    /// Borders are drawn inside the cell box, over its padding.
    pub borders: PerType<Edges>,
    pub border_color: Rgb,
    pub page_background: Rgb,
    pub background: PerType<Rgb>,
    /// Fill for every other data row, when set.
    pub stripe: Option<Rgb>,
    pub text_color: PerType<Rgb>,
    /// Weight per cell type before the table's bold-header switch is applied.
    pub bold: PerType<bool>,
    /// Alignment of the first column (row headers).
    pub label_align: Align,
    /// Alignment of value columns, headers included.
    pub value_align: Align,
}

impl ThemeStyle {
    pub fn validate(&self) -> Result<()> {
        for t in CellType::ALL {
            if !self.padding.get(t).covers(&self.borders.get(t)) {
                return Err(Error::Config(format!(
                    "theme {}: {t} borders are wider than its padding",
                    self.theme
                )));
            }
        }
        Ok(())
    }

    /// Fill behind a cell, accounting for striping.
    pub fn fill(&self, cell_type: CellType, data_row_ordinal: Option<usize>) -> Rgb {
        match (self.stripe, data_row_ordinal) {
            (Some(stripe), Some(n))
                if n % 2 == 1 && matches!(cell_type, CellType::Data | CellType::RowHeader) =>
            {
                stripe
            }
            _ => self.background.get(cell_type),
        }
    }

    pub fn align(&self, cell_type: CellType, column_index: usize) -> Align {
        if cell_type == CellType::SectionTitle || column_index == 0 {
            self.label_align
        } else {
            self.value_align
        }
    }
}

/// Options the sampler draws from for tables of one theme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThemeSampling {
    pub typefaces: Vec<Typeface>,
    pub font_sizes_pt: Vec<f32>,
    pub date_formats: Vec<DateFormat>,
    pub currency_symbols: Vec<String>,
    pub bold_header_probability: f64,
    pub section_numbering_probability: f64,
    pub currency_row_probability: f64,
    pub parentheses_probability: f64,
    pub thousands_separator_probability: f64,
}

impl ThemeSampling {
    pub fn validate(&self, theme: usize) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(format!("theme {theme}: {what}")));
        if self.typefaces.is_empty() {
            return bad("no typefaces");
        }
        if self.font_sizes_pt.is_empty() || self.font_sizes_pt.iter().any(|s| !(*s > 0.0)) {
            return bad("font sizes must be non-empty and positive");
        }
        if self.date_formats.is_empty() {
            return bad("no date formats");
        }
        if self.currency_symbols.is_empty() {
            return bad("no currency symbols");
        }
        for p in [
            self.bold_header_probability,
            self.section_numbering_probability,
            self.currency_row_probability,
            self.parentheses_probability,
            self.thousands_separator_probability,
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad("probabilities must lie in [0, 1]");
            }
        }
        Ok(())
    }

    pub fn negative_style(&self, use_parentheses: bool) -> NegativeStyle {
        if use_parentheses {
            NegativeStyle::Parentheses
        } else {
            NegativeStyle::Minus
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theme {
    pub style: ThemeStyle,
    pub sampling: ThemeSampling,
}

fn rgb(hex: &str) -> Rgb {
    hex.parse().expect("built-in colour")
}

const PAD: Edges = Edges::symmetric(4, 8);

/// The six built-in themes: a Companies House filing style, four
/// spreadsheet styles and a stylised company-report style.
pub fn builtin_themes() -> Vec<Theme> {
    let white = Rgb::WHITE;
    let no_borders = PerType::uniform(Edges::ZERO);
    let plain_text = PerType::uniform(Rgb([17, 17, 17]));
    let headings_bold = PerType::uniform(false).with(CellType::SectionTitle, true);

    let companies_house = Theme {
        style: ThemeStyle {
            theme: 0,
            name: "companies-house".into(),
            padding: PerType::uniform(PAD),
            borders: no_borders.with(CellType::CurrencyUnit, Edges::new(0, 0, 1, 0)),
            border_color: Rgb::BLACK,
            page_background: white,
            background: PerType::uniform(white),
            stripe: None,
            text_color: PerType::uniform(Rgb::BLACK),
            bold: headings_bold,
            label_align: Align::Left,
            value_align: Align::Right,
        },
        sampling: ThemeSampling {
            typefaces: vec![Typeface::Serif, Typeface::Sans],
            font_sizes_pt: vec![8.0, 9.0, 10.0, 11.0],
            date_formats: DateFormat::ALL.to_vec(),
            currency_symbols: vec!["£".into()],
            bold_header_probability: 0.7,
            section_numbering_probability: 0.3,
            currency_row_probability: 1.0,
            parentheses_probability: 1.0,
            thousands_separator_probability: 1.0,
        },
    };

    let spreadsheet_sampling = |typefaces: Vec<Typeface>| ThemeSampling {
        typefaces,
        font_sizes_pt: vec![8.0, 9.0, 10.0, 11.0],
        date_formats: vec![DateFormat::SlashFullYear, DateFormat::Year, DateFormat::DotShortYear],
        currency_symbols: vec!["£".into(), "$".into(), "€".into()],
        bold_header_probability: 0.5,
        section_numbering_probability: 0.2,
        currency_row_probability: 0.5,
        parentheses_probability: 0.7,
        thousands_separator_probability: 0.8,
    };

    let grid = Edges::new(0, 1, 1, 0);
    let grey_grid = Theme {
        style: ThemeStyle {
            theme: 1,
            name: "spreadsheet-grid".into(),
            padding: PerType::uniform(PAD),
            borders: PerType::uniform(grid),
            border_color: rgb("#bfbfbf"),
            page_background: white,
            background: PerType::uniform(white)
                .with(CellType::ColumnHeader, rgb("#d9d9d9"))
                .with(CellType::CurrencyUnit, rgb("#d9d9d9")),
            stripe: None,
            text_color: plain_text,
            bold: headings_bold,
            label_align: Align::Left,
            value_align: Align::Right,
        },
        sampling: spreadsheet_sampling(vec![Typeface::Sans, Typeface::Serif]),
    };

    let banded_blue = Theme {
        style: ThemeStyle {
            theme: 2,
            name: "spreadsheet-banded".into(),
            padding: PerType::uniform(PAD),
            borders: no_borders
                .with(CellType::Data, Edges::new(0, 0, 1, 0))
                .with(CellType::RowHeader, Edges::new(0, 0, 1, 0)),
            border_color: rgb("#9bc2e6"),
            page_background: white,
            background: PerType::uniform(white)
                .with(CellType::ColumnHeader, rgb("#1f4e79"))
                .with(CellType::CurrencyUnit, rgb("#1f4e79")),
            stripe: Some(rgb("#ddebf7")),
            text_color: plain_text
                .with(CellType::ColumnHeader, white)
                .with(CellType::CurrencyUnit, white),
            bold: headings_bold.with(CellType::ColumnHeader, true),
            label_align: Align::Left,
            value_align: Align::Right,
        },
        sampling: spreadsheet_sampling(vec![Typeface::Sans]),
    };

    let ruled = Theme {
        style: ThemeStyle {
            theme: 3,
            name: "spreadsheet-ruled".into(),
            padding: PerType::uniform(Edges::symmetric(3, 7)),
            borders: PerType::uniform(Edges::new(0, 0, 1, 0)),
            border_color: rgb("#808080"),
            page_background: white,
            background: PerType::uniform(white).with(CellType::SectionTitle, rgb("#f2f2f2")),
            stripe: None,
            text_color: plain_text,
            bold: headings_bold,
            label_align: Align::Left,
            value_align: Align::Right,
        },
        sampling: spreadsheet_sampling(vec![Typeface::Condensed, Typeface::Sans]),
    };

    let green = rgb("#a9d08e");
    let green_grid = Theme {
        style: ThemeStyle {
            theme: 4,
            name: "spreadsheet-green".into(),
            padding: PerType::uniform(PAD),
            borders: PerType::uniform(grid),
            border_color: green,
            page_background: white,
            background: PerType::uniform(white)
                .with(CellType::ColumnHeader, rgb("#e2efda"))
                .with(CellType::CurrencyUnit, rgb("#e2efda"))
                .with(CellType::SectionTitle, rgb("#c6e0b4")),
            stripe: None,
            text_color: plain_text,
            bold: headings_bold,
            label_align: Align::Left,
            value_align: Align::Right,
        },
        sampling: spreadsheet_sampling(vec![Typeface::Sans, Typeface::Condensed, Typeface::Serif]),
    };

    let navy = rgb("#002060");
    let report = Theme {
        style: ThemeStyle {
            theme: 5,
            name: "company-report".into(),
            padding: PerType::uniform(Edges::symmetric(5, 9)),
            borders: no_borders.with(CellType::ColumnHeader, Edges::new(0, 0, 2, 0)),
            border_color: navy,
            page_background: white,
            background: PerType::uniform(white).with(CellType::SectionTitle, navy),
            stripe: Some(rgb("#f2f2f2")),
            text_color: PerType::uniform(rgb("#262626"))
                .with(CellType::SectionTitle, white)
                .with(CellType::ColumnHeader, navy)
                .with(CellType::CurrencyUnit, navy),
            bold: headings_bold,
            label_align: Align::Left,
            value_align: Align::Right,
        },
        sampling: ThemeSampling {
            typefaces: vec![Typeface::Sans],
            font_sizes_pt: vec![9.0, 10.0, 11.0],
            date_formats: vec![DateFormat::Year, DateFormat::LongMonth],
            currency_symbols: vec!["£".into(), "$".into(), "€".into()],
            bold_header_probability: 0.8,
            section_numbering_probability: 0.0,
            currency_row_probability: 1.0,
            parentheses_probability: 1.0,
            thousands_separator_probability: 1.0,
        },
    };

    vec![companies_house, grey_grid, banded_blue, ruled, green_grid, report]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_valid_and_numbered() {
        let themes = builtin_themes();
        assert_eq!(themes.len(), 6);
        for (i, t) in themes.iter().enumerate() {
            assert_eq!(t.style.theme, i);
            t.style.validate().unwrap();
            t.sampling.validate(i).unwrap();
        }
    }

    #[test]
    fn rgb_parse() {
        assert_eq!("#1f4e79".parse::<Rgb>().unwrap(), Rgb([0x1f, 0x4e, 0x79]));
        assert!("1f4e79".parse::<Rgb>().is_err());
        assert!("#1f4e7".parse::<Rgb>().is_err());
        assert_eq!(Rgb([1, 2, 255]).to_string(), "#0102ff");
    }

    #[test]
    fn styles_survive_toml() {
        #[derive(Serialize, Deserialize)]
        struct Doc {
            themes: Vec<Theme>,
        }
        let doc = Doc {
            themes: builtin_themes(),
        };
        let text = toml::to_string(&doc).unwrap();
        let back: Doc = toml::from_str(&text).unwrap();
        assert_eq!(back.themes, doc.themes);
    }

    #[test]
    fn striping_applies_to_odd_data_rows_only() {
        let t = &builtin_themes()[2].style;
        let stripe = t.stripe.unwrap();
        assert_eq!(t.fill(CellType::Data, Some(1)), stripe);
        assert_eq!(t.fill(CellType::RowHeader, Some(3)), stripe);
        assert_eq!(t.fill(CellType::Data, Some(0)), Rgb::WHITE);
        assert_ne!(t.fill(CellType::ColumnHeader, None), stripe);
    }
}
