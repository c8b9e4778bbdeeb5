//! Pixel geometry for a table: a small box-model engine.
//!
//! Cells are single-line. Each column is as wide as its widest cell plus
//! padding, each row as tall as its tallest line plus padding, and words sit
//! on one text run separated by the font's space advance.

use crate::error::{Error, Result};
use crate::fonts::{FontKey, FontMetrics};
use crate::model::{
    BBox, CellBox, CellType, LayoutTree, PageMode, PageSize, RowBox, Table, VirtualBox, Weight,
    WordBox,
};
use crate::theme::{Align, ThemeStyle};

/// A4 at 96 pixels per inch.
pub const A4_WIDTH: u32 = 794;
pub const A4_HEIGHT: u32 = 1123;
pub const A4_MARGIN: u32 = 40;

pub const fn a4_content_size() -> (u32, u32) {
    (A4_WIDTH - 2 * A4_MARGIN, A4_HEIGHT - 2 * A4_MARGIN)
}

pub fn font_for(table: &Table, style: &ThemeStyle, cell_type: CellType) -> FontKey {
    let bold = style.bold.get(cell_type) || (table.typography.bold_headers && cell_type.is_heading());
    FontKey {
        typeface: table.typography.typeface,
        size_pt: table.typography.font_size_pt,
        weight: if bold { Weight::Bold } else { Weight::Regular },
    }
}

struct Measured {
    word_widths: Vec<u32>,
    space: u32,
    content_width: u32,
    line_height: u32,
}

pub fn layout_table(
    table: &Table,
    style: &ThemeStyle,
    metrics: &dyn FontMetrics,
    page_mode: PageMode,
) -> Result<LayoutTree> {
    let measured: Vec<Vec<Measured>> = table
        .rows
        .iter()
        .map(|row| {
            row.cells
                .iter()
                .map(|cell| {
                    let font = font_for(table, style, cell.cell_type);
                    let word_widths: Vec<u32> = cell
                        .words
                        .iter()
                        .map(|w| metrics.text_width(w, font).max(1))
                        .collect();
                    let space = metrics.space_width(font);
                    let gaps = word_widths.len().saturating_sub(1) as u32;
                    Measured {
                        content_width: word_widths.iter().sum::<u32>() + gaps * space,
                        word_widths,
                        space,
                        line_height: metrics.line_height(font).max(1),
                    }
                })
                .collect()
        })
        .collect();

    let mut col_widths = vec![1u32; table.column_count];
    for (row, ms) in table.rows.iter().zip(&measured) {
        for (cell, m) in row.cells.iter().zip(ms) {
            if cell.colspan == 1 {
                let pad = style.padding.get(cell.cell_type);
                let need = m.content_width + pad.left + pad.right;
                let w = &mut col_widths[cell.column_index];
                *w = (*w).max(need);
            }
        }
    }
    // Spanning cells that do not fit widen their first column.
    for (row, ms) in table.rows.iter().zip(&measured) {
        for (cell, m) in row.cells.iter().zip(ms) {
            if cell.colspan > 1 {
                let pad = style.padding.get(cell.cell_type);
                let need = m.content_width + pad.left + pad.right;
                let span = cell.column_index..cell.column_index + cell.colspan;
                let have: u32 = col_widths[span].iter().sum();
                if need > have {
                    col_widths[cell.column_index] += need - have;
                }
            }
        }
    }

    let row_heights: Vec<u32> = table
        .rows
        .iter()
        .zip(&measured)
        .map(|(row, ms)| {
            row.cells
                .iter()
                .zip(ms)
                .map(|(cell, m)| {
                    let pad = style.padding.get(cell.cell_type);
                    m.line_height + pad.top + pad.bottom
                })
                .max()
                .unwrap_or(1)
        })
        .collect();

    let table_width: u32 = col_widths.iter().sum();
    let table_height: u32 = row_heights.iter().sum::<u32>().max(1);
    let (origin, page_size) = match page_mode {
        PageMode::TableBoundary => (
            (0, 0),
            PageSize {
                width: table_width,
                height: table_height,
            },
        ),
        PageMode::A4Page => {
            let (limit_width, limit_height) = a4_content_size();
            if table_width > limit_width || table_height > limit_height {
                return Err(Error::LayoutOverflow {
                    width: table_width,
                    height: table_height,
                    limit_width,
                    limit_height,
                });
            }
            (
                (A4_MARGIN, A4_MARGIN),
                PageSize {
                    width: A4_WIDTH,
                    height: A4_HEIGHT,
                },
            )
        }
    };

    let mut col_x = Vec::with_capacity(table.column_count + 1);
    col_x.push(origin.0);
    for w in &col_widths {
        col_x.push(col_x.last().unwrap() + w);
    }

    let table_box = BBox::from_size(origin.0, origin.1, table_width, table_height)?;
    let mut rows = Vec::with_capacity(table.rows.len());
    let mut cells = Vec::with_capacity(table.cell_count());
    let mut words = Vec::with_capacity(table.word_count());
    let mut y = origin.1;
    for (r, ((row, ms), &height)) in table.rows.iter().zip(&measured).zip(&row_heights).enumerate() {
        rows.push(RowBox {
            row: r,
            bbox: BBox::from_size(origin.0, y, table_width, height)?,
        });
        for (c, (cell, m)) in row.cells.iter().zip(ms).enumerate() {
            let x0 = col_x[cell.column_index];
            let x1 = col_x[cell.column_index + cell.colspan];
            let cell_box = BBox::new(x0, y, x1, y + height)?;
            cells.push(CellBox {
                row: r,
                cell: c,
                bbox: cell_box,
            });
            if cell.words.is_empty() {
                continue;
            }
            let pad = style.padding.get(cell.cell_type);
            let mut x = match style.align(cell.cell_type, cell.column_index) {
                Align::Left => x0 + pad.left,
                Align::Right => x1 - pad.right - m.content_width,
            };
            let slack = height - pad.top - pad.bottom - m.line_height;
            let word_y = y + pad.top + slack / 2;
            for (w, (text, &width)) in cell.words.iter().zip(&m.word_widths).enumerate() {
                words.push(WordBox {
                    row: r,
                    cell: c,
                    word: w,
                    text: text.clone(),
                    bbox: BBox::from_size(x, word_y, width, m.line_height)?,
                });
                x += width + m.space;
            }
        }
        y += height;
    }

    Ok(LayoutTree {
        page_mode,
        page_size,
        table_box,
        rows,
        cells,
        words,
    })
}

/// Maps a pixel box onto the 0..=1000 grid with `floor(c * 1000 / extent)`.
pub fn to_virtual_coords(b: &BBox, page_width: u32, page_height: u32) -> Result<VirtualBox> {
    if page_width == 0 || page_height == 0 {
        return Err(Error::Geometry("page has zero extent".into()));
    }
    if b.x1() > page_width || b.y1() > page_height {
        return Err(Error::Geometry(format!(
            "box {:?} lies outside a {page_width}x{page_height} page",
            b.to_array()
        )));
    }
    let scale = |c: u32, extent: u32| (u64::from(c) * 1000 / u64::from(extent)) as u16;
    Ok(VirtualBox {
        x0: scale(b.x0(), page_width),
        y0: scale(b.y0(), page_height),
        x1: scale(b.x1(), page_width),
        y1: scale(b.y1(), page_height),
    })
}

/// Words in reading order with their boxes.
pub fn flatten_words(layout: &LayoutTree) -> Vec<(&str, BBox)> {
    layout
        .words
        .iter()
        .map(|w| (w.text.as_str(), w.bbox))
        .collect()
}

/// Re-anchors a table-boundary layout at an offset inside a larger page.
pub fn place_on_page(layout: &LayoutTree, dx: u32, dy: u32, page: PageSize, mode: PageMode) -> Result<LayoutTree> {
    let moved = LayoutTree {
        page_mode: mode,
        page_size: page,
        table_box: layout.table_box.translate(dx, dy),
        rows: layout
            .rows
            .iter()
            .map(|r| RowBox {
                bbox: r.bbox.translate(dx, dy),
                ..*r
            })
            .collect(),
        cells: layout
            .cells
            .iter()
            .map(|c| CellBox {
                bbox: c.bbox.translate(dx, dy),
                ..*c
            })
            .collect(),
        words: layout
            .words
            .iter()
            .map(|w| WordBox {
                bbox: w.bbox.translate(dx, dy),
                ..w.clone()
            })
            .collect(),
    };
    moved.validate()?;
    Ok(moved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fonts::{FontLibrary, MonospaceMetrics};
    use crate::model::{Cell, Row, Typeface, Typography};
    use crate::sampler::{derive_table_seed, sample_spec, sample_table, GeneratorConfig};
    use crate::theme::{builtin_themes, Edges, PerType};
    use num_rational::Ratio;
    use rand::{Rng, SeedableRng};

    fn typography() -> Typography {
        Typography {
            typeface: Typeface::Sans,
            font_size_pt: 10.0,
            bold_headers: true,
        }
    }

    fn grid_table(cells: &[&[&str]]) -> Table {
        let rows = cells
            .iter()
            .enumerate()
            .map(|(r, line)| Row {
                row_index: r,
                section_index: None,
                cells: line
                    .iter()
                    .enumerate()
                    .map(|(c, text)| {
                        let t = if r == 0 {
                            CellType::ColumnHeader
                        } else if c == 0 {
                            CellType::RowHeader
                        } else {
                            CellType::Data
                        };
                        Cell::from_text(t, text, c)
                    })
                    .collect(),
            })
            .collect();
        Table {
            id: "grid".into(),
            theme: 0,
            rows,
            column_count: cells[0].len(),
            currency_symbol: "£".into(),
            typography: typography(),
        }
    }

    fn corpus(n: u64) -> Vec<Table> {
        let config = GeneratorConfig::default();
        (0..n)
            .map(|i| {
                let seed = derive_table_seed(3, i);
                let spec = sample_spec(seed, (i % 6) as usize, &config).unwrap();
                sample_table(&spec, &config).unwrap()
            })
            .collect()
    }

    #[test]
    fn single_word_is_nested_strictly() {
        let mut t = grid_table(&[&["word"]]);
        t.rows[0].cells[0].cell_type = CellType::ColumnHeader;
        let style = &builtin_themes()[0].style;
        let l = layout_table(&t, style, FontLibrary::shared(), PageMode::TableBoundary).unwrap();
        l.validate_against(&t).unwrap();
        let (w, c, r) = (l.words[0].bbox, l.cells[0].bbox, l.rows[0].bbox);
        assert!(c.x0() < w.x0() && w.x1() < c.x1() && c.y0() < w.y0() && w.y1() < c.y1());
        assert!(r.contains(&c) && l.table_box.contains(&r));
        assert_eq!(l.table_box.to_array(), [0, 0, l.page_size.width, l.page_size.height]);
    }

    #[test]
    fn reading_order_of_a_two_by_two_grid() {
        let t = grid_table(&[&["a", "b"], &["c", "d"]]);
        let style = &builtin_themes()[1].style;
        let l = layout_table(&t, style, FontLibrary::shared(), PageMode::TableBoundary).unwrap();
        let texts: Vec<_> = flatten_words(&l).into_iter().map(|(t, _)| t).collect();
        assert_eq!(texts, ["a", "b", "c", "d"]);
    }

    #[test]
    fn a4_anchoring_and_overflow() {
        let t = grid_table(&[&["", "2021"], &["Stock", "52,160"]]);
        let style = &builtin_themes()[0].style;
        let l = layout_table(&t, style, FontLibrary::shared(), PageMode::A4Page).unwrap();
        l.validate_against(&t).unwrap();
        assert_eq!((l.table_box.x0(), l.table_box.y0()), (A4_MARGIN, A4_MARGIN));
        assert_eq!(l.page_size, PageSize { width: 794, height: 1123 });

        let long = "word ".repeat(200);
        let wide = grid_table(&[&["", "2021"], &[long.trim(), "1"]]);
        assert!(matches!(
            layout_table(&wide, style, FontLibrary::shared(), PageMode::A4Page),
            Err(Error::LayoutOverflow { .. })
        ));
        assert!(layout_table(&wide, style, FontLibrary::shared(), PageMode::TableBoundary).is_ok());
    }

    #[test]
    fn generated_layouts_are_sound() {
        let themes = builtin_themes();
        for t in corpus(300) {
            let style = &themes[t.theme].style;
            let l = layout_table(&t, style, FontLibrary::shared(), PageMode::TableBoundary).unwrap();
            l.validate_against(&t).unwrap();

            // Column alignment: every single-span cell of a column shares its x-extent.
            let mut extents: Vec<Option<(u32, u32)>> = vec![None; t.column_count];
            for cb in &l.cells {
                let cell = &t.rows[cb.row].cells[cb.cell];
                if cell.colspan != 1 {
                    continue;
                }
                let e = (cb.bbox.x0(), cb.bbox.x1());
                let slot = &mut extents[cell.column_index];
                assert_eq!(*slot.get_or_insert(e), e, "column {} misaligned", cell.column_index);
            }

            // Reading order equals a geometric sort.
            let mut sorted: Vec<usize> = (0..l.words.len()).collect();
            sorted.sort_by_key(|&i| {
                let w = &l.words[i];
                let cell = l.cell_box(w.row, w.cell).unwrap().bbox;
                (l.rows[w.row].bbox.y0(), cell.x0(), w.bbox.x0())
            });
            assert!(sorted.iter().enumerate().all(|(k, &i)| k == i));

            // Value cells are right-aligned, labels left-aligned.
            for w in &l.words {
                let cell = &t.rows[w.row].cells[w.cell];
                let cb = l.cell_box(w.row, w.cell).unwrap().bbox;
                let pad = style.padding.get(cell.cell_type);
                if cell.column_index > 0 && w.word + 1 == cell.words.len() {
                    assert_eq!(w.bbox.x1(), cb.x1() - pad.right);
                }
                if (cell.column_index == 0 || cell.cell_type == CellType::SectionTitle) && w.word == 0 {
                    assert_eq!(w.bbox.x0(), cb.x0() + pad.left);
                }
            }
            assert_eq!(l.words.len(), t.rows.iter().flat_map(|r| &r.cells).map(|c| c.words.len()).sum::<usize>());
        }
    }

    #[test]
    fn layout_is_linear_in_text_scale() {
        let mut style = builtin_themes()[1].style.clone();
        style.padding = PerType::uniform(Edges::ZERO);
        style.borders = PerType::uniform(Edges::ZERO);
        let base = MonospaceMetrics {
            advance: 3,
            space: 2,
            line_height: 7,
        };
        for t in corpus(40) {
            let a = layout_table(&t, &style, &base, PageMode::TableBoundary).unwrap();
            let b = layout_table(&t, &style, &base.scaled(2), PageMode::TableBoundary).unwrap();
            let double = |x: BBox| x.to_array().map(|v| v * 2);
            assert_eq!(double(a.table_box), b.table_box.to_array());
            for (x, y) in a.cells.iter().zip(&b.cells) {
                assert_eq!(double(x.bbox), y.bbox.to_array());
            }
            for (x, y) in a.words.iter().zip(&b.words) {
                assert_eq!(double(x.bbox), y.bbox.to_array());
            }
        }
    }

    #[test]
    fn virtual_coordinate_examples() {
        let full = BBox::new(0, 0, 794, 1123).unwrap();
        let v = to_virtual_coords(&full, 794, 1123).unwrap();
        assert_eq!([v.x0, v.y0, v.x1, v.y1], [0, 0, 1000, 1000]);
        let b = BBox::new(100, 100, 200, 200).unwrap();
        let v = to_virtual_coords(&b, 1000, 1000).unwrap();
        assert_eq!([v.x0, v.y0, v.x1, v.y1], [100, 100, 200, 200]);
        assert!(to_virtual_coords(&b, 0, 10).is_err());
        assert!(to_virtual_coords(&b, 150, 1000).is_err());
    }

    // Oracle: exact rational arithmetic, floored.
    #[test]
    fn virtual_coordinates_match_rational_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10_000 {
            let pw = rng.gen_range(1..5000u32);
            let ph = rng.gen_range(1..5000u32);
            if pw < 2 || ph < 2 {
                continue;
            }
            let x0 = rng.gen_range(0..pw - 1);
            let x1 = rng.gen_range(x0 + 1..=pw);
            let y0 = rng.gen_range(0..ph - 1);
            let y1 = rng.gen_range(y0 + 1..=ph);
            let v = to_virtual_coords(&BBox::new(x0, y0, x1, y1).unwrap(), pw, ph).unwrap();
            let oracle = |c: u32, e: u32| Ratio::new(u64::from(c) * 1000, u64::from(e)).floor().to_integer();
            assert_eq!(u64::from(v.x0), oracle(x0, pw));
            assert_eq!(u64::from(v.y0), oracle(y0, ph));
            assert_eq!(u64::from(v.x1), oracle(x1, pw));
            assert_eq!(u64::from(v.y1), oracle(y1, ph));
            assert!(v.x0 <= v.x1 && v.y0 <= v.y1 && v.x1 <= 1000 && v.y1 <= 1000);
        }
    }
}
