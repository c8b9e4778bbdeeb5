//! Rasterization of a laid-out table, A4 pasting, and PNG encoding.

use ab_glyph::{point, Font, ScaleFont};
use image::codecs::png::{CompressionType, FilterType, PngEncoder};
use image::{ImageEncoder, Rgb as Pixel, RgbImage};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fonts::FontLibrary;
use crate::layout::{font_for, A4_HEIGHT, A4_MARGIN, A4_WIDTH};
use crate::model::{BBox, CellType, LayoutTree, Table};
use crate::theme::{Rgb, ThemeStyle};

/// Slack, in pixels, allowed between glyph ink and its advance-width word box.
pub const INK_SLACK: u32 = 2;

fn px(c: Rgb) -> Pixel<u8> {
    Pixel(c.0)
}

fn fill_rect(img: &mut RgbImage, x0: u32, y0: u32, x1: u32, y1: u32, color: Rgb) {
    let (w, h) = img.dimensions();
    for y in y0.min(h)..y1.min(h) {
        for x in x0.min(w)..x1.min(w) {
            img.put_pixel(x, y, px(color));
        }
    }
}

/// Ordinal of each row among data rows, used for striping.
pub fn data_row_ordinals(table: &Table) -> Vec<Option<usize>> {
    let mut n = 0;
    table
        .rows
        .iter()
        .map(|r| {
            if r.is_data_row() {
                n += 1;
                Some(n - 1)
            } else {
                None
            }
        })
        .collect()
}

/// Cell box minus the borders the style draws on it.
pub fn cell_interior(b: &BBox, style: &ThemeStyle, cell_type: CellType) -> (u32, u32, u32, u32) {
    let e = style.borders.get(cell_type);
    (b.x0() + e.left, b.y0() + e.top, b.x1() - e.right, b.y1() - e.bottom)
}

/// Draws backgrounds, borders and glyphs. `layout` must come from this
/// table and style, measured with `fonts`.
pub fn render(layout: &LayoutTree, table: &Table, style: &ThemeStyle, fonts: &FontLibrary) -> RgbImage {
    let mut img = RgbImage::from_pixel(layout.page_size.width, layout.page_size.height, px(style.page_background));
    let ordinals = data_row_ordinals(table);

    for cb in &layout.cells {
        let cell = &table.rows[cb.row].cells[cb.cell];
        let b = cb.bbox;
        fill_rect(&mut img, b.x0(), b.y0(), b.x1(), b.y1(), style.fill(cell.cell_type, ordinals[cb.row]));
        let e = style.borders.get(cell.cell_type);
        let c = style.border_color;
        fill_rect(&mut img, b.x0(), b.y0(), b.x1(), b.y0() + e.top, c);
        fill_rect(&mut img, b.x0(), b.y1() - e.bottom, b.x1(), b.y1(), c);
        fill_rect(&mut img, b.x0(), b.y0(), b.x0() + e.left, b.y1(), c);
        fill_rect(&mut img, b.x1() - e.right, b.y0(), b.x1(), b.y1(), c);
    }

    for w in &layout.words {
        let cell = &table.rows[w.row].cells[w.cell];
        let key = font_for(table, style, cell.cell_type);
        let face = fonts.face(key.typeface, key.weight);
        let scaled = face.as_scaled(fonts.scale(key));
        let color = style.text_color.get(cell.cell_type).0;
        let baseline = w.bbox.y0() as f32 + scaled.ascent();
        let mut x = w.bbox.x0() as f32;
        for ch in w.text.chars() {
            let id = scaled.glyph_id(ch);
            if id.0 == 0 {
                log::warn!("table {}: no glyph for {ch:?}, drawing notdef box", table.id);
            }
            let glyph = id.with_scale_and_position(scaled.scale(), point(x, baseline));
            x += scaled.h_advance(id).max(0.0);
            let Some(outline) = face.outline_glyph(glyph) else {
                continue;
            };
            let bounds = outline.px_bounds();
            let (iw, ih) = img.dimensions();
            outline.draw(|gx, gy, coverage| {
                let xx = bounds.min.x as i64 + i64::from(gx);
                let yy = bounds.min.y as i64 + i64::from(gy);
                if xx < 0 || yy < 0 || xx >= i64::from(iw) || yy >= i64::from(ih) {
                    return;
                }
                let c = coverage.clamp(0.0, 1.0);
                let p = img.get_pixel_mut(xx as u32, yy as u32);
                for k in 0..3 {
                    let bg = f32::from(p.0[k]);
                    let fg = f32::from(color[k]);
                    p.0[k] = (bg + (fg - bg) * c).round() as u8;
                }
            });
        }
    }
    img
}

/// Lossless PNG with a fixed encoder configuration, so equal images give
/// equal bytes.
pub fn encode_png(img: &RgbImage) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    PngEncoder::new_with_quality(&mut out, CompressionType::Default, FilterType::Adaptive).write_image(
        img.as_raw(),
        img.width(),
        img.height(),
        image::ExtendedColorType::Rgb8,
    )?;
    Ok(out)
}

pub fn decode_png(bytes: &[u8]) -> Result<RgbImage> {
    Ok(image::load_from_memory_with_format(bytes, image::ImageFormat::Png)?.to_rgb8())
}

/// Where a table image landed on the A4 canvas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub offset_x: u32,
    pub offset_y: u32,
    pub scale: f64,
    pub width: u32,
    pub height: u32,
}

impl Placement {
    pub fn region(&self) -> BBox {
        BBox::from_size(self.offset_x, self.offset_y, self.width, self.height).expect("non-empty placement")
    }

    /// Maps a box in table-image pixels onto the canvas. Edges round
    /// outward and are clamped to the pasted region.
    pub fn map_box(&self, b: &BBox) -> BBox {
        let map = |lo: u32, hi: u32, extent: u32| {
            let lo = ((f64::from(lo) * self.scale).floor() as u32).min(extent - 1);
            let hi = ((f64::from(hi) * self.scale).ceil() as u32).clamp(lo + 1, extent);
            (lo, hi)
        };
        let (x0, x1) = map(b.x0(), b.x1(), self.width);
        let (y0, y1) = map(b.y0(), b.y1(), self.height);
        BBox::new(x0, y0, x1, y1)
            .expect("mapped box keeps area")
            .translate(self.offset_x, self.offset_y)
    }
}

/// Pastes a table image at the top-left margin of a white A4 canvas,
/// shrinking it uniformly when it exceeds the content area.
pub fn paste_on_a4(table_image: &RgbImage) -> (RgbImage, Placement) {
    let (w, h) = table_image.dimensions();
    let (cw, ch) = crate::layout::a4_content_size();
    let scale = (f64::from(cw) / f64::from(w)).min(f64::from(ch) / f64::from(h)).min(1.0);
    let mut canvas = RgbImage::from_pixel(A4_WIDTH, A4_HEIGHT, Pixel([255, 255, 255]));
    let (pw, ph) = if scale < 1.0 {
        (
            ((f64::from(w) * scale).round() as u32).clamp(1, cw),
            ((f64::from(h) * scale).round() as u32).clamp(1, ch),
        )
    } else {
        (w, h)
    };
    if scale < 1.0 {
        let resized = image::imageops::resize(table_image, pw, ph, image::imageops::FilterType::Triangle);
        image::imageops::replace(&mut canvas, &resized, i64::from(A4_MARGIN), i64::from(A4_MARGIN));
    } else {
        image::imageops::replace(&mut canvas, table_image, i64::from(A4_MARGIN), i64::from(A4_MARGIN));
    }
    (
        canvas,
        Placement {
            offset_x: A4_MARGIN,
            offset_y: A4_MARGIN,
            scale,
            width: pw,
            height: ph,
        },
    )
}

fn outline(img: &mut RgbImage, b: &BBox, color: Rgb) {
    fill_rect(img, b.x0(), b.y0(), b.x1(), b.y0() + 1, color);
    fill_rect(img, b.x0(), b.y1() - 1, b.x1(), b.y1(), color);
    fill_rect(img, b.x0(), b.y0(), b.x0() + 1, b.y1(), color);
    fill_rect(img, b.x1() - 1, b.y0(), b.x1(), b.y1(), color);
}

/// The render next to a copy with annotation outlines: table red, rows
/// blue, cells green, words yellow.
pub fn render_debug(img: &RgbImage, layout: &LayoutTree) -> RgbImage {
    let (w, h) = img.dimensions();
    let mut out = RgbImage::from_pixel(w * 2, h, Pixel([255, 255, 255]));
    image::imageops::replace(&mut out, img, 0, 0);
    let mut overlay = img.clone();
    for c in &layout.cells {
        outline(&mut overlay, &c.bbox, Rgb([0, 170, 0]));
    }
    for r in &layout.rows {
        outline(&mut overlay, &r.bbox, Rgb([0, 0, 255]));
    }
    for word in &layout.words {
        outline(&mut overlay, &word.bbox, Rgb([230, 200, 0]));
    }
    outline(&mut overlay, &layout.table_box, Rgb([255, 0, 0]));
    image::imageops::replace(&mut out, &overlay, i64::from(w), 0);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordInk {
    /// Non-background pixels in the word's slot of its cell.
    pub ink: u32,
    /// Of those, pixels within the word box grown by [`INK_SLACK`].
    pub within_slack: u32,
    /// Non-background pixels inside the word box itself.
    pub within_box: u32,
}

impl WordInk {
    pub fn contained_fraction(&self) -> f64 {
        if self.ink == 0 {
            1.0
        } else {
            f64::from(self.within_slack) / f64::from(self.ink)
        }
    }
}

/// Measures, per word, where ink appears in a rendered image.
///
/// A word's slot spans its cell's interior vertically, and horizontally
/// runs to the midpoints of the gaps to neighbouring words (or to the cell
/// interior edge). Background is the cell's fill colour.
pub fn inspect_ink(img: &RgbImage, layout: &LayoutTree, table: &Table, style: &ThemeStyle) -> Result<Vec<WordInk>> {
    if img.dimensions() != (layout.page_size.width, layout.page_size.height) {
        return Err(Error::Geometry(format!(
            "image is {:?}, layout page is {}x{}",
            img.dimensions(),
            layout.page_size.width,
            layout.page_size.height
        )));
    }
    let ordinals = data_row_ordinals(table);
    let mut out = Vec::with_capacity(layout.words.len());
    for (i, w) in layout.words.iter().enumerate() {
        let cell = &table.rows[w.row].cells[w.cell];
        let cb = layout
            .cell_box(w.row, w.cell)
            .ok_or_else(|| Error::Geometry(format!("word {i} has no cell")))?;
        let (ix0, iy0, ix1, iy1) = cell_interior(&cb.bbox, style, cell.cell_type);
        let same_cell = |j: usize| layout.words.get(j).filter(|o| o.row == w.row && o.cell == w.cell);
        let left = match i.checked_sub(1).and_then(same_cell) {
            Some(prev) => (prev.bbox.x1() + w.bbox.x0()) / 2,
            None => ix0,
        };
        let right = match same_cell(i + 1) {
            Some(next) => (w.bbox.x1() + next.bbox.x0()).div_ceil(2),
            None => ix1,
        };
        let bg = px(style.fill(cell.cell_type, ordinals[w.row]));
        let b = w.bbox;
        let mut ink = WordInk {
            ink: 0,
            within_slack: 0,
            within_box: 0,
        };
        for y in iy0..iy1 {
            for x in left..right {
                if *img.get_pixel(x, y) == bg {
                    continue;
                }
                ink.ink += 1;
                let in_slack = x + INK_SLACK >= b.x0()
                    && x < b.x1() + INK_SLACK
                    && y + INK_SLACK >= b.y0()
                    && y < b.y1() + INK_SLACK;
                if in_slack {
                    ink.within_slack += 1;
                }
                if x >= b.x0() && x < b.x1() && y >= b.y0() && y < b.y1() {
                    ink.within_box += 1;
                }
            }
        }
        out.push(ink);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::layout_table;
    use crate::model::{Cell, PageMode, Row, Typeface, Typography};
    use crate::sampler::{derive_table_seed, sample_spec, sample_table, GeneratorConfig};
    use crate::theme::builtin_themes;

    fn generated(i: u64) -> (Table, LayoutTree, ThemeStyle) {
        let config = GeneratorConfig::default();
        let spec = sample_spec(derive_table_seed(21, i), (i % 6) as usize, &config).unwrap();
        let t = sample_table(&spec, &config).unwrap();
        let style = config.themes[t.theme].style.clone();
        let l = layout_table(&t, &style, FontLibrary::shared(), PageMode::TableBoundary).unwrap();
        (t, l, style)
    }

    #[test]
    fn render_is_byte_deterministic() {
        let (t, l, style) = generated(4);
        let a = encode_png(&render(&l, &t, &style, FontLibrary::shared())).unwrap();
        let b = encode_png(&render(&l, &t, &style, &FontLibrary::new())).unwrap();
        assert_eq!(a, b);
        let img = decode_png(&a).unwrap();
        assert_eq!(img.dimensions(), (l.page_size.width, l.page_size.height));
    }

    #[test]
    fn ink_stays_in_word_boxes() {
        for i in 0..60 {
            let (t, l, style) = generated(i);
            let img = render(&l, &t, &style, FontLibrary::shared());
            let report = inspect_ink(&img, &l, &t, &style).unwrap();
            for (w, ink) in l.words.iter().zip(&report) {
                assert!(ink.within_box > 0, "table {i}: {:?} has no ink", w.text);
                assert!(ink.contained_fraction() >= 0.99, "table {i}: {:?} leaks {ink:?}", w.text);
            }
        }
    }

    #[test]
    fn empty_table_draws_no_glyphs() {
        let t = Table {
            id: "empty".into(),
            theme: 1,
            column_count: 2,
            currency_symbol: "£".into(),
            typography: Typography {
                typeface: Typeface::Serif,
                font_size_pt: 10.0,
                bold_headers: false,
            },
            rows: vec![
                Row {
                    row_index: 0,
                    section_index: None,
                    cells: vec![
                        Cell::new(CellType::ColumnHeader, vec![], 0),
                        Cell::new(CellType::ColumnHeader, vec![], 1),
                    ],
                },
                Row {
                    row_index: 1,
                    section_index: None,
                    cells: vec![Cell::new(CellType::RowHeader, vec![], 0), Cell::new(CellType::Data, vec![], 1)],
                },
            ],
        };
        let style = builtin_themes()[1].style.clone();
        let l = layout_table(&t, &style, FontLibrary::shared(), PageMode::TableBoundary).unwrap();
        let img = render(&l, &t, &style, FontLibrary::shared());
        // Only fills and border colours appear.
        let allowed = [style.border_color, style.background.column_header, style.background.data, style.background.row_header];
        assert!(img.pixels().all(|p| allowed.iter().any(|c| c.0 == p.0)));
        for cb in &l.cells {
            let cell = &t.rows[cb.row].cells[cb.cell];
            let (x0, y0, x1, y1) = cell_interior(&cb.bbox, &style, cell.cell_type);
            let fill = style.fill(cell.cell_type, None).0;
            for y in y0..y1 {
                for x in x0..x1 {
                    assert_eq!(img.get_pixel(x, y).0, fill);
                }
            }
        }
    }

    #[test]
    fn missing_glyph_still_draws() {
        let mut t = generated(0).0;
        let row = t.rows.iter().position(|r| r.is_data_row()).unwrap();
        t.rows[row].cells[0].words = vec!["\u{10FFFD}".into()];
        let style = builtin_themes()[t.theme].style.clone();
        let l = layout_table(&t, &style, FontLibrary::shared(), PageMode::TableBoundary).unwrap();
        let img = render(&l, &t, &style, FontLibrary::shared());
        let ink = inspect_ink(&img, &l, &t, &style).unwrap();
        let k = l.words.iter().position(|w| w.text == "\u{10FFFD}").unwrap();
        assert!(ink[k].within_box > 0);
    }

    #[test]
    fn paste_small_image_at_margin() {
        let img = RgbImage::from_pixel(100, 100, Pixel([10, 20, 30]));
        let (canvas, p) = paste_on_a4(&img);
        assert_eq!(canvas.dimensions(), (794, 1123));
        assert_eq!((p.offset_x, p.offset_y, p.scale), (40, 40, 1.0));
        assert_eq!(*canvas.get_pixel(40, 40), Pixel([10, 20, 30]));
        assert_eq!(*canvas.get_pixel(139, 139), Pixel([10, 20, 30]));
        assert_eq!(*canvas.get_pixel(140, 140), Pixel([255, 255, 255]));
        assert_eq!(*canvas.get_pixel(39, 39), Pixel([255, 255, 255]));
    }

    #[test]
    fn paste_wide_image_scales_to_content_width() {
        let img = RgbImage::from_pixel(1428, 200, Pixel([0, 0, 0]));
        let (_, p) = paste_on_a4(&img);
        assert_eq!(p.scale, (794.0 - 2.0 * 40.0) / 1428.0);
        assert_eq!((p.width, p.height), (714, 100));
    }

    #[test]
    fn paste_and_crop_recovers_pixels() {
        let (t, l, style) = generated(7);
        let img = render(&l, &t, &style, FontLibrary::shared());
        let (canvas, p) = paste_on_a4(&img);
        assert_eq!(p.scale, 1.0);
        let crop = image::imageops::crop_imm(&canvas, p.offset_x, p.offset_y, img.width(), img.height()).to_image();
        assert_eq!(crop, img);
    }

    #[test]
    fn remapped_boxes_stay_in_the_pasted_region() {
        let (_, l, _) = generated(2);
        for scale_to in [l.page_size.width * 3, 900, 2000] {
            let big = RgbImage::new(scale_to, l.page_size.height * scale_to / l.page_size.width);
            let (_, p) = paste_on_a4(&big);
            let region = p.region();
            let factor = f64::from(scale_to) / f64::from(l.page_size.width);
            for w in &l.words {
                let b = w.bbox;
                let stretched = BBox::new(
                    (f64::from(b.x0()) * factor) as u32,
                    (f64::from(b.y0()) * factor) as u32,
                    ((f64::from(b.x1()) * factor) as u32).min(big.width()),
                    ((f64::from(b.y1()) * factor) as u32).min(big.height()),
                )
                .unwrap();
                assert!(region.contains(&p.map_box(&stretched)));
            }
        }
    }

    #[test]
    fn debug_render_is_side_by_side() {
        let (t, l, style) = generated(1);
        let img = render(&l, &t, &style, FontLibrary::shared());
        let dbg = render_debug(&img, &l);
        assert_eq!(dbg.dimensions(), (img.width() * 2, img.height()));
        assert_eq!(*dbg.get_pixel(img.width(), 0), Pixel([255, 0, 0]));
    }
}
