//! Text measurement and the embedded font set.

use ab_glyph::{Font, FontRef, PxScale, ScaleFont};

use crate::model::{Typeface, Weight};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FontKey {
    pub typeface: Typeface,
    pub size_pt: f32,
    pub weight: Weight,
}

/// Text measurement used by the layout engine. Widths are whole pixels.
///
/// Implementations must be deterministic, and `text_width(a + b)` must never
/// be smaller than `text_width(a)`.
pub trait FontMetrics: Send + Sync {
    fn text_width(&self, text: &str, font: FontKey) -> u32;

    fn line_height(&self, font: FontKey) -> u32;

    /// Gap between adjacent words of one text run.
    fn space_width(&self, font: FontKey) -> u32 {
        self.text_width(" ", font).max(1)
    }
}

/// Fixed-advance metrics: every character is `advance` pixels wide.
#[derive(Debug, Clone, Copy)]
pub struct MonospaceMetrics {
    pub advance: u32,
    pub space: u32,
    pub line_height: u32,
}

impl MonospaceMetrics {
    pub fn scaled(&self, k: u32) -> Self {
        MonospaceMetrics {
            advance: self.advance * k,
            space: self.space * k,
            line_height: self.line_height * k,
        }
    }
}

impl FontMetrics for MonospaceMetrics {
    fn text_width(&self, text: &str, _font: FontKey) -> u32 {
        text.chars().count() as u32 * self.advance
    }

    fn line_height(&self, _font: FontKey) -> u32 {
        self.line_height
    }

    fn space_width(&self, _font: FontKey) -> u32 {
        self.space
    }
}

const SANS: &[u8] = include_bytes!("../fonts/DejaVuSans.ttf");
const SANS_BOLD: &[u8] = include_bytes!("../fonts/DejaVuSans-Bold.ttf");
const SERIF: &[u8] = include_bytes!("../fonts/DejaVuSerif.ttf");
const SERIF_BOLD: &[u8] = include_bytes!("../fonts/DejaVuSerif-Bold.ttf");
const MONO: &[u8] = include_bytes!("../fonts/DejaVuSansMono.ttf");
const MONO_BOLD: &[u8] = include_bytes!("../fonts/DejaVuSansMono-Bold.ttf");

/// The embedded fonts: DejaVu Serif, DejaVu Sans, and DejaVu Sans Mono
/// standing in for a condensed face, each in regular and bold.
pub struct FontLibrary {
    faces: [FontRef<'static>; 6],
}

impl FontLibrary {
    pub fn new() -> Self {
        let load = |data: &'static [u8]| FontRef::try_from_slice(data).expect("embedded font parses");
        FontLibrary {
            faces: [
                load(SERIF),
                load(SERIF_BOLD),
                load(SANS),
                load(SANS_BOLD),
                load(MONO),
                load(MONO_BOLD),
            ],
        }
    }

    /// Process-wide shared instance.
    pub fn shared() -> &'static FontLibrary {
        static LIB: std::sync::OnceLock<FontLibrary> = std::sync::OnceLock::new();
        LIB.get_or_init(FontLibrary::new)
    }

    pub fn face(&self, typeface: Typeface, weight: Weight) -> &FontRef<'static> {
        let base = match typeface {
            Typeface::Serif => 0,
            Typeface::Sans => 2,
            Typeface::Condensed => 4,
        };
        let bold = usize::from(weight == Weight::Bold);
        &self.faces[base + bold]
    }

    pub fn scale(&self, font: FontKey) -> PxScale {
        let face = self.face(font.typeface, font.weight);
        face.pt_to_px_scale(font.size_pt)
            .expect("embedded fonts declare units per em")
    }

    /// Distance from the top of a line box to the baseline, in pixels.
    pub fn ascent(&self, font: FontKey) -> f32 {
        self.face(font.typeface, font.weight)
            .as_scaled(self.scale(font))
            .ascent()
    }

    pub fn has_glyph(&self, font: FontKey, ch: char) -> bool {
        self.face(font.typeface, font.weight).glyph_id(ch).0 != 0
    }
}

impl Default for FontLibrary {
    fn default() -> Self {
        Self::new()
    }
}

impl FontMetrics for FontLibrary {
    // Advance widths only. Kerning is ignored so width stays monotone in
    // appended text.
    fn text_width(&self, text: &str, font: FontKey) -> u32 {
        let scaled = self.face(font.typeface, font.weight).as_scaled(self.scale(font));
        let w: f32 = text
            .chars()
            .map(|c| scaled.h_advance(scaled.glyph_id(c)).max(0.0))
            .sum();
        w.ceil() as u32
    }

    fn line_height(&self, font: FontKey) -> u32 {
        let scaled = self.face(font.typeface, font.weight).as_scaled(self.scale(font));
        (scaled.ascent() - scaled.descent()).ceil() as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn key(weight: Weight) -> FontKey {
        FontKey {
            typeface: Typeface::Sans,
            size_pt: 10.0,
            weight,
        }
    }

    #[test]
    fn sizes_are_plausible() {
        let lib = FontLibrary::shared();
        let lh = lib.line_height(key(Weight::Regular));
        // 10pt at 96 dpi is a 13.3 px em.
        assert!((14..=18).contains(&lh), "line height {lh}");
        let w = lib.text_width("52,160", key(Weight::Regular));
        assert!((30..=50).contains(&w), "width {w}");
        assert!(lib.text_width("Bold", key(Weight::Bold)) >= lib.text_width("Bold", key(Weight::Regular)));
        assert!(lib.has_glyph(key(Weight::Regular), '£'));
        assert!(lib.has_glyph(key(Weight::Regular), '€'));
        assert!(!lib.has_glyph(key(Weight::Regular), '\u{10FFFD}'));
    }

    #[test]
    fn measurement_is_deterministic() {
        let lib = FontLibrary::new();
        let a = lib.text_width("Creditors: amounts falling due", key(Weight::Bold));
        let b = FontLibrary::new().text_width("Creditors: amounts falling due", key(Weight::Bold));
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn width_is_monotone_in_suffix(a in "[ -~£€]{0,20}", b in "[ -~£€]{0,20}",
                                       face in 0usize..3, bold: bool, size in 6.0f32..14.0) {
            let lib = FontLibrary::shared();
            let font = FontKey {
                typeface: Typeface::ALL[face],
                size_pt: size,
                weight: if bold { Weight::Bold } else { Weight::Regular },
            };
            let ab = format!("{a}{b}");
            prop_assert!(lib.text_width(&ab, font) >= lib.text_width(&a, font));
        }
    }
}
