//! Seeded sampling of table blueprints and their content.

use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::format_number;
use crate::model::{Cell, CellType, Row, Table, TableSpec, Typography};
use crate::theme::{builtin_themes, Theme};

const BUILTIN_VOCABULARY: &str = include_str!("../data/vocabulary.txt");
const BUILTIN_SECTION_TITLES: &str = include_str!("../data/section_titles.txt");

pub const DEFAULT_THEME_WEIGHTS: [f64; 6] = [0.40, 0.12, 0.12, 0.12, 0.12, 0.12];

/// Parses a newline-delimited word or title list, skipping blank lines.
pub fn parse_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_owned)
        .collect()
}

pub fn builtin_vocabulary() -> Vec<String> {
    parse_list(BUILTIN_VOCABULARY)
}

pub fn builtin_section_titles() -> Vec<String> {
    parse_list(BUILTIN_SECTION_TITLES)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntRange {
    pub min: u64,
    pub max: u64,
}

impl IntRange {
    pub const fn new(min: u64, max: u64) -> Self {
        IntRange { min, max }
    }

    pub fn contains(&self, v: u64) -> bool {
        (self.min..=self.max).contains(&v)
    }

    fn as_range(&self) -> RangeInclusive<u64> {
        self.min..=self.max
    }
}

/// Everything the generator needs. Loadable from TOML; omitted keys take
/// their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorConfig {
    pub master_seed: u64,
    /// One weight per theme, summing to 1.
    pub theme_weights: Vec<f64>,
    pub sections: IntRange,
    pub rows_per_section: IntRange,
    pub value_columns: IntRange,
    pub row_header_words: IntRange,
    /// Magnitude range of data values.
    pub number_range: IntRange,
    pub negative_probability: f64,
    pub empty_cell_probability: f64,
    pub note_column_probability: f64,
    /// Chance that a note-column cell carries a note number.
    pub note_fill_probability: f64,
    /// Smallest font size tried when shrinking a table to fit an A4 page.
    pub min_font_size_pt: f32,
    pub vocabulary_file: Option<PathBuf>,
    pub section_titles_file: Option<PathBuf>,
    #[serde(skip, default = "builtin_vocabulary")]
    pub vocabulary: Vec<String>,
    #[serde(skip, default = "builtin_section_titles")]
    pub section_titles: Vec<String>,
    pub themes: Vec<Theme>,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            master_seed: 0,
            theme_weights: DEFAULT_THEME_WEIGHTS.to_vec(),
            sections: IntRange::new(1, 3),
            rows_per_section: IntRange::new(2, 8),
            value_columns: IntRange::new(1, 3),
            row_header_words: IntRange::new(1, 6),
            number_range: IntRange::new(1, 9_999_999),
            negative_probability: 0.15,
            empty_cell_probability: 0.05,
            note_column_probability: 0.5,
            note_fill_probability: 0.3,
            min_font_size_pt: 6.0,
            vocabulary_file: None,
            section_titles_file: None,
            vocabulary: builtin_vocabulary(),
            section_titles: builtin_section_titles(),
            themes: builtin_themes(),
        }
    }
}

impl GeneratorConfig {
    /// Loads a TOML config. Word-list paths are resolved against the config
    /// file's directory.
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml_str(&text, base)
    }

    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let mut config: GeneratorConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if let Some(p) = &config.vocabulary_file {
            config.vocabulary = read_list(&base_dir.join(p))?;
        }
        if let Some(p) = &config.section_titles_file {
            config.section_titles = read_list(&base_dir.join(p))?;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        validate_weights(&self.theme_weights)?;
        if self.theme_weights.len() != self.themes.len() {
            return bad(format!(
                "{} theme weights for {} themes",
                self.theme_weights.len(),
                self.themes.len()
            ));
        }
        for (i, theme) in self.themes.iter().enumerate() {
            if theme.style.theme != i {
                return bad(format!("theme at position {i} declares id {}", theme.style.theme));
            }
            theme.style.validate()?;
            theme.sampling.validate(i)?;
        }
        if self.vocabulary.is_empty() {
            return bad("vocabulary is empty".into());
        }
        if self.vocabulary.iter().any(|w| w.contains(char::is_whitespace)) {
            return bad("vocabulary entries must be single words".into());
        }
        if self.section_titles.is_empty() {
            return bad("section title list is empty".into());
        }
        for (name, r) in [
            ("sections", self.sections),
            ("rows_per_section", self.rows_per_section),
            ("value_columns", self.value_columns),
            ("row_header_words", self.row_header_words),
            ("number_range", self.number_range),
        ] {
            if r.min == 0 || r.min > r.max {
                return bad(format!("{name}: need 1 <= min <= max, got {}..={}", r.min, r.max));
            }
        }
        for (name, p) in [
            ("negative_probability", self.negative_probability),
            ("empty_cell_probability", self.empty_cell_probability),
            ("note_column_probability", self.note_column_probability),
            ("note_fill_probability", self.note_fill_probability),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1]"));
            }
        }
        if !(self.min_font_size_pt > 0.0) {
            return bad("min_font_size_pt must be positive".into());
        }
        Ok(())
    }
}

fn read_list(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_list(&text))
}

fn validate_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() || weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
        return Err(Error::Config("weights must be non-negative and non-empty".into()));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-6 {
        return Err(Error::Config(format!("weights sum to {sum}, not 1")));
    }
    Ok(())
}

pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for table `table_index` of a run. A bijection in each argument, so
/// distinct indices under one master seed (or distinct master seeds at one
/// index) never collide.
pub fn derive_table_seed(master_seed: u64, table_index: u64) -> u64 {
    mix64(mix64(master_seed).wrapping_add(table_index.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

/// Hamilton apportionment of `total` units. Remainders within 1e-9 of each
/// other count as tied and go to the lower index.
pub fn largest_remainder(total: u64, weights: &[f64]) -> Vec<u64> {
    let exact: Vec<f64> = weights
        .iter()
        .map(|w| {
            let q = w * total as f64;
            if (q - q.round()).abs() < 1e-9 {
                q.round()
            } else {
                q
            }
        })
        .collect();
    let mut counts: Vec<u64> = exact.iter().map(|q| q.floor() as u64).collect();
    let assigned: u64 = counts.iter().sum();
    let mut leftover = total.saturating_sub(assigned);
    let mut order: Vec<usize> = (0..weights.len()).collect();
    let rem = |i: usize| exact[i] - exact[i].floor();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (rem(a), rem(b));
        if (ra - rb).abs() < 1e-9 {
            a.cmp(&b)
        } else {
            rb.partial_cmp(&ra).expect("finite remainders")
        }
    });
    for i in order.into_iter().cycle() {
        if leftover == 0 {
            break;
        }
        counts[i] += 1;
        leftover -= 1;
    }
    counts
}

/// Exact theme counts for a run of `total` tables.
pub fn theme_quotas(total: u64, weights: &[f64]) -> Result<Vec<u64>> {
    validate_weights(weights)?;
    Ok(largest_remainder(total, weights))
}

/// Theme of table `table_index`. Themes occupy consecutive index blocks
/// whose sizes are the exact quotas.
pub fn assign_theme(table_index: u64, total: u64, weights: &[f64]) -> Result<usize> {
    if table_index >= total {
        return Err(Error::Config(format!("table index {table_index} outside run of {total}")));
    }
    let quotas = theme_quotas(total, weights)?;
    Ok(theme_for_index(table_index, &quotas))
}

pub(crate) fn theme_for_index(table_index: u64, quotas: &[u64]) -> usize {
    let mut end = 0;
    for (theme, q) in quotas.iter().enumerate() {
        end += q;
        if table_index < end {
            return theme;
        }
    }
    unreachable!("quotas cover the run")
}

pub(crate) fn theme_of(config: &GeneratorConfig, theme: usize) -> Result<&Theme> {
    config
        .themes
        .get(theme)
        .ok_or_else(|| Error::Config(format!("theme {theme} is not configured")))
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("validated non-empty pool")
}

pub fn sample_spec(seed: u64, theme: usize, config: &GeneratorConfig) -> Result<TableSpec> {
    let pools = &theme_of(config, theme)?.sampling;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let section_count = rng.gen_range(config.sections.as_range()) as usize;
    let rows_per_section = (0..section_count)
        .map(|_| rng.gen_range(config.rows_per_section.as_range()) as usize)
        .collect();
    let use_parentheses = rng.gen_bool(pools.parentheses_probability);
    Ok(TableSpec {
        theme,
        typeface: *pick(&mut rng, &pools.typefaces),
        font_size_pt: *pick(&mut rng, &pools.font_sizes_pt),
        bold_headers: rng.gen_bool(pools.bold_header_probability),
        section_count,
        rows_per_section,
        value_column_count: rng.gen_range(config.value_columns.as_range()) as usize,
        has_note_column: rng.gen_bool(config.note_column_probability),
        has_currency_row: rng.gen_bool(pools.currency_row_probability),
        date_format: *pick(&mut rng, &pools.date_formats),
        negative_style: pools.negative_style(use_parentheses),
        thousands_separator: rng.gen_bool(pools.thousands_separator_probability),
        section_numbering: rng.gen_bool(pools.section_numbering_probability),
        per_table_seed: seed,
    })
}

/// Removes a leading "N. " section number, if present.
pub fn strip_section_number(text: &str) -> &str {
    match text.split_once(' ') {
        Some((head, rest))
            if head.len() > 1
                && head.ends_with('.')
                && head[..head.len() - 1].chars().all(|c| c.is_ascii_digit()) =>
        {
            rest
        }
        _ => text,
    }
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn sample_header_date(rng: &mut ChaCha8Rng) -> NaiveDate {
    const DAYS: [u32; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];
    let year = rng.gen_range(1972..=2030);
    let month = rng.gen_range(1..=12u32);
    let day = rng.gen_range(1..=DAYS[month as usize - 1]);
    NaiveDate::from_ymd_opt(year, month, day).expect("day within month")
}

/// Fills a blueprint with content: header dates, optional currency row,
/// section titles, random row labels and formatted numbers.
pub fn sample_table(spec: &TableSpec, config: &GeneratorConfig) -> Result<Table> {
    let pools = &theme_of(config, spec.theme)?.sampling;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.per_table_seed);
    rng.set_stream(1);

    let note_offset = usize::from(spec.has_note_column);
    let value_start = 1 + note_offset;
    let column_count = value_start + spec.value_column_count;
    let currency_symbol = pick(&mut rng, &pools.currency_symbols).clone();
    let mut rows: Vec<Row> = Vec::new();
    let push_row = |rows: &mut Vec<Row>, cells: Vec<Cell>, section: Option<usize>| {
        let row_index = rows.len();
        rows.push(Row {
            cells,
            row_index,
            section_index: section,
        });
    };

    let date = sample_header_date(&mut rng);
    let mut header = vec![Cell::new(CellType::ColumnHeader, vec![], 0)];
    if spec.has_note_column {
        header.push(Cell::from_text(CellType::ColumnHeader, "Note", 1));
    }
    for k in 0..spec.value_column_count {
        let year_date = date
            .with_year_offset(-(k as i32))
            .expect("header dates avoid 29 February");
        header.push(Cell::from_text(
            CellType::ColumnHeader,
            &spec.date_format.format(year_date),
            value_start + k,
        ));
    }
    push_row(&mut rows, header, None);

    if spec.has_currency_row {
        let mut cells = vec![Cell::new(CellType::CurrencyUnit, vec![], 0)];
        if spec.has_note_column {
            cells.push(Cell::new(CellType::CurrencyUnit, vec![], 1));
        }
        for k in 0..spec.value_column_count {
            cells.push(Cell::new(
                CellType::CurrencyUnit,
                vec![currency_symbol.clone()],
                value_start + k,
            ));
        }
        push_row(&mut rows, cells, None);
    }

    let titles: Vec<&String> = if config.section_titles.len() >= spec.section_count {
        config
            .section_titles
            .choose_multiple(&mut rng, spec.section_count)
            .collect()
    } else {
        (0..spec.section_count)
            .map(|_| pick(&mut rng, &config.section_titles))
            .collect()
    };

    for (section, title) in titles.into_iter().enumerate() {
        let text = if spec.section_numbering {
            format!("{}. {title}", section + 1)
        } else {
            title.clone()
        };
        push_row(
            &mut rows,
            vec![Cell::spanning(
                CellType::SectionTitle,
                crate::model::split_words(&text),
                0,
                column_count,
            )],
            Some(section),
        );
        for _ in 0..spec.rows_per_section[section] {
            let n_words = rng.gen_range(config.row_header_words.as_range()) as usize;
            let words: Vec<String> = (0..n_words)
                .map(|i| {
                    let w = pick(&mut rng, &config.vocabulary);
                    if i == 0 {
                        capitalize(w)
                    } else {
                        w.clone()
                    }
                })
                .collect();
            let mut cells = vec![Cell::new(CellType::RowHeader, words, 0)];
            if spec.has_note_column {
                let note = if rng.gen_bool(config.note_fill_probability) {
                    vec![rng.gen_range(1..=30u32).to_string()]
                } else {
                    vec![]
                };
                cells.push(Cell::new(CellType::Data, note, 1));
            }
            for k in 0..spec.value_column_count {
                let words = if rng.gen_bool(config.empty_cell_probability) {
                    vec![]
                } else {
                    let magnitude = rng.gen_range(config.number_range.as_range()) as i64;
                    let value = if rng.gen_bool(config.negative_probability) {
                        -magnitude
                    } else {
                        magnitude
                    };
                    vec![format_number(value, spec.negative_style, spec.thousands_separator)]
                };
                cells.push(Cell::new(CellType::Data, words, value_start + k));
            }
            push_row(&mut rows, cells, Some(section));
        }
    }

    let table = Table {
        id: format!("{:016x}", spec.per_table_seed),
        theme: spec.theme,
        rows,
        column_count,
        currency_symbol,
        typography: Typography {
            typeface: spec.typeface,
            font_size_pt: spec.font_size_pt,
            bold_headers: spec.bold_headers,
        },
    };
    table.validate()?;
    Ok(table)
}

trait YearOffset: Sized {
    fn with_year_offset(&self, years: i32) -> Option<Self>;
}

impl YearOffset for NaiveDate {
    fn with_year_offset(&self, years: i32) -> Option<Self> {
        use chrono::Datelike;
        self.with_year(self.year() + years)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn seeds_are_stable_and_distinct() {
        assert_eq!(derive_table_seed(42, 7), derive_table_seed(42, 7));
        assert_ne!(derive_table_seed(42, 0), derive_table_seed(42, 1));
        assert_ne!(derive_table_seed(42, 5), derive_table_seed(43, 5));
        // Frozen so that a change to the derivation is noticed.
        assert_eq!(derive_table_seed(0, 0), mix64(mix64(0)));
    }

    // Oracle: collisions are found by brute-force set membership over a
    // million outputs, independent of the bijection argument.
    #[test]
    fn no_collisions_over_a_million_indices() {
        let mut seen = HashSet::with_capacity(1 << 21);
        for i in 0..1_000_000u64 {
            assert!(seen.insert(derive_table_seed(42, i)), "collision at index {i}");
        }
        let mut seen = HashSet::with_capacity(1 << 21);
        for s in 0..1_000_000u64 {
            assert!(seen.insert(derive_table_seed(s, 3)), "collision at seed {s}");
        }
    }

    #[test]
    fn theme_quotas_match_fixed_proportions() {
        let w = DEFAULT_THEME_WEIGHTS;
        assert_eq!(
            theme_quotas(100_000, &w).unwrap(),
            vec![40_000, 12_000, 12_000, 12_000, 12_000, 12_000]
        );
        // 4, then 1.2 each: one leftover goes to the lowest tied theme.
        assert_eq!(theme_quotas(10, &w).unwrap(), vec![4, 2, 1, 1, 1, 1]);
        assert_eq!(theme_quotas(1000, &w).unwrap(), vec![400, 120, 120, 120, 120, 120]);
        assert_eq!(assign_theme(0, 1, &w).unwrap(), 0);
        assert!(theme_quotas(10, &[0.5, 0.4]).is_err());
    }

    #[test]
    fn assign_theme_covers_quotas() {
        let w = DEFAULT_THEME_WEIGHTS;
        let mut counts = [0u64; 6];
        for i in 0..10 {
            counts[assign_theme(i, 10, &w).unwrap()] += 1;
        }
        assert_eq!(counts, [4, 2, 1, 1, 1, 1]);
        assert!(assign_theme(10, 10, &w).is_err());
    }

    #[test]
    fn largest_remainder_sums_to_total() {
        for total in 0..500 {
            let q = largest_remainder(total, &[0.8, 0.1, 0.1]);
            assert_eq!(q.iter().sum::<u64>(), total);
        }
        assert_eq!(largest_remainder(7, &[0.8, 0.1, 0.1]), vec![5, 1, 1]);
    }

    #[test]
    fn spec_is_deterministic_and_in_range() {
        let config = GeneratorConfig::default();
        assert_eq!(
            sample_spec(99, 0, &config).unwrap(),
            sample_spec(99, 0, &config).unwrap()
        );
        let mut notes = 0;
        for i in 0..10_000u64 {
            let s = sample_spec(derive_table_seed(1, i), 0, &config).unwrap();
            assert!(config.sections.contains(s.section_count as u64));
            assert_eq!(s.rows_per_section.len(), s.section_count);
            assert!(s.rows_per_section.iter().all(|&r| config.rows_per_section.contains(r as u64)));
            assert!(config.value_columns.contains(s.value_column_count as u64));
            let pools = &config.themes[0].sampling;
            assert!(pools.typefaces.contains(&s.typeface));
            assert!(pools.font_sizes_pt.contains(&s.font_size_pt));
            assert!(pools.date_formats.contains(&s.date_format));
            notes += usize::from(s.has_note_column);
        }
        let freq = notes as f64 / 10_000.0;
        assert!((freq - config.note_column_probability).abs() <= 0.02, "note frequency {freq}");
        assert!(sample_spec(1, 6, &config).is_err());
    }

    #[test]
    fn table_structure() {
        let config = GeneratorConfig::default();
        let mut spec = sample_spec(5, 0, &config).unwrap();
        spec.section_count = 2;
        spec.rows_per_section = vec![3, 4];
        spec.section_numbering = false;
        let t = sample_table(&spec, &config).unwrap();
        let titles: Vec<_> = t
            .rows
            .iter()
            .flat_map(|r| &r.cells)
            .filter(|c| c.cell_type == CellType::SectionTitle)
            .collect();
        assert_eq!(titles.len(), 2);
        for c in titles {
            assert!(config.section_titles.contains(&c.text()));
            assert_eq!(c.colspan, t.column_count);
        }
        assert_eq!(t.rows.iter().filter(|r| r.is_header_row()).count(), 1);
        assert_eq!(sample_table(&spec, &config).unwrap(), t);
    }

    #[test]
    fn numbered_section_titles_strip_back_to_the_list() {
        let config = GeneratorConfig::default();
        let mut spec = sample_spec(11, 0, &config).unwrap();
        spec.section_numbering = true;
        let t = sample_table(&spec, &config).unwrap();
        let mut n = 0;
        for c in t.rows.iter().flat_map(|r| &r.cells) {
            if c.cell_type == CellType::SectionTitle {
                n += 1;
                let text = c.text();
                assert!(text.starts_with(&format!("{n}. ")));
                assert!(config.section_titles.iter().any(|s| s == strip_section_number(&text)));
            }
        }
        assert_eq!(strip_section_number("Stocks"), "Stocks");
        assert_eq!(strip_section_number("12. Net assets"), "Net assets");
    }

    #[test]
    fn corpus_scan_finds_empty_and_parenthesised_values() {
        let config = GeneratorConfig::default();
        let vocab: HashSet<&str> = config.vocabulary.iter().map(String::as_str).collect();
        let (mut empty, mut parens) = (0, 0);
        for i in 0..1000u64 {
            let seed = derive_table_seed(9, i);
            let theme = (i % 6) as usize;
            let t = sample_table(&sample_spec(seed, theme, &config).unwrap(), &config).unwrap();
            for c in t.rows.iter().flat_map(|r| &r.cells) {
                match c.cell_type {
                    CellType::Data if c.column_index > 0 => {
                        if c.is_empty() {
                            empty += 1;
                        } else if c.words[0].starts_with('(') {
                            parens += 1;
                        }
                    }
                    CellType::RowHeader => {
                        assert!((1..=6).contains(&c.words.len()));
                        for w in &c.words {
                            assert!(vocab.contains(w.to_lowercase().as_str()), "{w} not in vocabulary");
                        }
                    }
                    _ => {}
                }
            }
        }
        assert!(empty > 0 && parens > 0, "empty {empty}, parenthesised {parens}");
    }

    #[test]
    fn config_toml() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("words.txt"), "alpha\nbeta\n\ngamma\n").unwrap();
        let path = dir.path().join("gen.toml");
        std::fs::write(
            &path,
            "master_seed = 9\nvocabulary_file = \"words.txt\"\nnegative_probability = 0.5\n",
        )
        .unwrap();
        let c = GeneratorConfig::from_toml_file(&path).unwrap();
        assert_eq!(c.master_seed, 9);
        assert_eq!(c.vocabulary, vec!["alpha", "beta", "gamma"]);
        assert_eq!(c.negative_probability, 0.5);
        assert_eq!(c.section_titles.len(), 50);

        let full = GeneratorConfig::default().to_toml().unwrap();
        let back = GeneratorConfig::from_toml_str(&full, dir.path()).unwrap();
        assert_eq!(back, GeneratorConfig::default());

        assert!(GeneratorConfig::from_toml_str("theme_weights = [0.5, 0.5]", dir.path()).is_err());
        assert!(GeneratorConfig::from_toml_str("bogus = 1", dir.path()).is_err());
    }

    #[test]
    fn builtin_lists() {
        assert_eq!(builtin_vocabulary().len(), 10_000);
        assert!(!builtin_section_titles().is_empty());
    }
}
