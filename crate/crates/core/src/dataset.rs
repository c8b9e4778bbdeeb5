//! Whole-dataset generation: theme quotas, stratified splits, the parallel
//! per-table pipeline, and corpus statistics.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::export::{
    append_manifest, read_manifest, to_csv, to_html, write_record_files, Annotation, DatasetRecord, RecordPaths,
    StructureDoc, MANIFEST_FILE,
};
use crate::fonts::FontLibrary;
use crate::format::parse_number;
use crate::layout::{a4_content_size, layout_table, A4_MARGIN};
use crate::model::{CellType, LayoutTree, PageMode, PageSize, Split, Table, TableSpec};
use crate::qa::{generate_qa_pairs, select_competition_pair};
use crate::render::{encode_png, paste_on_a4, render};
use crate::sampler::{
    derive_table_seed, largest_remainder, mix64, sample_spec, sample_table, theme_for_index, theme_of, theme_quotas,
    GeneratorConfig,
};

pub const SPLIT_WEIGHTS: [f64; 3] = [0.8, 0.1, 0.1];
/// Attempts per table after the first one is rejected.
pub const MAX_RETRIES: u64 = 32;
/// Start of the seed index space reserved for retries; table indices never
/// reach it.
pub const RETRY_BASE: u64 = 1 << 62;
pub const SUMMARY_FILE: &str = "summary.json";
const FONT_STEP_PT: f32 = 0.5;
const CHUNK: usize = 256;

/// Split of the table at position `index` of its theme's shuffled order.
pub fn assign_split(index: u64, theme_total: u64) -> Result<Split> {
    if index >= theme_total {
        return Err(Error::Config(format!("index {index} outside theme of {theme_total}")));
    }
    let quotas = largest_remainder(theme_total, &SPLIT_WEIGHTS);
    let mut end = 0;
    for (split, q) in Split::ALL.into_iter().zip(quotas) {
        end += q;
        if index < end {
            return Ok(split);
        }
    }
    unreachable!("quotas sum to the theme total")
}

/// Seed-shuffled order of a theme's tables: `order[i]` is the split position
/// of the theme's i-th table.
pub fn within_theme_order(master_seed: u64, theme: usize, theme_total: u64) -> Vec<u64> {
    let mut order: Vec<u64> = (0..theme_total).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(mix64(master_seed ^ mix64(theme as u64 + 1)));
    rng.set_stream(3);
    order.shuffle(&mut rng);
    order
}

/// Theme and split for every table index of a run.
pub fn plan(config: &GeneratorConfig, total: u64) -> Result<Vec<(usize, Split)>> {
    let quotas = theme_quotas(total, &config.theme_weights)?;
    let mut out = Vec::with_capacity(total as usize);
    let mut block_start = 0u64;
    for (theme, &q) in quotas.iter().enumerate() {
        let order = within_theme_order(config.master_seed, theme, q);
        for i in 0..q {
            debug_assert_eq!(theme_for_index(block_start + i, &quotas), theme);
            out.push((theme, assign_split(order[i as usize], q)?));
        }
        block_start += q;
    }
    Ok(out)
}

pub fn record_id(index: u64) -> String {
    format!("tab-{index:06}")
}

/// Seed of attempt `attempt` for table `index`; attempt 0 is the table's own
/// seed, later ones come from the reserved retry space.
pub fn attempt_seed(master_seed: u64, index: u64, attempt: u64) -> u64 {
    if attempt == 0 {
        derive_table_seed(master_seed, index)
    } else {
        derive_table_seed(
            master_seed,
            RETRY_BASE.wrapping_add(index.wrapping_mul(MAX_RETRIES)).wrapping_add(attempt - 1),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    Overflow { width: u32, height: u32 },
    NoQaPairs,
}

/// A laid-out table that fits the A4 content area.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub spec: TableSpec,
    pub table: Table,
    pub layout: LayoutTree,
}

/// Samples and lays out the table for `seed`, shrinking the font until it
/// fits on A4.
pub fn sample_candidate(
    seed: u64,
    theme: usize,
    config: &GeneratorConfig,
    fonts: &FontLibrary,
) -> Result<std::result::Result<Candidate, Rejection>> {
    let style = &theme_of(config, theme)?.style;
    let mut spec = sample_spec(seed, theme, config)?;
    let mut table = sample_table(&spec, config)?;
    let (cw, ch) = a4_content_size();
    loop {
        let layout = layout_table(&table, style, fonts, PageMode::TableBoundary)?;
        let PageSize { width, height } = layout.page_size;
        if width <= cw && height <= ch {
            return Ok(Ok(Candidate { spec, table, layout }));
        }
        let smaller = table.typography.font_size_pt - FONT_STEP_PT;
        if smaller < config.min_font_size_pt {
            return Ok(Err(Rejection::Overflow { width, height }));
        }
        table.typography.font_size_pt = smaller;
        spec.font_size_pt = smaller;
    }
}

/// Runs the per-table pipeline for table `index`, retrying rejected tables
/// with seeds from the retry space. Returns the record and the number of
/// rejected attempts.
pub fn build_record(
    config: &GeneratorConfig,
    index: u64,
    theme: usize,
    split: Split,
    with_a4: bool,
    fonts: &FontLibrary,
) -> Result<(DatasetRecord, u64)> {
    let style = &theme_of(config, theme)?.style;
    let mut last = None;
    for attempt in 0..=MAX_RETRIES {
        let seed = attempt_seed(config.master_seed, index, attempt);
        let cand = match sample_candidate(seed, theme, config, fonts)? {
            Ok(c) => c,
            Err(r) => {
                log::debug!("table {index} seed {seed:#x} rejected: {r:?}");
                last = Some((seed, r));
                continue;
            }
        };
        let qa_pairs = generate_qa_pairs(&cand.table, &cand.layout)?;
        if qa_pairs.is_empty() {
            log::debug!("table {index} seed {seed:#x} rejected: no QA pairs");
            last = Some((seed, Rejection::NoQaPairs));
            continue;
        }
        let competition_pair = select_competition_pair(&qa_pairs, seed)?;
        let image = render(&cand.layout, &cand.table, style, fonts);
        let (a4, placement) = paste_on_a4(&image);
        let id = record_id(index);
        let annotation = Annotation {
            paths: RecordPaths::for_id(&id, with_a4),
            id,
            theme,
            split,
            a4_placement: placement,
            html: to_html(&cand.table),
            csv: to_csv(&cand.table),
            structure: StructureDoc::build(&cand.table, &cand.layout, true)?,
            spec: cand.spec,
            qa_pairs,
            competition_pair,
            ocr_words: None,
        };
        let record = DatasetRecord {
            annotation,
            table_png: encode_png(&image)?,
            a4_png: if with_a4 { Some(encode_png(&a4)?) } else { None },
        };
        return Ok((record, attempt));
    }
    let (seed, why) = last.expect("at least one attempt");
    Err(Error::Generation(format!(
        "table {index}: all {} attempts rejected, last seed {seed:#x} ({why:?})",
        MAX_RETRIES + 1
    )))
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SplitCounts {
    pub train: u64,
    pub validation: u64,
    pub test: u64,
}

impl SplitCounts {
    pub fn add(&mut self, split: Split) {
        match split {
            Split::Train => self.train += 1,
            Split::Validation => self.validation += 1,
            Split::Test => self.test += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.train + self.validation + self.test
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildSummary {
    pub total: u64,
    pub master_seed: u64,
    pub themes: Vec<u64>,
    pub splits: SplitCounts,
    pub theme_splits: Vec<SplitCounts>,
    pub qa_pairs: u64,
    /// Tables that needed more than one attempt.
    pub retried_tables: u64,
    pub rejected_attempts: u64,
    pub with_a4: bool,
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub total: u64,
    pub workers: usize,
    pub with_a4: bool,
}

/// Generates `total` records under `out`. The directory contents depend only
/// on the config and `total`, never on the worker count.
pub fn build_dataset(config: &GeneratorConfig, out: &Path, opts: &BuildOptions) -> Result<BuildSummary> {
    config.validate()?;
    if opts.total == 0 {
        return Err(Error::Config("total must be at least 1".into()));
    }
    if opts.workers == 0 {
        return Err(Error::Config("worker count must be at least 1".into()));
    }
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let manifest = out.join(MANIFEST_FILE);
    if manifest.exists() {
        return Err(Error::Config(format!("{} already exists", manifest.display())));
    }
    fs::write(&manifest, b"").map_err(|e| Error::io(&manifest, e))?;

    let plan = plan(config, opts.total)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let fonts = FontLibrary::shared();
    let mut summary = BuildSummary {
        total: opts.total,
        master_seed: config.master_seed,
        themes: vec![0; config.theme_weights.len()],
        splits: SplitCounts::default(),
        theme_splits: vec![SplitCounts::default(); config.theme_weights.len()],
        qa_pairs: 0,
        retried_tables: 0,
        rejected_attempts: 0,
        with_a4: opts.with_a4,
    };
    let started = std::time::Instant::now();
    for (chunk_no, chunk) in plan.chunks(CHUNK).enumerate() {
        let base = (chunk_no * CHUNK) as u64;
        let results: Vec<Result<_>> = pool.install(|| {
            chunk
                .par_iter()
                .enumerate()
                .map(|(i, &(theme, split))| {
                    let (record, retries) = build_record(config, base + i as u64, theme, split, opts.with_a4, fonts)?;
                    let entry = write_record_files(&record, out)?;
                    Ok((entry, record.annotation.qa_pairs.len() as u64, retries))
                })
                .collect()
        });
        let mut entries = Vec::with_capacity(results.len());
        for r in results {
            let (entry, qa, retries) = r?;
            summary.themes[entry.theme] += 1;
            summary.splits.add(entry.split);
            summary.theme_splits[entry.theme].add(entry.split);
            summary.qa_pairs += qa;
            summary.rejected_attempts += retries;
            summary.retried_tables += u64::from(retries > 0);
            entries.push(entry);
        }
        append_manifest(out, &entries)?;
        log::info!(
            "{}/{} tables written ({:.1}s)",
            base + chunk.len() as u64,
            opts.total,
            started.elapsed().as_secs_f64()
        );
    }
    let path = out.join(SUMMARY_FILE);
    let json = serde_json::to_vec_pretty(&summary).expect("summary serializes");
    fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    Ok(summary)
}

/// Min, max, mean and histogram of a per-table quantity.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Distribution {
    pub min: u64,
    pub max: u64,
    pub mean: f64,
    pub histogram: BTreeMap<u64, u64>,
}

impl Distribution {
    fn from_values(values: &[u64]) -> Self {
        if values.is_empty() {
            return Distribution::default();
        }
        let mut histogram = BTreeMap::new();
        for &v in values {
            *histogram.entry(v).or_insert(0) += 1;
        }
        Distribution {
            min: *values.iter().min().unwrap(),
            max: *values.iter().max().unwrap(),
            mean: values.iter().sum::<u64>() as f64 / values.len() as f64,
            histogram,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissingFile {
    pub id: String,
    pub path: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct StatsReport {
    pub tables: u64,
    pub themes: BTreeMap<usize, u64>,
    pub splits: SplitCounts,
    pub rows: Distribution,
    pub columns: Distribution,
    pub qa_pairs_per_table: Distribution,
    pub qa_pairs: u64,
    pub data_cells: u64,
    pub empty_data_cells: u64,
    pub empty_cell_rate: f64,
    pub numeric_cells: u64,
    pub negative_cells: u64,
    pub negative_rate: f64,
    pub missing: Vec<MissingFile>,
}

fn rate(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Corpus statistics for the dataset under `root`. Missing files are listed
/// per id rather than failing the report.
pub fn stats(root: &Path) -> Result<StatsReport> {
    let manifest = read_manifest(root)?;
    let mut report = StatsReport {
        tables: manifest.len() as u64,
        ..StatsReport::default()
    };
    let (mut rows, mut cols, mut qas) = (Vec::new(), Vec::new(), Vec::new());
    for entry in &manifest {
        *report.themes.entry(entry.theme).or_insert(0) += 1;
        report.splits.add(entry.split);
        for rel in entry.paths.all() {
            if !root.join(rel).is_file() {
                report.missing.push(MissingFile {
                    id: entry.id.clone(),
                    path: rel.to_owned(),
                });
            }
        }
        let path = root.join(&entry.paths.annotation);
        if !path.is_file() {
            continue;
        }
        let a = Annotation::read(&path)?;
        rows.push(a.structure.rows.len() as u64);
        cols.push(
            a.structure
                .rows
                .first()
                .map_or(0, |r| r.cells.iter().map(|c| c.colspan as u64).sum()),
        );
        qas.push(a.qa_pairs.len() as u64);
        report.qa_pairs += a.qa_pairs.len() as u64;
        for cell in a.structure.rows.iter().flat_map(|r| &r.cells) {
            if cell.cell_type != CellType::Data {
                continue;
            }
            report.data_cells += 1;
            if cell.words.is_empty() {
                report.empty_data_cells += 1;
                continue;
            }
            let text: Vec<&str> = cell.words.iter().map(|w| w.text.as_str()).collect();
            if let Some(v) = parse_number(&text.join(" ")) {
                report.numeric_cells += 1;
                report.negative_cells += u64::from(v < 0);
            }
        }
    }
    report.rows = Distribution::from_values(&rows);
    report.columns = Distribution::from_values(&cols);
    report.qa_pairs_per_table = Distribution::from_values(&qas);
    report.empty_cell_rate = rate(report.empty_data_cells, report.data_cells);
    report.negative_rate = rate(report.negative_cells, report.numeric_cells);
    Ok(report)
}

/// Offset of the table on every A4 image.
pub fn a4_offset() -> (u32, u32) {
    (A4_MARGIN, A4_MARGIN)
}
