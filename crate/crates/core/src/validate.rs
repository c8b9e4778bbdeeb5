//! Consistency checks over a generated dataset directory.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::export::{
    parse_csv, parse_html, read_manifest, Annotation, ManifestEntry, A4_IMAGE_DIR, ANNOTATION_DIR, IMAGE_DIR,
};
use crate::layout::{to_virtual_coords, A4_HEIGHT, A4_WIDTH};
use crate::qa::question_for;

const MAX_LISTED: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub failure_count: usize,
    /// The first few failures.
    pub failures: Vec<String>,
}

impl CheckResult {
    fn new(name: &str) -> Self {
        CheckResult {
            name: name.into(),
            passed: true,
            checked: 0,
            failure_count: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, outcome: std::result::Result<(), String>) {
        self.checked += 1;
        if let Err(msg) = outcome {
            self.passed = false;
            self.failure_count += 1;
            if self.failures.len() < MAX_LISTED {
                self.failures.push(msg);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub records: usize,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check_manifest(root: &Path, entries: &[ManifestEntry], annotations: &[Option<Annotation>]) -> CheckResult {
    let mut c = CheckResult::new("manifest");
    let mut expected = HashSet::new();
    for (e, a) in entries.iter().zip(annotations) {
        expected.extend(e.paths.all().map(str::to_owned));
        c.record((|| {
            for rel in e.paths.all() {
                if !root.join(rel).is_file() {
                    return Err(format!("{}: missing {rel}", e.id));
                }
            }
            let a = a.as_ref().ok_or_else(|| format!("{}: unreadable annotation", e.id))?;
            if (a.id.as_str(), a.theme, a.split) != (e.id.as_str(), e.theme, e.split) || a.paths != e.paths {
                return Err(format!("{}: annotation disagrees with its manifest line", e.id));
            }
            Ok(())
        })());
    }
    for dir in [IMAGE_DIR, A4_IMAGE_DIR, ANNOTATION_DIR] {
        let Ok(listing) = fs::read_dir(root.join(dir)) else {
            continue;
        };
        let mut names: BTreeSet<String> = BTreeSet::new();
        for f in listing.flatten() {
            names.insert(format!("{dir}/{}", f.file_name().to_string_lossy()));
        }
        for name in names {
            c.record(if expected.contains(&name) {
                Ok(())
            } else {
                Err(format!("{name} is not in the manifest"))
            });
        }
    }
    c
}

fn geometry(root: &Path, a: &Annotation) -> std::result::Result<(), String> {
    let s = &a.structure;
    let layout = s.to_layout();
    layout.validate().map_err(|e| format!("{}: {e}", a.id))?;
    let (w, h) = image::image_dimensions(root.join(&a.paths.image)).map_err(|e| format!("{}: {e}", a.id))?;
    if (w, h) != (s.page_size.width, s.page_size.height) {
        return Err(format!("{}: image is {w}x{h}, structure page is {:?}", a.id, s.page_size));
    }
    if let Some(rel) = &a.paths.image_a4 {
        let dims = image::image_dimensions(root.join(rel)).map_err(|e| format!("{}: {e}", a.id))?;
        if dims != (A4_WIDTH, A4_HEIGHT) {
            return Err(format!("{}: A4 image is {dims:?}", a.id));
        }
        let placed = a.a4_placement.map_box(&s.bbox);
        if placed.x1() > A4_WIDTH || placed.y1() > A4_HEIGHT {
            return Err(format!("{}: table leaves the A4 page", a.id));
        }
    }
    let virt = |b, v: Option<crate::model::VirtualBox>| -> std::result::Result<(), String> {
        match v {
            None => Ok(()),
            Some(v) => {
                let want = to_virtual_coords(b, w, h).map_err(|e| e.to_string())?;
                if v == want {
                    Ok(())
                } else {
                    Err(format!("{}: virtual box {v:?}, expected {want:?}", a.id))
                }
            }
        }
    };
    virt(&s.bbox, s.virtual_bbox)?;
    for row in &s.rows {
        virt(&row.bbox, row.virtual_bbox)?;
        for cell in &row.cells {
            virt(&cell.bbox, cell.virtual_bbox)?;
            for word in &cell.words {
                virt(&word.bbox, word.virtual_bbox)?;
            }
        }
    }
    Ok(())
}

fn spans(a: &Annotation) -> std::result::Result<(), String> {
    let words: Vec<&str> = a.structure.flattened_words().iter().map(|w| w.text.as_str()).collect();
    if a.qa_pairs.is_empty() {
        return Err(format!("{}: no question-answer pairs", a.id));
    }
    if a.competition().is_none() {
        return Err(format!("{}: competition pair {} out of range", a.id, a.competition_pair));
    }
    for (i, p) in a.qa_pairs.iter().enumerate() {
        p.check_span(&words).map_err(|e| format!("{} pair {i}: {e}", a.id))?;
        if p.question != question_for(&p.row_key, &p.column_key) {
            return Err(format!("{} pair {i}: question does not name its keys", a.id));
        }
    }
    Ok(())
}

fn triple(a: &Annotation) -> std::result::Result<(), String> {
    let html = parse_html(&a.html).map_err(|e| format!("{}: {e}", a.id))?;
    let csv = parse_csv(&a.csv).map_err(|e| format!("{}: {e}", a.id))?;
    let json = a.structure.text_grid();
    if html.text_grid() != json {
        return Err(format!("{}: HTML and structure grids differ", a.id));
    }
    if csv != json {
        return Err(format!("{}: CSV and structure grids differ", a.id));
    }
    for (hrow, srow) in html.cells.iter().zip(&a.structure.rows) {
        for ((class, colspan, _), cell) in hrow.iter().zip(&srow.cells) {
            if class != cell.cell_type.as_str() || *colspan != cell.colspan {
                return Err(format!("{}: HTML cell type or span differs from structure", a.id));
            }
        }
    }
    Ok(())
}

/// Runs the manifest, geometry, span and HTML/CSV/JSON agreement checks.
/// A directory without a manifest is an error rather than a failed check.
pub fn validate_dataset(root: &Path) -> Result<ValidationReport> {
    if !root.is_dir() {
        return Err(Error::Config(format!("{} is not a directory", root.display())));
    }
    let entries = read_manifest(root)?;
    if entries.is_empty() {
        return Err(Error::Config(format!("{} has an empty manifest", root.display())));
    }
    let mut read_check = CheckResult::new("annotations_readable");
    let annotations: Vec<Option<Annotation>> = entries
        .iter()
        .map(|e| match Annotation::read(&root.join(&e.paths.annotation)) {
            Ok(a) => {
                read_check.record(Ok(()));
                Some(a)
            }
            Err(err) => {
                read_check.record(Err(err.to_string()));
                None
            }
        })
        .collect();
    let mut geo = CheckResult::new("geometry");
    let mut span = CheckResult::new("span_fidelity");
    let mut tri = CheckResult::new("triple_consistency");
    for a in annotations.iter().flatten() {
        geo.record(geometry(root, a));
        span.record(spans(a));
        tri.record(triple(a));
    }
    let checks = vec![check_manifest(root, &entries, &annotations), read_check, geo, span, tri];
    Ok(ValidationReport {
        records: entries.len(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}
