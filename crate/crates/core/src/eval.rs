//! Span-based question answering evaluation: contexts, answer search,
//! exact match, constrained decoding, OCR corruption and error analysis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::export::{read_manifest, Annotation, OcrWord};
use crate::layout::{to_virtual_coords, A4_HEIGHT, A4_WIDTH};
use crate::model::{PageSize, QaPair, Split, VirtualBox};
use crate::sampler::{derive_table_seed, mix64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ContextSource {
    GroundTruth,
    OcrOutput,
}

/// The words a model sees, with virtual-coordinate boxes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Context {
    pub words: Vec<String>,
    pub boxes: Vec<VirtualBox>,
    pub source: ContextSource,
}

impl Context {
    pub fn new(words: Vec<String>, boxes: Vec<VirtualBox>, source: ContextSource) -> Result<Self> {
        if words.len() != boxes.len() {
            return Err(Error::Eval(format!("{} words but {} boxes", words.len(), boxes.len())));
        }
        Ok(Context { words, boxes, source })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanPrediction {
    pub start: usize,
    /// Exclusive.
    pub end: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_scores: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end_scores: Option<Vec<f64>>,
}

impl SpanPrediction {
    pub fn span(start: usize, end: usize) -> Self {
        SpanPrediction {
            start,
            end,
            start_scores: None,
            end_scores: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ErrorCategory {
    Correct,
    HeaderNotInContext,
    AnswerNotInContext,
    WrongSpan,
}

impl ErrorCategory {
    pub const ALL: [ErrorCategory; 4] = [
        ErrorCategory::Correct,
        ErrorCategory::HeaderNotInContext,
        ErrorCategory::AnswerNotInContext,
        ErrorCategory::WrongSpan,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorCategory::Correct => "Correct",
            ErrorCategory::HeaderNotInContext => "HeaderNotInContext",
            ErrorCategory::AnswerNotInContext => "AnswerNotInContext",
            ErrorCategory::WrongSpan => "WrongSpan",
        }
    }
}

impl fmt::Display for ErrorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ErrorCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ErrorCategory::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Eval(format!("unknown error category {s:?}")))
    }
}

/// First window of consecutive words whose space-joined text equals `text`.
pub fn find_window<S: AsRef<str>>(words: &[S], text: &str) -> Option<(usize, usize)> {
    if text.is_empty() {
        return None;
    }
    for start in 0..words.len() {
        let mut joined = String::new();
        for (end, w) in words.iter().enumerate().skip(start) {
            if end > start {
                joined.push(' ');
            }
            joined.push_str(w.as_ref());
            if joined.len() > text.len() || !text.starts_with(joined.as_str()) {
                break;
            }
            if joined.len() == text.len() {
                return Some((start, end + 1));
            }
        }
    }
    None
}

/// Start and end of the first occurrence of `answer_text` in the context.
pub fn find_answer_span(context: &Context, answer_text: &str) -> Option<(usize, usize)> {
    find_window(&context.words, answer_text)
}

fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Picks a span from per-position scores. `end_scores[i]` scores word `i` as
/// the last word of the answer, so the reported end is `i + 1`. With the
/// constraint the end word is chosen among positions at or after the start,
/// which guarantees `end > start`.
pub fn decode_span(start_scores: &[f64], end_scores: &[f64], constrained: bool) -> Result<SpanPrediction> {
    if start_scores.len() != end_scores.len() {
        return Err(Error::Eval(format!(
            "score vectors differ in length: {} and {}",
            start_scores.len(),
            end_scores.len()
        )));
    }
    if start_scores.is_empty() || (constrained && start_scores.len() < 2) {
        return Err(Error::Eval(format!("cannot decode {} scores", start_scores.len())));
    }
    if start_scores.iter().chain(end_scores).any(|s| s.is_nan()) {
        return Err(Error::Eval("scores contain NaN".into()));
    }
    let start = argmax(start_scores);
    let end_raw = if constrained {
        start + argmax(&end_scores[start..])
    } else {
        argmax(end_scores)
    };
    Ok(SpanPrediction {
        start,
        end: end_raw + 1,
        start_scores: Some(start_scores.to_vec()),
        end_scores: Some(end_scores.to_vec()),
    })
}

/// Strictly positional: the text under the span is never compared.
pub fn exact_match(pred: &SpanPrediction, gold_start: usize, gold_end: usize) -> bool {
    pred.start == gold_start && pred.end == gold_end
}

fn classify_failure(context: &Context, gold: &QaPair) -> ErrorCategory {
    if find_window(&context.words, &gold.row_key).is_none() || find_window(&context.words, &gold.column_key).is_none() {
        ErrorCategory::HeaderNotInContext
    } else if find_answer_span(context, &gold.answer_text).is_none() {
        ErrorCategory::AnswerNotInContext
    } else {
        ErrorCategory::WrongSpan
    }
}

/// Assigns a prediction to exactly one category. The gold span is the one
/// scored against: the pair's own span for ground-truth contexts, the first
/// occurrence (or `(0, 0)`) for OCR contexts.
pub fn classify_error(context: &Context, gold: &QaPair, pred: &SpanPrediction) -> ErrorCategory {
    let (gs, ge) = gold_span(context, gold);
    if exact_match(pred, gs, ge) {
        ErrorCategory::Correct
    } else {
        classify_failure(context, gold)
    }
}

/// The span a prediction is scored against.
pub fn gold_span(context: &Context, pair: &QaPair) -> (usize, usize) {
    match context.source {
        ContextSource::GroundTruth => (pair.start, pair.end),
        ContextSource::OcrOutput => find_answer_span(context, &pair.answer_text).unwrap_or((0, 0)),
    }
}

const DIGIT_CONFUSIONS: [char; 10] = ['O', 'l', 'Z', 'B', 'A', 'S', 'b', 'T', 'B', 'g'];

/// A character an OCR engine might read instead of `c`. Never a digit, so a
/// corrupted word cannot turn into a number it was not.
fn confuse(c: char, rng: &mut ChaCha8Rng) -> char {
    match c {
        '0'..='9' => DIGIT_CONFUSIONS[c as usize - '0' as usize],
        'a'..='z' | 'A'..='Z' => {
            let base = if c.is_ascii_lowercase() { b'a' } else { b'A' };
            let shift = rng.gen_range(1..26u8);
            (base + (c as u8 - base + shift) % 26) as char
        }
        ',' => '.',
        '.' => ',',
        '(' => 'C',
        ')' => 'J',
        '-' => '~',
        '/' => 'l',
        '?' => '!',
        _ => '?',
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Corruption {
    Substitute,
    Drop,
    Split,
}

fn split_box(b: VirtualBox, at: usize, len: usize) -> (VirtualBox, VirtualBox) {
    let width = u32::from(b.x1 - b.x0);
    let mid = b.x0 + (width * at as u32 / len as u32) as u16;
    (VirtualBox { x1: mid, ..b }, VirtualBox { x0: mid, ..b })
}

/// Simulated OCR noise. Word `i` is altered when a uniform draw from its own
/// generator (seeded by `seed` and `i`) falls below `rate`, so the words
/// altered at one rate are a subset of those altered at any higher rate.
/// An altered word gets a character substitution, is dropped with its box,
/// or is split in two with its box divided by character count.
pub fn corrupt_context(context: &Context, rate: f64, seed: u64) -> Context {
    let mut words = Vec::with_capacity(context.len());
    let mut boxes = Vec::with_capacity(context.len());
    for (i, (word, &b)) in context.words.iter().zip(&context.boxes).enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_table_seed(seed, i as u64));
        rng.set_stream(4);
        let u: f64 = rng.gen();
        if u >= rate {
            words.push(word.clone());
            boxes.push(b);
            continue;
        }
        let chars: Vec<char> = word.chars().collect();
        let mut kind = match rng.gen_range(0..3) {
            0 => Corruption::Substitute,
            1 => Corruption::Drop,
            _ => Corruption::Split,
        };
        if kind == Corruption::Split && chars.len() < 2 {
            kind = Corruption::Substitute;
        }
        match kind {
            Corruption::Drop => {}
            Corruption::Substitute if chars.is_empty() => {
                words.push("?".into());
                boxes.push(b);
            }
            Corruption::Substitute => {
                let at = rng.gen_range(0..chars.len());
                let mut chars = chars;
                chars[at] = confuse(chars[at], &mut rng);
                words.push(chars.into_iter().collect());
                boxes.push(b);
            }
            Corruption::Split => {
                let at = rng.gen_range(1..chars.len());
                let (left, right) = split_box(b, at, chars.len());
                words.push(chars[..at].iter().collect());
                words.push(chars[at..].iter().collect());
                boxes.push(left);
                boxes.push(right);
            }
        }
    }
    Context {
        words,
        boxes,
        source: ContextSource::OcrOutput,
    }
}

/// Number of words `corrupt_context` alters at `rate`.
pub fn altered_count(len: usize, rate: f64, seed: u64) -> usize {
    (0..len)
        .filter(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_table_seed(seed, i as u64));
            rng.set_stream(4);
            rng.gen::<f64>() < rate
        })
        .count()
}

/// One evaluation item: a table's competition pair and the context a model
/// answers it from.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub id: String,
    pub pair: QaPair,
    pub context: Context,
    pub gold_start: usize,
    pub gold_end: usize,
}

impl Example {
    pub fn new(id: String, pair: QaPair, context: Context) -> Self {
        let (gold_start, gold_end) = gold_span(&context, &pair);
        Example {
            id,
            pair,
            context,
            gold_start,
            gold_end,
        }
    }

    pub fn answer_found(&self) -> bool {
        find_answer_span(&self.context, &self.pair.answer_text).is_some()
    }
}

pub trait Predictor: Sync {
    fn name(&self) -> &str;
    fn predict(&self, example: &Example) -> Result<SpanPrediction>;
}

/// Returns the gold span.
pub struct OraclePredictor;

impl Predictor for OraclePredictor {
    fn name(&self) -> &str {
        "oracle"
    }

    fn predict(&self, ex: &Example) -> Result<SpanPrediction> {
        Ok(SpanPrediction::span(ex.gold_start, ex.gold_end))
    }
}

/// Searches the context for the answer text. When the answer cannot be
/// found it answers `(0, 1)`, never the zero-assigned gold `(0, 0)`.
pub struct SearchPredictor;

impl Predictor for SearchPredictor {
    fn name(&self) -> &str {
        "search"
    }

    fn predict(&self, ex: &Example) -> Result<SpanPrediction> {
        let (s, e) = find_answer_span(&ex.context, &ex.pair.answer_text).unwrap_or((0, 1));
        Ok(SpanPrediction::span(s, e))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PredictionLine {
    Span {
        id: String,
        start: usize,
        end: usize,
    },
    Scores {
        id: String,
        start_scores: Vec<f64>,
        end_scores: Vec<f64>,
    },
}

impl PredictionLine {
    pub fn id(&self) -> &str {
        match self {
            PredictionLine::Span { id, .. } | PredictionLine::Scores { id, .. } => id,
        }
    }
}

/// Predictions read from a JSON-lines file of spans or score vectors.
pub struct FilePredictor {
    lines: HashMap<String, PredictionLine>,
    constrained: bool,
}

impl FilePredictor {
    pub fn from_jsonl(text: &str, constrained: bool) -> Result<Self> {
        let mut lines = HashMap::new();
        for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let p: PredictionLine = serde_json::from_str(line)
                .map_err(|e| Error::Eval(format!("predictions line {}: {e}", n + 1)))?;
            if lines.insert(p.id().to_owned(), p).is_some() {
                return Err(Error::Eval(format!("predictions line {}: duplicate id", n + 1)));
            }
        }
        Ok(FilePredictor { lines, constrained })
    }

    pub fn open(path: &Path, constrained: bool) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_jsonl(&text, constrained)
    }
}

impl Predictor for FilePredictor {
    fn name(&self) -> &str {
        "file"
    }

    fn predict(&self, ex: &Example) -> Result<SpanPrediction> {
        match self.lines.get(&ex.id) {
            None => Err(Error::Eval(format!("no prediction for {}", ex.id))),
            Some(PredictionLine::Span { start, end, .. }) => Ok(SpanPrediction::span(*start, *end)),
            Some(PredictionLine::Scores {
                start_scores,
                end_scores,
                ..
            }) => decode_span(start_scores, end_scores, self.constrained),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleRow {
    pub id: String,
    pub gold_start: usize,
    pub gold_end: usize,
    /// Absent when the predictor failed on this example.
    pub pred_start: Option<usize>,
    pub pred_end: Option<usize>,
    pub category: ErrorCategory,
    /// Gold positions are `(0, 0)` because the answer is not in the context.
    pub zero_assigned: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub predictor: String,
    pub source: ContextSource,
    pub examples: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub categories: BTreeMap<String, usize>,
    pub predictor_failures: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<ExampleRow>,
}

impl EvalReport {
    pub fn count(&self, c: ErrorCategory) -> usize {
        self.categories.get(c.as_str()).copied().unwrap_or(0)
    }

    /// The report without per-example rows.
    pub fn summary(&self) -> EvalReport {
        EvalReport {
            rows: Vec::new(),
            ..self.clone()
        }
    }
}

/// Scores `predictor` on every example. Rows come out in example-id order
/// whatever the scheduling.
pub fn evaluate(examples: &[Example], predictor: &dyn Predictor) -> Result<EvalReport> {
    if examples.is_empty() {
        return Err(Error::Eval("no examples to evaluate".into()));
    }
    let source = examples[0].context.source;
    if examples.iter().any(|e| e.context.source != source) {
        return Err(Error::Eval("examples mix context sources".into()));
    }
    let mut rows: Vec<ExampleRow> = examples
        .par_iter()
        .map(|ex| {
            let zero_assigned = (ex.gold_start, ex.gold_end) == (0, 0);
            match predictor.predict(ex) {
                Ok(pred) => ExampleRow {
                    id: ex.id.clone(),
                    gold_start: ex.gold_start,
                    gold_end: ex.gold_end,
                    pred_start: Some(pred.start),
                    pred_end: Some(pred.end),
                    category: classify_error(&ex.context, &ex.pair, &pred),
                    zero_assigned,
                    error: None,
                },
                Err(e) => ExampleRow {
                    id: ex.id.clone(),
                    gold_start: ex.gold_start,
                    gold_end: ex.gold_end,
                    pred_start: None,
                    pred_end: None,
                    category: classify_failure(&ex.context, &ex.pair),
                    zero_assigned,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    let mut categories: BTreeMap<String, usize> = ErrorCategory::ALL.iter().map(|c| (c.to_string(), 0)).collect();
    for r in &rows {
        *categories.get_mut(r.category.as_str()).expect("all categories present") += 1;
    }
    let correct = categories[ErrorCategory::Correct.as_str()];
    Ok(EvalReport {
        predictor: predictor.name().to_owned(),
        source,
        examples: rows.len(),
        correct,
        accuracy: correct as f64 / rows.len() as f64,
        categories,
        predictor_failures: rows.iter().filter(|r| r.error.is_some()).count(),
        rows,
    })
}

/// Ground-truth context of an annotated table. With `a4` the boxes are
/// taken relative to the A4 page instead of the table image.
pub fn ground_truth_context(a: &Annotation, a4: bool) -> Result<Context> {
    let words = a.structure.flattened_words();
    let boxes = words
        .iter()
        .map(|w| {
            if a4 {
                to_virtual_coords(&a.a4_placement.map_box(&w.bbox), A4_WIDTH, A4_HEIGHT)
            } else if let Some(v) = w.virtual_bbox {
                Ok(v)
            } else {
                to_virtual_coords(&w.bbox, a.structure.page_size.width, a.structure.page_size.height)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Context::new(
        words.iter().map(|w| w.text.clone()).collect(),
        boxes,
        ContextSource::GroundTruth,
    )
}

/// Context from OCR words whose boxes are pixels on a page of `page` size.
pub fn ocr_context(words: &[OcrWord], page: PageSize) -> Result<Context> {
    let boxes = words
        .iter()
        .map(|w| to_virtual_coords(&w.bbox, page.width, page.height))
        .collect::<Result<Vec<_>>>()?;
    Context::new(
        words.iter().map(|w| w.text.clone()).collect(),
        boxes,
        ContextSource::OcrOutput,
    )
}

#[derive(Debug, Clone, Deserialize)]
struct OcrLine {
    id: String,
    words: Vec<OcrWord>,
}

/// Reads `{id, words: [{text, bbox}]}` lines.
pub fn read_ocr_jsonl(path: &Path) -> Result<HashMap<String, Vec<OcrWord>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = HashMap::new();
    for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let l: OcrLine =
            serde_json::from_str(line).map_err(|e| Error::Eval(format!("{} line {}: {e}", path.display(), n + 1)))?;
        out.insert(l.id, l.words);
    }
    Ok(out)
}

/// Per-example corruption seed, stable under changes to the example set.
pub fn example_seed(seed: u64, id: &str) -> u64 {
    id.bytes().fold(mix64(seed), |h, b| mix64(h ^ u64::from(b)))
}

#[derive(Debug, Clone, Default)]
pub struct ContextOptions {
    pub split: Option<Split>,
    pub a4: bool,
    /// Simulated OCR noise applied to ground-truth contexts.
    pub corrupt_rate: Option<f64>,
    pub seed: u64,
    /// External OCR words by record id; replaces simulated noise.
    pub ocr: Option<HashMap<String, Vec<OcrWord>>>,
}

/// Annotations of the dataset under `root`, optionally restricted to one
/// split, in manifest order.
pub fn load_annotations(root: &Path, split: Option<Split>) -> Result<Vec<Annotation>> {
    read_manifest(root)?
        .into_iter()
        .filter(|e| split.is_none_or(|s| e.split == s))
        .map(|e| Annotation::read(&root.join(&e.paths.annotation)))
        .collect()
}

pub fn build_examples(annotations: &[Annotation], opts: &ContextOptions) -> Result<Vec<Example>> {
    if let Some(r) = opts.corrupt_rate {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Eval(format!("corruption rate {r} outside [0, 1]")));
        }
        if opts.ocr.is_some() {
            return Err(Error::Eval("external OCR words and simulated corruption are exclusive".into()));
        }
    }
    let page_for = |a: &Annotation| {
        if opts.a4 {
            PageSize {
                width: A4_WIDTH,
                height: A4_HEIGHT,
            }
        } else {
            a.structure.page_size
        }
    };
    let mut out: Vec<Example> = annotations
        .iter()
        .map(|a| {
            let pair = a
                .competition()
                .cloned()
                .ok_or_else(|| Error::Eval(format!("{} has no competition pair", a.id)))?;
            let context = match (&opts.ocr, opts.corrupt_rate) {
                (Some(ocr), _) => {
                    let words = ocr
                        .get(&a.id)
                        .ok_or_else(|| Error::Eval(format!("no OCR words for {}", a.id)))?;
                    ocr_context(words, page_for(a))?
                }
                (None, Some(rate)) => corrupt_context(&ground_truth_context(a, opts.a4)?, rate, example_seed(opts.seed, &a.id)),
                (None, None) => match &a.ocr_words {
                    Some(words) => ocr_context(words, page_for(a))?,
                    None => ground_truth_context(a, opts.a4)?,
                },
            };
            Ok(Example::new(a.id.clone(), pair, context))
        })
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

/// Scatter data: one CSV line per example.
pub fn scatter_csv(report: &EvalReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["id", "gold_start", "pred_start", "gold_end", "pred_end", "category", "zero_assigned"])
        .expect("writing to memory");
    let opt = |v: Option<usize>| v.map(|v| v.to_string()).unwrap_or_default();
    for r in &report.rows {
        w.write_record([
            r.id.clone(),
            r.gold_start.to_string(),
            opt(r.pred_start),
            r.gold_end.to_string(),
            opt(r.pred_end),
            r.category.to_string(),
            r.zero_assigned.to_string(),
        ])
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8")
}

fn category_colour(c: ErrorCategory) -> &'static str {
    match c {
        ErrorCategory::Correct => "#2a7f3f",
        ErrorCategory::HeaderNotInContext => "#d98c00",
        ErrorCategory::AnswerNotInContext => "#c0392b",
        ErrorCategory::WrongSpan => "#3d5a99",
    }
}

/// Two panels, start and end positions, gold on x and predicted on y.
pub fn scatter_svg(report: &EvalReport) -> String {
    const PANEL: f64 = 360.0;
    const PAD: f64 = 40.0;
    let max = report
        .rows
        .iter()
        .flat_map(|r| [Some(r.gold_end), r.pred_end, r.pred_start])
        .flatten()
        .max()
        .unwrap_or(1)
        .max(1) as f64;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" font-size=\"12\">\n",
        2.0 * (PANEL + 2.0 * PAD),
        PANEL + 2.0 * PAD
    );
    for (panel, title) in ["start positions", "end positions"].iter().enumerate() {
        let ox = panel as f64 * (PANEL + 2.0 * PAD) + PAD;
        let map = |gold: usize, pred: usize| (ox + gold as f64 / max * PANEL, PAD + PANEL - pred as f64 / max * PANEL);
        svg.push_str(&format!(
            "<rect x=\"{ox}\" y=\"{PAD}\" width=\"{PANEL}\" height=\"{PANEL}\" fill=\"none\" stroke=\"#888\"/>\n"
        ));
        svg.push_str(&format!(
            "<line x1=\"{ox}\" y1=\"{}\" x2=\"{}\" y2=\"{PAD}\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n",
            PAD + PANEL,
            ox + PANEL
        ));
        svg.push_str(&format!("<text x=\"{ox}\" y=\"{}\">{title} (target vs predicted)</text>\n", PAD - 10.0));
        for r in &report.rows {
            let (gold, pred) = if panel == 0 {
                (r.gold_start, r.pred_start)
            } else {
                (r.gold_end, r.pred_end)
            };
            if let Some(pred) = pred {
                let (x, y) = map(gold, pred);
                svg.push_str(&format!(
                    "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"2.5\" fill=\"{}\" fill-opacity=\"0.6\"/>\n",
                    category_colour(r.category)
                ));
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}

/// Writes the scatter CSV and, when `svg` is given, its plot.
pub fn emit_position_scatter(report: &EvalReport, csv_path: &Path, svg: Option<&Path>) -> Result<()> {
    fs::write(csv_path, scatter_csv(report)).map_err(|e| Error::io(csv_path, e))?;
    if let Some(p) = svg {
        fs::write(p, scatter_svg(report)).map_err(|e| Error::io(p, e))?;
    }
    Ok(())
}
