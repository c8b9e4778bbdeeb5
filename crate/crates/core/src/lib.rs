//! Synthetic financial table generation with exact ground-truth geometry,
//! plus the span-based question answering evaluation used to score models
//! trained on the generated data.
//!
//! The pipeline for one table is: sample a [`TableSpec`], fill it into a
//! [`Table`], lay it out into a [`LayoutTree`], render it to PNG, derive
//! [`QaPair`]s from the layout, and export HTML/CSV/JSON annotations.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod export;
pub mod fonts;
pub mod format;
pub mod layout;
pub mod model;
pub mod qa;
pub mod render;
pub mod sampler;
pub mod theme;
pub mod validate;

pub use dataset::{build_dataset, BuildOptions, BuildSummary, StatsReport};
pub use error::{Error, Result};
pub use eval::{Context, ContextSource, ErrorCategory, EvalReport, SpanPrediction};
pub use export::{Annotation, DatasetRecord, ManifestEntry, StructureDoc};
pub use fonts::{FontKey, FontLibrary, FontMetrics};
pub use model::{
    BBox, Cell, CellType, LayoutTree, PageMode, PageSize, QaPair, Row, Split, Table, TableSpec,
    VirtualBox,
};
pub use sampler::GeneratorConfig;
pub use theme::{Theme, ThemeStyle};
pub use validate::{validate_dataset, ValidationReport};
