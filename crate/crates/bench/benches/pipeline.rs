use criterion::{black_box, criterion_group, criterion_main, Criterion};

use tabsynth_core::eval::{corrupt_context, decode_span, find_answer_span, ground_truth_context};
use tabsynth_core::layout::layout_table;
use tabsynth_core::qa::generate_qa_pairs;
use tabsynth_core::render::{encode_png, render};
use tabsynth_core::sampler::{derive_table_seed, sample_spec, sample_table};
use tabsynth_core::{dataset, FontLibrary, GeneratorConfig, PageMode, Split};

fn pipeline(c: &mut Criterion) {
    let config = GeneratorConfig::default();
    let fonts = FontLibrary::shared();
    let spec = sample_spec(derive_table_seed(1, 0), 0, &config).unwrap();
    let table = sample_table(&spec, &config).unwrap();
    let style = &config.themes[0].style;
    let layout = layout_table(&table, style, fonts, PageMode::TableBoundary).unwrap();
    let image = render(&layout, &table, style, fonts);

    c.bench_function("sample_table", |b| {
        let mut i = 0;
        b.iter(|| {
            i += 1;
            let spec = sample_spec(derive_table_seed(1, i), 0, &config).unwrap();
            black_box(sample_table(&spec, &config).unwrap())
        })
    });
    c.bench_function("layout_table", |b| {
        b.iter(|| black_box(layout_table(&table, style, fonts, PageMode::TableBoundary).unwrap()))
    });
    c.bench_function("render", |b| b.iter(|| black_box(render(&layout, &table, style, fonts))));
    c.bench_function("encode_png", |b| b.iter(|| black_box(encode_png(&image).unwrap())));
    c.bench_function("generate_qa_pairs", |b| b.iter(|| black_box(generate_qa_pairs(&table, &layout).unwrap())));
    c.bench_function("build_record", |b| {
        let mut i = 0;
        b.iter(|| {
            i += 1;
            black_box(dataset::build_record(&config, i, 0, Split::Train, true, fonts).unwrap())
        })
    });
}

fn evaluation(c: &mut Criterion) {
    let config = GeneratorConfig::default();
    let (record, _) = dataset::build_record(&config, 0, 0, Split::Test, false, FontLibrary::shared()).unwrap();
    let a = record.annotation;
    let ctx = ground_truth_context(&a, false).unwrap();
    let answer = a.competition().unwrap().answer_text.clone();

    c.bench_function("find_answer_span", |b| b.iter(|| black_box(find_answer_span(&ctx, &answer))));
    c.bench_function("corrupt_context", |b| b.iter(|| black_box(corrupt_context(&ctx, 0.05, 3))));
    let n = 512;
    let starts: Vec<f64> = (0..n).map(|i| ((i * 37) % 101) as f64).collect();
    let ends: Vec<f64> = (0..n).map(|i| ((i * 53) % 97) as f64).collect();
    c.bench_function("decode_span_constrained_512", |b| {
        b.iter(|| black_box(decode_span(&starts, &ends, true).unwrap()))
    });
}

criterion_group!(benches, pipeline, evaluation);
criterion_main!(benches);
