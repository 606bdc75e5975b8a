use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use zigzag_core::corpus;
use zigzag_core::descent::elim_section;
use zigzag_core::words::{self, parse_word};
use zigzag_core::{build_stages, TableFamily, Vertex};

fn reduce(c: &mut Criterion) {
    let span = corpus::get("theta").unwrap();
    // Twelve cancelling pairs around a reduced core.
    let mut text = String::from(">s <t >u");
    for _ in 0..12 {
        text.push_str(" <u >u");
    }
    let w = parse_word(&span, &text).unwrap();
    c.bench_function("reduce/theta", |b| {
        b.iter(|| words::reduce(&span, black_box(&w)).unwrap())
    });
}

fn enumerate(c: &mut Criterion) {
    let span = corpus::get("theta").unwrap();
    let mut group = c.benchmark_group("enumerate/theta");
    for len in [4, 6, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(len), &len, |b, &len| {
            b.iter(|| words::enumerate(&span, Vertex::A(0), len))
        });
    }
    group.finish();
}

fn stages(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_stages");
    for name in ["circle", "theta", "tree4"] {
        let span = corpus::get(name).unwrap();
        group.bench_function(name, |b| b.iter(|| build_stages(black_box(&span), 4)));
    }
    group.finish();
}

fn elim(c: &mut Criterion) {
    let span = corpus::get("theta").unwrap();
    let fam = TableFamily::winding(&span, 6);
    c.bench_function("elim_section/theta_winding", |b| {
        b.iter(|| elim_section(&span, &fam, 6).unwrap())
    });
}

criterion_group!(benches, reduce, enumerate, stages, elim);
criterion_main!(benches);
