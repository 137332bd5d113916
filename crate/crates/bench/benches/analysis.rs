use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion as Bench};
use termlab_core::corpus;
use termlab_core::interp::{check_segment_decrease, StateBox};
use termlab_core::ramsey::{build_extremal, longest_mip};
use termlab_core::sct::{closure, decide, extract_generators, Criterion};
use termlab_core::tropical::{ClampBound, Finite, Infinite, TropicalMatrix};
use termlab_core::{MeasureBasis, Program};

fn dense(n: usize, seed: i64) -> TropicalMatrix {
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = (i as i64 * 31 + j as i64 * 17 + seed) % 23 - 11;
                    if v == 11 { Infinite } else { Finite(v) }
                })
                .collect()
        })
        .collect();
    TropicalMatrix::from_rows(rows)
}

fn tropical(c: &mut Bench) {
    for n in [4, 16, 64] {
        let (a, b) = (dense(n, 1), dense(n, 5));
        c.bench_function(&format!("mul {n}x{n}"), |bench| {
            bench.iter(|| black_box(&a).mul(black_box(&b)).unwrap())
        });
    }
}

fn sct(c: &mut Bench) {
    let p4 = Program::parse(corpus::PROG4).unwrap();
    let b4 = MeasureBasis::guarded_vars(&p4).unwrap();
    let g4 = extract_generators(&p4, &b4).unwrap();
    let k4 = ClampBound::new(4).unwrap();
    c.bench_function("closure prog4 K=4", |bench| bench.iter(|| closure(&g4, k4).unwrap()));

    let p5 = Program::parse(corpus::PROG5).unwrap();
    let b5 = MeasureBasis::parse(&p5, "x, y, x + y").unwrap();
    let k6 = ClampBound::new(6).unwrap();
    c.bench_function("decide prog5 x,y,x+y K=6 A", |bench| {
        bench.iter(|| decide(&p5, &b5, k6, Criterion::A).unwrap())
    });
    let b5xy = MeasureBasis::parse(&p5, "x, y").unwrap();
    c.bench_function("decide prog5 x,y K=6 B", |bench| {
        bench.iter(|| decide(&p5, &b5xy, k6, Criterion::B).unwrap())
    });
}

fn segments(c: &mut Bench) {
    let p5 = Program::parse(corpus::PROG5).unwrap();
    let b5 = MeasureBasis::parse(&p5, "x, y, x + y").unwrap();
    let bx = StateBox::cube(2, 1, 6);
    c.bench_function("segment check prog5 [1,6]^2 len 6", |bench| {
        bench.iter(|| check_segment_decrease(&p5, b5.functions(), &bx, 6, 3))
    });
}

fn ramsey(c: &mut Bench) {
    c.bench_function("trt build k=5 c=3", |bench| bench.iter(|| build_extremal(5, 3).unwrap()));
    let col = build_extremal(5, 3).unwrap();
    c.bench_function("longest mip K_64", |bench| bench.iter(|| longest_mip(black_box(&col))));
}

criterion_group!(benches, tropical, sct, segments, ramsey);
criterion_main!(benches);
