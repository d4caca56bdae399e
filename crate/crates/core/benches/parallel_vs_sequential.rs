use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rateladder::codec::DecoderConfig;
use rateladder::graph::{count_4cycles, peg_lift};
use rateladder::ladder::{build_ladder, LadderOptions, LadderPlan, Rate};
use rateladder::par;
use rateladder::protograph::Protograph;
use rateladder::sim::{simulate_point, LadderFamily};

fn mother() -> Protograph {
    Protograph::new(vec![
        vec![1, 1, 1, 2, 0, 1, 0, 1],
        vec![0, 1, 0, 1, 1, 1, 1, 2],
        vec![1, 0, 1, 4, 0, 0, 1, 1],
        vec![0, 0, 1, 1, 1, 0, 1, 4],
    ])
    .unwrap()
}

fn plan() -> LadderPlan {
    LadderPlan::from_intermediates(
        mother(),
        vec![
            Protograph::new(vec![vec![1, 0, 1, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 1]]).unwrap(),
            Protograph::new(vec![vec![1, 0, 0], vec![0, 1, 1]]).unwrap(),
        ],
    )
    .unwrap()
}

/// Worker counts compared: one thread against the whole pool.
fn workers() -> Vec<(String, Option<usize>)> {
    vec![("sequential".into(), Some(1)), (format!("pool-{}", par::current_workers()), None)]
}

fn bench(c: &mut Criterion) {
    let h1 = peg_lift(&mother(), 62, 0).unwrap();
    let ladder = build_ladder(&h1, &plan(), &LadderOptions::new(20, 4, 0)).unwrap();
    let family = LadderFamily::new("ladder", &ladder);
    let quarter = Rate::new(1, 4).unwrap();

    let mut g = c.benchmark_group("count_4cycles");
    for (name, w) in workers() {
        g.bench_with_input(BenchmarkId::from_parameter(&name), &w, |b, &w| {
            b.iter(|| par::with_workers(w, || count_4cycles(black_box(&h1.matrix))))
        });
    }
    g.finish();

    let mut g = c.benchmark_group("ber_200_frames");
    g.sample_size(10);
    for (name, w) in workers() {
        g.bench_with_input(BenchmarkId::from_parameter(&name), &w, |b, &w| {
            b.iter(|| {
                par::with_workers(w, || {
                    simulate_point(&family, quarter, 0.03, 200, 0, DecoderConfig::default(), None).unwrap()
                })
            })
        });
    }
    g.finish();

    let mut g = c.benchmark_group("proto_circle_repeats");
    g.sample_size(10);
    for (name, w) in workers() {
        g.bench_with_input(BenchmarkId::from_parameter(&name), &w, |b, &w| {
            b.iter(|| par::with_workers(w, || build_ladder(&h1, &plan(), &LadderOptions::new(20, 4, 1)).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
