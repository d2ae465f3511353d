//! End-to-end synthesis benchmarks: optimization passes, blasting,
//! both technology mappers and the equivalence checker.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use lsgen_bench::bench_aig;
use lsgen_core::blast::blast;
use lsgen_core::ir::{LogicType, NETWORK_TYPES};
use lsgen_core::map::{map_asic, map_lut, mini_library, AsicMode, LutMode};
use lsgen_core::opt::{apply_recipe, Recipe};
use lsgen_core::pipeline::{gen_recipes, run_flow, to_aig, FlowConfig};
use lsgen_core::sim::check_equivalence;

fn optimization(c: &mut Criterion) {
    let aig = bench_aig(11, 12, 300);
    let recipe: Recipe = gen_recipes(1, 10, 3).unwrap().pop().unwrap();
    c.bench_function("optimize/recipe10_300ands", |b| {
        b.iter(|| apply_recipe(&aig, &recipe).unwrap())
    });
}

fn blasting(c: &mut Criterion) {
    let aig = bench_aig(12, 12, 300);
    let mut group = c.benchmark_group("blast");
    for target in NETWORK_TYPES {
        group.bench_function(target.key(), |b| b.iter(|| blast(&aig, target).unwrap()));
    }
    group.finish();
}

fn mapping(c: &mut Criterion) {
    let aig = bench_aig(13, 12, 300);
    let lib = mini_library();
    c.bench_function("map/lut_k6_depth", |b| {
        b.iter(|| map_lut(&aig, 6, LutMode::Depth).unwrap())
    });
    c.bench_function("map/asic_delay", |b| {
        b.iter(|| map_asic(&aig, &lib, AsicMode::Delay).unwrap())
    });
    let gtg = blast(&aig, LogicType::Gtg).unwrap();
    c.bench_function("map/gtg_to_aig", |b| b.iter(|| to_aig(&gtg).unwrap()));
}

fn verification(c: &mut Criterion) {
    let aig = bench_aig(14, 12, 300);
    let mig = blast(&aig, LogicType::Mig).unwrap();
    c.bench_function("verify/exhaustive_12pi", |b| {
        b.iter(|| check_equivalence(&aig, &mig, 64).unwrap())
    });
}

fn full_flow(c: &mut Criterion) {
    let aig = bench_aig(15, 10, 120);
    let mut config = FlowConfig::new(mini_library());
    config.recipes = 2;
    config.seed = 5;
    config.jobs = 1;
    c.bench_function("flow/run_all_2recipes", |b| {
        b.iter_batched(
            || aig.clone(),
            |a| run_flow("bench.v", b"", &a, &config).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(
    benches,
    optimization,
    blasting,
    mapping,
    verification,
    full_flow
);
criterion_main!(benches);
