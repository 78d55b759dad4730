use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use ratsurf::cone::slice_scan;
use ratsurf::exceptional::enumerate_exceptional_with;
use ratsurf::gconic::{max_swap_closed_section_detail, section_sweep};
use ratsurf::lattice::q_frac;
use ratsurf::weyl::{generate_group_with, simple_reflections, DEFAULT_CLOSURE_LIMIT};
use ratsurf::{canonical_class, CohClass, Exec};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn weyl_closure(c: &mut Criterion) {
    let gens = simple_reflections(6).unwrap();
    let mut g = c.benchmark_group("weyl_closure_e6");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| generate_group_with(exec, black_box(&gens), DEFAULT_CLOSURE_LIMIT).unwrap().order())
        });
    }
    g.finish();
}

fn exceptional(c: &mut Criterion) {
    // N = 9 always enumerates; the complete lists for N <= 8 are cached
    let mut g = c.benchmark_group("exceptional_n9");
    for cap in [6i64, 9] {
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, cap), &cap, |b, &cap| {
                b.iter(|| enumerate_exceptional_with(exec, 9, Some(cap)).unwrap().len())
            });
        }
    }
    g.finish();
}

fn sections(c: &mut Criterion) {
    let mut g = c.benchmark_group("sections");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new("sweep", name), |b| b.iter(|| section_sweep(exec, 8, -3, 4).unwrap()));
        g.bench_function(BenchmarkId::new("swap_code_n10", name), |b| {
            b.iter(|| max_swap_closed_section_detail(exec, 10).unwrap().max_m)
        });
    }
    g.finish();
}

fn cone_slice(c: &mut Criterion) {
    let n = 8;
    let k0 = canonical_class(n);
    let f = CohClass::h_minus(n, &[1]);
    let grid: Vec<_> = (-40..=40).map(|i| q_frac(i, 8)).collect();
    let mut g = c.benchmark_group("cone_slice_n8");
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| slice_scan(exec, n, &f, &k0, black_box(&grid)).unwrap().samples.len()));
    }
    g.finish();
}

criterion_group!(benches, weyl_closure, exceptional, sections, cone_slice);
criterion_main!(benches);
