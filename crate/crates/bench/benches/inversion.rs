use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jacinv_bench::{bcw_maps, tame_maps};
use jacinv_core::blocks::det_block;
use jacinv_core::{default_cap, invert_block_scheme, invert_oracle, RationalMatrix};

fn inversion(c: &mut Criterion) {
    let mut group = c.benchmark_group("invert");
    group.sample_size(20);
    for n in [2usize, 3, 4] {
        let maps = tame_maps(n, 5, 8);
        group.bench_with_input(BenchmarkId::new("block_scheme/tame", n), &maps, |b, maps| {
            b.iter(|| {
                for f in maps {
                    invert_block_scheme(f, default_cap(f)).unwrap();
                }
            })
        });
        group.bench_with_input(BenchmarkId::new("oracle/tame", n), &maps, |b, maps| {
            b.iter(|| {
                for f in maps {
                    invert_oracle(f, default_cap(f)).unwrap();
                }
            })
        });
    }
    for n in [3usize, 5] {
        let maps = bcw_maps(n, 4);
        group.bench_with_input(BenchmarkId::new("block_scheme/bcw", n), &maps, |b, maps| {
            b.iter(|| {
                for f in maps {
                    invert_block_scheme(f, 4).unwrap();
                }
            })
        });
    }
    group.finish();
}

fn determinants(c: &mut Criterion) {
    let l = RationalMatrix::from_i64_rows(&[&[2, 1, 0, 1], &[1, 3, 1, 0], &[0, 1, 2, 1], &[1, 0, 1, 3]]).unwrap();
    let mut group = c.benchmark_group("det_block");
    for d in [2u32, 3, 4] {
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| b.iter(|| det_block(&l, d).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, inversion, determinants);
criterion_main!(benches);
