use criterion::{black_box, criterion_group, criterion_main, Criterion};
use milnor_bench::germ;
use milnor_core::invariants::{multiplicity, InvariantOptions, MultiplicityOptions};
use milnor_core::jets::{critical_jet_test, JetVector};
use milnor_core::{Field, IdealBasis, DEFAULT_PRIME};

fn tjurina(c: &mut Criterion) {
    let mut g = c.benchmark_group("tjurina");
    for name in ["E8", "BP333", "Z9"] {
        let s = germ(name);
        g.bench_function(name, |b| b.iter(|| black_box(&s).tjurina().unwrap()));
    }
    let prime = germ("Z9")
        .change_field(Field::from_characteristic(DEFAULT_PRIME).unwrap())
        .unwrap();
    g.bench_function("Z9 mod p", |b| b.iter(|| black_box(&prime).tjurina().unwrap()));
    g.finish();
}

fn milnor(c: &mut Criterion) {
    let opts = InvariantOptions::default();
    let mut g = c.benchmark_group("milnor");
    for name in ["W8", "Z9"] {
        let s = germ(name);
        g.bench_function(format!("{name} exact"), |b| b.iter(|| s.milnor_exact(&opts).unwrap()));
        g.bench_function(format!("{name} bound"), |b| b.iter(|| s.milnor_bound(&opts).unwrap()));
    }
    g.finish();
}

fn samuel(c: &mut Criterion) {
    let opts = MultiplicityOptions::default();
    let mut g = c.benchmark_group("multiplicity");
    g.sample_size(10);
    for name in ["S5", "W8"] {
        let s = germ(name);
        let crit = s.critical_locus().unwrap();
        let m = IdealBasis::maximal(s.context());
        let f = s.ideal();
        g.bench_function(format!("{name} m-adic"), |b| {
            b.iter(|| multiplicity(&crit, &m, &opts).unwrap())
        });
        g.bench_function(format!("{name} f-adic"), |b| {
            b.iter(|| multiplicity(&crit, &f, &opts).unwrap())
        });
    }
    g.finish();
}

fn jets(c: &mut Criterion) {
    let mut g = c.benchmark_group("critical jet test");
    g.sample_size(10);
    let s = germ("S5");
    for level in [32, 64] {
        let jet = JetVector::of(&s, level);
        g.bench_function(format!("S5 level {level}"), |b| {
            b.iter(|| critical_jet_test(&jet, 6).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, tjurina, milnor, samuel, jets);
criterion_main!(benches);
