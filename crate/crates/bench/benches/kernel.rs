use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use symlog_core::corpus::{file_text, load, run_corpus, FILES};
use symlog_core::kernel::{check_proof, proof_duality, search_proof, symmetrize_proof};
use symlog_core::quantum::{orthogonality_scan, Qubit};
use symlog_core::script::parse;
use symlog_core::LiteralInvolution;

fn corpus(c: &mut Criterion) {
    c.bench_function("run_corpus", |b| b.iter(|| run_corpus().unwrap()));
    c.bench_function("parse_all_files", |b| {
        b.iter(|| {
            for (_, text) in FILES {
                black_box(parse(text).unwrap());
            }
        })
    });
}

fn kernel(c: &mut Criterion) {
    let file = "c12_join_distribution.blq";
    let loaded = load(file, file_text(file).unwrap()).unwrap();
    let proofs: Vec<_> = loaded.script.proofs().map(|(_, p)| p.clone()).collect();
    c.bench_function("check_join_distribution", |b| {
        b.iter(|| {
            for p in &proofs {
                assert!(check_proof(black_box(p), &loaded.config, &loaded.registry).ok);
            }
        })
    });
    c.bench_function("symmetrize_join_distribution", |b| {
        b.iter(|| {
            for p in &proofs {
                let inv = LiteralInvolution::identity_with(proof_duality(p));
                black_box(symmetrize_proof(p, &inv, &loaded.config).unwrap());
            }
        })
    });

    let file = "c16_nowhere.blq";
    let loaded = load(file, file_text(file).unwrap()).unwrap();
    let goal = loaded.script.items[0].sequent().unwrap().clone();
    c.bench_function("search_not_found_depth_8", |b| {
        b.iter(|| search_proof(black_box(&goal), &loaded.config, &loaded.registry, 8).unwrap())
    });
}

fn quantum(c: &mut Criterion) {
    c.bench_function("orthogonality_scan", |b| b.iter(orthogonality_scan));
    c.bench_function("inner_product", |b| {
        let (p, m) = (Qubit::plus(), Qubit::minus());
        b.iter(|| symlog_core::quantum::inner_product(black_box(&p), black_box(&m)))
    });
}

criterion_group!(benches, corpus, kernel, quantum);
criterion_main!(benches);
