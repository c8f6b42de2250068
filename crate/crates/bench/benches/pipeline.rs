use criterion::{black_box, criterion_group, criterion_main, Criterion};

use sfc_core::eval::{eval_subst_oracle, Evaluator};
use sfc_core::testgen::TermGen;
use sfc_core::typecheck::{check_program, typecheck};
use sfc_core::{lower_program, parse_program, print_term, Env, Term, TypeContext};

const COMPOSE: &str = include_str!("../../../corpus/compose_closures.sfc");

fn generated(n: usize) -> Vec<Term> {
    let mut gen = TermGen::new(17);
    (0..n).map(|_| gen.term().term).collect()
}

fn front_end(c: &mut Criterion) {
    c.bench_function("parse compose_closures", |b| {
        b.iter(|| parse_program(black_box(COMPOSE)).unwrap())
    });
    let program = parse_program(COMPOSE).unwrap();
    c.bench_function("check compose_closures", |b| {
        b.iter(|| check_program(black_box(&program)).unwrap())
    });
    let terms = generated(100);
    let texts: Vec<String> = terms.iter().map(print_term).collect();
    c.bench_function("parse 100 generated terms", |b| {
        b.iter(|| {
            for t in &texts {
                black_box(sfc_core::parse_term(t).unwrap());
            }
        })
    });
    c.bench_function("typecheck 100 generated terms", |b| {
        b.iter(|| {
            for t in &terms {
                black_box(typecheck(&TypeContext::new(), t).unwrap());
            }
        })
    });
}

fn evaluation(c: &mut Criterion) {
    let terms = generated(100);
    let ev = Evaluator::new();
    c.bench_function("eval 100 generated terms", |b| {
        b.iter(|| {
            for t in &terms {
                black_box(ev.eval(&Env::new(), t).unwrap());
            }
        })
    });
    c.bench_function("substitution oracle 100 generated terms", |b| {
        b.iter(|| {
            for t in &terms {
                black_box(eval_subst_oracle(t, ev.fuel()).unwrap());
            }
        })
    });
    let program = parse_program(COMPOSE).unwrap();
    c.bench_function("load compose_closures", |b| {
        b.iter(|| Evaluator::new().load(black_box(&program)).unwrap())
    });
}

fn lowering(c: &mut Criterion) {
    let program = parse_program(COMPOSE).unwrap();
    let checked = check_program(&program).unwrap();
    c.bench_function("lower compose_closures", |b| {
        b.iter(|| lower_program(black_box(&checked)).unwrap())
    });
}

criterion_group!(benches, front_end, evaluation, lowering);
criterion_main!(benches);
