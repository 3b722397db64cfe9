mod common;

use assocgen::certifier::{certify, CertifyOptions};
use assocgen::generated::representative_grid;
use assocgen::{q, registry_all, GeneratedOp, PiecewiseFn, Rational, Variant, Verdict};
use common::random_generator;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn generators(seed: u64, n: usize) -> Vec<PiecewiseFn> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_generator(&mut rng)).collect()
}

#[test]
fn t_is_monotone_and_depends_only_on_f_values() {
    for f in generators(61, 25) {
        let grid = representative_grid(&f);
        let fx: Vec<Rational> = grid.iter().map(|x| f.eval(x).unwrap()).collect();
        for op in registry_all::<Rational>() {
            let t = GeneratedOp::new(f.clone(), op.clone(), Variant::Plain).unwrap();
            let table: Vec<Vec<Rational>> = grid.iter().map(|x| grid.iter().map(|y| t.t_eval(x, y)).collect()).collect();
            for i in 0..grid.len() {
                for j in 0..grid.len() {
                    if i + 1 < grid.len() {
                        assert!(table[i][j] <= table[i + 1][j], "f={f}, {}: not monotone in x", op.id);
                        assert!(table[j][i] <= table[j][i + 1], "f={f}, {}: not monotone in y", op.id);
                    }
                    for i2 in 0..grid.len() {
                        if fx[i] == fx[i2] {
                            assert_eq!(table[i][j], table[i2][j], "f={f}, {}", op.id);
                        }
                    }
                }
            }
        }
    }
}

/// With a t-norm base, certified associativity makes `T` a t-subnorm on the
/// grid; a certified `⊗` witness becomes a `T` witness through `f⁽⁻¹⁾`.
#[test]
fn verdicts_transport_to_the_generated_operation() {
    let options = CertifyOptions::default();
    let (mut subnorms, mut witnesses) = (0, 0);
    for f in generators(62, 40) {
        let d = f.restrict_domain().unwrap();
        if !d.domain.member(&q(1, 1)) {
            continue;
        }
        let grid = representative_grid(&f);
        for op in registry_all::<Rational>() {
            let t = GeneratedOp::new(f.clone(), op.clone(), Variant::Plain).unwrap();
            match certify(&f, &op, &options).unwrap() {
                Verdict::CertifiedAssociative { .. } => {
                    let oracle = t.brute_force_oracle(&grid).unwrap();
                    assert!(oracle.associative_on_sample(), "f={f}, {}: {:?}", op.id, oracle.witness);
                    if op.is_t_norm() {
                        subnorms += 1;
                        for x in &grid {
                            for y in &grid {
                                let v = t.t_eval(x, y);
                                assert!(v <= *x.min(y), "f={f}, {}: T({x},{y}) = {v}", op.id);
                                assert_eq!(v, t.t_eval(y, x));
                            }
                        }
                    }
                }
                Verdict::CertifiedNonAssociative { witness: (a, b, c), .. } => {
                    witnesses += 1;
                    let (x, y, z) = (d.d_star(&a), d.d_star(&b), d.d_star(&c));
                    assert_ne!(t.t_eval(&t.t_eval(&x, &y), &z), t.t_eval(&x, &t.t_eval(&y, &z)), "f={f}, {}", op.id);
                }
                Verdict::Unknown { .. } => {}
            }
        }
    }
    assert!(subnorms > 10 && witnesses > 10, "subnorms={subnorms}, witnesses={witnesses}");
}
