//! Closed forms against independent numerical routes.

mod common;

use common::{brute::Brute, params, rel, TEST_PARAMS};
use pqmkz::{
    apply, apply_polynomial, apply_quadrature, jackson_integral, kernel_monomial_integral,
    kernel_value, lemma2_lhs, lemma2_rhs, lemma3_check, mkz_weight, mkz_weights, pq_beta_closed,
    pq_beta_integral, Function1D, OperatorConfig,
};

#[test]
fn beta_closed_form_matches_jackson_sum() {
    for (p, q) in TEST_PARAMS {
        let pq = params(p, q);
        for t in 1..=8 {
            for s in 1..=8 {
                let closed = pq_beta_closed(t, s, pq).unwrap();
                let numeric = pq_beta_integral(t, s, pq, closed * 1e-14).unwrap();
                assert!(rel(numeric.value, closed) <= 1e-8, "({p},{q}) t={t} s={s}");
            }
        }
    }
}

#[test]
fn kernel_moments_match_jackson_sum() {
    for (p, q) in TEST_PARAMS {
        let pq = params(p, q);
        for n in 1..=10 {
            for k in 0..=10 {
                for s in 0..=2 {
                    let closed = kernel_monomial_integral(n, k, s, pq);
                    let numeric = jackson_integral(
                        |t| kernel_value(n, k, t, pq) * t.powi(s as i32),
                        pq,
                        closed * 1e-13,
                    )
                    .unwrap();
                    assert!(rel(numeric.value, closed) <= 1e-8, "n={n} k={k} s={s}");
                }
            }
        }
    }
}

#[test]
fn kernel_matches_brute_definition() {
    for (p, q) in TEST_PARAMS {
        let pq = params(p, q);
        let brute = Brute::new(p, q);
        for n in [1, 3, 10] {
            for k in [0, 1, 5, 30] {
                for t in [0.1, 0.5, 1.0, 1.0 / p] {
                    let a = kernel_value(n, k, t, pq);
                    let b = brute.kernel(n, k, t);
                    assert!(rel(a, b) < 1e-11, "n={n} k={k} t={t}");
                }
            }
        }
    }
}

#[test]
fn recurrence_weights_match_literal_formula() {
    for (p, q) in TEST_PARAMS {
        let pq = params(p, q);
        let brute = Brute::new(p, q);
        for n in [1, 5, 12, 25] {
            for x in [0.1, 0.5, 0.9] {
                let slice =
                    mkz_weights(x, pq, &OperatorConfig::new(n).with_fixed_last_index(200)).unwrap();
                for (k, &w) in slice.weights().iter().enumerate() {
                    let literal = brute.weight(n, k as u32, x);
                    if literal < 1e-280 {
                        continue;
                    }
                    assert!(rel(w, literal) <= 1e-10, "n={n} x={x} k={k}");
                }
                assert_eq!(slice.weights()[37], mkz_weight(n, 37, x, pq).unwrap());
            }
        }
    }
}

#[test]
fn weights_form_a_partition_of_unity() {
    for (p, q) in TEST_PARAMS {
        let pq = params(p, q);
        for n in [1, 5, 10, 25] {
            let config = OperatorConfig::new(n);
            for i in 0..20 {
                let x = f64::from(i) * 0.05;
                let slice = mkz_weights(x, pq, &config).unwrap();
                assert!(slice.mass() >= 1.0 - config.tail_tol, "n={n} x={x}");
                assert!(slice.mass() <= 1.0 + 1e-12, "n={n} x={x}");
            }
        }
    }
}

#[test]
fn summation_identity_holds() {
    for (p, q) in TEST_PARAMS {
        let pq = params(p, q);
        for r in [1, 2] {
            for n in [5, 8] {
                let config = OperatorConfig::new(n);
                for x in [0.1, 0.3, 0.5, 0.7] {
                    let lhs = lemma2_lhs(r, x, pq, &config).unwrap();
                    let rhs = lemma2_rhs(n, r, x, pq).unwrap();
                    assert!(rel(lhs, rhs) <= 1e-6, "({p},{q}) r={r} n={n} x={x}");
                }
            }
        }
    }
}

#[test]
fn reciprocal_integer_inequality_is_exhaustively_true() {
    for (p, q) in TEST_PARAMS {
        let pq = params(p, q);
        for total in 1..=50u32 {
            for k in 0..=total {
                for r in 0..=10 {
                    assert!(lemma3_check(total - k, k, r, pq), "n+k={total} k={k} r={r}");
                }
            }
        }
    }
}

#[test]
fn operator_matches_brute_force_double_sum() {
    for (p, q) in TEST_PARAMS {
        let pq = params(p, q);
        let brute = Brute::new(p, q);
        let fns = Function1D::figure_functions();
        for n in 1..=5 {
            for last_k in [0u32, 7, 40] {
                let config = OperatorConfig::new(n).with_fixed_last_index(last_k as usize);
                for x in [0.0, 0.2, 0.6, 0.9] {
                    for f in &fns {
                        let ours = apply(f, x, pq, &config).unwrap().value;
                        let theirs = brute.operator(|t| f.eval(t), n, x, last_k);
                        let scale = theirs.abs().max(1e-3);
                        assert!(
                            (ours - theirs).abs() / scale <= 1e-8,
                            "({p},{q}) n={n} K={last_k} x={x} {:?}: {ours} vs {theirs}",
                            f.name()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn closed_form_path_matches_quadrature_path() {
    for (p, q) in TEST_PARAMS {
        let pq = params(p, q);
        for n in [1, 4, 10] {
            let config = OperatorConfig::new(n);
            for f in Function1D::figure_functions() {
                let poly = f.as_polynomial().unwrap();
                for x in [0.0, 0.25, 0.5, 0.75] {
                    let fast = apply_polynomial(poly, x, pq, &config).unwrap().value;
                    let slow = apply_quadrature(&f, x, pq, &config).unwrap().value;
                    let scale = fast.abs().max(1e-3);
                    assert!((fast - slow).abs() / scale <= 1e-8, "n={n} x={x}");
                }
            }
        }
    }
}
