//! End-to-end acceptance checks. Runs without the libtest harness so that
//! each check prints exactly one PASS or FAIL line; the process fails if any
//! check fails.

// `!(r < limit)` style checks are deliberate: a NaN residual must fail.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use common::{complex, fit_scalar, jacobi_singular_values, oracle_rank, random_fgraph, random_invertible, random_tensor};
use ftriad::algebra::{derived_maps, induce_algebra, induce_state, BUILTIN_NAMES};
use ftriad::diagram::{normalize_fgraph, spider_signature};
use ftriad::entanglement::{apply_local, catalog, transport_witness, MaximalityVerdict};
use ftriad::synthesis::{qmux, qmux_corrected};
use ftriad::{
    builtin, check_axioms, classify_algebra, classify_state, evaluate, matrix_to_diagram, maximality_witness, parse_diagram,
    state_to_diagram, AlgebraRegistry, Budget, Cfa, ClassLabel, LocalOperation, PureState, Scalar, StateLabel, Tensor,
    ToleranceConfig, Trio,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn max_diff(a: &Tensor, b: &Tensor) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.data().iter().zip(b.data()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn max_abs(a: &Tensor) -> f64 {
    a.data().iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// The five built-in algebras written out term by term from their
/// reference term tables: `mu` as `(c, a, b)` for `|c><ab|`, `delta` as
/// `(b, c, a)` for `|bc><a|`.
fn reference_table(name: &str) -> Cfa {
    type Terms = &'static [(usize, usize, usize)];
    let (dim, mu, eta, delta, eps): (usize, Terms, &[f64], Terms, &[f64]) = match name {
        "GHZ2" => (2, &[(0, 0, 0), (1, 1, 1)], &[1., 1.], &[(0, 0, 0), (1, 1, 1)], &[1., 1.]),
        "W2" => (2, &[(0, 0, 1), (0, 1, 0), (1, 1, 1)], &[0., 1.], &[(0, 0, 0), (0, 1, 1), (1, 0, 1)], &[1., 0.]),
        "G3" => (3, &[(0, 0, 0), (1, 1, 1), (2, 2, 2)], &[1., 1., 1.], &[(0, 0, 0), (1, 1, 1), (2, 2, 2)], &[1., 1., 1.]),
        "W3" => (
            3,
            &[(0, 0, 2), (0, 1, 1), (0, 2, 0), (1, 1, 2), (1, 2, 1), (2, 2, 2)],
            &[0., 0., 1.],
            &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (0, 2, 2), (1, 1, 2), (2, 0, 2)],
            &[1., 0., 0.],
        ),
        "I3" => (
            3,
            &[(0, 0, 1), (0, 1, 0), (1, 1, 1), (2, 2, 2)],
            &[0., 1., 1.],
            &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (2, 2, 2)],
            &[1., 0., 1.],
        ),
        _ => unreachable!(),
    };
    let with_ones = |t: Terms| t.iter().map(|&(x, y, z)| (x, y, z, 1.0)).collect::<Vec<_>>();
    Cfa::from_terms(name, dim, &with_ones(mu), eta, &with_ones(delta), eps).unwrap()
}

/// Evaluates diagram text over the algebra registered as `P`.
fn eval_over(f: &Cfa, text: &str) -> Tensor {
    let mut reg = AlgebraRegistry::with_builtins();
    reg.register_algebra("P", f.clone().verified(&ToleranceConfig::default()).unwrap());
    let d = f.dim();
    evaluate(&parse_diagram(&text.replace("{d}", &d.to_string()), &reg).unwrap())
}

fn axiom_suite() -> Outcome {
    let strict = ToleranceConfig::uniform(1e-12);
    // Both sides of each law group as diagrams; `{d}` stands for the dimension.
    let laws: [(&str, &[&str]); 7] = [
        ("associativity", &["mu[P]*id({d}) ; mu[P]", "id({d})*mu[P] ; mu[P]"]),
        ("unit", &["eta[P]*id({d}) ; mu[P]", "id({d})", "id({d})*eta[P] ; mu[P]"]),
        ("coassociativity", &["delta[P] ; delta[P]*id({d})", "delta[P] ; id({d})*delta[P]"]),
        ("counit", &["delta[P] ; eps[P]*id({d})", "id({d})", "delta[P] ; id({d})*eps[P]"]),
        ("frobenius", &["delta[P]*id({d}) ; id({d})*mu[P]", "mu[P] ; delta[P]", "id({d})*delta[P] ; mu[P]*id({d})"]),
        ("commutativity", &["swap({d},{d}) ; mu[P]", "mu[P]"]),
        ("cocommutativity", &["delta[P] ; swap({d},{d})", "delta[P]"]),
    ];
    let mut worst: f64 = 0.0;
    for name in BUILTIN_NAMES {
        let f = builtin(name).unwrap();
        let p = reference_table(name);
        ensure!(f.max_abs_diff(&p).unwrap() == 0.0, "{name}: built-in differs from its reference table");
        let report = check_axioms(&f, &strict);
        ensure!(report.laws.len() == 7 && report.all_passed(), "{name}: {:?}", report.failed());
        ensure!(report.worst_residual() < 1e-12, "{name}: residual {:e}", report.worst_residual());
        for (law, sides) in laws {
            let first = eval_over(&p, sides[0]);
            for side in &sides[1..] {
                let r = max_diff(&first, &eval_over(&p, side));
                ensure!(r < 1e-12, "{name}: diagrammatic {law} residual {r:e}");
                worst = worst.max(r);
            }
        }
        worst = worst.max(report.worst_residual());
    }
    Ok(format!("5 algebras x 7 law groups, worst residual {worst:e}"))
}

fn classification() -> Outcome {
    let tol = ToleranceConfig::default();
    let expect = [
        ("GHZ2", ClassLabel::Special, 2),
        ("W2", ClassLabel::AntiSpecial, 1),
        ("G3", ClassLabel::Special, 3),
        ("W3", ClassLabel::AntiSpecial, 1),
        ("I3", ClassLabel::IntermediateSpecial, 2),
    ];
    let mut ranks = Vec::new();
    for (name, label, rank) in expect {
        let f = builtin(name).unwrap();
        let class = classify_algebra(&f, &tol).unwrap();
        ensure!(class.label == label, "{name}: {} instead of {label}", class.label);
        let bubble = eval_over(&f, "delta[P] ; mu[P]").to_operator(1).unwrap();
        ensure!(max_diff(&bubble, &derived_maps(&f).bubble) < 1e-14, "{name}: bubble routes disagree");
        let oracle = oracle_rank(&bubble, tol.rank_cutoff);
        ensure!(class.bubble_rank == rank && oracle == rank, "{name}: rank {} / oracle {oracle}, want {rank}", class.bubble_rank);
        ranks.push(oracle);
    }
    Ok(format!("labels match; oracle bubble ranks {ranks:?}"))
}

fn induction_round_trip() -> Outcome {
    let tol = ToleranceConfig::default();
    let mut worst: f64 = 0.0;
    for name in BUILTIN_NAMES {
        let f = builtin(name).unwrap();
        let st = induce_state(&f).unwrap();
        let (g, _) = induce_algebra(&st.psi, f.epsilon(), &tol).unwrap();
        let r = g.max_abs_diff(&f).unwrap();
        ensure!(r < 1e-12, "{name}: round trip residual {r:e}");
        worst = worst.max(r);
    }
    let ghz = PureState::from_kets(2, &[&[0, 0, 0], &[1, 1, 1]]).unwrap();
    let xi = Tensor::from_real(vec![2], &[1., 1.]).unwrap();
    let (g, _) = induce_algebra(&ghz, &xi, &tol).unwrap();
    let p = reference_table("GHZ2");
    ensure!(
        g.mu() == p.mu() && g.eta() == p.eta() && g.delta() == p.delta() && g.epsilon() == p.epsilon(),
        "GHZ with <0|+<1| does not reproduce the reference algebra"
    );
    Ok(format!("worst round trip residual {worst:e}; GHZ algebra reproduced exactly"))
}

fn spider_theorem() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    let (mut total, mut looped) = (0, 0);
    for name in BUILTIN_NAMES {
        let f = Arc::new(builtin(name).unwrap());
        for k in 0..500 {
            let d = random_fgraph(&mut rng, &f, 8, 6);
            let n = normalize_fgraph(&d, &f).map_err(|e| format!("{name} #{k}: {e}"))?;
            looped += usize::from(spider_signature(&d).loops > 0);
            let (a, b) = (evaluate(&d), evaluate(&n));
            ensure!(a.shape() == b.shape(), "{name} #{k}: boundary changed");
            let r = max_diff(&a, &b) / max_abs(&a).max(1.0);
            ensure!(r <= 1e-9, "{name} #{k}: residual {r:e}");
            worst = worst.max(r);
            total += 1;
        }
    }
    Ok(format!("{total} connected F-graphs ({looped} with loops), worst relative residual {worst:e}"))
}

fn non_maximality() -> Outcome {
    let tol = ToleranceConfig::default();
    for i in 0..25 {
        let name = format!("psi_{i}");
        let s = catalog(&name, &[]).unwrap();
        match maximality_witness(&s, 32, i as u64, &tol).unwrap() {
            MaximalityVerdict::NotMaximal { exact: true, .. } => {}
            v => return Err(format!("{name}: {v:?}")),
        }
    }
    let mut worst: f64 = 0.0;
    for name in ["G", "W", "I", "s2", "s3"] {
        let s = catalog(name, &[]).unwrap();
        let MaximalityVerdict::Witnessed { witnesses } = maximality_witness(&s, 32, 0, &tol).unwrap() else {
            return Err(format!("{name}: no witness"));
        };
        for w in &witnesses {
            let r = w.residual(&s).unwrap();
            ensure!(r < 1e-9, "{name}: witness residual {r:e}");
            worst = worst.max(r);
        }
    }
    Ok(format!("25/25 rows NotMaximal by exact rank; 5 witnessed states, worst witness residual {worst:e}"))
}

fn s3_closed_form() -> Outcome {
    let tol = ToleranceConfig::default();
    let s3 = catalog("s3", &[]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let (a, b, c) = (complex(&mut rng), complex(&mut rng), complex(&mut rng));
        let xi = Tensor::vector(&[a, b, c]).unwrap();
        let (f, phi) = induce_algebra(&s3, &xi, &tol).unwrap();
        let two = Scalar::new(2.0, 0.0);
        let rows = [
            [-a / (two * b * c), 1.0 / (two * c), 1.0 / (two * b)],
            [1.0 / (two * c), -b / (two * a * c), 1.0 / (two * a)],
            [1.0 / (two * b), 1.0 / (two * a), -c / (two * a * b)],
        ];
        let closed = Tensor::matrix(&rows.map(|r| r.to_vec())).unwrap();
        let r = max_diff(&phi, &closed) / max_abs(&closed).max(1.0);
        ensure!(r < 1e-9, "#{k}: Phi differs from the closed form by {r:e}");
        worst = worst.max(r);
        let report = check_axioms(&f, &tol);
        ensure!(!report.all_passed(), "#{k}: induced maps satisfy every law");
    }
    Ok(format!("50 random effects, worst Phi residual {worst:e}; every induced algebra fails a law"))
}

fn slocc_invariance() -> Outcome {
    let tol = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for (name, label) in [("G", StateLabel::ClassG), ("W", StateLabel::ClassW), ("I", StateLabel::ClassI)] {
        let s = catalog(name, &[]).unwrap();
        let base = classify_state(&s, Budget::default(), 0, &tol).unwrap();
        ensure!(base.label == label, "{name}: {:?}", base.label);
        let witness = base.witness.clone().unwrap();
        let algebra_label = base.algebra_class.as_ref().unwrap().label;
        for k in 0..20 {
            let l = random_invertible(&mut rng, 3, 50.0);
            let moved = apply_local(&s, &LocalOperation::uniform(l.clone(), 3)).unwrap();
            let c = classify_state(&moved, Budget::default(), k, &tol).unwrap();
            ensure!(c.label == label, "{name} #{k}: {:?} ({:?})", c.label, c.reason);
            let w = transport_witness(&l, &witness, &tol).unwrap();
            let r = w.residual(&moved).unwrap();
            ensure!(r < 1e-8, "{name} #{k}: transported witness residual {r:e}");
            worst = worst.max(r);
            let f = induce_algebra(&moved, &w.xi, &tol).unwrap().0.verified(&tol).map_err(|e| format!("{name} #{k}: {e}"))?;
            let got = classify_algebra(&f, &tol).unwrap().label;
            ensure!(got == algebra_label, "{name} #{k}: transported algebra is {got}, want {algebra_label}");
            runs += 1;
        }
    }
    Ok(format!("{runs} transforms with cond(L) <= 50, labels unchanged, worst transported witness residual {worst:e}"))
}

fn anti_special_law() -> Outcome {
    let mut residuals = Vec::new();
    for name in ["W2", "W3", "G3", "I3"] {
        let f = builtin(name).unwrap();
        let circle = eval_over(&f, "eta[P] ; delta[P] ; mu[P] ; eps[P]").as_scalar().unwrap();
        let bubble = eval_over(&f, "delta[P] ; mu[P]").to_operator(1).unwrap();
        let lu = eval_over(&f, "eta[P] ; delta[P] ; mu[P]");
        let lc = eval_over(&f, "delta[P] ; mu[P] ; eps[P]");
        let r = max_diff(&bubble.scale(circle), &lu.outer(&lc));
        let holds = name.starts_with('W');
        ensure!(if holds { r < 1e-12 } else { r > 0.5 }, "{name}: residual {r:e}");
        residuals.push(format!("{name}={r:.3}"));
    }
    Ok(format!("residuals {}", residuals.join(" ")))
}

fn synthesis() -> Outcome {
    let start = Instant::now();
    let trio = Trio::new();
    let tol = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_m: f64 = 0.0;
    for k in 0..1000 {
        let f = random_tensor(&mut rng, vec![3, 3]);
        let sv = jacobi_singular_values(&f);
        ensure!(sv[2] > 1e-9 * sv[0], "#{k}: sample is not invertible");
        let r = matrix_to_diagram(&f, &trio, &tol).map_err(|e| format!("matrix #{k}: {e}"))?;
        let (_, res) = fit_scalar(&evaluate(&r.diagram).to_operator(1).unwrap(), &f);
        ensure!(res < 1e-8, "matrix #{k}: residual {res:e}");
        worst_m = worst_m.max(res);
    }
    let mut worst_s: f64 = 0.0;
    for k in 0..200 {
        let n = 2 + k % 3;
        let amps = random_tensor(&mut rng, vec![3; n]);
        let s = PureState::new(3, amps.clone()).unwrap();
        let r = state_to_diagram(&s, &trio, &tol, k as u64).map_err(|e| format!("state #{k}: {e}"))?;
        let (_, res) = fit_scalar(&evaluate(&r.diagram), &amps);
        ensure!(res < 1e-7, "state #{k} ({n} parties): residual {res:e}");
        worst_s = worst_s.max(res);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 120.0, "took {secs:.1}s");
    Ok(format!("1000 matrices (worst {worst_m:e}), 200 states (worst {worst_s:e}) in {secs:.1}s"))
}

fn qmux_semantics() -> Outcome {
    let trio = Trio::new();
    let tol = ToleranceConfig::default();
    let q = evaluate(&qmux(&trio));
    ensure!(q.shape() == [3; 5], "QMUX shape {:?}", q.shape());
    // Output [control, target] for inputs psi ⊗ phi ⊗ zeta.
    let apply = |x: [&Tensor; 3]| {
        let mut out = Tensor::zeros(vec![3, 3]);
        for k in 0..3 {
            for j in 0..3 {
                let mut v = Scalar::default();
                for a in 0..3 {
                    for b in 0..3 {
                        for c in 0..3 {
                            v += q.get(&[a, b, c, k, j]) * x[0].data()[a] * x[1].data()[b] * x[2].data()[c];
                        }
                    }
                }
                out.set(&[k, j], v);
            }
        }
        out
    };
    // o_φ o_ζ |0ψ⟩ + o_ζ o_ψ |1φ⟩ + o_ψ o_φ |2ζ⟩ with o_x = ⟨2|x⟩.
    let expression = |x: [&Tensor; 3], weighted: bool| {
        let o = x.map(|v| v.data()[2]);
        let w = if weighted { [o[1] * o[2], o[2] * o[0], o[0] * o[1]] } else { [Scalar::new(1.0, 0.0); 3] };
        let mut t = Tensor::zeros(vec![3, 3]);
        for k in 0..3 {
            for j in 0..3 {
                t.set(&[k, j], w[k] * x[k].data()[j]);
            }
        }
        t
    };
    let two = Tensor::basis(3, 2);
    let (scalar, r0) = fit_scalar(&apply([&two, &two, &two]), &expression([&two, &two, &two], true));
    ensure!(r0 < 1e-12 && scalar.norm() > 0.0, "reference input residual {r0:e}");

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut worst, mut worst_c): (f64, f64) = (0.0, 0.0);
    for k in 0..100 {
        let x = [0, 1, 2].map(|_| random_tensor(&mut rng, vec![3]));
        let xs = [&x[0], &x[1], &x[2]];
        let want = expression(xs, true).scale(scalar);
        let r = max_diff(&apply(xs), &want) / max_abs(&want).max(1.0);
        ensure!(r < 1e-10, "#{k}: residual {r:e}");
        worst = worst.max(r);
        let corrected = evaluate(&qmux_corrected(&x[0], &x[1], &x[2], &trio, &tol).unwrap());
        let (c, rc) = fit_scalar(&corrected, &expression(xs, false));
        ensure!(rc < 1e-10 && c.norm() > 0.0, "#{k}: corrected residual {rc:e}");
        worst_c = worst_c.max(rc);
    }
    Ok(format!(
        "100 triples, fixed scalar {:.3}{:+.3}i, worst residual {worst:e}; corrected worst {worst_c:e}",
        scalar.re, scalar.im
    ))
}

fn main() {
    let checks: [(&str, fn() -> Outcome); 10] = [
        ("axiom_suite", axiom_suite),
        ("algebra_classification", classification),
        ("induction_round_trip", induction_round_trip),
        ("spider_normal_form", spider_theorem),
        ("non_maximality_table", non_maximality),
        ("s3_closed_form", s3_closed_form),
        ("slocc_invariance", slocc_invariance),
        ("anti_special_law", anti_special_law),
        ("synthesis", synthesis),
        ("qmux_semantics", qmux_semantics),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} ({secs:.2}s): {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
