//! Oracles and generators shared by the integration tests. Nothing here
//! calls into the library's own linear algebra.

#![allow(dead_code)]

use std::sync::Arc;

use ftriad::diagram::{spider_signature, Diagram, DiagramBuilder, Generator, WireId};
use ftriad::{Cfa, Scalar, Tensor};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn complex(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

pub fn random_tensor(rng: &mut ChaCha8Rng, shape: Vec<usize>) -> Tensor {
    let n = shape.iter().product();
    Tensor::new(shape, (0..n).map(|_| complex(rng)).collect()).unwrap()
}

/// Singular values, largest first, by one-sided Jacobi on the real
/// embedding `[[Re, -Im], [Im, Re]]`, which repeats each singular value of
/// the complex matrix twice.
pub fn jacobi_singular_values(m: &Tensor) -> Vec<f64> {
    let (rows, cols) = (m.shape()[0], m.shape()[1]);
    let (r2, c2) = (2 * rows, 2 * cols);
    let mut a = vec![vec![0.0f64; c2]; r2];
    for i in 0..rows {
        for j in 0..cols {
            let z = m.get(&[i, j]);
            a[i][j] = z.re;
            a[i][j + cols] = -z.im;
            a[i + rows][j] = z.im;
            a[i + rows][j + cols] = z.re;
        }
    }
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..c2 {
            for q in p + 1..c2 {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for row in &a {
                    alpha += row[p] * row[p];
                    beta += row[q] * row[q];
                    gamma += row[p] * row[q];
                }
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for row in &mut a {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..c2).map(|j| a.iter().map(|row| row[j] * row[j]).sum::<f64>().sqrt()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv.into_iter().step_by(2).collect()
}

/// Number of singular values above `cutoff * sigma_max`.
pub fn oracle_rank(m: &Tensor, cutoff: f64) -> usize {
    let sv = jacobi_singular_values(m);
    let top = sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|&&s| s > cutoff * top).count()
}

/// Random invertible `d x d` matrix with condition number at most `max_cond`.
pub fn random_invertible(rng: &mut ChaCha8Rng, d: usize, max_cond: f64) -> Tensor {
    loop {
        let m = random_tensor(rng, vec![d, d]);
        let sv = jacobi_singular_values(&m);
        if sv[0] <= max_cond * sv[d - 1] {
            return m;
        }
    }
}

/// Least-squares `c` with `a ≈ c·b`, and `max|a - c·b| / max|a|`.
pub fn fit_scalar(a: &Tensor, b: &Tensor) -> (Scalar, f64) {
    assert_eq!(a.shape(), b.shape());
    let num: Scalar = b.data().iter().zip(a.data()).map(|(x, y)| x.conj() * y).sum();
    let den: f64 = b.data().iter().map(|x| x.norm_sqr()).sum();
    let c = num / den;
    let worst = a.data().iter().zip(b.data()).map(|(x, y)| (x - c * y).norm()).fold(0.0, f64::max);
    let scale = a.data().iter().map(|x| x.norm()).fold(0.0, f64::max);
    (c, worst / scale)
}

/// Random connected F-graph over `algebra` with between 1 and `max_nodes`
/// nodes and at most `max_boundary` boundary wires in total.
pub fn random_fgraph(rng: &mut ChaCha8Rng, algebra: &Arc<Cfa>, max_nodes: usize, max_boundary: usize) -> Diagram {
    let d = algebra.dim();
    loop {
        let mut b = DiagramBuilder::new();
        let n_in = rng.random_range(0..=3);
        let mut open: Vec<WireId> = (0..n_in).map(|_| b.input(d)).collect();
        let nodes = rng.random_range(1..=max_nodes);
        for _ in 0..nodes {
            let choices: &[u8] = match open.len() {
                0 => &[0],
                1 => &[0, 1, 2, 3],
                _ => &[0, 1, 2, 3, 4, 5],
            };
            let kind = *choices.choose(rng).unwrap();
            let (g, arity) = match kind {
                0 => (Generator::Unit(algebra.clone()), 0),
                1 => (Generator::Comul(algebra.clone()), 1),
                2 => (Generator::Counit(algebra.clone()), 1),
                3 => (Generator::Identity(d), 1),
                4 => (Generator::Mul(algebra.clone()), 2),
                _ => (Generator::Swap(d, d), 2),
            };
            open.shuffle(rng);
            let taken: Vec<WireId> = open.split_off(open.len() - arity);
            open.extend(b.node(g, &taken).unwrap());
        }
        open.shuffle(rng);
        if n_in + open.len() > max_boundary {
            continue;
        }
        let diagram = b.finish(&open).unwrap();
        if spider_signature(&diagram).components.len() == 1 {
            return diagram;
        }
    }
}
