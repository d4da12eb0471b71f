//! Pivoted LDU factorization `F = P·L·D·U·P′` of square matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{Permutation, Scalar, Tensor, ToleranceConfig, ONE, ZERO};

/// Factors with `F = P·L·D·U·P′`, `L` unit lower, `U` unit upper, `D` diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LduFactors {
    pub p: Permutation,
    pub l: Tensor,
    pub d: Vec<Scalar>,
    pub u: Tensor,
    pub p_prime: Permutation,
}

impl LduFactors {
    pub fn dim(&self) -> usize {
        self.d.len()
    }

    /// Strictly lower entries of a 3×3 `L = [[1,0,0],[l2,1,0],[l1,l0,1]]`.
    pub fn l0(&self) -> Scalar {
        self.l.get(&[2, 1])
    }
    pub fn l1(&self) -> Scalar {
        self.l.get(&[2, 0])
    }
    pub fn l2(&self) -> Scalar {
        self.l.get(&[1, 0])
    }

    /// Strictly upper entries of a 3×3 `U = [[1,u0,u1],[0,1,u2],[0,0,1]]`.
    pub fn u0(&self) -> Scalar {
        self.u.get(&[0, 1])
    }
    pub fn u1(&self) -> Scalar {
        self.u.get(&[0, 2])
    }
    pub fn u2(&self) -> Scalar {
        self.u.get(&[1, 2])
    }

    pub fn d_matrix(&self) -> Tensor {
        Tensor::diagonal(&self.d)
    }

    /// Multiplies the factors back together.
    pub fn reconstruct(&self) -> Tensor {
        let chain = [&self.p.matrix(), &self.l, &self.d_matrix(), &self.u, &self.p_prime.matrix()];
        chain[1..]
            .iter()
            .fold(chain[0].clone(), |acc, m| acc.matmul(m).expect("square factors"))
    }
}

/// LDU factorization of an invertible matrix with complete pivoting.
///
/// At every step the entry of largest modulus in the remaining block becomes
/// the pivot (row-major scan, first maximum wins). Fails with
/// [`Error::SingularMatrix`] when `|det F| <= tol.atol`.
pub fn ldu_decompose(f: &Tensor, tol: &ToleranceConfig) -> Result<LduFactors> {
    let (r, c) = f.matrix_dims()?;
    if r != c {
        return Err(Error::DimensionMismatch(r, c));
    }
    let det = f.determinant()?.norm();
    if det <= tol.atol {
        return Err(Error::SingularMatrix { det });
    }
    Ok(factor(f, 0.0))
}

/// Like [`ldu_decompose`] but accepts rank-deficient input: once the
/// remaining block is zero (relative to `tol.rank_cutoff`), the trailing
/// pivots are set to zero.
pub fn ldu_decompose_singular(f: &Tensor, tol: &ToleranceConfig) -> Result<LduFactors> {
    let (r, c) = f.matrix_dims()?;
    if r != c {
        return Err(Error::DimensionMismatch(r, c));
    }
    Ok(factor(f, tol.rank_cutoff * f.max_abs()))
}

fn factor(f: &Tensor, cutoff: f64) -> LduFactors {
    let n = f.shape()[0];
    let mut m: Vec<Vec<Scalar>> = (0..n).map(|i| (0..n).map(|j| f.get(&[i, j])).collect()).collect();
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut l = Tensor::identity(n);
    let mut d = vec![ZERO; n];

    for k in 0..n {
        let (mut pi, mut pj, mut best) = (k, k, -1.0);
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().skip(k) {
                if x.norm() > best {
                    (pi, pj, best) = (i, j, x.norm());
                }
            }
        }
        if best <= cutoff {
            for row in m.iter_mut().skip(k) {
                row.iter_mut().skip(k).for_each(|x| *x = ZERO);
            }
            break;
        }
        m.swap(k, pi);
        rows.swap(k, pi);
        // Earlier columns of L follow their rows.
        for j in 0..k {
            let (a, b) = (l.get(&[k, j]), l.get(&[pi, j]));
            l.set(&[k, j], b);
            l.set(&[pi, j], a);
        }
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        cols.swap(k, pj);

        let pivot = m[k][k];
        for i in k + 1..n {
            let factor = m[i][k] / pivot;
            l.set(&[i, k], factor);
            for j in k..n {
                let sub = factor * m[k][j];
                m[i][j] -= sub;
            }
            m[i][k] = ZERO;
        }
    }

    let mut u = Tensor::identity(n);
    for k in 0..n {
        d[k] = m[k][k];
        if d[k] != ZERO {
            for j in k + 1..n {
                u.set(&[k, j], m[k][j] / d[k]);
            }
        }
    }
    // Pr·F·Pc = L·D·U with Pr[i][rows[i]] = 1 and Pc[cols[j]][j] = 1.
    let p = Permutation::new(rows).expect("row swaps form a permutation");
    let mut inv_cols = vec![0; n];
    for (j, &c) in cols.iter().enumerate() {
        inv_cols[c] = j;
    }
    let p_prime = Permutation::new(inv_cols).expect("column swaps form a permutation");
    LduFactors { p, l, d, u, p_prime }
}

/// `true` when `l` is unit lower triangular within `atol`.
pub fn is_unit_lower(l: &Tensor, atol: f64) -> bool {
    let n = l.shape()[0];
    (0..n).all(|i| {
        (0..n).all(|j| {
            let x = l.get(&[i, j]);
            match i.cmp(&j) {
                std::cmp::Ordering::Equal => (x - ONE).norm() <= atol,
                std::cmp::Ordering::Less => x.norm() <= atol,
                std::cmp::Ordering::Greater => true,
            }
        })
    })
}
