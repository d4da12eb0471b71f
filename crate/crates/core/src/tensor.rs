//! Dense complex tensors over small qudit wires.
//!
//! A [`Tensor`] is a row-major array of [`Scalar`]s with a shape listing the
//! dimension of every index. A tensor with an empty shape is a scalar. Every
//! numeric meaning in the crate (algebra structure maps, states, evaluated
//! diagrams) bottoms out here.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex scalar field.
pub type Scalar = Complex64;

pub(crate) const ZERO: Scalar = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Scalar = Complex64::new(1.0, 0.0);

/// Shorthand for a real-valued scalar.
pub fn re(x: f64) -> Scalar {
    Complex64::new(x, 0.0)
}

/// Numerical tolerances shared by every comparison in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub atol: f64,
    pub rtol: f64,
    /// Singular values at or below `rank_cutoff * sigma_max` do not count
    /// towards the numeric rank.
    pub rank_cutoff: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { atol: 1e-9, rtol: 1e-9, rank_cutoff: 1e-8 }
    }
}

impl ToleranceConfig {
    /// Same tolerance for absolute and relative comparisons.
    pub fn uniform(tol: f64) -> Self {
        Self { atol: tol, rtol: tol, ..Self::default() }
    }

    /// `residual <= atol + rtol * scale`
    pub fn accepts(&self, residual: f64, scale: f64) -> bool {
        residual <= self.atol + self.rtol * scale
    }

    pub fn is_valid(&self) -> bool {
        [self.atol, self.rtol, self.rank_cutoff].iter().all(|v| v.is_finite() && *v >= 0.0)
    }
}

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTensor", into = "RawTensor")]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<Scalar>,
}

/// Serialized form: shape plus `[re, im]` pairs in row-major order.
#[derive(Serialize, Deserialize)]
struct RawTensor {
    shape: Vec<usize>,
    data: Vec<[f64; 2]>,
}

impl TryFrom<RawTensor> for Tensor {
    type Error = Error;
    fn try_from(raw: RawTensor) -> Result<Self> {
        Tensor::new(raw.shape, raw.data.into_iter().map(|[r, i]| Scalar::new(r, i)).collect())
    }
}

impl From<Tensor> for RawTensor {
    fn from(t: Tensor) -> Self {
        RawTensor { shape: t.shape, data: t.data.iter().map(|c| [c.re, c.im]).collect() }
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor{:?}", self.shape)?;
        f.debug_list().entries(self.data.iter().map(|c| (c.re, c.im))).finish()
    }
}

impl Tensor {
    pub fn new(shape: Vec<usize>, data: Vec<Scalar>) -> Result<Self> {
        if shape.contains(&0) {
            return Err(Error::ZeroDimension(shape));
        }
        let expected: usize = shape.iter().product();
        if expected != data.len() {
            return Err(Error::DataLength { shape, expected, actual: data.len() });
        }
        if let Some(i) = data.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { shape, data })
    }

    /// Constructor for data produced by internal arithmetic on valid tensors.
    pub(crate) fn from_parts(shape: Vec<usize>, data: Vec<Scalar>) -> Self {
        debug_assert_eq!(shape.iter().product::<usize>(), data.len());
        Self { shape, data }
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let n = shape.iter().product();
        Self::from_parts(shape, vec![ZERO; n])
    }

    pub fn scalar(c: Scalar) -> Self {
        Self::from_parts(Vec::new(), vec![c])
    }

    pub fn from_real(shape: Vec<usize>, data: &[f64]) -> Result<Self> {
        Self::new(shape, data.iter().map(|&x| re(x)).collect())
    }

    pub fn vector(entries: &[Scalar]) -> Result<Self> {
        Self::new(vec![entries.len()], entries.to_vec())
    }

    /// Computational basis vector `|k>` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut t = Self::zeros(vec![dim]);
        t.data[k] = ONE;
        t
    }

    pub fn identity(dim: usize) -> Self {
        let mut t = Self::zeros(vec![dim, dim]);
        for i in 0..dim {
            t.data[i * dim + i] = ONE;
        }
        t
    }

    /// Matrix from rows. All rows must have equal length.
    pub fn matrix(rows: &[Vec<Scalar>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(cols, bad.len()));
        }
        Self::new(vec![rows.len(), cols], rows.concat())
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut t = Self::zeros(vec![n, n]);
        for (i, &e) in entries.iter().enumerate() {
            t.data[i * n + i] = e;
        }
        t
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Number of indices.
    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Scalar> {
        self.data
    }

    pub fn strides(&self) -> Vec<usize> {
        strides_of(&self.shape)
    }

    pub fn flat_index(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.shape.len());
        index.iter().zip(self.strides()).map(|(i, s)| i * s).sum()
    }

    pub fn get(&self, index: &[usize]) -> Scalar {
        self.data[self.flat_index(index)]
    }

    pub fn set(&mut self, index: &[usize], value: Scalar) {
        let k = self.flat_index(index);
        self.data[k] = value;
    }

    /// Value of a rank-0 tensor (or the single entry of any 1-element tensor).
    pub fn as_scalar(&self) -> Option<Scalar> {
        (self.data.len() == 1).then(|| self.data[0])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn reshape(&self, shape: Vec<usize>) -> Result<Self> {
        let n: usize = shape.iter().product();
        if n != self.data.len() || shape.contains(&0) {
            return Err(Error::ShapeMismatch(self.shape.clone(), shape));
        }
        Ok(Self::from_parts(shape, self.data.clone()))
    }

    /// Reorders indices: index `k` of the result is index `axes[k]` of `self`.
    pub fn permute(&self, axes: &[usize]) -> Result<Self> {
        let n = self.order();
        if axes.len() != n {
            return Err(Error::DimensionMismatch(n, axes.len()));
        }
        let mut seen = vec![false; n];
        for &a in axes {
            if a >= n {
                return Err(Error::IndexOutOfRange { index: a, order: n });
            }
            if std::mem::replace(&mut seen[a], true) {
                return Err(Error::RepeatedIndex(a));
            }
        }
        if axes.iter().enumerate().all(|(k, &a)| k == a) {
            return Ok(self.clone());
        }
        let shape: Vec<usize> = axes.iter().map(|&a| self.shape[a]).collect();
        let src_strides = self.strides();
        let strides: Vec<usize> = axes.iter().map(|&a| src_strides[a]).collect();
        let mut data = Vec::with_capacity(self.data.len());
        let mut idx = vec![0usize; n];
        let mut offset = 0usize;
        for _ in 0..self.data.len() {
            data.push(self.data[offset]);
            for k in (0..n).rev() {
                idx[k] += 1;
                offset += strides[k];
                if idx[k] < shape[k] {
                    break;
                }
                offset -= strides[k] * shape[k];
                idx[k] = 0;
            }
        }
        Ok(Self::from_parts(shape, data))
    }

    pub fn scale(&self, c: Scalar) -> Self {
        Self::from_parts(self.shape.clone(), self.data.iter().map(|&x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Scalar, Scalar) -> Scalar) -> Result<Self> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(self.shape.clone(), other.shape.clone()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self::from_parts(self.shape.clone(), data))
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Tensor (Kronecker) product; indices of `self` come first.
    pub fn outer(&self, other: &Self) -> Self {
        let mut shape = self.shape.clone();
        shape.extend_from_slice(&other.shape);
        let mut data = Vec::with_capacity(self.data.len() * other.data.len());
        for &a in &self.data {
            data.extend(other.data.iter().map(|&b| a * b));
        }
        Self::from_parts(shape, data)
    }

    pub fn matrix_dims(&self) -> Result<(usize, usize)> {
        match self.shape[..] {
            [r, c] => Ok((r, c)),
            _ => Err(Error::NotAMatrix(self.shape.clone())),
        }
    }

    /// Matrix product of two 2-index tensors.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        let (_, k) = self.matrix_dims()?;
        let (k2, _) = other.matrix_dims()?;
        if k != k2 {
            return Err(Error::DimensionMismatch(k, k2));
        }
        contract(self, other, &[(1, 0)])
    }

    /// Matrix acting on a vector.
    pub fn apply(&self, v: &Self) -> Result<Self> {
        let (_, c) = self.matrix_dims()?;
        if v.shape != [c] {
            return Err(Error::ShapeMismatch(vec![c], v.shape.clone()));
        }
        contract(self, v, &[(1, 0)])
    }

    pub fn transpose(&self) -> Result<Self> {
        self.matrix_dims()?;
        self.permute(&[1, 0])
    }

    /// Groups the first `rows` indices into a row index and the rest into a
    /// column index.
    pub fn matricize(&self, rows: usize) -> Result<Self> {
        if rows > self.order() {
            return Err(Error::IndexOutOfRange { index: rows, order: self.order() });
        }
        let r: usize = self.shape[..rows].iter().product();
        let c: usize = self.shape[rows..].iter().product();
        self.reshape(vec![r, c])
    }

    /// Moves the leading `n_in` indices to the back, turning an
    /// `[inputs.., outputs..]` tensor into operator order `[outputs.., inputs..]`.
    pub fn to_operator(&self, n_in: usize) -> Result<Self> {
        let n = self.order();
        if n_in > n {
            return Err(Error::IndexOutOfRange { index: n_in, order: n });
        }
        let axes: Vec<usize> = (n_in..n).chain(0..n_in).collect();
        self.permute(&axes)
    }

    pub(crate) fn to_nalgebra(&self) -> Result<DMatrix<Scalar>> {
        let (r, c) = self.matrix_dims()?;
        Ok(DMatrix::from_row_slice(r, c, &self.data))
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<Scalar>) -> Self {
        let (r, c) = m.shape();
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                data.push(m[(i, j)]);
            }
        }
        Self::from_parts(vec![r, c], data)
    }

    pub fn determinant(&self) -> Result<Scalar> {
        let (r, c) = self.matrix_dims()?;
        if r != c {
            return Err(Error::DimensionMismatch(r, c));
        }
        Ok(self.to_nalgebra()?.full_piv_lu().determinant())
    }

    /// Inverse of a square matrix; fails when `|det| <= tol.atol` after
    /// normalising by the largest entry.
    pub fn inverse(&self, tol: &ToleranceConfig) -> Result<Self> {
        let (r, c) = self.matrix_dims()?;
        if r != c {
            return Err(Error::DimensionMismatch(r, c));
        }
        let lu = self.to_nalgebra()?.full_piv_lu();
        let det = lu.determinant().norm();
        if det <= tol.atol {
            return Err(Error::SingularMatrix { det });
        }
        lu.try_inverse()
            .map(|m| Self::from_nalgebra(&m))
            .ok_or(Error::SingularMatrix { det })
    }
}

pub(crate) fn strides_of(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * shape[k + 1];
    }
    strides
}

/// Contracts `a` and `b` over the listed index pairs.
///
/// The result carries the unpaired indices of `a` followed by the unpaired
/// indices of `b`, each in their original order.
pub fn contract(a: &Tensor, b: &Tensor, pairs: &[(usize, usize)]) -> Result<Tensor> {
    let (na, nb) = (a.order(), b.order());
    let mut used_a = vec![false; na];
    let mut used_b = vec![false; nb];
    for &(i, j) in pairs {
        if i >= na {
            return Err(Error::IndexOutOfRange { index: i, order: na });
        }
        if j >= nb {
            return Err(Error::IndexOutOfRange { index: j, order: nb });
        }
        if std::mem::replace(&mut used_a[i], true) {
            return Err(Error::RepeatedIndex(i));
        }
        if std::mem::replace(&mut used_b[j], true) {
            return Err(Error::RepeatedIndex(j));
        }
        if a.shape[i] != b.shape[j] {
            return Err(Error::DimensionMismatch(a.shape[i], b.shape[j]));
        }
    }
    let free_a: Vec<usize> = (0..na).filter(|&i| !used_a[i]).collect();
    let free_b: Vec<usize> = (0..nb).filter(|&j| !used_b[j]).collect();

    let axes_a: Vec<usize> = free_a.iter().copied().chain(pairs.iter().map(|p| p.0)).collect();
    let axes_b: Vec<usize> = pairs.iter().map(|p| p.1).chain(free_b.iter().copied()).collect();
    let pa = a.permute(&axes_a)?;
    let pb = b.permute(&axes_b)?;

    let rows: usize = free_a.iter().map(|&i| a.shape[i]).product();
    let inner: usize = pairs.iter().map(|p| a.shape[p.0]).product();
    let cols: usize = free_b.iter().map(|&j| b.shape[j]).product();

    let mut out = vec![ZERO; rows * cols];
    for r in 0..rows {
        let row = &pa.data[r * inner..(r + 1) * inner];
        let dst = &mut out[r * cols..(r + 1) * cols];
        for (k, &x) in row.iter().enumerate() {
            if x == ZERO {
                continue;
            }
            let src = &pb.data[k * cols..(k + 1) * cols];
            for (d, &y) in dst.iter_mut().zip(src) {
                *d += x * y;
            }
        }
    }
    let shape: Vec<usize> =
        free_a.iter().map(|&i| a.shape[i]).chain(free_b.iter().map(|&j| b.shape[j])).collect();
    Ok(Tensor::from_parts(shape, out))
}

/// Singular values of a matrix, largest first.
pub fn singular_values(m: &Tensor) -> Result<Vec<f64>> {
    let mat = m.to_nalgebra()?;
    let mut sv: Vec<f64> = mat.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Number of singular values above `rank_cutoff * sigma_max`.
pub fn numeric_rank(m: &Tensor, tol: &ToleranceConfig) -> Result<usize> {
    let sv = singular_values(m)?;
    let largest = sv.first().copied().unwrap_or(0.0);
    if largest == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol.rank_cutoff * largest).count())
}

/// Least-squares scalar `c` minimising `|a - c b|` together with the residual
/// `max |a - c b|`. Two zero tensors give `c = 1`.
pub fn best_scalar(a: &Tensor, b: &Tensor) -> Result<(Scalar, f64)> {
    if a.shape != b.shape {
        return Err(Error::ShapeMismatch(a.shape.clone(), b.shape.clone()));
    }
    let bb: f64 = b.data.iter().map(|x| x.norm_sqr()).sum();
    let c = if bb == 0.0 {
        if a.is_zero() {
            ONE
        } else {
            return Ok((ZERO, a.max_abs()));
        }
    } else {
        let ba: Scalar = b.data.iter().zip(&a.data).map(|(x, y)| x.conj() * y).sum();
        ba / bb
    };
    let residual = a.data.iter().zip(&b.data).map(|(&x, &y)| (x - c * y).norm()).fold(0.0, f64::max);
    Ok((c, residual))
}

/// Returns `c` with `a ≈ c·b` entrywise, or `None` when no scalar fits.
pub fn approx_proportional(a: &Tensor, b: &Tensor, tol: &ToleranceConfig) -> Result<Option<Scalar>> {
    let (c, residual) = best_scalar(a, b)?;
    if b.is_zero() && !a.is_zero() {
        return Ok(None);
    }
    let scale = a.max_abs().max(b.max_abs() * c.norm());
    Ok(tol.accepts(residual, scale).then_some(c))
}

/// A permutation of `{0, .., n-1}` acting on basis vectors: `|i> ↦ |map[i]>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &m in &map {
            if m >= n {
                return Err(Error::IndexOutOfRange { index: m, order: n });
            }
            if std::mem::replace(&mut seen[m], true) {
                return Err(Error::RepeatedIndex(m));
            }
        }
        Ok(Self(map))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn map(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &m)| i == m)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &m) in self.0.iter().enumerate() {
            inv[m] = i;
        }
        Self(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self(other.0.iter().map(|&i| self.0[i]).collect())
    }

    /// Matrix with `M[map[i]][i] = 1`.
    pub fn matrix(&self) -> Tensor {
        let n = self.0.len();
        let mut t = Tensor::zeros(vec![n, n]);
        for (i, &m) in self.0.iter().enumerate() {
            t.data[m * n + i] = ONE;
        }
        t
    }

    pub fn sign(&self) -> f64 {
        let mut visited = vec![false; self.0.len()];
        let mut sign = 1.0;
        for start in 0..self.0.len() {
            let mut len = 0;
            let mut i = start;
            while !visited[i] {
                visited[i] = true;
                i = self.0[i];
                len += 1;
            }
            if len > 0 && len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> Tensor {
        Tensor::matrix(&rows.iter().map(|r| r.iter().map(|&x| re(x)).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn rejects_bad_data() {
        assert!(matches!(Tensor::new(vec![2, 2], vec![ONE; 3]), Err(Error::DataLength { .. })));
        assert!(matches!(
            Tensor::new(vec![1], vec![Scalar::new(f64::NAN, 0.0)]),
            Err(Error::NonFinite(0))
        ));
        assert!(matches!(Tensor::new(vec![0], vec![]), Err(Error::ZeroDimension(_))));
    }

    #[test]
    fn identity_composition() {
        let id = Tensor::identity(3);
        assert_eq!(contract(&id, &id, &[(1, 0)]).unwrap(), id);
    }

    #[test]
    fn contract_errors() {
        let a = Tensor::zeros(vec![2, 3]);
        let b = Tensor::zeros(vec![2]);
        assert_eq!(contract(&a, &b, &[(1, 0)]), Err(Error::DimensionMismatch(3, 2)));
        assert!(matches!(contract(&a, &b, &[(2, 0)]), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(
            contract(&a, &Tensor::zeros(vec![2, 2]), &[(0, 0), (0, 1)]),
            Err(Error::RepeatedIndex(0))
        ));
    }

    #[test]
    fn contract_orders_free_indices() {
        // a[i,j,k] = i + 10 j + 100 k ; contracting j with a vector of ones.
        let mut a = Tensor::zeros(vec![2, 3, 2]);
        for i in 0..2 {
            for j in 0..3 {
                for k in 0..2 {
                    a.set(&[i, j, k], re((i + 10 * j + 100 * k) as f64));
                }
            }
        }
        let ones = Tensor::from_real(vec![3], &[1.0, 1.0, 1.0]).unwrap();
        let r = contract(&a, &ones, &[(1, 0)]).unwrap();
        assert_eq!(r.shape(), &[2, 2]);
        assert_eq!(r.get(&[1, 1]), re(3.0 + 30.0 + 300.0));
    }

    #[test]
    fn permute_round_trip() {
        let data: Vec<Scalar> = (0..24).map(|x| re(x as f64)).collect();
        let t = Tensor::new(vec![2, 3, 4], data).unwrap();
        let p = t.permute(&[2, 0, 1]).unwrap();
        assert_eq!(p.shape(), &[4, 2, 3]);
        assert_eq!(p.get(&[3, 1, 2]), t.get(&[1, 2, 3]));
        assert_eq!(p.permute(&[1, 2, 0]).unwrap(), t);
    }

    #[test]
    fn rank_examples() {
        let tol = ToleranceConfig::default();
        assert_eq!(numeric_rank(&Tensor::identity(3), &tol).unwrap(), 3);
        assert_eq!(numeric_rank(&Tensor::zeros(vec![3, 3]), &tol).unwrap(), 0);
        let w_bubble = mat(&[&[0.0, 0.0, 3.0], &[0.0; 3], &[0.0; 3]]);
        assert_eq!(numeric_rank(&w_bubble, &tol).unwrap(), 1);
        let i_bubble = mat(&[&[0.0, 2.0, 0.0], &[0.0; 3], &[0.0, 0.0, 1.0]]);
        assert_eq!(numeric_rank(&i_bubble, &tol).unwrap(), 2);
        assert!(matches!(numeric_rank(&Tensor::zeros(vec![3]), &tol), Err(Error::NotAMatrix(_))));
    }

    #[test]
    fn proportionality() {
        let tol = ToleranceConfig::default();
        let id = Tensor::identity(3);
        assert_eq!(approx_proportional(&id.scale(re(2.0)), &id, &tol).unwrap(), Some(re(2.0)));
        let z = Tensor::zeros(vec![3, 3]);
        assert_eq!(approx_proportional(&z, &z, &tol).unwrap(), Some(ONE));
        assert_eq!(approx_proportional(&id, &z, &tol).unwrap(), None);
        let other = mat(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]);
        assert_eq!(approx_proportional(&id, &other, &tol).unwrap(), None);
        assert!(approx_proportional(&id, &Tensor::zeros(vec![9]), &tol).is_err());
    }

    #[test]
    fn permutation_matrix_convention() {
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        let m = p.matrix();
        for i in 0..3 {
            assert_eq!(m.apply(&Tensor::basis(3, i)).unwrap(), Tensor::basis(3, p.apply(i)));
        }
        let q = Permutation::new(vec![1, 0, 2]).unwrap();
        assert_eq!(p.compose(&q).matrix(), p.matrix().matmul(&q.matrix()).unwrap());
        assert_eq!(p.sign(), 1.0);
        assert_eq!(q.sign(), -1.0);
        assert!(p.compose(&p.inverse()).is_identity());
    }

    #[test]
    fn inverse_and_det() {
        let tol = ToleranceConfig::default();
        let m = mat(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let inv = m.inverse(&tol).unwrap();
        assert!(m.matmul(&inv).unwrap().max_abs_diff(&Tensor::identity(2)).unwrap() < 1e-14);
        assert!((m.determinant().unwrap() - re(1.0)).norm() < 1e-14);
        assert!(matches!(mat(&[&[1.0, 2.0], &[2.0, 4.0]]).inverse(&tol), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn serde_pairs() {
        let t = Tensor::vector(&[Scalar::new(1.0, -2.0), ZERO]).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"shape":[2],"data":[[1.0,-2.0],[0.0,0.0]]}"#);
        assert_eq!(serde_json::from_str::<Tensor>(&s).unwrap(), t);
        assert!(serde_json::from_str::<Tensor>(r#"{"shape":[2],"data":[[1.0,0.0]]}"#).is_err());
    }
}
