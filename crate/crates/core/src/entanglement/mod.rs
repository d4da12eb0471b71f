//! SLOCC tools for multipartite states: local operations, symmetry,
//! strong-maximality witnesses and the tripartite qutrit classifier.

mod catalog;
mod classify;
mod maximality;

pub use catalog::{catalog, catalog_entries, CatalogEntry};
pub use classify::{classify_state, normalize_effect, Budget, NonFrobeniusReason, StateClass, StateLabel};
pub use maximality::{maximality_witness, party_contraction, MaximalityVerdict};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::PureState;
use crate::tensor::{approx_proportional, contract, Tensor, ToleranceConfig};

/// One `d × d` matrix per party.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalOperation {
    pub matrices: Vec<Tensor>,
}

impl LocalOperation {
    pub fn new(matrices: Vec<Tensor>) -> Self {
        Self { matrices }
    }

    /// The same matrix on each of `parties` parties.
    pub fn uniform(matrix: Tensor, parties: usize) -> Self {
        Self { matrices: vec![matrix; parties] }
    }

    pub fn identity(dim: usize, parties: usize) -> Self {
        Self::uniform(Tensor::identity(dim), parties)
    }
}

/// Applies `L_1 ⊗ .. ⊗ L_N` to a state.
///
/// Fails with [`Error::ZeroState`] when the image vanishes (possible only for
/// singular matrices).
pub fn apply_local(s: &PureState, op: &LocalOperation) -> Result<PureState> {
    let n = s.parties();
    let d = s.dim();
    if op.matrices.len() != n {
        return Err(Error::ArityMismatch { expected: n, actual: op.matrices.len() });
    }
    let mut t = s.amplitudes().clone();
    for (k, m) in op.matrices.iter().enumerate() {
        if m.shape() != [d, d] {
            return Err(Error::ShapeMismatch(vec![d, d], m.shape().to_vec()));
        }
        let applied = contract(m, &t, &[(1, k)])?;
        // The new index sits in front; move it back to slot k.
        let axes: Vec<usize> = (1..=k).chain(std::iter::once(0)).chain(k + 1..n).collect();
        t = applied.permute(&axes)?;
    }
    PureState::new(d, t)
}

/// `true` when the amplitudes are invariant under every permutation of parties.
pub fn is_symmetric(s: &PureState, tol: &ToleranceConfig) -> bool {
    let a = s.amplitudes();
    let scale = a.max_abs();
    (0..s.parties()).permutations(s.parties()).all(|perm| {
        let p = a.permute(&perm).expect("valid permutation");
        let residual = p.max_abs_diff(a).expect("same shape");
        tol.accepts(residual, scale)
    })
}

/// Effects certifying strong maximality of a tripartite state: `xi` contracted
/// on `party` leaves a matrix `K` with `phi = K⁻¹`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub party: usize,
    pub xi: Tensor,
    pub phi: Tensor,
}

impl Witness {
    /// Largest entry of `phi·K - id` for the given state.
    pub fn residual(&self, s: &PureState) -> Result<f64> {
        let k = party_contraction(s, &self.xi, self.party)?;
        self.phi.matmul(&k)?.max_abs_diff(&Tensor::identity(s.dim()))
    }
}

/// Moves a witness of `s` to `(L⊗L⊗L)s`: `xi' = xi∘L⁻¹`, `phi' = L⁻ᵀ·phi·L⁻¹`.
pub fn transport_witness(l: &Tensor, w: &Witness, tol: &ToleranceConfig) -> Result<Witness> {
    let inv = l.inverse(tol)?;
    let xi = inv.transpose()?.apply(&w.xi)?;
    let phi = inv.transpose()?.matmul(&w.phi)?.matmul(&inv)?;
    Ok(Witness { party: w.party, xi, phi })
}

/// `true` when `op` maps `s2` onto the ray of `s1`. Every matrix must be
/// invertible.
pub fn verify_slocc_witness(s1: &PureState, s2: &PureState, op: &LocalOperation, tol: &ToleranceConfig) -> Result<bool> {
    for m in &op.matrices {
        let (r, c) = m.matrix_dims()?;
        if r != c {
            return Err(Error::DimensionMismatch(r, c));
        }
        let det = m.determinant()?.norm();
        if det <= tol.atol {
            return Err(Error::SingularMatrix { det });
        }
    }
    if s1.parties() != s2.parties() || s1.dim() != s2.dim() {
        return Ok(false);
    }
    let image = apply_local(s2, op)?;
    Ok(approx_proportional(s1.amplitudes(), image.amplitudes(), tol)?.is_some_and(|c| c.norm() > 0.0))
}
