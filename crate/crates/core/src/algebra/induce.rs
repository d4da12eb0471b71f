use serde::{Deserialize, Serialize};

use super::Cfa;
use crate::error::{Error, Result};
use crate::state::PureState;
use crate::tensor::{Scalar, Tensor, ToleranceConfig};

/// Tripartite state of an algebra together with its two witnessing effects.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InducedState {
    pub psi: PureState,
    /// `ε∘μ`
    pub phi: Tensor,
    /// `ε`
    pub xi: Tensor,
}

/// The three-output spider `(id⊗δ)∘δ∘η` with its cap and counit.
pub fn induce_state(f: &Cfa) -> Result<InducedState> {
    f.require_verified()?;
    let d = f.dim();
    let (eta, delta) = (f.eta(), f.delta());
    let mut psi = Tensor::zeros(vec![d; 3]);
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                let mut v = Scalar::default();
                for a in 0..d {
                    for m in 0..d {
                        v += eta.data()[a] * delta.get(&[x, m, a]) * delta.get(&[y, z, m]);
                    }
                }
                psi.set(&[x, y, z], v);
            }
        }
    }
    let phi = super::derived_maps(f).cap;
    Ok(InducedState { psi: PureState::new(d, psi)?, phi, xi: f.epsilon().clone() })
}

/// Algebra of a tripartite state with respect to the effect `xi` on the middle party.
///
/// With `K[x,y] = Σ_b xi[b] psi[x,b,y]` and `Φ = K⁻¹`:
/// `mu[c,a,b] = Σ Φ[a,a′] Φ[b,b′] psi[a′,b′,c]`,
/// `delta[b,c,a] = Σ Φ[a,a′] psi[a′,b,c]`,
/// `eta[c] = Σ xi[a] xi[b] psi[a,b,c]`, `epsilon = xi`.
/// The result is not verified.
pub fn induce_algebra(psi: &PureState, xi: &Tensor, tol: &ToleranceConfig) -> Result<(Cfa, Tensor)> {
    let d = psi.dim();
    if psi.parties() != 3 {
        return Err(Error::UnsupportedState { expected: 3, dim: d, parties: psi.parties(), actual_dim: d });
    }
    if xi.shape() != [d] {
        return Err(Error::ShapeMismatch(vec![d], xi.shape().to_vec()));
    }
    let p = psi.amplitudes();
    let mut k = Tensor::zeros(vec![d, d]);
    for x in 0..d {
        for y in 0..d {
            k.set(&[x, y], (0..d).map(|b| xi.data()[b] * p.get(&[x, b, y])).sum());
        }
    }
    let phi = match k.inverse(tol) {
        Ok(inv) => inv,
        Err(Error::SingularMatrix { det }) => return Err(Error::NotStronglyMaximal { det }),
        Err(e) => return Err(e),
    };

    // delta[b,c,a] = Σ_a′ Φ[a,a′] psi[a′,b,c]
    let mut delta = Tensor::zeros(vec![d; 3]);
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let v: Scalar = (0..d).map(|a2| phi.get(&[a, a2]) * p.get(&[a2, b, c])).sum();
                delta.set(&[b, c, a], v);
            }
        }
    }
    // mu[c,a,b] = Σ_b′ Φ[b,b′] delta[b′,c,a]
    let mut mu = Tensor::zeros(vec![d; 3]);
    for c in 0..d {
        for a in 0..d {
            for b in 0..d {
                let v: Scalar = (0..d).map(|b2| phi.get(&[b, b2]) * delta.get(&[b2, c, a])).sum();
                mu.set(&[c, a, b], v);
            }
        }
    }
    let mut eta = Tensor::zeros(vec![d]);
    for c in 0..d {
        let mut v = Scalar::default();
        for a in 0..d {
            for b in 0..d {
                v += xi.data()[a] * xi.data()[b] * p.get(&[a, b, c]);
            }
        }
        eta.set(&[c], v);
    }
    let f = Cfa::new("induced", mu, eta, delta, xi.clone())?;
    Ok((f, phi))
}
