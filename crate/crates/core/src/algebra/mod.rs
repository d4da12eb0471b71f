//! Commutative Frobenius algebras on a single qudit wire.
//!
//! Tensor index conventions (outputs first, then inputs):
//! - `mu[c, a, b]`: multiplication `|a>⊗|b> ↦ Σ_c mu[c,a,b] |c>`
//! - `eta[c]`: unit state
//! - `delta[b, c, a]`: comultiplication `|a> ↦ Σ delta[b,c,a] |b>⊗|c>`
//! - `epsilon[a]`: counit effect

mod axioms;
mod builtin;
mod classify;
mod induce;

pub use axioms::{check_axioms, AxiomReport, Law, LawCheck};
pub use builtin::{builtin, BUILTIN_NAMES};
pub use classify::{classify_algebra, derived_maps, AlgebraClass, ClassEvidence, ClassLabel, DerivedMaps};
pub use induce::{induce_algebra, induce_state, InducedState};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{Scalar, Tensor, ToleranceConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cfa {
    name: String,
    dim: usize,
    mu: Tensor,
    eta: Tensor,
    delta: Tensor,
    epsilon: Tensor,
    #[serde(skip)]
    verified: bool,
}

impl Cfa {
    /// Builds an unverified algebra after checking tensor shapes.
    pub fn new(name: impl Into<String>, mu: Tensor, eta: Tensor, delta: Tensor, epsilon: Tensor) -> Result<Self> {
        let dim = eta.shape().first().copied().unwrap_or(0);
        let expect = |t: &Tensor, shape: Vec<usize>| {
            if t.shape() == shape.as_slice() {
                Ok(())
            } else {
                Err(Error::ShapeMismatch(shape, t.shape().to_vec()))
            }
        };
        expect(&eta, vec![dim])?;
        expect(&mu, vec![dim; 3])?;
        expect(&delta, vec![dim; 3])?;
        expect(&epsilon, vec![dim])?;
        Ok(Self { name: name.into(), dim, mu, eta, delta, epsilon, verified: false })
    }

    /// Algebra from sparse integer terms: `mu` as `(c, a, b, coeff)` for
    /// `coeff |c><ab|`, `delta` as `(b, c, a, coeff)` for `coeff |bc><a|`.
    pub fn from_terms(
        name: &str,
        dim: usize,
        mu: &[(usize, usize, usize, f64)],
        eta: &[f64],
        delta: &[(usize, usize, usize, f64)],
        epsilon: &[f64],
    ) -> Result<Self> {
        let fill = |terms: &[(usize, usize, usize, f64)]| {
            let mut t = Tensor::zeros(vec![dim; 3]);
            for &(x, y, z, c) in terms {
                if x.max(y).max(z) >= dim {
                    return Err(Error::DigitOutOfRange { digit: x.max(y).max(z), dim });
                }
                let v = t.get(&[x, y, z]);
                t.set(&[x, y, z], v + Scalar::new(c, 0.0));
            }
            Ok(t)
        };
        Self::new(name, fill(mu)?, Tensor::from_real(vec![dim], eta)?, fill(delta)?, Tensor::from_real(vec![dim], epsilon)?)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mu(&self) -> &Tensor {
        &self.mu
    }

    pub fn eta(&self) -> &Tensor {
        &self.eta
    }

    pub fn delta(&self) -> &Tensor {
        &self.delta
    }

    pub fn epsilon(&self) -> &Tensor {
        &self.epsilon
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Runs the axiom check and marks the algebra verified when every law holds.
    pub fn verify(&mut self, tol: &ToleranceConfig) -> Result<AxiomReport> {
        let report = check_axioms(self, tol);
        if !report.all_passed() {
            return Err(Error::AxiomsFailed { name: self.name.clone(), residual: report.worst_residual() });
        }
        self.verified = true;
        Ok(report)
    }

    /// Consuming form of [`Cfa::verify`].
    pub fn verified(mut self, tol: &ToleranceConfig) -> Result<Self> {
        self.verify(tol)?;
        Ok(self)
    }

    pub(crate) fn require_verified(&self) -> Result<()> {
        if self.verified {
            Ok(())
        } else {
            Err(Error::UnverifiedAlgebra(self.name.clone()))
        }
    }

    /// Largest entrywise difference over all four structure tensors.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok([
            self.mu.max_abs_diff(&other.mu)?,
            self.eta.max_abs_diff(&other.eta)?,
            self.delta.max_abs_diff(&other.delta)?,
            self.epsilon.max_abs_diff(&other.epsilon)?,
        ]
        .into_iter()
        .fold(0.0, f64::max))
    }
}
