//! Diagrams over the G, W and I algebras realizing matrices, the QMUX and
//! arbitrary qutrit states. Every public constructor checks its result by
//! evaluation.

mod matrix;
mod qmux;
mod state;

pub use matrix::{matrix_to_diagram, permutation_diagram};
pub use qmux::{qmux, qmux_corrected};
pub use state::{state_to_diagram, MAX_PARTIES};

use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::algebra::{builtin, Cfa};
use crate::diagram::{to_dsl, Diagram, DiagramBuilder, Generator};
use crate::error::{Error, Result};
use crate::tensor::{best_scalar, Scalar, Tensor};

/// Relative residual above which a synthesized diagram is reported as a bug.
pub const RESIDUAL_LIMIT: f64 = 1e-6;

/// The three qutrit algebras used for synthesis.
#[derive(Clone, Debug, PartialEq)]
pub struct Trio {
    pub g: Arc<Cfa>,
    pub w: Arc<Cfa>,
    pub i: Arc<Cfa>,
}

impl Default for Trio {
    fn default() -> Self {
        Self::new()
    }
}

impl Trio {
    pub fn new() -> Self {
        let get = |n: &str| Arc::new(builtin(n).expect("built-in algebras verify"));
        Self { g: get("G3"), w: get("W3"), i: get("I3") }
    }

    pub fn get(&self, which: TrioAlgebra) -> &Arc<Cfa> {
        match which {
            TrioAlgebra::G => &self.g,
            TrioAlgebra::W => &self.w,
            TrioAlgebra::I => &self.i,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrioAlgebra {
    G,
    W,
    I,
}

/// A synthesized diagram with its check: `achieved ≈ scalar · target`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SynthesisResult {
    #[serde(serialize_with = "dsl")]
    pub diagram: Diagram,
    pub target: Tensor,
    pub achieved: Tensor,
    pub scalar: Scalar,
    /// Largest entry of `achieved - scalar·target`, relative to the largest
    /// entry of `achieved`.
    pub residual: f64,
}

fn dsl<S: Serializer>(d: &Diagram, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&to_dsl(d))
}

impl SynthesisResult {
    /// Scores `achieved` against `target` and fails when the residual is
    /// above [`RESIDUAL_LIMIT`].
    pub(crate) fn check(diagram: Diagram, target: Tensor, achieved: Tensor) -> Result<Self> {
        let (scalar, abs) = best_scalar(&achieved, &target)?;
        let residual = abs / achieved.max_abs().max(f64::MIN_POSITIVE);
        if residual.is_nan() || residual > RESIDUAL_LIMIT || scalar.norm() == 0.0 {
            return Err(Error::SynthesisResidualExceeded { residual, limit: RESIDUAL_LIMIT });
        }
        Ok(Self { diagram, target, achieved, scalar, residual })
    }
}

/// `μ ∘ (|v⟩ ⊗ id)`: multiplication by a fixed element.
///
/// For G this is `diag(v)`; for W it is `v₂·I + v₁·N + v₀·N²` with
/// `N = |0⟩⟨1| + |1⟩⟨2|`.
pub fn vector_mult_map(trio: &Trio, which: TrioAlgebra, v: &Tensor) -> Result<Diagram> {
    if v.shape() != [3] {
        return Err(Error::ShapeMismatch(vec![3], v.shape().to_vec()));
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut b = DiagramBuilder::new();
    let x = b.input(3);
    let s = b.node1(Generator::State(v.clone()), &[])?;
    let y = b.node1(Generator::Mul(trio.get(which).clone()), &[s, x])?;
    b.finish(&[y])
}
