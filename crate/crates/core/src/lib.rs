//! Commutative Frobenius algebras on small Hilbert spaces, string diagrams
//! over them, and their use for classifying and synthesizing entangled
//! qutrit states.

pub mod algebra;
pub mod diagram;
pub mod entanglement;
pub mod error;
pub mod ldu;
pub mod state;
pub mod synthesis;
pub mod tensor;

pub use algebra::{builtin, check_axioms, classify_algebra, AlgebraClass, AxiomReport, Cfa, ClassLabel};
pub use diagram::{evaluate, parse_diagram, AlgebraRegistry, Diagram, DiagramBuilder, Generator};
pub use entanglement::{classify_state, maximality_witness, Budget, LocalOperation, StateClass, StateLabel, Witness};
pub use error::{Error, Result};
pub use state::{parse_ket, PureState};
pub use synthesis::{matrix_to_diagram, qmux, qmux_corrected, state_to_diagram, SynthesisResult, Trio};
pub use tensor::{Permutation, Scalar, Tensor, ToleranceConfig};
