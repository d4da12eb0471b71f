use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::matrix::matrix_diagram;
use super::qmux::{branch_mux, control_correction};
use super::{SynthesisResult, Trio};
use crate::diagram::{evaluate, Diagram, DiagramBuilder, Generator, WireId};
use crate::entanglement::{apply_local, LocalOperation};
use crate::error::{Error, Result};
use crate::state::PureState;
use crate::tensor::{singular_values, Scalar, Tensor, ToleranceConfig};

/// Largest number of parties accepted by [`state_to_diagram`].
pub const MAX_PARTIES: usize = 6;

/// Amplitudes ending in digit 2 are the branch overlaps used at every level
/// of the recursion; below this fraction of the largest amplitude the state
/// is rotated first.
const MIN_OVERLAP: f64 = 1e-3;
const ROTATION_ATTEMPTS: usize = 64;
const MAX_ROTATION_COND: f64 = 10.0;

fn overlaps_ok(amps: &Tensor) -> bool {
    let floor = MIN_OVERLAP * amps.max_abs();
    amps.data().iter().skip(2).step_by(3).all(|a| a.norm() > floor)
}

/// Branch `k` of the first party: amplitudes `s[k, ..]`.
fn branch(amps: &Tensor, k: usize) -> Result<Tensor> {
    let n = amps.order();
    let len = amps.len() / 3;
    Tensor::new(vec![3; n - 1], amps.data()[k * len..(k + 1) * len].to_vec())
}

fn build(trio: &Trio, amps: &Tensor, tol: &ToleranceConfig) -> Result<Diagram> {
    if amps.order() == 1 {
        return Diagram::generator(Generator::State(amps.clone()));
    }
    let width = amps.order() - 1;
    let subs: Vec<Tensor> = (0..3).map(|k| branch(amps, k)).collect::<Result<_>>()?;
    // ⟨2…2|s_k⟩ is the last amplitude of the branch.
    let o: [Scalar; 3] = [0, 1, 2].map(|k| *subs[k].data().last().expect("non-empty"));
    let mut b = DiagramBuilder::new();
    let mut wires: Vec<WireId> = Vec::with_capacity(3 * width);
    for sub in &subs {
        wires.extend(b.embed(&build(trio, sub, tol)?, &[])?);
    }
    let out = b.embed(&branch_mux(trio, width)?, &wires)?;
    let control = b.embed(&control_correction(trio, o, tol)?, &[out[0]])?[0];
    let outputs: Vec<WireId> = std::iter::once(control).chain(out[1..].iter().copied()).collect();
    b.finish(&outputs)
}

fn random_rotation(rng: &mut ChaCha8Rng) -> Result<Tensor> {
    loop {
        let data: Vec<Scalar> = (0..9).map(|_| Scalar::new(StandardNormal.sample(rng), StandardNormal.sample(rng))).collect();
        let r = Tensor::new(vec![3, 3], data)?;
        let sv = singular_values(&r)?;
        if sv[0] <= MAX_ROTATION_COND * sv[2] {
            return Ok(r);
        }
    }
}

/// Realizes a qutrit state of up to [`MAX_PARTIES`] parties as a diagram
/// with no inputs, up to a nonzero scalar.
///
/// The state is split along its first party into three branches, each
/// synthesized recursively, and the branches are joined by a multiplexer
/// with a diagonal correction on the control wire. The correction divides by
/// the amplitudes whose last digit is 2; when any of those is small, the
/// state is first rotated by `R⊗…⊗R` for a seeded random `R` and each output
/// wire gets `R⁻¹` appended.
pub fn state_to_diagram(s: &PureState, trio: &Trio, tol: &ToleranceConfig, seed: u64) -> Result<SynthesisResult> {
    if s.dim() != 3 {
        return Err(Error::DimensionMismatch(3, s.dim()));
    }
    let n = s.parties();
    if n > MAX_PARTIES {
        return Err(Error::ArityMismatch { expected: MAX_PARTIES, actual: n });
    }
    let target = s.amplitudes().clone();
    let diagram = if n == 1 || overlaps_ok(&target) {
        build(trio, &target, tol)?
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut found = None;
        for _ in 0..ROTATION_ATTEMPTS {
            let r = random_rotation(&mut rng)?;
            let rotated = apply_local(s, &LocalOperation::uniform(r.clone(), n))?;
            if overlaps_ok(rotated.amplitudes()) {
                found = Some((r, rotated));
                break;
            }
        }
        let (r, rotated) = found.ok_or(Error::ZeroOverlap(0))?;
        let undo = matrix_diagram(trio, &r.inverse(tol)?, false, tol)?;
        let layer = (1..n).fold(undo.clone(), |acc, _| acc.beside(&undo));
        build(trio, rotated.amplitudes(), tol)?.then(&layer)?
    };
    let achieved = evaluate(&diagram);
    SynthesisResult::check(diagram, target, achieved)
}
