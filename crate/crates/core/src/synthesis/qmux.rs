use super::matrix::matrix_diagram;
use super::Trio;
use crate::diagram::{Diagram, DiagramBuilder, Generator, WireId};
use crate::error::{Error, Result};
use crate::tensor::{Scalar, Tensor, ToleranceConfig, ONE};

/// `h_i = |2⟩ε_G + (|0⟩+|1⟩)⟨i|`: all ones when the control is `i`, `|2⟩` otherwise.
fn selector(i: usize) -> Tensor {
    let mut h = Tensor::zeros(vec![3, 3]);
    for k in 0..3 {
        h.set(&[2, k], ONE);
    }
    h.set(&[0, i], ONE);
    h.set(&[1, i], ONE);
    h
}

/// Multiplexer over `width`-wire branches.
///
/// Inputs are three branches of `width` wires each (branch-major); outputs
/// are a control wire followed by `width` wires. With control value `k`,
/// branch `k` passes through while every wire of the other branches is
/// projected onto `⟨2|`, and the branches are joined by W multiplication,
/// whose unit is `|2⟩`. A G spider copies the control to each selector.
pub(crate) fn branch_mux(trio: &Trio, width: usize) -> Result<Diagram> {
    let tol = ToleranceConfig::default();
    let selectors: Vec<Diagram> =
        (0..3).map(|i| matrix_diagram(trio, &selector(i), true, &tol)).collect::<Result<_>>()?;
    let mut b = DiagramBuilder::new();
    let xs: Vec<WireId> = (0..3 * width).map(|_| b.input(3)).collect();

    let mut copies = Vec::with_capacity(1 + 3 * width);
    let mut rest = b.node1(Generator::Unit(trio.g.clone()), &[])?;
    for _ in 0..3 * width {
        let pair = b.node(Generator::Comul(trio.g.clone()), &[rest])?;
        copies.push(pair[0]);
        rest = pair[1];
    }
    copies.push(rest);

    let mut masked = vec![0; 3 * width];
    for (i, sel) in selectors.iter().enumerate() {
        for j in 0..width {
            let slot = i * width + j;
            let mask = b.embed(sel, &[copies[1 + slot]])?[0];
            masked[slot] = b.node1(Generator::Mul(trio.g.clone()), &[mask, xs[slot]])?;
        }
    }
    let mut outputs = vec![copies[0]];
    for j in 0..width {
        let y = b.node1(Generator::Mul(trio.w.clone()), &[masked[j], masked[width + j]])?;
        outputs.push(b.node1(Generator::Mul(trio.w.clone()), &[y, masked[2 * width + j]])?);
    }
    b.finish(&outputs)
}

/// Three qutrit inputs `ψ, φ, ζ` to a control and a target wire:
/// `ψ⊗φ⊗ζ ↦ ⟨2|φ⟩⟨2|ζ⟩·|0ψ⟩ + ⟨2|ζ⟩⟨2|ψ⟩·|1φ⟩ + ⟨2|ψ⟩⟨2|φ⟩·|2ζ⟩`, up to a
/// fixed nonzero scalar.
pub fn qmux(trio: &Trio) -> Diagram {
    branch_mux(trio, 1).expect("fixed wiring")
}

/// Overlap `⟨2|x⟩`, rejecting inputs where it vanishes.
fn overlap(x: &Tensor, which: usize, tol: &ToleranceConfig) -> Result<Scalar> {
    if x.shape() != [3] {
        return Err(Error::ShapeMismatch(vec![3], x.shape().to_vec()));
    }
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let o = x.data()[2];
    if o.norm() <= tol.rank_cutoff * x.max_abs() {
        return Err(Error::ZeroOverlap(which));
    }
    Ok(o)
}

/// Diagonal correction on the control wire cancelling the branch scalars
/// `Π_{i≠k} o_i`.
pub(crate) fn control_correction(trio: &Trio, o: [Scalar; 3], tol: &ToleranceConfig) -> Result<Diagram> {
    let l = Tensor::diagonal(&[ONE / (o[1] * o[2]), ONE / (o[2] * o[0]), ONE / (o[0] * o[1])]);
    matrix_diagram(trio, &l, false, tol)
}

/// A state proportional to `|0ψ⟩ + |1φ⟩ + |2ζ⟩`: the QMUX fed with the three
/// states, followed by a diagonal correction on the control.
pub fn qmux_corrected(psi: &Tensor, phi: &Tensor, zeta: &Tensor, trio: &Trio, tol: &ToleranceConfig) -> Result<Diagram> {
    let o = [overlap(psi, 0, tol)?, overlap(phi, 1, tol)?, overlap(zeta, 2, tol)?];
    let mut b = DiagramBuilder::new();
    let states: Vec<WireId> = [psi, phi, zeta]
        .into_iter()
        .map(|v| b.node1(Generator::State(v.clone()), &[]))
        .collect::<Result<_>>()?;
    let out = b.embed(&qmux(trio), &states)?;
    let control = b.embed(&control_correction(trio, o, tol)?, &[out[0]])?[0];
    b.finish(&[control, out[1]])
}
