use std::collections::VecDeque;

use super::{vector_mult_map, SynthesisResult, Trio, TrioAlgebra};
use crate::diagram::{evaluate, Diagram, DiagramBuilder, Generator};
use crate::error::{Error, Result};
use crate::ldu::{ldu_decompose, ldu_decompose_singular, LduFactors};
use crate::tensor::{Permutation, Scalar, Tensor, ToleranceConfig, ONE, ZERO};

/// `(cap ⊗ id) ∘ (id ⊗ cup)` with the cap from `cap` and the cup from `cup`.
/// Evaluates to `(capᵀ·cupᵀ)` read as `[out, in]`, i.e. `M[z,a] = Σ_y cap[a,y] cup[y,z]`.
fn bent_wire(trio: &Trio, cap: TrioAlgebra, cup: TrioAlgebra) -> Diagram {
    let (cap, cup) = (trio.get(cap).clone(), trio.get(cup).clone());
    let mut b = DiagramBuilder::new();
    let x = b.input(3);
    let u = b.node1(Generator::Unit(cup.clone()), &[]).expect("valid");
    let yz = b.node(Generator::Comul(cup), &[u]).expect("valid");
    let m = b.node1(Generator::Mul(cap.clone()), &[x, yz[0]]).expect("valid");
    b.node(Generator::Counit(cap), &[m]).expect("valid");
    b.finish(&[yz[1]]).expect("all wires closed")
}

/// The three bent-wire permutations with their index maps:
/// cap_G/cup_W swaps 0 and 2, cap_G/cup_I swaps 0 and 1, cap_W/cup_I is the
/// cycle 0→2→1→0.
fn primitives(trio: &Trio) -> [(Diagram, [usize; 3]); 3] {
    use TrioAlgebra::{G, I, W};
    [
        (bent_wire(trio, G, W), [2, 1, 0]),
        (bent_wire(trio, G, I), [1, 0, 2]),
        (bent_wire(trio, W, I), [2, 0, 1]),
    ]
}

/// A diagram evaluating exactly to the permutation matrix of `p`
/// (`M[p(i)][i] = 1`), built from the fewest bent-wire primitives.
pub fn permutation_diagram(p: &Permutation, trio: &Trio) -> Result<Diagram> {
    if p.len() != 3 {
        return Err(Error::DimensionMismatch(3, p.len()));
    }
    let prims = primitives(trio);
    let target: [usize; 3] = [p.apply(0), p.apply(1), p.apply(2)];
    // Breadth-first over words in the primitives; S₃ is reached within three steps.
    let mut seen: Vec<([usize; 3], Vec<usize>)> = vec![([0, 1, 2], Vec::new())];
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    let word = loop {
        let k = queue.pop_front().expect("primitives generate S3");
        let (map, word) = seen[k].clone();
        if map == target {
            break word;
        }
        for (j, (_, prim)) in prims.iter().enumerate() {
            let next = [prim[map[0]], prim[map[1]], prim[map[2]]];
            if seen.iter().all(|(m, _)| *m != next) {
                let mut w = word.clone();
                w.push(j);
                seen.push((next, w));
                queue.push_back(seen.len() - 1);
            }
        }
    };
    word.iter().try_fold(Diagram::identity(&[3]), |acc, &j| acc.then(&prims[j].0))
}

/// Upper unipotent `[[1,u0,u1],[0,1,u2],[0,0,1]]`.
fn upper_unipotent(trio: &Trio, u0: Scalar, u1: Scalar, u2: Scalar) -> Result<Diagram> {
    if u0 == ZERO && u1 == ZERO && u2 == ZERO {
        return Ok(Diagram::identity(&[3]));
    }
    if u0.norm() < 0.5 || u2.norm() < 0.5 {
        // U = Ua·Ub with Ub = (a′, 0, c′), a′, c′ = ±1, leaving |a|, |c| ≥ 1 in Ua.
        let a2 = if u0.re >= 0.0 { -ONE } else { ONE };
        let c2 = if u2.re >= 0.0 { -ONE } else { ONE };
        let (a, c) = (u0 - a2, u2 - c2);
        let first = toeplitz_factor(trio, a2, ZERO, c2)?;
        let second = toeplitz_factor(trio, a, u1 - a * c2, c)?;
        return first.then(&second);
    }
    toeplitz_factor(trio, u0, u1, u2)
}

/// `diag(p) · A_W(v) · diag(1/p)` with `p = (u0·u2, u2, 1)`, `v = (u1/(u0·u2), 1, 1)`.
fn toeplitz_factor(trio: &Trio, u0: Scalar, u1: Scalar, u2: Scalar) -> Result<Diagram> {
    let p = [u0 * u2, u2, ONE];
    let inv = Tensor::vector(&p.map(|x| ONE / x))?;
    let v = Tensor::vector(&[u1 / (u0 * u2), ONE, ONE])?;
    vector_mult_map(trio, TrioAlgebra::G, &inv)?
        .then(&vector_mult_map(trio, TrioAlgebra::W, &v)?)?
        .then(&vector_mult_map(trio, TrioAlgebra::G, &Tensor::vector(&p)?)?)
}

fn is_diagonal(f: &Tensor) -> bool {
    (0..3).all(|i| (0..3).all(|j| i == j || f.get(&[i, j]) == ZERO))
}

/// Unchecked realization of `P·L·D·U·P′`, read in flow order `P′, U, D, L, P`.
fn factors_diagram(trio: &Trio, f: &LduFactors) -> Result<Diagram> {
    let flip = permutation_diagram(&Permutation::new(vec![2, 1, 0])?, trio)?;
    let upper = upper_unipotent(trio, f.u0(), f.u1(), f.u2())?;
    // L = J·(J·L·J)·J with J·L·J upper unipotent.
    let lower_core = upper_unipotent(trio, f.l0(), f.l1(), f.l2())?;
    let lower = if f.l0() == ZERO && f.l1() == ZERO && f.l2() == ZERO {
        lower_core
    } else {
        flip.then(&lower_core)?.then(&flip)?
    };
    let d = vector_mult_map(trio, TrioAlgebra::G, &Tensor::vector(&f.d)?)?;
    permutation_diagram(&f.p_prime, trio)?
        .then(&upper)?
        .then(&d)?
        .then(&lower)?
        .then(&permutation_diagram(&f.p, trio)?)
}

/// Unchecked diagram proportional to `f`; `singular` admits rank-deficient input.
pub(crate) fn matrix_diagram(trio: &Trio, f: &Tensor, singular: bool, tol: &ToleranceConfig) -> Result<Diagram> {
    if f.shape() != [3, 3] {
        return Err(Error::ShapeMismatch(vec![3, 3], f.shape().to_vec()));
    }
    if f.is_zero() {
        return Err(Error::ZeroVector);
    }
    if is_diagonal(f) {
        let d: Vec<Scalar> = (0..3).map(|i| f.get(&[i, i])).collect();
        if d.iter().all(|&x| x == d[0]) {
            return Ok(Diagram::identity(&[3]));
        }
        if singular || d.iter().all(|&x| x != ZERO) {
            return vector_mult_map(trio, TrioAlgebra::G, &Tensor::vector(&d)?);
        }
    }
    let scaled = f.scale(ONE / f.max_abs());
    let factors = if singular { ldu_decompose_singular(&scaled, tol)? } else { ldu_decompose(&scaled, tol)? };
    factors_diagram(trio, &factors)
}

/// Realizes an invertible 3×3 matrix `[out, in]` up to a nonzero scalar.
///
/// `F = P·L·D·U·P′` by complete pivoting; `D` is one G multiplication,
/// unipotent factors are diagonally conjugated W multiplications (split in
/// two when an off-diagonal entry is small), `L` is handled through
/// conjugation by the 0↔2 swap, and the permutations come from
/// [`permutation_diagram`].
pub fn matrix_to_diagram(f: &Tensor, trio: &Trio, tol: &ToleranceConfig) -> Result<SynthesisResult> {
    let d = matrix_diagram(trio, f, false, tol)?;
    let achieved = evaluate(&d).to_operator(1)?;
    SynthesisResult::check(d, f.clone(), achieved)
}
