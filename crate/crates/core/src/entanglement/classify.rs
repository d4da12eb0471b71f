use nalgebra::linalg::Schur;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::maximality::random_effect;
use super::{is_symmetric, maximality_witness, MaximalityVerdict, Witness};
use crate::algebra::{classify_algebra, derived_maps, induce_algebra, AlgebraClass, AxiomReport, Cfa, ClassLabel};
use crate::error::{Error, Result};
use crate::state::PureState;
use crate::tensor::{Scalar, Tensor, ToleranceConfig, ONE, ZERO};

/// Number of effects tried by [`classify_state`]. The first candidates come
/// from a fixed grid, the rest are seeded complex Gaussian samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub total: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { total: 320 }
    }
}

impl Budget {
    pub fn new(total: usize) -> Self {
        Self { total: total.max(1) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateLabel {
    ClassG,
    ClassW,
    ClassI,
    NonFrobenius,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NonFrobeniusReason {
    NotStronglyMaximal,
    NotSymmetric,
    /// Budget exhausted without an admissible effect. This is evidence,
    /// not a proof.
    NoValidAlgebraFound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateClass {
    pub label: StateLabel,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<NonFrobeniusReason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<Cfa>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra_class: Option<AlgebraClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axioms: Option<AxiomReport>,
    pub candidates_tried: usize,
}

impl StateClass {
    fn non_frobenius(reason: NonFrobeniusReason, candidates_tried: usize) -> Self {
        Self {
            label: StateLabel::NonFrobenius,
            reason: Some(reason),
            witness: None,
            algebra: None,
            algebra_class: None,
            axioms: None,
            candidates_tried,
        }
    }
}

/// Nonzero vectors over `{0, 1, -1, 2}³`, sparsest first.
fn grid_effects() -> Vec<Tensor> {
    const VALUES: [f64; 4] = [0.0, 1.0, -1.0, 2.0];
    let mut out: Vec<[usize; 3]> = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                if (a, b, c) != (0, 0, 0) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out.sort_by_key(|v| (v.iter().filter(|&&k| k != 0).count(), *v));
    out.into_iter()
        .map(|v| Tensor::from_real(vec![3], &v.map(|k| VALUES[k])).expect("finite"))
        .collect()
}

fn multiply(f: &Cfa, x: &Tensor, y: &Tensor) -> Tensor {
    let d = f.dim();
    let mu = f.mu();
    let data: Vec<Scalar> = (0..d)
        .map(|c| {
            let mut v = ZERO;
            for a in 0..d {
                for b in 0..d {
                    v += mu.get(&[c, a, b]) * x.data()[a] * y.data()[b];
                }
            }
            v
        })
        .collect();
    Tensor::new(vec![d], data).expect("finite")
}

/// Eigenvalues of a square matrix, from the diagonal of its complex Schur form.
/// The iteration only fails to converge on non-finite input.
fn eigenvalues(m: &Tensor) -> Result<Vec<Scalar>> {
    let (_, t) = Schur::try_new(m.to_nalgebra()?, 1e-14, 10_000)
        .ok_or(Error::NonFinite(0))?
        .unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// Rescales an effect so the induced bubble moves towards a projection.
///
/// The bubble of the algebra induced by `xi` is multiplication by
/// `omega = μ∘δ∘η`. Spectral projectors `e_j` of `omega` are built as
/// polynomials in `omega`, and `u` is the cube root of `omega` on its
/// invertible part (one Newton step past the semisimple root) and the unit
/// elsewhere. The returned effect is `b ↦ xi(u·b)`.
pub fn normalize_effect(s: &PureState, xi: &Tensor, tol: &ToleranceConfig) -> Result<Tensor> {
    let (f, _) = induce_algebra(s, xi, tol)?;
    Ok(normalize_step(&f)?.0)
}

/// One rescaling step; also returns the unit-relative size of the change.
fn normalize_step(f: &Cfa) -> Result<(Tensor, f64)> {
    let d = f.dim();
    let eta = f.eta();
    let maps = derived_maps(f);
    let omega = &maps.loop_unit;
    let lambda = eigenvalues(&maps.bubble)?;
    let big = lambda.iter().map(|l| l.norm()).fold(0.0, f64::max);
    // A nilpotent bubble has only rounding noise for eigenvalues.
    let zero = (1e-4 * big).max(1e-8 * maps.bubble.max_abs());

    let mut clusters: Vec<(Scalar, usize)> = Vec::new();
    for &l in &lambda {
        let l = if l.norm() <= zero { ZERO } else { l };
        match clusters.iter_mut().find(|(c, _)| (c - l).norm() <= 1e-6 * big) {
            Some(c) => c.1 += 1,
            None => clusters.push((l, 1)),
        }
    }

    let mut sum_e = Tensor::zeros(vec![d]);
    let mut u = Tensor::zeros(vec![d]);
    for (j, &(lj, _)) in clusters.iter().enumerate() {
        if lj == ZERO {
            continue;
        }
        let mut ej = eta.clone();
        for (k, &(lk, mk)) in clusters.iter().enumerate() {
            if k == j {
                continue;
            }
            let factor = omega.sub(&eta.scale(lk))?.scale(ONE / (lj - lk));
            for _ in 0..mk {
                ej = multiply(f, &ej, &factor);
            }
        }
        let cj = lj.powf(1.0 / 3.0);
        let nil = multiply(f, omega, &ej).sub(&ej.scale(lj))?;
        u = u.add(&ej.scale(cj))?.add(&nil.scale(cj / (lj * 3.0)))?;
        sum_e = sum_e.add(&ej)?;
    }
    u = u.add(&eta.sub(&sum_e)?)?;
    let change = u.max_abs_diff(eta)? / eta.max_abs().max(f64::MIN_POSITIVE);

    let eps = f.epsilon();
    let mut out = Tensor::zeros(vec![d]);
    let mu = f.mu();
    for b in 0..d {
        let mut v = ZERO;
        for c in 0..d {
            for a in 0..d {
                v += eps.data()[c] * mu.get(&[c, a, b]) * u.data()[a];
            }
        }
        out.set(&[b], v);
    }
    Ok((out, change))
}

const PASSES: usize = 6;

struct Found {
    xi: Tensor,
    phi: Tensor,
    algebra: Cfa,
    class: AlgebraClass,
    report: AxiomReport,
}

/// Induces, verifies and classifies from one candidate effect, rescaling it
/// while the algebra stays unclassified.
fn try_candidate(s: &PureState, start: Tensor, tol: &ToleranceConfig) -> Option<Found> {
    let mut xi = start;
    let mut raw_rank = None;
    for _ in 0..PASSES {
        let (mut alg, phi) = induce_algebra(s, &xi, tol).ok()?;
        let report = alg.verify(tol).ok()?;
        let class = classify_algebra(&alg, tol).ok()?;
        // Rescaling by an invertible element cannot change the bubble rank.
        if *raw_rank.get_or_insert(class.bubble_rank) != class.bubble_rank {
            return None;
        }
        if class.label != ClassLabel::Other {
            return Some(Found { xi, phi, algebra: alg, class, report });
        }
        let (next, change) = normalize_step(&alg).ok()?;
        if change <= tol.rtol {
            return None;
        }
        xi = next;
    }
    None
}

/// Sorts a tripartite qutrit state into the G, W or I class, or reports why
/// no Frobenius structure was found.
///
/// Steps: exact and sampled strong-maximality check, symmetry check, then a
/// search over effects on the middle party. Each candidate's induced algebra
/// must pass every axiom and classify as special, anti-special or
/// intermediate special. [`NonFrobeniusReason::NoValidAlgebraFound`] only
/// means the budget ran out.
pub fn classify_state(s: &PureState, budget: Budget, seed: u64, tol: &ToleranceConfig) -> Result<StateClass> {
    if s.parties() != 3 || s.dim() != 3 {
        return Err(Error::UnsupportedState { expected: 3, dim: 3, parties: s.parties(), actual_dim: s.dim() });
    }
    if let MaximalityVerdict::NotMaximal { .. } = maximality_witness(s, 32, seed, tol)? {
        return Ok(StateClass::non_frobenius(NonFrobeniusReason::NotStronglyMaximal, 0));
    }
    if !is_symmetric(s, tol) {
        return Ok(StateClass::non_frobenius(NonFrobeniusReason::NotSymmetric, 0));
    }
    let grid = grid_effects();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..budget.total {
        let xi = match grid.get(t) {
            Some(v) => v.clone(),
            None => random_effect(&mut rng, 3),
        };
        if let Some(found) = try_candidate(s, xi, tol) {
            let label = match found.class.label {
                ClassLabel::Special => StateLabel::ClassG,
                ClassLabel::AntiSpecial => StateLabel::ClassW,
                ClassLabel::IntermediateSpecial => StateLabel::ClassI,
                ClassLabel::Other => unreachable!("unclassified candidates are skipped"),
            };
            return Ok(StateClass {
                label,
                reason: None,
                witness: Some(Witness { party: 1, xi: found.xi, phi: found.phi }),
                algebra: Some(found.algebra),
                algebra_class: Some(found.class),
                axioms: Some(found.report),
                candidates_tried: t + 1,
            });
        }
    }
    Ok(StateClass::non_frobenius(NonFrobeniusReason::NoValidAlgebraFound, budget.total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{apply_local, catalog, LocalOperation};
    use crate::state::parse_ket;
    use crate::tensor::re;

    fn label(name: &str) -> StateClass {
        classify_state(&catalog(name, &[]).unwrap(), Budget::default(), 5, &ToleranceConfig::default()).unwrap()
    }

    #[test]
    fn grid_order() {
        let g = grid_effects();
        assert_eq!(g.len(), 63);
        assert_eq!(g[0], Tensor::from_real(vec![3], &[0., 0., 1.]).unwrap());
        assert_eq!(g[2], Tensor::from_real(vec![3], &[0., 0., 2.]).unwrap());
        assert!(g[62].data().iter().all(|x| *x == re(2.0)));
    }

    #[test]
    fn representatives() {
        assert_eq!(label("G").label, StateLabel::ClassG);
        assert_eq!(label("W").label, StateLabel::ClassW);
        assert_eq!(label("I").label, StateLabel::ClassI);
        let s2 = label("s2");
        assert_eq!((s2.label, s2.reason), (StateLabel::NonFrobenius, Some(NonFrobeniusReason::NoValidAlgebraFound)));
        assert_eq!(label("psi_5").reason, Some(NonFrobeniusReason::NotStronglyMaximal));
    }

    #[test]
    fn non_symmetric_gate() {
        // Maximal but not symmetric: relabel one party of G.
        let s = parse_ket("|000>+|121>+|212>", 3).unwrap();
        let c = classify_state(&s, Budget::default(), 0, &ToleranceConfig::default()).unwrap();
        assert_eq!(c.reason, Some(NonFrobeniusReason::NotSymmetric));
    }

    #[test]
    fn witness_belongs_to_state() {
        let tol = ToleranceConfig::default();
        for name in ["G", "W", "I"] {
            let s = catalog(name, &[]).unwrap();
            let c = classify_state(&s, Budget::default(), 3, &tol).unwrap();
            let w = c.witness.unwrap();
            assert!(w.residual(&s).unwrap() < 1e-9, "{name}");
            assert!(c.axioms.unwrap().all_passed());
        }
    }

    #[test]
    fn random_transforms_keep_labels() {
        let tol = ToleranceConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for (name, want) in [("G", StateLabel::ClassG), ("W", StateLabel::ClassW), ("I", StateLabel::ClassI)] {
            let s = catalog(name, &[]).unwrap();
            for k in 0..5 {
                let data: Vec<Scalar> = (0..9).map(|_| random_effect(&mut rng, 1).data()[0]).collect();
                let l = Tensor::new(vec![3, 3], data).unwrap();
                let moved = apply_local(&s, &LocalOperation::uniform(l, 3)).unwrap();
                let c = classify_state(&moved, Budget::default(), k, &tol).unwrap();
                assert_eq!(c.label, want, "{name} #{k}");
            }
        }
    }

    #[test]
    fn rejects_wrong_shape() {
        let s = catalog("GHZ", &[]).unwrap();
        assert!(matches!(
            classify_state(&s, Budget::default(), 0, &ToleranceConfig::default()),
            Err(Error::UnsupportedState { .. })
        ));
    }
}
