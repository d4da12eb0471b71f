use std::fmt;

use serde::{Deserialize, Serialize};

use super::axioms::tensor_gap;
use super::Cfa;
use crate::error::Result;
use crate::tensor::{numeric_rank, Scalar, Tensor, ToleranceConfig};

/// Composites built from one loop of an algebra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedMaps {
    /// `μ∘δ` as an operator `[out, in]`.
    pub bubble: Tensor,
    /// `μ∘δ∘η`
    pub loop_unit: Tensor,
    /// `ε∘μ∘δ`
    pub loop_counit: Tensor,
    /// `ε∘μ∘δ∘η`
    pub circle: Scalar,
    /// `ε∘μ` as a bipartite effect `[a, b]`.
    pub cap: Tensor,
    /// `δ∘η` as a bipartite state `[x, y]`.
    pub cup: Tensor,
}

pub fn derived_maps(f: &Cfa) -> DerivedMaps {
    let d = f.dim();
    let (mu, eta, delta, eps) = (f.mu(), f.eta(), f.delta(), f.epsilon());
    let mut bubble = Tensor::zeros(vec![d, d]);
    let mut cap = Tensor::zeros(vec![d, d]);
    let mut cup = Tensor::zeros(vec![d, d]);
    for x in 0..d {
        for a in 0..d {
            let mut b = Scalar::default();
            for p in 0..d {
                for q in 0..d {
                    b += mu.get(&[x, p, q]) * delta.get(&[p, q, a]);
                }
            }
            bubble.set(&[x, a], b);
            cap.set(&[x, a], (0..d).map(|c| eps.data()[c] * mu.get(&[c, x, a])).sum());
            cup.set(&[x, a], (0..d).map(|c| delta.get(&[x, a, c]) * eta.data()[c]).sum());
        }
    }
    let loop_unit = bubble.apply(eta).expect("square bubble");
    let loop_counit = bubble.transpose().expect("square bubble").apply(eps).expect("square bubble");
    let circle = eps.data().iter().zip(loop_unit.data()).map(|(&e, &l)| e * l).sum();
    DerivedMaps { bubble, loop_unit, loop_counit, circle, cap, cup }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    Special,
    AntiSpecial,
    IntermediateSpecial,
    Other,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassLabel::Special => "Special",
            ClassLabel::AntiSpecial => "AntiSpecial",
            ClassLabel::IntermediateSpecial => "IntermediateSpecial",
            ClassLabel::Other => "Other",
        })
    }
}

/// Residuals of the three classifying identities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassEvidence {
    /// `|bubble - id|`
    pub special: f64,
    /// `|circle·bubble - loop_unit ⊗ loop_counit|`
    pub anti_special: f64,
    /// `|bubble³ - bubble²|`
    pub intermediate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraClass {
    pub label: ClassLabel,
    pub bubble_rank: usize,
    pub evidence: ClassEvidence,
}

/// Classifies a verified algebra by its bubble.
///
/// - Special: bubble equals the identity.
/// - AntiSpecial: bubble has rank 1 and `circle·bubble = loop_unit ⊗ loop_counit`.
/// - IntermediateSpecial: `1 < rank < d` and `bubble³ = bubble²`.
///
/// The last identity stands in for the intermediate-special laws, whose
/// diagrammatic form is not available; it holds for the I algebra.
pub fn classify_algebra(f: &Cfa, tol: &ToleranceConfig) -> Result<AlgebraClass> {
    f.require_verified()?;
    let d = f.dim();
    let maps = derived_maps(f);
    let b = &maps.bubble;
    let bubble_rank = numeric_rank(b, tol)?;

    let special = tensor_gap(b, &Tensor::identity(d));
    let lhs = b.scale(maps.circle);
    let rhs = maps.loop_unit.outer(&maps.loop_counit);
    let anti = tensor_gap(&lhs, &rhs);
    let b2 = b.matmul(b)?;
    let b3 = b2.matmul(b)?;
    let inter = tensor_gap(&b3, &b2);

    let label = if tol.accepts(special.0, special.1) {
        ClassLabel::Special
    } else if bubble_rank == 1 && tol.accepts(anti.0, anti.1) {
        ClassLabel::AntiSpecial
    } else if 1 < bubble_rank && bubble_rank < d && tol.accepts(inter.0, inter.1) {
        ClassLabel::IntermediateSpecial
    } else {
        ClassLabel::Other
    };
    Ok(AlgebraClass {
        label,
        bubble_rank,
        evidence: ClassEvidence { special: special.0, anti_special: anti.0, intermediate: inter.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;
    use crate::error::Error;
    use crate::tensor::re;

    #[test]
    fn builtin_labels() {
        let tol = ToleranceConfig::default();
        let expect = [
            ("GHZ2", ClassLabel::Special, 2),
            ("W2", ClassLabel::AntiSpecial, 1),
            ("G3", ClassLabel::Special, 3),
            ("W3", ClassLabel::AntiSpecial, 1),
            ("I3", ClassLabel::IntermediateSpecial, 2),
        ];
        for (name, label, rank) in expect {
            let c = classify_algebra(&builtin(name).unwrap(), &tol).unwrap();
            assert_eq!((c.label, c.bubble_rank), (label, rank), "{name}");
        }
    }

    #[test]
    fn w2_loop_values() {
        let m = derived_maps(&builtin("W2").unwrap());
        assert_eq!(m.circle, re(2.0));
        let expect = Tensor::from_real(vec![2, 2], &[0.0, 2.0, 0.0, 0.0]).unwrap();
        assert_eq!(m.bubble, expect);
        assert_eq!(m.loop_unit, Tensor::from_real(vec![2], &[2.0, 0.0]).unwrap());
        assert_eq!(m.loop_counit, Tensor::from_real(vec![2], &[0.0, 2.0]).unwrap());
    }

    #[test]
    fn bubbles_of_qutrit_algebras() {
        let w = derived_maps(&builtin("W3").unwrap()).bubble;
        assert_eq!(w, Tensor::from_real(vec![3, 3], &[0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap());
        let i = derived_maps(&builtin("I3").unwrap()).bubble;
        assert_eq!(i, Tensor::from_real(vec![3, 3], &[0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap());
    }

    #[test]
    fn anti_special_law_discriminates() {
        let tol = ToleranceConfig::default();
        for (name, holds) in [("W2", true), ("W3", true), ("G3", false), ("I3", false)] {
            let c = classify_algebra(&builtin(name).unwrap(), &tol).unwrap();
            if holds {
                assert_eq!(c.evidence.anti_special, 0.0, "{name}");
            } else {
                assert!(c.evidence.anti_special > 0.5, "{name}");
            }
        }
    }

    #[test]
    fn unverified_rejected() {
        let g = builtin("G3").unwrap();
        let raw = Cfa::new("raw", g.mu().clone(), g.eta().clone(), g.delta().clone(), g.epsilon().clone()).unwrap();
        assert_eq!(classify_algebra(&raw, &ToleranceConfig::default()), Err(Error::UnverifiedAlgebra("raw".into())));
    }
}
