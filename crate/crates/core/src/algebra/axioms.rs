use std::fmt;

use serde::{Deserialize, Serialize};

use super::Cfa;
use crate::tensor::{Scalar, Tensor, ToleranceConfig, ONE, ZERO};

/// The seven equation groups of a commutative Frobenius algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    Coassociativity,
    Counit,
    Associativity,
    Unit,
    Frobenius,
    Commutativity,
    Cocommutativity,
}

impl Law {
    pub const ALL: [Law; 7] = [
        Law::Coassociativity,
        Law::Counit,
        Law::Associativity,
        Law::Unit,
        Law::Frobenius,
        Law::Commutativity,
        Law::Cocommutativity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Coassociativity => "coassociativity",
            Law::Counit => "counit",
            Law::Associativity => "associativity",
            Law::Unit => "unit",
            Law::Frobenius => "frobenius",
            Law::Commutativity => "commutativity",
            Law::Cocommutativity => "cocommutativity",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawCheck {
    pub law: Law,
    /// Largest absolute entrywise difference between the two sides.
    pub residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub algebra: String,
    pub laws: Vec<LawCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.laws.iter().all(|l| l.passed)
    }

    pub fn worst_residual(&self) -> f64 {
        self.laws.iter().map(|l| l.residual).fold(0.0, f64::max)
    }

    pub fn get(&self, law: Law) -> &LawCheck {
        self.laws.iter().find(|l| l.law == law).expect("all seven laws are reported")
    }

    pub fn failed(&self) -> Vec<Law> {
        self.laws.iter().filter(|l| !l.passed).map(|l| l.law).collect()
    }
}

/// Accumulates the worst difference and the largest magnitude seen on
/// either side of one law.
#[derive(Default)]
struct Gap {
    residual: f64,
    scale: f64,
}

impl Gap {
    fn push(&mut self, lhs: Scalar, rhs: Scalar) {
        self.residual = self.residual.max((lhs - rhs).norm());
        self.scale = self.scale.max(lhs.norm()).max(rhs.norm());
    }

    fn merge(mut self, other: Gap) -> Gap {
        self.residual = self.residual.max(other.residual);
        self.scale = self.scale.max(other.scale);
        self
    }
}

/// Checks every law by direct index summation.
///
/// A law passes when its residual is within `atol + rtol * scale`, where
/// `scale` is the largest entry on either side.
pub fn check_axioms(f: &Cfa, tol: &ToleranceConfig) -> AxiomReport {
    let d = f.dim();
    let (mu, eta, delta, eps) = (f.mu(), f.eta(), f.delta(), f.epsilon());
    let m = |c: usize, a: usize, b: usize| mu.get(&[c, a, b]);
    let dl = |x: usize, y: usize, a: usize| delta.get(&[x, y, a]);
    let kron = |i: usize, j: usize| if i == j { ONE } else { ZERO };
    let sum = |g: &dyn Fn(usize) -> Scalar| (0..d).map(g).sum::<Scalar>();

    let mut coassoc = Gap::default();
    let mut assoc = Gap::default();
    for a in 0..d {
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    coassoc.push(sum(&|k| dl(k, z, a) * dl(x, y, k)), sum(&|k| dl(x, k, a) * dl(y, z, k)));
                    // Here (a, x, y) are the inputs and z the output.
                    assoc.push(sum(&|k| m(k, a, x) * m(z, k, y)), sum(&|k| m(k, x, y) * m(z, a, k)));
                }
            }
        }
    }

    let mut counit_l = Gap::default();
    let mut counit_r = Gap::default();
    let mut unit_l = Gap::default();
    let mut unit_r = Gap::default();
    let mut comm = Gap::default();
    let mut cocomm = Gap::default();
    for a in 0..d {
        for x in 0..d {
            counit_l.push(sum(&|k| eps.data()[k] * dl(k, x, a)), kron(x, a));
            counit_r.push(sum(&|k| eps.data()[k] * dl(x, k, a)), kron(x, a));
            unit_l.push(sum(&|k| eta.data()[k] * m(x, k, a)), kron(x, a));
            unit_r.push(sum(&|k| eta.data()[k] * m(x, a, k)), kron(x, a));
            for y in 0..d {
                comm.push(m(y, a, x), m(y, x, a));
                cocomm.push(dl(x, y, a), dl(y, x, a));
            }
        }
    }

    let mut frob = Gap::default();
    for a in 0..d {
        for b in 0..d {
            for x in 0..d {
                for y in 0..d {
                    let middle = sum(&|k| m(k, a, b) * dl(x, y, k));
                    let left = sum(&|k| dl(x, k, a) * m(y, k, b));
                    let right = sum(&|k| dl(k, y, b) * m(x, a, k));
                    frob.push(left, middle);
                    frob.push(right, middle);
                }
            }
        }
    }

    let gaps = [
        (Law::Coassociativity, coassoc),
        (Law::Counit, counit_l.merge(counit_r)),
        (Law::Associativity, assoc),
        (Law::Unit, unit_l.merge(unit_r)),
        (Law::Frobenius, frob),
        (Law::Commutativity, comm),
        (Law::Cocommutativity, cocomm),
    ];
    AxiomReport {
        algebra: f.name().to_string(),
        laws: gaps
            .into_iter()
            .map(|(law, g)| LawCheck { law, residual: g.residual, passed: tol.accepts(g.residual, g.scale) })
            .collect(),
    }
}

/// Entrywise `lhs - rhs` check helper shared with the classifier.
pub(crate) fn tensor_gap(lhs: &Tensor, rhs: &Tensor) -> (f64, f64) {
    let mut g = Gap::default();
    for (&l, &r) in lhs.data().iter().zip(rhs.data()) {
        g.push(l, r);
    }
    (g.residual, g.scale)
}
