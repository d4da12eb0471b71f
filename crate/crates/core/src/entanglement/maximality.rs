use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::Witness;
use crate::error::{Error, Result};
use crate::state::PureState;
use crate::tensor::{numeric_rank, Scalar, Tensor, ToleranceConfig};

/// `K[x, y]`: the state with `xi` contracted on `party`, remaining parties in order.
pub fn party_contraction(s: &PureState, xi: &Tensor, party: usize) -> Result<Tensor> {
    let d = s.dim();
    if s.parties() != 3 {
        return Err(Error::UnsupportedState { expected: 3, dim: d, parties: s.parties(), actual_dim: d });
    }
    if party >= 3 {
        return Err(Error::IndexOutOfRange { index: party, order: 3 });
    }
    if xi.shape() != [d] {
        return Err(Error::ShapeMismatch(vec![d], xi.shape().to_vec()));
    }
    let m = s.matricize(party)?;
    // Row-vector xi times the party matricization, folded back to d × d.
    let k = crate::tensor::contract(xi, &m, &[(0, 0)])?;
    k.reshape(vec![d, d])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum MaximalityVerdict {
    /// One witness per party.
    Witnessed { witnesses: Vec<Witness> },
    /// `exact` is true when the verdict comes from a rank-deficient
    /// matricization rather than from exhausted sampling.
    NotMaximal { party: usize, rank: usize, exact: bool },
}

impl MaximalityVerdict {
    pub fn is_maximal(&self) -> bool {
        matches!(self, MaximalityVerdict::Witnessed { .. })
    }
}

pub(crate) fn random_effect(rng: &mut ChaCha8Rng, d: usize) -> Tensor {
    let data: Vec<Scalar> = (0..d)
        .map(|_| Scalar::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    Tensor::new(vec![d], data).expect("finite samples")
}

/// Searches for strong-maximality witnesses on each party of a tripartite state.
///
/// A party whose `d × d²` matricization has rank below `d` makes every
/// contraction singular, so that verdict is exact. Otherwise the all-ones
/// effect, then each basis effect, then `trials` seeded complex Gaussian
/// effects are tried; `det K(xi)` is a polynomial in `xi`, so a random sample
/// succeeds with probability one whenever any effect does.
pub fn maximality_witness(s: &PureState, trials: usize, seed: u64, tol: &ToleranceConfig) -> Result<MaximalityVerdict> {
    let d = s.dim();
    if s.parties() != 3 {
        return Err(Error::UnsupportedState { expected: 3, dim: d, parties: s.parties(), actual_dim: d });
    }
    for party in 0..3 {
        let rank = numeric_rank(&s.matricize(party)?, tol)?;
        if rank < d {
            return Ok(MaximalityVerdict::NotMaximal { party, rank, exact: true });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witnesses = Vec::with_capacity(3);
    for party in 0..3 {
        let mut candidates: Vec<Tensor> = vec![Tensor::from_real(vec![d], &vec![1.0; d])?];
        candidates.extend((0..d).map(|k| Tensor::basis(d, k)));
        let mut found = None;
        for t in 0..candidates.len() + trials {
            let xi = if t < candidates.len() { candidates[t].clone() } else { random_effect(&mut rng, d) };
            let k = party_contraction(s, &xi, party)?;
            if let Ok(phi) = k.inverse(tol) {
                found = Some(Witness { party, xi, phi });
                break;
            }
        }
        match found {
            Some(w) => witnesses.push(w),
            None => return Ok(MaximalityVerdict::NotMaximal { party, rank: d, exact: false }),
        }
    }
    Ok(MaximalityVerdict::Witnessed { witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::catalog;
    use crate::state::parse_ket;

    #[test]
    fn g_uses_all_ones() {
        let tol = ToleranceConfig::default();
        let g = catalog("G", &[]).unwrap();
        let MaximalityVerdict::Witnessed { witnesses } = maximality_witness(&g, 16, 1, &tol).unwrap() else {
            panic!("G is maximal")
        };
        for w in &witnesses {
            assert_eq!(w.xi, Tensor::from_real(vec![3], &[1.0; 3]).unwrap());
            assert_eq!(w.phi, Tensor::identity(3));
            assert!(w.residual(&g).unwrap() < 1e-12);
        }
    }

    #[test]
    fn product_and_table_rows() {
        let tol = ToleranceConfig::default();
        let v = maximality_witness(&parse_ket("|000>", 3).unwrap(), 16, 1, &tol).unwrap();
        assert_eq!(v, MaximalityVerdict::NotMaximal { party: 0, rank: 1, exact: true });
        let v = maximality_witness(&catalog("psi_17", &[]).unwrap(), 16, 1, &tol).unwrap();
        // First party (index 0) has matricization rank 2.
        assert_eq!(v, MaximalityVerdict::NotMaximal { party: 0, rank: 2, exact: true });
    }

    #[test]
    fn symmetric_non_frobenius_states_are_maximal() {
        let tol = ToleranceConfig::default();
        for name in ["s2", "s3", "W", "I"] {
            let s = catalog(name, &[]).unwrap();
            assert!(maximality_witness(&s, 32, 9, &tol).unwrap().is_maximal(), "{name}");
        }
    }

    #[test]
    fn rejects_non_tripartite() {
        let s = parse_ket("|00>", 3).unwrap();
        assert!(matches!(
            maximality_witness(&s, 1, 0, &ToleranceConfig::default()),
            Err(Error::UnsupportedState { .. })
        ));
    }
}
