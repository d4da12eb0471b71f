use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{parse_ket, PureState};
use crate::tensor::Tensor;

/// A named representative state. Parameterized entries add one product term
/// `|digit⟩⊗p⊗q` per entry of `products`, where `p` and `q` index `params`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub dim: usize,
    pub params: &'static [&'static str],
    pub kets: &'static [&'static str],
    pub products: &'static [(usize, usize, usize)],
}

impl CatalogEntry {
    /// The ket expression, with parameter slots written as `{name}`.
    pub fn expression(&self) -> String {
        let mut parts: Vec<String> = self.kets.iter().map(|k| format!("|{k}>")).collect();
        parts.extend(
            self.products
                .iter()
                .map(|&(digit, p, q)| format!("|{digit}{{{}}}{{{}}}>", self.params[p], self.params[q])),
        );
        parts.join("+")
    }

    pub fn instantiate(&self, params: &[Tensor]) -> Result<PureState> {
        if params.len() != self.params.len() {
            return Err(Error::MissingParameters {
                name: self.name.to_string(),
                expected: self.params.len(),
                actual: params.len(),
            });
        }
        for p in params {
            if p.shape() != [self.dim] {
                return Err(Error::ShapeMismatch(vec![self.dim], p.shape().to_vec()));
            }
        }
        let text: Vec<String> = self.kets.iter().map(|k| format!("|{k}>")).collect();
        let mut amps = if text.is_empty() {
            Tensor::zeros(vec![self.dim; 3])
        } else {
            parse_ket(&text.join("+"), self.dim)?.into_amplitudes()
        };
        for &(digit, p, q) in self.products {
            let term = Tensor::basis(self.dim, digit).outer(&params[p]).outer(&params[q]);
            amps = amps.add(&term)?;
        }
        PureState::new(self.dim, amps)
    }
}

const PHI2: &[&str] = &["phi", "phi'"];
const PI: &[&str] = &["phi", "phi'", "chi", "psi"];

macro_rules! entry {
    ($name:expr, [$($k:expr),*]) => {
        CatalogEntry { name: $name, dim: 3, params: &[], kets: &[$($k),*], products: &[] }
    };
    ($name:expr, $dim:expr, [$($k:expr),*]) => {
        CatalogEntry { name: $name, dim: $dim, params: &[], kets: &[$($k),*], products: &[] }
    };
}

static ENTRIES: &[CatalogEntry] = &[
    entry!("psi_0", ["000"]),
    entry!("psi_1", ["000", "011"]),
    entry!("psi_2", ["000", "011", "022"]),
    entry!("psi_3", ["000", "101"]),
    entry!("psi_4", ["000", "110"]),
    entry!("psi_5", ["000", "111"]),
    entry!("psi_6", ["000", "011", "101"]),
    entry!("psi_7", ["000", "011", "112"]),
    entry!("psi_8", ["000", "011", "120"]),
    entry!("psi_9", ["000", "101", "202"]),
    entry!("psi_10", ["000", "111", "202"]),
    entry!("psi_11", ["000", "111", "201"]),
    entry!("psi_12", ["000", "011", "101", "112"]),
    entry!("psi_13", ["000", "011", "112", "120"]),
    entry!("psi_14", ["000", "011", "120", "101"]),
    entry!("psi_15", ["000", "011", "120", "102"]),
    entry!("psi_16", ["000", "011", "022", "101"]),
    entry!("psi_17", ["000", "011", "022", "101", "112"]),
    entry!("psi_18", ["000", "011", "022", "112", "120"]),
    entry!("psi_19", ["000", "011", "022", "120", "101"]),
    entry!("psi_20", ["000", "011", "122"]),
    entry!("psi_21", ["000", "110", "220"]),
    entry!("psi_22", ["000", "111", "220"]),
    entry!("psi_23", ["000", "011", "101", "112", "210", "202"]),
    entry!("psi_24", ["000", "011", "120", "101", "221", "210"]),
    entry!("G", ["000", "111", "222"]),
    CatalogEntry { name: "pi", dim: 3, params: PI, kets: &["000", "011"], products: &[(1, 0, 1), (2, 2, 3)] },
    entry!("phi_0", ["000", "011", "022", "101", "202"]),
    entry!("phi_1", ["000", "011", "022", "110", "220"]),
    entry!("varphi_1", ["000", "011", "022", "101", "212"]),
    CatalogEntry { name: "phi_2", dim: 3, params: PHI2, kets: &["000", "011", "101", "112"], products: &[(2, 0, 1)] },
    CatalogEntry { name: "varphi_2", dim: 3, params: PHI2, kets: &["000", "011", "112", "120"], products: &[(2, 0, 1)] },
    CatalogEntry { name: "phi_3", dim: 3, params: PHI2, kets: &["000", "011", "120", "101"], products: &[(2, 0, 1)] },
    entry!("phi_4", ["000", "011", "101", "112", "202", "221"]),
    entry!("phi_5", ["000", "011", "101", "112", "221", "210"]),
    entry!("s_0", ["000", "011", "112", "120", "202", "221"]),
    entry!("phi_6", ["000", "011", "112", "120", "221", "210"]),
    entry!("phi_7", ["000", "011", "022", "101", "112", "202", "221"]),
    entry!("phi_8", ["000", "011", "022", "101", "112", "210", "202"]),
    entry!("s_1", ["000", "011", "022", "101", "112", "221", "210"]),
    entry!("w_0", ["000", "011", "022", "101", "112", "202"]),
    entry!("varphi_3", ["000", "011", "022", "101", "112", "220"]),
    entry!("phi_9", ["000", "011", "022", "101", "112", "221"]),
    entry!("GHZ", 2, ["000", "111"]),
    entry!("W2", 2, ["001", "010", "100"]),
    entry!("W", ["002", "011", "020", "101", "110", "200"]),
    entry!("s2", ["000", "012", "021", "102", "120", "201", "210"]),
    entry!("s3", ["012", "021", "102", "120", "201", "210"]),
    entry!("I", ["001", "010", "100", "222"]),
];

/// Every catalog entry, table rows first.
pub fn catalog_entries() -> &'static [CatalogEntry] {
    ENTRIES
}

/// Instantiates a catalog entry; parameterized entries take one
/// vector per slot, in the order of [`CatalogEntry::params`].
pub fn catalog(name: &str, params: &[Tensor]) -> Result<PureState> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownCatalogEntry(name.to_string()))?
        .instantiate(params)
}
