use super::Cfa;
use crate::error::{Error, Result};
use crate::tensor::ToleranceConfig;

/// Canonical names of the built-in algebras.
pub const BUILTIN_NAMES: [&str; 5] = ["GHZ2", "W2", "G3", "W3", "I3"];

/// Built-in verified algebra by name. `G`, `W`, `I` and `GHZ` are accepted
/// as aliases of `G3`, `W3`, `I3` and `GHZ2`.
pub fn builtin(name: &str) -> Result<Cfa> {
    let f = match name {
        "GHZ2" | "GHZ" => ghz2(),
        "W2" => w2(),
        "G3" | "G" => g3(),
        "W3" | "W" => w3(),
        "I3" | "I" => i3(),
        _ => return Err(Error::UnknownAlgebra(name.to_string())),
    }?;
    f.verified(&ToleranceConfig::default())
}

fn ghz2() -> Result<Cfa> {
    Cfa::from_terms(
        "GHZ2",
        2,
        &[(0, 0, 0, 1.0), (1, 1, 1, 1.0)],
        &[1.0, 1.0],
        &[(0, 0, 0, 1.0), (1, 1, 1, 1.0)],
        &[1.0, 1.0],
    )
}

fn w2() -> Result<Cfa> {
    Cfa::from_terms(
        "W2",
        2,
        &[(0, 0, 1, 1.0), (0, 1, 0, 1.0), (1, 1, 1, 1.0)],
        &[0.0, 1.0],
        &[(0, 0, 0, 1.0), (0, 1, 1, 1.0), (1, 0, 1, 1.0)],
        &[1.0, 0.0],
    )
}

fn g3() -> Result<Cfa> {
    Cfa::from_terms(
        "G3",
        3,
        &[(0, 0, 0, 1.0), (1, 1, 1, 1.0), (2, 2, 2, 1.0)],
        &[1.0, 1.0, 1.0],
        &[(0, 0, 0, 1.0), (1, 1, 1, 1.0), (2, 2, 2, 1.0)],
        &[1.0, 1.0, 1.0],
    )
}

fn w3() -> Result<Cfa> {
    Cfa::from_terms(
        "W3",
        3,
        &[(0, 0, 2, 1.0), (0, 1, 1, 1.0), (0, 2, 0, 1.0), (1, 1, 2, 1.0), (1, 2, 1, 1.0), (2, 2, 2, 1.0)],
        &[0.0, 0.0, 1.0],
        &[(0, 0, 0, 1.0), (0, 1, 1, 1.0), (1, 0, 1, 1.0), (0, 2, 2, 1.0), (1, 1, 2, 1.0), (2, 0, 2, 1.0)],
        &[1.0, 0.0, 0.0],
    )
}

fn i3() -> Result<Cfa> {
    Cfa::from_terms(
        "I3",
        3,
        &[(0, 0, 1, 1.0), (0, 1, 0, 1.0), (1, 1, 1, 1.0), (2, 2, 2, 1.0)],
        &[0.0, 1.0, 1.0],
        &[(0, 0, 0, 1.0), (0, 1, 1, 1.0), (1, 0, 1, 1.0), (2, 2, 2, 1.0)],
        &[1.0, 0.0, 1.0],
    )
}
