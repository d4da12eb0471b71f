use std::collections::BTreeMap;
use std::sync::Arc;

use super::{Diagram, Generator};
use crate::algebra::{builtin, Cfa};
use crate::error::{Error, Result};
use crate::state::parse_ket;
use crate::tensor::Tensor;

/// Names available to the diagram parser.
#[derive(Clone, Debug)]
pub struct AlgebraRegistry {
    algebras: BTreeMap<String, Arc<Cfa>>,
    boxes: BTreeMap<String, Tensor>,
    /// Local dimension of `ket(..)` and `bra(..)` atoms.
    pub ket_dim: usize,
}

impl Default for AlgebraRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl AlgebraRegistry {
    pub fn empty() -> Self {
        Self { algebras: BTreeMap::new(), boxes: BTreeMap::new(), ket_dim: 3 }
    }

    /// Registers the built-in algebras under their names and aliases
    /// (`G`/`G3`, `W`/`W3`, `I`/`I3`, `GHZ`/`GHZ2`, `W2`).
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        for (names, canonical) in [
            (&["G", "G3"][..], "G3"),
            (&["W", "W3"][..], "W3"),
            (&["I", "I3"][..], "I3"),
            (&["GHZ", "GHZ2"][..], "GHZ2"),
            (&["W2"][..], "W2"),
        ] {
            let a = Arc::new(builtin(canonical).expect("built-in algebras verify"));
            for n in names {
                r.algebras.insert((*n).to_string(), a.clone());
            }
        }
        r
    }

    pub fn register_algebra(&mut self, name: impl Into<String>, algebra: Cfa) -> Arc<Cfa> {
        let a = Arc::new(algebra);
        self.algebras.insert(name.into(), a.clone());
        a
    }

    pub fn register_box(&mut self, name: impl Into<String>, matrix: Tensor) -> Result<()> {
        matrix.matrix_dims()?;
        self.boxes.insert(name.into(), matrix);
        Ok(())
    }

    pub fn algebra(&self, name: &str) -> Result<&Arc<Cfa>> {
        self.algebras.get(name).ok_or_else(|| Error::UnknownAlgebra(name.to_string()))
    }

    pub fn matrix_box(&self, name: &str) -> Result<&Tensor> {
        self.boxes.get(name).ok_or_else(|| Error::UnknownBox(name.to_string()))
    }

    pub fn algebra_names(&self) -> impl Iterator<Item = &str> {
        self.algebras.keys().map(String::as_str)
    }
}

/// Parses the diagram language.
///
/// ```text
/// term := seq
/// seq  := par (";" par)*
/// par  := atom ("*" atom)*
/// atom := "mu[A]" | "eta[A]" | "delta[A]" | "eps[A]" | "id(d)" | "swap(d,d)"
///       | "ket(expr)" | "bra(expr)" | "box(name)" | "(" term ")"
/// ```
///
/// `;` composes top to bottom, `*` places side by side. Blank text is the
/// empty diagram.
pub fn parse_diagram(text: &str, registry: &AlgebraRegistry) -> Result<Diagram> {
    let mut p = Parser { src: text, pos: 0, reg: registry };
    if p.peek().is_none() {
        return Ok(Diagram::empty());
    }
    let d = p.seq()?;
    if p.peek().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(d)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    reg: &'a AlgebraRegistry,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> Error {
        Error::Syntax { pos: self.pos, message: message.to_string() }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn peek(&mut self) -> Option<char> {
        let skipped = self.rest().len() - self.rest().trim_start().len();
        self.pos += skipped;
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn seq(&mut self) -> Result<Diagram> {
        let mut d = self.par()?;
        while self.eat(';') {
            let next = self.par()?;
            d = d.then(&next)?;
        }
        Ok(d)
    }

    fn par(&mut self) -> Result<Diagram> {
        let mut d = self.atom()?;
        while self.eat('*') {
            d = d.beside(&self.atom()?);
        }
        Ok(d)
    }

    fn ident(&mut self) -> &str {
        self.peek();
        let start = self.pos;
        let len = self.rest().find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(self.rest().len());
        self.pos += len;
        &self.src[start..start + len]
    }

    fn number(&mut self) -> Result<usize> {
        self.peek();
        let len = self.rest().find(|c: char| !c.is_ascii_digit()).unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.err("expected a dimension"));
        }
        let n: usize = self.rest()[..len].parse().map_err(|_| self.err("dimension out of range"))?;
        if n == 0 {
            return Err(self.err("dimension must be at least 1"));
        }
        self.pos += len;
        Ok(n)
    }

    /// Text up to the parenthesis matching one already consumed.
    fn balanced(&mut self) -> Result<&str> {
        let start = self.pos;
        let mut depth = 1;
        for (k, c) in self.rest().char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        self.pos = start + k + 1;
                        return Ok(&self.src[start..start + k]);
                    }
                }
                _ => {}
            }
        }
        Err(self.err("unclosed `(`"))
    }

    fn vector(&mut self) -> Result<Tensor> {
        let at = self.pos;
        let text = self.balanced()?.to_string();
        let s = parse_ket(&text, self.reg.ket_dim).map_err(|e| match e {
            Error::Syntax { pos, message } => Error::Syntax { pos: at + pos, message },
            other => other,
        })?;
        if s.parties() != 1 {
            return Err(Error::Syntax { pos: at, message: "ket(..) and bra(..) take single-wire kets".into() });
        }
        Ok(s.into_amplitudes())
    }

    fn atom(&mut self) -> Result<Diagram> {
        if self.eat('(') {
            let d = self.seq()?;
            self.expect(')')?;
            return Ok(d);
        }
        let at = self.pos;
        let name = self.ident().to_string();
        let g = match name.as_str() {
            "mu" | "eta" | "delta" | "eps" => {
                self.expect('[')?;
                let alg_name = self.ident().to_string();
                self.expect(']')?;
                let a = self.reg.algebra(&alg_name)?.clone();
                match name.as_str() {
                    "mu" => Generator::Mul(a),
                    "eta" => Generator::Unit(a),
                    "delta" => Generator::Comul(a),
                    _ => Generator::Counit(a),
                }
            }
            "id" => {
                self.expect('(')?;
                let d = self.number()?;
                self.expect(')')?;
                Generator::Identity(d)
            }
            "swap" => {
                self.expect('(')?;
                let x = self.number()?;
                self.expect(',')?;
                let y = self.number()?;
                self.expect(')')?;
                Generator::Swap(x, y)
            }
            "ket" | "bra" => {
                self.expect('(')?;
                let v = self.vector()?;
                if name == "ket" {
                    Generator::State(v)
                } else {
                    Generator::Effect(v)
                }
            }
            "box" => {
                self.expect('(')?;
                let label = self.ident().to_string();
                self.expect(')')?;
                let matrix = self.reg.matrix_box(&label)?.clone();
                Generator::Box { label, matrix }
            }
            "" => return Err(Error::Syntax { pos: at, message: "expected a generator".into() }),
            other => return Err(Error::Syntax { pos: at, message: format!("unknown generator `{other}`") }),
        };
        if let Generator::Identity(d) = g {
            return Ok(Diagram::identity(&[d]));
        }
        Diagram::generator(g)
    }
}
