//! String diagrams over algebra generators, states, effects and matrix boxes.
//!
//! A [`Diagram`] is a DAG: every wire has exactly one source (a boundary
//! input or a node output port) and exactly one target (a node input port or
//! a boundary output). Nodes are stored in topological order.

mod emit;
mod eval;
mod parse;
mod spider;

pub use emit::{to_dot, to_dsl};
pub use eval::evaluate;
pub use parse::{parse_diagram, AlgebraRegistry};
pub use spider::{
    normalize_fgraph, spider_normal_form, spider_signature, ComponentSignature, SpiderSignature,
};

pub use crate::state::parse_ket;

use std::fmt;
use std::sync::Arc;

use crate::algebra::Cfa;
use crate::error::{Error, Result};
use crate::tensor::Tensor;

pub type WireId = usize;

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Mul(Arc<Cfa>),
    Unit(Arc<Cfa>),
    Comul(Arc<Cfa>),
    Counit(Arc<Cfa>),
    Identity(usize),
    Swap(usize, usize),
    /// Single-wire state `|v>`.
    State(Tensor),
    /// Single-wire effect `<v|`, stored without conjugation.
    Effect(Tensor),
    /// Matrix box `[out, in]`.
    Box { label: String, matrix: Tensor },
}

impl Generator {
    pub fn input_dims(&self) -> Vec<usize> {
        match self {
            Generator::Mul(a) => vec![a.dim(), a.dim()],
            Generator::Unit(_) | Generator::State(_) => vec![],
            Generator::Comul(a) | Generator::Counit(a) => vec![a.dim()],
            Generator::Identity(d) => vec![*d],
            Generator::Swap(x, y) => vec![*x, *y],
            Generator::Effect(v) => vec![v.shape()[0]],
            Generator::Box { matrix, .. } => vec![matrix.shape()[1]],
        }
    }

    pub fn output_dims(&self) -> Vec<usize> {
        match self {
            Generator::Mul(a) | Generator::Unit(a) => vec![a.dim()],
            Generator::Comul(a) => vec![a.dim(), a.dim()],
            Generator::Counit(_) | Generator::Effect(_) => vec![],
            Generator::Identity(d) => vec![*d],
            Generator::Swap(x, y) => vec![*y, *x],
            Generator::State(v) => vec![v.shape()[0]],
            Generator::Box { matrix, .. } => vec![matrix.shape()[0]],
        }
    }

    /// Algebra this generator belongs to, if any.
    pub fn algebra(&self) -> Option<&Arc<Cfa>> {
        match self {
            Generator::Mul(a) | Generator::Unit(a) | Generator::Comul(a) | Generator::Counit(a) => Some(a),
            _ => None,
        }
    }

    /// Identity and swap nodes carry no tensor content beyond wiring.
    pub fn is_wiring(&self) -> bool {
        matches!(self, Generator::Identity(_) | Generator::Swap(..))
    }

    /// Node tensor with indices `[inputs.., outputs..]`.
    pub fn tensor(&self) -> Tensor {
        let t = match self {
            Generator::Mul(a) => a.mu().permute(&[1, 2, 0]),
            Generator::Comul(a) => a.delta().permute(&[2, 0, 1]),
            Generator::Unit(a) => Ok(a.eta().clone()),
            Generator::Counit(a) => Ok(a.epsilon().clone()),
            Generator::Identity(d) => Ok(Tensor::identity(*d)),
            Generator::Swap(x, y) => {
                let id_x = Tensor::identity(*x);
                let id_y = Tensor::identity(*y);
                // [x_in, x_out, y_in, y_out] -> [x_in, y_in, y_out, x_out]
                id_x.outer(&id_y).permute(&[0, 2, 3, 1])
            }
            Generator::State(v) | Generator::Effect(v) => Ok(v.clone()),
            Generator::Box { matrix, .. } => matrix.transpose(),
        };
        t.expect("generator shapes are validated on construction")
    }

    pub fn label(&self) -> String {
        match self {
            Generator::Mul(a) => format!("mu[{}]", a.name()),
            Generator::Unit(a) => format!("eta[{}]", a.name()),
            Generator::Comul(a) => format!("delta[{}]", a.name()),
            Generator::Counit(a) => format!("eps[{}]", a.name()),
            Generator::Identity(d) => format!("id({d})"),
            Generator::Swap(x, y) => format!("swap({x},{y})"),
            Generator::State(_) => "ket".into(),
            Generator::Effect(_) => "bra".into(),
            Generator::Box { label, .. } => format!("box({label})"),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Generator::State(v) | Generator::Effect(v) if v.order() != 1 => {
                Err(Error::ShapeMismatch(vec![v.len()], v.shape().to_vec()))
            }
            Generator::Box { matrix, .. } => matrix.matrix_dims().map(|_| ()),
            Generator::Identity(0) | Generator::Swap(0, _) | Generator::Swap(_, 0) => {
                Err(Error::ZeroDimension(self.input_dims()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub generator: Generator,
    pub inputs: Vec<WireId>,
    pub outputs: Vec<WireId>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Diagram {
    wires: Vec<usize>,
    nodes: Vec<Node>,
    inputs: Vec<WireId>,
    outputs: Vec<WireId>,
}

impl Diagram {
    /// No wires, no nodes: the monoidal unit.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Parallel bare wires.
    pub fn identity(dims: &[usize]) -> Self {
        let mut b = DiagramBuilder::new();
        let ws: Vec<WireId> = dims.iter().map(|&d| b.input(d)).collect();
        b.finish(&ws).expect("bare wires are well formed")
    }

    /// A single generator with its ports exposed in order.
    pub fn generator(g: Generator) -> Result<Self> {
        let mut b = DiagramBuilder::new();
        let ins: Vec<WireId> = g.input_dims().into_iter().map(|d| b.input(d)).collect();
        let outs = b.node(g, &ins)?;
        b.finish(&outs)
    }

    pub fn wire_dim(&self, w: WireId) -> usize {
        self.wires[w]
    }

    pub fn wire_count(&self) -> usize {
        self.wires.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn inputs(&self) -> &[WireId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[WireId] {
        &self.outputs
    }

    pub fn input_dims(&self) -> Vec<usize> {
        self.inputs.iter().map(|&w| self.wires[w]).collect()
    }

    pub fn output_dims(&self) -> Vec<usize> {
        self.outputs.iter().map(|&w| self.wires[w]).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.inputs.is_empty() && self.outputs.is_empty()
    }

    /// Sequential composition: `self` first, its outputs feeding `next`.
    pub fn then(&self, next: &Diagram) -> Result<Diagram> {
        if self.output_dims() != next.input_dims() {
            return Err(Error::PortMismatch { left: self.output_dims(), right: next.input_dims() });
        }
        let mut b = DiagramBuilder::from_diagram_open(self);
        let outs = b.embed(next, &self.outputs)?;
        b.finish(&outs)
    }

    /// Parallel composition: `self` on the left, `other` on the right.
    pub fn beside(&self, other: &Diagram) -> Diagram {
        let mut b = DiagramBuilder::new();
        let left_in: Vec<WireId> = self.input_dims().into_iter().map(|d| b.input(d)).collect();
        let right_in: Vec<WireId> = other.input_dims().into_iter().map(|d| b.input(d)).collect();
        let mut outs = b.embed(self, &left_in).expect("fresh wires match");
        outs.extend(b.embed(other, &right_in).expect("fresh wires match"));
        b.finish(&outs).expect("disjoint union is well formed")
    }

    /// Where each wire comes from and goes to.
    pub(crate) fn endpoints(&self) -> (Vec<Endpoint>, Vec<Endpoint>) {
        let mut source = vec![Endpoint::Boundary(usize::MAX); self.wires.len()];
        let mut target = vec![Endpoint::Boundary(usize::MAX); self.wires.len()];
        for (k, &w) in self.inputs.iter().enumerate() {
            source[w] = Endpoint::Boundary(k);
        }
        for (k, &w) in self.outputs.iter().enumerate() {
            target[w] = Endpoint::Boundary(k);
        }
        for (i, n) in self.nodes.iter().enumerate() {
            for (p, &w) in n.inputs.iter().enumerate() {
                target[w] = Endpoint::Port(i, p);
            }
            for (p, &w) in n.outputs.iter().enumerate() {
                source[w] = Endpoint::Port(i, p);
            }
        }
        (source, target)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Endpoint {
    Boundary(usize),
    Port(usize, usize),
}

/// Incremental, validated construction of a [`Diagram`].
///
/// Wires are produced by [`input`](Self::input) or node outputs and must be
/// consumed exactly once, by a node or by [`finish`](Self::finish).
#[derive(Debug, Default)]
pub struct DiagramBuilder {
    d: Diagram,
    open: Vec<bool>,
}

impl DiagramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder holding all of `d` with its outputs still open.
    fn from_diagram_open(d: &Diagram) -> Self {
        let mut open = vec![false; d.wires.len()];
        for &w in &d.outputs {
            open[w] = true;
        }
        let mut d = d.clone();
        d.outputs.clear();
        Self { d, open }
    }

    fn new_wire(&mut self, dim: usize) -> WireId {
        self.d.wires.push(dim);
        self.open.push(true);
        self.d.wires.len() - 1
    }

    pub fn input(&mut self, dim: usize) -> WireId {
        let w = self.new_wire(dim);
        self.d.inputs.push(w);
        w
    }

    pub fn dim(&self, w: WireId) -> usize {
        self.d.wires[w]
    }

    fn consume(&mut self, wires: &[WireId]) -> Result<()> {
        for (k, &w) in wires.iter().enumerate() {
            if w >= self.open.len() || !self.open[w] || wires[..k].contains(&w) {
                return Err(Error::WireReuse(w));
            }
        }
        for &w in wires {
            self.open[w] = false;
        }
        Ok(())
    }

    /// Appends a node fed by `inputs` and returns its output wires.
    pub fn node(&mut self, g: Generator, inputs: &[WireId]) -> Result<Vec<WireId>> {
        g.validate()?;
        let dims = g.input_dims();
        if dims.len() != inputs.len() {
            return Err(Error::ArityMismatch { expected: dims.len(), actual: inputs.len() });
        }
        for (&w, &d) in inputs.iter().zip(&dims) {
            if w < self.d.wires.len() && self.d.wires[w] != d {
                return Err(Error::DimensionMismatch(d, self.d.wires[w]));
            }
        }
        self.consume(inputs)?;
        let outputs: Vec<WireId> = g.output_dims().into_iter().map(|d| self.new_wire(d)).collect();
        self.d.nodes.push(Node { generator: g, inputs: inputs.to_vec(), outputs: outputs.clone() });
        Ok(outputs)
    }

    /// Convenience for single-output nodes.
    pub fn node1(&mut self, g: Generator, inputs: &[WireId]) -> Result<WireId> {
        let outs = self.node(g, inputs)?;
        match outs[..] {
            [w] => Ok(w),
            _ => Err(Error::ArityMismatch { expected: 1, actual: outs.len() }),
        }
    }

    /// Copies `sub` into this builder with its inputs attached to `inputs`;
    /// returns the wires carrying `sub`'s outputs.
    pub fn embed(&mut self, sub: &Diagram, inputs: &[WireId]) -> Result<Vec<WireId>> {
        if sub.inputs.len() != inputs.len() {
            return Err(Error::ArityMismatch { expected: sub.inputs.len(), actual: inputs.len() });
        }
        for (&w, &sw) in inputs.iter().zip(&sub.inputs) {
            if w < self.d.wires.len() && self.d.wires[w] != sub.wires[sw] {
                return Err(Error::PortMismatch { left: vec![self.d.wires[w]], right: vec![sub.wires[sw]] });
            }
        }
        self.consume(inputs)?;
        let mut map: Vec<Option<WireId>> = vec![None; sub.wires.len()];
        for (&w, &sw) in inputs.iter().zip(&sub.inputs) {
            map[sw] = Some(w);
        }
        for n in &sub.nodes {
            let ins: Vec<WireId> = n.inputs.iter().map(|&w| map[w].expect("topological order")).collect();
            let outs: Vec<WireId> = n.outputs.iter().map(|&w| self.new_wire(sub.wires[w])).collect();
            // Wires internal to `sub` are consumed there; only its outputs stay open.
            for &w in &outs {
                self.open[w] = false;
            }
            for (&sw, &w) in n.outputs.iter().zip(&outs) {
                map[sw] = Some(w);
            }
            self.d.nodes.push(Node { generator: n.generator.clone(), inputs: ins, outputs: outs });
        }
        let outs: Vec<WireId> = sub.outputs.iter().map(|&w| map[w].expect("outputs are produced")).collect();
        for &w in &outs {
            self.open[w] = true;
        }
        Ok(outs)
    }

    /// Closes the diagram; every open wire must appear in `outputs` exactly once.
    pub fn finish(mut self, outputs: &[WireId]) -> Result<Diagram> {
        self.consume(outputs)?;
        if let Some(w) = self.open.iter().position(|&o| o) {
            return Err(Error::DanglingWire(w));
        }
        self.d.outputs = outputs.to_vec();
        Ok(self.d)
    }
}
