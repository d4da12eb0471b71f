use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Diagram, DiagramBuilder, Endpoint, Generator, WireId};
use crate::algebra::Cfa;
use crate::error::{Error, Result};

/// Inputs, outputs and loops of one connected component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSignature {
    pub m: usize,
    pub n: usize,
    pub loops: usize,
    /// Boundary input positions belonging to this component.
    pub inputs: Vec<usize>,
    /// Boundary output positions belonging to this component.
    pub outputs: Vec<usize>,
    /// Indices of the non-wiring nodes in this component.
    #[serde(skip)]
    pub nodes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpiderSignature {
    pub m: usize,
    pub n: usize,
    pub loops: usize,
    pub components: Vec<ComponentSignature>,
}

/// A wire after fusing through identity and swap nodes.
struct Strand {
    from: Endpoint,
    to: Endpoint,
}

fn strands(d: &Diagram) -> Vec<Strand> {
    let (source, target) = d.endpoints();
    let nodes = d.nodes();
    let is_wiring = |e: Endpoint| matches!(e, Endpoint::Port(i, _) if nodes[i].generator.is_wiring());
    let mut out = Vec::new();
    for w in 0..d.wire_count() {
        if is_wiring(source[w]) {
            continue;
        }
        let mut cur: WireId = w;
        while let Endpoint::Port(i, p) = target[cur] {
            let node = &nodes[i];
            match node.generator {
                Generator::Identity(_) => cur = node.outputs[0],
                Generator::Swap(..) => cur = node.outputs[1 - p],
                _ => break,
            }
        }
        out.push(Strand { from: source[w], to: target[cur] });
    }
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Per-component `(m, n, loops)` with `loops = E - V + 1`.
///
/// Identity and swap nodes are elided and their wires fused before counting;
/// `E` counts strands between two nodes and `V` counts the remaining nodes.
/// Components are ordered by their first boundary input, then first boundary
/// output, then first node.
pub fn spider_signature(d: &Diagram) -> SpiderSignature {
    let nodes = d.nodes();
    let n_nodes = nodes.len();
    let strands = strands(d);
    // Vertices: nodes, then one vertex per bare strand.
    let bare: Vec<usize> = strands
        .iter()
        .enumerate()
        .filter(|(_, s)| matches!((s.from, s.to), (Endpoint::Boundary(_), Endpoint::Boundary(_))))
        .map(|(k, _)| k)
        .collect();
    let mut uf = UnionFind((0..n_nodes + bare.len()).collect());
    for s in &strands {
        if let (Endpoint::Port(i, _), Endpoint::Port(j, _)) = (s.from, s.to) {
            uf.union(i, j);
        }
    }

    #[derive(Default)]
    struct Acc {
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        nodes: Vec<usize>,
        bare: usize,
        edges: usize,
    }
    let mut acc: std::collections::BTreeMap<usize, Acc> = Default::default();
    for (i, node) in nodes.iter().enumerate() {
        if !node.generator.is_wiring() {
            let r = uf.find(i);
            acc.entry(r).or_default().nodes.push(i);
        }
    }
    for (k, s) in strands.iter().enumerate() {
        match (s.from, s.to) {
            (Endpoint::Port(i, _), Endpoint::Port(_, _)) => acc.entry(uf.find(i)).or_default().edges += 1,
            (Endpoint::Boundary(a), Endpoint::Port(j, _)) => acc.entry(uf.find(j)).or_default().inputs.push(a),
            (Endpoint::Port(i, _), Endpoint::Boundary(b)) => acc.entry(uf.find(i)).or_default().outputs.push(b),
            (Endpoint::Boundary(a), Endpoint::Boundary(b)) => {
                let v = n_nodes + bare.iter().position(|&x| x == k).expect("bare strand indexed");
                let e = acc.entry(uf.find(v)).or_default();
                e.inputs.push(a);
                e.outputs.push(b);
                e.bare += 1;
            }
        }
    }

    let mut components: Vec<ComponentSignature> = acc
        .into_values()
        .map(|mut a| {
            a.inputs.sort_unstable();
            a.outputs.sort_unstable();
            let loops = (a.edges + 1).saturating_sub(a.nodes.len() + a.bare);
            ComponentSignature {
                m: a.inputs.len(),
                n: a.outputs.len(),
                loops,
                inputs: a.inputs,
                outputs: a.outputs,
                nodes: a.nodes,
            }
        })
        .collect();
    components.sort_by_key(|c| {
        (
            c.inputs.first().copied().unwrap_or(usize::MAX),
            c.outputs.first().copied().unwrap_or(usize::MAX),
            c.nodes.first().copied().unwrap_or(usize::MAX),
        )
    });
    SpiderSignature {
        m: d.inputs().len(),
        n: d.outputs().len(),
        loops: components.iter().map(|c| c.loops).sum(),
        components,
    }
}

/// Canonical connected F-graph with `m` inputs, `n` outputs and `loops` loops:
/// a left-combed μ tree (or η), then `loops` bubbles, then a left-combed δ
/// tree (or ε).
pub fn spider_normal_form(m: usize, n: usize, loops: usize, algebra: &Arc<Cfa>) -> Diagram {
    let mut b = DiagramBuilder::new();
    let ins: Vec<WireId> = (0..m).map(|_| b.input(algebra.dim())).collect();
    let outs = build_spider(&mut b, &ins, n, loops, algebra).expect("spider wiring is well formed");
    b.finish(&outs).expect("spider wiring is well formed")
}

fn build_spider(
    b: &mut DiagramBuilder,
    ins: &[WireId],
    n: usize,
    loops: usize,
    a: &Arc<Cfa>,
) -> Result<Vec<WireId>> {
    if ins.len() == 1 && n == 1 && loops == 0 {
        return Ok(ins.to_vec());
    }
    let mut w = match ins.first() {
        Some(&w) => w,
        None => b.node1(Generator::Unit(a.clone()), &[])?,
    };
    for &x in ins.iter().skip(1) {
        w = b.node1(Generator::Mul(a.clone()), &[w, x])?;
    }
    for _ in 0..loops {
        let pair = b.node(Generator::Comul(a.clone()), &[w])?;
        w = b.node1(Generator::Mul(a.clone()), &pair)?;
    }
    if n == 0 {
        b.node(Generator::Counit(a.clone()), &[w])?;
        return Ok(Vec::new());
    }
    let mut outs = vec![0; n];
    for k in (1..n).rev() {
        let pair = b.node(Generator::Comul(a.clone()), &[w])?;
        w = pair[0];
        outs[k] = pair[1];
    }
    outs[0] = w;
    Ok(outs)
}

/// Replaces every connected component of an F-graph over `algebra` by the
/// spider normal form of its signature, keeping boundary positions.
///
/// Fails with [`Error::ForeignNode`] on any node that is not a generator of
/// `algebra` or a wiring node of its dimension.
pub fn normalize_fgraph(d: &Diagram, algebra: &Arc<Cfa>) -> Result<Diagram> {
    for (i, node) in d.nodes().iter().enumerate() {
        let ok = match &node.generator {
            Generator::Identity(x) => *x == algebra.dim(),
            Generator::Swap(x, y) => *x == algebra.dim() && *y == algebra.dim(),
            g => g.algebra().is_some_and(|a| Arc::ptr_eq(a, algebra) || **a == **algebra),
        };
        if !ok {
            return Err(Error::ForeignNode(i, algebra.name().to_string()));
        }
    }
    let sig = spider_signature(d);
    let mut b = DiagramBuilder::new();
    let ins: Vec<WireId> = d.input_dims().into_iter().map(|dim| b.input(dim)).collect();
    let mut outs: Vec<WireId> = vec![usize::MAX; d.outputs().len()];
    for c in &sig.components {
        let c_ins: Vec<WireId> = c.inputs.iter().map(|&k| ins[k]).collect();
        let produced = build_spider(&mut b, &c_ins, c.n, c.loops, algebra)?;
        for (&pos, w) in c.outputs.iter().zip(produced) {
            outs[pos] = w;
        }
    }
    b.finish(&outs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;
    use crate::diagram::evaluate;
    use crate::tensor::{Tensor, ToleranceConfig};

    fn alg(name: &str) -> Arc<Cfa> {
        Arc::new(builtin(name).unwrap())
    }

    fn single(s: &SpiderSignature) -> (usize, usize, usize) {
        assert_eq!(s.components.len(), 1);
        let c = &s.components[0];
        (c.m, c.n, c.loops)
    }

    #[test]
    fn basic_signatures() {
        let g = alg("G3");
        assert_eq!(single(&spider_signature(&Diagram::identity(&[3]))), (1, 1, 0));
        assert_eq!(single(&spider_signature(&spider_normal_form(0, 0, 1, &g))), (0, 0, 1));
        assert_eq!(single(&spider_signature(&spider_normal_form(1, 1, 1, &g))), (1, 1, 1));
        assert_eq!(single(&spider_signature(&spider_normal_form(3, 2, 2, &g))), (3, 2, 2));
        assert_eq!(spider_normal_form(2, 1, 0, &g).nodes().len(), 1);
        assert!(spider_signature(&Diagram::empty()).components.is_empty());
    }

    #[test]
    fn loop_unit_shape() {
        let d = spider_normal_form(0, 1, 1, &alg("W3"));
        let kinds: Vec<String> = d.nodes().iter().map(|n| n.generator.label()).collect();
        assert_eq!(kinds, ["eta[W3]", "delta[W3]", "mu[W3]"]);
    }

    #[test]
    fn swaps_and_identities_are_elided() {
        let g = alg("G3");
        let mut b = DiagramBuilder::new();
        let x = b.input(3);
        let pair = b.node(Generator::Comul(g.clone()), &[x]).unwrap();
        let crossed = b.node(Generator::Swap(3, 3), &pair).unwrap();
        let y = b.node1(Generator::Identity(3), &[crossed[0]]).unwrap();
        let z = b.node1(Generator::Mul(g.clone()), &[y, crossed[1]]).unwrap();
        let d = b.finish(&[z]).unwrap();
        assert_eq!(single(&spider_signature(&d)), (1, 1, 1));
        let nf = normalize_fgraph(&d, &g).unwrap();
        let tol = ToleranceConfig::default();
        assert!(evaluate(&nf).max_abs_diff(&evaluate(&d)).unwrap() <= tol.atol);
    }

    #[test]
    fn interleaved_components_keep_positions() {
        let w = alg("W3");
        let mu = Diagram::generator(Generator::Mul(w.clone())).unwrap();
        let id = Diagram::identity(&[3]);
        let cross = Diagram::generator(Generator::Swap(3, 3)).unwrap();
        // inputs 0 and 2 feed mu, input 1 is a bare wire.
        let d = id.beside(&cross).then(&mu.beside(&id)).unwrap();
        let s = spider_signature(&d);
        assert_eq!(s.components.len(), 2);
        assert_eq!(s.components[0].inputs, vec![0, 2]);
        assert_eq!(s.components[1].inputs, vec![1]);
        let nf = normalize_fgraph(&d, &w).unwrap();
        assert_eq!(evaluate(&nf), evaluate(&d));
    }

    #[test]
    fn foreign_nodes_rejected() {
        let g = alg("G3");
        let w = alg("W3");
        let d = Diagram::generator(Generator::Mul(w)).unwrap();
        assert_eq!(normalize_fgraph(&d, &g), Err(Error::ForeignNode(0, "G3".into())));
        let s = Diagram::generator(Generator::State(Tensor::basis(3, 0))).unwrap();
        assert!(matches!(normalize_fgraph(&s, &g), Err(Error::ForeignNode(0, _))));
    }

    #[test]
    fn bare_wire_unchanged() {
        let g = alg("G3");
        let d = Diagram::identity(&[3]);
        assert_eq!(normalize_fgraph(&d, &g).unwrap(), d);
    }
}
