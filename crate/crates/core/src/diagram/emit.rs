use std::fmt::Write as _;

use super::{Diagram, Endpoint, Generator, WireId};
use crate::state::PureState;
use crate::tensor::Tensor;

fn vector_text(v: &Tensor) -> String {
    PureState::from_tensor(v.clone()).map_or_else(|_| "0|0>".to_string(), |s| s.to_ket_string())
}

fn atom_text(g: &Generator) -> String {
    match g {
        Generator::State(v) => format!("ket({})", vector_text(v)),
        Generator::Effect(v) => format!("bra({})", vector_text(v)),
        other => other.label(),
    }
}

/// Renders a diagram in the text language accepted by
/// [`parse_diagram`](super::parse_diagram).
///
/// Nodes are emitted one per layer in stored order; wires are brought next
/// to each other with layers of adjacent swaps. Matrix boxes are referenced
/// by label, so re-parsing needs the same boxes registered.
pub fn to_dsl(d: &Diagram) -> String {
    let mut slice: Vec<WireId> = d.inputs().to_vec();
    let mut layers: Vec<String> = Vec::new();
    for node in d.nodes() {
        if let Generator::Identity(_) = node.generator {
            let pos = slice.iter().position(|&w| w == node.inputs[0]).expect("input is live");
            slice[pos] = node.outputs[0];
            continue;
        }
        // Non-input wires left of the leftmost input stay left of the node.
        let at = match slice.iter().position(|w| node.inputs.contains(w)) {
            Some(first) => first,
            None => slice.len(),
        };
        let mut target: Vec<WireId> = slice.iter().copied().filter(|w| !node.inputs.contains(w)).collect();
        target.splice(at..at, node.inputs.iter().copied());
        permute_slice(d, &mut slice, &target, &mut layers);

        let mut items: Vec<String> = slice[..at].iter().map(|&w| format!("id({})", d.wire_dim(w))).collect();
        items.push(atom_text(&node.generator));
        let after = &slice[at + node.inputs.len()..];
        items.extend(after.iter().map(|&w| format!("id({})", d.wire_dim(w))));
        layers.push(items.join(" * "));
        slice.splice(at..at + node.inputs.len(), node.outputs.iter().copied());
    }
    permute_slice(d, &mut slice, d.outputs(), &mut layers);
    if layers.is_empty() {
        return slice.iter().map(|&w| format!("id({})", d.wire_dim(w))).collect::<Vec<_>>().join(" * ");
    }
    layers.join(" ;\n")
}

/// Odd-even transposition sort of `slice` into `target`, one layer per pass.
fn permute_slice(d: &Diagram, slice: &mut [WireId], target: &[WireId], layers: &mut Vec<String>) {
    let rank = |w: WireId| target.iter().position(|&t| t == w).expect("same wire set");
    let mut parity = 0;
    let mut idle = 0;
    while idle < 2 {
        let mut items = Vec::new();
        let mut swapped = false;
        let mut k = 0;
        while k < slice.len() {
            if k % 2 == parity && k + 1 < slice.len() && rank(slice[k]) > rank(slice[k + 1]) {
                items.push(format!("swap({},{})", d.wire_dim(slice[k]), d.wire_dim(slice[k + 1])));
                slice.swap(k, k + 1);
                swapped = true;
                k += 2;
            } else {
                items.push(format!("id({})", d.wire_dim(slice[k])));
                k += 1;
            }
        }
        if swapped {
            layers.push(items.join(" * "));
            idle = 0;
        } else {
            idle += 1;
        }
        parity ^= 1;
    }
}

/// Graphviz rendering with boundary inputs on top and outputs at the bottom.
pub fn to_dot(d: &Diagram) -> String {
    let mut s = String::from("digraph diagram {\n  rankdir=TB;\n  node [fontname=\"monospace\"];\n");
    for k in 0..d.inputs().len() {
        let _ = writeln!(s, "  in{k} [shape=point, xlabel=\"in {k}\"];");
    }
    for (i, n) in d.nodes().iter().enumerate() {
        let shape = match n.generator {
            Generator::State(_) | Generator::Effect(_) => "triangle",
            Generator::Box { .. } => "box",
            _ => "ellipse",
        };
        let label = atom_text(&n.generator).replace('"', "\\\"");
        let _ = writeln!(s, "  n{i} [shape={shape}, label=\"{label}\"];");
    }
    for k in 0..d.outputs().len() {
        let _ = writeln!(s, "  out{k} [shape=point, xlabel=\"out {k}\"];");
    }
    let (source, target) = d.endpoints();
    let name = |e: Endpoint, input_side: bool| match e {
        Endpoint::Boundary(k) if input_side => format!("in{k}"),
        Endpoint::Boundary(k) => format!("out{k}"),
        Endpoint::Port(i, _) => format!("n{i}"),
    };
    for w in 0..d.wire_count() {
        let _ = writeln!(
            s,
            "  {} -> {} [label=\"{}\"];",
            name(source[w], true),
            name(target[w], false),
            d.wire_dim(w)
        );
    }
    if !d.inputs().is_empty() {
        let ids: Vec<String> = (0..d.inputs().len()).map(|k| format!("in{k}")).collect();
        let _ = writeln!(s, "  {{ rank=source; {}; }}", ids.join("; "));
    }
    if !d.outputs().is_empty() {
        let ids: Vec<String> = (0..d.outputs().len()).map(|k| format!("out{k}")).collect();
        let _ = writeln!(s, "  {{ rank=sink; {}; }}", ids.join("; "));
    }
    s.push_str("}\n");
    s
}
