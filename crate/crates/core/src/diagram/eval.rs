use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use super::Diagram;
use crate::tensor::{contract, Tensor, ONE};

/// A tensor whose indices are tagged with network labels.
struct Labelled {
    tensor: Tensor,
    labels: Vec<usize>,
}

/// Evaluates a diagram to a tensor with indices `[inputs.., outputs..]`.
///
/// Contraction is greedy: at each step the pair of tensors sharing a label
/// whose contraction has the fewest entries is merged, ties going to the
/// oldest pair. Components with no
/// shared labels are joined by outer products at the end. The empty diagram
/// evaluates to the scalar 1.
pub fn evaluate(d: &Diagram) -> Tensor {
    let mut parts: Vec<Labelled> = Vec::with_capacity(d.nodes().len() + 1);
    let mut next_label = d.wire_count();
    // A wire running straight from input to output needs its own identity.
    let mut input_labels: Vec<usize> = d.inputs().to_vec();
    for (k, &w) in d.inputs().iter().enumerate() {
        if d.outputs().contains(&w) {
            input_labels[k] = next_label;
            parts.push(Labelled { tensor: Tensor::identity(d.wire_dim(w)), labels: vec![next_label, w] });
            next_label += 1;
        }
    }
    for n in d.nodes() {
        let labels = n.inputs.iter().chain(&n.outputs).copied().collect();
        parts.push(Labelled { tensor: n.generator.tensor(), labels });
    }

    let result = contract_network(parts);
    let want: Vec<usize> = input_labels.iter().chain(d.outputs()).copied().collect();
    let axes: Vec<usize> = want
        .iter()
        .map(|l| result.labels.iter().position(|x| x == l).expect("boundary label survives contraction"))
        .collect();
    result.tensor.permute(&axes).expect("axes form a permutation")
}

fn contract_network(parts: Vec<Labelled>) -> Labelled {
    if parts.is_empty() {
        return Labelled { tensor: Tensor::scalar(ONE), labels: Vec::new() };
    }
    // Parts are addressed by creation id; merged parts become `None`.
    let mut slots: Vec<Option<Labelled>> = parts.into_iter().map(Some).collect();
    let mut owners: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, p) in slots.iter().enumerate() {
        for &l in &p.as_ref().expect("fresh").labels {
            owners.entry(l).or_default().push(i);
        }
    }
    let mut heap: BinaryHeap<Reverse<Candidate>> = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<Reverse<Candidate>>, slots: &[Option<Labelled>], i: usize, j: usize| {
        let (i, j) = (i.min(j), i.max(j));
        let cost = result_size(slots[i].as_ref().expect("live"), slots[j].as_ref().expect("live"));
        heap.push(Reverse(Candidate { cost, i, j }));
    };
    let mut pairs: Vec<(usize, usize)> = owners
        .values()
        .filter_map(|ids| match ids[..] {
            [i, j] if i != j => Some((i.min(j), i.max(j))),
            _ => None,
        })
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    for (i, j) in pairs {
        push(&mut heap, &slots, i, j);
    }
    while let Some(Reverse(c)) = heap.pop() {
        if slots[c.i].is_none() || slots[c.j].is_none() {
            continue;
        }
        let a = slots[c.i].take().expect("live");
        let b = slots[c.j].take().expect("live");
        let merged = merge(a, b);
        let id = slots.len();
        let mut neighbours: Vec<usize> = Vec::new();
        for l in &merged.labels {
            let ids = owners.get_mut(l).expect("label has owners");
            for o in ids.iter_mut() {
                if *o == c.i || *o == c.j {
                    *o = id;
                } else {
                    neighbours.push(*o);
                }
            }
        }
        slots.push(Some(merged));
        neighbours.sort_unstable();
        neighbours.dedup();
        for n in neighbours {
            push(&mut heap, &slots, n, id);
        }
    }
    let mut it = slots.into_iter().flatten();
    let first = it.next().expect("non-empty network");
    it.fold(first, |acc, p| {
        let mut labels = acc.labels;
        labels.extend(p.labels);
        Labelled { tensor: acc.tensor.outer(&p.tensor), labels }
    })
}

/// A pending pairwise contraction, ordered by result size then ids.
#[derive(Clone, Copy, Debug)]
struct Candidate {
    cost: f64,
    i: usize,
    j: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cost.total_cmp(&other.cost).then(self.i.cmp(&other.i)).then(self.j.cmp(&other.j))
    }
}

fn result_size(a: &Labelled, b: &Labelled) -> f64 {
    let free = |x: &Labelled, y: &Labelled| -> f64 {
        x.labels
            .iter()
            .zip(x.tensor.shape())
            .filter(|(l, _)| !y.labels.contains(l))
            .map(|(_, &d)| d as f64)
            .product()
    };
    free(a, b) * free(b, a)
}

fn merge(a: Labelled, b: Labelled) -> Labelled {
    let pairs: Vec<(usize, usize)> = a
        .labels
        .iter()
        .enumerate()
        .filter_map(|(i, l)| b.labels.iter().position(|m| m == l).map(|j| (i, j)))
        .collect();
    let tensor = contract(&a.tensor, &b.tensor, &pairs).expect("shared labels have equal dimension");
    let labels = a
        .labels
        .iter()
        .filter(|l| !b.labels.contains(l))
        .chain(b.labels.iter().filter(|l| !a.labels.contains(l)))
        .copied()
        .collect();
    Labelled { tensor, labels }
}
