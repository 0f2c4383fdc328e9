//! Atom and coatom graphs of an interval and their component partitions.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::bruhat::{CoverLabelSet, CoverSide, Interval};
use crate::error::{Error, Result};
use crate::perm::Transposition;

/// Simple graph on `{1..n}` with an edge `a -- b` per label `(a b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabeledGraph {
    pub n: usize,
    pub side: CoverSide,
    pub edges: BTreeSet<Transposition>,
}

impl LabeledGraph {
    pub fn from_labels(n: usize, labels: &CoverLabelSet) -> Self {
        LabeledGraph {
            n,
            side: labels.side,
            edges: labels.labels.clone(),
        }
    }

    /// Undirected DOT document with vertices `"1".."n"`.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph {} {{", self.side.as_str());
        let _ = writeln!(out, "  label=\"{}\";", self.side.as_str());
        for i in 1..=self.n {
            let _ = writeln!(out, "  \"{i}\";");
        }
        for t in &self.edges {
            let _ = writeln!(out, "  \"{}\" -- \"{}\";", t.a(), t.b());
        }
        out.push_str("}\n");
        out
    }
}

pub fn atom_graph(interval: &Interval) -> LabeledGraph {
    LabeledGraph::from_labels(interval.degree(), &interval.atom_labels())
}

pub fn coatom_graph(interval: &Interval) -> LabeledGraph {
    LabeledGraph::from_labels(interval.degree(), &interval.coatom_labels())
}

/// Disjoint-set forest with path compression and union by size.
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = i;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, i: usize, j: usize) {
        let (mut a, mut b) = (self.find(i), self.find(j));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// A set partition of `{1..n}` in canonical form: elements ascending within
/// each block, blocks ordered by their minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SetPartition {
    blocks: Vec<Vec<u8>>,
}

impl SetPartition {
    pub fn from_blocks(n: usize, mut blocks: Vec<Vec<u8>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &x in block.iter() {
                let x = x as usize;
                if x == 0 || x > n || seen[x] {
                    return Err(Error::InvalidPartition(format!(
                        "blocks do not partition 1..={n}"
                    )));
                }
                seen[x] = true;
            }
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(Error::InvalidPartition(format!(
                "blocks do not cover 1..={n}"
            )));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block sizes in block order.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn singleton_count(&self) -> usize {
        self.blocks.iter().filter(|b| b.len() == 1).count()
    }
}

pub fn components(graph: &LabeledGraph) -> SetPartition {
    let mut uf = UnionFind::new(graph.n);
    for t in &graph.edges {
        uf.union(t.a() as usize - 1, t.b() as usize - 1);
    }
    let mut by_root: Vec<Vec<u8>> = vec![Vec::new(); graph.n];
    for i in 0..graph.n {
        let r = uf.find(i);
        by_root[r].push(i as u8 + 1);
    }
    let blocks = by_root.into_iter().filter(|b| !b.is_empty()).collect();
    SetPartition::from_blocks(graph.n, blocks).expect("union-find yields a partition")
}

/// Whether the atom and coatom graphs have the same connected components.
pub fn check_components_equal(interval: &Interval) -> bool {
    components(&atom_graph(interval)) == components(&coatom_graph(interval))
}

/// The common component partition, or a hard error if the two sides differ.
pub fn common_partition(interval: &Interval) -> Result<SetPartition> {
    let at = components(&atom_graph(interval));
    let coat = components(&coatom_graph(interval));
    if at != coat {
        return Err(Error::ComponentMismatch {
            u: interval.bottom().to_string(),
            v: interval.top().to_string(),
        });
    }
    Ok(at)
}

/// Block sizes `k_i`, sorted descending.
pub fn component_sizes(interval: &Interval) -> Result<Vec<usize>> {
    let mut sizes = common_partition(interval)?.block_sizes();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(sizes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{enumerate_sn, Permutation};

    fn iv(u: &str, v: &str) -> Interval {
        Interval::new(u.parse().unwrap(), v.parse().unwrap()).unwrap()
    }

    fn t(a: usize, b: usize) -> Transposition {
        Transposition::new(a, b).unwrap()
    }

    #[test]
    fn graphs_of_1234_3412() {
        let i = iv("1234", "3412");
        let at = atom_graph(&i);
        let coat = coatom_graph(&i);
        assert_eq!(at.edges, [t(1, 2), t(2, 3), t(3, 4)].into());
        assert_eq!(coat.edges, [t(1, 3), t(1, 4), t(2, 3), t(2, 4)].into());
        assert_eq!(components(&at).blocks(), &[vec![1, 2, 3, 4]]);
        assert_eq!(components(&coat).blocks(), &[vec![1, 2, 3, 4]]);
        assert!(check_components_equal(&i));
        assert_eq!(component_sizes(&i).unwrap(), vec![4]);
    }

    #[test]
    fn singleton_interval_is_edgeless() {
        let i = iv("3412", "3412");
        assert!(atom_graph(&i).edges.is_empty());
        let parts = components(&atom_graph(&i));
        assert_eq!(parts.blocks(), &[vec![1], vec![2], vec![3], vec![4]]);
        assert!(check_components_equal(&i));
        assert_eq!(component_sizes(&i).unwrap(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn component_sizes_of_listed_maximizer() {
        assert_eq!(component_sizes(&iv("1243", "4231")).unwrap(), vec![4]);
        assert_eq!(component_sizes(&iv("1234", "2134")).unwrap(), vec![2, 1, 1]);
    }

    #[test]
    fn partition_canonical_form() {
        let a = SetPartition::from_blocks(5, vec![vec![5, 3], vec![4, 1], vec![2]]).unwrap();
        assert_eq!(a.blocks(), &[vec![1, 4], vec![2], vec![3, 5]]);
        assert_eq!(a.singleton_count(), 1);
        assert!(SetPartition::from_blocks(3, vec![vec![1, 2]]).is_err());
        assert!(SetPartition::from_blocks(3, vec![vec![1, 2], vec![2, 3]]).is_err());
        assert!(SetPartition::from_blocks(3, vec![vec![1, 2, 3], vec![]]).is_err());
    }

    #[test]
    fn dot_output() {
        let dot = coatom_graph(&iv("1234", "3412")).to_dot();
        assert!(dot.starts_with("graph coatom {"));
        assert!(dot.contains("label=\"coatom\";"));
        for e in [
            "\"1\" -- \"3\"",
            "\"1\" -- \"4\"",
            "\"2\" -- \"3\"",
            "\"2\" -- \"4\"",
        ] {
            assert!(dot.contains(e), "{e}");
        }
        assert_eq!(dot.matches("--").count(), 4);
    }

    #[test]
    fn components_agree_through_s5() {
        for n in 1..=5 {
            let all: Vec<Permutation> = enumerate_sn(n).unwrap().collect();
            for u in &all {
                for v in &all {
                    let Ok(i) = Interval::new(u.clone(), v.clone()) else {
                        continue;
                    };
                    assert!(check_components_equal(&i), "[{u}, {v}]");
                    let sizes = component_sizes(&i).unwrap();
                    assert_eq!(sizes.iter().sum::<usize>(), n);
                    assert!(!sizes.is_empty() && sizes.len() <= n);
                    if u != v {
                        assert!(!atom_graph(&i).edges.is_empty());
                    }
                }
            }
        }
    }
}
