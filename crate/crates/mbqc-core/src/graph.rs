//! Open graphs: the data model everything else builds on.
//!
//! An [`OpenGraph`] is a simple undirected graph with designated input and
//! output vertex sets (which may overlap). Vertices are dense indices with
//! string labels; vertex sets are one-word bit masks, which caps graphs at 64
//! vertices — far beyond the reach of the exponential enumerations here.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::MAX_VERTICES;

/// A set of vertices, stored as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// The full set {0, …, n-1}.
    pub fn full(n: usize) -> VertexSet {
        debug_assert!(n <= MAX_VERTICES);
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> VertexSet {
        VertexSet(1u64 << v)
    }

    pub fn contains(self, v: usize) -> bool {
        (self.0 >> v) & 1 == 1
    }

    pub fn with(self, v: usize) -> VertexSet {
        VertexSet(self.0 | (1u64 << v))
    }

    pub fn without(self, v: usize) -> VertexSet {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: VertexSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest member; `None` when empty.
    pub fn min_element(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Ascending member iteration.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut w = self.0;
        core::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let v = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(v)
        })
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> VertexSet {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s = s.with(v);
        }
        s
    }

    /// Sort key giving (cardinality, lexicographic-on-sorted-members) order.
    ///
    /// Within one cardinality, the set whose sorted member list is
    /// lexicographically smaller compares smaller; reports sorted with this
    /// key are diffable.
    pub fn popcount_lex_key(self) -> (u32, u64) {
        (self.0.count_ones(), !self.0.reverse_bits())
    }
}

impl core::ops::BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 | rhs.0)
    }
}

impl core::ops::BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & rhs.0)
    }
}

impl core::ops::BitXor for VertexSet {
    type Output = VertexSet;
    fn bitxor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 ^ rhs.0)
    }
}

impl core::ops::Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & !rhs.0)
    }
}

/// Simple undirected graph with input and output vertex sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenGraph {
    labels: Vec<String>,
    adj: Vec<VertexSet>,
    inputs: VertexSet,
    outputs: VertexSet,
}

impl OpenGraph {
    /// Edgeless graph on `n` vertices labelled `v1 … vn`, with empty I and O.
    pub fn new(n: usize) -> Result<OpenGraph> {
        if n > MAX_VERTICES {
            return Err(Error::CapExceeded { what: "vertex count", limit: MAX_VERTICES, requested: n });
        }
        Ok(OpenGraph {
            labels: (1..=n).map(|i| format!("v{i}")).collect(),
            adj: alloc::vec![VertexSet::EMPTY; n],
            inputs: VertexSet::EMPTY,
            outputs: VertexSet::EMPTY,
        })
    }

    /// Graph from an edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<OpenGraph> {
        let mut g = OpenGraph::new(n)?;
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        let n = self.n();
        if a >= n || b >= n {
            return Err(Error::precondition(format!("edge ({a}, {b}) out of range for {n} vertices")));
        }
        if a == b {
            return Err(Error::precondition(format!("self-loop at vertex {a}")));
        }
        if self.adj[a].contains(b) {
            return Err(Error::precondition(format!("duplicate edge ({a}, {b})")));
        }
        self.adj[a] = self.adj[a].with(b);
        self.adj[b] = self.adj[b].with(a);
        Ok(())
    }

    pub fn set_inputs(&mut self, inputs: VertexSet) -> Result<()> {
        if !inputs.is_subset_of(self.vertices()) {
            return Err(Error::precondition("inputs not a subset of the vertex set"));
        }
        self.inputs = inputs;
        Ok(())
    }

    pub fn set_outputs(&mut self, outputs: VertexSet) -> Result<()> {
        if !outputs.is_subset_of(self.vertices()) {
            return Err(Error::precondition("outputs not a subset of the vertex set"));
        }
        self.outputs = outputs;
        Ok(())
    }

    /// Builder-style I/O assignment.
    pub fn with_io(mut self, inputs: VertexSet, outputs: VertexSet) -> Result<OpenGraph> {
        self.set_inputs(inputs)?;
        self.set_outputs(outputs)?;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn inputs(&self) -> VertexSet {
        self.inputs
    }

    pub fn outputs(&self) -> VertexSet {
        self.outputs
    }

    /// V ∖ I: the vertices prepared in the fixed |+⟩ state.
    pub fn input_complement(&self) -> VertexSet {
        self.vertices() - self.inputs
    }

    /// V ∖ O: the measured vertices.
    pub fn output_complement(&self) -> VertexSet {
        self.vertices() - self.outputs
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    /// Edges as ascending (low, high) pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n() {
            for b in self.adj[a].iter() {
                if b > a {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    /// Number of edges with both endpoints inside `w`.
    pub fn edges_within(&self, w: VertexSet) -> usize {
        w.iter().map(|v| (self.adj[v] & w).len()).sum::<usize>() / 2
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Vertices with an odd number of neighbors inside `s` — the GF(2)-linear
    /// image of the indicator of `s` under the adjacency matrix.
    pub fn odd_neighborhood(&self, s: VertexSet) -> VertexSet {
        let mut acc = VertexSet::EMPTY;
        for v in s.iter() {
            acc = acc ^ self.adj[v];
        }
        acc
    }

    /// L(W) = W ∪ Odd(W).
    pub fn local_set(&self, w: VertexSet) -> VertexSet {
        w | self.odd_neighborhood(w)
    }

    /// Adjacency submatrix with the given row and column vertex sets, both
    /// ordered by ascending vertex index, with labels attached.
    pub fn induced_adjacency_matrix(&self, row_set: VertexSet, col_set: VertexSet) -> BitMatrix {
        let rows: Vec<usize> = row_set.iter().collect();
        let cols: Vec<usize> = col_set.iter().collect();
        let mut m = BitMatrix::zero(rows.len(), cols.len()).expect("vertex sets fit in 64 bits");
        for (ri, &u) in rows.iter().enumerate() {
            for (ci, &v) in cols.iter().enumerate() {
                if self.has_edge(u, v) {
                    m.set(ri, ci, true);
                }
            }
        }
        m.with_row_labels(rows).with_col_labels(cols)
    }

    /// Replaces every input by a fresh pendant input neighbor, and every
    /// output by a fresh pendant output neighbor, after which all inputs and
    /// outputs have degree 1. Fresh vertices take the original label with a
    /// prime appended (more primes on collision); input pendants are appended
    /// first, then output pendants, each group in ascending original order.
    pub fn io_extension(&self) -> Result<OpenGraph> {
        let extra = self.inputs.len() + self.outputs.len();
        let n2 = self.n() + extra;
        if n2 > MAX_VERTICES {
            return Err(Error::CapExceeded { what: "vertex count", limit: MAX_VERTICES, requested: n2 });
        }
        let mut g = self.clone();
        g.inputs = VertexSet::EMPTY;
        g.outputs = VertexSet::EMPTY;
        let fresh = |g: &mut OpenGraph, v: usize| -> usize {
            let mut label = format!("{}'", g.labels[v]);
            while g.index_of(&label).is_some() {
                label.push('\'');
            }
            g.labels.push(label);
            g.adj.push(VertexSet::EMPTY);
            let idx = g.labels.len() - 1;
            g.add_edge(idx, v).expect("fresh pendant edge is always new");
            idx
        };
        for v in self.inputs.iter() {
            let p = fresh(&mut g, v);
            g.inputs = g.inputs.with(p);
        }
        for v in self.outputs.iter() {
            let p = fresh(&mut g, v);
            g.outputs = g.outputs.with(p);
        }
        Ok(g)
    }

    /// Subgraph induced on `keep`, with vertices renumbered in ascending
    /// order; labels are preserved and I/O are intersected with `keep`.
    pub fn induced_subgraph(&self, keep: VertexSet) -> Result<OpenGraph> {
        if !keep.is_subset_of(self.vertices()) {
            return Err(Error::precondition("kept set is not a subset of the vertex set"));
        }
        let old: Vec<usize> = keep.iter().collect();
        let mut g = OpenGraph::new(old.len())?;
        g.labels = old.iter().map(|&v| self.labels[v].clone()).collect();
        for (a2, &a) in old.iter().enumerate() {
            for (b2, &b) in old.iter().enumerate().skip(a2 + 1) {
                if self.has_edge(a, b) {
                    g.add_edge(a2, b2)?;
                }
            }
        }
        g.inputs = VertexSet::from_indices(
            old.iter().enumerate().filter(|(_, &v)| self.inputs.contains(v)).map(|(i, _)| i),
        );
        g.outputs = VertexSet::from_indices(
            old.iter().enumerate().filter(|(_, &v)| self.outputs.contains(v)).map(|(i, _)| i),
        );
        Ok(g)
    }

    /// True when the graph has one connected component (vacuously for n ≤ 1).
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n <= 1 {
            return true;
        }
        let mut seen = VertexSet::singleton(0);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier.iter() {
                next = next | self.adj[v];
            }
            frontier = next - seen;
            seen = seen | next;
        }
        seen == self.vertices()
    }

    /// Parses the line-oriented text format:
    ///
    /// ```text
    /// # comment
    /// vertices: v1 v2 v3
    /// edge: v1 v2
    /// inputs: v1
    /// outputs: v3
    /// ```
    ///
    /// Section order is free. The `vertices:` line is optional when every
    /// vertex appears in an edge; when present it fixes the vertex universe
    /// and its order. Input/output lines may not introduce new vertices.
    pub fn parse(text: &str) -> Result<OpenGraph> {
        let mut names: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut universe_fixed = false;

        // First pass: vertex universe.
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let Some(rest) = line.strip_prefix("vertices:") else { continue };
            universe_fixed = true;
            for name in rest.split_whitespace() {
                if index.contains_key(name) {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("duplicate vertex '{name}'"),
                    });
                }
                index.insert(name.to_owned(), names.len());
                names.push(name.to_owned());
            }
        }

        let mut edges: Vec<(usize, usize, usize)> = Vec::new(); // (a, b, lineno)
        let mut inputs: Vec<(String, usize)> = Vec::new();
        let mut outputs: Vec<(String, usize)> = Vec::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = lineno + 1;
            if line.is_empty() || line.starts_with('#') || line.starts_with("vertices:") {
                continue;
            }
            if let Some(rest) = line.strip_prefix("edge:") {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("expected 'edge: a b', got '{line}'"),
                    });
                }
                let mut ends = [0usize; 2];
                for (slot, name) in ends.iter_mut().zip(parts.iter()) {
                    *slot = match index.get(*name) {
                        Some(&i) => i,
                        None if universe_fixed => {
                            return Err(Error::Parse {
                                line: lineno,
                                msg: format!("unknown vertex '{name}'"),
                            });
                        }
                        None => {
                            index.insert((*name).to_owned(), names.len());
                            names.push((*name).to_owned());
                            names.len() - 1
                        }
                    };
                }
                edges.push((ends[0], ends[1], lineno));
            } else if let Some(rest) = line.strip_prefix("inputs:") {
                for name in rest.split_whitespace() {
                    inputs.push((name.to_owned(), lineno));
                }
            } else if let Some(rest) = line.strip_prefix("outputs:") {
                for name in rest.split_whitespace() {
                    outputs.push((name.to_owned(), lineno));
                }
            } else {
                return Err(Error::Parse { line: lineno, msg: format!("unrecognized line '{line}'") });
            }
        }

        if names.len() > MAX_VERTICES {
            return Err(Error::CapExceeded {
                what: "vertex count",
                limit: MAX_VERTICES,
                requested: names.len(),
            });
        }
        let mut g = OpenGraph::new(names.len())?;
        g.labels = names;
        for (a, b, lineno) in edges {
            g.add_edge(a, b).map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("{e}"),
            })?;
        }
        for (set, entries) in [(&mut g.inputs, inputs), (&mut g.outputs, outputs)] {
            for (name, lineno) in entries {
                match index.get(&name) {
                    Some(&i) => *set = set.with(i),
                    None => {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("unknown vertex '{name}'"),
                        });
                    }
                }
            }
        }
        Ok(g)
    }

    /// Serializes to the text format accepted by [`OpenGraph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("vertices:");
        for l in &self.labels {
            out.push(' ');
            out.push_str(l);
        }
        out.push('\n');
        for (a, b) in self.edges() {
            out.push_str(&format!("edge: {} {}\n", self.labels[a], self.labels[b]));
        }
        out.push_str("inputs:");
        for v in self.inputs.iter() {
            out.push(' ');
            out.push_str(&self.labels[v]);
        }
        out.push('\n');
        out.push_str("outputs:");
        for v in self.outputs.iter() {
            out.push(' ');
            out.push_str(&self.labels[v]);
        }
        out.push('\n');
        out
    }

    /// DOT rendering: inputs are box-shaped, outputs unfilled, other vertices
    /// filled circles. Optional `highlight` edges are drawn directed and
    /// colored on top of the plain graph edges.
    pub fn to_dot(&self, highlight: &[(usize, usize)]) -> String {
        let mut out = String::from("digraph open_graph {\n");
        out.push_str("  edge [dir=none];\n");
        out.push_str("  node [style=filled, fillcolor=lightgray, shape=circle];\n");
        for v in 0..self.n() {
            let mut attrs: Vec<&str> = Vec::new();
            if self.inputs.contains(v) {
                attrs.push("shape=box");
            }
            if self.outputs.contains(v) {
                attrs.push("style=solid");
            }
            if attrs.is_empty() {
                out.push_str(&format!("  \"{}\";\n", self.labels[v]));
            } else {
                out.push_str(&format!("  \"{}\" [{}];\n", self.labels[v], attrs.join(", ")));
            }
        }
        for (a, b) in self.edges() {
            out.push_str(&format!("  \"{}\" -> \"{}\";\n", self.labels[a], self.labels[b]));
        }
        for &(a, b) in highlight {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [dir=forward, color=crimson, constraint=false];\n",
                self.labels[a], self.labels[b]
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Shared test graphs.
#[cfg(test)]
pub(crate) mod fixtures {
    use super::{OpenGraph, VertexSet};
    use alloc::vec::Vec;

    /// The 6-vertex counterexample graph: I = {v1}, O = {v5, v6}.
    pub(crate) fn counterexample_text() -> &'static str {
        "# six-vertex counterexample\n\
         vertices: v1 v2 v3 v4 v5 v6\n\
         edge: v1 v2\n\
         edge: v1 v6\n\
         edge: v2 v6\n\
         edge: v2 v5\n\
         edge: v6 v4\n\
         edge: v3 v4\n\
         edge: v3 v5\n\
         edge: v4 v5\n\
         inputs: v1\n\
         outputs: v5 v6\n"
    }

    pub(crate) fn counterexample() -> OpenGraph {
        OpenGraph::parse(counterexample_text()).unwrap()
    }

    /// Path v1–…–vn with I = {v1}, O = {vn}.
    pub(crate) fn path(n: usize) -> OpenGraph {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        OpenGraph::from_edges(n, &edges)
            .unwrap()
            .with_io(VertexSet::singleton(0), VertexSet::singleton(n - 1))
            .unwrap()
    }

    /// The 2×3 grid (vertices v1 v2 v3 over v4 v5 v6) with free I/O.
    pub(crate) fn grid() -> OpenGraph {
        OpenGraph::from_edges(6, &[(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)]).unwrap()
    }
}
