//! Gflow: the combinatorial certificate of strongly deterministic MBQC.
//!
//! A gflow assigns each measured vertex a correction set whose odd
//! neighborhood hits the vertex itself and otherwise only later-measured or
//! output vertices. This module finds gflows by layer peeling, verifies them,
//! focuses them (odd neighborhood meets the measured set only at the vertex
//! itself), and realizes the equivalence between focused gflows and DAG right
//! inverses of the induced adjacency matrix — which also yields a fast
//! inversion-based search and gflow reversal when |I| = |O|.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::graph::{OpenGraph, VertexSet};

/// A gflow: per-vertex correction sets plus a measurement-order certificate.
///
/// `g` holds a correction set for exactly the measured vertices (`None` on
/// outputs). The order is stored as one layer index per vertex: layer 0 is
/// measured last (it always contains the outputs for constructed flows), and
/// u precedes v in measurement order iff `layer(u) > layer(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GFlow {
    g: Vec<Option<VertexSet>>,
    layers: Vec<usize>,
}

impl GFlow {
    /// Assembles a gflow candidate; validity is [`verify_gflow`]'s job.
    pub fn new(g: Vec<Option<VertexSet>>, layers: Vec<usize>) -> GFlow {
        assert_eq!(g.len(), layers.len(), "one correction set and one layer per vertex");
        GFlow { g, layers }
    }

    pub fn n(&self) -> usize {
        self.g.len()
    }

    /// Correction set of `u`; `None` when `u` is not measured.
    pub fn correction_set(&self, u: usize) -> Option<VertexSet> {
        self.g[u]
    }

    pub fn layer(&self, u: usize) -> usize {
        self.layers[u]
    }

    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    /// Number of measurement rounds (the maximum layer index).
    pub fn depth(&self) -> usize {
        self.layers.iter().copied().max().unwrap_or(0)
    }

    /// True when `u` must be measured strictly before `v`.
    pub fn precedes(&self, u: usize, v: usize) -> bool {
        self.layers[u] > self.layers[v]
    }

    /// Measured vertices in measurement order: descending layer, ascending
    /// index within a layer.
    pub fn measurement_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n()).filter(|&u| self.g[u].is_some()).collect();
        order.sort_by_key(|&u| (usize::MAX - self.layers[u], u));
        order
    }
}

/// A focused gflow: every correction set's odd neighborhood meets the
/// measured vertices exactly at the corrected vertex itself.
///
/// Construction enforces both invariants (the focusing property and
/// acyclicity of the successor relation); layers are recomputed canonically
/// as longest-path distances in the successor DAG, so equal correction maps
/// yield equal values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FocusedGFlow(GFlow);

impl FocusedGFlow {
    /// Validates the correction map and derives canonical layers.
    pub fn new(graph: &OpenGraph, g: Vec<Option<VertexSet>>) -> Result<FocusedGFlow> {
        if g.len() != graph.n() {
            return Err(Error::dimension("one correction-set slot per vertex required"));
        }
        let measured = graph.output_complement();
        let mut succ = alloc::vec![VertexSet::EMPTY; graph.n()];
        for u in 0..graph.n() {
            match g[u] {
                None => {
                    if measured.contains(u) {
                        return Err(Error::precondition(format!(
                            "measured vertex {u} lacks a correction set"
                        )));
                    }
                }
                Some(gu) => {
                    if !measured.contains(u) {
                        return Err(Error::precondition(format!(
                            "output vertex {u} has a correction set"
                        )));
                    }
                    if !gu.is_subset_of(graph.input_complement()) {
                        return Err(Error::precondition(format!(
                            "correction set of {u} touches an input"
                        )));
                    }
                    if graph.odd_neighborhood(gu) & measured != VertexSet::singleton(u) {
                        return Err(Error::precondition(format!(
                            "correction set of {u} is not focused"
                        )));
                    }
                    succ[u] = gu;
                }
            }
        }
        let layers = longest_path_layers(&succ)
            .ok_or_else(|| Error::precondition("successor relation has a cycle"))?;
        Ok(FocusedGFlow(GFlow { g, layers }))
    }

    pub fn as_gflow(&self) -> &GFlow {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn correction_set(&self, u: usize) -> Option<VertexSet> {
        self.0.correction_set(u)
    }

    pub fn layer(&self, u: usize) -> usize {
        self.0.layer(u)
    }

    pub fn measurement_order(&self) -> Vec<usize> {
        self.0.measurement_order()
    }
}

/// Directed graph carrying a focused gflow's successor relation: edges go
/// from each measured vertex to its correction set, outputs have no
/// out-neighbors. Plain data — consumers check acyclicity where they need it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    succ: Vec<VertexSet>,
}

impl Dag {
    pub fn new(succ: Vec<VertexSet>) -> Dag {
        Dag { succ }
    }

    pub fn n(&self) -> usize {
        self.succ.len()
    }

    pub fn out_neighbors(&self, u: usize) -> VertexSet {
        self.succ[u]
    }

    /// Directed edges as (source, target) pairs, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.succ.len() {
            for v in self.succ[u].iter() {
                out.push((u, v));
            }
        }
        out
    }

    /// True when the edge relation has no directed cycle (self-loops count
    /// as cycles).
    pub fn is_acyclic(&self) -> bool {
        longest_path_layers(&self.succ).is_some()
    }
}

/// Longest-path-to-sink labels: sinks get 0, every edge u→v guarantees
/// `layer[u] > layer[v]`. `None` when the relation is cyclic.
fn longest_path_layers(succ: &[VertexSet]) -> Option<Vec<usize>> {
    let n = succ.len();
    let mut indegree = alloc::vec![0usize; n];
    for s in succ {
        for v in s.iter() {
            indegree[v] += 1;
        }
    }
    // Kahn's algorithm from the sources; then assign layers sinks-first.
    let mut stack: Vec<usize> = (0..n).filter(|&u| indegree[u] == 0).collect();
    let mut topo: Vec<usize> = Vec::with_capacity(n);
    while let Some(u) = stack.pop() {
        topo.push(u);
        for v in succ[u].iter() {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                stack.push(v);
            }
        }
    }
    if topo.len() != n {
        return None;
    }
    let mut layers = alloc::vec![0usize; n];
    for &u in topo.iter().rev() {
        layers[u] = succ[u].iter().map(|v| layers[v] + 1).max().unwrap_or(0);
    }
    Some(layers)
}

/// Searches for a gflow by backward layer peeling.
///
/// Layer 0 is the output set. Each round solves, for every still-unassigned
/// vertex u, for a correction set K among already-assigned non-input vertices
/// with `Odd(K)` meeting the unassigned vertices exactly in {u}; all solvable
/// vertices form the next layer. The search is complete: it stalls only on
/// graphs with no gflow.
pub fn find_gflow(graph: &OpenGraph) -> Option<GFlow> {
    let n = graph.n();
    let mut g: Vec<Option<VertexSet>> = alloc::vec![None; n];
    let mut layers = alloc::vec![0usize; n];
    let mut assigned = graph.outputs();
    let mut remaining = graph.output_complement();
    let mut layer = 0usize;
    while !remaining.is_empty() {
        layer += 1;
        let candidates = assigned & graph.input_complement();
        let m = graph.induced_adjacency_matrix(remaining, candidates);
        let row_of: Vec<usize> = remaining.iter().collect();
        let col_vertices: Vec<usize> = candidates.iter().collect();
        let mut solved = VertexSet::EMPTY;
        for (ri, &u) in row_of.iter().enumerate() {
            if let Some(x) = m.solve(1u64 << ri) {
                let k = VertexSet::from_indices(
                    col_vertices.iter().enumerate().filter(|(ci, _)| (x >> ci) & 1 == 1).map(|(_, &v)| v),
                );
                g[u] = Some(k);
                layers[u] = layer;
                solved = solved.with(u);
            }
        }
        if solved.is_empty() {
            return None;
        }
        assigned = assigned | solved;
        remaining = remaining - solved;
    }
    let flow = GFlow { g, layers };
    debug_assert!(verify_gflow(graph, &flow));
    Some(flow)
}

/// Checks the three gflow conditions under the flow's own layer order, plus
/// well-formedness (correction sets on exactly the measured vertices, drawn
/// from non-input vertices):
///
/// 1. v ∈ g(u) ⇒ u precedes v — in particular u ∉ g(u), since nothing
///    precedes itself;
/// 2. u ∈ Odd(g(u));
/// 3. v ∈ Odd(g(u)) and v ≠ u ⇒ u precedes v.
pub fn verify_gflow(graph: &OpenGraph, flow: &GFlow) -> bool {
    if flow.n() != graph.n() {
        return false;
    }
    let measured = graph.output_complement();
    for u in 0..graph.n() {
        match flow.correction_set(u) {
            None => {
                if measured.contains(u) {
                    return false;
                }
            }
            Some(gu) => {
                if !measured.contains(u) || !gu.is_subset_of(graph.input_complement()) {
                    return false;
                }
                let odd = graph.odd_neighborhood(gu);
                if !odd.contains(u) {
                    return false;
                }
                if gu.iter().any(|v| !flow.precedes(u, v)) {
                    return false;
                }
                if odd.without(u).iter().any(|v| !flow.precedes(u, v)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Focuses a gflow: rewrites each correction set so its odd neighborhood
/// meets the measured vertices only at the corrected vertex, by folding in
/// the (already focused) correction sets of later-measured offenders.
pub fn focus(graph: &OpenGraph, flow: &GFlow) -> Result<FocusedGFlow> {
    if !verify_gflow(graph, flow) {
        return Err(Error::precondition("focus requires a valid gflow"));
    }
    let measured = graph.output_complement();
    let mut order: Vec<usize> = measured.iter().collect();
    order.sort_by_key(|&u| flow.layer(u));
    let mut focused: Vec<Option<VertexSet>> = alloc::vec![None; graph.n()];
    for &u in &order {
        let gu = flow.correction_set(u).expect("measured vertices carry correction sets");
        let mut acc = gu;
        for v in (graph.odd_neighborhood(gu) & measured).without(u).iter() {
            acc = acc ^ focused[v].expect("offenders lie in earlier layers, already focused");
        }
        focused[u] = Some(acc);
    }
    FocusedGFlow::new(graph, focused)
}

/// The successor relation of a focused gflow as a DAG: one edge u→v per
/// v ∈ g(u), no out-edges on outputs.
pub fn focused_to_dag(flow: &FocusedGFlow) -> Dag {
    let succ = (0..flow.n())
        .map(|u| flow.correction_set(u).unwrap_or(VertexSet::EMPTY))
        .collect();
    Dag { succ }
}

/// Matrix of the DAG's correction sets: rows are non-input vertices, columns
/// are measured vertices, entry (v, u) set iff v is a successor of u. For a
/// focused gflow this is a right inverse of the induced adjacency matrix.
pub fn right_inverse_matrix(graph: &OpenGraph, dag: &Dag) -> BitMatrix {
    let rows: Vec<usize> = graph.input_complement().iter().collect();
    let cols: Vec<usize> = graph.output_complement().iter().collect();
    let mut m = BitMatrix::zero(rows.len(), cols.len()).expect("vertex sets fit in 64 bits");
    for (ci, &u) in cols.iter().enumerate() {
        for (ri, &v) in rows.iter().enumerate() {
            if dag.out_neighbors(u).contains(v) {
                m.set(ri, ci, true);
            }
        }
    }
    m.with_row_labels(rows).with_col_labels(cols)
}

/// Reads a focused gflow off a DAG whose restriction is a right inverse of
/// the induced adjacency matrix: g(u) := out-neighbors of u.
pub fn dag_to_focused(graph: &OpenGraph, dag: &Dag) -> Result<FocusedGFlow> {
    if dag.n() != graph.n() {
        return Err(Error::dimension("DAG and graph must share a vertex set"));
    }
    if !dag.is_acyclic() {
        return Err(Error::precondition("successor relation has a cycle"));
    }
    for v in graph.outputs().iter() {
        if !dag.out_neighbors(v).is_empty() {
            return Err(Error::precondition(format!("output vertex {v} has successors")));
        }
    }
    let induced =
        graph.induced_adjacency_matrix(graph.output_complement(), graph.input_complement());
    let product = induced.multiply(&right_inverse_matrix(graph, dag))?;
    let identity = BitMatrix::identity(product.rows())?;
    if product.rows() != product.cols()
        || (0..product.rows()).any(|r| product.row(r) != identity.row(r))
    {
        return Err(Error::precondition(
            "DAG restriction is not a right inverse of the induced adjacency matrix",
        ));
    }
    let measured = graph.output_complement();
    let g = (0..graph.n())
        .map(|u| measured.contains(u).then(|| dag.out_neighbors(u)))
        .collect();
    FocusedGFlow::new(graph, g)
}

/// Focused gflow of the role-swapped open graph (G, O, I), obtained by
/// flipping the forward DAG's edges. Requires |I| = |O|; absent exactly when
/// the forward gflow is absent.
pub fn reverse_gflow(graph: &OpenGraph) -> Result<Option<FocusedGFlow>> {
    if graph.inputs().len() != graph.outputs().len() {
        return Err(Error::precondition("gflow reversal requires |I| = |O|"));
    }
    let Some(forward) = find_gflow(graph) else {
        return Ok(None);
    };
    let dag = focused_to_dag(&focus(graph, &forward)?);
    let mut flipped = alloc::vec![VertexSet::EMPTY; graph.n()];
    for (u, v) in dag.edges() {
        flipped[v] = flipped[v].with(u);
    }
    let swapped = graph.clone().with_io(graph.outputs(), graph.inputs())?;
    dag_to_focused(&swapped, &Dag::new(flipped)).map(Some)
}

/// Fast gflow search for |I| = |O|: the induced adjacency matrix is square,
/// and a gflow exists iff the matrix is invertible with an acyclic inverse;
/// the inverse's columns are then the unique focused correction sets.
pub fn find_gflow_square(graph: &OpenGraph) -> Result<Option<FocusedGFlow>> {
    if graph.inputs().len() != graph.outputs().len() {
        return Err(Error::precondition("square gflow search requires |I| = |O|"));
    }
    let induced =
        graph.induced_adjacency_matrix(graph.output_complement(), graph.input_complement());
    let Some(inverse) = induced.invert()? else {
        return Ok(None);
    };
    let row_vertices = inverse.row_labels().expect("induced matrices carry labels").to_vec();
    let col_vertices = inverse.col_labels().expect("induced matrices carry labels").to_vec();
    let mut succ = alloc::vec![VertexSet::EMPTY; graph.n()];
    for (ci, &u) in col_vertices.iter().enumerate() {
        let column = inverse.col(ci);
        succ[u] = VertexSet::from_indices(
            row_vertices.iter().enumerate().filter(|(ri, _)| (column >> ri) & 1 == 1).map(|(_, &v)| v),
        );
    }
    let dag = Dag::new(succ);
    if !dag.is_acyclic() {
        return Ok(None);
    }
    dag_to_focused(graph, &dag).map(Some)
}
