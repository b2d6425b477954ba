//! The three computation classes and their certificates.
//!
//! An open graph supports strongly deterministic MBQC iff it has a gflow,
//! equiprobable MBQC iff it has no internal set, and constant-probability
//! MBQC iff it has no strongly internal set. This module enumerates the
//! violating sets, assembles the full classification verdict, and constructs
//! the explicit measurement plans whose zero-probability branches certify a
//! negative verdict numerically. It also covers the structural results for
//! |I| = |O| (class collapse, decomposition) and the degree-parity criterion
//! for single-pendant-input/output graphs.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flow::{find_gflow, focus, FocusedGFlow};
use crate::graph::{OpenGraph, VertexSet};
use crate::DEFAULT_ENUM_CAP;

/// A nonempty set of measured vertices whose odd neighborhood stays inside
/// the set and the inputs — the obstruction to equiprobability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InternalSet {
    w: VertexSet,
}

impl InternalSet {
    pub fn new(graph: &OpenGraph, w: VertexSet) -> Result<InternalSet> {
        if w.is_empty() {
            return Err(Error::precondition("internal sets are nonempty"));
        }
        if !w.is_subset_of(graph.output_complement()) {
            return Err(Error::precondition("internal sets avoid outputs"));
        }
        if !(graph.odd_neighborhood(w) - (w | graph.inputs())).is_empty() {
            return Err(Error::precondition(
                "odd neighborhood escapes the set and the inputs",
            ));
        }
        Ok(InternalSet { w })
    }

    pub fn set(&self) -> VertexSet {
        self.w
    }
}

/// An internal set that additionally touches the inputs (via itself or its
/// odd neighborhood) — the obstruction to constant probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StronglyInternalSet {
    w: VertexSet,
}

impl StronglyInternalSet {
    pub fn new(graph: &OpenGraph, w: VertexSet) -> Result<StronglyInternalSet> {
        let internal = InternalSet::new(graph, w)?;
        if !graph.local_set(w).intersects(graph.inputs()) {
            return Err(Error::precondition("local set misses the inputs"));
        }
        Ok(StronglyInternalSet { w: internal.w })
    }

    pub fn set(&self) -> VertexSet {
        self.w
    }

    pub fn as_internal(&self) -> InternalSet {
        InternalSet { w: self.w }
    }
}

/// Enumerates all nonempty S ⊆ `universe` whose odd neighborhood stays
/// inside S ∪ `allowed`, by a Gray-code walk maintaining Odd incrementally;
/// results ascend by size then lexicographically.
pub(crate) fn enumerate_violating(
    graph: &OpenGraph,
    universe: VertexSet,
    allowed: VertexSet,
    cap: usize,
) -> Result<Vec<VertexSet>> {
    let members: Vec<usize> = universe.iter().collect();
    let m = members.len();
    if m > cap {
        return Err(Error::CapExceeded {
            what: "violating-set subset enumeration",
            limit: cap,
            requested: m,
        });
    }
    let mut found = Vec::new();
    let mut w = VertexSet::EMPTY;
    let mut odd = VertexSet::EMPTY;
    for step in 1u64..(1u64 << m) {
        let v = members[step.trailing_zeros() as usize];
        w = w ^ VertexSet::singleton(v);
        odd = odd ^ graph.neighbors(v);
        if (odd - (w | allowed)).is_empty() {
            found.push(w);
        }
    }
    found.sort_by_key(|s| s.popcount_lex_key());
    Ok(found)
}

/// Internal sets are the violating sets confined to the measured vertices.
fn enumerate_internal(graph: &OpenGraph, cap: usize) -> Result<Vec<VertexSet>> {
    enumerate_violating(graph, graph.output_complement(), graph.inputs(), cap)
}

/// All internal sets, ascending by size then lexicographically, using the
/// default enumeration cap.
pub fn internal_sets(graph: &OpenGraph) -> Result<Vec<InternalSet>> {
    internal_sets_with_cap(graph, DEFAULT_ENUM_CAP)
}

pub fn internal_sets_with_cap(graph: &OpenGraph, cap: usize) -> Result<Vec<InternalSet>> {
    Ok(enumerate_internal(graph, cap)?.into_iter().map(|w| InternalSet { w }).collect())
}

/// All strongly internal sets, ordered like [`internal_sets`].
pub fn strongly_internal_sets(graph: &OpenGraph) -> Result<Vec<StronglyInternalSet>> {
    strongly_internal_sets_with_cap(graph, DEFAULT_ENUM_CAP)
}

pub fn strongly_internal_sets_with_cap(
    graph: &OpenGraph,
    cap: usize,
) -> Result<Vec<StronglyInternalSet>> {
    Ok(enumerate_internal(graph, cap)?
        .into_iter()
        .filter(|&w| graph.local_set(w).intersects(graph.inputs()))
        .map(|w| StronglyInternalSet { w })
        .collect())
}

/// Full verdict for one open graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub has_gflow: bool,
    pub equiprobable: bool,
    pub constant_probability: bool,
    pub gflow: Option<FocusedGFlow>,
    pub internal_sets: Vec<InternalSet>,
    pub strongly_internal_sets: Vec<StronglyInternalSet>,
    pub notes: String,
}

/// Classifies an open graph: gflow search plus violating-set enumeration.
pub fn classify(graph: &OpenGraph) -> Result<ClassificationReport> {
    classify_with_cap(graph, DEFAULT_ENUM_CAP)
}

pub fn classify_with_cap(graph: &OpenGraph, cap: usize) -> Result<ClassificationReport> {
    let internal = internal_sets_with_cap(graph, cap)?;
    let strongly: Vec<StronglyInternalSet> = internal
        .iter()
        .filter(|s| graph.local_set(s.set()).intersects(graph.inputs()))
        .map(|s| StronglyInternalSet { w: s.set() })
        .collect();
    let gflow = match find_gflow(graph) {
        Some(flow) => Some(focus(graph, &flow)?),
        None => None,
    };
    let report = ClassificationReport {
        has_gflow: gflow.is_some(),
        equiprobable: internal.is_empty(),
        constant_probability: strongly.is_empty(),
        gflow,
        notes: describe(graph, gflow_depth(graph), &internal, &strongly),
        internal_sets: internal,
        strongly_internal_sets: strongly,
    };
    debug_assert!(!report.has_gflow || report.equiprobable);
    debug_assert!(!report.equiprobable || report.constant_probability);
    Ok(report)
}

fn gflow_depth(graph: &OpenGraph) -> Option<usize> {
    find_gflow(graph).map(|f| f.depth())
}

fn describe(
    graph: &OpenGraph,
    depth: Option<usize>,
    internal: &[InternalSet],
    strongly: &[StronglyInternalSet],
) -> String {
    let names = |w: VertexSet| -> String {
        let mut parts: Vec<&str> = w.iter().map(|v| graph.label(v)).collect();
        parts.sort_unstable();
        parts.join(", ")
    };
    let mut notes = match depth {
        Some(d) => format!("strongly deterministic: gflow of depth {d}"),
        None => String::from("no gflow"),
    };
    match internal.first() {
        None => notes.push_str("; equiprobable: no internal set"),
        Some(first) => {
            notes.push_str(&format!(
                "; {} internal set(s), smallest {{{}}}",
                internal.len(),
                names(first.set())
            ));
        }
    }
    match strongly.first() {
        None => notes.push_str("; constant-probability: no strongly internal set"),
        Some(first) => {
            notes.push_str(&format!(
                "; {} strongly internal set(s), smallest {{{}}}",
                strongly.len(),
                names(first.set())
            ));
        }
    }
    notes
}

/// Regression check of the |I| = |O| class collapse: equiprobability must
/// coincide with gflow existence. Always true if the library is correct.
pub fn collapse_check(graph: &OpenGraph) -> Result<bool> {
    if graph.inputs().len() != graph.outputs().len() {
        return Err(Error::precondition("collapse check requires |I| = |O|"));
    }
    let equiprobable = internal_sets(graph)?.is_empty();
    Ok(equiprobable == find_gflow(graph).is_some())
}

/// Splits a constant-probability, |I| = |O| open graph into a kept part with
/// a gflow and a removed part, by inductively deleting nonempty sets of
/// non-I/O vertices whose odd neighborhood (in the current graph) stays
/// inside the set. Returns (kept, removed) over the original vertex indices.
pub fn decompose(graph: &OpenGraph) -> Result<(VertexSet, VertexSet)> {
    decompose_with_cap(graph, DEFAULT_ENUM_CAP)
}

pub fn decompose_with_cap(graph: &OpenGraph, cap: usize) -> Result<(VertexSet, VertexSet)> {
    if graph.inputs().len() != graph.outputs().len() {
        return Err(Error::precondition("decomposition requires |I| = |O|"));
    }
    if !strongly_internal_sets_with_cap(graph, cap)?.is_empty() {
        return Err(Error::precondition(
            "decomposition requires the constant-probability class",
        ));
    }
    let io = graph.inputs() | graph.outputs();
    let mut kept = graph.vertices();
    let mut removed = VertexSet::EMPTY;
    loop {
        let candidates: Vec<usize> = (kept - io).iter().collect();
        let m = candidates.len();
        if m > cap {
            return Err(Error::CapExceeded {
                what: "decomposition subset enumeration",
                limit: cap,
                requested: m,
            });
        }
        // Smallest removable set first (size, then lexicographic), so the
        // removal sequence is deterministic.
        let mut best: Option<VertexSet> = None;
        let mut w = VertexSet::EMPTY;
        let mut odd = VertexSet::EMPTY;
        for step in 1u64..(1u64 << m) {
            let v = candidates[step.trailing_zeros() as usize];
            w = w ^ VertexSet::singleton(v);
            odd = odd ^ graph.neighbors(v);
            if ((odd & kept) - w).is_empty()
                && best.is_none_or(|b| w.popcount_lex_key() < b.popcount_lex_key())
            {
                best = Some(w);
            }
        }
        match best {
            None => break,
            Some(w) => {
                kept = kept - w;
                removed = removed | w;
            }
        }
    }
    debug_assert!((graph.odd_neighborhood(removed) & kept).is_empty());
    Ok((kept, removed))
}

/// Degree-parity criterion for graphs with one degree-1 input and one
/// degree-1 output: constant probability holds iff every other vertex has
/// even degree. (Callers with fatter inputs/outputs can apply
/// [`OpenGraph::io_extension`] first; the criterion assumes a connected
/// graph.)
pub fn eulerian_test(graph: &OpenGraph) -> Result<bool> {
    if graph.inputs().len() != 1 || graph.outputs().len() != 1 {
        return Err(Error::precondition("degree-parity test requires |I| = |O| = 1"));
    }
    let io = graph.inputs() | graph.outputs();
    for v in io.iter() {
        if graph.degree(v) != 1 {
            return Err(Error::precondition(format!(
                "input/output vertex {} must have degree 1 (apply the I/O extension first)",
                graph.label(v)
            )));
        }
    }
    Ok((graph.vertices() - io).iter().all(|v| graph.degree(v) % 2 == 0))
}

/// Effective single-qubit Pauli appearing in a witness plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliMark {
    Identity,
    X,
    Y,
}

/// Input-qubit preparation required by a witness plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputState {
    Plus,
    Minus,
    Zero,
    One,
}

/// A measurement plan that certifies a violating set numerically: under the
/// given input states and measurement angles, every branch whose outcome sum
/// over `parity_support` has parity `forbidden_parity` occurs with
/// probability zero.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessPlan {
    /// Per-vertex effective Pauli: X on W₀ ∖ Odd(W₀), Y on W₀ ∩ Odd(W₀).
    pub pauli: Vec<PauliMark>,
    /// Per-vertex input preparation; `Some` exactly on the inputs.
    pub input_states: Vec<Option<InputState>>,
    /// Per-vertex measurement angle in radians; `Some` exactly on measured
    /// vertices. 0 on X-marked and unconstrained vertices, π/2 on Y-marked.
    pub angles: Vec<Option<f64>>,
    /// The violating set W₀ whose outcome parity is constrained.
    pub parity_support: VertexSet,
    /// Outcome-sum parity over `parity_support` that never occurs.
    pub forbidden_parity: u8,
}

fn base_plan(graph: &OpenGraph, w0: VertexSet) -> WitnessPlan {
    let odd = graph.odd_neighborhood(w0);
    let pauli = (0..graph.n())
        .map(|v| match (w0.contains(v), odd.contains(v)) {
            (true, false) => PauliMark::X,
            (true, true) => PauliMark::Y,
            _ => PauliMark::Identity,
        })
        .collect();
    let angles = (0..graph.n())
        .map(|v| {
            graph.output_complement().contains(v).then(|| {
                if w0.contains(v) && odd.contains(v) {
                    core::f64::consts::FRAC_PI_2
                } else {
                    0.0
                }
            })
        })
        .collect();
    let input_states = (0..graph.n())
        .map(|v| {
            graph.inputs().contains(v).then(|| {
                if w0.contains(v) {
                    InputState::Plus
                } else {
                    InputState::Zero
                }
            })
        })
        .collect();
    // The plan's Pauli operator is i^k · X over W₀ · Z over W₀ ∩ Odd(W₀)
    // (k = |W₀ ∩ Odd(W₀)|, even by handshake). Its eigenvalue on the
    // prepared state is (−1)^{|E(W₀)| + k/2}, so branches of the opposite
    // parity vanish.
    let k = (w0 & odd).len();
    let forbidden_parity = ((1 + graph.edges_within(w0) + k / 2) % 2) as u8;
    WitnessPlan { pauli, input_states, angles, parity_support: w0, forbidden_parity }
}

/// Measurement plan certifying non-equiprobability: under uniform inputs the
/// forbidden-parity branches of `w0` occur with probability 0 instead of the
/// equiprobable 2^{−|O^C|}.
pub fn make_witness(graph: &OpenGraph, w0: &InternalSet) -> Result<WitnessPlan> {
    let w0 = InternalSet::new(graph, w0.set())?; // revalidate against this graph
    Ok(base_plan(graph, w0.set()))
}

/// Pair of measurement plans certifying non-constant probability: they
/// differ only in the preparation of one input vertex, yet some branch has
/// probability ≥ 2^{−|O^C|} under the first plan and 0 under the second.
///
/// The toggled input u₀ is the least-index vertex of L(W₀) ∩ I. When
/// u₀ ∈ W₀ the pair is |+⟩ / |−⟩; when u₀ only neighbors W₀ it is |0⟩ / |1⟩.
pub fn make_distinguishing_witness(
    graph: &OpenGraph,
    w0: &StronglyInternalSet,
) -> Result<(WitnessPlan, WitnessPlan)> {
    let w0 = StronglyInternalSet::new(graph, w0.set())?;
    let u0 = (graph.local_set(w0.set()) & graph.inputs())
        .min_element()
        .expect("strongly internal sets touch the inputs");
    let plan_a = base_plan(graph, w0.set());
    let mut plan_b = plan_a.clone();
    plan_b.input_states[u0] = Some(if w0.set().contains(u0) {
        InputState::Minus
    } else {
        InputState::One
    });
    debug_assert_eq!(plan_a.input_states[u0], Some(if w0.set().contains(u0) {
        InputState::Plus
    } else {
        InputState::Zero
    }));
    // Toggling u₀ flips the Pauli eigenvalue, so the two plans forbid
    // complementary parities.
    plan_b.forbidden_parity ^= 1;
    Ok((plan_a, plan_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{counterexample, path};
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn triangle_one_output() -> OpenGraph {
        OpenGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)])
            .unwrap()
            .with_io(VertexSet::EMPTY, VertexSet::singleton(2))
            .unwrap()
    }

    #[test]
    fn counterexample_has_no_internal_set() {
        assert!(internal_sets(&counterexample()).unwrap().is_empty());
    }

    #[test]
    fn isolated_vertex_is_internal() {
        let g = OpenGraph::new(1).unwrap();
        let sets = internal_sets(&g).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].set(), VertexSet::singleton(0));
    }

    #[test]
    fn triangle_has_one_internal_set() {
        let sets = internal_sets(&triangle_one_output()).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].set(), VertexSet::from_indices([0, 1]));
    }

    #[test]
    fn internal_sets_are_sorted_by_size_then_lex() {
        // Two isolated vertices: {v1}, {v2}, then {v1, v2}.
        let g = OpenGraph::new(2).unwrap();
        let sets: Vec<VertexSet> = internal_sets(&g).unwrap().iter().map(|s| s.set()).collect();
        assert_eq!(
            sets,
            alloc::vec![
                VertexSet::singleton(0),
                VertexSet::singleton(1),
                VertexSet::from_indices([0, 1]),
            ]
        );
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let g = OpenGraph::new(9).unwrap();
        assert!(internal_sets_with_cap(&g, 8).is_err());
        assert!(internal_sets_with_cap(&g, 9).is_ok());
    }

    #[test]
    fn strongly_internal_needs_inputs() {
        assert!(strongly_internal_sets(&triangle_one_output()).unwrap().is_empty());

        let mut isolated_input = OpenGraph::new(1).unwrap();
        isolated_input.set_inputs(VertexSet::singleton(0)).unwrap();
        let sets = strongly_internal_sets(&isolated_input).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].set(), VertexSet::singleton(0));
    }

    #[test]
    fn strongly_internal_is_a_subset_of_internal() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = 1 + (rng.next_u32() as usize) % 6;
            let mut g = OpenGraph::new(n).unwrap();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.next_u32() % 2 == 0 {
                        g.add_edge(a, b).unwrap();
                    }
                }
            }
            let mask = VertexSet::full(n).0;
            let g = g
                .with_io(VertexSet(rng.next_u64() & mask), VertexSet(rng.next_u64() & mask))
                .unwrap();
            let internal: Vec<VertexSet> =
                internal_sets(&g).unwrap().iter().map(|s| s.set()).collect();
            for s in strongly_internal_sets(&g).unwrap() {
                assert!(internal.contains(&s.set()));
            }
        }
    }

    #[test]
    fn classify_counterexample() {
        let report = classify(&counterexample()).unwrap();
        assert!(!report.has_gflow);
        assert!(report.equiprobable);
        assert!(report.constant_probability);
        assert!(report.gflow.is_none());
        assert!(report.notes.contains("no gflow"));
    }

    #[test]
    fn classify_path() {
        let report = classify(&path(2)).unwrap();
        assert!(report.has_gflow && report.equiprobable && report.constant_probability);
        assert!(report.gflow.is_some());
    }

    #[test]
    fn classify_triangle() {
        let report = classify(&triangle_one_output()).unwrap();
        assert!(!report.has_gflow);
        assert!(!report.equiprobable);
        assert!(report.constant_probability);
        assert!(report.notes.contains("1 internal set(s), smallest {v1, v2}"));
    }

    #[test]
    fn implication_chain_holds_on_random_graphs() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = 1 + (rng.next_u32() as usize) % 6;
            let mut g = OpenGraph::new(n).unwrap();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.next_u32() % 2 == 0 {
                        g.add_edge(a, b).unwrap();
                    }
                }
            }
            let mask = VertexSet::full(n).0;
            let g = g
                .with_io(VertexSet(rng.next_u64() & mask), VertexSet(rng.next_u64() & mask))
                .unwrap();
            let report = classify(&g).unwrap();
            assert!(!report.has_gflow || report.equiprobable);
            assert!(!report.equiprobable || report.constant_probability);
            assert_eq!(report.equiprobable, report.internal_sets.is_empty());
            assert_eq!(report.constant_probability, report.strongly_internal_sets.is_empty());
        }
    }

    #[test]
    fn collapse_holds_where_defined() {
        assert!(collapse_check(&path(2)).unwrap());
        assert!(collapse_check(&triangle_one_output()).is_err());

        let mut rng = ChaCha12Rng::seed_from_u64(13);
        let mut checked = 0;
        for _ in 0..400 {
            let n = 2 + (rng.next_u32() as usize) % 4;
            let mut g = OpenGraph::new(n).unwrap();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.next_u32() % 2 == 0 {
                        g.add_edge(a, b).unwrap();
                    }
                }
            }
            let mask = VertexSet::full(n).0;
            let (i, o) = (VertexSet(rng.next_u64() & mask), VertexSet(rng.next_u64() & mask));
            if i.len() != o.len() {
                continue;
            }
            assert!(collapse_check(&g.with_io(i, o).unwrap()).unwrap());
            checked += 1;
        }
        assert!(checked > 50);
    }

    #[test]
    fn decompose_keeps_gflow_graphs_whole() {
        let (kept, removed) = decompose(&path(2)).unwrap();
        assert_eq!(kept, VertexSet::from_indices([0, 1]));
        assert_eq!(removed, VertexSet::EMPTY);
    }

    #[test]
    fn decompose_strips_the_floating_triangle() {
        // Path v1–v2 (I = {v1}, O = {v2}) next to a free triangle v3v4v5.
        let mut g = OpenGraph::from_edges(5, &[(0, 1), (2, 3), (3, 4), (2, 4)]).unwrap();
        g.set_inputs(VertexSet::singleton(0)).unwrap();
        g.set_outputs(VertexSet::singleton(1)).unwrap();
        assert!(strongly_internal_sets(&g).unwrap().is_empty());

        let (kept, removed) = decompose(&g).unwrap();
        assert_eq!(removed, VertexSet::from_indices([2, 3, 4]));
        assert_eq!(kept, VertexSet::from_indices([0, 1]));
        let reduced = g.induced_subgraph(kept).unwrap();
        assert!(find_gflow(&reduced).is_some());
    }

    #[test]
    fn decompose_rejects_violated_hypotheses() {
        assert!(decompose(&counterexample()).is_err()); // |I| ≠ |O|

        // Two vertices, no edge, I = {v1}, O = {v2}: {v1} is strongly internal.
        let g = OpenGraph::new(2)
            .unwrap()
            .with_io(VertexSet::singleton(0), VertexSet::singleton(1))
            .unwrap();
        assert!(decompose(&g).is_err());
    }

    #[test]
    fn decompose_sweep_leaves_gflow() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let mut qualified = 0;
        for _ in 0..600 {
            let n = 2 + (rng.next_u32() as usize) % 4;
            let mut g = OpenGraph::new(n).unwrap();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.next_u32() % 2 == 0 {
                        g.add_edge(a, b).unwrap();
                    }
                }
            }
            let mask = VertexSet::full(n).0;
            let (i, o) = (VertexSet(rng.next_u64() & mask), VertexSet(rng.next_u64() & mask));
            if i.len() != o.len() {
                continue;
            }
            let g = g.with_io(i, o).unwrap();
            if !strongly_internal_sets(&g).unwrap().is_empty() {
                continue;
            }
            qualified += 1;
            let (kept, removed) = decompose(&g).unwrap();
            assert_eq!(kept | removed, g.vertices());
            assert!((kept & removed).is_empty());
            assert!((g.odd_neighborhood(removed) & kept).is_empty());
            assert!(find_gflow(&g.induced_subgraph(kept).unwrap()).is_some());
        }
        assert!(qualified > 50);
    }

    #[test]
    fn degree_parity_criterion() {
        // i′–a–o′: the lone interior vertex has degree 2.
        assert!(eulerian_test(&path(3)).unwrap());
        // i′–a–b–o′: both interior vertices have degree 2 in the whole graph.
        assert!(eulerian_test(&path(4)).unwrap());

        // Hanging a pendant c off a makes c's degree odd.
        let mut g = OpenGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap();
        g.set_inputs(VertexSet::singleton(0)).unwrap();
        g.set_outputs(VertexSet::singleton(3)).unwrap();
        assert!(!eulerian_test(&g).unwrap());
        // …and indeed constant probability fails: {i′, c} is strongly internal.
        let report = classify(&g).unwrap();
        assert!(!report.constant_probability);
        assert!(report
            .strongly_internal_sets
            .iter()
            .any(|s| s.set() == VertexSet::from_indices([0, 4])));
    }

    #[test]
    fn degree_parity_preconditions() {
        assert!(eulerian_test(&counterexample()).is_err()); // |I| ≠ |O|

        let tri = OpenGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)])
            .unwrap()
            .with_io(VertexSet::singleton(0), VertexSet::singleton(1))
            .unwrap();
        assert!(eulerian_test(&tri).is_err()); // input degree 2

        // The extension makes the same graph eligible.
        let ext = tri.io_extension().unwrap();
        assert!(eulerian_test(&ext).is_ok());
    }

    #[test]
    fn witness_for_isolated_vertex() {
        let g = OpenGraph::new(1).unwrap();
        let w0 = internal_sets(&g).unwrap()[0];
        let plan = make_witness(&g, &w0).unwrap();
        assert_eq!(plan.pauli, alloc::vec![PauliMark::X]);
        assert_eq!(plan.angles, alloc::vec![Some(0.0)]);
        assert_eq!(plan.input_states, alloc::vec![None]);
        assert_eq!(plan.parity_support, VertexSet::singleton(0));
        assert_eq!(plan.forbidden_parity, 1);
    }

    #[test]
    fn witness_for_triangle() {
        let g = triangle_one_output();
        let w0 = internal_sets(&g).unwrap()[0];
        let plan = make_witness(&g, &w0).unwrap();
        // W₀ = {v1, v2} = Odd(W₀): both marked Y, measured at π/2. One edge
        // inside W₀ and |W₀ ∩ Odd(W₀)| = 2 make parity (1 + 1 + 1) mod 2 = 1.
        assert_eq!(plan.pauli, alloc::vec![PauliMark::Y, PauliMark::Y, PauliMark::Identity]);
        assert_eq!(
            plan.angles,
            alloc::vec![Some(core::f64::consts::FRAC_PI_2), Some(core::f64::consts::FRAC_PI_2), None]
        );
        assert_eq!(plan.forbidden_parity, 1);
    }

    #[test]
    fn witness_rejects_foreign_sets() {
        let g = OpenGraph::new(1).unwrap();
        let w0 = internal_sets(&g).unwrap()[0];
        assert!(make_witness(&path(2), &w0).is_err());
    }

    #[test]
    fn distinguishing_witness_on_isolated_input() {
        let mut g = OpenGraph::new(1).unwrap();
        g.set_inputs(VertexSet::singleton(0)).unwrap();
        let w0 = strongly_internal_sets(&g).unwrap()[0];
        let (a, b) = make_distinguishing_witness(&g, &w0).unwrap();
        // u₀ = the vertex itself lies in W₀, so the pair is |+⟩ / |−⟩.
        assert_eq!(a.input_states, alloc::vec![Some(InputState::Plus)]);
        assert_eq!(b.input_states, alloc::vec![Some(InputState::Minus)]);
        assert_eq!(a.forbidden_parity, 1);
        assert_eq!(b.forbidden_parity, 0);
        assert_eq!(a.angles, b.angles);
        assert_eq!(a.pauli, b.pauli);
    }

    #[test]
    fn distinguishing_witness_on_neighboring_input() {
        // Edge i–x with I = {i}, O = ∅: W₀ = {x} is strongly internal via
        // Odd({x}) = {i}, and u₀ = i sits outside W₀ → |0⟩ / |1⟩ pair.
        let mut g = OpenGraph::from_edges(2, &[(0, 1)]).unwrap();
        g.set_inputs(VertexSet::singleton(0)).unwrap();
        let w0 = StronglyInternalSet::new(&g, VertexSet::singleton(1)).unwrap();
        let (a, b) = make_distinguishing_witness(&g, &w0).unwrap();
        assert_eq!(a.input_states, alloc::vec![Some(InputState::Zero), None]);
        assert_eq!(b.input_states, alloc::vec![Some(InputState::One), None]);
        assert_eq!(a.pauli, alloc::vec![PauliMark::Identity, PauliMark::X]);
        assert_eq!(b.forbidden_parity, a.forbidden_parity ^ 1);
    }

    #[test]
    fn distinguishing_witness_rejects_weak_sets() {
        let g = triangle_one_output();
        let internal = internal_sets(&g).unwrap()[0];
        assert!(StronglyInternalSet::new(&g, internal.set()).is_err());
    }
}
