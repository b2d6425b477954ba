//! Input/output placement search on bare graphs.
//!
//! Given a graph with no roles assigned, which vertex sets can serve as
//! inputs and outputs of an equiprobable (equivalently, for equal sizes,
//! strongly deterministic) computation? The answer is a transversal
//! condition: I must hit every violating set of ℰ_∅, and O every violating
//! set of ℰ_I. This module materializes the collections, enumerates
//! transversals and full placements, and quotients results by the graph's
//! automorphisms.

use alloc::vec::Vec;

use crate::classify::{classify, enumerate_violating};
use crate::error::{Error, Result};
use crate::flow::find_gflow;
use crate::graph::{OpenGraph, VertexSet};
use crate::{DEFAULT_ENUM_CAP, MAX_AUT_VERTICES};

/// The collection ℰ_A: all nonempty S whose odd neighborhood is contained in
/// S ∪ A. Inputs must intersect every member of ℰ_∅, outputs every member of
/// ℰ_I.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolatingCollection {
    base: VertexSet,
    sets: Vec<VertexSet>,
}

impl ViolatingCollection {
    /// The base set A the collection was computed against.
    pub fn base(&self) -> VertexSet {
        self.base
    }

    /// Members ascending by size then lexicographically.
    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }
}

/// An input/output assignment found by the placement search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IoPlacement {
    pub inputs: VertexSet,
    pub outputs: VertexSet,
    pub has_gflow: bool,
}

/// Computes ℰ_A over the whole vertex set (the graph's own I/O roles are
/// ignored — this is a bare-graph notion).
pub fn violating_collection(graph: &OpenGraph, a: VertexSet) -> Result<ViolatingCollection> {
    violating_collection_with_cap(graph, a, DEFAULT_ENUM_CAP)
}

pub fn violating_collection_with_cap(
    graph: &OpenGraph,
    a: VertexSet,
    cap: usize,
) -> Result<ViolatingCollection> {
    let sets = enumerate_violating(graph, graph.vertices(), a, cap)?;
    Ok(ViolatingCollection { base: a, sets })
}

/// True when `s` intersects every member of the collection.
pub fn is_transversal(s: VertexSet, collection: &ViolatingCollection) -> bool {
    collection.sets.iter().all(|&member| s.intersects(member))
}

/// All inclusion-minimal transversals of the collection with at most
/// `size_cap` vertices, ascending by size then lexicographically. An empty
/// collection has the empty set as its unique minimal transversal.
pub fn minimal_transversals(collection: &ViolatingCollection, size_cap: usize) -> Vec<VertexSet> {
    let mut covers: Vec<VertexSet> = Vec::new();
    branch_covers(&collection.sets, VertexSet::EMPTY, size_cap, &mut covers);
    covers.sort_by_key(|s| s.popcount_lex_key());
    covers.dedup();
    // The branching can emit non-minimal covers; drop anything containing an
    // earlier (hence no-larger) cover.
    let mut minimal: Vec<VertexSet> = Vec::new();
    for cover in covers {
        if !minimal.iter().any(|&kept| kept.is_subset_of(cover)) {
            minimal.push(cover);
        }
    }
    minimal
}

/// Branch on the elements of the first uncovered set; every minimal cover of
/// size ≤ `budget` appears among the leaves.
fn branch_covers(sets: &[VertexSet], chosen: VertexSet, budget: usize, out: &mut Vec<VertexSet>) {
    match sets.iter().find(|&&s| !chosen.intersects(s)) {
        None => out.push(chosen),
        Some(&uncovered) => {
            if chosen.len() >= budget {
                return;
            }
            for v in uncovered.iter() {
                branch_covers(sets, chosen.with(v), budget, out);
            }
        }
    }
}

fn k_subsets(n: usize, k: usize) -> Vec<VertexSet> {
    let mut out = Vec::new();
    let mut current = VertexSet::EMPTY;
    fn rec(next: usize, n: usize, left: usize, current: &mut VertexSet, out: &mut Vec<VertexSet>) {
        if left == 0 {
            out.push(*current);
            return;
        }
        for v in next..=(n - left) {
            *current = current.with(v);
            rec(v + 1, n, left - 1, current, out);
            *current = current.without(v);
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Finds every (I, O) with |I| = |O| = k making the bare graph an
/// equiprobable (hence, at equal sizes, strongly deterministic) open graph:
/// I ∈ T(ℰ_∅), O ∈ T(ℰ_I), and — checked rather than assumed — a gflow
/// exists. Results ascend lexicographically by (inputs, outputs).
pub fn choose_io(graph: &OpenGraph, k: usize) -> Result<Vec<IoPlacement>> {
    choose_io_with_cap(graph, k, DEFAULT_ENUM_CAP)
}

pub fn choose_io_with_cap(graph: &OpenGraph, k: usize, cap: usize) -> Result<Vec<IoPlacement>> {
    let n = graph.n();
    if k > n {
        return Err(Error::CapExceeded { what: "placement size", limit: n, requested: k });
    }
    let e_empty = violating_collection_with_cap(graph, VertexSet::EMPTY, cap)?;
    let candidates = k_subsets(n, k);
    let mut placements = Vec::new();
    for &inputs in &candidates {
        if !is_transversal(inputs, &e_empty) {
            continue;
        }
        let e_inputs = violating_collection_with_cap(graph, inputs, cap)?;
        for &outputs in &candidates {
            let transversal_ok = is_transversal(outputs, &e_inputs);
            let open = graph.clone().with_io(inputs, outputs)?;
            let gflow_ok = find_gflow(&open).is_some();
            debug_assert_eq!(
                transversal_ok, gflow_ok,
                "transversal criterion and gflow search must agree at |I| = |O|"
            );
            if transversal_ok && gflow_ok {
                placements.push(IoPlacement { inputs, outputs, has_gflow: true });
            }
        }
    }
    Ok(placements)
}

/// All automorphisms of the graph (as permutation arrays), found by
/// backtracking on adjacency-consistent partial mappings. Identity first.
pub fn automorphisms(graph: &OpenGraph) -> Result<Vec<Vec<usize>>> {
    let n = graph.n();
    if n > MAX_AUT_VERTICES {
        return Err(Error::CapExceeded {
            what: "automorphism search",
            limit: MAX_AUT_VERTICES,
            requested: n,
        });
    }
    let mut perm: Vec<usize> = alloc::vec![0; n];
    let mut used = VertexSet::EMPTY;
    let mut found: Vec<Vec<usize>> = Vec::new();
    fn extend(
        graph: &OpenGraph,
        depth: usize,
        perm: &mut Vec<usize>,
        used: &mut VertexSet,
        found: &mut Vec<Vec<usize>>,
    ) {
        let n = graph.n();
        if depth == n {
            found.push(perm.clone());
            return;
        }
        for image in 0..n {
            if used.contains(image) || graph.degree(image) != graph.degree(depth) {
                continue;
            }
            let consistent = (0..depth)
                .all(|earlier| graph.has_edge(depth, earlier) == graph.has_edge(image, perm[earlier]));
            if consistent {
                perm[depth] = image;
                *used = used.with(image);
                extend(graph, depth + 1, perm, used, found);
                *used = used.without(image);
            }
        }
    }
    extend(graph, 0, &mut perm, &mut used, &mut found);
    found.sort();
    Ok(found)
}

fn apply(perm: &[usize], s: VertexSet) -> VertexSet {
    VertexSet::from_indices(s.iter().map(|v| perm[v]))
}

fn pair_key(p: &IoPlacement) -> ((u32, u64), (u32, u64)) {
    (p.inputs.popcount_lex_key(), p.outputs.popcount_lex_key())
}

/// Lexicographically least automorphic image of the (I, O) pair.
fn canonical_placement(auts: &[Vec<usize>], p: &IoPlacement) -> IoPlacement {
    auts.iter()
        .map(|perm| IoPlacement {
            inputs: apply(perm, p.inputs),
            outputs: apply(perm, p.outputs),
            has_gflow: p.has_gflow,
        })
        .min_by_key(pair_key)
        .expect("the identity automorphism always exists")
}

/// One representative per orbit of the automorphism group acting on (I, O)
/// pairs: the lexicographically least image. Ascending by representative.
pub fn dedupe_by_symmetry(
    graph: &OpenGraph,
    placements: &[IoPlacement],
) -> Result<Vec<IoPlacement>> {
    let auts = automorphisms(graph)?;
    let mut reps: Vec<IoPlacement> = Vec::new();
    for p in placements {
        let rep = canonical_placement(&auts, p);
        if !reps.contains(&rep) {
            reps.push(rep);
        }
    }
    reps.sort_by_key(pair_key);
    Ok(reps)
}

/// One placement per orbit of the automorphism group acting on the input set
/// alone — the coarser "solutions up to symmetry" view in which placements
/// sharing an input class count once. Each class is represented by its
/// lexicographically least placement (after pair canonicalization).
pub fn input_orbit_representatives(
    graph: &OpenGraph,
    placements: &[IoPlacement],
) -> Result<Vec<IoPlacement>> {
    let auts = automorphisms(graph)?;
    let mut classes: Vec<((u32, u64), IoPlacement)> = Vec::new();
    for p in placements {
        let input_key = auts
            .iter()
            .map(|perm| apply(perm, p.inputs).popcount_lex_key())
            .min()
            .expect("the identity automorphism always exists");
        let rep = canonical_placement(&auts, p);
        match classes.iter_mut().find(|(key, _)| *key == input_key) {
            None => classes.push((input_key, rep)),
            Some((_, best)) => {
                if pair_key(&rep) < pair_key(best) {
                    *best = rep;
                }
            }
        }
    }
    classes.sort_by_key(|(key, _)| *key);
    Ok(classes.into_iter().map(|(_, p)| p).collect())
}

/// Shrinking inputs and growing outputs preserves equiprobability; this
/// recomputes the verdict for (G, i2, o2) so sweeps can assert the lemma.
pub fn monotonicity_check(graph: &OpenGraph, i2: VertexSet, o2: VertexSet) -> Result<bool> {
    if !i2.is_subset_of(graph.inputs()) {
        return Err(Error::precondition("monotonicity check requires i2 ⊆ I"));
    }
    if !graph.outputs().is_subset_of(o2) {
        return Err(Error::precondition("monotonicity check requires O ⊆ o2"));
    }
    let moved = graph.clone().with_io(i2, o2)?;
    Ok(classify(&moved)?.equiprobable)
}
