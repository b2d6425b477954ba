//! Exact dense state-vector simulation of measurement-based computations on
//! open graphs: preparation, planar measurements with Pauli corrections,
//! branch maps, and branch probabilities. This is the numerical oracle the
//! combinatorial verdicts are checked against.
//!
//! Conventions, fixed once for the whole crate:
//! - A register is an ascending vertex list; the first (lowest-index) vertex
//!   is the most significant bit of the amplitude index.
//! - |+_α⟩ = (|0⟩ + e^{iα}|1⟩)/√2; measuring at angle α with outcome s
//!   projects onto ⟨+_{α+sπ}| = (⟨0| + (−1)^s e^{−iα}⟨1|)/√2.
//! - On outcome 1 at u, the correction applies X to every vertex of 𝚡(u),
//!   then Z to every vertex of 𝚣(u), then flips the global sign when the
//!   number of graph edges inside 𝚡(u) is odd. The sign makes the correction
//!   the exact stabilizer product of the corrected vertices, so deterministic
//!   branch maps agree exactly instead of up to phase.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// Brings sqrt/powi/abs to f64 under no_std; the std test build has them
// inherently, so the import looks idle there.
#[allow(unused_imports)]
use num_traits::Float;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::classify::{InputState, WitnessPlan};
use crate::error::{Error, Result};
use crate::flow::{verify_gflow, GFlow};
use crate::graph::{OpenGraph, VertexSet};
use crate::{DEFAULT_SEED, MAX_SIM_QUBITS};

const SQRT_HALF: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// A pure state on a register of named qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// A state over the given ascending qubit list; amplitude length must be
    /// 2^{#qubits}.
    pub fn new(qubits: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if qubits.len() > MAX_SIM_QUBITS {
            return Err(Error::CapExceeded {
                what: "simulated qubits",
                limit: MAX_SIM_QUBITS,
                requested: qubits.len(),
            });
        }
        if !qubits.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::dimension("state qubit labels must be strictly ascending"));
        }
        if amplitudes.len() != 1usize << qubits.len() {
            return Err(Error::dimension("amplitude count must be 2^{#qubits}"));
        }
        Ok(StateVector { qubits, amplitudes })
    }

    /// The computational basis state |index⟩ (first qubit = most significant
    /// bit).
    pub fn basis_state(qubits: Vec<usize>, index: usize) -> Result<Self> {
        let mut amplitudes = vec![Complex64::ZERO; 1usize << qubits.len()];
        if index >= amplitudes.len() {
            return Err(Error::dimension("basis index out of range"));
        }
        amplitudes[index] = Complex64::ONE;
        StateVector::new(qubits, amplitudes)
    }

    /// The empty register: a single scalar amplitude 1.
    pub fn scalar_one() -> Self {
        StateVector { qubits: Vec::new(), amplitudes: vec![Complex64::ONE] }
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn position_of(&self, v: usize) -> Option<usize> {
        self.qubits.iter().position(|&q| q == v)
    }

    fn bit_mask(&self, position: usize) -> usize {
        1usize << (self.qubits.len() - 1 - position)
    }

    fn apply_x(&mut self, v: usize) {
        let mask = self.bit_mask(self.position_of(v).expect("X target must be present"));
        for x in 0..self.amplitudes.len() {
            if x & mask == 0 {
                self.amplitudes.swap(x, x | mask);
            }
        }
    }

    fn apply_z(&mut self, v: usize) {
        let mask = self.bit_mask(self.position_of(v).expect("Z target must be present"));
        for x in 0..self.amplitudes.len() {
            if x & mask != 0 {
                self.amplitudes[x] = -self.amplitudes[x];
            }
        }
    }

    fn negate(&mut self) {
        for a in &mut self.amplitudes {
            *a = -*a;
        }
    }

    /// Projects qubit `v` onto ⟨+_{α+sπ}|, removing it from the register.
    /// The result is sub-normalized; its squared norm is the branch
    /// probability weight.
    fn project(&self, v: usize, alpha: f64, outcome: u8) -> StateVector {
        let pos = self.position_of(v).expect("projection target must be present");
        let nq = self.qubits.len();
        let mut qubits = self.qubits.clone();
        qubits.remove(pos);
        let sign = if outcome == 0 { 1.0 } else { -1.0 };
        let phase = Complex64::new(alpha.cos(), -alpha.sin()) * sign;
        let low = (1usize << (nq - 1 - pos)) - 1;
        let mut amplitudes = vec![Complex64::ZERO; 1usize << (nq - 1)];
        for (y, out) in amplitudes.iter_mut().enumerate() {
            let x0 = ((y & !low) << 1) | (y & low);
            let x1 = x0 | (1usize << (nq - 1 - pos));
            *out = (self.amplitudes[x0] + phase * self.amplitudes[x1]) * SQRT_HALF;
        }
        StateVector { qubits, amplitudes }
    }
}

/// A random unit state on the register, amplitudes drawn component-wise then
/// normalized.
pub fn random_unit_state(qubits: Vec<usize>, rng: &mut ChaCha12Rng) -> Result<StateVector> {
    let len = 1usize << qubits.len();
    let mut amplitudes = Vec::with_capacity(len);
    for _ in 0..len {
        amplitudes.push(Complex64::new(uniform(rng) * 2.0 - 1.0, uniform(rng) * 2.0 - 1.0));
    }
    let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amplitudes {
        *a /= norm;
    }
    StateVector::new(qubits, amplitudes)
}

fn uniform(rng: &mut ChaCha12Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn uniform_angle(rng: &mut ChaCha12Rng) -> f64 {
    uniform(rng) * 2.0 * core::f64::consts::PI
}

/// The preparation map: |+⟩ on every non-input tensored with the input state,
/// then a controlled-Z phase per edge.
pub fn prepare(graph: &OpenGraph, input_state: &StateVector) -> Result<StateVector> {
    let n = graph.n();
    if n > MAX_SIM_QUBITS {
        return Err(Error::CapExceeded {
            what: "simulated qubits",
            limit: MAX_SIM_QUBITS,
            requested: n,
        });
    }
    let inputs: Vec<usize> = graph.inputs().iter().collect();
    if input_state.qubits() != &inputs[..] {
        return Err(Error::dimension("input state must live on exactly the input vertices"));
    }
    let k = inputs.len();
    let norm = SQRT_HALF.powi((n - k) as i32);
    let mut amplitudes = vec![Complex64::ZERO; 1usize << n];
    for (x, amp) in amplitudes.iter_mut().enumerate() {
        let mut xi = 0usize;
        for &v in &inputs {
            xi = (xi << 1) | ((x >> (n - 1 - v)) & 1);
        }
        *amp = input_state.amplitudes()[xi] * norm;
    }
    for (a, b) in graph.edges() {
        let mask = (1usize << (n - 1 - a)) | (1usize << (n - 1 - b));
        for (x, amp) in amplitudes.iter_mut().enumerate() {
            if x & mask == mask {
                *amp = -*amp;
            }
        }
    }
    StateVector::new((0..n).collect(), amplitudes)
}

/// Angles, corrective maps, and a measurement order for the non-output
/// vertices. Entries at output vertices are ignored except that their
/// corrective sets must stay empty.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementPlan {
    pub angles: Vec<f64>,
    pub x: Vec<VertexSet>,
    pub z: Vec<VertexSet>,
    pub order: Vec<usize>,
}

impl MeasurementPlan {
    /// All angles zero, no corrections, measurement in ascending vertex
    /// order.
    pub fn zero_corrections(graph: &OpenGraph) -> Self {
        let n = graph.n();
        MeasurementPlan {
            angles: vec![0.0; n],
            x: vec![VertexSet::EMPTY; n],
            z: vec![VertexSet::EMPTY; n],
            order: graph.output_complement().iter().collect(),
        }
    }

    /// Checks shape, that the order measures exactly the non-outputs, and
    /// that every correction targets only vertices still unmeasured when it
    /// fires.
    pub fn validate(&self, graph: &OpenGraph) -> Result<()> {
        let n = graph.n();
        if self.angles.len() != n || self.x.len() != n || self.z.len() != n {
            return Err(Error::dimension("plan entries must cover every vertex"));
        }
        let mut seen = VertexSet::EMPTY;
        for &u in &self.order {
            if u >= n || seen.contains(u) {
                return Err(Error::precondition("measurement order repeats or exceeds the vertex range"));
            }
            seen = seen.with(u);
        }
        if seen != graph.output_complement() {
            return Err(Error::precondition("measurement order must cover exactly the non-output vertices"));
        }
        let mut measured = VertexSet::EMPTY;
        for &u in &self.order {
            measured = measured.with(u);
            let targets = self.x[u] | self.z[u];
            if !targets.is_subset_of(graph.vertices()) {
                return Err(Error::precondition("correction targets an unknown vertex"));
            }
            if targets.intersects(measured) {
                return Err(Error::precondition("correction targets an already-measured vertex"));
            }
        }
        for v in graph.outputs().iter() {
            if !(self.x[v] | self.z[v]).is_empty() {
                return Err(Error::precondition("output vertices carry no corrections"));
            }
        }
        Ok(())
    }
}

/// The standard corrective maps of a gflow: 𝚡(u) = g(u), 𝚣(u) = Odd(g(u)) ∖
/// {u}, measured in descending layer order. Angles are left at zero for the
/// caller to fill in. Accepts any valid gflow — focused or not.
pub fn corrections_from_gflow(graph: &OpenGraph, flow: &GFlow) -> Result<MeasurementPlan> {
    if !verify_gflow(graph, flow) {
        return Err(Error::precondition("corrective maps require a valid gflow for this graph"));
    }
    let n = graph.n();
    let mut plan = MeasurementPlan {
        angles: vec![0.0; n],
        x: vec![VertexSet::EMPTY; n],
        z: vec![VertexSet::EMPTY; n],
        order: flow.measurement_order(),
    };
    for u in graph.output_complement().iter() {
        let gu = flow.correction_set(u).expect("measured vertices carry correction sets");
        plan.x[u] = gu;
        plan.z[u] = graph.odd_neighborhood(gu).without(u);
    }
    plan.validate(graph)?;
    Ok(plan)
}

/// One measurement branch: the linear map the branch applies to the input
/// register, as a dense 2^{|O|} × 2^{|I|} matrix (row-major), and the branch
/// probability under the maximally mixed input (the average over the
/// computational basis columns).
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub matrix: Vec<Complex64>,
    pub probability: f64,
}

/// All 2^{#measured} branches of a plan. Outcome strings are indexed with
/// the first-measured vertex as the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchTable {
    measured: Vec<usize>,
    outputs: Vec<usize>,
    input_count: usize,
    branches: Vec<Branch>,
}

impl BranchTable {
    /// Measurement order; outcome bit j of a branch index belongs to
    /// `measured()[j]`, most significant first.
    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn input_count(&self) -> usize {
        self.input_count
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn rows(&self) -> usize {
        1usize << self.outputs.len()
    }

    pub fn cols(&self) -> usize {
        1usize << self.input_count
    }

    /// Branch probabilities ‖χ_s φ‖² for a specific input state.
    pub fn probabilities_for(&self, input: &StateVector) -> Result<Vec<f64>> {
        if input.amplitudes().len() != self.cols() {
            return Err(Error::dimension("input dimension does not match the branch maps"));
        }
        let phi = input.amplitudes();
        Ok(self
            .branches
            .iter()
            .map(|b| {
                (0..self.rows())
                    .map(|r| {
                        let mut acc = Complex64::ZERO;
                        for (c, amp) in phi.iter().enumerate() {
                            acc += b.matrix[r * self.cols() + c] * amp;
                        }
                        acc.norm_sqr()
                    })
                    .sum::<f64>()
            })
            .collect())
    }
}

/// Runs every branch of the plan on a fixed input state, sharing prefixes.
/// Entry s holds the sub-normalized output-register state of outcome string
/// s (plan order, first measured = most significant bit); ‖·‖² is the branch
/// probability.
pub fn run_branch_states(
    graph: &OpenGraph,
    plan: &MeasurementPlan,
    input: &StateVector,
) -> Result<Vec<StateVector>> {
    plan.validate(graph)?;
    let prepared = prepare(graph, input)?;
    let mut out = Vec::with_capacity(1usize << plan.order.len());
    descend(graph, plan, 0, prepared, &mut out);
    Ok(out)
}

fn descend(
    graph: &OpenGraph,
    plan: &MeasurementPlan,
    depth: usize,
    state: StateVector,
    out: &mut Vec<StateVector>,
) {
    if depth == plan.order.len() {
        out.push(state);
        return;
    }
    let u = plan.order[depth];
    descend(graph, plan, depth + 1, state.project(u, plan.angles[u], 0), out);
    let mut flipped = state.project(u, plan.angles[u], 1);
    for v in plan.x[u].iter() {
        flipped.apply_x(v);
    }
    for v in plan.z[u].iter() {
        flipped.apply_z(v);
    }
    if graph.edges_within(plan.x[u]) % 2 == 1 {
        flipped.negate();
    }
    descend(graph, plan, depth + 1, flipped, out);
}

/// Branch probabilities for one input state, indexed like `run_branch_states`.
pub fn branch_probabilities(
    graph: &OpenGraph,
    plan: &MeasurementPlan,
    input: &StateVector,
) -> Result<Vec<f64>> {
    Ok(run_branch_states(graph, plan, input)?.iter().map(StateVector::norm_sq).collect())
}

/// Assembles every branch map column-by-column from the computational basis
/// states of the input register.
pub fn run_branches(graph: &OpenGraph, plan: &MeasurementPlan) -> Result<BranchTable> {
    plan.validate(graph)?;
    let inputs: Vec<usize> = graph.inputs().iter().collect();
    let outputs: Vec<usize> = graph.outputs().iter().collect();
    let cols = 1usize << inputs.len();
    let rows = 1usize << outputs.len();
    let branch_count = 1usize << plan.order.len();
    let mut branches = vec![Branch { matrix: vec![Complex64::ZERO; rows * cols], probability: 0.0 }; branch_count];
    for c in 0..cols {
        let column = StateVector::basis_state(inputs.clone(), c)?;
        let states = run_branch_states(graph, plan, &column)?;
        for (s, state) in states.iter().enumerate() {
            debug_assert_eq!(state.qubits(), &outputs[..]);
            for (r, amp) in state.amplitudes().iter().enumerate() {
                branches[s].matrix[r * cols + c] = *amp;
            }
            branches[s].probability += state.norm_sq() / cols as f64;
        }
    }
    Ok(BranchTable { measured: plan.order.clone(), outputs, input_count: inputs.len(), branches })
}

const EXACT_TOL: f64 = 1e-9;

/// True when every branch map equals the all-zero branch exactly (within
/// 1e−9, no per-branch phase allowance) and the common map, rescaled by
/// √(2^{#measured}), is an isometry. Returns the verdict and the largest
/// residual of the two checks (Frobenius norms).
pub fn check_strong_determinism(table: &BranchTable) -> (bool, f64) {
    let rows = table.rows();
    let cols = table.cols();
    let reference = &table.branches[0].matrix;
    let mut residual = 0.0f64;
    for branch in &table.branches {
        let diff: f64 =
            branch.matrix.iter().zip(reference).map(|(a, b)| (a - b).norm_sqr()).sum();
        residual = residual.max(diff.sqrt());
    }
    let scale = 2.0f64.powi(table.measured.len() as i32);
    let mut iso = 0.0f64;
    for i in 0..cols {
        for j in 0..cols {
            let mut acc = Complex64::ZERO;
            for r in 0..rows {
                acc += reference[r * cols + i].conj() * reference[r * cols + j];
            }
            acc *= scale;
            let expected = if i == j { Complex64::ONE } else { Complex64::ZERO };
            iso += (acc - expected).norm_sqr();
        }
    }
    let residual = residual.max(iso.sqrt());
    (residual <= EXACT_TOL, residual)
}

/// Samples random angle vectors and random unit inputs; true when every
/// branch probability stays within `tol` of 1/2^{#measured}. Corrections are
/// irrelevant to uniform probabilities and are left empty.
pub fn check_equiprobability(graph: &OpenGraph, trials: usize, tol: f64) -> Result<bool> {
    check_equiprobability_seeded(graph, trials, tol, DEFAULT_SEED)
}

pub fn check_equiprobability_seeded(
    graph: &OpenGraph,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<bool> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut plan = MeasurementPlan::zero_corrections(graph);
    let inputs: Vec<usize> = graph.inputs().iter().collect();
    let target = 0.5f64.powi(plan.order.len() as i32);
    for _ in 0..trials {
        for &u in &plan.order.clone() {
            plan.angles[u] = uniform_angle(&mut rng);
        }
        let input = random_unit_state(inputs.clone(), &mut rng)?;
        let probs = branch_probabilities(graph, &plan, &input)?;
        if probs.iter().any(|p| (p - target).abs() > tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Samples random angle vectors; for each, compares branch probabilities
/// across every computational basis input plus two random unit inputs. True
/// when the per-branch variance over that input batch never exceeds `tol`.
pub fn check_constant_probability(graph: &OpenGraph, trials: usize, tol: f64) -> Result<bool> {
    check_constant_probability_seeded(graph, trials, tol, DEFAULT_SEED)
}

pub fn check_constant_probability_seeded(
    graph: &OpenGraph,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<bool> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut plan = MeasurementPlan::zero_corrections(graph);
    let inputs: Vec<usize> = graph.inputs().iter().collect();
    let branch_count = 1usize << plan.order.len();
    for _ in 0..trials {
        for &u in &plan.order.clone() {
            plan.angles[u] = uniform_angle(&mut rng);
        }
        let mut batch: Vec<StateVector> = Vec::new();
        for c in 0..(1usize << inputs.len()) {
            batch.push(StateVector::basis_state(inputs.clone(), c)?);
        }
        batch.push(random_unit_state(inputs.clone(), &mut rng)?);
        batch.push(random_unit_state(inputs.clone(), &mut rng)?);
        let per_input: Vec<Vec<f64>> = batch
            .iter()
            .map(|input| branch_probabilities(graph, &plan, input))
            .collect::<Result<_>>()?;
        for s in 0..branch_count {
            let mean = per_input.iter().map(|p| p[s]).sum::<f64>() / per_input.len() as f64;
            let variance = per_input.iter().map(|p| (p[s] - mean) * (p[s] - mean)).sum::<f64>()
                / per_input.len() as f64;
            if variance > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The product input state a witness plan asks for.
pub fn witness_input_state(graph: &OpenGraph, plan: &WitnessPlan) -> Result<StateVector> {
    let inputs: Vec<usize> = graph.inputs().iter().collect();
    let mut amplitudes = vec![Complex64::ONE];
    for &v in &inputs {
        let state = plan.input_states[v]
            .ok_or_else(|| Error::precondition("witness plan must assign every input a state"))?;
        let (zero, one) = match state {
            InputState::Plus => (SQRT_HALF, SQRT_HALF),
            InputState::Minus => (SQRT_HALF, -SQRT_HALF),
            InputState::Zero => (1.0, 0.0),
            InputState::One => (0.0, 1.0),
        };
        let mut next = Vec::with_capacity(amplitudes.len() * 2);
        for a in &amplitudes {
            next.push(a * zero);
            next.push(a * one);
        }
        amplitudes = next;
    }
    StateVector::new(inputs, amplitudes)
}

/// Runs a witness plan (its angles, its input states, no corrections,
/// ascending measurement order) and returns the total probability of the
/// outcome strings whose parity over the plan's support equals the forbidden
/// parity. A sound witness drives this to zero; a uniformly equiprobable
/// computation pins it at 1/2.
pub fn witness_forbidden_probability(graph: &OpenGraph, plan: &WitnessPlan) -> Result<f64> {
    let mut measurement = MeasurementPlan::zero_corrections(graph);
    for &u in &measurement.order.clone() {
        measurement.angles[u] = plan.angles[u]
            .ok_or_else(|| Error::precondition("witness plan must assign every measured vertex an angle"))?;
    }
    let input = witness_input_state(graph, plan)?;
    let probs = branch_probabilities(graph, &measurement, &input)?;
    let m = measurement.order.len();
    let mut total = 0.0;
    for (s, p) in probs.iter().enumerate() {
        let mut parity = 0u8;
        for (j, &u) in measurement.order.iter().enumerate() {
            if plan.parity_support.contains(u) {
                parity ^= ((s >> (m - 1 - j)) & 1) as u8;
            }
        }
        if parity == plan.forbidden_parity {
            total += p;
        }
    }
    Ok(total)
}
