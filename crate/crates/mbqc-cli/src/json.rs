//! Serializable views of the core types. Every report names vertices by
//! label, never by internal index.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use mbqc_core::classify::{ClassificationReport, InputState, PauliMark, WitnessPlan};
use mbqc_core::flow::FocusedGFlow;
use mbqc_core::sim::{BranchTable, MeasurementPlan};
use mbqc_core::{OpenGraph, VertexSet};

pub fn labels_of(graph: &OpenGraph, set: VertexSet) -> Vec<String> {
    set.iter().map(|v| graph.label(v).to_string()).collect()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphDto {
    pub n: usize,
    pub labels: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl GraphDto {
    pub fn from_graph(g: &OpenGraph) -> Self {
        GraphDto {
            n: g.n(),
            labels: g.labels().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|&(a, b)| [g.label(a).to_string(), g.label(b).to_string()])
                .collect(),
            inputs: labels_of(g, g.inputs()),
            outputs: labels_of(g, g.outputs()),
        }
    }

    /// Rebuilds the graph by round-tripping through the text format, so the
    /// JSON schema and the file format stay interchangeable.
    pub fn to_graph(&self) -> Result<OpenGraph, mbqc_core::Error> {
        let mut text = String::new();
        text.push_str("vertices:");
        for l in &self.labels {
            text.push(' ');
            text.push_str(l);
        }
        text.push('\n');
        for [a, b] in &self.edges {
            text.push_str(&format!("edge: {a} {b}\n"));
        }
        text.push_str(&format!("inputs: {}\n", self.inputs.join(" ")));
        text.push_str(&format!("outputs: {}\n", self.outputs.join(" ")));
        OpenGraph::parse(&text)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FlowDto {
    pub g: BTreeMap<String, Vec<String>>,
    pub layers: BTreeMap<String, usize>,
}

impl FlowDto {
    pub fn from_flow(graph: &OpenGraph, flow: &FocusedGFlow) -> Self {
        let mut g = BTreeMap::new();
        let mut layers = BTreeMap::new();
        for v in 0..graph.n() {
            layers.insert(graph.label(v).to_string(), flow.layer(v));
            if let Some(set) = flow.correction_set(v) {
                g.insert(graph.label(v).to_string(), labels_of(graph, set));
            }
        }
        FlowDto { g, layers }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ReportDto {
    pub has_gflow: bool,
    pub equiprobable: bool,
    pub constant_probability: bool,
    pub gflow: Option<FlowDto>,
    pub internal_sets: Vec<Vec<String>>,
    pub strongly_internal_sets: Vec<Vec<String>>,
    pub notes: String,
}

impl ReportDto {
    pub fn from_report(graph: &OpenGraph, report: &ClassificationReport) -> Self {
        ReportDto {
            has_gflow: report.has_gflow,
            equiprobable: report.equiprobable,
            constant_probability: report.constant_probability,
            gflow: report.gflow.as_ref().map(|f| FlowDto::from_flow(graph, f)),
            internal_sets: report.internal_sets.iter().map(|w| labels_of(graph, w.set())).collect(),
            strongly_internal_sets: report
                .strongly_internal_sets
                .iter()
                .map(|w| labels_of(graph, w.set()))
                .collect(),
            notes: report.notes.clone(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SimCheckDto {
    pub trials: usize,
    pub equiprobable: bool,
    pub constant_probability: bool,
    pub strong_determinism_residual: Option<f64>,
    pub agrees_with_classification: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AnalyzeDto {
    pub graph: GraphDto,
    pub report: ReportDto,
    pub sim_check: Option<SimCheckDto>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PlacementDto {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub has_gflow: bool,
    pub representative: bool,
    pub class: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ChooseIoDto {
    pub k: usize,
    pub raw_count: usize,
    pub all_orbits: bool,
    pub placements: Vec<PlacementDto>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct WitnessDto {
    pub paulis: BTreeMap<String, String>,
    pub input_states: BTreeMap<String, String>,
    pub angles: BTreeMap<String, f64>,
    pub parity_support: Vec<String>,
    pub forbidden_parity: u8,
}

impl WitnessDto {
    pub fn from_plan(graph: &OpenGraph, plan: &WitnessPlan) -> Self {
        let mut paulis = BTreeMap::new();
        let mut input_states = BTreeMap::new();
        let mut angles = BTreeMap::new();
        for v in 0..graph.n() {
            let label = graph.label(v).to_string();
            paulis.insert(
                label.clone(),
                match plan.pauli[v] {
                    PauliMark::Identity => "I",
                    PauliMark::X => "X",
                    PauliMark::Y => "Y",
                }
                .to_string(),
            );
            if let Some(state) = plan.input_states[v] {
                input_states.insert(
                    label.clone(),
                    match state {
                        InputState::Plus => "plus",
                        InputState::Minus => "minus",
                        InputState::Zero => "zero",
                        InputState::One => "one",
                    }
                    .to_string(),
                );
            }
            if let Some(angle) = plan.angles[v] {
                angles.insert(label, angle);
            }
        }
        WitnessDto {
            paulis,
            input_states,
            angles,
            parity_support: labels_of(graph, plan.parity_support),
            forbidden_parity: plan.forbidden_parity,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct WitnessReportDto {
    pub mode: String,
    pub witnesses: Vec<WitnessDto>,
    pub forbidden_probabilities: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_dependence_gap: Option<f64>,
    pub tolerance: f64,
    pub confirmed: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PlanDto {
    pub angles: BTreeMap<String, f64>,
    pub x: BTreeMap<String, Vec<String>>,
    pub z: BTreeMap<String, Vec<String>>,
    pub order: Vec<String>,
}

impl PlanDto {
    pub fn from_plan(graph: &OpenGraph, plan: &MeasurementPlan) -> Self {
        let mut angles = BTreeMap::new();
        let mut x = BTreeMap::new();
        let mut z = BTreeMap::new();
        for &u in &plan.order {
            let label = graph.label(u).to_string();
            angles.insert(label.clone(), plan.angles[u]);
            x.insert(label.clone(), labels_of(graph, plan.x[u]));
            z.insert(label, labels_of(graph, plan.z[u]));
        }
        PlanDto {
            angles,
            x,
            z,
            order: plan.order.iter().map(|&u| graph.label(u).to_string()).collect(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BranchDto {
    pub outcomes: BTreeMap<String, u8>,
    pub probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TableDto {
    pub order: Vec<String>,
    pub rows: usize,
    pub cols: usize,
    pub branches: Vec<BranchDto>,
}

impl TableDto {
    pub fn from_table(graph: &OpenGraph, table: &BranchTable, with_matrices: bool) -> Self {
        let m = table.measured().len();
        let branches = table
            .branches()
            .iter()
            .enumerate()
            .map(|(s, branch)| {
                let mut outcomes = BTreeMap::new();
                for (j, &u) in table.measured().iter().enumerate() {
                    outcomes
                        .insert(graph.label(u).to_string(), ((s >> (m - 1 - j)) & 1) as u8);
                }
                BranchDto {
                    outcomes,
                    probability: branch.probability,
                    matrix: with_matrices.then(|| {
                        branch.matrix.iter().map(|c| [c.re, c.im]).collect()
                    }),
                }
            })
            .collect();
        TableDto {
            order: table.measured().iter().map(|&u| graph.label(u).to_string()).collect(),
            rows: table.rows(),
            cols: table.cols(),
            branches,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StrongDeterminismDto {
    pub holds: bool,
    pub residual: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SimulateDto {
    pub plan: PlanDto,
    pub used_gflow_corrections: bool,
    pub seed: u64,
    pub trials: usize,
    pub strong_determinism: Option<StrongDeterminismDto>,
    pub equiprobable: bool,
    pub constant_probability: bool,
    pub table: TableDto,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GflowDto {
    pub has_gflow: bool,
    pub gflow: Option<FlowDto>,
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
vertices: a b c d
edge: a b
edge: b c
edge: b d
inputs: a
outputs: c d
";

    #[test]
    fn graph_dto_round_trips_through_json() {
        let graph = OpenGraph::parse(SAMPLE).unwrap();
        let dto = GraphDto::from_graph(&graph);
        let text = serde_json::to_string(&dto).unwrap();
        let back: GraphDto = serde_json::from_str(&text).unwrap();
        let rebuilt = back.to_graph().unwrap();
        assert_eq!(rebuilt.labels(), graph.labels());
        assert_eq!(rebuilt.edges(), graph.edges());
        assert_eq!(rebuilt.inputs(), graph.inputs());
        assert_eq!(rebuilt.outputs(), graph.outputs());
    }

    #[test]
    fn label_lists_follow_ascending_vertex_order() {
        let graph = OpenGraph::parse(SAMPLE).unwrap();
        let set = VertexSet::from_indices([3usize, 1].into_iter());
        assert_eq!(labels_of(&graph, set), vec!["b".to_string(), "d".to_string()]);
    }
}
