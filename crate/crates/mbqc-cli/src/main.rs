//! `mbqc` — command-line front end for the open-graph measurement toolkit.
//!
//! Exit codes: 0 success, 2 unreadable/malformed input, 3 resource cap
//! exceeded, 4 requested witness does not exist.

mod json;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use mbqc_core::chooser::{self, IoPlacement};
use mbqc_core::classify::{classify_with_cap, make_distinguishing_witness, make_witness};
use mbqc_core::flow::{find_gflow, focus, focused_to_dag, FocusedGFlow};
use mbqc_core::sim::{
    check_constant_probability_seeded, check_equiprobability_seeded, check_strong_determinism,
    corrections_from_gflow, run_branches, witness_forbidden_probability, MeasurementPlan,
};
use mbqc_core::{Error, OpenGraph, VertexSet, DEFAULT_ENUM_CAP, DEFAULT_SEED};

use json::{
    AnalyzeDto, ChooseIoDto, FlowDto, GflowDto, GraphDto, PlacementDto, PlanDto, ReportDto,
    SimCheckDto, SimulateDto, StrongDeterminismDto, TableDto, WitnessDto, WitnessReportDto,
};

/// Variance tolerance for the sampled constant-probability check.
const VARIANCE_TOL: f64 = 1e-6;
/// Largest graph simulated automatically during `analyze`.
const ANALYZE_SIM_LIMIT: usize = 10;
/// Most branches listed in text output before eliding.
const TEXT_BRANCH_LIMIT: usize = 64;

#[derive(Parser)]
#[command(
    name = "mbqc",
    version,
    about = "Classify measurement computations on open graphs: gflow, equiprobability, constant probability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the graph, find a gflow, and cross-check with the simulator.
    Analyze(AnalyzeArgs),
    /// Classification report only (no simulation).
    Classify(ClassifyArgs),
    /// Find a focused gflow.
    Gflow(GflowArgs),
    /// Search input/output placements of a given size on a bare graph.
    ChooseIo(ChooseIoArgs),
    /// Build a witness measurement plan and confirm it numerically.
    Witness(WitnessArgs),
    /// Run the exact branch simulator and its determinism checks.
    Simulate(SimulateArgs),
    /// Export the graph in DOT format.
    ExportDot(ExportDotArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the graph file (text format, or the tool's graph JSON if the
    /// name ends in .json).
    #[arg(short, long)]
    graph: PathBuf,
    /// Emit machine-readable JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Seed for the randomized simulator checks.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Subset-enumeration cap (2^cap work ceiling).
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    cap: usize,
    /// Tolerance for exact-identity checks.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Subset-enumeration cap (2^cap work ceiling).
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    cap: usize,
}

#[derive(Args)]
struct GflowArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ChooseIoArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of inputs and outputs to place.
    #[arg(short)]
    k: usize,
    /// Subset-enumeration cap (2^cap work ceiling).
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    cap: usize,
    /// List every placement instead of one representative per symmetry class.
    #[arg(long)]
    all_orbits: bool,
}

#[derive(Args)]
struct WitnessArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Witness against uniform equiprobability (default).
    #[arg(long, conflicts_with = "constant")]
    equi: bool,
    /// Witness against uniform constant probability (a distinguishing pair).
    #[arg(long = "const")]
    constant: bool,
    /// Subset-enumeration cap (2^cap work ceiling).
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    cap: usize,
    /// Forbidden-branch probability must stay below this.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Seed for angles and random input states.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random trials per probabilistic check.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Tolerance for the equiprobability check.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Include the flattened branch matrices in JSON output (large).
    #[arg(long)]
    matrices: bool,
}

#[derive(Args)]
struct ExportDotArgs {
    /// Path to the graph description file.
    #[arg(short, long)]
    graph: PathBuf,
    /// Overlay a structure on the drawing.
    #[arg(long, value_parser = ["gflow"])]
    highlight: Option<String>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    NoWitness(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
            CliError::NoWitness(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("cannot encode JSON: {e}"))
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream pager closes the pipe, like other
    // line-oriented tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Gflow(args) => cmd_gflow(args),
        Command::ChooseIo(args) => cmd_choose_io(args),
        Command::Witness(args) => cmd_witness(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::ExportDot(args) => cmd_export_dot(args),
    }
}

fn load_graph(path: &Path) -> Result<OpenGraph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let graph = if path.extension().is_some_and(|ext| ext == "json") {
        let dto: GraphDto = serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("malformed graph JSON: {e}")))?;
        dto.to_graph()?
    } else {
        OpenGraph::parse(&text)?
    };
    if graph.n() > 32 {
        eprintln!(
            "warning: {} vertices; exhaustive set enumerations will hit the work caps",
            graph.n()
        );
    }
    Ok(graph)
}

fn set_text(graph: &OpenGraph, set: VertexSet) -> String {
    if set.is_empty() {
        return "{}".to_string();
    }
    format!("{{{}}}", json::labels_of(graph, set).join(", "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), CliError> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn uniform_angle(rng: &mut ChaCha12Rng) -> f64 {
    let unit = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    unit * 2.0 * std::f64::consts::PI
}

fn randomize_angles(plan: &mut MeasurementPlan, rng: &mut ChaCha12Rng) {
    for &u in &plan.order.clone() {
        plan.angles[u] = uniform_angle(rng);
    }
}

fn print_flow_text(graph: &OpenGraph, flow: &FocusedGFlow) {
    let depth = (0..graph.n()).map(|v| flow.layer(v)).max().unwrap_or(0);
    println!("gflow: present (depth {depth})");
    for u in flow.measurement_order() {
        println!(
            "  {} (layer {}): corrects {}",
            graph.label(u),
            flow.layer(u),
            set_text(graph, flow.correction_set(u).unwrap_or(VertexSet::EMPTY)),
        );
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.common.graph)?;
    let report = classify_with_cap(&graph, args.cap)?;
    let sim_check = if graph.n() <= ANALYZE_SIM_LIMIT {
        let trials = 8;
        let equi = check_equiprobability_seeded(&graph, trials, args.tol, args.seed)?;
        let constant = check_constant_probability_seeded(&graph, trials, VARIANCE_TOL, args.seed)?;
        let residual = match &report.gflow {
            Some(flow) => {
                let mut plan = corrections_from_gflow(&graph, flow.as_gflow())?;
                let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
                randomize_angles(&mut plan, &mut rng);
                let table = run_branches(&graph, &plan)?;
                let (_, residual) = check_strong_determinism(&table);
                Some(residual)
            }
            None => None,
        };
        let agrees = equi == report.equiprobable
            && constant == report.constant_probability
            && residual.map_or(true, |r| r <= args.tol);
        Some(SimCheckDto {
            trials,
            equiprobable: equi,
            constant_probability: constant,
            strong_determinism_residual: residual,
            agrees_with_classification: agrees,
        })
    } else {
        None
    };

    if args.common.json {
        return print_json(&AnalyzeDto {
            graph: GraphDto::from_graph(&graph),
            report: ReportDto::from_report(&graph, &report),
            sim_check,
        });
    }

    println!(
        "graph: {} vertices, {} edges; inputs {}; outputs {}",
        graph.n(),
        graph.edge_count(),
        set_text(&graph, graph.inputs()),
        set_text(&graph, graph.outputs()),
    );
    print_report_text(&graph, &report);
    match sim_check {
        None => println!("simulator cross-check: skipped ({} vertices > {ANALYZE_SIM_LIMIT})", graph.n()),
        Some(check) => {
            let residual = check
                .strong_determinism_residual
                .map(|r| format!(", determinism residual {r:.2e}"))
                .unwrap_or_default();
            println!(
                "simulator cross-check ({} trials): equiprobable {}, constant probability {}{residual} — {}",
                check.trials,
                yes_no(check.equiprobable),
                yes_no(check.constant_probability),
                if check.agrees_with_classification {
                    "agrees with the classification"
                } else {
                    "DISAGREES with the classification"
                },
            );
        }
    }
    Ok(())
}

fn print_report_text(graph: &OpenGraph, report: &mbqc_core::classify::ClassificationReport) {
    match &report.gflow {
        Some(flow) => print_flow_text(graph, flow),
        None => println!("gflow: absent"),
    }
    println!("equiprobable: {}", yes_no(report.equiprobable));
    println!("constant probability: {}", yes_no(report.constant_probability));
    if report.internal_sets.is_empty() {
        println!("internal sets: none");
    } else {
        println!(
            "internal sets ({}): smallest {}",
            report.internal_sets.len(),
            set_text(graph, report.internal_sets[0].set()),
        );
    }
    if report.strongly_internal_sets.is_empty() {
        println!("strongly internal sets: none");
    } else {
        println!(
            "strongly internal sets ({}): smallest {}",
            report.strongly_internal_sets.len(),
            set_text(graph, report.strongly_internal_sets[0].set()),
        );
    }
    println!("notes: {}", report.notes);
}

fn cmd_classify(args: ClassifyArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.common.graph)?;
    let report = classify_with_cap(&graph, args.cap)?;
    if args.common.json {
        return print_json(&ReportDto::from_report(&graph, &report));
    }
    print_report_text(&graph, &report);
    Ok(())
}

fn cmd_gflow(args: GflowArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.common.graph)?;
    let focused = match find_gflow(&graph) {
        Some(flow) => Some(focus(&graph, &flow)?),
        None => None,
    };
    if args.common.json {
        return print_json(&GflowDto {
            has_gflow: focused.is_some(),
            gflow: focused.as_ref().map(|f| FlowDto::from_flow(&graph, f)),
        });
    }
    match focused {
        Some(flow) => print_flow_text(&graph, &flow),
        None => println!("gflow: absent"),
    }
    Ok(())
}

fn apply_perm(perm: &[usize], set: VertexSet) -> VertexSet {
    VertexSet::from_indices(set.iter().map(|v| perm[v]))
}

fn orbit_class(
    auts: &[Vec<usize>],
    reps: &[IoPlacement],
    placement: &IoPlacement,
) -> Option<usize> {
    reps.iter().position(|rep| {
        auts.iter().any(|perm| {
            apply_perm(perm, placement.inputs) == rep.inputs
                && apply_perm(perm, placement.outputs) == rep.outputs
        })
    })
}

fn cmd_choose_io(args: ChooseIoArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.common.graph)?;
    if !graph.inputs().is_empty() || !graph.outputs().is_empty() {
        eprintln!("warning: input/output lines in the file are ignored by the placement search");
    }
    let raw = chooser::choose_io_with_cap(&graph, args.k, args.cap)?;

    let placements: Vec<PlacementDto> = if args.all_orbits {
        // Annotate each placement with its class when the symmetry search is
        // feasible; list them plain otherwise.
        let annotate = chooser::automorphisms(&graph).ok().and_then(|auts| {
            chooser::dedupe_by_symmetry(&graph, &raw)
                .ok()
                .map(|reps| (auts, reps))
        });
        raw.iter()
            .map(|p| {
                let class = annotate
                    .as_ref()
                    .and_then(|(auts, reps)| orbit_class(auts, reps, p));
                let representative = annotate
                    .as_ref()
                    .map(|(_, reps)| reps.contains(p))
                    .unwrap_or(true);
                PlacementDto {
                    inputs: json::labels_of(&graph, p.inputs),
                    outputs: json::labels_of(&graph, p.outputs),
                    has_gflow: p.has_gflow,
                    representative,
                    class,
                }
            })
            .collect()
    } else {
        chooser::input_orbit_representatives(&graph, &raw)?
            .iter()
            .enumerate()
            .map(|(i, p)| PlacementDto {
                inputs: json::labels_of(&graph, p.inputs),
                outputs: json::labels_of(&graph, p.outputs),
                has_gflow: p.has_gflow,
                representative: true,
                class: Some(i),
            })
            .collect()
    };

    if args.common.json {
        return print_json(&ChooseIoDto {
            k: args.k,
            raw_count: raw.len(),
            all_orbits: args.all_orbits,
            placements,
        });
    }

    if placements.is_empty() {
        println!("no size-{} placements admit a deterministic computation", args.k);
        return Ok(());
    }
    println!(
        "{} placement(s){} out of {} raw:",
        placements.len(),
        if args.all_orbits { "" } else { " up to symmetry" },
        raw.len(),
    );
    for p in &placements {
        let class = p.class.map(|c| format!(" [class {c}]")).unwrap_or_default();
        println!(
            "  inputs {{{}}} outputs {{{}}} gflow {}{}{}",
            p.inputs.join(", "),
            p.outputs.join(", "),
            yes_no(p.has_gflow),
            class,
            if p.representative { " *" } else { "" },
        );
    }
    Ok(())
}

fn cmd_witness(args: WitnessArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.common.graph)?;
    let report = classify_with_cap(&graph, args.cap)?;
    let mode_const = args.constant;

    let (mode, witnesses, probabilities, gap) = if mode_const {
        if report.constant_probability {
            return Err(CliError::NoWitness(
                "the computation has uniformly constant probability; no strongly internal set exists".into(),
            ));
        }
        let pair = make_distinguishing_witness(&graph, &report.strongly_internal_sets[0])?;
        let p_a = witness_forbidden_probability(&graph, &pair.0)?;
        let p_b = witness_forbidden_probability(&graph, &pair.1)?;
        // The same parity event under the other input: its probability jumps
        // from p_a to 1 − p_b, demonstrating input dependence.
        let mut cross = pair.1.clone();
        cross.forbidden_parity = pair.0.forbidden_parity;
        let p_cross = witness_forbidden_probability(&graph, &cross)?;
        let gap = (p_cross - p_a).abs();
        (
            "constant-probability",
            vec![
                WitnessDto::from_plan(&graph, &pair.0),
                WitnessDto::from_plan(&graph, &pair.1),
            ],
            vec![p_a, p_b],
            Some(gap),
        )
    } else {
        if report.equiprobable {
            return Err(CliError::NoWitness(
                "the computation is uniformly equiprobable; no internal set exists".into(),
            ));
        }
        let plan = make_witness(&graph, &report.internal_sets[0])?;
        let p = witness_forbidden_probability(&graph, &plan)?;
        ("equiprobability", vec![WitnessDto::from_plan(&graph, &plan)], vec![p], None)
    };

    let confirmed =
        probabilities.iter().all(|p| *p < args.tol) && gap.map_or(true, |g| g >= 0.05);
    let dto = WitnessReportDto {
        mode: mode.to_string(),
        witnesses,
        forbidden_probabilities: probabilities,
        input_dependence_gap: gap,
        tolerance: args.tol,
        confirmed,
    };

    if args.common.json {
        return print_json(&dto);
    }

    println!("witness against uniform {}:", dto.mode);
    for (i, w) in dto.witnesses.iter().enumerate() {
        if dto.witnesses.len() > 1 {
            println!("plan {}:", (b'a' + i as u8) as char);
        }
        let marked: Vec<String> = w
            .paulis
            .iter()
            .filter(|(_, m)| m.as_str() != "I")
            .map(|(v, m)| format!("{m} on {v}"))
            .collect();
        println!("  paulis: {}", if marked.is_empty() { "none".into() } else { marked.join(", ") });
        let states: Vec<String> = w
            .input_states
            .iter()
            .map(|(v, s)| {
                let glyph = match s.as_str() {
                    "plus" => "+",
                    "minus" => "-",
                    "zero" => "0",
                    _ => "1",
                };
                format!("{v}=|{glyph}>")
            })
            .collect();
        println!("  inputs: {}", if states.is_empty() { "none".into() } else { states.join(", ") });
        println!(
            "  forbidden parity {} on {{{}}}; measured probability {:.3e}",
            w.forbidden_parity,
            w.parity_support.join(", "),
            dto.forbidden_probabilities[i],
        );
    }
    if let Some(g) = dto.input_dependence_gap {
        println!("input dependence: the forced parity flips between the two inputs (gap {g:.3})");
    }
    println!("confirmed: {}", yes_no(dto.confirmed));
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.common.graph)?;
    let flow = find_gflow(&graph);
    let mut plan = match &flow {
        Some(f) => corrections_from_gflow(&graph, f)?,
        None => MeasurementPlan::zero_corrections(&graph),
    };
    let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
    randomize_angles(&mut plan, &mut rng);
    let table = run_branches(&graph, &plan)?;
    let strong = flow.is_some().then(|| {
        let (holds, residual) = check_strong_determinism(&table);
        StrongDeterminismDto { holds, residual }
    });
    let equiprobable = check_equiprobability_seeded(&graph, args.trials, args.tol, args.seed)?;
    let constant =
        check_constant_probability_seeded(&graph, args.trials, VARIANCE_TOL, args.seed)?;

    let dto = SimulateDto {
        plan: PlanDto::from_plan(&graph, &plan),
        used_gflow_corrections: flow.is_some(),
        seed: args.seed,
        trials: args.trials,
        strong_determinism: strong,
        equiprobable,
        constant_probability: constant,
        table: TableDto::from_table(&graph, &table, args.matrices),
    };

    if args.common.json {
        return print_json(&dto);
    }

    println!(
        "plan: {} measurements ({} corrections), random angles from seed {}",
        dto.plan.order.len(),
        if dto.used_gflow_corrections { "gflow" } else { "no" },
        dto.seed,
    );
    match &dto.strong_determinism {
        Some(sd) => println!(
            "strong determinism: {} (residual {:.2e})",
            yes_no(sd.holds),
            sd.residual
        ),
        None => println!("strong determinism: not applicable (no gflow)"),
    }
    println!(
        "equiprobable: {} | constant probability: {} ({} trials)",
        yes_no(dto.equiprobable),
        yes_no(dto.constant_probability),
        dto.trials,
    );
    println!("branches (probability under the maximally mixed input):");
    for (i, branch) in dto.table.branches.iter().enumerate() {
        if i == TEXT_BRANCH_LIMIT {
            println!("  … {} more", dto.table.branches.len() - TEXT_BRANCH_LIMIT);
            break;
        }
        let outcomes: Vec<String> = dto
            .table
            .order
            .iter()
            .map(|v| format!("{}={}", v, branch.outcomes[v]))
            .collect();
        println!("  {}: p = {:.6}", outcomes.join(" "), branch.probability);
    }
    Ok(())
}

fn cmd_export_dot(args: ExportDotArgs) -> Result<(), CliError> {
    let graph = load_graph(&args.graph)?;
    let highlight: Vec<(usize, usize)> = match args.highlight.as_deref() {
        Some("gflow") => match find_gflow(&graph) {
            Some(flow) => focused_to_dag(&focus(&graph, &flow)?).edges(),
            None => {
                eprintln!("warning: no gflow to highlight; exporting the plain graph");
                Vec::new()
            }
        },
        _ => Vec::new(),
    };
    print!("{}", graph.to_dot(&highlight));
    Ok(())
}
