//! `kv project` — lifecycle commands over journal-backed projects.

use std::io::{BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use chrono::Utc;
use clap::{Args, Subcommand, ValueEnum};

use kv_core::lifecycle::engine;
use kv_core::lifecycle::{
    all_templates, template, CriterionScore, EventKind, GateCriteria, GateDecision, GateId,
    IntraStageOutcome, JournalStore, LockMode, Position, ProjectId, ProjectState, Score, StageId,
    StepNumber, TemplateId, DEFAULT_SPIRAL_SOFT_CAP,
};

use crate::error::CliError;
use crate::output::{print_rows, Format};

/// Environment variable overriding the spiral-iteration soft cap.
const SPIRAL_CAP_ENV: &str = "KV_SPIRAL_CAP";

#[derive(Args)]
pub struct ProjectArgs {
    /// Project id; defaults to the only project in the data directory.
    #[arg(long, global = true)]
    project: Option<String>,
    /// Data directory (overrides KV_DATA_DIR; default ./kv-data).
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,
    /// Behavior when another writer holds the journal lock.
    #[arg(long, global = true, value_enum, default_value_t = LockChoice::Wait)]
    lock: LockChoice,
    #[command(subcommand)]
    action: Action,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LockChoice {
    /// Block until the lock is free.
    Wait,
    /// Fail fast with exit status 4.
    Fail,
}

impl From<LockChoice> for LockMode {
    fn from(choice: LockChoice) -> LockMode {
        match choice {
            LockChoice::Wait => LockMode::Wait,
            LockChoice::Fail => LockMode::Fail,
        }
    }
}

#[derive(Subcommand)]
enum Action {
    /// Create a project; its id is a slug of the name.
    Init {
        name: String,
    },
    /// Complete the current step.
    Step {
        /// Deliverable note recorded with the completion.
        #[arg(long, default_value = "")]
        note: String,
        /// Content digest of the deliverable artifact.
        #[arg(long)]
        digest: Option<String>,
    },
    /// Spiral back to an earlier step of the current stage.
    Loopback {
        /// Target step (1..=4), earlier than the current step.
        #[arg(long)]
        to: u8,
    },
    /// Open or decide a gate.
    Gate {
        /// Gate number (1..=3).
        gate: u8,
        /// Record that the gate meeting convened, without deciding.
        #[arg(long, conflicts_with = "decision")]
        open: bool,
        #[arg(long, value_enum)]
        decision: Option<DecisionChoice>,
        /// Target stage for a return decision (I, II, III or 1, 2, 3).
        #[arg(long)]
        return_to: Option<String>,
        /// Seven comma-separated scores (1..=5) in criterion order:
        /// deliverables_check, minimum_standards, profitability_potential,
        /// competitive_advantage, technical_feasibility, scalability, risk.
        #[arg(long)]
        scores: Option<String>,
        /// Optional semicolon-separated notes in the same order.
        #[arg(long)]
        notes: Option<String>,
    },
    /// Decide the Stage I intra-stage gate.
    Intragate {
        /// Proceed to Gate 1.
        #[arg(long, conflicts_with = "loopback_to")]
        proceed: bool,
        /// Loop back to a Stage I step instead.
        #[arg(long)]
        loopback_to: Option<u8>,
    },
    /// Reopen a held gate.
    Resume,
    /// Start the next waterfall cycle after Stage IV.
    Restart,
    /// Show or mark checklist items.
    Checklist {
        #[command(subcommand)]
        action: ChecklistAction,
    },
    /// Print position, cycle, iteration, and pending checklist items.
    Status,
    /// Print the journal.
    Log {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecisionChoice {
    Go,
    Kill,
    Hold,
    Return,
}

#[derive(Subcommand)]
enum ChecklistAction {
    /// Mark an item done at its bound position.
    Mark {
        /// Template: excel (prototype loop) or crossover.
        #[arg(long, value_enum)]
        template: TemplateChoice,
        /// Item number within the template.
        #[arg(long)]
        item: u8,
        #[arg(long, default_value = "")]
        note: String,
    },
    /// List both templates with bindings and completion marks.
    Show,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TemplateChoice {
    Excel,
    Crossover,
}

impl From<TemplateChoice> for TemplateId {
    fn from(choice: TemplateChoice) -> TemplateId {
        match choice {
            TemplateChoice::Excel => TemplateId::ExcelPrototypeLoop,
            TemplateChoice::Crossover => TemplateId::CrossoverLoop,
        }
    }
}

pub fn run(args: ProjectArgs) -> Result<ExitCode, CliError> {
    let store = open_store(&args)?;
    let lock: LockMode = args.lock.into();

    match args.action {
        Action::Init { name } => {
            let state = store.create_project(&name, Utc::now())?;
            println!(
                "created {} ({}) at {}, cycle {}",
                state.project_id, state.name, state.position, state.cycle
            );
            Ok(ExitCode::SUCCESS)
        }
        Action::Step { note, digest } => mutate(&store, &args.project, lock, "step", |state| {
            engine::complete_step(state, &note, digest.clone(), Utc::now())
        }),
        Action::Loopback { to } => {
            let target = StepNumber::new(to)?;
            mutate(&store, &args.project, lock, "loopback", |state| {
                engine::loop_back(state, target, Utc::now())
            })
        }
        Action::Gate {
            gate,
            open,
            decision,
            return_to,
            scores,
            notes,
        } => {
            let gate = GateId::new(gate)?;
            if open {
                return mutate(&store, &args.project, lock, "gate --open", |state| {
                    engine::open_gate(state, gate, Utc::now())
                });
            }
            let Some(decision) = decision else {
                return Err(CliError::usage(
                    "gate requires --open or --decision go|kill|hold|return",
                ));
            };
            let decision = build_decision(decision, return_to.as_deref())?;
            let criteria = build_criteria(scores.as_deref(), notes.as_deref())?;
            mutate(&store, &args.project, lock, "gate", |state| {
                engine::decide_gate(state, gate, decision.clone(), criteria.clone(), Utc::now())
            })
        }
        Action::Intragate {
            proceed,
            loopback_to,
        } => {
            let outcome = match (proceed, loopback_to) {
                (true, None) => IntraStageOutcome::Proceed,
                (false, Some(step)) => IntraStageOutcome::LoopBack {
                    to_step: StepNumber::new(step)?,
                },
                _ => {
                    return Err(CliError::usage(
                        "intragate requires exactly one of --proceed or --loopback-to N",
                    ));
                }
            };
            mutate(&store, &args.project, lock, "intragate", |state| {
                engine::decide_intra_stage_gate(state, outcome, Utc::now())
            })
        }
        Action::Resume => mutate(&store, &args.project, lock, "resume", |state| {
            engine::resume(state, Utc::now())
        }),
        Action::Restart => mutate(&store, &args.project, lock, "restart", |state| {
            engine::restart_cycle(state, Utc::now())
        }),
        Action::Checklist { action } => match action {
            ChecklistAction::Mark {
                template,
                item,
                note,
            } => {
                let template: TemplateId = template.into();
                mutate(&store, &args.project, lock, "checklist mark", |state| {
                    engine::mark_checklist_item(state, template, item, &note, Utc::now())
                })
            }
            ChecklistAction::Show => {
                let id = resolve_project(&store, &args.project)?;
                let (state, _) = store.load(&id, lock)?;
                show_checklists(&state);
                Ok(ExitCode::SUCCESS)
            }
        },
        Action::Status => {
            let id = resolve_project(&store, &args.project)?;
            let (state, _) = store.load(&id, lock)?;
            show_status(&state);
            Ok(ExitCode::SUCCESS)
        }
        Action::Log { format } => {
            let id = resolve_project(&store, &args.project)?;
            let (_, events) = store.load(&id, lock)?;
            match format {
                Format::Table => {
                    for event in &events {
                        println!(
                            "{:>4}  {}  {:<24} {}",
                            event.seq,
                            event.timestamp.format("%Y-%m-%dT%H:%M:%SZ"),
                            event.kind.label(),
                            summarize(&event.kind)
                        );
                    }
                }
                Format::Records => {
                    for event in &events {
                        println!("{}", serde_json::to_string(event).expect("events serialize"));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn open_store(args: &ProjectArgs) -> Result<JournalStore, CliError> {
    match &args.data_dir {
        Some(dir) => Ok(JournalStore::open(dir)?),
        None => Ok(JournalStore::from_env()?),
    }
}

fn resolve_project(store: &JournalStore, flag: &Option<String>) -> Result<ProjectId, CliError> {
    if let Some(id) = flag {
        let id = ProjectId::new(id.clone())?;
        return Ok(id);
    }
    let mut ids = store.list_projects()?;
    match ids.len() {
        0 => Err(CliError::usage(format!(
            "no projects in {}; run `kv project init NAME`",
            store.dir().display()
        ))),
        1 => Ok(ids.remove(0)),
        _ => Err(CliError::usage(format!(
            "multiple projects in {}; pick one with --project: {}",
            store.dir().display(),
            ids.iter()
                .map(|id| id.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ))),
    }
}

fn mutate<F>(
    store: &JournalStore,
    project: &Option<String>,
    lock: LockMode,
    what: &str,
    op: F,
) -> Result<ExitCode, CliError>
where
    F: Fn(&ProjectState) -> Result<(ProjectState, kv_core::JournalEvent), kv_core::LifecycleError>,
{
    let id = resolve_project(store, project)?;
    let (state, event) = store.mutate(&id, lock, op)?;
    println!(
        "{}: {} (seq {}) -> {}, cycle {}",
        id,
        what,
        event.seq,
        state.position,
        state.cycle
    );
    Ok(ExitCode::SUCCESS)
}

fn build_decision(
    choice: DecisionChoice,
    return_to: Option<&str>,
) -> Result<GateDecision, CliError> {
    match choice {
        DecisionChoice::Go => Ok(GateDecision::Go),
        DecisionChoice::Kill => Ok(GateDecision::Kill),
        DecisionChoice::Hold => Ok(GateDecision::Hold),
        DecisionChoice::Return => {
            let raw = return_to.ok_or_else(|| {
                CliError::usage("--decision return requires --return-to STAGE")
            })?;
            let stage = parse_stage(raw)?;
            Ok(GateDecision::Return { target: stage })
        }
    }
}

fn parse_stage(raw: &str) -> Result<StageId, CliError> {
    let stage = match raw.trim().to_ascii_uppercase().as_str() {
        "I" | "1" => StageId::I,
        "II" | "2" => StageId::II,
        "III" | "3" => StageId::III,
        "IV" | "4" => StageId::IV,
        other => {
            return Err(CliError::usage(format!(
                "unknown stage `{other}` (use I..IV or 1..4)"
            )));
        }
    };
    Ok(stage)
}

/// Builds the seven-criterion scorecard from flags, or interactively when
/// flags are absent and stdin is a terminal.
fn build_criteria(scores: Option<&str>, notes: Option<&str>) -> Result<GateCriteria, CliError> {
    let scores: [Score; 7] = match scores {
        Some(raw) => parse_scores(raw)?,
        None => {
            if std::io::stdin().is_terminal() {
                return prompt_criteria();
            }
            return Err(CliError::usage(
                "gate decisions require --scores s1,s2,s3,s4,s5,s6,s7 (or an interactive terminal)",
            ));
        }
    };
    let mut criteria = GateCriteria::from_scores(scores);
    if let Some(notes) = notes {
        let parts: Vec<&str> = notes.split(';').collect();
        if parts.len() > 7 {
            return Err(CliError::usage(format!(
                "--notes takes at most 7 semicolon-separated entries (got {})",
                parts.len()
            )));
        }
        let mut slots = [
            &mut criteria.deliverables_check,
            &mut criteria.minimum_standards,
            &mut criteria.profitability_potential,
            &mut criteria.competitive_advantage,
            &mut criteria.technical_feasibility,
            &mut criteria.scalability,
            &mut criteria.risk,
        ];
        for (slot, note) in slots.iter_mut().zip(parts) {
            slot.note = note.trim().to_string();
        }
    }
    Ok(criteria)
}

fn parse_scores(raw: &str) -> Result<[Score; 7], CliError> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    if parts.len() != 7 {
        return Err(CliError::usage(format!(
            "--scores needs exactly 7 comma-separated values in criterion order (got {})",
            parts.len()
        )));
    }
    let mut scores = [Score::new(1).unwrap(); 7];
    for (i, part) in parts.iter().enumerate() {
        let value: u8 = part.parse().map_err(|_| {
            CliError::usage(format!("score `{part}` is not a number (1..=5)"))
        })?;
        scores[i] = Score::new(value)?;
    }
    Ok(scores)
}

fn prompt_criteria() -> Result<GateCriteria, CliError> {
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    let mut read = |label: &str| -> Result<CriterionScore, CliError> {
        print!("{label} score (1-5): ");
        std::io::stdout().flush().ok();
        let score_line = lines
            .next()
            .transpose()
            .map_err(|e| CliError::internal(e.to_string()))?
            .ok_or_else(|| CliError::usage("stdin closed during criteria entry"))?;
        let value: u8 = score_line
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("score `{}` is not a number", score_line.trim())))?;
        let score = Score::new(value)?;
        print!("{label} note (optional): ");
        std::io::stdout().flush().ok();
        let note = lines
            .next()
            .transpose()
            .map_err(|e| CliError::internal(e.to_string()))?
            .unwrap_or_default();
        Ok(CriterionScore::new(score, note.trim()))
    };
    Ok(GateCriteria {
        deliverables_check: read("deliverables_check")?,
        minimum_standards: read("minimum_standards")?,
        profitability_potential: read("profitability_potential")?,
        competitive_advantage: read("competitive_advantage")?,
        technical_feasibility: read("technical_feasibility")?,
        scalability: read("scalability")?,
        risk: read("risk")?,
    })
}

fn spiral_soft_cap() -> u32 {
    std::env::var(SPIRAL_CAP_ENV)
        .ok()
        .and_then(|raw| raw.parse().ok())
        .unwrap_or(DEFAULT_SPIRAL_SOFT_CAP)
}

fn show_status(state: &ProjectState) {
    let position = match state.position {
        Position::AtStep {
            address,
            spiral_iteration,
        } => format!(
            "{address}, cycle {}, iteration {spiral_iteration}",
            state.cycle
        ),
        other => format!("{other}, cycle {}", state.cycle),
    };
    let mut rows = vec![
        ("Project", format!("{} ({})", state.project_id, state.name)),
        ("Position", position),
    ];
    if let Position::AtStep { address, .. } = state.position {
        rows.push((
            "Step",
            format!("{} ({})", address.step_name(), address.stage.name()),
        ));
    }
    print_rows(&rows);

    if let Position::AtStep {
        spiral_iteration, ..
    } = state.position
    {
        let cap = spiral_soft_cap();
        if spiral_iteration > cap {
            println!(
                "warning: spiral iteration {spiral_iteration} exceeds the soft cap {cap}; \
                 consider a gate decision before iterating further"
            );
        }
    }

    let pending = state.pending_items();
    if pending.is_empty() {
        println!("Pending checklist items: none");
    } else {
        println!("Pending checklist items:");
        for (template_id, item) in pending {
            println!("  {template_id} #{:<2} {}", item.id, item.title);
        }
    }
}

fn show_checklists(state: &ProjectState) {
    for tpl in all_templates() {
        println!("{}:", tpl.id);
        for item in template(tpl.id).items {
            let done = if state.is_item_done(tpl.id, item.id) {
                "x"
            } else {
                " "
            };
            println!("  [{done}] #{:<2} {:<40} @ {}", item.id, item.title, item.binding);
        }
    }
}

fn summarize(kind: &EventKind) -> String {
    match kind {
        EventKind::ProjectCreated { project_id, name } => format!("{project_id} ({name})"),
        EventKind::StepCompleted { address, note, artifact_digest } => {
            let digest = artifact_digest
                .as_deref()
                .map(|d| format!(" [{d}]"))
                .unwrap_or_default();
            if note.is_empty() {
                format!("{address}{digest}")
            } else {
                format!("{address} \"{note}\"{digest}")
            }
        }
        EventKind::LoopBack { from_step, to_step } => {
            format!("step {from_step} -> step {to_step}")
        }
        EventKind::GateOpened { gate } => gate.to_string(),
        EventKind::GateDecided { gate, decision, .. } => format!("{gate}: {decision}"),
        EventKind::IntraStageGateDecided { outcome } => match outcome {
            IntraStageOutcome::Proceed => "proceed".to_string(),
            IntraStageOutcome::LoopBack { to_step } => format!("loop back to step {to_step}"),
        },
        EventKind::ChecklistItemDone { template, item, note } => {
            if note.is_empty() {
                format!("{template} #{item}")
            } else {
                format!("{template} #{item} \"{note}\"")
            }
        }
        EventKind::Resumed { gate } => gate.to_string(),
        EventKind::CycleRestarted => String::new(),
    }
}
