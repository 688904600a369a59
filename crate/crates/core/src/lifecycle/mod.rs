//! Event-sourced stage-gate workflow engine.
//!
//! Four waterfall stages, each a spiral of four steps; gates between stages
//! decide Go, Kill, Hold, or Return; Stage I carries an extra intra-stage
//! gate at prototype delivery; finishing Stage IV ends the cycle, and the
//! whole waterfall can be restarted for continuous improvement.
//!
//! State is never stored directly: every change is an appended
//! [`JournalEvent`], and [`engine::replay_journal`] folds a journal back
//! into a [`ProjectState`]. One project has one writer at a time; distinct
//! projects are independent.

pub mod audit;
pub mod checklist;
pub mod engine;
pub mod event;
pub mod gate;
pub mod journal;
pub mod stage;
pub mod state;

pub use audit::{audit_journal, AuditViolation};
pub use checklist::{all_templates, template, ChecklistBinding, ChecklistItem, ChecklistTemplate, TemplateId};
pub use event::{EventKind, IntraStageOutcome, JournalEvent};
pub use gate::{CriterionScore, GateCriteria, GateDecision, Score};
pub use journal::{JournalError, JournalStore, LockMode, DATA_DIR_ENV, DEFAULT_DATA_DIR};
pub use stage::{GateId, StageId, StepAddress, StepNumber};
pub use state::{Position, ProjectId, ProjectState};

/// Soft spiral-iteration cap per stage; exceeding it is worth a warning in
/// status output (runaway spirals indicate scope creep) but never an error.
pub const DEFAULT_SPIRAL_SOFT_CAP: u32 = 10;

/// Errors from the lifecycle engine.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LifecycleError {
    #[error("project name must not be empty")]
    EmptyName,
    #[error("invalid transition: {op} is not allowed at {position}")]
    InvalidTransition { op: String, position: String },
    #[error("event addressed {recorded} but project is at {current}")]
    AddressMismatch { recorded: String, current: String },
    #[error("decision recorded for {requested} but project is at {position}")]
    GateMismatch { requested: GateId, position: String },
    #[error("return target must be earlier than the gate's stage (gate {gate}, target stage {target})")]
    ReturnTargetNotEarlier { gate: GateId, target: StageId },
    #[error("loop-back target must be an earlier step (current step {current}, target {target})")]
    LoopBackTargetNotEarlier { current: StepNumber, target: StepNumber },
    #[error("step number must be 1..=4 (got {value})")]
    StepOutOfRange { value: u8 },
    #[error("gate number must be 1..=3 (got {value})")]
    GateOutOfRange { value: u8 },
    #[error("score must be 1..=5 (got {value})")]
    ScoreOutOfRange { value: u8 },
    #[error("unknown checklist item {item} in template {template}")]
    UnknownChecklistItem { template: TemplateId, item: u8 },
    #[error("checklist item {template}/{item} is bound to {binding} but project is at {position}")]
    ChecklistBindingMismatch {
        template: TemplateId,
        item: u8,
        binding: String,
        position: String,
    },
    #[error("checklist item {template}/{item} is already marked done")]
    DuplicateChecklistItem { template: TemplateId, item: u8 },
    #[error("journal sequence gap: expected seq {expected}, found {found}")]
    SequenceGap { expected: u64, found: u64 },
    #[error("journal must begin with a project_created event")]
    MissingCreation,
    #[error("unexpected project_created event: project already exists")]
    UnexpectedCreation,
    #[error("replay failed at seq {seq}: {source}")]
    Replay {
        seq: u64,
        #[source]
        source: Box<LifecycleError>,
    },
}

impl LifecycleError {
    /// True for state-dependent rejections (the operation exists but is not
    /// legal at the current position), as opposed to malformed input.
    pub fn is_invalid_transition(&self) -> bool {
        matches!(
            self,
            LifecycleError::InvalidTransition { .. }
                | LifecycleError::AddressMismatch { .. }
                | LifecycleError::GateMismatch { .. }
                | LifecycleError::ReturnTargetNotEarlier { .. }
                | LifecycleError::LoopBackTargetNotEarlier { .. }
                | LifecycleError::ChecklistBindingMismatch { .. }
                | LifecycleError::DuplicateChecklistItem { .. }
        )
    }
}
