//! Materialized project state: the fold of a journal.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::checklist::{self, ChecklistBinding, ChecklistItem, TemplateId};
use super::{GateId, LifecycleError, StageId, StepAddress};

/// Stable project identifier; doubles as the journal file stem.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ProjectId(String);

impl ProjectId {
    pub fn new(id: impl Into<String>) -> Result<ProjectId, LifecycleError> {
        let id = id.into();
        if id.is_empty() {
            return Err(LifecycleError::EmptyName);
        }
        Ok(ProjectId(id))
    }

    /// Derives a filesystem-friendly slug from a project name.
    pub fn derive_from_name(name: &str) -> Result<ProjectId, LifecycleError> {
        let mut slug = String::new();
        let mut pending_dash = false;
        for ch in name.trim().chars() {
            if ch.is_ascii_alphanumeric() {
                if pending_dash && !slug.is_empty() {
                    slug.push('-');
                }
                pending_dash = false;
                slug.push(ch.to_ascii_lowercase());
            } else {
                pending_dash = true;
            }
        }
        if slug.is_empty() {
            return Err(LifecycleError::EmptyName);
        }
        Ok(ProjectId(slug))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for ProjectId {
    type Error = LifecycleError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        ProjectId::new(s)
    }
}

impl From<ProjectId> for String {
    fn from(id: ProjectId) -> String {
        id.0
    }
}

impl std::fmt::Display for ProjectId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Where a project currently stands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    AtStep {
        address: StepAddress,
        spiral_iteration: u32,
    },
    AtGate {
        gate: GateId,
    },
    AtIntraStageGate,
    AtCycleEnd,
    Held {
        gate: GateId,
    },
    Killed,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Position::AtStep {
                address,
                spiral_iteration,
            } => write!(f, "{address} (iteration {spiral_iteration})"),
            Position::AtGate { gate } => write!(f, "{gate}"),
            Position::AtIntraStageGate => write!(f, "Stage I intra-stage gate"),
            Position::AtCycleEnd => write!(f, "cycle end"),
            Position::Held { gate } => write!(f, "held at {gate}"),
            Position::Killed => write!(f, "killed"),
        }
    }
}

/// Event-sourced project state. Every field is a deterministic function of
/// the journal, so a serialize-then-replay round trip reproduces it
/// field for field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectState {
    pub project_id: ProjectId,
    pub name: String,
    /// Waterfall pass number, starting at 1.
    pub cycle: u32,
    pub position: Position,
    /// Sequence number of the last applied journal event.
    pub last_seq: u64,
    /// Latest spiral iteration per stage within the current cycle
    /// (0 = not yet visited). Feeds the return-to-stage iteration rule.
    pub(crate) stage_iterations: [u32; 4],
    /// Checklist items marked done in the current cycle.
    pub(crate) checklist_done: BTreeSet<(TemplateId, u8)>,
}

impl ProjectState {
    /// Latest spiral iteration used by `stage` in the current cycle.
    pub fn stage_iteration(&self, stage: StageId) -> u32 {
        self.stage_iterations[(stage.number() - 1) as usize]
    }

    pub fn is_item_done(&self, template: TemplateId, item: u8) -> bool {
        self.checklist_done.contains(&(template, item))
    }

    /// Items marked done this cycle, in (template, item) order.
    pub fn done_items(&self) -> impl Iterator<Item = (TemplateId, u8)> + '_ {
        self.checklist_done.iter().copied()
    }

    /// Checklist items bound to the current position and not yet done.
    pub fn pending_items(&self) -> Vec<(TemplateId, &'static ChecklistItem)> {
        let mut pending = Vec::new();
        for template in checklist::all_templates() {
            for item in template.items {
                if self.is_item_done(template.id, item.id) {
                    continue;
                }
                if self.binding_matches(&item.binding) {
                    pending.push((template.id, item));
                }
            }
        }
        pending
    }

    /// Whether an item with this binding may be marked at the current
    /// position. Held and killed projects accept no checklist activity.
    pub(crate) fn binding_matches(&self, binding: &ChecklistBinding) -> bool {
        match (binding, &self.position) {
            (_, Position::Held { .. } | Position::Killed) => false,
            (ChecklistBinding::Step(bound), Position::AtStep { address, .. }) => bound == address,
            (ChecklistBinding::IntraStageGate, Position::AtIntraStageGate) => true,
            (ChecklistBinding::Gate(bound), Position::AtGate { gate }) => bound == gate,
            (ChecklistBinding::Handoff, _) => true,
            _ => false,
        }
    }
}
