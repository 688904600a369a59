//! Journal events: the append-only audit substrate of a project.

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::{GateCriteria, GateDecision, GateId, StepAddress, StepNumber, TemplateId};
use crate::lifecycle::state::ProjectId;

/// One immutable journal record. Sequence numbers start at 1 and are
/// gapless per project.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JournalEvent {
    pub seq: u64,
    pub timestamp: DateTime<Utc>,
    #[serde(flatten)]
    pub kind: EventKind,
}

/// What happened. Serialized as `{"kind": ..., "payload": {...}}` within
/// the journal record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum EventKind {
    ProjectCreated {
        project_id: ProjectId,
        name: String,
    },
    StepCompleted {
        address: StepAddress,
        note: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        artifact_digest: Option<String>,
    },
    LoopBack {
        from_step: StepNumber,
        to_step: StepNumber,
    },
    GateOpened {
        gate: GateId,
    },
    GateDecided {
        gate: GateId,
        decision: GateDecision,
        criteria: GateCriteria,
    },
    IntraStageGateDecided {
        outcome: IntraStageOutcome,
    },
    ChecklistItemDone {
        template: TemplateId,
        item: u8,
        note: String,
    },
    Resumed {
        gate: GateId,
    },
    CycleRestarted,
}

impl EventKind {
    /// Short, stable label for log rendering.
    pub fn label(&self) -> &'static str {
        match self {
            EventKind::ProjectCreated { .. } => "project_created",
            EventKind::StepCompleted { .. } => "step_completed",
            EventKind::LoopBack { .. } => "loop_back",
            EventKind::GateOpened { .. } => "gate_opened",
            EventKind::GateDecided { .. } => "gate_decided",
            EventKind::IntraStageGateDecided { .. } => "intra_stage_gate_decided",
            EventKind::ChecklistItemDone { .. } => "checklist_item_done",
            EventKind::Resumed { .. } => "resumed",
            EventKind::CycleRestarted => "cycle_restarted",
        }
    }
}

/// Outcome of the Stage I intra-stage gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntraStageOutcome {
    /// Move the project forward to Gate 1.
    Proceed,
    /// Loop back to an earlier Stage I step for more prototype work.
    LoopBack { to_step: StepNumber },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifecycle::StageId;

    #[test]
    fn record_shape_carries_seq_timestamp_kind_payload() {
        let event = JournalEvent {
            seq: 2,
            timestamp: "2026-01-02T03:04:05Z".parse().unwrap(),
            kind: EventKind::StepCompleted {
                address: StepAddress::new(StageId::I, StepNumber::new(1).unwrap()),
                note: "objective written".into(),
                artifact_digest: None,
            },
        };
        let line = serde_json::to_string(&event).unwrap();
        let value: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(value["seq"], 2);
        assert_eq!(value["timestamp"], "2026-01-02T03:04:05Z");
        assert_eq!(value["kind"], "step_completed");
        assert_eq!(value["payload"]["note"], "objective written");
        let back: JournalEvent = serde_json::from_str(&line).unwrap();
        assert_eq!(back, event);
    }

    #[test]
    fn unit_kinds_round_trip() {
        let event = JournalEvent {
            seq: 9,
            timestamp: "2026-01-02T03:04:05Z".parse().unwrap(),
            kind: EventKind::CycleRestarted,
        };
        let line = serde_json::to_string(&event).unwrap();
        let back: JournalEvent = serde_json::from_str(&line).unwrap();
        assert_eq!(back, event);
    }
}
