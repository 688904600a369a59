//! Transition rules and journal replay.
//!
//! Every mutating operation funnels through [`apply`]: it validates one
//! event against the current state and produces the next state. Live calls
//! build the event and apply it; [`replay_journal`] folds a stored journal
//! through the same code path, so anything a live call would reject makes
//! replay fail at that sequence number.

use chrono::{DateTime, Utc};

use super::checklist::{template, TemplateId};
use super::event::{EventKind, IntraStageOutcome, JournalEvent};
use super::gate::{GateCriteria, GateDecision};
use super::stage::{GateId, StageId, StepAddress, StepNumber};
use super::state::{Position, ProjectId, ProjectState};
use super::LifecycleError;

/// Starts a project at K|V 1.1, cycle 1. The project id is a slug derived
/// from the name.
pub fn create_project(
    name: &str,
    at: DateTime<Utc>,
) -> Result<(ProjectState, JournalEvent), LifecycleError> {
    let project_id = ProjectId::derive_from_name(name)?;
    let event = JournalEvent {
        seq: 1,
        timestamp: at,
        kind: EventKind::ProjectCreated {
            project_id,
            name: name.to_string(),
        },
    };
    let state = apply(None, &event)?;
    Ok((state, event))
}

/// Completes the current step. Steps 1..3 advance within the stage; step 4
/// exits it (Stage I to its intra-stage gate, Stages II and III to their
/// gates, Stage IV to the cycle end).
pub fn complete_step(
    state: &ProjectState,
    note: &str,
    artifact_digest: Option<String>,
    at: DateTime<Utc>,
) -> Result<(ProjectState, JournalEvent), LifecycleError> {
    let address = match state.position {
        Position::AtStep { address, .. } => address,
        _ => return Err(invalid("complete_step", state)),
    };
    record(
        state,
        EventKind::StepCompleted {
            address,
            note: note.to_string(),
            artifact_digest,
        },
        at,
    )
}

/// Spirals back to an earlier step of the current stage.
pub fn loop_back(
    state: &ProjectState,
    target_step: StepNumber,
    at: DateTime<Utc>,
) -> Result<(ProjectState, JournalEvent), LifecycleError> {
    let from_step = match state.position {
        Position::AtStep { address, .. } => address.step,
        _ => return Err(invalid("loop_back", state)),
    };
    record(
        state,
        EventKind::LoopBack {
            from_step,
            to_step: target_step,
        },
        at,
    )
}

/// Resolves the Stage I intra-stage gate: proceed to Gate 1 or loop back
/// into the prototype spiral.
pub fn decide_intra_stage_gate(
    state: &ProjectState,
    outcome: IntraStageOutcome,
    at: DateTime<Utc>,
) -> Result<(ProjectState, JournalEvent), LifecycleError> {
    record(state, EventKind::IntraStageGateDecided { outcome }, at)
}

/// Records that a gate meeting convened, without deciding it. Position is
/// unchanged; the event exists for the audit trail.
pub fn open_gate(
    state: &ProjectState,
    gate: GateId,
    at: DateTime<Utc>,
) -> Result<(ProjectState, JournalEvent), LifecycleError> {
    record(state, EventKind::GateOpened { gate }, at)
}

/// Records a gate decision. All seven criteria must be scored; the
/// `GateCriteria` type makes partial scorecards unrepresentable.
pub fn decide_gate(
    state: &ProjectState,
    gate: GateId,
    decision: GateDecision,
    criteria: GateCriteria,
    at: DateTime<Utc>,
) -> Result<(ProjectState, JournalEvent), LifecycleError> {
    record(
        state,
        EventKind::GateDecided {
            gate,
            decision,
            criteria,
        },
        at,
    )
}

/// Reopens a held gate so a fresh decision can be recorded.
pub fn resume(
    state: &ProjectState,
    at: DateTime<Utc>,
) -> Result<(ProjectState, JournalEvent), LifecycleError> {
    let gate = match state.position {
        Position::Held { gate } => gate,
        _ => return Err(invalid("resume", state)),
    };
    record(state, EventKind::Resumed { gate }, at)
}

/// Starts the next waterfall pass after Stage IV completes.
pub fn restart_cycle(
    state: &ProjectState,
    at: DateTime<Utc>,
) -> Result<(ProjectState, JournalEvent), LifecycleError> {
    record(state, EventKind::CycleRestarted, at)
}

/// Marks a checklist item done at its bound position.
pub fn mark_checklist_item(
    state: &ProjectState,
    template_id: TemplateId,
    item: u8,
    note: &str,
    at: DateTime<Utc>,
) -> Result<(ProjectState, JournalEvent), LifecycleError> {
    record(
        state,
        EventKind::ChecklistItemDone {
            template: template_id,
            item,
            note: note.to_string(),
        },
        at,
    )
}

/// Left-folds a journal through the transition rules. The journal must
/// begin with `project_created` at seq 1 and be gapless; any event a live
/// call would have rejected fails replay at its seq.
pub fn replay_journal(events: &[JournalEvent]) -> Result<ProjectState, LifecycleError> {
    let mut state: Option<ProjectState> = None;
    for event in events {
        let expected = state.as_ref().map_or(1, |s| s.last_seq + 1);
        if event.seq != expected {
            return Err(LifecycleError::Replay {
                seq: event.seq,
                source: Box::new(LifecycleError::SequenceGap {
                    expected,
                    found: event.seq,
                }),
            });
        }
        state = Some(apply(state.as_ref(), event).map_err(|source| LifecycleError::Replay {
            seq: event.seq,
            source: Box::new(source),
        })?);
    }
    state.ok_or(LifecycleError::MissingCreation)
}

fn record(
    state: &ProjectState,
    kind: EventKind,
    at: DateTime<Utc>,
) -> Result<(ProjectState, JournalEvent), LifecycleError> {
    let event = JournalEvent {
        seq: state.last_seq + 1,
        timestamp: at,
        kind,
    };
    let next = apply(Some(state), &event)?;
    Ok((next, event))
}

fn invalid(op: &str, state: &ProjectState) -> LifecycleError {
    LifecycleError::InvalidTransition {
        op: op.to_string(),
        position: state.position.to_string(),
    }
}

/// Validates one event against the current state and applies it.
pub fn apply(
    state: Option<&ProjectState>,
    event: &JournalEvent,
) -> Result<ProjectState, LifecycleError> {
    let Some(state) = state else {
        return match &event.kind {
            EventKind::ProjectCreated { project_id, name } => {
                if name.trim().is_empty() {
                    return Err(LifecycleError::EmptyName);
                }
                Ok(ProjectState {
                    project_id: project_id.clone(),
                    name: name.clone(),
                    cycle: 1,
                    position: Position::AtStep {
                        address: StepAddress::new(StageId::I, StepNumber::FIRST),
                        spiral_iteration: 1,
                    },
                    last_seq: event.seq,
                    stage_iterations: [1, 0, 0, 0],
                    checklist_done: Default::default(),
                })
            }
            _ => Err(LifecycleError::MissingCreation),
        };
    };

    // Killed is absorbing: nothing may follow a kill decision.
    if state.position == Position::Killed {
        return Err(LifecycleError::InvalidTransition {
            op: event.kind.label().to_string(),
            position: state.position.to_string(),
        });
    }

    let mut next = state.clone();
    next.last_seq = event.seq;

    match &event.kind {
        EventKind::ProjectCreated { .. } => return Err(LifecycleError::UnexpectedCreation),

        EventKind::StepCompleted { address, .. } => {
            let (current, iteration) = match state.position {
                Position::AtStep {
                    address,
                    spiral_iteration,
                } => (address, spiral_iteration),
                _ => return Err(mismatch("step_completed", state)),
            };
            if *address != current {
                return Err(LifecycleError::AddressMismatch {
                    recorded: address.to_string(),
                    current: current.to_string(),
                });
            }
            next.position = match current.step.next() {
                Some(step) => Position::AtStep {
                    address: StepAddress::new(current.stage, step),
                    spiral_iteration: iteration,
                },
                None => match current.stage {
                    StageId::I => Position::AtIntraStageGate,
                    StageId::II => Position::AtGate {
                        gate: GateId::new_const(2),
                    },
                    StageId::III => Position::AtGate {
                        gate: GateId::new_const(3),
                    },
                    StageId::IV => Position::AtCycleEnd,
                },
            };
        }

        EventKind::LoopBack { from_step, to_step } => {
            let (current, iteration) = match state.position {
                Position::AtStep {
                    address,
                    spiral_iteration,
                } => (address, spiral_iteration),
                _ => return Err(mismatch("loop_back", state)),
            };
            if *from_step != current.step {
                return Err(LifecycleError::AddressMismatch {
                    recorded: format!("step {from_step}"),
                    current: current.to_string(),
                });
            }
            if *to_step >= current.step {
                return Err(LifecycleError::LoopBackTargetNotEarlier {
                    current: current.step,
                    target: *to_step,
                });
            }
            next.set_stage_position(current.stage, *to_step, iteration + 1);
        }

        EventKind::GateOpened { gate } => {
            let at_gate = match state.position {
                Position::AtGate { gate } => gate,
                _ => return Err(mismatch("gate_opened", state)),
            };
            if *gate != at_gate {
                return Err(LifecycleError::GateMismatch {
                    requested: *gate,
                    position: state.position.to_string(),
                });
            }
            // Position unchanged; the event only records the meeting.
        }

        EventKind::GateDecided { gate, decision, .. } => {
            let at_gate = match state.position {
                Position::AtGate { gate } => gate,
                _ => return Err(mismatch("gate_decided", state)),
            };
            if *gate != at_gate {
                return Err(LifecycleError::GateMismatch {
                    requested: *gate,
                    position: state.position.to_string(),
                });
            }
            match decision {
                GateDecision::Go => {
                    next.set_stage_position(gate.next_stage(), StepNumber::FIRST, 1);
                }
                GateDecision::Kill => {
                    next.position = Position::Killed;
                }
                GateDecision::Hold => {
                    next.position = Position::Held { gate: *gate };
                }
                GateDecision::Return { target } => {
                    if target.number() >= gate.stage().number() {
                        return Err(LifecycleError::ReturnTargetNotEarlier {
                            gate: *gate,
                            target: *target,
                        });
                    }
                    let iteration = next.stage_iteration(*target) + 1;
                    next.set_stage_position(*target, StepNumber::FIRST, iteration);
                }
            }
        }

        EventKind::IntraStageGateDecided { outcome } => {
            if state.position != Position::AtIntraStageGate {
                return Err(mismatch("intra_stage_gate_decided", state));
            }
            match outcome {
                IntraStageOutcome::Proceed => {
                    next.position = Position::AtGate {
                        gate: GateId::new_const(1),
                    };
                }
                IntraStageOutcome::LoopBack { to_step } => {
                    let iteration = state.stage_iteration(StageId::I) + 1;
                    next.set_stage_position(StageId::I, *to_step, iteration);
                }
            }
        }

        EventKind::ChecklistItemDone {
            template: template_id,
            item,
            ..
        } => {
            let Some(item_def) = template(*template_id).item(*item) else {
                return Err(LifecycleError::UnknownChecklistItem {
                    template: *template_id,
                    item: *item,
                });
            };
            if state.is_item_done(*template_id, *item) {
                return Err(LifecycleError::DuplicateChecklistItem {
                    template: *template_id,
                    item: *item,
                });
            }
            if !state.binding_matches(&item_def.binding) {
                return Err(LifecycleError::ChecklistBindingMismatch {
                    template: *template_id,
                    item: *item,
                    binding: item_def.binding.to_string(),
                    position: state.position.to_string(),
                });
            }
            next.checklist_done.insert((*template_id, *item));
        }

        EventKind::Resumed { gate } => {
            let held = match state.position {
                Position::Held { gate } => gate,
                _ => return Err(mismatch("resumed", state)),
            };
            if *gate != held {
                return Err(LifecycleError::GateMismatch {
                    requested: *gate,
                    position: state.position.to_string(),
                });
            }
            next.position = Position::AtGate { gate: held };
        }

        EventKind::CycleRestarted => {
            if state.position != Position::AtCycleEnd {
                return Err(mismatch("cycle_restarted", state));
            }
            next.cycle += 1;
            next.stage_iterations = [1, 0, 0, 0];
            next.checklist_done.clear();
            next.position = Position::AtStep {
                address: StepAddress::new(StageId::I, StepNumber::FIRST),
                spiral_iteration: 1,
            };
        }
    }

    Ok(next)
}

fn mismatch(op: &str, state: &ProjectState) -> LifecycleError {
    LifecycleError::InvalidTransition {
        op: op.to_string(),
        position: state.position.to_string(),
    }
}

impl ProjectState {
    fn set_stage_position(&mut self, stage: StageId, step: StepNumber, iteration: u32) {
        self.stage_iterations[(stage.number() - 1) as usize] = iteration;
        self.position = Position::AtStep {
            address: StepAddress::new(stage, step),
            spiral_iteration: iteration,
        };
    }
}
