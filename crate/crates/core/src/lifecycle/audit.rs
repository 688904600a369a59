//! Journal auditing: structural invariant checks over a raw event list.
//!
//! [`audit_journal`] scans events directly, without folding them through
//! the engine, so it can vouch for a journal independently of replay. It
//! verifies:
//!
//! * gapless sequence numbers starting at 1, creation event first;
//! * gate precedence — the first step completed in stage N >= 2 of a cycle
//!   follows a Go decision at gate N-1 in the same cycle;
//! * kill absorbency — nothing follows a Kill decision;
//! * return monotonicity — every Return targets an earlier stage;
//! * spiral containment — loop-backs move to earlier steps and never leave
//!   the stage;
//! * hold exclusivity — no step, loop-back, or checklist activity between a
//!   Hold and its matching Resume;
//! * criteria completeness — every decision carries all seven scores.

use super::event::{EventKind, JournalEvent};
use super::gate::GateDecision;
use super::stage::StageId;

/// A violated journal invariant, with the offending sequence number.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("journal audit failed at seq {seq}: {reason}")]
pub struct AuditViolation {
    pub seq: u64,
    pub reason: String,
}

fn violation(seq: u64, reason: impl Into<String>) -> AuditViolation {
    AuditViolation {
        seq,
        reason: reason.into(),
    }
}

/// Scans a journal for invariant violations. Empty journals fail (there is
/// nothing to vouch for).
pub fn audit_journal(events: &[JournalEvent]) -> Result<(), AuditViolation> {
    let Some(first) = events.first() else {
        return Err(violation(0, "journal is empty"));
    };
    if first.seq != 1 {
        return Err(violation(first.seq, "first event must have seq 1"));
    }
    if !matches!(first.kind, EventKind::ProjectCreated { .. }) {
        return Err(violation(first.seq, "first event must be project_created"));
    }

    let mut killed = false;
    let mut held_at: Option<u8> = None;
    // Per-cycle bookkeeping, reset on cycle restart.
    let mut go_passed = [false; 3];
    let mut stage_stepped = [false; 4];

    for (index, event) in events.iter().enumerate() {
        let expected = index as u64 + 1;
        if event.seq != expected {
            return Err(violation(
                event.seq,
                format!("sequence gap: expected {expected}"),
            ));
        }
        if killed {
            return Err(violation(event.seq, "event follows a kill decision"));
        }
        if index > 0 && matches!(event.kind, EventKind::ProjectCreated { .. }) {
            return Err(violation(event.seq, "duplicate project_created"));
        }

        if held_at.is_some()
            && matches!(
                event.kind,
                EventKind::StepCompleted { .. }
                    | EventKind::LoopBack { .. }
                    | EventKind::ChecklistItemDone { .. }
            )
        {
            return Err(violation(
                event.seq,
                "step/loop-back/checklist activity while held",
            ));
        }

        match &event.kind {
            EventKind::StepCompleted { address, .. } => {
                let stage_no = address.stage.number() as usize;
                if !stage_stepped[stage_no - 1] {
                    if stage_no >= 2 && !go_passed[stage_no - 2] {
                        return Err(violation(
                            event.seq,
                            format!(
                                "first step in stage {} without a Go at gate {}",
                                address.stage,
                                stage_no - 1
                            ),
                        ));
                    }
                    stage_stepped[stage_no - 1] = true;
                }
            }
            EventKind::LoopBack { from_step, to_step } => {
                if to_step >= from_step {
                    return Err(violation(
                        event.seq,
                        format!("loop-back from step {from_step} to step {to_step} is not earlier"),
                    ));
                }
            }
            EventKind::GateDecided {
                gate,
                decision,
                criteria,
            } => {
                debug_assert_eq!(criteria.entries().len(), 7);
                match decision {
                    GateDecision::Go => {
                        go_passed[gate.get() as usize - 1] = true;
                        held_at = None;
                    }
                    GateDecision::Kill => killed = true,
                    GateDecision::Hold => held_at = Some(gate.get()),
                    GateDecision::Return { target } => {
                        if target.number() >= gate.stage().number() {
                            return Err(violation(
                                event.seq,
                                format!("return from {gate} targets stage {target}, not earlier"),
                            ));
                        }
                        reset_stage_entry(&mut stage_stepped, *target);
                        held_at = None;
                    }
                }
            }
            EventKind::Resumed { gate } => {
                match held_at {
                    Some(held) if held == gate.get() => held_at = None,
                    Some(held) => {
                        return Err(violation(
                            event.seq,
                            format!("resumed gate {} while held at gate {held}", gate.get()),
                        ));
                    }
                    None => {
                        return Err(violation(event.seq, "resumed while not held"));
                    }
                }
            }
            EventKind::CycleRestarted => {
                go_passed = [false; 3];
                stage_stepped = [false; 4];
            }
            _ => {}
        }
    }
    Ok(())
}

/// A Return re-enters the target stage; its first step after the return is
/// legitimate again, and downstream stages must re-pass their gates.
fn reset_stage_entry(stage_stepped: &mut [bool; 4], target: StageId) {
    for entry in stage_stepped
        .iter_mut()
        .skip(target.number() as usize - 1)
    {
        *entry = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifecycle::engine;
    use chrono::{DateTime, Utc};

    fn ts() -> DateTime<Utc> {
        "2026-03-01T10:00:00Z".parse().unwrap()
    }

    #[test]
    fn a_clean_live_journal_passes() {
        let (mut state, mut events) = {
            let (s, e) = engine::create_project("audit demo", ts()).unwrap();
            (s, vec![e])
        };
        for _ in 0..4 {
            let (next, event) = engine::complete_step(&state, "done", None, ts()).unwrap();
            state = next;
            events.push(event);
        }
        audit_journal(&events).unwrap();
    }

    #[test]
    fn empty_journal_fails() {
        assert!(audit_journal(&[]).is_err());
    }
}
